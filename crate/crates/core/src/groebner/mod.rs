//! Groebner-basis engine and ideal/module calculus over the rationals.
//!
//! One Buchberger implementation drives both ideals (rank-one modules) and
//! submodules of free modules; elimination, intersection, quotient, and
//! saturation are built on top of it with tag variables and block orders.

mod engine;
mod ideal;
mod modvec;
mod module;

pub use engine::{groebner, normal_form};
pub use ideal::{
    extend_front, kernel_of_ring_map, lift_ideal_membership, poly_const, poly_int, poly_one,
    poly_var, subalgebra_membership, Ideal,
};
pub use modvec::{ModOrder, ModVec};
pub use module::{lift_module_membership, syzygies, Submodule};
