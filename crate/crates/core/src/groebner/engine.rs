use std::cmp::Ordering;

use crate::polycore::{Field, Monomial};

use super::modvec::{ModOrder, ModVec};

/// Full normal form of `v` against `basis` under the module order: every term
/// of the result is irreducible by the leading terms of the basis.
pub fn normal_form<F: Field>(v: &ModVec<F>, basis: &[ModVec<F>], order: &ModOrder) -> ModVec<F> {
    let leads: Vec<Option<(usize, Monomial, F::El)>> =
        basis.iter().map(|b| b.leading(order)).collect();
    normal_form_with(v, basis, &leads, order)
}

fn normal_form_with<F: Field>(
    v: &ModVec<F>,
    basis: &[ModVec<F>],
    leads: &[Option<(usize, Monomial, F::El)>],
    order: &ModOrder,
) -> ModVec<F> {
    let field = v.field().clone();
    let mut work = v.clone();
    let mut out = ModVec::zero(
        field.clone(),
        v.vars().clone(),
        v.mono_order().clone(),
        v.rank(),
    );
    'outer: while let Some((c, m, coef)) = work.leading(order) {
        for (b, lead) in basis.iter().zip(leads) {
            let Some((bc, bm, bcoef)) = lead else { continue };
            if *bc == c && bm.divides(&m) {
                let q = bm.div_into(&m);
                let factor = field.div(&coef, bcoef);
                work = work.sub(&b.mul_term(&q, &factor));
                continue 'outer;
            }
        }
        let t = work.term_vec(c, &m, &coef);
        out = out.add(&t);
        work = work.sub(&t);
    }
    out
}

#[derive(Debug, Clone)]
struct Pair {
    i: usize,
    j: usize,
    comp: usize,
    lcm: Monomial,
}

fn pair_key_cmp(a: &Pair, b: &Pair, order: &ModOrder) -> Ordering {
    a.lcm
        .total_degree()
        .cmp(&b.lcm.total_degree())
        .then_with(|| order.inner().cmp(&a.lcm, &b.lcm))
        .then_with(|| a.comp.cmp(&b.comp))
        .then_with(|| a.i.cmp(&b.i))
        .then_with(|| a.j.cmp(&b.j))
}

/// Reduced Groebner basis of the submodule generated by `gens`, deterministic
/// for a fixed input ordering: Buchberger with Gebauer-Moeller pair pruning.
pub fn groebner<F: Field>(gens: &[ModVec<F>], order: &ModOrder) -> Vec<ModVec<F>> {
    let mut basis: Vec<ModVec<F>> = Vec::new();
    let mut leads: Vec<(usize, Monomial, F::El)> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();
    let rank = gens.first().map_or(1, |g| g.rank());

    for g in gens {
        if !g.is_zero() {
            let h = g.monic(order);
            install(&mut basis, &mut leads, &mut pairs, h, order, rank);
        }
    }

    while !pairs.is_empty() {
        let best = pairs
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| pair_key_cmp(a, b, order))
            .map(|(idx, _)| idx)
            .unwrap();
        let pair = pairs.swap_remove(best);
        let s = s_vector(&basis, &leads, &pair);
        let lead_options: Vec<Option<(usize, Monomial, F::El)>> =
            leads.iter().cloned().map(Some).collect();
        let h = normal_form_with(&s, &basis, &lead_options, order);
        if !h.is_zero() {
            let h = h.monic(order);
            install(&mut basis, &mut leads, &mut pairs, h, order, rank);
        }
    }

    reduce_basis(basis, leads, order)
}

/// S-vector of a pair of monic basis elements.
fn s_vector<F: Field>(
    basis: &[ModVec<F>],
    leads: &[(usize, Monomial, F::El)],
    pair: &Pair,
) -> ModVec<F> {
    let field = basis[pair.i].field().clone();
    let one = field.one();
    let (_, mi, _) = &leads[pair.i];
    let (_, mj, _) = &leads[pair.j];
    let a = basis[pair.i].mul_term(&mi.div_into(&pair.lcm), &one);
    let b = basis[pair.j].mul_term(&mj.div_into(&pair.lcm), &one);
    a.sub(&b)
}

/// Add `h` to the basis, pruning the pair queue Gebauer-Moeller style.
fn install<F: Field>(
    basis: &mut Vec<ModVec<F>>,
    leads: &mut Vec<(usize, Monomial, F::El)>,
    pairs: &mut Vec<Pair>,
    h: ModVec<F>,
    order: &ModOrder,
    rank: usize,
) {
    let t = basis.len();
    let lead_t = h.leading(order).expect("nonzero element");

    let mut cands: Vec<Pair> = Vec::new();
    for (i, (ci, mi, _)) in leads.iter().enumerate() {
        if *ci == lead_t.0 {
            cands.push(Pair { i, j: t, comp: *ci, lcm: mi.lcm(&lead_t.1) });
        }
    }

    // drop candidates whose lcm is a proper multiple of another candidate's lcm
    let mut keep_flags = vec![true; cands.len()];
    for a in 0..cands.len() {
        for b in 0..cands.len() {
            if a != b
                && keep_flags[b]
                && cands[b].lcm.divides(&cands[a].lcm)
                && cands[b].lcm != cands[a].lcm
            {
                keep_flags[a] = false;
                break;
            }
        }
    }
    let survivors: Vec<Pair> = cands
        .into_iter()
        .zip(keep_flags)
        .filter(|(_, k)| *k)
        .map(|(p, _)| p)
        .collect();

    // group equal lcms: keep one representative, or none when some member has
    // coprime leading monomials (valid for ideals, i.e. rank one)
    let mut chosen: Vec<Pair> = Vec::new();
    let mut used = vec![false; survivors.len()];
    for a in 0..survivors.len() {
        if used[a] {
            continue;
        }
        let mut group = vec![a];
        for b in a + 1..survivors.len() {
            if !used[b] && survivors[b].lcm == survivors[a].lcm {
                group.push(b);
                used[b] = true;
            }
        }
        let coprime_hit = rank == 1
            && group.iter().any(|&g| {
                let (_, mi, _) = &leads[survivors[g].i];
                mi.is_coprime_with(&lead_t.1)
            });
        if !coprime_hit {
            chosen.push(survivors[group[0]].clone());
        }
    }

    // chain criterion against existing pairs
    pairs.retain(|p| {
        if p.comp != lead_t.0 || !lead_t.1.divides(&p.lcm) {
            return true;
        }
        let (_, mi, _) = &leads[p.i];
        let (_, mj, _) = &leads[p.j];
        mi.lcm(&lead_t.1) == p.lcm || mj.lcm(&lead_t.1) == p.lcm
    });

    pairs.extend(chosen);
    basis.push(h);
    leads.push(lead_t);
}

/// Minimalize and tail-reduce: unique reduced basis, sorted by decreasing lead.
fn reduce_basis<F: Field>(
    basis: Vec<ModVec<F>>,
    leads: Vec<(usize, Monomial, F::El)>,
    order: &ModOrder,
) -> Vec<ModVec<F>> {
    let n = basis.len();
    let mut kept = vec![true; n];
    for i in 0..n {
        if !kept[i] {
            continue;
        }
        for j in 0..n {
            if i == j || !kept[j] {
                continue;
            }
            let (ci, mi, _) = &leads[i];
            let (cj, mj, _) = &leads[j];
            if ci == cj && mj.divides(mi) && (mj != mi || j < i) {
                kept[i] = false;
                break;
            }
        }
    }
    let minimal: Vec<ModVec<F>> = basis
        .into_iter()
        .zip(&kept)
        .filter(|(_, k)| **k)
        .map(|(b, _)| b)
        .collect();

    let mut reduced: Vec<ModVec<F>> = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<ModVec<F>> = minimal
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, b)| b.clone())
            .collect();
        let r = normal_form(&minimal[i], &others, order);
        debug_assert!(!r.is_zero(), "minimal element reduced to zero");
        reduced.push(r.monic(order));
    }

    reduced.sort_by(|a, b| {
        let la = a.leading(order).expect("nonzero");
        let lb = b.leading(order).expect("nonzero");
        order.cmp((lb.0, &lb.1), (la.0, &la.1))
    });
    reduced
}
