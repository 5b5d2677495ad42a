use std::cmp::Ordering;

use super::Monomial;

/// Total monomial order compatible with multiplication.
///
/// `Block` compares the first `split` exponents under `left`, then the rest
/// under `right`; with the dominant block first it is an elimination order for
/// the leading variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum MonomialOrder {
    Lex,
    GrevLex,
    Block {
        split: usize,
        left: Box<MonomialOrder>,
        right: Box<MonomialOrder>,
    },
}

impl MonomialOrder {
    /// Elimination order for the first `split` variables, graded within blocks.
    pub fn elim(split: usize) -> Self {
        MonomialOrder::Block {
            split,
            left: Box::new(MonomialOrder::GrevLex),
            right: Box::new(MonomialOrder::GrevLex),
        }
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        self.cmp_slices(a.exps(), b.exps())
    }

    fn cmp_slices(&self, a: &[u32], b: &[u32]) -> Ordering {
        match self {
            MonomialOrder::Lex => {
                for (x, y) in a.iter().zip(b) {
                    match x.cmp(y) {
                        Ordering::Equal => continue,
                        ord => return ord,
                    }
                }
                Ordering::Equal
            }
            MonomialOrder::GrevLex => {
                let da: u32 = a.iter().sum();
                let db: u32 = b.iter().sum();
                match da.cmp(&db) {
                    Ordering::Equal => {}
                    ord => return ord,
                }
                for (x, y) in a.iter().zip(b).rev() {
                    match x.cmp(y) {
                        Ordering::Equal => continue,
                        // smaller exponent in the last differing position wins
                        ord => return ord.reverse(),
                    }
                }
                Ordering::Equal
            }
            MonomialOrder::Block { split, left, right } => {
                let s = (*split).min(a.len());
                match left.cmp_slices(&a[..s], &b[..s]) {
                    Ordering::Equal => right.cmp_slices(&a[s..], &b[s..]),
                    ord => ord,
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::Monomial;
    use super::*;
    use std::cmp::Ordering;

    fn m(exps: &[u32]) -> Monomial {
        Monomial::new(exps.to_vec())
    }

    #[test]
    fn lex_compares_leftmost_first() {
        let o = MonomialOrder::Lex;
        assert_eq!(o.cmp(&m(&[1, 0]), &m(&[0, 5])), Ordering::Greater);
        assert_eq!(o.cmp(&m(&[1, 2]), &m(&[1, 3])), Ordering::Less);
    }

    #[test]
    fn grevlex_prefers_total_degree() {
        let o = MonomialOrder::GrevLex;
        assert_eq!(o.cmp(&m(&[1, 0]), &m(&[0, 5])), Ordering::Less);
        // same degree: smaller exponent in the last differing position wins
        assert_eq!(o.cmp(&m(&[2, 0, 1]), &m(&[1, 2, 0])), Ordering::Less);
        assert_eq!(o.cmp(&m(&[1, 1, 1]), &m(&[1, 1, 1])), Ordering::Equal);
    }

    #[test]
    fn block_order_eliminates_left_block() {
        // variables 0..2 dominate variables 2..
        let o = MonomialOrder::elim(2);
        assert_eq!(o.cmp(&m(&[0, 1, 0]), &m(&[0, 0, 9])), Ordering::Greater);
        assert_eq!(o.cmp(&m(&[0, 0, 3]), &m(&[0, 0, 2])), Ordering::Greater);
    }
}
