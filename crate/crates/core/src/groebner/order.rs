use std::cmp::Ordering;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum OrderKind {
    Lex,
    Grevlex,
}

/// A monomial order on exponent vectors.
///
/// `priority[0]` is the largest variable. Orders built for internal
/// elimination carry extra trailing slots (auxiliary variables) that are
/// compared first; such orders never leave the crate.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct MonomialOrder {
    kind: OrderKind,
    priority: Vec<usize>,
    #[serde(skip)]
    elim_tail: usize,
}

impl MonomialOrder {
    pub fn lex(nvars: usize) -> Self {
        MonomialOrder {
            kind: OrderKind::Lex,
            priority: (0..nvars).collect(),
            elim_tail: 0,
        }
    }

    pub fn grevlex(nvars: usize) -> Self {
        MonomialOrder {
            kind: OrderKind::Grevlex,
            priority: (0..nvars).collect(),
            elim_tail: 0,
        }
    }

    /// An order with an explicit variable priority; `priority` must be a
    /// permutation of `0..nvars`.
    pub fn with_priority(kind: OrderKind, priority: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; priority.len()];
        for &i in &priority {
            if i >= priority.len() || std::mem::replace(&mut seen[i], true) {
                return Err(Error::precondition("variable priority must be a permutation"));
            }
        }
        Ok(MonomialOrder {
            kind,
            priority,
            elim_tail: 0,
        })
    }

    pub fn kind(&self) -> OrderKind {
        self.kind
    }

    pub fn priority(&self) -> &[usize] {
        &self.priority
    }

    pub fn num_vars(&self) -> usize {
        self.priority.len()
    }

    /// The same order on the original variables with `k` auxiliary
    /// variables appended, each larger than every monomial in the originals.
    pub(crate) fn eliminating_tail(&self, k: usize) -> Self {
        MonomialOrder {
            elim_tail: k,
            ..self.clone()
        }
    }

    pub fn cmp(&self, a: &[u32], b: &[u32]) -> Ordering {
        let n = self.priority.len();
        if self.elim_tail > 0 {
            let ta: u64 = a[n..].iter().map(|&e| e as u64).sum();
            let tb: u64 = b[n..].iter().map(|&e| e as u64).sum();
            let tail = ta.cmp(&tb).then_with(|| a[n..].cmp(&b[n..]));
            if tail != Ordering::Equal {
                return tail;
            }
        }
        match self.kind {
            OrderKind::Lex => {
                for &i in &self.priority {
                    if a[i] != b[i] {
                        return a[i].cmp(&b[i]);
                    }
                }
                Ordering::Equal
            }
            OrderKind::Grevlex => {
                let da: u64 = self.priority.iter().map(|&i| a[i] as u64).sum();
                let db: u64 = self.priority.iter().map(|&i| b[i] as u64).sum();
                if da != db {
                    return da.cmp(&db);
                }
                for &i in self.priority.iter().rev() {
                    if a[i] != b[i] {
                        return b[i].cmp(&a[i]);
                    }
                }
                Ordering::Equal
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn lex_and_grevlex_basics() {
        let lex = MonomialOrder::lex(2);
        assert_eq!(lex.cmp(&[1, 0], &[0, 5]), Ordering::Greater);
        let grevlex = MonomialOrder::grevlex(3);
        // x*z < y^2 in grevlex with x > y > z.
        assert_eq!(grevlex.cmp(&[1, 0, 1], &[0, 2, 0]), Ordering::Less);
        assert_eq!(grevlex.cmp(&[0, 0, 3], &[1, 1, 0]), Ordering::Greater);
        let swapped = MonomialOrder::with_priority(OrderKind::Lex, vec![1, 0]).unwrap();
        assert_eq!(swapped.cmp(&[1, 0], &[0, 1]), Ordering::Less);
        assert!(MonomialOrder::with_priority(OrderKind::Lex, vec![0, 0]).is_err());
    }

    #[test]
    fn elimination_tail_dominates() {
        let o = MonomialOrder::grevlex(2).eliminating_tail(1);
        assert_eq!(o.cmp(&[0, 0, 1], &[9, 9, 0]), Ordering::Greater);
        assert_eq!(o.cmp(&[1, 0, 1], &[0, 1, 1]), Ordering::Greater);
    }

    fn exps() -> impl Strategy<Value = Vec<u32>> {
        prop::collection::vec(0u32..4, 3)
    }

    proptest! {
        #[test]
        fn orders_are_multiplicative(a in exps(), b in exps(), c in exps(), lex in any::<bool>()) {
            let o = if lex { MonomialOrder::lex(3) } else { MonomialOrder::grevlex(3) };
            let ac: Vec<u32> = a.iter().zip(&c).map(|(x, y)| x + y).collect();
            let bc: Vec<u32> = b.iter().zip(&c).map(|(x, y)| x + y).collect();
            prop_assert_eq!(o.cmp(&a, &b), o.cmp(&ac, &bc));
            prop_assert!(o.cmp(&ac, &a) != Ordering::Less);
            prop_assert_eq!(o.cmp(&a, &b) == Ordering::Equal, a == b);
        }
    }
}
