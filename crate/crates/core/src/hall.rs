//! Basic commutator sequences (Hall bases) and Witt numbers.
//!
//! The basis of weight <= c on q generators is produced by the working-set
//! construction: keep a set X of candidate commutators, repeatedly extract
//! the minimal element b (weight first, then the structural order on
//! [`CommutatorExpr`]), and replace X by the iterated brackets
//! `[a, b], [a, b, b], ...` of every remaining `a`, truncated at weight c.
//! The number of entries of each weight w equals the Witt number n(w, q).

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::words::CommutatorExpr;

/// One entry of a Hall basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasicCommutator {
    /// 1-based position in the basis.
    pub index: usize,
    pub weight: u32,
    pub expr: CommutatorExpr,
}

/// The basic sequence of weight <= `c` on `q` generators, in generation
/// order. Weights are nondecreasing and the first `q` entries are the
/// generators themselves.
#[derive(Clone, Debug)]
pub struct HallBasis {
    q: u32,
    c: u32,
    entries: Vec<BasicCommutator>,
    position: HashMap<CommutatorExpr, usize>,
}

impl HallBasis {
    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn class(&self) -> u32 {
        self.c
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[BasicCommutator] {
        &self.entries
    }

    /// 0-based position of an expression in the basis, if it is an entry.
    pub fn position(&self, expr: &CommutatorExpr) -> Option<usize> {
        self.position.get(expr).copied()
    }

    pub fn weight_of(&self, idx: usize) -> u32 {
        self.entries[idx].weight
    }

    pub fn expr_of(&self, idx: usize) -> &CommutatorExpr {
        &self.entries[idx].expr
    }

    /// JSON serialization: array of `{"index", "weight", "expr"}`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.entries
                .iter()
                .map(|e| {
                    serde_json::json!({
                        "index": e.index,
                        "weight": e.weight,
                        "expr": e.expr.render(),
                    })
                })
                .collect(),
        )
    }
}

/// Generates the basic sequence of weight <= `c` on `q >= 2` generators.
///
/// Deterministic: ties within a weight are broken by the structural order
/// on [`CommutatorExpr`], and the result for class `c` extends the result
/// for class `c - 1`.
pub fn generate_basis(q: u32, c: u32) -> HallBasis {
    assert!(q >= 2, "need at least two generators");
    assert!(c >= 1, "class must be at least 1");

    let mut working: BTreeSet<CommutatorExpr> =
        (1..=q).map(CommutatorExpr::leaf).collect();
    let mut entries: Vec<BasicCommutator> = Vec::new();
    let mut position = HashMap::new();

    while let Some(b) = working.pop_first() {
        let snapshot: Vec<CommutatorExpr> = working.iter().cloned().collect();
        for a in snapshot {
            let mut cur = a;
            loop {
                cur = CommutatorExpr::bracket(cur, b.clone());
                if cur.weight() > c {
                    break;
                }
                working.insert(cur.clone());
            }
        }
        let index = entries.len() + 1;
        position.insert(b.clone(), index - 1);
        entries.push(BasicCommutator { index, weight: b.weight(), expr: b });
    }

    HallBasis { q, c, entries, position }
}

/// Moebius function: (-1)^r for a product of r distinct primes, 0 otherwise.
pub fn moebius(d: u64) -> i64 {
    assert!(d >= 1);
    let mut n = d;
    let mut r = 0i64;
    let mut f = 2u64;
    while f * f <= n {
        if n % f == 0 {
            n /= f;
            if n % f == 0 {
                return 0;
            }
            r += 1;
        }
        f += 1;
    }
    if n > 1 {
        r += 1;
    }
    if r % 2 == 0 { 1 } else { -1 }
}

/// Witt number n(w, q) = (1/w) * sum over d | w of moebius(d) * q^(w/d).
/// The division is exact.
pub fn witt_number(w: u32, q: u32) -> BigInt {
    assert!(w >= 1 && q >= 1);
    let mut sum = BigInt::zero();
    for d in 1..=w {
        if w % d == 0 {
            sum += BigInt::from(moebius(d as u64)) * BigInt::from(q).pow(w / d);
        }
    }
    let (quot, rem) = sum.div_rem(&BigInt::from(w));
    debug_assert!(rem.is_zero(), "Witt sum must be divisible by the weight");
    quot
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::CommutatorExpr as E;

    #[test]
    fn moebius_small_values() {
        assert_eq!(moebius(1), 1);
        assert_eq!(moebius(2), -1);
        assert_eq!(moebius(3), -1);
        assert_eq!(moebius(4), 0);
        assert_eq!(moebius(6), 1);
        assert_eq!(moebius(12), 0);
        assert_eq!(moebius(30), -1);
    }

    #[test]
    fn witt_spot_values() {
        assert_eq!(witt_number(1, 2), BigInt::from(2));
        assert_eq!(witt_number(1, 5), BigInt::from(5));
        // (4 - 2) / 2
        assert_eq!(witt_number(2, 2), BigInt::from(1));
        // (64 - 8 - 4 + 2) / 6
        assert_eq!(witt_number(6, 2), BigInt::from(9));
        assert_eq!(witt_number(3, 2), BigInt::from(2));
        assert_eq!(witt_number(3, 3), BigInt::from(8));
    }

    #[test]
    fn basis_class_one_is_generators() {
        let b = generate_basis(2, 1);
        assert_eq!(b.len(), 2);
        assert_eq!(b.entries()[0].expr, E::leaf(1));
        assert_eq!(b.entries()[1].expr, E::leaf(2));
    }

    #[test]
    fn basis_class_two_adds_single_bracket() {
        let b = generate_basis(2, 2);
        assert_eq!(b.len(), 3);
        assert_eq!(b.entries()[2].expr, E::bracket(E::leaf(2), E::leaf(1)));
        assert_eq!(b.entries()[2].weight, 2);
    }

    #[test]
    fn basis_class_three_weight_three_entries() {
        let b = generate_basis(2, 3);
        assert_eq!(b.len(), 5);
        let c21 = E::bracket(E::leaf(2), E::leaf(1));
        assert_eq!(b.entries()[3].expr, E::bracket(c21.clone(), E::leaf(1)));
        assert_eq!(b.entries()[4].expr, E::bracket(c21, E::leaf(2)));
    }

    #[test]
    fn weight_counts_match_witt_numbers() {
        for q in [2u32, 3] {
            let c = if q == 2 { 6 } else { 5 };
            let basis = generate_basis(q, c);
            for w in 1..=c {
                let count = basis.entries().iter().filter(|e| e.weight == w).count();
                assert_eq!(
                    BigInt::from(count),
                    witt_number(w, q),
                    "count mismatch at w={w}, q={q}"
                );
            }
        }
    }

    #[test]
    fn weights_nondecreasing_and_deterministic() {
        let a = generate_basis(3, 4);
        let b = generate_basis(3, 4);
        assert_eq!(a.entries(), b.entries());
        for pair in a.entries().windows(2) {
            assert!(pair[0].weight <= pair[1].weight);
        }
    }

    #[test]
    fn prefix_stability_across_class() {
        let lo = generate_basis(2, 4);
        let hi = generate_basis(2, 5);
        assert_eq!(lo.entries(), &hi.entries()[..lo.len()]);
    }

    #[test]
    fn position_lookup_round_trips() {
        let b = generate_basis(2, 4);
        for e in b.entries() {
            assert_eq!(b.position(&e.expr), Some(e.index - 1));
        }
    }
}
