//! Shared helpers for the integration suites: seeded random inputs and a
//! fraction-free integer rank computation used as an independent oracle.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use freenil::{GroupElement, NilpotentContext, Word};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random freely reduced word: up to `max_letters` letters over q
/// generators with exponents in [-max_exp, max_exp] \ {0}.
pub fn random_word(rng: &mut ChaCha8Rng, q: u32, max_letters: usize, max_exp: i64) -> Word {
    let n = rng.random_range(0..=max_letters);
    let letters = (0..n).map(|_| {
        let g = freenil::Gen::new(rng.random_range(1..=q));
        let mut e = 0i64;
        while e == 0 {
            e = rng.random_range(-max_exp..=max_exp);
        }
        (g, BigInt::from(e))
    });
    Word::from_letters(letters)
}

/// Like `random_word` but never the identity.
pub fn random_nontrivial_word(
    rng: &mut ChaCha8Rng,
    q: u32,
    max_letters: usize,
    max_exp: i64,
) -> Word {
    loop {
        let w = random_word(rng, q, max_letters, max_exp);
        if !w.is_identity() {
            return w;
        }
    }
}

/// Random normal form with exponents in [-bound, bound].
pub fn random_element(rng: &mut ChaCha8Rng, ctx: &NilpotentContext, bound: i64) -> GroupElement {
    let exps = (0..ctx.rank())
        .map(|_| BigInt::from(rng.random_range(-bound..=bound)))
        .collect();
    ctx.element_from_exponents(exps).unwrap()
}

/// The Hall-Witt word `[x,y^-1,z]^y [y,z^-1,x]^z [z,x^-1,y]^x`.
pub fn hall_witt_word(x: &Word, y: &Word, z: &Word) -> Word {
    let part =
        |a: &Word, b: &Word, c: &Word| a.commutator(&b.inverse()).commutator(c).conjugate(b);
    part(x, y, z).concat(&part(y, z, x)).concat(&part(z, x, y))
}

/// `[x, yz] * ([x,z][x,y]^z)^-1`; trivial in every group.
pub fn expansion_identity_first(x: &Word, y: &Word, z: &Word) -> Word {
    let lhs = x.commutator(&y.concat(z));
    let rhs = x.commutator(z).concat(&x.commutator(y).conjugate(z));
    lhs.concat(&rhs.inverse())
}

/// `[xy, z] * ([x,z]^y [y,z])^-1`; trivial in every group.
pub fn expansion_identity_second(x: &Word, y: &Word, z: &Word) -> Word {
    let lhs = x.concat(y).commutator(z);
    let rhs = x.commutator(z).conjugate(y).concat(&y.commutator(z));
    lhs.concat(&rhs.inverse())
}

/// Exact rank of an integer matrix by fraction-free (Bareiss) elimination.
pub fn integer_rank(mut m: Vec<Vec<BigInt>>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut rank = 0;
    let mut prev_pivot = BigInt::from(1);
    let mut col = 0;
    while rank < rows && col < cols {
        // Find a pivot row.
        let pivot_row = (rank..rows).find(|&r| !m[r][col].is_zero());
        let Some(pr) = pivot_row else {
            col += 1;
            continue;
        };
        m.swap(rank, pr);
        let pivot = m[rank][col].clone();
        for r in rank + 1..rows {
            for c in col + 1..cols {
                let num = &pivot * &m[r][c] - &m[r][col] * &m[rank][c];
                m[r][c] = num / &prev_pivot;
            }
            m[r][col] = BigInt::zero();
        }
        prev_pivot = pivot;
        rank += 1;
        col += 1;
    }
    rank
}

/// Collects criterion failures and prints the single pass/fail line.
pub struct Criterion {
    name: String,
    start: std::time::Instant,
    budget: std::time::Duration,
    failures: Vec<String>,
}

impl Criterion {
    pub fn new(name: &str, budget_secs: u64) -> Self {
        Criterion {
            name: name.to_string(),
            start: std::time::Instant::now(),
            budget: std::time::Duration::from_secs(budget_secs),
            failures: Vec::new(),
        }
    }

    pub fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(msg());
        }
    }

    pub fn finish(self) {
        let elapsed = self.start.elapsed();
        let within = elapsed <= self.budget;
        if self.failures.is_empty() && within {
            println!("{}: PASS ({:.2?})", self.name, elapsed);
        } else {
            println!("{}: FAIL ({:.2?})", self.name, elapsed);
            for f in self.failures.iter().take(10) {
                println!("  - {f}");
            }
            if !within {
                println!("  - exceeded time budget {:?}", self.budget);
            }
            panic!("{} failed", self.name);
        }
    }
}
