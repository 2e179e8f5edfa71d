// Scratch profiler for collector-heavy flows (not part of the test suite).

use std::time::Instant;

use num_bigint::BigInt;
use num_traits::Signed;

use freenil::{petresco, NilpotentContext};

fn main() {
    for (q, c) in [(2u32, 3u32), (3, 3), (2, 4), (3, 4)] {
        let ctx = NilpotentContext::new(q, c);
        let n = ctx.rank();
        let xs: Vec<_> = (0..3)
            .map(|t| {
                let exps: Vec<BigInt> =
                    (0..n).map(|i| BigInt::from(((i as i64 + 3 * t) % 7) - 3)).collect();
                ctx.element_from_exponents(exps).unwrap()
            })
            .collect();
        let start = Instant::now();
        let r = petresco(&ctx, &xs, c).unwrap();
        let elapsed = start.elapsed();
        let sizes: Vec<String> = r
            .taus
            .iter()
            .map(|t| {
                let s: BigInt = t.exponents().iter().map(|e| e.abs()).sum();
                s.to_string()
            })
            .collect();
        println!("(q={q}, c={c}, N={n}): {elapsed:.2?}, tau letter sizes {sizes:?}");
    }
}
