//! Polynomial group law in Mal'cev coordinates.
//!
//! Coordinates are the Hall-basis exponents of the collector's normal
//! forms. The multiplication polynomials zeta_i and the power polynomials
//! omega_i are integer-valued, so they are integer linear combinations of
//! products of binomial terms C(var, r). Coefficients in that basis are
//! exact multivariate forward differences of the collector's arithmetic,
//! evaluated on a small integer grid; the fitted law is then verified on
//! a disjoint random set of points and, at evaluation time, works for
//! arbitrary rational coordinates.
//!
//! Weighted-degree bound: a variable attached to basis entry b_j carries
//! weight wt(b_j); zeta_i is fitted within weighted degree wt(b_i) in the
//! xi's and eta's jointly, omega_i within weighted degree wt(b_i) in the
//! xi's with the lambda exponent bounded by wt(b_i) separately. The bound
//! is validated by the held-out check and reported as a fit failure if it
//! ever proves too small.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::collect::NilpotentContext;
use crate::error::{Error, Result};
use crate::scalar::{binomial_int, binomial_rat};

/// A variable of the group-law polynomials. Indices are 1-based.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LawVar {
    Xi(usize),
    Eta(usize),
    Lambda,
}

impl fmt::Display for LawVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LawVar::Xi(i) => write!(f, "xi_{i}"),
            LawVar::Eta(i) => write!(f, "eta_{i}"),
            LawVar::Lambda => write!(f, "lambda"),
        }
    }
}

impl LawVar {
    fn parse(s: &str) -> Result<LawVar> {
        let bad = || Error::Deserialize(format!("unknown variable {s:?}"));
        if s == "lambda" {
            return Ok(LawVar::Lambda);
        }
        if let Some(i) = s.strip_prefix("xi_") {
            return Ok(LawVar::Xi(i.parse().map_err(|_| bad())?));
        }
        if let Some(i) = s.strip_prefix("eta_") {
            return Ok(LawVar::Eta(i.parse().map_err(|_| bad())?));
        }
        Err(bad())
    }
}

/// One term `coeff * prod_j C(var_j, r_j)` of an integer-valued polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinomialTerm {
    pub coeff: BigInt,
    /// Sorted by variable; every r >= 1.
    pub factors: Vec<(LawVar, u32)>,
}

/// An integer-valued polynomial in the binomial basis.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct IntPolynomial {
    pub terms: Vec<BinomialTerm>,
}

impl IntPolynomial {
    /// Evaluates at rational arguments. Missing variables default to zero
    /// via the lookup closure.
    pub fn eval<F>(&self, lookup: F) -> BigRational
    where
        F: Fn(LawVar) -> BigRational,
    {
        let mut acc = BigRational::zero();
        for t in &self.terms {
            let mut prod = BigRational::from_integer(t.coeff.clone());
            for (v, r) in &t.factors {
                prod *= binomial_rat(&lookup(*v), *r);
                if prod.is_zero() {
                    break;
                }
            }
            acc += prod;
        }
        acc
    }

    /// Largest xi/eta index appearing; `None` if none do.
    pub fn max_coordinate_index(&self) -> Option<usize> {
        self.terms
            .iter()
            .flat_map(|t| t.factors.iter())
            .filter_map(|(v, _)| match v {
                LawVar::Xi(i) | LawVar::Eta(i) => Some(*i),
                LawVar::Lambda => None,
            })
            .max()
    }

    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|t| {
                let factors: Vec<String> = t
                    .factors
                    .iter()
                    .map(|(v, r)| if *r == 1 { format!("C({v},1)") } else { format!("C({v},{r})") })
                    .collect();
                if factors.is_empty() {
                    t.coeff.to_string()
                } else if t.coeff.is_one() {
                    factors.join("*")
                } else {
                    format!("{}*{}", t.coeff, factors.join("*"))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.terms
                .iter()
                .map(|t| {
                    serde_json::json!({
                        "coeff": t.coeff.to_string(),
                        "factors": t.factors.iter().map(|(v, r)| {
                            serde_json::json!({ "var": v.to_string(), "r": r })
                        }).collect::<Vec<_>>(),
                    })
                })
                .collect(),
        )
    }

    pub fn from_json(v: &serde_json::Value) -> Result<IntPolynomial> {
        let bad = |m: &str| Error::Deserialize(format!("polynomial: {m}"));
        let arr = v.as_array().ok_or_else(|| bad("expected an array of terms"))?;
        let mut terms = Vec::with_capacity(arr.len());
        for t in arr {
            let coeff: BigInt = t["coeff"]
                .as_str()
                .ok_or_else(|| bad("missing coeff"))?
                .parse()
                .map_err(|_| bad("bad coeff"))?;
            let mut factors = Vec::new();
            for f in t["factors"].as_array().ok_or_else(|| bad("missing factors"))? {
                let var = LawVar::parse(f["var"].as_str().ok_or_else(|| bad("missing var"))?)?;
                let r = f["r"].as_u64().ok_or_else(|| bad("missing r"))? as u32;
                factors.push((var, r));
            }
            terms.push(BinomialTerm { coeff, factors });
        }
        Ok(IntPolynomial { terms })
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// The fitted group law of a nilpotent context: multiplication polynomials
/// zeta_1..zeta_N and power polynomials omega_1..omega_N. zeta_i depends
/// only on xi_1..xi_i, eta_1..eta_i; omega_i only on lambda, xi_1..xi_i.
#[derive(Clone, Debug)]
pub struct GroupLaw {
    q: u32,
    c: u32,
    weights: Vec<u32>,
    pub mul_polys: Vec<IntPolynomial>,
    pub pow_polys: Vec<IntPolynomial>,
}

impl GroupLaw {
    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn class(&self) -> u32 {
        self.c
    }

    pub fn rank(&self) -> usize {
        self.weights.len()
    }

    fn check_len(&self, v: &[BigRational]) -> Result<()> {
        if v.len() != self.rank() {
            return Err(Error::CoordinateLength { got: v.len(), expected: self.rank() });
        }
        Ok(())
    }

    /// Product coordinates by polynomial evaluation at rational points.
    pub fn law_mul(&self, a: &[BigRational], b: &[BigRational]) -> Result<Vec<BigRational>> {
        self.check_len(a)?;
        self.check_len(b)?;
        Ok(self
            .mul_polys
            .iter()
            .map(|p| {
                p.eval(|v| match v {
                    LawVar::Xi(i) => a[i - 1].clone(),
                    LawVar::Eta(i) => b[i - 1].clone(),
                    LawVar::Lambda => unreachable!("lambda in a multiplication polynomial"),
                })
            })
            .collect())
    }

    /// Power coordinates `a^lambda` at a rational exponent.
    pub fn law_pow(&self, a: &[BigRational], lambda: &BigRational) -> Result<Vec<BigRational>> {
        self.check_len(a)?;
        Ok(self
            .pow_polys
            .iter()
            .map(|p| {
                p.eval(|v| match v {
                    LawVar::Xi(i) => a[i - 1].clone(),
                    LawVar::Lambda => lambda.clone(),
                    LawVar::Eta(_) => unreachable!("eta in a power polynomial"),
                })
            })
            .collect())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "q": self.q,
            "c": self.c,
            "zeta": self.mul_polys.iter().map(|p| p.to_json()).collect::<Vec<_>>(),
            "omega": self.pow_polys.iter().map(|p| p.to_json()).collect::<Vec<_>>(),
        })
    }
}

/// Candidate exponent vectors with weighted degree at most `bound`:
/// all t with sum_j t_j * weight_j <= bound. The set is closed downward,
/// which is exactly what the forward-difference formula needs.
fn weighted_tuples(weights: &[u32], bound: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; weights.len()];
    fn rec(weights: &[u32], pos: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if pos == weights.len() {
            out.push(cur.clone());
            return;
        }
        let max = left / weights[pos];
        for t in 0..=max {
            cur[pos] = t;
            rec(weights, pos + 1, left - t * weights[pos], cur, out);
        }
        cur[pos] = 0;
    }
    rec(weights, 0, bound, &mut cur, &mut out);
    out
}

/// Multivariate forward difference at zero:
/// `a_T = sum_{S <= T} (-1)^{|T| - |S|} prod_j C(t_j, s_j) F(S)`,
/// which recovers the coefficient of `prod_j C(x_j, t_j)` exactly.
fn forward_difference<F>(t: &[u32], eval: &mut F) -> BigInt
where
    F: FnMut(&[u32]) -> BigInt,
{
    let mut acc = BigInt::zero();
    let mut s = vec![0u32; t.len()];
    loop {
        let mut weight = BigInt::one();
        let mut parity = 0u32;
        for j in 0..t.len() {
            weight *= binomial_int(&BigInt::from(t[j]), s[j]);
            parity += t[j] - s[j];
        }
        let v = eval(&s);
        if parity % 2 == 0 {
            acc += weight * v;
        } else {
            acc -= weight * v;
        }
        // Next sub-tuple S <= T in odometer order.
        let mut j = 0;
        loop {
            if j == t.len() {
                return acc;
            }
            if s[j] < t[j] {
                s[j] += 1;
                break;
            }
            s[j] = 0;
            j += 1;
        }
    }
}

/// A deterministic pseudo-random stream for validation points. Linear
/// congruential; quality is irrelevant, reproducibility is not.
struct SplitMix(u64);

impl SplitMix {
    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    fn int_in(&mut self, lo: i64, hi: i64) -> i64 {
        lo + (self.next() % (hi - lo + 1) as u64) as i64
    }
}

/// Derives the group law of a context by exact interpolation against the
/// collector, then verifies it on a disjoint random validation set.
pub fn fit_group_law(ctx: &NilpotentContext) -> Result<GroupLaw> {
    let n = ctx.rank();
    let weights: Vec<u32> = (0..n).map(|i| ctx.basis().weight_of(i)).collect();

    let mut mul_cache: HashMap<(Vec<u32>, Vec<u32>), Vec<BigInt>> = HashMap::new();
    let mut pow_cache: HashMap<(u32, Vec<u32>), Vec<BigInt>> = HashMap::new();

    let mut mul_polys = Vec::with_capacity(n);
    let mut pow_polys = Vec::with_capacity(n);

    for i in 0..n {
        let bound = weights[i];
        let active = i + 1;

        // zeta_i: variables xi_1..xi_{i+1}, eta_1..eta_{i+1}.
        let var_weights: Vec<u32> =
            weights[..active].iter().chain(weights[..active].iter()).copied().collect();
        let tuples = weighted_tuples(&var_weights, bound);
        let mut terms = Vec::new();
        for t in &tuples {
            let coeff = forward_difference(t, &mut |s: &[u32]| {
                let (xs, ys) = s.split_at(active);
                let key = (xs.to_vec(), ys.to_vec());
                mul_cache
                    .entry(key)
                    .or_insert_with(|| {
                        let a = embed_point(ctx, xs);
                        let b = embed_point(ctx, ys);
                        let g =
                            ctx.mul(&a, &b).expect("fitting evaluation stays inside the context");
                        g.exponents().to_vec()
                    })[i]
                    .clone()
            });
            if !coeff.is_zero() {
                let mut factors = Vec::new();
                for (j, &r) in t.iter().enumerate() {
                    if r > 0 {
                        let var = if j < active {
                            LawVar::Xi(j + 1)
                        } else {
                            LawVar::Eta(j - active + 1)
                        };
                        factors.push((var, r));
                    }
                }
                terms.push(BinomialTerm { coeff, factors });
            }
        }
        mul_polys.push(IntPolynomial { terms });

        // omega_i: variables lambda, xi_1..xi_{i+1}; lambda's exponent is
        // bounded by wt(b_i) on its own.
        let tuples: Vec<Vec<u32>> = {
            // Enumerate (r_lambda, r_1..r_active) with r_lambda <= bound
            // and the xi part within the weighted bound.
            let xi_tuples = weighted_tuples(&weights[..active], bound);
            let mut all = Vec::new();
            for rl in 0..=bound {
                for t in &xi_tuples {
                    let mut full = Vec::with_capacity(active + 1);
                    full.push(rl);
                    full.extend_from_slice(t);
                    all.push(full);
                }
            }
            all
        };
        let mut terms = Vec::new();
        for t in &tuples {
            let coeff = forward_difference(t, &mut |s: &[u32]| {
                let lambda = s[0];
                let xs = &s[1..];
                let key = (lambda, xs.to_vec());
                pow_cache
                    .entry(key)
                    .or_insert_with(|| {
                        let a = embed_point(ctx, xs);
                        let g = ctx
                            .pow(&a, &BigInt::from(lambda))
                            .expect("fitting evaluation stays inside the context");
                        g.exponents().to_vec()
                    })[i]
                    .clone()
            });
            if !coeff.is_zero() {
                let mut factors = Vec::new();
                if t[0] > 0 {
                    factors.push((LawVar::Lambda, t[0]));
                }
                for (j, &r) in t[1..].iter().enumerate() {
                    if r > 0 {
                        factors.push((LawVar::Xi(j + 1), r));
                    }
                }
                terms.push(BinomialTerm { coeff, factors });
            }
        }
        pow_polys.push(IntPolynomial { terms });
    }

    let law = GroupLaw { q: ctx.q(), c: ctx.class(), weights, mul_polys, pow_polys };
    validate_law(ctx, &law)?;
    Ok(law)
}

/// Normal form with the given leading exponents (remaining coordinates 0).
fn embed_point(ctx: &NilpotentContext, coords: &[u32]) -> crate::collect::GroupElement {
    let mut exps = vec![BigInt::zero(); ctx.rank()];
    for (j, &v) in coords.iter().enumerate() {
        exps[j] = BigInt::from(v);
    }
    ctx.element_from_exponents(exps).expect("length matches the context rank")
}

/// Held-out check on points disjoint from the nonnegative fitting grid:
/// mixed-sign random coordinates, exact equality demanded.
fn validate_law(ctx: &NilpotentContext, law: &GroupLaw) -> Result<()> {
    let n = ctx.rank();
    let seed = 0x5eed_ba5e_u64 ^ ((n as u64) << 32) ^ (ctx.q() as u64);
    let mut rng = SplitMix(seed);
    let trials = 24;
    for trial in 0..trials {
        let a: Vec<i64> = (0..n).map(|_| rng.int_in(-3, 3)).collect();
        let b: Vec<i64> = (0..n).map(|_| rng.int_in(-3, 3)).collect();
        let lambda = rng.int_in(-4, 4);

        let ga = element_from_i64(ctx, &a);
        let gb = element_from_i64(ctx, &b);

        let want_mul = ctx.mul(&ga, &gb)?;
        let got_mul = law.law_mul(&to_rat(&a), &to_rat(&b))?;
        for i in 0..n {
            if to_rat_one(&want_mul.exponents()[i]) != got_mul[i] {
                return Err(Error::FitFailed {
                    coordinate: i + 1,
                    msg: format!("multiplication mismatch on validation trial {trial}"),
                });
            }
        }

        let want_pow = ctx.pow(&ga, &BigInt::from(lambda))?;
        let got_pow = law.law_pow(&to_rat(&a), &BigRational::from_integer(BigInt::from(lambda)))?;
        for i in 0..n {
            if to_rat_one(&want_pow.exponents()[i]) != got_pow[i] {
                return Err(Error::FitFailed {
                    coordinate: i + 1,
                    msg: format!("power mismatch on validation trial {trial}"),
                });
            }
        }
    }
    Ok(())
}

fn element_from_i64(ctx: &NilpotentContext, coords: &[i64]) -> crate::collect::GroupElement {
    let exps = coords.iter().map(|&v| BigInt::from(v)).collect();
    ctx.element_from_exponents(exps).expect("length matches the context rank")
}

fn to_rat(v: &[i64]) -> Vec<BigRational> {
    v.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect()
}

fn to_rat_one(v: &BigInt) -> BigRational {
    BigRational::from_integer(v.clone())
}
