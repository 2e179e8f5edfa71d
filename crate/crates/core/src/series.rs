//! Truncated free associative ring over Z, Q, or F_p; the Magnus embedding
//! `x_i -> 1 + u_i`; Lie-element expansion; the dimension filtration; and
//! residual-finiteness certificates.
//!
//! Elements are sparse: a map from noncommutative monomials (sequences of
//! generator indices) to nonzero coefficients, with every monomial of
//! degree at most the truncation bound `D`. Products of degree exceeding
//! `D` are dropped.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::hall::witt_number;
use crate::scalar::{padic_valuation, CoeffRing, Scalar};
use crate::words::{CommutatorExpr, Word};

/// A word in the noncommuting generators `u_1, ..., u_q`; the empty
/// monomial is the ring unit. Ordered by degree, then lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn unit() -> Self {
        Monomial(Vec::new())
    }

    pub fn gen(i: u32) -> Self {
        Monomial(vec![i])
    }

    pub fn degree(&self) -> u32 {
        self.0.len() as u32
    }

    pub fn concat(&self, other: &Monomial) -> Monomial {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Monomial(v)
    }

    pub fn render(&self) -> String {
        if self.0.is_empty() {
            return "1".into();
        }
        self.0.iter().map(|i| format!("u{i}")).collect::<Vec<_>>().join("*")
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// A truncated element of the free associative ring: finitely many
/// monomials of degree <= `degree`, each with a nonzero coefficient.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TruncSeries {
    degree: u32,
    ring: CoeffRing,
    terms: BTreeMap<Monomial, Scalar>,
}

impl TruncSeries {
    pub fn zero(degree: u32, ring: CoeffRing) -> Self {
        TruncSeries { degree, ring, terms: BTreeMap::new() }
    }

    pub fn one(degree: u32, ring: CoeffRing) -> Self {
        let mut s = Self::zero(degree, ring);
        s.terms.insert(Monomial::unit(), ring.one());
        s
    }

    /// The generator image `u_i` as a series.
    pub fn gen(i: u32, degree: u32, ring: CoeffRing) -> Self {
        let mut s = Self::zero(degree, ring);
        if degree >= 1 {
            s.terms.insert(Monomial::gen(i), ring.one());
        }
        s
    }

    pub fn degree_bound(&self) -> u32 {
        self.degree
    }

    pub fn ring(&self) -> CoeffRing {
        self.ring
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(|| self.ring.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&Monomial::unit())
                .map(|c| c.is_one())
                .unwrap_or(false)
    }

    fn check_compat(&self, other: &TruncSeries) -> Result<()> {
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch(self.degree, other.degree));
        }
        if self.ring != other.ring {
            return Err(Error::RingMismatch(self.ring.tag(), other.ring.tag()));
        }
        Ok(())
    }

    fn insert(&mut self, m: Monomial, c: Scalar) {
        if m.degree() > self.degree || c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get().add(&c);
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &TruncSeries) -> Result<TruncSeries> {
        self.check_compat(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> TruncSeries {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = c.neg();
        }
        out
    }

    pub fn sub(&self, other: &TruncSeries) -> Result<TruncSeries> {
        self.add(&other.neg())
    }

    pub fn scalar_mul(&self, s: &Scalar) -> TruncSeries {
        let mut out = TruncSeries::zero(self.degree, self.ring);
        for (m, c) in &self.terms {
            out.insert(m.clone(), c.mul(s));
        }
        out
    }

    /// Ring product; monomials of degree beyond the bound are dropped.
    pub fn ring_mul(&self, other: &TruncSeries) -> Result<TruncSeries> {
        self.check_compat(other)?;
        let mut out = TruncSeries::zero(self.degree, self.ring);
        for (m1, c1) in &self.terms {
            let headroom = self.degree - m1.degree();
            for (m2, c2) in &other.terms {
                if m2.degree() > headroom {
                    break;
                }
                out.insert(m1.concat(m2), c1.mul(c2));
            }
        }
        Ok(out)
    }

    /// `uv - vu`.
    pub fn ring_commutator(&self, other: &TruncSeries) -> Result<TruncSeries> {
        self.ring_mul(other)?.sub(&other.ring_mul(self)?)
    }

    /// Nonnegative power by binary exponentiation.
    pub fn pow(&self, exp: &BigInt) -> Result<TruncSeries> {
        assert!(!exp.is_negative(), "pow takes a nonnegative exponent");
        let mut acc = TruncSeries::one(self.degree, self.ring);
        let mut base = self.clone();
        let bits = exp.bits();
        for i in 0..bits {
            if exp.bit(i) {
                acc = acc.ring_mul(&base)?;
            }
            if i + 1 < bits {
                base = base.ring_mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Inverse of a series with constant term 1, via the geometric series
    /// `(1 + u)^-1 = 1 - u + u^2 - ...`.
    pub fn unit_inverse(&self) -> Result<TruncSeries> {
        if !self.coeff(&Monomial::unit()).is_one() {
            return Err(Error::NotAUnit);
        }
        let u = self.sub(&TruncSeries::one(self.degree, self.ring))?;
        let mut acc = TruncSeries::one(self.degree, self.ring);
        let mut power = TruncSeries::one(self.degree, self.ring);
        for _ in 0..self.degree {
            power = power.ring_mul(&u.neg())?;
            if power.is_zero() {
                break;
            }
            acc = acc.add(&power)?;
        }
        Ok(acc)
    }

    /// The homogeneous part of degree `k`.
    pub fn homogeneous(&self, k: u32) -> TruncSeries {
        let mut out = TruncSeries::zero(self.degree, self.ring);
        for (m, c) in &self.terms {
            if m.degree() == k {
                out.insert(m.clone(), c.clone());
            }
        }
        out
    }

    /// Least degree with a nonzero homogeneous component.
    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).min()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "D": self.degree,
            "ring": self.ring.tag(),
            "terms": self.terms.iter().map(|(m, c)| {
                serde_json::json!({ "mono": m.0, "coeff": c.render() })
            }).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<TruncSeries> {
        let bad = |m: &str| Error::Deserialize(format!("series: {m}"));
        let degree = v["D"].as_u64().ok_or_else(|| bad("missing D"))? as u32;
        let ring: CoeffRing = v["ring"].as_str().ok_or_else(|| bad("missing ring"))?.parse()?;
        let mut out = TruncSeries::zero(degree, ring);
        for t in v["terms"].as_array().ok_or_else(|| bad("missing terms"))? {
            let mono = t["mono"]
                .as_array()
                .ok_or_else(|| bad("missing mono"))?
                .iter()
                .map(|x| x.as_u64().map(|u| u as u32).ok_or_else(|| bad("bad index")))
                .collect::<Result<Vec<u32>>>()?;
            let coeff = Scalar::parse(ring, t["coeff"].as_str().ok_or_else(|| bad("bad coeff"))?)?;
            out.insert(Monomial(mono), coeff);
        }
        Ok(out)
    }
}

impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                if m.degree() == 0 {
                    c.render()
                } else if c.is_one() {
                    m.render()
                } else {
                    format!("{}*{}", c.render(), m.render())
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Multiplicative image of a word under `x_i -> 1 + u_i`, with inverses via
/// the geometric series.
pub fn magnus_embed(word: &Word, q: u32, degree: u32, ring: CoeffRing) -> Result<TruncSeries> {
    let mut acc = TruncSeries::one(degree, ring);
    for (g, e) in word.letters() {
        if g.index() > q {
            return Err(Error::GeneratorOutOfRange { index: g.index(), max: q });
        }
        let gen = TruncSeries::one(degree, ring).add(&TruncSeries::gen(g.index(), degree, ring))?;
        let base = if e.is_negative() { gen.unit_inverse()? } else { gen };
        acc = acc.ring_mul(&base.pow(&e.abs())?)?;
    }
    Ok(acc)
}

/// The Lie element of a commutator expression: leaves map to generators
/// and brackets to `uv - vu`.
pub fn lie_expand(
    expr: &CommutatorExpr,
    q: u32,
    degree: u32,
    ring: CoeffRing,
) -> Result<TruncSeries> {
    if expr.weight() > degree {
        return Err(Error::WeightExceedsDegree { weight: expr.weight(), degree });
    }
    if expr.max_generator() > q {
        return Err(Error::GeneratorOutOfRange { index: expr.max_generator(), max: q });
    }
    fn go(expr: &CommutatorExpr, degree: u32, ring: CoeffRing) -> Result<TruncSeries> {
        match expr {
            CommutatorExpr::Leaf(g) => Ok(TruncSeries::gen(g.index(), degree, ring)),
            CommutatorExpr::Bracket(l, r) => {
                go(l, degree, ring)?.ring_commutator(&go(r, degree, ring)?)
            }
        }
    }
    go(expr, degree, ring)
}

/// Least `k >= 1` such that the Magnus image of the word minus 1 has a
/// nonzero degree-k component over the rationals; `None` when every
/// component up to the truncation bound vanishes.
pub fn dimension_weight(word: &Word, q: u32, degree: u32) -> Result<Option<u32>> {
    let s = magnus_embed(word, q, degree, CoeffRing::Rat)?;
    let delta = s.sub(&TruncSeries::one(degree, CoeffRing::Rat))?;
    Ok(delta.min_degree())
}

/// Coefficients `d_0..d_jmax` of `1 / prod_{i<=c} (1 - t^i)^{m_i}` with
/// `m_i` the Witt number n(i, q): the dimensions of the graded pieces of
/// the augmentation filtration.
pub fn hilbert_coeffs(q: u32, c: u32, jmax: u32) -> Vec<BigInt> {
    assert!(q >= 2 && c >= 1);
    let len = (jmax + 1) as usize;
    let mut coeffs = vec![BigInt::zero(); len];
    coeffs[0] = BigInt::from(1);
    for i in 1..=c {
        let m = witt_number(i, q)
            .to_u64()
            .expect("Witt number fits in u64 at desk scales");
        for _ in 0..m {
            // Multiply by 1/(1 - t^i): a forward cumulative pass.
            for j in (i as usize)..len {
                let prev = coeffs[j - i as usize].clone();
                coeffs[j] += prev;
            }
        }
    }
    coeffs
}

/// A residual-finiteness certificate for a nontrivial word: in the
/// truncated algebra of degree `N` over F_p, the designated monomial of
/// the word's Magnus image has a nonzero coefficient, so the word survives
/// in a finite p-group quotient of order `p^m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    /// Truncation degree N = sum of p^{s_a}.
    pub degree: u32,
    pub monomial: Monomial,
    /// Nonzero coefficient of the designated monomial, in F_p.
    pub coeff: Scalar,
    /// The quotient group has order p^m with m = q + q^2 + ... + q^N.
    pub group_order_exponent: BigInt,
}

impl Witness {
    pub fn to_json(&self, word: &Word, p: u64) -> serde_json::Value {
        serde_json::json!({
            "word": word.render(),
            "prime": p,
            "N": self.degree,
            "monomial": self.monomial.0,
            "coeff": self.coeff.render(),
            "group_order_exponent": self.group_order_exponent.to_string(),
        })
    }
}

/// Builds the residual-finiteness certificate of Theorem-of-Magnus type:
/// write each exponent `r_a = p^{s_a} m_a` with `m_a` prime to p, set
/// `N = sum p^{s_a}`, expand the Magnus image over F_p at degree N, and
/// return the monomial `u_{i_1}^{p^{s_1}} ... u_{i_n}^{p^{s_n}}` together
/// with its (necessarily nonzero) coefficient.
///
/// `max_degree`, when given, bounds N; larger certificates are refused
/// with a resource error.
pub fn residual_witness(
    word: &Word,
    q: u32,
    p: u64,
    max_degree: Option<u32>,
) -> Result<Witness> {
    let ring = CoeffRing::fp(p)?;
    if word.is_identity() {
        return Err(Error::TrivialWord);
    }
    if word.max_generator() > q {
        return Err(Error::GeneratorOutOfRange { index: word.max_generator(), max: q });
    }

    let mut n_big = BigInt::zero();
    let mut designated = Vec::new();
    let mut valuations = Vec::new();
    for (g, e) in word.letters() {
        let s = padic_valuation(e, p);
        let ps = BigInt::from(p).pow(s);
        n_big += &ps;
        valuations.push((g.index(), ps.clone()));
        let reps = ps.to_u32().ok_or_else(|| {
            Error::ResourceLimit(format!("p^{s} exceeds the addressable degree"))
        })?;
        designated.extend(std::iter::repeat(g.index()).take(reps as usize));
    }
    let degree = n_big
        .to_u32()
        .ok_or_else(|| Error::ResourceLimit("certificate degree exceeds u32".into()))?;
    if let Some(cap) = max_degree {
        if degree > cap {
            return Err(Error::ResourceLimit(format!(
                "certificate degree N={degree} exceeds the cap {cap}"
            )));
        }
    }

    let image = magnus_embed(word, q, degree, ring)?;
    let monomial = Monomial(designated);
    let coeff = image.coeff(&monomial);
    assert!(
        !coeff.is_zero(),
        "designated witness coefficient vanished; this contradicts the certificate theorem"
    );

    let mut m = BigInt::zero();
    for j in 1..=degree {
        m += BigInt::from(q).pow(j);
    }
    Ok(Witness { degree, monomial, coeff, group_order_exponent: m })
}
