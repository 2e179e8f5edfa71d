//! Unitriangular matrix groups over Z, Q, or F_p: exact arithmetic, the
//! level filtration `K_i = 1 + k^i`, binomial exponentiation by rationals,
//! nilpotency-class witnesses, and the regular representation of free
//! nilpotent groups on the monomial basis of the truncated free algebra.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use std::collections::HashMap;

use crate::collect::{GroupElement, NilpotentContext};
use crate::error::{Error, Result};
use crate::scalar::{binomial_rat, mul_mod, CoeffRing, Scalar};
use crate::series::Monomial;
use crate::words::Word;

/// An upper unitriangular matrix: diagonal entries 1, entries below the
/// diagonal 0, exact arbitrary-precision entries above.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniTriMatrix {
    n: usize,
    ring: CoeffRing,
    /// Row-major, length n * n.
    entries: Vec<Scalar>,
}

impl UniTriMatrix {
    pub fn identity(n: usize, ring: CoeffRing) -> Self {
        let mut entries = vec![ring.zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = ring.one();
        }
        UniTriMatrix { n, ring, entries }
    }

    /// Identity plus a single entry `value` at (row, col), row < col
    /// (0-based).
    pub fn elementary(n: usize, ring: CoeffRing, row: usize, col: usize, value: Scalar) -> Self {
        assert!(row < col && col < n, "entry must lie strictly above the diagonal");
        let mut m = Self::identity(n, ring);
        m.entries[row * n + col] = value;
        m
    }

    pub fn from_rows(ring: CoeffRing, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotUnitriangular(format!(
                    "row {i} has length {}, expected {n}",
                    row.len()
                )));
            }
            for (j, v) in row.iter().enumerate() {
                if v.ring() != ring {
                    return Err(Error::RingMismatch(ring.tag(), v.ring().tag()));
                }
                if i == j && !v.is_one() {
                    return Err(Error::NotUnitriangular(format!("diagonal entry ({i},{i}) is {v}")));
                }
                if i > j && !v.is_zero() {
                    return Err(Error::NotUnitriangular(format!("entry ({i},{j}) below diagonal is {v}")));
                }
                entries.push(v.clone());
            }
        }
        Ok(UniTriMatrix { n, ring, entries })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn ring(&self) -> CoeffRing {
        self.ring
    }

    pub fn get(&self, row: usize, col: usize) -> &Scalar {
        &self.entries[row * self.n + col]
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.n, self.ring)
    }

    fn check_compat(&self, other: &UniTriMatrix) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        if self.ring != other.ring {
            return Err(Error::RingMismatch(self.ring.tag(), other.ring.tag()));
        }
        Ok(())
    }

    pub fn mat_mul(&self, other: &UniTriMatrix) -> Result<UniTriMatrix> {
        self.check_compat(other)?;
        let n = self.n;
        let mut out = Self::identity(n, self.ring);
        for i in 0..n {
            for j in i..n {
                // Only k in i..=j contributes for unitriangular factors.
                let mut acc = self.ring.zero();
                for k in i..=j {
                    let a = self.get(i, k);
                    if a.is_zero() {
                        continue;
                    }
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    acc = acc.add(&a.mul(b));
                }
                out.entries[i * n + j] = acc;
            }
        }
        Ok(out)
    }

    /// Inverse via the geometric series `(1+u)^-1 = 1 - u + u^2 - ...`,
    /// with u = self - 1 strictly upper triangular (so u^n = 0).
    pub fn mat_inv(&self) -> UniTriMatrix {
        let n = self.n;
        let id = Self::identity(n, self.ring);
        let mut u = self.clone();
        for i in 0..n {
            u.entries[i * n + i] = self.ring.zero();
        }
        // acc = 1, power = 1; repeatedly power *= -u.
        let mut acc = id.clone();
        let mut power = id;
        for _ in 1..n {
            power = mul_raw(&power, &u.scale_neg());
            if power.entries.iter().all(|e| e.is_zero()) {
                break;
            }
            acc = add_raw(&acc, &power);
        }
        acc
    }

    fn scale_neg(&self) -> UniTriMatrix {
        let mut out = self.clone();
        for e in &mut out.entries {
            *e = e.neg();
        }
        out
    }

    pub fn mat_pow(&self, exp: &BigInt) -> UniTriMatrix {
        if exp.is_negative() {
            return self.mat_inv().mat_pow(&-exp);
        }
        let mut acc = Self::identity(self.n, self.ring);
        let mut base = self.clone();
        let bits = exp.bits();
        for i in 0..bits {
            if exp.bit(i) {
                acc = acc.mat_mul(&base).expect("same shape");
            }
            if i + 1 < bits {
                base = base.mat_mul(&base).expect("same shape");
            }
        }
        acc
    }

    /// `a^-1 b^-1 a b`.
    pub fn commutator(&self, other: &UniTriMatrix) -> Result<UniTriMatrix> {
        self.mat_inv()
            .mat_mul(&other.mat_inv())?
            .mat_mul(self)?
            .mat_mul(other)
    }

    /// Binomial exponentiation by a rational: `sum_k C(lambda, k) u^k`
    /// with u = self - 1. For lambda = 1/m this is the unique m-th root.
    pub fn binomial_pow(&self, lambda: &BigRational) -> Result<UniTriMatrix> {
        if self.ring != CoeffRing::Rat {
            return Err(Error::RationalRequired(self.ring.tag()));
        }
        let n = self.n;
        let mut u = self.clone();
        for i in 0..n {
            u.entries[i * n + i] = self.ring.zero();
        }
        let mut acc = Self::identity(n, self.ring);
        let mut upow = Self::identity(n, self.ring);
        for k in 1..n {
            upow = mul_raw(&upow, &u);
            if upow.entries.iter().all(|e| e.is_zero()) {
                break;
            }
            let coeff = Scalar::Rat(binomial_rat(lambda, k as u32));
            acc = add_raw(&acc, &upow.scale_by(&coeff));
        }
        Ok(acc)
    }

    fn scale_by(&self, s: &Scalar) -> UniTriMatrix {
        let mut out = self.clone();
        for e in &mut out.entries {
            *e = e.mul(s);
        }
        out
    }

    /// Distance of the first nonzero superdiagonal; `n` for the identity.
    /// `level(m) = k` exactly when `m - 1` lies in `k^k` but not `k^(k+1)`
    /// for the strictly-upper-triangular ideal k.
    pub fn level(&self) -> usize {
        for d in 1..self.n {
            for i in 0..self.n - d {
                if !self.get(i, i + d).is_zero() {
                    return d;
                }
            }
        }
        self.n
    }

    /// JSON: `{"n", "ring", "rows": [["...", ...], ...]}` row-major with
    /// entries rendered as decimal strings (or `a/b` for rationals).
    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<Vec<String>> = (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j).render()).collect())
            .collect();
        serde_json::json!({ "n": self.n, "ring": self.ring.tag(), "rows": rows })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<UniTriMatrix> {
        let bad = |m: &str| Error::Deserialize(format!("matrix: {m}"));
        let ring: CoeffRing = v["ring"].as_str().ok_or_else(|| bad("missing ring"))?.parse()?;
        let rows_json = v["rows"].as_array().ok_or_else(|| bad("missing rows"))?;
        let mut rows = Vec::with_capacity(rows_json.len());
        for r in rows_json {
            let r = r.as_array().ok_or_else(|| bad("row must be an array"))?;
            let mut row = Vec::with_capacity(r.len());
            for e in r {
                row.push(Scalar::parse(ring, e.as_str().ok_or_else(|| bad("bad entry"))?)?);
            }
            rows.push(row);
        }
        Self::from_rows(ring, rows)
    }
}

/// Entrywise sum; internal helper for truncated series of matrices.
fn add_raw(a: &UniTriMatrix, b: &UniTriMatrix) -> UniTriMatrix {
    let mut out = a.clone();
    for (x, y) in out.entries.iter_mut().zip(&b.entries) {
        *x = x.add(y);
    }
    out
}

/// Plain matrix product without the unitriangular shortcut (factors here
/// may be strictly upper triangular).
fn mul_raw(a: &UniTriMatrix, b: &UniTriMatrix) -> UniTriMatrix {
    let n = a.n;
    let mut out = UniTriMatrix { n, ring: a.ring, entries: vec![a.ring.zero(); n * n] };
    for i in 0..n {
        for k in i..n {
            let x = a.get(i, k);
            if x.is_zero() {
                continue;
            }
            for j in k..n {
                let y = b.get(k, j);
                if y.is_zero() {
                    continue;
                }
                let idx = i * n + j;
                out.entries[idx] = out.entries[idx].add(&x.mul(y));
            }
        }
    }
    out
}

/// The superdiagonal generators t_k = 1 + e_{k,k+1} of T_n(F_p). Their
/// left-normed commutator [t_1, ..., t_{n-1}] equals 1 + e_{1,n}, which
/// certifies nilpotency class exactly n - 1.
pub fn class_witness(n: usize, p: u64) -> Result<Vec<UniTriMatrix>> {
    assert!(n >= 2, "need dimension at least 2");
    let ring = CoeffRing::fp(p)?;
    Ok((0..n - 1)
        .map(|k| UniTriMatrix::elementary(n, ring, k, k + 1, ring.one()))
        .collect())
}

/// The regular representation of the free nilpotent group of class `c` on
/// `q` generators: each generator acts by right multiplication with
/// `1 + u_i` on the monomial basis (degree <= c, ordered by degree then
/// lexicographically) of the truncated free algebra. The matrices are
/// unitriangular in this basis order.
#[derive(Clone, Debug)]
pub struct RegularRep {
    q: u32,
    truncation: u32,
    ring: CoeffRing,
    basis: Vec<Monomial>,
    gens: Vec<UniTriMatrix>,
    gen_invs: Vec<UniTriMatrix>,
}

/// Monomials of degree <= `c` over generators 1..=q in (degree, lex) order.
pub(crate) fn monomial_basis(q: u32, c: u32) -> Vec<Monomial> {
    let mut basis = vec![Monomial::unit()];
    let mut layer = vec![Monomial::unit()];
    for _ in 0..c {
        let mut next = Vec::with_capacity(layer.len() * q as usize);
        for m in &layer {
            for i in 1..=q {
                next.push(m.concat(&Monomial::gen(i)));
            }
        }
        basis.extend(next.iter().cloned());
        layer = next;
    }
    basis
}

impl RegularRep {
    /// Dimension `1 + q + ... + q^c` of the representation space.
    pub fn dimension(q: u32, c: u32) -> BigInt {
        let mut d = BigInt::one();
        for j in 1..=c {
            d += BigInt::from(q).pow(j);
        }
        d
    }

    pub fn new(q: u32, c: u32, ring: CoeffRing) -> Result<Self> {
        assert!(q >= 2 && c >= 1);
        let dim = Self::dimension(q, c)
            .to_usize()
            .ok_or_else(|| Error::ResourceLimit("representation dimension exceeds usize".into()))?;
        let basis = monomial_basis(q, c);
        debug_assert_eq!(basis.len(), dim);
        let index: HashMap<Monomial, usize> =
            basis.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();

        let mut gens = Vec::with_capacity(q as usize);
        for i in 1..=q {
            let mut m = UniTriMatrix::identity(dim, ring);
            for (row, mono) in basis.iter().enumerate() {
                if mono.degree() < c {
                    let col = index[&mono.concat(&Monomial::gen(i))];
                    m.entries[row * dim + col] = ring.one();
                }
            }
            gens.push(m);
        }
        let gen_invs = gens.iter().map(|g| g.mat_inv()).collect();
        Ok(RegularRep { q, truncation: c, ring, basis, gens, gen_invs })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    /// Matrix of the i-th generator (1-based).
    pub fn generator(&self, i: u32) -> Result<&UniTriMatrix> {
        if i < 1 || i > self.q {
            return Err(Error::GeneratorOutOfRange { index: i, max: self.q });
        }
        Ok(&self.gens[(i - 1) as usize])
    }

    /// Image of a word: the product of generator-matrix powers.
    pub fn eval_word(&self, w: &Word) -> Result<UniTriMatrix> {
        let mut acc = UniTriMatrix::identity(self.dim(), self.ring);
        for (g, e) in w.letters() {
            if g.index() > self.q {
                return Err(Error::GeneratorOutOfRange { index: g.index(), max: self.q });
            }
            let base = if e.is_negative() {
                &self.gen_invs[(g.index() - 1) as usize]
            } else {
                &self.gens[(g.index() - 1) as usize]
            };
            acc = acc.mat_mul(&base.mat_pow(&e.abs()))?;
        }
        Ok(acc)
    }

    /// Image of a normal form: evaluates its canonical representative word.
    pub fn eval_element(&self, ctx: &NilpotentContext, g: &GroupElement) -> Result<UniTriMatrix> {
        self.eval_word(&ctx.representative_word(g)?)
    }
}

/// A sparse unitriangular matrix over F_p: only nonzero strictly-upper
/// entries are stored (the diagonal is implicitly 1). Used for the
/// degree-N regular action, whose dimension grows like q^N.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseFpUniTri {
    n: usize,
    p: u64,
    /// rows[i]: sorted (col, value) pairs with col > i, value != 0.
    rows: Vec<Vec<(u32, u64)>>,
}

impl SparseFpUniTri {
    pub fn identity(n: usize, p: u64) -> Self {
        SparseFpUniTri { n, p, rows: vec![Vec::new(); n] }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn is_identity(&self) -> bool {
        self.rows.iter().all(|r| r.is_empty())
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    /// Product `self * other`; both are 1 + strictly-upper parts A, B, so
    /// the result's strict part is A + B + AB.
    pub fn mul(&self, other: &SparseFpUniTri) -> Result<SparseFpUniTri> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        if self.p != other.p {
            return Err(Error::RingMismatch(format!("Fp:{}", self.p), format!("Fp:{}", other.p)));
        }
        let p = self.p;
        let mut rows = Vec::with_capacity(self.n);
        let mut dense: Vec<u64> = vec![0; self.n];
        let mut touched: Vec<u32> = Vec::new();
        for i in 0..self.n {
            // B's row i.
            for &(c, v) in &other.rows[i] {
                if dense[c as usize] == 0 {
                    touched.push(c);
                }
                dense[c as usize] = (dense[c as usize] + v) % p;
            }
            // A's row i, plus A*B contributions through intermediate k.
            for &(k, v) in &self.rows[i] {
                if dense[k as usize] == 0 {
                    touched.push(k);
                }
                dense[k as usize] = (dense[k as usize] + v) % p;
                for &(c, w) in &other.rows[k as usize] {
                    if dense[c as usize] == 0 {
                        touched.push(c);
                    }
                    dense[c as usize] = (dense[c as usize] + mul_mod(v, w, p)) % p;
                }
            }
            touched.sort_unstable();
            let mut row = Vec::with_capacity(touched.len());
            for &c in &touched {
                let v = dense[c as usize];
                dense[c as usize] = 0;
                if v != 0 {
                    row.push((c, v));
                }
            }
            touched.clear();
            rows.push(row);
        }
        Ok(SparseFpUniTri { n: self.n, p, rows })
    }

    pub fn pow(&self, mut exp: u64) -> Result<SparseFpUniTri> {
        let mut acc = Self::identity(self.n, self.p);
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Inverse: solve B = -A(1 + B) by iteration, which is the geometric
    /// series `(1 + A)^-1 = 1 - A + A^2 - ...` on the strict part A.
    pub fn inv(&self) -> SparseFpUniTri {
        let p = self.p;
        let neg = SparseFpUniTri {
            n: self.n,
            p,
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(|&(c, v)| (c, p - v)).collect())
                .collect(),
        };
        // acc holds 1 + B_m; each step computes the strict part of
        // (-A)(1 + B_m), which converges shell by shell.
        let mut acc = Self::identity(self.n, p);
        loop {
            let next = neg.strict_mul_full(&acc);
            if next == acc {
                return acc;
            }
            acc = next;
        }
    }

    /// Strict part of `self` times the full matrix `other` (diagonal
    /// included), returned as a strict part.
    fn strict_mul_full(&self, other: &SparseFpUniTri) -> SparseFpUniTri {
        let p = self.p;
        let mut rows = Vec::with_capacity(self.n);
        let mut dense: Vec<u64> = vec![0; self.n];
        let mut touched: Vec<u32> = Vec::new();
        for i in 0..self.n {
            for &(k, v) in &self.rows[i] {
                // other's implicit diagonal.
                if dense[k as usize] == 0 {
                    touched.push(k);
                }
                dense[k as usize] = (dense[k as usize] + v) % p;
                for &(c, w) in &other.rows[k as usize] {
                    if dense[c as usize] == 0 {
                        touched.push(c);
                    }
                    dense[c as usize] = (dense[c as usize] + mul_mod(v, w, p)) % p;
                }
            }
            touched.sort_unstable();
            let mut row = Vec::with_capacity(touched.len());
            for &c in &touched {
                let v = dense[c as usize];
                dense[c as usize] = 0;
                if v != 0 {
                    row.push((c, v));
                }
            }
            touched.clear();
            rows.push(row);
        }
        SparseFpUniTri { n: self.n, p, rows }
    }
}

/// The generators of the degree-`truncation` regular action over F_p, as
/// sparse matrices on the monomial basis.
pub fn sparse_regular_rep(q: u32, truncation: u32, p: u64) -> Result<Vec<SparseFpUniTri>> {
    CoeffRing::fp(p)?;
    let dim = RegularRep::dimension(q, truncation)
        .to_usize()
        .ok_or_else(|| Error::ResourceLimit("sparse representation dimension exceeds usize".into()))?;
    let basis = monomial_basis(q, truncation);
    let index: HashMap<Monomial, usize> =
        basis.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    let mut gens = Vec::with_capacity(q as usize);
    for i in 1..=q {
        let mut rows = vec![Vec::new(); dim];
        for (row, mono) in basis.iter().enumerate() {
            if mono.degree() < truncation {
                let col = index[&mono.concat(&Monomial::gen(i))];
                rows[row].push((col as u32, 1));
            }
        }
        gens.push(SparseFpUniTri { n: dim, p, rows });
    }
    Ok(gens)
}

/// Image of a word under the sparse degree-`truncation` regular action.
pub fn sparse_eval_word(
    gens: &[SparseFpUniTri],
    w: &Word,
) -> Result<SparseFpUniTri> {
    let q = gens.len() as u32;
    let (n, p) = match gens.first() {
        Some(g) => (g.n, g.p),
        None => return Err(Error::ResourceLimit("no generators".into())),
    };
    let mut acc = SparseFpUniTri::identity(n, p);
    for (g, e) in w.letters() {
        if g.index() > q {
            return Err(Error::GeneratorOutOfRange { index: g.index(), max: q });
        }
        let gen = &gens[(g.index() - 1) as usize];
        let base = if e.is_negative() { gen.inv() } else { gen.clone() };
        let exp = e.abs().to_u64().ok_or_else(|| {
            Error::ResourceLimit("exponent too large for the sparse action".into())
        })?;
        acc = acc.mul(&base.pow(exp)?)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::parse_word;

    fn zring() -> CoeffRing {
        CoeffRing::Int
    }

    fn int(n: i64) -> Scalar {
        Scalar::Int(BigInt::from(n))
    }

    fn e12(n: usize) -> UniTriMatrix {
        UniTriMatrix::elementary(n, zring(), 0, 1, int(1))
    }

    fn e23(n: usize) -> UniTriMatrix {
        UniTriMatrix::elementary(n, zring(), 1, 2, int(1))
    }

    #[test]
    fn heisenberg_commutator_is_e13() {
        let x = e12(3);
        let y = e23(3);
        let c = x.commutator(&y).unwrap();
        assert_eq!(c, UniTriMatrix::elementary(3, zring(), 0, 2, int(1)));
        assert_eq!(c.level(), 2);
    }

    #[test]
    fn inverse_of_elementary() {
        let x = e12(2);
        assert_eq!(x.mat_inv(), UniTriMatrix::elementary(2, zring(), 0, 1, int(-1)));
        assert!(x.mat_mul(&x.mat_inv()).unwrap().is_identity());
    }

    #[test]
    fn pow_of_nilpotent_square_zero() {
        let x = e12(2);
        let y = x.mat_pow(&BigInt::from(5));
        assert_eq!(y, UniTriMatrix::elementary(2, zring(), 0, 1, int(5)));
        assert!(x.mat_pow(&BigInt::from(-5))
            .mat_mul(&y)
            .unwrap()
            .is_identity());
    }

    #[test]
    fn binomial_square_root() {
        let ring = CoeffRing::Rat;
        let a = UniTriMatrix::elementary(2, ring, 0, 1, Scalar::Rat(BigRational::from_integer(BigInt::from(2))));
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        let r = a.binomial_pow(&half).unwrap();
        assert_eq!(r, UniTriMatrix::elementary(2, ring, 0, 1, Scalar::Rat(BigRational::one())));
        assert_eq!(r.mat_mul(&r).unwrap(), a);
    }

    #[test]
    fn binomial_pow_matches_integer_pow() {
        let ring = CoeffRing::Rat;
        let a = UniTriMatrix::elementary(4, ring, 0, 1, Scalar::Rat(BigRational::from_integer(BigInt::from(3))))
            .mat_mul(&UniTriMatrix::elementary(4, ring, 1, 3, Scalar::Rat(BigRational::from_integer(BigInt::from(-2)))))
            .unwrap();
        for m in [0i64, 1, 2, 5] {
            let lam = BigRational::from_integer(BigInt::from(m));
            assert_eq!(a.binomial_pow(&lam).unwrap(), a.mat_pow(&BigInt::from(m)));
        }
    }

    #[test]
    fn binomial_pow_requires_rationals() {
        let a = e12(2);
        assert!(matches!(
            a.binomial_pow(&BigRational::one()),
            Err(Error::RationalRequired(_))
        ));
    }

    #[test]
    fn level_values() {
        assert_eq!(UniTriMatrix::elementary(3, zring(), 0, 2, int(1)).level(), 2);
        assert_eq!(UniTriMatrix::identity(4, zring()).level(), 4);
    }

    #[test]
    fn class_witness_small_cases() {
        // n = 3: [t1, t2] = 1 + e13.
        let ts = class_witness(3, 2).unwrap();
        let c = ts[0].commutator(&ts[1]).unwrap();
        let ring = CoeffRing::fp(2).unwrap();
        assert_eq!(c, UniTriMatrix::elementary(3, ring, 0, 2, ring.one()));

        // n = 4: [t1, t2, t3] = 1 + e14.
        let ts = class_witness(4, 2).unwrap();
        let c = ts[0].commutator(&ts[1]).unwrap().commutator(&ts[2]).unwrap();
        assert_eq!(c, UniTriMatrix::elementary(4, ring, 0, 3, ring.one()));
    }

    #[test]
    fn regular_rep_small_dimensions() {
        assert_eq!(RegularRep::dimension(2, 1), BigInt::from(3));
        assert_eq!(RegularRep::dimension(2, 2), BigInt::from(7));
        let rep = RegularRep::new(2, 1, zring()).unwrap();
        assert_eq!(rep.dim(), 3);
        // x1 sends basis element 1 to 1 + u1: single off-diagonal 1 in row 0.
        let m = rep.generator(1).unwrap();
        assert_eq!(*m.get(0, 1), int(1));
        assert_eq!(*m.get(0, 2), int(0));
    }

    #[test]
    fn regular_rep_commutator_row_matches_lie_bracket() {
        // Image of [x1,x2] at c=2: row of basis element 1 reads off
        // 1 + u1u2 - u2u1.
        let rep = RegularRep::new(2, 2, zring()).unwrap();
        let w = parse_word("[x1,x2]", 2).unwrap();
        let m = rep.eval_word(&w).unwrap();
        let basis = rep.basis();
        let idx = |mono: &[u32]| basis.iter().position(|b| b.0 == mono).unwrap();
        assert_eq!(*m.get(0, idx(&[])), int(1));
        assert_eq!(*m.get(0, idx(&[1, 2])), int(1));
        assert_eq!(*m.get(0, idx(&[2, 1])), int(-1));
        assert_eq!(*m.get(0, idx(&[1])), int(0));
        assert_eq!(*m.get(0, idx(&[2])), int(0));
    }

    #[test]
    fn evaluation_of_identity_is_identity() {
        let ctx = NilpotentContext::new(2, 2);
        let rep = RegularRep::new(2, 2, zring()).unwrap();
        let m = rep.eval_element(&ctx, &ctx.identity()).unwrap();
        assert!(m.is_identity());
    }

    #[test]
    fn evaluation_is_homomorphic() {
        let ctx = NilpotentContext::new(2, 2);
        let rep = RegularRep::new(2, 2, zring()).unwrap();
        let a = ctx.collect(&parse_word("x1*x2^-1", 2).unwrap()).unwrap();
        let b = ctx.collect(&parse_word("x2^2*[x1,x2]", 2).unwrap()).unwrap();
        let lhs = rep.eval_element(&ctx, &ctx.mul(&a, &b).unwrap()).unwrap();
        let rhs = rep
            .eval_element(&ctx, &a)
            .unwrap()
            .mat_mul(&rep.eval_element(&ctx, &b).unwrap())
            .unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn sparse_matches_dense_on_words() {
        let gens = sparse_regular_rep(2, 2, 3).unwrap();
        let rep = RegularRep::new(2, 2, CoeffRing::fp(3).unwrap()).unwrap();
        for text in ["x1*x2", "[x1,x2]", "x1^-2*x2^3", "x2^-1*x1^-1*x2*x1"] {
            let w = parse_word(text, 2).unwrap();
            let sparse = sparse_eval_word(&gens, &w).unwrap();
            let dense = rep.eval_word(&w).unwrap();
            for i in 0..rep.dim() {
                for j in i + 1..rep.dim() {
                    let v = match dense.get(i, j) {
                        Scalar::Fp { v, .. } => *v,
                        _ => unreachable!(),
                    };
                    let sv = sparse.rows[i]
                        .iter()
                        .find(|(c, _)| *c as usize == j)
                        .map(|(_, v)| *v)
                        .unwrap_or(0);
                    assert_eq!(v, sv, "mismatch at ({i},{j}) for {text}");
                }
            }
        }
    }

    #[test]
    fn sparse_inverse_and_power() {
        let gens = sparse_regular_rep(2, 3, 2).unwrap();
        let w = parse_word("x1*x2^-1*x1", 2).unwrap();
        let m = sparse_eval_word(&gens, &w).unwrap();
        assert!(m.mul(&m.inv()).unwrap().is_identity());
        // Over F_2 at truncation 3, every element has order dividing 2^2...
        // check order is a 2-power by repeated squaring.
        let mut x = m;
        let mut steps = 0;
        while !x.is_identity() {
            x = x.pow(2).unwrap();
            steps += 1;
            assert!(steps <= 4);
        }
    }

    #[test]
    fn matrix_json_round_trip() {
        let a = e12(3).mat_mul(&e23(3)).unwrap();
        let back = UniTriMatrix::from_json(&a.to_json()).unwrap();
        assert_eq!(back, a);
        assert!(UniTriMatrix::from_json(&serde_json::json!({
            "n": 2, "ring": "Z", "rows": [["1", "0"], ["1", "1"]]
        }))
        .is_err());
    }
}
