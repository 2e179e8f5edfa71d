//! Normal forms and group arithmetic in the free nilpotent group of class
//! `c` on `q` generators, via the collection process.
//!
//! A word over the generators is split into signed unit letters. For each
//! basis entry b_k in order, every occurrence of b_k is moved to the
//! left: passing b_k over a letter c rewrites `c b = b c [c,b]`, and
//! passing b_k^-1 uses the inverse-collection identity
//! `[c, b^-1] = c2 c4 c6 ... c5^-1 c3^-1 c1^-1` with `c_{i+1} = [c_i, b]`.
//! Commutators of weight exceeding `c` are discarded at creation time.
//! What remains after all stages is the exponent vector of the unique
//! normal form `b_1^{m_1} ... b_N^{m_N}`.
//!
//! Products of normal forms (`mul`, `pow`, `inv`, `commutator`) are
//! collected over exponent runs of basis letters instead of unit letters,
//! with a memoized table of pair-commutator normal forms. Runs whose
//! bracket with the passing entry vanishes move in one step, and runs
//! whose bracket admits no further brackets within the class splice a
//! scaled normal form in one step; only brackets of small joint weight
//! fall back to unit-by-unit rewriting. The memo entries are computed by
//! word collection of the expanded brackets, so they never feed
//! themselves, and the results agree with word collection by uniqueness
//! of the normal form.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::hall::{generate_basis, HallBasis};
use crate::words::{CommutatorExpr, Word};

/// How a bracket of two basis entries behaves during word collection.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
enum CommEntry {
    /// Weight exceeds the class bound; the bracket vanishes.
    Dropped,
    /// The bracket is itself a basis entry (0-based index).
    Basic(usize),
    /// The bracket is not a basic commutator. Word collection never forms
    /// it; run collection resolves it through the memo table.
    NotBasic,
}

/// Immutable context for a free nilpotent group of class `c` on `q`
/// generators: the Hall basis, the bracket table used by word collection,
/// and a memo of pair-commutator normal forms used by run collection.
/// The memo is an internal cache with pure semantics: entries depend only
/// on the basis, so sharing it across clones and threads is sound.
#[derive(Clone, Debug)]
pub struct NilpotentContext {
    q: u32,
    c: u32,
    basis: HallBasis,
    /// comm[j][k] for j > k: classification of [b_j, b_k].
    comm: Vec<Vec<CommEntry>>,
    /// (j, k, sign) -> normal form of [b_j, b_k^sign].
    memo: Arc<RwLock<HashMap<(usize, usize, i8), Arc<GroupElement>>>>,
}

impl NilpotentContext {
    pub fn new(q: u32, c: u32) -> Self {
        let basis = generate_basis(q, c);
        let n = basis.len();
        let mut comm = Vec::with_capacity(n);
        for j in 0..n {
            let mut row = Vec::with_capacity(j);
            for k in 0..j {
                let w = basis.weight_of(j) + basis.weight_of(k);
                let entry = if w > c {
                    CommEntry::Dropped
                } else {
                    let expr = CommutatorExpr::bracket(
                        basis.expr_of(j).clone(),
                        basis.expr_of(k).clone(),
                    );
                    match basis.position(&expr) {
                        Some(idx) => CommEntry::Basic(idx),
                        None => CommEntry::NotBasic,
                    }
                };
                row.push(entry);
            }
            comm.push(row);
        }
        NilpotentContext { q, c, basis, comm, memo: Arc::new(RwLock::new(HashMap::new())) }
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn class(&self) -> u32 {
        self.c
    }

    pub fn basis(&self) -> &HallBasis {
        &self.basis
    }

    /// Number of basis entries, i.e. the length of exponent vectors.
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement {
            q: self.q,
            c: self.c,
            exponents: vec![BigInt::zero(); self.rank()],
        }
    }

    /// The image of generator `i` (1-based) as a group element.
    pub fn generator(&self, i: u32) -> Result<GroupElement> {
        if i < 1 || i > self.q {
            return Err(Error::GeneratorOutOfRange { index: i, max: self.q });
        }
        let mut g = self.identity();
        g.exponents[(i - 1) as usize] = BigInt::from(1);
        Ok(g)
    }

    pub fn element_from_exponents(&self, exps: Vec<BigInt>) -> Result<GroupElement> {
        if exps.len() != self.rank() {
            return Err(Error::CoordinateLength { got: exps.len(), expected: self.rank() });
        }
        Ok(GroupElement { q: self.q, c: self.c, exponents: exps })
    }

    fn check(&self, g: &GroupElement) -> Result<()> {
        if g.q != self.q || g.c != self.c {
            return Err(Error::ContextMismatch { q1: self.q, c1: self.c, q2: g.q, c2: g.c });
        }
        Ok(())
    }

    /// Classification of [b_j, b_k] for j > k, as a 0-based basis index;
    /// `None` when the weight exceeds the class.
    fn bracket_index(&self, j: usize, k: usize) -> Option<usize> {
        debug_assert!(j > k);
        match self.comm[j][k] {
            CommEntry::Dropped => None,
            CommEntry::Basic(idx) => Some(idx),
            CommEntry::NotBasic => unreachable!(
                "word collection formed a non-basic bracket [b_{}, b_{}]",
                j + 1,
                k + 1
            ),
        }
    }

    /// Letter sequence of `[c, b_k^-1]` for a letter c = b_j, truncated at
    /// the class bound: `c2 c4 ... c5^-1 c3^-1 c1^-1` with c_{i+1} = [c_i, b_k].
    fn inverse_collection_letters(&self, j: usize, k: usize) -> Vec<Letter> {
        let mut chain = Vec::new();
        let mut cur = j;
        while let Some(next) = self.bracket_index(cur, k) {
            chain.push(next);
            cur = next;
        }
        let mut out = Vec::with_capacity(chain.len());
        for (i, &idx) in chain.iter().enumerate() {
            if i % 2 == 1 {
                out.push(Letter { idx, sign: 1 });
            }
        }
        for (i, &idx) in chain.iter().enumerate().rev() {
            if i % 2 == 0 {
                out.push(Letter { idx, sign: -1 });
            }
        }
        out
    }

    /// Computes the normal form of a word over the generators.
    pub fn collect(&self, word: &Word) -> Result<GroupElement> {
        let mut letters: Vec<Letter> = Vec::new();
        for (g, e) in word.letters() {
            let idx = g.index();
            if idx > self.q {
                return Err(Error::GeneratorOutOfRange { index: idx, max: self.q });
            }
            let sign: i8 = if e.is_negative() { -1 } else { 1 };
            let count = usize::try_from(e.abs()).map_err(|_| {
                Error::ResourceLimit(format!("exponent {e} too large to split into letters"))
            })?;
            for _ in 0..count {
                push_letter(&mut letters, Letter { idx: (idx - 1) as usize, sign });
            }
        }
        Ok(self.collect_units(letters))
    }

    /// Stage loop over unit letters; used for words over the generators,
    /// where every bracket formed is a basic commutator.
    fn collect_units(&self, mut letters: Vec<Letter>) -> GroupElement {
        let n = self.rank();
        let mut exponents = vec![BigInt::zero(); n];
        for k in 0..n {
            if letters.is_empty() {
                break;
            }
            let mut count = BigInt::zero();
            let mut out: Vec<Letter> = Vec::with_capacity(letters.len());
            for t in letters {
                if t.idx == k {
                    self.pass_over_units(&mut out, k, t.sign);
                    count += t.sign;
                } else {
                    push_letter(&mut out, t);
                }
            }
            letters = out;
            exponents[k] = count;
        }
        debug_assert!(letters.is_empty(), "letters of weight > class survived collection");
        GroupElement { q: self.q, c: self.c, exponents }
    }

    /// Rewrites `out` into its conjugate by b_k^sign, letter by letter:
    /// c^b = c [c,b] and (c^-1)^b = [c,b]^-1 c^-1.
    fn pass_over_units(&self, out: &mut Vec<Letter>, k: usize, sign: i8) {
        if out.is_empty() {
            return;
        }
        let old = std::mem::take(out);
        for t in old {
            debug_assert!(t.idx != k);
            if sign > 0 {
                match self.bracket_index(t.idx, k) {
                    None => push_letter(out, t),
                    Some(m) => splice(out, t, &[Letter { idx: m, sign: 1 }]),
                }
            } else {
                let star = self.inverse_collection_letters(t.idx, k);
                splice(out, t, &star);
            }
        }
    }

    /// Normal form of `[b_j, b_k^sign]`, memoized. Entries are computed by
    /// word collection of the expanded bracket, so the memo never feeds
    /// itself.
    fn nf_comm(&self, j: usize, k: usize, sign: i8) -> Arc<GroupElement> {
        if let Some(hit) = self.memo.read().unwrap().get(&(j, k, sign)) {
            return hit.clone();
        }
        let left = self.basis.expr_of(j).expand();
        let right = self.basis.expr_of(k).expand();
        let right = if sign < 0 { right.inverse() } else { right };
        let nf = self
            .collect(&left.commutator(&right))
            .expect("bracket expansion stays inside the context");
        let nf = Arc::new(nf);
        self.memo.write().unwrap().insert((j, k, sign), nf.clone());
        nf
    }

    /// Stage loop over exponent runs; used for products of normal forms.
    fn collect_runs(&self, mut runs: Vec<Run>) -> Result<GroupElement> {
        let n = self.rank();
        let mut exponents = vec![BigInt::zero(); n];
        for k in 0..n {
            if runs.is_empty() {
                break;
            }
            let mut count = BigInt::zero();
            let mut out: Vec<Run> = Vec::with_capacity(runs.len());
            for r in runs {
                if r.idx == k {
                    out = self.conjugate_runs(out, k, &r.exp)?;
                    count += &r.exp;
                } else {
                    push_run(&mut out, r);
                }
            }
            runs = out;
            exponents[k] = count;
        }
        debug_assert!(runs.is_empty(), "letters of weight > class survived collection");
        Ok(GroupElement { q: self.q, c: self.c, exponents })
    }

    /// Conjugates a run string by `b_k^e` in one sweep.
    ///
    /// For a run c^m with c = b_j there are three cases:
    /// - wt(j) + wt(k) > class: the bracket vanishes, the run passes
    ///   unchanged;
    /// - wt(j) + 2 wt(k) > class and 2 wt(j) + wt(k) > class: with
    ///   z = [c, b_k^s], both [z, b_k] and [z, c] vanish, so
    ///   (c^m)^(b_k^e) = c^m z^(m|e|) exactly; splice the scaled normal
    ///   form of z;
    /// - otherwise both weights are small; expand the run into unit
    ///   letters and conjugate |e| times.
    fn conjugate_runs(&self, old: Vec<Run>, k: usize, e: &BigInt) -> Result<Vec<Run>> {
        if old.is_empty() || e.is_zero() {
            return Ok(old);
        }
        let sign: i8 = if e.is_negative() { -1 } else { 1 };
        let abs = e.abs();
        let wk = self.basis.weight_of(k);
        let mut out: Vec<Run> = Vec::with_capacity(old.len());
        for r in old {
            debug_assert!(r.idx != k);
            let wj = self.basis.weight_of(r.idx);
            if wj + wk > self.c {
                push_run(&mut out, r);
            } else if wj + 2 * wk > self.c && 2 * wj + wk > self.c {
                let z = self.nf_comm(r.idx, k, sign);
                let scale = &r.exp * &abs;
                push_run(&mut out, r);
                for (i, zi) in z.exponents.iter().enumerate() {
                    if !zi.is_zero() {
                        push_run(&mut out, Run { idx: i, exp: zi * &scale });
                    }
                }
            } else {
                let mut w = run_to_letters(&r)?;
                let times = usize::try_from(&abs).map_err(|_| {
                    Error::ResourceLimit(format!("conjugation exponent {abs} too large"))
                })?;
                for _ in 0..times {
                    self.conj_letters_once(&mut w, k, sign);
                }
                for t in w {
                    push_run(&mut out, Run { idx: t.idx, exp: BigInt::from(t.sign) });
                }
            }
        }
        Ok(out)
    }

    /// One unit conjugation of a letter word by b_k^sign, splicing
    /// memoized pair-commutator normal forms.
    fn conj_letters_once(&self, w: &mut Vec<Letter>, k: usize, sign: i8) {
        let old = std::mem::take(w);
        for t in old {
            debug_assert!(t.idx != k);
            if self.basis.weight_of(t.idx) + self.basis.weight_of(k) > self.c {
                push_letter(w, t);
            } else {
                let z = self.nf_comm(t.idx, k, sign);
                let letters = rep_letters(&z);
                splice(w, t, &letters);
            }
        }
    }

    /// Canonical representative word of a normal form: the expansions of
    /// the basis entries, in order, raised to their exponents.
    pub fn representative_word(&self, g: &GroupElement) -> Result<Word> {
        self.check(g)?;
        let mut w = Word::identity();
        for (i, e) in g.exponents.iter().enumerate() {
            if !e.is_zero() {
                w = w.concat(&self.basis.expr_of(i).expand().pow(e));
            }
        }
        Ok(w)
    }

    pub fn mul(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        self.check(b)?;
        let mut runs = rep_runs(a);
        runs.extend(rep_runs(b));
        self.collect_runs(runs)
    }

    pub fn inv(&self, a: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        self.collect_runs(invert_runs(&rep_runs(a)))
    }

    pub fn pow(&self, a: &GroupElement, exp: &BigInt) -> Result<GroupElement> {
        self.check(a)?;
        let base = if exp.is_negative() { invert_runs(&rep_runs(a)) } else { rep_runs(a) };
        let count = usize::try_from(exp.abs()).map_err(|_| {
            Error::ResourceLimit(format!("exponent {exp} too large to iterate"))
        })?;
        if count.saturating_mul(base.len()) > 200_000_000 {
            return Err(Error::ResourceLimit(format!(
                "power word of {} runs exceeds the size limit",
                count * base.len()
            )));
        }
        let mut runs = Vec::with_capacity(base.len() * count);
        for _ in 0..count {
            runs.extend_from_slice(&base);
        }
        self.collect_runs(runs)
    }

    /// `a^-1 b^-1 a b`.
    pub fn commutator(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        self.check(b)?;
        let ra = rep_runs(a);
        let rb = rep_runs(b);
        let mut runs = invert_runs(&ra);
        runs.extend(invert_runs(&rb));
        runs.extend_from_slice(&ra);
        runs.extend_from_slice(&rb);
        self.collect_runs(runs)
    }

    /// Lower-central weight: least weight of a basis entry with nonzero
    /// exponent; `c + 1` for the identity.
    pub fn lcs_weight(&self, g: &GroupElement) -> Result<u32> {
        self.check(g)?;
        let mut min = self.c + 1;
        for (i, e) in g.exponents.iter().enumerate() {
            if !e.is_zero() {
                min = min.min(self.basis.weight_of(i));
            }
        }
        Ok(min)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
struct Letter {
    idx: usize,
    sign: i8,
}

/// Appends a unit letter, cancelling against an adjacent inverse.
fn push_letter(out: &mut Vec<Letter>, t: Letter) {
    match out.last() {
        Some(last) if last.idx == t.idx && last.sign == -t.sign => {
            out.pop();
        }
        _ => out.push(t),
    }
}

/// Emits the conjugate of letter `t` by the passing generator, given the
/// letter sequence `comm` of the bracket `[t, b^sign]`:
/// `t^b = t [t,b]` for positive t, `(t^-1)^b = [t,b]^-1 t^-1` otherwise.
fn splice(out: &mut Vec<Letter>, t: Letter, comm: &[Letter]) {
    if t.sign > 0 {
        push_letter(out, t);
        for &s in comm {
            push_letter(out, s);
        }
    } else {
        for &s in comm.iter().rev() {
            push_letter(out, Letter { idx: s.idx, sign: -s.sign });
        }
        push_letter(out, t);
    }
}

/// A maximal run `b_idx^exp` in a string of basis letters; exp != 0.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Run {
    idx: usize,
    exp: BigInt,
}

/// Appends a run, merging with an adjacent run of the same entry.
fn push_run(out: &mut Vec<Run>, r: Run) {
    if r.exp.is_zero() {
        return;
    }
    match out.last_mut() {
        Some(last) if last.idx == r.idx => {
            last.exp += r.exp;
            if last.exp.is_zero() {
                out.pop();
            }
        }
        _ => out.push(r),
    }
}

/// Runs of a normal form, basis entries in order.
fn rep_runs(g: &GroupElement) -> Vec<Run> {
    g.exponents
        .iter()
        .enumerate()
        .filter(|(_, e)| !e.is_zero())
        .map(|(i, e)| Run { idx: i, exp: e.clone() })
        .collect()
}

fn invert_runs(runs: &[Run]) -> Vec<Run> {
    runs.iter().rev().map(|r| Run { idx: r.idx, exp: -&r.exp }).collect()
}

fn run_to_letters(r: &Run) -> Result<Vec<Letter>> {
    let sign: i8 = if r.exp.is_negative() { -1 } else { 1 };
    let count = usize::try_from(r.exp.abs()).map_err(|_| {
        Error::ResourceLimit(format!("run exponent {} too large to expand", r.exp))
    })?;
    Ok(vec![Letter { idx: r.idx, sign }; count])
}

/// Unit letters of a normal form, basis entries in order. Only used for
/// memo entries and local fallbacks, where coordinates are small.
fn rep_letters(g: &GroupElement) -> Vec<Letter> {
    let mut out = Vec::new();
    for (i, e) in g.exponents.iter().enumerate() {
        if e.is_zero() {
            continue;
        }
        let sign: i8 = if e.is_negative() { -1 } else { 1 };
        let count =
            usize::try_from(e.abs()).expect("memo coordinate too large to split into letters");
        out.extend(std::iter::repeat(Letter { idx: i, sign }).take(count));
    }
    out
}

/// Exponent vector of a group element over the Hall basis of its context.
/// The all-zero vector is the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupElement {
    q: u32,
    c: u32,
    exponents: Vec<BigInt>,
}

impl GroupElement {
    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn class(&self) -> u32 {
        self.c
    }

    pub fn exponents(&self) -> &[BigInt] {
        &self.exponents
    }

    pub fn is_identity(&self) -> bool {
        self.exponents.iter().all(|e| e.is_zero())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "q": self.q,
            "c": self.c,
            "exponents": self.exponents.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<GroupElement> {
        let bad = |m: &str| Error::Deserialize(format!("group element: {m}"));
        let q = v["q"].as_u64().ok_or_else(|| bad("missing q"))? as u32;
        let c = v["c"].as_u64().ok_or_else(|| bad("missing c"))? as u32;
        let arr = v["exponents"].as_array().ok_or_else(|| bad("missing exponents"))?;
        let mut exponents = Vec::with_capacity(arr.len());
        for e in arr {
            let s = e.as_str().ok_or_else(|| bad("exponents must be decimal strings"))?;
            exponents.push(s.parse().map_err(|_| bad("bad exponent"))?);
        }
        Ok(GroupElement { q, c, exponents })
    }
}
#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::parse_word;

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    fn exps(g: &GroupElement) -> Vec<i64> {
        use num_traits::ToPrimitive;
        g.exponents().iter().map(|e| e.to_i64().unwrap()).collect()
    }

    fn collect_str(ctx: &NilpotentContext, s: &str) -> GroupElement {
        ctx.collect(&parse_word(s, ctx.q()).unwrap()).unwrap()
    }

    #[test]
    fn heisenberg_swap() {
        // Oracle: x1 -> I + e12, x2 -> I + e23 in 3x3 integer matrices gives
        // x2 x1 = x1 x2 [x2,x1] with [x2,x1] = I + e13 central.
        let ctx = NilpotentContext::new(2, 2);
        let g = collect_str(&ctx, "x2*x1");
        assert_eq!(exps(&g), vec![1, 1, 1]);
        // The other order has no correction term.
        let h = collect_str(&ctx, "x1*x2");
        assert_eq!(exps(&h), vec![1, 1, 0]);
    }

    #[test]
    fn basis_entries_collect_to_unit_vectors() {
        for (q, c) in [(2u32, 3u32), (2, 4), (3, 3)] {
            let ctx = NilpotentContext::new(q, c);
            for i in 0..ctx.rank() {
                let w = ctx.basis().expr_of(i).expand();
                let g = ctx.collect(&w).unwrap();
                let mut want = vec![0i64; ctx.rank()];
                want[i] = 1;
                assert_eq!(exps(&g), want, "entry {} in ({q},{c})", i + 1);
            }
        }
    }

    #[test]
    fn hall_witt_word_collects_to_identity() {
        // [x,y^-1,z]^y [y,z^-1,x]^z [z,x^-1,y]^x = 1
        let ctx = NilpotentContext::new(3, 5);
        let x = parse_word("x1", 3).unwrap();
        let y = parse_word("x2", 3).unwrap();
        let z = parse_word("x3", 3).unwrap();
        let w = hall_witt_word(&x, &y, &z);
        assert!(ctx.collect(&w).unwrap().is_identity());
    }

    fn hall_witt_word(x: &Word, y: &Word, z: &Word) -> Word {
        let part = |a: &Word, b: &Word, c: &Word| {
            a.commutator(&b.inverse()).commutator(c).conjugate(b)
        };
        part(x, y, z).concat(&part(y, z, x)).concat(&part(z, x, y))
    }

    #[test]
    fn heisenberg_multiplication() {
        let ctx = NilpotentContext::new(2, 2);
        let a = ctx.element_from_exponents(vec![big(1), big(2), big(3)]).unwrap();
        let b = ctx.element_from_exponents(vec![big(4), big(5), big(6)]).unwrap();
        // zeta_3 = xi_3 + eta_3 + xi_2 * eta_1 (matrix oracle).
        assert_eq!(exps(&ctx.mul(&a, &b).unwrap()), vec![5, 7, 17]);
    }

    #[test]
    fn heisenberg_cube() {
        let ctx = NilpotentContext::new(2, 2);
        let a = ctx.element_from_exponents(vec![big(1), big(1), big(0)]).unwrap();
        assert_eq!(exps(&ctx.pow(&a, &big(3)).unwrap()), vec![3, 3, 3]);
    }

    #[test]
    fn inverse_cancels() {
        let ctx = NilpotentContext::new(2, 4);
        let g = collect_str(&ctx, "x1^2*x2^-1*x1*[x1,x2]");
        let inv = ctx.inv(&g).unwrap();
        assert!(ctx.mul(&g, &inv).unwrap().is_identity());
        assert!(ctx.mul(&inv, &g).unwrap().is_identity());
    }

    #[test]
    fn collect_is_homomorphic() {
        let ctx = NilpotentContext::new(2, 3);
        let u = parse_word("x1*x2^-2*x1", 2).unwrap();
        let v = parse_word("x2*[x1,x2]*x1^-1", 2).unwrap();
        let lhs = ctx.collect(&u.concat(&v)).unwrap();
        let rhs = ctx
            .mul(&ctx.collect(&u).unwrap(), &ctx.collect(&v).unwrap())
            .unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn lcs_weight_values() {
        let ctx = NilpotentContext::new(2, 3);
        assert_eq!(ctx.lcs_weight(&ctx.identity()).unwrap(), 4);
        let g = collect_str(&ctx, "[[x1,x2],x2]");
        assert_eq!(ctx.lcs_weight(&g).unwrap(), 3);
        let h = ctx.element_from_exponents(vec![big(0), big(0), big(1), big(0), big(0)]).unwrap();
        assert_eq!(ctx.lcs_weight(&h).unwrap(), 2);
    }

    #[test]
    fn negative_exponent_collection() {
        // x2^-1 x1^-1 x2 x1 = [x2, x1] directly.
        let ctx = NilpotentContext::new(2, 2);
        let g = collect_str(&ctx, "[x2,x1]");
        assert_eq!(exps(&g), vec![0, 0, 1]);
        // And its inverse is [x1, x2].
        let h = collect_str(&ctx, "[x1,x2]");
        assert_eq!(exps(&h), vec![0, 0, -1]);
    }

    #[test]
    fn power_law_on_exponents() {
        let ctx = NilpotentContext::new(2, 3);
        let g = collect_str(&ctx, "x1*x2");
        let m = ctx.mul(&ctx.pow(&g, &big(2)).unwrap(), &ctx.pow(&g, &big(3)).unwrap()).unwrap();
        assert_eq!(m, ctx.pow(&g, &big(5)).unwrap());
        let z = ctx.mul(&ctx.pow(&g, &big(4)).unwrap(), &ctx.pow(&g, &big(-4)).unwrap()).unwrap();
        assert!(z.is_identity());
    }

    #[test]
    fn context_mismatch_is_reported() {
        let ctx2 = NilpotentContext::new(2, 2);
        let ctx3 = NilpotentContext::new(2, 3);
        let g = ctx3.identity();
        assert!(matches!(
            ctx2.mul(&ctx2.identity(), &g),
            Err(Error::ContextMismatch { .. })
        ));
    }

    #[test]
    fn element_json_round_trip() {
        let ctx = NilpotentContext::new(2, 2);
        let g = ctx.element_from_exponents(vec![big(-3), big(7), big(123456789)]).unwrap();
        let j = g.to_json();
        assert_eq!(GroupElement::from_json(&j).unwrap(), g);
    }
}
