//! Free-group words, commutator expressions, parsing and free reduction.
//!
//! A [`Word`] is a freely reduced sequence of `(generator, exponent)` letters
//! with arbitrary-precision exponents. Commutators use the convention
//! `[x, y] = x^-1 y^-1 x y`, left-normed for longer brackets:
//! `[x1, x2, x3] = [[x1, x2], x3]`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// 1-based generator index.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Gen(u32);

impl Gen {
    /// `index` must be >= 1.
    pub fn new(index: u32) -> Self {
        assert!(index >= 1, "generator indices are 1-based");
        Gen(index)
    }

    pub fn index(self) -> u32 {
        self.0
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

/// A freely reduced word: no zero exponents, adjacent letters have distinct
/// generators. The empty word is the identity.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Word {
    letters: Vec<(Gen, BigInt)>,
}

impl Word {
    pub fn identity() -> Self {
        Word { letters: Vec::new() }
    }

    pub fn generator(g: Gen) -> Self {
        Word { letters: vec![(g, BigInt::one())] }
    }

    /// Freely reduces an arbitrary letter sequence.
    pub fn from_letters<I>(letters: I) -> Self
    where
        I: IntoIterator<Item = (Gen, BigInt)>,
    {
        let mut out: Vec<(Gen, BigInt)> = Vec::new();
        for (g, e) in letters {
            push_reduced(&mut out, g, e);
        }
        Word { letters: out }
    }

    pub fn letters(&self) -> &[(Gen, BigInt)] {
        &self.letters
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    /// Number of (generator, exponent) letters.
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Total number of unit letters, i.e. the sum of |exponent|.
    pub fn unit_length(&self) -> BigInt {
        self.letters.iter().map(|(_, e)| e.abs()).sum()
    }

    /// Largest generator index appearing in the word (0 for the identity).
    pub fn max_generator(&self) -> u32 {
        self.letters.iter().map(|(g, _)| g.index()).max().unwrap_or(0)
    }

    pub fn inverse(&self) -> Word {
        let letters = self
            .letters
            .iter()
            .rev()
            .map(|(g, e)| (*g, -e))
            .collect::<Vec<_>>();
        // Reversal of a reduced word is reduced.
        Word { letters }
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut out = self.letters.clone();
        for (g, e) in &other.letters {
            push_reduced(&mut out, *g, e.clone());
        }
        Word { letters: out }
    }

    /// `self` raised to an integer power, as a word.
    pub fn pow(&self, exp: &BigInt) -> Word {
        if exp.is_zero() || self.is_identity() {
            return Word::identity();
        }
        let base = if exp.is_negative() { self.inverse() } else { self.clone() };
        let times = exp.abs();
        let mut out = Word::identity();
        let mut i = BigInt::zero();
        while i < times {
            out = out.concat(&base);
            i += 1;
        }
        out
    }

    /// `[self, other] = self^-1 other^-1 self other`, freely reduced.
    pub fn commutator(&self, other: &Word) -> Word {
        self.inverse().concat(&other.inverse()).concat(self).concat(other)
    }

    /// `other^-1 self other`.
    pub fn conjugate(&self, other: &Word) -> Word {
        other.inverse().concat(self).concat(other)
    }

    /// Applies the endomorphism sending generator i to `images[i-1]`:
    /// each letter x_i^e becomes images[i-1]^e. `images` must cover every
    /// generator occurring in the word.
    pub fn substitute(&self, images: &[Word]) -> Word {
        let mut out = Word::identity();
        for (g, e) in &self.letters {
            out = out.concat(&images[(g.index() - 1) as usize].pow(e));
        }
        out
    }

    /// Canonical text rendering; inverse of [`parse_word`].
    pub fn render(&self) -> String {
        if self.letters.is_empty() {
            return "1".to_string();
        }
        self.letters
            .iter()
            .map(|(g, e)| {
                if e.is_one() {
                    format!("{g}")
                } else {
                    format!("{g}^{e}")
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

fn push_reduced(out: &mut Vec<(Gen, BigInt)>, g: Gen, e: BigInt) {
    if e.is_zero() {
        return;
    }
    match out.last_mut() {
        Some((last, acc)) if *last == g => {
            *acc += e;
            if acc.is_zero() {
                out.pop();
            }
        }
        _ => out.push((g, e)),
    }
}

/// A bracketed commutator expression over generators.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum CommutatorExpr {
    Leaf(Gen),
    Bracket(Box<CommutatorExpr>, Box<CommutatorExpr>),
}

impl CommutatorExpr {
    pub fn leaf(index: u32) -> Self {
        CommutatorExpr::Leaf(Gen::new(index))
    }

    pub fn bracket(left: CommutatorExpr, right: CommutatorExpr) -> Self {
        CommutatorExpr::Bracket(Box::new(left), Box::new(right))
    }

    /// Number of generator occurrences.
    pub fn weight(&self) -> u32 {
        match self {
            CommutatorExpr::Leaf(_) => 1,
            CommutatorExpr::Bracket(l, r) => l.weight() + r.weight(),
        }
    }

    /// The freely reduced word obtained by interpreting each bracket as
    /// `u^-1 v^-1 u v`.
    pub fn expand(&self) -> Word {
        match self {
            CommutatorExpr::Leaf(g) => Word::generator(*g),
            CommutatorExpr::Bracket(l, r) => l.expand().commutator(&r.expand()),
        }
    }

    pub fn max_generator(&self) -> u32 {
        match self {
            CommutatorExpr::Leaf(g) => g.index(),
            CommutatorExpr::Bracket(l, r) => l.max_generator().max(r.max_generator()),
        }
    }

    /// Bracket notation, e.g. `[[x2,x1],x2]`.
    pub fn render(&self) -> String {
        match self {
            CommutatorExpr::Leaf(g) => format!("{g}"),
            CommutatorExpr::Bracket(l, r) => format!("[{},{}]", l.render(), r.render()),
        }
    }
}

impl fmt::Display for CommutatorExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Weight-major structural order: weight first, then leaves by generator
/// index, then brackets by (left, right) lexicographically. This is the
/// tie-break used to make basis generation deterministic.
impl Ord for CommutatorExpr {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight()
            .cmp(&other.weight())
            .then_with(|| match (self, other) {
                (CommutatorExpr::Leaf(a), CommutatorExpr::Leaf(b)) => a.cmp(b),
                (CommutatorExpr::Leaf(_), CommutatorExpr::Bracket(..)) => Ordering::Less,
                (CommutatorExpr::Bracket(..), CommutatorExpr::Leaf(_)) => Ordering::Greater,
                (CommutatorExpr::Bracket(l1, r1), CommutatorExpr::Bracket(l2, r2)) => {
                    l1.cmp(l2).then_with(|| r1.cmp(r2))
                }
            })
    }
}

impl PartialOrd for CommutatorExpr {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Expands a commutator expression into a freely reduced word.
pub fn expand_commutator(expr: &CommutatorExpr) -> Word {
    expr.expand()
}

struct Parser<'a> {
    text: &'a [u8],
    pos: usize,
    q: u32,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str, q: u32) -> Self {
        Parser { text: text.as_bytes(), pos: 0, q }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { pos: self.pos, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.text.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let b = self.peek()?;
        self.pos += 1;
        Some(b)
    }

    fn expect(&mut self, b: u8) -> Result<()> {
        match self.bump() {
            Some(got) if got == b => Ok(()),
            Some(got) => self.err(format!("expected '{}', found '{}'", b as char, got as char)),
            None => self.err(format!("expected '{}', found end of input", b as char)),
        }
    }

    fn digits(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return self.err("expected digits");
        }
        Ok(std::str::from_utf8(&self.text[start..self.pos]).unwrap().to_string())
    }

    fn posint_u32(&mut self) -> Result<u32> {
        let at = self.pos;
        let d = self.digits()?;
        match d.parse::<u32>() {
            Ok(n) if n >= 1 => Ok(n),
            Ok(_) => Err(Error::Syntax { pos: at, msg: "expected a positive integer".into() }),
            Err(_) => Err(Error::Syntax { pos: at, msg: "integer too large".into() }),
        }
    }

    fn int_bigint(&mut self) -> Result<BigInt> {
        let neg = self.peek() == Some(b'-');
        if neg {
            self.bump();
        }
        let at = self.pos;
        let d = self.digits()?;
        let n: BigInt = d.parse().unwrap();
        if n.is_zero() {
            return Err(Error::Syntax { pos: at, msg: "exponent 0 is not admitted".into() });
        }
        Ok(if neg { -n } else { n })
    }

    // word := term (('*')? term)*
    fn word(&mut self) -> Result<Word> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.bump();
                    let t = self.term()?;
                    acc = acc.concat(&t);
                }
                // juxtaposition: another term starts directly
                Some(b'x') | Some(b'[') | Some(b'(') | Some(b'1') => {
                    let t = self.term()?;
                    acc = acc.concat(&t);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    // term := atom ('^' int)?
    fn term(&mut self) -> Result<Word> {
        let atom = self.atom()?;
        if self.peek() == Some(b'^') {
            self.bump();
            let e = self.int_bigint()?;
            Ok(atom.pow(&e))
        } else {
            Ok(atom)
        }
    }

    // atom := 'x' posint | '[' word ',' word ']' | '(' word ')' | '1'
    fn atom(&mut self) -> Result<Word> {
        match self.peek() {
            Some(b'x') => {
                self.bump();
                let idx = self.posint_u32()?;
                if idx > self.q {
                    return Err(Error::GeneratorOutOfRange { index: idx, max: self.q });
                }
                Ok(Word::generator(Gen::new(idx)))
            }
            Some(b'[') => {
                self.bump();
                let left = self.word()?;
                self.expect(b',')?;
                let right = self.word()?;
                self.expect(b']')?;
                Ok(left.commutator(&right))
            }
            Some(b'(') => {
                self.bump();
                let inner = self.word()?;
                self.expect(b')')?;
                Ok(inner)
            }
            // "1" denotes the identity; the canonical renderer emits it for
            // the empty word.
            Some(b'1') => {
                self.bump();
                Ok(Word::identity())
            }
            Some(c) => self.err(format!("unexpected character '{}'", c as char)),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses a word in the canonical grammar, checking generator indices
/// against `q`. Commutator brackets are expanded and the result is freely
/// reduced.
pub fn parse_word(text: &str, q: u32) -> Result<Word> {
    let mut p = Parser::new(text, q);
    let w = p.word()?;
    p.skip_ws();
    if p.pos != p.text.len() {
        return p.err("trailing input");
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    fn letters(pairs: &[(u32, i64)]) -> Vec<(Gen, BigInt)> {
        pairs.iter().map(|&(g, e)| (Gen::new(g), big(e))).collect()
    }

    #[test]
    fn parse_plain_product() {
        let w = parse_word("x1^2*x2^-1", 2).unwrap();
        assert_eq!(w.letters(), letters(&[(1, 2), (2, -1)]).as_slice());
    }

    #[test]
    fn parse_cancels() {
        let w = parse_word("x1*x1^-1", 1).unwrap();
        assert!(w.is_identity());
    }

    #[test]
    fn parse_commutator() {
        let w = parse_word("[x1,x2]", 2).unwrap();
        assert_eq!(w.letters(), letters(&[(1, -1), (2, -1), (1, 1), (2, 1)]).as_slice());
    }

    #[test]
    fn parse_juxtaposition_and_parens() {
        let w = parse_word("(x1 x2)^2", 2).unwrap();
        assert_eq!(w.letters(), letters(&[(1, 1), (2, 1), (1, 1), (2, 1)]).as_slice());
    }

    #[test]
    fn parse_nested_brackets() {
        let w = parse_word("[[x1,x2],x1]", 2).unwrap();
        let e = CommutatorExpr::bracket(
            CommutatorExpr::bracket(CommutatorExpr::leaf(1), CommutatorExpr::leaf(2)),
            CommutatorExpr::leaf(1),
        );
        assert_eq!(w, e.expand());
    }

    #[test]
    fn parse_identity_token() {
        let w = parse_word("1", 2).unwrap();
        assert!(w.is_identity());
    }

    #[test]
    fn parse_rejects_out_of_range() {
        match parse_word("x3", 2) {
            Err(Error::GeneratorOutOfRange { index: 3, max: 2 }) => {}
            other => panic!("expected range error, got {other:?}"),
        }
    }

    #[test]
    fn parse_reports_position() {
        match parse_word("x1^", 1) {
            Err(Error::Syntax { pos, .. }) => assert_eq!(pos, 3),
            other => panic!("expected syntax error, got {other:?}"),
        }
        assert!(parse_word("x1**x2", 2).is_err());
        assert!(parse_word("x0", 2).is_err());
        assert!(parse_word("x1^0", 2).is_err());
    }

    #[test]
    fn expand_single_leaf() {
        assert_eq!(
            CommutatorExpr::leaf(1).expand().letters(),
            letters(&[(1, 1)]).as_slice()
        );
    }

    #[test]
    fn expand_simple_bracket() {
        let e = CommutatorExpr::bracket(CommutatorExpr::leaf(1), CommutatorExpr::leaf(2));
        assert_eq!(
            e.expand().letters(),
            letters(&[(1, -1), (2, -1), (1, 1), (2, 1)]).as_slice()
        );
    }

    #[test]
    fn expand_left_normed_weight_three() {
        // [[x1,x2],x1] = (x2^-1 x1^-1 x2 x1) x1^-1 (x1^-1 x2^-1 x1 x2) x1;
        // the middle x1 x1^-1 x1^-1 collapses to x1^-1, leaving 8 letters.
        let e = CommutatorExpr::bracket(
            CommutatorExpr::bracket(CommutatorExpr::leaf(1), CommutatorExpr::leaf(2)),
            CommutatorExpr::leaf(1),
        );
        let w = e.expand();
        assert_eq!(
            w.letters(),
            letters(&[(2, -1), (1, -1), (2, 1), (1, -1), (2, -1), (1, 1), (2, 1), (1, 1)])
                .as_slice()
        );
        assert_eq!(w.unit_length(), big(8));
    }

    #[test]
    fn invert_reverses_and_negates() {
        let w = Word::from_letters(letters(&[(1, 2), (2, 1)]));
        assert_eq!(w.inverse().letters(), letters(&[(2, -1), (1, -2)]).as_slice());
    }

    #[test]
    fn concat_merges_exponents() {
        let u = Word::from_letters(letters(&[(1, 2)]));
        let v = Word::from_letters(letters(&[(1, 3)]));
        assert_eq!(u.concat(&v).letters(), letters(&[(1, 5)]).as_slice());
        assert!(u.concat(&u.inverse()).is_identity());
    }

    #[test]
    fn free_reduce_cascades() {
        // x1 x2 x2^-1 x1^-1 collapses completely.
        let w = Word::from_letters(letters(&[(1, 1), (2, 1), (2, -1), (1, -1)]));
        assert!(w.is_identity());
    }

    #[test]
    fn render_round_trip() {
        for text in ["x1^2*x2^-1*x1", "x2", "1"] {
            let w = parse_word(text, 3).unwrap();
            assert_eq!(parse_word(&w.render(), 3).unwrap(), w);
        }
    }

    #[test]
    fn weight_adds_across_brackets() {
        let e = CommutatorExpr::bracket(
            CommutatorExpr::bracket(CommutatorExpr::leaf(2), CommutatorExpr::leaf(1)),
            CommutatorExpr::leaf(2),
        );
        assert_eq!(e.weight(), 3);
        assert_eq!(e.render(), "[[x2,x1],x2]");
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn raw_letters() -> impl Strategy<Value = Vec<(Gen, BigInt)>> {
            prop::collection::vec((1u32..=3, -4i64..=4), 0..20).prop_map(|v| {
                v.into_iter().map(|(g, e)| (Gen::new(g), BigInt::from(e))).collect()
            })
        }

        proptest! {
            #[test]
            fn free_reduce_is_idempotent(raw in raw_letters()) {
                let once = Word::from_letters(raw.clone());
                let twice = Word::from_letters(once.letters().to_vec());
                prop_assert_eq!(once, twice);
            }

            #[test]
            fn word_times_inverse_is_trivial(raw in raw_letters()) {
                let w = Word::from_letters(raw);
                prop_assert!(w.concat(&w.inverse()).is_identity());
                prop_assert!(w.inverse().concat(&w).is_identity());
            }

            #[test]
            fn render_parse_round_trip(raw in raw_letters()) {
                let w = Word::from_letters(raw);
                prop_assert_eq!(parse_word(&w.render(), 3).unwrap(), w);
            }

            #[test]
            fn reduced_invariants_hold(raw in raw_letters()) {
                let w = Word::from_letters(raw);
                for (_, e) in w.letters() {
                    prop_assert!(!e.is_zero());
                }
                for pair in w.letters().windows(2) {
                    prop_assert!(pair[0].0 != pair[1].0);
                }
            }
        }
    }
}
