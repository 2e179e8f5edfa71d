//! Exact coefficient arithmetic over the integers, the rationals, and
//! prime fields, plus binomial-coefficient helpers.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Coefficient ring tag: Z, Q, or the field with p elements.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum CoeffRing {
    Int,
    Rat,
    Fp(u64),
}

impl CoeffRing {
    /// Prime-field constructor; rejects composite moduli.
    pub fn fp(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(CoeffRing::Fp(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn zero(self) -> Scalar {
        match self {
            CoeffRing::Int => Scalar::Int(BigInt::zero()),
            CoeffRing::Rat => Scalar::Rat(BigRational::zero()),
            CoeffRing::Fp(p) => Scalar::Fp { p, v: 0 },
        }
    }

    pub fn one(self) -> Scalar {
        match self {
            CoeffRing::Int => Scalar::Int(BigInt::one()),
            CoeffRing::Rat => Scalar::Rat(BigRational::one()),
            CoeffRing::Fp(p) => Scalar::Fp { p, v: 1 % p },
        }
    }

    pub fn from_bigint(self, n: &BigInt) -> Scalar {
        match self {
            CoeffRing::Int => Scalar::Int(n.clone()),
            CoeffRing::Rat => Scalar::Rat(BigRational::from_integer(n.clone())),
            CoeffRing::Fp(p) => Scalar::Fp { p, v: mod_reduce(n, p) },
        }
    }

    pub fn from_i64(self, n: i64) -> Scalar {
        self.from_bigint(&BigInt::from(n))
    }

    /// Wire tag: `Z`, `Q`, or `Fp:<p>`.
    pub fn tag(self) -> String {
        match self {
            CoeffRing::Int => "Z".into(),
            CoeffRing::Rat => "Q".into(),
            CoeffRing::Fp(p) => format!("Fp:{p}"),
        }
    }
}

impl fmt::Display for CoeffRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tag())
    }
}

impl FromStr for CoeffRing {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "Z" | "z" => Ok(CoeffRing::Int),
            "Q" | "q" => Ok(CoeffRing::Rat),
            _ => {
                let rest = s
                    .strip_prefix("Fp:")
                    .or_else(|| s.strip_prefix("fp:"))
                    .ok_or_else(|| Error::Deserialize(format!("unknown ring tag {s:?}")))?;
                let p: u64 = rest
                    .parse()
                    .map_err(|_| Error::Deserialize(format!("bad prime in ring tag {s:?}")))?;
                CoeffRing::fp(p)
            }
        }
    }
}

fn mod_reduce(n: &BigInt, p: u64) -> u64 {
    use num_integer::Integer;
    n.mod_floor(&BigInt::from(p)).to_u64().unwrap()
}

/// An element of one of the three coefficient rings. Arithmetic panics on a
/// ring mismatch; container types check rings at their API boundary.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Int(BigInt),
    Rat(BigRational),
    Fp { p: u64, v: u64 },
}

impl Scalar {
    pub fn ring(&self) -> CoeffRing {
        match self {
            Scalar::Int(_) => CoeffRing::Int,
            Scalar::Rat(_) => CoeffRing::Rat,
            Scalar::Fp { p, .. } => CoeffRing::Fp(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Int(n) => n.is_zero(),
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Fp { v, .. } => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Int(n) => n.is_one(),
            Scalar::Rat(r) => r.is_one(),
            Scalar::Fp { p, v } => *v == 1 % p,
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Int(a), Scalar::Int(b)) => Scalar::Int(a + b),
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            (Scalar::Fp { p, v: a }, Scalar::Fp { p: p2, v: b }) => {
                assert_eq!(p, p2, "prime mismatch");
                Scalar::Fp { p: *p, v: add_mod(*a, *b, *p) }
            }
            _ => panic!("scalar ring mismatch: {} vs {}", self.ring(), other.ring()),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Int(a), Scalar::Int(b)) => Scalar::Int(a * b),
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            (Scalar::Fp { p, v: a }, Scalar::Fp { p: p2, v: b }) => {
                assert_eq!(p, p2, "prime mismatch");
                Scalar::Fp { p: *p, v: mul_mod(*a, *b, *p) }
            }
            _ => panic!("scalar ring mismatch: {} vs {}", self.ring(), other.ring()),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Int(a) => Scalar::Int(-a),
            Scalar::Rat(a) => Scalar::Rat(-a),
            Scalar::Fp { p, v } => Scalar::Fp { p: *p, v: if *v == 0 { 0 } else { p - v } },
        }
    }

    /// Multiplicative inverse, when the element is a unit.
    pub fn inverse(&self) -> Option<Scalar> {
        match self {
            Scalar::Int(a) => {
                if a.is_one() || (-a).is_one() {
                    Some(Scalar::Int(a.clone()))
                } else {
                    None
                }
            }
            Scalar::Rat(a) => {
                if a.is_zero() {
                    None
                } else {
                    Some(Scalar::Rat(a.recip()))
                }
            }
            Scalar::Fp { p, v } => {
                if *v == 0 {
                    None
                } else {
                    Some(Scalar::Fp { p: *p, v: pow_mod(*v, p - 2, *p) })
                }
            }
        }
    }

    /// Wire rendering: decimal for Z and Fp, `a/b` (or plain `a`) for Q.
    pub fn render(&self) -> String {
        match self {
            Scalar::Int(n) => n.to_string(),
            Scalar::Rat(r) => {
                if r.is_integer() {
                    r.numer().to_string()
                } else {
                    format!("{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Fp { v, .. } => v.to_string(),
        }
    }

    pub fn parse(ring: CoeffRing, s: &str) -> Result<Scalar> {
        let bad = || Error::Deserialize(format!("bad {ring} scalar {s:?}"));
        match ring {
            CoeffRing::Int => Ok(Scalar::Int(s.parse().map_err(|_| bad())?)),
            CoeffRing::Rat => {
                if let Some((n, d)) = s.split_once('/') {
                    let n: BigInt = n.parse().map_err(|_| bad())?;
                    let d: BigInt = d.parse().map_err(|_| bad())?;
                    if d.is_zero() {
                        return Err(bad());
                    }
                    Ok(Scalar::Rat(BigRational::new(n, d)))
                } else {
                    let n: BigInt = s.parse().map_err(|_| bad())?;
                    Ok(Scalar::Rat(BigRational::from_integer(n)))
                }
            }
            CoeffRing::Fp(_) => {
                let n: BigInt = s.parse().map_err(|_| bad())?;
                Ok(ring.from_bigint(&n))
            }
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 + b as u128) % p as u128) as u64
}

pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for u64.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Exact binomial coefficient C(n, k) for integer n (n may be negative).
pub fn binomial_int(n: &BigInt, k: u32) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= n - BigInt::from(i);
        acc /= BigInt::from(i + 1);
    }
    acc
}

/// C(x, k) = x(x-1)...(x-k+1)/k! for rational x.
pub fn binomial_rat(x: &BigRational, k: u32) -> BigRational {
    let mut acc = BigRational::one();
    for i in 0..k {
        acc *= x - BigRational::from_integer(BigInt::from(i));
        acc /= BigRational::from_integer(BigInt::from(i + 1));
    }
    acc
}

/// p-adic valuation: largest s with p^s dividing n (n nonzero).
pub fn padic_valuation(n: &BigInt, p: u64) -> u32 {
    assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut m = n.abs();
    let mut s = 0;
    loop {
        use num_integer::Integer;
        let (q, r) = m.div_rem(&p);
        if r.is_zero() {
            m = q;
            s += 1;
        } else {
            return s;
        }
    }
}
