//! Exact coefficient fields.
//!
//! Fields are structure objects: the element type carries no context, the
//! field value does (this is what lets `F_p` take its prime at runtime).

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub trait Field: Clone + fmt::Debug + Send + Sync {
    type El: Clone + PartialEq + fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::El;
    fn one(&self) -> Self::El;
    fn from_i64(&self, v: i64) -> Self::El;
    fn add(&self, a: &Self::El, b: &Self::El) -> Self::El;
    fn sub(&self, a: &Self::El, b: &Self::El) -> Self::El;
    fn mul(&self, a: &Self::El, b: &Self::El) -> Self::El;
    fn neg(&self, a: &Self::El) -> Self::El;
    /// `None` exactly for zero.
    fn inv(&self, a: &Self::El) -> Option<Self::El>;
    fn is_zero(&self, a: &Self::El) -> bool;
    fn characteristic(&self) -> u64;
    fn name(&self) -> String;
    fn format(&self, a: &Self::El) -> String;
    fn parse(&self, s: &str) -> Result<Self::El>;

    fn is_one(&self, a: &Self::El) -> bool {
        *a == self.one()
    }

    fn div(&self, a: &Self::El, b: &Self::El) -> Option<Self::El> {
        self.inv(b).map(|ib| self.mul(a, &ib))
    }
}

/// A rational number with an `i64` fast path and a bignum fallback.
///
/// Values are kept normalized: whenever a result fits in `Ratio<i64>` it is
/// stored as `Small`, so structural equality is value equality.
#[derive(Clone, Debug)]
pub enum Rational {
    Small(Ratio<i64>),
    Big(BigRational),
}

impl Rational {
    pub fn from_integer(v: i64) -> Self {
        Rational::Small(Ratio::from_integer(v))
    }

    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Rational::Small(Ratio::new(num, den))
    }

    fn to_big(&self) -> BigRational {
        match self {
            Rational::Small(r) => {
                BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
            }
            Rational::Big(b) => b.clone(),
        }
    }

    fn from_big(b: BigRational) -> Self {
        match (b.numer().to_i64(), b.denom().to_i64()) {
            // i64::MIN cannot be negated safely inside Ratio's normalization.
            (Some(n), Some(d)) if n != i64::MIN && d != i64::MIN => {
                Rational::Small(Ratio::new_raw(n, d))
            }
            _ => Rational::Big(b),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Rational::Small(r) => r.is_zero(),
            Rational::Big(b) => b.is_zero(),
        }
    }

    pub fn is_integer(&self) -> bool {
        match self {
            Rational::Small(r) => r.is_integer(),
            Rational::Big(b) => b.is_integer(),
        }
    }

    fn binop(
        &self,
        other: &Self,
        small: impl Fn(&Ratio<i64>, &Ratio<i64>) -> Option<Ratio<i64>>,
        big: impl Fn(BigRational, BigRational) -> BigRational,
    ) -> Self {
        if let (Rational::Small(a), Rational::Small(b)) = (self, other) {
            if let Some(r) = small(a, b) {
                return Rational::Small(r);
            }
        }
        Rational::from_big(big(self.to_big(), other.to_big()))
    }
}

impl PartialEq for Rational {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Rational::Small(a), Rational::Small(b)) => a == b,
            _ => self.to_big() == other.to_big(),
        }
    }
}

impl Eq for Rational {}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rational::Small(r) => write!(f, "{r}"),
            Rational::Big(b) => write!(f, "{b}"),
        }
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("invalid rational `{s}`"));
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let n: BigInt = n.parse().map_err(|_| bad())?;
        let d: BigInt = d.parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        Ok(Rational::from_big(BigRational::new(n, d)))
    }
}

/// The rational numbers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl Field for Rationals {
    type El = Rational;

    fn zero(&self) -> Rational {
        Rational::from_integer(0)
    }
    fn one(&self) -> Rational {
        Rational::from_integer(1)
    }
    fn from_i64(&self, v: i64) -> Rational {
        Rational::from_integer(v)
    }
    fn add(&self, a: &Rational, b: &Rational) -> Rational {
        a.binop(b, |x, y| x.checked_add(y), |x, y| x + y)
    }
    fn sub(&self, a: &Rational, b: &Rational) -> Rational {
        a.binop(b, |x, y| x.checked_sub(y), |x, y| x - y)
    }
    fn mul(&self, a: &Rational, b: &Rational) -> Rational {
        a.binop(b, |x, y| x.checked_mul(y), |x, y| x * y)
    }
    fn neg(&self, a: &Rational) -> Rational {
        match a {
            Rational::Small(r) if *r.numer() != i64::MIN => Rational::Small(-r),
            _ => Rational::from_big(-a.to_big()),
        }
    }
    fn inv(&self, a: &Rational) -> Option<Rational> {
        if a.is_zero() {
            return None;
        }
        Some(match a {
            Rational::Small(r) if *r.numer() != i64::MIN => Rational::Small(r.recip()),
            _ => Rational::from_big(a.to_big().recip()),
        })
    }
    fn is_zero(&self, a: &Rational) -> bool {
        a.is_zero()
    }
    fn is_one(&self, a: &Rational) -> bool {
        matches!(a, Rational::Small(r) if r.is_one())
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn name(&self) -> String {
        "Q".to_string()
    }
    fn format(&self, a: &Rational) -> String {
        a.to_string()
    }
    fn parse(&self, s: &str) -> Result<Rational> {
        s.parse()
    }
}

/// The prime field `F_p`; elements are canonical residues in `0..p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidConfig(format!("{p} is not prime")));
        }
        if p >= 1 << 32 {
            return Err(Error::InvalidConfig(format!(
                "prime {p} too large (must be below 2^32)"
            )));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1u64;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            exp >>= 1;
        }
        acc
    }
}

impl Field for PrimeField {
    type El = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.p - b) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.p - a) % self.p
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            None
        } else {
            Some(self.pow(*a, self.p - 2))
        }
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn characteristic(&self) -> u64 {
        self.p
    }
    fn name(&self) -> String {
        format!("F_{}", self.p)
    }
    fn format(&self, a: &u64) -> String {
        a.to_string()
    }
    fn parse(&self, s: &str) -> Result<u64> {
        let r: Rational = s.parse()?;
        let big = match r {
            Rational::Small(r) => {
                BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
            }
            Rational::Big(b) => b,
        };
        let p = BigInt::from(self.p);
        let reduce = |x: &BigInt| -> u64 {
            let m = ((x % &p) + &p) % &p;
            m.to_u64().expect("residue fits")
        };
        let n = reduce(big.numer());
        let d = reduce(big.denom());
        let dinv = self
            .inv(&d)
            .ok_or_else(|| Error::Parse(format!("`{s}` has denominator divisible by {}", self.p)))?;
        Ok(self.mul(&n, &dinv))
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Runtime choice of coefficient field, as selected on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FieldChoice {
    Rational,
    Prime { p: u64 },
}

impl FieldChoice {
    pub fn label(&self) -> String {
        match self {
            FieldChoice::Rational => "Q".to_string(),
            FieldChoice::Prime { p } => format!("F_{p}"),
        }
    }
}

impl FromStr for FieldChoice {
    type Err = Error;

    /// Accepts `rational`, `q`, `Q`, `prime:7`, `fp:7`, `F7` or a bare prime.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        if t == "rational" || t == "q" {
            return Ok(FieldChoice::Rational);
        }
        let digits = t
            .strip_prefix("prime:")
            .or_else(|| t.strip_prefix("fp:"))
            .or_else(|| t.strip_prefix("f_"))
            .or_else(|| t.strip_prefix('f'))
            .unwrap_or(&t);
        let p: u64 = digits
            .parse()
            .map_err(|_| Error::InvalidConfig(format!("unknown field `{s}`")))?;
        PrimeField::new(p)?;
        Ok(FieldChoice::Prime { p })
    }
}

/// Rational magnitude helper used by report formatting.
pub fn rational_abs_is_one(r: &Rational) -> bool {
    match r {
        Rational::Small(x) => x.abs().is_one(),
        Rational::Big(b) => b.abs().is_one(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_overflow_promotes_to_big() {
        let q = Rationals;
        let big = q.from_i64(i64::MAX);
        let sq = q.mul(&big, &big);
        assert!(matches!(sq, Rational::Big(_)));
        let back = q.div(&sq, &big).unwrap();
        assert_eq!(back, big);
        assert!(matches!(back, Rational::Small(_)));
    }

    #[test]
    fn rational_parse_and_format() {
        let q = Rationals;
        let x = q.parse("6/-4").unwrap();
        assert_eq!(q.format(&x), "-3/2");
        assert!(q.parse("1/0").is_err());
        assert!(q.parse("abc").is_err());
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = PrimeField::new(7).unwrap();
        assert_eq!(f.from_i64(-1), 6);
        assert_eq!(f.mul(&3, &f.inv(&3).unwrap()), 1);
        assert_eq!(f.parse("1/2").unwrap(), 4);
        assert!(f.inv(&0).is_none());
        assert!(PrimeField::new(8).is_err());
    }

    #[test]
    fn field_choice_parsing() {
        assert_eq!("rational".parse::<FieldChoice>().unwrap(), FieldChoice::Rational);
        assert_eq!("prime:5".parse::<FieldChoice>().unwrap(), FieldChoice::Prime { p: 5 });
        assert_eq!("F11".parse::<FieldChoice>().unwrap(), FieldChoice::Prime { p: 11 });
        assert!("prime:9".parse::<FieldChoice>().is_err());
    }
}
