//! Scalars over the two supported fields: the rationals and prime fields GF(p).
//!
//! A [`FieldScalar`] carries enough information to identify its field, so
//! mixing scalars from different fields is detected instead of silently
//! producing garbage. The `try_*` methods report mismatches as errors; the
//! `std::ops` impls panic on them, which is what the matrix code uses after
//! it has checked field agreement once at the boundary.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Which field the entries live in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Rationals,
    PrimeField(u64),
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p < 4 {
        return true;
    }
    if p % 2 == 0 {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

impl FieldSpec {
    /// GF(p), rejecting composite moduli. Moduli are limited to 63 bits so
    /// products fit comfortably in `u128`.
    pub fn prime(p: u64) -> Result<Self> {
        if p >= 1 << 63 || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(FieldSpec::PrimeField(p))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::PrimeField(p) => *p,
        }
    }

    /// Number of elements, `None` for the rationals.
    pub fn order(&self) -> Option<u64> {
        match self {
            FieldSpec::Rationals => None,
            FieldSpec::PrimeField(p) => Some(*p),
        }
    }

    pub fn zero(&self) -> FieldScalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> FieldScalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> FieldScalar {
        self.from_bigint(&BigInt::from(v))
    }

    pub fn from_bigint(&self, v: &BigInt) -> FieldScalar {
        match self {
            FieldSpec::Rationals => FieldScalar::Rational(BigRational::from_integer(v.clone())),
            FieldSpec::PrimeField(p) => {
                let m = BigInt::from(*p);
                let mut r = v % &m;
                if r.is_negative() {
                    r += &m;
                }
                let value = u64::try_from(r).expect("residue fits in u64");
                FieldScalar::Residue { value, modulus: *p }
            }
        }
    }

    /// `num / den` in this field.
    pub fn from_ratio(&self, num: i64, den: i64) -> Result<FieldScalar> {
        let n = self.from_i64(num);
        let d = self.from_i64(den);
        n.try_mul(&d.try_inv()?)
    }

    /// Parses one matrix entry: an integer, or `a/b` over the rationals.
    /// Over GF(p) integers are reduced mod p; a fraction is accepted when its
    /// denominator is invertible mod p.
    pub fn parse_scalar(&self, s: &str) -> Result<FieldScalar> {
        let s = s.trim();
        let parse_int = |t: &str| {
            t.trim()
                .parse::<BigInt>()
                .map_err(|_| Error::Parse(format!("bad entry `{s}`")))
        };
        let (num, den) = match s.split_once('/') {
            Some((a, b)) => (parse_int(a)?, parse_int(b)?),
            None => (parse_int(s)?, BigInt::one()),
        };
        if den.is_zero() {
            return Err(Error::Parse(format!("zero denominator in `{s}`")));
        }
        match self {
            FieldSpec::Rationals => Ok(FieldScalar::Rational(BigRational::new(num, den))),
            FieldSpec::PrimeField(_) => {
                let d = self.from_bigint(&den);
                let d_inv = d
                    .try_inv()
                    .map_err(|_| Error::Parse(format!("denominator of `{s}` vanishes mod p")))?;
                Ok(self.from_bigint(&num).try_mul(&d_inv)?)
            }
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "QQ"),
            FieldSpec::PrimeField(p) => write!(f, "GF({p})"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "QQ" {
            return Ok(FieldSpec::Rationals);
        }
        let inner = s
            .strip_prefix("GF(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("unknown field `{s}`, expected QQ or GF(p)")))?;
        let p: u64 = inner
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad modulus in `{s}`")))?;
        FieldSpec::prime(p)
    }
}

impl Serialize for FieldSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FieldSpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// An element of a [`FieldSpec`] field, always in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FieldScalar {
    /// Lowest terms, positive denominator (maintained by `BigRational`).
    Rational(BigRational),
    /// Canonical representative in `[0, modulus)`.
    Residue { value: u64, modulus: u64 },
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    let (mut old_r, mut r) = (a as i128, p as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    debug_assert_eq!(old_r, 1);
    old_s.rem_euclid(p as i128) as u64
}

impl FieldScalar {
    pub fn field(&self) -> FieldSpec {
        match self {
            FieldScalar::Rational(_) => FieldSpec::Rationals,
            FieldScalar::Residue { modulus, .. } => FieldSpec::PrimeField(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldScalar::Rational(q) => q.is_zero(),
            FieldScalar::Residue { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldScalar::Rational(q) => q.is_one(),
            FieldScalar::Residue { value, .. } => *value == 1,
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        let (a, b) = (self.field(), other.field());
        if a != b {
            return Err(Error::FieldMismatch(a, b));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(match (self, other) {
            (FieldScalar::Rational(a), FieldScalar::Rational(b)) => FieldScalar::Rational(a + b),
            (
                FieldScalar::Residue { value: a, modulus },
                FieldScalar::Residue { value: b, .. },
            ) => FieldScalar::Residue {
                value: ((*a as u128 + *b as u128) % *modulus as u128) as u64,
                modulus: *modulus,
            },
            _ => unreachable!(),
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg_ref())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(match (self, other) {
            (FieldScalar::Rational(a), FieldScalar::Rational(b)) => FieldScalar::Rational(a * b),
            (
                FieldScalar::Residue { value: a, modulus },
                FieldScalar::Residue { value: b, .. },
            ) => FieldScalar::Residue {
                value: ((*a as u128 * *b as u128) % *modulus as u128) as u64,
                modulus: *modulus,
            },
            _ => unreachable!(),
        })
    }

    fn neg_ref(&self) -> Self {
        match self {
            FieldScalar::Rational(a) => FieldScalar::Rational(-a),
            FieldScalar::Residue { value, modulus } => FieldScalar::Residue {
                value: if *value == 0 { 0 } else { modulus - value },
                modulus: *modulus,
            },
        }
    }

    /// Multiplicative inverse; `DivisionByZero` for zero.
    pub fn try_inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            FieldScalar::Rational(a) => FieldScalar::Rational(a.recip()),
            FieldScalar::Residue { value, modulus } => FieldScalar::Residue {
                value: mod_inverse(*value, *modulus),
                modulus: *modulus,
            },
        })
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        self.try_mul(&other.try_inv()?)
    }

    pub fn inv(&self) -> Self {
        self.try_inv().expect("inverse of zero")
    }
}

impl fmt::Display for FieldScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldScalar::Rational(q) => {
                if q.denom().is_one() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            FieldScalar::Residue { value, .. } => write!(f, "{value}"),
        }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $try:ident) => {
        impl $tr<&FieldScalar> for &FieldScalar {
            type Output = FieldScalar;
            fn $method(self, rhs: &FieldScalar) -> FieldScalar {
                self.$try(rhs).expect("scalars from different fields")
            }
        }
        impl $tr for FieldScalar {
            type Output = FieldScalar;
            fn $method(self, rhs: FieldScalar) -> FieldScalar {
                (&self).$try(&rhs).expect("scalars from different fields")
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl Neg for &FieldScalar {
    type Output = FieldScalar;
    fn neg(self) -> FieldScalar {
        self.neg_ref()
    }
}

impl Neg for FieldScalar {
    type Output = FieldScalar;
    fn neg(self) -> FieldScalar {
        self.neg_ref()
    }
}
