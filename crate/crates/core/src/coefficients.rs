//! Exact coefficient fields: 𝔽₂, 𝔽_p and ℚ.
//!
//! Every chain, matrix entry and DGA coefficient in the crate is a [`Scalar`].
//! A scalar carries its field with it, so arithmetic between scalars of
//! different fields is detected instead of silently producing garbage. The
//! `checked_*` methods report that as [`FieldError::FieldMismatch`]; the
//! operator impls (`+`, `*`, ...) panic on it, which is what the linear
//! algebra kernels use once a computation has been pinned to one field.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Exact rational numbers used for actions, lengths, times and rates.
pub type Rational = BigRational;

/// Primes are limited to `u32` so residue products fit comfortably in `u64`.
pub const MAX_PRIME: u64 = u32::MAX as u64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(FieldSpec, FieldSpec),
    #[error("{0} is not a prime (or exceeds {MAX_PRIME})")]
    NotPrime(u64),
    #[error("cannot parse field tag `{0}` (expected F2, F<p> or Q)")]
    BadFieldTag(String),
    #[error("cannot parse scalar `{text}` in {field}")]
    BadScalar { text: String, field: FieldSpec },
}

/// The ground field of a computation.
///
/// `F2` is kept distinct from `Fp(2)` only syntactically: [`FieldSpec::prime`]
/// normalizes `2` to `F2`, so the two never coexist.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldSpec {
    F2,
    Fp(u64),
    Q,
}

fn is_prime(p: u64) -> bool {
    if !(2..=MAX_PRIME).contains(&p) {
        return false;
    }
    if p.is_multiple_of(2) {
        return p == 2;
    }
    let mut d = 3u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

impl FieldSpec {
    /// Validated constructor for a prime field.
    pub fn prime(p: u64) -> Result<FieldSpec, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(if p == 2 { FieldSpec::F2 } else { FieldSpec::Fp(p) })
    }

    /// `Some(p)` for finite fields, `None` for ℚ.
    pub fn characteristic(&self) -> Option<u64> {
        match *self {
            FieldSpec::F2 => Some(2),
            FieldSpec::Fp(p) => Some(p),
            FieldSpec::Q => None,
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self.characteristic() {
            Some(p) => Scalar::Mod {
                p,
                value: (n.rem_euclid(p as i64)) as u64,
            },
            None => Scalar::Rat(Rational::from_integer(BigInt::from(n))),
        }
    }

    /// Embeds an exact rational. Fails in 𝔽_p when the denominator is
    /// divisible by `p`.
    pub fn from_rational(&self, q: &Rational) -> Result<Scalar, FieldError> {
        match self.characteristic() {
            None => Ok(Scalar::Rat(q.clone())),
            Some(p) => {
                let pb = BigInt::from(p);
                let reduce = |x: &BigInt| -> u64 {
                    let r = ((x % &pb) + &pb) % &pb;
                    r.try_into().expect("residue fits in u64")
                };
                let num = Scalar::Mod {
                    p,
                    value: reduce(q.numer()),
                };
                let den = Scalar::Mod {
                    p,
                    value: reduce(q.denom()),
                };
                Ok(num * den.inv()?)
            }
        }
    }

    /// Parses `"3"`, `"-2"` or `"3/4"` into this field.
    pub fn parse_scalar(&self, text: &str) -> Result<Scalar, FieldError> {
        let bad = || FieldError::BadScalar {
            text: text.to_string(),
            field: *self,
        };
        let q = parse_rational(text).ok_or_else(bad)?;
        self.from_rational(&q).map_err(|_| bad())
    }

    /// Every element of a finite field, in residue order. `None` for ℚ.
    pub fn elements(&self) -> Option<Vec<Scalar>> {
        self.characteristic()
            .map(|p| (0..p).map(|value| Scalar::Mod { p, value }).collect())
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::F2 => write!(f, "F2"),
            FieldSpec::Fp(p) => write!(f, "F{p}"),
            FieldSpec::Q => write!(f, "Q"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = FieldError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t == "Q" {
            return Ok(FieldSpec::Q);
        }
        let p = t
            .strip_prefix('F')
            .and_then(|rest| rest.parse::<u64>().ok())
            .ok_or_else(|| FieldError::BadFieldTag(s.to_string()))?;
        FieldSpec::prime(p)
    }
}

/// Parses an exact rational from `"7"`, `"-3/4"` or `" 1/2 "`.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let t = text.trim();
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: BigInt = n.parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(Rational::new(n, d))
}

/// Shorthand for small rational literals.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// An exact field element in canonical form.
///
/// Residues are kept in `0..p`; rationals are reduced with a positive
/// denominator (guaranteed by `num_rational`), so derived equality and
/// hashing are value equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scalar {
    Mod { p: u64, value: u64 },
    Rat(Rational),
}

impl Scalar {
    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Mod { p: 2, .. } => FieldSpec::F2,
            Scalar::Mod { p, .. } => FieldSpec::Fp(*p),
            Scalar::Rat(_) => FieldSpec::Q,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Mod { value, .. } => *value == 0,
            Scalar::Rat(q) => q.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Mod { value, .. } => *value == 1,
            Scalar::Rat(q) => q.is_one(),
        }
    }

    /// Re-normalizes the representation. All constructors already produce
    /// canonical values, so this is the identity on well-formed scalars.
    pub fn canonical(&self) -> Scalar {
        match self {
            Scalar::Mod { p, value } => Scalar::Mod {
                p: *p,
                value: value % p,
            },
            Scalar::Rat(q) => Scalar::Rat(Rational::new(q.numer().clone(), q.denom().clone())),
        }
    }

    fn same_field(&self, other: &Scalar) -> Result<(), FieldError> {
        let (a, b) = (self.field(), other.field());
        if a == b {
            Ok(())
        } else {
            Err(FieldError::FieldMismatch(a, b))
        }
    }

    pub fn checked_add(&self, other: &Scalar) -> Result<Scalar, FieldError> {
        self.same_field(other)?;
        Ok(match (self, other) {
            (Scalar::Mod { p, value: a }, Scalar::Mod { value: b, .. }) => Scalar::Mod {
                p: *p,
                value: (a + b) % p,
            },
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            _ => unreachable!(),
        })
    }

    pub fn checked_sub(&self, other: &Scalar) -> Result<Scalar, FieldError> {
        self.checked_add(&other.neg_ref())
    }

    pub fn checked_mul(&self, other: &Scalar) -> Result<Scalar, FieldError> {
        self.same_field(other)?;
        Ok(match (self, other) {
            (Scalar::Mod { p, value: a }, Scalar::Mod { value: b, .. }) => Scalar::Mod {
                p: *p,
                value: (a * b) % p,
            },
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            _ => unreachable!(),
        })
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar, FieldError> {
        self.checked_mul(&other.inv()?)
    }

    pub fn neg_ref(&self) -> Scalar {
        match self {
            Scalar::Mod { p, value } => Scalar::Mod {
                p: *p,
                value: (p - value) % p,
            },
            Scalar::Rat(q) => Scalar::Rat(-q),
        }
    }

    /// Multiplicative inverse; `DivisionByZero` on zero.
    pub fn inv(&self) -> Result<Scalar, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(match self {
            Scalar::Mod { p, value } => {
                // Fermat: a^(p-2)
                let (mut base, mut exp, mut acc) = (*value, p - 2, 1u64);
                while exp > 0 {
                    if exp & 1 == 1 {
                        acc = acc * base % p;
                    }
                    base = base * base % p;
                    exp >>= 1;
                }
                Scalar::Mod { p: *p, value: acc }
            }
            Scalar::Rat(q) => Scalar::Rat(q.recip()),
        })
    }

    /// `(-1)^k` in the field of `self`.
    pub fn sign(field: FieldSpec, exponent: i64) -> Scalar {
        if exponent.rem_euclid(2) == 0 {
            field.one()
        } else {
            field.one().neg_ref()
        }
    }

    /// Symmetric integer representative for residues, the value itself for ℚ.
    pub fn to_rational(&self) -> Rational {
        match self {
            Scalar::Mod { value, .. } => int(*value as i64),
            Scalar::Rat(q) => q.clone(),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Mod { value, .. } => write!(f, "{value}"),
            Scalar::Rat(q) => write!(f, "{q}"),
        }
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                self.$checked(rhs).expect("scalar arithmetic across fields")
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

/// Absolute value helper for rationals (used by tolerance-free comparisons).
pub fn abs(q: &Rational) -> Rational {
    q.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_in_f5() {
        let f5 = FieldSpec::prime(5).unwrap();
        assert_eq!(f5.from_i64(2).inv().unwrap(), f5.from_i64(3));
    }

    #[test]
    fn characteristic_two() {
        let f2 = FieldSpec::F2;
        assert_eq!(f2.one() + f2.one(), f2.zero());
    }

    #[test]
    fn rational_reduction() {
        let q = FieldSpec::Q;
        let x = q.parse_scalar("2/3").unwrap();
        let y = q.parse_scalar("3/4").unwrap();
        assert_eq!(x * y, q.parse_scalar("1/2").unwrap());
        assert_eq!(q.parse_scalar("4/8").unwrap().to_string(), "1/2");
        assert_eq!(q.parse_scalar("3/-6").unwrap().to_string(), "-1/2");
    }

    #[test]
    fn errors() {
        let f5 = FieldSpec::prime(5).unwrap();
        assert_eq!(f5.zero().inv(), Err(FieldError::DivisionByZero));
        assert_eq!(
            f5.one().checked_add(&FieldSpec::Q.one()),
            Err(FieldError::FieldMismatch(f5, FieldSpec::Q))
        );
        assert_eq!(FieldSpec::prime(9), Err(FieldError::NotPrime(9)));
        assert!(f5.parse_scalar("1/5").is_err());
        assert!(FieldSpec::Q.parse_scalar("1/0").is_err());
    }

    #[test]
    fn field_tags() {
        assert_eq!("F2".parse::<FieldSpec>().unwrap(), FieldSpec::F2);
        assert_eq!("F5".parse::<FieldSpec>().unwrap(), FieldSpec::Fp(5));
        assert_eq!("Q".parse::<FieldSpec>().unwrap(), FieldSpec::Q);
        assert!("F4".parse::<FieldSpec>().is_err());
        assert!("R".parse::<FieldSpec>().is_err());
        assert_eq!(FieldSpec::Fp(7).to_string(), "F7");
    }

    #[test]
    fn fractions_in_prime_fields() {
        let f7 = FieldSpec::prime(7).unwrap();
        // 1/2 = 4 mod 7
        assert_eq!(f7.parse_scalar("1/2").unwrap(), f7.from_i64(4));
        assert_eq!(f7.from_i64(-1), f7.from_i64(6));
    }
}
