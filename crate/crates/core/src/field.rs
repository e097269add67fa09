//! Exact coefficient fields: the rationals and prime fields `F_p`.
//!
//! A [`Scalar`] carries its field with it, so values from different fields
//! never mix silently. Mixing them in arithmetic is a programming error and
//! panics; the container types ([`Vector`](crate::linalg::Vector) and
//! friends) check fields up front and report [`Error::FieldMismatch`].

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest modulus accepted for a prime field.
pub const MAX_PRIME: u64 = 1 << 31;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ScalarField {
    Rationals,
    Prime(u64),
}

impl ScalarField {
    pub fn prime(p: u64) -> Result<Self> {
        if p < 2 || p >= MAX_PRIME || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(ScalarField::Prime(p))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            ScalarField::Rationals => 0,
            ScalarField::Prime(p) => *p,
        }
    }

    /// `CharacteristicTooSmall` unless the characteristic is 0 or exceeds `bound`.
    pub fn require_characteristic_above(&self, bound: usize) -> Result<()> {
        match self {
            ScalarField::Rationals => Ok(()),
            ScalarField::Prime(p) if *p > bound as u64 => Ok(()),
            ScalarField::Prime(p) => Err(Error::CharacteristicTooSmall {
                characteristic: *p,
                required: bound,
            }),
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            ScalarField::Rationals => Scalar::Rational(BigRational::zero()),
            ScalarField::Prime(p) => Scalar::Residue {
                value: 0,
                modulus: *p,
            },
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            ScalarField::Rationals => Scalar::Rational(BigRational::from_integer(n.into())),
            ScalarField::Prime(p) => Scalar::Residue {
                value: n.rem_euclid(*p as i64) as u64,
                modulus: *p,
            },
        }
    }

    /// Image of a rational number; fails when the denominator vanishes mod p.
    pub fn from_rational(&self, q: &BigRational) -> Result<Scalar> {
        match self {
            ScalarField::Rationals => Ok(Scalar::Rational(q.clone())),
            ScalarField::Prime(p) => {
                let modulus = BigInt::from(*p);
                let num = q.numer().mod_floor(&modulus).to_u64().unwrap_or(0);
                let den = q.denom().mod_floor(&modulus).to_u64().unwrap_or(0);
                if den == 0 {
                    return Err(Error::NotRepresentable(q.to_string(), *self));
                }
                let num = Scalar::Residue {
                    value: num,
                    modulus: *p,
                };
                let den = Scalar::Residue {
                    value: den,
                    modulus: *p,
                };
                Ok(num * den.inverse().expect("nonzero residue"))
            }
        }
    }

    /// Parse `"n"` or `"n/d"` into this field.
    pub fn parse(&self, text: &str) -> Result<Scalar> {
        let q = parse_rational(text)?;
        self.from_rational(&q)
    }

    /// `1 / k!`, which exists only when the characteristic exceeds `k`.
    pub fn inverse_factorial(&self, k: usize) -> Result<Scalar> {
        self.require_characteristic_above(k)?;
        let mut f = self.one();
        for i in 2..=k {
            f = f * self.from_i64(i as i64);
        }
        Ok(f.inverse().expect("factorial is a unit"))
    }

    /// `2^e` for any integer exponent (odd characteristic only when `e < 0`).
    pub fn pow2(&self, e: i64) -> Scalar {
        let two = self.from_i64(2);
        let base = if e < 0 {
            two.inverse().expect("2 is a unit in this field")
        } else {
            two
        };
        base.pow(e.unsigned_abs())
    }
}

impl fmt::Display for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarField::Rationals => write!(f, "Q"),
            ScalarField::Prime(p) => write!(f, "F_{p}"),
        }
    }
}

impl FromStr for ScalarField {
    type Err = Error;

    /// `"Q"` for the rationals, or a prime such as `"7"` / `"p=7"`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("q") {
            return Ok(ScalarField::Rationals);
        }
        let digits = s.strip_prefix("p=").unwrap_or(s);
        let p: u64 = digits
            .parse()
            .map_err(|_| Error::Parse(format!("unknown field '{s}'")))?;
        ScalarField::prime(p)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut i = 2;
    while i * i <= n {
        if n % i == 0 {
            return false;
        }
        i += 1;
    }
    true
}

pub fn parse_rational(text: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("'{text}' is not an exact rational"));
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

/// An exact field element.
///
/// Rationals are kept in lowest terms with a positive denominator and
/// residues in `[0, p)`, so derived equality is exact equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Residue { value: u64, modulus: u64 },
}

impl Scalar {
    pub fn field(&self) -> ScalarField {
        match self {
            Scalar::Rational(_) => ScalarField::Rationals,
            Scalar::Residue { modulus, .. } => ScalarField::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Residue { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_one(),
            Scalar::Residue { value, .. } => *value == 1,
        }
    }

    pub fn inverse(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Rational(q) => Scalar::Rational(q.recip()),
            Scalar::Residue { modulus, .. } => self.pow(modulus - 2),
        })
    }

    pub fn pow(&self, mut e: u64) -> Scalar {
        let mut base = self.clone();
        let mut acc = self.field().one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// The rational value, if this is a rational scalar.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(q) => Some(q),
            Scalar::Residue { .. } => None,
        }
    }

    /// Integer value of a rational scalar with denominator 1.
    pub fn as_integer(&self) -> Option<BigInt> {
        match self {
            Scalar::Rational(q) if q.is_integer() => Some(q.numer().clone()),
            _ => None,
        }
    }

    pub fn is_negative(&self) -> bool {
        matches!(self, Scalar::Rational(q) if q.is_negative())
    }
}

impl fmt::Display for Scalar {
    /// Canonical `num/den` form; residues print as `r/1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => write!(f, "{}/{}", q.numer(), q.denom()),
            Scalar::Residue { value, .. } => write!(f, "{value}/1"),
        }
    }
}

fn residue_op(a: &Scalar, b: &Scalar, op: impl Fn(u128, u128, u128) -> u128) -> Scalar {
    match (a, b) {
        (
            Scalar::Residue {
                value: x,
                modulus: p,
            },
            Scalar::Residue {
                value: y,
                modulus: q,
            },
        ) if p == q => Scalar::Residue {
            value: op(*x as u128, *y as u128, *p as u128) as u64,
            modulus: *p,
        },
        _ => panic!("scalar field mismatch: {} vs {}", a.field(), b.field()),
    }
}

impl Add<&Scalar> for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            _ => residue_op(self, rhs, |x, y, p| (x + y) % p),
        }
    }
}

impl Sub<&Scalar> for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a - b),
            _ => residue_op(self, rhs, |x, y, p| (x + p - y) % p),
        }
    }
}

impl Mul<&Scalar> for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            _ => residue_op(self, rhs, |x, y, p| (x * y) % p),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(q) => Scalar::Rational(-q),
            Scalar::Residue { value, modulus } => Scalar::Residue {
                value: (modulus - value) % modulus,
                modulus: *modulus,
            },
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! forward_owned {
    ($($tr:ident $method:ident),*) => {$(
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar { (&self).$method(&rhs) }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar { (&self).$method(rhs) }
        }
        impl $tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar { self.$method(&rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}
