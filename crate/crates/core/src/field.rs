//! Exact scalars: arbitrary-precision rationals and prime fields F_p.
//!
//! Every scalar carries its field tag. Mixing fields in arithmetic is a
//! programming error and panics; public entry points validate tags up
//! front and report `Error::FieldMismatch` instead.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Field tag: the rationals or F_p for a prime p <= 2^31.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Field {
    Rational,
    Prime(u32),
}

impl Field {
    /// Validated constructor for a prime field.
    pub fn prime(p: u64) -> Result<Field> {
        if p <= (1 << 31) && is_prime(p) {
            Ok(Field::Prime(p as u32))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn is_prime_field(&self) -> bool {
        matches!(self, Field::Prime(_))
    }

    /// Number of elements, if finite.
    pub fn order(&self) -> Option<u64> {
        match self {
            Field::Rational => None,
            Field::Prime(p) => Some(*p as u64),
        }
    }

    pub fn zero(&self) -> Scalar {
        Scalar::from_integer(*self, 0)
    }

    pub fn one(&self) -> Scalar {
        Scalar::from_integer(*self, 1)
    }

    /// The element with index `i` in the canonical enumeration of the
    /// field: F_p is ordered 0, 1, ..., p-1. Only prime fields enumerate.
    pub fn element(&self, i: u64) -> Result<Scalar> {
        match self {
            Field::Rational => Err(Error::EnumerationNeedsPrimeField("Q".into())),
            Field::Prime(p) => {
                if i < *p as u64 {
                    Ok(Scalar::Prime {
                        p: *p,
                        value: i as u32,
                    })
                } else {
                    Err(Error::Invalid(format!(
                        "element index {i} out of range for F_{p}"
                    )))
                }
            }
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "F{p}"),
        }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// An exact field element. Rationals are kept reduced with positive
/// denominator (BigRational maintains that); F_p values live in [0, p).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Scalar {
    Rational(BigRational),
    Prime { p: u32, value: u32 },
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Rational(_) => Field::Rational,
            Scalar::Prime { p, .. } => Field::Prime(*p),
        }
    }

    pub fn from_integer(field: Field, n: i64) -> Scalar {
        match field {
            Field::Rational => Scalar::Rational(BigRational::from_integer(BigInt::from(n))),
            Field::Prime(p) => {
                let m = n.rem_euclid(p as i64);
                Scalar::Prime { p, value: m as u32 }
            }
        }
    }

    /// n/d over Q, or (n * d^{-1}) mod p over F_p.
    pub fn from_fraction(field: Field, n: i64, d: i64) -> Result<Scalar> {
        if d == 0 {
            return Err(Error::DivisionByZero);
        }
        match field {
            Field::Rational => Ok(Scalar::Rational(BigRational::new(
                BigInt::from(n),
                BigInt::from(d),
            ))),
            Field::Prime(_) => {
                let num = Scalar::from_integer(field, n);
                let den = Scalar::from_integer(field, d);
                let inv = den.inverse()?;
                Ok(&num * &inv)
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Prime { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Prime { value, .. } => *value == 1,
        }
    }

    pub fn inverse(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        match self {
            Scalar::Rational(r) => Ok(Scalar::Rational(r.recip())),
            Scalar::Prime { p, value } => {
                let inv = mod_pow(*value as u64, *p as u64 - 2, *p as u64);
                Ok(Scalar::Prime {
                    p: *p,
                    value: inv as u32,
                })
            }
        }
    }

    fn check_same_field(&self, other: &Scalar) {
        debug_assert_eq!(
            self.field(),
            other.field(),
            "scalar arithmetic across fields"
        );
        if self.field() != other.field() {
            panic!("scalar arithmetic across fields");
        }
    }
}

fn mod_pow(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

impl std::ops::Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.check_same_field(rhs);
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Prime { p, value: a }, Scalar::Prime { value: b, .. }) => {
                let s = (*a as u64 + *b as u64) % (*p as u64);
                Scalar::Prime {
                    p: *p,
                    value: s as u32,
                }
            }
            _ => unreachable!(),
        }
    }
}

impl std::ops::Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl std::ops::Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.check_same_field(rhs);
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Prime { p, value: a }, Scalar::Prime { value: b, .. }) => {
                let m = (*a as u64 * *b as u64) % (*p as u64);
                Scalar::Prime {
                    p: *p,
                    value: m as u32,
                }
            }
            _ => unreachable!(),
        }
    }
}

impl std::ops::Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Prime { p, value } => {
                let v = if *value == 0 { 0 } else { p - value };
                Scalar::Prime { p: *p, value: v }
            }
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else if r.denom().is_negative() {
                    // BigRational keeps denominators positive; defensive only.
                    write!(f, "{}/{}", -r.numer(), -r.denom())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Prime { value, .. } => write!(f, "{value}"),
        }
    }
}
