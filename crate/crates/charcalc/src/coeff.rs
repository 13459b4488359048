//! Exact coefficient arithmetic behind a single small ring contract.
//!
//! Every ring of coefficients used by the library implements [`CoeffRing`]:
//! arbitrary-precision rationals ([`Rational`]) for the rational cohomology
//! side, the two-element field ([`F2`]) for mod-2 characteristic classes, and
//! `num::BigInt` for integer-coefficient polynomials such as Newton
//! polynomials in the sigma basis.  All arithmetic is exact; nothing in this
//! crate ever rounds.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use serde_json::{json, Value};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use thiserror::Error;

/// Errors from coefficient-level arithmetic.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoeffError {
    /// Division by zero (or inversion of a non-unit).
    #[error("division by zero")]
    DivisionByZero,
}

/// Commutative coefficient ring with exact arithmetic.
///
/// The `sign_abs` split exists purely for rendering: printing folds the sign
/// of a coefficient into the `+`/`-` separator between terms.
pub trait CoeffRing: Clone + PartialEq + Eq + fmt::Debug + fmt::Display {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }
    /// Multiplicative inverse, if the element is a unit.
    fn try_inv(&self) -> Option<Self>;
    /// Image of an integer under the canonical map from the integers.
    fn from_int(n: &BigInt) -> Self;
    /// `(is_negative, magnitude)` pair used when folding signs into separators.
    fn sign_abs(&self) -> (bool, Self);
    /// JSON encoding of a single coefficient.
    fn coeff_json(&self) -> Value;
}

/// Arbitrary-precision rational number, always reduced, denominator positive.
///
/// Both invariants are maintained by the underlying representation on every
/// operation; `new` normalizes its arguments.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct Rational(BigRational);

impl Rational {
    /// Builds `num/den`, reducing and normalizing the sign of the denominator.
    pub fn new(num: BigInt, den: BigInt) -> Result<Self, CoeffError> {
        if Zero::is_zero(&den) {
            return Err(CoeffError::DivisionByZero);
        }
        Ok(Rational(BigRational::new(num, den)))
    }

    pub fn from_int<T: Into<BigInt>>(n: T) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    /// Convenience for small literal fractions in tests and construction.
    pub fn from_frac(num: i64, den: i64) -> Self {
        Rational::new(BigInt::from(num), BigInt::from(den)).expect("nonzero denominator")
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn checked_div(&self, rhs: &Rational) -> Result<Rational, CoeffError> {
        if rhs.0.is_zero() {
            return Err(CoeffError::DivisionByZero);
        }
        Ok(Rational(&self.0 / &rhs.0))
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }
}

impl fmt::Display for Rational {
    /// Reduced form `p/q`, or just `p` when the denominator is one.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if One::is_one(self.0.denom()) {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl CoeffRing for Rational {
    fn zero() -> Self {
        Rational(BigRational::zero())
    }
    fn one() -> Self {
        Rational(BigRational::one())
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn is_one(&self) -> bool {
        self.0.is_one()
    }
    fn add(&self, rhs: &Self) -> Self {
        Rational(&self.0 + &rhs.0)
    }
    fn neg(&self) -> Self {
        Rational(-&self.0)
    }
    fn mul(&self, rhs: &Self) -> Self {
        Rational(&self.0 * &rhs.0)
    }
    fn try_inv(&self) -> Option<Self> {
        if self.0.is_zero() {
            None
        } else {
            Some(Rational(self.0.recip()))
        }
    }
    fn from_int(n: &BigInt) -> Self {
        Rational(BigRational::from_integer(n.clone()))
    }
    fn sign_abs(&self) -> (bool, Self) {
        if self.0.is_negative() {
            (true, Rational(-&self.0))
        } else {
            (false, self.clone())
        }
    }
    fn coeff_json(&self) -> Value {
        json!({ "num": self.numer().to_string(), "den": self.denom().to_string() })
    }
}

macro_rules! rational_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(&self.0 $op &rhs.0)
            }
        }
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0 $op rhs.0)
            }
        }
    };
}

rational_binop!(Add, add, +);
rational_binop!(Sub, sub, -);
rational_binop!(Mul, mul, *);

impl Div for &Rational {
    type Output = Rational;
    /// Panics on division by zero; use [`Rational::checked_div`] to recover.
    fn div(self, rhs: &Rational) -> Rational {
        self.checked_div(rhs).expect("division by zero")
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

/// The field with two elements.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct F2(bool);

impl F2 {
    pub fn new(v: bool) -> Self {
        F2(v)
    }
    pub fn value(&self) -> u8 {
        u8::from(self.0)
    }
}

impl fmt::Display for F2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

impl CoeffRing for F2 {
    fn zero() -> Self {
        F2(false)
    }
    fn one() -> Self {
        F2(true)
    }
    fn is_zero(&self) -> bool {
        !self.0
    }
    fn is_one(&self) -> bool {
        self.0
    }
    fn add(&self, rhs: &Self) -> Self {
        F2(self.0 ^ rhs.0)
    }
    fn neg(&self) -> Self {
        *self
    }
    fn mul(&self, rhs: &Self) -> Self {
        F2(self.0 & rhs.0)
    }
    fn try_inv(&self) -> Option<Self> {
        if self.0 {
            Some(*self)
        } else {
            None
        }
    }
    fn from_int(n: &BigInt) -> Self {
        F2(n.bit(0))
    }
    fn sign_abs(&self) -> (bool, Self) {
        (false, *self)
    }
    fn coeff_json(&self) -> Value {
        json!(self.value())
    }
}

impl CoeffRing for BigInt {
    fn zero() -> Self {
        <BigInt as Zero>::zero()
    }
    fn one() -> Self {
        <BigInt as One>::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_one(&self) -> bool {
        One::is_one(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn try_inv(&self) -> Option<Self> {
        if One::is_one(self) || One::is_one(&-self) {
            Some(self.clone())
        } else {
            None
        }
    }
    fn from_int(n: &BigInt) -> Self {
        n.clone()
    }
    fn sign_abs(&self) -> (bool, Self) {
        if self.is_negative() {
            (true, -self)
        } else {
            (false, self.clone())
        }
    }
    fn coeff_json(&self) -> Value {
        Value::String(self.to_string())
    }
}

/// `k!` as a big integer.
pub fn factorial(k: u32) -> BigInt {
    let mut acc = BigInt::from(1);
    for j in 2..=i64::from(k) {
        acc *= j;
    }
    acc
}

/// `1/k!` as a rational; exact for every `k`.
pub fn factorial_inverse(k: u32) -> Rational {
    Rational::new(BigInt::from(1), factorial(k)).expect("factorial is nonzero")
}

/// Generalized binomial coefficient `C(n, k)` for integer `n` (possibly
/// negative) and `k >= 0`, computed exactly in the integers via
/// `C(n, k) = C(n, k-1) * (n - k + 1) / k`.
pub fn binomial(n: i64, k: u64) -> BigInt {
    binomial_big(&BigInt::from(n), k)
}

/// Generalized binomial coefficient with a big-integer upper argument.
pub fn binomial_big(n: &BigInt, k: u64) -> BigInt {
    let mut c = BigInt::from(1);
    for j in 1..=k {
        c = c * (n - BigInt::from(j) + 1u32) / BigInt::from(j);
    }
    c
}
