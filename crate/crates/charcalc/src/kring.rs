//! The split model of complex K-theory over `m` invertible base line classes.
//!
//! A [`KElement`] is a finite integer combination of Laurent monomials
//! `L(a_1,...,a_m) = L_1^{a_1}*...*L_m^{a_m}`.  Effective elements (all
//! multiplicities nonnegative) model honest split bundles; rank-zero elements
//! form the augmentation ideal of reduced classes.  On top of the ring sit
//! the lambda and gamma operation series, Adams operations computed by two
//! independent routes, and K-theoretic Chern classes.
//!
//! Invariants:
//! - every stored monomial has exponent vector length `m` and nonzero
//!   multiplicity;
//! - series produced by `lambda_series`/`gamma_series` have constant term 1;
//! - `adams_split` and `adams_newton` agree on every element (checked by the
//!   verification suite; the split route is the transparent oracle).

use crate::coeff::binomial;
use crate::ring::CommRing;
use crate::symfun::{elementary_symmetric, evaluate_newton, evaluate_poly};
use num::bigint::{BigInt, BigUint};
use num::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use thiserror::Error;

/// Errors from K-theory arithmetic and operations.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KringError {
    #[error("elements live over different numbers of base line classes (expected {expected}, got {got})")]
    BaseMismatch { expected: usize, got: usize },
    #[error("operation series have different truncation orders")]
    OrderMismatch,
    #[error("operation requires an effective element (all multiplicities nonnegative)")]
    NonEffective,
    #[error("rank does not fit in memory as a summand count")]
    RankTooLarge,
    #[error("series constant term is not a unit monomial")]
    NonUnitConstantTerm,
}

/// Virtual split bundle: an integer combination of line monomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KElement {
    m: usize,
    terms: BTreeMap<Vec<i64>, BigInt>,
}

impl KElement {
    pub fn zero(m: usize) -> Self {
        KElement {
            m,
            terms: BTreeMap::new(),
        }
    }

    /// The multiplicative unit `1 = L(0,...,0)`.
    pub fn unit(m: usize) -> Self {
        KElement::trivial(m, 1)
    }

    /// The trivial element of rank `n`.
    pub fn trivial<T: Into<BigInt>>(m: usize, n: T) -> Self {
        let mut e = KElement::zero(m);
        e.add_term(vec![0; m], n.into());
        e
    }

    /// A single line monomial `L(a_1,...,a_m)`.
    pub fn line(exps: Vec<i64>) -> Self {
        let m = exps.len();
        let mut e = KElement::zero(m);
        e.add_term(exps, BigInt::one());
        e
    }

    /// Builds an element from `(exponents, multiplicity)` pairs, summing
    /// duplicates and dropping zero multiplicities.
    pub fn from_terms<I, T>(m: usize, terms: I) -> Result<Self, KringError>
    where
        I: IntoIterator<Item = (Vec<i64>, T)>,
        T: Into<BigInt>,
    {
        let mut e = KElement::zero(m);
        for (exps, n) in terms {
            if exps.len() != m {
                return Err(KringError::BaseMismatch {
                    expected: m,
                    got: exps.len(),
                });
            }
            e.add_term(exps, n.into());
        }
        Ok(e)
    }

    fn add_term(&mut self, exps: Vec<i64>, n: BigInt) {
        if n.is_zero() {
            return;
        }
        debug_assert_eq!(exps.len(), self.m);
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(n);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + n;
                if sum.is_zero() {
                    e.remove();
                } else {
                    e.insert(sum);
                }
            }
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending lexicographic order of exponent vectors.
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff_of(&self, exps: &[i64]) -> BigInt {
        self.terms.get(exps).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Augmentation: the sum of all multiplicities.
    pub fn rank(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// True when all multiplicities are nonnegative.
    pub fn is_effective(&self) -> bool {
        self.terms.values().all(|n| !n.is_negative())
    }

    /// True when the element lies in the augmentation ideal (rank zero).
    pub fn is_reduced(&self) -> bool {
        self.rank().is_zero()
    }

    /// The reduced part `self - rank(self) * 1`.
    pub fn reduced(&self) -> Self {
        let mut out = self.clone();
        out.add_term(vec![0; self.m], -self.rank());
        out
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, KringError> {
        self.check_base(other)?;
        let mut out = self.clone();
        for (a, n) in &other.terms {
            out.add_term(a.clone(), n.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, KringError> {
        self.check_base(other)?;
        let mut out = self.clone();
        for (a, n) in &other.terms {
            out.add_term(a.clone(), -n);
        }
        Ok(out)
    }

    /// Tensor product, extended bilinearly from `L(a) * L(b) = L(a + b)`.
    pub fn tensor(&self, other: &Self) -> Result<Self, KringError> {
        self.check_base(other)?;
        let mut out = KElement::zero(self.m);
        for (a, na) in &self.terms {
            for (b, nb) in &other.terms {
                let exps: Vec<i64> = a.iter().zip(b).map(|(&x, &y)| x + y).collect();
                out.add_term(exps, na * nb);
            }
        }
        Ok(out)
    }

    pub fn map_neg(&self) -> Self {
        KElement {
            m: self.m,
            terms: self.terms.iter().map(|(a, n)| (a.clone(), -n)).collect(),
        }
    }

    pub fn scale_int(&self, n: &BigInt) -> Self {
        if n.is_zero() {
            return KElement::zero(self.m);
        }
        KElement {
            m: self.m,
            terms: self.terms.iter().map(|(a, c)| (a.clone(), c * n)).collect(),
        }
    }

    fn check_base(&self, other: &Self) -> Result<(), KringError> {
        if self.m != other.m {
            return Err(KringError::BaseMismatch {
                expected: self.m,
                got: other.m,
            });
        }
        Ok(())
    }

    /// Inverse of a unit monomial `±L(a)`; `None` for anything else.
    pub fn try_unit_inverse(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (a, n) = self.terms.iter().next().expect("one term");
        if !n.magnitude().is_one() {
            return None;
        }
        let inv_exps: Vec<i64> = a.iter().map(|&e| -e).collect();
        let mut out = KElement::zero(self.m);
        out.add_term(inv_exps, n.clone());
        Some(out)
    }

    /// The multiset of line summands of an effective element, in ascending
    /// lexicographic order, with multiplicities expanded.
    pub fn line_summands(&self) -> Result<Vec<Vec<i64>>, KringError> {
        if !self.is_effective() {
            return Err(KringError::NonEffective);
        }
        let mut out = Vec::new();
        for (a, n) in &self.terms {
            let copies = n.to_usize().ok_or(KringError::RankTooLarge)?;
            for _ in 0..copies {
                out.push(a.clone());
            }
        }
        Ok(out)
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .rev()
            .map(|(a, n)| json!({ "exps": a, "mult": n.to_string() }))
            .collect();
        json!({ "m": self.m, "terms": terms })
    }
}

macro_rules! kelement_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait for &KElement {
            type Output = KElement;
            fn $method(self, rhs: &KElement) -> KElement {
                self.$checked(rhs).expect("mismatched base line classes")
            }
        }
    };
}

kelement_binop!(Add, add, checked_add);
kelement_binop!(Sub, sub, checked_sub);
kelement_binop!(Mul, mul, tensor);

impl Neg for &KElement {
    type Output = KElement;
    fn neg(self) -> KElement {
        self.map_neg()
    }
}

impl fmt::Display for KElement {
    /// Canonical rendering: descending lexicographic order of exponent
    /// vectors, signs folded into separators, `L(0,...,0)` printed as `1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (a, n)) in self.terms.iter().rev().enumerate() {
            let negative = n.is_negative();
            let mag = n.magnitude();
            if i == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let constant = a.iter().all(|&e| e == 0);
            if constant {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", line_string(a))?;
            } else {
                write!(f, "{}*{}", mag, line_string(a))?;
            }
        }
        Ok(())
    }
}

fn line_string(a: &[i64]) -> String {
    let inner: Vec<String> = a.iter().map(|e| e.to_string()).collect();
    format!("L({})", inner.join(","))
}

impl CommRing for KElement {
    fn ring_zero(&self) -> Self {
        KElement::zero(self.m)
    }
    fn ring_one(&self) -> Self {
        KElement::unit(self.m)
    }
    fn ring_add(&self, other: &Self) -> Self {
        self.checked_add(other).expect("same base checked upstream")
    }
    fn ring_mul(&self, other: &Self) -> Self {
        self.tensor(other).expect("same base checked upstream")
    }
    fn ring_neg(&self) -> Self {
        self.map_neg()
    }
    fn ring_scale_int(&self, n: &BigInt) -> Self {
        self.scale_int(n)
    }
    fn same_ring(&self, other: &Self) -> bool {
        self.m == other.m
    }
}

/// Truncated power series in `t` with `KElement` coefficients, degrees
/// `0..=order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TSeries {
    m: usize,
    coeffs: Vec<KElement>,
}

impl TSeries {
    /// The constant series 1.
    pub fn unit(m: usize, order: usize) -> Self {
        let mut coeffs = vec![KElement::zero(m); order + 1];
        coeffs[0] = KElement::unit(m);
        TSeries { m, coeffs }
    }

    pub fn from_coeffs(m: usize, coeffs: Vec<KElement>) -> Result<Self, KringError> {
        assert!(
            !coeffs.is_empty(),
            "a series has at least its constant term"
        );
        for c in &coeffs {
            if c.m() != m {
                return Err(KringError::BaseMismatch {
                    expected: m,
                    got: c.m(),
                });
            }
        }
        Ok(TSeries { m, coeffs })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `t^i`.
    pub fn coeff(&self, i: usize) -> &KElement {
        &self.coeffs[i]
    }

    pub fn mul(&self, other: &Self) -> Result<Self, KringError> {
        if self.m != other.m {
            return Err(KringError::BaseMismatch {
                expected: self.m,
                got: other.m,
            });
        }
        if self.order() != other.order() {
            return Err(KringError::OrderMismatch);
        }
        let order = self.order();
        let mut coeffs = vec![KElement::zero(self.m); order + 1];
        for i in 0..=order {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=(order - i) {
                if other.coeffs[j].is_zero() {
                    continue;
                }
                let prod = self.coeffs[i].tensor(&other.coeffs[j])?;
                coeffs[i + j] = coeffs[i + j].checked_add(&prod)?;
            }
        }
        Ok(TSeries { m: self.m, coeffs })
    }

    /// Multiplicative inverse; requires the constant term to be a unit
    /// monomial `±L(a)`.
    pub fn invert(&self) -> Result<Self, KringError> {
        let inv0 = self.coeffs[0]
            .try_unit_inverse()
            .ok_or(KringError::NonUnitConstantTerm)?;
        let order = self.order();
        let mut coeffs = vec![KElement::zero(self.m); order + 1];
        coeffs[0] = inv0.clone();
        for k in 1..=order {
            let mut s = KElement::zero(self.m);
            for j in 1..=k {
                let prod = self.coeffs[j].tensor(&coeffs[k - j])?;
                s = s.checked_add(&prod)?;
            }
            coeffs[k] = inv0.tensor(&s)?.map_neg();
        }
        Ok(TSeries { m: self.m, coeffs })
    }

    /// `self^n` for a nonnegative big-integer exponent (square and multiply).
    pub fn pow_big(&self, n: &BigUint) -> Self {
        let mut acc = TSeries::unit(self.m, self.order());
        for idx in (0..n.bits()).rev() {
            acc = acc.mul(&acc).expect("same base and order");
            if n.bit(idx) {
                acc = acc.mul(self).expect("same base and order");
            }
        }
        acc
    }

    pub fn to_json(&self) -> Value {
        let coeffs: Vec<Value> = self.coeffs.iter().map(KElement::to_json).collect();
        json!({ "m": self.m, "order": self.order(), "coeffs": coeffs })
    }
}

impl fmt::Display for TSeries {
    /// `c0 + c1*t + c2*t^2 + ...`; single-monomial coefficients are folded
    /// into the term, multi-term coefficients are parenthesized.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let t_part = match i {
                0 => None,
                1 => Some("t".to_string()),
                _ => Some(format!("t^{i}")),
            };
            if c.num_terms() == 1 {
                let (a, n) = c.terms().next().expect("one term");
                let negative = n.is_negative();
                let mag = n.magnitude();
                if first {
                    if negative {
                        write!(f, "-")?;
                    }
                } else if negative {
                    write!(f, " - ")?;
                } else {
                    write!(f, " + ")?;
                }
                let mut parts = Vec::new();
                if !mag.is_one() {
                    parts.push(mag.to_string());
                }
                if a.iter().any(|&e| e != 0) {
                    parts.push(line_string(a));
                }
                if let Some(t) = t_part {
                    parts.push(t);
                }
                if parts.is_empty() {
                    write!(f, "1")?;
                } else {
                    write!(f, "{}", parts.join("*"))?;
                }
            } else {
                if !first {
                    write!(f, " + ")?;
                }
                match t_part {
                    Some(t) => write!(f, "({c})*{t}")?,
                    None => write!(f, "({c})")?,
                }
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Additive operation series `f(u) = a_1 u + a_2 u^2 + ...` with integer
/// coefficients and zero constant term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperationSeries {
    coeffs: Vec<BigInt>,
}

impl OperationSeries {
    /// Builds from `[a_1, a_2, ...]`.
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        OperationSeries { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        OperationSeries::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// The series of the k-th Adams operation: `f(u) = (1+u)^k - 1`, i.e.
    /// `a_i = C(k, i)` for `i = 1..=k`.
    pub fn adams(k: usize) -> Self {
        OperationSeries::new((1..=k).map(|i| binomial(k as i64, i as u64)).collect())
    }

    /// `a_i` (1-indexed; zero beyond the stored length).
    pub fn coeff(&self, i: usize) -> BigInt {
        assert!(i >= 1, "operation series are 1-indexed");
        self.coeffs.get(i - 1).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }
}

/// The total lambda series `lambda_t(x)` truncated at `t^order`.
///
/// For a line monomial `lambda_t(L) = 1 + L t`; the series is extended
/// multiplicatively over positive multiplicities and by truncated series
/// inversion over negative ones, so `lambda_t(x + y) = lambda_t(x) lambda_t(y)`
/// holds by construction.
pub fn lambda_series(x: &KElement, order: usize) -> TSeries {
    let mut acc = TSeries::unit(x.m, order);
    for (a, n) in &x.terms {
        let mut base = TSeries::unit(x.m, order);
        if order >= 1 {
            base.coeffs[1] = KElement::line(a.clone());
        }
        let part = if n.is_negative() {
            base.invert()
                .expect("constant term 1 is a unit")
                .pow_big(n.magnitude())
        } else {
            base.pow_big(n.magnitude())
        };
        acc = acc.mul(&part).expect("same base and order");
    }
    acc
}

/// The total gamma series `gamma_t(x) = lambda_{t/(1-t)}(x)` truncated at
/// `t^order`, computed by re-expanding `t^i (1-t)^{-i}` term by term:
/// `t^i (1-t)^{-i} = sum_j C(i+j-1, j) t^{i+j}`.
pub fn gamma_series(x: &KElement, order: usize) -> TSeries {
    let lam = lambda_series(x, order);
    let mut coeffs = vec![KElement::zero(x.m); order + 1];
    coeffs[0] = KElement::unit(x.m);
    for i in 1..=order {
        if lam.coeffs[i].is_zero() {
            continue;
        }
        for j in 0..=(order - i) {
            let b = binomial((i + j - 1) as i64, j as u64);
            let add = lam.coeffs[i].scale_int(&b);
            coeffs[i + j] = coeffs[i + j]
                .checked_add(&add)
                .expect("same base by construction");
        }
    }
    TSeries { m: x.m, coeffs }
}

/// The k-th gamma operation `gamma^k(x)`; `gamma^0 = 1`.
pub fn gamma_k(x: &KElement, k: usize) -> KElement {
    if k == 0 {
        return KElement::unit(x.m);
    }
    gamma_series(x, k).coeffs.swap_remove(k)
}

/// The additive operation attached to `f` via Newton polynomials:
/// `sum_k a_k Q_k(gamma^1(x), ..., gamma^k(x))`, truncated at `order`.
pub fn newton_series_operation(f: &OperationSeries, x: &KElement, order: usize) -> KElement {
    let gs = gamma_series(x, order);
    let mut acc = KElement::zero(x.m);
    for k in 1..=order.min(f.len()) {
        let a_k = f.coeff(k);
        if a_k.is_zero() {
            continue;
        }
        let qk = evaluate_newton(k, &gs.coeffs[1..=k]).expect("gamma values share one base");
        acc = acc
            .checked_add(&qk.scale_int(&a_k))
            .expect("same base by construction");
    }
    acc
}

/// The k-th Adams operation via the Newton-polynomial route: the operation
/// series `(1+u)^k - 1` applied to the reduced part, with the rank restored,
/// so that `psi^k(L) = L^k` (rather than `L^k - 1`) and `psi^k(n) = n`.
pub fn adams_newton(x: &KElement, k: usize) -> KElement {
    assert!(k >= 1, "Adams operations are indexed from 1");
    let rank = x.rank();
    let f = OperationSeries::adams(k);
    let psi_reduced = newton_series_operation(&f, &x.reduced(), k);
    psi_reduced
        .checked_add(&KElement::trivial(x.m, rank))
        .expect("same base by construction")
}

/// The k-th Adams operation via the split-model oracle: `L(a) -> L(k*a)`
/// extended additively.
pub fn adams_split(x: &KElement, k: usize) -> KElement {
    let kk = k as i64;
    let mut out = KElement::zero(x.m);
    for (a, n) in &x.terms {
        let exps: Vec<i64> = a
            .iter()
            .map(|&e| e.checked_mul(kk).expect("Adams exponent overflow"))
            .collect();
        out.add_term(exps, n.clone());
    }
    out
}

/// The i-th K-theoretic Chern class of an effective element:
/// `sigma_i` evaluated at the classes `1 - L_j` of the line summands.
pub fn ktheory_chern(e: &KElement, i: usize) -> Result<KElement, KringError> {
    let roots = e.line_summands()?;
    let n = roots.len();
    if i == 0 {
        return Ok(KElement::unit(e.m));
    }
    if i > n {
        return Ok(KElement::zero(e.m));
    }
    let unit = KElement::unit(e.m);
    let values: Vec<KElement> = roots
        .iter()
        .map(|a| &unit - &KElement::line(a.clone()))
        .collect();
    Ok(evaluate_poly(&elementary_symmetric(i, n), &values).expect("root classes share one base"))
}
