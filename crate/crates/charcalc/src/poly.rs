//! Sparse multivariate polynomials over an exact coefficient ring, with
//! per-variable degree weights and graded truncation.
//!
//! Invariants maintained by every operation:
//! - stored coefficients are nonzero (zero results are represented by the
//!   absence of a term);
//! - every stored monomial has weighted degree within the truncation bound
//!   when one is set (truncation is the quotient by the ideal of terms of
//!   weighted degree exceeding the bound);
//! - terms are kept in the canonical order: ascending weighted degree, ties
//!   broken by descending lexicographic comparison of exponent vectors.
//!   Rendering and JSON serialization walk terms in this order, so equal
//!   polynomials always print identically.

use crate::coeff::CoeffRing;
use num::bigint::BigInt;
use serde_json::{json, Value};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;
use thiserror::Error;

/// Errors from polynomial construction and arithmetic.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("invalid variable table: {0}")]
    BadTable(String),
    #[error("operands live over different variable tables")]
    TableMismatch,
    #[error("operands have different truncation bounds")]
    BoundMismatch,
    #[error("exponent vector has length {got}, table has {expected} variables")]
    ExponentLength { expected: usize, got: usize },
    #[error("constant term is not invertible")]
    NonInvertibleConstantTerm,
    #[error("substitution needs {expected} images, got {got}")]
    ImageCountMismatch { expected: usize, got: usize },
    #[error("image of {var} has a term whose weighted degree is not a multiple of the variable's weight")]
    DegreeIncompatibleImage { var: String },
}

/// Ordered list of variable names with positive degree weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarTable {
    names: Vec<String>,
    weights: Vec<u32>,
}

/// Shared handle to a variable table; polynomials over the same ring share it.
pub type TableRef = Arc<VarTable>;

impl VarTable {
    /// Builds a table from parallel name/weight lists.  Names must be
    /// distinct and nonempty; weights must be at least one.
    pub fn new(names: Vec<String>, weights: Vec<u32>) -> Result<TableRef, PolyError> {
        if names.len() != weights.len() {
            return Err(PolyError::BadTable(
                "name and weight lists have different lengths".into(),
            ));
        }
        if weights.contains(&0) {
            return Err(PolyError::BadTable("weights must be positive".into()));
        }
        for (i, n) in names.iter().enumerate() {
            if n.is_empty() {
                return Err(PolyError::BadTable("empty variable name".into()));
            }
            if names[..i].contains(n) {
                return Err(PolyError::BadTable(format!("duplicate variable name {n}")));
            }
        }
        Ok(Arc::new(VarTable { names, weights }))
    }

    fn numbered(prefix: &str, count: usize, weight_of: impl Fn(usize) -> u32) -> TableRef {
        let names = (1..=count).map(|i| format!("{prefix}{i}")).collect();
        let weights = (1..=count).map(weight_of).collect();
        VarTable::new(names, weights).expect("generated tables are valid")
    }

    /// `x1..xm`, each of weight 2 (Chern roots of complex line classes).
    pub fn chern_roots(m: usize) -> TableRef {
        VarTable::numbered("x", m, |_| 2)
    }

    /// `y1..ym`, each of weight 1 (Stiefel-Whitney roots of real line classes).
    pub fn sw_roots(m: usize) -> TableRef {
        VarTable::numbered("y", m, |_| 1)
    }

    /// `s1..sk` with `weight(s_i) = i` (elementary symmetric function basis).
    pub fn sigma(k: usize) -> TableRef {
        VarTable::numbered("s", k, |i| i as u32)
    }

    /// `u1..un`, each of weight 1 (abstract roots for symmetric-function work).
    pub fn power_vars(n: usize) -> TableRef {
        VarTable::numbered("u", n, |_| 1)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn weight(&self, i: usize) -> u32 {
        self.weights[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    /// Weighted degree of an exponent vector with respect to this table.
    pub fn weighted_degree(&self, exps: &[u32]) -> u32 {
        exps.iter().zip(&self.weights).map(|(&e, &w)| e * w).sum()
    }

    /// True when `self` lists a prefix of `other`'s variables with equal
    /// names and weights (used to embed polynomials into larger tables).
    pub fn is_prefix_of(&self, other: &VarTable) -> bool {
        self.len() <= other.len()
            && self.names == other.names[..self.len()]
            && self.weights == other.weights[..self.len()]
    }
}

/// Monomial key: exponent vector plus its cached weighted degree.
///
/// Ordering is the canonical term order (ascending weighted degree, then
/// descending lexicographic on exponents), so a `BTreeMap<Mono, C>` iterates
/// terms in rendering order for free.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mono {
    wdeg: u32,
    exps: Vec<u32>,
}

impl Mono {
    pub fn wdeg(&self) -> u32 {
        self.wdeg
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn is_constant(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.wdeg
            .cmp(&other.wdeg)
            .then_with(|| other.exps.cmp(&self.exps))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial over `C`, tied to a variable table and an optional
/// truncation bound on weighted degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly<C: CoeffRing> {
    table: TableRef,
    bound: Option<u32>,
    terms: BTreeMap<Mono, C>,
}

impl<C: CoeffRing> Poly<C> {
    pub fn zero(table: TableRef, bound: Option<u32>) -> Self {
        Poly {
            table,
            bound,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(table: TableRef, bound: Option<u32>) -> Self {
        Poly::constant(table, bound, C::one())
    }

    pub fn constant(table: TableRef, bound: Option<u32>, c: C) -> Self {
        let exps = vec![0; table.len()];
        let mut p = Poly::zero(table, bound);
        p.add_term(&exps, c);
        p
    }

    /// The variable `#i` as a polynomial.  Panics if `i` is out of range.
    pub fn var(table: TableRef, bound: Option<u32>, i: usize) -> Self {
        assert!(i < table.len(), "variable index out of range");
        let mut exps = vec![0; table.len()];
        exps[i] = 1;
        let mut p = Poly::zero(table, bound);
        p.add_term(&exps, C::one());
        p
    }

    /// Builds a polynomial from raw `(exponents, coefficient)` pairs,
    /// summing duplicates, dropping zeros, and applying the bound.
    pub fn from_terms<I>(table: TableRef, bound: Option<u32>, terms: I) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = (Vec<u32>, C)>,
    {
        let mut p = Poly::zero(table, bound);
        for (exps, c) in terms {
            if exps.len() != p.table.len() {
                return Err(PolyError::ExponentLength {
                    expected: p.table.len(),
                    got: exps.len(),
                });
            }
            p.add_term(&exps, c);
        }
        Ok(p)
    }

    /// The linear form `sum_j a_j * v_j` with integer coefficients.
    pub fn linear_form(table: TableRef, bound: Option<u32>, a: &[i64]) -> Result<Self, PolyError> {
        if a.len() != table.len() {
            return Err(PolyError::ExponentLength {
                expected: table.len(),
                got: a.len(),
            });
        }
        let n = table.len();
        Poly::from_terms(
            table,
            bound,
            a.iter().enumerate().map(|(j, &aj)| {
                let mut exps = vec![0; n];
                exps[j] = 1;
                (exps, C::from_int(&BigInt::from(aj)))
            }),
        )
    }

    pub fn table(&self) -> &TableRef {
        &self.table
    }

    pub fn bound(&self) -> Option<u32> {
        self.bound
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &C)> {
        self.terms.iter()
    }

    /// Coefficient of the given exponent vector (zero when absent).
    pub fn coeff_of(&self, exps: &[u32]) -> C {
        let key = Mono {
            wdeg: self.table.weighted_degree(exps),
            exps: exps.to_vec(),
        };
        self.terms.get(&key).cloned().unwrap_or_else(C::zero)
    }

    pub fn constant_term(&self) -> C {
        self.coeff_of(&vec![0; self.table.len()])
    }

    pub fn max_wdeg(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.wdeg).max()
    }

    pub fn min_wdeg(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.wdeg).min()
    }

    pub fn is_homogeneous_of(&self, w: u32) -> bool {
        self.terms.keys().all(|m| m.wdeg == w)
    }

    /// Splits into weighted-homogeneous components, keyed by degree.
    pub fn wdeg_components(&self) -> BTreeMap<u32, Poly<C>> {
        let mut out: BTreeMap<u32, Poly<C>> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.wdeg)
                .or_insert_with(|| Poly::zero(self.table.clone(), self.bound))
                .terms
                .insert(m.clone(), c.clone());
        }
        out
    }

    fn add_term(&mut self, exps: &[u32], c: C) {
        if c.is_zero() {
            return;
        }
        let wdeg = self.table.weighted_degree(exps);
        if self.bound.is_some_and(|b| wdeg > b) {
            return;
        }
        let key = Mono {
            wdeg,
            exps: exps.to_vec(),
        };
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().add(&c);
                if sum.is_zero() {
                    e.remove();
                } else {
                    e.insert(sum);
                }
            }
        }
    }

    fn check_compat(&self, other: &Self) -> Result<(), PolyError> {
        if !Arc::ptr_eq(&self.table, &other.table) && self.table != other.table {
            return Err(PolyError::TableMismatch);
        }
        if self.bound != other.bound {
            return Err(PolyError::BoundMismatch);
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_compat(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(&m.exps, c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_compat(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(&m.exps, c.neg());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_compat(other)?;
        let mut out = Poly::zero(self.table.clone(), self.bound);
        for (m1, c1) in &self.terms {
            // Terms of weighted degree beyond the bound cannot contribute.
            if out.bound.is_some_and(|b| m1.wdeg > b) {
                continue;
            }
            for (m2, c2) in &other.terms {
                if out.bound.is_some_and(|b| m1.wdeg + m2.wdeg > b) {
                    continue;
                }
                let exps: Vec<u32> = m1.exps.iter().zip(&m2.exps).map(|(&a, &b)| a + b).collect();
                out.add_term(&exps, c1.mul(c2));
            }
        }
        Ok(out)
    }

    pub fn map_neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = c.neg();
        }
        out
    }

    /// Multiplies every coefficient by `c`.
    pub fn scale(&self, c: &C) -> Self {
        let mut out = Poly::zero(self.table.clone(), self.bound);
        for (m, k) in &self.terms {
            out.add_term(&m.exps, k.mul(c));
        }
        out
    }

    pub fn scale_int(&self, n: &BigInt) -> Self {
        self.scale(&C::from_int(n))
    }

    /// `self^k` in the (possibly truncated) ring.
    pub fn pow_trunc(&self, k: u32) -> Self {
        let mut acc = Poly::one(self.table.clone(), self.bound);
        for _ in 0..k {
            acc = acc.checked_mul(self).expect("same ring by construction");
        }
        acc
    }

    /// Reinterprets the polynomial in the ring truncated at `new_bound`,
    /// dropping terms of larger weighted degree.
    pub fn truncate(&self, new_bound: Option<u32>) -> Self {
        let mut out = Poly::zero(self.table.clone(), new_bound);
        for (m, c) in &self.terms {
            out.add_term(&m.exps, c.clone());
        }
        out
    }

    /// Multiplicative inverse modulo terms of weighted degree beyond
    /// `order` (further capped by the ring's own bound).  The constant term
    /// must be a unit of the coefficient ring.  The result lives in the ring
    /// truncated at the effective order.
    pub fn invert_to(&self, order: u32) -> Result<Self, PolyError> {
        let inv0 = self
            .constant_term()
            .try_inv()
            .ok_or(PolyError::NonInvertibleConstantTerm)?;
        let eff = self.bound.map_or(order, |b| b.min(order));
        let a = self.truncate(Some(eff));
        let one = Poly::one(self.table.clone(), Some(eff));
        // n := 1 - a/c0 has no constant term, so it is nilpotent here:
        // n^(eff+1) = 0 because every variable has weight >= 1.
        let n = one.checked_sub(&a.scale(&inv0)).expect("same ring");
        let mut acc = one.clone();
        let mut pw = one;
        loop {
            pw = pw.checked_mul(&n).expect("same ring");
            if pw.is_zero() {
                break;
            }
            acc = acc.checked_add(&pw).expect("same ring");
        }
        Ok(acc.scale(&inv0))
    }

    /// Substitutes `images[i]` for variable `#i`, mapping into the ring over
    /// `target` truncated at `target_bound`.
    ///
    /// Every term of `images[i]` must have weighted degree divisible by the
    /// weight of variable `#i`.  Substitution is a ring homomorphism onto
    /// truncated rings whenever no image lowers weighted degree (each image
    /// is zero or has minimum term degree at least the variable's weight);
    /// degree-raising is always safe because truncation is an ideal.
    pub fn substitute(
        &self,
        target: &TableRef,
        target_bound: Option<u32>,
        images: &[Poly<C>],
    ) -> Result<Poly<C>, PolyError> {
        if images.len() != self.table.len() {
            return Err(PolyError::ImageCountMismatch {
                expected: self.table.len(),
                got: images.len(),
            });
        }
        for (i, img) in images.iter().enumerate() {
            if img.table != *target {
                return Err(PolyError::TableMismatch);
            }
            if img.bound != target_bound {
                return Err(PolyError::BoundMismatch);
            }
            let w = self.table.weight(i);
            if img.terms.keys().any(|m| m.wdeg % w != 0) {
                return Err(PolyError::DegreeIncompatibleImage {
                    var: self.table.name(i).to_string(),
                });
            }
        }
        let one = Poly::one(target.clone(), target_bound);
        let mut out = Poly::zero(target.clone(), target_bound);
        for (m, c) in &self.terms {
            let mut term = one.scale(c);
            for (i, &e) in m.exps.iter().enumerate() {
                if e > 0 {
                    term = term
                        .checked_mul(&images[i].pow_trunc(e))
                        .expect("same ring");
                }
                if term.is_zero() {
                    break;
                }
            }
            out = out.checked_add(&term).expect("same ring");
        }
        Ok(out)
    }

    /// Embeds into a larger table of which this polynomial's table is a
    /// prefix (extra variables never occur, exponents are padded with zeros).
    pub fn extend_table(&self, target: &TableRef) -> Result<Poly<C>, PolyError> {
        if !self.table.is_prefix_of(target) {
            return Err(PolyError::TableMismatch);
        }
        let mut out = Poly::zero(target.clone(), self.bound);
        for (m, c) in &self.terms {
            let mut exps = m.exps.clone();
            exps.resize(target.len(), 0);
            out.add_term(&exps, c.clone());
        }
        Ok(out)
    }

    /// JSON form: variable table, truncation bound, and terms in canonical
    /// order with per-coefficient encodings.
    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(m, c)| json!({ "exps": m.exps, "coeff": c.coeff_json() }))
            .collect();
        json!({
            "vars": self.table.names(),
            "weights": self.table.weights(),
            "trunc": self.bound,
            "terms": terms,
        })
    }
}

macro_rules! poly_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl<C: CoeffRing> $trait for &Poly<C> {
            type Output = Poly<C>;
            fn $method(self, rhs: &Poly<C>) -> Poly<C> {
                self.$checked(rhs).expect("incompatible polynomial rings")
            }
        }
    };
}

poly_binop!(Add, add, checked_add);
poly_binop!(Sub, sub, checked_sub);
poly_binop!(Mul, mul, checked_mul);

impl<C: CoeffRing> Neg for &Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Poly<C> {
        self.map_neg()
    }
}

impl<C: CoeffRing> fmt::Display for Poly<C> {
    /// Canonical rendering: terms in canonical order, signs folded into the
    /// separators, unit coefficients omitted next to variables.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let (negative, mag) = c.sign_abs();
            if i == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_constant() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", mono_string(&self.table, m))?;
            } else {
                write!(f, "{}*{}", mag, mono_string(&self.table, m))?;
            }
        }
        Ok(())
    }
}

fn mono_string(table: &VarTable, m: &Mono) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.exps().iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(table.name(i).to_string()),
            _ => parts.push(format!("{}^{}", table.name(i), e)),
        }
    }
    parts.join("*")
}
