//! Minimal commutative-ring interface for evaluating integer polynomials in
//! arbitrary carriers: scalar coefficients, cohomology classes, or K-theory
//! elements.
//!
//! The methods are contextual (`&self`) because the zero and one of most
//! carriers depend on runtime data — the variable table and truncation bound
//! of a polynomial ring, or the number of base line classes of a K-theory
//! element.  `same_ring` is the compatibility predicate evaluation uses to
//! reject mixed-carrier inputs before any arithmetic happens.

use crate::coeff::CoeffRing;
use crate::poly::Poly;
use num::bigint::BigInt;
use std::fmt::Debug;

pub trait CommRing: Clone + PartialEq + Debug {
    fn ring_zero(&self) -> Self;
    fn ring_one(&self) -> Self;
    fn ring_add(&self, other: &Self) -> Self;
    fn ring_mul(&self, other: &Self) -> Self;
    fn ring_neg(&self) -> Self;
    /// Action of the integers: `n * self`.
    fn ring_scale_int(&self, n: &BigInt) -> Self;
    /// True when the two elements belong to the same carrier instance.
    fn same_ring(&self, other: &Self) -> bool;

    fn ring_sub(&self, other: &Self) -> Self {
        self.ring_add(&other.ring_neg())
    }

    fn ring_pow(&self, k: u32) -> Self {
        let mut acc = self.ring_one();
        for _ in 0..k {
            acc = acc.ring_mul(self);
        }
        acc
    }
}

/// Scalars form a ring with themselves; all scalars share one carrier.
impl<C: CoeffRing> CommRing for C {
    fn ring_zero(&self) -> Self {
        C::zero()
    }
    fn ring_one(&self) -> Self {
        C::one()
    }
    fn ring_add(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn ring_mul(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn ring_neg(&self) -> Self {
        self.neg()
    }
    fn ring_scale_int(&self, n: &BigInt) -> Self {
        self.mul(&C::from_int(n))
    }
    fn same_ring(&self, _other: &Self) -> bool {
        true
    }
}

impl<C: CoeffRing> CommRing for Poly<C> {
    fn ring_zero(&self) -> Self {
        Poly::zero(self.table().clone(), self.bound())
    }
    fn ring_one(&self) -> Self {
        Poly::one(self.table().clone(), self.bound())
    }
    fn ring_add(&self, other: &Self) -> Self {
        self.checked_add(other).expect("same ring checked upstream")
    }
    fn ring_mul(&self, other: &Self) -> Self {
        self.checked_mul(other).expect("same ring checked upstream")
    }
    fn ring_neg(&self) -> Self {
        self.map_neg()
    }
    fn ring_scale_int(&self, n: &BigInt) -> Self {
        self.scale_int(n)
    }
    fn same_ring(&self, other: &Self) -> bool {
        self.table() == other.table() && self.bound() == other.bound()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::Rational;
    use crate::poly::VarTable;

    #[test]
    fn scalar_carrier_arithmetic() {
        let a = Rational::from_frac(1, 2);
        assert_eq!(a.ring_add(&a), Rational::from_int(1));
        assert_eq!(a.ring_pow(3), Rational::from_frac(1, 8));
        assert_eq!(a.ring_scale_int(&BigInt::from(4)), Rational::from_int(2));
    }

    #[test]
    fn poly_carrier_tracks_its_ring() {
        let t = VarTable::chern_roots(2);
        let p = Poly::<Rational>::var(t.clone(), Some(6), 0);
        let q = Poly::<Rational>::var(t, Some(6), 1);
        assert!(p.same_ring(&q));
        let other = Poly::<Rational>::var(VarTable::chern_roots(1), Some(6), 0);
        assert!(!p.same_ring(&other));
        assert_eq!(p.ring_pow(0), p.ring_one());
    }
}
