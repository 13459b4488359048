//! Randomized structural laws for the arithmetic kernels: field axioms for
//! the rationals, commutative-ring axioms for polynomials and split
//! K-theory elements, the truncation-ideal law, the substitution
//! homomorphism, and the parse/render round trip.

use charcalc::coeff::{CoeffRing, Rational};
use charcalc::expr::parse_element;
use charcalc::kring::KElement;
use charcalc::poly::{Poly, TableRef, VarTable};
use proptest::prelude::*;

const D: u32 = 10;

fn arb_rational() -> impl Strategy<Value = Rational> {
    (-40i64..=40, 1i64..=12).prop_map(|(n, d)| Rational::from_frac(n, d))
}

fn poly_from_pairs(
    table: TableRef,
    bound: Option<u32>,
    terms: Vec<((u32, u32), (i64, i64))>,
) -> Poly<Rational> {
    Poly::from_terms(
        table,
        bound,
        terms
            .into_iter()
            .map(|((e1, e2), (n, d))| (vec![e1, e2], Rational::from_frac(n, d))),
    )
    .expect("exponent arity is fixed at 2")
}

/// Polynomials over two weight-2 roots, truncated above degree `D`.
fn arb_poly() -> impl Strategy<Value = Poly<Rational>> {
    let table = VarTable::chern_roots(2);
    prop::collection::vec(((0u32..=3, 0u32..=3), (-40i64..=40, 1i64..=12)), 0..6)
        .prop_map(move |terms| poly_from_pairs(table.clone(), Some(D), terms))
}

/// The same distribution without a truncation bound.
fn arb_poly_unbounded() -> impl Strategy<Value = Poly<Rational>> {
    let table = VarTable::chern_roots(2);
    prop::collection::vec(((0u32..=3, 0u32..=3), (-40i64..=40, 1i64..=12)), 0..6)
        .prop_map(move |terms| poly_from_pairs(table.clone(), None, terms))
}

/// Virtual K-theory elements over `m` base classes.
fn arb_kelement_for(m: usize) -> impl Strategy<Value = KElement> {
    prop::collection::vec((prop::collection::vec(-3i64..=3, m), -4i64..=4), 0..5)
        .prop_map(move |terms| KElement::from_terms(m, terms).expect("arity fixed"))
}

fn arb_kelement() -> impl Strategy<Value = KElement> {
    arb_kelement_for(2)
}

proptest! {
    // ---- Rational field axioms -------------------------------------

    #[test]
    fn rational_addition_laws(a in arb_rational(), b in arb_rational(), c in arb_rational()) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.add(&Rational::zero()), a.clone());
        prop_assert_eq!(a.add(&a.neg()), Rational::zero());
        prop_assert_eq!(a.sub(&b), a.add(&b.neg()));
    }

    #[test]
    fn rational_multiplication_laws(a in arb_rational(), b in arb_rational(), c in arb_rational()) {
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&Rational::one()), a.clone());
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        if !a.is_zero() {
            let inv = a.try_inv().expect("nonzero rational is a unit");
            prop_assert_eq!(a.mul(&inv), Rational::one());
        } else {
            prop_assert!(a.try_inv().is_none());
        }
    }

    // ---- Polynomial ring axioms ------------------------------------

    #[test]
    fn poly_ring_axioms(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
        let zero = Poly::zero(a.table().clone(), a.bound());
        let one: Poly<Rational> = Poly::one(a.table().clone(), a.bound());
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a + &zero, a.clone());
        prop_assert_eq!(&a + &a.map_neg(), zero.clone());
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &one, a.clone());
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
    }

    /// Truncation is a ring homomorphism onto the quotient: multiplying
    /// first and truncating equals truncating first and multiplying in
    /// the truncated ring.
    #[test]
    fn truncation_is_a_quotient_map(a in arb_poly_unbounded(), b in arb_poly_unbounded()) {
        let lhs = (&a * &b).truncate(Some(D));
        let rhs = &a.truncate(Some(D)) * &b.truncate(Some(D));
        prop_assert_eq!(lhs, rhs);
        let lhs_add = (&a + &b).truncate(Some(D));
        let rhs_add = &a.truncate(Some(D)) + &b.truncate(Some(D));
        prop_assert_eq!(lhs_add, rhs_add);
    }

    /// Substituting weight-preserving images (linear forms in weight-2
    /// variables for weight-2 variables) is a ring homomorphism, even
    /// through truncation.
    #[test]
    fn substitution_is_a_homomorphism(
        a in arb_poly(),
        b in arb_poly(),
        img in prop::collection::vec(prop::collection::vec(-3i64..=3, 3), 2),
    ) {
        let target = VarTable::chern_roots(3);
        let images: Vec<Poly<Rational>> = img
            .iter()
            .map(|row| Poly::linear_form(target.clone(), Some(D), row).expect("arity 3"))
            .collect();
        let sub = |p: &Poly<Rational>| p.substitute(&target, Some(D), &images).expect("weight-preserving");
        prop_assert_eq!(sub(&(&a + &b)), &sub(&a) + &sub(&b));
        prop_assert_eq!(sub(&(&a * &b)), &sub(&a) * &sub(&b));
        prop_assert_eq!(sub(&Poly::one(a.table().clone(), a.bound())), Poly::one(target.clone(), Some(D)));
    }

    // ---- Split K-theory ring axioms --------------------------------

    #[test]
    fn kelement_ring_axioms(a in arb_kelement(), b in arb_kelement(), c in arb_kelement()) {
        let zero = KElement::zero(2);
        let one = KElement::unit(2);
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a + &zero, a.clone());
        prop_assert_eq!(&a + &a.map_neg(), zero.clone());
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &one, a.clone());
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
    }

    /// Rank is a ring homomorphism to the integers.
    #[test]
    fn rank_is_a_ring_homomorphism(a in arb_kelement(), b in arb_kelement()) {
        prop_assert_eq!((&a + &b).rank(), a.rank() + b.rank());
        prop_assert_eq!((&a * &b).rank(), a.rank() * b.rank());
        prop_assert_eq!(a.reduced().rank(), num::BigInt::from(0));
    }

    // ---- Grammar round trip ----------------------------------------

    #[test]
    fn render_parse_round_trip(
        (m, x) in (1usize..=3).prop_flat_map(|m| (Just(m), arb_kelement_for(m)))
    ) {
        let rendered = x.to_string();
        let back = parse_element(&rendered, m).expect("rendered form is grammatical");
        prop_assert_eq!(back, x);
    }
}
