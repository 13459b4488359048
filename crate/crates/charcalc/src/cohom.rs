//! Rational cohomology of the base, truncated at a fixed weighted degree,
//! and the characteristic classes landing in it: Chern classes by two
//! independent routes, Newton classes, the Chern character, the Adams
//! endomorphisms of cohomology, pullbacks, and the mod-2 Stiefel-Whitney
//! character.
//!
//! The cohomology ring is `Q[x_1..x_m] / (weighted degree > D)` with each
//! root `x_i` of weight 2; a line monomial `L(a)` has first Chern root
//! `<a, x> = sum_j a_j x_j`.  The mod-2 side uses `F2[y_1..y_m]` with
//! weight-1 roots.

use crate::coeff::{factorial_inverse, CoeffRing, Rational, F2};
use crate::kring::{KElement, KringError};
use crate::poly::{Poly, PolyError, TableRef, VarTable};
use crate::symfun::{elementary_symmetric, evaluate_newton, evaluate_poly, EvalError};
use num::bigint::BigInt;
use thiserror::Error;

/// Truncated rational cohomology class.
pub type CohomElement = Poly<Rational>;

/// Truncated mod-2 cohomology class.
pub type SwElement = Poly<F2>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CohomError {
    #[error("element lives over {got} base line classes, but the ring has {expected}")]
    BaseMismatch { expected: usize, got: usize },
    #[error("invalid ring configuration: {0}")]
    BadConfig(String),
    #[error("pullback image is not homogeneous of degree 2")]
    InhomogeneousImage,
    #[error(transparent)]
    Kring(#[from] KringError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// The rational cohomology ring of the base: `m` weight-2 Chern roots,
/// truncated at even weighted degree `trunc`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohomRing {
    table: TableRef,
    trunc: u32,
}

impl CohomRing {
    pub fn new(m: usize, trunc: u32) -> Result<Self, CohomError> {
        if m == 0 {
            return Err(CohomError::BadConfig(
                "need at least one base line class".into(),
            ));
        }
        if trunc < 2 || !trunc.is_multiple_of(2) {
            return Err(CohomError::BadConfig(format!(
                "truncation degree must be even and at least 2, got {trunc}"
            )));
        }
        Ok(CohomRing {
            table: VarTable::chern_roots(m),
            trunc,
        })
    }

    pub fn m(&self) -> usize {
        self.table.len()
    }

    pub fn trunc(&self) -> u32 {
        self.trunc
    }

    pub fn table(&self) -> &TableRef {
        &self.table
    }

    pub fn zero(&self) -> CohomElement {
        Poly::zero(self.table.clone(), Some(self.trunc))
    }

    pub fn one(&self) -> CohomElement {
        Poly::one(self.table.clone(), Some(self.trunc))
    }

    pub fn constant(&self, c: Rational) -> CohomElement {
        Poly::constant(self.table.clone(), Some(self.trunc), c)
    }

    /// The first Chern root `<a, x>` of the line monomial `L(a)`.
    pub fn root_form(&self, a: &[i64]) -> Result<CohomElement, CohomError> {
        if a.len() != self.m() {
            return Err(CohomError::BaseMismatch {
                expected: self.m(),
                got: a.len(),
            });
        }
        Ok(Poly::linear_form(self.table.clone(), Some(self.trunc), a)?)
    }

    fn check_base(&self, x: &KElement) -> Result<(), CohomError> {
        if x.m() != self.m() {
            return Err(CohomError::BaseMismatch {
                expected: self.m(),
                got: x.m(),
            });
        }
        Ok(())
    }

    fn root_forms(&self, e: &KElement) -> Result<Vec<CohomElement>, CohomError> {
        self.check_base(e)?;
        let roots = e.line_summands()?;
        roots.iter().map(|a| self.root_form(a)).collect()
    }

    /// The i-th Chern class of an effective element: `sigma_i` evaluated at
    /// the Chern roots of the line summands.
    pub fn chern_class(&self, e: &KElement, i: usize) -> Result<CohomElement, CohomError> {
        let forms = self.root_forms(e)?;
        let n = forms.len();
        if i == 0 {
            return Ok(self.one());
        }
        if i > n {
            return Ok(self.zero());
        }
        Ok(evaluate_poly(&elementary_symmetric(i, n), &forms)?)
    }

    /// The i-th Chern class recovered from the monic relation of the
    /// projective-bundle ring — an independent route used to cross-check
    /// `chern_class`.
    pub fn chern_via_projective(&self, e: &KElement, i: usize) -> Result<CohomElement, CohomError> {
        let forms = self.root_forms(e)?;
        let n = forms.len();
        if i == 0 {
            return Ok(self.one());
        }
        if i > n {
            return Ok(self.zero());
        }
        let proj = ProjBundleRing::new(self, e)?;
        Ok(proj.chern_coefficient(i))
    }

    /// The k-th Newton class `S_k = Q_k(c_1, ..., c_k)`; `S_0` is the rank.
    pub fn newton_class(&self, e: &KElement, k: usize) -> Result<CohomElement, CohomError> {
        let forms = self.root_forms(e)?;
        if k == 0 {
            return Ok(self.constant(Rational::from_int(forms.len() as i64)));
        }
        let classes: Vec<CohomElement> = (1..=k)
            .map(|i| {
                if i > forms.len() {
                    Ok(self.zero())
                } else {
                    Ok(evaluate_poly(
                        &elementary_symmetric(i, forms.len()),
                        &forms,
                    )?)
                }
            })
            .collect::<Result<_, CohomError>>()?;
        Ok(evaluate_newton(k, &classes)?)
    }

    /// Truncated exponential of a class with zero constant term.
    pub fn exp_form(&self, f: &CohomElement) -> CohomElement {
        debug_assert!(
            f.constant_term().is_zero(),
            "exponential needs positive valuation"
        );
        let mut acc = self.one();
        let mut pw = self.one();
        for k in 1..=self.trunc {
            pw = &pw * f;
            if pw.is_zero() {
                break;
            }
            acc = &acc + &pw.scale(&factorial_inverse(k));
        }
        acc
    }

    /// The Chern character, extended linearly from `Ch(L(a)) = exp(<a, x>)`.
    /// Defined on every virtual element.
    pub fn chern_character(&self, x: &KElement) -> Result<CohomElement, CohomError> {
        self.check_base(x)?;
        let mut acc = self.zero();
        for (a, n) in x.terms() {
            let e = self.exp_form(&self.root_form(a)?);
            acc = &acc + &e.scale_int(n);
        }
        Ok(acc)
    }

    /// The Chern character computed as `rank + sum_k S_k / k!` — the
    /// Newton-class route, defined on effective elements and used to
    /// cross-check the exponential route.
    pub fn chern_character_via_newton(&self, e: &KElement) -> Result<CohomElement, CohomError> {
        let forms = self.root_forms(e)?;
        let mut acc = self.constant(Rational::from_int(forms.len() as i64));
        for k in 1..=(self.trunc / 2) as usize {
            let sk = self.newton_class(e, k)?;
            acc = &acc + &sk.scale(&factorial_inverse(k as u32));
        }
        Ok(acc)
    }
}

/// The cohomology of the projectivization of an effective bundle of rank
/// `n >= 1`: a free module over the base ring with basis `1, u, ..., u^{n-1}`
/// where `u` satisfies the monic relation `prod_j (u - r_j) = 0` in the
/// Chern roots `r_j`.
#[derive(Debug, Clone)]
pub struct ProjBundleRing {
    ring: CohomRing,
    roots: Vec<CohomElement>,
    /// Coefficient of `u^j` in the monic relation polynomial, `j = 0..=n`.
    monic: Vec<CohomElement>,
}

impl ProjBundleRing {
    pub fn new(ring: &CohomRing, e: &KElement) -> Result<Self, CohomError> {
        let roots = ring.root_forms(e)?;
        if roots.is_empty() {
            return Err(CohomError::BadConfig(
                "projective bundle needs rank at least one".into(),
            ));
        }
        // Expand prod_j (u - r_j) one factor at a time.
        let mut monic = vec![ring.one()];
        for r in &roots {
            let mut next = vec![ring.zero(); monic.len() + 1];
            for (j, c) in monic.iter().enumerate() {
                next[j + 1] = &next[j + 1] + c;
                next[j] = &next[j] - &(c * r);
            }
            monic = next;
        }
        Ok(ProjBundleRing {
            ring: ring.clone(),
            roots,
            monic,
        })
    }

    pub fn rank(&self) -> usize {
        self.monic.len() - 1
    }

    pub fn roots(&self) -> &[CohomElement] {
        &self.roots
    }

    /// Coefficients of the monic relation, constant term first.
    pub fn relation(&self) -> &[CohomElement] {
        &self.monic
    }

    /// The i-th Chern class read off the relation:
    /// `c_i = (-1)^i * (coefficient of u^{n-i})`, for `0 <= i <= n`.
    pub fn chern_coefficient(&self, i: usize) -> CohomElement {
        assert!(i <= self.rank(), "Chern index exceeds the rank");
        let c = self.monic[self.rank() - i].clone();
        if i % 2 == 1 {
            c.map_neg()
        } else {
            c
        }
    }

    /// Writes `u^p` in the module basis `1, u, ..., u^{n-1}` by repeated
    /// reduction with the monic relation.
    pub fn reduce_power(&self, p: usize) -> Vec<CohomElement> {
        let n = self.rank();
        if p < n {
            let mut v = vec![self.ring.zero(); n];
            v[p] = self.ring.one();
            return v;
        }
        // rel[j]: u^n = sum_j rel[j] u^j.
        let rel: Vec<CohomElement> = self.monic[..n].iter().map(Poly::map_neg).collect();
        let mut v = rel.clone();
        for _ in (n + 1)..=p {
            let top = v[n - 1].clone();
            let mut next = vec![self.ring.zero(); n];
            next[0] = &top * &rel[0];
            for j in 1..n {
                next[j] = &v[j - 1] + &(&top * &rel[j]);
            }
            v = next;
        }
        v
    }

    /// Evaluates the relation at one of its own roots (must give zero;
    /// exposed for verification).
    pub fn relation_at_root(&self, j: usize) -> CohomElement {
        let mut acc = self.ring.zero();
        for (p, c) in self.monic.iter().enumerate() {
            acc = &acc + &(c * &self.roots[j].pow_trunc(p as u32));
        }
        acc
    }
}

/// The Adams endomorphism of rational cohomology: multiplication by `k^r`
/// in degree `2r`.
pub fn steenrod_adams(k: usize, a: &CohomElement) -> CohomElement {
    assert!(k >= 1, "Adams operations are indexed from 1");
    let kk = BigInt::from(k);
    let terms = a.terms().map(|(m, c)| {
        debug_assert!(m.wdeg() % 2 == 0, "rational classes live in even degrees");
        let factor = kk.pow(m.wdeg() / 2);
        (m.exps().to_vec(), c.mul(&Rational::from_int(factor)))
    });
    Poly::from_terms(a.table().clone(), a.bound(), terms).expect("exponents come from a")
}

/// Pullback along a map classified by degree-2 images of the Chern roots.
/// Every image must be zero or homogeneous of weighted degree 2.
pub fn pullback(
    a: &CohomElement,
    target: &CohomRing,
    images: &[CohomElement],
) -> Result<CohomElement, CohomError> {
    for img in images {
        if !img.is_zero() && !img.is_homogeneous_of(2) {
            return Err(CohomError::InhomogeneousImage);
        }
    }
    Ok(a.substitute(target.table(), Some(target.trunc()), images)?)
}

/// The mod-2 cohomology ring of the base: `m` weight-1 Stiefel-Whitney
/// roots over F2, truncated at weighted degree `trunc >= 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwRing {
    table: TableRef,
    trunc: u32,
}

impl SwRing {
    pub fn new(m: usize, trunc: u32) -> Result<Self, CohomError> {
        if m == 0 {
            return Err(CohomError::BadConfig(
                "need at least one base line class".into(),
            ));
        }
        if trunc == 0 {
            return Err(CohomError::BadConfig(
                "truncation degree must be at least 1".into(),
            ));
        }
        Ok(SwRing {
            table: VarTable::sw_roots(m),
            trunc,
        })
    }

    pub fn m(&self) -> usize {
        self.table.len()
    }

    pub fn trunc(&self) -> u32 {
        self.trunc
    }

    pub fn zero(&self) -> SwElement {
        Poly::zero(self.table.clone(), Some(self.trunc))
    }

    pub fn one(&self) -> SwElement {
        Poly::one(self.table.clone(), Some(self.trunc))
    }

    /// The first Stiefel-Whitney root of `L(a)`: `<a, y>` with coefficients
    /// reduced mod 2.
    pub fn root_form(&self, a: &[i64]) -> Result<SwElement, CohomError> {
        if a.len() != self.m() {
            return Err(CohomError::BaseMismatch {
                expected: self.m(),
                got: a.len(),
            });
        }
        Ok(Poly::linear_form(self.table.clone(), Some(self.trunc), a)?)
    }

    /// The Stiefel-Whitney character of an effective element:
    /// `rank mod 2 + sum_{k>=1} Q_k(w_1, ..., w_k)`, where `w_i` are the
    /// elementary symmetric functions of the mod-2 roots.  Additive because
    /// each `Q_k` evaluates to the k-th power sum of the roots.
    pub fn sw_character(&self, f: &KElement) -> Result<SwElement, CohomError> {
        if f.m() != self.m() {
            return Err(CohomError::BaseMismatch {
                expected: self.m(),
                got: f.m(),
            });
        }
        let roots = f.line_summands()?;
        let rank_part = Poly::constant(
            self.table.clone(),
            Some(self.trunc),
            F2::from_int(&f.rank()),
        );
        if roots.is_empty() {
            return Ok(rank_part);
        }
        let forms: Vec<SwElement> = roots
            .iter()
            .map(|a| self.root_form(a))
            .collect::<Result<_, _>>()?;
        let n = forms.len();
        let classes: Vec<SwElement> = (1..=n.min(self.trunc as usize))
            .map(|i| evaluate_poly(&elementary_symmetric(i, n), &forms))
            .collect::<Result<_, _>>()?;
        let mut acc = rank_part;
        for k in 1..=self.trunc as usize {
            acc = &acc + &evaluate_newton(k, &classes[..k.min(classes.len())])?;
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::Rational;

    fn ring(m: usize, d: u32) -> CohomRing {
        CohomRing::new(m, d).unwrap()
    }

    fn e_lines(m: usize, lines: &[&[i64]]) -> KElement {
        let mut acc = KElement::zero(m);
        for a in lines {
            acc = &acc + &KElement::line(a.to_vec());
        }
        acc
    }

    #[test]
    fn chern_classes_of_a_split_rank_two_bundle() {
        let r = ring(1, 10);
        let e = e_lines(1, &[&[1], &[2]]);
        let x1 = Poly::<Rational>::var(r.table().clone(), Some(10), 0);
        assert_eq!(r.chern_class(&e, 0).unwrap(), r.one());
        assert_eq!(
            r.chern_class(&e, 1).unwrap(),
            x1.scale_int(&BigInt::from(3))
        );
        assert_eq!(
            r.chern_class(&e, 2).unwrap(),
            x1.pow_trunc(2).scale_int(&BigInt::from(2))
        );
        assert!(r.chern_class(&e, 3).unwrap().is_zero());
    }

    #[test]
    fn both_chern_routes_agree_on_examples() {
        let r = ring(2, 8);
        let e = e_lines(2, &[&[1, 0], &[0, 1], &[1, 1]]);
        for i in 0..=4 {
            assert_eq!(
                r.chern_class(&e, i).unwrap(),
                r.chern_via_projective(&e, i).unwrap(),
                "i = {i}"
            );
        }
    }

    #[test]
    fn projective_relation_vanishes_at_each_root() {
        let r = ring(2, 8);
        let e = e_lines(2, &[&[1, 0], &[0, 1], &[2, -1]]);
        let proj = ProjBundleRing::new(&r, &e).unwrap();
        for j in 0..proj.rank() {
            assert!(proj.relation_at_root(j).is_zero(), "root {j}");
        }
    }

    #[test]
    fn reduce_power_on_a_line_and_a_plane_bundle() {
        let r = ring(1, 10);
        // Rank 1, root x1: u^3 reduces to x1^3.
        let line = e_lines(1, &[&[1]]);
        let proj = ProjBundleRing::new(&r, &line).unwrap();
        let x1 = Poly::<Rational>::var(r.table().clone(), Some(10), 0);
        assert_eq!(proj.reduce_power(3), vec![x1.pow_trunc(3)]);
        // Rank 2 with roots x1, 2x1: u^3 = -6x1^3 + 7x1^2 u.
        let e = e_lines(1, &[&[1], &[2]]);
        let proj2 = ProjBundleRing::new(&r, &e).unwrap();
        let got = proj2.reduce_power(3);
        assert_eq!(got[0], x1.pow_trunc(3).scale_int(&BigInt::from(-6)));
        assert_eq!(got[1], x1.pow_trunc(2).scale_int(&BigInt::from(7)));
        // Sanity: substituting each root for u reproduces root^3.
        for root in proj2.roots() {
            let val = &got[0] + &(&got[1] * root);
            assert_eq!(val, root.pow_trunc(3));
        }
    }

    #[test]
    fn newton_classes_are_power_sums_of_roots() {
        let r = ring(1, 10);
        let e = e_lines(1, &[&[1], &[2]]);
        let x1 = Poly::<Rational>::var(r.table().clone(), Some(10), 0);
        // S_1 = 3x1, S_2 = x1^2 + 4x1^2 = 5x1^2.
        assert_eq!(
            r.newton_class(&e, 1).unwrap(),
            x1.scale_int(&BigInt::from(3))
        );
        assert_eq!(
            r.newton_class(&e, 2).unwrap(),
            x1.pow_trunc(2).scale_int(&BigInt::from(5))
        );
        assert_eq!(
            r.newton_class(&e, 0).unwrap(),
            r.constant(Rational::from_int(2))
        );
    }

    #[test]
    fn chern_character_of_two_lines_matches_hand_expansion() {
        let r = ring(1, 6);
        let e = e_lines(1, &[&[1], &[2]]);
        let ch = r.chern_character(&e).unwrap();
        assert_eq!(ch.to_string(), "2 + 3*x1 + 5/2*x1^2 + 3/2*x1^3");
        // Independent route: rank + sum S_k / k!.
        assert_eq!(ch, r.chern_character_via_newton(&e).unwrap());
    }

    #[test]
    fn chern_character_is_a_ring_map_on_examples() {
        let r = ring(2, 8);
        let x = KElement::from_terms(2, vec![(vec![1, 0], 1), (vec![0, 0], -1)]).unwrap();
        let y = KElement::from_terms(2, vec![(vec![0, 1], 2), (vec![1, 1], -1)]).unwrap();
        let add = r.chern_character(&(&x + &y)).unwrap();
        assert_eq!(
            add,
            &r.chern_character(&x).unwrap() + &r.chern_character(&y).unwrap()
        );
        let mul = r.chern_character(&(&x * &y)).unwrap();
        assert_eq!(
            mul,
            &r.chern_character(&x).unwrap() * &r.chern_character(&y).unwrap()
        );
        assert_eq!(r.chern_character(&KElement::unit(2)).unwrap(), r.one());
        assert!(r.chern_character(&KElement::zero(2)).unwrap().is_zero());
    }

    #[test]
    fn steenrod_adams_scales_by_degree() {
        let r = ring(1, 8);
        let x1 = Poly::<Rational>::var(r.table().clone(), Some(8), 0);
        let a = &r.one() + &(&x1 + &x1.pow_trunc(2));
        let got = steenrod_adams(2, &a);
        let expected = &r.one()
            + &(&x1.scale_int(&BigInt::from(2)) + &x1.pow_trunc(2).scale_int(&BigInt::from(4)));
        assert_eq!(got, expected);
        // Composition law on a sample class.
        assert_eq!(
            steenrod_adams(2, &steenrod_adams(3, &a)),
            steenrod_adams(6, &a)
        );
        assert_eq!(steenrod_adams(5, &r.one()), r.one());
    }

    #[test]
    fn adams_diagram_commutes_for_a_reduced_line() {
        // Ch(psi^2(L - 1)) = psi^2_H(Ch(L - 1)).
        let r = ring(1, 8);
        let x = KElement::from_terms(1, vec![(vec![1], 1), (vec![0], -1)]).unwrap();
        let lhs = r
            .chern_character(&crate::kring::adams_newton(&x, 2))
            .unwrap();
        let rhs = steenrod_adams(2, &r.chern_character(&x).unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn pullback_is_natural_for_the_chern_character() {
        // Pulling back along x1 -> x1 + x2 matches Ch of L(1,1).
        let src = ring(1, 8);
        let dst = ring(2, 8);
        let ch_line = src.chern_character(&KElement::line(vec![1])).unwrap();
        let image = dst.root_form(&[1, 1]).unwrap();
        let pulled = pullback(&ch_line, &dst, &[image]).unwrap();
        let direct = dst.chern_character(&KElement::line(vec![1, 1])).unwrap();
        assert_eq!(pulled, direct);
    }

    #[test]
    fn pullback_rejects_inhomogeneous_images() {
        let src = ring(1, 8);
        let dst = ring(1, 8);
        let a = src.chern_character(&KElement::line(vec![1])).unwrap();
        let bad = &dst.one() + &Poly::var(dst.table().clone(), Some(8), 0);
        assert_eq!(
            pullback(&a, &dst, &[bad]),
            Err(CohomError::InhomogeneousImage)
        );
        // Zero image is fine and collapses the class to its rank.
        let z = pullback(&a, &dst, &[dst.zero()]).unwrap();
        assert_eq!(z, dst.one());
    }

    #[test]
    fn sw_character_of_single_and_trivial_lines() {
        let r = SwRing::new(1, 3).unwrap();
        let line = KElement::line(vec![1]);
        let sw = r.sw_character(&line).unwrap();
        assert_eq!(sw.to_string(), "1 + y1 + y1^2 + y1^3");
        // Trivial rank-2 bundle: rank mod 2 = 0 and all roots vanish.
        let trivial2 = KElement::trivial(1, 2);
        assert!(r.sw_character(&trivial2).unwrap().is_zero());
        let trivial1 = KElement::trivial(1, 1);
        assert_eq!(r.sw_character(&trivial1).unwrap(), r.one());
    }

    #[test]
    fn sw_character_is_additive_on_a_sample_pair() {
        let r = SwRing::new(2, 6).unwrap();
        let e = e_lines(2, &[&[1, 0], &[1, 1]]);
        let f = e_lines(2, &[&[0, 1]]);
        let lhs = r.sw_character(&(&e + &f)).unwrap();
        let rhs = &r.sw_character(&e).unwrap() + &r.sw_character(&f).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn sw_character_reduces_exponents_mod_two() {
        // L(2) has root 2*y1 = 0, so it contributes only its rank.
        let r = SwRing::new(1, 4).unwrap();
        let sw = r.sw_character(&KElement::line(vec![2])).unwrap();
        assert_eq!(sw, r.one());
    }

    #[test]
    fn config_validation() {
        assert!(CohomRing::new(0, 10).is_err());
        assert!(CohomRing::new(1, 7).is_err());
        assert!(CohomRing::new(1, 0).is_err());
        assert!(SwRing::new(1, 0).is_err());
        assert!(SwRing::new(1, 3).is_ok());
        let r = ring(1, 10);
        let e2 = KElement::unit(2);
        assert!(matches!(
            r.chern_character(&e2),
            Err(CohomError::BaseMismatch { .. })
        ));
    }

    #[test]
    fn non_effective_inputs_are_rejected_for_classes() {
        let r = ring(1, 10);
        let x = KElement::from_terms(1, vec![(vec![1], 1), (vec![0], -2)]).unwrap();
        assert!(matches!(
            r.chern_class(&x, 1),
            Err(CohomError::Kring(KringError::NonEffective))
        ));
        assert!(matches!(
            r.newton_class(&x, 1),
            Err(CohomError::Kring(KringError::NonEffective))
        ));
        let rs = SwRing::new(1, 4).unwrap();
        assert!(matches!(
            rs.sw_character(&x),
            Err(CohomError::Kring(KringError::NonEffective))
        ));
    }
}
