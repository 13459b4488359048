//! Symmetric-function machinery: elementary symmetric polynomials, Newton
//! polynomials in the sigma basis, and generic evaluation into any
//! commutative ring.
//!
//! The Newton polynomial `Q_k` expresses the k-th power sum in terms of the
//! elementary symmetric functions: substituting `s_i := sigma_i(u_1..u_n)`
//! into `Q_k` recovers `u_1^k + ... + u_n^k` for every `n`.  The table is
//! built once per process through the recursion
//!
//! `Q_k = s_1 Q_{k-1} - s_2 Q_{k-2} + ... + (-1)^k s_{k-1} Q_1 + (-1)^{k-1} k s_k`
//!
//! and cached; `verify_power_sum_lemma` checks the defining property by
//! brute-force expansion.

use crate::poly::{Poly, TableRef, VarTable};
use crate::ring::CommRing;
use num::bigint::BigInt;
use std::sync::Mutex;
use thiserror::Error;

/// Integer polynomial in the sigma basis (`s_i` has weight `i`).
pub type SigmaPoly = Poly<BigInt>;

/// Errors from generic polynomial evaluation.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("no values supplied; cannot infer the target ring")]
    EmptyValues,
    #[error("values belong to different rings")]
    MixedRings,
}

static NEWTON_CACHE: Mutex<Vec<SigmaPoly>> = Mutex::new(Vec::new());

/// The k-th Newton polynomial `Q_k(s_1, ..., s_k)`, `k >= 1`, over the
/// integers, in its own k-variable sigma table.
pub fn newton_polynomial(k: usize) -> SigmaPoly {
    assert!(k >= 1, "Newton polynomials are indexed from 1");
    let mut cache = NEWTON_CACHE.lock().expect("cache lock");
    while cache.len() < k {
        let next = compute_newton(cache.len() + 1, &cache);
        cache.push(next);
    }
    cache[k - 1].clone()
}

fn compute_newton(k: usize, lower: &[SigmaPoly]) -> SigmaPoly {
    let table = VarTable::sigma(k);
    if k == 1 {
        return Poly::var(table, None, 0);
    }
    let mut acc = Poly::zero(table.clone(), None);
    for i in 1..k {
        let s_i = Poly::<BigInt>::var(table.clone(), None, i - 1);
        let q = lower[k - i - 1]
            .extend_table(&table)
            .expect("sigma tables are nested");
        let mut term = s_i.checked_mul(&q).expect("same ring");
        if i % 2 == 0 {
            term = term.map_neg();
        }
        acc = acc.checked_add(&term).expect("same ring");
    }
    let mut tail = Poly::<BigInt>::var(table, None, k - 1).scale_int(&BigInt::from(k as i64));
    if k.is_multiple_of(2) {
        tail = tail.map_neg();
    }
    acc.checked_add(&tail).expect("same ring")
}

/// The elementary symmetric polynomial `sigma_i(u_1, ..., u_n)` over the
/// integers.  `sigma_0 = 1`; `sigma_i = 0` for `i > n`.
pub fn elementary_symmetric(i: usize, n: usize) -> Poly<BigInt> {
    let table = VarTable::power_vars(n);
    let mut ladder: Vec<Poly<BigInt>> = vec![Poly::zero(table.clone(), None); i + 1];
    ladder[0] = Poly::one(table.clone(), None);
    for v in 0..n {
        let uv = Poly::<BigInt>::var(table.clone(), None, v);
        for j in (1..=i.min(v + 1)).rev() {
            let grown = ladder[j - 1].checked_mul(&uv).expect("same ring");
            ladder[j] = ladder[j].checked_add(&grown).expect("same ring");
        }
    }
    ladder.pop().expect("ladder is nonempty")
}

/// Evaluates an integer polynomial at values in any commutative ring.
/// Missing trailing values are treated as zero; extra values are ignored.
pub fn evaluate_poly<R: CommRing>(p: &Poly<BigInt>, values: &[R]) -> Result<R, EvalError> {
    let exemplar = values.first().ok_or(EvalError::EmptyValues)?;
    if values.iter().any(|v| !exemplar.same_ring(v)) {
        return Err(EvalError::MixedRings);
    }
    let one = exemplar.ring_one();
    let mut acc = exemplar.ring_zero();
    'terms: for (m, c) in p.terms() {
        // A positive exponent on a variable with no supplied value means the
        // term is multiplied by zero.
        if m.exps().iter().skip(values.len()).any(|&e| e > 0) {
            continue;
        }
        let mut term = one.ring_scale_int(c);
        for (i, &e) in m.exps().iter().enumerate().take(values.len()) {
            if e > 0 {
                term = term.ring_mul(&values[i].ring_pow(e));
                if term == exemplar.ring_zero() {
                    continue 'terms;
                }
            }
        }
        acc = acc.ring_add(&term);
    }
    Ok(acc)
}

/// Evaluates the k-th Newton polynomial at `values = [v_1, v_2, ...]`
/// (standing for `s_1, s_2, ...`).  Values beyond index `k` are ignored and
/// missing ones are treated as zero.
pub fn evaluate_newton<R: CommRing>(k: usize, values: &[R]) -> Result<R, EvalError> {
    let q = newton_polynomial(k);
    evaluate_poly(&q, &values[..k.min(values.len())])
}

/// Outcome of one brute-force power-sum check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerSumReport {
    pub k: usize,
    pub n: usize,
    pub equal: bool,
    pub lhs: Poly<BigInt>,
    pub rhs: Poly<BigInt>,
}

/// Expands `Q_k(sigma_1(u), ..., sigma_k(u))` in `n` abstract roots and
/// compares it with the bare power sum `u_1^k + ... + u_n^k`.
pub fn verify_power_sum_lemma(k: usize, n: usize) -> PowerSumReport {
    let table: TableRef = VarTable::power_vars(n);
    let sigmas: Vec<Poly<BigInt>> = (1..=k).map(|i| elementary_symmetric(i, n)).collect();
    let lhs = evaluate_newton(k, &sigmas).expect("sigma values share one ring");
    let mut rhs = Poly::zero(table.clone(), None);
    for v in 0..n {
        let pw = Poly::<BigInt>::var(table.clone(), None, v).pow_trunc(k as u32);
        rhs = rhs.checked_add(&pw).expect("same ring");
    }
    PowerSumReport {
        k,
        n,
        equal: lhs == rhs,
        lhs,
        rhs,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::Rational;

    fn sigma_poly(k: usize, terms: Vec<(Vec<u32>, i64)>) -> SigmaPoly {
        Poly::from_terms(
            VarTable::sigma(k),
            None,
            terms.into_iter().map(|(e, c)| (e, BigInt::from(c))),
        )
        .unwrap()
    }

    #[test]
    fn newton_polynomials_one_through_three() {
        assert_eq!(newton_polynomial(1), sigma_poly(1, vec![(vec![1], 1)]));
        assert_eq!(
            newton_polynomial(2),
            sigma_poly(2, vec![(vec![2, 0], 1), (vec![0, 1], -2)])
        );
        assert_eq!(
            newton_polynomial(3),
            sigma_poly(
                3,
                vec![(vec![3, 0, 0], 1), (vec![1, 1, 0], -3), (vec![0, 0, 1], 3)]
            )
        );
        assert_eq!(newton_polynomial(2).to_string(), "s1^2 - 2*s2");
        assert_eq!(newton_polynomial(3).to_string(), "s1^3 - 3*s1*s2 + 3*s3");
    }

    #[test]
    fn newton_polynomial_four_matches_hand_expansion() {
        // Derived once from the recursion and checked against the power-sum
        // lemma below; frozen here as a regression anchor.
        assert_eq!(
            newton_polynomial(4),
            sigma_poly(
                4,
                vec![
                    (vec![4, 0, 0, 0], 1),
                    (vec![2, 1, 0, 0], -4),
                    (vec![0, 2, 0, 0], 2),
                    (vec![1, 0, 1, 0], 4),
                    (vec![0, 0, 0, 1], -4),
                ]
            )
        );
    }

    #[test]
    fn newton_polynomials_are_weighted_homogeneous() {
        for k in 1..=8 {
            let q = newton_polynomial(k);
            assert!(
                q.is_homogeneous_of(k as u32),
                "Q_{k} must be homogeneous of weight {k}"
            );
        }
    }

    #[test]
    fn elementary_symmetric_small_cases() {
        let e2 = elementary_symmetric(2, 3);
        assert_eq!(e2.to_string(), "u1*u2 + u1*u3 + u2*u3");
        assert!(elementary_symmetric(0, 3).is_homogeneous_of(0));
        assert_eq!(
            elementary_symmetric(0, 3),
            Poly::one(VarTable::power_vars(3), None)
        );
        assert!(elementary_symmetric(4, 3).is_zero());
        assert_eq!(elementary_symmetric(3, 3).to_string(), "u1*u2*u3");
    }

    #[test]
    fn power_sum_lemma_smoke() {
        for k in 1..=4 {
            for n in 0..=4 {
                let rep = verify_power_sum_lemma(k, n);
                assert!(rep.equal, "k = {k}, n = {n}");
            }
        }
    }

    #[test]
    fn evaluate_newton_in_a_polynomial_ring() {
        // Q_2(x1 + x2, x1 x2) = x1^2 + x2^2.
        let t = VarTable::chern_roots(2);
        let x1 = Poly::<Rational>::var(t.clone(), None, 0);
        let x2 = Poly::<Rational>::var(t.clone(), None, 1);
        let got = evaluate_newton(2, &[&x1 + &x2, &x1 * &x2]).unwrap();
        let expected = &x1.pow_trunc(2) + &x2.pow_trunc(2);
        assert_eq!(got, expected);
    }

    #[test]
    fn evaluate_newton_pads_missing_values_with_zero() {
        // Q_3(a, b, 0) = a^3 - 3ab at a = 1, b = 1 gives -2.
        let got = evaluate_newton(3, &[Rational::from_int(1), Rational::from_int(1)]).unwrap();
        assert_eq!(got, Rational::from_int(-2));
    }

    #[test]
    fn evaluation_rejects_degenerate_inputs() {
        let empty: [Rational; 0] = [];
        assert_eq!(evaluate_newton(2, &empty), Err(EvalError::EmptyValues));
        let t1 = VarTable::chern_roots(1);
        let t2 = VarTable::chern_roots(2);
        let a = Poly::<Rational>::var(t1, None, 0);
        let b = Poly::<Rational>::var(t2, None, 0);
        assert_eq!(evaluate_newton(2, &[a, b]), Err(EvalError::MixedRings));
    }
}
