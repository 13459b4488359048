//! Seed-deterministic verification suite.
//!
//! Every algebraic identity the library is built on is re-checked here on
//! pseudo-randomly generated inputs: ring laws, operation-series identities,
//! the dual-route agreements (Adams split vs. Newton, Chern direct vs.
//! projective-bundle, Chern character exponential vs. Newton-class), the
//! commutation of the Chern character with Adams operations, and the CLI
//! round-trip.  Generation is fully determined by the seed (ChaCha8), so a
//! failure report is reproducible bit for bit.
//!
//! The suite runs its own base-size schedule (m cycling through 1..=3) to
//! match the quantifiers of the identities; the configured truncation degree
//! and series order are honored.

use crate::cohom::{pullback, steenrod_adams, CohomRing, ProjBundleRing, SwRing};
use crate::expr::parse_element;
use crate::kring::{
    adams_newton, adams_split, gamma_k, gamma_series, ktheory_chern, lambda_series,
    newton_series_operation, KElement, OperationSeries,
};
use crate::poly::{Poly, VarTable};
use crate::symfun::{
    elementary_symmetric, evaluate_poly, newton_polynomial, verify_power_sum_lemma, SigmaPoly,
};
use num::bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use std::fmt::Write as _;

/// Outcome of one identity family.
#[derive(Debug, Clone)]
pub struct IdentityResult {
    pub name: &'static str,
    pub checks: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

/// Outcome of the whole suite.
#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub seed: u64,
    pub trials: usize,
    pub trunc: u32,
    pub order: usize,
    pub identities: Vec<IdentityResult>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.identities.iter().all(|r| r.failures == 0)
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "seed={} trials={} trunc={} order={}",
            self.seed, self.trials, self.trunc, self.order
        );
        for r in &self.identities {
            if r.failures == 0 {
                let _ = writeln!(out, "PASS {} ({} checks)", r.name, r.checks);
            } else {
                let _ = writeln!(
                    out,
                    "FAIL {} ({} checks, {} failed): {}",
                    r.name,
                    r.checks,
                    r.failures,
                    r.first_failure.as_deref().unwrap_or("no detail")
                );
            }
        }
        let passed = self.identities.iter().filter(|r| r.failures == 0).count();
        let _ = writeln!(
            out,
            "result: {}/{} identities passed",
            passed,
            self.identities.len()
        );
        out
    }

    pub fn to_json(&self) -> Value {
        let identities: Vec<Value> = self
            .identities
            .iter()
            .map(|r| {
                json!({
                    "name": r.name,
                    "checks": r.checks,
                    "failures": r.failures,
                    "first_failure": r.first_failure,
                })
            })
            .collect();
        json!({
            "seed": self.seed,
            "trials": self.trials,
            "trunc": self.trunc,
            "order": self.order,
            "passed": self.all_passed(),
            "identities": identities,
        })
    }
}

/// Deliberate fault injection, used to prove the suite can fail loudly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sabotage {
    None,
    /// Corrupts one entry of the Newton-polynomial table before comparison.
    CorruptNewtonTable,
}

struct Checker {
    name: &'static str,
    checks: usize,
    failures: usize,
    first_failure: Option<String>,
}

impl Checker {
    fn new(name: &'static str) -> Self {
        Checker {
            name,
            checks: 0,
            failures: 0,
            first_failure: None,
        }
    }

    fn check(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(detail());
            }
        }
    }

    fn eq<T: PartialEq + std::fmt::Display>(&mut self, label: &str, lhs: &T, rhs: &T) {
        self.check(lhs == rhs, || format!("{label}: {lhs} != {rhs}"));
    }

    fn finish(self) -> IdentityResult {
        IdentityResult {
            name: self.name,
            checks: self.checks,
            failures: self.failures,
            first_failure: self.first_failure,
        }
    }
}

/// Random virtual element: up to `max_terms` monomials with exponents in
/// `[-exp_bound, exp_bound]` and multiplicities in `[-mult_bound, mult_bound]`.
pub fn random_virtual(
    rng: &mut ChaCha8Rng,
    m: usize,
    max_terms: usize,
    exp_bound: i64,
    mult_bound: i64,
) -> KElement {
    let terms = rng.gen_range(0..=max_terms);
    let mut out = KElement::zero(m);
    for _ in 0..terms {
        let exps: Vec<i64> = (0..m)
            .map(|_| rng.gen_range(-exp_bound..=exp_bound))
            .collect();
        let mult = rng.gen_range(-mult_bound..=mult_bound);
        out = &out
            + &KElement::from_terms(m, vec![(exps, mult)]).expect("arity matches by construction");
    }
    out
}

/// Random effective element of rank at most `max_rank` (sum of random line
/// monomials, repeats allowed).
pub fn random_effective(
    rng: &mut ChaCha8Rng,
    m: usize,
    max_rank: usize,
    exp_bound: i64,
) -> KElement {
    let rank = rng.gen_range(0..=max_rank);
    let mut out = KElement::zero(m);
    for _ in 0..rank {
        let exps: Vec<i64> = (0..m)
            .map(|_| rng.gen_range(-exp_bound..=exp_bound))
            .collect();
        out = &out + &KElement::line(exps);
    }
    out
}

fn m_for(trial: usize) -> usize {
    trial % 3 + 1
}

/// Runs the whole suite.  `trunc`/`order` follow the CLI configuration;
/// generation is deterministic in `seed`.
pub fn verify_suite(
    trunc: u32,
    order: usize,
    seed: u64,
    trials: usize,
    sabotage: Sabotage,
) -> VerifyReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let identities = vec![
        check_newton_table(sabotage),
        check_power_sum_lemma(),
        check_lambda_multiplicativity(&mut rng, trials, order),
        check_gamma_multiplicativity(&mut rng, trials, order),
        check_gamma_reduced_line(&mut rng, trials, order),
        check_newton_series_additivity(&mut rng, trials, order),
        check_adams_dual_route(&mut rng, trials),
        check_adams_ring_laws(&mut rng, trials),
        check_rank_and_reduction(&mut rng, trials),
        check_ktheory_chern_whitney(&mut rng, trials),
        check_chern_dual_route(&mut rng, trials, trunc),
        check_chern_whitney_permutation(&mut rng, trials, trunc),
        check_newton_class_laws(&mut rng, trials, trunc),
        check_chern_character_ring(&mut rng, trials, trunc),
        check_adams_diagram(&mut rng, trials, trunc),
        check_steenrod_endomorphism(&mut rng, trials, trunc),
        check_sw_additivity(&mut rng, trials, trunc),
        check_pullback_naturality(&mut rng, trials, trunc),
        check_parse_render_roundtrip(&mut rng, trials),
    ];
    VerifyReport {
        seed,
        trials,
        trunc,
        order,
        identities,
    }
}

fn frozen_newton_table() -> Vec<SigmaPoly> {
    let fz = |k: usize, terms: Vec<(Vec<u32>, i64)>| -> SigmaPoly {
        Poly::from_terms(
            VarTable::sigma(k),
            None,
            terms.into_iter().map(|(e, c)| (e, BigInt::from(c))),
        )
        .expect("frozen tables are well formed")
    };
    vec![
        fz(1, vec![(vec![1], 1)]),
        fz(2, vec![(vec![2, 0], 1), (vec![0, 1], -2)]),
        fz(
            3,
            vec![(vec![3, 0, 0], 1), (vec![1, 1, 0], -3), (vec![0, 0, 1], 3)],
        ),
    ]
}

fn check_newton_table(sabotage: Sabotage) -> IdentityResult {
    let mut c = Checker::new("newton-table");
    for (idx, expected) in frozen_newton_table().into_iter().enumerate() {
        let k = idx + 1;
        let mut computed = newton_polynomial(k);
        if sabotage == Sabotage::CorruptNewtonTable && k == 2 {
            // Simulated table corruption: flip the sign of the s2 term.
            let s2 = Poly::<BigInt>::var(VarTable::sigma(2), None, 1);
            computed = computed
                .checked_add(&s2.scale_int(&BigInt::from(4)))
                .expect("same ring");
        }
        c.eq(&format!("Q_{k}"), &computed, &expected);
    }
    for k in 1..=8 {
        let q = newton_polynomial(k);
        c.check(q.is_homogeneous_of(k as u32), || {
            format!("Q_{k} is not weighted-homogeneous of degree {k}")
        });
    }
    c.finish()
}

fn check_power_sum_lemma() -> IdentityResult {
    let mut c = Checker::new("power-sum-lemma");
    for k in 1..=8 {
        for n in 1..=6 {
            let rep = verify_power_sum_lemma(k, n);
            c.check(rep.equal, || {
                format!("Q_{k} at sigma(u_1..u_{n}): {} != {}", rep.lhs, rep.rhs)
            });
        }
    }
    c.finish()
}

fn check_lambda_multiplicativity(
    rng: &mut ChaCha8Rng,
    trials: usize,
    order: usize,
) -> IdentityResult {
    let mut c = Checker::new("lambda-multiplicativity");
    for trial in 0..trials {
        let m = m_for(trial);
        let x = random_virtual(rng, m, 4, 2, 3);
        let y = random_virtual(rng, m, 4, 2, 3);
        let lhs = lambda_series(&(&x + &y), order);
        let rhs = lambda_series(&x, order)
            .mul(&lambda_series(&y, order))
            .expect("same base and order");
        c.check(lhs == rhs, || {
            format!("lambda(x+y) != lambda(x)lambda(y) for x = {x}, y = {y}")
        });
        c.eq("lambda constant term", lhs.coeff(0), &KElement::unit(m));
    }
    c.finish()
}

fn check_gamma_multiplicativity(
    rng: &mut ChaCha8Rng,
    trials: usize,
    order: usize,
) -> IdentityResult {
    let mut c = Checker::new("gamma-multiplicativity");
    for trial in 0..trials {
        let m = m_for(trial);
        let x = random_virtual(rng, m, 4, 2, 3);
        let y = random_virtual(rng, m, 4, 2, 3);
        let lhs = gamma_series(&(&x + &y), order);
        let rhs = gamma_series(&x, order)
            .mul(&gamma_series(&y, order))
            .expect("same base and order");
        c.check(lhs == rhs, || {
            format!("gamma(x+y) != gamma(x)gamma(y) for x = {x}, y = {y}")
        });
        c.eq("gamma constant term", lhs.coeff(0), &KElement::unit(m));
    }
    c.finish()
}

fn check_gamma_reduced_line(rng: &mut ChaCha8Rng, trials: usize, order: usize) -> IdentityResult {
    let mut c = Checker::new("gamma-reduced-line");
    for trial in 0..trials {
        let m = m_for(trial);
        let exps: Vec<i64> = (0..m).map(|_| rng.gen_range(-3..=3)).collect();
        let x = &KElement::line(exps) - &KElement::unit(m);
        let s = gamma_series(&x, order);
        c.eq("gamma^0(L-1)", s.coeff(0), &KElement::unit(m));
        c.eq("gamma^1(L-1)", s.coeff(1), &x);
        for j in 2..=order {
            c.check(s.coeff(j).is_zero(), || {
                format!("gamma^{j}(L-1) != 0 for x = {x}")
            });
        }
    }
    c.finish()
}

fn check_newton_series_additivity(
    rng: &mut ChaCha8Rng,
    trials: usize,
    order: usize,
) -> IdentityResult {
    let mut c = Checker::new("newton-series-additivity");
    for trial in 0..trials {
        let m = m_for(trial);
        let len = rng.gen_range(1..=order);
        let coeffs: Vec<i64> = (0..len).map(|_| rng.gen_range(-3..=3)).collect();
        let f = OperationSeries::from_i64(&coeffs);
        let x = random_virtual(rng, m, 3, 2, 2);
        let y = random_virtual(rng, m, 3, 2, 2);
        let lhs = newton_series_operation(&f, &(&x + &y), order);
        let rhs = &newton_series_operation(&f, &x, order) + &newton_series_operation(&f, &y, order);
        c.check(lhs == rhs, || {
            format!("series op not additive: {lhs} != {rhs} for x = {x}, y = {y}")
        });
    }
    c.finish()
}

fn check_adams_dual_route(rng: &mut ChaCha8Rng, trials: usize) -> IdentityResult {
    let mut c = Checker::new("adams-dual-route");
    for trial in 0..trials {
        let m = m_for(trial);
        let x = random_virtual(rng, m, 4, 2, 3);
        for k in 1..=5 {
            let newton = adams_newton(&x, k);
            let split = adams_split(&x, k);
            c.check(newton == split, || {
                format!("psi^{k} routes disagree on {x}: {newton} != {split}")
            });
        }
    }
    c.finish()
}

fn check_adams_ring_laws(rng: &mut ChaCha8Rng, trials: usize) -> IdentityResult {
    let mut c = Checker::new("adams-ring-laws");
    for trial in 0..trials {
        let m = m_for(trial);
        let x = random_virtual(rng, m, 3, 2, 2);
        let y = random_virtual(rng, m, 3, 2, 2);
        let k = rng.gen_range(1..=5);
        let add = adams_newton(&(&x + &y), k);
        c.eq(
            "psi^k additive",
            &add,
            &(&adams_newton(&x, k) + &adams_newton(&y, k)),
        );
        let mul = adams_newton(&(&x * &y), k);
        c.eq(
            "psi^k multiplicative",
            &mul,
            &adams_newton(&x, k)
                .tensor(&adams_newton(&y, k))
                .expect("same base"),
        );
        c.eq("psi^1 = id", &adams_newton(&x, 1), &x);
        c.eq(
            "psi^k(1) = 1",
            &adams_newton(&KElement::unit(m), k),
            &KElement::unit(m),
        );
        // Composition law, on the cheaper split route plus one Newton case.
        let l = rng.gen_range(1..=3);
        c.eq(
            "psi^k psi^l = psi^(kl) (split)",
            &adams_split(&adams_split(&x, l), k),
            &adams_split(&x, k * l),
        );
        c.eq(
            "psi^2 psi^2 = psi^4 (newton)",
            &adams_newton(&adams_newton(&x, 2), 2),
            &adams_newton(&x, 4),
        );
    }
    c.finish()
}

fn check_rank_and_reduction(rng: &mut ChaCha8Rng, trials: usize) -> IdentityResult {
    let mut c = Checker::new("rank-and-reduction");
    for trial in 0..trials {
        let m = m_for(trial);
        let x = random_virtual(rng, m, 4, 2, 3);
        let y = random_virtual(rng, m, 4, 2, 3);
        c.check((&x + &y).rank() == x.rank() + y.rank(), || {
            format!("rank not additive on {x}, {y}")
        });
        c.check((&x * &y).rank() == x.rank() * y.rank(), || {
            format!("rank not multiplicative on {x}, {y}")
        });
        let k = rng.gen_range(1..=5);
        c.check(adams_newton(&x, k).rank() == x.rank(), || {
            format!("psi^{k} changed the rank of {x}")
        });
        let red = x.reduced();
        c.check(red.is_reduced(), || format!("reduction failed on {x}"));
        c.eq("gamma^1 on reduced part", &gamma_k(&red, 1), &red);
        c.eq("gamma^0", &gamma_k(&x, 0), &KElement::unit(m));
    }
    c.finish()
}

fn check_ktheory_chern_whitney(rng: &mut ChaCha8Rng, trials: usize) -> IdentityResult {
    let mut c = Checker::new("ktheory-chern-whitney");
    for trial in 0..trials {
        let m = m_for(trial);
        let e = random_effective(rng, m, 3, 2);
        let f = random_effective(rng, m, 3, 2);
        let sum = &e + &f;
        let total_rank = sum.line_summands().expect("effective").len();
        for k in 0..=total_rank {
            let lhs = ktheory_chern(&sum, k).expect("effective");
            let mut rhs = KElement::zero(m);
            for i in 0..=k {
                let a = ktheory_chern(&e, i).expect("effective");
                let b = ktheory_chern(&f, k - i).expect("effective");
                rhs = &rhs + &a.tensor(&b).expect("same base");
            }
            c.check(lhs == rhs, || {
                format!("K-theory Whitney fails at k = {k} for E = {e}, F = {f}")
            });
        }
        c.eq(
            "c_0 = 1",
            &ktheory_chern(&e, 0).expect("effective"),
            &KElement::unit(m),
        );
    }
    c.finish()
}

fn check_chern_dual_route(rng: &mut ChaCha8Rng, trials: usize, trunc: u32) -> IdentityResult {
    let mut c = Checker::new("chern-dual-route");
    for trial in 0..trials {
        let m = m_for(trial);
        let ring = CohomRing::new(m, trunc).expect("valid config");
        let e = random_effective(rng, m, 4, 2);
        let rank = e.line_summands().expect("effective").len();
        for i in 0..=rank + 1 {
            let direct = ring.chern_class(&e, i).expect("effective");
            let via_proj = ring.chern_via_projective(&e, i).expect("effective");
            c.check(direct == via_proj, || {
                format!("Chern routes disagree at i = {i} for E = {e}: {direct} != {via_proj}")
            });
        }
        if rank >= 1 {
            let proj = ProjBundleRing::new(&ring, &e).expect("rank >= 1");
            for j in 0..proj.rank() {
                c.check(proj.relation_at_root(j).is_zero(), || {
                    format!("monic relation nonzero at root {j} of E = {e}")
                });
            }
        }
    }
    c.finish()
}

fn check_chern_whitney_permutation(
    rng: &mut ChaCha8Rng,
    trials: usize,
    trunc: u32,
) -> IdentityResult {
    let mut c = Checker::new("chern-whitney-permutation");
    for trial in 0..trials {
        let m = m_for(trial);
        let ring = CohomRing::new(m, trunc).expect("valid config");
        let e = random_effective(rng, m, 3, 2);
        let f = random_effective(rng, m, 3, 2);
        let sum = &e + &f;
        let total_rank = sum.line_summands().expect("effective").len();
        for k in 0..=total_rank {
            let lhs = ring.chern_class(&sum, k).expect("effective");
            let mut rhs = ring.zero();
            for i in 0..=k {
                let a = ring.chern_class(&e, i).expect("effective");
                let b = ring.chern_class(&f, k - i).expect("effective");
                rhs = &rhs + &(&a * &b);
            }
            c.check(lhs == rhs, || {
                format!("Whitney fails at k = {k} for E = {e}, F = {f}")
            });
        }
        // Summand order cannot matter: evaluate sigma_i at a shuffled list of
        // root forms and compare with the canonical expansion.
        let roots = sum.line_summands().expect("effective");
        if !roots.is_empty() {
            let mut shuffled = roots.clone();
            for i in (1..shuffled.len()).rev() {
                let j = rng.gen_range(0..=i);
                shuffled.swap(i, j);
            }
            let forms: Vec<_> = shuffled
                .iter()
                .map(|a| ring.root_form(a).expect("arity matches"))
                .collect();
            for i in 1..=total_rank {
                let permuted = evaluate_poly(&elementary_symmetric(i, forms.len()), &forms)
                    .expect("same ring");
                let canonical = ring.chern_class(&sum, i).expect("effective");
                c.check(permuted == canonical, || {
                    format!("sigma_{i} is order-sensitive for E+F = {sum}")
                });
            }
        }
    }
    c.finish()
}

fn check_newton_class_laws(rng: &mut ChaCha8Rng, trials: usize, trunc: u32) -> IdentityResult {
    let mut c = Checker::new("newton-class-laws");
    for trial in 0..trials {
        let m = m_for(trial);
        let ring = CohomRing::new(m, trunc).expect("valid config");
        let e = random_effective(rng, m, 3, 2);
        let f = random_effective(rng, m, 3, 2);
        for k in 1..=5usize {
            // Additivity.
            let lhs = ring.newton_class(&(&e + &f), k).expect("effective");
            let rhs = &ring.newton_class(&e, k).expect("effective")
                + &ring.newton_class(&f, k).expect("effective");
            c.check(lhs == rhs, || {
                format!("S_{k} not additive for E = {e}, F = {f}")
            });
            // Power-sum identity: S_k(E) = sum over roots of <a,x>^k.
            let mut powers = ring.zero();
            for a in e.line_summands().expect("effective") {
                powers = &powers + &ring.root_form(&a).expect("arity").pow_trunc(k as u32);
            }
            c.check(
                ring.newton_class(&e, k).expect("effective") == powers,
                || format!("S_{k}(E) is not the root power sum for E = {e}"),
            );
            // Tensor convolution: S_k(E (x) F) = sum C(k,i) S_i(E) S_j(F).
            let prod = e.tensor(&f).expect("same base");
            let lhs = ring.newton_class(&prod, k).expect("effective");
            let mut rhs = ring.zero();
            for i in 0..=k {
                let si = ring.newton_class(&e, i).expect("effective");
                let sj = ring.newton_class(&f, k - i).expect("effective");
                let b = crate::coeff::binomial(k as i64, i as u64);
                rhs = &rhs + &(&si * &sj).scale_int(&b);
            }
            c.check(lhs == rhs, || {
                format!("S_{k} tensor convolution fails for E = {e}, F = {f}")
            });
        }
    }
    c.finish()
}

fn check_chern_character_ring(rng: &mut ChaCha8Rng, trials: usize, trunc: u32) -> IdentityResult {
    let mut c = Checker::new("chern-character-ring");
    for trial in 0..trials {
        let m = m_for(trial);
        let ring = CohomRing::new(m, trunc).expect("valid config");
        let x = random_virtual(rng, m, 4, 2, 3);
        let y = random_virtual(rng, m, 4, 2, 3);
        let chx = ring.chern_character(&x).expect("same base");
        let chy = ring.chern_character(&y).expect("same base");
        c.eq(
            "Ch additive",
            &ring.chern_character(&(&x + &y)).expect("same base"),
            &(&chx + &chy),
        );
        c.eq(
            "Ch multiplicative",
            &ring.chern_character(&(&x * &y)).expect("same base"),
            &(&chx * &chy),
        );
        c.eq(
            "Ch(1) = 1",
            &ring.chern_character(&KElement::unit(m)).expect("same base"),
            &ring.one(),
        );
        c.eq(
            "degree-0 part is the rank",
            &chx.constant_term(),
            &crate::coeff::Rational::from_int(x.rank()),
        );
        // Route agreement on an effective element.
        let e = random_effective(rng, m, 3, 2);
        c.eq(
            "Ch route agreement",
            &ring.chern_character(&e).expect("same base"),
            &ring.chern_character_via_newton(&e).expect("effective"),
        );
    }
    c.finish()
}

fn check_adams_diagram(rng: &mut ChaCha8Rng, trials: usize, trunc: u32) -> IdentityResult {
    let mut c = Checker::new("adams-diagram");
    for trial in 0..trials {
        let m = m_for(trial);
        let ring = CohomRing::new(m, trunc).expect("valid config");
        let x = random_virtual(rng, m, 4, 2, 3);
        for k in 1..=5 {
            let lhs = ring
                .chern_character(&adams_newton(&x, k))
                .expect("same base");
            let rhs = steenrod_adams(k, &ring.chern_character(&x).expect("same base"));
            c.check(lhs == rhs, || {
                format!("Ch(psi^{k}(x)) != psi^{k}_H(Ch(x)) for x = {x}: {lhs} != {rhs}")
            });
        }
    }
    c.finish()
}

fn check_steenrod_endomorphism(rng: &mut ChaCha8Rng, trials: usize, trunc: u32) -> IdentityResult {
    let mut c = Checker::new("steenrod-endomorphism");
    for trial in 0..trials {
        let m = m_for(trial);
        let ring = CohomRing::new(m, trunc).expect("valid config");
        // Random even-degree classes built from Chern characters.
        let a = ring
            .chern_character(&random_virtual(rng, m, 3, 2, 2))
            .expect("same base");
        let b = ring
            .chern_character(&random_virtual(rng, m, 3, 2, 2))
            .expect("same base");
        let k = rng.gen_range(1..=5);
        c.eq(
            "psi_H additive",
            &steenrod_adams(k, &(&a + &b)),
            &(&steenrod_adams(k, &a) + &steenrod_adams(k, &b)),
        );
        c.eq(
            "psi_H multiplicative",
            &steenrod_adams(k, &(&a * &b)),
            &(&steenrod_adams(k, &a) * &steenrod_adams(k, &b)),
        );
        let l = rng.gen_range(1..=3);
        c.eq(
            "psi_H composition",
            &steenrod_adams(k, &steenrod_adams(l, &a)),
            &steenrod_adams(k * l, &a),
        );
        c.eq("psi^1_H = id", &steenrod_adams(1, &a), &a);
    }
    c.finish()
}

fn check_sw_additivity(rng: &mut ChaCha8Rng, trials: usize, trunc: u32) -> IdentityResult {
    let mut c = Checker::new("sw-additivity");
    for trial in 0..trials {
        let m = m_for(trial);
        let ring = SwRing::new(m, trunc).expect("valid config");
        let e = random_effective(rng, m, 3, 2);
        let f = random_effective(rng, m, 3, 2);
        let lhs = ring.sw_character(&(&e + &f)).expect("effective");
        let rhs =
            &ring.sw_character(&e).expect("effective") + &ring.sw_character(&f).expect("effective");
        c.check(lhs == rhs, || {
            format!("sw not additive for E = {e}, F = {f}: {lhs} != {rhs}")
        });
        let n = rng.gen_range(0..=4);
        let trivial = KElement::trivial(m, n);
        let sw = ring.sw_character(&trivial).expect("effective");
        let expected = if n % 2 == 0 { ring.zero() } else { ring.one() };
        c.eq("sw of a trivial bundle is its rank mod 2", &sw, &expected);
    }
    c.finish()
}

fn check_pullback_naturality(rng: &mut ChaCha8Rng, trials: usize, trunc: u32) -> IdentityResult {
    let mut c = Checker::new("pullback-naturality");
    for trial in 0..trials {
        let m_src = m_for(trial);
        let m_dst = m_for(trial + 1);
        let src = CohomRing::new(m_src, trunc).expect("valid config");
        let dst = CohomRing::new(m_dst, trunc).expect("valid config");
        // Integer matrix B: the map sends L_i to the product of L_j^{B[i][j]},
        // i.e. the root x_i to the linear form <B[i], x>.
        let b: Vec<Vec<i64>> = (0..m_src)
            .map(|_| (0..m_dst).map(|_| rng.gen_range(-2..=2)).collect())
            .collect();
        let images: Vec<_> = b
            .iter()
            .map(|row| dst.root_form(row).expect("arity matches"))
            .collect();
        let x = random_virtual(rng, m_src, 3, 2, 2);
        // Transport x along the map on K-theory.
        let mut mapped = KElement::zero(m_dst);
        for (a, n) in x.terms() {
            let new_exps: Vec<i64> = (0..m_dst)
                .map(|j| a.iter().zip(&b).map(|(&ai, row)| ai * row[j]).sum())
                .collect();
            mapped =
                &mapped + &KElement::from_terms(m_dst, vec![(new_exps, n.clone())]).expect("arity");
        }
        let pulled = pullback(&src.chern_character(&x).expect("same base"), &dst, &images)
            .expect("degree-2 images");
        let direct = dst.chern_character(&mapped).expect("same base");
        c.check(pulled == direct, || {
            format!("pullback not natural for x = {x}: {pulled} != {direct}")
        });
        // Pullback commutes with the Adams endomorphism.
        let k = rng.gen_range(1..=4);
        let a_class = src.chern_character(&x).expect("same base");
        let lhs = steenrod_adams(k, &pullback(&a_class, &dst, &images).expect("degree-2"));
        let rhs = pullback(&steenrod_adams(k, &a_class), &dst, &images).expect("degree-2");
        c.eq("pullback commutes with psi_H", &lhs, &rhs);
    }
    c.finish()
}

fn check_parse_render_roundtrip(rng: &mut ChaCha8Rng, trials: usize) -> IdentityResult {
    let mut c = Checker::new("parse-render-roundtrip");
    for trial in 0..trials {
        let m = m_for(trial);
        let x = random_virtual(rng, m, 4, 3, 5);
        let rendered = x.to_string();
        match parse_element(&rendered, m) {
            Ok(back) => c.eq("round-trip", &back, &x),
            Err(e) => c.check(false, || format!("render {rendered} failed to parse: {e}")),
        }
    }
    c.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_suite_passes() {
        let report = verify_suite(8, 6, 0, 12, Sabotage::None);
        assert!(report.all_passed(), "\n{}", report.render_text());
    }

    #[test]
    fn suite_is_deterministic_in_the_seed() {
        let a = verify_suite(8, 6, 42, 8, Sabotage::None);
        let b = verify_suite(8, 6, 42, 8, Sabotage::None);
        assert_eq!(a.render_text(), b.render_text());
    }

    #[test]
    fn sabotage_makes_the_suite_fail() {
        let report = verify_suite(8, 6, 0, 4, Sabotage::CorruptNewtonTable);
        assert!(!report.all_passed());
        let newton = &report.identities[0];
        assert_eq!(newton.name, "newton-table");
        assert!(newton.failures > 0);
        assert!(newton.first_failure.is_some());
    }

    #[test]
    fn report_renders_one_line_per_identity() {
        let report = verify_suite(8, 6, 1, 3, Sabotage::None);
        let text = report.render_text();
        for r in &report.identities {
            assert!(text.contains(r.name), "missing {}", r.name);
        }
        assert!(text.contains("identities passed"));
        let json = report.to_json();
        assert_eq!(json["passed"], serde_json::json!(true));
    }
}
