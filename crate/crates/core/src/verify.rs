//! Randomized self-verification suites.
//!
//! Each suite checks an algebraic identity that must hold exactly (or a
//! numeric consistency bound) on seeded random inputs. The suites back
//! the `verify` CLI subcommand and are reused by the test suites, so
//! the identities are pinned in exactly one place.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coeffseq::CoeffSeq;
use crate::dyadic::Dyadic;
use crate::exppoly::{ExpPoly, Term};
use crate::groupops::{concat, equivalent_up_to, in_xstar, inverse};
use crate::integrals::{moment_via_words, IntegralEvaluator};
use crate::numeric::{adaptive_quadrature, picard_radius, return_map_numeric};
use crate::piecewise::PiecewiseCoeff;
use crate::returnmap::{return_coeffs_iterated, return_coeffs_transport, ReturnSeries};
use crate::scalar::{rat, GaussRat, Scalar};
use crate::words::{shuffle, words_up_to, MomentSpec, Word};

/// Outcome of one identity within a suite.
#[derive(Clone, Debug)]
pub struct CheckResult {
    pub name: String,
    pub trials: u32,
    pub failures: u32,
    pub first_failure: Option<String>,
}

impl CheckResult {
    fn new(name: &str) -> Self {
        CheckResult {
            name: name.to_owned(),
            trials: 0,
            failures: 0,
            first_failure: None,
        }
    }

    fn record(&mut self, pass: bool, detail: impl FnOnce() -> String) {
        self.trials += 1;
        if !pass {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(detail());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// The results of one named suite.
#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub max_order: u32,
    pub checks: Vec<CheckResult>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }
}

/// Unknown suite name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownSuite(pub String);

impl fmt::Display for UnknownSuite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "unknown suite {:?}; available: {}",
            self.0,
            SUITE_NAMES.join(", ")
        )
    }
}

impl std::error::Error for UnknownSuite {}

/// Suite names accepted by [`run_suites`].
pub const SUITE_NAMES: &[&str] = &[
    "shuffle",
    "moments",
    "pipeline",
    "group",
    "numeric",
    "quadrature",
    "all",
];

/// Size bounds for random inputs.
#[derive(Clone, Copy, Debug)]
pub struct GenConfig {
    pub max_index: u32,
    pub max_pieces: usize,
    pub max_terms: usize,
    pub max_freq: i64,
    pub max_xpow: u32,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            max_index: 3,
            max_pieces: 2,
            max_terms: 2,
            max_freq: 2,
            max_xpow: 1,
        }
    }
}

/// A small random Gaussian rational with denominator at most 3.
pub fn random_gauss(rng: &mut ChaCha8Rng) -> GaussRat {
    let part = |rng: &mut ChaCha8Rng| rat(rng.gen_range(-3..=3), rng.gen_range(1..=3));
    let re = part(rng);
    let im = if rng.gen_bool(0.3) { part(rng) } else { rat(0, 1) };
    GaussRat::new(re, im)
}

pub fn random_exppoly(rng: &mut ChaCha8Rng, cfg: &GenConfig) -> ExpPoly {
    let n_terms = rng.gen_range(1..=cfg.max_terms);
    let mut terms = Vec::with_capacity(n_terms);
    for _ in 0..n_terms {
        terms.push(Term::new(
            Scalar::from_gauss(random_gauss(rng)),
            rng.gen_range(0..=cfg.max_xpow),
            rng.gen_range(-cfg.max_freq..=cfg.max_freq),
        ));
    }
    ExpPoly::from_terms(terms)
}

pub fn random_piecewise(rng: &mut ChaCha8Rng, cfg: &GenConfig) -> PiecewiseCoeff {
    let n_pieces = rng.gen_range(1..=cfg.max_pieces);
    if n_pieces == 1 {
        return PiecewiseCoeff::from_poly(random_exppoly(rng, cfg));
    }
    // quarter-lattice breakpoints are compatible with every integer
    // frequency
    let cuts = [Dyadic::new(1, 2), Dyadic::half(), Dyadic::new(3, 2)];
    let cut = cuts[rng.gen_range(0..cuts.len())];
    PiecewiseCoeff::from_pieces(vec![
        (cut, random_exppoly(rng, cfg)),
        (Dyadic::one(), random_exppoly(rng, cfg)),
    ])
    .expect("layout is valid by construction")
}

/// A random sequence with support contained in 1..=max_index.
pub fn random_coeffseq(rng: &mut ChaCha8Rng, cfg: &GenConfig) -> CoeffSeq {
    let mut entries = BTreeMap::new();
    for i in 1..=cfg.max_index {
        if rng.gen_bool(0.75) {
            entries.insert(i, random_piecewise(rng, cfg));
        }
    }
    CoeffSeq::new(entries).expect("quarter-lattice pieces always validate")
}

/// A random sequence with every coefficient of zero mean: combinations
/// of nonzero harmonics and the centered ramp x - pi.
pub fn random_zero_mean_coeffseq(rng: &mut ChaCha8Rng, cfg: &GenConfig) -> CoeffSeq {
    let mut entries = BTreeMap::new();
    for i in 1..=cfg.max_index {
        if !rng.gen_bool(0.75) {
            continue;
        }
        let mut terms = Vec::new();
        for _ in 0..rng.gen_range(1..=cfg.max_terms) {
            let m = loop {
                let m = rng.gen_range(-cfg.max_freq..=cfg.max_freq);
                if m != 0 {
                    break m;
                }
            };
            terms.push(Term::new(Scalar::from_gauss(random_gauss(rng)), 0, m));
        }
        if rng.gen_bool(0.3) {
            // (x - pi) has zero mean over [0, 2 pi]
            let c = Scalar::from_gauss(random_gauss(rng));
            terms.push(Term::new(c.clone(), 1, 0));
            terms.push(Term::new(-&(&c * &Scalar::pi_pow(1)), 0, 0));
        }
        entries.insert(i, PiecewiseCoeff::from_poly(ExpPoly::from_terms(terms)));
    }
    CoeffSeq::new(entries).expect("single-piece harmonics always validate")
}

/// Every moment specification with total degree (sum of exponents plus
/// one) at most the bound and base indices in 1..=max_index.
pub fn all_moment_specs(max_total_degree: u32, max_index: u32) -> Vec<MomentSpec> {
    fn exp_lists(budget: u32) -> Vec<Vec<u32>> {
        let mut out = vec![Vec::new()];
        for first in 1..=budget {
            for mut rest in exp_lists(budget - first) {
                rest.insert(0, first);
                out.push(rest);
            }
        }
        out
    }
    fn base_lists(len: usize, max_index: u32) -> Vec<Vec<u32>> {
        if len == 0 {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        for first in 1..=max_index {
            for mut rest in base_lists(len - 1, max_index) {
                rest.insert(0, first);
                out.push(rest);
            }
        }
        out
    }
    let mut specs = Vec::new();
    for exps in exp_lists(max_total_degree.saturating_sub(1)) {
        for bases in base_lists(exps.len() + 1, max_index) {
            specs.push(MomentSpec::new(bases, exps.clone()).expect("lengths match"));
        }
    }
    specs
}

fn run_named(
    name: &str,
    max_order: u32,
    trials: u32,
    seed: u64,
) -> Result<SuiteReport, UnknownSuite> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let checks = match name {
        "shuffle" => suite_shuffle(&mut rng, max_order, trials),
        "moments" => suite_moments(&mut rng, trials),
        "pipeline" => suite_pipeline(&mut rng, max_order, trials),
        "group" => suite_group(&mut rng, max_order, trials),
        "numeric" => suite_numeric(&mut rng, max_order, trials),
        "quadrature" => suite_quadrature(&mut rng, trials),
        other => return Err(UnknownSuite(other.to_owned())),
    };
    Ok(SuiteReport {
        suite: name.to_owned(),
        seed,
        max_order,
        checks,
    })
}

/// Runs a suite (or "all") with the given bounds and seed.
pub fn run_suites(
    name: &str,
    max_order: u32,
    trials: u32,
    seed: u64,
) -> Result<Vec<SuiteReport>, UnknownSuite> {
    if name == "all" {
        return SUITE_NAMES
            .iter()
            .filter(|&&s| s != "all")
            .map(|s| run_named(s, max_order, trials, seed))
            .collect();
    }
    Ok(vec![run_named(name, max_order, trials, seed)?])
}

/// Products of basic integrals expand over shuffles, exactly.
fn suite_shuffle(rng: &mut ChaCha8Rng, max_order: u32, trials: u32) -> Vec<CheckResult> {
    let cfg = GenConfig::default();
    let mut check = CheckResult::new("I_u * I_v = sum over shuffles of I_w");
    let mut words = vec![Word::empty()];
    words.extend(words_up_to(max_order.saturating_sub(1)));
    for _ in 0..trials {
        let a = random_coeffseq(rng, &cfg);
        let mut ev = IntegralEvaluator::new(&a);
        for u in &words {
            for v in &words {
                if u.order() + v.order() > max_order {
                    continue;
                }
                let lhs = &ev.iterated(u) * &ev.iterated(v);
                let mut rhs = Scalar::zero();
                for w in shuffle(u, v) {
                    rhs = &rhs + &ev.iterated(&w);
                }
                check.record(lhs == rhs, || {
                    format!("u={u}, v={v}: {} != {}", lhs.render(), rhs.render())
                });
            }
        }
    }
    vec![check]
}

/// Moment identities: shuffle expansion and additivity on zero-mean
/// data.
fn suite_moments(rng: &mut ChaCha8Rng, trials: u32) -> Vec<CheckResult> {
    let cfg = GenConfig::default();
    let mut expansion = CheckResult::new("moment = sum of expanded basic integrals");
    let mut additivity = CheckResult::new("m(a*b) = m(a) + m(b) on zero-mean data");
    let expansion_specs = all_moment_specs(5, cfg.max_index);
    let additivity_specs = all_moment_specs(4, cfg.max_index);
    for _ in 0..trials {
        let a = random_coeffseq(rng, &cfg);
        let mut ev = IntegralEvaluator::new(&a);
        for spec in &expansion_specs {
            let direct = ev.moment(spec);
            let expanded = moment_via_words(spec, &mut ev);
            expansion.record(direct == expanded, || {
                format!("{spec}: {} != {}", direct.render(), expanded.render())
            });
        }

        let za = random_zero_mean_coeffseq(rng, &cfg);
        let zb = random_zero_mean_coeffseq(rng, &cfg);
        if !in_xstar(&za) || !in_xstar(&zb) {
            additivity.record(false, || "generator produced non-zero-mean data".to_owned());
            continue;
        }
        let ab = match concat(&za, &zb) {
            Ok(c) => c,
            Err(e) => {
                additivity.record(false, || format!("concat failed: {e}"));
                continue;
            }
        };
        let mut ev_a = IntegralEvaluator::new(&za);
        let mut ev_b = IntegralEvaluator::new(&zb);
        let mut ev_ab = IntegralEvaluator::new(&ab);
        for spec in &additivity_specs {
            let lhs = ev_ab.moment(spec);
            let rhs = &ev_a.moment(spec) + &ev_b.moment(spec);
            additivity.record(lhs == rhs, || {
                format!("{spec}: {} != {}", lhs.render(), rhs.render())
            });
        }
    }
    vec![expansion, additivity]
}

/// The two exact return-map routes agree coefficient-by-coefficient.
fn suite_pipeline(rng: &mut ChaCha8Rng, max_order: u32, trials: u32) -> Vec<CheckResult> {
    let cfg = GenConfig::default();
    let mut check = CheckResult::new("iterated-integral route = transport route");
    for _ in 0..trials {
        let a = random_coeffseq(rng, &cfg);
        let s = return_coeffs_iterated(&a, max_order);
        let t = return_coeffs_transport(&a, max_order);
        check.record(s == t, || {
            let n = (1..=max_order)
                .find(|&n| s.coeff(n) != t.coeff(n))
                .expect("some coefficient differs");
            format!(
                "c_{n}: {} != {}",
                s.coeff(n).render(),
                t.coeff(n).render()
            )
        });
    }
    vec![check]
}

/// Group laws: composition, inverse, reversal antipode, splitting of
/// integrals over a concatenation, and self-equivalence.
fn suite_group(rng: &mut ChaCha8Rng, max_order: u32, trials: u32) -> Vec<CheckResult> {
    let cfg = GenConfig::default();
    let mut composition = CheckResult::new("series of a*b = series(b) o series(a)");
    let mut inverse_law = CheckResult::new("series of a*a^{-1} = identity");
    let mut antipode = CheckResult::new("I_w(a^{-1}) = (-1)^k I_reverse(w)(a)");
    let mut chen = CheckResult::new("I_w(a*b) = sum over splittings I_u(a) I_v(b)");
    let mut self_equiv = CheckResult::new("a ~ a up to order");
    for _ in 0..trials {
        let a = random_coeffseq(rng, &cfg);
        let b = random_coeffseq(rng, &cfg);
        match concat(&a, &b) {
            Err(e) => composition.record(false, || format!("concat failed: {e}")),
            Ok(ab) => {
                let lhs = return_coeffs_iterated(&ab, max_order);
                let pa = return_coeffs_iterated(&a, max_order);
                let pb = return_coeffs_iterated(&b, max_order);
                let rhs = pb.compose(&pa).expect("orders match");
                composition.record(lhs == rhs, || {
                    format!("{:?} != {:?}", lhs.coeffs(), rhs.coeffs())
                });

                let mut ev_ab = IntegralEvaluator::new(&ab);
                let mut ev_a = IntegralEvaluator::new(&a);
                let mut ev_b = IntegralEvaluator::new(&b);
                for w in words_up_to(max_order.min(5)) {
                    let lhs = ev_ab.iterated(&w);
                    let mut rhs = Scalar::zero();
                    for (u, v) in w.splittings() {
                        rhs = &rhs + &(&ev_a.iterated(&u) * &ev_b.iterated(&v));
                    }
                    chen.record(lhs == rhs, || {
                        format!("{w}: {} != {}", lhs.render(), rhs.render())
                    });
                }
            }
        }

        let inv = inverse(&a);
        match concat(&a, &inv) {
            Err(e) => inverse_law.record(false, || format!("concat failed: {e}")),
            Ok(trivial) => {
                let series = return_coeffs_iterated(&trivial, max_order);
                inverse_law.record(series.is_identity(), || {
                    format!("{:?}", series.coeffs())
                });
            }
        }

        let mut ev_a = IntegralEvaluator::new(&a);
        let mut ev_inv = IntegralEvaluator::new(&inv);
        for w in words_up_to(max_order.min(4)) {
            let lhs = ev_inv.iterated(&w);
            let mut rhs = ev_a.iterated(&w.reversed());
            if w.len() % 2 == 1 {
                rhs = -&rhs;
            }
            antipode.record(lhs == rhs, || {
                format!("{w}: {} != {}", lhs.render(), rhs.render())
            });
        }

        match equivalent_up_to(&a, &a, max_order.min(5)) {
            Err(e) => self_equiv.record(false, || format!("equivalence failed: {e}")),
            Ok(v) => self_equiv.record(v.equivalent_up_to, || {
                let (w, value) = v.witness.expect("witness present on failure");
                format!("witness {w} = {}", value.render())
            }),
        }
    }
    vec![composition, inverse_law, antipode, chen, self_equiv]
}

/// The exact series evaluated at small r agrees with direct numeric
/// integration of the ODE.
fn suite_numeric(rng: &mut ChaCha8Rng, max_order: u32, trials: u32) -> Vec<CheckResult> {
    let cfg = GenConfig::default();
    let mut check = CheckResult::new("exact series evaluation tracks the numeric return map");
    for _ in 0..trials {
        let a = random_coeffseq(rng, &cfg);
        let series = return_coeffs_iterated(&a, max_order.max(8));
        let r = picard_radius(&a) / 4.0;
        let r = Complex64::new(r, 0.0);
        match return_map_numeric(&a, r) {
            Err(e) => check.record(false, || format!("integration failed: {e}")),
            Ok(numeric) => {
                let exact = series.eval(r);
                check.record((exact - numeric).norm() <= 1e-8, || {
                    format!("series {exact} vs ode {numeric} at r = {r}")
                });
            }
        }
    }
    vec![check]
}

/// The exact cumulative antiderivative matches adaptive numeric
/// quadrature of the original coefficient.
fn suite_quadrature(rng: &mut ChaCha8Rng, trials: u32) -> Vec<CheckResult> {
    let cfg = GenConfig::default();
    let mut check = CheckResult::new("exact antiderivative tracks adaptive quadrature");
    for _ in 0..trials {
        let a = random_piecewise(rng, &cfg);
        let tilde = match a.tilde() {
            Ok(t) => t,
            Err(e) => {
                check.record(false, || format!("tilde failed: {e}"));
                continue;
            }
        };
        let x = rng.gen_range(0.05..1.0) * crate::coeffseq::PERIOD;
        let exact = tilde.eval(x);
        let quad = adaptive_quadrature(&|s| a.eval(s), 0.0, x, 1e-13);
        let scale = exact.norm().max(1.0);
        check.record((exact - quad).norm() <= 1e-10 * scale, || {
            format!("at x = {x}: exact {exact} vs quadrature {quad}")
        });
    }
    vec![check]
}

/// A random exact series with unit leading term, for series-law tests.
pub fn random_series(rng: &mut ChaCha8Rng, order: u32) -> ReturnSeries {
    let coeffs = (0..order)
        .map(|_| Scalar::from_gauss(random_gauss(rng)))
        .collect();
    ReturnSeries::from_coeffs(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_suites_pass_on_a_fixed_seed() {
        for report in run_suites("all", 4, 2, 7).unwrap() {
            for check in &report.checks {
                assert!(
                    check.passed(),
                    "{} / {}: {:?}",
                    report.suite,
                    check.name,
                    check.first_failure
                );
                assert!(check.trials > 0, "{} ran no trials", check.name);
            }
        }
    }

    #[test]
    fn unknown_suite_is_reported() {
        assert!(run_suites("nonsense", 4, 1, 0).is_err());
    }

    #[test]
    fn generators_are_deterministic_per_seed() {
        let cfg = GenConfig::default();
        let mut r1 = ChaCha8Rng::seed_from_u64(42);
        let mut r2 = ChaCha8Rng::seed_from_u64(42);
        assert_eq!(random_coeffseq(&mut r1, &cfg), random_coeffseq(&mut r2, &cfg));
    }

    #[test]
    fn zero_mean_generator_lands_in_xstar() {
        let cfg = GenConfig::default();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            assert!(in_xstar(&random_zero_mean_coeffseq(&mut rng, &cfg)));
        }
    }
}
