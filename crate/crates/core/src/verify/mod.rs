//! Numerical verification of the coefficient theorems for
//! k-JUST(q; α, β, γ): each verifier checks one bound over a family of
//! members and returns a [`VerificationReport`].
//!
//! Slacks are `(bound - observed) / max(1, bound)`, so one tolerance serves
//! bounds of very different size; a trial is a violation when its slack is
//! below minus the tolerance of the check.

pub mod bounds;
pub mod covering;
mod theorems;

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classes::{
    compose_subordinate, generate_member, ClassParams, SchwarzSpec, SubordinateFunction,
};
use crate::conic::{extremal_coeffs, ConicCoefficients, DEFAULT_RADIUS, DEFAULT_SAMPLES};
use crate::error::Result;
use crate::series::TruncatedSeries;

pub use bounds::{sufficient_condition_lhs, CoefficientBounds, FeketeSzegoSpec};
pub use theorems::{
    random_sufficient_polynomial, verify_auxiliary_inequality, verify_caratheodory_lemmas,
    verify_covering_radius, verify_fekete_szego_complex, verify_fekete_szego_real,
    verify_low_coefficients, verify_product_bound, verify_rogosinski, verify_sufficient_condition,
};

/// Input that produced the worst slack of a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub trial: usize,
    pub description: String,
    pub coefficients: Vec<Complex64>,
    pub eta: Option<Complex64>,
}

/// Outcome of one verifier on one parameter set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub theorem: String,
    pub params: String,
    pub trials: usize,
    pub violations: usize,
    pub worst_slack: f64,
    pub witness: Option<Witness>,
    /// Auxiliary diagnostics, keyed by name.
    pub details: BTreeMap<String, f64>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// Sequential accumulator; trials are fed in a fixed order so the report is
/// independent of how the trials were computed.
pub(crate) struct ReportBuilder {
    report: VerificationReport,
}

impl ReportBuilder {
    pub(crate) fn new(theorem: &str, params: &str) -> Self {
        Self {
            report: VerificationReport {
                theorem: theorem.to_string(),
                params: params.to_string(),
                trials: 0,
                violations: 0,
                worst_slack: f64::INFINITY,
                witness: None,
                details: BTreeMap::new(),
            },
        }
    }

    /// Records one check with slack `slack`, failing below `-tolerance`.
    pub(crate) fn record<W: FnOnce() -> Witness>(
        &mut self,
        slack: f64,
        tolerance: f64,
        witness: W,
    ) {
        let r = &mut self.report;
        r.trials += 1;
        if !(slack >= -tolerance) {
            r.violations += 1;
        }
        if slack < r.worst_slack || r.witness.is_none() {
            r.worst_slack = slack;
            r.witness = Some(witness());
        }
    }

    pub(crate) fn finish(self) -> VerificationReport {
        self.report
    }
}

/// `(bound - observed) / max(1, bound)`.
pub fn normalized_slack(bound: f64, observed: f64) -> f64 {
    (bound - observed) / bound.abs().max(1.0)
}

/// A generated member together with the subordinate function it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct MemberSample {
    pub label: String,
    pub sub: SubordinateFunction,
    pub f: TruncatedSeries,
}

/// The member generated by `p_{k,γ}(λ z^m)`.
pub fn extremal_member(
    params: &ClassParams,
    extremal: &ConicCoefficients,
    m: usize,
    degree: usize,
) -> Result<MemberSample> {
    let recipe = SchwarzSpec::Power {
        lambda: Complex64::new(1.0, 0.0),
        m,
    };
    let sub = compose_subordinate(recipe, extremal, degree)?;
    let f = generate_member(&sub, params, degree)?;
    Ok(MemberSample {
        label: format!("extremal w = z^{m}"),
        sub,
        f,
    })
}

/// `count` members: those of `w = z` and `w = z²` first, then random
/// Schwarz recipes drawn from `rng`.
pub fn sample_members<R: Rng + ?Sized>(
    params: &ClassParams,
    extremal: &ConicCoefficients,
    count: usize,
    degree: usize,
    rng: &mut R,
) -> Result<Vec<MemberSample>> {
    let recipes: Vec<SchwarzSpec> = (0..count.saturating_sub(2))
        .map(|_| SchwarzSpec::random(rng))
        .collect();
    let mut out = Vec::with_capacity(count);
    for m in [1, 2].into_iter().take(count) {
        out.push(extremal_member(params, extremal, m, degree)?);
    }
    let random: Vec<MemberSample> = recipes
        .into_par_iter()
        .enumerate()
        .map(|(i, recipe)| {
            let sub = compose_subordinate(recipe, extremal, degree)?;
            let f = generate_member(&sub, params, degree)?;
            Ok(MemberSample {
                label: format!("random recipe {i}"),
                sub,
                f,
            })
        })
        .collect::<Result<_>>()?;
    out.extend(random);
    Ok(out)
}

/// One point of the parameter matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParameterSet {
    pub q: f64,
    pub alpha: f64,
    pub beta: f64,
    pub k: f64,
    pub gamma: f64,
}

impl ParameterSet {
    pub fn class_params(&self) -> Result<ClassParams> {
        ClassParams::new(self.q, self.alpha, self.beta, self.k, self.gamma)
    }

    pub fn label(&self) -> String {
        format!(
            "q={} alpha={} beta={} k={} gamma={}",
            self.q, self.alpha, self.beta, self.k, self.gamma
        )
    }
}

/// `k ∈ {0, 0.5, 1, 2}`, `γ ∈ {0, 0.3, 0.6}`, `q ∈ {0.5, 0.9}`,
/// `(α, β) ∈ {(1, 0), (1, 1), (2, 0.5)}`.
pub fn default_matrix() -> Vec<ParameterSet> {
    let mut out = Vec::new();
    for k in [0.0, 0.5, 1.0, 2.0] {
        for gamma in [0.0, 0.3, 0.6] {
            for q in [0.5, 0.9] {
                for (alpha, beta) in [(1.0, 0.0), (1.0, 1.0), (2.0, 0.5)] {
                    out.push(ParameterSet {
                        q,
                        alpha,
                        beta,
                        k,
                        gamma,
                    });
                }
            }
        }
    }
    out
}

/// Sizes of the default suite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub seed: u64,
    pub matrix: Vec<ParameterSet>,
    /// Random coefficient vectors for the sufficient condition.
    pub sufficient_trials: usize,
    /// Generated members per parameter set, extremal ones included.
    pub members: usize,
    /// `η` values per Fekete-Szegő verifier.
    pub etas: usize,
    /// Largest index of the product bound.
    pub product_n_max: usize,
    /// Working degree of generated members and subordinates.
    pub degree: usize,
    /// Polynomial members for the covering check, besides the sharp ones.
    pub covering_members: usize,
    pub caratheodory_trials: usize,
}

impl SuiteConfig {
    pub fn default_suite(seed: u64) -> Self {
        Self {
            seed,
            matrix: default_matrix(),
            sufficient_trials: 200,
            members: 50,
            etas: 20,
            product_n_max: 12,
            degree: 32,
            covering_members: 50,
            caratheodory_trials: 200,
        }
    }
}

/// Seed of parameter set `index` derived from the suite seed.
pub fn derived_seed(seed: u64, index: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add((index as u64 + 1).wrapping_mul(0xBF58_476D_1CE4_E5B9))
}

/// All reports of one parameter set, in a fixed order.
pub fn verify_parameter_set(
    set: &ParameterSet,
    config: &SuiteConfig,
    seed: u64,
) -> Result<Vec<VerificationReport>> {
    let params = set.class_params()?;
    let label = set.label();
    let extremal = extremal_coeffs(
        &params.conic,
        config.degree.max(3),
        DEFAULT_RADIUS,
        DEFAULT_SAMPLES,
    )?;
    let bounds =
        CoefficientBounds::new(&params, &extremal, config.degree.max(config.product_n_max))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let members = sample_members(&params, &extremal, config.members, config.degree, &mut rng)?;

    let complex_etas: Vec<Complex64> = (0..config.etas)
        .map(|_| {
            let r = 3.0 * rng.gen::<f64>().sqrt();
            Complex64::from_polar(r, rng.gen_range(0.0..2.0 * std::f64::consts::PI))
        })
        .collect();
    let real_etas = theorems::real_etas(&bounds, config.etas, &mut rng);

    let sufficient =
        verify_sufficient_condition(&params, config.sufficient_trials, rng.gen(), &label)?;
    let mut covering_members: Vec<(String, TruncatedSeries)> = (2..=6)
        .map(|n| {
            Ok((
                format!("sharp f_{n}"),
                crate::classes::sharp_function(n, &params)?,
            ))
        })
        .collect::<Result<_>>()?;
    for i in 0..config.covering_members {
        covering_members.push((
            format!("random sufficient-condition polynomial {i}"),
            random_sufficient_polynomial(&params, &mut rng)?,
        ));
    }

    Ok(vec![
        sufficient,
        verify_fekete_szego_complex(&bounds, &complex_etas, &members, &label),
        verify_fekete_szego_real(&bounds, &real_etas, &members, &label),
        verify_low_coefficients(&bounds, &members, &label),
        verify_product_bound(&bounds, &members, config.product_n_max, &label),
        verify_covering_radius(&bounds, &covering_members, &label)?,
        verify_rogosinski(&extremal, &members, &label),
        verify_auxiliary_inequality(&extremal, &members, &label),
    ])
}

/// Runs every verifier over the parameter matrix, followed by the
/// Carathéodory lemmas. Deterministic in `config`.
pub fn run_suite(config: &SuiteConfig) -> Result<Vec<VerificationReport>> {
    let per_set: Vec<Vec<VerificationReport>> = config
        .matrix
        .par_iter()
        .enumerate()
        .map(|(i, set)| verify_parameter_set(set, config, derived_seed(config.seed, i)))
        .collect::<Result<_>>()?;
    let mut reports: Vec<VerificationReport> = per_set.into_iter().flatten().collect();
    reports.extend(verify_caratheodory_lemmas(
        config.caratheodory_trials,
        derived_seed(config.seed, config.matrix.len()),
    ));
    Ok(reports)
}
