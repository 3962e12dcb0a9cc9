//! Schwarz functions, subordinates of the extremal function, and the class
//! members they induce.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::ClassParams;
use crate::conic::{
    extremal_coeffs, ConicCoefficients, ConicParams, DEFAULT_RADIUS, DEFAULT_SAMPLES,
};
use crate::error::{Error, Result};
use crate::qoperator::weights;
use crate::series::TruncatedSeries;
use crate::tolerances;

/// Circle on which a recipe is sampled to confirm `|w| < 1`.
const SCHWARZ_CHECK_RADIUS: f64 = 0.999;
const SCHWARZ_CHECK_POINTS: usize = 512;

/// A Schwarz function `w` (analytic self-map of the disc with `w(0) = 0`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SchwarzSpec {
    /// `w(z) = λ z`.
    Rotation { lambda: Complex64 },
    /// `w(z) = λ z^m`.
    Power { lambda: Complex64, m: usize },
    /// `w(z) = z (z + λ) / (1 + λ z)` with `0 <= λ <= 1`.
    Mobius { lambda: f64 },
    /// `w(z) = λ z Π (z - a_i) / (1 - conj(a_i) z)` with `|a_i| < 1`.
    Blaschke {
        lambda: Complex64,
        zeros: Vec<Complex64>,
    },
    /// `w(z) = Σ b_j z^j`, validated by sampling.
    Polynomial { coeffs: Vec<Complex64> },
}

impl SchwarzSpec {
    /// Closed-form value `w(z)`.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let one = Complex64::new(1.0, 0.0);
        match self {
            Self::Rotation { lambda } => lambda * z,
            Self::Power { lambda, m } => lambda * z.powu(*m as u32),
            Self::Mobius { lambda } => z * (z + lambda) / (one + z * lambda),
            Self::Blaschke { lambda, zeros } => zeros
                .iter()
                .fold(lambda * z, |acc, a| acc * (z - a) / (one - a.conj() * z)),
            Self::Polynomial { coeffs } => coeffs
                .iter()
                .rev()
                .fold(Complex64::new(0.0, 0.0), |acc, b| acc * z + b),
        }
    }

    /// Taylor coefficients of `w` through `z^degree`.
    pub fn series(&self, degree: usize) -> TruncatedSeries {
        let zero = Complex64::new(0.0, 0.0);
        match self {
            Self::Rotation { lambda } => TruncatedSeries::monomial(1, *lambda, degree),
            Self::Power { lambda, m } => TruncatedSeries::monomial(*m, *lambda, degree),
            Self::Mobius { lambda } => {
                // z (z + λ) Σ (-λ z)^j
                let mut coeffs = vec![zero; degree + 1];
                let mut geometric = 1.0;
                for j in 0..degree {
                    if j < degree {
                        coeffs[j + 1] += Complex64::new(lambda * geometric, 0.0);
                    }
                    if j + 2 <= degree {
                        coeffs[j + 2] += Complex64::new(geometric, 0.0);
                    }
                    geometric *= -lambda;
                }
                TruncatedSeries::new(coeffs)
            }
            Self::Blaschke { lambda, zeros } => {
                let mut acc = TruncatedSeries::monomial(1, *lambda, degree);
                for a in zeros {
                    // (z - a) Σ (conj(a) z)^j
                    let mut factor = vec![zero; degree + 1];
                    let mut power = Complex64::new(1.0, 0.0);
                    for j in 0..=degree {
                        factor[j] -= a * power;
                        if j < degree {
                            factor[j + 1] += power;
                        }
                        power *= a.conj();
                    }
                    acc = acc.multiply(&TruncatedSeries::new(factor));
                }
                acc
            }
            Self::Polynomial { coeffs } => {
                let mut c: Vec<Complex64> = coeffs.iter().take(degree + 1).copied().collect();
                c.resize(degree + 1, zero);
                TruncatedSeries::new(c)
            }
        }
    }

    /// Checks the parameters, `w(0) = 0` and `|w| < 1` on `|z| = 0.999`.
    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Rotation { lambda } | Self::Power { lambda, .. }
                if lambda.norm() > 1.0 + 1e-12 =>
            {
                return Err(Error::InvalidSchwarz(format!(
                    "|λ| = {} exceeds 1",
                    lambda.norm()
                )));
            }
            Self::Power { m: 0, .. } => {
                return Err(Error::InvalidSchwarz(
                    "power z^0 does not fix the origin".into(),
                ));
            }
            Self::Mobius { lambda } if !(0.0..=1.0).contains(lambda) => {
                return Err(Error::InvalidSchwarz(format!(
                    "Möbius parameter {lambda} outside [0, 1]"
                )));
            }
            Self::Blaschke { lambda, zeros } => {
                if lambda.norm() > 1.0 + 1e-12 {
                    return Err(Error::InvalidSchwarz(format!(
                        "|λ| = {} exceeds 1",
                        lambda.norm()
                    )));
                }
                if let Some(a) = zeros.iter().find(|a| a.norm() >= 1.0) {
                    return Err(Error::InvalidSchwarz(format!(
                        "Blaschke zero {a} outside the disc"
                    )));
                }
            }
            _ => {}
        }
        let at_zero = self.eval(Complex64::new(0.0, 0.0));
        if at_zero.norm() > 0.0 {
            return Err(Error::InvalidSchwarz(format!("w(0) = {at_zero}")));
        }
        for j in 0..SCHWARZ_CHECK_POINTS {
            let z = Complex64::from_polar(
                SCHWARZ_CHECK_RADIUS,
                2.0 * PI * j as f64 / SCHWARZ_CHECK_POINTS as f64,
            );
            let w = self.eval(z);
            if !(w.norm() < 1.0) {
                return Err(Error::InvalidSchwarz(format!(
                    "|w({z})| = {} >= 1",
                    w.norm()
                )));
            }
        }
        Ok(())
    }

    /// A random recipe of a random kind.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let unit = |rng: &mut R| Complex64::from_polar(1.0, rng.gen_range(0.0..2.0 * PI));
        let in_disc = |rng: &mut R, r: f64| {
            Complex64::from_polar(r * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..2.0 * PI))
        };
        match rng.gen_range(0..5) {
            0 => Self::Rotation { lambda: unit(rng) },
            1 => Self::Power {
                lambda: unit(rng),
                m: rng.gen_range(1..=4),
            },
            2 => Self::Mobius {
                lambda: rng.gen_range(0.0..=1.0),
            },
            3 => {
                let count = rng.gen_range(1..=3);
                Self::Blaschke {
                    lambda: unit(rng),
                    zeros: (0..count).map(|_| in_disc(rng, 0.9)).collect(),
                }
            }
            _ => {
                let count = rng.gen_range(1..=5);
                let mut coeffs = vec![Complex64::new(0.0, 0.0)];
                coeffs.extend((0..count).map(|_| in_disc(rng, 1.0)));
                let total: f64 = coeffs.iter().map(|c| c.norm()).sum();
                let target = rng.gen_range(0.05..=1.0);
                for c in &mut coeffs {
                    *c *= target / total;
                }
                Self::Polynomial { coeffs }
            }
        }
    }
}

/// `p = p_{k,γ} ∘ w = 1 + Σ c_n zⁿ` for a Schwarz function `w`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubordinateFunction {
    c: Vec<Complex64>,
    pub recipe: SchwarzSpec,
}

impl SubordinateFunction {
    /// `c_n` for `n >= 1`; zero beyond the stored degree.
    pub fn c(&self, n: usize) -> Complex64 {
        self.c.get(n - 1).copied().unwrap_or_default()
    }

    pub fn degree(&self) -> usize {
        self.c.len()
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.c
    }

    /// `1 + c_1 z + ... + c_N z^N`.
    pub fn as_series(&self) -> TruncatedSeries {
        let mut coeffs = Vec::with_capacity(self.c.len() + 1);
        coeffs.push(Complex64::new(1.0, 0.0));
        coeffs.extend_from_slice(&self.c);
        TruncatedSeries::new(coeffs)
    }
}

/// Composes the extremal function of `conic` with `recipe` through `z^degree`.
pub fn make_subordinate(
    recipe: SchwarzSpec,
    conic: &ConicParams,
    degree: usize,
) -> Result<SubordinateFunction> {
    let p = extremal_coeffs(conic, degree, DEFAULT_RADIUS, DEFAULT_SAMPLES)?;
    make_subordinate_with(recipe, &p, degree)
}

/// As [`make_subordinate`] with precomputed extremal coefficients.
///
/// Every `c_n` is checked against the Rogosinski bound `|c_n| <= P_1`.
pub fn make_subordinate_with(
    recipe: SchwarzSpec,
    extremal: &ConicCoefficients,
    degree: usize,
) -> Result<SubordinateFunction> {
    let sub = compose_subordinate(recipe, extremal, degree)?;
    let bound = extremal.p(1);
    for (i, cn) in sub.c.iter().enumerate() {
        if cn.norm() > bound + tolerances::ROGOSINSKI {
            return Err(Error::Rogosinski {
                n: i + 1,
                modulus: cn.norm(),
                bound,
            });
        }
    }
    Ok(sub)
}

/// The composition `p_{k,γ} ∘ w` without the Rogosinski check.
pub fn compose_subordinate(
    recipe: SchwarzSpec,
    extremal: &ConicCoefficients,
    degree: usize,
) -> Result<SubordinateFunction> {
    if degree > extremal.degree() {
        return Err(Error::Domain {
            name: "degree",
            value: degree as f64,
            reason: "exceeds the number of extracted extremal coefficients",
        });
    }
    recipe.validate()?;
    let p = extremal.as_series().truncate(degree);
    let composed = TruncatedSeries::compose(&p, &recipe.series(degree))?;
    Ok(SubordinateFunction {
        c: composed.coeffs()[1..].to_vec(),
        recipe,
    })
}

/// The member `f = z + Σ a_n zⁿ` with `z D_q(χf) / χf = p`, from
/// `([n]_q - 1) ψ_n a_n = Σ_{j=1}^{n-1} ψ_j a_j c_{n-j}`.
pub fn generate_member(
    sub: &SubordinateFunction,
    params: &ClassParams,
    degree: usize,
) -> Result<TruncatedSeries> {
    let degree = degree.max(1);
    let psi = weights(&params.op, degree)?;
    let ctx = params.ctx();
    // b_n = ψ_n a_n are the coefficients of χf
    let mut b = vec![Complex64::new(0.0, 0.0); degree + 1];
    b[1] = Complex64::new(1.0, 0.0);
    for n in 2..=degree {
        let sum: Complex64 = (1..n).map(|j| b[j] * sub.c(n - j)).sum();
        b[n] = sum / (ctx.bracket_int(n) - 1.0);
    }
    let a = b
        .iter()
        .enumerate()
        .map(|(n, &bn)| if n == 0 { bn } else { bn / psi.psi(n) })
        .collect();
    Ok(TruncatedSeries::new(a))
}

/// `(1 - γ) / (([n]_q (k+1) - (k+γ)) ψ_n)`, the modulus of the only
/// nonzero higher coefficient of the sharp function `f_n`.
pub fn sharp_coefficient(n: usize, params: &ClassParams) -> Result<f64> {
    if n < 2 {
        return Err(Error::Domain {
            name: "n",
            value: n as f64,
            reason: "sharp functions need n >= 2",
        });
    }
    let (k, g) = (params.k(), params.gamma());
    let psi = crate::qoperator::weight(&params.op, n)?;
    Ok((1.0 - g) / ((params.ctx().bracket_int(n) * (k + 1.0) - (k + g)) * psi))
}

/// `f_n(z) = z - sharp_coefficient(n) zⁿ`.
pub fn sharp_function(n: usize, params: &ClassParams) -> Result<TruncatedSeries> {
    let a = sharp_coefficient(n, params)?;
    let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
    coeffs[1] = Complex64::new(1.0, 0.0);
    coeffs[n] = Complex64::new(-a, 0.0);
    Ok(TruncatedSeries::new(coeffs))
}
