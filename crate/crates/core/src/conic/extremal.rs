use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::elliptic::incomplete_first_kind;
use super::{ConicBranch, ConicParams};
use crate::error::{Error, Result};
use crate::series::TruncatedSeries;
use crate::tolerances;

/// Samples on the extraction circle.
pub const DEFAULT_SAMPLES: usize = 4096;

/// Radius of the extraction circle.
pub const DEFAULT_RADIUS: f64 = 0.75;

/// Rounding amplification allowance in the noise model of the extraction.
const NOISE_FACTOR: f64 = 64.0;

/// Evaluates the extremal function `p(k, γ)` at `|z| < 1`.
///
/// `p(0) = 1` in every branch; the result is `1 + (...)` with the bracket
/// written so that it vanishes at the origin without cancellation.
pub fn extremal_eval(z: Complex64, params: &ConicParams) -> Result<Complex64> {
    if !(z.norm() < 1.0) {
        return Err(Error::Domain {
            name: "|z|",
            value: z.norm(),
            reason: "the extremal function is evaluated inside the unit disc",
        });
    }
    Ok(match params.branch() {
        ConicBranch::HalfPlane | ConicBranch::Hyperbolic | ConicBranch::Parabolic => {
            extremal_eval_from_root(z.sqrt(), params)
        }
        ConicBranch::Elliptic => elliptic_branch(z, params),
    })
}

/// Evaluates the branches that depend on `z` through `√z`, given a square
/// root `s` of `z`. Both roots give the same value.
pub fn extremal_eval_from_root(s: Complex64, params: &ConicParams) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    let (k, g) = (params.k(), params.gamma());
    match params.branch() {
        ConicBranch::HalfPlane => {
            let z = s * s;
            (one + z * (1.0 - 2.0 * g)) / (one - z)
        }
        ConicBranch::Hyperbolic => {
            // ½(u^A + u^-A) - 1 = 2 sinh²(A log(u) / 2), log u = 2 atanh(√z)
            let a = params.hyperbolic_exponent();
            let half = s.atanh() * a;
            let sh = half.sinh();
            one + sh * sh * (2.0 * (1.0 - g) / (1.0 - k * k))
        }
        ConicBranch::Parabolic => {
            let log = s.atanh() * 2.0;
            one + log * log * (2.0 * (1.0 - g) / (PI * PI))
        }
        ConicBranch::Elliptic => elliptic_branch(s * s, params),
    }
}

fn elliptic_branch(z: Complex64, params: &ConicParams) -> Complex64 {
    let e = params.elliptic().expect("elliptic data present for k > 1");
    let (k, g) = (params.k(), params.gamma());
    let root_t = e.t.sqrt();
    let one = Complex64::new(1.0, 0.0);
    let u = (z - root_t) / (one - z * root_t);
    let f = incomplete_first_kind(u / root_t, e.t);
    // sin(π F / 2K) + 1 = 2 sin²(π (F + K) / 4K)
    let sn = ((f + e.k_t) * (PI / (4.0 * e.k_t))).sin();
    one + sn * sn * (2.0 * (1.0 - g) / (k * k - 1.0))
}

/// Taylor coefficients `P_1..P_N` of the extremal function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConicCoefficients {
    p: Vec<f64>,
    /// Largest imaginary part discarded during extraction.
    pub max_imag: f64,
    pub radius: f64,
    pub samples: usize,
}

impl ConicCoefficients {
    /// `P_n` for `1 <= n <= N`.
    pub fn p(&self, n: usize) -> f64 {
        self.p[n - 1]
    }

    pub fn degree(&self) -> usize {
        self.p.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.p
    }

    /// `1 + P_1 z + ... + P_N z^N`.
    pub fn as_series(&self) -> TruncatedSeries {
        let mut coeffs = Vec::with_capacity(self.p.len() + 1);
        coeffs.push(1.0);
        coeffs.extend_from_slice(&self.p);
        TruncatedSeries::from_real(&coeffs)
    }
}

struct Extraction {
    coeffs: Vec<Complex64>,
    noise: Vec<f64>,
}

/// Discrete Cauchy sums `P_n ≈ (1 / (M rⁿ)) Σ_j p(r e^{iθ_j}) e^{-inθ_j}`.
fn extract(params: &ConicParams, degree: usize, radius: f64, samples: usize) -> Result<Extraction> {
    let values: Vec<Complex64> = (0..samples)
        .into_par_iter()
        .map(|j| {
            let theta = 2.0 * PI * j as f64 / samples as f64;
            extremal_eval(Complex64::from_polar(radius, theta), params)
        })
        .collect::<Result<_>>()?;
    let peak = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let mut coeffs = Vec::with_capacity(degree);
    let mut noise = Vec::with_capacity(degree);
    for n in 1..=degree {
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, v) in values.iter().enumerate() {
            let phase = ((j * n) % samples) as f64 * 2.0 * PI / samples as f64;
            acc += v * Complex64::from_polar(1.0, -phase);
        }
        let scale = radius.powi(n as i32);
        coeffs.push(acc / (samples as f64 * scale));
        noise.push(NOISE_FACTOR * f64::EPSILON * peak / scale);
    }
    Ok(Extraction { coeffs, noise })
}

/// Extracts `P_1..P_N` on the circle `|z| = radius` with `samples` points.
///
/// The extraction is repeated on `|z| = radius / 2`; the two must agree to
/// within their rounding-noise estimate (which grows like `r^-n`). The
/// imaginary parts must be negligible and `P_1`, `P_2` must match the
/// closed forms.
pub fn extremal_coeffs(
    params: &ConicParams,
    degree: usize,
    radius: f64,
    samples: usize,
) -> Result<ConicCoefficients> {
    if !(radius > 0.0 && radius < 1.0) {
        return Err(Error::Domain {
            name: "radius",
            value: radius,
            reason: "extraction radius must lie in (0, 1)",
        });
    }
    let degree = degree.max(2);
    let main = extract(params, degree, radius, samples)?;
    let check = extract(params, degree, radius / 2.0, samples)?;

    let mut max_imag: f64 = 0.0;
    for (n, (c, noise)) in main.coeffs.iter().zip(&main.noise).enumerate() {
        let allowed = tolerances::IMAG_PART.max(*noise);
        if c.im.abs() > allowed {
            return Err(Error::Accuracy {
                what: format!("imaginary part of P_{}", n + 1),
                discrepancy: c.im.abs(),
                tolerance: allowed,
            });
        }
        max_imag = max_imag.max(c.im.abs());
    }
    for n in 0..degree {
        let diff = (main.coeffs[n].re - check.coeffs[n].re).abs();
        let allowed = tolerances::P1_AGREEMENT * main.coeffs[n].re.abs().max(1.0)
            + main.noise[n]
            + check.noise[n];
        if diff > allowed {
            return Err(Error::Accuracy {
                what: format!("P_{} at radii {radius} and {}", n + 1, radius / 2.0),
                discrepancy: diff,
                tolerance: allowed,
            });
        }
    }

    let p: Vec<f64> = main.coeffs.iter().map(|c| c.re).collect();
    let checks = [
        (
            "P_1 against closed form",
            p[0],
            params.p1_closed(),
            tolerances::P1_AGREEMENT,
        ),
        (
            "P_2 against closed form",
            p[1],
            params.p2_closed(),
            tolerances::P2_AGREEMENT,
        ),
    ];
    for (what, got, want, tol) in checks {
        if (got - want).abs() > tol {
            return Err(Error::Accuracy {
                what: what.to_string(),
                discrepancy: (got - want).abs(),
                tolerance: tol,
            });
        }
    }
    Ok(ConicCoefficients {
        p,
        max_imag,
        radius,
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn params(k: f64, g: f64) -> ConicParams {
        ConicParams::new(k, g).unwrap()
    }

    #[test]
    fn normalized_at_origin() {
        for k in [0.0, 0.5, 1.0, 1.5, 3.0] {
            for g in [0.0, 0.6] {
                let v = extremal_eval(Complex64::new(0.0, 0.0), &params(k, g)).unwrap();
                assert!((v - 1.0).norm() < 1e-15, "k = {k}: {v}");
            }
        }
    }

    #[test]
    fn mobius_value() {
        let v = extremal_eval(Complex64::new(0.5, 0.0), &params(0.0, 0.25)).unwrap();
        assert!((v - 2.5).norm() < 1e-15);
    }

    #[test]
    fn rejects_points_outside_disc() {
        assert!(extremal_eval(Complex64::new(1.0, 0.0), &params(0.5, 0.0)).is_err());
    }

    #[test]
    fn range_lies_in_domain() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for k in [0.0, 0.3, 0.7, 1.0, 1.5, 3.0] {
            for g in [0.0, 0.5] {
                let p = params(k, g);
                for _ in 0..500 {
                    let r = 0.95 * rng.gen::<f64>().sqrt();
                    let z = Complex64::from_polar(r, rng.gen_range(0.0..2.0 * PI));
                    let w = extremal_eval(z, &p).unwrap();
                    assert!(p.margin(w) > -1e-9, "k = {k}, z = {z}, w = {w}");
                }
            }
        }
    }

    #[test]
    fn boundary_of_disc_maps_near_boundary_of_domain() {
        for k in [0.5, 1.0, 2.0] {
            let p = params(k, 0.2);
            let z = Complex64::from_polar(0.999999, 2.0);
            let w = extremal_eval(z, &p).unwrap();
            assert!(p.margin(w).abs() < 1e-2, "k = {k}: {}", p.margin(w));
        }
    }

    #[test]
    fn conjugate_symmetry() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for k in [0.0, 0.4, 1.0, 2.0] {
            let p = params(k, 0.3);
            for _ in 0..100 {
                let z = Complex64::from_polar(0.9 * rng.gen::<f64>(), rng.gen_range(0.0..2.0 * PI));
                let a = extremal_eval(z, &p).unwrap();
                let b = extremal_eval(z.conj(), &p).unwrap();
                assert!((a - b.conj()).norm() < 1e-12 * a.norm().max(1.0));
            }
        }
    }

    #[test]
    fn square_root_branch_is_immaterial() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for k in [0.0, 0.3, 0.9, 1.0] {
            let p = params(k, 0.1);
            for _ in 0..100 {
                let z = Complex64::from_polar(0.9 * rng.gen::<f64>(), rng.gen_range(0.0..2.0 * PI));
                let s = z.sqrt();
                let a = extremal_eval_from_root(s, &p);
                let b = extremal_eval_from_root(-s, &p);
                assert!((a - b).norm() < 1e-12 * a.norm().max(1.0));
            }
        }
    }

    #[test]
    fn coefficients_of_half_plane_map() {
        let c = extremal_coeffs(&params(0.0, 0.0), 32, DEFAULT_RADIUS, DEFAULT_SAMPLES).unwrap();
        for n in 1..=32 {
            assert!((c.p(n) - 2.0).abs() < 1e-11, "P_{n} = {}", c.p(n));
        }
    }

    #[test]
    fn parabolic_p1() {
        let c = extremal_coeffs(&params(1.0, 0.0), 8, DEFAULT_RADIUS, DEFAULT_SAMPLES).unwrap();
        assert!((c.p(1) - 8.0 / (PI * PI)).abs() < 1e-12);
        assert!((c.p(2) - 2.0 / 3.0 * c.p(1)).abs() < 1e-12);
    }

    #[test]
    fn closed_forms_match_extraction() {
        for k in [0.0, 0.3, 0.7, 1.0, 1.5, 3.0] {
            for g in [0.0, 0.25, 0.5, 0.9] {
                let p = params(k, g);
                let c = extremal_coeffs(&p, 4, DEFAULT_RADIUS, DEFAULT_SAMPLES).unwrap();
                assert!((c.p(1) - p.p1_closed()).abs() < 1e-8);
                assert!((c.p(2) - p.p2_closed()).abs() < 1e-6);
                assert!(c.p(1) > 0.0);
            }
        }
    }
}
