//! Membership in the classes k-JUST(q; α, β, γ) and k-JUCV(q; α, β, γ),
//! their Alexander-type link, and generation of class members.
//!
//! With `F = χ^α_{β,q} f`, `f` is in k-JUST when `P = z D_q F / F` takes
//! values in the conic domain `Ω(k, γ)` on the disc, and in k-JUCV when
//! `1 + q z D_q² F / D_q F` does. Membership is decided on a finite polar
//! grid of a closed subdisc with a small negative margin allowance.

mod members;

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::conic::ConicParams;
use crate::error::{Error, Result};
use crate::qcore::{q_derivative_point, q_derivative_series, QContext};
use crate::qoperator::{apply_operator, OperatorParams};
use crate::series::TruncatedSeries;
use crate::tolerances;
use crate::winding::winding_number;

pub use members::{
    compose_subordinate, generate_member, make_subordinate, make_subordinate_with,
    sharp_coefficient, sharp_function, SchwarzSpec, SubordinateFunction,
};

/// Radii of the standard membership grid.
pub const STANDARD_RADII: [f64; 10] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95];
pub const STANDARD_ANGLES: usize = 256;
pub const REFINEMENT_ANGLES: usize = 64;

const ZERO_SEARCH_STARTS: usize = 32;
const ZERO_SEARCH_ITERATIONS: usize = 60;
const POLE_PROBE_RADIUS: f64 = 1e-4;
const POLE_PROBE_POINTS: usize = 64;

/// Relative tail allowance used by [`GridSpec::for_truncation`] callers.
pub const DEFAULT_TAIL_TOLERANCE: f64 = 1e-11;

/// Conic parameters together with operator parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassParams {
    pub conic: ConicParams,
    pub op: OperatorParams,
}

impl ClassParams {
    pub fn new(q: f64, alpha: f64, beta: f64, k: f64, gamma: f64) -> Result<Self> {
        let ctx = QContext::new(q)?;
        Ok(Self {
            conic: ConicParams::new(k, gamma)?,
            op: OperatorParams::new(alpha, beta, ctx)?,
        })
    }

    pub fn q(&self) -> f64 {
        self.op.q()
    }

    pub fn ctx(&self) -> &QContext {
        self.op.ctx()
    }

    pub fn k(&self) -> f64 {
        self.conic.k()
    }

    pub fn gamma(&self) -> f64 {
        self.conic.gamma()
    }

    pub fn alpha(&self) -> f64 {
        self.op.alpha()
    }

    pub fn beta(&self) -> f64 {
        self.op.beta()
    }
}

/// Polar sampling grid `{ r e^{iθ} }` plus one refinement pass of extra
/// angles around the worst sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub radii: Vec<f64>,
    pub angles: usize,
    pub refinement: usize,
    /// Estimated truncation error of the evaluated series at the largest
    /// radius; zero for polynomials.
    pub tail_estimate: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self::standard()
    }
}

impl GridSpec {
    /// Radii 0.1, 0.2, ..., 0.9, 0.95 with 256 angles and 64 refinement
    /// angles. Appropriate for polynomials.
    pub fn standard() -> Self {
        Self {
            radii: STANDARD_RADII.to_vec(),
            angles: STANDARD_ANGLES,
            refinement: REFINEMENT_ANGLES,
            tail_estimate: 0.0,
        }
    }

    /// Grid for a truncation of an infinite series.
    ///
    /// With `N` the index of the last nonzero coefficient, the convergence
    /// radius `R` is estimated from coefficients `N/2..=N` by the root test, and the tail beyond the truncation is
    /// modelled as geometric, `|a_N| ρ^N (ρ/R) / (1 - ρ/R)`. The grid keeps
    /// the standard radii up to the largest `ρ <= 0.95` whose tail estimate,
    /// relative to `ρ`, stays below `tail_tol`.
    pub fn for_truncation(f: &TruncatedSeries, tail_tol: f64) -> Self {
        let Some(n) = (0..=f.degree()).rev().find(|&m| f.coeff(m).norm() > 0.0) else {
            return Self::standard();
        };
        let last = f.coeff(n).norm();
        if n < 2 {
            return Self::standard();
        }
        let radius_est = (n / 2..=n)
            .filter_map(|m| {
                let a = f.coeff(m).norm();
                (m > 0 && a > 0.0).then(|| a.powf(-1.0 / m as f64))
            })
            .fold(f64::INFINITY, f64::min);
        let tail = |rho: f64| {
            let ratio = rho / radius_est;
            if ratio >= 1.0 {
                f64::INFINITY
            } else {
                last * rho.powi(n as i32) * ratio / (1.0 - ratio)
            }
        };
        let mut rho = *STANDARD_RADII.last().unwrap();
        while rho > 0.01 && tail(rho) > tail_tol * rho {
            rho -= 0.01;
        }
        let mut radii: Vec<f64> = STANDARD_RADII
            .iter()
            .copied()
            .filter(|&r| r < rho)
            .collect();
        radii.push(rho);
        Self {
            radii,
            angles: STANDARD_ANGLES,
            refinement: REFINEMENT_ANGLES,
            tail_estimate: tail(rho),
        }
    }

    pub fn max_radius(&self) -> f64 {
        self.radii.iter().copied().fold(0.0, f64::max)
    }
}

/// Result of a grid membership test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MembershipVerdict {
    pub member: bool,
    /// Minimum over the grid of `Re P - k |P - 1| - γ`.
    pub worst_margin: f64,
    /// Grid point where the minimum is attained.
    pub witness: Complex64,
    /// Radius of the closed subdisc that was sampled.
    pub max_radius: f64,
    /// Truncation-tail estimate at `max_radius` (zero for polynomials).
    pub tail_estimate: f64,
    pub points: usize,
}

/// Tests `f` for k-JUST(q; α, β, γ) on `grid`.
pub fn just_membership(
    f: &TruncatedSeries,
    params: &ClassParams,
    grid: &GridSpec,
) -> Result<MembershipVerdict> {
    let big_f = apply_operator(f, &params.op)?;
    let ctx = params.ctx();
    let conic = &params.conic;
    let margin = |z: Complex64| -> Result<f64> {
        let value = big_f.evaluate(z);
        if value == Complex64::new(0.0, 0.0) {
            return Err(Error::ZeroDenominator(format!("χf vanishes at {z}")));
        }
        let derivative = q_derivative_point(|t| big_f.evaluate(t), z, big_f.coeff(1), ctx);
        finite_margin(conic.margin(z * derivative / value), z)
    };
    let zeros = ZeroCheck {
        g: &big_f,
        expected: 1,
    };
    grid_minimum(margin, grid, zeros)
}

/// Tests `f` for k-JUCV(q; α, β, γ) on `grid`.
pub fn jucv_membership(
    f: &TruncatedSeries,
    params: &ClassParams,
    grid: &GridSpec,
) -> Result<MembershipVerdict> {
    let big_f = apply_operator(f, &params.op)?;
    let ctx = params.ctx();
    let q = ctx.q();
    let k = params.k();
    let gamma = params.gamma();
    let first = |z: Complex64| q_derivative_point(|t| big_f.evaluate(t), z, big_f.coeff(1), ctx);
    let margin = |z: Complex64| -> Result<f64> {
        let d1 = first(z);
        if d1 == Complex64::new(0.0, 0.0) {
            return Err(Error::ZeroDenominator(format!("D_q χf vanishes at {z}")));
        }
        let d2 = q_derivative_point(first, z, big_f.coeff(2) * ctx.bracket_int(2), ctx);
        let s = z * d2 * q / d1;
        finite_margin((1.0 + s).re - k * s.norm() - gamma, z)
    };
    let derivative = q_derivative_series(&big_f, ctx);
    let zeros = ZeroCheck {
        g: &derivative,
        expected: 0,
    };
    grid_minimum(margin, grid, zeros)
}

/// The function whose zeros are the poles of the tested ratio, and the
/// number of zeros it may have inside the sampled disc.
struct ZeroCheck<'a> {
    g: &'a TruncatedSeries,
    expected: i64,
}

impl ZeroCheck<'_> {
    /// Newton iteration for a zero of `g` away from the origin inside
    /// `|z| < radius`, started from the samples where `|g(z) / z^e|` is smallest.
    fn locate(&self, starts: &[Complex64], radius: f64) -> Option<Complex64> {
        let dg = self.g.map_indexed(|n, a| a * n as f64);
        let slope = |z: Complex64| {
            dg.coeffs()
                .iter()
                .skip(1)
                .rev()
                .fold(Complex64::new(0.0, 0.0), |acc, a| acc * z + a)
        };
        let scaled = |z: Complex64| self.g.evaluate(z).norm() / z.norm().powi(self.expected as i32);
        let mut order: Vec<Complex64> = starts.to_vec();
        order.sort_by(|a, b| scaled(*a).total_cmp(&scaled(*b)));
        for &start in order.iter().take(ZERO_SEARCH_STARTS) {
            let mut z = start;
            for _ in 0..ZERO_SEARCH_ITERATIONS {
                let d = slope(z);
                if d == Complex64::new(0.0, 0.0) {
                    break;
                }
                let step = self.g.evaluate(z) / d;
                z -= step;
                if step.norm() <= 1e-15 * z.norm().max(1e-300) {
                    break;
                }
            }
            let away_from_origin = self.expected == 0 || z.norm() > 1e-6;
            if z.norm() < radius && away_from_origin && self.g.evaluate(z).norm() < 1e-10 {
                return Some(z);
            }
        }
        None
    }
}

fn finite_margin(m: f64, z: Complex64) -> Result<f64> {
    if m.is_finite() {
        Ok(m)
    } else {
        Err(Error::ZeroDenominator(format!("non-finite ratio at {z}")))
    }
}

fn grid_minimum<M>(margin: M, grid: &GridSpec, zeros: ZeroCheck) -> Result<MembershipVerdict>
where
    M: Fn(Complex64) -> Result<f64> + Sync,
{
    let m = grid.angles.max(1);
    let points: Vec<(usize, usize)> = (0..grid.radii.len())
        .flat_map(|i| (0..m).map(move |j| (i, j)))
        .collect();
    let at = |r: f64, theta: f64| Complex64::from_polar(r, theta);
    let step = 2.0 * PI / m as f64;
    let values: Vec<(Complex64, f64)> = points
        .par_iter()
        .map(|&(i, j)| {
            let z = at(grid.radii[i], j as f64 * step);
            margin(z).map(|v| (z, v))
        })
        .collect::<Result<_>>()?;
    let mut worst = min_by_margin(&values);
    let mut count = values.len();
    if grid.refinement > 0 && !values.is_empty() {
        let (z0, _) = worst;
        let (r, theta0) = (z0.norm(), z0.arg());
        let n = grid.refinement;
        let extra: Vec<(Complex64, f64)> = (1..=n)
            .into_par_iter()
            .map(|j| {
                let theta = theta0 - step + 2.0 * step * j as f64 / (n + 1) as f64;
                let z = at(r, theta);
                margin(z).map(|v| (z, v))
            })
            .collect::<Result<_>>()?;
        count += extra.len();
        let refined = min_by_margin(&extra);
        if refined.1 < worst.1 {
            worst = refined;
        }
    }
    // A zero of g inside the disc is a pole of the ratio that a grid can
    // step over; find it and sample around it.
    let radius = grid.max_radius();
    if radius > 0.0 {
        let winding = winding_number(|t| zeros.g.evaluate(Complex64::from_polar(radius, t)), m)?;
        if winding != zeros.expected {
            let starts: Vec<Complex64> = values.iter().map(|v| v.0).collect();
            let z0 = zeros
                .locate(&starts, radius)
                .ok_or_else(|| Error::Accuracy {
                    what: format!("location of a zero counted by winding number {winding}"),
                    discrepancy: (winding - zeros.expected) as f64,
                    tolerance: 0.0,
                })?;
            let eps = POLE_PROBE_RADIUS.min(0.5 * (radius - z0.norm()));
            let probes: Vec<(Complex64, f64)> = (0..POLE_PROBE_POINTS)
                .map(|j| {
                    let z = z0
                        + Complex64::from_polar(
                            eps,
                            2.0 * PI * j as f64 / POLE_PROBE_POINTS as f64,
                        );
                    margin(z).map(|v| (z, v))
                })
                .collect::<Result<_>>()?;
            count += probes.len();
            let near_pole = min_by_margin(&probes);
            if near_pole.1 < worst.1 {
                worst = near_pole;
            }
        }
    }
    Ok(MembershipVerdict {
        member: worst.1 > -tolerances::MEMBERSHIP,
        worst_margin: worst.1,
        witness: worst.0,
        max_radius: grid.max_radius(),
        tail_estimate: grid.tail_estimate,
        points: count,
    })
}

fn min_by_margin(values: &[(Complex64, f64)]) -> (Complex64, f64) {
    values
        .iter()
        .copied()
        .fold((Complex64::new(0.0, 0.0), f64::INFINITY), |best, cur| {
            if cur.1 < best.1 {
                cur
            } else {
                best
            }
        })
}

/// `z D_q F`: coefficient `n` is multiplied by `[n]_q`.
pub fn alexander_transform(f: &TruncatedSeries, ctx: &QContext) -> TruncatedSeries {
    f.map_indexed(|n, a| a * ctx.bracket_int(n))
}
