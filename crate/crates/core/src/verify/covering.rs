//! Covering checks for polynomial members: the smallest modulus on a circle
//! near the unit circle, and an argument-principle test that the image of
//! the disc contains a given disc about the origin.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::Result;
use crate::series::TruncatedSeries;
use crate::winding::winding_number;

/// Radius of the circle standing in for the unit circle.
pub const BOUNDARY_RADIUS: f64 = 0.999;
pub const BOUNDARY_ANGLES: usize = 512;
const REFINEMENT_LEVELS: usize = 4;
const REFINEMENT_POINTS: usize = 32;
/// Probe offset from the image curve, relative to the covering radius.
const PROBE_OFFSET: f64 = 1e-3;

/// `min |f(ρ e^{iθ})|` over 512 angles, refined around the minimum.
/// Returns the minimum and the angle where it occurs.
pub fn boundary_min_modulus(f: &TruncatedSeries, rho: f64) -> (f64, f64) {
    let modulus = |theta: f64| f.evaluate(Complex64::from_polar(rho, theta)).norm();
    let step = 2.0 * PI / BOUNDARY_ANGLES as f64;
    let mut best = (0..BOUNDARY_ANGLES)
        .map(|j| {
            let t = j as f64 * step;
            (modulus(t), t)
        })
        .fold((f64::INFINITY, 0.0), |a, b| if b.0 < a.0 { b } else { a });
    let mut width = step;
    for _ in 0..REFINEMENT_LEVELS {
        let centre = best.1;
        for j in 0..=REFINEMENT_POINTS {
            let t = centre - width + 2.0 * width * j as f64 / REFINEMENT_POINTS as f64;
            let m = modulus(t);
            if m < best.0 {
                best = (m, t);
            }
        }
        width *= 2.0 / REFINEMENT_POINTS as f64;
    }
    best
}

/// Whether every `w` with `|w| < r` is attained by `f` on `|z| < ρ`.
///
/// The winding number of `f(ρ e^{iθ}) - w` is constant on each component
/// of the complement of the image curve, so it is tested at `w = 0` and on
/// both sides of every sampled curve point that lies inside the disc.
pub fn covers_disc(f: &TruncatedSeries, rho: f64, r: f64) -> Result<bool> {
    let curve = |theta: f64| f.evaluate(Complex64::from_polar(rho, theta));
    let winds = |w: Complex64| winding_number(|t| curve(t) - w, BOUNDARY_ANGLES);
    if winds(Complex64::new(0.0, 0.0))? < 1 {
        return Ok(false);
    }
    let step = 2.0 * PI / BOUNDARY_ANGLES as f64;
    let delta = PROBE_OFFSET * r;
    for j in 0..BOUNDARY_ANGLES {
        let t = j as f64 * step;
        let c = curve(t);
        if c.norm() >= r + delta {
            continue;
        }
        let tangent = curve(t + 1e-3 * step) - curve(t - 1e-3 * step);
        if tangent.norm() == 0.0 {
            continue;
        }
        let normal = tangent * Complex64::new(0.0, 1.0) / tangent.norm();
        for side in [-1.0, 1.0] {
            let w = c + normal * (side * delta);
            if w.norm() < r && winds(w)? < 1 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
