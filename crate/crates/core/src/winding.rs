//! Winding numbers of closed curves about the origin.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest argument jump accepted between neighbouring samples.
const MAX_STEP: f64 = PI / 4.0;
const MAX_DEPTH: u32 = 30;

/// Winding number about 0 of `curve(θ)`, `θ ∈ [0, 2π]`, for a closed curve.
///
/// Starts from `samples` equispaced parameters and bisects any interval
/// whose argument change exceeds π/4. Fails if the curve passes through 0 or
/// the bisection does not resolve an interval.
pub fn winding_number<F>(curve: F, samples: usize) -> Result<i64>
where
    F: Fn(f64) -> Complex64,
{
    let samples = samples.max(8);
    let step = 2.0 * PI / samples as f64;
    let mut total = 0.0;
    let mut prev = checked(&curve, 0.0)?;
    for j in 1..=samples {
        let theta = if j == samples {
            2.0 * PI
        } else {
            j as f64 * step
        };
        let next = checked(&curve, theta)?;
        total += turn(&curve, theta - step, prev, theta, next, MAX_DEPTH)?;
        prev = next;
    }
    Ok((total / (2.0 * PI)).round() as i64)
}

fn checked<F: Fn(f64) -> Complex64>(curve: &F, theta: f64) -> Result<Complex64> {
    let v = curve(theta);
    if v == Complex64::new(0.0, 0.0) || !v.is_finite() {
        return Err(Error::ZeroDenominator(format!(
            "curve meets the origin at parameter {theta}"
        )));
    }
    Ok(v)
}

fn turn<F: Fn(f64) -> Complex64>(
    curve: &F,
    a: f64,
    fa: Complex64,
    b: f64,
    fb: Complex64,
    depth: u32,
) -> Result<f64> {
    let delta = (fb / fa).arg();
    if delta.abs() <= MAX_STEP {
        return Ok(delta);
    }
    if depth == 0 {
        return Err(Error::Convergence {
            what: "winding number bisection",
            iterations: MAX_DEPTH as usize,
            residual: delta.abs(),
        });
    }
    let m = 0.5 * (a + b);
    let fm = checked(curve, m)?;
    Ok(turn(curve, a, fa, m, fm, depth - 1)? + turn(curve, m, fm, b, fb, depth - 1)?)
}
