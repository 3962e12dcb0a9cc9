//! Legendre elliptic integrals of the first kind and the modulus equation
//! `k = cosh(pi K'(t) / (4 K(t)))` that fixes the elliptic branch of the
//! extremal function.
//!
//! The modulus convention is `K(t) = int_0^{pi/2} dθ / sqrt(1 - t² sin²θ)`.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::roots::brent;

const AGM_MAX_ITER: usize = 64;
const CARLSON_MAX_ITER: usize = 64;

/// Arithmetic-geometric mean of two positive numbers.
pub fn agm(mut a: f64, mut b: f64) -> f64 {
    for _ in 0..AGM_MAX_ITER {
        if (a - b).abs() <= 1e-15 * a {
            break;
        }
        let next = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = next;
    }
    0.5 * (a + b)
}

/// Complete integral `K(t)` for `0 <= t < 1`.
pub fn legendre_k(t: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&t) {
        return Err(Error::Domain {
            name: "t",
            value: t,
            reason: "K(t) needs 0 <= t < 1",
        });
    }
    Ok(complete_from_complement((1.0 - t * t).sqrt()))
}

/// `K(t)` given the complementary modulus `t' = sqrt(1 - t²) > 0`. Keeps full
/// accuracy when `t` itself rounds to 1.
pub fn complete_from_complement(t_comp: f64) -> f64 {
    FRAC_PI_2 / agm(1.0, t_comp)
}

/// Complementary integral `K'(t) = K(sqrt(1 - t²))`; diverges at `t = 0`.
pub fn legendre_k_prime(t: f64) -> Result<f64> {
    if !(t > 0.0 && t <= 1.0) {
        return Err(Error::Domain {
            name: "t",
            value: t,
            reason: "K'(t) needs 0 < t <= 1",
        });
    }
    Ok(complete_from_complement(t))
}

/// Carlson's symmetric integral `R_F(x, y, z)` by duplication.
///
/// Valid for complex arguments off the negative real axis (at most one of
/// them zero); on the axis the principal square root selects the limit from
/// the upper half-plane.
pub fn carlson_rf(x: Complex64, y: Complex64, z: Complex64) -> Complex64 {
    let (x0, y0) = (x, y);
    let (mut x, mut y, mut z) = (x, y, z);
    let a0 = (x + y + z) / 3.0;
    let mut a = a0;
    let spread = (a0 - x).norm().max((a0 - y).norm()).max((a0 - z).norm());
    let mut bound = (3.0 * f64::EPSILON).powf(-1.0 / 6.0) * spread;
    let mut scale = 1.0;
    for _ in 0..CARLSON_MAX_ITER {
        if bound < a.norm() {
            break;
        }
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lambda = sx * sy + sx * sz + sy * sz;
        x = (x + lambda) * 0.25;
        y = (y + lambda) * 0.25;
        z = (z + lambda) * 0.25;
        a = (a + lambda) * 0.25;
        bound *= 0.25;
        scale *= 0.25;
    }
    let dx = (a0 - x0) * scale / a;
    let dy = (a0 - y0) * scale / a;
    let dz = -dx - dy;
    let e2 = dx * dy - dz * dz;
    let e3 = dx * dy * dz;
    (1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - e2 * e3 * 3.0 / 44.0) / a.sqrt()
}

/// Incomplete integral `F(w; t) = int_0^w dx / (sqrt(1 - x²) sqrt(1 - t² x²))`
/// for complex `w`, on the branch given by Carlson's form
/// `w R_F(1 - w², 1 - t² w², 1)`.
pub fn incomplete_first_kind(w: Complex64, t: f64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    let w2 = w * w;
    w * carlson_rf(one - w2, one - w2 * (t * t), one)
}

/// Modulus data of the elliptic branch.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct EllipticData {
    /// The modulus `t` in `(0, 1)`.
    pub t: f64,
    /// Complementary modulus `sqrt(1 - t²)`, stored separately since `t`
    /// rounds to 1 for `k` close to 1.
    pub t_comp: f64,
    /// `K(t)`.
    pub k_t: f64,
    /// `K'(t)`.
    pub k_prime: f64,
}

impl EllipticData {
    fn from_log_ratio(lambda: f64) -> Self {
        // t / t' = e^lambda
        let (t, t_comp) = if lambda >= 0.0 {
            let e = (-2.0 * lambda).exp();
            let s = (1.0 + e).sqrt();
            (1.0 / s, (-lambda).exp() / s)
        } else {
            let e = (2.0 * lambda).exp();
            let s = (1.0 + e).sqrt();
            (lambda.exp() / s, 1.0 / s)
        };
        Self {
            t,
            t_comp,
            k_t: complete_from_complement(t_comp),
            k_prime: complete_from_complement(t),
        }
    }

    /// `pi K'(t) / (4 K(t))`, the value whose cosh is the cone parameter.
    pub fn nome_angle(&self) -> f64 {
        PI * self.k_prime / (4.0 * self.k_t)
    }

    /// The cone parameter `k` this modulus corresponds to.
    pub fn cone_parameter(&self) -> f64 {
        self.nome_angle().cosh()
    }
}

/// Forward map `t -> cosh(pi K'(t) / 4K(t))` for `0 < t < 1`.
pub fn modulus_to_cone(t: f64) -> Result<f64> {
    let k_prime = legendre_k_prime(t)?;
    let k_t = legendre_k(t)?;
    Ok((PI * k_prime / (4.0 * k_t)).cosh())
}

/// Solves `cosh(pi K'(t) / 4K(t)) = k` for `t` when `k > 1`.
///
/// The map is strictly decreasing in `t`, so the root is unique. The unknown
/// is `ln(t / t')`, which stays well scaled both for `t -> 0` (large `k`) and
/// for `t -> 1` (`k -> 1`).
pub fn solve_modulus(k: f64) -> Result<EllipticData> {
    if !(k > 1.0) || !k.is_finite() {
        return Err(Error::Domain {
            name: "k",
            value: k,
            reason: "the elliptic branch needs k > 1",
        });
    }
    let target = k.acosh();
    let g = |lambda: f64| EllipticData::from_log_ratio(lambda).nome_angle() - target;
    let lambda = brent(g, -340.0, 340.0, 1e-15, 200)?;
    let data = EllipticData::from_log_ratio(lambda);
    let residual = (data.cone_parameter() - k).abs();
    if residual >= crate::tolerances::MODULUS_RESIDUAL * k.max(1.0) {
        return Err(Error::Convergence {
            what: "modulus equation",
            iterations: 200,
            residual,
        });
    }
    Ok(data)
}
