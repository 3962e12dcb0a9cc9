//! The conic domain `Ω(k, γ) = { w : Re w > k |w - 1| + γ }`, its boundary,
//! and the extremal function mapping the unit disc onto it.
//!
//! Depending on `k` the domain is a half-plane (`k = 0`), the inside of a
//! hyperbola branch (`0 < k < 1`), a parabola (`k = 1`) or an ellipse
//! (`k > 1`).

pub mod elliptic;
mod extremal;

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
pub use elliptic::EllipticData;
pub use extremal::{
    extremal_coeffs, extremal_eval, extremal_eval_from_root, ConicCoefficients, DEFAULT_RADIUS,
    DEFAULT_SAMPLES,
};

/// Half-height of the emitted boundary for the unbounded conics.
pub const DEFAULT_BOUNDARY_EXTENT: f64 = 3.0;

/// Shape of the conic domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConicBranch {
    HalfPlane,
    Hyperbolic,
    Parabolic,
    Elliptic,
}

/// Cone parameter `k >= 0`, order `0 <= γ < 1`, and the elliptic modulus
/// data when `k > 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConicParams {
    k: f64,
    gamma: f64,
    elliptic: Option<EllipticData>,
}

impl ConicParams {
    pub fn new(k: f64, gamma: f64) -> Result<Self> {
        if !(k >= 0.0) || !k.is_finite() {
            return Err(Error::Domain {
                name: "k",
                value: k,
                reason: "cone parameter must be finite and >= 0",
            });
        }
        if !(0.0..1.0).contains(&gamma) {
            return Err(Error::Domain {
                name: "gamma",
                value: gamma,
                reason: "order must satisfy 0 <= gamma < 1",
            });
        }
        let elliptic = if k > 1.0 {
            Some(elliptic::solve_modulus(k)?)
        } else {
            None
        };
        Ok(Self { k, gamma, elliptic })
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn elliptic(&self) -> Option<&EllipticData> {
        self.elliptic.as_ref()
    }

    pub fn branch(&self) -> ConicBranch {
        if self.k == 0.0 {
            ConicBranch::HalfPlane
        } else if self.k < 1.0 {
            ConicBranch::Hyperbolic
        } else if self.k == 1.0 {
            ConicBranch::Parabolic
        } else {
            ConicBranch::Elliptic
        }
    }

    /// `A = (2/π) arccos k`, the exponent of the hyperbolic branch.
    pub fn hyperbolic_exponent(&self) -> f64 {
        2.0 / PI * self.k.min(1.0).acos()
    }

    /// `Re w - k |w - 1| - γ`; positive exactly on the domain.
    pub fn margin(&self, w: Complex64) -> f64 {
        w.re - self.k * (w - 1.0).norm() - self.gamma
    }

    pub fn contains(&self, w: Complex64) -> bool {
        self.margin(w) > 0.0
    }

    /// First Taylor coefficient of the extremal function, in closed form.
    pub fn p1_closed(&self) -> f64 {
        let g = 1.0 - self.gamma;
        match self.branch() {
            ConicBranch::HalfPlane | ConicBranch::Hyperbolic => {
                let ac = self.k.acos();
                8.0 * g * ac * ac / (PI * PI * (1.0 - self.k * self.k))
            }
            ConicBranch::Parabolic => 8.0 * g / (PI * PI),
            ConicBranch::Elliptic => {
                let e = self.elliptic.expect("elliptic data present for k > 1");
                PI * PI * g
                    / (4.0 * e.t.sqrt() * (1.0 + e.t) * e.k_t * e.k_t * (self.k * self.k - 1.0))
            }
        }
    }

    /// Second Taylor coefficient of the extremal function, in closed form.
    pub fn p2_closed(&self) -> f64 {
        let p1 = self.p1_closed();
        match self.branch() {
            ConicBranch::HalfPlane | ConicBranch::Hyperbolic => {
                let a = self.hyperbolic_exponent();
                (a * a + 2.0) / 3.0 * p1
            }
            ConicBranch::Parabolic => 2.0 / 3.0 * p1,
            ConicBranch::Elliptic => {
                let e = self.elliptic.expect("elliptic data present for k > 1");
                let (t, kk) = (e.t, e.k_t * e.k_t);
                (4.0 * kk * (t * t + 6.0 * t + 1.0) - PI * PI) / (24.0 * t.sqrt() * kk * (1.0 + t))
                    * p1
            }
        }
    }

    /// Vertex of the boundary on the real axis nearest to `γ`.
    pub fn vertex(&self) -> f64 {
        (self.k + self.gamma) / (self.k + 1.0)
    }
}

/// Points of the boundary `(u - γ)² = k² (u - 1)² + k² v²`.
///
/// For `k > 1` the whole ellipse is traced by angle; otherwise the branch
/// through the vertex `(k + γ)/(k + 1)` is traced for `|v| <= DEFAULT_BOUNDARY_EXTENT`.
pub fn boundary_curve(params: &ConicParams, m: usize) -> Vec<Complex64> {
    boundary_curve_with_extent(params, m, DEFAULT_BOUNDARY_EXTENT)
}

pub fn boundary_curve_with_extent(params: &ConicParams, m: usize, v_max: f64) -> Vec<Complex64> {
    let m = m.max(2);
    let (k, g) = (params.k, params.gamma);
    match params.branch() {
        ConicBranch::Elliptic => {
            let k2 = k * k;
            let center = (k2 - g) / (k2 - 1.0);
            let semi_u = k * (1.0 - g) / (k2 - 1.0);
            let semi_v = (1.0 - g) / (k2 - 1.0).sqrt();
            (0..m)
                .map(|j| {
                    // start at the vertex nearest the origin
                    let phi = PI + 2.0 * PI * j as f64 / m as f64;
                    Complex64::new(center + semi_u * phi.cos(), semi_v * phi.sin())
                })
                .collect()
        }
        _ => (0..m)
            .map(|j| {
                let v = -v_max + 2.0 * v_max * j as f64 / (m - 1) as f64;
                Complex64::new(boundary_abscissa(k, g, v), v)
            })
            .collect(),
    }
}

/// `u` on the vertex branch of the boundary for a given `v`, `k <= 1`.
fn boundary_abscissa(k: f64, g: f64, v: f64) -> f64 {
    if k == 1.0 {
        (1.0 + g) / 2.0 + v * v / (2.0 * (1.0 - g))
    } else {
        let k2 = k * k;
        let root = ((1.0 - g).powi(2) + (1.0 - k2) * v * v).sqrt();
        (g - k2 + k * root) / (1.0 - k2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn residual(p: &ConicParams, w: Complex64) -> f64 {
        let (k, g) = (p.k(), p.gamma());
        ((w.re - g).powi(2) - k * k * ((w.re - 1.0).powi(2) + w.im * w.im)).abs()
    }

    #[test]
    fn parameter_validation() {
        assert!(ConicParams::new(-0.1, 0.0).is_err());
        assert!(ConicParams::new(0.5, 1.0).is_err());
        assert!(ConicParams::new(0.5, -0.1).is_err());
        let p = ConicParams::new(2.0, 0.3).unwrap();
        assert!(p.elliptic().is_some());
        assert!(ConicParams::new(1.0, 0.3).unwrap().elliptic().is_none());
    }

    #[test]
    fn one_is_always_inside() {
        for k in [0.0, 0.4, 1.0, 2.5] {
            for g in [0.0, 0.5, 0.9] {
                assert!(ConicParams::new(k, g)
                    .unwrap()
                    .contains(Complex64::new(1.0, 0.0)));
            }
        }
    }

    #[test]
    fn half_plane_case() {
        let p = ConicParams::new(0.0, 0.25).unwrap();
        assert!(!p.contains(Complex64::new(0.25, 0.0)));
        let p = ConicParams::new(0.0, 0.0).unwrap();
        assert!(p.contains(Complex64::new(1e-9, 50.0)));
        assert!(!p.contains(Complex64::new(-1e-9, 0.0)));
    }

    #[test]
    fn boundary_points_satisfy_implicit_equation() {
        for k in [0.0, 0.3, 1.0, 1.5, 4.0] {
            for g in [0.0, 0.4, 0.8] {
                let p = ConicParams::new(k, g).unwrap();
                for w in boundary_curve(&p, 101) {
                    assert!(residual(&p, w) < 1e-10, "k = {k}, g = {g}, w = {w}");
                    assert!(p.margin(w).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn boundary_vertex_and_line() {
        for k in [0.0, 0.6, 1.0, 3.0] {
            let p = ConicParams::new(k, 0.2).unwrap();
            let curve = boundary_curve(&p, 101);
            let at_axis = curve
                .iter()
                .min_by(|a, b| a.im.abs().total_cmp(&b.im.abs()))
                .unwrap();
            assert!((at_axis.re - p.vertex()).abs() < 1e-12, "k = {k}");
        }
        let p = ConicParams::new(0.0, 0.35).unwrap();
        assert!(boundary_curve(&p, 20)
            .iter()
            .all(|w| (w.re - 0.35).abs() < 1e-15));
    }

    #[test]
    fn closed_forms_at_special_points() {
        let p = ConicParams::new(0.0, 0.0).unwrap();
        assert!((p.p1_closed() - 2.0).abs() < 1e-14);
        assert!((p.p2_closed() - p.p1_closed()).abs() < 1e-14);
        let p = ConicParams::new(1.0, 0.0).unwrap();
        assert!((p.p1_closed() - 8.0 / (PI * PI)).abs() < 1e-15);
        assert!((p.p1_closed() - 0.810569469).abs() < 1e-9);
    }

    #[test]
    fn closed_forms_continuous_at_k_one() {
        let below = ConicParams::new(1.0 - 1e-7, 0.2).unwrap();
        let at = ConicParams::new(1.0, 0.2).unwrap();
        let above = ConicParams::new(1.0 + 1e-4, 0.2).unwrap();
        assert!((below.p1_closed() - at.p1_closed()).abs() < 1e-6);
        assert!((above.p1_closed() - at.p1_closed()).abs() < 1e-3);
        assert!((above.p2_closed() - at.p2_closed()).abs() < 1e-3);
    }
}
