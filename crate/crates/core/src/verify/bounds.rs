//! Closed-form coefficient bounds for k-JUST(q; α, β, γ).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::classes::ClassParams;
use crate::conic::ConicCoefficients;
use crate::error::Result;
use crate::qoperator::{weights, OperatorWeights};
use crate::series::TruncatedSeries;

/// The quantities the bounds are built from: `P_1`, `P_2`, the multipliers
/// `ψ_n` and the brackets `[n]_q`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientBounds {
    pub p1: f64,
    pub p2: f64,
    pub q: f64,
    psi: OperatorWeights,
    brackets: Vec<f64>,
}

/// Fekete-Szegő data for one `η`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeketeSzegoSpec {
    pub eta: Complex64,
    pub nu: Complex64,
    pub sigma1: f64,
    pub sigma2: f64,
}

impl CoefficientBounds {
    /// Bounds up to index `degree` (at least 3).
    pub fn new(params: &ClassParams, extremal: &ConicCoefficients, degree: usize) -> Result<Self> {
        let degree = degree.max(3);
        let psi = weights(&params.op, degree)?;
        let ctx = params.ctx();
        Ok(Self {
            p1: extremal.p(1),
            p2: extremal.p(2),
            q: params.q(),
            psi,
            brackets: (0..=degree).map(|n| ctx.bracket_int(n)).collect(),
        })
    }

    pub fn psi(&self, n: usize) -> f64 {
        self.psi.psi(n)
    }

    /// `[n]_q - 1`.
    pub fn shifted_bracket(&self, n: usize) -> f64 {
        self.brackets[n] - 1.0
    }

    pub fn degree(&self) -> usize {
        self.psi.len()
    }

    /// `η P_1 ([3]_q-1) ψ_3 / (([2]_q-1)² ψ_2²)` without the `η`.
    fn eta_scale(&self) -> f64 {
        let (d2, d3) = (self.shifted_bracket(2), self.shifted_bracket(3));
        self.p1 * d3 * self.psi(3) / (d2 * d2 * self.psi(2) * self.psi(2))
    }

    /// `ν = 1/2 - P_2/(2P_1) - P_1/(2([2]_q-1)) + η P_1 ([3]_q-1) ψ_3 / (2([2]_q-1)² ψ_2²)`.
    pub fn nu(&self, eta: Complex64) -> Complex64 {
        let d2 = self.shifted_bracket(2);
        let base = 0.5 - self.p2 / (2.0 * self.p1) - self.p1 / (2.0 * d2);
        eta * (0.5 * self.eta_scale()) + base
    }

    pub fn fekete_szego_spec(&self, eta: Complex64) -> FeketeSzegoSpec {
        FeketeSzegoSpec {
            eta,
            nu: self.nu(eta),
            sigma1: self.sigma1(),
            sigma2: self.sigma2(),
        }
    }

    /// `P_1 / (([3]_q-1) ψ_3) max{1, |2ν-1|}`.
    ///
    /// This is the bound the subordination argument yields; see
    /// [`Self::fekete_szego_complex_printed`] for the variant with an extra
    /// factor 1/2.
    pub fn fekete_szego_complex(&self, eta: Complex64) -> f64 {
        let mu = self.nu(eta) * 2.0 - 1.0;
        self.p1 / (self.shifted_bracket(3) * self.psi(3)) * mu.norm().max(1.0)
    }

    /// `P_1 / (2([3]_q-1) ψ_3) max{1, |2ν-1|}`, half of
    /// [`Self::fekete_szego_complex`]. Members built from `w(z) = z²`
    /// exceed it.
    pub fn fekete_szego_complex_printed(&self, eta: Complex64) -> f64 {
        0.5 * self.fekete_szego_complex(eta)
    }

    /// The real `η` at which `2ν - 1 = 1`, where the complex bound switches
    /// from the constant to the linear regime.
    pub fn switching_eta(&self) -> f64 {
        let d2 = self.shifted_bracket(2);
        (1.0 + self.p2 / self.p1 + self.p1 / d2) / self.eta_scale()
    }

    fn sigma_prefactor(&self) -> f64 {
        let d2 = self.shifted_bracket(2);
        d2 * d2 * self.psi(2) * self.psi(2) / (self.shifted_bracket(3) * self.psi(3))
    }

    pub fn sigma1(&self) -> f64 {
        let d2 = self.shifted_bracket(2);
        self.sigma_prefactor() * (self.p2 / (self.p1 * self.p1) + 1.0 / d2 - 1.0 / self.p1)
    }

    pub fn sigma2(&self) -> f64 {
        let d2 = self.shifted_bracket(2);
        self.sigma_prefactor() * (self.p2 / (self.p1 * self.p1) + 1.0 / d2 + 1.0 / self.p1)
    }

    /// The three branches of the real-`η` bound, each as a formula valid
    /// for every `η` (index 0: `η <= σ_1`, 1: middle, 2: `η >= σ_2`).
    pub fn real_branch(&self, branch: usize, eta: f64) -> f64 {
        let d2 = self.shifted_bracket(2);
        let d3 = self.shifted_bracket(3);
        let scale = 1.0 / (d3 * self.psi(3));
        let linear = self.p2 + self.p1 * self.p1 / d2
            - eta * self.p1 * self.p1 * d3 * self.psi(3) / (d2 * d2 * self.psi(2) * self.psi(2));
        match branch {
            0 => scale * linear,
            1 => scale * self.p1,
            _ => -scale * linear,
        }
    }

    pub fn fekete_szego_real(&self, eta: f64) -> f64 {
        if eta <= self.sigma1() {
            self.real_branch(0, eta)
        } else if eta <= self.sigma2() {
            self.real_branch(1, eta)
        } else {
            self.real_branch(2, eta)
        }
    }

    /// `P_1 / (q ψ_2)`.
    pub fn a2_bound(&self) -> f64 {
        self.p1 / (self.q * self.psi(2))
    }

    /// `(q P_2 + P_1²) / (q² (1+q) ψ_3)`.
    pub fn a3_bound(&self) -> f64 {
        let q = self.q;
        (q * self.p2 + self.p1 * self.p1) / (q * q * (1.0 + q) * self.psi(3))
    }

    /// `max{P_1, P_2 + P_1²/q} / (q (1+q) ψ_3)`, the value of
    /// [`Self::fekete_szego_complex`] at `η = 0`.
    pub fn a3_bound_sharp(&self) -> f64 {
        self.fekete_szego_complex(Complex64::new(0.0, 0.0))
    }

    /// `P_1 / (([n]_q-1) ψ_n) Π_{j=1}^{n-2} (1 + P_1/([j+1]_q-1))` for `n >= 2`.
    pub fn product_bound(&self, n: usize) -> f64 {
        let head = self.p1 / (self.shifted_bracket(n) * self.psi(n));
        (1..=n.saturating_sub(2)).fold(head, |acc, j| {
            acc * (1.0 + self.p1 / self.shifted_bracket(j + 1))
        })
    }

    /// `q ψ_2 / (2 q ψ_2 + P_1)`.
    pub fn covering_radius(&self) -> f64 {
        let t = self.q * self.psi(2);
        t / (2.0 * t + self.p1)
    }
}

/// `Σ_{n>=2} ([n]_q (k+1) - (k+γ)) ψ_n |a_n|`; membership follows when this
/// is at most `1 - γ`.
pub fn sufficient_condition_lhs(f: &TruncatedSeries, params: &ClassParams) -> Result<f64> {
    let n = f.degree();
    if n < 2 {
        return Ok(0.0);
    }
    let psi = weights(&params.op, n)?;
    let (k, g) = (params.k(), params.gamma());
    let ctx = params.ctx();
    Ok((2..=n)
        .map(|m| (ctx.bracket_int(m) * (k + 1.0) - (k + g)) * psi.psi(m) * f.coeff(m).norm())
        .sum())
}
