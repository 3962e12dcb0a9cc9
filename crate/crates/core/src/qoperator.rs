//! The generalized q-integral operator `χ^α_{β,q}` acting on normalized
//! series through its coefficient multipliers
//!
//! ```text
//! ψ_n = Γ_q(β+n) Γ_q(α+β+1) / (Γ_q(α+β+n) Γ_q(β+1)),
//! ```
//!
//! and, for integer `α`, through the Jackson-sum integral representation.
//! At `α = 1` this is the q-Bernardi operator; `β = 0` as well gives the
//! q-Alexander operator.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::{jackson_integral_point, QContext};
use crate::series::TruncatedSeries;

/// Largest `α` handled by the exact bracket product.
const MAX_PRODUCT_ALPHA: f64 = 64.0;

#[derive(Debug, Clone, PartialEq)]
pub struct OperatorParams {
    alpha: f64,
    beta: f64,
    ctx: QContext,
}

impl OperatorParams {
    pub fn new(alpha: f64, beta: f64, ctx: QContext) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::Domain {
                name: "alpha",
                value: alpha,
                reason: "must be finite and > 0",
            });
        }
        if !(beta > -1.0) || !beta.is_finite() {
            return Err(Error::Domain {
                name: "beta",
                value: beta,
                reason: "must be finite and > -1",
            });
        }
        Ok(Self { alpha, beta, ctx })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn ctx(&self) -> &QContext {
        &self.ctx
    }

    pub fn q(&self) -> f64 {
        self.ctx.q()
    }

    /// `α` as a positive integer, when it is one.
    pub fn integer_alpha(&self) -> Option<usize> {
        (self.alpha.fract() == 0.0 && self.alpha <= MAX_PRODUCT_ALPHA)
            .then_some(self.alpha as usize)
    }
}

/// Multipliers `ψ_1..ψ_N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorWeights {
    psi: Vec<f64>,
}

impl OperatorWeights {
    /// `ψ_n` for `1 <= n <= N`.
    pub fn psi(&self, n: usize) -> f64 {
        self.psi[n - 1]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.psi
    }

    pub fn len(&self) -> usize {
        self.psi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.psi.is_empty()
    }
}

/// The multiplier `ψ_n` of a single index `n >= 1`.
pub fn weight(params: &OperatorParams, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain {
            name: "n",
            value: 0.0,
            reason: "multipliers are indexed from 1",
        });
    }
    if n == 1 {
        return Ok(1.0);
    }
    let (a, b, ctx) = (params.alpha, params.beta, &params.ctx);
    let nf = n as f64;
    match params.integer_alpha() {
        Some(m) => Ok((0..m)
            .map(|j| ctx.bracket(b + 1.0 + j as f64) / ctx.bracket(b + nf + j as f64))
            .product()),
        None => Ok((ctx.ln_gamma(b + nf)? - ctx.ln_gamma(a + b + nf)?
            + ctx.ln_gamma(a + b + 1.0)?
            - ctx.ln_gamma(b + 1.0)?)
        .exp()),
    }
}

/// Multipliers `ψ_1..ψ_N`.
pub fn weights(params: &OperatorParams, degree: usize) -> Result<OperatorWeights> {
    if degree == 0 {
        return Err(Error::Domain {
            name: "N",
            value: 0.0,
            reason: "at least one multiplier is needed",
        });
    }
    let psi = (1..=degree)
        .map(|n| weight(params, n))
        .collect::<Result<Vec<_>>>()?;
    Ok(OperatorWeights { psi })
}

/// `χf = z + Σ ψ_n a_n zⁿ`.
pub fn apply_operator(f: &TruncatedSeries, params: &OperatorParams) -> Result<TruncatedSeries> {
    f.ensure_normalized()?;
    if f.degree() < 2 {
        return Ok(f.clone());
    }
    let w = weights(params, f.degree())?;
    Ok(f.map_indexed(|n, a| if n == 0 { a } else { a * w.psi(n) }))
}

/// Evaluates `χf(z)` from the integral representation
///
/// ```text
/// binom(α+β, β)_q [α]_q z^-β ∫_0^z Π_{i=0}^{α-2} (1 - q^{i+1} t/z) t^{β-1} f(t) d_q t
/// ```
///
/// as a Jackson sum, with principal powers. Needs integer `α` and `z ≠ 0`.
pub fn apply_operator_integral_form(
    f: &TruncatedSeries,
    params: &OperatorParams,
    z: Complex64,
) -> Result<Complex64> {
    let m = params.integer_alpha().ok_or(Error::Domain {
        name: "alpha",
        value: params.alpha,
        reason: "the integral form is implemented for integer alpha only",
    })?;
    if z == Complex64::new(0.0, 0.0) {
        return Ok(f.coeff(0));
    }
    let (b, ctx) = (params.beta, &params.ctx);
    let q = ctx.q();
    let integrand = |t: Complex64| {
        let shifted: Complex64 = (0..m.saturating_sub(1))
            .map(|i| 1.0 - t / z * q.powi(i as i32 + 1))
            .product();
        shifted * t.powf(b - 1.0) * f.evaluate(t)
    };
    let integral = jackson_integral_point(integrand, z, ctx)?;
    let scale = ctx.binomial_real(params.alpha + b, b)? * ctx.bracket_int(m);
    Ok(integral * scale / z.powf(b))
}
