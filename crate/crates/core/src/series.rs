//! Truncated power series with complex coefficients.
//!
//! A [`TruncatedSeries`] of degree `N` stores `a_0, ..., a_N` and stands for
//! the germ `a_0 + a_1 z + ... + a_N z^N + O(z^{N+1})`. Binary operations
//! truncate to the smaller of the two degrees, so a product or quotient never
//! reports coefficients that depend on terms neither operand carries.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Working degree used when callers do not pick one.
pub const DEFAULT_DEGREE: usize = 32;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruncatedSeries {
    coeffs: Vec<Complex64>,
}

impl TruncatedSeries {
    /// Builds a series from `a_0..a_N`. An empty vector becomes the zero
    /// series of degree 0.
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        if coeffs.is_empty() {
            return Self { coeffs: vec![ZERO] };
        }
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero(degree: usize) -> Self {
        Self {
            coeffs: vec![ZERO; degree + 1],
        }
    }

    pub fn constant(c: Complex64, degree: usize) -> Self {
        let mut s = Self::zero(degree);
        s.coeffs[0] = c;
        s
    }

    pub fn one(degree: usize) -> Self {
        Self::constant(ONE, degree)
    }

    /// `c z^n` carried to `degree` (which must be at least `n` to be nonzero).
    pub fn monomial(n: usize, c: Complex64, degree: usize) -> Self {
        let mut s = Self::zero(degree);
        if n <= degree {
            s.coeffs[n] = c;
        }
        s
    }

    /// The identity function `z`.
    pub fn identity(degree: usize) -> Self {
        Self::monomial(1, ONE, degree.max(1))
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient `a_n`, zero beyond the stored degree.
    pub fn coeff(&self, n: usize) -> Complex64 {
        self.coeffs.get(n).copied().unwrap_or(ZERO)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Index of the first nonzero coefficient, `None` for the zero series.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| *c != ZERO)
    }

    /// True for members of the normalized class: `a_0 = 0` and `a_1 = 1`.
    pub fn is_normalized(&self) -> bool {
        self.degree() >= 1 && self.coeffs[0] == ZERO && self.coeffs[1] == ONE
    }

    pub fn ensure_normalized(&self) -> Result<()> {
        if self.is_normalized() {
            Ok(())
        } else {
            Err(Error::NotNormalized {
                a0: self.coeff(0).to_string(),
                a1: self.coeff(1).to_string(),
            })
        }
    }

    /// Keeps `a_0..a_degree`, padding with zeros when extending.
    pub fn truncate(&self, degree: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(degree + 1, ZERO);
        Self { coeffs }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Multiplies coefficient `n` by `weight(n)`.
    pub fn map_indexed<F>(&self, mut weight: F) -> Self
    where
        F: FnMut(usize, Complex64) -> Complex64,
    {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(n, &a)| weight(n, a))
                .collect(),
        }
    }

    /// Horner evaluation of the stored polynomial.
    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, &a| acc * z + a)
    }

    /// Cauchy product truncated to the smaller degree.
    pub fn multiply(&self, other: &Self) -> Self {
        let degree = self.degree().min(other.degree());
        let mut out = vec![ZERO; degree + 1];
        for (i, &a) in self.coeffs.iter().enumerate().take(degree + 1) {
            if a == ZERO {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate().take(degree + 1 - i) {
                out[i + j] += a * b;
            }
        }
        Self { coeffs: out }
    }

    /// Quotient `self / divisor`.
    ///
    /// A common factor `z^m` (the valuation of the divisor) is cancelled
    /// first, so the result has degree `min(deg self, deg divisor) - m`.
    pub fn divide(&self, divisor: &Self) -> Result<Self> {
        let m = divisor
            .valuation()
            .ok_or(Error::DegenerateDivision("divisor is identically zero"))?;
        if let Some(v) = self.valuation() {
            if v < m {
                return Err(Error::DegenerateDivision(
                    "dividend valuation below divisor valuation",
                ));
            }
        }
        let top = self.degree().min(divisor.degree());
        if top < m {
            return Err(Error::DegenerateDivision(
                "divisor valuation exceeds the truncation degree",
            ));
        }
        let degree = top - m;
        let lead = divisor.coeffs[m];
        let mut out = vec![ZERO; degree + 1];
        for n in 0..=degree {
            let mut acc = self.coeff(n + m);
            for j in 1..=n {
                acc -= out[n - j] * divisor.coeff(m + j);
            }
            out[n] = acc / lead;
        }
        Ok(Self { coeffs: out })
    }

    /// Taylor composition `outer(inner(z))`, truncated to the smaller degree.
    pub fn compose(outer: &Self, inner: &Self) -> Result<Self> {
        if inner.coeffs[0] != ZERO {
            return Err(Error::NonzeroInnerConstant(inner.coeffs[0].norm()));
        }
        let degree = outer.degree().min(inner.degree());
        let inner = inner.truncate(degree);
        let mut acc = Self::constant(outer.coeffs[degree], degree);
        for n in (0..degree).rev() {
            acc = acc.multiply(&inner);
            acc.coeffs[0] += outer.coeffs[n];
        }
        Ok(acc)
    }

    /// Geometric series `1 / (1 - z)` to the given degree.
    pub fn geometric(degree: usize) -> Self {
        Self {
            coeffs: vec![ONE; degree + 1],
        }
    }

    /// Maximum coefficient modulus.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

fn zip_with<F>(a: &TruncatedSeries, b: &TruncatedSeries, f: F) -> TruncatedSeries
where
    F: Fn(Complex64, Complex64) -> Complex64,
{
    let degree = a.degree().min(b.degree());
    TruncatedSeries {
        coeffs: (0..=degree).map(|n| f(a.coeffs[n], b.coeffs[n])).collect(),
    }
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: Self) -> TruncatedSeries {
        zip_with(self, rhs, |a, b| a + b)
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, rhs: Self) -> TruncatedSeries {
        zip_with(self, rhs, |a, b| a - b)
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: Self) -> TruncatedSeries {
        self.multiply(rhs)
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        self.scale(-ONE)
    }
}
