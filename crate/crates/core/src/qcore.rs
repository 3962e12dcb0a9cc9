//! q-calculus primitives: brackets, factorials, the q-gamma, q-beta and
//! q-binomial functions, the q-derivative and the Jackson q-integral.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::series::{TruncatedSeries, DEFAULT_DEGREE};

/// Terms of the q-gamma product closer to 1 than this are dropped.
const GAMMA_PRODUCT_EPS: f64 = 1e-16;
const GAMMA_PRODUCT_CAP: usize = 1_000_000;

/// Relative size below which a Jackson-sum term ends the summation.
const JACKSON_EPS: f64 = 1e-16;
const JACKSON_CAP: usize = 100_000;

/// The deformation parameter `q` in `(0, 1)` with an eagerly built table of
/// integer brackets `[n]_q` and factorials `[n]_q!`.
///
/// The table is immutable after construction, so a context can be shared
/// freely between threads.
#[derive(Debug, Clone, PartialEq)]
pub struct QContext {
    q: f64,
    ln_q: f64,
    brackets: Vec<f64>,
    factorials: Vec<f64>,
}

impl QContext {
    pub fn new(q: f64) -> Result<Self> {
        Self::with_degree(q, 2 * DEFAULT_DEGREE)
    }

    /// Context whose cache covers `[n]_q` for `n <= degree`.
    pub fn with_degree(q: f64, degree: usize) -> Result<Self> {
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::Domain {
                name: "q",
                value: q,
                reason: "must lie strictly between 0 and 1",
            });
        }
        let mut brackets = Vec::with_capacity(degree + 1);
        let mut factorials = Vec::with_capacity(degree + 1);
        brackets.push(0.0);
        factorials.push(1.0);
        for n in 1..=degree {
            let b = 1.0 + q * brackets[n - 1];
            brackets.push(b);
            factorials.push(factorials[n - 1] * b);
        }
        Ok(Self {
            q,
            ln_q: q.ln(),
            brackets,
            factorials,
        })
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn cached_degree(&self) -> usize {
        self.brackets.len() - 1
    }

    /// `q^x` for real `x`.
    pub fn pow(&self, x: f64) -> f64 {
        (x * self.ln_q).exp()
    }

    /// The q-number `[x]_q = (1 - q^x) / (1 - q)` for real `x`.
    pub fn bracket(&self, x: f64) -> f64 {
        -(x * self.ln_q).exp_m1() / (1.0 - self.q)
    }

    /// `[n]_q` for integer `n`, read from the cache when possible.
    pub fn bracket_int(&self, n: usize) -> f64 {
        match self.brackets.get(n) {
            Some(&b) => b,
            None => self.bracket(n as f64),
        }
    }

    /// `[n]_q! = [n]_q [n-1]_q ... [1]_q`, with `[0]_q! = 1`.
    pub fn factorial(&self, n: usize) -> f64 {
        match self.factorials.get(n) {
            Some(&f) => f,
            None => {
                let top = self.cached_degree();
                (top + 1..=n).fold(self.factorials[top], |acc, m| acc * self.bracket(m as f64))
            }
        }
    }

    /// `ln Gamma_q(x)` for real `x > 0` from the product
    /// `Gamma_q(x) = (1-q)^{1-x} prod_{n>=0} (1 - q^{n+1}) / (1 - q^{x+n})`.
    ///
    /// Each factor is written as `1 + q^n d / (1 - q^{x+n})` with
    /// `d = q^x - q`, which keeps the logarithm of factors near 1 accurate.
    /// The number of factors grows like `37 / (1 - q)`; accuracy degrades
    /// slowly as `q -> 1`.
    pub fn ln_gamma(&self, x: f64) -> Result<f64> {
        if !(x > 0.0) || !x.is_finite() {
            return Err(Error::Domain {
                name: "x",
                value: x,
                reason: "q-gamma needs a positive finite argument",
            });
        }
        let d = self.q * ((x - 1.0) * self.ln_q).exp_m1();
        let mut acc = (1.0 - x) * (-self.q).ln_1p();
        let mut qn = 1.0;
        for n in 0..GAMMA_PRODUCT_CAP {
            let denom = -((x + n as f64) * self.ln_q).exp_m1();
            let delta = qn * d / denom;
            if delta.abs() < GAMMA_PRODUCT_EPS {
                return Ok(acc);
            }
            acc += delta.ln_1p();
            qn *= self.q;
        }
        Err(Error::Convergence {
            what: "q-gamma product",
            iterations: GAMMA_PRODUCT_CAP,
            residual: qn * d.abs(),
        })
    }

    pub fn gamma(&self, x: f64) -> Result<f64> {
        self.ln_gamma(x).map(f64::exp)
    }

    /// `B_q(t, s) = Gamma_q(t) Gamma_q(s) / Gamma_q(t + s)`.
    pub fn beta(&self, t: f64, s: f64) -> Result<f64> {
        Ok((self.ln_gamma(t)? + self.ln_gamma(s)? - self.ln_gamma(t + s)?).exp())
    }

    /// Gauss q-binomial `[n]_q! / ([k]_q! [n-k]_q!)`, evaluated as the
    /// product `prod_{i=1}^{k} [n-k+i]_q / [i]_q`.
    pub fn binomial(&self, n: usize, k: usize) -> Result<f64> {
        if k > n {
            return Err(Error::Domain {
                name: "k",
                value: k as f64,
                reason: "q-binomial needs k <= n",
            });
        }
        let k = k.min(n - k);
        Ok((1..=k).fold(1.0, |acc, i| {
            acc * self.bracket_int(n - k + i) / self.bracket_int(i)
        }))
    }

    /// q-binomial with real arguments through q-gamma values:
    /// `Gamma_q(a+1) / (Gamma_q(b+1) Gamma_q(a-b+1))`.
    pub fn binomial_real(&self, a: f64, b: f64) -> Result<f64> {
        Ok((self.ln_gamma(a + 1.0)? - self.ln_gamma(b + 1.0)? - self.ln_gamma(a - b + 1.0)?).exp())
    }
}

/// q-derivative of a series: coefficient `n - 1` of the result is
/// `[n]_q a_n`. The degree drops by one.
pub fn q_derivative_series(f: &TruncatedSeries, ctx: &QContext) -> TruncatedSeries {
    let n = f.degree();
    if n == 0 {
        return TruncatedSeries::zero(0);
    }
    TruncatedSeries::new((1..=n).map(|m| f.coeff(m) * ctx.bracket_int(m)).collect())
}

/// Pointwise q-derivative `(F(z) - F(qz)) / ((1 - q) z)`.
///
/// At `z = 0` the difference quotient is undefined and `at_zero` (the
/// ordinary derivative `F'(0)`) is returned instead.
pub fn q_derivative_point<F>(f: F, z: Complex64, at_zero: Complex64, ctx: &QContext) -> Complex64
where
    F: Fn(Complex64) -> Complex64,
{
    if z == Complex64::new(0.0, 0.0) {
        return at_zero;
    }
    (f(z) - f(z * ctx.q)) / (z * (1.0 - ctx.q))
}

/// Termwise Jackson integral `int_0^z f(t) d_q t`: coefficient `n + 1` of
/// the result is `a_n / [n+1]_q`. The degree grows by one.
pub fn jackson_integral_series(f: &TruncatedSeries, ctx: &QContext) -> TruncatedSeries {
    let mut coeffs = Vec::with_capacity(f.degree() + 2);
    coeffs.push(Complex64::new(0.0, 0.0));
    coeffs.extend(
        f.coeffs()
            .iter()
            .enumerate()
            .map(|(n, &a)| a / ctx.bracket_int(n + 1)),
    );
    TruncatedSeries::new(coeffs)
}

/// Jackson sum `x (1 - q) sum_{j>=0} q^j f(x q^j)`, stopped once a term
/// falls below `1e-16` of the partial sum.
pub fn jackson_integral_point<F>(f: F, x: Complex64, ctx: &QContext) -> Result<Complex64>
where
    F: Fn(Complex64) -> Complex64,
{
    let mut sum = Complex64::new(0.0, 0.0);
    let mut qj = 1.0;
    for j in 0..JACKSON_CAP {
        let term = f(x * qj) * qj;
        sum += term;
        if j >= 2 && term.norm() <= JACKSON_EPS * sum.norm() {
            return Ok(sum * x * (1.0 - ctx.q));
        }
        qj *= ctx.q;
    }
    Err(Error::Convergence {
        what: "Jackson sum",
        iterations: JACKSON_CAP,
        residual: qj,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(q: f64) -> QContext {
        QContext::new(q).unwrap()
    }

    #[test]
    fn rejects_q_outside_unit_interval() {
        for q in [0.0, 1.0, -0.2, 1.5, f64::NAN] {
            assert!(QContext::new(q).is_err(), "q = {q}");
        }
    }

    #[test]
    fn bracket_values() {
        let c = ctx(0.5);
        assert_eq!(c.bracket(1.0), 1.0);
        assert_eq!(c.bracket(0.0), 0.0);
        assert!((c.bracket(2.0) - 1.5).abs() < 1e-15);
        for n in 0..40 {
            assert!((c.bracket_int(n) - c.bracket(n as f64)).abs() < 1e-14);
        }
    }

    #[test]
    fn bracket_tends_to_n() {
        // n - [n]_q lies between 0 and n(n-1)(1-q)/2
        let c = ctx(0.9999);
        for n in 0..=20 {
            let gap = n as f64 - c.bracket_int(n);
            assert!(gap >= 0.0 && gap <= (n * n.saturating_sub(1)) as f64 * 0.5e-4 + 1e-12);
            if n <= 10 {
                assert!(gap < 5e-3);
            }
        }
    }

    #[test]
    fn factorial_values() {
        let c = ctx(0.5);
        assert_eq!(c.factorial(0), 1.0);
        assert!((c.factorial(2) - 1.5).abs() < 1e-15);
        // [3]_q [2]_q [1]_q = 1.75 * 1.5 * 1
        assert!((c.factorial(3) - 2.625).abs() < 1e-15);
    }

    #[test]
    fn gamma_integer_values_are_factorials() {
        for q in [0.3, 0.5, 0.9] {
            let c = ctx(q);
            assert_eq!(c.gamma(1.0).unwrap(), 1.0);
            for n in 0..12 {
                let g = c.gamma(n as f64 + 1.0).unwrap();
                let f = c.factorial(n);
                assert!((g - f).abs() <= 1e-12 * f, "q = {q}, n = {n}: {g} vs {f}");
            }
        }
    }

    #[test]
    fn gamma_half_recurrence() {
        let c = ctx(0.9);
        let v = c.gamma(0.5).unwrap();
        let next = c.gamma(1.5).unwrap();
        assert!((next - c.bracket(0.5) * v).abs() < 1e-12);
    }

    #[test]
    fn gamma_rejects_nonpositive() {
        let c = ctx(0.5);
        assert!(c.gamma(0.0).is_err());
        assert!(c.gamma(-1.5).is_err());
    }

    #[test]
    fn beta_values() {
        let c = ctx(0.5);
        assert!((c.beta(1.0, 1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((c.beta(2.0, 1.0).unwrap() - 2.0 / 3.0).abs() < 1e-14);
        assert!(c.beta(0.0, 1.0).is_err());
    }

    #[test]
    fn binomial_values() {
        let c = ctx(0.5);
        for n in 0..10 {
            assert_eq!(c.binomial(n, 0).unwrap(), 1.0);
            assert!((c.binomial(n, n).unwrap() - 1.0).abs() < 1e-15);
        }
        assert!((c.binomial(2, 1).unwrap() - 1.5).abs() < 1e-15);
        assert!(c.binomial(2, 3).is_err());
        // integer arguments through the q-gamma route
        let via_gamma = c.binomial_real(7.0, 3.0).unwrap();
        assert!((via_gamma - c.binomial(7, 3).unwrap()).abs() < 1e-12 * via_gamma);
    }

    #[test]
    fn derivative_of_monomials() {
        let c = ctx(0.5);
        let z = TruncatedSeries::identity(1);
        assert_eq!(
            q_derivative_series(&z, &c),
            TruncatedSeries::from_real(&[1.0])
        );
        let f = TruncatedSeries::from_real(&[0.0, 1.0, 1.0]);
        let d = q_derivative_series(&f, &c);
        assert_eq!(d, TruncatedSeries::from_real(&[1.0, 1.5]));
    }

    #[test]
    fn pointwise_derivative_small_cases() {
        let c = ctx(0.5);
        let one = Complex64::new(1.0, 0.0);
        let z = Complex64::new(0.3, -0.7);
        assert!((q_derivative_point(|w| w, z, one, &c) - one).norm() < 1e-15);
        let v = q_derivative_point(|w| w * w, one, Complex64::new(0.0, 0.0), &c);
        assert!((v - Complex64::new(1.5, 0.0)).norm() < 1e-15);
        assert_eq!(
            q_derivative_point(|w| w, Complex64::new(0.0, 0.0), one, &c),
            one
        );
    }

    #[test]
    fn jackson_of_monomials() {
        let c = ctx(0.5);
        assert_eq!(
            jackson_integral_series(&TruncatedSeries::from_real(&[1.0]), &c),
            TruncatedSeries::from_real(&[0.0, 1.0])
        );
        let z3 = TruncatedSeries::from_real(&[0.0, 0.0, 0.0, 1.0]);
        let j = jackson_integral_series(&z3, &c);
        assert!((j.coeff(4).re - 1.0 / c.bracket(4.0)).abs() < 1e-15);
    }

    #[test]
    fn jackson_sum_matches_termwise_integral() {
        let c = ctx(0.6);
        let f = TruncatedSeries::new(vec![
            Complex64::new(0.2, 0.1),
            Complex64::new(1.0, 0.0),
            Complex64::new(-0.3, 0.5),
            Complex64::new(0.4, 0.0),
        ]);
        let x = Complex64::new(0.4, 0.3);
        let pointwise = jackson_integral_point(|t| f.evaluate(t), x, &c).unwrap();
        let series = jackson_integral_series(&f, &c).evaluate(x);
        assert!((pointwise - series).norm() < 1e-14);
    }
}
