//! Pochhammer symbols and terminating hypergeometric sums.
//!
//! Polynomial solutions of
//!
//! ```text
//! y'' = 2(a x^{N+1}/(1 - b x^{N+2}) - (t+1)/x) y' - w x^N/(1 - b x^{N+2}) y
//! ```
//!
//! are `(-1)^n (N+2)^n (σ)_n 2F1(-n, ρ+n; σ; b x^{N+2})` with
//! `σ = (2t+N+3)/(N+2)` and `ρ = ((2t+1)b + 2a)/((N+2)b)`. At `b = 0` the
//! Gauss sum degenerates to `1F1(-n; σ; 2a x^{N+2}/(N+2))`.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecfunError {
    #[error("lower parameter {c} hits a non-positive integer within the first {n} terms")]
    ForbiddenParameter { c: f64, n: usize },
    #[error("template needs N >= -1, got {0}")]
    InvalidOrder(i32),
}

/// Rising factorial `σ(σ+1)…(σ+n-1)`.
pub fn pochhammer(sigma: f64, n: usize) -> f64 {
    (0..n).fold(1.0, |acc, j| acc * (sigma + j as f64))
}

fn check_lower(c: f64, n: usize) -> Result<(), SpecfunError> {
    // (c)_j for j < n appears in a denominator
    if (0..n).any(|j| c + j as f64 == 0.0) {
        Err(SpecfunError::ForbiddenParameter { c, n })
    } else {
        Ok(())
    }
}

/// Power-series coefficients of `1F1(-n; c; z)`, lowest first.
pub fn hyp1f1_coefficients(n: usize, c: f64) -> Result<Vec<f64>, SpecfunError> {
    check_lower(c, n)?;
    let mut out = Vec::with_capacity(n + 1);
    let mut term = 1.0;
    out.push(term);
    for j in 0..n {
        let j = j as f64;
        term *= (j - n as f64) / ((c + j) * (j + 1.0));
        out.push(term);
    }
    Ok(out)
}

/// `1F1(-n; c; z)`, summed by forward term ratios.
///
/// Terms alternate in sign and can exceed the sum by many orders of
/// magnitude near a zero of the polynomial, so the recurrence and the sum are
/// carried in double-double precision.
pub fn hyp1f1_terminating(n: usize, c: f64, z: f64) -> Result<f64, SpecfunError> {
    check_lower(c, n)?;
    Ok(terminating_sum(n, None, c, z))
}

/// `2F1(-n, ρ+n; σ; y)`.
pub fn hyp2f1_terminating(n: usize, rho: f64, sigma: f64, y: f64) -> Result<f64, SpecfunError> {
    check_lower(sigma, n)?;
    Ok(terminating_sum(n, Some(rho), sigma, y))
}

/// `Σ_j (-n)_j [(ρ+n)_j] / ((c)_j j!) z^j`; the bracket only when `rho` is given.
fn terminating_sum(n: usize, rho: Option<f64>, c: f64, z: f64) -> f64 {
    let mut term = Dd::from(1.0);
    let mut sum = Dd::from(1.0);
    let upper = rho.map(|r| Dd::sum(r, n as f64));
    for j in 0..n {
        let jf = j as f64;
        let mut num = Dd::from(jf - n as f64).mul_f64(z);
        if let Some(u) = upper {
            num = num.mul(u.add_f64(jf));
        }
        let den = Dd::sum(c, jf).mul_f64(jf + 1.0);
        term = term.mul(num).div(den);
        sum = sum.add(term);
    }
    sum.hi + sum.lo
}

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`.
#[derive(Debug, Clone, Copy)]
struct Dd {
    hi: f64,
    lo: f64,
}

impl From<f64> for Dd {
    fn from(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }
}

impl Dd {
    fn two_sum(a: f64, b: f64) -> Self {
        let s = a + b;
        let v = s - a;
        Self { hi: s, lo: (a - (s - v)) + (b - v) }
    }

    fn quick(a: f64, b: f64) -> Self {
        let s = a + b;
        Self { hi: s, lo: b - (s - a) }
    }

    /// Exact `a + b`.
    fn sum(a: f64, b: f64) -> Self {
        Self::two_sum(a, b)
    }

    fn add(self, o: Self) -> Self {
        let s = Self::two_sum(self.hi, o.hi);
        let t = Self::two_sum(self.lo, o.lo);
        let u = Self::quick(s.hi, s.lo + t.hi);
        Self::quick(u.hi, u.lo + t.lo)
    }

    fn add_f64(self, b: f64) -> Self {
        let s = Self::two_sum(self.hi, b);
        Self::quick(s.hi, s.lo + self.lo)
    }

    fn mul(self, o: Self) -> Self {
        let p = self.hi * o.hi;
        let e = self.hi.mul_add(o.hi, -p);
        Self::quick(p, e + (self.hi * o.lo + self.lo * o.hi))
    }

    fn mul_f64(self, b: f64) -> Self {
        let p = self.hi * b;
        let e = self.hi.mul_add(b, -p);
        Self::quick(p, e + self.lo * b)
    }

    fn div(self, o: Self) -> Self {
        let q1 = self.hi / o.hi;
        let r = self.add(o.mul_f64(-q1));
        let q2 = r.hi / o.hi;
        let r = r.add(o.mul_f64(-q2));
        let q3 = r.hi / o.hi;
        Self::quick(q1, q2).add_f64(q3)
    }
}

/// Parameters of the polynomial template above.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AimTemplateParams {
    pub order: i32,
    pub a: f64,
    pub b: f64,
    pub t: f64,
    pub sigma: f64,
    pub rho: f64,
    pub w: f64,
}

impl AimTemplateParams {
    /// Derives `σ` and `ρ` from `(N, a, b, t)`; `ρ` is infinite when `b = 0`.
    pub fn new(order: i32, a: f64, b: f64, t: f64) -> Result<Self, SpecfunError> {
        if order < -1 {
            return Err(SpecfunError::InvalidOrder(order));
        }
        let m = (order + 2) as f64;
        let sigma = (2.0 * t + order as f64 + 3.0) / m;
        let rho = if b == 0.0 { f64::INFINITY } else { ((2.0 * t + 1.0) * b + 2.0 * a) / (m * b) };
        Ok(Self { order, a, b, t, sigma, rho, w: 0.0 })
    }

    pub fn with_w(self, w: f64) -> Self {
        Self { w, ..self }
    }

    /// `N + 2`, the power of `x` carried by the polynomial variable.
    pub fn degree_power(&self) -> f64 {
        (self.order + 2) as f64
    }

    /// `(-1)^n (N+2)^n (σ)_n`.
    pub fn prefactor(&self, n: usize) -> f64 {
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        sign * self.degree_power().powi(n as i32) * pochhammer(self.sigma, n)
    }

    /// Argument `u` of the `1F1` reached at `b = 0`: `u = 2a x^{N+2}/(N+2)`.
    pub fn confluent_argument(&self, x: f64) -> f64 {
        2.0 * self.a * x.powf(self.degree_power()) / self.degree_power()
    }
}

/// `U_n(x)` of the template with unit integration constant.
pub fn aim_polynomial(params: &AimTemplateParams, n: usize, x: f64) -> Result<f64, SpecfunError> {
    let sum = if params.b == 0.0 {
        hyp1f1_terminating(n, params.sigma, params.confluent_argument(x))?
    } else {
        let y = params.b * x.powf(params.degree_power());
        hyp2f1_terminating(n, params.rho, params.sigma, y)?
    };
    Ok(params.prefactor(n) * sum)
}
