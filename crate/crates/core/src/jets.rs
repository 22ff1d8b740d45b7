//! Truncated Taylor series ("jets") of a real function about a fixed point.
//!
//! A [`Jet`] of order `K` stores `a_0..a_K` so that the represented function is
//! `Σ a_i (x - x0)^i`. Products are truncated at the smaller of the two orders,
//! and every derivative drops the order by one, so the AIM recursion has to
//! budget its order up front.

use thiserror::Error;

/// Default `|a_0|` threshold below which [`Jet::recip`] reports a pole.
pub const DEFAULT_POLE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum JetError {
    #[error("non-finite jet coefficient {value} at index {index}")]
    NonFinite { index: usize, value: f64 },
    #[error("cannot represent the identity function with an order-0 jet")]
    OrderTooLow,
    #[error("jets expanded about different points ({left} vs {right})")]
    CenterMismatch { left: f64, right: f64 },
    #[error("pole at the expansion point {center}: |a0| = {value:e} is within the pole tolerance")]
    Pole { center: f64, value: f64 },
    #[error("derivative of an order-0 jet: no derivative information left")]
    Exhausted,
    #[error("{op} requires a positive leading coefficient, got {value}")]
    Domain { op: &'static str, value: f64 },
}

/// Truncated Taylor expansion at `center`.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    center: f64,
    coeffs: Vec<f64>,
}

impl Jet {
    /// Builds a jet from raw coefficients, checking they are finite and nonempty.
    pub fn from_coeffs(center: f64, coeffs: Vec<f64>) -> Result<Self, JetError> {
        if !center.is_finite() {
            return Err(JetError::NonFinite { index: 0, value: center });
        }
        if coeffs.is_empty() {
            return Err(JetError::OrderTooLow);
        }
        if let Some((index, &value)) = coeffs.iter().enumerate().find(|(_, c)| !c.is_finite()) {
            return Err(JetError::NonFinite { index, value });
        }
        Ok(Self { center, coeffs })
    }

    /// The constant function `c`.
    pub fn constant(c: f64, order: usize, center: f64) -> Result<Self, JetError> {
        let mut coeffs = vec![0.0; order + 1];
        coeffs[0] = c;
        Self::from_coeffs(center, coeffs)
    }

    /// The identity function `x` expanded about `center`.
    pub fn variable(center: f64, order: usize) -> Result<Self, JetError> {
        if order == 0 {
            return Err(JetError::OrderTooLow);
        }
        let mut coeffs = vec![0.0; order + 1];
        coeffs[0] = center;
        coeffs[1] = 1.0;
        Self::from_coeffs(center, coeffs)
    }

    fn zeros(center: f64, order: usize) -> Self {
        Self { center, coeffs: vec![0.0; order + 1] }
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Function value at the expansion point.
    pub fn value(&self) -> f64 {
        self.coeffs[0]
    }

    /// The `k`-th derivative at the expansion point, `k! a_k`.
    pub fn derivative_at_center(&self, k: usize) -> Option<f64> {
        let a = *self.coeffs.get(k)?;
        Some(a * (1..=k).map(|i| i as f64).product::<f64>())
    }

    /// Largest coefficient magnitude.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0_f64, |m, c| m.max(c.abs()))
    }

    pub fn truncate(&self, order: usize) -> Self {
        let keep = (order + 1).min(self.coeffs.len());
        Self { center: self.center, coeffs: self.coeffs[..keep].to_vec() }
    }

    fn check_center(&self, other: &Self) -> Result<(), JetError> {
        if self.center == other.center {
            Ok(())
        } else {
            Err(JetError::CenterMismatch { left: self.center, right: other.center })
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, JetError> {
        self.check_center(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(Self { center: self.center, coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, JetError> {
        self.check_center(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(Self { center: self.center, coeffs })
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { center: self.center, coeffs: self.coeffs.iter().map(|a| a * s).collect() }
    }

    /// Adds a constant to the order-0 coefficient.
    pub fn offset(&self, c: f64) -> Self {
        let mut out = self.clone();
        out.coeffs[0] += c;
        out
    }

    /// Cauchy product truncated at the smaller order.
    pub fn mul(&self, other: &Self) -> Result<Self, JetError> {
        self.check_center(other)?;
        let len = self.coeffs.len().min(other.coeffs.len());
        let a = &self.coeffs;
        let b = &other.coeffs;
        let coeffs = (0..len)
            .map(|i| (0..=i).map(|j| a[j] * b[i - j]).sum())
            .collect();
        Ok(Self { center: self.center, coeffs })
    }

    /// `1/a` with the default pole tolerance.
    pub fn recip(&self) -> Result<Self, JetError> {
        self.recip_with_tol(DEFAULT_POLE_TOL)
    }

    pub fn recip_with_tol(&self, pole_tol: f64) -> Result<Self, JetError> {
        let a = &self.coeffs;
        if a[0].abs() <= pole_tol {
            return Err(JetError::Pole { center: self.center, value: a[0] });
        }
        let mut b = vec![0.0; a.len()];
        b[0] = 1.0 / a[0];
        for n in 1..a.len() {
            let s: f64 = (1..=n).map(|j| a[j] * b[n - j]).sum();
            b[n] = -s / a[0];
        }
        Ok(Self { center: self.center, coeffs: b })
    }

    /// d/dx, one order shorter.
    pub fn derivative(&self) -> Result<Self, JetError> {
        if self.order() == 0 {
            return Err(JetError::Exhausted);
        }
        let coeffs = self.coeffs[1..]
            .iter()
            .enumerate()
            .map(|(i, a)| (i + 1) as f64 * a)
            .collect();
        Ok(Self { center: self.center, coeffs })
    }

    pub fn exp(&self) -> Self {
        let a = &self.coeffs;
        let mut e = vec![0.0; a.len()];
        e[0] = a[0].exp();
        for n in 1..a.len() {
            let s: f64 = (1..=n).map(|j| j as f64 * a[j] * e[n - j]).sum();
            e[n] = s / n as f64;
        }
        Self { center: self.center, coeffs: e }
    }

    /// `a^p` for a jet with positive value.
    pub fn powf(&self, p: f64) -> Result<Self, JetError> {
        let a = &self.coeffs;
        if a[0] <= 0.0 {
            return Err(JetError::Domain { op: "powf", value: a[0] });
        }
        let mut b = vec![0.0; a.len()];
        b[0] = a[0].powf(p);
        for n in 1..a.len() {
            let s: f64 = (1..=n)
                .map(|j| (p * j as f64 - (n - j) as f64) * a[j] * b[n - j])
                .sum();
            b[n] = s / (n as f64 * a[0]);
        }
        Ok(Self { center: self.center, coeffs: b })
    }

    /// Evaluates `Σ c_j u^j` (Horner) for a jet `u`.
    pub fn polyval(poly: &[f64], u: &Self) -> Result<Self, JetError> {
        let mut acc = Self::zeros(u.center, u.order());
        for &c in poly.iter().rev() {
            acc = acc.mul(u)?.offset(c);
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn jet(center: f64, c: &[f64]) -> Jet {
        Jet::from_coeffs(center, c.to_vec()).unwrap()
    }

    #[test]
    fn constants_and_variables() {
        assert_eq!(Jet::constant(5.0, 2, 1.0).unwrap().coeffs(), &[5.0, 0.0, 0.0]);
        assert_eq!(Jet::constant(0.0, 0, 0.0).unwrap().coeffs(), &[0.0]);
        assert_eq!(Jet::constant(1.0, 3, 2.0).unwrap().coeffs(), &[1.0, 0.0, 0.0, 0.0]);
        assert!(matches!(Jet::constant(f64::NAN, 1, 0.0), Err(JetError::NonFinite { .. })));

        assert_eq!(Jet::variable(2.0, 3).unwrap().coeffs(), &[2.0, 1.0, 0.0, 0.0]);
        assert_eq!(Jet::variable(0.0, 1).unwrap().coeffs(), &[0.0, 1.0]);
        assert_eq!(Jet::variable(-1.5, 2).unwrap().coeffs(), &[-1.5, 1.0, 0.0]);
        assert_eq!(Jet::variable(1.0, 0), Err(JetError::OrderTooLow));
    }

    #[test]
    fn arithmetic_examples() {
        let a = jet(0.0, &[1.0, 1.0]);
        assert_eq!(a.mul(&a).unwrap().coeffs(), &[1.0, 2.0]);

        let b = jet(0.5, &[3.0, -1.0, 2.0]);
        let one = Jet::constant(1.0, 2, 0.5).unwrap();
        assert_eq!(one.mul(&b).unwrap(), b);

        let sum = jet(0.0, &[1.0, 2.0, 3.0]).add(&jet(0.0, &[0.0, 0.0, 1.0])).unwrap();
        assert_eq!(sum.coeffs(), &[1.0, 2.0, 4.0]);

        // mixed orders truncate to the shorter
        let short = jet(0.0, &[1.0, 1.0]);
        let long = jet(0.0, &[1.0, 2.0, 3.0]);
        assert_eq!(short.mul(&long).unwrap().order(), 1);
        assert_eq!(short.add(&long).unwrap().coeffs(), &[2.0, 3.0]);
    }

    #[test]
    fn mismatched_centers_rejected() {
        let a = jet(0.0, &[1.0]);
        let b = jet(1.0, &[1.0]);
        assert!(matches!(a.add(&b), Err(JetError::CenterMismatch { .. })));
        assert!(matches!(a.mul(&b), Err(JetError::CenterMismatch { .. })));
    }

    #[test]
    fn reciprocal_examples() {
        let x = Jet::variable(2.0, 2).unwrap();
        assert_eq!(x.recip().unwrap().coeffs(), &[0.5, -0.25, 0.125]);
        let c = Jet::constant(4.0, 2, 0.0).unwrap();
        assert_eq!(c.recip().unwrap().coeffs(), &[0.25, 0.0, 0.0]);
        let origin = Jet::variable(0.0, 2).unwrap();
        assert!(matches!(origin.recip(), Err(JetError::Pole { .. })));
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(jet(0.0, &[1.0, 2.0, 3.0]).derivative().unwrap().coeffs(), &[2.0, 6.0]);
        let d = Jet::variable(2.0, 3).unwrap().derivative().unwrap();
        assert_eq!(d.coeffs(), &[1.0, 0.0, 0.0]);
        let d = Jet::constant(7.0, 4, 1.0).unwrap().derivative().unwrap();
        assert_eq!(d.coeffs(), &[0.0; 4]);
        assert_eq!(jet(0.0, &[3.0]).derivative(), Err(JetError::Exhausted));
    }

    #[test]
    fn exp_and_powf_match_closed_forms() {
        // exp(x) about 1: e * [1, 1, 1/2, 1/6]
        let e = Jet::variable(1.0, 3).unwrap().exp();
        let want = [1.0, 1.0, 0.5, 1.0 / 6.0].map(|c| c * std::f64::consts::E);
        for (a, b) in e.coeffs().iter().zip(want) {
            assert!((a - b).abs() < 1e-14);
        }
        // x^{1/2} about 4: [2, 1/4, -1/64]
        let s = Jet::variable(4.0, 2).unwrap().powf(0.5).unwrap();
        assert!((s.coeffs()[0] - 2.0).abs() < 1e-15);
        assert!((s.coeffs()[1] - 0.25).abs() < 1e-15);
        assert!((s.coeffs()[2] + 1.0 / 64.0).abs() < 1e-15);
        assert!(Jet::variable(0.0, 2).unwrap().powf(0.5).is_err());
    }

    #[test]
    fn polyval_matches_direct_evaluation() {
        // 1 - 2u + 3u^2 at u = x about 2
        let u = Jet::variable(2.0, 3).unwrap();
        let p = Jet::polyval(&[1.0, -2.0, 3.0], &u).unwrap();
        assert_eq!(p.coeffs(), &[9.0, 10.0, 3.0, 0.0]);
        assert_eq!(p.derivative_at_center(2), Some(6.0));
    }

    fn coeffs_strategy(len: usize) -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(-2.0..2.0_f64, len)
    }

    fn close(a: &Jet, b: &Jet, tol: f64) -> bool {
        let scale = a.max_abs().max(b.max_abs()).max(1.0);
        a.coeffs().iter().zip(b.coeffs()).all(|(x, y)| (x - y).abs() <= tol * scale)
    }

    proptest! {
        #[test]
        fn mul_commutes_and_associates(a in coeffs_strategy(6), b in coeffs_strategy(6), c in coeffs_strategy(6)) {
            let (a, b, c) = (jet(0.3, &a), jet(0.3, &b), jet(0.3, &c));
            prop_assert!(close(&a.mul(&b).unwrap(), &b.mul(&a).unwrap(), 1e-12));
            let left = a.mul(&b).unwrap().mul(&c).unwrap();
            let right = a.mul(&b.mul(&c).unwrap()).unwrap();
            prop_assert!(close(&left, &right, 1e-12));
        }

        #[test]
        fn leibniz_rule(a in coeffs_strategy(7), b in coeffs_strategy(7)) {
            let (a, b) = (jet(-1.0, &a), jet(-1.0, &b));
            let lhs = a.mul(&b).unwrap().derivative().unwrap();
            let rhs = a.derivative().unwrap().mul(&b).unwrap()
                .add(&a.mul(&b.derivative().unwrap()).unwrap()).unwrap();
            prop_assert!(close(&lhs, &rhs, 1e-12));
        }

        #[test]
        fn reciprocal_inverts(mut c in coeffs_strategy(6), lead in 0.5..3.0_f64, sign in prop::bool::ANY) {
            c[0] = if sign { lead } else { -lead };
            let a = jet(2.0, &c);
            let prod = a.mul(&a.recip().unwrap()).unwrap();
            let one = Jet::constant(1.0, 5, 2.0).unwrap();
            prop_assert!(close(&prod, &one, 1e-10));
        }

        #[test]
        fn order_zero_is_pointwise(a in coeffs_strategy(4), b in coeffs_strategy(4)) {
            let (ja, jb) = (jet(0.0, &a), jet(0.0, &b));
            prop_assert_eq!(ja.mul(&jb).unwrap().value(), a[0] * b[0]);
            prop_assert_eq!(ja.add(&jb).unwrap().value(), a[0] + b[0]);
            if a[0].abs() > 1e-6 {
                prop_assert_eq!(ja.recip().unwrap().value(), 1.0 / a[0]);
            }
        }
    }
}
