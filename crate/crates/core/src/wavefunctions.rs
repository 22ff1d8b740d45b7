//! Normalized radial eigenfunctions and their checks.
//!
//! Each state is `R(r) = C · ansatz(r) · 1F1(-n; σ; u(r))`:
//!
//! - oscillator / pseudoharmonic: `r^p exp(-γr²/2)`, `σ = p + D/2`, `u = γr²`
//! - Kratzer-Fues: `z^ν exp(-z/2)` with `z = 2εr`, `σ = 2ν + D - 1`, `u = z`
//!
//! `σ` and `u` come from the polynomial template in [`crate::specfun`]. The
//! `(-1)^n (N+2)^n (σ)_n` prefactor is dropped: `C > 0` is fixed by
//! `∫ R² r^{D-1} dr = 1`.

use thiserror::Error;

use crate::jets::{Jet, JetError};
use crate::potentials::{
    closed_form_energy, effective_exponent, gaussian_rate, potential_value, PotentialError, PotentialKind,
    PotentialSpec,
};
use crate::quadrature::{integrate_semiinfinite, QuadratureError, QuadratureSettings, TailDecay};
use crate::specfun::{hyp1f1_coefficients, AimTemplateParams, SpecfunError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WavefunctionError {
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error(transparent)]
    Specfun(#[from] SpecfunError),
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error(transparent)]
    Potential(#[from] PotentialError),
    #[error("states belong to different problems")]
    SpecMismatch,
    #[error("energy {energy} does not describe a bound Kratzer state")]
    Unbound { energy: f64 },
    #[error("need at least {needed} samples to resolve {n} nodes, got {got}")]
    TooFewSamples { n: usize, needed: usize, got: usize },
    #[error("residual points must satisfy r > 0, got {r}")]
    BadPoint { r: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Shape {
    /// `r^p exp(-γr²/2) P(γr²)`.
    Gaussian { gamma: f64 },
    /// `z^p exp(-z/2) P(z)`, `z = 2εr`.
    Coulomb { eps: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RadialState {
    pub spec: PotentialSpec,
    pub n: usize,
    pub energy: f64,
    pub exponent: f64,
    pub normalization: f64,
    shape: Shape,
    /// Coefficients of the polynomial factor in `u`, lowest first.
    poly: Vec<f64>,
}

impl RadialState {
    /// Value of the unnormalized factor product at `r >= 0`.
    fn raw(&self, r: f64) -> f64 {
        let (x, u, damp) = match self.shape {
            Shape::Gaussian { gamma } => (r, gamma * r * r, 0.5 * gamma * r * r),
            Shape::Coulomb { eps } => {
                let z = 2.0 * eps * r;
                (z, z, 0.5 * z)
            }
        };
        let p = self.poly.iter().rev().fold(0.0, |acc, c| acc * u + c);
        // x^p e^{-damp} in log form so large r underflows cleanly instead of 0·∞
        if self.exponent == 0.0 {
            p * (-damp).exp()
        } else if x == 0.0 {
            0.0
        } else {
            p * (self.exponent * x.ln() - damp).exp()
        }
    }

    /// Normalized `R(r)`.
    pub fn value(&self, r: f64) -> f64 {
        self.normalization * self.raw(r)
    }

    /// `R` as a jet about `r > 0`.
    pub fn jet(&self, r: f64, order: usize) -> Result<Jet, WavefunctionError> {
        if r <= 0.0 {
            return Err(WavefunctionError::BadPoint { r });
        }
        let rj = Jet::variable(r, order)?;
        let (x, u) = match self.shape {
            Shape::Gaussian { gamma } => (rj.clone(), rj.mul(&rj)?.scale(gamma)),
            Shape::Coulomb { eps } => {
                let z = rj.scale(2.0 * eps);
                (z.clone(), z)
            }
        };
        let damp = match self.shape {
            Shape::Gaussian { .. } => u.scale(-0.5).exp(),
            Shape::Coulomb { .. } => x.scale(-0.5).exp(),
        };
        let ansatz = x.powf(self.exponent)?.mul(&damp)?;
        Ok(ansatz.mul(&Jet::polyval(&self.poly, &u)?)?.scale(self.normalization))
    }

    /// Length scale of the state, used to map the integration range.
    pub fn extent(&self) -> f64 {
        let d = self.spec.dim as f64;
        let n = self.n as f64;
        match self.shape {
            Shape::Gaussian { gamma } => ((2.0 * n + self.exponent + 0.5 * d) / gamma).sqrt(),
            Shape::Coulomb { eps } => (2.0 * n + 2.0 * self.exponent + d) / (2.0 * eps),
        }
    }

    fn tail(&self) -> TailDecay {
        match self.shape {
            Shape::Gaussian { .. } => TailDecay::Gaussian,
            Shape::Coulomb { .. } => TailDecay::Exponential,
        }
    }
}

/// State `n` at its closed-form energy.
pub fn build_state(spec: &PotentialSpec, n: usize) -> Result<RadialState, WavefunctionError> {
    build_state_with_energy(spec, n, closed_form_energy(spec, n))
}

/// State `n` with an externally supplied energy (e.g. from the AIM engine).
///
/// For Kratzer the energy fixes `ε = sqrt(-2μE)/ħ` and so the `z` scale.
pub fn build_state_with_energy(spec: &PotentialSpec, n: usize, energy: f64) -> Result<RadialState, WavefunctionError> {
    let p = effective_exponent(spec);
    let d = spec.dim as f64;
    let t = (2.0 * p + d - 3.0) / 2.0;
    let (template, shape) = match spec.kind {
        PotentialKind::HarmonicOscillator { .. } | PotentialKind::Pseudoharmonic { .. } => {
            let gamma = gaussian_rate(spec).expect("Gaussian-tailed potential");
            (AimTemplateParams::new(0, gamma, 0.0, t)?, Shape::Gaussian { gamma })
        }
        PotentialKind::KratzerFues { .. } => {
            if !(energy < 0.0) {
                return Err(WavefunctionError::Unbound { energy });
            }
            let eps = (-energy * spec.lambda_per_energy()).sqrt();
            (AimTemplateParams::new(-1, 0.5, 0.0, t)?, Shape::Coulomb { eps })
        }
    };
    let poly = hyp1f1_coefficients(n, template.sigma)?;
    let mut state = RadialState { spec: *spec, n, energy, exponent: p, normalization: 1.0, shape, poly };
    let settings = QuadratureSettings::default().with_scale(state.extent()).with_tail(state.tail());
    let norm = integrate_semiinfinite(
        |r| {
            let v = state.raw(r);
            v * v * r.powi(spec.dim as i32 - 1)
        },
        &settings,
    )?;
    state.normalization = 1.0 / norm.value.sqrt();
    Ok(state)
}

/// `∫ R_a R_b r^{D-1} dr`.
pub fn overlap(a: &RadialState, b: &RadialState) -> Result<f64, WavefunctionError> {
    if a.spec != b.spec {
        return Err(WavefunctionError::SpecMismatch);
    }
    let settings = QuadratureSettings::default()
        .with_scale(a.extent().max(b.extent()))
        .with_tail(a.tail());
    let dim = a.spec.dim as i32;
    // orthogonal pairs integrate to ~0, so the relative tolerance alone never closes
    let settings = settings.with_tolerances(settings.rel_tol, 1e-12);
    Ok(integrate_semiinfinite(|r| a.value(r) * b.value(r) * r.powi(dim - 1), &settings)?.value)
}

/// Strict sign changes of `R` sampled on `(0, r_max)`.
pub fn count_nodes(state: &RadialState, r_max: f64, samples: usize) -> Result<usize, WavefunctionError> {
    let needed = 100 * (state.n + 1);
    if samples < needed {
        return Err(WavefunctionError::TooFewSamples { n: state.n, needed, got: samples });
    }
    let mut nodes = 0;
    let mut last = 0.0_f64;
    for i in 1..samples {
        let v = state.value(r_max * i as f64 / samples as f64);
        if v == 0.0 {
            continue;
        }
        if last != 0.0 && v.signum() != last.signum() {
            nodes += 1;
        }
        last = v;
    }
    Ok(nodes)
}

/// A radius well past the outermost classical turning point.
pub fn suggested_r_max(state: &RadialState) -> f64 {
    4.0 * state.extent()
}

/// Largest relative violation of the radial equation over `points`.
///
/// At each `r` the three terms `R''`, `(D-1)/r R'` and
/// `2μ/ħ² (E - V - ħ²ℓ(ℓ+D-2)/(2μr²)) R` are formed from an order-2 jet; the
/// residual is `|sum| / max|term|`.
pub fn ode_residual(state: &RadialState, points: &[f64]) -> Result<f64, WavefunctionError> {
    let spec = &state.spec;
    let d = spec.dim as f64;
    let k = spec.lambda_per_energy();
    let mut worst = 0.0_f64;
    for &r in points {
        let jet = state.jet(r, 2)?;
        let (val, d1, d2) = (jet.coeffs()[0], jet.coeffs()[1], 2.0 * jet.coeffs()[2]);
        let v_eff = potential_value(spec, r)? + spec.separation_constant() / (k * r * r);
        let terms = [d2, (d - 1.0) / r * d1, k * (state.energy - v_eff) * val];
        let scale = terms.iter().fold(0.0_f64, |m, t| m.max(t.abs()));
        if scale > 0.0 {
            worst = worst.max(terms.iter().sum::<f64>().abs() / scale);
        }
    }
    Ok(worst)
}

/// Evenly spread residual probe points on `(0, r_max)`, skipping the origin.
pub fn residual_points(state: &RadialState, count: usize) -> Vec<f64> {
    let r_max = 2.5 * state.extent();
    (1..=count).map(|i| r_max * i as f64 / (count + 1) as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn spec(kind: PotentialKind, dim: u32, ell: u32) -> PotentialSpec {
        PotentialSpec::natural(kind, dim, ell).unwrap()
    }

    const OSC: PotentialKind = PotentialKind::HarmonicOscillator { omega: 1.0 };

    #[test]
    fn oscillator_ground_state_constant() {
        let s = build_state(&spec(OSC, 3, 0), 0).unwrap();
        // ∫ e^{-r²} r² dr = √π/4
        let want = (4.0 / PI.sqrt()).sqrt();
        assert!((s.normalization - want).abs() <= 1e-10 * want);
        assert!((s.value(0.0) - want).abs() <= 1e-10 * want);
    }

    #[test]
    fn kratzer_ground_state_constant() {
        // A = 1, B = 0, D = 3: ε = 1, R = 2 e^{-r}
        let s = build_state(&spec(PotentialKind::KratzerFues { a: 1.0, b: 0.0 }, 3, 0), 0).unwrap();
        assert!((s.normalization - 2.0).abs() <= 1e-10);
        assert!((s.value(1.3) - 2.0 * (-1.3_f64).exp()).abs() <= 1e-10);
    }

    #[test]
    fn ground_state_polynomial_is_one() {
        for kind in [OSC, PotentialKind::Pseudoharmonic { kappa: 2.0, r_e: 1.0 }, PotentialKind::KratzerFues { a: 1.0, b: 0.5 }] {
            let s = build_state(&spec(kind, 3, 1), 0).unwrap();
            assert_eq!(s.poly, vec![1.0]);
        }
    }

    #[test]
    fn kratzer_small_r_vanishes_for_positive_exponent() {
        let s = build_state(&spec(PotentialKind::KratzerFues { a: 1.0, b: 1.0 }, 3, 0), 1).unwrap();
        assert!(s.exponent > 0.0);
        assert_eq!(s.value(0.0), 0.0);
        assert!(s.value(1e-8).abs() < 1e-6);
    }

    #[test]
    fn overlaps() {
        let sp = spec(PotentialKind::Pseudoharmonic { kappa: 1.0, r_e: 1.0 }, 3, 0);
        let states: Vec<_> = (0..4).map(|n| build_state(&sp, n).unwrap()).collect();
        assert!((overlap(&states[0], &states[0]).unwrap() - 1.0).abs() <= 1e-8);
        assert!(overlap(&states[0], &states[1]).unwrap().abs() <= 1e-8);
        assert!(overlap(&states[1], &states[3]).unwrap().abs() <= 1e-8);
        let other = build_state(&sp.with_ell(1), 0).unwrap();
        assert_eq!(overlap(&states[0], &other), Err(WavefunctionError::SpecMismatch));
    }

    #[test]
    fn node_counts() {
        let s = build_state(&spec(OSC, 3, 0), 3).unwrap();
        assert_eq!(count_nodes(&s, suggested_r_max(&s), 1000).unwrap(), 3);
        let s = build_state(&spec(PotentialKind::KratzerFues { a: 1.0, b: 0.0 }, 3, 0), 2).unwrap();
        assert_eq!(count_nodes(&s, suggested_r_max(&s), 1000).unwrap(), 2);
        let s0 = build_state(&spec(OSC, 3, 0), 0).unwrap();
        assert_eq!(count_nodes(&s0, 10.0, 100).unwrap(), 0);
        assert!(matches!(count_nodes(&s, 10.0, 50), Err(WavefunctionError::TooFewSamples { .. })));
    }

    #[test]
    fn oscillator_nodes_sit_at_laguerre_roots() {
        // 1F1(-3; 3/2; γr²) ∝ L_3^{(1/2)}(γr²); its roots bracket the sign changes
        let s = build_state(&spec(OSC, 3, 0), 3).unwrap();
        let lag = |x: f64| {
            let a = 0.5;
            -x.powi(3) / 6.0 + (a + 3.0) * x * x / 2.0 - (a + 2.0) * (a + 3.0) * x / 2.0
                + (a + 1.0) * (a + 2.0) * (a + 3.0) / 6.0
        };
        let mut roots = Vec::new();
        let mut x = 1e-3;
        while x < 15.0 {
            if lag(x) * lag(x + 1e-3) < 0.0 {
                roots.push((x + 5e-4_f64).sqrt());
            }
            x += 1e-3;
        }
        assert_eq!(roots.len(), 3);
        for r in roots {
            assert!(s.value(r - 1e-3) * s.value(r + 1e-3) < 0.0);
        }
    }

    #[test]
    fn residuals() {
        for kind in [OSC, PotentialKind::Pseudoharmonic { kappa: 4.0, r_e: 1.0 }, PotentialKind::KratzerFues { a: 1.0, b: 0.5 }] {
            for n in [0, 2] {
                let s = build_state(&spec(kind, 3, 1), n).unwrap();
                let pts = residual_points(&s, 40);
                assert!(ode_residual(&s, &pts).unwrap() <= 1e-6, "{kind:?} n={n}");
                let mut off = s.clone();
                off.energy += 0.1;
                assert!(ode_residual(&off, &pts).unwrap() > 1e-3, "{kind:?} n={n}");
            }
        }
        let s = build_state(&spec(OSC, 3, 0), 0).unwrap();
        assert!(ode_residual(&s, &[0.0]).is_err());
    }

    #[test]
    fn small_r_power_law() {
        let s = build_state(&spec(PotentialKind::Pseudoharmonic { kappa: 1.0, r_e: 1.0 }, 3, 2), 2).unwrap();
        let a = s.value(1e-4) / 1e-4_f64.powf(s.exponent);
        let b = s.value(1e-5) / 1e-5_f64.powf(s.exponent);
        assert!(a != 0.0 && ((a - b) / b).abs() < 0.01);
    }
}
