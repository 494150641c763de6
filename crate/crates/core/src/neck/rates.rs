use std::fmt;
use std::str::FromStr;

use super::{linear_fit, quadrature, require, NeckError};

/// `floor(1/delta)`, nudged so that `delta = 1/n` lands on `n` despite rounding.
pub(crate) fn mode_cutoff(delta: f64) -> u64 {
    (1.0 / delta * (1.0 + 1e-12)).floor() as u64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IndexReport {
    pub cutoff: u64,
    pub index: i64,
    /// Two orthogonality constraints per fiber mode `|ell| <= L`.
    pub constraints: u64,
}

/// Index `-(4L + 2)` of the torus-neck Dirac operator with the APS-type
/// conditions across the mode cutoff `L = floor(1/delta)`.
pub fn index_3d(delta: f64) -> Result<IndexReport, NeckError> {
    require(delta > 0.0 && delta <= 1.0, "delta must lie in (0, 1]")?;
    let cutoff = mode_cutoff(delta);
    Ok(IndexReport { cutoff, index: -(4 * cutoff as i64 + 2), constraints: 2 * (2 * cutoff + 1) })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// Conformal stretch of a spinor's end, parameter `T`.
    SpinorNeckStretch,
    /// 1-form gluing across a pinching spherical neck, parameter `delta`.
    OneformPinch,
    /// Spinor gluing across a pinching torus neck, parameter `delta`.
    TorusPinch,
}

impl Regime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::SpinorNeckStretch => "spinor_neck_stretch",
            Regime::OneformPinch => "oneform_pinch",
            Regime::TorusPinch => "torus_pinch",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Regime {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "spinor_neck_stretch" => Ok(Regime::SpinorNeckStretch),
            "oneform_pinch" => Ok(Regime::OneformPinch),
            "torus_pinch" => Ok(Regime::TorusPinch),
            _ => Err(format!("unknown regime {s:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorRatePrediction {
    pub regime: Regime,
    pub parameter: f64,
    pub mu: f64,
    /// Bound with the constant set to 1.
    pub predicted_norm_bound: f64,
    /// False when the bound does not tend to zero in this weight.
    pub vanishes: bool,
}

/// Predicted size of the approximate-solution error: `1/T`,
/// `delta^{1 - mu}`, or `delta^{-mu/2} / log(1/delta)`.
pub fn error_rate(regime: Regime, parameter: f64, mu: f64) -> Result<ErrorRatePrediction, NeckError> {
    require(mu.is_finite(), "weight must be finite")?;
    let (bound, vanishes) = match regime {
        Regime::SpinorNeckStretch => {
            require(parameter.is_finite() && parameter > 0.0, "T must be positive")?;
            (1.0 / parameter, true)
        }
        Regime::OneformPinch => {
            require(parameter > 0.0 && parameter < 1.0, "delta must lie in (0, 1)")?;
            (parameter.powf(1.0 - mu), mu < 1.0)
        }
        Regime::TorusPinch => {
            require(parameter > 0.0 && parameter < 1.0, "delta must lie in (0, 1)")?;
            (parameter.powf(-0.5 * mu) / (1.0 / parameter).ln(), mu <= 0.0)
        }
    };
    Ok(ErrorRatePrediction { regime, parameter, mu, predicted_norm_bound: bound, vanishes })
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateFit {
    pub regime: Regime,
    pub mu: f64,
    /// Exponent of the predicted bound in its parameter.
    pub predicted_exponent: f64,
    /// Exponent fitted to the model integrand.
    pub fitted_exponent: f64,
    pub r2: f64,
    /// `(parameter, measured quantity)` pairs behind the fit.
    pub samples: Vec<(f64, f64)>,
}

/// Smooth step from 1 on `(-inf, 0]` to 0 on `[1, inf)`.
fn smooth_step(t: f64) -> f64 {
    let psi = |x: f64| if x > 0.0 { (-1.0 / x).exp() } else { 0.0 };
    let (a, b) = (psi(1.0 - t), psi(t));
    a / (a + b)
}

/// Parameter sweeps used by [`error_rate_fit`].
pub fn default_sweep(regime: Regime) -> Vec<f64> {
    match regime {
        Regime::SpinorNeckStretch => (0..8).map(|j| 10.0 * 2f64.powi(j)).collect(),
        Regime::OneformPinch => (0..11).map(|j| 1e-3 * 0.5f64.powi(j)).collect(),
        Regime::TorusPinch => (100..=140).map(|j| 0.5f64.powi(j)).collect(),
    }
}

/// Fits the scaling exponent of the model error integrand over `params`.
///
/// * neck stretch: `sup |d/ds chi(s/T - 2T)|` against `T`;
/// * 1-form pinch: `4 pi int_{delta}^{2 delta} (delta^-2 + 1) <rho>^{-2 mu} dV`
///   with `<rho>^2 = rho^2 + delta^2`, the squared norm, against `delta`;
/// * torus pinch: `log(1/delta)` times the norm of a log cutoff with
///   `|d chi| = 1/(log(1/delta) rho)` on `[delta^{3/4}, delta^{1/2}]`, against
///   `delta`.
pub fn error_rate_fit(regime: Regime, mu: f64, params: &[f64]) -> Result<RateFit, NeckError> {
    require(params.len() >= 3, "need at least three parameter values")?;
    let mut samples = Vec::with_capacity(params.len());
    for &t in params {
        error_rate(regime, t, mu)?;
        let value = match regime {
            Regime::SpinorNeckStretch => {
                let h = 1e-4;
                let chi = |s: f64| smooth_step(s / t - 2.0 * t);
                let start = 2.0 * t * t;
                (0..=2000)
                    .map(|j| {
                        let s = start + t * j as f64 / 2000.0;
                        ((chi(s + h) - chi(s - h)) / (2.0 * h)).abs()
                    })
                    .fold(0.0, f64::max)
            }
            Regime::OneformPinch => {
                let f = |rho: f64| {
                    let b2 = rho * rho + t * t;
                    (1.0 / (t * t) + 1.0) * b2.powf(-mu) * b2
                };
                4.0 * std::f64::consts::PI * quadrature::integrate(f, t, 2.0 * t, 1e-12)?
            }
            Regime::TorusPinch => {
                // rho = e^u: int rho^{-1-2 mu} d rho = int e^{-2 mu u} du.
                let log_d = t.ln();
                let inner = quadrature::integrate(|u: f64| (-2.0 * mu * u).exp(), 0.75 * log_d, 0.5 * log_d, 1e-12)?;
                let log_inv = -log_d;
                (inner / (log_inv * log_inv)).sqrt() * log_inv
            }
        };
        samples.push((t, value));
    }
    let (x, y): (Vec<f64>, Vec<f64>) = samples.iter().map(|(t, v)| (t.ln(), v.ln())).unzip();
    let (fitted, _, r2) = linear_fit(&x, &y);
    let predicted_exponent = match regime {
        Regime::SpinorNeckStretch => -1.0,
        Regime::OneformPinch => 1.0 - mu,
        Regime::TorusPinch => -0.5 * mu,
    };
    Ok(RateFit { regime, mu, predicted_exponent, fitted_exponent: fitted, r2, samples })
}
