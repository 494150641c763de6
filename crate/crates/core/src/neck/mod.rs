//! Model necks where the singular set is resolved: spectral flow of the
//! 2-dimensional Dirac operator on `R x S^1`, its mode ODE and finite
//! cylinder boundary problems, the Bessel modes of the 3-dimensional neck,
//! and the S^2 neck used for 1-forms.

mod bessel;
mod bvp;
mod cokernel;
mod flow;
mod ode;
mod quadrature;
mod rates;
mod s2;

pub use bessel::{bessel_i_scaled, bessel_mode_solution, bessel_residual, BesselSample, BesselSolution, ModeProblem3D};
pub use bvp::{cokernel_norm_profile, finite_cylinder_bvp, ZERO_THRESHOLD, BoundaryCondition, BvpResult, CokernelProfile, ModeBlock};
pub use cokernel::{
    asymptotic_deviation_fit, cokernel_asymptotics, obstruction_pairing, pairing_scaling, CokernelRatio, Cutoff,
    ObstructionPairing,
};
pub use flow::{mode_kernel_dimension, slice_potential, spectral_flow, SpectralFlow, WeightWindow};
pub use ode::{integrate_mode_ode, mode_sweep, ModeSolution, OdeConfig};
pub use rates::{default_sweep, error_rate, error_rate_fit, index_3d, ErrorRatePrediction, IndexReport, RateFit, Regime};
pub use s2::{s2_endpoint_spectrum, s2_flow, s2_fredholm_window, s2_neck_spectra, S2Spectra};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NeckError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("weight mu = {mu} is not Fredholm for degree {degree}")]
    NonFredholmWeight { mu: f64, degree: i32 },
    #[error("numerical non-convergence: {0}")]
    NonConvergence(String),
}

/// The scale-invariant 2-dimensional neck `(R x S^1, dR^2 + (R^2 + 1) dtheta^2)`
/// with the Dirac operator twisted by a connection of degree `degree`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelNeck {
    pub degree: i32,
    /// Weight `mu`: norms carry the factor `<R>^{-2 mu}`.
    pub mu: f64,
}

fn require(cond: bool, msg: impl Into<String>) -> Result<(), NeckError> {
    if cond {
        Ok(())
    } else {
        Err(NeckError::InvalidParameter(msg.into()))
    }
}

/// Least-squares slope of `y` against `x`, with the coefficient of
/// determination. A flat, noiseless series counts as a perfect fit.
pub(crate) fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = x.iter().zip(y).map(|(a, b)| (b - intercept - slope * a).powi(2)).sum();
    let ss_tot: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    let scale = y.iter().map(|b| b.abs()).fold(1.0, f64::max);
    let r2 = if ss_tot <= (1e-12 * scale).powi(2) * n { 1.0 } else { 1.0 - ss_res / ss_tot };
    (slope, intercept, r2)
}
