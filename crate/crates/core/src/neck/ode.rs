use ode_solvers::{Dopri5, OutputType, System, Vector1};
use rayon::prelude::*;

use super::{linear_fit, require, NeckError};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Integrate over `[-s_max, s_max]` in `s = asinh R`.
    pub s_max: f64,
    /// Largest step, hence largest spacing between samples.
    pub step: f64,
    /// Fraction of each half-line, at the far end, used for the decay fit.
    pub fit_fraction: f64,
    pub min_r2: f64,
}

impl Default for OdeConfig {
    fn default() -> Self {
        Self { rel_tol: 1e-10, abs_tol: 1e-300, s_max: 20.0, step: 0.05, fit_fraction: 0.25, min_r2: 0.999 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModeSolution {
    pub degree: i32,
    pub k: i64,
    pub s: Vec<f64>,
    pub u: Vec<f64>,
    /// Fitted `r` in `u ~ e^{r |s|}` as `s -> +inf`.
    pub rate_plus: f64,
    /// Fitted `r` in `u ~ e^{r |s|}` as `s -> -inf`.
    pub rate_minus: f64,
    pub r2_plus: f64,
    pub r2_minus: f64,
}

impl ModeSolution {
    /// `e^{ks} cosh(s)^{-d/2}`.
    pub fn closed_form(degree: i32, k: i64, s: f64) -> f64 {
        (k as f64 * s - 0.5 * degree as f64 * log_cosh(s)).exp()
    }

    /// Largest pointwise relative deviation from the closed form.
    pub fn max_rel_error(&self) -> f64 {
        self.s
            .iter()
            .zip(&self.u)
            .map(|(&s, &u)| {
                let exact = Self::closed_form(self.degree, self.k, s);
                ((u - exact) / exact).abs()
            })
            .fold(0.0, f64::max)
    }
}

fn log_cosh(s: f64) -> f64 {
    let a = s.abs();
    a + (-2.0 * a).exp().ln_1p() - std::f64::consts::LN_2
}

struct ModeOde {
    k: f64,
    half_degree: f64,
}

impl System<f64, Vector1<f64>> for ModeOde {
    fn system(&self, s: f64, y: &Vector1<f64>, dy: &mut Vector1<f64>) {
        dy[0] = (self.k - self.half_degree * s.tanh()) * y[0];
    }
}

/// Forward integration over `[0, s_max]`. The left half-line uses the mirror
/// identity `u_k(-t) = u_{-k}(t)`, which keeps the solver running forward.
fn integrate_half(degree: i32, k: i64, cfg: &OdeConfig) -> Result<(Vec<f64>, Vec<f64>), NeckError> {
    let system = ModeOde { k: k as f64, half_degree: 0.5 * degree as f64 };
    // Accepted steps only, capped at `step`: dense-output interpolation would
    // cost more accuracy than the step control delivers.
    let mut solver = Dopri5::from_param(
        system,
        0.0,
        cfg.s_max,
        cfg.step,
        Vector1::new(1.0),
        cfg.rel_tol,
        cfg.abs_tol,
        0.9,
        0.04,
        0.2,
        10.0,
        cfg.step,
        0.0,
        1_000_000,
        1000,
        OutputType::Sparse,
    );
    solver.integrate().map_err(|e| NeckError::NonConvergence(e.to_string()))?;
    let (xs, ys) = solver.results().get();
    Ok((xs.clone(), ys.iter().map(|y| y[0]).collect()))
}

fn fit_rate(s: &[f64], u: &[f64], cfg: &OdeConfig) -> Result<(f64, f64), NeckError> {
    let cut = (1.0 - cfg.fit_fraction) * cfg.s_max;
    let (x, y): (Vec<f64>, Vec<f64>) =
        s.iter().zip(u).filter(|(s, _)| s.abs() >= cut).map(|(s, u)| (s.abs(), u.abs().ln())).unzip();
    if x.len() < 3 {
        return Err(NeckError::NonConvergence("too few samples in the fit window".into()));
    }
    let (slope, _, r2) = linear_fit(&x, &y);
    if !(r2 > cfg.min_r2) {
        return Err(NeckError::NonConvergence(format!("decay fit R^2 = {r2} below {}", cfg.min_r2)));
    }
    Ok((slope, r2))
}

/// Integrates `(d/ds - k + (d/2) tanh s) u = 0`, `u(0) = 1`, out to both ends
/// and fits the exponential rates on the outer part of each half-line.
pub fn integrate_mode_ode(degree: i32, k: i64, cfg: &OdeConfig) -> Result<ModeSolution, NeckError> {
    require(cfg.rel_tol > 0.0 && cfg.rel_tol < 1e-3, "rel_tol must lie in (0, 1e-3)")?;
    require(cfg.step > 0.0 && cfg.step < cfg.s_max, "step must lie in (0, s_max)")?;
    require(cfg.fit_fraction > 0.0 && cfg.fit_fraction < 1.0, "fit_fraction must lie in (0, 1)")?;
    require(
        cfg.s_max.tanh() > 1.0 - cfg.rel_tol,
        format!("s_max = {} too short: tanh(s_max) must exceed 1 - rel_tol", cfg.s_max),
    )?;
    let (s_plus, u_plus) = integrate_half(degree, k, cfg)?;
    let (t_minus, u_minus) = integrate_half(degree, -k, cfg)?;
    let s_minus: Vec<f64> = t_minus.iter().map(|t| -t).collect();
    let (rate_plus, r2_plus) = fit_rate(&s_plus, &u_plus, cfg)?;
    let (rate_minus, r2_minus) = fit_rate(&s_minus, &u_minus, cfg)?;

    let mut s: Vec<f64> = s_minus.iter().rev().copied().collect();
    let mut u: Vec<f64> = u_minus.iter().rev().copied().collect();
    s.extend(s_plus.iter().skip(1));
    u.extend(u_plus.iter().skip(1));
    Ok(ModeSolution { degree, k, s, u, rate_plus, rate_minus, r2_plus, r2_minus })
}

/// [`integrate_mode_ode`] over a range of modes, optionally in parallel.
pub fn mode_sweep(degree: i32, modes: &[i64], cfg: &OdeConfig, parallel: bool) -> Vec<Result<ModeSolution, NeckError>> {
    if parallel {
        modes.par_iter().map(|&k| integrate_mode_ode(degree, k, cfg)).collect()
    } else {
        modes.iter().map(|&k| integrate_mode_ode(degree, k, cfg)).collect()
    }
}
