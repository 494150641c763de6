use super::{require, NeckError};
use crate::orbifold::Rational;

/// Connection term `A_d(R) = (d/2) R / sqrt(R^2 + 1)` of the slice operator.
pub fn slice_potential(degree: i32, r: f64) -> f64 {
    0.5 * degree as f64 * r / (r * r + 1.0).sqrt()
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightWindow {
    pub lower: f64,
    pub upper: f64,
    pub kernel: u64,
    pub cokernel: u64,
}

/// The slice spectrum moves from `Z + start_shift` at `R = -inf` to
/// `Z + end_shift` at `R = +inf`; weights in `Z + forbidden_shift` are not
/// Fredholm.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralFlow {
    pub degree: i32,
    pub start_shift: Rational,
    pub end_shift: Rational,
    pub forbidden_shift: Rational,
    /// Fredholm windows between consecutive forbidden weights.
    pub windows: Vec<WeightWindow>,
}

fn frac_half(degree: i32) -> Rational {
    let r = Rational::new(degree as i128, 2);
    r - r.floor()
}

fn is_forbidden(degree: i32, mu: f64) -> bool {
    let t = mu - 0.5 * degree as f64;
    (t - t.round()).abs() < 1e-12
}

/// Spectral flow of the slice operator across the neck, with kernel and
/// cokernel dimensions on each Fredholm window meeting `[-span, span]`.
pub fn spectral_flow(degree: i32, span: f64) -> Result<SpectralFlow, NeckError> {
    require(span.is_finite() && span > 0.0, "span must be positive")?;
    let shift = if degree % 2 == 0 { 0.0 } else { 0.5 };
    let first = (-span - shift).floor() as i64;
    let last = (span - shift).ceil() as i64;
    let mut windows = Vec::new();
    for j in first..last {
        let lower = j as f64 + shift;
        let upper = lower + 1.0;
        let (kernel, cokernel) = mode_kernel_dimension(degree, 0.5 * (lower + upper))?;
        windows.push(WeightWindow { lower, upper, kernel, cokernel });
    }
    Ok(SpectralFlow {
        degree,
        start_shift: Rational::new(-(degree as i128), 2),
        end_shift: Rational::new(degree as i128, 2),
        forbidden_shift: frac_half(degree),
        windows,
    })
}

/// Kernel and cokernel of `d_bar` on the infinite neck at weight `mu`, by
/// counting Fourier modes. The kernel mode `k` is `e^{ks} cosh(s)^{-d/2}` in
/// `s = asinh R`, growing at rate `k - d/2` as `s -> +inf` and `-(k + d/2)` as
/// `s -> -inf`; it lies in the weighted space when both rates are below `mu`.
/// Cokernel modes `e^{-ks} cosh(s)^{d/2}` must decay against weight `-mu`.
pub fn mode_kernel_dimension(degree: i32, mu: f64) -> Result<(u64, u64), NeckError> {
    require(mu.is_finite(), "weight must be finite")?;
    if is_forbidden(degree, mu) {
        return Err(NeckError::NonFredholmWeight { mu, degree });
    }
    let half = 0.5 * degree as f64;
    let reach = (mu.abs() + half.abs()).ceil() as i64 + 2;
    let (mut kernel, mut cokernel) = (0, 0);
    for k in -reach..=reach {
        let k = k as f64;
        if k - half < mu && -(k + half) < mu {
            kernel += 1;
        }
        if -k + half < -mu && k + half < -mu {
            cokernel += 1;
        }
    }
    Ok((kernel, cokernel))
}
