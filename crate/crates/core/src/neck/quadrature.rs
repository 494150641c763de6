use std::num::NonZeroUsize;
use std::sync::OnceLock;

use gauss_quad::GaussLegendre;

use super::NeckError;

const ORDER: usize = 16;
const MAX_PANELS: usize = 1 << 14;

fn rule() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(NonZeroUsize::new(ORDER).unwrap()))
}

fn composite(f: &mut impl FnMut(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    (0..panels).map(|i| rule().integrate(a + i as f64 * h, a + (i + 1) as f64 * h, &mut *f)).sum()
}

/// Composite Gauss-Legendre, doubling the panel count until two successive
/// estimates agree to `rel_tol`.
pub(crate) fn integrate(mut f: impl FnMut(f64) -> f64, a: f64, b: f64, rel_tol: f64) -> Result<f64, NeckError> {
    let mut panels = 4;
    let mut prev = composite(&mut f, a, b, panels);
    while panels < MAX_PANELS {
        panels *= 2;
        let next = composite(&mut f, a, b, panels);
        if !next.is_finite() {
            return Err(NeckError::NonConvergence("quadrature produced a non-finite value".into()));
        }
        if (next - prev).abs() <= rel_tol * next.abs().max(f64::MIN_POSITIVE) {
            return Ok(next);
        }
        prev = next;
    }
    Err(NeckError::NonConvergence(format!("quadrature on [{a}, {b}] did not settle at {MAX_PANELS} panels")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_integral() {
        let v = integrate(f64::exp, 0.0, 3.0, 1e-13).unwrap();
        assert!((v - (3f64.exp() - 1.0)).abs() < 1e-11);
    }

    #[test]
    fn endpoint_peak_settles() {
        let v = integrate(|x: f64| (40.0 * (x - 20.0)).exp(), 0.0, 20.0, 1e-12).unwrap();
        assert!((v - 1.0 / 40.0).abs() < 1e-14);
    }

    #[test]
    fn reports_non_convergence() {
        assert!(integrate(|x: f64| 1.0 / x, 1e-300, 1.0, 1e-12).is_err());
    }
}
