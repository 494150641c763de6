use super::{require, NeckError};

/// Switch from the power series to the large-argument expansion.
const SERIES_LIMIT: f64 = 30.0;

/// `e^{-|x|} I_n(x)` for integer `n`, without overflow at any argument.
pub fn bessel_i_scaled(n: i64, x: f64) -> f64 {
    let n = n.unsigned_abs();
    let ax = x.abs();
    let v = if ax <= SERIES_LIMIT { series_scaled(n, ax) } else { large_scaled(n, ax) };
    if x < 0.0 && n % 2 == 1 {
        -v
    } else {
        v
    }
}

fn series_scaled(n: u64, x: f64) -> f64 {
    if x == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    let half = 0.5 * x;
    let log_first = n as f64 * half.ln() - (1..=n).map(|j| (j as f64).ln()).sum::<f64>() - x;
    let mut term = log_first.exp();
    let mut sum = term;
    let q = half * half;
    for m in 1..500u64 {
        term *= q / (m as f64 * (m + n) as f64);
        sum += term;
        if term <= 1e-17 * sum {
            break;
        }
    }
    sum
}

/// `e^{-x} I_0(x)` from the Hankel expansion, `x > SERIES_LIMIT`.
fn i0_asymptotic_scaled(x: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for j in 1..200 {
        let odd = (2 * j - 1) as f64;
        let next = term * odd * odd / (8.0 * j as f64 * x);
        if next > term {
            break;
        }
        term = next;
        sum += term;
        if term < 1e-17 * sum {
            break;
        }
    }
    sum / (2.0 * std::f64::consts::PI * x).sqrt()
}

/// Ratio `I_n / I_{n-1}` by running `r_j = 1 / (2j/x + r_{j+1})` down from a
/// start index that is pushed out until the ratio settles.
fn ratio(n: u64, x: f64) -> f64 {
    let eval = |start: u64| {
        let mut r = 0.0;
        for j in (n..=start).rev() {
            r = 1.0 / (2.0 * j as f64 / x + r);
        }
        r
    };
    let mut start = n + 16 + (8.0 * x.sqrt()) as u64;
    let mut prev = eval(start);
    loop {
        start *= 2;
        let next = eval(start);
        if (next - prev).abs() <= 1e-16 * next || start > 1 << 24 {
            return next;
        }
        prev = next;
    }
}

fn large_scaled(n: u64, x: f64) -> f64 {
    let mut v = i0_asymptotic_scaled(x);
    if n == 0 {
        return v;
    }
    // Ratios from the top down, each from its own converged tail.
    let mut r = ratio(n, x);
    let mut ratios = vec![r];
    for j in (1..n).rev() {
        r = 1.0 / (2.0 * j as f64 / x + r);
        ratios.push(r);
    }
    for r in ratios {
        v *= r;
    }
    v
}

/// One angular/fiber mode of the torus-neck Dirac operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeProblem3D {
    pub k: i64,
    pub ell: i64,
    pub delta: f64,
    pub mu: f64,
}

impl ModeProblem3D {
    pub fn validate(&self) -> Result<(), NeckError> {
        require(self.ell != 0, "fiber mode ell must be nonzero")?;
        require(self.delta > 0.0 && self.delta <= 1.0, "delta must lie in (0, 1]")?;
        require(self.mu.is_finite() && self.mu.abs() < 0.25, "|mu| must be below 1/4")?;
        Ok(())
    }

    /// `delta |ell|`, the rate in the Bessel argument.
    pub fn scale(&self) -> f64 {
        self.delta * self.ell.unsigned_abs() as f64
    }

    /// Mode cutoff `L = floor(1/delta)`.
    pub fn mode_cutoff(&self) -> u64 {
        super::rates::mode_cutoff(self.delta)
    }
}

/// Values at one radius, scaled by `e^{-x}` with `x = delta |ell| r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselSample {
    pub r: f64,
    pub x: f64,
    /// `e^{-x} I_k(x)`.
    pub alpha: f64,
    /// `-sgn(ell) e^{-x} I_{k+1}(x)`.
    pub beta: f64,
    /// Relative defect of the first-order system at `r`.
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BesselSolution {
    pub problem: ModeProblem3D,
    pub samples: Vec<BesselSample>,
    pub residual: f64,
}

fn components(p: &ModeProblem3D, x: f64) -> (f64, f64) {
    (bessel_i_scaled(p.k, x), -(p.ell.signum() as f64) * bessel_i_scaled(p.k + 1, x))
}

/// Relative defect at radius `r > 0` of
/// `[[-delta ell, -d/dr - (k+1)/r], [d/dr - k/r, delta ell]] (alpha, beta) = 0`
/// with `alpha = I_k(delta |ell| r)`, `beta = -sgn(ell) I_{k+1}(delta |ell| r)`.
/// Derivatives are five-point differences of the scaled values.
pub fn bessel_residual(p: &ModeProblem3D, r: f64) -> Result<f64, NeckError> {
    p.validate()?;
    require(r > 0.0 && r.is_finite(), "radius must be positive")?;
    let a = p.scale();
    let x = a * r;
    let h = 1e-3f64.min(0.25 * x);
    // d/dr (e^x g(x)) = a e^x (g' + g): work with everything scaled by e^{-x}.
    let diff = |f: &dyn Fn(f64) -> f64| {
        (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h)
    };
    let (al, be) = components(p, x);
    let dal = a * (diff(&|t| components(p, t).0) + al);
    let dbe = a * (diff(&|t| components(p, t).1) + be);
    let dl = p.delta * p.ell as f64;
    let k = p.k as f64;
    let row1 = -dl * al - dbe - (k + 1.0) / r * be;
    let row2 = dal - k / r * al + dl * be;
    Ok(row1.abs().max(row2.abs()) / (a * (al.abs() + be.abs())))
}

/// Samples the explicit mode solution at `|R|` for each requested `R`.
pub fn bessel_mode_solution(p: &ModeProblem3D, sample_rs: &[f64]) -> Result<BesselSolution, NeckError> {
    p.validate()?;
    let samples = sample_rs
        .iter()
        .map(|&r| {
            let r = r.abs();
            require(r > 0.0, "sample radii must be nonzero")?;
            let x = p.scale() * r;
            let (alpha, beta) = components(p, x);
            Ok(BesselSample { r, x, alpha, beta, residual: bessel_residual(p, r)? })
        })
        .collect::<Result<Vec<_>, NeckError>>()?;
    let residual = samples.iter().map(|s| s.residual).fold(0.0, f64::max);
    Ok(BesselSolution { problem: *p, samples, residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// `e^{-x} I_n(x) = (1/pi) int_0^pi e^{x (cos t - 1)} cos(n t) dt`, by the
    /// trapezoid rule, which is spectrally accurate for this periodic integrand.
    fn integral_oracle(n: i64, x: f64) -> f64 {
        let m = 4000;
        let h = std::f64::consts::PI / m as f64;
        let f = |t: f64| (x * (t.cos() - 1.0)).exp() * (n as f64 * t).cos();
        let inner: f64 = (1..m).map(|j| f(j as f64 * h)).sum();
        (0.5 * (f(0.0) + f(std::f64::consts::PI)) + inner) * h / std::f64::consts::PI
    }

    #[test]
    fn values_at_zero() {
        assert_eq!(bessel_i_scaled(0, 0.0), 1.0);
        assert_eq!(bessel_i_scaled(1, 0.0), 0.0);
    }

    #[test]
    fn matches_integral_representation() {
        for n in 0..6 {
            for x in [0.01, 0.5, 1.0, 5.0, 12.0, 29.9, 30.1, 45.0, 120.0, 700.0, 2000.0] {
                let ours = bessel_i_scaled(n, x);
                let oracle = integral_oracle(n, x);
                // The oracle loses digits to cancellation when the value is tiny.
                assert!((ours - oracle).abs() <= 1e-12 * oracle.abs() + 1e-14, "n {n} x {x}: {ours} vs {oracle}");
            }
        }
    }

    #[test]
    fn symmetry_in_order_and_argument() {
        assert_eq!(bessel_i_scaled(-3, 4.0), bessel_i_scaled(3, 4.0));
        assert_eq!(bessel_i_scaled(3, -4.0), -bessel_i_scaled(3, 4.0));
        assert_eq!(bessel_i_scaled(2, -4.0), bessel_i_scaled(2, 4.0));
    }

    #[test]
    fn large_argument_leading_term() {
        let x = 1e6;
        let lead = 1.0 / (2.0 * std::f64::consts::PI * x).sqrt();
        assert!((bessel_i_scaled(0, x) / lead - 1.0).abs() < 1e-6);
    }

    #[test]
    fn residual_small_example() {
        let p = ModeProblem3D { k: 0, ell: 5, delta: 0.1, mu: 0.0 };
        let sol = bessel_mode_solution(&p, &[0.1, 0.5, 1.0, 3.0, 10.0, -7.0]).unwrap();
        assert!(sol.residual < 1e-9, "{}", sol.residual);
        for s in &sol.samples {
            assert!(s.alpha > 0.0 && s.beta <= 0.0);
        }
    }

    #[test]
    fn beta_sign_follows_ell() {
        let p = ModeProblem3D { k: 1, ell: -3, delta: 0.2, mu: 0.0 };
        let sol = bessel_mode_solution(&p, &[2.0]).unwrap();
        assert!(sol.samples[0].beta > 0.0);
        assert!(sol.residual < 1e-9);
    }

    #[test]
    fn rejects_bad_problems() {
        let p = ModeProblem3D { k: 0, ell: 0, delta: 0.1, mu: 0.0 };
        assert!(bessel_mode_solution(&p, &[1.0]).is_err());
        let p = ModeProblem3D { k: 0, ell: 1, delta: 0.1, mu: 0.3 };
        assert!(p.validate().is_err());
    }

    proptest! {
        #[test]
        fn recurrence_identity(k in 1i64..8, x in 0.05f64..900.0) {
            let lhs = bessel_i_scaled(k - 1, x) - bessel_i_scaled(k + 1, x);
            let rhs = 2.0 * k as f64 / x * bessel_i_scaled(k, x);
            prop_assert!((lhs - rhs).abs() <= 1e-12 * bessel_i_scaled(k - 1, x));
        }

        #[test]
        fn residual_below_tolerance(k in 0i64..=3, ell in -1000i64..=1000, delta in 0.01f64..1.0, t in 0.001f64..1.0) {
            prop_assume!(ell != 0);
            let p = ModeProblem3D { k, ell, delta, mu: 0.0 };
            // Spread arguments x = delta |ell| r over (0, 700].
            let r = 700.0 * t / p.scale();
            prop_assume!(p.scale() * r > 1e-3);
            prop_assert!(bessel_residual(&p, r).unwrap() < 1e-9);
        }
    }
}
