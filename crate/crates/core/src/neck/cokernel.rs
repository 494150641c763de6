use num_complex::Complex64;

use super::bessel::bessel_i_scaled;
use super::{linear_fit, quadrature, require, ModeProblem3D, NeckError};

fn bracket(r: f64) -> f64 {
    (1.0 + r * r).sqrt()
}

/// The cokernel element of one fiber mode, normalized in the weight-`mu`
/// space over `[-R0, R0]`. All values carry the factor `e^{-p0}`,
/// `p0 = delta |ell| R0`, which cancels in every ratio.
struct NormalizedMode {
    p: ModeProblem3D,
    r0: f64,
    p0: f64,
    /// Squared norm times `e^{-2 p0}`.
    norm_sq: f64,
}

impl NormalizedMode {
    fn new(p: &ModeProblem3D, r0: f64) -> Result<Self, NeckError> {
        p.validate()?;
        require(r0.is_finite() && r0 > 0.0, "R0 must be positive")?;
        let a = p.scale();
        let p0 = a * r0;
        let density = |r: f64| {
            let x = a * r;
            let g = bessel_i_scaled(p.k, x).powi(2) + bessel_i_scaled(p.k + 1, x).powi(2);
            bracket(r).powf(2.0 * p.mu) * g * (2.0 * (x - p0)).exp()
        };
        // The mass sits within a few 1/a of the end.
        let split = (r0 - 40.0 / a).max(0.0);
        let mut half = quadrature::integrate(density, split, r0, 1e-12)?;
        if split > 0.0 {
            half += quadrature::integrate(density, 0.0, split, 1e-8)?;
        }
        Ok(Self { p: *p, r0, p0, norm_sq: 2.0 * half })
    }

    /// `<R>^{2 mu - 1/2} |I_hat(delta |ell| |R|)|`, normalized.
    fn value(&self, r: f64) -> f64 {
        let x = self.p.scale() * r.abs();
        let g = (bessel_i_scaled(self.p.k, x).powi(2) + bessel_i_scaled(self.p.k + 1, x).powi(2)).sqrt();
        bracket(r).powf(2.0 * self.p.mu - 0.5) * g * (x - self.p0).exp() / self.norm_sq.sqrt()
    }

    /// Leading-order magnitude `R0^{-mu} sqrt(p0) e^{p - p0} |R|^{2 mu - 1}`,
    /// with `<.>` kept wherever the weight supplies it so that only the
    /// `O(1/p)` Bessel corrections separate the two.
    fn predicted(&self, r: f64) -> f64 {
        let x = self.p.scale() * r.abs();
        let mu = self.p.mu;
        bracket(self.r0).powf(-mu)
            * self.p0.sqrt()
            * (x - self.p0).exp()
            * bracket(r).powf(2.0 * mu - 0.5)
            * r.abs().powf(-0.5)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CokernelRatio {
    pub r: f64,
    pub direct: f64,
    pub predicted: f64,
    pub ratio: f64,
    /// False when `delta |ell| R0 < 5`, where the leading term is not yet
    /// expected to dominate.
    pub asymptotic_regime: bool,
}

/// Normalized cokernel magnitude at `R` evaluated from the Bessel solution,
/// against its leading-order exponential profile. The deviation of the ratio
/// from 1 is `O(1/(delta |ell| R))`.
pub fn cokernel_asymptotics(p: &ModeProblem3D, r0: f64, r: f64) -> Result<CokernelRatio, NeckError> {
    require(r != 0.0 && r.abs() <= r0, "R must be nonzero and inside [-R0, R0]")?;
    let mode = NormalizedMode::new(p, r0)?;
    let direct = mode.value(r);
    let predicted = mode.predicted(r);
    Ok(CokernelRatio { r, direct, predicted, ratio: direct / predicted, asymptotic_regime: mode.p0 >= 5.0 })
}

/// Log-log slope of `|ratio - 1|` against `|ell|` over the given fiber modes.
pub fn asymptotic_deviation_fit(base: &ModeProblem3D, ells: &[i64], r0: f64, r: f64) -> Result<(f64, f64), NeckError> {
    require(ells.len() >= 2, "need at least two fiber modes")?;
    let mut x = Vec::new();
    let mut y = Vec::new();
    for &ell in ells {
        let ratio = cokernel_asymptotics(&ModeProblem3D { ell, ..*base }, r0, r)?.ratio;
        x.push((ell.unsigned_abs() as f64).ln());
        y.push((ratio - 1.0).abs().ln());
    }
    let (slope, _, r2) = linear_fit(&x, &y);
    Ok((slope, r2))
}

/// Profile of the perturbation cutoff on the pairing window
/// `R0/2 <= |R| <= R0`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Cutoff {
    /// Indicator of the window.
    #[default]
    Sharp,
    /// Rises smoothly from 0 at `|R| = R0/2` to 1 at `|R| = R0/2 + width`.
    Smooth { width: f64 },
}

impl Cutoff {
    fn weight(&self, r: f64, r0: f64) -> f64 {
        match *self {
            Cutoff::Sharp => 1.0,
            Cutoff::Smooth { width } => {
                let t = ((r.abs() - 0.5 * r0) / width).clamp(0.0, 1.0);
                t * t * (3.0 - 2.0 * t)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ObstructionPairing {
    pub ell: i64,
    /// Radial factor shared by both pairings.
    pub radial: f64,
    /// Pairings with `Psi_ell` and its conjugate.
    pub pairings: [Complex64; 2],
    /// Determinant of `(xi_1, xi_2) -> pairings`.
    pub determinant: Complex64,
    pub invertible: bool,
}

/// Pairs the perturbation `xi` supported on `-R0 <= R <= -R0/2`, against the
/// normalized cokernel element of fiber mode `ell`. The result is
/// `radial * (conj(c) (xi_1 + i xi_2), conj(d) (xi_1 - i xi_2))` where the
/// radial factor behaves like `1/sqrt(|ell|)`.
pub fn obstruction_pairing(
    p: &ModeProblem3D,
    r0: f64,
    c: Complex64,
    d: Complex64,
    xi: [Complex64; 2],
    cutoff: Cutoff,
) -> Result<ObstructionPairing, NeckError> {
    require(c.norm_sqr() + d.norm_sqr() > 0.0, "spinor constants c, d must not both vanish")?;
    if let Cutoff::Smooth { width } = cutoff {
        require(width > 0.0 && width < 0.5 * r0, "cutoff width must lie in (0, R0/2)")?;
    }
    let mode = NormalizedMode::new(p, r0)?;
    let mu = p.mu;
    let integrand = |r: f64| {
        r0.powf(mu - 0.5) * r.powf(-0.5) * mode.value(r) * bracket(r).powf(-2.0 * mu) * r * cutoff.weight(r, r0)
    };
    let split = (r0 - 40.0 / p.scale()).max(0.5 * r0);
    let mut radial = quadrature::integrate(integrand, split, r0, 1e-10)?;
    if split > 0.5 * r0 {
        radial += quadrature::integrate(integrand, 0.5 * r0, split, 1e-6)?;
    }
    let i = Complex64::i();
    let pairings = [radial * c.conj() * (xi[0] + i * xi[1]), radial * d.conj() * (xi[0] - i * xi[1])];
    // Rows (radial conj(c), i radial conj(c)) and (radial conj(d), -i radial conj(d)).
    let determinant = -2.0 * i * radial * radial * c.conj() * d.conj();
    let invertible = determinant.norm() > 1e-14 * radial * radial * (c.norm_sqr() + d.norm_sqr());
    Ok(ObstructionPairing { ell: p.ell, radial, pairings, determinant, invertible })
}

/// Log-log slope of the radial pairing factor against `|ell|`.
pub fn pairing_scaling(base: &ModeProblem3D, ells: &[i64], r0: f64, cutoff: Cutoff) -> Result<(f64, f64), NeckError> {
    require(ells.len() >= 2, "need at least two fiber modes")?;
    let one = Complex64::new(1.0, 0.0);
    let mut x = Vec::new();
    let mut y = Vec::new();
    for &ell in ells {
        let pr = obstruction_pairing(&ModeProblem3D { ell, ..*base }, r0, one, one, [one, Complex64::new(0.0, 0.0)], cutoff)?;
        x.push((ell.unsigned_abs() as f64).ln());
        y.push(pr.radial.ln());
    }
    let (slope, _, r2) = linear_fit(&x, &y);
    Ok((slope, r2))
}
