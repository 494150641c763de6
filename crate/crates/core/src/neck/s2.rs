use super::{require, NeckError};

/// Eigenvalues of the sphere Laplacians feeding the S^2 neck: `l(l+1)` on
/// `Omega^0 + Omega^2` and `l(l+1) - 1` on `Omega^1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct S2Spectra {
    pub even_forms: Vec<u64>,
    pub one_forms: Vec<u64>,
}

impl S2Spectra {
    fn nonzero(&self) -> impl Iterator<Item = u64> + '_ {
        self.even_forms.iter().chain(&self.one_forms).copied().filter(|&l| l > 0)
    }
}

/// The first `levels` eigenvalues of each list.
pub fn s2_neck_spectra(levels: usize) -> S2Spectra {
    let l = |i: usize| i as u64;
    S2Spectra {
        even_forms: (0..levels).map(|i| l(i) * (l(i) + 1)).collect(),
        one_forms: (1..=levels).map(|i| l(i) * (l(i) + 1) - 1).collect(),
    }
}

/// Eigenvalues of `[[0, lambda], [lambda, H]]` with `H = R / sqrt(R^2 + 1)`,
/// i.e. `H/2 -+ sqrt(lambda^2 + H^2/4)`. Harmonic forms (`lambda = 0`) only
/// see the zero flow.
pub fn s2_flow(lambda_sq: f64, r: f64) -> Vec<f64> {
    if lambda_sq == 0.0 {
        return vec![0.0];
    }
    let h = r / (r * r + 1.0).sqrt();
    let root = (lambda_sq + 0.25 * h * h).sqrt();
    vec![0.5 * h - root, 0.5 * h + root]
}

fn flow_at_h(lambda_sq: f64, h: f64) -> [f64; 2] {
    let root = (lambda_sq + 0.25 * h * h).sqrt();
    [0.5 * h - root, 0.5 * h + root]
}

/// Limits of the flow at `R -> -inf` and `R -> +inf` (`H = -1, +1`), sorted.
pub fn s2_endpoint_spectrum(levels: usize) -> Vec<f64> {
    let spectra = s2_neck_spectra(levels);
    let mut out = vec![0.0];
    for lambda_sq in spectra.nonzero() {
        for h in [-1.0, 1.0] {
            out.extend(flow_at_h(lambda_sq as f64, h));
        }
    }
    out.sort_by(f64::total_cmp);
    out.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
    out
}

/// Largest `mu_0` such that `(-mu_0, mu_0)` avoids every non-Fredholm weight
/// `e + 1/2`, `e` in the endpoint spectrum.
pub fn s2_fredholm_window(levels: usize) -> Result<f64, NeckError> {
    require(levels >= 1, "need at least one spectral level")?;
    Ok(s2_endpoint_spectrum(levels).iter().map(|e| (e + 0.5).abs()).fold(f64::INFINITY, f64::min))
}
