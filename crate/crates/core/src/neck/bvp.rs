use std::str::FromStr;

use nalgebra::DMatrix;
use rayon::prelude::*;

use super::{linear_fit, quadrature, require, ModelNeck, NeckError};

/// Boundary conditions on the finite neck `[-R0, R0] x S^1`.
///
/// Every Fourier mode of each spinor component is fixed at exactly one end.
/// The first component keeps modes `k <= -1` at `+R0` and `k >= 0` at `-R0`;
/// the second keeps `k >= 1` at `+R0` and `k <= 0` at `-R0`. The four modes on
/// the edge of these ranges (first component `k = -1, 0`, second `k = 0, 1`)
/// are where the two conditions differ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryCondition {
    /// Edge modes vanish at their constrained end.
    Split,
    /// Edge modes take equal values at the two ends.
    Matched,
}

impl FromStr for BoundaryCondition {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "i" | "split" => Ok(BoundaryCondition::Split),
            "ii" | "matched" => Ok(BoundaryCondition::Matched),
            _ => Err(format!("unknown boundary condition {s:?}; use i or ii")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Component {
    Alpha,
    Beta,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum EndCondition {
    /// Zero at the node with the given index.
    Vanish(usize),
    /// Equal values at both ends.
    Match,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModeBlock {
    /// `"alpha"` or `"beta"`.
    pub component: &'static str,
    pub mode: i64,
    pub kernel: u64,
    pub cokernel: u64,
    pub sigma_min: f64,
    pub sigma_max: f64,
    /// For kernel blocks, the fitted exponent `p` in `|u| ~ |R|^p` near the
    /// boundary.
    pub kernel_decay: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BvpResult {
    pub r0: f64,
    pub condition: BoundaryCondition,
    pub kernel: u64,
    pub cokernel: u64,
    /// Smallest nonzero singular value over largest numerically-zero one,
    /// across all blocks. Infinite when no singular value is zero.
    pub gap: f64,
    pub blocks: Vec<ModeBlock>,
}

/// Relative threshold under which a singular value counts as zero.
pub const ZERO_THRESHOLD: f64 = 1e-8;

/// Kernel and cokernel of the degree-one Dirac operator on the finite neck
/// with the given boundary condition. Each Fourier mode of each component is
/// a scalar first-order problem in `s = asinh R`, discretized by the
/// second-order box scheme on `points` intervals and counted by SVD.
pub fn finite_cylinder_bvp(
    neck: ModelNeck,
    r0: f64,
    condition: BoundaryCondition,
    max_mode: i64,
    points: usize,
    parallel: bool,
) -> Result<BvpResult, NeckError> {
    require(neck.degree == 1, "boundary conditions are defined for the degree-one neck")?;
    require(r0.is_finite() && r0 > 1.0, "R0 must exceed 1")?;
    require(neck.mu.is_finite() && neck.mu.abs() < 0.5, "weight must lie in (-1/2, 1/2)")?;
    require(max_mode >= 1, "need at least the modes -1, 0, 1")?;
    require(points >= 16, "need at least 16 grid intervals")?;

    let specs: Vec<(Component, i64)> = (-max_mode..=max_mode)
        .flat_map(|k| [(Component::Alpha, k), (Component::Beta, k)])
        .collect();
    let solve = |&(c, k): &(Component, i64)| solve_block(neck.mu, r0, condition, c, k, points);
    let blocks: Vec<(ModeBlock, Vec<f64>)> = if parallel {
        specs.par_iter().map(solve).collect::<Result<_, _>>()?
    } else {
        specs.iter().map(solve).collect::<Result<_, _>>()?
    };

    let mut zero_max: f64 = 0.0;
    let mut nonzero_min = f64::INFINITY;
    for (_, sv) in &blocks {
        let top = sv.iter().copied().fold(0.0, f64::max);
        for &s in sv {
            if s <= ZERO_THRESHOLD * top {
                zero_max = zero_max.max(s / top);
            } else {
                nonzero_min = nonzero_min.min(s / top);
            }
        }
    }
    let gap = if zero_max > 0.0 { nonzero_min / zero_max } else { f64::INFINITY };
    let blocks: Vec<ModeBlock> = blocks.into_iter().map(|(b, _)| b).collect();
    Ok(BvpResult {
        r0,
        condition,
        kernel: blocks.iter().map(|b| b.kernel).sum(),
        cokernel: blocks.iter().map(|b| b.cokernel).sum(),
        gap,
        blocks,
    })
}

/// `L u = sign * du/ds + c(s) u` for the given component and mode.
fn coefficients(component: Component, k: i64) -> (f64, impl Fn(f64) -> f64) {
    let k = k as f64;
    match component {
        // du/ds + (H - k) u with H = -1 + tanh(s)/2
        Component::Alpha => (1.0, Box::new(move |s: f64| -1.0 + 0.5 * s.tanh() - k) as Box<dyn Fn(f64) -> f64>),
        // -du/ds - (k + H) u
        Component::Beta => (-1.0, Box::new(move |s: f64| -(k - 1.0 + 0.5 * s.tanh())) as Box<dyn Fn(f64) -> f64>),
    }
}

fn end_condition(component: Component, k: i64, condition: BoundaryCondition, last: usize) -> EndCondition {
    let edge = match component {
        Component::Alpha => k == -1 || k == 0,
        Component::Beta => k == 0 || k == 1,
    };
    if edge && condition == BoundaryCondition::Matched {
        return EndCondition::Match;
    }
    let free_at_right = match component {
        Component::Alpha => k <= -1,
        Component::Beta => k >= 1,
    };
    if free_at_right {
        EndCondition::Vanish(0)
    } else {
        EndCondition::Vanish(last)
    }
}

fn solve_block(
    mu: f64,
    r0: f64,
    condition: BoundaryCondition,
    component: Component,
    k: i64,
    n: usize,
) -> Result<(ModeBlock, Vec<f64>), NeckError> {
    let s0 = r0.asinh();
    let h = 2.0 * s0 / n as f64;
    let node = |i: usize| -s0 + i as f64 * h;
    let (sign, c) = coefficients(component, k);

    // Box scheme on n intervals, n + 1 nodes.
    let mut d = DMatrix::<f64>::zeros(n, n + 1);
    for i in 0..n {
        let mid = node(i) + 0.5 * h;
        let row_scale = h.sqrt() * mid.cosh().powf(-mu);
        let cm = c(mid);
        d[(i, i)] = (-sign / h + 0.5 * cm) * row_scale;
        d[(i, i + 1)] = (sign / h + 0.5 * cm) * row_scale;
    }
    let col_scale: Vec<f64> = (0..=n).map(|i| node(i).cosh().powf(mu) / h.sqrt()).collect();

    // Restrict to the constrained subspace.
    let ends = end_condition(component, k, condition, n);
    let basis: Vec<Vec<(usize, f64)>> = match ends {
        EndCondition::Vanish(p) => (0..=n).filter(|&i| i != p).map(|i| vec![(i, col_scale[i])]).collect(),
        EndCondition::Match => {
            let mut cols = vec![vec![(0, col_scale[0]), (n, col_scale[n])]];
            cols.extend((1..n).map(|i| vec![(i, col_scale[i])]));
            cols
        }
    };
    let mut a = DMatrix::<f64>::zeros(n, basis.len());
    for (j, col) in basis.iter().enumerate() {
        for &(i, w) in col {
            for r in i.saturating_sub(1)..(i + 1).min(n) {
                a[(r, j)] += d[(r, i)] * w;
            }
        }
    }

    let sv: Vec<f64> = a.singular_values().iter().copied().collect();
    let top = sv.iter().copied().fold(0.0, f64::max);
    if !top.is_finite() || top == 0.0 {
        return Err(NeckError::NonConvergence(format!("degenerate block at mode {k}")));
    }
    let rank = sv.iter().filter(|&&s| s > ZERO_THRESHOLD * top).count();
    let kernel = (basis.len() - rank) as u64;
    let cokernel = (n - rank) as u64;
    let sigma_min = sv.iter().copied().fold(f64::INFINITY, f64::min);

    let kernel_decay = if kernel > 0 {
        let svd = a.svd(false, true);
        let v_t = svd.v_t.as_ref().expect("requested right singular vectors");
        let sv: Vec<f64> = svd.singular_values.iter().copied().collect();
        let (idx, _) = sv.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).unwrap();
        let coeffs = v_t.row(idx);
        let mut values = vec![0.0; n + 1];
        for (j, col) in basis.iter().enumerate() {
            for &(i, w) in col {
                values[i] = coeffs[j] * w;
            }
        }
        let (x, y): (Vec<f64>, Vec<f64>) = (0..=n)
            .map(|i| (node(i).sinh(), values[i]))
            .filter(|(r, _)| *r >= 0.25 * r0)
            .map(|(r, v)| (r.ln(), v.abs().ln()))
            .unzip();
        (x.len() >= 3).then(|| linear_fit(&x, &y).0)
    } else {
        None
    };

    let name = match component {
        Component::Alpha => "alpha",
        Component::Beta => "beta",
    };
    Ok((ModeBlock { component: name, mode: k, kernel, cokernel, sigma_min, sigma_max: top, kernel_decay }, sv))
}

#[derive(Debug, Clone, PartialEq)]
pub struct CokernelProfile {
    pub r0: f64,
    /// Norm of `kappa_dagger` in the weight-`mu` space.
    pub norm: f64,
    /// Share of the squared norm carried by `|R| > R0/2`.
    pub outer_half_fraction: f64,
    /// Share of the squared norm carried outside the fixed core `|R| <= core`.
    pub outside_core_fraction: f64,
}

/// Rescaled cokernel element `kappa_dagger = <R>^{2 mu} kappa / R0^{1/2 + mu}`,
/// with `|kappa|^2 = 1/<R>` the decaying kernel mode. Its weighted norm stays
/// bounded as `R0` grows while its mass leaves every fixed core.
pub fn cokernel_norm_profile(mu: f64, r0_values: &[f64], core: f64) -> Result<Vec<CokernelProfile>, NeckError> {
    require(mu.is_finite() && mu.abs() < 0.5, "weight must lie in (-1/2, 1/2)")?;
    require(core > 0.0, "core radius must be positive")?;
    r0_values
        .iter()
        .map(|&r0| {
            require(r0.is_finite() && r0 > core, "each R0 must exceed the core radius")?;
            // |kappa_dagger|^2 <R>^{-2 mu} <R> = <R>^{2 mu} / R0^{1 + 2 mu}, times 2 pi.
            let density = |r: f64| 2.0 * std::f64::consts::PI * (1.0 + r * r).powf(mu) / r0.powf(1.0 + 2.0 * mu);
            let half = |a: f64, b: f64| quadrature::integrate(density, a, b, 1e-12);
            let total = 2.0 * (half(0.0, core)? + half(core, 0.5 * r0)? + half(0.5 * r0, r0)?);
            let outer = 2.0 * half(0.5 * r0, r0)?;
            let inner_core = 2.0 * half(0.0, core)?;
            Ok(CokernelProfile {
                r0,
                norm: total.sqrt(),
                outer_half_fraction: outer / total,
                outside_core_fraction: 1.0 - inner_core / total,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn neck() -> ModelNeck {
        ModelNeck { degree: 1, mu: 0.0 }
    }

    #[test]
    fn split_condition_is_invertible() {
        let r = finite_cylinder_bvp(neck(), 20.0, BoundaryCondition::Split, 4, 200, false).unwrap();
        assert_eq!((r.kernel, r.cokernel), (0, 0));
        assert!(r.gap.is_infinite());
    }

    #[test]
    fn matched_condition_has_two_dimensional_kernel() {
        let r = finite_cylinder_bvp(neck(), 20.0, BoundaryCondition::Matched, 4, 200, false).unwrap();
        assert_eq!((r.kernel, r.cokernel), (2, 2));
        assert!(r.gap >= 1e6, "gap {}", r.gap);
        let kernel_blocks: Vec<_> = r.blocks.iter().filter(|b| b.kernel > 0).collect();
        assert_eq!(kernel_blocks.len(), 2);
        assert!(kernel_blocks.iter().any(|b| b.component == "alpha" && b.mode == -1));
        assert!(kernel_blocks.iter().any(|b| b.component == "beta" && b.mode == 1));
        for b in kernel_blocks {
            // The kernel element is <R>^{-1/2}.
            assert!((b.kernel_decay.unwrap() + 0.5).abs() < 0.02, "{:?}", b.kernel_decay);
        }
    }

    /// The discrete kernel vector against `cosh(s)^{-1/2}` sampled on the grid.
    #[test]
    fn kernel_vector_matches_closed_form() {
        let n = 300;
        let (block, _) = solve_block(0.0, 30.0, BoundaryCondition::Matched, Component::Alpha, -1, n).unwrap();
        assert_eq!(block.kernel, 1);
        let s0 = 30f64.asinh();
        let h = 2.0 * s0 / n as f64;
        // Box-scheme solution of u' = -(tanh s / 2) u from the left end.
        let mut u = vec![1.0];
        for i in 0..n {
            let mid = -s0 + (i as f64 + 0.5) * h;
            let c = 0.5 * mid.tanh();
            let next = u[i] * (1.0 / h - 0.5 * c) / (1.0 / h + 0.5 * c);
            u.push(next);
        }
        let exact: Vec<f64> = (0..=n).map(|i| (-s0 + i as f64 * h).cosh().powf(-0.5)).collect();
        let scale = exact[0] / u[0];
        for (a, b) in u.iter().zip(&exact) {
            assert!((a * scale - b).abs() / b < 1e-3);
        }
    }

    #[test]
    fn weight_does_not_change_counts() {
        let m = ModelNeck { degree: 1, mu: 0.3 };
        let r = finite_cylinder_bvp(m, 20.0, BoundaryCondition::Matched, 3, 160, true).unwrap();
        assert_eq!((r.kernel, r.cokernel), (2, 2));
    }

    #[test]
    fn rejects_other_degrees() {
        let m = ModelNeck { degree: 2, mu: 0.0 };
        assert!(finite_cylinder_bvp(m, 20.0, BoundaryCondition::Split, 3, 100, false).is_err());
    }

    #[test]
    fn cokernel_norm_stays_bounded() {
        let rows = cokernel_norm_profile(0.0, &[10.0 + 1e-9, 100.0, 1000.0], 10.0).unwrap();
        let norms: Vec<f64> = rows.iter().map(|r| r.norm).collect();
        let (lo, hi) = norms.iter().fold((f64::MAX, 0.0f64), |(a, b), &n| (a.min(n), b.max(n)));
        assert!(hi / lo < 1.2, "{norms:?}");
        // Uniform density in R at mu = 0: the outer half carries half the mass,
        // while every fixed core is emptied.
        assert!((rows[2].outer_half_fraction - 0.5).abs() < 1e-3);
        assert!(rows[2].outside_core_fraction > 0.98);
    }

    #[test]
    fn cokernel_norm_limit() {
        // Squared norm tends to 4 pi / (1 + 2 mu).
        for mu in [-0.3, 0.0, 0.25] {
            let row = &cokernel_norm_profile(mu, &[1e5], 10.0).unwrap()[0];
            let limit = (4.0 * std::f64::consts::PI / (1.0 + 2.0 * mu)).sqrt();
            assert!((row.norm / limit - 1.0).abs() < 1e-2, "mu {mu}: {} vs {limit}", row.norm);
        }
    }
}
