use std::fmt;

use num_integer::Integer;

use super::{SeifertError, SeifertManifold, SignConvention};
use crate::orbifold::{OrbifoldLineBundle, Rational, SectionCount};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpinorParams {
    /// Twist `k`: the spinor transforms as `e^{ik t}` along the fibers.
    pub k: i64,
    /// Degree of the auxiliary bundle.
    pub aux_degree: i64,
    pub convention: SignConvention,
    /// Require `N + 1 - g >= 1` instead of `>= 0`.
    pub strict: bool,
}

impl Default for SpinorParams {
    fn default() -> Self {
        Self { k: 1, aux_degree: 0, convention: SignConvention::Positive, strict: false }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExistenceKind {
    Spinor,
    SpinC,
    OneForm,
}

impl ExistenceKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ExistenceKind::Spinor => "spinor",
            ExistenceKind::SpinC => "spinc",
            ExistenceKind::OneForm => "oneform",
        }
    }
}

/// Shape of the singular set, a union of fibers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SingularSet {
    Empty,
    /// Fibers of the Hopf fibration of the 3-sphere.
    HopfLink(u64),
    /// `S^1 x {points}` in a product.
    CircleTimesPoints(u64),
    SingleFiber,
    Fibers(u64),
}

impl SingularSet {
    pub fn kind(self) -> &'static str {
        match self {
            SingularSet::Empty => "empty",
            SingularSet::HopfLink(_) => "hopf-link",
            SingularSet::CircleTimesPoints(_) => "circle-times-points",
            SingularSet::SingleFiber => "single-fiber",
            SingularSet::Fibers(_) => "fibers",
        }
    }

    pub fn components(self) -> u64 {
        match self {
            SingularSet::Empty => 0,
            SingularSet::SingleFiber => 1,
            SingularSet::HopfLink(n) | SingularSet::CircleTimesPoints(n) | SingularSet::Fibers(n) => n,
        }
    }

    fn describe(y: &SeifertManifold, trivial_twist: bool, n: u64) -> Self {
        if n == 0 {
            SingularSet::Empty
        } else if trivial_twist && y.b() == 0 && y.fibers().is_empty() {
            SingularSet::CircleTimesPoints(n)
        } else if y.genus() == 0 && y.fibers().is_empty() && y.b().abs() == 1 {
            SingularSet::HopfLink(n)
        } else if n == 1 {
            SingularSet::SingleFiber
        } else {
            SingularSet::Fibers(n)
        }
    }
}

impl fmt::Display for SingularSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SingularSet::Empty => write!(f, "empty"),
            SingularSet::HopfLink(n) => write!(f, "{n}-component Hopf link"),
            SingularSet::CircleTimesPoints(n) => write!(f, "S^1 x {{{n} points}}"),
            SingularSet::SingleFiber => write!(f, "single fiber"),
            SingularSet::Fibers(n) => write!(f, "union of {n} fibers"),
        }
    }
}

/// Adiabatic metric data: fibers of length `2 pi`, base of area
/// `pi * area_coefficient`. `None` means any base area works.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MetricParams {
    pub area_coefficient: Option<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExistenceReport {
    pub kind: ExistenceKind,
    pub exists: bool,
    /// Number of singular fibers, the desingularized degree of the section
    /// bundle. May be negative when no sections exist.
    pub fiber_count: i64,
    pub dim_sections: SectionCount,
    pub section_bundle: OrbifoldLineBundle,
    /// Sufficient positivity condition `2 deg(aux) + 2kb > 0` on the twist.
    pub positivity_gate: bool,
    pub singular_set: Option<SingularSet>,
    pub metric: Option<MetricParams>,
    /// Why `exists` is false, one line per failed condition.
    pub failures: Vec<String>,
    pub warnings: Vec<String>,
}

/// `2kb + 2g - 2 + sum floor((2k beta_i + alpha_i - 1) / alpha_i) + 2 deg(aux)`.
pub fn spinor_fiber_count(genus: u32, twist: &OrbifoldLineBundle, k: i64, aux_degree: i64) -> i64 {
    let orders = twist.surface().cone_orders();
    let mut n = 2 * k * twist.b() + 2 * genus as i64 - 2 + 2 * aux_degree;
    for (&beta, &a) in twist.locals().iter().zip(orders) {
        let a = a as i64;
        n += Integer::div_floor(&(2 * k * beta + a - 1), &a);
    }
    n
}

fn spinc_fiber_count(twist: &OrbifoldLineBundle, k: i64, aux_degree: i64) -> i64 {
    let orders = twist.surface().cone_orders();
    let mut n = 2 * k * twist.b() + 2 * aux_degree;
    for (&beta, &a) in twist.locals().iter().zip(orders) {
        n += Integer::div_floor(&(2 * k * beta), &(a as i64));
    }
    n
}

/// Fiber-invariant Z2-harmonic spinors of twist `k`, built from a section of
/// `K (x) A^2 (x) L^{2k}` with simple zeros. When `L` is trivial the twist is
/// carried by the auxiliary bundle `A` instead.
pub fn spinor_existence(y: &SeifertManifold, p: SpinorParams) -> Result<ExistenceReport, SeifertError> {
    twisted_existence(y, p, ExistenceKind::Spinor)
}

/// As [`spinor_existence`] for a spin^c structure, where `A^2` stands in for
/// `K^-1` and the section bundle is `A^2 (x) L^{2k}`.
pub fn spinc_existence(y: &SeifertManifold, p: SpinorParams) -> Result<ExistenceReport, SeifertError> {
    twisted_existence(y, p, ExistenceKind::SpinC)
}

fn twisted_existence(
    y: &SeifertManifold,
    p: SpinorParams,
    kind: ExistenceKind,
) -> Result<ExistenceReport, SeifertError> {
    let base = y.base();
    let genus = y.genus() as i64;
    let l = y.euler_bundle(p.convention);
    let trivial_l = l.is_trivial();
    if p.k == 0 && !trivial_l {
        return Err(SeifertError::DegenerateTwist);
    }
    let aux = OrbifoldLineBundle::new(base.clone(), p.aux_degree, vec![0; base.cone_count()])?;
    let twist = if trivial_l { aux.clone() } else { l.clone() };

    let twisted = aux.power(2)?.tensor(&twist.power(2 * p.k)?)?;
    let (section_bundle, fiber_count) = match kind {
        ExistenceKind::Spinor => (
            base.canonical_bundle().tensor(&twisted)?,
            spinor_fiber_count(y.genus(), &twist, p.k, p.aux_degree),
        ),
        _ => (twisted.clone(), spinc_fiber_count(&twist, p.k, p.aux_degree)),
    };
    debug_assert_eq!(section_bundle.b(), fiber_count);

    let gate_value = 2 * p.aux_degree + 2 * p.k * twist.b();
    let positivity_gate = gate_value > 0 || (gate_value == 0 && !twisted.is_trivial());
    let dim_sections = section_bundle.h0()?;
    let expected_dim = fiber_count + 1 - genus;

    let mut failures = Vec::new();
    let mut warnings = Vec::new();
    if kind == ExistenceKind::Spinor && !y.has_spin_base() {
        warnings.push("base has even cone orders and carries no orbifold spin structure".into());
    }
    let floor = if p.strict { 1 } else { 0 };
    if expected_dim < floor {
        failures.push(format!("N + 1 - g = {expected_dim} < {floor}"));
    }
    if fiber_count < 2 * genus {
        failures.push(format!("N = {fiber_count} < 2g = {}", 2 * genus));
    }
    match dim_sections {
        SectionCount::Exact(d) if d as i64 == expected_dim => {}
        SectionCount::Exact(d) => failures.push(format!("h0 = {d} differs from N + 1 - g")),
        SectionCount::Indeterminate { .. } => {
            failures.push("section count not certified: Serre dual has positive degree".into());
            if positivity_gate {
                warnings.push("positivity gate holds but the dual bundle does not vanish".into());
            }
        }
    }
    if failures.is_empty() && !positivity_gate {
        warnings.push("section count certified by the Serre dual although the positivity gate fails".into());
    }

    let area_coefficient = if trivial_l { None } else { Some(l.degree() / p.k as i128) };
    if let Some(a) = area_coefficient {
        if a <= Rational::from_integer(0) {
            failures.push(format!("base area coefficient deg(L)/k = {a} is not positive"));
        }
    }

    let exists = failures.is_empty();
    Ok(ExistenceReport {
        kind,
        exists,
        fiber_count,
        dim_sections,
        section_bundle,
        positivity_gate,
        singular_set: exists.then(|| SingularSet::describe(y, trivial_l, fiber_count as u64)),
        metric: exists.then_some(MetricParams { area_coefficient }),
        failures,
        warnings,
    })
}

/// Fiber-invariant Z2-harmonic 1-forms from quadratic differentials with
/// simple zeros. Exists iff `3g - 3 + n > 0` and `4g - 4 + n >= 2g`.
pub fn oneform_existence(y: &SeifertManifold) -> Result<ExistenceReport, SeifertError> {
    let base = y.base();
    let g = y.genus() as i64;
    let n = base.cone_count() as i64;
    let k2 = base.canonical_bundle().power(2)?;
    let fiber_count = 4 * g - 4 + n;
    let dim = 3 * g - 3 + n;

    let mut failures = Vec::new();
    if dim <= 0 {
        failures.push(format!("3g - 3 + n = {dim} is not positive"));
    }
    if fiber_count < 2 * g {
        failures.push(format!("4g - 4 + n = {fiber_count} < 2g"));
    }
    let exists = failures.is_empty();
    let dim_sections = if exists {
        let h0 = k2.h0()?;
        debug_assert!(h0.exact().map_or(true, |d| d as i64 == dim));
        SectionCount::Exact(dim as u64)
    } else {
        k2.h0()?
    };
    Ok(ExistenceReport {
        kind: ExistenceKind::OneForm,
        exists,
        fiber_count,
        dim_sections,
        section_bundle: k2,
        positivity_gate: dim > 0,
        singular_set: exists.then(|| SingularSet::describe(y, false, fiber_count as u64)),
        metric: None,
        failures,
        warnings: Vec::new(),
    })
}
