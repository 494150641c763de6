use std::fmt::Display;

use num_complex::Complex64;
use z2harm::neck::{self, BoundaryCondition, Cutoff, ModeProblem3D, ModelNeck, NeckError, OdeConfig, Regime};
use z2harm::orbifold::{format_rational, OrbifoldError, OrbifoldLineBundle, OrbifoldSurface};
use z2harm::report::{Report, Status, Table};
use z2harm::seifert::{self, CheckOutcome, ExistenceReport, SeifertError, SeifertManifold, SignConvention, SpinorParams};
use z2harm::surgery::{self, Summand, SurgeryError};

use crate::args::*;

/// Why a command produced no report.
#[derive(Debug)]
pub enum Failure {
    Input(String),
    Numerical(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Input(_) => 2,
            Failure::Numerical(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Numerical(m) => m,
        }
    }
}

impl From<NeckError> for Failure {
    fn from(e: NeckError) -> Self {
        match e {
            NeckError::NonConvergence(_) => Failure::Numerical(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

macro_rules! input_errors {
    ($($t:ty),*) => {$(
        impl From<$t> for Failure {
            fn from(e: $t) -> Self {
                Failure::Input(e.to_string())
            }
        }
    )*};
}
input_errors!(OrbifoldError, SeifertError, SurgeryError, std::io::Error);

type Outcome = Result<Report, Failure>;

pub fn exit_code(status: Status) -> i32 {
    match status {
        Status::Ok | Status::CriterionFailed => 0,
        Status::NumericalError => 3,
        Status::Discrepancy => 4,
    }
}

fn sci(x: f64) -> String {
    format!("{x:.6e}")
}

fn fixed(x: f64) -> String {
    format!("{x:.6}")
}

fn table<const N: usize>(columns: [&str; N], rows: Vec<[String; N]>) -> Option<Table> {
    Some(Table { columns: columns.iter().map(|c| c.to_string()).collect(), rows: rows.into_iter().map(Vec::from).collect() })
}

pub fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Invariants(a) => invariants(a),
        Command::Exists(e) => exists(e),
        Command::Brieskorn { exponents } => brieskorn(exponents),
        Command::Sum(s) => sum(s),
        Command::Neck(n) => neck_cmd(n, cli.parallel),
        Command::Catalog(CatalogCommand::Verify { file }) => catalog(file.as_deref()),
    }
}

fn bundle_outputs(r: &mut Report, prefix: &str, l: &OrbifoldLineBundle) -> Result<(), Failure> {
    r.output(format!("{prefix}"), l);
    r.output(format!("{prefix}.degree"), format_rational(&l.degree()));
    r.output(format!("{prefix}.h0"), l.h0()?);
    Ok(())
}

fn invariants(a: &InvariantsArgs) -> Outcome {
    let mut r = Report::new("invariants");
    if let Some(s) = &a.seifert {
        let y = SeifertManifold::parse(s)?;
        r.input("seifert", s);
        let base = y.base();
        r.output("normalized", &y)
            .output("euler_number", format_rational(&y.euler_number()))
            .output("base", &base)
            .output("base.euler_characteristic", format_rational(&base.euler_characteristic()))
            .output("base.spin", y.has_spin_base());
        for c in [SignConvention::Positive, SignConvention::Negative] {
            bundle_outputs(&mut r, &format!("euler_bundle.{}", c.as_str()), &y.euler_bundle(c))?;
        }
        r.cite("Seifert invariants and the orbifold Euler number of the circle bundle");
        return Ok(r);
    }
    let Some(s) = &a.surface else {
        return Err(Failure::Input("give --surface or --seifert".into()));
    };
    let surface = OrbifoldSurface::parse(s)?;
    r.input("surface", s);
    r.output("surface", &surface)
        .output("euler_characteristic", format_rational(&surface.euler_characteristic()))
        .output("spin", surface.admits_spin_structure());
    bundle_outputs(&mut r, "canonical", &surface.canonical_bundle())?;
    bundle_outputs(&mut r, "canonical_squared", &surface.canonical_bundle().power(2)?)?;
    r.cite("orbifold Euler characteristic and canonical bundle degree");
    if let Some(b) = &a.bundle {
        let l = OrbifoldLineBundle::parse(&surface, b)?;
        r.input("bundle", b);
        bundle_outputs(&mut r, "bundle", &l)?;
        bundle_outputs(&mut r, "dual", &l.dual()?)?;
        if let Some(t) = &a.tensor {
            let m = OrbifoldLineBundle::parse(&surface, t)?;
            r.input("tensor", t);
            bundle_outputs(&mut r, "tensor", &l.tensor(&m)?)?;
        }
        if let Some(p) = a.power {
            r.input("power", p);
            bundle_outputs(&mut r, "power", &l.power(p)?)?;
        }
        r.cite("orbifold Riemann-Roch with vanishing for negative degree");
    }
    Ok(r)
}

fn existence_outputs(r: &mut Report, e: &ExistenceReport) {
    r.output("exists", e.exists)
        .output("fiber_count", e.fiber_count)
        .output("dim_sections", e.dim_sections)
        .output("section_bundle", &e.section_bundle)
        .output("section_bundle.degree", format_rational(&e.section_bundle.degree()))
        .output("positivity_gate", e.positivity_gate);
    if let Some(s) = e.singular_set {
        r.output("singular_set", s).output("singular_set.kind", s.kind()).output("singular_set.components", s.components());
    }
    if let Some(m) = e.metric {
        let area = m.area_coefficient.map_or_else(|| "any".to_string(), |a| format_rational(&a));
        r.output("metric.fiber_length", "2pi").output("metric.base_area_over_pi", area);
    }
    if !e.failures.is_empty() {
        r.output("failures", e.failures.join("; "));
    }
    if !e.warnings.is_empty() {
        r.output("warnings", e.warnings.join("; "));
    }
    if !e.exists {
        r.escalate(Status::CriterionFailed);
    }
}

fn exists(cmd: &ExistsCommand) -> Outcome {
    let (mut r, e) = match cmd {
        ExistsCommand::Spinor(t) | ExistsCommand::Spinc(t) => {
            let spinc = matches!(cmd, ExistsCommand::Spinc(_));
            let y = SeifertManifold::parse(&t.seifert)?;
            let convention = match t.convention {
                ConventionArg::Positive => SignConvention::Positive,
                ConventionArg::Negative => SignConvention::Negative,
            };
            let p = SpinorParams { k: t.k, aux_degree: t.aux, convention, strict: t.strict };
            let mut r = Report::new(if spinc { "exists spinc" } else { "exists spinor" });
            r.input("seifert", &t.seifert)
                .input("k", t.k)
                .input("aux_degree", t.aux)
                .input("convention", convention.as_str())
                .input("strict", t.strict);
            let e = if spinc { seifert::spinc_existence(&y, p)? } else { seifert::spinor_existence(&y, p)? };
            r.cite("fiber-invariant Z2-harmonic spinors correspond to holomorphic sections of K^(1/2) x L^k on the base orbifold");
            (r, e)
        }
        ExistsCommand::Oneform { seifert } => {
            let y = SeifertManifold::parse(seifert)?;
            let mut r = Report::new("exists oneform");
            r.input("seifert", seifert);
            r.cite("fiber-invariant Z2-harmonic 1-forms correspond to holomorphic quadratic differentials with simple zeros on the base orbifold");
            (r, seifert::oneform_existence(&y)?)
        }
    };
    existence_outputs(&mut r, &e);
    Ok(r)
}

fn brieskorn(exponents: &[u32]) -> Outcome {
    let y = seifert::brieskorn_to_seifert(exponents)?;
    let joined: Vec<String> = exponents.iter().map(u32::to_string).collect();
    let mut r = Report::new("brieskorn");
    r.input("exponents", joined.join(","));
    r.output("seifert", &y).output("euler_number", format_rational(&y.euler_number()));
    let e = seifert::oneform_existence(&y)?;
    r.output("oneform_exists", e.exists).output("exceptional_fibers", y.fibers().len());
    r.cite("Brieskorn spheres as Seifert manifolds over the sphere with one exceptional fiber per exponent");
    Ok(r)
}

fn summand(s: SummandArg) -> Summand {
    match s {
        SummandArg::Twisted(h1_minus) => Summand::Twisted { h1_minus },
        SummandArg::Untwisted(b1) => Summand::Untwisted { b1 },
    }
}

fn summand_label(s: SummandArg) -> String {
    match s {
        SummandArg::Twisted(n) => format!("twisted:{n}"),
        SummandArg::Untwisted(n) => format!("untwisted:{n}"),
    }
}

fn sum(cmd: &SumCommand) -> Outcome {
    let mut r;
    match *cmd {
        SumCommand::H1 { a, b } => {
            r = Report::new("sum h1");
            r.input("a", summand_label(a)).input("b", summand_label(b));
            r.output("h1_minus", surgery::twisted_h1_connected_sum(summand(a), summand(b))?);
            r.cite("twisted first cohomology of a connected sum gains one class from the connecting arc");
        }
        SumCommand::Zeros { g1, g2 } => {
            r = Report::new("sum zeros");
            r.input("g1", g1).input("g2", g2);
            let z = surgery::glued_zero_profile(g1, g2)?;
            r.output("simple", z.simple).output("even_order", z.even_order).output("total", z.total());
            r.cite("zeros of the glued quadratic differential");
        }
        SumCommand::Genus { g1, g2 } => {
            r = Report::new("sum genus");
            r.input("g1", g1).input("g2", g2);
            let c = surgery::glued_cover_genus(g1, g2)?;
            r.output("glued_cover_genus", c.genus);
            for (name, g) in [("cover_genus_1", g1), ("cover_genus_2", g2)] {
                if let Ok(h) = surgery::branched_cover_genus(g, 4 * g - 4) {
                    r.output(name, h);
                }
            }
            if !c.warnings.is_empty() {
                r.output("warnings", c.warnings.join("; "));
            }
            r.cite("Riemann-Hurwitz for the double cover branched at simple zeros");
        }
        SumCommand::Dims { d1, d2 } => {
            r = Report::new("sum dims");
            r.input("d1", d1).input("d2", d2);
            let s = surgery::stratum_gap(d1, d2);
            r.output("representation_dim", surgery::representation_dim_sum(d1, d2))
                .output("glued_stratum", s.glued_stratum)
                .output("ambient_stratum", s.ambient)
                .output("stratum_gap", s.gap)
                .output("hypothesis", s.hypothesis);
            r.cite("dimension count for gluing Z2-harmonic 1-forms across a connected sum");
        }
    }
    Ok(r)
}

fn parse_complex(s: &str, n: usize) -> Result<Vec<Complex64>, Failure> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| Failure::Input(format!("cannot parse {s:?} as real numbers")))?;
    if parts.len() != 2 * n {
        return Err(Failure::Input(format!("{s:?}: expected {} comma-separated reals", 2 * n)));
    }
    Ok(parts.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect())
}

fn neck_cmd(cmd: &NeckCommand, parallel: bool) -> Outcome {
    match cmd {
        NeckCommand::Flow { degree, mu, span } => {
            let mut r = Report::new("neck flow");
            r.input("degree", degree).input("span", span);
            let f = neck::spectral_flow(*degree, *span)?;
            r.output("start_shift", format_rational(&f.start_shift))
                .output("end_shift", format_rational(&f.end_shift))
                .output("forbidden_shift", format_rational(&f.forbidden_shift));
            if let Some(mu) = mu {
                r.input("mu", mu);
                let (k, c) = neck::mode_kernel_dimension(*degree, *mu)?;
                r.output("kernel", k).output("cokernel", c);
            }
            let rows = f.windows.iter().map(|w| [fixed(w.lower), fixed(w.upper), w.kernel.to_string(), w.cokernel.to_string()]);
            r.table = table(["mu_lower", "mu_upper", "kernel", "cokernel"], rows.collect());
            r.cite("spectral flow of the slice Dirac operator from Z - d/2 to Z + d/2 across the neck");
            Ok(r)
        }
        NeckCommand::Ode { degree, k_min, k_max, s_max, rel_tol } => {
            let mut r = Report::new("neck ode");
            r.input("degree", degree).input("k_min", k_min).input("k_max", k_max).input("s_max", s_max).input("rel_tol", sci(*rel_tol));
            if k_min > k_max {
                return Err(Failure::Input("k_min exceeds k_max".into()));
            }
            let cfg = OdeConfig { rel_tol: *rel_tol, s_max: *s_max, ..OdeConfig::default() };
            let modes: Vec<i64> = (*k_min..=*k_max).collect();
            let half = 0.5 * *degree as f64;
            let mut rows = Vec::new();
            let (mut worst_err, mut worst_rate) = (0.0f64, 0.0f64);
            for sol in neck::mode_sweep(*degree, &modes, &cfg, parallel) {
                let sol = sol?;
                let (pp, pm) = (sol.k as f64 - half, -(sol.k as f64 + half));
                let err = sol.max_rel_error();
                worst_err = worst_err.max(err);
                worst_rate = worst_rate.max((sol.rate_plus - pp).abs()).max((sol.rate_minus - pm).abs());
                rows.push([sol.k.to_string(), fixed(sol.rate_plus), fixed(pp), fixed(sol.rate_minus), fixed(pm), sci(err)]);
            }
            r.output("max_rel_error", sci(worst_err)).output("max_rate_error", sci(worst_rate));
            r.table = table(["k", "rate_plus", "predicted_plus", "rate_minus", "predicted_minus", "max_rel_error"], rows);
            if worst_err > 1e-8 || worst_rate > 0.02 {
                r.escalate(Status::CriterionFailed);
            }
            r.cite("mode solutions e^(ks) cosh(s)^(-d/2) of the neck Dirac operator");
            Ok(r)
        }
        NeckCommand::Bvp { r0, condition, mu, modes, points } => {
            let condition = match condition {
                ConditionArg::I => BoundaryCondition::Split,
                ConditionArg::Ii => BoundaryCondition::Matched,
            };
            let mut r = Report::new("neck bvp");
            r.input("r0", r0).input("condition", format!("{condition:?}").to_lowercase()).input("mu", mu).input("modes", modes).input("points", points);
            let res = neck::finite_cylinder_bvp(ModelNeck { degree: 1, mu: *mu }, *r0, condition, *modes, *points, parallel)?;
            r.output("kernel", res.kernel).output("cokernel", res.cokernel).output("gap", sci(res.gap));
            let rows = res.blocks.iter().map(|b| {
                [
                    b.component.to_string(),
                    b.mode.to_string(),
                    b.kernel.to_string(),
                    b.cokernel.to_string(),
                    sci(b.sigma_min),
                    sci(b.sigma_max),
                    b.kernel_decay.map_or_else(|| "-".into(), fixed),
                ]
            });
            r.table = table(["component", "mode", "kernel", "cokernel", "sigma_min", "sigma_max", "kernel_decay"], rows.collect());
            r.cite("APS-type boundary conditions on the truncated degree-one neck");
            Ok(r)
        }
        NeckCommand::Profile { mu, r0, core } => {
            let mut r = Report::new("neck profile");
            r.input("mu", mu).input("r0", join(r0)).input("core", core);
            let rows = neck::cokernel_norm_profile(*mu, r0, *core)?
                .into_iter()
                .map(|p| [fixed(p.r0), fixed(p.norm), fixed(p.outer_half_fraction), fixed(p.outside_core_fraction)]);
            r.table = table(["r0", "norm", "outer_half_fraction", "outside_core_fraction"], rows.collect());
            r.cite("rescaled cokernel elements of the truncated neck escape every fixed core");
            Ok(r)
        }
        NeckCommand::Bessel { k, ell, delta, mu, r: rs, r0 } => {
            let p = ModeProblem3D { k: *k, ell: *ell, delta: *delta, mu: *mu };
            let mut r = Report::new("neck bessel");
            r.input("k", k).input("ell", ell).input("delta", delta).input("mu", mu).input("r", join(rs));
            let sol = neck::bessel_mode_solution(&p, rs)?;
            r.output("residual", sci(sol.residual)).output("mode_cutoff", p.mode_cutoff());
            let mut rows = Vec::new();
            for (s, &signed) in sol.samples.iter().zip(rs) {
                let ratio = match r0 {
                    Some(r0) if signed.abs() <= *r0 => Some(neck::cokernel_asymptotics(&p, *r0, signed)?),
                    _ => None,
                };
                let show = |f: fn(&neck::CokernelRatio) -> f64| ratio.as_ref().map_or_else(|| "-".into(), |c| sci(f(c)));
                rows.push([
                    fixed(signed),
                    sci(s.x),
                    sci(s.alpha),
                    sci(s.beta),
                    sci(s.residual),
                    show(|c| c.direct),
                    show(|c| c.predicted),
                    show(|c| c.ratio),
                ]);
            }
            if let Some(r0) = r0 {
                r.input("r0", r0);
            }
            r.table = table(["R", "x", "alpha", "beta", "residual", "direct", "predicted", "ratio"], rows);
            if sol.residual >= 1e-9 {
                r.escalate(Status::CriterionFailed);
            }
            r.cite("Bessel mode solutions (I_k, -sgn(ell) I_(k+1)) of the torus-neck Dirac operator");
            Ok(r)
        }
        NeckCommand::Pairing { ell, delta, r0, mu, c, d, xi, cutoff_width } => {
            let cv = parse_complex(c, 1)?[0];
            let dv = parse_complex(d, 1)?[0];
            let x = parse_complex(xi, 2)?;
            let cutoff = cutoff_width.map_or(Cutoff::Sharp, |width| Cutoff::Smooth { width });
            let mut r = Report::new("neck pairing");
            r.input("ell", join(ell)).input("delta", delta).input("r0", r0).input("mu", mu).input("c", c).input("d", d).input("xi", xi);
            r.input("cutoff", cutoff_width.map_or_else(|| "sharp".into(), |w| format!("smooth:{w}")));
            let mut rows = Vec::new();
            for &l in ell {
                let p = ModeProblem3D { k: 0, ell: l, delta: *delta, mu: *mu };
                let pr = neck::obstruction_pairing(&p, *r0, cv, dv, [x[0], x[1]], cutoff)?;
                rows.push([
                    l.to_string(),
                    sci(pr.radial),
                    sci(pr.pairings[0].norm()),
                    sci(pr.pairings[1].norm()),
                    sci(pr.determinant.norm()),
                    pr.invertible.to_string(),
                ]);
            }
            if ell.len() >= 2 {
                let base = ModeProblem3D { k: 0, ell: ell[0], delta: *delta, mu: *mu };
                let (slope, r2) = neck::pairing_scaling(&base, ell, *r0, cutoff)?;
                r.output("slope", fixed(slope)).output("r2", fixed(r2));
            }
            r.table = table(["ell", "radial", "pairing_1", "pairing_2", "determinant", "invertible"], rows);
            r.cite("obstruction pairing against the cokernel decays like |ell|^(-1/2)");
            Ok(r)
        }
        NeckCommand::Index { delta } => {
            let mut r = Report::new("neck index");
            r.input("delta", delta);
            let i = neck::index_3d(*delta)?;
            r.output("index", i.index).output("mode_cutoff", i.cutoff).output("constraints", i.constraints);
            r.cite("index -(4L+2) of the torus-neck operator with L = floor(1/delta)");
            Ok(r)
        }
        NeckCommand::Rates { regime, param, mu, fit } => {
            let regime = match regime {
                RegimeArg::SpinorNeckStretch => Regime::SpinorNeckStretch,
                RegimeArg::OneformPinch => Regime::OneformPinch,
                RegimeArg::TorusPinch => Regime::TorusPinch,
            };
            let mut r = Report::new("neck rates");
            r.input("regime", regime).input("param", param).input("mu", mu).input("fit", fit);
            let e = neck::error_rate(regime, *param, *mu)?;
            r.output("predicted_norm_bound", sci(e.predicted_norm_bound)).output("vanishes", e.vanishes);
            if !e.vanishes {
                r.escalate(Status::CriterionFailed);
            }
            if *fit {
                let f = neck::error_rate_fit(regime, *mu, &neck::default_sweep(regime))?;
                r.output("predicted_exponent", fixed(f.predicted_exponent))
                    .output("fitted_exponent", fixed(f.fitted_exponent))
                    .output("r2", fixed(f.r2));
                let rows = f.samples.iter().map(|&(t, v)| [sci(t), sci(v)]);
                r.table = table(["parameter", "value"], rows.collect());
            }
            r.cite("approximate-solution error bounds for the gluing constructions");
            Ok(r)
        }
        NeckCommand::S2 { levels } => {
            let mut r = Report::new("neck s2");
            r.input("levels", levels);
            let s = neck::s2_neck_spectra(*levels);
            let list = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
            r.output("even_forms", list(&s.even_forms)).output("one_forms", list(&s.one_forms));
            r.output("endpoint_spectrum", neck::s2_endpoint_spectrum(*levels).iter().map(|e| fixed(*e)).collect::<Vec<_>>().join(","));
            r.output("fredholm_window", fixed(neck::s2_fredholm_window(*levels)?));
            r.cite("Hodge Laplacian spectra on the round S^2 and the flow across the spherical neck");
            Ok(r)
        }
    }
}

fn join<T: Display>(v: &[T]) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

fn catalog(file: Option<&std::path::Path>) -> Outcome {
    let mut r = Report::new("catalog verify");
    let text = match file {
        Some(path) => {
            r.input("file", path.display());
            std::fs::read_to_string(path)?
        }
        None => {
            r.input("file", "builtin");
            seifert::BUILTIN_CATALOG.to_string()
        }
    };
    let checks = seifert::verify_catalog(&seifert::parse_catalog(&text)?)?;
    let mut rows = Vec::new();
    for c in &checks {
        let id = match c.twist {
            Some(k) => format!("{}[k={k}]", c.entry),
            None => c.entry.clone(),
        };
        let status = match &c.outcome {
            CheckOutcome::Match => "ok",
            CheckOutcome::Discrepancy(diffs) => {
                for m in diffs {
                    r.discrepancy(&format!("{id}.{}", m.field), &m.expected, &m.computed);
                }
                "discrepancy"
            }
        };
        if !c.notes.is_empty() {
            r.output(format!("notes.{id}"), c.notes.join("; "));
        }
        let e = &c.report;
        rows.push([
            c.entry.clone(),
            c.twist.map_or_else(|| "-".into(), |k| k.to_string()),
            e.exists.to_string(),
            e.fiber_count.to_string(),
            e.dim_sections.to_string(),
            e.singular_set.map_or("-", |s| s.kind()).to_string(),
            status.to_string(),
        ]);
        r.cite(c.citation.clone());
    }
    r.output("records", checks.len());
    r.table = table(["entry", "k", "exists", "fibers", "dim", "singular_set", "status"], rows);
    Ok(r)
}
