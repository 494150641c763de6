//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! The process exits non-zero when a criterion fails, except for the single
//! documented deviation listed in `KNOWN_UNATTAINABLE`, which still prints
//! FAIL. Set `ACCEPTANCE_STRICT=1` to make that one fatal too.

use std::time::{Duration, Instant};

use nalgebra::Matrix2;
use num_complex::Complex64;
use z2harm::neck::*;
use z2harm::orbifold::{OrbifoldLineBundle, OrbifoldSurface, Rational, SectionCount};
use z2harm::seifert::*;
use z2harm::surgery::*;

/// Sub-checks that cannot hold as stated, with the reason.
const KNOWN_UNATTAINABLE: &[(&str, &str)] = &[(
    "8b",
    "for d = 2 the weight 0 is forbidden (Z + d/2 = Z) and the kernel is 1 below it and 3 above it",
)];

struct Check {
    id: &'static str,
    pass: bool,
    detail: String,
}

fn check(id: &'static str, pass: bool, detail: impl Into<String>) -> Check {
    Check { id, pass, detail: detail.into() }
}

struct Criterion {
    number: u32,
    title: &'static str,
    checks: Vec<Check>,
    elapsed: Duration,
}

fn timed(number: u32, title: &'static str, budget: Option<Duration>, f: impl FnOnce() -> Vec<Check>) -> Criterion {
    let start = Instant::now();
    let mut checks = f();
    let elapsed = start.elapsed();
    if let Some(b) = budget {
        checks.push(check("time", elapsed < b, format!("{:.2}s < {:.0}s", elapsed.as_secs_f64(), b.as_secs_f64())));
    }
    Criterion { number, title, checks, elapsed }
}

fn rat(p: i64, q: i64) -> Rational {
    Rational::new(p as i128, q as i128)
}

/// Multisets of cone orders in `2..=max_order` with at most `max_len` entries.
fn order_multisets(max_len: usize, max_order: u32) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for m in &frontier {
            let lo = m.last().copied().unwrap_or(2);
            for a in lo..=max_order {
                let mut v: Vec<u32> = m.clone();
                v.push(a);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

fn chi_oracle(g: u32, orders: &[u32]) -> Rational {
    orders.iter().fold(Rational::from_integer(2 - 2 * g as i128), |acc, &a| acc - (Rational::from_integer(1) - rat(1, a as i64)))
}

fn degree_oracle(b: i64, locals: &[i64], orders: &[u32]) -> Rational {
    locals.iter().zip(orders).fold(Rational::from_integer(b as i128), |acc, (&beta, &a)| acc + rat(beta, a as i64))
}

fn criterion_1() -> Vec<Check> {
    let sets = order_multisets(6, 11);
    let (mut surfaces, mut failures) = (0u64, Vec::new());
    for g in 0..=5u32 {
        for orders in &sets {
            surfaces += 1;
            let s = OrbifoldSurface::new(g, orders.clone()).unwrap();
            let chi = chi_oracle(g, orders);
            if s.canonical_bundle().degree() != -chi {
                failures.push(format!("deg K on {s}"));
            }
            let loc1: Vec<i64> = orders.iter().enumerate().map(|(i, &a)| i as i64 % a as i64).collect();
            let loc2: Vec<i64> = orders.iter().enumerate().map(|(i, &a)| (3 * i as i64 + 1) % a as i64).collect();
            let l1 = OrbifoldLineBundle::new(s.clone(), g as i64 - 2, loc1.clone()).unwrap();
            let l2 = OrbifoldLineBundle::new(s.clone(), 1, loc2.clone()).unwrap();
            let (d1, d2) = (degree_oracle(g as i64 - 2, &loc1, orders), degree_oracle(1, &loc2, orders));
            if l1.degree() != d1 || l2.degree() != d2 {
                failures.push(format!("degree on {s}"));
            }
            let t = l1.tensor(&l2).unwrap();
            let normalized = t.locals().iter().zip(orders).all(|(&b, &a)| (0..a as i64).contains(&b));
            let locals_ok = t.locals().iter().zip(loc1.iter().zip(&loc2)).zip(orders).all(|((&b, (&x, &y)), &a)| b == (x + y) % a as i64);
            if t.degree() != d1 + d2 || !normalized || !locals_ok {
                failures.push(format!("tensor on {s}"));
            }
            let inv = l2.dual().unwrap();
            if !l2.tensor(&inv).unwrap().is_trivial() || inv.degree() != -d2 {
                failures.push(format!("inverse on {s}"));
            }
        }
    }
    vec![
        check("1a", failures.is_empty(), format!("{surfaces} surfaces, degree/tensor/inverse/deg K exact; failures {:?}", &failures[..failures.len().min(3)])),
    ]
}

fn criterion_2() -> Vec<Check> {
    let sets = order_multisets(6, 11);
    let (mut cases, mut failures) = (0u64, Vec::new());
    for g in 0..=5i64 {
        for orders in &sets {
            let n = orders.len() as i64;
            if 4 * g - 4 + n < 2 * g {
                continue;
            }
            cases += 1;
            let s = OrbifoldSurface::new(g as u32, orders.clone()).unwrap();
            let h0 = s.canonical_bundle().power(2).unwrap().h0().unwrap();
            if h0 != SectionCount::Exact((3 * g - 3 + n) as u64) {
                failures.push(format!("{s}: {h0}"));
            }
        }
    }
    vec![check("2a", failures.is_empty() && cases > 0, format!("{cases} surfaces with h0(K^2) = 3g-3+n; failures {:?}", &failures[..failures.len().min(3)]))]
}

/// Three-case classification: g = 0 and n >= 4, g = 1 and n >= 2, or g >= 2.
fn classification(g: u32, n: usize) -> bool {
    (g == 0 && n >= 4) || (g == 1 && n >= 2) || g >= 2
}

fn criterion_3() -> Vec<Check> {
    let primes = [2i64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71];
    let mut failures = Vec::new();
    let mut cases = 0;
    for g in 0..=10u32 {
        for n in 0..=20usize {
            // Two families of fibers per (g, n): repeated order 2 and distinct primes.
            let fams: [Vec<(i64, i64)>; 2] = [(0..n).map(|_| (2, 1)).collect(), primes[..n].iter().map(|&a| (a, a - 1)).collect()];
            for fibers in fams {
                cases += 1;
                let y = SeifertManifold::new(g, -1, &fibers).unwrap();
                let r = oneform_existence(&y).unwrap();
                if r.exists != classification(g, n) {
                    failures.push(format!("g {g} n {n}"));
                }
            }
        }
    }
    vec![check("3a", failures.is_empty(), format!("{cases} manifolds agree with the three-case classification; failures {failures:?}"))]
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn criterion_4() -> Vec<Check> {
    let y = brieskorn_to_seifert(&[2, 3, 5]).unwrap();
    let invariants = y.genus() == 0 && y.b() == -1 && y.fibers() == [(2, 1), (3, 1), (5, 1)];
    let euler = y.euler_number() == rat(-1, 30);
    let pool = [2u32, 3, 4, 5, 7, 9, 11, 13, 17, 25];
    let mut tuples: Vec<Vec<u32>> = Vec::new();
    for mask in 0u32..(1 << pool.len()) {
        let t: Vec<u32> = pool.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &a)| a).collect();
        let coprime = t.iter().enumerate().all(|(i, &a)| t[i + 1..].iter().all(|&b| gcd(a, b) == 1));
        if (3..=6).contains(&t.len()) && coprime {
            tuples.push(t);
        }
    }
    let mut failures = Vec::new();
    for t in &tuples {
        let y = brieskorn_to_seifert(t).unwrap();
        if oneform_existence(&y).unwrap().exists != (t.len() >= 4) {
            failures.push(t.clone());
        }
    }
    vec![
        check("4a", invariants, format!("Sigma(2,3,5) -> {y}")),
        check("4b", euler, format!("euler number {}", y.euler_number())),
        check("4c", failures.is_empty(), format!("{} coprime tuples, 1-forms iff n >= 4; failures {failures:?}", tuples.len())),
    ]
}

fn criterion_5() -> Vec<Check> {
    let checks = verify_catalog(&parse_catalog(BUILTIN_CATALOG).unwrap()).unwrap();
    let family = |name: &str, kind: &str| {
        let rows: Vec<&CatalogCheck> = checks.iter().filter(|c| c.entry == name).collect();
        !rows.is_empty()
            && rows.iter().all(|c| {
                let k = c.twist.unwrap();
                let set = c.report.singular_set;
                c.outcome == CheckOutcome::Match
                    && c.report.fiber_count == 2 * k
                    && set.is_some_and(|s| s.kind() == kind && s.components() == 2 * k as u64)
            })
    };
    let s3 = family("S3-berger", "hopf-link");
    let s1s2 = family("S1xS2", "circle-times-points");
    let poincare: Vec<&CatalogCheck> = checks.iter().filter(|c| c.entry == "sigma-2-3-5").collect();
    let (poincare_ok, detail) = match poincare.as_slice() {
        [c] => match &c.outcome {
            CheckOutcome::Match => (c.report.fiber_count == 1 && c.report.dim_sections == SectionCount::Exact(2), "reproduced N=1, dim=2".to_string()),
            CheckOutcome::Discrepancy(diffs) => {
                let fibers = diffs.iter().any(|m| m.field == "fibers" && m.expected == "1");
                let shown: Vec<String> = diffs.iter().map(|m| m.to_string()).collect();
                (fibers, format!("discrepancy reported: {}", shown.join("; ")))
            }
        },
        _ => (false, "entry missing".to_string()),
    };
    let all_ran = checks.len() >= 10;
    vec![
        check("5a", all_ran, format!("{} catalog records verified end to end", checks.len())),
        check("5b", s3, "S^3: 2k-component Hopf link for k = 1..4"),
        check("5c", s1s2, "S^1 x S^2: S^1 x {2k points} for k = 1..4"),
        check("5d", poincare_ok, detail),
    ]
}

fn criterion_6() -> Vec<Check> {
    let mut failures = Vec::new();
    for d1 in 0..30u64 {
        for d2 in 0..30u64 {
            let both = twisted_h1_connected_sum(Summand::Twisted { h1_minus: d1 }, Summand::Twisted { h1_minus: d2 }).unwrap();
            let mixed = twisted_h1_connected_sum(Summand::Twisted { h1_minus: d1 }, Summand::Untwisted { b1: d2 }).unwrap();
            let flipped = twisted_h1_connected_sum(Summand::Untwisted { b1: d2 }, Summand::Twisted { h1_minus: d1 }).unwrap();
            if both != d1 + d2 + 1 || mixed != d1 + d2 || flipped != d1 + d2 {
                failures.push(format!("h1 {d1} {d2}"));
            }
            if representation_dim_sum(d1, d2) != d1 + d2 + 6 {
                failures.push(format!("dims {d1} {d2}"));
            }
            let s = stratum_gap(d1, d2);
            if s.gap != 2 || s.ambient - s.glued_stratum != 2 {
                failures.push(format!("gap {d1} {d2}"));
            }
        }
    }
    for g1 in 2..40u64 {
        for g2 in 2..40u64 {
            let g = g1 + g2;
            let genus = glued_cover_genus(g1, g2).unwrap().genus;
            // Riemann-Hurwitz over the glued surface, branched at the simple zeros.
            let rh = branched_cover_genus(g, 4 * g - 8).unwrap();
            if genus != 4 * g - 5 || genus != rh {
                failures.push(format!("genus {g1} {g2}"));
            }
            let z = glued_zero_profile(g1, g2).unwrap();
            // Degree of a quadratic differential on genus g is 4g - 4.
            if z.simple != 4 * g - 8 || z.even_order != 4 || z.total() != 4 * g - 4 {
                failures.push(format!("zeros {g1} {g2}"));
            }
        }
    }
    vec![check("6a", failures.is_empty(), format!("h1, genus, zeros, dims, gap exact on sampled inputs; failures {:?}", &failures[..failures.len().min(3)]))]
}

fn criterion_7() -> Vec<Check> {
    let cfg = OdeConfig { s_max: 20.0, ..OdeConfig::default() };
    let modes: Vec<i64> = (-5..=5).collect();
    let (mut worst_rate, mut worst_err, mut errors) = (0.0f64, 0.0f64, Vec::new());
    for sol in mode_sweep(1, &modes, &cfg, true) {
        match sol {
            Ok(sol) => {
                let k = sol.k as f64;
                worst_rate = worst_rate.max((sol.rate_plus - (k - 0.5)).abs()).max((sol.rate_minus + (k + 0.5)).abs());
                worst_err = worst_err.max(sol.max_rel_error());
            }
            Err(e) => errors.push(e.to_string()),
        }
    }
    vec![
        check("7a", errors.is_empty() && worst_rate <= 0.02, format!("max exponent error {worst_rate:.2e} (tol 0.02) {errors:?}")),
        check("7b", errors.is_empty() && worst_err < 1e-8, format!("max pointwise rel error {worst_err:.2e} (tol 1e-8)")),
    ]
}

fn criterion_8() -> Vec<Check> {
    let d1: Vec<(f64, Result<(u64, u64), NeckError>)> = [-0.4, -0.2, 0.0, 0.2, 0.4].iter().map(|&m| (m, mode_kernel_dimension(1, m))).collect();
    let d2: Vec<(f64, Result<(u64, u64), NeckError>)> = [-0.9, 0.0, 0.9].iter().map(|&m| (m, mode_kernel_dimension(2, m))).collect();
    let show = |v: &[(f64, Result<(u64, u64), NeckError>)]| {
        v.iter()
            .map(|(m, r)| match r {
                Ok((k, _)) => format!("{m}:{k}"),
                Err(_) => format!("{m}:non-Fredholm"),
            })
            .collect::<Vec<_>>()
            .join(" ")
    };
    let ones = |v: &[(f64, Result<(u64, u64), NeckError>)]| v.iter().all(|(_, r)| matches!(r, Ok((1, _))));
    let mut forbidden_ok = true;
    for j in -6..6 {
        let w = j as f64 + 0.5;
        forbidden_ok &= matches!(mode_kernel_dimension(1, w), Err(NeckError::NonFredholmWeight { .. }));
        for off in [1e-6, 0.25, 0.5] {
            forbidden_ok &= mode_kernel_dimension(1, w + off).is_ok();
        }
    }
    vec![
        check("8a", ones(&d1), format!("d=1 kernel {}", show(&d1))),
        check("8b", ones(&d2), format!("d=2 kernel {}", show(&d2))),
        check("8c", forbidden_ok, "d=1 non-Fredholm exactly on Z + 1/2 in [-5.5, 5.5]"),
    ]
}

fn criterion_9() -> Vec<Check> {
    let mut out = Vec::new();
    for r0 in [20.0, 50.0, 100.0] {
        let split = finite_cylinder_bvp(ModelNeck { degree: 1, mu: 0.0 }, r0, BoundaryCondition::Split, 6, 400, true);
        let matched = finite_cylinder_bvp(ModelNeck { degree: 1, mu: 0.0 }, r0, BoundaryCondition::Matched, 6, 400, true);
        let (ok, detail) = match (split, matched) {
            (Ok(s), Ok(m)) => (
                (s.kernel, s.cokernel) == (0, 0) && (m.kernel, m.cokernel) == (2, 2) && m.gap >= 1e6,
                format!("R0={r0}: (i) ({}, {}), (ii) ({}, {}), gap {:.2e}", s.kernel, s.cokernel, m.kernel, m.cokernel, m.gap),
            ),
            (s, m) => (false, format!("R0={r0}: {:?} {:?}", s.err(), m.err())),
        };
        out.push(check(["9a", "9b", "9c"][out.len()], ok, detail));
    }
    out
}

/// `e^{-x} I_n(x) = (1/pi) int_0^pi e^{x (cos t - 1)} cos(n t) dt`, trapezoid rule.
fn bessel_oracle(n: i64, x: f64) -> f64 {
    let m = 4000;
    let h = std::f64::consts::PI / m as f64;
    let f = |t: f64| (x * (t.cos() - 1.0)).exp() * (n as f64 * t).cos();
    let inner: f64 = (1..m).map(|j| f(j as f64 * h)).sum();
    (0.5 * (f(0.0) + f(std::f64::consts::PI)) + inner) * h / std::f64::consts::PI
}

fn criterion_10() -> Vec<Check> {
    let mut worst_residual = 0.0f64;
    let mut worst_value = 0.0f64;
    let mut samples = 0;
    for k in 0..=3 {
        for ell in [-1000, -7, 1, 3, 64, 1000] {
            for delta in [0.01, 0.1, 0.5] {
                let p = ModeProblem3D { k, ell, delta, mu: 0.0 };
                let rs: Vec<f64> = [0.01, 0.1, 0.5, 0.9].iter().map(|t| t * 700.0 / p.scale()).collect();
                let sol = bessel_mode_solution(&p, &rs).unwrap();
                worst_residual = worst_residual.max(sol.residual);
                for s in &sol.samples {
                    samples += 1;
                    let oracle = bessel_oracle(k, s.x);
                    worst_value = worst_value.max((s.alpha - oracle).abs() / (oracle.abs() + 1e-300));
                }
            }
        }
    }
    let base = ModeProblem3D { k: 0, ell: 1, delta: 0.05, mu: 0.0 };
    let ells = [64, 128, 256, 512, 1024];
    let devs: Vec<f64> = ells.iter().map(|&l| (cokernel_asymptotics(&ModeProblem3D { ell: l, ..base }, 20.0, -18.0).unwrap().ratio - 1.0).abs()).collect();
    let shrinking = devs.windows(2).all(|w| w[1] < w[0]);
    let (dev_slope, dev_r2) = asymptotic_deviation_fit(&base, &ells, 20.0, -18.0).unwrap();
    let (sharp, _) = pairing_scaling(&base, &ells, 20.0, Cutoff::Sharp).unwrap();
    let (smooth, _) = pairing_scaling(&base, &ells, 20.0, Cutoff::Smooth { width: 2.0 }).unwrap();
    let one = Complex64::new(1.0, 0.0);
    let invertible = ells.iter().all(|&l| {
        obstruction_pairing(&ModeProblem3D { ell: l, ..base }, 20.0, one, one, [one, Complex64::new(0.0, 0.0)], Cutoff::Sharp)
            .unwrap()
            .invertible
    });
    vec![
        check("10a", worst_residual < 1e-9 && worst_value < 1e-10, format!("{samples} samples: residual {worst_residual:.2e} (tol 1e-9), value vs integral oracle {worst_value:.2e}")),
        check(
            "10b",
            shrinking && devs[devs.len() - 1] < 0.01 && (dev_slope + 1.0).abs() < 0.1,
            format!("|ratio-1| {:.2e}..{:.2e}, log-log slope {dev_slope:.3} (r2 {dev_r2:.4})", devs[0], devs[devs.len() - 1]),
        ),
        check(
            "10c",
            (sharp + 0.5).abs() <= 0.05 && (smooth + 0.5).abs() <= 0.05 && invertible,
            format!("pairing slope {sharp:.4} sharp, {smooth:.4} smooth (target -0.5 +- 0.05)"),
        ),
    ]
}

fn criterion_11() -> Vec<Check> {
    let mut failures = Vec::new();
    for j in 0..=40 {
        let delta = 10f64.powf(-(j as f64) / 8.0);
        let mut l = 0u64;
        while ((l + 1) as f64) * delta <= 1.0 + 1e-12 {
            l += 1;
        }
        let r = index_3d(delta).unwrap();
        if r.cutoff != l || r.index != -(4 * l as i64 + 2) || r.constraints != 2 * (2 * l + 1) {
            failures.push(delta);
        }
    }
    for n in 1..=200u64 {
        let r = index_3d(1.0 / n as f64).unwrap();
        if r.cutoff != n || r.index != -(4 * n as i64 + 2) {
            failures.push(1.0 / n as f64);
        }
    }
    let fit = error_rate_fit(Regime::OneformPinch, 0.0, &default_sweep(Regime::OneformPinch)).unwrap();
    let flags: Vec<(f64, bool)> = [-0.2, -0.05, 0.0, 0.05, 0.1, 0.2].iter().map(|&mu| (mu, error_rate(Regime::TorusPinch, 1e-3, mu).unwrap().vanishes)).collect();
    let flag_ok = flags.iter().all(|&(mu, v)| v == (mu <= 0.0));
    let torus = error_rate_fit(Regime::TorusPinch, 0.1, &default_sweep(Regime::TorusPinch)).unwrap();
    vec![
        check("11a", failures.is_empty(), format!("index and constraint count on 41 log-grid and 200 reciprocal deltas; failures {failures:?}")),
        check("11b", (fit.fitted_exponent - 1.0).abs() <= 0.1, format!("1-form pinch at mu=0: fitted {:.4} vs 1 - mu = 1", fit.fitted_exponent)),
        check(
            "11c",
            flag_ok && (torus.fitted_exponent - torus.predicted_exponent).abs() <= 0.1,
            format!("torus vanishes {flags:?}; mu=0.1 exponent {:.4} vs {:.4}", torus.fitted_exponent, torus.predicted_exponent),
        ),
    ]
}

fn criterion_12() -> Vec<Check> {
    let s = s2_neck_spectra(4);
    let lists = s.even_forms == [0, 2, 6, 12] && s.one_forms == [1, 5, 11, 19];
    let mut oracle = f64::INFINITY;
    for lambda_sq in s.even_forms.iter().chain(&s.one_forms).copied() {
        for h in [-1.0, 1.0] {
            let l = (lambda_sq as f64).sqrt();
            let eig = Matrix2::new(0.0, l, l, h).symmetric_eigenvalues();
            for e in eig.iter() {
                oracle = oracle.min((e + 0.5).abs());
            }
        }
    }
    let mu0 = s2_fredholm_window(4).unwrap();
    vec![
        check("12a", lists, format!("{:?} / {:?}", s.even_forms, s.one_forms)),
        check("12b", (mu0 - oracle).abs() < 1e-12 && mu0 > 0.0 && mu0 < 0.5, format!("mu0 {mu0:.12} vs eigenvalue oracle {oracle:.12}; 0 inside (-mu0, mu0)")),
    ]
}

fn main() {
    let s = Duration::from_secs;
    let criteria = vec![
        timed(1, "orbifold arithmetic", Some(s(10)), criterion_1),
        timed(2, "Riemann-Roch for K^2", None, criterion_2),
        timed(3, "1-form existence classification", None, criterion_3),
        timed(4, "Brieskorn spheres", None, criterion_4),
        timed(5, "catalog verification", None, criterion_5),
        timed(6, "connected-sum bookkeeping", Some(s(1)), criterion_6),
        timed(7, "neck mode ODE", Some(s(30)), criterion_7),
        timed(8, "kernel dimensions and forbidden weights", None, criterion_8),
        timed(9, "finite-cylinder BVP", Some(s(60)), criterion_9),
        timed(10, "Bessel cokernels and pairing", None, criterion_10),
        timed(11, "index and error rates", None, criterion_11),
        timed(12, "S^2 neck window", None, criterion_12),
    ];
    let mut fatal = 0;
    let strict = std::env::var_os("ACCEPTANCE_STRICT").is_some();
    for c in &criteria {
        let pass = c.checks.iter().all(|k| k.pass);
        println!("{} criterion {:>2}: {} ({:.2}s)", if pass { "PASS" } else { "FAIL" }, c.number, c.title, c.elapsed.as_secs_f64());
        for k in &c.checks {
            let known = KNOWN_UNATTAINABLE.iter().find(|(id, _)| *id == k.id);
            let mark = match (k.pass, known) {
                (true, _) => "ok  ",
                (false, Some(_)) => "FAIL (documented)",
                (false, None) => "FAIL",
            };
            println!("    [{}] {mark} {}", k.id, k.detail);
            if let (false, Some((_, why))) = (k.pass, known) {
                println!("         reason: {why}");
            }
            if !k.pass && (known.is_none() || strict) {
                fatal += 1;
            }
        }
    }
    let passed = criteria.iter().filter(|c| c.checks.iter().all(|k| k.pass)).count();
    println!("{passed}/{} criteria pass; {fatal} unexpected failure(s)", criteria.len());
    if fatal > 0 {
        std::process::exit(1);
    }
}
