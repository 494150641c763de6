//! Worked examples with their expected invariants, stored as TOML.
//!
//! Each `[[entry]]` table has:
//!
//! | key            | type            | meaning                                            |
//! |----------------|-----------------|----------------------------------------------------|
//! | `name`         | string          | identifier                                         |
//! | `structure`    | string          | `spinor`, `spinc` or `oneform`                     |
//! | `seifert`      | string          | invariants `g,b,a1:b1,...` (or use `brieskorn`)    |
//! | `brieskorn`    | array of ints   | Brieskorn exponents                                |
//! | `twists`       | array of ints   | twists `k` to check (spinor/spinc)                 |
//! | `aux_degree`   | int             | degree of the auxiliary bundle, default 0          |
//! | `convention`   | string          | `positive` (default) or `negative`                 |
//! | `expect_exists`| bool            | expected existence                                 |
//! | `fibers`       | `{per_twist, offset}` | expected `N = per_twist * k + offset`        |
//! | `dim`          | `{per_twist, offset}` | expected section count, same form            |
//! | `singular_set` | string          | expected shape, as named by `SingularSet::kind`    |
//! | `citation`     | string          | where the example comes from                       |

use std::fmt;

use serde::Deserialize;

use super::{
    brieskorn_to_seifert, oneform_existence, spinc_existence, spinor_existence, ExistenceReport,
    SeifertError, SeifertManifold, SignConvention, SpinorParams,
};

pub const BUILTIN_CATALOG: &str = include_str!("../../data/catalog.toml");

/// Twists searched when an entry disagrees, to see whether another sign
/// convention or twist reproduces the expected counts.
const SWEEP_RANGE: i64 = 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Structure {
    Spinor,
    Spinc,
    Oneform,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
pub struct Linear {
    #[serde(default)]
    pub per_twist: i64,
    #[serde(default)]
    pub offset: i64,
}

impl Linear {
    pub fn at(self, k: i64) -> i64 {
        self.per_twist * k + self.offset
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CatalogEntry {
    pub name: String,
    pub structure: Structure,
    pub seifert: Option<String>,
    pub brieskorn: Option<Vec<u32>>,
    #[serde(default)]
    pub twists: Vec<i64>,
    #[serde(default)]
    pub aux_degree: i64,
    #[serde(default = "default_convention")]
    pub convention: String,
    pub expect_exists: bool,
    pub fibers: Option<Linear>,
    pub dim: Option<Linear>,
    pub singular_set: Option<String>,
    pub citation: String,
}

fn default_convention() -> String {
    "positive".into()
}

#[derive(Debug, Clone, Deserialize)]
pub struct Catalog {
    #[serde(rename = "entry")]
    pub entries: Vec<CatalogEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub field: &'static str,
    pub expected: String,
    pub computed: String,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: expected {}, computed {}", self.field, self.expected, self.computed)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckOutcome {
    Match,
    Discrepancy(Vec<Mismatch>),
}

#[derive(Debug, Clone)]
pub struct CatalogCheck {
    pub entry: String,
    pub twist: Option<i64>,
    pub citation: String,
    pub outcome: CheckOutcome,
    pub report: ExistenceReport,
    pub notes: Vec<String>,
}

pub fn parse_catalog(text: &str) -> Result<Catalog, SeifertError> {
    toml::from_str(text).map_err(|e| SeifertError::Parse(e.to_string()))
}

impl CatalogEntry {
    pub fn manifold(&self) -> Result<SeifertManifold, SeifertError> {
        match (&self.seifert, &self.brieskorn) {
            (Some(s), None) => SeifertManifold::parse(s),
            (None, Some(exps)) => brieskorn_to_seifert(exps),
            _ => Err(SeifertError::Parse(format!(
                "entry {} needs exactly one of seifert or brieskorn",
                self.name
            ))),
        }
    }

    fn convention(&self) -> Result<SignConvention, SeifertError> {
        self.convention.parse().map_err(SeifertError::Parse)
    }

    fn run(&self, y: &SeifertManifold, k: i64, convention: SignConvention) -> Result<ExistenceReport, SeifertError> {
        let p = SpinorParams { k, aux_degree: self.aux_degree, convention, strict: false };
        match self.structure {
            Structure::Spinor => spinor_existence(y, p),
            Structure::Spinc => spinc_existence(y, p),
            Structure::Oneform => oneform_existence(y),
        }
    }

    fn compare(&self, r: &ExistenceReport, k: i64) -> Vec<Mismatch> {
        let mut diffs = Vec::new();
        let mut push = |field, expected: String, computed: String| {
            if expected != computed {
                diffs.push(Mismatch { field, expected, computed });
            }
        };
        push("exists", self.expect_exists.to_string(), r.exists.to_string());
        if let Some(f) = self.fibers {
            push("fibers", f.at(k).to_string(), r.fiber_count.to_string());
        }
        if let Some(d) = self.dim {
            push("dim", d.at(k).to_string(), r.dim_sections.to_string());
        }
        if let Some(kind) = &self.singular_set {
            push("singular_set", kind.clone(), r.singular_set.map(|s| s.kind()).unwrap_or("none").to_string());
        }
        diffs
    }

    /// Conventions and twists under which the constant expectations hold.
    fn sweep(&self, y: &SeifertManifold) -> Vec<(SignConvention, i64)> {
        let constant = |l: Option<Linear>| l.map_or(true, |l| l.per_twist == 0);
        if self.structure == Structure::Oneform || !constant(self.fibers) || !constant(self.dim) {
            return Vec::new();
        }
        let mut hits = Vec::new();
        for convention in [SignConvention::Positive, SignConvention::Negative] {
            for k in (-SWEEP_RANGE..=SWEEP_RANGE).filter(|&k| k != 0) {
                if let Ok(r) = self.run(y, k, convention) {
                    if self.compare(&r, k).is_empty() {
                        hits.push((convention, k));
                    }
                }
            }
        }
        hits.sort_by_key(|&(_, k)| k.abs());
        hits
    }
}

pub fn verify_catalog(catalog: &Catalog) -> Result<Vec<CatalogCheck>, SeifertError> {
    let mut checks = Vec::new();
    for entry in &catalog.entries {
        let y = entry.manifold()?;
        let convention = entry.convention()?;
        let twists: Vec<Option<i64>> = match entry.structure {
            Structure::Oneform => vec![None],
            _ if entry.twists.is_empty() => {
                return Err(SeifertError::Parse(format!("entry {} lists no twists", entry.name)))
            }
            _ => entry.twists.iter().copied().map(Some).collect(),
        };
        for twist in twists {
            let k = twist.unwrap_or(0);
            let report = entry.run(&y, k, convention)?;
            let diffs = entry.compare(&report, k);
            let mut notes = report.warnings.clone();
            if !diffs.is_empty() {
                notes.extend(report.failures.iter().map(|f| format!("failed: {f}")));
            }
            let outcome = if diffs.is_empty() {
                CheckOutcome::Match
            } else {
                let hits = entry.sweep(&y);
                if hits.is_empty() {
                    notes.push(format!("no sign convention and twist |k| <= {SWEEP_RANGE} reproduces the entry"));
                } else {
                    let listed: Vec<String> = hits
                        .iter()
                        .take(4)
                        .map(|(c, k)| format!("{} k={k}", c.as_str()))
                        .collect();
                    notes.push(format!("entry reproduced only at: {}", listed.join(", ")));
                }
                CheckOutcome::Discrepancy(diffs)
            };
            checks.push(CatalogCheck {
                entry: entry.name.clone(),
                twist,
                citation: entry.citation.clone(),
                outcome,
                report,
                notes,
            });
        }
    }
    Ok(checks)
}
