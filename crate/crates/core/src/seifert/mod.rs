//! Seifert-fibered 3-manifolds over orbifold surfaces, existence criteria for
//! fiber-invariant Z2-harmonic spinors and 1-forms, Brieskorn spheres and the
//! example catalog.

mod brieskorn;
mod catalog;
mod existence;

pub use brieskorn::brieskorn_to_seifert;
pub use catalog::{
    parse_catalog, verify_catalog, Catalog, CatalogCheck, CatalogEntry, CheckOutcome, Linear, Mismatch,
    Structure, BUILTIN_CATALOG,
};
pub use existence::{
    oneform_existence, spinc_existence, spinor_existence, spinor_fiber_count, ExistenceKind,
    ExistenceReport, MetricParams, SingularSet, SpinorParams,
};

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use thiserror::Error;

use crate::orbifold::{OrbifoldError, OrbifoldLineBundle, OrbifoldSurface, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeifertError {
    #[error("exceptional fiber ({alpha}, {beta}) has gcd {gcd} != 1")]
    NotCoprime { alpha: i64, beta: i64, gcd: i64 },
    #[error("fiber multiplicity {0} must be positive")]
    NonPositiveMultiplicity(i64),
    #[error("twist k = 0 is only meaningful when the Euler bundle is trivial")]
    DegenerateTwist,
    #[error("Brieskorn exponents must be at least three integers >= 2, pairwise coprime: {0:?}")]
    InvalidBrieskorn(Vec<u32>),
    #[error("cannot parse Seifert invariants {0:?}; expected g,b,a1:b1,...")]
    Parse(String),
    #[error(transparent)]
    Orbifold(#[from] OrbifoldError),
}

/// Which orbifold line bundle plays the role of the circle bundle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub enum SignConvention {
    /// `deg L = b + sum beta_i / alpha_i`; the Hopf fibration of `(0, 1)` has
    /// degree +1.
    #[default]
    Positive,
    /// `deg L = -(b + sum beta_i / alpha_i)`.
    Negative,
}

impl SignConvention {
    pub fn as_str(self) -> &'static str {
        match self {
            SignConvention::Positive => "positive",
            SignConvention::Negative => "negative",
        }
    }
}

impl FromStr for SignConvention {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "positive" | "+" => Ok(SignConvention::Positive),
            "negative" | "-" => Ok(SignConvention::Negative),
            _ => Err(format!("unknown sign convention {s:?}")),
        }
    }
}

/// Unnormalized Seifert invariants `(g, b, (alpha_i, beta_i))`, normalized on
/// construction: multiplicity-one fibers fold into `b`, and each `beta_i` is
/// reduced into `1..alpha_i` with the quotient carried into `b`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SeifertManifold {
    genus: u32,
    b: i64,
    fibers: Vec<(u32, i64)>,
}

impl SeifertManifold {
    pub fn new(genus: u32, b: i64, fibers: &[(i64, i64)]) -> Result<Self, SeifertError> {
        let mut b = b;
        let mut normalized = Vec::with_capacity(fibers.len());
        for &(alpha, beta) in fibers {
            if alpha <= 0 {
                return Err(SeifertError::NonPositiveMultiplicity(alpha));
            }
            let gcd = alpha.gcd(&beta);
            if gcd != 1 {
                return Err(SeifertError::NotCoprime { alpha, beta, gcd });
            }
            let alpha_u32 = u32::try_from(alpha).map_err(|_| OrbifoldError::InvalidConeOrder(alpha))?;
            let (q, r) = beta.div_mod_floor(&alpha);
            b = b.checked_add(q).ok_or(OrbifoldError::Overflow)?;
            if alpha >= 2 {
                normalized.push((alpha_u32, r));
            }
        }
        // Same bound on the base as any orbifold surface.
        OrbifoldSurface::new(genus, normalized.iter().map(|f| f.0).collect())?;
        Ok(Self { genus, b, fibers: normalized })
    }

    /// Parses `g,b,a1:b1,a2:b2,...`.
    pub fn parse(s: &str) -> Result<Self, SeifertError> {
        let bad = || SeifertError::Parse(s.to_string());
        let mut parts = s.split(',').map(str::trim);
        let genus: u32 = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
        let b: i64 = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
        let mut fibers = Vec::new();
        for p in parts.filter(|p| !p.is_empty()) {
            let (a, beta) = p.split_once(':').ok_or_else(bad)?;
            let a: i64 = a.trim().parse().map_err(|_| bad())?;
            let beta: i64 = beta.trim().parse().map_err(|_| bad())?;
            fibers.push((a, beta));
        }
        Self::new(genus, b, &fibers)
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    pub fn fibers(&self) -> &[(u32, i64)] {
        &self.fibers
    }

    pub fn base(&self) -> OrbifoldSurface {
        OrbifoldSurface::new(self.genus, self.fibers.iter().map(|f| f.0).collect())
            .expect("normalized multiplicities are >= 2")
    }

    /// The orbifold line bundle whose unit circle bundle is this manifold.
    pub fn euler_bundle(&self, convention: SignConvention) -> OrbifoldLineBundle {
        let locals = self.fibers.iter().map(|f| f.1).collect();
        let l = OrbifoldLineBundle::new(self.base(), self.b, locals)
            .expect("normalized local parts are in range");
        match convention {
            SignConvention::Positive => l,
            SignConvention::Negative => l.dual().expect("small invariants"),
        }
    }

    /// `-(b + sum beta_i / alpha_i)`.
    pub fn euler_number(&self) -> Rational {
        -self.euler_bundle(SignConvention::Positive).degree()
    }

    pub fn has_spin_base(&self) -> bool {
        self.base().admits_spin_structure()
    }
}

impl fmt::Display for SeifertManifold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.genus, self.b)?;
        for (a, beta) in &self.fibers {
            write!(f, ",{a}:{beta}")?;
        }
        Ok(())
    }
}
