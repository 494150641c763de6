use std::fmt;

use num_integer::Integer;

use super::{OrbifoldError, OrbifoldSurface, Rational};

/// Orbifold line bundle `(b; beta_1, ..., beta_n)` with `0 <= beta_i < a_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OrbifoldLineBundle {
    surface: OrbifoldSurface,
    b: i64,
    locals: Vec<i64>,
}

/// Dimension of the space of holomorphic sections, when it can be decided.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SectionCount {
    Exact(u64),
    /// Neither vanishing criterion applies; `lower_bound` comes from
    /// Riemann-Roch.
    Indeterminate { lower_bound: u64 },
}

impl SectionCount {
    pub fn exact(self) -> Option<u64> {
        match self {
            SectionCount::Exact(n) => Some(n),
            SectionCount::Indeterminate { .. } => None,
        }
    }
}

impl fmt::Display for SectionCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SectionCount::Exact(n) => write!(f, "{n}"),
            SectionCount::Indeterminate { lower_bound } => write!(f, ">={lower_bound}"),
        }
    }
}

impl OrbifoldLineBundle {
    pub fn new(surface: OrbifoldSurface, b: i64, locals: Vec<i64>) -> Result<Self, OrbifoldError> {
        let orders = surface.cone_orders();
        if locals.len() != orders.len() {
            return Err(OrbifoldError::ArityMismatch { expected: orders.len(), found: locals.len() });
        }
        for (index, (&beta, &order)) in locals.iter().zip(orders).enumerate() {
            if beta < 0 || beta >= order as i64 {
                return Err(OrbifoldError::LocalPartOutOfRange { index, beta, order });
            }
        }
        Ok(Self { surface, b, locals })
    }

    /// Parses `b` or `b;beta_1,...` against a given surface.
    pub fn parse(surface: &OrbifoldSurface, s: &str) -> Result<Self, OrbifoldError> {
        let bad = || OrbifoldError::Parse(s.to_string());
        let (b, rest) = s.split_once(';').unwrap_or((s, ""));
        let b: i64 = b.trim().parse().map_err(|_| bad())?;
        let locals = rest
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<i64>().map_err(|_| bad()))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(surface.clone(), b, locals)
    }

    pub fn surface(&self) -> &OrbifoldSurface {
        &self.surface
    }

    /// Degree of the desingularized bundle.
    pub fn b(&self) -> i64 {
        self.b
    }

    pub fn locals(&self) -> &[i64] {
        &self.locals
    }

    /// `b + sum beta_i / a_i`.
    pub fn degree(&self) -> Rational {
        let mut d = Rational::from_integer(self.b as i128);
        for (&beta, &a) in self.locals.iter().zip(self.surface.cone_orders()) {
            d += Rational::new(beta as i128, a as i128);
        }
        d
    }

    pub fn is_trivial(&self) -> bool {
        self.b == 0 && self.locals.iter().all(|&x| x == 0)
    }

    /// Adds local parts cone by cone, carrying each overflow into `b`.
    pub fn tensor(&self, other: &Self) -> Result<Self, OrbifoldError> {
        if self.surface != other.surface {
            return Err(OrbifoldError::SurfaceMismatch);
        }
        let mut b = self.b.checked_add(other.b).ok_or(OrbifoldError::Overflow)?;
        let mut locals = Vec::with_capacity(self.locals.len());
        for ((&x, &y), &a) in self.locals.iter().zip(&other.locals).zip(self.surface.cone_orders()) {
            let (carry, rem) = (x + y).div_mod_floor(&(a as i64));
            b += carry;
            locals.push(rem);
        }
        Ok(Self { surface: self.surface.clone(), b, locals })
    }

    /// `L^m` for any integer `m`; negative powers give duals.
    pub fn power(&self, m: i64) -> Result<Self, OrbifoldError> {
        let mut b = self.b.checked_mul(m).ok_or(OrbifoldError::Overflow)?;
        let mut locals = Vec::with_capacity(self.locals.len());
        for (&beta, &a) in self.locals.iter().zip(self.surface.cone_orders()) {
            let prod = beta.checked_mul(m).ok_or(OrbifoldError::Overflow)?;
            let (carry, rem) = prod.div_mod_floor(&(a as i64));
            b = b.checked_add(carry).ok_or(OrbifoldError::Overflow)?;
            locals.push(rem);
        }
        Ok(Self { surface: self.surface.clone(), b, locals })
    }

    pub fn dual(&self) -> Result<Self, OrbifoldError> {
        self.power(-1)
    }

    /// Number of holomorphic sections. Exact when the bundle is trivial, when
    /// it has nonpositive degree and is nontrivial, or when the Serre dual
    /// `L^-1 (x) K` falls into one of those cases, in which case orbifold
    /// Riemann-Roch `h0(L) - h0(L^-1 K) = 1 - g + b` settles it.
    pub fn h0(&self) -> Result<SectionCount, OrbifoldError> {
        if let Some(n) = vanishing_count(self) {
            return Ok(SectionCount::Exact(n));
        }
        let rr = 1 - self.surface.genus() as i64 + self.b;
        let serre = self.dual()?.tensor(&self.surface.canonical_bundle())?;
        Ok(match vanishing_count(&serre) {
            Some(n) => SectionCount::Exact(u64::try_from(rr + n as i64).expect("h0 is nonnegative")),
            None => SectionCount::Indeterminate { lower_bound: rr.max(0) as u64 },
        })
    }
}

fn vanishing_count(l: &OrbifoldLineBundle) -> Option<u64> {
    if l.is_trivial() {
        Some(1)
    } else if l.degree() <= Rational::from_integer(0) {
        Some(0)
    } else {
        None
    }
}

impl fmt::Display for OrbifoldLineBundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}", self.b)?;
        if !self.locals.is_empty() {
            let parts: Vec<String> = self.locals.iter().map(i64::to_string).collect();
            write!(f, "; {}", parts.join(", "))?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s235() -> OrbifoldSurface {
        OrbifoldSurface::new(0, vec![2, 3, 5]).unwrap()
    }

    fn bundle(s: &OrbifoldSurface, b: i64, locals: &[i64]) -> OrbifoldLineBundle {
        OrbifoldLineBundle::new(s.clone(), b, locals.to_vec()).unwrap()
    }

    #[test]
    fn degree_example() {
        assert_eq!(bundle(&s235(), -1, &[1, 1, 1]).degree(), Rational::new(1, 30));
    }

    #[test]
    fn tensor_example_carries_per_cone() {
        let s = s235();
        let t = bundle(&s, -2, &[1, 2, 4]).tensor(&bundle(&s, -1, &[0, 1, 4])).unwrap();
        assert_eq!(t, bundle(&s, -1, &[1, 0, 3]));
        assert_eq!(t.degree(), Rational::new(1, 10));
    }

    #[test]
    fn power_example() {
        let s = s235();
        assert_eq!(bundle(&s, -1, &[1, 1, 1]).power(-4).unwrap(), bundle(&s, -1, &[0, 2, 1]));
    }

    #[test]
    fn negative_degree_has_no_sections() {
        assert_eq!(bundle(&s235(), -1, &[1, 1, 0]).h0().unwrap(), SectionCount::Exact(0));
    }

    #[test]
    fn canonical_of_genus_two() {
        let s = OrbifoldSurface::new(2, vec![]).unwrap();
        let k = s.canonical_bundle();
        assert_eq!(k.h0().unwrap(), SectionCount::Exact(2));
        assert_eq!(k.power(2).unwrap().h0().unwrap(), SectionCount::Exact(3));
    }

    #[test]
    fn invalid_inputs() {
        let s = s235();
        assert!(matches!(
            OrbifoldLineBundle::new(s.clone(), 0, vec![2, 0, 0]),
            Err(OrbifoldError::LocalPartOutOfRange { index: 0, .. })
        ));
        assert!(matches!(
            OrbifoldLineBundle::new(s.clone(), 0, vec![0, 0]),
            Err(OrbifoldError::ArityMismatch { .. })
        ));
        let other = OrbifoldSurface::new(0, vec![2, 3, 7]).unwrap();
        assert_eq!(
            bundle(&s, 0, &[0, 0, 0]).tensor(&bundle(&other, 0, &[0, 0, 0])),
            Err(OrbifoldError::SurfaceMismatch)
        );
    }

    /// Sections of an orbifold bundle are the sections of its desingularized
    /// bundle `|L|` of degree `b`. On a curve of genus `g` this is decided for
    /// `b < 0` and `b > 2g - 2`, and for `b = 0` in genus 0.
    fn desingularized_oracle(l: &OrbifoldLineBundle) -> Option<u64> {
        let g = l.surface().genus() as i64;
        let b = l.b();
        if b < 0 {
            Some(0)
        } else if g == 0 {
            Some((b + 1) as u64)
        } else if b > 2 * g - 2 {
            Some((b + 1 - g) as u64)
        } else {
            None
        }
    }

    fn surface_strategy() -> impl Strategy<Value = OrbifoldSurface> {
        (0u32..4, prop::collection::vec(2u32..12, 0..5))
            .prop_map(|(g, orders)| OrbifoldSurface::new(g, orders).unwrap())
    }

    fn bundle_strategy() -> impl Strategy<Value = OrbifoldLineBundle> {
        surface_strategy().prop_flat_map(|s| {
            let locals: Vec<_> = s.cone_orders().iter().map(|&a| 0..a as i64).collect();
            (Just(s), -12i64..12, locals).prop_map(|(s, b, locals)| {
                OrbifoldLineBundle::new(s, b, locals).unwrap()
            })
        })
    }

    fn bundle_pair() -> impl Strategy<Value = (OrbifoldLineBundle, OrbifoldLineBundle)> {
        bundle_strategy().prop_flat_map(|l| {
            let s = l.surface().clone();
            let locals: Vec<_> = s.cone_orders().iter().map(|&a| 0..a as i64).collect();
            (Just(l), -12i64..12, locals).prop_map(move |(l, b, locals)| {
                (l, OrbifoldLineBundle::new(s.clone(), b, locals).unwrap())
            })
        })
    }

    proptest! {
        #[test]
        fn degree_is_additive((l, m) in bundle_pair()) {
            prop_assert_eq!(l.tensor(&m).unwrap().degree(), l.degree() + m.degree());
        }

        #[test]
        fn tensor_commutes((l, m) in bundle_pair()) {
            prop_assert_eq!(l.tensor(&m).unwrap(), m.tensor(&l).unwrap());
        }

        #[test]
        fn power_matches_repeated_tensor(l in bundle_strategy(), m in -6i64..7) {
            let mut acc = l.surface().trivial_bundle();
            let step = if m >= 0 { l.clone() } else { l.dual().unwrap() };
            for _ in 0..m.abs() {
                acc = acc.tensor(&step).unwrap();
            }
            prop_assert_eq!(l.power(m).unwrap(), acc);
            prop_assert_eq!(l.power(m).unwrap().degree(), l.degree() * m as i128);
        }

        #[test]
        fn dual_cancels(l in bundle_strategy()) {
            prop_assert!(l.tensor(&l.dual().unwrap()).unwrap().is_trivial());
        }

        #[test]
        fn h0_agrees_with_desingularization(l in bundle_strategy()) {
            let h0 = l.h0().unwrap();
            if let (Some(ours), Some(oracle)) = (h0.exact(), desingularized_oracle(&l)) {
                prop_assert_eq!(ours, oracle, "{}", l);
            }
            if let SectionCount::Indeterminate { lower_bound } = h0 {
                if let Some(oracle) = desingularized_oracle(&l) {
                    prop_assert!(oracle >= lower_bound);
                }
            }
        }
    }
}
