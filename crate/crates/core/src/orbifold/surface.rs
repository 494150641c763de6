use std::fmt;

use num_integer::Integer;

use super::{OrbifoldError, OrbifoldLineBundle, Rational};

/// Largest lcm of the cone orders accepted.
pub const MAX_DENOMINATOR: i128 = 1 << 100;

/// Closed orientable surface of genus `genus` with cone points of the given
/// orders. Cone order 1 is rejected rather than silently dropped.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OrbifoldSurface {
    genus: u32,
    cone_orders: Vec<u32>,
}

impl OrbifoldSurface {
    pub fn new(genus: u32, cone_orders: Vec<u32>) -> Result<Self, OrbifoldError> {
        if let Some(&a) = cone_orders.iter().find(|&&a| a < 2) {
            return Err(OrbifoldError::InvalidConeOrder(a as i64));
        }
        // Degrees have denominator lcm(a_i); keep it well inside i128.
        let mut lcm: i128 = 1;
        for &a in &cone_orders {
            lcm = lcm.lcm(&(a as i128));
            if lcm > MAX_DENOMINATOR {
                return Err(OrbifoldError::Overflow);
            }
        }
        Ok(Self { genus, cone_orders })
    }

    /// Parses `g` or `g;a1,a2,...`.
    pub fn parse(s: &str) -> Result<Self, OrbifoldError> {
        let bad = || OrbifoldError::Parse(s.to_string());
        let (g, rest) = match s.split_once(';') {
            Some((g, rest)) => (g, rest),
            None => (s, ""),
        };
        let genus: u32 = g.trim().parse().map_err(|_| bad())?;
        let mut orders = Vec::new();
        for tok in rest.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let a: i64 = tok.parse().map_err(|_| bad())?;
            if a < 2 || a > u32::MAX as i64 {
                return Err(OrbifoldError::InvalidConeOrder(a));
            }
            orders.push(a as u32);
        }
        Self::new(genus, orders)
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn cone_orders(&self) -> &[u32] {
        &self.cone_orders
    }

    pub fn cone_count(&self) -> usize {
        self.cone_orders.len()
    }

    /// `2 - 2g + sum(1/a_i - 1)`.
    pub fn euler_characteristic(&self) -> Rational {
        let mut chi = Rational::from_integer(2 - 2 * self.genus as i128);
        for &a in &self.cone_orders {
            chi += Rational::new(1, a as i128) - 1;
        }
        chi
    }

    /// The orbifold canonical bundle `(2g-2; a_1-1, ..., a_n-1)`.
    pub fn canonical_bundle(&self) -> OrbifoldLineBundle {
        let locals = self.cone_orders.iter().map(|&a| a as i64 - 1).collect();
        OrbifoldLineBundle::new(self.clone(), 2 * self.genus as i64 - 2, locals)
            .expect("canonical local parts are in range")
    }

    pub fn trivial_bundle(&self) -> OrbifoldLineBundle {
        OrbifoldLineBundle::new(self.clone(), 0, vec![0; self.cone_count()])
            .expect("zero local parts are in range")
    }

    /// Odd cone orders only; the condition for an orbifold spin structure.
    pub fn admits_spin_structure(&self) -> bool {
        self.cone_orders.iter().all(|a| a % 2 == 1)
    }
}

impl fmt::Display for OrbifoldSurface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.genus)?;
        if !self.cone_orders.is_empty() {
            let orders: Vec<String> = self.cone_orders.iter().map(u32::to_string).collect();
            write!(f, ";{}", orders.join(","))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn huge_denominators_are_rejected() {
        let primes: Vec<u32> = (2..200).filter(|n| (2..*n).all(|d| n % d != 0)).collect();
        assert_eq!(OrbifoldSurface::new(0, primes), Err(OrbifoldError::Overflow));
        let first20 = vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71];
        let s = OrbifoldSurface::new(0, first20).unwrap();
        assert!(s.canonical_bundle().degree() > Rational::from_integer(0));
    }

    #[test]
    fn chi_of_icosahedral_orbifold() {
        let s = OrbifoldSurface::new(0, vec![2, 3, 5]).unwrap();
        assert_eq!(s.euler_characteristic(), Rational::new(1, 30));
    }

    #[test]
    fn chi_of_genus_two_without_cones() {
        let s = OrbifoldSurface::new(2, vec![]).unwrap();
        assert_eq!(s.euler_characteristic(), Rational::from_integer(-2));
    }

    #[test]
    fn order_one_rejected() {
        assert_eq!(
            OrbifoldSurface::new(0, vec![1, 3]),
            Err(OrbifoldError::InvalidConeOrder(1))
        );
    }

    #[test]
    fn parse_and_display() {
        let s = OrbifoldSurface::parse("1;2, 3").unwrap();
        assert_eq!(s.genus(), 1);
        assert_eq!(s.cone_orders(), &[2, 3]);
        assert_eq!(s.to_string(), "1;2,3");
        assert!(OrbifoldSurface::parse("0;1").is_err());
        assert!(OrbifoldSurface::parse("a").is_err());
    }

    #[test]
    fn canonical_degree_is_minus_chi() {
        let s = OrbifoldSurface::new(1, vec![4, 6]).unwrap();
        assert_eq!(s.canonical_bundle().degree(), -s.euler_characteristic());
    }
}
