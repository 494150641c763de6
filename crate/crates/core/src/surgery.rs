//! Counting rules for connected sums of Z2-harmonic spinors and 1-forms:
//! twisted cohomology, branched double covers, zero profiles of glued
//! quadratic differentials and dimensions of the deformation strata.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurgeryError {
    #[error("both summands have empty singular set; the twisted sum is undefined")]
    BothEmpty,
    #[error("branch point count {0} is odd; a double cover needs an even count")]
    OddBranchCount(u64),
    #[error("an unbranched double cover of the sphere is disconnected")]
    DisconnectedCover,
    #[error("genus {0} is too small for this gluing (need at least {1})")]
    GenusTooSmall(u64, u64),
}

/// What a summand contributes: `dim H^1_-` when its singular set is nonempty,
/// otherwise its ordinary first Betti number.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Summand {
    Twisted { h1_minus: u64 },
    Untwisted { b1: u64 },
}

/// `dim H^1_-` of the connected sum. The connecting arc adds one class when
/// both summands are twisted; a summand with empty singular set contributes
/// its ordinary `b1`.
pub fn twisted_h1_connected_sum(a: Summand, b: Summand) -> Result<u64, SurgeryError> {
    match (a, b) {
        (Summand::Twisted { h1_minus: d1 }, Summand::Twisted { h1_minus: d2 }) => Ok(d1 + d2 + 1),
        (Summand::Twisted { h1_minus: d }, Summand::Untwisted { b1 })
        | (Summand::Untwisted { b1 }, Summand::Twisted { h1_minus: d }) => Ok(d + b1),
        (Summand::Untwisted { .. }, Summand::Untwisted { .. }) => Err(SurgeryError::BothEmpty),
    }
}

/// Riemann-Hurwitz: a double cover of a genus `g` surface branched at `n`
/// points has genus `2g - 1 + n/2`.
pub fn branched_cover_genus(g: u64, branch_points: u64) -> Result<u64, SurgeryError> {
    if branch_points % 2 == 1 {
        return Err(SurgeryError::OddBranchCount(branch_points));
    }
    if g == 0 && branch_points == 0 {
        return Err(SurgeryError::DisconnectedCover);
    }
    Ok(2 * g + branch_points / 2 - 1)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GluedCover {
    pub genus: u64,
    pub warnings: Vec<String>,
}

/// Genus `4(g1 + g2) - 5` of the double cover branched along the simple zeros
/// of the glued quadratic differential. Each summand alone has a cover of
/// genus `4 g_i - 3`.
pub fn glued_cover_genus(g1: u64, g2: u64) -> Result<GluedCover, SurgeryError> {
    let smaller = g1.min(g2);
    if smaller < 1 {
        return Err(SurgeryError::GenusTooSmall(smaller, 1));
    }
    let mut warnings = Vec::new();
    if g1 == 1 && g2 == 1 {
        warnings.push("tori carry no quadratic differential with simple zeros; count is formal".into());
    }
    Ok(GluedCover { genus: 4 * (g1 + g2) - 5, warnings })
}

/// Zeros of the glued quadratic differential: simple zeros inherited from the
/// summands and the even-order zeros created at the neck, counted with
/// multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ZeroProfile {
    pub simple: u64,
    pub even_order: u64,
}

impl ZeroProfile {
    /// Zeros counted with multiplicity.
    pub fn total(&self) -> u64 {
        self.simple + self.even_order
    }
}

pub fn glued_zero_profile(g1: u64, g2: u64) -> Result<ZeroProfile, SurgeryError> {
    let smaller = g1.min(g2);
    if smaller < 2 {
        return Err(SurgeryError::GenusTooSmall(smaller, 2));
    }
    Ok(ZeroProfile { simple: 4 * (g1 + g2) - 8, even_order: 4 })
}

/// Dimension of the `Z2`-representation variety of the connected sum: the two
/// summands plus the six parameters of the gluing.
pub fn representation_dim_sum(d1: u64, d2: u64) -> u64 {
    d1 + d2 + 6
}

/// Which stratum count is meant, and under what hypothesis it holds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StratumGap {
    /// Dimension of the stratum of the glued singular set.
    pub glued_stratum: u64,
    /// Dimension of the ambient stratum it sits in.
    pub ambient: u64,
    /// Codimension of the glued stratum.
    pub gap: u64,
    pub hypothesis: &'static str,
}

pub fn stratum_gap(k1: u64, k2: u64) -> StratumGap {
    StratumGap {
        glued_stratum: k1 + k2 + 1,
        ambient: k1 + k2 + 3,
        gap: 2,
        hypothesis: "summand strata are smooth of the given dimensions and the gluing is unobstructed",
    }
}

/// Label for the singular set obtained by cabling a fiber `2k` times.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CableDescriptor {
    pub label: String,
    pub components: u64,
}

pub fn cable_descriptor(k: u64) -> CableDescriptor {
    CableDescriptor { label: format!("({},0)-cable", 2 * k), components: 2 * k }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn twisted_sum_examples() {
        let t = |d| Summand::Twisted { h1_minus: d };
        assert_eq!(twisted_h1_connected_sum(t(2), t(3)), Ok(6));
        assert_eq!(twisted_h1_connected_sum(t(2), Summand::Untwisted { b1: 1 }), Ok(3));
        assert_eq!(
            twisted_h1_connected_sum(Summand::Untwisted { b1: 0 }, Summand::Untwisted { b1: 2 }),
            Err(SurgeryError::BothEmpty)
        );
    }

    #[test]
    fn glued_genus_examples() {
        assert_eq!(glued_cover_genus(2, 2).unwrap().genus, 11);
        assert_eq!(glued_cover_genus(2, 3).unwrap().genus, 15);
        let tori = glued_cover_genus(1, 1).unwrap();
        assert_eq!(tori.genus, 3);
        assert_eq!(tori.warnings.len(), 1);
        assert!(glued_cover_genus(0, 2).is_err());
    }

    #[test]
    fn zero_profile_example() {
        let z = glued_zero_profile(2, 2).unwrap();
        assert_eq!((z.simple, z.even_order, z.total()), (8, 4, 12));
        assert!(glued_zero_profile(1, 3).is_err());
    }

    #[test]
    fn odd_branching_rejected() {
        assert_eq!(branched_cover_genus(1, 3), Err(SurgeryError::OddBranchCount(3)));
    }

    #[test]
    fn cable_and_strata() {
        assert_eq!(cable_descriptor(3), CableDescriptor { label: "(6,0)-cable".into(), components: 6 });
        let s = stratum_gap(2, 5);
        assert_eq!((s.glued_stratum, s.ambient, s.gap), (8, 10, 2));
        assert_eq!(representation_dim_sum(4, 7), 17);
    }

    proptest! {
        #[test]
        fn glued_genus_is_riemann_hurwitz(g1 in 1u64..50, g2 in 1u64..50) {
            let branch = (4 * g1 - 4) + (4 * g2 - 4);
            prop_assert_eq!(
                glued_cover_genus(g1, g2).unwrap().genus,
                branched_cover_genus(g1 + g2, branch).unwrap()
            );
        }

        #[test]
        fn zero_total_is_degree_of_k_squared(g1 in 2u64..50, g2 in 2u64..50) {
            let z = glued_zero_profile(g1, g2).unwrap();
            prop_assert_eq!(z.total(), 4 * (g1 + g2) - 4);
        }

        #[test]
        fn riemann_hurwitz_euler_characteristic(g in 0u64..40, half in 0u64..40) {
            prop_assume!(g + half > 0);
            let n = 2 * half;
            let cover = branched_cover_genus(g, n).unwrap() as i64;
            prop_assert_eq!(2 - 2 * cover, 2 * (2 - 2 * g as i64) - n as i64);
        }
    }
}
