//! Rate tuples and the two descriptions of the capacity region.
//!
//! * A1 uses one auxiliary `U` with `Z - X - Y - U`:
//!   `R_I + R_S <= I(Z;U)`, `R_J >= I(Y;U)`, `R_L >= I(X;U) - I(Z;U) + R_I`.
//! * A2 uses a pair with `Z - X - Y - U - V`:
//!   `R_I <= I(Z;V)`, `R_S <= I(Z;U) - I(Z;V)`, `R_J >= I(Y;U)`,
//!   `R_L >= I(X;U) - I(Z;U) + I(Z;V)`.
//!
//! Both are searched over quantized auxiliary channels followed by local
//! refinement. A positive membership answer is conclusive; a negative one
//! only means nothing was found at the configured quantization.

mod checks;
mod eval;
mod search;

use alloc::format;

use crate::error::{Error, Result};
use crate::prob::{axis, compose_joint, conditional_mutual_information, mutual_information, AuxiliaryPair, SystemModel};

pub use checks::{
    cardinality_sweep, check_equivalence, reduction_checks, CardinalityReport, CardinalityRow, DirectionReport,
    EquivalenceReport, ReductionCheck, ReductionReport,
};
pub use search::{boundary_sweep, is_member_a1, BoundaryPoint, Membership, SweepValues, Witness};

/// Values in `[-MI_NOISE, 0)` are treated as exact zeros.
pub const MI_NOISE: f64 = 1e-9;

fn clamp_noise(v: f64) -> f64 {
    if (-MI_NOISE..0.0).contains(&v) {
        0.0
    } else {
        v
    }
}

/// `(R_I, R_S, R_J, R_L)` in bits per source symbol.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateTuple {
    pub r_i: f64,
    pub r_s: f64,
    pub r_j: f64,
    pub r_l: f64,
}

impl RateTuple {
    pub fn new(r_i: f64, r_s: f64, r_j: f64, r_l: f64) -> Result<Self> {
        let t = Self { r_i, r_s, r_j, r_l };
        if !t.is_valid() {
            return Err(Error::param("rate tuple", format!("entries must be finite and nonnegative: {t:?}")));
        }
        Ok(t)
    }

    pub fn is_valid(&self) -> bool {
        [self.r_i, self.r_s, self.r_j, self.r_l].iter().all(|v| v.is_finite() && *v >= 0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegionVariant {
    A1,
    A2,
}

impl core::fmt::Display for RegionVariant {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(match self {
            RegionVariant::A1 => "A1",
            RegionVariant::A2 => "A2",
        })
    }
}

/// Which region to search and the auxiliary alphabet sizes to search over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RegionSpec {
    pub variant: RegionVariant,
    pub u_cardinality: usize,
    pub v_cardinality: usize,
}

impl RegionSpec {
    /// Checks the cardinality bounds: `|U| <= |Y|+2` for A1,
    /// `|U| <= (|Y|+2)(|Y|+3)` and `|V| <= |Y|+3` for A2.
    pub fn new(variant: RegionVariant, u_cardinality: usize, v_cardinality: usize, y_size: usize) -> Result<Self> {
        if u_cardinality == 0 || v_cardinality == 0 {
            return Err(Error::param("cardinality", "auxiliary alphabets must be nonempty"));
        }
        match variant {
            RegionVariant::A1 if u_cardinality > y_size + 2 => {
                return Err(Error::param("u_cardinality", format!("A1 allows at most |Y|+2 = {}", y_size + 2)));
            }
            RegionVariant::A2 if u_cardinality > (y_size + 2) * (y_size + 3) => {
                return Err(Error::param(
                    "u_cardinality",
                    format!("A2 allows at most (|Y|+2)(|Y|+3) = {}", (y_size + 2) * (y_size + 3)),
                ));
            }
            RegionVariant::A2 if v_cardinality > y_size + 3 => {
                return Err(Error::param("v_cardinality", format!("A2 allows at most |Y|+3 = {}", y_size + 3)));
            }
            _ => {}
        }
        Ok(Self { variant, u_cardinality, v_cardinality })
    }

    /// A1 at its full bound `|U| = |Y|+2`; A2 at `|U| = |Y|+1`, `|V| = 2`,
    /// which keeps the pair grid at desk scale.
    pub fn default_for(variant: RegionVariant, y_size: usize) -> Self {
        match variant {
            RegionVariant::A1 => Self { variant, u_cardinality: y_size + 2, v_cardinality: 1 },
            RegionVariant::A2 => Self { variant, u_cardinality: y_size + 1, v_cardinality: 2 },
        }
    }
}

/// Every information quantity appearing in the two region descriptions and
/// in the code-size exponents.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MutualInfoSummary {
    pub i_zu: f64,
    pub i_zv: f64,
    pub i_yu: f64,
    pub i_yv: f64,
    pub i_xu: f64,
    pub i_yu_given_v: f64,
    pub i_zu_given_v: f64,
}

/// Quantization and refinement knobs of every region search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchConfig {
    /// Subdivisions per simplex coordinate.
    pub grid_steps: usize,
    /// Number of step halvings in the local refinement.
    pub refinement_rounds: usize,
    /// Slack in bits allowed on every rate constraint.
    pub tolerance: f64,
    /// Upper bound on the number of grid candidates one search may enumerate.
    pub max_candidates: u128,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self { grid_steps: 8, refinement_rounds: 24, tolerance: 1e-6, max_candidates: 4_000_000 }
    }
}

impl SearchConfig {
    pub fn new(grid_steps: usize, refinement_rounds: usize, tolerance: f64) -> Result<Self> {
        let cfg = Self { grid_steps, refinement_rounds, tolerance, ..Self::default() };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.grid_steps < 2 {
            return Err(Error::param("grid_steps", format!("must be at least 2, got {}", self.grid_steps)));
        }
        if self.tolerance <= 0.0 || !self.tolerance.is_finite() {
            return Err(Error::param("tolerance", format!("must be positive, got {}", self.tolerance)));
        }
        if self.max_candidates == 0 {
            return Err(Error::param("max_candidates", "must be positive"));
        }
        Ok(())
    }
}

/// All seven quantities, computed from the composed joint law.
pub fn summarize(model: &SystemModel, aux: &AuxiliaryPair) -> Result<MutualInfoSummary> {
    use axis::{U, V, X, Y, Z};
    let joint = compose_joint(model, aux)?;
    let mi = |a: usize, b: usize| mutual_information(&joint, &[a], &[b]).map(clamp_noise);
    let cmi = |a: usize, b: usize, c: usize| conditional_mutual_information(&joint, &[a], &[b], &[c]).map(clamp_noise);
    Ok(MutualInfoSummary {
        i_zu: mi(Z, U)?,
        i_zv: mi(Z, V)?,
        i_yu: mi(Y, U)?,
        i_yv: mi(Y, V)?,
        i_xu: mi(X, U)?,
        i_yu_given_v: cmi(Y, U, V)?,
        i_zu_given_v: cmi(Z, U, V)?,
    })
}

/// The A2 corner for one auxiliary pair:
/// `(I(Z;V), I(Z;U) - I(Z;V), I(Y;U), I(X;U) - I(Z;U) + I(Z;V))`,
/// negatives clamped to zero.
pub fn extreme_tuple_a2(summary: &MutualInfoSummary) -> RateTuple {
    let nonneg = |v: f64| if v > 0.0 { v } else { 0.0 };
    RateTuple {
        r_i: nonneg(summary.i_zv),
        r_s: nonneg(summary.i_zu - summary.i_zv),
        r_j: nonneg(summary.i_yu),
        r_l: nonneg(summary.i_xu - summary.i_zu + summary.i_zv),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prob::{Channel, FiniteDistribution};
    use crate::math::plogp;

    fn h2(p: f64) -> f64 {
        plogp(p) + plogp(1.0 - p)
    }

    fn conv(a: f64, b: f64) -> f64 {
        a * (1.0 - b) + b * (1.0 - a)
    }

    fn identity_model() -> SystemModel {
        SystemModel::new(
            FiniteDistribution::uniform(2).unwrap(),
            Channel::identity(2).unwrap(),
            Channel::identity(2).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn summary_identity() {
        let aux = AuxiliaryPair::with_v_equal_u(Channel::identity(2).unwrap()).unwrap();
        let s = summarize(&identity_model(), &aux).unwrap();
        assert!((s.i_zu - 1.0).abs() < 1e-12);
        assert!((s.i_yu - 1.0).abs() < 1e-12);
        assert!((s.i_xu - 1.0).abs() < 1e-12);
        assert!(s.i_yu_given_v.abs() < 1e-12);
        let t = extreme_tuple_a2(&s);
        for (a, b) in [(t.r_i, 1.0), (t.r_s, 0.0), (t.r_j, 1.0), (t.r_l, 1.0)] {
            assert!((a - b).abs() < 1e-12, "{t:?}");
        }
    }

    #[test]
    fn summary_constant_v() {
        let model = SystemModel::new(
            FiniteDistribution::uniform(2).unwrap(),
            Channel::bsc(0.1).unwrap(),
            Channel::bsc(0.2).unwrap(),
        )
        .unwrap();
        let aux = AuxiliaryPair::with_constant_v(Channel::bsc(0.05).unwrap()).unwrap();
        let s = summarize(&model, &aux).unwrap();
        assert_eq!(s.i_zv, 0.0);
        assert_eq!(s.i_yv, 0.0);
        assert!((s.i_zu_given_v - s.i_zu).abs() < 1e-12);
        let t = extreme_tuple_a2(&s);
        assert_eq!(t.r_i, 0.0);
        assert!((t.r_s - s.i_zu).abs() < 1e-12);
        assert!((t.r_l - (s.i_xu - s.i_zu)).abs() < 1e-12);
    }

    #[test]
    fn summary_bsc_cascade_closed_forms() {
        let (pe, pi, pu, pv) = (0.1, 0.2, 0.05, 0.15);
        let model = SystemModel::new(
            FiniteDistribution::uniform(2).unwrap(),
            Channel::bsc(pe).unwrap(),
            Channel::bsc(pi).unwrap(),
        )
        .unwrap();
        let aux = AuxiliaryPair::new(Channel::bsc(pu).unwrap(), Channel::bsc(pv).unwrap()).unwrap();
        let s = summarize(&model, &aux).unwrap();
        let izu = 1.0 - h2(conv(conv(pe, pu), pi));
        let izv = 1.0 - h2(conv(conv(conv(pe, pu), pv), pi));
        let iyu = 1.0 - h2(pu);
        let iyv = 1.0 - h2(conv(pu, pv));
        let ixu = 1.0 - h2(conv(pe, pu));
        for (got, want) in [
            (s.i_zu, izu),
            (s.i_zv, izv),
            (s.i_yu, iyu),
            (s.i_yv, iyv),
            (s.i_xu, ixu),
            (s.i_yu_given_v, iyu - iyv),
            (s.i_zu_given_v, izu - izv),
        ] {
            assert!((got - want).abs() < 1e-9, "{got} vs {want}");
        }
    }

    #[test]
    fn noiseless_enrollment_corner() {
        // U = Y = X, V = U: (I(Z;X), 0, H(X), H(X))
        let model = SystemModel::new(
            FiniteDistribution::new(vec![0.3, 0.7]).unwrap(),
            Channel::identity(2).unwrap(),
            Channel::bsc(0.2).unwrap(),
        )
        .unwrap();
        let aux = AuxiliaryPair::with_v_equal_u(Channel::identity(2).unwrap()).unwrap();
        let s = summarize(&model, &aux).unwrap();
        let t = extreme_tuple_a2(&s);
        let hx = h2(0.3);
        let izx = h2(conv(0.3, 0.2)) - h2(0.2);
        assert!((t.r_i - izx).abs() < 1e-12);
        assert!(t.r_s.abs() < 1e-12);
        assert!((t.r_j - hx).abs() < 1e-12);
        assert!((t.r_l - hx).abs() < 1e-12);
    }

    #[test]
    fn region_spec_bounds() {
        assert!(RegionSpec::new(RegionVariant::A1, 4, 1, 2).is_ok());
        assert!(RegionSpec::new(RegionVariant::A1, 5, 1, 2).is_err());
        assert!(RegionSpec::new(RegionVariant::A2, 20, 5, 2).is_ok());
        assert!(RegionSpec::new(RegionVariant::A2, 21, 5, 2).is_err());
        assert!(RegionSpec::new(RegionVariant::A2, 4, 6, 2).is_err());
        assert!(RegionSpec::new(RegionVariant::A2, 0, 1, 2).is_err());
    }

    #[test]
    fn config_validation() {
        assert!(SearchConfig::new(1, 0, 1e-6).is_err());
        assert!(SearchConfig::new(2, 0, 0.0).is_err());
        assert!(SearchConfig::new(8, 10, 1e-6).is_ok());
        assert!(RateTuple::new(-0.1, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn fast_evaluator_matches_summarize() {
        use crate::simplex::ChannelGrid;
        let model = SystemModel::new(
            FiniteDistribution::new(vec![0.2, 0.5, 0.3]).unwrap(),
            Channel::new(alloc::vec![alloc::vec![0.7, 0.3], alloc::vec![0.2, 0.8], alloc::vec![0.5, 0.5]]).unwrap(),
            Channel::new(alloc::vec![
                alloc::vec![0.6, 0.3, 0.1],
                alloc::vec![0.1, 0.8, 0.1],
                alloc::vec![0.25, 0.25, 0.5]
            ])
            .unwrap(),
        )
        .unwrap();
        let ev = eval::InfoEvaluator::new(&model);
        let ugrid = ChannelGrid::new(2, 3, 3, 1 << 20).unwrap();
        let vgrid = ChannelGrid::new(3, 2, 2, 1 << 20).unwrap();
        for ui in (0..ugrid.len()).step_by(7) {
            let u = ugrid.channel(ui);
            let (stats, laws) = ev.u_stats(&u, 3);
            for vi in (0..vgrid.len()).step_by(5) {
                let v = vgrid.channel(vi);
                let aux = AuxiliaryPair::new(
                    Channel::from_flat(2, 3, u.clone()).unwrap(),
                    Channel::from_flat(3, 2, v.clone()).unwrap(),
                )
                .unwrap();
                let s = summarize(&model, &aux).unwrap();
                assert!((stats.i_zu - s.i_zu).abs() < 1e-12);
                assert!((stats.i_yu - s.i_yu).abs() < 1e-12);
                assert!((stats.i_xu - s.i_xu).abs() < 1e-12);
                assert!((ev.i_zv(&laws, &v, 2) - s.i_zv).abs() < 1e-12);
            }
        }
    }
}
