//! The superposition code with random binning and a one-time-pad masking
//! layer, run end to end.
//!
//! A codebook holds `n_v` cloud centers `v^n_m` and, for each center, `n_u`
//! satellites `u^n_{k|m}`. Satellites of center `m` are permuted by `π_m`
//! and cut into `n_b` bins of `m_s` consecutive permuted indices; bin `b`
//! slot `s` holds permuted index `b·m_s + s`. Enrollment picks a jointly
//! typical `(m, k)` and stores `(m, b, s_C + s_G mod m_s)`, where `s_G` is
//! the slot of `k`. Identification looks for the unique `(i, s)` whose
//! satellite is typical with the observation.
//!
//! Indices are 0-based throughout.

mod codebook;
mod codec;
mod leakage;
mod trials;

use alloc::vec::Vec;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::math::{ceil, exp2, round};
use crate::prob::{AuxiliaryPair, SystemModel};
use crate::region::{summarize, MutualInfoSummary};

pub use codebook::{generate_codebook, Codebook};
pub use codec::{enroll, identify, mask, unmask, Database, Decision, Enrollment, Template};
pub use leakage::{exact_leakage, ExactLeakage};
pub use trials::{achievability_trend, default_typicality, run_trials, CodebookMode, IdentifiedMode, SimOptions, SimReport, TrendPoint};

/// Largest count `derive_params` will produce.
pub const MAX_COUNT: u64 = 1 << 40;

/// Sizes of the code at block length `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct CodeParams {
    pub n: usize,
    pub delta_rate: f64,
    /// Enrolled individuals.
    pub m_i: usize,
    /// Secrets (and satellites per bin).
    pub m_s: usize,
    /// Chosen-secret templates, `m_j_g · m_s`.
    pub m_j_c: usize,
    /// Generated-secret templates `(m, b)`, `n_v · n_b`.
    pub m_j_g: usize,
    pub n_v: usize,
    /// Satellites per cloud center, `n_b · m_s`.
    pub n_u: usize,
    pub n_b: usize,
    /// Counts whose real-valued target rounded to zero and were raised to 1.
    pub clamped: Vec<&'static str>,
}

fn product(a: usize, b: usize) -> Result<usize> {
    a.checked_mul(b).ok_or(Error::BudgetExceeded {
        guard: "code size",
        required: a as u128 * b as u128,
        limit: usize::MAX as u128,
    })
}

impl CodeParams {
    /// Builds parameters from the free counts; the products are filled in.
    pub fn new(n: usize, delta_rate: f64, m_i: usize, m_s: usize, n_v: usize, n_b: usize) -> Result<Self> {
        let n_u = product(n_b, m_s)?;
        let m_j_g = product(n_v, n_b)?;
        let m_j_c = product(m_j_g, m_s)?;
        let p = Self { n, delta_rate, m_i, m_s, m_j_c, m_j_g, n_v, n_u, n_b, clamped: Vec::new() };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::param("n", "block length must be positive"));
        }
        if self.delta_rate <= 0.0 || !self.delta_rate.is_finite() {
            return Err(Error::param("delta_rate", "must be positive and finite"));
        }
        for (name, v) in
            [("m_i", self.m_i), ("m_s", self.m_s), ("n_v", self.n_v), ("n_b", self.n_b), ("n_u", self.n_u)]
        {
            if v == 0 {
                return Err(Error::param(name, "counts must be positive"));
            }
        }
        if self.n_u != self.n_b * self.m_s {
            return Err(Error::param("n_u", "must equal n_b * m_s"));
        }
        if self.m_j_g != self.n_v * self.n_b {
            return Err(Error::param("m_j_g", "must equal n_v * n_b"));
        }
        if self.m_j_c != self.m_j_g * self.m_s {
            return Err(Error::param("m_j_c", "must equal m_j_g * m_s"));
        }
        Ok(())
    }
}

fn count(name: &'static str, target: f64, use_ceil: bool, clamped: &mut Vec<&'static str>) -> Result<usize> {
    let v = if use_ceil { ceil(target) } else { round(target) };
    if v.is_nan() || v > MAX_COUNT as f64 {
        return Err(Error::BudgetExceeded {
            guard: "code size",
            required: if v.is_finite() { v as u128 } else { u128::MAX },
            limit: MAX_COUNT as u128,
        });
    }
    if v < 1.0 {
        clamped.push(name);
        return Ok(1);
    }
    Ok(v as usize)
}

/// Code sizes for block length `n` and slack `delta_rate` from the
/// information quantities of `(model, aux)`.
pub fn derive_params(model: &SystemModel, aux: &AuxiliaryPair, n: usize, delta_rate: f64) -> Result<CodeParams> {
    let s = summarize(model, aux)?;
    params_from_summary(&s, n, delta_rate)
}

/// As [`derive_params`], from an already computed summary.
pub fn params_from_summary(s: &MutualInfoSummary, n: usize, delta_rate: f64) -> Result<CodeParams> {
    if n == 0 {
        return Err(Error::param("n", "block length must be positive"));
    }
    if delta_rate <= 0.0 || !delta_rate.is_finite() {
        return Err(Error::param("delta_rate", "must be positive and finite"));
    }
    let nf = n as f64;
    let d = delta_rate;
    let mut clamped = Vec::new();
    let m_i = count("m_i", exp2(nf * (s.i_zv - d)), false, &mut clamped)?;
    let m_s = count("m_s", exp2(nf * (s.i_zu - s.i_zv - d)), false, &mut clamped)?;
    let n_v = count("n_v", exp2(nf * (s.i_yv + d)), true, &mut clamped)?;
    let n_b = count("n_b", exp2(nf * (s.i_yu_given_v - s.i_zu_given_v + 2.0 * d)), false, &mut clamped)?;
    let mut p = CodeParams::new(n, delta_rate, m_i, m_s, n_v, n_b)?;
    p.clamped = clamped;
    Ok(p)
}

/// Generator for stream `stream` of the master seed. Stream 0 draws the
/// fixed codebook; trial `t` uses stream `t + 1`.
pub(crate) fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Per-input samplers for a row-major channel matrix; rows with no mass
/// are left empty and never drawn from.
#[derive(Debug, Clone)]
pub(crate) struct RowSampler {
    rows: Vec<Option<WeightedIndex<f64>>>,
}

impl RowSampler {
    pub fn new(flat: &[f64], inputs: usize, outputs: usize) -> Self {
        let rows = (0..inputs).map(|i| WeightedIndex::new(&flat[i * outputs..(i + 1) * outputs]).ok()).collect();
        Self { rows }
    }

    pub fn single(probs: &[f64]) -> Self {
        Self::new(probs, 1, probs.len())
    }

    pub fn draw<R: Rng + ?Sized>(&self, input: usize, rng: &mut R) -> usize {
        match &self.rows[input] {
            Some(w) => w.sample(rng),
            None => unreachable!("input {input} has zero probability"),
        }
    }

    /// `n` i.i.d. draws from row 0.
    pub fn iid<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Vec<usize> {
        (0..n).map(|_| self.draw(0, rng)).collect()
    }

    /// Memoryless pass of `input` through the channel.
    pub fn pass<R: Rng + ?Sized>(&self, input: &[usize], rng: &mut R) -> Vec<usize> {
        input.iter().map(|&a| self.draw(a, rng)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prob::Channel;
    use crate::prob::FiniteDistribution;

    fn bsc_model() -> SystemModel {
        SystemModel::new(FiniteDistribution::uniform(2).unwrap(), Channel::bsc(0.05).unwrap(), Channel::bsc(0.1).unwrap())
            .unwrap()
    }

    #[test]
    fn params_v_equal_u_has_no_secret() {
        let aux = AuxiliaryPair::with_v_equal_u(Channel::bsc(0.1).unwrap()).unwrap();
        let p = derive_params(&bsc_model(), &aux, 10, 0.05).unwrap();
        assert_eq!(p.m_s, 1);
        assert_eq!(p.n_u, p.n_b);
    }

    #[test]
    fn params_constant_v_single_individual() {
        let aux = AuxiliaryPair::with_constant_v(Channel::bsc(0.1).unwrap()).unwrap();
        let p = derive_params(&bsc_model(), &aux, 10, 0.05).unwrap();
        assert_eq!(p.m_i, 1);
        assert_eq!(p.n_v, 2); // ceil(2^{0.5})
    }

    #[test]
    fn params_products_and_clamping() {
        let p = CodeParams::new(4, 0.1, 2, 3, 5, 7).unwrap();
        assert_eq!((p.n_u, p.m_j_g, p.m_j_c), (21, 35, 105));
        assert!(CodeParams::new(0, 0.1, 1, 1, 1, 1).is_err());
        assert!(CodeParams::new(4, 0.0, 1, 1, 1, 1).is_err());
        let s = MutualInfoSummary { i_zu: 0.0, i_zv: 0.0, i_yu: 0.0, i_yv: 0.0, i_xu: 0.0, i_yu_given_v: 0.0, i_zu_given_v: 0.0 };
        let p = params_from_summary(&s, 20, 0.1).unwrap();
        assert_eq!(p.clamped, ["m_i", "m_s"]);
        assert_eq!((p.m_i, p.m_s, p.n_v, p.n_b), (1, 1, 4, 16));
    }

    #[test]
    fn params_overflow_is_a_budget_error() {
        let aux = AuxiliaryPair::with_v_equal_u(Channel::identity(2).unwrap()).unwrap();
        let m = SystemModel::new(
            FiniteDistribution::uniform(2).unwrap(),
            Channel::identity(2).unwrap(),
            Channel::identity(2).unwrap(),
        )
        .unwrap();
        assert!(derive_params(&m, &aux, 60, 0.1).unwrap_err().is_budget());
    }

    #[test]
    fn streams_are_distinct_and_stable() {
        let a: u64 = stream_rng(7, 0).random();
        let b: u64 = stream_rng(7, 1).random();
        assert_ne!(a, b);
        assert_eq!(a, stream_rng(7, 0).random::<u64>());
    }
}
