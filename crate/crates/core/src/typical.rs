//! Strong typicality.
//!
//! A sequence is δ-typical for `P` when every symbol frequency is within δ
//! of its probability and zero-probability symbols never occur. Tuples of
//! sequences are tested as one sequence over the product alphabet.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::prob::{FiniteDistribution, JointDistribution};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TypicalityParams {
    delta: f64,
}

impl TypicalityParams {
    pub fn new(delta: f64) -> Result<Self> {
        if delta <= 0.0 || !delta.is_finite() {
            return Err(Error::param("delta", format!("must be a positive finite number, got {delta}")));
        }
        Ok(Self { delta })
    }

    /// `0.1 ×` the smallest nonzero cell mass over the given laws.
    pub fn default_for(joints: &[&JointDistribution]) -> Result<Self> {
        let min = joints.iter().map(|j| j.min_positive()).fold(f64::INFINITY, f64::min);
        Self::new(0.1 * min)
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }
}

/// A finite sequence of symbol indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SymbolSequence {
    alphabet_size: usize,
    symbols: Vec<usize>,
}

impl SymbolSequence {
    pub fn new(alphabet_size: usize, symbols: Vec<usize>) -> Result<Self> {
        if alphabet_size == 0 {
            return Err(Error::InvalidSequence { reason: "empty alphabet".into() });
        }
        if let Some((t, &s)) = symbols.iter().enumerate().find(|(_, &s)| s >= alphabet_size) {
            return Err(Error::InvalidSequence {
                reason: format!("symbol {s} at position {t} outside alphabet of size {alphabet_size}"),
            });
        }
        Ok(Self { alphabet_size, symbols })
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn symbols(&self) -> &[usize] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }
}

/// `N(a|x^n)` for every symbol `a`.
pub fn empirical_counts(seq: &SymbolSequence) -> Result<Vec<usize>> {
    if seq.is_empty() {
        return Err(Error::InvalidSequence { reason: "empty sequence".into() });
    }
    let mut counts = vec![0usize; seq.alphabet_size()];
    for &s in seq.symbols() {
        counts[s] += 1;
    }
    Ok(counts)
}

#[inline]
fn cell_ok(count: usize, n: usize, p: f64, delta: f64) -> bool {
    if p == 0.0 {
        return count == 0;
    }
    (count as f64 / n as f64 - p).abs() <= delta
}

fn counts_typical(counts: &[usize], n: usize, probs: &[f64], delta: f64) -> bool {
    counts.iter().zip(probs).all(|(&c, &p)| cell_ok(c, n, p, delta))
}

pub fn is_strongly_typical(
    seq: &SymbolSequence,
    dist: &FiniteDistribution,
    params: &TypicalityParams,
) -> Result<bool> {
    if seq.alphabet_size() != dist.alphabet_size() {
        return Err(Error::DimensionMismatch {
            context: "typicality alphabet",
            expected: dist.alphabet_size(),
            found: seq.alphabet_size(),
        });
    }
    let counts = empirical_counts(seq)?;
    Ok(counts_typical(&counts, seq.len(), dist.probs(), params.delta()))
}

/// Tests `seqs[0], .., seqs[k-1]` against a `k`-axis joint law; `seqs[a]`
/// is read as the coordinate on axis `a`.
pub fn is_jointly_typical(
    seqs: &[&SymbolSequence],
    joint: &JointDistribution,
    params: &TypicalityParams,
) -> Result<bool> {
    if seqs.len() != joint.num_axes() {
        return Err(Error::DimensionMismatch {
            context: "number of sequences vs joint axes",
            expected: joint.num_axes(),
            found: seqs.len(),
        });
    }
    let n = seqs[0].len();
    if n == 0 {
        return Err(Error::InvalidSequence { reason: "empty sequence".into() });
    }
    for (a, s) in seqs.iter().enumerate() {
        if s.len() != n {
            return Err(Error::DimensionMismatch { context: "sequence length", expected: n, found: s.len() });
        }
        if s.alphabet_size() != joint.axis_sizes()[a] {
            return Err(Error::DimensionMismatch {
                context: "sequence alphabet vs joint axis",
                expected: joint.axis_sizes()[a],
                found: s.alphabet_size(),
            });
        }
    }
    let sizes = joint.axis_sizes();
    let mut counts = vec![0usize; joint.mass().len()];
    for t in 0..n {
        let mut flat = 0;
        for (a, s) in seqs.iter().enumerate() {
            flat = flat * sizes[a] + s.symbols()[t];
        }
        counts[flat] += 1;
    }
    Ok(counts_typical(&counts, n, joint.mass(), params.delta()))
}

/// Precomputed joint-typicality test for a fixed law, block length and δ.
///
/// For every cell the admissible count range is tabulated once with the
/// same float comparison as [`is_jointly_typical`], so the two agree
/// exactly.
#[derive(Debug, Clone)]
pub(crate) struct TypicalityTable {
    sizes: Vec<usize>,
    n: usize,
    lo: Vec<usize>,
    hi: Vec<usize>,
}

impl TypicalityTable {
    pub(crate) fn new(joint: &JointDistribution, params: &TypicalityParams, n: usize) -> Self {
        let mut lo = Vec::with_capacity(joint.mass().len());
        let mut hi = Vec::with_capacity(joint.mass().len());
        for &p in joint.mass() {
            let ok: Vec<usize> = (0..=n).filter(|&c| cell_ok(c, n, p, params.delta())).collect();
            match (ok.first(), ok.last()) {
                (Some(&a), Some(&b)) => {
                    lo.push(a);
                    hi.push(b);
                }
                // no admissible count: the law can never be matched
                _ => {
                    lo.push(1);
                    hi.push(0);
                }
            }
        }
        Self { sizes: joint.axis_sizes().to_vec(), n, lo, hi }
    }

    /// `scratch` must have one slot per cell; it is left zeroed on return.
    pub(crate) fn check(&self, seqs: &[&[usize]], scratch: &mut [usize]) -> bool {
        debug_assert_eq!(seqs.len(), self.sizes.len());
        for t in 0..self.n {
            let mut flat = 0;
            for (a, s) in seqs.iter().enumerate() {
                flat = flat * self.sizes[a] + s[t];
            }
            scratch[flat] += 1;
        }
        let mut ok = true;
        for (cell, c) in scratch.iter_mut().enumerate() {
            if *c < self.lo[cell] || *c > self.hi[cell] {
                ok = false;
            }
            *c = 0;
        }
        ok
    }

    pub(crate) fn cells(&self) -> usize {
        self.lo.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(k: usize, s: &[usize]) -> SymbolSequence {
        SymbolSequence::new(k, s.to_vec()).unwrap()
    }

    #[test]
    fn counts() {
        assert_eq!(empirical_counts(&seq(2, &[0, 0, 1, 1])).unwrap(), vec![2, 2]);
        assert_eq!(empirical_counts(&seq(3, &[2; 5])).unwrap(), vec![0, 0, 5]);
        assert_eq!(empirical_counts(&seq(3, &[0, 1, 2, 1, 0, 1])).unwrap(), vec![2, 3, 1]);
        assert!(empirical_counts(&seq(2, &[])).is_err());
        assert!(SymbolSequence::new(2, vec![0, 2]).is_err());
    }

    #[test]
    fn params_validation() {
        assert!(TypicalityParams::new(0.0).is_err());
        assert!(TypicalityParams::new(-1.0).is_err());
        assert!(TypicalityParams::new(f64::NAN).is_err());
    }

    #[test]
    fn single_sequence_typicality() {
        let d = FiniteDistribution::new(vec![0.25, 0.75]).unwrap();
        for delta in [1e-9, 0.01, 0.5] {
            let p = TypicalityParams::new(delta).unwrap();
            assert!(is_strongly_typical(&seq(2, &[0, 1, 1, 1]), &d, &p).unwrap());
        }

        let degenerate = FiniteDistribution::new(vec![1.0, 0.0]).unwrap();
        let big = TypicalityParams::new(10.0).unwrap();
        assert!(!is_strongly_typical(&seq(2, &[0, 0, 1, 0]), &degenerate, &big).unwrap());

        let half = FiniteDistribution::uniform(2).unwrap();
        let s = seq(2, &[0, 0, 0, 1]);
        assert!(is_strongly_typical(&s, &half, &TypicalityParams::new(0.25).unwrap()).unwrap());
        assert!(!is_strongly_typical(&s, &half, &TypicalityParams::new(0.249).unwrap()).unwrap());

        assert!(is_strongly_typical(&seq(3, &[0]), &half, &big).is_err());
    }

    #[test]
    fn joint_typicality() {
        let exact = JointDistribution::new(vec![2, 2], vec![0.25, 0.25, 0.0, 0.5]).unwrap();
        let a = seq(2, &[0, 0, 1, 1]);
        let b = seq(2, &[0, 1, 1, 1]);
        assert!(is_jointly_typical(&[&a, &b], &exact, &TypicalityParams::new(1e-6).unwrap()).unwrap());

        let half = FiniteDistribution::uniform(2).unwrap();
        let product = JointDistribution::product(&[&half, &half]).unwrap();
        let x = seq(2, &[0, 1, 0, 1, 0, 1, 0, 1]);
        let params = TypicalityParams::new(0.1).unwrap();
        assert!(!is_jointly_typical(&[&x, &x], &product, &params).unwrap());

        // cell (1,0) has zero mass
        let c = seq(2, &[0, 0, 0, 1]);
        let d = seq(2, &[0, 1, 1, 0]);
        assert!(!is_jointly_typical(&[&c, &d], &exact, &TypicalityParams::new(10.0).unwrap()).unwrap());

        let short = seq(2, &[0, 1]);
        assert!(is_jointly_typical(&[&a, &short], &exact, &params).is_err());
        assert!(is_jointly_typical(&[&a], &exact, &params).is_err());
    }

    #[test]
    fn table_agrees_with_definition_exhaustively() {
        let joint = JointDistribution::new(vec![2, 3], vec![0.1, 0.2, 0.0, 0.3, 0.15, 0.25]).unwrap();
        for delta in [0.05, 0.12, 0.3] {
            let params = TypicalityParams::new(delta).unwrap();
            let n = 5;
            let table = TypicalityTable::new(&joint, &params, n);
            let mut scratch = vec![0; table.cells()];
            for ia in 0..(1usize << n) {
                let a: Vec<usize> = (0..n).map(|t| (ia >> t) & 1).collect();
                for ib in 0..3usize.pow(n as u32) {
                    let b: Vec<usize> = (0..n).map(|t| (ib / 3usize.pow(t as u32)) % 3).collect();
                    let sa = seq(2, &a);
                    let sb = seq(3, &b);
                    let want = is_jointly_typical(&[&sa, &sb], &joint, &params).unwrap();
                    assert_eq!(table.check(&[&a, &b], &mut scratch), want);
                }
            }
        }
    }
}
