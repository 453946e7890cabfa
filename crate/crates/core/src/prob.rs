//! Exact finite-alphabet probability.
//!
//! Distributions and channels are validated on construction and never
//! renormalized silently. Joint laws are dense row-major arrays (last axis
//! varies fastest). All information quantities are in bits.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::plogp;

/// Absolute tolerance on the total mass of a probability vector.
pub const PROB_TOLERANCE: f64 = 1e-12;

/// Axis positions of the composed law `P(z, x, y, u, v)`.
pub mod axis {
    pub const Z: usize = 0;
    pub const X: usize = 1;
    pub const Y: usize = 2;
    pub const U: usize = 3;
    pub const V: usize = 4;
}

fn check_pmf(probs: &[f64]) -> core::result::Result<(), alloc::string::String> {
    if probs.is_empty() {
        return Err("empty probability vector".into());
    }
    let mut sum = 0.0;
    for (i, &p) in probs.iter().enumerate() {
        if !p.is_finite() {
            return Err(format!("entry {i} is not finite ({p})"));
        }
        if p < 0.0 {
            return Err(format!("entry {i} is negative ({p})"));
        }
        sum += p;
    }
    if (sum - 1.0).abs() > PROB_TOLERANCE {
        return Err(format!("entries sum to {sum}, not 1"));
    }
    Ok(())
}

/// A probability mass function over `{0, .., alphabet_size - 1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteDistribution {
    probs: Vec<f64>,
}

impl FiniteDistribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        check_pmf(&probs).map_err(|reason| Error::InvalidDistribution { reason })?;
        Ok(Self { probs })
    }

    pub fn uniform(size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::InvalidDistribution { reason: "empty alphabet".into() });
        }
        Ok(Self { probs: vec![1.0 / size as f64; size] })
    }

    /// Point mass on `symbol`.
    pub fn point(size: usize, symbol: usize) -> Result<Self> {
        if symbol >= size {
            return Err(Error::InvalidDistribution {
                reason: format!("symbol {symbol} outside alphabet of size {size}"),
            });
        }
        let mut probs = vec![0.0; size];
        probs[symbol] = 1.0;
        Ok(Self { probs })
    }

    pub fn alphabet_size(&self) -> usize {
        self.probs.len()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, symbol: usize) -> f64 {
        self.probs[symbol]
    }

    /// Smallest strictly positive mass.
    pub fn min_positive(&self) -> f64 {
        self.probs.iter().copied().filter(|&p| p > 0.0).fold(f64::INFINITY, f64::min)
    }
}

/// A row-stochastic matrix; row `i` is the output law given input `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct Channel {
    input_size: usize,
    output_size: usize,
    rows: Vec<f64>,
}

impl Channel {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::InvalidChannelRow { row: 0, reason: "channel has no rows".into() });
        }
        let output_size = rows[0].len();
        let mut flat = Vec::with_capacity(rows.len() * output_size);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != output_size {
                return Err(Error::InvalidChannelRow {
                    row: i,
                    reason: format!("has {} entries, expected {output_size}", row.len()),
                });
            }
            check_pmf(row).map_err(|reason| Error::InvalidChannelRow { row: i, reason })?;
            flat.extend_from_slice(row);
        }
        Ok(Self { input_size: rows.len(), output_size, rows: flat })
    }

    /// Builds a channel from a row-major flat buffer.
    pub fn from_flat(input_size: usize, output_size: usize, rows: Vec<f64>) -> Result<Self> {
        if input_size == 0 || output_size == 0 {
            return Err(Error::InvalidChannelRow { row: 0, reason: "empty dimension".into() });
        }
        if rows.len() != input_size * output_size {
            return Err(Error::DimensionMismatch {
                context: "channel buffer",
                expected: input_size * output_size,
                found: rows.len(),
            });
        }
        for (i, row) in rows.chunks(output_size).enumerate() {
            check_pmf(row).map_err(|reason| Error::InvalidChannelRow { row: i, reason })?;
        }
        Ok(Self { input_size, output_size, rows })
    }

    pub fn identity(size: usize) -> Result<Self> {
        let mut rows = vec![0.0; size * size];
        for i in 0..size {
            rows[i * size + i] = 1.0;
        }
        Self::from_flat(size, size, rows)
    }

    /// Binary symmetric channel with crossover probability `p`.
    pub fn bsc(p: f64) -> Result<Self> {
        Self::new(vec![vec![1.0 - p, p], vec![p, 1.0 - p]])
    }

    /// Every input produces `output`: the output is independent of the input.
    pub fn constant(input_size: usize, output: &FiniteDistribution) -> Result<Self> {
        let mut rows = Vec::with_capacity(input_size * output.alphabet_size());
        for _ in 0..input_size {
            rows.extend_from_slice(output.probs());
        }
        Self::from_flat(input_size, output.alphabet_size(), rows)
    }

    pub fn input_size(&self) -> usize {
        self.input_size
    }

    pub fn output_size(&self) -> usize {
        self.output_size
    }

    pub fn row(&self, input: usize) -> &[f64] {
        &self.rows[input * self.output_size..(input + 1) * self.output_size]
    }

    #[inline]
    pub fn prob(&self, input: usize, output: usize) -> f64 {
        self.rows[input * self.output_size + output]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.rows.chunks(self.output_size).map(|r| r.to_vec()).collect()
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.rows
    }

    /// Cascade `self` then `next` (matrix product).
    pub fn then(&self, next: &Channel) -> Result<Channel> {
        if self.output_size != next.input_size {
            return Err(Error::DimensionMismatch {
                context: "channel cascade",
                expected: self.output_size,
                found: next.input_size,
            });
        }
        let mut rows = vec![0.0; self.input_size * next.output_size];
        for i in 0..self.input_size {
            for k in 0..self.output_size {
                let p = self.prob(i, k);
                if p == 0.0 {
                    continue;
                }
                for j in 0..next.output_size {
                    rows[i * next.output_size + j] += p * next.prob(k, j);
                }
            }
        }
        Ok(Channel { input_size: self.input_size, output_size: next.output_size, rows })
    }

    /// Output law when the input has law `input`.
    pub fn push(&self, input: &FiniteDistribution) -> Result<FiniteDistribution> {
        if input.alphabet_size() != self.input_size {
            return Err(Error::DimensionMismatch {
                context: "channel input",
                expected: self.input_size,
                found: input.alphabet_size(),
            });
        }
        let mut out = vec![0.0; self.output_size];
        for (i, &p) in input.probs().iter().enumerate() {
            for (j, o) in out.iter_mut().enumerate() {
                *o += p * self.prob(i, j);
            }
        }
        Ok(FiniteDistribution { probs: out })
    }
}

/// The source and the two observation channels of one identification system.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemModel {
    pub source: FiniteDistribution,
    pub enroll: Channel,
    pub identify: Channel,
}

impl SystemModel {
    pub fn new(source: FiniteDistribution, enroll: Channel, identify: Channel) -> Result<Self> {
        let nx = source.alphabet_size();
        if enroll.input_size() != nx {
            return Err(Error::DimensionMismatch {
                context: "enrollment channel input",
                expected: nx,
                found: enroll.input_size(),
            });
        }
        if identify.input_size() != nx {
            return Err(Error::DimensionMismatch {
                context: "identification channel input",
                expected: nx,
                found: identify.input_size(),
            });
        }
        Ok(Self { source, enroll, identify })
    }

    pub fn x_size(&self) -> usize {
        self.source.alphabet_size()
    }

    pub fn y_size(&self) -> usize {
        self.enroll.output_size()
    }

    pub fn z_size(&self) -> usize {
        self.identify.output_size()
    }

    /// Same source and identification channel, noiseless enrollment (`Y = X`).
    pub fn with_noiseless_enrollment(&self) -> Result<Self> {
        Self::new(self.source.clone(), Channel::identity(self.x_size())?, self.identify.clone())
    }
}

/// Test channels `P(u|y)` and `P(v|u)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AuxiliaryPair {
    pub u_given_y: Channel,
    pub v_given_u: Channel,
}

impl AuxiliaryPair {
    pub fn new(u_given_y: Channel, v_given_u: Channel) -> Result<Self> {
        if v_given_u.input_size() != u_given_y.output_size() {
            return Err(Error::DimensionMismatch {
                context: "P(v|u) input",
                expected: u_given_y.output_size(),
                found: v_given_u.input_size(),
            });
        }
        Ok(Self { u_given_y, v_given_u })
    }

    /// `V = U` exactly.
    pub fn with_v_equal_u(u_given_y: Channel) -> Result<Self> {
        let nu = u_given_y.output_size();
        Self::new(u_given_y, Channel::identity(nu)?)
    }

    /// `V` is a constant (single-letter alphabet).
    pub fn with_constant_v(u_given_y: Channel) -> Result<Self> {
        let nu = u_given_y.output_size();
        Self::new(u_given_y, Channel::constant(nu, &FiniteDistribution::point(1, 0)?)?)
    }

    pub fn u_size(&self) -> usize {
        self.u_given_y.output_size()
    }

    pub fn v_size(&self) -> usize {
        self.v_given_u.output_size()
    }

    pub fn check_against(&self, model: &SystemModel) -> Result<()> {
        if self.u_given_y.input_size() != model.y_size() {
            return Err(Error::DimensionMismatch {
                context: "P(u|y) input",
                expected: model.y_size(),
                found: self.u_given_y.input_size(),
            });
        }
        Ok(())
    }
}

/// A dense joint law over a Cartesian product of finite alphabets.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution {
    axis_sizes: Vec<usize>,
    mass: Vec<f64>,
}

impl JointDistribution {
    pub fn new(axis_sizes: Vec<usize>, mass: Vec<f64>) -> Result<Self> {
        if axis_sizes.is_empty() || axis_sizes.contains(&0) {
            return Err(Error::InvalidAxes { reason: "axis sizes must be positive".into() });
        }
        let total: usize = axis_sizes.iter().product();
        if mass.len() != total {
            return Err(Error::DimensionMismatch {
                context: "joint mass buffer",
                expected: total,
                found: mass.len(),
            });
        }
        check_pmf(&mass).map_err(|reason| Error::InvalidDistribution { reason })?;
        Ok(Self { axis_sizes, mass })
    }

    /// Product law of independent marginals, in the given axis order.
    pub fn product(marginals: &[&FiniteDistribution]) -> Result<Self> {
        let mut sizes = Vec::with_capacity(marginals.len());
        let mut mass = vec![1.0];
        for m in marginals {
            sizes.push(m.alphabet_size());
            let mut next = Vec::with_capacity(mass.len() * m.alphabet_size());
            for &a in &mass {
                for &b in m.probs() {
                    next.push(a * b);
                }
            }
            mass = next;
        }
        Self::new(sizes, mass)
    }

    pub fn axis_sizes(&self) -> &[usize] {
        &self.axis_sizes
    }

    pub fn num_axes(&self) -> usize {
        self.axis_sizes.len()
    }

    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.axis_sizes.len()];
        for a in (0..self.axis_sizes.len().saturating_sub(1)).rev() {
            strides[a] = strides[a + 1] * self.axis_sizes[a + 1];
        }
        strides
    }

    /// Mass of one cell addressed by its multi-index.
    pub fn get(&self, index: &[usize]) -> f64 {
        let strides = self.strides();
        let flat: usize = index.iter().zip(&strides).map(|(i, s)| i * s).sum();
        self.mass[flat]
    }

    /// Smallest strictly positive cell mass.
    pub fn min_positive(&self) -> f64 {
        self.mass.iter().copied().filter(|&p| p > 0.0).fold(f64::INFINITY, f64::min)
    }

    fn validate_axes(&self, axes: &[usize]) -> Result<()> {
        for (k, &a) in axes.iter().enumerate() {
            if a >= self.axis_sizes.len() {
                return Err(Error::InvalidAxes {
                    reason: format!("axis {a} out of range for a {}-axis joint", self.axis_sizes.len()),
                });
            }
            if axes[..k].contains(&a) {
                return Err(Error::InvalidAxes { reason: format!("axis {a} listed twice") });
            }
        }
        Ok(())
    }

    /// Sums out every axis not in `keep_axes`. Kept axes appear in ascending
    /// index order.
    pub fn marginalize(&self, keep_axes: &[usize]) -> Result<JointDistribution> {
        if keep_axes.is_empty() {
            return Err(Error::InvalidAxes { reason: "no axes to keep".into() });
        }
        self.validate_axes(keep_axes)?;
        let mut keep: Vec<usize> = keep_axes.to_vec();
        keep.sort_unstable();
        let out_sizes: Vec<usize> = keep.iter().map(|&a| self.axis_sizes[a]).collect();
        let mut out_strides = vec![0usize; self.axis_sizes.len()];
        let mut s = 1;
        for (&a, &size) in keep.iter().zip(&out_sizes).rev() {
            out_strides[a] = s;
            s *= size;
        }
        let mut out = vec![0.0; s];
        let mut idx = vec![0usize; self.axis_sizes.len()];
        for &p in &self.mass {
            let flat: usize = idx.iter().zip(&out_strides).map(|(i, st)| i * st).sum();
            out[flat] += p;
            for a in (0..idx.len()).rev() {
                idx[a] += 1;
                if idx[a] < self.axis_sizes[a] {
                    break;
                }
                idx[a] = 0;
            }
        }
        Ok(JointDistribution { axis_sizes: out_sizes, mass: out })
    }

    /// Joint entropy of the listed axes; zero for the empty set.
    pub fn entropy_of(&self, axes: &[usize]) -> Result<f64> {
        if axes.is_empty() {
            return Ok(0.0);
        }
        let m = self.marginalize(axes)?;
        Ok(m.mass.iter().map(|&p| plogp(p)).sum())
    }

    /// Marginal law of a single axis.
    pub fn marginal(&self, axis: usize) -> Result<FiniteDistribution> {
        let m = self.marginalize(&[axis])?;
        Ok(FiniteDistribution { probs: m.mass })
    }
}

/// `P(z,x,y,u,v) = P(x) P(z|x) P(y|x) P(u|y) P(v|u)`, axes ordered
/// `(Z, X, Y, U, V)` as in [`axis`].
pub fn compose_joint(model: &SystemModel, aux: &AuxiliaryPair) -> Result<JointDistribution> {
    aux.check_against(model)?;
    let (nz, nx, ny, nu, nv) =
        (model.z_size(), model.x_size(), model.y_size(), aux.u_size(), aux.v_size());
    let mut mass = Vec::with_capacity(nz * nx * ny * nu * nv);
    for z in 0..nz {
        for x in 0..nx {
            let pzx = model.source.prob(x) * model.identify.prob(x, z);
            for y in 0..ny {
                let pzxy = pzx * model.enroll.prob(x, y);
                for u in 0..nu {
                    let pzxyu = pzxy * aux.u_given_y.prob(y, u);
                    for v in 0..nv {
                        mass.push(pzxyu * aux.v_given_u.prob(u, v));
                    }
                }
            }
        }
    }
    Ok(JointDistribution { axis_sizes: vec![nz, nx, ny, nu, nv], mass })
}

/// Shannon entropy in bits.
pub fn entropy(dist: &FiniteDistribution) -> f64 {
    dist.probs().iter().map(|&p| plogp(p)).sum()
}

fn check_disjoint(sets: &[&[usize]]) -> Result<()> {
    for (i, a) in sets.iter().enumerate() {
        for b in &sets[i + 1..] {
            if let Some(x) = a.iter().find(|x| b.contains(x)) {
                return Err(Error::InvalidAxes { reason: format!("axis {x} appears in two sets") });
            }
        }
    }
    Ok(())
}

fn union(sets: &[&[usize]]) -> Vec<usize> {
    sets.iter().flat_map(|s| s.iter().copied()).collect()
}

/// `I(A;B) = H(A) + H(B) - H(A,B)`. The raw value is returned; it may be a
/// few ulps below zero.
pub fn mutual_information(joint: &JointDistribution, axes_a: &[usize], axes_b: &[usize]) -> Result<f64> {
    check_disjoint(&[axes_a, axes_b])?;
    Ok(joint.entropy_of(axes_a)? + joint.entropy_of(axes_b)? - joint.entropy_of(&union(&[axes_a, axes_b]))?)
}

/// `I(A;B|C) = H(A,C) + H(B,C) - H(A,B,C) - H(C)`.
pub fn conditional_mutual_information(
    joint: &JointDistribution,
    axes_a: &[usize],
    axes_b: &[usize],
    axes_c: &[usize],
) -> Result<f64> {
    check_disjoint(&[axes_a, axes_b, axes_c])?;
    Ok(joint.entropy_of(&union(&[axes_a, axes_c]))?
        + joint.entropy_of(&union(&[axes_b, axes_c]))?
        - joint.entropy_of(&union(&[axes_a, axes_b, axes_c]))?
        - joint.entropy_of(axes_c)?)
}

#[cfg(test)]
mod tests {
    use super::axis::*;
    use super::*;

    fn h2(p: f64) -> f64 {
        plogp(p) + plogp(1.0 - p)
    }

    fn conv(a: f64, b: f64) -> f64 {
        a * (1.0 - b) + b * (1.0 - a)
    }

    fn bsc_model(pe: f64, pi: f64) -> SystemModel {
        SystemModel::new(
            FiniteDistribution::uniform(2).unwrap(),
            Channel::bsc(pe).unwrap(),
            Channel::bsc(pi).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn rejects_bad_distributions() {
        assert!(FiniteDistribution::new(vec![0.5, 0.6]).is_err());
        assert!(FiniteDistribution::new(vec![1.1, -0.1]).is_err());
        assert!(FiniteDistribution::new(vec![]).is_err());
        assert!(FiniteDistribution::new(vec![f64::NAN, 1.0]).is_err());
        // within 1e-12 is accepted as is, never rescaled
        let d = FiniteDistribution::new(vec![0.5, 0.5 + 5e-13]).unwrap();
        assert_eq!(d.probs()[1], 0.5 + 5e-13);
    }

    #[test]
    fn channel_reports_offending_row() {
        let err = Channel::new(vec![vec![0.5, 0.5], vec![0.2, 0.81]]).unwrap_err();
        assert!(matches!(err, Error::InvalidChannelRow { row: 1, .. }));
    }

    #[test]
    fn model_dimension_checks() {
        let src = FiniteDistribution::uniform(3).unwrap();
        assert!(SystemModel::new(src, Channel::bsc(0.1).unwrap(), Channel::identity(3).unwrap()).is_err());
        let aux = AuxiliaryPair::with_v_equal_u(Channel::identity(3).unwrap()).unwrap();
        assert!(compose_joint(&bsc_model(0.1, 0.1), &aux).is_err());
    }

    #[test]
    fn identity_composition_is_diagonal() {
        let model = SystemModel::new(
            FiniteDistribution::new(vec![0.3, 0.7]).unwrap(),
            Channel::identity(2).unwrap(),
            Channel::identity(2).unwrap(),
        )
        .unwrap();
        let aux = AuxiliaryPair::with_v_equal_u(Channel::identity(2).unwrap()).unwrap();
        let joint = compose_joint(&model, &aux).unwrap();
        for z in 0..2 {
            for x in 0..2 {
                for y in 0..2 {
                    for u in 0..2 {
                        for v in 0..2 {
                            let p = joint.get(&[z, x, y, u, v]);
                            let diag = z == x && x == y && y == u && u == v;
                            assert_eq!(p > 0.0, diag);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn bsc_with_uniform_input_keeps_z_uniform() {
        let aux = AuxiliaryPair::with_v_equal_u(Channel::identity(2).unwrap()).unwrap();
        let joint = compose_joint(&bsc_model(0.1, 0.1), &aux).unwrap();
        let pz = joint.marginal(Z).unwrap();
        assert!((pz.prob(0) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn bsc_cascade_matches_closed_form() {
        let aux = AuxiliaryPair::with_v_equal_u(Channel::bsc(0.05).unwrap()).unwrap();
        let joint = compose_joint(&bsc_model(0.1, 0.2), &aux).unwrap();
        let closed = 1.0 - h2(conv(conv(0.1, 0.05), 0.2));
        let izu = mutual_information(&joint, &[Z], &[U]).unwrap();
        assert!((izu - closed).abs() < 1e-12, "{izu} vs {closed}");
        // brute-force double sum over the (z,u) marginal
        let mut pzu = [[0.0; 2]; 2];
        for (flat, &p) in joint.mass().iter().enumerate() {
            let u = (flat / 2) % 2;
            let z = flat / 16;
            pzu[z][u] += p;
        }
        let mut brute = 0.0;
        for z in 0..2 {
            for u in 0..2 {
                let pz = pzu[z][0] + pzu[z][1];
                let pu = pzu[0][u] + pzu[1][u];
                if pzu[z][u] > 0.0 {
                    brute += pzu[z][u] * libm::log2(pzu[z][u] / (pz * pu));
                }
            }
        }
        assert!((izu - brute).abs() < 1e-12);
    }

    #[test]
    fn marginalize_cases() {
        let aux = AuxiliaryPair::with_v_equal_u(Channel::bsc(0.05).unwrap()).unwrap();
        let joint = compose_joint(&bsc_model(0.1, 0.2), &aux).unwrap();
        let all = joint.marginalize(&[0, 1, 2, 3, 4]).unwrap();
        assert_eq!(all, joint);

        let p = FiniteDistribution::new(vec![0.2, 0.8]).unwrap();
        let q = FiniteDistribution::new(vec![0.1, 0.3, 0.6]).unwrap();
        let prod = JointDistribution::product(&[&p, &q]).unwrap();
        let back = prod.marginal(0).unwrap();
        for (a, b) in back.probs().iter().zip(p.probs()) {
            assert!((a - b).abs() < 1e-15);
        }

        // (X,U) marginal against P_X times the matrix product BSC(0.1)·BSC(0.05)
        let xu = joint.marginalize(&[X, U]).unwrap();
        let cascade = Channel::bsc(0.1).unwrap().then(&Channel::bsc(0.05).unwrap()).unwrap();
        for x in 0..2 {
            for u in 0..2 {
                assert!((xu.get(&[x, u]) - 0.5 * cascade.prob(x, u)).abs() < 1e-15);
            }
        }

        assert!(joint.marginalize(&[]).is_err());
        assert!(joint.marginalize(&[5]).is_err());
        assert!(joint.marginalize(&[1, 1]).is_err());
    }

    #[test]
    fn entropy_examples() {
        assert_eq!(entropy(&FiniteDistribution::point(3, 1).unwrap()), 0.0);
        assert!((entropy(&FiniteDistribution::uniform(4).unwrap()) - 2.0).abs() < 1e-15);
        let h = entropy(&FiniteDistribution::new(vec![0.9, 0.1]).unwrap());
        assert!((h - 0.468_995_593_589_281_2).abs() < 1e-15, "{h}");
    }

    #[test]
    fn mutual_information_examples() {
        let p = FiniteDistribution::new(vec![0.3, 0.7]).unwrap();
        let q = FiniteDistribution::new(vec![0.6, 0.4]).unwrap();
        let indep = JointDistribution::product(&[&p, &q]).unwrap();
        assert!(mutual_information(&indep, &[0], &[1]).unwrap().abs() < 1e-15);

        let copy = JointDistribution::new(vec![2, 2], vec![0.5, 0.0, 0.0, 0.5]).unwrap();
        assert!((mutual_information(&copy, &[0], &[1]).unwrap() - 1.0).abs() < 1e-15);

        let bsc = JointDistribution::new(vec![2, 2], vec![0.45, 0.05, 0.05, 0.45]).unwrap();
        let i = mutual_information(&bsc, &[0], &[1]).unwrap();
        assert!((i - 0.531_004_406_410_718_8).abs() < 1e-14, "{i}");
        assert!((i - mutual_information(&bsc, &[1], &[0]).unwrap()).abs() < 1e-15);

        assert!(mutual_information(&bsc, &[0], &[0]).is_err());
    }

    #[test]
    fn conditional_mutual_information_examples() {
        let ab = JointDistribution::new(vec![2, 2], vec![0.4, 0.1, 0.1, 0.4]).unwrap();
        let c = FiniteDistribution::new(vec![0.25, 0.75]).unwrap();
        let mut mass = Vec::new();
        for &pab in ab.mass() {
            for &pc in c.probs() {
                mass.push(pab * pc);
            }
        }
        let abc = JointDistribution::new(vec![2, 2, 2], mass).unwrap();
        let cmi = conditional_mutual_information(&abc, &[0], &[1], &[2]).unwrap();
        let mi = mutual_information(&ab, &[0], &[1]).unwrap();
        assert!((cmi - mi).abs() < 1e-14);

        let aux = AuxiliaryPair::new(Channel::bsc(0.05).unwrap(), Channel::bsc(0.15).unwrap()).unwrap();
        let joint = compose_joint(&bsc_model(0.1, 0.2), &aux).unwrap();
        let lhs = conditional_mutual_information(&joint, &[Z], &[U], &[V]).unwrap();
        let rhs = mutual_information(&joint, &[Z], &[U]).unwrap()
            - mutual_information(&joint, &[Z], &[V]).unwrap();
        assert!((lhs - rhs).abs() < 1e-9);

        let points = JointDistribution::new(vec![1, 1, 1], vec![1.0]).unwrap();
        assert_eq!(conditional_mutual_information(&points, &[0], &[1], &[2]).unwrap(), 0.0);
        assert!(conditional_mutual_information(&abc, &[0], &[1], &[1]).is_err());
    }
}
