//! Random superposition codebook with per-center permutations.

use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;

use super::{stream_rng, CodeParams, RowSampler};
use crate::error::{Error, Result};
use crate::prob::{axis, compose_joint, AuxiliaryPair, JointDistribution, SystemModel};

/// Upper bound on stored codebook symbols.
pub const MAX_CODEBOOK_SYMBOLS: u128 = 1 << 27;

#[derive(Debug, Clone, PartialEq)]
pub struct Codebook {
    params: CodeParams,
    z_size: usize,
    y_size: usize,
    u_size: usize,
    v_size: usize,
    /// `n_v × n`
    cloud: Vec<usize>,
    /// `(n_v · n_u) × n`, center-major
    satellites: Vec<usize>,
    /// `perm[m · n_u + k] = π_m(k)`
    perm: Vec<usize>,
    inv: Vec<usize>,
    /// `P(y, u, v)`, axes `(Y, U, V)`
    law_yuv: JointDistribution,
    /// `P(z, u, v)`, axes `(Z, U, V)`
    law_zuv: JointDistribution,
}

pub(crate) fn size_guard(params: &CodeParams) -> Result<()> {
    let symbols = params.n as u128 * (params.n_v as u128) * (1 + params.n_u as u128);
    if symbols > MAX_CODEBOOK_SYMBOLS {
        return Err(Error::BudgetExceeded { guard: "codebook size", required: symbols, limit: MAX_CODEBOOK_SYMBOLS });
    }
    Ok(())
}

fn invert(perm: &[usize], n_u: usize) -> Result<Vec<usize>> {
    let mut inv = alloc::vec![usize::MAX; perm.len()];
    for (m, block) in perm.chunks(n_u).enumerate() {
        for (k, &t) in block.iter().enumerate() {
            if t >= n_u || inv[m * n_u + t] != usize::MAX {
                return Err(Error::param("permutations", alloc::format!("permutation {m} is not a bijection")));
            }
            inv[m * n_u + t] = k;
        }
    }
    Ok(inv)
}

impl Codebook {
    /// Assembles a codebook from explicit parts. `cloud` has one sequence
    /// per center, `satellites[m][k]` one per satellite and `permutations[m]`
    /// maps `k` to its permuted index.
    pub fn from_parts(
        model: &SystemModel,
        aux: &AuxiliaryPair,
        params: CodeParams,
        cloud: Vec<Vec<usize>>,
        satellites: Vec<Vec<Vec<usize>>>,
        permutations: Vec<Vec<usize>>,
    ) -> Result<Self> {
        params.validate()?;
        size_guard(&params)?;
        let joint = compose_joint(model, aux)?;
        let (n, n_v, n_u) = (params.n, params.n_v, params.n_u);
        let bad = |what: &str| Error::InvalidSequence { reason: alloc::format!("{what} does not match the code parameters") };
        if cloud.len() != n_v || satellites.len() != n_v || permutations.len() != n_v {
            return Err(bad("number of cloud centers"));
        }
        let mut flat_cloud = Vec::with_capacity(n_v * n);
        for v in &cloud {
            if v.len() != n || v.iter().any(|&s| s >= aux.v_size()) {
                return Err(bad("cloud sequence"));
            }
            flat_cloud.extend_from_slice(v);
        }
        let mut flat_sat = Vec::with_capacity(n_v * n_u * n);
        for block in &satellites {
            if block.len() != n_u {
                return Err(bad("satellite count"));
            }
            for u in block {
                if u.len() != n || u.iter().any(|&s| s >= aux.u_size()) {
                    return Err(bad("satellite sequence"));
                }
                flat_sat.extend_from_slice(u);
            }
        }
        let mut perm = Vec::with_capacity(n_v * n_u);
        for p in &permutations {
            if p.len() != n_u {
                return Err(bad("permutation length"));
            }
            perm.extend_from_slice(p);
        }
        let inv = invert(&perm, n_u)?;
        Ok(Self {
            z_size: model.z_size(),
            y_size: model.y_size(),
            u_size: aux.u_size(),
            v_size: aux.v_size(),
            cloud: flat_cloud,
            satellites: flat_sat,
            perm,
            inv,
            law_yuv: joint.marginalize(&[axis::Y, axis::U, axis::V])?,
            law_zuv: joint.marginalize(&[axis::Z, axis::U, axis::V])?,
            params,
        })
    }

    pub fn params(&self) -> &CodeParams {
        &self.params
    }

    pub fn n(&self) -> usize {
        self.params.n
    }

    pub fn y_size(&self) -> usize {
        self.y_size
    }

    pub fn z_size(&self) -> usize {
        self.z_size
    }

    pub fn u_size(&self) -> usize {
        self.u_size
    }

    pub fn v_size(&self) -> usize {
        self.v_size
    }

    pub fn cloud(&self, m: usize) -> &[usize] {
        let n = self.params.n;
        &self.cloud[m * n..(m + 1) * n]
    }

    pub fn satellite(&self, m: usize, k: usize) -> &[usize] {
        let n = self.params.n;
        let at = (m * self.params.n_u + k) * n;
        &self.satellites[at..at + n]
    }

    /// `π_m` as a table `k -> k̃`.
    pub fn permutation(&self, m: usize) -> &[usize] {
        let n_u = self.params.n_u;
        &self.perm[m * n_u..(m + 1) * n_u]
    }

    /// `(b, s)` of satellite `k` of center `m`.
    pub fn bin_slot(&self, m: usize, k: usize) -> (usize, usize) {
        let t = self.perm[m * self.params.n_u + k];
        (t / self.params.m_s, t % self.params.m_s)
    }

    /// Satellite index stored in bin `b`, slot `s` of center `m`.
    pub fn satellite_at(&self, m: usize, b: usize, s: usize) -> usize {
        self.inv[m * self.params.n_u + b * self.params.m_s + s]
    }

    /// Reference law for enrollment typicality, axes `(Y, U, V)`.
    pub fn enroll_law(&self) -> &JointDistribution {
        &self.law_yuv
    }

    /// Reference law for identification typicality, axes `(Z, U, V)`.
    pub fn identify_law(&self) -> &JointDistribution {
        &self.law_zuv
    }

    pub(crate) fn draw<R: Rng + ?Sized>(
        model: &SystemModel,
        aux: &AuxiliaryPair,
        params: CodeParams,
        permute: bool,
        rng: &mut R,
    ) -> Result<Self> {
        params.validate()?;
        size_guard(&params)?;
        let joint = compose_joint(model, aux)?;
        let (nu, nv) = (aux.u_size(), aux.v_size());
        let uv = joint.marginalize(&[axis::U, axis::V])?;
        let mut p_v = alloc::vec![0.0; nv];
        // P(u|v) stored row-major v * nu + u
        let mut u_given_v = alloc::vec![0.0; nv * nu];
        for u in 0..nu {
            for v in 0..nv {
                let p = uv.mass()[u * nv + v];
                p_v[v] += p;
                u_given_v[v * nu + u] = p;
            }
        }
        let v_sampler = RowSampler::single(&p_v);
        let u_sampler = RowSampler::new(&u_given_v, nv, nu);
        let (n, n_v, n_u) = (params.n, params.n_v, params.n_u);
        let mut cloud = Vec::with_capacity(n_v);
        let mut satellites = Vec::with_capacity(n_v);
        let mut permutations = Vec::with_capacity(n_v);
        for _ in 0..n_v {
            let v = v_sampler.iid(n, rng);
            satellites.push((0..n_u).map(|_| u_sampler.pass(&v, rng)).collect::<Vec<_>>());
            cloud.push(v);
            let mut p: Vec<usize> = (0..n_u).collect();
            if permute {
                p.shuffle(rng);
            }
            permutations.push(p);
        }
        Self::from_parts(model, aux, params, cloud, satellites, permutations)
    }
}

/// Draws a codebook: centers i.i.d. `P_V`, satellites memoryless through
/// `P_{U|V}`, permutations uniform (identity when `permute` is off).
pub fn generate_codebook(
    model: &SystemModel,
    aux: &AuxiliaryPair,
    params: CodeParams,
    seed: u64,
    permute: bool,
) -> Result<Codebook> {
    Codebook::draw(model, aux, params, permute, &mut stream_rng(seed, 0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prob::{Channel, FiniteDistribution};

    fn model() -> SystemModel {
        SystemModel::new(FiniteDistribution::uniform(2).unwrap(), Channel::bsc(0.05).unwrap(), Channel::bsc(0.1).unwrap())
            .unwrap()
    }

    #[test]
    fn constant_v_cloud() {
        let aux = AuxiliaryPair::with_constant_v(Channel::bsc(0.2).unwrap()).unwrap();
        let p = CodeParams::new(6, 0.1, 1, 2, 3, 2).unwrap();
        let cb = generate_codebook(&model(), &aux, p, 1, true).unwrap();
        for m in 0..3 {
            assert!(cb.cloud(m).iter().all(|&s| s == 0));
        }
    }

    #[test]
    fn identity_satellites_copy_center() {
        let aux = AuxiliaryPair::new(Channel::bsc(0.2).unwrap(), Channel::identity(2).unwrap()).unwrap();
        let p = CodeParams::new(8, 0.1, 1, 2, 3, 2).unwrap();
        let cb = generate_codebook(&model(), &aux, p, 5, true).unwrap();
        for m in 0..3 {
            for k in 0..4 {
                assert_eq!(cb.satellite(m, k), cb.cloud(m));
            }
        }
    }

    #[test]
    fn determinism_and_bijections() {
        let aux = AuxiliaryPair::new(Channel::bsc(0.2).unwrap(), Channel::bsc(0.3).unwrap()).unwrap();
        let p = CodeParams::new(8, 0.1, 2, 3, 4, 2).unwrap();
        let a = generate_codebook(&model(), &aux, p.clone(), 11, true).unwrap();
        let b = generate_codebook(&model(), &aux, p.clone(), 11, true).unwrap();
        let c = generate_codebook(&model(), &aux, p, 12, true).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        for m in 0..4 {
            let mut s = a.permutation(m).to_vec();
            s.sort_unstable();
            assert_eq!(s, (0..6).collect::<Vec<_>>());
            for k in 0..6 {
                let (b, s) = a.bin_slot(m, k);
                assert!(b < 2 && s < 3);
                assert_eq!(a.satellite_at(m, b, s), k);
            }
        }
    }

    #[test]
    fn rejects_non_bijection_and_oversize() {
        let aux = AuxiliaryPair::with_v_equal_u(Channel::identity(2).unwrap()).unwrap();
        let p = CodeParams::new(1, 0.1, 1, 1, 1, 2).unwrap();
        let err = Codebook::from_parts(&model(), &aux, p, vec![vec![0]], vec![vec![vec![0], vec![1]]], vec![vec![0, 0]]);
        assert!(err.is_err());
        let big = CodeParams::new(64, 0.1, 1, 1 << 10, 1 << 10, 1 << 4).unwrap();
        assert!(generate_codebook(&model(), &aux, big, 0, true).unwrap_err().is_budget());
    }
}
