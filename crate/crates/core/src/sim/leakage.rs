//! Exact leakage of one enrolled individual for a fixed codebook, by
//! enumeration of all `x^n`, `y^n` and encoder tie-breaks.

use alloc::vec;
use alloc::vec::Vec;

use super::codec::Coder;
use super::Codebook;
use crate::error::{Error, Result};
use crate::math::{log2, plogp};
use crate::prob::SystemModel;
use crate::typical::TypicalityParams;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactLeakage {
    /// `I(S_C; J_C)` in bits.
    pub secrecy_leakage_bits: f64,
    /// `(1/n) I(X^n; J_C)` in bits per symbol.
    pub privacy_leakage_rate: f64,
    /// `(1/n) I(X^n; J_G)`, the leakage of the unmasked part.
    pub gs_privacy_leakage_rate: f64,
    /// `H(S_G)` in bits.
    pub gs_secret_entropy_bits: f64,
    /// Probability that enrollment finds no typical pair.
    pub enrollment_failure_prob: f64,
}

fn power(base: usize, exp: usize) -> u128 {
    (0..exp).fold(1u128, |acc, _| acc.saturating_mul(base as u128))
}

/// Digits of `index` in base `radix`, most significant first.
fn digits(mut index: usize, radix: usize, out: &mut [usize]) {
    for d in out.iter_mut().rev() {
        *d = index % radix;
        index /= radix;
    }
}

fn entropy(p: &[f64]) -> f64 {
    p.iter().map(|&q| plogp(q)).sum()
}

/// Leakage of the code for one individual with a uniform chosen secret.
///
/// The work is about `|Y|^n · n_v · n_u + |X|^n · (|Y|^n + m_j_c · m_s)`
/// steps; larger instances are refused against `budget`.
pub fn exact_leakage(
    model: &SystemModel,
    codebook: &Codebook,
    typ: &TypicalityParams,
    budget: u128,
) -> Result<ExactLeakage> {
    let p = codebook.params();
    let (n, nx, ny) = (p.n, model.x_size(), model.y_size());
    if ny != codebook.y_size() || model.z_size() != codebook.z_size() {
        return Err(Error::DimensionMismatch { context: "model vs codebook alphabet", expected: ny, found: codebook.y_size() });
    }
    let (xs, ys) = (power(nx, n), power(ny, n));
    let required = ys
        .saturating_mul(p.n_v as u128 * p.n_u as u128)
        .saturating_add(xs.saturating_mul(ys.saturating_add(p.m_j_c as u128 * p.m_s as u128)));
    if required > budget {
        return Err(Error::BudgetExceeded { guard: "exact leakage enumeration", required, limit: budget });
    }
    let (xs, ys) = (xs as usize, ys as usize);
    let m_s = p.m_s;
    let cells = p.m_j_g * m_s;
    let coder = Coder::new(codebook, typ);

    // P(j_G, s_G | y^n) as sparse (cell, prob) lists, cell = j_G * m_s + s_G
    let mut laws: Vec<Vec<(usize, f64)>> = Vec::with_capacity(ys);
    let mut failures = vec![false; ys];
    let mut y = vec![0usize; n];
    let mut buf = Vec::new();
    for yi in 0..ys {
        digits(yi, ny, &mut y);
        coder.candidates(&y, &mut buf);
        if buf.is_empty() {
            failures[yi] = true;
            laws.push(vec![(0, 1.0)]);
            continue;
        }
        let w = 1.0 / buf.len() as f64;
        let mut law: Vec<(usize, f64)> = Vec::with_capacity(buf.len());
        for &(m, k) in &buf {
            let (b, s_g) = codebook.bin_slot(m, k);
            let cell = (m * p.n_b + b) * m_s + s_g;
            match law.iter_mut().find(|(c, _)| *c == cell) {
                Some(e) => e.1 += w,
                None => law.push((cell, w)),
            }
        }
        laws.push(law);
    }

    let mut p_cell = vec![0.0; cells]; // P(j_G, s_G)
    let mut p_jc = vec![0.0; cells]; // P(j_G, masked)
    let mut p_jg = vec![0.0; p.m_j_g];
    let (mut h_jc_given_x, mut h_jg_given_x, mut fail) = (0.0, 0.0, 0.0);
    let mut x = vec![0usize; n];
    let mut cond = vec![0.0; cells];
    let mut q_jc = vec![0.0; cells];
    let mut q_jg = vec![0.0; p.m_j_g];
    let inv_ms = 1.0 / m_s as f64;
    for xi in 0..xs {
        digits(xi, nx, &mut x);
        let px: f64 = x.iter().map(|&a| model.source.prob(a)).product();
        if px == 0.0 {
            continue;
        }
        cond.iter_mut().for_each(|c| *c = 0.0);
        for (yi, law) in laws.iter().enumerate() {
            digits(yi, ny, &mut y);
            let w: f64 = x.iter().zip(&y).map(|(&a, &b)| model.enroll.prob(a, b)).product();
            if w == 0.0 {
                continue;
            }
            if failures[yi] {
                fail += px * w;
            }
            for &(cell, q) in law {
                cond[cell] += w * q;
            }
        }
        // masked = s_C + s_G mod m_s with s_C uniform
        for jg in 0..p.m_j_g {
            let row = &cond[jg * m_s..(jg + 1) * m_s];
            q_jg[jg] = row.iter().sum();
            for t in 0..m_s {
                let mut acc = 0.0;
                for s_c in 0..m_s {
                    acc += inv_ms * row[(t + m_s - s_c) % m_s];
                }
                q_jc[jg * m_s + t] = acc;
            }
        }
        h_jc_given_x += px * entropy(&q_jc);
        h_jg_given_x += px * entropy(&q_jg);
        for c in 0..cells {
            p_cell[c] += px * cond[c];
            p_jc[c] += px * q_jc[c];
        }
        for g in 0..p.m_j_g {
            p_jg[g] += px * q_jg[g];
        }
    }

    let h_jc = entropy(&p_jc);
    let mut h_sc_jc = 0.0;
    for s_c in 0..m_s {
        for jg in 0..p.m_j_g {
            for t in 0..m_s {
                h_sc_jc += plogp(inv_ms * p_cell[jg * m_s + (t + m_s - s_c) % m_s]);
            }
        }
    }
    let mut p_sg = vec![0.0; m_s];
    for (c, &q) in p_cell.iter().enumerate() {
        p_sg[c % m_s] += q;
    }
    let nf = n as f64;
    Ok(ExactLeakage {
        secrecy_leakage_bits: log2(m_s as f64) + h_jc - h_sc_jc,
        privacy_leakage_rate: (h_jc - h_jc_given_x) / nf,
        gs_privacy_leakage_rate: (entropy(&p_jg) - h_jg_given_x) / nf,
        gs_secret_entropy_bits: entropy(&p_sg),
        enrollment_failure_prob: fail,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prob::{AuxiliaryPair, Channel, FiniteDistribution};
    use crate::sim::{generate_codebook, CodeParams};

    fn model() -> SystemModel {
        SystemModel::new(FiniteDistribution::uniform(2).unwrap(), Channel::bsc(0.1).unwrap(), Channel::bsc(0.2).unwrap())
            .unwrap()
    }

    #[test]
    fn single_secret_has_zero_secrecy_leakage() {
        let aux = AuxiliaryPair::with_v_equal_u(Channel::bsc(0.1).unwrap()).unwrap();
        let cb = generate_codebook(&model(), &aux, CodeParams::new(4, 0.1, 1, 1, 3, 4).unwrap(), 2, true).unwrap();
        let typ = TypicalityParams::new(0.2).unwrap();
        let l = exact_leakage(&model(), &cb, &typ, 1 << 20).unwrap();
        assert_eq!(l.secrecy_leakage_bits, 0.0);
        assert_eq!(l.gs_secret_entropy_bits, 0.0);
        assert!(l.privacy_leakage_rate >= -1e-12 && l.privacy_leakage_rate <= 1.0 + 1e-12);
        assert!(l.privacy_leakage_rate <= l.gs_privacy_leakage_rate + 1e-9);
    }

    #[test]
    fn symmetric_bins_give_perfect_masking() {
        // identity everything, n = 1: each y has one satellite, bins hold
        // both values of s_G with equal weight
        let m = SystemModel::new(
            FiniteDistribution::uniform(2).unwrap(),
            Channel::identity(2).unwrap(),
            Channel::identity(2).unwrap(),
        )
        .unwrap();
        let aux = AuxiliaryPair::with_constant_v(Channel::identity(2).unwrap()).unwrap();
        let p = CodeParams::new(1, 0.1, 1, 2, 1, 1).unwrap();
        let cb = Codebook::from_parts(&m, &aux, p, vec![vec![0]], vec![vec![vec![0], vec![1]]], vec![vec![0, 1]]).unwrap();
        let l = exact_leakage(&m, &cb, &TypicalityParams::new(0.6).unwrap(), 1 << 10).unwrap();
        assert!(l.secrecy_leakage_bits.abs() < 1e-15);
        assert!((l.gs_secret_entropy_bits - 1.0).abs() < 1e-15);
        // the masked value hides s_G = x entirely
        assert!(l.privacy_leakage_rate.abs() < 1e-15);
        assert_eq!(l.enrollment_failure_prob, 0.0);
    }

    #[test]
    fn budget_guard() {
        let aux = AuxiliaryPair::with_v_equal_u(Channel::bsc(0.1).unwrap()).unwrap();
        let cb = generate_codebook(&model(), &aux, CodeParams::new(12, 0.1, 1, 1, 3, 4).unwrap(), 2, true).unwrap();
        let err = exact_leakage(&model(), &cb, &TypicalityParams::new(0.2).unwrap(), 1000).unwrap_err();
        assert!(err.is_budget());
    }
}
