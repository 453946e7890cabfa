use std::collections::HashMap;

use bis_core::sim::{
    enroll, exact_leakage, generate_codebook, identify, mask, unmask, CodeParams, Database, Decision, Template,
};
use bis_core::{AuxiliaryPair, Channel, FiniteDistribution, SymbolSequence, SystemModel, TypicalityParams};
use proptest::prelude::*;

fn model(pe: f64, pi: f64) -> SystemModel {
    SystemModel::new(FiniteDistribution::uniform(2).unwrap(), Channel::bsc(pe).unwrap(), Channel::bsc(pi).unwrap())
        .unwrap()
}

#[test]
fn masking_round_trip_exhaustive() {
    for m_s in 1..=64 {
        for s in 0..m_s {
            for g in 0..m_s {
                let c = mask(s, g, m_s).unwrap();
                assert!(c < m_s);
                assert_eq!(unmask(c, g, m_s).unwrap(), s);
            }
        }
    }
}

#[test]
fn uniform_pad_hides_the_secret() {
    for m_s in 1..=16usize {
        // P(c | s) is uniform for every s, so S and C are independent
        for s in 0..m_s {
            let mut seen: Vec<usize> = (0..m_s).map(|g| mask(s, g, m_s).unwrap()).collect();
            seen.sort_unstable();
            assert_eq!(seen, (0..m_s).collect::<Vec<_>>());
        }
        // and the mutual information of a non-uniform secret with C vanishes
        let ps: Vec<f64> = (0..m_s).map(|s| (s + 1) as f64).collect();
        let total: f64 = ps.iter().sum();
        let mut joint: HashMap<(usize, usize), f64> = HashMap::new();
        for s in 0..m_s {
            for g in 0..m_s {
                *joint.entry((s, mask(s, g, m_s).unwrap())).or_insert(0.0) += ps[s] / total / m_s as f64;
            }
        }
        let mut pc = vec![0.0; m_s];
        for (&(_, c), &p) in &joint {
            pc[c] += p;
        }
        let mi: f64 = joint.iter().map(|(&(s, c), &p)| p * (p / (ps[s] / total * pc[c])).log2()).sum();
        assert!(mi.abs() < 1e-12, "m_s = {m_s}: {mi}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn template_bookkeeping_round_trips(seed in any::<u64>(), secret in 0usize..3, ys in prop::collection::vec(0usize..2, 6)) {
        let m = model(0.05, 0.1);
        let aux = AuxiliaryPair::new(Channel::bsc(0.1).unwrap(), Channel::bsc(0.2).unwrap()).unwrap();
        let p = CodeParams::new(6, 0.1, 1, 3, 3, 2).unwrap();
        let cb = generate_codebook(&m, &aux, p, seed, true).unwrap();
        let typ = TypicalityParams::new(0.35).unwrap();
        let y = SymbolSequence::new(2, ys).unwrap();
        let e = enroll(&cb, &y, secret, &typ, seed ^ 1).unwrap();
        match e.satellite {
            Some((mi, k)) => {
                prop_assert!(cb.encoder_candidates(&y, &typ).unwrap().contains(&(mi, k)));
                let t = e.template;
                prop_assert_eq!(t.m_index, mi);
                prop_assert_eq!(cb.satellite_at(mi, t.b_index, e.gs_secret), k);
                prop_assert_eq!(unmask(t.masked_secret, e.gs_secret, 3).unwrap(), secret);
            }
            None => {
                prop_assert!(cb.encoder_candidates(&y, &typ).unwrap().is_empty());
                prop_assert_eq!(e.template, Template { m_index: 0, b_index: 0, masked_secret: secret });
            }
        }
        // the same seed gives the same choice
        prop_assert_eq!(enroll(&cb, &y, secret, &typ, seed ^ 1).unwrap(), e);
    }

    #[test]
    fn exact_leakage_bounds(seed in any::<u64>()) {
        let m = model(0.1, 0.2);
        let aux = AuxiliaryPair::new(Channel::bsc(0.1).unwrap(), Channel::bsc(0.25).unwrap()).unwrap();
        let p = CodeParams::new(4, 0.1, 1, 2, 2, 2).unwrap();
        let cb = generate_codebook(&m, &aux, p, seed, true).unwrap();
        let l = exact_leakage(&m, &cb, &TypicalityParams::new(0.3).unwrap(), 1 << 20).unwrap();
        prop_assert!(l.secrecy_leakage_bits >= -1e-12 && l.secrecy_leakage_bits <= 1.0 + 1e-12);
        prop_assert!(l.privacy_leakage_rate >= -1e-12);
        prop_assert!(l.privacy_leakage_rate <= l.gs_privacy_leakage_rate + 1e-9);
        prop_assert!(l.gs_secret_entropy_bits <= 1.0 + 1e-12);
    }
}

#[test]
fn disjoint_support_observation_fails() {
    // Z is always 0 under the reference law; an all-ones observation can
    // never be typical
    let m = SystemModel::new(
        FiniteDistribution::uniform(2).unwrap(),
        Channel::identity(2).unwrap(),
        Channel::new(vec![vec![1.0, 0.0], vec![1.0, 0.0]]).unwrap(),
    )
    .unwrap();
    let aux = AuxiliaryPair::with_constant_v(Channel::identity(2).unwrap()).unwrap();
    let p = CodeParams::new(4, 0.1, 1, 1, 1, 8).unwrap();
    let cb = generate_codebook(&m, &aux, p, 3, true).unwrap();
    let db = Database::new(&cb, vec![Template { m_index: 0, b_index: 0, masked_secret: 0 }]).unwrap();
    let z = SymbolSequence::new(2, vec![1; 4]).unwrap();
    let typ = TypicalityParams::new(0.5).unwrap();
    assert_eq!(identify(&cb, &db, &z, &typ).unwrap(), Decision::Failure { matches: 0 });
}
