use bis_core::region::{boundary_sweep, is_member_a1, summarize, Witness};
use bis_core::typical::{is_jointly_typical, is_strongly_typical};
use bis_core::{
    AuxiliaryPair, Channel, FiniteDistribution, JointDistribution, RateTuple, RegionSpec, RegionVariant, SearchConfig,
    Serial, SymbolSequence, SystemModel, TypicalityParams,
};
use proptest::prelude::*;

fn bsc_model(pe: f64, pi: f64) -> SystemModel {
    SystemModel::new(FiniteDistribution::uniform(2).unwrap(), Channel::bsc(pe).unwrap(), Channel::bsc(pi).unwrap())
        .unwrap()
}

fn coarse() -> SearchConfig {
    SearchConfig { grid_steps: 4, refinement_rounds: 12, ..SearchConfig::default() }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn a1_boundary_is_monotone_and_replays(pe in 0.0f64..0.3, pi in 0.0f64..0.3) {
        let model = bsc_model(pe, pi);
        let spec = RegionSpec::default_for(RegionVariant::A1, 2);
        let grid: Vec<f64> = (0..=6).map(|k| 0.1 * k as f64).collect();
        let cfg = coarse();
        let rows = boundary_sweep(&model, &spec, &cfg, &grid, &Serial).unwrap();
        let mut last = f64::INFINITY;
        for row in &rows {
            let Some(v) = &row.values else { continue };
            prop_assert!(v.max_r_s <= last + 1e-12);
            last = v.max_r_s;
            let Witness::U(u) = &v.witness else { panic!("A1 witness is a channel") };
            let s = summarize(&model, &AuxiliaryPair::with_constant_v(u.clone()).unwrap()).unwrap();
            prop_assert!(row.r_i + v.max_r_s <= s.i_zu + 1e-9);
            prop_assert!((v.min_r_j - s.i_yu).abs() < 1e-9);
            prop_assert!(v.min_r_l + 1e-9 >= s.i_xu - s.i_zu + row.r_i);
        }
        // once infeasible, always infeasible
        let first_none = rows.iter().position(|r| r.values.is_none()).unwrap_or(rows.len());
        prop_assert!(rows[first_none..].iter().all(|r| r.values.is_none()));
    }

    #[test]
    fn a2_boundary_stays_inside_a1_and_matches_it(pe in 0.0f64..0.3, pi in 0.0f64..0.3) {
        let model = bsc_model(pe, pi);
        let cfg = coarse();
        let grid = [0.0, 0.1, 0.2];
        let a2 = boundary_sweep(&model, &RegionSpec::default_for(RegionVariant::A2, 2), &cfg, &grid, &Serial).unwrap();
        let a1 = boundary_sweep(&model, &RegionSpec::default_for(RegionVariant::A1, 2), &cfg, &grid, &Serial).unwrap();
        for (row, other) in a2.iter().zip(&a1) {
            prop_assert_eq!(row.values.is_some(), other.values.is_some());
            let Some(v) = &row.values else { continue };
            let w = other.values.as_ref().unwrap();
            prop_assert!((v.max_r_s - w.max_r_s).abs() <= 1e-3, "A2 {} vs A1 {}", v.max_r_s, w.max_r_s);
            let t = RateTuple::new(row.r_i, v.max_r_s, v.min_r_j, v.min_r_l).unwrap();
            let m = is_member_a1(&model, &t, &cfg, &Serial).unwrap();
            prop_assert!(m.violation <= 1e-6, "{:?} violation {}", t, m.violation);
        }
    }

    #[test]
    fn joint_typicality_matches_counting(
        probs in prop::collection::vec(prop_oneof![Just(0.0), 0.05f64..1.0], 6),
        pairs in prop::collection::vec((0usize..2, 0usize..3), 1..16),
        delta in 0.01f64..0.5,
    ) {
        prop_assume!(probs.iter().sum::<f64>() > 0.0);
        let s: f64 = probs.iter().sum();
        let mass: Vec<f64> = probs.iter().map(|p| p / s).collect();
        let joint = JointDistribution::new(vec![2, 3], mass.clone()).unwrap();
        let a = SymbolSequence::new(2, pairs.iter().map(|p| p.0).collect()).unwrap();
        let b = SymbolSequence::new(3, pairs.iter().map(|p| p.1).collect()).unwrap();
        let typ = TypicalityParams::new(delta).unwrap();
        let n = pairs.len() as f64;
        let expected = (0..6).all(|cell| {
            let c = pairs.iter().filter(|&&(x, y)| x * 3 + y == cell).count();
            if mass[cell] == 0.0 { c == 0 } else { (c as f64 / n - mass[cell]).abs() <= delta }
        });
        prop_assert_eq!(is_jointly_typical(&[&a, &b], &joint, &typ).unwrap(), expected);
        // the product alphabet view agrees with the single-sequence test
        let flat = SymbolSequence::new(6, pairs.iter().map(|&(x, y)| x * 3 + y).collect()).unwrap();
        let dist = FiniteDistribution::new(mass).unwrap();
        prop_assert_eq!(is_strongly_typical(&flat, &dist, &typ).unwrap(), expected);
    }
}

#[test]
fn identity_model_corner() {
    // Z = Y = X uniform binary: max R_S at R_I = 0 is 1 bit with R_J = R_L = 1
    let model = bsc_model(0.0, 0.0);
    let spec = RegionSpec::default_for(RegionVariant::A1, 2);
    let rows = boundary_sweep(&model, &spec, &coarse(), &[0.0, 0.5, 1.0], &Serial).unwrap();
    let v = rows[0].values.as_ref().unwrap();
    assert!((v.max_r_s - 1.0).abs() < 1e-12);
    assert!((v.min_r_j - 1.0).abs() < 1e-12);
    assert!(v.min_r_l.abs() < 1e-12);
    let v = rows[1].values.as_ref().unwrap();
    assert!((v.max_r_s - 0.5).abs() < 1e-12);
    assert!((v.min_r_l - 0.5).abs() < 1e-12);
}

#[test]
fn membership_witness_is_a_channel_of_bound_size() {
    let model = bsc_model(0.1, 0.2);
    let m = is_member_a1(&model, &RateTuple::new(0.0, 0.0, 0.0, 0.0).unwrap(), &coarse(), &Serial).unwrap();
    assert!(m.member);
    assert_eq!(m.witness.output_size(), 4);
    assert_eq!(m.witness.input_size(), 2);
}
