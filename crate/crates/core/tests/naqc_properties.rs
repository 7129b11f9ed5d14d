mod common;

use approx::assert_abs_diff_eq;
use naqc_core::naqc::{averaged_naqc, chain_contributions, predecessor_branches};
use naqc_core::{oracle, sequential_naqc, singlet, CoherenceMeasure, ScenarioConfig, Sharpness};
use proptest::prelude::*;

use CoherenceMeasure::*;

fn simulate(measure: CoherenceMeasure, chain: &[f64]) -> f64 {
    let config = ScenarioConfig::from_values(chain, measure).unwrap();
    sequential_naqc(&singlet(), &config).unwrap().value
}

#[test]
fn matches_bell_diagonal_reference_for_long_chains() {
    let chains: [&[f64]; 5] = [
        &[0.3, 0.8],
        &[0.55, 0.2, 1.0],
        &[0.9, 0.1, 0.4, 0.7],
        &[0.15, 0.35, 0.55, 0.75, 1.0],
        &[0.99, 0.01, 0.5],
    ];
    for chain in chains {
        for m in CoherenceMeasure::ALL {
            assert_abs_diff_eq!(simulate(m, chain), common::bell_diagonal_naqc(m, chain), epsilon = 1e-12);
        }
    }
}

#[test]
fn library_closed_forms_match_reference() {
    for a in 1..=19 {
        let l1 = a as f64 / 20.0;
        for b in 1..=20 {
            let l2 = b as f64 / 20.0;
            assert_abs_diff_eq!(oracle::n2_l1(l1, l2).unwrap(), common::n2_l1(l1, l2), epsilon = 1e-12);
            assert_abs_diff_eq!(oracle::n2_e(l1, l2).unwrap(), common::n2_e(l1, l2), epsilon = 1e-12);
            assert_abs_diff_eq!(oracle::n2_s(l1, l2).unwrap(), common::n2_s(l1, l2), epsilon = 1e-12);
            assert_abs_diff_eq!(
                oracle::n3_l1(l1, 0.4, l2).unwrap(),
                common::n3_l1(l1, 0.4, l2),
                epsilon = 1e-12
            );
        }
        assert_abs_diff_eq!(oracle::n1_l1(l1).unwrap(), common::n1_l1(l1), epsilon = 1e-12);
        assert_abs_diff_eq!(oracle::n1_e(l1).unwrap(), common::n1_e(l1), epsilon = 1e-12);
        assert_abs_diff_eq!(oracle::n1_s(l1).unwrap(), common::n1_s(l1), epsilon = 1e-12);
    }
}

#[test]
fn branch_weights_are_uniform() {
    let preds = [Sharpness::new(0.4).unwrap(), Sharpness::new(0.7).unwrap()];
    let branches = predecessor_branches(&singlet(), &preds).unwrap();
    assert_eq!(branches.len(), 9);
    let config = ScenarioConfig::from_values(&[0.4, 0.7, 1.0], L1).unwrap();
    let parts = chain_contributions(&singlet(), &config).unwrap();
    let mean = parts.iter().map(|(_, v)| v).sum::<f64>() / parts.len() as f64;
    assert_abs_diff_eq!(mean, averaged_naqc(&branches, L1, Sharpness::SHARP).unwrap(), epsilon = 1e-14);
}

#[test]
fn predecessor_setting_order_is_irrelevant() {
    let config = ScenarioConfig::from_values(&[0.4, 0.7, 0.9], SkewInformation).unwrap();
    let parts = chain_contributions(&singlet(), &config).unwrap();
    for (settings, value) in &parts {
        let swapped: Vec<_> = settings.iter().rev().copied().collect();
        let (_, twin) = parts.iter().find(|(s, _)| *s == swapped).unwrap();
        // the singlet is isotropic, so only the multiset of settings matters
        assert_abs_diff_eq!(value, twin, epsilon = 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // A sharper predecessor disturbs more; a sharper target sees more.
    #[test]
    fn monotone_in_sharpness(
        a in 0.01f64..0.98,
        da in 0.001f64..0.01,
        t in 0.05f64..0.99,
        dt in 0.001f64..0.01,
        m in 0usize..3,
    ) {
        let m = CoherenceMeasure::ALL[m];
        prop_assert!(simulate(m, &[a, t]) > simulate(m, &[a + da, t]));
        prop_assert!(simulate(m, &[a, t]) < simulate(m, &[a, t + dt]));
    }

    #[test]
    fn never_exceeds_singlet_ceiling(chain in prop::collection::vec(0.01f64..0.99, 1..4), m in 0usize..3) {
        let m = CoherenceMeasure::ALL[m];
        let mut full = chain.clone();
        full.push(1.0);
        prop_assert!(simulate(m, &full) <= 3.0 + 1e-12);
    }
}
