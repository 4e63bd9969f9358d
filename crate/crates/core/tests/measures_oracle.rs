//! Streaming estimators against brute-force recomputation on random logs.

mod common;

use proptest::prelude::*;
use triadic_net::graph::DegreeKind;
use triadic_net::measures::*;

use common::checks::*;

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, ..ProptestConfig::default() })]

    #[test]
    fn attachment_kernel_matches_oracle(seed in any::<u64>(), directed in any::<bool>()) {
        check_pa(&draw_log(seed, directed), seed)?;
    }

    #[test]
    fn growth_matches_oracle(seed in any::<u64>(), directed in any::<bool>()) {
        check_growth(&draw_log(seed, directed))?;
    }

    #[test]
    fn influence_matches_oracle(seed in any::<u64>(), directed in any::<bool>()) {
        check_influence(&draw_log(seed, directed))?;
    }

    #[test]
    fn static_measures_match_oracle(seed in any::<u64>(), directed in any::<bool>()) {
        check_static(&draw_log(seed, directed))?;
    }

    #[test]
    fn measures_are_pure(seed in any::<u64>()) {
        let log = draw_log(seed, false);
        let a = serde_json::to_string(&exposure_influence(&log).unwrap()).unwrap();
        let b = serde_json::to_string(&exposure_influence(&log).unwrap()).unwrap();
        prop_assert_eq!(a, b);
        let (first, last) = (log.first_time().unwrap(), log.last_time().unwrap());
        if last > first {
            let t0s = [first];
            let x = measure_pa(&log, DegreeKind::Favorite, DegreeKind::Favorite, &t0s, last - first);
            let y = measure_pa(&log, DegreeKind::Favorite, DegreeKind::Favorite, &t0s, last - first);
            prop_assert_eq!(format!("{x:?}"), format!("{y:?}"));
        }
    }

    #[test]
    fn classification_matches_triangle_count(seed in any::<u64>(), directed in any::<bool>()) {
        check_classification(&draw_log(seed, directed), seed, 20)?;
    }
}
