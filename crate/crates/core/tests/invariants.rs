mod common;

use proptest::prelude::*;

use common::props;

proptest! {
    #![proptest_config(props::config())]

    #[test]
    fn waiting_bounds_are_monotone(seed in any::<u64>()) {
        props::waiting_bounds_are_monotone(seed)?;
    }

    #[test]
    fn objective_identity(seed in any::<u64>()) {
        props::objective_identity(seed)?;
    }

    #[test]
    fn start_bounds_match_lp(seed in any::<u64>(), pick in any::<prop::sample::Index>()) {
        props::start_bounds_match_lp(seed, pick)?;
    }

    #[test]
    fn schedules_are_sound(seed in any::<u64>()) {
        props::schedules_are_sound(seed)?;
    }

    #[test]
    fn corpus_round_trip(records in props::records()) {
        props::corpus_round_trip(records)?;
    }
}
