//! Invariants checked on random inputs.
mod common;

use proptest::prelude::*;

fn run(check: common::Check) -> Result<(), TestCaseError> {
    check.map_err(TestCaseError::fail)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn homogeneity_identity(seed in any::<u64>()) {
        run(common::homogeneity_identity(seed))?;
    }

    #[test]
    fn degree_rescaling(seed in any::<u64>()) {
        run(common::degree_rescaling(seed))?;
    }

    #[test]
    fn parity_matches_reflection(seed in any::<u64>()) {
        run(common::parity_classification(seed))?;
    }

    #[test]
    fn projection_is_idempotent_and_ray_invariant(seed in any::<u64>()) {
        run(common::projection_invariance(seed))?;
    }

    #[test]
    fn stp_is_associative(seed in any::<u64>()) {
        run(common::stp_associativity(seed))?;
    }

    #[test]
    fn homogenize_round_trip(seed in any::<u64>()) {
        run(common::homogenize_round_trip(seed))?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn quadratic_images_are_convex(seed in any::<u64>()) {
        let tested = common::dines_convexity(seed).map_err(TestCaseError::fail)?;
        prop_assume!(tested);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn strict_certificates_hold_on_fresh_points(seed in any::<u64>()) {
        run(common::certificate_soundness(seed))?;
    }

    #[test]
    fn min_switching_descends(seed in any::<u64>()) {
        run(common::simulation_descent(seed))?;
    }
}
