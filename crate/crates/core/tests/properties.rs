use levi_core::laws;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig { cases: 1000, ..ProptestConfig::default() })]

    #[test]
    fn galois_connection(seed in any::<u64>()) {
        laws::galois(seed).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn de_morgan(seed in any::<u64>()) {
        laws::de_morgan(seed).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn triple_perp_identity(seed in any::<u64>()) {
        laws::triple_perp(seed).map_err(TestCaseError::fail)?;
    }
}
