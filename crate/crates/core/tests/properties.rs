use proptest::prelude::*;

use liecalc::algebroid::{fixtures, schouten, Presentation};
use liecalc::cli::{parse_multivector, run_command};
use liecalc::differentials::{exact_differential, exactness_witness, validate_k_differential};
use liecalc::jetgroup::{jg_inv, jg_mul, random_element, PointContext};
use liecalc::random;

fn fixture() -> impl Strategy<Value = Presentation> {
    (0..fixtures::all_valid().len()).prop_map(|i| fixtures::all_valid().swap_remove(i))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rendered_sections_parse_back(p in fixture(), seed in any::<u64>(), q in 0usize..4) {
        let mut rng = random::rng(seed);
        let w = random::multivector(&mut rng, &p, q, 2);
        prop_assert_eq!(parse_multivector(&p.render(&w), p.coords(), p.frame()).unwrap(), w);
    }

    #[test]
    fn schouten_is_graded_antisymmetric(p in fixture(), seed in any::<u64>(), q1 in 0usize..3, q2 in 0usize..3) {
        let mut rng = random::rng(seed);
        let a = random::multivector(&mut rng, &p, q1, 1);
        let b = random::multivector(&mut rng, &p, q2, 1);
        let ab = schouten(&p, &a, &b).unwrap();
        let ba = schouten(&p, &b, &a).unwrap();
        // [a, b] = −(−1)^{(q1−1)(q2−1)} [b, a]
        let odd = (q1 + 1) * (q2 + 1) % 2 == 1;
        let expected = if odd { ba } else { -ba };
        prop_assert_eq!(ab, expected);
    }

    #[test]
    fn exact_differentials_validate(p in fixture(), seed in any::<u64>(), k in 1usize..3) {
        let mut rng = random::rng(seed);
        let tau = random::multivector(&mut rng, &p, k, 1);
        prop_assume!(!tau.is_zero() && k <= p.top());
        let d = exact_differential(&p, &tau).unwrap();
        prop_assert!(validate_k_differential(&p, &d).unwrap().passed());
        let w = exactness_witness(&p, &d, 1).unwrap();
        let w = w.expect("witness within bound 1");
        // A zero witness carries no degree; it only occurs for δ = 0.
        if w.is_zero() {
            prop_assert!(d.is_zero());
        } else {
            prop_assert_eq!(exact_differential(&p, &w).unwrap(), d);
        }
    }

    #[test]
    fn jet_group_inverses(p in fixture(), seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let x = random::point(&mut rng, p.m());
        let ctx = PointContext::new(&p, &x).unwrap();
        let g = random_element(&mut rng, &ctx);
        prop_assert!(jg_mul(&g, &jg_inv(&g).unwrap()).unwrap().is_identity());
    }

    #[test]
    fn seeded_reports_repeat(seed in any::<u64>()) {
        let file = format!("{}/../../fixtures/tan2.alg", env!("CARGO_MANIFEST_DIR"));
        let s = seed.to_string();
        let argv = ["liecalc", "--json", "deform-check", file.as_str(), "--seed", s.as_str()];
        let first = run_command(argv);
        prop_assert_eq!(first.code, 0);
        prop_assert_eq!(first, run_command(argv));
    }
}
