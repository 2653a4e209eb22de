use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use stringprime::counting::{avoider_density_bound, AvoiderCounter, BaseRContext};
use stringprime::digits::{contains, DigitString};
use stringprime::experiments::{find_prime_ap, relative_density, Outcome};
use stringprime::primes::{is_prime, SieveConfig};

const CORPUS: [&str; 7] = ["9", "0", "1", "12", "00", "123", "999"];

fn ds(s: &str) -> DigitString {
    s.parse().unwrap()
}

#[test]
fn avoider_share_below_density_bound() {
    let mut rng = StdRng::seed_from_u64(7);
    for pat in CORPUS {
        let s = ds(pat);
        let counter = AvoiderCounter::new(&s);
        for _ in 0..500 {
            let n: u128 = rng.gen_range(1..10_000_000);
            let ctx = BaseRContext::for_pattern(&s, n).unwrap();
            let share = counter.count(n).unwrap().0 as f64 / n as f64;
            assert!(share < avoider_density_bound(&ctx), "{pat} n={n}");
        }
    }
}

#[test]
fn density_regression_anchor() {
    // primes below 1e7: 664579, of which 397093 contain a 9 (independent sieve scan)
    let r = relative_density(&ds("9"), 10_000_000, &SieveConfig::default()).unwrap();
    assert_eq!((r.pi_n, r.containing, r.avoiding), (664_579, 397_093, 267_486));
    assert!((r.density - 0.597_510_604_457_859_8).abs() < 1e-12);
}

#[test]
fn density_partition_and_avoider_ceiling() {
    let config = SieveConfig::default();
    for pat in CORPUS {
        let s = ds(pat);
        let counter = AvoiderCounter::new(&s);
        for e in 1..=6 {
            let n = 10u64.pow(e);
            let r = relative_density(&s, n, &config).unwrap();
            assert_eq!(r.containing + r.avoiding, r.pi_n);
            if r.pi_n > 0 {
                let ceiling = counter.count(n as u128).unwrap().0 as f64 / r.pi_n as f64;
                assert!(1.0 - r.density <= ceiling, "{pat} n={n}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn progressions_are_valid(
        pat in prop::sample::select(vec!["1", "3", "7", "9", "13", "37"]),
        k in 3usize..=5,
        limit in 1_000u64..200_000,
    ) {
        let s = ds(pat);
        if let Outcome::Found(ap) = find_prime_ap(&s, k, limit, &SieveConfig::default()).unwrap() {
            prop_assert_eq!(ap.terms.len(), k);
            prop_assert!(ap.difference > 0);
            prop_assert!(ap.terms.windows(2).all(|w| w[0] < w[1]));
            for (i, &t) in ap.terms.iter().enumerate() {
                prop_assert_eq!(t, ap.first_term + i as u64 * ap.difference);
                prop_assert!(t <= limit && is_prime(t) && contains(t, &s));
            }
        }
    }

    #[test]
    fn containing_count_is_monotone(
        pat in prop::sample::select(CORPUS.to_vec()),
        a in 1u64..300_000,
        b in 1u64..300_000,
    ) {
        let s = ds(pat);
        let (lo, hi) = (a.min(b), a.max(b));
        let config = SieveConfig::default();
        let first = relative_density(&s, lo, &config).unwrap();
        let second = relative_density(&s, hi, &config).unwrap();
        prop_assert!(first.containing <= second.containing);
    }
}
