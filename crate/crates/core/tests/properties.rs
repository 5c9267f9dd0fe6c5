//! Property tests for the exact-arithmetic layer and the sieve counters.

use num_rational::BigRational;
use proptest::prelude::*;
use tdl::empirical::{sieve_tails, Threshold};
use tdl::zetaring::{parse_decimal, zeta_value, FormalSeries, ZetaExpr};

fn small_rational() -> impl Strategy<Value = (i64, i64)> {
    (-5i64..=5, 1i64..=4)
}

fn expr_from(n: i64, d: i64, kind: u8) -> ZetaExpr {
    let r = BigRational::new(n.into(), d.into());
    match kind % 3 {
        0 => ZetaExpr::from_rational(r),
        1 => ZetaExpr::pi_power(2, r),
        _ => zeta_value(3).unwrap().mul_rational(&r),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn series_reversion_round_trips(
        coeffs in prop::collection::vec(small_rational(), 1..=6),
    ) {
        let order = coeffs.len() + 1;
        let mut f = FormalSeries::identity(order);
        for (j, &(n, d)) in coeffs.iter().enumerate() {
            f.set_coeff(j + 2, ZetaExpr::from_rational(BigRational::new(n.into(), d.into())));
        }
        let g = f.revert().unwrap();
        prop_assert_eq!(f.compose(&g).unwrap(), FormalSeries::identity(order));
        prop_assert_eq!(g.compose(&f).unwrap(), FormalSeries::identity(order));
    }

    #[test]
    fn ring_distributivity(
        (an, ad) in small_rational(), ak in 0u8..3,
        (bn, bd) in small_rational(), bk in 0u8..3,
        (cn, cd) in small_rational(), ck in 0u8..3,
    ) {
        let a = expr_from(an, ad, ak);
        let b = expr_from(bn, bd, bk);
        let c = expr_from(cn, cd, ck);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
    }

    #[test]
    fn decimal_parse_is_exact(int_part in 0u64..1_000_000, frac in 0u32..1_000_000u32, digits in 1u32..=6) {
        let scale = 10u64.pow(digits);
        let frac = frac % scale as u32;
        let text = format!("{int_part}.{frac:0width$}", width = digits as usize);
        let parsed = parse_decimal(&text).unwrap();
        let expected = BigRational::new(
            ((int_part as i64) * scale as i64 + frac as i64).into(),
            (scale as i64).into(),
        );
        prop_assert_eq!(parsed, expected);
    }

    #[test]
    fn counts_are_monotone_and_ordered(n in 1u64..3000, lo in 11u32..25, step in 1u32..10) {
        // thresholds lo/10 < (lo+step)/10 as exact decimals
        let t1 = format!("{}.{}", lo / 10, lo % 10);
        let hi = lo + step;
        let t2 = format!("{}.{}", hi / 10, hi % 10);
        let ths = [Threshold::parse(&t1).unwrap(), Threshold::parse(&t2).unwrap()];
        let tail = sieve_tails(n, &ths).unwrap();
        prop_assert!(tail.counts_a[0] >= tail.counts_a[1]);
        prop_assert!(tail.counts_b[0] >= tail.counts_b[1]);
        prop_assert!(tail.counts_d[0] >= tail.counts_d[1]);
        // pointwise σ(n)/n < n/φ(n) forces A ≤ B at every threshold
        prop_assert!(tail.counts_a[0] <= tail.counts_b[0]);
        prop_assert!(tail.counts_a[1] <= tail.counts_b[1]);
    }
}
