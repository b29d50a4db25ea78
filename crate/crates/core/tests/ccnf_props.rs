use std::collections::BTreeMap;

use loopspace::catalog;
use loopspace::ccnf::{cc_factor, cc_order, cc_reconstruct, invert_unit_series, CCNormalForm};
use loopspace::ring::RingDescriptor;
use loopspace::series::{LaurentSeries, Precision};
use loopspace::DEFAULT_TERMS;
use proptest::prelude::*;

const K3: RingDescriptor = RingDescriptor::Nilpotent { order: 3 };

fn ring_of(nilpotent: bool) -> RingDescriptor {
    if nilpotent {
        K3
    } else {
        RingDescriptor::Rational
    }
}

fn series(seed: u64, nilpotent: bool) -> LaurentSeries {
    catalog::random_invertible_series(&mut catalog::rng(seed), ring_of(nilpotent), nilpotent, 24)
}

/// Normal form of `α(zⁿ)` predicted from that of `α`.
fn covered(nf: &CCNormalForm, n: i64) -> CCNormalForm {
    let spread = |m: &BTreeMap<i64, _>| m.iter().map(|(i, c)| (i * n, Clone::clone(c))).collect();
    CCNormalForm {
        unit: nf.unit.clone(),
        order: nf.order * n,
        neg: spread(&nf.neg),
        pos: spread(&nf.pos),
        prec: match nf.prec {
            Precision::Finite(p) => Precision::Finite(p * n),
            Precision::Exact => Precision::Exact,
        },
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn factor_then_reconstruct(seed in any::<u64>(), nilpotent in any::<bool>()) {
        let alpha = series(seed, nilpotent);
        let nf = cc_factor(&alpha, DEFAULT_TERMS).unwrap();
        nf.validate().unwrap();
        let back = cc_reconstruct(&nf, alpha.prec()).unwrap();
        prop_assert!(back.agrees_with(&alpha), "{} -> {} -> {}", alpha, nf, back);
        if let Precision::Finite(p) = back.prec() {
            prop_assert!(p - nf.order >= 8, "{}: precision {}", alpha, p);
        }
    }

    #[test]
    fn reconstruct_then_factor(seed in any::<u64>(), nilpotent in any::<bool>()) {
        let nf = catalog::random_normal_form(&mut catalog::rng(seed), ring_of(nilpotent), nilpotent, 24);
        let alpha = cc_reconstruct(&nf, Precision::Exact).unwrap();
        let again = cc_factor(&alpha, DEFAULT_TERMS).unwrap();
        if nf.prec == Precision::Exact {
            prop_assert_eq!(again, nf);
        } else {
            prop_assert!(again.agrees_with(&nf), "{} -> {}", nf, again);
        }
    }

    #[test]
    fn order_is_additive(a in any::<u64>(), b in any::<u64>(), nilpotent in any::<bool>()) {
        let (x, y) = (series(a, nilpotent), series(b, nilpotent));
        let xy = x.mul(&y).unwrap();
        prop_assert_eq!(cc_order(&xy).unwrap(), cc_order(&x).unwrap() + cc_order(&y).unwrap());
    }

    #[test]
    fn factoring_commutes_with_covering(seed in any::<u64>(), nilpotent in any::<bool>(), n in 1u32..=4) {
        let alpha = series(seed, nilpotent);
        let nf = cc_factor(&alpha, DEFAULT_TERMS).unwrap();
        let cover = cc_factor(&alpha.covering(n), DEFAULT_TERMS * n).unwrap();
        let predicted = covered(&nf, n as i64);
        prop_assert!(cover.agrees_with(&predicted), "{} vs {}", cover, predicted);
    }

    #[test]
    fn inverse_is_inverse(seed in any::<u64>(), nilpotent in any::<bool>()) {
        let alpha = series(seed, nilpotent);
        let inv = invert_unit_series(&alpha, DEFAULT_TERMS).unwrap();
        let one = alpha.mul(&inv).unwrap();
        prop_assert!(one.is_one_up_to_precision(), "{} * {} = {}", alpha, inv, one);
    }
}
