//! Printed values parse back to themselves.

use std::sync::Arc;

use loopspace::catalog;
use loopspace::classify::census_classes;
use loopspace::covers::Perm;
use loopspace::curve::{ComponentClass, CurveModel};
use loopspace::forms::third_kind;
use loopspace::ring::RingDescriptor;
use loopspace::syntax::{parse_curve, parse_form, parse_normal_form, parse_place, parse_series};
use loopspace::DEFAULT_TERMS;
use rand::Rng;

const RINGS: [RingDescriptor; 3] = [
    RingDescriptor::Rational,
    RingDescriptor::Nilpotent { order: 3 },
    RingDescriptor::Nilpotent { order: 2 },
];

fn same<T: PartialEq + std::fmt::Display>(kind: &str, text: &str, parsed: Result<T, impl std::fmt::Display>, v: &T) -> Result<(), String> {
    match parsed {
        Ok(p) if p == *v => Ok(()),
        Ok(p) => Err(format!("{kind} {text:?} parsed as {p}")),
        Err(e) => Err(format!("{kind} {text:?}: {e}")),
    }
}

/// `n` values of each kind from `seed`; returns the number checked.
pub fn check_all(seed: u64, n: usize) -> Result<usize, String> {
    let mut rng = catalog::rng(seed);
    let mut count = 0;
    for i in 0..n {
        let ring = RINGS[i % RINGS.len()];
        let s = catalog::random_invertible_series(&mut rng, ring, i % 2 == 1, 12);
        let text = s.to_string();
        same("series", &text, parse_series(&text, Some(ring), DEFAULT_TERMS), &s)?;

        let nf = catalog::random_normal_form(&mut rng, ring, i % 2 == 1, 12);
        let text = nf.to_string();
        same("normal form", &text, parse_normal_form(&text, ring), &nf)?;

        let degree = rng.random_range(1..=6);
        let mut images: Vec<usize> = (1..=degree).collect();
        for k in (1..degree).rev() {
            images.swap(k, rng.random_range(0..=k));
        }
        let perm = Perm::from_images(&images).map_err(|e| e.to_string())?;
        let text = perm.to_string();
        same("permutation", &text, Perm::parse(&text, degree), &perm)?;
        count += 4;
    }

    for curve in catalog::catalog_curves() {
        let text = curve.to_string();
        same("curve", &text, parse_curve(&text), &curve)?;
        let curve = Arc::new(curve);
        let targets: Vec<_> = match census_classes(&curve) {
            c if c.is_empty() => vec![None],
            c => c.into_iter().map(Some).collect(),
        };
        for target in targets {
            for _ in 0..5 {
                let (_, class) = catalog::random_loop(&mut rng, &curve, target, DEFAULT_TERMS).map_err(|e| e.to_string())?;
                let text = class.to_string();
                same("class", &text, text.parse::<ComponentClass>(), &class)?;
                count += 1;
            }
        }
        count += 1;
    }

    let cubic = Arc::new(catalog::cubic());
    let places = catalog::places_for(&cubic, &[(loopspace::rat(0, 1), loopspace::rat(1, 1)), (loopspace::rat(2, 1), loopspace::rat(3, 1))]);
    for p in &places {
        let text = p.to_string();
        same("place", &text, parse_place(&text), p)?;
        for q in &places {
            if p != q {
                let form = third_kind(&cubic, p, q, DEFAULT_TERMS).map_err(|e| e.to_string())?.form;
                let text = form.to_string();
                same("form", &text, parse_form(&text, &cubic), &form)?;
                count += 1;
            }
        }
        count += 1;
    }
    let gm = Arc::new(CurveModel::gm());
    let text = "1/x dx";
    let form = parse_form(text, &gm).map_err(|e| e.to_string())?;
    same("form", text, parse_form(&form.to_string(), &gm), &form)?;
    Ok(count + 1)
}
