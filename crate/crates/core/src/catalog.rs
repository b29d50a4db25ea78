//! Catalog curves and seeded random generators for loops, families, series,
//! normal forms, and curves through prescribed points.
//!
//! Every generator takes an explicit RNG; the same seed reproduces the same
//! objects on every platform.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ccnf::CCNormalForm;
use crate::classify::QuotientClass;
use crate::curve::{lift_x_to_loop, ComponentClass, CurveKind, CurveModel, Loop, Place, PunctureId};
use crate::poly::QPoly;
use crate::ring::{rat_sqrt, Coeff, RingDescriptor};
use crate::series::{Branch, LaurentSeries, Precision};
use crate::{rat, Rat, Result};

pub type CatalogRng = ChaCha8Rng;

pub fn rng(seed: u64) -> CatalogRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `y² = x³ + 1`: genus 1, one puncture.
pub fn cubic() -> CurveModel {
    CurveModel::hyperelliptic(QPoly::from_ints(&[1, 0, 0, 1])).expect("valid curve")
}

/// `y² = x⁴ − 1`: genus 1, two punctures.
pub fn quartic() -> CurveModel {
    CurveModel::hyperelliptic(QPoly::from_ints(&[-1, 0, 0, 0, 1])).expect("valid curve")
}

/// `y² = x⁵ − x`: genus 2, one puncture.
pub fn quintic() -> CurveModel {
    CurveModel::hyperelliptic(QPoly::from_ints(&[0, -1, 0, 0, 0, 1])).expect("valid curve")
}

pub fn catalog_curves() -> Vec<CurveModel> {
    vec![CurveModel::affine_line(), CurveModel::gm(), cubic(), quartic(), quintic()]
}

/// A rational with numerator in `[-num, num]` and denominator in `[1, den]`.
pub fn random_rat(rng: &mut CatalogRng, num: i64, den: i64) -> Rat {
    rat(rng.random_range(-num..=num), rng.random_range(1..=den))
}

pub fn random_nonzero_rat(rng: &mut CatalogRng, num: i64, den: i64) -> Rat {
    loop {
        let q = random_rat(rng, num, den);
        if !q.is_zero() {
            return q;
        }
    }
}

/// A random element of ℚ[t] of degree at most `deg`.
pub fn random_qpoly(rng: &mut CatalogRng, deg: usize) -> QPoly {
    QPoly::from_coeffs((0..=deg).map(|_| random_rat(rng, 4, 3)).collect())
}

/// A coefficient; `unit` forces a unit, `nilpotent` forces a nonzero
/// nilpotent (over ℚ[ε]/(ε^k) only).
pub fn random_coeff(rng: &mut CatalogRng, ring: RingDescriptor, unit: bool, nilpotent: bool) -> Coeff {
    match ring {
        RingDescriptor::Rational => Coeff::Rational(if unit {
            random_nonzero_rat(rng, 5, 4)
        } else {
            random_rat(rng, 5, 4)
        }),
        RingDescriptor::PolyParam => {
            if unit {
                Coeff::Poly(QPoly::constant(random_nonzero_rat(rng, 5, 4)))
            } else {
                Coeff::Poly(random_qpoly(rng, 2))
            }
        }
        RingDescriptor::Nilpotent { order } => loop {
            let mut v: Vec<Rat> = (0..order).map(|_| random_rat(rng, 4, 3)).collect();
            if nilpotent {
                v[0] = Rat::zero();
            } else if unit && v[0].is_zero() {
                v[0] = random_nonzero_rat(rng, 4, 3);
            }
            let c = Coeff::from_rat(ring, Rat::zero());
            let c = v.iter().enumerate().fold(c, |acc, (i, q)| {
                &acc + &Coeff::eps(ring).expect("nilpotent ring").pow(i as u32).scale(q)
            });
            if !nilpotent || !c.is_zero() {
                return c;
            }
        },
    }
}

/// An invertible series of order in `[-4, 4]` with `prec_rel` known
/// coefficients past the order (or exact). With `polar` set over a
/// nilpotent ring, at least one nilpotent coefficient sits below the order.
pub fn random_invertible_series(
    rng: &mut CatalogRng,
    ring: RingDescriptor,
    polar: bool,
    prec_rel: i64,
) -> LaurentSeries {
    let order = rng.random_range(-4..=4);
    let exact = rng.random_bool(0.3);
    let len = if exact { rng.random_range(1..=5) } else { prec_rel };
    let mut terms = BTreeMap::new();
    terms.insert(order, random_coeff(rng, ring, true, false));
    for e in order + 1..order + len {
        if rng.random_bool(0.6) {
            terms.insert(e, random_coeff(rng, ring, false, false));
        }
    }
    let nilpotent_ring = matches!(ring, RingDescriptor::Nilpotent { .. });
    if polar && nilpotent_ring {
        let depth = rng.random_range(1..=2);
        terms.insert(order - depth, random_coeff(rng, ring, false, true));
        if depth == 2 && rng.random_bool(0.5) {
            terms.insert(order - 1, random_coeff(rng, ring, false, true));
        }
    }
    let prec = if exact {
        Precision::Exact
    } else {
        Precision::Finite(order + prec_rel)
    };
    LaurentSeries::new(ring, terms, prec).expect("one ring")
}

/// A valid normal form; with `polar` over a nilpotent ring the negative part
/// is nonempty.
pub fn random_normal_form(rng: &mut CatalogRng, ring: RingDescriptor, polar: bool, prec: i64) -> CCNormalForm {
    let mut neg = BTreeMap::new();
    if polar && matches!(ring, RingDescriptor::Nilpotent { .. }) {
        for i in 1..=2 {
            if i == 1 || rng.random_bool(0.5) {
                neg.insert(i, random_coeff(rng, ring, false, true));
            }
        }
    }
    let mut pos = BTreeMap::new();
    for j in 1..=6 {
        if rng.random_bool(0.5) {
            let c = random_coeff(rng, ring, false, false);
            if !c.is_zero() {
                pos.insert(j, c);
            }
        }
    }
    CCNormalForm {
        unit: random_coeff(rng, ring, true, false),
        order: rng.random_range(-4..=4),
        neg,
        pos,
        prec: if rng.random_bool(0.3) {
            Precision::Exact
        } else {
            Precision::Finite(prec)
        },
    }
}

/// `1 + Σ_{1≤i≤len} cᵢ zⁱ` with random rational `cᵢ`, exact.
fn random_unit_tail(rng: &mut CatalogRng, ring: RingDescriptor, len: i64) -> LaurentSeries {
    let mut terms = vec![(0, Coeff::one(ring))];
    for i in 1..=len {
        if rng.random_bool(0.5) {
            terms.push((i, random_coeff(rng, ring, false, false)));
        }
    }
    LaurentSeries::new(ring, terms, Precision::Exact).expect("one ring")
}

fn monomial(c: Rat, e: i64) -> LaurentSeries {
    LaurentSeries::monomial(Coeff::Rational(c), e)
}

/// Affine rational points with `|x|` of height at most `bound`, and both
/// signs of `y`.
pub fn rational_points(h: &QPoly, bound: i64) -> Vec<(Rat, Rat)> {
    let mut out = Vec::new();
    for den in 1..=bound {
        for num in -bound..=bound {
            let x = rat(num, den);
            if x.denom() != &den.into() {
                continue;
            }
            if let Some(y) = rat_sqrt(&h.eval(&x)) {
                out.push((x.clone(), y.clone()));
                if !y.is_zero() {
                    out.push((x, -y));
                }
            }
        }
    }
    out
}

fn random_branch(rng: &mut CatalogRng) -> Branch {
    if rng.random_bool(0.5) {
        Branch::Plus
    } else {
        Branch::Minus
    }
}

/// An arc through the affine point `(a, b)` of a hyperelliptic curve.
fn arc_through(rng: &mut CatalogRng, curve: &Arc<CurveModel>, a: &Rat, b: &Rat, terms: u32) -> Result<Loop> {
    let q = RingDescriptor::Rational;
    let h = curve.h().expect("hyperelliptic");
    let base = LaurentSeries::constant(Coeff::Rational(a.clone()));
    if b.is_zero() {
        // h(a + c z^{2m}(…)) = h′(a) c z^{2m}(…): choose c = r²/h′(a)
        let r = random_nonzero_rat(rng, 3, 2);
        let c = &r * &r / h.derivative().eval(a);
        let m = rng.random_range(1..=2);
        let x = base.add(&monomial(c, 2 * m).mul(&random_unit_tail(rng, q, 3))?)?;
        lift_x_to_loop(curve, x, random_branch(rng), terms)
    } else {
        let c = random_nonzero_rat(rng, 3, 2);
        let k = rng.random_range(1..=3);
        let x = base.add(&monomial(c, k).mul(&random_unit_tail(rng, q, 3))?)?;
        let branch = if *b > Rat::zero() { Branch::Plus } else { Branch::Minus };
        lift_x_to_loop(curve, x, branch, terms)
    }
}

/// A random loop in the given quotient class, with its exact class.
/// `target = None` on the affine line.
pub fn random_loop(
    rng: &mut CatalogRng,
    curve: &Arc<CurveModel>,
    target: Option<QuotientClass>,
    terms: u32,
) -> Result<(Loop, ComponentClass)> {
    let q = RingDescriptor::Rational;
    let n: i64 = rng.random_range(1..=4);
    match (curve.kind(), target) {
        (CurveKind::AffineLine, _) => {
            let lo = rng.random_range(-3..=0);
            let mut terms_map = vec![];
            for e in lo..=3 {
                if e == lo || rng.random_bool(0.5) {
                    terms_map.push((e, random_coeff(rng, q, e == lo, false)));
                }
            }
            let x = LaurentSeries::new(q, terms_map, Precision::Exact)?;
            let class = ComponentClass::A1Connected {
                has_pole: x.min_exponent().is_some_and(|e| e < 0),
            };
            Ok((Loop::new(Arc::clone(curve), x, None)?, class))
        }
        (CurveKind::Gm, Some(target)) => {
            let (e, class) = match target {
                QuotientClass::ArcClass => (0, ComponentClass::Arc),
                QuotientClass::PunctureClass(p) => {
                    let e = if p == PunctureId::Zero { n } else { -n };
                    (e, ComponentClass::Pole { puncture: p, order: n as u64 })
                }
            };
            let c = random_nonzero_rat(rng, 5, 3);
            let tail = random_unit_tail(rng, q, 4);
            let tail = if rng.random_bool(0.5) {
                tail.truncate(Precision::Finite(terms as i64))
            } else {
                tail
            };
            let x = monomial(c, e).mul(&tail)?;
            Ok((Loop::new(Arc::clone(curve), x, None)?, class))
        }
        (CurveKind::Hyperelliptic(h), Some(target)) => {
            let deg = h.degree().expect("validated") as i64;
            match target {
                QuotientClass::ArcClass => {
                    let points = rational_points(h, 3);
                    let (a, b) = points[rng.random_range(0..points.len())].clone();
                    Ok((arc_through(rng, curve, &a, &b, terms)?, ComponentClass::Arc))
                }
                QuotientClass::PunctureClass(p) => {
                    let tail = random_unit_tail(rng, q, 3);
                    let (x, branch) = if deg % 2 == 1 {
                        let r = random_nonzero_rat(rng, 3, 2);
                        (monomial(&r * &r, -2 * n).mul(&tail)?, random_branch(rng))
                    } else {
                        // y ~ ±|c|^d z^{−nd} must match c^d z^{−nd} on inf+
                        let c = random_nonzero_rat(rng, 3, 2);
                        let positive = c > Rat::zero() || (deg / 2) % 2 == 0;
                        let branch = if positive == (p == PunctureId::InfinityPlus) {
                            Branch::Plus
                        } else {
                            Branch::Minus
                        };
                        (monomial(c, -n).mul(&tail)?, branch)
                    };
                    let order = n as u64;
                    let lp = lift_x_to_loop(curve, x, branch, terms)?;
                    Ok((lp, ComponentClass::Pole { puncture: p, order }))
                }
            }
        }
        (_, None) => Err(crate::Error::InvalidArgument(format!("{curve} needs a target class"))),
    }
}

fn poly_coeff(p: QPoly) -> Coeff {
    Coeff::Poly(p)
}

/// A one-parameter family over ℚ[t] on `Gm` or a hyperelliptic curve, valid
/// for every `t`: the leading coefficients are constants, so every fibre has
/// the same valuations.
pub fn random_family(rng: &mut CatalogRng, curve: &Arc<CurveModel>, terms: u32) -> Result<Loop> {
    let r = RingDescriptor::PolyParam;
    let tail = |rng: &mut CatalogRng, first_constant: bool| -> LaurentSeries {
        let mut t = vec![(0, Coeff::one(r))];
        for i in 1..=4 {
            let c = if i == 1 && first_constant {
                poly_coeff(QPoly::constant(random_nonzero_rat(rng, 3, 2)))
            } else {
                poly_coeff(random_qpoly(rng, 2))
            };
            t.push((i, c));
        }
        LaurentSeries::new(r, t, Precision::Exact).expect("one ring")
    };
    let constant = |q: Rat, e: i64| LaurentSeries::monomial(poly_coeff(QPoly::constant(q)), e);
    match curve.kind() {
        CurveKind::Gm => {
            let e = rng.random_range(-3..=3);
            let x = constant(random_nonzero_rat(rng, 4, 3), e).mul(&tail(rng, false))?;
            Loop::new(Arc::clone(curve), x, None)
        }
        CurveKind::Hyperelliptic(h) => {
            let deg = h.degree().expect("validated") as i64;
            let points: Vec<_> = rational_points(h, 3)
                .into_iter()
                .filter(|(_, b)| !b.is_zero())
                .collect();
            if deg % 2 == 1 && (points.is_empty() || rng.random_bool(0.5)) {
                let n = rng.random_range(1..=2);
                let s = random_nonzero_rat(rng, 3, 2);
                let x = constant(&s * &s, -2 * n).mul(&tail(rng, false))?;
                lift_x_to_loop(curve, x, random_branch(rng), terms)
            } else if points.is_empty() {
                let n = rng.random_range(1..=2);
                let x = constant(random_nonzero_rat(rng, 3, 2), -n).mul(&tail(rng, false))?;
                lift_x_to_loop(curve, x, random_branch(rng), terms)
            } else {
                // a + c z + p₂(t) z² + …, with c constant so that rational
                // functions vanishing at a stay invertible along the family
                let (a, b) = points[rng.random_range(0..points.len())].clone();
                let x = constant(a, 0).add(&constant(Rat::one(), 1).mul(&tail(rng, true))?)?;
                let branch = if b > Rat::zero() { Branch::Plus } else { Branch::Minus };
                lift_x_to_loop(curve, x, branch, terms)
            }
        }
        CurveKind::AffineLine => {
            let x = LaurentSeries::new(
                r,
                (-2..=2).map(|e| (e, poly_coeff(random_qpoly(rng, 2)))),
                Precision::Exact,
            )?;
            Loop::new(Arc::clone(curve), x, None)
        }
    }
}

/// A monic squarefree `h` of degree `deg` with `h(a_i) = b_i²` at two
/// random rational points with `b_i ≠ 0`, and those points.
pub fn random_curve_through_points(rng: &mut CatalogRng, deg: usize) -> (CurveModel, [(Rat, Rat); 2]) {
    loop {
        let a1 = random_rat(rng, 4, 2);
        let a2 = random_rat(rng, 4, 2);
        if a1 == a2 {
            continue;
        }
        let b1 = random_nonzero_rat(rng, 4, 2);
        let b2 = random_nonzero_rat(rng, 4, 2);
        let mut coeffs: Vec<Rat> = vec![Rat::zero(); deg + 1];
        coeffs[deg] = Rat::one();
        for c in coeffs.iter_mut().take(deg).skip(2) {
            *c = random_rat(rng, 3, 1);
        }
        // solve c₀ + c₁ aᵢ = bᵢ² − rest(aᵢ)
        let rest = QPoly::from_coeffs(coeffs.clone());
        let r1 = &b1 * &b1 - rest.eval(&a1);
        let r2 = &b2 * &b2 - rest.eval(&a2);
        let c1 = (&r1 - &r2) / (&a1 - &a2);
        let c0 = &r1 - &c1 * &a1;
        coeffs[0] = c0;
        coeffs[1] = c1;
        if let Ok(curve) = CurveModel::hyperelliptic(QPoly::from_coeffs(coeffs)) {
            return (curve, [(a1, b1), (a2, b2)]);
        }
    }
}

/// Candidate places for third-kind pairs: the given points, their
/// conjugates, and the punctures.
pub fn places_for(curve: &CurveModel, points: &[(Rat, Rat)]) -> Vec<Place> {
    let mut out: Vec<Place> = Vec::new();
    for (a, b) in points {
        for y in [b.clone(), -b.clone()] {
            let p = Place::affine(a.clone(), Some(y));
            if !out.contains(&p) {
                out.push(p);
            }
        }
    }
    out.extend(curve.punctures().into_iter().map(Place::Puncture));
    out
}
