//! The acceptance suite: one exact check per criterion, each returning a
//! pass/fail line. Randomized checks draw from [`crate::catalog`] with fixed
//! seeds, so every run sees the same inputs.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use rand::Rng;

use crate::catalog::{self, CatalogRng};
use crate::ccnf::{cc_factor, cc_order, cc_reconstruct};
use crate::classify::{census_classes, classify_family_with, pi0_census, quotient_class, QuotientClass};
use crate::covers::{commutator, conjugacy_class_count, count_homs_with, surface_relation, symmetric_group, witness_nonextendable};
use crate::curve::{check_on_curve, classify, loop_covering, ComponentClass, CurveKind, CurveModel, Loop, Place, PunctureId};
use crate::forms::{
    family_residue_constancy, genus0_form_dimensions, residue_along, residue_at_place, residue_sum_check, third_kind,
    CurveFunction, MeromorphicForm,
};
use crate::par::{self, Strategy};
use crate::poly::QPoly;
use crate::ring::{Coeff, RingDescriptor};
use crate::series::{LaurentSeries, Precision};
use crate::{rat, Rat, DEFAULT_TERMS};

/// Seed of every randomized criterion.
pub const SEED: u64 = 0x6c6f_6f70;

/// Number of criteria checked by the library; criterion 9 (output
/// stability) belongs to the command-line front end.
pub const LIBRARY_CRITERIA: u8 = 8;

const LOOPS_PER_CLASS: usize = 50;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriterionReport {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "criterion {}: {verdict} {}: {}", self.id, self.title, self.detail)
    }
}

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ok<T>(r: crate::Result<T>, ctx: impl FnOnce() -> String) -> Result<T, String> {
    r.map_err(|e| format!("{}: {e}", ctx()))
}

pub fn title(id: u8) -> &'static str {
    match id {
        1 => "Gm census",
        2 => "normal form roundtrip",
        3 => "order homomorphism and covering equivariance",
        4 => "component census",
        5 => "families",
        6 => "residues",
        7 => "genus-0 form dimensions",
        8 => "surface-group covers",
        9 => "CLI stability",
        _ => "unknown",
    }
}

/// Runs criterion `id` (1 to 8).
pub fn run_criterion(id: u8, strategy: Strategy) -> CriterionReport {
    let outcome = match id {
        1 => gm_census(),
        2 => roundtrip(),
        3 => homomorphism_and_covering(strategy),
        4 => census(strategy),
        5 => families(strategy),
        6 => residues(strategy),
        7 => genus0(),
        8 => covers(strategy),
        _ => Err(format!("no library criterion {id}")),
    };
    let (passed, detail) = match outcome {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    CriterionReport {
        id,
        title: title(id),
        passed,
        detail,
    }
}

/// Criteria 1 to 8, in order; independent criteria may run concurrently.
pub fn run_all(strategy: Strategy) -> Vec<CriterionReport> {
    par::map_range(strategy, LIBRARY_CRITERIA as usize, |i| run_criterion(i as u8 + 1, strategy))
}

fn monomial_loop(curve: &Arc<CurveModel>, k: i64) -> crate::Result<Loop> {
    Loop::new(
        Arc::clone(curve),
        LaurentSeries::monomial(Coeff::one(RingDescriptor::Rational), k),
        None,
    )
}

/// `x = z^k` lands in the component `k ∈ ℤ = π₀`; modulo coverings three
/// classes remain.
fn gm_census() -> Outcome {
    let gm = Arc::new(CurveModel::gm());
    let mut quotients = BTreeSet::new();
    for k in -5i64..=5 {
        let class = ok(classify(&ok(monomial_loop(&gm, k), || format!("z^{k}"))?), || format!("z^{k}"))?;
        let expected = match k {
            0 => ComponentClass::Arc,
            k if k > 0 => ComponentClass::Pole { puncture: PunctureId::Zero, order: k as u64 },
            k => ComponentClass::Pole { puncture: PunctureId::Infinity, order: k.unsigned_abs() },
        };
        ensure(class == expected, || format!("z^{k}: got {class}, expected {expected}"))?;
        // the integer labelling the component
        let label = match class {
            ComponentClass::Pole { puncture: PunctureId::Zero, order } => order as i64,
            ComponentClass::Pole { order, .. } => -(order as i64),
            _ => 0,
        };
        ensure(label == k, || format!("z^{k} labelled {label}"))?;
        quotients.insert(ok(quotient_class(&class), || format!("z^{k}"))?);
    }
    ensure(quotients.len() == 3 && pi0_census(&gm) == 3, || {
        format!("{} quotient classes, census {}", quotients.len(), pi0_census(&gm))
    })?;
    Ok("11 loops z^k in their components, quotient census 3".into())
}

const NILPOTENT: RingDescriptor = RingDescriptor::Nilpotent { order: 3 };

/// Relative precision that must survive a roundtrip for the comparison to
/// see the positive factors.
const MIN_RELATIVE_PREC: i64 = 8;

fn relative_prec(s: &LaurentSeries, order: i64) -> i64 {
    s.prec().finite().map_or(i64::MAX, |p| p - order)
}

fn roundtrip() -> Outcome {
    let mut rng = catalog::rng(SEED);
    let mut polar_inputs = 0;
    let mut min_rel = i64::MAX;
    for i in 0..200 {
        let (ring, polar) = if i % 2 == 0 { (RingDescriptor::Rational, false) } else { (NILPOTENT, true) };
        let alpha = catalog::random_invertible_series(&mut rng, ring, polar, 24);
        let nf = ok(cc_factor(&alpha, DEFAULT_TERMS), || format!("factor {alpha}"))?;
        ok(nf.validate(), || format!("normal form of {alpha}"))?;
        if !nf.neg.is_empty() {
            polar_inputs += 1;
        }
        let back = ok(cc_reconstruct(&nf, alpha.prec()), || format!("reconstruct {nf}"))?;
        ensure(back.agrees_with(&alpha), || format!("{alpha} -> {nf} -> {back}"))?;
        let rel = relative_prec(&back, nf.order);
        ensure(rel >= MIN_RELATIVE_PREC, || format!("{alpha}: only {rel} terms survive"))?;
        min_rel = min_rel.min(rel);
    }
    ensure(polar_inputs >= 100, || format!("only {polar_inputs} inputs with polar factors"))?;

    let mut exact_forms = 0;
    for i in 0..200 {
        let (ring, polar) = if i % 2 == 0 { (RingDescriptor::Rational, false) } else { (NILPOTENT, true) };
        let nf = catalog::random_normal_form(&mut rng, ring, polar, 24);
        let alpha = ok(cc_reconstruct(&nf, Precision::Exact), || format!("reconstruct {nf}"))?;
        let again = ok(cc_factor(&alpha, DEFAULT_TERMS), || format!("factor {alpha}"))?;
        if nf.prec == Precision::Exact {
            exact_forms += 1;
            ensure(again == nf, || format!("{nf} -> {alpha} -> {again}"))?;
        } else {
            ensure(again.agrees_with(&nf), || format!("{nf} -> {alpha} -> {again}"))?;
            let common = nf.prec.min(again.prec).finite().unwrap_or(i64::MAX);
            ensure(common > 6, || format!("{nf}: positive part certified only below {common}"))?;
        }
    }
    Ok(format!(
        "400 roundtrips, {polar_inputs} with polar factors, {exact_forms} exact normal forms, \
         at least {min_rel} certified terms"
    ))
}

/// Loops of every quotient class on every catalog curve, with their classes.
fn catalog_loops(rng: &mut CatalogRng, per_class: usize) -> Result<Vec<(Loop, ComponentClass)>, String> {
    let mut out = Vec::new();
    for curve in catalog::catalog_curves() {
        let curve = Arc::new(curve);
        let targets: Vec<Option<QuotientClass>> = if matches!(curve.kind(), CurveKind::AffineLine) {
            vec![None]
        } else {
            census_classes(&curve).into_iter().map(Some).collect()
        };
        for target in targets {
            for _ in 0..per_class {
                out.push(ok(catalog::random_loop(rng, &curve, target, DEFAULT_TERMS), || {
                    format!("random loop on {curve}")
                })?);
            }
        }
    }
    Ok(out)
}

fn homomorphism_and_covering(strategy: Strategy) -> Outcome {
    let mut rng = catalog::rng(SEED + 3);
    for i in 0..200 {
        let ring = if i % 2 == 0 { RingDescriptor::Rational } else { NILPOTENT };
        let a = catalog::random_invertible_series(&mut rng, ring, true, 24);
        let b = catalog::random_invertible_series(&mut rng, ring, true, 24);
        let ab = ok(a.mul(&b), || format!("({a})*({b})"))?;
        let (oa, ob) = (ok(cc_order(&a), || a.to_string())?, ok(cc_order(&b), || b.to_string())?);
        let oab = ok(cc_order(&ab), || ab.to_string())?;
        ensure(oab == oa + ob, || format!("order {oab} of ({a})*({b}), expected {oa} + {ob}"))?;
    }

    let loops = catalog_loops(&mut rng, LOOPS_PER_CLASS)?;
    let checks = par::map(strategy, &loops, |(lp, class)| -> Result<(), String> {
        for n in 1..=5u32 {
            let cover = ok(loop_covering(lp, n), || format!("cover {n} of {lp}"))?;
            let got = ok(classify(&cover), || format!("cover {n} of {lp}"))?;
            let expected = match class {
                ComponentClass::Pole { puncture, order } => ComponentClass::Pole {
                    puncture: *puncture,
                    order: order * n as u64,
                },
                other => other.clone(),
            };
            ensure(got == expected, || format!("cover {n} of {lp}: {got}, expected {expected}"))?;
        }
        Ok(())
    });
    checks.into_iter().collect::<Result<Vec<()>, String>>()?;
    Ok(format!("200 products; {} catalog loops covered with n = 1..5", loops.len()))
}

fn census(strategy: Strategy) -> Outcome {
    let expected = [
        (CurveModel::affine_line(), 1),
        (CurveModel::gm(), 3),
        (catalog::cubic(), 2),
        (catalog::quartic(), 3),
    ];
    for (curve, n) in &expected {
        let got = pi0_census(curve);
        ensure(got == *n, || format!("census of {curve} is {got}, expected {n}"))?;
    }
    let mut rng = catalog::rng(SEED + 4);
    let loops = catalog_loops(&mut rng, LOOPS_PER_CLASS)?;
    let classes = par::map(strategy, &loops, |(lp, class)| -> Result<ComponentClass, String> {
        ensure(ok(check_on_curve(lp), || lp.to_string())?, || format!("{lp} is off the curve"))?;
        let got = ok(classify(lp), || lp.to_string())?;
        ensure(got == *class, || format!("{lp}: {got}, constructed as {class}"))?;
        Ok(got)
    });
    let mut realized: Vec<(String, BTreeSet<String>)> = Vec::new();
    for ((lp, _), class) in loops.iter().zip(classes) {
        let class = class?;
        let label = match quotient_class(&class) {
            Ok(q) => q.to_string(),
            Err(_) => "A1".into(),
        };
        let name = lp.curve().to_string();
        match realized.iter_mut().find(|(c, _)| *c == name) {
            Some((_, set)) => {
                set.insert(label);
            }
            None => realized.push((name, BTreeSet::from([label]))),
        }
    }
    for curve in catalog::catalog_curves() {
        let name = curve.to_string();
        let found = realized.iter().find(|(c, _)| *c == name).map(|(_, s)| s.len()).unwrap_or(0);
        let census: BTreeSet<String> = census_classes(&curve).iter().map(ToString::to_string).collect();
        let set = &realized.iter().find(|(c, _)| *c == name).expect("sampled").1;
        if !matches!(curve.kind(), CurveKind::AffineLine) {
            ensure(*set == census, || format!("{name}: realized {set:?}, census {census:?}"))?;
        }
        ensure(found == pi0_census(&curve), || format!("{name}: {found} classes realized"))?;
    }
    Ok(format!("censuses 1, 3, 2, 3; {} random loops realize exactly the census classes", loops.len()))
}

fn family_t_values(rng: &mut CatalogRng) -> Vec<Rat> {
    let mut ts = vec![rat(0, 1), rat(1, 1), rat(-1, 1), rat(2, 1), rat(1, 2)];
    ts.extend((0..3).map(|_| catalog::random_rat(rng, 7, 5)));
    ts
}

fn families(strategy: Strategy) -> Outcome {
    let a1 = Arc::new(CurveModel::affine_line());
    let poly = RingDescriptor::PolyParam;
    let x = ok(
        LaurentSeries::new(
            poly,
            [(1, Coeff::one(poly)), (-1, Coeff::Poly(QPoly::var()))],
            Precision::Exact,
        ),
        || "z + t z^-1".into(),
    )?;
    let lp = ok(Loop::new(a1, x, None), || "z + t z^-1".into())?;
    let report = ok(classify_family_with(strategy, &lp, &[rat(0, 1), rat(1, 1), rat(2, 1)]), || lp.to_string())?;
    let poles: Vec<bool> = report
        .fibers
        .iter()
        .map(|(_, c)| matches!(c, Ok(ComponentClass::A1Connected { has_pole: true })))
        .collect();
    ensure(poles == [false, true, true], || format!("z + t z^-1 fibres have poles {poles:?}"))?;
    ensure(report.jumps() == [rat(0, 1)], || format!("jumps {:?}", report.jumps()))?;

    let mut rng = catalog::rng(SEED + 5);
    let mut cases = Vec::new();
    for curve in [CurveModel::gm(), catalog::cubic()] {
        let curve = Arc::new(curve);
        for _ in 0..10 {
            let fam = ok(catalog::random_family(&mut rng, &curve, DEFAULT_TERMS), || format!("family on {curve}"))?;
            cases.push((fam, family_t_values(&mut rng)));
        }
    }
    let checks = par::map(strategy, &cases, |(fam, ts)| -> Result<(), String> {
        let report = ok(classify_family_with(Strategy::Sequential, fam, ts), || fam.to_string())?;
        let generic = report.generic.clone().map_err(|e| format!("{fam}: generic class: {e}"))?;
        for (t, c) in &report.fibers {
            let c = c.clone().map_err(|e| format!("{fam} at t={t}: {e}"))?;
            ensure(c == generic, || format!("{fam} jumps at t={t}: {c} vs generic {generic}"))?;
        }
        for form in family_forms(fam.curve()) {
            let constant = ok(family_residue_constancy(&form, fam, DEFAULT_TERMS), || format!("{form} along {fam}"))?;
            ensure(constant, || format!("residue of {form} along {fam} depends on t"))?;
            // the generic residue specializes to the fibre residues
            let generic = ok(residue_along(&form, fam, DEFAULT_TERMS), || format!("{form} along {fam}"))?;
            for t in ts {
                let fiber = ok(fam.specialize(t), || format!("{fam} at {t}"))?;
                let r = ok(residue_along(&form, &fiber, DEFAULT_TERMS), || format!("{form} at t={t}"))?;
                let g = ok(generic.specialize(t), || format!("{generic} at {t}"))?;
                ensure(r == g, || format!("{form} along {fam} at t={t}: {r} vs {g}"))?;
            }
        }
        Ok(())
    });
    checks.into_iter().collect::<Result<Vec<()>, String>>()?;
    Ok(format!("z + t z^-1 jumps at t = 0 only; {} random families constant in class and residue", cases.len()))
}

/// `dx/x`, plus `dx/y` and `x dx/y` on hyperelliptic curves.
fn family_forms(curve: &Arc<CurveModel>) -> Vec<MeromorphicForm> {
    let mut forms = vec![MeromorphicForm::dlog_x(Arc::clone(curve))];
    forms.extend(holomorphic_forms(curve));
    forms
}

/// `x^i dx/y = x^i y/h dx` for `i < g`.
fn holomorphic_forms(curve: &Arc<CurveModel>) -> Vec<MeromorphicForm> {
    let Some(h) = curve.h() else {
        return Vec::new();
    };
    (0..curve.genus() as usize)
        .map(|i| {
            MeromorphicForm::new(
                Arc::clone(curve),
                CurveFunction::new(QPoly::zero(), QPoly::monomial(Rat::one(), i)),
                CurveFunction::from_x(h.clone()),
            )
            .expect("valid form")
        })
        .collect()
}

fn residues(strategy: Strategy) -> Outcome {
    let mut rng = catalog::rng(SEED + 6);
    let gm = Arc::new(CurveModel::gm());
    let dlog = MeromorphicForm::dlog_x(Arc::clone(&gm));
    for n in -5i64..=5 {
        let lp = ok(monomial_loop(&gm, n), || format!("z^{n}"))?;
        let r = ok(residue_along(&dlog, &lp, DEFAULT_TERMS), || format!("dx/x along z^{n}"))?;
        ensure(r == Coeff::from_int(RingDescriptor::Rational, n), || format!("dx/x along z^{n}: {r}"))?;
    }
    // along every catalog loop, res(dx/x) is the valuation of x
    let loops = catalog_loops(&mut rng, 10)?;
    for (lp, _) in &loops {
        if lp.x().is_exact_zero() || lp.x().min_exponent().is_none() {
            continue;
        }
        let form = MeromorphicForm::dlog_x(Arc::clone(lp.curve()));
        let r = ok(residue_along(&form, lp, DEFAULT_TERMS), || format!("dx/x along {lp}"))?;
        let v = ok(lp.x().valuation(), || lp.to_string())?;
        ensure(r == Coeff::from_int(RingDescriptor::Rational, v), || format!("dx/x along {lp}: {r}, valuation {v}"))?;
    }

    let mut pairs = Vec::new();
    let p1 = Arc::new(CurveModel::affine_line());
    for _ in 0..20 {
        let pick = |rng: &mut CatalogRng| {
            if rng.random_bool(0.2) {
                Place::Puncture(PunctureId::Infinity)
            } else {
                Place::affine(catalog::random_rat(rng, 6, 3), None)
            }
        };
        let (p, q) = loop {
            let (p, q) = (pick(&mut rng), pick(&mut rng));
            if p != q {
                break (p, q);
            }
        };
        pairs.push((Arc::clone(&p1), p, q));
    }
    let cubic = Arc::new(catalog::cubic());
    let cubic_places = catalog::places_for(&cubic, &[(rat(0, 1), rat(1, 1)), (rat(2, 1), rat(3, 1))]);
    for p in &cubic_places {
        for q in &cubic_places {
            if p != q {
                pairs.push((Arc::clone(&cubic), p.clone(), q.clone()));
            }
        }
    }
    for degrees in [[3usize, 5], [4, 6]] {
        for i in 0..20 {
            let (curve, points) = catalog::random_curve_through_points(&mut rng, degrees[i % 2]);
            let curve = Arc::new(curve);
            let places = catalog::places_for(&curve, &points);
            let a = rng.random_range(0..places.len());
            let b = (a + 1 + rng.random_range(0..places.len() - 1)) % places.len();
            pairs.push((curve, places[a].clone(), places[b].clone()));
        }
    }
    let checks = par::map(strategy, &pairs, |(curve, p, q)| -> Result<(), String> {
        let ctx = || format!("third kind on {curve} for {p}, {q}");
        let tk = ok(third_kind(curve, p, q, DEFAULT_TERMS), ctx)?;
        let rp = ok(residue_at_place(&tk.form, p, DEFAULT_TERMS), ctx)?;
        let rq = ok(residue_at_place(&tk.form, q, DEFAULT_TERMS), ctx)?;
        ensure(rp.is_one() && rq == -Rat::one(), || format!("{}: residues {rp}, {rq}", ctx()))?;
        let mut poles: Vec<Place> = tk.residues.iter().map(|(place, _)| place.clone()).collect();
        if let Some(h) = curve.h() {
            // rational Weierstrass points
            for (x, y) in catalog::rational_points(h, 6) {
                if y.is_zero() {
                    poles.push(Place::affine(x, Some(y)));
                }
            }
        }
        let total = ok(residue_sum_check(&tk.form, &poles, DEFAULT_TERMS), ctx)?;
        ensure(total.is_zero(), || format!("{}: total residue {total}", ctx()))?;
        Ok(())
    });
    checks.into_iter().collect::<Result<Vec<()>, String>>()?;

    let holo = holomorphic_forms(&cubic);
    let cubic_loops: Vec<&Loop> = loops.iter().map(|(lp, _)| lp).filter(|lp| lp.curve() == &cubic).collect();
    let mut along = 0;
    for form in &holo {
        for lp in &cubic_loops {
            let r = ok(residue_along(form, lp, DEFAULT_TERMS), || format!("{form} along {lp}"))?;
            ensure(r.is_zero(), || format!("{form} along {lp}: residue {r}"))?;
            along += 1;
        }
    }
    ensure(along > 0, || "no loops on the cubic".into())?;
    Ok(format!(
        "dx/x residues equal orders; {} third-kind pairs verified; {along} holomorphic residues vanish",
        pairs.len()
    ))
}

fn genus0() -> Outcome {
    let points = [(rat(0, 1), rat(1, 1)), (rat(-2, 1), rat(1, 3)), (rat(5, 1), rat(-7, 2))];
    for (a, b) in &points {
        let (with_poles, holomorphic) = ok(genus0_form_dimensions(a, b, 8, DEFAULT_TERMS), || format!("points {a}, {b}"))?;
        ensure(with_poles == 1 && holomorphic == 0, || {
            format!("points {a}, {b}: dimensions {with_poles} and {holomorphic}")
        })?;
    }
    Ok("dim H0(Ω(p+q)) = 1, dim H0(Ω) = 0 on three point pairs; quotient dimension 1".into())
}

fn covers(strategy: Strategy) -> Outcome {
    let counts = ok(count_homs_with(strategy, 1, 3), || "g=1, S3".into())?;
    ensure(counts.free == 36 && counts.surface == 18, || {
        format!("free {}, surface {}", counts.free, counts.surface)
    })?;
    // commuting pairs, by brute force and by |G| · #classes
    let group = symmetric_group(3);
    let commuting = group
        .iter()
        .flat_map(|a| group.iter().map(move |b| (a, b)))
        .filter(|(a, b)| commutator(a, b).is_ok_and(|c| c.is_identity()))
        .count();
    let by_classes = group.len() * conjugacy_class_count(3);
    ensure(commuting == 18 && by_classes == 18, || format!("commuting pairs {commuting}, |G|·classes {by_classes}"))?;
    ensure(counts.witnesses_nonsurjectivity(), || "surface count equals free count".into())?;
    let witness = ok(witness_nonextendable(1), || "witness".into())?;
    let value = surface_relation(&witness);
    ensure(!value.is_identity(), || format!("{witness} satisfies the relation"))?;
    Ok(format!("free 36, surface 18 = 6·3; {witness} has relation value {value}"))
}
