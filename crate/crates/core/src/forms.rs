//! Meromorphic differentials on catalog curves and their residues.
//!
//! A form is stored as `(A(x) + B(x)·y) / D(x) · dx` with `D` monic and
//! `gcd(A, B, D) = 1`; any quotient of polynomials in `x, y` reduces to this
//! shape by `y² = h(x)` and multiplication by the conjugate of the
//! denominator. Residues are computed by pulling back along loops: the puncture
//! charts at infinity, and order-1 local loops at affine points.
//!
//! Third-kind forms are assembled from elementary forms `τ_R` with residue
//! `+1` at `R`, whose compensating residue sits at infinity:
//!
//! * on ℙ¹: `τ_a = dx/(x − a)`, `τ_∞ = 0`;
//! * on `y² = h(x)`, for `P = (a, b)` with `b ≠ 0`:
//!   `τ_P = (y + b)/(x − a) · dx/(2y)`, with residue `−1` at `∞` (odd degree)
//!   or `−½` at each of `∞±` (even degree), and no pole at `(a, −b)`;
//! * for `deg h = 2d`: `τ_{∞±} = ∓½ x^{d−1} dx/y`, with residues `±½` at `∞+`
//!   and `∓½` at `∞−`; for odd degree `τ_∞ = 0`.
//!
//! `τ_p − τ_q` then has residues `+1` at `p`, `−1` at `q`, and no other pole.

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::curve::{eval_poly_series, lift_x_to_loop, CurveKind, CurveModel, Loop, Place, PunctureId};
use crate::linalg;
use crate::poly::QPoly;
use crate::ring::{Coeff, RingDescriptor};
use crate::series::{Branch, LaurentSeries};
use crate::{Error, Rat, Result};

/// `a(x) + b(x)·y`; `b = 0` on curves without a `y` coordinate.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct CurveFunction {
    pub a: QPoly,
    pub b: QPoly,
}

impl CurveFunction {
    pub fn new(a: QPoly, b: QPoly) -> Self {
        CurveFunction { a, b }
    }

    pub fn from_x(a: QPoly) -> Self {
        CurveFunction { a, b: QPoly::zero() }
    }

    pub fn constant(c: Rat) -> Self {
        Self::from_x(QPoly::constant(c))
    }

    pub fn x() -> Self {
        Self::from_x(QPoly::var())
    }

    pub fn y() -> Self {
        CurveFunction {
            a: QPoly::zero(),
            b: QPoly::one(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        CurveFunction {
            a: self.a.add(&other.a),
            b: self.b.add(&other.b),
        }
    }

    pub fn neg(&self) -> Self {
        CurveFunction {
            a: self.a.neg(),
            b: self.b.neg(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Product reduced by `y² = h`.
    pub fn mul(&self, other: &Self, h: &QPoly) -> Self {
        CurveFunction {
            a: self.a.mul(&other.a).add(&self.b.mul(&other.b).mul(h)),
            b: self.a.mul(&other.b).add(&self.b.mul(&other.a)),
        }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        CurveFunction {
            a: self.a.scale(c),
            b: self.b.scale(c),
        }
    }

    fn scale_poly(&self, p: &QPoly) -> Self {
        CurveFunction {
            a: self.a.mul(p),
            b: self.b.mul(p),
        }
    }

    pub fn conjugate(&self) -> Self {
        CurveFunction {
            a: self.a.clone(),
            b: self.b.neg(),
        }
    }

    /// `a² − b²h`, the product with the conjugate.
    pub fn norm(&self, h: &QPoly) -> QPoly {
        self.a.mul(&self.a).sub(&self.b.mul(&self.b).mul(h))
    }

    /// Evaluation along a loop.
    pub fn eval_along(&self, lp: &Loop) -> Result<LaurentSeries> {
        let mut out = eval_poly_series(&self.a, lp.x());
        if !self.b.is_zero() {
            let y = lp
                .y()
                .ok_or_else(|| Error::InvalidArgument("form uses y on a curve without y".into()))?;
            out = out.add(&eval_poly_series(&self.b, lp.x()).mul(y)?)?;
        }
        Ok(out)
    }

    fn monomials(&self) -> Vec<(Rat, usize, bool)> {
        let mut out: Vec<(Rat, usize, bool)> = Vec::new();
        for (poly, with_y) in [(&self.a, false), (&self.b, true)] {
            for (i, c) in poly.coeffs().iter().enumerate() {
                if !c.is_zero() {
                    out.push((c.clone(), i, with_y));
                }
            }
        }
        out
    }
}

impl fmt::Display for CurveFunction {
    /// Ascending powers of `x`, terms without `y` first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let monos = self.monomials();
        if monos.is_empty() {
            return f.write_str("0");
        }
        for (n, (c, i, with_y)) in monos.iter().enumerate() {
            let mut vars = Vec::new();
            match i {
                0 => {}
                1 => vars.push("x".to_string()),
                i => vars.push(format!("x^{i}")),
            }
            if *with_y {
                vars.push("y".to_string());
            }
            let mag = c.abs();
            let body = match (vars.is_empty(), mag.is_one()) {
                (true, _) => mag.to_string(),
                (false, true) => vars.join("*"),
                (false, false) => format!("{mag}*{}", vars.join("*")),
            };
            let sign = match (n, c.is_negative()) {
                (0, true) => "-",
                (0, false) => "",
                (_, true) => " - ",
                (_, false) => " + ",
            };
            write!(f, "{sign}{body}")?;
        }
        Ok(())
    }
}

/// `(A + B·y)/D · dx` on a catalog curve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeromorphicForm {
    curve: Arc<CurveModel>,
    num: CurveFunction,
    den: QPoly,
}

fn curve_h(curve: &CurveModel) -> QPoly {
    curve.h().cloned().unwrap_or_default()
}

impl MeromorphicForm {
    /// `num/den · dx`, reduced to canonical shape.
    pub fn new(curve: Arc<CurveModel>, num: CurveFunction, den: CurveFunction) -> Result<Self> {
        if !curve.is_hyperelliptic() && !(num.b.is_zero() && den.b.is_zero()) {
            return Err(Error::InvalidArgument(format!("{curve} has no y coordinate")));
        }
        let h = curve_h(&curve);
        let num = num.mul(&den.conjugate(), &h);
        let den = den.norm(&h);
        if den.is_zero() {
            return Err(Error::InvalidArgument(
                "denominator vanishes identically on the curve".into(),
            ));
        }
        Ok(Self::normalized(curve, num, den))
    }

    fn normalized(curve: Arc<CurveModel>, num: CurveFunction, den: QPoly) -> Self {
        if num.is_zero() {
            return MeromorphicForm {
                curve,
                num,
                den: QPoly::one(),
            };
        }
        let g = num.a.gcd(&num.b).gcd(&den);
        let (den, _) = den.div_rem(&g);
        let num = CurveFunction::new(num.a.div_rem(&g).0, num.b.div_rem(&g).0);
        let lc = den.leading().recip();
        MeromorphicForm {
            curve,
            num: num.scale(&lc),
            den: den.scale(&lc),
        }
    }

    pub fn zero(curve: Arc<CurveModel>) -> Self {
        Self::normalized(curve, CurveFunction::default(), QPoly::one())
    }

    /// `f(x, y) dx` with polynomial `f`.
    pub fn polynomial(curve: Arc<CurveModel>, f: CurveFunction) -> Result<Self> {
        Self::new(curve, f, CurveFunction::constant(Rat::one()))
    }

    /// `dx/x`.
    pub fn dlog_x(curve: Arc<CurveModel>) -> Self {
        Self::normalized(curve, CurveFunction::constant(Rat::one()), QPoly::var())
    }

    pub fn curve(&self) -> &Arc<CurveModel> {
        &self.curve
    }

    pub fn numerator(&self) -> &CurveFunction {
        &self.num
    }

    pub fn denominator(&self) -> &QPoly {
        &self.den
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.curve != other.curve {
            return Err(Error::InvalidArgument("forms live on different curves".into()));
        }
        let num = self
            .num
            .scale_poly(&other.den)
            .add(&other.num.scale_poly(&self.den));
        Ok(Self::normalized(
            Arc::clone(&self.curve),
            num,
            self.den.mul(&other.den),
        ))
    }

    pub fn scale(&self, c: &Rat) -> Self {
        Self::normalized(Arc::clone(&self.curve), self.num.scale(c), self.den.clone())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-Rat::one()))
    }
}

impl fmt::Display for MeromorphicForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = self.num.to_string();
        let atomic = self.num.monomials().len() == 1;
        let num = if atomic || self.den.is_one() {
            num
        } else {
            format!("({num})")
        };
        if self.den.is_one() {
            return write!(f, "{num} dx");
        }
        let den = self.den.display_in("x");
        if self.den.coeffs().iter().filter(|c| !c.is_zero()).count() == 1 {
            write!(f, "{num}/{den} dx")
        } else {
            write!(f, "{num}/({den}) dx")
        }
    }
}

/// Coefficient series of `γ*ω = (A + B·y)/D (γ) · x′(z) dz`.
pub fn pullback(form: &MeromorphicForm, lp: &Loop, terms: u32) -> Result<LaurentSeries> {
    if **lp.curve() != *form.curve {
        return Err(Error::InvalidArgument(format!(
            "loop on {} but form on {}",
            lp.curve(),
            form.curve
        )));
    }
    let num = form.num.eval_along(lp)?;
    let den = eval_poly_series(&form.den, lp.x());
    if den.num_terms() == 0 {
        return Err(Error::FormSingularAlongLoop);
    }
    let den_inv = crate::ccnf::invert_unit_series(&den, terms)?;
    num.mul(&den_inv)?.mul(&lp.x().derivative())
}

/// Residue of the pullback along a loop.
pub fn residue_along(form: &MeromorphicForm, lp: &Loop, terms: u32) -> Result<Coeff> {
    pullback(form, lp, terms)?.residue()
}

/// Rejects affine places off the curve and normalizes `x = 0` on `Gm` to
/// the puncture `0`.
fn canonical_place(curve: &CurveModel, place: &Place) -> Result<Place> {
    match (curve.kind(), place) {
        (_, Place::Puncture(p)) if curve.has_puncture(*p) => Ok(place.clone()),
        (_, Place::Puncture(p)) => Err(Error::InvalidArgument(format!("{curve} has no puncture {p}"))),
        (CurveKind::Hyperelliptic(h), Place::Affine { x, y: Some(y) }) => {
            if y * y != h.eval(x) {
                return Err(Error::NotOnCurve(format!("({x},{y})")));
            }
            Ok(place.clone())
        }
        (CurveKind::Hyperelliptic(_), Place::Affine { x, y: None }) => Err(Error::InvalidArgument(
            format!("point with x = {x} needs a y coordinate"),
        )),
        (_, Place::Affine { y: Some(_), .. }) => {
            Err(Error::InvalidArgument(format!("{curve} points have no y coordinate")))
        }
        (CurveKind::Gm, Place::Affine { x, y: None }) if x.is_zero() => {
            Ok(Place::Puncture(PunctureId::Zero))
        }
        _ => Ok(place.clone()),
    }
}

/// An order-1 loop through a place: the chart at a puncture, `x = a + z` at
/// an ordinary affine point, and `x = a + z²/h′(a)` at a Weierstrass point.
pub fn local_loop(curve: &Arc<CurveModel>, place: &Place, terms: u32) -> Result<Loop> {
    match canonical_place(curve, place)? {
        Place::Puncture(p) => Ok(curve.chart(p, terms)?.to_loop(curve)),
        Place::Affine { x: a, y } => {
            let q = RingDescriptor::Rational;
            let a_series = LaurentSeries::constant(Coeff::from_rat(q, a.clone()));
            let Some(b) = y else {
                return Loop::new(Arc::clone(curve), a_series.add(&LaurentSeries::z(q))?, None);
            };
            let h = curve.h().expect("hyperelliptic");
            if b.is_zero() {
                let c = h.derivative().eval(&a).recip();
                let x = a_series.add(&LaurentSeries::monomial(Coeff::from_rat(q, c), 2))?;
                lift_x_to_loop(curve, x, Branch::Plus, terms)
            } else {
                let branch = if b.is_negative() { Branch::Minus } else { Branch::Plus };
                lift_x_to_loop(curve, a_series.add(&LaurentSeries::z(q))?, branch, terms)
            }
        }
    }
}

/// Residue at a place of the proper model, as a rational number. Local
/// expansions are lengthened until the residue is certified.
pub fn residue_at_place(form: &MeromorphicForm, place: &Place, terms: u32) -> Result<Rat> {
    let mut t = terms.max(8);
    loop {
        let lp = local_loop(&form.curve, place, t)?;
        match residue_along(form, &lp, t) {
            Err(Error::InsufficientPrecision(_)) if t < 8 * terms.max(8) => t *= 2,
            other => {
                return other.map(|c| c.as_rational().expect("rational loop"));
            }
        }
    }
}

/// Residue at a puncture, via its chart.
pub fn residue_at_puncture(form: &MeromorphicForm, p: PunctureId, terms: u32) -> Result<Rat> {
    residue_at_place(form, &Place::Puncture(p), terms)
}

/// Sum of residues over the listed places (zero when the list contains all
/// poles).
pub fn residue_sum_check(form: &MeromorphicForm, poles: &[Place], terms: u32) -> Result<Rat> {
    poles
        .iter()
        .map(|p| residue_at_place(form, p, terms))
        .sum()
}

/// True iff the residue along a ℚ[t] family does not depend on `t`.
pub fn family_residue_constancy(form: &MeromorphicForm, family: &Loop, terms: u32) -> Result<bool> {
    match residue_along(form, family, terms)? {
        Coeff::Poly(p) => Ok(p.is_constant()),
        other => Err(Error::RingMismatch {
            left: other.ring(),
            right: RingDescriptor::PolyParam,
        }),
    }
}

/// A verified third-kind form and the residues that were checked.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThirdKind {
    pub form: MeromorphicForm,
    pub residues: Vec<(Place, Rat)>,
}

fn unsupported(p: &Place, why: &str) -> Error {
    Error::UnsupportedPointPair(format!("{p}: {why}"))
}

/// `τ_R`: residue `+1` at `R`, compensated at infinity.
fn elementary(curve: &Arc<CurveModel>, place: &Place) -> Result<MeromorphicForm> {
    let one = Rat::one();
    let x_minus = |a: &Rat| QPoly::from_coeffs(vec![-a.clone(), one.clone()]);
    let Some(h) = curve.h() else {
        return match place {
            Place::Puncture(PunctureId::Infinity) => Ok(MeromorphicForm::zero(Arc::clone(curve))),
            Place::Puncture(PunctureId::Zero) => Ok(MeromorphicForm::dlog_x(Arc::clone(curve))),
            Place::Affine { x, .. } => Ok(MeromorphicForm::normalized(
                Arc::clone(curve),
                CurveFunction::constant(Rat::one()),
                x_minus(x),
            )),
            Place::Puncture(_) => Err(unsupported(place, "not a puncture of this curve")),
        };
    };
    let half = Rat::new(1.into(), 2.into());
    let deg = h.degree().expect("validated");
    match place {
        Place::Affine { x: a, y: Some(b) } => {
            if b.is_zero() {
                return Err(unsupported(place, "Weierstrass points are not supported"));
            }
            // (y + b)/(x − a) · 1/(2y) = (h + b·y) / (2h·(x − a))
            let num = CurveFunction::new(h.clone(), QPoly::constant(b.clone()));
            Ok(MeromorphicForm::normalized(
                Arc::clone(curve),
                num,
                h.mul(&x_minus(a)).scale(&Rat::from_integer(2.into())),
            ))
        }
        Place::Puncture(PunctureId::Infinity) => Ok(MeromorphicForm::zero(Arc::clone(curve))),
        Place::Puncture(p @ (PunctureId::InfinityPlus | PunctureId::InfinityMinus)) => {
            // ∓½ x^{d−1} dx/y = ∓½ x^{d−1} y/h dx
            let sign = if *p == PunctureId::InfinityPlus { -&half } else { half };
            let num = CurveFunction::new(QPoly::zero(), QPoly::monomial(sign, deg / 2 - 1));
            Ok(MeromorphicForm::normalized(Arc::clone(curve), num, h.clone()))
        }
        _ => Err(unsupported(place, "not a point of this curve")),
    }
}

/// A form with residue `1` at `p`, `−1` at `q`, and holomorphic elsewhere on
/// the proper model. The residues at `p`, `q`, every puncture, and the
/// conjugates of `p` and `q` are recomputed before returning.
pub fn third_kind(curve: &Arc<CurveModel>, p: &Place, q: &Place, terms: u32) -> Result<ThirdKind> {
    let canon = |place: &Place| {
        canonical_place(curve, place).map_err(|e| match e {
            Error::NotOnCurve(m) | Error::InvalidArgument(m) => Error::UnsupportedPointPair(m),
            e => e,
        })
    };
    let (p, q) = (canon(p)?, canon(q)?);
    if p == q {
        return Err(unsupported(&p, "the two points coincide"));
    }
    let form = elementary(curve, &p)?.sub(&elementary(curve, &q)?)?;

    let mut places = vec![p.clone(), q.clone()];
    for extra in curve
        .punctures()
        .into_iter()
        .map(Place::Puncture)
        .chain([&p, &q].into_iter().filter_map(|r| match r {
            Place::Affine { x, y: Some(y) } => Some(Place::affine(x.clone(), Some(-y))),
            _ => None,
        }))
    {
        if !places.contains(&extra) {
            places.push(extra);
        }
    }
    let mut residues = Vec::with_capacity(places.len());
    for place in places {
        let expected = if place == p {
            Rat::one()
        } else if place == q {
            -Rat::one()
        } else {
            Rat::zero()
        };
        let got = residue_at_place(&form, &place, terms)?;
        if got != expected {
            return Err(Error::VerificationFailed(format!(
                "residue of {form} at {place} is {got}, expected {expected}"
            )));
        }
        residues.push((place, got));
    }
    Ok(ThirdKind { form, residues })
}

/// Dimensions of `H⁰(ℙ¹, Ω(a + b))` and `H⁰(ℙ¹, Ω)`, computed as kernels of
/// polar-part conditions on the span of `x^i dx / ((x − a)²(x − b)²)`,
/// `i < span`.
pub fn genus0_form_dimensions(a: &Rat, b: &Rat, span: usize, terms: u32) -> Result<(usize, usize)> {
    if a == b {
        return Err(Error::InvalidArgument("the two points must differ".into()));
    }
    let curve = Arc::new(CurveModel::affine_line());
    let lin = |c: &Rat| QPoly::from_coeffs(vec![-c.clone(), Rat::one()]);
    let den = lin(a).pow(2).mul(&lin(b).pow(2));
    let candidates: Vec<MeromorphicForm> = (0..span)
        .map(|i| {
            MeromorphicForm::normalized(
                Arc::clone(&curve),
                CurveFunction::from_x(QPoly::monomial(Rat::one(), i)),
                den.clone(),
            )
        })
        .collect();
    let places = [
        Place::affine(a.clone(), None),
        Place::affine(b.clone(), None),
        Place::Puncture(PunctureId::Infinity),
    ];
    let mut expansions = Vec::new();
    for place in &places {
        let lp = local_loop(&curve, place, terms)?;
        let row: Vec<LaurentSeries> = candidates
            .iter()
            .map(|w| pullback(w, &lp, terms))
            .collect::<Result<_>>()?;
        expansions.push((place.clone(), row));
    }
    // Conditions: polar coefficients below `−1` everywhere (simple poles
    // allowed at a, b), plus `z⁻¹` at a and b for holomorphic forms.
    let mut simple = Vec::new();
    let mut holo = Vec::new();
    for (place, row) in &expansions {
        let lo = row.iter().filter_map(LaurentSeries::min_exponent).min().unwrap_or(0);
        for e in lo..0 {
            let condition: Vec<Rat> = row
                .iter()
                .map(|s| s.rational_coeff(e).unwrap_or_else(Rat::zero))
                .collect();
            let allowed_simple = e == -1 && matches!(place, Place::Affine { .. });
            if !allowed_simple {
                simple.push(condition.clone());
            }
            holo.push(condition);
        }
    }
    Ok((linalg::nullity(&simple, span), linalg::nullity(&holo, span)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{rat, DEFAULT_TERMS};

    const T: u32 = DEFAULT_TERMS;

    fn s(terms: &[(i64, i64)]) -> LaurentSeries {
        LaurentSeries::from_rats(terms.iter().map(|&(e, c)| (e, rat(c, 1))))
    }

    fn gm() -> Arc<CurveModel> {
        Arc::new(CurveModel::gm())
    }

    fn cubic() -> Arc<CurveModel> {
        Arc::new(CurveModel::hyperelliptic(QPoly::from_ints(&[1, 0, 0, 1])).unwrap())
    }

    fn quartic() -> Arc<CurveModel> {
        Arc::new(CurveModel::hyperelliptic(QPoly::from_ints(&[-1, 0, 0, 0, 1])).unwrap())
    }

    fn q(n: i64) -> Rat {
        rat(n, 1)
    }

    fn holomorphic_basis(c: &Arc<CurveModel>) -> Vec<MeromorphicForm> {
        // dx/(2y) and x dx/(2y)
        [QPoly::from_ints(&[1]), QPoly::from_ints(&[0, 1])]
            .into_iter()
            .map(|b| {
                MeromorphicForm::new(
                    c.clone(),
                    CurveFunction::from_x(b),
                    CurveFunction::new(QPoly::zero(), QPoly::from_ints(&[2])),
                )
                .unwrap()
            })
            .collect()
    }

    #[test]
    fn gm_pullbacks() {
        let lp = Loop::new(gm(), s(&[(3, 1)]), None).unwrap();
        assert_eq!(pullback(&MeromorphicForm::dlog_x(gm()), &lp, T).unwrap(), s(&[(-1, 3)]));
        let arc = Loop::new(gm(), s(&[(0, 1), (1, 1)]), None).unwrap();
        let dx = MeromorphicForm::polynomial(gm(), CurveFunction::constant(q(1))).unwrap();
        assert_eq!(pullback(&dx, &arc, T).unwrap(), s(&[(0, 1)]));
        let five = Loop::new(gm(), s(&[(5, 1)]), None).unwrap();
        assert_eq!(residue_along(&MeromorphicForm::dlog_x(gm()), &five, T).unwrap(), Coeff::from_int(RingDescriptor::Rational, 5));
        let two = Loop::new(gm(), s(&[(0, 2), (1, 1)]), None).unwrap();
        assert!(residue_along(&MeromorphicForm::dlog_x(gm()), &two, T).unwrap().is_zero());
    }

    #[test]
    fn affine_line_family_pullback() {
        let a1 = Arc::new(CurveModel::affine_line());
        let t = Coeff::param(RingDescriptor::PolyParam).unwrap();
        let one = Coeff::one(RingDescriptor::PolyParam);
        let x = LaurentSeries::new(RingDescriptor::PolyParam, [(1, one.clone()), (-1, t.clone())], crate::series::Precision::Exact).unwrap();
        let lp = Loop::new(a1.clone(), x, None).unwrap();
        let dx = MeromorphicForm::polynomial(a1, CurveFunction::constant(q(1))).unwrap();
        let expected = LaurentSeries::new(RingDescriptor::PolyParam, [(0, one), (-2, -&t)], crate::series::Precision::Exact).unwrap();
        assert_eq!(pullback(&dx, &lp, T).unwrap(), expected);
        assert!(family_residue_constancy(&dx, &lp, T).unwrap());
    }

    #[test]
    fn puncture_residues() {
        let dlog = MeromorphicForm::dlog_x(gm());
        assert_eq!(residue_at_puncture(&dlog, PunctureId::Zero, T).unwrap(), q(1));
        assert_eq!(residue_at_puncture(&dlog, PunctureId::Infinity, T).unwrap(), q(-1));
        for w in holomorphic_basis(&cubic()) {
            assert!(residue_at_puncture(&w, PunctureId::Infinity, T).unwrap().is_zero());
        }
        // x dx/y on y² = x⁴ − 1: residues r at ∞+ and −r at ∞−
        let c = quartic();
        let w = MeromorphicForm::new(c, CurveFunction::x(), CurveFunction::y()).unwrap();
        let plus = residue_at_puncture(&w, PunctureId::InfinityPlus, T).unwrap();
        let minus = residue_at_puncture(&w, PunctureId::InfinityMinus, T).unwrap();
        assert_eq!(plus, q(-1));
        assert_eq!(minus, q(1));
    }

    #[test]
    fn holomorphic_forms_have_no_residue_along_cubic_loops() {
        let c = cubic();
        let lp = lift_x_to_loop(&c, s(&[(-2, 1)]), Branch::Plus, 30).unwrap();
        for w in holomorphic_basis(&c) {
            assert!(residue_along(&w, &lp, 30).unwrap().is_zero());
        }
    }

    #[test]
    fn third_kind_on_p1() {
        let zero = Place::Puncture(PunctureId::Zero);
        let inf = Place::Puncture(PunctureId::Infinity);
        let tk = third_kind(&gm(), &zero, &inf, T).unwrap();
        assert_eq!(tk.form, MeromorphicForm::dlog_x(gm()));
        assert_eq!(tk.form.to_string(), "1/x dx");

        let (one, two) = (Place::affine(q(1), None), Place::affine(q(2), None));
        let tk = third_kind(&gm(), &one, &two, T).unwrap();
        assert_eq!(tk.form.to_string(), "-1/(2 - 3*x + x^2) dx");
        let sum = residue_sum_check(&tk.form, &[one, two, inf], T).unwrap();
        assert!(sum.is_zero());
    }

    #[test]
    fn third_kind_on_cubic() {
        let c = cubic();
        let (p, q_) = (Place::affine(q(0), Some(q(1))), Place::affine(q(0), Some(q(-1))));
        let tk = third_kind(&c, &p, &q_, T).unwrap();
        // [(y+1)/x − (y−1)/x] dx/(2y) = dx/(xy) = y/(x h) dx
        assert_eq!(tk.form.to_string(), "y/(x + x^4) dx");
        let inf = Place::Puncture(PunctureId::Infinity);
        assert!(residue_sum_check(&tk.form, &[p.clone(), q_.clone(), inf.clone()], T).unwrap().is_zero());
        assert!(third_kind(&c, &p, &inf, T).is_ok());
        let w = Place::affine(q(-1), Some(q(0)));
        assert!(matches!(third_kind(&c, &p, &w, T), Err(Error::UnsupportedPointPair(_))));
        assert!(matches!(third_kind(&c, &p, &p, T), Err(Error::UnsupportedPointPair(_))));
        let off = Place::affine(q(1), Some(q(1)));
        assert!(matches!(third_kind(&c, &p, &off, T), Err(Error::UnsupportedPointPair(_))));
    }

    #[test]
    fn third_kind_on_quartic_infinities() {
        let c = quartic();
        let plus = Place::Puncture(PunctureId::InfinityPlus);
        let minus = Place::Puncture(PunctureId::InfinityMinus);
        let tk = third_kind(&c, &plus, &minus, T).unwrap();
        assert_eq!(tk.residues.len(), 2);
    }

    #[test]
    fn weierstrass_residues() {
        // dx/y on y² = x³ + 1 is holomorphic at (−1, 0); dx/(x + 1) has a double
        // zero of x + 1 in the local parameter, so residue 2
        let c = cubic();
        let w = Place::affine(q(-1), Some(q(0)));
        let hol = MeromorphicForm::new(c.clone(), CurveFunction::constant(q(1)), CurveFunction::y()).unwrap();
        assert!(residue_at_place(&hol, &w, T).unwrap().is_zero());
        let log = MeromorphicForm::new(c, CurveFunction::constant(q(1)), CurveFunction::from_x(QPoly::from_ints(&[1, 1]))).unwrap();
        assert_eq!(residue_at_place(&log, &w, T).unwrap(), q(2));
    }

    #[test]
    fn genus0_dimensions() {
        assert_eq!(genus0_form_dimensions(&q(0), &q(1), 8, T).unwrap(), (1, 0));
        assert_eq!(genus0_form_dimensions(&rat(-3, 2), &q(5), 6, T).unwrap(), (1, 0));
    }
}
