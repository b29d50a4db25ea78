//! Catalog curves, their punctures, loops, and component classification.
//!
//! Three kinds of smooth affine curve are supported:
//!
//! | kind | equation | punctures `X̄ \ X` | genus |
//! |---|---|---|---|
//! | `A1` | none | `inf` | 0 |
//! | `Gm` | `x·x⁻¹ = 1` | `0`, `inf` | 0 |
//! | hyperelliptic, `deg h` odd | `y² = h(x)` | `inf` | `(deg h − 1)/2` |
//! | hyperelliptic, `deg h = 2d` | `y² = h(x)` | `inf+`, `inf-` | `d − 1` |
//!
//! `h` is monic and squarefree, so each puncture has a chart over ℚ:
//!
//! * odd degree: `x = u⁻²`, `y = u^{−deg h} s(u)` with `s² = u^{2 deg h} h(u⁻²)`;
//! * even degree: `x = u⁻¹`, `y = ±u^{−d} s(u)` with `s² = u^{2d} h(u⁻¹)`;
//!
//! and `s(0) = 1`. A loop is a tuple of coordinate series in `z`; its class is
//! read off from valuations and matched against these charts.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::poly::QPoly;
use crate::ring::{Coeff, RingDescriptor};
use crate::series::{rational_series, Branch, LaurentSeries, Precision};
use crate::{Error, Rat, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CurveKind {
    AffineLine,
    Gm,
    Hyperelliptic(QPoly),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PunctureId {
    Zero,
    Infinity,
    InfinityPlus,
    InfinityMinus,
}

impl PunctureId {
    pub fn as_str(self) -> &'static str {
        match self {
            PunctureId::Zero => "0",
            PunctureId::Infinity => "inf",
            PunctureId::InfinityPlus => "inf+",
            PunctureId::InfinityMinus => "inf-",
        }
    }
}

impl fmt::Display for PunctureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PunctureId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "0" => Ok(PunctureId::Zero),
            "inf" => Ok(PunctureId::Infinity),
            "inf+" => Ok(PunctureId::InfinityPlus),
            "inf-" => Ok(PunctureId::InfinityMinus),
            other => Err(Error::parse(0, format!("unknown puncture `{other}`"))),
        }
    }
}

/// A validated catalog curve.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CurveModel {
    kind: CurveKind,
}

impl CurveModel {
    pub fn affine_line() -> Self {
        CurveModel {
            kind: CurveKind::AffineLine,
        }
    }

    pub fn gm() -> Self {
        CurveModel {
            kind: CurveKind::Gm,
        }
    }

    pub fn hyperelliptic(h: QPoly) -> Result<Self> {
        make_curve(CurveKind::Hyperelliptic(h))
    }

    pub fn kind(&self) -> &CurveKind {
        &self.kind
    }

    /// `h` for hyperelliptic curves.
    pub fn h(&self) -> Option<&QPoly> {
        match &self.kind {
            CurveKind::Hyperelliptic(h) => Some(h),
            _ => None,
        }
    }

    pub fn is_hyperelliptic(&self) -> bool {
        self.h().is_some()
    }

    pub fn genus(&self) -> u32 {
        match self.h().and_then(QPoly::degree) {
            Some(d) => ((d - 1) / 2) as u32,
            None => 0,
        }
    }

    pub fn punctures(&self) -> Vec<PunctureId> {
        match &self.kind {
            CurveKind::AffineLine => vec![PunctureId::Infinity],
            CurveKind::Gm => vec![PunctureId::Zero, PunctureId::Infinity],
            CurveKind::Hyperelliptic(h) if h.degree().unwrap_or(0) % 2 == 1 => {
                vec![PunctureId::Infinity]
            }
            CurveKind::Hyperelliptic(_) => vec![PunctureId::InfinityPlus, PunctureId::InfinityMinus],
        }
    }

    pub fn has_puncture(&self, p: PunctureId) -> bool {
        self.punctures().contains(&p)
    }

    /// Puncture charts with `terms` coefficients of `s(u)`.
    pub fn charts(&self, terms: u32) -> Vec<PunctureChart> {
        self.punctures()
            .into_iter()
            .map(|p| self.chart(p, terms).expect("listed puncture"))
            .collect()
    }

    pub fn chart(&self, id: PunctureId, terms: u32) -> Result<PunctureChart> {
        if !self.has_puncture(id) {
            return Err(Error::InvalidArgument(format!("{self} has no puncture {id}")));
        }
        let q = RingDescriptor::Rational;
        let u = LaurentSeries::z(q);
        let u_inv = LaurentSeries::monomial(Coeff::one(q), -1);
        let Some(h) = self.h() else {
            let x = if id == PunctureId::Zero { u } else { u_inv };
            return Ok(PunctureChart {
                id,
                x,
                y: None,
                pole_order_x: 1,
            });
        };
        let deg = h.degree().expect("validated") as i64;
        // s² = Σ_m h_{deg−m} u^{step·m}, step 2 for odd degree and 1 for even
        let (step, x, y_shift, pole_order_x) = if deg % 2 == 1 {
            (2, u_inv.pow(2, terms)?, -deg, 2)
        } else {
            (1, u_inv, -deg / 2, 1)
        };
        let s_sq = LaurentSeries::from_rats(
            (0..=deg).map(|m| (step * m, h.coeff((deg - m) as usize))),
        );
        let branch = if id == PunctureId::InfinityMinus {
            Branch::Minus
        } else {
            Branch::Plus
        };
        let y = s_sq.sqrt(branch, terms)?.shift(y_shift);
        Ok(PunctureChart {
            id,
            x,
            y: Some(y),
            pole_order_x,
        })
    }
}

impl fmt::Display for CurveModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            CurveKind::AffineLine => f.write_str("a1"),
            CurveKind::Gm => f.write_str("gm"),
            CurveKind::Hyperelliptic(h) => write!(f, "hyp:h={}", h.display_in("x")),
        }
    }
}

/// Validates a curve description.
pub fn make_curve(kind: CurveKind) -> Result<CurveModel> {
    if let CurveKind::Hyperelliptic(h) = &kind {
        if h.degree().unwrap_or(0) < 3 {
            return Err(Error::DegreeTooSmall);
        }
        if !h.is_monic() {
            return Err(Error::NotMonic);
        }
        if !h.is_squarefree() {
            return Err(Error::NotSquarefree);
        }
    }
    let curve = CurveModel { kind };
    let shared = Arc::new(curve.clone());
    for chart in curve.charts(crate::DEFAULT_TERMS) {
        if !check_on_curve(&chart.to_loop(&shared))? {
            return Err(Error::VerificationFailed(format!(
                "chart at {} does not satisfy the curve equation",
                chart.id
            )));
        }
    }
    Ok(curve)
}

/// Formal neighbourhood of a puncture: coordinates as Laurent series in a
/// local parameter `u`. `pole_order_x` is the order of `x` (or `1/x` at the
/// puncture `0` of `Gm`) in `u`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PunctureChart {
    pub id: PunctureId,
    pub x: LaurentSeries,
    pub y: Option<LaurentSeries>,
    pub pole_order_x: u32,
}

impl PunctureChart {
    /// The chart as an order-1 loop at its puncture.
    pub fn to_loop(&self, curve: &Arc<CurveModel>) -> Loop {
        Loop {
            curve: Arc::clone(curve),
            x: self.x.clone(),
            y: self.y.clone(),
        }
    }
}

/// A point of `X(A((z)))`: `x` alone for `A1` and `Gm`, `(x, y)` otherwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Loop {
    curve: Arc<CurveModel>,
    x: LaurentSeries,
    y: Option<LaurentSeries>,
}

impl Loop {
    /// Checks shape (a `y` coordinate exactly for hyperelliptic curves, one
    /// ring), not the curve equation; see [`check_on_curve`].
    pub fn new(curve: Arc<CurveModel>, x: LaurentSeries, y: Option<LaurentSeries>) -> Result<Self> {
        match (&y, curve.is_hyperelliptic()) {
            (Some(y), true) => x.ring().ensure_same(y.ring())?,
            (None, false) => {}
            (Some(_), false) => {
                return Err(Error::InvalidArgument(format!("{curve} loops take only x")))
            }
            (None, true) => {
                return Err(Error::InvalidArgument(format!("{curve} loops need y")))
            }
        }
        Ok(Loop { curve, x, y })
    }

    pub fn curve(&self) -> &Arc<CurveModel> {
        &self.curve
    }

    pub fn x(&self) -> &LaurentSeries {
        &self.x
    }

    pub fn y(&self) -> Option<&LaurentSeries> {
        self.y.as_ref()
    }

    pub fn ring(&self) -> RingDescriptor {
        self.x.ring()
    }

    fn map(&self, f: impl Fn(&LaurentSeries) -> Result<LaurentSeries>) -> Result<Loop> {
        Ok(Loop {
            curve: Arc::clone(&self.curve),
            x: f(&self.x)?,
            y: self.y.as_ref().map(&f).transpose()?,
        })
    }

    /// The fibre of a ℚ[t] family at `t = t0`.
    pub fn specialize(&self, t0: &Rat) -> Result<Loop> {
        self.map(|s| s.specialize(t0))
    }
}

impl fmt::Display for Loop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x = {}", self.x)?;
        if let Some(y) = &self.y {
            write!(f, ", y = {y}")?;
        }
        Ok(())
    }
}

/// `h(x)` for a series `x`, by Horner's rule.
pub fn eval_poly_series(h: &QPoly, x: &LaurentSeries) -> LaurentSeries {
    let ring = x.ring();
    h.coeffs().iter().rev().fold(LaurentSeries::zero(ring), |acc, c| {
        acc.mul_unchecked(x)
            .add_unchecked(&LaurentSeries::constant(Coeff::from_rat(ring, c.clone())))
    })
}

/// Whether the loop satisfies its curve's equation up to precision.
///
/// Hyperelliptic loops must certify at least the leading cancellation of
/// `y² − h(x)`; `Gm` loops need an invertible `x`.
pub fn check_on_curve(lp: &Loop) -> Result<bool> {
    match lp.curve.kind() {
        CurveKind::AffineLine => Ok(true),
        CurveKind::Gm => match crate::ccnf::cc_order(&lp.x) {
            Ok(_) => Ok(true),
            Err(Error::NotInvertible(_)) => Ok(false),
            Err(e) => Err(e),
        },
        CurveKind::Hyperelliptic(h) => {
            let y = lp.y.as_ref().expect("shape checked");
            let y2 = y.mul_unchecked(y);
            let hx = eval_poly_series(h, &lp.x);
            let diff = y2.add_unchecked(&hx.neg());
            if diff.num_terms() > 0 {
                return Ok(false);
            }
            let lowest = [y2.min_exponent(), hx.min_exponent()]
                .into_iter()
                .flatten()
                .min();
            match (diff.prec(), lowest) {
                (Precision::Exact, _) => Ok(true),
                (Precision::Finite(n), Some(lo)) if n > lo => Ok(true),
                _ => Err(Error::InsufficientPrecision(
                    "curve equation not certified at any order".into(),
                )),
            }
        }
    }
}

/// The component of a loop: the arcs, or a puncture and a pole order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ComponentClass {
    Arc,
    Pole { puncture: PunctureId, order: u64 },
    A1Connected { has_pole: bool },
}

impl ComponentClass {
    pub fn order(&self) -> Option<u64> {
        match self {
            ComponentClass::Pole { order, .. } => Some(*order),
            _ => None,
        }
    }
}

impl fmt::Display for ComponentClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComponentClass::Arc => f.write_str("class=Arc"),
            ComponentClass::Pole { puncture, order } => {
                write!(f, "class=Pole punct={puncture} order={order}")
            }
            ComponentClass::A1Connected { has_pole } => {
                write!(f, "class=A1 connected has_pole={has_pole}")
            }
        }
    }
}

impl FromStr for ComponentClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let words: Vec<&str> = s.split_whitespace().collect();
        let bad = || Error::parse(0, format!("not a component class: `{s}`"));
        match words.as_slice() {
            ["class=Arc"] => Ok(ComponentClass::Arc),
            ["class=Pole", p, n] => {
                let puncture = p.strip_prefix("punct=").ok_or_else(bad)?.parse()?;
                let order = n
                    .strip_prefix("order=")
                    .and_then(|n| n.parse().ok())
                    .filter(|n| *n >= 1)
                    .ok_or_else(bad)?;
                Ok(ComponentClass::Pole { puncture, order })
            }
            ["class=A1", "connected", flag] => {
                let has_pole = flag
                    .strip_prefix("has_pole=")
                    .and_then(|b| b.parse().ok())
                    .ok_or_else(bad)?;
                Ok(ComponentClass::A1Connected { has_pole })
            }
            _ => Err(bad()),
        }
    }
}

/// Valuation, or `None` when the series certainly has no pole but its
/// valuation is not determined (exact zero, or `O(z^N)` with `N ≥ 0`).
fn valuation_or_nonnegative(s: &LaurentSeries) -> Result<Option<i64>> {
    match s.valuation() {
        Ok(v) => Ok(Some(v)),
        Err(Error::ZeroSeries) => Ok(None),
        Err(Error::InsufficientPrecision(_)) if s.prec().covers(-1) => Ok(None),
        Err(e) => Err(e),
    }
}

fn ensure_classifiable_ring(lp: &Loop) -> Result<()> {
    match lp.ring() {
        RingDescriptor::Nilpotent { .. } => Err(Error::RingMismatch {
            left: lp.ring(),
            right: RingDescriptor::Rational,
        }),
        _ => Ok(()),
    }
}

/// The component of a loop with ℚ coefficients. Over ℚ[t] the result is the
/// generic class (the class over the field ℚ(t)).
pub fn classify(lp: &Loop) -> Result<ComponentClass> {
    ensure_classifiable_ring(lp)?;
    match lp.curve.kind() {
        CurveKind::AffineLine => Ok(ComponentClass::A1Connected {
            has_pole: !lp.x.is_holomorphic()?,
        }),
        CurveKind::Gm => {
            // ℚ(t) is a field: any nonzero leading coefficient is a unit there
            let v = match lp.ring() {
                RingDescriptor::PolyParam => lp.x.valuation()?,
                _ => crate::ccnf::cc_order(&lp.x)?,
            };
            Ok(match v {
                0 => ComponentClass::Arc,
                v if v > 0 => ComponentClass::Pole {
                    puncture: PunctureId::Zero,
                    order: v as u64,
                },
                v => ComponentClass::Pole {
                    puncture: PunctureId::Infinity,
                    order: v.unsigned_abs(),
                },
            })
        }
        CurveKind::Hyperelliptic(h) => {
            let y = lp.y.as_ref().expect("shape checked");
            let vx = valuation_or_nonnegative(&lp.x)?;
            let vy = valuation_or_nonnegative(y)?;
            let deg = h.degree().expect("validated") as i64;
            let inconsistent = |why: String| Err(Error::InconsistentPoleData(why));
            match (vx, vy) {
                (None | Some(0..), None | Some(0..)) => Ok(ComponentClass::Arc),
                (None | Some(0..), Some(vy)) => {
                    inconsistent(format!("y has a pole of order {} but x has none", -vy))
                }
                (Some(vx), vy) => {
                    let vy = vy.unwrap_or(0);
                    if deg % 2 == 1 {
                        if vx % 2 != 0 || -vy != (-vx / 2) * deg {
                            return inconsistent(format!(
                                "valuations ({vx}, {vy}) do not match the chart x = u^-2, y = u^-{deg}"
                            ));
                        }
                        Ok(ComponentClass::Pole {
                            puncture: PunctureId::Infinity,
                            order: (-vx / 2) as u64,
                        })
                    } else {
                        let d = deg / 2;
                        if -vy != -vx * d {
                            return inconsistent(format!(
                                "valuations ({vx}, {vy}) do not match the chart x = u^-1, y = u^-{d}"
                            ));
                        }
                        let ly = y.coeff(vy);
                        let lx_d = lp.x.coeff(vx).pow(d as u32);
                        let puncture = if ly == lx_d {
                            PunctureId::InfinityPlus
                        } else if ly == -&lx_d {
                            PunctureId::InfinityMinus
                        } else {
                            return inconsistent(format!(
                                "leading coefficient of y/x^{d} is {ly}/({lx_d}), not ±1"
                            ));
                        };
                        Ok(ComponentClass::Pole {
                            puncture,
                            order: (-vx) as u64,
                        })
                    }
                }
            }
        }
    }
}

/// A point of the proper model: an affine point or a puncture.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Place {
    Affine { x: Rat, y: Option<Rat> },
    Puncture(PunctureId),
}

impl Place {
    pub fn affine(x: Rat, y: Option<Rat>) -> Self {
        Place::Affine { x, y }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Affine { x, y: None } => write!(f, "{x}"),
            Place::Affine { x, y: Some(y) } => write!(f, "({x},{y})"),
            Place::Puncture(p) => write!(f, "{p}"),
        }
    }
}

/// The value at `z = 0` of the extension of the loop to the proper model.
pub fn central_value(lp: &Loop) -> Result<Place> {
    if lp.ring() != RingDescriptor::Rational {
        return Err(Error::RingMismatch {
            left: lp.ring(),
            right: RingDescriptor::Rational,
        });
    }
    let at_zero = |s: &LaurentSeries| -> Result<Rat> {
        if !s.prec().covers(0) {
            return Err(Error::InsufficientPrecision(
                "constant term of the coordinate is unknown".into(),
            ));
        }
        Ok(s.rational_coeff(0).expect("rational ring"))
    };
    let arc = || -> Result<Place> {
        Ok(Place::Affine {
            x: at_zero(&lp.x)?,
            y: lp.y.as_ref().map(at_zero).transpose()?,
        })
    };
    match classify(lp)? {
        ComponentClass::Arc | ComponentClass::A1Connected { has_pole: false } => arc(),
        ComponentClass::A1Connected { has_pole: true } => Ok(Place::Puncture(PunctureId::Infinity)),
        ComponentClass::Pole { puncture, .. } => Ok(Place::Puncture(puncture)),
    }
}

/// Precomposition with `z ↦ zⁿ`.
pub fn loop_covering(lp: &Loop, n: u32) -> Result<Loop> {
    if n == 0 {
        return Err(Error::InvalidArgument("covering degree must be positive".into()));
    }
    lp.map(|s| Ok(s.covering(n)))
}

/// Precomposition with an automorphism `z ↦ u(z)` of the punctured disc
/// (`u` of valuation 1 with unit leading coefficient).
pub fn reparametrize(lp: &Loop, u: &LaurentSeries, terms: u32) -> Result<Loop> {
    match u.leading() {
        Some((1, c)) if c.is_unit() => {}
        _ => {
            return Err(Error::InvalidArgument(format!(
                "{u} is not a uniformizer of the disc"
            )))
        }
    }
    lp.map(|s| s.substitute(u, terms))
}

/// Solves `y² = h(x)` for `y`; `branch` fixes the sign of the leading
/// coefficient of `y`.
pub fn lift_x_to_loop(
    curve: &Arc<CurveModel>,
    x: LaurentSeries,
    branch: Branch,
    terms: u32,
) -> Result<Loop> {
    let h = curve
        .h()
        .ok_or_else(|| Error::InvalidArgument(format!("{curve} has no y coordinate")))?;
    let hx = eval_poly_series(h, &x);
    let y = hx.sqrt(branch, terms).map_err(|e| match e {
        Error::NotInvertible(c) => Error::NoRationalSquareRoot(c),
        e => e,
    })?;
    Loop::new(Arc::clone(curve), x, Some(y))
}

/// `x = c` as an exact constant series over ℚ.
pub fn constant_x(c: Rat) -> LaurentSeries {
    rational_series(0, &[c], Precision::Exact)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{rat, DEFAULT_TERMS};

    fn s(terms: &[(i64, i64)]) -> LaurentSeries {
        LaurentSeries::from_rats(terms.iter().map(|&(e, c)| (e, rat(c, 1))))
    }

    fn gm_loop(x: LaurentSeries) -> Loop {
        Loop::new(Arc::new(CurveModel::gm()), x, None).unwrap()
    }

    fn cubic() -> Arc<CurveModel> {
        Arc::new(CurveModel::hyperelliptic(QPoly::from_ints(&[1, 0, 0, 1])).unwrap())
    }

    fn quartic() -> Arc<CurveModel> {
        Arc::new(CurveModel::hyperelliptic(QPoly::from_ints(&[-1, 0, 0, 0, 1])).unwrap())
    }

    #[test]
    fn catalog_punctures_and_genus() {
        assert_eq!(CurveModel::gm().punctures(), vec![PunctureId::Zero, PunctureId::Infinity]);
        assert_eq!(cubic().punctures(), vec![PunctureId::Infinity]);
        assert_eq!(cubic().genus(), 1);
        assert_eq!(quartic().punctures(), vec![PunctureId::InfinityPlus, PunctureId::InfinityMinus]);
        assert_eq!(quartic().genus(), 1);
        let quintic = CurveModel::hyperelliptic(QPoly::from_ints(&[0, 1, 0, 0, 0, 1])).unwrap();
        assert_eq!(quintic.genus(), 2);
    }

    #[test]
    fn invalid_curves() {
        assert_eq!(CurveModel::hyperelliptic(QPoly::from_ints(&[1, 0, 1])), Err(Error::DegreeTooSmall));
        assert_eq!(CurveModel::hyperelliptic(QPoly::from_ints(&[1, 0, 0, 2])), Err(Error::NotMonic));
        let sq = QPoly::from_ints(&[-1, 1]).pow(2).mul(&QPoly::from_ints(&[1, 1]));
        assert_eq!(CurveModel::hyperelliptic(sq), Err(Error::NotSquarefree));
    }

    #[test]
    fn cubic_chart_expansion() {
        // s(u) = √(1 + u⁶) = 1 + ½u⁶ − ⅛u¹² + …
        let chart = cubic().chart(PunctureId::Infinity, 13).unwrap();
        let y = chart.y.unwrap();
        assert_eq!(y.coeff(-3), Coeff::Rational(rat(1, 1)));
        assert_eq!(y.coeff(3), Coeff::Rational(rat(1, 2)));
        assert_eq!(y.coeff(9), Coeff::Rational(rat(-1, 8)));
        assert_eq!(chart.pole_order_x, 2);
    }

    #[test]
    fn check_on_curve_examples() {
        assert!(check_on_curve(&gm_loop(s(&[(5, 1)]))).unwrap());
        let c = cubic();
        let chart_loop = c.chart(PunctureId::Infinity, 20).unwrap().to_loop(&c);
        assert!(check_on_curve(&chart_loop).unwrap());
        let bad = Loop::new(c, s(&[(1, 1)]), Some(s(&[(1, 1)]))).unwrap();
        assert!(!check_on_curve(&bad).unwrap());
        assert!(!check_on_curve(&gm_loop(LaurentSeries::zero(RingDescriptor::Rational))).unwrap());
    }

    #[test]
    fn gm_classification() {
        assert_eq!(
            classify(&gm_loop(s(&[(3, 1)]))).unwrap(),
            ComponentClass::Pole { puncture: PunctureId::Zero, order: 3 }
        );
        assert_eq!(
            classify(&gm_loop(s(&[(-3, 1)]))).unwrap(),
            ComponentClass::Pole { puncture: PunctureId::Infinity, order: 3 }
        );
        assert_eq!(classify(&gm_loop(s(&[(0, 1), (1, 1)]))).unwrap(), ComponentClass::Arc);
    }

    #[test]
    fn cubic_classification() {
        let c = cubic();
        let lp = lift_x_to_loop(&c, s(&[(-2, 1)]), Branch::Plus, DEFAULT_TERMS).unwrap();
        assert_eq!(
            classify(&lp).unwrap(),
            ComponentClass::Pole { puncture: PunctureId::Infinity, order: 1 }
        );
        let cov = loop_covering(&lp, 3).unwrap();
        assert_eq!(classify(&cov).unwrap().order(), Some(3));
        assert_eq!(loop_covering(&lp, 1).unwrap(), lp);
        let point = Loop::new(c.clone(), s(&[]), Some(s(&[(0, 1)]))).unwrap();
        assert_eq!(classify(&point).unwrap(), ComponentClass::Arc);
        let inconsistent = Loop::new(c, s(&[(-2, 1)]), Some(s(&[(-2, 1)]))).unwrap();
        assert!(matches!(classify(&inconsistent), Err(Error::InconsistentPoleData(_))));
    }

    #[test]
    fn quartic_branches() {
        let q = quartic();
        for (branch, id) in [(Branch::Plus, PunctureId::InfinityPlus), (Branch::Minus, PunctureId::InfinityMinus)] {
            let lp = lift_x_to_loop(&q, s(&[(-2, 1), (0, 5)]), branch, DEFAULT_TERMS).unwrap();
            assert_eq!(classify(&lp).unwrap(), ComponentClass::Pole { puncture: id, order: 2 });
        }
        for chart in q.charts(DEFAULT_TERMS) {
            assert_eq!(
                classify(&chart.to_loop(&q)).unwrap(),
                ComponentClass::Pole { puncture: chart.id, order: 1 }
            );
        }
    }

    #[test]
    fn lifts() {
        let c = cubic();
        let lp = lift_x_to_loop(&c, s(&[(-2, 1)]), Branch::Plus, 13).unwrap();
        let y = lp.y().unwrap();
        assert_eq!(y.coeff(-3), Coeff::Rational(rat(1, 1)));
        assert_eq!(y.coeff(3), Coeff::Rational(rat(1, 2)));
        assert_eq!(y.coeff(9), Coeff::Rational(rat(-1, 8)));
        let constant = lift_x_to_loop(&c, s(&[]), Branch::Plus, 8).unwrap();
        assert_eq!(constant.y().unwrap(), &s(&[(0, 1)]));
        let arc = lift_x_to_loop(&c, s(&[(1, 1)]), Branch::Plus, 8).unwrap();
        assert_eq!(classify(&arc).unwrap(), ComponentClass::Arc);
        assert!(check_on_curve(&arc).unwrap());
        // h(2 + z) has leading coefficient 9, h(1 + z) has 2
        assert!(lift_x_to_loop(&c, s(&[(0, 2), (1, 1)]), Branch::Plus, 8).is_ok());
        assert!(matches!(
            lift_x_to_loop(&c, s(&[(0, 1), (1, 1)]), Branch::Plus, 8),
            Err(Error::NoRationalSquareRoot(_))
        ));
        assert!(matches!(
            lift_x_to_loop(&c, s(&[(-1, 1)]), Branch::Plus, 8),
            Err(Error::OddValuation(-3))
        ));
    }

    #[test]
    fn central_values() {
        assert_eq!(central_value(&gm_loop(s(&[(0, 2), (1, 1)]))).unwrap(), Place::affine(rat(2, 1), None));
        assert_eq!(central_value(&gm_loop(s(&[(-1, 1)]))).unwrap(), Place::Puncture(PunctureId::Infinity));
        let t = Coeff::param(RingDescriptor::PolyParam).unwrap();
        let one = Coeff::one(RingDescriptor::PolyParam);
        let family = LaurentSeries::new(RingDescriptor::PolyParam, [(1, one), (-1, t)], Precision::Exact).unwrap();
        let a1 = Loop::new(Arc::new(CurveModel::affine_line()), family, None).unwrap();
        assert_eq!(central_value(&a1.specialize(&rat(0, 1)).unwrap()).unwrap(), Place::affine(rat(0, 1), None));
        assert_eq!(
            central_value(&a1.specialize(&rat(1, 1)).unwrap()).unwrap(),
            Place::Puncture(PunctureId::Infinity)
        );
    }

    #[test]
    fn reparametrization_preserves_class() {
        let c = cubic();
        let lp = lift_x_to_loop(&c, s(&[(-4, 1), (-1, 3)]), Branch::Minus, 30).unwrap();
        let class = classify(&lp).unwrap();
        for u in [s(&[(1, 1), (2, 1)]), s(&[(1, -2), (3, 5)]), s(&[(1, 1), (2, -1), (4, 7)])] {
            let re = reparametrize(&lp, &u, 30).unwrap();
            assert!(check_on_curve(&re).unwrap());
            assert_eq!(classify(&re).unwrap(), class);
        }
    }

    #[test]
    fn class_text_round_trip() {
        for c in [
            ComponentClass::Arc,
            ComponentClass::Pole { puncture: PunctureId::InfinityMinus, order: 4 },
            ComponentClass::A1Connected { has_pole: true },
        ] {
            assert_eq!(c.to_string().parse::<ComponentClass>().unwrap(), c);
        }
        assert!("class=Pole punct=inf order=0".parse::<ComponentClass>().is_err());
    }
}
