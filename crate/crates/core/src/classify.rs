//! Components modulo the covering action, the census `1 + #∂X`, and fibres
//! of one-parameter families.

use std::fmt;

use crate::ccnf::cc_order;
use crate::curve::{check_on_curve, classify, ComponentClass, CurveKind, CurveModel, Loop, PunctureId};
use crate::par::{self, Strategy};
use crate::ring::RingDescriptor;
use crate::{Error, Rat, Result};

/// A component up to precomposition with `z ↦ zⁿ`: the pole order is
/// forgotten, the puncture is not.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum QuotientClass {
    ArcClass,
    PunctureClass(PunctureId),
}

impl fmt::Display for QuotientClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuotientClass::ArcClass => f.write_str("Arc"),
            QuotientClass::PunctureClass(p) => write!(f, "Pole punct={p}"),
        }
    }
}

/// Undefined on `A1Connected`: the affine line has a single class.
pub fn quotient_class(c: &ComponentClass) -> Result<QuotientClass> {
    match c {
        ComponentClass::Arc => Ok(QuotientClass::ArcClass),
        ComponentClass::Pole { puncture, .. } => Ok(QuotientClass::PunctureClass(*puncture)),
        ComponentClass::A1Connected { .. } => Err(Error::InvalidArgument(
            "the affine line has one component; it has no quotient class".into(),
        )),
    }
}

/// Number of components modulo the covering action.
pub fn pi0_census(curve: &CurveModel) -> usize {
    match curve.kind() {
        CurveKind::AffineLine => 1,
        _ => 1 + curve.punctures().len(),
    }
}

/// The quotient classes of a curve other than `A1`: the arcs and one class
/// per puncture.
pub fn census_classes(curve: &CurveModel) -> Vec<QuotientClass> {
    if matches!(curve.kind(), CurveKind::AffineLine) {
        return Vec::new();
    }
    std::iter::once(QuotientClass::ArcClass)
        .chain(curve.punctures().into_iter().map(QuotientClass::PunctureClass))
        .collect()
}

/// Per-fibre classes of a ℚ[t] family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyReport {
    /// Class over ℚ(t).
    pub generic: Result<ComponentClass>,
    pub fibers: Vec<(Rat, Result<ComponentClass>)>,
}

impl FamilyReport {
    /// Parameter values whose fibre classifies differently from the generic
    /// fibre. Fibres that fail to classify are not counted.
    pub fn jumps(&self) -> Vec<Rat> {
        let Ok(generic) = &self.generic else {
            return Vec::new();
        };
        self.fibers
            .iter()
            .filter(|(_, c)| c.as_ref().is_ok_and(|c| c != generic))
            .map(|(t, _)| t.clone())
            .collect()
    }

    /// Whether all fibres that classify land in one class.
    pub fn is_constant(&self) -> bool {
        let mut classes = self.fibers.iter().filter_map(|(_, c)| c.as_ref().ok());
        match classes.next() {
            Some(first) => classes.all(|c| c == first),
            None => true,
        }
    }
}

fn classify_fiber(family: &Loop, t: &Rat) -> Result<ComponentClass> {
    let fiber = family.specialize(t)?;
    if !check_on_curve(&fiber)? {
        return Err(Error::NotOnCurve(format!("fibre at t={t}")));
    }
    classify(&fiber)
}

/// A family is a loop over ℚ[t]: on `Gm` the coordinate must be a unit of
/// ℚ[t]((z)), on hyperelliptic curves the equation must hold identically.
fn validate_family(family: &Loop) -> Result<()> {
    match family.curve().kind() {
        CurveKind::AffineLine => Ok(()),
        CurveKind::Gm => match cc_order(family.x()) {
            Ok(_) => Ok(()),
            Err(Error::NotAUnit(_) | Error::NotInvertible(_) | Error::ZeroSeries) => Err(Error::InvalidArgument(
                format!("{} is not a unit over Q[t], so not a family of loops into Gm", family.x()),
            )),
            Err(e) => Err(e),
        },
        CurveKind::Hyperelliptic(_) => {
            if check_on_curve(family)? {
                Ok(())
            } else {
                Err(Error::NotOnCurve(family.to_string()))
            }
        }
    }
}

/// Classifies the fibres `t ∈ t_values` of a family over ℚ[t].
pub fn classify_family(family: &Loop, t_values: &[Rat]) -> Result<FamilyReport> {
    classify_family_with(Strategy::default(), family, t_values)
}

pub fn classify_family_with(
    strategy: Strategy,
    family: &Loop,
    t_values: &[Rat],
) -> Result<FamilyReport> {
    if family.ring() != RingDescriptor::PolyParam {
        return Err(Error::RingMismatch {
            left: family.ring(),
            right: RingDescriptor::PolyParam,
        });
    }
    validate_family(family)?;
    let classes = par::map(strategy, t_values, |t| classify_fiber(family, t));
    Ok(FamilyReport {
        generic: classify(family),
        fibers: t_values.iter().cloned().zip(classes).collect(),
    })
}
