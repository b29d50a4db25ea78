//! Unique factorization of invertible Laurent series.
//!
//! Every invertible `α ∈ A((z))` (for the rings of [`crate::ring`]) factors
//! uniquely as
//!
//! ```text
//! α = α₀ · z^ν · ∏_{i>0} (1 − α₋ᵢ z^{−i}) · ∏_{j>0} (1 − αⱼ z^j)
//! ```
//!
//! with `α₀` a unit, finitely many nonzero `α₋ᵢ`, all of them nilpotent.
//!
//! The factorization runs in three steps:
//!
//! 1. `ν` is the valuation of the reduction of `α`; dividing by the unit
//!    coefficient there and by `z^ν` leaves `u = 1 + (nilpotent polar part)
//!    + (positive part)`.
//! 2. `u` is split as `c · N · P` with `c ∈ 1 + Nil(A)`, `N ∈ 1 + z⁻¹Nil(A)[z⁻¹]`
//!    and `P ∈ 1 + zA[[z]]`. The positive part is divided out first; what
//!    remains is `1 + e` with `e` nilpotent, and each later round peels the
//!    polar, constant and positive parts of `e`, pushing the error into the
//!    next power of the nilradical. With `ε^k = 0` at most `k − 1` rounds are
//!    needed.
//! 3. `N` and `P` are factored greedily into binomials, in increasing `i` and
//!    `j`. Dividing by `1 − a w^i` only creates terms of degree above `i`, so
//!    each coefficient is read off exactly once.

use std::collections::BTreeMap;
use std::fmt;

use crate::ring::{Coeff, RingDescriptor};
use crate::series::{LaurentSeries, Precision};
use crate::{Error, Result};

/// The data `(α₀, ν, {α₋ᵢ}, {αⱼ})` of the factorization.
///
/// `pos` is known for `j < prec` (`prec` counts positive indices, not
/// absolute exponents of `α`); `Precision::Exact` means the positive product
/// is finite and complete.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CCNormalForm {
    pub unit: Coeff,
    pub order: i64,
    pub neg: BTreeMap<i64, Coeff>,
    pub pos: BTreeMap<i64, Coeff>,
    pub prec: Precision,
}

impl CCNormalForm {
    pub fn ring(&self) -> RingDescriptor {
        self.unit.ring()
    }

    /// Checks the structural invariants: unit `α₀`, nilpotent `α₋ᵢ`, positive
    /// indices, no stored zeros.
    pub fn validate(&self) -> Result<()> {
        let ring = self.ring();
        if !self.unit.is_unit() {
            return Err(Error::NotAUnit(self.unit.to_string()));
        }
        for (i, c) in self.neg.iter().chain(self.pos.iter()) {
            ring.ensure_same(c.ring())?;
            if *i <= 0 || c.is_zero() {
                return Err(Error::InvalidArgument(format!(
                    "normal form index {i} must be positive with nonzero coefficient"
                )));
            }
        }
        if let Some((i, c)) = self.neg.iter().find(|(_, c)| !c.is_nilpotent()) {
            return Err(Error::InvalidArgument(format!(
                "polar factor coefficient {c} at index {i} is not nilpotent"
            )));
        }
        Ok(())
    }

    /// Equality with the positive parts compared below the common precision.
    pub fn agrees_with(&self, other: &Self) -> bool {
        if self.unit != other.unit || self.order != other.order || self.neg != other.neg {
            return false;
        }
        let p = self.prec.min(other.prec);
        let a: Vec<_> = self.pos.iter().filter(|(j, _)| p.covers(**j)).collect();
        let b: Vec<_> = other.pos.iter().filter(|(j, _)| p.covers(**j)).collect();
        a == b
    }
}

fn fmt_coeff(c: &Coeff) -> String {
    if c.is_atomic() {
        c.to_string()
    } else {
        format!("({c})")
    }
}

fn fmt_map(m: &BTreeMap<i64, Coeff>) -> String {
    let body: Vec<String> = m
        .iter()
        .map(|(i, c)| format!("{i}: {}", fmt_coeff(c)))
        .collect();
    format!("{{{}}}", body.join(", "))
}

impl fmt::Display for CCNormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "unit={} order={} neg={} pos={}",
            fmt_coeff(&self.unit),
            self.order,
            fmt_map(&self.neg),
            fmt_map(&self.pos)
        )?;
        if let Precision::Finite(n) = self.prec {
            write!(f, " (mod O(z^{n}))")?;
        }
        Ok(())
    }
}

fn nilpotency_order(ring: RingDescriptor) -> u32 {
    match ring {
        RingDescriptor::Nilpotent { order } => order,
        _ => 1,
    }
}

/// `(1 + m)⁻¹ = Σ_{j<k} (−m)^j` for a series `m` with nilpotent coefficients.
fn invert_one_plus_nilpotent(one_plus_m: &LaurentSeries) -> LaurentSeries {
    let ring = one_plus_m.ring();
    let minus_m = LaurentSeries::one(ring).add_unchecked(&one_plus_m.neg());
    let mut acc = LaurentSeries::one(ring);
    let mut power = LaurentSeries::one(ring);
    for _ in 1..nilpotency_order(ring) {
        power = power.mul_unchecked(&minus_m);
        acc = acc.add_unchecked(&power);
    }
    acc
}

/// The leading data `(ν, unit at ν)` of an invertible series.
fn leading_unit(alpha: &LaurentSeries) -> Result<(i64, Coeff)> {
    let order = alpha.valuation().map_err(|e| match e {
        Error::ZeroSeries => Error::NotInvertible("reduction is zero".into()),
        other => other,
    })?;
    let lead = alpha.coeff(order);
    if !lead.is_unit() {
        return Err(Error::NotInvertible(format!(
            "coefficient {lead} at z^{order} is not a unit"
        )));
    }
    Ok((order, lead))
}

/// `u = c · N · P` for `u` normalized to constant term 1.
struct UnitSplit {
    constant: Coeff,
    polar: LaurentSeries,
    positive: LaurentSeries,
    /// `u⁻¹`, the product of the inverses divided out along the way.
    inverse: LaurentSeries,
}

fn split_normalized(u: &LaurentSeries, terms: u32) -> Result<UnitSplit> {
    let ring = u.ring();
    let one = LaurentSeries::one(ring);
    let polar = u.negative_part();
    if polar.is_exact_zero() {
        return Ok(UnitSplit {
            constant: Coeff::one(ring),
            polar: one.clone(),
            positive: u.clone(),
            inverse: u.invert(terms)?,
        });
    }
    let first = one.add_unchecked(&u.positive_part());
    let first_inv = first.invert(terms)?;
    let mut rest = u.mul_unchecked(&first_inv);
    let mut constant = Coeff::one(ring);
    let mut polar = one.clone();
    let mut positive = first;
    let mut inverse = first_inv;

    for _ in 0..nilpotency_order(ring) {
        let e = rest.add_unchecked(&one.neg());
        if e.num_terms() == 0 {
            break;
        }
        if !rest.prec().covers(0) {
            return Err(Error::InsufficientPrecision(
                "constant term lost while separating polar factors".into(),
            ));
        }
        let n = one.add_unchecked(&e.negative_part());
        let c = &Coeff::one(ring) + &e.coeff(0);
        let p = one.add_unchecked(&e.positive_part());
        let step_inv = invert_one_plus_nilpotent(&n)
            .scale(&c.invert()?)?
            .mul_unchecked(&p.invert(terms)?);
        rest = rest.mul_unchecked(&step_inv);
        inverse = inverse.mul_unchecked(&step_inv);
        constant = &constant * &c;
        polar = polar.mul_unchecked(&n);
        positive = positive.mul_unchecked(&p);
    }
    if rest.add_unchecked(&one.neg()).num_terms() != 0 {
        return Err(Error::VerificationFailed(format!(
            "polar splitting did not terminate: residual {rest}"
        )));
    }
    Ok(UnitSplit {
        constant,
        polar,
        positive,
        inverse,
    })
}

/// Greedy binomial factorization of `1 + Σ_{i>0} n_i z^{−i}` (exact, nilpotent
/// coefficients) into `∏ (1 − α₋ᵢ z^{−i})`.
fn factor_polar(polar: &LaurentSeries) -> Result<BTreeMap<i64, Coeff>> {
    let mut cur = polar.clone();
    let mut out = BTreeMap::new();
    let mut i = 1;
    while let Some(lo) = cur.min_exponent().filter(|e| *e < 0) {
        if i > -lo {
            return Err(Error::VerificationFailed(format!(
                "polar factorization left {cur}"
            )));
        }
        let a = -cur.coeff(-i);
        if !a.is_zero() {
            let factor = LaurentSeries::one_minus_monomial(&a, -i);
            cur = cur.mul_unchecked(&invert_one_plus_nilpotent(&factor));
            out.insert(i, a);
        }
        i += 1;
    }
    if !cur.is_exact_one() {
        return Err(Error::VerificationFailed(format!(
            "polar factorization left {cur}"
        )));
    }
    Ok(out)
}

/// Exact quotient of a polynomial by `1 − a z^j`, if the division is exact.
fn exact_binomial_quotient(p: &LaurentSeries, a: &Coeff, j: i64) -> Option<LaurentSeries> {
    let deg = p.max_exponent().unwrap_or(0);
    if deg < j {
        return None;
    }
    let ring = p.ring();
    let mut q: Vec<Coeff> = Vec::with_capacity((deg - j + 1) as usize);
    for m in 0..=deg - j {
        let mut c = p.coeff(m);
        if m >= j {
            c = &c + &(a * &q[(m - j) as usize]);
        }
        q.push(c);
    }
    let quotient = LaurentSeries::new(
        ring,
        q.into_iter().enumerate().map(|(m, c)| (m as i64, c)),
        Precision::Exact,
    )
    .ok()?;
    let back = quotient.mul_unchecked(&LaurentSeries::one_minus_monomial(a, j));
    (back == *p).then_some(quotient)
}

/// `p / (1 − a z^j)` below `prec`, by the recurrence `q_m = p_m + a q_{m−j}`.
fn divide_binomial(p: &LaurentSeries, a: &Coeff, j: i64, prec: i64) -> LaurentSeries {
    let mut q: Vec<Coeff> = Vec::with_capacity(prec.max(0) as usize);
    for m in 0..prec {
        let mut c = p.coeff(m);
        if m >= j {
            c = &c + &(a * &q[(m - j) as usize]);
        }
        q.push(c);
    }
    let prec = p.prec().min(Precision::Finite(prec));
    LaurentSeries::new(p.ring(), q.into_iter().enumerate().map(|(m, c)| (m as i64, c)), prec)
        .expect("same ring")
}

/// Greedy factorization of `1 + Σ_{j>0} p_j z^j` into `∏ (1 − αⱼ z^j)`.
fn factor_positive(
    positive: &LaurentSeries,
    terms: u32,
) -> (BTreeMap<i64, Coeff>, Precision) {
    let mut cur = positive.clone();
    let mut out = BTreeMap::new();
    let mut j = 1;
    loop {
        if cur.is_exact_one() {
            return (out, Precision::Exact);
        }
        if cur.is_exact() && j > terms as i64 {
            cur = cur.truncate(Precision::Finite(terms as i64));
        }
        if !cur.prec().covers(j) {
            return (out, cur.prec());
        }
        let a = -cur.coeff(j);
        if !a.is_zero() {
            cur = match cur.prec() {
                Precision::Exact => exact_binomial_quotient(&cur, &a, j)
                    .unwrap_or_else(|| divide_binomial(&cur, &a, j, terms as i64)),
                Precision::Finite(n) => divide_binomial(&cur, &a, j, n),
            };
            out.insert(j, a);
        }
        j += 1;
    }
}

/// Factors an invertible series. `terms` bounds the expansion of infinite
/// positive products coming from exact inputs.
pub fn cc_factor(alpha: &LaurentSeries, terms: u32) -> Result<CCNormalForm> {
    let (order, lead) = leading_unit(alpha)?;
    let u = alpha.shift(-order).scale(&lead.invert()?)?;
    let split = split_normalized(&u, terms)?;
    let neg = factor_polar(&split.polar)?;
    let (pos, prec) = factor_positive(&split.positive, terms);
    let mut nf = CCNormalForm {
        unit: &lead * &split.constant,
        order,
        neg,
        pos,
        prec,
    };
    // by uniqueness, a candidate that reproduces an exact input exactly is
    // its exact normal form
    if alpha.is_exact() && nf.prec != Precision::Exact {
        let candidate = CCNormalForm {
            prec: Precision::Exact,
            ..nf.clone()
        };
        if cc_reconstruct(&candidate, Precision::Exact)? == *alpha {
            nf = candidate;
        }
    }
    Ok(nf)
}

/// Expands a normal form. The result is truncated at `prec`; pass
/// `Precision::Exact` to keep everything the normal form determines.
pub fn cc_reconstruct(nf: &CCNormalForm, prec: Precision) -> Result<LaurentSeries> {
    nf.validate()?;
    let ring = nf.ring();
    let mut polar = LaurentSeries::one(ring);
    for (i, a) in &nf.neg {
        polar = polar.mul_unchecked(&LaurentSeries::one_minus_monomial(a, -i));
    }
    let mut positive = LaurentSeries::one(ring);
    for (j, a) in nf.pos.iter().filter(|(j, _)| nf.prec.covers(**j)) {
        positive = positive
            .mul_unchecked(&LaurentSeries::one_minus_monomial(a, *j))
            .truncate(nf.prec);
    }
    let out = polar
        .mul_unchecked(&positive)
        .scale(&nf.unit)?
        .shift(nf.order);
    Ok(out.truncate(prec))
}

/// The order `ν` of an invertible series: the valuation of its reduction,
/// after checking that the coefficient there is a unit.
pub fn cc_order(alpha: &LaurentSeries) -> Result<i64> {
    leading_unit(alpha).map(|(order, _)| order)
}

/// Inverse of an invertible series whose low-order coefficients may be
/// nilpotent (where [`LaurentSeries::invert`] refuses).
pub fn invert_unit_series(alpha: &LaurentSeries, terms: u32) -> Result<LaurentSeries> {
    let (order, lead) = leading_unit(alpha)?;
    let lead_inv = lead.invert()?;
    let u = alpha.shift(-order).scale(&lead_inv)?;
    let split = split_normalized(&u, terms)?;
    Ok(split.inverse.scale(&lead_inv)?.shift(-order))
}

/// `α′/α` for any invertible series.
pub fn unit_dlog(alpha: &LaurentSeries, terms: u32) -> Result<LaurentSeries> {
    Ok(alpha
        .derivative()
        .mul_unchecked(&invert_unit_series(alpha, terms)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    const Q: RingDescriptor = RingDescriptor::Rational;
    const K2: RingDescriptor = RingDescriptor::Nilpotent { order: 2 };

    fn q(n: i64) -> Coeff {
        Coeff::Rational(rat(n, 1))
    }

    fn eps(ring: RingDescriptor, n: i64) -> Coeff {
        Coeff::eps(ring).unwrap().mul_int(n)
    }

    fn s(terms: &[(i64, i64)]) -> LaurentSeries {
        LaurentSeries::from_rats(terms.iter().map(|&(e, c)| (e, rat(c, 1))))
    }

    fn nf(unit: Coeff, order: i64, neg: &[(i64, Coeff)], pos: &[(i64, Coeff)], prec: Precision) -> CCNormalForm {
        CCNormalForm {
            unit,
            order,
            neg: neg.iter().cloned().collect(),
            pos: pos.iter().cloned().collect(),
            prec,
        }
    }

    #[test]
    fn z_is_already_normal() {
        assert_eq!(
            cc_factor(&s(&[(1, 1)]), 24).unwrap(),
            nf(q(1), 1, &[], &[], Precision::Exact)
        );
    }

    #[test]
    fn polynomial_with_single_binomial() {
        // 2z² − 6z³ = 2 z² (1 − 3z)
        let f = cc_factor(&s(&[(2, 2), (3, -6)]), 24).unwrap();
        assert_eq!(f, nf(q(2), 2, &[], &[(1, q(3))], Precision::Exact));
        assert_eq!(cc_reconstruct(&f, Precision::Exact).unwrap(), s(&[(2, 2), (3, -6)]));
        assert_eq!(f.to_string(), "unit=2 order=2 neg={} pos={1: 3}");
    }

    #[test]
    fn z_plus_eps_has_a_polar_factor() {
        // z + ε = z (1 − (−ε) z⁻¹)
        let one = Coeff::one(K2);
        let alpha = LaurentSeries::new(K2, [(1, one.clone()), (0, eps(K2, 1))], Precision::Exact).unwrap();
        let f = cc_factor(&alpha, 24).unwrap();
        assert_eq!(f, nf(one, 1, &[(1, eps(K2, -1))], &[], Precision::Exact));
        assert_eq!(cc_reconstruct(&f, Precision::Exact).unwrap(), alpha);
        assert_eq!(cc_order(&alpha).unwrap(), 1);
    }

    #[test]
    fn reconstruct_mixed_factors() {
        // (1 − εz⁻¹)(1 − z) over k=2 = (1+ε) − εz⁻¹ − z
        let one = Coeff::one(K2);
        let form = nf(one.clone(), 0, &[(1, eps(K2, 1))], &[(1, one.clone())], Precision::Exact);
        let got = cc_reconstruct(&form, Precision::Finite(3)).unwrap();
        let expected = LaurentSeries::new(
            K2,
            [
                (-1, eps(K2, -1)),
                (0, &one + &eps(K2, 1)),
                (1, -&one),
            ],
            Precision::Finite(3),
        )
        .unwrap();
        assert_eq!(got, expected);
        assert!(cc_factor(&got, 24).unwrap().agrees_with(&form));
    }

    #[test]
    fn order_examples() {
        assert_eq!(cc_order(&s(&[(-3, 1), (-2, 1)])).unwrap(), -3);
        let one = Coeff::one(K2);
        let a = LaurentSeries::new(K2, [(1, one.clone()), (0, eps(K2, 1))], Precision::Exact).unwrap();
        let b = LaurentSeries::monomial(one, -1);
        let ab = a.mul(&b).unwrap();
        assert_eq!(cc_order(&ab).unwrap(), 0);
    }

    #[test]
    fn non_units_are_rejected() {
        let t = Coeff::param(RingDescriptor::PolyParam).unwrap();
        let f = LaurentSeries::monomial(t, 1);
        assert!(matches!(cc_factor(&f, 24), Err(Error::NotInvertible(_))));
        assert!(matches!(cc_factor(&LaurentSeries::zero(Q), 24), Err(Error::NotInvertible(_))));
        assert!(matches!(
            cc_factor(&LaurentSeries::big_o(Q, 4), 24),
            Err(Error::InsufficientPrecision(_))
        ));
        let only_eps = LaurentSeries::monomial(eps(K2, 1), 0);
        assert!(matches!(cc_factor(&only_eps, 24), Err(Error::NotInvertible(_))));
    }

    #[test]
    fn infinite_positive_product_is_truncated() {
        // 1 + z + z² is not a finite product of binomials
        let f = cc_factor(&s(&[(0, 1), (1, 1), (2, 1)]), 8).unwrap();
        assert_eq!(f.prec, Precision::Finite(8));
        let back = cc_reconstruct(&f, Precision::Exact).unwrap();
        assert!(back.agrees_with(&s(&[(0, 1), (1, 1), (2, 1)])));
    }

    #[test]
    fn nilpotent_inverse_and_dlog() {
        let k3 = RingDescriptor::Nilpotent { order: 3 };
        let one = Coeff::one(k3);
        // α = z² + ε z³ + 3 z⁴ + ε² z⁻³ + O(z^40)
        let alpha = LaurentSeries::new(
            k3,
            [(2, one.clone()), (3, eps(k3, 1)), (4, one.mul_int(3)), (-3, eps(k3, 1).pow(2))],
            Precision::Finite(40),
        )
        .unwrap();
        let inv = invert_unit_series(&alpha, 40).unwrap();
        let prod = alpha.mul(&inv).unwrap();
        assert!(prod.is_one_up_to_precision(), "{inv} / {prod}");
        let r = unit_dlog(&alpha, 40).unwrap().residue().unwrap();
        assert_eq!(r, Coeff::from_int(k3, 2));
    }
}
