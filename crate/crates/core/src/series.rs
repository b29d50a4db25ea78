//! Truncated formal Laurent series over the coefficient rings of [`crate::ring`].
//!
//! A [`LaurentSeries`] stores finitely many nonzero coefficients together with
//! a [`Precision`]: `Finite(N)` means every coefficient of exponent `< N` is
//! known (absent ones are zero) and nothing is known from `N` on; `Exact`
//! means the series is a Laurent polynomial.
//!
//! Precision rules, all of which are conservative and exact:
//!
//! * sum: `min(prec f, prec g)`
//! * product: `min(prec f + ord g, prec g + ord f)` where `ord` is the lowest
//!   stored exponent (or the precision itself when nothing is stored)
//! * reciprocal of `c z^v (1 + …) + O(z^N)`: `N − 2v`, additionally capped at
//!   `terms` coefficients past `−v` (the cap is what makes exact inputs finite)
//! * derivative: `N − 1`
//! * covering `z ↦ z^n`: `n·N`
//! * substitution `f(g)` with `ord g = v ≥ 1`: at most `N_f · v`

use std::collections::BTreeMap;
use std::fmt;

use crate::ring::{Coeff, RingDescriptor};
use crate::{Error, Rat, Result};

/// Absolute precision of a truncated series. `Exact` compares above every
/// finite value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Precision {
    Finite(i64),
    Exact,
}

impl Precision {
    pub fn finite(self) -> Option<i64> {
        match self {
            Precision::Finite(n) => Some(n),
            Precision::Exact => None,
        }
    }

    pub fn is_exact(self) -> bool {
        self == Precision::Exact
    }

    pub fn shift(self, by: i64) -> Precision {
        match self {
            Precision::Finite(n) => Precision::Finite(n + by),
            Precision::Exact => Precision::Exact,
        }
    }

    /// Whether the coefficient at `exp` is known.
    pub fn covers(self, exp: i64) -> bool {
        match self {
            Precision::Finite(n) => exp < n,
            Precision::Exact => true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn sign(self) -> i64 {
        match self {
            Branch::Plus => 1,
            Branch::Minus => -1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentSeries {
    ring: RingDescriptor,
    terms: BTreeMap<i64, Coeff>,
    prec: Precision,
}

impl LaurentSeries {
    /// Builds a canonical series: zero coefficients and coefficients at or
    /// beyond the precision are dropped.
    pub fn new(
        ring: RingDescriptor,
        terms: impl IntoIterator<Item = (i64, Coeff)>,
        prec: Precision,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (e, c) in terms {
            ring.ensure_same(c.ring())?;
            if !prec.covers(e) {
                continue;
            }
            let entry = map.entry(e).or_insert_with(|| Coeff::zero(ring));
            *entry = &*entry + &c;
        }
        map.retain(|_, c: &mut Coeff| !c.is_zero());
        Ok(LaurentSeries {
            ring,
            terms: map,
            prec,
        })
    }

    fn from_map(ring: RingDescriptor, mut terms: BTreeMap<i64, Coeff>, prec: Precision) -> Self {
        terms.retain(|e, c| !c.is_zero() && prec.covers(*e));
        LaurentSeries { ring, terms, prec }
    }

    pub fn zero(ring: RingDescriptor) -> Self {
        Self::from_map(ring, BTreeMap::new(), Precision::Exact)
    }

    pub fn one(ring: RingDescriptor) -> Self {
        Self::constant(Coeff::one(ring))
    }

    pub fn constant(c: Coeff) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: Coeff, exp: i64) -> Self {
        let ring = c.ring();
        Self::from_map(ring, BTreeMap::from([(exp, c)]), Precision::Exact)
    }

    /// The uniformizer `z`.
    pub fn z(ring: RingDescriptor) -> Self {
        Self::monomial(Coeff::one(ring), 1)
    }

    /// The unknown tail `O(z^n)`.
    pub fn big_o(ring: RingDescriptor, n: i64) -> Self {
        Self::from_map(ring, BTreeMap::new(), Precision::Finite(n))
    }

    /// An exact series over ℚ from `(exponent, value)` pairs.
    pub fn from_rats(terms: impl IntoIterator<Item = (i64, Rat)>) -> Self {
        let ring = RingDescriptor::Rational;
        Self::new(
            ring,
            terms.into_iter().map(|(e, q)| (e, Coeff::Rational(q))),
            Precision::Exact,
        )
        .expect("rational coefficients")
    }

    pub fn ring(&self) -> RingDescriptor {
        self.ring
    }

    pub fn prec(&self) -> Precision {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec.is_exact()
    }

    /// Stored (nonzero, certified) coefficients in ascending exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &Coeff)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Coefficient at `exp`, or `None` when it lies beyond the precision.
    pub fn get(&self, exp: i64) -> Option<Coeff> {
        self.prec.covers(exp).then(|| {
            self.terms
                .get(&exp)
                .cloned()
                .unwrap_or_else(|| Coeff::zero(self.ring))
        })
    }

    /// Coefficient at `exp`, treating unknown coefficients as zero.
    pub fn coeff(&self, exp: i64) -> Coeff {
        self.terms
            .get(&exp)
            .cloned()
            .unwrap_or_else(|| Coeff::zero(self.ring))
    }

    pub fn min_exponent(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exponent(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn leading(&self) -> Option<(i64, &Coeff)> {
        self.terms.iter().next().map(|(e, c)| (*e, c))
    }

    /// Exactly zero (as opposed to `O(z^N)`).
    pub fn is_exact_zero(&self) -> bool {
        self.terms.is_empty() && self.is_exact()
    }

    pub fn is_exact_one(&self) -> bool {
        *self == Self::one(self.ring)
    }

    /// Lower bound for the order of the series: the lowest stored exponent,
    /// or the precision when nothing is stored. `None` for exact zero.
    fn order_bound(&self) -> Option<i64> {
        self.min_exponent().or(self.prec.finite())
    }

    /// Lowers the precision to `prec` (never raises it).
    pub fn truncate(&self, prec: Precision) -> Self {
        let p = self.prec.min(prec);
        Self::from_map(self.ring, self.terms.clone(), p)
    }

    /// Multiplication by `z^k`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentSeries {
            ring: self.ring,
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
            prec: self.prec.shift(k),
        }
    }

    pub fn scale(&self, c: &Coeff) -> Result<Self> {
        self.ring.ensure_same(c.ring())?;
        Ok(self.map_coeffs(|a| a * c))
    }

    pub fn scale_rat(&self, q: &Rat) -> Self {
        self.map_coeffs(|a| a.scale(q))
    }

    fn map_coeffs(&self, f: impl Fn(&Coeff) -> Coeff) -> Self {
        Self::from_map(
            self.ring,
            self.terms.iter().map(|(e, c)| (*e, f(c))).collect(),
            self.prec,
        )
    }

    /// Positive-exponent, zero-exponent and negative-exponent parts, each
    /// exact except the positive part, which keeps the precision.
    fn split_part(&self, keep: impl Fn(i64) -> bool, prec: Precision) -> Self {
        Self::from_map(
            self.ring,
            self.terms
                .iter()
                .filter(|(e, _)| keep(**e))
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
            prec,
        )
    }

    pub fn negative_part(&self) -> Self {
        self.split_part(|e| e < 0, Precision::Exact)
    }

    pub fn positive_part(&self) -> Self {
        self.split_part(|e| e > 0, self.prec)
    }

    // ---- arithmetic ----

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.ring.ensure_same(other.ring)?;
        Ok(self.add_unchecked(other))
    }

    pub(crate) fn add_unchecked(&self, other: &Self) -> Self {
        let prec = self.prec.min(other.prec);
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            let entry = terms.entry(*e).or_insert_with(|| Coeff::zero(self.ring));
            *entry = &*entry + c;
        }
        Self::from_map(self.ring, terms, prec)
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| -c)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.ring.ensure_same(other.ring)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        if self.is_exact_zero() || other.is_exact_zero() {
            return Self::zero(self.ring);
        }
        let of = self.order_bound().expect("nonzero");
        let og = other.order_bound().expect("nonzero");
        let prec = self.prec.shift(og).min(other.prec.shift(of));
        let mut terms: BTreeMap<i64, Coeff> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e = e1 + e2;
                if !prec.covers(e) {
                    continue;
                }
                let prod = c1 * c2;
                match terms.get_mut(&e) {
                    Some(acc) => *acc = &*acc + &prod,
                    None => {
                        terms.insert(e, prod);
                    }
                }
            }
        }
        Self::from_map(self.ring, terms, prec)
    }

    /// Valuation of the reduction modulo the nilradical (the ordinary
    /// valuation over ℚ and ℚ[t]).
    pub fn valuation(&self) -> Result<i64> {
        if let Some((e, _)) = self.terms.iter().find(|(_, c)| !c.is_nilpotent()) {
            return Ok(*e);
        }
        if self.is_exact() {
            Err(Error::ZeroSeries)
        } else {
            Err(Error::InsufficientPrecision(format!(
                "no coefficient with nonzero reduction below z^{}",
                self.prec.finite().unwrap_or_default()
            )))
        }
    }

    /// Multiplicative inverse. The lowest stored coefficient must be a unit;
    /// series whose lower terms are nilpotent are handled by
    /// [`crate::ccnf::invert_unit_series`].
    ///
    /// `terms` caps the number of computed coefficients past the leading
    /// exponent of the result; an exact monomial inverts exactly.
    pub fn invert(&self, terms: u32) -> Result<Self> {
        let Some((v, c)) = self.leading() else {
            return Err(if self.is_exact() {
                Error::NotInvertible("zero series".into())
            } else {
                Error::InsufficientPrecision(format!(
                    "O(z^{}) has no certified leading term",
                    self.prec.finite().unwrap_or_default()
                ))
            });
        };
        if !c.is_unit() {
            return Err(Error::NotInvertible(format!(
                "leading coefficient {c} at z^{v} is not a unit"
            )));
        }
        let c_inv = c.invert()?;
        if self.is_exact() && self.terms.len() == 1 {
            return Ok(Self::monomial(c_inv, -v));
        }
        // self = c z^v (1 + h), h known below relative exponent prec - v.
        let h = self.shift(-v).map_coeffs(|a| a * &c_inv);
        let mut len = terms as i64;
        if let Some(n) = self.prec.finite() {
            len = len.min(n - v);
        }
        let len = len.max(0) as usize;
        let mut b: Vec<Coeff> = Vec::with_capacity(len);
        for n in 0..len {
            if n == 0 {
                b.push(Coeff::one(self.ring));
                continue;
            }
            let mut acc = Coeff::zero(self.ring);
            for (i, hi) in h.terms.range(1..=n as i64) {
                acc = &acc + &(hi * &b[n - *i as usize]);
            }
            b.push(-acc);
        }
        Ok(Self::from_map(
            self.ring,
            b.into_iter()
                .enumerate()
                .map(|(n, bn)| (n as i64 - v, &bn * &c_inv))
                .collect(),
            Precision::Finite(len as i64 - v),
        ))
    }

    pub fn derivative(&self) -> Self {
        Self::from_map(
            self.ring,
            self.terms
                .iter()
                .map(|(e, c)| (e - 1, c.mul_int(*e)))
                .collect(),
            self.prec.shift(-1),
        )
    }

    /// Logarithmic derivative `f′/f`.
    pub fn dlog(&self, terms: u32) -> Result<Self> {
        let inv = self.invert(terms)?;
        Ok(self.derivative().mul_unchecked(&inv))
    }

    /// Coefficient of `z^{-1}`.
    pub fn residue(&self) -> Result<Coeff> {
        self.get(-1).ok_or_else(|| {
            Error::InsufficientPrecision(format!(
                "residue needs precision at least 0, have {}",
                self.prec.finite().unwrap_or_default()
            ))
        })
    }

    /// Pre-composition with the cover `z ↦ z^n`.
    pub fn covering(&self, n: u32) -> Self {
        assert!(n >= 1, "covering degree must be positive");
        let n = n as i64;
        LaurentSeries {
            ring: self.ring,
            terms: self.terms.iter().map(|(e, c)| (e * n, c.clone())).collect(),
            prec: match self.prec {
                Precision::Finite(p) => Precision::Finite(p * n),
                Precision::Exact => Precision::Exact,
            },
        }
    }

    /// Integer power; negative exponents go through [`Self::invert`].
    pub fn pow(&self, n: i64, terms: u32) -> Result<Self> {
        let base = if n < 0 {
            self.invert(terms)?
        } else {
            self.clone()
        };
        let mut acc = Self::one(self.ring);
        for _ in 0..n.unsigned_abs() {
            acc = acc.mul_unchecked(&base);
        }
        Ok(acc)
    }

    /// Composition `f(g(z))`.
    ///
    /// For a truncated `f` the inner series must have a unit leading
    /// coefficient at a positive exponent; an exact `f` only needs `g`
    /// invertible when `f` has negative exponents.
    pub fn substitute(&self, g: &Self, terms: u32) -> Result<Self> {
        self.ring.ensure_same(g.ring)?;
        if self.is_exact_zero() {
            return Ok(self.clone());
        }
        let tail = match self.prec {
            Precision::Exact => Precision::Exact,
            Precision::Finite(n) => match g.leading() {
                Some((v, c)) if v >= 1 && c.is_unit() => Precision::Finite(n * v),
                _ => return Err(Error::SubstituteDiverges),
            },
        };
        let lo = self.min_exponent().unwrap_or(0).min(0);
        let hi = self.max_exponent().unwrap_or(0).max(0);
        let mut acc = Self::zero(self.ring).truncate(tail);
        if lo < 0 {
            let g_inv = g.invert(terms)?;
            let mut power = Self::one(self.ring);
            for e in (lo..0).rev() {
                power = power.mul_unchecked(&g_inv);
                acc = acc.add_unchecked(&power.scale(&self.coeff(e))?);
            }
        }
        let mut power = Self::one(self.ring);
        for e in 0..=hi {
            if e > 0 {
                power = power.mul_unchecked(g);
            }
            let c = self.coeff(e);
            if !c.is_zero() {
                acc = acc.add_unchecked(&power.scale(&c)?);
            }
        }
        Ok(acc)
    }

    /// Evaluates every ℚ[t] coefficient at `t = t0`.
    pub fn specialize(&self, t0: &Rat) -> Result<Self> {
        if self.ring != RingDescriptor::PolyParam {
            return Err(Error::RingMismatch {
                left: self.ring,
                right: RingDescriptor::PolyParam,
            });
        }
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            terms.insert(*e, c.specialize(t0)?);
        }
        Ok(Self::from_map(RingDescriptor::Rational, terms, self.prec))
    }

    /// Square root with the leading coefficient's root chosen by `branch`.
    ///
    /// The leading coefficient must be a unit with a square root in the ring
    /// and the leading exponent must be even. Exact zero has root zero.
    pub fn sqrt(&self, branch: Branch, terms: u32) -> Result<Self> {
        if self.is_exact_zero() {
            return Ok(self.clone());
        }
        let Some((v, c)) = self.leading() else {
            return Err(Error::InsufficientPrecision(
                "square root of O(z^N) with no certified terms".into(),
            ));
        };
        if !c.is_unit() {
            return Err(Error::NotInvertible(format!(
                "leading coefficient {c} is not a unit"
            )));
        }
        if v % 2 != 0 {
            return Err(Error::OddValuation(v));
        }
        let root = c
            .sqrt_unit()
            .ok_or_else(|| Error::NoRationalSquareRoot(c.to_string()))?;
        let root = root.mul_int(branch.sign());
        let c_inv = c.invert()?;
        let g = self.shift(-v).map_coeffs(|a| a * &c_inv);
        let mut len = terms as i64;
        if let Some(n) = g.prec.finite() {
            len = len.min(n);
        }
        let len = len.max(0) as usize;
        let half = Rat::new(1.into(), 2.into());
        let mut s: Vec<Coeff> = Vec::with_capacity(len);
        for n in 0..len {
            if n == 0 {
                s.push(Coeff::one(self.ring));
                continue;
            }
            // Σ_{0<i<n} sᵢ s_{n−i}, each symmetric pair once
            let mut cross = Coeff::zero(self.ring);
            for i in 1..n.div_ceil(2) {
                cross = &cross + &(&s[i] * &s[n - i]);
            }
            let mut acc = &g.coeff(n as i64) - &cross.mul_int(2);
            if n % 2 == 0 {
                acc = &acc - &(&s[n / 2] * &s[n / 2]);
            }
            s.push(acc.scale(&half));
        }
        let half_v = v / 2;
        let mut out = Self::from_map(
            self.ring,
            s.into_iter()
                .enumerate()
                .map(|(n, sn)| (n as i64 + half_v, &sn * &root))
                .collect(),
            Precision::Finite(len as i64 + half_v),
        );
        if self.is_exact() {
            let candidate = Self::from_map(self.ring, out.terms.clone(), Precision::Exact);
            if candidate.mul_unchecked(&candidate) == *self {
                out = candidate;
            }
        }
        Ok(out)
    }

    /// Equality of all coefficients below the common precision.
    pub fn agrees_with(&self, other: &Self) -> bool {
        if self.ring != other.ring {
            return false;
        }
        let p = self.prec.min(other.prec);
        let a: Vec<_> = self.terms.iter().filter(|(e, _)| p.covers(**e)).collect();
        let b: Vec<_> = other.terms.iter().filter(|(e, _)| p.covers(**e)).collect();
        a == b
    }

    /// Whether the series certainly has no negative-exponent terms.
    ///
    /// Works on the reduction: a series whose polar part is nilpotent counts
    /// as a pole over nilpotent rings only through its reduced valuation.
    pub fn is_holomorphic(&self) -> Result<bool> {
        match self.terms.iter().find(|(_, c)| !c.is_nilpotent()) {
            Some((e, _)) if *e < 0 => Ok(false),
            _ if self.prec.covers(-1) => Ok(true),
            _ => Err(Error::InsufficientPrecision(
                "cannot certify absence of poles".into(),
            )),
        }
    }
}

fn monomial_str(exp: i64) -> String {
    match exp {
        0 => String::new(),
        1 => "z".to_string(),
        e => format!("z^{e}"),
    }
}

impl fmt::Display for LaurentSeries {
    /// Ascending exponents, `c*z^e` terms, compound coefficients in
    /// parentheses, and a trailing `O(z^N)` for truncated series.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in &self.terms {
            let (negative, mag) = if c.is_negative_atom() {
                (true, -c)
            } else {
                (false, c.clone())
            };
            if first {
                if negative {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if negative { " - " } else { " + " })?;
            }
            first = false;
            let mono = monomial_str(*e);
            let coeff = if mag.is_atomic() {
                mag.to_string()
            } else {
                format!("({mag})")
            };
            if mono.is_empty() {
                f.write_str(&coeff)?;
            } else if mag.is_one() {
                f.write_str(&mono)?;
            } else {
                write!(f, "{coeff}*{mono}")?;
            }
        }
        match self.prec {
            Precision::Exact if first => f.write_str("0"),
            Precision::Exact => Ok(()),
            Precision::Finite(n) if first => write!(f, "O(z^{n})"),
            Precision::Finite(n) => write!(f, " + O(z^{n})"),
        }
    }
}

/// Convenience: the rational series `Σ coeffs[i] z^{start+i}` truncated at
/// `prec` (or exact).
pub fn rational_series(start: i64, coeffs: &[Rat], prec: Precision) -> LaurentSeries {
    LaurentSeries::new(
        RingDescriptor::Rational,
        coeffs
            .iter()
            .enumerate()
            .map(|(i, q)| (start + i as i64, Coeff::Rational(q.clone()))),
        prec,
    )
    .expect("rational")
}

impl LaurentSeries {
    /// The constant coefficient as a rational, when the series lives over ℚ.
    pub fn rational_coeff(&self, exp: i64) -> Option<Rat> {
        match self.coeff(exp) {
            Coeff::Rational(q) => Some(q),
            _ => None,
        }
    }

    pub fn is_one_up_to_precision(&self) -> bool {
        self.agrees_with(&Self::one(self.ring))
    }

    pub(crate) fn one_minus_monomial(c: &Coeff, exp: i64) -> Self {
        let ring = c.ring();
        let mut terms = BTreeMap::from([(0, Coeff::one(ring))]);
        terms.insert(exp, -c);
        Self::from_map(ring, terms, Precision::Exact)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;
    use crate::poly::QPoly;
    use crate::rat;
    use proptest::prelude::*;

    const Q: RingDescriptor = RingDescriptor::Rational;
    const K2: RingDescriptor = RingDescriptor::Nilpotent { order: 2 };

    fn s(terms: &[(i64, i64)]) -> LaurentSeries {
        LaurentSeries::from_rats(terms.iter().map(|&(e, c)| (e, rat(c, 1))))
    }

    fn sp(terms: &[(i64, i64)], prec: i64) -> LaurentSeries {
        s(terms).truncate(Precision::Finite(prec))
    }

    fn t_series(terms: &[(i64, &[i64])]) -> LaurentSeries {
        LaurentSeries::new(
            RingDescriptor::PolyParam,
            terms
                .iter()
                .map(|(e, cs)| (*e, Coeff::Poly(QPoly::from_ints(cs)))),
            Precision::Exact,
        )
        .unwrap()
    }

    fn eps_series(terms: &[(i64, &[i64])], ring: RingDescriptor) -> LaurentSeries {
        LaurentSeries::new(
            ring,
            terms.iter().map(|(e, cs)| {
                let mut v: Vec<Rat> = cs.iter().map(|&c| rat(c, 1)).collect();
                v.resize(match ring {
                    RingDescriptor::Nilpotent { order } => order as usize,
                    _ => unreachable!(),
                }, Rat::zero());
                (*e, Coeff::Nilpotent(v))
            }),
            Precision::Exact,
        )
        .unwrap()
    }

    #[test]
    fn addition_examples() {
        assert_eq!(s(&[(-1, 1), (0, 1)]).add(&s(&[(-1, -1), (1, 1)])).unwrap(), s(&[(0, 1), (1, 1)]));
        assert_eq!(sp(&[(0, 1)], 3).add(&s(&[(3, 1)])).unwrap(), sp(&[(0, 1)], 3));
        let fam = t_series(&[(1, &[1]), (-1, &[0, 1])]);
        let minus_z = t_series(&[(1, &[-1])]);
        assert_eq!(fam.add(&minus_z).unwrap(), t_series(&[(-1, &[0, 1])]));
    }

    #[test]
    fn multiplication_examples() {
        assert_eq!(s(&[(2, 1)]).mul(&s(&[(-2, 1)])).unwrap(), s(&[(0, 1)]));
        assert_eq!(
            sp(&[(0, 1), (1, 1)], 2).mul(&sp(&[(0, 1), (1, -1)], 2)).unwrap(),
            sp(&[(0, 1)], 2)
        );
        assert_eq!(
            s(&[(0, 1), (1, -3)]).mul(&s(&[(2, 2)])).unwrap(),
            s(&[(2, 2), (3, -6)])
        );
    }

    #[test]
    fn inversion_examples() {
        assert_eq!(s(&[(1, 1)]).invert(24).unwrap(), s(&[(-1, 1)]));
        assert_eq!(
            s(&[(0, 1), (1, -1)]).invert(4).unwrap(),
            sp(&[(0, 1), (1, 1), (2, 1), (3, 1)], 4)
        );
        // (2z² − 6z³ + O(z⁵))⁻¹ = ½z⁻² + 3/2 z⁻¹ + 9/2 + O(z)
        let f = sp(&[(2, 2), (3, -6)], 5);
        let inv = f.invert(24).unwrap();
        let expected = rational_series(-2, &[rat(1, 2), rat(3, 2), rat(9, 2)], Precision::Finite(1));
        assert_eq!(inv, expected);
        // multiply back: 1 + O(z³)
        assert_eq!(f.mul(&inv).unwrap(), sp(&[(0, 1)], 3));
    }

    #[test]
    fn inversion_errors() {
        assert!(matches!(
            LaurentSeries::big_o(Q, 5).invert(24),
            Err(Error::InsufficientPrecision(_))
        ));
        assert!(matches!(LaurentSeries::zero(Q).invert(24), Err(Error::NotInvertible(_))));
        // z + ε: the lowest coefficient ε is not a unit
        let f = eps_series(&[(0, &[0, 1]), (1, &[1])], K2);
        assert!(matches!(f.invert(24), Err(Error::NotInvertible(_))));
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(s(&[(-3, 1), (1, 1)]).valuation().unwrap(), -3);
        let f = eps_series(&[(-1, &[0, 1]), (1, &[1])], K2);
        assert_eq!(f.valuation().unwrap(), 1);
        assert!(matches!(
            LaurentSeries::big_o(Q, 5).valuation(),
            Err(Error::InsufficientPrecision(_))
        ));
        assert_eq!(LaurentSeries::zero(Q).valuation(), Err(Error::ZeroSeries));
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(s(&[(2, 1)]).derivative(), s(&[(1, 2)]));
        assert_eq!(s(&[(-1, 1)]).derivative(), s(&[(-2, -1)]));
        assert_eq!(sp(&[(0, 1), (1, 1)], 3).derivative(), sp(&[(0, 1)], 2));
    }

    #[test]
    fn dlog_examples() {
        assert_eq!(s(&[(1, 1)]).dlog(24).unwrap(), s(&[(-1, 1)]));
        assert_eq!(s(&[(3, 1)]).dlog(24).unwrap(), s(&[(-1, 3)]));
        assert_eq!(
            s(&[(0, 1), (1, -1)]).dlog(3).unwrap(),
            sp(&[(0, -1), (1, -1), (2, -1)], 3)
        );
    }

    #[test]
    fn residue_examples() {
        assert_eq!(s(&[(-1, 1)]).residue().unwrap(), Coeff::Rational(rat(1, 1)));
        assert!(s(&[(0, 5), (2, 1)]).residue().unwrap().is_zero());
        assert_eq!(
            s(&[(3, 1)]).dlog(24).unwrap().residue().unwrap(),
            Coeff::Rational(rat(3, 1))
        );
        assert!(LaurentSeries::big_o(Q, -1).residue().is_err());
        assert!(LaurentSeries::big_o(Q, 0).residue().unwrap().is_zero());
    }

    #[test]
    fn covering_examples() {
        let f = s(&[(-1, 1), (1, 1)]);
        assert_eq!(f.covering(2), s(&[(-2, 1), (2, 1)]));
        assert_eq!(f.covering(1), f);
        assert_eq!(s(&[(3, 2)]).covering(4).valuation().unwrap(), 12);
        assert_eq!(sp(&[(-1, 1)], 2).covering(3).prec(), Precision::Finite(6));
    }

    #[test]
    fn substitution_examples() {
        assert_eq!(s(&[(2, 1)]).substitute(&s(&[(3, 1)]), 24).unwrap(), s(&[(6, 1)]));
        assert_eq!(
            sp(&[(0, 1), (1, 1)], 2).substitute(&s(&[(1, 2)]), 24).unwrap(),
            sp(&[(0, 1), (1, 2)], 2)
        );
        // z⁻¹ ∘ z(1 − z) = z⁻¹ + 1 + O(z) with two terms of the inverse
        assert_eq!(
            s(&[(-1, 1)]).substitute(&s(&[(1, 1), (2, -1)]), 2).unwrap(),
            sp(&[(-1, 1), (0, 1)], 1)
        );
        assert_eq!(
            sp(&[(0, 1)], 3).substitute(&s(&[(0, 1), (1, 1)]), 24),
            Err(Error::SubstituteDiverges)
        );
    }

    #[test]
    fn specialization_examples() {
        let fam = t_series(&[(1, &[1]), (-1, &[0, 1])]);
        assert_eq!(fam.specialize(&rat(0, 1)).unwrap(), s(&[(1, 1)]));
        assert_eq!(fam.specialize(&rat(1, 1)).unwrap(), s(&[(-1, 1), (1, 1)]));
        let tz = t_series(&[(1, &[0, 1])]);
        assert!(tz.specialize(&rat(0, 1)).unwrap().is_exact_zero());
        assert!(s(&[(1, 1)]).specialize(&rat(0, 1)).is_err());
    }

    #[test]
    fn square_roots() {
        // √(1 + z⁶) = 1 + ½z⁶ − ⅛z¹² + …
        let g = s(&[(0, 1), (6, 1)]);
        let r = g.sqrt(Branch::Plus, 13).unwrap();
        assert_eq!(
            r,
            rational_series(0, &[
                rat(1, 1), rat(0, 1), rat(0, 1), rat(0, 1), rat(0, 1), rat(0, 1), rat(1, 2),
                rat(0, 1), rat(0, 1), rat(0, 1), rat(0, 1), rat(0, 1), rat(-1, 8),
            ], Precision::Finite(13))
        );
        assert!(r.mul(&r).unwrap().agrees_with(&g));
        // exact squares come back exact
        let sq = s(&[(-2, 1), (0, 2), (2, 1)]); // (z⁻¹ + z)²
        assert_eq!(sq.sqrt(Branch::Minus, 24).unwrap(), s(&[(-1, -1), (1, -1)]));
        assert_eq!(s(&[(1, 1)]).sqrt(Branch::Plus, 4), Err(Error::OddValuation(1)));
        assert!(matches!(s(&[(0, 2)]).sqrt(Branch::Plus, 4), Err(Error::NoRationalSquareRoot(_))));
    }

    #[test]
    fn display_forms() {
        assert_eq!(sp(&[(-1, 1), (1, 2)], 5).to_string(), "z^-1 + 2*z + O(z^5)");
        assert_eq!(s(&[(2, 2), (3, -6)]).to_string(), "2*z^2 - 6*z^3");
        assert_eq!(s(&[(0, -1)]).to_string(), "-1");
        assert_eq!(LaurentSeries::zero(Q).to_string(), "0");
        assert_eq!(LaurentSeries::big_o(Q, 3).to_string(), "O(z^3)");
        let fam = t_series(&[(1, &[1]), (-1, &[0, 1])]);
        assert_eq!(fam.to_string(), "t*z^-1 + z");
        let n = eps_series(&[(0, &[1, 1]), (-1, &[0, -1])], K2);
        assert_eq!(n.to_string(), "-eps*z^-1 + (1 + eps)");
    }

    fn arb_laurent() -> impl Strategy<Value = LaurentSeries> {
        (-4i64..=3, proptest::collection::vec(-5i64..=5, 1..6), 1i64..=4)
            .prop_map(|(start, cs, lead)| {
                let mut coeffs: Vec<Rat> = cs.into_iter().map(|c| rat(c, 1)).collect();
                coeffs[0] = rat(lead, 1);
                rational_series(start, &coeffs, Precision::Exact)
            })
    }

    fn arb_truncated() -> impl Strategy<Value = LaurentSeries> {
        (arb_laurent(), 2i64..10).prop_map(|(f, extra)| {
            let v = f.valuation().unwrap();
            f.truncate(Precision::Finite(v + extra))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn valuation_is_additive(f in arb_laurent(), g in arb_laurent()) {
            let fg = f.mul(&g).unwrap();
            prop_assert_eq!(fg.valuation().unwrap(), f.valuation().unwrap() + g.valuation().unwrap());
        }

        #[test]
        fn residue_of_derivative_vanishes(f in arb_truncated()) {
            let d = f.derivative();
            if d.prec().covers(-1) {
                prop_assert!(d.residue().unwrap().is_zero());
            }
        }

        #[test]
        fn residue_of_dlog_is_valuation(f in arb_laurent()) {
            let r = f.dlog(24).unwrap().residue().unwrap();
            prop_assert_eq!(r, Coeff::from_int(Q, f.valuation().unwrap()));
        }

        #[test]
        fn covering_is_a_monoid_action(f in arb_truncated(), m in 1u32..4, n in 1u32..4) {
            prop_assert_eq!(f.covering(m).covering(n), f.covering(m * n));
            prop_assert_eq!(f.covering(1), f);
        }

        #[test]
        fn dlog_is_additive(f in arb_laurent(), g in arb_laurent()) {
            let lhs = f.mul(&g).unwrap().dlog(12).unwrap();
            let rhs = f.dlog(12).unwrap().add(&g.dlog(12).unwrap()).unwrap();
            prop_assert!(lhs.agrees_with(&rhs));
        }

        #[test]
        fn substituting_a_power_is_covering(f in arb_laurent(), n in 1u32..4) {
            let zn = LaurentSeries::monomial(Coeff::one(Q), n as i64);
            prop_assert_eq!(f.substitute(&zn, 24).unwrap(), f.covering(n));
        }

        #[test]
        fn inverse_multiplies_to_one(f in arb_truncated()) {
            let inv = f.invert(24).unwrap();
            prop_assert!(f.mul(&inv).unwrap().is_one_up_to_precision());
        }
    }
}
