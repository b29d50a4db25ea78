//! Exact coefficient rings.
//!
//! Three rings are supported: the rationals ℚ, the nilpotent extensions
//! ℚ[ε]/(ε^k) with k ≥ 2, and the polynomial ring ℚ[t] used for
//! one-parameter families of loops. Every [`Coeff`] knows which ring it lives
//! in; mixing rings is reported as [`Error::RingMismatch`].
//!
//! The operator impls on `&Coeff` panic on mismatched rings. They are meant
//! for code that has already validated its inputs (the series arithmetic
//! does this once per operation); the checked entry points are
//! [`coeff_arith`], [`coeff_invert`] and friends.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::poly::QPoly;
use crate::{Error, Rat, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RingDescriptor {
    Rational,
    /// ℚ[ε]/(ε^order), `order >= 2`.
    Nilpotent { order: u32 },
    PolyParam,
}

impl RingDescriptor {
    pub fn nilpotent(order: u32) -> Result<Self> {
        if order < 2 {
            return Err(Error::InvalidArgument(format!(
                "nilpotency order must be at least 2, got {order}"
            )));
        }
        Ok(RingDescriptor::Nilpotent { order })
    }

    pub fn ensure_same(self, other: RingDescriptor) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::RingMismatch {
                left: self,
                right: other,
            })
        }
    }
}

impl fmt::Display for RingDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingDescriptor::Rational => f.write_str("rational"),
            RingDescriptor::Nilpotent { order } => write!(f, "nilpotent:{order}"),
            RingDescriptor::PolyParam => f.write_str("poly"),
        }
    }
}

/// An element of one of the coefficient rings.
///
/// Nilpotent elements always carry exactly `order` components
/// `c₀ + c₁ε + … + c_{k-1}ε^{k-1}`, so derived equality is ring equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Coeff {
    Rational(Rat),
    Nilpotent(Vec<Rat>),
    Poly(QPoly),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

impl Coeff {
    pub fn ring(&self) -> RingDescriptor {
        match self {
            Coeff::Rational(_) => RingDescriptor::Rational,
            Coeff::Nilpotent(v) => RingDescriptor::Nilpotent {
                order: v.len() as u32,
            },
            Coeff::Poly(_) => RingDescriptor::PolyParam,
        }
    }

    pub fn from_rat(ring: RingDescriptor, q: Rat) -> Coeff {
        match ring {
            RingDescriptor::Rational => Coeff::Rational(q),
            RingDescriptor::Nilpotent { order } => {
                let mut v = vec![Rat::zero(); order as usize];
                v[0] = q;
                Coeff::Nilpotent(v)
            }
            RingDescriptor::PolyParam => Coeff::Poly(QPoly::constant(q)),
        }
    }

    pub fn from_int(ring: RingDescriptor, n: i64) -> Coeff {
        Self::from_rat(ring, Rat::from_integer(BigInt::from(n)))
    }

    pub fn zero(ring: RingDescriptor) -> Coeff {
        Self::from_rat(ring, Rat::zero())
    }

    pub fn one(ring: RingDescriptor) -> Coeff {
        Self::from_rat(ring, Rat::one())
    }

    /// The nilpotent generator ε.
    pub fn eps(ring: RingDescriptor) -> Result<Coeff> {
        match ring {
            RingDescriptor::Nilpotent { order } => {
                let mut v = vec![Rat::zero(); order as usize];
                v[1] = Rat::one();
                Ok(Coeff::Nilpotent(v))
            }
            other => Err(Error::RingMismatch {
                left: other,
                right: RingDescriptor::Nilpotent { order: 2 },
            }),
        }
    }

    /// The family parameter t.
    pub fn param(ring: RingDescriptor) -> Result<Coeff> {
        match ring {
            RingDescriptor::PolyParam => Ok(Coeff::Poly(QPoly::var())),
            other => Err(Error::RingMismatch {
                left: other,
                right: RingDescriptor::PolyParam,
            }),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Coeff::Rational(q) => q.is_zero(),
            Coeff::Nilpotent(v) => v.iter().all(Zero::is_zero),
            Coeff::Poly(p) => p.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        *self == Coeff::one(self.ring())
    }

    /// True iff the element lies in the nilradical (its reduction is zero).
    pub fn is_nilpotent(&self) -> bool {
        match self {
            Coeff::Nilpotent(v) => v[0].is_zero(),
            _ => self.is_zero(),
        }
    }

    pub fn is_unit(&self) -> bool {
        match self {
            Coeff::Rational(q) => !q.is_zero(),
            Coeff::Nilpotent(v) => !v[0].is_zero(),
            Coeff::Poly(p) => p.is_constant() && !p.is_zero(),
        }
    }

    /// The constant value if the element is a rational scalar of its ring.
    pub fn as_rational(&self) -> Option<Rat> {
        match self {
            Coeff::Rational(q) => Some(q.clone()),
            Coeff::Nilpotent(v) => v[1..].iter().all(Zero::is_zero).then(|| v[0].clone()),
            Coeff::Poly(p) => p.is_constant().then(|| p.coeff(0)),
        }
    }

    pub fn scale(&self, q: &Rat) -> Coeff {
        match self {
            Coeff::Rational(a) => Coeff::Rational(a * q),
            Coeff::Nilpotent(v) => Coeff::Nilpotent(v.iter().map(|c| c * q).collect()),
            Coeff::Poly(p) => Coeff::Poly(p.scale(q)),
        }
    }

    pub fn mul_int(&self, n: i64) -> Coeff {
        self.scale(&Rat::from_integer(BigInt::from(n)))
    }

    pub fn pow(&self, n: u32) -> Coeff {
        (0..n).fold(Coeff::one(self.ring()), |acc, _| &acc * self)
    }

    /// Multiplicative inverse; fails with [`Error::NotAUnit`] off the unit group.
    pub fn invert(&self) -> Result<Coeff> {
        if !self.is_unit() {
            return Err(Error::NotAUnit(self.to_string()));
        }
        Ok(match self {
            Coeff::Rational(q) => Coeff::Rational(q.recip()),
            Coeff::Poly(p) => Coeff::Poly(QPoly::constant(p.coeff(0).recip())),
            Coeff::Nilpotent(v) => {
                // c⁻¹ = c₀⁻¹ · Σ_{m<k} (−n)^m with n = c₀⁻¹c − 1 nilpotent.
                let ring = self.ring();
                let c0_inv = v[0].recip();
                let n = &self.scale(&c0_inv) - &Coeff::one(ring);
                let minus_n = -&n;
                let mut term = Coeff::one(ring);
                let mut acc = Coeff::one(ring);
                for _ in 1..v.len() {
                    term = &term * &minus_n;
                    acc = &acc + &term;
                }
                acc.scale(&c0_inv)
            }
        })
    }

    /// Image in the reduced ring: identity on ℚ and ℚ[t], `c₀` for ℚ[ε]/(ε^k).
    pub fn reduce(&self) -> Coeff {
        match self {
            Coeff::Nilpotent(v) => Coeff::Rational(v[0].clone()),
            other => other.clone(),
        }
    }

    /// Evaluates a ℚ[t] element at `t = t0`.
    pub fn specialize(&self, t0: &Rat) -> Result<Coeff> {
        match self {
            Coeff::Poly(p) => Ok(Coeff::Rational(p.eval(t0))),
            other => Err(Error::RingMismatch {
                left: other.ring(),
                right: RingDescriptor::PolyParam,
            }),
        }
    }

    /// A square root that is itself a unit, if one exists in the ring.
    ///
    /// Over ℚ and ℚ[t] this needs a nonzero rational square; over ℚ[ε]/(ε^k)
    /// it takes the root of `c₀` and expands the binomial series of the
    /// nilpotent remainder. The returned root has positive reduction.
    pub fn sqrt_unit(&self) -> Option<Coeff> {
        if !self.is_unit() {
            return None;
        }
        match self {
            Coeff::Rational(q) => rat_sqrt(q).map(Coeff::Rational),
            Coeff::Poly(p) => rat_sqrt(&p.coeff(0)).map(|r| Coeff::Poly(QPoly::constant(r))),
            Coeff::Nilpotent(v) => {
                let ring = self.ring();
                let r0 = rat_sqrt(&v[0])?;
                let n = &self.scale(&v[0].recip()) - &Coeff::one(ring);
                // (1+n)^{1/2} = Σ binom(1/2, m) n^m
                let half = Rat::new(1.into(), 2.into());
                let mut binom = Rat::one();
                let mut power = Coeff::one(ring);
                let mut acc = Coeff::one(ring);
                for m in 1..v.len() as i64 {
                    binom = binom * (&half - Rat::from_integer((m - 1).into()))
                        / Rat::from_integer(m.into());
                    power = &power * &n;
                    acc = &acc + &power.scale(&binom);
                }
                Some(acc.scale(&r0))
            }
        }
    }

    fn expect_same(&self, other: &Coeff) {
        assert_eq!(
            self.ring(),
            other.ring(),
            "coefficient ring mismatch in unchecked arithmetic"
        );
    }
}

/// The nonnegative rational square root of `q`, if `q` is a rational square.
pub fn rat_sqrt(q: &Rat) -> Option<Rat> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    (&n * &n == *q.numer() && &d * &d == *q.denom()).then(|| Rat::new(n, d))
}

impl Add for &Coeff {
    type Output = Coeff;
    fn add(self, rhs: &Coeff) -> Coeff {
        self.expect_same(rhs);
        match (self, rhs) {
            (Coeff::Rational(a), Coeff::Rational(b)) => Coeff::Rational(a + b),
            (Coeff::Nilpotent(a), Coeff::Nilpotent(b)) => {
                Coeff::Nilpotent(a.iter().zip(b).map(|(x, y)| x + y).collect())
            }
            (Coeff::Poly(a), Coeff::Poly(b)) => Coeff::Poly(a.add(b)),
            _ => unreachable!(),
        }
    }
}

impl Neg for &Coeff {
    type Output = Coeff;
    fn neg(self) -> Coeff {
        match self {
            Coeff::Rational(a) => Coeff::Rational(-a),
            Coeff::Nilpotent(v) => Coeff::Nilpotent(v.iter().map(|c| -c).collect()),
            Coeff::Poly(p) => Coeff::Poly(p.neg()),
        }
    }
}

impl Sub for &Coeff {
    type Output = Coeff;
    fn sub(self, rhs: &Coeff) -> Coeff {
        self + &(-rhs)
    }
}

impl Mul for &Coeff {
    type Output = Coeff;
    fn mul(self, rhs: &Coeff) -> Coeff {
        self.expect_same(rhs);
        match (self, rhs) {
            (Coeff::Rational(a), Coeff::Rational(b)) => Coeff::Rational(a * b),
            (Coeff::Nilpotent(a), Coeff::Nilpotent(b)) => {
                let k = a.len();
                let mut out = vec![Rat::zero(); k];
                for (i, x) in a.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    for (j, y) in b.iter().enumerate().take(k - i) {
                        out[i + j] += x * y;
                    }
                }
                Coeff::Nilpotent(out)
            }
            (Coeff::Poly(a), Coeff::Poly(b)) => Coeff::Poly(a.mul(b)),
            _ => unreachable!(),
        }
    }
}

impl Neg for Coeff {
    type Output = Coeff;
    fn neg(self) -> Coeff {
        -&self
    }
}

/// Checked ring arithmetic.
pub fn coeff_arith(a: &Coeff, b: &Coeff, op: ArithOp) -> Result<Coeff> {
    a.ring().ensure_same(b.ring())?;
    Ok(match op {
        ArithOp::Add => a + b,
        ArithOp::Sub => a - b,
        ArithOp::Mul => a * b,
    })
}

pub fn coeff_invert(a: &Coeff) -> Result<Coeff> {
    a.invert()
}

pub fn reduce_mod_nilradical(a: &Coeff) -> Coeff {
    a.reduce()
}

pub fn specialize_param(a: &Coeff, t0: &Rat) -> Result<Coeff> {
    a.specialize(t0)
}

impl Coeff {
    /// Whether the rendered form is a single signed monomial that can be
    /// juxtaposed with `*` without parentheses.
    pub(crate) fn is_atomic(&self) -> bool {
        match self {
            Coeff::Rational(_) => true,
            Coeff::Nilpotent(v) => v.iter().filter(|c| !c.is_zero()).count() <= 1,
            Coeff::Poly(p) => p.coeffs().iter().filter(|c| !c.is_zero()).count() <= 1,
        }
    }

    /// True when the printed form starts with a minus sign and is atomic,
    /// so a sum can absorb the sign as ` - `.
    pub(crate) fn is_negative_atom(&self) -> bool {
        if !self.is_atomic() {
            return false;
        }
        match self {
            Coeff::Rational(q) => q.is_negative(),
            Coeff::Nilpotent(v) => v.iter().find(|c| !c.is_zero()).is_some_and(Signed::is_negative),
            Coeff::Poly(p) => p.coeffs().iter().find(|c| !c.is_zero()).is_some_and(Signed::is_negative),
        }
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coeff::Rational(q) => write!(f, "{q}"),
            Coeff::Poly(p) => f.write_str(&p.display_in("t")),
            Coeff::Nilpotent(v) => f.write_str(&QPoly::from_coeffs(v.clone()).display_in("eps")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rat {
        Rat::new(n.into(), d.into())
    }

    fn nil(cs: &[(i64, i64)]) -> Coeff {
        Coeff::Nilpotent(cs.iter().map(|&(n, d)| q(n, d)).collect())
    }

    const K2: RingDescriptor = RingDescriptor::Nilpotent { order: 2 };
    const K3: RingDescriptor = RingDescriptor::Nilpotent { order: 3 };

    #[test]
    fn fraction_addition() {
        let a = Coeff::Rational(q(1, 2));
        let b = Coeff::Rational(q(1, 3));
        assert_eq!(coeff_arith(&a, &b, ArithOp::Add).unwrap(), Coeff::Rational(q(5, 6)));
    }

    #[test]
    fn eps_squared_vanishes_at_order_two() {
        let e = Coeff::eps(K2).unwrap();
        assert!(coeff_arith(&e, &e, ArithOp::Mul).unwrap().is_zero());
    }

    #[test]
    fn one_plus_eps_times_one_minus_eps() {
        // (1+ε)(1−ε) = 1 − ε² in ℚ[ε]/(ε³)
        let a = nil(&[(1, 1), (1, 1), (0, 1)]);
        let b = nil(&[(1, 1), (-1, 1), (0, 1)]);
        assert_eq!(
            coeff_arith(&a, &b, ArithOp::Mul).unwrap(),
            nil(&[(1, 1), (0, 1), (-1, 1)])
        );
    }

    #[test]
    fn mixed_rings_are_rejected() {
        let a = Coeff::one(RingDescriptor::Rational);
        let b = Coeff::one(K3);
        assert!(matches!(
            coeff_arith(&a, &b, ArithOp::Add),
            Err(Error::RingMismatch { .. })
        ));
        assert!(RingDescriptor::nilpotent(1).is_err());
    }

    #[test]
    fn inversion_examples() {
        assert_eq!(
            coeff_invert(&Coeff::Rational(q(2, 1))).unwrap(),
            Coeff::Rational(q(1, 2))
        );
        // (1+ε)⁻¹ = 1 − ε + ε² mod ε³
        let a = nil(&[(1, 1), (1, 1), (0, 1)]);
        assert_eq!(coeff_invert(&a).unwrap(), nil(&[(1, 1), (-1, 1), (1, 1)]));
        let t = Coeff::param(RingDescriptor::PolyParam).unwrap();
        assert!(matches!(coeff_invert(&t), Err(Error::NotAUnit(_))));
        assert!(coeff_invert(&Coeff::eps(K3).unwrap()).is_err());
    }

    #[test]
    fn reduction_examples() {
        assert_eq!(
            reduce_mod_nilradical(&Coeff::Rational(q(3, 7))),
            Coeff::Rational(q(3, 7))
        );
        assert_eq!(
            reduce_mod_nilradical(&nil(&[(2, 1), (5, 1), (0, 1)])),
            Coeff::Rational(q(2, 1))
        );
        assert!(reduce_mod_nilradical(&Coeff::eps(K3).unwrap()).is_zero());
    }

    #[test]
    fn specialization_examples() {
        let p = |cs: &[i64]| Coeff::Poly(QPoly::from_ints(cs));
        assert_eq!(
            specialize_param(&p(&[1, 0, 1]), &q(0, 1)).unwrap(),
            Coeff::Rational(q(1, 1))
        );
        assert_eq!(
            specialize_param(&p(&[0, 1]), &q(1, 1)).unwrap(),
            Coeff::Rational(q(1, 1))
        );
        assert_eq!(
            specialize_param(&p(&[-3, 2]), &q(1, 2)).unwrap(),
            Coeff::Rational(q(-2, 1))
        );
        assert!(specialize_param(&Coeff::Rational(q(1, 1)), &q(0, 1)).is_err());
    }

    #[test]
    fn square_roots() {
        assert_eq!(Coeff::Rational(q(9, 4)).sqrt_unit(), Some(Coeff::Rational(q(3, 2))));
        assert_eq!(Coeff::Rational(q(2, 1)).sqrt_unit(), None);
        let a = nil(&[(4, 1), (1, 1), (3, 1)]);
        let r = a.sqrt_unit().unwrap();
        assert_eq!(&r * &r, a);
    }

    #[test]
    fn display() {
        assert_eq!(nil(&[(2, 1), (-3, 2), (0, 1)]).to_string(), "2 - 3/2*eps");
        assert_eq!(Coeff::Poly(QPoly::from_ints(&[1, 0, 1])).to_string(), "1 + t^2");
        assert_eq!(Coeff::Rational(q(-3, 7)).to_string(), "-3/7");
    }

    pub(crate) fn arb_rat() -> impl Strategy<Value = Rat> {
        (-20i64..=20, 1i64..=6).prop_map(|(n, d)| q(n, d))
    }

    fn arb_coeff(ring: RingDescriptor) -> BoxedStrategy<Coeff> {
        match ring {
            RingDescriptor::Rational => arb_rat().prop_map(Coeff::Rational).boxed(),
            RingDescriptor::Nilpotent { order } => {
                proptest::collection::vec(arb_rat(), order as usize)
                    .prop_map(Coeff::Nilpotent)
                    .boxed()
            }
            RingDescriptor::PolyParam => proptest::collection::vec(arb_rat(), 0..4)
                .prop_map(|v| Coeff::Poly(QPoly::from_coeffs(v)))
                .boxed(),
        }
    }

    fn arb_ring() -> impl Strategy<Value = RingDescriptor> {
        prop_oneof![
            Just(RingDescriptor::Rational),
            Just(K2),
            Just(K3),
            Just(RingDescriptor::Nilpotent { order: 5 }),
            Just(RingDescriptor::PolyParam),
        ]
    }

    fn arb_triple() -> impl Strategy<Value = (Coeff, Coeff, Coeff)> {
        arb_ring().prop_flat_map(|r| (arb_coeff(r), arb_coeff(r), arb_coeff(r)))
    }

    fn arb_unit() -> impl Strategy<Value = Coeff> {
        arb_ring()
            .prop_flat_map(|r| match r {
                RingDescriptor::PolyParam => arb_rat()
                    .prop_map(|c| Coeff::Poly(QPoly::constant(c)))
                    .boxed(),
                _ => arb_coeff(r),
            })
            .prop_filter("unit", Coeff::is_unit)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn ring_axioms((a, b, c) in arb_triple()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert!((&a - &a).is_zero());
        }

        #[test]
        fn inverse_is_two_sided(a in arb_unit()) {
            let inv = coeff_invert(&a).unwrap();
            prop_assert!((&a * &inv).is_one());
        }

        #[test]
        fn reduction_is_a_homomorphism((a, b, _c) in arb_triple()) {
            prop_assert_eq!((&a + &b).reduce(), &a.reduce() + &b.reduce());
            prop_assert_eq!((&a * &b).reduce(), &a.reduce() * &b.reduce());
        }

        #[test]
        fn specialization_is_a_homomorphism(
            a in arb_coeff(RingDescriptor::PolyParam),
            b in arb_coeff(RingDescriptor::PolyParam),
            t0 in arb_rat(),
        ) {
            let sa = a.specialize(&t0).unwrap();
            let sb = b.specialize(&t0).unwrap();
            prop_assert_eq!((&a + &b).specialize(&t0).unwrap(), &sa + &sb);
            prop_assert_eq!((&a * &b).specialize(&t0).unwrap(), &sa * &sb);
        }
    }
}
