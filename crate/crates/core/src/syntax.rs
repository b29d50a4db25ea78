//! The text input language.
//!
//! One expression grammar serves series, polynomials, and forms:
//!
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := atom ['^' ['-'] integer]
//! atom   := integer | name | 'O' '(' expr ')' | '(' expr ')'
//! ```
//!
//! Names are `z`, `eps`, `t` in series and `x`, `y` in forms and curve
//! equations. Series literals may end in `O(z^N)`; without it they are exact.
//! A form is an expression followed by `dx`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;

use crate::ccnf::CCNormalForm;
use crate::curve::{make_curve, CurveKind, CurveModel, Place, PunctureId};
use crate::forms::{CurveFunction, MeromorphicForm};
use crate::poly::QPoly;
use crate::ring::{Coeff, RingDescriptor};
use crate::series::{LaurentSeries, Precision};
use crate::{Error, Rat, Result};

/// Nilpotency order used when `eps` appears and no ring is given.
pub const DEFAULT_NILPOTENT_ORDER: u32 = 3;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Name(String),
    Sym(char),
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(pos, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
        } else if c.is_ascii_digit() {
            let mut digits = String::new();
            while let Some(&(_, d)) = chars.peek().filter(|(_, d)| d.is_ascii_digit()) {
                digits.push(d);
                chars.next();
            }
            out.push((pos, Tok::Int(digits.parse().expect("digits"))));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let mut name = String::new();
            while let Some(&(_, d)) = chars.peek().filter(|(_, d)| d.is_ascii_alphanumeric() || *d == '_') {
                name.push(d);
                chars.next();
            }
            out.push((pos, Tok::Name(name)));
        } else if "+-*/^()".contains(c) {
            out.push((pos, Tok::Sym(c)));
            chars.next();
        } else {
            return Err(Error::parse(pos, format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Int(BigInt),
    Name(String, usize),
    BigO(Box<Expr>, usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>, usize),
    Pow(Box<Expr>, i64),
}

impl Expr {
    fn names(&self, out: &mut Vec<String>) {
        match self {
            Expr::Int(_) => {}
            Expr::Name(n, _) => out.push(n.clone()),
            Expr::BigO(e, _) | Expr::Neg(e) | Expr::Pow(e, _) => e.names(out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b, _) => {
                a.names(out);
                b.names(out);
            }
        }
    }
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Self> {
        Ok(Parser {
            toks: tokenize(text)?,
            at: 0,
            end: text.len(),
        })
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn eat_sym(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, c: char) -> Result<()> {
        if self.eat_sym(c) {
            Ok(())
        } else {
            Err(Error::parse(self.pos(), format!("expected `{c}`")))
        }
    }

    fn at_end(&self) -> bool {
        self.at >= self.toks.len()
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = if self.eat_sym('-') {
            Expr::Neg(Box::new(self.term()?))
        } else {
            self.eat_sym('+');
            self.term()?
        };
        loop {
            if self.eat_sym('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat_sym('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        loop {
            if self.eat_sym('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
            } else if self.peek() == Some(&Tok::Sym('/')) {
                let pos = self.pos();
                self.at += 1;
                lhs = Expr::Div(Box::new(lhs), Box::new(self.factor()?), pos);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if !self.eat_sym('^') {
            return Ok(base);
        }
        let paren = self.eat_sym('(');
        let neg = self.eat_sym('-');
        let pos = self.pos();
        let Some(Tok::Int(n)) = self.peek().cloned() else {
            return Err(Error::parse(pos, "expected an integer exponent"));
        };
        self.at += 1;
        if paren {
            self.expect_sym(')')?;
        }
        let n: i64 = n
            .try_into()
            .map_err(|_| Error::parse(pos, "exponent out of range"))?;
        Ok(Expr::Pow(Box::new(base), if neg { -n } else { n }))
    }

    fn atom(&mut self) -> Result<Expr> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.at += 1;
                Ok(Expr::Int(n))
            }
            Some(Tok::Name(name)) if name == "O" => {
                self.at += 1;
                self.expect_sym('(')?;
                let inner = self.expr()?;
                self.expect_sym(')')?;
                Ok(Expr::BigO(Box::new(inner), pos))
            }
            Some(Tok::Name(name)) => {
                self.at += 1;
                Ok(Expr::Name(name, pos))
            }
            Some(Tok::Sym('(')) => {
                self.at += 1;
                let e = self.expr()?;
                self.expect_sym(')')?;
                Ok(e)
            }
            Some(Tok::Sym(c)) => Err(Error::parse(pos, format!("unexpected `{c}`"))),
            None => Err(Error::parse(pos, "unexpected end of input")),
        }
    }
}

/// Parses a complete expression.
pub fn parse_expr(text: &str) -> Result<Expr> {
    let mut p = Parser::new(text)?;
    let e = p.expr()?;
    if !p.at_end() {
        return Err(Error::parse(p.pos(), "unexpected trailing input"));
    }
    Ok(e)
}

/// The ring a series literal lives in: ℚ[ε]/(ε³) if `eps` occurs, ℚ[t] if
/// `t` occurs, ℚ otherwise.
pub fn infer_ring(e: &Expr) -> Result<RingDescriptor> {
    let mut names = Vec::new();
    e.names(&mut names);
    let eps = names.iter().any(|n| n == "eps");
    let t = names.iter().any(|n| n == "t");
    match (eps, t) {
        (true, true) => Err(Error::RingMismatch {
            left: RingDescriptor::Nilpotent {
                order: DEFAULT_NILPOTENT_ORDER,
            },
            right: RingDescriptor::PolyParam,
        }),
        (true, false) => Ok(RingDescriptor::Nilpotent {
            order: DEFAULT_NILPOTENT_ORDER,
        }),
        (false, true) => Ok(RingDescriptor::PolyParam),
        (false, false) => Ok(RingDescriptor::Rational),
    }
}

fn eval_series(e: &Expr, ring: RingDescriptor, terms: u32) -> Result<LaurentSeries> {
    let rec = |e: &Expr| eval_series(e, ring, terms);
    Ok(match e {
        Expr::Int(n) => LaurentSeries::constant(Coeff::from_rat(ring, Rat::from_integer(n.clone()))),
        Expr::Name(name, pos) => match name.as_str() {
            "z" => LaurentSeries::z(ring),
            "eps" => LaurentSeries::constant(Coeff::eps(ring).map_err(|_| {
                Error::parse(*pos, format!("`eps` is not in the {ring} ring"))
            })?),
            "t" => LaurentSeries::constant(Coeff::param(ring).map_err(|_| {
                Error::parse(*pos, format!("`t` is not in the {ring} ring"))
            })?),
            other => return Err(Error::parse(*pos, format!("unknown name `{other}` in a series"))),
        },
        Expr::BigO(inner, pos) => {
            let m = rec(inner)?;
            match (m.is_exact(), m.leading(), m.num_terms()) {
                (true, Some((n, c)), 1) if c.is_one() => LaurentSeries::big_o(ring, n),
                _ => return Err(Error::parse(*pos, "O(...) takes a power of z")),
            }
        }
        Expr::Neg(a) => rec(a)?.neg(),
        Expr::Add(a, b) => rec(a)?.add(&rec(b)?)?,
        Expr::Sub(a, b) => rec(a)?.sub(&rec(b)?)?,
        Expr::Mul(a, b) => rec(a)?.mul(&rec(b)?)?,
        Expr::Div(a, b, _) => rec(a)?.mul(&crate::ccnf::invert_unit_series(&rec(b)?, terms)?)?,
        Expr::Pow(a, n) => {
            let base = rec(a)?;
            if *n >= 0 {
                base.pow(*n, terms)?
            } else {
                crate::ccnf::invert_unit_series(&base, terms)?.pow(-*n, terms)?
            }
        }
    })
}

/// Parses a series literal, inferring the ring unless one is given.
/// `terms` bounds expansions of quotients and negative powers.
pub fn parse_series(text: &str, ring: Option<RingDescriptor>, terms: u32) -> Result<LaurentSeries> {
    let e = parse_expr(text)?;
    let ring = match ring {
        Some(r) => r,
        None => infer_ring(&e)?,
    };
    eval_series(&e, ring, terms)
}

/// Parses a coefficient: a series literal with only a constant term.
pub fn parse_coeff(text: &str, ring: RingDescriptor) -> Result<Coeff> {
    let s = parse_series(text, Some(ring), crate::DEFAULT_TERMS)?;
    if !s.is_exact() || s.terms().any(|(e, _)| e != 0) {
        return Err(Error::parse(0, format!("`{text}` is not a coefficient")));
    }
    Ok(s.coeff(0))
}

/// Parses a rational number such as `-3/2`.
pub fn parse_rational(text: &str) -> Result<Rat> {
    parse_coeff(text, RingDescriptor::Rational).map(|c| c.as_rational().expect("rational ring"))
}

/// Parses a comma-separated list of rationals.
pub fn parse_rational_list(text: &str) -> Result<Vec<Rat>> {
    let mut out = Vec::new();
    let mut offset = 0;
    for part in text.split(',') {
        out.push(parse_rational(part).map_err(|e| shift_pos(e, offset))?);
        offset += part.len() + 1;
    }
    Ok(out)
}

fn shift_pos(e: Error, by: usize) -> Error {
    match e {
        Error::Parse { pos, msg } => Error::Parse { pos: pos + by, msg },
        e => e,
    }
}

pub fn parse_ring(text: &str) -> Result<RingDescriptor> {
    match text.trim() {
        "rational" => Ok(RingDescriptor::Rational),
        "poly" => Ok(RingDescriptor::PolyParam),
        other => {
            let k = other
                .strip_prefix("nilpotent:")
                .and_then(|k| k.parse::<u32>().ok())
                .ok_or_else(|| Error::parse(0, format!("unknown ring `{other}`")))?;
            RingDescriptor::nilpotent(k)
        }
    }
}

/// A quotient of curve functions, reduced by `y² = h` as it is built.
#[derive(Clone, Debug)]
struct Fraction {
    num: CurveFunction,
    den: CurveFunction,
}

fn eval_fraction(e: &Expr, h: Option<&QPoly>) -> Result<Fraction> {
    let h0 = QPoly::zero();
    let hh = h.unwrap_or(&h0);
    let rec = |e: &Expr| eval_fraction(e, h);
    let one = || CurveFunction::constant(Rat::one());
    Ok(match e {
        Expr::Int(n) => Fraction {
            num: CurveFunction::constant(Rat::from_integer(n.clone())),
            den: one(),
        },
        Expr::Name(name, pos) => match (name.as_str(), h) {
            ("x", _) => Fraction {
                num: CurveFunction::x(),
                den: one(),
            },
            ("y", Some(_)) => Fraction {
                num: CurveFunction::y(),
                den: one(),
            },
            (other, _) => return Err(Error::parse(*pos, format!("unknown name `{other}`"))),
        },
        Expr::BigO(_, pos) => return Err(Error::parse(*pos, "O(...) is only allowed in series")),
        Expr::Neg(a) => {
            let f = rec(a)?;
            Fraction {
                num: f.num.neg(),
                den: f.den,
            }
        }
        Expr::Add(a, b) | Expr::Sub(a, b) => {
            let (f, mut g) = (rec(a)?, rec(b)?);
            if matches!(e, Expr::Sub(..)) {
                g.num = g.num.neg();
            }
            Fraction {
                num: f.num.mul(&g.den, hh).add(&g.num.mul(&f.den, hh)),
                den: f.den.mul(&g.den, hh),
            }
        }
        Expr::Mul(a, b) => {
            let (f, g) = (rec(a)?, rec(b)?);
            Fraction {
                num: f.num.mul(&g.num, hh),
                den: f.den.mul(&g.den, hh),
            }
        }
        Expr::Div(a, b, pos) => {
            let (f, g) = (rec(a)?, rec(b)?);
            if g.num.norm(hh).is_zero() {
                return Err(Error::parse(*pos, "division by zero"));
            }
            Fraction {
                num: f.num.mul(&g.den, hh),
                den: f.den.mul(&g.num, hh),
            }
        }
        Expr::Pow(a, n) => {
            let f = rec(a)?;
            let (base_num, base_den) = if *n >= 0 { (f.num, f.den) } else { (f.den, f.num) };
            if base_den.is_zero() || base_num.is_zero() && *n < 0 {
                return Err(Error::parse(0, "division by zero"));
            }
            let mut num = one();
            let mut den = one();
            for _ in 0..n.unsigned_abs() {
                num = num.mul(&base_num, hh);
                den = den.mul(&base_den, hh);
            }
            Fraction { num, den }
        }
    })
}

/// Parses a polynomial in `x` with rational coefficients.
pub fn parse_x_poly(text: &str) -> Result<QPoly> {
    let f = eval_fraction(&parse_expr(text)?, None)?;
    let (q, r) = f.num.a.div_rem(&f.den.a);
    if !r.is_zero() {
        return Err(Error::parse(0, format!("`{text}` is not a polynomial in x")));
    }
    Ok(q)
}

/// Parses `a1`, `gm`, or `hyp:h=<polynomial in x>`.
pub fn parse_curve(text: &str) -> Result<CurveModel> {
    let text = text.trim();
    match text {
        "a1" => Ok(CurveModel::affine_line()),
        "gm" => Ok(CurveModel::gm()),
        _ => {
            let body = text
                .strip_prefix("hyp:h=")
                .ok_or_else(|| Error::parse(0, format!("unknown curve `{text}`")))?;
            let h = parse_x_poly(body).map_err(|e| shift_pos(e, "hyp:h=".len()))?;
            make_curve(CurveKind::Hyperelliptic(h))
        }
    }
}

/// Parses `<expression in x, y> dx`.
pub fn parse_form(text: &str, curve: &Arc<CurveModel>) -> Result<MeromorphicForm> {
    let mut p = Parser::new(text)?;
    let e = p.expr()?;
    match p.peek() {
        Some(Tok::Name(n)) if n == "dx" => p.at += 1,
        _ => return Err(Error::parse(p.pos(), "a form must end in `dx`")),
    }
    if !p.at_end() {
        return Err(Error::parse(p.pos(), "unexpected input after `dx`"));
    }
    let f = eval_fraction(&e, curve.h())?;
    MeromorphicForm::new(Arc::clone(curve), f.num, f.den)
}

/// Parses `inf`, `inf+`, `inf-`, an `x` value, or a point `(x,y)`.
pub fn parse_place(text: &str) -> Result<Place> {
    let text = text.trim();
    if let Ok(p) = text.parse::<PunctureId>() {
        if p != PunctureId::Zero {
            return Ok(Place::Puncture(p));
        }
    }
    if let Some(inner) = text.strip_prefix('(').and_then(|t| t.strip_suffix(')')) {
        if let Some((a, b)) = inner.split_once(',') {
            let x = parse_rational(a).map_err(|e| shift_pos(e, 1))?;
            let y = parse_rational(b).map_err(|e| shift_pos(e, a.len() + 2))?;
            return Ok(Place::affine(x, Some(y)));
        }
    }
    Ok(Place::affine(parse_rational(text)?, None))
}

fn parse_coeff_map(text: &str, ring: RingDescriptor, offset: usize) -> Result<BTreeMap<i64, Coeff>> {
    let inner = text
        .trim()
        .strip_prefix('{')
        .and_then(|t| t.strip_suffix('}'))
        .ok_or_else(|| Error::parse(offset, "expected `{...}`"))?;
    let mut out = BTreeMap::new();
    if inner.trim().is_empty() {
        return Ok(out);
    }
    for entry in inner.split(',') {
        let (k, v) = entry
            .split_once(':')
            .ok_or_else(|| Error::parse(offset, format!("expected `index: coefficient`, got `{entry}`")))?;
        let k: i64 = k
            .trim()
            .parse()
            .map_err(|_| Error::parse(offset, format!("bad index `{k}`")))?;
        out.insert(k, parse_coeff(v, ring)?);
    }
    Ok(out)
}

/// Parses the text form of a [`CCNormalForm`].
pub fn parse_normal_form(text: &str, ring: RingDescriptor) -> Result<CCNormalForm> {
    let (body, prec) = match text.split_once(" (mod O(z^") {
        Some((body, rest)) => {
            let n = rest
                .strip_suffix("))")
                .and_then(|n| n.parse::<i64>().ok())
                .ok_or_else(|| Error::parse(body.len(), "bad precision suffix"))?;
            (body, Precision::Finite(n))
        }
        None => (text, Precision::Exact),
    };
    let field = |name: &str, next: Option<&str>| -> Result<(usize, &str)> {
        let key = format!("{name}=");
        let start = body
            .find(&key)
            .ok_or_else(|| Error::parse(0, format!("missing `{key}`")))?
            + key.len();
        let end = match next {
            Some(n) => body[start..]
                .find(&format!(" {n}="))
                .map(|i| start + i)
                .ok_or_else(|| Error::parse(start, format!("missing `{n}=`")))?,
            None => body.len(),
        };
        Ok((start, &body[start..end]))
    };
    let (_, unit) = field("unit", Some("order"))?;
    let (opos, order) = field("order", Some("neg"))?;
    let (npos, neg) = field("neg", Some("pos"))?;
    let (ppos, pos) = field("pos", None)?;
    let nf = CCNormalForm {
        unit: parse_coeff(unit, ring)?,
        order: order
            .trim()
            .parse()
            .map_err(|_| Error::parse(opos, format!("bad order `{order}`")))?,
        neg: parse_coeff_map(neg, ring, npos)?,
        pos: parse_coeff_map(pos, ring, ppos)?,
        prec,
    };
    nf.validate()?;
    Ok(nf)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    #[test]
    fn series_literals() {
        let s = parse_series("z^-1 + 2*z + O(z^5)", None, 24).unwrap();
        assert_eq!(s.prec(), Precision::Finite(5));
        assert_eq!(s.to_string(), "z^-1 + 2*z + O(z^5)");
        let fam = parse_series("z + t*z^-1", None, 24).unwrap();
        assert_eq!(fam.ring(), RingDescriptor::PolyParam);
        assert!(fam.is_exact());
        let nil = parse_series("1 + eps*z^-2", None, 24).unwrap();
        assert_eq!(nil.ring(), RingDescriptor::Nilpotent { order: 3 });
        assert!(matches!(parse_series("eps + t", None, 24), Err(Error::RingMismatch { .. })));
        let k2 = parse_series("eps*z", Some(RingDescriptor::Nilpotent { order: 2 }), 24).unwrap();
        assert_eq!(k2.ring(), RingDescriptor::Nilpotent { order: 2 });
    }

    #[test]
    fn parse_errors_carry_positions() {
        assert_eq!(parse_series("z + ", None, 24).unwrap_err(), Error::parse(4, "unexpected end of input"));
        assert!(matches!(parse_series("z $ 1", None, 24), Err(Error::Parse { pos: 2, .. })));
        assert!(matches!(parse_series("w", None, 24), Err(Error::Parse { pos: 0, .. })));
        assert!(matches!(parse_series("O(2*z)", None, 24), Err(Error::Parse { .. })));
    }

    #[test]
    fn quotients_expand() {
        let s = parse_series("1/(1 - z)", None, 4).unwrap();
        assert_eq!(s.to_string(), "1 + z + z^2 + z^3 + O(z^4)");
        assert_eq!(parse_series("3/2*z^-1", None, 4).unwrap().to_string(), "3/2*z^-1");
    }

    #[test]
    fn curves_forms_places() {
        let c = Arc::new(parse_curve("hyp:h=x^3+1").unwrap());
        assert_eq!(c.to_string(), "hyp:h=1 + x^3");
        assert!(matches!(parse_curve("hyp:h=x^2+1"), Err(Error::DegreeTooSmall)));
        assert!(parse_curve("elliptic").unwrap_err().is_parse_error());
        let w = parse_form("1/(x*y) dx", &c).unwrap();
        assert_eq!(w.to_string(), "y/(x + x^4) dx");
        assert_eq!(parse_form(&w.to_string(), &c).unwrap(), w);
        assert!(parse_form("1/x", &c).unwrap_err().is_parse_error());
        let gm = Arc::new(CurveModel::gm());
        assert!(parse_form("y dx", &gm).unwrap_err().is_parse_error());
        assert_eq!(parse_place("(0,-1)").unwrap(), Place::affine(rat(0, 1), Some(rat(-1, 1))));
        assert_eq!(parse_place("inf-").unwrap(), Place::Puncture(PunctureId::InfinityMinus));
        assert_eq!(parse_place("-1/2").unwrap(), Place::affine(rat(-1, 2), None));
        assert_eq!(parse_rational_list("0, 1,-2/3").unwrap(), vec![rat(0, 1), rat(1, 1), rat(-2, 3)]);
    }

    #[test]
    fn normal_form_text() {
        let k2 = RingDescriptor::Nilpotent { order: 2 };
        let nf = parse_normal_form("unit=(1 + eps) order=-2 neg={1: -eps, 3: 2*eps} pos={1: 3} (mod O(z^7))", k2).unwrap();
        assert_eq!(nf.order, -2);
        assert_eq!(nf.neg.len(), 2);
        assert_eq!(nf.prec, Precision::Finite(7));
        assert_eq!(parse_normal_form(&nf.to_string(), k2).unwrap(), nf);
        assert!(parse_normal_form("unit=eps order=0 neg={} pos={}", k2).is_err());
    }
}
