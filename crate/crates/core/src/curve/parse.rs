//! Text syntax for curves, places and divisors.
//!
//! Curves are written as the left side of `... = 0`, e.g.
//! `y^2 + (x^2 + x + 1)y + x^5 + x^4 + x^2 + x`. Places are ideals
//! `(p(x), y + c(x))`, `(1/x, y/x^3 + c)` or bare `(p(x))`; divisors are
//! signed sums like `2(x, y + 2) + (x^3 + x + 1)`. The letters `x` and `z`
//! name the same variable.

use std::collections::BTreeSet;

use crate::algebra::{Gf, Poly};

use super::{base_field, Chart, CurveError, CurveModel, Divisor, Fiber, Place, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Num(u64),
    Var(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(u64),
    Ident(String),
    Op(char),
}

fn superscript_digit(c: char) -> Option<u32> {
    "⁰¹²³⁴⁵⁶⁷⁸⁹".chars().position(|s| s == c).map(|d| d as u32)
}

fn perr(pos: usize, msg: impl Into<String>) -> CurveError {
    CurveError::Parse { pos, msg: msg.into() }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>> {
    let mut out = Vec::new();
    let mut it = text.char_indices().peekable();
    while let Some(&(pos, c)) = it.peek() {
        if c.is_whitespace() || c == '\\' || c == '{' || c == '}' {
            it.next();
        } else if c.is_ascii_digit() {
            let mut n: u64 = 0;
            while let Some(&(_, d)) = it.peek() {
                let Some(v) = d.to_digit(10) else { break };
                n = n.checked_mul(10).and_then(|n| n.checked_add(v as u64)).ok_or_else(|| perr(pos, "number too large"))?;
                it.next();
            }
            out.push((pos, Tok::Num(n)));
        } else if superscript_digit(c).is_some() {
            let mut n: u64 = 0;
            while let Some(&(_, d)) = it.peek() {
                let Some(v) = superscript_digit(d) else { break };
                n = n * 10 + v as u64;
                it.next();
            }
            out.push((pos, Tok::Op('^')));
            out.push((pos, Tok::Num(n)));
        } else if c.is_alphabetic() {
            it.next();
            let mut name = c.to_string();
            // subscripted names such as T_1
            if let Some(&(_, '_')) = it.peek() {
                it.next();
                name.push('_');
                while let Some(&(_, d)) = it.peek() {
                    if !d.is_ascii_digit() {
                        break;
                    }
                    name.push(d);
                    it.next();
                }
            }
            out.push((pos, Tok::Ident(name)));
        } else if "+-*/^()".contains(c) {
            out.push((pos, Tok::Op(c)));
            it.next();
        } else {
            return Err(perr(pos, format!("unexpected character {c:?}")));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    i: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.i).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Op('+')) => {
                    self.i += 1;
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Tok::Op('-')) => {
                    self.i += 1;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Op('*')) => {
                    self.i += 1;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Some(Tok::Op('/')) => {
                    self.i += 1;
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                // implicit multiplication
                Some(Tok::Num(_)) | Some(Tok::Ident(_)) | Some(Tok::Op('(')) => {
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.power()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(Tok::Op('-')) => {
                self.i += 1;
                Ok(Expr::Neg(Box::new(self.unary()?)))
            }
            Some(Tok::Op('+')) => {
                self.i += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let mut base = self.atom()?;
        while let Some(Tok::Op('^')) = self.peek() {
            self.i += 1;
            let pos = self.pos();
            match self.peek().cloned() {
                Some(Tok::Num(n)) if n <= u32::MAX as u64 => {
                    self.i += 1;
                    base = Expr::Pow(Box::new(base), n as u32);
                }
                _ => return Err(perr(pos, "expected a nonnegative integer exponent")),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.i += 1;
                Ok(Expr::Num(n))
            }
            Some(Tok::Ident(s)) => {
                self.i += 1;
                Ok(Expr::Var(s))
            }
            Some(Tok::Op('(')) => {
                self.i += 1;
                let e = self.expr()?;
                if self.peek() != Some(&Tok::Op(')')) {
                    return Err(perr(self.pos(), "expected ')'"));
                }
                self.i += 1;
                Ok(e)
            }
            Some(t) => Err(perr(pos, format!("unexpected token {t:?}"))),
            None => Err(perr(pos, "unexpected end of input")),
        }
    }
}

/// A ring in which expressions can be evaluated.
pub trait Evaluator {
    type V: Clone;
    fn number(&self, n: u64) -> std::result::Result<Self::V, String>;
    fn variable(&self, name: &str) -> std::result::Result<Self::V, String>;
    fn add(&self, a: &Self::V, b: &Self::V) -> Self::V;
    fn sub(&self, a: &Self::V, b: &Self::V) -> Self::V;
    fn mul(&self, a: &Self::V, b: &Self::V) -> Self::V;
    fn div(&self, a: &Self::V, b: &Self::V) -> std::result::Result<Self::V, String>;
}

impl Expr {
    pub fn parse(text: &str) -> Result<Expr> {
        let toks = tokenize(text)?;
        let mut p = Parser { toks, i: 0, end: text.len() };
        let e = p.expr()?;
        if p.i != p.toks.len() {
            return Err(perr(p.pos(), "trailing input"));
        }
        Ok(e)
    }

    pub fn eval<E: Evaluator>(&self, ev: &E) -> std::result::Result<E::V, String> {
        Ok(match self {
            Expr::Num(n) => ev.number(*n)?,
            Expr::Var(v) => ev.variable(v)?,
            Expr::Neg(a) => ev.sub(&ev.number(0)?, &a.eval(ev)?),
            Expr::Add(a, b) => ev.add(&a.eval(ev)?, &b.eval(ev)?),
            Expr::Sub(a, b) => ev.sub(&a.eval(ev)?, &b.eval(ev)?),
            Expr::Mul(a, b) => ev.mul(&a.eval(ev)?, &b.eval(ev)?),
            Expr::Div(a, b) => ev.div(&a.eval(ev)?, &b.eval(ev)?)?,
            Expr::Pow(a, e) => {
                let base = a.eval(ev)?;
                let mut acc = ev.number(1)?;
                let mut sq = base;
                let mut e = *e;
                while e > 0 {
                    if e & 1 == 1 {
                        acc = ev.mul(&acc, &sq);
                    }
                    e >>= 1;
                    if e > 0 {
                        sq = ev.mul(&sq, &sq);
                    }
                }
                acc
            }
        })
    }

    /// Variable names occurring in the expression.
    pub fn variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Expr::Num(_) => {}
            Expr::Var(v) => {
                out.insert(v.clone());
            }
            Expr::Neg(a) | Expr::Pow(a, _) => a.collect_vars(out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }
}

/// A rational function `num/den` in x with monic denominator in lowest terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatFn {
    pub num: Poly,
    pub den: Poly,
}

impl RatFn {
    pub fn new(num: Poly, den: Poly, k: &Gf) -> RatFn {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return RatFn { num, den: Poly::one() };
        }
        let g = num.gcd(&den, k);
        let (n, d) = (num.div_exact(&g, k), den.div_exact(&g, k));
        let lc = d.lead();
        RatFn { num: n.scale(k.inv(lc), k), den: d.scale(k.inv(lc), k) }
    }

    pub fn poly(p: Poly) -> RatFn {
        RatFn { num: p, den: Poly::one() }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn as_poly(&self) -> Option<&Poly> {
        self.den.is_one().then_some(&self.num)
    }

    pub fn add(&self, o: &RatFn, k: &Gf) -> RatFn {
        let n = self.num.mul(&o.den, k).add(&o.num.mul(&self.den, k), k);
        RatFn::new(n, self.den.mul(&o.den, k), k)
    }

    pub fn neg(&self, k: &Gf) -> RatFn {
        RatFn { num: self.num.neg(k), den: self.den.clone() }
    }

    pub fn sub(&self, o: &RatFn, k: &Gf) -> RatFn {
        self.add(&o.neg(k), k)
    }

    pub fn mul(&self, o: &RatFn, k: &Gf) -> RatFn {
        RatFn::new(self.num.mul(&o.num, k), self.den.mul(&o.den, k), k)
    }

    pub fn div(&self, o: &RatFn, k: &Gf) -> Option<RatFn> {
        (!o.is_zero()).then(|| RatFn::new(self.num.mul(&o.den, k), self.den.mul(&o.num, k), k))
    }

    /// `r(1/u)` as a rational function of u.
    pub fn invert_variable(&self, k: &Gf) -> RatFn {
        let dn = self.num.deg_i().max(0) as usize;
        let dd = self.den.deg_i() as usize;
        let (mut n, mut d) = (self.num.reversed(dn), self.den.reversed(dd));
        if dd >= dn {
            n = n.shift(dd - dn);
        } else {
            d = d.shift(dn - dd);
        }
        RatFn::new(n, d, k)
    }

    /// Image in F_q[x]/p, if `p` does not divide the denominator.
    pub fn reduce_mod(&self, p: &Poly, k: &Gf) -> Option<Poly> {
        let inv = self.den.rem(p, k).inv_mod(p, k)?;
        Some(self.num.rem(p, k).mul_mod(&inv, p, k))
    }
}

/// Polynomial in y with rational-function coefficients, ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct YPoly(pub Vec<RatFn>);

impl YPoly {
    fn trim(mut self) -> YPoly {
        while self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
        self
    }

    pub fn y_degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> RatFn {
        self.0.get(i).cloned().unwrap_or_else(|| RatFn::poly(Poly::zero()))
    }
}

/// Evaluates into `YPoly` over the base field; `x` and `z` are the base
/// variable, `a` is the generator of F_4.
struct CurveEval<'a> {
    k: &'a Gf,
}

impl Evaluator for CurveEval<'_> {
    type V = YPoly;

    fn number(&self, n: u64) -> std::result::Result<YPoly, String> {
        let c = self.k.from_int((n % self.k.characteristic() as u64) as i64);
        Ok(YPoly(vec![RatFn::poly(Poly::constant(c))]).trim())
    }

    fn variable(&self, name: &str) -> std::result::Result<YPoly, String> {
        match name {
            "x" | "z" => Ok(YPoly(vec![RatFn::poly(Poly::x())])),
            "y" => Ok(YPoly(vec![RatFn::poly(Poly::zero()), RatFn::poly(Poly::one())])),
            "a" if self.k.size() == 4 => Ok(YPoly(vec![RatFn::poly(Poly::constant(self.k.generator()))])),
            _ => Err(format!("unknown variable {name}")),
        }
    }

    fn add(&self, a: &YPoly, b: &YPoly) -> YPoly {
        let n = a.0.len().max(b.0.len());
        YPoly((0..n).map(|i| a.coeff(i).add(&b.coeff(i), self.k)).collect()).trim()
    }

    fn sub(&self, a: &YPoly, b: &YPoly) -> YPoly {
        let n = a.0.len().max(b.0.len());
        YPoly((0..n).map(|i| a.coeff(i).sub(&b.coeff(i), self.k)).collect()).trim()
    }

    fn mul(&self, a: &YPoly, b: &YPoly) -> YPoly {
        if a.0.is_empty() || b.0.is_empty() {
            return YPoly(vec![]);
        }
        let mut out = vec![RatFn::poly(Poly::zero()); a.0.len() + b.0.len() - 1];
        for (i, x) in a.0.iter().enumerate() {
            for (j, y) in b.0.iter().enumerate() {
                out[i + j] = out[i + j].add(&x.mul(y, self.k), self.k);
            }
        }
        YPoly(out).trim()
    }

    fn div(&self, a: &YPoly, b: &YPoly) -> std::result::Result<YPoly, String> {
        if b.y_degree() != Some(0) {
            return Err("division only by nonzero functions of x".into());
        }
        let d = &b.0[0];
        Ok(YPoly(a.0.iter().map(|c| c.div(d, self.k).unwrap()).collect()).trim())
    }
}

fn eval_y(text: &str, k: &Gf, offset: usize) -> Result<YPoly> {
    let e = Expr::parse(text).map_err(|err| match err {
        CurveError::Parse { pos, msg } => CurveError::Parse { pos: pos + offset, msg },
        other => other,
    })?;
    e.eval(&CurveEval { k }).map_err(|msg| perr(offset, msg))
}

/// Parses `y^2 + h(x) y + c(x)` (meaning `= 0`) over F_q. The genus is the
/// least one compatible with the degrees.
pub fn parse_curve(q: u32, text: &str) -> Result<CurveModel> {
    let k = base_field(q)?;
    let text = text.trim();
    let text = text.strip_prefix("F:").unwrap_or(text);
    let text = text.trim_end_matches(|c: char| c == '.' || c.is_whitespace());
    let text = text.strip_suffix("= 0").unwrap_or(text);
    let p = eval_y(text, &k, 0)?;
    if p.y_degree() != Some(2) {
        return Err(perr(0, "curve must be quadratic in y"));
    }
    let lead = p.0[2].as_poly().filter(|c| c.is_constant()).ok_or_else(|| perr(0, "y^2 must have a constant coefficient"))?;
    let inv = k.inv(lead.lead());
    let coef = |i: usize| -> Result<Poly> {
        p.coeff(i).as_poly().map(|c| c.scale(inv, &k)).ok_or_else(|| perr(0, "curve coefficients must be polynomials in x"))
    };
    let h = coef(1)?;
    let f = coef(0)?.neg(&k);
    let dh = h.deg_i();
    let df = f.deg_i();
    let genus = (0..=2usize).find(|&g| dh <= g as i64 + 1 && df <= 2 * g as i64 + 2).ok_or(CurveError::DegreeMismatch(2))?;
    CurveModel::new(q, h, f, genus)
}

/// Splits `inner` at top-level commas, returning (offset, piece) pairs.
fn split_top(inner: &str, base: usize) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in inner.char_indices() {
        match c {
            '(' | '{' => depth += 1,
            ')' | '}' => depth -= 1,
            ',' if depth == 0 => {
                out.push((base + start, &inner[start..i]));
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push((base + start, &inner[start..]));
    out
}

fn parse_place_at(c: &CurveModel, text: &str, base: usize) -> Result<Place> {
    let k = c.field();
    let t = text.trim();
    let lead = base + (text.len() - text.trim_start().len());
    let inner = t
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| perr(lead, "a place is written (p) or (p, y + c)"))?;
    let parts = split_top(inner, lead + 1);
    if parts.len() > 2 {
        return Err(perr(lead, "a place ideal has at most two generators"));
    }
    let g1 = eval_y(parts[0].1, k, parts[0].0)?;
    if g1.y_degree().unwrap_or(0) > 0 {
        return Err(perr(parts[0].0, "first generator must not involve y"));
    }
    let g1 = g1.coeff(0);
    let u_inv = RatFn::new(Poly::one(), Poly::x(), k);
    let (chart, prime) = if g1 == u_inv {
        (Chart::Infinite, Poly::x())
    } else {
        match g1.as_poly() {
            Some(p) if p.is_irreducible(k) => (Chart::Finite, p.monic(k)),
            _ => return Err(CurveError::UnknownPlace(t.to_string())),
        }
    };
    let places = c.places_over(chart, &prime);
    let Some(&(off2, gen2)) = parts.get(1) else {
        return match places.as_slice() {
            [p] => Ok(p.clone()),
            _ => Err(CurveError::AmbiguousPlace(t.to_string())),
        };
    };
    let g2 = eval_y(gen2, k, off2)?;
    if g2.y_degree().unwrap_or(0) > 1 {
        return Err(perr(off2, "second generator must be linear in y"));
    }
    let (mut c1, mut c0) = (g2.coeff(1), g2.coeff(0));
    if chart == Chart::Infinite {
        // y = w * x^{g+1} = w / u^{g+1}
        let e = c.genus() + 1;
        c1 = c1.invert_variable(k).mul(&RatFn::new(Poly::one(), Poly::x().pow(e as u32, k), k), k);
        c0 = c0.invert_variable(k);
    }
    let unknown = || CurveError::UnknownPlace(t.to_string());
    let r1 = c1.reduce_mod(&prime, k).ok_or_else(unknown)?;
    let r0 = c0.reduce_mod(&prime, k).ok_or_else(unknown)?;
    if r1.is_zero() {
        // generator without y: either in the prime (bare notation) or a unit
        if !r0.is_zero() {
            return Err(unknown());
        }
        return match places.as_slice() {
            [p] => Ok(p.clone()),
            _ => Err(CurveError::AmbiguousPlace(t.to_string())),
        };
    }
    let root = r0.neg(k).mul_mod(&r1.inv_mod(&prime, k).ok_or_else(unknown)?, &prime, k);
    places
        .into_iter()
        .find(|p| matches!(&p.fiber, Fiber::Split(r) | Fiber::Ramified(r) if *r == root))
        .ok_or_else(unknown)
}

/// Parses a place in ideal notation.
pub fn parse_place(c: &CurveModel, text: &str) -> Result<Place> {
    parse_place_at(c, text, 0)
}

/// Parses `{P1, P2, ...}` (braces optional).
pub fn parse_place_set(c: &CurveModel, text: &str) -> Result<Vec<Place>> {
    let t = text.trim();
    let lead = text.len() - text.trim_start().len();
    let (inner, base) = match t.strip_prefix('{').and_then(|s| s.strip_suffix('}')) {
        Some(s) => (s, lead + 1),
        None => (t, lead),
    };
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    split_top(inner, base).into_iter().map(|(off, s)| parse_place_at(c, s, off)).collect()
}

/// Parses a divisor such as `2(1/x, y/x^3 + 1) + 2(x, y + 2)` or `0`.
pub fn parse_divisor(c: &CurveModel, text: &str) -> Result<Divisor> {
    let mut d = Divisor::zero();
    let bytes = text.as_bytes();
    let mut i = 0;
    let skip_ws = |i: &mut usize| {
        while *i < bytes.len() && (bytes[*i] as char).is_whitespace() {
            *i += 1;
        }
    };
    skip_ws(&mut i);
    if text.trim() == "0" {
        return Ok(d);
    }
    let mut first = true;
    while i < bytes.len() {
        let mut sign = 1i64;
        if bytes[i] == b'+' || bytes[i] == b'-' {
            if bytes[i] == b'-' {
                sign = -1;
            }
            i += 1;
            skip_ws(&mut i);
        } else if !first {
            return Err(perr(i, "expected '+' or '-' between divisor terms"));
        }
        first = false;
        let start = i;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        let n: i64 = if i > start { text[start..i].parse().map_err(|_| perr(start, "bad coefficient"))? } else { 1 };
        skip_ws(&mut i);
        if i < bytes.len() && bytes[i] == b'*' {
            i += 1;
            skip_ws(&mut i);
        }
        if i >= bytes.len() || bytes[i] != b'(' {
            return Err(perr(i, "expected '(' starting a place"));
        }
        let open = i;
        let mut depth = 0;
        while i < bytes.len() {
            match bytes[i] {
                b'(' => depth += 1,
                b')' => {
                    depth -= 1;
                    if depth == 0 {
                        break;
                    }
                }
                _ => {}
            }
            i += 1;
        }
        if i >= bytes.len() {
            return Err(perr(open, "unbalanced parentheses"));
        }
        let place = parse_place_at(c, &text[open..=i], open)?;
        d.add_term(place, sign * n);
        i += 1;
        skip_ws(&mut i);
    }
    if first {
        return Err(perr(0, "empty divisor"));
    }
    Ok(d)
}

impl CurveModel {
    /// Divisor in the parser's notation.
    pub fn format_divisor(&self, d: &Divisor) -> String {
        if d.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (i, (p, n)) in d.iter().enumerate() {
            let body = self.format_place(p);
            let (sign, m) = if n < 0 { ("-", -n) } else { ("+", n) };
            if i == 0 {
                if n < 0 {
                    s.push('-');
                }
            } else {
                s.push_str(&format!(" {sign} "));
            }
            if m != 1 {
                s.push_str(&m.to_string());
            }
            s.push_str(&body);
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EX1: &str = "y^2 + (x^2 + x + 1)y + x^5 + x^4 + x^2 + x";

    #[test]
    fn parses_example_curve() {
        let c = parse_curve(2, EX1).unwrap();
        assert_eq!(c.genus(), 2);
        assert_eq!(c.h(), &Poly::new(vec![1, 1, 1]));
        assert_eq!(c.f(), &Poly::new(vec![0, 1, 1, 0, 1, 1]));
        assert_eq!(parse_curve(2, &c.display()).unwrap(), c);
        let c3 = parse_curve(3, "y^2 + 2x^6 + x^5 + 2x^4 + x^3 + 2x^2 + x + 2").unwrap();
        assert_eq!(c3.genus(), 2);
        assert!(c3.h().is_zero());
        let c4 = parse_curve(4, "y^2 + (x^2 + x)y + x^5 + x^3 + a^2x^2 + a^2x").unwrap();
        assert_eq!(c4.f(), &Poly::new(vec![0, 3, 3, 1, 0, 1]));
        assert!(matches!(parse_curve(2, "y^2 + x^5 + x"), Err(CurveError::SingularModel(_))));
    }

    #[test]
    fn parses_places() {
        let c = parse_curve(2, EX1).unwrap();
        let p = parse_place(&c, "(x + 1, y + 1)").unwrap();
        assert_eq!(p.degree(), 1);
        assert_eq!(p.fiber, Fiber::Split(Poly::one()));
        // unreduced second generator
        let q = parse_place(&c, "(z + 1, y + z + 1)").unwrap();
        assert_eq!(q.fiber, Fiber::Split(Poly::zero()));
        let inf = parse_place(&c, "(1/z, y/z^3)").unwrap();
        assert_eq!(inf.chart, Chart::Infinite);
        assert_eq!(parse_place(&c, "(1/x)").unwrap(), inf);
        assert!(matches!(parse_place(&c, "(x)"), Err(CurveError::AmbiguousPlace(_))));
        assert!(matches!(parse_place(&c, "(x^2 + 1, y)"), Err(CurveError::UnknownPlace(_))));
    }

    #[test]
    fn parses_divisors() {
        let c = parse_curve(2, EX1).unwrap();
        let d = parse_divisor(&c, "3(z + 1, y + z + 1)").unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d.degree(), 3);
        assert!(parse_divisor(&c, "0").unwrap().is_zero());
        let c2 = parse_curve(2, "y^2 + (x^3 + x + 1)y + x^6 + x^5 + x^4 + x^2").unwrap();
        let d2 = parse_divisor(&c2, "(x^2 + x + 1, y + x + 1) + 3(x^2 + x + 1, y + x^2 + x)").unwrap();
        assert_eq!(d2.len(), 2);
        assert_eq!(d2.degree(), 8);
        let back = parse_divisor(&c2, &c2.format_divisor(&d2)).unwrap();
        assert_eq!(back, d2);
    }

    #[test]
    fn infinite_forms_over_f5() {
        let c = parse_curve(5, "y^2 + 4z^6 + 2z^5 + 3z^3 + 4z^2 + 1").unwrap();
        let a = parse_place(&c, "(1/z, 1/z^3y + 1)").unwrap();
        let b = parse_place(&c, "(1/z, y/z^3 + 1)").unwrap();
        assert_eq!(a, b);
        assert_eq!(a.fiber, Fiber::Split(Poly::constant(4)));
        let s = parse_place_set(&c, "{(1/z, 1/z^3y + 1), (1/z, y/z^3 + 4), (z + 1, y + 1)}").unwrap();
        assert_eq!(s.len(), 3);
        assert_ne!(s[0], s[1]);
    }

    #[test]
    fn format_roundtrip_all_small_places() {
        for (q, text) in [(2, EX1), (3, "y^2 + x^5 + x^4 + x^2 + 2x"), (4, "y^2 + (x^2 + x)y + x^5 + x^3 + a^2x^2 + a^2x")] {
            let c = parse_curve(q, text).unwrap();
            for p in c.places_up_to(3) {
                let s = c.format_place(&p);
                assert_eq!(parse_place(&c, &s).unwrap(), p, "{s}");
            }
        }
    }

    #[test]
    fn unicode_superscripts() {
        let e = Expr::parse("x³ + 2x²y").unwrap();
        assert_eq!(e, Expr::parse("x^3 + 2*x^2*y").unwrap());
    }

    #[test]
    fn parse_errors_have_positions() {
        let c = parse_curve(2, EX1).unwrap();
        match parse_divisor(&c, "2(x + 1, y + 1) + (x, y + #)") {
            Err(CurveError::Parse { pos, .. }) => assert_eq!(pos, 26),
            other => panic!("{other:?}"),
        }
    }
}
