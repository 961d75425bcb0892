//! Text syntax: Laurent expressions in `t`, `pi`, `g`; Witt vectors
//! `[x; y]`; symbols `{a, b} - 2*{c, d}`; two-forms `x * dlog t ^ dlog pi`
//! or `x * dt ^ dpi`; rational functions in `T`.

use crate::asw::WK;
use crate::coeff::FqField;
use crate::error::{Error, Result};
use crate::forms::Form2;
use crate::milnor::MilnorSym;
use crate::ring::{Precision, Ring};
use crate::series::KElt;
use crate::weil::{Poly, RatFn};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(i64),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            out.push(Tok::Num(text.parse().map_err(|_| Error::Parse(format!("integer {text} too large")))?));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphabetic() {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character '{c}'")));
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
enum Expr {
    Num(i64),
    Var(String),
    Neg(Box<Expr>),
    Bin(char, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Bin('+', Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Bin('-', Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Bin('*', Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = Expr::Bin('/', Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.eat('+') {
            return self.unary();
        }
        let base = self.atom()?;
        if self.eat('^') {
            let neg = self.eat('-');
            if !neg {
                self.eat('+');
            }
            match self.peek() {
                Some(Tok::Num(k)) => {
                    let k = *k;
                    self.pos += 1;
                    return Ok(Expr::Pow(Box::new(base), if neg { -k } else { k }));
                }
                _ => return Err(Error::Parse("exponent must be an integer".into())),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek().cloned() {
            Some(Tok::Num(k)) => {
                self.pos += 1;
                Ok(Expr::Num(k))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                Ok(Expr::Var(name))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(Error::Parse("missing ')'".into()));
                }
                Ok(e)
            }
            Some(t) => Err(Error::Parse(format!("unexpected token {t:?}"))),
            None => Err(Error::Parse("unexpected end of input".into())),
        }
    }
}

fn parse_expr(s: &str) -> Result<Expr> {
    let mut p = Parser { toks: tokenize(s)?, pos: 0 };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!("trailing input in '{s}'")));
    }
    Ok(e)
}

trait Algebra {
    type V: Clone;
    fn num(&self, k: i64) -> Self::V;
    fn var(&self, name: &str) -> Result<Self::V>;
    fn add(&self, a: &Self::V, b: &Self::V) -> Result<Self::V>;
    fn sub(&self, a: &Self::V, b: &Self::V) -> Result<Self::V>;
    fn mul(&self, a: &Self::V, b: &Self::V) -> Result<Self::V>;
    fn div(&self, a: &Self::V, b: &Self::V) -> Result<Self::V>;
    fn pow(&self, a: &Self::V, k: i64) -> Result<Self::V>;

    fn eval(&self, e: &Expr) -> Result<Self::V> {
        Ok(match e {
            Expr::Num(k) => self.num(*k),
            Expr::Var(v) => self.var(v)?,
            Expr::Neg(x) => self.sub(&self.num(0), &self.eval(x)?)?,
            Expr::Pow(x, k) => self.pow(&self.eval(x)?, *k)?,
            Expr::Bin(op, a, b) => {
                let (a, b) = (self.eval(a)?, self.eval(b)?);
                match op {
                    '+' => self.add(&a, &b)?,
                    '-' => self.sub(&a, &b)?,
                    '*' => self.mul(&a, &b)?,
                    _ => self.div(&a, &b)?,
                }
            }
        })
    }
}

struct KAlg<'a> {
    field: &'static FqField,
    prec: &'a Precision,
}

impl Algebra for KAlg<'_> {
    type V = KElt;
    fn num(&self, k: i64) -> KElt {
        KElt::term(self.field.from_int(k), 0, 0)
    }
    fn var(&self, name: &str) -> Result<KElt> {
        let one = self.field.one();
        match name {
            "t" => Ok(KElt::term(one, 1, 0)),
            "pi" => Ok(KElt::term(one, 0, 1)),
            "g" => Ok(KElt::term(
                self.field.generator().ok_or_else(|| Error::Parse("prime field has no generator g".into()))?,
                0,
                0,
            )),
            other => Err(Error::Parse(format!("unknown variable '{other}'"))),
        }
    }
    fn add(&self, a: &KElt, b: &KElt) -> Result<KElt> {
        a.add(b)
    }
    fn sub(&self, a: &KElt, b: &KElt) -> Result<KElt> {
        a.sub(b)
    }
    fn mul(&self, a: &KElt, b: &KElt) -> Result<KElt> {
        a.mul(b)
    }
    fn div(&self, a: &KElt, b: &KElt) -> Result<KElt> {
        a.mul(&b.inverse(self.prec)?)
    }
    fn pow(&self, a: &KElt, k: i64) -> Result<KElt> {
        let base = if k < 0 { a.inverse(self.prec)? } else { a.clone() };
        base.pow(k.unsigned_abs())
    }
}

struct RatAlg {
    field: &'static FqField,
}

impl Algebra for RatAlg {
    type V = RatFn;
    fn num(&self, k: i64) -> RatFn {
        RatFn::poly(Poly::constant(self.field.from_int(k)))
    }
    fn var(&self, name: &str) -> Result<RatFn> {
        match name {
            "T" => Ok(RatFn::poly(Poly::x(self.field))),
            "g" => Ok(RatFn::poly(Poly::constant(
                self.field.generator().ok_or_else(|| Error::Parse("prime field has no generator g".into()))?,
            ))),
            other => Err(Error::Parse(format!("unknown variable '{other}' (rational functions use T)"))),
        }
    }
    fn add(&self, a: &RatFn, b: &RatFn) -> Result<RatFn> {
        a.add(b)
    }
    fn sub(&self, a: &RatFn, b: &RatFn) -> Result<RatFn> {
        a.sub(b)
    }
    fn mul(&self, a: &RatFn, b: &RatFn) -> Result<RatFn> {
        a.mul(b)
    }
    fn div(&self, a: &RatFn, b: &RatFn) -> Result<RatFn> {
        a.div(b)
    }
    fn pow(&self, a: &RatFn, k: i64) -> Result<RatFn> {
        a.pow(k)
    }
}

/// A Laurent expression in `t`, `pi` and `g`.
pub fn parse_k(field: &'static FqField, s: &str, prec: &Precision) -> Result<KElt> {
    KAlg { field, prec }.eval(&parse_expr(s)?)
}

/// A rational function in `T`; must be nonzero.
pub fn parse_ratfn(field: &'static FqField, s: &str) -> Result<RatFn> {
    let f = RatAlg { field }.eval(&parse_expr(s)?)?;
    if f.is_zero() {
        return Err(Error::Parse("rational function must be nonzero".into()));
    }
    Ok(f)
}

/// `[w_0; w_1; ...]`.
pub fn parse_witt(field: &'static FqField, s: &str, prec: &Precision) -> Result<WK> {
    let inner = s
        .trim()
        .strip_prefix('[')
        .and_then(|x| x.strip_suffix(']'))
        .ok_or_else(|| Error::Parse("Witt vector must look like [x; y; ...]".into()))?;
    let comps = inner.split(';').map(|c| parse_k(field, c, prec)).collect::<Result<Vec<_>>>()?;
    WK::new(field.p(), field, comps)
}

/// `{a, b}` terms joined by `+`/`-`, each optionally prefixed by `k*`.
pub fn parse_symbol(field: &'static FqField, s: &str, prec: &Precision) -> Result<MilnorSym> {
    let mut terms = Vec::new();
    let mut rest = s.trim();
    let mut sign = 1;
    loop {
        rest = rest.trim_start();
        if let Some(r) = rest.strip_prefix('-') {
            sign = -sign;
            rest = r;
            continue;
        }
        if let Some(r) = rest.strip_prefix('+') {
            rest = r;
            continue;
        }
        let open = rest.find('{').ok_or_else(|| Error::Parse(format!("expected '{{' in '{rest}'")))?;
        let prefix = rest[..open].trim();
        let k: i64 = match prefix.strip_suffix('*') {
            Some(num) => num.trim().parse().map_err(|_| Error::Parse(format!("bad symbol coefficient '{num}'")))?,
            None if prefix.is_empty() => 1,
            None => return Err(Error::Parse(format!("unexpected '{prefix}' before symbol"))),
        };
        let close = rest[open..].find('}').ok_or_else(|| Error::Parse("missing '}'".into()))? + open;
        let body = &rest[open + 1..close];
        let (a, b) = split_top_comma(body)?;
        terms.push((sign * k, parse_k(field, a, prec)?, parse_k(field, b, prec)?));
        rest = rest[close + 1..].trim_start();
        sign = 1;
        if rest.is_empty() {
            break;
        }
        if !rest.starts_with(['+', '-']) {
            return Err(Error::Parse(format!("expected '+' or '-' before '{rest}'")));
        }
    }
    MilnorSym::from_terms(terms)
}

fn split_top_comma(s: &str) -> Result<(&str, &str)> {
    let mut depth = 0i32;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => return Ok((&s[..i], &s[i + 1..])),
            _ => {}
        }
    }
    Err(Error::Parse(format!("symbol '{{{s}}}' needs two entries")))
}

/// `x * dlog t ^ dlog pi` or `x * dt ^ dpi`; a bare basis means `x = 1`.
pub fn parse_form2(field: &'static FqField, s: &str, prec: &Precision) -> Result<Form2> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    for (suffix, log) in [("dlogt^dlogpi", true), ("dt^dpi", false)] {
        if let Some(head) = compact.strip_suffix(suffix) {
            let coeff = match head.strip_suffix('*') {
                Some(x) => parse_k(field, x, prec)?,
                None if head.is_empty() => KElt::one(field),
                None => return Err(Error::Parse(format!("expected '*' before '{suffix}'"))),
            };
            return Ok(if log { Form2::from_log(coeff) } else { Form2::from_omega(coeff) });
        }
    }
    Err(Error::Parse("form must end in 'dlog t ^ dlog pi' or 'dt ^ dpi'".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::field;

    fn prec() -> Precision {
        Precision::default()
    }

    #[test]
    fn laurent_expressions() {
        let f = field(2, 2).unwrap();
        let x = parse_k(f, "t^-0*pi^-2", &prec()).unwrap();
        assert_eq!(x, KElt::term(f.one(), 0, -2));
        let y = parse_k(f, "(g+1)*t*pi^-1 + t^3", &prec()).unwrap();
        let g = f.generator().unwrap();
        assert_eq!(y.coeff2(1, -1).unwrap(), g.add(f.one()));
        assert_eq!(y.coeff2(3, 0).unwrap(), f.one());
        assert!(parse_k(f, "t +", &prec()).is_err());
        assert!(parse_k(f, "x", &prec()).is_err());
        let z = parse_k(f, "1/(1+pi)", &prec()).unwrap();
        assert!(z.mul(&parse_k(f, "1+pi", &prec()).unwrap()).unwrap().is_one_within_window().unwrap());
    }

    #[test]
    fn display_round_trips() {
        let f = field(3, 2).unwrap();
        for s in ["2*t^-3*pi^-1 + g*t", "(g+2)*t*pi^2 + pi^-4", "t^-1 - 1"] {
            let x = parse_k(f, s, &prec()).unwrap();
            assert_eq!(parse_k(f, &x.to_string(), &prec()).unwrap(), x, "{s} -> {x}");
        }
    }

    #[test]
    fn witt_and_symbols() {
        let f = field(2, 1).unwrap();
        let w = parse_witt(f, "[pi^-1; t*pi^-2]", &prec()).unwrap();
        assert_eq!(w.len(), 2);
        let s = parse_symbol(f, "{t, pi} - 2*{1+pi, t}", &prec()).unwrap();
        assert_eq!(s.terms().len(), 2);
        assert_eq!(s.terms()[1].0, -2);
        assert!(parse_symbol(f, "{t}", &prec()).is_err());
        assert!(parse_symbol(f, "{0, t}", &prec()).is_err());
    }

    #[test]
    fn forms() {
        let f = field(2, 1).unwrap();
        let a = parse_form2(f, "t^2 * dlog t ^ dlog pi", &prec()).unwrap();
        assert_eq!(a.log_coeff(), &KElt::term(f.one(), 2, 0));
        let b = parse_form2(f, "t^-1*pi^-1 * dt ^ dpi", &prec()).unwrap();
        assert_eq!(b.log_coeff(), &KElt::one(f));
        assert!(parse_form2(f, "t", &prec()).is_err());
    }

    #[test]
    fn rational_functions() {
        let f = field(2, 1).unwrap();
        let r = parse_ratfn(f, "(T^2+T)/(T+1)").unwrap();
        assert_eq!(r, parse_ratfn(f, "T").unwrap());
        assert!(parse_ratfn(f, "T-T").is_err());
        assert!(parse_ratfn(f, "1/(T-T)").is_err());
    }
}
