//! The finite field `F_q`, `q = p^e`, with Frobenius, inverse Frobenius and
//! the absolute trace to `Z/p`.
//!
//! Elements are stored as an index `v = sum c_i p^i`, where `c_i` is the
//! coefficient of `g^i` and `g` is a root of the canonical modulus. Every
//! operation is a table lookup; the tables for a given `(p, e)` are built
//! once and leaked, so `FqElem` is `Copy`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::ring::{Coeff, Precision, Ring};

pub const SUPPORTED_PRIMES: [u32; 3] = [2, 3, 5];
pub const MAX_DEGREE: u32 = 3;

pub struct FqField {
    p: u32,
    e: u32,
    q: usize,
    /// Canonical modulus, coefficients low degree first, monic of length e+1.
    modulus: Vec<u32>,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
    frob: Vec<u16>,
    frob_inv: Vec<u16>,
    trace: Vec<u8>,
}

impl fmt::Debug for FqField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{}", self.p, self.e)
    }
}

static FIELDS: OnceLock<Mutex<HashMap<(u32, u32), &'static FqField>>> = OnceLock::new();

/// The field `F_{p^e}`; built on first use and shared afterwards.
pub fn field(p: u32, e: u32) -> Result<&'static FqField> {
    if !SUPPORTED_PRIMES.contains(&p) {
        return Err(Error::InvalidContext(format!("p = {p} not in {{2, 3, 5}}")));
    }
    if e == 0 || e > MAX_DEGREE {
        return Err(Error::InvalidContext(format!("e = {e} not in 1..=3")));
    }
    let map = FIELDS.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(f) = map.lock().unwrap().get(&(p, e)) {
        return Ok(f);
    }
    // Built outside the lock; a concurrent duplicate build is harmless.
    let built: &'static FqField = Box::leak(Box::new(FqField::build(p, e)));
    let mut guard = map.lock().unwrap();
    Ok(*guard.entry((p, e)).or_insert(built))
}

/// Lexicographically smallest monic irreducible of degree `e` over `Z/p`,
/// comparing coefficients from the constant term upward.
pub fn canonical_modulus(p: u32, e: u32) -> Vec<u32> {
    let e = e as usize;
    let count = (p as usize).pow(e as u32);
    // Enumerate tuples (c_0, ..., c_{e-1}) with c_0 most significant.
    for idx in 0..count {
        let mut coeffs = vec![0u32; e + 1];
        let mut rest = idx;
        for i in (0..e).rev() {
            coeffs[i] = (rest % p as usize) as u32;
            rest /= p as usize;
        }
        coeffs[e] = 1;
        if is_irreducible_small(&coeffs, p) {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

// Degree <= 3: irreducible iff no root in F_p.
fn is_irreducible_small(coeffs: &[u32], p: u32) -> bool {
    let deg = coeffs.len() - 1;
    if deg == 1 {
        return true;
    }
    debug_assert!(deg <= 3);
    !(0..p).any(|x| {
        let mut acc = 0u32;
        for &c in coeffs.iter().rev() {
            acc = (acc * x + c) % p;
        }
        acc == 0
    })
}

impl FqField {
    fn build(p: u32, e: u32) -> FqField {
        let q = (p as usize).pow(e);
        let modulus = canonical_modulus(p, e);
        let digits = |v: usize| -> Vec<u32> {
            let mut out = vec![0u32; e as usize];
            let mut r = v;
            for d in out.iter_mut() {
                *d = (r % p as usize) as u32;
                r /= p as usize;
            }
            out
        };
        let index = |d: &[u32]| -> usize {
            d.iter().rev().fold(0usize, |acc, &c| acc * p as usize + c as usize)
        };
        let mut add = vec![0u16; q * q];
        let mut mul = vec![0u16; q * q];
        for a in 0..q {
            let da = digits(a);
            for b in 0..q {
                let db = digits(b);
                let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a * q + b] = index(&s) as u16;
                // Schoolbook product, then reduce by the monic modulus.
                let mut prod = vec![0u32; 2 * e as usize];
                for (i, x) in da.iter().enumerate() {
                    for (j, y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                for k in (e as usize..prod.len()).rev() {
                    let c = prod[k];
                    if c == 0 {
                        continue;
                    }
                    prod[k] = 0;
                    for i in 0..e as usize {
                        let sub = c * modulus[i] % p;
                        let slot = k - e as usize + i;
                        prod[slot] = (prod[slot] + p - sub) % p;
                    }
                }
                mul[a * q + b] = index(&prod[..e as usize]) as u16;
            }
        }
        let mut neg = vec![0u16; q];
        let mut inv = vec![0u16; q];
        for a in 0..q {
            for b in 0..q {
                if add[a * q + b] == 0 {
                    neg[a] = b as u16;
                }
                if mul[a * q + b] == 1 {
                    inv[a] = b as u16;
                }
            }
        }
        let pow = |a: usize, k: u32| -> usize {
            let mut acc = 1usize;
            for _ in 0..k {
                acc = mul[acc * q + a] as usize;
            }
            acc
        };
        let mut frob = vec![0u16; q];
        let mut frob_inv = vec![0u16; q];
        for a in 0..q {
            let b = if a == 0 { 0 } else { pow(a, p) };
            frob[a] = b as u16;
            frob_inv[b] = a as u16;
        }
        let mut trace = vec![0u8; q];
        for a in 0..q {
            let mut acc = 0usize;
            let mut conj = a;
            for _ in 0..e {
                acc = add[acc * q + conj] as usize;
                conj = frob[conj] as usize;
            }
            debug_assert!(acc < p as usize, "trace lands in the prime field");
            trace[a] = acc as u8;
        }
        FqField { p, e, q, modulus, add, mul, neg, inv, frob, frob_inv, trace }
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn e(&self) -> u32 {
        self.e
    }
    pub fn q(&self) -> usize {
        self.q
    }
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zero(&'static self) -> FqElem {
        FqElem { field: self, v: 0 }
    }
    pub fn one(&'static self) -> FqElem {
        FqElem { field: self, v: 1 }
    }

    /// Image of an integer under `Z -> F_p -> F_q`.
    pub fn from_int(&'static self, k: i64) -> FqElem {
        let p = self.p as i64;
        FqElem { field: self, v: k.rem_euclid(p) as u16 }
    }

    /// Element with the given coefficients of `1, g, g^2, ...`.
    pub fn from_coeffs(&'static self, coeffs: &[i64]) -> Result<FqElem> {
        if coeffs.len() > self.e as usize {
            return Err(Error::Parse(format!(
                "{} coefficients given for a degree-{} field",
                coeffs.len(),
                self.e
            )));
        }
        let p = self.p as i64;
        let v = coeffs.iter().rev().fold(0usize, |acc, &c| acc * self.p as usize + c.rem_euclid(p) as usize);
        Ok(FqElem { field: self, v: v as u16 })
    }

    /// The class `g` of the polynomial variable; `None` for prime fields.
    pub fn generator(&'static self) -> Option<FqElem> {
        (self.e > 1).then_some(FqElem { field: self, v: self.p as u16 })
    }

    pub fn element(&'static self, index: usize) -> FqElem {
        assert!(index < self.q);
        FqElem { field: self, v: index as u16 }
    }

    pub fn elements(&'static self) -> impl Iterator<Item = FqElem> {
        (0..self.q).map(move |v| FqElem { field: self, v: v as u16 })
    }

    /// `1, g, ..., g^{e-1}`: a basis of `F_q` over `F_p`.
    pub fn basis(&'static self) -> Vec<FqElem> {
        (0..self.e).map(|i| FqElem { field: self, v: (self.p as u16).pow(i) }).collect()
    }

    /// Parses the textual form `2*g^2+g+1` (integers and powers of `g`
    /// joined by `+`/`-`).
    pub fn parse(&'static self, s: &str) -> Result<FqElem> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Parse("empty F_q literal".into()));
        }
        let mut acc = self.zero();
        let mut rest = compact.as_str();
        while !rest.is_empty() {
            let (negative, body) = match rest.as_bytes()[0] {
                b'+' => (false, &rest[1..]),
                b'-' => (true, &rest[1..]),
                _ => (false, rest),
            };
            let end = body.find(['+', '-']).unwrap_or(body.len());
            let term = self.parse_term(&body[..end])?;
            acc = if negative { acc.sub(term) } else { acc.add(term) };
            rest = &body[end..];
        }
        Ok(acc)
    }

    fn parse_term(&'static self, term: &str) -> Result<FqElem> {
        let bad = || Error::Parse(format!("bad F_q term '{term}'"));
        let (coef, power) = match term.split_once('*') {
            Some((c, g)) => (c.parse::<i64>().map_err(|_| bad())?, Some(g)),
            None if term.starts_with('g') => (1, Some(term)),
            None => (term.parse::<i64>().map_err(|_| bad())?, None),
        };
        let k = match power {
            None => 0,
            Some("g") => 1,
            Some(g) => g.strip_prefix("g^").and_then(|k| k.parse::<u32>().ok()).ok_or_else(bad)?,
        };
        let base = if k == 0 {
            self.one()
        } else {
            self.generator()
                .ok_or_else(|| Error::Parse("prime field has no generator g".into()))?
                .pow_i(k as i64)?
        };
        Ok(base.mul(self.from_int(coef)))
    }
}

/// Element of `F_q`.
#[derive(Clone, Copy)]
pub struct FqElem {
    field: &'static FqField,
    v: u16,
}

impl PartialEq for FqElem {
    fn eq(&self, other: &Self) -> bool {
        self.v == other.v && std::ptr::eq(self.field, other.field)
    }
}
impl Eq for FqElem {}

impl std::hash::Hash for FqElem {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.v.hash(state);
    }
}

impl FqElem {
    pub fn field(&self) -> &'static FqField {
        self.field
    }

    pub fn index(&self) -> usize {
        self.v as usize
    }

    /// Coefficients of `1, g, ..., g^{e-1}`.
    pub fn coeffs(&self) -> Vec<u32> {
        let p = self.field.p as usize;
        let mut r = self.v as usize;
        (0..self.field.e)
            .map(|_| {
                let d = (r % p) as u32;
                r /= p;
                d
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.v == 0
    }
    pub fn is_one(&self) -> bool {
        self.v == 1
    }

    pub fn add(self, o: FqElem) -> FqElem {
        let q = self.field.q;
        FqElem { field: self.field, v: self.field.add[self.v as usize * q + o.v as usize] }
    }
    pub fn sub(self, o: FqElem) -> FqElem {
        self.add(o.neg())
    }
    pub fn neg(self) -> FqElem {
        FqElem { field: self.field, v: self.field.neg[self.v as usize] }
    }
    pub fn mul(self, o: FqElem) -> FqElem {
        let q = self.field.q;
        FqElem { field: self.field, v: self.field.mul[self.v as usize * q + o.v as usize] }
    }
    pub fn inv(self) -> Result<FqElem> {
        if self.v == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(FqElem { field: self.field, v: self.field.inv[self.v as usize] })
    }
    pub fn div(self, o: FqElem) -> Result<FqElem> {
        Ok(self.mul(o.inv()?))
    }
    pub fn pow_i(self, k: i64) -> Result<FqElem> {
        let base = if k < 0 { self.inv()? } else { self };
        let mut acc = self.field.one();
        for _ in 0..k.unsigned_abs() {
            acc = acc.mul(base);
        }
        Ok(acc)
    }

    /// `a^p`.
    pub fn frob(self) -> FqElem {
        FqElem { field: self.field, v: self.field.frob[self.v as usize] }
    }
    /// The unique `b` with `b^p = a`.
    pub fn frob_inv(self) -> FqElem {
        FqElem { field: self.field, v: self.field.frob_inv[self.v as usize] }
    }

    /// Absolute trace `F_q -> Z/p`, returned as an integer in `[0, p)`.
    pub fn trace(self) -> u32 {
        self.field.trace[self.v as usize] as u32
    }

    /// Integer value for elements of the prime field.
    pub fn as_prime(self) -> Option<u32> {
        ((self.v as u32) < self.field.p).then_some(self.v as u32)
    }
}

/// Arithmetic dispatcher with the operation named as data; used by the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FqOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn fq_arith(a: FqElem, b: FqElem, op: FqOp) -> Result<FqElem> {
    Ok(match op {
        FqOp::Add => a.add(b),
        FqOp::Sub => a.sub(b),
        FqOp::Mul => a.mul(b),
        FqOp::Div => a.div(b)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

pub fn frobenius(a: FqElem, direction: Direction) -> FqElem {
    match direction {
        Direction::Forward => a.frob(),
        Direction::Inverse => a.frob_inv(),
    }
}

impl fmt::Display for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.v == 0 {
            return write!(f, "0");
        }
        let coeffs = self.coeffs();
        let mut first = true;
        for (i, &c) in coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            match (i, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "g")?,
                (1, c) => write!(f, "{c}*g")?,
                (i, 1) => write!(f, "g^{i}")?,
                (i, c) => write!(f, "{c}*g^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Ring for FqElem {
    type Ctx = &'static FqField;

    fn ctx(&self) -> Self::Ctx {
        self.field
    }
    fn zero(ctx: Self::Ctx) -> Self {
        ctx.zero()
    }
    fn one(ctx: Self::Ctx) -> Self {
        ctx.one()
    }
    fn is_zero(&self) -> bool {
        self.v == 0
    }
    fn add(&self, rhs: &Self) -> Result<Self> {
        Ok(FqElem::add(*self, *rhs))
    }
    fn sub(&self, rhs: &Self) -> Result<Self> {
        Ok(FqElem::sub(*self, *rhs))
    }
    fn neg(&self) -> Self {
        FqElem::neg(*self)
    }
    fn mul(&self, rhs: &Self) -> Result<Self> {
        Ok(FqElem::mul(*self, *rhs))
    }
    fn scale(&self, k: i64) -> Self {
        FqElem::mul(*self, self.field.from_int(k))
    }
    fn characteristic(ctx: Self::Ctx) -> u32 {
        ctx.p
    }
}

impl Coeff for FqElem {
    const LEVEL: usize = 0;

    fn certified_nonzero(&self) -> bool {
        self.v != 0
    }
    fn is_exact(&self) -> bool {
        true
    }
    fn inv(&self, _prec: &Precision) -> Result<Self> {
        FqElem::inv(*self)
    }
    fn frobenius(&self) -> Self {
        self.frob()
    }
    fn pth_root(&self) -> Result<Self> {
        Ok(self.frob_inv())
    }
    fn cartier_part(&self) -> Result<Self> {
        Ok(self.frob_inv())
    }
    fn render(&self) -> String {
        self.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_moduli() {
        assert_eq!(canonical_modulus(2, 1), vec![0, 1]);
        assert_eq!(canonical_modulus(2, 2), vec![1, 1, 1]);
        // x^3 + x^2 + 1 beats x^3 + x + 1 when comparing from the constant term.
        assert_eq!(canonical_modulus(2, 3), vec![1, 0, 1, 1]);
        assert_eq!(canonical_modulus(3, 2), vec![1, 0, 1]);
    }

    #[test]
    fn char_two_addition() {
        let f = field(2, 1).unwrap();
        assert_eq!(fq_arith(f.one(), f.one(), FqOp::Add).unwrap(), f.zero());
    }

    #[test]
    fn f4_generator_squares() {
        let f = field(2, 2).unwrap();
        let g = f.generator().unwrap();
        let g_plus_1 = g.add(f.one());
        assert_eq!(fq_arith(g, g, FqOp::Mul).unwrap(), g_plus_1);
        assert_eq!(frobenius(g, Direction::Forward), g_plus_1);
        assert_eq!(g_plus_1.to_string(), "g+1");
    }

    #[test]
    fn division_identity_and_zero() {
        for (p, e) in [(2, 3), (3, 2), (5, 1)] {
            let f = field(p, e).unwrap();
            for x in f.elements() {
                assert_eq!(fq_arith(x, f.one(), FqOp::Div).unwrap(), x);
                assert_eq!(fq_arith(x, f.zero(), FqOp::Div), Err(Error::DivisionByZero));
            }
        }
    }

    #[test]
    fn frobenius_round_trip_f8() {
        let f = field(2, 3).unwrap();
        for x in f.elements() {
            assert_eq!(frobenius(frobenius(x, Direction::Forward), Direction::Inverse), x);
        }
        assert_eq!(frobenius(f.one(), Direction::Inverse), f.one());
    }

    #[test]
    fn traces() {
        let f2 = field(2, 1).unwrap();
        assert_eq!(f2.one().trace(), 1);
        let f4 = field(2, 2).unwrap();
        assert_eq!(f4.generator().unwrap().trace(), 1);
        assert_eq!(f4.one().trace(), 0);
    }

    #[test]
    fn field_axioms_and_frobenius_exhaustive() {
        for p in SUPPORTED_PRIMES {
            for e in 1..=MAX_DEGREE {
                let f = field(p, e).unwrap();
                if f.q() > 32 {
                    continue;
                }
                let mut onto = vec![false; p as usize];
                for a in f.elements() {
                    assert_eq!(a.frob().trace(), a.trace());
                    onto[a.trace() as usize] = true;
                    if !a.is_zero() {
                        assert_eq!(a.mul(a.inv().unwrap()), f.one());
                    }
                    for b in f.elements() {
                        assert_eq!(a.mul(b).frob(), a.frob().mul(b.frob()));
                        assert_eq!(a.add(b).frob(), a.frob().add(b.frob()));
                        assert_eq!((a.add(b)).trace(), (a.trace() + b.trace()) % p);
                        for c in f.elements().step_by(3) {
                            assert_eq!(a.mul(b.add(c)), a.mul(b).add(a.mul(c)));
                            assert_eq!(a.mul(b).mul(c), a.mul(b.mul(c)));
                        }
                    }
                }
                assert!(onto.iter().all(|&x| x), "trace onto Z/p");
            }
        }
    }

    #[test]
    fn text_round_trip() {
        for (p, e) in [(2, 2), (3, 2), (2, 3), (5, 1)] {
            let f = field(p, e).unwrap();
            for x in f.elements() {
                assert_eq!(f.parse(&x.to_string()).unwrap(), x);
            }
        }
        let f9 = field(3, 2).unwrap();
        assert_eq!(f9.parse("g^2").unwrap(), f9.from_int(-1));
        assert!(field(2, 1).unwrap().parse("g").is_err());
    }

    #[test]
    fn bounds_enforced() {
        assert!(field(7, 1).is_err());
        assert!(field(2, 4).is_err());
        assert!(field(3, 0).is_err());
    }
}
