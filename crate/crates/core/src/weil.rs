//! Tame symbols of `K_2(F_q(T))` at the places of `P^1` and the reciprocity
//! product of their norms.

use std::fmt;

use rand::Rng;
use serde_json::{json, Value};

use crate::coeff::{FqElem, FqField};
use crate::error::{Error, Result};
use crate::sample;

/// Largest degree factored by trial division.
pub const MAX_FACTOR_DEGREE: usize = 6;

/// Polynomial over `F_q`, lowest degree first, without trailing zeros.
#[derive(Clone)]
pub struct Poly {
    field: &'static FqField,
    c: Vec<FqElem>,
}

impl PartialEq for Poly {
    fn eq(&self, o: &Poly) -> bool {
        self.c == o.c
    }
}

impl Eq for Poly {}

impl Poly {
    pub fn new(field: &'static FqField, mut c: Vec<FqElem>) -> Poly {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Poly { field, c }
    }

    pub fn constant(x: FqElem) -> Poly {
        Poly::new(x.field(), vec![x])
    }

    pub fn zero(field: &'static FqField) -> Poly {
        Poly { field, c: Vec::new() }
    }

    pub fn one(field: &'static FqField) -> Poly {
        Poly::constant(field.one())
    }

    /// `T`.
    pub fn x(field: &'static FqField) -> Poly {
        Poly::new(field, vec![field.zero(), field.one()])
    }

    pub fn field(&self) -> &'static FqField {
        self.field
    }

    pub fn coeffs(&self) -> &[FqElem] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree; the zero polynomial has none.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn lc(&self) -> FqElem {
        self.c.last().copied().unwrap_or(self.field.zero())
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        let z = self.field.zero();
        let c = (0..n)
            .map(|i| self.c.get(i).copied().unwrap_or(z).add(o.c.get(i).copied().unwrap_or(z)))
            .collect();
        Poly::new(self.field, c)
    }

    pub fn neg(&self) -> Poly {
        Poly::new(self.field, self.c.iter().map(|x| x.neg()).collect())
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero(self.field);
        }
        let mut c = vec![self.field.zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] = c[i + j].add(a.mul(*b));
            }
        }
        Poly::new(self.field, c)
    }

    pub fn scale(&self, k: FqElem) -> Poly {
        Poly::new(self.field, self.c.iter().map(|x| x.mul(k)).collect())
    }

    pub fn divrem(&self, d: &Poly) -> Result<(Poly, Poly)> {
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let inv = d.lc().inv()?;
        let mut r = self.c.clone();
        let mut q = vec![self.field.zero(); r.len().saturating_sub(dd)];
        while r.len() > dd {
            let k = r.len() - 1 - dd;
            let f = r[r.len() - 1].mul(inv);
            q[k] = f;
            for (i, x) in d.c.iter().enumerate() {
                r[k + i] = r[k + i].sub(f.mul(*x));
            }
            r.pop();
            while r.last().is_some_and(|x| x.is_zero()) && r.len() > dd {
                r.pop();
            }
        }
        Ok((Poly::new(self.field, q), Poly::new(self.field, r)))
    }

    pub fn rem(&self, d: &Poly) -> Result<Poly> {
        Ok(self.divrem(d)?.1)
    }

    pub fn monic(&self) -> Result<Poly> {
        Ok(self.scale(self.lc().inv()?))
    }

    pub fn gcd(&self, o: &Poly) -> Result<Poly> {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        if a.is_zero() {
            return Ok(a);
        }
        a.monic()
    }

    /// Multiplicity of `p` in `self` and the cofactor.
    pub fn strip(&self, p: &Poly) -> Result<(i64, Poly)> {
        let mut k = 0;
        let mut cur = self.clone();
        loop {
            let (q, r) = cur.divrem(p)?;
            if !r.is_zero() {
                return Ok((k, cur));
            }
            cur = q;
            k += 1;
        }
    }

    /// Monic irreducible factors with multiplicity, ordered by degree and
    /// then coefficients.
    pub fn factor(&self) -> Result<Vec<(Poly, u32)>> {
        let deg = self.degree().ok_or(Error::DivisionByZero)?;
        if deg > MAX_FACTOR_DEGREE {
            return Err(Error::FactorizationBudgetExceeded(deg));
        }
        let mut cur = self.monic()?;
        let mut out: Vec<(Poly, u32)> = Vec::new();
        let mut d = 1;
        while cur.degree().is_some_and(|k| k > 0) {
            let k = cur.degree().unwrap_or(0);
            if 2 * d > k {
                // No factor of degree <= k/2 remains, so the rest is irreducible.
                out.push((cur.clone(), 1));
                break;
            }
            // Smaller factors are already stripped, so each hit is irreducible.
            for cand in monic_of_degree(self.field, d) {
                let (m, rest) = cur.strip(&cand)?;
                if m > 0 {
                    out.push((cand, m as u32));
                    cur = rest;
                }
            }
            d += 1;
        }
        out.sort_by_key(|a| poly_key(&a.0));
        Ok(out)
    }

    pub fn pow(&self, mut e: u64) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }
}

fn poly_key(p: &Poly) -> (usize, Vec<usize>) {
    (p.c.len(), p.c.iter().rev().map(|x| x.index()).collect())
}

/// All monic polynomials of degree `d`.
fn monic_of_degree(field: &'static FqField, d: usize) -> impl Iterator<Item = Poly> {
    let q = field.q();
    let count = q.pow(d as u32);
    (0..count).map(move |mut idx| {
        let mut c = Vec::with_capacity(d + 1);
        for _ in 0..d {
            c.push(field.element(idx % q));
            idx /= q;
        }
        c.push(field.one());
        Poly::new(field, c)
    })
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, x) in self.c.iter().enumerate().rev() {
            if x.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let coef = x.to_string();
            let coef = if coef.contains('+') { format!("({coef})") } else { coef };
            match i {
                0 => write!(f, "{coef}")?,
                _ => {
                    if !x.is_one() {
                        write!(f, "{coef}*")?;
                    }
                    if i == 1 {
                        write!(f, "T")?;
                    } else {
                        write!(f, "T^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A nonzero rational function `num / den`, kept reduced with monic `den`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatFn {
    pub num: Poly,
    pub den: Poly,
}

impl RatFn {
    pub fn new(num: Poly, den: Poly) -> Result<RatFn> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let g = num.gcd(&den)?;
        let (num, den) = if g.is_zero() { (num, den) } else { (num.divrem(&g)?.0, den.divrem(&g)?.0) };
        let lc = den.lc().inv()?;
        Ok(RatFn { num: num.scale(lc), den: den.scale(lc) })
    }

    pub fn poly(p: Poly) -> RatFn {
        let field = p.field();
        RatFn { num: p, den: Poly::one(field) }
    }

    pub fn field(&self) -> &'static FqField {
        self.num.field()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, o: &RatFn) -> Result<RatFn> {
        RatFn::new(self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den))
    }

    pub fn sub(&self, o: &RatFn) -> Result<RatFn> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> RatFn {
        RatFn { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, o: &RatFn) -> Result<RatFn> {
        RatFn::new(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    pub fn div(&self, o: &RatFn) -> Result<RatFn> {
        if o.is_zero() {
            return Err(Error::DivisionByZero);
        }
        RatFn::new(self.num.mul(&o.den), self.den.mul(&o.num))
    }

    pub fn pow(&self, k: i64) -> Result<RatFn> {
        let base = if k < 0 { RatFn::poly(Poly::one(self.field())).div(self)? } else { self.clone() };
        Ok(RatFn { num: base.num.pow(k.unsigned_abs()), den: base.den.pow(k.unsigned_abs()) })
    }
}

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.degree() == Some(0) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Place {
    Finite(Poly),
    Infinity,
}

impl Place {
    pub fn degree(&self) -> usize {
        match self {
            Place::Finite(p) => p.degree().unwrap_or(0),
            Place::Infinity => 1,
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(p) => write!(f, "({p})"),
            Place::Infinity => write!(f, "inf"),
        }
    }
}

/// Element of the residue field `F_q[T]/(P)`, reduced mod `P`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ResElem {
    pub value: Poly,
    pub modulus: Poly,
}

impl ResElem {
    pub fn new(value: &Poly, modulus: &Poly) -> Result<ResElem> {
        Ok(ResElem { value: value.rem(modulus)?, modulus: modulus.clone() })
    }

    pub fn mul(&self, o: &ResElem) -> Result<ResElem> {
        ResElem::new(&self.value.mul(&o.value), &self.modulus)
    }

    pub fn inv(&self) -> Result<ResElem> {
        // Extended Euclid on (value, modulus).
        let (mut r0, mut r1) = (self.modulus.clone(), self.value.clone());
        let field = self.modulus.field();
        let (mut s0, mut s1) = (Poly::zero(field), Poly::one(field));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1)?;
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s);
        }
        if r0.degree() != Some(0) {
            return Err(Error::ZeroDivision);
        }
        ResElem::new(&s0.scale(r0.lc().inv()?), &self.modulus)
    }

    pub fn pow(&self, k: i64) -> Result<ResElem> {
        let mut base = if k < 0 { self.inv()? } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = ResElem::new(&Poly::one(self.modulus.field()), &self.modulus)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            base = base.mul(&base)?;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Product of the `F_q`-conjugates `x^{q^i}`, `0 <= i < deg P`.
    pub fn norm(&self) -> Result<FqElem> {
        let q = self.modulus.field().q() as i64;
        let mut acc = ResElem::new(&Poly::one(self.modulus.field()), &self.modulus)?;
        let mut conj = self.clone();
        for _ in 0..self.modulus.degree().unwrap_or(0) {
            acc = acc.mul(&conj)?;
            conj = conj.pow(q)?;
        }
        match acc.value.degree() {
            None => Ok(self.modulus.field().zero()),
            Some(0) => Ok(acc.value.lc()),
            Some(_) => Err(Error::InvalidContext("norm did not land in F_q".into())),
        }
    }
}

/// Places where `f` or `g` has a zero or pole, then infinity.
pub fn places_of(f: &RatFn, g: &RatFn) -> Result<Vec<Place>> {
    let mut polys: Vec<Poly> = Vec::new();
    for p in [&f.num, &f.den, &g.num, &g.den] {
        if p.degree().is_some_and(|d| d > 0) {
            for (fac, _) in p.factor()? {
                if !polys.contains(&fac) {
                    polys.push(fac);
                }
            }
        }
    }
    polys.sort_by_key(poly_key);
    let mut out: Vec<Place> = polys.into_iter().map(Place::Finite).collect();
    out.push(Place::Infinity);
    Ok(out)
}

fn valuation_at(f: &RatFn, p: &Poly) -> Result<(i64, ResElem)> {
    if f.is_zero() {
        return Err(Error::UndeterminedValuation("zero rational function".into()));
    }
    let (a, num) = f.num.strip(p)?;
    let (b, den) = f.den.strip(p)?;
    let u = ResElem::new(&num, p)?.mul(&ResElem::new(&den, p)?.inv()?)?;
    Ok((a - b, u))
}

fn sign(v: i64) -> bool {
    v.rem_euclid(2) == 1
}

/// `(-1)^{v(f) v(g)} f^{v(g)} / g^{v(f)}` in the residue field at `x`.
pub fn tame_at(f: &RatFn, g: &RatFn, x: &Place) -> Result<ResElem> {
    let field = f.field();
    match x {
        Place::Finite(p) => {
            let (vf, uf) = valuation_at(f, p)?;
            let (vg, ug) = valuation_at(g, p)?;
            let mut r = uf.pow(vg)?.mul(&ug.pow(-vf)?)?;
            if sign(vf * vg) {
                r = ResElem::new(&r.value.neg(), p)?;
            }
            Ok(r)
        }
        Place::Infinity => {
            if f.is_zero() || g.is_zero() {
                return Err(Error::UndeterminedValuation("zero rational function".into()));
            }
            let deg = |p: &Poly| p.degree().unwrap_or(0) as i64;
            let vf = deg(&f.den) - deg(&f.num);
            let vg = deg(&g.den) - deg(&g.num);
            let uf = f.num.lc().div(f.den.lc())?;
            let ug = g.num.lc().div(g.den.lc())?;
            let mut r = uf.pow_i(vg)?.mul(ug.pow_i(-vf)?);
            if sign(vf * vg) {
                r = r.neg();
            }
            // Residue field F_q, modulus T.
            ResElem::new(&Poly::constant(r), &Poly::x(field))
        }
    }
}

#[derive(Debug, Clone)]
pub struct WeilReport {
    pub ok: bool,
    pub factors: Vec<(Place, ResElem, FqElem)>,
}

impl WeilReport {
    pub fn to_json(&self) -> Value {
        let factors: Vec<Value> = self
            .factors
            .iter()
            .map(|(x, t, n)| json!({"place": x.to_string(), "degree": x.degree(), "tame": t.value.to_string(), "norm": n.to_string()}))
            .collect();
        json!({ "ok": self.ok, "factors": factors })
    }
}

/// `prod_x N(tame_x(f, g)) == 1`, with the per-place table.
pub fn weil_check(f: &RatFn, g: &RatFn) -> Result<WeilReport> {
    let field = f.field();
    let mut prod = field.one();
    let mut factors = Vec::new();
    for x in places_of(f, g)? {
        let t = tame_at(f, g, &x)?;
        let n = t.norm()?;
        prod = prod.mul(n);
        factors.push((x, t, n));
    }
    Ok(WeilReport { ok: prod.is_one(), factors })
}

/// Random nonzero polynomial of degree at most `d`.
pub fn random_poly<R: Rng>(rng: &mut R, field: &'static FqField, d: usize) -> Poly {
    loop {
        let deg = rng.gen_range(0..=d);
        let c: Vec<FqElem> = (0..=deg).map(|_| sample::fq(rng, field)).collect();
        let p = Poly::new(field, c);
        if !p.is_zero() {
            return p;
        }
    }
}

pub fn random_ratfn<R: Rng>(rng: &mut R, field: &'static FqField, d: usize) -> Result<RatFn> {
    RatFn::new(random_poly(rng, field, d), random_poly(rng, field, d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::field;

    fn poly(f: &'static FqField, c: &[i64]) -> Poly {
        Poly::new(f, c.iter().map(|&k| f.from_int(k)).collect())
    }

    fn rf(p: Poly) -> RatFn {
        RatFn::poly(p)
    }

    #[test]
    fn factoring() {
        let f = field(2, 1).unwrap();
        // T^2 + T = T (T + 1)
        let fac = poly(f, &[0, 1, 1]).factor().unwrap();
        assert_eq!(fac, vec![(poly(f, &[0, 1]), 1), (poly(f, &[1, 1]), 1)]);
        // (T^2 + T + 1)^2
        let fac = poly(f, &[1, 0, 1, 0, 1]).factor().unwrap();
        assert_eq!(fac, vec![(poly(f, &[1, 1, 1]), 2)]);
        let big = poly(f, &[1, 0, 0, 0, 0, 0, 0, 1]);
        assert_eq!(big.factor().unwrap_err().kind(), "FactorizationBudgetExceeded");
    }

    #[test]
    fn places_examples() {
        let f = field(2, 1).unwrap();
        let t = rf(poly(f, &[0, 1]));
        let one_minus_t = rf(poly(f, &[1, 1]));
        let pl = places_of(&t, &one_minus_t).unwrap();
        assert_eq!(pl, vec![Place::Finite(poly(f, &[0, 1])), Place::Finite(poly(f, &[1, 1])), Place::Infinity]);
        let one = rf(poly(f, &[1]));
        assert_eq!(places_of(&one, &one).unwrap(), vec![Place::Infinity]);
        let t2 = rf(poly(f, &[0, 0, 1]));
        assert_eq!(places_of(&t2, &t2).unwrap(), vec![Place::Finite(poly(f, &[0, 1])), Place::Infinity]);
    }

    #[test]
    fn tame_examples() {
        let f = field(3, 1).unwrap();
        let t = rf(poly(f, &[0, 1]));
        let at_zero = Place::Finite(poly(f, &[0, 1]));
        assert_eq!(tame_at(&t, &t, &at_zero).unwrap().value, poly(f, &[-1]));
        let one_minus_t = rf(poly(f, &[1, -1]));
        assert_eq!(tame_at(&t, &one_minus_t, &at_zero).unwrap().value, poly(f, &[1]));
        let u = rf(poly(f, &[1, 1]));
        assert_eq!(tame_at(&u, &one_minus_t, &at_zero).unwrap().value, poly(f, &[1]));
    }

    #[test]
    fn reciprocity_examples() {
        for (p, e) in [(2, 1), (3, 1), (2, 2)] {
            let f = field(p, e).unwrap();
            let t = rf(poly(f, &[0, 1]));
            assert!(weil_check(&t, &rf(poly(f, &[1, -1]))).unwrap().ok);
            assert!(weil_check(&t, &t).unwrap().ok);
        }
        let f = field(2, 1).unwrap();
        let r = weil_check(&rf(poly(f, &[0, 1, 1])), &rf(poly(f, &[1, 1]))).unwrap();
        assert!(r.ok);
        assert_eq!(r.factors.len(), 3);
    }

    #[test]
    fn reciprocity_on_random_pairs() {
        let mut rng = sample::rng(11);
        for (p, e) in [(2, 1), (3, 1), (2, 2), (5, 1)] {
            let f = field(p, e).unwrap();
            for _ in 0..40 {
                let a = random_ratfn(&mut rng, f, 3).unwrap();
                let b = random_ratfn(&mut rng, f, 3).unwrap();
                assert!(weil_check(&a, &b).unwrap().ok, "{a} {b}");
            }
        }
    }

    #[test]
    fn norm_is_transitive_on_a_quadratic_tower() {
        // F_4 = F_2[T]/(T^2+T+1); the norm of T is 1 (constant term).
        let f = field(2, 1).unwrap();
        let m = poly(f, &[1, 1, 1]);
        let x = ResElem::new(&Poly::x(f), &m).unwrap();
        assert_eq!(x.norm().unwrap(), f.one());
        let y = ResElem::new(&poly(f, &[1, 1]), &m).unwrap();
        assert_eq!(y.mul(&x).unwrap().norm().unwrap(), x.norm().unwrap().mul(y.norm().unwrap()));
    }
}
