//! Formal Milnor `K_2` symbols over `K`, observed through the tame symbol and
//! `dlog`.

use std::fmt;

use serde_json::{json, Value};

use crate::coeff::FqField;
use crate::error::{Error, Result};
use crate::forms::Form2;
use crate::ring::{Precision, Ring};
use crate::sample;
use crate::series::{FElt, KElt, ToJson};

/// A formal sum `sum k_i {a_i, b_i}`.
#[derive(Debug, Clone, PartialEq)]
pub struct MilnorSym {
    terms: Vec<(i64, KElt, KElt)>,
}

impl MilnorSym {
    pub fn empty() -> MilnorSym {
        MilnorSym { terms: Vec::new() }
    }

    /// `{a, b}`; both entries must have a determinable valuation.
    pub fn pair(a: KElt, b: KElt) -> Result<MilnorSym> {
        Self::from_terms(vec![(1, a, b)])
    }

    pub fn from_terms(terms: Vec<(i64, KElt, KElt)>) -> Result<MilnorSym> {
        for (_, a, b) in &terms {
            for x in [a, b] {
                let v = x.valuation()?;
                x.coeff(v)?.valuation()?;
            }
        }
        Ok(MilnorSym { terms })
    }

    pub fn terms(&self) -> &[(i64, KElt, KElt)] {
        &self.terms
    }

    /// Formal sum; identical pairs are collected and zero multiples dropped.
    pub fn add(&self, other: &MilnorSym) -> MilnorSym {
        let mut terms: Vec<(i64, KElt, KElt)> = Vec::new();
        for (k, a, b) in self.terms.iter().chain(&other.terms) {
            match terms.iter_mut().find(|(_, x, y)| x == a && y == b) {
                Some(slot) => slot.0 += k,
                None => terms.push((*k, a.clone(), b.clone())),
            }
        }
        terms.retain(|(k, _, _)| *k != 0);
        MilnorSym { terms }
    }

    pub fn neg(&self) -> MilnorSym {
        self.scale(-1)
    }

    pub fn scale(&self, k: i64) -> MilnorSym {
        MilnorSym { terms: self.terms.iter().map(|(c, a, b)| (c * k, a.clone(), b.clone())).collect() }
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> =
            self.terms.iter().map(|(k, a, b)| json!({"k": k, "a": a.to_json(), "b": b.to_json()})).collect();
        json!({ "terms": terms })
    }
}

impl fmt::Display for MilnorSym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (k, a, b)) in self.terms.iter().enumerate() {
            match (i, *k < 0) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if k.unsigned_abs() != 1 {
                write!(f, "{}*", k.unsigned_abs())?;
            }
            write!(f, "{{{a}, {b}}}")?;
        }
        Ok(())
    }
}

/// `x^k` in `f`, inverting through `prec` for negative `k`.
fn f_pow(x: &FElt, k: i64, prec: &Precision) -> Result<FElt> {
    let base = if k < 0 { x.inverse(prec)? } else { x.clone() };
    base.pow(k.unsigned_abs())
}

/// Leading `pi`-coefficient and valuation.
fn leading(x: &KElt) -> Result<(i64, FElt)> {
    let v = x.valuation()?;
    Ok((v, x.coeff(v)?))
}

/// The tame symbol, multiplicatively extended.
pub fn tame(s: &MilnorSym, field: &'static FqField, prec: &Precision) -> Result<FElt> {
    let mut acc = FElt::one(field);
    for (k, a, b) in &s.terms {
        let (va, a0) = leading(a)?;
        let (vb, b0) = leading(b)?;
        let mut val = f_pow(&a0, vb, prec)?.mul(&f_pow(&b0, -va, prec)?)?;
        if (va * vb).rem_euclid(2) == 1 {
            val = val.neg();
        }
        acc = acc.mul(&f_pow(&val, *k, prec)?)?;
    }
    Ok(acc)
}

/// `dlog a ^ dlog b`, additively extended.
pub fn sym_dlog(s: &MilnorSym, field: &'static FqField, prec: &Precision) -> Result<Form2> {
    let mut acc = KElt::zero(field);
    for (k, a, b) in &s.terms {
        let num = a
            .t_log_derivative()
            .mul(&b.pi_log_derivative())?
            .sub(&a.pi_log_derivative().mul(&b.t_log_derivative())?)?;
        if num.is_zero() {
            continue;
        }
        let term = num.mul(&a.mul(b)?.inverse(prec)?)?;
        acc = acc.add(&term.scale(*k))?;
    }
    Ok(Form2::from_log(acc))
}

/// `s - {lift(tame(s)), pi}`.
pub fn split_phi(s: &MilnorSym, field: &'static FqField, prec: &Precision) -> Result<MilnorSym> {
    let u = tame(s, field, prec)?;
    Ok(s.add(&MilnorSym::pair(KElt::from_f(u), pi(field))?.neg()))
}

pub fn pi(field: &'static FqField) -> KElt {
    KElt::term(field.one(), 0, 1)
}

pub fn t(field: &'static FqField) -> KElt {
    KElt::term(field.one(), 1, 0)
}

/// A symbol `{1 + pi^r a, b}` tagged with the filtration level it is
/// certified in.
#[derive(Debug, Clone)]
pub struct FilGenerator {
    pub sym: MilnorSym,
    pub level: i64,
}

impl FilGenerator {
    /// `{1 + pi^r a, b}` with `a` in `A`.
    pub fn new(r: i64, a: &KElt, b: KElt) -> Result<FilGenerator> {
        if r < 1 {
            return Err(Error::InvalidContext(format!("fil_r needs r >= 1, got {r}")));
        }
        if a.zero_below() && a.terms().next().is_some_and(|(k, _)| k < 0) {
            return Err(Error::InvalidContext("generator coefficient must lie in A".into()));
        }
        let field = a.ctx();
        let u = KElt::one(field).add(&a.shift2(0, r))?;
        Ok(FilGenerator { sym: MilnorSym::pair(u, b)?, level: r })
    }

    /// The same symbol viewed in `fil_r` for `r <= level`.
    pub fn retag(&self, r: i64) -> Result<FilGenerator> {
        if r > self.level || r < 0 {
            return Err(Error::InvalidContext(format!("cannot view fil_{} data in fil_{r}", self.level)));
        }
        Ok(FilGenerator { sym: self.sym.clone(), level: r })
    }
}

/// `budget` seeded random generators of `fil_r K_2(K)`.
pub fn fil_generators(field: &'static FqField, r: i64, budget: usize, seed: u64) -> Result<Vec<FilGenerator>> {
    let mut rng = sample::rng(seed ^ (r as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    let mut out = Vec::with_capacity(budget);
    for _ in 0..budget {
        let a = sample::k_poly_nonzero(&mut rng, field, (-3, 3), (0, 2), 3);
        let b = sample::k_unit_like(&mut rng, field);
        out.push(FilGenerator::new(r, &a, b)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::Context;

    fn setup(p: u32, e: u32) -> (Context, Precision) {
        let c = Context::new(p, e).unwrap();
        let prec = c.precision();
        (c, prec)
    }

    #[test]
    fn tame_examples() {
        let (c, prec) = setup(3, 1);
        let f = c.field;
        let u = c.k_term(2, 1, 0).add(&c.k_term(1, 0, 1)).unwrap();
        let s = MilnorSym::pair(u, pi(f)).unwrap();
        assert_eq!(tame(&s, f, &prec).unwrap(), FElt::t_term(c.fq(2), 1));
        let v = c.k_one().add(&c.k_term(1, 2, 2)).unwrap();
        let s = MilnorSym::pair(c.k_term(1, 1, 0), v).unwrap();
        assert_eq!(tame(&s, f, &prec).unwrap(), FElt::one(f));
        let s = MilnorSym::pair(pi(f), pi(f)).unwrap();
        assert_eq!(tame(&s, f, &prec).unwrap(), FElt::one(f).neg());
        let (c2, prec2) = setup(2, 1);
        let s = MilnorSym::pair(pi(c2.field), pi(c2.field)).unwrap();
        assert_eq!(tame(&s, c2.field, &prec2).unwrap(), FElt::one(c2.field));
    }

    #[test]
    fn dlog_examples() {
        let (c, prec) = setup(2, 1);
        let f = c.field;
        let w = sym_dlog(&MilnorSym::pair(t(f), pi(f)).unwrap(), f, &prec).unwrap();
        assert_eq!(w.log_coeff(), &c.k_one());
        assert!(sym_dlog(&MilnorSym::pair(pi(f), pi(f)).unwrap(), f, &prec).unwrap().is_zero());
        let one_minus_t = c.k_one().sub(&t(f)).unwrap();
        assert!(sym_dlog(&MilnorSym::pair(one_minus_t, t(f)).unwrap(), f, &prec).unwrap().is_zero());
    }

    #[test]
    fn dlog_is_bilinear_and_alternating() {
        let (c, prec) = setup(3, 1);
        let f = c.field;
        let a1 = c.k_one().add(&c.k_term(1, 1, 1)).unwrap();
        let a2 = c.k_term(2, -1, 1);
        let b = c.k_term(1, 2, 0).add(&c.k_term(1, 0, 1)).unwrap();
        let lhs = sym_dlog(&MilnorSym::pair(a1.mul(&a2).unwrap(), b.clone()).unwrap(), f, &prec).unwrap();
        let rhs = sym_dlog(
            &MilnorSym::pair(a1.clone(), b.clone()).unwrap().add(&MilnorSym::pair(a2, b.clone()).unwrap()),
            f,
            &prec,
        )
        .unwrap();
        assert!(lhs.agrees_with(&rhs).unwrap());
        let ab = sym_dlog(&MilnorSym::pair(a1.clone(), b.clone()).unwrap(), f, &prec).unwrap();
        let ba = sym_dlog(&MilnorSym::pair(b, a1).unwrap(), f, &prec).unwrap();
        assert!(ab.agrees_with(&ba.neg()).unwrap());
    }

    #[test]
    fn split_kills_tame() {
        let (c, prec) = setup(3, 2);
        let f = c.field;
        let u = c.k_term(2, 1, 0).add(&c.k_one()).unwrap();
        let s = MilnorSym::pair(u, pi(f)).unwrap().add(&MilnorSym::pair(t(f), c.k_term(1, 1, 1)).unwrap());
        let split = split_phi(&s, f, &prec).unwrap();
        assert!(tame(&split, f, &prec).unwrap().is_one_within_window().unwrap());
    }

    #[test]
    fn generators_have_the_claimed_twist() {
        let (c, prec) = setup(2, 1);
        let f = c.field;
        assert!(fil_generators(f, 2, 0, 1).unwrap().is_empty());
        for g in fil_generators(f, 2, 20, 7).unwrap() {
            let w = sym_dlog(&g.sym, f, &prec).unwrap();
            let trunc = Form2::from_log(w.log_coeff().polar_part(6).unwrap());
            assert!(trunc.in_twist(2), "{}", g.sym);
            assert_eq!(g.retag(1).unwrap().level, 1);
        }
        let g = FilGenerator::new(1, &c.k_term(1, 1, 0), pi(f)).unwrap();
        assert_eq!(g.sym.terms()[0].2, pi(f));
    }
}
