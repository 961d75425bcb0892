//! Differential forms of degree one and two over `A = f[[pi]]` and `K`.
//!
//! Two-forms are stored against `w' = dlog t ^ dlog pi`; `w = dt ^ dpi` is a
//! display basis with `c w' = c t^-1 pi^-1 w`. One-forms are converted to
//! `P dlog t + Q dlog pi` for computation, where
//! `d(P dlog t + Q dlog pi) = (t d/dt Q - pi d/dpi P) w'`.

use std::fmt;

use serde_json::{json, Value};

use crate::coeff::FqField;
use crate::error::{Error, Result};
use crate::ring::{Coeff, Ring};
use crate::series::{KElt, ToJson};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis1 {
    /// `c_t dt + c_pi dpi`
    Plain,
    /// `c_t dt + c_pi dlog pi`
    LogPi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis2 {
    /// `dt ^ dpi`
    Omega,
    /// `dlog t ^ dlog pi`
    Log,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Form1 {
    pub c_t: KElt,
    pub c_pi: KElt,
    pub basis: Basis1,
}

impl Form1 {
    pub fn new(c_t: KElt, c_pi: KElt, basis: Basis1) -> Form1 {
        Form1 { c_t, c_pi, basis }
    }

    pub fn zero(field: &'static FqField) -> Form1 {
        Form1::new(KElt::zero(field), KElt::zero(field), Basis1::Plain)
    }

    pub fn dt(field: &'static FqField) -> Form1 {
        Form1::new(KElt::one(field), KElt::zero(field), Basis1::Plain)
    }

    pub fn dpi(field: &'static FqField) -> Form1 {
        Form1::new(KElt::zero(field), KElt::one(field), Basis1::Plain)
    }

    /// `P dlog t + Q dlog pi`, both coefficients given.
    pub fn from_log(p: KElt, q: KElt) -> Form1 {
        Form1::new(p.shift2(-1, 0), q, Basis1::LogPi)
    }

    pub fn field(&self) -> &'static FqField {
        self.c_t.ctx()
    }

    /// `(P, Q)` with the form equal to `P dlog t + Q dlog pi`.
    pub fn to_log(&self) -> (KElt, KElt) {
        let p = self.c_t.shift2(1, 0);
        let q = match self.basis {
            Basis1::Plain => self.c_pi.shift2(0, 1),
            Basis1::LogPi => self.c_pi.clone(),
        };
        (p, q)
    }

    /// Same form written in `basis`.
    pub fn in_basis(&self, basis: Basis1) -> Form1 {
        if basis == self.basis {
            return self.clone();
        }
        let c_pi = match basis {
            Basis1::Plain => self.c_pi.shift2(0, -1),
            Basis1::LogPi => self.c_pi.shift2(0, 1),
        };
        Form1::new(self.c_t.clone(), c_pi, basis)
    }

    pub fn add(&self, other: &Form1) -> Result<Form1> {
        let o = other.in_basis(self.basis);
        Ok(Form1::new(self.c_t.add(&o.c_t)?, self.c_pi.add(&o.c_pi)?, self.basis))
    }

    pub fn sub(&self, other: &Form1) -> Result<Form1> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Form1 {
        Form1::new(self.c_t.neg(), self.c_pi.neg(), self.basis)
    }

    /// Multiplication by a function.
    pub fn mul_fn(&self, x: &KElt) -> Result<Form1> {
        Ok(Form1::new(self.c_t.mul(x)?, self.c_pi.mul(x)?, self.basis))
    }

    pub fn is_zero(&self) -> bool {
        self.c_t.is_zero() && self.c_pi.is_zero()
    }

    /// Equal on the common window of both forms.
    pub fn agrees_with(&self, other: &Form1) -> Result<bool> {
        let (p1, q1) = self.to_log();
        let (p2, q2) = other.to_log();
        Ok(p1.agrees_with(&p2)? && q1.agrees_with(&q2)?)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "c_t": self.c_t.to_json(),
            "c_pi": self.c_pi.to_json(),
            "basis": match self.basis { Basis1::Plain => "plain", Basis1::LogPi => "log_pi" },
        })
    }
}

impl fmt::Display for Form1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let second = match self.basis {
            Basis1::Plain => "dpi",
            Basis1::LogPi => "dlog pi",
        };
        let mut parts = Vec::new();
        if !self.c_t.is_zero() {
            parts.push(format!("({})*dt", self.c_t));
        }
        if !self.c_pi.is_zero() {
            parts.push(format!("({})*{second}", self.c_pi));
        }
        if parts.is_empty() {
            return write!(f, "0");
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// A two-form `c w'`, optionally carrying a certified twist: membership in
/// `Omega^2_{A|n} = pi^n A w'`.
#[derive(Clone, Debug, PartialEq)]
pub struct Form2 {
    c: KElt,
    pub basis: Basis2,
    pub twist: Option<i64>,
}

impl Form2 {
    /// `c dlog t ^ dlog pi`.
    pub fn from_log(c: KElt) -> Form2 {
        Form2 { c, basis: Basis2::Log, twist: None }
    }

    /// `c dt ^ dpi`.
    pub fn from_omega(c: KElt) -> Form2 {
        Form2 { c: c.shift2(1, 1), basis: Basis2::Omega, twist: None }
    }

    pub fn zero(field: &'static FqField) -> Form2 {
        Form2::from_log(KElt::zero(field))
    }

    pub fn field(&self) -> &'static FqField {
        self.c.ctx()
    }

    /// Coefficient against `w'`.
    pub fn log_coeff(&self) -> &KElt {
        &self.c
    }

    /// Coefficient against `w`.
    pub fn omega_coeff(&self) -> KElt {
        self.c.shift2(-1, -1)
    }

    /// Coefficient in the display basis.
    pub fn coeff(&self) -> KElt {
        match self.basis {
            Basis2::Log => self.c.clone(),
            Basis2::Omega => self.omega_coeff(),
        }
    }

    pub fn in_basis(mut self, basis: Basis2) -> Form2 {
        self.basis = basis;
        self
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_zero()
    }

    pub fn add(&self, other: &Form2) -> Result<Form2> {
        Ok(Form2 { c: self.c.add(&other.c)?, basis: self.basis, twist: min_twist(self.twist, other.twist) })
    }

    pub fn sub(&self, other: &Form2) -> Result<Form2> {
        Ok(Form2 { c: self.c.sub(&other.c)?, basis: self.basis, twist: min_twist(self.twist, other.twist) })
    }

    pub fn neg(&self) -> Form2 {
        Form2 { c: self.c.neg(), basis: self.basis, twist: self.twist }
    }

    pub fn mul_fn(&self, x: &KElt) -> Result<Form2> {
        Ok(Form2 { c: self.c.mul(x)?, basis: self.basis, twist: None })
    }

    pub fn agrees_with(&self, other: &Form2) -> Result<bool> {
        self.c.agrees_with(&other.c)
    }

    /// Certified membership in `Omega^2_{A|n}`: the log coefficient has no
    /// terms below `pi^n` and no unknown terms there either.
    pub fn in_twist(&self, n: i64) -> bool {
        if !self.c.zero_below() || self.c.hi().is_some_and(|h| h < n) {
            return false;
        }
        self.c.terms().take_while(|(k, _)| *k < n).all(|(_, x)| x.is_zero())
            && self.c.terms().all(|(_, x)| x.zero_below())
    }

    /// Attaches the twist claim `n`, verifying it.
    pub fn with_twist(mut self, n: i64) -> Result<Form2> {
        if !self.in_twist(n) {
            return Err(Error::TwistViolation(format!("{self} is not certified in twist {n}")));
        }
        self.twist = Some(n);
        Ok(self)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "c": self.coeff().to_json(),
            "basis": match self.basis { Basis2::Omega => "omega", Basis2::Log => "log" },
            "twist": self.twist,
        })
    }

    pub fn from_json(field: &'static FqField, v: &Value) -> Result<Form2> {
        let c = KElt::from_json(field, v.get("c").ok_or_else(|| Error::Parse("form JSON: missing c".into()))?)?;
        let mut form = match v.get("basis").and_then(Value::as_str).unwrap_or("log") {
            "log" => Form2::from_log(c),
            "omega" => Form2::from_omega(c),
            other => return Err(Error::Parse(format!("unknown basis {other}"))),
        };
        if let Some(n) = v.get("twist").and_then(Value::as_i64) {
            form = form.with_twist(n)?;
        }
        Ok(form)
    }
}

impl fmt::Display for Form2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.basis {
            Basis2::Log => write!(f, "({}) * dlog t ^ dlog pi", self.c),
            Basis2::Omega => write!(f, "({}) * dt ^ dpi", self.omega_coeff()),
        }
    }
}

fn min_twist(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    Some(a?.min(b?))
}

/// Exterior derivative of a function.
pub fn d0(x: &KElt) -> Form1 {
    Form1::new(x.t_derivative(), x.pi_derivative(), Basis1::Plain)
}

/// Exterior derivative of a one-form.
pub fn d1(alpha: &Form1) -> Result<Form2> {
    let (p, q) = alpha.to_log();
    Ok(Form2::from_log(q.t_log_derivative().sub(&p.pi_log_derivative())?))
}

/// `alpha ^ beta`, reported in the `w` basis.
pub fn wedge(alpha: &Form1, beta: &Form1) -> Result<Form2> {
    let (p1, q1) = alpha.to_log();
    let (p2, q2) = beta.to_log();
    Ok(Form2::from_log(p1.mul(&q2)?.sub(&q1.mul(&p2)?)?).in_basis(Basis2::Omega))
}

/// Cartier operator on two-forms: monomial rule on the log coefficient.
pub fn cartier2(alpha: &Form2) -> Result<Form2> {
    let mut out = Form2::from_log(alpha.c.cartier_part()?).in_basis(alpha.basis);
    out.twist = None;
    Ok(out)
}

/// Cartier operator on closed one-forms, by the same monomial rule applied to
/// `P` and `Q`.
pub fn cartier1(alpha: &Form1) -> Result<Form1> {
    let closed = d1(alpha)?;
    if closed.c.terms().any(|(_, x)| x.certified_nonzero()) {
        return Err(Error::InvalidContext("the Cartier operator needs a closed one-form".into()));
    }
    let (p, q) = alpha.to_log();
    Ok(Form1::from_log(p.cartier_part()?, q.cartier_part()?).in_basis(alpha.basis))
}

/// `alpha - C(alpha)` on the source twist `p n`; the result is certified in
/// twist `min(p n, n)`.
pub fn one_minus_c(alpha: &Form2, n: i64) -> Result<Form2> {
    let p = alpha.field().p() as i64;
    if !alpha.is_zero() && !alpha.in_twist(p * n) {
        return Err(Error::TwistViolation(format!("(1-C) on twist {n} needs input in twist {}", p * n)));
    }
    let out = alpha.sub(&cartier2(alpha)?)?;
    let mut out = Form2 { c: out.c, basis: alpha.basis, twist: None };
    if !out.is_zero() {
        out = out.with_twist((p * n).min(n))?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::Context;

    fn ctx(p: u32, e: u32) -> Context {
        Context::new(p, e).unwrap()
    }

    #[test]
    fn derivative_examples() {
        let c = ctx(3, 1);
        assert!(d0(&c.k_term(1, 3, 0)).is_zero());
        let c = ctx(2, 1);
        let f = d0(&c.k_term(1, 1, 1));
        assert_eq!(f.c_t, c.k_term(1, 0, 1));
        assert_eq!(f.c_pi, c.k_term(1, 1, 0));
        let dlog_t = Form1::new(c.k_term(1, -1, 0), c.k_zero(), Basis1::Plain);
        assert!(d1(&dlog_t).unwrap().is_zero());
    }

    #[test]
    fn d_squared_vanishes() {
        let c = ctx(3, 1);
        let x = c.k_term(1, 2, -1).add(&c.k_term(2, -4, 3)).unwrap().add(&c.k_term(1, 5, 2)).unwrap();
        assert!(d1(&d0(&x)).unwrap().is_zero());
    }

    #[test]
    fn wedge_examples() {
        let c = ctx(3, 1);
        let w = wedge(&Form1::dt(c.field), &Form1::dpi(c.field)).unwrap();
        assert_eq!(w.omega_coeff(), c.k_one());
        let w = wedge(&Form1::dpi(c.field), &Form1::dt(c.field)).unwrap();
        assert_eq!(w.omega_coeff(), c.k_one().neg());
        let a = Form1::new(c.k_term(1, -1, 0), c.k_zero(), Basis1::Plain);
        let b = Form1::new(c.k_zero(), c.k_term(1, 0, -1), Basis1::Plain);
        let w = wedge(&a, &b).unwrap();
        assert_eq!(w.log_coeff(), &c.k_one());
        assert_eq!(w.omega_coeff(), c.k_term(1, -1, -1));
    }

    #[test]
    fn cartier_examples() {
        let c = ctx(2, 1);
        let one = Form2::from_log(c.k_one());
        assert_eq!(cartier2(&one).unwrap().log_coeff(), &c.k_one());
        assert!(cartier2(&Form2::from_log(c.k_term(1, 1, 0))).unwrap().is_zero());
        let x = cartier2(&Form2::from_log(c.k_term(1, 2, 4))).unwrap();
        assert_eq!(x.log_coeff(), &c.k_term(1, 1, 2));
        let c4 = ctx(2, 2);
        let g = c4.field.generator().unwrap();
        let x = cartier2(&Form2::from_log(KElt::term(g, 0, 0))).unwrap();
        assert_eq!(x.log_coeff(), &KElt::term(g.frob_inv(), 0, 0));
    }

    #[test]
    fn one_minus_c_examples() {
        let c = ctx(2, 1);
        assert!(one_minus_c(&Form2::from_log(c.k_one()), 0).unwrap().is_zero());
        let x = one_minus_c(&Form2::from_log(c.k_term(1, 2, 0)), 0).unwrap();
        assert_eq!(x.log_coeff(), &c.k_term(1, 2, 0).sub(&c.k_term(1, 1, 0)).unwrap());
        assert!(one_minus_c(&Form2::zero(c.field), 3).unwrap().is_zero());
        let err = one_minus_c(&Form2::from_log(c.k_term(1, 0, 1)), 1).unwrap_err();
        assert_eq!(err.kind(), "TwistViolation");
        let ok = one_minus_c(&Form2::from_log(c.k_term(1, 0, 2)), 1).unwrap();
        assert_eq!(ok.twist, Some(1));
    }

    #[test]
    fn twist_membership_is_monotone() {
        let c = ctx(3, 1);
        let f = Form2::from_log(c.k_term(1, -3, 2).add(&c.k_term(2, 1, 4)).unwrap());
        for n in -3..=2 {
            assert!(f.in_twist(n));
        }
        assert!(!f.in_twist(3));
        let omega = Form2::from_omega(c.k_one());
        assert!(omega.in_twist(1) && !omega.in_twist(2));
    }

    #[test]
    fn cartier_on_one_forms() {
        let c = ctx(3, 1);
        let x = c.k_term(1, 1, 1).add(&c.k_term(2, -2, 1)).unwrap();
        assert!(cartier1(&d0(&x)).unwrap().is_zero());
        // C(a^{p-1} da) = da
        let lhs = cartier1(&d0(&x).mul_fn(&x.pow(2).unwrap()).unwrap()).unwrap();
        assert!(lhs.agrees_with(&d0(&x)).unwrap());
        let open = Form1::new(c.k_term(1, 0, 1), c.k_zero(), Basis1::Plain);
        assert!(cartier1(&open).is_err());
    }
}
