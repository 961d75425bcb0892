//! The residue tower `Omega^2_K / Omega^2_A -> Omega^1_f -> F_q -> F_p`.

use std::fmt;

use serde_json::{json, Value};

use crate::coeff::{FqElem, FqField};
use crate::error::{Error, Result};
use crate::forms::Form2;
use crate::ring::{Coeff, Ring};
use crate::series::{FElt, KElt, ToJson};

/// The submodule a class is taken modulo.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Modulo {
    /// `Omega^2_A = pi A w'`.
    OmegaA,
    /// `Omega^2_{A|n} = pi^n A w'`.
    Twist(i64),
}

impl Modulo {
    fn bound(self) -> i64 {
        match self {
            Modulo::OmegaA => 1,
            Modulo::Twist(n) => n,
        }
    }
}

/// A class of two-forms, kept in normal form: the log coefficient holds only
/// the terms below the submodule.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidueClass2 {
    rep: Form2,
    modulo: Modulo,
}

impl ResidueClass2 {
    pub fn new(rep: &Form2, modulo: Modulo) -> Result<ResidueClass2> {
        let polar = rep.log_coeff().polar_part(modulo.bound())?;
        Ok(ResidueClass2 { rep: Form2::from_log(polar).in_basis(rep.basis), modulo })
    }

    /// Class modulo `Omega^2_A`.
    pub fn of(rep: &Form2) -> Result<ResidueClass2> {
        Self::new(rep, Modulo::OmegaA)
    }

    pub fn rep(&self) -> &Form2 {
        &self.rep
    }

    pub fn modulo(&self) -> Modulo {
        self.modulo
    }

    pub fn add(&self, other: &ResidueClass2) -> Result<ResidueClass2> {
        if self.modulo != other.modulo {
            return Err(Error::InvalidContext("classes modulo different submodules".into()));
        }
        Self::new(&self.rep.add(&other.rep)?, self.modulo)
    }
}

/// A one-form `b dt` over `f`.
#[derive(Debug, Clone, PartialEq)]
pub struct FForm1 {
    pub b: FElt,
}

impl FForm1 {
    pub fn new(b: FElt) -> FForm1 {
        FForm1 { b }
    }

    pub fn field(&self) -> &'static FqField {
        self.b.ctx()
    }

    pub fn to_json(&self) -> Value {
        json!({ "b": self.b.to_json() })
    }
}

impl fmt::Display for FForm1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "0")
        } else {
            write!(f, "({})*dt", self.b)
        }
    }
}

/// `a w -> res_pi(a) dt`, where `res_pi` takes the `pi^-1` coefficient.
pub fn res_k(x: &ResidueClass2) -> Result<FForm1> {
    if x.modulo.bound() < 1 {
        return Err(Error::TwistViolation(format!(
            "res_K is not defined modulo twist {}; it only kills twists >= 1",
            x.modulo.bound()
        )));
    }
    // a = c t^-1 pi^-1, so res_pi(a) = t^-1 * (pi^0 coefficient of c).
    let c0 = x.rep.log_coeff().coeff(0)?;
    Ok(FForm1::new(c0.shift(-1)))
}

/// `b dt -> res(b)`.
pub fn res_f(alpha: &FForm1) -> Result<FqElem> {
    alpha.b.coeff(-1)
}

/// `tr o res_f o res_K`.
pub fn res_k_total(x: &ResidueClass2) -> Result<u32> {
    Ok(res_f(&res_k(x)?)?.trace())
}

/// `Res_K` on a representative, modulo `Omega^2_A`.
pub fn res_k_of(form: &Form2) -> Result<u32> {
    // Only the t^0 pi^0 coefficient of the log coefficient matters.
    let c = form.log_coeff().coeff(0)?.coeff(0)?;
    Ok(c.trace())
}

/// `chi_f(b) = tr(res_f(b dt))`.
pub fn chi_f(b: &FElt) -> Result<u32> {
    Ok(res_f(&FForm1::new(b.clone()))?.trace())
}

/// `a -> res_pi(a)`, the map `K / A -> f` whose composite with `chi_f` is
/// compared against `Res_K(a w)`.
pub fn res_prime_k(a: &KElt) -> Result<FElt> {
    a.coeff(-1)
}

/// Cartier operator on `Omega^1_f`: `C(b dt) = t^-1 C_0(t b) dt`.
pub fn cartier_f(alpha: &FForm1) -> Result<FForm1> {
    Ok(FForm1::new(alpha.b.shift(1).cartier_part()?.shift(-1)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::cartier2;
    use crate::series::Context;

    fn ctx(p: u32, e: u32) -> Context {
        Context::new(p, e).unwrap()
    }

    fn class_omega(c: KElt) -> ResidueClass2 {
        ResidueClass2::of(&Form2::from_omega(c)).unwrap()
    }

    #[test]
    fn res_k_examples() {
        let c = ctx(3, 1);
        let r = res_k(&class_omega(c.k_term(1, 3, -1))).unwrap();
        assert_eq!(r.b, FElt::t_term(c.fq(1), 3));
        let integral = class_omega(c.k_term(2, -5, 0).add(&c.k_term(1, 2, 3)).unwrap());
        assert!(res_k(&integral).unwrap().b.is_zero());
        assert!(res_k(&class_omega(c.k_term(1, -1, -2))).unwrap().b.is_zero());
    }

    #[test]
    fn res_f_examples() {
        let c = ctx(2, 2);
        assert_eq!(res_f(&FForm1::new(FElt::t_term(c.fq(1), -1))).unwrap(), c.fq(1));
        assert!(res_f(&FForm1::new(FElt::one(c.field))).unwrap().is_zero());
        let g = c.field.generator().unwrap();
        let b = FElt::t_term(g, -1).add(&FElt::t_term(c.fq(1), 1)).unwrap();
        assert_eq!(res_f(&FForm1::new(b)).unwrap(), g);
    }

    #[test]
    fn total_residue_examples() {
        let c = ctx(2, 1);
        assert_eq!(res_k_total(&class_omega(c.k_term(1, -1, -1))).unwrap(), 1);
        let c4 = ctx(2, 2);
        assert_eq!(res_k_total(&class_omega(c4.k_term(1, -1, -1))).unwrap(), 0);
        assert_eq!(res_k_total(&class_omega(c.k_term(1, -1, 0))).unwrap(), 0);
        assert_eq!(res_k_of(&Form2::from_omega(c.k_term(1, -1, -1))).unwrap(), 1);
    }

    #[test]
    fn chi_f_examples() {
        let c = ctx(2, 1);
        assert_eq!(chi_f(&FElt::t_term(c.fq(1), -1)).unwrap(), 1);
        assert_eq!(chi_f(&FElt::t_term(c.fq(1), 3)).unwrap(), 0);
        assert_eq!(chi_f(&FElt::t_term(c.fq(1), -2)).unwrap(), 0);
    }

    #[test]
    fn residue_diagram_commutes() {
        let c = ctx(3, 2);
        for a in -3..3 {
            for b in -3..2 {
                for x in c.field.elements() {
                    let elt = KElt::term(x, a, b);
                    let lhs = chi_f(&res_prime_k(&elt).unwrap()).unwrap();
                    let rhs = res_k_total(&class_omega(elt)).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn residues_commute_with_cartier() {
        let c = ctx(3, 1);
        for a in -6..=6 {
            for b in -6..=6 {
                let x = Form2::from_log(c.k_term(2, a, b));
                let cx = cartier2(&x).unwrap();
                let lhs = res_k(&ResidueClass2::of(&cx).unwrap()).unwrap();
                let rhs = cartier_f(&res_k(&ResidueClass2::of(&x).unwrap()).unwrap()).unwrap();
                assert_eq!(lhs, rhs, "({a},{b})");
            }
        }
    }

    #[test]
    fn twist_quotient_needs_positive_twist() {
        let c = ctx(2, 1);
        let x = ResidueClass2::new(&Form2::from_log(c.k_term(1, 0, -1)), Modulo::Twist(0)).unwrap();
        assert_eq!(res_k(&x).unwrap_err().kind(), "TwistViolation");
        let y = ResidueClass2::new(&Form2::from_log(c.k_term(1, 0, 1)), Modulo::Twist(3)).unwrap();
        assert!(res_k(&y).unwrap().b.is_zero());
    }

    #[test]
    fn windowed_residue_is_refused() {
        let c = ctx(2, 1);
        let f = FElt::with_window(c.field, [], -3, Some(-1), true).unwrap();
        assert_eq!(chi_f(&f).unwrap_err().kind(), "PrecisionLoss");
    }
}
