//! The ramification filtration on `W_m(K)`, Artin-Schreier-Witt reduction
//! and conductors of characters.
//!
//! Valuations here are `pi`-adic: `t` is a unit of `K`. A vector lies in
//! `fil_n` when `p^{m-1-i} v(w_i) >= -n` for every internal index `i`.

use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::ring::{Coeff, Ring};
use crate::series::KElt;
use crate::witt::{witt_f, witt_r, witt_v, WittVec};

/// Witt vectors over `K`.
pub type WK = WittVec<KElt>;

/// `pi`-adic valuation, `None` for an exact zero.
pub fn pi_valuation(x: &KElt) -> Result<Option<i64>> {
    if x.is_zero() {
        return Ok(None);
    }
    x.valuation().map(Some)
}

fn weight(p: u32, m: usize, i: usize) -> i64 {
    (p as i64).pow((m - 1 - i) as u32)
}

/// Membership in `fil_n W_m(K)`.
pub fn fil_member(a: &WK, n: i64) -> Result<bool> {
    if n < 0 {
        return Err(Error::InvalidContext(format!("filtration index {n} < 0")));
    }
    let m = a.len();
    for (i, w) in a.comps().iter().enumerate() {
        if let Some(v) = pi_valuation(w)? {
            if weight(a.p(), m, i) * v < -n {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The least `n >= 0` with `a` in `fil_n`.
pub fn fil_level(a: &WK) -> Result<i64> {
    let m = a.len();
    let mut level = 0;
    for (i, w) in a.comps().iter().enumerate() {
        if let Some(v) = pi_valuation(w)? {
            level = level.max(weight(a.p(), m, i) * (-v).max(0));
        }
    }
    Ok(level)
}

/// `(1 - F)(a) = a - F(a)`.
pub fn one_minus_f(a: &WK) -> Result<WK> {
    a.sub(&witt_f(a))
}

// The polar part of every component must be known exactly for reduction to
// be certified.
fn check_polar_exact(a: &WK) -> Result<()> {
    for (i, w) in a.comps().iter().enumerate() {
        if !w.zero_below() {
            return Err(Error::PrecisionLoss(format!("component {i}: low pi-terms unknown")));
        }
        if let Some(h) = w.hi() {
            if h < 0 {
                return Err(Error::PrecisionLoss(format!("component {i}: pi-window ends at {h} < 0")));
            }
        }
        for (b, c) in w.terms() {
            if b >= 0 {
                break;
            }
            if !c.is_exact() {
                return Err(Error::PrecisionLoss(format!("component {i}: coefficient of pi^{b} is truncated in t")));
            }
        }
    }
    Ok(())
}

/// A monomial `c t^a pi^b` with `b < 0`, `p | a`, `p | b` can be absorbed
/// by a `(1 - F)`-translate.
pub fn is_reducible(p: u32, a: i64, b: i64) -> bool {
    let p = p as i64;
    b < 0 && a.rem_euclid(p) == 0 && b.rem_euclid(p) == 0
}

// The next monomial to kill in `w`: most negative pi-exponent, then most
// negative t-exponent.
fn pick_reducible(p: u32, w: &KElt) -> Option<(i64, i64, crate::coeff::FqElem)> {
    for (b, c) in w.terms() {
        if b >= 0 {
            break;
        }
        for (a, x) in c.terms() {
            if is_reducible(p, a, b) {
                return Some((a, b, *x));
            }
        }
    }
    None
}

/// Reduces `a` modulo `(1 - F) W_m(K)`. Returns `(a_red, b)` with
/// `a_red = a - (1 - F)(b)` and no reducible monomial left in `a_red`.
///
/// Components are processed from internal index 0 upward: translating by
/// `V^i[beta]` leaves components below `i` untouched, so finished
/// components stay finished.
pub fn asw_reduce(a: &WK) -> Result<(WK, WK)> {
    let p = a.p();
    let m = a.len();
    let field = a.ctx();
    let mut cur = a.clone();
    let mut shift = WK::zero(p, m, field)?;
    for i in 0..m {
        loop {
            check_polar_exact(&cur)?;
            let Some((ta, pb, c)) = pick_reducible(p, cur.comp(i)) else {
                break;
            };
            let beta = KElt::term(c.frob_inv(), ta / p as i64, pb / p as i64);
            let mut comps = vec![KElt::zero(field); m];
            comps[i] = beta.neg();
            let b = WK::new(p, field, comps)?;
            cur = cur.sub(&one_minus_f(&b)?)?;
            shift = shift.add(&b)?;
        }
    }
    Ok((cur, shift))
}

/// Conductor of the character represented by `a`: the filtration level of
/// its reduced form.
pub fn conductor(a: &WK) -> Result<i64> {
    fil_level(&asw_reduce(a)?.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LevelMap {
    /// `H^1(Z/p) -> H^1(Z/p^m)`, realized by `V^{m-1}`.
    Lift,
    /// `H^1(Z/p^m) -> H^1(Z/p^{m-1})`, realized by `R`.
    Restrict,
}

/// The level-changing maps. `m` is the target length for `Lift` and is
/// ignored for `Restrict`.
pub fn level_maps(a: &WK, which: LevelMap, m: usize) -> Result<WK> {
    match which {
        LevelMap::Lift => {
            if a.len() != 1 {
                return Err(Error::LengthMismatch { left: a.len(), right: 1 });
            }
            let mut out = a.clone();
            for _ in 1..m {
                out = witt_v(&out)?;
            }
            Ok(out)
        }
        LevelMap::Restrict => witt_r(a),
    }
}

/// A character of `K` with values in `Z/p^m`, given by a Witt vector.
#[derive(Clone, PartialEq)]
pub struct CharacterRep {
    pub rep: WK,
    pub reduced: bool,
}

impl CharacterRep {
    pub fn new(rep: WK) -> Self {
        CharacterRep { rep, reduced: false }
    }

    pub fn m(&self) -> usize {
        self.rep.len()
    }

    /// The reduced representative of the same class.
    pub fn reduce(&self) -> Result<CharacterRep> {
        if self.reduced {
            return Ok(self.clone());
        }
        Ok(CharacterRep { rep: asw_reduce(&self.rep)?.0, reduced: true })
    }

    pub fn conductor(&self) -> Result<i64> {
        fil_level(&self.reduce()?.rep)
    }

    pub fn to_json(&self) -> Value {
        json!({ "rep": self.rep.to_json(), "m": self.m(), "reduced": self.reduced })
    }
}

impl fmt::Debug for CharacterRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rep)
    }
}

// ---------------------------------------------------------------------------
// Brute-force conductor search, used to validate `conductor`.

/// All `F_p`-combinations of the given monomials (coefficient 1, `p = 2`
/// friendly; for odd `p` every coefficient in `0..p` is used).
pub fn span_of_monomials(field: &'static crate::coeff::FqField, monos: &[(i64, i64)]) -> Vec<KElt> {
    let p = field.p() as usize;
    let total = p.pow(monos.len() as u32);
    (0..total)
        .map(|mut code| {
            let mut terms = Vec::new();
            for &(a, b) in monos {
                let c = (code % p) as i64;
                code /= p;
                if c != 0 {
                    terms.push(KElt::term(field.from_int(c), a, b));
                }
            }
            KElt::sum_all(field, terms).expect("exact sums")
        })
        .collect()
}

/// The least filtration level among `a - (1 - F)(b)` for `b = (b_0, 0, ...)`
/// with `b_0` ranging over `translates`, where for `m >= 2` every later
/// component is minimized through the length-1 reduction: the last slot
/// of a Witt difference is additive, so it can be handled separately once
/// `m = 1` minimality has itself been brute-forced.
pub fn conductor_oracle(a: &WK, translates: &[KElt]) -> Result<i64> {
    let p = a.p();
    let m = a.len();
    if m > 2 {
        return Err(Error::InvalidContext("the brute-force oracle covers m <= 2".into()));
    }
    let field = a.ctx();
    let mut best = i64::MAX;
    for b0 in translates {
        let mut comps = vec![KElt::zero(field); m];
        comps[0] = b0.clone();
        let x = a.sub(&one_minus_f(&WK::new(p, field, comps)?)?)?;
        let level = if m == 1 {
            fil_level(&x)?
        } else {
            let head = pi_valuation(x.comp(0))?.map_or(0, |v| p as i64 * (-v).max(0));
            let last = WK::new(p, field, vec![x.comp(1).clone()])?;
            head.max(fil_level(&asw_reduce(&last)?.0)?)
        };
        best = best.min(level);
    }
    Ok(best)
}

/// Plain brute force at length 1: the least level of `a - (b - b^p)` over
/// the given `b`.
pub fn conductor_oracle_w1(a: &KElt, translates: &[KElt]) -> Result<i64> {
    let mut best = i64::MAX;
    for b in translates {
        let x = a.sub(&b.sub(&b.frobenius())?)?;
        let level = pi_valuation(&x)?.map_or(0, |v| (-v).max(0));
        best = best.min(level);
    }
    Ok(best)
}
