//! Precision-tracked Laurent series over a coefficient ring, nested twice to
//! realize `f = F_q((t))` and `K = f((pi))`.
//!
//! A series stores its nonzero coefficients inside a half-open window
//! `[lo, hi)`. `hi = None` means every coefficient above `lo` is known (the
//! series is a Laurent polynomial). With `zero_below` set, all exponents
//! below `lo` are exactly zero; this is the case for every value built from
//! exact input. Operations never guess: running out of certified
//! coefficients is an error.

use std::fmt;

use serde_json::{json, Value};

use crate::coeff::{self, FqElem, FqField};
use crate::error::{Error, Result};
use crate::ring::{Coeff, Precision, Ring};

pub struct Series<C: Coeff> {
    ctx: C::Ctx,
    /// Nonzero coefficients, sorted by exponent.
    coeffs: Vec<(i64, C)>,
    lo: i64,
    hi: Option<i64>,
    zero_below: bool,
}

/// `F_q((t))`.
pub type FElt = Series<FqElem>;
/// `F_q((t))((pi))`.
pub type KElt = Series<FElt>;

impl<C: Coeff> Clone for Series<C> {
    fn clone(&self) -> Self {
        Series {
            ctx: self.ctx,
            coeffs: self.coeffs.clone(),
            lo: self.lo,
            hi: self.hi,
            zero_below: self.zero_below,
        }
    }
}

impl<C: Coeff> PartialEq for Series<C> {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
            && self.hi == other.hi
            && self.zero_below == other.zero_below
            && (self.zero_below || self.lo == other.lo)
    }
}

fn min_hi(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (Some(x), None) | (None, Some(x)) => Some(x),
        (None, None) => None,
    }
}

fn add_hi(a: Option<i64>, k: i64) -> Option<i64> {
    a.map(|h| h + k)
}

// A rendered coefficient needs parentheses when it is a sum at depth 0.
fn has_top_level_sum(s: &str) -> bool {
    let mut depth = 0i32;
    for ch in s.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            '+' if depth == 0 => return true,
            _ => {}
        }
    }
    false
}

fn var_name(level: usize) -> &'static str {
    if level == 1 {
        "t"
    } else {
        "pi"
    }
}

/// Sorts by exponent and merges repeated exponents, dropping zeros.
fn normalize<C: Coeff>(mut terms: Vec<(i64, C)>) -> Result<Vec<(i64, C)>> {
    terms.sort_by_key(|t| t.0);
    let mut out: Vec<(i64, C)> = Vec::with_capacity(terms.len());
    for (k, c) in terms {
        match out.last_mut() {
            Some((j, acc)) if *j == k => *acc = acc.add(&c)?,
            _ => out.push((k, c)),
        }
    }
    out.retain(|(_, c)| !c.is_zero());
    Ok(out)
}

impl<C: Coeff> Series<C> {
    fn raw(ctx: C::Ctx, coeffs: Vec<(i64, C)>, lo: i64, hi: Option<i64>, zero_below: bool) -> Self {
        Series { ctx, coeffs, lo, hi, zero_below }
    }

    // Exact series from already normalized terms.
    fn exact(ctx: C::Ctx, coeffs: Vec<(i64, C)>) -> Self {
        let lo = coeffs.first().map_or(0, |t| t.0);
        Series { ctx, coeffs, lo, hi: None, zero_below: true }
    }

    /// Exact series from `(exponent, coefficient)` pairs; zero coefficients
    /// are dropped and repeated exponents accumulate.
    pub fn from_terms(ctx: C::Ctx, terms: impl IntoIterator<Item = (i64, C)>) -> Result<Self> {
        Ok(Self::exact(ctx, normalize(terms.into_iter().collect())?))
    }

    pub fn monomial(c: C, k: i64) -> Self {
        let ctx = c.ctx();
        let coeffs = if c.is_zero() { Vec::new() } else { vec![(k, c)] };
        Series { ctx, coeffs, lo: k, hi: None, zero_below: true }
    }

    pub fn constant(c: C) -> Self {
        Self::monomial(c, 0)
    }

    /// Series with an explicit window. Coefficients outside `[lo, hi)` are
    /// rejected.
    pub fn with_window(
        ctx: C::Ctx,
        terms: impl IntoIterator<Item = (i64, C)>,
        lo: i64,
        hi: Option<i64>,
        zero_below: bool,
    ) -> Result<Self> {
        if let Some(h) = hi {
            if h <= lo {
                return Err(Error::EmptyWindow);
            }
        }
        let mut s = Self::from_terms(ctx, terms)?;
        if let Some(&(k, _)) = s.coeffs.first() {
            if k < lo {
                return Err(Error::Parse(format!("exponent {k} below window start {lo}")));
            }
        }
        if let (Some(h), Some(&(k, _))) = (hi, s.coeffs.last()) {
            if k >= h {
                return Err(Error::Parse(format!("exponent {k} at or above window end {h}")));
            }
        }
        s.lo = lo;
        s.hi = hi;
        s.zero_below = zero_below;
        Ok(s)
    }

    pub fn ctx_of(&self) -> C::Ctx {
        self.ctx
    }
    pub fn lo(&self) -> i64 {
        self.lo
    }
    pub fn hi(&self) -> Option<i64> {
        self.hi
    }
    pub fn zero_below(&self) -> bool {
        self.zero_below
    }
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &C)> {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }
    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    fn below(&self, bound: i64) -> Vec<(i64, C)> {
        self.coeffs.iter().take_while(|t| t.0 < bound).cloned().collect()
    }

    /// Keeps only exponents below `hi`, which becomes the window end.
    pub fn truncate(&self, hi: i64) -> Result<Self> {
        if self.hi.is_some_and(|h| h <= hi) {
            return Ok(self.clone());
        }
        if hi <= self.lo && !self.zero_below {
            return Err(Error::EmptyWindow);
        }
        Ok(Self::raw(self.ctx, self.below(hi), self.lo.min(hi - 1), Some(hi), self.zero_below))
    }

    /// Drops every exponent `>= bound`, keeping the result exact; used for
    /// normal forms of classes modulo an integral submodule.
    pub fn polar_part(&self, bound: i64) -> Result<Self> {
        if !self.zero_below {
            return Err(Error::PrecisionLoss("unknown terms below the window".into()));
        }
        if let Some(h) = self.hi {
            if h < bound {
                return Err(Error::PrecisionLoss(format!(
                    "{} window ends at {h}, below {bound}",
                    var_name(Self::LEVEL)
                )));
            }
        }
        Ok(Self::exact(self.ctx, self.below(bound)))
    }

    /// `sum c_k X^{k+shift}`.
    pub fn shift(&self, shift: i64) -> Self {
        Series {
            ctx: self.ctx,
            coeffs: self.coeffs.iter().map(|(k, c)| (k + shift, c.clone())).collect(),
            lo: self.lo + shift,
            hi: add_hi(self.hi, shift),
            zero_below: self.zero_below,
        }
    }

    /// Applies `f` to every stored coefficient (window unchanged), dropping
    /// results that are exactly zero.
    pub fn map_coeffs(&self, f: impl Fn(i64, &C) -> Result<C>) -> Result<Self> {
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for (k, c) in &self.coeffs {
            let v = f(*k, c)?;
            if !v.is_zero() {
                coeffs.push((*k, v));
            }
        }
        Ok(Self::raw(self.ctx, coeffs, self.lo, self.hi, self.zero_below))
    }

    /// `X d/dX`: multiplies the coefficient of `X^k` by `k`.
    pub fn log_derivative(&self) -> Self {
        self.map_coeffs(|k, c| Ok(c.scale(k))).expect("scaling cannot fail")
    }

    /// `d/dX`.
    pub fn derivative(&self) -> Self {
        self.log_derivative().shift(-1)
    }

    pub fn mul_coeff(&self, c: &C) -> Result<Self> {
        if c.is_zero() {
            return Ok(Self::zero(self.ctx));
        }
        self.map_coeffs(|_, x| x.mul(c))
    }

    /// Lower bound for the valuation usable in precision bookkeeping.
    fn val_bound(&self) -> i64 {
        match self.coeffs.first() {
            Some(&(k, _)) => k,
            None => self.hi.unwrap_or(self.lo),
        }
    }

    /// Least exponent with a certified nonzero coefficient.
    pub fn valuation(&self) -> Result<i64> {
        if !self.zero_below {
            return Err(Error::UndeterminedValuation(format!(
                "terms below {}^{} are unknown",
                var_name(Self::LEVEL),
                self.lo
            )));
        }
        match self.coeffs.first() {
            Some((k, c)) if c.certified_nonzero() => Ok(*k),
            Some((k, _)) => Err(Error::UndeterminedValuation(format!(
                "coefficient of {}^{k} is zero within its window",
                var_name(Self::LEVEL)
            ))),
            None => Err(Error::UndeterminedValuation(match self.hi {
                Some(h) => format!("series is O({}^{h})", var_name(Self::LEVEL)),
                None => "zero has no valuation".to_string(),
            })),
        }
    }

    /// Exact coefficient of `X^k`.
    pub fn coeff(&self, k: i64) -> Result<C> {
        if let Some(h) = self.hi {
            if k >= h {
                return Err(Error::PrecisionLoss(format!(
                    "coefficient of {}^{k} requested, window ends at {h}",
                    var_name(Self::LEVEL)
                )));
            }
        }
        if k < self.lo && !self.zero_below {
            return Err(Error::PrecisionLoss(format!(
                "coefficient of {}^{k} lies below the known window",
                var_name(Self::LEVEL)
            )));
        }
        Ok(match self.coeffs.binary_search_by_key(&k, |t| t.0) {
            Ok(i) => self.coeffs[i].1.clone(),
            Err(_) => C::zero(self.ctx),
        })
    }

    fn combine(&self, rhs: &Self, negate_rhs: bool) -> Result<Self> {
        let zero_below = self.zero_below && rhs.zero_below;
        let lo = match (self.zero_below, rhs.zero_below) {
            (true, true) => self.lo.min(rhs.lo),
            (false, true) => self.lo,
            (true, false) => rhs.lo,
            (false, false) => self.lo.max(rhs.lo),
        };
        let hi = min_hi(self.hi, rhs.hi);
        if hi.is_some_and(|h| h <= lo) && !zero_below {
            return Err(Error::EmptyWindow);
        }
        let in_window = |k: i64| (zero_below || k >= lo) && hi.is_none_or(|h| k < h);
        let rhs_c = |c: &C| if negate_rhs { c.neg() } else { c.clone() };
        // Two-pointer merge of the sorted term lists.
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + rhs.coeffs.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.coeffs, &rhs.coeffs);
        while i < a.len() || j < b.len() {
            let (k, c) = if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                i += 1;
                (a[i - 1].0, a[i - 1].1.clone())
            } else if i == a.len() || b[j].0 < a[i].0 {
                j += 1;
                (b[j - 1].0, rhs_c(&b[j - 1].1))
            } else {
                i += 1;
                j += 1;
                (a[i - 1].0, a[i - 1].1.add(&rhs_c(&b[j - 1].1))?)
            };
            if in_window(k) && !c.is_zero() {
                coeffs.push((k, c));
            }
        }
        Ok(Self::raw(self.ctx, coeffs, lo, hi, zero_below))
    }

    fn multiply(&self, rhs: &Self) -> Result<Self> {
        if Ring::is_zero(self) || Ring::is_zero(rhs) {
            return Ok(Self::zero(self.ctx));
        }
        if !self.zero_below || !rhs.zero_below {
            return Err(Error::UndeterminedValuation("product of series with unknown low terms".into()));
        }
        if self.hi.is_none() && rhs.hi.is_none() && self.coeffs.len() == 1 && rhs.coeffs.len() == 1 {
            let (i, a) = &self.coeffs[0];
            let (j, b) = &rhs.coeffs[0];
            return Ok(Series::monomial(a.mul(b)?, i + j));
        }
        let hi = min_hi(add_hi(rhs.hi, self.val_bound()), add_hi(self.hi, rhs.val_bound()));
        let lo = self.lo + rhs.lo;
        if hi.is_some_and(|h| h <= lo) {
            return Err(Error::EmptyWindow);
        }
        let mut terms: Vec<(i64, C)> = Vec::with_capacity(self.coeffs.len() * rhs.coeffs.len());
        for (i, a) in &self.coeffs {
            for (j, b) in &rhs.coeffs {
                let k = i + j;
                if hi.is_some_and(|h| k >= h) {
                    // rhs exponents ascend; later j only grow.
                    break;
                }
                terms.push((k, a.mul(b)?));
            }
        }
        Ok(Self::raw(self.ctx, normalize(terms)?, lo, hi, true))
    }

    /// Multiplicative inverse. Exact inputs that are not monomials are
    /// expanded to the relative precision `prec.cap(level)`; windowed
    /// inputs keep their relative precision.
    pub fn inverse(&self, prec: &Precision) -> Result<Self> {
        if Ring::is_zero(self) {
            return Err(Error::ZeroDivision);
        }
        let v = self.valuation()?;
        let lead = &self.coeffs[0].1;
        let lead_inv = lead.inv(prec)?;
        if self.hi.is_none() && self.coeffs.len() == 1 {
            return Ok(Series::monomial(lead_inv, -v));
        }
        let rel = match self.hi {
            Some(h) => h - v,
            None => prec.cap(Self::LEVEL) as i64,
        };
        // With u = self / X^v: r_k = -lead^{-1} sum_{i>=1} u_i r_{k-i}.
        let u: Vec<(i64, &C)> = self.coeffs[1..].iter().map(|(k, c)| (k - v, c)).collect();
        let mut r: Vec<C> = Vec::with_capacity(rel as usize);
        r.push(lead_inv.clone());
        for k in 1..rel {
            let mut parts = Vec::new();
            for &(i, ui) in &u {
                if i > k {
                    break;
                }
                let prev = &r[(k - i) as usize];
                if !prev.is_zero() {
                    parts.push(ui.mul(prev)?);
                }
            }
            r.push(C::sum_all(self.ctx, parts)?.mul(&lead_inv)?.neg());
        }
        let coeffs: Vec<(i64, C)> =
            r.into_iter().enumerate().map(|(k, c)| (k as i64 - v, c)).filter(|(_, c)| !c.is_zero()).collect();
        Ok(Self::raw(self.ctx, coeffs, -v, Some(rel - v), true))
    }

    /// No truncation at any level.
    pub fn is_exact_series(&self) -> bool {
        self.hi.is_none() && self.zero_below && self.coeffs.iter().all(|(_, c)| c.is_exact())
    }

    /// Agrees with `other` on the common window.
    pub fn agrees_with(&self, other: &Self) -> Result<bool> {
        let diff = self.sub(other)?;
        Ok(diff.coeffs.iter().all(|(_, c)| !c.certified_nonzero()))
    }

    /// Equal to 1 on the known window.
    pub fn is_one_within_window(&self) -> Result<bool> {
        self.agrees_with(&Self::one(self.ctx))
    }
}

impl<C: Coeff> Ring for Series<C> {
    type Ctx = C::Ctx;

    fn ctx(&self) -> Self::Ctx {
        self.ctx
    }
    fn zero(ctx: Self::Ctx) -> Self {
        Series { ctx, coeffs: Vec::new(), lo: 0, hi: None, zero_below: true }
    }
    fn one(ctx: Self::Ctx) -> Self {
        Series::monomial(C::one(ctx), 0)
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty() && self.hi.is_none() && self.zero_below
    }
    fn add(&self, rhs: &Self) -> Result<Self> {
        self.combine(rhs, false)
    }
    fn sub(&self, rhs: &Self) -> Result<Self> {
        self.combine(rhs, true)
    }
    fn neg(&self) -> Self {
        self.map_coeffs(|_, c| Ok(c.neg())).expect("negation cannot fail")
    }
    fn mul(&self, rhs: &Self) -> Result<Self> {
        self.multiply(rhs)
    }
    fn scale(&self, k: i64) -> Self {
        self.map_coeffs(|_, c| Ok(c.scale(k))).expect("scaling cannot fail")
    }
    fn characteristic(ctx: Self::Ctx) -> u32 {
        C::characteristic(ctx)
    }
    fn sum_all(ctx: Self::Ctx, items: Vec<Self>) -> Result<Self> {
        if !items.iter().all(|x| x.hi.is_none() && x.zero_below) {
            return items.iter().try_fold(Self::zero(ctx), |acc, x| acc.add(x));
        }
        let mut all: Vec<(i64, C)> = items.into_iter().flat_map(|x| x.coeffs).collect();
        all.sort_by_key(|t| t.0);
        let mut coeffs: Vec<(i64, C)> = Vec::with_capacity(all.len());
        let mut iter = all.into_iter().peekable();
        while let Some((k, c)) = iter.next() {
            let mut group = vec![c];
            while iter.peek().is_some_and(|t| t.0 == k) {
                group.push(iter.next().unwrap().1);
            }
            let c = if group.len() == 1 { group.pop().unwrap() } else { C::sum_all(ctx, group)? };
            if !c.is_zero() {
                coeffs.push((k, c));
            }
        }
        Ok(Self::exact(ctx, coeffs))
    }
}

impl<C: Coeff> Coeff for Series<C> {
    const LEVEL: usize = C::LEVEL + 1;

    fn certified_nonzero(&self) -> bool {
        self.coeffs.iter().any(|(_, c)| c.certified_nonzero())
    }
    fn is_exact(&self) -> bool {
        self.is_exact_series()
    }
    fn inv(&self, prec: &Precision) -> Result<Self> {
        self.inverse(prec)
    }
    fn frobenius(&self) -> Self {
        let p = C::characteristic(self.ctx) as i64;
        Series {
            ctx: self.ctx,
            coeffs: self.coeffs.iter().map(|(k, c)| (k * p, c.frobenius())).collect(),
            lo: self.lo * p,
            hi: self.hi.map(|h| h * p),
            zero_below: self.zero_below,
        }
    }
    fn pth_root(&self) -> Result<Self> {
        let p = C::characteristic(self.ctx) as i64;
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for (k, c) in &self.coeffs {
            if k.rem_euclid(p) != 0 {
                return Err(Error::NotAPthPower { witness: format!("{}^{k}", var_name(Self::LEVEL)) });
            }
            coeffs.push((k / p, c.pth_root()?));
        }
        Ok(Series {
            ctx: self.ctx,
            coeffs,
            lo: self.lo.div_euclid(p),
            hi: self.hi.map(|h| -((-h).div_euclid(p))),
            zero_below: self.zero_below,
        })
    }
    fn cartier_part(&self) -> Result<Self> {
        if !self.zero_below {
            return Err(Error::PrecisionLoss(format!("{}-terms below the window are unknown", var_name(Self::LEVEL))));
        }
        let p = C::characteristic(self.ctx) as i64;
        let mut coeffs = Vec::new();
        for (k, c) in &self.coeffs {
            if k.rem_euclid(p) == 0 {
                let r = c.cartier_part()?;
                if !r.is_zero() {
                    coeffs.push((k / p, r));
                }
            }
        }
        Ok(Series {
            ctx: self.ctx,
            coeffs,
            lo: self.lo.div_euclid(p),
            hi: self.hi.map(|h| -((-h).div_euclid(p))),
            zero_below: true,
        })
    }
    fn render(&self) -> String {
        self.to_string()
    }
}

impl<C: Coeff> fmt::Display for Series<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let var = var_name(Self::LEVEL);
        let mut parts: Vec<String> = Vec::new();
        if !self.zero_below {
            parts.push(format!("?({var}^{})", self.lo));
        }
        for (k, c) in self.terms() {
            let cs = c.render();
            let compound = has_top_level_sum(&cs);
            let power = match k {
                0 => String::new(),
                1 => var.to_string(),
                k => format!("{var}^{k}"),
            };
            let term = match (power.is_empty(), cs.as_str(), compound) {
                (true, _, _) => cs.clone(),
                (false, "1", _) => power,
                (false, _, true) => format!("({cs})*{power}"),
                (false, _, false) => format!("{cs}*{power}"),
            };
            parts.push(term);
        }
        if let Some(h) = self.hi {
            parts.push(format!("O({var}^{h})"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join("+"))
        }
    }
}

impl<C: Coeff> fmt::Debug for Series<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// JSON form `{lo, hi, zero_below, coeffs: [[expo, coeff], ...]}`, nested for
/// `K`; `F_q` coefficients are their text form.
pub trait ToJson: Sized {
    type Ctx;
    fn to_json(&self) -> Value;
    fn from_json(ctx: Self::Ctx, v: &Value) -> Result<Self>;
}

impl ToJson for FqElem {
    type Ctx = &'static FqField;
    fn to_json(&self) -> Value {
        Value::String(self.to_string())
    }
    fn from_json(ctx: Self::Ctx, v: &Value) -> Result<Self> {
        match v {
            Value::String(s) => ctx.parse(s),
            Value::Number(n) => Ok(ctx.from_int(n.as_i64().ok_or_else(|| Error::Parse("bad integer".into()))?)),
            _ => Err(Error::Parse("F_q literal must be a string or integer".into())),
        }
    }
}

impl<C> ToJson for Series<C>
where
    C: Coeff + ToJson<Ctx = <C as Ring>::Ctx>,
{
    type Ctx = <C as Ring>::Ctx;
    fn to_json(&self) -> Value {
        let coeffs: Vec<Value> = self.terms().map(|(k, c)| json!([k, c.to_json()])).collect();
        json!({ "lo": self.lo, "hi": self.hi, "zero_below": self.zero_below, "coeffs": coeffs })
    }
    fn from_json(ctx: Self::Ctx, v: &Value) -> Result<Self> {
        let bad = |what: &str| Error::Parse(format!("series JSON: {what}"));
        let lo = v.get("lo").and_then(Value::as_i64).ok_or_else(|| bad("missing lo"))?;
        let hi = match v.get("hi") {
            None | Some(Value::Null) => None,
            Some(h) => Some(h.as_i64().ok_or_else(|| bad("bad hi"))?),
        };
        let zero_below = v.get("zero_below").and_then(Value::as_bool).unwrap_or(true);
        let mut terms = Vec::new();
        for entry in v.get("coeffs").and_then(Value::as_array).ok_or_else(|| bad("missing coeffs"))? {
            let pair = entry.as_array().filter(|a| a.len() == 2).ok_or_else(|| bad("coeff entry"))?;
            let k = pair[0].as_i64().ok_or_else(|| bad("exponent"))?;
            terms.push((k, C::from_json(ctx, &pair[1])?));
        }
        Series::with_window(ctx, terms, lo, hi, zero_below)
    }
}

// ---------------------------------------------------------------------------
// Operation wrappers named after the module contract.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesOp {
    Add,
    Sub,
    Mul,
}

pub fn ls_arith<C: Coeff>(a: &Series<C>, b: &Series<C>, op: SeriesOp) -> Result<Series<C>> {
    match op {
        SeriesOp::Add => a.add(b),
        SeriesOp::Sub => a.sub(b),
        SeriesOp::Mul => a.mul(b),
    }
}

pub fn ls_inv<C: Coeff>(a: &Series<C>, prec: &Precision) -> Result<Series<C>> {
    a.inverse(prec)
}

pub fn ls_val<C: Coeff>(a: &Series<C>) -> Result<i64> {
    a.valuation()
}

pub fn ls_pth_root<C: Coeff>(a: &Series<C>) -> Result<Series<C>> {
    a.pth_root()
}

pub fn ls_coeff<C: Coeff>(a: &Series<C>, expo: i64) -> Result<C> {
    a.coeff(expo)
}

// ---------------------------------------------------------------------------
// Helpers specific to the two-level tower.

impl FElt {
    /// `c t^a`.
    pub fn t_term(c: FqElem, a: i64) -> FElt {
        Series::monomial(c, a)
    }
}

impl KElt {
    /// `c t^a pi^b`.
    pub fn term(c: FqElem, a: i64, b: i64) -> KElt {
        Series::monomial(Series::monomial(c, a), b)
    }

    /// An element of `f` viewed as a constant in `pi`.
    pub fn from_f(x: FElt) -> KElt {
        Series::monomial(x, 0)
    }

    pub fn field(&self) -> &'static FqField {
        self.ctx
    }

    /// `t d/dt` applied coefficientwise.
    pub fn t_log_derivative(&self) -> KElt {
        self.map_coeffs(|_, c| Ok(c.log_derivative())).expect("scaling cannot fail")
    }

    /// `pi d/dpi`.
    pub fn pi_log_derivative(&self) -> KElt {
        self.log_derivative()
    }

    /// `d/dt`.
    pub fn t_derivative(&self) -> KElt {
        self.map_coeffs(|_, c| Ok(c.derivative())).expect("scaling cannot fail")
    }

    /// `d/dpi`.
    pub fn pi_derivative(&self) -> KElt {
        self.derivative()
    }

    /// Multiplication by `t^a pi^b`.
    pub fn shift2(&self, a: i64, b: i64) -> KElt {
        self.map_coeffs(|_, c| Ok(c.shift(a))).expect("shift cannot fail").shift(b)
    }

    /// Coefficient of `t^a pi^b`.
    pub fn coeff2(&self, a: i64, b: i64) -> Result<FqElem> {
        self.coeff(b)?.coeff(a)
    }

    /// Monomials `(t exponent, pi exponent, coefficient)` of the known part.
    pub fn monomials(&self) -> Vec<(i64, i64, FqElem)> {
        let mut out = Vec::new();
        for (b, c) in self.terms() {
            for (a, x) in c.terms() {
                out.push((a, b, *x));
            }
        }
        out
    }
}

// ---------------------------------------------------------------------------

/// Arithmetic context: the residue field `F_q`, Witt length bound and the
/// default precision windows.
#[derive(Debug, Clone, Copy)]
pub struct Context {
    pub field: &'static FqField,
    pub p: u32,
    pub e: u32,
    pub m_max: usize,
    pub t_window: (i64, i64),
    pub pi_window: (i64, i64),
    pub seed: u64,
}

impl Context {
    pub fn new(p: u32, e: u32) -> Result<Context> {
        Ok(Context {
            field: coeff::field(p, e)?,
            p,
            e,
            m_max: 4,
            t_window: (-12, 12),
            pi_window: (-8, 8),
            seed: 0,
        })
    }

    pub fn with_windows(mut self, t_window: (i64, i64), pi_window: (i64, i64)) -> Result<Context> {
        if t_window.1 <= t_window.0 || pi_window.1 <= pi_window.0 {
            return Err(Error::InvalidContext("precision windows must be nonempty".into()));
        }
        self.t_window = t_window;
        self.pi_window = pi_window;
        Ok(self)
    }

    pub fn with_seed(mut self, seed: u64) -> Context {
        self.seed = seed;
        self
    }

    pub fn with_m_max(mut self, m_max: usize) -> Result<Context> {
        if m_max == 0 || m_max > 4 {
            return Err(Error::InvalidContext(format!("m = {m_max} not in 1..=4")));
        }
        self.m_max = m_max;
        Ok(self)
    }

    pub fn precision(&self) -> Precision {
        Precision::new(
            (self.t_window.1 - self.t_window.0) as usize,
            (self.pi_window.1 - self.pi_window.0) as usize,
        )
    }

    pub fn fq(&self, k: i64) -> FqElem {
        self.field.from_int(k)
    }

    pub fn k_zero(&self) -> KElt {
        KElt::zero(self.field)
    }

    pub fn k_one(&self) -> KElt {
        KElt::one(self.field)
    }

    pub fn k_term(&self, c: i64, a: i64, b: i64) -> KElt {
        KElt::term(self.fq(c), a, b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(p: u32, e: u32) -> Context {
        Context::new(p, e).unwrap()
    }

    fn f_poly(c: &Context, terms: &[(i64, i64)], hi: Option<i64>) -> FElt {
        let t: Vec<(i64, FqElem)> = terms.iter().map(|&(k, v)| (k, c.fq(v))).collect();
        let lo = terms.iter().map(|x| x.0).min().unwrap_or(0).min(0);
        FElt::with_window(c.field, t, lo, hi, true).unwrap()
    }

    #[test]
    fn monomial_product_and_cancellation() {
        let c = ctx(2, 1);
        let one = FElt::one(c.field);
        let t = FElt::t_term(c.fq(1), 1);
        let tinv = FElt::t_term(c.fq(1), -1);
        assert_eq!(ls_arith(&tinv, &t, SeriesOp::Mul).unwrap(), one);

        let a = c.k_term(1, 0, -1).add(&c.k_term(1, 0, -2)).unwrap();
        let b = c.k_term(1, 0, -2);
        assert_eq!(ls_arith(&a, &b, SeriesOp::Sub).unwrap(), c.k_term(1, 0, -1));
    }

    #[test]
    fn windowed_product_matches_convolution() {
        let c = ctx(3, 1);
        let a = f_poly(&c, &[(0, 1), (1, 1)], Some(4));
        let b = f_poly(&c, &[(0, 1), (1, -1)], Some(4));
        let prod = ls_arith(&a, &b, SeriesOp::Mul).unwrap();
        assert_eq!(prod, f_poly(&c, &[(0, 1), (2, -1)], Some(4)));
        assert_eq!(prod.lo(), 0);
        assert_eq!(prod.hi(), Some(4));
    }

    #[test]
    fn empty_window_is_an_error() {
        let c = ctx(2, 1);
        let a = FElt::with_window(c.field, vec![], 0, Some(1), false).unwrap();
        let b = FElt::with_window(c.field, vec![(5, c.fq(1))], 5, Some(6), false).unwrap();
        assert!(ls_arith(&a, &b, SeriesOp::Mul).is_err());
        assert_eq!(FElt::with_window(c.field, vec![], 3, Some(3), true), Err(Error::EmptyWindow));
    }

    #[test]
    fn inverses() {
        let c = ctx(2, 1);
        let prec = Precision::new(8, 8);
        let t = FElt::t_term(c.fq(1), 1);
        assert_eq!(ls_inv(&t, &prec).unwrap(), FElt::t_term(c.fq(1), -1));

        let one_minus_t = f_poly(&c, &[(0, 1), (1, -1)], None);
        let inv = ls_inv(&one_minus_t, &prec).unwrap();
        let geometric: Vec<(i64, FqElem)> = (0..8).map(|k| (k, c.fq(1))).collect();
        assert_eq!(inv, FElt::with_window(c.field, geometric, 0, Some(8), true).unwrap());
        assert!(one_minus_t.mul(&inv).unwrap().is_one_within_window().unwrap());

        let windowed = f_poly(&c, &[(0, 1), (1, -1)], Some(4));
        let inv4 = ls_inv(&windowed, &prec).unwrap();
        assert_eq!(inv4.hi(), Some(4));
        assert_eq!(ls_inv(&FElt::zero(c.field), &prec), Err(Error::ZeroDivision));
    }

    #[test]
    fn valuations() {
        let c = ctx(2, 1);
        let x = f_poly(&c, &[(3, 1), (5, 1)], None);
        assert_eq!(ls_val(&x).unwrap(), 3);

        let unit = KElt::from_f(f_poly(&c, &[(0, 1), (1, 1)], None)).add(&c.k_term(1, 0, 1)).unwrap();
        let y = unit.shift(-2);
        assert_eq!(ls_val(&y).unwrap(), -2);

        let z = c.k_term(1, -7, 0);
        assert_eq!(ls_val(&z).unwrap(), 0);

        let vague = FElt::with_window(c.field, vec![], 0, Some(4), true).unwrap();
        assert!(matches!(ls_val(&vague), Err(Error::UndeterminedValuation(_))));
    }

    #[test]
    fn pth_roots() {
        let c = ctx(2, 1);
        assert_eq!(ls_pth_root(&c.k_term(1, 2, 4)).unwrap(), c.k_term(1, 1, 2));
        assert_eq!(
            ls_pth_root(&c.k_term(1, 1, 2)),
            Err(Error::NotAPthPower { witness: "t^1".into() })
        );
        let one_plus_t = KElt::from_f(f_poly(&c, &[(0, 1), (1, 1)], None));
        let sq = one_plus_t.mul(&one_plus_t).unwrap();
        assert_eq!(ls_pth_root(&sq).unwrap(), one_plus_t);
    }

    #[test]
    fn coefficients() {
        let c = ctx(5, 1);
        let x = f_poly(&c, &[(-1, 1), (1, 3)], None);
        assert_eq!(ls_coeff(&x, -1).unwrap(), c.fq(1));
        let pi2 = c.k_term(1, 0, 2);
        assert!(Ring::is_zero(&ls_coeff(&pi2, -1).unwrap()));
        let w = f_poly(&c, &[(0, 1)], Some(3));
        assert!(matches!(ls_coeff(&w, 3), Err(Error::PrecisionLoss(_))));
    }

    #[test]
    fn display_and_json() {
        let c = ctx(2, 2);
        let g = c.field.generator().unwrap();
        let x = KElt::term(g.add(c.fq(1)), 1, -1).add(&c.k_term(1, 0, -2)).unwrap();
        assert_eq!(x.to_string(), "pi^-2+(g+1)*t*pi^-1");
        let back = KElt::from_json(c.field, &x.to_json()).unwrap();
        assert_eq!(back, x);
    }
}
