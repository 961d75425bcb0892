//! Truncated `p`-typical Witt vectors over an arbitrary ring.
//!
//! A vector of length `m` is stored as `(w_0, ..., w_{m-1})` and stands for
//! `sum_i V^i [w_i]`, so the ghost components are
//! `w^(n) = sum_{i <= n} p^i w_i^{p^{n-i}}`. Addition, multiplication and
//! negation use universal polynomials with integer coefficients, obtained by
//! solving the ghost recursion once per `(p, m)`; in characteristic `p` the
//! coefficients are reduced mod `p` before evaluation.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::ring::{Coeff, Ring};
use crate::series::ToJson;

/// Longest supported vector for each prime; the universal polynomials grow
/// like `p^{m-1}` in degree.
pub fn max_length(p: u32) -> usize {
    match p {
        2 | 3 => 4,
        _ => 3,
    }
}

// ---------------------------------------------------------------------------
// Integer polynomials used only while building the cache.

type Exps = Vec<u16>;

#[derive(Clone, Debug, Default)]
struct ZPoly {
    terms: HashMap<Exps, BigInt>,
}

impl ZPoly {
    fn var(nvars: usize, i: usize) -> ZPoly {
        let mut e = vec![0u16; nvars];
        e[i] = 1;
        ZPoly { terms: HashMap::from([(e, BigInt::from(1))]) }
    }

    fn add_assign(&mut self, other: &ZPoly, scale: &BigInt) {
        for (e, c) in &other.terms {
            let slot = self.terms.entry(e.clone()).or_insert_with(|| BigInt::from(0));
            *slot += c * scale;
            if Zero::is_zero(slot) {
                self.terms.remove(e);
            }
        }
    }

    fn mul(&self, other: &ZPoly) -> ZPoly {
        let mut out: HashMap<Exps, BigInt> = HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Exps = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                *out.entry(e).or_insert_with(|| BigInt::from(0)) += ca * cb;
            }
        }
        out.retain(|_, c| !Zero::is_zero(c));
        ZPoly { terms: out }
    }

    fn pow(&self, mut k: u64, nvars: usize) -> ZPoly {
        let mut acc = ZPoly { terms: HashMap::from([(vec![0u16; nvars], BigInt::from(1))]) };
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    fn div_exact(&mut self, d: &BigInt) {
        for c in self.terms.values_mut() {
            debug_assert!(Zero::is_zero(&(&*c % d)), "ghost recursion must divide exactly");
            *c /= d;
        }
    }
}

/// A universal polynomial, frozen for evaluation.
#[derive(Debug)]
pub struct WittPoly {
    terms: Vec<(Exps, BigInt)>,
    /// Terms with coefficient reduced into `[0, p)`, zeros dropped.
    reduced: Vec<(Exps, i64)>,
}

impl WittPoly {
    fn freeze(z: ZPoly, p: u32) -> WittPoly {
        let mut terms: Vec<(Exps, BigInt)> = z.terms.into_iter().collect();
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        let pb = BigInt::from(p);
        let reduced = terms
            .iter()
            .filter_map(|(e, c)| {
                let r = ((c % &pb) + &pb) % &pb;
                (!Zero::is_zero(&r)).then(|| (e.clone(), r.to_i64().expect("small residue")))
            })
            .collect();
        WittPoly { terms, reduced }
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|(e, _)| e.iter().map(|&x| x as u32).sum()).max().unwrap_or(0)
    }
}

/// Sum, difference, product and negation polynomials `S_n, D_n, P_n, N_n`
/// for one `(p, m)`. `S_n`, `D_n` and `P_n` are in the variables
/// `X_0..X_{m-1}, Y_0..Y_{m-1}`; `N_n` in `X_0..X_{m-1}`.
#[derive(Debug)]
pub struct WittPolyCache {
    pub p: u32,
    pub m: usize,
    pub sum: Vec<WittPoly>,
    pub diff: Vec<WittPoly>,
    pub prod: Vec<WittPoly>,
    pub neg: Vec<WittPoly>,
}

static CACHE: OnceLock<Mutex<HashMap<(u32, usize), Arc<WittPolyCache>>>> = OnceLock::new();

/// The universal polynomials for `(p, m)`, built on first use. Two threads
/// racing on the first call both compute; the first to publish wins.
pub fn polys(p: u32, m: usize) -> Result<Arc<WittPolyCache>> {
    if m == 0 || m > max_length(p) {
        return Err(Error::InvalidContext(format!("Witt length {m} not in 1..={}", max_length(p))));
    }
    let map = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(c) = map.lock().unwrap().get(&(p, m)) {
        return Ok(c.clone());
    }
    let built = Arc::new(build(p, m));
    let mut guard = map.lock().unwrap();
    Ok(guard.entry((p, m)).or_insert(built).clone())
}

fn build(p: u32, m: usize) -> WittPolyCache {
    let nv = 2 * m;
    let pb = BigInt::from(p);
    let ppow = |k: usize| pb.pow(k as u32);
    let xs: Vec<ZPoly> = (0..m).map(|i| ZPoly::var(nv, i)).collect();
    let ys: Vec<ZPoly> = (0..m).map(|i| ZPoly::var(nv, m + i)).collect();
    let ghost = |v: &[ZPoly], n: usize| -> ZPoly {
        let mut g = ZPoly::default();
        for (i, x) in v.iter().enumerate().take(n + 1) {
            g.add_assign(&x.pow((p as u64).pow((n - i) as u32), nv), &ppow(i));
        }
        g
    };
    // Solves ghost_n(out) = target_n for out_n, given out_0..out_{n-1}.
    let solve = |target: &dyn Fn(usize) -> ZPoly| -> Vec<ZPoly> {
        let mut out: Vec<ZPoly> = Vec::with_capacity(m);
        for n in 0..m {
            let mut acc = target(n);
            for (i, o) in out.iter().enumerate() {
                acc.add_assign(&o.pow((p as u64).pow((n - i) as u32), nv), &-ppow(i));
            }
            acc.div_exact(&ppow(n));
            out.push(acc);
        }
        out
    };
    let sum = solve(&|n| {
        let mut g = ghost(&xs, n);
        g.add_assign(&ghost(&ys, n), &BigInt::from(1));
        g
    });
    let diff = solve(&|n| {
        let mut g = ghost(&xs, n);
        g.add_assign(&ghost(&ys, n), &-BigInt::from(1));
        g
    });
    let prod = solve(&|n| ghost(&xs, n).mul(&ghost(&ys, n)));
    let neg = solve(&|n| {
        let mut g = ZPoly::default();
        g.add_assign(&ghost(&xs, n), &-BigInt::from(1));
        g
    });
    let freeze = |v: Vec<ZPoly>| v.into_iter().map(|z| WittPoly::freeze(z, p)).collect();
    WittPolyCache { p, m, sum: freeze(sum), diff: freeze(diff), prod: freeze(prod), neg: freeze(neg) }
}

// ---------------------------------------------------------------------------
// Evaluation.

struct Powers<'a, R: Ring> {
    vars: &'a [R],
    memo: Vec<HashMap<u16, R>>,
}

impl<'a, R: Ring> Powers<'a, R> {
    fn new(vars: &'a [R]) -> Self {
        Powers { vars, memo: vec![HashMap::new(); vars.len()] }
    }

    fn get(&mut self, i: usize, k: u16) -> Result<R> {
        if k == 1 {
            return Ok(self.vars[i].clone());
        }
        if let Some(v) = self.memo[i].get(&k) {
            return Ok(v.clone());
        }
        let v = self.vars[i].pow(k as u64)?;
        self.memo[i].insert(k, v.clone());
        Ok(v)
    }
}

fn eval<R: Ring>(poly: &WittPoly, pw: &mut Powers<'_, R>, ctx: R::Ctx) -> Result<R> {
    let char_p = R::characteristic(ctx) > 0;
    let mut acc: Vec<R> = Vec::new();
    let n = if char_p { poly.reduced.len() } else { poly.terms.len() };
    'terms: for t in 0..n {
        let exps = if char_p { &poly.reduced[t].0 } else { &poly.terms[t].0 };
        for (i, &k) in exps.iter().enumerate() {
            if k > 0 && pw.vars[i].is_zero() {
                continue 'terms;
            }
        }
        let mut mono: Option<R> = None;
        for (i, &k) in exps.iter().enumerate() {
            if k == 0 {
                continue;
            }
            let f = pw.get(i, k)?;
            mono = Some(match mono {
                None => f,
                Some(x) => x.mul(&f)?,
            });
        }
        let mono = mono.unwrap_or_else(|| R::one(ctx));
        let term = if char_p {
            match poly.reduced[t].1 {
                1 => mono,
                c => mono.scale(c),
            }
        } else {
            mono.scale_big(&poly.terms[t].1)
        };
        acc.push(term);
    }
    R::sum_all(ctx, acc)
}

// ---------------------------------------------------------------------------

/// A Witt vector `(w_0, ..., w_{m-1})` over `R`.
#[derive(Clone)]
pub struct WittVec<R: Ring> {
    p: u32,
    ctx: R::Ctx,
    comps: Vec<R>,
}

impl<R: Ring> PartialEq for WittVec<R> {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.comps == other.comps
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WittOp {
    Add,
    Sub,
    Mul,
}

impl<R: Ring> WittVec<R> {
    pub fn new(p: u32, ctx: R::Ctx, comps: Vec<R>) -> Result<Self> {
        if comps.is_empty() || comps.len() > max_length(p) {
            return Err(Error::InvalidContext(format!(
                "Witt length {} not in 1..={}",
                comps.len(),
                max_length(p)
            )));
        }
        let c = R::characteristic(ctx);
        if c != 0 && c != p {
            return Err(Error::InvalidContext(format!("ring of characteristic {c} used with p = {p}")));
        }
        Ok(WittVec { p, ctx, comps })
    }

    pub fn zero(p: u32, m: usize, ctx: R::Ctx) -> Result<Self> {
        Self::new(p, ctx, vec![R::zero(ctx); m])
    }

    pub fn one(p: u32, m: usize, ctx: R::Ctx) -> Result<Self> {
        witt_teich(p, R::one(ctx), m)
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn len(&self) -> usize {
        self.comps.len()
    }
    pub fn is_empty(&self) -> bool {
        false
    }
    pub fn ctx(&self) -> R::Ctx {
        self.ctx
    }
    pub fn comps(&self) -> &[R] {
        &self.comps
    }
    pub fn comp(&self, i: usize) -> &R {
        &self.comps[i]
    }
    pub fn into_comps(self) -> Vec<R> {
        self.comps
    }
    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| c.is_zero())
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch { left: self.len(), right: other.len() });
        }
        if self.p != other.p {
            return Err(Error::InvalidContext(format!("p = {} vs p = {}", self.p, other.p)));
        }
        Ok(())
    }

    fn apply2(&self, other: &Self, polys: &[WittPoly]) -> Result<Self> {
        let vars: Vec<R> = self.comps.iter().chain(&other.comps).cloned().collect();
        let mut pw = Powers::new(&vars);
        let comps = polys.iter().map(|f| eval(f, &mut pw, self.ctx)).collect::<Result<Vec<_>>>()?;
        Ok(WittVec { p: self.p, ctx: self.ctx, comps })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        self.apply2(other, &polys(self.p, self.len())?.sum)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        self.apply2(other, &polys(self.p, self.len())?.prod)
    }

    pub fn neg(&self) -> Result<Self> {
        if self.is_zero() {
            return Ok(self.clone());
        }
        // Odd p: -[x] = [-x], so negation is componentwise.
        if self.p != 2 {
            let comps = self.comps.iter().map(|c| c.neg()).collect();
            return Ok(WittVec { p: self.p, ctx: self.ctx, comps });
        }
        let mut pw = Powers::new(&self.comps);
        let comps =
            polys(self.p, self.len())?.neg.iter().map(|f| eval(f, &mut pw, self.ctx)).collect::<Result<Vec<_>>>()?;
        Ok(WittVec { p: self.p, ctx: self.ctx, comps })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        if other.is_zero() {
            return Ok(self.clone());
        }
        self.apply2(other, &polys(self.p, self.len())?.diff)
    }

    /// `k * self` for an integer `k`, by double-and-add.
    pub fn scale(&self, k: i64) -> Result<Self> {
        let mut acc = Self::zero(self.p, self.len(), self.ctx)?;
        let mut base = if k < 0 { self.neg()? } else { self.clone() };
        let mut k = k.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.add(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.add(&base)?;
            }
        }
        Ok(acc)
    }

    /// Ghost components `w^(0), ..., w^(m-1)`.
    pub fn ghost(&self) -> Result<Vec<R>> {
        let mut out = Vec::with_capacity(self.len());
        for n in 0..self.len() {
            let mut g = R::zero(self.ctx);
            for i in 0..=n {
                let term = self.comps[i].pow((self.p as u64).pow((n - i) as u32))?;
                g = g.add(&term.scale_big(&BigInt::from(self.p).pow(i as u32)))?;
            }
            out.push(g);
        }
        Ok(out)
    }

    /// Applies `f` to each component.
    pub fn map(&self, f: impl Fn(&R) -> Result<R>) -> Result<Self> {
        let comps = self.comps.iter().map(f).collect::<Result<Vec<_>>>()?;
        Ok(WittVec { p: self.p, ctx: self.ctx, comps })
    }
}

/// Dispatcher used by the CLI.
pub fn witt_arith<R: Ring>(a: &WittVec<R>, b: &WittVec<R>, op: WittOp) -> Result<WittVec<R>> {
    match op {
        WittOp::Add => a.add(b),
        WittOp::Sub => a.sub(b),
        WittOp::Mul => a.mul(b),
    }
}

/// Frobenius; over an `F_p`-algebra it raises every component to the `p`-th
/// power.
pub fn witt_f<R: Coeff>(a: &WittVec<R>) -> WittVec<R> {
    let comps = a.comps.iter().map(|c| c.frobenius()).collect();
    WittVec { p: a.p, ctx: a.ctx, comps }
}

/// Verschiebung `W_{m-1} -> W_m`: `(w_0, ..., w_{m-2}) -> (0, w_0, ..., w_{m-2})`.
pub fn witt_v<R: Ring>(a: &WittVec<R>) -> Result<WittVec<R>> {
    let mut comps = Vec::with_capacity(a.len() + 1);
    comps.push(R::zero(a.ctx));
    comps.extend(a.comps.iter().cloned());
    WittVec::new(a.p, a.ctx, comps)
}

/// Restriction `W_m -> W_{m-1}`, dropping `w_{m-1}`.
pub fn witt_r<R: Ring>(a: &WittVec<R>) -> Result<WittVec<R>> {
    if a.len() < 2 {
        return Err(Error::LengthMismatch { left: a.len(), right: 2 });
    }
    let comps = a.comps[..a.len() - 1].to_vec();
    Ok(WittVec { p: a.p, ctx: a.ctx, comps })
}

/// Teichmüller lift `[x] = (x, 0, ..., 0)`.
pub fn witt_teich<R: Ring>(p: u32, x: R, m: usize) -> Result<WittVec<R>> {
    let ctx = x.ctx();
    let mut comps = vec![R::zero(ctx); m];
    if m > 0 {
        comps[0] = x;
    }
    WittVec::new(p, ctx, comps)
}

impl<R: Ring + fmt::Display> fmt::Display for WittVec<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.comps.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join("; "))
    }
}

impl<R: Ring> fmt::Debug for WittVec<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.comps).finish()
    }
}

impl<R: Ring + ToJson<Ctx = <R as Ring>::Ctx>> WittVec<R> {
    pub fn to_json(&self) -> Value {
        Value::Array(self.comps.iter().map(|c| c.to_json()).collect())
    }

    pub fn from_json(p: u32, ctx: <R as Ring>::Ctx, v: &Value) -> Result<Self> {
        let arr = v.as_array().ok_or_else(|| Error::Parse("Witt vector JSON must be an array".into()))?;
        let comps = arr.iter().map(|c| R::from_json(ctx, c)).collect::<Result<Vec<_>>>()?;
        WittVec::new(p, ctx, comps)
    }
}

/// Integer Witt vector from `i64` components, for ghost checks.
pub fn int_vector(p: u32, comps: &[i64]) -> Result<WittVec<BigInt>> {
    WittVec::new(p, (), comps.iter().map(|&c| BigInt::from(c)).collect())
}

/// Whether the componentwise integer vector has any negative entry; used by
/// callers that want to print compact ghost reports.
pub fn has_negative(v: &WittVec<BigInt>) -> bool {
    v.comps.iter().any(|c| c.is_negative())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::field;
    use crate::series::Context;
    use rand::{Rng as _, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn fp_vec(p: u32, vals: &[i64]) -> WittVec<crate::coeff::FqElem> {
        let f = field(p, 1).unwrap();
        WittVec::new(p, f, vals.iter().map(|&v| f.from_int(v)).collect()).unwrap()
    }

    #[test]
    fn small_polynomials() {
        let c = polys(2, 2).unwrap();
        // S_1 = X_1 + Y_1 - X_0 Y_0.
        assert_eq!(c.sum[1].num_terms(), 3);
        assert_eq!(c.sum[1].degree(), 2);
        assert_eq!(c.prod[0].num_terms(), 1);
        assert!(polys(2, 5).is_err());
    }

    #[test]
    fn sums_in_small_rings() {
        // W_2(F_2) = Z/4: 1 + 1 = 2 = V(1).
        assert_eq!(witt_arith(&fp_vec(2, &[1, 0]), &fp_vec(2, &[1, 0]), WittOp::Add).unwrap(), fp_vec(2, &[0, 1]));
        // W_2(F_3) = Z/9: (1,1) = 4, 4 + 4 = 8 = [2] = (2,0).
        assert_eq!(witt_arith(&fp_vec(3, &[1, 1]), &fp_vec(3, &[1, 1]), WittOp::Add).unwrap(), fp_vec(3, &[2, 0]));
        // Z/8 = W_3(F_2): 3 + 5 = 0.
        let three = fp_vec(2, &[1, 1, 0]);
        let five = fp_vec(2, &[1, 0, 1]);
        assert!(three.add(&five).unwrap().is_zero());
        let x = fp_vec(3, &[2, 1, 0]);
        assert_eq!(witt_arith(&fp_vec(3, &[1, 0, 0]), &x, WittOp::Mul).unwrap(), x);
    }

    #[test]
    fn ghost_map_is_a_ring_homomorphism_over_z() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (p, m) in [(2, 1), (2, 2), (2, 3), (3, 2), (3, 3), (5, 2)] {
            for _ in 0..50 {
                let a: Vec<i64> = (0..m).map(|_| rng.gen_range(-20..20)).collect();
                let b: Vec<i64> = (0..m).map(|_| rng.gen_range(-20..20)).collect();
                let (a, b) = (int_vector(p, &a).unwrap(), int_vector(p, &b).unwrap());
                let (ga, gb) = (a.ghost().unwrap(), b.ghost().unwrap());
                let gs = a.add(&b).unwrap().ghost().unwrap();
                let gp = a.mul(&b).unwrap().ghost().unwrap();
                let gn = a.neg().unwrap().ghost().unwrap();
                let gd = a.sub(&b).unwrap().ghost().unwrap();
                for n in 0..m {
                    assert_eq!(gs[n], &ga[n] + &gb[n]);
                    assert_eq!(gp[n], &ga[n] * &gb[n]);
                    assert_eq!(gn[n], -&ga[n]);
                    assert_eq!(gd[n], &ga[n] - &gb[n]);
                }
            }
        }
    }

    #[test]
    fn verschiebung_and_frobenius() {
        let v1 = witt_v(&fp_vec(2, &[1])).unwrap();
        assert_eq!(v1, fp_vec(2, &[0, 1]));
        assert_eq!(fp_vec(2, &[1, 0]).scale(2).unwrap(), v1);
        assert!(witt_v(&fp_vec(3, &[0])).unwrap().is_zero());
        assert_eq!(witt_r(&fp_vec(2, &[1, 1])).unwrap(), fp_vec(2, &[1]));
        assert_eq!(witt_r(&fp_vec(2, &[1])), Err(Error::LengthMismatch { left: 1, right: 2 }));

        let f4 = field(2, 2).unwrap();
        let g = f4.generator().unwrap();
        let w = witt_teich(2, g, 1).unwrap();
        assert_eq!(witt_f(&w).comp(0), &g.add(f4.one()));
    }

    #[test]
    fn frobenius_on_k() {
        let c = Context::new(2, 1).unwrap();
        let a = WittVec::new(2, c.field, vec![c.k_term(1, -1, 0), c.k_term(1, 1, 0)]).unwrap();
        let fa = witt_f(&a);
        assert_eq!(fa.comps(), &[c.k_term(1, -2, 0), c.k_term(1, 2, 0)]);
    }

    #[test]
    fn teichmuller_is_multiplicative() {
        let c = Context::new(3, 1).unwrap();
        let t = witt_teich(3, c.k_term(1, 1, 0), 3).unwrap();
        let pi = witt_teich(3, c.k_term(1, 0, 1), 3).unwrap();
        assert_eq!(t.mul(&pi).unwrap(), witt_teich(3, c.k_term(1, 1, 1), 3).unwrap());

        // [f] (a_0, a_1, a_2) = (f a_0, f^p a_1, f^{p^2} a_2).
        let f = c.k_term(2, 1, -1);
        let a = WittVec::new(3, c.field, vec![c.k_term(1, 0, -1), c.k_term(1, 2, 0), c.k_term(2, -1, 3)]).unwrap();
        let prod = witt_teich(3, f.clone(), 3).unwrap().mul(&a).unwrap();
        for i in 0..3 {
            let expect = f.pow(3u64.pow(i as u32)).unwrap().mul(a.comp(i)).unwrap();
            assert_eq!(prod.comp(i), &expect);
        }
    }

    #[test]
    fn text_and_json() {
        let c = Context::new(2, 1).unwrap();
        let a = WittVec::new(2, c.field, vec![c.k_term(1, 0, -2), c.k_zero()]).unwrap();
        assert_eq!(a.to_string(), "[pi^-2; 0]");
        assert_eq!(WittVec::from_json(2, c.field, &a.to_json()).unwrap(), a);
        assert!(WittVec::<crate::series::KElt>::new(2, c.field, vec![]).is_err());
    }

    #[test]
    fn length_mismatch() {
        assert_eq!(
            fp_vec(2, &[1]).add(&fp_vec(2, &[1, 0])),
            Err(Error::LengthMismatch { left: 1, right: 2 })
        );
    }
}
