//! The invariant suite behind `selftest` and the acceptance tests.
//!
//! Every check is deterministic for a given seed and scale. Errors raised by
//! the library while checking count as failures and are reported as the
//! witness.

use std::fmt;

use num_bigint::BigInt;
use rand::Rng;
use serde_json::{json, Value};

use crate::asw::{self, CharacterRep, WK};
use crate::coeff::{self, FqField};
use crate::error::Result;
use crate::forms::{self, Basis1, Form1, Form2};
use crate::milnor::{self, MilnorSym};
use crate::pairing::{self, Which, WindowSpec};
use crate::residue::{self, ResidueClass2};
use crate::ring::{Coeff, Precision, Ring};
use crate::sample;
use crate::series::KElt;
use crate::weil;
use crate::witt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    /// Reduced sizes for `selftest`.
    Quick,
    /// The sizes the acceptance suite pins.
    Full,
}

impl Scale {
    fn pick<T>(self, quick: T, full: T) -> T {
        match self {
            Scale::Quick => quick,
            Scale::Full => full,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub id: u32,
    pub name: &'static str,
    pub cases: u64,
    pub failures: u64,
    pub witness: Option<String>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.failures == 0 && self.cases > 0
    }

    pub fn to_json(&self) -> Value {
        json!({
            "id": self.id,
            "name": self.name,
            "cases": self.cases,
            "failures": self.failures,
            "passed": self.passed(),
            "witness": self.witness,
        })
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "[{status}] {:>2} {}: {} cases, {} failures", self.id, self.name, self.cases, self.failures)?;
        if let Some(w) = &self.witness {
            write!(f, " (first: {w})")?;
        }
        Ok(())
    }
}

struct Tally {
    report: CheckReport,
}

impl Tally {
    fn new(id: u32, name: &'static str) -> Tally {
        Tally { report: CheckReport { id, name, cases: 0, failures: 0, witness: None } }
    }

    /// Records one case; `Ok(false)` and `Err` are failures.
    fn case(&mut self, outcome: Result<bool>, what: impl FnOnce() -> String) {
        self.report.cases += 1;
        let msg = match outcome {
            Ok(true) => return,
            Ok(false) => what(),
            Err(e) => format!("{}: {} [{}]", what(), e, e.kind()),
        };
        self.report.failures += 1;
        if self.report.witness.is_none() {
            self.report.witness = Some(msg);
        }
    }

    fn done(self) -> CheckReport {
        self.report
    }
}

fn field(p: u32, e: u32) -> &'static FqField {
    coeff::field(p, e).expect("supported field")
}

fn wk(p: u32, f: &'static FqField, comps: Vec<KElt>) -> Result<WK> {
    WK::new(p, f, comps)
}

// ---------------------------------------------------------------------------
// Witt vectors

/// Universal-polynomial arithmetic over `Z` against ghost components.
pub fn witt_ghost(scale: Scale, seed: u64) -> CheckReport {
    let mut t = Tally::new(1, "witt ghost oracle");
    let trials = scale.pick(40, 1000);
    let mut rng = sample::rng(seed ^ 1);
    for p in [2u32, 3] {
        for m in 1..=3usize {
            for _ in 0..trials {
                let a: Vec<i64> = (0..m).map(|_| rng.gen_range(-20..=20)).collect();
                let b: Vec<i64> = (0..m).map(|_| rng.gen_range(-20..=20)).collect();
                t.case(ghost_case(p, &a, &b), || format!("p={p} a={a:?} b={b:?}"));
            }
        }
    }
    t.done()
}

fn ghost_case(p: u32, a: &[i64], b: &[i64]) -> Result<bool> {
    let x = witt::int_vector(p, a)?;
    let y = witt::int_vector(p, b)?;
    let (gx, gy) = (x.ghost()?, y.ghost()?);
    let zip = |f: fn(&BigInt, &BigInt) -> BigInt| -> Vec<BigInt> { gx.iter().zip(&gy).map(|(u, v)| f(u, v)).collect() };
    Ok(x.add(&y)?.ghost()? == zip(|u, v| u + v)
        && x.sub(&y)?.ghost()? == zip(|u, v| u - v)
        && x.mul(&y)?.ghost()? == zip(|u, v| u * v)
        && x.neg()?.ghost()? == gx.iter().map(|u| -u).collect::<Vec<_>>())
}

fn random_wk<R: Rng>(rng: &mut R, p: u32, f: &'static FqField, m: usize) -> Result<WK> {
    let comps = (0..m)
        .map(|_| if rng.gen_bool(0.2) { KElt::zero(f) } else { sample::k_poly(rng, f, (-2, 2), (-2, 2), 2) })
        .collect();
    wk(p, f, comps)
}

/// `F V = p`, `V(x) y = V(x F y)`, `R V = V R`, `F` a ring endomorphism.
pub fn witt_identities(scale: Scale, seed: u64) -> CheckReport {
    let mut t = Tally::new(2, "witt identities in characteristic p");
    let trials = scale.pick(10, 250);
    let mut rng = sample::rng(seed ^ 2);
    for p in [2u32, 3] {
        let f = field(p, 1);
        for m in [2usize, 3] {
            for _ in 0..trials {
                let x = random_wk(&mut rng, p, f, m - 1);
                let y = random_wk(&mut rng, p, f, m);
                let z = random_wk(&mut rng, p, f, m);
                let outcome = (|| -> Result<bool> {
                    let (x, y, z) = (x?, y?, z?);
                    let mut lifted = x.comps().to_vec();
                    lifted.push(KElt::zero(f));
                    let fv = witt::witt_f(&witt::witt_v(&x)?) == wk(p, f, lifted)?.scale(p as i64)?;
                    let proj = witt::witt_v(&x)?.mul(&y)? == witt::witt_v(&x.mul(&witt::witt_r(&witt::witt_f(&y))?)?)?;
                    let rv = if m == 3 {
                        witt::witt_r(&witt::witt_v(&x)?)? == witt::witt_v(&witt::witt_r(&x)?)?
                    } else {
                        true
                    };
                    let hom_add = witt::witt_f(&y.add(&z)?) == witt::witt_f(&y).add(&witt::witt_f(&z))?;
                    let hom_mul = witt::witt_f(&y.mul(&z)?) == witt::witt_f(&y).mul(&witt::witt_f(&z))?;
                    Ok(fv && proj && rv && hom_add && hom_mul)
                })();
                t.case(outcome, || format!("p={p} m={m}"));
            }
        }
    }
    t.done()
}

/// Vectors whose components are 0 or `t^a pi^-j`, `a` in `t_range`,
/// `0 <= j <= max_pole`.
fn monomial_vectors(f: &'static FqField, m: usize, t_range: (i64, i64), max_pole: i64) -> Vec<Vec<KElt>> {
    let mut slot = vec![KElt::zero(f)];
    for j in 0..=max_pole {
        for a in t_range.0..=t_range.1 {
            slot.push(KElt::term(f.one(), a, -j));
        }
    }
    let mut out: Vec<Vec<KElt>> = vec![Vec::new()];
    for _ in 0..m {
        out = out.into_iter().flat_map(|v| slot.iter().map(move |s| [v.clone(), vec![s.clone()]].concat())).collect();
    }
    out
}

/// `(1 - F) a in fil_n` iff `a in fil_{floor(n/p)}`, for `n <= 9`.
pub fn matsuda(scale: Scale, _seed: u64) -> CheckReport {
    let mut t = Tally::new(3, "filtration under 1-F");
    let (max_m, max_pole) = scale.pick((2, 4), (3, 9));
    for p in [2u32, 3] {
        let f = field(p, 1);
        for m in 1..=max_m {
            for comps in monomial_vectors(f, m, (-4, 4), max_pole) {
                let outcome = (|| -> Result<bool> {
                    let a = wk(p, f, comps.clone())?;
                    let image = asw::one_minus_f(&a)?;
                    let (li, la) = (asw::fil_level(&image)?, asw::fil_level(&a)?);
                    // fil_member is monotone in n, so levels decide every n.
                    Ok((0..=9).all(|n| (li <= n) == (la <= n / p as i64)))
                })();
                t.case(outcome, || format!("p={p} a={:?}", comps));
            }
        }
    }
    t.done()
}

/// `ker(R) cap fil_n W_m = V^{m-1}(fil_n W_1)` on the same families.
pub fn restriction_exactness(scale: Scale, _seed: u64) -> CheckReport {
    let mut t = Tally::new(4, "kernel of R equals image of V^(m-1)");
    let (max_m, max_pole) = scale.pick((2, 4), (3, 9));
    for p in [2u32, 3] {
        let f = field(p, 1);
        let w1: Vec<WK> = monomial_vectors(f, 1, (-4, 4), max_pole)
            .into_iter()
            .map(|c| wk(p, f, c).expect("length one"))
            .collect();
        for m in 2..=max_m {
            let image: Vec<WK> = w1
                .iter()
                .map(|y| asw::level_maps(y, asw::LevelMap::Lift, m).expect("lift"))
                .collect();
            for comps in monomial_vectors(f, m, (-4, 4), max_pole) {
                let outcome = (|| -> Result<bool> {
                    let x = wk(p, f, comps.clone())?;
                    let in_kernel = witt::witt_r(&x)?.is_zero();
                    for n in 0..=9 {
                        if !asw::fil_member(&x, n)? {
                            continue;
                        }
                        let in_image = image
                            .iter()
                            .zip(&w1)
                            .any(|(v, y)| *v == x && asw::fil_member(y, n).unwrap_or(false));
                        if in_kernel != in_image {
                            return Ok(false);
                        }
                    }
                    Ok(true)
                })();
                t.case(outcome, || format!("p={p} x={comps:?}"));
            }
        }
    }
    t.done()
}

// ---------------------------------------------------------------------------
// Forms and residues

fn small_k<R: Rng>(rng: &mut R, f: &'static FqField) -> KElt {
    sample::k_poly(rng, f, (-3, 3), (-2, 2), 3)
}

/// A closed one-form `x^p dlog t + y^p dlog pi + dz`.
fn closed_form<R: Rng>(rng: &mut R, f: &'static FqField) -> Result<Form1> {
    let p = f.p() as u64;
    let (x, y, z) = (small_k(rng, f), small_k(rng, f), small_k(rng, f));
    Form1::from_log(x.pow(p)?, y.pow(p)?).add(&forms::d0(&z))
}

/// The Cartier identities and `C d = 0`.
pub fn cartier_identities(scale: Scale, seed: u64) -> CheckReport {
    let mut t = Tally::new(5, "Cartier identities");
    let trials = scale.pick(10, 125);
    let mut rng = sample::rng(seed ^ 5);
    for (p, e) in [(2u32, 1u32), (2, 2), (3, 1), (3, 2)] {
        let f = field(p, e);
        for _ in 0..trials {
            let a = small_k(&mut rng, f);
            let alpha = Form2::from_log(small_k(&mut rng, f));
            t.case(
                (|| forms::cartier2(&alpha.mul_fn(&a.pow(p as u64)?)?)?.agrees_with(&forms::cartier2(&alpha)?.mul_fn(&a)?))(),
                || format!("C(a^p w) p={p} e={e} a={a}"),
            );
            let b = KElt::term(sample::fq_nonzero(&mut rng, f), rng.gen_range(-3..=3), rng.gen_range(-3..=3));
            t.case(
                (|| -> Result<bool> {
                    let da = forms::d0(&a);
                    let lhs = da.mul_fn(&a.pow(p as u64 - 1)?)?;
                    let dlog_b = Form1::new(b.t_derivative(), b.pi_derivative(), Basis1::Plain)
                        .mul_fn(&b.inverse(&Precision::default())?)?;
                    let one = forms::cartier1(&lhs)?.agrees_with(&da)?;
                    let two = forms::cartier2(&forms::wedge(&lhs, &dlog_b)?)?.agrees_with(&forms::wedge(&da, &dlog_b)?)?;
                    Ok(one && two)
                })(),
                || format!("C(a^(p-1) da) p={p} e={e} a={a} b={b}"),
            );
            let x = closed_form(&mut rng, f);
            let y = closed_form(&mut rng, f);
            t.case(
                (|| -> Result<bool> {
                    let (x, y) = (x?, y?);
                    let lhs = forms::cartier2(&forms::wedge(&x, &y)?)?;
                    let rhs = forms::wedge(&forms::cartier1(&x)?, &forms::cartier1(&y)?)?;
                    lhs.agrees_with(&rhs)
                })(),
                || format!("C(x ^ y) p={p} e={e}"),
            );
            let beta = Form1::new(small_k(&mut rng, f), small_k(&mut rng, f), Basis1::Plain);
            let z = small_k(&mut rng, f);
            t.case(
                (|| Ok(forms::cartier2(&forms::d1(&beta)?)?.is_zero() && forms::cartier1(&forms::d0(&z))?.is_zero()))(),
                || format!("C d = 0 p={p} e={e} beta={beta}"),
            );
        }
    }
    t.done()
}

/// Residue maps commute with the Cartier operators, exhaustively on
/// monomials.
pub fn residue_cartier(scale: Scale, _seed: u64) -> CheckReport {
    let mut t = Tally::new(6, "residues commute with C");
    let fields: &[(u32, u32)] =
        scale.pick(&[(2, 1), (3, 1), (2, 2)], &[(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1)]);
    for &(p, e) in fields {
        let f = field(p, e);
        for a in -6..=6 {
            for b in -6..=6 {
                for c in f.elements() {
                    let x = Form2::from_log(KElt::term(c, a, b));
                    t.case(residue_case(&x), || format!("q={} c={c} t^{a} pi^{b}", f.q()));
                }
            }
        }
    }
    t.done()
}

fn residue_case(x: &Form2) -> Result<bool> {
    let cx = forms::cartier2(x)?;
    let rk = residue::res_k(&ResidueClass2::of(x)?)?;
    let first = residue::res_k(&ResidueClass2::of(&cx)?)? == residue::cartier_f(&rk)?;
    let r = residue::res_f(&rk)?;
    let second = residue::res_f(&residue::cartier_f(&rk)?)? == r.frob_inv();
    let third = r.frob_inv().trace() == r.trace();
    // Res_K (1 - C) z = 0 on twist-0 forms.
    let fourth = if x.in_twist(0) { residue::res_k_of(&forms::one_minus_c(x, 0)?)? == 0 } else { true };
    Ok(first && second && third && fourth)
}

// ---------------------------------------------------------------------------
// Pairings

/// Matched dual windows give invertible Gram matrices.
pub fn dual_perfectness(scale: Scale, _seed: u64) -> CheckReport {
    let mut t = Tally::new(7, "dual pairing perfect on windows");
    let max_w = scale.pick(2, 4);
    for (p, e) in [(2u32, 1u32), (2, 2), (3, 1), (3, 2)] {
        let f = field(p, e);
        let prec = Precision::default();
        for n in 0..=3i64 {
            for w in 1..=max_w {
                let t0 = -(w / 2);
                let rows = WindowSpec::new((t0, t0 + w), (-(n + w), -n), n);
                let outcome = pairing::gram_matrix(f, &rows, &rows.mirrored(), Which::Dual, &prec)
                    .map(|g| g.matrix.len() == g.cols && g.rank == g.cols);
                t.case(outcome, || format!("q={} n={n} w={w}", f.q()));
            }
        }
    }
    t.done()
}

fn random_symbol<R: Rng>(rng: &mut R, f: &'static FqField) -> Result<MilnorSym> {
    let mut s = MilnorSym::empty();
    for _ in 0..rng.gen_range(1..=2) {
        let k = rng.gen_range(1..=2i64) * if rng.gen_bool(0.5) { 1 } else { -1 };
        s = s.add(&MilnorSym::pair(sample::k_unit_like(rng, f), sample::k_unit_like(rng, f))?.scale(k));
    }
    Ok(s)
}

/// `rec_pair(b - b^p, s) = 0`.
pub fn rec_invariance(scale: Scale, seed: u64) -> CheckReport {
    let mut t = Tally::new(8, "reciprocity pairing invariance");
    let trials = scale.pick(10, 200);
    let mut rng = sample::rng(seed ^ 8);
    let prec = Precision::default();
    for (p, e) in [(2u32, 1u32), (2, 2), (3, 1), (3, 2)] {
        let f = field(p, e);
        for _ in 0..trials {
            let b = sample::k_poly(&mut rng, f, (-3, 3), (-3, 1), 3);
            let s = random_symbol(&mut rng, f);
            let outcome = (|| -> Result<bool> {
                let a = pairing::character(f, b.sub(&b.frobenius())?);
                Ok(pairing::rec_pair(&a, &s?, &prec)? == 0)
            })();
            t.case(outcome, || format!("q={} b={b}", f.q()));
        }
    }
    t.done()
}

/// Characters of conductor `<= n` as length-one monomials and translates.
fn low_conductor_characters(f: &'static FqField, n: i64) -> Result<Vec<CharacterRep>> {
    let mut out = Vec::new();
    for j in 0..=(2 * n + 2) {
        for a in -3..=3 {
            for g in f.basis() {
                let c = pairing::character(f, KElt::term(g, a, -j));
                if c.conductor()? <= n {
                    out.push(c);
                }
            }
        }
    }
    Ok(out)
}

/// `fil_{n+1}` symbols kill conductor `<= n` characters, and the Gram
/// matrix on the `fil_{n+1}` window span has full column rank.
pub fn orthogonality_separation(scale: Scale, seed: u64) -> CheckReport {
    let mut t = Tally::new(9, "filtration orthogonality and separation");
    let budget = scale.pick(4, 24);
    let prec = Precision::default();
    for e in [1u32, 2] {
        let f = field(2, e);
        for n in 0..=2i64 {
            let chars = low_conductor_characters(f, n);
            let gens = milnor::fil_generators(f, n + 1, budget, seed ^ (n as u64) << 8);
            match (chars, gens) {
                (Ok(chars), Ok(gens)) => {
                    for g in &gens {
                        for a in &chars {
                            t.case(pairing::rec_pair(a, &g.sym, &prec).map(|v| v == 0), || {
                                format!("q={} n={n} a={a:?} s={}", f.q(), g.sym)
                            });
                        }
                    }
                }
                (Err(err), _) | (_, Err(err)) => t.case(Err(err), || format!("setup q={} n={n}", f.q())),
            }
            let depth = scale.pick(1, 2);
            let outcome = pairing::separation_gram(f, n, (-2, 2), depth, &prec).map(|g| g.cols > 0 && g.rank == g.cols);
            t.case(outcome, || format!("separation q={} n={n}", f.q()));
        }
    }
    t.done()
}

/// `varpi` window ranks grow with the window and vanish at `n = 1`.
pub fn varpi_growth(scale: Scale, _seed: u64) -> CheckReport {
    let mut t = Tally::new(10, "varpi window ranks");
    let prec = Precision::default();
    let max_w = scale.pick(3, 5);
    let f = field(2, 1);
    let mut last = 0usize;
    for width in 1..=max_w {
        let w = WindowSpec::new((0, width), (1, 3), 0);
        let r2 = pairing::varpi_window_rank(f, 2, &w, &prec);
        t.case(r2.as_ref().map(|r| *r > last).map_err(Clone::clone), || format!("n=2 width {width} rank {r2:?} after {last}"));
        last = *r2.as_ref().unwrap_or(&usize::MAX);
        let r1 = pairing::varpi_window_rank(f, 1, &w, &prec);
        t.case(r1.map(|r| r == 0), || format!("n=1 width {width}"));
    }
    t.done()
}

/// Weil reciprocity on random pairs.
pub fn weil_reciprocity(scale: Scale, seed: u64) -> CheckReport {
    let mut t = Tally::new(11, "Weil reciprocity");
    let trials = scale.pick(30, 500);
    let mut rng = sample::rng(seed ^ 11);
    for (p, e) in [(2u32, 1u32), (3, 1), (2, 2)] {
        let f = field(p, e);
        for _ in 0..trials {
            let pair = weil::random_ratfn(&mut rng, f, 4).and_then(|a| Ok((a, weil::random_ratfn(&mut rng, f, 4)?)));
            let desc = match &pair {
                Ok((a, b)) => format!("q={} f={a} g={b}", f.q()),
                Err(_) => String::new(),
            };
            t.case(pair.and_then(|(a, b)| Ok(weil::weil_check(&a, &b)?.ok)), || desc);
        }
    }
    t.done()
}

/// `t^a pi^-j` with `1 <= j <= max_pole`, `a` in `[-2, 2]`, plus zero.
fn oracle_slots(f: &'static FqField, max_pole: i64) -> Vec<KElt> {
    let mut slot = vec![KElt::zero(f)];
    for j in 1..=max_pole {
        for a in -2..=2 {
            slot.push(KElt::term(f.one(), a, -j));
        }
    }
    slot
}

/// `conductor` against a brute-force search over translates.
pub fn conductor_oracle(scale: Scale, _seed: u64) -> CheckReport {
    let mut t = Tally::new(12, "conductor matches brute force");
    let f = field(2, 1);
    let max_pole = scale.pick(2, 4);
    let monos: Vec<(i64, i64)> = match scale {
        Scale::Quick => (-2..=2).map(|a| (a, -1)).collect(),
        Scale::Full => (-2..=2).flat_map(|a| [(a, -1), (a, -2)]).collect(),
    };
    let translates = asw::span_of_monomials(f, &monos);
    let slots = oracle_slots(f, max_pole);
    for m in 1..=2usize {
        let inputs: Vec<Vec<KElt>> = if m == 1 {
            slots.iter().map(|s| vec![s.clone()]).collect()
        } else {
            slots.iter().flat_map(|a| slots.iter().map(move |b| vec![a.clone(), b.clone()])).collect()
        };
        for comps in inputs {
            let outcome = (|| -> Result<bool> {
                let a = wk(2, f, comps.clone())?;
                let (red, b) = asw::asw_reduce(&a)?;
                let sound = a.sub(&red)? == asw::one_minus_f(&b)?;
                Ok(sound && asw::conductor(&a)? == asw::conductor_oracle(&a, &translates)?)
            })();
            t.case(outcome, || format!("a={comps:?}"));
        }
    }
    t.done()
}

pub type CheckFn = fn(Scale, u64) -> CheckReport;

/// Criteria 1 through 12, in order.
pub const SUITE: [CheckFn; 12] = [
    witt_ghost,
    witt_identities,
    matsuda,
    restriction_exactness,
    cartier_identities,
    residue_cartier,
    dual_perfectness,
    rec_invariance,
    orthogonality_separation,
    varpi_growth,
    weil_reciprocity,
    conductor_oracle,
];

/// Runs the whole suite.
pub fn run_suite(scale: Scale, seed: u64) -> Vec<CheckReport> {
    SUITE.iter().map(|f| f(scale, seed)).collect()
}

/// `selftest` output: per-check counts and totals, without timings.
pub fn selftest_json(reports: &[CheckReport], seed: u64, scale: Scale) -> Value {
    let passed = reports.iter().filter(|r| r.passed()).count();
    json!({
        "v": 1,
        "seed": seed,
        "scale": match scale { Scale::Quick => "quick", Scale::Full => "full" },
        "passed": passed,
        "failed": reports.len() - passed,
        "checks": reports.iter().map(CheckReport::to_json).collect::<Vec<_>>(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_suite_passes() {
        for r in run_suite(Scale::Quick, 3) {
            assert!(r.passed(), "{r}");
        }
    }

    #[test]
    fn reports_are_deterministic() {
        assert_eq!(weil_reciprocity(Scale::Quick, 9), weil_reciprocity(Scale::Quick, 9));
        assert_eq!(cartier_identities(Scale::Quick, 9), cartier_identities(Scale::Quick, 9));
    }

    #[test]
    fn failures_carry_a_witness() {
        let mut t = Tally::new(0, "demo");
        t.case(Ok(true), || "never".into());
        t.case(Ok(false), || "first".into());
        t.case(Ok(false), || "second".into());
        let r = t.done();
        assert_eq!((r.cases, r.failures), (3, 2));
        assert_eq!(r.witness.as_deref(), Some("first"));
        assert!(!r.passed());
    }
}
