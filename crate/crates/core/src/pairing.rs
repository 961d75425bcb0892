//! The local duality pairing, the reciprocity pairing at `m = 1`, and their
//! Gram matrices on finite monomial windows.

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::asw::{CharacterRep, WK};
use crate::coeff::{FqElem, FqField};
use crate::error::{Error, Result};
use crate::forms::Form2;
use crate::linalg::{independent_subset, rank_mod_p};
use crate::milnor::{self, MilnorSym};
use crate::residue::res_k_of;
use crate::ring::{Precision, Ring};
use crate::series::KElt;

/// Half-open exponent ranges plus a twist or filtration index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WindowSpec {
    pub t_range: (i64, i64),
    pub pi_range: (i64, i64),
    pub n: i64,
}

impl WindowSpec {
    pub fn new(t_range: (i64, i64), pi_range: (i64, i64), n: i64) -> WindowSpec {
        WindowSpec { t_range, pi_range, n }
    }

    pub fn is_empty(&self) -> bool {
        self.t_range.1 <= self.t_range.0 || self.pi_range.1 <= self.pi_range.0
    }

    /// `(t exponent, pi exponent)` ordered by `pi` first.
    pub fn exponents(&self) -> Vec<(i64, i64)> {
        if self.is_empty() {
            return Vec::new();
        }
        let mut out = Vec::new();
        for b in self.pi_range.0..self.pi_range.1 {
            for a in self.t_range.0..self.t_range.1 {
                out.push((a, b));
            }
        }
        out
    }

    /// Monomial `F_p`-basis `g_k t^a pi^b`, with `g_k` running over the
    /// power basis of `F_q`.
    pub fn monomials(&self, field: &'static FqField) -> Vec<KElt> {
        let basis = field.basis();
        let mut out = Vec::new();
        for (a, b) in self.exponents() {
            for g in &basis {
                out.push(KElt::term(*g, a, b));
            }
        }
        out
    }

    /// Exponents negated, so that row `x` and column `y` with `x y = 1`
    /// line up.
    pub fn mirrored(&self) -> WindowSpec {
        WindowSpec {
            t_range: (1 - self.t_range.1, 1 - self.t_range.0),
            pi_range: (1 - self.pi_range.1, 1 - self.pi_range.0),
            n: self.n,
        }
    }

    /// `F_p`-coordinates of the coefficients of `x` on this window.
    pub fn coordinates(&self, x: &KElt) -> Result<Vec<u32>> {
        let mut out = Vec::new();
        for (a, b) in self.exponents() {
            out.extend(x.coeff2(a, b)?.coeffs());
        }
        Ok(out)
    }
}

/// `Res_K(f eta)` for `f` in `K / A(n)` and `eta` in `Omega^2_{A|n+1}`.
pub fn dual_pair(fbar: &KElt, n: i64, eta: &Form2) -> Result<u32> {
    if !eta.in_twist(n + 1) {
        return Err(Error::TwistViolation(format!("{eta} is not certified in twist {}", n + 1)));
    }
    let f = fbar.polar_part(-n)?;
    if f.is_zero() {
        return Ok(0);
    }
    res_k_of(&Form2::from_log(f.mul(eta.log_coeff())?))
}

/// `Res_K(a dlog s)` for a character given by a length-one Witt vector.
pub fn rec_pair(a: &CharacterRep, s: &MilnorSym, prec: &Precision) -> Result<u32> {
    if a.m() != 1 {
        return Err(Error::LengthMismatch { left: a.m(), right: 1 });
    }
    let x = a.rep.comp(0);
    if x.is_zero() {
        return Ok(0);
    }
    let w = milnor::sym_dlog(s, x.ctx(), prec)?;
    res_k_of(&Form2::from_log(x.mul(w.log_coeff())?))
}

/// Length-one character `[x]`.
pub fn character(field: &'static FqField, x: KElt) -> CharacterRep {
    CharacterRep::new(WK::new(field.p(), field, vec![x]).expect("length one is always valid"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Which {
    Dual,
    Rec,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gram {
    pub matrix: Vec<Vec<u32>>,
    pub rank: usize,
    pub cols: usize,
}

impl Gram {
    pub fn build<R: Sync, C: Sync>(
        rows: &[R],
        cols: &[C],
        p: u32,
        entry: impl Fn(&R, &C) -> Result<u32> + Sync,
    ) -> Result<Gram> {
        let matrix: Vec<Vec<u32>> = rows
            .par_iter()
            .map(|r| cols.iter().map(|c| entry(r, c)).collect::<Result<Vec<u32>>>())
            .collect::<Result<_>>()?;
        let rank = rank_mod_p(&matrix, p);
        Ok(Gram { matrix, rank, cols: cols.len() })
    }

    pub fn to_json(&self) -> Value {
        json!({ "matrix": self.matrix, "rank": self.rank, "rows": self.matrix.len(), "cols": self.cols })
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for row in &self.matrix {
            let cells: Vec<String> = row.iter().map(u32::to_string).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }
}

/// Symbols `{1 + x, t}` and `{1 + x, pi}` for each monomial `x`.
fn unit_symbols(field: &'static FqField, monos: &[KElt]) -> Result<Vec<MilnorSym>> {
    let mut out = Vec::new();
    for x in monos {
        let u = KElt::one(field).add(x)?;
        out.push(MilnorSym::pair(u.clone(), milnor::t(field))?);
        out.push(MilnorSym::pair(u, milnor::pi(field))?);
    }
    Ok(out)
}

/// Gram matrix of the chosen pairing.
///
/// `dual`: rows are the monomials of `rows` read in `K / A(rows.n)`, columns
/// the forms `x w'` for monomials `x` of `cols`. `rec`: rows are the
/// characters `[x]` for monomials of `rows`, columns the symbols
/// `{1 + x, t}`, `{1 + x, pi}` for monomials of `cols` with positive
/// `pi`-exponent.
pub fn gram_matrix(
    field: &'static FqField,
    rows: &WindowSpec,
    cols: &WindowSpec,
    which: Which,
    prec: &Precision,
) -> Result<Gram> {
    let p = field.p();
    let row_monos = rows.monomials(field);
    match which {
        Which::Dual => {
            let forms: Vec<Form2> = cols.monomials(field).into_iter().map(Form2::from_log).collect();
            Gram::build(&row_monos, &forms, p, |f, eta| dual_pair(f, rows.n, eta))
        }
        Which::Rec => {
            if cols.pi_range.0 < 1 && !cols.is_empty() {
                return Err(Error::InvalidContext("symbol columns need pi-exponents >= 1".into()));
            }
            let chars: Vec<CharacterRep> = row_monos.into_iter().map(|x| character(field, x)).collect();
            let syms = unit_symbols(field, &cols.monomials(field))?;
            Gram::build(&chars, &syms, p, |a, s| rec_pair(a, s, prec))
        }
    }
}

/// Window vectors of `dlog {1 + c t^a pi^k, b}` for `k >= r` inside `w`,
/// `c` nonzero in `F_q` and `b` in `{t, pi}`.
fn fil_window_vectors(
    field: &'static FqField,
    r: i64,
    w: &WindowSpec,
    prec: &Precision,
) -> Result<(Vec<MilnorSym>, Vec<Vec<u32>>)> {
    let mut syms = Vec::new();
    let scalars: Vec<FqElem> = field.elements().filter(|c| !c.is_zero()).collect();
    for k in r.max(1)..w.pi_range.1 {
        for a in w.t_range.0..w.t_range.1 {
            let monos: Vec<KElt> = scalars.iter().map(|c| KElt::term(*c, a, k)).collect();
            syms.extend(unit_symbols(field, &monos)?);
        }
    }
    let vecs = syms
        .par_iter()
        .map(|s| w.coordinates(milnor::sym_dlog(s, field, prec)?.log_coeff()))
        .collect::<Result<Vec<_>>>()?;
    Ok((syms, vecs))
}

/// `F_p`-dimension of the window span of `dlog fil_1` modulo that of
/// `dlog fil_n`.
pub fn varpi_window_rank(field: &'static FqField, n: i64, w: &WindowSpec, prec: &Precision) -> Result<usize> {
    if n < 1 {
        return Err(Error::InvalidContext(format!("varpi rank needs n >= 1, got {n}")));
    }
    if w.is_empty() {
        return Ok(0);
    }
    let p = field.p();
    let (_, v1) = fil_window_vectors(field, 1, w, prec)?;
    let (_, vn) = fil_window_vectors(field, n, w, prec)?;
    Ok(rank_mod_p(&v1, p) - rank_mod_p(&vn, p))
}

/// An `F_p`-basis of the window span of `dlog fil_{n+1}`-symbols, where the
/// window is `w.t_range` by `pi`-exponents `n+1 .. n+1+depth`.
pub fn fil_span_basis(
    field: &'static FqField,
    n: i64,
    t_range: (i64, i64),
    depth: i64,
    prec: &Precision,
) -> Result<(WindowSpec, Vec<MilnorSym>)> {
    let w = WindowSpec::new(t_range, (n + 1, n + 1 + depth), n);
    let (syms, vecs) = fil_window_vectors(field, n + 1, &w, prec)?;
    let keep = independent_subset(&vecs, field.p());
    Ok((w, keep.into_iter().map(|i| syms[i].clone()).collect()))
}

/// The reciprocity Gram matrix of characters of conductor `> n` (monomials
/// mirrored to `w`) against a basis of the `dlog fil_{n+1}` window span.
pub fn separation_gram(
    field: &'static FqField,
    n: i64,
    t_range: (i64, i64),
    depth: i64,
    prec: &Precision,
) -> Result<Gram> {
    let (w, basis) = fil_span_basis(field, n, t_range, depth, prec)?;
    let mut chars = Vec::new();
    for x in w.mirrored().monomials(field) {
        let a = character(field, x);
        if a.conductor()? > n {
            chars.push(a);
        }
    }
    Gram::build(&chars, &basis, field.p(), |a, s| rec_pair(a, s, prec))
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
    fn dual_pair_examples() {
        let (c, _) = setup(3, 1);
        let eta = Form2::from_log(c.k_term(1, 1, 2));
        assert_eq!(dual_pair(&c.k_term(1, -1, -2), 1, &eta).unwrap(), 1);
        assert_eq!(dual_pair(&c.k_term(2, 4, -1), 1, &eta).unwrap(), 0);
        let n = 2;
        let eta = Form2::from_log(c.k_term(1, 1, n + 1));
        assert_eq!(dual_pair(&c.k_term(1, 0, -(n + 1)), n, &eta).unwrap(), 0);
        let low = Form2::from_log(c.k_term(1, 0, 1));
        assert_eq!(dual_pair(&c.k_one(), 1, &low).unwrap_err().kind(), "TwistViolation");
    }

    #[test]
    fn rec_pair_examples() {
        let (c, prec) = setup(2, 1);
        let f = c.field;
        let s = MilnorSym::pair(milnor::t(f), milnor::pi(f)).unwrap();
        assert_eq!(rec_pair(&character(f, c.k_one()), &s, &prec).unwrap(), 1);
        assert_eq!(rec_pair(&character(f, c.k_zero()), &s, &prec).unwrap(), 0);
        let b = c.k_term(1, -1, -1).add(&c.k_term(1, 2, -1)).unwrap();
        let a = b.sub(&b.pow(2).unwrap()).unwrap();
        let s = MilnorSym::pair(c.k_one().add(&c.k_term(1, 1, 1)).unwrap(), milnor::t(f)).unwrap();
        assert_eq!(rec_pair(&character(f, a), &s, &prec).unwrap(), 0);
    }

    #[test]
    fn minimal_dual_gram() {
        let (c, prec) = setup(2, 1);
        let rows = WindowSpec::new((0, 1), (-1, 0), 0);
        let g = gram_matrix(c.field, &rows, &rows.mirrored(), Which::Dual, &prec).unwrap();
        assert_eq!(g.matrix, vec![vec![1]]);
        assert_eq!(g.rank, 1);
        let empty = WindowSpec::new((0, 0), (1, 2), 0);
        let g = gram_matrix(c.field, &rows, &empty, Which::Dual, &prec).unwrap();
        assert_eq!((g.cols, g.rank), (0, 0));
    }

    #[test]
    fn matched_dual_windows_are_invertible() {
        for (p, e) in [(2, 1), (3, 1), (2, 2)] {
            let (c, prec) = setup(p, e);
            for n in 0..=2 {
                let rows = WindowSpec::new((-1, 2), (-(n + 2), -n), n);
                let g = gram_matrix(c.field, &rows, &rows.mirrored(), Which::Dual, &prec).unwrap();
                assert_eq!(g.matrix.len(), g.cols);
                assert_eq!(g.rank, g.cols);
            }
        }
    }

    #[test]
    fn varpi_ranks() {
        let (c, prec) = setup(2, 1);
        let w = WindowSpec::new((0, 2), (1, 3), 0);
        assert_eq!(varpi_window_rank(c.field, 1, &w, &prec).unwrap(), 0);
        let r1 = varpi_window_rank(c.field, 2, &WindowSpec::new((0, 1), (1, 3), 0), &prec).unwrap();
        let r2 = varpi_window_rank(c.field, 2, &w, &prec).unwrap();
        assert!(r2 > r1 && r1 > 0, "{r1} {r2}");
        assert_eq!(varpi_window_rank(c.field, 2, &WindowSpec::new((0, 0), (1, 3), 0), &prec).unwrap(), 0);
    }

    #[test]
    fn separation_has_full_column_rank() {
        let (c, prec) = setup(2, 1);
        for n in 0..=2 {
            let g = separation_gram(c.field, n, (-1, 2), 2, &prec).unwrap();
            assert!(g.cols > 0);
            assert_eq!(g.rank, g.cols, "n = {n}");
        }
    }
}
