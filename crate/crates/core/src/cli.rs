//! Command-line front end. `run` does all the work and returns what should
//! be printed, so the binary is a thin wrapper and tests can call it
//! in-process.

use std::ffi::OsString;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::asw::{self, LevelMap, WK};
use crate::checks::{self, Scale};
use crate::coeff::FqField;
use crate::error::{Error, Result};
use crate::forms;
use crate::milnor;
use crate::pairing::{self, Which, WindowSpec};
use crate::parse;
use crate::residue::{self, FForm1, Modulo, ResidueClass2};
use crate::ring::{Precision, Ring};
use crate::series::{Context, FElt, KElt, ToJson};
use crate::weil;
use crate::witt;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Parser, Debug)]
#[command(name = "twolocal", version, about = "Exact arithmetic over F_q((t))((pi))")]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    #[command(subcommand)]
    pub verb: Verb,
}

/// Flags shared by every verb; each can also be set through a
/// `TWOLOCAL_*` environment variable.
#[derive(Args, Debug, Clone)]
pub struct RunConfig {
    #[arg(long, global = true, default_value_t = 2, env = "TWOLOCAL_P")]
    pub p: u32,
    #[arg(long, global = true, default_value_t = 1, env = "TWOLOCAL_E")]
    pub e: u32,
    /// Witt vector length.
    #[arg(long, global = true, default_value_t = 1, env = "TWOLOCAL_M")]
    pub m: usize,
    /// Precision window for `t`, as `lo:hi`.
    #[arg(long, global = true, default_value = "-12:12", env = "TWOLOCAL_T_WINDOW", value_parser = parse_range, allow_hyphen_values = true)]
    pub t_window: (i64, i64),
    /// Precision window for `pi`, as `lo:hi`.
    #[arg(long, global = true, default_value = "-8:8", env = "TWOLOCAL_PI_WINDOW", value_parser = parse_range, allow_hyphen_values = true)]
    pub pi_window: (i64, i64),
    #[arg(long, global = true, default_value_t = 0, env = "TWOLOCAL_SEED")]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Output::Json, env = "TWOLOCAL_OUTPUT")]
    pub output: Output,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Output {
    Json,
    Csv,
    Text,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum WittOp {
    Add,
    Sub,
    Mul,
    Neg,
    Frob,
    Ver,
    Restrict,
    Lift,
    Teich,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResidueMap {
    #[value(name = "resK")]
    ResK,
    #[value(name = "resf")]
    Resf,
    #[value(name = "ResK")]
    TotalResK,
    #[value(name = "chif")]
    Chif,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairingKind {
    Dual,
    Rec,
}

impl From<PairingKind> for Which {
    fn from(k: PairingKind) -> Which {
        match k {
            PairingKind::Dual => Which::Dual,
            PairingKind::Rec => Which::Rec,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Verb {
    /// Witt vector arithmetic: `[x; y; ...]` operands.
    Witt {
        #[arg(value_enum)]
        op: WittOp,
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: Option<String>,
    },
    /// Reduced representative modulo `(1 - F)`.
    Reduce {
        #[arg(allow_hyphen_values = true)]
        a: String,
    },
    /// Swan conductor of the character of a Witt vector.
    Conductor {
        #[arg(allow_hyphen_values = true)]
        a: String,
    },
    /// Cartier operator on a two-form such as `t*pi * dlog t ^ dlog pi`.
    Cartier {
        #[arg(allow_hyphen_values = true)]
        form: String,
        /// Apply `1 - C` on twist `p n` instead.
        #[arg(long, allow_hyphen_values = true)]
        one_minus: Option<i64>,
    },
    /// Residue maps: two-forms for `resK`/`ResK`, `b` (meaning `b dt`) for
    /// `resf`/`chif`.
    Residue {
        #[arg(long, value_enum)]
        map: ResidueMap,
        #[arg(allow_hyphen_values = true)]
        x: String,
        /// Work modulo the twist `n` instead of `Omega^2_A`.
        #[arg(long, allow_hyphen_values = true)]
        twist: Option<i64>,
    },
    /// Tame symbol of `k*{a, b} + ...`.
    Tame {
        #[arg(allow_hyphen_values = true)]
        symbol: String,
    },
    /// `dlog a ^ dlog b`, extended additively.
    Dlog {
        #[arg(allow_hyphen_values = true)]
        symbol: String,
    },
    /// Splitting `s - {tame(s), pi}`.
    Split {
        #[arg(allow_hyphen_values = true)]
        symbol: String,
    },
    /// One pairing value: `dual` takes `fbar eta`, `rec` takes `witt symbol`.
    Pair {
        #[arg(long, value_enum)]
        which: PairingKind,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        n: i64,
        #[arg(allow_hyphen_values = true)]
        left: String,
        #[arg(allow_hyphen_values = true)]
        right: String,
    },
    /// Gram matrix on a row window against its mirrored column window.
    Gram {
        #[arg(long, value_enum)]
        which: PairingKind,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        n: i64,
        #[arg(long, default_value = "0:1", value_parser = parse_range, allow_hyphen_values = true)]
        t_range: (i64, i64),
        #[arg(long, default_value = "-1:0", value_parser = parse_range, allow_hyphen_values = true)]
        pi_range: (i64, i64),
    },
    /// Window rank of the `varpi` quotient at level `n`.
    VarpiRank {
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        #[arg(long, default_value = "0:3", value_parser = parse_range, allow_hyphen_values = true)]
        t_range: (i64, i64),
        #[arg(long, default_value = "1:3", value_parser = parse_range, allow_hyphen_values = true)]
        pi_range: (i64, i64),
    },
    /// Weil reciprocity for two rational functions in `T`.
    Weil {
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        #[arg(long, allow_hyphen_values = true)]
        g: String,
    },
    /// The invariant suite; quick scale unless `--full`.
    Selftest {
        #[arg(long)]
        full: bool,
    },
}

fn parse_range(s: &str) -> std::result::Result<(i64, i64), String> {
    let (lo, hi) = s.split_once(':').ok_or_else(|| format!("expected lo:hi, got {s:?}"))?;
    let lo: i64 = lo.trim().parse().map_err(|e| format!("bad lower bound {lo:?}: {e}"))?;
    let hi: i64 = hi.trim().parse().map_err(|e| format!("bad upper bound {hi:?}: {e}"))?;
    if hi <= lo {
        return Err(format!("empty range {s:?}"));
    }
    Ok((lo, hi))
}

/// What the process should print and return.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Result of one verb: JSON fields plus optional text and CSV renderings.
struct Report {
    json: Value,
    text: String,
    csv: Option<String>,
    ok: bool,
}

impl Report {
    fn new(json: Value, text: impl Into<String>) -> Report {
        Report { json, text: text.into(), csv: None, ok: true }
    }
}

pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let rendered = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: rendered, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: rendered }
            };
        }
    };
    let verb = verb_name(&cli.verb);
    match execute(&cli) {
        Ok(r) => {
            let stdout = match cli.config.output {
                Output::Json => envelope(verb, r.json),
                Output::Text => format!("{}\n", r.text),
                Output::Csv => match r.csv {
                    Some(csv) => csv,
                    None => envelope(verb, r.json),
                },
            };
            Outcome { code: if r.ok { 0 } else { 2 }, stdout, stderr: String::new() }
        }
        Err(e) => {
            // Malformed input is a usage error; everything else is a
            // domain error.
            let code = if matches!(e, Error::Parse(_)) { 1 } else { 2 };
            let stdout = match cli.config.output {
                Output::Text => String::new(),
                _ => envelope(verb, json!({ "error": { "kind": e.kind(), "message": e.to_string() } })),
            };
            Outcome { code, stdout, stderr: format!("error: {e}\n") }
        }
    }
}

fn envelope(verb: &str, body: Value) -> String {
    let mut obj = serde_json::Map::new();
    obj.insert("v".into(), json!(SCHEMA_VERSION));
    obj.insert("verb".into(), json!(verb));
    if let Value::Object(m) = body {
        obj.extend(m);
    } else {
        obj.insert("result".into(), body);
    }
    format!("{}\n", Value::Object(obj))
}

fn verb_name(v: &Verb) -> &'static str {
    match v {
        Verb::Witt { .. } => "witt",
        Verb::Reduce { .. } => "reduce",
        Verb::Conductor { .. } => "conductor",
        Verb::Cartier { .. } => "cartier",
        Verb::Residue { .. } => "residue",
        Verb::Tame { .. } => "tame",
        Verb::Dlog { .. } => "dlog",
        Verb::Split { .. } => "split",
        Verb::Pair { .. } => "pair",
        Verb::Gram { .. } => "gram",
        Verb::VarpiRank { .. } => "varpi-rank",
        Verb::Weil { .. } => "weil",
        Verb::Selftest { .. } => "selftest",
    }
}

struct Env {
    field: &'static FqField,
    prec: Precision,
    m: usize,
    p: u32,
}

impl Env {
    fn new(c: &RunConfig) -> Result<Env> {
        let ctx = Context::new(c.p, c.e)?.with_windows(c.t_window, c.pi_window)?.with_seed(c.seed);
        if c.m == 0 || c.m > witt::max_length(c.p) {
            return Err(Error::InvalidContext(format!("m = {} not in 1..={} for p = {}", c.m, witt::max_length(c.p), c.p)));
        }
        Ok(Env { field: ctx.field, prec: ctx.precision(), m: c.m, p: c.p })
    }

    fn witt(&self, s: &str) -> Result<WK> {
        let a = parse::parse_witt(self.field, s, &self.prec)?;
        if a.len() != self.m {
            return Err(Error::LengthMismatch { left: a.len(), right: self.m });
        }
        Ok(a)
    }

    fn k(&self, s: &str) -> Result<KElt> {
        parse::parse_k(self.field, s, &self.prec)
    }

    /// An expression in `t` alone, read in `f = F_q((t))`.
    fn f(&self, s: &str) -> Result<FElt> {
        let x = self.k(s)?;
        if x.terms().any(|(k, c)| k != 0 && !c.is_zero()) {
            return Err(Error::Parse(format!("{s:?} must not involve pi")));
        }
        x.coeff(0)
    }
}

/// Length-one vectors print as their component.
fn show_witt(a: &WK) -> String {
    if a.len() == 1 {
        a.comp(0).to_string()
    } else {
        a.to_string()
    }
}

fn execute(cli: &Cli) -> Result<Report> {
    let env = Env::new(&cli.config)?;
    let field = env.field;
    let prec = &env.prec;
    match &cli.verb {
        Verb::Witt { op, a, b } => {
            let needs_b = matches!(op, WittOp::Add | WittOp::Sub | WittOp::Mul);
            let b = match (needs_b, b) {
                (true, Some(b)) => Some(env.witt(b)?),
                (true, None) => return Err(Error::Parse("this operation takes two operands".into())),
                (false, Some(_)) => return Err(Error::Parse("this operation takes one operand".into())),
                (false, None) => None,
            };
            let out = match op {
                WittOp::Teich => witt::witt_teich(env.p, env.k(a)?, env.m)?,
                _ => {
                    let a = env.witt(a)?;
                    match op {
                        WittOp::Add => a.add(b.as_ref().unwrap())?,
                        WittOp::Sub => a.sub(b.as_ref().unwrap())?,
                        WittOp::Mul => a.mul(b.as_ref().unwrap())?,
                        WittOp::Neg => a.neg()?,
                        WittOp::Frob => witt::witt_f(&a),
                        WittOp::Ver => witt::witt_v(&a)?,
                        WittOp::Restrict => asw::level_maps(&a, LevelMap::Restrict, env.m - 1)?,
                        WittOp::Lift => asw::level_maps(&a, LevelMap::Lift, env.m + 1)?,
                        WittOp::Teich => unreachable!(),
                    }
                }
            };
            Ok(Report::new(json!({ "result": out.to_string(), "value": out.to_json() }), out.to_string()))
        }
        Verb::Reduce { a } => {
            let a = env.witt(a)?;
            let (red, shift) = asw::asw_reduce(&a)?;
            let cond = asw::fil_level(&red)?;
            Ok(Report::new(
                json!({ "reduced": show_witt(&red), "shift": show_witt(&shift), "conductor": cond }),
                format!("{} (shift {}, conductor {cond})", show_witt(&red), show_witt(&shift)),
            ))
        }
        Verb::Conductor { a } => {
            let a = env.witt(a)?;
            let (red, _) = asw::asw_reduce(&a)?;
            let cond = asw::fil_level(&red)?;
            Ok(Report::new(json!({ "conductor": cond, "reduced": show_witt(&red) }), cond.to_string()))
        }
        Verb::Cartier { form, one_minus } => {
            let alpha = parse::parse_form2(field, form, prec)?;
            let out = match one_minus {
                Some(n) => forms::one_minus_c(&alpha, *n)?,
                None => forms::cartier2(&alpha)?,
            };
            Ok(Report::new(json!({ "result": out.to_string(), "form": out.to_json() }), out.to_string()))
        }
        Verb::Residue { map, x, twist } => {
            let modulo = twist.map_or(Modulo::OmegaA, Modulo::Twist);
            match map {
                ResidueMap::ResK => {
                    let alpha = parse::parse_form2(field, x, prec)?;
                    let out = residue::res_k(&ResidueClass2::new(&alpha, modulo)?)?;
                    Ok(Report::new(json!({ "result": out.to_string(), "form": out.to_json() }), out.to_string()))
                }
                ResidueMap::TotalResK => {
                    let alpha = parse::parse_form2(field, x, prec)?;
                    let out = residue::res_k_total(&ResidueClass2::new(&alpha, modulo)?)?;
                    Ok(Report::new(json!({ "result": out }), out.to_string()))
                }
                ResidueMap::Resf => {
                    let out = residue::res_f(&FForm1::new(env.f(x)?))?;
                    Ok(Report::new(json!({ "result": out.to_string() }), out.to_string()))
                }
                ResidueMap::Chif => {
                    let out = residue::chi_f(&env.f(x)?)?;
                    Ok(Report::new(json!({ "result": out }), out.to_string()))
                }
            }
        }
        Verb::Tame { symbol } => {
            let s = parse::parse_symbol(field, symbol, prec)?;
            let out = milnor::tame(&s, field, prec)?;
            Ok(Report::new(json!({ "result": out.to_string(), "value": out.to_json() }), out.to_string()))
        }
        Verb::Dlog { symbol } => {
            let s = parse::parse_symbol(field, symbol, prec)?;
            let out = milnor::sym_dlog(&s, field, prec)?;
            Ok(Report::new(json!({ "result": out.to_string(), "form": out.to_json() }), out.to_string()))
        }
        Verb::Split { symbol } => {
            let s = parse::parse_symbol(field, symbol, prec)?;
            let out = milnor::split_phi(&s, field, prec)?;
            Ok(Report::new(json!({ "result": out.to_string(), "symbol": out.to_json() }), out.to_string()))
        }
        Verb::Pair { which, n, left, right } => {
            let value = match which {
                PairingKind::Dual => {
                    let fbar = env.k(left)?;
                    let eta = parse::parse_form2(field, right, prec)?;
                    pairing::dual_pair(&fbar, *n, &eta)?
                }
                PairingKind::Rec => {
                    let a = asw::CharacterRep::new(env.witt(left)?);
                    let s = parse::parse_symbol(field, right, prec)?;
                    pairing::rec_pair(&a, &s, prec)?
                }
            };
            Ok(Report::new(json!({ "result": value }), value.to_string()))
        }
        Verb::Gram { which, n, t_range, pi_range } => {
            let rows = WindowSpec::new(*t_range, *pi_range, *n);
            let g = pairing::gram_matrix(field, &rows, &rows.mirrored(), (*which).into(), prec)?;
            let text = format!("{}rank {}", g.to_csv(), g.rank);
            let mut r = Report::new(g.to_json(), text);
            r.csv = Some(g.to_csv());
            Ok(r)
        }
        Verb::VarpiRank { n, t_range, pi_range } => {
            let w = WindowSpec::new(*t_range, *pi_range, 0);
            let rank = pairing::varpi_window_rank(field, *n, &w, prec)?;
            Ok(Report::new(json!({ "rank": rank }), rank.to_string()))
        }
        Verb::Weil { f, g } => {
            let f = parse::parse_ratfn(field, f)?;
            let g = parse::parse_ratfn(field, g)?;
            let rep = weil::weil_check(&f, &g)?;
            let text = if rep.ok { "ok" } else { "FAILED" };
            let mut r = Report::new(rep.to_json(), text);
            r.ok = rep.ok;
            Ok(r)
        }
        Verb::Selftest { full } => {
            let scale = if *full { Scale::Full } else { Scale::Quick };
            let reports = checks::run_suite(scale, cli.config.seed);
            let text: Vec<String> = reports.iter().map(|r| r.to_string()).collect();
            let mut r = Report::new(checks::selftest_json(&reports, cli.config.seed, scale), text.join("\n"));
            r.ok = reports.iter().all(|r| r.passed());
            Ok(r)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, Value) {
        let out = run(std::iter::once("twolocal").chain(args.iter().copied()));
        let v = serde_json::from_str(out.stdout.trim()).unwrap_or(Value::Null);
        (out.code, v)
    }

    #[test]
    fn conductor_example() {
        let (code, v) = call(&["conductor", "--p", "2", "--m", "1", "[t^-0*pi^-2]"]);
        assert_eq!(code, 0);
        assert_eq!(v["conductor"], 1);
        assert_eq!(v["reduced"], "pi^-1");
        assert_eq!(v["v"], 1);
    }

    #[test]
    fn minimal_dual_gram() {
        let (code, v) = call(&["gram", "--which", "dual", "--n", "0", "--t-range", "0:1", "--pi-range", "-1:0"]);
        assert_eq!(code, 0);
        assert_eq!(v["rank"], 1);
    }

    #[test]
    fn weil_steinberg() {
        let (code, v) = call(&["weil", "--p", "2", "--f", "T", "--g", "1+T"]);
        assert_eq!(code, 0);
        assert_eq!(v["ok"], true);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(call(&["frobnicate"]).0, 1);
        assert_eq!(call(&["conductor", "[t^"]).0, 1);
        let (code, v) = call(&["--p", "7", "conductor", "[t]"]);
        assert_eq!(code, 2);
        assert_eq!(v["error"]["kind"], "InvalidContext");
        let (code, v) = call(&["tame", "{0, t}"]);
        assert_eq!(code, 2, "{v}");
    }

    #[test]
    fn ranges_accept_negative_bounds() {
        assert_eq!(parse_range("-3:2"), Ok((-3, 2)));
        assert!(parse_range("2:2").is_err());
        assert!(parse_range("x").is_err());
    }
}
