//! Command-line front end: argument parsing, JSON input loading, dispatch to
//! the library, and exit-code policy.
//!
//! Exit codes: 0 success, 1 malformed input, 2 violated mathematical
//! precondition, 3 a check or assertion failed.

use std::io::Read;
use std::path::PathBuf;

use clap::{Args, CommandFactory, Parser, Subcommand};
use gl2_langlands::families::{check_specialization, FamilyWD};
use gl2_langlands::gl2::{
    cartan_decompose, double_coset_key, flag_coset_reps, iwasawa_decompose, left_cosets_of_double_coset,
    reduce_to_standard_upper, LevelGroup, MatQ,
};
use gl2_langlands::langlands::{compat_check, ll_map, named_operator, satake, Normalization};
use gl2_langlands::qexp::{
    adelic_action, check_constant_term, check_cocycle, check_up_commutation, delta, eisenstein_level_one,
    eisenstein_pdeprived, slash_upper, twist_ratio, weight0_action, CuspLabel, QExpansion, DEFAULT_PREC,
};
use gl2_langlands::scalars::rational::{bigint_to_json, parse_rational};
use gl2_langlands::scalars::{CycScalar, PadicTrunc};
use gl2_langlands::smooth_reps::{HeckeElement, SmoothRepModel};
use gl2_langlands::weil_deligne::{
    monodromy_extract, monodromy_roundtrip, wd_from_eigenform, ContinuousLocalRep, Quasicharacter, SplitWD,
    WDRep,
};
use gl2_langlands::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

/// Every subcommand path with the library operations it exposes.
pub const DISPATCH: &[(&str, &[&str])] = &[
    ("gl2 decompose", &["reduce_to_standard_upper"]),
    ("gl2 iwasawa", &["iwasawa_decompose"]),
    ("gl2 cartan", &["cartan_decompose"]),
    ("gl2 cosets", &["left_cosets_of_double_coset", "flag_coset_reps"]),
    ("qexp eisenstein", &["eisenstein_pdeprived", "bernoulli"]),
    ("qexp act", &["adelic_action_qexp", "slash_upper"]),
    ("qexp twist", &["twist_ratio_qexp"]),
    ("qexp check-cocycle", &["twist_ratio_qexp"]),
    ("qexp check-up", &["up_factor"]),
    ("wd classify", &["classify", "twist", "det_wd", "frob_ss"]),
    ("wd from-eigenform", &["wd_from_eigenform"]),
    ("monodromy extract", &["monodromy_extract", "padic_log_matrix"]),
    ("monodromy roundtrip", &["wd_to_continuous", "monodromy_extract", "padic_exp_matrix", "padic_log_matrix"]),
    ("hecke convolve", &["hecke_convolve", "hecke_basis_element", "hecke_identity"]),
    ("hecke act", &["act"]),
    ("hecke trace", &["trace"]),
    ("ll map", &["ll_map", "satake", "trace"]),
    ("compat", &["compat_check", "wd_from_eigenform", "ll_map"]),
    ("family trace", &["tr_lan_family", "specialize"]),
    ("family bad-points", &["bad_points"]),
    ("family check", &["check_specialization", "specialize", "tr_lan_family", "bad_points"]),
];

#[derive(Parser, Debug)]
#[command(name = "gl2ll", version, about = "Exact local Langlands computations for GL_2(Q_l)")]
pub struct Cli {
    /// Use the `X² + a_l X + …` sign for the Frobenius characteristic polynomial.
    #[arg(long = "paper-sign", visible_alias = "plus-sign", global = true)]
    pub plus_sign: bool,
    /// Seed for randomized subcommands.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the JSON report to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Decompositions and cosets in GL_2(Q_l).
    Gl2 {
        #[command(subcommand)]
        cmd: Gl2Cmd,
    },
    /// q-expansions and the adelic action.
    Qexp {
        #[command(subcommand)]
        cmd: QexpCmd,
    },
    /// Weil–Deligne representations.
    Wd {
        #[command(subcommand)]
        cmd: WdCmd,
    },
    /// Continuous representations and monodromy operators.
    Monodromy {
        #[command(subcommand)]
        cmd: MonodromyCmd,
    },
    /// Hecke algebras and their action on models.
    Hecke {
        #[command(subcommand)]
        cmd: HeckeCmd,
    },
    /// The local Langlands correspondence.
    Ll {
        #[command(subcommand)]
        cmd: LlCmd,
    },
    /// Compatibility of eigenform data with Hecke traces.
    Compat(CompatArgs),
    /// One-parameter families.
    Family {
        #[command(subcommand)]
        cmd: FamilyCmd,
    },
}

#[derive(Args, Debug)]
pub struct MatArgs {
    #[arg(long)]
    pub l: u64,
    /// Matrix as "a,b;c,d" with rational entries.
    #[arg(long, allow_hyphen_values = true)]
    pub g: String,
}

#[derive(Subcommand, Debug)]
pub enum Gl2Cmd {
    /// g = [[l^m, a/l^r], [0, l^n]]·u with u ∈ GL_2(Z_l).
    Decompose(MatArgs),
    /// g = b·k with b upper triangular and k ∈ GL_2(Z_l).
    Iwasawa(MatArgs),
    /// g = k1·diag(l^a, l^b)·k2.
    Cartan(MatArgs),
    /// Left cosets of U(l^n)·g·U(l^n), or the flag representatives when --g is omitted.
    Cosets {
        #[arg(long)]
        l: u64,
        #[arg(long)]
        n: u32,
        #[arg(long, allow_hyphen_values = true)]
        g: Option<String>,
    },
}

#[derive(Args, Debug)]
pub struct CuspArgs {
    /// Cusp label A, a unit modulo l^d.
    #[arg(long, default_value_t = 1)]
    pub cusp: u64,
    #[arg(long = "cusp-d", default_value_t = 0)]
    pub cusp_d: u32,
}

#[derive(Subcommand, Debug)]
pub enum QexpCmd {
    /// p-deprived Eisenstein series, level-one E_k (no --p), or Δ (--delta).
    Eisenstein {
        #[arg(long, allow_hyphen_values = true)]
        k: Option<i64>,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long, default_value_t = DEFAULT_PREC)]
        prec: i64,
        #[arg(long)]
        delta: bool,
    },
    /// The action of g on a q-expansion at the cusp c_A.
    Act {
        /// q-expansion JSON (file path, "-" for stdin, or inline).
        #[arg(long)]
        f: String,
        #[arg(long)]
        l: u64,
        #[arg(long, allow_hyphen_values = true)]
        g: String,
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
        /// Value of the nebentypus character at the lower-right unit.
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        chi: String,
        #[command(flatten)]
        cusp: CuspArgs,
        /// Classical slash operator for upper-triangular g.
        #[arg(long, conflicts_with = "weight0")]
        slash: bool,
        /// Weight-0 action (pure substitution).
        #[arg(long)]
        weight0: bool,
    },
    /// The twist factor e_g at a cusp, with its constant-term check.
    Twist {
        #[arg(long)]
        l: u64,
        #[arg(long, allow_hyphen_values = true)]
        g: String,
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = DEFAULT_PREC)]
        prec: i64,
        #[command(flatten)]
        cusp: CuspArgs,
    },
    /// e_h·h*(e_g) = e_{hg}.
    CheckCocycle {
        #[arg(long)]
        l: u64,
        #[arg(long, allow_hyphen_values = true)]
        g: String,
        #[arg(long, allow_hyphen_values = true)]
        h: String,
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = DEFAULT_PREC)]
        prec: i64,
        #[command(flatten)]
        cusp: CuspArgs,
    },
    /// e(q)·e_g(q) = e_g(q^p)·g*(e)(q).
    CheckUp {
        #[arg(long)]
        l: u64,
        #[arg(long, allow_hyphen_values = true)]
        g: String,
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = DEFAULT_PREC)]
        prec: i64,
        #[command(flatten)]
        cusp: CuspArgs,
    },
}

#[derive(Subcommand, Debug)]
pub enum WdCmd {
    /// Classify, with determinant, Frobenius semisimplification and an optional twist.
    Classify {
        #[arg(long)]
        wd: String,
        /// Quasicharacter JSON {"unit": …, "frob": …} to twist by.
        #[arg(long)]
        twist: Option<String>,
    },
    /// The unramified representation with Frobenius polynomial X² − a_l X + χ(l)·l^{k−1}.
    FromEigenform {
        #[arg(long)]
        l: u64,
        #[arg(long = "a_l", alias = "a-l", allow_hyphen_values = true)]
        a_l: String,
        #[arg(long = "chi_l", alias = "chi-l", allow_hyphen_values = true)]
        chi_l: String,
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
    },
}

#[derive(Subcommand, Debug)]
pub enum MonodromyCmd {
    /// N = c·log(α) from a continuous representation.
    Extract {
        #[arg(long)]
        rep: String,
    },
    /// σ → continuous → σ; random special representations when --wd is omitted.
    Roundtrip {
        #[arg(long)]
        wd: Option<String>,
        #[arg(long, default_value_t = 3)]
        p: u64,
        #[arg(long, default_value_t = 10)]
        prec: u32,
        /// Normalization unit c (ignored for random runs, which draw it).
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        c: String,
        #[arg(long, default_value_t = 20)]
        count: usize,
    },
}

#[derive(Args, Debug)]
pub struct HeckeArg {
    /// Hecke element JSON, or one of 1, T, Z, T2.
    #[arg(long)]
    pub h: Option<String>,
    /// Named operator (same as --h T etc.).
    #[arg(long)]
    pub op: Option<String>,
    /// Level n of U(l^n) for named operators.
    #[arg(long)]
    pub level: Option<u32>,
}

#[derive(Subcommand, Debug)]
pub enum HeckeCmd {
    /// Convolution a * b.
    Convolve {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        l: Option<u64>,
        #[arg(long)]
        level: Option<u32>,
    },
    /// Matrix of h on a model.
    Act {
        #[command(flatten)]
        h: HeckeArg,
        #[arg(long)]
        model: String,
    },
    /// Trace of h on a model.
    Trace {
        #[command(flatten)]
        h: HeckeArg,
        #[arg(long)]
        model: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum LlCmd {
    /// The smooth representation attached to a Weil–Deligne representation.
    Map {
        #[arg(long)]
        wd: String,
        #[arg(long, default_value = "tate")]
        norm: String,
        /// Build the model at U(l^level) and report traces of --ops.
        #[arg(long)]
        level: Option<u32>,
        #[arg(long, default_value = "T,Z")]
        ops: String,
    },
}

#[derive(Args, Debug)]
pub struct CompatArgs {
    #[arg(long)]
    pub l: u64,
    #[arg(long = "a_l", alias = "a-l", allow_hyphen_values = true)]
    pub a_l: String,
    #[arg(long = "chi_l", alias = "chi-l", allow_hyphen_values = true)]
    pub chi_l: String,
    #[arg(long, allow_hyphen_values = true)]
    pub k: i64,
    #[arg(long, default_value = "T,Z")]
    pub ops: String,
    #[arg(long, default_value_t = 0)]
    pub level: u32,
}

#[derive(Subcommand, Debug)]
pub enum FamilyCmd {
    /// The family trace of h, optionally specialized at --at.
    Trace {
        #[arg(long)]
        family: String,
        #[command(flatten)]
        h: HeckeArg,
        #[arg(long, allow_hyphen_values = true)]
        at: Option<String>,
    },
    /// Points where the family degenerates, and its poles.
    BadPoints {
        #[arg(long)]
        family: String,
    },
    /// Compare family and pointwise traces at random integer points.
    Check {
        #[arg(long)]
        family: String,
        #[command(flatten)]
        h: HeckeArg,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        /// Sample from [-range, range].
        #[arg(long, default_value_t = 50)]
        range: i64,
        /// Extra points, as a comma-separated list of rationals.
        #[arg(long, allow_hyphen_values = true)]
        points: Option<String>,
        /// JSON array of {"t": …, "trace": …} to compare against.
        #[arg(long)]
        external: Option<String>,
    },
}

/// The result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Report {
    value: Value,
    pass: bool,
}

fn ok(value: Value) -> Report {
    Report { value, pass: true }
}

type CliResult<T> = Result<T, Error>;

fn bad<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(Error::InvalidInput(msg.into()))
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    match dispatch(&cli) {
        Ok(report) => {
            let mut text = serde_json::to_string_pretty(&report.value).expect("JSON values serialize");
            text.push('\n');
            let code = if report.pass { 0 } else { 3 };
            match &cli.out {
                Some(path) => match std::fs::write(path, &text) {
                    Ok(()) => Outcome { code, stdout: String::new(), stderr: String::new() },
                    Err(e) => Outcome {
                        code: 1,
                        stdout: String::new(),
                        stderr: format!("error: cannot write {}: {e}\n", path.display()),
                    },
                },
                None => Outcome { code, stdout: text, stderr: String::new() },
            }
        }
        Err(e) => {
            let code = if e.is_input_error() { 1 } else { 2 };
            Outcome { code, stdout: String::new(), stderr: format!("error: {e}\n") }
        }
    }
}

/// All subcommand paths known to the argument parser.
pub fn command_paths() -> Vec<String> {
    fn walk(cmd: &clap::Command, prefix: &str, out: &mut Vec<String>) {
        let subs: Vec<_> = cmd.get_subcommands().filter(|c| c.get_name() != "help").collect();
        if subs.is_empty() {
            out.push(prefix.trim().to_string());
        }
        for s in subs {
            walk(s, &format!("{prefix} {}", s.get_name()), out);
        }
    }
    let mut out = Vec::new();
    walk(&Cli::command(), "", &mut out);
    out
}

fn load_json(arg: &str) -> CliResult<Value> {
    let trimmed = arg.trim_start();
    let text = if trimmed.starts_with('{') || trimmed.starts_with('[') {
        arg.to_string()
    } else if arg == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Error::InvalidInput(format!("cannot read stdin: {e}")))?;
        s
    } else {
        std::fs::read_to_string(arg).map_err(|e| Error::InvalidInput(format!("cannot read {arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| Error::InvalidInput(format!("malformed JSON in {arg}: {e}")))
}

fn parse_scalar(s: &str) -> CliResult<CycScalar> {
    match parse_rational(s) {
        Ok(r) => Ok(CycScalar::from_rational(r)),
        Err(_) => CycScalar::from_json(&load_json(s)?),
    }
}

fn parse_mat(s: &str) -> CliResult<MatQ> {
    MatQ::parse(s)
}

fn level(l: u64, n: u32) -> CliResult<LevelGroup> {
    LevelGroup::new(l, n)
}

fn cusp(l: u64, c: &CuspArgs) -> CliResult<CuspLabel> {
    CuspLabel::new(l, c.cusp, c.cusp_d)
}

fn load_hecke(arg: &str, lv: Option<LevelGroup>) -> CliResult<HeckeElement> {
    if matches!(arg, "1" | "I" | "T" | "Z" | "T2") {
        return match lv {
            Some(lv) => named_operator(arg, lv),
            None => bad(format!("named operator {arg} needs a prime and a level")),
        };
    }
    HeckeElement::from_json(&load_json(arg)?)
}

fn hecke_arg(h: &HeckeArg, l: u64, default_level: Option<LevelGroup>) -> CliResult<HeckeElement> {
    let lv = match h.level {
        Some(n) => Some(level(l, n)?),
        None => default_level,
    };
    match (&h.h, &h.op) {
        (Some(x), None) => load_hecke(x, lv),
        (None, Some(op)) => load_hecke(op, lv),
        (Some(_), Some(_)) => bad("give either --h or --op, not both"),
        (None, None) => bad("a Hecke element is required (--h or --op)"),
    }
}

fn parse_ops(ops: &str, lv: LevelGroup) -> CliResult<Vec<(String, HeckeElement)>> {
    ops.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| Ok((s.to_string(), named_operator(s, lv)?)))
        .collect()
}

fn dispatch(cli: &Cli) -> CliResult<Report> {
    match &cli.cmd {
        Cmd::Gl2 { cmd } => gl2_cmd(cmd),
        Cmd::Qexp { cmd } => qexp_cmd(cmd),
        Cmd::Wd { cmd } => wd_cmd(cmd, cli.plus_sign),
        Cmd::Monodromy { cmd } => monodromy_cmd(cmd, cli.seed),
        Cmd::Hecke { cmd } => hecke_cmd(cmd),
        Cmd::Ll { cmd } => ll_cmd(cmd),
        Cmd::Compat(a) => compat_cmd(a, cli.plus_sign),
        Cmd::Family { cmd } => family_cmd(cmd, cli.seed),
    }
}

fn gl2_cmd(cmd: &Gl2Cmd) -> CliResult<Report> {
    match cmd {
        Gl2Cmd::Decompose(a) => {
            let g = parse_mat(&a.g)?;
            let s = reduce_to_standard_upper(&g, a.l);
            Ok(ok(json!({
                "m": s.m, "n": s.n, "a": bigint_to_json(&s.a), "r": s.r, "u": s.u.to_string(),
            })))
        }
        Gl2Cmd::Iwasawa(a) => {
            let (b, k) = iwasawa_decompose(&parse_mat(&a.g)?, a.l);
            Ok(ok(json!({"b": b.to_string(), "k": k.to_string()})))
        }
        Gl2Cmd::Cartan(a) => {
            let (k1, x, y, k2) = cartan_decompose(&parse_mat(&a.g)?, a.l);
            Ok(ok(json!({"k1": k1.to_string(), "a": x, "b": y, "k2": k2.to_string()})))
        }
        Gl2Cmd::Cosets { l, n, g } => {
            let lv = level(*l, *n)?;
            match g {
                Some(g) => {
                    let g = parse_mat(g)?;
                    let key = double_coset_key(&g, &lv);
                    let cosets = left_cosets_of_double_coset(&g, &lv);
                    Ok(ok(json!({
                        "cartan": [key.a, key.b],
                        "count": cosets.len(),
                        "cosets": cosets.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                    })))
                }
                None => {
                    let reps = flag_coset_reps(*l, *n)?;
                    Ok(ok(json!({
                        "count": reps.len(),
                        "flag_reps": reps.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
                    })))
                }
            }
        }
    }
}

fn qexp_cmd(cmd: &QexpCmd) -> CliResult<Report> {
    match cmd {
        QexpCmd::Eisenstein { k, p, prec, delta: want_delta } => {
            if *prec < 1 {
                return bad("--prec must be positive");
            }
            let f = match (want_delta, k, p) {
                (true, _, _) => delta(*prec),
                (false, Some(k), Some(p)) => eisenstein_pdeprived(*k, *p, *prec)?,
                (false, Some(k), None) => eisenstein_level_one(*k, *prec)?,
                (false, None, _) => return bad("--k is required unless --delta is given"),
            };
            Ok(ok(f.to_json()))
        }
        QexpCmd::Act { f, l, g, k, chi, cusp: c, slash, weight0 } => {
            let f = QExpansion::from_json(&load_json(f)?)?;
            let g = parse_mat(g)?;
            let out = if *slash {
                slash_upper(&f, &g, *k)?
            } else if *weight0 {
                weight0_action(&f, &g, &cusp(*l, c)?)?
            } else {
                adelic_action(&f, &g, &cusp(*l, c)?, *k, &parse_scalar(chi)?)?
            };
            Ok(ok(out.to_json()))
        }
        QexpCmd::Twist { l, g, k, p, prec, cusp: c } => {
            let g = parse_mat(g)?;
            let c = cusp(*l, c)?;
            let e = twist_ratio(&g, &c, *k, *p, *prec)?;
            let (got, expected) = check_constant_term(&g, &c, *k, *p)?;
            let pass = got == expected;
            Ok(Report {
                value: json!({
                    "expansion": e.to_json(),
                    "constant_term": {"got": got.to_json(), "expected": expected.to_json(), "pass": pass},
                }),
                pass,
            })
        }
        QexpCmd::CheckCocycle { l, g, h, k, p, prec, cusp: c } => {
            let r = check_cocycle(&parse_mat(g)?, &parse_mat(h)?, &cusp(*l, c)?, *k, *p, *prec)?;
            Ok(Report { value: r.to_json(), pass: r.holds })
        }
        QexpCmd::CheckUp { l, g, k, p, prec, cusp: c } => {
            let r = check_up_commutation(&parse_mat(g)?, &cusp(*l, c)?, *k, *p, *prec)?;
            Ok(Report { value: r.to_json(), pass: r.holds })
        }
    }
}

fn wd_cmd(cmd: &WdCmd, plus_sign: bool) -> CliResult<Report> {
    match cmd {
        WdCmd::Classify { wd, twist } => {
            let sigma = WDRep::from_json(&load_json(wd)?)?;
            let mut out = json!({
                "class": sigma.classify().name(),
                "det": sigma.det().to_json(),
                "frob_ss": sigma.frob_ss().to_json(),
            });
            if let Some(t) = twist {
                let eta = Quasicharacter::from_json(sigma.l(), &load_json(t)?)?;
                let tw = sigma.twist(&eta)?;
                out["twisted"] = json!({"wd": tw.to_json(), "class": tw.classify().name()});
            }
            Ok(ok(out))
        }
        WdCmd::FromEigenform { l, a_l, chi_l, k } => {
            let sigma = wd_from_eigenform(*l, &parse_scalar(a_l)?, &parse_scalar(chi_l)?, *k, plus_sign)?;
            Ok(ok(json!({"wd": sigma.to_json(), "class": sigma.classify().name()})))
        }
    }
}

fn monodromy_cmd(cmd: &MonodromyCmd, seed: u64) -> CliResult<Report> {
    match cmd {
        MonodromyCmd::Extract { rep } => {
            let rep = ContinuousLocalRep::from_json(&load_json(rep)?)?;
            let ex = monodromy_extract(&rep)?;
            let tame = rep.tame_relation_holds(rep.prec())?;
            Ok(Report { value: json!({"extracted": ex.to_json(), "tame_relation": tame}), pass: tame })
        }
        MonodromyCmd::Roundtrip { wd, p, prec, c, count } => {
            if let Some(wd) = wd {
                let sigma = WDRep::from_json(&load_json(wd)?)?;
                let c = PadicTrunc::from_rational(&parse_rational(c)?, *p, *prec)?;
                let r = monodromy_roundtrip(&sigma, *p, *prec, &c)?;
                return Ok(Report { value: r.to_json(), pass: r.pass() });
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut runs = Vec::with_capacity(*count);
            let mut pass = true;
            for _ in 0..*count {
                let (sigma, c) = random_special(&mut rng, *p, *prec)?;
                let r = monodromy_roundtrip(&sigma, *p, *prec, &c)?;
                pass &= r.pass();
                runs.push(json!({"wd": sigma.to_json(), "c": c.to_json(), "result": r.to_json()}));
            }
            Ok(Report { value: json!({"seed": seed, "runs": runs, "pass": pass}), pass })
        }
    }
}

/// A special representation `χ|.|^{-1} ⊕ χ` with random unramified `χ`
/// whose Frobenius values are `p`-adic units, and a random unit `c`.
pub fn random_special(rng: &mut ChaCha8Rng, p: u64, prec: u32) -> CliResult<(WDRep, PadicTrunc)> {
    let primes: Vec<u64> = [2u64, 5, 7, 11].into_iter().filter(|&l| l != p).collect();
    let l = primes[rng.gen_range(0..primes.len())];
    let unit = |rng: &mut ChaCha8Rng| loop {
        let x: i64 = rng.gen_range(1..=60);
        if x % p as i64 != 0 {
            return x;
        }
    };
    let chi = Quasicharacter::unramified(l, CycScalar::from_int(unit(rng)))?;
    let n = loop {
        let x: i64 = rng.gen_range(-60..=60);
        if x != 0 {
            break x;
        }
    };
    let sigma = WDRep::Split(SplitWD::special(&chi, CycScalar::from_int(n))?);
    let c = PadicTrunc::from_int(p, prec, unit(rng));
    Ok((sigma, c))
}

fn hecke_cmd(cmd: &HeckeCmd) -> CliResult<Report> {
    match cmd {
        HeckeCmd::Convolve { a, b, l, level: n } => {
            let lv = match (l, n) {
                (Some(l), Some(n)) => Some(level(*l, *n)?),
                _ => None,
            };
            let x = load_hecke(a, lv)?;
            let lv = lv.or(Some(x.level));
            let y = load_hecke(b, lv)?;
            Ok(ok(x.convolve(&y)?.to_json()))
        }
        HeckeCmd::Act { h, model } => {
            let m = SmoothRepModel::from_json(&load_json(model)?)?;
            let h = hecke_arg(h, m.level().l, Some(m.level()))?;
            let a = m.act(&h)?;
            Ok(ok(json!({"rank": m.rank(), "matrix": a.to_json()})))
        }
        HeckeCmd::Trace { h, model } => {
            let m = SmoothRepModel::from_json(&load_json(model)?)?;
            let h = hecke_arg(h, m.level().l, Some(m.level()))?;
            Ok(ok(json!({"rank": m.rank(), "trace": m.trace(&h)?.to_json()})))
        }
    }
}

fn ll_cmd(cmd: &LlCmd) -> CliResult<Report> {
    match cmd {
        LlCmd::Map { wd, norm, level: n, ops } => {
            let sigma = WDRep::from_json(&load_json(wd)?)?;
            let desc = ll_map(&sigma, Normalization::parse(norm)?)?;
            let mut out = json!({"class": sigma.classify().name(), "descriptor": desc.to_json()});
            out["satake"] = match satake(&desc) {
                Ok((s, p, degenerate)) => json!({"sum": s.to_json(), "product": p.to_json(), "degenerate": degenerate}),
                Err(Error::NotApplicable(_)) => Value::Null,
                Err(e) => return Err(e),
            };
            if let Some(n) = n {
                let lv = level(desc.l, *n)?;
                let model = desc.model(lv)?;
                let mut traces = serde_json::Map::new();
                for (name, h) in parse_ops(ops, lv)? {
                    traces.insert(name, model.trace(&h)?.to_json());
                }
                out["model"] = json!({"rank": model.rank(), "model": model.to_json(), "traces": traces});
            }
            Ok(ok(out))
        }
    }
}

fn compat_cmd(a: &CompatArgs, plus_sign: bool) -> CliResult<Report> {
    let lv = level(a.l, a.level)?;
    let ops = parse_ops(&a.ops, lv)?;
    let r = compat_check(a.l, &parse_scalar(&a.a_l)?, &parse_scalar(&a.chi_l)?, a.k, &ops, lv, plus_sign)?;
    Ok(Report { value: r.to_json(), pass: r.all_pass() })
}

fn family_cmd(cmd: &FamilyCmd, seed: u64) -> CliResult<Report> {
    match cmd {
        FamilyCmd::Trace { family, h, at } => {
            let fam = FamilyWD::from_json(&load_json(family)?)?;
            let h = hecke_arg(h, fam.l(), None)?;
            let t = fam.trace(&h)?;
            let mut out = json!({"family": fam.to_json(), "trace": t.to_string()});
            if let Some(at) = at {
                let t0 = parse_scalar(at)?;
                let sigma = fam.specialize(&t0)?;
                out["at"] = json!({
                    "t": t0.to_json(),
                    "value": t.eval(&t0)?.to_json(),
                    "wd": sigma.to_json(),
                    "class": sigma.classify().name(),
                });
            }
            Ok(ok(out))
        }
        FamilyCmd::BadPoints { family } => {
            let fam = FamilyWD::from_json(&load_json(family)?)?;
            let mut out = fam.bad_points()?.to_json();
            out["poles"] = json!(fam.poles().iter().map(|p| p.to_string()).collect::<Vec<_>>());
            Ok(ok(out))
        }
        FamilyCmd::Check { family, h, samples, range, points, external } => {
            let fam = FamilyWD::from_json(&load_json(family)?)?;
            let h = hecke_arg(h, fam.l(), None)?;
            if *range < 1 {
                return bad("--range must be positive");
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut pts: Vec<CycScalar> =
                (0..*samples).map(|_| CycScalar::from_int(rng.gen_range(-*range..=*range))).collect();
            if let Some(ps) = points {
                for s in ps.split(',').filter(|s| !s.trim().is_empty()) {
                    pts.push(CycScalar::from_rational(parse_rational(s)?));
                }
            }
            let ext = match external {
                Some(e) => parse_external(&load_json(e)?)?,
                None => Vec::new(),
            };
            let rep = check_specialization(&fam, &h, &pts, &ext)?;
            let mut out = rep.to_json();
            out["seed"] = json!(seed);
            Ok(Report { value: out, pass: rep.all_pass() })
        }
    }
}

fn parse_external(v: &Value) -> CliResult<Vec<(CycScalar, CycScalar)>> {
    let arr = v.as_array().map_or_else(|| bad("external values must be a JSON array"), Ok)?;
    arr.iter()
        .map(|e| match (e.get("t"), e.get("trace")) {
            (Some(t), Some(x)) => Ok((CycScalar::from_json(t)?, CycScalar::from_json(x)?)),
            _ => bad("each external value needs fields `t` and `trace`"),
        })
        .collect()
}
