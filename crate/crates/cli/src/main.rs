//! `catalytic`: expand, diagnose, bound, guess and solve DDE systems.
//!
//! Exit codes: 0 success, 1 other failure, 2 unreadable or invalid input,
//! 3 hypothesis failure, 4 budget exhausted.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use catalytic::dde::{build_deformed_system, clear_denominators_with, build_det_and_p, parse_dde, truncate_in, DdeSystem};
use catalytic::guess::{guess_annihilator, provenance, verify_annihilator, GuessSpec};
use catalytic::ideal::Budget;
use catalytic::series::fixed_point_expand;
use catalytic::strategies::{
    all_bounds, check_hypotheses, solve_auto, solve_by_duplication, solve_by_guessing, solve_by_reduction,
    AnnihilatorResult, FailureKind, SolveError, SolveOptions, SolveResult,
};
use catalytic::Error;

const SCHEMA: &str = "catalytic-result/1";

#[derive(Parser)]
#[command(name = "catalytic", version, about = "Annihilating polynomials for DDEs with one catalytic variable")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Power-series solution and its specialisations.
    Expand(Common),
    /// Eliminate down to an annihilating polynomial of F1(t, a).
    Solve(SolveArgs),
    /// Check the hypotheses of both strategies.
    Diagnose(Common),
    /// Degree bounds for the input's (n, k, δ).
    Bounds(Common),
    /// Guess an annihilating polynomial of F1(t, a) from its series.
    Guess(GuessArgs),
}

#[derive(Args)]
struct Common {
    /// DDE input file.
    input: PathBuf,
    /// Series order.
    #[arg(short = 'N', long = "order", default_value_t = 20, value_parser = clap::value_parser!(u32).range(4..))]
    order: u32,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Wall-clock budget in seconds.
    #[arg(long, default_value_t = 1800.0, value_parser = positive)]
    budget_seconds: f64,
    /// Pair budget per Gröbner basis run.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    max_pairs: Option<u64>,
    /// Basis-size budget per Gröbner basis run.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    max_basis: Option<u64>,
    /// Include wall-clock timings (makes output run-dependent).
    #[arg(long)]
    timings: bool,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, value_enum, default_value_t = StrategyArg::Auto)]
    strategy: StrategyArg,
    /// Enable the experimental deformation (same as `--strategy deform`).
    #[arg(long)]
    deform: bool,
    /// Value substituted for the deformation parameter.
    #[arg(long, default_value = "1")]
    eps: String,
}

#[derive(Args)]
struct GuessArgs {
    #[command(flatten)]
    common: Common,
    /// Degree bound in t.
    #[arg(long, default_value_t = 3)]
    dt: usize,
    /// Degree bound in z0.
    #[arg(long, default_value_t = 3)]
    dz: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum StrategyArg {
    Auto,
    Dup,
    Reduce,
    Guess,
    Deform,
}

fn positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("`{s}` is not a positive number of seconds")),
    }
}

/// What a command produced: a JSON body, its text rendering and an exit code.
struct Outcome {
    status: &'static str,
    body: Value,
    text: String,
    code: u8,
    timings: Vec<(String, u64)>,
}

impl Outcome {
    fn ok(body: Value, text: String) -> Outcome {
        Outcome {
            status: "ok",
            body,
            text,
            code: 0,
            timings: Vec::new(),
        }
    }

    fn failure(status: &'static str, code: u8, body: Value, text: String) -> Outcome {
        Outcome {
            status,
            body,
            text,
            code,
            timings: Vec::new(),
        }
    }
}

struct Loaded {
    sys: DdeSystem,
    digest: String,
}

fn load(common: &Common) -> Result<Loaded, Outcome> {
    let text = std::fs::read_to_string(&common.input).map_err(|e| {
        let msg = format!("cannot read {}: {e}", common.input.display());
        Outcome::failure("input_error", 2, json!({ "error": msg }), msg)
    })?;
    let digest = hex::encode(Sha256::digest(text.as_bytes()));
    let sys = parse_dde(&text).map_err(|e| {
        let msg = e.to_string();
        Outcome::failure("input_error", 2, json!({ "error": msg }), msg)
    })?;
    Ok(Loaded { sys, digest })
}

fn budget(common: &Common) -> Budget {
    Budget {
        max_pairs: common.max_pairs.map(|v| v as usize),
        max_basis: common.max_basis.map(|v| v as usize),
        ..Budget::seconds(common.budget_seconds)
    }
}

fn error_outcome(e: &Error) -> Outcome {
    let (status, code) = match e {
        Error::Syntax { .. } | Error::Semantic { .. } => ("input_error", 2),
        Error::BudgetExhausted(_) => ("budget_exhausted", 4),
        _ => ("error", 1),
    };
    let msg = e.to_string();
    Outcome::failure(status, code, json!({ "error": msg }), msg)
}

fn expand(sys: &DdeSystem, order: usize) -> Result<Outcome, Error> {
    let exp = fixed_point_expand(sys, order)?;
    let a = rat_text(&sys.a);
    let mut text = String::new();
    let mut solutions = Vec::new();
    for (i, s) in exp.solutions.iter().enumerate() {
        let name = format!("F{}(t,u)", i + 1);
        text.push_str(&format!("{name} = {s}\n"));
        solutions.push(json!({ "name": name, "series": s.to_string() }));
    }
    let mut specs = Vec::new();
    for (i, row) in exp.specializations.entries.iter().enumerate() {
        for (l, s) in row.iter().enumerate() {
            let name = match l {
                0 => format!("F{}(t,{a})", i + 1),
                1 => format!("d/du F{}(t,{a})", i + 1),
                _ => format!("d^{l}/du^{l} F{}(t,{a})", i + 1),
            };
            text.push_str(&format!("{name} = {s}\n"));
            let coeffs: Vec<String> = s.coeffs().iter().map(rat_text).collect();
            specs.push(json!({ "name": name, "series": s.to_string(), "coefficients": coeffs }));
        }
    }
    Ok(Outcome::ok(
        json!({ "order": order, "solutions": solutions, "specializations": specs }),
        text,
    ))
}

fn rat_text(r: &catalytic::poly::Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn bounds(sys: &DdeSystem) -> Outcome {
    let b = all_bounds(sys.n as u64, sys.k as u64, sys.delta as u64);
    let text = format!(
        "n = {}, k = {}, delta = {}\ntotal degree bound = {}\nbound after specialisation = {}\nduplication bound = {}\n",
        b.n, b.k, b.delta, b.full, b.specialized, b.duplication
    );
    Outcome::ok(serde_json::to_value(&b).expect("serializable"), text)
}

fn diagnose(sys: &DdeSystem, budget: &Budget) -> Result<Outcome, Error> {
    let report = check_hypotheses(sys, budget)?;
    let mut text = format!("required roots (nk) = {}\n", report.required_roots);
    for (name, c) in [
        ("H1 root count", &report.h1_root_count),
        ("H1 distinct roots", &report.h1_distinct),
        ("H1 finiteness", &report.h1_zero_dimensional),
        ("principal elimination", &report.principal),
        ("H2 root count", &report.h2_root_count),
        ("H2 finiteness", &report.h2_zero_dimensional),
    ] {
        text.push_str(&format!("{name}: {} ({})\n", state_text(c.state), c.evidence));
    }
    text.push_str(&format!("radicality: {}\nhypothesis (P): {}\n", report.radical, report.hypothesis_p));
    for n in &report.notes {
        text.push_str(&format!("note: {n}\n"));
    }
    Ok(Outcome::ok(serde_json::to_value(&report).expect("serializable"), text))
}

fn state_text(s: catalytic::strategies::TriState) -> &'static str {
    use catalytic::strategies::TriState::*;
    match s {
        Confirmed => "confirmed",
        Refuted => "refuted",
        Inconclusive => "inconclusive",
    }
}

fn guess(sys: &DdeSystem, args: &GuessArgs) -> Result<Outcome, Error> {
    let order = args.common.order as usize;
    let series = fixed_point_expand(sys, order)?.specializations.z(0).clone();
    let spec = GuessSpec::new(series.clone(), args.dt, args.dz);
    let bound = all_bounds(sys.n as u64, sys.k as u64, sys.delta as u64).duplication;
    match guess_annihilator(&spec)? {
        Some(r) => {
            let prov = provenance(order, Some(&bound));
            let check = verify_annihilator(&r, &series, order)?;
            let body = json!({
                "annihilator": r.to_string(),
                "bounds": [args.dt, args.dz],
                "verified_to_order": check.order,
                "provenance": prov,
            });
            let text = format!("R = {r}\nverified to O(t^{order}); {}\n", serde_json::to_value(prov).expect("enum"));
            Ok(Outcome::ok(body, text.replace('"', "")))
        }
        None => {
            let msg = format!("no annihilator with deg_t <= {} and deg_z0 <= {}", args.dt, args.dz);
            Ok(Outcome::failure("not_found", 1, json!({ "error": msg }), msg))
        }
    }
}

fn result_text(r: &AnnihilatorResult) -> String {
    let mut text = format!("strategy: {:?}\nroute: {}\nR = {}\n", r.strategy, r.route, r.r);
    if let Some(m) = &r.minimal_factor {
        text.push_str(&format!(
            "minimal factor{} = {}\n",
            if m.minimal { "" } else { " (not found, R returned)" },
            m.poly
        ));
    }
    text.push_str(&format!("verified to O(t^{})\n", r.verified_to_order));
    text
}

fn solve_outcome(result: SolveResult, label: Option<String>) -> Outcome {
    match result {
        Ok(r) => {
            let mut body = serde_json::to_value(&r).expect("serializable");
            let mut text = result_text(&r);
            if let Some(l) = label {
                body["annihilates"] = json!(l);
                text.push_str(&format!("annihilates {l}\n"));
            }
            let mut out = Outcome::ok(body, text);
            out.timings = r.timings;
            out
        }
        Err(SolveError::Internal(e)) => error_outcome(&e),
        Err(SolveError::Failed(f)) => {
            let (status, code) = match f.kind {
                FailureKind::Hypothesis => ("hypothesis_failure", 3),
                FailureKind::Budget => ("budget_exhausted", 4),
                FailureKind::Degenerate => ("error", 1),
            };
            let text = format!("{:?} strategy failed: {}\n", f.strategy, f.message);
            Outcome::failure(status, code, serde_json::to_value(&*f).expect("serializable"), text)
        }
    }
}

/// Experimental: solve the deformed system at a fixed value of the
/// deformation parameter. The result annihilates the deformed series, not
/// `F1(t, a)`.
fn solve_deformed(sys: &DdeSystem, eps: &str, opts: &SolveOptions) -> Result<Outcome, Error> {
    let value = eps
        .parse::<catalytic::poly::Rational>()
        .map_err(|_| Error::Precondition(format!("`{eps}` is not a rational number")))?;
    let shifted = sys.shift_catalytic_point()?;
    let d = build_deformed_system(&shifted)?;
    let ns = build_det_and_p(&clear_denominators_with(&d.system, shifted.k as u32)?)?;
    let t = ns.t_index();
    let det = truncate_in(ns.det.as_ref().expect("built above"), t, shifted.n as u32 + 1);
    let identity = det == d.predicted_det(&ns.vars)?;
    let g = d.with_eps(&value)?;
    let label = format!("G1(t,0) at eps = {eps}, where {}", d.relation);
    let mut out = solve_outcome(solve_by_duplication(&g, opts), Some(label));
    out.body["deformation"] = json!({
        "M": d.params.big_m,
        "beta": d.params.beta,
        "alpha": d.params.alpha,
        "det_identity_mod_t": identity,
    });
    out.text.push_str(&format!(
        "deformation: M = {}, beta = {}, alpha = {}, Det identity mod t^{}: {identity}\n",
        d.params.big_m,
        d.params.beta,
        d.params.alpha,
        shifted.n + 1
    ));
    Ok(out)
}

fn solve(sys: &DdeSystem, args: &SolveArgs) -> Result<Outcome, Error> {
    let opts = SolveOptions {
        budget: budget(&args.common),
        ..SolveOptions::default()
    };
    let strategy = if args.deform { StrategyArg::Deform } else { args.strategy };
    let mut out = match strategy {
        StrategyArg::Auto => solve_outcome(solve_auto(sys, &opts), None),
        StrategyArg::Dup => solve_outcome(solve_by_duplication(sys, &opts), None),
        StrategyArg::Reduce => solve_outcome(solve_by_reduction(sys, &opts), None),
        StrategyArg::Guess => solve_outcome(solve_by_guessing(sys, args.common.order as usize, &opts), None),
        StrategyArg::Deform => solve_deformed(sys, &args.eps, &opts)?,
    };
    if out.code == 0 {
        let b = all_bounds(sys.n as u64, sys.k as u64, sys.delta as u64);
        out.body["bounds"] = serde_json::to_value(&b).expect("serializable");
    }
    Ok(out)
}

fn run(cli: &Cli) -> (Outcome, &Common, Value) {
    let started = Instant::now();
    let (common, config) = match &cli.command {
        Command::Expand(c) => (c, json!({ "command": "expand", "order": c.order })),
        Command::Diagnose(c) => (c, json!({ "command": "diagnose" })),
        Command::Bounds(c) => (c, json!({ "command": "bounds" })),
        Command::Solve(s) => (
            &s.common,
            json!({
                "command": "solve",
                "strategy": if s.deform { StrategyArg::Deform } else { s.strategy },
                "eps": (s.deform || s.strategy == StrategyArg::Deform).then(|| s.eps.clone()),
                "budget_seconds": s.common.budget_seconds,
                "max_pairs": s.common.max_pairs,
                "max_basis": s.common.max_basis,
            }),
        ),
        Command::Guess(g) => (
            &g.common,
            json!({ "command": "guess", "order": g.common.order, "dt": g.dt, "dz": g.dz }),
        ),
    };
    let loaded = match load(common) {
        Ok(l) => l,
        Err(o) => return (o, common, config),
    };
    let sys = &loaded.sys;
    let result = match &cli.command {
        Command::Expand(c) => expand(sys, c.order as usize),
        Command::Diagnose(c) => diagnose(sys, &budget(c)),
        Command::Bounds(_) => Ok(bounds(sys)),
        Command::Solve(s) => solve(sys, s),
        Command::Guess(g) => guess(sys, g),
    };
    let mut out = result.unwrap_or_else(|e| error_outcome(&e));
    out.timings.push(("total".into(), started.elapsed().as_millis() as u64));
    let mut config = config;
    config["input_sha256"] = json!(loaded.digest);
    (out, common, config)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (out, common, config) = run(&cli);
    match common.format {
        Format::Json => {
            let mut doc = json!({
                "schema": SCHEMA,
                "status": out.status,
                "exit_code": out.code,
                "config": config,
                "result": out.body,
            });
            if common.timings {
                let t: serde_json::Map<String, Value> = out.timings.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
                doc["timings_ms"] = Value::Object(t);
            }
            println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
        }
        Format::Text => {
            if out.code == 0 {
                print!("{}", out.text);
            } else {
                eprintln!("{}", out.text.trim_end());
            }
            if common.timings {
                for (k, v) in &out.timings {
                    eprintln!("time {k}: {v} ms");
                }
            }
        }
    }
    ExitCode::from(out.code)
}
