//! One PASS/FAIL line per acceptance criterion, written straight to stderr
//! so that it shows without `--nocapture`. Criteria run one at a time so
//! that the timing limits are not skewed by each other.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::One;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use catalytic::dde::{build_deformed_system, build_det_and_p, clear_denominators_with, parse_dde, truncate_in, DdeSystem};
use catalytic::guess::{guess_annihilator, guess_table, verify_annihilator, GuessSpec};
use catalytic::ideal::Budget;
use catalytic::poly::{MultiPoly, Rational};
use catalytic::series::fixed_point_expand;
use catalytic::strategies::{all_bounds, reduce_to_single_equation, solve_by_duplication, Reduction, SolveOptions};

static SERIAL: Mutex<()> = Mutex::new(());

const CUBIC: &str = "64*t^3*z0^3 + (48*t^3 - 72*t^2 + 2*t)*z0^2 - (15*t^3 - 9*t^2 - 19*t + 1)*z0 + t^3 + 27*t^2 - 19*t + 1";
const QUADRATIC: &str = "16*t^3*z0^2 - (8*t^2 + 12*t - 1)*t*z0 + t*(t^2 + 11*t - 1)";
const REDUCED: &str = "-(x1 - 1)*(u - 1) + t*u*(2*u*x1^2 - u*z0 - 2*x1^2 + u + x1 - 1)";

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn load(name: &str) -> DdeSystem {
    parse_dde(&std::fs::read_to_string(fixture(name)).unwrap()).unwrap()
}

fn gpoly(s: &str) -> MultiPoly {
    MultiPoly::parse(s, &guess_table()).unwrap()
}

fn cli(args: &[&str]) -> (Output, Duration) {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_catalytic")).args(args).output().unwrap();
    (out, start.elapsed())
}

/// Runs `check` under the global lock and reports its verdict.
fn criterion(number: u32, title: &str, check: impl FnOnce() -> Result<String, String>) {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let start = Instant::now();
    let verdict = check();
    let secs = start.elapsed().as_secs_f64();
    let line = match &verdict {
        Ok(detail) => format!("PASS criterion {number}: {title} [{secs:.1} s] {detail}"),
        Err(detail) => format!("FAIL criterion {number}: {title} [{secs:.1} s] {detail}"),
    };
    let _ = writeln!(std::io::stderr(), "{line}");
    if let Err(detail) = verdict {
        panic!("criterion {number} failed: {detail}");
    }
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn binomial(n: u64, k: u64) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

#[test]
fn criterion_1_two_constellations() {
    criterion(1, "2-constellations quadratic and counts", || {
        let (out, took) = cli(&["solve", fixture("2const.dde").to_str().unwrap(), "--format", "json"]);
        ensure(out.status.code() == Some(0), format!("exit {:?}", out.status.code()))?;
        ensure(took < Duration::from_secs(60), format!("took {took:?}"))?;
        let doc: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
        let result = &doc["result"];
        ensure(result["verified_to_order"] == 40, "not verified to t^40")?;
        let factor = gpoly(result["minimal_factor"]["poly"].as_str().ok_or("no minimal factor")?);
        // equal up to a factor in Q[t]
        let content = gpoly(QUADRATIC).div_exact(&factor).ok_or(format!("{factor} does not divide"))?;
        ensure(!content.involves(1), format!("{factor} differs by {content}"))?;
        let sys = load("2const.dde");
        let s = fixed_point_expand(&sys, 7).unwrap();
        for n in 1..=6u64 {
            let expected = Rational::new(
                BigInt::from(3) * BigInt::from(2).pow(n as u32 - 1) * binomial(2 * n, n),
                BigInt::from((n + 2) * (n + 1)),
            );
            ensure(s.specializations.z(0).coeff(n as usize) == &expected, format!("a_{n}"))?;
        }
        Ok(format!("minimal factor {factor} (content {content}), {took:?}"))
    });
}

#[test]
fn criterion_2_expand_prefix() {
    criterion(2, "orientations expansion prefix at N = 20", || {
        let (out, took) = cli(&["expand", fixture("orientations.dde").to_str().unwrap(), "-N", "20"]);
        ensure(out.status.code() == Some(0), format!("exit {:?}", out.status.code()))?;
        ensure(took < Duration::from_secs(5), format!("took {took:?}"))?;
        let text = String::from_utf8_lossy(&out.stdout);
        let line = text.lines().find(|l| l.starts_with("F1(t,1) = ")).ok_or("no F1(t,1) line")?;
        ensure(line.starts_with("F1(t,1) = 1 + 2*t + 10*t^2 + 66*t^3 + "), line.to_string())?;
        Ok(format!("{took:?}"))
    });
}

#[test]
fn criterion_3_guess_cubic() {
    criterion(3, "orientations guessed cubic", || {
        let start = Instant::now();
        let series = fixed_point_expand(&load("orientations.dde"), 60).unwrap().specializations.z(0).clone();
        let r = guess_annihilator(&GuessSpec::new(series, 3, 3)).map_err(|e| e.to_string())?.ok_or("nothing found")?;
        let took = start.elapsed();
        ensure(r.associate_of(&gpoly(CUBIC)), format!("got {r}"))?;
        ensure(took < Duration::from_secs(60), format!("took {took:?}"))?;
        Ok(format!("{took:?}"))
    });
}

#[test]
fn criterion_4_duplication_solve() {
    criterion(4, "orientations duplication solve divisible by the cubic", || {
        let sys = load("orientations.dde");
        let opts = SolveOptions {
            budget: Budget::seconds(1800.0),
            ..SolveOptions::default()
        };
        let r = solve_by_duplication(&sys, &opts).map_err(|e| e.to_string())?;
        ensure(!r.r.is_zero(), "zero R")?;
        ensure(r.verified_to_order >= 40, "not verified to t^40")?;
        let series = fixed_point_expand(&sys, 40).unwrap().specializations.z(0).clone();
        ensure(verify_annihilator(&r.r, &series, 40).unwrap().holds, "R does not vanish mod t^40")?;
        ensure(r.r.divisible_by(&gpoly(CUBIC)), "cubic does not divide R")?;
        let m = r.minimal_factor.ok_or("no minimal factor")?;
        ensure(m.minimal && m.poly.associate_of(&gpoly(CUBIC)), format!("minimal factor {}", m.poly))?;
        Ok(format!("route: {}; deg_z0 R = {}", r.route, r.r.degree_in(1)))
    });
}

#[test]
fn criterion_5_reduction_failure() {
    criterion(5, "orientations reduction stops on the root count", || {
        let (out, took) = cli(&["solve", "--strategy", "reduce", fixture("orientations.dde").to_str().unwrap()]);
        ensure(out.status.code() == Some(3), format!("exit {:?}", out.status.code()))?;
        ensure(took < Duration::from_secs(60), format!("took {took:?}"))?;
        let text = String::from_utf8_lossy(&out.stderr).to_string();
        ensure(text.contains("1 Puiseux root(s)") && text.contains("nk = 2"), text.clone())?;
        Ok(text.trim().to_string())
    });
}

#[test]
fn criterion_6_reduction_generator() {
    criterion(6, "orientations reduction generator", || {
        let start = Instant::now();
        let sys = load("orientations.dde");
        let (ns, red) = reduce_to_single_equation(&sys, &Budget::seconds(120.0)).map_err(|e| e.to_string())?;
        let took = start.elapsed();
        let Reduction::Principal(e) = red else { return Err("not principal".into()) };
        ensure(took < Duration::from_secs(120), format!("took {took:?}"))?;
        let expected = MultiPoly::parse(REDUCED, &ns.vars).unwrap();
        if !e.associate_of(&expected) {
            let diff = &e.canonical() - &expected.canonical();
            return Err(format!("got {e}; differs from the expected generator by {diff}"));
        }
        Ok(format!("{took:?}"))
    });
}

fn random_atom(rng: &mut StdRng, n: usize, k: usize) -> String {
    let i = rng.gen_range(1..=n);
    match rng.gen_range(0..=k + 2) {
        0 => format!("F{i}"),
        1 => format!("D[F{i}]"),
        j if j <= k => format!("D{j}[F{i}]"),
        j if j == k + 1 => "u".into(),
        _ => "t".into(),
    }
}

fn random_system(rng: &mut StdRng) -> String {
    let n = rng.gen_range(1..=2);
    let k = rng.gen_range(1..=2);
    let delta = rng.gen_range(1..=3);
    let mut text = format!("catalytic u at 0\norder {k}\n");
    for i in 1..=n {
        let mut terms = Vec::new();
        for _ in 0..rng.gen_range(1..=4) {
            let deg = rng.gen_range(1..=delta);
            let atoms: Vec<String> = (0..deg).map(|_| random_atom(rng, n, k)).collect();
            let c = [-3, -2, -1, 1, 2, 3][rng.gen_range(0..6)];
            terms.push(format!("{c}*{}", atoms.join("*")));
        }
        let f = if rng.gen_bool(0.5) { "1" } else { "u" };
        text.push_str(&format!("F{i} = {f} + t*({})\n", terms.join(" + ")));
    }
    text
}

#[test]
fn criterion_7_deformation_identity() {
    criterion(7, "deformed Det modulo t^(n+1) on 20 random systems", || {
        let mut rng = StdRng::seed_from_u64(7);
        let mut slowest = Duration::ZERO;
        for _ in 0..20 {
            let text = random_system(&mut rng);
            let start = Instant::now();
            let sys = parse_dde(&text).map_err(|e| format!("{e}\n{text}"))?;
            ensure(sys.n <= 2 && sys.k <= 2 && sys.delta <= 3, format!("out of range:\n{text}"))?;
            let d = build_deformed_system(&sys).map_err(|e| e.to_string())?;
            let ns = build_det_and_p(&clear_denominators_with(&d.system, sys.k as u32).unwrap()).unwrap();
            let got = truncate_in(ns.det.as_ref().unwrap(), ns.t_index(), sys.n as u32 + 1);
            let want = d.predicted_det(&ns.vars).unwrap();
            let took = start.elapsed();
            slowest = slowest.max(took);
            ensure(got == want, format!("mismatch for\n{text}got  {got}\nwant {want}"))?;
            ensure(took < Duration::from_secs(10), format!("took {took:?} on\n{text}"))?;
        }
        Ok(format!("slowest {slowest:?}"))
    });
}

fn pow(b: u64, e: u64) -> BigInt {
    (0..e).fold(BigInt::one(), |acc, _| acc * BigInt::from(b))
}

fn fact(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

#[test]
fn criterion_8_bounds() {
    criterion(8, "bound calculators on the grid", || {
        for n in 1..=3u64 {
            for k in 1..=3u64 {
                let mut prev = None;
                for d in 1..=5u64 {
                    let nk = n * k;
                    let e = n * n * k * k * (n + 2) + n;
                    let mut den = BigInt::one();
                    for _ in 0..nk {
                        den *= fact(nk);
                    }
                    let full = pow(n, 2 * n * n * k * k) * pow(k + 1, e) * pow(d, e) / den;
                    let spec = pow(n, nk) * pow(d * (k + 1), nk * (n + 2)) / fact(nk);
                    let dup = pow(n, 2 * nk) * pow(d * (k + 1) + 1, nk * (n + 2)) / fact(nk);
                    let b = all_bounds(n, k, d);
                    ensure(b.full == full && b.specialized == spec && b.duplication == dup, format!("({n},{k},{d})"))?;
                    if let Some((t, s, u)) = prev {
                        ensure(b.full >= t && b.specialized >= s && b.duplication >= u, format!("not monotone at ({n},{k},{d})"))?;
                    }
                    prev = Some((b.full, b.specialized, b.duplication));
                }
            }
        }
        let b = all_bounds(1, 1, 1);
        ensure(b.full == BigInt::from(16) && b.duplication == BigInt::from(27), "(1,1,1)")?;
        Ok("45 grid points".into())
    });
}

/// Newest test executable named `name-<hash>` next to this one.
fn sibling_test_binary(name: &str) -> Option<PathBuf> {
    let dir = std::env::current_exe().ok()?.parent()?.to_path_buf();
    std::fs::read_dir(dir)
        .ok()?
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .filter(|p| {
            let f = p.file_name().and_then(|f| f.to_str()).unwrap_or("");
            f.strip_prefix(name).and_then(|r| r.strip_prefix('-')).is_some_and(|h| !h.contains('.'))
        })
        .max_by_key(|p| p.metadata().and_then(|m| m.modified()).ok())
}

#[test]
fn criterion_9_property_suites() {
    criterion(9, "property and oracle suites", || {
        let mut report = Vec::new();
        for suite in ["properties", "ideal_engine", "poly_core", "series_engine", "guess_verify"] {
            let bin = sibling_test_binary(suite).ok_or(format!("{suite} not built; run cargo test --workspace"))?;
            let start = Instant::now();
            let out = Command::new(&bin).arg("--test-threads=1").output().map_err(|e| e.to_string())?;
            let took = start.elapsed();
            ensure(out.status.success(), format!("{suite} failed:\n{}", String::from_utf8_lossy(&out.stdout)))?;
            ensure(took < Duration::from_secs(300), format!("{suite} took {took:?}"))?;
            report.push(format!("{suite} {:.1} s", took.as_secs_f64()));
        }
        Ok(report.join(", "))
    });
}
