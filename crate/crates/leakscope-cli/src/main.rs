//! Command-line front end: load a distribution, dispatch one measure, print
//! a JSON or table report.
//!
//! Exit codes: 0 on success, 2 on bad input or flags (with a machine-readable
//! error object on stderr), 3 on an internal invariant violation (including a
//! failing `verify` suite). All commands are pure functions of
//! (input, flags, seed); reruns are byte-identical.

use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use leakscope::exact::{exact_guess_vector_unsorted, q_to_f64, worked_cases};
use leakscope::gain::parse_gain_spec;
use leakscope::guess::{
    alpha_leakage_k, check_robustness, decompose_strategy, expected_alpha_loss, is_admissible,
    min_expected_alpha_loss, optimal_guess_vector, s_star,
};
use leakscope::io::{load_input, InputData, InputFormat};
use leakscope::leakage::{
    maximal_alpha_leakage, maximal_g_leakage, maximal_leakage, opportunistic_report,
    pointwise_maximal_leakage, realizable_report, LeakageReport, PerYCombine,
};
use leakscope::prob::{Alphabet, OrderAlpha, Pmf};
use leakscope::verify::{run_all, run_suite, SuiteKind, SuiteReport};
use leakscope::Error;

#[derive(Parser)]
#[command(
    name = "leakscope",
    version,
    about = "Information-leakage measures and optimal guessing strategies for finite distributions"
)]
struct Cli {
    /// Input file holding a prior+channel or a joint distribution.
    #[arg(long, global = true)]
    input: Option<PathBuf>,

    /// Input format: json or csv. Inferred from the file extension when
    /// omitted.
    #[arg(long, global = true)]
    format: Option<String>,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = OutputMode::Json)]
    out: OutputMode,

    /// Seed for the randomized verification suites. Falls back to the
    /// LEAKSCOPE_SEED environment variable, then 0.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Numeric tolerance for match flags and exact-fraction annotations.
    #[arg(long, global = true, default_value_t = 1e-12)]
    tol: f64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum OutputMode {
    Json,
    Table,
}

#[derive(Subcommand)]
enum Command {
    /// Single-guess leakage of the channel (depends on the prior only
    /// through its support).
    Maxl,
    /// Supremum-over-priors leakage at a given order (orders in (1, inf]).
    MaxAlphaL {
        #[arg(long)]
        alpha: String,
    },
    /// Gain-function leakage, with exactness of the bound reported.
    #[command(name = "max-g-l")]
    MaxGL {
        #[arg(long)]
        gain: String,
    },
    /// Per-outcome leakage of a single observation y.
    Pml {
        #[arg(long)]
        y: String,
        #[arg(long, default_value = "identity")]
        gain: String,
    },
    /// Per-outcome leakage averaged in the exponential domain.
    Opp {
        #[arg(long, default_value = "identity")]
        gain: String,
    },
    /// Worst-outcome per-outcome leakage.
    Realizable {
        #[arg(long, default_value = "identity")]
        gain: String,
    },
    /// Minimal expected loss with k simultaneous guesses.
    Minloss {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        alpha: String,
    },
    /// Optimal k-guess coverage vector, optionally written as a lottery
    /// over k-subsets.
    Strategy {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        decompose: bool,
    },
    /// Check a coverage vector for admissibility (no input file needed).
    Admissible {
        #[arg(long)]
        k: usize,
        /// Comma-separated coverage entries, e.g. --t 0.9,0.7,0.4
        #[arg(long, value_delimiter = ',')]
        t: Vec<f64>,
    },
    /// k-guess leakage of a joint distribution.
    LeakageK {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        alpha: String,
    },
    /// Audit whether the k-guess value collapses to the single-guess one.
    Robustness {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        alpha: String,
    },
    /// Run the randomized verification suites. A failing suite exits 3.
    Verify {
        /// One of variational, kkt, admissibility, bregman, robustness;
        /// all of them when omitted.
        #[arg(long)]
        suite: Option<String>,
    },
    /// Reproduce the five built-in worked strategies and check them against
    /// their exact fractions.
    Examples,
}

fn main() {
    let cli = Cli::parse();
    let code = match catch_unwind(AssertUnwindSafe(|| {
        run(&cli).map(|report| match emit(&cli, &report) {
            Ok(()) => report_exit_code(&report),
            // the consumer hung up (e.g. piped into head); not our failure
            Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => 0,
            Err(e) => {
                emit_error("internal", &format!("cannot write the report: {e}"));
                3
            }
        })
    })) {
        Ok(Ok(code)) => code,
        Ok(Err(err)) => {
            emit_error(err.kind(), &err.to_string());
            if err.is_internal() {
                3
            } else {
                2
            }
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic with non-string payload".into());
            emit_error("internal", &msg);
            3
        }
    };
    std::process::exit(code);
}

/// `verify` reports carry their own pass/fail; a red suite is an internal
/// invariant violation even though the command itself ran fine.
fn report_exit_code(report: &Value) -> i32 {
    match report.get("passed") {
        Some(Value::Bool(false)) => 3,
        _ => 0,
    }
}

fn emit(cli: &Cli, report: &Value) -> std::io::Result<()> {
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match cli.out {
        OutputMode::Json => {
            writeln!(
                out,
                "{}",
                serde_json::to_string_pretty(report).expect("report serializes")
            )?;
        }
        OutputMode::Table => {
            print_table(&mut out, report, cli.tol)?;
        }
    }
    out.flush()
}

fn emit_error(kind: &str, message: &str) {
    let obj = json!({ "error": { "kind": kind, "message": message } });
    eprintln!("{}", serde_json::to_string(&obj).expect("error serializes"));
}

fn run(cli: &Cli) -> Result<Value, Error> {
    let seed = resolve_seed(cli.seed)?;
    match &cli.command {
        Command::Maxl => {
            let (px, ch) = load(cli)?.prior_channel()?;
            let value = maximal_leakage(&px, &ch)?;
            Ok(json!({
                "command": "maxl",
                "measure": "single-guess leakage",
                "units": "nats",
                "value": num(value.value()),
            }))
        }
        Command::MaxAlphaL { alpha } => {
            let order = OrderAlpha::from_str(alpha)?;
            let (px, ch) = load(cli)?.prior_channel()?;
            let value = maximal_alpha_leakage(&px, &ch, order)?;
            Ok(json!({
                "command": "max-alpha-l",
                "alpha": order.to_string(),
                "units": "nats",
                "value": num(value.value()),
            }))
        }
        Command::MaxGL { gain } => {
            let g = parse_gain_spec(gain)?;
            let (px, ch) = load(cli)?.prior_channel()?;
            let report = maximal_g_leakage(&px, &ch, &g)?;
            Ok(with_command("max-g-l", leakage_report_value(&report)))
        }
        Command::Pml { y, gain } => {
            let g = parse_gain_spec(gain)?;
            let joint = load(cli)?.joint()?;
            let value = pointwise_maximal_leakage(&joint, y, &g)?;
            Ok(json!({
                "command": "pml",
                "y": y,
                "gain": g.label(),
                "units": "nats",
                "value": num(value.value()),
            }))
        }
        Command::Opp { gain } => {
            let g = parse_gain_spec(gain)?;
            let joint = load(cli)?.joint()?;
            let report = opportunistic_report(&joint, &g)?;
            Ok(with_command("opp", leakage_report_value(&report)))
        }
        Command::Realizable { gain } => {
            let g = parse_gain_spec(gain)?;
            let joint = load(cli)?.joint()?;
            let report = realizable_report(&joint, &g)?;
            Ok(with_command("realizable", leakage_report_value(&report)))
        }
        Command::Minloss { k, alpha } => {
            let order = OrderAlpha::from_str(alpha)?;
            let p = load(cli)?.prior();
            let loss = min_expected_alpha_loss(&p, *k, order)?;
            let scan = s_star(&p, *k, order)?;
            let gv = optimal_guess_vector(&p, *k, order)?;
            Ok(json!({
                "command": "minloss",
                "k": k,
                "alpha": order.to_string(),
                "loss": num(loss.value()),
                "s_star": scan.s_star,
                "case": scan.case,
                "t": float_array(gv.values()),
            }))
        }
        Command::Strategy {
            k,
            alpha,
            decompose,
        } => {
            let order = OrderAlpha::from_str(alpha)?;
            let p = load(cli)?.prior();
            let gv = optimal_guess_vector(&p, *k, order)?;
            let scan = s_star(&p, *k, order)?;
            let eval = expected_alpha_loss(&p, &gv, order)?;
            let decomposition = if *decompose {
                let d = decompose_strategy(&gv)?;
                Value::Array(
                    d.components
                        .iter()
                        .map(|c| {
                            json!({
                                "subset": c.symbols,
                                "weight": num(c.weight),
                            })
                        })
                        .collect(),
                )
            } else {
                Value::Null
            };
            Ok(json!({
                "command": "strategy",
                "k": k,
                "alpha": order.to_string(),
                "s_star": scan.s_star,
                "case": scan.case,
                "t": float_array(gv.values()),
                "coverage_sum": num(gv.values().iter().sum::<f64>()),
                "admissible": is_admissible(gv.values(), *k),
                "expected_loss": num(eval.loss),
                "decomposition": decomposition,
            }))
        }
        Command::Admissible { k, t } => {
            if t.is_empty() {
                return Err(Error::ValidationError(
                    "--t needs at least one coverage entry".into(),
                ));
            }
            Ok(json!({
                "command": "admissible",
                "k": k,
                "t": float_array(t),
                "admissible": is_admissible(t, *k),
            }))
        }
        Command::LeakageK { k, alpha } => {
            let order = OrderAlpha::from_str(alpha)?;
            let joint = load(cli)?.joint()?;
            let value = alpha_leakage_k(&joint, *k, order)?;
            Ok(json!({
                "command": "leakage-k",
                "k": k,
                "alpha": order.to_string(),
                "units": "nats",
                "value": num(value.value()),
            }))
        }
        Command::Robustness { k, alpha } => {
            let order = OrderAlpha::from_str(alpha)?;
            let joint = load(cli)?.joint()?;
            let r = check_robustness(&joint, *k, order)?;
            Ok(json!({
                "command": "robustness",
                "alpha": order.to_string(),
                "k": r.k,
                "threshold": num(r.threshold),
                "tilted_prior_max": num(r.tilted_prior_max),
                "tilted_posterior_max": num(r.tilted_posterior_max),
                "hypotheses_hold": r.hypotheses_hold,
                "k_guess": num(r.k_guess.value()),
                "one_guess": num(r.one_guess.value()),
                "gap": num(r.gap),
                "equality_expected": r.equality_expected,
            }))
        }
        Command::Verify { suite } => {
            let reports = match suite {
                Some(name) => vec![run_suite(SuiteKind::from_str(name)?, seed)?],
                None => run_all(seed)?,
            };
            let passed = reports.iter().all(SuiteReport::passed);
            Ok(json!({
                "command": "verify",
                "seed": seed,
                "passed": passed,
                "suites": reports.iter().map(suite_report_value).collect::<Vec<_>>(),
            }))
        }
        Command::Examples => examples_report(cli.tol),
    }
}

fn resolve_seed(flag: Option<u64>) -> Result<u64, Error> {
    if let Some(seed) = flag {
        return Ok(seed);
    }
    match std::env::var("LEAKSCOPE_SEED") {
        Ok(raw) => raw.trim().parse().map_err(|_| {
            Error::ValidationError(format!(
                "LEAKSCOPE_SEED must be an unsigned integer, got {raw:?}"
            ))
        }),
        Err(_) => Ok(0),
    }
}

fn load(cli: &Cli) -> Result<InputData, Error> {
    let path = cli
        .input
        .as_ref()
        .ok_or_else(|| Error::ValidationError("this command needs --input".into()))?;
    let format = match &cli.format {
        Some(f) => InputFormat::from_str(f)?,
        None => match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("csv") => InputFormat::Csv,
            _ => InputFormat::Json,
        },
    };
    load_input(path, format)
}

/// Finite floats stay JSON numbers (serde_json prints the shortest string
/// that parses back to the same bits); infinities become strings.
fn num(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else {
        json!(v.to_string())
    }
}

fn float_array(values: &[f64]) -> Value {
    Value::Array(values.iter().map(|&v| num(v)).collect())
}

fn with_command(name: &str, mut report: Value) -> Value {
    report
        .as_object_mut()
        .expect("leakage reports are objects")
        .insert("command".into(), json!(name));
    report
}

fn leakage_report_value(r: &LeakageReport) -> Value {
    let per_y = r.per_y.as_ref().map(|entries| {
        entries
            .iter()
            .map(|o| {
                json!({
                    "y": o.symbol,
                    "weight": num(o.weight),
                    "value": num(o.value.value()),
                })
            })
            .collect::<Vec<_>>()
    });
    json!({
        "measure": r.measure,
        "order": r.order.map(|o| o.to_string()),
        "gain": r.gain,
        "units": "nats",
        "value": num(r.value.value()),
        "combine": r.combine.as_ref().map(|c| match c {
            PerYCombine::LogAvgExp => "log-avg-exp",
            PerYCombine::Max => "max",
        }),
        "per_y": per_y,
        "upper_bound_only": r.upper_bound_only,
        "notes": r.notes,
    })
}

fn suite_report_value(r: &SuiteReport) -> Value {
    json!({
        "suite": r.suite.to_string(),
        "seed": r.seed,
        "passed": r.passed(),
        "checks": r.checks.iter().map(|c| {
            json!({ "name": c.name, "passed": c.passed, "detail": c.detail })
        }).collect::<Vec<_>>(),
    })
}

fn examples_report(tol: f64) -> Result<Value, Error> {
    let mut cases = Vec::new();
    let mut all_exact = true;
    let mut all_close = true;
    for case in worked_cases() {
        let (exact_s, exact_t) = exact_guess_vector_unsorted(&case.weights, case.k)?;
        let exact_match = exact_s == case.expected_s_star && exact_t == case.expected_t;
        all_exact &= exact_match;

        let prior = Pmf::new(
            Alphabet::indexed("x", case.prior.len())?,
            case.prior.clone(),
        )?;
        let gv = optimal_guess_vector(&prior, case.k, OrderAlpha::new(case.order)?)?;
        let float_err = gv
            .values()
            .iter()
            .zip(case.expected_t.iter())
            .map(|(got, want)| (got - q_to_f64(want)).abs())
            .fold(0.0f64, f64::max);
        let within = float_err <= tol;
        all_close &= within;

        cases.push(json!({
            "label": case.label,
            "k": case.k,
            "order": num(case.order),
            "prior": float_array(&case.prior),
            "expected_s_star": case.expected_s_star,
            "expected_t": case.expected_t.iter().map(|q| q.to_string()).collect::<Vec<_>>(),
            "exact_s_star": exact_s,
            "exact_fraction_match": exact_match,
            "float_t": float_array(gv.values()),
            "float_max_abs_error": num(float_err),
            "float_within_tol": within,
        }));
    }
    Ok(json!({
        "command": "examples",
        "tol": num(tol),
        "all_exact": all_exact,
        "all_float_within_tol": all_close,
        "passed": all_exact && all_close,
        "cases": cases,
    }))
}

// ---- table rendering ----------------------------------------------------

fn print_table(out: &mut dyn Write, report: &Value, tol: f64) -> std::io::Result<()> {
    match report {
        Value::Object(map) => {
            for (key, value) in map {
                print_entry(out, key, value, 0, tol)?;
            }
            Ok(())
        }
        other => writeln!(out, "{}", render_scalar(other, tol)),
    }
}

fn print_entry(
    out: &mut dyn Write,
    key: &str,
    value: &Value,
    indent: usize,
    tol: f64,
) -> std::io::Result<()> {
    let pad = " ".repeat(indent);
    match value {
        Value::Array(items) if items.iter().all(|v| !v.is_object() && !v.is_array()) => {
            let joined: Vec<String> = items.iter().map(|v| render_scalar(v, tol)).collect();
            writeln!(out, "{pad}{key}: {}", joined.join(", "))
        }
        Value::Array(items) => {
            writeln!(out, "{pad}{key}:")?;
            for item in items {
                match item {
                    Value::Object(map) => {
                        let mut first = true;
                        for (k, v) in map {
                            if first {
                                print_entry(out, &format!("- {k}"), v, indent + 2, tol)?;
                                first = false;
                            } else {
                                print_entry(out, k, v, indent + 4, tol)?;
                            }
                        }
                    }
                    other => writeln!(out, "{pad}  - {}", render_scalar(other, tol))?,
                }
            }
            Ok(())
        }
        Value::Object(map) => {
            writeln!(out, "{pad}{key}:")?;
            for (k, v) in map {
                print_entry(out, k, v, indent + 2, tol)?;
            }
            Ok(())
        }
        scalar => writeln!(out, "{pad}{key}: {}", render_scalar(scalar, tol)),
    }
}

fn render_scalar(value: &Value, tol: f64) -> String {
    match value {
        Value::Null => "-".into(),
        Value::Bool(b) => b.to_string(),
        Value::String(s) => s.clone(),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                return i.to_string();
            }
            if let Some(u) = n.as_u64() {
                return u.to_string();
            }
            let v = n.as_f64().expect("number is f64");
            match fraction_note(v, tol) {
                Some(frac) => format!("{} (= {frac})", sig12(v)),
                None => sig12(v),
            }
        }
        other => other.to_string(),
    }
}

/// 12 significant digits, plain decimal for moderate magnitudes.
fn sig12(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let exp = v.abs().log10().floor() as i32;
    if !(-4..=12).contains(&exp) {
        return format!("{v:.11e}");
    }
    let decimals = (11 - exp).max(0) as usize;
    format!("{v:.decimals$}")
}

/// Denominator cap for fraction recovery. Small enough that a generic
/// irrational cannot sneak under the tolerance (best rational error at
/// denominator q is ~1/q^2, i.e. ~1e-8 here, far above 1e-12).
const FRACTION_DENOM_CAP: i64 = 10_000;

/// Recovers p/q from a float by continued fractions when a small exact
/// fraction reproduces it within tol; used for table annotations only.
fn fraction_note(v: f64, tol: f64) -> Option<String> {
    if !v.is_finite() {
        return None;
    }
    let tol = tol.max(1e-15);
    let target = v.abs();
    let close = |num: i64, den: i64| -> bool {
        (num as f64 / den as f64 - target).abs() <= tol * target.max(1.0)
    };
    let (mut p0, mut q0) = (1i64, 0i64);
    let (mut p1, mut q1) = (target.floor() as i64, 1i64);
    let mut frac = target - target.floor();
    for _ in 0..64 {
        if close(p1, q1) {
            break;
        }
        if frac < 1e-18 {
            return None;
        }
        let r = 1.0 / frac;
        let a = r.floor();
        frac = r - a;
        if a >= FRACTION_DENOM_CAP as f64 {
            return None;
        }
        let p2 = (a as i64).checked_mul(p1)?.checked_add(p0)?;
        let q2 = (a as i64).checked_mul(q1)?.checked_add(q0)?;
        if q2 > FRACTION_DENOM_CAP {
            return None;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
    }
    if !close(p1, q1) || q1 == 1 {
        return None;
    }
    let sign = if v < 0.0 { "-" } else { "" };
    Some(format!("{sign}{p1}/{q1}"))
}
