mod error;
mod eval;
mod field;
mod parse;

use std::process::ExitCode;

use addilog::chow::RatFunc;
use addilog::cycle::{rho_f, ParamCycle};
use addilog::verify::{run_suite, SuiteConfig, SUITES};
use addilog::CoeffField;
use clap::{Parser, Subcommand};
use serde_json::{json, Map, Value};

use error::CliError;
use eval::{needs_z, render, Evaluator};

#[derive(Parser)]
#[command(name = "addilog", version, about = "Exact additive and infinitesimal dilogarithms")]
struct Cli {
    /// Print a table instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate an expression exactly.
    Eval {
        expr: String,
        #[arg(long, default_value = "Q")]
        field: String,
        /// Series are taken modulo t^m (default 6, or p in characteristic p < 6).
        #[arg(long)]
        modulus: Option<usize>,
    },
    /// The Chow dilogarithm of three rational functions in z.
    Rho {
        f: String,
        g: String,
        h: String,
        #[arg(long, default_value_t = addilog::chow::DEFAULT_PRECISION)]
        precision: usize,
    },
    /// The infinitesimal invariant of a parametrized cycle read from a file.
    Cycle { file: String },
    /// Run a named verification suite.
    Verify {
        suite: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        field: Option<String>,
    },
    /// List verification suites.
    Suites,
}

fn ratfunc_arg(src: &str, precision: usize) -> Result<RatFunc, CliError> {
    let e = parse::parse(src)?;
    let ev = Evaluator::new(src, &CoeffField::rationals(), precision, true)?;
    Ok(RatFunc::new(ev.eval(&e)?)?)
}

fn eval_cmd(expr: &str, field: &str, modulus: Option<usize>) -> Result<Value, CliError> {
    let k = field::parse_field(field)?;
    let m = modulus.unwrap_or(match k.characteristic() {
        0 => 6,
        p => p.min(6) as usize,
    });
    let e = parse::parse(expr)?;
    let ev = Evaluator::new(expr, &k, m, needs_z(&e))?;
    let v = ev.eval(&e)?;
    Ok(json!({
        "schema": 1,
        "command": "eval",
        "expr": e.to_string(),
        "field": ev.field().to_string(),
        "modulus": m,
        "value": render(&v),
    }))
}

fn rho_cmd(f: &str, g: &str, h: &str, precision: usize) -> Result<Value, CliError> {
    let p = [ratfunc_arg(f, precision)?, ratfunc_arg(g, precision)?, ratfunc_arg(h, precision)?];
    let v = addilog::chow::chow_rho(&p[0], &p[1], &p[2], &addilog::chow::UniformizerSystem::default())?;
    Ok(json!({
        "schema": 1,
        "command": "rho",
        "args": [p[0].to_string(), p[1].to_string(), p[2].to_string()],
        "precision": precision,
        "value": v.to_string(),
    }))
}

/// Shifts a syntax error inside one file line to the file's coordinates.
fn at_line(e: CliError, line: usize) -> CliError {
    match e {
        CliError::Syntax { column, message, .. } => CliError::Syntax { line, column, message },
        CliError::UnknownIdentifier { name, column, .. } => CliError::UnknownIdentifier { name, line, column },
        e => e,
    }
}

fn cycle_cmd(path: &str) -> Result<Value, CliError> {
    let text = std::fs::read_to_string(path)?;
    let mut precision = None;
    let mut coords = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(v) = line.strip_prefix("precision:") {
            let n = v.trim().parse().map_err(|_| CliError::Usage(format!("line {}: bad precision '{}'", i + 1, v.trim())))?;
            precision = Some(n);
            continue;
        }
        let n = precision.ok_or_else(|| CliError::Usage("the precision: header must come first".into()))?;
        coords.push(ratfunc_arg(line, n).map_err(|e| at_line(e, i + 1))?);
    }
    let n = precision.ok_or_else(|| CliError::Usage("missing precision: header".into()))?;
    let [y1, y2, y3]: [RatFunc; 3] =
        coords.try_into().map_err(|v: Vec<_>| CliError::Usage(format!("expected 3 coordinates, found {}", v.len())))?;
    let shown = [y1.to_string(), y2.to_string(), y3.to_string()];
    let z = ParamCycle::new(y1, y2, y3)?;
    Ok(json!({
        "schema": 1,
        "command": "cycle",
        "precision": n,
        "coordinates": shown,
        "value": rho_f(&z)?.to_string(),
    }))
}

fn verify_cmd(suite: &str, trials: usize, seed: u64, field: Option<&str>) -> Result<(Value, bool), CliError> {
    let field = field.map(field::parse_field).transpose()?;
    let report = run_suite(suite, &SuiteConfig { trials, seed, field })?;
    let passed = report.passed();
    let mut v = serde_json::to_value(&report).expect("report serializes");
    v["schema"] = json!(1);
    v["command"] = json!("verify");
    Ok((v, passed))
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(a) if a.iter().all(|x| !x.is_object()) => a.iter().map(cell).collect::<Vec<_>>().join(", "),
        other => other.to_string(),
    }
}

fn table(v: &Map<String, Value>) -> String {
    let width = v.keys().map(|k| k.chars().count()).max().unwrap_or(0);
    let mut out = String::new();
    for (k, x) in v {
        if k == "schema" || k == "failures" {
            continue;
        }
        out.push_str(&format!("{k:width$}  {}\n", cell(x)));
    }
    if let Some(Value::Array(fs)) = v.get("failures") {
        out.push_str(&format!("{:width$}  {}\n", "failures", fs.len()));
        for f in fs {
            out.push_str(&format!(
                "  trial {}: {}\n    expected {}\n    actual   {}\n",
                f["trial"],
                cell(&f["input"]),
                cell(&f["expected"]),
                cell(&f["actual"])
            ));
        }
    }
    out
}

fn emit(v: &Value, pretty: bool) {
    match v {
        Value::Object(m) if pretty => print!("{}", table(m)),
        _ => println!("{v}"),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Eval { expr, field, modulus } => eval_cmd(expr, field, *modulus).map(|v| (v, true)),
        Command::Rho { f, g, h, precision } => rho_cmd(f, g, h, *precision).map(|v| (v, true)),
        Command::Cycle { file } => cycle_cmd(file).map(|v| (v, true)),
        Command::Verify { suite, trials, seed, field } => verify_cmd(suite, *trials, *seed, field.as_deref()),
        Command::Suites => Ok((json!({ "schema": 1, "suites": SUITES }), true)),
    };
    match result {
        Ok((v, ok)) => {
            emit(&v, cli.pretty);
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            emit(&e.to_json(), false);
            ExitCode::from(2)
        }
    }
}
