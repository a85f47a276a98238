//! Command-line surface for the wallcross engine.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or input error,
//! 3 combinatorial cap exceeded. All output is deterministic given the
//! flags; JSON is canonical (UTF-8, sorted keys, big integers as decimal
//! strings, newline-terminated).

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

use wallcross::action::{self, SignMatrix};
use wallcross::closedform;
use wallcross::engine::{self, PoincareCrossing, Trace};
use wallcross::poly::Polynomial;
use wallcross::verify;
use wallcross::xray;
use wallcross::Error;

const EXIT_VERIFY_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_CAP: u8 = 3;

#[derive(Parser)]
#[command(
    name = "wallcross",
    about = "Exact wall-crossing invariants of abelian quotients of projective space",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum RecordFormat {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum PathKind {
    Canonical,
    Random,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form Poincaré polynomial, Betti numbers, Euler characteristic
    /// and quotient dimension for rank r
    Poincare {
        #[arg(short, long = "rank")]
        r: u32,
        #[arg(long, value_enum, default_value = "text")]
        format: RecordFormat,
    },
    /// Wall-by-wall recursion trace along an ascending face path (r <= 8)
    Trace {
        #[arg(short, long = "rank")]
        r: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "canonical")]
        path: PathKind,
    },
    /// Emit the X-ray: faces, strata, weights, moment vertices and the
    /// parallelism report (full data r <= 4, faces only up to r = 8)
    Xray {
        #[arg(short, long = "rank")]
        r: u32,
        #[arg(long)]
        faces_only: bool,
        #[arg(long, default_value = "json")]
        emit: String,
    },
    /// Evaluate the wall-crossing function C(b, f) and its Euler value
    Cbf {
        #[arg(long)]
        b: u32,
        #[arg(long)]
        f: u32,
    },
    /// Run the verification suite against the committed reference table
    Verify {
        #[arg(long, default_value_t = 8)]
        max_r: u32,
        #[arg(long, default_value_t = 50)]
        trials: u32,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value = "data/paper_table.json")]
        table: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: ReportFormat,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn cap(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_CAP,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::CapExceeded { .. } => EXIT_CAP,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn require_rank(r: u32) -> Result<(), Failure> {
    if r == 0 {
        Err(Failure::usage("rank must be at least 1"))
    } else {
        Ok(())
    }
}

/// Print a line, dying quietly with the conventional SIGPIPE status when
/// the reader has gone away (e.g. piping into `head`).
fn emit(text: impl std::fmt::Display) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    if writeln!(out, "{text}").and_then(|()| out.flush()).is_err() {
        std::process::exit(141);
    }
}

/// Canonical JSON: serde_json maps are sorted, big integers arrive as
/// decimal strings, output is pretty-printed and newline-terminated.
fn print_json(value: &Value) {
    emit(serde_json::to_string_pretty(value).expect("JSON serialization cannot fail"));
}

fn bigint_strings(xs: &[BigInt]) -> Vec<String> {
    xs.iter().map(BigInt::to_string).collect()
}

fn cmd_poincare(r: u32, format: RecordFormat) -> Result<(), Failure> {
    require_rank(r)?;
    let product = closedform::poincare_product(r);
    let euler = closedform::euler_char(r);
    let dim = closedform::quotient_dim(r);
    match format {
        RecordFormat::Text => emit(&product),
        RecordFormat::Json => print_json(&json!({
            "betti": bigint_strings(product.coeffs()),
            "dim": dim,
            "euler": euler.to_string(),
            "poincare": product.to_string(),
            "r": r,
        })),
        RecordFormat::Csv => {
            let headers: Vec<String> = ["r", "dim", "euler"]
                .into_iter()
                .map(String::from)
                .chain((0..product.coeffs().len()).map(|k| format!("b{}", 2 * k)))
                .collect();
            let values: Vec<String> = [r.to_string(), dim.to_string(), euler.to_string()]
                .into_iter()
                .chain(product.coeffs().iter().map(BigInt::to_string))
                .collect();
            emit(headers.join(","));
            emit(values.join(","));
        }
    }
    Ok(())
}

fn trace_to_json(trace: &Trace<Polynomial>) -> Value {
    Value::Array(
        trace
            .steps
            .iter()
            .map(|s| {
                json!({
                    "b": s.b,
                    "f": s.f,
                    "factor": s.factor.to_string(),
                    "running": s.running.to_string(),
                    "wall_dim": s.wall.dim(),
                    "wall_fixed_signs": s.wall.pattern(),
                })
            })
            .collect(),
    )
}

fn cmd_trace(r: u32, seed: u64, kind: PathKind) -> Result<(), Failure> {
    require_rank(r)?;
    if r > 8 {
        return Err(Failure::cap(format!("trace supports r <= 8, got r = {r}")));
    }
    let path = match kind {
        PathKind::Canonical => engine::canonical_path(r),
        PathKind::Random => engine::random_path_seeded(r, seed),
    };
    let (_, trace) = engine::walk(r, &path, &PoincareCrossing)?;
    print_json(&trace_to_json(&trace));
    Ok(())
}

fn rationals_to_strings(v: &[num_rational::BigRational]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn cmd_xray(r: u32, faces_only: bool, emit: &str) -> Result<(), Failure> {
    require_rank(r)?;
    if emit != "json" {
        return Err(Failure::usage(format!(
            "unsupported emit format {emit:?}; only \"json\" is available"
        )));
    }
    let cap = if faces_only { 8 } else { xray::STRATA_MAX_RANK };
    if r > cap {
        let hint = if faces_only {
            String::new()
        } else {
            " (use --faces-only for r <= 8)".to_string()
        };
        return Err(Failure::cap(format!(
            "xray supports r <= {cap}{hint}, got r = {r}"
        )));
    }
    let faces: Vec<Value> = xray::enumerate_faces(r)
        .iter()
        .map(|face| json!({"dim": face.dim(), "pattern": face.pattern()}))
        .collect();
    if faces_only {
        print_json(&json!({"faces": faces, "r": r}));
        return Ok(());
    }

    let a = SignMatrix::build(r)?;
    let points = action::fixed_points(&a)?;
    let fixed_points: Vec<Value> = points
        .iter()
        .map(|p| {
            let weights: Vec<Value> = action::isotropy_weights(&a, p)
                .iter()
                .map(|w| json!(w.entries()))
                .collect();
            let signs: String = p
                .signs
                .iter()
                .map(|&s| if s == 1 { '+' } else { '-' })
                .collect();
            json!({"index": p.index, "signs": signs, "weights": weights})
        })
        .collect();

    let moment_vertices: Vec<Value> = (0..a.num_columns())
        .map(|j| {
            let mut amps = vec![num_rational::BigRational::from(BigInt::from(0)); a.num_columns()];
            amps[j] = num_rational::BigRational::from(BigInt::from(1));
            let mu = action::moment_of_state(&a, &amps).expect("indicator amplitudes are valid");
            json!(rationals_to_strings(&mu))
        })
        .collect();

    let strata: Vec<Value> = xray::enumerate_strata(&a)?
        .iter()
        .map(|s| {
            let mut entry = json!({
                "boundary": xray::is_boundary_stratum(s, &a),
                "columns": s.columns,
                "moment_dim": s.moment_dim,
                "moment_vertices": s.moment_vertices.iter()
                    .map(|v| json!(rationals_to_strings(v)))
                    .collect::<Vec<Value>>(),
                "stab_dim": s.stab_dim,
            });
            if let Some(normal) = xray::wall_normal(s, &a) {
                let (b, f) = xray::interior_wall_signs(s, &normal, &a)
                    .expect("wall normal annihilates its own wall");
                entry["wall_signs"] = json!({
                    "b": b,
                    "balanced": b == f,
                    "f": f,
                    "normal": rationals_to_strings(&normal),
                });
            }
            entry
        })
        .collect();

    let gkm = action::gkm_report(&a)?;
    let parallel_pairs: Vec<Value> = gkm
        .per_fixed_point
        .iter()
        .map(|d| {
            json!(d
                .parallel_pairs
                .iter()
                .map(|&(x, y)| json!([x, y]))
                .collect::<Vec<Value>>())
        })
        .collect();

    print_json(&json!({
        "faces": faces,
        "fixed_points": fixed_points,
        "gkm": {
            "max_direction_multiplicity": gkm.max_direction_multiplicity,
            "pairwise_independent_everywhere": gkm.pairwise_independent_everywhere,
            "parallel_pairs_per_point": parallel_pairs,
        },
        "moment_vertices": moment_vertices,
        "r": r,
        "strata": strata,
    }));
    Ok(())
}

fn cmd_cbf(b: u32, f: u32) -> Result<(), Failure> {
    let poly = engine::poincare_crossing(b as usize, f as usize);
    let euler = engine::euler_crossing(b as usize, f as usize);
    emit(format!("{poly} ; euler: {euler}"));
    Ok(())
}

fn cmd_verify(
    max_r: u32,
    trials: u32,
    seed: u64,
    table: &Path,
    format: ReportFormat,
) -> Result<(), Failure> {
    if max_r == 0 {
        return Err(Failure::usage("--max-r must be at least 1"));
    }
    let rows = verify::load_reference_table(table)?;
    let report = verify::check_all(&rows, max_r, trials, seed);
    match format {
        ReportFormat::Text => {
            for c in &report.checks {
                let status = if c.passed { "PASS" } else { "FAIL" };
                emit(format!("check {} {}: {} — {}", c.id, c.name, status, c.detail));
            }
            emit(format!(
                "overall: {}",
                if report.all_passed() { "PASS" } else { "FAIL" }
            ));
        }
        ReportFormat::Json => {
            let checks: Vec<Value> = report
                .checks
                .iter()
                .map(|c| {
                    json!({
                        "detail": c.detail,
                        "id": c.id,
                        "name": c.name,
                        "passed": c.passed,
                    })
                })
                .collect();
            print_json(&json!({"checks": checks, "passed": report.all_passed()}));
        }
    }
    if report.all_passed() {
        Ok(())
    } else {
        Err(Failure {
            code: EXIT_VERIFY_FAILED,
            message: String::new(),
        })
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Poincare { r, format } => cmd_poincare(r, format),
        Command::Trace { r, seed, path } => cmd_trace(r, seed, path),
        Command::Xray { r, faces_only, emit } => cmd_xray(r, faces_only, &emit),
        Command::Cbf { b, f } => cmd_cbf(b, f),
        Command::Verify {
            max_r,
            trials,
            seed,
            table,
            format,
        } => cmd_verify(max_r, trials, seed, &table, format),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            if !failure.message.is_empty() {
                eprintln!("error: {}", failure.message);
            }
            ExitCode::from(failure.code)
        }
    }
}
