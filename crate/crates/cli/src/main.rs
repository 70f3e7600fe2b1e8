use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use webcurv::algebra::parse::parse_rational;
use webcurv::algebra::{Matrix, Rational, Scalar};
use webcurv::checks::selftest;
use webcurv::connection::{blaschke_d3, check_concentration, evaluate_at, ConcentrationReport};
use webcurv::pipeline::{compute, jet_curvature_at_points, Fault, PipelineOptions};
use webcurv::web::{parse_web_spec, validate_web};
use webcurv::Error;

#[derive(Parser)]
#[command(name = "webcurv", version, about = "Curvature of the abelian-relation connection of planar webs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the curvature matrix of a web specification.
    Compute(ComputeArgs),
    /// Run the built-in invariant corpus.
    Selftest {
        #[arg(long, value_enum, hide = true)]
        inject_fault: Option<FaultArg>,
    },
}

#[derive(Args)]
struct ComputeArgs {
    /// Web specification (JSON).
    input: PathBuf,
    /// Evaluation point, e.g. `x=1/2,y=-3`. Repeatable.
    #[arg(long = "at", value_parser = parse_point)]
    at: Vec<(Rational, Rational)>,
    /// Evaluate with truncated Taylor series instead of the symbolic result.
    #[arg(long)]
    jet: bool,
    /// Only evaluate at the given points; skip the symbolic curvature.
    #[arg(long)]
    points_only: bool,
    /// Emit the d = 3 closed form.
    #[arg(long)]
    d3_blaschke: bool,
    /// Exit with status 4 if curvature is not concentrated on the last row.
    #[arg(long)]
    check_concentration: bool,
    /// Write the document here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FaultArg {
    NegateH,
}

const EXIT_SELFTEST: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_POLE: u8 = 3;
const EXIT_CONCENTRATION: u8 = 4;

fn parse_point(s: &str) -> Result<(Rational, Rational), String> {
    let mut x = None;
    let mut y = None;
    for part in s.split(',') {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| format!("expected `x=<rational>,y=<rational>`, got `{s}`"))?;
        let v = parse_rational(v.trim()).map_err(|e| e.to_string())?;
        match k.trim() {
            "x" => x = Some(v),
            "y" => y = Some(v),
            other => return Err(format!("unknown coordinate `{other}`")),
        }
    }
    match (x, y) {
        (Some(x), Some(y)) => Ok((x, y)),
        _ => Err(format!("point `{s}` needs both x and y")),
    }
}

#[derive(Serialize)]
struct Evaluation {
    point: [String; 2],
    matrix: Vec<Vec<String>>,
}

#[derive(Serialize)]
struct OutputDocument {
    d: usize,
    m: usize,
    i0: Option<usize>,
    seed_matrix: Option<Vec<Vec<String>>>,
    curvature: Option<Vec<Vec<String>>>,
    concentration: Option<ConcentrationReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    evaluations: Option<Vec<Evaluation>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    blaschke: Option<String>,
    timing_ms: BTreeMap<String, u128>,
}

fn strings<S: Scalar + ToString>(m: &Matrix<S>) -> Vec<Vec<String>> {
    m.to_rows()
        .iter()
        .map(|row| row.iter().map(ToString::to_string).collect())
        .collect()
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::PoleAtPoint { .. } | Error::JetDivisionByZero => EXIT_POLE,
            _ => EXIT_INPUT,
        };
        Failure { code, message: e.to_string() }
    }
}

fn run_compute(args: &ComputeArgs) -> Result<u8, Failure> {
    let text = fs::read_to_string(&args.input).map_err(|e| Failure {
        code: EXIT_INPUT,
        message: format!("{}: {e}", args.input.display()),
    })?;
    let spec = parse_web_spec(&text)?;
    let report = validate_web(&spec)?;
    for msg in &report.messages {
        eprintln!("warning: {msg}");
    }
    if !report.discriminant_nonzero {
        return Err(Failure {
            code: EXIT_INPUT,
            message: "F and F_p have a common factor; the slopes are not distinct".into(),
        });
    }

    let mut doc = OutputDocument {
        d: spec.d,
        m: spec.m(),
        i0: None,
        seed_matrix: None,
        curvature: None,
        concentration: None,
        evaluations: None,
        blaschke: None,
        timing_ms: BTreeMap::new(),
    };
    let mut concentrated = true;
    let mut symbolic = None;
    if !args.points_only {
        let c = compute(&spec, &PipelineOptions::default())?;
        let conc = c.concentration();
        concentrated &= conc.ok;
        doc.i0 = Some(c.i0);
        doc.seed_matrix = Some(strings(&c.m));
        doc.curvature = Some(strings(&c.kk));
        doc.concentration = Some(conc);
        doc.timing_ms = c.timing_ms.clone();
        if args.d3_blaschke {
            doc.blaschke = Some(blaschke_d3(&c.m)?.to_string());
        }
        symbolic = Some(c);
    } else if args.d3_blaschke {
        return Err(Failure { code: EXIT_INPUT, message: "--d3-blaschke needs the symbolic computation".into() });
    }

    if !args.at.is_empty() {
        let start = Instant::now();
        let values: Vec<Matrix<Rational>> = match &symbolic {
            Some(c) if !args.jet => args
                .at
                .iter()
                .map(|(x, y)| evaluate_at(&c.kk, x, y))
                .collect::<webcurv::Result<_>>()?,
            _ => jet_curvature_at_points(&spec, &args.at)
                .into_iter()
                .collect::<webcurv::Result<_>>()?,
        };
        doc.timing_ms.insert("evaluation".into(), start.elapsed().as_millis());
        if symbolic.is_none() {
            let mut violations = Vec::new();
            for v in &values {
                for cell in check_concentration(v).violations {
                    if !violations.contains(&cell) {
                        violations.push(cell);
                    }
                }
            }
            violations.sort_unstable();
            concentrated &= violations.is_empty();
            doc.concentration = Some(ConcentrationReport { ok: violations.is_empty(), violations });
        }
        doc.evaluations = Some(
            args.at
                .iter()
                .zip(&values)
                .map(|((x, y), v)| Evaluation { point: [x.to_string(), y.to_string()], matrix: strings(v) })
                .collect(),
        );
    }

    let json = serde_json::to_string_pretty(&doc).expect("serializable document");
    match &args.output {
        Some(path) => fs::write(path, json + "\n").map_err(|e| Failure {
            code: EXIT_INPUT,
            message: format!("{}: {e}", path.display()),
        })?,
        None => {
            let mut out = std::io::stdout().lock();
            if let Err(e) = writeln!(out, "{json}") {
                if e.kind() != std::io::ErrorKind::BrokenPipe {
                    return Err(Failure { code: EXIT_INPUT, message: format!("stdout: {e}") });
                }
            }
        }
    }
    if args.check_concentration && !concentrated {
        eprintln!("curvature is not concentrated on the last row");
        return Ok(EXIT_CONCENTRATION);
    }
    Ok(0)
}

fn run_selftest(fault: Option<FaultArg>) -> u8 {
    let fault = fault.map(|f| match f {
        FaultArg::NegateH => Fault::NegateH,
    });
    let report = selftest(fault);
    let width = report.cases.iter().map(|c| c.name.len()).max().unwrap_or(0);
    for c in &report.cases {
        let status = if c.passed { "PASS" } else { "FAIL" };
        println!("{status}  {:width$}  {}", c.name, c.detail);
    }
    if report.passed {
        println!("selftest: all {} cases passed", report.cases.len());
        0
    } else {
        let failed = report.cases.iter().filter(|c| !c.passed).count();
        println!("selftest: {failed} of {} cases failed", report.cases.len());
        EXIT_SELFTEST
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match &cli.command {
        Command::Compute(args) => match run_compute(args) {
            Ok(code) => code,
            Err(f) => {
                eprintln!("error: {}", f.message);
                f.code
            }
        },
        Command::Selftest { inject_fault } => run_selftest(*inject_fault),
    };
    ExitCode::from(code)
}
