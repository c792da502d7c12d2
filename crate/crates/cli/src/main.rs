use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::builder::RangedU64ValueParser;
use clap::{Parser, Subcommand, ValueEnum};
use gridtau_core::complex::complex_dump;
use gridtau_core::exec::configure_threads;
use gridtau_core::verify::{identity_suite, VerifyConfig};
use gridtau_core::{
    Computation, Error, Execution, GridDiagram, GridMove, InvariantReport, Options, RawDiagram,
    TFunction, DEFAULT_MAX_GRID,
};

#[derive(Parser)]
#[command(
    name = "gridtau",
    version,
    about = "Filtered grid homology, tau and related bounds"
)]
struct Cli {
    /// Largest grid size the homology pipeline will accept.
    #[arg(long, global = true, env = "GRIDTAU_MAX_GRID", default_value_t = DEFAULT_MAX_GRID,
          value_parser = RangedU64ValueParser::<usize>::new().range(1..))]
    max_grid: usize,
    /// Worker threads; defaults to all cores.
    #[arg(long, global = true, value_parser = RangedU64ValueParser::<usize>::new().range(1..))]
    threads: Option<usize>,
    /// Seed for randomized verification.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Subcommand)]
enum Command {
    /// Compute T, tau, tau*, the tau-set and the derived bounds.
    Compute {
        path: PathBuf,
        /// Signature of the link, if it is known to be quasi-alternating.
        #[arg(long, allow_negative_numbers = true)]
        sigma: Option<i64>,
        /// Also write the graded complex to this file.
        #[arg(long)]
        dump_complex: Option<PathBuf>,
    },
    /// Write a generated diagram.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Apply an operation to a diagram file.
    Transform {
        #[command(subcommand)]
        op: TransformOp,
    },
    /// Run the identity suite on a diagram.
    Verify {
        path: PathBuf,
        /// Number of random legal moves.
        #[arg(long, default_value_t = 50)]
        moves: usize,
        /// Golden T file the diagram must reproduce.
        #[arg(long)]
        expect: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum GenKind {
    /// Torus link T(q, p) on a (q + p)-grid.
    Torus { q: usize, p: usize },
    /// The n-component unlink.
    Unlink { n: usize },
}

#[derive(Subcommand)]
enum TransformOp {
    Mirror {
        path: PathBuf,
    },
    Reverse {
        path: PathBuf,
    },
    Union {
        path: PathBuf,
        other: PathBuf,
    },
    Connectsum {
        path: PathBuf,
        other: PathBuf,
    },
    /// Apply a move such as "comm col 2" or "stab SE 0 0".
    Move {
        spec: String,
        path: PathBuf,
    },
}

enum Failure {
    Verification(String),
    Input(String),
    Cap(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Verification(_) => 1,
            Failure::Input(_) => 2,
            Failure::Cap(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Verification(m) | Failure::Input(m) | Failure::Cap(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            e if e.is_resource_cap() => Failure::Cap(e.to_string()),
            Error::Grid(_) | Error::Grading(_) => Failure::Input(e.to_string()),
            e => Failure::Verification(e.to_string()),
        }
    }
}

fn read_diagram(path: &Path) -> Result<GridDiagram, Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let raw: RawDiagram = serde_json::from_str(&text)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    GridDiagram::validate(raw).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn diagram_json(d: &GridDiagram) -> String {
    let mut s = serde_json::to_string(&d.to_raw()).expect("diagram serializes");
    s.push('\n');
    s
}

fn emit(output: Option<&Path>, text: &str) -> Result<(), Failure> {
    match output {
        Some(path) => {
            fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json serializes");
    s.push('\n');
    s
}

fn run(cli: Cli) -> Result<(), Failure> {
    if let Some(k) = cli.threads {
        configure_threads(k);
    }
    let options = Options {
        max_grid: cli.max_grid,
        execution: Execution::default(),
    };
    let out = cli.output.as_deref();
    match cli.command {
        Command::Compute {
            path,
            sigma,
            dump_complex,
        } => {
            let d = read_diagram(&path)?;
            let c = Computation::run(&d, &options)?;
            if let Some(dump) = dump_complex {
                emit(Some(&dump), &pretty(&complex_dump(&c.basis, &c.boundary)))?;
            }
            let report = InvariantReport::from_t(&d, c.t, sigma)?;
            let text = match cli.format {
                Format::Json => pretty(&report.to_json()),
                Format::Table => report.to_table(),
            };
            emit(out, &text)
        }
        Command::Gen { kind } => {
            let d = match kind {
                GenKind::Torus { q, p } => GridDiagram::torus(q, p),
                GenKind::Unlink { n } => GridDiagram::unlink(n),
            }
            .map_err(|e| Failure::Input(e.to_string()))?;
            emit(out, &diagram_json(&d))
        }
        Command::Transform { op } => {
            let input = |e: gridtau_core::grid::GridError| Failure::Input(e.to_string());
            let d = match op {
                TransformOp::Mirror { path } => read_diagram(&path)?.mirror(),
                TransformOp::Reverse { path } => read_diagram(&path)?.reverse(),
                TransformOp::Union { path, other } => {
                    read_diagram(&path)?.disjoint_union(&read_diagram(&other)?)
                }
                TransformOp::Connectsum { path, other } => read_diagram(&path)?
                    .connect_sum(&read_diagram(&other)?)
                    .map_err(input)?,
                TransformOp::Move { spec, path } => {
                    let m = GridMove::parse(&spec).map_err(Failure::Input)?;
                    read_diagram(&path)?.apply_move(&m).map_err(input)?
                }
            };
            emit(out, &diagram_json(&d))
        }
        Command::Verify {
            path,
            moves,
            expect,
        } => {
            let d = read_diagram(&path)?;
            let expected = match expect {
                None => None,
                Some(p) => {
                    let text = fs::read_to_string(&p)
                        .map_err(|e| Failure::Input(format!("{}: {e}", p.display())))?;
                    Some(
                        TFunction::from_json_str(&text)
                            .map_err(|e| Failure::Input(format!("{}: {e}", p.display())))?,
                    )
                }
            };
            let config = VerifyConfig {
                options,
                seed: cli.seed,
                moves,
                expected,
            };
            let results = identity_suite(&d, &config)?;
            let all = results.iter().all(|r| r.passed);
            let text = match cli.format {
                Format::Json => pretty(&serde_json::json!({
                    "passed": all,
                    "checks": results
                        .iter()
                        .map(|r| serde_json::json!({
                            "name": r.name,
                            "passed": r.passed,
                            "detail": r.detail,
                        }))
                        .collect::<Vec<_>>(),
                })),
                Format::Table => results
                    .iter()
                    .map(|r| {
                        let verdict = if r.passed { "PASS" } else { "FAIL" };
                        format!("{verdict} {} {}\n", r.name, r.detail)
                    })
                    .collect(),
            };
            emit(out, &text)?;
            if all {
                Ok(())
            } else {
                let failed: Vec<&str> = results
                    .iter()
                    .filter(|r| !r.passed)
                    .map(|r| r.name.as_str())
                    .collect();
                Err(Failure::Verification(format!(
                    "failed: {}",
                    failed.join(", ")
                )))
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("gridtau: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
