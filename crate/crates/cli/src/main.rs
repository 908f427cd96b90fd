use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use drinfeld_cli::config::{self, parse_prime, RunConfig};
use drinfeld_cli::pipeline::{self, PolygonPlace};
use drinfeld_cli::report::Status;
use drinfeld_cli::{to_json, CliError, Instance, OUT_DIR_ENV};

const SCHEMA: &str = include_str!("../schema/report.schema.json");

#[derive(Parser)]
#[command(
    name = "drinfeld",
    version,
    about = "Exact checks for phi_T = T + tau + f(T) tau^r"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Size of the constant field (a prime power).
    #[arg(long, default_value_t = 2)]
    q: u64,
    #[arg(long, default_value_t = 2)]
    r: usize,
    /// Monic irreducible generator of p, e.g. "T^2+T+1".
    #[arg(long, default_value = "T")]
    p: String,
    #[arg(long, default_value_t = config::DEFAULT_SCAN_DEG)]
    scan_deg: usize,
    #[arg(long, default_value_t = config::DEFAULT_LEVEL)]
    level: usize,
    #[arg(long, default_value_t = config::DEFAULT_PRECISION)]
    precision: usize,
    #[arg(long, default_value_t = config::DEFAULT_CAP)]
    cap: usize,
    #[arg(long, default_value_t = config::DEFAULT_MAX_DEG)]
    max_deg: usize,
    #[arg(long, default_value_t = config::DEFAULT_COEF_DEG)]
    coef_deg: usize,
    /// Write the report here instead of stdout (relative to $DRINFELD_OUT_DIR if set).
    #[arg(long)]
    output: Option<PathBuf>,
}

impl Common {
    fn config(&self) -> RunConfig {
        RunConfig {
            q: self.q,
            r: self.r,
            p: self.p.clone(),
            scan_deg: self.scan_deg,
            level: self.level,
            precision: self.precision,
            cap: self.cap,
            max_deg: self.max_deg,
            coef_deg: self.coef_deg,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum PlaceArg {
    P,
    Infinity,
}

#[derive(Subcommand)]
enum Command {
    /// Run every check and emit the full report.
    Verify(Common),
    /// Newton polygon at p or at infinity.
    Polygon {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "p")]
        place: PlaceArg,
    },
    /// Torsion phi[f_p^level] on the reduction at l.
    Torsion {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        l: String,
    },
    /// Carlitz endomorphisms over A/l (defaults to l = p).
    Endo {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        l: Option<String>,
    },
    /// Frobenius image evidence in GL_r(A/p).
    Image(Common),
    /// Print the JSON schema of the reports.
    Schema,
}

fn emit(text: &str, output: Option<&PathBuf>, name: &str) -> Result<(), CliError> {
    let dir = std::env::var_os(OUT_DIR_ENV).map(PathBuf::from);
    let path = match (output, dir) {
        (Some(p), Some(d)) if p.is_relative() => Some(d.join(p)),
        (Some(p), _) => Some(p.clone()),
        (None, Some(d)) => Some(d.join(format!("{name}.json"))),
        (None, None) => None,
    };
    match path {
        Some(p) => {
            if let Some(parent) = p.parent() {
                std::fs::create_dir_all(parent)?;
            }
            std::fs::write(&p, text)?;
            eprintln!("report written to {}", p.display());
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn section<S: serde::Serialize>(
    common: &Common,
    cfg: &RunConfig,
    name: &str,
    section: S,
    status: Status,
) -> Result<i32, CliError> {
    let rep = pipeline::section_report(cfg, section, status);
    emit(&to_json(&rep)?, common.output.as_ref(), name)?;
    Ok(rep.verdict.exit_code())
}

fn instance(cfg: &RunConfig) -> Result<Instance, CliError> {
    cfg.validate()
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Schema => {
            print!("{SCHEMA}");
            Ok(0)
        }
        Command::Verify(common) => {
            let cfg = common.config();
            let inst = instance(&cfg)?;
            let rep = pipeline::verify(&cfg, &inst);
            emit(&to_json(&rep)?, common.output.as_ref(), "verify")?;
            Ok(rep.verdict.exit_code())
        }
        Command::Polygon { common, place } => {
            let cfg = common.config();
            let inst = instance(&cfg)?;
            let place = match place {
                PlaceArg::P => PolygonPlace::P,
                PlaceArg::Infinity => PolygonPlace::Infinity,
            };
            let s = pipeline::polygon(&inst, place);
            let status = s.status;
            section(&common, &cfg, "polygon", s, status)
        }
        Command::Torsion { common, l } => {
            let cfg = common.config();
            let inst = instance(&cfg)?;
            let l = parse_prime(&inst.fq, &l)?;
            let s = pipeline::torsion(&inst, &l, cfg.level);
            let status = s.status;
            section(&common, &cfg, "torsion", s, status)
        }
        Command::Endo { common, l } => {
            let cfg = common.config();
            let inst = instance(&cfg)?;
            let l = match l {
                Some(l) => parse_prime(&inst.fq, &l)?,
                None => inst.prime.clone(),
            };
            let s = pipeline::carlitz_endomorphisms(&inst, &l, cfg.max_deg);
            let status = s.status;
            section(&common, &cfg, "endo", s, status)
        }
        Command::Image(common) => {
            let cfg = common.config();
            let inst = instance(&cfg)?;
            let s = pipeline::image(&inst, &cfg);
            let status = s.status;
            section(&common, &cfg, "image", s, status)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
