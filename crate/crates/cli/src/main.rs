//! `skly`: derive the geometric data of a Sklyanin algebra, run the
//! verification catalog, and tabulate blowup Hilbert functions.

mod artifact;
mod config;
mod render;

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use log::info;
use skly_core::hesse::parse_divisor;
use skly_core::paperchecks::{run_suite, without_timings, CheckReport, Setup};
use skly_core::{Error, Result};

use artifact::{HilbertArtifact, HilbertRow, RunArtifact};
use config::{CommonArgs, Config, Format};

#[derive(Parser, Debug)]
#[command(
    name = "skly",
    version,
    about = "Blowups of Sklyanin algebras, checked by exact linear algebra"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Derive the cubic, translation and central element
    Derive {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Run verification checks
    Verify {
        #[command(flatten)]
        common: CommonArgs,
        /// Comma-separated check ids, or `all`
        #[arg(long)]
        suite: Vec<String>,
    },
    /// Hilbert table of the blowup at a divisor
    Hilbert {
        #[command(flatten)]
        common: CommonArgs,
        /// Divisor entries, e.g. `base:0,offset:5;base:3,sigma:-2`
        #[arg(long, allow_hyphen_values = true)]
        divisor: Option<String>,
        /// Largest T-degree in the table
        #[arg(long)]
        nmax: Option<usize>,
    },
}

fn emit(cfg: &Config, body: &str) -> Result<()> {
    match &cfg.out {
        Some(path) => std::fs::write(path, body)
            .map_err(|e| Error::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn json<T: serde::Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("artifacts serialize");
    s.push('\n');
    s
}

fn render_run(cfg: &Config, art: &RunArtifact, default: Format) -> String {
    match cfg.format.unwrap_or(default) {
        Format::Json => json(art),
        Format::Md => render::run_md(art),
        Format::Csv => render::run_csv(art),
    }
}

fn derive(common: &CommonArgs) -> Result<bool> {
    let cfg = Config::resolve(common, &[], None, None)?;
    let setup = Setup::build(&cfg.suite_config())?;
    let reports = finish_reports(&cfg, run_suite(&setup, &["geometry".into()])?);
    let art = RunArtifact::new("derive", &cfg, &setup, reports)?;
    emit(&cfg, &render_run(&cfg, &art, Format::Json))?;
    Ok(art.pass)
}

fn finish_reports(cfg: &Config, reports: Vec<CheckReport>) -> Vec<CheckReport> {
    if cfg.timings {
        reports
    } else {
        without_timings(&reports)
    }
}

fn verify(common: &CommonArgs, suite: &[String]) -> Result<bool> {
    let cfg = Config::resolve(common, suite, None, None)?;
    let setup = Setup::build(&cfg.suite_config())?;
    let reports = finish_reports(&cfg, run_suite(&setup, &cfg.suite)?);
    for r in &reports {
        info!("{}: {}", r.check, if r.pass { "pass" } else { "FAIL" });
    }
    let art = RunArtifact::new("verify", &cfg, &setup, reports)?;
    emit(&cfg, &render_run(&cfg, &art, Format::Md))?;
    if cfg.out.is_some() {
        print!("{}", render::summary_md(&art));
    }
    Ok(art.pass)
}

fn hilbert(common: &CommonArgs, divisor: Option<&str>, nmax: Option<usize>) -> Result<bool> {
    let cfg = Config::resolve(common, &[], divisor, nmax)?;
    let setup = Setup::build(&cfg.suite_config())?;
    let bridge = setup
        .bridge()
        .ok_or_else(|| Error::Degenerate("curve data unavailable".into()))?;
    let d = parse_divisor(bridge.curve(), cfg.divisor.as_deref().unwrap_or(""))?;
    let nmax = cfg.nmax.unwrap_or(3);
    if nmax == 0 {
        return Err(Error::Usage("nmax must be at least 1".into()));
    }
    if 3 * nmax > cfg.cap {
        return Err(Error::Resource(format!(
            "nmax {nmax} needs S-degree {} beyond the cap {}",
            3 * nmax,
            cfg.cap
        )));
    }
    let table = bridge.r_of_d(&d, nmax)?;
    let e = d.degree();
    let rows: Vec<HilbertRow> = table
        .rows
        .iter()
        .map(|r| HilbertRow::new(e, r.n, r.dim, r.mod_g))
        .collect();
    let pass = rows.iter().all(|r| r.matches);
    let art = HilbertArtifact {
        command: "hilbert",
        config: cfg.clone(),
        abc: setup.params(),
        divisor: d.points().to_vec(),
        e,
        rows,
        pass,
    };
    let body = match cfg.format.unwrap_or(Format::Md) {
        Format::Json => json(&art),
        Format::Md => render::hilbert_md(&art),
        Format::Csv => render::hilbert_csv(&art),
    };
    emit(&cfg, &body)?;
    Ok(pass)
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Usage(_) | Error::Unsupported(_) => 2,
        Error::Resource(_) | Error::Degenerate(_) => 3,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Derive { common } => derive(common),
        Command::Verify { common, suite } => verify(common, suite),
        Command::Hilbert {
            common,
            divisor,
            nmax,
        } => hilbert(common, divisor.as_deref(), *nmax),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            if matches!(e, Error::Usage(_)) {
                eprintln!("run `skly --help` for usage");
            }
            ExitCode::from(exit_code(&e))
        }
    }
}
