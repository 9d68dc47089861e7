//! `linkform` — linking forms, triple forms, and clasper-family sweeps
//! from the command line.
//!
//! Results go to standard output, diagnostics to standard error. Exit
//! codes: `0` success, `2` parse or validation error (bad file, bad
//! flag combination, bad element), `3` a request outside the supported
//! enumeration scope, `4` a sweep interrupted with its checkpoint intact.
//! Generator indices are 1-based everywhere the tool prints or reads them.

use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicBool, Ordering};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use linkform::abelian::{smith_normal_form, GroupElement, IntMatrix};
use linkform::clasper::{family, ClasperError};
use linkform::linking::{LinkingError, QmodZ};
use linkform::model::{canonical_json, parse_model, ManifoldModel, ModelError};
use linkform::obstruct::{
    obstruct, ObstructError, ObstructionSummary, CONTRAPOSITIVE_VERDICT, STRONG_VERDICT,
};
use linkform::search::{
    sweep, SearchError, SweepMode, SweepOptions, SweepReport,
};
use linkform::triple::TripleError;

#[derive(Parser)]
#[command(
    name = "linkform",
    version,
    about = "Torsion linking forms, triple forms, and rational-homology-ball obstructions",
    arg_required_else_help = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Smith normal form U*A*V = D of a model's linking matrix
    Snf {
        /// Model file (must use the linking_matrix source)
        model: PathBuf,
    },
    /// The group, Gram matrix, and meridian images of a model's form
    LinkingForm {
        /// Model file
        model: PathBuf,
    },
    /// Enumerate the Lagrangians of a model's linking form
    Lagrangians {
        /// Model file
        model: PathBuf,
    },
    /// Evaluate the triple form on three classes
    #[command(after_help = "Classes are named elements from the model file or \
                            comma-separated 1-based generator coordinates, e.g. \"1,0,0,2,0,0\".")]
    TripleEval {
        /// Model file (must carry a lambda3 field)
        model: PathBuf,
        x: String,
        y: String,
        z: String,
    },
    /// Evaluate the rational-homology-ball obstruction Lagrangian by Lagrangian
    Obstruct {
        /// Model file (must carry a lambda3 field)
        model: PathBuf,
        /// Print only the summary token
        #[arg(long)]
        summary: bool,
    },
    /// Search a clasper family for parameter vectors defeating every Lagrangian
    Sweep {
        /// Prime modulus of the family
        #[arg(long)]
        p: u64,
        /// Number of hyperbolic-ish summand pairs (the group is rank 2n)
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Mode::Exhaustive)]
        mode: Mode,
        /// Number of vectors to draw (sample mode only)
        #[arg(long)]
        count: Option<u64>,
        /// Seed for sample mode
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Split the space into (at least) this many chunks
        #[arg(long, default_value_t = 1)]
        chunks: u64,
        /// Worker threads
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Checkpoint file: append finished chunks, skip them on restart
        #[arg(long)]
        resume: Option<PathBuf>,
        /// Print each exception vector to standard error as it is found
        #[arg(long)]
        log_exceptions: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exhaustive,
    Sample,
}

/// Everything a subcommand can fail with, folded to the exit-code table.
#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Clasper(#[from] ClasperError),
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error(transparent)]
    Linking(#[from] LinkingError),
    #[error(transparent)]
    Triple(#[from] TripleError),
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl From<ObstructError> for CliError {
    fn from(e: ObstructError) -> CliError {
        match e {
            ObstructError::Linking(e) => CliError::Linking(e),
            ObstructError::Triple(e) => CliError::Triple(e),
        }
    }
}

fn usage(message: impl fmt::Display) -> CliError {
    CliError::Usage(message.to_string())
}

impl CliError {
    /// The documented exit-code table: 2 parse/validation, 3 unsupported
    /// scope, 4 interrupted with checkpoint. Unexpected runtime failures
    /// (checkpoint i/o mid-sweep) fall back to 1.
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Model(ModelError::Scope { .. }) => 3,
            CliError::Model(_) | CliError::Clasper(_) | CliError::Triple(_) => 2,
            CliError::Usage(_) | CliError::Io { .. } => 2,
            CliError::Linking(e) => linking_exit_code(e),
            CliError::Search(e) => match e {
                SearchError::Interrupted { .. } => 4,
                SearchError::Linking(e) => linking_exit_code(e),
                SearchError::Io(_) => 1,
                _ => 2,
            },
        }
    }
}

fn linking_exit_code(e: &LinkingError) -> u8 {
    match e {
        LinkingError::UnsupportedScope(_) | LinkingError::GroupTooLarge { .. } => 3,
        _ => 2,
    }
}

/// Set by the SIGINT/SIGTERM handler; the sweep polls it and stops at the
/// next chunk boundary, leaving the checkpoint valid.
static CANCEL: AtomicBool = AtomicBool::new(false);

extern "C" fn request_cancel(_signal: libc::c_int) {
    CANCEL.store(true, Ordering::Relaxed);
}

fn install_cancel_handler() {
    // A plain flag store is async-signal-safe; the sweep does the rest.
    let handler = request_cancel as extern "C" fn(libc::c_int) as usize as libc::sighandler_t;
    unsafe {
        libc::signal(libc::SIGINT, handler);
        libc::signal(libc::SIGTERM, handler);
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Snf { model } => cmd_snf(&load_model(&model)?),
        Command::LinkingForm { model } => cmd_linking_form(&load_model(&model)?),
        Command::Lagrangians { model } => cmd_lagrangians(&load_model(&model)?),
        Command::TripleEval { model, x, y, z } => {
            cmd_triple_eval(&load_model(&model)?, &x, &y, &z)
        }
        Command::Obstruct { model, summary } => cmd_obstruct(&load_model(&model)?, summary),
        Command::Sweep {
            p,
            n,
            mode,
            count,
            seed,
            chunks,
            workers,
            resume,
            log_exceptions,
        } => cmd_sweep(p, n, mode, count, seed, chunks, workers, resume, log_exceptions),
    }
}

fn load_model(path: &Path) -> Result<ManifoldModel, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(parse_model(&text)?)
}

fn cmd_snf(model: &ManifoldModel) -> Result<(), CliError> {
    let matrix = model.source_matrix().ok_or_else(|| {
        usage(format!(
            "model {} has no linking_matrix; snf needs a matrix-sourced model",
            model.name()
        ))
    })?;
    let snf = smith_normal_form(matrix);
    let report = json!({
        "u": matrix_strings(&snf.u),
        "d": matrix_strings(&snf.d),
        "v": matrix_strings(&snf.v),
        "invariant_factors": model
            .group()
            .factors()
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>(),
    });
    println!("{}", canonical_json(&report));
    Ok(())
}

/// Matrix entries as decimal strings: exact for any size, uniform across
/// commands, and immune to JSON number-precision questions.
fn matrix_strings(m: &IntMatrix) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m[(i, j)].to_string()).collect())
        .collect()
}

fn cmd_linking_form(model: &ManifoldModel) -> Result<(), CliError> {
    let form = model.form();
    let gram: Vec<Vec<String>> = form
        .gram()
        .iter()
        .map(|row| row.iter().map(QmodZ::to_string).collect())
        .collect();
    let mut report = json!({
        "name": model.name(),
        "group": form
            .group()
            .factors()
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>(),
        "lambda2": gram,
    });
    if let Some(meridians) = model.meridians() {
        report["meridians"] = json!(meridians.iter().map(coord_strings).collect::<Vec<_>>());
    }
    println!("{}", canonical_json(&report));
    Ok(())
}

fn coord_strings(element: &GroupElement) -> Vec<String> {
    element.coords().iter().map(ToString::to_string).collect()
}

fn cmd_lagrangians(model: &ManifoldModel) -> Result<(), CliError> {
    let lagrangians = model.form().enumerate_lagrangians()?;
    for (index, lagrangian) in lagrangians.iter().enumerate() {
        println!("L{}: {}", index + 1, lagrangian);
    }
    println!("count={}", lagrangians.len());
    Ok(())
}

fn cmd_triple_eval(model: &ManifoldModel, x: &str, y: &str, z: &str) -> Result<(), CliError> {
    let triple = model.triple().ok_or_else(|| {
        usage(format!("model {} has no lambda3 field", model.name()))
    })?;
    let x = resolve_element(model, x)?;
    let y = resolve_element(model, y)?;
    let z = resolve_element(model, z)?;
    println!("{}", triple.evaluate(&x, &y, &z)?);
    Ok(())
}

/// A class argument is a named element from the model file or a
/// comma-separated coordinate vector; names win when both would parse.
fn resolve_element(model: &ManifoldModel, text: &str) -> Result<GroupElement, CliError> {
    if let Some(element) = model.element(text) {
        return Ok(element.clone());
    }
    let coords = text
        .split(',')
        .map(|part| part.trim().parse::<i64>())
        .collect::<Result<Vec<i64>, _>>()
        .map_err(|_| {
            usage(format!(
                "unknown element {text:?}: not a named element of {} and not a \
                 comma-separated coordinate vector",
                model.name()
            ))
        })?;
    let rank = model.group().rank();
    if coords.len() != rank {
        return Err(usage(format!(
            "element {text:?} has {} coordinates, the group has rank {rank}",
            coords.len()
        )));
    }
    Ok(model.group().element(&coords))
}

fn cmd_obstruct(model: &ManifoldModel, summary_only: bool) -> Result<(), CliError> {
    let triple = model.triple().ok_or_else(|| {
        usage(format!(
            "model {} has no lambda3 field; the obstruction needs a triple form",
            model.name()
        ))
    })?;
    let verdict = obstruct(triple)?;
    if summary_only {
        println!("{}", verdict.summary);
        return Ok(());
    }
    for (index, row) in verdict.rows.iter().enumerate() {
        if row.vanishes {
            println!("L{} {}: lambda3 vanishes", index + 1, row.lagrangian);
        } else {
            println!(
                "L{} {}: lambda3 does not vanish — {} {}",
                index + 1,
                row.lagrangian,
                model.name(),
                CONTRAPOSITIVE_VERDICT
            );
        }
    }
    match verdict.summary {
        ObstructionSummary::NoLagrangianVanishes => {
            println!("{} {}", model.name(), STRONG_VERDICT);
        }
        ObstructionSummary::NoLagrangiansExist => {
            println!(
                "{} has no Lagrangians; the linking form alone obstructs such fillings",
                model.name()
            );
        }
        ObstructionSummary::SomeLagrangianVanishes => {}
    }
    println!("summary={}", verdict.summary);
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_sweep(
    p: u64,
    n: usize,
    mode: Mode,
    count: Option<u64>,
    seed: u64,
    chunks: u64,
    workers: usize,
    resume: Option<PathBuf>,
    log_exceptions: bool,
) -> Result<(), CliError> {
    let mode = match mode {
        Mode::Exhaustive => {
            if count.is_some() {
                return Err(usage("--count only applies to --mode sample"));
            }
            SweepMode::Exhaustive
        }
        Mode::Sample => SweepMode::Sample {
            count: count.ok_or_else(|| usage("--mode sample needs --count"))?,
            seed,
        },
    };
    let fam = family(p, n)?;
    let options = SweepOptions {
        mode,
        chunks,
        workers,
        checkpoint: resume,
        log_exceptions,
        ..SweepOptions::default()
    };
    install_cancel_handler();
    let report = sweep(&fam, &options, &CANCEL)?;
    print_sweep_report(&report);
    Ok(())
}

fn print_sweep_report(report: &SweepReport) {
    eprintln!(
        "swept {} of {} vectors (dimension {}, {} chunks, {} resumed) in {:.2?}",
        report.total,
        report.target,
        report.dimension,
        report.chunks.len(),
        report.resumed_chunks,
        report.wall
    );
    for witness in &report.exception_witnesses {
        let digits: Vec<String> = witness.iter().map(ToString::to_string).collect();
        println!("exception=({})", digits.join(","));
    }
    if report.exceptions > report.exception_witnesses.len() as u128 {
        eprintln!(
            "(only the first {} exception vectors are listed)",
            report.exception_witnesses.len()
        );
    }
    println!("{}", report.summary_line());
}
