//! Argument parsing and subcommand dispatch.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use qwr_core::ClassicalCode;

use crate::error::CliError;
use crate::mtxf2::write_matrix;
use crate::pipeline::{
    run_pipeline, BasisSel, Config, HeightSpec, Input, Outcome, ScheduleSpec, TransformStep, DEFAULT_ELL, DEFAULT_MAX_D,
};

#[derive(Debug, Parser)]
#[command(name = "qwr", version, about = "Weight reduction, schedules and fault distances for CSS codes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Code parameters, optionally with exact distances.
    Info {
        #[command(flatten)]
        code: CodeArgs,
        /// Also compute both code distances.
        #[arg(long)]
        distance: bool,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Apply transforms in order and audit every step.
    Transform {
        #[command(flatten)]
        code: CodeArgs,
        /// Steps: copy, gauge, thicken, heights, balance-x, balance-z, cone, reduced-cone.
        #[arg(required = true, value_name = "STEP")]
        steps: Vec<TransformStep>,
        #[command(flatten)]
        opts: TransformArgs,
        /// Carry a schedule through the transforms: seed:<n>|file:<path>|derived.
        #[arg(long)]
        schedule: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Exact code distances.
    Distance {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long, default_value = "both")]
        basis: BasisSel,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Effective distance under a single-ancilla schedule.
    Faultdist {
        #[command(flatten)]
        code: CodeArgs,
        #[command(flatten)]
        search: SearchArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Print a schedule in the text format, optionally after transforms.
    Schedule {
        #[command(flatten)]
        code: CodeArgs,
        /// Comma-separated transform steps.
        #[arg(long, value_delimiter = ',')]
        transform: Vec<TransformStep>,
        #[command(flatten)]
        opts: TransformArgs,
        /// seed:<n>|file:<path>|derived.
        #[arg(long, default_value = "seed:0")]
        schedule: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the schedule here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Full pipeline: transforms, schedule, code and effective distances.
    Run {
        #[command(flatten)]
        code: CodeArgs,
        /// Comma-separated transform steps.
        #[arg(long, value_delimiter = ',')]
        transform: Vec<TransformStep>,
        #[command(flatten)]
        opts: TransformArgs,
        #[command(flatten)]
        search: SearchArgs,
        /// Skip the code distances.
        #[arg(long)]
        no_distance: bool,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Debug, Args)]
pub struct CodeArgs {
    #[arg(long)]
    pub hx: PathBuf,
    #[arg(long)]
    pub hz: PathBuf,
}

#[derive(Debug, Args)]
pub struct TransformArgs {
    /// Repetition length for thicken and reduced-cone.
    #[arg(long, default_value_t = DEFAULT_ELL)]
    pub ell: usize,
    /// greedy:<w> or explicit:<h1,h2,...> (1-based).
    #[arg(long, default_value_t = HeightSpec::default())]
    pub heights: HeightSpec,
    /// Parity-check matrix (mtxf2) of the classical code for balancing.
    #[arg(long)]
    pub classical: Option<PathBuf>,
    /// Z rows heavier than this are coned.
    #[arg(long, default_value_t = qwr_core::cone::DEFAULT_CONE_THRESHOLD)]
    pub cone_threshold: usize,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    /// seed:<n>|file:<path>|derived.
    #[arg(long, default_value = "seed:0")]
    pub schedule: String,
    #[arg(long, default_value = "both")]
    pub basis: BasisSel,
    #[arg(long, default_value_t = DEFAULT_MAX_D)]
    pub max_d: usize,
    /// Seed of the baseline schedule for `derived`.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct OutArgs {
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write the final hx.mtxf2, hz.mtxf2 and schedule.txt into this directory.
    #[arg(long)]
    pub emit: Option<PathBuf>,
}

fn load_config(code: &CodeArgs) -> Result<Config, CliError> {
    Ok(Config::new(Input::load_matrix(&code.hx)?, Input::load_matrix(&code.hz)?))
}

fn apply_transform_args(cfg: &mut Config, opts: &TransformArgs) -> Result<(), CliError> {
    cfg.ell = opts.ell;
    cfg.heights = opts.heights.clone();
    cfg.cone_threshold = opts.cone_threshold;
    if let Some(p) = &opts.classical {
        let m = Input::load_matrix(p)?;
        cfg.classical = Some(Input { value: ClassicalCode::new(m.value), path: m.path, sha256: m.sha256 });
    }
    Ok(())
}

fn apply_search_args(cfg: &mut Config, s: &SearchArgs) -> Result<(), CliError> {
    cfg.schedule = Some(ScheduleSpec::parse(&s.schedule)?);
    cfg.basis = s.basis;
    cfg.max_d = s.max_d;
    cfg.seed = s.seed;
    cfg.fault_distances = true;
    Ok(())
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Io { path: path.display().to_string(), source: e })
}

fn emit(outcome: &Outcome, out: &OutArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    if let Some(dir) = &out.emit {
        std::fs::create_dir_all(dir).map_err(|e| CliError::Io { path: dir.display().to_string(), source: e })?;
        write_file(&dir.join("hx.mtxf2"), &write_matrix(outcome.code.h_x()))?;
        write_file(&dir.join("hz.mtxf2"), &write_matrix(outcome.code.h_z()))?;
        if let Some(s) = &outcome.schedule {
            write_file(&dir.join("schedule.txt"), &s.to_text())?;
        }
    }
    let json = outcome.report.to_json();
    match &out.out {
        Some(p) => write_file(p, &json)?,
        None => stdout.write_all(json.as_bytes()).map_err(|e| CliError::Io { path: "<stdout>".into(), source: e })?,
    }
    if outcome.report.audit.passed {
        Ok(())
    } else {
        Err(CliError::Audit(outcome.report.audit.violations.clone()))
    }
}

/// Runs one parsed command.
pub fn execute(cli: Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Info { code, distance, out } => {
            let mut cfg = load_config(&code)?;
            cfg.distances = distance;
            emit(&run_pipeline(&cfg, "info")?, &out, stdout)
        }
        Command::Transform { code, steps, opts, schedule, seed, out } => {
            let mut cfg = load_config(&code)?;
            apply_transform_args(&mut cfg, &opts)?;
            cfg.transforms = steps;
            cfg.seed = seed;
            cfg.schedule = schedule.as_deref().map(ScheduleSpec::parse).transpose()?;
            emit(&run_pipeline(&cfg, "transform")?, &out, stdout)
        }
        Command::Distance { code, basis, out } => {
            let mut cfg = load_config(&code)?;
            cfg.basis = basis;
            cfg.distances = true;
            emit(&run_pipeline(&cfg, "distance")?, &out, stdout)
        }
        Command::Faultdist { code, search, out } => {
            let mut cfg = load_config(&code)?;
            apply_search_args(&mut cfg, &search)?;
            emit(&run_pipeline(&cfg, "faultdist")?, &out, stdout)
        }
        Command::Schedule { code, transform, opts, schedule, seed, out } => {
            let mut cfg = load_config(&code)?;
            apply_transform_args(&mut cfg, &opts)?;
            cfg.transforms = transform;
            cfg.seed = seed;
            cfg.schedule = Some(ScheduleSpec::parse(&schedule)?);
            let outcome = run_pipeline(&cfg, "schedule")?;
            if !outcome.report.audit.passed {
                return Err(CliError::Audit(outcome.report.audit.violations));
            }
            let text = outcome.schedule.map(|s| s.to_text()).unwrap_or_default();
            match out {
                Some(p) => write_file(&p, &text),
                None => {
                    stdout.write_all(text.as_bytes()).map_err(|e| CliError::Io { path: "<stdout>".into(), source: e })
                }
            }
        }
        Command::Run { code, transform, opts, search, no_distance, out } => {
            let mut cfg = load_config(&code)?;
            apply_transform_args(&mut cfg, &opts)?;
            apply_search_args(&mut cfg, &search)?;
            cfg.transforms = transform;
            cfg.distances = !no_distance;
            emit(&run_pipeline(&cfg, "run")?, &out, stdout)
        }
    }
}

/// Parses `args` (program name first) and runs; returns the exit code.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(stderr, "{}", e.render());
                return 1;
            }
            let _ = write!(stdout, "{}", e.render());
            return 0;
        }
    };
    match execute(cli, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "qwr: {e}");
            e.exit_code()
        }
    }
}
