use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use drinfeld_core::analytic::{to_decimal, truncated_delta, zywina_product, DegreeModel, Truncated};
use drinfeld_core::identities;
use drinfeld_core::PolyRing;
use num_traits::Signed;

use crate::config::SurveyConfig;
use crate::error::{Result, SurveyError};
use crate::records::RecordFile;
use crate::report::{self, Table, PLACES};
use crate::survey::run_survey;

#[derive(Debug, Parser)]
#[command(name = "drinfeld", version, about = "Surveys of rank-2 Drinfeld module reductions over F_q(T)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the exact arithmetic identities over F_q[T] up to a degree.
    Identities {
        #[arg(long)]
        q: u32,
        #[arg(long, default_value_t = 4)]
        max_deg: usize,
    },
    /// Compute records for every prime in the configured degree range.
    Survey {
        #[arg(long)]
        config: PathBuf,
        /// Output file; defaults to `out` in the config.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Keep primes already present in the output file.
        #[arg(long)]
        resume: bool,
        /// Overrides `workers` in the config.
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Compare a record file with the analytic main terms.
    Report {
        #[command(subcommand)]
        kind: ReportKind,
    },
    /// Evaluate the truncated density series for a first divisor d.
    Density {
        #[arg(long)]
        q: u32,
        #[arg(long, default_value = "1")]
        d: String,
        #[arg(long, default_value_t = 3)]
        cutoff: usize,
        #[arg(long, default_value_t = 2)]
        rank: u32,
        #[arg(long, default_value_t = 1)]
        gamma: u32,
        /// Also evaluate the Euler product for T + τ − T^{q−1}τ².
        #[arg(long)]
        zywina: bool,
    },
}

#[derive(Debug, Clone, clap::Args)]
pub struct ReportArgs {
    #[arg(long)]
    records: PathBuf,
    /// Defaults to `cutoff` in the record file's config.
    #[arg(long)]
    cutoff: Option<usize>,
    /// Also write the table as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum ReportKind {
    Density {
        #[command(flatten)]
        common: ReportArgs,
        /// Defaults to the config's targets.
        #[arg(long)]
        d: Vec<String>,
        /// First degree of the weighted average window.
        #[arg(long)]
        window_min: Option<usize>,
    },
    Exponent {
        #[command(flatten)]
        common: ReportArgs,
        /// f(x) = floor(x / shift_divisor).
        #[arg(long, default_value_t = 3)]
        shift_divisor: usize,
    },
    Splitting {
        #[command(flatten)]
        common: ReportArgs,
        /// Defaults to the config's tracked moduli.
        #[arg(long)]
        m: Vec<String>,
    },
}

/// Parses arguments, runs, and maps errors to exit codes.
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    match run(cli, &mut stdout.lock()) {
        Ok(code) => ExitCode::from(code),
        // the reader went away (e.g. piped into `head`); nothing left to say
        Err(SurveyError::Io { source, .. }) if source.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn out_err(e: io::Error) -> SurveyError {
    SurveyError::io("<stdout>", e)
}

/// Runs a parsed command, writing human-readable output to `out`. Returns
/// the exit code for runs that complete but find failures.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<u8> {
    match cli.command {
        Command::Identities { q, max_deg } => {
            if !matches!(q, 2..=5) {
                return Err(SurveyError::Usage(format!("identities support q in {{2, 3, 4, 5}}, got {q}")));
            }
            let ring = PolyRing::with_q(q)?;
            let reports = identities::run_all(&ring, max_deg)?;
            for r in &reports {
                match &r.counterexample {
                    None => writeln!(out, "PASS {:<24} {} cases", r.name, r.checked),
                    Some(c) => writeln!(out, "FAIL {:<24} counterexample: {c}", r.name),
                }
                .map_err(out_err)?;
            }
            Ok(if identities::all_passed(&reports) { 0 } else { 1 })
        }
        Command::Survey { config, out: path, resume, workers } => {
            let mut cfg = SurveyConfig::from_path(&config)?;
            if let Some(w) = workers {
                cfg.workers = w;
            }
            let path = path
                .or_else(|| cfg.out.clone())
                .ok_or_else(|| SurveyError::Usage("no output path: pass --out or set `out` in the config".into()))?;
            let summary = run_survey(&cfg, &path, resume)?;
            writeln!(out, "deg  good  bad").map_err(out_err)?;
            for d in &summary.degrees {
                writeln!(out, "{:>3}  {:>4}  {:>3}", d.deg, d.good, d.bad).map_err(out_err)?;
            }
            writeln!(out, "computed {} primes, reused {}; wrote {}", summary.computed, summary.reused, path.display())
                .map_err(out_err)?;
            Ok(0)
        }
        Command::Report { kind } => report_command(kind, out),
        Command::Density { q, d, cutoff, rank, gamma, zywina } => {
            let ring = PolyRing::with_q(q)?;
            let d = ring.parse(&d)?;
            if !d.is_monic() {
                return Err(SurveyError::Usage("--d must be monic".into()));
            }
            let model = DegreeModel::full_gl(rank, gamma);
            let t = truncated_delta(&ring, &d, &model, cutoff)?;
            print_truncated(out, "delta", &t)?;
            if zywina {
                let z = zywina_product(&ring, &d, cutoff)?;
                print_truncated(out, "product", &z)?;
                let gap = (&t.value - &z.value).abs();
                let band = &t.tail_bound + &z.tail_bound;
                let agree = gap <= band;
                writeln!(out, "series and product {} within tails", if agree { "agree" } else { "DISAGREE" })
                    .map_err(out_err)?;
                return Ok(if agree { 0 } else { 1 });
            }
            Ok(0)
        }
    }
}

fn print_truncated(out: &mut dyn Write, name: &str, t: &Truncated) -> Result<()> {
    writeln!(
        out,
        "{name}: {} (exact {}) tail <= {}",
        to_decimal(&t.value, PLACES),
        t.value,
        to_decimal(&t.tail_bound, PLACES)
    )
    .map_err(out_err)
}

fn emit(out: &mut dyn Write, tables: &[Table], csv: Option<&PathBuf>) -> Result<()> {
    for t in tables {
        write!(out, "{}", t.text()).map_err(out_err)?;
        writeln!(out).map_err(out_err)?;
    }
    if let Some(path) = csv {
        let file = File::create(path).map_err(|e| SurveyError::io(path, e))?;
        let mut w = io::BufWriter::new(file);
        for t in tables {
            t.write_csv(&mut w).map_err(|e| SurveyError::io(path, io::Error::other(e)))?;
        }
        w.flush().map_err(|e| SurveyError::io(path, e))?;
    }
    Ok(())
}

fn report_command(kind: ReportKind, out: &mut dyn Write) -> Result<u8> {
    let common = match &kind {
        ReportKind::Density { common, .. }
        | ReportKind::Exponent { common, .. }
        | ReportKind::Splitting { common, .. } => common.clone(),
    };
    let file = RecordFile::load(&common.records)?;
    let ring = file.ring();
    let cutoff = common.cutoff.unwrap_or(file.config.cutoff);
    let parse_all = |list: &[String]| -> Result<Vec<_>> { list.iter().map(|s| Ok(ring.parse(s)?)).collect() };
    let mut ok = true;
    let tables = match kind {
        ReportKind::Density { d, window_min, .. } => {
            let ds = if d.is_empty() { file.config.targets.clone() } else { parse_all(&d)? };
            let mut tables = Vec::new();
            for d in ds {
                let r = report::density(&file, &d, cutoff, window_min)?;
                ok &= r.classes.iter().all(|c| c.2);
                tables.push(r.table(&ring));
            }
            tables
        }
        ReportKind::Exponent { shift_divisor, .. } => {
            if shift_divisor == 0 {
                return Err(SurveyError::Usage("--shift-divisor must be positive".into()));
            }
            vec![report::exponent(&file, cutoff, shift_divisor)?.table(&ring)]
        }
        ReportKind::Splitting { m, .. } => {
            let ms = if m.is_empty() { file.config.tracked() } else { parse_all(&m)? };
            let mut tables = Vec::new();
            for m in ms {
                let r = report::splitting(&file, &m)?;
                ok &= r.vanishing_consistent();
                tables.push(r.table(&ring));
            }
            tables
        }
    };
    emit(out, &tables, common.csv.as_ref())?;
    Ok(if ok { 0 } else { 1 })
}
