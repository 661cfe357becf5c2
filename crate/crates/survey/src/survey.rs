//! The prime-by-prime survey driver.

use std::path::Path;

use drinfeld_core::drinfeld::DrinfeldModule;
use drinfeld_core::invariants::{compute_record, PrimeOutcome};
use drinfeld_core::Poly;
use rayon::prelude::*;

use crate::config::SurveyConfig;
use crate::error::{Result, SurveyError};
use crate::records::{Entry, RecordFile};

/// Per-degree counts of a finished survey.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeSummary {
    pub deg: usize,
    pub good: usize,
    pub bad: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurveySummary {
    pub degrees: Vec<DegreeSummary>,
    /// Primes computed in this run.
    pub computed: usize,
    /// Primes taken over from an existing file.
    pub reused: usize,
}

/// Monic irreducibles with degree in `[deg_min, deg_max]`, by degree.
pub fn primes_in_range(cfg: &SurveyConfig) -> Vec<Poly> {
    let ring = cfg.ring();
    (cfg.deg_min..=cfg.deg_max).flat_map(|d| ring.enumerate_irreducible(d)).collect()
}

/// Computes entries for `primes` on a pool of `workers` threads. The result
/// is in the order of `primes`; the first failing prime in that order is
/// reported.
pub fn compute_entries(psi: &DrinfeldModule, primes: &[Poly], workers: usize) -> Result<Vec<Entry>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| SurveyError::Usage(format!("cannot start worker pool: {e}")))?;
    let results: Vec<_> = pool.install(|| primes.par_iter().map(|p| compute_record(psi, p)).collect());
    let ring = psi.ring();
    primes
        .iter()
        .zip(results)
        .map(|(p, r)| match r {
            Ok(PrimeOutcome::Good(rec)) => Ok(Entry::Good(rec)),
            Ok(PrimeOutcome::Bad(p)) => Ok(Entry::Bad(p)),
            Err(source) => Err(SurveyError::Prime { p: ring.format(p), source }),
        })
        .collect()
}

/// Builds the record file for `cfg` in memory.
///
/// With `existing`, primes already present are kept as they are; the module
/// hashes must agree.
pub fn survey(cfg: &SurveyConfig, existing: Option<RecordFile>) -> Result<(RecordFile, SurveySummary)> {
    if cfg.rank != 2 {
        return Err(SurveyError::Usage(format!(
            "the characteristic-polynomial pipeline needs rank 2, config has rank {}",
            cfg.rank
        )));
    }
    let psi = cfg.module()?;
    let mut file = match existing {
        Some(f) => {
            if f.config.module_hash() != cfg.module_hash() {
                return Err(SurveyError::HashMismatch { found: f.config.module_hash(), expected: cfg.module_hash() });
            }
            let mut f = f;
            f.config = cfg.clone();
            f
        }
        None => RecordFile::new(cfg.clone()),
    };
    let all = primes_in_range(cfg);
    let todo: Vec<Poly> = all.iter().filter(|p| !file.contains(p)).cloned().collect();
    let reused = all.len() - todo.len();
    let computed = todo.len();
    for e in compute_entries(&psi, &todo, cfg.workers)? {
        file.insert(e);
    }
    let degrees = (cfg.deg_min..=cfg.deg_max)
        .map(|deg| {
            let (good, bad) = file.entries().filter(|e| e.prime().deg() == deg).fold((0, 0), |(g, b), e| match e {
                Entry::Good(_) => (g + 1, b),
                Entry::Bad(_) => (g, b + 1),
            });
            DegreeSummary { deg, good, bad }
        })
        .collect();
    Ok((file, SurveySummary { degrees, computed, reused }))
}

/// Runs the survey and writes the record file to `out`.
pub fn run_survey(cfg: &SurveyConfig, out: &Path, resume: bool) -> Result<SurveySummary> {
    let existing = if resume && out.exists() { Some(RecordFile::load(out)?) } else { None };
    let (file, summary) = survey(cfg, existing)?;
    file.write(out)?;
    Ok(summary)
}
