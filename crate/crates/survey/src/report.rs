//! Reports comparing survey statistics with the analytic main terms.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io;

use drinfeld_core::analytic::{
    average_exponent_main_term, density_main_term, infer_constant_degree, rational, to_decimal, to_f64,
    truncated_delta, ConstantDegree, Truncated,
};
use drinfeld_core::{Poly, PolyRing};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::config::ConstantFieldSpec;
use crate::error::Result;
use crate::records::RecordFile;

/// Decimal places used for rational values in reports.
pub const PLACES: usize = 12;

/// A rendered report: one row per degree, plus free-form notes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table {
    pub title: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub notes: Vec<String>,
}

impl Table {
    fn new(title: String, columns: &[&str]) -> Self {
        Table { title, columns: columns.iter().map(|s| s.to_string()).collect(), rows: Vec::new(), notes: Vec::new() }
    }

    /// Column-aligned text with the notes underneath.
    pub fn text(&self) -> String {
        let mut width: Vec<usize> = self.columns.iter().map(|c| c.chars().count()).collect();
        for row in &self.rows {
            for (w, cell) in width.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let mut out = format!("# {}\n", self.title);
        let mut line = |cells: &[String]| {
            let parts: Vec<String> = cells.iter().zip(&width).map(|(c, w)| format!("{c:>w$}", w = *w)).collect();
            out.push_str(parts.join("  ").trim_end());
            out.push('\n');
        };
        line(&self.columns);
        for row in &self.rows {
            line(row);
        }
        for n in &self.notes {
            let _ = writeln!(out, "{n}");
        }
        out
    }

    /// CSV with a header row; notes are not included.
    pub fn write_csv<W: io::Write>(&self, w: W) -> csv::Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(&self.columns)?;
        for row in &self.rows {
            wr.write_record(row)?;
        }
        wr.flush()?;
        Ok(())
    }
}

fn q_pow(q: u32, x: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(q).pow(x as u32))
}

fn exact(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn dec(r: &BigRational) -> String {
    to_decimal(r, PLACES)
}

fn ratio_cell(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.6}")
    } else {
        "-".into()
    }
}

/// Per-degree counts `Π_1(x, a)` of good primes `p ∤ a` with `a | d1`.
fn split_counts(file: &RecordFile, ring: &PolyRing, a: &Poly) -> Vec<(usize, u64)> {
    let cfg = &file.config;
    (cfg.deg_min..=cfg.deg_max)
        .map(|x| {
            let n = file.records_of_degree(x).filter(|r| !ring.divides(&r.p, a) && ring.divides(a, &r.d1)).count();
            (x, n as u64)
        })
        .collect()
}

/// Empirical `c_a` for each modulus that has data.
fn inferred_table(file: &RecordFile, moduli: impl IntoIterator<Item = Poly>) -> BTreeMap<Poly, u32> {
    let ring = file.ring();
    let mut out = BTreeMap::new();
    for a in moduli {
        if let ConstantDegree::Inferred(c) = infer_constant_degree(&split_counts(file, &ring, &a)) {
            out.insert(a, c);
        }
    }
    out
}

fn monic_up_to(ring: &PolyRing, deg: usize) -> Vec<Poly> {
    (0..=deg).flat_map(|d| ring.enumerate_monic(d)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityRow {
    pub x: usize,
    /// Good primes of degree `x`.
    pub good: usize,
    /// Good primes of degree `x` with `d1 = d`.
    pub count: usize,
    /// Cutoff actually used, `min(cutoff, x/r)`.
    pub cutoff: usize,
    pub main: Truncated,
}

impl DensityRow {
    pub fn ratio(&self) -> f64 {
        self.count as f64 / to_f64(&self.main.value)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityReport {
    pub q: u32,
    pub d: Poly,
    pub cutoff: usize,
    pub rows: Vec<DensityRow>,
    /// Number of distinct `d1` values per degree and whether the class
    /// sizes add up to the number of records.
    pub classes: Vec<(usize, usize, bool)>,
    /// Degree window `[lo, hi]` of the weighted average.
    pub window: (usize, usize),
    /// `Σ count / Σ q^x/x` over the window.
    pub weighted_average: BigRational,
    /// `δ(d)` truncated at `cutoff`.
    pub target: Truncated,
    pub excluded: Vec<Poly>,
}

impl DensityReport {
    pub fn deviation(&self) -> f64 {
        (to_f64(&self.weighted_average) - to_f64(&self.target.value)).abs()
    }

    pub fn table(&self, ring: &PolyRing) -> Table {
        let title = format!("density of d1 = {} (q = {}, cutoff = {})", ring.format(&self.d), self.q, self.cutoff);
        let mut t = Table::new(title, &["q", "x", "good", "count", "cutoff", "main", "main_exact", "tail", "ratio"]);
        for r in &self.rows {
            t.rows.push(vec![
                self.q.to_string(),
                r.x.to_string(),
                r.good.to_string(),
                r.count.to_string(),
                r.cutoff.to_string(),
                dec(&r.main.value),
                exact(&r.main.value),
                dec(&r.main.tail_bound),
                ratio_cell(r.ratio()),
            ]);
        }
        let (lo, hi) = self.window;
        t.notes.push(format!(
            "weighted average over x in [{lo}, {hi}]: {}  target: {} +/- {}  deviation: {:.6}",
            dec(&self.weighted_average),
            dec(&self.target.value),
            dec(&self.target.tail_bound),
            self.deviation()
        ));
        let broken: Vec<String> = self.classes.iter().filter(|c| !c.2).map(|c| c.0.to_string()).collect();
        if broken.is_empty() {
            t.notes.push("d1 classes partition the records at every degree".into());
        } else {
            t.notes.push(format!("d1 partition FAILED at x = {}", broken.join(", ")));
        }
        t.notes.push(excluded_note(ring, &self.excluded));
        t
    }
}

fn excluded_note(ring: &PolyRing, excluded: &[Poly]) -> String {
    if excluded.is_empty() {
        "excluded primes: none".into()
    } else {
        let list: Vec<String> = excluded.iter().map(|p| format!("({})", ring.format(p))).collect();
        format!("excluded primes: {}", list.join(" "))
    }
}

/// Empirical counts of `d1 = d` per degree against the main term.
///
/// The weighted average runs over `[window_min, deg_max]`; by default the
/// last three degrees.
pub fn density(file: &RecordFile, d: &Poly, cutoff: usize, window_min: Option<usize>) -> Result<DensityReport> {
    let cfg = &file.config;
    let ring = file.ring();
    let d = ring.monic(d);
    let deg_model = cfg.degree_model();
    let inferred = match cfg.constant_field {
        ConstantFieldSpec::Empirical => {
            inferred_table(file, monic_up_to(&ring, cutoff).into_iter().map(|m| ring.mul(&m, &d)))
        }
        _ => BTreeMap::new(),
    };
    let cf = cfg.constant_field_model(&inferred);
    let mut rows = Vec::new();
    let mut classes = Vec::new();
    for x in cfg.deg_min..=cfg.deg_max {
        let recs: Vec<_> = file.records_of_degree(x).collect();
        let count = recs.iter().filter(|r| r.d1 == d).count();
        let mut sizes: BTreeMap<&Poly, usize> = BTreeMap::new();
        for r in &recs {
            *sizes.entry(&r.d1).or_default() += 1;
        }
        classes.push((x, sizes.len(), sizes.values().sum::<usize>() == recs.len()));
        let used = cutoff.min(x / cfg.rank);
        let main = density_main_term(&ring, x, &d, &deg_model, &cf, used)?;
        rows.push(DensityRow { x, good: recs.len(), count, cutoff: used, main });
    }
    let hi = cfg.deg_max;
    let lo = window_min.unwrap_or(hi.saturating_sub(2)).max(cfg.deg_min);
    let (mut num, mut den) = (BigRational::zero(), BigRational::zero());
    for r in rows.iter().filter(|r| r.x >= lo && r.x <= hi) {
        num += rational(r.count as u64, 1);
        den += q_pow(cfg.q, r.x) / rational(r.x as u64, 1);
    }
    let weighted_average = if den.is_zero() { BigRational::zero() } else { num / den };
    let target = truncated_delta(&ring, &d, &deg_model, cutoff)?;
    Ok(DensityReport {
        q: cfg.q,
        d,
        cutoff,
        rows,
        classes,
        window: (lo, hi),
        weighted_average,
        target,
        excluded: file.bad_primes().cloned().collect(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentRow {
    pub x: usize,
    pub good: usize,
    /// `f(x)`; primes with `deg d2 ≤ x − f(x)` count as small.
    pub shift: usize,
    pub small: usize,
    /// `(1/Π(x)) Σ |d2| / q^x`.
    pub mean_ratio: BigRational,
    pub cutoff: usize,
    /// Main term divided by `q^x`.
    pub main: Truncated,
}

impl ExponentRow {
    pub fn fraction(&self) -> f64 {
        self.small as f64 / self.good as f64
    }

    /// `|empirical − main| / main`.
    pub fn relative_deviation(&self) -> f64 {
        let m = to_f64(&self.main.value);
        (to_f64(&self.mean_ratio) - m).abs() / m
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentReport {
    pub q: u32,
    pub cutoff: usize,
    pub shift_divisor: usize,
    pub rows: Vec<ExponentRow>,
    pub excluded: Vec<Poly>,
}

impl ExponentReport {
    pub fn row(&self, x: usize) -> Option<&ExponentRow> {
        self.rows.iter().find(|r| r.x == x)
    }

    pub fn table(&self, ring: &PolyRing) -> Table {
        let title = format!(
            "exponent statistics (q = {}, cutoff = {}, f(x) = floor(x/{}))",
            self.q, self.cutoff, self.shift_divisor
        );
        let mut t = Table::new(
            title,
            &["q", "x", "good", "f", "small", "fraction", "mean_d2_over_qx", "main_over_qx", "tail", "rel_dev"],
        );
        for r in &self.rows {
            t.rows.push(vec![
                self.q.to_string(),
                r.x.to_string(),
                r.good.to_string(),
                r.shift.to_string(),
                r.small.to_string(),
                ratio_cell(r.fraction()),
                dec(&r.mean_ratio),
                dec(&r.main.value),
                dec(&r.main.tail_bound),
                ratio_cell(r.relative_deviation()),
            ]);
        }
        t.notes.push(excluded_note(ring, &self.excluded));
        t
    }
}

/// Small-exponent fractions and average `|d2|` per degree.
pub fn exponent(file: &RecordFile, cutoff: usize, shift_divisor: usize) -> Result<ExponentReport> {
    let cfg = &file.config;
    let ring = file.ring();
    let deg_model = cfg.degree_model();
    let inferred = match cfg.constant_field {
        ConstantFieldSpec::Empirical => inferred_table(file, monic_up_to(&ring, cutoff)),
        _ => BTreeMap::new(),
    };
    let cf = cfg.constant_field_model(&inferred);
    let mut rows = Vec::new();
    for x in cfg.deg_min..=cfg.deg_max {
        let recs: Vec<_> = file.records_of_degree(x).collect();
        let shift = x / shift_divisor.max(1);
        let small = recs.iter().filter(|r| r.d2.deg() + shift <= x).count();
        let total: BigUint = recs.iter().map(|r| ring.norm(&r.d2)).sum();
        let qx = q_pow(cfg.q, x);
        let mean_ratio = if recs.is_empty() {
            BigRational::zero()
        } else {
            BigRational::new(BigInt::from(total), BigInt::from(recs.len())) / &qx
        };
        let used = cutoff.min(x / 2);
        let t = average_exponent_main_term(&ring, x, &deg_model, &cf, used)?;
        let main = Truncated { value: t.value / &qx, tail_bound: t.tail_bound / &qx };
        rows.push(ExponentRow { x, good: recs.len(), shift, small, mean_ratio, cutoff: used, main });
    }
    Ok(ExponentReport { q: cfg.q, cutoff, shift_divisor, rows, excluded: file.bad_primes().cloned().collect() })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitRow {
    pub x: usize,
    /// Good primes of degree `x` not dividing `m`.
    pub eligible: usize,
    /// `Π_1(x, m)`.
    pub count: usize,
    /// `c_m(x)` under the configured model.
    pub c_at_x: u32,
    /// `c_m(x) q^x / (x [K(ψ[m]):K])`.
    pub main: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplittingReport {
    pub q: u32,
    pub m: Poly,
    pub inferred: ConstantDegree,
    pub rows: Vec<SplitRow>,
    /// Good primes dividing `m`, left out of the counts.
    pub excluded: Vec<Poly>,
}

impl SplittingReport {
    /// Whether the counts vanish at every degree not divisible by the
    /// inferred `c_m`.
    pub fn vanishing_consistent(&self) -> bool {
        match self.inferred {
            ConstantDegree::Inferred(c) => self.rows.iter().all(|r| r.x % c as usize == 0 || r.count == 0),
            ConstantDegree::Indeterminate => self.rows.iter().all(|r| r.count == 0),
        }
    }

    pub fn table(&self, ring: &PolyRing) -> Table {
        let inferred = match self.inferred {
            ConstantDegree::Inferred(c) => c.to_string(),
            ConstantDegree::Indeterminate => "indeterminate".into(),
        };
        let title = format!("splitting of m = {} (q = {}, inferred c_m = {inferred})", ring.format(&self.m), self.q);
        let mut t = Table::new(title, &["q", "x", "eligible", "count", "c_m(x)", "main", "main_exact", "ratio"]);
        for r in &self.rows {
            t.rows.push(vec![
                self.q.to_string(),
                r.x.to_string(),
                r.eligible.to_string(),
                r.count.to_string(),
                r.c_at_x.to_string(),
                dec(&r.main),
                exact(&r.main),
                ratio_cell(r.count as f64 / to_f64(&r.main)),
            ]);
        }
        t.notes.push(format!(
            "vanishing pattern {} with c_m",
            if self.vanishing_consistent() { "consistent" } else { "INCONSISTENT" }
        ));
        let list: Vec<String> = self.excluded.iter().map(|p| format!("({})", ring.format(p))).collect();
        t.notes
            .push(format!("primes dividing m: {}", if list.is_empty() { "none".to_string() } else { list.join(" ") }));
        t
    }
}

/// `Π_1(x, m)` per degree against the Chebotarev main term.
pub fn splitting(file: &RecordFile, m: &Poly) -> Result<SplittingReport> {
    let cfg = &file.config;
    let ring = file.ring();
    let m = ring.monic(m);
    let counts = split_counts(file, &ring, &m);
    let inferred = infer_constant_degree(&counts);
    let mut table = BTreeMap::new();
    if let ConstantDegree::Inferred(c) = inferred {
        table.insert(m.clone(), c);
    }
    let cf = cfg.constant_field_model(&table);
    let degree = BigInt::from(cfg.degree_model().degree(&ring, &m)?);
    let mut rows = Vec::new();
    for (x, count) in counts {
        let eligible = file.records_of_degree(x).filter(|r| !ring.divides(&r.p, &m)).count();
        let c_at_x = cf.c_at(&ring, &m, x)?;
        let main =
            q_pow(cfg.q, x) * rational(c_at_x, 1) / (rational(x as u64, 1) * BigRational::from_integer(degree.clone()));
        rows.push(SplitRow { x, eligible, count: count as usize, c_at_x, main });
    }
    let excluded = file.records().filter(|r| ring.divides(&r.p, &m)).map(|r| r.p.clone()).collect();
    Ok(SplittingReport { q: cfg.q, m, inferred, rows, excluded })
}
