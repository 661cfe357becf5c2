//! JSON-lines record files.
//!
//! The first line is a header carrying the configuration and its module
//! hash; every following line is either a good-prime record or an excluded
//! bad prime, sorted by `(deg p, p)`.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use drinfeld_core::invariants::PrimeRecord;
use drinfeld_core::{Poly, PolyRing};
use serde::{Deserialize, Serialize};

use crate::config::SurveyConfig;
use crate::error::{Result, SurveyError};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Header {
    pub format: u32,
    pub q: u32,
    pub module_hash: String,
    pub config: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct RecordLine {
    p: String,
    deg: usize,
    a1: String,
    u: u32,
    chi: String,
    d1: String,
    d2: String,
    height: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct BadLine {
    p: String,
    deg: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum Line {
    Header(Header),
    Record(RecordLine),
    Bad(BadLine),
}

/// One surveyed prime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Entry {
    Good(PrimeRecord),
    Bad(Poly),
}

impl Entry {
    pub fn prime(&self) -> &Poly {
        match self {
            Entry::Good(r) => &r.p,
            Entry::Bad(p) => p,
        }
    }

    fn key(&self) -> (usize, Poly) {
        (self.prime().deg(), self.prime().clone())
    }
}

/// The contents of a record file, kept sorted by `(deg p, p)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecordFile {
    pub config: SurveyConfig,
    entries: BTreeMap<(usize, Poly), Entry>,
}

impl RecordFile {
    pub fn new(config: SurveyConfig) -> Self {
        RecordFile { config, entries: BTreeMap::new() }
    }

    pub fn ring(&self) -> PolyRing {
        self.config.ring()
    }

    pub fn insert(&mut self, e: Entry) {
        self.entries.insert(e.key(), e);
    }

    pub fn contains(&self, p: &Poly) -> bool {
        self.entries.contains_key(&(p.deg(), p.clone()))
    }

    pub fn entries(&self) -> impl Iterator<Item = &Entry> {
        self.entries.values()
    }

    pub fn records(&self) -> impl Iterator<Item = &PrimeRecord> {
        self.entries().filter_map(|e| match e {
            Entry::Good(r) => Some(r),
            Entry::Bad(_) => None,
        })
    }

    pub fn records_of_degree(&self, x: usize) -> impl Iterator<Item = &PrimeRecord> {
        self.records().filter(move |r| r.deg == x)
    }

    pub fn bad_primes(&self) -> impl Iterator<Item = &Poly> {
        self.entries().filter_map(|e| match e {
            Entry::Bad(p) => Some(p),
            Entry::Good(_) => None,
        })
    }

    /// Degrees present in the file, ascending.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.entries.keys().map(|(d, _)| *d).collect();
        d.dedup();
        d
    }

    pub fn header(&self) -> Header {
        Header {
            format: FORMAT_VERSION,
            q: self.config.q,
            module_hash: self.config.module_hash(),
            config: self.config.to_pairs(),
        }
    }

    /// Serializes the whole file. Output depends only on the contents.
    pub fn to_bytes(&self) -> Vec<u8> {
        let ring = self.ring();
        let f = |p: &Poly| ring.format(p);
        let mut out = Vec::new();
        let mut push = |line: &Line| {
            serde_json::to_writer(&mut out, line).expect("serializing plain data");
            out.push(b'\n');
        };
        push(&Line::Header(self.header()));
        for e in self.entries() {
            let line = match e {
                Entry::Good(r) => Line::Record(RecordLine {
                    p: f(&r.p),
                    deg: r.deg,
                    a1: f(&r.a1),
                    u: r.u,
                    chi: f(&r.chi),
                    d1: f(&r.d1),
                    d2: f(&r.d2),
                    height: r.height,
                }),
                Entry::Bad(p) => Line::Bad(BadLine { p: f(p), deg: p.deg() }),
            };
            push(&line);
        }
        out
    }

    /// Writes atomically: a sibling temporary file is renamed over `path`.
    pub fn write(&self, path: &Path) -> Result<()> {
        let tmp = path.with_extension("tmp");
        let file = File::create(&tmp).map_err(|e| SurveyError::io(&tmp, e))?;
        let mut w = BufWriter::new(file);
        w.write_all(&self.to_bytes()).and_then(|_| w.flush()).map_err(|e| SurveyError::io(&tmp, e))?;
        drop(w);
        std::fs::rename(&tmp, path).map_err(|e| SurveyError::io(path, e))
    }

    /// Reads a file and re-validates every record.
    pub fn load(path: &Path) -> Result<Self> {
        let file = File::open(path).map_err(|e| SurveyError::io(path, e))?;
        let reader = BufReader::new(file);
        let fmt = |line: usize, msg: String| SurveyError::RecordFormat { path: path.into(), line, msg };
        let mut lines = reader.lines().enumerate();
        let header = match lines.next() {
            Some((_, text)) => {
                let text = text.map_err(|e| SurveyError::io(path, e))?;
                match serde_json::from_str::<Line>(&text).map_err(|e| fmt(1, e.to_string()))? {
                    Line::Header(h) => h,
                    _ => return Err(fmt(1, "first line is not a header".into())),
                }
            }
            None => return Err(fmt(1, "empty file".into())),
        };
        if header.format != FORMAT_VERSION {
            return Err(fmt(1, format!("unsupported format version {}", header.format)));
        }
        let config = SurveyConfig::from_map(&header.config)?;
        if config.module_hash() != header.module_hash || config.q != header.q {
            return Err(SurveyError::HashMismatch { found: header.module_hash, expected: config.module_hash() });
        }
        let ring = config.ring();
        let mut file = RecordFile::new(config);
        let psi = file.config.module()?;
        for (i, text) in lines {
            let n = i + 1;
            let text = text.map_err(|e| SurveyError::io(path, e))?;
            if text.trim().is_empty() {
                continue;
            }
            let parse = |s: &str| ring.parse(s).map_err(|e| fmt(n, e.to_string()));
            let entry = match serde_json::from_str::<Line>(&text).map_err(|e| fmt(n, e.to_string()))? {
                Line::Header(_) => return Err(fmt(n, "second header".into())),
                Line::Record(r) => {
                    let rec = PrimeRecord {
                        p: parse(&r.p)?,
                        deg: r.deg,
                        a1: parse(&r.a1)?,
                        u: r.u,
                        chi: parse(&r.chi)?,
                        d1: parse(&r.d1)?,
                        d2: parse(&r.d2)?,
                        height: r.height,
                    };
                    let invalid =
                        |source| SurveyError::InvalidRecord { path: path.into(), line: n, p: r.p.clone(), source };
                    rec.validate(&ring).map_err(invalid)?;
                    if !psi.is_good_prime(&rec.p) {
                        return Err(fmt(n, format!("record for bad prime {}", r.p)));
                    }
                    Entry::Good(rec)
                }
                Line::Bad(b) => {
                    let p = parse(&b.p)?;
                    if p.deg() != b.deg || !ring.is_irreducible(&p) || psi.is_good_prime(&p) {
                        return Err(fmt(n, format!("{} is not a bad prime of degree {}", b.p, b.deg)));
                    }
                    Entry::Bad(p)
                }
            };
            if file.contains(entry.prime()) {
                return Err(fmt(n, format!("duplicate entry for {}", ring.format(entry.prime()))));
            }
            file.insert(entry);
        }
        Ok(file)
    }
}
