//! Survey configuration: a flat `key = value` file.
//!
//! ```text
//! # Zywina's module over F_3
//! q = 3
//! rank = 2
//! g1 = 1
//! g2 = 0,0,2
//! deg_min = 1
//! deg_max = 7
//! targets = 1; 1,1
//! cutoff = 3
//! ```
//!
//! Polynomials use the comma-separated coefficient encoding, constant term
//! first. List values are separated by `;`, table entries are `poly : value`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use drinfeld_core::analytic::{ConstantFieldModel, DegreeMode, DegreeModel};
use drinfeld_core::drinfeld::DrinfeldModule;
use drinfeld_core::{Poly, PolyRing};
use num_bigint::BigUint;
use sha2::{Digest, Sha256};

use crate::error::{Result, SurveyError};

pub const DEFAULT_MAX_WORK: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DegreeModelSpec {
    FullGl,
    Table(BTreeMap<Poly, BigUint>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConstantFieldSpec {
    Trivial,
    Empirical,
    Table(BTreeMap<Poly, u32>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurveyConfig {
    pub q: u32,
    pub rank: usize,
    /// `g_1, …, g_r` of `ψ_T = T + g_1 τ + … + g_r τ^r`.
    pub psi: Vec<Poly>,
    pub deg_min: usize,
    pub deg_max: usize,
    /// Candidate first divisors `d` for density reports.
    pub targets: Vec<Poly>,
    /// Moduli `m` for splitting reports; empty means all monic of degree 1.
    pub track: Vec<Poly>,
    pub cutoff: usize,
    pub gamma: u32,
    pub degree_model: DegreeModelSpec,
    pub constant_field: ConstantFieldSpec,
    /// Worker threads; 0 picks one per core. Never affects output.
    pub workers: usize,
    pub out: Option<PathBuf>,
    /// Ceiling on `q^deg_max`.
    pub max_work: u64,
}

const KEYS: &[&str] = &[
    "q",
    "rank",
    "deg_min",
    "deg_max",
    "targets",
    "track",
    "cutoff",
    "gamma",
    "degree_model",
    "degree_table",
    "constant_field",
    "constant_table",
    "workers",
    "out",
    "max_work",
];

fn err(line: usize, msg: impl Into<String>) -> SurveyError {
    SurveyError::Config { line, msg: msg.into() }
}

impl SurveyConfig {
    /// Zywina's module `T + τ − T^{q−1} τ²` over all degrees in the range.
    pub fn zywina(q: u32, deg_min: usize, deg_max: usize) -> Result<Self> {
        let ring = PolyRing::with_q(q)?;
        let psi = DrinfeldModule::zywina(&ring);
        Ok(SurveyConfig {
            q,
            rank: 2,
            psi: psi.coeffs().to_vec(),
            deg_min,
            deg_max,
            targets: vec![Poly::one()],
            track: Vec::new(),
            cutoff: 3,
            gamma: 1,
            degree_model: DegreeModelSpec::FullGl,
            constant_field: ConstantFieldSpec::Trivial,
            workers: 0,
            out: None,
            max_work: DEFAULT_MAX_WORK,
        })
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| SurveyError::io(path, e))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| err(i + 1, "expected `key = value`"))?;
            pairs.push((i + 1, k.trim().to_string(), v.trim().to_string()));
        }
        Self::from_pairs(pairs)
    }

    /// Builds a config from `(line, key, value)` triples.
    pub fn from_pairs(pairs: Vec<(usize, String, String)>) -> Result<Self> {
        let mut map: BTreeMap<String, (usize, String)> = BTreeMap::new();
        for (line, k, v) in pairs {
            let known = KEYS.contains(&k.as_str()) || is_g_key(&k);
            if !known {
                return Err(err(line, format!("unknown key `{k}`")));
            }
            if map.insert(k.clone(), (line, v)).is_some() {
                return Err(err(line, format!("duplicate key `{k}`")));
            }
        }
        let get = |k: &str| map.get(k).map(|(l, v)| (*l, v.as_str()));
        let num = |k: &str, default: Option<u64>| -> Result<u64> {
            match get(k) {
                Some((l, v)) => v.parse().map_err(|_| err(l, format!("`{k}` must be a nonnegative integer"))),
                None => default.ok_or_else(|| err(0, format!("missing required key `{k}`"))),
            }
        };

        let q = num("q", None)? as u32;
        let ring = PolyRing::with_q(q).map_err(|e| err(get("q").map_or(0, |x| x.0), e.to_string()))?;
        let poly = |line: usize, s: &str| ring.parse(s.trim()).map_err(|e| err(line, e.to_string()));
        let poly_list = |k: &str| -> Result<Vec<Poly>> {
            let Some((l, v)) = get(k) else { return Ok(Vec::new()) };
            v.split(';').filter(|s| !s.trim().is_empty()).map(|s| poly(l, s).map(|p| ring.monic(&p))).collect()
        };

        let rank = num("rank", Some(2))? as usize;
        if rank == 0 {
            return Err(err(get("rank").map_or(0, |x| x.0), "rank must be positive"));
        }
        let mut psi = Vec::with_capacity(rank);
        for i in 1..=rank {
            let key = format!("g{i}");
            psi.push(match get(&key) {
                Some((l, v)) => poly(l, v)?,
                None => Poly::zero(),
            });
        }
        if let Some(k) =
            map.keys().find(|k| is_g_key(k) && k[1..].parse::<usize>().map_or(true, |i| i == 0 || i > rank))
        {
            return Err(err(map[k].0, format!("`{k}` is out of range for rank {rank}")));
        }
        if psi[rank - 1].is_zero() {
            return Err(err(get(&format!("g{rank}")).map_or(0, |x| x.0), format!("g{rank} must be nonzero")));
        }

        let deg_min = num("deg_min", Some(1))? as usize;
        let deg_max = num("deg_max", None)? as usize;
        if deg_min == 0 {
            return Err(err(get("deg_min").map_or(0, |x| x.0), "deg_min must be at least 1"));
        }
        let max_work = num("max_work", Some(DEFAULT_MAX_WORK))?;
        let work = u64::from(q).checked_pow(deg_max as u32);
        if work.is_none_or(|w| w > max_work) {
            return Err(err(get("deg_max").map_or(0, |x| x.0), format!("q^deg_max exceeds max_work = {max_work}")));
        }

        let mut targets = poly_list("targets")?;
        if targets.is_empty() {
            targets.push(Poly::one());
        }
        let track = poly_list("track")?;
        let cutoff = num("cutoff", Some(3))? as usize;
        let gamma = num("gamma", Some(1))? as u32;
        if gamma == 0 || gamma as usize > rank {
            return Err(err(get("gamma").map_or(0, |x| x.0), "gamma must lie in [1, rank]"));
        }

        let degree_model = match get("degree_model") {
            None | Some((_, "full-gl")) => DegreeModelSpec::FullGl,
            Some((l, "table")) => {
                let (tl, tv) = get("degree_table").ok_or_else(|| err(l, "degree_model = table needs degree_table"))?;
                DegreeModelSpec::Table(parse_table(tl, tv, &ring, |s| s.parse::<BigUint>().ok())?)
            }
            Some((l, other)) => return Err(err(l, format!("unknown degree_model `{other}`"))),
        };
        let constant_field = match get("constant_field") {
            None | Some((_, "trivial")) => ConstantFieldSpec::Trivial,
            Some((_, "empirical")) => ConstantFieldSpec::Empirical,
            Some((l, "table")) => {
                let (tl, tv) =
                    get("constant_table").ok_or_else(|| err(l, "constant_field = table needs constant_table"))?;
                let t = parse_table(tl, tv, &ring, |s| s.parse::<u32>().ok().filter(|&c| c >= 1))?;
                ConstantFieldSpec::Table(t)
            }
            Some((l, other)) => return Err(err(l, format!("unknown constant_field `{other}`"))),
        };

        Ok(SurveyConfig {
            q,
            rank,
            psi,
            deg_min,
            deg_max,
            targets,
            track,
            cutoff,
            gamma,
            degree_model,
            constant_field,
            workers: num("workers", Some(0))? as usize,
            out: get("out").map(|(_, v)| PathBuf::from(v)),
            max_work,
        })
    }

    pub fn ring(&self) -> PolyRing {
        PolyRing::with_q(self.q).expect("validated on parse")
    }

    pub fn module(&self) -> Result<DrinfeldModule> {
        Ok(DrinfeldModule::new(&self.ring(), self.psi.clone())?)
    }

    pub fn degree_model(&self) -> DegreeModel {
        let mode = match &self.degree_model {
            DegreeModelSpec::FullGl => DegreeMode::FullGl,
            DegreeModelSpec::Table(t) => DegreeMode::UserTable(t.clone()),
        };
        DegreeModel { rank: self.rank as u32, gamma: self.gamma, mode }
    }

    /// The constant-field model; `empirical` is filled from `inferred`.
    pub fn constant_field_model(&self, inferred: &BTreeMap<Poly, u32>) -> ConstantFieldModel {
        match &self.constant_field {
            ConstantFieldSpec::Trivial => ConstantFieldModel::Trivial,
            ConstantFieldSpec::Empirical => ConstantFieldModel::Empirical(inferred.clone()),
            ConstantFieldSpec::Table(t) => ConstantFieldModel::UserTable(t.clone()),
        }
    }

    /// Moduli for splitting reports.
    pub fn tracked(&self) -> Vec<Poly> {
        if self.track.is_empty() {
            self.ring().enumerate_monic(1).collect()
        } else {
            self.track.clone()
        }
    }

    /// Canonical key/value form of every setting that affects the record
    /// file or reports (`workers` and `out` are excluded).
    pub fn to_pairs(&self) -> BTreeMap<String, String> {
        let ring = self.ring();
        let mut m = BTreeMap::new();
        m.insert("q".into(), self.q.to_string());
        m.insert("rank".into(), self.rank.to_string());
        for (i, g) in self.psi.iter().enumerate() {
            m.insert(format!("g{}", i + 1), ring.format(g));
        }
        m.insert("deg_min".into(), self.deg_min.to_string());
        m.insert("deg_max".into(), self.deg_max.to_string());
        m.insert("targets".into(), join(&ring, &self.targets));
        if !self.track.is_empty() {
            m.insert("track".into(), join(&ring, &self.track));
        }
        m.insert("cutoff".into(), self.cutoff.to_string());
        m.insert("gamma".into(), self.gamma.to_string());
        m.insert("max_work".into(), self.max_work.to_string());
        match &self.degree_model {
            DegreeModelSpec::FullGl => {
                m.insert("degree_model".into(), "full-gl".into());
            }
            DegreeModelSpec::Table(t) => {
                m.insert("degree_model".into(), "table".into());
                m.insert("degree_table".into(), format_table(&ring, t));
            }
        }
        match &self.constant_field {
            ConstantFieldSpec::Trivial => {
                m.insert("constant_field".into(), "trivial".into());
            }
            ConstantFieldSpec::Empirical => {
                m.insert("constant_field".into(), "empirical".into());
            }
            ConstantFieldSpec::Table(t) => {
                m.insert("constant_field".into(), "table".into());
                m.insert("constant_table".into(), format_table(&ring, t));
            }
        }
        m
    }

    pub fn from_map(map: &BTreeMap<String, String>) -> Result<Self> {
        Self::from_pairs(map.iter().map(|(k, v)| (0, k.clone(), v.clone())).collect())
    }

    /// SHA-256 over the settings that determine individual records: the
    /// field and the module. Ranges and report settings may change between
    /// resumed runs.
    pub fn module_hash(&self) -> String {
        let ring = self.ring();
        let mut s = format!("q={}\nrank={}\n", self.q, self.rank);
        for (i, g) in self.psi.iter().enumerate() {
            let _ = writeln!(s, "g{}={}", i + 1, ring.format(g));
        }
        format!("{:x}", Sha256::digest(s.as_bytes()))
    }
}

fn is_g_key(k: &str) -> bool {
    k.len() > 1 && k.starts_with('g') && k[1..].chars().all(|c| c.is_ascii_digit())
}

fn join(ring: &PolyRing, ps: &[Poly]) -> String {
    ps.iter().map(|p| ring.format(p)).collect::<Vec<_>>().join("; ")
}

fn parse_table<V>(
    line: usize,
    text: &str,
    ring: &PolyRing,
    value: impl Fn(&str) -> Option<V>,
) -> Result<BTreeMap<Poly, V>> {
    let mut out = BTreeMap::new();
    for entry in text.split(';').map(str::trim).filter(|s| !s.is_empty()) {
        let (k, v) =
            entry.split_once(':').ok_or_else(|| err(line, format!("table entry `{entry}` needs `poly : value`")))?;
        let p = ring.parse(k.trim()).map_err(|e| err(line, e.to_string()))?;
        let v = value(v.trim()).ok_or_else(|| err(line, format!("bad table value in `{entry}`")))?;
        out.insert(ring.monic(&p), v);
    }
    Ok(out)
}

fn format_table<V: ToString>(ring: &PolyRing, t: &BTreeMap<Poly, V>) -> String {
    t.iter().map(|(k, v)| format!("{} : {}", ring.format(k), v.to_string())).collect::<Vec<_>>().join("; ")
}
