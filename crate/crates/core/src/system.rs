//! The (n,r,s) system abstraction: a multiset of lines of PG(r−1,2) with
//! hyperplane-count verification, spanning checks, point expansion, and the
//! union/extension operations behind the additivity of lower bounds.
//!
//! An (n,r,s) system is a multiset of n lines such that every hyperplane
//! contains at most s of them and some hyperplane contains exactly s; it is
//! spanning iff s < n, equivalently iff the lines jointly span `F_2^r`.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::geom::{
    enumerate_hyperplanes, line_in_dual, rref, GeomError, Gf2Vector, Hyperplane, Line,
    MAX_ENUM_R,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SystemError {
    #[error("entry {index}: degenerate generator ({source})")]
    DegenerateEntry { index: usize, source: GeomError },
    #[error("entry {index}: {source}")]
    BadEntry { index: usize, source: GeomError },
    #[error("entry {index}: expected two rows separated by '/' or whitespace, got {got}")]
    BadEntryShape { index: usize, got: usize },
    #[error("header says r={header} but r={expected} was requested")]
    HeaderMismatch { header: u8, expected: u8 },
    #[error("missing `r=<r>` header line")]
    MissingHeader,
    #[error("invalid header line {0:?}")]
    BadHeader(String),
    #[error("a line system must contain at least one line")]
    Empty,
    #[error("ambient dimension mismatch: {0} vs {1}")]
    DimMismatch(u8, u8),
    #[error("r={0} exceeds the hyperplane-enumeration limit r ≤ {MAX_ENUM_R}")]
    EnumLimit(u8),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

/// Structured verification failure: the expectations and what was found.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error(
    "system verification failed: expected (n={expected_n}, s={expected_s}, spanning), \
     got (n={actual_n}, s_max={actual_s_max}, spanning={actual_spanning})"
)]
pub struct VerifyFailure {
    pub expected_n: u64,
    pub expected_s: u64,
    pub actual_n: u64,
    pub actual_s_max: u64,
    pub actual_spanning: bool,
    pub report: SystemReport,
}

/// A multiset of lines of PG(r−1,2), keyed by canonical line.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LineSystem {
    r: u8,
    lines: BTreeMap<Line, u64>,
}

/// Point multiset produced by replacing each line by its three points.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PointMultiset {
    r: u8,
    counts: BTreeMap<u32, u64>,
}

/// Exact verification data for a system.
#[derive(Clone, Copy, PartialEq, Eq, Debug, serde::Serialize)]
pub struct SystemReport {
    pub n: u64,
    pub s_max: u64,
    pub spanning: bool,
    /// Number of hyperplanes whose line count equals `s_max`.
    pub achieving_hyperplanes: u64,
    pub max_point_multiplicity: u64,
    /// Rank of the union of all line points; spanning iff rank = r.
    pub rank: usize,
}

impl LineSystem {
    pub fn new(r: u8, entries: impl IntoIterator<Item = (Line, u64)>) -> Result<Self, SystemError> {
        if r > MAX_ENUM_R {
            return Err(SystemError::EnumLimit(r));
        }
        let mut lines = BTreeMap::new();
        for (line, mult) in entries {
            if line.r() != r {
                return Err(SystemError::DimMismatch(r, line.r()));
            }
            if mult > 0 {
                *lines.entry(line).or_insert(0) += mult;
            }
        }
        if lines.is_empty() {
            return Err(SystemError::Empty);
        }
        Ok(LineSystem { r, lines })
    }

    pub fn from_lines(r: u8, lines: impl IntoIterator<Item = Line>) -> Result<Self, SystemError> {
        Self::new(r, lines.into_iter().map(|l| (l, 1)))
    }

    pub fn r(&self) -> u8 {
        self.r
    }

    /// n = total multiplicity.
    pub fn n(&self) -> u64 {
        self.lines.values().sum()
    }

    pub fn distinct_lines(&self) -> usize {
        self.lines.len()
    }

    pub fn multiplicity(&self, line: &Line) -> u64 {
        self.lines.get(line).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Line, u64)> {
        self.lines.iter().map(|(l, &m)| (l, m))
    }

    /// Multiset union: multiplicities add.
    pub fn union(&self, other: &LineSystem) -> Result<LineSystem, SystemError> {
        if self.r != other.r {
            return Err(SystemError::DimMismatch(self.r, other.r));
        }
        let mut lines = self.lines.clone();
        for (l, m) in other.iter() {
            *lines.entry(*l).or_insert(0) += m;
        }
        Ok(LineSystem { r: self.r, lines })
    }

    /// Adds one copy of `line`.
    pub fn add_line(&self, line: Line) -> Result<LineSystem, SystemError> {
        if self.r != line.r() {
            return Err(SystemError::DimMismatch(self.r, line.r()));
        }
        let mut lines = self.lines.clone();
        *lines.entry(line).or_insert(0) += 1;
        Ok(LineSystem { r: self.r, lines })
    }

    /// Removes `mult` copies of `line`; `None` if not present often enough.
    pub fn checked_subtract(&self, line: &Line, mult: u64) -> Option<LineSystem> {
        let have = self.multiplicity(line);
        if have < mult {
            return None;
        }
        let mut lines = self.lines.clone();
        if have == mult {
            lines.remove(line);
        } else {
            lines.insert(*line, have - mult);
        }
        if lines.is_empty() {
            return None;
        }
        Some(LineSystem { r: self.r, lines })
    }

    /// Serializes in the canonical text format (header plus one entry per
    /// line occurrence, canonical basis rows joined by '/').
    pub fn serialize(&self) -> String {
        let mut out = format!("r={}\n", self.r);
        for (line, mult) in self.iter() {
            let entry = line.to_string();
            for _ in 0..mult {
                out.push_str(&entry);
                out.push('\n');
            }
        }
        out
    }
}

impl fmt::Display for LineSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.serialize())
    }
}

/// Parses system body text: one entry per line, two binary strings of length
/// `r` separated by '/' or whitespace; `#` starts a comment; a leading
/// `r=<r>` header is accepted if consistent.
pub fn parse_system(text: &str, r: u8) -> Result<LineSystem, SystemError> {
    let mut entries = Vec::new();
    let mut index = 0usize;
    for raw in text.lines() {
        let stripped = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let stripped = stripped.trim();
        if stripped.is_empty() {
            continue;
        }
        if let Some(rest) = stripped.strip_prefix("r=") {
            let header: u8 = rest
                .trim()
                .parse()
                .map_err(|_| SystemError::BadHeader(stripped.to_string()))?;
            if header != r {
                return Err(SystemError::HeaderMismatch { header, expected: r });
            }
            continue;
        }
        index += 1;
        let rows: Vec<&str> = stripped
            .split(|c: char| c == '/' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .collect();
        if rows.len() != 2 {
            return Err(SystemError::BadEntryShape { index, got: rows.len() });
        }
        let a = Gf2Vector::parse_with_r(rows[0], r)
            .map_err(|source| SystemError::BadEntry { index, source })?;
        let b = Gf2Vector::parse_with_r(rows[1], r)
            .map_err(|source| SystemError::BadEntry { index, source })?;
        let line = Line::from_points(a, b).map_err(|source| match source {
            GeomError::NotALine(_) | GeomError::ZeroPoint => {
                SystemError::DegenerateEntry { index, source }
            }
            other => SystemError::BadEntry { index, source: other },
        })?;
        entries.push((line, 1));
    }
    LineSystem::new(r, entries)
}

/// Parses a full system file: `r=<r>` header, then entries.
pub fn read_system(text: &str) -> Result<LineSystem, SystemError> {
    for raw in text.lines() {
        let stripped = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let stripped = stripped.trim();
        if stripped.is_empty() {
            continue;
        }
        if let Some(rest) = stripped.strip_prefix("r=") {
            let r: u8 = rest
                .trim()
                .parse()
                .map_err(|_| SystemError::BadHeader(stripped.to_string()))?;
            return parse_system(text, r);
        }
        return Err(SystemError::MissingHeader);
    }
    Err(SystemError::MissingHeader)
}

/// count(H) = Σ_{L ⊆ H} multiplicity(L) for all 2ʳ−1 hyperplanes, ascending
/// by dual bitmask.
pub fn hyperplane_counts(s: &LineSystem) -> Vec<(Hyperplane, u64)> {
    let hyperplanes = enumerate_hyperplanes(s.r()).expect("r validated at construction");
    hyperplanes
        .into_iter()
        .map(|h| {
            let dual = h.dual_bits();
            let count = s
                .iter()
                .filter(|(line, _)| line_in_dual(line, dual))
                .map(|(_, mult)| mult)
                .sum();
            (h, count)
        })
        .collect()
}

/// Computes the exact report for a system: n, max hyperplane count, number of
/// attaining hyperplanes, spanning (via rank, cross-checked against s < n),
/// and the maximum point multiplicity of the expansion.
pub fn analyze(s: &LineSystem) -> SystemReport {
    let n = s.n();
    let counts = hyperplane_counts(s);
    let s_max = counts.iter().map(|&(_, c)| c).max().unwrap_or(0);
    let achieving = counts.iter().filter(|&&(_, c)| c == s_max).count() as u64;
    let expansion = point_expansion(s);
    let max_pm = expansion.max_multiplicity();
    let pts: Vec<Gf2Vector> = expansion.points().collect();
    let rank = rref(&pts).map(|sub| sub.dim()).unwrap_or(0);
    let spanning = rank == s.r() as usize;
    // Def. 2.1 equivalence: spanning iff s_max < n. Both are computed; they
    // can only disagree on a broken implementation.
    debug_assert_eq!(spanning, s_max < n);
    SystemReport {
        n,
        s_max,
        spanning,
        achieving_hyperplanes: achieving,
        max_point_multiplicity: max_pm,
        rank,
    }
}

/// Verifies a system against expected (n, s); passes iff n and the exact
/// maximum hyperplane count match and the system is spanning.
pub fn verify_system(
    s: &LineSystem,
    expected_n: u64,
    expected_s: u64,
) -> Result<SystemReport, VerifyFailure> {
    let report = analyze(s);
    if report.n == expected_n && report.s_max == expected_s && report.spanning {
        Ok(report)
    } else {
        Err(VerifyFailure {
            expected_n,
            expected_s,
            actual_n: report.n,
            actual_s_max: report.s_max,
            actual_spanning: report.spanning,
            report,
        })
    }
}

/// Replaces each line by its three points (with multiplicity): 3n points.
pub fn point_expansion(s: &LineSystem) -> PointMultiset {
    let mut counts: BTreeMap<u32, u64> = BTreeMap::new();
    for (line, mult) in s.iter() {
        for bits in line.point_bits() {
            *counts.entry(bits).or_insert(0) += mult;
        }
    }
    PointMultiset { r: s.r(), counts }
}

impl PointMultiset {
    pub fn new(r: u8, counts: impl IntoIterator<Item = (Gf2Vector, u64)>) -> Result<Self, SystemError> {
        let mut map = BTreeMap::new();
        for (p, c) in counts {
            if p.r() != r {
                return Err(SystemError::DimMismatch(r, p.r()));
            }
            if p.is_zero() {
                return Err(SystemError::Geom(GeomError::ZeroPoint));
            }
            if c > 0 {
                *map.entry(p.bits()).or_insert(0) += c;
            }
        }
        Ok(PointMultiset { r, counts: map })
    }

    pub fn r(&self) -> u8 {
        self.r
    }

    /// Total multiplicity (3n when produced from an n-line system).
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn multiplicity(&self, p: Gf2Vector) -> u64 {
        self.counts.get(&p.bits()).copied().unwrap_or(0)
    }

    pub fn max_multiplicity(&self) -> u64 {
        self.counts.values().copied().max().unwrap_or(0)
    }

    pub fn distinct_points(&self) -> usize {
        self.counts.len()
    }

    /// Distinct support points, ascending.
    pub fn points(&self) -> impl Iterator<Item = Gf2Vector> + '_ {
        let r = self.r;
        self.counts.keys().map(move |&bits| {
            Gf2Vector::new(bits, r).expect("validated at construction")
        })
    }

    pub fn iter(&self) -> impl Iterator<Item = (Gf2Vector, u64)> + '_ {
        let r = self.r;
        self.counts.iter().map(move |(&bits, &c)| {
            (Gf2Vector::new(bits, r).expect("validated at construction"), c)
        })
    }

    /// Total multiplicity of points lying in the given hyperplane.
    pub fn count_in_hyperplane(&self, h: &Hyperplane) -> Result<u64, SystemError> {
        if h.r() != self.r {
            return Err(SystemError::DimMismatch(self.r, h.r()));
        }
        let dual = h.dual_bits();
        Ok(self
            .counts
            .iter()
            .filter(|(&bits, _)| (bits & dual).count_ones() % 2 == 0)
            .map(|(_, &c)| c)
            .sum())
    }
}
