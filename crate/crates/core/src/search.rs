//! ILP model generation for line-system searches — plain and
//! symmetry-reduced (orbit) variants exported as CPLEX-style LP or free MPS
//! text — plus a self-contained exhaustive maximizer for desk-scale
//! instances.
//!
//! The exhaustive search is deliberately independent of the bound machinery:
//! its pruning uses only elementary double counting (hyperplane budgets and
//! pairwise co-hyperplane slots), so its results can serve as an oracle for
//! the rest of the crate.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt::Write as _;
use std::str::FromStr;

use thiserror::Error;

use crate::geom::{
    enumerate_hyperplanes, enumerate_lines, line_in_dual, rref_bits, GeomError, Line,
};
use crate::system::{analyze, LineSystem, SystemError};

/// Largest rank for which plain ILP export is supported.
pub const MAX_ILP_R: u8 = 12;
/// Group-closure element cap for orbit models.
pub const GROUP_CAP: usize = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("unsupported format string: {0:?} (expected \"lp\" or \"mps\")")]
    UnsupportedFormat(String),
    #[error("limits exceeded: {0}")]
    LimitsExceeded(String),
    #[error("generator {0} is singular")]
    SingularGenerator(usize),
    #[error("group closure exceeds {0} elements")]
    GroupTooLarge(usize),
    #[error("solution vector mismatch: {0}")]
    BadSolution(String),
    #[error("model text parse error: {0}")]
    ParseModel(String),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    System(#[from] SystemError),
}

/// Output syntax for exported models.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ModelFormat {
    Lp,
    Mps,
}

impl FromStr for ModelFormat {
    type Err = SearchError;

    fn from_str(s: &str) -> Result<Self, SearchError> {
        match s.to_ascii_lowercase().as_str() {
            "lp" => Ok(ModelFormat::Lp),
            "mps" => Ok(ModelFormat::Mps),
            other => Err(SearchError::UnsupportedFormat(other.to_string())),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Sense {
    Le,
    Eq,
}

/// One integer variable: a line (or line orbit) with its multiplicity bound
/// and the number of lines it stands for.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IlpVar {
    pub name: String,
    pub upper: u64,
    /// Objective / cardinality coefficient: 1 for a single line, the orbit
    /// size for an orbit variable.
    pub size: u64,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IlpRow {
    pub name: String,
    /// (coefficient, variable index) with coefficients ≥ 1.
    pub terms: Vec<(u64, usize)>,
    pub sense: Sense,
    pub rhs: u64,
}

/// The hyperplane model: maximize Σ x_L (or fix Σ x_L = n) subject to
/// Σ_{L ≤ H} x_L ≤ s for every hyperplane H, with 0 ≤ x_L ≤ s integer.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IlpModel {
    pub r: u8,
    pub s: u64,
    pub n: Option<u64>,
    pub vars: Vec<IlpVar>,
    pub rows: Vec<IlpRow>,
}

fn var_name(line: &Line) -> String {
    let [a, b, _] = line.point_bits();
    format!("x{a}_{b}")
}

/// Builds the plain (one variable per line) model.
pub fn build_ilp_model(r: u8, s: u64, n: Option<u64>) -> Result<IlpModel, SearchError> {
    if r < 3 || r > MAX_ILP_R {
        return Err(SearchError::Domain(format!(
            "ilp export needs 3 ≤ r ≤ {MAX_ILP_R}, got {r}"
        )));
    }
    if s == 0 {
        return Err(SearchError::Domain("ilp export needs s ≥ 1".into()));
    }
    let lines = enumerate_lines(r)?;
    let vars: Vec<IlpVar> =
        lines.iter().map(|l| IlpVar { name: var_name(l), upper: s, size: 1 }).collect();
    let mut rows = Vec::new();
    for (h_idx, h) in enumerate_hyperplanes(r)?.iter().enumerate() {
        let dual = h.dual_bits();
        let terms: Vec<(u64, usize)> = lines
            .iter()
            .enumerate()
            .filter(|(_, l)| line_in_dual(l, dual))
            .map(|(i, _)| (1, i))
            .collect();
        rows.push(IlpRow { name: format!("h{}", h_idx + 1), terms, sense: Sense::Le, rhs: s });
    }
    if let Some(n) = n {
        let terms = (0..vars.len()).map(|i| (vars[i].size, i)).collect();
        rows.push(IlpRow { name: "card".into(), terms, sense: Sense::Eq, rhs: n });
    }
    Ok(IlpModel { r, s, n, vars, rows })
}

/// Renders the model and returns its text; `format` is "lp" or "mps".
pub fn export_ilp(r: u8, s: u64, n: Option<u64>, format: &str) -> Result<String, SearchError> {
    let fmt = ModelFormat::from_str(format)?;
    Ok(build_ilp_model(r, s, n)?.render(fmt))
}

impl IlpModel {
    pub fn render(&self, format: ModelFormat) -> String {
        match format {
            ModelFormat::Lp => self.render_lp(),
            ModelFormat::Mps => self.render_mps(),
        }
    }

    fn title(&self) -> String {
        match self.n {
            Some(n) => format!("r={} s={} feasibility n={n}", self.r, self.s),
            None => format!("r={} s={} maximize", self.r, self.s),
        }
    }

    fn render_lp(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "\\ line-system model: {}", self.title());
        out.push_str("Maximize\n");
        let obj: Vec<(u64, usize)> = if self.n.is_some() {
            // Pure feasibility: a constant-zero objective keeps the format
            // valid without steering the solver.
            vec![(0, 0)]
        } else {
            (0..self.vars.len()).map(|i| (self.vars[i].size, i)).collect()
        };
        self.write_lp_terms(&mut out, "obj", &obj, None);
        out.push_str("Subject To\n");
        for row in &self.rows {
            let tail = match row.sense {
                Sense::Le => format!("<= {}", row.rhs),
                Sense::Eq => format!("= {}", row.rhs),
            };
            self.write_lp_terms(&mut out, &row.name, &row.terms, Some(&tail));
        }
        out.push_str("Bounds\n");
        for var in &self.vars {
            let _ = writeln!(out, " 0 <= {} <= {}", var.name, var.upper);
        }
        out.push_str("Generals\n");
        for chunk in self.vars.chunks(10) {
            out.push(' ');
            let names: Vec<&str> = chunk.iter().map(|v| v.name.as_str()).collect();
            out.push_str(&names.join(" "));
            out.push('\n');
        }
        out.push_str("End\n");
        out
    }

    fn write_lp_terms(
        &self,
        out: &mut String,
        name: &str,
        terms: &[(u64, usize)],
        tail: Option<&str>,
    ) {
        let _ = write!(out, " {name}:");
        for (pos, &(coef, var)) in terms.iter().enumerate() {
            if pos > 0 && pos % 8 == 0 {
                out.push_str("\n   ");
            }
            if pos > 0 {
                out.push_str(" +");
            }
            if coef == 1 {
                let _ = write!(out, " {}", self.vars[var].name);
            } else {
                let _ = write!(out, " {coef} {}", self.vars[var].name);
            }
        }
        if let Some(tail) = tail {
            let _ = write!(out, " {tail}");
        }
        out.push('\n');
    }

    fn render_mps(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "NAME LINESYS_{}", self.title().replace([' ', '='], "_"));
        out.push_str("ROWS\n N obj\n");
        for row in &self.rows {
            let tag = match row.sense {
                Sense::Le => 'L',
                Sense::Eq => 'E',
            };
            let _ = writeln!(out, " {tag} {}", row.name);
        }
        // Column-major entries, grouped per variable inside one integer block.
        let mut columns: Vec<Vec<(String, u64)>> = vec![Vec::new(); self.vars.len()];
        if self.n.is_none() {
            for (i, var) in self.vars.iter().enumerate() {
                columns[i].push(("obj".into(), var.size));
            }
        }
        for row in &self.rows {
            for &(coef, var) in &row.terms {
                columns[var].push((row.name.clone(), coef));
            }
        }
        out.push_str("COLUMNS\n M1 'MARKER' 'INTORG'\n");
        for (i, var) in self.vars.iter().enumerate() {
            for (row, coef) in &columns[i] {
                let _ = writeln!(out, " {} {row} {coef}", var.name);
            }
        }
        out.push_str(" M2 'MARKER' 'INTEND'\nRHS\n");
        for row in &self.rows {
            let _ = writeln!(out, " rhs {} {}", row.name, row.rhs);
        }
        out.push_str("BOUNDS\n");
        for var in &self.vars {
            let _ = writeln!(out, " UP bnd {} {}", var.name, var.upper);
        }
        out.push_str("ENDATA\n");
        out
    }
}

// ---------------------------------------------------------------------------
// Reference LP reader.

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ParsedRow {
    pub name: String,
    pub terms: Vec<(i64, String)>,
    pub sense: Sense,
    pub rhs: i64,
}

/// Minimal reference reader for the LP text this module emits; used to check
/// that exported text reproduces the constraint matrix exactly.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct ParsedLp {
    pub objective: Vec<(i64, String)>,
    pub rows: Vec<ParsedRow>,
    pub bounds: BTreeMap<String, (i64, i64)>,
    pub generals: Vec<String>,
}

/// Parses CPLEX-style LP text (the dialect `render` emits).
pub fn parse_lp_model(text: &str) -> Result<ParsedLp, SearchError> {
    #[derive(PartialEq, Clone, Copy)]
    enum Section {
        None,
        Objective,
        Rows,
        Bounds,
        Generals,
    }
    let mut section = Section::None;
    let mut parsed = ParsedLp::default();
    let mut row_tokens: Vec<String> = Vec::new();

    let flush = |tokens: &mut Vec<String>, parsed: &mut ParsedLp, objective: bool| -> Result<(), SearchError> {
        if tokens.is_empty() {
            return Ok(());
        }
        let first = tokens[0].clone();
        let name = first
            .strip_suffix(':')
            .ok_or_else(|| SearchError::ParseModel(format!("row must start with a label: {first}")))?
            .to_string();
        let mut terms = Vec::new();
        let mut sense = None;
        let mut rhs = 0i64;
        let mut sign = 1i64;
        let mut coef: Option<i64> = None;
        let mut it = tokens[1..].iter();
        while let Some(tok) = it.next() {
            match tok.as_str() {
                "+" => sign = 1,
                "-" => sign = -1,
                "<=" | "=" | ">=" => {
                    sense = Some(if tok == "=" { Sense::Eq } else { Sense::Le });
                    let v = it.next().ok_or_else(|| {
                        SearchError::ParseModel(format!("row {name}: missing rhs"))
                    })?;
                    rhs = v
                        .parse()
                        .map_err(|_| SearchError::ParseModel(format!("row {name}: bad rhs {v}")))?;
                }
                t => {
                    if let Ok(v) = t.parse::<i64>() {
                        coef = Some(sign * v);
                    } else {
                        terms.push((coef.take().unwrap_or(sign), t.to_string()));
                        sign = 1;
                    }
                }
            }
        }
        if objective {
            parsed.objective = terms;
        } else {
            let sense = sense
                .ok_or_else(|| SearchError::ParseModel(format!("row {name}: missing sense")))?;
            parsed.rows.push(ParsedRow { name, terms, sense, rhs });
        }
        tokens.clear();
        Ok(())
    };

    for raw in text.lines() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('\\') {
            continue;
        }
        let lower = line.to_ascii_lowercase();
        let new_section = match lower.as_str() {
            "maximize" | "minimize" => Some(Section::Objective),
            "subject to" | "st" | "s.t." => Some(Section::Rows),
            "bounds" => Some(Section::Bounds),
            "generals" | "general" | "integers" => Some(Section::Generals),
            "end" => Some(Section::None),
            _ => None,
        };
        if let Some(next) = new_section {
            flush(&mut row_tokens, &mut parsed, section == Section::Objective)?;
            section = next;
            continue;
        }
        match section {
            Section::Objective => {
                row_tokens.extend(line.split_whitespace().map(String::from));
            }
            Section::Rows => {
                for tok in line.split_whitespace() {
                    if tok.ends_with(':') && !row_tokens.is_empty() {
                        flush(&mut row_tokens, &mut parsed, false)?;
                    }
                    row_tokens.push(tok.to_string());
                }
            }
            Section::Bounds => {
                // " lo <= name <= hi"
                let toks: Vec<&str> = line.split_whitespace().collect();
                if toks.len() == 5 && toks[1] == "<=" && toks[3] == "<=" {
                    let lo = toks[0].parse().map_err(|_| {
                        SearchError::ParseModel(format!("bad bound line: {line}"))
                    })?;
                    let hi = toks[4].parse().map_err(|_| {
                        SearchError::ParseModel(format!("bad bound line: {line}"))
                    })?;
                    parsed.bounds.insert(toks[2].to_string(), (lo, hi));
                } else {
                    return Err(SearchError::ParseModel(format!("bad bound line: {line}")));
                }
            }
            Section::Generals => {
                parsed.generals.extend(line.split_whitespace().map(String::from));
            }
            Section::None => {
                return Err(SearchError::ParseModel(format!("text outside any section: {line}")));
            }
        }
    }
    flush(&mut row_tokens, &mut parsed, section == Section::Objective)?;
    Ok(parsed)
}

// ---------------------------------------------------------------------------
// Exhaustive maximizer.

fn c2(x: u64) -> u64 {
    x * x.saturating_sub(1) / 2
}

struct Dfs {
    r: u8,
    s: u64,
    n_cap: u64,
    lines: Vec<Line>,
    line_hyps: Vec<Vec<usize>>,
    /// Hyperplanes through one line: 2^{r−2}−1.
    k_line: u64,
    /// Minimum hyperplanes through a pair of lines (0 disables the bound).
    k_pair: u64,
    budgets: Vec<u64>,
    total_budget: u64,
    /// Σ_h (C(s,2) − C(count_h,2)): remaining co-hyperplane pair slots.
    pair_slots: u64,
    n_cur: u64,
    stack: Vec<(usize, u64)>,
    pivots: [u32; 32],
    rank: u32,
    best_n: u64,
    best: Vec<(usize, u64)>,
    done: bool,
}

impl Dfs {
    fn bound(&self) -> u64 {
        let mut bound = self.n_cur + self.total_budget / self.k_line;
        if self.k_pair > 0 {
            let mut t = self.n_cur;
            while t < bound && self.k_pair * (c2(t + 1) - c2(self.n_cur)) <= self.pair_slots {
                t += 1;
            }
            bound = t;
        }
        bound.min(self.n_cap)
    }

    fn add_point(&mut self, mut v: u32, journal: &mut Vec<u8>) {
        while v != 0 {
            let lead = 31 - v.leading_zeros();
            if self.pivots[lead as usize] == 0 {
                self.pivots[lead as usize] = v;
                journal.push(lead as u8);
                self.rank += 1;
                return;
            }
            v ^= self.pivots[lead as usize];
        }
    }

    fn record_leaf(&mut self) {
        if self.n_cur > self.best_n && self.rank == u32::from(self.r) {
            self.best_n = self.n_cur;
            self.best = self.stack.clone();
            if self.best_n == self.n_cap {
                self.done = true;
            }
        }
    }

    fn run(&mut self, idx: usize) {
        if self.done || self.bound() <= self.best_n {
            return;
        }
        if idx == self.lines.len() {
            self.record_leaf();
            return;
        }
        let mut cap = self.line_hyps[idx].iter().map(|&h| self.budgets[h]).min().unwrap_or(0);
        cap = cap.min(self.n_cap - self.n_cur);
        // Symmetry breaking: GL(r,2) is transitive on lines, so some optimal
        // spanning system contains the least line; force it present.
        let floor = if idx == 0 { 1 } else { 0 };
        if cap < floor {
            return;
        }
        let mut m = cap;
        loop {
            if m > 0 {
                let mut journal = Vec::new();
                for &h in &self.line_hyps[idx] {
                    let used = self.s - self.budgets[h];
                    self.pair_slots -= c2(used + m) - c2(used);
                    self.budgets[h] -= m;
                }
                self.total_budget -= m * self.k_line;
                let [a, b, _] = self.lines[idx].point_bits();
                self.add_point(a, &mut journal);
                self.add_point(b, &mut journal);
                self.n_cur += m;
                self.stack.push((idx, m));

                self.run(idx + 1);

                self.stack.pop();
                self.n_cur -= m;
                for slot in journal {
                    self.pivots[slot as usize] = 0;
                    self.rank -= 1;
                }
                self.total_budget += m * self.k_line;
                for &h in &self.line_hyps[idx] {
                    self.budgets[h] += m;
                    let used = self.s - self.budgets[h];
                    self.pair_slots += c2(used + m) - c2(used);
                }
                if self.done {
                    return;
                }
            } else {
                self.run(idx + 1);
            }
            if m == floor {
                break;
            }
            m -= 1;
        }
    }
}

/// Exact maximum size n* ≤ n_cap of a spanning system with every hyperplane
/// count ≤ s, with a verified witness. Returns (0, None) when no spanning
/// system exists within the cap.
///
/// Desk limits: r ≤ 5, or r = 6 with s ≤ 2.
pub fn exhaustive_max(
    r: u8,
    s: u64,
    n_cap: u64,
) -> Result<(u64, Option<LineSystem>), SearchError> {
    if r < 3 || s == 0 {
        return Err(SearchError::Domain(format!(
            "exhaustive_max needs r ≥ 3 and s ≥ 1, got r={r}, s={s}"
        )));
    }
    if !(r <= 5 || (r == 6 && s <= 2)) {
        return Err(SearchError::LimitsExceeded(format!(
            "exhaustive_max supports r ≤ 5, or r = 6 with s ≤ 2; got r={r}, s={s}"
        )));
    }
    let lines = enumerate_lines(r)?;
    let hyperplanes = enumerate_hyperplanes(r)?;
    let line_hyps: Vec<Vec<usize>> = lines
        .iter()
        .map(|l| {
            hyperplanes
                .iter()
                .enumerate()
                .filter(|(_, h)| line_in_dual(l, h.dual_bits()))
                .map(|(i, _)| i)
                .collect()
        })
        .collect();
    let k_line = (1u64 << (r - 2)) - 1;
    let k_pair = if r >= 5 { (1u64 << (r - 4)) - 1 } else { 0 };
    let h_count = hyperplanes.len() as u64;
    let mut dfs = Dfs {
        r,
        s,
        n_cap,
        line_hyps,
        k_line,
        k_pair,
        budgets: vec![s; hyperplanes.len()],
        total_budget: s * h_count,
        pair_slots: h_count * c2(s),
        n_cur: 0,
        stack: Vec::new(),
        pivots: [0; 32],
        rank: 0,
        best_n: 0,
        best: Vec::new(),
        done: false,
        lines,
    };
    dfs.run(0);
    if dfs.best_n == 0 {
        return Ok((0, None));
    }
    let entries: Vec<(Line, u64)> = dfs.best.iter().map(|&(i, m)| (dfs.lines[i], m)).collect();
    let witness = LineSystem::new(r, entries)?;
    let report = analyze(&witness);
    if report.n != dfs.best_n || report.s_max > s || !report.spanning {
        return Err(SearchError::BadSolution(format!(
            "internal: witness re-verification failed (n={}, s_max={}, spanning={})",
            report.n, report.s_max, report.spanning
        )));
    }
    Ok((dfs.best_n, Some(witness)))
}

// ---------------------------------------------------------------------------
// Orbit models.

fn apply_matrix(rows: &[u32], p: u32) -> u32 {
    let mut out = 0;
    let mut bits = p;
    while bits != 0 {
        let i = bits.trailing_zeros() as usize;
        out ^= rows[i];
        bits &= bits - 1;
    }
    out
}

fn compose(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().map(|&row| apply_matrix(b, row)).collect()
}

fn validate_generators(r: u8, generators: &[Vec<u32>]) -> Result<(), SearchError> {
    for (idx, g) in generators.iter().enumerate() {
        if g.len() != r as usize || g.iter().any(|&row| row >= (1u32 << r)) {
            return Err(SearchError::Domain(format!(
                "generator {idx} is not an {r}×{r} matrix"
            )));
        }
        let rank = rref_bits(g, r)?.dim();
        if rank != r as usize {
            return Err(SearchError::SingularGenerator(idx));
        }
    }
    Ok(())
}

fn closure_with_cap(
    r: u8,
    generators: &[Vec<u32>],
    cap: usize,
) -> Result<Vec<Vec<u32>>, SearchError> {
    let identity: Vec<u32> = (0..r).map(|i| 1u32 << i).collect();
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    let mut order: Vec<Vec<u32>> = Vec::new();
    let mut queue = vec![identity.clone()];
    seen.insert(identity);
    while let Some(m) = queue.pop() {
        order.push(m.clone());
        for g in generators {
            let prod = compose(&m, g);
            if seen.insert(prod.clone()) {
                if seen.len() > cap {
                    return Err(SearchError::GroupTooLarge(cap));
                }
                queue.push(prod);
            }
        }
    }
    Ok(order)
}

/// Closure of the generated matrix group, capped at `GROUP_CAP` elements.
pub fn group_closure(r: u8, generators: &[Vec<u32>]) -> Result<Vec<Vec<u32>>, SearchError> {
    validate_generators(r, generators)?;
    closure_with_cap(r, generators, GROUP_CAP)
}

fn line_image(rows: &[u32], line: &Line, r: u8) -> Result<Line, SearchError> {
    let [a, b, _] = line.point_bits();
    let pa = crate::geom::Gf2Vector::new(apply_matrix(rows, a), r)?;
    let pb = crate::geom::Gf2Vector::new(apply_matrix(rows, b), r)?;
    Ok(Line::from_points(pa, pb)?)
}

/// The symmetry-reduced model: one variable per line orbit, hyperplane
/// constraints aggregated with orbit-incidence coefficients (hyperplanes
/// whose aggregated rows coincide are emitted once, under the first
/// hyperplane's name).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OrbitModel {
    pub r: u8,
    pub s: u64,
    pub n: Option<u64>,
    pub group_order: usize,
    /// Orbits sorted by ascending least member; each orbit ascending.
    pub orbits: Vec<Vec<Line>>,
    pub model: IlpModel,
}

impl OrbitModel {
    pub fn render(&self, format: ModelFormat) -> String {
        self.model.render(format)
    }

    /// Expands an orbit multiplicity vector into the invariant line system it
    /// encodes.
    pub fn lift(&self, y: &[u64]) -> Result<LineSystem, SearchError> {
        if y.len() != self.orbits.len() {
            return Err(SearchError::BadSolution(format!(
                "expected {} orbit multiplicities, got {}",
                self.orbits.len(),
                y.len()
            )));
        }
        let mut entries: Vec<(Line, u64)> = Vec::new();
        for (orbit, &mult) in self.orbits.iter().zip(y) {
            if mult > 0 {
                entries.extend(orbit.iter().map(|&l| (l, mult)));
            }
        }
        Ok(LineSystem::new(self.r, entries)?)
    }
}

/// Builds the orbit-reduced model for the group generated by `generators`.
pub fn build_orbit_model(
    r: u8,
    s: u64,
    n: Option<u64>,
    generators: &[Vec<u32>],
) -> Result<OrbitModel, SearchError> {
    if r < 3 || r > MAX_ILP_R {
        return Err(SearchError::Domain(format!(
            "orbit model needs 3 ≤ r ≤ {MAX_ILP_R}, got {r}"
        )));
    }
    if s == 0 {
        return Err(SearchError::Domain("orbit model needs s ≥ 1".into()));
    }
    let group = group_closure(r, generators)?;
    let lines = enumerate_lines(r)?;

    // Orbits under the generators (same partition as under the full group).
    let mut orbit_of: BTreeMap<Line, usize> = BTreeMap::new();
    let mut orbits: Vec<Vec<Line>> = Vec::new();
    for &line in &lines {
        if orbit_of.contains_key(&line) {
            continue;
        }
        let idx = orbits.len();
        let mut members = vec![line];
        orbit_of.insert(line, idx);
        let mut frontier = vec![line];
        while let Some(cur) = frontier.pop() {
            for g in generators {
                let img = line_image(g, &cur, r)?;
                if !orbit_of.contains_key(&img) {
                    orbit_of.insert(img, idx);
                    members.push(img);
                    frontier.push(img);
                }
            }
        }
        members.sort();
        orbits.push(members);
    }

    let vars: Vec<IlpVar> = orbits
        .iter()
        .map(|orbit| IlpVar { name: var_name(&orbit[0]), upper: s, size: orbit.len() as u64 })
        .collect();

    let mut rows: Vec<IlpRow> = Vec::new();
    let mut seen_rows: HashMap<Vec<(u64, usize)>, usize> = HashMap::new();
    for (h_idx, h) in enumerate_hyperplanes(r)?.iter().enumerate() {
        let dual = h.dual_bits();
        let mut coefs: BTreeMap<usize, u64> = BTreeMap::new();
        for line in lines.iter().filter(|l| line_in_dual(l, dual)) {
            *coefs.entry(orbit_of[line]).or_insert(0) += 1;
        }
        let terms: Vec<(u64, usize)> = coefs.into_iter().map(|(v, c)| (c, v)).collect();
        if seen_rows.contains_key(&terms) {
            continue;
        }
        seen_rows.insert(terms.clone(), h_idx);
        rows.push(IlpRow { name: format!("h{}", h_idx + 1), terms, sense: Sense::Le, rhs: s });
    }
    if let Some(n_val) = n {
        let terms = (0..vars.len()).map(|i| (vars[i].size, i)).collect();
        rows.push(IlpRow { name: "card".into(), terms, sense: Sense::Eq, rhs: n_val });
    }
    let group_order = group.len();
    Ok(OrbitModel { r, s, n, group_order, orbits, model: IlpModel { r, s, n, vars, rows } })
}

/// Renders the orbit-reduced model; `format` is "lp" or "mps".
pub fn orbit_model(
    r: u8,
    s: u64,
    n: Option<u64>,
    generators: &[Vec<u32>],
    format: &str,
) -> Result<String, SearchError> {
    let fmt = ModelFormat::from_str(format)?;
    Ok(build_orbit_model(r, s, n, generators)?.render(fmt))
}

/// Parses generator matrices: one row per line as an r-character binary
/// string (character i = coordinate i+1), matrices separated by blank lines.
pub fn parse_generators(text: &str, r: u8) -> Result<Vec<Vec<u32>>, SearchError> {
    let mut matrices = Vec::new();
    let mut current: Vec<u32> = Vec::new();
    for raw in text.lines().chain(std::iter::once("")) {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            if !current.is_empty() {
                if current.len() != r as usize {
                    return Err(SearchError::Domain(format!(
                        "matrix {} has {} rows, expected {r}",
                        matrices.len(),
                        current.len()
                    )));
                }
                matrices.push(std::mem::take(&mut current));
            }
            continue;
        }
        let v = crate::geom::Gf2Vector::parse_with_r(line, r)?;
        current.push(v.bits());
    }
    validate_generators(r, &matrices)?;
    Ok(matrices)
}
