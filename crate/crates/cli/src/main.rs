//! `aqc` — command-line workbench for additive quaternary codes viewed as
//! multisets of lines in PG(r−1,2).
//!
//! Subcommands cover verification of explicit systems, point expansion,
//! n_{r/2}(s) bound tables, the closed asymptotic formulas, named
//! constructions, partition-type algebra and realization, ILP model export
//! (plain and group-restricted), desk-scale exhaustive search, the embedded
//! dataset harness, and expansion-code analysis.
//!
//! Exit codes: 0 on success, 1 when a verification fails (a claimed value
//! does not hold), 2 on usage or domain errors.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use aqc::bounds::{self, LowerSource, Seed};
use aqc::code::{
    derive_constraints, first_identities_check, lemma1_check, macwilliams_transform,
    weight_distribution, DenyReason, Justification, NminTable, NonexistenceOracle,
};
use aqc::construct::{
    line_spread, mrd_lifted_partition, partial_spread_system, realize_type, type_parameters,
    vsp_2a, PartitionType, VectorSpacePartition,
};
use aqc::fixtures;
use aqc::search::{exhaustive_max, export_ilp, orbit_model, parse_generators};
use aqc::system::{analyze, point_expansion, read_system, verify_system, LineSystem};

/// Environment variable naming a minimum-length table file used when
/// `--nmin-table` is not given.
const NMIN_ENV: &str = "AQC_NMIN_TABLE";

/// Appends a line to the output buffer (stdout is written once, at the end,
/// so that a closed pipe never panics mid-report).
macro_rules! out {
    ($buf:expr) => {
        $buf.push('\n')
    };
    ($buf:expr, $($arg:tt)*) => {{
        use std::fmt::Write as _;
        let _ = writeln!($buf, $($arg)*);
    }};
}

// ---------------------------------------------------------------------------
// Errors and exit codes.

enum CliError {
    /// Bad invocation, unreadable input, or an out-of-domain request. Exit 2.
    Usage(String),
    /// The requested check ran and failed. Exit 1.
    Verification(String),
}

type CliResult = Result<(), CliError>;

macro_rules! usage_from {
    ($($ty:ty),* $(,)?) => {$(
        impl From<$ty> for CliError {
            fn from(e: $ty) -> Self {
                CliError::Usage(e.to_string())
            }
        }
    )*};
}

usage_from!(
    aqc::geom::GeomError,
    aqc::system::SystemError,
    aqc::code::CodeError,
    aqc::construct::ConstructError,
    aqc::bounds::BoundsError,
    aqc::search::SearchError,
    std::io::Error,
);

// ---------------------------------------------------------------------------
// Argument grammar.

#[derive(Copy, Clone, PartialEq, Eq, Debug, ValueEnum)]
enum OutFormat {
    Human,
    Csv,
    Json,
}

#[derive(Parser)]
#[command(
    name = "aqc",
    version,
    about = "Line systems in PG(r-1,2) and the additive quaternary codes they span: \
             verification, bounds, constructions, search models"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify that a system file has the claimed n and maximal hyperplane count s
    Verify {
        /// System file ("r=R" header, one line entry per row-pair)
        file: PathBuf,
        /// Claimed number of lines (with multiplicity)
        #[arg(long)]
        n: u64,
        /// Claimed maximal number of lines in a hyperplane
        #[arg(long)]
        s: u64,
        #[arg(long, value_enum, default_value = "human")]
        format: OutFormat,
    },
    /// Expand a system into its point multiset (three points per line)
    Expand {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "human")]
        format: OutFormat,
    },
    /// Tabulate lower/upper bounds on n_{r/2}(s)
    Bounds {
        #[arg(long)]
        r: u8,
        #[arg(long = "s-max")]
        s_max: u64,
        #[arg(long = "s-min", default_value_t = 3)]
        s_min: u64,
        /// Minimum-length table file (k,d,n lines); default: embedded tables
        /// or the file named by AQC_NMIN_TABLE
        #[arg(long = "nmin-table")]
        nmin_table: Option<PathBuf>,
        /// External upper-bound facts (r,s,upper,citation lines); default:
        /// embedded facts for the given r
        #[arg(long)]
        facts: Option<PathBuf>,
        /// Extra lower-bound seeds (s,n lines); added to the built-in
        /// witnesses and constructions
        #[arg(long)]
        seeds: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "human")]
        format: OutFormat,
    },
    /// Print the closed formula family n_{r/2}(pt - i) = Pt - c_i
    Formulas {
        #[arg(long)]
        r: u8,
        #[arg(long, value_enum, default_value = "human")]
        format: OutFormat,
    },
    /// Emit a named construction
    Construct {
        #[command(subcommand)]
        kind: ConstructKind,
    },
    /// Parameters (n, s, hyperplane profile) of a partition type
    TypeParams {
        /// Type such as "2[7]-1[5]-1[3]"; "*[r]" resolves sigma to the least
        /// constructible value
        #[arg(value_name = "TYPE")]
        type_string: String,
        #[arg(long, value_enum, default_value = "human")]
        format: OutFormat,
    },
    /// Realize a partition type as an explicit verified system
    Realize {
        #[arg(value_name = "TYPE")]
        type_string: String,
        /// Write the system file here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "human")]
        format: OutFormat,
    },
    /// Export the hyperplane-capacity integer program
    Ilp {
        #[arg(long)]
        r: u8,
        #[arg(long)]
        s: u64,
        /// Fix the cardinality to n (feasibility form); omit to maximize
        #[arg(long)]
        n: Option<u64>,
        /// Model format: lp or mps
        #[arg(long, default_value = "lp")]
        format: String,
        /// Generator file (each matrix as r binary rows, matrices separated
        /// by blank lines) for a group-restricted orbit model
        #[arg(long)]
        group: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exhaustive maximum n for small r (exact, certified)
    Search {
        #[arg(long)]
        r: u8,
        #[arg(long)]
        s: u64,
        #[arg(long = "n-cap", default_value_t = 10_000)]
        n_cap: u64,
        #[arg(long, value_enum, default_value = "human")]
        format: OutFormat,
    },
    /// Verify the embedded datasets against their claimed parameters
    Fixtures {
        /// Verify every dataset (the default)
        #[arg(long)]
        all: bool,
        /// Verify a single dataset, e.g. r7_s03
        #[arg(long, conflicts_with = "all")]
        id: Option<String>,
        /// Write each dataset's system file into this directory
        #[arg(long = "export-dir")]
        export_dir: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "human")]
        format: OutFormat,
    },
    /// Weight distribution and contract checks of a system's expansion code
    CodeAnalyze {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "human")]
        format: OutFormat,
    },
    /// Constraint profile of the expansion code of a hypothetical (n,r,s) system
    DeriveConstraints {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        r: u8,
        #[arg(long)]
        s: u64,
        /// Minimum-length table file; default as for `bounds`
        #[arg(long = "nmin-table")]
        nmin_table: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "human")]
        format: OutFormat,
    },
}

#[derive(Subcommand)]
enum ConstructKind {
    /// Line spread of PG(r-1,2), r even: type 1[r], s = (2^{r-2}-1)/3
    Spread {
        #[arg(long)]
        r: u8,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "human")]
        format: OutFormat,
    },
    /// Lifted-MRD vector space partition of type (r-2)^1 2^(2^{r-2})
    Mrd {
        #[arg(long)]
        r: u8,
        #[arg(long, value_enum, default_value = "human")]
        format: OutFormat,
    },
    /// Vector space partition with a single a-dimensional member, rest lines
    Vsp {
        #[arg(long)]
        r: u8,
        #[arg(long)]
        a: u8,
        #[arg(long, value_enum, default_value = "human")]
        format: OutFormat,
    },
    /// Partial-spread system avoiding an a-space, holes covered by a point
    Psp {
        #[arg(long)]
        r: u8,
        #[arg(long)]
        a: u8,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "human")]
        format: OutFormat,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut buf = String::new();
    let result = run(cli.command, &mut buf);
    if let Err(e) = write_stdout(&buf) {
        // A closed pipe downstream is not our failure; anything else is.
        if e.kind() != std::io::ErrorKind::BrokenPipe {
            eprintln!("error: cannot write stdout: {e}");
            return ExitCode::from(2);
        }
    }
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn write_stdout(text: &str) -> std::io::Result<()> {
    use std::io::Write as _;
    let mut stdout = std::io::stdout().lock();
    stdout.write_all(text.as_bytes())?;
    stdout.flush()
}

fn run(command: Command, buf: &mut String) -> CliResult {
    match command {
        Command::Verify { file, n, s, format } => cmd_verify(buf, &file, n, s, format),
        Command::Expand { file, format } => cmd_expand(buf, &file, format),
        Command::Bounds { r, s_max, s_min, nmin_table, facts, seeds, format } => cmd_bounds(
            buf,
            r,
            s_min,
            s_max,
            nmin_table.as_deref(),
            facts.as_deref(),
            seeds.as_deref(),
            format,
        ),
        Command::Formulas { r, format } => cmd_formulas(buf, r, format),
        Command::Construct { kind } => cmd_construct(buf, kind),
        Command::TypeParams { type_string, format } => cmd_type_params(buf, &type_string, format),
        Command::Realize { type_string, out, format } => {
            cmd_realize(buf, &type_string, out.as_deref(), format)
        }
        Command::Ilp { r, s, n, format, group, out } => {
            cmd_ilp(buf, r, s, n, &format, group.as_deref(), out.as_deref())
        }
        Command::Search { r, s, n_cap, format } => cmd_search(buf, r, s, n_cap, format),
        Command::Fixtures { all: _, id, export_dir, format } => {
            cmd_fixtures(buf, id.as_deref(), export_dir.as_deref(), format)
        }
        Command::CodeAnalyze { file, format } => cmd_code_analyze(buf, &file, format),
        Command::DeriveConstraints { n, r, s, nmin_table, format } => {
            cmd_derive_constraints(buf, n, r, s, nmin_table.as_deref(), format)
        }
    }
}

// ---------------------------------------------------------------------------
// Shared helpers.

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

fn load_system(path: &Path) -> Result<LineSystem, CliError> {
    Ok(read_system(&read_file(path)?)?)
}

/// Resolves the minimum-length table: explicit path, then the AQC_NMIN_TABLE
/// environment variable, then the embedded k = 7 and k = 8 tables.
fn load_nmin(path: Option<&Path>) -> Result<NminTable, CliError> {
    let text = match path {
        Some(p) => read_file(p)?,
        None => match std::env::var_os(NMIN_ENV) {
            Some(p) => read_file(Path::new(&p))?,
            None => format!("{}\n{}", bounds::NMIN_TABLE_K7, bounds::NMIN_TABLE_K8),
        },
    };
    Ok(NminTable::parse(&text)?)
}

/// "r/2", printed as an integer for even r and with ".5" for odd r.
fn half_dim(r: u8) -> String {
    if r % 2 == 0 {
        format!("{}", r / 2)
    } else {
        format!("{}.5", r / 2)
    }
}

fn write_file(path: &Path, text: &str) -> CliResult {
    fs::write(path, text)
        .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))
}

fn justification_name(j: Justification) -> &'static str {
    match j {
        Justification::Expansion => "expansion-contract",
        Justification::Ward => "griesmer-attaining-divisibility",
        Justification::GriesmerResidual => "residual-griesmer",
        Justification::ExternalTable => "residual-table",
        Justification::PointCount => "point-count",
    }
}

fn deny_text(reason: &DenyReason) -> String {
    match reason {
        DenyReason::Griesmer { bound } => format!("griesmer needs length >= {bound}"),
        DenyReason::Table { n_min } => format!("table needs length >= {n_min}"),
    }
}

// ---------------------------------------------------------------------------
// verify / expand.

fn cmd_verify(buf: &mut String, file: &Path, n: u64, s: u64, format: OutFormat) -> CliResult {
    let sys = load_system(file)?;
    let (report, failure) = match verify_system(&sys, n, s) {
        Ok(report) => (report, None),
        Err(f) => (f.report, Some(f)),
    };
    let ok = failure.is_none();
    match format {
        OutFormat::Human => {
            out!(buf, "r = {}", sys.r());
            out!(buf, "n = {} (claimed {n})", report.n);
            out!(buf, "s_max = {} (claimed {s})", report.s_max);
            out!(buf, "spanning = {}", report.spanning);
            out!(buf, "rank = {}", report.rank);
            out!(buf, "hyperplanes_at_max = {}", report.achieving_hyperplanes);
            out!(buf, "max_point_multiplicity = {}", report.max_point_multiplicity);
            out!(buf, "verdict = {}", if ok { "ok" } else { "mismatch" });
        }
        OutFormat::Csv => {
            out!(buf, "r,n,s_max,spanning,rank,achieving_hyperplanes,max_point_multiplicity,ok");
            out!(
                buf,
                "{},{},{},{},{},{},{},{}",
                sys.r(),
                report.n,
                report.s_max,
                report.spanning,
                report.rank,
                report.achieving_hyperplanes,
                report.max_point_multiplicity,
                ok
            );
        }
        OutFormat::Json => {
            let payload = json!({
                "r": sys.r(),
                "claimed": { "n": n, "s": s },
                "report": report,
                "ok": ok,
            });
            out!(buf, "{payload}");
        }
    }
    if let Some(f) = failure {
        return Err(CliError::Verification(format!(
            "expected (n, s) = ({}, {}), found ({}, {}), spanning = {}",
            f.expected_n, f.expected_s, f.actual_n, f.actual_s_max, f.actual_spanning
        )));
    }
    Ok(())
}

fn cmd_expand(buf: &mut String, file: &Path, format: OutFormat) -> CliResult {
    let sys = load_system(file)?;
    let points = point_expansion(&sys);
    match format {
        OutFormat::Human => {
            out!(buf, "r = {}", points.r());
            out!(buf, "total = {}", points.total());
            out!(buf, "distinct_points = {}", points.distinct_points());
            out!(buf, "max_multiplicity = {}", points.max_multiplicity());
            for (p, c) in points.iter() {
                out!(buf, "{p} {c}");
            }
        }
        OutFormat::Csv => {
            out!(buf, "point,multiplicity");
            for (p, c) in points.iter() {
                out!(buf, "{p},{c}");
            }
        }
        OutFormat::Json => {
            let map: BTreeMap<String, u64> =
                points.iter().map(|(p, c)| (p.to_string(), c)).collect();
            let payload = json!({
                "r": points.r(),
                "total": points.total(),
                "distinct_points": points.distinct_points(),
                "max_multiplicity": points.max_multiplicity(),
                "points": map,
            });
            out!(buf, "{payload}");
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// bounds / formulas.

/// Built-in lower-bound witnesses for the table: linear-code seeds (r = 8),
/// the embedded datasets' verified parameters, and live constructions.
fn default_seeds(r: u8, s_lo: u64, s_hi: u64) -> Result<Vec<Seed>, CliError> {
    let mut seeds = Vec::new();
    if r == 8 {
        seeds.extend(bounds::parse_seeds(
            bounds::LINEAR_SEEDS_DIM_4,
            LowerSource::LinearFixture,
        )?);
    }
    for f in fixtures::datasets() {
        if f.r == r {
            seeds.push(Seed { s: f.claimed_s, n: f.claimed_n, source: LowerSource::PaperFixture });
        }
    }
    seeds.extend(bounds::construction_seeds(r, s_lo, s_hi));
    Ok(seeds)
}

#[allow(clippy::too_many_arguments)]
fn cmd_bounds(
    buf: &mut String,
    r: u8,
    s_min: u64,
    s_max: u64,
    nmin_path: Option<&Path>,
    facts_path: Option<&Path>,
    seeds_path: Option<&Path>,
    format: OutFormat,
) -> CliResult {
    if s_min > s_max {
        return Err(CliError::Usage(format!("--s-min {s_min} exceeds --s-max {s_max}")));
    }
    let nmin = load_nmin(nmin_path)?;
    let facts = match facts_path {
        Some(p) => bounds::parse_facts(&read_file(p)?)?,
        None => match r {
            7 => bounds::parse_facts(bounds::FACTS_DIM_3_5)?,
            8 => bounds::parse_facts(bounds::FACTS_DIM_4)?,
            _ => Vec::new(),
        },
    };
    let mut seeds = default_seeds(r, s_min, s_max)?;
    if let Some(p) = seeds_path {
        seeds.extend(bounds::parse_seeds(&read_file(p)?, LowerSource::LinearFixture)?);
    }
    let rows = bounds::nks_table(r, s_min, s_max, &seeds, &facts, Some(&nmin))?;

    // Per-row Griesmer and weak-coding columns for display, mirroring the
    // table layout used in the literature: the weak column is left blank
    // where the table had nothing sharper than Griesmer.
    let mut display = Vec::with_capacity(rows.len());
    for row in &rows {
        let gub = bounds::griesmer_upper_bound(r, row.s)?;
        let weak = bounds::weak_coding_upper_bound(r, row.s, &nmin)?;
        let weak_col = (!weak.griesmer_limited && weak.n < gub).then_some(weak.n);
        display.push((row, gub, weak_col));
    }

    match format {
        OutFormat::Human => {
            out!(buf, "n_{}(s) bounds for r = {r}, s in [{s_min}, {s_max}]", half_dim(r));
            out!(
                buf,
                "{:>4} {:>9} {:>6} {:>6} {:>6}  {:<10} {:<15} {}",
                "s",
                "griesmer",
                "weak",
                "lower",
                "upper",
                "n(s)",
                "lower-source",
                "upper-source"
            );
            for (row, gub, weak_col) in &display {
                let weak = weak_col.map_or("-".to_string(), |w| w.to_string());
                let lower = row.lower.map_or("-".to_string(), |l| l.to_string());
                let lsrc = row.lower_source.map_or("-".to_string(), |s| s.to_string());
                out!(
                    buf,
                    "{:>4} {:>9} {:>6} {:>6} {:>6}  {:<10} {:<15} {}",
                    row.s,
                    gub,
                    weak,
                    lower,
                    row.upper,
                    row.value_cell(),
                    lsrc,
                    row.upper_source
                );
            }
        }
        OutFormat::Csv => {
            out!(buf, "s,griesmer,weak,lower,lower_source,upper,upper_source,value,resolved");
            for (row, gub, weak_col) in &display {
                out!(
                    buf,
                    "{},{},{},{},{},{},{},{},{}",
                    row.s,
                    gub,
                    weak_col.map_or(String::new(), |w| w.to_string()),
                    row.lower.map_or(String::new(), |l| l.to_string()),
                    row.lower_source.map_or(String::new(), |s| s.to_string()),
                    row.upper,
                    row.upper_source,
                    row.value_cell(),
                    row.resolved
                );
            }
        }
        OutFormat::Json => {
            let rows_json: Vec<_> = display
                .iter()
                .map(|(row, gub, weak_col)| {
                    json!({
                        "s": row.s,
                        "griesmer": gub,
                        "weak": weak_col,
                        "lower": row.lower,
                        "lower_source": row.lower_source.map(|s| s.to_string()),
                        "upper": row.upper,
                        "upper_source": row.upper_source.to_string(),
                        "value": row.value_cell(),
                        "resolved": row.resolved,
                    })
                })
                .collect();
            let payload = json!({
                "r": r,
                "k": half_dim(r),
                "s_min": s_min,
                "s_max": s_max,
                "rows": rows_json,
            });
            out!(buf, "{payload}");
        }
    }
    Ok(())
}

fn cmd_formulas(buf: &mut String, r: u8, format: OutFormat) -> CliResult {
    let formulas = bounds::asymptotic_formulas(r)?;
    match format {
        OutFormat::Human => {
            let (p, cap_p) = (formulas[0].period, formulas[0].n_period);
            out!(buf, "r = {r}: s-period {p}, n-period {cap_p}");
            for f in &formulas {
                out!(buf, "{f}");
            }
        }
        OutFormat::Csv => {
            out!(buf, "r,residue,period,n_period,n_value,offset,formula");
            for f in &formulas {
                out!(
                    buf,
                    "{},{},{},{},{},{},{}",
                    f.r,
                    f.residue,
                    f.period,
                    f.n_period,
                    f.n_value,
                    f.offset,
                    f
                );
            }
        }
        OutFormat::Json => {
            let rows: Vec<_> = formulas
                .iter()
                .map(|f| {
                    json!({
                        "residue": f.residue,
                        "n_value": f.n_value,
                        "offset": f.offset,
                        "display": f.to_string(),
                    })
                })
                .collect();
            let payload = json!({
                "r": r,
                "k": half_dim(r),
                "period": formulas[0].period,
                "n_period": formulas[0].n_period,
                "formulas": rows,
            });
            out!(buf, "{payload}");
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// construct.

/// Prints a line system as a '#'-commented report followed by the system
/// text, so the human output is itself a valid input file.
fn emit_system(
    buf: &mut String,
    header: &[(&str, String)],
    sys: &LineSystem,
    out: Option<&Path>,
    format: OutFormat,
) -> CliResult {
    match format {
        OutFormat::Human => {
            let mut text = String::new();
            for (key, value) in header {
                out!(text, "# {key} = {value}");
            }
            text.push_str(&sys.serialize());
            if let Some(p) = out {
                write_file(p, &text)?;
                for (key, value) in header {
                    out!(buf, "{key} = {value}");
                }
            } else {
                buf.push_str(&text);
            }
        }
        OutFormat::Csv => {
            if let Some(p) = out {
                write_file(p, &sys.serialize())?;
            }
            out!(buf, "line,multiplicity");
            for (line, mult) in sys.iter() {
                out!(buf, "{line},{mult}");
            }
        }
        OutFormat::Json => {
            if let Some(p) = out {
                write_file(p, &sys.serialize())?;
            }
            let mut payload = serde_json::Map::new();
            for (key, value) in header {
                let v = value
                    .parse::<u64>()
                    .map(serde_json::Value::from)
                    .unwrap_or_else(|_| serde_json::Value::from(value.clone()));
                payload.insert((*key).to_string(), v);
            }
            payload.insert("system".into(), sys.serialize().into());
            out!(buf, "{}", serde_json::Value::from(payload));
        }
    }
    Ok(())
}

fn partition_type_string(vsp: &VectorSpacePartition) -> String {
    vsp.type_signature()
        .iter()
        .map(|(dim, count)| format!("{dim}^{count}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn emit_partition(
    buf: &mut String,
    construction: &str,
    vsp: &VectorSpacePartition,
    format: OutFormat,
) -> CliResult {
    let kind = partition_type_string(vsp);
    match format {
        OutFormat::Human => {
            out!(buf, "construction = {construction}");
            out!(buf, "r = {}", vsp.r());
            out!(buf, "members = {}", vsp.members().len());
            out!(buf, "type = {kind}");
        }
        OutFormat::Csv => {
            out!(buf, "dim,count");
            for (dim, count) in vsp.type_signature() {
                out!(buf, "{dim},{count}");
            }
        }
        OutFormat::Json => {
            let sig: BTreeMap<String, u64> = vsp
                .type_signature()
                .into_iter()
                .map(|(d, c)| (d.to_string(), c))
                .collect();
            let payload = json!({
                "construction": construction,
                "r": vsp.r(),
                "members": vsp.members().len(),
                "type": sig,
                "type_string": kind,
            });
            out!(buf, "{payload}");
        }
    }
    Ok(())
}

fn cmd_construct(buf: &mut String, kind: ConstructKind) -> CliResult {
    match kind {
        ConstructKind::Spread { r, out, format } => {
            let sys = line_spread(r)?;
            let report = analyze(&sys);
            let header = [
                ("construction", "spread".to_string()),
                ("r", r.to_string()),
                ("n", report.n.to_string()),
                ("s_max", report.s_max.to_string()),
            ];
            emit_system(buf, &header, &sys, out.as_deref(), format)
        }
        ConstructKind::Mrd { r, format } => {
            let vsp = mrd_lifted_partition(r)?;
            emit_partition(buf, "mrd", &vsp, format)
        }
        ConstructKind::Vsp { r, a, format } => {
            let vsp = vsp_2a(r, a)?;
            emit_partition(buf, "vsp", &vsp, format)
        }
        ConstructKind::Psp { r, a, out, format } => {
            let (sys, s, s_hole) = partial_spread_system(r, a)?;
            let report = analyze(&sys);
            let header = [
                ("construction", "psp".to_string()),
                ("r", r.to_string()),
                ("a", a.to_string()),
                ("n", report.n.to_string()),
                ("s_max", s.to_string()),
                ("s_hole", s_hole.to_string()),
            ];
            emit_system(buf, &header, &sys, out.as_deref(), format)
        }
    }
}

// ---------------------------------------------------------------------------
// type-params / realize.

fn parse_type(text: &str) -> Result<PartitionType, CliError> {
    text.parse::<PartitionType>().map_err(CliError::from)
}

fn cmd_type_params(buf: &mut String, type_string: &str, format: OutFormat) -> CliResult {
    let t = parse_type(type_string)?;
    // A "*" sigma is resolved to the least value the realization machinery
    // can build, which also proves the type is constructible.
    let concrete = match t.sigma() {
        Some(_) => t.clone(),
        None => t.with_sigma(realize_type(&t)?.sigma),
    };
    let sigma = concrete.sigma().expect("sigma resolved above");
    let params = type_parameters(&concrete)?;
    match format {
        OutFormat::Human => {
            out!(buf, "type = {concrete}");
            out!(buf, "sigma = {sigma}");
            out!(buf, "n = {}", params.n);
            out!(buf, "s = {}", params.s);
            out!(buf, "s_1 = {}", params.s1);
            let profile = params
                .s_profile
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(" ");
            out!(buf, "s_profile = {profile}");
        }
        OutFormat::Csv => {
            out!(buf, "type,sigma,n,s,s1");
            out!(buf, "{concrete},{sigma},{},{},{}", params.n, params.s, params.s1);
        }
        OutFormat::Json => {
            let payload = json!({
                "type": concrete.to_string(),
                "sigma": sigma,
                "n": params.n,
                "s": params.s,
                "s1": params.s1,
                "s_profile": params.s_profile,
            });
            out!(buf, "{payload}");
        }
    }
    Ok(())
}

fn cmd_realize(
    buf: &mut String,
    type_string: &str,
    out: Option<&Path>,
    format: OutFormat,
) -> CliResult {
    let t = parse_type(type_string)?;
    let realization = realize_type(&t)?;
    let report = analyze(&realization.system);
    let header = [
        ("type", t.with_sigma(realization.sigma).to_string()),
        ("sigma", realization.sigma.to_string()),
        ("n", report.n.to_string()),
        ("s_max", report.s_max.to_string()),
    ];
    emit_system(buf, &header, &realization.system, out, format)
}

// ---------------------------------------------------------------------------
// ilp / search.

fn cmd_ilp(
    buf: &mut String,
    r: u8,
    s: u64,
    n: Option<u64>,
    format: &str,
    group: Option<&Path>,
    out: Option<&Path>,
) -> CliResult {
    let text = match group {
        Some(p) => {
            let generators = parse_generators(&read_file(p)?, r)?;
            orbit_model(r, s, n, &generators, format)?
        }
        None => export_ilp(r, s, n, format)?,
    };
    match out {
        Some(p) => write_file(p, &text),
        None => {
            buf.push_str(&text);
            Ok(())
        }
    }
}

fn cmd_search(buf: &mut String, r: u8, s: u64, n_cap: u64, format: OutFormat) -> CliResult {
    let (n_star, witness) = exhaustive_max(r, s, n_cap)?;
    match format {
        OutFormat::Human => {
            out!(buf, "# r = {r}");
            out!(buf, "# s = {s}");
            out!(buf, "# n_star = {n_star}");
            match &witness {
                Some(sys) => buf.push_str(&sys.serialize()),
                None => out!(buf, "# witness = none (no spanning system)"),
            }
        }
        OutFormat::Csv => {
            out!(buf, "r,s,n_star,witness");
            out!(buf, "{r},{s},{n_star},{}", witness.is_some());
        }
        OutFormat::Json => {
            let payload = json!({
                "r": r,
                "s": s,
                "n_cap": n_cap,
                "n_star": n_star,
                "witness": witness.as_ref().map(|sys| sys.serialize()),
            });
            out!(buf, "{payload}");
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// fixtures.

fn cmd_fixtures(
    buf: &mut String,
    id: Option<&str>,
    export_dir: Option<&Path>,
    format: OutFormat,
) -> CliResult {
    if let Some(dir) = export_dir {
        fs::create_dir_all(dir)
            .map_err(|e| CliError::Usage(format!("cannot create {}: {e}", dir.display())))?;
        for f in fixtures::datasets() {
            if id.is_none_or(|want| f.id() == want) {
                write_file(&dir.join(format!("{}.txt", f.id())), &f.export()?)?;
            }
        }
    }
    let harness = fixtures::verify_all();
    let outcomes: Vec<_> = harness
        .outcomes
        .iter()
        .filter(|o| id.is_none_or(|want| o.id == want))
        .collect();
    if outcomes.is_empty() {
        return Err(CliError::Usage(format!(
            "no dataset named {}; known ids run r7_s03 .. r8_s50",
            id.unwrap_or("?")
        )));
    }
    let verified = outcomes.iter().filter(|o| o.verified).count();
    let all_ok = verified == outcomes.len();
    match format {
        OutFormat::Human => {
            out!(
                buf,
                "{:<8} {:>2} {:>3} {:>5} {:>5}  {}",
                "id",
                "r",
                "s",
                "n",
                "s_max",
                "verified"
            );
            for o in &outcomes {
                let (n, s_max) = o
                    .report
                    .map_or((String::from("-"), String::from("-")), |rep| {
                        (rep.n.to_string(), rep.s_max.to_string())
                    });
                out!(
                    buf,
                    "{:<8} {:>2} {:>3} {:>5} {:>5}  {}",
                    o.id,
                    o.r,
                    o.s_label,
                    n,
                    s_max,
                    if o.verified { "yes" } else { "NO" }
                );
                if let Some(err) = &o.error {
                    out!(buf, "         error: {err}");
                }
            }
            out!(buf, "summary: {verified}/{} verified", outcomes.len());
            let findings: Vec<_> = outcomes.iter().flat_map(|o| &o.findings).collect();
            if !findings.is_empty() {
                out!(buf, "findings:");
                for f in findings {
                    out!(buf, "  {f}");
                }
            }
        }
        OutFormat::Csv => {
            out!(buf, "id,r,s_label,n,s_max,verified");
            for o in &outcomes {
                let (n, s_max) = o.report.map_or((String::new(), String::new()), |rep| {
                    (rep.n.to_string(), rep.s_max.to_string())
                });
                out!(buf, "{},{},{},{},{},{}", o.id, o.r, o.s_label, n, s_max, o.verified);
            }
        }
        OutFormat::Json => {
            let rows: Vec<_> = outcomes
                .iter()
                .map(|o| {
                    json!({
                        "id": o.id,
                        "r": o.r,
                        "s_label": o.s_label,
                        "verified": o.verified,
                        "report": o.report,
                        "error": o.error,
                        "findings": o.findings,
                    })
                })
                .collect();
            let payload = json!({
                "outcomes": rows,
                "verified": verified,
                "total": outcomes.len(),
                "all_verified": all_ok,
            });
            out!(buf, "{payload}");
        }
    }
    if all_ok {
        Ok(())
    } else {
        Err(CliError::Verification(format!(
            "{}/{} datasets verified",
            verified,
            outcomes.len()
        )))
    }
}

// ---------------------------------------------------------------------------
// code-analyze / derive-constraints.

fn cmd_code_analyze(buf: &mut String, file: &Path, format: OutFormat) -> CliResult {
    let sys = load_system(file)?;
    let (code, report) = lemma1_check(&sys)?;
    let wd = weight_distribution(&code);
    let (b2, b3) = first_identities_check(wd.counts(), wd.n(), wd.k())
        .map_err(|e| CliError::Verification(format!("power-moment identities: {e}")))?;
    let dual = macwilliams_transform(wd.counts(), wd.n(), wd.k())?;
    // The transform and the power moments compute B₂, B₃ independently.
    let from_dual = |j: u64| dual.get(&j).map(|b| b.to_string()).unwrap_or_else(|| "0".into());
    if from_dual(2) != b2.to_string() || from_dual(3) != b3.to_string() {
        return Err(CliError::Verification(format!(
            "MacWilliams transform disagrees with power moments: B2 {} vs {b2}, B3 {} vs {b3}",
            from_dual(2),
            from_dual(3)
        )));
    }
    match format {
        OutFormat::Human => {
            out!(buf, "n = {}", report.n);
            out!(buf, "r = {}", report.r);
            out!(buf, "s_max = {}", report.s_max);
            out!(buf, "code = [{}, {}, {}]_2", report.length, report.dimension, report.min_dist);
            out!(buf, "max_weight = {}", report.max_weight);
            out!(buf, "divisibility = {}", report.divisibility);
            out!(buf, "griesmer = {} <= {}", report.griesmer_g, report.length);
            for c in &report.checks {
                out!(
                    buf,
                    "check {} = {} ({})",
                    c.name,
                    if c.pass { "pass" } else { "FAIL" },
                    c.detail
                );
            }
            for (w, count) in wd.iter() {
                out!(buf, "A_{w} = {count}");
            }
            out!(buf, "B_1 = {}", from_dual(1));
            out!(buf, "B_2 = {b2}");
            out!(buf, "B_3 = {b3}");
            out!(buf, "B_4 = {}", from_dual(4));
            out!(buf, "contract = {}", if report.pass { "pass" } else { "FAIL" });
        }
        OutFormat::Csv => {
            out!(buf, "weight,count");
            for (w, count) in wd.iter() {
                out!(buf, "{w},{count}");
            }
        }
        OutFormat::Json => {
            let weights: BTreeMap<String, u64> =
                wd.iter().map(|(w, c)| (w.to_string(), c)).collect();
            let dual_head: BTreeMap<String, String> = dual
                .iter()
                .take_while(|(&j, _)| j <= 8)
                .map(|(j, b)| (j.to_string(), b.to_string()))
                .collect();
            let payload = json!({
                "report": report,
                "weights": weights,
                "dual_head": dual_head,
                "b2": b2.to_string(),
                "b3": b3.to_string(),
            });
            out!(buf, "{payload}");
        }
    }
    if report.pass {
        Ok(())
    } else {
        Err(CliError::Verification("expansion code violates the contract".into()))
    }
}

fn cmd_derive_constraints(
    buf: &mut String,
    n: u64,
    r: u8,
    s: u64,
    nmin_path: Option<&Path>,
    format: OutFormat,
) -> CliResult {
    let oracle = NonexistenceOracle::with_table(load_nmin(nmin_path)?);
    let profile = derive_constraints(n, r, s, &oracle)?;
    match format {
        OutFormat::Human => {
            out!(buf, "profile for (n, r, s) = ({n}, {r}, {s})");
            out!(
                buf,
                "code = [{}, {}, {}]_2",
                profile.length,
                profile.dimension,
                profile.min_dist
            );
            out!(
                buf,
                "divisibility = {} ({})",
                profile.divisibility,
                justification_name(profile.divisibility_tag)
            );
            out!(buf, "max_weight = {}", profile.max_weight);
            match &profile.base_denial {
                Some(reason) => out!(buf, "base = denied ({})", deny_text(reason)),
                None => out!(buf, "base = admissible"),
            }
            for (w, ex) in &profile.excluded_weights {
                let (rn, rk, rd) = ex.residual;
                out!(
                    buf,
                    "excluded weight {w}: residual [{rn}, {rk}, {rd}] denied ({}; {})",
                    deny_text(&ex.reason),
                    justification_name(ex.tag)
                );
            }
            out!(buf, "multiplicity_floor = {}", profile.multiplicity_floor);
            match profile.multiplicity_cap {
                Some(cap) => out!(buf, "multiplicity_cap = {cap}"),
                None => out!(buf, "multiplicity_cap = none"),
            }
            if let Some(m) = profile.exact_multiplicity {
                out!(buf, "exact_multiplicity = {m}");
            }
            if let Some((m, k, d, reason)) = &profile.cap_denial {
                out!(
                    buf,
                    "cap witness: multiplicity {} would need [{m}, {k}, {d}] ({})",
                    profile.multiplicity_cap.map_or(0, |c| c + 1),
                    deny_text(reason)
                );
            }
            out!(buf, "griesmer_limited = {}", profile.griesmer_limited);
        }
        OutFormat::Csv => {
            out!(buf, "field,value");
            out!(buf, "length,{}", profile.length);
            out!(buf, "dimension,{}", profile.dimension);
            out!(buf, "min_dist,{}", profile.min_dist);
            out!(buf, "divisibility,{}", profile.divisibility);
            out!(buf, "max_weight,{}", profile.max_weight);
            out!(buf, "base_denied,{}", profile.base_denial.is_some());
            let excluded = profile
                .excluded_weights
                .keys()
                .map(|w| w.to_string())
                .collect::<Vec<_>>()
                .join(";");
            out!(buf, "excluded_weights,{excluded}");
            out!(buf, "multiplicity_floor,{}", profile.multiplicity_floor);
            out!(
                buf,
                "multiplicity_cap,{}",
                profile.multiplicity_cap.map_or(String::new(), |c| c.to_string())
            );
            out!(
                buf,
                "exact_multiplicity,{}",
                profile.exact_multiplicity.map_or(String::new(), |m| m.to_string())
            );
            out!(buf, "griesmer_limited,{}", profile.griesmer_limited);
        }
        OutFormat::Json => {
            out!(buf, "{}", serde_json::to_string(&profile).expect("profile serializes"));
        }
    }
    Ok(())
}
