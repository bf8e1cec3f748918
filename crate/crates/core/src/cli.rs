//! Command-line front end and the two on-disk formats.
//!
//! A code file is a header line `q k n` followed by `k` rows of `n`
//! element indices and optional trailing `#` comment lines. Reports are
//! JSON objects with a fixed key set; see [`ReportJson`].

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::construct::{self, ConstructionReport};
use crate::error::Error;
use crate::field::FieldSpec;
use crate::lincode::{spectrum_via_codewords, GeneratorMatrix};
use crate::oracle::{self, Dim2Row, LTable, SearchOptions, SearchResult};
use crate::projsys::{ProjectiveSystem, WeightSpectrum};
use crate::verify::{self, VerificationReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(Error::BudgetExceeded { .. }) => EXIT_BUDGET,
            CliError::Core(Error::RouteMismatch(_)) => EXIT_FAILURE,
            CliError::Io { .. } => EXIT_FAILURE,
            _ => EXIT_INVALID,
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.to_path_buf(), source }
}

/// A generator matrix file with its trailing comment lines.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodeFile {
    pub matrix: GeneratorMatrix,
    /// Comment lines including the leading `#`.
    pub comments: Vec<String>,
}

fn parse_numbers(line: &str, lineno: usize, expected: usize) -> Result<Vec<u64>, Error> {
    let parse_err = |reason: String| Error::Parse { line: lineno, reason };
    let values = line
        .split(' ')
        .map(|tok| {
            if tok.is_empty() || !tok.bytes().all(|b| b.is_ascii_digit()) || (tok.len() > 1 && tok.starts_with('0')) {
                Err(parse_err(format!("expected a decimal integer, found {tok:?}")))
            } else {
                tok.parse::<u64>().map_err(|e| parse_err(e.to_string()))
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    if values.len() != expected {
        return Err(parse_err(format!("expected {expected} values, found {}", values.len())));
    }
    Ok(values)
}

impl CodeFile {
    pub fn new(matrix: GeneratorMatrix) -> Self {
        CodeFile { matrix, comments: Vec::new() }
    }

    pub fn parse(text: &str) -> Result<Self, Error> {
        let body = text.strip_suffix('\n').ok_or(Error::Parse { line: 0, reason: "missing final newline".into() })?;
        let lines: Vec<&str> = body.split('\n').collect();
        let header = parse_numbers(lines[0], 1, 3)?;
        let (q, k, n) = (header[0], header[1] as usize, header[2] as usize);
        if k == 0 || n == 0 {
            return Err(Error::Parse { line: 1, reason: "k and n must be positive".into() });
        }
        if lines.len() < k + 1 {
            return Err(Error::Parse { line: lines.len() + 1, reason: format!("expected {k} matrix rows") });
        }
        let field = Arc::new(FieldSpec::with_order(q)?);
        let rows = (0..k).map(|i| parse_numbers(lines[i + 1], i + 2, n)).collect::<Result<Vec<_>, _>>()?;
        let comments: Vec<String> = lines[k + 1..].iter().map(|l| l.to_string()).collect();
        if let Some(pos) = comments.iter().position(|c| !c.starts_with('#')) {
            return Err(Error::Parse { line: k + 2 + pos, reason: "only '#' comment lines may follow the matrix".into() });
        }
        let matrix = GeneratorMatrix::from_indices(field, &rows).map_err(|e| Error::Parse { line: 0, reason: e.to_string() })?;
        Ok(CodeFile { matrix, comments })
    }

    pub fn render(&self) -> String {
        let g = &self.matrix;
        let mut out = format!("{} {} {}\n", g.field().order(), g.k(), g.n());
        for i in 0..g.k() {
            let row: Vec<String> = g.row(i).iter().map(|e| e.to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        for c in &self.comments {
            out.push_str(c);
            out.push('\n');
        }
        out
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(io_err(path))?;
        Ok(Self::parse(&text)?)
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        std::fs::write(path, self.render()).map_err(io_err(path))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub property: String,
    pub holds: bool,
}

impl From<&VerificationReport> for Verdict {
    fn from(v: &VerificationReport) -> Self {
        Verdict { property: v.property.clone(), holds: v.holds }
    }
}

/// Search statistics attached to oracle reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleSection {
    pub max_distinct: u64,
    pub fws_exists: bool,
    pub states_visited: u128,
    pub budget: u128,
    pub route_checks: usize,
}

/// Machine-readable report. `counts` sums to `q^effective_dimension - 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportJson {
    pub q: u64,
    pub k: usize,
    pub n: u64,
    pub construction: String,
    pub multiplicities: Vec<u64>,
    pub weights: Vec<u64>,
    pub counts: BTreeMap<u64, u64>,
    pub distinct: usize,
    pub predicted: Option<u64>,
    pub effective_dimension: usize,
    pub verdicts: Vec<Verdict>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub auxiliary: Option<serde_json::Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleSection>,
}

fn spectrum_verdicts(spec: &WeightSpectrum, k: usize, q: u64) -> Vec<Verdict> {
    vec![(&verify::is_fws(spec)).into(), (&verify::is_mws(spec, k, q)).into()]
}

impl ReportJson {
    pub fn from_system(construction: &str, sys: &ProjectiveSystem, spec: &WeightSpectrum, predicted: Option<u64>) -> Self {
        ReportJson {
            q: sys.q(),
            k: sys.k(),
            n: sys.n(),
            construction: construction.to_string(),
            multiplicities: sys.multiplicities().to_vec(),
            weights: spec.weight_set(),
            counts: spec.counts().clone(),
            distinct: spec.distinct(),
            predicted,
            effective_dimension: sys.effective_dimension(),
            verdicts: spectrum_verdicts(spec, sys.k(), sys.q()),
            auxiliary: None,
            oracle: None,
        }
    }

    pub fn from_construction(report: &ConstructionReport) -> Self {
        let spec = report.spectrum();
        let mut out = Self::from_system(report.kind.name(), &report.system, &spec, Some(report.predicted_distinct));
        out.auxiliary = serde_json::to_value(&report.auxiliary).ok();
        let sys = &report.system;
        let mut extra: Vec<VerificationReport> = Vec::new();
        if sys.k() >= 3 {
            extra.extend(verify::fat_point_check(sys));
            if spec.distinct() as u64 == sys.n() {
                extra.extend(verify::plump_point_check(sys));
            }
        }
        extra.extend(verify::mws_character_formula_check(report));
        out.verdicts.extend(extra.iter().map(Verdict::from));
        out
    }

    pub fn from_search(result: &SearchResult) -> Self {
        let section = OracleSection {
            max_distinct: result.max_distinct,
            fws_exists: result.fws_exists,
            states_visited: result.states_visited,
            budget: result.budget,
            route_checks: result.route_checks,
        };
        let mut out = match &result.witness {
            Some(w) => {
                let spec = w.effective_spectrum();
                Self::from_system("oracle", w, &spec, None)
            }
            None => ReportJson {
                q: result.q,
                k: result.k,
                n: result.n,
                construction: "oracle".into(),
                multiplicities: Vec::new(),
                weights: Vec::new(),
                counts: BTreeMap::new(),
                distinct: 0,
                predicted: None,
                effective_dimension: 0,
                verdicts: Vec::new(),
                auxiliary: None,
                oracle: None,
            },
        };
        out.oracle = Some(section);
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Output of `table`: the rows, the audit, and for `k = 2` the
/// comparison against the construction and the closed form.
#[derive(Clone, Debug, Serialize)]
pub struct TableReport {
    #[serde(flatten)]
    pub table: LTable,
    pub audit: Vec<VerificationReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dim2: Option<Vec<Dim2Row>>,
    pub warnings: Vec<String>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Fws,
    Mws,
    Dim2,
    Arc,
    Hyperoval,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Hyperplane,
    Codeword,
    Both,
}

#[derive(Debug, Parser)]
#[command(name = "wspec", version, about = "Construct and analyze linear codes with extremal weight spectra")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a code and write `<out>.code` and `<out>.json`.
    Construct {
        #[arg(value_enum)]
        kind: Kind,
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        q: u64,
        /// Output path prefix.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Weight spectrum of a code file.
    Spectrum {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "both")]
        method: Method,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact maximum number of distinct weights by exhaustive search.
    Oracle {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        budget: Option<u128>,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Table of exact values over a range of lengths, with an audit.
    Table {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n_from: u64,
        #[arg(long)]
        n_to: u64,
        #[arg(long)]
        budget: Option<u128>,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// What a command produced: text for stdout, text for stderr.
#[derive(Debug, Default)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub exit_code: i32,
}

fn need<T>(value: Option<T>, flag: &str, kind: &str) -> Result<T, CliError> {
    value.ok_or_else(|| CliError::Usage(format!("construct {kind} requires --{flag}")))
}

fn build(kind: Kind, n: Option<u64>, k: Option<usize>, q: u64) -> Result<ConstructionReport, CliError> {
    let report = match kind {
        Kind::Fws => construct::fws(need(n, "n", "fws")?, need(k, "k", "fws")?, q)?,
        Kind::Mws => construct::mws(need(k, "k", "mws")?, q)?,
        Kind::Dim2 => {
            if k.is_some_and(|k| k != 2) {
                return Err(CliError::Usage("construct dim2 is two-dimensional; --k must be 2".into()));
            }
            construct::dim2(need(n, "n", "dim2")?, q)?
        }
        Kind::Arc => construct::arc_bound(need(n, "n", "arc")?, need(k, "k", "arc")?, q)?,
        Kind::Hyperoval => {
            if k.is_some_and(|k| k != 3) {
                return Err(CliError::Usage("construct hyperoval is three-dimensional; --k must be 3".into()));
            }
            construct::hyperoval_bound(need(n, "n", "hyperoval")?, q)?
        }
    };
    Ok(report)
}

fn code_file_for(report: &ConstructionReport) -> CodeFile {
    let mut file = CodeFile::new(report.system.column_matrix());
    file.comments.push(format!("# construction {}", report.kind.name()));
    if report.effective_dimension < report.system.k() {
        file.comments.push(format!("# effective dimension {}", report.effective_dimension));
    }
    file
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(io_err(path))
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn search_options(budget: Option<u128>, workers: Option<usize>) -> SearchOptions {
    SearchOptions { budget: budget.unwrap_or_else(oracle::budget_from_env), workers, ..SearchOptions::default() }
}

/// Runs one parsed command.
pub fn execute(command: Command) -> Result<Outcome, CliError> {
    let mut outcome = Outcome::default();
    match command {
        Command::Construct { kind, n, k, q, out } => {
            let report = build(kind, n, k, q)?;
            let json = ReportJson::from_construction(&report);
            let prefix = out.unwrap_or_else(|| {
                PathBuf::from(format!("{}_n{}_k{}_q{}", report.kind.name(), report.system.n(), report.system.k(), q))
            });
            code_file_for(&report).write(&with_suffix(&prefix, ".code"))?;
            write_text(&with_suffix(&prefix, ".json"), &(json.to_json() + "\n"))?;
            writeln!(
                outcome.stdout,
                "{} [{},{}]_{}: {} distinct weights (predicted {}, effective dimension {})",
                report.kind.name(),
                report.system.n(),
                report.system.k(),
                q,
                report.achieved_distinct,
                report.predicted_distinct,
                report.effective_dimension
            )
            .unwrap();
        }
        Command::Spectrum { input, method, out } => {
            let file = CodeFile::read(&input)?;
            let g = &file.matrix;
            g.validate()?;
            let sys = ProjectiveSystem::from_generator_matrix(g)?;
            let spec = match method {
                Method::Hyperplane => sys.spectrum_via_hyperplanes()?,
                Method::Codeword => spectrum_via_codewords(g)?,
                Method::Both => {
                    let a = sys.spectrum_via_hyperplanes()?;
                    let b = spectrum_via_codewords(g)?;
                    if a != b {
                        return Err(Error::RouteMismatch(format!("hyperplane {:?} vs codeword {:?}", a.counts(), b.counts())).into());
                    }
                    a
                }
            };
            let json = ReportJson::from_system("file", &sys, &spec, None).to_json();
            if let Some(path) = out {
                write_text(&path, &(json.clone() + "\n"))?;
            }
            outcome.stdout = json + "\n";
        }
        Command::Oracle { n, k, q, budget, workers, out } => {
            let geom = crate::geometry::GeometrySpec::with_order(q, k)?;
            let result = oracle::max_distinct_weights_with(&geom, n, &search_options(budget, workers))?;
            let json = ReportJson::from_search(&result).to_json();
            if let Some(path) = out {
                write_text(&path, &(json.clone() + "\n"))?;
            }
            outcome.stdout = json + "\n";
        }
        Command::Table { q, k, n_from, n_to, budget, workers, out } => {
            if n_from == 0 || n_from > n_to {
                return Err(CliError::Usage("need 1 <= n-from <= n-to".into()));
            }
            let opts = search_options(budget, workers);
            let table = oracle::build_l_table(q, k, n_from..=n_to, &opts)?;
            let mut warnings: Vec<String> = table
                .rows
                .iter()
                .filter(|r| r.max_distinct.is_none())
                .map(|r| format!("n = {}: over the state budget, row left empty", r.n))
                .collect();
            let audit = if table.is_complete() {
                verify::bound_audit(&table)?
            } else {
                warnings.push("table incomplete, audit skipped".into());
                Vec::new()
            };
            let dim2 = if k == 2 && table.is_complete() {
                Some(oracle::dim2_adjudication(q, n_from..=n_to, &SearchOptions { route_checks: 0, ..opts })?)
            } else {
                None
            };
            for w in &warnings {
                writeln!(outcome.stderr, "warning: {w}").unwrap();
            }
            let json = serde_json::to_string_pretty(&TableReport { table, audit, dim2, warnings }).expect("table serializes");
            if let Some(path) = out {
                write_text(&path, &(json.clone() + "\n"))?;
            }
            outcome.stdout = json + "\n";
        }
    }
    Ok(outcome)
}

/// Parses arguments and runs, mapping every failure to an exit code.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let text = e.to_string();
            return if code == EXIT_OK {
                Outcome { stdout: text, stderr: String::new(), exit_code: code }
            } else {
                Outcome { stdout: String::new(), stderr: text, exit_code: code }
            };
        }
    };
    match execute(cli.command) {
        Ok(o) => o,
        Err(e) => Outcome { stdout: String::new(), stderr: format!("error: {e}\n"), exit_code: e.exit_code() },
    }
}
