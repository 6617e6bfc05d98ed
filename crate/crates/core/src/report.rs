//! Run configuration, the four report-producing commands and JSON persistence.
//!
//! Reports serialize with sorted keys. Apart from the `timing` field, two runs
//! with the same configuration produce byte-identical output.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{DEFAULT_AMP_BOUND, EIGEN_TOL};
use crate::criterion::{
    admissible_constructions, construction_ddim_check, genuinely_npartite_check_bounded,
    AdmissibleN2, CriterionResult, DDimReport, NPartiteReport,
};
use crate::error::{invalid, GhzError, Result};
use crate::ghz::ConstructionParams;
use crate::lhv::{certify_with, CertifyOptions, ContradictionCertificate, DEFAULT_LHV_BOUND};

pub const SCHEMA_VERSION: &str = "ghzq-report/1";

pub const INDEX_CONVENTION: &str =
    "outcome (m_1..m_N) is stored at index sum_k m_k * D^(N-k); party 1 is the most significant digit";

pub const EXIT_OK: i32 = 0;
pub const EXIT_NO_CONTRADICTION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;
pub const EXIT_CONSISTENCY: i32 = 4;

/// Exit code for a failed run.
pub fn exit_code_for(err: &GhzError) -> i32 {
    match err {
        GhzError::InvalidArgument(_) => EXIT_USAGE,
        GhzError::ResourceLimit { .. } => EXIT_RESOURCE,
        GhzError::ConsistencyFailure(_) => EXIT_CONSISTENCY,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Check,
    Certify,
    Sweep,
    Genuineness,
}

/// Inclusive integer range, written `A..B` or `A`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn single(value: usize) -> Self {
        Self {
            start: value,
            end: value,
        }
    }

    pub fn values(&self) -> impl Iterator<Item = usize> {
        self.start..=self.end
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.start == self.end {
            write!(f, "{}", self.start)
        } else {
            write!(f, "{}..{}", self.start, self.end)
        }
    }
}

impl FromStr for Span {
    type Err = GhzError;

    fn from_str(s: &str) -> Result<Self> {
        let parse = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| GhzError::InvalidArgument(format!("bad range {s:?}")))
        };
        let span = match s.split_once("..") {
            Some((a, b)) => Span {
                start: parse(a)?,
                end: parse(b.trim_start_matches('='))?,
            },
            None => Span::single(parse(s)?),
        };
        if span.start > span.end {
            return invalid(format!("empty range {s:?}"));
        }
        Ok(span)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    pub parties: Span,
    pub dim: Span,
    pub n2: Option<usize>,
    pub divisor: Option<usize>,
    pub tolerance: f64,
    pub lhv_bound: u64,
    pub amp_bound: u64,
    /// Where the report is written; not echoed into the report.
    #[serde(skip)]
    pub output: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(command: Command, parties: Span, dim: Span) -> Self {
        Self {
            command,
            parties,
            dim,
            n2: None,
            divisor: None,
            tolerance: EIGEN_TOL,
            lhv_bound: DEFAULT_LHV_BOUND,
            amp_bound: DEFAULT_AMP_BOUND,
            output: None,
        }
    }

    pub fn single(command: Command, parties: usize, dim: usize) -> Self {
        Self::new(command, Span::single(parties), Span::single(dim))
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return invalid(format!("tolerance must be positive, got {}", self.tolerance));
        }
        if self.lhv_bound == 0 || self.amp_bound == 0 {
            return invalid("bounds must be positive");
        }
        if self.parties.start < 3 {
            return invalid(format!("need at least 3 parties, got {}", self.parties));
        }
        if self.dim.start < 2 {
            return invalid(format!("local dimension must be >= 2, got {}", self.dim));
        }
        if self.command != Command::Sweep
            && (self.parties.start != self.parties.end || self.dim.start != self.dim.end)
        {
            return invalid("ranges are only accepted by sweep");
        }
        if self.command != Command::Certify && (self.n2.is_some() || self.divisor.is_some()) {
            return invalid("--n2 and --divisor only apply to certify");
        }
        if self.n2.is_some() && self.divisor.is_some() {
            return invalid("give at most one of --n2 and --divisor");
        }
        Ok(())
    }

    fn certify_options(&self) -> CertifyOptions {
        CertifyOptions {
            tolerance: self.tolerance,
            lhv_bound: self.lhv_bound,
            amp_bound: self.amp_bound,
            allow_analytic_only: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenuinenessReport {
    pub npartite: NPartiteReport,
    pub ddim: DDimReport,
}

impl GenuinenessReport {
    pub fn genuine(&self) -> bool {
        self.npartite.genuine && self.ddim.positive
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub parties: usize,
    pub dim: usize,
    pub admissible: Vec<AdmissibleN2>,
    pub chosen: Option<ConstructionParams>,
    /// `contradiction`, `none`, `no-contradiction` or `resource-limit`.
    pub status: String,
    /// The LHV space was too large, only the gcd test ran.
    pub analytic_only: bool,
    pub quantum_max_residual: Option<f64>,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Outcome {
    pub status: String,
    pub exit_code: i32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub elapsed_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema_version: String,
    pub index_convention: String,
    pub config: RunConfig,
    pub criterion: Option<CriterionResult>,
    pub certificates: Vec<ContradictionCertificate>,
    pub genuineness: Option<GenuinenessReport>,
    pub sweep: Option<Vec<SweepRow>>,
    pub outcome: Outcome,
    pub timing: Timing,
}

impl ReportDocument {
    fn new(config: &RunConfig, outcome: Outcome) -> Self {
        Self {
            schema_version: SCHEMA_VERSION.to_string(),
            index_convention: INDEX_CONVENTION.to_string(),
            config: config.clone(),
            criterion: None,
            certificates: Vec::new(),
            genuineness: None,
            sweep: None,
            outcome,
            timing: Timing {
                elapsed_seconds: 0.0,
            },
        }
    }

    pub fn exit_code(&self) -> i32 {
        self.outcome.exit_code
    }

    /// Key-sorted JSON value.
    pub fn to_value(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("reports are plain data")
    }

    /// Key-sorted, pretty-printed JSON.
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(&self.to_value()).expect("reports are plain data");
        text.push('\n');
        text
    }

    /// JSON with the `timing` field removed, for comparisons across runs.
    pub fn to_json_without_timing(&self) -> String {
        let mut value = self.to_value();
        if let Some(map) = value.as_object_mut() {
            map.remove("timing");
        }
        serde_json::to_string_pretty(&value).expect("reports are plain data") + "\n"
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| GhzError::InvalidArgument(format!("bad report: {e}")))
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json())
            .map_err(|e| GhzError::InvalidArgument(format!("cannot write {}: {e}", path.display())))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| GhzError::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }
}

fn outcome(contradiction: bool, yes: &str, no: &str) -> Outcome {
    if contradiction {
        Outcome {
            status: yes.to_string(),
            exit_code: EXIT_OK,
        }
    } else {
        Outcome {
            status: no.to_string(),
            exit_code: EXIT_NO_CONTRADICTION,
        }
    }
}

/// Dispatch on `config.command`, timing the run.
pub fn run(config: &RunConfig) -> Result<ReportDocument> {
    config.validate()?;
    let start = Instant::now();
    let mut doc = match config.command {
        Command::Check => run_check(config)?,
        Command::Certify => run_certify(config)?,
        Command::Sweep => run_sweep(config)?,
        Command::Genuineness => run_genuineness(config)?,
    };
    doc.timing.elapsed_seconds = start.elapsed().as_secs_f64();
    Ok(doc)
}

/// Divisor criterion only; allocates no state vectors.
pub fn run_check(config: &RunConfig) -> Result<ReportDocument> {
    config.validate()?;
    let criterion = admissible_constructions(config.parties.start, config.dim.start)?;
    let found = criterion.chosen.is_some();
    let mut doc = ReportDocument::new(
        config,
        outcome(found, "admissible construction found", "no contradiction via this construction"),
    );
    doc.criterion = Some(criterion);
    Ok(doc)
}

fn certify_params(config: &RunConfig, criterion: &CriterionResult) -> Result<Option<ConstructionParams>> {
    let (n, d) = (config.parties.start, config.dim.start);
    match (config.n2, config.divisor) {
        (Some(n2), _) => ConstructionParams::with_n2(n, d, n2).map(Some),
        (None, Some(g)) => ConstructionParams::new(n, d, g, g).map(Some),
        (None, None) => Ok(criterion.chosen),
    }
}

/// Full certificate plus genuineness checks for one `(N, D)`.
pub fn run_certify(config: &RunConfig) -> Result<ReportDocument> {
    config.validate()?;
    let criterion = admissible_constructions(config.parties.start, config.dim.start)?;
    let Some(params) = certify_params(config, &criterion)? else {
        let mut doc = ReportDocument::new(config, outcome(false, "", "no contradiction via this construction"));
        doc.criterion = Some(criterion);
        return Ok(doc);
    };
    let cert = certify_with(&params, &config.certify_options())?;
    let genuineness = GenuinenessReport {
        npartite: genuinely_npartite_check_bounded(&params, config.amp_bound)?,
        ddim: construction_ddim_check(&params)?,
    };
    let status = if cert.lhv_search.analytic_only {
        "contradiction certified (analytic-only LHV check)"
    } else {
        "contradiction certified"
    };
    let mut doc = ReportDocument::new(config, outcome(cert.verdict.contradiction, status, "no contradiction"));
    doc.criterion = Some(criterion);
    doc.certificates.push(cert);
    doc.genuineness = Some(genuineness);
    Ok(doc)
}

fn sweep_cell(config: &RunConfig, parties: usize, dim: usize) -> Result<SweepRow> {
    let criterion = admissible_constructions(parties, dim)?;
    let mut row = SweepRow {
        parties,
        dim,
        admissible: criterion.admissible.clone(),
        chosen: criterion.chosen,
        status: "none".to_string(),
        analytic_only: false,
        quantum_max_residual: None,
        note: None,
    };
    let Some(params) = criterion.chosen else {
        return Ok(row);
    };
    match certify_with(&params, &config.certify_options()) {
        Ok(cert) => {
            row.status = if cert.verdict.contradiction {
                "contradiction"
            } else {
                "no-contradiction"
            }
            .to_string();
            row.analytic_only = cert.lhv_search.analytic_only;
            row.quantum_max_residual = Some(cert.quantum_max_residual);
        }
        Err(e @ GhzError::ResourceLimit { .. }) => {
            row.status = "resource-limit".to_string();
            row.note = Some(e.to_string());
        }
        Err(e) => return Err(e),
    }
    Ok(row)
}

/// Existence table over an `(N, D)` grid, rows in N-major order.
pub fn run_sweep(config: &RunConfig) -> Result<ReportDocument> {
    config.validate()?;
    let cells: Vec<(usize, usize)> = config
        .parties
        .values()
        .flat_map(|n| config.dim.values().map(move |d| (n, d)))
        .collect();
    let rows = cells
        .par_iter()
        .map(|&(n, d)| sweep_cell(config, n, d))
        .collect::<Result<Vec<_>>>()?;
    let any = rows.iter().any(|r| r.status == "contradiction");
    let mut doc = ReportDocument::new(config, outcome(any, "contradictions found", "no contradiction in grid"));
    doc.sweep = Some(rows);
    Ok(doc)
}

/// Genuinely N-partite and D-dimensional checks for the chosen construction.
pub fn run_genuineness(config: &RunConfig) -> Result<ReportDocument> {
    config.validate()?;
    let criterion = admissible_constructions(config.parties.start, config.dim.start)?;
    let Some(params) = criterion.chosen else {
        let mut doc = ReportDocument::new(config, outcome(false, "", "no construction to check"));
        doc.criterion = Some(criterion);
        return Ok(doc);
    };
    let report = GenuinenessReport {
        npartite: genuinely_npartite_check_bounded(&params, config.amp_bound)?,
        ddim: construction_ddim_check(&params)?,
    };
    let mut doc = ReportDocument::new(
        config,
        outcome(report.genuine(), "genuinely N-partite and D-dimensional", "not genuine"),
    );
    doc.criterion = Some(criterion);
    doc.genuineness = Some(report);
    Ok(doc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn span_parsing() {
        assert_eq!("3..5".parse::<Span>().unwrap(), Span { start: 3, end: 5 });
        assert_eq!("3..=5".parse::<Span>().unwrap(), Span { start: 3, end: 5 });
        assert_eq!("4".parse::<Span>().unwrap(), Span::single(4));
        assert!("5..3".parse::<Span>().is_err());
        assert!("a..3".parse::<Span>().is_err());
        assert_eq!(Span { start: 2, end: 6 }.to_string(), "2..6");
    }

    #[test]
    fn config_validation() {
        assert!(RunConfig::single(Command::Check, 4, 6).validate().is_ok());
        assert!(RunConfig::single(Command::Check, 2, 6).validate().is_err());
        assert!(RunConfig::new(Command::Check, "3..5".parse().unwrap(), Span::single(2))
            .validate()
            .is_err());
        let mut c = RunConfig::single(Command::Certify, 4, 6);
        c.tolerance = -1.0;
        assert!(c.validate().is_err());
        let mut c = RunConfig::single(Command::Certify, 4, 6);
        c.n2 = Some(2);
        c.divisor = Some(2);
        assert!(c.validate().is_err());
        let mut c = RunConfig::single(Command::Check, 4, 6);
        c.n2 = Some(2);
        assert!(c.validate().is_err());
    }

    #[test]
    fn check_examples() {
        let doc = run(&RunConfig::single(Command::Check, 4, 6)).unwrap();
        let crit = doc.criterion.as_ref().unwrap();
        assert_eq!(crit.admissible.iter().map(|a| a.n2).collect::<Vec<_>>(), vec![3]);
        let chosen = crit.chosen.unwrap();
        assert_eq!((chosen.n1, chosen.n2), (1, 3));
        assert_eq!(doc.exit_code(), EXIT_OK);

        let doc = run(&RunConfig::single(Command::Check, 4, 2)).unwrap();
        assert_eq!(doc.exit_code(), EXIT_NO_CONTRADICTION);
        assert_eq!(doc.outcome.status, "no contradiction via this construction");

        let doc = run(&RunConfig::single(Command::Check, 3, 2)).unwrap();
        let chosen = doc.criterion.unwrap().chosen.unwrap();
        assert_eq!((chosen.n1, chosen.n2), (1, 2));
    }

    #[test]
    fn certify_with_n2_one_is_a_usage_error() {
        let mut c = RunConfig::single(Command::Certify, 4, 6);
        c.n2 = Some(1);
        assert_eq!(exit_code_for(&run(&c).unwrap_err()), EXIT_USAGE);
    }

    #[test]
    fn certify_respects_amp_bound() {
        let mut c = RunConfig::single(Command::Certify, 4, 3);
        c.amp_bound = 80;
        assert_eq!(exit_code_for(&run(&c).unwrap_err()), EXIT_RESOURCE);
    }

    #[test]
    fn json_round_trip() {
        let doc = run(&RunConfig::single(Command::Certify, 4, 3)).unwrap();
        let back = ReportDocument::from_json(&doc.to_json()).unwrap();
        assert_eq!(back, doc);
        assert_eq!(back.to_json(), doc.to_json());
    }

    #[test]
    fn keys_are_sorted() {
        let doc = run(&RunConfig::single(Command::Check, 4, 3)).unwrap();
        let text = doc.to_json();
        let top: Vec<&str> = text
            .lines()
            .filter(|l| l.starts_with("  \"") )
            .map(|l| l.trim().split('"').nth(1).unwrap())
            .collect();
        let mut sorted = top.clone();
        sorted.sort();
        assert_eq!(top, sorted);
    }
}
