//! Which `(N, D)` admit a contradiction from this construction, the known
//! special cases, and the genuineness checks.
//!
//! A contradiction needs some `N2 ∈ 1..N−1` with `gcd(N2, D) ∤ N`: then a
//! nonunit `g = gcd(N2, D)` divides both `D` and `N2` but not `N`. The prose
//! form "N is not divisible by all nonunit divisors of D smaller than N" can
//! also be read universally; the existential reading is the one implemented,
//! because it is exactly what the construction plus the solvability argument
//! use.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::algebra::{DEFAULT_AMP_BOUND, EIGEN_TOL};
use crate::error::{invalid, GhzError, Result};
use crate::ghz::{
    build_concurrent_set, check_invariance, ghz_state_bounded, verify_common_eigenstate,
    ConstructionParams,
};
use crate::observables::{equivalent, overlap_argument, overlap_sq};
use crate::rational::{self, Rational};

/// Residual above which a reduced observable counts as failing.
pub const REDUCED_FAIL_THRESHOLD: f64 = 1e-6;

/// Lower bound asserted on overlaps of inequivalent eigenbases.
pub const OVERLAP_FLOOR: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdmissibleN2 {
    pub n2: usize,
    pub gcd: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionResult {
    pub parties: usize,
    pub dim: usize,
    pub admissible: Vec<AdmissibleN2>,
    pub chosen: Option<ConstructionParams>,
}

/// All `N2` with `gcd(N2, D) ∤ N`; the smallest one is chosen.
pub fn admissible_constructions(parties: usize, dim: usize) -> Result<CriterionResult> {
    if parties < 3 {
        return invalid(format!("the criterion needs N >= 3, got {parties}"));
    }
    if dim < 2 {
        return invalid(format!("local dimension must be >= 2, got {dim}"));
    }
    let admissible: Vec<AdmissibleN2> = (1..parties)
        .map(|n2| AdmissibleN2 { n2, gcd: n2.gcd(&dim) })
        .filter(|a| !parties.is_multiple_of(a.gcd))
        .collect();
    let chosen = admissible
        .first()
        .map(|a| ConstructionParams::new(parties, dim, a.n2, a.gcd))
        .transpose()?;
    Ok(CriterionResult {
        parties,
        dim,
        admissible,
        chosen,
    })
}

/// Special cases reproduced by the construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum KnownCase {
    /// Three qubits, two `Y` settings per constraint.
    ThreeQubit,
    /// `D + 1` qudits with `N1 = 1`, `N2 = D`.
    DPlusOneParties { dim: usize },
    /// Odd `N`, even `D`, `g = 2`.
    OddPartiesEvenDim { parties: usize, dim: usize },
}

impl fmt::Display for KnownCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KnownCase::ThreeQubit => write!(f, "three-qubit"),
            KnownCase::DPlusOneParties { dim } => write!(f, "d-plus-one:{dim}"),
            KnownCase::OddPartiesEvenDim { parties, dim } => write!(f, "odd-n-even-d:{parties}:{dim}"),
        }
    }
}

impl FromStr for KnownCase {
    type Err = GhzError;

    /// Parses the [`Display`](fmt::Display) form.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |i: usize| -> Result<usize> {
            parts
                .get(i)
                .and_then(|p| p.parse().ok())
                .ok_or_else(|| GhzError::InvalidArgument(format!("bad known-case id {s:?}")))
        };
        match (parts[0], parts.len()) {
            ("three-qubit", 1) => Ok(KnownCase::ThreeQubit),
            ("d-plus-one", 2) => Ok(KnownCase::DPlusOneParties { dim: num(1)? }),
            ("odd-n-even-d", 3) => Ok(KnownCase::OddPartiesEvenDim {
                parties: num(1)?,
                dim: num(2)?,
            }),
            _ => invalid(format!("unknown known-case id {s:?}")),
        }
    }
}

pub fn reproduce_known_case(case: KnownCase) -> Result<ConstructionParams> {
    match case {
        KnownCase::ThreeQubit => ConstructionParams::new(3, 2, 2, 2),
        KnownCase::DPlusOneParties { dim } => {
            if dim < 2 {
                return invalid(format!("local dimension must be >= 2, got {dim}"));
            }
            ConstructionParams::new(dim + 1, dim, dim, dim)
        }
        KnownCase::OddPartiesEvenDim { parties, dim } => {
            if parties < 3 || parties % 2 == 0 || dim < 2 || dim % 2 != 0 {
                return invalid(format!("need odd N >= 3 and even D, got N={parties} D={dim}"));
            }
            // largest even N2 <= N-1 is N-1 itself, leaving N1 = 1
            ConstructionParams::new(parties, dim, parties - 1, 2)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartyRemoval {
    /// Removed party (1-based).
    pub party: usize,
    /// `‖v'|ψ_{N-1}⟩ − |ψ_{N-1}⟩‖` for each reduced `v_l`.
    pub residuals: Vec<f64>,
    /// Indices `l` whose reduced observable no longer fixes the state.
    pub failing: Vec<usize>,
    /// Indices `l` whose reduced phase list violates the invariance condition.
    pub phase_violations: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NPartiteReport {
    pub params: ConstructionParams,
    pub removals: Vec<PartyRemoval>,
    /// Every removal breaks at least one observable.
    pub genuine: bool,
}

pub fn genuinely_npartite_check(p: &ConstructionParams) -> Result<NPartiteReport> {
    genuinely_npartite_check_bounded(p, DEFAULT_AMP_BOUND)
}

/// Delete each party in turn from all `N + 1` observables and test the
/// reductions against the `(N−1)`-party GHZ state, numerically and through
/// the exact invariance condition.
pub fn genuinely_npartite_check_bounded(p: &ConstructionParams, amp_bound: u64) -> Result<NPartiteReport> {
    p.validate()?;
    let set = build_concurrent_set(p)?;
    let reduced_state = ghz_state_bounded(p.parties - 1, p.dim, amp_bound)?.vector;
    let mut removals = Vec::with_capacity(p.parties);
    for party in 1..=p.parties {
        let reduced = set
            .iter()
            .map(|v| v.without_party(party))
            .collect::<Result<Vec<_>>>()?;
        let report = verify_common_eigenstate(&reduced, &reduced_state, EIGEN_TOL)?;
        let failing: Vec<usize> = report
            .residuals
            .iter()
            .enumerate()
            .filter(|(_, &r)| r > REDUCED_FAIL_THRESHOLD)
            .map(|(l, _)| l)
            .collect();
        let phase_violations: Vec<usize> = reduced
            .iter()
            .enumerate()
            .filter(|(_, v)| !check_invariance(&v.phase_functions(), p.dim))
            .map(|(l, _)| l)
            .collect();
        if let Some((l, r)) = report
            .residuals
            .iter()
            .enumerate()
            .find(|(_, &r)| r > EIGEN_TOL && r <= REDUCED_FAIL_THRESHOLD)
        {
            return Err(GhzError::ConsistencyFailure(format!(
                "reduced observable {l} without party {party} has ambiguous residual {r:e}"
            )));
        }
        if failing != phase_violations {
            return Err(GhzError::ConsistencyFailure(format!(
                "without party {party}: residual failures {failing:?} vs invariance violations {phase_violations:?}"
            )));
        }
        removals.push(PartyRemoval {
            party,
            residuals: report.residuals,
            failing,
            phase_violations,
        });
    }
    let genuine = removals.iter().all(|r| !r.failing.is_empty());
    Ok(NPartiteReport {
        params: *p,
        removals,
        genuine,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DDimReport {
    pub dim: usize,
    #[serde(with = "crate::rational::serde_str")]
    pub alpha: Rational,
    #[serde(with = "crate::rational::serde_str")]
    pub beta: Rational,
    pub min_overlap: f64,
    /// `(n, m)` attaining the minimum (first in row-major order).
    pub argmin: (usize, usize),
    #[serde(with = "crate::rational::serde_str")]
    pub argmin_xi: Rational,
    pub positive: bool,
}

/// Smallest `|⟨n_α|m_β⟩|²` over all label pairs. Requires `β − α ∉ ℤ`.
pub fn genuinely_ddim_check(dim: usize, alpha: &Rational, beta: &Rational) -> Result<DDimReport> {
    if dim < 2 {
        return invalid(format!("local dimension must be >= 2, got {dim}"));
    }
    if equivalent(alpha, beta) {
        return invalid(format!(
            "β − α = {} is an integer; the observables are equivalent",
            beta - alpha
        ));
    }
    let mut best = (f64::INFINITY, (0, 0));
    for n in 0..dim {
        for m in 0..dim {
            let value = overlap_sq(dim, n, alpha, m, beta)?;
            if value < best.0 {
                best = (value, (n, m));
            }
        }
    }
    let (min_overlap, (n, m)) = best;
    if min_overlap <= OVERLAP_FLOOR {
        return Err(GhzError::ConsistencyFailure(format!(
            "overlap {min_overlap:e} at (n, m) = ({n}, {m}) although ξ is not an integer"
        )));
    }
    Ok(DDimReport {
        dim,
        alpha: *alpha,
        beta: *beta,
        min_overlap,
        argmin: (n, m),
        argmin_xi: overlap_argument(n, alpha, m, beta),
        positive: min_overlap > 0.0,
    })
}

/// `Y = X(1/N2)` against `X = X(0)` for a construction.
pub fn construction_ddim_check(p: &ConstructionParams) -> Result<DDimReport> {
    genuinely_ddim_check(p.dim, &rational::int(0), &p.y_alpha())
}
