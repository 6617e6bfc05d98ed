//! Generalized GHZ states and the `N + 1` concurrent composite observables
//! built on them.
//!
//! The observable set for `N = N1 + N2` parties is `v_0 = X^{⊗N}` and `N`
//! cyclic arrangements of `ω X^{⊗N1} ⊗ Y^{⊗N2}` with `Y = X(1/N2)`. Every
//! member leaves `(1/√D) Σ_n |n⟩^{⊗N}` fixed, although the members do not
//! commute.
//!
//! Composite observables are kept as `(c, [α_1..α_N])` meaning
//! `ω^c X(α_1) ⊗ … ⊗ X(α_N)`. The form `X(D−1) ⊗ …` used for the four-party
//! construction is the same operator as `ω X(0) ⊗ …`, since `X(D−1) = ω X(0)`;
//! the prefactor is always carried in `c`.

use num_complex::Complex64;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::algebra::{
    apply_local, inner_product, omega_int, omega_power, ComplexAmplitude, Dims, LocalMatrix,
    PhaseFunction, StateVector, DEFAULT_AMP_BOUND, EIGEN_TOL,
};
use crate::error::{invalid, GhzError, Result};
use crate::observables::{eigenvector_amplitudes, x_of_alpha};
use crate::rational::{self, Rational};

/// Probability below which an outcome is treated as outside the support.
pub const SUPPORT_THRESHOLD: f64 = 1e-10;

/// `(1/√D) Σ_n |n⟩^{⊗N}`.
#[derive(Debug, Clone, PartialEq)]
pub struct GhzState {
    pub parties: usize,
    pub dim: usize,
    pub vector: StateVector,
}

impl GhzState {
    pub fn dims(&self) -> Dims {
        self.vector.dims()
    }
}

pub fn ghz_state(parties: usize, dim: usize) -> Result<GhzState> {
    ghz_state_bounded(parties, dim, DEFAULT_AMP_BOUND)
}

pub fn ghz_state_bounded(parties: usize, dim: usize, amp_bound: u64) -> Result<GhzState> {
    if parties < 2 {
        return invalid(format!("a GHZ state needs at least 2 parties, got {parties}"));
    }
    let dims = Dims::new(parties, dim)?;
    let mut vector = StateVector::zeros(dims, amp_bound)?;
    let amp = Complex64::new(1.0 / (dim as f64).sqrt(), 0.0);
    let mut amps = vector.amplitudes().to_vec();
    for n in 0..dim {
        amps[dims.index(&vec![n; parties])] = amp;
    }
    vector = StateVector::new(dims, amps)?;
    Ok(GhzState {
        parties,
        dim,
        vector,
    })
}

/// Which of the two local settings a party uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SettingLabel {
    X,
    Y,
}

/// Choice of `N1` X-factors and `N2 = η·g` Y-factors for `N` parties of
/// dimension `D = d·g`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConstructionParams {
    pub parties: usize,
    pub dim: usize,
    pub n1: usize,
    pub n2: usize,
    /// Nonunit divisor `g` shared by `D` and `N2`.
    pub divisor: usize,
    /// `D / g`.
    pub cofactor: usize,
    /// `N2 / g`.
    pub eta: usize,
}

impl ConstructionParams {
    pub fn new(parties: usize, dim: usize, n2: usize, divisor: usize) -> Result<Self> {
        if parties < 2 || dim < 2 {
            return invalid(format!("need N >= 2 and D >= 2, got N={parties} D={dim}"));
        }
        if n2 == 0 || n2 >= parties {
            return invalid(format!("N2 must lie in 1..N-1, got N2={n2} for N={parties}"));
        }
        if divisor < 2 {
            return invalid(format!("divisor g must be a nonunit, got {divisor}"));
        }
        if !dim.is_multiple_of(divisor) || !n2.is_multiple_of(divisor) {
            return invalid(format!("g={divisor} must divide both D={dim} and N2={n2}"));
        }
        Ok(Self {
            parties,
            dim,
            n1: parties - n2,
            n2,
            divisor,
            cofactor: dim / divisor,
            eta: n2 / divisor,
        })
    }

    /// Params for a given `N2`, taking `g = gcd(N2, D)`.
    pub fn with_n2(parties: usize, dim: usize, n2: usize) -> Result<Self> {
        Self::new(parties, dim, n2, n2.gcd(&dim))
    }

    pub fn validate(&self) -> Result<()> {
        let rebuilt = Self::new(self.parties, self.dim, self.n2, self.divisor)?;
        if rebuilt != *self {
            return invalid(format!("inconsistent construction params {self:?}"));
        }
        Ok(())
    }

    /// `α` of the `Y` observable, `1/N2`.
    pub fn y_alpha(&self) -> Rational {
        rational::ratio(1, self.n2 as i64)
    }
}

/// Setting labels of `v_1..v_N` (row `k-1` is `v_k`), following the cyclic
/// placement of the `ω X^{⊗N1}` block.
pub fn cyclic_patterns(parties: usize, n2: usize) -> Vec<Vec<SettingLabel>> {
    use SettingLabel::{X, Y};
    let n1 = parties - n2;
    (1..=parties)
        .map(|k| {
            (1..=parties)
                .map(|i| {
                    let is_y = if k == 1 {
                        i > n1
                    } else if k <= n2 + 1 {
                        i < k || i >= n1 + k
                    } else {
                        i >= k - n2 && i < k
                    };
                    if is_y {
                        Y
                    } else {
                        X
                    }
                })
                .collect()
        })
        .collect()
}

/// `ω^c X(α_1) ⊗ … ⊗ X(α_N)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CompositeObservable {
    pub parties: usize,
    pub dim: usize,
    #[serde(with = "crate::rational::serde_str")]
    pub global_phase_exp: Rational,
    #[serde(with = "crate::rational::serde_str::vec")]
    pub site_alphas: Vec<Rational>,
}

impl CompositeObservable {
    pub fn new(dim: usize, global_phase_exp: Rational, site_alphas: Vec<Rational>) -> Result<Self> {
        if site_alphas.is_empty() {
            return invalid("a composite observable needs at least one site");
        }
        if dim < 2 {
            return invalid(format!("local dimension must be >= 2, got {dim}"));
        }
        Ok(Self {
            parties: site_alphas.len(),
            dim,
            global_phase_exp,
            site_alphas,
        })
    }

    pub fn setting(&self) -> MeasurementSetting {
        MeasurementSetting {
            alphas: self.site_alphas.clone(),
        }
    }

    /// Drop party `site` (1-based), keeping the global phase.
    pub fn without_party(&self, site: usize) -> Result<Self> {
        if site == 0 || site > self.parties {
            return invalid(format!("site {site} outside 1..={}", self.parties));
        }
        let mut alphas = self.site_alphas.clone();
        alphas.remove(site - 1);
        Self::new(self.dim, self.global_phase_exp, alphas)
    }

    /// Linear phase functions `f_k(n) = a_k n` with `⊗_k X(a_k)` equal to this
    /// observable: the prefactor `ω^c` is folded into the first site as
    /// `X(α_1 − c) = ω^c X(α_1)`.
    pub fn phase_functions(&self) -> Vec<PhaseFunction> {
        self.site_alphas
            .iter()
            .enumerate()
            .map(|(k, alpha)| {
                let coefficient = if k == 0 {
                    alpha - self.global_phase_exp
                } else {
                    *alpha
                };
                PhaseFunction::linear(coefficient)
            })
            .collect()
    }

    /// Compact label such as `ω·X⊗Y(1/3)⊗…`.
    pub fn label(&self) -> String {
        let sites: Vec<String> = self
            .site_alphas
            .iter()
            .map(|a| {
                if *a == Rational::from_integer(0) {
                    "X".to_string()
                } else {
                    format!("X({a})")
                }
            })
            .collect();
        let body = sites.join("⊗");
        if self.global_phase_exp == Rational::from_integer(0) {
            body
        } else {
            format!("ω^{}·{body}", self.global_phase_exp)
        }
    }
}

/// Decide `Σ_k f_k(n) ≡ 0 (mod D)` for every `n` exactly.
///
/// For linear `f_k` this is `Σ_k a_k ∈ D·ℤ`.
pub fn check_invariance(phases: &[PhaseFunction], dim: usize) -> bool {
    let total: Rational = phases.iter().map(|f| f.coefficient).sum();
    rational::is_zero_mod(&total, dim as i64)
}

/// The `N + 1` observables `v_0, v_1, …, v_N`.
pub fn build_concurrent_set(p: &ConstructionParams) -> Result<Vec<CompositeObservable>> {
    p.validate()?;
    let zero = Rational::from_integer(0);
    let y = p.y_alpha();
    let mut set = vec![CompositeObservable::new(p.dim, zero, vec![zero; p.parties])?];
    for pattern in cyclic_patterns(p.parties, p.n2) {
        let alphas = pattern
            .iter()
            .map(|label| match label {
                SettingLabel::X => zero,
                SettingLabel::Y => y,
            })
            .collect();
        set.push(CompositeObservable::new(p.dim, Rational::from_integer(1), alphas)?);
    }
    Ok(set)
}

fn check_fits(parties: usize, dim: usize, s: &StateVector) -> Result<()> {
    if s.parties() != parties || s.dim() != dim {
        return invalid(format!(
            "observable on {parties} parties of dimension {dim} applied to state {:?}",
            s.dims()
        ));
    }
    Ok(())
}

/// `v|s⟩`, applying `X(α_k)` at each site in turn.
pub fn apply_composite(v: &CompositeObservable, s: &StateVector) -> Result<StateVector> {
    check_fits(v.parties, v.dim, s)?;
    let mut out = s.clone();
    for (k, alpha) in v.site_alphas.iter().enumerate() {
        out = apply_local(&x_of_alpha(v.dim, alpha), k + 1, &out)?;
    }
    Ok(out.scaled(omega_power(v.dim, &v.global_phase_exp)))
}

/// Per-observable residuals `‖v|s⟩ − |s⟩‖`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenstateReport {
    pub residuals: Vec<f64>,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

pub fn verify_common_eigenstate(
    set: &[CompositeObservable],
    s: &StateVector,
    tol: f64,
) -> Result<EigenstateReport> {
    let residuals = set
        .iter()
        .map(|v| apply_composite(v, s)?.distance(s))
        .collect::<Result<Vec<_>>>()?;
    let max_residual = residuals.iter().copied().fold(0.0, f64::max);
    Ok(EigenstateReport {
        residuals,
        max_residual,
        tolerance: tol,
        pass: max_residual <= tol,
    })
}

/// One local `α` per party.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MeasurementSetting {
    #[serde(with = "crate::rational::serde_str::vec")]
    pub alphas: Vec<Rational>,
}

impl MeasurementSetting {
    pub fn new(alphas: Vec<Rational>) -> Self {
        Self { alphas }
    }

    pub fn uniform(parties: usize, alpha: Rational) -> Self {
        Self::new(vec![alpha; parties])
    }
}

/// Outcome probabilities over `Z_D^N`, indexed like [`StateVector`].
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution {
    dims: Dims,
    probs: Vec<f64>,
}

impl JointDistribution {
    pub fn from_probabilities(dims: Dims, probs: Vec<f64>) -> Result<Self> {
        if dims.checked_len() != Some(probs.len() as u64) {
            return invalid(format!("{} probabilities do not fit {dims:?}", probs.len()));
        }
        Ok(Self { dims, probs })
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probs
    }

    pub fn probability(&self, outcome: &[usize]) -> f64 {
        self.probs[self.dims.index(outcome)]
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// `(outcome tuple, probability)` pairs in index order.
    pub fn iter(&self) -> impl Iterator<Item = (Vec<usize>, f64)> + '_ {
        self.probs
            .iter()
            .enumerate()
            .map(|(i, &p)| (self.dims.digits(i), p))
    }

    /// The unique `c ∈ Z_D` with support inside `{m : Σ m_k ≡ c}`, if any.
    pub fn perfect_correlation_offset(&self) -> Option<usize> {
        let d = self.dims.dim;
        let mut offset = None;
        for (outcome, p) in self.iter() {
            if p <= SUPPORT_THRESHOLD {
                continue;
            }
            let sum = outcome.iter().sum::<usize>() % d;
            match offset {
                None => offset = Some(sum),
                Some(c) if c != sum => return None,
                Some(_) => {}
            }
        }
        offset
    }
}

pub fn perfect_correlation_offset(dist: &JointDistribution, dim: usize) -> Result<Option<usize>> {
    if dist.dims.dim != dim {
        return invalid(format!(
            "distribution over dimension {} queried with D = {dim}",
            dist.dims.dim
        ));
    }
    Ok(dist.perfect_correlation_offset())
}

/// Rows are the conjugated eigenvectors of `X(α)`, so applying it maps a
/// state to its amplitudes in the `X(α)` eigenbasis.
fn analysis_matrix(dim: usize, alpha: &Rational) -> LocalMatrix {
    let rows: Vec<Vec<ComplexAmplitude>> =
        (0..dim).map(|m| eigenvector_amplitudes(dim, alpha, m)).collect();
    LocalMatrix::from_fn(dim, |m, j| rows[m][j].conj())
}

/// `P(m) = |⊗_k ⟨m_k|_{α_k} |s⟩|²`.
pub fn joint_distribution(setting: &MeasurementSetting, s: &StateVector) -> Result<JointDistribution> {
    check_fits(setting.alphas.len(), s.dim(), s)?;
    let mut amps = s.clone();
    for (k, alpha) in setting.alphas.iter().enumerate() {
        amps = apply_local(&analysis_matrix(s.dim(), alpha), k + 1, &amps)?;
    }
    let probs: Vec<f64> = amps.amplitudes().iter().map(|a| a.norm_sqr()).collect();
    let dist = JointDistribution::from_probabilities(s.dims(), probs)?;
    let total = dist.total();
    if (total - s.norm().powi(2)).abs() > EIGEN_TOL {
        return Err(GhzError::ConsistencyFailure(format!(
            "joint distribution sums to {total}, expected {}",
            s.norm().powi(2)
        )));
    }
    Ok(dist)
}

/// `⟨s| ω^c ⊗_k X(α_k) |s⟩`, cross-checked against
/// `Σ_m ω^{Σ m_k + c} P(m)` from the joint distribution.
pub fn correlation_function(
    setting: &MeasurementSetting,
    c: &Rational,
    s: &StateVector,
) -> Result<ComplexAmplitude> {
    let v = CompositeObservable::new(s.dim(), *c, setting.alphas.clone())?;
    let direct = inner_product(s, &apply_composite(&v, s)?)?;

    let d = s.dim();
    let dist = joint_distribution(setting, s)?;
    let prefactor = omega_power(d, c);
    let from_outcomes: ComplexAmplitude = dist
        .iter()
        .map(|(outcome, p)| omega_int(d, outcome.iter().sum::<usize>() as i64) * p)
        .sum::<ComplexAmplitude>()
        * prefactor;

    if (direct - from_outcomes).norm() > EIGEN_TOL {
        return Err(GhzError::ConsistencyFailure(format!(
            "correlation {direct} from the inner product vs {from_outcomes} from outcomes"
        )));
    }
    Ok(direct)
}
