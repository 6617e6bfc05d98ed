//! Deterministic local-realistic models against the perfect correlations.
//!
//! A local model assigns each party `k` a predetermined exponent `x_k` for
//! the `X` setting and `y_k` for the `Y` setting. Perfect correlations turn
//! into linear congruences over `Z_D`:
//!
//! * `v_0`: `Σ_k x_k ≡ 0`
//! * `v_l`, `l = 1..N`: the cyclic X/Y pattern of `v_l` sums to `−1`
//!
//! Perfect correlations pin every outcome, so deterministic assignments cover
//! stochastic local models as well.
//!
//! Adding the `N` constraints `v_1..v_N` gives `N1·Σx + N2·Σy ≡ −N`, and with
//! `Σx ≡ 0` from `v_0` that leaves `N2·Σy + N ≡ 0 (mod D)`, solvable iff
//! `gcd(N2, D)` divides `N`. The x-side drops out because `v_0` already
//! forces `N1·Σx ≡ 0`; the exhaustive search below does not use this and
//! scans every `x` on its own.

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{DEFAULT_AMP_BOUND, EIGEN_TOL};
use crate::error::{invalid, GhzError, Result};
use crate::ghz::{
    build_concurrent_set, cyclic_patterns, ghz_state_bounded, joint_distribution,
    verify_common_eigenstate, ConstructionParams, SettingLabel,
};

/// Default cap on `D^{2N}` for the exhaustive search.
pub const DEFAULT_LHV_BOUND: u64 = 100_000_000;

/// `Σ_k (value of party k under settings[k]) ≡ offset (mod D)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CorrelationConstraint {
    pub settings: Vec<SettingLabel>,
    pub offset: usize,
}

impl CorrelationConstraint {
    pub fn pattern(&self) -> String {
        self.settings.iter().map(|l| format!("{l:?}")).collect()
    }

    pub fn is_satisfied_by(&self, assignment: &LhvAssignment, dim: usize) -> bool {
        let sum: usize = self
            .settings
            .iter()
            .enumerate()
            .map(|(k, label)| match label {
                SettingLabel::X => assignment.x[k],
                SettingLabel::Y => assignment.y[k],
            })
            .sum();
        sum % dim == self.offset
    }
}

/// Predetermined outcome exponents for every party and setting.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LhvAssignment {
    pub x: Vec<usize>,
    pub y: Vec<usize>,
}

impl LhvAssignment {
    pub fn satisfies(&self, constraints: &[CorrelationConstraint], dim: usize) -> bool {
        constraints.iter().all(|c| c.is_satisfied_by(self, dim))
    }
}

/// Constraints `v_0..v_N` for `N` parties with `N2` Y-factors, without
/// requiring a nonunit divisor.
pub fn cyclic_constraints(parties: usize, dim: usize, n2: usize) -> Result<Vec<CorrelationConstraint>> {
    if parties < 2 || dim < 2 || n2 == 0 || n2 >= parties {
        return invalid(format!("no cyclic constraint system for N={parties} D={dim} N2={n2}"));
    }
    let minus_one = dim - 1;
    let mut constraints = vec![CorrelationConstraint {
        settings: vec![SettingLabel::X; parties],
        offset: 0,
    }];
    constraints.extend(
        cyclic_patterns(parties, n2)
            .into_iter()
            .map(|settings| CorrelationConstraint {
                settings,
                offset: minus_one,
            }),
    );
    Ok(constraints)
}

pub fn constraints_from_params(p: &ConstructionParams) -> Result<Vec<CorrelationConstraint>> {
    p.validate()?;
    cyclic_constraints(p.parties, p.dim, p.n2)
}

/// `D^{2N}`, saturating.
pub fn search_space_size(parties: usize, dim: usize) -> u64 {
    (dim as u64).checked_pow(2 * parties as u32).unwrap_or(u64::MAX)
}

struct Search<'a> {
    dim: usize,
    parties: usize,
    constraints: &'a [CorrelationConstraint],
    /// For each variable, the constraints that read it.
    readers: Vec<Vec<usize>>,
    /// For each variable, the constraints whose last variable it is.
    closers: Vec<Vec<usize>>,
}

impl<'a> Search<'a> {
    /// Variables are ordered `x_1..x_N, y_1..y_N`; depth-first in this order
    /// visits assignments lexicographically.
    fn new(constraints: &'a [CorrelationConstraint], parties: usize, dim: usize) -> Self {
        let vars = 2 * parties;
        let mut readers = vec![Vec::new(); vars];
        let mut closers = vec![Vec::new(); vars];
        for (ci, c) in constraints.iter().enumerate() {
            let var_of = |k: usize| match c.settings[k] {
                SettingLabel::X => k,
                SettingLabel::Y => parties + k,
            };
            let mut last = 0;
            for k in 0..parties {
                readers[var_of(k)].push(ci);
                last = last.max(var_of(k));
            }
            closers[last].push(ci);
        }
        Self {
            dim,
            parties,
            constraints,
            readers,
            closers,
        }
    }

    fn descend(&self, var: usize, values: &mut [usize], sums: &mut [usize]) -> bool {
        if var == values.len() {
            return true;
        }
        for value in 0..self.dim {
            if self.try_value(var, value, values, sums) {
                return true;
            }
        }
        false
    }

    fn try_value(&self, var: usize, value: usize, values: &mut [usize], sums: &mut [usize]) -> bool {
        values[var] = value;
        for &ci in &self.readers[var] {
            sums[ci] += value;
        }
        let consistent = self.closers[var]
            .iter()
            .all(|&ci| sums[ci] % self.dim == self.constraints[ci].offset);
        let found = consistent && self.descend(var + 1, values, sums);
        if !found {
            for &ci in &self.readers[var] {
                sums[ci] -= value;
            }
        }
        found
    }

    fn first_with_leading(&self, leading: usize) -> Option<LhvAssignment> {
        let mut values = vec![0; 2 * self.parties];
        let mut sums = vec![0; self.constraints.len()];
        self.try_value(0, leading, &mut values, &mut sums).then(|| LhvAssignment {
            x: values[..self.parties].to_vec(),
            y: values[self.parties..].to_vec(),
        })
    }
}

/// Lexicographically first `(x, y) ∈ Z_D^{2N}` satisfying every constraint.
///
/// Assignments are only rejected once a constraint has all of its variables
/// fixed, so the result is exactly what a full scan would return. The space
/// is split on `x_1` across threads and the smallest hit wins.
pub fn brute_force_search(
    constraints: &[CorrelationConstraint],
    parties: usize,
    dim: usize,
    bound: u64,
) -> Result<Option<LhvAssignment>> {
    if parties == 0 || dim < 2 {
        return invalid(format!("bad search shape N={parties} D={dim}"));
    }
    if let Some(bad) = constraints
        .iter()
        .find(|c| c.settings.len() != parties || c.offset >= dim)
    {
        return invalid(format!("constraint {bad:?} does not fit N={parties} D={dim}"));
    }
    let space = search_space_size(parties, dim);
    if space > bound {
        return Err(GhzError::ResourceLimit {
            what: "LHV assignments",
            required: u128::from(dim as u64)
                .checked_pow(2 * parties as u32)
                .unwrap_or(u128::MAX),
            bound: bound as u128,
        });
    }
    let search = Search::new(constraints, parties, dim);
    Ok((0..dim)
        .into_par_iter()
        .find_map_first(|leading| search.first_with_leading(leading)))
}

/// Solvability of `N2·y + N ≡ 0 (mod D)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalyticWitness {
    pub gcd_value: usize,
    pub divides_n: bool,
}

impl AnalyticWitness {
    pub fn solvable(&self) -> bool {
        self.divides_n
    }
}

pub fn analytic_solvable(parties: usize, dim: usize, n2: usize) -> Result<AnalyticWitness> {
    if n2 == 0 || n2 >= parties {
        return invalid(format!("N2 must lie in 1..N-1, got N2={n2} for N={parties}"));
    }
    if dim < 2 {
        return invalid(format!("local dimension must be >= 2, got {dim}"));
    }
    let gcd_value = n2.gcd(&dim);
    Ok(AnalyticWitness {
        gcd_value,
        divides_n: parties.is_multiple_of(gcd_value),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LhvSearchResult {
    pub space_size: u64,
    /// The space exceeded the bound and only the analytic test was run.
    pub analytic_only: bool,
    pub satisfying: Option<LhvAssignment>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub contradiction: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContradictionCertificate {
    pub params: ConstructionParams,
    pub observables: Vec<String>,
    pub constraints: Vec<CorrelationConstraint>,
    pub quantum_residuals: Vec<f64>,
    pub quantum_max_residual: f64,
    pub tolerance: f64,
    /// Outcome-sum offsets of each observable's local settings (prefactor
    /// excluded), read off the simulated distributions.
    pub quantum_offsets: Vec<Option<usize>>,
    pub lhv_search: LhvSearchResult,
    pub analytic: AnalyticWitness,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertifyOptions {
    pub tolerance: f64,
    pub lhv_bound: u64,
    pub amp_bound: u64,
    /// Fall back to the analytic test when `D^{2N}` exceeds `lhv_bound`
    /// instead of failing with a resource-limit error.
    pub allow_analytic_only: bool,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        Self {
            tolerance: EIGEN_TOL,
            lhv_bound: DEFAULT_LHV_BOUND,
            amp_bound: DEFAULT_AMP_BOUND,
            allow_analytic_only: false,
        }
    }
}

pub fn certify(p: &ConstructionParams, tol: f64) -> Result<ContradictionCertificate> {
    certify_with(
        p,
        &CertifyOptions {
            tolerance: tol,
            ..CertifyOptions::default()
        },
    )
}

/// Quantum eigenstate check, exhaustive LHV search and analytic test, with
/// the two classical routes required to agree.
pub fn certify_with(p: &ConstructionParams, opts: &CertifyOptions) -> Result<ContradictionCertificate> {
    p.validate()?;
    let set = build_concurrent_set(p)?;
    let state = ghz_state_bounded(p.parties, p.dim, opts.amp_bound)?.vector;
    let eigen = verify_common_eigenstate(&set, &state, opts.tolerance)?;
    let constraints = constraints_from_params(p)?;

    let quantum_offsets = set
        .iter()
        .map(|v| Ok(joint_distribution(&v.setting(), &state)?.perfect_correlation_offset()))
        .collect::<Result<Vec<_>>>()?;
    for (c, q) in constraints.iter().zip(&quantum_offsets) {
        if eigen.pass && *q != Some(c.offset) {
            return Err(GhzError::ConsistencyFailure(format!(
                "constraint {} expects offset {} but the quantum distribution gives {q:?}",
                c.pattern(),
                c.offset
            )));
        }
    }

    let analytic = analytic_solvable(p.parties, p.dim, p.n2)?;
    let space_size = search_space_size(p.parties, p.dim);
    let lhv_search = match brute_force_search(&constraints, p.parties, p.dim, opts.lhv_bound) {
        Ok(satisfying) => {
            if let Some(a) = &satisfying {
                if !a.satisfies(&constraints, p.dim) {
                    return Err(GhzError::ConsistencyFailure(format!(
                        "search returned {a:?}, which violates the constraints"
                    )));
                }
            }
            if satisfying.is_some() != analytic.solvable() {
                return Err(GhzError::ConsistencyFailure(format!(
                    "N={} D={} N2={}: exhaustive search {} an assignment but gcd({}, {}) = {} {} N",
                    p.parties,
                    p.dim,
                    p.n2,
                    if satisfying.is_some() { "found" } else { "did not find" },
                    p.n2,
                    p.dim,
                    analytic.gcd_value,
                    if analytic.divides_n { "divides" } else { "does not divide" },
                )));
            }
            LhvSearchResult {
                space_size,
                analytic_only: false,
                satisfying,
            }
        }
        Err(GhzError::ResourceLimit { .. }) if opts.allow_analytic_only => LhvSearchResult {
            space_size,
            analytic_only: true,
            satisfying: None,
        },
        Err(e) => return Err(e),
    };

    let contradiction = eigen.pass && lhv_search.satisfying.is_none() && !analytic.solvable();
    Ok(ContradictionCertificate {
        params: *p,
        observables: set.iter().map(|v| v.label()).collect(),
        constraints,
        quantum_residuals: eigen.residuals,
        quantum_max_residual: eigen.max_residual,
        tolerance: opts.tolerance,
        quantum_offsets,
        lhv_search,
        analytic,
        verdict: Verdict { contradiction },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(n: usize, d: usize, n2: usize, g: usize) -> ConstructionParams {
        ConstructionParams::new(n, d, n2, g).unwrap()
    }

    fn summary(cs: &[CorrelationConstraint]) -> Vec<(String, usize)> {
        cs.iter().map(|c| (c.pattern(), c.offset)).collect()
    }

    /// Plain odometer over all of `Z_D^{2N}` in lexicographic order.
    fn naive_first(cs: &[CorrelationConstraint], n: usize, d: usize) -> Option<LhvAssignment> {
        let mut digits = vec![0usize; 2 * n];
        loop {
            let a = LhvAssignment {
                x: digits[..n].to_vec(),
                y: digits[n..].to_vec(),
            };
            if a.satisfies(cs, d) {
                return Some(a);
            }
            let mut pos = 2 * n;
            loop {
                if pos == 0 {
                    return None;
                }
                pos -= 1;
                digits[pos] += 1;
                if digits[pos] < d {
                    break;
                }
                digits[pos] = 0;
            }
        }
    }

    #[test]
    fn constraint_examples() {
        let cs = constraints_from_params(&params(4, 3, 3, 3)).unwrap();
        let expect = [("XXXX", 0), ("XYYY", 2), ("YXYY", 2), ("YYXY", 2), ("YYYX", 2)];
        assert_eq!(summary(&cs), expect.map(|(p, o)| (p.to_string(), o)));

        let cs = constraints_from_params(&params(3, 2, 2, 2)).unwrap();
        let expect = [("XXX", 0), ("XYY", 1), ("YXY", 1), ("YYX", 1)];
        assert_eq!(summary(&cs), expect.map(|(p, o)| (p.to_string(), o)));
    }

    #[test]
    fn search_examples() {
        let cs = constraints_from_params(&params(3, 2, 2, 2)).unwrap();
        assert_eq!(brute_force_search(&cs, 3, 2, DEFAULT_LHV_BOUND).unwrap(), None);

        let cs = constraints_from_params(&params(4, 3, 3, 3)).unwrap();
        assert_eq!(search_space_size(4, 3), 6561);
        assert_eq!(brute_force_search(&cs, 4, 3, DEFAULT_LHV_BOUND).unwrap(), None);

        let cs = constraints_from_params(&params(4, 6, 2, 2)).unwrap();
        let found = brute_force_search(&cs, 4, 6, DEFAULT_LHV_BOUND).unwrap().unwrap();
        assert!(found.satisfies(&cs, 6));
    }

    #[test]
    fn pruned_search_matches_naive_scan() {
        for (n, d) in [(3, 2), (3, 3), (3, 4), (4, 2), (4, 3)] {
            for n2 in 1..n {
                let cs = cyclic_constraints(n, d, n2).unwrap();
                assert_eq!(
                    brute_force_search(&cs, n, d, DEFAULT_LHV_BOUND).unwrap(),
                    naive_first(&cs, n, d),
                    "N={n} D={d} N2={n2}"
                );
            }
        }
    }

    #[test]
    fn search_is_lexicographically_first() {
        // x = 0 everywhere and y ≡ x − 1 works for N2 = 1; the scan must
        // still land on whatever the naive odometer finds first
        let cs = cyclic_constraints(3, 3, 1).unwrap();
        let found = brute_force_search(&cs, 3, 3, DEFAULT_LHV_BOUND).unwrap().unwrap();
        assert_eq!(Some(found.clone()), naive_first(&cs, 3, 3));
        assert_eq!(found.x, vec![0, 0, 0]);
    }

    #[test]
    fn search_bound() {
        let cs = cyclic_constraints(4, 12, 3).unwrap();
        assert!(matches!(
            brute_force_search(&cs, 4, 12, DEFAULT_LHV_BOUND),
            Err(GhzError::ResourceLimit { .. })
        ));
        let cs = cyclic_constraints(3, 2, 2).unwrap();
        assert!(brute_force_search(&cs, 3, 2, 63).is_err());
        assert!(brute_force_search(&cs, 3, 2, 64).is_ok());
        assert!(brute_force_search(&cs, 4, 2, 64).is_err());
    }

    #[test]
    fn analytic_examples() {
        let w = analytic_solvable(4, 3, 3).unwrap();
        assert_eq!((w.gcd_value, w.solvable()), (3, false));
        let w = analytic_solvable(4, 6, 2).unwrap();
        assert_eq!((w.gcd_value, w.solvable()), (2, true));
        let w = analytic_solvable(4, 6, 3).unwrap();
        assert_eq!((w.gcd_value, w.solvable()), (3, false));
        assert!(analytic_solvable(4, 6, 4).is_err());
    }

    #[test]
    fn certify_examples() {
        let cert = certify(&params(4, 3, 3, 3), EIGEN_TOL).unwrap();
        assert!(cert.verdict.contradiction);
        assert_eq!(cert.lhv_search.space_size, 6561);
        assert_eq!(cert.quantum_offsets, vec![Some(0), Some(2), Some(2), Some(2), Some(2)]);

        let cert = certify(&params(4, 6, 2, 2), EIGEN_TOL).unwrap();
        assert!(!cert.verdict.contradiction);
        assert!(cert.lhv_search.satisfying.is_some());

        let cert = certify(&params(4, 6, 3, 3), EIGEN_TOL).unwrap();
        assert!(cert.verdict.contradiction);
    }

    #[test]
    fn certify_falls_back_when_asked() {
        let p = params(4, 12, 3, 3);
        assert!(matches!(certify(&p, EIGEN_TOL), Err(GhzError::ResourceLimit { .. })));
        let opts = CertifyOptions {
            allow_analytic_only: true,
            ..CertifyOptions::default()
        };
        let cert = certify_with(&p, &opts).unwrap();
        assert!(cert.lhv_search.analytic_only);
        assert!(cert.verdict.contradiction);
    }

    #[test]
    fn certify_is_deterministic() {
        let p = params(4, 6, 2, 2);
        assert_eq!(certify(&p, EIGEN_TOL).unwrap(), certify(&p, EIGEN_TOL).unwrap());
    }
}
