//! Certifier for GHZ-type all-versus-nothing contradictions on `N` qudits.
//!
//! The crate builds the generalized GHZ state and a family of mutually
//! incompatible ("concurrent") composite observables that all share it as an
//! eigenstate, checks the resulting perfect correlations by exact state-vector
//! simulation, and shows that no deterministic local model reproduces them.
//! The classical side is decided twice: by an exhaustive search over local
//! assignments and by the gcd criterion on `N2·y + N ≡ 0 (mod D)`.
//!
//! ```
//! use ghzq::{certify, ConstructionParams, EIGEN_TOL};
//!
//! let params = ConstructionParams::new(4, 3, 3, 3).unwrap();
//! let cert = certify(&params, EIGEN_TOL).unwrap();
//! assert!(cert.verdict.contradiction);
//! ```

pub mod algebra;
pub mod criterion;
pub mod error;
pub mod ghz;
pub mod lhv;
pub mod observables;
pub mod rational;
pub mod report;

pub use algebra::{
    apply_local, fourier_matrix, inner_product, omega_power, phase_shifter, ComplexAmplitude,
    Dims, LocalMatrix, PhaseFunction, StateVector, DEFAULT_AMP_BOUND, EIGEN_TOL, UNITARY_TOL,
};
pub use criterion::{
    admissible_constructions, genuinely_ddim_check, genuinely_npartite_check,
    reproduce_known_case, CriterionResult, KnownCase,
};
pub use error::{GhzError, Result};
pub use ghz::{
    apply_composite, build_concurrent_set, check_invariance, correlation_function, ghz_state,
    joint_distribution, perfect_correlation_offset, verify_common_eigenstate,
    CompositeObservable, ConstructionParams, GhzState, JointDistribution, MeasurementSetting,
    SettingLabel,
};
pub use lhv::{
    analytic_solvable, brute_force_search, certify, certify_with, constraints_from_params,
    CertifyOptions, ContradictionCertificate, CorrelationConstraint, LhvAssignment,
    DEFAULT_LHV_BOUND,
};
pub use observables::{equivalent, eigenvector, overlap_sq, x_of_alpha, LocalObservable};
pub use rational::Rational;
