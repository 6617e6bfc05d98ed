//! Dense qudit linear algebra: roots of unity, single-site matrices and
//! joint state vectors.
//!
//! Joint states of `N` parties with local dimension `D` are stored as dense
//! vectors of length `D^N`. The outcome tuple `(m_1, ..., m_N)` lives at index
//! `Σ_k m_k · D^{N-k}`: party 1 is the most significant digit. Local operators
//! are applied site by site, never as `D^N × D^N` matrices.

use std::f64::consts::PI;
use std::ops::Mul;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, GhzError, Result};
use crate::rational::Rational;

pub type ComplexAmplitude = Complex64;

/// Tolerance for unitarity and normalization checks on `D ≤ 12` matrices.
pub const UNITARY_TOL: f64 = 1e-12;

/// Tolerance for eigenstate residuals on `D^N`-dimensional vectors.
pub const EIGEN_TOL: f64 = 1e-10;

/// Default cap on the number of amplitudes a joint state may hold.
pub const DEFAULT_AMP_BOUND: u64 = 10_000_000;

/// `ω^c = exp(2πi·c/D)` on the principal branch.
///
/// `c` is first reduced exactly into `[0, D)`, so `omega_power(d, c + d)` is
/// bit-identical to `omega_power(d, c)`.
pub fn omega_power(d: usize, c: &Rational) -> ComplexAmplitude {
    debug_assert!(d >= 2);
    let modulus = Rational::from_integer(d as i64);
    let reduced = c - (c / modulus).floor() * modulus;
    let angle = 2.0 * PI * (*reduced.numer() as f64) / ((*reduced.denom() as f64) * d as f64);
    Complex64::from_polar(1.0, angle)
}

/// `ω^k` for an integer exponent.
pub fn omega_int(d: usize, k: i64) -> ComplexAmplitude {
    omega_power(d, &Rational::from_integer(k))
}

/// Shape of a joint register: `parties` sites of dimension `dim` each.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Dims {
    pub parties: usize,
    pub dim: usize,
}

impl Dims {
    pub fn new(parties: usize, dim: usize) -> Result<Self> {
        if parties == 0 {
            return invalid("a register needs at least one party");
        }
        if dim < 2 {
            return invalid(format!("local dimension must be >= 2, got {dim}"));
        }
        Ok(Self { parties, dim })
    }

    /// `D^N`, or `None` on overflow.
    pub fn checked_len(&self) -> Option<u64> {
        (self.dim as u64).checked_pow(self.parties as u32)
    }

    /// `D^N`, refusing anything above `bound`.
    pub fn len_within(&self, bound: u64) -> Result<usize> {
        match self.checked_len() {
            Some(len) if len <= bound => Ok(len as usize),
            other => Err(GhzError::ResourceLimit {
                what: "state-vector amplitudes",
                required: other.map_or(u128::MAX, u128::from),
                bound: bound as u128,
            }),
        }
    }

    /// Outcome tuple at a flat index (party 1 first).
    pub fn digits(&self, mut index: usize) -> Vec<usize> {
        let mut digits = vec![0; self.parties];
        for slot in digits.iter_mut().rev() {
            *slot = index % self.dim;
            index /= self.dim;
        }
        digits
    }

    pub fn index(&self, digits: &[usize]) -> usize {
        digits.iter().fold(0, |acc, &m| acc * self.dim + m)
    }

    /// Distance in the flat array between consecutive values of `site` (1-based).
    fn stride(&self, site: usize) -> usize {
        self.dim.pow((self.parties - site) as u32)
    }
}

/// Dense joint state of `N` qudits.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    dims: Dims,
    amplitudes: Vec<ComplexAmplitude>,
}

impl StateVector {
    pub fn new(dims: Dims, amplitudes: Vec<ComplexAmplitude>) -> Result<Self> {
        match dims.checked_len() {
            Some(len) if len as usize == amplitudes.len() => Ok(Self { dims, amplitudes }),
            _ => invalid(format!(
                "{} amplitudes do not fit {} parties of dimension {}",
                amplitudes.len(),
                dims.parties,
                dims.dim
            )),
        }
    }

    pub fn zeros(dims: Dims, amp_bound: u64) -> Result<Self> {
        let len = dims.len_within(amp_bound)?;
        Ok(Self {
            dims,
            amplitudes: vec![Complex64::new(0.0, 0.0); len],
        })
    }

    /// Computational basis state `|m_1 … m_N⟩`.
    pub fn basis(dims: Dims, digits: &[usize], amp_bound: u64) -> Result<Self> {
        if digits.len() != dims.parties || digits.iter().any(|&m| m >= dims.dim) {
            return invalid(format!("basis label {digits:?} does not fit {dims:?}"));
        }
        let mut state = Self::zeros(dims, amp_bound)?;
        state.amplitudes[dims.index(digits)] = Complex64::new(1.0, 0.0);
        Ok(state)
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn parties(&self) -> usize {
        self.dims.parties
    }

    pub fn dim(&self) -> usize {
        self.dims.dim
    }

    pub fn amplitudes(&self) -> &[ComplexAmplitude] {
        &self.amplitudes
    }

    pub fn amplitude(&self, digits: &[usize]) -> ComplexAmplitude {
        self.amplitudes[self.dims.index(digits)]
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalized(&self) -> Self {
        let norm = self.norm();
        self.scaled(Complex64::new(1.0 / norm, 0.0))
    }

    pub fn scaled(&self, factor: ComplexAmplitude) -> Self {
        Self {
            dims: self.dims,
            amplitudes: self.amplitudes.iter().map(|a| a * factor).collect(),
        }
    }

    /// `self + factor · other`.
    pub fn add_scaled(&self, factor: ComplexAmplitude, other: &Self) -> Result<Self> {
        self.check_same_dims(other)?;
        Ok(Self {
            dims: self.dims,
            amplitudes: self
                .amplitudes
                .iter()
                .zip(&other.amplitudes)
                .map(|(a, b)| a + factor * b)
                .collect(),
        })
    }

    /// Euclidean norm of `self − other`.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        self.check_same_dims(other)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt())
    }

    fn check_same_dims(&self, other: &Self) -> Result<()> {
        if self.dims != other.dims {
            return invalid(format!(
                "state dimensions differ: {:?} vs {:?}",
                self.dims, other.dims
            ));
        }
        Ok(())
    }
}

/// `⟨a|b⟩`, conjugating the first argument.
pub fn inner_product(a: &StateVector, b: &StateVector) -> Result<ComplexAmplitude> {
    a.check_same_dims(b)?;
    Ok(a.amplitudes
        .iter()
        .zip(&b.amplitudes)
        .map(|(x, y)| x.conj() * y)
        .sum())
}

/// A `D × D` complex matrix acting on one site, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalMatrix {
    dim: usize,
    entries: Vec<ComplexAmplitude>,
}

impl LocalMatrix {
    pub fn from_fn(dim: usize, mut entry: impl FnMut(usize, usize) -> ComplexAmplitude) -> Self {
        let entries = (0..dim * dim).map(|i| entry(i / dim, i % dim)).collect();
        Self { dim, entries }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |r, c| {
            Complex64::new(if r == c { 1.0 } else { 0.0 }, 0.0)
        })
    }

    pub fn diagonal(values: &[ComplexAmplitude]) -> Self {
        Self::from_fn(values.len(), |r, c| {
            if r == c {
                values[r]
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> ComplexAmplitude {
        self.entries[row * self.dim + col]
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |r, c| self.get(c, r).conj())
    }

    pub fn scaled(&self, factor: ComplexAmplitude) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|e| e * factor).collect(),
        }
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "matrix dimensions differ");
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `‖M†M − I‖_max`.
    pub fn unitarity_defect(&self) -> f64 {
        (&self.adjoint() * self).max_abs_diff(&Self::identity(self.dim))
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_defect() <= tol
    }

    /// Matrix-vector product on a single `D`-dimensional vector.
    pub fn apply_vec(&self, v: &[ComplexAmplitude]) -> Vec<ComplexAmplitude> {
        assert_eq!(v.len(), self.dim, "vector length differs from matrix dimension");
        (0..self.dim)
            .map(|r| (0..self.dim).map(|c| self.get(r, c) * v[c]).sum())
            .collect()
    }
}

impl Mul for &LocalMatrix {
    type Output = LocalMatrix;

    fn mul(self, rhs: &LocalMatrix) -> LocalMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix dimensions differ");
        LocalMatrix::from_fn(self.dim, |r, c| {
            (0..self.dim).map(|k| self.get(r, k) * rhs.get(k, c)).sum()
        })
    }
}

/// Linear phase function `f(n) = coefficient · n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PhaseFunction {
    #[serde(with = "crate::rational::serde_str")]
    pub coefficient: Rational,
}

impl PhaseFunction {
    pub fn linear(coefficient: Rational) -> Self {
        Self { coefficient }
    }

    pub fn zero() -> Self {
        Self::linear(Rational::from_integer(0))
    }

    pub fn eval(&self, n: i64) -> Rational {
        self.coefficient * Rational::from_integer(n)
    }
}

/// Fourier matrix with entries `ω^{mn}/√D`.
pub fn fourier_matrix(d: usize) -> LocalMatrix {
    let scale = 1.0 / (d as f64).sqrt();
    LocalMatrix::from_fn(d, |m, n| omega_int(d, (m * n) as i64) * scale)
}

/// Diagonal phase shifter `Σ_n ω^{f(n)} |n⟩⟨n|`.
pub fn phase_shifter(d: usize, f: &PhaseFunction) -> LocalMatrix {
    let values: Vec<_> = (0..d as i64).map(|n| omega_power(d, &f.eval(n))).collect();
    LocalMatrix::diagonal(&values)
}

/// Apply `M` at `site` (1-based) and the identity elsewhere.
pub fn apply_local(m: &LocalMatrix, site: usize, s: &StateVector) -> Result<StateVector> {
    let dims = s.dims();
    if m.dim() != dims.dim {
        return invalid(format!(
            "matrix dimension {} does not match local dimension {}",
            m.dim(),
            dims.dim
        ));
    }
    if site == 0 || site > dims.parties {
        return invalid(format!("site {site} outside 1..={}", dims.parties));
    }
    let d = dims.dim;
    let stride = dims.stride(site);
    let block = stride * d;
    let src = s.amplitudes();
    let mut out = vec![Complex64::new(0.0, 0.0); src.len()];
    for base in (0..src.len()).step_by(block) {
        for offset in 0..stride {
            let start = base + offset;
            for row in 0..d {
                let mut acc = Complex64::new(0.0, 0.0);
                for col in 0..d {
                    acc += m.get(row, col) * src[start + col * stride];
                }
                out[start + row * stride] = acc;
            }
        }
    }
    Ok(StateVector {
        dims,
        amplitudes: out,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    const BOUND: u64 = DEFAULT_AMP_BOUND;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    /// Shift `Σ_n |n⟩⟨n+1|` written out by hand.
    fn shift(d: usize) -> LocalMatrix {
        LocalMatrix::from_fn(d, |r, col| c(if col == (r + 1) % d { 1.0 } else { 0.0 }, 0.0))
    }

    #[test]
    fn omega_power_examples() {
        assert!(close(omega_power(2, &int(1)), c(-1.0, 0.0), 1e-15));
        assert!(close(omega_power(3, &int(3)), c(1.0, 0.0), 1e-15));
        // exp(2πi/9) = cos 40° + i sin 40°
        let z = omega_power(3, &ratio(1, 3));
        assert_abs_diff_eq!(z.re, 0.766_044_443_118_978, epsilon = 1e-15);
        assert_abs_diff_eq!(z.im, 0.642_787_609_686_539_3, epsilon = 1e-15);
    }

    #[test]
    fn omega_power_negative_exponent_is_conjugate() {
        let z = omega_power(5, &ratio(2, 7));
        assert!(close(omega_power(5, &ratio(-2, 7)), z.conj(), 1e-15));
    }

    #[test]
    fn fourier_d2_is_hadamard() {
        let h = 1.0 / 2f64.sqrt();
        let expect = LocalMatrix::from_fn(2, |r, col| {
            c(if r == 1 && col == 1 { -h } else { h }, 0.0)
        });
        assert!(fourier_matrix(2).max_abs_diff(&expect) <= 1e-15);
    }

    #[test]
    fn fourier_d3_unitary() {
        assert!(fourier_matrix(3).is_unitary(UNITARY_TOL));
    }

    #[test]
    fn fourier_d4_column_one() {
        // ω = i, so column 1 is (1, i, -1, -i)/2
        let col = fourier_matrix(4).apply_vec(&[c(0., 0.), c(1., 0.), c(0., 0.), c(0., 0.)]);
        let expect = [c(0.5, 0.), c(0., 0.5), c(-0.5, 0.), c(0., -0.5)];
        for (a, b) in col.iter().zip(expect) {
            assert!(close(*a, b, 1e-15));
        }
    }

    #[test]
    fn phase_shifter_examples() {
        assert!(phase_shifter(3, &PhaseFunction::zero()).max_abs_diff(&LocalMatrix::identity(3)) <= 1e-15);

        let w = omega_int(3, 1);
        let f1 = phase_shifter(3, &PhaseFunction::linear(int(2)));
        let expect = LocalMatrix::diagonal(&[c(1., 0.), w * w, w]);
        assert!(f1.max_abs_diff(&expect) <= 1e-14);

        let f2 = phase_shifter(3, &PhaseFunction::linear(ratio(1, 3)));
        let expect = LocalMatrix::diagonal(&[
            c(1., 0.),
            Complex64::from_polar(1.0, 2.0 * PI / 9.0),
            Complex64::from_polar(1.0, 4.0 * PI / 9.0),
        ]);
        assert!(f2.max_abs_diff(&expect) <= 1e-15);
    }

    #[test]
    fn apply_local_identity_is_noop() {
        let dims = Dims::new(3, 3).unwrap();
        let s = StateVector::new(
            dims,
            (0..27).map(|i| c(i as f64, -(i as f64) / 2.0)).collect(),
        )
        .unwrap();
        for site in 1..=3 {
            assert_eq!(apply_local(&LocalMatrix::identity(3), site, &s).unwrap(), s);
        }
    }

    #[test]
    fn apply_local_shift_on_bell_pair() {
        let dims = Dims::new(2, 2).unwrap();
        let h = 1.0 / 2f64.sqrt();
        // (|00⟩ + |11⟩)/√2
        let bell = StateVector::new(dims, vec![c(h, 0.), c(0., 0.), c(0., 0.), c(h, 0.)]).unwrap();
        let out = apply_local(&shift(2), 1, &bell).unwrap();
        // (|10⟩ + |01⟩)/√2: indices 2 and 1
        let expect = StateVector::new(dims, vec![c(0., 0.), c(h, 0.), c(h, 0.), c(0., 0.)]).unwrap();
        assert!(out.distance(&expect).unwrap() <= 1e-15);
    }

    #[test]
    fn apply_local_rejects_bad_input() {
        let s = StateVector::basis(Dims::new(2, 3).unwrap(), &[0, 1], BOUND).unwrap();
        assert!(matches!(
            apply_local(&LocalMatrix::identity(2), 1, &s),
            Err(GhzError::InvalidArgument(_))
        ));
        assert!(apply_local(&LocalMatrix::identity(3), 0, &s).is_err());
        assert!(apply_local(&LocalMatrix::identity(3), 3, &s).is_err());
    }

    #[test]
    fn apply_local_hits_the_right_digit() {
        // party 1 most significant: shifting site 3 of |0,0,1⟩ gives |0,0,0⟩
        let dims = Dims::new(3, 4).unwrap();
        let s = StateVector::basis(dims, &[2, 0, 1], BOUND).unwrap();
        let out = apply_local(&shift(4), 3, &s).unwrap();
        assert_eq!(out.amplitude(&[2, 0, 0]), c(1., 0.));
        let out = apply_local(&shift(4), 1, &s).unwrap();
        assert_eq!(out.amplitude(&[1, 0, 1]), c(1., 0.));
    }

    #[test]
    fn inner_product_examples() {
        let dims = Dims::new(2, 3).unwrap();
        let a = StateVector::basis(dims, &[0, 1], BOUND).unwrap();
        let b = StateVector::basis(dims, &[2, 1], BOUND).unwrap();
        assert_eq!(inner_product(&a, &a).unwrap(), c(1., 0.));
        assert_eq!(inner_product(&a, &b).unwrap(), c(0., 0.));
        let other = StateVector::basis(Dims::new(3, 3).unwrap(), &[0, 0, 0], BOUND).unwrap();
        assert!(inner_product(&a, &other).is_err());
    }

    #[test]
    fn state_bounds_are_enforced() {
        let dims = Dims::new(8, 12).unwrap();
        assert!(matches!(
            StateVector::zeros(dims, BOUND),
            Err(GhzError::ResourceLimit { .. })
        ));
        assert!(StateVector::new(Dims::new(2, 2).unwrap(), vec![c(1., 0.)]).is_err());
    }

    #[test]
    fn digits_round_trip() {
        let dims = Dims::new(4, 3).unwrap();
        for i in 0..81 {
            assert_eq!(dims.index(&dims.digits(i)), i);
        }
        assert_eq!(dims.digits(1), vec![0, 0, 0, 1]);
        assert_eq!(dims.digits(27), vec![1, 0, 0, 0]);
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-40i64..40, 1i64..=12).prop_map(|(p, q)| ratio(p, q))
    }

    fn random_state(dims: Dims, seed: &[f64]) -> StateVector {
        let len = dims.checked_len().unwrap() as usize;
        let amps = (0..len)
            .map(|i| c(seed[i % seed.len()] + i as f64 * 0.01, seed[(i + 1) % seed.len()]))
            .collect();
        StateVector::new(dims, amps).unwrap().normalized()
    }

    fn random_unitary(d: usize, alpha: Rational) -> LocalMatrix {
        // F · P(f) · F† is unitary and dense
        let f = fourier_matrix(d);
        let p = phase_shifter(d, &PhaseFunction::linear(alpha));
        &(&f * &p) * &f.adjoint()
    }

    proptest! {
        #[test]
        fn omega_is_unimodular_and_periodic(d in 2usize..=12, c in small_rational()) {
            let z = omega_power(d, &c);
            prop_assert!((z.norm() - 1.0).abs() <= UNITARY_TOL);
            let shifted = omega_power(d, &(c + int(d as i64)));
            prop_assert!((z - shifted).norm() <= UNITARY_TOL);
        }

        #[test]
        fn fourier_is_unitary(d in 2usize..=12) {
            prop_assert!(fourier_matrix(d).is_unitary(UNITARY_TOL));
        }

        #[test]
        fn distinct_sites_commute(
            d in 2usize..=4,
            n in 2usize..=4,
            a in small_rational(),
            b in small_rational(),
            i in 1usize..=4,
            j in 1usize..=4,
            seed in proptest::collection::vec(-1.0f64..1.0, 4),
        ) {
            prop_assume!(i <= n && j <= n && i != j);
            let dims = Dims::new(n, d).unwrap();
            let s = random_state(dims, &seed);
            let (ma, mb) = (random_unitary(d, a), random_unitary(d, b));
            let ab = apply_local(&mb, j, &apply_local(&ma, i, &s).unwrap()).unwrap();
            let ba = apply_local(&ma, i, &apply_local(&mb, j, &s).unwrap()).unwrap();
            prop_assert!(ab.distance(&ba).unwrap() <= UNITARY_TOL);
        }

        #[test]
        fn same_site_composes(
            d in 2usize..=5,
            n in 1usize..=3,
            a in small_rational(),
            b in small_rational(),
            site in 1usize..=3,
            seed in proptest::collection::vec(-1.0f64..1.0, 3),
        ) {
            prop_assume!(site <= n);
            let dims = Dims::new(n, d).unwrap();
            let s = random_state(dims, &seed);
            let (ma, mb) = (random_unitary(d, a), random_unitary(d, b));
            let nested = apply_local(&ma, site, &apply_local(&mb, site, &s).unwrap()).unwrap();
            let fused = apply_local(&(&ma * &mb), site, &s).unwrap();
            prop_assert!(nested.distance(&fused).unwrap() <= UNITARY_TOL);
        }

        #[test]
        fn unitary_preserves_norm(
            d in 2usize..=6,
            n in 1usize..=4,
            a in small_rational(),
            site in 1usize..=4,
            seed in proptest::collection::vec(-1.0f64..1.0, 5),
        ) {
            prop_assume!(site <= n);
            let dims = Dims::new(n, d).unwrap();
            let s = random_state(dims, &seed).scaled(c(1.7, 0.0));
            let out = apply_local(&random_unitary(d, a), site, &s).unwrap();
            prop_assert!((out.norm() - s.norm()).abs() <= UNITARY_TOL);
        }

        #[test]
        fn inner_product_conjugate_symmetric(
            seed_a in proptest::collection::vec(-1.0f64..1.0, 3),
            seed_b in proptest::collection::vec(-1.0f64..1.0, 4),
        ) {
            let dims = Dims::new(3, 3).unwrap();
            let (a, b) = (random_state(dims, &seed_a), random_state(dims, &seed_b));
            let ab = inner_product(&a, &b).unwrap();
            let ba = inner_product(&b, &a).unwrap();
            prop_assert!((ab - ba.conj()).norm() <= 1e-15);
        }
    }
}
