//! The single-qudit observable family `X(α)`.
//!
//! `X(α) = ω^{-α} (Σ_{n<D-1} |n⟩⟨n+1| + ω^{αD} |D-1⟩⟨0|)` is the cyclic shift
//! conjugated by the phase shifter `Σ_n ω^{αn}|n⟩⟨n|`. Its eigenvector for
//! eigenvalue `ω^n` is `|n⟩_α = D^{-1/2} Σ_m ω^{(n+α)m} |m⟩`.
//!
//! Two members `X(α)`, `X(β)` are equivalent (same eigenbasis up to
//! relabelling and a global phase) exactly when `β − α` is an integer.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{
    inner_product, omega_power, ComplexAmplitude, Dims, LocalMatrix, StateVector, EIGEN_TOL,
};
use crate::error::{invalid, GhzError, Result};
use crate::rational::{self, Rational};

/// `X(α)` on a `D`-dimensional site.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LocalObservable {
    pub dim: usize,
    #[serde(with = "crate::rational::serde_str")]
    pub alpha: Rational,
}

impl LocalObservable {
    pub fn new(dim: usize, alpha: Rational) -> Result<Self> {
        if dim < 2 {
            return invalid(format!("local dimension must be >= 2, got {dim}"));
        }
        Ok(Self { dim, alpha })
    }

    pub fn matrix(&self) -> LocalMatrix {
        x_of_alpha(self.dim, &self.alpha)
    }

    pub fn eigenvector(&self, n: usize) -> StateVector {
        eigenvector(self.dim, &self.alpha, n)
    }

    /// Reduce `α` into `[0, 1)`, returning the integer `k` such that
    /// `X(α) = ω^{-k} X(α − k)`.
    pub fn normalized(&self) -> (i64, LocalObservable) {
        let (whole, frac) = rational::split_mod_one(&self.alpha);
        (
            whole,
            LocalObservable {
                dim: self.dim,
                alpha: frac,
            },
        )
    }

    pub fn is_equivalent_to(&self, other: &LocalObservable) -> bool {
        self.dim == other.dim && equivalent(&self.alpha, &other.alpha)
    }
}

/// Matrix of `X(α)` in the computational basis.
pub fn x_of_alpha(d: usize, alpha: &Rational) -> LocalMatrix {
    let dd = Rational::from_integer(d as i64);
    let upper = omega_power(d, &-alpha);
    let corner = omega_power(d, &(alpha * dd - alpha));
    let zero = Complex64::new(0.0, 0.0);
    LocalMatrix::from_fn(d, |row, col| {
        if row + 1 == col {
            upper
        } else if row == d - 1 && col == 0 {
            corner
        } else {
            zero
        }
    })
}

/// Eigenvector `|n⟩_α` of `X(α)` with eigenvalue `ω^n`, as a one-party state.
pub fn eigenvector(d: usize, alpha: &Rational, n: usize) -> StateVector {
    let amps = eigenvector_amplitudes(d, alpha, n);
    StateVector::new(Dims { parties: 1, dim: d }, amps).expect("length D by construction")
}

pub(crate) fn eigenvector_amplitudes(d: usize, alpha: &Rational, n: usize) -> Vec<ComplexAmplitude> {
    let scale = 1.0 / (d as f64).sqrt();
    let shifted = Rational::from_integer(n as i64) + alpha;
    (0..d as i64)
        .map(|m| omega_power(d, &(shifted * Rational::from_integer(m))) * scale)
        .collect()
}

/// `true` iff `β − α` is an integer.
pub fn equivalent(alpha: &Rational, beta: &Rational) -> bool {
    (beta - alpha).is_integer()
}

/// `ξ = m − n + β − α`, the exact argument of the overlap formula.
pub fn overlap_argument(n: usize, alpha: &Rational, m: usize, beta: &Rational) -> Rational {
    Rational::from_integer(m as i64 - n as i64) + beta - alpha
}

/// `|⟨n_α|m_β⟩|²` from the closed form `sin²(πξ) / (D² sin²(πξ/D))`.
///
/// Integer `ξ` is decided exactly: `1` if `ξ ≡ 0 (mod D)`, else `0`.
pub fn overlap_closed_form(d: usize, n: usize, alpha: &Rational, m: usize, beta: &Rational) -> f64 {
    let xi = overlap_argument(n, alpha, m, beta);
    let modulus = Rational::from_integer(d as i64);
    if xi.is_integer() {
        return if rational::is_zero_mod(&xi, d as i64) { 1.0 } else { 0.0 };
    }
    // both sines squared are D-periodic in ξ; reduce before going to floats
    let reduced = xi - (xi / modulus).floor() * modulus;
    let x = *reduced.numer() as f64 / *reduced.denom() as f64;
    let top = (PI * x).sin().powi(2);
    let bottom = (d * d) as f64 * (PI * x / d as f64).sin().powi(2);
    top / bottom
}

/// `|⟨n_α|m_β⟩|²` from the explicit eigenvectors.
pub fn overlap_direct(d: usize, n: usize, alpha: &Rational, m: usize, beta: &Rational) -> f64 {
    let a = eigenvector(d, alpha, n);
    let b = eigenvector(d, beta, m);
    inner_product(&a, &b).expect("same dims").norm_sqr()
}

/// `|⟨n_α|m_β⟩|²`, cross-checked between the closed form and the direct
/// inner product.
pub fn overlap_sq(d: usize, n: usize, alpha: &Rational, m: usize, beta: &Rational) -> Result<f64> {
    if d < 2 || n >= d || m >= d {
        return invalid(format!("overlap indices ({n}, {m}) out of range for D = {d}"));
    }
    let closed = overlap_closed_form(d, n, alpha, m, beta);
    let direct = overlap_direct(d, n, alpha, m, beta);
    if (closed - direct).abs() > EIGEN_TOL {
        return Err(GhzError::ConsistencyFailure(format!(
            "overlap D={d} n={n} α={alpha} m={m} β={beta}: closed form {closed} vs direct {direct}"
        )));
    }
    Ok(closed)
}
