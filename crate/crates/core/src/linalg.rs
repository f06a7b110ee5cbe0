//! Dense complex 2×2 / 4×4 kernel.
//!
//! Matrices are `nalgebra` static matrices over [`C64`]. Two-qubit operators
//! use the ordered product basis `{|00⟩, |01⟩, |10⟩, |11⟩}`, qubit A being the
//! left tensor factor.

use nalgebra::{DMatrix, Matrix2, Matrix4, SMatrix, Schur};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type ComplexMat4 = Matrix4<C64>;
pub type ComplexMat2 = Matrix2<C64>;

/// Largest tolerated `|m - m†|` entry for a matrix to count as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-9;
/// Eigenvalues in `[-SPECTRUM_CLAMP, 0)` are round-off and snap to zero.
pub const SPECTRUM_CLAMP: f64 = 1e-10;
/// Eigenvalues below `-POSITIVITY_TOL` are a genuine positivity violation.
pub const POSITIVITY_TOL: f64 = 1e-8;
/// Largest imaginary part accepted for an eigenvalue reported as real.
pub const IMAG_TOL: f64 = 1e-8;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Which half of the two-qubit system to keep in a partial trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

pub fn pauli_x() -> ComplexMat2 {
    Matrix2::new(ZERO, ONE, ONE, ZERO)
}

pub fn pauli_y() -> ComplexMat2 {
    Matrix2::new(ZERO, -I, I, ZERO)
}

pub fn pauli_z() -> ComplexMat2 {
    Matrix2::new(ONE, ZERO, ZERO, -ONE)
}

pub fn identity2() -> ComplexMat2 {
    Matrix2::identity()
}

/// `a ⊗ b` with `a` acting on qubit A.
pub fn kron(a: &ComplexMat2, b: &ComplexMat2) -> ComplexMat4 {
    ComplexMat4::from_fn(|r, c| a[(r / 2, c / 2)] * b[(r % 2, c % 2)])
}

pub fn commutator(a: &ComplexMat4, b: &ComplexMat4) -> ComplexMat4 {
    a * b - b * a
}

/// `max |m - m†|` over all entries.
pub fn hermitian_deviation<const N: usize>(m: &SMatrix<C64, N, N>) -> f64 {
    let mut worst = 0.0_f64;
    for r in 0..N {
        for c in r..N {
            worst = worst.max((m[(r, c)] - m[(c, r)].conj()).norm());
        }
    }
    worst
}

/// `(m + m†) / 2`.
pub fn hermitize<const N: usize>(m: &SMatrix<C64, N, N>) -> SMatrix<C64, N, N> {
    (m + m.adjoint()) * C64::new(0.5, 0.0)
}

pub fn max_abs<const N: usize>(m: &SMatrix<C64, N, N>) -> f64 {
    m.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()))
}

/// Real eigenvalues of a Hermitian matrix, in descending order.
pub fn hermitian_eigenvalues<const N: usize>(m: &SMatrix<C64, N, N>) -> Result<Vec<f64>> {
    let deviation = hermitian_deviation(m);
    if deviation > HERMITIAN_TOL || !deviation.is_finite() {
        return Err(Error::NotHermitian { deviation });
    }
    let h = hermitize(m);
    let mut values: Vec<f64> = if N == 2 {
        // closed form keeps the 2×2 reduced states exact
        let a = h[(0, 0)].re;
        let d = h[(1, 1)].re;
        let b = h[(0, 1)].norm();
        let mean = 0.5 * (a + d);
        let radius = (0.25 * (a - d) * (a - d) + b * b).sqrt();
        vec![mean + radius, mean - radius]
    } else {
        let dynamic = DMatrix::from_fn(N, N, |r, c| h[(r, c)]);
        dynamic.symmetric_eigenvalues().iter().copied().collect()
    };
    values.sort_by(|x, y| y.total_cmp(x));
    Ok(values)
}

/// Spectrum of a (generally non-Hermitian) product of two PSD Hermitian
/// matrices, which is real and non-negative in exact arithmetic.
///
/// Eigenvalues with `|imag| <= 1e-8` are returned as reals, negatives in
/// `[-1e-10, 0)` are clamped to zero, and the result is sorted descending.
pub fn general_real_spectrum(m: &ComplexMat4) -> Result<[f64; 4]> {
    let schur = Schur::try_new(*m, f64::EPSILON, 10_000).ok_or(Error::NoConvergence)?;
    let (_, t) = schur.unpack();
    let mut eig = [ZERO; 4];
    let mut k = 0;
    while k < 4 {
        // complex Schur form should be triangular; solve any leftover 2×2 block
        if k + 1 < 4 && t[(k + 1, k)].norm() > 0.0 {
            let (a, b, c, d) = (t[(k, k)], t[(k, k + 1)], t[(k + 1, k)], t[(k + 1, k + 1)]);
            let half_tr = (a + d) * 0.5;
            let disc = ((a - d) * (a - d) * 0.25 + b * c).sqrt();
            eig[k] = half_tr + disc;
            eig[k + 1] = half_tr - disc;
            k += 2;
        } else {
            eig[k] = t[(k, k)];
            k += 1;
        }
    }
    let mut out = [0.0; 4];
    for (slot, z) in out.iter_mut().zip(eig) {
        if z.im.abs() > IMAG_TOL || !z.re.is_finite() {
            return Err(Error::SpectrumNotReal { re: z.re, im: z.im });
        }
        *slot = if (-SPECTRUM_CLAMP..0.0).contains(&z.re) {
            0.0
        } else {
            z.re
        };
    }
    out.sort_by(|x, y| y.total_cmp(x));
    Ok(out)
}

/// Reduced state of one qubit.
pub fn partial_trace(rho: &ComplexMat4, keep: Subsystem) -> ComplexMat2 {
    ComplexMat2::from_fn(|r, c| match keep {
        // index = 2·a + b
        Subsystem::A => rho[(2 * r, 2 * c)] + rho[(2 * r + 1, 2 * c + 1)],
        Subsystem::B => rho[(r, c)] + rho[(2 + r, 2 + c)],
    })
}

fn entropy_of_spectrum(values: &[f64]) -> Result<f64> {
    let mut s = 0.0;
    for &lambda in values {
        if lambda < -POSITIVITY_TOL {
            return Err(Error::NotPositive { eigenvalue: lambda });
        }
        if lambda > 0.0 {
            s -= lambda * lambda.log2();
        }
    }
    Ok(s.max(0.0))
}

/// `S(ρ) = -Tr ρ log₂ ρ`, in bits.
pub fn von_neumann_entropy<const N: usize>(rho: &SMatrix<C64, N, N>) -> Result<f64> {
    entropy_of_spectrum(&hermitian_eigenvalues(rho)?)
}

/// `-x log₂ x` with the `0 log 0 = 0` convention.
pub(crate) fn xlog2x(x: f64) -> f64 {
    if x > 0.0 {
        -x * x.log2()
    } else {
        0.0
    }
}

/// Entropy of the two-outcome distribution `((1-θ)/2, (1+θ)/2)`, in bits.
pub fn binary_entropy_h(theta: f64) -> Result<f64> {
    if !(0.0..=1.0 + 1e-12).contains(&theta) {
        return Err(Error::OutOfRange {
            name: "theta",
            value: theta,
            range: "[0, 1]",
        });
    }
    let theta = theta.min(1.0);
    Ok(xlog2x(0.5 * (1.0 - theta)) + xlog2x(0.5 * (1.0 + theta)))
}
