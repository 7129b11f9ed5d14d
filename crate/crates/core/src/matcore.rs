//! Dense complex matrices of dimension 2 and 4.
//!
//! Everything the simulation touches is either a single-qubit operator (2×2)
//! or a two-qubit operator (4×4), so the kernel is deliberately small: products,
//! adjoints, traces, Kronecker products and a closed-form Hermitian 2×2
//! eigensolver that backs `√ρ` and the von Neumann entropy.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Acceptance tolerance for Hermiticity, unit trace and positivity checks.
pub const HERMITIAN_TOL: f64 = 1e-9;

/// Eigenvalues in `[-EIGEN_CLIP, 0)` are treated as round-off and clipped to zero.
pub const EIGEN_CLIP: f64 = 1e-12;

/// Below this eigenvalue gap the 2×2 solver returns the computational basis.
const DEGENERATE_GAP: f64 = 1e-15;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);
pub(crate) const I: C64 = C64::new(0.0, 1.0);

/// Square complex matrix, row-major, of dimension 2 or 4.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn new(dim: usize, data: Vec<C64>) -> Result<Self> {
        check_dim(dim)?;
        if data.len() != dim * dim {
            return Err(Error::EntryCount {
                expected: dim * dim,
                got: data.len(),
            });
        }
        Ok(Self { dim, data })
    }

    /// 2×2 matrix from rows.
    pub fn from_rows2(rows: [[C64; 2]; 2]) -> Self {
        Self {
            dim: 2,
            data: rows.iter().flatten().copied().collect(),
        }
    }

    /// 4×4 matrix from rows.
    pub fn from_rows4(rows: [[C64; 4]; 4]) -> Self {
        Self {
            dim: 4,
            data: rows.iter().flatten().copied().collect(),
        }
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self {
            dim,
            data: vec![ZERO; dim * dim],
        })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        for k in 0..dim {
            m.data[k * dim + k] = ONE;
        }
        Ok(m)
    }

    pub fn identity2() -> Self {
        Self::from_real_diag(&[1.0, 1.0]).expect("dimension 2")
    }

    pub fn from_real_diag(diag: &[f64]) -> Result<Self> {
        let mut m = Self::zeros(diag.len())?;
        for (k, &d) in diag.iter().enumerate() {
            m.data[k * diag.len() + k] = C64::new(d, 0.0);
        }
        Ok(m)
    }

    /// Outer product `|v⟩⟨w|`.
    pub fn outer(v: &[C64], w: &[C64]) -> Result<Self> {
        if v.len() != w.len() {
            return Err(Error::DimensionMismatch {
                left: v.len(),
                right: w.len(),
            });
        }
        let dim = v.len();
        check_dim(dim)?;
        let data = (0..dim * dim)
            .map(|idx| v[idx / dim] * w[idx % dim].conj())
            .collect();
        Ok(Self { dim, data })
    }

    /// Projector `|v⟩⟨v|`.
    pub fn projector_onto(v: &[C64]) -> Result<Self> {
        Self::outer(v, v)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.data[row * self.dim + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: C64) {
        self.data[row * self.dim + col] = value;
    }

    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.same_dim(other)?;
        let n = self.dim;
        let mut data = vec![ZERO; n * n];
        for r in 0..n {
            for k in 0..n {
                let a = self.data[r * n + k];
                if a == ZERO {
                    continue;
                }
                for c in 0..n {
                    data[r * n + c] += a * other.data[k * n + c];
                }
            }
        }
        Ok(Self { dim: n, data })
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let data = (0..n * n)
            .map(|idx| self.data[(idx % n) * n + idx / n].conj())
            .collect();
        Self { dim: n, data }
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|k| self.get(k, k)).sum()
    }

    /// Kronecker product `self ⊗ other` of two 2×2 matrices, `self` acting on
    /// the first subsystem.
    pub fn kron(&self, other: &Self) -> Result<Self> {
        if self.dim != 2 {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: 2,
            });
        }
        if other.dim != 2 {
            return Err(Error::DimensionMismatch {
                left: other.dim,
                right: 2,
            });
        }
        let mut out = Self {
            dim: 4,
            data: vec![ZERO; 16],
        };
        for (a, b, c, d) in index_quads() {
            out.set(2 * a + c, 2 * b + d, self.get(a, b) * other.get(c, d));
        }
        Ok(out)
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * factor).collect(),
        }
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.scale(C64::new(factor, 0.0))
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_dim(other)?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.same_dim(other)?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.dim != other.dim {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self - self†`.
    pub fn hermitian_deviation(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation() <= tol
    }

    /// Positive semidefiniteness up to `tol`: Cholesky factorisation of
    /// `self + tol·𝟙` must succeed. Assumes a Hermitian input.
    pub fn is_positive_semidefinite(&self, tol: f64) -> bool {
        let n = self.dim;
        let mut l = vec![ZERO; n * n];
        for j in 0..n {
            let mut pivot = self.get(j, j).re + tol;
            for k in 0..j {
                pivot -= l[j * n + k].norm_sqr();
            }
            if pivot <= 0.0 || !pivot.is_finite() {
                return false;
            }
            let root = pivot.sqrt();
            l[j * n + j] = C64::new(root, 0.0);
            for i in (j + 1)..n {
                let mut s = self.get(i, j);
                for k in 0..j {
                    s -= l[i * n + k] * l[j * n + k].conj();
                }
                l[i * n + j] = s / root;
            }
        }
        true
    }

    fn same_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(())
    }

    fn zip_with(&self, other: &Self, f: impl Fn(C64, C64) -> C64) -> Self {
        Self {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }
}

fn index_quads() -> impl Iterator<Item = (usize, usize, usize, usize)> {
    (0..16).map(|k| (k >> 3 & 1, k >> 2 & 1, k >> 1 & 1, k & 1))
}

fn check_dim(dim: usize) -> Result<()> {
    match dim {
        2 | 4 => Ok(()),
        other => Err(Error::UnsupportedDimension(other)),
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{}) [", self.dim, self.dim)?;
        for r in 0..self.dim {
            write!(f, "  ")?;
            for c in 0..self.dim {
                let z = self.get(r, c);
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

// Operator forms panic on mismatched dimensions; use the `checked_*` and
// `multiply` methods when the dimensions are not known statically.

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: Self) -> ComplexMatrix {
        self.multiply(rhs).expect("matrix product dimension mismatch")
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: Self) -> ComplexMatrix {
        self.checked_add(rhs).expect("matrix sum dimension mismatch")
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: Self) -> ComplexMatrix {
        self.checked_sub(rhs).expect("matrix difference dimension mismatch")
    }
}

/// Eigen-decomposition of a Hermitian 2×2 matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum2 {
    /// Descending.
    pub eigenvalues: [f64; 2],
    /// `eigenvectors[k]` belongs to `eigenvalues[k]`.
    pub eigenvectors: [[C64; 2]; 2],
}

impl Spectrum2 {
    /// `Σ f(λₖ) |vₖ⟩⟨vₖ|`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(2).expect("dimension 2");
        for (&lambda, v) in self.eigenvalues.iter().zip(&self.eigenvectors) {
            let weight = f(lambda);
            for r in 0..2 {
                for c in 0..2 {
                    let z = out.get(r, c) + v[r] * v[c].conj() * weight;
                    out.set(r, c, z);
                }
            }
        }
        out
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.reconstruct_with(|x| x)
    }
}

/// Closed-form eigen-decomposition of a Hermitian 2×2 matrix.
pub fn eig_hermitian_2(h: &ComplexMatrix) -> Result<Spectrum2> {
    if h.dim() != 2 {
        return Err(Error::DimensionMismatch {
            left: h.dim(),
            right: 2,
        });
    }
    let deviation = h.hermitian_deviation();
    if deviation > HERMITIAN_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    let a = h.get(0, 0).re;
    let d = h.get(1, 1).re;
    // average the off-diagonal pair so tiny anti-Hermitian noise is discarded
    let b = (h.get(0, 1) + h.get(1, 0).conj()) * 0.5;

    let mean = 0.5 * (a + d);
    let half_diff = 0.5 * (a - d);
    let gap = half_diff.hypot(b.norm());
    let eigenvalues = [mean + gap, mean - gap];

    if gap < DEGENERATE_GAP {
        return Ok(Spectrum2 {
            eigenvalues,
            eigenvectors: [[ONE, ZERO], [ZERO, ONE]],
        });
    }

    // Two algebraically equivalent eigenvector forms; pick the one without
    // cancellation in its large component.
    let v = if half_diff >= 0.0 {
        [C64::new(half_diff + gap, 0.0), b.conj()]
    } else {
        [b, C64::new(gap - half_diff, 0.0)]
    };
    let norm = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    let v1 = [v[0] / norm, v[1] / norm];
    let v2 = [-v1[1].conj(), v1[0].conj()];
    Ok(Spectrum2 {
        eigenvalues,
        eigenvectors: [v1, v2],
    })
}

fn clipped_spectrum(m: &ComplexMatrix) -> Result<Spectrum2> {
    let mut spectrum = eig_hermitian_2(m)?;
    for lambda in spectrum.eigenvalues.iter_mut() {
        if *lambda < -EIGEN_CLIP {
            return Err(Error::NotPositive {
                eigenvalue: *lambda,
            });
        }
        *lambda = lambda.max(0.0);
    }
    Ok(spectrum)
}

/// Principal square root of a positive semidefinite 2×2 matrix.
///
/// Eigenvalues below `EIGEN_CLIP` are treated as zero so that round-off in a
/// rank-one input is not amplified by the square root.
pub fn sqrt_psd_2(rho: &ComplexMatrix) -> Result<ComplexMatrix> {
    Ok(clipped_spectrum(rho)?.reconstruct_with(|l| if l <= EIGEN_CLIP { 0.0 } else { l.sqrt() }))
}

/// `-x log₂ x` with the `0·log 0 = 0` convention.
pub fn entropy_term(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        -x * x.log2()
    }
}

/// Binary Shannon entropy in bits.
pub fn binary_entropy(p: f64) -> f64 {
    entropy_term(p) + entropy_term(1.0 - p)
}

/// Von Neumann entropy `-Tr ρ log₂ ρ` of a single-qubit state, in bits.
pub fn von_neumann_entropy(rho: &ComplexMatrix) -> Result<f64> {
    let spectrum = clipped_spectrum(rho)?;
    let trace: f64 = spectrum.eigenvalues.iter().sum();
    if (trace - 1.0).abs() > HERMITIAN_TOL {
        return Err(Error::BadTrace { trace });
    }
    Ok(spectrum.eigenvalues.iter().map(|&l| entropy_term(l)).sum())
}
