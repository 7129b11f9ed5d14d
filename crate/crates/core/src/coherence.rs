//! Basis-dependent coherence of a qubit in the three Pauli eigenbases and the
//! complementarity sums over those bases.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matcore::{self, ComplexMatrix, C64};
use crate::quantum::{pauli, DensityMatrix, PauliAxis};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoherenceMeasure {
    L1,
    RelativeEntropy,
    SkewInformation,
}

impl CoherenceMeasure {
    pub const ALL: [CoherenceMeasure; 3] = [
        CoherenceMeasure::L1,
        CoherenceMeasure::RelativeEntropy,
        CoherenceMeasure::SkewInformation,
    ];

    /// Upper bound of the three-basis complementarity sum, which is also the
    /// NAQC threshold for this measure.
    pub fn bound(self) -> f64 {
        match self {
            CoherenceMeasure::L1 => 6f64.sqrt(),
            CoherenceMeasure::RelativeEntropy => 2.23,
            CoherenceMeasure::SkewInformation => 2.0,
        }
    }

    /// Short name used on the command line.
    pub fn key(self) -> &'static str {
        match self {
            CoherenceMeasure::L1 => "l1",
            CoherenceMeasure::RelativeEntropy => "relent",
            CoherenceMeasure::SkewInformation => "skew",
        }
    }
}

impl fmt::Display for CoherenceMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl FromStr for CoherenceMeasure {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "l1" => Ok(CoherenceMeasure::L1),
            "relent" | "relative-entropy" | "e" => Ok(CoherenceMeasure::RelativeEntropy),
            "skew" | "skew-information" | "s" => Ok(CoherenceMeasure::SkewInformation),
            other => Err(Error::InvalidConfig(format!(
                "unknown measure {other:?} (expected l1, relent or skew)"
            ))),
        }
    }
}

impl Serialize for CoherenceMeasure {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.key())
    }
}

/// Unitary whose columns are the `+`/`-` eigenvectors of `σ_basis`.
fn basis_unitary(basis: PauliAxis) -> ComplexMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let (re, im) = (C64::new(h, 0.0), C64::new(0.0, h));
    match basis {
        PauliAxis::Z => ComplexMatrix::identity2(),
        PauliAxis::X => ComplexMatrix::from_rows2([[re, re], [re, -re]]),
        PauliAxis::Y => ComplexMatrix::from_rows2([[re, re], [im, -im]]),
    }
}

/// `U† ρ U`: the state expressed in the eigenbasis of `σ_basis`.
pub fn in_basis(rho: &ComplexMatrix, basis: PauliAxis) -> ComplexMatrix {
    let u = basis_unitary(basis);
    &(&u.adjoint() * rho) * &u
}

/// Coherence of a qubit state in the eigenbasis of `σ_basis`.
pub fn coherence(rho: &DensityMatrix, measure: CoherenceMeasure, basis: PauliAxis) -> Result<f64> {
    if rho.dim() != 2 {
        return Err(Error::DimensionMismatch {
            left: rho.dim(),
            right: 2,
        });
    }
    let value = match measure {
        CoherenceMeasure::L1 => {
            let rotated = in_basis(rho.matrix(), basis);
            rotated.get(0, 1).norm() + rotated.get(1, 0).norm()
        }
        CoherenceMeasure::RelativeEntropy => {
            let rotated = in_basis(rho.matrix(), basis);
            let dephased = matcore::binary_entropy(rotated.get(0, 0).re.clamp(0.0, 1.0));
            dephased - matcore::von_neumann_entropy(&rotated)?
        }
        CoherenceMeasure::SkewInformation => {
            let root = matcore::sqrt_psd_2(rho.matrix())?;
            let sigma = pauli(basis);
            let m = &root * &sigma;
            1.0 - (&m * &m).trace().re
        }
    };
    Ok(value.max(0.0))
}

/// `Σ_{i ∈ {x,y,z}} C_i(ρ)`.
pub fn complementarity_sum(rho: &DensityMatrix, measure: CoherenceMeasure) -> Result<f64> {
    PauliAxis::ALL
        .iter()
        .map(|&axis| coherence(rho, measure, axis))
        .sum()
}

/// Largest relative-entropy complementarity sum over qubit states, found by a
/// pattern search over pure-state directions (mixing only lowers the sum).
///
/// Returns the maximum and the maximising Bloch direction.
pub fn relative_entropy_bound_refined() -> Result<(f64, [f64; 3])> {
    let objective = |theta: f64, phi: f64| -> Result<f64> {
        let dir = [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()];
        complementarity_sum(&DensityMatrix::from_bloch(dir)?, CoherenceMeasure::RelativeEntropy)
    };

    let half_pi = std::f64::consts::FRAC_PI_2;
    let coarse = 24;
    let mut best = (f64::NEG_INFINITY, 0.0, 0.0);
    for a in 0..=coarse {
        for b in 0..=coarse {
            let theta = half_pi * a as f64 / coarse as f64;
            let phi = half_pi * b as f64 / coarse as f64;
            let v = objective(theta, phi)?;
            if v > best.0 {
                best = (v, theta, phi);
            }
        }
    }

    let mut step = half_pi / coarse as f64;
    while step > 1e-10 {
        let mut improved = false;
        for (dt, dp) in [(step, 0.0), (-step, 0.0), (0.0, step), (0.0, -step)] {
            let v = objective(best.1 + dt, best.2 + dp)?;
            if v > best.0 {
                best = (v, best.1 + dt, best.2 + dp);
                improved = true;
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    let (value, theta, phi) = best;
    Ok((
        value,
        [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()],
    ))
}
