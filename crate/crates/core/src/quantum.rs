//! Qubit and two-qubit states, Pauli projectors, unsharp dichotomic effects,
//! the non-selective Lüders channel, and Bob's conditional states.
//!
//! Two-qubit operators use the ordering `A ⊗ B`: the measured qubit (Alice's)
//! is the first tensor factor and Bob's qubit the second.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::{ComplexMatrix, C64, EIGEN_CLIP, HERMITIAN_TOL, I, ONE, ZERO};

/// Branches whose weight falls below this are treated as degenerate.
pub const DEGENERATE_PROB: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PauliAxis {
    X,
    Y,
    Z,
}

impl PauliAxis {
    pub const ALL: [PauliAxis; 3] = [PauliAxis::X, PauliAxis::Y, PauliAxis::Z];

    pub fn index(self) -> usize {
        match self {
            PauliAxis::X => 0,
            PauliAxis::Y => 1,
            PauliAxis::Z => 2,
        }
    }
}

impl fmt::Display for PauliAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PauliAxis::X => "x",
            PauliAxis::Y => "y",
            PauliAxis::Z => "z",
        };
        f.write_str(s)
    }
}

/// Outcome of a dichotomic measurement. `Plus` is `a = 0`, `Minus` is `a = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    Plus,
    Minus,
}

impl Outcome {
    pub const BOTH: [Outcome; 2] = [Outcome::Plus, Outcome::Minus];

    pub fn sign(self) -> f64 {
        match self {
            Outcome::Plus => 1.0,
            Outcome::Minus => -1.0,
        }
    }
}

/// Sharpness `λ ∈ (0, 1]` of an unsharp measurement.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct Sharpness(f64);

impl Sharpness {
    pub const SHARP: Sharpness = Sharpness(1.0);

    pub fn new(lambda: f64) -> Result<Self> {
        if lambda > 0.0 && lambda <= 1.0 {
            Ok(Self(lambda))
        } else {
            Err(Error::InvalidSharpness(lambda))
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// Quality factor `F = √(1-λ²)`: how much of the state survives.
    pub fn quality(self) -> f64 {
        ((1.0 - self.0) * (1.0 + self.0)).sqrt()
    }

    /// Precision `G = λ`: information gained.
    pub fn precision(self) -> f64 {
        self.0
    }

    pub fn is_sharp(self) -> bool {
        self.0 == 1.0
    }
}

impl FromStr for Sharpness {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let value: f64 = s
            .trim()
            .parse()
            .map_err(|_| Error::InvalidConfig(format!("cannot parse sharpness {s:?}")))?;
        Sharpness::new(value)
    }
}

/// Weak-measurement equivalents `(F, G)` of a sharpness; `F² + G² = 1`.
pub fn weak_equivalents(s: Sharpness) -> (f64, f64) {
    (s.quality(), s.precision())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Unit-trace, Hermitian, positive semidefinite matrix on one or two qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let deviation = matrix.hermitian_deviation();
        if deviation > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > HERMITIAN_TOL || trace.im.abs() > HERMITIAN_TOL {
            return Err(Error::BadTrace { trace: trace.re });
        }
        if !matrix.is_positive_semidefinite(EIGEN_CLIP) {
            return Err(Error::NotPositive {
                eigenvalue: min_eigenvalue_estimate(&matrix),
            });
        }
        Ok(Self { matrix })
    }

    /// Output of a map known to preserve the state invariants.
    pub(crate) fn trusted(matrix: ComplexMatrix) -> Self {
        debug_assert!(matrix.is_hermitian(1e-8));
        Self { matrix }
    }

    /// Pure state `|ψ⟩⟨ψ|`; the ket is normalised here.
    pub fn pure(ket: &[C64]) -> Result<Self> {
        let norm = ket.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::BadTrace { trace: 0.0 });
        }
        let ket: Vec<C64> = ket.iter().map(|z| z / norm).collect();
        Ok(Self::trusted(ComplexMatrix::projector_onto(&ket)?))
    }

    /// Qubit state `(𝟙 + r·σ)/2`.
    pub fn from_bloch(r: [f64; 3]) -> Result<Self> {
        let [x, y, z] = r;
        let norm = (x * x + y * y + z * z).sqrt();
        if norm > 1.0 + HERMITIAN_TOL {
            return Err(Error::NotPositive {
                eigenvalue: 0.5 * (1.0 - norm),
            });
        }
        Ok(Self::trusted(ComplexMatrix::from_rows2([
            [C64::new(0.5 * (1.0 + z), 0.0), C64::new(0.5 * x, -0.5 * y)],
            [C64::new(0.5 * x, 0.5 * y), C64::new(0.5 * (1.0 - z), 0.0)],
        ])))
    }

    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        Ok(Self::trusted(
            ComplexMatrix::identity(dim)?.scale_real(1.0 / dim as f64),
        ))
    }

    /// `ρ_A ⊗ ρ_B`.
    pub fn product(a: &DensityMatrix, b: &DensityMatrix) -> Result<Self> {
        Ok(Self::trusted(a.matrix.kron(&b.matrix)?))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Bloch vector of a qubit state.
    pub fn bloch(&self) -> Result<[f64; 3]> {
        if self.dim() != 2 {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: 2,
            });
        }
        let off = self.matrix.get(0, 1);
        let z = self.matrix.get(0, 0).re - self.matrix.get(1, 1).re;
        Ok([2.0 * off.re, -2.0 * off.im, z])
    }

    /// Convex combination `Σ wₖ ρₖ` with non-negative weights summing to one.
    pub fn mixture(parts: &[(f64, DensityMatrix)]) -> Result<Self> {
        let first = parts
            .first()
            .ok_or_else(|| Error::InvalidConfig("empty mixture".into()))?;
        let mut acc = ComplexMatrix::zeros(first.1.dim())?;
        for (w, rho) in parts {
            if *w < 0.0 {
                return Err(Error::InvalidConfig(format!("negative weight {w}")));
            }
            acc = acc.checked_add(&rho.matrix.scale_real(*w))?;
        }
        DensityMatrix::new(acc)
    }
}

fn min_eigenvalue_estimate(m: &ComplexMatrix) -> f64 {
    (0..m.dim())
        .map(|k| m.get(k, k).re)
        .fold(f64::INFINITY, f64::min)
}

/// One-parameter dichotomic effect `E = λP^± + (1-λ)/2·𝟙` on a qubit.
#[derive(Debug, Clone, PartialEq)]
pub struct Effect {
    pub axis: PauliAxis,
    pub outcome: Outcome,
    pub sharpness: Sharpness,
    matrix: ComplexMatrix,
}

impl Effect {
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }
}

pub fn pauli(axis: PauliAxis) -> ComplexMatrix {
    match axis {
        PauliAxis::X => ComplexMatrix::from_rows2([[ZERO, ONE], [ONE, ZERO]]),
        PauliAxis::Y => ComplexMatrix::from_rows2([[ZERO, -I], [I, ZERO]]),
        PauliAxis::Z => ComplexMatrix::from_rows2([[ONE, ZERO], [ZERO, -ONE]]),
    }
}

/// `(𝟙 ± σ_axis)/2`.
pub fn projector(axis: PauliAxis, outcome: Outcome) -> ComplexMatrix {
    let s = pauli(axis).scale_real(outcome.sign());
    (&ComplexMatrix::identity2() + &s).scale_real(0.5)
}

pub fn effect(axis: PauliAxis, outcome: Outcome, sharpness: Sharpness) -> Effect {
    let lambda = sharpness.value();
    let plus = &projector(axis, Outcome::Plus).scale_real(lambda)
        + &ComplexMatrix::identity2().scale_real(0.5 * (1.0 - lambda));
    // E₋ = 𝟙 - E₊ entrywise, so that E₊ + E₋ == 𝟙 holds bit for bit.
    let matrix = match outcome {
        Outcome::Plus => plus,
        Outcome::Minus => &ComplexMatrix::identity2() - &plus,
    };
    Effect {
        axis,
        outcome,
        sharpness,
        matrix,
    }
}

/// `|ψ⁻⟩⟨ψ⁻|` with `|ψ⁻⟩ = (|01⟩ - |10⟩)/√2`.
pub fn singlet() -> DensityMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let ket = [ZERO, C64::new(h, 0.0), C64::new(-h, 0.0), ZERO];
    DensityMatrix::trusted(ComplexMatrix::projector_onto(&ket).expect("dimension 4"))
}

/// Computational basis state `|ab⟩⟨ab|`.
pub fn basis_state(a: usize, b: usize) -> DensityMatrix {
    let mut ket = [ZERO; 4];
    ket[2 * (a & 1) + (b & 1)] = ONE;
    DensityMatrix::trusted(ComplexMatrix::projector_onto(&ket).expect("dimension 4"))
}

fn partial_trace_matrix(m: &ComplexMatrix, over: Subsystem) -> Result<ComplexMatrix> {
    if m.dim() != 4 {
        return Err(Error::DimensionMismatch {
            left: m.dim(),
            right: 4,
        });
    }
    let mut out = ComplexMatrix::zeros(2)?;
    for r in 0..2 {
        for c in 0..2 {
            let z = match over {
                Subsystem::A => m.get(r, c) + m.get(2 + r, 2 + c),
                Subsystem::B => m.get(2 * r, 2 * c) + m.get(2 * r + 1, 2 * c + 1),
            };
            out.set(r, c, z);
        }
    }
    Ok(out)
}

/// Reduced state after tracing out `over`.
pub fn partial_trace(state: &DensityMatrix, over: Subsystem) -> Result<DensityMatrix> {
    Ok(DensityMatrix::trusted(partial_trace_matrix(
        state.matrix(),
        over,
    )?))
}

fn lift_to_a(op: &ComplexMatrix) -> ComplexMatrix {
    op.kron(&ComplexMatrix::identity2())
        .expect("single-qubit operator")
}

/// Non-selective Lüders update of Alice's qubit along `axis`:
/// `Fσ + (1-F)Σ± (P±⊗𝟙)σ(P±⊗𝟙)` with `F = √(1-λ²)`.
pub fn luders_nonselective(
    state: &DensityMatrix,
    axis: PauliAxis,
    sharpness: Sharpness,
) -> Result<DensityMatrix> {
    if state.dim() != 4 {
        return Err(Error::DimensionMismatch {
            left: state.dim(),
            right: 4,
        });
    }
    let quality = sharpness.quality();
    let sigma = state.matrix();
    let mut dephased = ComplexMatrix::zeros(4)?;
    for outcome in Outcome::BOTH {
        let p = lift_to_a(&projector(axis, outcome));
        dephased = &dephased + &(&(&p * sigma) * &p);
    }
    let updated = &sigma.scale_real(quality) + &dephased.scale_real(1.0 - quality);
    Ok(DensityMatrix::trusted(updated))
}

/// Bob's side of one measurement branch on Alice's qubit.
#[derive(Debug, Clone, PartialEq)]
pub enum Conditional {
    Resolved {
        probability: f64,
        state: DensityMatrix,
    },
    /// The branch carries (numerically) no weight; no state is defined.
    Degenerate { probability: f64 },
}

impl Conditional {
    pub fn probability(&self) -> f64 {
        match self {
            Conditional::Resolved { probability, .. } | Conditional::Degenerate { probability } => {
                *probability
            }
        }
    }

    pub fn state(&self) -> Option<&DensityMatrix> {
        match self {
            Conditional::Resolved { state, .. } => Some(state),
            Conditional::Degenerate { .. } => None,
        }
    }
}

/// Conditional state of Bob after Alice's outcome `e`.
///
/// The branch is weighted by the Born probability `Tr[(E⊗𝟙)σ]` and Bob's state
/// is `Tr_A[(E⊗𝟙)σ(E⊗𝟙)]` renormalised. For a projective effect this is the
/// usual `Tr_A[(Π⊗𝟙)σ]/p`; for unsharp effects it is the form under which the
/// singlet gives `N^{l1} = 6λ/(1+λ²)`.
pub fn conditional_state(state: &DensityMatrix, e: &Effect) -> Result<Conditional> {
    let lifted = lifted_effect(state, e)?;
    let sigma = state.matrix();
    let probability = (&lifted * sigma).trace().re;
    let sandwiched = &(&lifted * sigma) * &lifted;
    let unnormalised = partial_trace_matrix(&sandwiched, Subsystem::A)?;
    Ok(normalise_branch(probability, unnormalised))
}

/// Conditional state from the linear rule `Tr_A[(E⊗𝟙)σ]/Tr[(E⊗𝟙)σ]`, i.e. the
/// square-root (`√E`) instrument.
pub fn conditional_state_linear(state: &DensityMatrix, e: &Effect) -> Result<Conditional> {
    let lifted = lifted_effect(state, e)?;
    let weighted = &lifted * state.matrix();
    let probability = weighted.trace().re;
    let unnormalised = partial_trace_matrix(&weighted, Subsystem::A)?;
    Ok(normalise_branch(probability, unnormalised))
}

fn lifted_effect(state: &DensityMatrix, e: &Effect) -> Result<ComplexMatrix> {
    if state.dim() != 4 {
        return Err(Error::DimensionMismatch {
            left: state.dim(),
            right: 4,
        });
    }
    Ok(lift_to_a(e.matrix()))
}

fn normalise_branch(probability: f64, unnormalised: ComplexMatrix) -> Conditional {
    let weight = unnormalised.trace().re;
    if probability < DEGENERATE_PROB || weight < DEGENERATE_PROB {
        return Conditional::Degenerate { probability };
    }
    Conditional::Resolved {
        probability,
        state: DensityMatrix::trusted(unnormalised.scale_real(1.0 / weight)),
    }
}

/// Qubit state uniform over the Bloch ball, deterministic in `seed`.
pub fn random_qubit_state(seed: u64) -> DensityMatrix {
    random_qubit_state_with(&mut ChaCha8Rng::seed_from_u64(seed))
}

/// Rejection sampling from the enclosing cube.
pub fn random_qubit_state_with<R: Rng + ?Sized>(rng: &mut R) -> DensityMatrix {
    loop {
        let r = [
            rng.random_range(-1.0..=1.0),
            rng.random_range(-1.0..=1.0),
            rng.random_range(-1.0..=1.0),
        ];
        if r.iter().map(|x: &f64| x * x).sum::<f64>() <= 1.0 {
            return DensityMatrix::from_bloch(r).expect("inside the Bloch ball");
        }
    }
}

/// Haar-random pure two-qubit state (normalised complex Gaussian vector).
pub fn random_pure_two_qubit<R: Rng + ?Sized>(rng: &mut R) -> DensityMatrix {
    let ket: Vec<C64> = (0..4)
        .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    DensityMatrix::pure(&ket).expect("non-zero Gaussian vector")
}

/// Random mixture of one to four Haar-random pure two-qubit states.
pub fn random_two_qubit_state<R: Rng + ?Sized>(rng: &mut R) -> DensityMatrix {
    let count = rng.random_range(1..=4usize);
    let raw: Vec<f64> = (0..count).map(|_| rng.random_range(0.01..1.0)).collect();
    let total: f64 = raw.iter().sum();
    let mut acc = ComplexMatrix::zeros(4).expect("dimension 4");
    for w in raw {
        acc = &acc + &random_pure_two_qubit(rng).matrix().scale_real(w / total);
    }
    DensityMatrix::trusted(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn lam(x: f64) -> Sharpness {
        Sharpness::new(x).unwrap()
    }

    fn diag(d: &[f64]) -> ComplexMatrix {
        ComplexMatrix::from_real_diag(d).unwrap()
    }

    #[test]
    fn pauli_matrices() {
        assert_eq!(pauli(PauliAxis::Z), diag(&[1.0, -1.0]));
        let x = pauli(PauliAxis::X);
        assert_eq!((x.get(0, 1), x.get(1, 0), x.get(0, 0)), (ONE, ONE, ZERO));
        let y = pauli(PauliAxis::Y);
        assert_eq!((y.get(0, 1), y.get(1, 0)), (-I, I));
    }

    #[test]
    fn projectors() {
        assert_eq!(projector(PauliAxis::Z, Outcome::Plus), diag(&[1.0, 0.0]));
        let plus = projector(PauliAxis::X, Outcome::Plus);
        for r in 0..2 {
            for col in 0..2 {
                assert_eq!(plus.get(r, col), c(0.5));
            }
        }
        let sum = &projector(PauliAxis::Y, Outcome::Plus) + &projector(PauliAxis::Y, Outcome::Minus);
        assert_eq!(sum, ComplexMatrix::identity2());
        for axis in PauliAxis::ALL {
            let p = projector(axis, Outcome::Minus);
            assert!((&p * &p).max_abs_diff(&p) < 1e-15);
            assert_abs_diff_eq!(p.trace().re, 1.0);
        }
    }

    #[test]
    fn effects() {
        assert_eq!(
            effect(PauliAxis::Z, Outcome::Plus, Sharpness::SHARP).matrix(),
            &diag(&[1.0, 0.0])
        );
        assert_eq!(
            effect(PauliAxis::Z, Outcome::Plus, lam(0.5)).matrix(),
            &diag(&[0.75, 0.25])
        );
        let minus = effect(PauliAxis::X, Outcome::Minus, Sharpness::SHARP);
        assert_eq!(minus.matrix(), &projector(PauliAxis::X, Outcome::Minus));
    }

    #[test]
    fn effect_completeness_is_exact() {
        for axis in PauliAxis::ALL {
            for k in 1..=20 {
                let s = lam(0.05 * k as f64);
                let sum = effect(axis, Outcome::Plus, s).matrix() + effect(axis, Outcome::Minus, s).matrix();
                assert_eq!(sum, ComplexMatrix::identity2(), "axis {axis} λ {}", s.value());
            }
        }
    }

    #[test]
    fn effects_lie_between_zero_and_identity() {
        for axis in PauliAxis::ALL {
            for outcome in Outcome::BOTH {
                let e = effect(axis, outcome, lam(0.37));
                let spec = crate::matcore::eig_hermitian_2(e.matrix()).unwrap();
                assert!(spec.eigenvalues[1] >= 0.0 && spec.eigenvalues[0] <= 1.0);
            }
        }
    }

    #[test]
    fn sharpness_domain() {
        assert!(Sharpness::new(0.0).is_err());
        assert!(Sharpness::new(1.0 + 1e-12).is_err());
        assert!(Sharpness::new(f64::NAN).is_err());
        assert!(Sharpness::new(1e-6).is_ok());
        assert!("0.5".parse::<Sharpness>().is_ok());
        assert!("abc".parse::<Sharpness>().is_err());
    }

    #[test]
    fn weak_equivalent_examples() {
        assert_eq!(weak_equivalents(Sharpness::SHARP), (0.0, 1.0));
        let (f, g) = weak_equivalents(lam(0.6));
        assert_abs_diff_eq!(f, 0.8, epsilon = 1e-15);
        assert_eq!(g, 0.6);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let (f, g) = weak_equivalents(lam(h));
        assert_abs_diff_eq!(f, h, epsilon = 1e-15);
        assert_eq!(g, h);
        for k in 1..=1000 {
            let (f, g) = weak_equivalents(lam(k as f64 / 1000.0));
            assert_abs_diff_eq!(f * f + g * g, 1.0, epsilon = 4.0 * f64::EPSILON);
        }
    }

    #[test]
    fn singlet_examples() {
        let s = singlet();
        assert_abs_diff_eq!(s.matrix().trace().re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(s.matrix().get(1, 1).re, 0.5, epsilon = 1e-15);
        let half = diag(&[0.5, 0.5]);
        for over in [Subsystem::A, Subsystem::B] {
            assert!(partial_trace(&s, over).unwrap().matrix().max_abs_diff(&half) < 1e-15);
        }
    }

    #[test]
    fn partial_trace_examples() {
        let a = DensityMatrix::from_bloch([0.3, -0.2, 0.5]).unwrap();
        let b = DensityMatrix::from_bloch([-0.1, 0.6, 0.2]).unwrap();
        let ab = DensityMatrix::product(&a, &b).unwrap();
        assert!(partial_trace(&ab, Subsystem::A).unwrap().matrix().max_abs_diff(b.matrix()) < 1e-15);
        assert!(partial_trace(&ab, Subsystem::B).unwrap().matrix().max_abs_diff(a.matrix()) < 1e-15);
        let r = partial_trace(&basis_state(0, 0), Subsystem::A).unwrap();
        assert_eq!(r.matrix(), &diag(&[1.0, 0.0]));
        assert!(partial_trace(&a, Subsystem::A).is_err());
    }

    #[test]
    fn luders_examples() {
        let s = singlet();
        let weak = luders_nonselective(&s, PauliAxis::X, lam(1e-6)).unwrap();
        assert!(weak.matrix().max_abs_diff(s.matrix()) < 1e-11);

        let zz = basis_state(0, 0);
        let after = luders_nonselective(&zz, PauliAxis::Z, Sharpness::SHARP).unwrap();
        assert!(after.matrix().max_abs_diff(zz.matrix()) < 1e-15);

        let after = luders_nonselective(&s, PauliAxis::Z, Sharpness::SHARP).unwrap();
        assert!(after.matrix().max_abs_diff(&diag(&[0.0, 0.5, 0.5, 0.0])) < 1e-15);

        let qubit = DensityMatrix::maximally_mixed(2).unwrap();
        assert!(luders_nonselective(&qubit, PauliAxis::Z, Sharpness::SHARP).is_err());
    }

    #[test]
    fn conditional_sharp_singlet_anticorrelates() {
        let e = effect(PauliAxis::Z, Outcome::Plus, Sharpness::SHARP);
        let Conditional::Resolved { probability, state } = conditional_state(&singlet(), &e).unwrap() else {
            panic!("degenerate");
        };
        assert_abs_diff_eq!(probability, 0.5, epsilon = 1e-15);
        assert!(state.matrix().max_abs_diff(&diag(&[0.0, 1.0])) < 1e-15);
    }

    #[test]
    fn conditional_unsharp_singlet() {
        let e = effect(PauliAxis::Z, Outcome::Plus, lam(0.5));
        // linear rule: Bob's Bloch length λ
        let lin = conditional_state_linear(&singlet(), &e).unwrap();
        assert_abs_diff_eq!(lin.probability(), 0.5, epsilon = 1e-15);
        assert!(lin.state().unwrap().matrix().max_abs_diff(&diag(&[0.25, 0.75])) < 1e-15);
        // sandwich rule: Bloch length 2λ/(1+λ²) = 0.8
        let sw = conditional_state(&singlet(), &e).unwrap();
        assert_abs_diff_eq!(sw.probability(), 0.5, epsilon = 1e-15);
        assert!(sw.state().unwrap().matrix().max_abs_diff(&diag(&[0.1, 0.9])) < 1e-15);
    }

    #[test]
    fn conditional_product_state_is_unchanged() {
        let a = DensityMatrix::from_bloch([0.3, -0.2, 0.5]).unwrap();
        let b = DensityMatrix::from_bloch([-0.1, 0.6, 0.2]).unwrap();
        let ab = DensityMatrix::product(&a, &b).unwrap();
        for axis in PauliAxis::ALL {
            for outcome in Outcome::BOTH {
                let e = effect(axis, outcome, lam(0.7));
                let born = (e.matrix() * a.matrix()).trace().re;
                for cond in [conditional_state(&ab, &e).unwrap(), conditional_state_linear(&ab, &e).unwrap()] {
                    assert_abs_diff_eq!(cond.probability(), born, epsilon = 1e-15);
                    assert!(cond.state().unwrap().matrix().max_abs_diff(b.matrix()) < 1e-14);
                }
            }
        }
    }

    #[test]
    fn conditional_flags_zero_weight_branch() {
        let zz = basis_state(0, 0);
        let e = effect(PauliAxis::Z, Outcome::Minus, Sharpness::SHARP);
        let cond = conditional_state(&zz, &e).unwrap();
        assert!(matches!(cond, Conditional::Degenerate { .. }));
        assert!(cond.state().is_none());
    }

    #[test]
    fn random_qubit_state_is_deterministic_and_valid() {
        for seed in 0..200 {
            let rho = random_qubit_state(seed);
            assert_eq!(rho, random_qubit_state(seed));
            let r = rho.bloch().unwrap();
            assert!(r.iter().map(|x| x * x).sum::<f64>() <= 1.0);
            assert!(DensityMatrix::new(rho.matrix().clone()).is_ok());
        }
        assert_ne!(random_qubit_state(1), random_qubit_state(2));
    }

    #[test]
    fn density_matrix_validation() {
        assert!(matches!(
            DensityMatrix::new(diag(&[0.6, 0.6])),
            Err(Error::BadTrace { .. })
        ));
        assert!(matches!(
            DensityMatrix::new(diag(&[1.5, -0.5])),
            Err(Error::NotPositive { .. })
        ));
        let skew = ComplexMatrix::from_rows2([[c(0.5), c(0.1)], [c(0.0), c(0.5)]]);
        assert!(matches!(DensityMatrix::new(skew), Err(Error::NotHermitian { .. })));
        assert!(DensityMatrix::from_bloch([1.0, 1.0, 0.0]).is_err());
        let bloch = [0.1, -0.4, 0.3];
        let rho = DensityMatrix::from_bloch(bloch).unwrap();
        let back = rho.bloch().unwrap();
        for k in 0..3 {
            assert_abs_diff_eq!(back[k], bloch[k], epsilon = 1e-15);
        }
    }

    #[test]
    fn mixture_of_states() {
        let m = DensityMatrix::mixture(&[(0.5, basis_state(0, 0)), (0.5, basis_state(1, 1))]).unwrap();
        assert_eq!(m.matrix(), &diag(&[0.5, 0.0, 0.0, 0.5]));
        assert!(DensityMatrix::mixture(&[]).is_err());
    }
}
