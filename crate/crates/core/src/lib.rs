//! Simulation of sequential unsharp measurements on one half of an entangled
//! qubit pair, and of how many of the measuring observers can steer the
//! coherence of the distant qubit (nonlocal advantage of quantum coherence,
//! NAQC).
//!
//! The crate is split bottom-up:
//!
//! - [`matcore`]: 2×2 / 4×4 complex matrices and the Hermitian 2×2 eigensolver.
//! - [`quantum`]: states, Pauli projectors, unsharp effects, the Lüders channel.
//! - [`coherence`]: l1-norm, relative-entropy and skew-information coherence.
//! - [`naqc`]: NAQC functionals and the sequential multi-observer engine.
//! - [`oracle`]: closed forms for the singlet, thresholds and constrained maxima.
//! - [`cli`]: the `naqc` command-line front end.

pub mod cli;
pub mod coherence;
pub mod error;
pub mod matcore;
pub mod naqc;
pub mod oracle;
pub mod quantum;
pub mod verify;

pub use coherence::{coherence, complementarity_sum, CoherenceMeasure};
pub use error::{Error, Result};
pub use matcore::{ComplexMatrix, Spectrum2, C64};
pub use naqc::{max_alices, naqc_value, sequential_naqc, MaxAlicesReport, NaqcResult, ScenarioConfig};
pub use quantum::{
    conditional_state, effect, luders_nonselective, partial_trace, pauli, projector, singlet,
    weak_equivalents, Conditional, DensityMatrix, Effect, Outcome, PauliAxis, Sharpness, Subsystem,
};
