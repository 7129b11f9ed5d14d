//! Closed-form NAQC values for the singlet, threshold root finding and the
//! constrained maxima obtained at marginal-violation boundaries.
//!
//! These formulas are independent of the density-matrix simulation in
//! [`crate::naqc`]; the two are cross-checked against each other.

use std::f64::consts::LOG2_E;

use serde::Serialize;

use crate::coherence::CoherenceMeasure;
use crate::error::{Error, Result};

/// Bisection exits once the bracket is this narrow.
pub const BISECTION_WIDTH: f64 = 1e-10;
pub const BISECTION_MAX_ITER: usize = 200;

fn check_unit(what: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value <= 1.0 {
        Ok(())
    } else {
        Err(Error::Domain { what, value })
    }
}

fn quality(l: f64) -> f64 {
    ((1.0 - l) * (1.0 + l)).sqrt()
}

/// Alice¹, l1-norm: `6λ₁/(1+λ₁²)`.
pub fn n1_l1(l1: f64) -> Result<f64> {
    check_unit("n1_l1", l1)?;
    Ok(6.0 * l1 / (1.0 + l1 * l1))
}

/// Alice², l1-norm: `2λ₂(1+2√(1-λ₁²))/(1+λ₂²)`.
pub fn n2_l1(l1: f64, l2: f64) -> Result<f64> {
    check_unit("n2_l1", l1)?;
    check_unit("n2_l1", l2)?;
    Ok(2.0 * l2 * (1.0 + 2.0 * quality(l1)) / (1.0 + l2 * l2))
}

/// Alice³, l1-norm.
pub fn n3_l1(l1: f64, l2: f64, l3: f64) -> Result<f64> {
    for l in [l1, l2, l3] {
        check_unit("n3_l1", l)?;
    }
    let (f1, f2) = (quality(l1), quality(l2));
    let bracket = 1.0 + 2.0 * f1 + 2.0 * f2 + 4.0 * (f1 * f1 * f2 * f2).sqrt();
    Ok(2.0 * l3 * bracket / (3.0 * (1.0 + l3 * l3)))
}

/// `log₂e·[2λ/(1+λ²)·atanh λ − atanh λ²]`, with its `λ → 1` limit `½`.
fn entropic_pair(l: f64) -> f64 {
    if l == 1.0 {
        return 0.5;
    }
    LOG2_E * (2.0 * l / (1.0 + l * l) * l.atanh() - (l * l).atanh())
}

/// Alice¹, relative entropy: `log₂e·[12λ₁/(1+λ₁²)·atanh λ₁ − 6 atanh λ₁²]`;
/// the removable divergence at `λ₁ = 1` returns 3.
pub fn n1_e(l1: f64) -> Result<f64> {
    check_unit("n1_e", l1)?;
    Ok(6.0 * entropic_pair(l1))
}

/// Alice², relative entropy, with `x = √(1-λ₁²)λ₂/(1+λ₂²)`:
/// `2[1 + pair(λ₂) + (½-x)log₂(½-x) + (½+x)log₂(½+x)]`.
pub fn n2_e(l1: f64, l2: f64) -> Result<f64> {
    check_unit("n2_e", l1)?;
    check_unit("n2_e", l2)?;
    let x = quality(l1) * l2 / (1.0 + l2 * l2);
    let xlogx = |p: f64| if p <= 0.0 { 0.0 } else { p * p.log2() };
    Ok(2.0 * (1.0 + entropic_pair(l2) + xlogx(0.5 - x) + xlogx(0.5 + x)))
}

/// Alice¹, skew information: `6λ₁²/(1+λ₁²)`.
pub fn n1_s(l1: f64) -> Result<f64> {
    check_unit("n1_s", l1)?;
    Ok(6.0 * l1 * l1 / (1.0 + l1 * l1))
}

/// Alice², skew information: `2[1+2λ₂² − √((1-λ₂²)² + 4λ₁²λ₂²)]/(1+λ₂²)`.
pub fn n2_s(l1: f64, l2: f64) -> Result<f64> {
    check_unit("n2_s", l1)?;
    check_unit("n2_s", l2)?;
    let (a, b) = (l1 * l1, l2 * l2);
    let root = ((1.0 - b) * (1.0 - b) + 4.0 * a * b).sqrt();
    Ok(2.0 * (1.0 + 2.0 * b - root) / (1.0 + b))
}

/// Bisection for `f(λ) = bound` on `[lo, hi]`, which must bracket a sign change.
pub fn solve_threshold(f: impl Fn(f64) -> f64, bound: f64, lo: f64, hi: f64) -> Result<f64> {
    let no_crossing = Error::NoSignChange { bound, lo, hi };
    let (mut a, mut b) = (lo, hi);
    let fa = f(a) - bound;
    let fb = f(b) - bound;
    if !(fa.is_finite() && fb.is_finite()) {
        return Err(no_crossing);
    }
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(no_crossing);
    }
    let lower_negative = fa < 0.0;
    for _ in 0..BISECTION_MAX_ITER {
        if b - a <= BISECTION_WIDTH {
            break;
        }
        let mid = 0.5 * (a + b);
        let fm = f(mid) - bound;
        if fm == 0.0 {
            return Ok(mid);
        }
        if (fm < 0.0) == lower_negative {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}

fn bracketed(f: impl Fn(f64) -> Result<f64>, bound: f64, lo: f64, hi: f64) -> Result<f64> {
    solve_threshold(|x| f(x).unwrap_or(f64::NAN), bound, lo, hi)
}

/// A solved threshold sharpness, with its exact expression when one is known.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdReport {
    pub measure: CoherenceMeasure,
    pub which_alice: usize,
    pub threshold: f64,
    pub closed_form: Option<ClosedForm>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClosedForm {
    pub expression: &'static str,
    pub value: f64,
}

pub fn alice1_closed_form(measure: CoherenceMeasure) -> Option<ClosedForm> {
    match measure {
        CoherenceMeasure::L1 => Some(ClosedForm {
            expression: "(sqrt(3)-1)/sqrt(2)",
            value: (3f64.sqrt() - 1.0) / 2f64.sqrt(),
        }),
        CoherenceMeasure::SkewInformation => Some(ClosedForm {
            expression: "1/sqrt(2)",
            value: std::f64::consts::FRAC_1_SQRT_2,
        }),
        CoherenceMeasure::RelativeEntropy => None,
    }
}

/// Alice¹ sharpness above which her NAQC value exceeds `bound`.
pub fn alice1_threshold_for_bound(measure: CoherenceMeasure, bound: f64) -> Result<f64> {
    match measure {
        CoherenceMeasure::L1 => bracketed(n1_l1, bound, 0.1, 1.0),
        CoherenceMeasure::RelativeEntropy => bracketed(n1_e, bound, 0.1, 0.99),
        CoherenceMeasure::SkewInformation => bracketed(n1_s, bound, 0.1, 1.0),
    }
}

pub fn alice1_threshold(measure: CoherenceMeasure) -> Result<ThresholdReport> {
    Ok(ThresholdReport {
        measure,
        which_alice: 1,
        threshold: alice1_threshold_for_bound(measure, measure.bound())?,
        closed_form: alice1_closed_form(measure),
    })
}

/// Largest λ₁ for which a sharp Alice² still violates the l1 bound:
/// `½√(2√6 − 3)`.
pub fn alice2_upper_l1() -> Result<f64> {
    bracketed(|l1| n2_l1(l1, 1.0), 6f64.sqrt(), 1e-9, 1.0)
}

pub const ALICE2_UPPER_L1_EXACT: f64 = 0.689_017_322_998_187_7;

/// Marginal λ₂ for l1 at fixed λ₁: solves `n2_l1(λ₁, λ₂) = √6`.
pub fn alice2_threshold_l1(l1: f64) -> Result<f64> {
    bracketed(|l2| n2_l1(l1, l2), 6f64.sqrt(), 1e-9, 1.0)
}

/// Supremum of the target Alice's averaged NAQC value subject to every earlier
/// Alice violating her bound, with the target measuring sharply.
///
/// Each closed form decreases in every predecessor sharpness, so the supremum
/// sits on the marginal-violation boundary of the predecessors.
pub fn constrained_max(measure: CoherenceMeasure, which_alice: usize) -> Result<f64> {
    let bound = measure.bound();
    let t1 = alice1_threshold_for_bound(measure, bound)?;
    match (measure, which_alice) {
        (CoherenceMeasure::L1, 2) => n2_l1(t1, 1.0),
        (CoherenceMeasure::L1, 3) => {
            let t2 = alice2_threshold_l1(t1)?;
            n3_l1(t1, t2, 1.0)
        }
        (CoherenceMeasure::RelativeEntropy, 2) => n2_e(t1, 1.0),
        (CoherenceMeasure::SkewInformation, 2) => n2_s(t1, 1.0),
        (CoherenceMeasure::RelativeEntropy | CoherenceMeasure::SkewInformation, 3) => {
            Err(Error::Unsupported(format!(
                "no Alice² violation is possible for {measure}, so Alice³ has no feasible region"
            )))
        }
        _ => Err(Error::Unsupported(format!(
            "constrained maximum for Alice {which_alice} is not available (expected 2 or 3)"
        ))),
    }
}

/// Alice¹ relative-entropy threshold for each candidate bound constant.
pub fn relative_entropy_threshold_sensitivity(bounds: &[f64]) -> Result<Vec<(f64, f64)>> {
    bounds
        .iter()
        .map(|&b| Ok((b, alice1_threshold_for_bound(CoherenceMeasure::RelativeEntropy, b)?)))
        .collect()
}
