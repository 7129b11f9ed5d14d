//! Independent reference values for the singlet scenario.
//!
//! Every Lüders step on the singlet keeps it Bell-diagonal: measuring along
//! axis `k` leaves the correlation `t_k` alone and scales the other two by
//! `F = √(1-λ²)`. A target Alice measuring along `i` with sharpness `λ` then
//! leaves Bob with Bloch length `2λ|t_i|/(1+λ²)` along `i`, and the NAQC value
//! of that branch is `Σ_i g(r_i)` with `g` the coherence of such a state in a
//! perpendicular basis. Nothing here calls into the library.

#![allow(dead_code)]

use naqc_core::CoherenceMeasure;

pub const SQRT6: f64 = 2.449_489_742_783_178;

fn h(p: f64) -> f64 {
    let term = |x: f64| if x <= 0.0 { 0.0 } else { -x * x.log2() };
    term(p) + term(1.0 - p)
}

fn quality(l: f64) -> f64 {
    (1.0 - l * l).sqrt()
}

/// Coherence, in a basis perpendicular to its Bloch vector, of a qubit with
/// Bloch length `r`.
pub fn perpendicular_coherence(measure: CoherenceMeasure, r: f64) -> f64 {
    match measure {
        CoherenceMeasure::L1 => r,
        CoherenceMeasure::RelativeEntropy => 1.0 - h(0.5 * (1.0 + r)),
        CoherenceMeasure::SkewInformation => 1.0 - (1.0 - r * r).max(0.0).sqrt(),
    }
}

/// Averaged NAQC value of the last Alice in `chain` on the singlet.
pub fn bell_diagonal_naqc(measure: CoherenceMeasure, chain: &[f64]) -> f64 {
    let (preds, target) = chain.split_at(chain.len() - 1);
    let target = target[0];
    let mut total = 0.0;
    let mut branches = 0usize;
    let mut settings = vec![0usize; preds.len()];
    loop {
        let mut t = [1.0f64; 3];
        for (&k, &l) in settings.iter().zip(preds) {
            for (j, tj) in t.iter_mut().enumerate() {
                if j != k {
                    *tj *= quality(l);
                }
            }
        }
        total += t
            .iter()
            .map(|&ti| perpendicular_coherence(measure, 2.0 * target * ti / (1.0 + target * target)))
            .sum::<f64>();
        branches += 1;

        let mut pos = 0;
        while pos < settings.len() && settings[pos] == 2 {
            settings[pos] = 0;
            pos += 1;
        }
        if pos == settings.len() {
            break;
        }
        settings[pos] += 1;
    }
    total / branches as f64
}

// Closed forms written out per formula.

pub fn n1_l1(l: f64) -> f64 {
    6.0 * l / (1.0 + l * l)
}

pub fn n2_l1(l1: f64, l2: f64) -> f64 {
    2.0 * l2 * (1.0 + 2.0 * quality(l1)) / (1.0 + l2 * l2)
}

pub fn n3_l1(l1: f64, l2: f64, l3: f64) -> f64 {
    let (f1, f2) = (quality(l1), quality(l2));
    2.0 * l3 * (1.0 + 2.0 * f1 + 2.0 * f2 + 4.0 * f1 * f2) / (3.0 * (1.0 + l3 * l3))
}

pub fn n1_e(l: f64) -> f64 {
    3.0 * (1.0 - h(0.5 * (1.0 + 2.0 * l / (1.0 + l * l))))
}

pub fn n2_e(l1: f64, l2: f64) -> f64 {
    let x = quality(l1) * l2 / (1.0 + l2 * l2);
    let q = (1.0 + l2).powi(2) / (2.0 * (1.0 + l2 * l2));
    let plog = |p: f64| if p <= 0.0 { 0.0 } else { p * p.log2() };
    let pair = 0.5 * (1.0 + plog(q) + plog(1.0 - q));
    2.0 * (1.0 + pair + plog(0.5 - x) + plog(0.5 + x))
}

pub fn n1_s(l: f64) -> f64 {
    6.0 * l * l / (1.0 + l * l)
}

pub fn n2_s(l1: f64, l2: f64) -> f64 {
    let disc = ((1.0 - l2 * l2).powi(2) + 4.0 * l1 * l1 * l2 * l2).sqrt();
    2.0 * (1.0 + 2.0 * l2 * l2 - disc) / (1.0 + l2 * l2)
}

/// Root of `f - target` on `[lo, hi]` by plain bisection; `f` increasing.
pub fn bisect(f: impl Fn(f64) -> f64, target: f64, mut lo: f64, mut hi: f64) -> f64 {
    assert!(f(lo) < target && f(hi) > target, "no crossing on [{lo}, {hi}]");
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
