//! Self-check harness behind `naqc verify`: closed forms against the full
//! simulation, thresholds, constrained maxima, complementarity sampling,
//! channel sanity and the observer-count search.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::coherence::{complementarity_sum, relative_entropy_bound_refined, CoherenceMeasure};
use crate::error::Result;
use crate::matcore::EIGEN_CLIP;
use crate::naqc::{self, max_alices, naqc_value, predecessor_branches, averaged_naqc};
use crate::oracle;
use crate::quantum::{
    effect, luders_nonselective, random_qubit_state_with, random_two_qubit_state, singlet,
    weak_equivalents, DensityMatrix, Outcome, PauliAxis, Sharpness,
};
use crate::matcore::ComplexMatrix;

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub samples: usize,
    pub channel_samples: usize,
    pub seed: u64,
    pub grid_step: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            samples: 100_000,
            channel_samples: 10_000,
            seed: 2019,
            grid_step: 0.01,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Default)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn check(&mut self, name: &str, passed: bool, detail: String) {
        self.checks.push(Check {
            name: name.to_string(),
            passed,
            detail,
        });
    }
}

/// Grid of `n` sharpness values `k/n`, `k = 1..=n` (includes 1).
pub fn target_grid(n: usize) -> Vec<f64> {
    (1..=n).map(|k| k as f64 / n as f64).collect()
}

/// Grid of `n` strictly unsharp values `k/(n+1)`.
pub fn predecessor_grid(n: usize) -> Vec<f64> {
    (1..=n).map(|k| k as f64 / (n + 1) as f64).collect()
}

fn simulate(measure: CoherenceMeasure, chain: &[f64]) -> Result<f64> {
    let (preds, target) = chain.split_at(chain.len() - 1);
    let preds = preds
        .iter()
        .map(|&l| Sharpness::new(l))
        .collect::<Result<Vec<_>>>()?;
    let branches = predecessor_branches(&singlet(), &preds)?;
    averaged_naqc(&branches, measure, Sharpness::new(target[0])?)
}

/// Largest |simulation − closed form| for each of the six singlet formulas.
pub fn oracle_deviations(points: usize) -> Result<Vec<(&'static str, f64)>> {
    use CoherenceMeasure::*;
    let targets = target_grid(points);
    let preds = predecessor_grid(points);

    let one = |m: CoherenceMeasure, f: fn(f64) -> Result<f64>| -> Result<f64> {
        targets.par_iter().map(|&l| Ok((simulate(m, &[l])? - f(l)?).abs())).try_reduce(|| 0.0, |a, b| Ok(a.max(b)))
    };
    let two = |m: CoherenceMeasure, f: fn(f64, f64) -> Result<f64>| -> Result<f64> {
        preds
            .par_iter()
            .map(|&l1| {
                let branches = predecessor_branches(&singlet(), &[Sharpness::new(l1)?])?;
                let mut worst = 0.0f64;
                for &l2 in &targets {
                    let sim = averaged_naqc(&branches, m, Sharpness::new(l2)?)?;
                    worst = worst.max((sim - f(l1, l2)?).abs());
                }
                Ok(worst)
            })
            .try_reduce(|| 0.0, |a, b| Ok(a.max(b)))
    };
    // n3: a full sweep of each parameter across a coarse grid of the other two
    let coarse_preds = predecessor_grid(5);
    let coarse_targets = [0.25, 0.5, 0.75, 1.0];
    let mut triples = Vec::new();
    for &a in &coarse_preds {
        for &t in &coarse_targets {
            for &p in &preds {
                triples.push([p, a, t]);
                triples.push([a, p, t]);
            }
        }
        for &b in &coarse_preds {
            for &t in &targets {
                triples.push([a, b, t]);
            }
        }
    }
    let three = triples
        .par_iter()
        .map(|c| Ok((simulate(L1, c)? - oracle::n3_l1(c[0], c[1], c[2])?).abs()))
        .try_reduce(|| 0.0, |a: f64, b: f64| Ok(a.max(b)))?;

    Ok(vec![
        ("n1_l1", one(L1, oracle::n1_l1)?),
        ("n2_l1", two(L1, oracle::n2_l1)?),
        ("n3_l1", three),
        ("n1_e", one(RelativeEntropy, oracle::n1_e)?),
        ("n2_e", two(RelativeEntropy, oracle::n2_e)?),
        ("n1_s", one(SkewInformation, oracle::n1_s)?),
        ("n2_s", two(SkewInformation, oracle::n2_s)?),
    ])
}

/// Largest complementarity sum per measure over `samples` random qubit states.
pub fn complementarity_maxima(samples: usize, seed: u64) -> Result<Vec<(CoherenceMeasure, f64)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let states: Vec<DensityMatrix> = (0..samples).map(|_| random_qubit_state_with(&mut rng)).collect();
    CoherenceMeasure::ALL
        .iter()
        .map(|&m| {
            let max = states
                .par_iter()
                .map(|rho| complementarity_sum(rho, m))
                .try_reduce(|| f64::NEG_INFINITY, |a, b| Ok(a.max(b)))?;
            Ok((m, max))
        })
        .collect()
}

/// Worst trace, Hermiticity and positivity defects of the Lüders channel.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ChannelDefects {
    pub trace: f64,
    pub hermiticity: f64,
    pub positivity_failures: usize,
}

pub fn luders_defects(samples: usize, seed: u64) -> Result<ChannelDefects> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = ChannelDefects::default();
    let lambdas = [0.05, 0.3, 0.6, 0.9, 1.0];
    for k in 0..samples {
        let state = random_two_qubit_state(&mut rng);
        let axis = PauliAxis::ALL[k % 3];
        let s = Sharpness::new(lambdas[k % lambdas.len()])?;
        let m = luders_nonselective(&state, axis, s)?.matrix().clone();
        out.trace = out.trace.max((m.trace().re - 1.0).abs().max(m.trace().im.abs()));
        out.hermiticity = out.hermiticity.max(m.hermitian_deviation());
        if !m.is_positive_semidefinite(EIGEN_CLIP) {
            out.positivity_failures += 1;
        }
    }
    Ok(out)
}

fn pass_fail(passed: bool) -> &'static str {
    if passed {
        "PASS"
    } else {
        "FAIL"
    }
}

pub fn run_verification(opts: &VerifyOptions) -> Result<VerificationReport> {
    use CoherenceMeasure::*;
    let mut report = VerificationReport::default();
    let sqrt6 = L1.bound();

    // ceilings
    let ceil_l1 = naqc_value(&singlet(), L1, Sharpness::SHARP)?;
    let ceil_s = naqc_value(&singlet(), SkewInformation, Sharpness::SHARP)?;
    let ceil_e = oracle::n1_e(1.0)?;
    let dev = [ceil_l1, ceil_s, ceil_e].iter().map(|v| (v - 3.0).abs()).fold(0.0, f64::max);
    report.check(
        "singlet ceilings",
        dev <= 1e-9,
        format!("l1 {ceil_l1:.12}, skew {ceil_s:.12}, relent limit {ceil_e:.12}; max deviation {dev:.3e}"),
    );

    // oracle equivalence
    let devs = oracle_deviations(100)?;
    let worst = devs.iter().map(|(_, d)| *d).fold(0.0, f64::max);
    let listing: Vec<String> = devs.iter().map(|(n, d)| format!("{n} {d:.2e}")).collect();
    report.check(
        "oracle equivalence",
        worst <= 1e-9,
        format!("max |simulation - closed form| = {worst:.3e} ({})", listing.join(", ")),
    );

    // thresholds
    let exact_l1 = (3f64.sqrt() - 1.0) / 2f64.sqrt();
    let t_l1 = naqc::threshold_simulated(L1, &[])?;
    report.check(
        "l1 Alice1 threshold",
        (t_l1 - exact_l1).abs() <= 1e-6,
        format!("{t_l1:.9} vs (sqrt(3)-1)/sqrt(2) = {exact_l1:.9}"),
    );
    let upper = oracle::alice2_upper_l1()?;
    let exact_upper = 0.5 * (2.0 * sqrt6 - 3.0).sqrt();
    let t_l2 = naqc::threshold_simulated(L1, &[Sharpness::new(t_l1)?])?;
    report.check(
        "l1 Alice2 window",
        (upper - exact_upper).abs() <= 1e-6 && (t_l2 - 0.632).abs() <= 0.005,
        format!("lambda1 < {upper:.9} (exact {exact_upper:.9}); lambda2 threshold at lambda1 = {t_l1:.6}: {t_l2:.9}"),
    );
    let t_e = naqc::threshold_simulated(RelativeEntropy, &[])?;
    report.check(
        "relent Alice1 threshold",
        (t_e - 0.65).abs() <= 0.005,
        format!("{t_e:.9} vs 0.65"),
    );
    let exact_s = std::f64::consts::FRAC_1_SQRT_2;
    let t_s = naqc::threshold_simulated(SkewInformation, &[])?;
    report.check(
        "skew Alice1 threshold",
        (t_s - exact_s).abs() <= 1e-6,
        format!("{t_s:.9} vs 1/sqrt(2) = {exact_s:.9}"),
    );

    // constrained maxima
    let m_l1_2 = oracle::constrained_max(L1, 2)?;
    let m_l1_3 = oracle::constrained_max(L1, 3)?;
    let m_e_2 = oracle::constrained_max(RelativeEntropy, 2)?;
    let m_s_2 = oracle::constrained_max(SkewInformation, 2)?;
    report.check(
        "constrained maxima",
        (m_l1_2 - 2.71).abs() <= 0.005
            && (m_l1_3 - 2.30).abs() <= 0.01
            && m_l1_3 < sqrt6
            && (m_e_2 - 1.94).abs() <= 0.01
            && (m_s_2 - 1.59).abs() <= 0.005,
        format!(
            "l1 Alice2 {m_l1_2:.6}, l1 Alice3 {m_l1_3:.6}, relent Alice2 {m_e_2:.6}, skew Alice2 {m_s_2:.6}"
        ),
    );

    // complementarity
    let maxima = complementarity_maxima(opts.samples, opts.seed)?;
    let ok = maxima.iter().all(|(m, v)| *v <= m.bound() + 1e-9);
    let listing: Vec<String> = maxima
        .iter()
        .map(|(m, v)| format!("{m} max {v:.9} (bound {:.9})", m.bound()))
        .collect();
    report.check(
        "complementarity bounds",
        ok,
        format!("{} states, seed {}: {}", opts.samples, opts.seed, listing.join(", ")),
    );
    let t = 1.0 / 3f64.sqrt();
    let sat_l1 = complementarity_sum(&DensityMatrix::from_bloch([t, t, t])?, L1)?;
    let sat_s = complementarity_sum(&DensityMatrix::from_bloch([0.0, 0.0, 1.0])?, SkewInformation)?;
    report.check(
        "complementarity saturation",
        (sat_l1 - sqrt6).abs() <= 1e-9 && (sat_s - 2.0).abs() <= 1e-9,
        format!("l1 at (1,1,1)/sqrt(3): {sat_l1:.12}; skew at |0>: {sat_s:.12}"),
    );

    // channel
    let defects = luders_defects(opts.channel_samples, opts.seed)?;
    let mut completeness = true;
    let mut tradeoff = 0.0f64;
    for k in 1..=20 {
        let s = Sharpness::new(0.05 * k as f64)?;
        let (f, g) = weak_equivalents(s);
        tradeoff = tradeoff.max((f * f + g * g - 1.0).abs());
        for axis in PauliAxis::ALL {
            let sum = effect(axis, Outcome::Plus, s).matrix() + effect(axis, Outcome::Minus, s).matrix();
            completeness &= sum == ComplexMatrix::identity2();
        }
    }
    report.check(
        "channel sanity",
        defects.trace <= 1e-12
            && defects.hermiticity <= 1e-12
            && defects.positivity_failures == 0
            && completeness
            && tradeoff <= 4.0 * f64::EPSILON,
        format!(
            "{} states: trace defect {:.2e}, hermiticity defect {:.2e}, {} positivity failures; effects complete: {completeness}; |F^2+G^2-1| <= {tradeoff:.2e}",
            opts.channel_samples, defects.trace, defects.hermiticity, defects.positivity_failures
        ),
    );

    // observer count
    let expected = [(L1, 2usize), (RelativeEntropy, 1), (SkewInformation, 1)];
    let mut ok = true;
    let mut parts = Vec::new();
    for (m, want) in expected {
        let r = max_alices(m, opts.grid_step, true)?;
        ok &= r.count == want;
        let mut part = format!("{m}: {}", r.count);
        if r.count >= 2 {
            let witness: Vec<String> = r.witness.iter().map(|l| format!("{l}")).collect();
            part.push_str(&format!(" (witness [{}]", witness.join(", ")));
            if let Some((lo, hi)) = r.lambda1_window {
                part.push_str(&format!(", lambda1 window ({lo:.6}, {hi:.6})"));
            }
            part.push(')');
        }
        parts.push(part);
    }
    report.check("max alices", ok, parts.join("; "));

    let (refined, _) = relative_entropy_bound_refined()?;
    report.notes.push(format!(
        "refined relative-entropy complementarity maximum {refined:.9} (decision bound stays 2.23)"
    ));
    let sens = oracle::relative_entropy_threshold_sensitivity(&[2.22, 2.23, 2.24])?;
    let listing: Vec<String> = sens.iter().map(|(b, t)| format!("bound {b}: {t:.6}")).collect();
    report.notes.push(format!("relent Alice1 threshold sensitivity: {}", listing.join(", ")));

    Ok(report)
}

pub fn render(report: &VerificationReport) -> String {
    let mut out = String::new();
    for c in &report.checks {
        out.push_str(&format!("[{}] {}: {}\n", pass_fail(c.passed), c.name, c.detail));
    }
    for n in &report.notes {
        out.push_str(&format!("note: {n}\n"));
    }
    let passed = report.checks.iter().filter(|c| c.passed).count();
    out.push_str(&format!(
        "{passed}/{} checks passed\n",
        report.checks.len()
    ));
    out
}
