//! NAQC functionals and the sequential multi-Alice scenario.
//!
//! A chain of Alices measures the same qubit one after the other. Every Alice
//! picks her axis uniformly from `{x, y, z}` and is ignorant of the settings of
//! those before her, so the state reaching Alice^n is one of `3^(n-1)` branches
//! produced by non-selective Lüders updates, each with weight `3^-(n-1)`. The
//! NAQC value of the last Alice is averaged over those branches.

use rayon::prelude::*;
use serde::Serialize;

use crate::coherence::{coherence, CoherenceMeasure};
use crate::error::{Error, Result};
use crate::oracle::solve_threshold;
use crate::quantum::{
    conditional_state, effect, luders_nonselective, singlet, Conditional, DensityMatrix, Outcome,
    PauliAxis, Sharpness,
};

/// Deepest chain `max_alices` will explore.
pub const MAX_SEARCH_DEPTH: usize = 6;

/// Sharpness chain `λ₁…λₙ` for Alice¹…Aliceⁿ together with the coherence measure.
/// NAQC is evaluated between the last Alice and Bob; earlier entries only
/// disturb the state and must be strictly unsharp.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    chain: Vec<Sharpness>,
    measure: CoherenceMeasure,
}

impl ScenarioConfig {
    pub fn new(chain: Vec<Sharpness>, measure: CoherenceMeasure) -> Result<Self> {
        if chain.is_empty() {
            return Err(Error::InvalidConfig("sharpness chain is empty".into()));
        }
        if let Some(pos) = chain[..chain.len() - 1].iter().position(|s| s.is_sharp()) {
            return Err(Error::InvalidConfig(format!(
                "predecessor Alice {} must measure unsharply (λ < 1)",
                pos + 1
            )));
        }
        Ok(Self { chain, measure })
    }

    pub fn from_values(lambdas: &[f64], measure: CoherenceMeasure) -> Result<Self> {
        let chain = lambdas
            .iter()
            .map(|&l| Sharpness::new(l))
            .collect::<Result<Vec<_>>>()?;
        Self::new(chain, measure)
    }

    pub fn chain(&self) -> &[Sharpness] {
        &self.chain
    }

    pub fn predecessors(&self) -> &[Sharpness] {
        &self.chain[..self.chain.len() - 1]
    }

    pub fn target(&self) -> Sharpness {
        *self.chain.last().expect("non-empty chain")
    }

    /// 1-based index of the Alice whose NAQC with Bob is evaluated.
    pub fn target_index(&self) -> usize {
        self.chain.len()
    }

    pub fn measure(&self) -> CoherenceMeasure {
        self.measure
    }

    pub fn lambdas(&self) -> Vec<f64> {
        self.chain.iter().map(|s| s.value()).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NaqcResult {
    pub value: f64,
    pub bound: f64,
    pub violated: bool,
    pub config: ScenarioConfig,
}

/// NAQC functional: `½ Σ_{i} Σ_{j≠i} Σ_a p(a|j) C_i(ρ_B|j,a)`, with Alice measuring
/// the unsharp effect of the given sharpness along `j` and Bob evaluating
/// coherence in basis `i`.
pub fn naqc_value(state: &DensityMatrix, measure: CoherenceMeasure, sharpness: Sharpness) -> Result<f64> {
    if state.dim() != 4 {
        return Err(Error::DimensionMismatch {
            left: state.dim(),
            right: 4,
        });
    }
    let mut total = 0.0;
    for alice_axis in PauliAxis::ALL {
        for outcome in Outcome::BOTH {
            let e = effect(alice_axis, outcome, sharpness);
            // a degenerate branch contributes p·C with p ≈ 0
            let Conditional::Resolved { probability, state: bob } = conditional_state(state, &e)? else {
                continue;
            };
            for bob_basis in PauliAxis::ALL {
                if bob_basis != alice_axis {
                    total += probability * coherence(&bob, measure, bob_basis)?;
                }
            }
        }
    }
    Ok(0.5 * total)
}

/// One branch of the predecessor setting tree.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainBranch {
    pub settings: Vec<PauliAxis>,
    pub state: DensityMatrix,
}

/// States reaching the next Alice for every predecessor setting chain, in
/// lexicographic order of the settings (x < y < z).
pub fn predecessor_branches(initial: &DensityMatrix, predecessors: &[Sharpness]) -> Result<Vec<ChainBranch>> {
    let mut branches = vec![ChainBranch {
        settings: Vec::new(),
        state: initial.clone(),
    }];
    for &s in predecessors {
        let mut next = Vec::with_capacity(branches.len() * 3);
        for branch in &branches {
            for axis in PauliAxis::ALL {
                let mut settings = branch.settings.clone();
                settings.push(axis);
                next.push(ChainBranch {
                    settings,
                    state: luders_nonselective(&branch.state, axis, s)?,
                });
            }
        }
        branches = next;
    }
    Ok(branches)
}

/// Uniform average of the NAQC value over the given branches.
pub fn averaged_naqc(branches: &[ChainBranch], measure: CoherenceMeasure, target: Sharpness) -> Result<f64> {
    let mut sum = 0.0;
    for b in branches {
        sum += naqc_value(&b.state, measure, target)?;
    }
    Ok(sum / branches.len() as f64)
}

/// Per-branch NAQC value of the target Alice, in canonical branch order.
pub fn chain_contributions(initial: &DensityMatrix, config: &ScenarioConfig) -> Result<Vec<(Vec<PauliAxis>, f64)>> {
    predecessor_branches(initial, config.predecessors())?
        .into_iter()
        .map(|b| {
            let v = naqc_value(&b.state, config.measure(), config.target())?;
            Ok((b.settings, v))
        })
        .collect()
}

/// Averaged NAQC value of the last Alice in `config`.
pub fn sequential_naqc(initial: &DensityMatrix, config: &ScenarioConfig) -> Result<NaqcResult> {
    let branches = predecessor_branches(initial, config.predecessors())?;
    let value = averaged_naqc(&branches, config.measure(), config.target())?;
    let bound = config.measure().bound();
    Ok(NaqcResult {
        value,
        bound,
        violated: value > bound,
        config: config.clone(),
    })
}

/// Sharpness of the target Alice at which her averaged NAQC value on the
/// singlet crosses the bound, with the given predecessors fixed.
pub fn threshold_simulated(measure: CoherenceMeasure, predecessors: &[Sharpness]) -> Result<f64> {
    ScenarioConfig::new(
        predecessors.iter().copied().chain([Sharpness::SHARP]).collect(),
        measure,
    )?;
    let branches = predecessor_branches(&singlet(), predecessors)?;
    let f = |lambda: f64| -> f64 {
        let s = Sharpness::new(lambda).expect("bisection stays inside (0, 1]");
        averaged_naqc(&branches, measure, s).unwrap_or(f64::NAN)
    };
    solve_threshold(f, measure.bound(), 1e-6, 1.0)
}

/// Outcome of the search for the longest chain of Alices that all violate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MaxAlicesReport {
    pub measure: CoherenceMeasure,
    pub count: usize,
    /// Sharpness chain attaining `count` simultaneous violations with the
    /// largest worst-case margin on the grid.
    pub witness: Vec<f64>,
    /// Smallest violation margin along the witness chain.
    pub witness_margin: f64,
    /// Feasible interval of λ₁ with the other witness entries held fixed,
    /// refined by bisection. Present when `count >= 2`.
    pub lambda1_window: Option<(f64, f64)>,
    pub grid_step: f64,
}

fn sharp_grid(step: f64) -> Vec<f64> {
    let count = ((1.0 - 1e-12) / step).floor() as usize;
    (1..=count)
        .map(|k| k as f64 * step)
        .filter(|&l| l < 1.0)
        .collect()
}

fn margin_after(preds: &[f64], target: f64, measure: CoherenceMeasure) -> Result<f64> {
    let preds = preds
        .iter()
        .map(|&l| Sharpness::new(l))
        .collect::<Result<Vec<_>>>()?;
    let branches = predecessor_branches(&singlet(), &preds)?;
    Ok(averaged_naqc(&branches, measure, Sharpness::new(target)?)? - measure.bound())
}

/// Worst violation margin over every Alice in `chain` (positive ⇔ all violate).
pub fn chain_margin(chain: &[f64], measure: CoherenceMeasure) -> Result<f64> {
    let mut worst = f64::INFINITY;
    for k in 0..chain.len() {
        worst = worst.min(margin_after(&chain[..k], chain[k], measure)?);
    }
    Ok(worst)
}

/// Largest number of sequential Alices on a shared singlet who can all violate
/// the NAQC bound for `measure`, each with the sharpness she actually uses.
///
/// Predecessor sharpness values are searched on a grid of spacing `grid_step`;
/// the final Alice is sharp unless `final_sharp` is false, in which case her
/// sharpness is searched on the same grid as well. The search stops at the
/// first chain length with no feasible grid point.
pub fn max_alices(measure: CoherenceMeasure, grid_step: f64, final_sharp: bool) -> Result<MaxAlicesReport> {
    if !(grid_step > 0.0 && grid_step <= 0.1) {
        return Err(Error::InvalidGridStep(grid_step));
    }
    let grid = sharp_grid(grid_step);
    let finals: Vec<f64> = if final_sharp {
        vec![1.0]
    } else {
        grid.iter().copied().chain([1.0]).collect()
    };

    let best_final = |preds: &[f64]| -> Result<Option<(f64, f64)>> {
        let mut best: Option<(f64, f64)> = None;
        for &f in &finals {
            let m = margin_after(preds, f, measure)?;
            if m > 0.0 && best.is_none_or(|(_, bm)| m > bm) {
                best = Some((f, m));
            }
        }
        Ok(best)
    };

    let mut report = MaxAlicesReport {
        measure,
        count: 0,
        witness: Vec::new(),
        witness_margin: f64::NEG_INFINITY,
        lambda1_window: None,
        grid_step,
    };

    let Some((f, m)) = best_final(&[])? else {
        return Ok(report);
    };
    report.count = 1;
    report.witness = vec![f];
    report.witness_margin = m;

    // feasible predecessor prefixes with their worst margin so far
    let mut feasible: Vec<(Vec<f64>, f64)> = vec![(Vec::new(), f64::INFINITY)];
    for n in 2..=MAX_SEARCH_DEPTH {
        let extended: Vec<(Vec<f64>, f64)> = feasible
            .par_iter()
            .map(|(prefix, worst)| -> Result<Vec<(Vec<f64>, f64)>> {
                let preds = prefix
                    .iter()
                    .map(|&l| Sharpness::new(l))
                    .collect::<Result<Vec<_>>>()?;
                let branches = predecessor_branches(&singlet(), &preds)?;
                let mut out = Vec::new();
                for &l in &grid {
                    let m = averaged_naqc(&branches, measure, Sharpness::new(l)?)? - measure.bound();
                    if m > 0.0 {
                        let mut p = prefix.clone();
                        p.push(l);
                        out.push((p, worst.min(m)));
                    }
                }
                Ok(out)
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect();
        if extended.is_empty() {
            break;
        }

        let completions: Vec<Option<(Vec<f64>, f64)>> = extended
            .par_iter()
            .map(|(prefix, worst)| -> Result<Option<(Vec<f64>, f64)>> {
                Ok(best_final(prefix)?.map(|(f, m)| {
                    let mut chain = prefix.clone();
                    chain.push(f);
                    (chain, worst.min(m))
                }))
            })
            .collect::<Result<Vec<_>>>()?;

        let mut best: Option<(Vec<f64>, f64)> = None;
        for (chain, m) in completions.into_iter().flatten() {
            if best.as_ref().is_none_or(|(_, bm)| m > *bm) {
                best = Some((chain, m));
            }
        }
        let Some((chain, m)) = best else {
            break;
        };
        report.count = n;
        report.witness = chain;
        report.witness_margin = m;
        feasible = extended;
    }

    if report.count >= 2 {
        report.lambda1_window = Some(refine_first_window(&report.witness, measure, grid_step)?);
    }
    Ok(report)
}

/// Walks λ₁ away from the witness on the grid until the chain stops being
/// feasible, then bisects each edge.
fn refine_first_window(witness: &[f64], measure: CoherenceMeasure, step: f64) -> Result<(f64, f64)> {
    let feasible = |l1: f64| -> Result<bool> {
        let mut chain = witness.to_vec();
        chain[0] = l1;
        Ok(chain_margin(&chain, measure)? > 0.0)
    };
    let edge = |direction: f64, limit: f64| -> Result<f64> {
        let mut inside = witness[0];
        loop {
            let probe = inside + direction * step;
            if (direction < 0.0 && probe <= limit) || (direction > 0.0 && probe >= limit) {
                return bisect_edge(&feasible, inside, limit, direction);
            }
            if !feasible(probe)? {
                return bisect_edge(&feasible, inside, probe, direction);
            }
            inside = probe;
        }
    };
    Ok((edge(-1.0, 0.0)?, edge(1.0, 1.0)?))
}

fn bisect_edge(
    feasible: &impl Fn(f64) -> Result<bool>,
    mut inside: f64,
    mut outside: f64,
    direction: f64,
) -> Result<f64> {
    // the domain edge itself is excluded; shrink toward it instead
    let open_edge = outside <= 0.0 || outside >= 1.0;
    if open_edge {
        outside -= direction * 1e-12;
        if feasible(outside)? {
            return Ok(outside);
        }
    }
    for _ in 0..200 {
        if (outside - inside).abs() <= 1e-12 {
            break;
        }
        let mid = 0.5 * (inside + outside);
        if feasible(mid)? {
            inside = mid;
        } else {
            outside = mid;
        }
    }
    Ok(0.5 * (inside + outside))
}
