//! Entropic bounds on the tripartite (and n-party) REE of pure states.
//!
//! For a pure state on parties A, B, C:
//!
//! * lower: max over pairs P of E₂(σ_P) + S(σ_P);
//! * upper: min over pairs of S(σ_X) + S(σ_Y);
//! * averaged forms of both over the three pairs;
//! * the conjectured sharper upper bound ½(S_A + S_B + S_C).
//!
//! With n parties the pair is replaced by "everyone but X": the lower bound
//! peels one party off, E_{n−1}(tr_X σ) + S(tr_X σ), and the upper bound
//! sums the entropies of all parties except the best single preparer X.

use serde::{Deserialize, Serialize};

use crate::entropy::{quantum_relative_entropy, von_neumann_entropy};
use crate::ensemble::SeparableEnsemble;
use crate::error::{invalid, Result};
use crate::optimizer::{relative_entropy_of_entanglement, OptimizerConfig};
use crate::party::party_label;
use crate::state::{PureState, QuantumState};

/// Agreement within this many bits counts as saturation.
pub const SATURATION_TOLERANCE: f64 = 5e-3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub state_label: String,
    pub e3_estimate: f64,
    pub lower_thm1: f64,
    pub lower_witness: String,
    pub upper_thm1: f64,
    pub upper_witness: String,
    pub corollary_lower: f64,
    pub corollary_upper: f64,
    pub conjecture_half_sum: f64,
    /// e3_estimate − lower_thm1.
    pub slack_lower: f64,
    /// upper_thm1 − e3_estimate.
    pub slack_upper: f64,
    pub saturated_lower: bool,
    pub saturated_upper: bool,
    /// Optimizer gap estimate attached to e3_estimate.
    pub gap_estimate: f64,
}

impl BoundsReport {
    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.state_label = label.into();
        self
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

/// One "everyone but X" reduction.
struct Peel {
    label: String,
    ree: f64,
    entropy: f64,
}

fn require_parties(psi: &PureState<f64>, exact: Option<usize>) -> Result<usize> {
    let n = psi.structure().parties();
    match exact {
        Some(k) if n != k => invalid(format!("expected a {k}-party pure state, got {n} parties")),
        None if n < 3 => invalid(format!("need at least 3 parties, got {n}")),
        _ => Ok(n),
    }
}

fn single_entropies(psi: &PureState<f64>) -> Result<Vec<f64>> {
    let rho = psi.to_density();
    (0..psi.structure().parties())
        .map(|p| Ok(von_neumann_entropy(&rho.partial_trace(&[p])?)))
        .collect()
}

/// Parties are dropped from the last to the first, so for three parties the
/// reductions come out in the order AB, AC, BC.
fn peels(psi: &PureState<f64>, cfg: &OptimizerConfig) -> Result<Vec<Peel>> {
    let rho = psi.to_density();
    let n = psi.structure().parties();
    (0..n)
        .rev()
        .map(|x| {
            let keep = psi.structure().complement(&[x]);
            let reduced = rho.partial_trace(&keep)?;
            Ok(Peel {
                label: party_label(&keep),
                ree: relative_entropy_of_entanglement(&reduced, cfg)?.value,
                entropy: von_neumann_entropy(&reduced),
            })
        })
        .collect()
}

fn max_peel(peels: &[Peel]) -> (f64, String) {
    let mut best = (f64::NEG_INFINITY, String::new());
    for p in peels {
        let v = p.ree + p.entropy;
        if v > best.0 {
            best = (v, p.label.clone());
        }
    }
    best
}

/// min over X of Σ_{Y≠X} S_Y with its witness set.
fn min_preparer(s: &[f64]) -> (f64, String) {
    let total: f64 = s.iter().sum();
    let n = s.len();
    let mut best = (f64::INFINITY, String::new());
    for x in (0..n).rev() {
        let v = total - s[x];
        if v < best.0 {
            let rest: Vec<usize> = (0..n).filter(|&y| y != x).collect();
            best = (v, party_label(&rest));
        }
    }
    best
}

pub fn lower_bound_theorem1(psi: &PureState<f64>, cfg: &OptimizerConfig) -> Result<(f64, String)> {
    require_parties(psi, Some(3))?;
    Ok(max_peel(&peels(psi, cfg)?))
}

pub fn upper_bound_theorem1(psi: &PureState<f64>) -> Result<(f64, String)> {
    require_parties(psi, Some(3))?;
    Ok(min_preparer(&single_entropies(psi)?))
}

/// Averages of the lower and upper bounds over all three pairs.
pub fn corollary_bounds(psi: &PureState<f64>, cfg: &OptimizerConfig) -> Result<(f64, f64)> {
    require_parties(psi, Some(3))?;
    let s = single_entropies(psi)?;
    let total: f64 = s.iter().sum();
    let pairs = peels(psi, cfg)?;
    let e2: f64 = pairs.iter().map(|p| p.ree).sum();
    Ok((e2 / 3.0 + total / 3.0, 2.0 * total / 3.0))
}

pub fn conjecture_half_sum(psi: &PureState<f64>) -> Result<f64> {
    require_parties(psi, Some(3))?;
    Ok(single_entropies(psi)?.iter().sum::<f64>() / 2.0)
}

/// All bounds for a pure state on n ≥ 3 parties, plus the optimizer's
/// estimate of E_n itself. At n = 3 the fields are exactly the tripartite
/// bounds above.
pub fn nparty_bounds(psi: &PureState<f64>, cfg: &OptimizerConfig) -> Result<BoundsReport> {
    let n = require_parties(psi, None)?;
    let s = single_entropies(psi)?;
    let total: f64 = s.iter().sum();
    let peeled = peels(psi, cfg)?;
    let (lower, lower_witness) = max_peel(&peeled);
    let (upper, upper_witness) = min_preparer(&s);
    let nf = n as f64;
    let corollary_lower = peeled.iter().map(|p| p.ree + p.entropy).sum::<f64>() / nf;
    let corollary_upper = (nf - 1.0) * total / nf;

    let full = relative_entropy_of_entanglement(&psi.to_density(), cfg)?;
    let e = full.value;
    Ok(BoundsReport {
        state_label: String::new(),
        e3_estimate: e,
        lower_thm1: lower,
        lower_witness,
        upper_thm1: upper,
        upper_witness,
        corollary_lower,
        corollary_upper,
        conjecture_half_sum: total / 2.0,
        slack_lower: e - lower,
        slack_upper: upper - e,
        saturated_lower: (e - lower).abs() < SATURATION_TOLERANCE,
        saturated_upper: (upper - e).abs() < SATURATION_TOLERANCE,
        gap_estimate: full.gap_estimate,
    })
}

/// [S(σ‖ρ) − S(σ_K‖ρ_K)] − [S(σ_K) − S(σ)] with K = `keep`; +∞ when σ leaves
/// the support of ρ.
fn chain_inequality(sigma: &QuantumState<f64>, rho: &SeparableEnsemble<f64>, keep: &[usize]) -> Result<f64> {
    if sigma.structure() != rho.structure() {
        return invalid("σ and ρ have different party structures");
    }
    let rho = rho.to_state();
    let full = quantum_relative_entropy(sigma, &rho)?;
    if full.is_infinite() {
        return Ok(f64::INFINITY);
    }
    let sigma_k = sigma.partial_trace(keep)?;
    let part = quantum_relative_entropy(&sigma_k, &rho.partial_trace(keep)?)?;
    Ok((full - part) - (von_neumann_entropy(&sigma_k) - von_neumann_entropy(sigma)))
}

/// Bipartite chain inequality, nonnegative for every separable ρ.
pub fn verify_inequality_bi(sigma: &QuantumState<f64>, rho: &SeparableEnsemble<f64>) -> Result<f64> {
    if sigma.structure().parties() != 2 {
        return invalid("expected a bipartite state");
    }
    chain_inequality(sigma, rho, &[0])
}

/// Tripartite chain inequality, nonnegative for every fully separable ρ.
pub fn verify_inequality_tri(sigma: &QuantumState<f64>, rho: &SeparableEnsemble<f64>) -> Result<f64> {
    if sigma.structure().parties() != 3 {
        return invalid("expected a tripartite state");
    }
    chain_inequality(sigma, rho, &[0, 1])
}
