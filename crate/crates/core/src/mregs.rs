//! GHZ/singlet accounting for tripartite pure states.
//!
//! If GHZ states and singlets generate every tripartite pure state
//! reversibly, a state is worth g GHZs and s_XY singlets between each pair,
//! with S_A = g + s_AB + s_AC (and cyclically), s_XY = E₂^∞(σ_XY) and
//! E₃ = g + s_AB + s_AC + s_BC. The regularized E₂^∞ is replaced by the
//! single-copy E₂ here, which every output records.

use serde::{Deserialize, Serialize};

use crate::entropy::von_neumann_entropy;
use crate::error::{invalid, Result};
use crate::optimizer::{relative_entropy_of_entanglement, OptimizerConfig};
use crate::state::PureState;

pub const APPROXIMATION: &str = "single-copy";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MregsDecomposition {
    pub g: f64,
    pub s_ab: f64,
    pub s_ac: f64,
    pub s_bc: f64,
    /// Largest disagreement between the three estimates of g.
    pub residual: f64,
    pub predicted_e3: f64,
    pub approximation: String,
}

impl MregsDecomposition {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("decomposition serializes")
    }
}

fn check(psi: &PureState<f64>) -> Result<()> {
    let n = psi.structure().parties();
    if n != 3 {
        return invalid(format!("expected a tripartite pure state, got {n} parties"));
    }
    Ok(())
}

pub fn mregs_decompose(psi: &PureState<f64>, cfg: &OptimizerConfig) -> Result<MregsDecomposition> {
    check(psi)?;
    let rho = psi.to_density();
    let e2 = |keep: &[usize]| -> Result<f64> {
        Ok(relative_entropy_of_entanglement(&rho.partial_trace(keep)?, cfg)?.value)
    };
    let s_ab = e2(&[0, 1])?;
    let s_ac = e2(&[0, 2])?;
    let s_bc = e2(&[1, 2])?;
    let entropy = |p: usize| -> Result<f64> { Ok(von_neumann_entropy(&rho.partial_trace(&[p])?)) };

    let estimates = [
        entropy(0)? - s_ab - s_ac,
        entropy(1)? - s_ab - s_bc,
        entropy(2)? - s_ac - s_bc,
    ];
    let g = estimates.iter().sum::<f64>() / 3.0;
    let mut residual = 0.0f64;
    for i in 0..3 {
        for j in i + 1..3 {
            residual = residual.max((estimates[i] - estimates[j]).abs());
        }
    }
    Ok(MregsDecomposition {
        g,
        s_ab,
        s_ac,
        s_bc,
        residual,
        predicted_e3: g + s_ab + s_ac + s_bc,
        approximation: APPROXIMATION.to_string(),
    })
}

/// (1/3)ΣE₂(pair) + (1/3)ΣS(party), evaluated from the pair complements.
pub fn predicted_e3_average_form(psi: &PureState<f64>, cfg: &OptimizerConfig) -> Result<f64> {
    check(psi)?;
    let rho = psi.to_density();
    let mut total = 0.0;
    for dropped in 0..3 {
        let keep: Vec<usize> = (0..3).filter(|&p| p != dropped).collect();
        let pair = rho.partial_trace(&keep)?;
        // For a pure state S(pair) equals the entropy of the dropped party.
        total += relative_entropy_of_entanglement(&pair, cfg)?.value + von_neumann_entropy(&pair);
    }
    Ok(total / 3.0)
}
