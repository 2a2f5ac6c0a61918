//! Entropic primitives in bits.
//!
//! Everything goes through a Hermitian eigendecomposition; there is no
//! series expansion of the matrix logarithm.

use crate::error::{invalid, Result};
use crate::linalg::{eigh, expectation};
use crate::scalar::{lit, log2, CMatrix, Real};
use crate::state::QuantumState;

/// Eigenvalues of ρ below this fraction of its largest eigenvalue count as
/// outside the support.
pub const SUPPORT_RELATIVE_THRESHOLD: f64 = 1e-12;

/// Weight σ may place on the null space of ρ before S(σ‖ρ) is declared infinite.
pub const SUPPORT_LEAK_TOLERANCE: f64 = 1e-9;

/// −Σ λ log₂ λ of a spectrum, with 0·log 0 = 0 and negatives treated as 0.
pub(crate) fn spectrum_entropy<T: Real>(values: impl IntoIterator<Item = T>) -> T {
    let s = values
        .into_iter()
        .filter(|&l| l > T::zero())
        .fold(T::zero(), |acc, l| acc - l * log2(l));
    clamp_bits(s)
}

/// Clamps floating-point noise below zero to zero.
pub(crate) fn clamp_bits<T: Real>(x: T) -> T {
    if x < T::zero() {
        T::zero()
    } else {
        x
    }
}

pub fn von_neumann_entropy<T: Real>(rho: &QuantumState<T>) -> T {
    spectrum_entropy(rho.eigenvalues())
}

/// Binary entropy h(p) in bits.
pub fn binary_entropy<T: Real>(p: T) -> T {
    spectrum_entropy([p, T::one() - p])
}

/// S(σ‖ρ) = tr σ log₂σ − tr σ log₂ρ, or +∞ when supp σ ⊄ supp ρ.
pub fn quantum_relative_entropy<T: Real>(sigma: &QuantumState<T>, rho: &QuantumState<T>) -> Result<T> {
    if sigma.structure() != rho.structure() {
        return invalid(format!(
            "relative entropy between structures {:?} and {:?}",
            sigma.structure().dims(),
            rho.structure().dims()
        ));
    }
    Ok(relative_entropy_matrices(
        sigma.matrix(),
        von_neumann_entropy(sigma),
        rho.matrix(),
    ))
}

/// Core of [`quantum_relative_entropy`] on raw matrices with S(σ) supplied.
pub(crate) fn relative_entropy_matrices<T: Real>(
    sigma: &CMatrix<T>,
    sigma_entropy: T,
    rho: &CMatrix<T>,
) -> T {
    let eig = eigh(rho);
    let n = eig.values.len();
    let top = eig.values[n - 1];
    let cutoff = top * lit(SUPPORT_RELATIVE_THRESHOLD);
    let mut leak = T::zero();
    let mut cross = T::zero();
    for i in 0..n {
        let u = eig.vectors.column(i).into_owned();
        let w = expectation(sigma, &u);
        let lambda = eig.values[i];
        if lambda <= cutoff {
            leak += w;
        } else {
            cross -= w * log2(lambda);
        }
    }
    if leak > lit(SUPPORT_LEAK_TOLERANCE) {
        return lit(f64::INFINITY);
    }
    clamp_bits(cross - sigma_entropy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::named::{make_named_state, NamedState};
    use crate::party::PartyStructure;
    use crate::state::PureState;
    use nalgebra::Complex;

    fn qubit(m: [f64; 4]) -> QuantumState<f64> {
        QuantumState::new(
            PartyStructure::qubits(1).unwrap(),
            CMatrix::from_row_slice(2, 2, &m.map(|x| Complex::new(x, 0.0))),
        )
        .unwrap()
    }

    #[test]
    fn entropy_examples() {
        let w = make_named_state::<f64>(&NamedState::W, PartyStructure::qubits(3).unwrap()).unwrap();
        assert!(von_neumann_entropy(&w.to_density()) < 1e-12);
        assert!((von_neumann_entropy(&qubit([0.5, 0.0, 0.0, 0.5])) - 1.0).abs() < 1e-14);
        let single = w.to_density().partial_trace(&[0]).unwrap();
        let expect = 3f64.log2() - 2.0 / 3.0;
        assert!((von_neumann_entropy(&single) - expect).abs() < 1e-12);
        assert!((expect - 0.918296).abs() < 1e-6);
    }

    #[test]
    fn relative_entropy_examples() {
        let zero = qubit([1.0, 0.0, 0.0, 0.0]);
        let one = qubit([0.0, 0.0, 0.0, 1.0]);
        let mixed = qubit([0.5, 0.0, 0.0, 0.5]);
        assert!(quantum_relative_entropy(&mixed, &mixed).unwrap().abs() < 1e-14);
        assert!((quantum_relative_entropy(&zero, &mixed).unwrap() - 1.0).abs() < 1e-14);
        assert_eq!(quantum_relative_entropy(&zero, &one).unwrap(), f64::INFINITY);
        // Support inclusion is fine in the other direction.
        assert!(quantum_relative_entropy(&zero, &zero).unwrap().abs() < 1e-14);
    }

    #[test]
    fn relative_entropy_structure_mismatch() {
        let a = QuantumState::<f64>::maximally_mixed(PartyStructure::qubits(2).unwrap());
        let b = QuantumState::<f64>::maximally_mixed(PartyStructure::new(vec![4]).unwrap());
        assert!(quantum_relative_entropy(&a, &b).is_err());
    }

    #[test]
    fn binary_entropy_values() {
        assert_eq!(binary_entropy(0.0f64), 0.0);
        assert!((binary_entropy(0.5f64) - 1.0).abs() < 1e-15);
        assert!((binary_entropy(0.11f64) - binary_entropy(0.89)).abs() < 1e-15);
    }

    #[test]
    fn single_precision_entropy() {
        let w = make_named_state::<f32>(&NamedState::W, PartyStructure::qubits(3).unwrap()).unwrap();
        let single = w.to_density().partial_trace(&[2]).unwrap();
        let expect = 3f32.log2() - 2.0 / 3.0;
        assert!((von_neumann_entropy(&single) - expect).abs() < 1e-5);
        let p = PureState::<f32>::basis(PartyStructure::qubits(2).unwrap(), &[0, 1]).unwrap();
        assert!(von_neumann_entropy(&p.to_density()) < 1e-6);
    }
}
