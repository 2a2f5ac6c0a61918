//! Finite mixtures of product pure states: the parametrization of the fully
//! separable set.

use rand::Rng;
use serde_json::{json, Value};

use crate::error::{invalid, Result};
use crate::linalg::{kron_vectors, zeros};
use crate::party::PartyStructure;
use crate::rng::haar_vector;
use crate::scalar::{lit, to_f64, CVector, Real, C};
use crate::state::QuantumState;

const ENSEMBLE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct ProductTerm<T: Real> {
    pub weight: T,
    /// One normalized local vector per party.
    pub factors: Vec<CVector<T>>,
}

impl<T: Real> ProductTerm<T> {
    /// The full product vector ⊗ⱼ |aⱼ⟩.
    pub fn vector(&self) -> CVector<T> {
        kron_vectors(&self.factors)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeparableEnsemble<T: Real> {
    structure: PartyStructure,
    terms: Vec<ProductTerm<T>>,
}

impl<T: Real> SeparableEnsemble<T> {
    pub fn new(structure: PartyStructure, terms: Vec<ProductTerm<T>>) -> Result<Self> {
        if terms.is_empty() {
            return invalid("ensemble has no terms");
        }
        let tol: T = lit(ENSEMBLE_TOL.max(crate::scalar::to_f64(T::machine_epsilon()) * 1e3));
        let mut total = T::zero();
        for (k, t) in terms.iter().enumerate() {
            if t.weight < T::zero() || !t.weight.is_finite() {
                return invalid(format!("term {k} has weight {}", to_f64(t.weight)));
            }
            total += t.weight;
            if t.factors.len() != structure.parties() {
                return invalid(format!(
                    "term {k} has {} factors for {} parties",
                    t.factors.len(),
                    structure.parties()
                ));
            }
            for (j, (f, &d)) in t.factors.iter().zip(structure.dims()).enumerate() {
                if f.len() != d {
                    return invalid(format!("term {k} factor {j} has length {}, expected {d}", f.len()));
                }
                if (f.norm() - T::one()).abs() > tol {
                    return invalid(format!("term {k} factor {j} is not normalized"));
                }
            }
        }
        if (total - T::one()).abs() > tol {
            return invalid(format!("weights sum to {}, expected 1", to_f64(total)));
        }
        Ok(Self { structure, terms })
    }

    /// Trusted constructor used by the optimizer, which maintains the invariants itself.
    pub(crate) fn from_parts(structure: PartyStructure, terms: Vec<ProductTerm<T>>) -> Self {
        Self { structure, terms }
    }

    /// Uniform mixture of the product basis built from one orthonormal basis
    /// per party (columns of `bases[j]`). Its density is always I/D.
    pub fn product_basis(structure: PartyStructure, bases: &[crate::scalar::CMatrix<T>]) -> Result<Self> {
        if bases.len() != structure.parties() {
            return invalid("one local basis per party is required");
        }
        let d = structure.total_dim();
        let w = T::one() / lit(d as f64);
        let terms = (0..d)
            .map(|i| {
                let digits = structure.digits(i);
                ProductTerm {
                    weight: w,
                    factors: digits
                        .iter()
                        .zip(bases)
                        .map(|(&x, b)| b.column(x).into_owned())
                        .collect(),
                }
            })
            .collect();
        Self::new(structure, terms)
    }

    /// `k` Haar-random product states with exponentially distributed (flat Dirichlet) weights.
    pub fn random<R: Rng + ?Sized>(structure: &PartyStructure, k: usize, rng: &mut R) -> Result<Self> {
        if k == 0 {
            return invalid("ensemble size must be positive");
        }
        let raw: Vec<f64> = (0..k).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
        let sum: f64 = raw.iter().sum();
        let terms = raw
            .iter()
            .map(|&w| ProductTerm {
                weight: lit(w / sum),
                factors: structure.dims().iter().map(|&d| haar_vector(d, rng)).collect(),
            })
            .collect();
        Self::new(structure.clone(), terms)
    }

    pub fn structure(&self) -> &PartyStructure {
        &self.structure
    }

    pub fn terms(&self) -> &[ProductTerm<T>] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn to_state(&self) -> QuantumState<T> {
        let d = self.structure.total_dim();
        let mut m = zeros::<T>(d);
        for t in &self.terms {
            let v = t.vector();
            let w = C::new(t.weight, T::zero());
            m.ger(w, &v, &v.conjugate(), C::new(T::one(), T::zero()));
        }
        QuantumState::from_parts(self.structure.clone(), m)
    }
}

/// Density matrix Σₖ pₖ ⊗ⱼ |aₖʲ⟩⟨aₖʲ|.
pub fn ensemble_to_state<T: Real>(e: &SeparableEnsemble<T>) -> QuantumState<T> {
    e.to_state()
}

impl SeparableEnsemble<f64> {
    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|t| {
                json!({
                    "weight": t.weight,
                    "factors": t.factors.iter().map(|f| {
                        f.iter().map(|z| json!([z.re, z.im])).collect::<Vec<_>>()
                    }).collect::<Vec<_>>(),
                })
            })
            .collect();
        json!({ "dims": self.structure.dims(), "terms": terms })
    }
}
