//! Relative entropy of entanglement for bi- and multipartite quantum states.
//!
//! The linear algebra and the optimizer are generic over the real scalar
//! ([`Real`], implemented for `f32` and `f64`); the aliases below fix the
//! precision for the common case. Entropies are in bits throughout.

pub mod bounds;
pub mod ensemble;
pub mod entropy;
pub mod error;
pub mod io;
mod linalg;
pub mod mregs;
pub mod named;
pub mod optimizer;
pub mod party;
pub mod rng;
pub mod scalar;
pub mod state;

pub use bounds::{
    conjecture_half_sum, corollary_bounds, lower_bound_theorem1, nparty_bounds, upper_bound_theorem1,
    verify_inequality_bi, verify_inequality_tri, BoundsReport,
};
pub use ensemble::{ensemble_to_state, ProductTerm, SeparableEnsemble};
pub use entropy::{binary_entropy, quantum_relative_entropy, von_neumann_entropy};
pub use error::{Error, Result};
pub use linalg::max_abs_diff;
pub use mregs::{mregs_decompose, predicted_e3_average_form, MregsDecomposition};
pub use named::{make_named_state, named_state, NamedState};
pub use optimizer::{pure_state_ree_oracle, relative_entropy_of_entanglement, OptimizerConfig, ReeResult};
pub use party::{party_label, PartyStructure};
pub use rng::haar_random_pure;
pub use scalar::Real;
pub use state::{from_pure, PureState, QuantumState};

pub type State = QuantumState<f64>;
pub type Pure = PureState<f64>;
pub type Ensemble = SeparableEnsemble<f64>;
pub type Ree = ReeResult<f64>;

pub type StateF32 = QuantumState<f32>;
pub type PureF32 = PureState<f32>;
pub type EnsembleF32 = SeparableEnsemble<f32>;
pub type ReeF32 = ReeResult<f32>;
