//! Named state families: EPR, GHZ-like, W, and e|100⟩ + f|010⟩ + f|001⟩.

use std::fmt;
use std::str::FromStr;

use nalgebra::Complex;

use crate::error::{invalid, Error, Result};
use crate::party::PartyStructure;
use crate::scalar::{lit, CVector, Real};
use crate::state::PureState;

#[derive(Debug, Clone, PartialEq)]
pub enum NamedState {
    /// (|00⟩ + |11⟩)/√2 on parties 0 and 1, every other party in |0⟩.
    Epr,
    /// α|0…0⟩ + β|1…1⟩ across all parties, β = √(1 − |α|²).
    Ghz { alpha: Complex<f64> },
    /// Equal superposition of single excitations across all parties.
    W,
    /// e|100⟩ + f|010⟩ + f|001⟩ on three parties.
    PsiEff { e: Complex<f64>, f: Complex<f64> },
}

impl NamedState {
    pub fn ghz(alpha: f64) -> Self {
        Self::Ghz {
            alpha: Complex::new(alpha, 0.0),
        }
    }

    pub fn psi_eff(e: f64, f: f64) -> Self {
        Self::PsiEff {
            e: Complex::new(e, 0.0),
            f: Complex::new(f, 0.0),
        }
    }

    /// Number of parties the state lives on by default.
    pub fn default_parties(&self) -> usize {
        match self {
            Self::Epr => 2,
            _ => 3,
        }
    }
}

fn fmt_complex(z: &Complex<f64>) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else {
        format!("{}{:+}i", z.re, z.im)
    }
}

impl fmt::Display for NamedState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Epr => write!(f, "epr"),
            Self::Ghz { alpha } => write!(f, "ghz:{}", fmt_complex(alpha)),
            Self::W => write!(f, "w"),
            Self::PsiEff { e, f: ff } => write!(f, "psieff:{},{}", fmt_complex(e), fmt_complex(ff)),
        }
    }
}

fn parse_real(s: &str, what: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| Error::InvalidArgument(format!("{what}: `{s}` is not a finite number")))
}

impl FromStr for NamedState {
    type Err = Error;

    /// Grammar: `epr`, `ghz:<alpha>`, `w`, `psieff:<e>,<f>` (real parameters).
    fn from_str(s: &str) -> Result<Self> {
        let (head, arg) = match s.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (s, None),
        };
        match (head.to_ascii_lowercase().as_str(), arg) {
            ("epr", None) => Ok(Self::Epr),
            ("w", None) => Ok(Self::W),
            ("ghz", None) => Ok(Self::ghz(std::f64::consts::FRAC_1_SQRT_2)),
            ("ghz", Some(a)) => Ok(Self::ghz(parse_real(a, "ghz alpha")?)),
            ("psieff", Some(a)) => {
                let (e, f) = a.split_once(',').ok_or_else(|| {
                    Error::InvalidArgument(format!("psieff expects `<e>,<f>`, got `{a}`"))
                })?;
                Ok(Self::psi_eff(parse_real(e, "psieff e")?, parse_real(f, "psieff f")?))
            }
            _ => invalid(format!("unknown named state `{s}`")),
        }
    }
}

fn cast<T: Real>(z: Complex<f64>) -> Complex<T> {
    Complex::new(lit(z.re), lit(z.im))
}

/// Builds the named state on `embedding`.
pub fn make_named_state<T: Real>(name: &NamedState, embedding: PartyStructure) -> Result<PureState<T>> {
    let n = embedding.parties();
    let dim = embedding.total_dim();
    let mut amps = CVector::<T>::zeros(dim);
    let one_at = |parties: &[usize]| {
        let mut digits = vec![0; n];
        for &p in parties {
            digits[p] = 1;
        }
        embedding.index(&digits)
    };
    match name {
        NamedState::Epr => {
            if n < 2 {
                return invalid("epr needs at least two parties");
            }
            let s = cast::<T>(Complex::new(std::f64::consts::FRAC_1_SQRT_2, 0.0));
            amps[0] = s;
            amps[one_at(&[0, 1])] = s;
        }
        NamedState::Ghz { alpha } => {
            if n < 2 {
                return invalid("ghz needs at least two parties");
            }
            let a2 = alpha.norm_sqr();
            if a2 > 1.0 + 1e-12 {
                return invalid(format!("ghz alpha {} has |alpha| > 1", fmt_complex(alpha)));
            }
            let beta = (1.0 - a2).max(0.0).sqrt();
            amps[0] = cast(*alpha);
            let all: Vec<usize> = (0..n).collect();
            amps[one_at(&all)] = cast(Complex::new(beta, 0.0));
        }
        NamedState::W => {
            if n < 2 {
                return invalid("w needs at least two parties");
            }
            let c = cast::<T>(Complex::new(1.0 / (n as f64).sqrt(), 0.0));
            for p in 0..n {
                amps[one_at(&[p])] = c;
            }
        }
        NamedState::PsiEff { e, f } => {
            if n != 3 {
                return invalid(format!("psieff is a three-party state, got {n} parties"));
            }
            let norm = e.norm_sqr() + 2.0 * f.norm_sqr();
            if (norm - 1.0).abs() > 1e-9 {
                return invalid(format!(
                    "psieff needs |e|^2 + 2|f|^2 = 1, got {norm}"
                ));
            }
            amps[one_at(&[0])] = cast(*e);
            amps[one_at(&[1])] = cast(*f);
            amps[one_at(&[2])] = cast(*f);
        }
    }
    PureState::normalized(embedding, amps)
}

/// Builds the named state on its default number of qubits.
pub fn named_state<T: Real>(name: &NamedState) -> Result<PureState<T>> {
    make_named_state(name, PartyStructure::qubits(name.default_parties())?)
}
