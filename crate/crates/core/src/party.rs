//! Party structure of a composite Hilbert space.
//!
//! Basis states are indexed big-endian: party 0 is the most significant
//! digit, so on three qubits `|100⟩` has index 4.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Largest total dimension accepted anywhere in the crate.
pub const MAX_DIMENSION: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct PartyStructure {
    dims: Vec<usize>,
}

impl PartyStructure {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return invalid("party structure needs at least one party");
        }
        if let Some((i, d)) = dims.iter().enumerate().find(|(_, &d)| d < 2) {
            return invalid(format!("party {i} has local dimension {d}, expected >= 2"));
        }
        let total = dims
            .iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d))
            .filter(|&t| t <= MAX_DIMENSION);
        if total.is_none() {
            return invalid(format!(
                "total dimension of {dims:?} exceeds {MAX_DIMENSION}"
            ));
        }
        Ok(Self { dims })
    }

    /// `n` qubits.
    pub fn qubits(n: usize) -> Result<Self> {
        Self::new(vec![2; n])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn parties(&self) -> usize {
        self.dims.len()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    /// Splits a flat basis index into per-party digits.
    pub fn digits(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.dims.len()];
        for (slot, &d) in out.iter_mut().zip(&self.dims).rev() {
            *slot = index % d;
            index /= d;
        }
        out
    }

    /// Inverse of [`digits`](Self::digits).
    pub fn index(&self, digits: &[usize]) -> usize {
        digits
            .iter()
            .zip(&self.dims)
            .fold(0, |acc, (&x, &d)| acc * d + x)
    }

    /// Restricts the structure to the given (sorted, distinct) parties.
    pub fn restrict(&self, keep: &[usize]) -> Result<Self> {
        self.check_subset(keep)?;
        Self::new(keep.iter().map(|&p| self.dims[p]).collect())
    }

    /// Validates that `set` is a nonempty, strictly increasing list of party indices.
    pub(crate) fn check_subset(&self, set: &[usize]) -> Result<()> {
        if set.is_empty() {
            return invalid("party set is empty");
        }
        if let Some(&p) = set.iter().find(|&&p| p >= self.parties()) {
            return invalid(format!(
                "party index {p} out of range for {} parties",
                self.parties()
            ));
        }
        if set.windows(2).any(|w| w[0] >= w[1]) {
            return invalid(format!("party set {set:?} must be strictly increasing"));
        }
        Ok(())
    }

    /// Parties not in `set`, ascending.
    pub fn complement(&self, set: &[usize]) -> Vec<usize> {
        (0..self.parties()).filter(|p| !set.contains(p)).collect()
    }
}

impl TryFrom<Vec<usize>> for PartyStructure {
    type Error = crate::Error;

    fn try_from(dims: Vec<usize>) -> Result<Self> {
        Self::new(dims)
    }
}

impl From<PartyStructure> for Vec<usize> {
    fn from(s: PartyStructure) -> Self {
        s.dims
    }
}

/// Conventional label of a party set: `A`, `B`, ... concatenated.
pub fn party_label(set: &[usize]) -> String {
    set.iter()
        .map(|&p| {
            if p < 26 {
                char::from(b'A' + p as u8).to_string()
            } else {
                format!("P{p}")
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digits_round_trip() {
        let s = PartyStructure::new(vec![2, 3, 2]).unwrap();
        assert_eq!(s.total_dim(), 12);
        for i in 0..12 {
            assert_eq!(s.index(&s.digits(i)), i);
        }
        assert_eq!(PartyStructure::qubits(3).unwrap().digits(4), vec![1, 0, 0]);
    }

    #[test]
    fn rejects_bad_dims() {
        assert!(PartyStructure::new(vec![]).is_err());
        assert!(PartyStructure::new(vec![2, 1]).is_err());
        assert!(PartyStructure::new(vec![2; 9]).is_err());
        assert!(PartyStructure::new(vec![2; 8]).is_ok());
    }

    #[test]
    fn subsets() {
        let s = PartyStructure::qubits(3).unwrap();
        assert!(s.check_subset(&[]).is_err());
        assert!(s.check_subset(&[1, 0]).is_err());
        assert!(s.check_subset(&[3]).is_err());
        assert_eq!(s.complement(&[1]), vec![0, 2]);
        assert_eq!(party_label(&[0, 2]), "AC");
    }
}
