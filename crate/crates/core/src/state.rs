//! Pure and mixed states with an explicit party structure.

use nalgebra::ComplexField;

use crate::error::{invalid, Error, Result};
use crate::linalg::{self, eigh, hermitize, kron_vectors, projector, zeros};
use crate::party::PartyStructure;
use crate::scalar::{lit, to_f64, validation_tol, CMatrix, CVector, Real, C};

/// Normalized state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState<T: Real> {
    structure: PartyStructure,
    amplitudes: CVector<T>,
}

impl<T: Real> PureState<T> {
    /// Wraps an already normalized amplitude vector.
    pub fn new(structure: PartyStructure, amplitudes: CVector<T>) -> Result<Self> {
        let dim = structure.total_dim();
        if amplitudes.len() != dim {
            return invalid(format!(
                "amplitude vector has length {}, structure needs {dim}",
                amplitudes.len()
            ));
        }
        let norm = amplitudes.norm();
        let tol = validation_tol::<T>(dim) * lit(1e-2);
        if (norm - T::one()).abs() > tol {
            return Err(Error::InvalidState(format!(
                "amplitudes have norm {}, expected 1",
                to_f64(norm)
            )));
        }
        Ok(Self {
            structure,
            amplitudes,
        })
    }

    /// Normalizes `amplitudes` first; fails only for the zero vector.
    pub fn normalized(structure: PartyStructure, amplitudes: CVector<T>) -> Result<Self> {
        let norm = amplitudes.norm();
        if norm <= T::zero() || !norm.is_finite() {
            return invalid("cannot normalize a zero or non-finite vector");
        }
        let scaled = amplitudes.map(|a| a.unscale(norm));
        Self::new(structure, scaled)
    }

    /// Product of one normalized local vector per party.
    pub fn product(factors: &[CVector<T>]) -> Result<Self> {
        let structure = PartyStructure::new(factors.iter().map(|f| f.len()).collect())?;
        Self::normalized(structure, kron_vectors(factors))
    }

    /// Computational basis state with the given per-party digits.
    pub fn basis(structure: PartyStructure, digits: &[usize]) -> Result<Self> {
        if digits.len() != structure.parties()
            || digits.iter().zip(structure.dims()).any(|(&x, &d)| x >= d)
        {
            return invalid(format!("digits {digits:?} do not fit {:?}", structure.dims()));
        }
        let mut amps = CVector::<T>::zeros(structure.total_dim());
        amps[structure.index(digits)] = C::new(T::one(), T::zero());
        Self::new(structure, amps)
    }

    pub fn structure(&self) -> &PartyStructure {
        &self.structure
    }

    pub fn amplitudes(&self) -> &CVector<T> {
        &self.amplitudes
    }

    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let mut dims = self.structure.dims().to_vec();
        dims.extend_from_slice(other.structure.dims());
        Self::normalized(
            PartyStructure::new(dims)?,
            self.amplitudes.kronecker(&other.amplitudes),
        )
    }

    /// |ψ⟩⟨ψ|.
    pub fn to_density(&self) -> QuantumState<T> {
        QuantumState {
            structure: self.structure.clone(),
            matrix: projector(&self.amplitudes),
        }
    }
}

/// Density matrix satisfying Hermiticity, positivity and unit trace.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState<T: Real> {
    structure: PartyStructure,
    matrix: CMatrix<T>,
}

/// Rank-one projector of a pure state.
pub fn from_pure<T: Real>(psi: &PureState<T>) -> QuantumState<T> {
    psi.to_density()
}

impl<T: Real> QuantumState<T> {
    pub fn new(structure: PartyStructure, matrix: CMatrix<T>) -> Result<Self> {
        let dim = structure.total_dim();
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return invalid(format!(
                "density matrix is {}x{}, structure needs {dim}x{dim}",
                matrix.nrows(),
                matrix.ncols()
            ));
        }
        if matrix.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidState("density matrix has non-finite entries".into()));
        }
        let tol = validation_tol::<T>(dim);
        let asym = linalg::max_abs_diff(&matrix, &matrix.adjoint());
        if asym >= tol {
            return Err(Error::InvalidState(format!(
                "density matrix is not Hermitian (max deviation {:e})",
                to_f64(asym)
            )));
        }
        let trace = matrix.trace().re;
        if (trace - T::one()).abs() > tol {
            return Err(Error::InvalidState(format!(
                "density matrix has trace {}, expected 1",
                to_f64(trace)
            )));
        }
        let matrix = hermitize(&matrix);
        let min_eig = linalg::eigvalsh(&matrix)[0];
        if min_eig <= -tol {
            return Err(Error::InvalidState(format!(
                "density matrix is not positive semidefinite (min eigenvalue {:e})",
                to_f64(min_eig)
            )));
        }
        Ok(Self { structure, matrix })
    }

    /// Trusted constructor for matrices that are states by construction.
    pub(crate) fn from_parts(structure: PartyStructure, matrix: CMatrix<T>) -> Self {
        debug_assert_eq!(matrix.nrows(), structure.total_dim());
        Self { structure, matrix }
    }

    pub fn maximally_mixed(structure: PartyStructure) -> Self {
        let d = structure.total_dim();
        let w = C::new(T::one() / lit(d as f64), T::zero());
        Self::from_parts(structure, CMatrix::from_diagonal_element(d, d, w))
    }

    pub fn structure(&self) -> &PartyStructure {
        &self.structure
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<T> {
        linalg::eigvalsh(&self.matrix).iter().copied().collect()
    }

    pub fn purity(&self) -> T {
        (&self.matrix * &self.matrix).trace().re
    }

    /// Reduced state on `keep` (strictly increasing party indices).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<Self> {
        self.structure.check_subset(keep)?;
        if keep.len() == self.structure.parties() {
            return Ok(self.clone());
        }
        let kept = self.structure.restrict(keep)?;
        let traced = self.structure.complement(keep);
        let traced_dims: Vec<usize> = traced.iter().map(|&p| self.structure.dims()[p]).collect();
        let traced_dim: usize = traced_dims.iter().product();
        let d = self.dim();
        let mut out = zeros::<T>(kept.total_dim());

        // Precompute for every full index its (kept index, traced index).
        let split: Vec<(usize, usize)> = (0..d)
            .map(|i| {
                let digits = self.structure.digits(i);
                let k = keep.iter().fold(0, |acc, &p| acc * self.structure.dims()[p] + digits[p]);
                let t = traced.iter().fold(0, |acc, &p| acc * self.structure.dims()[p] + digits[p]);
                (k, t)
            })
            .collect();
        let mut by_traced: Vec<Vec<(usize, usize)>> = vec![Vec::new(); traced_dim];
        for (i, &(k, t)) in split.iter().enumerate() {
            by_traced[t].push((i, k));
        }
        for group in &by_traced {
            for &(r, kr) in group {
                for &(c, kc) in group {
                    out[(kr, kc)] += self.matrix[(r, c)];
                }
            }
        }
        Ok(Self::from_parts(kept, out))
    }

    /// Traces out the listed parties, keeping the rest.
    pub fn trace_out(&self, parties: &[usize]) -> Result<Self> {
        let mut sorted = parties.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if let Some(&p) = sorted.iter().find(|&&p| p >= self.structure.parties()) {
            return invalid(format!("party index {p} out of range"));
        }
        self.partial_trace(&self.structure.complement(&sorted))
    }

    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let mut dims = self.structure.dims().to_vec();
        dims.extend_from_slice(other.structure.dims());
        Ok(Self::from_parts(
            PartyStructure::new(dims)?,
            self.matrix.kronecker(&other.matrix),
        ))
    }

    /// Relabels parties: new party `i` is old party `perm[i]`.
    pub fn permute_parties(&self, perm: &[usize]) -> Result<Self> {
        let n = self.structure.parties();
        let mut seen = vec![false; n];
        if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
            return invalid(format!("{perm:?} is not a permutation of {n} parties"));
        }
        let new_structure =
            PartyStructure::new(perm.iter().map(|&p| self.structure.dims()[p]).collect())?;
        let d = self.dim();
        let map: Vec<usize> = (0..d)
            .map(|old| {
                let digits = self.structure.digits(old);
                let new_digits: Vec<usize> = perm.iter().map(|&p| digits[p]).collect();
                new_structure.index(&new_digits)
            })
            .collect();
        let mut out = zeros::<T>(d);
        for r in 0..d {
            for c in 0..d {
                out[(map[r], map[c])] = self.matrix[(r, c)];
            }
        }
        Ok(Self::from_parts(new_structure, out))
    }

    /// Applies U₀ ⊗ U₁ ⊗ … (one unitary per party).
    pub fn apply_local_unitaries(&self, unitaries: &[CMatrix<T>]) -> Result<Self> {
        if unitaries.len() != self.structure.parties()
            || unitaries
                .iter()
                .zip(self.structure.dims())
                .any(|(u, &d)| u.nrows() != d || u.ncols() != d)
        {
            return invalid("one unitary of matching size per party is required");
        }
        let mut full = CMatrix::<T>::identity(1, 1);
        for u in unitaries {
            full = full.kronecker(u);
        }
        let out = &full * &self.matrix * full.adjoint();
        Ok(Self::from_parts(self.structure.clone(), hermitize(&out)))
    }

    /// Partial transpose over the listed parties.
    pub fn partial_transpose(&self, parties: &[usize]) -> Result<CMatrix<T>> {
        self.structure.check_subset(parties)?;
        let d = self.dim();
        let swap = |r: usize, c: usize| {
            let mut rd = self.structure.digits(r);
            let mut cd = self.structure.digits(c);
            for &p in parties {
                std::mem::swap(&mut rd[p], &mut cd[p]);
            }
            (self.structure.index(&rd), self.structure.index(&cd))
        };
        let mut out = zeros::<T>(d);
        for r in 0..d {
            for c in 0..d {
                let (r2, c2) = swap(r, c);
                out[(r2, c2)] = self.matrix[(r, c)];
            }
        }
        Ok(out)
    }

    /// Recovers the state vector of a rank-one density matrix.
    pub fn to_pure(&self) -> Result<PureState<T>> {
        let tol = validation_tol::<T>(self.dim()) * lit(10.0);
        let purity = self.purity();
        if (purity - T::one()).abs() > tol {
            return invalid(format!(
                "state is mixed (purity {}), a pure state is required",
                to_f64(purity)
            ));
        }
        let eig = eigh(&self.matrix);
        let top = eig.vectors.column(self.dim() - 1).into_owned();
        // Fix the global phase so the largest amplitude is real and positive.
        let (imax, _) = top
            .iter()
            .enumerate()
            .fold((0, T::zero()), |(bi, bm), (i, z)| {
                if z.modulus() > bm {
                    (i, z.modulus())
                } else {
                    (bi, bm)
                }
            });
        let phase = top[imax].unscale(top[imax].modulus()).conj();
        PureState::normalized(self.structure.clone(), top.map(|z| z * phase))
    }
}
