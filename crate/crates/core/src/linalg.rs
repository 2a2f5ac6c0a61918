//! Small dense Hermitian helpers built on nalgebra's eigensolver.

use nalgebra::{ComplexField, DMatrix, DVector, SymmetricEigen};

use crate::scalar::{czero, CMatrix, CVector, Real};

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
pub(crate) struct Eigh<T: Real> {
    pub values: DVector<T>,
    /// Columns are the eigenvectors matching `values`.
    pub vectors: CMatrix<T>,
}

pub(crate) fn eigh<T: Real>(m: &CMatrix<T>) -> Eigh<T> {
    let n = m.nrows();
    let eig = SymmetricEigen::new(m.clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[a]
            .partial_cmp(&eig.eigenvalues[b])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let values = DVector::from_iterator(n, order.iter().map(|&i| eig.eigenvalues[i]));
    let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    Eigh { values, vectors }
}

pub(crate) fn eigvalsh<T: Real>(m: &CMatrix<T>) -> DVector<T> {
    eigh(m).values
}

/// Real part of ⟨v|M|v⟩.
pub(crate) fn expectation<T: Real>(m: &CMatrix<T>, v: &CVector<T>) -> T {
    v.dotc(&(m * v)).re
}

/// Rank-one projector |v⟩⟨v|.
pub(crate) fn projector<T: Real>(v: &CVector<T>) -> CMatrix<T> {
    v * v.adjoint()
}

/// Largest entry-wise modulus of `a − b`.
pub fn max_abs_diff<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> T {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (*x - *y).modulus())
        .fold(T::zero(), |m, v| if v > m { v } else { m })
}

/// Kronecker product of a list of vectors, first factor most significant.
pub(crate) fn kron_vectors<T: Real>(factors: &[CVector<T>]) -> CVector<T> {
    let mut out = CVector::<T>::from_element(1, nalgebra::Complex::new(T::one(), T::zero()));
    for f in factors {
        out = out.kronecker(f);
    }
    out
}

/// Hermitian part (M + M†)/2, used to scrub round-off asymmetry.
pub(crate) fn hermitize<T: Real>(m: &CMatrix<T>) -> CMatrix<T> {
    let half = nalgebra::Complex::new(nalgebra::convert::<f64, T>(0.5), T::zero());
    (m + m.adjoint()) * half
}

pub(crate) fn zeros<T: Real>(n: usize) -> CMatrix<T> {
    CMatrix::from_element(n, n, czero())
}
