//! Seeded randomness: a counter-based seed splitter plus Haar samplers.

use nalgebra::{Complex, ComplexField};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::party::PartyStructure;
use crate::scalar::{lit, CMatrix, CVector, Real};
use crate::state::{PureState, QuantumState};

pub type StdRng = ChaCha8Rng;

/// SplitMix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of substream `counter` under `seed`; a pure function of both.
pub fn derive_seed(seed: u64, counter: u64) -> u64 {
    mix(mix(seed.wrapping_add(0x9e37_79b9_7f4a_7c15)) ^ counter.wrapping_mul(0xd1b5_4a32_d192_ed03))
}

pub fn rng_from_seed(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

fn complex_gaussian<T: Real, R: Rng + ?Sized>(rng: &mut R) -> Complex<T> {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex::new(lit(re), lit(im))
}

pub fn gaussian_vector<T: Real, R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CVector<T> {
    CVector::from_fn(dim, |_, _| complex_gaussian(rng))
}

/// Haar-random unit vector in dimension `dim`.
pub fn haar_vector<T: Real, R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CVector<T> {
    loop {
        let v = gaussian_vector::<T, R>(dim, rng);
        let n = v.norm();
        if n > lit(1e-30) {
            return v.map(|z| z.unscale(n));
        }
    }
}

/// Haar-random unitary via QR of a Ginibre matrix with the phase fix on R's diagonal.
pub fn haar_unitary<T: Real, R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMatrix<T> {
    let g = CMatrix::from_fn(dim, dim, |_, _| complex_gaussian::<T, R>(rng));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..dim {
        let d = r[(j, j)];
        let m = d.modulus();
        if m > T::zero() {
            let phase = d.unscale(m);
            let mut col = q.column_mut(j);
            col *= phase;
        }
    }
    q
}

/// Haar-random pure state on `structure`, deterministic in `seed`.
pub fn haar_random_pure<T: Real>(structure: &PartyStructure, seed: u64) -> PureState<T> {
    let mut rng = rng_from_seed(seed);
    let v = haar_vector::<T, _>(structure.total_dim(), &mut rng);
    PureState::normalized(structure.clone(), v).expect("Haar vector is nonzero")
}

/// Random full-rank mixed state GG†/tr(GG†) with Ginibre G.
pub fn random_mixed_state<T: Real, R: Rng + ?Sized>(
    structure: &PartyStructure,
    rng: &mut R,
) -> Result<QuantumState<T>> {
    let d = structure.total_dim();
    let g = CMatrix::from_fn(d, d, |_, _| complex_gaussian::<T, R>(rng));
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    QuantumState::new(structure.clone(), m.map(|z| z.unscale(tr)))
}
