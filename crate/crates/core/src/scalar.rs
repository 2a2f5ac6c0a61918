//! Scalar abstraction shared by every numeric routine in the crate.

use nalgebra::{Complex, DMatrix, DVector, RealField};
use num_traits::ToPrimitive;

/// Real scalar the linear algebra is generic over (`f32` or `f64`).
///
/// All arithmetic goes through nalgebra's [`RealField`]; `ToPrimitive` is
/// used at the edges where values are reported as `f64`.
pub trait Real: RealField + Copy + ToPrimitive + Send + Sync + 'static {
    /// Machine epsilon of the underlying float type.
    fn machine_epsilon() -> Self;
}

impl Real for f32 {
    fn machine_epsilon() -> Self {
        f32::EPSILON
    }
}

impl Real for f64 {
    fn machine_epsilon() -> Self {
        f64::EPSILON
    }
}

pub type C<T> = Complex<T>;
pub type CMatrix<T> = DMatrix<Complex<T>>;
pub type CVector<T> = DVector<Complex<T>>;

/// Converts an `f64` literal into `T`.
#[inline]
pub(crate) fn lit<T: Real>(x: f64) -> T {
    nalgebra::convert(x)
}

#[inline]
pub(crate) fn to_f64<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

#[inline]
pub(crate) fn czero<T: Real>() -> C<T> {
    Complex::new(T::zero(), T::zero())
}

/// log2(x) for x > 0.
#[inline]
pub(crate) fn log2<T: Real>(x: T) -> T {
    x.ln() / T::ln_2()
}

/// Tolerance used to validate state invariants at precision `T`.
///
/// Equals 1e-10 in `f64`; loosened in proportion to machine epsilon for
/// lower precisions so that `f32` states built from exact data still pass.
pub(crate) fn validation_tol<T: Real>(dim: usize) -> T {
    let scaled = T::machine_epsilon() * lit::<T>(100.0 * dim as f64);
    let floor = lit::<T>(1e-10);
    if scaled > floor {
        scaled
    } else {
        floor
    }
}
