//! Scalar abstraction for the simulation kernels.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Real scalar driving the amplitude arithmetic.
pub trait Real: Float + FloatConst + FromPrimitive + ToPrimitive + NumAssign + Sum + Default + Debug + Display + Send + Sync + 'static {
    /// Allowed drift of a squared norm after a normalized operation.
    const NORM_TOL: f64;
    /// Branches with probability below this are impossible.
    const PROB_FLOOR: f64;
    /// Residual below which a state counts as an eigenstate.
    const EIGEN_TOL: f64;

    fn of(x: f64) -> Self;

    fn as_f64(self) -> f64;
}

macro_rules! impl_real {
    ($t:ty, $norm:expr, $floor:expr, $eig:expr) => {
        impl Real for $t {
            const NORM_TOL: f64 = $norm;
            const PROB_FLOOR: f64 = $floor;
            const EIGEN_TOL: f64 = $eig;

            #[inline]
            fn of(x: f64) -> Self {
                x as $t
            }

            #[inline]
            fn as_f64(self) -> f64 {
                self as f64
            }
        }
    };
}

impl_real!(f64, 1e-12, 1e-14, 1e-10);
impl_real!(f32, 1e-5, 1e-10, 1e-4);

pub type C<T> = Complex<T>;

#[inline]
pub fn c<T: Real>(re: f64, im: f64) -> C<T> {
    Complex::new(T::of(re), T::of(im))
}

/// e^{iφ}
#[inline]
pub fn cis<T: Real>(phi: T) -> C<T> {
    Complex::new(phi.cos(), phi.sin())
}

pub fn c_one<T: Real>() -> C<T> {
    Complex::new(T::one(), T::zero())
}

pub fn c_zero<T: Real>() -> C<T> {
    Complex::new(T::zero(), T::zero())
}
