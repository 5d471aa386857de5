//! Single-qubit logical input states.

use crate::error::{Error, Result};
use crate::scalar::{cis, Real, C};

/// a|0> + b e^{iφ}|1>, normalized.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InputState<T: Real> {
    amps: [C<T>; 2],
}

impl<T: Real> InputState<T> {
    /// a|0> + b e^{iφ}|1> with a, b >= 0.
    pub fn new(a: T, b: T, phi: T) -> Result<Self> {
        if a < T::zero() || b < T::zero() {
            return Err(Error::InvalidArgument("amplitude moduli must be non-negative".into()));
        }
        Self::from_amplitudes(C::new(a, T::zero()), cis(phi) * b)
    }

    /// a|0> + sqrt(1 - a^2)|1> for a in [0, 1].
    pub fn from_real(a: T) -> Result<Self> {
        if !(a >= T::zero() && a <= T::one()) {
            return Err(Error::InvalidArgument(format!("real amplitude {a} outside [0, 1]")));
        }
        let b = (T::one() - a * a).max(T::zero()).sqrt();
        Ok(InputState { amps: [C::new(a, T::zero()), C::new(b, T::zero())] })
    }

    /// Point on the Bloch sphere with polar angle ϑ and azimuth φ.
    pub fn from_bloch(polar: T, azimuth: T) -> Self {
        let h = polar / T::of(2.0);
        InputState { amps: [C::new(h.cos(), T::zero()), cis(azimuth) * h.sin()] }
    }

    /// Point with the given cos(ϑ); avoids the acos round trip.
    pub fn from_bloch_cos(cos_polar: T, azimuth: T) -> Self {
        let two = T::of(2.0);
        let c = ((T::one() + cos_polar) / two).max(T::zero()).sqrt();
        let s = ((T::one() - cos_polar) / two).max(T::zero()).sqrt();
        InputState { amps: [C::new(c, T::zero()), cis(azimuth) * s] }
    }

    pub fn from_amplitudes(c0: C<T>, c1: C<T>) -> Result<Self> {
        let n = (c0.norm_sqr() + c1.norm_sqr()).as_f64();
        if (n - 1.0).abs() > 1e-12_f64.max(T::NORM_TOL) {
            return Err(Error::Unnormalized(n));
        }
        Ok(InputState { amps: [c0, c1] })
    }

    pub fn basis(bit: bool) -> Self {
        let (z, o) = (C::new(T::zero(), T::zero()), C::new(T::one(), T::zero()));
        InputState { amps: if bit { [z, o] } else { [o, z] } }
    }

    pub fn plus() -> Self {
        let r = C::new(T::FRAC_1_SQRT_2(), T::zero());
        InputState { amps: [r, r] }
    }

    pub fn amplitudes(&self) -> [C<T>; 2] {
        self.amps
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructors_are_normalized() {
        let s = InputState::<f64>::from_real(0.3).unwrap();
        let n: f64 = s.amplitudes().iter().map(|a| a.norm_sqr()).sum();
        assert!((n - 1.0).abs() < 1e-12);
        let b = InputState::<f64>::from_bloch(1.1, 2.3);
        let n: f64 = b.amplitudes().iter().map(|a| a.norm_sqr()).sum();
        assert!((n - 1.0).abs() < 1e-12);
        let bc = InputState::<f64>::from_bloch_cos(1.1f64.cos(), 2.3);
        assert!((bc.amplitudes()[1] - b.amplitudes()[1]).norm() < 1e-12);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(InputState::<f64>::from_real(1.5).is_err());
        assert!(InputState::<f64>::new(0.5, 0.5, 0.0).is_err());
        assert!(InputState::<f64>::new(-0.6, 0.8, 0.0).is_err());
        assert!(InputState::<f64>::new(0.6, 0.8, 0.4).is_ok());
    }
}
