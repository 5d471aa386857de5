//! Sphere quadrature and exact Haar moments.

use std::f64::consts::PI;
use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gate::Matrix;
use crate::input::InputState;
use crate::scalar::{Real, C};

/// Gauss-Legendre in cos(polar) times a uniform azimuth rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlochQuadrature {
    pub polar: usize,
    pub azimuth: usize,
}

impl Default for BlochQuadrature {
    fn default() -> Self {
        BlochQuadrature { polar: 16, azimuth: 16 }
    }
}

impl BlochQuadrature {
    pub fn new(polar: usize, azimuth: usize) -> Result<Self> {
        let q = BlochQuadrature { polar, azimuth };
        q.check()?;
        Ok(q)
    }

    fn check(&self) -> Result<()> {
        if self.polar < 2 || self.azimuth < 1 {
            return Err(Error::InvalidArgument(format!("quadrature orders {}x{} too small", self.polar, self.azimuth)));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.polar * self.azimuth
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// States and weights summing to one.
    pub fn points<T: Real>(&self) -> Result<Vec<(InputState<T>, f64)>> {
        self.check()?;
        let gl = GaussLegendre::new(NonZeroUsize::new(self.polar).expect("checked"));
        let mut out = Vec::with_capacity(self.len());
        for &(x, w) in gl.as_node_weight_pairs() {
            for k in 0..self.azimuth {
                let phi = 2.0 * PI * k as f64 / self.azimuth as f64;
                out.push((InputState::from_bloch_cos(T::of(x), T::of(phi)), w / 2.0 / self.azimuth as f64));
            }
        }
        Ok(out)
    }
}

/// Uniform average of `f` over pure single-qubit states.
pub fn bloch_average<T: Real, F: Fn(&InputState<T>) -> f64>(f: F, q: &BlochQuadrature) -> Result<f64> {
    Ok(q.points::<T>()?.iter().map(|(s, w)| w * f(s)).sum())
}

/// Average over independent uniform states on two lines.
pub fn product_bloch_average<T: Real, F: Fn(&InputState<T>, &InputState<T>) -> f64>(f: F, q: &BlochQuadrature) -> Result<f64> {
    let pts = q.points::<T>()?;
    let mut acc = 0.0;
    for (a, wa) in &pts {
        for (b, wb) in &pts {
            acc += wa * wb * f(a, b);
        }
    }
    Ok(acc)
}

/// E|<ψ|M|ψ>|^2 for Haar-random ψ in dimension d: (|tr M|^2 + tr M†M) / (d(d+1)).
pub fn haar_overlap_average<T: Real>(m: &Matrix<T>) -> f64 {
    let d = m.dim() as f64;
    (m.trace().norm_sqr().as_f64() + m.frobenius_sqr().as_f64()) / (d * (d + 1.0))
}

/// E|<ψ|M|ψ>|^2 for ψ a product of independent Haar qubits on `lines` lines.
pub fn product_haar_overlap_average<T: Real>(m: &Matrix<T>, lines: usize) -> f64 {
    let dim = 1usize << lines;
    assert_eq!(m.dim(), dim, "matrix does not act on {lines} lines");
    let md = m.adjoint();
    let mut total = C::new(T::zero(), T::zero());
    for s in 0..dim {
        for a in 0..dim {
            for b in 0..dim {
                let c = (a & !s) | (b & s);
                let d = (b & !s) | (a & s);
                total += m.get(a, c) * md.get(b, d);
            }
        }
    }
    total.re.as_f64() / 6f64.powi(lines as i32)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_one() {
        let pts = BlochQuadrature::default().points::<f64>().unwrap();
        let s: f64 = pts.iter().map(|(_, w)| w).sum();
        assert!((s - 1.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_bad_orders() {
        assert!(BlochQuadrature::new(0, 4).is_err());
        assert!(BlochQuadrature::new(8, 0).is_err());
    }

    #[test]
    fn product_formula_reduces_to_single_qubit_formula() {
        let m = crate::gate::Gate2x2::<f64>::rx(0.4).to_matrix().scale(C::new(0.7, 0.1));
        assert!((haar_overlap_average(&m) - product_haar_overlap_average(&m, 1)).abs() < 1e-14);
    }
}
