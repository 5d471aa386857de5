//! Fidelities of a decoded channel for arbitrary inputs.

use crate::error::{Error, Result};
use crate::gate::Matrix;
use crate::input::InputState;
use crate::protocols::{Channel, OutcomeMode};
use crate::scalar::{c_zero, Real, C};

use super::quadrature::{bloch_average, haar_overlap_average, product_bloch_average, product_haar_overlap_average, BlochQuadrature};

/// Branch maps relative to the ideal gate, M_s = U† K_s.
#[derive(Clone, Debug)]
pub struct ChannelFidelity<T: Real> {
    lines: usize,
    mode: OutcomeMode,
    ms: Vec<Matrix<T>>,
}

fn quad_form<T: Real>(m: &Matrix<T>, v: &[C<T>]) -> (C<T>, T) {
    let mv = m.apply(v);
    let ov = v.iter().zip(&mv).fold(c_zero::<T>(), |acc, (a, b)| acc + a.conj() * *b);
    let n: T = mv.iter().map(|x| x.norm_sqr()).sum();
    (ov, n)
}

fn product_vector<T: Real>(inputs: &[InputState<T>]) -> Vec<C<T>> {
    let mut v = vec![C::new(T::one(), T::zero())];
    for s in inputs {
        let a = s.amplitudes();
        let mut next = Vec::with_capacity(v.len() * 2);
        next.extend(v.iter().map(|x| *x * a[0]));
        next.extend(v.iter().map(|x| *x * a[1]));
        v = next;
    }
    v
}

impl<T: Real> ChannelFidelity<T> {
    pub fn new(channel: &Channel<T>, target: &Matrix<T>, mode: OutcomeMode) -> Self {
        ChannelFidelity { lines: channel.lines, mode, ms: channel.relative_to(target) }
    }

    pub fn branches(&self) -> usize {
        self.ms.len()
    }

    /// Born-weighted branch average, or the all-zero branch fidelity when postselected.
    pub fn fidelity(&self, inputs: &[InputState<T>]) -> f64 {
        let v = product_vector(inputs);
        match self.mode {
            OutcomeMode::Exhaustive => self.ms.iter().map(|m| quad_form(m, &v).0.norm_sqr().as_f64()).sum(),
            OutcomeMode::PostselectZeros => {
                let (ov, n) = quad_form(&self.ms[0], &v);
                if n.as_f64() < T::PROB_FLOOR {
                    0.0
                } else {
                    (ov.norm_sqr() / n).as_f64()
                }
            }
        }
    }

    /// Quadrature average over independent uniform inputs on every line.
    pub fn bloch_average(&self, q: &BlochQuadrature) -> Result<f64> {
        match self.lines {
            1 => bloch_average(|s: &InputState<T>| self.fidelity(std::slice::from_ref(s)), q),
            2 => product_bloch_average(|a: &InputState<T>, b: &InputState<T>| self.fidelity(&[*a, *b]), q),
            n => Err(Error::InvalidArgument(format!("Bloch averaging over {n} lines is not supported"))),
        }
    }

    /// Exact average over independent Haar inputs (branch-averaged mode only).
    pub fn haar_average(&self) -> Result<f64> {
        if self.mode != OutcomeMode::Exhaustive {
            return Err(Error::InvalidArgument("the closed-form average needs exhaustive outcomes".into()));
        }
        Ok(if self.lines == 1 {
            self.ms.iter().map(haar_overlap_average).sum()
        } else {
            self.ms.iter().map(|m| product_haar_overlap_average(m, self.lines)).sum()
        })
    }
}
