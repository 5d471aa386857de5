//! Gaussian averages over unwanted phases.

use std::num::NonZeroUsize;

use gauss_quad::GaussHermite;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cluster::{Edge, EdgePhases};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Coupling {
    /// One θ shared by every edge.
    CommonTheta,
    /// Independent θ per edge.
    #[default]
    IidPerEdge,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "scheme", rename_all = "kebab-case")]
pub enum GaussianScheme {
    GaussHermite {
        order: usize,
    },
    MonteCarlo {
        samples: usize,
        seed: u64,
    },
    /// Equally spaced phases with Gaussian Fourier weights. Exact when the
    /// evaluator is a trigonometric polynomial of degree at most one in each
    /// phase, which holds for outcome-summed (Born-weighted) fidelities.
    Trigonometric,
}

/// Gauss-Hermite up to four noisy dimensions, Monte Carlo beyond.
pub fn default_scheme(dims: usize, seed: u64) -> GaussianScheme {
    if dims <= 4 {
        GaussianScheme::GaussHermite { order: 20 }
    } else {
        GaussianScheme::MonteCarlo { samples: 20_000, seed }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    /// Standard error for Monte Carlo estimates.
    pub stderr: Option<f64>,
    pub evaluations: u64,
}

/// splitmix64 of (seed, index), used for per-point and per-sample streams.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn hermite(order: usize) -> Result<Vec<(f64, f64)>> {
    let n = NonZeroUsize::new(order).ok_or_else(|| Error::InvalidArgument("Gauss-Hermite order must be positive".into()))?;
    let gh = GaussHermite::new(n);
    let norm = std::f64::consts::PI.sqrt();
    Ok(gh.as_node_weight_pairs().iter().map(|&(x, w)| (x * std::f64::consts::SQRT_2, w / norm)).collect())
}

/// Number of evaluator calls a scheme needs.
pub fn evaluation_count(dims: usize, scheme: GaussianScheme, coupling: Coupling) -> u64 {
    match scheme {
        GaussianScheme::GaussHermite { order } => match coupling {
            Coupling::CommonTheta => order as u64,
            Coupling::IidPerEdge => (order as u64).saturating_pow(dims as u32),
        },
        GaussianScheme::MonteCarlo { samples, .. } => samples as u64,
        GaussianScheme::Trigonometric => match coupling {
            Coupling::CommonTheta => 2 * dims as u64 + 1,
            Coupling::IidPerEdge => 3u64.saturating_pow(dims as u32),
        },
    }
}

/// Nodes and weights for E[g(θ)], θ ~ N(0, σ²), exact for trigonometric
/// polynomials of degree at most `degree`.
fn trig_rule(degree: usize, sigma: f64) -> Vec<(f64, f64)> {
    let m = 2 * degree + 1;
    (0..m)
        .map(|j| {
            let mut phi = std::f64::consts::TAU * j as f64 / m as f64;
            if phi > std::f64::consts::PI {
                phi -= std::f64::consts::TAU;
            }
            let w = (-(degree as i64)..=degree as i64).map(|k| (-0.5 * sigma * sigma * (k * k) as f64).exp() * (k as f64 * phi).cos()).sum::<f64>()
                / m as f64;
            (phi, w)
        })
        .collect()
}

fn assignment(edges: &[Edge], values: &[f64]) -> EdgePhases<f64> {
    EdgePhases::from_map(edges.iter().copied().zip(values.iter().copied()).collect())
}

/// Mean-zero Gaussian expectation of `f` over the phases of `edges`.
pub fn gaussian_average<F>(edges: &[Edge], sigma: f64, scheme: GaussianScheme, coupling: Coupling, f: F) -> Result<Estimate>
where
    F: Fn(&EdgePhases<f64>) -> Result<f64> + Sync,
{
    if !(sigma >= 0.0) {
        return Err(Error::InvalidArgument(format!("sigma must be >= 0, got {sigma}")));
    }
    let dims = match coupling {
        Coupling::CommonTheta => 1,
        Coupling::IidPerEdge => edges.len(),
    };
    let expand = |z: &[f64]| -> Vec<f64> {
        match coupling {
            Coupling::CommonTheta => vec![sigma * z[0]; edges.len()],
            Coupling::IidPerEdge => z.iter().map(|v| sigma * v).collect(),
        }
    };
    if sigma == 0.0 || edges.is_empty() {
        let v = f(&assignment(edges, &vec![0.0; edges.len()]))?;
        let stderr = matches!(scheme, GaussianScheme::MonteCarlo { .. }).then_some(0.0);
        return Ok(Estimate { mean: v, stderr, evaluations: 1 });
    }
    // Tensor rule over phase-valued nodes.
    let tensor = |nodes: Vec<(f64, f64)>| -> Result<Estimate> {
        let order = nodes.len() as u64;
        let total = order.checked_pow(dims as u32).ok_or(Error::BudgetExceeded { needed: u64::MAX, cap: u64::MAX })?;
        let values: Vec<(f64, f64)> = (0..total)
            .into_par_iter()
            .map(|mut idx| {
                let mut z = Vec::with_capacity(dims);
                let mut w = 1.0;
                for _ in 0..dims {
                    let (x, wx) = nodes[(idx % order) as usize];
                    idx /= order;
                    z.push(x);
                    w *= wx;
                }
                let phases = match coupling {
                    Coupling::CommonTheta => vec![z[0]; edges.len()],
                    Coupling::IidPerEdge => z,
                };
                Ok((w, f(&assignment(edges, &phases))?))
            })
            .collect::<Result<_>>()?;
        Ok(Estimate { mean: values.iter().map(|(w, v)| w * v).sum(), stderr: None, evaluations: total })
    };
    match scheme {
        GaussianScheme::GaussHermite { order } => tensor(hermite(order)?.into_iter().map(|(x, w)| (sigma * x, w)).collect()),
        GaussianScheme::Trigonometric => {
            let degree = match coupling {
                Coupling::CommonTheta => edges.len(),
                Coupling::IidPerEdge => 1,
            };
            tensor(trig_rule(degree, sigma))
        }
        GaussianScheme::MonteCarlo { samples, seed } => {
            if samples < 2 {
                return Err(Error::InvalidArgument("Monte Carlo needs at least two samples".into()));
            }
            let values: Vec<f64> = (0..samples as u64)
                .into_par_iter()
                .map(|i| {
                    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, i));
                    let z: Vec<f64> = (0..dims).map(|_| StandardNormal.sample(&mut rng)).collect();
                    f(&assignment(edges, &expand(&z)))
                })
                .collect::<Result<_>>()?;
            let n = values.len() as f64;
            let mean = values.iter().sum::<f64>() / n;
            let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
            Ok(Estimate { mean, stderr: Some((var / n).sqrt()), evaluations: samples as u64 })
        }
    }
}

/// One-dimensional E[g(θ)] with θ ~ N(0, σ²) by Gauss-Hermite.
pub fn gauss_hermite_expectation<G: Fn(f64) -> f64>(g: G, sigma: f64, order: usize) -> Result<f64> {
    if !(sigma >= 0.0) {
        return Err(Error::InvalidArgument(format!("sigma must be >= 0, got {sigma}")));
    }
    Ok(hermite(order)?.iter().map(|(x, w)| w * g(sigma * x)).sum())
}
