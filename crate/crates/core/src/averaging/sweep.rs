//! Parameter sweeps producing fidelity reports.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::channel::ChannelFidelity;
use super::gaussian::{derive_seed, evaluation_count, gaussian_average, Coupling, Estimate, GaussianScheme};
use super::quadrature::BlochQuadrature;
use crate::cluster::{EdgePhases, PhaseAssignment};
use crate::error::{Error, Result};
use crate::input::InputState;
use crate::protocols::{CnotVariant, Euler, OutcomeMode, Protocol, RotationVariant, Schedule};
use crate::scalar::Real;

pub const CLASSICAL_THRESHOLD: f64 = 2.0 / 3.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "protocol", rename_all = "kebab-case")]
pub enum ProtocolSpec {
    Transfer { n: usize },
    Rotation { variant: RotationVariant, euler: Euler },
    Cnot { variant: CnotVariant },
}

impl ProtocolSpec {
    pub fn build(&self) -> Result<Protocol> {
        match self {
            ProtocolSpec::Transfer { n } => Protocol::transfer(*n),
            ProtocolSpec::Rotation { variant, euler } => Protocol::rotation(*variant, *euler),
            ProtocolSpec::Cnot { variant } => Protocol::cnot(*variant),
        }
    }
}

/// How logical inputs are averaged.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "inputs", rename_all = "kebab-case")]
pub enum InputAveraging {
    Bloch {
        polar: usize,
        azimuth: usize,
    },
    /// Closed-form Haar moments; exhaustive mode only.
    Haar,
    /// Real-amplitude inputs a|0> + sqrt(1-a^2)|1>, one per line.
    Fixed {
        amplitudes: Vec<f64>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "axis", content = "values", rename_all = "kebab-case")]
pub enum Axis {
    /// Common unwanted phase on every edge.
    Theta(Vec<f64>),
    /// Gaussian width of the unwanted phases.
    Sigma(Vec<f64>),
}

impl Axis {
    pub fn name(&self) -> &'static str {
        match self {
            Axis::Theta(_) => "theta",
            Axis::Sigma(_) => "sigma",
        }
    }

    pub fn values(&self) -> &[f64] {
        match self {
            Axis::Theta(v) | Axis::Sigma(v) => v,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub series: Vec<(String, ProtocolSpec)>,
    pub axis: Axis,
    pub inputs: InputAveraging,
    pub mode: OutcomeMode,
    pub coupling: Coupling,
    /// Used on sigma axes; `None` picks Gauss-Hermite or Monte Carlo by dimension.
    pub scheme: Option<GaussianScheme>,
    pub seed: u64,
    /// Cap on elementary evaluations (branch maps plus quadrature points) per grid point.
    pub budget: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointEstimate {
    pub mean: f64,
    pub stderr: Option<f64>,
    pub evaluations: u64,
    pub scheme: Option<GaussianScheme>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Series {
    pub name: String,
    pub protocol: ProtocolSpec,
    pub points: Vec<PointEstimate>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FidelityReport {
    pub axis_name: String,
    pub axis: Vec<f64>,
    pub series: Vec<Series>,
    pub inputs: InputAveraging,
    pub mode: OutcomeMode,
    pub coupling: Coupling,
    pub seed: u64,
    pub threshold: f64,
}

fn check_axis(v: &[f64]) -> Result<()> {
    if v.is_empty() {
        return Err(Error::InvalidArgument("empty grid".into()));
    }
    if v.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidArgument("grid values must be strictly increasing".into()));
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidArgument("grid values must be finite".into()));
    }
    Ok(())
}

/// Input-averaged fidelity of a protocol at fixed phases.
pub fn input_averaged_fidelity<T: Real>(protocol: &Protocol, phases: &EdgePhases<T>, inputs: &InputAveraging, mode: OutcomeMode) -> Result<f64> {
    let ch = protocol.channel(phases, mode, Schedule::Lazy)?;
    let cf = ChannelFidelity::new(&ch, &protocol.target_matrix()?, mode);
    match inputs {
        InputAveraging::Bloch { polar, azimuth } => cf.bloch_average(&BlochQuadrature::new(*polar, *azimuth)?),
        InputAveraging::Haar => cf.haar_average(),
        InputAveraging::Fixed { amplitudes } => {
            if amplitudes.len() != protocol.lines() {
                return Err(Error::InputCount { expected: protocol.lines(), got: amplitudes.len() });
            }
            let states = amplitudes.iter().map(|a| InputState::from_real(T::of(*a))).collect::<Result<Vec<_>>>()?;
            Ok(cf.fidelity(&states))
        }
    }
}

fn per_phase_cost(protocol: &Protocol, inputs: &InputAveraging, mode: OutcomeMode) -> u64 {
    let l = &protocol.layout;
    let branches = match mode {
        OutcomeMode::Exhaustive => 1u64.checked_shl((l.pattern.len() + l.redundant.len()) as u32).unwrap_or(u64::MAX),
        OutcomeMode::PostselectZeros => 1,
    };
    let d = 1u64 << l.lines;
    let quad = match inputs {
        InputAveraging::Bloch { polar, azimuth } => ((polar * azimuth) as u64).saturating_pow(l.lines as u32),
        InputAveraging::Haar | InputAveraging::Fixed { .. } => 1,
    };
    branches.saturating_mul(d.saturating_add(quad))
}

/// Evaluates every series at every grid point.
pub fn sweep<T: Real>(spec: &ExperimentSpec) -> Result<FidelityReport> {
    check_axis(spec.axis.values())?;
    if spec.series.is_empty() {
        return Err(Error::InvalidArgument("no series".into()));
    }
    if spec.scheme == Some(GaussianScheme::Trigonometric) && spec.mode == OutcomeMode::PostselectZeros {
        return Err(Error::InvalidArgument("the trigonometric rule is exact only for outcome-summed fidelities".into()));
    }
    let protocols = spec.series.iter().map(|(_, p)| p.build()).collect::<Result<Vec<_>>>()?;
    let scheme_for = |p: &Protocol, i: usize| -> GaussianScheme {
        let seed = derive_seed(spec.seed, i as u64);
        match spec.scheme {
            Some(GaussianScheme::MonteCarlo { samples, .. }) => GaussianScheme::MonteCarlo { samples, seed },
            Some(s) => s,
            None => {
                let dims = match spec.coupling {
                    Coupling::CommonTheta => 1,
                    Coupling::IidPerEdge => p.layout.edges.len(),
                };
                super::gaussian::default_scheme(dims, seed)
            }
        }
    };
    for p in &protocols {
        let phase_evals = match &spec.axis {
            Axis::Theta(_) => 1,
            Axis::Sigma(_) => evaluation_count(p.layout.edges.len(), scheme_for(p, 0), spec.coupling),
        };
        let needed = phase_evals.saturating_mul(per_phase_cost(p, &spec.inputs, spec.mode));
        if needed > spec.budget {
            return Err(Error::BudgetExceeded { needed, cap: spec.budget });
        }
    }
    let grid = spec.axis.values();
    let jobs: Vec<(usize, usize)> = (0..protocols.len()).flat_map(|s| (0..grid.len()).map(move |g| (s, g))).collect();
    let results: Vec<PointEstimate> = jobs
        .par_iter()
        .map(|&(s, g)| {
            let p = &protocols[s];
            match &spec.axis {
                Axis::Theta(v) => {
                    let phases = PhaseAssignment::CommonTheta { theta: v[g] }.resolve::<T>(&p.layout)?;
                    let mean = input_averaged_fidelity(p, &phases, &spec.inputs, spec.mode)?;
                    Ok(PointEstimate { mean, stderr: None, evaluations: 1, scheme: None })
                }
                Axis::Sigma(v) => {
                    let scheme = scheme_for(p, g);
                    let Estimate { mean, stderr, evaluations } = gaussian_average(&p.layout.edges, v[g], scheme, spec.coupling, |ph| {
                        input_averaged_fidelity(p, &ph.cast::<T>(), &spec.inputs, spec.mode)
                    })?;
                    Ok(PointEstimate { mean, stderr, evaluations, scheme: Some(scheme) })
                }
            }
        })
        .collect::<Result<_>>()?;
    let series = spec
        .series
        .iter()
        .enumerate()
        .map(|(s, (name, proto))| Series {
            name: name.clone(),
            protocol: proto.clone(),
            points: results[s * grid.len()..(s + 1) * grid.len()].to_vec(),
        })
        .collect();
    Ok(FidelityReport {
        axis_name: spec.axis.name().into(),
        axis: grid.to_vec(),
        series,
        inputs: spec.inputs.clone(),
        mode: spec.mode,
        coupling: spec.coupling,
        seed: spec.seed,
        threshold: CLASSICAL_THRESHOLD,
    })
}
