//! End-to-end protocol drivers.

pub mod circuits;
mod engine;

pub use engine::{execute, extract_channel, Branch, Channel, OutcomeMode, Plan, Schedule};

use serde::{Deserialize, Serialize};

use crate::cluster::{builtin_layout, linear, ClusterLayout, EdgePhases, Outcomes, Params, PhaseAssignment};
use crate::error::{Error, Result};
use crate::gate::{Gate2x2, Matrix};
use crate::input::InputState;
use crate::pauliframe::{cnot4_frame, rotation_frame, squashed_i_frame, transfer_frame, LogicalProgram, PauliFrame, SymbolicFrame};
use crate::scalar::Real;
use crate::site::Site;
use crate::statevector::StateVector;

/// Euler angles of U_R = Rx(ζ) Rz(ν) Rx(ξ).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Euler {
    pub zeta: f64,
    pub nu: f64,
    pub xi: f64,
}

impl Euler {
    pub fn new(zeta: f64, nu: f64, xi: f64) -> Self {
        Euler { zeta, nu, xi }
    }

    pub fn params(&self) -> Params {
        Params::from([("zeta".into(), self.zeta), ("nu".into(), self.nu), ("xi".into(), self.xi)])
    }

    pub fn matrix<T: Real>(&self) -> Matrix<T> {
        (Gate2x2::rx(T::of(self.zeta)) * Gate2x2::rz(T::of(self.nu)) * Gate2x2::rx(T::of(self.xi))).to_matrix()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RotationVariant {
    Rot5,
    Rot7,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CnotVariant {
    SquashedI,
    SquashedIRedundant,
    Helix,
    Cnot4,
}

impl CnotVariant {
    pub const ALL: [CnotVariant; 4] = [CnotVariant::Cnot4, CnotVariant::Helix, CnotVariant::SquashedI, CnotVariant::SquashedIRedundant];

    pub fn layout_name(self) -> &'static str {
        match self {
            CnotVariant::SquashedI => "squashed-i",
            CnotVariant::SquashedIRedundant => "squashed-i-redundant",
            CnotVariant::Helix => "helix",
            CnotVariant::Cnot4 => "cnot4",
        }
    }
}

impl RotationVariant {
    pub fn layout_name(self) -> &'static str {
        match self {
            RotationVariant::Rot5 => "rot5",
            RotationVariant::Rot7 => "rot7",
        }
    }
}

/// How the byproduct of a branch is computed.
#[derive(Clone, Debug, PartialEq)]
pub enum FrameRule {
    Transfer { n: usize },
    Rotation { sites: [Site; 4] },
    Cnot4,
    SquashedI,
    Propagated(SymbolicFrame),
}

/// Ideal logical gate.
#[derive(Clone, Debug, PartialEq)]
pub enum Target {
    Identity,
    Hadamard,
    Euler(Euler),
    Cnot,
    /// The gate read off the layout's blocks.
    Program,
}

/// A layout with its angle parameters, decoder and ideal gate.
#[derive(Clone, Debug)]
pub struct Protocol {
    pub name: String,
    pub layout: ClusterLayout,
    pub params: Params,
    pub frame_rule: FrameRule,
    pub target: Target,
}

fn propagated(layout: &ClusterLayout, params: &Params) -> Result<FrameRule> {
    let prog = LogicalProgram::from_layout(layout)?;
    Ok(FrameRule::Propagated(SymbolicFrame::propagate(&prog, params)?))
}

impl Protocol {
    /// State transfer along linear(N).
    pub fn transfer(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::BadChainLength(n));
        }
        let layout = linear(n)?;
        let params = Params::new();
        let (frame_rule, target) =
            if n % 2 == 1 { (FrameRule::Transfer { n }, Target::Identity) } else { (propagated(&layout, &params)?, Target::Hadamard) };
        Ok(Protocol { name: format!("transfer({n})"), layout, params, frame_rule, target })
    }

    pub fn rotation(variant: RotationVariant, euler: Euler) -> Result<Self> {
        let layout = builtin_layout(variant.layout_name())?;
        let sites = match variant {
            RotationVariant::Rot5 => [Site(1), Site(2), Site(3), Site(4)],
            RotationVariant::Rot7 => [Site(1), Site(2), Site(4), Site(5)],
        };
        Ok(Protocol {
            name: variant.layout_name().into(),
            layout,
            params: euler.params(),
            frame_rule: FrameRule::Rotation { sites },
            target: Target::Euler(euler),
        })
    }

    pub fn cnot(variant: CnotVariant) -> Result<Self> {
        let layout = builtin_layout(variant.layout_name())?;
        let params = Params::new();
        let (frame_rule, target) = match variant {
            CnotVariant::SquashedI | CnotVariant::SquashedIRedundant => (FrameRule::SquashedI, Target::Cnot),
            CnotVariant::Helix => (propagated(&layout, &params)?, Target::Cnot),
            CnotVariant::Cnot4 => (FrameRule::Cnot4, Target::Program),
        };
        Ok(Protocol { name: variant.layout_name().into(), layout, params, frame_rule, target })
    }

    /// Any built-in layout, decoded by symbolic propagation against its block program.
    pub fn builtin(name: &str, params: Params) -> Result<Self> {
        let layout = builtin_layout(name)?;
        let frame_rule = propagated(&layout, &params)?;
        Ok(Protocol { name: name.into(), layout, params, frame_rule, target: Target::Program })
    }

    pub fn lines(&self) -> usize {
        self.layout.lines
    }

    pub fn target_matrix<T: Real>(&self) -> Result<Matrix<T>> {
        Ok(match &self.target {
            Target::Identity => Matrix::identity(2),
            Target::Hadamard => Gate2x2::h().to_matrix(),
            Target::Euler(e) => e.matrix(),
            Target::Cnot => Matrix::cnot(0, 1, 2),
            Target::Program => LogicalProgram::from_layout(&self.layout)?.unitary(&self.params)?,
        })
    }

    pub fn frame(&self, o: &Outcomes) -> Result<PauliFrame> {
        match &self.frame_rule {
            FrameRule::Transfer { n } => {
                let bits = (1..*n as u32).map(|s| o.bit(s)).collect::<Result<Vec<_>>>()?;
                transfer_frame(&bits, *n)
            }
            FrameRule::Rotation { sites } => {
                let b = |k: usize| o.get(sites[k]).ok_or(Error::MissingOutcome(sites[k]));
                Ok(rotation_frame([b(0)?, b(1)?, b(2)?, b(3)?]))
            }
            FrameRule::Cnot4 => Ok(cnot4_frame(o.bit(1)?, o.bit(3)?)),
            FrameRule::SquashedI => squashed_i_frame(o),
            FrameRule::Propagated(f) => f.eval(o),
        }
    }

    /// Runs the pattern on one input and decodes every branch.
    pub fn run<T: Real>(&self, phases: &EdgePhases<T>, inputs: &[InputState<T>], mode: OutcomeMode, schedule: Schedule) -> Result<ProtocolResult<T>> {
        let plan = Plan::new(&self.layout, schedule)?;
        let branches = execute(&self.layout, &plan, phases, &self.params, inputs, mode)?;
        let outputs = plan.outputs().to_vec();
        let input_state = StateVector::product(&outputs.iter().zip(inputs).map(|(s, i)| (*s, i.amplitudes())).collect::<Vec<_>>())?;
        let u = self.target_matrix::<T>()?;
        let target = StateVector::from_amplitudes(&outputs, u.apply(input_state.amplitudes()))?;
        let records = branches
            .into_iter()
            .map(|b| {
                let probability = b.state.norm_sqr();
                let raw = b.state.normalized();
                let (decoded, fidelity) = if probability.as_f64() < T::PROB_FLOOR {
                    (None, None)
                } else {
                    let mut d = raw.clone();
                    self.frame(&b.outcomes)?.decode(&mut d, &outputs)?;
                    let f = target.fidelity(&d)?;
                    (Some(d), Some(f))
                };
                Ok(BranchRecord { outcomes: b.outcomes, probability, raw, decoded, fidelity })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ProtocolResult { layout: self.layout.name.clone(), postselected: mode == OutcomeMode::PostselectZeros, target, branches: records })
    }

    /// Decoded branch operators (basis-input tomography).
    pub fn channel<T: Real>(&self, phases: &EdgePhases<T>, mode: OutcomeMode, schedule: Schedule) -> Result<Channel<T>> {
        let plan = Plan::new(&self.layout, schedule)?;
        let frame = |o: &Outcomes| self.frame(o);
        extract_channel(&self.layout, &plan, phases, &self.params, mode, Some(&frame))
    }
}

#[derive(Clone, Debug)]
pub struct BranchRecord<T: Real> {
    pub outcomes: Outcomes,
    pub probability: T,
    /// Normalized output before decoding.
    pub raw: StateVector<T>,
    pub decoded: Option<StateVector<T>>,
    pub fidelity: Option<T>,
}

#[derive(Clone, Debug)]
pub struct ProtocolResult<T: Real> {
    pub layout: String,
    pub postselected: bool,
    pub target: StateVector<T>,
    pub branches: Vec<BranchRecord<T>>,
}

impl<T: Real> ProtocolResult<T> {
    pub fn total_probability(&self) -> T {
        self.branches.iter().map(|b| b.probability).sum()
    }

    /// Born-weighted mean over branches; the single branch when postselected.
    pub fn average_fidelity(&self) -> T {
        if self.postselected {
            return self.branches.first().and_then(|b| b.fidelity).unwrap_or_else(T::zero);
        }
        self.branches.iter().map(|b| b.probability * b.fidelity.unwrap_or_else(T::zero)).sum()
    }

    /// Unweighted mean over possible branches.
    pub fn uniform_fidelity(&self) -> T {
        let f: Vec<T> = self.branches.iter().filter_map(|b| b.fidelity).collect();
        f.iter().copied().sum::<T>() / T::of(f.len().max(1) as f64)
    }
}

/// Transfer along linear(N) with the phases, input and branch mode given.
pub fn run_transfer<T: Real>(n: usize, phases: &PhaseAssignment, input: InputState<T>, mode: OutcomeMode) -> Result<ProtocolResult<T>> {
    if mode == OutcomeMode::Exhaustive && n > 15 {
        return Err(Error::BudgetExceeded { needed: 1u64 << (n - 1), cap: 1 << 14 });
    }
    let p = Protocol::transfer(n)?;
    p.run(&phases.resolve(&p.layout)?, &[input], mode, Schedule::Lazy)
}

pub fn run_rotation<T: Real>(
    variant: RotationVariant,
    euler: Euler,
    phases: &PhaseAssignment,
    input: InputState<T>,
    mode: OutcomeMode,
) -> Result<ProtocolResult<T>> {
    let p = Protocol::rotation(variant, euler)?;
    p.run(&phases.resolve(&p.layout)?, &[input], mode, Schedule::Lazy)
}

pub fn run_cnot<T: Real>(
    variant: CnotVariant,
    phases: &PhaseAssignment,
    control: InputState<T>,
    target: InputState<T>,
    mode: OutcomeMode,
) -> Result<ProtocolResult<T>> {
    let p = Protocol::cnot(variant)?;
    p.run(&phases.resolve(&p.layout)?, &[control, target], mode, Schedule::Lazy)
}

/// Effective two-line operator of the bridge block for one outcome, by
/// basis-state tomography, scaled by √2 to remove the bridge's Born amplitude.
pub fn bbb3_matrix<T: Real>(alpha: T, outcome: bool) -> Result<Matrix<T>> {
    let layout = builtin_layout("bbb3")?;
    let params = Params::from([("alpha".to_string(), alpha.as_f64())]);
    let plan = Plan::new(&layout, Schedule::Monolithic)?;
    let ch = extract_channel(&layout, &plan, &EdgePhases::zero(&layout), &params, OutcomeMode::Exhaustive, None)?;
    let k = ch.branches.iter().find(|(o, _)| o.get(Site(2)) == Some(outcome)).map(|(_, k)| k.clone()).ok_or(Error::MissingOutcome(Site(2)))?;
    Ok(k.scale(crate::scalar::C::new(T::SQRT_2(), T::zero())))
}
