//! Pattern execution with branch enumeration.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::cluster::{remove_redundant_unnormalized, ClusterLayout, Edge, EdgePhases, Outcomes, Params, Redundant, Role};
use crate::error::{Error, Result};
use crate::gate::Matrix;
use crate::input::InputState;
use crate::pauliframe::PauliFrame;
use crate::scalar::Real;
use crate::site::Site;
use crate::statevector::StateVector;

/// Which outcome branches are followed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum OutcomeMode {
    #[default]
    Exhaustive,
    PostselectZeros,
}

/// Order in which entangling gates and measurements are interleaved.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Schedule {
    /// Entangle everything, then measure.
    Monolithic,
    /// Entangle a site's pending edges just before it is measured.
    #[default]
    Lazy,
    /// Entangle and measure block by block.
    Staged,
}

#[derive(Clone, Debug, PartialEq)]
enum Step {
    Init(Site),
    Cz(Edge),
    Remove(Redundant),
    Measure(usize),
}

/// Execution plan for one layout and schedule.
#[derive(Clone, Debug)]
pub struct Plan {
    steps: Vec<Step>,
    outputs: Vec<Site>,
}

struct Builder<'a> {
    layout: &'a ClusterLayout,
    steps: Vec<Step>,
    live: BTreeSet<Site>,
    done: BTreeSet<Edge>,
}

impl<'a> Builder<'a> {
    fn init(&mut self, s: Site) {
        if self.live.insert(s) {
            self.steps.push(Step::Init(s));
        }
    }

    fn edge(&mut self, e: Edge) -> Result<()> {
        if !self.layout.edges.contains(&e) {
            return Err(Error::InvalidLayout(format!("block edge {e} is not in the layout")));
        }
        if self.done.insert(e) {
            self.init(e.0);
            self.init(e.1);
            self.steps.push(Step::Cz(e));
        }
        Ok(())
    }

    fn pending_edges_of(&self, s: Site) -> Vec<Edge> {
        self.layout.edges_of(s).into_iter().filter(|e| !self.done.contains(e)).collect()
    }
}

impl Plan {
    pub fn new(layout: &ClusterLayout, schedule: Schedule) -> Result<Self> {
        let mut b = Builder { layout, steps: Vec::new(), live: BTreeSet::new(), done: BTreeSet::new() };
        for r in &layout.redundant {
            let touched = layout.edges_of(r.correct_on).iter().any(|e| b.done.contains(e));
            if touched {
                return Err(Error::InvalidLayout(format!("correction site {} is entangled before removal", r.correct_on)));
            }
            for e in layout.edges_of(r.site) {
                b.edge(e)?;
            }
            b.steps.push(Step::Remove(*r));
        }
        match schedule {
            Schedule::Monolithic => {
                for s in &layout.sites {
                    if !layout.redundant.iter().any(|r| r.site == *s) {
                        b.init(*s);
                    }
                }
                for e in &layout.edges {
                    b.edge(*e)?;
                }
                for i in 0..layout.pattern.len() {
                    b.steps.push(Step::Measure(i));
                }
            }
            Schedule::Lazy => {
                for (i, m) in layout.pattern.iter().enumerate() {
                    b.init(m.site);
                    for e in b.pending_edges_of(m.site) {
                        b.edge(e)?;
                    }
                    b.steps.push(Step::Measure(i));
                }
            }
            Schedule::Staged => {
                if !layout.redundant.is_empty() || layout.blocks.is_empty() {
                    return Err(Error::NotConcatenated);
                }
                for blk in &layout.blocks {
                    for e in &blk.edges {
                        b.edge(*e)?;
                    }
                    for s in &blk.measured {
                        let i = layout
                            .pattern
                            .iter()
                            .position(|m| m.site == *s)
                            .ok_or_else(|| Error::InvalidLayout(format!("block measures unpatterned site {s}")))?;
                        if !b.pending_edges_of(*s).is_empty() {
                            return Err(Error::NotConcatenated);
                        }
                        b.steps.push(Step::Measure(i));
                    }
                }
            }
        }
        for s in layout.output_sites() {
            b.init(s);
        }
        for e in layout.edges.clone() {
            b.edge(e)?;
        }
        Ok(Plan { steps: b.steps, outputs: layout.output_sites() })
    }

    pub fn outputs(&self) -> &[Site] {
        &self.outputs
    }
}

/// One followed outcome branch; `state` is unnormalized with squared norm
/// equal to the branch probability, labelled by the output sites in line order.
#[derive(Clone, Debug)]
pub struct Branch<T: Real> {
    pub outcomes: Outcomes,
    pub state: StateVector<T>,
}

/// Runs a plan on the given inputs and returns every followed branch.
pub fn execute<T: Real>(
    layout: &ClusterLayout,
    plan: &Plan,
    phases: &EdgePhases<T>,
    params: &Params,
    inputs: &[InputState<T>],
    mode: OutcomeMode,
) -> Result<Vec<Branch<T>>> {
    if inputs.len() != layout.lines {
        return Err(Error::InputCount { expected: layout.lines, got: inputs.len() });
    }
    let mut out = Vec::new();
    let ctx = Ctx { layout, plan, phases, params, inputs, mode };
    ctx.dfs(0, StateVector::scalar(crate::scalar::c_one()), Outcomes::new(), &mut out)?;
    Ok(out)
}

struct Ctx<'a, T: Real> {
    layout: &'a ClusterLayout,
    plan: &'a Plan,
    phases: &'a EdgePhases<T>,
    params: &'a Params,
    inputs: &'a [InputState<T>],
    mode: OutcomeMode,
}

impl<T: Real> Ctx<'_, T> {
    fn outcomes_to_follow(&self) -> &'static [bool] {
        match self.mode {
            OutcomeMode::Exhaustive => &[false, true],
            OutcomeMode::PostselectZeros => &[false],
        }
    }

    fn dfs(&self, mut i: usize, mut state: StateVector<T>, outcomes: Outcomes, out: &mut Vec<Branch<T>>) -> Result<()> {
        while i < self.plan.steps.len() {
            match &self.plan.steps[i] {
                Step::Init(s) => {
                    let v = match self.layout.role(*s)? {
                        Role::Input(l) | Role::Through(l) => self.inputs[l].amplitudes(),
                        _ => InputState::plus().amplitudes(),
                    };
                    state.push_qubit(*s, v)?;
                }
                Step::Cz(e) => state.apply_cphase(e.0, e.1, self.phases.get(*e))?,
                Step::Remove(r) => {
                    for &o in self.outcomes_to_follow() {
                        let (mut next, rec) = remove_redundant_unnormalized(&state, self.layout, r.site, o)?;
                        rec.apply(&mut next)?;
                        let mut oc = outcomes.clone();
                        oc.insert(r.site, o);
                        self.dfs(i + 1, next, oc, out)?;
                    }
                    return Ok(());
                }
                Step::Measure(k) => {
                    let m = &self.layout.pattern[*k];
                    let alpha = T::of(m.angle.resolve(self.params, &outcomes)?);
                    for &o in self.outcomes_to_follow() {
                        let next = state.project_xy_unnormalized(m.site, alpha, o)?;
                        let mut oc = outcomes.clone();
                        oc.insert(m.site, o);
                        self.dfs(i + 1, next, oc, out)?;
                    }
                    return Ok(());
                }
            }
            i += 1;
        }
        out.push(Branch { outcomes, state: state.reordered(&self.plan.outputs)? });
        Ok(())
    }
}

/// Per-branch linear maps from logical inputs to decoded outputs.
#[derive(Clone, Debug)]
pub struct Channel<T: Real> {
    pub lines: usize,
    pub branches: Vec<(Outcomes, Matrix<T>)>,
}

fn basis_inputs<T: Real>(lines: usize, index: usize) -> Vec<InputState<T>> {
    (0..lines).map(|l| InputState::basis((index >> l) & 1 == 1)).collect()
}

/// Closed-form decoder from outcomes to a Pauli frame.
pub type FrameFn<'a> = dyn Fn(&Outcomes) -> Result<PauliFrame> + 'a;

/// Branch operators K_s, assembled column by column from basis inputs and
/// decoded with `frame` (pass `None` for the raw maps).
pub fn extract_channel<T: Real>(
    layout: &ClusterLayout,
    plan: &Plan,
    phases: &EdgePhases<T>,
    params: &Params,
    mode: OutcomeMode,
    frame: Option<&FrameFn<'_>>,
) -> Result<Channel<T>> {
    let d = 1usize << layout.lines;
    let mut columns: Vec<Vec<Vec<crate::scalar::C<T>>>> = Vec::new();
    let mut keys: Vec<Outcomes> = Vec::new();
    for b in 0..d {
        let branches = execute(layout, plan, phases, params, &basis_inputs(layout.lines, b), mode)?;
        if b == 0 {
            keys = branches.iter().map(|br| br.outcomes.clone()).collect();
            columns = vec![Vec::with_capacity(d); branches.len()];
        }
        if branches.len() != keys.len() {
            return Err(Error::InvalidLayout("branch structure depends on the input".into()));
        }
        for (k, mut br) in branches.into_iter().enumerate() {
            if br.outcomes != keys[k] {
                return Err(Error::InvalidLayout("branch order depends on the input".into()));
            }
            if let Some(f) = frame {
                f(&br.outcomes)?.decode(&mut br.state, &plan.outputs)?;
            }
            columns[k].push(br.state.amplitudes().to_vec());
        }
    }
    let branches = keys.into_iter().zip(columns).map(|(o, cols)| (o, Matrix::from_columns(&cols))).collect();
    Ok(Channel { lines: layout.lines, branches })
}

impl<T: Real> Channel<T> {
    /// Σ_s K_s† K_s, the identity for a complete enumeration.
    pub fn completeness(&self) -> Matrix<T> {
        let d = 1usize << self.lines;
        let mut acc = Matrix::zeros(d);
        for (_, k) in &self.branches {
            let p = &k.adjoint() * k;
            for i in 0..d {
                for j in 0..d {
                    acc.set(i, j, acc.get(i, j) + p.get(i, j));
                }
            }
        }
        acc
    }

    /// M_s = U† K_s, so that <Uψ|K_s ψ> = <ψ|M_s|ψ>.
    pub fn relative_to(&self, target: &Matrix<T>) -> Vec<Matrix<T>> {
        let ud = target.adjoint();
        self.branches.iter().map(|(_, k)| &ud * k).collect()
    }
}
