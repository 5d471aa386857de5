//! Removal of redundant sites by σx measurement.

use serde::{Deserialize, Serialize};

use super::layout::ClusterLayout;
use crate::error::{Error, Result};
use crate::gate::Gate2x2;
use crate::scalar::Real;
use crate::site::Site;
use crate::statevector::StateVector;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LocalGate {
    H,
    X,
    Z,
}

impl LocalGate {
    pub fn matrix<T: Real>(self) -> Gate2x2<T> {
        match self {
            LocalGate::H => Gate2x2::h(),
            LocalGate::X => Gate2x2::x(),
            LocalGate::Z => Gate2x2::z(),
        }
    }
}

/// Single-qubit operations owed after a removal, in application order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalCorrectionRecord {
    pub ops: Vec<(Site, LocalGate)>,
}

impl LocalCorrectionRecord {
    pub fn apply<T: Real>(&self, state: &mut StateVector<T>) -> Result<()> {
        for (s, g) in &self.ops {
            state.apply_1q(*s, &g.matrix())?;
        }
        Ok(())
    }
}

/// Measures a redundant site in the σx basis and returns the corrections
/// (X^s then H on the downstream neighbour) that restore the shorter cluster.
///
/// The caller must have applied only the removed site's own edges to the
/// correction site, so that it is still a leaf.
pub fn remove_redundant<T: Real>(
    state: &StateVector<T>,
    layout: &ClusterLayout,
    site: Site,
    outcome: bool,
) -> Result<(T, StateVector<T>, LocalCorrectionRecord)> {
    let entry = layout.redundant_entry(site).ok_or(Error::NotRedundant(site))?;
    let proj = state.project_xy(site, T::zero(), outcome)?;
    let p = proj.probability;
    let reduced = proj.into_state()?;
    let mut ops = Vec::new();
    if outcome {
        ops.push((entry.correct_on, LocalGate::X));
    }
    ops.push((entry.correct_on, LocalGate::H));
    Ok((p, reduced, LocalCorrectionRecord { ops }))
}

/// Same projection without renormalization, for branch enumeration.
pub fn remove_redundant_unnormalized<T: Real>(
    state: &StateVector<T>,
    layout: &ClusterLayout,
    site: Site,
    outcome: bool,
) -> Result<(StateVector<T>, LocalCorrectionRecord)> {
    let entry = layout.redundant_entry(site).ok_or(Error::NotRedundant(site))?;
    let reduced = state.project_xy_unnormalized(site, T::zero(), outcome)?;
    let mut ops = Vec::new();
    if outcome {
        ops.push((entry.correct_on, LocalGate::X));
    }
    ops.push((entry.correct_on, LocalGate::H));
    Ok((reduced, LocalCorrectionRecord { ops }))
}
