//! Cluster layouts, building blocks and state construction.

mod build;
mod builtins;
mod layout;
mod phases;
mod redundant;

pub use build::{bbb1, bbb2, bbb3, concat, encode_inputs, entangle_all, insert_redundant, relabel_outputs};
pub use builtins::{builtin_layout, linear, BUILTIN_NAMES};
pub use layout::{Angle, Block, BlockKind, ClusterLayout, Edge, Measurement, Outcomes, Params, Redundant, Role};
pub use phases::{slot_aliases, EdgePhases, PhaseAssignment};
pub use redundant::{remove_redundant, remove_redundant_unnormalized, LocalCorrectionRecord, LocalGate};

use crate::error::Result;
use crate::scalar::Real;
use crate::site::Site;
use crate::statevector::{EigenCheck, StateVector};

/// Correlation operator check at `site` using the layout's neighbourhood.
pub fn correlation_eigencheck<T: Real>(state: &StateVector<T>, layout: &ClusterLayout, site: Site) -> Result<EigenCheck> {
    layout.role(site)?;
    state.correlation_eigencheck(site, &layout.neighbors(site))
}
