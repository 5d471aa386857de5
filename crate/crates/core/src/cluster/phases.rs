//! Unwanted controlled-phase assignments.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::layout::{ClusterLayout, Edge};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// How the unwanted phase of every edge is chosen.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum PhaseAssignment {
    AllZero,
    CommonTheta {
        theta: f64,
    },
    /// Slot name to phase; every edge must be covered.
    Explicit {
        phases: BTreeMap<String, f64>,
    },
    IidGaussian {
        sigma: f64,
        seed: u64,
    },
}

/// Resolved per-edge phases.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgePhases<T: Real> {
    map: BTreeMap<Edge, T>,
}

impl<T: Real> EdgePhases<T> {
    pub fn zero(layout: &ClusterLayout) -> Self {
        Self::common(layout, T::zero())
    }

    pub fn common(layout: &ClusterLayout, theta: T) -> Self {
        EdgePhases { map: layout.edges.iter().map(|e| (*e, theta)).collect() }
    }

    pub fn from_map(map: BTreeMap<Edge, T>) -> Self {
        EdgePhases { map }
    }

    /// Phase of an edge; edges without an entry are ideal.
    pub fn get(&self, e: Edge) -> T {
        self.map.get(&e).copied().unwrap_or_else(T::zero)
    }

    pub fn set(&mut self, e: Edge, theta: T) {
        self.map.insert(e, theta);
    }

    pub fn iter(&self) -> impl Iterator<Item = (Edge, T)> + '_ {
        self.map.iter().map(|(e, t)| (*e, *t))
    }

    pub fn cast<U: Real>(&self) -> EdgePhases<U> {
        EdgePhases { map: self.map.iter().map(|(e, t)| (*e, U::of(t.as_f64()))).collect() }
    }

    pub fn covers(&self, layout: &ClusterLayout) -> bool {
        layout.edges.iter().all(|e| self.map.contains_key(e))
    }
}

/// Alternative slot names used for the squashed-I bridge region.
pub fn slot_aliases(layout: &ClusterLayout) -> Vec<(&'static str, Edge)> {
    if !layout.name.starts_with("squashed-i") {
        return Vec::new();
    }
    [("θ^R_4", Edge::of(4, 5)), ("θ^C_4", Edge::of(4, 8)), ("θ_8", Edge::of(8, 12)), ("θ_12", Edge::of(12, 13))]
        .into_iter()
        .filter(|(_, e)| layout.edges.contains(e))
        .collect()
}

impl PhaseAssignment {
    pub fn resolve<T: Real>(&self, layout: &ClusterLayout) -> Result<EdgePhases<T>> {
        match self {
            PhaseAssignment::AllZero => Ok(EdgePhases::zero(layout)),
            PhaseAssignment::CommonTheta { theta } => Ok(EdgePhases::common(layout, T::of(*theta))),
            PhaseAssignment::Explicit { phases } => {
                let aliases = slot_aliases(layout);
                let mut map = BTreeMap::new();
                for (name, v) in phases {
                    let edge = layout
                        .edges
                        .iter()
                        .find(|e| e.slot() == *name)
                        .copied()
                        .or_else(|| aliases.iter().find(|(a, _)| a == name).map(|(_, e)| *e))
                        .ok_or_else(|| Error::UnknownSlot(name.clone()))?;
                    map.insert(edge, T::of(*v));
                }
                for e in &layout.edges {
                    if !map.contains_key(e) {
                        return Err(Error::UncoveredSlot(e.slot()));
                    }
                }
                Ok(EdgePhases { map })
            }
            PhaseAssignment::IidGaussian { sigma, seed } => {
                if !(*sigma >= 0.0) {
                    return Err(Error::InvalidArgument(format!("sigma must be >= 0, got {sigma}")));
                }
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                let map = layout
                    .edges
                    .iter()
                    .map(|e| {
                        let z: f64 = StandardNormal.sample(&mut rng);
                        (*e, T::of(sigma * z))
                    })
                    .collect();
                Ok(EdgePhases { map })
            }
        }
    }
}
