use std::fmt;

use serde::{Deserialize, Serialize};

/// Cluster site label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Site(pub u32);

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<u32> for Site {
    fn from(v: u32) -> Self {
        Site(v)
    }
}

/// Shorthand for a list of sites.
pub fn sites(ids: &[u32]) -> Vec<Site> {
    ids.iter().copied().map(Site).collect()
}
