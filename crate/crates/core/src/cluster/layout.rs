//! Declarative cluster layouts and their text serialization.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::site::Site;

/// Unordered site pair, stored with the smaller label first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge(pub Site, pub Site);

impl Edge {
    pub fn new(a: Site, b: Site) -> Self {
        if a <= b {
            Edge(a, b)
        } else {
            Edge(b, a)
        }
    }

    pub fn of(a: u32, b: u32) -> Self {
        Self::new(Site(a), Site(b))
    }

    /// Phase slot name, e.g. `θ_{4,5}`.
    pub fn slot(&self) -> String {
        format!("θ_{{{},{}}}", self.0, self.1)
    }

    pub fn touches(&self, s: Site) -> bool {
        self.0 == s || self.1 == s
    }

    pub fn other(&self, s: Site) -> Option<Site> {
        if self.0 == s {
            Some(self.1)
        } else if self.1 == s {
            Some(self.0)
        } else {
            None
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.0, self.1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "line", rename_all = "lowercase")]
pub enum Role {
    Input(usize),
    Body,
    Output(usize),
    /// Input and output of the same line (never measured).
    Through(usize),
}

impl Role {
    pub fn line(&self) -> Option<usize> {
        match self {
            Role::Input(l) | Role::Output(l) | Role::Through(l) => Some(*l),
            Role::Body => None,
        }
    }

    pub fn is_input(&self) -> bool {
        matches!(self, Role::Input(_) | Role::Through(_))
    }

    pub fn is_output(&self) -> bool {
        matches!(self, Role::Output(_) | Role::Through(_))
    }
}

fn one() -> f64 {
    1.0
}

fn is_zero(x: &f64) -> bool {
    *x == 0.0
}

fn is_one(x: &f64) -> bool {
    *x == 1.0
}

/// Measurement angle in the xy plane: `(-1)^{⊕ s_flip} (constant + scale * param)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Angle {
    #[serde(default, skip_serializing_if = "is_zero")]
    pub constant: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub param: Option<String>,
    #[serde(default = "one", skip_serializing_if = "is_one")]
    pub scale: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub flip_on: Vec<Site>,
}

impl Angle {
    pub fn fixed(constant: f64) -> Self {
        Angle { constant, param: None, scale: 1.0, flip_on: Vec::new() }
    }

    pub fn param(name: &str, scale: f64) -> Self {
        Angle { constant: 0.0, param: Some(name.to_string()), scale, flip_on: Vec::new() }
    }

    pub fn flipped_by(mut self, sites: &[Site]) -> Self {
        self.flip_on = sites.to_vec();
        self
    }

    /// Angle before the adaptive sign.
    pub fn base(&self, params: &Params) -> Result<f64> {
        match &self.param {
            None => Ok(self.constant),
            Some(p) => {
                let v = params.get(p).ok_or_else(|| Error::MissingParam(p.clone()))?;
                Ok(self.constant + self.scale * v)
            }
        }
    }

    /// Adaptive angle given the outcomes recorded so far.
    pub fn resolve(&self, params: &Params, outcomes: &Outcomes) -> Result<f64> {
        let mut flip = false;
        for s in &self.flip_on {
            flip ^= outcomes.get(*s).ok_or(Error::MissingOutcome(*s))?;
        }
        let b = self.base(params)?;
        Ok(if flip { -b } else { b })
    }
}

/// Named angle parameters (Euler angles, block angles).
pub type Params = BTreeMap<String, f64>;

/// Measurement outcomes keyed by site.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Outcomes(BTreeMap<Site, bool>);

impl Outcomes {
    pub fn new() -> Self {
        Outcomes(BTreeMap::new())
    }

    pub fn from_pairs(pairs: &[(u32, bool)]) -> Self {
        Outcomes(pairs.iter().map(|(s, b)| (Site(*s), *b)).collect())
    }

    pub fn insert(&mut self, s: Site, v: bool) {
        self.0.insert(s, v);
    }

    pub fn get(&self, s: Site) -> Option<bool> {
        self.0.get(&s).copied()
    }

    pub fn bit(&self, s: u32) -> Result<bool> {
        self.get(Site(s)).ok_or(Error::MissingOutcome(Site(s)))
    }

    pub fn iter(&self) -> impl Iterator<Item = (Site, bool)> + '_ {
        self.0.iter().map(|(s, b)| (*s, *b))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn all_zero(&self) -> bool {
        self.0.values().all(|b| !b)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Measurement {
    pub site: Site,
    #[serde(flatten)]
    pub angle: Angle,
}

/// A site whose σx measurement shortens the cluster; `correct_on` is the
/// downstream neighbour that receives the local correction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Redundant {
    pub site: Site,
    pub correct_on: Site,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BlockKind {
    Bbb1,
    Bbb2,
    Bbb3,
    /// Output line permutation; `lines[k]` is the old line read as new line k.
    Relabel,
}

/// One building block of a concatenated layout.
///
/// For layouts with redundant sites the blocks describe the reduced cluster.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Block {
    pub kind: BlockKind,
    pub lines: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sites: Vec<Site>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub edges: Vec<Edge>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub measured: Vec<Site>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "LayoutDoc", into = "LayoutDoc")]
pub struct ClusterLayout {
    pub name: String,
    pub lines: usize,
    pub sites: Vec<Site>,
    pub edges: Vec<Edge>,
    pub roles: BTreeMap<Site, Role>,
    pub pattern: Vec<Measurement>,
    pub redundant: Vec<Redundant>,
    pub blocks: Vec<Block>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
struct RoleEntry {
    site: Site,
    #[serde(flatten)]
    role: Role,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
struct LayoutDoc {
    name: String,
    lines: usize,
    sites: Vec<Site>,
    edges: Vec<Edge>,
    roles: Vec<RoleEntry>,
    #[serde(default)]
    pattern: Vec<Measurement>,
    #[serde(default)]
    redundant: Vec<Redundant>,
    #[serde(default)]
    blocks: Vec<Block>,
}

impl TryFrom<LayoutDoc> for ClusterLayout {
    type Error = Error;

    fn try_from(d: LayoutDoc) -> Result<Self> {
        let mut roles = BTreeMap::new();
        for r in d.roles {
            if roles.insert(r.site, r.role).is_some() {
                return Err(Error::RoleConflict(r.site));
            }
        }
        let l = ClusterLayout {
            name: d.name,
            lines: d.lines,
            sites: d.sites,
            edges: d.edges,
            roles,
            pattern: d.pattern,
            redundant: d.redundant,
            blocks: d.blocks,
        };
        l.validate()?;
        Ok(l)
    }
}

impl From<ClusterLayout> for LayoutDoc {
    fn from(l: ClusterLayout) -> Self {
        LayoutDoc {
            name: l.name,
            lines: l.lines,
            sites: l.sites,
            edges: l.edges,
            roles: l.roles.into_iter().map(|(site, role)| RoleEntry { site, role }).collect(),
            pattern: l.pattern,
            redundant: l.redundant,
            blocks: l.blocks,
        }
    }
}

impl ClusterLayout {
    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn role(&self, s: Site) -> Result<Role> {
        self.roles.get(&s).copied().ok_or(Error::UnknownSite(s))
    }

    pub fn input_site(&self, line: usize) -> Option<Site> {
        self.roles.iter().find(|(_, r)| r.is_input() && r.line() == Some(line)).map(|(s, _)| *s)
    }

    pub fn output_site(&self, line: usize) -> Option<Site> {
        self.roles.iter().find(|(_, r)| r.is_output() && r.line() == Some(line)).map(|(s, _)| *s)
    }

    pub fn input_sites(&self) -> Vec<Site> {
        (0..self.lines).filter_map(|l| self.input_site(l)).collect()
    }

    pub fn output_sites(&self) -> Vec<Site> {
        (0..self.lines).filter_map(|l| self.output_site(l)).collect()
    }

    pub fn neighbors(&self, s: Site) -> Vec<Site> {
        self.edges.iter().filter_map(|e| e.other(s)).collect()
    }

    pub fn edges_of(&self, s: Site) -> Vec<Edge> {
        self.edges.iter().filter(|e| e.touches(s)).copied().collect()
    }

    pub fn redundant_entry(&self, s: Site) -> Option<Redundant> {
        self.redundant.iter().find(|r| r.site == s).copied()
    }

    pub fn measurement(&self, s: Site) -> Option<&Measurement> {
        self.pattern.iter().find(|m| m.site == s)
    }

    /// Angle parameter names referenced by the pattern.
    pub fn param_names(&self) -> BTreeSet<String> {
        self.pattern.iter().filter_map(|m| m.angle.param.clone()).collect()
    }

    /// Outcome sites: redundant sites first, then the pattern order.
    pub fn outcome_sites(&self) -> Vec<Site> {
        self.redundant.iter().map(|r| r.site).chain(self.pattern.iter().map(|m| m.site)).collect()
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidLayout(m));
        if self.lines == 0 {
            return bad("no logical lines".into());
        }
        if self.sites.is_empty() {
            return bad("no sites".into());
        }
        if self.sites.windows(2).any(|w| w[0] >= w[1]) {
            return bad("sites must be strictly increasing".into());
        }
        let site_set: BTreeSet<Site> = self.sites.iter().copied().collect();
        let mut seen = BTreeSet::new();
        for e in &self.edges {
            if e.0 == e.1 {
                return Err(Error::SelfLoop(e.0));
            }
            if e.0 > e.1 {
                return bad(format!("edge {e} is not normalized"));
            }
            if !site_set.contains(&e.0) || !site_set.contains(&e.1) {
                return bad(format!("edge {e} references a missing site"));
            }
            if !seen.insert(*e) {
                return bad(format!("duplicate edge {e}"));
            }
        }
        for s in &self.sites {
            if !self.roles.contains_key(s) {
                return bad(format!("site {s} has no role"));
            }
        }
        for s in self.roles.keys() {
            if !site_set.contains(s) {
                return bad(format!("role for missing site {s}"));
            }
        }
        for l in 0..self.lines {
            let ins = self.roles.values().filter(|r| r.is_input() && r.line() == Some(l)).count();
            let outs = self.roles.values().filter(|r| r.is_output() && r.line() == Some(l)).count();
            if ins != 1 || outs != 1 {
                return bad(format!("line {l} needs one input and one output"));
            }
        }
        if self.roles.values().any(|r| r.line().is_some_and(|l| l >= self.lines)) {
            return bad("role names a line beyond the line count".into());
        }
        let redundant: BTreeSet<Site> = self.redundant.iter().map(|r| r.site).collect();
        for r in &self.redundant {
            if self.roles.get(&r.site) != Some(&Role::Body) {
                return bad(format!("redundant site {} must be a body site", r.site));
            }
            if !self.neighbors(r.site).contains(&r.correct_on) {
                return bad(format!("correction site {} is not adjacent to {}", r.correct_on, r.site));
            }
        }
        let mut measured = BTreeSet::new();
        for m in &self.pattern {
            let role = self.role(m.site)?;
            if role.is_output() {
                return bad(format!("output site {} is measured", m.site));
            }
            if redundant.contains(&m.site) {
                return bad(format!("redundant site {} appears in the pattern", m.site));
            }
            for f in &m.angle.flip_on {
                if !measured.contains(f) && !redundant.contains(f) {
                    return bad(format!("angle of site {} depends on later site {f}", m.site));
                }
            }
            if !measured.insert(m.site) {
                return bad(format!("site {} measured twice", m.site));
            }
        }
        for (s, r) in &self.roles {
            let needs = matches!(r, Role::Input(_) | Role::Body) && !redundant.contains(s);
            if needs && !measured.contains(s) {
                return bad(format!("site {s} is never measured"));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_normalizes() {
        assert_eq!(Edge::of(5, 4), Edge::of(4, 5));
        assert_eq!(Edge::of(4, 5).slot(), "θ_{4,5}");
    }

    #[test]
    fn angle_resolution() {
        let a = Angle::param("xi", -1.0).flipped_by(&[Site(1)]);
        let mut p = Params::new();
        p.insert("xi".into(), 0.3);
        let mut o = Outcomes::new();
        o.insert(Site(1), false);
        assert_eq!(a.resolve(&p, &o).unwrap(), -0.3);
        o.insert(Site(1), true);
        assert_eq!(a.resolve(&p, &o).unwrap(), 0.3);
        assert_eq!(a.resolve(&Params::new(), &o), Err(Error::MissingParam("xi".into())));
        assert_eq!(a.resolve(&p, &Outcomes::new()), Err(Error::MissingOutcome(Site(1))));
    }
}
