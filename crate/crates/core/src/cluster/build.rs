//! Building blocks, concatenation and state preparation.

use std::collections::{BTreeMap, BTreeSet};

use super::layout::{Angle, Block, BlockKind, ClusterLayout, Edge, Measurement, Redundant, Role};
use super::phases::EdgePhases;
use crate::error::{Error, Result};
use crate::input::InputState;
use crate::scalar::Real;
use crate::site::Site;
use crate::statevector::StateVector;

/// Two-site block measured on `input`: X^s H Rz(-α) on one line.
pub fn bbb1(input: Site, output: Site, angle: Angle) -> ClusterLayout {
    let e = Edge::new(input, output);
    ClusterLayout {
        name: "bbb1".into(),
        lines: 1,
        sites: sorted(&[input, output]),
        edges: vec![e],
        roles: BTreeMap::from([(input, Role::Input(0)), (output, Role::Output(0))]),
        pattern: vec![Measurement { site: input, angle }],
        redundant: Vec::new(),
        blocks: vec![Block { kind: BlockKind::Bbb1, lines: vec![0], sites: vec![input, output], edges: vec![e], measured: vec![input] }],
    }
}

/// Controlled-Z between two lines, nothing measured.
pub fn bbb2(a: Site, b: Site) -> ClusterLayout {
    let e = Edge::new(a, b);
    ClusterLayout {
        name: "bbb2".into(),
        lines: 2,
        sites: sorted(&[a, b]),
        edges: vec![e],
        roles: BTreeMap::from([(a, Role::Through(0)), (b, Role::Through(1))]),
        pattern: Vec::new(),
        redundant: Vec::new(),
        blocks: vec![Block { kind: BlockKind::Bbb2, lines: vec![0, 1], sites: vec![a, b], edges: vec![e], measured: vec![] }],
    }
}

/// Two lines joined through a measured bridge site.
pub fn bbb3(a: Site, bridge: Site, b: Site, angle: Angle) -> ClusterLayout {
    let edges = sorted_edges(&[Edge::new(a, bridge), Edge::new(bridge, b)]);
    ClusterLayout {
        name: "bbb3".into(),
        lines: 2,
        sites: sorted(&[a, bridge, b]),
        edges: edges.clone(),
        roles: BTreeMap::from([(a, Role::Through(0)), (bridge, Role::Body), (b, Role::Through(1))]),
        pattern: vec![Measurement { site: bridge, angle }],
        redundant: Vec::new(),
        blocks: vec![Block { kind: BlockKind::Bbb3, lines: vec![0, 1], sites: vec![a, bridge, b], edges, measured: vec![bridge] }],
    }
}

fn sorted(s: &[Site]) -> Vec<Site> {
    let mut v = s.to_vec();
    v.sort();
    v
}

fn sorted_edges(e: &[Edge]) -> Vec<Edge> {
    let mut v = e.to_vec();
    v.sort();
    v
}

fn remap_block(b: &Block, map: &[usize], total: usize) -> Block {
    let mut out = b.clone();
    match b.kind {
        BlockKind::Relabel => {
            let mut perm: Vec<usize> = (0..total).collect();
            for (k, old) in b.lines.iter().enumerate() {
                perm[map[k]] = map[*old];
            }
            out.lines = perm;
        }
        _ => out.lines = b.lines.iter().map(|l| map[*l]).collect(),
    }
    out
}

/// Glues layouts in order. `map[k]` is the global line of local line `k`;
/// a line already present continues from its current output site.
pub fn concat(name: &str, parts: &[(ClusterLayout, Vec<usize>)]) -> Result<ClusterLayout> {
    if parts.is_empty() {
        return Err(Error::InvalidLayout("nothing to concatenate".into()));
    }
    let total = parts.iter().flat_map(|(_, m)| m.iter()).max().map_or(0, |m| m + 1);
    let mut sites: BTreeSet<Site> = BTreeSet::new();
    let mut edges: BTreeSet<Edge> = BTreeSet::new();
    let mut pattern = Vec::new();
    let mut blocks = Vec::new();
    let mut redundant: Vec<Redundant> = Vec::new();
    let mut start: BTreeMap<usize, Site> = BTreeMap::new();
    let mut end: BTreeMap<usize, Site> = BTreeMap::new();

    for (part, map) in parts {
        if map.len() != part.lines {
            return Err(Error::OverlapViolation(format!("{} has {} lines but the gluing map names {}", part.name, part.lines, map.len())));
        }
        if map.iter().collect::<BTreeSet<_>>().len() != map.len() {
            return Err(Error::OverlapViolation(format!("gluing map {map:?} repeats a line")));
        }
        let mut glued = BTreeSet::new();
        for (k, g) in map.iter().enumerate() {
            let input = part.input_site(k).ok_or_else(|| Error::InvalidLayout(format!("{} has no input on line {k}", part.name)))?;
            match end.get(g) {
                Some(prev) if *prev != input => {
                    return Err(Error::OverlapViolation(format!("line {g} ends at site {prev} but {} starts it at {input}", part.name)));
                }
                Some(_) => {
                    glued.insert(input);
                }
                None => {
                    start.insert(*g, input);
                }
            }
        }
        for s in &part.sites {
            if !glued.contains(s) && !sites.insert(*s) {
                return Err(Error::RoleConflict(*s));
            }
        }
        for e in &part.edges {
            if !edges.insert(*e) {
                return Err(Error::OverlapViolation(format!("edge {e} appears twice")));
            }
        }
        pattern.extend(part.pattern.iter().cloned());
        redundant.extend(part.redundant.iter().copied());
        blocks.extend(part.blocks.iter().map(|b| remap_block(b, map, total)));
        for (k, g) in map.iter().enumerate() {
            let out = part.output_site(k).ok_or_else(|| Error::InvalidLayout(format!("{} has no output on line {k}", part.name)))?;
            end.insert(*g, out);
        }
    }
    if start.len() != total {
        return Err(Error::OverlapViolation("logical lines are not contiguous".into()));
    }
    let mut roles: BTreeMap<Site, Role> = sites.iter().map(|s| (*s, Role::Body)).collect();
    for (g, s) in &start {
        roles.insert(*s, Role::Input(*g));
    }
    for (g, s) in &end {
        let r = match roles.get(s) {
            Some(Role::Input(l)) if l == g => Role::Through(*g),
            Some(Role::Body) => Role::Output(*g),
            _ => return Err(Error::RoleConflict(*s)),
        };
        roles.insert(*s, r);
    }
    let layout = ClusterLayout {
        name: name.to_string(),
        lines: total,
        sites: sites.into_iter().collect(),
        edges: edges.into_iter().collect(),
        roles,
        pattern,
        redundant,
        blocks,
    };
    layout.validate()?;
    Ok(layout)
}

/// Reads old line `perm[k]` as new line `k` at the output.
pub fn relabel_outputs(layout: &ClusterLayout, perm: &[usize]) -> Result<ClusterLayout> {
    let n = layout.lines;
    let mut check: Vec<usize> = perm.to_vec();
    check.sort();
    if check != (0..n).collect::<Vec<_>>() {
        return Err(Error::InvalidArgument(format!("{perm:?} is not a permutation of {n} lines")));
    }
    let mut out = layout.clone();
    for (k, old) in perm.iter().enumerate() {
        let s = layout.output_site(*old).ok_or_else(|| Error::InvalidLayout(format!("no output on line {old}")))?;
        match layout.role(s)? {
            Role::Output(_) => {
                out.roles.insert(s, Role::Output(k));
            }
            Role::Through(l) if l == k => {}
            _ => return Err(Error::RoleConflict(s)),
        }
    }
    out.blocks.push(Block { kind: BlockKind::Relabel, lines: perm.to_vec(), sites: vec![], edges: vec![], measured: vec![] });
    out.validate()?;
    Ok(out)
}

/// Splits edge (a, b) with a new redundant site whose removal corrects `correct_on`.
pub fn insert_redundant(layout: &ClusterLayout, edge: Edge, site: Site, correct_on: Site, name: &str) -> Result<ClusterLayout> {
    if !layout.edges.contains(&edge) {
        return Err(Error::InvalidLayout(format!("no edge {edge}")));
    }
    if !edge.touches(correct_on) {
        return Err(Error::InvalidLayout(format!("{correct_on} is not an endpoint of {edge}")));
    }
    if layout.sites.contains(&site) {
        return Err(Error::DuplicateSite(site));
    }
    let mut out = layout.clone();
    out.name = name.to_string();
    out.edges.retain(|e| *e != edge);
    out.edges.push(Edge::new(edge.0, site));
    out.edges.push(Edge::new(site, edge.1));
    out.edges.sort();
    out.sites.push(site);
    out.sites.sort();
    out.roles.insert(site, Role::Body);
    out.redundant.push(Redundant { site, correct_on });
    out.validate()?;
    Ok(out)
}

fn prepare<T: Real>(layout: &ClusterLayout, inputs: Option<&[InputState<T>]>) -> Result<StateVector<T>> {
    let plus = InputState::<T>::plus().amplitudes();
    let qubits: Vec<(Site, _)> = layout
        .sites
        .iter()
        .map(|s| {
            let v = match (inputs, layout.roles[s]) {
                (Some(inp), Role::Input(l) | Role::Through(l)) => inp[l].amplitudes(),
                _ => plus,
            };
            (*s, v)
        })
        .collect();
    StateVector::product(&qubits)
}

fn entangle<T: Real>(state: &mut StateVector<T>, layout: &ClusterLayout, phases: &EdgePhases<T>) -> Result<()> {
    if !phases.covers(layout) {
        let e = layout.edges.iter().find(|e| phases.iter().all(|(p, _)| p != **e)).copied();
        return Err(Error::UncoveredSlot(e.map(|e| e.slot()).unwrap_or_default()));
    }
    for e in &layout.edges {
        state.apply_cphase(e.0, e.1, phases.get(*e))?;
    }
    Ok(())
}

/// S_D |+>_C over every site of the layout.
pub fn entangle_all<T: Real>(layout: &ClusterLayout, phases: &EdgePhases<T>) -> Result<StateVector<T>> {
    let mut s = prepare(layout, None)?;
    entangle(&mut s, layout, phases)?;
    Ok(s)
}

/// Input sites in the given states, the rest in |+>, then every edge gate.
pub fn encode_inputs<T: Real>(layout: &ClusterLayout, inputs: &[InputState<T>], phases: &EdgePhases<T>) -> Result<StateVector<T>> {
    if inputs.len() != layout.lines {
        return Err(Error::InputCount { expected: layout.lines, got: inputs.len() });
    }
    let mut s = prepare(layout, Some(inputs))?;
    entangle(&mut s, layout, phases)?;
    Ok(s)
}
