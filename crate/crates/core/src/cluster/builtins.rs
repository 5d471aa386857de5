//! Named layouts.

use std::f64::consts::FRAC_PI_2;

use super::build::{bbb1, bbb2, bbb3, concat, insert_redundant, relabel_outputs};
use super::layout::{Angle, ClusterLayout, Edge, Role};
use crate::error::{Error, Result};
use crate::site::Site;

pub const BUILTIN_NAMES: &[&str] =
    &["bbb1", "bbb2", "bbb3", "box", "cnot4", "rot5", "rot7", "bridge-ebb", "squashed-i", "squashed-i-redundant", "helix"];

fn s(i: u32) -> Site {
    Site(i)
}

fn x() -> Angle {
    Angle::fixed(0.0)
}

fn y() -> Angle {
    Angle::fixed(FRAC_PI_2)
}

/// `linear(N)` or one of [`BUILTIN_NAMES`].
pub fn builtin_layout(name: &str) -> Result<ClusterLayout> {
    if let Some(n) = name.strip_prefix("linear(").and_then(|r| r.strip_suffix(')')) {
        let n: usize = n.trim().parse().map_err(|_| Error::UnknownLayout(name.to_string()))?;
        return linear(n);
    }
    match name {
        "bbb1" => {
            let mut l = bbb1(s(1), s(2), Angle::param("alpha", 1.0));
            l.name = name.into();
            Ok(l)
        }
        "bbb2" => Ok(bbb2(s(1), s(2))),
        "bbb3" => Ok(bbb3(s(1), s(2), s(3), Angle::param("alpha", 1.0))),
        "box" => box_layout(1, 2, 3, 4, Angle::param("alpha", 1.0), Angle::param("beta", 1.0), "box"),
        "cnot4" => concat(name, &[(bbb1(s(1), s(2), x()), vec![0]), (bbb2(s(2), s(3)), vec![0, 1]), (bbb1(s(3), s(4), x()), vec![1])]),
        "rot5" => rotation_chain(&[1, 2, 3, 4, 5], name),
        "rot7" => {
            let base = rotation_chain(&[1, 2, 4, 5, 7], name)?;
            let one = insert_redundant(&base, Edge::of(2, 4), s(3), s(4), name)?;
            insert_redundant(&one, Edge::of(5, 7), s(6), s(7), name)
        }
        "bridge-ebb" => {
            concat(name, &[(bbb3(s(1), s(2), s(3), y()), vec![0, 1]), (bbb1(s(1), s(4), y()), vec![0]), (bbb1(s(3), s(5), y()), vec![1])])
        }
        "squashed-i" => squashed_i(),
        "squashed-i-redundant" => insert_redundant(&squashed_i()?, Edge::of(8, 12), s(16), s(12), name),
        "helix" => helix(),
        _ => Err(Error::UnknownLayout(name.to_string())),
    }
}

/// Chain 1..N measured in σx on all but the last site.
pub fn linear(n: usize) -> Result<ClusterLayout> {
    if n == 0 {
        return Err(Error::BadChainLength(n));
    }
    let name = format!("linear({n})");
    if n == 1 {
        return Ok(ClusterLayout {
            name,
            lines: 1,
            sites: vec![s(1)],
            edges: Vec::new(),
            roles: [(s(1), Role::Through(0))].into(),
            pattern: Vec::new(),
            redundant: Vec::new(),
            blocks: Vec::new(),
        });
    }
    let parts: Vec<_> = (1..n as u32).map(|i| (bbb1(s(i), s(i + 1), x()), vec![0])).collect();
    concat(&name, &parts)
}

/// Five-site Euler rotation pattern on the given chain labels.
fn rotation_chain(l: &[u32; 5], name: &str) -> Result<ClusterLayout> {
    let [a, b, c, d, e] = *l;
    concat(
        name,
        &[
            (bbb1(s(a), s(b), x()), vec![0]),
            (bbb1(s(b), s(c), Angle::param("xi", -1.0).flipped_by(&[s(a)])), vec![0]),
            (bbb1(s(c), s(d), Angle::param("nu", -1.0).flipped_by(&[s(b)])), vec![0]),
            (bbb1(s(d), s(e), Angle::param("zeta", -1.0).flipped_by(&[s(a), s(c)])), vec![0]),
        ],
    )
}

fn box_layout(a: u32, b: u32, c: u32, d: u32, alpha: Angle, beta: Angle, name: &str) -> Result<ClusterLayout> {
    concat(
        name,
        &[(bbb2(s(a), s(b)), vec![0, 1]), (bbb1(s(a), s(c), alpha), vec![0]), (bbb1(s(b), s(d), beta), vec![1]), (bbb2(s(c), s(d)), vec![0, 1])],
    )
}

fn squashed_i() -> Result<ClusterLayout> {
    let b1 = |i: u32, o: u32, a: Angle, line: usize| (bbb1(s(i), s(o), a), vec![line]);
    concat(
        "squashed-i",
        &[
            b1(1, 2, x(), 0),
            b1(2, 3, y(), 0),
            b1(3, 4, y(), 0),
            b1(9, 10, x(), 1),
            b1(10, 11, x(), 1),
            b1(11, 12, x(), 1),
            (bbb3(s(4), s(8), s(12), y()), vec![0, 1]),
            b1(4, 5, y(), 0),
            b1(12, 13, y(), 1),
            b1(5, 6, y(), 0),
            b1(6, 7, y(), 0),
            b1(13, 14, x(), 1),
            b1(14, 15, x(), 1),
        ],
    )
}

fn helix() -> Result<ClusterLayout> {
    let b1 = |i: u32, o: u32, line: usize| (bbb1(s(i), s(o), x()), vec![line]);
    let inner = box_layout(1, 2, 3, 4, x(), x(), "box")?;
    let l = concat("helix", &[b1(5, 1, 0), b1(6, 7, 1), b1(7, 2, 1), (inner, vec![0, 1]), b1(3, 8, 0), b1(8, 9, 0), b1(4, 10, 1)])?;
    relabel_outputs(&l, &[1, 0])
}
