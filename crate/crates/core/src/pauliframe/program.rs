//! Logical program of a concatenated layout and symbolic frame propagation.

use std::collections::BTreeSet;
use std::f64::consts::{FRAC_PI_2, PI};

use super::{PauliFrame, Phase};
use crate::cluster::{Angle, BlockKind, ClusterLayout, Outcomes, Params};
use crate::error::{Error, Result};
use crate::gate::{Gate2x2, Matrix};
use crate::scalar::{cis, Real, C};
use crate::site::Site;

/// Parity of a set of outcomes plus a constant bit.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ParityForm {
    pub sites: BTreeSet<Site>,
    pub constant: bool,
}

impl ParityForm {
    pub fn of_sites(sites: &[Site]) -> Self {
        let mut f = ParityForm::default();
        for s in sites {
            f.toggle(*s);
        }
        f
    }

    pub fn toggle(&mut self, s: Site) {
        if !self.sites.remove(&s) {
            self.sites.insert(s);
        }
    }

    pub fn xor(&self, o: &ParityForm) -> ParityForm {
        ParityForm { sites: self.sites.symmetric_difference(&o.sites).copied().collect(), constant: self.constant ^ o.constant }
    }

    pub fn is_zero(&self) -> bool {
        self.sites.is_empty() && !self.constant
    }

    pub fn eval(&self, o: &Outcomes) -> Result<bool> {
        let mut v = self.constant;
        for s in &self.sites {
            v ^= o.get(*s).ok_or(Error::MissingOutcome(*s))?;
        }
        Ok(v)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum LogicalOp {
    H(usize),
    /// Rz(-angle) realized by measuring `site`.
    MeasuredRz {
        line: usize,
        site: Site,
        angle: Angle,
    },
    Cz(usize, usize),
    /// Bridge gate diag(1+e^{-iα}, 1-e^{-iα}, 1-e^{-iα}, 1+e^{-iα})/√2 realized by measuring `site`.
    Bridge {
        lines: (usize, usize),
        site: Site,
        angle: Angle,
    },
    /// X^{s_site} byproduct on a line.
    ByproductX {
        line: usize,
        site: Site,
    },
    /// New line k reads old line perm[k].
    Permute(Vec<usize>),
}

/// Gate sequence read off a layout's blocks.
#[derive(Clone, Debug, PartialEq)]
pub struct LogicalProgram {
    pub lines: usize,
    pub ops: Vec<LogicalOp>,
}

fn near_multiple(x: f64, unit: f64) -> bool {
    let k = x / unit;
    (k - k.round()).abs() < 1e-12
}

impl LogicalProgram {
    pub fn from_layout(layout: &ClusterLayout) -> Result<Self> {
        let angle_of = |s: Site| -> Result<Angle> {
            layout.measurement(s).map(|m| m.angle.clone()).ok_or_else(|| Error::InvalidLayout(format!("block measures {s} but the pattern does not")))
        };
        let mut ops = Vec::new();
        for b in &layout.blocks {
            match b.kind {
                BlockKind::Bbb1 => {
                    let (line, site) = (b.lines[0], b.measured[0]);
                    ops.push(LogicalOp::MeasuredRz { line, site, angle: angle_of(site)? });
                    ops.push(LogicalOp::H(line));
                    ops.push(LogicalOp::ByproductX { line, site });
                }
                BlockKind::Bbb2 => ops.push(LogicalOp::Cz(b.lines[0], b.lines[1])),
                BlockKind::Bbb3 => {
                    let site = b.measured[0];
                    ops.push(LogicalOp::Bridge { lines: (b.lines[0], b.lines[1]), site, angle: angle_of(site)? });
                }
                BlockKind::Relabel => ops.push(LogicalOp::Permute(b.lines.clone())),
            }
        }
        Ok(LogicalProgram { lines: layout.lines, ops })
    }

    /// Ideal gate with every adaptive sign taken as intended.
    pub fn unitary<T: Real>(&self, params: &Params) -> Result<Matrix<T>> {
        let n = self.lines;
        let mut u = Matrix::identity(1 << n);
        for op in &self.ops {
            let g = match op {
                LogicalOp::H(l) => Matrix::embed(&Gate2x2::h(), *l, n),
                LogicalOp::MeasuredRz { line, angle, .. } => Matrix::embed(&Gate2x2::rz(T::of(-angle.base(params)?)), *line, n),
                LogicalOp::Cz(i, j) => Matrix::cz(*i, *j, n),
                LogicalOp::Bridge { lines: (i, j), angle, site } => {
                    let a = angle.base(params)?;
                    if !near_multiple(a - FRAC_PI_2, PI) {
                        return Err(Error::NonAdaptedRotation(*site));
                    }
                    bridge_matrix(T::of(a), false, *i, *j, n)
                }
                LogicalOp::ByproductX { .. } => continue,
                LogicalOp::Permute(p) => permutation_matrix(p),
            };
            u = &g * &u;
        }
        Ok(u)
    }
}

/// Bridge operator for one outcome, normalized so that it is unitary when cos α = 0.
pub fn bridge_matrix<T: Real>(alpha: T, outcome: bool, i: usize, j: usize, n: usize) -> Matrix<T> {
    let e = cis(-alpha);
    let one = C::new(T::one(), T::zero());
    let half = T::FRAC_1_SQRT_2();
    let (same, diff) = if outcome { (one - e, one + e) } else { (one + e, one - e) };
    let d: Vec<C<T>> = (0..1usize << n).map(|k| if ((k >> i) ^ (k >> j)) & 1 == 0 { same * half } else { diff * half }).collect();
    Matrix::diag(&d)
}

pub fn permutation_matrix<T: Real>(perm: &[usize]) -> Matrix<T> {
    let n = perm.len();
    let mut m = Matrix::zeros(1 << n);
    for col in 0..1usize << n {
        let row = (0..n).fold(0usize, |acc, k| acc | (((col >> perm[k]) & 1) << k));
        m.set(row, col, C::new(T::one(), T::zero()));
    }
    m
}

/// Frame whose exponents are parities of measurement outcomes.
#[derive(Clone, Debug, PartialEq)]
pub struct SymbolicFrame {
    pub lines: Vec<(ParityForm, ParityForm)>,
}

impl SymbolicFrame {
    pub fn identity(n: usize) -> Self {
        SymbolicFrame { lines: vec![Default::default(); n] }
    }

    /// Pushes the byproducts of every op to the output.
    pub fn propagate(program: &LogicalProgram, params: &Params) -> Result<Self> {
        let mut f = Self::identity(program.lines);
        for op in &program.ops {
            match op {
                LogicalOp::H(l) => {
                    let (x, z) = f.lines[*l].clone();
                    f.lines[*l] = (z, x);
                }
                LogicalOp::MeasuredRz { line, site, angle } => {
                    let r = f.lines[*line].0.xor(&ParityForm::of_sites(&angle.flip_on));
                    if !r.is_zero() {
                        let b = angle.base(params)?;
                        if near_multiple(b - FRAC_PI_2, PI) {
                            f.lines[*line].1 = f.lines[*line].1.xor(&r);
                        } else if !near_multiple(b, PI) {
                            return Err(Error::NonAdaptedRotation(*site));
                        }
                    }
                }
                LogicalOp::Cz(i, j) => {
                    let (xi, xj) = (f.lines[*i].0.clone(), f.lines[*j].0.clone());
                    f.lines[*i].1 = f.lines[*i].1.xor(&xj);
                    f.lines[*j].1 = f.lines[*j].1.xor(&xi);
                }
                LogicalOp::Bridge { lines: (i, j), site, angle } => {
                    let b = angle.base(params)?;
                    if !near_multiple(b - FRAC_PI_2, PI) {
                        return Err(Error::NonAdaptedRotation(*site));
                    }
                    let mut r = f.lines[*i].0.xor(&f.lines[*j].0).xor(&ParityForm::of_sites(&angle.flip_on));
                    r.toggle(*site);
                    f.lines[*i].1 = f.lines[*i].1.xor(&r);
                    f.lines[*j].1 = f.lines[*j].1.xor(&r);
                }
                LogicalOp::ByproductX { line, site } => f.lines[*line].0.toggle(*site),
                LogicalOp::Permute(p) => {
                    let old = f.lines.clone();
                    for (k, src) in p.iter().enumerate() {
                        f.lines[k] = old[*src].clone();
                    }
                }
            }
        }
        Ok(f)
    }

    pub fn eval(&self, o: &Outcomes) -> Result<PauliFrame> {
        let lines = self.lines.iter().map(|(x, z)| Ok((x.eval(o)?, z.eval(o)?))).collect::<Result<_>>()?;
        Ok(PauliFrame::new(lines, Phase::ONE))
    }

    /// Multiplies a constant Z onto a line.
    pub fn with_constant_z(mut self, line: usize) -> Self {
        self.lines[line].1.constant ^= true;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bridge_at_quarter_turn_is_unitary() {
        for s in [false, true] {
            let m = bridge_matrix::<f64>(FRAC_PI_2, s, 0, 1, 2);
            assert!(m.is_unitary(1e-12));
        }
        let zero = bridge_matrix::<f64>(0.0, false, 0, 1, 2);
        assert!(!zero.is_unitary(1e-6));
    }

    #[test]
    fn bridge_outcome_one_is_zz_times_outcome_zero() {
        let zz = &Matrix::embed(&Gate2x2::z(), 0, 2) * &Matrix::embed(&Gate2x2::z(), 1, 2);
        let t0 = bridge_matrix::<f64>(FRAC_PI_2, false, 0, 1, 2);
        let t1 = bridge_matrix::<f64>(FRAC_PI_2, true, 0, 1, 2);
        assert!((&zz * &t0).distance_up_to_phase(&t1) < 1e-12);
    }

    #[test]
    fn permutation_swaps_lines() {
        let p = permutation_matrix::<f64>(&[1, 0]);
        assert!(p.max_abs_diff(&Matrix::swap(0, 1, 2)) < 1e-12);
    }

    #[test]
    fn parity_form_algebra() {
        let a = ParityForm::of_sites(&[Site(1), Site(2)]);
        let b = ParityForm::of_sites(&[Site(2), Site(3)]);
        assert_eq!(a.xor(&b), ParityForm::of_sites(&[Site(1), Site(3)]));
        assert!(a.xor(&a).is_zero());
    }
}
