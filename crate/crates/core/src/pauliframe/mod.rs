//! Byproduct operators as Pauli frames.

mod program;

pub use program::{LogicalOp, LogicalProgram, ParityForm, SymbolicFrame};

use std::fmt;

use crate::cluster::Outcomes;
use crate::error::{Error, Result};
use crate::gate::{Gate2x2, Matrix};
use crate::scalar::{c, Real};
use crate::site::Site;
use crate::statevector::StateVector;

/// Global phase i^k.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    /// i^k.
    pub fn from_power(k: u8) -> Phase {
        Phase(k % 4)
    }

    pub fn times(self, o: Phase) -> Phase {
        Phase((self.0 + o.0) % 4)
    }

    fn sign(neg: bool) -> Phase {
        if neg {
            Phase::MINUS_ONE
        } else {
            Phase::ONE
        }
    }

    pub fn value<T: Real>(self) -> crate::scalar::C<T> {
        match self.0 {
            0 => c(1.0, 0.0),
            1 => c(0.0, 1.0),
            2 => c(-1.0, 0.0),
            _ => c(0.0, -1.0),
        }
    }
}

/// Gates a frame can be pushed through.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FrameGate {
    H(usize),
    /// Rz(angle) on a line.
    Rz(usize, f64),
    Cz(usize, usize),
}

/// phase · ⊗_l X^{x_l} Z^{z_l}.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliFrame {
    lines: Vec<(bool, bool)>,
    phase: Phase,
}

impl fmt::Debug for PauliFrame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.phase)?;
        for (x, z) in &self.lines {
            write!(f, " X^{} Z^{}", *x as u8, *z as u8)?;
        }
        Ok(())
    }
}

impl PauliFrame {
    pub fn identity(n: usize) -> Self {
        PauliFrame { lines: vec![(false, false); n], phase: Phase::ONE }
    }

    pub fn new(lines: Vec<(bool, bool)>, phase: Phase) -> Self {
        PauliFrame { lines, phase }
    }

    pub fn num_lines(&self) -> usize {
        self.lines.len()
    }

    pub fn x(&self, l: usize) -> bool {
        self.lines[l].0
    }

    pub fn z(&self, l: usize) -> bool {
        self.lines[l].1
    }

    pub fn line(&self, l: usize) -> (bool, bool) {
        self.lines[l]
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn is_identity(&self) -> bool {
        self.lines.iter().all(|(x, z)| !x && !z)
    }

    /// self · other.
    pub fn compose(&self, other: &PauliFrame) -> PauliFrame {
        assert_eq!(self.lines.len(), other.lines.len(), "frames act on different line counts");
        let mut phase = self.phase.times(other.phase);
        let lines = self
            .lines
            .iter()
            .zip(&other.lines)
            .map(|((x1, z1), (x2, z2))| {
                phase = phase.times(Phase::sign(*z1 && *x2));
                (x1 ^ x2, z1 ^ z2)
            })
            .collect();
        PauliFrame { lines, phase }
    }

    /// Moves the frame past `gate`: gate · F = F' · gate'.
    pub fn propagate(&self, gate: FrameGate) -> (PauliFrame, FrameGate) {
        let mut f = self.clone();
        match gate {
            FrameGate::H(l) => {
                let (x, z) = f.lines[l];
                f.phase = f.phase.times(Phase::sign(x && z));
                f.lines[l] = (z, x);
                (f, gate)
            }
            FrameGate::Rz(l, angle) => {
                let adapted = if f.lines[l].0 { -angle } else { angle };
                (f, FrameGate::Rz(l, adapted))
            }
            FrameGate::Cz(i, j) => {
                let (xi, zi) = f.lines[i];
                let (xj, zj) = f.lines[j];
                f.phase = f.phase.times(Phase::sign(xi && xj));
                f.lines[i] = (xi, zi ^ xj);
                f.lines[j] = (xj, zj ^ xi);
                (f, gate)
            }
        }
    }

    /// Dense operator including the phase.
    pub fn to_matrix<T: Real>(&self) -> Matrix<T> {
        let n = self.lines.len();
        let mut m = Matrix::identity(1 << n).scale(self.phase.value());
        for (l, (x, z)) in self.lines.iter().enumerate() {
            m = &m * &Matrix::embed(&Gate2x2::pauli(*x, *z), l, n);
        }
        m
    }

    /// Applies the decoding operator U_Σ† (up to the global phase) to the
    /// qubits in `outputs`, one per line.
    pub fn decode<T: Real>(&self, state: &mut StateVector<T>, outputs: &[Site]) -> Result<()> {
        if outputs.len() != self.lines.len() {
            return Err(Error::InvalidArgument("one output site per line required".into()));
        }
        for ((x, z), s) in self.lines.iter().zip(outputs) {
            if *x {
                state.apply_1q(*s, &Gate2x2::x())?;
            }
            if *z {
                state.apply_1q(*s, &Gate2x2::z())?;
            }
        }
        Ok(())
    }
}

/// Closed-form transfer byproduct: z = s1 ⊕ s3 ⊕ ..., x = s2 ⊕ s4 ⊕ ....
pub fn transfer_frame(outcomes: &[bool], n: usize) -> Result<PauliFrame> {
    if n.is_multiple_of(2) || n < 1 {
        return Err(Error::BadChainLength(n));
    }
    if outcomes.len() != n - 1 {
        return Err(Error::InvalidArgument(format!("chain of {n} needs {} outcomes, got {}", n - 1, outcomes.len())));
    }
    let z = outcomes.iter().step_by(2).fold(false, |a, b| a ^ b);
    let x = outcomes.iter().skip(1).step_by(2).fold(false, |a, b| a ^ b);
    Ok(PauliFrame::new(vec![(x, z)], Phase::ONE))
}

/// Step-by-step transfer frame: each site contributes X^s H.
pub fn transfer_frame_stepwise(outcomes: &[bool]) -> PauliFrame {
    let mut f = PauliFrame::identity(1);
    for s in outcomes {
        f = f.propagate(FrameGate::H(0)).0;
        f = PauliFrame::new(vec![(*s, false)], Phase::ONE).compose(&f);
    }
    f
}

/// Four-site CNOT byproduct X^{s1} ⊗ X^{s1 ⊕ s3}.
pub fn cnot4_frame(s1: bool, s3: bool) -> PauliFrame {
    PauliFrame::new(vec![(s1, false), (s1 ^ s3, false)], Phase::ONE)
}

/// Squashed-I byproduct on the outputs 7 and 15, relative to a plain CNOT.
pub fn squashed_i_frame(o: &Outcomes) -> Result<PauliFrame> {
    let s = |i: u32| o.bit(i);
    let gx7 = s(2)? ^ s(3)? ^ s(5)? ^ s(6)?;
    let gx15 = s(2)? ^ s(3)? ^ s(8)? ^ s(10)? ^ s(12)? ^ s(14)?;
    let gz7 = s(1)? ^ s(3)? ^ s(4)? ^ s(5)? ^ s(8)? ^ s(9)? ^ s(11)? ^ true;
    let gz15 = s(9)? ^ s(11)? ^ s(13)?;
    for i in [1u32, 2, 3, 4, 5, 6, 8, 9, 10, 11, 12, 13, 14] {
        s(i)?;
    }
    Ok(PauliFrame::new(vec![(gx7, gz7), (gx15, gz15)], Phase::ONE))
}

/// Adaptive angle for the next site of the five-site rotation, given the
/// outcomes of the sites already measured.
pub fn rotation_angles(euler: (f64, f64, f64), outcomes_so_far: &[bool]) -> Result<f64> {
    let (zeta, nu, xi) = euler;
    let sign = |b: bool| if b { -1.0 } else { 1.0 };
    match outcomes_so_far {
        [] => Ok(0.0),
        [s1] => Ok(sign(*s1) * -xi),
        [_, s2] => Ok(sign(*s2) * -nu),
        [s1, _, s3] => Ok(sign(s1 ^ s3) * -zeta),
        _ => Err(Error::OutOfOrder(format!("{} outcomes given, only four sites are measured", outcomes_so_far.len()))),
    }
}

/// Rotation byproduct X^{s2 ⊕ s4} Z^{s1 ⊕ s3}.
pub fn rotation_frame(s: [bool; 4]) -> PauliFrame {
    PauliFrame::new(vec![(s[1] ^ s[3], s[0] ^ s[2])], Phase::ONE)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::C;

    fn frames(n: usize) -> Vec<PauliFrame> {
        let mut out = Vec::new();
        for bits in 0..(1u32 << (2 * n)) {
            for p in 0..4 {
                let lines = (0..n).map(|l| (bits >> (2 * l) & 1 == 1, bits >> (2 * l + 1) & 1 == 1)).collect();
                out.push(PauliFrame::new(lines, Phase(p)));
            }
        }
        out
    }

    fn gate_matrix(g: FrameGate, n: usize) -> Matrix<f64> {
        match g {
            FrameGate::H(l) => Matrix::embed(&Gate2x2::h(), l, n),
            FrameGate::Rz(l, a) => Matrix::embed(&Gate2x2::rz(a), l, n),
            FrameGate::Cz(i, j) => Matrix::cz(i, j, n),
        }
    }

    #[test]
    fn propagation_matches_matrices_exactly() {
        for f in frames(2) {
            for g in [FrameGate::H(0), FrameGate::H(1), FrameGate::Rz(0, -0.7), FrameGate::Rz(1, 1.3), FrameGate::Cz(0, 1)] {
                let (f2, g2) = f.propagate(g);
                let lhs = &gate_matrix(g, 2) * &f.to_matrix();
                let rhs = &f2.to_matrix() * &gate_matrix(g2, 2);
                assert!(lhs.max_abs_diff(&rhs) < 1e-12, "{f:?} through {g:?}");
            }
        }
    }

    #[test]
    fn composition_matches_matrices() {
        let fs = frames(1);
        for a in &fs {
            for b in &fs {
                let m = &a.to_matrix::<f64>() * &b.to_matrix();
                assert!(m.max_abs_diff(&a.compose(b).to_matrix()) < 1e-12);
            }
        }
    }

    #[test]
    fn adaptive_sign_rule() {
        let f = PauliFrame::new(vec![(true, false)], Phase::ONE);
        let (f2, g) = f.propagate(FrameGate::Rz(0, -0.4));
        assert_eq!(f2, f);
        assert_eq!(g, FrameGate::Rz(0, 0.4));
        let (h, _) = f.propagate(FrameGate::H(0));
        assert_eq!(h.line(0), (false, true));
    }

    #[test]
    fn cz_spreads_x_to_z() {
        let f = PauliFrame::new(vec![(true, false), (false, false)], Phase::ONE);
        let (f2, _) = f.propagate(FrameGate::Cz(0, 1));
        assert_eq!(f2.line(0), (true, false));
        assert_eq!(f2.line(1), (false, true));
    }

    #[test]
    fn transfer_examples() {
        let f = transfer_frame(&[true, false], 3).unwrap();
        assert_eq!(f.line(0), (false, true));
        assert!(transfer_frame(&[false; 8], 9).unwrap().is_identity());
        assert!(transfer_frame(&[true; 4], 5).unwrap().is_identity());
        assert_eq!(transfer_frame(&[true], 2), Err(Error::BadChainLength(2)));
        assert!(transfer_frame(&[true], 3).is_err());
    }

    #[test]
    fn cnot4_truth_table() {
        assert!(cnot4_frame(false, false).is_identity());
        assert_eq!(cnot4_frame(true, false), PauliFrame::new(vec![(true, false), (true, false)], Phase::ONE));
        assert_eq!(cnot4_frame(true, true), PauliFrame::new(vec![(true, false), (false, false)], Phase::ONE));
        assert_eq!(cnot4_frame(false, true), PauliFrame::new(vec![(false, false), (true, false)], Phase::ONE));
    }

    #[test]
    fn squashed_i_examples() {
        let sites = [1u32, 2, 3, 4, 5, 6, 8, 9, 10, 11, 12, 13, 14];
        let zeros = Outcomes::from_pairs(&sites.map(|s| (s, false)));
        let f = squashed_i_frame(&zeros).unwrap();
        assert_eq!(f.line(0), (false, true));
        assert_eq!(f.line(1), (false, false));
        let only = |k: u32| Outcomes::from_pairs(&sites.map(|s| (s, s == k)));
        let f2 = squashed_i_frame(&only(2)).unwrap();
        assert_eq!((f2.line(0), f2.line(1)), ((true, true), (true, false)));
        let f9 = squashed_i_frame(&only(9)).unwrap();
        assert_eq!((f9.z(0), f9.z(1)), (false, true));
        assert_eq!(squashed_i_frame(&Outcomes::new()), Err(Error::MissingOutcome(Site(2))));
    }

    #[test]
    fn rotation_angle_examples() {
        let e = (0.3, 0.5, 0.7);
        assert_eq!(rotation_angles(e, &[]).unwrap(), 0.0);
        assert_eq!(rotation_angles(e, &[false]).unwrap(), -0.7);
        assert_eq!(rotation_angles(e, &[true]).unwrap(), 0.7);
        assert_eq!(rotation_angles(e, &[false, false]).unwrap(), -0.5);
        assert_eq!(rotation_angles(e, &[false, false, true]).unwrap(), 0.3);
        assert!(rotation_angles(e, &[false; 4]).is_err());
    }

    #[test]
    fn decode_inverts_frame() {
        let f = PauliFrame::new(vec![(true, true)], Phase::ONE);
        let v = [C::new(0.6, 0.0), C::new(0.0, 0.8)];
        let mut s = StateVector::<f64>::product(&[(Site(5), f.to_matrix::<f64>().apply(&v).try_into().unwrap())]).unwrap();
        f.decode(&mut s, &[Site(5)]).unwrap();
        let want = StateVector::product(&[(Site(5), v)]).unwrap();
        assert!((s.fidelity(&want).unwrap() - 1.0).abs() < 1e-12);
    }
}
