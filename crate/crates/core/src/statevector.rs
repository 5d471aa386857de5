//! Dense labeled statevector.
//!
//! Bit `j` of an amplitude index is the computational value of the qubit at
//! position `j` of the label list.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::gate::Gate2x2;
use crate::scalar::{c_one, c_zero, cis, Real, C};
use crate::site::Site;

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector<T: Real> {
    labels: Vec<Site>,
    amps: Vec<C<T>>,
}

/// Outcome of a projective measurement.
#[derive(Clone, Debug)]
pub struct Projection<T: Real> {
    pub site: Site,
    pub probability: T,
    state: Option<StateVector<T>>,
}

impl<T: Real> Projection<T> {
    /// False for branches below the probability floor.
    pub fn is_valid(&self) -> bool {
        self.state.is_some()
    }

    pub fn state(&self) -> Result<&StateVector<T>> {
        self.state.as_ref().ok_or(Error::ImpossibleBranch(self.site))
    }

    pub fn into_state(self) -> Result<StateVector<T>> {
        self.state.ok_or(Error::ImpossibleBranch(self.site))
    }
}

/// Result of applying a correlation operator to a state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EigenCheck {
    /// K|ψ> = sign |ψ>.
    Eigenvalue(i8),
    NotEigen {
        residual: f64,
    },
}

fn check_unique(labels: &[Site]) -> Result<()> {
    let mut seen = HashSet::with_capacity(labels.len());
    for s in labels {
        if !seen.insert(*s) {
            return Err(Error::DuplicateSite(*s));
        }
    }
    Ok(())
}

/// Index with bit `pos` inserted as zero, for k over the reduced space.
#[inline]
fn spread(k: usize, pos: usize) -> usize {
    let low = k & ((1usize << pos) - 1);
    ((k >> pos) << (pos + 1)) | low
}

impl<T: Real> StateVector<T> {
    /// |+>^{⊗n} over the given labels.
    pub fn new_plus_state(n: usize, labels: &[Site]) -> Result<Self> {
        if n == 0 {
            return Err(Error::NoQubits);
        }
        if labels.len() != n {
            return Err(Error::CountMismatch { n, labels: labels.len() });
        }
        check_unique(labels)?;
        let a = T::of(2f64.powf(-(n as f64) / 2.0));
        Ok(StateVector { labels: labels.to_vec(), amps: vec![C::new(a, T::zero()); 1 << n] })
    }

    /// Zero-qubit state holding a single amplitude.
    pub fn scalar(amp: C<T>) -> Self {
        StateVector { labels: Vec::new(), amps: vec![amp] }
    }

    /// Tensor product of single-qubit states; each must be normalized.
    pub fn product(qubits: &[(Site, [C<T>; 2])]) -> Result<Self> {
        let mut s = Self::scalar(c_one());
        for (site, v) in qubits {
            let n = (v[0].norm_sqr() + v[1].norm_sqr()).as_f64();
            if (n - 1.0).abs() > 1e-10 {
                return Err(Error::Unnormalized(n));
            }
            s.push_qubit(*site, *v)?;
        }
        Ok(s)
    }

    /// Builds a state from raw amplitudes; no normalization check.
    pub fn from_amplitudes(labels: &[Site], amps: Vec<C<T>>) -> Result<Self> {
        check_unique(labels)?;
        if amps.len() != 1usize << labels.len() {
            return Err(Error::CountMismatch { n: labels.len(), labels: amps.len() });
        }
        Ok(StateVector { labels: labels.to_vec(), amps })
    }

    pub fn num_qubits(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[Site] {
        &self.labels
    }

    pub fn amplitudes(&self) -> &[C<T>] {
        &self.amps
    }

    pub fn contains(&self, site: Site) -> bool {
        self.labels.contains(&site)
    }

    pub fn position(&self, site: Site) -> Result<usize> {
        self.labels.iter().position(|s| *s == site).ok_or(Error::UnknownSite(site))
    }

    /// Appends a qubit in state `v` as the new highest bit.
    pub fn push_qubit(&mut self, site: Site, v: [C<T>; 2]) -> Result<()> {
        if self.contains(site) {
            return Err(Error::DuplicateSite(site));
        }
        let len = self.amps.len();
        let mut amps = Vec::with_capacity(2 * len);
        amps.extend(self.amps.iter().map(|a| *a * v[0]));
        amps.extend(self.amps.iter().map(|a| *a * v[1]));
        self.amps = amps;
        self.labels.push(site);
        Ok(())
    }

    pub fn apply_1q(&mut self, site: Site, g: &Gate2x2<T>) -> Result<()> {
        let pos = self.position(site)?;
        let bit = 1usize << pos;
        let m = &g.m;
        for k in 0..self.amps.len() / 2 {
            let i0 = spread(k, pos);
            let i1 = i0 | bit;
            let (a0, a1) = (self.amps[i0], self.amps[i1]);
            self.amps[i0] = m[0][0] * a0 + m[0][1] * a1;
            self.amps[i1] = m[1][0] * a0 + m[1][1] * a1;
        }
        Ok(())
    }

    /// diag(1, 1, 1, -e^{iθ}) on (a, b); θ = 0 is the ideal controlled-Z.
    pub fn apply_cphase(&mut self, a: Site, b: Site, theta: T) -> Result<()> {
        if a == b {
            return Err(Error::SelfLoop(a));
        }
        let mask = (1usize << self.position(a)?) | (1usize << self.position(b)?);
        let f = -cis(theta);
        for (i, amp) in self.amps.iter_mut().enumerate() {
            if i & mask == mask {
                *amp *= f;
            }
        }
        Ok(())
    }

    /// Projects `site` onto (|0> + (-1)^outcome e^{iα}|1>)/√2 without
    /// renormalizing; the result's squared norm is the branch weight.
    pub fn project_xy_unnormalized(&self, site: Site, alpha: T, outcome: bool) -> Result<Self> {
        let pos = self.position(site)?;
        let bit = 1usize << pos;
        let mut coef = cis(-alpha) * T::FRAC_1_SQRT_2();
        if outcome {
            coef = -coef;
        }
        let h = C::new(T::FRAC_1_SQRT_2(), T::zero());
        let half = self.amps.len() / 2;
        let mut amps = Vec::with_capacity(half);
        for k in 0..half {
            let i0 = spread(k, pos);
            amps.push(h * self.amps[i0] + coef * self.amps[i0 | bit]);
        }
        let mut labels = self.labels.clone();
        labels.remove(pos);
        Ok(StateVector { labels, amps })
    }

    /// Born probability and renormalized post-measurement state.
    pub fn project_xy(&self, site: Site, alpha: T, outcome: bool) -> Result<Projection<T>> {
        let mut reduced = self.project_xy_unnormalized(site, alpha, outcome)?;
        let p = reduced.norm_sqr() / self.norm_sqr();
        if p.as_f64() < T::PROB_FLOOR {
            return Ok(Projection { site, probability: p, state: None });
        }
        reduced.normalize();
        Ok(Projection { site, probability: p, state: Some(reduced) })
    }

    pub fn norm_sqr(&self) -> T {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn normalize(&mut self) {
        let n = self.norm_sqr().sqrt();
        if n > T::zero() {
            for a in &mut self.amps {
                *a /= n;
            }
        }
    }

    pub fn normalized(&self) -> Self {
        let mut s = self.clone();
        s.normalize();
        s
    }

    /// Same state with labels permuted into `order`.
    pub fn reordered(&self, order: &[Site]) -> Result<Self> {
        if order.len() != self.labels.len() {
            return Err(Error::LabelMismatch);
        }
        check_unique(order)?;
        let src: Vec<usize> = order.iter().map(|s| self.labels.iter().position(|l| l == s).ok_or(Error::LabelMismatch)).collect::<Result<_>>()?;
        if src.iter().enumerate().all(|(i, p)| i == *p) {
            return Ok(self.clone());
        }
        let mut amps = vec![c_zero(); self.amps.len()];
        for (i, out) in amps.iter_mut().enumerate() {
            let mut j = 0usize;
            for (new_pos, old_pos) in src.iter().enumerate() {
                j |= ((i >> new_pos) & 1) << old_pos;
            }
            *out = self.amps[j];
        }
        Ok(StateVector { labels: order.to_vec(), amps })
    }

    /// <self|other>, with `other` brought into this label order.
    pub fn inner(&self, other: &Self) -> Result<C<T>> {
        let o = other.reordered(&self.labels)?;
        Ok(self.amps.iter().zip(&o.amps).fold(c_zero(), |acc, (a, b)| acc + a.conj() * *b))
    }

    /// |<x|y>|^2.
    pub fn fidelity(&self, other: &Self) -> Result<T> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// Amplitude of the basis state given by `bits` (one entry per label).
    pub fn amplitude_of(&self, bits: &[(Site, bool)]) -> Result<C<T>> {
        if bits.len() != self.labels.len() {
            return Err(Error::LabelMismatch);
        }
        let mut idx = 0usize;
        for (s, b) in bits {
            if *b {
                idx |= 1 << self.position(*s)?;
            }
        }
        Ok(self.amps[idx])
    }

    /// Applies K = X_site ∏ Z_nb and compares with ±state.
    pub fn correlation_eigencheck(&self, site: Site, neighbors: &[Site]) -> Result<EigenCheck> {
        let mut k = self.clone();
        k.apply_1q(site, &Gate2x2::x())?;
        for nb in neighbors {
            k.apply_1q(*nb, &Gate2x2::z())?;
        }
        let norm = self.norm_sqr().sqrt().as_f64();
        let residual = |sign: f64| -> f64 {
            let s = T::of(sign);
            k.amps.iter().zip(&self.amps).map(|(a, b)| (*a - *b * s).norm_sqr()).sum::<T>().sqrt().as_f64() / norm
        };
        let (rp, rm) = (residual(1.0), residual(-1.0));
        Ok(if rp <= T::EIGEN_TOL {
            EigenCheck::Eigenvalue(1)
        } else if rm <= T::EIGEN_TOL {
            EigenCheck::Eigenvalue(-1)
        } else {
            EigenCheck::NotEigen { residual: rp.min(rm) }
        })
    }

    /// Amplitudes of a one-qubit state.
    pub fn qubit(&self) -> Result<[C<T>; 2]> {
        if self.labels.len() != 1 {
            return Err(Error::LabelMismatch);
        }
        Ok([self.amps[0], self.amps[1]])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::site::sites;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    type Sv = StateVector<f64>;

    fn cl(a: C<f64>, b: C<f64>) -> bool {
        (a - b).norm() < 1e-12
    }

    fn plus() -> [C<f64>; 2] {
        [C::new(FRAC_1_SQRT_2, 0.0), C::new(FRAC_1_SQRT_2, 0.0)]
    }

    fn minus() -> [C<f64>; 2] {
        [C::new(FRAC_1_SQRT_2, 0.0), C::new(-FRAC_1_SQRT_2, 0.0)]
    }

    fn zero() -> [C<f64>; 2] {
        [C::new(1.0, 0.0), C::new(0.0, 0.0)]
    }

    fn one() -> [C<f64>; 2] {
        [C::new(0.0, 0.0), C::new(1.0, 0.0)]
    }

    #[test]
    fn plus_state_amplitudes() {
        for n in 1..=3 {
            let s = Sv::new_plus_state(n, &sites(&(1..=n as u32).collect::<Vec<_>>())).unwrap();
            let a = 2f64.powf(-(n as f64) / 2.0);
            assert!(s.amplitudes().iter().all(|x| cl(*x, C::new(a, 0.0))));
            assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn plus_state_errors() {
        assert_eq!(Sv::new_plus_state(0, &[]), Err(Error::NoQubits));
        assert_eq!(Sv::new_plus_state(2, &sites(&[1, 1])), Err(Error::DuplicateSite(Site(1))));
        assert!(matches!(Sv::new_plus_state(2, &sites(&[1])), Err(Error::CountMismatch { .. })));
    }

    #[test]
    fn single_qubit_gates() {
        let mut s = Sv::product(&[(Site(1), zero())]).unwrap();
        s.apply_1q(Site(1), &Gate2x2::h()).unwrap();
        assert!(cl(s.amplitudes()[1], C::new(FRAC_1_SQRT_2, 0.0)));
        let mut p = Sv::product(&[(Site(1), plus())]).unwrap();
        p.apply_1q(Site(1), &Gate2x2::z()).unwrap();
        assert!((p.fidelity(&Sv::product(&[(Site(1), minus())]).unwrap()).unwrap() - 1.0).abs() < 1e-12);
        let mut r = Sv::product(&[(Site(1), plus())]).unwrap();
        r.apply_1q(Site(1), &Gate2x2::rz(PI)).unwrap();
        assert!(cl(r.amplitudes()[0], C::new(0.0, -FRAC_1_SQRT_2)));
        assert!(cl(r.amplitudes()[1], C::new(0.0, FRAC_1_SQRT_2)));
        assert_eq!(r.apply_1q(Site(9), &Gate2x2::h()), Err(Error::UnknownSite(Site(9))));
    }

    #[test]
    fn cphase_examples() {
        let mut s = Sv::new_plus_state(2, &sites(&[1, 2])).unwrap();
        s.apply_cphase(Site(1), Site(2), 0.0).unwrap();
        let expect = [0.5, 0.5, 0.5, -0.5];
        for (a, e) in s.amplitudes().iter().zip(expect) {
            assert!(cl(*a, C::new(e, 0.0)));
        }
        let mut t = Sv::new_plus_state(2, &sites(&[1, 2])).unwrap();
        t.apply_cphase(Site(1), Site(2), PI).unwrap();
        assert!((t.fidelity(&Sv::new_plus_state(2, &sites(&[1, 2])).unwrap()).unwrap() - 1.0).abs() < 1e-12);
        // |<++|C>|^2 = ((1+1+1-1)/4)^2
        assert!((t.fidelity(&s).unwrap() - 0.25).abs() < 1e-12);
        assert_eq!(t.apply_cphase(Site(1), Site(1), 0.0), Err(Error::SelfLoop(Site(1))));
        assert_eq!(t.apply_cphase(Site(1), Site(3), 0.0), Err(Error::UnknownSite(Site(3))));
    }

    #[test]
    fn projection_examples() {
        let p = Sv::product(&[(Site(1), plus())]).unwrap().project_xy(Site(1), 0.0, false).unwrap();
        assert!((p.probability - 1.0).abs() < 1e-12);
        let st = p.state().unwrap();
        assert_eq!(st.num_qubits(), 0);
        assert!((st.amplitudes()[0].norm() - 1.0).abs() < 1e-12);

        let mut s = Sv::product(&[(Site(1), zero()), (Site(2), plus())]).unwrap();
        s.apply_cphase(Site(1), Site(2), 0.0).unwrap();
        let p = s.project_xy(Site(1), 0.0, false).unwrap();
        assert!((p.probability - 0.5).abs() < 1e-12);
        let want = Sv::product(&[(Site(2), plus())]).unwrap();
        assert!((p.state().unwrap().fidelity(&want).unwrap() - 1.0).abs() < 1e-12);

        let m = Sv::product(&[(Site(1), minus())]).unwrap().project_xy(Site(1), 0.0, false).unwrap();
        assert!(m.probability < 1e-14);
        assert!(!m.is_valid());
        assert_eq!(m.into_state(), Err(Error::ImpossibleBranch(Site(1))));
    }

    #[test]
    fn fidelity_basics() {
        let a = Sv::product(&[(Site(1), zero())]).unwrap();
        let b = Sv::product(&[(Site(1), one())]).unwrap();
        assert_eq!(a.fidelity(&a).unwrap(), 1.0);
        assert_eq!(a.fidelity(&b).unwrap(), 0.0);
        let c2 = Sv::product(&[(Site(2), one())]).unwrap();
        assert_eq!(a.fidelity(&c2), Err(Error::LabelMismatch));
    }

    #[test]
    fn reorder_round_trip() {
        let mut s = Sv::product(&[(Site(1), zero()), (Site(2), plus()), (Site(3), one())]).unwrap();
        s.apply_1q(Site(2), &Gate2x2::rz(0.4)).unwrap();
        s.apply_cphase(Site(2), Site(3), 0.3).unwrap();
        let r = s.reordered(&sites(&[3, 1, 2])).unwrap();
        assert_eq!(r.labels(), &sites(&[3, 1, 2])[..]);
        let bits = [(Site(1), false), (Site(2), true), (Site(3), true)];
        assert!(cl(r.amplitude_of(&bits).unwrap(), s.amplitude_of(&bits).unwrap()));
        assert!((r.fidelity(&s).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(r.reordered(&sites(&[1, 2, 3])).unwrap(), s);
    }

    #[test]
    fn eigencheck_two_qubit_cluster() {
        let mut s = Sv::new_plus_state(2, &sites(&[1, 2])).unwrap();
        s.apply_cphase(Site(1), Site(2), 0.0).unwrap();
        assert_eq!(s.correlation_eigencheck(Site(1), &[Site(2)]).unwrap(), EigenCheck::Eigenvalue(1));
        assert_eq!(s.correlation_eigencheck(Site(2), &[Site(1)]).unwrap(), EigenCheck::Eigenvalue(1));
        let mut n = Sv::new_plus_state(2, &sites(&[1, 2])).unwrap();
        n.apply_cphase(Site(1), Site(2), 0.5).unwrap();
        match n.correlation_eigencheck(Site(1), &[Site(2)]).unwrap() {
            EigenCheck::NotEigen { residual } => assert!(residual > 0.1),
            e => panic!("{e:?}"),
        }
    }

    #[test]
    fn f32_kernels_agree_with_f64() {
        let mut a = StateVector::<f32>::new_plus_state(3, &sites(&[1, 2, 3])).unwrap();
        let mut b = Sv::new_plus_state(3, &sites(&[1, 2, 3])).unwrap();
        a.apply_cphase(Site(1), Site(2), 0.3).unwrap();
        b.apply_cphase(Site(1), Site(2), 0.3).unwrap();
        a.apply_1q(Site(3), &Gate2x2::rx(0.8)).unwrap();
        b.apply_1q(Site(3), &Gate2x2::rx(0.8)).unwrap();
        let pa = a.project_xy(Site(2), 0.9, true).unwrap();
        let pb = b.project_xy(Site(2), 0.9, true).unwrap();
        assert!((pa.probability as f64 - pb.probability).abs() < 1e-6);
        for (x, y) in pa.state().unwrap().amplitudes().iter().zip(pb.state().unwrap().amplitudes()) {
            assert!((x.re as f64 - y.re).abs() < 1e-6 && (x.im as f64 - y.im).abs() < 1e-6);
        }
    }
}
