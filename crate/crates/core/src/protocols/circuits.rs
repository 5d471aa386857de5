//! Equivalent gate circuits of the built-in layouts, transcribed gate by gate.

use std::f64::consts::FRAC_PI_2;

use crate::cluster::Params;
use crate::error::{Error, Result};
use crate::gate::{Gate2x2, Matrix};
use crate::scalar::Real;

/// Gate sequence in time order.
pub struct Circuit<T: Real> {
    n: usize,
    u: Matrix<T>,
}

impl<T: Real> Circuit<T> {
    pub fn new(n: usize) -> Self {
        Circuit { n, u: Matrix::identity(1 << n) }
    }

    fn push(mut self, g: Matrix<T>) -> Self {
        self.u = &g * &self.u;
        self
    }

    pub fn h(self, l: usize) -> Self {
        let g = Matrix::embed(&Gate2x2::h(), l, self.n);
        self.push(g)
    }

    pub fn rz(self, l: usize, a: f64) -> Self {
        let g = Matrix::embed(&Gate2x2::rz(T::of(a)), l, self.n);
        self.push(g)
    }

    pub fn cz(self, a: usize, b: usize) -> Self {
        let g = Matrix::cz(a, b, self.n);
        self.push(g)
    }

    pub fn cnot(self, c: usize, t: usize) -> Self {
        let g = Matrix::cnot(c, t, self.n);
        self.push(g)
    }

    pub fn swap(self, a: usize, b: usize) -> Self {
        let g = Matrix::swap(a, b, self.n);
        self.push(g)
    }

    pub fn matrix(self) -> Matrix<T> {
        self.u
    }
}

fn param(p: &Params, k: &str) -> Result<f64> {
    p.get(k).copied().ok_or_else(|| Error::MissingParam(k.into()))
}

/// Circuit drawn for a built-in layout (all outcomes zero).
pub fn equivalent_circuit<T: Real>(name: &str, p: &Params) -> Result<Matrix<T>> {
    let q = FRAC_PI_2;
    if let Some(n) = name.strip_prefix("linear(").and_then(|r| r.strip_suffix(')')) {
        let n: usize = n.parse().map_err(|_| Error::UnknownLayout(name.into()))?;
        let mut c = Circuit::new(1);
        for _ in 1..n {
            c = c.h(0);
        }
        return Ok(c.matrix());
    }
    Ok(match name {
        "bbb1" => Circuit::new(1).rz(0, -param(p, "alpha")?).h(0).matrix(),
        "bbb2" => Circuit::new(2).cz(0, 1).matrix(),
        "bbb3" => Circuit::new(2).cnot(0, 1).rz(1, q).cnot(0, 1).matrix(),
        "box" => Circuit::new(2).cz(0, 1).rz(0, -param(p, "alpha")?).rz(1, -param(p, "beta")?).h(0).h(1).cz(0, 1).matrix(),
        "cnot4" => Circuit::new(2).h(0).cz(0, 1).h(1).matrix(),
        "rot5" | "rot7" => {
            let (zeta, nu, xi) = (param(p, "zeta")?, param(p, "nu")?, param(p, "xi")?);
            Circuit::new(1).rz(0, 0.0).h(0).rz(0, xi).h(0).rz(0, nu).h(0).rz(0, zeta).h(0).matrix()
        }
        "bridge-ebb" => Circuit::new(2).cnot(0, 1).rz(1, q).cnot(0, 1).rz(0, -q).rz(1, -q).h(0).h(1).matrix(),
        "squashed-i" | "squashed-i-redundant" => {
            Circuit::new(2).h(0).rz(0, -q).h(0).rz(0, -q).h(0).h(1).cz(0, 1).h(0).rz(0, -q).h(0).rz(0, -q).h(0).h(1).matrix()
        }
        // line 0 is the lower wire Q1 of the drawing, line 1 the upper wire Q2
        "helix" => Circuit::new(2).h(0).cz(0, 1).h(0).h(1).cz(0, 1).h(1).swap(0, 1).matrix(),
        _ => return Err(Error::UnknownLayout(name.into())),
    })
}
