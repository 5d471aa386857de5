//! Single-qubit gates and small dense operators.

use std::fmt;
use std::ops::Mul;

use crate::scalar::{c, c_one, c_zero, cis, Real, C};

/// 2x2 complex matrix, row major.
#[derive(Clone, Copy, PartialEq)]
pub struct Gate2x2<T: Real> {
    pub m: [[C<T>; 2]; 2],
}

impl<T: Real> fmt::Debug for Gate2x2<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.m[0][0], self.m[0][1], self.m[1][0], self.m[1][1])
    }
}

impl<T: Real> Gate2x2<T> {
    pub fn new(m00: C<T>, m01: C<T>, m10: C<T>, m11: C<T>) -> Self {
        Gate2x2 { m: [[m00, m01], [m10, m11]] }
    }

    pub fn identity() -> Self {
        Self::new(c_one(), c_zero(), c_zero(), c_one())
    }

    pub fn h() -> Self {
        let r = T::FRAC_1_SQRT_2();
        let p = C::new(r, T::zero());
        Self::new(p, p, p, -p)
    }

    pub fn x() -> Self {
        Self::new(c_zero(), c_one(), c_one(), c_zero())
    }

    pub fn y() -> Self {
        Self::new(c_zero(), c(0.0, -1.0), c(0.0, 1.0), c_zero())
    }

    pub fn z() -> Self {
        Self::new(c_one(), c_zero(), c_zero(), -c_one::<T>())
    }

    /// Rz(α) = diag(e^{-iα/2}, e^{iα/2}).
    pub fn rz(alpha: T) -> Self {
        let half = alpha / T::of(2.0);
        Self::new(cis(-half), c_zero(), c_zero(), cis(half))
    }

    /// Rx(α) = H Rz(α) H.
    pub fn rx(alpha: T) -> Self {
        Self::h() * Self::rz(alpha) * Self::h()
    }

    /// X^x Z^z as a matrix.
    pub fn pauli(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Self::identity(),
            (true, false) => Self::x(),
            (false, true) => Self::z(),
            (true, true) => Self::x() * Self::z(),
        }
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.m;
        Self::new(m[0][0].conj(), m[1][0].conj(), m[0][1].conj(), m[1][1].conj())
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        let p = self.adjoint() * *self;
        let id = Self::identity();
        (0..2).all(|i| (0..2).all(|j| (p.m[i][j] - id.m[i][j]).norm().as_f64() <= tol))
    }

    pub fn apply(&self, v: [C<T>; 2]) -> [C<T>; 2] {
        [self.m[0][0] * v[0] + self.m[0][1] * v[1], self.m[1][0] * v[0] + self.m[1][1] * v[1]]
    }

    pub fn to_matrix(&self) -> Matrix<T> {
        Matrix::from_rows(2, &[self.m[0][0], self.m[0][1], self.m[1][0], self.m[1][1]])
    }
}

impl<T: Real> Mul for Gate2x2<T> {
    type Output = Gate2x2<T>;

    fn mul(self, o: Gate2x2<T>) -> Gate2x2<T> {
        let a = &self.m;
        let b = &o.m;
        Gate2x2::new(
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        )
    }
}

/// Dense square complex matrix, row major. Index bit j is logical line j.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T: Real> {
    dim: usize,
    data: Vec<C<T>>,
}

impl<T: Real> Matrix<T> {
    pub fn zeros(dim: usize) -> Self {
        Matrix { dim, data: vec![c_zero(); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = c_one();
        }
        m
    }

    pub fn from_rows(dim: usize, rows: &[C<T>]) -> Self {
        assert_eq!(rows.len(), dim * dim, "matrix data has wrong length");
        Matrix { dim, data: rows.to_vec() }
    }

    pub fn diag(d: &[C<T>]) -> Self {
        let mut m = Self::zeros(d.len());
        for (i, v) in d.iter().enumerate() {
            m.data[i * d.len() + i] = *v;
        }
        m
    }

    pub fn from_columns(cols: &[Vec<C<T>>]) -> Self {
        let dim = cols.len();
        let mut m = Self::zeros(dim);
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), dim, "column has wrong length");
            for (i, v) in col.iter().enumerate() {
                m.data[i * dim + j] = *v;
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> C<T> {
        self.data[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: C<T>) {
        self.data[i * self.dim + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<C<T>> {
        (0..self.dim).map(|i| self.get(i, j)).collect()
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                m.set(j, i, self.get(i, j).conj());
            }
        }
        m
    }

    pub fn apply(&self, v: &[C<T>]) -> Vec<C<T>> {
        assert_eq!(v.len(), self.dim, "vector has wrong length");
        (0..self.dim)
            .map(|i| {
                let row = &self.data[i * self.dim..(i + 1) * self.dim];
                row.iter().zip(v).fold(c_zero(), |acc, (a, b)| acc + *a * *b)
            })
            .collect()
    }

    pub fn trace(&self) -> C<T> {
        (0..self.dim).fold(c_zero(), |acc, i| acc + self.get(i, i))
    }

    /// Sum of squared moduli, i.e. tr(M†M).
    pub fn frobenius_sqr(&self) -> T {
        self.data.iter().map(|v| v.norm_sqr()).sum()
    }

    pub fn scale(&self, s: C<T>) -> Self {
        Matrix { dim: self.dim, data: self.data.iter().map(|v| *v * s).collect() }
    }

    /// Embeds a single-line gate on `line` of an `n`-line register.
    pub fn embed(g: &Gate2x2<T>, line: usize, n: usize) -> Self {
        let dim = 1usize << n;
        let bit = 1usize << line;
        let mut m = Self::zeros(dim);
        for col in 0..dim {
            let b = (col >> line) & 1;
            for r in 0..2 {
                let row = (col & !bit) | (r << line);
                m.set(row, col, g.m[r][b]);
            }
        }
        m
    }

    /// Controlled phase diag(1,1,1,-e^{iθ}) between two lines.
    pub fn cphase(a: usize, b: usize, n: usize, theta: T) -> Self {
        let dim = 1usize << n;
        let f = -cis(theta);
        let d: Vec<C<T>> = (0..dim).map(|i| if (i >> a) & 1 == 1 && (i >> b) & 1 == 1 { f } else { c_one() }).collect();
        Self::diag(&d)
    }

    pub fn cz(a: usize, b: usize, n: usize) -> Self {
        Self::cphase(a, b, n, T::zero())
    }

    /// CNOT with the given control and target lines.
    pub fn cnot(control: usize, target: usize, n: usize) -> Self {
        let dim = 1usize << n;
        let mut m = Self::zeros(dim);
        for col in 0..dim {
            let row = if (col >> control) & 1 == 1 { col ^ (1 << target) } else { col };
            m.set(row, col, c_one());
        }
        m
    }

    pub fn swap(a: usize, b: usize, n: usize) -> Self {
        let dim = 1usize << n;
        let mut m = Self::zeros(dim);
        for col in 0..dim {
            let ba = (col >> a) & 1;
            let bb = (col >> b) & 1;
            let row = (col & !(1 << a) & !(1 << b)) | (bb << a) | (ba << b);
            m.set(row, col, c_one());
        }
        m
    }

    /// Max-entry distance to `other` after removing the best global phase.
    pub fn distance_up_to_phase(&self, other: &Matrix<T>) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let ov = self.data.iter().zip(&other.data).fold(c_zero::<T>(), |acc, (a, b)| acc + a.conj() * *b);
        let phase = if ov.norm() > T::zero() { ov / ov.norm() } else { c_one() };
        self.data.iter().zip(&other.data).map(|(a, b)| (*a * phase - *b).norm().as_f64()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Matrix<T>) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| (*a - *b).norm().as_f64()).fold(0.0, f64::max)
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        (self.adjoint() * self.clone()).max_abs_diff(&Self::identity(self.dim)) <= tol
    }
}

impl<T: Real> Mul for Matrix<T> {
    type Output = Matrix<T>;

    fn mul(self, o: Matrix<T>) -> Matrix<T> {
        &self * &o
    }
}

impl<T: Real> Mul<&Matrix<T>> for &Matrix<T> {
    type Output = Matrix<T>;

    fn mul(self, o: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.dim, o.dim, "dimension mismatch");
        let n = self.dim;
        let mut m = Matrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == c_zero() {
                    continue;
                }
                for j in 0..n {
                    m.data[i * n + j] += a * o.data[k * n + j];
                }
            }
        }
        m
    }
}
