//! Second-order forward-mode jets.

use nalgebra::DMatrix;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Value, gradient and Hessian of a scalar field at one point.
///
/// The Hessian is stored as its packed upper triangle, so it is symmetric
/// by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet2 {
    value: f64,
    gradient: Vec<f64>,
    hess: Vec<f64>,
}

#[inline]
fn packed(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    i * n - i * (i + 1) / 2 + j
}

impl Jet2 {
    pub fn constant(dim: usize, value: f64) -> Self {
        Jet2 {
            value,
            gradient: vec![0.0; dim],
            hess: vec![0.0; dim * (dim + 1) / 2],
        }
    }

    /// The coordinate function `x_index` evaluated at `value`.
    pub fn variable(dim: usize, index: usize, value: f64) -> Self {
        let mut j = Jet2::constant(dim, value);
        j.gradient[index] = 1.0;
        j
    }

    pub fn dim(&self) -> usize {
        self.gradient.len()
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn gradient(&self) -> &[f64] {
        &self.gradient
    }

    pub fn hessian(&self, i: usize, j: usize) -> f64 {
        self.hess[packed(self.dim(), i, j)]
    }

    pub fn hessian_matrix(&self) -> DMatrix<f64> {
        let n = self.dim();
        DMatrix::from_fn(n, n, |i, j| self.hessian(i, j))
    }

    pub fn is_finite(&self) -> bool {
        self.value.is_finite()
            && self.gradient.iter().all(|v| v.is_finite())
            && self.hess.iter().all(|v| v.is_finite())
    }

    /// Composition `phi(self)` given `phi`, `phi'` and `phi''` at the value.
    pub fn compose(&self, f0: f64, f1: f64, f2: f64) -> Jet2 {
        let n = self.dim();
        let g = &self.gradient;
        let mut hess = Vec::with_capacity(self.hess.len());
        for i in 0..n {
            for j in i..n {
                hess.push(f1 * self.hess[packed(n, i, j)] + f2 * g[i] * g[j]);
            }
        }
        Jet2 {
            value: f0,
            gradient: g.iter().map(|d| f1 * d).collect(),
            hess,
        }
    }

    pub fn scale(&self, s: f64) -> Jet2 {
        Jet2 {
            value: s * self.value,
            gradient: self.gradient.iter().map(|d| s * d).collect(),
            hess: self.hess.iter().map(|d| s * d).collect(),
        }
    }

    pub fn recip(&self) -> Jet2 {
        let u = self.value;
        self.compose(1.0 / u, -1.0 / (u * u), 2.0 / (u * u * u))
    }

    pub fn sin(&self) -> Jet2 {
        let (s, c) = self.value.sin_cos();
        self.compose(s, c, -s)
    }

    pub fn cos(&self) -> Jet2 {
        let (s, c) = self.value.sin_cos();
        self.compose(c, -s, -c)
    }

    pub fn tan(&self) -> Jet2 {
        let t = self.value.tan();
        let sec2 = 1.0 + t * t;
        self.compose(t, sec2, 2.0 * t * sec2)
    }

    pub fn exp(&self) -> Jet2 {
        let e = self.value.exp();
        self.compose(e, e, e)
    }

    pub fn ln(&self) -> Jet2 {
        let u = self.value;
        self.compose(u.ln(), 1.0 / u, -1.0 / (u * u))
    }

    pub fn sqrt(&self) -> Jet2 {
        let r = self.value.sqrt();
        self.compose(r, 0.5 / r, -0.25 / (r * self.value))
    }

    pub fn sinh(&self) -> Jet2 {
        let (s, c) = (self.value.sinh(), self.value.cosh());
        self.compose(s, c, s)
    }

    pub fn cosh(&self) -> Jet2 {
        let (s, c) = (self.value.sinh(), self.value.cosh());
        self.compose(c, s, c)
    }

    /// `self^p` for a literal exponent; integer exponents use `powi`.
    pub fn powf(&self, p: f64) -> Jet2 {
        let u = self.value;
        if p == 0.0 {
            return Jet2::constant(self.dim(), 1.0);
        }
        if p.fract() == 0.0 && p.abs() < i32::MAX as f64 {
            let k = p as i32;
            let f0 = u.powi(k);
            let f1 = p * u.powi(k - 1);
            let f2 = if k == 1 {
                0.0
            } else {
                p * (p - 1.0) * u.powi(k - 2)
            };
            return self.compose(f0, f1, f2);
        }
        self.compose(
            u.powf(p),
            p * u.powf(p - 1.0),
            p * (p - 1.0) * u.powf(p - 2.0),
        )
    }

    fn zip(&self, other: &Jet2, value: f64, f: impl Fn(f64, f64) -> f64) -> Jet2 {
        debug_assert_eq!(self.dim(), other.dim());
        Jet2 {
            value,
            gradient: self
                .gradient
                .iter()
                .zip(&other.gradient)
                .map(|(a, b)| f(*a, *b))
                .collect(),
            hess: self
                .hess
                .iter()
                .zip(&other.hess)
                .map(|(a, b)| f(*a, *b))
                .collect(),
        }
    }
}

impl Add for &Jet2 {
    type Output = Jet2;
    fn add(self, rhs: &Jet2) -> Jet2 {
        self.zip(rhs, self.value + rhs.value, |a, b| a + b)
    }
}

impl Sub for &Jet2 {
    type Output = Jet2;
    fn sub(self, rhs: &Jet2) -> Jet2 {
        self.zip(rhs, self.value - rhs.value, |a, b| a - b)
    }
}

impl Mul for &Jet2 {
    type Output = Jet2;
    fn mul(self, rhs: &Jet2) -> Jet2 {
        let n = self.dim();
        let (a, b) = (self, rhs);
        let mut hess = Vec::with_capacity(a.hess.len());
        for i in 0..n {
            for j in i..n {
                let k = packed(n, i, j);
                hess.push(
                    a.value * b.hess[k]
                        + b.value * a.hess[k]
                        + a.gradient[i] * b.gradient[j]
                        + a.gradient[j] * b.gradient[i],
                );
            }
        }
        Jet2 {
            value: a.value * b.value,
            gradient: a
                .gradient
                .iter()
                .zip(&b.gradient)
                .map(|(da, db)| a.value * db + b.value * da)
                .collect(),
            hess,
        }
    }
}

impl Div for &Jet2 {
    type Output = Jet2;
    fn div(self, rhs: &Jet2) -> Jet2 {
        // q = a/b, b q = a differentiated twice
        let n = self.dim();
        let b = rhs.value;
        let q = self.value / b;
        let gq: Vec<f64> = self
            .gradient
            .iter()
            .zip(&rhs.gradient)
            .map(|(da, db)| (da - q * db) / b)
            .collect();
        let mut hess = Vec::with_capacity(self.hess.len());
        for i in 0..n {
            for j in i..n {
                let k = packed(n, i, j);
                hess.push(
                    (self.hess[k]
                        - q * rhs.hess[k]
                        - gq[i] * rhs.gradient[j]
                        - gq[j] * rhs.gradient[i])
                        / b,
                );
            }
        }
        Jet2 {
            value: q,
            gradient: gq,
            hess,
        }
    }
}

impl Neg for &Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        self.scale(-1.0)
    }
}
