use super::operators::operators_at;
use crate::error::Result;
use crate::frame::{frame_coeffs_at, FrameCoefficients};
use crate::geometry::{covariant_derivative_tensor11, ManifoldDefinition};
use nalgebra::{DMatrix, DVector};

/// `∇_{∂_a} K_V` for every coordinate axis `a`.
pub fn nabla_k_at(def: &ManifoldDefinition, x: &[f64]) -> Result<Vec<DMatrix<f64>>> {
    covariant_derivative_tensor11(def, x, |p| Ok(operators_at(def, p)?.k))
}

/// Coordinate components `ω_V(∂_j) = Σ_a (∇_{∂_a} K_V)^a_j`.
pub fn omega_from_nabla_k(nabla_k: &[DMatrix<f64>]) -> DVector<f64> {
    let n = nabla_k.len();
    DVector::from_fn(n, |j, _| (0..n).map(|a| nabla_k[a][(a, j)]).sum())
}

/// `Σ_a g((∇_{E_a} K_V)(X), E_a)` over the columns of `frame`, which must be
/// g-orthonormal.
pub fn omega_frame_trace(
    g: &DMatrix<f64>,
    nabla_k: &[DMatrix<f64>],
    frame: &DMatrix<f64>,
    x: &DVector<f64>,
) -> f64 {
    let n = frame.ncols();
    (0..n)
        .map(|a| {
            let e = frame.column(a);
            let mut d = DMatrix::zeros(n, n);
            for (c, nk) in nabla_k.iter().enumerate() {
                d += nk * e[c];
            }
            (e.transpose() * g * (d * x))[(0, 0)]
        })
        .sum()
}

/// The one-form from the trace definition, in coordinates and on the
/// adapted frame.
#[derive(Debug, Clone)]
pub struct OmegaDirect {
    pub coords: DVector<f64>,
    pub frame: Vec<f64>,
}

pub fn omega_direct_at(def: &ManifoldDefinition, x: &[f64]) -> Result<OmegaDirect> {
    let coeffs = frame_coeffs_at(def, x)?;
    let coords = omega_from_nabla_k(&nabla_k_at(def, x)?);
    let frame = (0..def.dim())
        .map(|a| coords.dot(&coeffs.frame.column(a)))
        .collect();
    Ok(OmegaDirect { coords, frame })
}

/// `f` times the frame-component formulas for `ω_V / f`, on every frame
/// direction; the kernel formula is also used for `V`.
pub fn omega_frame_from(c: &FrameCoefficients, f: f64) -> Vec<f64> {
    let n = c.dim();
    let lam = &c.frame.lambdas;
    let m = lam.len();
    let g = |i: usize, j: usize, k: usize| c.conn[(i, j, k)];
    let w = |j: usize| lam[j] / (1.0 + lam[j] * lam[j]);
    let mut out = vec![0.0; n];
    for i in 0..m {
        let (ei, es) = (2 * i, 2 * i + 1);
        let li = lam[i];
        let q = 1.0 + li * li;
        let cross = |dir: usize| (0..m).map(|j| w(j) * c.lambda_derivative(dir, j)).sum::<f64>();
        let own = |dir: usize| (1.0 - li * li) / (q * q) * c.lambda_derivative(dir, i);
        let trace = |col: usize| (0..n - 1).map(|j| g(j, col, j)).sum::<f64>();

        out[ei] = 2.0 * li / q * cross(es)
            + own(es)
            + w(i) * trace(es)
            + (0..m)
                .map(|j| w(j) * (g(2 * j, ei, 2 * j + 1) - g(2 * j + 1, ei, 2 * j)))
                .sum::<f64>();
        out[es] = -2.0 * li / q * cross(ei)
            - own(ei)
            - w(i) * trace(ei)
            - (0..m)
                .map(|j| w(j) * (g(2 * j + 1, es, 2 * j) - g(2 * j, es, 2 * j + 1)))
                .sum::<f64>();
    }
    for (alpha, o) in out.iter_mut().enumerate().skip(2 * m) {
        *o = -(0..m)
            .map(|j| w(j) * (g(2 * j + 1, alpha, 2 * j) - g(2 * j, alpha, 2 * j + 1)))
            .sum::<f64>();
    }
    out.iter().map(|v| v * f).collect()
}

pub fn omega_frame_at(def: &ManifoldDefinition, x: &[f64]) -> Result<Vec<f64>> {
    let coeffs = frame_coeffs_at(def, x)?;
    let f = operators_at(def, x)?.f;
    Ok(omega_frame_from(&coeffs, f))
}
