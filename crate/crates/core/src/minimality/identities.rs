use super::operators::{operators_at, operators_of};
use crate::error::Result;
use crate::frame::{coefficients_from, frame_jet_from, FrameCoefficients};
use crate::geometry::{central_differences, geometry_at, GeometryAtPoint, ManifoldDefinition};
use nalgebra::{DMatrix, DVector};

/// Coordinate gradient of the scalar field `f` by central differences.
pub fn grad_f_at(def: &ManifoldDefinition, x: &[f64]) -> Result<DVector<f64>> {
    let d = central_differences(def, x, 1.0, |p| {
        Ok(DMatrix::from_element(1, 1, operators_at(def, p)?.f))
    })?;
    Ok(DVector::from_iterator(d.len(), d.iter().map(|m| m[(0, 0)])))
}

/// `((L⁻¹ ∘ ∇V)X) f` evaluated two ways on every frame direction.
#[derive(Debug, Clone)]
pub struct GradTerm {
    /// Directional derivative of `f` along `L⁻¹∇V X`.
    pub direct: Vec<f64>,
    /// Closed-form expressions in `λ` and its frame derivatives.
    pub formula: Vec<f64>,
}

pub fn grad_term_formula(c: &FrameCoefficients, f: f64) -> Vec<f64> {
    let n = c.dim();
    let lam = &c.frame.lambdas;
    let m = lam.len();
    let w = |j: usize| lam[j] / (1.0 + lam[j] * lam[j]);
    let mut out = vec![0.0; n];
    for i in 0..m {
        let k = f * 2.0 * w(i);
        let along = |dir: usize| (0..m).map(|j| w(j) * c.lambda_derivative(dir, j)).sum::<f64>();
        out[2 * i] = -k * along(2 * i + 1);
        out[2 * i + 1] = k * along(2 * i);
    }
    out
}

pub fn grad_term_direct(b: &DMatrix<f64>, grad_f: &DVector<f64>, frame: &DMatrix<f64>) -> Vec<f64> {
    (0..frame.ncols())
        .map(|a| grad_f.dot(&(b * frame.column(a))))
        .collect()
}

pub fn grad_term_at(def: &ManifoldDefinition, x: &[f64]) -> Result<GradTerm> {
    let geo = geometry_at(def, x)?;
    let ops = operators_of(&geo)?;
    let coeffs = coefficients_from(&geo, &frame_jet_from(def, &geo)?);
    let grad_f = grad_f_at(def, x)?;
    Ok(GradTerm {
        direct: grad_term_direct(&ops.b, &grad_f, &coeffs.frame.columns),
        formula: grad_term_formula(&coeffs, ops.f),
    })
}

/// Largest difference between `R(E_j, E_i, E_k, V)` and its expression
/// through frame derivatives of `∇V` and the coefficients `G`.
pub fn lemma12_residual_from(geo: &GeometryAtPoint, c: &FrameCoefficients) -> f64 {
    let n = c.dim();
    let cols: Vec<DVector<f64>> = (0..n).map(|a| c.frame.column(a)).collect();
    let g = |i: usize, j: usize, k: usize| c.conn[(i, j, k)];
    let nv = |j: usize, k: usize| c.nabla_v[(j, k)];
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let lhs = geo.curvature(&cols[j], &cols[i], &cols[k], &geo.field);
                let mut rhs = -c.dnabla_v[(i, j, k)] + c.dnabla_v[(j, i, k)];
                for l in 0..n - 1 {
                    rhs += -g(i, l, k) * nv(j, l) + g(j, l, k) * nv(i, l) + g(i, j, l) * nv(l, k)
                        - g(j, i, l) * nv(l, k);
                }
                worst = worst.max((lhs - rhs).abs());
            }
        }
    }
    worst
}

pub fn lemma12_residual(def: &ManifoldDefinition, x: &[f64]) -> Result<f64> {
    let geo = geometry_at(def, x)?;
    let coeffs = coefficients_from(&geo, &frame_jet_from(def, &geo)?);
    Ok(lemma12_residual_from(&geo, &coeffs))
}
