use crate::error::{Error, Result};
use crate::geometry::{geometry_at, GeometryAtPoint, ManifoldDefinition};
use nalgebra::DMatrix;

/// `L_V`, `f` and `K_V` at a point, as endomorphisms in coordinates.
#[derive(Debug, Clone)]
pub struct OperatorsAtPoint {
    /// `∇V` as the endomorphism `X ↦ ∇_X V`.
    pub nabla_v: DMatrix<f64>,
    /// g-adjoint of `∇V`.
    pub nabla_v_t: DMatrix<f64>,
    /// `id + (∇V)^t ∘ ∇V`.
    pub l: DMatrix<f64>,
    pub l_inv: DMatrix<f64>,
    /// `sqrt(det L_V)`.
    pub f: f64,
    /// `f L_V^{-1} ∘ (∇V)^t`.
    pub k: DMatrix<f64>,
    /// `L_V^{-1} ∘ ∇V`.
    pub b: DMatrix<f64>,
}

pub fn operators_of(geo: &GeometryAtPoint) -> Result<OperatorsAtPoint> {
    let n = geo.dim();
    let nabla_v = geo.nabla_v.clone();
    let nabla_v_t = geo.adjoint(&nabla_v);
    let l = DMatrix::identity(n, n) + &nabla_v_t * &nabla_v;
    let det = l.determinant();
    if !(det >= 1e-12) {
        return Err(Error::Internal(format!(
            "det L_V = {det:e} at {:?}",
            geo.point
        )));
    }
    let l_inv = l
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::Internal(format!("L_V not invertible at {:?}", geo.point)))?;
    let f = det.sqrt();
    let k = &l_inv * &nabla_v_t * f;
    let b = &l_inv * &nabla_v;
    Ok(OperatorsAtPoint {
        nabla_v,
        nabla_v_t,
        l,
        l_inv,
        f,
        k,
        b,
    })
}

pub fn operators_at(def: &ManifoldDefinition, x: &[f64]) -> Result<OperatorsAtPoint> {
    operators_of(&geometry_at(def, x)?)
}
