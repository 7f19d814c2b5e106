use super::definition::ManifoldDefinition;
use super::pointwise::geometry_at;
use crate::error::{Error, Result};
use nalgebra::DMatrix;

/// Central difference of a matrix-valued map along every coordinate axis,
/// with step `scale * h_T[a]`. The stencil must stay at least `2 h_T` away
/// from the domain faces.
pub fn central_differences<F>(
    def: &ManifoldDefinition,
    x: &[f64],
    scale: f64,
    mut f: F,
) -> Result<Vec<DMatrix<f64>>>
where
    F: FnMut(&[f64]) -> Result<DMatrix<f64>>,
{
    let steps = def.fd_steps();
    check_stencil(def, x, &steps)?;
    let mut out = Vec::with_capacity(x.len());
    let mut probe = x.to_vec();
    for (a, h) in steps.iter().enumerate() {
        let h = h * scale;
        probe[a] = x[a] + h;
        let plus = f(&probe)?;
        probe[a] = x[a] - h;
        let minus = f(&probe)?;
        probe[a] = x[a];
        out.push((plus - minus) / (2.0 * h));
    }
    Ok(out)
}

pub(crate) fn check_stencil(def: &ManifoldDefinition, x: &[f64], steps: &[f64]) -> Result<()> {
    if x.len() != def.dim() || !def.domain.contains(x) {
        return Err(Error::OutsideDomain { point: x.to_vec() });
    }
    for (a, h) in steps.iter().enumerate() {
        if x[a] - 2.0 * h < def.domain.lower[a] || x[a] + 2.0 * h > def.domain.upper[a] {
            return Err(Error::StencilOutsideDomain {
                point: x.to_vec(),
                axis: a,
            });
        }
    }
    Ok(())
}

/// Covariant derivative of a (1,1)-tensor field given pointwise in
/// coordinates: entry `a` of the result is `∇_{∂_a} T` with
/// `(∇_a T)^k_j = ∂_a T^k_j + Γ^k_{al} T^l_j - Γ^l_{aj} T^k_l`.
pub fn covariant_derivative_tensor11<F>(
    def: &ManifoldDefinition,
    x: &[f64],
    t: F,
) -> Result<Vec<DMatrix<f64>>>
where
    F: FnMut(&[f64]) -> Result<DMatrix<f64>>,
{
    covariant_derivative_tensor11_scaled(def, x, 1.0, t)
}

/// Same as [`covariant_derivative_tensor11`] with the difference step
/// multiplied by `scale`.
pub fn covariant_derivative_tensor11_scaled<F>(
    def: &ManifoldDefinition,
    x: &[f64],
    scale: f64,
    mut t: F,
) -> Result<Vec<DMatrix<f64>>>
where
    F: FnMut(&[f64]) -> Result<DMatrix<f64>>,
{
    let partials = central_differences(def, x, scale, &mut t)?;
    let center = t(x)?;
    let geo = geometry_at(def, x)?;
    let n = def.dim();
    Ok(partials
        .into_iter()
        .enumerate()
        .map(|(a, d)| {
            DMatrix::from_fn(n, n, |k, j| {
                let mut v = d[(k, j)];
                for l in 0..n {
                    v += geo.gamma[(k, a, l)] * center[(l, j)] - geo.gamma[(l, a, j)] * center[(k, l)];
                }
                v
            })
        })
        .collect())
}

/// Richardson combination of full- and half-step central differences,
/// `(4 D(h/2) - D(h)) / 3`.
pub fn covariant_derivative_tensor11_richardson<F>(
    def: &ManifoldDefinition,
    x: &[f64],
    mut t: F,
) -> Result<Vec<DMatrix<f64>>>
where
    F: FnMut(&[f64]) -> Result<DMatrix<f64>>,
{
    let full = covariant_derivative_tensor11_scaled(def, x, 1.0, &mut t)?;
    let half = covariant_derivative_tensor11_scaled(def, x, 0.5, &mut t)?;
    Ok(full
        .into_iter()
        .zip(half)
        .map(|(f, h)| (h * 4.0 - f) / 3.0)
        .collect())
}
