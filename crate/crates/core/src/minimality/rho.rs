use super::operators::{operators_of, OperatorsAtPoint};
use crate::error::Result;
use crate::frame::{adapted_frame_from, AdaptedFrame};
use crate::geometry::{geometry_at, GeometryAtPoint, ManifoldDefinition, Tensor3};
use nalgebra::{DMatrix, DVector};

/// Which definition of `ρ̃_V` to use: the original one with a plus sign
/// between the two curvature sums, or the corrected one with a minus sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    Original,
    Corrected,
}

impl Variant {
    fn sign(self) -> f64 {
        match self {
            Variant::Original => 1.0,
            Variant::Corrected => -1.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Variant::Original => "original",
            Variant::Corrected => "corrected",
        }
    }
}

/// `Σ_j R(L⁻¹X, L⁻¹E_j, V, E_j)` over an orthonormal frame.
pub fn second_sum(
    geo: &GeometryAtPoint,
    ops: &OperatorsAtPoint,
    frame: &DMatrix<f64>,
    x: &DVector<f64>,
) -> f64 {
    let lx = &ops.l_inv * x;
    (0..frame.ncols())
        .map(|j| {
            let e = frame.column(j).into_owned();
            geo.curvature(&lx, &(&ops.l_inv * &e), &geo.field, &e)
        })
        .sum()
}

/// `ρ̃_V(X)` by direct contraction, summing over the columns of `frame`.
pub fn rho_with_frame(
    geo: &GeometryAtPoint,
    ops: &OperatorsAtPoint,
    frame: &DMatrix<f64>,
    x: &DVector<f64>,
    variant: Variant,
) -> f64 {
    let bx = &ops.b * x;
    let first: f64 = (0..frame.ncols())
        .map(|j| {
            let e = frame.column(j).into_owned();
            geo.curvature(&bx, &(&ops.b * &e), &geo.field, &e)
        })
        .sum();
    first + variant.sign() * second_sum(geo, ops, frame, x)
}

/// `ρ̃_V` on every direction of `frame`.
pub fn rho_on_frame(
    geo: &GeometryAtPoint,
    ops: &OperatorsAtPoint,
    frame: &AdaptedFrame,
    variant: Variant,
) -> Vec<f64> {
    (0..frame.dim())
        .map(|a| rho_with_frame(geo, ops, &frame.columns, &frame.column(a), variant))
        .collect()
}

fn rho_at(def: &ManifoldDefinition, x: &[f64], variant: Variant) -> Result<Vec<f64>> {
    let geo = geometry_at(def, x)?;
    let ops = operators_of(&geo)?;
    let frame = adapted_frame_from(def, &geo)?;
    Ok(rho_on_frame(&geo, &ops, &frame, variant))
}

pub fn rho_original_at(def: &ManifoldDefinition, x: &[f64]) -> Result<Vec<f64>> {
    rho_at(def, x, Variant::Original)
}

pub fn rho_corrected_at(def: &ManifoldDefinition, x: &[f64]) -> Result<Vec<f64>> {
    rho_at(def, x, Variant::Corrected)
}

/// `r[(a, b, c)] = R(E_a, E_b, E_c, V)`.
pub fn frame_curvature_with_v(geo: &GeometryAtPoint, frame: &AdaptedFrame) -> Tensor3 {
    let n = frame.dim();
    let cols: Vec<DVector<f64>> = (0..n).map(|a| frame.column(a)).collect();
    Tensor3::from_fn(n, |a, b, c| geo.curvature(&cols[a], &cols[b], &cols[c], &geo.field))
}

/// The curvature-sum expansions of `ρ̃_V` on the adapted frame, term by
/// term. Kernel formulas also cover `V`.
pub fn rho_expanded_from(r: &Tensor3, frame: &AdaptedFrame, variant: Variant) -> Vec<f64> {
    let n = frame.dim();
    let lam = &frame.lambdas;
    let m = lam.len();
    // ±1 on the plane and kernel sums; the mixed sum keeps its sign
    let s = -variant.sign();
    let q = |j: usize| 1.0 + lam[j] * lam[j];
    let w = |j: usize| lam[j] / q(j);
    let plane_sum = |a: usize| {
        (0..m)
            .map(|j| (r[(a, 2 * j, 2 * j)] + r[(a, 2 * j + 1, 2 * j + 1)]) / q(j))
            .sum::<f64>()
    };
    let beta_sum = |a: usize| (2 * m..n).map(|b| r[(a, b, b)]).sum::<f64>();
    let mixed = |c: usize| (0..m).map(|j| w(j) * r[(2 * j + 1, 2 * j, c)]).sum::<f64>();

    let mut out = vec![0.0; n];
    for i in 0..m {
        let (ei, es) = (2 * i, 2 * i + 1);
        out[ei] = s * plane_sum(ei) / q(i) + w(i) * mixed(es) + s * beta_sum(ei) / q(i);
        out[es] = s * plane_sum(es) / q(i) - w(i) * mixed(ei) + s * beta_sum(es) / q(i);
    }
    for (alpha, o) in out.iter_mut().enumerate().skip(2 * m) {
        *o = s * plane_sum(alpha) + s * beta_sum(alpha);
    }
    out
}

pub fn rho_expanded_at(def: &ManifoldDefinition, x: &[f64], variant: Variant) -> Result<Vec<f64>> {
    let geo = geometry_at(def, x)?;
    let frame = adapted_frame_from(def, &geo)?;
    Ok(rho_expanded_from(&frame_curvature_with_v(&geo, &frame), &frame, variant))
}
