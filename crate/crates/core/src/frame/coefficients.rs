use super::adapted::{align_frame, construct_frame, rotate_columns, validate_frame, AdaptedFrame};
use crate::error::Result;
use crate::geometry::{check_stencil, geometry_at, jet_of, GeometryAtPoint, ManifoldDefinition, Tensor3};
use nalgebra::DMatrix;

/// Adapted frame at a point together with the coordinate partials of its
/// columns.
#[derive(Debug, Clone)]
pub struct FrameJet {
    pub frame: AdaptedFrame,
    /// `dcolumns[a] = ∂_a` of the column matrix.
    pub dcolumns: Vec<DMatrix<f64>>,
    /// `true` when the frame came from the definition's expressions.
    pub analytic: bool,
}

impl FrameJet {
    /// Constant admissible rotation of the whole frame field.
    pub fn rotated(&self, angles: &[f64], kernel_rotation: &DMatrix<f64>) -> FrameJet {
        let m = self.frame.m();
        FrameJet {
            frame: self.frame.rotated(angles, kernel_rotation),
            dcolumns: self
                .dcolumns
                .iter()
                .map(|d| rotate_columns(d, m, angles, kernel_rotation))
                .collect(),
            analytic: self.analytic,
        }
    }
}

/// Frame connection data in one place.
#[derive(Debug, Clone)]
pub struct FrameCoefficients {
    pub frame: AdaptedFrame,
    /// `conn[(i, j, k)] = G_ij^k = g(∇_{E_i} E_j, E_k)`.
    pub conn: Tensor3,
    /// `nabla_v[(j, k)] = (∇V)_j^k = g(∇_{E_j} V, E_k)`.
    pub nabla_v: DMatrix<f64>,
    /// `dnabla_v[(i, j, k)] = E_i((∇V)_j^k)`.
    pub dnabla_v: Tensor3,
}

impl FrameCoefficients {
    pub fn dim(&self) -> usize {
        self.frame.dim()
    }

    /// `E_dir(λ_plane)`, read from `λ_i = (∇V)_{i*}^i`.
    pub fn lambda_derivative(&self, dir: usize, plane: usize) -> f64 {
        self.dnabla_v[(dir, 2 * plane + 1, 2 * plane)]
    }

    /// `max |G_ij^k + G_ik^j|`.
    pub fn antisymmetry_defect(&self) -> f64 {
        let n = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    worst = worst.max((self.conn[(i, j, k)] + self.conn[(i, k, j)]).abs());
                }
            }
        }
        worst
    }

    /// `max |G_in^j - (∇V)_i^j|`.
    pub fn v_column_defect(&self) -> f64 {
        let n = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                worst = worst.max((self.conn[(i, n - 1, j)] - self.nabla_v[(i, j)]).abs());
            }
        }
        worst
    }
}

/// Adapted frame at `x`: the definition's analytic frame, validated, or the
/// canonical-form construction.
pub fn adapted_frame_at(def: &ManifoldDefinition, x: &[f64]) -> Result<AdaptedFrame> {
    let geo = geometry_at(def, x)?;
    adapted_frame_from(def, &geo)
}

pub(crate) fn adapted_frame_from(def: &ManifoldDefinition, geo: &GeometryAtPoint) -> Result<AdaptedFrame> {
    match &def.frame {
        Some(exprs) => {
            let n = def.dim();
            let mut cols = DMatrix::zeros(n, n);
            for (a, col) in exprs.iter().enumerate() {
                for (k, e) in col.iter().enumerate() {
                    cols[(k, a)] = crate::exprlang::eval(e, &geo.point).map_err(|source| {
                        crate::Error::Eval {
                            context: format!("frame[{a}][{k}]"),
                            source,
                        }
                    })?;
                }
            }
            validate_frame(geo, &cols, &def.tolerances)
        }
        None => construct_frame(geo, &def.tolerances),
    }
}

/// Frame and its first partials. Analytic frames are differentiated with
/// jets; constructed frames by central differences of stencil frames aligned
/// to the centre frame.
pub fn frame_jet_at(def: &ManifoldDefinition, x: &[f64]) -> Result<FrameJet> {
    let geo = geometry_at(def, x)?;
    frame_jet_from(def, &geo)
}

pub(crate) fn frame_jet_from(def: &ManifoldDefinition, geo: &GeometryAtPoint) -> Result<FrameJet> {
    let n = def.dim();
    let x = &geo.point;
    if let Some(exprs) = &def.frame {
        let mut cols = DMatrix::zeros(n, n);
        let mut dcolumns = vec![DMatrix::zeros(n, n); n];
        for (a, col) in exprs.iter().enumerate() {
            for (k, e) in col.iter().enumerate() {
                let jet = jet_of(e, x, || format!("frame[{a}][{k}]"))?;
                cols[(k, a)] = jet.value();
                for (b, d) in dcolumns.iter_mut().enumerate() {
                    d[(k, a)] = jet.gradient()[b];
                }
            }
        }
        let frame = validate_frame(geo, &cols, &def.tolerances)?;
        return Ok(FrameJet {
            frame,
            dcolumns,
            analytic: true,
        });
    }

    let center = construct_frame(geo, &def.tolerances)?;
    let steps = def.fd_steps();
    check_stencil(def, x, &steps)?;
    let aligned_at = |p: &[f64]| -> Result<DMatrix<f64>> {
        let g = geometry_at(def, p)?;
        let other = construct_frame(&g, &def.tolerances)?;
        Ok(align_frame(&center, &other)?.columns)
    };
    let mut dcolumns = Vec::with_capacity(n);
    let mut probe = x.clone();
    for (a, h) in steps.iter().enumerate() {
        probe[a] = x[a] + h;
        let plus = aligned_at(&probe)?;
        probe[a] = x[a] - h;
        let minus = aligned_at(&probe)?;
        probe[a] = x[a];
        dcolumns.push((plus - minus) / (2.0 * h));
    }
    Ok(FrameJet {
        frame: center,
        dcolumns,
        analytic: false,
    })
}

/// `G`, `(∇V)` and the frame derivatives of `(∇V)` for a given frame jet.
pub fn coefficients_from(geo: &GeometryAtPoint, jet: &FrameJet) -> FrameCoefficients {
    let n = geo.dim();
    let cols = &jet.frame.columns;
    // ∇_{∂_a} E_j in coordinates, for every a
    let cov: Vec<DMatrix<f64>> = (0..n)
        .map(|a| {
            DMatrix::from_fn(n, n, |k, j| {
                jet.dcolumns[a][(k, j)]
                    + (0..n).map(|l| geo.gamma[(k, a, l)] * cols[(l, j)]).sum::<f64>()
            })
        })
        .collect();
    let lowered = cols.transpose() * &geo.g; // row k = g(E_k, ·)
    let mut conn = Tensor3::zeros(n);
    for i in 0..n {
        let mut d = DMatrix::zeros(n, n);
        for a in 0..n {
            d += &cov[a] * cols[(a, i)];
        }
        let gk = &lowered * d; // [(k, j)] = g(∇_{E_i} E_j, E_k)
        for j in 0..n {
            for k in 0..n {
                conn[(i, j, k)] = gk[(k, j)];
            }
        }
    }

    let ga = &geo.g * &geo.nabla_v;
    let nabla_v = (cols.transpose() * &ga * cols).transpose();
    // ∂_a of E^T g A E, transposed at the end like nabla_v
    let dn: Vec<DMatrix<f64>> = (0..n)
        .map(|a| {
            let dc = &jet.dcolumns[a];
            let dga = &geo.dg[a] * &geo.nabla_v + &geo.g * &geo.dnabla_v[a];
            (dc.transpose() * &ga * cols + cols.transpose() * dga * cols + cols.transpose() * &ga * dc)
                .transpose()
        })
        .collect();
    let mut dnabla_v = Tensor3::zeros(n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                dnabla_v[(i, j, k)] = (0..n).map(|a| cols[(a, i)] * dn[a][(j, k)]).sum();
            }
        }
    }
    FrameCoefficients {
        frame: jet.frame.clone(),
        conn,
        nabla_v,
        dnabla_v,
    }
}

/// Frame connection coefficients `G_ij^k` and companions at `x`.
pub fn frame_coeffs_at(def: &ManifoldDefinition, x: &[f64]) -> Result<FrameCoefficients> {
    let geo = geometry_at(def, x)?;
    let jet = frame_jet_from(def, &geo)?;
    Ok(coefficients_from(&geo, &jet))
}
