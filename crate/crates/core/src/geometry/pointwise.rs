use super::definition::ManifoldDefinition;
use super::tensor::{Tensor3, Tensor4};
use crate::error::{Error, Result};
use crate::exprlang::{eval_jet2, Expression, Jet2};
use nalgebra::{DMatrix, DVector};

/// Everything the downstream formulas need from the chart at one point.
#[derive(Debug, Clone)]
pub struct GeometryAtPoint {
    pub point: Vec<f64>,
    pub g: DMatrix<f64>,
    pub g_inv: DMatrix<f64>,
    /// `dg[a] = ∂_a g`.
    pub dg: Vec<DMatrix<f64>>,
    /// `gamma[(k, i, j)] = Γ^k_{ij}`.
    pub gamma: Tensor3,
    /// `dgamma[(l, k, i, j)] = ∂_l Γ^k_{ij}`.
    pub dgamma: Tensor4,
    /// `riemann[(i, j, k, l)] = R(∂_i, ∂_j, ∂_k, ∂_l)` with
    /// `R(x,y,z,w) = -g((∇_x∇_y - ∇_y∇_x - ∇_[x,y]) z, w)`.
    pub riemann: Tensor4,
    pub field: DVector<f64>,
    /// `dfield[(k, a)] = ∂_a V^k`.
    pub dfield: DMatrix<f64>,
    /// `nabla_v[(k, j)] = (∇_{∂_j} V)^k`; the endomorphism `X ↦ ∇_X V`.
    pub nabla_v: DMatrix<f64>,
    /// `dnabla_v[a] = ∂_a nabla_v` (partial, not covariant).
    pub dnabla_v: Vec<DMatrix<f64>>,
}

impl GeometryAtPoint {
    pub fn dim(&self) -> usize {
        self.point.len()
    }

    pub fn inner(&self, u: &DVector<f64>, v: &DVector<f64>) -> f64 {
        (u.transpose() * &self.g * v)[(0, 0)]
    }

    pub fn norm(&self, u: &DVector<f64>) -> f64 {
        self.inner(u, u).max(0.0).sqrt()
    }

    /// `R(x, y, z, w)` for coordinate vectors.
    pub fn curvature(
        &self,
        x: &DVector<f64>,
        y: &DVector<f64>,
        z: &DVector<f64>,
        w: &DVector<f64>,
    ) -> f64 {
        let n = self.dim();
        let mut s = 0.0;
        for i in 0..n {
            if x[i] == 0.0 {
                continue;
            }
            for j in 0..n {
                if y[j] == 0.0 {
                    continue;
                }
                let xy = x[i] * y[j];
                for k in 0..n {
                    if z[k] == 0.0 {
                        continue;
                    }
                    let mut t = 0.0;
                    for l in 0..n {
                        t += self.riemann[(i, j, k, l)] * w[l];
                    }
                    s += xy * z[k] * t;
                }
            }
        }
        s
    }

    /// g-adjoint of an endomorphism given in coordinates.
    pub fn adjoint(&self, a: &DMatrix<f64>) -> DMatrix<f64> {
        &self.g_inv * a.transpose() * &self.g
    }
}

pub(crate) fn jet_of(
    e: &Expression,
    x: &[f64],
    context: impl FnOnce() -> String,
) -> Result<Jet2> {
    eval_jet2(e, x).map_err(|source| Error::Eval {
        context: context(),
        source,
    })
}

fn leading_minors_check(g: &DMatrix<f64>, x: &[f64]) -> Result<f64> {
    let n = g.nrows();
    let mut det = 0.0;
    for k in 1..=n {
        det = g.view((0, 0), (k, k)).determinant();
        if det <= 0.0 {
            return Err(Error::MetricNotPositiveDefinite {
                point: x.to_vec(),
                order: k,
                minor: det,
            });
        }
    }
    Ok(det)
}

/// Metric, connection, curvature and `∇V` at `x`, from exact jets of the
/// component expressions.
pub fn geometry_at(def: &ManifoldDefinition, x: &[f64]) -> Result<GeometryAtPoint> {
    let n = def.dim();
    if x.len() != n || !def.domain.contains(x) {
        return Err(Error::OutsideDomain { point: x.to_vec() });
    }

    let mut g = DMatrix::zeros(n, n);
    let mut dg = vec![DMatrix::zeros(n, n); n];
    // d2g[a][b][(i,j)] = ∂_a ∂_b g_ij
    let mut d2g = vec![vec![DMatrix::<f64>::zeros(n, n); n]; n];
    for ((i, j), e) in def.metric_entries() {
        let jet = jet_of(e, x, || format!("metric[{i},{j}]"))?;
        for (p, q) in [(i, j), (j, i)] {
            g[(p, q)] = jet.value();
            for a in 0..n {
                dg[a][(p, q)] = jet.gradient()[a];
                for b in 0..n {
                    d2g[a][b][(p, q)] = jet.hessian(a, b);
                }
            }
        }
    }

    let det = leading_minors_check(&g, x)?;
    if det < 1e-12 {
        return Err(Error::MetricSingular {
            point: x.to_vec(),
            det,
        });
    }
    let g_inv = g
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::MetricSingular {
            point: x.to_vec(),
            det,
        })?;

    // first-kind symbols: gamma_low[(l, i, j)] = Γ_{l,ij}
    let gamma_low = Tensor3::from_fn(n, |l, i, j| {
        0.5 * (dg[i][(l, j)] + dg[j][(l, i)] - dg[l][(i, j)])
    });
    let gamma = Tensor3::from_fn(n, |k, i, j| {
        (0..n).map(|l| g_inv[(k, l)] * gamma_low[(l, i, j)]).sum()
    });

    // ∂_m g^{kl} = -g^{kp} ∂_m g_pq g^{ql}
    let dg_inv: Vec<DMatrix<f64>> = (0..n).map(|m| -(&g_inv * &dg[m] * &g_inv)).collect();
    let mut dgamma = Tensor4::zeros(n);
    for m in 0..n {
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let mut s = 0.0;
                    for l in 0..n {
                        let dlow = 0.5
                            * (d2g[m][i][(l, j)] + d2g[m][j][(l, i)] - d2g[m][l][(i, j)]);
                        s += dg_inv[m][(k, l)] * gamma_low[(l, i, j)] + g_inv[(k, l)] * dlow;
                    }
                    dgamma[(m, k, i, j)] = s;
                }
            }
        }
    }

    // Standard tensor R(∂_i,∂_j)∂_k = Rs^l_{kij} ∂_l, then the single sign
    // conversion: riemann_ijkl = -g_lm Rs^m_{kij}.
    let mut riemann = Tensor4::zeros(n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let mut rs = vec![0.0; n];
                for (l, r) in rs.iter_mut().enumerate() {
                    let mut v = dgamma[(i, l, j, k)] - dgamma[(j, l, i, k)];
                    for m in 0..n {
                        v += gamma[(l, i, m)] * gamma[(m, j, k)]
                            - gamma[(l, j, m)] * gamma[(m, i, k)];
                    }
                    *r = v;
                }
                for l in 0..n {
                    riemann[(i, j, k, l)] = -(0..n).map(|m| g[(l, m)] * rs[m]).sum::<f64>();
                }
            }
        }
    }

    let mut field = DVector::zeros(n);
    let mut dfield = DMatrix::zeros(n, n);
    // d2field[k][(a, b)] = ∂_a ∂_b V^k
    let mut d2field = vec![DMatrix::<f64>::zeros(n, n); n];
    for (k, e) in def.field.iter().enumerate() {
        let jet = jet_of(e, x, || format!("V[{k}]"))?;
        field[k] = jet.value();
        for a in 0..n {
            dfield[(k, a)] = jet.gradient()[a];
        }
        d2field[k] = jet.hessian_matrix();
    }

    let nabla_v = DMatrix::from_fn(n, n, |k, j| {
        dfield[(k, j)] + (0..n).map(|l| gamma[(k, j, l)] * field[l]).sum::<f64>()
    });
    let dnabla_v = (0..n)
        .map(|a| {
            DMatrix::from_fn(n, n, |k, j| {
                d2field[k][(a, j)]
                    + (0..n)
                        .map(|l| dgamma[(a, k, j, l)] * field[l] + gamma[(k, j, l)] * dfield[(l, a)])
                        .sum::<f64>()
            })
        })
        .collect();

    Ok(GeometryAtPoint {
        point: x.to_vec(),
        g,
        g_inv,
        dg,
        gamma,
        dgamma,
        riemann,
        field,
        dfield,
        nabla_v,
        dnabla_v,
    })
}

/// `max_{a,b} |g(∇_{∂_a}V, ∂_b) + g(∇_{∂_b}V, ∂_a)|`.
pub fn killing_defect_of(geo: &GeometryAtPoint) -> f64 {
    let n = geo.dim();
    let lowered = &geo.g * &geo.nabla_v; // [(b, a)] = g(∇_a V, ∂_b)
    let mut worst: f64 = 0.0;
    for a in 0..n {
        for b in a..n {
            worst = worst.max((lowered[(b, a)] + lowered[(a, b)]).abs());
        }
    }
    worst
}

pub fn killing_defect(def: &ManifoldDefinition, x: &[f64]) -> Result<f64> {
    Ok(killing_defect_of(&geometry_at(def, x)?))
}

/// `|g(V, V) - 1|`.
pub fn unit_defect_of(geo: &GeometryAtPoint) -> f64 {
    (geo.inner(&geo.field, &geo.field) - 1.0).abs()
}

pub fn unit_defect(def: &ManifoldDefinition, x: &[f64]) -> Result<f64> {
    Ok(unit_defect_of(&geometry_at(def, x)?))
}

/// Largest violation of the algebraic curvature symmetries and the first
/// Bianchi identity, relative to the largest curvature component (or 1).
pub fn curvature_symmetry_defect(geo: &GeometryAtPoint) -> f64 {
    let n = geo.dim();
    let r = &geo.riemann;
    let scale = r.max_abs().max(1.0);
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let v = r[(i, j, k, l)];
                    worst = worst
                        .max((v + r[(j, i, k, l)]).abs())
                        .max((v + r[(i, j, l, k)]).abs())
                        .max((v - r[(k, l, i, j)]).abs())
                        .max((v + r[(j, k, i, l)] + r[(k, i, j, l)]).abs());
                }
            }
        }
    }
    worst / scale
}

/// `max |∂_a g_ij - Γ^l_{ai} g_lj - Γ^l_{aj} g_il|`.
pub fn metric_compatibility_defect(geo: &GeometryAtPoint) -> f64 {
    let n = geo.dim();
    let mut worst: f64 = 0.0;
    for a in 0..n {
        for i in 0..n {
            for j in 0..n {
                let mut v = geo.dg[a][(i, j)];
                for l in 0..n {
                    v -= geo.gamma[(l, a, i)] * geo.g[(l, j)] + geo.gamma[(l, a, j)] * geo.g[(i, l)];
                }
                worst = worst.max(v.abs());
            }
        }
    }
    worst
}
