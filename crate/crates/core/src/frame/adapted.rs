use crate::error::{Error, Result};
use crate::geometry::{killing_defect_of, unit_defect_of, GeometryAtPoint};
use crate::tolerances::Tolerances;
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use std::ops::Range;

/// Orthonormal frame `E_1, E_1*, ..., E_m, E_m*, E_{2m+1}, ..., E_n = V`
/// with `∇V(E_i) = -λ_i E_i*`, `∇V(E_i*) = λ_i E_i` and `∇V(E_α) = 0`.
///
/// Indices are zero-based: pair `i` occupies columns `2i` and `2i + 1`,
/// the kernel block follows, and the last column is `V`.
#[derive(Debug, Clone, PartialEq)]
pub struct AdaptedFrame {
    /// Column `a` holds the coordinate components of `E_a`.
    pub columns: DMatrix<f64>,
    /// `λ_1 ≥ ... ≥ λ_m > 0`.
    pub lambdas: Vec<f64>,
}

impl AdaptedFrame {
    pub fn dim(&self) -> usize {
        self.columns.ncols()
    }

    /// Number of rotation planes.
    pub fn m(&self) -> usize {
        self.lambdas.len()
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (0..self.m()).map(|i| (2 * i, 2 * i + 1)).collect()
    }

    pub fn kernel_indices(&self) -> Range<usize> {
        2 * self.m()..self.dim() - 1
    }

    pub fn v_index(&self) -> usize {
        self.dim() - 1
    }

    pub fn column(&self, a: usize) -> DVector<f64> {
        self.columns.column(a).into_owned()
    }

    /// `Some(i)` when direction `a` is `E_i` or `E_i*`.
    pub fn plane_of(&self, a: usize) -> Option<usize> {
        (a < 2 * self.m()).then_some(a / 2)
    }

    /// Human-readable direction label: `E1`, `E1*`, `E3`, ..., `V`.
    pub fn label(&self, a: usize) -> String {
        if a == self.v_index() {
            "V".to_string()
        } else if a < 2 * self.m() {
            if a % 2 == 0 {
                format!("E{}", a / 2 + 1)
            } else {
                format!("E{}*", a / 2 + 1)
            }
        } else {
            format!("E{}", a + 1)
        }
    }

    /// `max |g(E_a, E_b) - δ_ab|` for the metric matrix `g`.
    pub fn gram_defect(&self, g: &DMatrix<f64>) -> f64 {
        let n = self.dim();
        (self.columns.transpose() * g * &self.columns - DMatrix::<f64>::identity(n, n)).amax()
    }

    /// Columns as coordinate vectors.
    pub fn column_vecs(&self) -> Vec<Vec<f64>> {
        (0..self.dim())
            .map(|a| self.columns.column(a).iter().copied().collect())
            .collect()
    }

    /// Frame obtained by rotating each plane `(E_i, E_i*)` by `angles[i]`
    /// and replacing the kernel block `K` by `K Q`. Both operations keep
    /// the normal form.
    pub fn rotated(&self, angles: &[f64], kernel_rotation: &DMatrix<f64>) -> AdaptedFrame {
        AdaptedFrame {
            columns: rotate_columns(&self.columns, self.m(), angles, kernel_rotation),
            lambdas: self.lambdas.clone(),
        }
    }
}

pub(crate) fn rotate_columns(
    cols: &DMatrix<f64>,
    m: usize,
    angles: &[f64],
    kernel_rotation: &DMatrix<f64>,
) -> DMatrix<f64> {
    let n = cols.ncols();
    let mut out = cols.clone();
    for (i, theta) in angles.iter().enumerate().take(m) {
        let (s, c) = theta.sin_cos();
        let e = cols.column(2 * i).into_owned();
        let es = cols.column(2 * i + 1).into_owned();
        out.set_column(2 * i, &(&e * c + &es * s));
        out.set_column(2 * i + 1, &(&es * c - &e * s));
    }
    let k = n - 1 - 2 * m;
    if k > 0 {
        let block = cols.columns(2 * m, k) * kernel_rotation;
        out.columns_mut(2 * m, k).copy_from(&block);
    }
    out
}

/// `N[(a, b)] = g(∇_{E_a} V, E_b)` for an arbitrary set of columns.
pub(crate) fn frame_components_of_nabla_v(geo: &GeometryAtPoint, cols: &DMatrix<f64>) -> DMatrix<f64> {
    (cols.transpose() * &geo.g * &geo.nabla_v * cols).transpose()
}

fn require_unit_killing(geo: &GeometryAtPoint, tol: &Tolerances) -> Result<()> {
    let u = unit_defect_of(geo);
    if u > tol.unit {
        return Err(Error::NotUnit {
            point: geo.point.clone(),
            defect: u,
        });
    }
    let k = killing_defect_of(geo);
    if k > tol.killing {
        return Err(Error::NotKilling {
            point: geo.point.clone(),
            defect: k,
        });
    }
    Ok(())
}

/// Checks a supplied frame against every normal-form invariant and reads
/// off `λ_i`.
pub fn validate_frame(
    geo: &GeometryAtPoint,
    cols: &DMatrix<f64>,
    tol: &Tolerances,
) -> Result<AdaptedFrame> {
    let n = geo.dim();
    let at = || format!("at {:?}", geo.point);
    if cols.nrows() != n || cols.ncols() != n {
        return Err(Error::FrameValidation(format!("frame must be {n}x{n}")));
    }
    let gram = cols.transpose() * &geo.g * cols;
    let gram_defect = (gram - DMatrix::<f64>::identity(n, n)).amax();
    if gram_defect > tol.frame_gram {
        return Err(Error::FrameValidation(format!(
            "frame is not orthonormal {}: Gram defect {gram_defect:e}",
            at()
        )));
    }
    let v_defect = (cols.column(n - 1) - &geo.field).amax();
    if v_defect > tol.frame_gram {
        return Err(Error::FrameValidation(format!(
            "last frame column differs from V {}: {v_defect:e}",
            at()
        )));
    }
    let nv = frame_components_of_nabla_v(geo, cols);
    let row_norm = |a: usize| nv.row(a).norm();
    let moving = (0..n - 1).take_while(|a| row_norm(*a) > tol.rank).count();
    if (moving..n).any(|a| row_norm(a) > tol.frame_relation) {
        return Err(Error::FrameValidation(format!(
            "kernel directions must follow the rotation planes and satisfy ∇V(E_α) = 0 {}",
            at()
        )));
    }
    if moving % 2 != 0 {
        return Err(Error::FrameValidation(format!(
            "odd number ({moving}) of non-kernel directions {}",
            at()
        )));
    }
    let m = moving / 2;
    let mut lambdas = Vec::with_capacity(m);
    for i in 0..m {
        let (e, es) = (2 * i, 2 * i + 1);
        let lambda = nv[(es, e)];
        if lambda <= tol.rank {
            return Err(Error::FrameValidation(format!(
                "plane {} has non-positive rotation rate {lambda:e} {}",
                i + 1,
                at()
            )));
        }
        let mut r1: f64 = 0.0;
        let mut r2: f64 = 0.0;
        for b in 0..n {
            let want1 = if b == es { -lambda } else { 0.0 };
            let want2 = if b == e { lambda } else { 0.0 };
            r1 = r1.max((nv[(e, b)] - want1).abs());
            r2 = r2.max((nv[(es, b)] - want2).abs());
        }
        if r1.max(r2) > tol.frame_relation {
            return Err(Error::FrameValidation(format!(
                "∇V(E_{0}) = -λ E_{0}* or ∇V(E_{0}*) = λ E_{0} violated by {1:e} {2}",
                i + 1,
                r1.max(r2),
                at()
            )));
        }
        if let Some(prev) = lambdas.last() {
            if lambda > prev + tol.frame_relation {
                return Err(Error::FrameValidation(format!(
                    "rotation rates must be in descending order {}",
                    at()
                )));
            }
        }
        lambdas.push(lambda);
    }
    Ok(AdaptedFrame {
        columns: cols.clone(),
        lambdas,
    })
}

/// g-orthonormal basis of the complement of `V`, built by Gram-Schmidt on
/// the coordinate vectors.
fn complement_basis(geo: &GeometryAtPoint) -> Result<DMatrix<f64>> {
    let n = geo.dim();
    let v = &geo.field / geo.norm(&geo.field);
    let mut basis: Vec<DVector<f64>> = vec![v];
    for c in 0..n {
        if basis.len() == n {
            break;
        }
        let mut w = DVector::zeros(n);
        w[c] = 1.0;
        let scale = geo.norm(&w);
        for _ in 0..2 {
            for b in &basis {
                let p = geo.inner(&w, b);
                w -= b * p;
            }
        }
        let r = geo.norm(&w);
        if r > 1e-6 * scale {
            basis.push(w / r);
        }
    }
    if basis.len() != n {
        return Err(Error::Internal(
            "coordinate vectors do not span the tangent space".into(),
        ));
    }
    Ok(DMatrix::from_columns(&basis[1..]))
}

/// Orthonormal basis of a subspace (columns of `span`, Euclidean
/// orthonormal) pinned by projecting coordinate axes: the first axis with a
/// substantial projection gives the first vector, and so on.
fn pinned_basis(span: &DMatrix<f64>, axes: &DMatrix<f64>, count: usize) -> Vec<DVector<f64>> {
    let mut out: Vec<DVector<f64>> = Vec::with_capacity(count);
    let project = |w: &DVector<f64>| span * (span.transpose() * w);
    for threshold in [0.25, 1e-3] {
        for c in 0..axes.ncols() {
            if out.len() == count {
                return out;
            }
            let beta = axes.column(c).into_owned();
            let scale = beta.norm();
            if scale == 0.0 {
                continue;
            }
            let mut p = project(&beta);
            for _ in 0..2 {
                for b in &out {
                    let d = p.dot(b);
                    p -= b * d;
                }
            }
            if p.norm() > threshold * scale {
                out.push(p.normalize());
            }
        }
    }
    out
}

/// Builds the adapted frame from the real canonical form of the skew map
/// `∇V` restricted to `V^⊥`.
pub fn construct_frame(geo: &GeometryAtPoint, tol: &Tolerances) -> Result<AdaptedFrame> {
    require_unit_killing(geo, tol)?;
    let n = geo.dim();
    let point = || geo.point.clone();
    let basis = complement_basis(geo)?;
    let k = n - 1;
    let s_raw = basis.transpose() * &geo.g * &geo.nabla_v * &basis;
    let s = (&s_raw - s_raw.transpose()) * 0.5;

    let sigma = s.clone().svd(false, false).singular_values;
    let rank = sigma.iter().filter(|v| **v > tol.rank).count();
    if rank % 2 != 0 {
        return Err(Error::OddRank {
            point: point(),
            rank,
        });
    }
    let m = rank / 2;

    let eig = SymmetricEigen::new(s.transpose() * &s);
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|a, b| eig.eigenvalues[*b].total_cmp(&eig.eigenvalues[*a]));
    let lambda_of = |i: usize| {
        let mu = 0.5 * (eig.eigenvalues[order[2 * i]] + eig.eigenvalues[order[2 * i + 1]]);
        mu.max(0.0).sqrt()
    };
    let approx: Vec<f64> = (0..m).map(lambda_of).collect();
    for i in 0..m {
        let next = if i + 1 < m { approx[i + 1] } else { 0.0 };
        let gap = approx[i] - next;
        if gap < tol.sep {
            return Err(Error::NearDegenerate {
                point: point(),
                gap,
            });
        }
    }

    // coordinate axes expressed in the orthonormal complement basis
    let axes = basis.transpose() * &geo.g;
    let mut cols: Vec<DVector<f64>> = Vec::with_capacity(n);
    let mut lambdas = Vec::with_capacity(m);
    for (i, approx_lambda) in approx.iter().enumerate() {
        let span = DMatrix::from_columns(&[
            eig.eigenvectors.column(order[2 * i]).into_owned(),
            eig.eigenvectors.column(order[2 * i + 1]).into_owned(),
        ]);
        let e = pinned_basis(&span, &axes, 1)
            .pop()
            .ok_or_else(|| Error::Internal("empty rotation plane".into()))?;
        let mut e_coord = &basis * &e;
        let flip = e_coord
            .iter()
            .find(|c| c.abs() > 1e-12)
            .is_some_and(|c| *c < 0.0);
        let e = if flip { -e } else { e };
        if flip {
            e_coord = -e_coord;
        }
        let es = (-(&s * &e) / *approx_lambda).normalize();
        lambdas.push(e.dot(&(&s * &es)));
        cols.push(e_coord);
        cols.push(&basis * es);
    }
    if k > 2 * m {
        let kernel = DMatrix::from_columns(
            &order[2 * m..]
                .iter()
                .map(|c| eig.eigenvectors.column(*c).into_owned())
                .collect::<Vec<_>>(),
        );
        let kb = pinned_basis(&kernel, &axes, k - 2 * m);
        if kb.len() != k - 2 * m {
            return Err(Error::Internal("kernel basis incomplete".into()));
        }
        cols.extend(kb.iter().map(|e| &basis * e));
    }
    cols.push(geo.field.clone());
    Ok(AdaptedFrame {
        columns: DMatrix::from_columns(&cols),
        lambdas,
    })
}

/// Rotates the planes and kernel block of `other` to best match `center`,
/// so that frames built independently at nearby points form a smooth
/// family.
pub fn align_frame(center: &AdaptedFrame, other: &AdaptedFrame) -> Result<AdaptedFrame> {
    let m = center.m();
    if other.m() != m || other.dim() != center.dim() {
        return Err(Error::Alignment(format!(
            "plane count changes from {m} to {}",
            other.m()
        )));
    }
    let n = center.dim();
    let c = &center.columns;
    let o = &other.columns;
    let mut angles = Vec::with_capacity(m);
    for i in 0..m {
        let (a, b) = (2 * i, 2 * i + 1);
        let y = o.column(b).dot(&c.column(a)) - o.column(a).dot(&c.column(b));
        let x = o.column(a).dot(&c.column(a)) + o.column(b).dot(&c.column(b));
        angles.push(y.atan2(x));
    }
    let k = n - 1 - 2 * m;
    let q = if k > 0 {
        let cross = o.columns(2 * m, k).transpose() * c.columns(2 * m, k);
        let svd = cross.svd(true, true);
        match (svd.u, svd.v_t) {
            (Some(u), Some(vt)) => u * vt,
            _ => return Err(Error::Alignment("kernel Procrustes failed".into())),
        }
    } else {
        DMatrix::zeros(0, 0)
    };
    let aligned = other.rotated(&angles, &q);
    let drift = (&aligned.columns - c).amax();
    if drift > 0.5 {
        return Err(Error::Alignment(format!(
            "stencil frame differs from the centre frame by {drift:.3}"
        )));
    }
    Ok(aligned)
}
