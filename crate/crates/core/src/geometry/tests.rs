use super::*;
use crate::error::Error;
use crate::exprlang::eval;
use nalgebra::{DMatrix, DVector};

fn def(coords: &[&str], metric: &[&[&str]], field: &[&str], lo: f64, hi: f64) -> ManifoldDefinition {
    let n = coords.len();
    let m: Vec<Vec<String>> = metric
        .iter()
        .map(|r| r.iter().map(|s| s.to_string()).collect())
        .collect();
    let f: Vec<String> = field.iter().map(|s| s.to_string()).collect();
    ManifoldDefinition::from_sources(
        "test",
        coords,
        &m,
        &f,
        None,
        Domain::new(vec![lo; n], vec![hi; n]).unwrap(),
        vec![3; n],
    )
    .unwrap()
}

fn euclid3() -> ManifoldDefinition {
    def(
        &["x", "y", "z"],
        &[&["1", "0", "0"], &["0", "1", "0"], &["0", "0", "1"]],
        &["0", "0", "1"],
        -1.0,
        1.0,
    )
}

/// Christoffel symbols from central differences of metric values only.
fn fd_christoffel(d: &ManifoldDefinition, x: &[f64], h: f64) -> Tensor3 {
    let n = d.dim();
    let metric_at = |p: &[f64]| {
        DMatrix::from_fn(n, n, |i, j| eval(d.metric_expr(i, j), p).unwrap())
    };
    let g = metric_at(x);
    let gi = g.clone().try_inverse().unwrap();
    let dg: Vec<DMatrix<f64>> = (0..n)
        .map(|a| {
            let mut p = x.to_vec();
            let mut m = x.to_vec();
            p[a] += h;
            m[a] -= h;
            (metric_at(&p) - metric_at(&m)) / (2.0 * h)
        })
        .collect();
    Tensor3::from_fn(n, |k, i, j| {
        (0..n)
            .map(|l| 0.5 * gi[(k, l)] * (dg[i][(l, j)] + dg[j][(l, i)] - dg[l][(i, j)]))
            .sum()
    })
}

/// Lowered curvature `-g(R(∂i,∂j)∂k, ∂l)` from nested finite differences.
fn fd_riemann(d: &ManifoldDefinition, x: &[f64]) -> Tensor4 {
    let n = d.dim();
    let (h1, h2) = (1e-4, 1e-3);
    let gam = fd_christoffel(d, x, h1);
    let dgam: Vec<Tensor3> = (0..n)
        .map(|a| {
            let mut p = x.to_vec();
            let mut m = x.to_vec();
            p[a] += h2;
            m[a] -= h2;
            let (gp, gm) = (fd_christoffel(d, &p, h1), fd_christoffel(d, &m, h1));
            Tensor3::from_fn(n, |k, i, j| (gp[(k, i, j)] - gm[(k, i, j)]) / (2.0 * h2))
        })
        .collect();
    let g = DMatrix::from_fn(n, n, |i, j| eval(d.metric_expr(i, j), x).unwrap());
    let mut r = Tensor4::zeros(n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let mut s = 0.0;
                    for m in 0..n {
                        let mut rs = dgam[i][(m, j, k)] - dgam[j][(m, i, k)];
                        for p in 0..n {
                            rs += gam[(m, i, p)] * gam[(p, j, k)] - gam[(m, j, p)] * gam[(p, i, k)];
                        }
                        s -= g[(l, m)] * rs;
                    }
                    r[(i, j, k, l)] = s;
                }
            }
        }
    }
    r
}

#[test]
fn flat_space_has_no_connection_or_curvature() {
    let geo = geometry_at(&euclid3(), &[0.1, -0.3, 0.7]).unwrap();
    assert_eq!(geo.gamma.max_abs(), 0.0);
    assert_eq!(geo.riemann.max_abs(), 0.0);
    assert_eq!(killing_defect_of(&geo), 0.0);
}

#[test]
fn constant_coefficient_metric_is_flat() {
    let d = def(
        &["x", "y", "z"],
        &[&["2", "0.3", "-0.1"], &["", "1.5", "0.2"], &["", "", "0.9"]],
        &["0", "0", "1/sqrt(0.9)"],
        -1.0,
        1.0,
    );
    let geo = geometry_at(&d, &[0.2, 0.4, -0.5]).unwrap();
    assert!(geo.riemann.max_abs() < 1e-10);
    assert!(geo.gamma.max_abs() < 1e-15);
}

#[test]
fn polar_christoffels() {
    let d = def(&["r", "t"], &[&["1", "0"], &["", "r^2"]], &["0", "1/r"], 0.5, 3.0);
    let geo = geometry_at(&d, &[2.0, 1.0]).unwrap();
    // index 0 = r, 1 = t
    assert!((geo.gamma[(0, 1, 1)] + 2.0).abs() < 1e-15);
    assert!((geo.gamma[(1, 0, 1)] - 0.5).abs() < 1e-15);
    let fd = fd_christoffel(&d, &[2.0, 1.0], 1e-5);
    for k in 0..2 {
        for i in 0..2 {
            for j in 0..2 {
                assert!((fd[(k, i, j)] - geo.gamma[(k, i, j)]).abs() < 1e-8);
                assert_eq!(geo.gamma[(k, i, j)], geo.gamma[(k, j, i)]);
            }
        }
    }
}

#[test]
fn round_sphere_curvature_sign() {
    // stereographic chart of the unit sphere
    let c = "4/(1 + u^2 + v^2)^2";
    let d = def(&["u", "v"], &[&[c, "0"], &["", c]], &["0", "0"], -1.0, 1.0);
    let x = [0.3, -0.2];
    let geo = geometry_at(&d, &x).unwrap();
    let s = 1.0 / geo.g[(0, 0)].sqrt();
    let u = DVector::from_vec(vec![s, 0.0]);
    let w = DVector::from_vec(vec![0.0, s]);
    // The difference oracle pins the sign: R(u,w,w,u) = -1, R(u,w,u,w) = +1.
    let fd = fd_riemann(&d, &x);
    let mut oracle = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    oracle += fd[(i, j, k, l)] * u[i] * w[j] * w[k] * u[l];
                }
            }
        }
    }
    assert!((oracle + 1.0).abs() < 1e-4, "oracle {oracle}");
    assert!((geo.curvature(&u, &w, &w, &u) + 1.0).abs() < 1e-12);
    assert!((geo.curvature(&u, &w, &u, &w) - 1.0).abs() < 1e-12);
}

#[test]
fn curvature_matches_difference_oracle_on_a_warped_metric() {
    let d = def(
        &["x", "y", "z"],
        &[
            &["1 + x^2*y^2", "0.1*sin(z)", "x*y"],
            &["", "2 + cos(x)", "0"],
            &["", "", "1"],
        ],
        &["0", "0", "1"],
        -0.8,
        0.8,
    );
    let x = [0.3, -0.4, 0.25];
    let geo = geometry_at(&d, &x).unwrap();
    let fd = fd_riemann(&d, &x);
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                for l in 0..3 {
                    assert!((fd[(i, j, k, l)] - geo.riemann[(i, j, k, l)]).abs() < 1e-5);
                }
            }
        }
    }
    assert!(curvature_symmetry_defect(&geo) < 1e-12);
    assert!(metric_compatibility_defect(&geo) < 1e-12);
}

#[test]
fn killing_defects_of_standard_fields() {
    let d = euclid3();
    assert_eq!(killing_defect(&d, &[0.3, 0.2, 0.1]).unwrap(), 0.0);
    let rot = def(&["x", "y"], &[&["1", "0"], &["", "1"]], &["-y", "x"], -1.0, 1.0);
    assert_eq!(killing_defect(&rot, &[0.4, -0.6]).unwrap(), 0.0);
    let dil = def(&["x"], &[&["1"]], &["x"], -1.0, 1.0);
    assert_eq!(killing_defect(&dil, &[0.7]).unwrap(), 2.0);
    assert_eq!(unit_defect(&dil, &[0.5]).unwrap(), 0.75);
}

#[test]
fn identity_tensor_is_parallel() {
    let d = def(
        &["r", "t"],
        &[&["1", "0"], &["", "r^2"]],
        &["0", "1/r"],
        0.5,
        3.0,
    );
    let nabla = covariant_derivative_tensor11(&d, &[1.3, 1.2], |_| Ok(DMatrix::identity(2, 2))).unwrap();
    for m in nabla {
        assert!(m.amax() < 1e-12);
    }
}

#[test]
fn error_paths() {
    let d = euclid3();
    assert!(matches!(
        geometry_at(&d, &[2.0, 0.0, 0.0]),
        Err(Error::OutsideDomain { .. })
    ));
    let near = [1.0 - 1e-4, 0.0, 0.0];
    assert!(matches!(
        covariant_derivative_tensor11(&d, &near, |_| Ok(DMatrix::identity(3, 3))),
        Err(Error::StencilOutsideDomain { axis: 0, .. })
    ));
    let indefinite = def(&["x", "y"], &[&["1", "2"], &["", "1"]], &["1", "0"], -1.0, 1.0);
    assert!(matches!(
        geometry_at(&indefinite, &[0.0, 0.0]),
        Err(Error::MetricNotPositiveDefinite { order: 2, .. })
    ));
    let tiny = def(&["x"], &[&["1e-13"]], &["1"], -1.0, 1.0);
    assert!(matches!(
        geometry_at(&tiny, &[0.0]),
        Err(Error::MetricSingular { .. })
    ));
    let bad = def(&["x"], &[&["log(x)"]], &["1"], -1.0, 1.0);
    assert!(matches!(geometry_at(&bad, &[-0.5]), Err(Error::Eval { .. })));
}
