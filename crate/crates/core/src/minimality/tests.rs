use super::*;
use crate::catalog::{builtin, NAMES};
use crate::frame::{adapted_frame_at, frame_jet_at};
use crate::geometry::{geometry_at, ManifoldDefinition};
use nalgebra::{DMatrix, SymmetricEigen};
use proptest::prelude::*;

fn cat(name: &str) -> ManifoldDefinition {
    builtin(name, &[]).unwrap()
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

#[test]
fn operators_collapse_for_parallel_fields() {
    let d = cat("euclidean_parallel");
    let ops = operators_at(&d, &[0.1, 0.2, 0.3]).unwrap();
    assert_eq!(ops.l, DMatrix::identity(3, 3));
    assert_eq!(ops.f, 1.0);
    assert_eq!(ops.k.amax(), 0.0);
}

#[test]
fn hopf_density_is_two() {
    let d = cat("hopf_s3");
    for x in d.random_points(10, 2) {
        let ops = operators_at(&d, &x).unwrap();
        assert!((ops.f - 2.0).abs() < 1e-9);
    }
}

#[test]
fn density_matches_the_rate_product() {
    for name in NAMES {
        let d = cat(name);
        for x in d.random_points(10, 4) {
            let geo = geometry_at(&d, &x).unwrap();
            let ops = operators_of(&geo).unwrap();
            let frame = adapted_frame_at(&d, &x).unwrap();
            let product: f64 = frame.lambdas.iter().map(|l| 1.0 + l * l).product();
            assert!((ops.f - product).abs() < 1e-9, "{name}");
            assert!(ops.f >= 1.0);
            // spectrum of L_V in the orthonormal frame
            let e = &frame.columns;
            let sym = e.transpose() * &geo.g * &ops.l * e;
            assert!((&sym - sym.transpose()).amax() < 1e-12);
            let mut eig: Vec<f64> = SymmetricEigen::new(sym).eigenvalues.iter().copied().collect();
            eig.sort_by(|a, b| b.total_cmp(a));
            let mut want: Vec<f64> = frame
                .lambdas
                .iter()
                .flat_map(|l| [1.0 + l * l, 1.0 + l * l])
                .collect();
            want.resize(d.dim(), 1.0);
            assert!(max_abs_diff(&eig, &want) < 1e-9, "{name}");
        }
    }
}

#[test]
fn twisted_density_is_one_plus_rate_squared() {
    let d = cat("twisted_r3");
    let x = [0.6, 0.35, 0.1];
    let ops = operators_at(&d, &x).unwrap();
    let lambda = adapted_frame_at(&d, &x).unwrap().lambdas[0];
    assert!((ops.f - (1.0 + lambda * lambda)).abs() < 1e-12);
    assert!((ops.f - (1.0 + 0.36 / 4.0)).abs() < 1e-12);
}

#[test]
fn unit_killing_fields_are_geodesic() {
    for name in NAMES {
        let d = cat(name);
        for x in d.random_points(10, 6) {
            let geo = geometry_at(&d, &x).unwrap();
            assert!((&geo.nabla_v * &geo.field).amax() < 1e-8, "{name}");
        }
    }
}

#[test]
fn omega_vanishes_for_the_parallel_field() {
    let d = cat("euclidean_parallel");
    let w = omega_direct_at(&d, &[0.1, -0.2, 0.3]).unwrap();
    assert_eq!(w.coords.amax(), 0.0);
    assert!(omega_frame_at(&d, &[0.1, -0.2, 0.3]).unwrap().iter().all(|v| *v == 0.0));
}

#[test]
fn hopf_field_is_minimal() {
    let d = cat("hopf_s3");
    for x in d.random_points(10, 8) {
        let w = omega_direct_at(&d, &x).unwrap();
        assert!(w.frame[..2].iter().all(|v| v.abs() < 1e-7), "{:?}", w.frame);
        let wf = omega_frame_at(&d, &x).unwrap();
        assert!(wf[..2].iter().all(|v| v.abs() < 1e-12), "{wf:?}");
        // off the criterion: ω(V) = -f Σ 2λ^2 / (1 + λ^2) = -2
        assert!((w.frame[2] + 2.0).abs() < 1e-7);
        assert!((wf[2] + 2.0).abs() < 1e-12);
    }
}

#[test]
fn twisted_omega_matches_symbolic_values() {
    // symbolic trace for A = x y: ω(E1) = 0, ω(E1*) = -1/2, ω(V) = -x^2/2
    let d = cat("twisted_r3");
    let x = [0.3, 0.7, 0.0];
    let w = omega_direct_at(&d, &x).unwrap();
    assert!(w.frame[0].abs() < 1e-8);
    assert!((w.frame[1] + 0.5).abs() < 1e-8);
    assert!((w.frame[2] + 0.045).abs() < 1e-8);
    assert!(w.frame.iter().any(|v| v.abs() > 1e-3));
    let wf = omega_frame_at(&d, &x).unwrap();
    assert!(max_abs_diff(&wf, &w.frame) < 1e-5);
    assert!(max_abs_diff(&wf, &[0.0, -0.5, -0.045]) < 1e-12);
}

#[test]
fn omega_trace_over_any_frame_agrees_with_coordinates() {
    let d = cat("twisted_r3");
    let x = [0.5, 0.5, 0.1];
    let geo = geometry_at(&d, &x).unwrap();
    let nk = nabla_k_at(&d, &x).unwrap();
    let coords = omega_from_nabla_k(&nk);
    let frame = adapted_frame_at(&d, &x).unwrap();
    for a in 0..3 {
        let e = frame.column(a);
        let t = omega_frame_trace(&geo.g, &nk, &frame.columns, &e);
        assert!((t - coords.dot(&e)).abs() < 1e-12);
    }
}

#[test]
fn rho_vanishes_on_flat_space() {
    let d = cat("euclidean_parallel");
    let x = [0.1, 0.2, 0.3];
    for v in [Variant::Original, Variant::Corrected] {
        assert!(rho_expanded_at(&d, &x, v).unwrap().iter().all(|r| *r == 0.0));
    }
    assert!(rho_original_at(&d, &x).unwrap().iter().all(|r| *r == 0.0));
    assert!(rho_corrected_at(&d, &x).unwrap().iter().all(|r| *r == 0.0));
}

#[test]
fn rho_variants_differ_by_twice_the_second_sum() {
    for name in NAMES {
        let d = cat(name);
        for x in d.random_points(5, 9) {
            let geo = geometry_at(&d, &x).unwrap();
            let ops = operators_of(&geo).unwrap();
            let frame = adapted_frame_at(&d, &x).unwrap();
            let o = rho_original_at(&d, &x).unwrap();
            let c = rho_corrected_at(&d, &x).unwrap();
            for a in 0..d.dim() {
                let s = second_sum(&geo, &ops, &frame.columns, &frame.column(a));
                assert!((c[a] - o[a] + 2.0 * s).abs() < 1e-10, "{name}");
            }
        }
    }
}

#[test]
fn rho_on_v_reduces_to_the_curvature_probe() {
    for name in NAMES {
        let d = cat(name);
        let x = d.random_points(1, 12).pop().unwrap();
        let geo = geometry_at(&d, &x).unwrap();
        let ops = operators_of(&geo).unwrap();
        let frame = adapted_frame_at(&d, &x).unwrap();
        let v = geo.field.clone();
        let probe: f64 = (0..d.dim())
            .map(|j| {
                let e = frame.column(j);
                geo.curvature(&v, &(&ops.l_inv * &e), &v, &e)
            })
            .sum();
        let o = rho_original_at(&d, &x).unwrap();
        let c = rho_corrected_at(&d, &x).unwrap();
        let last = d.dim() - 1;
        assert!((o[last] - probe).abs() < 1e-12, "{name}");
        assert!((c[last] + probe).abs() < 1e-12, "{name}");
    }
}

#[test]
fn rho_expansions_match_direct_contraction() {
    for name in NAMES {
        let d = cat(name);
        for x in d.random_points(50, 13) {
            for v in [Variant::Original, Variant::Corrected] {
                let e = rho_expanded_at(&d, &x, v).unwrap();
                let r = match v {
                    Variant::Original => rho_original_at(&d, &x).unwrap(),
                    Variant::Corrected => rho_corrected_at(&d, &x).unwrap(),
                };
                assert!(max_abs_diff(&e, &r) < 1e-9, "{name} {}", v.name());
            }
        }
    }
}

#[test]
fn gradient_term_vanishes_for_constant_rates() {
    for name in ["euclidean_parallel", "hopf_s3", "heisenberg", "product_s3_r2"] {
        let d = cat(name);
        for x in d.random_points(5, 14) {
            let gt = grad_term_at(&d, &x).unwrap();
            assert!(gt.formula.iter().all(|v| v.abs() < 1e-12), "{name} {:?}", gt.formula);
            for alpha in 2 * adapted_frame_at(&d, &x).unwrap().m()..d.dim() {
                assert_eq!(gt.formula[alpha], 0.0);
            }
            assert!(gt.direct.iter().all(|v| v.abs() < 1e-9), "{name} {:?}", gt.direct);
        }
    }
}

#[test]
fn gradient_term_paths_agree_on_the_twisted_benchmark() {
    let d = cat("twisted_r3");
    for x in d.random_points(20, 15) {
        let gt = grad_term_at(&d, &x).unwrap();
        assert!(max_abs_diff(&gt.direct, &gt.formula) < 1e-5);
        assert_eq!(gt.formula[2], 0.0);
        assert!(gt.direct[2].abs() < 1e-12);
    }
    // λ = x/2: the E1* term is λ^2 / (1 + λ^2) and the E1 term vanishes
    let gt = grad_term_at(&d, &[0.6, 0.3, 0.0]).unwrap();
    assert!(gt.formula[0].abs() < 1e-15);
    assert!((gt.formula[1] - 0.09 / 1.09).abs() < 1e-12);
}

#[test]
fn lemma12_holds() {
    for name in NAMES {
        let d = cat(name);
        for x in d.random_points(20, 16) {
            assert!(lemma12_residual(&d, &x).unwrap() < 1e-9, "{name}");
        }
    }
    let d = cat("twisted_r3").without_frame();
    for x in d.random_points(10, 17) {
        assert!(lemma12_residual(&d, &x).unwrap() < 1e-5);
    }
}

#[test]
fn theorem_comparison_on_the_benchmarks() {
    let hopf = cat("hopf_s3");
    let report = compare_theorems(&hopf, &hopf.grid_points());
    assert_eq!(report.verdict, Verdict::Minimal);
    assert!(report.max_residual_corrected < 1e-6);
    assert_eq!(report.failed_points, 0);

    let flat = cat("euclidean_parallel");
    let report = compare_theorems(&flat, &flat.grid_points());
    assert_eq!(report.verdict, Verdict::Minimal);
    assert_eq!(report.max_residual_corrected, 0.0);
    assert_eq!(report.max_residual_original, 0.0);

    let tw = cat("twisted_r3");
    let report = compare_theorems(&tw, &tw.random_points(50, 18));
    assert_eq!(report.verdict, Verdict::NotMinimal);
    assert!(report.max_residual_corrected < 1e-5);
    assert!(report.successes().any(|r| r.max_residual_original() > 1e-3));
    for (i, row) in report.rows.iter().enumerate() {
        assert_eq!(row.index, i);
    }
}

#[test]
fn constructed_frames_give_the_same_residuals() {
    for name in ["twisted_r3", "product_s3_r2", "hopf_s3"] {
        let d = cat(name).without_frame();
        for x in d.random_points(5, 19) {
            let r = identity_residuals_at(&d, &x).unwrap();
            assert!(r.max_residual_corrected() < 1e-5, "{name}");
            assert!(max_abs_diff(&r.omega_frame, &r.omega_direct) < 1e-5, "{name}");
            assert!(max_abs_diff(&r.grad_term, &r.grad_term_formula) < 1e-5, "{name}");
        }
    }
}

#[test]
fn failed_points_are_flagged_without_aborting() {
    let d = cat("hopf_s3");
    let points = vec![vec![0.7, 0.0, 0.0], vec![5.0, 0.0, 0.0], vec![0.3, 0.0, 0.0]];
    let report = compare_theorems(&d, &points);
    assert_eq!(report.failed_points, 2);
    assert!(report.rows[0].outcome.is_ok());
    assert!(matches!(
        report.rows[1].outcome,
        Err(crate::Error::OutsideDomain { .. })
    ));
    assert!(matches!(
        report.rows[2].outcome,
        Err(crate::Error::StencilOutsideDomain { axis: 0, .. })
    ));
    assert_eq!(report.verdict, Verdict::Inconclusive);
}

#[test]
fn zero_twist_degenerates_to_flat_space() {
    let d = builtin("twisted_r3", &[("a".into(), 0.0)]).unwrap();
    for x in d.random_points(5, 20) {
        let r = identity_residuals_at(&d, &x).unwrap();
        assert_eq!(r.f, 1.0);
        assert!(r.lambdas.is_empty());
        assert!(r.omega_direct.iter().all(|v| *v == 0.0));
    }
}

#[test]
fn negative_twist_uses_the_swapped_frame() {
    let d = builtin("twisted_r3", &[("a".into(), -2.0)]).unwrap();
    let x = [0.5, 0.5, 0.0];
    let r = identity_residuals_at(&d, &x).unwrap();
    assert!((r.lambdas[0] - 0.5).abs() < 1e-12);
    assert!(r.max_residual_corrected() < 1e-5);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn frame_rotations_leave_traces_unchanged(
        which in 0usize..3,
        seed in 0u64..1000,
        theta in -3.0f64..3.0,
        phi in -3.0f64..3.0,
    ) {
        let name = ["twisted_r3", "hopf_s3", "product_s3_r2"][which];
        let d = cat(name);
        let x = d.random_points(1, seed).pop().unwrap();
        let geo = geometry_at(&d, &x).unwrap();
        let ops = operators_of(&geo).unwrap();
        let jet = frame_jet_at(&d, &x).unwrap();
        let k = d.dim() - 1 - 2 * jet.frame.m();
        let q = if k == 2 {
            DMatrix::from_row_slice(2, 2, &[phi.cos(), -phi.sin(), phi.sin(), phi.cos()])
        } else {
            DMatrix::identity(k, k)
        };
        let turned = jet.rotated(&[theta], &q);
        let nk = nabla_k_at(&d, &x).unwrap();
        for a in 0..d.dim() {
            let xa = jet.frame.column(a);
            let w0 = omega_frame_trace(&geo.g, &nk, &jet.frame.columns, &xa);
            let w1 = omega_frame_trace(&geo.g, &nk, &turned.frame.columns, &xa);
            prop_assert!((w0 - w1).abs() < 1e-7);
            for v in [Variant::Original, Variant::Corrected] {
                let r0 = rho_with_frame(&geo, &ops, &jet.frame.columns, &xa, v);
                let r1 = rho_with_frame(&geo, &ops, &turned.frame.columns, &xa, v);
                prop_assert!((r0 - r1).abs() < 1e-7);
            }
        }
        // the frame formulas on the rotated frame still reproduce ω
        let coeffs = crate::frame::coefficients_from(&geo, &turned);
        let wf = omega_frame_from(&coeffs, ops.f);
        let coords = omega_from_nabla_k(&nk);
        for (a, w) in wf.iter().enumerate() {
            prop_assert!((w - coords.dot(&turned.frame.column(a))).abs() < 1e-5);
        }
    }
}
