use crate::config::Command;
use crate::output::sci;
use minvf::frame::frame_coeffs_at;
use minvf::geometry::{
    curvature_symmetry_defect, geometry_at, killing_defect_of, metric_compatibility_defect,
    unit_defect_of, ManifoldDefinition,
};
use minvf::minimality::{compare_theorems, lemma12_residual, IdentityResiduals, MinimalityReport};
use serde::Serialize;

/// `G_ij^k = -G_ik^j` must hold to this level on every frame.
pub const G_ANTISYMMETRY_TOL: f64 = 1e-7;

/// One command's results, ready to serialize.
pub struct CommandOutput {
    pub passed: bool,
    pub summary: serde_json::Value,
    pub points: serde_json::Value,
    pub csv_header: Vec<String>,
    pub csv_rows: Vec<Vec<String>>,
    pub line: String,
}

#[derive(Serialize)]
struct ErrRow<'a> {
    index: usize,
    point: &'a [f64],
    error: String,
}

#[derive(Serialize)]
#[serde(untagged)]
enum Row<'a, T> {
    Ok(T),
    Err(ErrRow<'a>),
}

fn coord_header(def: &ManifoldDefinition) -> Vec<String> {
    def.coords.clone()
}

fn coord_cells(p: &[f64]) -> Vec<String> {
    p.iter().map(|v| sci(*v)).collect()
}

fn max_of(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, f64::max)
}

fn value<T: Serialize>(v: T) -> serde_json::Value {
    serde_json::to_value(v).expect("report rows serialize")
}

pub fn execute(cmd: Command, def: &ManifoldDefinition, points: &[Vec<f64>]) -> CommandOutput {
    match cmd {
        Command::CheckKilling => check_killing(def, points),
        Command::Frame => frame(def, points),
        Command::Lemma12 => lemma12(def, points),
        Command::Minimality => minimality(def, points),
        Command::CompareTheorems => compare(def, points),
    }
}

#[derive(Serialize)]
struct KillingRow<'a> {
    index: usize,
    point: &'a [f64],
    killing_defect: f64,
    unit_defect: f64,
    curvature_symmetry_defect: f64,
    metric_compatibility_defect: f64,
    passed: bool,
}

fn check_killing(def: &ManifoldDefinition, points: &[Vec<f64>]) -> CommandOutput {
    let tol = def.tolerances;
    let mut rows = Vec::new();
    let mut csv_rows = Vec::new();
    let (mut worst_k, mut worst_u, mut failures) = (0.0f64, 0.0f64, 0usize);
    for (index, p) in points.iter().enumerate() {
        match geometry_at(def, p) {
            Ok(geo) => {
                let k = killing_defect_of(&geo);
                let u = unit_defect_of(&geo);
                let passed = k <= tol.killing && u <= tol.unit;
                worst_k = worst_k.max(k);
                worst_u = worst_u.max(u);
                failures += usize::from(!passed);
                let row = KillingRow {
                    index,
                    point: p,
                    killing_defect: k,
                    unit_defect: u,
                    curvature_symmetry_defect: curvature_symmetry_defect(&geo),
                    metric_compatibility_defect: metric_compatibility_defect(&geo),
                    passed,
                };
                let mut cells = coord_cells(p);
                cells.extend([
                    sci(row.killing_defect),
                    sci(row.unit_defect),
                    sci(row.curvature_symmetry_defect),
                    sci(row.metric_compatibility_defect),
                    passed.to_string(),
                ]);
                csv_rows.push(cells);
                rows.push(Row::Ok(row));
            }
            Err(e) => {
                failures += 1;
                rows.push(Row::Err(ErrRow {
                    index,
                    point: p,
                    error: e.to_string(),
                }));
            }
        }
    }
    let mut header = coord_header(def);
    header.extend(
        [
            "killing_defect",
            "unit_defect",
            "curvature_symmetry_defect",
            "metric_compatibility_defect",
            "passed",
        ]
        .map(String::from),
    );
    CommandOutput {
        passed: failures == 0,
        summary: serde_json::json!({
            "max_killing_defect": worst_k,
            "max_unit_defect": worst_u,
            "failed_points": failures,
        }),
        points: value(rows),
        csv_header: header,
        csv_rows,
        line: format!(
            "max killing defect {worst_k:.3e}, max unit defect {worst_u:.3e}, {failures} failing point(s)"
        ),
    }
}

#[derive(Serialize)]
struct FrameRow<'a> {
    index: usize,
    point: &'a [f64],
    m: usize,
    lambdas: Vec<f64>,
    labels: Vec<String>,
    kernel: Vec<String>,
    analytic: bool,
    /// Columns `E_a` in coordinates.
    columns: Vec<Vec<f64>>,
    gram_defect: f64,
    antisymmetry_defect: f64,
    v_column_defect: f64,
    passed: bool,
}

fn frame(def: &ManifoldDefinition, points: &[Vec<f64>]) -> CommandOutput {
    let mut rows = Vec::new();
    let mut csv_rows = Vec::new();
    let (mut failures, mut worst_anti) = (0usize, 0.0f64);
    for (index, p) in points.iter().enumerate() {
        let result = geometry_at(def, p)
            .and_then(|geo| Ok((frame_coeffs_at(def, p)?, geo)));
        match result {
            Ok((c, geo)) => {
                let f = &c.frame;
                let anti = c.antisymmetry_defect();
                let vcol = c.v_column_defect();
                let passed = anti <= G_ANTISYMMETRY_TOL && vcol <= G_ANTISYMMETRY_TOL;
                worst_anti = worst_anti.max(anti);
                failures += usize::from(!passed);
                let row = FrameRow {
                    index,
                    point: p,
                    m: f.m(),
                    lambdas: f.lambdas.clone(),
                    labels: (0..f.dim()).map(|a| f.label(a)).collect(),
                    kernel: f.kernel_indices().map(|a| f.label(a)).collect(),
                    analytic: def.frame.is_some(),
                    columns: f.column_vecs(),
                    gram_defect: f.gram_defect(&geo.g),
                    antisymmetry_defect: anti,
                    v_column_defect: vcol,
                    passed,
                };
                let mut cells = coord_cells(p);
                cells.extend([
                    row.m.to_string(),
                    row.lambdas.iter().map(|l| sci(*l)).collect::<Vec<_>>().join(" "),
                    sci(row.gram_defect),
                    sci(anti),
                    sci(vcol),
                    passed.to_string(),
                ]);
                csv_rows.push(cells);
                rows.push(Row::Ok(row));
            }
            Err(e) => {
                failures += 1;
                rows.push(Row::Err(ErrRow {
                    index,
                    point: p,
                    error: e.to_string(),
                }));
            }
        }
    }
    let mut header = coord_header(def);
    header.extend(
        [
            "m",
            "lambdas",
            "gram_defect",
            "antisymmetry_defect",
            "v_column_defect",
            "passed",
        ]
        .map(String::from),
    );
    CommandOutput {
        passed: failures == 0,
        summary: serde_json::json!({
            "analytic_frame": def.frame.is_some(),
            "max_antisymmetry_defect": worst_anti,
            "failed_points": failures,
        }),
        points: value(rows),
        csv_header: header,
        csv_rows,
        line: format!("max |G_ij^k + G_ik^j| {worst_anti:.3e}, {failures} failing point(s)"),
    }
}

#[derive(Serialize)]
struct Lemma12Row<'a> {
    index: usize,
    point: &'a [f64],
    residual: f64,
    passed: bool,
}

fn lemma12(def: &ManifoldDefinition, points: &[Vec<f64>]) -> CommandOutput {
    let tol = def.tolerances.lemma12;
    let mut rows = Vec::new();
    let mut csv_rows = Vec::new();
    let (mut failures, mut worst) = (0usize, 0.0f64);
    for (index, p) in points.iter().enumerate() {
        match lemma12_residual(def, p) {
            Ok(r) => {
                let passed = r < tol;
                worst = worst.max(r);
                failures += usize::from(!passed);
                let mut cells = coord_cells(p);
                cells.extend([sci(r), passed.to_string()]);
                csv_rows.push(cells);
                rows.push(Row::Ok(Lemma12Row {
                    index,
                    point: p,
                    residual: r,
                    passed,
                }));
            }
            Err(e) => {
                failures += 1;
                rows.push(Row::Err(ErrRow {
                    index,
                    point: p,
                    error: e.to_string(),
                }));
            }
        }
    }
    let mut header = coord_header(def);
    header.extend(["residual", "passed"].map(String::from));
    CommandOutput {
        passed: failures == 0,
        summary: serde_json::json!({
            "max_residual": worst,
            "tolerance": tol,
            "failed_points": failures,
        }),
        points: value(rows),
        csv_header: header,
        csv_rows,
        line: format!("max curvature-identity residual {worst:.3e}, {failures} failing point(s)"),
    }
}

const DIRECTION_COLUMNS: [&str; 10] = [
    "direction",
    "omega_direct",
    "omega_frame",
    "f",
    "rho_original",
    "rho_corrected",
    "grad_term",
    "residual_original",
    "residual_corrected",
    "grad_term_formula",
];

fn direction_rows(report: &MinimalityReport) -> (Vec<String>, Vec<Vec<String>>) {
    let mut rows = Vec::new();
    for r in report.successes() {
        for a in 0..r.dim() {
            let mut cells = coord_cells(&r.point);
            cells.push(r.labels[a].clone());
            cells.extend(
                [
                    r.omega_direct[a],
                    r.omega_frame[a],
                    r.f,
                    r.rho_original[a],
                    r.rho_corrected[a],
                    r.grad_term[a],
                    r.residual_original[a],
                    r.residual_corrected[a],
                    r.grad_term_formula[a],
                ]
                .map(sci),
            );
            rows.push(cells);
        }
    }
    (DIRECTION_COLUMNS.map(String::from).to_vec(), rows)
}

fn with_coords(def: &ManifoldDefinition, cols: Vec<String>) -> Vec<String> {
    let mut h = coord_header(def);
    h.extend(cols);
    h
}

fn error_rows(report: &MinimalityReport) -> Vec<(usize, &[f64], String)> {
    report
        .rows
        .iter()
        .filter_map(|r| {
            r.outcome
                .as_ref()
                .err()
                .map(|e| (r.index, r.point.as_slice(), e.to_string()))
        })
        .collect()
}

#[derive(Serialize)]
struct MinimalityRow<'a> {
    index: usize,
    point: &'a [f64],
    f: f64,
    lambdas: &'a [f64],
    labels: &'a [String],
    omega_direct: &'a [f64],
    omega_frame: &'a [f64],
    /// `f ρ̃_corrected - grad_term` per direction.
    criterion: Vec<f64>,
    max_omega_perp: f64,
    minimal: bool,
    passed: bool,
}

fn rows_of<'a, T>(
    report: &'a MinimalityReport,
    mut ok: impl FnMut(usize, &'a IdentityResiduals) -> T,
) -> Vec<Row<'a, T>> {
    report
        .rows
        .iter()
        .map(|r| match &r.outcome {
            Ok(res) => Row::Ok(ok(r.index, res)),
            Err(e) => Row::Err(ErrRow {
                index: r.index,
                point: &r.point,
                error: e.to_string(),
            }),
        })
        .collect()
}

fn frame_direct_gap(r: &IdentityResiduals) -> f64 {
    max_of((0..r.dim()).map(|a| (r.omega_frame[a] - r.omega_direct[a]).abs()))
}

fn minimality(def: &ManifoldDefinition, points: &[Vec<f64>]) -> CommandOutput {
    let tol = def.tolerances;
    let report = compare_theorems(def, points);
    let gap = max_of(report.successes().map(frame_direct_gap));
    let rows = rows_of(&report, |index, r| {
        let n = r.dim();
        MinimalityRow {
            index,
            point: &r.point,
            f: r.f,
            lambdas: &r.lambdas,
            labels: &r.labels,
            omega_direct: &r.omega_direct,
            omega_frame: &r.omega_frame,
            criterion: (0..n).map(|a| r.criterion(a)).collect(),
            max_omega_perp: r.max_omega_perp(),
            minimal: r.max_criterion() < tol.min,
            passed: frame_direct_gap(r) <= tol.identity,
        }
    });
    let (cols, csv_rows) = direction_rows(&report);
    let passed = report.failed_points == 0 && gap <= tol.identity;
    let errors = error_rows(&report).len();
    CommandOutput {
        passed,
        summary: serde_json::json!({
            "verdict": report.verdict.as_str(),
            "max_omega_perp": report.max_omega_perp,
            "max_criterion": report.max_criterion,
            "max_frame_direct_gap": gap,
            "tolerance": tol.min,
            "failed_points": errors,
        }),
        points: value(rows),
        csv_header: with_coords(def, cols),
        csv_rows,
        line: format!(
            "verdict {}, max |omega(E_a)| (a < n) {:.3e}, frame vs direct {:.3e}, {errors} failing point(s)",
            report.verdict.as_str(),
            report.max_omega_perp,
            gap
        ),
    }
}

#[derive(Serialize)]
struct Direction<'a> {
    label: &'a str,
    omega_direct: f64,
    omega_frame: f64,
    rho_original: f64,
    rho_corrected: f64,
    grad_term: f64,
    grad_term_formula: f64,
    residual_original: f64,
    residual_corrected: f64,
}

#[derive(Serialize)]
struct CompareRow<'a> {
    index: usize,
    point: &'a [f64],
    f: f64,
    lambdas: &'a [f64],
    residual_original: f64,
    residual_corrected: f64,
    verdict: &'static str,
    directions: Vec<Direction<'a>>,
}

fn compare(def: &ManifoldDefinition, points: &[Vec<f64>]) -> CommandOutput {
    let tol = def.tolerances;
    let report = compare_theorems(def, points);
    let rows = rows_of(&report, |index, r| CompareRow {
        index,
        point: &r.point,
        f: r.f,
        lambdas: &r.lambdas,
        residual_original: r.max_residual_original(),
        residual_corrected: r.max_residual_corrected(),
        verdict: if r.max_criterion() < tol.min {
            "minimal"
        } else {
            "not minimal"
        },
        directions: (0..r.dim())
            .map(|a| Direction {
                label: &r.labels[a],
                omega_direct: r.omega_direct[a],
                omega_frame: r.omega_frame[a],
                rho_original: r.rho_original[a],
                rho_corrected: r.rho_corrected[a],
                grad_term: r.grad_term[a],
                grad_term_formula: r.grad_term_formula[a],
                residual_original: r.residual_original[a],
                residual_corrected: r.residual_corrected[a],
            })
            .collect(),
    });
    let original_fails = report
        .successes()
        .filter(|r| r.max_residual_original() > tol.identity)
        .count();
    let passed = report.failed_points == 0 && report.max_residual_corrected < tol.identity;
    let (cols, csv_rows) = direction_rows(&report);
    CommandOutput {
        passed,
        summary: serde_json::json!({
            "verdict": report.verdict.as_str(),
            "max_residual_original": report.max_residual_original,
            "max_residual_corrected": report.max_residual_corrected,
            "points_violating_original": original_fails,
            "max_criterion": report.max_criterion,
            "max_omega_perp": report.max_omega_perp,
            "tolerance_identity": tol.identity,
            "tolerance_min": tol.min,
            "failed_points": report.failed_points,
        }),
        points: value(rows),
        csv_header: with_coords(def, cols),
        csv_rows,
        line: format!(
            "max residual corrected {:.3e}, max residual original {:.3e} ({original_fails} point(s) violate the original identity), verdict {}, {} failing point(s)",
            report.max_residual_corrected,
            report.max_residual_original,
            report.verdict.as_str(),
            report.failed_points
        ),
    }
}
