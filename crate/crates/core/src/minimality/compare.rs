use super::identities::{grad_f_at, grad_term_direct, grad_term_formula};
use super::omega::{nabla_k_at, omega_frame_from, omega_from_nabla_k};
use super::operators::operators_of;
use super::rho::{rho_on_frame, Variant};
use crate::error::{Error, Result};
use crate::frame::{coefficients_from, frame_jet_from};
use crate::geometry::{geometry_at, ManifoldDefinition};
use rayon::prelude::*;

/// Every term of both identities at one point, per adapted-frame
/// direction (the last direction is `V`).
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityResiduals {
    pub point: Vec<f64>,
    pub labels: Vec<String>,
    pub f: f64,
    pub lambdas: Vec<f64>,
    pub omega_direct: Vec<f64>,
    pub omega_frame: Vec<f64>,
    pub rho_original: Vec<f64>,
    pub rho_corrected: Vec<f64>,
    /// Directional-derivative path, used in the residuals.
    pub grad_term: Vec<f64>,
    pub grad_term_formula: Vec<f64>,
    /// `|ω_direct - f ρ̃_original|`.
    pub residual_original: Vec<f64>,
    /// `|ω_direct - (f ρ̃_corrected - grad_term)|`.
    pub residual_corrected: Vec<f64>,
}

impl IdentityResiduals {
    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    /// `f ρ̃_corrected - grad_term` on direction `a`.
    pub fn criterion(&self, a: usize) -> f64 {
        self.f * self.rho_corrected[a] - self.grad_term[a]
    }

    /// Largest `|f ρ̃_corrected - grad_term|` over directions orthogonal to `V`.
    pub fn max_criterion(&self) -> f64 {
        (0..self.dim() - 1)
            .map(|a| self.criterion(a).abs())
            .fold(0.0, f64::max)
    }

    /// Largest `|ω_V(E_a)|` over directions orthogonal to `V`.
    pub fn max_omega_perp(&self) -> f64 {
        self.omega_direct[..self.dim() - 1]
            .iter()
            .map(|v| v.abs())
            .fold(0.0, f64::max)
    }

    pub fn max_residual_original(&self) -> f64 {
        self.residual_original.iter().copied().fold(0.0, f64::max)
    }

    pub fn max_residual_corrected(&self) -> f64 {
        self.residual_corrected.iter().copied().fold(0.0, f64::max)
    }

    fn all_finite(&self) -> bool {
        [
            &self.omega_direct,
            &self.omega_frame,
            &self.rho_original,
            &self.rho_corrected,
            &self.grad_term,
            &self.grad_term_formula,
            &self.residual_original,
            &self.residual_corrected,
        ]
        .iter()
        .all(|v| v.iter().all(|x| x.is_finite()))
            && self.f.is_finite()
    }
}

pub fn identity_residuals_at(def: &ManifoldDefinition, x: &[f64]) -> Result<IdentityResiduals> {
    let geo = geometry_at(def, x)?;
    let ops = operators_of(&geo)?;
    let jet = frame_jet_from(def, &geo)?;
    let coeffs = coefficients_from(&geo, &jet);
    let frame = &coeffs.frame;
    let n = def.dim();

    let omega = omega_from_nabla_k(&nabla_k_at(def, x)?);
    let omega_direct: Vec<f64> = (0..n).map(|a| omega.dot(&frame.column(a))).collect();
    let omega_frame = omega_frame_from(&coeffs, ops.f);
    let rho_original = rho_on_frame(&geo, &ops, frame, Variant::Original);
    let rho_corrected = rho_on_frame(&geo, &ops, frame, Variant::Corrected);
    let grad_term = grad_term_direct(&ops.b, &grad_f_at(def, x)?, &frame.columns);
    let grad_term_formula = grad_term_formula(&coeffs, ops.f);
    let residual_original = (0..n)
        .map(|a| (omega_direct[a] - ops.f * rho_original[a]).abs())
        .collect();
    let residual_corrected = (0..n)
        .map(|a| (omega_direct[a] - (ops.f * rho_corrected[a] - grad_term[a])).abs())
        .collect();

    let out = IdentityResiduals {
        point: x.to_vec(),
        labels: (0..n).map(|a| frame.label(a)).collect(),
        f: ops.f,
        lambdas: frame.lambdas.clone(),
        omega_direct,
        omega_frame,
        rho_original,
        rho_corrected,
        grad_term,
        grad_term_formula,
        residual_original,
        residual_corrected,
    };
    if !out.all_finite() {
        return Err(Error::Internal(format!("non-finite residuals at {x:?}")));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// The criterion holds below tolerance at every sampled point.
    Minimal,
    NotMinimal,
    /// No violation seen, but some points could not be evaluated.
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Minimal => "minimal",
            Verdict::NotMinimal => "not minimal",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointRow {
    pub index: usize,
    pub point: Vec<f64>,
    pub outcome: Result<IdentityResiduals, Error>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MinimalityReport {
    pub rows: Vec<PointRow>,
    pub tol_min: f64,
    pub verdict: Verdict,
    pub max_residual_original: f64,
    pub max_residual_corrected: f64,
    pub max_criterion: f64,
    pub max_omega_perp: f64,
    pub failed_points: usize,
}

impl MinimalityReport {
    pub fn successes(&self) -> impl Iterator<Item = &IdentityResiduals> {
        self.rows.iter().filter_map(|r| r.outcome.as_ref().ok())
    }
}

/// Evaluates both identities at every sample point in parallel. Per-point
/// failures are recorded in their row and do not stop the batch.
pub fn compare_theorems(def: &ManifoldDefinition, points: &[Vec<f64>]) -> MinimalityReport {
    let mut rows: Vec<PointRow> = points
        .par_iter()
        .enumerate()
        .map(|(index, p)| PointRow {
            index,
            point: p.clone(),
            outcome: identity_residuals_at(def, p),
        })
        .collect();
    rows.sort_by_key(|r| r.index);

    let ok: Vec<&IdentityResiduals> = rows.iter().filter_map(|r| r.outcome.as_ref().ok()).collect();
    let max = |f: &dyn Fn(&IdentityResiduals) -> f64| ok.iter().map(|r| f(r)).fold(0.0, f64::max);
    let max_criterion = max(&|r| r.max_criterion());
    let failed_points = rows.len() - ok.len();
    let tol_min = def.tolerances.min;
    let verdict = if max_criterion >= tol_min {
        Verdict::NotMinimal
    } else if failed_points > 0 || ok.is_empty() {
        Verdict::Inconclusive
    } else {
        Verdict::Minimal
    };
    MinimalityReport {
        max_residual_original: max(&|r| r.max_residual_original()),
        max_residual_corrected: max(&|r| r.max_residual_corrected()),
        max_criterion,
        max_omega_perp: max(&|r| r.max_omega_perp()),
        failed_points,
        tol_min,
        verdict,
        rows,
    }
}
