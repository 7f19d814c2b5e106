use crate::error::{Error, Result};

/// Numerical thresholds used across the engine. Each one has a stable key
/// so it can be overridden from the command line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// `|g(V,V) - 1|` allowed at sample points.
    pub unit: f64,
    /// Maximum Killing defect.
    pub killing: f64,
    /// Singular values of the covariant derivative of V below this are zero.
    pub rank: f64,
    /// Minimum gap between rotation rates for the automatic frame.
    pub sep: f64,
    /// Gram-matrix defect of a supplied frame.
    pub frame_gram: f64,
    /// Defect in the normal-form relations of a supplied frame.
    pub frame_relation: f64,
    /// Minimality verdict threshold.
    pub min: f64,
    /// Identity checks that involve finite differences.
    pub identity: f64,
    /// Curvature-lemma residual.
    pub lemma12: f64,
    /// Relative difference step, scaled by the domain width per axis.
    pub fd_step: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            unit: 1e-9,
            killing: 1e-9,
            rank: 1e-8,
            sep: 1e-6,
            frame_gram: 1e-9,
            frame_relation: 1e-8,
            min: 1e-6,
            identity: 1e-5,
            lemma12: 1e-5,
            fd_step: 1e-4,
        }
    }
}

impl Tolerances {
    pub const KEYS: [&'static str; 10] = [
        "unit",
        "killing",
        "rank",
        "sep",
        "frame_gram",
        "frame_relation",
        "min",
        "identity",
        "lemma12",
        "fd_step",
    ];

    fn slot(&mut self, key: &str) -> Option<&mut f64> {
        Some(match key {
            "unit" => &mut self.unit,
            "killing" => &mut self.killing,
            "rank" => &mut self.rank,
            "sep" => &mut self.sep,
            "frame_gram" => &mut self.frame_gram,
            "frame_relation" => &mut self.frame_relation,
            "min" => &mut self.min,
            "identity" => &mut self.identity,
            "lemma12" => &mut self.lemma12,
            "fd_step" => &mut self.fd_step,
            _ => return None,
        })
    }

    pub fn get(&self, key: &str) -> Option<f64> {
        let mut copy = *self;
        copy.slot(key).map(|v| *v)
    }

    pub fn set(&mut self, key: &str, value: f64) -> Result<()> {
        if !(value.is_finite() && value > 0.0) {
            return Err(Error::Parameter(format!(
                "tolerance {key} must be positive, got {value}"
            )));
        }
        match self.slot(key) {
            Some(slot) => {
                *slot = value;
                Ok(())
            }
            None => Err(Error::Parameter(format!(
                "unknown tolerance key \"{key}\" (known: {})",
                Self::KEYS.join(", ")
            ))),
        }
    }

    pub fn entries(&self) -> Vec<(&'static str, f64)> {
        Self::KEYS
            .iter()
            .map(|k| (*k, self.get(k).unwrap_or(f64::NAN)))
            .collect()
    }
}
