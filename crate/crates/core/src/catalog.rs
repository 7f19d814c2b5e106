//! Built-in benchmark manifolds carrying unit Killing fields.

use crate::error::{Error, Result};
use crate::geometry::{Domain, ManifoldDefinition};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParameterSpec {
    pub name: &'static str,
    pub default: f64,
    pub min: f64,
    pub max: f64,
}

/// Known facts about an entry at default parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct Expected {
    /// Constant rotation rates, when they are constant.
    pub lambdas: Option<Vec<f64>>,
    pub f: Option<f64>,
    pub minimal: Option<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub summary: &'static str,
    pub parameters: &'static [ParameterSpec],
    pub expected: Expected,
}

const TWIST: [ParameterSpec; 1] = [ParameterSpec {
    name: "a",
    default: 1.0,
    min: -5.0,
    max: 5.0,
}];

pub const NAMES: [&str; 5] = [
    "euclidean_parallel",
    "hopf_s3",
    "heisenberg",
    "twisted_r3",
    "product_s3_r2",
];

pub fn entries() -> Vec<CatalogEntry> {
    NAMES.iter().map(|n| entry(n).unwrap()).collect()
}

pub fn entry(name: &str) -> Result<CatalogEntry> {
    let (summary, parameters, expected): (&str, &'static [ParameterSpec], Expected) = match name {
        "euclidean_parallel" => (
            "flat R^3 with the parallel field d/dz",
            &[],
            Expected {
                lambdas: Some(vec![]),
                f: Some(1.0),
                minimal: Some(true),
            },
        ),
        "hopf_s3" => (
            "round unit S^3 with the Hopf field",
            &[],
            Expected {
                lambdas: Some(vec![1.0]),
                f: Some(2.0),
                minimal: Some(true),
            },
        ),
        "heisenberg" => (
            "Heisenberg group with a left-invariant metric and its central field",
            &[],
            Expected {
                lambdas: Some(vec![0.5]),
                f: Some(1.25),
                minimal: Some(true),
            },
        ),
        "twisted_r3" => (
            "R^3 with metric dx^2 + dy^2 + (dz + a x y dx)^2 and V = d/dz",
            &TWIST,
            Expected {
                lambdas: None,
                f: None,
                minimal: None,
            },
        ),
        "product_s3_r2" => (
            "S^3 x R^2 with the Hopf field on the first factor",
            &[],
            Expected {
                lambdas: Some(vec![1.0]),
                f: Some(2.0),
                minimal: None,
            },
        ),
        _ => return Err(Error::UnknownEntry(name.to_string())),
    };
    Ok(CatalogEntry {
        name: NAMES.iter().find(|n| **n == name).copied().unwrap_or_default(),
        summary,
        parameters,
        expected,
    })
}

fn resolve(entry: &CatalogEntry, overrides: &[(String, f64)]) -> Result<Vec<f64>> {
    let mut values: Vec<f64> = entry.parameters.iter().map(|p| p.default).collect();
    for (key, value) in overrides {
        let idx = entry
            .parameters
            .iter()
            .position(|p| p.name == key)
            .ok_or_else(|| {
                Error::Parameter(format!("{} has no parameter \"{key}\"", entry.name))
            })?;
        let spec = entry.parameters[idx];
        if !value.is_finite() || *value < spec.min || *value > spec.max {
            return Err(Error::Parameter(format!(
                "{}: {key} = {value} outside [{}, {}]",
                entry.name, spec.min, spec.max
            )));
        }
        values[idx] = *value;
    }
    Ok(values)
}

fn strings(rows: &[&[&str]]) -> Vec<Vec<String>> {
    rows.iter()
        .map(|r| r.iter().map(|s| s.to_string()).collect())
        .collect()
}

fn list(items: &[&str]) -> Vec<String> {
    items.iter().map(|s| s.to_string()).collect()
}

fn boxed(lower: &[f64], upper: &[f64]) -> Domain {
    Domain::new(lower.to_vec(), upper.to_vec()).expect("static domain")
}

/// Returns the named benchmark with `overrides` applied to its parameters.
pub fn builtin(name: &str, overrides: &[(String, f64)]) -> Result<ManifoldDefinition> {
    let entry = entry(name)?;
    let params = resolve(&entry, overrides)?;
    match name {
        "euclidean_parallel" => ManifoldDefinition::from_sources(
            name,
            &["x", "y", "z"],
            &strings(&[&["1", "0", "0"], &["0", "1", "0"], &["0", "0", "1"]]),
            &list(&["0", "0", "1"]),
            Some(&strings(&[&["1", "0", "0"], &["0", "1", "0"], &["0", "0", "1"]])),
            boxed(&[-1.0; 3], &[1.0; 3]),
            vec![5; 3],
        ),
        "hopf_s3" => {
            // S^3 ∋ (cos η e^{iξ1}, sin η e^{iξ2})
            let [e1, e1s] = hopf_plane();
            ManifoldDefinition::from_sources(
                name,
                &["eta", "xi1", "xi2"],
                &strings(&[
                    &["1", "0", "0"],
                    &["0", "cos(eta)^2", "0"],
                    &["0", "0", "sin(eta)^2"],
                ]),
                &list(&["0", "1", "1"]),
                Some(&[e1, e1s, list(&["0", "1", "1"])]),
                boxed(&[0.3, -1.0, -1.0], &[1.2, 1.0, 1.0]),
                vec![5; 3],
            )
        }
        "heisenberg" => ManifoldDefinition::from_sources(
            name,
            &["x", "y", "z"],
            &strings(&[
                &["1 + y^2/4", "-x*y/4", "y/2"],
                &["", "1 + x^2/4", "-x/2"],
                &["", "", "1"],
            ]),
            &list(&["0", "0", "1"]),
            Some(&strings(&[&["1", "0", "-y/2"], &["0", "1", "x/2"], &["0", "0", "1"]])),
            boxed(&[-1.0; 3], &[1.0; 3]),
            vec![5; 3],
        ),
        "twisted_r3" => {
            let a = params[0];
            let pot = format!("({a})*x*y");
            let e1 = vec!["1".to_string(), "0".to_string(), format!("-{pot}")];
            let e2 = list(&["0", "1", "0"]);
            let frame = if a < 0.0 { vec![e2, e1] } else { vec![e1, e2] };
            ManifoldDefinition::from_sources(
                name,
                &["x", "y", "z"],
                &[
                    vec![format!("1 + ({pot})^2"), "0".into(), pot.clone()],
                    list(&["", "1", "0"]),
                    list(&["", "", "1"]),
                ],
                &list(&["0", "0", "1"]),
                Some(&[frame[0].clone(), frame[1].clone(), list(&["0", "0", "1"])]),
                boxed(&[0.2, 0.0, -0.5], &[1.2, 1.0, 0.5]),
                vec![5; 3],
            )
        }
        "product_s3_r2" => {
            let [e1, e1s] = hopf_plane();
            let pad = |mut c: Vec<String>| {
                c.extend(["0".to_string(), "0".to_string()]);
                c
            };
            let one = |k: usize| -> Vec<String> {
                (0..5).map(|i| if i == k { "1" } else { "0" }.to_string()).collect()
            };
            let mut metric = vec![vec![String::from("0"); 5]; 5];
            for (i, d) in ["1", "cos(eta)^2", "sin(eta)^2", "1", "1"].iter().enumerate() {
                metric[i][i] = d.to_string();
            }
            ManifoldDefinition::from_sources(
                name,
                &["eta", "xi1", "xi2", "u", "v"],
                &metric,
                &list(&["0", "1", "1", "0", "0"]),
                Some(&[pad(e1), pad(e1s), one(3), one(4), list(&["0", "1", "1", "0", "0"])]),
                boxed(&[0.3, -1.0, -1.0, -1.0, -1.0], &[1.2, 1.0, 1.0, 1.0, 1.0]),
                vec![5; 5],
            )
        }
        _ => unreachable!("entry() accepted {name}"),
    }
}

/// `(E_1, E_1*)` of the Hopf field in the `(η, ξ1, ξ2)` chart.
fn hopf_plane() -> [Vec<String>; 2] {
    let s = "(xi1 + xi2)";
    [
        vec![
            format!("sin{s}"),
            format!("-cos{s}*sin(eta)/cos(eta)"),
            format!("cos{s}*cos(eta)/sin(eta)"),
        ],
        vec![
            format!("cos{s}"),
            format!("sin{s}*sin(eta)/cos(eta)"),
            format!("-sin{s}*cos(eta)/sin(eta)"),
        ],
    ]
}
