//! JSON manifold definition files.

use crate::error::CliError;
use minvf::exprlang::parse;
use minvf::geometry::{Domain, ManifoldDefinition};
use serde::Deserialize;
use std::collections::BTreeMap;
use std::path::Path;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DefinitionFile {
    #[serde(default)]
    pub name: Option<String>,
    pub dimension: usize,
    pub coords: Vec<String>,
    /// Keys `"i,j"` with 0-based indices or coordinate names.
    pub metric: BTreeMap<String, String>,
    #[serde(rename = "V")]
    pub field: Vec<String>,
    /// Columns of an analytic adapted frame; the last one is `V`.
    #[serde(default)]
    pub frame: Option<Vec<Vec<String>>>,
    pub domain: BTreeMap<String, [f64; 2]>,
    #[serde(default)]
    pub grid: BTreeMap<String, usize>,
}

const DEFAULT_GRID: usize = 5;

fn index_of(coords: &[String], token: &str) -> Option<usize> {
    let t = token.trim();
    coords
        .iter()
        .position(|c| c == t)
        .or_else(|| t.parse::<usize>().ok().filter(|i| *i < coords.len()))
}

fn bad(msg: String) -> CliError {
    CliError::Input(msg)
}

impl DefinitionFile {
    pub fn load(path: &Path) -> Result<DefinitionFile, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|source| CliError::Json {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn into_definition(self, fallback_name: &str) -> Result<ManifoldDefinition, CliError> {
        let n = self.dimension;
        if self.coords.len() != n {
            return Err(bad(format!(
                "dimension is {n} but {} coordinates are listed",
                self.coords.len()
            )));
        }
        let mut upper: BTreeMap<(usize, usize), (String, String)> = BTreeMap::new();
        let mut lower: Vec<((usize, usize), String, String)> = Vec::new();
        for (key, expr) in &self.metric {
            let (a, b) = key
                .split_once(',')
                .ok_or_else(|| bad(format!("metric key \"{key}\" is not of the form \"i,j\"")))?;
            let (i, j) = match (index_of(&self.coords, a), index_of(&self.coords, b)) {
                (Some(i), Some(j)) => (i, j),
                _ => return Err(bad(format!("metric key \"{key}\" names an unknown coordinate"))),
            };
            if i <= j {
                upper.insert((i, j), (key.clone(), expr.clone()));
            } else {
                lower.push(((j, i), key.clone(), expr.clone()));
            }
        }
        // a lone lower entry stands in for its mirror
        let mut mirrored = Vec::new();
        for (pos, key, expr) in lower {
            if upper.contains_key(&pos) {
                mirrored.push((pos, key, expr));
            } else {
                upper.insert(pos, (key, expr));
            }
        }
        let mut metric = vec![vec![String::from("0"); n]; n];
        for i in 0..n {
            if !upper.contains_key(&(i, i)) {
                return Err(bad(format!(
                    "metric entry \"{i},{i}\" ({}) is missing",
                    self.coords[i]
                )));
            }
        }
        for ((i, j), (_, expr)) in &upper {
            metric[*i][*j] = expr.clone();
        }

        let mut lo = Vec::with_capacity(n);
        let mut hi = Vec::with_capacity(n);
        let mut grid = Vec::with_capacity(n);
        for c in &self.coords {
            let [a, b] = self
                .domain
                .get(c)
                .ok_or_else(|| bad(format!("domain has no bounds for \"{c}\"")))?;
            lo.push(*a);
            hi.push(*b);
            grid.push(self.grid.get(c).copied().unwrap_or(DEFAULT_GRID));
        }
        for k in self.domain.keys().chain(self.grid.keys()) {
            if !self.coords.contains(k) {
                return Err(bad(format!("\"{k}\" in domain or grid is not a coordinate")));
            }
        }
        let domain = Domain::new(lo, hi)?;
        let coords: Vec<&str> = self.coords.iter().map(String::as_str).collect();
        let def = ManifoldDefinition::from_sources(
            self.name.as_deref().unwrap_or(fallback_name),
            &coords,
            &metric,
            &self.field,
            self.frame.as_deref(),
            domain,
            grid,
        )?;
        for ((i, j), key, expr) in mirrored {
            let e = parse(&expr, &self.coords).map_err(|source| minvf::Error::Parse {
                context: format!("metric[{key}]"),
                source,
            })?;
            def.check_metric_pair(j, i, &e)
                .map_err(|err| bad(format!("metric entry \"{key}\": {err}")))?;
        }
        Ok(def)
    }
}

pub fn load_definition(path: &Path) -> Result<ManifoldDefinition, CliError> {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "definition".into());
    DefinitionFile::load(path)?.into_definition(&stem)
}
