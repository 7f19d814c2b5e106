//! Command-line driver: sampling, per-command reports and exit status.

pub mod commands;
pub mod config;
pub mod definition;
pub mod error;
pub mod output;

use clap::Parser;
use config::{Args, Format, RunConfig, Source};
use error::CliError;
use minvf::geometry::ManifoldDefinition;
use serde::Serialize;
use std::io::Write;
use std::path::Path;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Serialize)]
struct Samples {
    grid: usize,
    random: usize,
    explicit: usize,
    total: usize,
}

#[derive(Serialize)]
struct Report<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'static str,
    source: String,
    manifold: &'a str,
    coords: &'a [String],
    seed: u64,
    samples: &'a Samples,
    tolerances: serde_json::Map<String, serde_json::Value>,
    passed: bool,
    summary: serde_json::Value,
    points: serde_json::Value,
}

pub fn load_source(source: &Source) -> Result<ManifoldDefinition, CliError> {
    Ok(match source {
        Source::Catalog { name, params } => minvf::catalog::builtin(name, params)?,
        Source::File(path) => definition::load_definition(path)?,
    })
}

fn sample(def: &ManifoldDefinition, cfg: &RunConfig) -> Result<(Vec<Vec<f64>>, Samples), CliError> {
    let n = def.dim();
    for p in &cfg.samples.points {
        if p.len() != n {
            return Err(CliError::Input(format!(
                "point {p:?} has {} coordinates, {} expects {n}",
                p.len(),
                def.name
            )));
        }
        if !def.is_interior(p) {
            return Err(CliError::Input(format!(
                "point {p:?} is outside the domain or too close to its boundary for the difference stencil"
            )));
        }
    }
    let grid = if cfg.samples.grid { def.grid_points() } else { Vec::new() };
    let random = cfg
        .samples
        .random
        .map(|k| def.random_points(k, cfg.seed))
        .unwrap_or_default();
    let samples = Samples {
        grid: grid.len(),
        random: random.len(),
        explicit: cfg.samples.points.len(),
        total: grid.len() + random.len() + cfg.samples.points.len(),
    };
    let mut points = grid;
    points.extend(random);
    points.extend(cfg.samples.points.iter().cloned());
    if points.is_empty() {
        return Err(CliError::Input("no sample points".into()));
    }
    Ok((points, samples))
}

fn write_report(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|source| CliError::Write {
            path: p.to_path_buf(),
            source,
        }),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Write {
                path: "<stdout>".into(),
                source,
            }),
    }
}

/// Runs every command; `Ok(true)` when all checks pass.
pub fn run(cfg: &RunConfig) -> Result<bool, CliError> {
    let mut def = load_source(&cfg.source)?;
    for (k, v) in &cfg.tolerances {
        def.tolerances.set(k, *v)?;
    }
    let (points, samples) = sample(&def, cfg)?;
    let tolerances = def
        .tolerances
        .entries()
        .into_iter()
        .map(|(k, v)| (k.to_string(), serde_json::json!(v)))
        .collect();
    let mut all = true;
    for &cmd in &cfg.commands {
        let out = commands::execute(cmd, &def, &points);
        let text = match cfg.format {
            Format::Json => {
                let report = Report {
                    tool: "verify",
                    version: env!("CARGO_PKG_VERSION"),
                    command: cmd.name(),
                    source: cfg.source.to_string(),
                    manifold: &def.name,
                    coords: &def.coords,
                    seed: cfg.seed,
                    samples: &samples,
                    tolerances: serde_json::Map::clone(&tolerances),
                    passed: out.passed,
                    summary: out.summary,
                    points: out.points,
                };
                output::to_json(&report).map_err(|e| CliError::Input(e.to_string()))?
            }
            Format::Csv => output::to_csv(&out.csv_header, &out.csv_rows)?,
        };
        write_report(cfg.out_path(cmd).as_deref(), &text)?;
        eprintln!(
            "{}: {} [{} points] {}",
            cmd.name(),
            if out.passed { "PASS" } else { "FAIL" },
            points.len(),
            out.line
        );
        all &= out.passed;
    }
    Ok(all)
}

/// Parses `args` (including the program name) and returns the exit status.
pub fn main_entry<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_PASS };
            let _ = e.print();
            return code;
        }
    };
    let result = RunConfig::from_args(args).and_then(|cfg| run(&cfg));
    match result {
        Ok(true) => EXIT_PASS,
        Ok(false) => EXIT_FAIL,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INPUT
        }
    }
}
