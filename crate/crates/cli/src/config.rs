use crate::error::CliError;
use clap::{Parser, ValueEnum};
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    CheckKilling,
    Frame,
    Lemma12,
    Minimality,
    CompareTheorems,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::CheckKilling => "check-killing",
            Command::Frame => "frame",
            Command::Lemma12 => "lemma12",
            Command::Minimality => "minimality",
            Command::CompareTheorems => "compare-theorems",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

/// Comma-separated coordinates, e.g. `0.3,0.4,0`.
#[derive(Debug, Clone, PartialEq)]
pub struct PointArg(pub Vec<f64>);

impl FromStr for PointArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.split(',')
            .map(|c| {
                c.trim()
                    .parse::<f64>()
                    .map_err(|_| format!("bad coordinate \"{c}\" in point \"{s}\""))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(PointArg)
    }
}

/// `key=value` tolerance override.
#[derive(Debug, Clone, PartialEq)]
pub struct TolArg {
    pub key: String,
    pub value: f64,
}

impl FromStr for TolArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (k, v) = s
            .split_once('=')
            .ok_or_else(|| format!("expected key=value, got \"{s}\""))?;
        let value = v
            .trim()
            .parse::<f64>()
            .map_err(|_| format!("bad tolerance value \"{v}\""))?;
        Ok(TolArg {
            key: k.trim().to_string(),
            value,
        })
    }
}

/// Verify the minimality identities for a unit Killing field.
#[derive(Debug, Parser)]
#[command(name = "verify", version, about)]
pub struct Args {
    /// Catalog entry (`name` or `name:key=value,...`) or path to a JSON
    /// definition file.
    pub source: String,
    /// Command to run; repeat for several. Defaults to compare-theorems.
    #[arg(long = "cmd", value_enum)]
    pub commands: Vec<Command>,
    /// Sample the definition's grid.
    #[arg(long)]
    pub grid: bool,
    /// Sample N seeded random interior points.
    #[arg(long, value_name = "N")]
    pub random: Option<usize>,
    /// Sample an explicit point; repeat for several.
    #[arg(long = "point", value_name = "X,Y,...", allow_hyphen_values = true)]
    pub points: Vec<PointArg>,
    /// Override a tolerance, e.g. `identity=1e-6`; repeat for several.
    #[arg(long = "tol", value_name = "KEY=VAL")]
    pub tolerances: Vec<TolArg>,
    /// Report path. With several commands the command name is inserted
    /// before the extension. Reports go to stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Seed for random sampling; recorded in every report.
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    Catalog {
        name: String,
        params: Vec<(String, f64)>,
    },
    File(PathBuf),
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Source::Catalog { name, params } => {
                write!(f, "{name}")?;
                for (i, (k, v)) in params.iter().enumerate() {
                    write!(f, "{}{k}={v}", if i == 0 { ':' } else { ',' })?;
                }
                Ok(())
            }
            Source::File(p) => write!(f, "{}", p.display()),
        }
    }
}

impl Source {
    /// Catalog names win over file paths; anything else must be a file.
    pub fn parse(text: &str) -> Result<Source, CliError> {
        let (name, rest) = match text.split_once(':') {
            Some((n, r)) => (n, Some(r)),
            None => (text, None),
        };
        if minvf::catalog::NAMES.contains(&name) {
            let mut params = Vec::new();
            for item in rest.unwrap_or("").split(',').filter(|s| !s.trim().is_empty()) {
                let tol: TolArg = item.parse().map_err(CliError::Input)?;
                params.push((tol.key, tol.value));
            }
            return Ok(Source::Catalog {
                name: name.to_string(),
                params,
            });
        }
        let path = PathBuf::from(text);
        if path.is_file() {
            Ok(Source::File(path))
        } else {
            Err(CliError::Input(format!(
                "\"{text}\" is neither a catalog entry ({}) nor a readable file",
                minvf::catalog::NAMES.join(", ")
            )))
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleSpec {
    pub grid: bool,
    pub random: Option<usize>,
    pub points: Vec<Vec<f64>>,
}

/// Everything a run needs, validated.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub source: Source,
    pub commands: Vec<Command>,
    pub samples: SampleSpec,
    pub tolerances: Vec<(String, f64)>,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub seed: u64,
}

impl RunConfig {
    pub fn from_args(args: Args) -> Result<RunConfig, CliError> {
        let source = Source::parse(&args.source)?;
        let mut commands = Vec::new();
        for c in args.commands {
            if !commands.contains(&c) {
                commands.push(c);
            }
        }
        if commands.is_empty() {
            commands.push(Command::CompareTheorems);
        }
        let points: Vec<Vec<f64>> = args.points.into_iter().map(|p| p.0).collect();
        let grid = args.grid || (args.random.is_none() && points.is_empty());
        Ok(RunConfig {
            source,
            commands,
            samples: SampleSpec {
                grid,
                random: args.random,
                points,
            },
            tolerances: args.tolerances.into_iter().map(|t| (t.key, t.value)).collect(),
            out: args.out,
            format: args.format,
            seed: args.seed,
        })
    }

    /// Output path for one command's report.
    pub fn out_path(&self, command: Command) -> Option<PathBuf> {
        let out = self.out.as_ref()?;
        if self.commands.len() == 1 {
            return Some(out.clone());
        }
        let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        let name = match out.extension() {
            Some(ext) => format!("{stem}.{}.{}", command.name(), ext.to_string_lossy()),
            None => format!("{stem}.{}.{}", command.name(), self.format.extension()),
        };
        Some(out.with_file_name(name))
    }
}
