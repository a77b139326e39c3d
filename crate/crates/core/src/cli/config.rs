use std::path::{Path, PathBuf};

use clap::Parser;
use serde::Deserialize;

use super::CliError;
use crate::scaling::Reference;
use crate::ChainFamily;

/// Default directory for outputs when `--output` is not given.
pub const OUTPUT_DIR_ENV: &str = "QWALK_OUTPUT_DIR";

const DEFAULT_RANDOM_LOW: f64 = 0.05;
const DEFAULT_RANDOM_HIGH: f64 = 0.95;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Spectrum,
    CtqwAvg,
    DtqwAvg,
    Trace,
    Theorem1,
}

impl Command {
    pub fn parse(name: &str) -> Result<Self, CliError> {
        match name {
            "spectrum" => Ok(Command::Spectrum),
            "ctqw-avg" => Ok(Command::CtqwAvg),
            "dtqw-avg" => Ok(Command::DtqwAvg),
            "trace" => Ok(Command::Trace),
            "theorem1" => Ok(Command::Theorem1),
            other => Err(CliError::UnknownCommand(other.to_string())),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Command::Spectrum => "spectrum",
            Command::CtqwAvg => "ctqw-avg",
            Command::DtqwAvg => "dtqw-avg",
            Command::Trace => "trace",
            Command::Theorem1 => "theorem1",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    fn parse(s: &str) -> Result<Self, CliError> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(CliError::Config(format!(
                "unknown format `{other}` (csv or json)"
            ))),
        }
    }

    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// Command-line flags. Every option may also come from `--config`.
#[derive(Debug, Default, Clone, Parser)]
#[command(
    name = "qwalk",
    version,
    about = "Time-averaged quantum walks on birth-death chains"
)]
pub struct Args {
    /// spectrum | ctqw-avg | dtqw-avg | trace | theorem1
    pub command: Option<String>,

    /// Flat TOML file with the same keys as the long flags (dashes become underscores).
    #[arg(long)]
    pub config: Option<PathBuf>,

    /// homogeneous | ehrenfest | explicit | random
    #[arg(long)]
    pub family: Option<String>,

    /// Interior right-step probability of the homogeneous family.
    #[arg(long)]
    pub p: Option<f64>,

    /// Interior right-step probabilities pR[1..n] of an explicit chain.
    #[arg(long = "interior-pR", value_delimiter = ',', num_args = 1..)]
    pub interior_pr: Option<Vec<f64>>,

    /// Last vertex index of the path (single-size commands).
    #[arg(long)]
    pub n: Option<usize>,

    /// Comma-separated sizes for theorem1.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub sizes: Option<Vec<usize>>,

    /// Comma-separated finite horizons T.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub horizons: Option<Vec<f64>>,

    /// Number of steps recorded by `trace`.
    #[arg(long)]
    pub steps: Option<usize>,

    /// Output path prefix; the extension is added per file.
    #[arg(long)]
    pub output: Option<PathBuf>,

    /// csv | json
    #[arg(long)]
    pub format: Option<String>,

    /// Seed of the random family.
    #[arg(long)]
    pub seed: Option<u64>,

    /// Lower bound of the random family's interior probabilities.
    #[arg(long)]
    pub low: Option<f64>,

    /// Upper bound of the random family's interior probabilities.
    #[arg(long)]
    pub high: Option<f64>,

    /// Reference limit CDF for theorem1 (arcsine).
    #[arg(long)]
    pub reference: Option<String>,

    /// Also write the eigendecomposition as `<output>.spectrum.json`.
    #[arg(long)]
    pub dump_spectrum: bool,

    /// dtqw-avg: also write lifted eigenpairs as `<output>.eigenpairs.json` (n <= 64).
    #[arg(long)]
    pub dump_eigenpairs: bool,

    /// trace: lift the size cap.
    #[arg(long)]
    pub force: bool,
}

/// Contents of a `--config` file.
#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub command: Option<String>,
    pub family: Option<String>,
    pub p: Option<f64>,
    #[serde(rename = "interior_pR")]
    pub interior_pr: Option<Vec<f64>>,
    pub n: Option<usize>,
    pub sizes: Option<Vec<usize>>,
    pub horizons: Option<Vec<f64>>,
    pub steps: Option<usize>,
    pub output: Option<PathBuf>,
    pub format: Option<String>,
    pub seed: Option<u64>,
    pub low: Option<f64>,
    pub high: Option<f64>,
    pub reference: Option<String>,
    pub dump_spectrum: Option<bool>,
    pub dump_eigenpairs: Option<bool>,
    pub force: Option<bool>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub command: Command,
    pub family: ChainFamily,
    /// Sizes to run; exactly one for every command except theorem1.
    pub sizes: Vec<usize>,
    pub horizons: Vec<f64>,
    pub steps: Option<usize>,
    pub output: PathBuf,
    pub format: Format,
    pub reference: Option<Reference>,
    pub dump_spectrum: bool,
    pub dump_eigenpairs: bool,
    pub force: bool,
}

impl ExperimentConfig {
    /// The single size of a non-sweep command.
    pub fn n(&self) -> usize {
        self.sizes[0]
    }
}

/// Merges flags over the optional config file and validates the result.
pub fn resolve(args: Args) -> Result<ExperimentConfig, CliError> {
    let file = match &args.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    let env_dir = std::env::var_os(OUTPUT_DIR_ENV).map(PathBuf::from);
    merge(args, file, env_dir)
}

pub(crate) fn merge(
    args: Args,
    file: ConfigFile,
    env_dir: Option<PathBuf>,
) -> Result<ExperimentConfig, CliError> {
    let command_name = args
        .command
        .or(file.command)
        .ok_or_else(|| CliError::Usage("no command given".into()))?;
    let command = Command::parse(&command_name)?;

    let family_name = args.family.or(file.family);
    let p = args.p.or(file.p);
    let interior = args.interior_pr.or(file.interior_pr);
    let seed = args.seed.or(file.seed);
    let low = args.low.or(file.low);
    let high = args.high.or(file.high);
    let family = build_family(family_name.as_deref(), p, interior, seed, low, high)?;

    let n = args.n.or(file.n);
    let sizes_arg = args.sizes.or(file.sizes);
    let sizes = match command {
        Command::Theorem1 => match (sizes_arg, n, family.fixed_size()) {
            (Some(s), _, _) if !s.is_empty() => s,
            (Some(_), _, _) => return Err(CliError::Config("sizes must be nonempty".into())),
            (None, Some(n), _) => vec![n],
            (None, None, Some(n)) => vec![n],
            (None, None, None) => {
                return Err(CliError::Config("theorem1 needs --sizes".into()));
            }
        },
        _ => {
            let n = match (n, family.fixed_size()) {
                (Some(n), Some(fixed)) if n != fixed => {
                    return Err(CliError::MalformedChain(format!(
                        "n = {n} conflicts with {} interior probabilities",
                        fixed - 1
                    )));
                }
                (Some(n), _) => n,
                (None, Some(fixed)) => fixed,
                (None, None) => return Err(CliError::Config("--n is required".into())),
            };
            vec![n]
        }
    };
    if sizes.contains(&0) {
        return Err(CliError::MalformedChain("n must be at least 1".into()));
    }
    if let Some(fixed) = family.fixed_size() {
        if sizes.iter().any(|&s| s != fixed) {
            return Err(CliError::MalformedChain(format!(
                "an explicit chain only exists at n = {fixed}"
            )));
        }
    }

    let horizons = args.horizons.or(file.horizons).unwrap_or_default();
    if let Some(h) = horizons.iter().find(|h| !(**h > 0.0 && h.is_finite())) {
        return Err(CliError::Config(format!(
            "horizons must be positive, got {h}"
        )));
    }
    let steps = args.steps.or(file.steps);
    if steps == Some(0) {
        return Err(CliError::Config("steps must be positive".into()));
    }

    let format = Format::parse(args.format.or(file.format).as_deref().unwrap_or("csv"))?;
    let output = args.output.or(file.output).unwrap_or_else(|| {
        env_dir
            .unwrap_or_else(|| PathBuf::from("."))
            .join(command.name())
    });
    let reference = match args.reference.or(file.reference) {
        None => None,
        Some(name) if name == "none" => None,
        Some(name) => Some(
            Reference::parse(&name)
                .ok_or_else(|| CliError::Config(format!("unknown reference `{name}`")))?,
        ),
    };

    Ok(ExperimentConfig {
        command,
        family,
        sizes,
        horizons,
        steps,
        output,
        format,
        reference,
        dump_spectrum: args.dump_spectrum || file.dump_spectrum.unwrap_or(false),
        dump_eigenpairs: args.dump_eigenpairs || file.dump_eigenpairs.unwrap_or(false),
        force: args.force || file.force.unwrap_or(false),
    })
}

fn build_family(
    name: Option<&str>,
    p: Option<f64>,
    interior: Option<Vec<f64>>,
    seed: Option<u64>,
    low: Option<f64>,
    high: Option<f64>,
) -> Result<ChainFamily, CliError> {
    let name = match (name, &interior) {
        (Some(name), _) => name,
        (None, Some(_)) => "explicit",
        (None, None) => return Err(CliError::MalformedChain("no chain family given".into())),
    };
    let check_prob = |what: &str, v: f64| {
        if v > 0.0 && v < 1.0 {
            Ok(v)
        } else {
            Err(CliError::MalformedChain(format!(
                "{what} = {v} must lie in (0, 1)"
            )))
        }
    };
    match name {
        "homogeneous" => {
            let p =
                p.ok_or_else(|| CliError::MalformedChain("homogeneous family needs p".into()))?;
            Ok(ChainFamily::Homogeneous {
                p: check_prob("p", p)?,
            })
        }
        "ehrenfest" => Ok(ChainFamily::Ehrenfest),
        "explicit" => {
            let interior = interior.ok_or_else(|| {
                CliError::MalformedChain("explicit family needs interior_pR".into())
            })?;
            for &v in &interior {
                check_prob("interior pR", v)?;
            }
            Ok(ChainFamily::Explicit {
                interior_p_right: interior,
            })
        }
        "random" => {
            let low = check_prob("low", low.unwrap_or(DEFAULT_RANDOM_LOW))?;
            let high = check_prob("high", high.unwrap_or(DEFAULT_RANDOM_HIGH))?;
            if low > high {
                return Err(CliError::MalformedChain(format!(
                    "low = {low} exceeds high = {high}"
                )));
            }
            Ok(ChainFamily::Random {
                seed: seed.unwrap_or(0),
                low,
                high,
            })
        }
        other => Err(CliError::MalformedChain(format!(
            "unknown family `{other}`"
        ))),
    }
}
