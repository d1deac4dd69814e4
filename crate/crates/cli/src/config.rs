use std::fmt;
use std::path::{Path, PathBuf};

use smdm_core::analysis::{auto_input_length, DEFAULT_EXACT_CAP, DEFAULT_SEARCH_WINDOW};
use smdm_core::{Distribution, DistributionDoc, ShellMapper, WeightFunction, WeightSpec};

/// Failure of a command, split by exit code.
#[derive(Debug)]
pub enum CliError {
    /// Inconsistent or unusable setup. Exit code 2.
    Config(String),
    /// Invalid input data or a domain error. Exit code 3.
    Data(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Data(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) | CliError::Data(m) => f.write_str(m),
        }
    }
}

impl From<smdm_core::Error> for CliError {
    fn from(e: smdm_core::Error) -> Self {
        if e.is_configuration() {
            CliError::Config(e.to_string())
        } else {
            CliError::Data(e.to_string())
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn io_error(path: &Path, e: std::io::Error) -> CliError {
    CliError::Config(format!("{}: {e}", path.display()))
}

/// Where the target distribution comes from. Exactly one is allowed.
#[derive(Debug, Clone, PartialEq)]
pub enum TargetSpec {
    File(PathBuf),
    MbEntropy { support: Vec<f64>, h: f64 },
    MbParameter { support: Vec<f64>, v: f64 },
    Probabilities { support: Vec<f64>, probs: Vec<f64> },
}

impl TargetSpec {
    pub fn from_flags(
        support: Option<Vec<f64>>,
        dist: Option<PathBuf>,
        mb_entropy: Option<f64>,
        mb_v: Option<f64>,
        probs: Option<Vec<f64>>,
    ) -> CliResult<Self> {
        let given = [
            dist.is_some(),
            mb_entropy.is_some(),
            mb_v.is_some(),
            probs.is_some(),
        ]
        .iter()
        .filter(|&&b| b)
        .count();
        if given != 1 {
            return Err(CliError::Config(
                "give exactly one of --dist, --mb-entropy, --mb-v, --probs".into(),
            ));
        }
        if let Some(path) = dist {
            if support.is_some() {
                return Err(CliError::Config(
                    "--support is taken from the --dist document".into(),
                ));
            }
            return Ok(TargetSpec::File(path));
        }
        let support = support.ok_or_else(|| CliError::Config("--support is required".into()))?;
        Ok(match (mb_entropy, mb_v, probs) {
            (Some(h), _, _) => TargetSpec::MbEntropy { support, h },
            (_, Some(v), _) => TargetSpec::MbParameter { support, v },
            (_, _, Some(probs)) => TargetSpec::Probabilities { support, probs },
            _ => unreachable!(),
        })
    }

    pub fn resolve(&self) -> CliResult<Distribution> {
        let doc = match self {
            TargetSpec::File(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| io_error(path, e))?;
                DistributionDoc::from_json(&text)?
            }
            TargetSpec::MbEntropy { support, h } => DistributionDoc {
                support: support.clone(),
                probs: None,
                mb_v: None,
                mb_entropy: Some(*h),
            },
            TargetSpec::MbParameter { support, v } => DistributionDoc {
                support: support.clone(),
                probs: None,
                mb_v: Some(*v),
                mb_entropy: None,
            },
            TargetSpec::Probabilities { support, probs } => DistributionDoc {
                support: support.clone(),
                probs: Some(probs.clone()),
                mb_v: None,
                mb_entropy: None,
            },
        };
        Ok(doc.resolve()?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputLength {
    Fixed(u32),
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    /// One byte per symbol holding its 0-based alphabet position.
    Bytes,
    /// Decimal positions, space separated, one sequence per line.
    Text,
    Csv,
}

/// Resolved settings shared by the block codec commands.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub target: Distribution,
    pub weights: WeightFunction,
    pub n: usize,
    pub m: InputLength,
    pub exact_cap: u32,
    pub input: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub format: Format,
}

impl RunConfig {
    pub fn new(
        target: &TargetSpec,
        weights: &WeightSpec,
        n: usize,
        m: InputLength,
        format: Format,
    ) -> CliResult<Self> {
        if n == 0 {
            return Err(CliError::Config("n must be at least 1".into()));
        }
        if format == Format::Csv {
            return Err(CliError::Config(
                "block data is written as bytes or text".into(),
            ));
        }
        let target = target.resolve()?;
        let weights = weights.build(&target)?;
        Ok(RunConfig {
            target,
            weights,
            n,
            m,
            exact_cap: DEFAULT_EXACT_CAP,
            input: None,
            output: None,
            format,
        })
    }

    /// Builds the mapper and fixes `m`, checking it fits `n log2 |A|`.
    pub fn mapper(&self) -> CliResult<(ShellMapper, u32)> {
        let mapper = ShellMapper::build(self.n, self.weights.clone())?;
        let m = match self.m {
            InputLength::Fixed(m) => m,
            InputLength::Auto => {
                auto_input_length(&mapper, &self.target, DEFAULT_SEARCH_WINDOW, self.exact_cap)?.0
            }
        };
        if m == 0 || m > mapper.max_input_bits() {
            return Err(CliError::Config(format!(
                "m = {m} must lie in 1..={} for n = {} over {} symbols",
                mapper.max_input_bits(),
                self.n,
                mapper.alphabet_len()
            )));
        }
        Ok((mapper, m))
    }
}
