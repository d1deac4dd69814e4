//! `smdm`: fit targets, derive weights, encode/decode bit streams and sweep
//! divergences against the constant-composition baseline.

mod bits;
mod config;

use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use smdm_core::analysis::{
    ccdm_divergence, divergence_exact, sweep, SweepConfig, DEFAULT_EXACT_CAP,
};
use smdm_core::dist::DEFAULT_FIT_TOL;
use smdm_core::{entropy, mb_fit_entropy, n_type_quantize, SequenceIndex, WeightSpec};

use bits::{BitReader, BitWriter};
use config::{io_error, CliError, CliResult, Format, InputLength, RunConfig, TargetSpec};

#[derive(Parser)]
#[command(name = "smdm", version, about = "Shell mapping distribution matcher")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit a Maxwell-Boltzmann distribution to an entropy.
    FitMb {
        #[arg(long, value_delimiter = ',', required = true)]
        support: Vec<f64>,
        #[arg(long)]
        mb_entropy: f64,
        #[arg(long, default_value_t = DEFAULT_FIT_TOL)]
        tol: f64,
    },
    /// Print the weight function for a target.
    Weights {
        #[command(flatten)]
        target: TargetArgs,
    },
    /// Map m-bit blocks to n-symbol sequences.
    Encode(CodecArgs),
    /// Map n-symbol sequences back to m-bit blocks.
    Decode(CodecArgs),
    /// Divergence of shell mapping and CCDM over a list of blocklengths, as CSV.
    Sweep {
        #[command(flatten)]
        target: TargetArgs,
        #[command(flatten)]
        lengths: Lengths,
        /// Fixed rate in bits per symbol; m = ceil(n R).
        #[arg(long, required_unless_present = "auto_m")]
        rate: Option<f64>,
        /// Choose m per blocklength by divergence search instead of a fixed rate.
        #[arg(long)]
        auto_m: bool,
        /// Largest m for which the exact divergence is computed.
        #[arg(long, default_value_t = DEFAULT_EXACT_CAP)]
        exact_cap: u32,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// CCDM composition, rate and divergence, next to shell mapping at the same m.
    CompareCcdm {
        #[command(flatten)]
        target: TargetArgs,
        #[command(flatten)]
        lengths: Lengths,
        #[arg(long, default_value_t = DEFAULT_EXACT_CAP)]
        exact_cap: u32,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
}

#[derive(Args)]
struct TargetArgs {
    /// Comma-separated amplitudes; with --mb-entropy, --mb-v or --probs.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    support: Option<Vec<f64>>,
    /// JSON distribution document.
    #[arg(long)]
    dist: Option<PathBuf>,
    #[arg(long)]
    mb_entropy: Option<f64>,
    #[arg(long)]
    mb_v: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    probs: Option<Vec<f64>>,
    /// energy | dyadic | selfinfo[:q=<bits>] | explicit:<w1,w2,...>
    #[arg(long, default_value = "energy")]
    weights: WeightSpec,
}

impl TargetArgs {
    fn spec(&self) -> CliResult<TargetSpec> {
        TargetSpec::from_flags(
            self.support.clone(),
            self.dist.clone(),
            self.mb_entropy,
            self.mb_v,
            self.probs.clone(),
        )
    }
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Lengths {
    /// Comma-separated blocklengths.
    #[arg(short = 'n', long = "n", value_delimiter = ',')]
    ns: Vec<usize>,
    /// Blocklengths start:end[:step], end inclusive.
    #[arg(long)]
    n_range: Option<String>,
}

impl Lengths {
    fn resolve(&self) -> CliResult<Vec<usize>> {
        let Some(range) = &self.n_range else {
            return Ok(self.ns.clone());
        };
        let bad = || CliError::Config(format!("bad --n-range {range:?}"));
        let parts: Vec<usize> = range
            .split(':')
            .map(|p| p.trim().parse().map_err(|_| bad()))
            .collect::<CliResult<_>>()?;
        let (start, end, step) = match parts[..] {
            [a, b] => (a, b, 1),
            [a, b, s] if s > 0 => (a, b, s),
            _ => return Err(bad()),
        };
        Ok((start..=end).step_by(step).collect())
    }
}

#[derive(Args)]
struct CodecArgs {
    #[command(flatten)]
    target: TargetArgs,
    #[arg(short = 'n', long = "n")]
    n: usize,
    /// Input bits per block.
    #[arg(short = 'm', long = "m", required_unless_present = "auto_m")]
    m: Option<u32>,
    #[arg(long, conflicts_with = "m")]
    auto_m: bool,
    /// Symbol file format.
    #[arg(long, value_enum, default_value_t = Format::Bytes)]
    format: Format,
    /// Input file; standard input when absent.
    #[arg(short, long)]
    input: Option<PathBuf>,
    /// Output file; standard output when absent.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

impl CodecArgs {
    fn config(&self) -> CliResult<RunConfig> {
        let m = if self.auto_m {
            InputLength::Auto
        } else {
            InputLength::Fixed(self.m.expect("clap enforces -m or --auto-m"))
        };
        let mut cfg = RunConfig::new(
            &self.target.spec()?,
            &self.target.weights,
            self.n,
            m,
            self.format,
        )?;
        cfg.input = self.input.clone();
        cfg.output = self.output.clone();
        Ok(cfg)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("smdm: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(command: Command) -> CliResult<()> {
    match command {
        Command::FitMb {
            support,
            mb_entropy,
            tol,
        } => cmd_fit_mb(&support, mb_entropy, tol),
        Command::Weights { target } => {
            let dist = target.spec()?.resolve()?;
            let w = target.weights.build(&dist)?;
            println!("{}", w.to_doc().to_json());
            Ok(())
        }
        Command::Encode(args) => cmd_encode(&args.config()?),
        Command::Decode(args) => cmd_decode(&args.config()?),
        Command::Sweep {
            target,
            lengths,
            rate,
            auto_m,
            exact_cap,
            output,
        } => {
            let dist = target.spec()?.resolve()?;
            let weights = target.weights.build(&dist)?;
            let mut cfg = SweepConfig::new(dist, weights, rate.unwrap_or(f64::NAN));
            cfg.auto_m = auto_m;
            cfg.exact_cap = exact_cap;
            cmd_sweep(&cfg, &lengths.resolve()?, output.as_deref())
        }
        Command::CompareCcdm {
            target,
            lengths,
            exact_cap,
            format,
        } => cmd_compare_ccdm(&target, &lengths.resolve()?, exact_cap, format),
    }
}

fn cmd_fit_mb(support: &[f64], h: f64, tol: f64) -> CliResult<()> {
    let (v, dist) = mb_fit_entropy(support, h, tol)?;
    println!("v={v}");
    println!("{}", dist.to_doc().to_json());
    Ok(())
}

fn read_input(path: Option<&Path>) -> CliResult<Vec<u8>> {
    let mut data = Vec::new();
    match path {
        Some(p) => File::open(p)
            .and_then(|mut f| f.read_to_end(&mut data))
            .map_err(|e| io_error(p, e))?,
        None => io::stdin()
            .read_to_end(&mut data)
            .map_err(|e| CliError::Config(format!("stdin: {e}")))?,
    };
    Ok(data)
}

fn write_output(path: Option<&Path>, data: &[u8]) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, data).map_err(|e| io_error(p, e)),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(data)
                .and_then(|_| out.flush())
                .map_err(|e| CliError::Config(format!("stdout: {e}")))
        }
    }
}

fn cmd_encode(cfg: &RunConfig) -> CliResult<()> {
    let (mapper, m) = cfg.mapper()?;
    let data = read_input(cfg.input.as_deref())?;
    let bits = data.len() * 8;
    if bits % m as usize != 0 {
        return Err(CliError::Data(format!(
            "input has {bits} bits; the last block holds {} of {m}",
            bits % m as usize
        )));
    }
    let mut reader = BitReader::new(&data);
    let mut out = Vec::with_capacity(bits / m as usize * (cfg.n + 1));
    while reader.remaining() > 0 {
        let idx = SequenceIndex::new(reader.read(m));
        let seq = mapper.encode(m, &idx)?;
        match cfg.format {
            Format::Text => {
                let line: Vec<String> = seq.iter().map(|a| a.to_string()).collect();
                out.extend_from_slice(line.join(" ").as_bytes());
                out.push(b'\n');
            }
            _ => out.extend(seq.iter().map(|&a| a as u8)),
        }
    }
    write_output(cfg.output.as_deref(), &out)
}

fn parse_blocks(cfg: &RunConfig, data: &[u8], k: usize) -> CliResult<Vec<Vec<usize>>> {
    let n = cfg.n;
    let check = |block: usize, pos: usize, a: usize| {
        if a < k {
            Ok(a)
        } else {
            Err(CliError::Data(format!(
                "block {block}: symbol {a} at position {pos} is outside the {k}-letter alphabet"
            )))
        }
    };
    match cfg.format {
        Format::Text => {
            let text = std::str::from_utf8(data)
                .map_err(|_| CliError::Data("text input is not UTF-8".into()))?;
            let mut blocks = Vec::new();
            for (b, line) in text.lines().filter(|l| !l.trim().is_empty()).enumerate() {
                let seq = line
                    .split_whitespace()
                    .enumerate()
                    .map(|(pos, tok)| {
                        let a = tok.parse::<usize>().map_err(|_| {
                            CliError::Data(format!("block {b}: bad symbol {tok:?}"))
                        })?;
                        check(b, pos, a)
                    })
                    .collect::<CliResult<Vec<_>>>()?;
                if seq.len() != n {
                    return Err(CliError::Data(format!(
                        "block {b} has {} symbols, expected {n}",
                        seq.len()
                    )));
                }
                blocks.push(seq);
            }
            Ok(blocks)
        }
        _ => {
            if !data.len().is_multiple_of(n) {
                return Err(CliError::Data(format!(
                    "input has {} symbols; the last block holds {} of {n}",
                    data.len(),
                    data.len() % n
                )));
            }
            data.chunks(n)
                .enumerate()
                .map(|(b, chunk)| {
                    chunk
                        .iter()
                        .enumerate()
                        .map(|(pos, &a)| check(b, pos, a as usize))
                        .collect()
                })
                .collect()
        }
    }
}

fn cmd_decode(cfg: &RunConfig) -> CliResult<()> {
    let (mapper, m) = cfg.mapper()?;
    let data = read_input(cfg.input.as_deref())?;
    let blocks = parse_blocks(cfg, &data, mapper.alphabet_len())?;
    let mut writer = BitWriter::new();
    for (b, seq) in blocks.iter().enumerate() {
        let idx = mapper
            .decode(m, seq)
            .map_err(|e| CliError::Data(format!("block {b}: {e}")))?;
        writer.write(idx.value(), m);
    }
    if !writer.bit_len().is_multiple_of(8) {
        return Err(CliError::Data(format!(
            "{} blocks of {m} bits do not fill whole bytes",
            blocks.len()
        )));
    }
    write_output(cfg.output.as_deref(), &writer.into_bytes())
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

fn cmd_sweep(cfg: &SweepConfig, ns: &[usize], output: Option<&Path>) -> CliResult<()> {
    if !cfg.auto_m && !(cfg.rate.is_finite() && cfg.rate > 0.0) {
        return Err(CliError::Config("--rate must be positive".into()));
    }
    let rows = sweep(cfg, ns);
    let sink: Box<dyn Write> = match output {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| io_error(p, e))?)),
        None => Box::new(io::stdout().lock()),
    };
    let mut w = csv::Writer::from_writer(sink);
    let csv_err = |e: csv::Error| CliError::Config(format!("writing csv: {e}"));
    w.write_record([
        "n",
        "m",
        "rate",
        "D_exact",
        "D_norm_exact",
        "D_approx_wmax",
        "D_approx_wmax_minus_1",
        "D_ccdm",
        "D_ccdm_norm",
    ])
    .map_err(csv_err)?;
    for row in &rows {
        for warning in &row.warnings {
            eprintln!("smdm: warning: {warning}");
        }
        w.write_record([
            row.n.to_string(),
            row.m.map(|m| m.to_string()).unwrap_or_default(),
            opt(row.rate()),
            opt(row.d_exact),
            opt(row.d_norm_exact()),
            opt(row.d_approx_wmax),
            opt(row.d_approx_wmax_minus_1),
            opt(row.d_ccdm),
            opt(row.d_ccdm_norm()),
        ])
        .map_err(csv_err)?;
    }
    w.flush()
        .map_err(|e| CliError::Config(format!("writing csv: {e}")))
}

fn cmd_compare_ccdm(
    target: &TargetArgs,
    ns: &[usize],
    exact_cap: u32,
    format: Format,
) -> CliResult<()> {
    let dist = target.spec()?.resolve()?;
    let weights = target.weights.build(&dist)?;
    let mut out = String::new();
    if format == Format::Csv {
        out.push_str("n,counts,m_ccdm,rate_ccdm,D_ccdm,D_ccdm_norm,D_smdm,D_smdm_norm\n");
    } else {
        out.push_str(&format!("target entropy {:.6} bits\n", entropy(&dist)));
    }
    for &n in ns {
        let comp = n_type_quantize(&dist, n as u64)?;
        let ccdm = ccdm_divergence(&comp, &dist)?;
        // Shell mapping at the CCDM's own input length.
        let smdm = if ccdm.m <= exact_cap {
            let mapper = smdm_core::ShellMapper::build(n, weights.clone())?;
            Some(divergence_exact(&mapper, ccdm.m, &dist)?)
        } else {
            None
        };
        let counts: Vec<String> = comp.counts().iter().map(|c| c.to_string()).collect();
        match format {
            Format::Csv => out.push_str(&format!(
                "{n},{},{},{},{},{},{},{}\n",
                counts.join(" "),
                ccdm.m,
                ccdm.rate(),
                ccdm.divergence_bits,
                ccdm.normalized_bits_per_symbol,
                opt(smdm.as_ref().map(|r| r.divergence_bits)),
                opt(smdm.as_ref().map(|r| r.normalized_bits_per_symbol)),
            )),
            _ => {
                out.push_str(&format!(
                    "n={n} counts=[{}] m={} rate={:.4} D_ccdm/n={:.6}",
                    counts.join(","),
                    ccdm.m,
                    ccdm.rate(),
                    ccdm.normalized_bits_per_symbol
                ));
                if let Some(r) = &smdm {
                    out.push_str(&format!(" D_smdm/n={:.6}", r.normalized_bits_per_symbol));
                }
                out.push('\n');
            }
        }
    }
    write_output(None, out.as_bytes())
}
