use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sprintz::ingest::Delimiter;
use sprintz::{compress_samples, decompress_samples, BitWidth, CodecConfig, ForecasterKind, Samples};
use sprintz_cli::dataset::{self, FileKind, LoadOptions};
use sprintz_cli::external::{hex_digest, ExternalCodec};
use sprintz_cli::ratio;
use sprintz_cli::report::{summary_path, write_csv, write_json};
use sprintz_cli::throughput::{self, ThroughputOptions};
use sprintz_cli::Variant;

const EXIT_USAGE: u8 = 1;
const EXIT_DATA: u8 = 2;
const EXIT_VERIFY: u8 = 3;

#[derive(Parser)]
#[command(
    name = "sprintz",
    version,
    about = "Lossless compression for integer time series"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compress a raw binary or delimited text file.
    Compress(CompressArgs),
    /// Decompress a stream back to raw little-endian samples.
    Decompress(DecompressArgs),
    /// Time compression and decompression of random data across column counts.
    BenchThroughput(ThroughputArgs),
    /// Compare compression ratios over a directory of datasets.
    BenchRatio(RatioArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Dtype {
    U8,
    U16,
}

impl From<Dtype> for BitWidth {
    fn from(d: Dtype) -> Self {
        match d {
            Dtype::U8 => BitWidth::W8,
            Dtype::U16 => BitWidth::W16,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Forecaster {
    Delta,
    Fire,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Switch {
    On,
    Off,
}

#[derive(Args)]
struct TextArgs {
    /// Field delimiter for text input; "ws" splits on whitespace.
    #[arg(long)]
    delimiter: Option<String>,
    /// Drop the first field of every text row.
    #[arg(long)]
    skip_label: bool,
    /// Skip the first line of text input.
    #[arg(long)]
    has_header: bool,
    /// Treat each text row as a univariate series and join them with
    /// interpolated bridges.
    #[arg(long)]
    rows_are_series: bool,
}

#[derive(Args)]
struct CompressArgs {
    input: PathBuf,
    #[arg(short, long)]
    output: PathBuf,
    #[arg(long, value_enum, default_value = "u8")]
    dtype: Dtype,
    #[arg(long, default_value_t = 1)]
    ncols: usize,
    #[arg(long, value_enum, default_value = "delta")]
    forecaster: Forecaster,
    #[arg(long, value_enum, default_value = "off")]
    entropy: Switch,
    /// Block headers per header group.
    #[arg(long, default_value_t = sprintz::config::DEFAULT_GROUP_SIZE)]
    group: u8,
    #[arg(long, default_value_t = sprintz::forecast::DEFAULT_LEARN_SHIFT)]
    learn_shift: u8,
    /// Decode the result and compare with the input.
    #[arg(long)]
    verify: bool,
    #[command(flatten)]
    text: TextArgs,
}

#[derive(Args)]
struct DecompressArgs {
    input: PathBuf,
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args)]
struct ThroughputArgs {
    /// Column counts to sweep, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "1,2,4,8,16,32,64")]
    sweep_ncols: Vec<usize>,
    /// Restrict to one sample width.
    #[arg(long, value_enum)]
    dtype: Option<Dtype>,
    /// Values generated per configuration.
    #[arg(long, default_value_t = 1 << 22)]
    values: usize,
    #[arg(long, default_value_t = 10)]
    reps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// CSV output; a JSON summary is written next to it.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct RatioArgs {
    dir: PathBuf,
    #[arg(long, value_enum, default_value = "u16")]
    dtype: Dtype,
    /// Columns in raw binary datasets.
    #[arg(long, default_value_t = 1)]
    ncols: usize,
    /// JSON list of {name, compress, decompress} external codec commands.
    #[arg(long)]
    external: Option<PathBuf>,
    #[arg(long)]
    report: Option<PathBuf>,
    #[command(flatten)]
    text: TextArgs,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Data(anyhow::Error),
    Verify(String),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Data(e)
    }
}

impl From<sprintz::Error> for Failure {
    fn from(e: sprintz::Error) -> Self {
        Failure::Data(e.into())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Compress(a) => cmd_compress(a),
        Command::Decompress(a) => cmd_decompress(a),
        Command::BenchThroughput(a) => cmd_bench_throughput(a),
        Command::BenchRatio(a) => cmd_bench_ratio(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Data(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_DATA)
        }
        Err(Failure::Verify(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(EXIT_VERIFY)
        }
    }
}

fn parse_delimiter(s: &Option<String>) -> Result<Option<Delimiter>, Failure> {
    match s.as_deref() {
        None => Ok(None),
        Some("ws") => Ok(Some(Delimiter::Whitespace)),
        Some("\\t") | Some("tab") => Ok(Some(Delimiter::Char('\t'))),
        Some(d) => {
            let mut chars = d.chars();
            match (chars.next(), chars.next()) {
                (Some(c), None) => Ok(Some(Delimiter::Char(c))),
                _ => Err(Failure::Usage(format!(
                    "delimiter must be one character, got {d:?}"
                ))),
            }
        }
    }
}

fn load_options(text: &TextArgs, dtype: Dtype, ncols: usize) -> Result<LoadOptions, Failure> {
    if ncols == 0 {
        return Err(Failure::Usage("--ncols must be at least 1".into()));
    }
    Ok(LoadOptions {
        width: dtype.into(),
        ncols,
        delimiter: parse_delimiter(&text.delimiter)?,
        skip_label: text.skip_label,
        has_header: text.has_header,
        rows_are_series: text.rows_are_series,
    })
}

#[derive(Serialize)]
struct QuantSidecar {
    min: f64,
    max: f64,
    w: u32,
    ncols: usize,
}

fn sidecar_path(output: &Path) -> PathBuf {
    let mut s = output.as_os_str().to_owned();
    s.push(".quant.json");
    PathBuf::from(s)
}

fn cmd_compress(a: CompressArgs) -> Result<(), Failure> {
    let opts = load_options(&a.text, a.dtype, a.ncols)?;
    let width: BitWidth = a.dtype.into();
    let kind = match (dataset::classify(&a.input), opts.delimiter) {
        (None, Some(d)) => Some(FileKind::Text(d)),
        (kind, _) => kind,
    };
    let (samples, ncols) = match kind {
        Some(FileKind::Text(delim)) => {
            let (values, ncols) = dataset::load_text(&a.input, delim, &opts)?;
            let (samples, params) = dataset::quantize_samples(&values, width)?;
            let sidecar = QuantSidecar {
                min: params.min,
                max: params.max,
                w: params.bits,
                ncols,
            };
            write_json(&sidecar_path(&a.output), &sidecar)?;
            (samples, ncols)
        }
        _ => {
            let bytes = fs::read(&a.input).with_context(|| format!("reading {}", a.input.display()))?;
            (sprintz::ingest::parse_raw(&bytes, width, a.ncols)?, a.ncols)
        }
    };
    let config = CodecConfig {
        width,
        ncols,
        forecaster: match a.forecaster {
            Forecaster::Delta => ForecasterKind::Delta,
            Forecaster::Fire => ForecasterKind::Fire,
        },
        entropy: a.entropy == Switch::On,
        group_size: a.group,
        learn_shift: a.learn_shift,
    };
    config.validate().map_err(|e| Failure::Usage(e.to_string()))?;

    let start = Instant::now();
    let compressed = compress_samples(&samples, &config)?;
    let elapsed = start.elapsed();
    fs::write(&a.output, &compressed).with_context(|| format!("writing {}", a.output.display()))?;

    let raw = samples.len() * width.bytes();
    if a.verify {
        let (_, back) = decompress_samples(&compressed)?;
        if back != samples {
            return Err(Failure::Verify("decompressed data differs from input".into()));
        }
    }
    println!(
        "{} -> {}: {raw} -> {} bytes, ratio {:.3}, {:.1} MB/s",
        a.input.display(),
        a.output.display(),
        compressed.len(),
        raw as f64 / compressed.len() as f64,
        raw as f64 / elapsed.as_secs_f64().max(1e-9) / 1e6,
    );
    Ok(())
}

fn cmd_decompress(a: DecompressArgs) -> Result<(), Failure> {
    let bytes = fs::read(&a.input).with_context(|| format!("reading {}", a.input.display()))?;
    let start = Instant::now();
    let (header, samples): (_, Samples) = decompress_samples(&bytes)?;
    let elapsed = start.elapsed();
    let raw = samples.to_le_bytes();
    fs::write(&a.output, &raw).with_context(|| format!("writing {}", a.output.display()))?;
    println!(
        "{} -> {}: {} samples x {} columns, {}-bit, {:.1} MB/s, sha256 {}",
        a.input.display(),
        a.output.display(),
        header.nsamples,
        header.config.ncols,
        header.config.width.bits(),
        raw.len() as f64 / elapsed.as_secs_f64().max(1e-9) / 1e6,
        hex_digest(&raw),
    );
    Ok(())
}

fn cmd_bench_throughput(a: ThroughputArgs) -> Result<(), Failure> {
    if a.sweep_ncols.contains(&0) || a.sweep_ncols.iter().any(|&d| d > u16::MAX as usize) {
        return Err(Failure::Usage("--sweep-ncols values must be in 1..=65535".into()));
    }
    let opts = ThroughputOptions {
        sweep_ncols: a.sweep_ncols,
        widths: match a.dtype {
            Some(d) => vec![d.into()],
            None => vec![BitWidth::W8, BitWidth::W16],
        },
        variants: Variant::ALL.to_vec(),
        nvalues: a.values,
        reps: a.reps,
        seed: a.seed,
    };
    let rows = throughput::run(&opts).map_err(|e| Failure::Verify(format!("{e:#}")))?;
    println!("codec,w,ncols,ratio,compress_mbps,decompress_mbps");
    for r in &rows {
        println!(
            "{},{},{},{:.4},{:.1},{:.1}",
            r.codec, r.w, r.ncols, r.ratio, r.compress_mbps, r.decompress_mbps
        );
    }
    if let Some(path) = &a.report {
        write_csv(path, &rows)?;
        #[derive(Serialize)]
        struct Summary<'a> {
            seed: u64,
            reps: usize,
            values: usize,
            rows: &'a [throughput::ThroughputRow],
        }
        write_json(
            &summary_path(path),
            &Summary {
                seed: a.seed,
                reps: a.reps,
                values: a.values,
                rows: &rows,
            },
        )?;
    }
    Ok(())
}

fn cmd_bench_ratio(a: RatioArgs) -> Result<(), Failure> {
    let opts = load_options(&a.text, a.dtype, a.ncols)?;
    let datasets = dataset::load_dir(&a.dir, &opts)?;
    let externals = match &a.external {
        Some(p) => ExternalCodec::load_all(p)?,
        None => Vec::new(),
    };
    let scratch = std::env::temp_dir().join(format!("sprintz-ratio-{}", std::process::id()));
    fs::create_dir_all(&scratch).context("creating scratch directory")?;
    let report = ratio::evaluate(&datasets, &Variant::ALL, &externals, &scratch);
    let _ = fs::remove_dir_all(&scratch);

    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    println!("dataset,codec,ratio,rank");
    for r in &report.rows {
        println!("{},{},{:.4},{}", r.dataset, r.codec, r.ratio, r.rank);
    }
    for (codec, rank) in &report.mean_ranks {
        println!("# mean rank {codec}: {rank:.3}");
    }
    if let Some(path) = &a.report {
        write_csv(path, &report.rows)?;
        write_json(&summary_path(path), &report)?;
    }
    if !report.failures.is_empty() {
        return Err(Failure::Verify(report.failures.join("; ")));
    }
    if datasets.is_empty() {
        return Err(Failure::Data(anyhow!("no datasets found in {}", a.dir.display())));
    }
    Ok(())
}
