//! Subcommand definitions and their implementations.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use panfuse::metrics::{evaluate_all, EvalOptions, DEFAULT_CSA_PERCENTILE};
use panfuse::pnm::{load_gray, load_rgb, save_pnm};
use panfuse::raster::resample_nearest;
use panfuse::synthetic::write_synthetic;
use panfuse::{fuse, FusionMethod, SyntheticSpec};

use crate::error::{exit, CliError, Result};
use crate::manifest::BatchManifest;
use crate::{batch, chart, records};

#[derive(Debug, Parser)]
#[command(name = "panfuse", version, about = "Pan-sharpening fusion and quality metrics")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fuse an MS image with a PAN image.
    Fuse(FuseArgs),
    /// Append quality metrics for a fused product to a CSV file.
    Evaluate(EvaluateArgs),
    /// Fuse and evaluate every pair and method listed in a JSON manifest.
    Batch(BatchArgs),
    /// Write a seeded synthetic MS/PAN/reference triple.
    GenSynthetic(GenSyntheticArgs),
    /// Render one SVG bar chart per metric from a metrics CSV.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
pub struct FuseArgs {
    /// One of SF, IHS, HSV, HFA, HFM, RVS, EF (case-insensitive).
    #[arg(long)]
    pub method: String,
    #[arg(long)]
    pub ms: PathBuf,
    #[arg(long)]
    pub pan: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[arg(long)]
    pub ms: PathBuf,
    #[arg(long)]
    pub pan: PathBuf,
    #[arg(long)]
    pub fused: PathBuf,
    #[arg(long)]
    pub csv: PathBuf,
    /// Defaults to the MS file stem.
    #[arg(long)]
    pub pair_id: Option<String>,
    /// Defaults to the fused file stem.
    #[arg(long)]
    pub method: Option<String>,
    #[arg(long, default_value_t = DEFAULT_CSA_PERCENTILE)]
    pub csa_percentile: f64,
}

#[derive(Debug, Args)]
pub struct BatchArgs {
    pub manifest: PathBuf,
}

#[derive(Debug, Args)]
pub struct GenSyntheticArgs {
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value_t = 128)]
    pub width: usize,
    #[arg(long, default_value_t = 128)]
    pub height: usize,
    #[arg(long, default_value_t = 4)]
    pub scale: usize,
    #[arg(long, default_value_t = 2)]
    pub passes: usize,
    #[arg(long)]
    pub out_dir: PathBuf,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[arg(long)]
    pub csv: PathBuf,
    #[arg(long)]
    pub svg_dir: PathBuf,
    /// Batch manifest whose sensor fields label the pairs.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

/// Runs a parsed command and returns its exit status.
pub fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Fuse(a) => cmd_fuse(&a),
        Command::Evaluate(a) => cmd_evaluate(&a),
        Command::Batch(a) => cmd_batch(&a.manifest),
        Command::GenSynthetic(a) => cmd_gen_synthetic(&a),
        Command::Report(a) => cmd_report(&a),
    }
}

fn file_stem(path: &Path) -> Option<String> {
    path.file_stem().map(|s| s.to_string_lossy().into_owned())
}

pub fn cmd_fuse(args: &FuseArgs) -> Result<u8> {
    let method: FusionMethod = args.method.parse()?;
    let ms = load_rgb::<f64>(&args.ms)?;
    let pan = load_gray::<f64>(&args.pan)?;
    let fused = fuse(method, &ms, &pan)?;
    save_pnm(&fused, &args.out)?;
    println!(
        "{} {}x{} -> {}",
        method,
        fused.width(),
        fused.height(),
        args.out.display()
    );
    Ok(exit::SUCCESS)
}

pub fn cmd_evaluate(args: &EvaluateArgs) -> Result<u8> {
    let ms = load_rgb::<f64>(&args.ms)?;
    let pan = load_gray::<f64>(&args.pan)?;
    let fused = load_rgb::<f64>(&args.fused)?;
    let ms = if ms.dims() == pan.dims() {
        ms
    } else {
        resample_nearest(&ms, pan.width(), pan.height())?
    };
    let pair_id = args
        .pair_id
        .clone()
        .or_else(|| file_stem(&args.ms))
        .unwrap_or_else(|| "pair".into());
    let method = args
        .method
        .clone()
        .or_else(|| file_stem(&args.fused))
        .unwrap_or_else(|| "fused".into());
    let options = EvalOptions {
        csa_percentile: args.csa_percentile,
    };
    let rows = evaluate_all(&ms, &pan, &fused, &pair_id, &method, options)?;
    records::append_csv(&args.csv, &rows)?;
    println!("{} rows -> {}", rows.len(), args.csv.display());
    Ok(exit::SUCCESS)
}

pub fn cmd_batch(manifest_path: &Path) -> Result<u8> {
    let threads = batch::thread_cap(std::env::var(batch::THREADS_VAR).ok().as_deref())?;
    let base = manifest_path.parent().unwrap_or(Path::new(""));
    let plan = BatchManifest::load(manifest_path)?.plan(manifest_path, base)?;
    let summary = batch::run(&plan, threads)?;
    for pair in &plan.pairs {
        match summary.failures.iter().find(|f| f.pair_id == pair.pair_id) {
            Some(f) => eprintln!("pair {}: failed: {}", pair.pair_id, f.message),
            None => println!("pair {}: {} methods", pair.pair_id, plan.methods.len()),
        }
    }
    println!(
        "{} of {} pairs succeeded, {} failed; {} products, {} rows -> {}",
        summary.pair_count - summary.failures.len(),
        summary.pair_count,
        summary.failures.len(),
        summary.products.len(),
        summary.records.len(),
        summary.csv_path.display()
    );
    Ok(if summary.failures.is_empty() {
        exit::SUCCESS
    } else {
        exit::PARTIAL_FAILURE
    })
}

pub fn cmd_gen_synthetic(args: &GenSyntheticArgs) -> Result<u8> {
    let spec = SyntheticSpec {
        seed: args.seed,
        width: args.width,
        height: args.height,
        scale_factor: args.scale,
        smoothing_passes: args.passes,
    };
    fs::create_dir_all(&args.out_dir).map_err(|e| CliError::io(&args.out_dir, e))?;
    let paths = write_synthetic(&spec, &args.out_dir)?;
    for p in [&paths.ms, &paths.pan, &paths.reference] {
        println!("{}", p.display());
    }
    Ok(exit::SUCCESS)
}

pub fn cmd_report(args: &ReportArgs) -> Result<u8> {
    let rows = records::read_csv(&args.csv)?;
    if rows.is_empty() {
        return Err(CliError::NoRecords(args.csv.clone()));
    }
    let mut labels = HashMap::new();
    if let Some(path) = &args.manifest {
        for pair in BatchManifest::load(path)?.pairs {
            labels.insert(pair.pair_id.clone(), pair.meta().label());
        }
    }
    fs::create_dir_all(&args.svg_dir).map_err(|e| CliError::io(&args.svg_dir, e))?;
    for data in chart::collect(&rows) {
        let path = args.svg_dir.join(chart::file_name(data.metric));
        fs::write(&path, chart::render_svg(&data, &labels)).map_err(|e| CliError::io(&path, e))?;
        println!("{}", path.display());
    }
    Ok(exit::SUCCESS)
}
