//! Manifest-driven batch runs.

use std::fs;
use std::path::{Path, PathBuf};

use panfuse::metrics::{evaluate_all, EvalOptions, MetricRecord};
use panfuse::pnm::{load_gray, load_rgb, save_pnm};
use panfuse::raster::resample_nearest;
use panfuse::{fuse, FusionMethod};
use rayon::prelude::*;

use crate::error::{CliError, Result};
use crate::manifest::{BatchPlan, PairEntry};
use crate::records::write_csv;

pub const THREADS_VAR: &str = "PANFUSE_THREADS";
pub const METRICS_FILE: &str = "metrics.csv";

/// Reads the thread cap; `None` leaves the choice to rayon.
pub fn thread_cap(value: Option<&str>) -> Result<Option<usize>> {
    match value {
        None => Ok(None),
        Some(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::Usage(format!(
                "{THREADS_VAR} must be a positive integer, got {v:?}"
            ))),
        },
    }
}

#[derive(Debug)]
pub struct PairFailure {
    pub pair_id: String,
    pub message: String,
}

#[derive(Debug)]
pub struct BatchSummary {
    pub csv_path: PathBuf,
    pub products: Vec<PathBuf>,
    pub records: Vec<MetricRecord>,
    pub failures: Vec<PairFailure>,
    pub pair_count: usize,
}

/// Result of one pair: product paths and metric rows in method order.
type PairOutput = (Vec<PathBuf>, Vec<MetricRecord>);

fn process_pair(
    pair: &PairEntry,
    methods: &[FusionMethod],
    out_dir: &Path,
    options: EvalOptions,
) -> Result<PairOutput> {
    let ms = load_rgb::<f64>(&pair.ms_path)?;
    let pan = load_gray::<f64>(&pair.pan_path)?;
    let ms = if ms.dims() == pan.dims() {
        ms
    } else {
        resample_nearest(&ms, pan.width(), pan.height())?
    };
    let dir = out_dir.join(&pair.pair_id);
    fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;

    let mut products = Vec::with_capacity(methods.len());
    let mut records = Vec::new();
    for &method in methods {
        let fused = fuse(method, &ms, &pan)?;
        let path = dir.join(format!("{}.ppm", method.name()));
        save_pnm(&fused, &path)?;
        products.push(path);
        records.extend(evaluate_all(
            &ms,
            &pan,
            &fused,
            &pair.pair_id,
            method.name(),
            options,
        )?);
    }
    Ok((products, records))
}

/// Runs every pair, possibly in parallel, then writes the aggregate CSV in
/// manifest order. A failing pair is recorded and the others continue.
pub fn run(plan: &BatchPlan, threads: Option<usize>) -> Result<BatchSummary> {
    fs::create_dir_all(&plan.output_dir).map_err(|e| CliError::io(&plan.output_dir, e))?;
    let options = EvalOptions {
        csa_percentile: plan.csa_percentile,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    let outcomes: Vec<Result<PairOutput>> = pool.install(|| {
        plan.pairs
            .par_iter()
            .map(|pair| process_pair(pair, &plan.methods, &plan.output_dir, options))
            .collect()
    });

    let mut summary = BatchSummary {
        csv_path: plan.output_dir.join(METRICS_FILE),
        products: Vec::new(),
        records: Vec::new(),
        failures: Vec::new(),
        pair_count: plan.pairs.len(),
    };
    for (pair, outcome) in plan.pairs.iter().zip(outcomes) {
        match outcome {
            Ok((products, records)) => {
                summary.products.extend(products);
                summary.records.extend(records);
            }
            Err(e) => summary.failures.push(PairFailure {
                pair_id: pair.pair_id.clone(),
                message: e.to_string(),
            }),
        }
    }
    write_csv(&summary.csv_path, &summary.records)?;
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thread_cap_parsing() {
        assert_eq!(thread_cap(None).unwrap(), None);
        assert_eq!(thread_cap(Some("3")).unwrap(), Some(3));
        assert!(thread_cap(Some("0")).is_err());
        assert!(thread_cap(Some("-1")).is_err());
        assert!(thread_cap(Some("two")).is_err());
    }
}
