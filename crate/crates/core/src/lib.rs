//! Pan-sharpening of multispectral imagery with a panchromatic band.
//!
//! The crate provides the segmentation fusion (SF) method, six comparison
//! methods (IHS, HSV, HFA, HFM, RVS, EF), spectral and spatial quality
//! metrics, PGM/PPM I/O and a seeded synthetic-pair generator.
//!
//! All image math is generic over [`Scalar`] (`f32` or `f64`). The aliases
//! below fix the sample type for the common cases.

pub mod colorspace;
pub mod error;
pub mod filtering;
pub mod fusion;
pub mod metrics;
pub mod pnm;
pub mod raster;
pub mod scalar;
pub mod synthetic;

pub use error::{Error, Result};
pub use fusion::{fuse, fuse_named, FusionMethod, RegressionFit};
pub use metrics::{evaluate_all, BandLabel, EvalOptions, MetricKind, MetricRecord};
pub use raster::{BandStats, MultiBandImage, Raster, SensorPairMeta};
pub use scalar::Scalar;
pub use synthetic::{SyntheticPair, SyntheticSpec};

pub type RasterF64 = Raster<f64>;
pub type RasterF32 = Raster<f32>;
pub type MultiBandImageF64 = MultiBandImage<f64>;
pub type MultiBandImageF32 = MultiBandImage<f32>;
pub type BandStatsF64 = BandStats<f64>;
pub type BandStatsF32 = BandStats<f32>;
