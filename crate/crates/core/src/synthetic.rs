//! Seeded synthetic MS/PAN pairs with a known full-resolution reference.
//!
//! A smoothed random RGB reference is degraded two ways: PAN keeps full
//! resolution but only the intensity, MS keeps colour but is block-averaged
//! by the scale factor and then upsampled back by nearest neighbour.

use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::filtering::box_lpf;
use crate::pnm::{save_gray, save_pnm};
use crate::raster::{clamp_quantize, resample_nearest, MultiBandImage, Raster};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SyntheticSpec {
    pub seed: u64,
    pub width: usize,
    pub height: usize,
    /// MS degradation ratio, at least 2.
    pub scale_factor: usize,
    pub smoothing_passes: usize,
}

impl SyntheticSpec {
    pub fn validate(&self) -> Result<()> {
        if self.scale_factor < 2 {
            return Err(Error::InvalidParameter(format!(
                "scale factor must be at least 2, got {}",
                self.scale_factor
            )));
        }
        if self.width == 0 || self.height == 0 {
            return Err(Error::InvalidParameter("zero synthetic dimension".into()));
        }
        if !self.width.is_multiple_of(self.scale_factor) || !self.height.is_multiple_of(self.scale_factor) {
            return Err(Error::InvalidParameter(format!(
                "{}x{} is not divisible by scale factor {}",
                self.width, self.height, self.scale_factor
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticPair<T> {
    /// Full-resolution RGB ground truth.
    pub reference: MultiBandImage<T>,
    /// Block-averaged MS, already upsampled to the PAN grid.
    pub ms: MultiBandImage<T>,
    /// Coarse MS before upsampling.
    pub ms_coarse: MultiBandImage<T>,
    pub pan: Raster<T>,
}

/// Mean of each `factor`×`factor` block, quantized.
pub fn block_average<T: Scalar>(r: &Raster<T>, factor: usize) -> Raster<T> {
    let (w, h) = (r.width() / factor, r.height() / factor);
    let area = T::count(factor * factor);
    clamp_quantize(&Raster::from_fn(w, h, |i, j| {
        let mut acc = T::zero();
        for di in 0..factor {
            for dj in 0..factor {
                acc = acc + r.get(i * factor + di, j * factor + dj);
            }
        }
        acc / area
    }))
}

pub fn generate<T: Scalar>(spec: &SyntheticSpec) -> Result<SyntheticPair<T>> {
    spec.validate()?;
    let (w, h) = (spec.width, spec.height);
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let bands = (0..3)
        .map(|_| {
            let mut band = Raster::from_fn(w, h, |_, _| T::lit(rng.gen_range(0.0..255.0)));
            for _ in 0..spec.smoothing_passes {
                band = box_lpf(&band);
            }
            clamp_quantize(&band)
        })
        .collect();
    let reference = MultiBandImage::new(bands)?;
    let (r, g, b) = reference.rgb()?;
    let three = T::lit(3.0);
    let pan = clamp_quantize(&Raster::from_fn(w, h, |i, j| {
        (r.get(i, j) + g.get(i, j) + b.get(i, j)) / three
    }));
    let ms_coarse = reference.map_bands(|band| block_average(band, spec.scale_factor));
    let ms = resample_nearest(&ms_coarse, w, h)?;
    Ok(SyntheticPair {
        reference,
        ms,
        ms_coarse,
        pan,
    })
}

/// Paths written by [`write_synthetic`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyntheticPaths {
    pub ms: PathBuf,
    pub pan: PathBuf,
    pub reference: PathBuf,
}

/// Generates a pair and writes `ms.ppm`, `pan.pgm` and `reference.ppm`
/// into `dir`, creating it if needed.
pub fn write_synthetic(spec: &SyntheticSpec, dir: impl AsRef<Path>) -> Result<SyntheticPaths> {
    let pair = generate::<f64>(spec)?;
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir)?;
    let paths = SyntheticPaths {
        ms: dir.join("ms.ppm"),
        pan: dir.join("pan.pgm"),
        reference: dir.join("reference.ppm"),
    };
    save_pnm(&pair.ms, &paths.ms)?;
    save_gray(&pair.pan, &paths.pan)?;
    save_pnm(&pair.reference, &paths.reference)?;
    Ok(paths)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pnm::{load_gray, load_rgb};
    use std::collections::BTreeSet;

    fn spec(seed: u64, size: usize, scale: usize, passes: usize) -> SyntheticSpec {
        SyntheticSpec {
            seed,
            width: size,
            height: size,
            scale_factor: scale,
            smoothing_passes: passes,
        }
    }

    #[test]
    fn validation() {
        assert!(spec(1, 10, 4, 0).validate().is_err());
        assert!(spec(1, 8, 1, 0).validate().is_err());
        assert!(spec(1, 8, 4, 0).validate().is_ok());
    }

    #[test]
    fn deterministic_files() {
        let a = tempfile::tempdir().unwrap();
        let b = tempfile::tempdir().unwrap();
        let s = spec(5, 16, 4, 1);
        let pa = write_synthetic(&s, a.path()).unwrap();
        let pb = write_synthetic(&s, b.path()).unwrap();
        for (x, y) in [(pa.ms, pb.ms), (pa.pan, pb.pan), (pa.reference, pb.reference)] {
            assert_eq!(std::fs::read(x).unwrap(), std::fs::read(y).unwrap());
        }
        assert_ne!(generate::<f64>(&spec(6, 16, 4, 1)).unwrap(), generate(&s).unwrap());
    }

    #[test]
    fn block_structure() {
        let p = generate::<f64>(&spec(2, 4, 2, 0)).unwrap();
        for band in p.ms.bands() {
            let distinct: BTreeSet<u64> = band.samples().iter().map(|v| v.to_bits()).collect();
            assert!(distinct.len() <= 4);
        }
        assert_eq!(p.ms_coarse.dims(), (2, 2));
    }

    #[test]
    fn pan_is_reference_intensity() {
        let dir = tempfile::tempdir().unwrap();
        let s = spec(1, 64, 4, 3);
        let paths = write_synthetic(&s, dir.path()).unwrap();
        let reference = load_rgb::<f64>(&paths.reference).unwrap();
        let pan = load_gray::<f64>(&paths.pan).unwrap();
        let ms = load_rgb::<f64>(&paths.ms).unwrap();
        assert_eq!((pan.dims(), ms.dims()), ((64, 64), (64, 64)));
        for i in 0..64 {
            for j in 0..64 {
                let sum: f64 = (0..3).map(|k| reference.band(k).get(i, j)).sum();
                assert_eq!(pan.get(i, j), (sum / 3.0 + 0.5).floor());
                for k in 0..3 {
                    let (bi, bj) = (i / 4 * 4, j / 4 * 4);
                    let mut acc = 0.0;
                    for di in 0..4 {
                        for dj in 0..4 {
                            acc += reference.band(k).get(bi + di, bj + dj);
                        }
                    }
                    assert_eq!(ms.band(k).get(i, j), (acc / 16.0 + 0.5).floor());
                }
            }
        }
    }
}
