//! Single-band rasters, co-registered band stacks and the per-band
//! statistics, quantization and resampling used throughout the pipeline.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Single-band grid of real-valued digital numbers, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Raster<T> {
    width: usize,
    height: usize,
    samples: Vec<T>,
}

impl<T: Scalar> Raster<T> {
    /// Builds a raster, checking dimensions, sample count and finiteness.
    pub fn new(width: usize, height: usize, samples: Vec<T>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidRaster(format!(
                "dimensions must be positive, got {width}x{height}"
            )));
        }
        if samples.len() != width * height {
            return Err(Error::InvalidRaster(format!(
                "expected {} samples for {width}x{height}, got {}",
                width * height,
                samples.len()
            )));
        }
        if let Some(pos) = samples.iter().position(|s| !s.is_finite()) {
            return Err(Error::InvalidRaster(format!(
                "non-finite sample at index {pos}"
            )));
        }
        Ok(Self {
            width,
            height,
            samples,
        })
    }

    /// Raster with every sample set to `value`.
    ///
    /// Panics if either dimension is zero or `value` is not finite.
    pub fn filled(width: usize, height: usize, value: T) -> Self {
        Self::new(width, height, vec![value; width * height]).expect("valid constant raster")
    }

    /// Raster whose sample at `(row, col)` is `f(row, col)`.
    ///
    /// Panics if either dimension is zero or `f` yields a non-finite value.
    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut samples = Vec::with_capacity(width * height);
        for row in 0..height {
            for col in 0..width {
                samples.push(f(row, col));
            }
        }
        Self::new(width, height, samples).expect("valid generated raster")
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    /// Always false; a raster has at least one sample.
    #[inline]
    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    #[inline]
    pub fn samples(&self) -> &[T] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<T> {
        self.samples
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> T {
        self.samples[row * self.width + col]
    }

    /// Sample at a possibly out-of-range position, clamped to the border.
    #[inline]
    pub(crate) fn get_clamped(&self, row: isize, col: isize) -> T {
        let r = row.clamp(0, self.height as isize - 1) as usize;
        let c = col.clamp(0, self.width as isize - 1) as usize;
        self.samples[r * self.width + c]
    }

    /// Applies `f` to every sample. Non-finite results are a bug in the caller.
    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        Self {
            width: self.width,
            height: self.height,
            samples: self.samples.iter().map(|&s| f(s)).collect(),
        }
    }

    /// Pixelwise combination of two rasters of equal dimensions.
    pub fn zip_map(&self, other: &Self, f: impl Fn(T, T) -> T) -> Result<Self> {
        ensure_same_dims(self, other)?;
        Ok(Self {
            width: self.width,
            height: self.height,
            samples: self
                .samples
                .iter()
                .zip(&other.samples)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    /// Converts the sample type.
    pub fn cast<U: Scalar>(&self) -> Raster<U> {
        Raster {
            width: self.width,
            height: self.height,
            samples: self
                .samples
                .iter()
                .map(|s| U::lit(s.to_f64_lossy()))
                .collect(),
        }
    }

    pub fn min_max(&self) -> (T, T) {
        self.samples.iter().fold(
            (T::infinity(), T::neg_infinity()),
            |(lo, hi), &s| (lo.min(s), hi.max(s)),
        )
    }
}

pub(crate) fn ensure_same_dims<T>(a: &Raster<T>, b: &Raster<T>) -> Result<()> {
    if a.width != b.width || a.height != b.height {
        return Err(Error::DimensionMismatch {
            expected_w: a.width,
            expected_h: a.height,
            got_w: b.width,
            got_h: b.height,
        });
    }
    Ok(())
}

/// Ordered stack of co-registered bands sharing one size.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiBandImage<T> {
    bands: Vec<Raster<T>>,
}

impl<T: Scalar> MultiBandImage<T> {
    pub fn new(bands: Vec<Raster<T>>) -> Result<Self> {
        let first = bands
            .first()
            .ok_or_else(|| Error::InvalidRaster("image needs at least one band".into()))?;
        for band in &bands[1..] {
            ensure_same_dims(first, band)?;
        }
        Ok(Self { bands })
    }

    /// Three-band image from red, green and blue planes.
    pub fn from_rgb(r: Raster<T>, g: Raster<T>, b: Raster<T>) -> Result<Self> {
        Self::new(vec![r, g, b])
    }

    #[inline]
    pub fn bands(&self) -> &[Raster<T>] {
        &self.bands
    }

    pub fn into_bands(self) -> Vec<Raster<T>> {
        self.bands
    }

    #[inline]
    pub fn band(&self, k: usize) -> &Raster<T> {
        &self.bands[k]
    }

    #[inline]
    pub fn band_count(&self) -> usize {
        self.bands.len()
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.bands[0].width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.bands[0].height
    }

    #[inline]
    pub fn dims(&self) -> (usize, usize) {
        self.bands[0].dims()
    }

    /// Returns the three bands, or an error naming the actual band count.
    pub fn rgb(&self) -> Result<(&Raster<T>, &Raster<T>, &Raster<T>)> {
        match self.bands.as_slice() {
            [r, g, b] => Ok((r, g, b)),
            other => Err(Error::UnsupportedBandCount(other.len())),
        }
    }

    pub fn map_bands(&self, f: impl Fn(&Raster<T>) -> Raster<T>) -> Self {
        Self {
            bands: self.bands.iter().map(f).collect(),
        }
    }

    pub fn cast<U: Scalar>(&self) -> MultiBandImage<U> {
        MultiBandImage {
            bands: self.bands.iter().map(Raster::cast).collect(),
        }
    }
}

/// Mean and population standard deviation of one band.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandStats<T> {
    pub mean: T,
    pub std: T,
}

impl<T: Scalar> BandStats<T> {
    pub fn new(mean: T, std: T) -> Self {
        Self { mean, std }
    }
}

/// Mean and population standard deviation (divisor n·m).
///
/// Sums are taken relative to the first sample, so a constant raster yields
/// its constant as the mean and an exact zero deviation.
pub fn band_stats<T: Scalar>(r: &Raster<T>) -> BandStats<T> {
    let n = T::count(r.len());
    let pivot = r.samples[0];
    let offset = r.samples.iter().map(|&s| s - pivot).sum::<T>() / n;
    let mean = pivot + offset;
    let var = r
        .samples
        .iter()
        .map(|&s| {
            let d = s - pivot - offset;
            d * d
        })
        .sum::<T>()
        / n;
    BandStats {
        mean,
        std: var.sqrt(),
    }
}

/// Round half up: 127.5 becomes 128, -0.5 becomes 0.
#[inline]
pub fn round_half_up<T: Scalar>(v: T) -> T {
    (v + T::lit(0.5)).floor()
}

/// Clamps every sample to [0, 255] and rounds half up.
pub fn clamp_quantize<T: Scalar>(r: &Raster<T>) -> Raster<T> {
    r.map(quantize_sample)
}

#[inline]
pub(crate) fn quantize_sample<T: Scalar>(s: T) -> T {
    round_half_up(s.max(T::zero()).min(T::dn_max()))
}

/// Band-wise [`clamp_quantize`].
pub fn clamp_quantize_image<T: Scalar>(img: &MultiBandImage<T>) -> MultiBandImage<T> {
    img.map_bands(clamp_quantize)
}

/// Nearest-neighbour upsampling of one band.
///
/// Output sample `(i, j)` copies source sample
/// `(floor(i * h / target_h), floor(j * w / target_w))`.
pub fn resample_raster_nearest<T: Scalar>(
    r: &Raster<T>,
    target_w: usize,
    target_h: usize,
) -> Result<Raster<T>> {
    check_targets(r.width, r.height, target_w, target_h)?;
    let col_map: Vec<usize> = (0..target_w).map(|j| j * r.width / target_w).collect();
    let mut samples = Vec::with_capacity(target_w * target_h);
    for i in 0..target_h {
        let src_row = i * r.height / target_h;
        let row = &r.samples[src_row * r.width..(src_row + 1) * r.width];
        samples.extend(col_map.iter().map(|&c| row[c]));
    }
    Ok(Raster {
        width: target_w,
        height: target_h,
        samples,
    })
}

/// Nearest-neighbour upsampling of every band to `target_w` × `target_h`.
pub fn resample_nearest<T: Scalar>(
    ms: &MultiBandImage<T>,
    target_w: usize,
    target_h: usize,
) -> Result<MultiBandImage<T>> {
    let bands = ms
        .bands
        .iter()
        .map(|b| resample_raster_nearest(b, target_w, target_h))
        .collect::<Result<Vec<_>>>()?;
    Ok(MultiBandImage { bands })
}

fn check_targets(w: usize, h: usize, target_w: usize, target_h: usize) -> Result<()> {
    if target_w == 0 || target_h == 0 {
        return Err(Error::InvalidParameter(format!(
            "zero target dimension {target_w}x{target_h}"
        )));
    }
    if target_w < w || target_h < h {
        return Err(Error::InvalidParameter(format!(
            "target {target_w}x{target_h} is smaller than source {w}x{h}"
        )));
    }
    Ok(())
}

/// Sensor characteristics of one MS/PAN test pair, used to label reports.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SensorPairMeta {
    pub pair_id: String,
    pub ms_sensor: Option<String>,
    pub pan_sensor: Option<String>,
    pub ms_resolution_m: Option<f64>,
    pub pan_resolution_m: Option<f64>,
    pub location: Option<String>,
    pub spectral_ranges: Vec<String>,
}

impl SensorPairMeta {
    /// MS must be the coarser image when both resolutions are known.
    pub fn validate(&self) -> Result<()> {
        if let (Some(ms), Some(pan)) = (self.ms_resolution_m, self.pan_resolution_m) {
            if ms.is_nan() || pan.is_nan() || ms < pan {
                return Err(Error::InvalidParameter(format!(
                    "pair {}: MS resolution {ms} m is finer than PAN resolution {pan} m",
                    self.pair_id
                )));
            }
        }
        Ok(())
    }

    /// Short label such as `IKONOS-2 MS / IKONOS-2 PAN (4/1 m)`.
    pub fn label(&self) -> String {
        let mut label = match (&self.ms_sensor, &self.pan_sensor) {
            (Some(ms), Some(pan)) => format!("{ms} / {pan}"),
            (Some(s), None) | (None, Some(s)) => s.clone(),
            (None, None) => self.pair_id.clone(),
        };
        if let (Some(ms), Some(pan)) = (self.ms_resolution_m, self.pan_resolution_m) {
            label.push_str(&format!(" ({ms}/{pan} m)"));
        }
        label
    }
}
