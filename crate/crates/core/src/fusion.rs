//! Pan-sharpening methods.
//!
//! [`fuse_sf`] is the segmentation fusion pipeline: the low-passed MS
//! intensity is combined with the unsharp-masked PAN, the result is matched
//! back to the statistics of the original intensity, and the untouched
//! chroma planes carry the colour through the inverse IHS transform.
//!
//! The remaining methods are the comparison set: IHS and HSV component
//! substitution, high-frequency addition (HFA), high-frequency modulation
//! (HFM), regression variable substitution (RVS) and Laplacian edge
//! fusion (EF). Every public `fuse_*` returns a quantized 8-bit product;
//! the `*_unquantized` variants expose the real-valued result.

use std::fmt;
use std::str::FromStr;

use crate::colorspace::{hsv_forward, hsv_inverse, ihs_forward, ihs_inverse, HsvPlanes};
use crate::error::{Error, Result};
use crate::filtering::{box_lpf, laplacian_hp, unsharp_mask};
use crate::raster::{
    band_stats, clamp_quantize_image, resample_nearest, BandStats, MultiBandImage, Raster,
};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FusionMethod {
    Sf,
    Ihs,
    Hsv,
    Hfa,
    Hfm,
    Rvs,
    Ef,
}

impl FusionMethod {
    pub const ALL: [FusionMethod; 7] = [
        FusionMethod::Sf,
        FusionMethod::Ihs,
        FusionMethod::Hsv,
        FusionMethod::Hfa,
        FusionMethod::Hfm,
        FusionMethod::Rvs,
        FusionMethod::Ef,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FusionMethod::Sf => "SF",
            FusionMethod::Ihs => "IHS",
            FusionMethod::Hsv => "HSV",
            FusionMethod::Hfa => "HFA",
            FusionMethod::Hfm => "HFM",
            FusionMethod::Rvs => "RVS",
            FusionMethod::Ef => "EF",
        }
    }

    /// Real-valued product for MS and PAN of equal size.
    pub fn fuse_unquantized<T: Scalar>(
        self,
        ms: &MultiBandImage<T>,
        pan: &Raster<T>,
    ) -> Result<MultiBandImage<T>> {
        match self {
            FusionMethod::Sf => fuse_sf_unquantized(ms, pan),
            FusionMethod::Ihs => fuse_ihs_unquantized(ms, pan),
            FusionMethod::Hsv => fuse_hsv_unquantized(ms, pan),
            FusionMethod::Hfa => fuse_hfa_unquantized(ms, pan),
            FusionMethod::Hfm => fuse_hfm_unquantized(ms, pan),
            FusionMethod::Rvs => fuse_rvs_unquantized(ms, pan),
            FusionMethod::Ef => fuse_ef_unquantized(ms, pan),
        }
    }
}

impl fmt::Display for FusionMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FusionMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FusionMethod::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::UnknownMethod { name: s.to_string() })
    }
}

/// Fuses with `method`, first upsampling MS to the PAN grid when sizes differ.
pub fn fuse<T: Scalar>(
    method: FusionMethod,
    ms: &MultiBandImage<T>,
    pan: &Raster<T>,
) -> Result<MultiBandImage<T>> {
    let resampled;
    let ms = if ms.dims() != pan.dims() {
        resampled = resample_nearest(ms, pan.width(), pan.height())?;
        &resampled
    } else {
        ms
    };
    Ok(clamp_quantize_image(&method.fuse_unquantized(ms, pan)?))
}

/// [`fuse`] with the method given by name, case-insensitively.
pub fn fuse_named<T: Scalar>(
    method: &str,
    ms: &MultiBandImage<T>,
    pan: &Raster<T>,
) -> Result<MultiBandImage<T>> {
    fuse(method.parse()?, ms, pan)
}

/// Mean/standard-deviation adjustment: rescales `src` so that its mean and
/// population deviation equal `target`. A flat `src` becomes the constant
/// `target.mean`.
pub fn match_mean_std<T: Scalar>(src: &Raster<T>, target: BandStats<T>) -> Raster<T> {
    let own = band_stats(src);
    if own.std < T::degenerate_eps() {
        return src.map(|_| target.mean);
    }
    let gain = target.std / own.std;
    src.map(|s| target.mean + (s - own.mean) * gain)
}

fn check_pair<T: Scalar>(ms: &MultiBandImage<T>, pan: &Raster<T>) -> Result<()> {
    if ms.dims() != pan.dims() {
        return Err(Error::DimensionMismatch {
            expected_w: pan.width(),
            expected_h: pan.height(),
            got_w: ms.width(),
            got_h: ms.height(),
        });
    }
    Ok(())
}

fn check_rgb_pair<T: Scalar>(ms: &MultiBandImage<T>, pan: &Raster<T>) -> Result<()> {
    if ms.band_count() != 3 {
        return Err(Error::UnsupportedBandCount(ms.band_count()));
    }
    check_pair(ms, pan)
}

fn per_band<T: Scalar>(
    ms: &MultiBandImage<T>,
    f: impl Fn(&Raster<T>) -> Result<Raster<T>>,
) -> Result<MultiBandImage<T>> {
    MultiBandImage::new(ms.bands().iter().map(f).collect::<Result<Vec<_>>>()?)
}

/// Fused intensity `I*_new` of the SF pipeline, before the inverse transform.
pub fn sf_intensity<T: Scalar>(intensity: &Raster<T>, pan: &Raster<T>) -> Result<Raster<T>> {
    let detail = unsharp_mask(pan);
    let combined = box_lpf(intensity).zip_map(&detail, |l, d| l + d)?;
    Ok(match_mean_std(&combined, band_stats(intensity)))
}

pub fn fuse_sf_unquantized<T: Scalar>(
    ms: &MultiBandImage<T>,
    pan: &Raster<T>,
) -> Result<MultiBandImage<T>> {
    check_rgb_pair(ms, pan)?;
    let planes = ihs_forward(ms)?;
    let fused = sf_intensity(&planes.i, pan)?;
    ihs_inverse(&planes.with_intensity(fused)?)
}

pub fn fuse_sf<T: Scalar>(ms: &MultiBandImage<T>, pan: &Raster<T>) -> Result<MultiBandImage<T>> {
    Ok(clamp_quantize_image(&fuse_sf_unquantized(ms, pan)?))
}

pub fn fuse_ihs_unquantized<T: Scalar>(
    ms: &MultiBandImage<T>,
    pan: &Raster<T>,
) -> Result<MultiBandImage<T>> {
    check_rgb_pair(ms, pan)?;
    let planes = ihs_forward(ms)?;
    let matched = match_mean_std(pan, band_stats(&planes.i));
    ihs_inverse(&planes.with_intensity(matched)?)
}

pub fn fuse_ihs<T: Scalar>(ms: &MultiBandImage<T>, pan: &Raster<T>) -> Result<MultiBandImage<T>> {
    Ok(clamp_quantize_image(&fuse_ihs_unquantized(ms, pan)?))
}

/// HSV substitution. The matched PAN is clipped to the [0, 255] value range
/// before the inverse hexcone transform.
pub fn fuse_hsv_unquantized<T: Scalar>(
    ms: &MultiBandImage<T>,
    pan: &Raster<T>,
) -> Result<MultiBandImage<T>> {
    check_rgb_pair(ms, pan)?;
    let planes = hsv_forward(ms)?;
    let matched = match_mean_std(pan, band_stats(&planes.v)).map(|v| v.max(T::zero()).min(T::dn_max()));
    hsv_inverse(&HsvPlanes::new(planes.h, planes.s, matched)?)
}

pub fn fuse_hsv<T: Scalar>(ms: &MultiBandImage<T>, pan: &Raster<T>) -> Result<MultiBandImage<T>> {
    Ok(clamp_quantize_image(&fuse_hsv_unquantized(ms, pan)?))
}

/// `F_k = M_k + (pan − box_lpf(pan))`.
pub fn fuse_hfa_unquantized<T: Scalar>(
    ms: &MultiBandImage<T>,
    pan: &Raster<T>,
) -> Result<MultiBandImage<T>> {
    check_pair(ms, pan)?;
    let detail = unsharp_mask(pan);
    per_band(ms, |band| band.zip_map(&detail, |m, d| m + d))
}

pub fn fuse_hfa<T: Scalar>(ms: &MultiBandImage<T>, pan: &Raster<T>) -> Result<MultiBandImage<T>> {
    Ok(clamp_quantize_image(&fuse_hfa_unquantized(ms, pan)?))
}

/// `F_k = M_k · pan / box_lpf(pan)`; pixels whose low-pass value is below
/// 1e-9 keep `M_k`.
pub fn fuse_hfm_unquantized<T: Scalar>(
    ms: &MultiBandImage<T>,
    pan: &Raster<T>,
) -> Result<MultiBandImage<T>> {
    check_pair(ms, pan)?;
    let low = box_lpf(pan);
    let ratio = pan.zip_map(&low, |p, l| {
        if l < T::degenerate_eps() {
            T::one()
        } else {
            p / l
        }
    })?;
    per_band(ms, |band| band.zip_map(&ratio, |m, q| m * q))
}

pub fn fuse_hfm<T: Scalar>(ms: &MultiBandImage<T>, pan: &Raster<T>) -> Result<MultiBandImage<T>> {
    Ok(clamp_quantize_image(&fuse_hfm_unquantized(ms, pan)?))
}

/// Ordinary least-squares line `response ≈ intercept + slope · predictor`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegressionFit<T> {
    pub slope: T,
    pub intercept: T,
}

impl<T: Scalar> RegressionFit<T> {
    /// Fits `response` against `predictor` over all pixels. A flat predictor
    /// yields slope 0 and the response mean as intercept.
    pub fn fit(predictor: &Raster<T>, response: &Raster<T>) -> Result<Self> {
        let px = band_stats(predictor);
        let ry = band_stats(response);
        if px.std < T::degenerate_eps() {
            return Ok(Self {
                slope: T::zero(),
                intercept: ry.mean,
            });
        }
        let cov = predictor
            .zip_map(response, |x, y| (x - px.mean) * (y - ry.mean))?
            .samples()
            .iter()
            .copied()
            .sum::<T>()
            / T::count(predictor.len());
        let slope = cov / (px.std * px.std);
        Ok(Self {
            slope,
            intercept: ry.mean - slope * px.mean,
        })
    }

    pub fn predict(&self, predictor: &Raster<T>) -> Raster<T> {
        if self.slope == T::zero() {
            return predictor.map(|_| self.intercept);
        }
        predictor.map(|x| self.intercept + self.slope * x)
    }
}

/// Per band, the least-squares prediction of `M_k` from PAN.
pub fn fuse_rvs_unquantized<T: Scalar>(
    ms: &MultiBandImage<T>,
    pan: &Raster<T>,
) -> Result<MultiBandImage<T>> {
    check_pair(ms, pan)?;
    per_band(ms, |band| Ok(RegressionFit::fit(pan, band)?.predict(pan)))
}

pub fn fuse_rvs<T: Scalar>(ms: &MultiBandImage<T>, pan: &Raster<T>) -> Result<MultiBandImage<T>> {
    Ok(clamp_quantize_image(&fuse_rvs_unquantized(ms, pan)?))
}

/// `F_k = M_k + laplacian_hp(pan)`.
pub fn fuse_ef_unquantized<T: Scalar>(
    ms: &MultiBandImage<T>,
    pan: &Raster<T>,
) -> Result<MultiBandImage<T>> {
    check_pair(ms, pan)?;
    let edges = laplacian_hp(pan);
    per_band(ms, |band| band.zip_map(&edges, |m, e| m + e))
}

pub fn fuse_ef<T: Scalar>(ms: &MultiBandImage<T>, pan: &Raster<T>) -> Result<MultiBandImage<T>> {
    Ok(clamp_quantize_image(&fuse_ef_unquantized(ms, pan)?))
}
