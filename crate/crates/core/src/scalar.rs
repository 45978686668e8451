//! Sample type abstraction.
//!
//! Every raster, filter and metric in the crate is written against [`Scalar`],
//! which is implemented for `f32` and `f64`.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Real sample type: f32 or f64.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` constant into the sample type.
    #[inline]
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("f64 literal must be representable")
    }

    /// Converts a count (pixels, bands) into the sample type.
    #[inline]
    fn count(n: usize) -> Self {
        Self::from_usize(n).expect("count must be representable")
    }

    /// Lossy widening to `f64`, used for reporting.
    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Upper end of the 8-bit DN range.
    #[inline]
    fn dn_max() -> Self {
        Self::lit(255.0)
    }

    /// Threshold below which a standard deviation or a low-pass denominator
    /// is treated as zero.
    #[inline]
    fn degenerate_eps() -> Self {
        Self::lit(1e-9)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
