//! 3×3 convolution with clamp-to-border edges, plus the box low-pass,
//! unsharp mask and Laplacian high-pass built on it.
//!
//! Every filter in the crate goes through [`convolve3x3`] so kernel and edge
//! handling agree between fusion and the spatial metrics.

use crate::raster::Raster;
use crate::scalar::Scalar;

/// 3×3 kernel stored as integer-valued taps and a common divisor.
///
/// Keeping the taps integral lets the box filter sum nine neighbours before a
/// single division, so constant images pass through exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kernel3x3<T> {
    taps: [[T; 3]; 3],
    divisor: T,
}

impl<T: Scalar> Kernel3x3<T> {
    /// Kernel with effective weights `taps / divisor`. Panics on non-finite
    /// taps or a zero divisor.
    pub fn new(taps: [[T; 3]; 3], divisor: T) -> Self {
        assert!(
            taps.iter().flatten().all(|t| t.is_finite()),
            "kernel taps must be finite"
        );
        assert!(
            divisor.is_finite() && divisor != T::zero(),
            "kernel divisor must be finite and non-zero"
        );
        Self { taps, divisor }
    }

    /// Uniform 3×3 average, every weight 1/9.
    pub fn box_filter() -> Self {
        Self::new([[T::one(); 3]; 3], T::lit(9.0))
    }

    /// 8-connected Laplacian: centre 8, all neighbours −1.
    pub fn laplacian() -> Self {
        let m = -T::one();
        Self::new([[m, m, m], [m, T::lit(8.0), m], [m, m, m]], T::one())
    }

    /// Effective weight at offset `(du, dv)`, each in −1..=1.
    pub fn weight(&self, du: isize, dv: isize) -> T {
        self.taps[(du + 1) as usize][(dv + 1) as usize] / self.divisor
    }
}

/// Convolves with replicate padding; the output keeps full precision.
pub fn convolve3x3<T: Scalar>(r: &Raster<T>, k: &Kernel3x3<T>) -> Raster<T> {
    let (w, h) = r.dims();
    let mut out = Vec::with_capacity(w * h);
    for i in 0..h as isize {
        for j in 0..w as isize {
            let mut acc = T::zero();
            for (du, row) in k.taps.iter().enumerate() {
                for (dv, &tap) in row.iter().enumerate() {
                    acc = acc + tap * r.get_clamped(i + du as isize - 1, j + dv as isize - 1);
                }
            }
            out.push(acc / k.divisor);
        }
    }
    Raster::new(w, h, out).expect("convolution preserves shape")
}

/// Local 3×3 average.
pub fn box_lpf<T: Scalar>(r: &Raster<T>) -> Raster<T> {
    convolve3x3(r, &Kernel3x3::box_filter())
}

/// High-frequency detail `r − box_lpf(r)`.
pub fn unsharp_mask<T: Scalar>(r: &Raster<T>) -> Raster<T> {
    let low = box_lpf(r);
    r.zip_map(&low, |s, l| s - l).expect("same dims")
}

pub fn laplacian_hp<T: Scalar>(r: &Raster<T>) -> Raster<T> {
    convolve3x3(r, &Kernel3x3::laplacian())
}
