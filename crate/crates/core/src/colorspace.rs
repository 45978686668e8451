//! Intensity/chroma separation of RGB triples.
//!
//! The IHS model is the linear triangular one:
//!
//! ```text
//! I  = (R + G + B) / 3
//! v1 = (−R − G + 2B) / √6
//! v2 = (R − G) / √2
//! ```
//!
//! Hue and saturation are carried as the Cartesian pair `(v1, v2)`; the
//! polar views are [`IhsPlanes::hue`] and [`IhsPlanes::saturation`].
//! HSV uses the hexcone model with V kept on the DN scale.

use crate::error::{Error, Result};
use crate::raster::{ensure_same_dims, MultiBandImage, Raster};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct IhsPlanes<T> {
    pub i: Raster<T>,
    pub v1: Raster<T>,
    pub v2: Raster<T>,
}

impl<T: Scalar> IhsPlanes<T> {
    pub fn new(i: Raster<T>, v1: Raster<T>, v2: Raster<T>) -> Result<Self> {
        ensure_same_dims(&i, &v1)?;
        ensure_same_dims(&i, &v2)?;
        Ok(Self { i, v1, v2 })
    }

    /// Hue angle `atan2(v2, v1)` in radians.
    pub fn hue(&self) -> Raster<T> {
        self.v2.zip_map(&self.v1, |y, x| y.atan2(x)).expect("same dims")
    }

    /// Saturation `sqrt(v1² + v2²)`.
    pub fn saturation(&self) -> Raster<T> {
        self.v1.zip_map(&self.v2, |x, y| x.hypot(y)).expect("same dims")
    }

    /// Same chroma with a different intensity plane.
    pub fn with_intensity(&self, i: Raster<T>) -> Result<Self> {
        Self::new(i, self.v1.clone(), self.v2.clone())
    }
}

fn sqrt6<T: Scalar>() -> T {
    T::lit(6.0).sqrt()
}

fn sqrt2<T: Scalar>() -> T {
    T::lit(2.0).sqrt()
}

/// Forward IHS matrix; rows produce `I`, `v1`, `v2` from `(R, G, B)`.
pub fn ihs_forward_matrix<T: Scalar>() -> [[T; 3]; 3] {
    let third = T::one() / T::lit(3.0);
    let (s6, s2) = (sqrt6::<T>(), sqrt2::<T>());
    [
        [third, third, third],
        [-T::one() / s6, -T::one() / s6, T::lit(2.0) / s6],
        [T::one() / s2, -T::one() / s2, T::zero()],
    ]
}

/// Inverse IHS matrix; rows produce `R`, `G`, `B` from `(I, v1, v2)`.
pub fn ihs_inverse_matrix<T: Scalar>() -> [[T; 3]; 3] {
    let (s6, s2) = (sqrt6::<T>(), sqrt2::<T>());
    [
        [T::one(), -T::one() / s6, T::one() / s2],
        [T::one(), -T::one() / s6, -T::one() / s2],
        [T::one(), T::lit(2.0) / s6, T::zero()],
    ]
}

pub fn ihs_forward<T: Scalar>(rgb: &MultiBandImage<T>) -> Result<IhsPlanes<T>> {
    let (r, g, b) = rgb.rgb()?;
    let (s6, s2) = (sqrt6::<T>(), sqrt2::<T>());
    let three = T::lit(3.0);
    let two = T::lit(2.0);
    let (w, h) = rgb.dims();
    let n = w * h;
    let (mut i, mut v1, mut v2) = (
        Vec::with_capacity(n),
        Vec::with_capacity(n),
        Vec::with_capacity(n),
    );
    for ((&rr, &gg), &bb) in r.samples().iter().zip(g.samples()).zip(b.samples()) {
        i.push((rr + gg + bb) / three);
        v1.push((two * bb - rr - gg) / s6);
        v2.push((rr - gg) / s2);
    }
    Ok(IhsPlanes {
        i: Raster::new(w, h, i)?,
        v1: Raster::new(w, h, v1)?,
        v2: Raster::new(w, h, v2)?,
    })
}

/// Inverse IHS; the result is not clamped.
pub fn ihs_inverse<T: Scalar>(planes: &IhsPlanes<T>) -> Result<MultiBandImage<T>> {
    ensure_same_dims(&planes.i, &planes.v1)?;
    ensure_same_dims(&planes.i, &planes.v2)?;
    let (s6, s2) = (sqrt6::<T>(), sqrt2::<T>());
    let two = T::lit(2.0);
    let (w, h) = planes.i.dims();
    let n = w * h;
    let (mut r, mut g, mut b) = (
        Vec::with_capacity(n),
        Vec::with_capacity(n),
        Vec::with_capacity(n),
    );
    for ((&i, &x), &y) in planes
        .i
        .samples()
        .iter()
        .zip(planes.v1.samples())
        .zip(planes.v2.samples())
    {
        let a = x / s6;
        let c = y / s2;
        r.push(i - a + c);
        g.push(i - a - c);
        b.push(i + two * a);
    }
    MultiBandImage::from_rgb(
        Raster::new(w, h, r)?,
        Raster::new(w, h, g)?,
        Raster::new(w, h, b)?,
    )
}

/// Hexcone HSV planes: hue in degrees [0, 360), saturation in [0, 1],
/// value on the DN scale [0, 255].
#[derive(Debug, Clone, PartialEq)]
pub struct HsvPlanes<T> {
    pub h: Raster<T>,
    pub s: Raster<T>,
    pub v: Raster<T>,
}

impl<T: Scalar> HsvPlanes<T> {
    pub fn new(h: Raster<T>, s: Raster<T>, v: Raster<T>) -> Result<Self> {
        ensure_same_dims(&h, &s)?;
        ensure_same_dims(&h, &v)?;
        Ok(Self { h, s, v })
    }
}

/// Per-pixel hexcone conversion. Hue is 0 wherever saturation is 0.
pub fn rgb_to_hsv<T: Scalar>(r: T, g: T, b: T) -> (T, T, T) {
    let max = r.max(g).max(b);
    let min = r.min(g).min(b);
    let delta = max - min;
    let s = if max > T::zero() { delta / max } else { T::zero() };
    if delta <= T::zero() {
        return (T::zero(), s, max);
    }
    let sixty = T::lit(60.0);
    let mut h = if max == r {
        sixty * ((g - b) / delta)
    } else if max == g {
        sixty * ((b - r) / delta + T::lit(2.0))
    } else {
        sixty * ((r - g) / delta + T::lit(4.0))
    };
    let full = T::lit(360.0);
    if h < T::zero() {
        h = h + full;
    }
    if h >= full {
        h = h - full;
    }
    (h, s, max)
}

/// Inverse of [`rgb_to_hsv`].
pub fn hsv_to_rgb<T: Scalar>(h: T, s: T, v: T) -> (T, T, T) {
    let c = v * s;
    let six = T::lit(6.0);
    let mut sector = (h / T::lit(60.0)) % six;
    if sector < T::zero() {
        sector = sector + six;
    }
    let x = c * (T::one() - ((sector % T::lit(2.0)) - T::one()).abs());
    let m = v - c;
    let z = T::zero();
    let (r, g, b) = match sector.floor().to_u8().unwrap_or(0) {
        0 => (c, x, z),
        1 => (x, c, z),
        2 => (z, c, x),
        3 => (z, x, c),
        4 => (x, z, c),
        _ => (c, z, x),
    };
    (r + m, g + m, b + m)
}

pub fn hsv_forward<T: Scalar>(rgb: &MultiBandImage<T>) -> Result<HsvPlanes<T>> {
    let (r, g, b) = rgb.rgb()?;
    let (w, h) = rgb.dims();
    let n = w * h;
    let (mut hh, mut ss, mut vv) = (
        Vec::with_capacity(n),
        Vec::with_capacity(n),
        Vec::with_capacity(n),
    );
    for ((&rr, &gg), &bb) in r.samples().iter().zip(g.samples()).zip(b.samples()) {
        let (h, s, v) = rgb_to_hsv(rr, gg, bb);
        hh.push(h);
        ss.push(s);
        vv.push(v);
    }
    Ok(HsvPlanes {
        h: Raster::new(w, h, hh)?,
        s: Raster::new(w, h, ss)?,
        v: Raster::new(w, h, vv)?,
    })
}

/// Inverse hexcone transform; rejects saturation outside [0, 1] and value
/// outside [0, 255].
pub fn hsv_inverse<T: Scalar>(planes: &HsvPlanes<T>) -> Result<MultiBandImage<T>> {
    ensure_same_dims(&planes.h, &planes.s)?;
    ensure_same_dims(&planes.h, &planes.v)?;
    let (w, h) = planes.h.dims();
    let n = w * h;
    let (mut r, mut g, mut b) = (
        Vec::with_capacity(n),
        Vec::with_capacity(n),
        Vec::with_capacity(n),
    );
    for (idx, ((&hh, &ss), &vv)) in planes
        .h
        .samples()
        .iter()
        .zip(planes.s.samples())
        .zip(planes.v.samples())
        .enumerate()
    {
        if ss < T::zero() || ss > T::one() {
            return Err(Error::InvalidParameter(format!(
                "saturation {ss} out of [0, 1] at pixel {idx}"
            )));
        }
        if vv < T::zero() || vv > T::dn_max() {
            return Err(Error::InvalidParameter(format!(
                "value {vv} out of [0, 255] at pixel {idx}"
            )));
        }
        let (rr, gg, bb) = hsv_to_rgb(hh, ss, vv);
        r.push(rr);
        g.push(gg);
        b.push(bb);
    }
    MultiBandImage::from_rgb(
        Raster::new(w, h, r)?,
        Raster::new(w, h, g)?,
        Raster::new(w, h, b)?,
    )
}
