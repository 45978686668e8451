//! Netpbm grayscale (PGM) and colour (PPM) images.
//!
//! Reads ASCII (P2/P3) and binary (P5/P6) files with any maxval up to 65535,
//! rescaling samples to the 0..=255 DN range. Writes binary P5/P6 at maxval 255.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::raster::{clamp_quantize, MultiBandImage, Raster};
use crate::scalar::Scalar;

/// A decoded PNM file.
#[derive(Debug, Clone, PartialEq)]
pub enum PnmImage<T> {
    /// PGM: one band.
    Gray(Raster<T>),
    /// PPM: three bands.
    Rgb(MultiBandImage<T>),
}

impl<T: Scalar> PnmImage<T> {
    /// View as a band stack (one band for PGM).
    pub fn into_multiband(self) -> MultiBandImage<T> {
        match self {
            PnmImage::Gray(r) => MultiBandImage::new(vec![r]).expect("single band"),
            PnmImage::Rgb(img) => img,
        }
    }

    pub fn band_count(&self) -> usize {
        match self {
            PnmImage::Gray(_) => 1,
            PnmImage::Rgb(_) => 3,
        }
    }
}

pub fn load_pnm<T: Scalar>(path: impl AsRef<Path>) -> Result<PnmImage<T>> {
    let bytes = fs::read(path)?;
    decode_pnm(&bytes)
}

/// Loads a PPM and returns its three bands.
pub fn load_rgb<T: Scalar>(path: impl AsRef<Path>) -> Result<MultiBandImage<T>> {
    match load_pnm(path)? {
        PnmImage::Rgb(img) => Ok(img),
        PnmImage::Gray(_) => Err(Error::UnsupportedBandCount(1)),
    }
}

/// Loads a PGM and returns its single band.
pub fn load_gray<T: Scalar>(path: impl AsRef<Path>) -> Result<Raster<T>> {
    match load_pnm(path)? {
        PnmImage::Gray(r) => Ok(r),
        PnmImage::Rgb(_) => Err(Error::UnsupportedBandCount(3)),
    }
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws_and_comments(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while let Some(&c) = self.bytes.get(self.pos) {
                    self.pos += 1;
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    /// Next unsigned decimal token.
    fn number(&mut self, what: &str) -> Result<u32> {
        self.skip_ws_and_comments();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(match self.bytes.get(self.pos) {
                None => Error::pnm(start, format!("truncated: expected {what}")),
                Some(_) => Error::pnm(start, format!("malformed header: expected {what}")),
            });
        }
        if self
            .bytes
            .get(self.pos)
            .is_some_and(|b| !b.is_ascii_whitespace() && *b != b'#')
        {
            return Err(Error::pnm(self.pos, format!("malformed {what}")));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::pnm(start, format!("{what} out of range")))
    }
}

/// Decodes an in-memory PNM file.
pub fn decode_pnm<T: Scalar>(bytes: &[u8]) -> Result<PnmImage<T>> {
    if bytes.len() < 2 {
        return Err(Error::pnm(0, "truncated: missing magic number"));
    }
    let (channels, binary) = match &bytes[..2] {
        b"P2" => (1, false),
        b"P3" => (3, false),
        b"P5" => (1, true),
        b"P6" => (3, true),
        _ => return Err(Error::pnm(0, "unsupported magic number")),
    };
    let mut cur = Cursor { bytes, pos: 2 };
    if !cur.bytes.get(2).is_some_and(|b| b.is_ascii_whitespace() || *b == b'#') {
        return Err(Error::pnm(2, "malformed header after magic number"));
    }
    let width = cur.number("width")? as usize;
    let height = cur.number("height")? as usize;
    cur.skip_ws_and_comments();
    let maxval_at = cur.pos;
    let maxval = cur.number("maxval")?;
    if width == 0 || height == 0 {
        return Err(Error::pnm(maxval_at, "zero image dimension"));
    }
    if maxval == 0 || maxval > 65535 {
        return Err(Error::pnm(maxval_at, format!("maxval {maxval} outside 1..=65535")));
    }

    let count = width * height * channels;
    let mut raw: Vec<u32> = Vec::with_capacity(count);
    if binary {
        // exactly one whitespace byte separates the header from the payload
        let start = cur.pos + 1;
        let bytes_per = if maxval < 256 { 1 } else { 2 };
        let needed = count * bytes_per;
        let payload = bytes.get(start..).unwrap_or(&[]);
        if payload.len() < needed {
            return Err(Error::pnm(
                bytes.len(),
                format!("truncated payload: need {needed} bytes, have {}", payload.len()),
            ));
        }
        if bytes_per == 1 {
            raw.extend(payload[..needed].iter().map(|&b| u32::from(b)));
        } else {
            raw.extend(
                payload[..needed]
                    .chunks_exact(2)
                    .map(|c| u32::from(u16::from_be_bytes([c[0], c[1]]))),
            );
        }
        for (i, &v) in raw.iter().enumerate() {
            if v > maxval {
                return Err(Error::pnm(start + i * bytes_per, "sample exceeds maxval"));
            }
        }
    } else {
        for _ in 0..count {
            cur.skip_ws_and_comments();
            let at = cur.pos;
            let v = cur.number("sample")?;
            if v > maxval {
                return Err(Error::pnm(at, "sample exceeds maxval"));
            }
            raw.push(v);
        }
    }

    let to_dn = |v: u32| {
        if maxval == 255 {
            T::count(v as usize)
        } else {
            T::count(v as usize) * T::dn_max() / T::count(maxval as usize)
        }
    };
    if channels == 1 {
        let samples = raw.into_iter().map(to_dn).collect();
        Ok(PnmImage::Gray(Raster::new(width, height, samples)?))
    } else {
        let mut planes: Vec<Vec<T>> = (0..3).map(|_| Vec::with_capacity(width * height)).collect();
        for px in raw.chunks_exact(3) {
            for (plane, &v) in planes.iter_mut().zip(px) {
                plane.push(to_dn(v));
            }
        }
        let bands = planes
            .into_iter()
            .map(|p| Raster::new(width, height, p))
            .collect::<Result<Vec<_>>>()?;
        Ok(PnmImage::Rgb(MultiBandImage::new(bands)?))
    }
}

/// Encodes one or three bands as binary P5/P6 at maxval 255, quantizing first.
pub fn encode_pnm<T: Scalar>(image: &MultiBandImage<T>) -> Result<Vec<u8>> {
    let magic = match image.band_count() {
        1 => "P5",
        3 => "P6",
        n => return Err(Error::UnsupportedBandCount(n)),
    };
    let (w, h) = image.dims();
    let quantized: Vec<Raster<T>> = image.bands().iter().map(clamp_quantize).collect();
    let mut out = format!("{magic}\n{w} {h}\n255\n").into_bytes();
    out.reserve(w * h * quantized.len());
    for idx in 0..w * h {
        for band in &quantized {
            // clamp_quantize guarantees an integral value in 0..=255
            out.push(band.samples()[idx].to_u8().unwrap_or(0));
        }
    }
    Ok(out)
}

pub fn save_pnm<T: Scalar>(image: &MultiBandImage<T>, path: impl AsRef<Path>) -> Result<()> {
    let bytes = encode_pnm(image)?;
    let mut file = fs::File::create(path)?;
    file.write_all(&bytes)?;
    Ok(())
}

/// Saves a single band as P5.
pub fn save_gray<T: Scalar>(raster: &Raster<T>, path: impl AsRef<Path>) -> Result<()> {
    save_pnm(&MultiBandImage::new(vec![raster.clone()])?, path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gray(bytes: &[u8]) -> Raster<f64> {
        match decode_pnm(bytes).unwrap() {
            PnmImage::Gray(r) => r,
            PnmImage::Rgb(_) => panic!("expected PGM"),
        }
    }

    fn pnm_err(bytes: &[u8]) -> (usize, String) {
        match decode_pnm::<f64>(bytes) {
            Err(Error::Pnm { offset, message }) => (offset, message),
            other => panic!("expected pnm error, got {other:?}"),
        }
    }

    #[test]
    fn ascii_pgm() {
        let r = gray(b"P2 2 2 255\n0 255 128 64\n");
        assert_eq!(r.dims(), (2, 2));
        assert_eq!(r.samples(), &[0.0, 255.0, 128.0, 64.0]);
    }

    #[test]
    fn rescales_maxval() {
        assert_eq!(gray(b"P2 1 1 510\n510\n").samples(), &[255.0]);
        // 16-bit binary, big-endian
        let mut f = b"P5\n1 2\n65535\n".to_vec();
        f.extend_from_slice(&[0xff, 0xff, 0x00, 0x00]);
        assert_eq!(gray(&f).samples(), &[255.0, 0.0]);
    }

    #[test]
    fn comments_in_header_and_body() {
        let r = gray(b"P2\n# made by hand\n2 # width\n1\n255\n# pixels\n3 4\n");
        assert_eq!(r.samples(), &[3.0, 4.0]);
    }

    #[test]
    fn ascii_ppm_bands() {
        let img = match decode_pnm::<f64>(b"P3 2 1 255 1 2 3 4 5 6").unwrap() {
            PnmImage::Rgb(i) => i,
            _ => panic!(),
        };
        assert_eq!(img.band(0).samples(), &[1.0, 4.0]);
        assert_eq!(img.band(1).samples(), &[2.0, 5.0]);
        assert_eq!(img.band(2).samples(), &[3.0, 6.0]);
    }

    #[test]
    fn reports_offsets() {
        assert_eq!(pnm_err(b"P7 1 1 255 0").0, 0);
        let (off, msg) = pnm_err(b"P2 2 x 255 0");
        assert_eq!(off, 5);
        assert!(msg.contains("height"), "{msg}");
        let (_, msg) = pnm_err(b"P2 2 2 255 1 2 3");
        assert!(msg.contains("truncated"), "{msg}");
        let (off, msg) = pnm_err(b"P5 2 2 255\n\x01\x02");
        assert_eq!(off, 13);
        assert!(msg.contains("truncated payload"), "{msg}");
        let (off, _) = pnm_err(b"P2 1 1 70000 0");
        assert_eq!(off, 7);
        let (off, _) = pnm_err(b"P2 1 1 10 11");
        assert_eq!(off, 10);
    }

    #[test]
    fn save_rejects_two_bands() {
        let b = Raster::filled(2, 2, 1.0);
        let img = MultiBandImage::new(vec![b.clone(), b]).unwrap();
        let err = encode_pnm(&img).unwrap_err();
        assert!(err.to_string().contains("unsupported band count"));
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let r = Raster::new(2, 2, vec![0.0, 255.0, 128.0, 64.0]).unwrap();
        let path = dir.path().join("g.pgm");
        save_gray(&r, &path).unwrap();
        assert_eq!(load_gray::<f64>(&path).unwrap(), r);

        let rgb = MultiBandImage::from_rgb(
            Raster::from_fn(3, 3, |i, j| (i * 3 + j) as f64),
            Raster::from_fn(3, 3, |i, j| (200 + i * j) as f64),
            Raster::filled(3, 3, 17.0),
        )
        .unwrap();
        let path = dir.path().join("c.ppm");
        save_pnm(&rgb, &path).unwrap();
        assert_eq!(&std::fs::read(&path).unwrap()[..11], b"P6\n3 3\n255\n");
        assert_eq!(load_rgb::<f64>(&path).unwrap(), rgb);
    }

    #[test]
    fn save_quantizes() {
        let r = Raster::new(3, 1, vec![-3.2, 12.5, 270.0]).unwrap();
        let img = MultiBandImage::new(vec![r.clone()]).unwrap();
        let back = gray(&encode_pnm(&img).unwrap());
        assert_eq!(back, clamp_quantize(&r));
    }

    proptest! {
        #[test]
        fn binary_round_trip(w in 1usize..7, h in 1usize..7, three in any::<bool>(), seed in any::<u64>()) {
            let bands = if three { 3 } else { 1 };
            let mut state = seed;
            let mut next = || {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                ((state >> 33) % 256) as f64
            };
            let img = MultiBandImage::new(
                (0..bands).map(|_| Raster::from_fn(w, h, |_, _| next())).collect()
            ).unwrap();
            let back = decode_pnm::<f64>(&encode_pnm(&img).unwrap()).unwrap().into_multiband();
            prop_assert_eq!(back, img);
        }
    }
}
