//! Spectral and spatial quality metrics for fused products.
//!
//! Spectral metrics (DI, SNR, NRMSE) compare each fused band with the
//! matching band of the resampled MS original. Spatial metrics (FCC, HPDI,
//! CSA) compare the fused band with the PAN image through the 3×3
//! Laplacian high-pass.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::filtering::laplacian_hp;
use crate::raster::{ensure_same_dims, MultiBandImage, Raster};
use crate::scalar::Scalar;

/// Edge threshold percentile used by CSA unless configured otherwise.
pub const DEFAULT_CSA_PERCENTILE: f64 = 90.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MetricKind {
    Di,
    Snr,
    Nrmse,
    Fcc,
    Hpdi,
    CsaEdge,
    CsaHomog,
}

impl MetricKind {
    /// Report order.
    pub const ALL: [MetricKind; 7] = [
        MetricKind::Di,
        MetricKind::Snr,
        MetricKind::Nrmse,
        MetricKind::Fcc,
        MetricKind::Hpdi,
        MetricKind::CsaEdge,
        MetricKind::CsaHomog,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MetricKind::Di => "DI",
            MetricKind::Snr => "SNR",
            MetricKind::Nrmse => "NRMSE",
            MetricKind::Fcc => "FCC",
            MetricKind::Hpdi => "HPDI",
            MetricKind::CsaEdge => "CSA_edge",
            MetricKind::CsaHomog => "CSA_homog",
        }
    }

    /// Whether a larger value is reported as better. HPDI follows the
    /// published reading (larger is better) even though it is a deviation.
    pub fn higher_is_better(self) -> bool {
        !matches!(self, MetricKind::Di | MetricKind::Nrmse)
    }
}

impl fmt::Display for MetricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MetricKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        MetricKind::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown metric {s:?}")))
    }
}

/// 1-based band index or the band average.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BandLabel {
    Band(usize),
    Avg,
}

impl fmt::Display for BandLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BandLabel::Band(k) => write!(f, "{k}"),
            BandLabel::Avg => f.write_str("avg"),
        }
    }
}

impl FromStr for BandLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "avg" {
            return Ok(BandLabel::Avg);
        }
        match s.parse::<usize>() {
            Ok(k) if k >= 1 => Ok(BandLabel::Band(k)),
            _ => Err(Error::InvalidParameter(format!("bad band label {s:?}"))),
        }
    }
}

/// One row of a metric report.
///
/// `value` is `+inf` for a perfect-fidelity SNR and NaN where the metric is
/// undefined for the inputs (for example FCC on a flat band).
/// `excluded_pixels` counts zero-denominator pixels skipped by DI and HPDI;
/// on the SNR `avg` row it counts the bands left out of the average because
/// their SNR was infinite.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricRecord {
    pub pair_id: String,
    pub method: String,
    pub band: BandLabel,
    pub metric: MetricKind,
    pub value: f64,
    pub excluded_pixels: usize,
}

/// Mean relative deviation together with the number of skipped pixels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Deviation<T> {
    pub value: T,
    pub excluded: usize,
}

/// SNR, with perfect fidelity kept as an explicit sentinel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Snr<T> {
    Finite(T),
    Infinite,
}

impl<T: Scalar> Snr<T> {
    pub fn is_infinite(&self) -> bool {
        matches!(self, Snr::Infinite)
    }

    pub fn to_f64(self) -> f64 {
        match self {
            Snr::Finite(v) => v.to_f64_lossy(),
            Snr::Infinite => f64::INFINITY,
        }
    }
}

/// Mean contrast of the edge and homogeneous pixel classes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CsaContrast<T> {
    pub edge: T,
    pub homogeneous: T,
}

/// Mean of `|f − m| / m` over pixels where the denominator is non-zero.
fn relative_deviation<T: Scalar>(
    num_a: &[T],
    num_b: &[T],
    denom: &[T],
) -> Option<Deviation<T>> {
    let mut sum = T::zero();
    let mut used = 0usize;
    for ((&a, &b), &d) in num_a.iter().zip(num_b).zip(denom) {
        if d != T::zero() {
            sum = sum + (a - b).abs() / d;
            used += 1;
        }
    }
    (used > 0).then(|| Deviation {
        value: sum / T::count(used),
        excluded: denom.len() - used,
    })
}

/// Deviation index of fused band `f` against reference band `m`.
pub fn deviation_index<T: Scalar>(f: &Raster<T>, m: &Raster<T>) -> Result<Deviation<T>> {
    ensure_same_dims(m, f)?;
    relative_deviation(f.samples(), m.samples(), m.samples())
        .ok_or(Error::UndefinedDeviationIndex)
}

/// `sqrt(Σf² / Σ(f − m)²)`.
pub fn snr<T: Scalar>(f: &Raster<T>, m: &Raster<T>) -> Result<Snr<T>> {
    ensure_same_dims(m, f)?;
    let (mut signal, mut noise) = (T::zero(), T::zero());
    for (&a, &b) in f.samples().iter().zip(m.samples()) {
        signal = signal + a * a;
        noise = noise + (a - b) * (a - b);
    }
    if noise == T::zero() {
        return Ok(Snr::Infinite);
    }
    Ok(Snr::Finite((signal / noise).sqrt()))
}

/// Root mean square error normalised by the 255 DN range.
pub fn nrmse<T: Scalar>(f: &Raster<T>, m: &Raster<T>) -> Result<T> {
    ensure_same_dims(m, f)?;
    let sq = f
        .samples()
        .iter()
        .zip(m.samples())
        .map(|(&a, &b)| (a - b) * (a - b))
        .sum::<T>();
    let full = T::dn_max();
    Ok((sq / (T::count(f.len()) * full * full)).sqrt())
}

/// Population Pearson correlation.
pub fn pearson<T: Scalar>(a: &Raster<T>, b: &Raster<T>) -> Result<T> {
    ensure_same_dims(a, b)?;
    let n = T::count(a.len());
    let ma = a.samples().iter().copied().sum::<T>() / n;
    let mb = b.samples().iter().copied().sum::<T>() / n;
    let (mut sab, mut saa, mut sbb) = (T::zero(), T::zero(), T::zero());
    for (&x, &y) in a.samples().iter().zip(b.samples()) {
        let (dx, dy) = (x - ma, y - mb);
        sab = sab + dx * dy;
        saa = saa + dx * dx;
        sbb = sbb + dy * dy;
    }
    if saa == T::zero() || sbb == T::zero() {
        return Err(Error::UndefinedCorrelation);
    }
    let r = sab / (saa.sqrt() * sbb.sqrt());
    Ok(r.max(-T::one()).min(T::one()))
}

/// Filtered correlation coefficient: Pearson correlation of the Laplacian
/// responses of the fused band and PAN.
pub fn fcc<T: Scalar>(fused_band: &Raster<T>, pan: &Raster<T>) -> Result<T> {
    ensure_same_dims(pan, fused_band)?;
    pearson(&laplacian_hp(fused_band), &laplacian_hp(pan))
}

/// High-pass deviation index. The denominator is the raw PAN value; pixels
/// where PAN is zero are skipped.
pub fn hpdi<T: Scalar>(fused_band: &Raster<T>, pan: &Raster<T>) -> Result<Deviation<T>> {
    ensure_same_dims(pan, fused_band)?;
    let fh = laplacian_hp(fused_band);
    let ph = laplacian_hp(pan);
    relative_deviation(fh.samples(), ph.samples(), pan.samples()).ok_or(Error::UndefinedHpdi)
}

/// Michelson contrast `(max − min) / (max + min)` over each pixel's 3×3
/// neighbourhood, borders replicated; 0 where `max + min` is 0.
pub fn local_michelson<T: Scalar>(band: &Raster<T>) -> Raster<T> {
    let (w, h) = band.dims();
    Raster::from_fn(w, h, |i, j| {
        let (mut lo, mut hi) = (T::infinity(), T::neg_infinity());
        for di in -1..=1isize {
            for dj in -1..=1isize {
                let v = band.get_clamped(i as isize + di, j as isize + dj);
                lo = lo.min(v);
                hi = hi.max(v);
            }
        }
        let denom = hi + lo;
        if denom == T::zero() {
            T::zero()
        } else {
            (hi - lo) / denom
        }
    })
}

/// Nearest-rank percentile of `values`; `percentile` in (0, 100).
pub fn nearest_rank_percentile<T: Scalar>(values: &[T], percentile: f64) -> Result<T> {
    if !(percentile > 0.0 && percentile < 100.0) {
        return Err(Error::InvalidParameter(format!(
            "percentile {percentile} outside (0, 100)"
        )));
    }
    if values.is_empty() {
        return Err(Error::InvalidParameter("percentile of empty set".into()));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite samples"));
    let rank = ((percentile / 100.0) * sorted.len() as f64).ceil() as usize;
    Ok(sorted[rank.clamp(1, sorted.len()) - 1])
}

/// Contrast statistics: pixels whose PAN Laplacian magnitude is at or above
/// the given percentile form the edge class, the rest the homogeneous class.
/// Returns the mean local Michelson contrast of `band` in each class.
pub fn csa<T: Scalar>(band: &Raster<T>, pan: &Raster<T>, percentile: f64) -> Result<CsaContrast<T>> {
    ensure_same_dims(pan, band)?;
    let magnitude = laplacian_hp(pan).map(|v| v.abs());
    let threshold = nearest_rank_percentile(magnitude.samples(), percentile)?;
    let contrast = local_michelson(band);
    let (mut edge_sum, mut edge_n) = (T::zero(), 0usize);
    let (mut flat_sum, mut flat_n) = (T::zero(), 0usize);
    for (&m, &c) in magnitude.samples().iter().zip(contrast.samples()) {
        if m >= threshold {
            edge_sum = edge_sum + c;
            edge_n += 1;
        } else {
            flat_sum = flat_sum + c;
            flat_n += 1;
        }
    }
    if edge_n == 0 {
        return Err(Error::EmptyClass("edge"));
    }
    if flat_n == 0 {
        return Err(Error::EmptyClass("homogeneous"));
    }
    Ok(CsaContrast {
        edge: edge_sum / T::count(edge_n),
        homogeneous: flat_sum / T::count(flat_n),
    })
}

/// Options for [`evaluate_all`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalOptions {
    pub csa_percentile: f64,
}

impl Default for EvalOptions {
    fn default() -> Self {
        Self {
            csa_percentile: DEFAULT_CSA_PERCENTILE,
        }
    }
}

/// Computes every metric for every band, followed by the band averages.
///
/// Rows are ordered by band, then by [`MetricKind::ALL`]; the `avg` rows
/// come last. A metric that is undefined for a band is reported as NaN and
/// left out of the average, as is an infinite SNR.
pub fn evaluate_all<T: Scalar>(
    ms: &MultiBandImage<T>,
    pan: &Raster<T>,
    fused: &MultiBandImage<T>,
    pair_id: &str,
    method: &str,
    options: EvalOptions,
) -> Result<Vec<MetricRecord>> {
    if ms.band_count() != fused.band_count() {
        return Err(Error::BandCountMismatch(ms.band_count(), fused.band_count()));
    }
    ensure_same_dims(pan, ms.band(0))?;
    ensure_same_dims(pan, fused.band(0))?;
    if !(options.csa_percentile > 0.0 && options.csa_percentile < 100.0) {
        return Err(Error::InvalidParameter(format!(
            "CSA percentile {} outside (0, 100)",
            options.csa_percentile
        )));
    }

    let mut rows = Vec::with_capacity((fused.band_count() + 1) * MetricKind::ALL.len());
    let record = |band: BandLabel, metric: MetricKind, value: f64, excluded: usize| MetricRecord {
        pair_id: pair_id.to_string(),
        method: method.to_string(),
        band,
        metric,
        value,
        excluded_pixels: excluded,
    };
    let zeros = |r: &Raster<T>| r.samples().iter().filter(|v| v.is_zero()).count();
    let dev = |d: Result<Deviation<T>>, denominator: &Raster<T>| match d {
        Ok(d) => (d.value.to_f64_lossy(), d.excluded),
        Err(_) => (f64::NAN, zeros(denominator)),
    };
    let val = |v: Result<T>| v.map(Scalar::to_f64_lossy).unwrap_or(f64::NAN);

    for (k, (f, m)) in fused.bands().iter().zip(ms.bands()).enumerate() {
        let label = BandLabel::Band(k + 1);
        let (di, di_ex) = dev(deviation_index(f, m), m);
        rows.push(record(label, MetricKind::Di, di, di_ex));
        let s = snr(f, m).map(Snr::to_f64).unwrap_or(f64::NAN);
        rows.push(record(label, MetricKind::Snr, s, 0));
        rows.push(record(label, MetricKind::Nrmse, val(nrmse(f, m)), 0));
        rows.push(record(label, MetricKind::Fcc, val(fcc(f, pan)), 0));
        let (hp, hp_ex) = dev(hpdi(f, pan), pan);
        rows.push(record(label, MetricKind::Hpdi, hp, hp_ex));
        let (edge, homog) = match csa(f, pan, options.csa_percentile) {
            Ok(c) => (c.edge.to_f64_lossy(), c.homogeneous.to_f64_lossy()),
            Err(_) => (f64::NAN, f64::NAN),
        };
        rows.push(record(label, MetricKind::CsaEdge, edge, 0));
        rows.push(record(label, MetricKind::CsaHomog, homog, 0));
    }

    let band_count = rows.len();
    for metric in MetricKind::ALL {
        let band_rows: Vec<&MetricRecord> = rows[..band_count].iter().filter(|r| r.metric == metric).collect();
        let finite: Vec<f64> = band_rows
            .iter()
            .map(|r| r.value)
            .filter(|v| v.is_finite())
            .collect();
        let infinite = band_rows.iter().filter(|r| r.value == f64::INFINITY).count();
        let value = if !finite.is_empty() {
            finite.iter().sum::<f64>() / finite.len() as f64
        } else if infinite > 0 {
            f64::INFINITY
        } else {
            f64::NAN
        };
        let excluded = if metric == MetricKind::Snr {
            infinite
        } else {
            band_rows.iter().map(|r| r.excluded_pixels).sum()
        };
        rows.push(record(BandLabel::Avg, metric, value, excluded));
    }
    Ok(rows)
}

/// Band-averaged value of `metric` from a record list, if present.
pub fn average_of(records: &[MetricRecord], metric: MetricKind) -> Option<f64> {
    records
        .iter()
        .find(|r| r.band == BandLabel::Avg && r.metric == metric)
        .map(|r| r.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::raster::MultiBandImage;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn seeded(w: usize, h: usize, seed: u64, lo: f64) -> Raster<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Raster::from_fn(w, h, |_, _| rng.gen_range(lo..255.0))
    }

    #[test]
    fn di_examples() {
        let m = seeded(8, 8, 1, 1.0);
        assert_eq!(deviation_index(&m, &m).unwrap().value, 0.0);
        let d = deviation_index(&m.map(|v| 2.0 * v), &m).unwrap();
        assert!((d.value - 1.0).abs() < 1e-15);

        let f = seeded(8, 8, 2, 0.0);
        let mut s = 0.0;
        for i in 0..8 {
            for j in 0..8 {
                s += (f.get(i, j) - m.get(i, j)).abs() / m.get(i, j);
            }
        }
        let got = deviation_index(&f, &m).unwrap();
        assert!((got.value - s / 64.0).abs() <= 1e-12 * (s / 64.0));
        assert_eq!(got.excluded, 0);
    }

    #[test]
    fn di_exclusions() {
        let m: Raster<f64> = Raster::new(2, 2, vec![0.0, 2.0, 0.0, 4.0]).unwrap();
        let f = Raster::new(2, 2, vec![9.0, 3.0, 9.0, 2.0]).unwrap();
        let d = deviation_index(&f, &m).unwrap();
        assert_eq!(d.excluded, 2);
        assert!((d.value - (0.5 + 0.5) / 2.0).abs() < 1e-15);
        let zero = Raster::filled(2, 2, 0.0);
        assert!(matches!(deviation_index(&f, &zero), Err(Error::UndefinedDeviationIndex)));
    }

    #[test]
    fn snr_examples() {
        let m = seeded(8, 8, 3, 0.0);
        assert_eq!(snr(&m, &m).unwrap(), Snr::Infinite);
        let s = snr(&m.map(|v| 2.0 * v), &m).unwrap();
        match s {
            Snr::Finite(v) => assert!((v - 2.0).abs() < 1e-12),
            Snr::Infinite => panic!(),
        }
    }

    #[test]
    fn nrmse_examples() {
        let m = Raster::filled(4, 4, 0.0);
        assert_eq!(nrmse(&m, &m).unwrap(), 0.0);
        assert_eq!(nrmse(&Raster::filled(4, 4, 255.0), &m).unwrap(), 1.0);
        assert_eq!(nrmse(&Raster::filled(4, 4, 127.5), &m).unwrap(), 0.5);
    }

    #[test]
    fn pearson_examples() {
        let a = seeded(8, 8, 4, 0.0);
        assert!((pearson(&a, &a).unwrap() - 1.0).abs() < 1e-12);
        assert!((pearson(&a, &a.map(|v| -v)).unwrap() + 1.0).abs() < 1e-12);
        assert!(matches!(
            pearson(&a, &Raster::filled(8, 8, 3.0)),
            Err(Error::UndefinedCorrelation)
        ));
    }

    #[test]
    fn fcc_examples() {
        let pan = seeded(8, 8, 5, 0.0);
        assert!((fcc(&pan, &pan).unwrap() - 1.0).abs() < 1e-12);
        assert!(matches!(
            fcc(&Raster::filled(8, 8, 10.0), &pan),
            Err(Error::UndefinedCorrelation)
        ));
    }

    #[test]
    fn hpdi_examples() {
        let pan = seeded(8, 8, 6, 1.0);
        assert_eq!(hpdi(&pan, &pan).unwrap().value, 0.0);
        let flat = Raster::filled(8, 8, 40.0);
        let lap = laplacian_hp(&pan);
        let expect: f64 = (0..64)
            .map(|k| lap.samples()[k].abs() / pan.samples()[k])
            .sum::<f64>()
            / 64.0;
        let got = hpdi(&flat, &pan).unwrap();
        assert!((got.value - expect).abs() <= 1e-12 * expect);
        assert!(matches!(hpdi(&flat, &Raster::filled(8, 8, 0.0)), Err(Error::UndefinedHpdi)));
    }

    #[test]
    fn csa_examples() {
        let pan = seeded(10, 10, 7, 0.0);
        let c = csa(&Raster::filled(10, 10, 90.0), &pan, 90.0).unwrap();
        assert_eq!((c.edge, c.homogeneous), (0.0, 0.0));
        let checker = Raster::from_fn(10, 10, |i, j| if (i + j) % 2 == 0 { 0.0 } else { 255.0 });
        let c = csa(&checker, &pan, 90.0).unwrap();
        assert_eq!((c.edge, c.homogeneous), (1.0, 1.0));
        assert!(matches!(
            csa(&checker, &Raster::filled(10, 10, 5.0), 90.0),
            Err(Error::EmptyClass(_))
        ));
        assert!(csa(&checker, &pan, 100.0).is_err());
    }

    #[test]
    fn csa_matches_classify_then_average() {
        let pan = seeded(12, 12, 8, 0.0);
        let band = seeded(12, 12, 9, 0.0);
        let lap = laplacian_hp(&pan);
        let mut mags: Vec<f64> = lap.samples().iter().map(|v| v.abs()).collect();
        mags.sort_by(|a, b| a.partial_cmp(b).unwrap());
        // 90th percentile of 144 values by nearest rank: ceil(129.6) = 130th
        let thr = mags[129];
        let (mut es, mut en, mut hs, mut hn) = (0.0, 0, 0.0, 0);
        for i in 0..12usize {
            for j in 0..12usize {
                let mut vals = vec![];
                for di in -1i32..=1 {
                    for dj in -1i32..=1 {
                        let ii = (i as i32 + di).clamp(0, 11) as usize;
                        let jj = (j as i32 + dj).clamp(0, 11) as usize;
                        vals.push(band.get(ii, jj));
                    }
                }
                let mx = vals.iter().cloned().fold(f64::MIN, f64::max);
                let mn = vals.iter().cloned().fold(f64::MAX, f64::min);
                let c = (mx - mn) / (mx + mn);
                if lap.get(i, j).abs() >= thr {
                    es += c;
                    en += 1;
                } else {
                    hs += c;
                    hn += 1;
                }
            }
        }
        let got = csa(&band, &pan, 90.0).unwrap();
        assert_eq!(en, 15);
        assert!((got.edge - es / en as f64).abs() < 1e-12);
        assert!((got.homogeneous - hs / hn as f64).abs() < 1e-12);
    }

    #[test]
    fn percentile_rank() {
        let v: Vec<f64> = (1..=10).map(f64::from).collect();
        assert_eq!(nearest_rank_percentile(&v, 90.0).unwrap(), 9.0);
        assert_eq!(nearest_rank_percentile(&v, 50.0).unwrap(), 5.0);
        assert_eq!(nearest_rank_percentile(&v, 1.0).unwrap(), 1.0);
        assert!(nearest_rank_percentile(&v, 0.0).is_err());
    }

    fn rgb_of(band: &Raster<f64>) -> MultiBandImage<f64> {
        MultiBandImage::new(vec![band.clone(), band.map(|v| 255.0 - v), band.map(|v| v / 2.0)]).unwrap()
    }

    #[test]
    fn evaluate_perfect_spectral() {
        let pan = seeded(16, 16, 10, 1.0).map(|v| v.round());
        let ms = rgb_of(&seeded(16, 16, 11, 1.0).map(|v| v.round()));
        let recs = evaluate_all(&ms, &pan, &ms, "p", "SF", EvalOptions::default()).unwrap();
        assert_eq!(recs.len(), 4 * 7);
        for r in &recs {
            match r.metric {
                MetricKind::Di | MetricKind::Nrmse => assert_eq!(r.value, 0.0),
                MetricKind::Snr => assert_eq!(r.value, f64::INFINITY),
                _ => {}
            }
        }
        let avg_snr = recs.iter().find(|r| r.band == BandLabel::Avg && r.metric == MetricKind::Snr).unwrap();
        assert_eq!(avg_snr.excluded_pixels, 3);
        // ordering: bands ascending, metrics in fixed order
        for (idx, r) in recs.iter().enumerate() {
            assert_eq!(r.metric, MetricKind::ALL[idx % 7]);
            let band = if idx / 7 < 3 { BandLabel::Band(idx / 7 + 1) } else { BandLabel::Avg };
            assert_eq!(r.band, band);
        }
    }

    #[test]
    fn evaluate_perfect_spatial() {
        let pan = seeded(16, 16, 12, 1.0).map(|v| v.round());
        let ms = rgb_of(&seeded(16, 16, 13, 1.0));
        let fused = MultiBandImage::new(vec![pan.clone(), pan.clone(), pan.clone()]).unwrap();
        let recs = evaluate_all(&ms, &pan, &fused, "p", "X", EvalOptions::default()).unwrap();
        for r in recs {
            match r.metric {
                MetricKind::Fcc => assert!((r.value - 1.0).abs() < 1e-12),
                MetricKind::Hpdi => assert_eq!(r.value, 0.0),
                _ => {}
            }
        }
    }

    #[test]
    fn evaluate_rejects_mismatch() {
        let pan = Raster::filled(4, 4, 1.0);
        let ms = rgb_of(&Raster::filled(4, 4, 1.0));
        let two = MultiBandImage::new(vec![pan.clone(), pan.clone()]).unwrap();
        assert!(evaluate_all(&ms, &pan, &two, "p", "m", EvalOptions::default()).is_err());
        let small = Raster::filled(3, 4, 1.0);
        assert!(evaluate_all(&ms, &small, &ms, "p", "m", EvalOptions::default()).is_err());
    }

    #[test]
    fn undefined_metrics_become_nan() {
        let pan = Raster::filled(6, 6, 100.0);
        let ms = rgb_of(&seeded(6, 6, 14, 1.0));
        let recs = evaluate_all(&ms, &pan, &ms, "p", "m", EvalOptions::default()).unwrap();
        let fcc_rows: Vec<_> = recs.iter().filter(|r| r.metric == MetricKind::Fcc).collect();
        assert!(fcc_rows.iter().all(|r| r.value.is_nan()));

        let zero_pan = Raster::filled(6, 6, 0.0);
        let dark = MultiBandImage::new(vec![Raster::filled(6, 6, 0.0), ms.band(1).clone(), ms.band(2).clone()]).unwrap();
        let recs = evaluate_all(&dark, &zero_pan, &ms, "p", "m", EvalOptions::default()).unwrap();
        let di = recs.iter().find(|r| r.metric == MetricKind::Di && r.band == BandLabel::Band(1)).unwrap();
        assert!(di.value.is_nan());
        assert_eq!(di.excluded_pixels, 36);
        let hp: Vec<_> = recs.iter().filter(|r| r.metric == MetricKind::Hpdi).collect();
        assert!(hp.iter().all(|r| r.value.is_nan()));
        assert_eq!(hp.last().unwrap().excluded_pixels, 3 * 36);
    }

    proptest! {
        #[test]
        fn fcc_shift_and_scale_invariant(seed in any::<u64>(), c in -50.0f64..50.0, a in 0.1f64..5.0) {
            let f = seeded(8, 8, seed, 0.0);
            let p = seeded(8, 8, seed.wrapping_add(1), 0.0);
            let base = fcc(&f, &p).unwrap();
            let moved = fcc(&f.map(|v| a * v + c), &p.map(|v| v + c)).unwrap();
            prop_assert!((base - moved).abs() < 1e-9);
        }

        #[test]
        fn spectral_metrics_permutation_invariant(seed in any::<u64>()) {
            let f = seeded(6, 6, seed, 1.0);
            let m = seeded(6, 6, seed ^ 0xabc, 1.0);
            let rev = |r: &Raster<f64>| {
                let mut s = r.samples().to_vec();
                s.reverse();
                Raster::new(6, 6, s).unwrap()
            };
            let (fr, mr) = (rev(&f), rev(&m));
            prop_assert!((deviation_index(&f, &m).unwrap().value - deviation_index(&fr, &mr).unwrap().value).abs() < 1e-9);
            prop_assert!((nrmse(&f, &m).unwrap() - nrmse(&fr, &mr).unwrap()).abs() < 1e-9);
            prop_assert!((snr(&f, &m).unwrap().to_f64() - snr(&fr, &mr).unwrap().to_f64()).abs() < 1e-9);
        }

        #[test]
        fn metric_ranges(seed in any::<u64>()) {
            let f = seeded(6, 6, seed, 0.0);
            let m = seeded(6, 6, seed ^ 0x55, 1.0);
            prop_assert!(deviation_index(&f, &m).unwrap().value >= 0.0);
            let n = nrmse(&f, &m).unwrap();
            prop_assert!((0.0..=1.0).contains(&n));
            let r = fcc(&f, &m).unwrap();
            prop_assert!((-1.0..=1.0).contains(&r));
            prop_assert!(hpdi(&f, &m).unwrap().value >= 0.0);
        }
    }
}
