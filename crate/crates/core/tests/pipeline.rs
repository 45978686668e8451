use panfuse::metrics::{average_of, evaluate_all, BandLabel, EvalOptions, MetricKind};
use panfuse::pnm::{decode_pnm, encode_pnm, load_gray, load_rgb};
use panfuse::synthetic::{generate, write_synthetic};
use panfuse::{fuse, fuse_named, Error, FusionMethod, MultiBandImageF32, MultiBandImageF64, RasterF64, SyntheticSpec};

fn spec(seed: u64) -> SyntheticSpec {
    SyntheticSpec {
        seed,
        width: 32,
        height: 32,
        scale_factor: 4,
        smoothing_passes: 2,
    }
}

#[test]
fn disk_round_trip_gives_same_products() {
    let dir = tempfile::tempdir().unwrap();
    let paths = write_synthetic(&spec(12), dir.path()).unwrap();
    let pair = generate::<f64>(&spec(12)).unwrap();
    let ms: MultiBandImageF64 = load_rgb(&paths.ms).unwrap();
    let pan: RasterF64 = load_gray(&paths.pan).unwrap();
    assert_eq!(ms, pair.ms);
    assert_eq!(pan, pair.pan);
    for method in FusionMethod::ALL {
        let a = fuse(method, &ms, &pan).unwrap();
        let b = fuse(method, &pair.ms, &pair.pan).unwrap();
        assert_eq!(a, b);
        let bytes = encode_pnm(&a).unwrap();
        let back = decode_pnm::<f64>(&bytes).unwrap().into_multiband();
        assert_eq!(back, a, "{method}");
    }
}

#[test]
fn f32_and_f64_pipelines_agree_within_one_dn() {
    let pair = generate::<f64>(&spec(21)).unwrap();
    let ms32: MultiBandImageF32 = pair.ms.cast();
    let pan32 = pair.pan.cast::<f32>();
    for method in FusionMethod::ALL {
        let wide = fuse(method, &pair.ms, &pair.pan).unwrap();
        let narrow = fuse(method, &ms32, &pan32).unwrap().cast::<f64>();
        for (a, b) in wide.bands().iter().zip(narrow.bands()) {
            for (x, y) in a.samples().iter().zip(b.samples()) {
                assert!((x - y).abs() <= 1.0, "{method}: {x} vs {y}");
            }
        }
    }
}

#[test]
fn named_dispatch_matches_enum() {
    let pair = generate::<f64>(&spec(3)).unwrap();
    for method in FusionMethod::ALL {
        let lower = method.name().to_lowercase();
        assert_eq!(
            fuse_named(&lower, &pair.ms, &pair.pan).unwrap(),
            fuse(method, &pair.ms, &pair.pan).unwrap()
        );
    }
    assert!(matches!(
        fuse_named("brovey", &pair.ms, &pair.pan),
        Err(Error::UnknownMethod { .. })
    ));
}

#[test]
fn coarse_ms_is_resampled_before_fusion() {
    let pair = generate::<f64>(&spec(8)).unwrap();
    for method in FusionMethod::ALL {
        let from_coarse = fuse(method, &pair.ms_coarse, &pair.pan).unwrap();
        let from_full = fuse(method, &pair.ms, &pair.pan).unwrap();
        assert_eq!(from_coarse, from_full, "{method}");
    }
}

#[test]
fn evaluation_shape_and_ranges() {
    let pair = generate::<f64>(&spec(30)).unwrap();
    for method in FusionMethod::ALL {
        let fused = fuse(method, &pair.ms, &pair.pan).unwrap();
        let recs = evaluate_all(&pair.ms, &pair.pan, &fused, "p", method.name(), EvalOptions::default()).unwrap();
        assert_eq!(recs.len(), 4 * MetricKind::ALL.len());
        let mut expected = Vec::new();
        for band in [BandLabel::Band(1), BandLabel::Band(2), BandLabel::Band(3), BandLabel::Avg] {
            for metric in MetricKind::ALL {
                expected.push((band, metric));
            }
        }
        let got: Vec<_> = recs.iter().map(|r| (r.band, r.metric)).collect();
        assert_eq!(got, expected);
        for r in &recs {
            let v = r.value;
            match r.metric {
                MetricKind::Di | MetricKind::Hpdi => assert!(v >= 0.0),
                MetricKind::Nrmse => assert!((0.0..=1.0).contains(&v)),
                MetricKind::Snr => assert!(v >= 0.0),
                MetricKind::Fcc => assert!((-1.0..=1.0).contains(&v)),
                MetricKind::CsaEdge | MetricKind::CsaHomog => assert!((0.0..=1.0).contains(&v)),
            }
        }
        assert!(average_of(&recs, MetricKind::Fcc).unwrap() > 0.0);
    }
}
