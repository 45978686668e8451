//! SVG grouped bar charts, one per metric.
//!
//! Groups are pairs, bars within a group are methods, and each bar is the
//! band-averaged value. Output depends only on the input records, so the
//! same CSV always renders to the same bytes.

use std::collections::HashMap;
use std::fmt::Write;

use panfuse::metrics::{BandLabel, MetricKind, MetricRecord};

const PALETTE: [&str; 7] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2",
];
const BAR_WIDTH: f64 = 18.0;
const GROUP_GAP: f64 = 24.0;
const MARGIN_LEFT: f64 = 80.0;
const MARGIN_RIGHT: f64 = 130.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 70.0;
const PLOT_HEIGHT: f64 = 240.0;
const TICKS: usize = 5;

/// Band-averaged values for one metric, laid out as pairs × methods.
#[derive(Debug, Clone, PartialEq)]
pub struct ChartData {
    pub metric: MetricKind,
    pub pairs: Vec<String>,
    pub methods: Vec<String>,
    /// `values[p][m]`, `None` when the CSV has no row for that combination.
    pub values: Vec<Vec<Option<f64>>>,
}

fn first_seen<'a>(items: impl Iterator<Item = &'a str>) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for s in items {
        if !out.iter().any(|o| o == s) {
            out.push(s.to_string());
        }
    }
    out
}

fn band_average(values: &[f64]) -> f64 {
    let finite: Vec<f64> = values.iter().copied().filter(|v| v.is_finite()).collect();
    if !finite.is_empty() {
        finite.iter().sum::<f64>() / finite.len() as f64
    } else if values.contains(&f64::INFINITY) {
        f64::INFINITY
    } else {
        f64::NAN
    }
}

/// Collects chart data for every metric present, in canonical metric order.
///
/// An `avg` row is used when present; otherwise the per-band rows are
/// averaged the same way `evaluate_all` does.
pub fn collect(records: &[MetricRecord]) -> Vec<ChartData> {
    let mut charts = Vec::new();
    for metric in MetricKind::ALL {
        let rows: Vec<&MetricRecord> = records.iter().filter(|r| r.metric == metric).collect();
        if rows.is_empty() {
            continue;
        }
        let pairs = first_seen(rows.iter().map(|r| r.pair_id.as_str()));
        let methods = first_seen(rows.iter().map(|r| r.method.as_str()));
        let mut avg: HashMap<(&str, &str), f64> = HashMap::new();
        let mut bands: HashMap<(&str, &str), Vec<f64>> = HashMap::new();
        for r in &rows {
            let key = (r.pair_id.as_str(), r.method.as_str());
            match r.band {
                BandLabel::Avg => {
                    avg.entry(key).or_insert(r.value);
                }
                BandLabel::Band(_) => bands.entry(key).or_default().push(r.value),
            }
        }
        let values = pairs
            .iter()
            .map(|p| {
                methods
                    .iter()
                    .map(|m| {
                        let key = (p.as_str(), m.as_str());
                        avg.get(&key)
                            .copied()
                            .or_else(|| bands.get(&key).map(|v| band_average(v)))
                    })
                    .collect()
            })
            .collect();
        charts.push(ChartData {
            metric,
            pairs,
            methods,
            values,
        });
    }
    charts
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            _ => out.push(c),
        }
    }
    out
}

fn tick_label(v: f64) -> String {
    let s = format!("{v:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".to_string() } else { s.to_string() }
}

/// Renders one chart. `labels` optionally maps a pair id to a longer
/// caption drawn under the pair id.
pub fn render_svg(data: &ChartData, labels: &HashMap<String, String>) -> String {
    let n_methods = data.methods.len().max(1) as f64;
    let group_width = n_methods * BAR_WIDTH;
    let plot_width = data.pairs.len() as f64 * (group_width + GROUP_GAP) + GROUP_GAP;
    let width = MARGIN_LEFT + plot_width + MARGIN_RIGHT;
    let height = MARGIN_TOP + PLOT_HEIGHT + MARGIN_BOTTOM;

    let finite = data
        .values
        .iter()
        .flatten()
        .flatten()
        .copied()
        .filter(|v| v.is_finite());
    let (lo, mut hi) = finite.fold((0.0f64, 0.0f64), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if hi == lo {
        hi = lo + 1.0;
    }
    // Leave headroom so capped infinite bars stand above every finite bar.
    let has_inf = data.values.iter().flatten().flatten().any(|v| v.is_infinite());
    if has_inf {
        hi += (hi - lo) * 0.15;
    }
    let span = hi - lo;
    let y_of = |v: f64| MARGIN_TOP + (hi - v) / span * PLOT_HEIGHT;
    let y_zero = y_of(0.0);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}" font-family="sans-serif" font-size="11">"#
    );
    let polarity = if data.metric.higher_is_better() {
        "higher is better"
    } else {
        "lower is better"
    };
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="20" text-anchor="middle" font-size="14">{} ({polarity})</text>"#,
        MARGIN_LEFT + plot_width / 2.0,
        data.metric.name()
    );

    for t in 0..=TICKS {
        let v = lo + span * t as f64 / TICKS as f64;
        let y = y_of(v);
        let _ = writeln!(
            s,
            r##"<line x1="{MARGIN_LEFT:.1}" y1="{y:.2}" x2="{:.1}" y2="{y:.2}" stroke="#dddddd"/>"##,
            MARGIN_LEFT + plot_width
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.2}" text-anchor="end">{}</text>"#,
            MARGIN_LEFT - 6.0,
            y + 4.0,
            tick_label(v)
        );
    }
    let _ = writeln!(
        s,
        r#"<line x1="{MARGIN_LEFT:.1}" y1="{MARGIN_TOP:.1}" x2="{MARGIN_LEFT:.1}" y2="{:.1}" stroke="black"/>"#,
        MARGIN_TOP + PLOT_HEIGHT
    );
    let _ = writeln!(
        s,
        r#"<line x1="{MARGIN_LEFT:.1}" y1="{y_zero:.2}" x2="{:.1}" y2="{y_zero:.2}" stroke="black"/>"#,
        MARGIN_LEFT + plot_width
    );
    let _ = writeln!(
        s,
        r#"<text class="axis-label" x="20" y="{:.1}" text-anchor="middle" transform="rotate(-90 20 {:.1})">{}</text>"#,
        MARGIN_TOP + PLOT_HEIGHT / 2.0,
        MARGIN_TOP + PLOT_HEIGHT / 2.0,
        data.metric.name()
    );

    for (p, pair) in data.pairs.iter().enumerate() {
        let gx = MARGIN_LEFT + GROUP_GAP + p as f64 * (group_width + GROUP_GAP);
        let _ = writeln!(s, r#"<g class="group" data-pair="{}">"#, escape(pair));
        for (m, method) in data.methods.iter().enumerate() {
            let x = gx + m as f64 * BAR_WIDTH;
            let color = PALETTE[m % PALETTE.len()];
            let Some(v) = data.values[p][m] else { continue };
            if v.is_nan() {
                let _ = writeln!(
                    s,
                    r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="9">n/a</text>"#,
                    x + BAR_WIDTH / 2.0,
                    y_zero - 4.0
                );
                continue;
            }
            let top = if v == f64::INFINITY {
                MARGIN_TOP
            } else if v == f64::NEG_INFINITY {
                MARGIN_TOP + PLOT_HEIGHT
            } else {
                y_of(v)
            };
            let (y, h) = if top <= y_zero {
                (top, y_zero - top)
            } else {
                (y_zero, top - y_zero)
            };
            let _ = writeln!(
                s,
                r#"<rect class="bar" x="{x:.2}" y="{y:.2}" width="{:.2}" height="{h:.2}" fill="{color}"><title>{} {}: {}</title></rect>"#,
                BAR_WIDTH - 2.0,
                escape(pair),
                escape(method),
                crate::records::format_value(v)
            );
            if v.is_infinite() {
                let _ = writeln!(
                    s,
                    r#"<text class="inf" x="{:.2}" y="{:.2}" text-anchor="middle">∞</text>"#,
                    x + (BAR_WIDTH - 2.0) / 2.0,
                    y - 3.0
                );
            }
        }
        let cx = gx + group_width / 2.0;
        let base = MARGIN_TOP + PLOT_HEIGHT;
        let _ = writeln!(
            s,
            r#"<text x="{cx:.2}" y="{:.1}" text-anchor="middle">{}</text>"#,
            base + 16.0,
            escape(pair)
        );
        if let Some(label) = labels.get(pair).filter(|l| *l != pair) {
            let _ = writeln!(
                s,
                r#"<text x="{cx:.2}" y="{:.1}" text-anchor="middle" font-size="9">{}</text>"#,
                base + 30.0,
                escape(label)
            );
        }
        let _ = writeln!(s, "</g>");
    }

    let lx = MARGIN_LEFT + plot_width + 16.0;
    for (m, method) in data.methods.iter().enumerate() {
        let y = MARGIN_TOP + m as f64 * 18.0;
        let _ = writeln!(
            s,
            r#"<rect x="{lx:.1}" y="{y:.1}" width="12" height="12" fill="{}"/>"#,
            PALETTE[m % PALETTE.len()]
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}">{}</text>"#,
            lx + 18.0,
            y + 10.0,
            escape(method)
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">pair</text>"#,
        MARGIN_LEFT + plot_width / 2.0,
        height - 12.0
    );
    s.push_str("</svg>\n");
    s
}

/// File name for a metric's chart, e.g. `CSA_edge.svg`.
pub fn file_name(metric: MetricKind) -> String {
    format!("{}.svg", metric.name())
}
