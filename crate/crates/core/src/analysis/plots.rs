//! Minimal SVG bar charts for run comparisons. Output depends only on the
//! inputs, so identical reports give byte-identical files.

use std::fmt::Write as _;
use std::io;
use std::path::{Path, PathBuf};

use super::{CaseReport, Histogram, Provenance};
use crate::fsutil::write_atomic;

const PALETTE: [&str; 10] =
    ["#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac"];
const W: f64 = 760.0;
const H: f64 = 440.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 180.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 90.0;

/// Bars per category, one series per legend entry; stacked series put
/// negative values below the axis.
#[derive(Debug, Clone, PartialEq)]
pub struct BarChart {
    pub title: String,
    pub y_label: String,
    pub categories: Vec<String>,
    pub series: Vec<(String, Vec<f64>)>,
    pub stacked: bool,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn nice_step(range: f64) -> f64 {
    if range <= 0.0 {
        return 1.0;
    }
    let raw = range / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let norm = raw / mag;
    let f = if norm <= 1.0 {
        1.0
    } else if norm <= 2.0 {
        2.0
    } else if norm <= 5.0 {
        5.0
    } else {
        10.0
    };
    f * mag
}

impl BarChart {
    fn extent(&self) -> (f64, f64) {
        let (mut lo, mut hi) = (0.0f64, 0.0f64);
        for c in 0..self.categories.len() {
            if self.stacked {
                let (mut pos, mut neg) = (0.0, 0.0);
                for (_, v) in &self.series {
                    let x = v.get(c).copied().unwrap_or(0.0);
                    if x >= 0.0 {
                        pos += x
                    } else {
                        neg += x
                    }
                }
                hi = hi.max(pos);
                lo = lo.min(neg);
            } else {
                for (_, v) in &self.series {
                    let x = v.get(c).copied().unwrap_or(0.0);
                    hi = hi.max(x);
                    lo = lo.min(x);
                }
            }
        }
        if hi == lo {
            hi = lo + 1.0;
        }
        let step = nice_step(hi - lo);
        ((lo / step).floor() * step, (hi / step).ceil() * step)
    }

    pub fn to_svg(&self, prov: &Provenance) -> String {
        let (lo, hi) = self.extent();
        let plot_w = W - LEFT - RIGHT;
        let plot_h = H - TOP - BOTTOM;
        let y = |v: f64| TOP + plot_h * (hi - v) / (hi - lo);
        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" font-family="sans-serif" font-size="11">"#
        );
        let _ = writeln!(s, "<!-- {} -->", prov.comment());
        let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="22" font-size="14" text-anchor="middle">{}</text>"#,
            W / 2.0,
            escape(&self.title)
        );
        let step = nice_step(hi - lo);
        let mut tick = lo;
        while tick <= hi + step * 1e-9 {
            let ty = y(tick);
            let _ =
                writeln!(s, r##"<line x1="{LEFT}" x2="{:.1}" y1="{ty:.1}" y2="{ty:.1}" stroke="#ddd"/>"##, W - RIGHT);
            let _ = writeln!(
                s,
                r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#,
                LEFT - 6.0,
                ty + 4.0,
                format_tick(tick)
            );
            tick += step;
        }
        let _ = writeln!(
            s,
            r##"<line x1="{LEFT}" x2="{:.1}" y1="{:.1}" y2="{:.1}" stroke="#333"/>"##,
            W - RIGHT,
            y(0.0),
            y(0.0)
        );
        let _ = writeln!(
            s,
            r#"<text transform="translate(16,{:.1}) rotate(-90)" text-anchor="middle">{}</text>"#,
            TOP + plot_h / 2.0,
            escape(&self.y_label)
        );
        let n = self.categories.len().max(1) as f64;
        let slot = plot_w / n;
        let ns = self.series.len().max(1) as f64;
        for (c, cat) in self.categories.iter().enumerate() {
            let x0 = LEFT + slot * c as f64;
            let (mut pos, mut neg) = (0.0, 0.0);
            for (k, (_, vals)) in self.series.iter().enumerate() {
                let v = vals.get(c).copied().unwrap_or(0.0);
                let color = PALETTE[k % PALETTE.len()];
                let (bx, bw, top, bottom) = if self.stacked {
                    let (a, b) = if v >= 0.0 {
                        pos += v;
                        (pos, pos - v)
                    } else {
                        neg += v;
                        (neg - v, neg)
                    };
                    (x0 + slot * 0.2, slot * 0.6, a, b)
                } else {
                    let bw = slot * 0.8 / ns;
                    (x0 + slot * 0.1 + bw * k as f64, bw, v.max(0.0), v.min(0.0))
                };
                let _ = writeln!(
                    s,
                    r#"<rect x="{bx:.1}" y="{:.1}" width="{bw:.1}" height="{:.1}" fill="{color}"/>"#,
                    y(top),
                    (y(bottom) - y(top)).max(0.0)
                );
            }
            let lx = x0 + slot / 2.0;
            let ly = H - BOTTOM + 14.0;
            let _ = writeln!(
                s,
                r#"<text x="{lx:.1}" y="{ly:.1}" text-anchor="end" transform="rotate(-35 {lx:.1} {ly:.1})">{}</text>"#,
                escape(cat)
            );
        }
        for (k, (name, _)) in self.series.iter().enumerate() {
            let ly = TOP + 16.0 * k as f64;
            let lx = W - RIGHT + 12.0;
            let _ = writeln!(
                s,
                r#"<rect x="{lx:.1}" y="{ly:.1}" width="10" height="10" fill="{}"/>"#,
                PALETTE[k % PALETTE.len()]
            );
            let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}">{}</text>"#, lx + 14.0, ly + 9.0, escape(name));
        }
        s.push_str("</svg>\n");
        s
    }
}

fn format_tick(v: f64) -> String {
    if v.abs() >= 1e5 || (v != 0.0 && v.abs() < 1e-2) {
        format!("{v:.2e}")
    } else {
        let r = (v * 100.0).round() / 100.0;
        format!("{r}")
    }
}

pub fn histogram_chart(title: &str, hist: &Histogram) -> BarChart {
    BarChart {
        title: title.to_string(),
        y_label: "hours".into(),
        categories: hist.labels(),
        series: vec![("hours".into(), hist.mass.clone())],
        stacked: true,
    }
}

fn union_keys<'a>(maps: impl Iterator<Item = Vec<&'a str>>) -> Vec<String> {
    let mut keys: Vec<String> = maps.flatten().map(String::from).collect();
    keys.sort();
    keys.dedup();
    keys
}

/// Renders the comparison charts for `reports` into `dir`.
pub fn write_plots(dir: &Path, reports: &[CaseReport], prov: &Provenance) -> io::Result<Vec<PathBuf>> {
    let mut sorted: Vec<&CaseReport> = reports.iter().collect();
    sorted.sort_by(|a, b| a.label.cmp(&b.label));
    let labels: Vec<String> = sorted.iter().map(|r| r.label.clone()).collect();
    let mut charts: Vec<(String, BarChart)> = Vec::new();

    let techs = union_keys(sorted.iter().map(|r| r.capacities.techs.iter().map(|t| t.id.as_str()).collect()));
    charts.push((
        "capacity.svg".into(),
        BarChart {
            title: "Installed capacity".into(),
            y_label: "MW".into(),
            categories: labels.clone(),
            series: techs
                .iter()
                .map(|id| {
                    let v = sorted.iter().map(|r| r.capacities.tech(id).map_or(0.0, |t| t.power_total)).collect();
                    (id.clone(), v)
                })
                .collect(),
            stacked: true,
        },
    ));
    charts.push((
        "emissions.svg".into(),
        BarChart {
            title: "Consequential emissions".into(),
            y_label: "tCO2 / tH2".into(),
            categories: labels.clone(),
            series: vec![(
                "consequential".into(),
                sorted.iter().map(|r| r.consequential_emissions.unwrap_or(0.0)).collect(),
            )],
            stacked: true,
        },
    ));
    let parts: [(&str, fn(&super::LcohBreakdown) -> f64); 7] = [
        ("electrolyzer", |b| b.electrolyzer),
        ("h2 storage", |b| b.h2_storage),
        ("compressor", |b| b.compressor),
        ("energy purchases", |b| b.energy_purchases),
        ("capacity purchases", |b| b.capacity_purchases),
        ("ppa cost", |b| b.ppa_fixed + b.ppa_variable),
        ("ppa sales", |b| -b.ppa_sales),
    ];
    charts.push((
        "lcoh.svg".into(),
        BarChart {
            title: "Levelized cost of hydrogen".into(),
            y_label: "$/kg".into(),
            categories: labels.clone(),
            series: parts
                .iter()
                .map(|(name, f)| {
                    let v =
                        sorted.iter().map(|r| r.lcoh.as_ref().map_or(0.0, |b| f(b) / (b.h2_tonnes * 1000.0))).collect();
                    (name.to_string(), v)
                })
                .collect(),
            stacked: true,
        },
    ));
    charts.push((
        "prices.svg".into(),
        BarChart {
            title: "Average prices".into(),
            y_label: "$/MWh".into(),
            categories: labels.clone(),
            series: vec![
                ("energy".into(), sorted.iter().map(|r| r.prices.avg_energy_price).collect()),
                ("capacity".into(), sorted.iter().map(|r| r.prices.avg_capacity_price).collect()),
                ("rps".into(), sorted.iter().map(|r| r.prices.rps_price).collect()),
                ("tmr".into(), sorted.iter().map(|r| r.prices.tmr_price).collect()),
            ],
            stacked: false,
        },
    ));
    for r in &sorted {
        if !r.revenue.is_empty() {
            let cats: Vec<String> = r.revenue.iter().map(|s| s.id.clone()).collect();
            let col = |f: fn(&super::RevenueStack) -> f64| r.revenue.iter().map(f).collect::<Vec<_>>();
            charts.push((
                format!("revenue_{}.svg", r.label),
                BarChart {
                    title: format!("Revenue stacks: {}", r.label),
                    y_label: "$/MW-yr".into(),
                    categories: cats,
                    series: vec![
                        ("electricity sales".into(), col(|s| s.electricity_sales)),
                        ("capacity reserve".into(), col(|s| s.capacity_reserve)),
                        ("RPS".into(), col(|s| s.rps)),
                        ("TMR".into(), col(|s| s.tmr)),
                        ("total cost".into(), col(|s| -s.total_cost)),
                    ],
                    stacked: true,
                },
            ));
        }
        if let Some(h) = &r.prices.tmr_histogram {
            charts.push((
                format!("tmr_prices_{}.svg", r.label),
                histogram_chart(&format!("Hourly TMR price: {}", r.label), h),
            ));
        }
    }
    let mut written = Vec::new();
    for (name, chart) in charts {
        let path = dir.join(name);
        write_atomic(&path, chart.to_svg(prov).as_bytes())?;
        written.push(path);
    }
    Ok(written)
}
