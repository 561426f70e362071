//! CSV and SVG writers for experiment results.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use plu_core::{Dataset, Error, Mlp, TrainRecord};

use crate::error::{CliError, Result};

/// Shortest decimal that parses back to the same `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

pub fn loss_csv(records: &[TrainRecord]) -> Result<String> {
    if records.is_empty() {
        return Err(CliError::Precondition(
            "no training records to write".into(),
        ));
    }
    let mut out = String::from("step,loss\n");
    for r in records {
        writeln!(out, "{},{}", r.step, fmt_f64(r.loss)).unwrap();
    }
    Ok(out)
}

/// `step,loss` CSV, one row per record.
pub fn write_loss_csv(records: &[TrainRecord], path: &Path) -> Result<()> {
    write_file(path, &loss_csv(records)?)
}

pub fn parse_loss_csv(text: &str) -> Result<Vec<TrainRecord>> {
    let mut lines = text.lines();
    if lines.next() != Some("step,loss") {
        return Err(CliError::Precondition("missing `step,loss` header".into()));
    }
    lines
        .map(|l| {
            let bad = || CliError::Precondition(format!("bad loss row `{l}`"));
            let (step, loss) = l.split_once(',').ok_or_else(bad)?;
            Ok(TrainRecord {
                step: step.parse().map_err(|_| bad())?,
                loss: loss.parse().map_err(|_| bad())?,
            })
        })
        .collect()
}

fn column_names(base: &str, dim: usize) -> Vec<String> {
    if dim == 1 {
        vec![base.to_owned()]
    } else {
        (0..dim).map(|i| format!("{base}_{i}")).collect()
    }
}

/// Inputs, targets and model outputs side by side, one row per sample.
///
/// `input_label` names the input columns (`x` for the sine, `t` for the curve).
pub fn predictions_csv(model: &Mlp, data: &Dataset, input_label: &str) -> Result<String> {
    if data.x.rows() != model.in_dim() {
        return Err(Error::shape("predictions", (model.in_dim(), 1), data.x.shape()).into());
    }
    if data.y.rows() != model.out_dim() {
        return Err(Error::shape("predictions", (model.out_dim(), 1), data.y.shape()).into());
    }
    let pred = model.predict(&data.x)?;
    let header: Vec<String> = column_names(input_label, data.x.rows())
        .into_iter()
        .chain(column_names("y_true", data.y.rows()))
        .chain(column_names("y_pred", pred.rows()))
        .collect();
    let mut out = header.join(",");
    out.push('\n');
    for j in 0..data.len() {
        let row: Vec<String> = data
            .x
            .col(j)
            .into_iter()
            .chain(data.y.col(j))
            .chain(pred.col(j))
            .map(fmt_f64)
            .collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    Ok(out)
}

pub fn write_predictions_csv(
    model: &Mlp,
    data: &Dataset,
    input_label: &str,
    path: &Path,
) -> Result<()> {
    write_file(path, &predictions_csv(model, data, input_label)?)
}

const PALETTE: [&str; 6] = [
    "#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf",
];
const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 60.0;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Standalone SVG of loss curves with a logarithmic y axis.
pub fn svg_plot(series: &[(String, Vec<TrainRecord>)]) -> Result<String> {
    let series: Vec<_> = series.iter().filter(|(_, r)| !r.is_empty()).collect();
    if series.is_empty() {
        return Err(CliError::Precondition("nothing to plot".into()));
    }

    let all = || series.iter().flat_map(|(_, r)| r.iter());
    let max_step = all().map(|r| r.step).max().unwrap_or(1).max(2) as f64;
    let min_step = all().map(|r| r.step).min().unwrap_or(1) as f64;
    let floor = all()
        .map(|r| r.loss)
        .filter(|l| *l > 0.0 && l.is_finite())
        .fold(f64::INFINITY, f64::min);
    let floor = if floor.is_finite() { floor } else { 1e-12 };
    let log = |l: f64| {
        if l > 0.0 && l.is_finite() {
            l.log10()
        } else {
            floor.log10()
        }
    };
    let lo = all()
        .map(|r| log(r.loss))
        .fold(f64::INFINITY, f64::min)
        .floor();
    let mut hi = all()
        .map(|r| log(r.loss))
        .fold(f64::NEG_INFINITY, f64::max)
        .ceil();
    if hi <= lo {
        hi = lo + 1.0;
    }

    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let span = (max_step - min_step).max(1.0);
    let px = |step: usize| LEFT + (step as f64 - min_step) / span * plot_w;
    let py = |loss: f64| TOP + (hi - log(loss)) / (hi - lo) * plot_h;

    let mut svg = String::new();
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    )
    .unwrap();
    writeln!(
        svg,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    )
    .unwrap();
    writeln!(
        svg,
        r#"<rect x="{LEFT}" y="{TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#
    )
    .unwrap();

    // decade ticks
    let mut e = lo as i32;
    while e as f64 <= hi {
        let y = TOP + (hi - e as f64) / (hi - lo) * plot_h;
        writeln!(
            svg,
            r##"<line x1="{LEFT}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#dddddd"/>"##,
            LEFT + plot_w
        )
        .unwrap();
        writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">1e{e}</text>"#,
            LEFT - 6.0,
            y + 4.0
        )
        .unwrap();
        e += 1;
    }
    for (label, step) in [(min_step as usize, min_step), (max_step as usize, max_step)] {
        writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{label}</text>"#,
            px(step as usize),
            TOP + plot_h + 18.0
        )
        .unwrap();
    }
    writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">step</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 15.0
    )
    .unwrap();
    writeln!(
        svg,
        r#"<text x="20" y="{:.2}" text-anchor="middle" transform="rotate(-90 20 {:.2})">MSE loss (log scale)</text>"#,
        TOP + plot_h / 2.0,
        TOP + plot_h / 2.0
    )
    .unwrap();

    for (i, (name, records)) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let points: Vec<String> = records
            .iter()
            .map(|r| format!("{:.2},{:.2}", px(r.step), py(r.loss)))
            .collect();
        writeln!(
            svg,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            points.join(" ")
        )
        .unwrap();
        let ly = TOP + 10.0 + 20.0 * i as f64;
        let lx = WIDTH - RIGHT + 15.0;
        writeln!(
            svg,
            r#"<g class="legend"><line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="3"/><text x="{}" y="{}">{}</text></g>"#,
            lx + 25.0,
            lx + 32.0,
            ly + 4.0,
            escape(name)
        )
        .unwrap();
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

pub fn emit_svg_plot(series: &[(String, Vec<TrainRecord>)], path: &Path) -> Result<()> {
    write_file(path, &svg_plot(series)?)
}
