//! CSV and SVG writers for scan results.

use std::fmt::Write as _;
use std::path::Path;

use plotters::prelude::*;

use super::{PlotAxis, Quantity, ScanResult};
use crate::error::{Error, Result};
use crate::units::{Quantity as Dimensioned, Unit};

/// CSV text: `#`-prefixed metadata, a header starting with `omega_ev`, then
/// one row per grid point in 17-significant-digit scientific notation.
pub fn csv_string(r: &ScanResult) -> String {
    let mut out = String::new();
    out.push_str("# scenario (resolved)\n");
    for line in r.metadata() {
        let _ = writeln!(out, "# {line}");
    }
    out.push_str("omega_ev");
    for (q, _) in &r.columns {
        out.push(',');
        out.push_str(q.name());
    }
    out.push('\n');
    for (i, w) in r.omega_ev.iter().enumerate() {
        let _ = write!(out, "{w:.16e}");
        for (_, col) in &r.columns {
            let _ = write!(out, ",{:.16e}", col[i]);
        }
        out.push('\n');
    }
    out
}

pub fn emit_csv(r: &ScanResult, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, csv_string(r)).map_err(|e| Error::io(path, e))
}

/// Parsed CSV contents: column names (including `omega_ev`) and rows.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

pub fn parse_csv(text: &str, origin: &str) -> Result<CsvTable> {
    let mut header: Option<Vec<String>> = None;
    let mut rows = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if line.starts_with('#') || line.trim().is_empty() {
            continue;
        }
        let err = |message: String| Error::Parse {
            path: origin.to_string(),
            line: idx + 1,
            message,
        };
        match &header {
            None => header = Some(line.split(',').map(str::to_string).collect()),
            Some(h) => {
                let row = line
                    .split(',')
                    .map(|c| c.parse::<f64>().map_err(|e| err(format!("bad number {c:?}: {e}"))))
                    .collect::<Result<Vec<_>>>()?;
                if row.len() != h.len() {
                    return Err(err(format!("expected {} columns, found {}", h.len(), row.len())));
                }
                rows.push(row);
            }
        }
    }
    let header = header.ok_or_else(|| Error::Parse {
        path: origin.to_string(),
        line: 0,
        message: "missing header".into(),
    })?;
    Ok(CsvTable { header, rows })
}

fn plot_error(path: &Path, e: impl std::fmt::Display) -> Error {
    Error::io(path, std::io::Error::other(e.to_string()))
}

fn wavelength_nm(omega_ev: f64) -> f64 {
    Dimensioned::new(omega_ev, Unit::ElectronVolt)
        .convert(Unit::Nanometer)
        .map(|q| q.value)
        .unwrap_or(f64::NAN)
}

/// SVG line plot of every column, each normalized to its own maximum |value|.
/// With `log_scale`, non-positive samples are dropped.
pub fn emit_plot(r: &ScanResult, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let out = &r.scenario.output;
    let x: Vec<f64> = match out.plot_axis {
        PlotAxis::Energy => r.omega_ev.clone(),
        PlotAxis::Wavelength => r.omega_ev.iter().map(|&w| wavelength_nm(w)).collect(),
    };
    let x_label = match out.plot_axis {
        PlotAxis::Energy => "photon energy (eV)",
        PlotAxis::Wavelength => "wavelength (nm)",
    };
    let (x_lo, x_hi) = x
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));

    let series: Vec<(Quantity, Vec<(f64, f64)>)> = r
        .columns
        .iter()
        .map(|(q, col)| {
            let scale = col.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
            let pts = x
                .iter()
                .zip(col)
                .map(|(&xi, &v)| (xi, if scale > 0.0 { v / scale } else { v }))
                .filter(|&(_, v)| !out.log_scale || v > 0.0)
                .collect();
            (*q, pts)
        })
        .collect();

    let root = SVGBackend::new(path, (960, 640)).into_drawing_area();
    root.fill(&WHITE).map_err(|e| plot_error(path, e))?;
    let caption = format!(
        "{} ({})",
        r.scenario.name,
        if out.log_scale { "log scale" } else { "normalized" }
    );

    macro_rules! draw {
        ($chart:expr) => {{
            let mut chart = $chart;
            chart
                .configure_mesh()
                .x_desc(x_label)
                .y_desc("value / max |value|")
                .draw()
                .map_err(|e| plot_error(path, e))?;
            for (i, (q, pts)) in series.iter().enumerate() {
                let color = Palette99::pick(i).to_rgba();
                chart
                    .draw_series(LineSeries::new(pts.iter().copied(), color.stroke_width(2)))
                    .map_err(|e| plot_error(path, e))?
                    .label(q.name())
                    .legend(move |(px, py)| PathElement::new(vec![(px, py), (px + 20, py)], color));
            }
            chart
                .configure_series_labels()
                .background_style(WHITE.mix(0.8))
                .border_style(BLACK)
                .draw()
                .map_err(|e| plot_error(path, e))?;
        }};
    }

    let mut builder = ChartBuilder::on(&root);
    builder
        .caption(caption, ("sans-serif", 22))
        .margin(12)
        .x_label_area_size(48)
        .y_label_area_size(64);
    if out.log_scale {
        let y_lo = series
            .iter()
            .flat_map(|(_, p)| p.iter().map(|&(_, v)| v))
            .fold(1.0_f64, f64::min)
            .max(1e-12);
        draw!(builder
            .build_cartesian_2d(x_lo..x_hi, (y_lo..1.5).log_scale())
            .map_err(|e| plot_error(path, e))?);
    } else {
        let y_lo = series
            .iter()
            .flat_map(|(_, p)| p.iter().map(|&(_, v)| v))
            .fold(0.0_f64, f64::min);
        draw!(builder
            .build_cartesian_2d(x_lo..x_hi, y_lo..1.05)
            .map_err(|e| plot_error(path, e))?);
    }
    root.present().map_err(|e| plot_error(path, e))?;
    Ok(())
}
