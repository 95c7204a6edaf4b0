//! Canned result figures: strength sweeps for the unbiased and biased
//! reference states, dephasing cuts at two strengths, and the full
//! strength x noise surface. Each figure is written as a CSV plus an SVG.

use std::fs;
use std::path::{Path, PathBuf};

use qdiscord::channels::sqd_dephased_closed;
use qdiscord::discord::{qd_closed, sqd_closed};
use qdiscord::measurement::MeasurementStrength;
use qdiscord::states::{ValidationMode, XStateParams};
use qdiscord::sweep::fmt_sig;
use qdiscord::verify::{FIGURE_PARAMS_BIASED, FIGURE_PARAMS_UNBIASED};

use crate::svg::{self, Series, Stroke};
use crate::AppResult;

/// Figure identifiers accepted by the `figures` subcommand.
pub const FIGURE_IDS: [&str; 5] = ["1a", "1b", "2a", "2b", "2c"];

const STRENGTH_STEPS: usize = 201;
const NOISE_STEPS: usize = 101;
const SURFACE_X_STEPS: usize = 51;
const SURFACE_P_STEPS: usize = 21;

fn grid(from: f64, to: f64, steps: usize) -> Vec<f64> {
    (0..steps)
        .map(|i| from + (to - from) * i as f64 / (steps - 1) as f64)
        .collect()
}

fn write_pair(outdir: &Path, id: &str, csv: &str, svg: &str) -> AppResult<Vec<PathBuf>> {
    fs::create_dir_all(outdir)?;
    let csv_path = outdir.join(format!("fig{id}.csv"));
    let svg_path = outdir.join(format!("fig{id}.svg"));
    crate::write_file(&csv_path, csv)?;
    crate::write_file(&svg_path, svg)?;
    Ok(vec![csv_path, svg_path])
}

/// Super discord and ordinary discord as functions of measurement strength.
fn strength_figure(outdir: &Path, id: &str, params: &XStateParams) -> AppResult<Vec<PathBuf>> {
    let mode = ValidationMode::Relaxed;
    let (qd, _) = qd_closed(params)?;
    let mut csv = String::from("x,sqd_paper,qd_closed\n");
    let mut sqd_points = Vec::with_capacity(STRENGTH_STEPS);
    let mut qd_points = Vec::with_capacity(STRENGTH_STEPS);
    for x in grid(0.0, 5.0, STRENGTH_STEPS) {
        let sqd = sqd_closed(params, &MeasurementStrength::new(x)?, mode)?;
        csv.push_str(&format!("{},{},{}\n", fmt_sig(x), fmt_sig(sqd), fmt_sig(qd)));
        sqd_points.push((x, sqd));
        qd_points.push((x, qd));
    }
    let title = format!("Weak-measurement discord, s = {}", fmt_sig(params.s));
    let chart = svg::line_chart(
        &title,
        "measurement strength x",
        "correlation (bits)",
        &[
            Series { label: "super discord".into(), stroke: Stroke::Solid, points: sqd_points },
            Series { label: "discord".into(), stroke: Stroke::Dashed, points: qd_points },
        ],
    );
    write_pair(outdir, id, &csv, &chart)
}

/// Super discord and discord along a phase-flip sweep at fixed strength.
fn noise_figure(outdir: &Path, id: &str, x: f64) -> AppResult<Vec<PathBuf>> {
    let params = FIGURE_PARAMS_BIASED;
    let strength = MeasurementStrength::new(x)?;
    let mut csv = String::from("p,sqd_dephased_closed,qd_closed\n");
    let mut sqd_points = Vec::with_capacity(NOISE_STEPS);
    let mut qd_points = Vec::with_capacity(NOISE_STEPS);
    for p in grid(0.0, 1.0, NOISE_STEPS) {
        let sqd = sqd_dephased_closed(&params, &strength, p, ValidationMode::Strict)?;
        let evolved = qdiscord::channels::evolve_params(&params, p)?;
        let (qd, _) = qd_closed(&evolved)?;
        csv.push_str(&format!("{},{},{}\n", fmt_sig(p), fmt_sig(sqd), fmt_sig(qd)));
        sqd_points.push((p, sqd));
        qd_points.push((p, qd));
    }
    let title = format!("Correlations under phase flips, x = {}", fmt_sig(x));
    let chart = svg::line_chart(
        &title,
        "flip probability p",
        "correlation (bits)",
        &[
            Series { label: "super discord".into(), stroke: Stroke::Solid, points: sqd_points },
            Series { label: "discord".into(), stroke: Stroke::Dashed, points: qd_points },
        ],
    );
    write_pair(outdir, id, &csv, &chart)
}

/// Super discord over the full strength x noise rectangle, as a heatmap.
fn surface_figure(outdir: &Path, id: &str) -> AppResult<Vec<PathBuf>> {
    let params = FIGURE_PARAMS_BIASED;
    let xs = grid(0.0, 5.0, SURFACE_X_STEPS);
    let ps = grid(0.0, 1.0, SURFACE_P_STEPS);
    let mut csv = String::from("x,p,sqd_dephased_closed\n");
    let mut values = Vec::with_capacity(xs.len());
    for &x in &xs {
        let strength = MeasurementStrength::new(x)?;
        let mut row = Vec::with_capacity(ps.len());
        for &p in &ps {
            let sqd = sqd_dephased_closed(&params, &strength, p, ValidationMode::Strict)?;
            csv.push_str(&format!("{},{},{}\n", fmt_sig(x), fmt_sig(p), fmt_sig(sqd)));
            row.push(sqd);
        }
        values.push(row);
    }
    let chart = svg::heatmap(
        "Super discord under dephasing",
        "measurement strength x",
        "flip probability p",
        &xs,
        &ps,
        &values,
    );
    write_pair(outdir, id, &csv, &chart)
}

/// Produce one figure into `outdir`, returning the files written.
pub fn write_figure(id: &str, outdir: &Path) -> AppResult<Vec<PathBuf>> {
    match id {
        "1a" => strength_figure(outdir, id, &FIGURE_PARAMS_UNBIASED),
        "1b" => strength_figure(outdir, id, &FIGURE_PARAMS_BIASED),
        "2a" => noise_figure(outdir, id, 1.0),
        "2b" => noise_figure(outdir, id, 5.0),
        "2c" => surface_figure(outdir, id),
        other => Err(crate::AppError::Usage(format!(
            "unknown figure id `{other}` (expected one of {})",
            FIGURE_IDS.join(", ")
        ))),
    }
}
