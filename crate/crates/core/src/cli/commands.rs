use std::f64::consts::PI;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::{
    band_loops, diagnose, loop_centroid, loop_winding, mode_dipr, mode_ipr, refined_spectrum, sweep,
    ModeDiagnostics, SweepField, MIN_BAND_SAMPLES,
};
use crate::gbz::{
    boundary_curves_t2, gbz_consistency, kappa, reversal_interval, BoundaryLine, GbzPrediction,
    GbzReport, Interval,
};
use crate::model::{Band, Boundary};
use crate::qwalk::{
    distribution, evolve, mean_position, quasi_energy_bands, two_cell_suite, TwoCellRun, TwoCellSetting,
    Variant, WalkParams, WalkState,
};

use super::config::{
    config_error, default_cut, load, GbzConfig, PhaseDiagramConfig, SpectrumConfig, WalkConfig, WalkMode,
};
use super::output::{num, RunOutput, Table};
use super::{CliError, RunManifest};

fn band_name(b: Band) -> &'static str {
    match b {
        Band::Plus => "plus",
        Band::Minus => "minus",
    }
}

#[derive(Serialize)]
struct BandSummary {
    band: Band,
    winding: i64,
    centroid_re: f64,
    centroid_im: f64,
}

#[derive(Serialize)]
struct SpectrumSummary {
    diagnostics: ModeDiagnostics,
    /// Imaginary gauge used to condition the OBC decomposition.
    gauge: f64,
    max_relative_residual: f64,
    defective_suspect: bool,
    bands: Vec<BandSummary>,
}

/// OBC eigenvalues with per-mode diagnostics, PBC band loops, and optionally
/// mode densities.
pub fn cmd_spectrum(config: &Path, out: &Path) -> Result<RunManifest, CliError> {
    let (cfg, text): (SpectrumConfig, _) = load(config)?;
    let ladder = cfg.ladder();
    ladder.validate(&text)?;
    if cfg.n_k < MIN_BAND_SAMPLES {
        return Err(config_error(
            &text,
            "n_k",
            format!("needs at least {} samples", MIN_BAND_SAMPLES),
        ));
    }
    let obc = ladder.params(Boundary::Obc);
    let len = obc.len;
    let mut run = RunOutput::new("spectrum", config, &text, out)?;

    let refined = refined_spectrum(&obc)?;
    let spec = &refined.spectrum;
    let ipr = mode_ipr(spec, len)?;
    let dipr = mode_dipr(spec, len)?;
    let mut t = Table::new(&["mode", "e_re", "e_im", "residual", "ipr", "dipr"])?;
    for (m, e) in spec.eigenvalues.iter().enumerate() {
        t.row([
            m.to_string(),
            num(e.re),
            num(e.im),
            num(spec.residuals[m]),
            num(ipr[m]),
            num(dipr[m]),
        ])?;
    }
    run.write_csv("obc_spectrum.csv", t)?;

    if cfg.profiles {
        let mut t = Table::new(&["mode", "x", "rho_a", "rho_b"])?;
        for (m, v) in spec.vectors.iter().enumerate() {
            for x in 0..len {
                t.row([
                    m.to_string(),
                    (x + 1).to_string(),
                    num(v[2 * x].norm_sqr()),
                    num(v[2 * x + 1].norm_sqr()),
                ])?;
            }
        }
        run.write_csv("profiles.csv", t)?;
    }

    let loops = band_loops(&ladder.params(Boundary::Pbc), cfg.n_k)?;
    let mut t = Table::new(&["k", "band", "e_re", "e_im"])?;
    let mut bands = Vec::new();
    for band in [Band::Plus, Band::Minus] {
        let b = loops.branch(band);
        for (k, e) in loops.tracked.k.iter().zip(&loops.tracked.values[b]) {
            t.row([num(*k), band_name(band).to_string(), num(e.re), num(e.im)])?;
        }
        let closed = loops.closed_loop(band);
        let c = loop_centroid(&closed);
        bands.push(BandSummary {
            band,
            winding: loop_winding(&closed)?,
            centroid_re: c.re,
            centroid_im: c.im,
        });
    }
    run.write_csv("pbc_bands.csv", t)?;

    let summary = SpectrumSummary {
        diagnostics: diagnose(spec, len)?,
        gauge: refined.gauge,
        max_relative_residual: spec.relative_residual(),
        defective_suspect: spec.defective_suspect,
        bands,
    };
    run.write_json("summary.json", &summary)?;
    run.finish(&cfg)
}

fn boundary_table(lines: &[BoundaryLine], t_b: (f64, f64), samples: usize) -> Result<Table, CliError> {
    let mut t = Table::new(&["band", "line", "t_b", "t_a"])?;
    for (i, line) in lines.iter().enumerate() {
        let kind = if i % 2 == 0 { "odd" } else { "even" };
        for j in 0..samples {
            let x = if samples > 1 {
                t_b.0 + (t_b.1 - t_b.0) * j as f64 / (samples - 1) as f64
            } else {
                t_b.0
            };
            t.row([band_name(line.band).to_string(), kind.to_string(), num(x), num(line.t_a(x))])?;
        }
    }
    Ok(t)
}

/// Grid sweep of localization observables, with the analytic boundary lines
/// sampled over the swept `t_b` range in a companion file.
pub fn cmd_phase_diagram(config: &Path, out: &Path) -> Result<RunManifest, CliError> {
    let (cfg, text): (PhaseDiagramConfig, _) = load(config)?;
    let grid = cfg.grid(&text)?;
    let mut run = RunOutput::new("phase-diagram", config, &text, out)?;
    let result = sweep(&grid, &cfg.observables)?;

    let mut header: Vec<&str> = grid.axes.iter().map(|a| a.field.name()).collect();
    header.extend(result.observables.iter().map(|o| o.name()));
    header.extend(["defective", "error"]);
    let mut t = Table::new(&header)?;
    for p in &result.points {
        let mut row: Vec<String> = p.coords.iter().chain(&p.values).map(|v| num(*v)).collect();
        row.push(p.defective.to_string());
        row.push(p.error.clone().unwrap_or_default());
        t.row(row)?;
    }
    run.write_csv("grid.csv", t)?;

    if let Ok(lines) = boundary_curves_t2(grid.base.alpha_a, grid.base.alpha_b, grid.base.t2) {
        let range = grid
            .axes
            .iter()
            .find(|a| a.field == SweepField::TB)
            .and_then(|a| {
                let lo = a.values.iter().cloned().fold(f64::INFINITY, f64::min);
                let hi = a.values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                (lo <= hi).then_some((lo, hi))
            })
            .unwrap_or((-1.5, 1.5));
        run.write_csv("boundary.csv", boundary_table(&lines, range, cfg.boundary_samples)?)?;
    }

    let failed = result.failures();
    let total = result.points.len();
    let manifest = run.finish(&cfg)?;
    match failed {
        0 => Ok(manifest),
        f if f == total => Err(CliError::Numerical(crate::Error::Solver(format!(
            "all {total} sweep points failed; first error: {}",
            result.points[0].error.as_deref().unwrap_or("")
        )))),
        f => Err(CliError::Partial { failed: f, total }),
    }
}

#[derive(Serialize)]
struct PointSummary {
    variant: Variant,
    xbar: Option<f64>,
    final_norm: Option<f64>,
    error: Option<String>,
}

#[derive(Serialize)]
struct WindingRow {
    variant: Variant,
    theta2: f64,
    theta3: f64,
    branch: usize,
    winding: i64,
    area: f64,
    diameter: f64,
}

/// Walk dynamics (`point`, `grid`), quasi-energy windings (`bands`) or the
/// two-cell table (`two_cell`).
pub fn cmd_walk(config: &Path, out: &Path) -> Result<RunManifest, CliError> {
    let (cfg, text): (WalkConfig, _) = load(config)?;
    cfg.validate(&text)?;
    let mut run = RunOutput::new("walk", config, &text, out)?;
    let mut failed = 0;
    let mut total = 0;
    match cfg.mode {
        WalkMode::Point => {
            let mut summary = Vec::new();
            for &v in &cfg.variants {
                let p = cfg.params(v);
                total += 1;
                match evolve(&p, &WalkState::centered_spin_up(p.sites)) {
                    Ok(ev) => {
                        let rho = distribution(&ev.state)?;
                        let mut t = Table::new(&["x", "rho"])?;
                        for (x, r) in p.sites.positions().zip(&rho) {
                            t.row([x.to_string(), num(*r)])?;
                        }
                        run.write_csv(&format!("rho_{}.csv", v.name()), t)?;
                        let mut t = Table::new(&["step", "norm"])?;
                        for (s, n) in ev.norms.iter().enumerate() {
                            t.row([s.to_string(), num(*n)])?;
                        }
                        run.write_csv(&format!("norms_{}.csv", v.name()), t)?;
                        summary.push(PointSummary {
                            variant: v,
                            xbar: Some(mean_position(&ev.state)?),
                            final_norm: ev.norms.last().copied(),
                            error: None,
                        });
                    }
                    Err(e) => {
                        failed += 1;
                        summary.push(PointSummary {
                            variant: v,
                            xbar: None,
                            final_norm: None,
                            error: Some(e.to_string()),
                        });
                    }
                }
            }
            run.write_json("summary.json", &summary)?;
        }
        WalkMode::Grid => {
            let t2s = cfg.theta2_range.as_ref().map(|r| r.values()).unwrap_or_default();
            let t3s = cfg.theta3_range.as_ref().map(|r| r.values()).unwrap_or_default();
            let mut points: Vec<(Variant, f64, f64)> = Vec::new();
            for &v in &cfg.variants {
                for &a in &t2s {
                    points.extend(t3s.iter().map(|&b| (v, a, b)));
                }
            }
            let results: Vec<std::result::Result<f64, String>> = points
                .par_iter()
                .map(|&(v, a, b)| {
                    let p = WalkParams {
                        theta2: a,
                        theta3: b,
                        ..cfg.params(v)
                    };
                    evolve(&p, &WalkState::centered_spin_up(p.sites))
                        .and_then(|ev| mean_position(&ev.state))
                        .map_err(|e| e.to_string())
                })
                .collect();
            let mut t = Table::new(&["variant", "theta2", "theta3", "xbar", "error"])?;
            for (&(v, a, b), r) in points.iter().zip(&results) {
                total += 1;
                let (x, e) = match r {
                    Ok(x) => (num(*x), String::new()),
                    Err(e) => {
                        failed += 1;
                        (num(f64::NAN), e.clone())
                    }
                };
                t.row([v.name().to_string(), num(a), num(b), x, e])?;
            }
            run.write_csv("xbar_grid.csv", t)?;
        }
        WalkMode::Bands => {
            let cut = cfg.cut.clone().unwrap_or_else(default_cut);
            let mut rows = Vec::new();
            for &v in &cfg.variants {
                for (i, pair) in cut.iter().enumerate() {
                    let p = WalkParams {
                        theta2: pair.theta2.0,
                        theta3: pair.theta3.0,
                        ..cfg.params(v)
                    };
                    let bands = quasi_energy_bands(&p, cfg.n_k)?;
                    let mut t = Table::new(&["k", "branch", "eps_re", "eps_im"])?;
                    for (b, lp) in bands.loops.iter().enumerate() {
                        for (j, e) in lp.iter().enumerate() {
                            let k = 2.0 * PI * j as f64 / cfg.n_k as f64;
                            t.row([num(k), b.to_string(), num(e.re), num(e.im)])?;
                        }
                        rows.push(WindingRow {
                            variant: v,
                            theta2: p.theta2,
                            theta3: p.theta3,
                            branch: b,
                            winding: bands.windings[b],
                            area: bands.areas[b],
                            diameter: bands.diameters[b],
                        });
                    }
                    run.write_csv(&format!("bands_{}_{i}.csv", v.name()), t)?;
                }
            }
            let mut t = Table::new(&["variant", "theta2", "theta3", "branch", "winding", "area", "diameter"])?;
            for r in &rows {
                t.row([
                    r.variant.name().to_string(),
                    num(r.theta2),
                    num(r.theta3),
                    r.branch.to_string(),
                    r.winding.to_string(),
                    num(r.area),
                    num(r.diameter),
                ])?;
            }
            run.write_csv("windings.csv", t)?;
        }
        WalkMode::TwoCell => {
            let setting = TwoCellSetting {
                thetas: (cfg.theta1.0, cfg.theta2.0, cfg.theta3.0),
                alpha: cfg.alpha_a,
                steps: cfg.steps,
            };
            let runs: Vec<TwoCellRun> = two_cell_suite(&setting)?;
            let mut t = Table::new(&["variant", "hermitian", "initial", "rho_1", "rho_2", "direction"])?;
            for r in &runs {
                t.row([
                    r.variant.name().to_string(),
                    r.hermitian.to_string(),
                    r.initial.name().to_string(),
                    num(r.rho.0),
                    num(r.rho.1),
                    r.direction().to_string(),
                ])?;
            }
            run.write_csv("two_cell.csv", t)?;
        }
    }
    let manifest = run.finish(&cfg)?;
    match failed {
        0 => Ok(manifest),
        f if f == total => Err(CliError::Numerical(crate::Error::Solver(format!(
            "all {total} walk runs failed"
        )))),
        f => Err(CliError::Partial { failed: f, total }),
    }
}

#[derive(Serialize)]
struct GbzSummary {
    /// `None` when the `t₂`-free denominator vanishes.
    kappa: Option<f64>,
    kappa_degenerate: bool,
    prediction: GbzPrediction,
    reversal_interval: Option<Interval>,
    reversal_interval_empty: Option<bool>,
    consistency: Vec<GbzReport>,
}

/// First-order predictions: κ, κ±, reversal interval, boundary lines and
/// the dispersion consistency report.
pub fn cmd_gbz(config: &Path, out: &Path) -> Result<RunManifest, CliError> {
    let (cfg, text): (GbzConfig, _) = load(config)?;
    let ladder = cfg.ladder();
    ladder.validate(&text)?;
    if cfg.k_samples == 0 {
        return Err(config_error(&text, "k_samples", "must be positive"));
    }
    let p = ladder.params(Boundary::Obc);
    let mut run = RunOutput::new("gbz", config, &text, out)?;

    let k = kappa(&p).ok();
    let interval = reversal_interval(p.alpha_a, p.alpha_b).ok();
    let consistency = gbz_consistency(&p, cfg.k_samples);
    let mut t = Table::new(&["band", "kappa", "f_r", "f_i", "dispersion_error", "satisfied"])?;
    for r in &consistency {
        t.row([
            band_name(r.band).to_string(),
            num(r.kappa),
            num(r.f_r),
            num(r.f_i),
            num(r.dispersion_error),
            r.satisfied.to_string(),
        ])?;
    }
    run.write_csv("consistency.csv", t)?;
    if let Ok(lines) = boundary_curves_t2(p.alpha_a, p.alpha_b, p.t2) {
        run.write_csv("boundary.csv", boundary_table(&lines, cfg.t_b_range, cfg.boundary_samples)?)?;
    }
    let summary = GbzSummary {
        kappa: k,
        kappa_degenerate: k.is_none(),
        prediction: GbzPrediction::new(&p),
        reversal_interval: interval,
        reversal_interval_empty: interval.map(|i| i.is_empty()),
        consistency,
    };
    run.write_json("gbz.json", &summary)?;
    run.finish(&cfg)
}
