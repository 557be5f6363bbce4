//! Localization diagnostics, spectral winding, transition finding and
//! parameter sweeps for the ladder.
//!
//! Mode amplitudes are indexed as in [`crate::model`]: `ψ^a_x` at `2(x-1)`,
//! `ψ^b_x` at `2(x-1)+1`.

mod spectrum;
mod sweep;
mod transition;
mod winding;

pub use spectrum::{ladder_spectrum, localization_gauge, refined_spectrum, spectrum_in_gauge, RefinedSpectrum};
pub use sweep::{sweep, GridAxis, GridSpec, Observable, SweepField, SweepPoint, SweepResult};
pub use transition::{find_transition, TRANSITION_TOL};
pub use winding::{
    band_loops, band_winding, loop_area, loop_centroid, loop_diameter, loop_winding, track_bands,
    winding_number, BandLoops, TrackedBands, MIN_BAND_SAMPLES,
};

use serde::Serialize;

use crate::eig::ComplexSpectrum;
use crate::error::{Error, Result};

/// Averaged localization diagnostics of one OBC spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModeDiagnostics {
    pub ipr_avg: f64,
    pub dipr_avg: f64,
    pub delta_rho_avg: f64,
    /// `(Re E < 0, Re E ≥ 0)` band averages of the per-mode dIPR.
    pub dipr_per_band: (f64, f64),
    pub kappa_fit: Option<f64>,
}

fn check_dim(spec: &ComplexSpectrum, len: usize) -> Result<()> {
    if spec.dim() != 2 * len {
        return Err(Error::DimensionMismatch {
            expected: 2 * len,
            found: spec.dim(),
        });
    }
    Ok(())
}

/// Per-site densities `(|ψ^a_x|², |ψ^b_x|²)` of a mode.
fn densities(v: &[num_complex::Complex64]) -> impl Iterator<Item = (f64, f64)> + '_ {
    v.chunks_exact(2).map(|c| (c[0].norm_sqr(), c[1].norm_sqr()))
}

/// Per-mode inverse participation ratio `Σ_x |ψ^a_x|⁴ + |ψ^b_x|⁴`.
pub fn mode_ipr(spec: &ComplexSpectrum, len: usize) -> Result<Vec<f64>> {
    check_dim(spec, len)?;
    Ok(spec
        .vectors
        .iter()
        .map(|v| densities(v).map(|(a, b)| a * a + b * b).sum())
        .collect())
}

pub fn ipr_avg(spec: &ComplexSpectrum, len: usize) -> Result<f64> {
    Ok(mode_ipr(spec, len)?.iter().sum::<f64>() / (2 * len) as f64)
}

/// Per-mode directional IPR with site weights `(x − (L+1)/2) / ((L−1)/2)`
/// running from −1 at the left edge to +1 at the right edge.
pub fn mode_dipr(spec: &ComplexSpectrum, len: usize) -> Result<Vec<f64>> {
    check_dim(spec, len)?;
    if len < 2 {
        return Err(Error::InvalidParams("directional IPR needs L >= 2".into()));
    }
    let centre = (len as f64 + 1.0) / 2.0;
    let half = (len as f64 - 1.0) / 2.0;
    Ok(spec
        .vectors
        .iter()
        .map(|v| {
            densities(v)
                .enumerate()
                .map(|(i, (a, b))| ((i + 1) as f64 - centre) / half * (a * a + b * b))
                .sum()
        })
        .collect())
}

/// Negative for accumulation at small `x`, positive at large `x`.
pub fn dipr_avg(spec: &ComplexSpectrum, len: usize) -> Result<f64> {
    Ok(mode_dipr(spec, len)?.iter().sum::<f64>() / (2 * len) as f64)
}

pub fn delta_rho_avg(spec: &ComplexSpectrum, len: usize) -> Result<f64> {
    check_dim(spec, len)?;
    let total: f64 = spec
        .vectors
        .iter()
        .map(|v| densities(v).map(|(a, b)| a - b).sum::<f64>().abs())
        .sum();
    Ok(total / (2 * len) as f64)
}

/// Mean per-mode dIPR over `Re E < 0` and over `Re E ≥ 0`. An empty band
/// yields NaN.
pub fn dipr_per_band(spec: &ComplexSpectrum, len: usize) -> Result<(f64, f64)> {
    let d = mode_dipr(spec, len)?;
    let (mut lo, mut n_lo, mut hi, mut n_hi) = (0.0, 0usize, 0.0, 0usize);
    for (e, v) in spec.eigenvalues.iter().zip(d) {
        if e.re < 0.0 {
            lo += v;
            n_lo += 1;
        } else {
            hi += v;
            n_hi += 1;
        }
    }
    let mean = |s: f64, n: usize| if n == 0 { f64::NAN } else { s / n as f64 };
    Ok((mean(lo, n_lo), mean(hi, n_hi)))
}

/// Bulk fit window `[⌈0.15L⌉, ⌊0.85L⌋]` (1-based sites).
pub fn fit_window(len: usize) -> (usize, usize) {
    let lo = ((0.15 * len as f64).ceil() as usize).max(1);
    let hi = (0.85 * len as f64).floor() as usize;
    (lo, hi)
}

pub const MIN_FIT_POINTS: usize = 5;

/// Least-squares slope of `ys` against `xs`.
pub(crate) fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    sxy / sxx
}

pub(crate) fn median(mut v: Vec<f64>) -> Option<f64> {
    if v.is_empty() {
        return None;
    }
    v.sort_by(f64::total_cmp);
    let n = v.len();
    Some(if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    })
}

/// Per-mode `κ = −slope/2` of `ln(|ψ^a_x|² + |ψ^b_x|²)` over the bulk window;
/// `None` for modes that vanish somewhere in the window.
pub fn mode_kappas(spec: &ComplexSpectrum, len: usize) -> Result<Vec<Option<f64>>> {
    check_dim(spec, len)?;
    let (lo, hi) = fit_window(len);
    let found = (hi + 1).saturating_sub(lo);
    if found < MIN_FIT_POINTS {
        return Err(Error::TooFewPoints {
            needed: MIN_FIT_POINTS,
            found,
        });
    }
    let xs: Vec<f64> = (lo..=hi).map(|x| x as f64).collect();
    Ok(spec
        .vectors
        .iter()
        .map(|v| {
            let ys: Vec<f64> = (lo..=hi)
                .map(|x| (v[2 * (x - 1)].norm_sqr() + v[2 * (x - 1) + 1].norm_sqr()).ln())
                .collect();
            ys.iter().all(|y| y.is_finite()).then(|| -0.5 * slope(&xs, &ys))
        })
        .collect())
}

/// Median fitted inverse localization length; positive means left-localized.
pub fn fit_kappa(spec: &ComplexSpectrum, len: usize) -> Result<f64> {
    let ks: Vec<f64> = mode_kappas(spec, len)?.into_iter().flatten().collect();
    median(ks).ok_or(Error::TooFewPoints {
        needed: 1,
        found: 0,
    })
}

pub fn diagnose(spec: &ComplexSpectrum, len: usize) -> Result<ModeDiagnostics> {
    Ok(ModeDiagnostics {
        ipr_avg: ipr_avg(spec, len)?,
        dipr_avg: dipr_avg(spec, len)?,
        delta_rho_avg: delta_rho_avg(spec, len)?,
        dipr_per_band: dipr_per_band(spec, len)?,
        kappa_fit: fit_kappa(spec, len).ok(),
    })
}
