//! Quasi-energy bands `U_k Ψ_k = e^{−iε_k} Ψ_k` of the walk under PBC.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::analysis::{loop_area, loop_diameter, loop_winding, track_bands, TrackedBands};
use crate::eig::decompose;
use crate::error::{Error, Result};

use super::{build_floquet, WalkParams};

pub const MIN_WALK_K: usize = 128;

/// `ε = i log λ` on the principal branch, so `Re ε ∈ (−π, π]`.
pub fn quasi_energy(lambda: Complex64) -> Complex64 {
    Complex64::new(0.0, 1.0) * lambda.ln()
}

/// Shifts `e` by a multiple of 2π in its real part to land closest to `prev`.
fn continue_branch(prev: Complex64, e: Complex64) -> Complex64 {
    let m = ((prev.re - e.re) / (2.0 * PI)).round();
    Complex64::new(e.re + 2.0 * PI * m, e.im)
}

#[derive(Debug, Clone)]
pub struct QuasiBands {
    pub tracked: TrackedBands,
    /// Continuous closed ε-loop through each branch.
    pub loops: Vec<Vec<Complex64>>,
    pub windings: Vec<i64>,
    /// Signed shoelace area of each loop.
    pub areas: Vec<f64>,
    pub diameters: Vec<f64>,
}

impl QuasiBands {
    /// Largest `|area| / diam²` over the bands; near zero when no band
    /// encloses area.
    pub fn max_area_ratio(&self) -> f64 {
        self.areas
            .iter()
            .zip(&self.diameters)
            .map(|(a, d)| if *d > 0.0 { a.abs() / (d * d) } else { 0.0 })
            .fold(0.0, f64::max)
    }
}

/// Tracks the four bands of `U_k` over `k ∈ [0, 2π)`, continues the
/// quasi-energies in `k` and winds each closed loop about its centroid.
pub fn quasi_energy_bands(params: &WalkParams, n_k: usize) -> Result<QuasiBands> {
    params.validate()?;
    if n_k < MIN_WALK_K {
        return Err(Error::TooFewPoints {
            needed: MIN_WALK_K,
            found: n_k,
        });
    }
    let floquet = build_floquet(params);
    let tracked = track_bands(n_k, |k| {
        let s = decompose(&floquet.bloch(k))?;
        Ok((s.eigenvalues, s.vectors))
    })?;

    let mut loops = Vec::with_capacity(tracked.values.len());
    let mut windings = Vec::new();
    let mut areas = Vec::new();
    let mut diameters = Vec::new();
    for b in 0..tracked.values.len() {
        let eigen_loop = tracked.closed_loop(b);
        let mut eps: Vec<Complex64> = Vec::with_capacity(eigen_loop.len());
        for &lambda in &eigen_loop {
            let e = quasi_energy(lambda);
            eps.push(match eps.last() {
                Some(&prev) => continue_branch(prev, e),
                None => e,
            });
        }
        // A branch whose real part drifts by 2π winds around the ε cylinder
        // and has no interior to wind about.
        let closure = continue_branch(*eps.last().unwrap(), quasi_energy(eigen_loop[0]));
        if (closure - eps[0]).norm() > 1e-6 {
            return Err(Error::Solver(format!(
                "quasi-energy branch {b} does not close in the ε plane"
            )));
        }
        let curve = eps;
        windings.push(loop_winding(&curve)?);
        areas.push(loop_area(&curve));
        diameters.push(loop_diameter(&curve));
        loops.push(curve);
    }
    Ok(QuasiBands {
        tracked,
        loops,
        windings,
        areas,
        diameters,
    })
}
