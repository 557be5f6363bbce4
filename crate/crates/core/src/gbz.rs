//! First-order generalized-Brillouin-zone predictions for the strongly
//! coupled ladder.
//!
//! Treating the rung coupling `t_⊥` as the unperturbed Hamiltonian, the
//! hybridized modes `(a ± b)/√2` form two effective Hatano–Nelson chains
//! whose left/right amplitudes are the interference sums
//!
//! ```text
//! A± = t_a e^{α_a} + t_b e^{α_b} ± t₂      (leftward)
//! B± = t_a e^{-α_a} + t_b e^{-α_b} ± t₂    (rightward)
//! ```
//!
//! (each halved in the effective chain). The skin modes of band `±` live on
//! `k → k + iκ±` with `κ± = ln √|A±/B±|`; `κ > 0` means left localization.
//! The on-site offset `μ` drops out at this order.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::model::{Band, LadderParams};

/// Smallest interference amplitude treated as non-zero.
pub const DEGENERATE_AMPLITUDE: f64 = 1e-12;

/// Interference sums `(A, B)` for a band.
pub fn effective_amplitudes(p: &LadderParams, band: Band) -> (f64, f64) {
    let s = band.sign() * p.t2;
    let left = p.t_a * p.alpha_a.exp() + p.t_b * p.alpha_b.exp() + s;
    let right = p.t_a * (-p.alpha_a).exp() + p.t_b * (-p.alpha_b).exp() + s;
    (left, right)
}

fn kappa_of(left: f64, right: f64, what: &'static str) -> Result<f64> {
    if right.abs() <= DEGENERATE_AMPLITUDE {
        return Err(Error::DegenerateDenominator(what));
    }
    Ok(0.5 * (left / right).abs().ln())
}

/// Band-independent inverse localization length (ignores `t₂`).
pub fn kappa(p: &LadderParams) -> Result<f64> {
    let q = LadderParams { t2: 0.0, ..*p };
    let (l, r) = effective_amplitudes(&q, Band::Plus);
    kappa_of(l, r, "kappa")
}

/// `(κ₊, κ₋)` including the `±t₂` shifts.
pub fn kappa_pm(p: &LadderParams) -> Result<(f64, f64)> {
    let (lp, rp) = effective_amplitudes(p, Band::Plus);
    let (lm, rm) = effective_amplitudes(p, Band::Minus);
    Ok((
        kappa_of(lp, rp, "kappa_plus")?,
        kappa_of(lm, rm, "kappa_minus")?,
    ))
}

/// Per-band prediction that never fails: a vanishing rightward amplitude
/// gives `κ = +∞` (perfectly unidirectional to first order), a vanishing
/// leftward amplitude `κ = −∞`; both set `divergent`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BandPrediction {
    pub kappa: f64,
    pub effective_left: f64,
    pub effective_right: f64,
    pub divergent: bool,
}

impl BandPrediction {
    pub fn new(p: &LadderParams, band: Band) -> Self {
        let (l, r) = effective_amplitudes(p, band);
        let (kappa, divergent) = if r.abs() <= DEGENERATE_AMPLITUDE {
            (f64::INFINITY, true)
        } else if l.abs() <= DEGENERATE_AMPLITUDE {
            (f64::NEG_INFINITY, true)
        } else {
            (0.5 * (l / r).abs().ln(), false)
        };
        Self {
            kappa,
            effective_left: l,
            effective_right: r,
            divergent,
        }
    }

    /// Reversed skin effect (right localization) for left-favouring chains.
    pub fn reversed(&self) -> bool {
        self.kappa < 0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GbzPrediction {
    pub plus: BandPrediction,
    pub minus: BandPrediction,
}

impl GbzPrediction {
    pub fn new(p: &LadderParams) -> Self {
        Self {
            plus: BandPrediction::new(p, Band::Plus),
            minus: BandPrediction::new(p, Band::Minus),
        }
    }

    pub fn band(&self, band: Band) -> &BandPrediction {
        match band {
            Band::Plus => &self.plus,
            Band::Minus => &self.minus,
        }
    }
}

/// Open interval of `t_a / (−t_b)` with reversed skin effect (`t₂ = 0`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    pub lower: f64,
    pub upper: f64,
}

impl Interval {
    pub fn is_empty(&self) -> bool {
        self.lower >= self.upper
    }

    pub fn contains(&self, v: f64) -> bool {
        v > self.lower && v < self.upper
    }
}

pub fn reversal_interval(alpha_a: f64, alpha_b: f64) -> Result<Interval> {
    if alpha_a == 0.0 {
        return Err(Error::DegenerateDenominator("reversal_interval (alpha_a = 0)"));
    }
    Ok(Interval {
        lower: alpha_b.sinh() / alpha_a.sinh(),
        upper: alpha_b.cosh() / alpha_a.cosh(),
    })
}

/// Straight line `t_a = slope · t_b + intercept` in the `(t_b, t_a)` plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundaryLine {
    pub band: Band,
    pub slope: f64,
    pub intercept: f64,
}

impl BoundaryLine {
    pub fn t_a(&self, t_b: f64) -> f64 {
        self.slope * t_b + self.intercept
    }

    /// Euclidean distance of `(t_b, t_a)` from the line.
    pub fn distance(&self, t_b: f64, t_a: f64) -> f64 {
        (t_a - self.t_a(t_b)).abs() / (1.0 + self.slope * self.slope).sqrt()
    }
}

/// The `κ₊ = 0` and `κ₋ = 0` lines, two per band: `[plus, plus, minus, minus]`.
pub fn boundary_curves_t2(alpha_a: f64, alpha_b: f64, t2: f64) -> Result<[BoundaryLine; 4]> {
    if alpha_a == 0.0 {
        return Err(Error::DegenerateDenominator("boundary_curves_t2 (alpha_a = 0)"));
    }
    let odd = -alpha_b.sinh() / alpha_a.sinh();
    let even = -alpha_b.cosh() / alpha_a.cosh();
    let shift = 2.0 * t2 / (2.0 * alpha_a.cosh());
    let line = |band, slope, intercept| BoundaryLine {
        band,
        slope,
        intercept,
    };
    Ok([
        line(Band::Plus, odd, 0.0),
        line(Band::Plus, even, -shift),
        line(Band::Minus, odd, 0.0),
        line(Band::Minus, even, shift),
    ])
}

/// Result of substituting `κ` back into `δE(k + iκ) = f_r cos k + i f_i sin k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GbzReport {
    pub band: Band,
    pub kappa: f64,
    pub f_r: f64,
    pub f_i: f64,
    /// `max_k |δE(k+iκ) − (f_r cos k + i f_i sin k)|` over the samples.
    pub dispersion_error: f64,
    pub satisfied: bool,
}

impl GbzReport {
    pub fn min_factor(&self) -> f64 {
        self.f_r.abs().min(self.f_i.abs())
    }
}

pub const GBZ_TOL: f64 = 1e-9;

/// First-order band dispersion `δE±(q)` at complex momentum `q`.
pub fn delta_e(p: &LadderParams, band: Band, q: Complex64) -> Complex64 {
    let i = Complex64::i();
    p.t_a * (q - i * p.alpha_a).cos() + p.t_b * (q - i * p.alpha_b).cos() + band.sign() * p.t2 * q.cos()
}

pub fn gbz_consistency(p: &LadderParams, k_samples: usize) -> Vec<GbzReport> {
    [Band::Plus, Band::Minus]
        .into_iter()
        .map(|band| {
            let pred = BandPrediction::new(p, band);
            let kappa = pred.kappa;
            let s = band.sign() * p.t2;
            let (em, ep) = ((-kappa).exp(), kappa.exp());
            let f_r = 0.5
                * (p.t_a * (em * p.alpha_a.exp() + ep * (-p.alpha_a).exp())
                    + p.t_b * (em * p.alpha_b.exp() + ep * (-p.alpha_b).exp())
                    + s * (em + ep));
            let f_i = 0.5
                * (p.t_a * (em * p.alpha_a.exp() - ep * (-p.alpha_a).exp())
                    + p.t_b * (em * p.alpha_b.exp() - ep * (-p.alpha_b).exp())
                    + s * (em - ep));
            let dispersion_error = (0..k_samples)
                .map(|j| {
                    let k = 2.0 * std::f64::consts::PI * j as f64 / k_samples as f64;
                    let direct = delta_e(p, band, Complex64::new(k, kappa));
                    let form = Complex64::new(f_r * k.cos(), f_i * k.sin());
                    (direct - form).norm()
                })
                .fold(0.0, f64::max);
            let finite = kappa.is_finite() && f_r.is_finite() && f_i.is_finite();
            GbzReport {
                band,
                kappa,
                f_r,
                f_i,
                dispersion_error,
                satisfied: finite && f_r.abs().min(f_i.abs()) < GBZ_TOL,
            }
        })
        .collect()
}

/// Effective single-chain OBC Hamiltonian of a hybridized band (`L × L`):
/// on-site `±t_⊥ + (μ_a + μ_b)/2 = ±t_⊥`, leftward `A±/2`, rightward `B±/2`.
pub fn effective_chain(p: &LadderParams, band: Band) -> Result<ComplexMatrix> {
    p.validate()?;
    let (l, r) = effective_amplitudes(p, band);
    let n = p.len;
    let mut h = ComplexMatrix::zeros(n);
    for x in 0..n {
        h[(x, x)] = Complex64::new(band.sign() * p.t_perp, 0.0);
        if x + 1 < n {
            h[(x, x + 1)] = Complex64::new(0.5 * l, 0.0);
            h[(x + 1, x)] = Complex64::new(0.5 * r, 0.0);
        }
    }
    Ok(h)
}
