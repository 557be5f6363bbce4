//! Grid sweeps over ladder parameters.
//!
//! Points are evaluated in parallel; results keep row-major grid order
//! (last axis fastest) regardless of scheduling. A failing point is recorded
//! with NaN observables and its error message instead of aborting the sweep.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gbz::BandPrediction;
use crate::model::{Band, LadderParams};

use super::{band_winding, delta_rho_avg, dipr_avg, dipr_per_band, find_transition, fit_kappa, ipr_avg, ladder_spectrum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepField {
    TA,
    TB,
    AlphaA,
    AlphaB,
    TPerp,
    Mu,
    T2,
}

impl SweepField {
    pub fn name(self) -> &'static str {
        match self {
            SweepField::TA => "t_a",
            SweepField::TB => "t_b",
            SweepField::AlphaA => "alpha_a",
            SweepField::AlphaB => "alpha_b",
            SweepField::TPerp => "t_perp",
            SweepField::Mu => "mu",
            SweepField::T2 => "t2",
        }
    }

    pub fn set(self, p: &mut LadderParams, v: f64) {
        match self {
            SweepField::TA => p.t_a = v,
            SweepField::TB => p.t_b = v,
            SweepField::AlphaA => p.alpha_a = v,
            SweepField::AlphaB => p.alpha_b = v,
            SweepField::TPerp => p.t_perp = v,
            SweepField::Mu => p.mu = v,
            SweepField::T2 => p.t2 = v,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridAxis {
    pub field: SweepField,
    pub values: Vec<f64>,
}

impl GridAxis {
    /// `num` evenly spaced values from `start` to `stop` inclusive.
    pub fn linspace(field: SweepField, start: f64, stop: f64, num: usize) -> Self {
        let values = match num {
            0 => vec![],
            1 => vec![start],
            _ => (0..num)
                .map(|i| start + (stop - start) * i as f64 / (num - 1) as f64)
                .collect(),
        };
        Self { field, values }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Observable {
    IprAvg,
    DiprAvg,
    DeltaRhoAvg,
    /// Mean dIPR over modes with `Re E < 0`.
    DiprMinus,
    /// Mean dIPR over modes with `Re E ≥ 0`.
    DiprPlus,
    KappaFit,
    KappaPlus,
    KappaMinus,
    WindingPlus,
    WindingMinus,
    /// Transition coupling `t_⊥,c`; needs a bracket in the grid spec.
    TPerpC,
}

impl Observable {
    pub fn name(self) -> &'static str {
        match self {
            Observable::IprAvg => "ipr_avg",
            Observable::DiprAvg => "dipr_avg",
            Observable::DeltaRhoAvg => "delta_rho_avg",
            Observable::DiprMinus => "dipr_minus",
            Observable::DiprPlus => "dipr_plus",
            Observable::KappaFit => "kappa_fit",
            Observable::KappaPlus => "kappa_plus",
            Observable::KappaMinus => "kappa_minus",
            Observable::WindingPlus => "winding_plus",
            Observable::WindingMinus => "winding_minus",
            Observable::TPerpC => "t_perp_c",
        }
    }

    fn needs_spectrum(self) -> bool {
        matches!(
            self,
            Observable::IprAvg
                | Observable::DiprAvg
                | Observable::DeltaRhoAvg
                | Observable::DiprMinus
                | Observable::DiprPlus
                | Observable::KappaFit
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub base: LadderParams,
    pub axes: Vec<GridAxis>,
    /// `t_⊥` bracket for [`Observable::TPerpC`].
    #[serde(default)]
    pub transition_bracket: Option<(f64, f64)>,
    #[serde(default = "default_n_k")]
    pub n_k: usize,
}

fn default_n_k() -> usize {
    256
}

impl GridSpec {
    pub fn new(base: LadderParams, axes: Vec<GridAxis>) -> Self {
        Self {
            base,
            axes,
            transition_bracket: None,
            n_k: default_n_k(),
        }
    }

    pub fn shape(&self) -> Vec<usize> {
        self.axes.iter().map(|a| a.values.len()).collect()
    }

    pub fn len(&self) -> usize {
        self.shape().iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.axes.is_empty() || self.len() == 0
    }

    /// Multi-index of flat point `i` (last axis fastest).
    pub fn unravel(&self, mut i: usize) -> Vec<usize> {
        let shape = self.shape();
        let mut idx = vec![0; shape.len()];
        for (d, &n) in shape.iter().enumerate().rev() {
            idx[d] = i % n;
            i /= n;
        }
        idx
    }

    pub fn point(&self, i: usize) -> LadderParams {
        let mut p = self.base;
        for (axis, j) in self.axes.iter().zip(self.unravel(i)) {
            axis.field.set(&mut p, axis.values[j]);
        }
        p
    }

    pub fn validate(&self) -> Result<()> {
        if self.is_empty() {
            return Err(Error::InvalidParams("sweep grid is empty".into()));
        }
        for a in &self.axes {
            if a.values.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidParams(format!(
                    "axis {} has non-finite values",
                    a.field.name()
                )));
            }
        }
        self.base.validate()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepPoint {
    pub coords: Vec<f64>,
    /// One entry per requested observable; NaN when unavailable.
    pub values: Vec<f64>,
    pub defective: bool,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub grid: GridSpec,
    pub observables: Vec<Observable>,
    pub points: Vec<SweepPoint>,
}

impl SweepResult {
    pub fn column(&self, obs: Observable) -> Option<Vec<f64>> {
        let j = self.observables.iter().position(|&o| o == obs)?;
        Some(self.points.iter().map(|p| p.values[j]).collect())
    }

    pub fn failures(&self) -> usize {
        self.points.iter().filter(|p| p.error.is_some()).count()
    }
}

fn evaluate(grid: &GridSpec, observables: &[Observable], i: usize) -> SweepPoint {
    let p = grid.point(i);
    let coords = grid
        .axes
        .iter()
        .zip(grid.unravel(i))
        .map(|(a, j)| a.values[j])
        .collect();
    let mut values = vec![f64::NAN; observables.len()];
    let mut defective = false;
    let mut errors = Vec::new();

    let spectrum = if observables.iter().any(|o| o.needs_spectrum()) {
        match ladder_spectrum(&p) {
            Ok(s) => {
                defective = s.defective_suspect;
                Some(s)
            }
            Err(e) => {
                errors.push(e.to_string());
                None
            }
        }
    } else {
        None
    };

    for (slot, &obs) in values.iter_mut().zip(observables) {
        let r: Result<f64> = match obs {
            o if o.needs_spectrum() => match &spectrum {
                None => continue,
                Some(s) => match o {
                    Observable::IprAvg => ipr_avg(s, p.len),
                    Observable::DiprAvg => dipr_avg(s, p.len),
                    Observable::DeltaRhoAvg => delta_rho_avg(s, p.len),
                    Observable::DiprMinus => dipr_per_band(s, p.len).map(|d| d.0),
                    Observable::DiprPlus => dipr_per_band(s, p.len).map(|d| d.1),
                    _ => fit_kappa(s, p.len),
                },
            },
            Observable::KappaPlus => Ok(BandPrediction::new(&p, Band::Plus).kappa),
            Observable::KappaMinus => Ok(BandPrediction::new(&p, Band::Minus).kappa),
            Observable::WindingPlus => band_winding(&p, Band::Plus, grid.n_k).map(|w| w as f64),
            Observable::WindingMinus => band_winding(&p, Band::Minus, grid.n_k).map(|w| w as f64),
            Observable::TPerpC => match grid.transition_bracket {
                Some((lo, hi)) => find_transition(&p, lo, hi),
                None => Err(Error::InvalidParams("t_perp_c requires a transition bracket".into())),
            },
            _ => unreachable!(),
        };
        match r {
            Ok(v) => *slot = v,
            Err(e) => errors.push(format!("{}: {e}", obs.name())),
        }
    }

    SweepPoint {
        coords,
        values,
        defective,
        error: (!errors.is_empty()).then(|| errors.join("; ")),
    }
}

/// Evaluates `observables` on every grid point.
pub fn sweep(grid: &GridSpec, observables: &[Observable]) -> Result<SweepResult> {
    grid.validate()?;
    if observables.is_empty() {
        return Err(Error::InvalidParams("no observables requested".into()));
    }
    let points = (0..grid.len())
        .into_par_iter()
        .map(|i| evaluate(grid, observables, i))
        .collect();
    Ok(SweepResult {
        grid: grid.clone(),
        observables: observables.to_vec(),
        points,
    })
}
