//! Walks on two unit cells (`x ∈ {1, 2}`, OBC) where the order of `S1` and
//! `S2` matters and boundary effects compete with the skin effect.

use serde::Serialize;

use crate::error::Result;
use crate::model::Boundary;

use super::{distribution, evolve, Sites, Spin, Variant, WalkParams, WalkState};

/// Steps used for the two-cell readout.
pub const TWO_CELL_STEPS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialCell {
    /// `|a, 1, ↑⟩`
    A1Up,
    /// `|a, 2, ↑⟩`
    A2Up,
}

impl InitialCell {
    pub fn name(self) -> &'static str {
        match self {
            InitialCell::A1Up => "a1_up",
            InitialCell::A2Up => "a2_up",
        }
    }

    fn site(self) -> i64 {
        match self {
            InitialCell::A1Up => 1,
            InitialCell::A2Up => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwoCellRun {
    pub variant: Variant,
    pub hermitian: bool,
    pub initial: InitialCell,
    pub steps: usize,
    /// `(ρ(1), ρ(2))` of the normalized final state.
    pub rho: (f64, f64),
}

impl TwoCellRun {
    /// `+1` for accumulation on `x = 2`, `-1` on `x = 1`, `0` if balanced.
    pub fn direction(&self) -> i8 {
        let d = self.rho.1 - self.rho.0;
        if d > 0.0 {
            1
        } else if d < 0.0 {
            -1
        } else {
            0
        }
    }
}

/// Rotation angles `(θ₁, θ₂, θ₃)` and the loss `α` used for non-hermitian
/// runs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwoCellSetting {
    pub thetas: (f64, f64, f64),
    pub alpha: f64,
    pub steps: usize,
}

impl Default for TwoCellSetting {
    /// Transport-reversal angles with `α = 3` and [`TWO_CELL_STEPS`] steps.
    fn default() -> Self {
        let r = WalkParams::transport_reference(Variant::U);
        Self {
            thetas: (r.theta1, r.theta2, r.theta3),
            alpha: 3.0,
            steps: TWO_CELL_STEPS,
        }
    }
}

/// `α = 0` when `hermitian`, sites `x ∈ {1, 2}`, OBC.
pub fn two_cell_params(setting: &TwoCellSetting, variant: Variant, hermitian: bool) -> WalkParams {
    let alpha = if hermitian { 0.0 } else { setting.alpha };
    WalkParams {
        theta1: setting.thetas.0,
        theta2: setting.thetas.1,
        theta3: setting.thetas.2,
        alpha_a: alpha,
        alpha_b: alpha,
        sites: Sites { first: 1, last: 2 },
        steps: setting.steps,
        variant,
        bc: Boundary::Obc,
    }
}

pub fn two_cell_experiment(
    setting: &TwoCellSetting,
    variant: Variant,
    hermitian: bool,
    initial: InitialCell,
) -> Result<TwoCellRun> {
    let params = two_cell_params(setting, variant, hermitian);
    let start = WalkState::basis(params.sites, initial.site(), 0, Spin::Up);
    let ev = evolve(&params, &start)?;
    let rho = distribution(&ev.state)?;
    Ok(TwoCellRun {
        variant,
        hermitian,
        initial,
        steps: setting.steps,
        rho: (rho[0], rho[1]),
    })
}

/// All 16 combinations of initial state × hermitian × variant, in that
/// nesting order.
pub fn two_cell_suite(setting: &TwoCellSetting) -> Result<Vec<TwoCellRun>> {
    let mut out = Vec::with_capacity(16);
    for initial in [InitialCell::A1Up, InitialCell::A2Up] {
        for hermitian in [true, false] {
            for variant in Variant::ALL {
                out.push(two_cell_experiment(setting, variant, hermitian, initial)?);
            }
        }
    }
    Ok(out)
}
