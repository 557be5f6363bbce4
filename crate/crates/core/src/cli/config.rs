//! JSON configuration files.
//!
//! Configs are flat objects with unit-free numbers. Unknown keys are
//! rejected. Angles accept either radians (`1.2566`) or a multiple of π
//! written as a string (`"0.4pi"`, `"-pi"`).

use std::f64::consts::PI;
use std::fmt;
use std::path::Path;

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize};

use crate::analysis::{GridAxis, GridSpec, Observable, SweepField};
use crate::model::{Boundary, LadderParams};
use crate::qwalk::{Sites, Variant, WalkParams};

use super::CliError;

/// An angle in radians, parsed from a number or an `"<x>pi"` string.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Angle(pub f64);

impl Angle {
    pub fn parse(s: &str) -> Option<f64> {
        let t = s.trim();
        let Some(coef) = t.strip_suffix("pi").or_else(|| t.strip_suffix('π')) else {
            return t.parse::<f64>().ok().filter(|v| v.is_finite());
        };
        let coef = coef.trim().trim_end_matches('*').trim();
        let c = match coef {
            "" | "+" => 1.0,
            "-" => -1.0,
            _ => coef.parse::<f64>().ok()?,
        };
        Some(c * PI).filter(|v| v.is_finite())
    }
}

impl<'de> Deserialize<'de> for Angle {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct AngleVisitor;

        impl Visitor<'_> for AngleVisitor {
            type Value = Angle;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an angle in radians or a string like \"0.4pi\"")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Angle, E> {
                Ok(Angle(v))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Angle, E> {
                Ok(Angle(v as f64))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Angle, E> {
                Ok(Angle(v as f64))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Angle, E> {
                Angle::parse(v)
                    .map(Angle)
                    .ok_or_else(|| E::custom(format!("cannot read angle {v:?}")))
            }
        }

        d.deserialize_any(AngleVisitor)
    }
}

/// Reads and parses a config, returning it together with its raw text.
pub fn load<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<(T, String), CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let cfg = serde_json::from_str(&text)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    Ok((cfg, text))
}

/// 1-based line of the first occurrence of `"key"` in the config text, used
/// to point validation errors at the offending entry.
pub fn line_of(text: &str, key: &str) -> Option<usize> {
    let needle = format!("\"{key}\"");
    text.lines().position(|l| l.contains(&needle)).map(|i| i + 1)
}

pub(crate) fn config_error(text: &str, key: &str, msg: impl fmt::Display) -> CliError {
    match line_of(text, key) {
        Some(line) => CliError::Config(format!("line {line}: {key}: {msg}")),
        None => CliError::Config(format!("{key}: {msg}")),
    }
}

fn default_n_k() -> usize {
    256
}

fn default_mu() -> f64 {
    0.0
}

/// Declares a config struct carrying the ladder couplings inline (serde's
/// `flatten` would defeat `deny_unknown_fields` and line reporting).
macro_rules! ladder_config {
    ($(#[$meta:meta])* $name:ident { $($(#[$fmeta:meta])* $field:ident : $ty:ty,)* }) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
        #[serde(deny_unknown_fields)]
        pub struct $name {
            pub t_a: f64,
            pub t_b: f64,
            pub alpha_a: f64,
            pub alpha_b: f64,
            pub t_perp: f64,
            #[serde(default = "default_mu")]
            pub mu: f64,
            #[serde(default)]
            pub t2: f64,
            #[serde(rename = "L")]
            pub len: usize,
            $($(#[$fmeta])* pub $field: $ty,)*
        }

        impl $name {
            pub fn ladder(&self) -> LadderConfig {
                LadderConfig {
                    t_a: self.t_a,
                    t_b: self.t_b,
                    alpha_a: self.alpha_a,
                    alpha_b: self.alpha_b,
                    t_perp: self.t_perp,
                    mu: self.mu,
                    t2: self.t2,
                    len: self.len,
                }
            }
        }
    };
}

ladder_config! {
    /// Ladder couplings shared by `spectrum`, `phase-diagram` and `gbz`.
    LadderConfig {}
}

impl LadderConfig {
    pub fn params(&self, bc: Boundary) -> LadderParams {
        LadderParams {
            t_a: self.t_a,
            t_b: self.t_b,
            alpha_a: self.alpha_a,
            alpha_b: self.alpha_b,
            t_perp: self.t_perp,
            mu: self.mu,
            t2: self.t2,
            len: self.len,
            bc,
        }
    }

    pub fn validate(&self, text: &str) -> Result<(), CliError> {
        if self.len < 2 {
            return Err(config_error(text, "L", format!("must be at least 2, got {}", self.len)));
        }
        for (key, v) in [
            ("t_a", self.t_a),
            ("t_b", self.t_b),
            ("alpha_a", self.alpha_a),
            ("alpha_b", self.alpha_b),
            ("t_perp", self.t_perp),
            ("mu", self.mu),
            ("t2", self.t2),
        ] {
            if !v.is_finite() {
                return Err(config_error(text, key, "must be finite"));
            }
        }
        Ok(())
    }
}

ladder_config! {
    SpectrumConfig {
        /// Momentum samples for the PBC band loops.
        #[serde(default = "default_n_k")]
        n_k: usize,
        /// Also write per-mode densities `|ψ^s_x|²`.
        #[serde(default)]
        profiles: bool,
    }
}

/// One sweep axis: explicit `values`, or `start`/`stop`/`num`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisConfig {
    pub field: SweepField,
    #[serde(default)]
    pub values: Option<Vec<f64>>,
    #[serde(default)]
    pub start: Option<f64>,
    #[serde(default)]
    pub stop: Option<f64>,
    #[serde(default)]
    pub num: Option<usize>,
}

impl AxisConfig {
    pub fn axis(&self, text: &str) -> Result<GridAxis, CliError> {
        match (&self.values, self.start, self.stop, self.num) {
            (Some(v), None, None, None) => Ok(GridAxis {
                field: self.field,
                values: v.clone(),
            }),
            (None, Some(a), Some(b), Some(n)) => Ok(GridAxis::linspace(self.field, a, b, n)),
            _ => Err(config_error(
                text,
                "axes",
                format!(
                    "axis {} needs either values or start/stop/num",
                    self.field.name()
                ),
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhaseDiagramConfig {
    pub base: LadderConfig,
    pub axes: Vec<AxisConfig>,
    pub observables: Vec<Observable>,
    #[serde(default)]
    pub transition_bracket: Option<(f64, f64)>,
    #[serde(default = "default_n_k")]
    pub n_k: usize,
    /// Samples per analytic boundary line in the companion CSV.
    #[serde(default = "default_boundary_samples")]
    pub boundary_samples: usize,
}

fn default_boundary_samples() -> usize {
    61
}

impl PhaseDiagramConfig {
    pub fn grid(&self, text: &str) -> Result<GridSpec, CliError> {
        self.base.validate(text)?;
        let axes = self
            .axes
            .iter()
            .map(|a| a.axis(text))
            .collect::<Result<Vec<_>, _>>()?;
        let mut grid = GridSpec::new(self.base.params(Boundary::Obc), axes);
        grid.transition_bracket = self.transition_bracket;
        grid.n_k = self.n_k;
        if grid.is_empty() {
            return Err(config_error(text, "axes", "sweep grid is empty"));
        }
        if self.observables.is_empty() {
            return Err(config_error(text, "observables", "no observables requested"));
        }
        grid.validate()
            .map_err(|e| config_error(text, "axes", e))?;
        Ok(grid)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WalkMode {
    /// Single parameter point: ρ(x), x̄ and the norm trace per variant.
    Point,
    /// x̄ over a (θ₂, θ₃) grid per variant.
    Grid,
    /// Quasi-energy loops and windings along a list of (θ₂, θ₃) points.
    Bands,
    /// The 16-run two-unit-cell table.
    TwoCell,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AngleRange {
    pub start: Angle,
    pub stop: Angle,
    pub num: usize,
}

impl AngleRange {
    pub fn values(&self) -> Vec<f64> {
        GridAxis::linspace(SweepField::Mu, self.start.0, self.stop.0, self.num).values
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnglePair {
    pub theta2: Angle,
    pub theta3: Angle,
}

fn default_theta1() -> Angle {
    Angle(0.2 * PI)
}

fn default_theta23() -> Angle {
    Angle(0.4 * PI)
}

fn default_alpha() -> f64 {
    3.0
}

fn default_half_width() -> usize {
    10
}

fn default_steps() -> usize {
    40
}

fn default_variants() -> Vec<Variant> {
    vec![Variant::U0, Variant::U]
}

fn default_bc() -> Boundary {
    Boundary::Obc
}

/// Winding cut `θ₂ + θ₃ = 0.8π`, `θ₂ ∈ {0.2, …, 0.6}π`.
pub fn default_cut() -> Vec<AnglePair> {
    [0.2, 0.3, 0.4, 0.5, 0.6]
        .iter()
        .map(|&t| AnglePair {
            theta2: Angle(t * PI),
            theta3: Angle((0.8 - t) * PI),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WalkConfig {
    pub mode: WalkMode,
    #[serde(default = "default_theta1")]
    pub theta1: Angle,
    #[serde(default = "default_theta23")]
    pub theta2: Angle,
    #[serde(default = "default_theta23")]
    pub theta3: Angle,
    #[serde(default = "default_alpha")]
    pub alpha_a: f64,
    #[serde(default = "default_alpha")]
    pub alpha_b: f64,
    /// Sites `x ∈ [−N, N]`.
    #[serde(default = "default_half_width", rename = "N")]
    pub half_width: usize,
    #[serde(default = "default_steps")]
    pub steps: usize,
    #[serde(default = "default_variants")]
    pub variants: Vec<Variant>,
    #[serde(default = "default_bc")]
    pub bc: Boundary,
    /// Grid mode axes.
    #[serde(default)]
    pub theta2_range: Option<AngleRange>,
    #[serde(default)]
    pub theta3_range: Option<AngleRange>,
    /// Bands mode points; defaults to the `θ₂ + θ₃ = 0.8π` cut.
    #[serde(default)]
    pub cut: Option<Vec<AnglePair>>,
    #[serde(default = "default_n_k")]
    pub n_k: usize,
}

impl WalkConfig {
    pub fn params(&self, variant: Variant) -> WalkParams {
        WalkParams {
            theta1: self.theta1.0,
            theta2: self.theta2.0,
            theta3: self.theta3.0,
            alpha_a: self.alpha_a,
            alpha_b: self.alpha_b,
            sites: Sites::centered(self.half_width),
            steps: self.steps,
            variant,
            bc: self.bc,
        }
    }

    pub fn validate(&self, text: &str) -> Result<(), CliError> {
        for (key, v) in [
            ("theta1", self.theta1.0),
            ("theta2", self.theta2.0),
            ("theta3", self.theta3.0),
        ] {
            if !v.is_finite() {
                return Err(config_error(text, key, "must be finite"));
            }
        }
        for (key, v) in [("alpha_a", self.alpha_a), ("alpha_b", self.alpha_b)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(config_error(text, key, "must be finite and >= 0"));
            }
        }
        if self.variants.is_empty() && self.mode != WalkMode::TwoCell {
            return Err(config_error(text, "variants", "at least one variant is required"));
        }
        match self.mode {
            WalkMode::Grid => {
                let (Some(a), Some(b)) = (&self.theta2_range, &self.theta3_range) else {
                    return Err(config_error(
                        text,
                        "mode",
                        "grid mode needs theta2_range and theta3_range",
                    ));
                };
                if a.num == 0 || b.num == 0 {
                    return Err(config_error(text, "theta2_range", "sweep grid is empty"));
                }
            }
            WalkMode::Bands => {
                if self.bc != Boundary::Pbc {
                    return Err(config_error(text, "bc", "bands mode requires \"pbc\""));
                }
                if self.cut.as_ref().is_some_and(|c| c.is_empty()) {
                    return Err(config_error(text, "cut", "cut is empty"));
                }
            }
            _ => {}
        }
        Ok(())
    }
}

ladder_config! {
    GbzConfig {
        /// Momentum samples for the dispersion consistency check.
        #[serde(default = "default_k_samples")]
        k_samples: usize,
        /// `t_b` range of the boundary-curve samples.
        #[serde(default = "default_t_b_range")]
        t_b_range: (f64, f64),
        #[serde(default = "default_boundary_samples")]
        boundary_samples: usize,
    }
}

fn default_k_samples() -> usize {
    64
}

fn default_t_b_range() -> (f64, f64) {
    (-1.5, 1.5)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angle_forms() {
        assert_eq!(Angle::parse("0.4pi"), Some(0.4 * PI));
        assert_eq!(Angle::parse(" -pi "), Some(-PI));
        assert_eq!(Angle::parse("pi"), Some(PI));
        assert_eq!(Angle::parse("0.5*pi"), Some(0.5 * PI));
        assert_eq!(Angle::parse("0.2"), Some(0.2));
        assert_eq!(Angle::parse("xpi"), None);
        let a: Angle = serde_json::from_str("1.5").unwrap();
        assert_eq!(a.0, 1.5);
        let a: Angle = serde_json::from_str("\"0.2pi\"").unwrap();
        assert_eq!(a.0, 0.2 * PI);
    }

    #[test]
    fn unknown_key_rejected_with_line() {
        let text = "{\n  \"t_a\": 0.75,\n  \"t_b\": -1,\n  \"alpha_a\": 0.5,\n  \"alpha_b\": 0.2,\n  \"t_perp\": 1,\n  \"L\": 10,\n  \"bogus\": 1\n}";
        let err = serde_json::from_str::<GbzConfig>(text).unwrap_err();
        assert!(err.to_string().contains("bogus"), "{err}");
        let err = serde_json::from_str::<LadderConfig>(text).unwrap_err();
        assert_eq!(err.line(), 8);
    }

    #[test]
    fn validation_points_at_line() {
        let text = "{\n  \"t_a\": 0.75, \"t_b\": -1, \"alpha_a\": 0.5, \"alpha_b\": 0.2,\n  \"t_perp\": 1,\n  \"L\": 1\n}";
        let cfg: LadderConfig = serde_json::from_str(text).unwrap();
        let err = cfg.validate(text).unwrap_err().to_string();
        assert!(err.contains("line 4"), "{err}");
    }

    #[test]
    fn default_cut_sums() {
        for p in default_cut() {
            assert!((p.theta2.0 + p.theta3.0 - 0.8 * PI).abs() < 1e-12);
        }
    }
}
