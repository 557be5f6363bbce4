//! Two-chain non-unitary discrete-time quantum walk.
//!
//! The walker lives on sites `x` of two chains `s ∈ {a, b}` with a spin-½
//! coin `σ ∈ {↑, ↓}`. One period is an ordered product of local stages:
//!
//! * `R(θ)`: spin rotation `exp(−i λ_s θ σ_y / 2)` with `λ_a = 1`, `λ_b = −1`;
//! * `M`: spin-up loss `e^{−α_s}` on chain `s`;
//! * `S1`: spin-up moves `x → x+1`; `S2`: spin-down moves `x → x−1`;
//! * `S3`: spin-up hops to the other chain; `S4`: spin-down hops to the
//!   other chain.
//!
//! Under OBC amplitude shifted past an edge is annihilated, under PBC it
//! wraps around.

mod bands;
mod two_cell;

pub use bands::{quasi_energy, quasi_energy_bands, QuasiBands, MIN_WALK_K};
pub use two_cell::{
    two_cell_experiment, two_cell_params, two_cell_suite, InitialCell, TwoCellRun, TwoCellSetting, TWO_CELL_STEPS,
};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::model::Boundary;

/// Norm below which a walk is considered extinguished.
pub const EXTINCTION_NORM: f64 = 1e-150;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variant {
    /// Decoupled chains, `S1` first.
    U0,
    /// Coupled chains (`S3`, `S4` inserted), `S1` first.
    U,
    /// Decoupled, roles of `S1` and `S2` exchanged.
    U0Bar,
    /// Coupled, roles of `S1` and `S2` exchanged.
    UBar,
}

impl Variant {
    pub const ALL: [Variant; 4] = [Variant::U0, Variant::U, Variant::U0Bar, Variant::UBar];

    pub fn name(self) -> &'static str {
        match self {
            Variant::U0 => "U0",
            Variant::U => "U",
            Variant::U0Bar => "U0Bar",
            Variant::UBar => "UBar",
        }
    }

    pub fn coupled(self) -> bool {
        matches!(self, Variant::U | Variant::UBar)
    }

    fn barred(self) -> bool {
        matches!(self, Variant::U0Bar | Variant::UBar)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Spin {
    Up = 0,
    Down = 1,
}

/// Inclusive site range `first..=last`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sites {
    pub first: i64,
    pub last: i64,
}

impl Sites {
    /// `x ∈ [−N, N]`.
    pub fn centered(half_width: usize) -> Self {
        let n = half_width as i64;
        Self { first: -n, last: n }
    }

    pub fn count(&self) -> usize {
        (self.last - self.first + 1) as usize
    }

    pub fn positions(&self) -> impl Iterator<Item = i64> {
        self.first..=self.last
    }

    pub fn dim(&self) -> usize {
        4 * self.count()
    }

    #[inline]
    pub fn index(&self, x: i64, chain: usize, spin: Spin) -> usize {
        debug_assert!(x >= self.first && x <= self.last && chain < 2);
        (((x - self.first) as usize) * 2 + chain) * 2 + spin as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WalkParams {
    pub theta1: f64,
    pub theta2: f64,
    pub theta3: f64,
    pub alpha_a: f64,
    pub alpha_b: f64,
    pub sites: Sites,
    pub steps: usize,
    pub variant: Variant,
    pub bc: Boundary,
}

impl WalkParams {
    /// Transport-reversal setting: `θ₁ = 0.2π`, `θ₂ = θ₃ = 0.4π`,
    /// `α_a = α_b = 3`, `N = 10`, `T = 40`, OBC.
    pub fn transport_reference(variant: Variant) -> Self {
        use std::f64::consts::PI;
        Self {
            theta1: 0.2 * PI,
            theta2: 0.4 * PI,
            theta3: 0.4 * PI,
            alpha_a: 3.0,
            alpha_b: 3.0,
            sites: Sites::centered(10),
            steps: 40,
            variant,
            bc: Boundary::Obc,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("theta1", self.theta1),
            ("theta2", self.theta2),
            ("theta3", self.theta3),
            ("alpha_a", self.alpha_a),
            ("alpha_b", self.alpha_b),
        ] {
            if !v.is_finite() {
                return Err(Error::InvalidParams(format!("{name} is not finite")));
            }
        }
        if self.alpha_a < 0.0 || self.alpha_b < 0.0 {
            return Err(Error::InvalidParams("loss exponents must be >= 0".into()));
        }
        if self.sites.last < self.sites.first {
            return Err(Error::InvalidParams("empty site range".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shift {
    S1,
    S2,
    S3,
    S4,
}

/// One local stage of the Floquet period.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Operator {
    Rotation(f64),
    Loss { alpha_a: f64, alpha_b: f64 },
    Shift(Shift),
}

const LAMBDA: [f64; 2] = [1.0, -1.0];

pub fn op_rotation(theta: f64) -> Operator {
    Operator::Rotation(theta)
}

pub fn op_loss(alpha_a: f64, alpha_b: f64) -> Operator {
    Operator::Loss { alpha_a, alpha_b }
}

pub fn op_shift(which: Shift) -> Operator {
    Operator::Shift(which)
}

/// Real 2×2 coin `exp(−i λ θ σ_y / 2)` in the `(↑, ↓)` basis.
fn coin(theta: f64, lambda: f64) -> [[f64; 2]; 2] {
    let (s, c) = (0.5 * theta).sin_cos();
    [[c, -lambda * s], [lambda * s, c]]
}

impl Operator {
    /// Applies the stage in place on a state over `sites`.
    pub fn apply(&self, amps: &mut [Complex64], sites: Sites, bc: Boundary) {
        let zero = Complex64::new(0.0, 0.0);
        match *self {
            Operator::Rotation(theta) => {
                let coins = [coin(theta, LAMBDA[0]), coin(theta, LAMBDA[1])];
                for cell in amps.chunks_exact_mut(2).enumerate() {
                    let (i, pair) = cell;
                    let m = &coins[i % 2];
                    let (u, d) = (pair[0], pair[1]);
                    pair[0] = u * m[0][0] + d * m[0][1];
                    pair[1] = u * m[1][0] + d * m[1][1];
                }
            }
            Operator::Loss { alpha_a, alpha_b } => {
                let f = [(-alpha_a).exp(), (-alpha_b).exp()];
                for (i, pair) in amps.chunks_exact_mut(2).enumerate() {
                    pair[0] *= f[i % 2];
                }
            }
            Operator::Shift(Shift::S1) | Operator::Shift(Shift::S2) => {
                let (spin, step) = if *self == Operator::Shift(Shift::S1) {
                    (Spin::Up, 1i64)
                } else {
                    (Spin::Down, -1i64)
                };
                let old: Vec<Complex64> = amps.to_vec();
                let n = sites.count() as i64;
                for s in 0..2 {
                    for x in sites.positions() {
                        amps[sites.index(x, s, spin)] = zero;
                    }
                    for x in sites.positions() {
                        let mut to = x + step;
                        if to < sites.first || to > sites.last {
                            match bc {
                                Boundary::Obc => continue,
                                Boundary::Pbc => to = sites.first + (to - sites.first).rem_euclid(n),
                            }
                        }
                        amps[sites.index(to, s, spin)] = old[sites.index(x, s, spin)];
                    }
                }
            }
            Operator::Shift(Shift::S3) | Operator::Shift(Shift::S4) => {
                let spin = if *self == Operator::Shift(Shift::S3) {
                    Spin::Up
                } else {
                    Spin::Down
                };
                for x in sites.positions() {
                    amps.swap(sites.index(x, 0, spin), sites.index(x, 1, spin));
                }
            }
        }
    }

    /// Dense real-space matrix of the stage.
    pub fn dense(&self, sites: Sites, bc: Boundary) -> ComplexMatrix {
        let dim = sites.dim();
        let mut out = ComplexMatrix::zeros(dim);
        let mut col = vec![Complex64::new(0.0, 0.0); dim];
        for j in 0..dim {
            col.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
            col[j] = Complex64::new(1.0, 0.0);
            self.apply(&mut col, sites, bc);
            for (i, z) in col.iter().enumerate() {
                out[(i, j)] = *z;
            }
        }
        out
    }

    /// 4×4 Bloch block in the `(chain, spin)` basis, index `2·chain + spin`,
    /// for plane waves `e^{ikx}`.
    pub fn bloch(&self, k: f64) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(4);
        let one = Complex64::new(1.0, 0.0);
        match *self {
            Operator::Rotation(theta) => {
                for s in 0..2 {
                    let c = coin(theta, LAMBDA[s]);
                    for a in 0..2 {
                        for b in 0..2 {
                            m[(2 * s + a, 2 * s + b)] = Complex64::new(c[a][b], 0.0);
                        }
                    }
                }
            }
            Operator::Loss { alpha_a, alpha_b } => {
                m[(0, 0)] = Complex64::new((-alpha_a).exp(), 0.0);
                m[(1, 1)] = one;
                m[(2, 2)] = Complex64::new((-alpha_b).exp(), 0.0);
                m[(3, 3)] = one;
            }
            Operator::Shift(Shift::S1) => {
                let ph = Complex64::from_polar(1.0, -k);
                m[(0, 0)] = ph;
                m[(1, 1)] = one;
                m[(2, 2)] = ph;
                m[(3, 3)] = one;
            }
            Operator::Shift(Shift::S2) => {
                let ph = Complex64::from_polar(1.0, k);
                m[(0, 0)] = one;
                m[(1, 1)] = ph;
                m[(2, 2)] = one;
                m[(3, 3)] = ph;
            }
            Operator::Shift(Shift::S3) => {
                m[(0, 2)] = one;
                m[(2, 0)] = one;
                m[(1, 1)] = one;
                m[(3, 3)] = one;
            }
            Operator::Shift(Shift::S4) => {
                m[(1, 3)] = one;
                m[(3, 1)] = one;
                m[(0, 0)] = one;
                m[(2, 2)] = one;
            }
        }
        m
    }
}

/// Floquet period as stages in application order (rightmost factor first).
#[derive(Debug, Clone, PartialEq)]
pub struct Floquet {
    pub stages: Vec<Operator>,
    pub sites: Sites,
    pub bc: Boundary,
}

/// Stage sequence of the chosen variant:
///
/// ```text
/// U₀ = R(θ₁) S₂ R(θ₂+θ₃) M R(θ₂+θ₃) S₁ R(θ₁)
/// U  = R(θ₁) S₂ R(θ₂) S₄ R(θ₃) M R(θ₃) S₃ R(θ₂) S₁ R(θ₁)
/// ```
///
/// and `Ū₀`, `Ū` with `S₁ ↔ S₂`.
pub fn build_floquet(params: &WalkParams) -> Floquet {
    let (first, last) = if params.variant.barred() {
        (Shift::S2, Shift::S1)
    } else {
        (Shift::S1, Shift::S2)
    };
    let r = op_rotation;
    let m = op_loss(params.alpha_a, params.alpha_b);
    let (t1, t2, t3) = (params.theta1, params.theta2, params.theta3);
    // right-to-left order of the written product
    let stages = if params.variant.coupled() {
        vec![
            r(t1),
            op_shift(first),
            r(t2),
            op_shift(Shift::S3),
            r(t3),
            m,
            r(t3),
            op_shift(Shift::S4),
            r(t2),
            op_shift(last),
            r(t1),
        ]
    } else {
        vec![r(t1), op_shift(first), r(t2 + t3), m, r(t2 + t3), op_shift(last), r(t1)]
    };
    Floquet {
        stages,
        sites: params.sites,
        bc: params.bc,
    }
}

impl Floquet {
    pub fn apply(&self, amps: &mut [Complex64]) {
        for s in &self.stages {
            s.apply(amps, self.sites, self.bc);
        }
    }

    pub fn dense(&self) -> ComplexMatrix {
        let dim = self.sites.dim();
        let mut out = ComplexMatrix::zeros(dim);
        let mut col = vec![Complex64::new(0.0, 0.0); dim];
        for j in 0..dim {
            col.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
            col[j] = Complex64::new(1.0, 0.0);
            self.apply(&mut col);
            for (i, z) in col.iter().enumerate() {
                out[(i, j)] = *z;
            }
        }
        out
    }

    /// 4×4 Bloch operator `U_k`.
    pub fn bloch(&self, k: f64) -> ComplexMatrix {
        self.stages
            .iter()
            .fold(ComplexMatrix::identity(4), |acc, s| &s.bloch(k) * &acc)
    }
}

/// Complex amplitude field over `(site, chain, spin)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkState {
    pub sites: Sites,
    pub amps: Vec<Complex64>,
}

impl WalkState {
    pub fn zeros(sites: Sites) -> Self {
        Self {
            sites,
            amps: vec![Complex64::new(0.0, 0.0); sites.dim()],
        }
    }

    pub fn basis(sites: Sites, x: i64, chain: usize, spin: Spin) -> Self {
        let mut s = Self::zeros(sites);
        s.amps[sites.index(x, chain, spin)] = Complex64::new(1.0, 0.0);
        s
    }

    /// `(|a,0,↑⟩ + |b,0,↑⟩)/√2`.
    pub fn centered_spin_up(sites: Sites) -> Self {
        let mut s = Self::zeros(sites);
        let a = std::f64::consts::FRAC_1_SQRT_2;
        s.amps[sites.index(0, 0, Spin::Up)] = Complex64::new(a, 0.0);
        s.amps[sites.index(0, 1, Spin::Up)] = Complex64::new(a, 0.0);
        s
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.amps.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Evolution {
    /// Unnormalized state after `T` steps.
    pub state: WalkState,
    /// Norm after each step, `norms[0]` being the initial norm.
    pub norms: Vec<f64>,
}

/// Applies the Floquet period `T` times.
pub fn evolve(params: &WalkParams, initial: &WalkState) -> Result<Evolution> {
    params.validate()?;
    if initial.sites != params.sites {
        return Err(Error::DimensionMismatch {
            expected: params.sites.dim(),
            found: initial.amps.len(),
        });
    }
    let floquet = build_floquet(params);
    let mut state = initial.clone();
    let mut norms = Vec::with_capacity(params.steps + 1);
    norms.push(state.norm());
    for step in 1..=params.steps {
        floquet.apply(&mut state.amps);
        let n = state.norm();
        norms.push(n);
        if !(n >= EXTINCTION_NORM) {
            return Err(Error::StateExtinguished { step, norm: n });
        }
    }
    Ok(Evolution { state, norms })
}

/// Normalized spatial distribution `ρ(x) = Σ_{s,σ} |ψ̃^{x,s,σ}|²`, ordered
/// by site.
pub fn distribution(state: &WalkState) -> Result<Vec<f64>> {
    let norm2: f64 = state.amps.iter().map(|z| z.norm_sqr()).sum();
    if !(norm2 > 0.0) || !norm2.is_finite() {
        return Err(Error::ZeroNorm);
    }
    Ok(state
        .amps
        .chunks_exact(4)
        .map(|c| c.iter().map(|z| z.norm_sqr()).sum::<f64>() / norm2)
        .collect())
}

/// `x̄ = Σ x ρ(x)` over the normalized state.
pub fn mean_position(state: &WalkState) -> Result<f64> {
    let rho = distribution(state)?;
    Ok(state.sites.positions().zip(rho).map(|(x, r)| x as f64 * r).sum())
}
