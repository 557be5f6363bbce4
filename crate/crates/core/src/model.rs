//! The coupled non-reciprocal ladder.
//!
//! Two Hatano–Nelson chains `a` and `b` with hopping `t_s e^{α_s}` to the
//! left and `t_s e^{-α_s}` to the right, a rung coupling `t_⊥`, on-site
//! offsets `±μ` and an optional off-diagonal rung-to-neighbour coupling `t₂`.
//!
//! Basis ordering is site-major with the chains interleaved: the state on
//! site `x` (1-based) of chain `c` sits at index `2(x-1) + c`, `c = 0` for
//! chain `a` and `c = 1` for chain `b`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Obc,
    Pbc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Chain {
    A = 0,
    B = 1,
}

/// Hybridized band `(a ± b)/√2`, centred at `±t_⊥`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Band {
    Plus,
    Minus,
}

impl Band {
    pub fn sign(self) -> f64 {
        match self {
            Band::Plus => 1.0,
            Band::Minus => -1.0,
        }
    }
}

/// Couplings and size of the static ladder.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LadderParams {
    pub t_a: f64,
    pub t_b: f64,
    pub alpha_a: f64,
    pub alpha_b: f64,
    pub t_perp: f64,
    pub mu: f64,
    #[serde(default)]
    pub t2: f64,
    #[serde(rename = "L")]
    pub len: usize,
    pub bc: Boundary,
}

impl LadderParams {
    /// The parameter set used throughout for the reversal example:
    /// `t_a = 0.75, t_b = -1, α_a = 0.5, α_b = 0.2, μ = 0.5`.
    pub fn reference(t_perp: f64, len: usize) -> Self {
        Self {
            t_a: 0.75,
            t_b: -1.0,
            alpha_a: 0.5,
            alpha_b: 0.2,
            t_perp,
            mu: 0.5,
            t2: 0.0,
            len,
            bc: Boundary::Obc,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.len < 2 {
            return Err(Error::InvalidParams(format!(
                "chain length L must be at least 2, got {}",
                self.len
            )));
        }
        let fields = [
            ("t_a", self.t_a),
            ("t_b", self.t_b),
            ("alpha_a", self.alpha_a),
            ("alpha_b", self.alpha_b),
            ("t_perp", self.t_perp),
            ("mu", self.mu),
            ("t2", self.t2),
        ];
        for (name, v) in fields {
            if !v.is_finite() {
                return Err(Error::InvalidParams(format!("{name} is not finite")));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        2 * self.len
    }

    pub fn with_bc(mut self, bc: Boundary) -> Self {
        self.bc = bc;
        self
    }

    pub fn with_t_perp(mut self, t_perp: f64) -> Self {
        self.t_perp = t_perp;
        self
    }

    /// Spatial mirror `x → L+1-x`: swaps left and right hopping, i.e. flips
    /// the sign of both non-reciprocity exponents. The `t₂` term is already
    /// mirror symmetric.
    pub fn mirrored(mut self) -> Self {
        self.alpha_a = -self.alpha_a;
        self.alpha_b = -self.alpha_b;
        self
    }

    fn chain(&self, c: Chain) -> (f64, f64) {
        match c {
            Chain::A => (self.t_a, self.alpha_a),
            Chain::B => (self.t_b, self.alpha_b),
        }
    }

    fn onsite(&self, c: Chain) -> f64 {
        match c {
            Chain::A => self.mu,
            Chain::B => -self.mu,
        }
    }
}

/// Matrix index of site `x` (1-based) on chain `c`.
#[inline]
pub fn site_index(x: usize, c: Chain) -> usize {
    debug_assert!(x >= 1);
    2 * (x - 1) + c as usize
}

fn re(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

/// Real-space `2L × 2L` Hamiltonian.
pub fn build_real_space(params: &LadderParams) -> Result<ComplexMatrix> {
    params.validate()?;
    let l = params.len;
    let mut h = ComplexMatrix::zeros(params.dim());

    // Bonds (x, x+1); the PBC wrap bond (L, 1) uses the bulk amplitudes.
    let mut bonds: Vec<(usize, usize)> = (1..l).map(|x| (x, x + 1)).collect();
    if params.bc == Boundary::Pbc {
        bonds.push((l, 1));
    }

    for c in [Chain::A, Chain::B] {
        let (t, alpha) = params.chain(c);
        let left = t * alpha.exp();
        let right = t * (-alpha).exp();
        for &(x, xp) in &bonds {
            h[(site_index(x, c), site_index(xp, c))] += re(left);
            h[(site_index(xp, c), site_index(x, c))] += re(right);
        }
    }

    for x in 1..=l {
        let ia = site_index(x, Chain::A);
        let ib = site_index(x, Chain::B);
        h[(ia, ib)] += re(params.t_perp);
        h[(ib, ia)] += re(params.t_perp);
        h[(ia, ia)] += re(params.onsite(Chain::A));
        h[(ib, ib)] += re(params.onsite(Chain::B));
    }

    if params.t2 != 0.0 {
        let half = 0.5 * params.t2;
        // (t₂/2) b†_x a_{x+1} + (t₂/2) b†_{x+1} a_x + h.c. over each bond.
        for &(x, xp) in &bonds {
            let (bx, axp) = (site_index(x, Chain::B), site_index(xp, Chain::A));
            let (bxp, ax) = (site_index(xp, Chain::B), site_index(x, Chain::A));
            h[(bx, axp)] += re(half);
            h[(axp, bx)] += re(half);
            h[(bxp, ax)] += re(half);
            h[(ax, bxp)] += re(half);
        }
    }

    Ok(h)
}

/// Bloch Hamiltonian `h(k)` (2×2, PBC implied).
pub fn build_bloch(params: &LadderParams, k: f64) -> Result<ComplexMatrix> {
    params.validate()?;
    let band = |t: f64, alpha: f64| Complex64::new(k, -alpha).cos() * (2.0 * t);
    let off = re(params.t_perp + params.t2 * k.cos());
    ComplexMatrix::from_rows(&[
        vec![band(params.t_a, params.alpha_a) + params.mu, off],
        vec![off, band(params.t_b, params.alpha_b) - params.mu],
    ])
}

/// Imaginary gauge transform `D⁻¹ H D` with `D = diag(e^{g x} ⊗ 1₂)`.
///
/// For `t₂ = 0` this maps `(α_a, α_b) → (α_a + g, α_b + g)`; eigenvectors
/// transform as `v → D⁻¹ v`.
pub fn gauge_transform(h: &ComplexMatrix, len: usize, g: f64) -> Result<ComplexMatrix> {
    if h.dim() != 2 * len {
        return Err(Error::DimensionMismatch {
            expected: 2 * len,
            found: h.dim(),
        });
    }
    Ok(h.diag_similarity(&gauge_diagonal(len, g)))
}

/// Diagonal of the gauge matrix, `e^{g x}` on both chains, normalized so the
/// centre of the chain has weight 1 (keeps the entries away from overflow).
pub fn gauge_diagonal(len: usize, g: f64) -> Vec<f64> {
    let centre = (len as f64 + 1.0) / 2.0;
    (0..2 * len)
        .map(|i| (g * ((i / 2 + 1) as f64 - centre)).exp())
        .collect()
}

/// Permutation implementing the mirror `x → L+1-x` on matrix indices.
pub fn mirror_permutation(len: usize) -> Vec<usize> {
    (0..2 * len)
        .map(|i| {
            let x = i / 2 + 1;
            let c = i % 2;
            2 * (len - x) + c
        })
        .collect()
}
