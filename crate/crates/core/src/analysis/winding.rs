use std::f64::consts::PI;

use num_complex::Complex64;

use crate::eig::decompose;
use crate::error::{Error, Result};
use crate::model::{build_bloch, Band, LadderParams};

pub const MIN_LOOP_POINTS: usize = 16;
const ON_CURVE: f64 = 1e-9;
const MIN_OVERLAP: f64 = 0.5;
/// Loops with `|area| ≤ DEGENERATE_AREA · diam²` are treated as arcs.
const DEGENERATE_AREA: f64 = 1e-12;

/// Winding of a sampled closed curve around `base`; positive is
/// counterclockwise. The closing segment back to the first sample is
/// implied.
pub fn winding_number(curve: &[Complex64], base: Complex64) -> Result<i64> {
    if curve.len() < MIN_LOOP_POINTS {
        return Err(Error::TooFewPoints {
            needed: MIN_LOOP_POINTS,
            found: curve.len(),
        });
    }
    if !base.re.is_finite() || !base.im.is_finite() {
        return Err(Error::NonFinite);
    }
    let mut distance = f64::INFINITY;
    for z in curve {
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(Error::NonFinite);
        }
        distance = distance.min((z - base).norm());
    }
    if distance <= ON_CURVE {
        return Err(Error::BaseOnCurve { distance });
    }
    let n = curve.len();
    let total: f64 = (0..n)
        .map(|j| ((curve[(j + 1) % n] - base) / (curve[j] - base)).arg())
        .sum();
    Ok((total / (2.0 * PI)).round() as i64)
}

pub fn loop_centroid(curve: &[Complex64]) -> Complex64 {
    curve.iter().sum::<Complex64>() / curve.len() as f64
}

/// Signed shoelace area (positive for counterclockwise loops).
pub fn loop_area(curve: &[Complex64]) -> f64 {
    let n = curve.len();
    0.5 * (0..n)
        .map(|j| {
            let (a, b) = (curve[j], curve[(j + 1) % n]);
            a.re * b.im - b.re * a.im
        })
        .sum::<f64>()
}

pub fn loop_diameter(curve: &[Complex64]) -> f64 {
    let mut d: f64 = 0.0;
    for (i, a) in curve.iter().enumerate() {
        for b in &curve[i + 1..] {
            d = d.max((a - b).norm());
        }
    }
    d
}

/// Winding about the loop centroid; arcs that enclose no area wind zero
/// times.
pub fn loop_winding(curve: &[Complex64]) -> Result<i64> {
    let diam = loop_diameter(curve);
    if loop_area(curve).abs() <= DEGENERATE_AREA * diam * diam {
        if curve.len() < MIN_LOOP_POINTS {
            return Err(Error::TooFewPoints {
                needed: MIN_LOOP_POINTS,
                found: curve.len(),
            });
        }
        return Ok(0);
    }
    winding_number(curve, loop_centroid(curve))
}

/// Eigen-branches of a `k`-dependent operator followed continuously over
/// `k_j = 2πj/n_k` by eigenvector-overlap matching.
#[derive(Debug, Clone)]
pub struct TrackedBands {
    pub k: Vec<f64>,
    /// `values[band][j]`.
    pub values: Vec<Vec<Complex64>>,
    /// Branch `b` at the end of the period continues into branch
    /// `closing[b]` at `k = 0`.
    pub closing: Vec<usize>,
}

fn overlap(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum::<Complex64>().norm()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

fn best_permutation(n: usize, score: impl Fn(usize, usize) -> f64) -> Vec<usize> {
    permutations(n)
        .into_iter()
        .map(|p| (p.iter().enumerate().map(|(i, &j)| score(i, j)).sum::<f64>(), p))
        .max_by(|a, b| a.0.total_cmp(&b.0))
        .map(|(_, p)| p)
        .unwrap_or_default()
}

/// Best assignment `prev branch i → new eigenpair perm[i]`, maximizing the
/// summed overlap. Small systems only (exhaustive search).
///
/// Inside (near-)degenerate subspaces the eigenvectors are arbitrary and the
/// overlaps lose meaning; there the match falls back to eigenvalue
/// continuity, which is unambiguous up to exchanging equal values. The error
/// is kept for steps where neither criterion separates the branches.
fn best_match(
    prev: (&[Complex64], &[Vec<Complex64>]),
    next: (&[Complex64], &[Vec<Complex64>]),
    k_index: usize,
) -> Result<Vec<usize>> {
    let n = prev.0.len();
    let table: Vec<Vec<f64>> = prev
        .1
        .iter()
        .map(|a| next.1.iter().map(|b| overlap(a, b)).collect())
        .collect();
    let best = best_permutation(n, |i, j| table[i][j]);
    let worst = best.iter().enumerate().map(|(i, &j)| table[i][j]).fold(f64::INFINITY, f64::min);
    if worst >= MIN_OVERLAP {
        return Ok(best);
    }
    let dist = |i: usize, j: usize| (prev.0[i] - next.0[j]).norm();
    let by_value = best_permutation(n, |i, j| -dist(i, j));
    // Each step must be clearly shorter than the gap to any other, distinct
    // eigenvalue; otherwise the branches cannot be told apart. Branches
    // leaving a degenerate point are interchangeable and exempt.
    let close = |a: Complex64, b: Complex64| (a - b).norm() <= 1e-8 * (1.0 + a.norm());
    for (i, &j) in by_value.iter().enumerate() {
        if (0..n).any(|m| m != i && close(prev.0[m], prev.0[i])) {
            continue;
        }
        let step = dist(i, j);
        let rival = (0..n)
            .filter(|&m| !close(next.0[m], next.0[j]))
            .map(|m| dist(i, m))
            .fold(f64::INFINITY, f64::min);
        if step >= 0.5 * rival {
            return Err(Error::BranchTracking { k_index, overlap: worst });
        }
    }
    Ok(by_value)
}

/// `eigen(k)` returns eigenvalues and unit eigenvectors at momentum `k`.
pub fn track_bands<F>(n_k: usize, mut eigen: F) -> Result<TrackedBands>
where
    F: FnMut(f64) -> Result<(Vec<Complex64>, Vec<Vec<Complex64>>)>,
{
    let ks: Vec<f64> = (0..n_k).map(|j| 2.0 * PI * j as f64 / n_k as f64).collect();
    let (e0, v0) = eigen(ks[0])?;
    let nb = e0.len();
    let mut values: Vec<Vec<Complex64>> = e0.iter().map(|&e| vec![e]).collect();
    let mut current = (e0.clone(), v0.clone());
    for (j, &k) in ks.iter().enumerate().skip(1) {
        let (e, v) = eigen(k)?;
        let perm = best_match((&current.0, &current.1), (&e, &v), j)?;
        for b in 0..nb {
            values[b].push(e[perm[b]]);
        }
        current = (
            perm.iter().map(|&p| e[p]).collect(),
            perm.iter().map(|&p| v[p].clone()).collect(),
        );
    }
    let closing = best_match((&current.0, &current.1), (&e0, &v0), n_k)?;
    Ok(TrackedBands {
        k: ks,
        values,
        closing,
    })
}

impl TrackedBands {
    /// Closed loop through branch `b`, following the closing permutation
    /// through as many periods as it takes to return.
    pub fn closed_loop(&self, b: usize) -> Vec<Complex64> {
        let mut out = Vec::new();
        let mut cur = b;
        loop {
            out.extend_from_slice(&self.values[cur]);
            cur = self.closing[cur];
            if cur == b {
                break;
            }
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct BandLoops {
    pub tracked: TrackedBands,
    /// Tracked branch index of the `plus` (higher mean `Re E`) band.
    pub plus: usize,
    pub minus: usize,
}

impl BandLoops {
    pub fn branch(&self, band: Band) -> usize {
        match band {
            Band::Plus => self.plus,
            Band::Minus => self.minus,
        }
    }

    pub fn closed_loop(&self, band: Band) -> Vec<Complex64> {
        self.tracked.closed_loop(self.branch(band))
    }
}

/// PBC bands of the Bloch Hamiltonian tracked over the Brillouin zone.
pub fn band_loops(params: &LadderParams, n_k: usize) -> Result<BandLoops> {
    params.validate()?;
    let tracked = track_bands(n_k, |k| {
        let s = decompose(&build_bloch(params, k)?)?;
        Ok((s.eigenvalues, s.vectors))
    })?;
    let mean_re = |b: usize| tracked.values[b].iter().map(|z| z.re).sum::<f64>();
    let (plus, minus) = if mean_re(0) >= mean_re(1) { (0, 1) } else { (1, 0) };
    Ok(BandLoops {
        tracked,
        plus,
        minus,
    })
}

pub const MIN_BAND_SAMPLES: usize = 64;

pub fn band_winding(params: &LadderParams, band: Band, n_k: usize) -> Result<i64> {
    if n_k < MIN_BAND_SAMPLES {
        return Err(Error::TooFewPoints {
            needed: MIN_BAND_SAMPLES,
            found: n_k,
        });
    }
    loop_winding(&band_loops(params, n_k)?.closed_loop(band))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle(n: usize, r: f64, c: Complex64) -> Vec<Complex64> {
        (0..n)
            .map(|j| c + Complex64::from_polar(r, 2.0 * PI * j as f64 / n as f64))
            .collect()
    }

    #[test]
    fn unit_circle() {
        let z = circle(64, 1.0, Complex64::new(0.0, 0.0));
        assert_eq!(winding_number(&z, Complex64::new(0.0, 0.0)).unwrap(), 1);
        let rev: Vec<_> = z.iter().rev().copied().collect();
        assert_eq!(winding_number(&rev, Complex64::new(0.0, 0.0)).unwrap(), -1);
        assert_eq!(winding_number(&z, Complex64::new(3.0, 0.0)).unwrap(), 0);
        assert!((loop_area(&z) - PI).abs() < 0.01);
    }

    #[test]
    fn double_cover() {
        let z: Vec<_> = (0..64)
            .map(|j| Complex64::from_polar(1.0, 4.0 * PI * j as f64 / 64.0))
            .collect();
        assert_eq!(winding_number(&z, Complex64::new(0.1, 0.0)).unwrap(), 2);
    }

    #[test]
    fn segment_has_zero_winding() {
        let z: Vec<_> = (0..64)
            .map(|j| Complex64::new(2.0 * (2.0 * PI * j as f64 / 64.0).cos(), 0.0))
            .collect();
        assert_eq!(winding_number(&z, Complex64::new(0.5, 0.3)).unwrap(), 0);
        assert_eq!(winding_number(&z, Complex64::new(5.0, 0.0)).unwrap(), 0);
        assert_eq!(loop_winding(&z).unwrap(), 0);
    }

    #[test]
    fn errors() {
        let z = circle(64, 1.0, Complex64::new(0.0, 0.0));
        assert!(matches!(
            winding_number(&z, Complex64::new(1.0, 0.0)),
            Err(Error::BaseOnCurve { .. })
        ));
        assert!(matches!(
            winding_number(&z[..8], Complex64::new(0.0, 0.0)),
            Err(Error::TooFewPoints { .. })
        ));
        let mut bad = z.clone();
        bad[3] = Complex64::new(f64::NAN, 0.0);
        assert_eq!(winding_number(&bad, Complex64::new(0.0, 0.0)), Err(Error::NonFinite));
    }

    #[test]
    fn hatano_nelson_band_orientation() {
        let band = |alpha: f64| -> Vec<Complex64> {
            (0..128)
                .map(|j| Complex64::new(2.0 * PI * j as f64 / 128.0, -alpha).cos() * 2.0)
                .collect()
        };
        let wp = winding_number(&band(0.5), loop_centroid(&band(0.5))).unwrap();
        let wm = winding_number(&band(-0.5), loop_centroid(&band(-0.5))).unwrap();
        assert_eq!(wp.abs(), 1);
        assert_eq!(wp, -wm);
    }

    #[test]
    fn permutation_count() {
        assert_eq!(permutations(4).len(), 24);
    }
}
