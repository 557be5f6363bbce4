use crate::error::{Error, Result};
use crate::model::LadderParams;

use super::{dipr_avg, ladder_spectrum};

/// Absolute bisection tolerance on `t_⊥`.
pub const TRANSITION_TOL: f64 = 1e-3;

fn dipr_at(params: &LadderParams, t_perp: f64) -> Result<f64> {
    let p = params.with_t_perp(t_perp);
    dipr_avg(&ladder_spectrum(&p)?, p.len)
}

/// Rung coupling `t_⊥,c` at which the averaged directional IPR changes sign,
/// bisected inside `[t_perp_lo, t_perp_hi]`.
pub fn find_transition(params: &LadderParams, t_perp_lo: f64, t_perp_hi: f64) -> Result<f64> {
    params.validate()?;
    let (mut lo, mut hi) = (t_perp_lo.min(t_perp_hi), t_perp_lo.max(t_perp_hi));
    let mut f_lo = dipr_at(params, lo)?;
    let f_hi = dipr_at(params, hi)?;
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::NoSignChange { lo, hi, f_lo, f_hi });
    }
    while hi - lo > TRANSITION_TOL {
        let mid = 0.5 * (lo + hi);
        let f_mid = dipr_at(params, mid)?;
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
