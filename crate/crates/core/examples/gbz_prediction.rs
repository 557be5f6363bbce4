//! First-order GBZ quantities and the effective single chain against the
//! full ladder.

use nhse::analysis::{fit_kappa, refined_spectrum};
use nhse::eig::decompose;
use nhse::gbz::{effective_chain, gbz_consistency, kappa, kappa_pm, reversal_interval};
use nhse::model::{Band, LadderParams};

fn main() -> nhse::Result<()> {
    let p = LadderParams::reference(30.0, 60);
    println!("kappa = {:.4}", kappa(&p)?);
    let iv = reversal_interval(p.alpha_a, p.alpha_b)?;
    println!("reversal for t_a/(-t_b) in ({:.4}, {:.4})", iv.lower, iv.upper);
    for r in gbz_consistency(&p, 64) {
        println!("{:?}: f_r = {:+.3e}  f_i = {:+.3e}  satisfied = {}", r.band, r.f_r, r.f_i, r.satisfied);
    }

    let mut q = p;
    q.t_a = 0.5;
    q.t_b = 0.5;
    q.t2 = 2.0;
    let (kp, km) = kappa_pm(&q)?;
    println!("t2 = 2, t_a = t_b = 0.5: kappa_+ = {kp:+.4}, kappa_- = {km:+.4}");

    // The first-order chain is accurate only once t_perp dwarfs the
    // second-order hopping ~ t^2 / t_perp.
    for t_perp in [30.0, 300.0, 3000.0] {
        let l = p.with_t_perp(t_perp);
        let fit = fit_kappa(&refined_spectrum(&l)?.spectrum, l.len)?;
        println!("t_perp = {t_perp:6.0}: fitted kappa = {fit:+.4}");
    }
    let h = effective_chain(&p, Band::Plus)?;
    let s = decompose(&h)?;
    println!("effective + chain: {} modes, residual {:.1e}", s.dim(), s.relative_residual());
    Ok(())
}
