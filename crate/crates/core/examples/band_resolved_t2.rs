//! With a diagonal rung coupling t₂ only one hybridized band reverses.

use nhse::analysis::{dipr_per_band, ladder_spectrum};
use nhse::gbz::kappa_pm;
use nhse::model::LadderParams;

fn main() -> nhse::Result<()> {
    for t2 in [0.0, 0.5, 1.0, 2.0] {
        let mut p = LadderParams::reference(30.0, 40);
        p.t_a = 0.5;
        p.t_b = 0.5;
        p.t2 = t2;
        let (minus, plus) = dipr_per_band(&ladder_spectrum(&p)?, p.len)?;
        let (kp, km) = kappa_pm(&p)?;
        println!("t2 = {t2:.1}  dipr(-) = {minus:+.4}  dipr(+) = {plus:+.4}  kappa- = {km:+.3}  kappa+ = {kp:+.3}");
    }
    Ok(())
}
