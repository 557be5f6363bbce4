//! Transition coupling as a function of the on-site offset μ.

use nhse::analysis::find_transition;
use nhse::model::LadderParams;

fn main() -> nhse::Result<()> {
    for mu in [0.5, 1.0, 1.5, 2.0, 2.5, 3.0] {
        let mut p = LadderParams::reference(0.0, 50);
        p.mu = mu;
        println!("mu = {mu:.1}  t_perp,c = {:.3}", find_transition(&p, 0.0, 30.0)?);
    }
    Ok(())
}
