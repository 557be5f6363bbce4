//! Locates the rung coupling where the skin modes switch edges.

use std::time::Instant;

use nhse::analysis::{dipr_avg, find_transition, ladder_spectrum};
use nhse::model::LadderParams;

fn main() -> nhse::Result<()> {
    let base = LadderParams::reference(0.0, 50);
    for t in [0.0, 2.0, 4.0, 6.0, 8.0, 10.0, 15.0, 20.0] {
        let p = base.with_t_perp(t);
        println!("t_perp = {t:5.1}  dipr = {:+.4}", dipr_avg(&ladder_spectrum(&p)?, p.len)?);
    }
    let start = Instant::now();
    let tc = find_transition(&base, 0.0, 15.0)?;
    println!("t_perp,c = {tc:.3}  ({:.1?})", start.elapsed());
    Ok(())
}
