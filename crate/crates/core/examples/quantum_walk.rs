//! Walker drift under the decoupled and coupled Floquet operators.

use nhse::qwalk::{distribution, evolve, mean_position, Variant, WalkParams, WalkState};

fn main() -> nhse::Result<()> {
    for v in [Variant::U0, Variant::U] {
        let p = WalkParams::transport_reference(v);
        let ev = evolve(&p, &WalkState::centered_spin_up(p.sites))?;
        let rho = distribution(&ev.state)?;
        println!("{:>3}: xbar = {:+.3}  surviving norm = {:.3e}", v.name(), mean_position(&ev.state)?, ev.norms[p.steps]);
        let bars: String = rho
            .iter()
            .map(|r| match (r * 40.0) as usize {
                0 => ' ',
                1..=2 => '.',
                3..=6 => 'o',
                _ => '#',
            })
            .collect();
        println!("     [{bars}]");
    }
    Ok(())
}
