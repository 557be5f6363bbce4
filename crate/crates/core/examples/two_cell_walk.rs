//! The four Floquet orderings on a two-site lattice.

use nhse::qwalk::{two_cell_suite, TwoCellSetting};

fn main() -> nhse::Result<()> {
    let setting = TwoCellSetting::default();
    println!("{:>6} {:>9} {:>6} {:>7} {:>7}", "init", "hermitian", "op", "rho(1)", "rho(2)");
    for r in two_cell_suite(&setting)? {
        println!(
            "{:>6} {:>9} {:>6} {:7.4} {:7.4}",
            r.initial.name(),
            r.hermitian,
            r.variant.name(),
            r.rho.0,
            r.rho.1
        );
    }
    Ok(())
}
