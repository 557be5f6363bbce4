//! Quasi-energy windings along θ₂ + θ₃ = 0.8π.

use std::f64::consts::PI;

use nhse::model::Boundary;
use nhse::qwalk::{quasi_energy_bands, Variant, WalkParams};

fn main() -> nhse::Result<()> {
    for t2 in [0.2, 0.3, 0.4, 0.5, 0.6] {
        let p = WalkParams {
            theta2: t2 * PI,
            theta3: (0.8 - t2) * PI,
            bc: Boundary::Pbc,
            ..WalkParams::transport_reference(Variant::U)
        };
        let b = quasi_energy_bands(&p, 256)?;
        println!(
            "theta2 = {t2:.1}pi  windings = {:?}  max area/diam^2 = {:.2e}",
            b.windings,
            b.max_area_ratio()
        );
    }
    Ok(())
}
