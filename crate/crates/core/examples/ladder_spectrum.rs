//! OBC spectrum of the reference ladder below and above the transition,
//! with the averaged localization diagnostics.
//!
//! cargo run --release --example ladder_spectrum -- [L]

use nhse::analysis::{diagnose, mode_dipr, refined_spectrum};
use nhse::model::LadderParams;

fn main() -> nhse::Result<()> {
    let len = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(50);
    for t_perp in [0.0, 6.0, 15.0] {
        let p = LadderParams::reference(t_perp, len);
        let r = refined_spectrum(&p)?;
        let d = diagnose(&r.spectrum, len)?;
        let right = mode_dipr(&r.spectrum, len)?.iter().filter(|v| **v > 0.0).count();
        println!(
            "t_perp = {t_perp:5.1}  ipr = {:.4}  dipr = {:+.4}  delta_rho = {:.4}  right-localized modes = {right}/{}",
            d.ipr_avg,
            d.dipr_avg,
            d.delta_rho_avg,
            2 * len
        );
        let (lo, hi) = r
            .spectrum
            .eigenvalues
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), e| (a.min(e.re), b.max(e.re)));
        println!("    Re E in [{lo:.3}, {hi:.3}], residual {:.1e}", r.spectrum.relative_residual());
    }
    Ok(())
}
