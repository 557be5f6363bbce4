//! Coarse (t_b, t_a) phase diagram at strong coupling compared with the
//! sign of the first-order κ.

use nhse::analysis::{sweep, GridAxis, GridSpec, Observable, SweepField};
use nhse::gbz::BandPrediction;
use nhse::model::{Band, LadderParams};

fn main() -> nhse::Result<()> {
    let grid = GridSpec::new(
        LadderParams::reference(30.0, 24),
        vec![
            GridAxis::linspace(SweepField::TA, 1.5, -1.5, 13),
            GridAxis::linspace(SweepField::TB, -1.5, 1.5, 13),
        ],
    );
    let r = sweep(&grid, &[Observable::DiprAvg])?;
    println!("rows t_a from 1.5 down to -1.5, columns t_b from -1.5 to 1.5");
    println!("R/L: measured right/left skin modes; lowercase where first-order κ disagrees");
    let mut agree = 0;
    for (i, p) in r.points.iter().enumerate() {
        let params = grid.point(i);
        let measured_right = p.values[0] > 0.0;
        let predicted_right = BandPrediction::new(&params, Band::Plus).kappa < 0.0;
        agree += usize::from(measured_right == predicted_right);
        let c = match (measured_right, measured_right == predicted_right) {
            (true, true) => 'R',
            (false, true) => 'L',
            (true, false) => 'r',
            (false, false) => 'l',
        };
        print!("{c}");
        if (i + 1) % 13 == 0 {
            println!();
        }
    }
    println!("agreement {agree}/{}", r.points.len());
    Ok(())
}
