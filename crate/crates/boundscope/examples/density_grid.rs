//! Emit plot-ready density surfaces.
//!
//! Writes the Boltzmann density at t = 1/2 and the optimal sum-of-squares
//! density at r = 7 for the Motzkin polynomial to CSV grids, then locates
//! the modes of the emitted Boltzmann surface: four peaks near the four
//! global minimizers (+-1/2, +-1/2).
//!
//! ```bash
//! cargo run --example density_grid
//! ```

use boundscope::cli::{emit_density_grid, GridKind};
use boundscope::testfns;

fn main() -> boundscope::Result<()> {
    let motzkin = testfns::by_key("motzkin").expect("builtin corpus");
    let f = motzkin.polynomial();
    let k = motzkin.domain();
    let m = 201;

    let boltzmann_path = "motzkin_boltzmann_grid.csv";
    emit_density_grid(
        &f,
        &k,
        GridKind::Boltzmann,
        None,
        Some(0.5),
        m,
        Some(boltzmann_path.as_ref()),
    )?;

    let sos_path = "motzkin_sos_grid.csv";
    emit_density_grid(
        &f,
        &k,
        GridKind::Sos,
        Some(7),
        None,
        m,
        Some(sos_path.as_ref()),
    )?;

    // read the Boltzmann surface back and find its strict local maxima
    let text = std::fs::read_to_string(boltzmann_path)?;
    let values: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(2).unwrap().parse().unwrap())
        .collect();
    let at = |i: usize, j: usize| values[i * m + j];
    let coord = |i: usize| -1.0 + 2.0 * i as f64 / (m - 1) as f64;
    let mut modes = Vec::new();
    for i in 1..m - 1 {
        for j in 1..m - 1 {
            let c = at(i, j);
            if c > at(i - 1, j) && c > at(i + 1, j) && c > at(i, j - 1) && c > at(i, j + 1) {
                modes.push((coord(i), coord(j), c));
            }
        }
    }
    println!("wrote {boltzmann_path} and {sos_path} ({m}x{m} points each)");
    println!("modes of the Boltzmann surface:");
    for (x, y, value) in modes {
        println!("  ({x:+.2}, {y:+.2})  density {value:.3}");
    }
    Ok(())
}
