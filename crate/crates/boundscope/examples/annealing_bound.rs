//! Boltzmann expectations and the annealing temperature schedule.
//!
//! The expectation of f under the density proportional to e^(-f/t) upper
//! bounds the minimum and tightens as t drops. The schedule
//! t = e * d * fhat_max / r makes the bounds comparable to the degree-r
//! sum-of-squares bounds.
//!
//! ```bash
//! cargo run --example annealing_bound
//! ```

use boundscope::annealing::{boltzmann_expectation, fhat_max, sa_bound, TemperatureSchedule};
use boundscope::testfns;

fn main() -> boundscope::Result<()> {
    let motzkin = testfns::by_key("motzkin").expect("builtin corpus");
    let f = motzkin.polynomial();
    let k = motzkin.domain();

    println!("objective: {f}\n");

    println!("expectation against temperature (decreases toward the minimum 0):");
    for t in [100.0, 10.0, 1.0, 0.5, 0.1] {
        let e = boltzmann_expectation(&f, &k, t)?;
        println!("  t = {t:>6}: E = {e:.6}");
    }

    let computed_fhat = fhat_max(&f, &k);
    let schedule = TemperatureSchedule::new(f.degree(), computed_fhat);
    println!(
        "\nmax |f| over the box: {computed_fhat} (printed reference {})",
        motzkin.fhat_max
    );
    println!("\nschedule bounds:");
    println!("  r    t(r)        bound");
    for r in [3, 5, 10, 20] {
        let report = sa_bound(&f, &k, r, Some(motzkin.fhat_max))?;
        println!(
            "{r:>4}  {:>9.3}  {:.6}",
            schedule.temperature(r),
            report.value
        );
    }
    Ok(())
}
