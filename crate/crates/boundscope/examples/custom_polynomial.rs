//! Bound a hand-written objective on a custom box.
//!
//! Parses an expression, then compares the three bound families on it:
//! eigenvalue bounds over a range of degrees, the Boltzmann expectation at
//! a few temperatures, and the composed Taylor density bound.
//!
//! ```bash
//! cargo run --example custom_polynomial
//! ```

use boundscope::annealing::{boltzmann_expectation, fhat_max, grid_minimum};
use boundscope::lasserre::{lasserre_upper_bound, BasisKind};
use boundscope::moments::BoxDomain;
use boundscope::parser::parse_polynomial;
use boundscope::taylor::taylor_density_bound;

fn main() -> boundscope::Result<()> {
    // a shifted quartic with its minimum inside the box
    let f = parse_polynomial("(x1^2 + x2 - 1)^2 + (x1 - 1)^2/4", 2)?;
    let k = BoxDomain::new(vec![(-2.0, 2.0), (-1.0, 3.0)])?;

    println!("objective: {f}");
    println!("domain:    [-2,2] x [-1,3]");
    println!("grid minimum ~ {:.6}", grid_minimum(&f, &k));
    let fhat = fhat_max(&f, &k);
    println!("max |f|    ~ {fhat:.4}\n");

    println!("eigenvalue bounds:");
    for r in [1, 2, 4, 8, 12] {
        let report = lasserre_upper_bound(&f, &k, r, BasisKind::Orthonormal)?;
        println!(
            "  r = {r:>2} (order {:>3}): {:.6}",
            report.diagnostics.basis_size.unwrap(),
            report.value
        );
    }

    println!("\nexpectation bounds:");
    for t in [10.0, 1.0, 0.1] {
        println!("  t = {t:>4}: {:.6}", boltzmann_expectation(&f, &k, t)?);
    }

    println!("\ncomposed-density bounds at t = e * fhat / 4:");
    let t = std::f64::consts::E * fhat / 4.0;
    for r in 1..=4 {
        println!("  r = {r}: {:.8}", taylor_density_bound(&f, &k, r, t)?);
    }
    println!(
        "           target expectation {:.8}",
        boltzmann_expectation(&f, &k, t)?
    );
    Ok(())
}
