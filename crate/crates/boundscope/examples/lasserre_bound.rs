//! Sum-of-squares density bounds for a nonconvex objective.
//!
//! Computes the eigenvalue upper bound for the Motzkin polynomial on
//! [-1,1]^2 over a range of hierarchy indices, in both polynomial bases,
//! and prints the optimal density at r = 3.
//!
//! ```bash
//! cargo run --example lasserre_bound
//! ```

use boundscope::lasserre::{lasserre_upper_bound, optimal_density, BasisKind};
use boundscope::moments::integrate_polynomial;
use boundscope::testfns;

fn main() -> boundscope::Result<()> {
    let motzkin = testfns::by_key("motzkin").expect("builtin corpus");
    let f = motzkin.polynomial();
    let k = motzkin.domain();

    println!("objective: {f}");
    println!("domain:    [-1,1]^2, global minimum 0 at (+-1/2, +-1/2)\n");

    println!("  r  basis size  orthonormal      monomial");
    for r in 1..=8 {
        let orth = lasserre_upper_bound(&f, &k, r, BasisKind::Orthonormal)?;
        let mono = lasserre_upper_bound(&f, &k, r, BasisKind::Monomial)?;
        println!(
            "{r:>3}  {:>10}  {:>11.6}  {:>12.6}",
            orth.diagnostics.basis_size.unwrap(),
            orth.value,
            mono.value,
        );
    }

    // the optimizing density is a squared polynomial normalized to mass one
    let h = optimal_density(&f, &k, 3, BasisKind::Orthonormal)?;
    println!("\noptimal density at r = 3 (degree {}):", h.degree());
    println!("  mass     = {:.12}", integrate_polynomial(&k, &h));
    println!("  int f h  = {:.6}", integrate_polynomial(&k, &(&f * &h)));
    println!("  h(1/2, 1/2) = {:.4}", h.eval(&[0.5, 0.5]));
    println!("  h(0, 0)     = {:.4}", h.eval(&[0.0, 0.0]));
    Ok(())
}
