//! The inequality chain linking the two bound families.
//!
//! Composing the degree-2r Taylor prefix of e^(-lambda) with f/t yields a
//! sum-of-squares density; its f-average is sandwiched between the
//! degree-2rd eigenvalue bound and the Boltzmann expectation plus an
//! explicit error term. Once r clears e * fhat_max / t, the eigenvalue
//! bound is within fhat_max / 2^r of the expectation.
//!
//! ```bash
//! cargo run --example taylor_chain
//! ```

use boundscope::taylor::verify_chain;
use boundscope::testfns;

fn main() -> boundscope::Result<()> {
    let motzkin = testfns::by_key("motzkin").expect("builtin corpus");
    let f = motzkin.polynomial();
    let k = motzkin.domain();
    let fhat = motzkin.fhat_max;

    println!("objective: {f}\n");
    println!("  r      t       eigenvalue   sos-density   expectation   error term   holds");
    for r in 1..=4 {
        let t = std::f64::consts::E * fhat / f64::from(r);
        let chain = verify_chain(&f, &k, r, t)?;
        println!(
            "{r:>3}  {t:>8.2}  {:>10.6}  {:>12.8}  {:>12.8}  {:>10.3e}   {}",
            chain.lasserre_value,
            chain.taylor_value,
            chain.boltzmann_value,
            chain.error_term,
            chain.holds(),
        );
        assert!(
            chain.schedule_ok,
            "r = {r} clears the schedule by construction"
        );
    }
    println!("\nthe sos-density value exceeds the expectation by less than the");
    println!("error term, and the eigenvalue bound sits far below both.");
    Ok(())
}
