//! Truncated-exponential sum-of-squares densities and the inequality chain
//! linking the two bound families.
//!
//! `phi_2r(lambda) = sum_{k=0}^{2r} (-lambda)^k / k!` is a sum of squares and
//! satisfies `0 <= phi_2r(lambda) - e^(-lambda) <= lambda^(2r+1)/(2r+1)!` for
//! `lambda >= 0`. Composing it with `f/t` yields a polynomial density whose
//! normalized f-average sits between the degree-`2rd` eigenvalue bound and
//! the Boltzmann expectation plus an explicit error term.

use crate::annealing::{boltzmann_parts, fhat_max, grid_minimum};
use crate::error::{Error, Result};
use crate::lasserre::{lasserre_upper_bound, BasisKind};
use crate::moments::{integrate_polynomial, BoxDomain, DEFAULT_MAX_NODES};
use crate::poly::Polynomial;

/// Degree cap for composed densities: beyond this the monomial coefficients
/// of `phi_2r(f/t)` exceed what f64 integration can carry.
const MAX_COMPOSED_DEGREE: u32 = 200;
/// Coefficient magnitude cap during composition.
const MAX_COEFFICIENT: f64 = 1e280;

/// Taylor prefix of `e^(-lambda)` of degree 2r.
#[derive(Clone, Debug)]
pub struct TruncatedExp {
    r: u32,
    coefficients: Vec<f64>,
}

impl TruncatedExp {
    /// Truncation half-order; the polynomial degree is `2r`.
    pub fn half_order(&self) -> u32 {
        self.r
    }

    /// `c_k = (-1)^k / k!` for k = 0..2r.
    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    /// Horner evaluation.
    pub fn eval(&self, lambda: f64) -> f64 {
        self.coefficients
            .iter()
            .rev()
            .fold(0.0, |acc, &c| acc * lambda + c)
    }
}

pub fn truncated_exp(r: u32) -> TruncatedExp {
    let mut coefficients = Vec::with_capacity(2 * r as usize + 1);
    let mut c = 1.0;
    coefficients.push(c);
    for k in 1..=2 * r {
        c *= -1.0 / f64::from(k);
        coefficients.push(c);
    }
    TruncatedExp { r, coefficients }
}

/// `ln(n!)` by direct log summation; exact enough through the f64 range and
/// immune to the overflow of `n!` itself past n = 170.
pub fn ln_factorial(n: u64) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// Check the sandwich `0 <= phi_2r(lambda) - e^(-lambda) <=
/// lambda^(2r+1)/(2r+1)!` at one point for `lambda >= 0`, returning a
/// description of the violation if any.
///
/// The remainder bound is assembled in log space so it never overflows; the
/// comparisons carry an absolute slack at the f64 noise floor of the Horner
/// sum, which dwarfs the true difference at small lambda.
pub fn sandwich_violation(r: u32, lambda: f64) -> Option<String> {
    let phi = truncated_exp(r).eval(lambda);
    let diff = phi - (-lambda).exp();
    let slack = 1e-13 * (1.0 + phi.abs());
    if diff < -slack {
        return Some(format!(
            "phi_{}({lambda}) - e^(-lambda) = {diff} is negative",
            2 * r
        ));
    }
    if diff > slack {
        let ln_bound = f64::from(2 * r + 1) * lambda.ln() - ln_factorial(u64::from(2 * r) + 1);
        let over = if ln_bound < 700.0 {
            diff > ln_bound.exp() + slack
        } else {
            diff.ln() > ln_bound + 1e-9
        };
        if over {
            return Some(format!(
                "phi_{}({lambda}) - e^(-lambda) = {diff} exceeds the remainder bound e^{ln_bound}",
                2 * r
            ));
        }
    }
    None
}

/// The polynomial density core `phi_2r(f/t)` expanded in the monomial basis.
///
/// Horner-style composition keeps intermediate coefficient magnitudes in
/// check; each step is guarded so growth is caught before it degrades to
/// infinities.
pub fn taylor_density(f: &Polynomial, r: u32, t: f64) -> Result<Polynomial> {
    assert!(t > 0.0, "temperature must be positive");
    if f.degree() * 2 * r > MAX_COMPOSED_DEGREE {
        return Err(Error::Range(format!(
            "composed density degree {} exceeds the cap {}",
            f.degree() * 2 * r,
            MAX_COMPOSED_DEGREE
        )));
    }
    let phi = truncated_exp(r);
    let scaled = f.scale(1.0 / t);
    let coeffs = phi.coefficients();
    let n = f.dimension();
    let mut density = Polynomial::constant(n, *coeffs.last().expect("nonempty"));
    for &c in coeffs.iter().rev().skip(1) {
        density = &(&density * &scaled) + &Polynomial::constant(n, c);
        let peak = density.max_coefficient();
        if !peak.is_finite() || peak > MAX_COEFFICIENT {
            return Err(Error::Range(format!(
                "density coefficients reached {peak:e}, beyond the cap {MAX_COEFFICIENT:e}"
            )));
        }
    }
    Ok(density)
}

/// The degree-2rd sum-of-squares density bound
/// `int_K f phi_2r(f/t) / int_K phi_2r(f/t)`, exact in quadrature.
pub fn taylor_density_bound(f: &Polynomial, k: &BoxDomain, r: u32, t: f64) -> Result<f64> {
    let density = taylor_density(f, r, t)?;
    let mass = integrate_polynomial(k, &density);
    let weighted = integrate_polynomial(k, &(f * &density));
    Ok(weighted / mass)
}

/// All members of the bound chain at one (r, t), with the explicit error
/// term and the schedule check `r >= e * fhat_max / t`.
#[derive(Clone, Debug)]
pub struct ChainReport {
    pub r: u32,
    pub t: f64,
    /// Eigenvalue bound at hierarchy index `r * deg f`.
    pub lasserre_value: f64,
    /// `int f phi_2r(f/t) / int phi_2r(f/t)`.
    pub taylor_value: f64,
    /// Boltzmann expectation at `t`.
    pub boltzmann_value: f64,
    /// `int (f - fmin) f^(2r+1) / (t^(2r+1) (2r+1)! int e^(-f/t))`.
    pub error_term: f64,
    /// `boltzmann_value + fhat_max / 2^r`.
    pub theorem_bound: f64,
    /// Whether `r >= e * fhat_max / t`, the regime where the theorem bound
    /// is guaranteed.
    pub schedule_ok: bool,
    pub fhat_max: f64,
    pub f_min: f64,
    /// Comparison slack `1e-6 * (1 + fhat_max)`.
    pub tol: f64,
}

impl ChainReport {
    /// Violated chain inequalities, empty when everything holds.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.lasserre_value > self.taylor_value + self.tol {
            out.push(format!(
                "lasserre {} > taylor {} + tol",
                self.lasserre_value, self.taylor_value
            ));
        }
        if self.taylor_value > self.boltzmann_value + self.error_term + self.tol {
            out.push(format!(
                "taylor {} > boltzmann {} + error term {} + tol",
                self.taylor_value, self.boltzmann_value, self.error_term
            ));
        }
        if self.schedule_ok && self.lasserre_value > self.theorem_bound + self.tol {
            out.push(format!(
                "lasserre {} > theorem bound {} + tol",
                self.lasserre_value, self.theorem_bound
            ));
        }
        out
    }

    pub fn holds(&self) -> bool {
        self.violations().is_empty()
    }
}

/// Compute every member of the chain for `f` on `K` at one `(r, t)`.
///
/// The error-term denominator `t^(2r+1) (2r+1)! int e^(-f/t)` is assembled
/// in log space; the factorial alone overflows f64 past r = 85.
pub fn verify_chain(f: &Polynomial, k: &BoxDomain, r: u32, t: f64) -> Result<ChainReport> {
    assert!(r >= 1, "the chain starts at r = 1");
    assert!(t > 0.0, "temperature must be positive");

    let fhat = fhat_max(f, k);
    let f_min = grid_minimum(f, k);
    let tol = 1e-6 * (1.0 + fhat);

    let lasserre_value = lasserre_upper_bound(f, k, r * f.degree(), BasisKind::Orthonormal)?.value;
    let taylor_value = taylor_density_bound(f, k, r, t)?;

    let parts = boltzmann_parts(
        f,
        k,
        t,
        crate::annealing::DEFAULT_REL_TOL,
        DEFAULT_MAX_NODES,
    )?;
    let boltzmann_value = parts.expectation;

    // numerator of the error term is a plain polynomial integral
    let shifted = f - &Polynomial::constant(f.dimension(), f_min);
    let numerator = integrate_polynomial(k, &(&shifted * &f.powi(2 * r + 1)));
    // ln of t^(2r+1) (2r+1)! int e^(-f/t), with the integral in
    // shift-factored form: int e^(-f/t) = e^(-shift/t) * shifted_mass
    let ln_denominator = f64::from(2 * r + 1) * t.ln()
        + ln_factorial(u64::from(2 * r) + 1)
        + (-parts.shift / t + parts.shifted_mass.ln());
    let error_term = if numerator == 0.0 {
        0.0
    } else {
        numerator.signum() * (numerator.abs().ln() - ln_denominator).exp()
    };

    let theorem_bound = boltzmann_value + fhat / 2f64.powi(r as i32);
    let schedule_floor = std::f64::consts::E * fhat / t;
    let schedule_ok = f64::from(r) >= schedule_floor * (1.0 - 1e-12) - 1e-12;

    Ok(ChainReport {
        r,
        t,
        lasserre_value,
        taylor_value,
        boltzmann_value,
        error_term,
        theorem_bound,
        schedule_ok,
        fhat_max: fhat,
        f_min,
        tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse_polynomial;
    use approx::assert_relative_eq;

    #[test]
    fn truncated_exp_examples() {
        assert_eq!(truncated_exp(0).coefficients(), &[1.0]);
        assert_eq!(truncated_exp(0).eval(3.7), 1.0);
        // phi_2(1) = 1 - 1 + 1/2
        assert_relative_eq!(truncated_exp(1).eval(1.0), 0.5, max_relative = 1e-15);
        // phi_4(2) = 1 - 2 + 2 - 8/6 + 16/24 = 1/3
        assert_relative_eq!(truncated_exp(2).eval(2.0), 1.0 / 3.0, max_relative = 1e-14);
    }

    #[test]
    fn coefficients_alternate_and_start_at_one() {
        let phi = truncated_exp(5);
        assert_eq!(phi.coefficients()[0], 1.0);
        for (k, &c) in phi.coefficients().iter().enumerate() {
            assert_eq!(c.signum(), if k % 2 == 0 { 1.0 } else { -1.0 });
        }
        assert_eq!(phi.coefficients().len(), 11);
    }

    #[test]
    fn ln_factorial_matches_direct_values() {
        assert_eq!(ln_factorial(0), 0.0);
        assert_eq!(ln_factorial(1), 0.0);
        assert_relative_eq!(ln_factorial(5), 120f64.ln(), max_relative = 1e-14);
        assert_relative_eq!(
            ln_factorial(21),
            51_090_942_171_709_440_000f64.ln(),
            max_relative = 1e-13
        );
    }

    #[test]
    fn density_bound_of_constant_is_the_constant() {
        let f = Polynomial::constant(2, 2.5);
        let k = BoxDomain::symmetric_unit(2);
        for (r, t) in [(0, 1.0), (3, 0.5), (8, 10.0)] {
            let v = taylor_density_bound(&f, &k, r, t).unwrap();
            assert_relative_eq!(v, 2.5, max_relative = 1e-12);
        }
    }

    #[test]
    fn density_bound_univariate_hand_integration() {
        // f = x on [0,1], r = 1, t = 1: (int x phi_2(x)) / (int phi_2(x))
        // = (7/24) / (2/3) = 7/16
        let f = Polynomial::variable(1, 0);
        let k = BoxDomain::cube(1, 0.0, 1.0).unwrap();
        let v = taylor_density_bound(&f, &k, 1, 1.0).unwrap();
        assert_relative_eq!(v, 7.0 / 16.0, max_relative = 1e-14);
    }

    #[test]
    fn density_degree_guard_trips() {
        let motzkin = parse_polynomial("64*(x1^4*x2^2 + x1^2*x2^4) - 48*x1^2*x2^2 + 1", 2).unwrap();
        // deg f * 2r = 6 * 34 = 204 > 200
        let err =
            taylor_density_bound(&motzkin, &BoxDomain::symmetric_unit(2), 17, 1.0).unwrap_err();
        assert!(matches!(err, Error::Range(_)));
    }

    #[test]
    fn density_coefficient_guard_trips() {
        let motzkin = parse_polynomial("64*(x1^4*x2^2 + x1^2*x2^4) - 48*x1^2*x2^2 + 1", 2).unwrap();
        // (f/t)^32 coefficients blow past 1e280 at this temperature
        let err =
            taylor_density_bound(&motzkin, &BoxDomain::symmetric_unit(2), 16, 1e-9).unwrap_err();
        assert!(matches!(err, Error::Range(_)), "{err:?}");
    }

    #[test]
    fn chain_univariate_closed_forms() {
        // f = x on [0,1], r = 1, t = 1: every member has a closed form
        let f = Polynomial::variable(1, 0);
        let k = BoxDomain::cube(1, 0.0, 1.0).unwrap();
        let report = verify_chain(&f, &k, 1, 1.0).unwrap();

        let exact_lasserre = (3.0 - 3.0f64.sqrt()) / 6.0;
        let exact_boltzmann = 1.0 - (-1.0f64).exp() / (1.0 - (-1.0f64).exp());
        let exact_error = 0.2 / (6.0 * (1.0 - (-1.0f64).exp()));
        assert_relative_eq!(report.lasserre_value, exact_lasserre, epsilon = 1e-10);
        assert_relative_eq!(report.taylor_value, 7.0 / 16.0, epsilon = 1e-12);
        assert_relative_eq!(report.boltzmann_value, exact_boltzmann, epsilon = 1e-10);
        assert_relative_eq!(report.error_term, exact_error, epsilon = 1e-9);
        assert_relative_eq!(report.fhat_max, 1.0, epsilon = 1e-9);
        assert!(report.f_min.abs() <= 1e-12);
        // schedule needs r >= e; r = 1 fails it
        assert!(!report.schedule_ok);
        assert!(report.holds(), "violations: {:?}", report.violations());
    }

    #[test]
    fn chain_of_constant_holds_with_equality() {
        let f = Polynomial::constant(2, 4.0);
        let k = BoxDomain::symmetric_unit(2);
        // schedule floor is e * fhat / t = e * 4 / 6 < 2
        let report = verify_chain(&f, &k, 2, 6.0).unwrap();
        assert_relative_eq!(report.lasserre_value, 4.0, max_relative = 1e-10);
        assert_relative_eq!(report.taylor_value, 4.0, max_relative = 1e-10);
        assert_relative_eq!(report.boltzmann_value, 4.0, max_relative = 1e-10);
        assert!(report.schedule_ok);
        assert!(report.holds());
    }

    /// At the schedule temperatures the taylor bound drops onto the
    /// Boltzmann expectation as r grows.
    #[test]
    fn density_bound_converges_at_schedule_temperature() {
        let corpus = [
            ("(10*x1+20*x2-7)^2 + (20*x1+10*x2-5)^2", 2594.0, 2u32),
            ("26*(x1^2+x2^2) - 48*x1*x2", 100.0, 2),
            ("64*(x1^4*x2^2 + x1^2*x2^4) - 48*x1^2*x2^2 + 1", 81.0, 6),
            (
                "5^6/6*x1^6 - 5^4*1.05*x1^4 + 50*x1^2 + 25*x1*x2 + 25*x2^2",
                2048.0,
                6,
            ),
        ];
        let k = BoxDomain::symmetric_unit(2);
        for (expr, fhat, d) in corpus {
            let f = parse_polynomial(expr, 2).unwrap();
            let t = std::f64::consts::E * f64::from(d) * fhat / 4.0;
            let e = crate::annealing::boltzmann_expectation(&f, &k, t).unwrap();
            let gaps: Vec<f64> = (1..=5)
                .map(|r| taylor_density_bound(&f, &k, r, t).unwrap() - e)
                .collect();
            for pair in gaps.windows(2) {
                assert!(
                    pair[1] <= pair[0] * 1.05 + 1e-12,
                    "{expr}: gaps not shrinking: {gaps:?}"
                );
            }
            assert!(
                gaps.last().unwrap().abs() <= 1e-3,
                "{expr}: final gap {}",
                gaps.last().unwrap()
            );
        }
    }
}
