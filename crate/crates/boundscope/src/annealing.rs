//! Boltzmann-distribution bounds and the annealing temperature schedule.
//!
//! `E[f] = int_K f e^(-f/t) / int_K e^(-f/t)` upper-bounds `min f over K` for
//! every temperature `t > 0` and decreases toward it as `t -> 0`. The
//! schedule `t(r) = e * d * fhat_max / r` (d the degree of f, fhat_max the
//! sup of |f| over K) makes the bounds comparable to the degree-r
//! sum-of-squares density bounds.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::moments::{
    estimates_agree, for_each_tensor_point, gauss_legendre_rule, BoxDomain, QuadratureRule,
    DEFAULT_MAX_NODES,
};
use crate::poly::Polynomial;
use crate::report::{BoundReport, Diagnostics, Method};

/// Default relative tolerance for Boltzmann integrals; the reference tables
/// print at most six significant digits, so 1e-9 leaves margin.
pub const DEFAULT_REL_TOL: f64 = 1e-9;

/// The comparison schedule `t(r) = e * d * fhat_max / r`.
#[derive(Clone, Copy, Debug)]
pub struct TemperatureSchedule {
    /// Total degree of the objective.
    pub degree: u32,
    /// Max of |f| over the box.
    pub fhat_max: f64,
}

impl TemperatureSchedule {
    pub fn new(degree: u32, fhat_max: f64) -> Self {
        assert!(fhat_max >= 0.0, "fhat_max must be nonnegative");
        TemperatureSchedule { degree, fhat_max }
    }

    /// Strictly decreasing in r; positive for every r >= 1.
    pub fn temperature(&self, r: u32) -> f64 {
        assert!(r >= 1, "the schedule starts at r = 1");
        std::f64::consts::E * f64::from(self.degree) * self.fhat_max / f64::from(r)
    }
}

/// Grid resolution for extremum scans: fine for the 2-D corpus, coarser as
/// the tensor grid grows with dimension.
fn scan_points_per_axis(n: usize) -> usize {
    match n {
        0..=2 => 401,
        3..=4 => 41,
        _ => 11,
    }
}

/// Scan the vertex set and a dense grid for the best score, then refine
/// coordinate-wise with golden-section passes inside the winning grid cell.
fn scan_and_refine(f: &Polynomial, k: &BoxDomain, score: impl Fn(f64) -> f64) -> f64 {
    let n = k.dimension();
    let m = scan_points_per_axis(n);

    let mut best_point = vec![0.0; n];
    let mut best = f64::NEG_INFINITY;

    for v in k.vertices() {
        let value = score(f.eval(&v));
        if value > best {
            best = value;
            best_point.copy_from_slice(&v);
        }
    }
    let mut idx = vec![0usize; n];
    let mut point = vec![0.0; n];
    'grid: loop {
        for i in 0..n {
            let (lo, hi) = k.intervals()[i];
            point[i] = lo + (hi - lo) * idx[i] as f64 / (m - 1) as f64;
        }
        let value = score(f.eval(&point));
        if value > best {
            best = value;
            best_point.copy_from_slice(&point);
        }
        let mut axis = n;
        loop {
            if axis == 0 {
                break 'grid;
            }
            axis -= 1;
            idx[axis] += 1;
            if idx[axis] < m {
                break;
            }
            idx[axis] = 0;
        }
    }

    // local coordinate refinement around the grid winner: golden-section
    // passes per axis within one grid spacing
    let inv_phi = 0.5 * (5.0f64.sqrt() - 1.0);
    let mut current = best_point;
    for _ in 0..6 {
        for axis in 0..n {
            let (lo, hi) = k.intervals()[axis];
            let spacing = (hi - lo) / (m - 1) as f64;
            let mut a = (current[axis] - spacing).max(lo);
            let mut b = (current[axis] + spacing).min(hi);
            let mut x1 = b - inv_phi * (b - a);
            let mut x2 = a + inv_phi * (b - a);
            current[axis] = x1;
            let mut f1 = score(f.eval(&current));
            current[axis] = x2;
            let mut f2 = score(f.eval(&current));
            for _ in 0..60 {
                if f1 >= f2 {
                    b = x2;
                    x2 = x1;
                    f2 = f1;
                    x1 = b - inv_phi * (b - a);
                    current[axis] = x1;
                    f1 = score(f.eval(&current));
                } else {
                    a = x1;
                    x1 = x2;
                    f1 = f2;
                    x2 = a + inv_phi * (b - a);
                    current[axis] = x2;
                    f2 = score(f.eval(&current));
                }
            }
            current[axis] = 0.5 * (a + b);
            best = best.max(score(f.eval(&current)));
        }
    }
    best
}

/// Max of |f| over `K`: vertices plus a dense grid, then coordinate-wise
/// refinement. A certified lower bound on the true maximum.
pub fn fhat_max(f: &Polynomial, k: &BoxDomain) -> f64 {
    scan_and_refine(f, k, f64::abs)
}

/// Min of f over `K` by the same scan; used for diagnostics and error terms.
pub fn grid_minimum(f: &Polynomial, k: &BoxDomain) -> f64 {
    -scan_and_refine(f, k, |v| -v)
}

/// Intermediate quadrature values of one converged Boltzmann evaluation,
/// in shift-factored form: raw integrals carry a common factor e^(-shift/t)
/// that cancels in every ratio.
#[derive(Clone, Copy, Debug)]
pub struct BoltzmannParts {
    pub expectation: f64,
    /// `int_K e^(-(f - shift)/t)`.
    pub shifted_mass: f64,
    /// The grid minimum of f used as the exponential shift.
    pub shift: f64,
    /// Final per-axis node count.
    pub nodes_per_axis: usize,
}

/// Core adaptive evaluation. Per refinement level the shift is the minimum
/// of f over that level's tensor grid, applied to numerator and denominator
/// alike; the expectation is assembled as
/// `shift + int (f - shift) e^(-(f - shift)/t) / int e^(-(f - shift)/t)`
/// so the numerator integrand stays nonnegative.
pub fn boltzmann_parts(
    f: &Polynomial,
    k: &BoxDomain,
    t: f64,
    rel_tol: f64,
    max_nodes: usize,
) -> Result<BoltzmannParts> {
    assert!(t > 0.0, "temperature must be positive");
    assert_eq!(
        f.dimension(),
        k.dimension(),
        "polynomial dimension must equal the box dimension"
    );
    let mut previous: Option<BoltzmannParts> = None;
    let mut second_last = f64::NAN;
    let mut m = 8;
    while m <= max_nodes {
        let rules: Vec<QuadratureRule> = k
            .intervals()
            .iter()
            .map(|&iv| gauss_legendre_rule(m, iv))
            .collect();
        // first pass: the shift; second pass: the shifted sums
        let mut shift = f64::INFINITY;
        for_each_tensor_point(&rules, |point, _| shift = shift.min(f.eval(point)));
        let mut numerator = 0.0;
        let mut mass = 0.0;
        for_each_tensor_point(&rules, |point, w| {
            let excess = f.eval(point) - shift;
            let weight = w * (-excess / t).exp();
            numerator += weight * excess;
            mass += weight;
        });
        let parts = BoltzmannParts {
            expectation: shift + numerator / mass,
            shifted_mass: mass,
            shift,
            nodes_per_axis: m,
        };
        if let Some(prev) = previous {
            let expectation_ok = estimates_agree(prev.expectation, parts.expectation, rel_tol);
            // compare masses through their logs: the shifts differ per level
            let log_mass = |p: &BoltzmannParts| -p.shift / t + p.shifted_mass.ln();
            let mass_ok = (log_mass(&prev) - log_mass(&parts)).abs() <= rel_tol * 10.0 + 1e-14;
            if expectation_ok && mass_ok {
                return Ok(parts);
            }
        }
        second_last = previous.map(|p| p.expectation).unwrap_or(f64::NAN);
        previous = Some(parts);
        m *= 2;
    }
    Err(Error::QuadratureAccuracy {
        previous: second_last,
        latest: previous.map(|p| p.expectation).unwrap_or(f64::NAN),
        max_nodes,
    })
}

/// `E[f(X)]` for X Boltzmann-distributed on `K` at temperature `t`.
pub fn boltzmann_expectation(f: &Polynomial, k: &BoxDomain, t: f64) -> Result<f64> {
    boltzmann_expectation_with(f, k, t, DEFAULT_REL_TOL, DEFAULT_MAX_NODES)
}

/// [`boltzmann_expectation`] with explicit tolerance and node cap.
pub fn boltzmann_expectation_with(
    f: &Polynomial,
    k: &BoxDomain,
    t: f64,
    rel_tol: f64,
    max_nodes: usize,
) -> Result<f64> {
    boltzmann_parts(f, k, t, rel_tol, max_nodes).map(|p| p.expectation)
}

/// The annealing bound at schedule index `r`: the Boltzmann expectation at
/// `t = e * d * fhat_max / r`. `fhat_override` substitutes a printed
/// reference value for the computed maximum when reproducing tables.
pub fn sa_bound(
    f: &Polynomial,
    k: &BoxDomain,
    r: u32,
    fhat_override: Option<f64>,
) -> Result<BoundReport> {
    let start = Instant::now();
    let fhat = fhat_override.unwrap_or_else(|| fhat_max(f, k));
    let schedule = TemperatureSchedule::new(f.degree(), fhat);
    let t = schedule.temperature(r);
    // degree 0 or fhat 0 means f is constant; every expectation equals the
    // uniform mean
    let value = if t > 0.0 {
        boltzmann_expectation(f, k, t)?
    } else {
        crate::moments::integrate_polynomial(k, f) / k.volume()
    };
    Ok(BoundReport {
        method: Method::Sa,
        function: String::new(),
        r,
        t: Some(t),
        value,
        diagnostics: Diagnostics {
            runtime_s: start.elapsed().as_secs_f64(),
            ..Diagnostics::default()
        },
    })
}

/// Both routes to the lifted expectation over
/// `K^ = {(x, z) : x in K, f(x) <= z <= E_K}`.
#[derive(Clone, Copy, Debug)]
pub struct LiftedIdentity {
    /// Via the integration-by-parts closed forms for the lifted numerator
    /// and denominator.
    pub lhs: f64,
    /// Via `E_K + t`.
    pub rhs: f64,
    pub gap: f64,
}

/// Evaluate the lifted-set identity `E_K^ = E_K + t` two ways.
///
/// With `D^ = t D - t e^(-E/t) vol(K)` and
/// `N^ = -t E e^(-E/t) vol(K) + t N + t D^`, the left side is `N^ / D^`.
/// All quantities are computed in shift-factored form so a common factor
/// `e^(-shift/t)` cancels.
pub fn lifted_identity_check(f: &Polynomial, k: &BoxDomain, t: f64) -> Result<LiftedIdentity> {
    assert!(t > 0.0, "temperature must be positive");
    if f.degree() == 0 {
        // the lifted set degenerates (E_K equals f everywhere and D^ = 0);
        // after the exact cancellation N^ = (E + t) D^ both routes give E + t
        let c = f.eval(&vec![0.0; f.dimension()]);
        return Ok(LiftedIdentity {
            lhs: c + t,
            rhs: c + t,
            gap: 0.0,
        });
    }
    let parts = boltzmann_parts(f, k, t, DEFAULT_REL_TOL, DEFAULT_MAX_NODES)?;
    let e_k = parts.expectation;
    let d = parts.shifted_mass;
    // N/D = E, so the shifted numerator is E * D
    let n = e_k * d;
    let boundary = (-(e_k - parts.shift) / t).exp() * k.volume();
    let d_hat = t * d - t * boundary;
    let n_hat = -t * e_k * boundary + t * n + t * d_hat;
    let lhs = n_hat / d_hat;
    let rhs = e_k + t;
    Ok(LiftedIdentity {
        lhs,
        rhs,
        gap: lhs - rhs,
    })
}
