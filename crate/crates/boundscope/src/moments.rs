//! Lebesgue moments over boxes, monomial-basis enumeration, and tensor
//! Gauss-Legendre quadrature.
//!
//! Moments of axis-aligned boxes factor per axis:
//! `m_alpha(K) = prod_i (hi_i^{a_i+1} - lo_i^{a_i+1}) / (a_i + 1)`,
//! so polynomial integration is exact. Smooth non-polynomial integrands go
//! through an adaptive tensor rule that doubles the per-axis node count until
//! successive estimates agree.

use crate::error::{Error, Result};
use crate::poly::{Monomial, Polynomial};

/// Default per-axis node cap for [`integrate_smooth`].
pub const DEFAULT_MAX_NODES: usize = 1 << 11;

/// Axis-aligned product of intervals; the only supported domain.
/// Full-dimensional by construction (`lo < hi` on every axis).
#[derive(Clone, Debug, PartialEq)]
pub struct BoxDomain {
    intervals: Vec<(f64, f64)>,
}

impl BoxDomain {
    pub fn new(intervals: Vec<(f64, f64)>) -> Result<Self> {
        for (axis, &(lo, hi)) in intervals.iter().enumerate() {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::InvalidBox { axis, lo, hi });
            }
        }
        Ok(BoxDomain { intervals })
    }

    /// The cube `[lo, hi]^n`.
    pub fn cube(n: usize, lo: f64, hi: f64) -> Result<Self> {
        BoxDomain::new(vec![(lo, hi); n])
    }

    /// `[-1, 1]^n`, the domain of the test corpus.
    pub fn symmetric_unit(n: usize) -> Self {
        BoxDomain::cube(n, -1.0, 1.0).expect("valid cube")
    }

    pub fn dimension(&self) -> usize {
        self.intervals.len()
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn volume(&self) -> f64 {
        self.intervals.iter().map(|(lo, hi)| hi - lo).product()
    }

    /// Euclidean diameter (corner-to-corner distance).
    pub fn diameter(&self) -> f64 {
        self.intervals
            .iter()
            .map(|(lo, hi)| (hi - lo) * (hi - lo))
            .sum::<f64>()
            .sqrt()
    }

    /// All 2^n corner points.
    pub fn vertices(&self) -> Vec<Vec<f64>> {
        let n = self.dimension();
        (0..1usize << n)
            .map(|mask| {
                (0..n)
                    .map(|i| {
                        if mask >> i & 1 == 0 {
                            self.intervals[i].0
                        } else {
                            self.intervals[i].1
                        }
                    })
                    .collect()
            })
            .collect()
    }
}

/// Ordered enumeration of `N(n, r) = { alpha : sum_i alpha_i <= r }` in
/// graded-lex order; indexes the rows and columns of the moment matrices.
#[derive(Clone, Debug)]
pub struct MonomialBasis {
    dimension: usize,
    degree_bound: u32,
    members: Vec<Monomial>,
}

impl MonomialBasis {
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn degree_bound(&self) -> u32 {
        self.degree_bound
    }

    pub fn members(&self) -> &[Monomial] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// All exponent vectors with total degree at most `r`, graded-lex sorted.
pub fn enumerate_basis(n: usize, r: u32) -> MonomialBasis {
    assert!(n >= 1, "dimension must be at least 1");
    let mut members = Vec::new();
    let mut exps = vec![0u32; n];
    for d in 0..=r {
        fill_compositions(d, 0, &mut exps, &mut members);
    }
    MonomialBasis {
        dimension: n,
        degree_bound: r,
        members,
    }
}

/// Compositions of `remaining` into the slots from `slot` on, first slot
/// largest first (matches the graded-lex term order).
fn fill_compositions(remaining: u32, slot: usize, exps: &mut Vec<u32>, out: &mut Vec<Monomial>) {
    if slot == exps.len() - 1 {
        exps[slot] = remaining;
        out.push(Monomial::new(exps.clone()));
        return;
    }
    for a in (0..=remaining).rev() {
        exps[slot] = a;
        fill_compositions(remaining - a, slot + 1, exps, out);
    }
}

/// Lebesgue moment `m_alpha(K) = integral over K of x^alpha dx`.
pub fn box_moment(k: &BoxDomain, alpha: &[u32]) -> f64 {
    assert_eq!(
        alpha.len(),
        k.dimension(),
        "exponent vector length must equal the box dimension"
    );
    alpha
        .iter()
        .zip(k.intervals())
        .map(|(&a, &(lo, hi))| {
            let e = a as i32 + 1;
            (hi.powi(e) - lo.powi(e)) / f64::from(e)
        })
        .product()
}

/// Exact integral of a polynomial over a box via the moment formula.
pub fn integrate_polynomial(k: &BoxDomain, p: &Polynomial) -> f64 {
    assert_eq!(
        p.dimension(),
        k.dimension(),
        "polynomial dimension must equal the box dimension"
    );
    p.terms()
        .map(|(m, c)| c * box_moment(k, m.exponents()))
        .sum()
}

/// Gauss-Legendre rule on an interval: `m` nodes integrate polynomials of
/// degree <= 2m-1 exactly; weights sum to the interval length.
#[derive(Clone, Debug)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub interval: (f64, f64),
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, g: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * g(x))
            .sum()
    }
}

/// Legendre polynomial value and derivative at `x` by the three-term
/// recurrence.
fn legendre_with_derivative(m: usize, x: f64) -> (f64, f64) {
    if m == 0 {
        return (1.0, 0.0);
    }
    let mut p_prev = 1.0;
    let mut p = x;
    for k in 1..m {
        let kf = k as f64;
        let p_next = ((2.0 * kf + 1.0) * x * p - kf * p_prev) / (kf + 1.0);
        p_prev = p;
        p = p_next;
    }
    // P'_m(x) = m (x P_m - P_{m-1}) / (x^2 - 1); callers stay away from +-1
    let dp = m as f64 * (x * p - p_prev) / (x * x - 1.0);
    (p, dp)
}

/// The m-point Gauss-Legendre rule mapped affinely to `interval`.
///
/// Nodes are Newton-refined roots of the Legendre polynomial, started from
/// the Chebyshev-like asymptotic guesses; iteration stops when the Newton
/// step drops below 1e-15.
pub fn gauss_legendre_rule(m: usize, interval: (f64, f64)) -> QuadratureRule {
    assert!(m >= 1, "a quadrature rule needs at least one node");
    let (lo, hi) = interval;
    let mid = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);

    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    // roots come in +- pairs; compute the positive half
    for i in 0..m.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (4 * i + 3) as f64 / (4 * m + 2) as f64).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(m, x);
            dp = d;
            let step = p / d;
            x -= step;
            if step.abs() <= 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        // guesses for i < m/2 are the positive roots, descending
        nodes[m - 1 - i] = mid + half * x;
        weights[m - 1 - i] = half * w;
        nodes[i] = mid - half * x;
        weights[i] = half * w;
    }
    if m % 2 == 1 {
        let (_, d) = legendre_with_derivative(m, 0.0);
        nodes[m / 2] = mid;
        weights[m / 2] = half * 2.0 / (d * d);
    }
    QuadratureRule {
        nodes,
        weights,
        interval,
    }
}

/// Visit every tensor-product quadrature point of `rules` in odometer order,
/// passing the point and its product weight. Fixed traversal order keeps the
/// accumulated sums run-to-run identical.
pub(crate) fn for_each_tensor_point(rules: &[QuadratureRule], mut visit: impl FnMut(&[f64], f64)) {
    let n = rules.len();
    let mut idx = vec![0usize; n];
    let mut point = vec![0.0; n];
    loop {
        let mut w = 1.0;
        for i in 0..n {
            point[i] = rules[i].nodes[idx[i]];
            w *= rules[i].weights[idx[i]];
        }
        visit(&point, w);
        // odometer increment, last axis fastest
        let mut axis = n;
        loop {
            if axis == 0 {
                return;
            }
            axis -= 1;
            idx[axis] += 1;
            if idx[axis] < rules[axis].len() {
                break;
            }
            idx[axis] = 0;
        }
    }
}

/// Tensor Gauss-Legendre with `nodes_per_axis` nodes on every axis; exact for
/// polynomials of per-variable degree <= 2m-1.
pub fn tensor_quadrature(k: &BoxDomain, nodes_per_axis: usize, g: impl Fn(&[f64]) -> f64) -> f64 {
    let rules: Vec<QuadratureRule> = k
        .intervals()
        .iter()
        .map(|&iv| gauss_legendre_rule(nodes_per_axis, iv))
        .collect();
    let mut sum = 0.0;
    for_each_tensor_point(&rules, |point, w| sum += w * g(point));
    sum
}

/// Adaptive integral of a continuous function: per-axis node count doubles
/// from 8 until two successive tensor estimates agree to `rel_tol`; returns
/// the last estimate.
pub fn integrate_smooth(k: &BoxDomain, g: impl Fn(&[f64]) -> f64, rel_tol: f64) -> Result<f64> {
    integrate_smooth_with_cap(k, g, rel_tol, DEFAULT_MAX_NODES)
}

/// [`integrate_smooth`] with an explicit per-axis node cap.
pub fn integrate_smooth_with_cap(
    k: &BoxDomain,
    g: impl Fn(&[f64]) -> f64,
    rel_tol: f64,
    max_nodes: usize,
) -> Result<f64> {
    assert!(rel_tol > 0.0, "rel_tol must be positive");
    let mut last_two = (f64::NAN, f64::NAN);
    let mut m = 8;
    while m <= max_nodes {
        let estimate = tensor_quadrature(k, m, &g);
        let previous = last_two.1;
        if !previous.is_nan() && estimates_agree(previous, estimate, rel_tol) {
            return Ok(estimate);
        }
        last_two = (previous, estimate);
        m *= 2;
    }
    Err(Error::QuadratureAccuracy {
        previous: last_two.0,
        latest: last_two.1,
        max_nodes,
    })
}

pub(crate) fn estimates_agree(a: f64, b: f64, rel_tol: f64) -> bool {
    let scale = a.abs().max(b.abs());
    scale == 0.0 || (a - b).abs() <= rel_tol * scale
}
