//! Measure-based upper bounds via generalized eigenvalues.
//!
//! The degree-2r sum-of-squares density bound for minimizing `f` over a box
//! `K` equals the smallest generalized eigenvalue of `A x = lambda B x`,
//! where, in a polynomial basis `{b_alpha}` spanning degrees <= r,
//!
//! ```text
//! A[a,b] = integral over K of f * b_a * b_b,   B[a,b] = integral of b_a * b_b.
//! ```
//!
//! The monomial basis gives the classical Hankel-type pair assembled from
//! exact box moments but conditions like a Hilbert matrix as r grows; the
//! default basis is the tensor-Legendre basis orthonormalized on K, which
//! keeps B at the identity and A well-scaled through r = 20 and beyond.

use std::time::Instant;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::moments::{
    box_moment, enumerate_basis, for_each_tensor_point, gauss_legendre_rule, integrate_polynomial,
    BoxDomain, MonomialBasis, QuadratureRule,
};
use crate::poly::Polynomial;
use crate::report::{BoundReport, Diagnostics, Method};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasisKind {
    Monomial,
    Orthonormal,
}

impl std::fmt::Display for BasisKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BasisKind::Monomial => write!(f, "monomial"),
            BasisKind::Orthonormal => write!(f, "orthonormal"),
        }
    }
}

/// The symmetric pencil (A, B) of a degree-r sum-of-squares density program.
#[derive(Clone, Debug)]
pub struct MatrixPair {
    pub a: DMatrix<f64>,
    pub b: DMatrix<f64>,
    pub basis: MonomialBasis,
    pub basis_kind: BasisKind,
}

/// Per-axis values of the orthonormalized Legendre polynomials at a point:
/// `P~_k(x) = sqrt((2k+1)/(hi-lo)) * P_k((2x-lo-hi)/(hi-lo))`.
fn orthonormal_axis_values(max_degree: u32, interval: (f64, f64), x: f64, out: &mut [f64]) {
    let (lo, hi) = interval;
    let u = (2.0 * x - lo - hi) / (hi - lo);
    let mut p_prev = 1.0;
    let mut p = u;
    for k in 0..=max_degree {
        let value = match k {
            0 => 1.0,
            1 => p,
            _ => {
                let kf = f64::from(k - 1);
                let p_next = ((2.0 * kf + 1.0) * u * p - kf * p_prev) / (kf + 1.0);
                p_prev = p;
                p = p_next;
                p
            }
        };
        out[k as usize] = value * (f64::from(2 * k + 1) / (hi - lo)).sqrt();
    }
}

/// Assemble the matrix pair for `f` on `K` at hierarchy index `r`.
///
/// Monomial kind: entries are exact box moments. Orthonormal kind: entries
/// come from a tensor Gauss-Legendre rule exact for degree `2r + deg f`, so
/// B reproduces the identity to rounding.
pub fn assemble_pair(f: &Polynomial, k: &BoxDomain, r: u32, basis_kind: BasisKind) -> MatrixPair {
    assert_eq!(
        f.dimension(),
        k.dimension(),
        "polynomial dimension must equal the box dimension"
    );
    let basis = enumerate_basis(k.dimension(), r);
    let size = basis.len();
    let mut a = DMatrix::zeros(size, size);
    let mut b = DMatrix::zeros(size, size);

    match basis_kind {
        BasisKind::Monomial => {
            for i in 0..size {
                for j in i..size {
                    let prod = basis.members()[i].product(&basis.members()[j]);
                    b[(i, j)] = box_moment(k, prod.exponents());
                    let mut entry = 0.0;
                    for (delta, coeff) in f.terms() {
                        entry += coeff * box_moment(k, prod.product(delta).exponents());
                    }
                    a[(i, j)] = entry;
                }
            }
        }
        BasisKind::Orthonormal => {
            let n = k.dimension();
            // exactness for integrands of degree 2r + deg f
            let nodes = ((2 * r + f.degree() + 2).div_ceil(2)) as usize;
            let rules: Vec<QuadratureRule> = k
                .intervals()
                .iter()
                .map(|&iv| gauss_legendre_rule(nodes, iv))
                .collect();
            let mut axis_values = vec![vec![0.0; r as usize + 1]; n];
            let mut member_values = vec![0.0; size];
            for_each_tensor_point(&rules, |point, w| {
                for (axis, vals) in axis_values.iter_mut().enumerate() {
                    orthonormal_axis_values(r, k.intervals()[axis], point[axis], vals);
                }
                for (vm, member) in member_values.iter_mut().zip(basis.members()) {
                    *vm = member
                        .exponents()
                        .iter()
                        .enumerate()
                        .map(|(axis, &deg)| axis_values[axis][deg as usize])
                        .product();
                }
                let wf = w * f.eval(point);
                for i in 0..size {
                    let bi = member_values[i];
                    for j in i..size {
                        let pij = bi * member_values[j];
                        a[(i, j)] += wf * pij;
                        b[(i, j)] += w * pij;
                    }
                }
            });
        }
    }
    // mirror the upper triangle
    for i in 0..size {
        for j in 0..i {
            a[(i, j)] = a[(j, i)];
            b[(i, j)] = b[(j, i)];
        }
    }
    MatrixPair {
        a,
        b,
        basis,
        basis_kind,
    }
}

/// Smallest generalized eigenvalue and its eigenvector.
#[derive(Clone, Debug)]
pub struct GevSolution {
    /// Minimum eigenvalue of `A x = lambda B x`.
    pub value: f64,
    /// Eigenvector normalized so `v^T B v = 1`.
    pub vector: DVector<f64>,
    /// `||A v - lambda B v||_2`.
    pub residual: f64,
    /// Gap to the second eigenvalue is below 1e-10 * ||A||.
    pub near_degenerate: bool,
    /// Lower estimate of cond(B) from the Cholesky diagonal.
    pub b_condition: f64,
}

/// Solve for the smallest generalized eigenvalue by Cholesky reduction
/// `B = L L^T` followed by a symmetric eigensolve of `L^-1 A L^-T`.
pub fn solve_smallest_gev(pair: &MatrixPair) -> Result<GevSolution> {
    let chol = nalgebra::Cholesky::new(pair.b.clone()).ok_or(Error::IndefiniteGram)?;
    let l = chol.l();
    let (dmax, dmin) = l
        .diagonal()
        .iter()
        .fold((f64::MIN, f64::MAX), |(mx, mn), &d| (mx.max(d), mn.min(d)));
    let b_condition = (dmax / dmin).powi(2);

    let m1 = l
        .solve_lower_triangular(&pair.a)
        .ok_or(Error::IndefiniteGram)?;
    let c = l
        .solve_lower_triangular(&m1.transpose())
        .ok_or(Error::IndefiniteGram)?;
    let c = (&c + c.transpose()) * 0.5;

    let eigen = nalgebra::SymmetricEigen::new(c);
    let mut order: Vec<usize> = (0..eigen.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eigen.eigenvalues[i].total_cmp(&eigen.eigenvalues[j]));
    let imin = order[0];
    let value = eigen.eigenvalues[imin];
    let norm_a = pair.a.norm();
    let near_degenerate =
        order.len() > 1 && (eigen.eigenvalues[order[1]] - value).abs() < 1e-10 * norm_a.max(1.0);

    let y = eigen.eigenvectors.column(imin).into_owned();
    let vector = l
        .transpose()
        .solve_upper_triangular(&y)
        .ok_or(Error::IndefiniteGram)?;
    let residual = (&pair.a * &vector - &pair.b * &vector * value).norm();
    Ok(GevSolution {
        value,
        vector,
        residual,
        near_degenerate,
        b_condition,
    })
}

/// The degree-2r sum-of-squares density upper bound on `min f over K`.
pub fn lasserre_upper_bound(
    f: &Polynomial,
    k: &BoxDomain,
    r: u32,
    basis_kind: BasisKind,
) -> Result<BoundReport> {
    let start = Instant::now();
    let pair = assemble_pair(f, k, r, basis_kind);
    let solution = solve_smallest_gev(&pair)?;
    Ok(BoundReport {
        method: Method::Lasserre,
        function: String::new(),
        r,
        t: None,
        value: solution.value,
        diagnostics: Diagnostics {
            basis_size: Some(pair.basis.len()),
            cond_estimate: Some(solution.b_condition),
            runtime_s: start.elapsed().as_secs_f64(),
            near_degenerate: solution.near_degenerate,
        },
    })
}

/// The basis polynomials indexing the pair: monomials `x^alpha`, or products
/// of Legendre polynomials orthonormalized on `K`.
pub fn basis_polynomials(
    k: &BoxDomain,
    basis: &MonomialBasis,
    basis_kind: BasisKind,
) -> Vec<Polynomial> {
    let n = k.dimension();
    match basis_kind {
        BasisKind::Monomial => basis
            .members()
            .iter()
            .map(|m| Polynomial::from_terms(n, [(m.exponents().to_vec(), 1.0)]))
            .collect(),
        BasisKind::Orthonormal => {
            // per-axis univariate families up to the degree bound
            let r = basis.degree_bound();
            let families: Vec<Vec<Polynomial>> = (0..n)
                .map(|axis| orthonormal_axis_polynomials(n, axis, k.intervals()[axis], r))
                .collect();
            basis
                .members()
                .iter()
                .map(|m| {
                    let mut p = Polynomial::constant(n, 1.0);
                    for (axis, &deg) in m.exponents().iter().enumerate() {
                        if deg > 0 {
                            p = &p * &families[axis][deg as usize];
                        } else {
                            p = p.scale(families[axis][0].coefficient(&vec![0; n]));
                        }
                    }
                    p
                })
                .collect()
        }
    }
}

/// Legendre polynomials in variable `axis`, orthonormalized on the interval,
/// expanded in the monomial basis via the three-term recurrence.
fn orthonormal_axis_polynomials(
    n: usize,
    axis: usize,
    interval: (f64, f64),
    max_degree: u32,
) -> Vec<Polynomial> {
    let (lo, hi) = interval;
    // u = (2x - lo - hi) / (hi - lo)
    let u = &Polynomial::variable(n, axis).scale(2.0 / (hi - lo))
        + &Polynomial::constant(n, -(lo + hi) / (hi - lo));
    let mut raw = vec![Polynomial::constant(n, 1.0)];
    if max_degree >= 1 {
        raw.push(u.clone());
    }
    for k in 1..max_degree {
        let kf = f64::from(k);
        let next = &(&u * &raw[k as usize]).scale((2.0 * kf + 1.0) / (kf + 1.0))
            - &raw[k as usize - 1].scale(kf / (kf + 1.0));
        raw.push(next);
    }
    raw.into_iter()
        .enumerate()
        .map(|(k, p)| p.scale(((2 * k + 1) as f64 / (hi - lo)).sqrt()))
        .collect()
}

/// The optimal sum-of-squares density: `h = (sum_a v_a b_a)^2` rescaled so
/// that it integrates to one over `K`; then `integral of f*h = lambda_min`.
pub fn optimal_density(
    f: &Polynomial,
    k: &BoxDomain,
    r: u32,
    basis_kind: BasisKind,
) -> Result<Polynomial> {
    let pair = assemble_pair(f, k, r, basis_kind);
    let solution = solve_smallest_gev(&pair)?;
    let polys = basis_polynomials(k, &pair.basis, basis_kind);
    let mut combination = Polynomial::zero(k.dimension());
    for (coeff, poly) in solution.vector.iter().zip(&polys) {
        combination = &combination + &poly.scale(*coeff);
    }
    let h = &combination * &combination;
    let mass = integrate_polynomial(k, &h);
    Ok(h.scale(1.0 / mass))
}
