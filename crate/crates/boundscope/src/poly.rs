//! Sparse multivariate polynomials over f64.
//!
//! A polynomial is a map from exponent vectors to nonzero coefficients.
//! Terms are kept in graded-lexicographic order so that iteration (and hence
//! floating-point summation) is deterministic across runs.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

/// Coefficients with magnitude below this are dropped after arithmetic.
/// Only true zeros land here in practice; small Taylor-density coefficients
/// are legitimate and must survive.
const PRUNE_THRESHOLD: f64 = 1e-300;

/// Exponent vector of a single term: `x^alpha = prod_i x_i^{alpha[i]}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monomial {
    exponents: Vec<u32>,
}

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial { exponents }
    }

    pub fn constant(dimension: usize) -> Self {
        Monomial {
            exponents: vec![0; dimension],
        }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.exponents.iter().sum()
    }

    /// Component-wise sum of exponents.
    pub fn product(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.len(), other.len());
        Monomial {
            exponents: self
                .exponents
                .iter()
                .zip(&other.exponents)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn eval(&self, point: &[f64]) -> f64 {
        debug_assert_eq!(self.len(), point.len());
        self.exponents
            .iter()
            .zip(point)
            .map(|(&a, &x)| x.powi(a as i32))
            .product()
    }
}

/// Graded-lex: lower total degree first; within a degree class, larger
/// leading exponents first, so (1,0) precedes (0,1).
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| other.exponents.cmp(&self.exponents))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial in `dimension` variables. Immutable after construction;
/// all arithmetic returns new values.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    dimension: usize,
    terms: BTreeMap<Monomial, f64>,
}

impl Polynomial {
    pub fn zero(dimension: usize) -> Self {
        Polynomial {
            dimension,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dimension: usize, value: f64) -> Self {
        let mut p = Polynomial::zero(dimension);
        if value.abs() >= PRUNE_THRESHOLD {
            p.terms.insert(Monomial::constant(dimension), value);
        }
        p
    }

    /// The variable `x_{index+1}` (zero-based index).
    pub fn variable(dimension: usize, index: usize) -> Self {
        assert!(index < dimension, "variable index out of range");
        let mut exps = vec![0; dimension];
        exps[index] = 1;
        Polynomial::from_terms(dimension, [(exps, 1.0)])
    }

    pub fn from_terms<I>(dimension: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, f64)>,
    {
        let mut map = BTreeMap::new();
        for (exps, coeff) in terms {
            assert_eq!(
                exps.len(),
                dimension,
                "exponent vector length must equal the dimension"
            );
            *map.entry(Monomial::new(exps)).or_insert(0.0) += coeff;
        }
        map.retain(|_, c| c.abs() >= PRUNE_THRESHOLD);
        Polynomial {
            dimension,
            terms: map,
        }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, f64)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn coefficient(&self, exponents: &[u32]) -> f64 {
        self.terms
            .get(&Monomial::new(exponents.to_vec()))
            .copied()
            .unwrap_or(0.0)
    }

    /// Max total degree of the stored terms; 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms
            .keys()
            .map(Monomial::total_degree)
            .max()
            .unwrap_or(0)
    }

    /// Largest coefficient magnitude; 0 for the zero polynomial.
    pub fn max_coefficient(&self) -> f64 {
        self.terms.values().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Evaluate at `point`. Panics if `point.len() != dimension`.
    pub fn eval(&self, point: &[f64]) -> f64 {
        assert_eq!(
            point.len(),
            self.dimension,
            "point length must equal the polynomial dimension"
        );
        self.terms.iter().map(|(m, &c)| c * m.eval(point)).sum()
    }

    pub fn scale(&self, factor: f64) -> Polynomial {
        let mut terms = self.terms.clone();
        for c in terms.values_mut() {
            *c *= factor;
        }
        terms.retain(|_, c| c.abs() >= PRUNE_THRESHOLD);
        Polynomial {
            dimension: self.dimension,
            terms,
        }
    }

    /// `self^k` by repeated squaring; `p^0 = 1`.
    pub fn powi(&self, k: u32) -> Polynomial {
        let mut result = Polynomial::constant(self.dimension, 1.0);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Partial derivative with respect to variable `index` (zero-based).
    pub fn differentiate(&self, index: usize) -> Polynomial {
        assert!(index < self.dimension, "variable index out of range");
        let terms = self.terms.iter().filter_map(|(m, &c)| {
            let a = m.exponents()[index];
            if a == 0 {
                return None;
            }
            let mut exps = m.exponents().to_vec();
            exps[index] = a - 1;
            Some((exps, c * f64::from(a)))
        });
        Polynomial::from_terms(self.dimension, terms.collect::<Vec<_>>())
    }
}

impl std::ops::Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.dimension, rhs.dimension, "dimension mismatch");
        let mut terms = self.terms.clone();
        for (m, &c) in &rhs.terms {
            *terms.entry(m.clone()).or_insert(0.0) += c;
        }
        terms.retain(|_, c| c.abs() >= PRUNE_THRESHOLD);
        Polynomial {
            dimension: self.dimension,
            terms,
        }
    }
}

impl std::ops::Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &(-rhs)
    }
}

impl std::ops::Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(-1.0)
    }
}

impl std::ops::Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.dimension, rhs.dimension, "dimension mismatch");
        let mut terms: BTreeMap<Monomial, f64> = BTreeMap::new();
        for (ma, &ca) in &self.terms {
            for (mb, &cb) in &rhs.terms {
                *terms.entry(ma.product(mb)).or_insert(0.0) += ca * cb;
            }
        }
        terms.retain(|_, c| c.abs() >= PRUNE_THRESHOLD);
        Polynomial {
            dimension: self.dimension,
            terms,
        }
    }
}

/// `sum_k coeffs[k] * p^k`, evaluated Horner-style to limit the magnitude of
/// intermediate coefficients.
pub fn compose_univariate(coeffs: &[f64], p: &Polynomial) -> Polynomial {
    let n = p.dimension();
    let Some((&last, rest)) = coeffs.split_last() else {
        return Polynomial::zero(n);
    };
    let mut acc = Polynomial::constant(n, last);
    for &c in rest.iter().rev() {
        acc = &(&acc * p) + &Polynomial::constant(n, c);
    }
    acc
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        // highest-degree terms first reads more naturally
        for (i, (m, &c)) in self.terms.iter().rev().enumerate() {
            let sign = if c < 0.0 { "-" } else { "+" };
            if i == 0 {
                if c < 0.0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let mag = c.abs();
            let is_const = m.total_degree() == 0;
            if (mag - 1.0).abs() > 1e-15 || is_const {
                write!(f, "{mag}")?;
                if !is_const {
                    write!(f, "*")?;
                }
            }
            let mut first_var = true;
            for (j, &a) in m.exponents().iter().enumerate() {
                if a == 0 {
                    continue;
                }
                if !first_var {
                    write!(f, "*")?;
                }
                first_var = false;
                write!(f, "x{}", j + 1)?;
                if a > 1 {
                    write!(f, "^{a}")?;
                }
            }
        }
        Ok(())
    }
}
