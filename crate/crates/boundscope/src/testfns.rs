//! Builtin test functions: four bivariate polynomials on [-1, 1]^2 with
//! minimum 0, shipped with their reference metadata (max of |f|, degree,
//! convexity) so table reproduction runs offline.

use std::sync::LazyLock;

use crate::moments::BoxDomain;
use crate::parser::parse_polynomial;
use crate::poly::Polynomial;

#[derive(Clone, Debug)]
pub struct TestFunction {
    /// CLI key: booth | matyas | motzkin | camel3.
    pub key: String,
    pub name: String,
    pub expression: String,
    /// Reference max of |f| over the domain, as printed. The camel3 entry
    /// is a rounding of the exact 5^6/6 - 656.25 + 100 = 2047.9166...
    pub fhat_max: f64,
    pub degree: u32,
    pub convex: bool,
    pub f_min: f64,
}

impl TestFunction {
    pub fn polynomial(&self) -> Polynomial {
        parse_polynomial(&self.expression, 2).expect("builtin expression parses")
    }

    pub fn domain(&self) -> BoxDomain {
        BoxDomain::symmetric_unit(2)
    }
}

static CORPUS: LazyLock<Vec<TestFunction>> = LazyLock::new(|| {
    let raw = include_str!("../data/table1.csv");
    let mut out = Vec::new();
    for line in raw.lines().skip(1) {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields.len(), 7, "malformed corpus row: {line}");
        out.push(TestFunction {
            key: fields[0].to_string(),
            name: fields[1].to_string(),
            expression: fields[2].to_string(),
            fhat_max: fields[3].parse().expect("fhat_max"),
            degree: fields[4].parse().expect("degree"),
            convex: fields[5] == "yes",
            f_min: fields[6].parse().expect("f_min"),
        });
    }
    out
});

pub fn all() -> &'static [TestFunction] {
    &CORPUS
}

pub fn by_key(key: &str) -> Option<&'static TestFunction> {
    CORPUS.iter().find(|f| f.key == key)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn corpus_has_four_entries() {
        assert_eq!(all().len(), 4);
        for key in ["booth", "matyas", "motzkin", "camel3"] {
            assert!(by_key(key).is_some(), "missing {key}");
        }
        assert!(by_key("rosenbrock").is_none());
    }

    #[test]
    fn expressions_parse_with_printed_degrees() {
        for f in all() {
            assert_eq!(f.polynomial().degree(), f.degree, "{}", f.key);
            assert_eq!(f.f_min, 0.0);
        }
    }

    #[test]
    fn known_values_at_corners() {
        assert_eq!(
            by_key("booth").unwrap().polynomial().eval(&[-1.0, -1.0]),
            2594.0
        );
        assert_eq!(
            by_key("matyas").unwrap().polynomial().eval(&[1.0, -1.0]),
            100.0
        );
        assert_eq!(
            by_key("motzkin").unwrap().polynomial().eval(&[1.0, 1.0]),
            81.0
        );
        assert_relative_eq!(
            by_key("camel3").unwrap().polynomial().eval(&[1.0, 1.0]),
            15625.0 / 6.0 - 656.25 + 100.0,
            max_relative = 1e-14
        );
    }

    #[test]
    fn convexity_flags() {
        assert!(by_key("booth").unwrap().convex);
        assert!(by_key("matyas").unwrap().convex);
        assert!(!by_key("motzkin").unwrap().convex);
        assert!(!by_key("camel3").unwrap().convex);
    }
}
