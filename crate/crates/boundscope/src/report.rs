//! Bound reports: the unit of CSV output.

use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Lasserre,
    Sa,
    Taylor,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Lasserre => write!(f, "lasserre"),
            Method::Sa => write!(f, "sa"),
            Method::Taylor => write!(f, "taylor"),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Diagnostics {
    /// Order of the matrix pair (lasserre only).
    pub basis_size: Option<usize>,
    /// Cheap lower estimate of cond(B) from the Cholesky diagonal.
    pub cond_estimate: Option<f64>,
    pub runtime_s: f64,
    /// Smallest eigenvalue was (nearly) multiple; the density is not unique.
    pub near_degenerate: bool,
}

/// One computed bound.
#[derive(Clone, Debug)]
pub struct BoundReport {
    pub method: Method,
    pub function: String,
    pub r: u32,
    /// Temperature; absent for the lasserre method.
    pub t: Option<f64>,
    pub value: f64,
    pub diagnostics: Diagnostics,
}

impl BoundReport {
    pub const CSV_HEADER: &'static str =
        "function,method,r,t,value,basis_size,cond_estimate,runtime_s";

    pub fn with_function(mut self, name: impl Into<String>) -> Self {
        self.function = name.into();
        self
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.function,
            self.method,
            self.r,
            self.t.map(fmt_sig).unwrap_or_default(),
            fmt_sig(self.value),
            self.diagnostics
                .basis_size
                .map(|v| v.to_string())
                .unwrap_or_default(),
            self.diagnostics
                .cond_estimate
                .map(fmt_sig)
                .unwrap_or_default(),
            fmt_sig(self.diagnostics.runtime_s),
        )
    }
}

/// Format with 10 significant digits, period decimal separator.
pub fn fmt_sig(v: f64) -> String {
    if !v.is_finite() {
        return format!("{v}");
    }
    if v == 0.0 {
        return "0".to_string();
    }
    let exp = v.abs().log10().floor() as i32;
    if (-4..10).contains(&exp) {
        let decimals = (9 - exp).max(0) as usize;
        format!("{v:.decimals$}")
    } else {
        format!("{v:.9e}")
    }
}
