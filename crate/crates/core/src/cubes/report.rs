use serde::{Deserialize, Serialize};

use super::pascal::q22_delta_formula;
use super::q22_size_formula;
use crate::error::{Error, Result};
use crate::grid::{sigma, GridSig};
use crate::testsets::{main_theorem_set, q22_recursive_set};

/// Grids up to this many cells have their sets built rather than sized by
/// formula.
const BUILD_LIMIT: usize = 1 << 22;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Source {
    /// Read off an explicitly built object.
    Constructed,
    /// Counted by exhaustive search.
    Enumerated,
    /// Evaluated from a closed-form expression.
    Formula,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tagged<T> {
    pub value: T,
    pub source: Source,
}

impl<T> Tagged<T> {
    pub fn new(value: T, source: Source) -> Self {
        Tagged { value, source }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CardinalityReport {
    pub q: usize,
    pub n: usize,
    pub k: usize,
    /// Size of the weight-based testing set, `sigma(q, n, n-k)`.
    pub trivial: Tagged<u128>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub construction: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constructed: Option<Tagged<u128>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<Tagged<u128>>,
    /// For lines: `|T|` bounds the log base `q` of the number of cubes,
    /// compared against `(q-1)^n`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub count_exponent: Option<Tagged<u128>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trivial_exponent: Option<Tagged<u128>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

fn feasible(q: usize, n: usize) -> bool {
    GridSig::new(q, n).is_ok_and(|s| s.size() <= BUILD_LIMIT)
}

fn main_theorem_size(q: usize, n: usize) -> Result<Tagged<u128>> {
    if feasible(q, n) {
        return Ok(Tagged::new(main_theorem_set(q, n)?.len() as u128, Source::Constructed));
    }
    let c = (q as u128 - 1).pow(3) - 1;
    Ok(Tagged::new(c.pow((n / 3) as u32) * (q as u128 - 1).pow((n % 3) as u32), Source::Formula))
}

/// Trivial and constructed testing-set sizes for `F_k^n(q; .)`.
pub fn cardinality_report(q: usize, n: usize, k: usize) -> Result<CardinalityReport> {
    if q < 2 || n == 0 || k == 0 || k > n {
        return Err(Error::InvalidParameter(format!("need q >= 2 and 1 <= k <= n, got q={q} n={n} k={k}")));
    }
    let trivial = sigma(q, n, (n - k) as i64)?;
    let mut report = CardinalityReport {
        q,
        n,
        k,
        trivial: Tagged::new(trivial, Source::Formula),
        construction: None,
        constructed: None,
        delta: None,
        count_exponent: None,
        trivial_exponent: None,
        notes: Vec::new(),
    };
    if q == 2 && k >= 2 {
        let size = if feasible(2, n) {
            Tagged::new(q22_recursive_set(n, k)?.len() as u128, Source::Constructed)
        } else {
            Tagged::new(q22_size_formula(n, k)?, Source::Formula)
        };
        report.construction = Some(if k == 2 { "hamming".into() } else { "q22-recursive".into() });
        report.constructed = Some(size);
        report.delta = Some(Tagged::new(q22_delta_formula(n, k)?, Source::Formula));
        report.notes.push("logarithms in the size formulas are base 2".into());
    } else if k == 1 && q >= 3 {
        let size = main_theorem_size(q, n)?;
        report.construction = Some("main-theorem".into());
        report.delta = Some(Tagged::new(trivial - size.value, size.source));
        report.count_exponent = Some(size);
        report.trivial_exponent = Some(Tagged::new(trivial, Source::Formula));
        report.constructed = Some(size);
    } else {
        report.notes.push("no construction improves the weight-based set for these parameters".into());
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub q: usize,
    pub n: usize,
    pub set_size: Tagged<u128>,
    /// `log_{q-1} |T|`, the exponent replacing `n`.
    pub log_size: Tagged<f64>,
    /// `log_{q-1} |T| / n`.
    pub alpha: Tagged<f64>,
    /// `(1/3) log_{q-1}((q-1)^3 - 1)`, the limit of `alpha` as `n` grows.
    pub alpha_limit: Tagged<f64>,
}

/// Exponent in the bound `q^{(q-1)^{alpha n}}` on the number of frequency
/// cubes with lines as faces.
pub fn bound_report(q: usize, n: usize) -> Result<BoundReport> {
    if q < 3 {
        return Err(Error::InvalidParameter(format!("bound report needs q >= 3, got {q}")));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let size = main_theorem_size(q, n)?;
    let base = (q - 1) as f64;
    let log_size = (size.value as f64).ln() / base.ln();
    let limit = (base.powi(3) - 1.0).ln() / base.ln() / 3.0;
    Ok(BoundReport {
        q,
        n,
        set_size: size,
        log_size: Tagged::new(log_size, Source::Formula),
        alpha: Tagged::new(log_size / n as f64, Source::Formula),
        alpha_limit: Tagged::new(limit, Source::Formula),
    })
}
