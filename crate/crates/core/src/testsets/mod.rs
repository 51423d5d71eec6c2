//! Testing and supertesting set constructions, their certifiers and the
//! symmetry-reduced search for minimum supertesting sets.

mod certify;
mod minimal;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

pub use certify::{
    certify_affine, certify_supertesting, certify_testing_by_enumeration, certify_testing_by_sampling, CertParams,
    Certificate, CertificateKind, Evidence, Verdict, TOOL_VERSION,
};
pub use minimal::{min_supertesting_search, MinSearchOptions, MinSearchReport};

use crate::error::{Error, Result};
use crate::grid::{weight, GridSig, Point};
use crate::lincodes::hamming_testing_set;
use crate::pointset::PointSet;

/// Points of weight greater than `n - k`.
pub fn baseline_set(q: usize, n: usize, k: usize) -> Result<PointSet> {
    let sig = GridSig::new(q, n)?;
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!("face dimension {k} outside 1..={n}")));
    }
    Ok(PointSet::filter(sig, |x| weight(x) > n - k))
}

/// Seven cells of `[3]^3` as (layer, row, column): the main diagonal of
/// layer 0, the anti-diagonal of layer 1 and one cell of layer 2.
pub const THREE_CUBE_POINTS: [[u8; 3]; 7] =
    [[0, 0, 0], [0, 1, 1], [0, 2, 2], [1, 0, 2], [1, 1, 1], [1, 2, 0], [2, 0, 1]];

/// Lexicographically least canonical 7-point supertesting set for lines in
/// `[3]^3`, as produced by [`min_supertesting_search`].
pub const MINIMAL_THREE_CUBE_POINTS: [[u8; 3]; 7] =
    [[0, 0, 0], [0, 0, 1], [0, 1, 0], [1, 0, 0], [1, 1, 1], [1, 2, 2], [2, 1, 2]];

fn from_table(points: &[[u8; 3]]) -> PointSet {
    PointSet::new(GridSig::new(3, 3).expect("3^3"), points.iter().map(|p| Point::new(p.to_vec())))
        .expect("points inside [3]^3")
}

pub fn three_cube_set() -> PointSet {
    from_table(&THREE_CUBE_POINTS)
}

pub fn minimal_three_cube_set() -> PointSet {
    from_table(&MINIMAL_THREE_CUBE_POINTS)
}

/// `inner ∪ ([q]^n \ (S(q,n,n-k) ∪ [q']^n))` for `inner` over a smaller
/// alphabet `q'`.
pub fn lift_set(inner: &PointSet, q: usize, k: usize) -> Result<PointSet> {
    let small = inner.sig();
    let n = small.n();
    if small.q() >= q {
        return Err(Error::InvalidParameter(format!("lift needs q' < q, got q'={} q={q}", small.q())));
    }
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!("face dimension {k} outside 1..={n}")));
    }
    let sig = GridSig::new(q, n)?;
    let qp = small.q() as u8;
    let mask = inner.mask();
    Ok(PointSet::filter(sig, |x| if x.iter().all(|&c| c < qp) { mask[small.index_of(x)] } else { weight(x) > n - k }))
}

/// Cartesian product `T × T'` over `[q]^{n+n'}`.
pub fn product_set(left: &PointSet, right: &PointSet) -> Result<PointSet> {
    let (a, b) = (left.sig(), right.sig());
    if a.q() != b.q() {
        return Err(Error::DimensionMismatch(format!("alphabets {} and {}", a.q(), b.q())));
    }
    let sig = GridSig::new(a.q(), a.n() + b.n())?;
    let shift = b.size();
    let indices = left.indices().iter().flat_map(|&i| right.indices().iter().map(move |&j| i * shift + j));
    PointSet::from_indices(sig, indices)
}

/// `({1..q-1} × T) ∪ ({0} × T')` over `[q]^{n+1}`, where `T` is for
/// `k`-faces and `T'` for `(k-1)`-faces of `[q]^n`.
pub fn step_up_set(upper: &PointSet, lower: &PointSet, k: usize) -> Result<PointSet> {
    let sig = upper.sig();
    if lower.sig() != sig {
        return Err(Error::DimensionMismatch(format!("{} vs {}", sig, lower.sig())));
    }
    if k < 2 || k > sig.n() {
        return Err(Error::InvalidParameter(format!("step-up needs 2 <= k <= {}, got {k}", sig.n())));
    }
    let out = GridSig::new(sig.q(), sig.n() + 1)?;
    let shift = sig.size();
    let zero = lower.indices().iter().copied();
    let rest = (1..sig.q()).flat_map(|a| upper.indices().iter().map(move |&i| a * shift + i));
    PointSet::from_indices(out, zero.chain(rest))
}

/// Supertesting set for `k`-faces of `[2]^n` built by stepping up from the
/// nonzero points (`k = n`) and the affine Hamming set (`k = 2`).
pub fn q22_recursive_set(n: usize, k: usize) -> Result<PointSet> {
    if k < 2 || k > n {
        return Err(Error::InvalidParameter(format!("need 2 <= k <= n, got k={k}, n={n}")));
    }
    GridSig::new(2, n)?;
    let mut memo = HashMap::new();
    q22_step(n, k, &mut memo)
}

fn q22_step(n: usize, k: usize, memo: &mut HashMap<(usize, usize), PointSet>) -> Result<PointSet> {
    if let Some(set) = memo.get(&(n, k)) {
        return Ok(set.clone());
    }
    let set = if k == n {
        PointSet::filter(GridSig::new(2, n)?, |x| weight(x) > 0)
    } else if k == 2 {
        hamming_testing_set(n, true)?
    } else {
        let upper = q22_step(n - 1, k, memo)?;
        let lower = q22_step(n - 1, k - 1, memo)?;
        step_up_set(&upper, &lower, k)?
    };
    memo.insert((n, k), set.clone());
    Ok(set)
}

/// Supertesting set for lines of `[q]^n`, `q >= 3`: with `n = 3m + t`, the
/// product of `m` copies of the lifted seven-point set and `{1..q-1}^t`.
pub fn main_theorem_set(q: usize, n: usize) -> Result<PointSet> {
    if q < 3 {
        return Err(Error::InvalidParameter(format!("needs q >= 3, got {q}")));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    GridSig::new(q, n)?;
    let block = if q == 3 { three_cube_set() } else { lift_set(&three_cube_set(), q, 1)? };
    let (m, t) = (n / 3, n % 3);
    let mut acc: Option<PointSet> = None;
    for _ in 0..m {
        acc = Some(match acc {
            None => block.clone(),
            Some(a) => product_set(&a, &block)?,
        });
    }
    if t > 0 {
        let tail = baseline_set(q, t, 1)?;
        acc = Some(match acc {
            None => tail,
            Some(a) => product_set(&a, &tail)?,
        });
    }
    Ok(acc.expect("n >= 1"))
}

/// Declarative description of a construction, as accepted on the command
/// line and in JSON.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum ConstructionSpec {
    Baseline { q: usize, n: usize, k: usize },
    ThreeCube,
    MinimalThreeCube,
    Lift { inner: Box<ConstructionSpec>, q: usize, k: usize },
    Product { left: Box<ConstructionSpec>, right: Box<ConstructionSpec> },
    StepUp { upper: Box<ConstructionSpec>, lower: Box<ConstructionSpec>, k: usize },
    Q22Recursive { n: usize, k: usize },
    MainTheorem { q: usize, n: usize },
    Hamming { n: usize, affine: bool },
}

impl ConstructionSpec {
    pub fn build(&self) -> Result<PointSet> {
        match self {
            ConstructionSpec::Baseline { q, n, k } => baseline_set(*q, *n, *k),
            ConstructionSpec::ThreeCube => Ok(three_cube_set()),
            ConstructionSpec::MinimalThreeCube => Ok(minimal_three_cube_set()),
            ConstructionSpec::Lift { inner, q, k } => lift_set(&inner.build()?, *q, *k),
            ConstructionSpec::Product { left, right } => product_set(&left.build()?, &right.build()?),
            ConstructionSpec::StepUp { upper, lower, k } => step_up_set(&upper.build()?, &lower.build()?, *k),
            ConstructionSpec::Q22Recursive { n, k } => q22_recursive_set(*n, *k),
            ConstructionSpec::MainTheorem { q, n } => main_theorem_set(*q, *n),
            ConstructionSpec::Hamming { n, affine } => hamming_testing_set(*n, *affine),
        }
    }

    /// Face dimension the construction is meant to be supertesting for,
    /// when the family determines it.
    pub fn face_dimension(&self) -> Option<usize> {
        match self {
            ConstructionSpec::Baseline { k, .. }
            | ConstructionSpec::Lift { k, .. }
            | ConstructionSpec::StepUp { k, .. }
            | ConstructionSpec::Q22Recursive { k, .. } => Some(*k),
            ConstructionSpec::ThreeCube | ConstructionSpec::MinimalThreeCube | ConstructionSpec::MainTheorem { .. } => {
                Some(1)
            }
            ConstructionSpec::Hamming { .. } => Some(2),
            ConstructionSpec::Product { .. } => None,
        }
    }
}
