//! Frequency hypercubes: recognition, enumeration, reconstruction from
//! testing sets, the zero-face-sum space and the cardinality reports.

mod linalg;
mod pascal;
mod reconstruct;
mod report;
mod search;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use linalg::{face_sum_nullity, lk_basis, lk_dimension, rational_rank};
pub use pascal::{eq1_check, eq1_closed_form, pascal_eval, q22_delta_formula, q22_size_formula, Boundary, PascalTable};
pub use reconstruct::reconstruct_baseline;
pub use report::{bound_report, cardinality_report, BoundReport, CardinalityReport, Source, Tagged};
pub use search::{
    count_cubes, enumerate_cubes, for_each_cube, reconstruct_csp, sample_cubes, Completion, SampleRun,
    DEFAULT_CUBE_NODE_CAP,
};

use crate::array::CubeArray;
use crate::error::{Error, Result};
use crate::face::FaceTable;
use crate::grid::{GridSig, Point};
use crate::pointset::PointSet;

/// Parameters of `F_k^n(q; lambda_0..lambda_{m-1})`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FreqParams {
    pub q: usize,
    pub n: usize,
    pub k: usize,
    pub lambdas: Vec<u32>,
}

impl FreqParams {
    pub fn new(q: usize, n: usize, k: usize, lambdas: Vec<u32>) -> Result<Self> {
        let p = FreqParams { q, n, k, lambdas };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let sig = self.sig()?;
        if self.k == 0 || self.k > self.n {
            return Err(Error::InvalidParameter(format!("face dimension {} outside 1..={}", self.k, self.n)));
        }
        if self.lambdas.len() < 2 {
            return Err(Error::InvalidParameter("need at least two symbols".into()));
        }
        let face = sig.q().pow(self.k as u32) as u64;
        let total: u64 = self.lambdas.iter().map(|&l| l as u64).sum();
        if total != face {
            return Err(Error::InvalidParameter(format!("multiplicities sum to {total}, faces have {face} cells")));
        }
        Ok(())
    }

    pub fn sig(&self) -> Result<GridSig> {
        GridSig::new(self.q, self.n)
    }

    pub fn m(&self) -> usize {
        self.lambdas.len()
    }

    pub(crate) fn face_table(&self) -> Result<FaceTable> {
        self.validate()?;
        FaceTable::new(self.sig()?, self.k)
    }
}

/// Values fixed on a subset of cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialCube {
    sig: GridSig,
    m: usize,
    assignments: BTreeMap<usize, u8>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PartialCubeDoc {
    pub q: usize,
    pub n: usize,
    pub m: usize,
    pub points: Vec<Vec<u8>>,
    pub values: Vec<u8>,
}

impl PartialCube {
    pub fn new(sig: GridSig, m: usize, assignments: impl IntoIterator<Item = (Point, u8)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (p, v) in assignments {
            sig.check_point(&p)?;
            if v as usize >= m {
                return Err(Error::ValueOutOfRange { index: sig.index_of(p.coords()), value: v as i32 });
            }
            map.insert(sig.index_of(p.coords()), v);
        }
        Ok(PartialCube { sig, m, assignments: map })
    }

    /// `f|_T`.
    pub fn restrict(f: &CubeArray, m: usize, set: &PointSet) -> Result<Self> {
        if f.sig() != set.sig() {
            return Err(Error::DimensionMismatch(format!("{} vs {}", f.sig(), set.sig())));
        }
        f.check_range(0, m as i32 - 1)?;
        let assignments = set.indices().iter().map(|&i| (i, f.at(i) as u8)).collect();
        Ok(PartialCube { sig: f.sig(), m, assignments })
    }

    pub fn sig(&self) -> GridSig {
        self.sig
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn get(&self, index: usize) -> Option<u8> {
        self.assignments.get(&index).copied()
    }

    pub fn assignments(&self) -> impl Iterator<Item = (usize, u8)> + '_ {
        self.assignments.iter().map(|(&i, &v)| (i, v))
    }

    /// Cells carrying a value.
    pub fn domain(&self) -> PointSet {
        PointSet::from_indices(self.sig, self.assignments.keys().copied()).expect("indices valid")
    }

    pub fn to_doc(&self) -> PartialCubeDoc {
        PartialCubeDoc {
            q: self.sig.q(),
            n: self.sig.n(),
            m: self.m,
            points: self.assignments.keys().map(|&i| self.sig.point_at(i).0).collect(),
            values: self.assignments.values().copied().collect(),
        }
    }

    pub fn from_doc(doc: &PartialCubeDoc) -> Result<Self> {
        if doc.points.len() != doc.values.len() {
            return Err(Error::Parse(format!("{} points but {} values", doc.points.len(), doc.values.len())));
        }
        let sig = GridSig::new(doc.q, doc.n)?;
        PartialCube::new(sig, doc.m, doc.points.iter().cloned().map(Point).zip(doc.values.iter().copied()))
    }
}

pub(crate) fn check_params_match(sig: GridSig, p: &FreqParams) -> Result<()> {
    p.validate()?;
    if sig != p.sig()? {
        return Err(Error::DimensionMismatch(format!("array in {sig}, parameters for [{}]^{}", p.q, p.n)));
    }
    Ok(())
}

/// True iff every k-face has exactly `lambda_i` cells holding symbol `i`.
pub fn is_frequency_cube(f: &CubeArray, p: &FreqParams) -> Result<bool> {
    check_params_match(f.sig(), p)?;
    f.check_range(0, p.m() as i32 - 1)?;
    let table = p.face_table()?;
    Ok(is_cube_in(&table, f, &p.lambdas))
}

pub(crate) fn is_cube_in(table: &FaceTable, f: &CubeArray, lambdas: &[u32]) -> bool {
    let mut hist = vec![0u32; lambdas.len()];
    table.faces().iter().all(|cells| {
        hist.iter_mut().for_each(|h| *h = 0);
        for &c in cells {
            hist[f.at(c as usize) as usize] += 1;
        }
        hist == lambdas
    })
}

/// Indicator arrays `g_i = [f = i]` for every symbol. Each `g_i` is a cube
/// with multiplicities `(q^k - lambda_i, lambda_i)` and `sum_i i g_i = f`.
pub fn indicator_decomposition(f: &CubeArray, p: &FreqParams) -> Result<Vec<CubeArray>> {
    if !is_frequency_cube(f, p)? {
        return Err(Error::InvalidParameter("array is not a frequency cube for these parameters".into()));
    }
    Ok((0..p.m() as i32)
        .map(|sym| CubeArray::from_fn(f.sig(), |x| (f.at(f.sig().index_of(x)) == sym) as i32))
        .collect())
}

/// `(q^k - lambda_i, lambda_i)`: parameters of the `i`th indicator.
pub fn indicator_params(p: &FreqParams, symbol: usize) -> Result<FreqParams> {
    let face = (p.q as u32).pow(p.k as u32);
    FreqParams::new(p.q, p.n, p.k, vec![face - p.lambdas[symbol], p.lambdas[symbol]])
}
