//! Dense arrays over `[q]^n`: frequency cubes, bitrades, Boolean functions.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{GridSig, Point};
use crate::pointset::PointSet;

/// A total function `[q]^n -> Z` stored in row-major order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CubeArray {
    sig: GridSig,
    values: Vec<i32>,
}

/// JSON form shared by cubes (`m`) and bitrades (`k`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CubeDoc {
    pub q: usize,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    pub values: Vec<i32>,
}

impl CubeArray {
    pub fn new(sig: GridSig, values: Vec<i32>) -> Result<Self> {
        if values.len() != sig.size() {
            return Err(Error::DimensionMismatch(format!("{} values for {} cells", values.len(), sig.size())));
        }
        Ok(CubeArray { sig, values })
    }

    pub fn constant(sig: GridSig, value: i32) -> Self {
        CubeArray { sig, values: vec![value; sig.size()] }
    }

    pub fn zeros(sig: GridSig) -> Self {
        Self::constant(sig, 0)
    }

    /// Tabulates `f` over all points in row-major order.
    pub fn from_fn(sig: GridSig, mut f: impl FnMut(&[u8]) -> i32) -> Self {
        let mut coords = vec![0u8; sig.n()];
        let values = (0..sig.size())
            .map(|i| {
                sig.decode_into(i, &mut coords);
                f(&coords)
            })
            .collect();
        CubeArray { sig, values }
    }

    pub fn sig(&self) -> GridSig {
        self.sig
    }

    pub fn values(&self) -> &[i32] {
        &self.values
    }

    pub fn into_values(self) -> Vec<i32> {
        self.values
    }

    #[inline]
    pub fn at(&self, index: usize) -> i32 {
        self.values[index]
    }

    pub fn get(&self, point: &Point) -> i32 {
        self.values[self.sig.index_of(point.coords())]
    }

    pub fn set(&mut self, index: usize, value: i32) {
        self.values[index] = value;
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    /// Cells with a nonzero value.
    pub fn support(&self) -> PointSet {
        let idx = self.values.iter().enumerate().filter_map(|(i, &v)| (v != 0).then_some(i)).collect();
        PointSet::from_sorted_indices_unchecked(self.sig, idx)
    }

    pub fn negated(&self) -> Self {
        CubeArray { sig: self.sig, values: self.values.iter().map(|v| -v).collect() }
    }

    /// Pointwise `|f|`.
    pub fn abs(&self) -> Self {
        CubeArray { sig: self.sig, values: self.values.iter().map(|v| v.abs()).collect() }
    }

    /// Checks every value lies in `lo..=hi`.
    pub fn check_range(&self, lo: i32, hi: i32) -> Result<()> {
        match self.values.iter().position(|&v| v < lo || v > hi) {
            Some(index) => Err(Error::ValueOutOfRange { index, value: self.values[index] }),
            None => Ok(()),
        }
    }

    /// The retract fixing coordinate `axis` (zero-based) to `symbol`; the
    /// result lives in dimension `n - 1`.
    pub fn retract(&self, axis: usize, symbol: u8) -> Result<CubeArray> {
        let (q, n) = (self.sig.q(), self.sig.n());
        if axis >= n {
            return Err(Error::InvalidParameter(format!("axis {axis} outside 0..{n}")));
        }
        if symbol as usize >= q {
            return Err(Error::InvalidParameter(format!("symbol {symbol} outside [{q}]")));
        }
        if n == 1 {
            return Err(Error::InvalidParameter("cannot retract a one-dimensional array".into()));
        }
        let sub = GridSig::new(q, n - 1)?;
        let mut full = vec![0u8; n];
        let values = (0..sub.size())
            .map(|i| {
                let mut rest = i;
                for pos in (0..n).rev() {
                    if pos == axis {
                        full[pos] = symbol;
                    } else {
                        full[pos] = (rest % q) as u8;
                        rest /= q;
                    }
                }
                self.values[self.sig.index_of(&full)]
            })
            .collect();
        Ok(CubeArray { sig: sub, values })
    }

    pub fn to_doc(&self, m: Option<usize>, k: Option<usize>) -> CubeDoc {
        CubeDoc { q: self.sig.q(), n: self.sig.n(), m, k, values: self.values.clone() }
    }

    pub fn from_doc(doc: &CubeDoc) -> Result<Self> {
        let sig = GridSig::new(doc.q, doc.n)?;
        let array = CubeArray::new(sig, doc.values.clone())?;
        if let Some(m) = doc.m {
            array.check_range(0, m as i32 - 1)?;
        }
        Ok(array)
    }

    /// Layers of `q x q` tables, first coordinate selecting the layer.
    /// Only defined for `n <= 3`.
    pub fn render_text(&self) -> Result<String> {
        let (q, n) = (self.sig.q(), self.sig.n());
        if n > 3 {
            return Err(Error::InvalidParameter("text rendering needs n <= 3".into()));
        }
        let width = self.values.iter().map(|v| v.to_string().len()).max().unwrap_or(1);
        let (layers, rows, cols) = match n {
            1 => (1, 1, q),
            2 => (1, q, q),
            _ => (q, q, q),
        };
        let mut out = String::new();
        for layer in 0..layers {
            if n == 3 {
                let _ = writeln!(out, "layer {layer}:");
            }
            for r in 0..rows {
                let line: Vec<String> = (0..cols)
                    .map(|c| {
                        let v = self.values[(layer * rows + r) * cols + c];
                        format!("{v:>width$}")
                    })
                    .collect();
                let _ = writeln!(out, "{}", line.join(" "));
            }
            if layer + 1 < layers {
                out.push('\n');
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn retract_of_constant_is_constant() {
        let sig = GridSig::new(3, 3).unwrap();
        let f = CubeArray::constant(sig, 2);
        let r = f.retract(1, 0).unwrap();
        assert_eq!(r.sig(), GridSig::new(3, 2).unwrap());
        assert!(r.values().iter().all(|&v| v == 2));
    }

    #[test]
    fn retract_of_sum() {
        let sig = GridSig::new(3, 2).unwrap();
        let f = CubeArray::from_fn(sig, |x| (x[0] as i32 + x[1] as i32) % 3);
        let g = f.retract(0, 1).unwrap();
        assert_eq!(g.values(), &[1, 2, 0]);
    }

    #[test]
    fn retract_errors() {
        let sig = GridSig::new(3, 2).unwrap();
        let f = CubeArray::zeros(sig);
        assert!(f.retract(2, 0).is_err());
        assert!(f.retract(0, 3).is_err());
        assert!(CubeArray::zeros(GridSig::new(3, 1).unwrap()).retract(0, 0).is_err());
    }

    #[test]
    fn render_layers() {
        let sig = GridSig::new(2, 3).unwrap();
        let f = CubeArray::from_fn(sig, |x| x[0] as i32);
        let text = f.render_text().unwrap();
        assert_eq!(text, "layer 0:\n0 0\n0 0\n\nlayer 1:\n1 1\n1 1\n");
    }

    proptest! {
        // Retracting axis i then axis j (shifted past i) equals the other order.
        #[test]
        fn retracts_commute(values in proptest::collection::vec(-1i32..=1, 81),
                            i in 0usize..4, j in 0usize..3, c in 0u8..3, d in 0u8..3) {
            let sig = GridSig::new(3, 4).unwrap();
            let f = CubeArray::new(sig, values).unwrap();
            let a = f.retract(i, c).unwrap().retract(j, d).unwrap();
            // Position j in the retracted array maps to j or j+1 originally.
            let orig_j = if j >= i { j + 1 } else { j };
            let (first, second, s1, s2) = if orig_j > i {
                (orig_j, i, d, c)
            } else {
                (orig_j, i - 1, d, c)
            };
            let b = f.retract(first, s1).unwrap().retract(second, s2).unwrap();
            prop_assert_eq!(a, b);
        }
    }
}
