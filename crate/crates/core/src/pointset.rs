use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{GridSig, Point};

/// A set of points of `[q]^n`, kept sorted by row-major index.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointSet {
    sig: GridSig,
    indices: Vec<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PointSetDoc {
    pub q: usize,
    pub n: usize,
    pub points: Vec<Vec<u8>>,
}

impl PointSet {
    pub fn empty(sig: GridSig) -> Self {
        PointSet { sig, indices: Vec::new() }
    }

    /// Every cell of the grid.
    pub fn full(sig: GridSig) -> Self {
        PointSet { sig, indices: (0..sig.size()).collect() }
    }

    /// Validates, sorts and deduplicates.
    pub fn new(sig: GridSig, points: impl IntoIterator<Item = Point>) -> Result<Self> {
        let mut indices = Vec::new();
        for p in points {
            sig.check_point(&p)?;
            indices.push(sig.index_of(p.coords()));
        }
        Ok(Self::from_unsorted(sig, indices))
    }

    pub fn from_indices(sig: GridSig, indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let indices: Vec<usize> = indices.into_iter().collect();
        if let Some(&bad) = indices.iter().find(|&&i| i >= sig.size()) {
            return Err(Error::InvalidParameter(format!("cell index {bad} outside {sig}")));
        }
        Ok(Self::from_unsorted(sig, indices))
    }

    /// Points of `sig` satisfying `keep`.
    pub fn filter(sig: GridSig, mut keep: impl FnMut(&[u8]) -> bool) -> Self {
        let mut coords = vec![0u8; sig.n()];
        let indices = (0..sig.size())
            .filter(|&i| {
                sig.decode_into(i, &mut coords);
                keep(&coords)
            })
            .collect();
        PointSet { sig, indices }
    }

    fn from_unsorted(sig: GridSig, mut indices: Vec<usize>) -> Self {
        indices.sort_unstable();
        indices.dedup();
        PointSet { sig, indices }
    }

    pub(crate) fn from_sorted_indices_unchecked(sig: GridSig, indices: Vec<usize>) -> Self {
        debug_assert!(indices.windows(2).all(|w| w[0] < w[1]));
        PointSet { sig, indices }
    }

    pub fn sig(&self) -> GridSig {
        self.sig
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn points(&self) -> impl Iterator<Item = Point> + '_ {
        self.indices.iter().map(move |&i| self.sig.point_at(i))
    }

    pub fn contains_index(&self, index: usize) -> bool {
        self.indices.binary_search(&index).is_ok()
    }

    pub fn contains(&self, point: &Point) -> bool {
        self.sig.check_point(point).is_ok() && self.contains_index(self.sig.index_of(point.coords()))
    }

    /// Membership as a dense boolean mask.
    pub fn mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.sig.size()];
        for &i in &self.indices {
            mask[i] = true;
        }
        mask
    }

    fn same_grid(&self, other: &PointSet) -> Result<()> {
        if self.sig != other.sig {
            return Err(Error::DimensionMismatch(format!("{} vs {}", self.sig, other.sig)));
        }
        Ok(())
    }

    pub fn union(&self, other: &PointSet) -> Result<PointSet> {
        self.same_grid(other)?;
        let mut all = self.indices.clone();
        all.extend_from_slice(&other.indices);
        Ok(Self::from_unsorted(self.sig, all))
    }

    pub fn difference(&self, other: &PointSet) -> Result<PointSet> {
        self.same_grid(other)?;
        let indices = self.indices.iter().copied().filter(|&i| !other.contains_index(i)).collect();
        Ok(PointSet { sig: self.sig, indices })
    }

    pub fn is_subset(&self, other: &PointSet) -> bool {
        self.sig == other.sig && self.indices.iter().all(|&i| other.contains_index(i))
    }

    /// Copy without the point at position `pos` of the sorted order.
    pub fn without_nth(&self, pos: usize) -> PointSet {
        let mut indices = self.indices.clone();
        indices.remove(pos);
        PointSet { sig: self.sig, indices }
    }

    pub fn to_doc(&self) -> PointSetDoc {
        PointSetDoc { q: self.sig.q(), n: self.sig.n(), points: self.points().map(|p| p.0).collect() }
    }

    pub fn from_doc(doc: &PointSetDoc) -> Result<Self> {
        let sig = GridSig::new(doc.q, doc.n)?;
        PointSet::new(sig, doc.points.iter().cloned().map(Point))
    }
}

impl Serialize for PointSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_doc().serialize(s)
    }
}

impl<'de> Deserialize<'de> for PointSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = PointSetDoc::deserialize(d)?;
        PointSet::from_doc(&doc).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, p) in self.points().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "}}")
    }
}
