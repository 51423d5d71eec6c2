//! k-faces of `[q]^n` and a precomputed cell/face incidence table.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{binomial, GridSig, Point};

/// A k-face: every point that agrees with `fixed` on its `Some` positions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Face {
    fixed: Vec<Option<u8>>,
}

impl Face {
    /// `fixed[i] = None` marks position `i` as free.
    pub fn new(fixed: Vec<Option<u8>>) -> Self {
        Face { fixed }
    }

    pub fn fixed(&self) -> &[Option<u8>] {
        &self.fixed
    }

    /// Free positions in increasing order.
    pub fn free(&self) -> Vec<usize> {
        self.fixed.iter().enumerate().filter_map(|(i, v)| v.is_none().then_some(i)).collect()
    }

    pub fn dimension(&self) -> usize {
        self.fixed.iter().filter(|v| v.is_none()).count()
    }

    pub fn contains(&self, point: &Point) -> bool {
        self.fixed.iter().zip(point.coords()).all(|(f, &c)| f.map_or(true, |v| v == c))
    }

    /// Row-major indices of the `q^k` cells of the face, ascending.
    pub fn cell_indices(&self, sig: &GridSig) -> Vec<usize> {
        let base: usize = self.fixed.iter().enumerate().map(|(i, v)| v.map_or(0, |c| c as usize * sig.stride(i))).sum();
        let strides: Vec<usize> = self.free().into_iter().map(|i| sig.stride(i)).collect();
        let q = sig.q();
        let mut cells = Vec::with_capacity(q.pow(strides.len() as u32));
        let mut digits = vec![0usize; strides.len()];
        loop {
            cells.push(base + digits.iter().zip(&strides).map(|(d, s)| d * s).sum::<usize>());
            // Odometer with the last free position fastest.
            let mut pos = digits.len();
            loop {
                if pos == 0 {
                    cells.sort_unstable();
                    return cells;
                }
                pos -= 1;
                digits[pos] += 1;
                if digits[pos] < q {
                    break;
                }
                digits[pos] = 0;
            }
        }
    }

    pub fn points(&self, sig: &GridSig) -> Vec<Point> {
        self.cell_indices(sig).into_iter().map(|i| sig.point_at(i)).collect()
    }
}

/// k-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    }
    out
}

fn check_face_dim(sig: &GridSig, k: usize) -> Result<()> {
    if k == 0 || k > sig.n() {
        return Err(Error::InvalidParameter(format!("face dimension {k} outside 1..={}", sig.n())));
    }
    Ok(())
}

/// All `C(n,k) q^(n-k)` k-faces: free-position sets in lexicographic order,
/// then fixed values in row-major order.
pub fn enumerate_faces(sig: GridSig, k: usize) -> Result<impl Iterator<Item = Face>> {
    check_face_dim(&sig, k)?;
    let n = sig.n();
    let q = sig.q();
    let fixed_count = q.pow((n - k) as u32);
    Ok(combinations(n, k).into_iter().flat_map(move |free| {
        let fixed_positions: Vec<usize> = (0..n).filter(|i| !free.contains(i)).collect();
        (0..fixed_count).map(move |mut code| {
            let mut fixed = vec![None; n];
            for &pos in fixed_positions.iter().rev() {
                fixed[pos] = Some((code % q) as u8);
                code /= q;
            }
            Face { fixed }
        })
    }))
}

/// Number of k-faces, `C(n,k) q^(n-k)`.
pub fn face_count(sig: &GridSig, k: usize) -> u128 {
    binomial(sig.n() as u64, k as u64) * (sig.q() as u128).pow((sig.n() - k) as u32)
}

/// Incidence between cells and k-faces, built once per `(q, n, k)`.
#[derive(Debug, Clone)]
pub struct FaceTable {
    sig: GridSig,
    k: usize,
    faces: Vec<Vec<u32>>,
    cell_faces: Vec<Vec<u32>>,
}

impl FaceTable {
    pub fn new(sig: GridSig, k: usize) -> Result<Self> {
        check_face_dim(&sig, k)?;
        let mut cell_faces = vec![Vec::new(); sig.size()];
        let faces: Vec<Vec<u32>> = enumerate_faces(sig, k)?
            .enumerate()
            .map(|(fid, face)| {
                let cells: Vec<u32> = face.cell_indices(&sig).into_iter().map(|c| c as u32).collect();
                for &c in &cells {
                    cell_faces[c as usize].push(fid as u32);
                }
                cells
            })
            .collect();
        Ok(FaceTable { sig, k, faces, cell_faces })
    }

    pub fn sig(&self) -> GridSig {
        self.sig
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn faces(&self) -> &[Vec<u32>] {
        &self.faces
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    /// Faces through the cell at `index`.
    pub fn faces_of(&self, index: usize) -> &[u32] {
        &self.cell_faces[index]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn face_counts() {
        let sig = GridSig::new(3, 2).unwrap();
        assert_eq!(enumerate_faces(sig, 1).unwrap().count(), 6);
        let sig = GridSig::new(2, 3).unwrap();
        assert_eq!(enumerate_faces(sig, 2).unwrap().count(), 6);
        let sig = GridSig::new(3, 3).unwrap();
        let whole: Vec<Face> = enumerate_faces(sig, 3).unwrap().collect();
        assert_eq!(whole.len(), 1);
        assert_eq!(whole[0].cell_indices(&sig), (0..27).collect::<Vec<_>>());
    }

    #[test]
    fn faces_are_distinct_with_q_pow_k_points() {
        for (q, n) in [(2, 4), (3, 3), (4, 2)] {
            let sig = GridSig::new(q, n).unwrap();
            for k in 1..=n {
                let faces: Vec<Face> = enumerate_faces(sig, k).unwrap().collect();
                assert_eq!(faces.len() as u128, face_count(&sig, k));
                let mut seen = HashSet::new();
                for f in &faces {
                    assert_eq!(f.dimension(), k);
                    let cells = f.cell_indices(&sig);
                    let uniq: HashSet<_> = cells.iter().collect();
                    assert_eq!(uniq.len(), q.pow(k as u32));
                    for p in f.points(&sig) {
                        assert!(f.contains(&p));
                    }
                    assert!(seen.insert(cells));
                }
            }
        }
    }

    #[test]
    fn table_incidence() {
        let sig = GridSig::new(3, 3).unwrap();
        let table = FaceTable::new(sig, 2).unwrap();
        assert_eq!(table.len(), 9);
        for c in 0..27 {
            assert_eq!(table.faces_of(c).len(), 3);
        }
        assert!(FaceTable::new(sig, 0).is_err());
        assert!(FaceTable::new(sig, 4).is_err());
    }
}
