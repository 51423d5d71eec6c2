use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::array::CubeArray;
use crate::error::{Error, Result};
use crate::face::FaceTable;
use crate::grid::{sigma, weight, GridSig};

/// Largest grid for which the face-sum system is solved.
pub const MAX_RANK_CELLS: usize = 4096;

/// Rank over the rationals by exact Gaussian elimination.
pub fn rational_rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<BigRational>> =
        rows.iter().map(|r| r.iter().map(|&v| BigRational::from_integer(BigInt::from(v))).collect()).collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        let inv = BigRational::one() / &m[rank][col];
        for c in col..cols {
            m[rank][c] = &m[rank][c] * &inv;
        }
        let (head, tail) = m.split_at_mut(rank + 1);
        let prow = &head[rank];
        for row in tail.iter_mut() {
            if row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for c in col..cols {
                if !prow[c].is_zero() {
                    row[c] = &row[c] - &factor * &prow[c];
                }
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

fn check_size(sig: GridSig) -> Result<()> {
    if sig.size() > MAX_RANK_CELLS {
        return Err(Error::BudgetExceeded(format!("{} cells exceeds the rank limit {MAX_RANK_CELLS}", sig.size())));
    }
    Ok(())
}

/// Dimension of the space of arrays with zero sum on every k-face, computed
/// as cells minus the rank of the face-sum constraint matrix.
pub fn face_sum_nullity(q: usize, n: usize, k: usize) -> Result<usize> {
    let sig = GridSig::new(q, n)?;
    check_size(sig)?;
    let table = FaceTable::new(sig, k)?;
    let rows: Vec<Vec<i64>> = table
        .faces()
        .iter()
        .map(|cells| {
            let mut row = vec![0i64; sig.size()];
            cells.iter().for_each(|&c| row[c as usize] = 1);
            row
        })
        .collect();
    Ok(sig.size() - rational_rank(&rows))
}

/// `sigma(q, n, n - k)`, the number of basis arrays `f_a`.
pub fn lk_dimension(q: usize, n: usize, k: usize) -> Result<usize> {
    let sig = GridSig::new(q, n)?;
    check_size(sig)?;
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!("face dimension {k} outside 1..={n}")));
    }
    Ok(sigma(q, n, (n - k) as i64)? as usize)
}

/// Arrays `f_a` for `wt(a) > n - k`: `(-1)^wt(x)` on the box
/// `{x : x_i in {0, a_i}}` and zero elsewhere. Each one is checked to sum
/// to zero on every k-face.
pub fn lk_basis(q: usize, n: usize, k: usize) -> Result<Vec<CubeArray>> {
    lk_dimension(q, n, k)?;
    let sig = GridSig::new(q, n)?;
    let table = FaceTable::new(sig, k)?;
    let basis: Vec<CubeArray> = sig
        .points()
        .filter(|a| a.weight() > n - k)
        .map(|a| {
            CubeArray::from_fn(sig, |x| {
                let inside = x.iter().zip(a.coords()).all(|(&xi, &ai)| xi == 0 || xi == ai);
                match (inside, weight(x) % 2) {
                    (false, _) => 0,
                    (true, 0) => 1,
                    (true, _) => -1,
                }
            })
        })
        .collect();
    for f in &basis {
        if let Some(face) =
            table.faces().iter().position(|cells| cells.iter().map(|&c| f.at(c as usize)).sum::<i32>() != 0)
        {
            return Err(Error::Inconsistent(format!("basis array has nonzero sum on face {face}")));
        }
    }
    Ok(basis)
}
