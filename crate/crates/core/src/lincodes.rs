//! Testing sets for linear and affine Boolean functions with few essential
//! variables, via parity-check matrices of binary codes.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::face::combinations;
use crate::grid::{binomial, GridSig, Point};
use crate::pointset::PointSet;

/// Binary matrix with at most 64 columns; bit `j` of a row is column `j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinMatrix {
    ncols: usize,
    rows: Vec<u64>,
}

fn point_mask(p: &Point) -> u64 {
    p.coords().iter().enumerate().fold(0u64, |acc, (j, &c)| acc | ((c as u64 & 1) << j))
}

fn mask_point(mask: u64, n: usize) -> Point {
    Point((0..n).map(|j| ((mask >> j) & 1) as u8).collect())
}

impl BinMatrix {
    pub fn new(ncols: usize, rows: Vec<u64>) -> Result<Self> {
        if ncols > 64 {
            return Err(Error::InvalidParameter(format!("{ncols} columns exceed 64")));
        }
        let extra = if ncols == 64 { 0 } else { !0u64 << ncols };
        if rows.iter().any(|r| r & extra != 0) {
            return Err(Error::InvalidParameter("row wider than the column count".into()));
        }
        Ok(BinMatrix { ncols, rows })
    }

    /// `H_X`: one row per point of `X`, in row-major order of the points.
    pub fn from_points(set: &PointSet) -> Result<Self> {
        let sig = set.sig();
        if sig.q() != 2 {
            return Err(Error::InvalidParameter("parity-check rows need q = 2".into()));
        }
        BinMatrix::new(sig.n(), set.points().map(|p| point_mask(&p)).collect())
    }

    pub fn to_points(&self) -> Result<PointSet> {
        let sig = GridSig::new(2, self.ncols)?;
        PointSet::new(sig, self.rows.iter().map(|&r| mask_point(r, self.ncols)))
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    /// Rank over GF(2).
    pub fn rank(&self) -> usize {
        self.independent_rows().0.rows.len()
    }

    /// Drops rows that are combinations of earlier rows. The kernel is
    /// unchanged. Returns the reduced matrix and the number of rows dropped.
    pub fn independent_rows(&self) -> (BinMatrix, usize) {
        // pivots[b] holds a reduced row whose highest set bit is b.
        let mut pivots = [0u64; 64];
        let mut kept = Vec::new();
        for &row in &self.rows {
            let mut r = row;
            while r != 0 {
                let top = 63 - r.leading_zeros() as usize;
                if pivots[top] == 0 {
                    pivots[top] = r;
                    kept.push(row);
                    break;
                }
                r ^= pivots[top];
            }
        }
        let dropped = self.rows.len() - kept.len();
        (BinMatrix { ncols: self.ncols, rows: kept }, dropped)
    }

    /// `H a` as a bit vector over the rows.
    pub fn syndrome(&self, a: u64) -> Vec<u8> {
        self.rows.iter().map(|&r| ((r & a).count_ones() & 1) as u8).collect()
    }

    /// All kernel vectors, by exhaustive scan of `2^ncols` candidates.
    pub fn kernel(&self) -> Result<Vec<u64>> {
        if self.ncols > 24 {
            return Err(Error::BudgetExceeded(format!("kernel scan over 2^{}", self.ncols)));
        }
        Ok((0..1u64 << self.ncols).filter(|&a| self.rows.iter().all(|&r| (r & a).count_ones() % 2 == 0)).collect())
    }

    /// Rows as strings of `0`/`1`, column 0 first.
    pub fn to_bit_strings(&self) -> Vec<String> {
        self.rows
            .iter()
            .map(|&r| (0..self.ncols).map(|j| if (r >> j) & 1 == 1 { '1' } else { '0' }).collect())
            .collect()
    }

    pub fn from_bit_strings<S: AsRef<str>>(rows: &[S]) -> Result<Self> {
        let ncols = rows.first().map_or(0, |r| r.as_ref().len());
        let parsed = rows
            .iter()
            .map(|r| {
                let r = r.as_ref();
                if r.len() != ncols {
                    return Err(Error::Parse(format!("ragged bit string {r:?}")));
                }
                r.chars().enumerate().try_fold(0u64, |acc, (j, ch)| match ch {
                    '0' => Ok(acc),
                    '1' => Ok(acc | 1 << j),
                    _ => Err(Error::Parse(format!("bad bit {ch:?}"))),
                })
            })
            .collect::<Result<Vec<u64>>>()?;
        BinMatrix::new(ncols, parsed)
    }
}

/// `l(x) = a.x + a0` over GF(2).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AffineFn {
    pub n: usize,
    pub a: u64,
    pub a0: u8,
}

impl AffineFn {
    pub fn essential_variables(&self) -> usize {
        self.a.count_ones() as usize
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.a0 == 0
    }

    pub fn eval(&self, x: &Point) -> u8 {
        (((point_mask(x) & self.a).count_ones() as u8) ^ self.a0) & 1
    }

    /// All affine functions with at most `max_vars` essential variables.
    pub fn all_with_at_most(n: usize, max_vars: usize) -> Vec<AffineFn> {
        (0..=max_vars.min(n))
            .flat_map(|w| combinations(n, w))
            .flat_map(|support| {
                let a = support.iter().fold(0u64, |acc, &j| acc | 1 << j);
                [0u8, 1].map(|a0| AffineFn { n, a, a0 })
            })
            .collect()
    }
}

fn boolean_grid(n: usize) -> Result<GridSig> {
    if n == 0 || n > 31 {
        return Err(Error::InvalidParameter(format!("binary length {n} outside 1..=31")));
    }
    GridSig::new(2, n)
}

fn ceil_log2(v: u128) -> u32 {
    if v <= 1 {
        0
    } else {
        128 - (v - 1).leading_zeros()
    }
}

/// `ceil(log2(n + 1))`: rows of the Hamming parity-check matrix of length `n`.
pub fn hamming_redundancy(n: usize) -> usize {
    ceil_log2(n as u128 + 1) as usize
}

/// Rows of the parity-check matrix whose column `j` (1-based) is the binary
/// expansion of `j`, most significant bit in the first row. With `affine`,
/// the all-zero point is added.
pub fn hamming_testing_set(n: usize, affine: bool) -> Result<PointSet> {
    let sig = boolean_grid(n)?;
    let r = hamming_redundancy(n);
    let rows = (0..r).map(|i| {
        let bit = r - 1 - i;
        Point((1..=n).map(|j| ((j >> bit) & 1) as u8).collect())
    });
    let zero = affine.then(|| Point(vec![0; n]));
    PointSet::new(sig, rows.chain(zero))
}

/// A nonzero function of the requested kind with at most `2k` essential
/// variables vanishing on all of `set`, if one exists. The search order is
/// by weight, then support, then constant term.
pub fn vanishing_function(set: &PointSet, k: usize, affine: bool) -> Result<Option<AffineFn>> {
    let sig = set.sig();
    if sig.q() != 2 {
        return Err(Error::InvalidParameter("affine functions need q = 2".into()));
    }
    let n = sig.n();
    let masks: Vec<u64> = set.points().map(|p| point_mask(&p)).collect();
    let candidates: Vec<AffineFn> =
        AffineFn::all_with_at_most(n, 2 * k).into_iter().filter(|f| !f.is_zero() && (affine || f.a0 == 0)).collect();
    Ok(candidates.into_par_iter().find_first(|f| masks.iter().all(|&x| ((x & f.a).count_ones() as u8 ^ f.a0) & 1 == 0)))
}

/// True iff no nonzero affine function with at most `2k` essential variables
/// vanishes on `set`; equivalently `set` is testing for affine functions
/// with at most `k` essential variables.
pub fn is_testing_for_affine(set: &PointSet, k: usize) -> Result<bool> {
    Ok(vanishing_function(set, k, true)?.is_none())
}

/// Linear counterpart of [`is_testing_for_affine`] (constant term zero).
pub fn is_testing_for_linear(set: &PointSet, k: usize) -> Result<bool> {
    Ok(vanishing_function(set, k, false)?.is_none())
}

/// Bounds on the minimum size of a testing set for linear functions with at
/// most `k` essential variables: the sphere-packing side gives `lower`, the
/// Gilbert-Varshamov side gives `upper`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeBounds {
    pub lower: usize,
    pub upper: usize,
}

impl CodeBounds {
    /// The affine class needs one more point on both sides.
    pub fn affine(self) -> CodeBounds {
        CodeBounds { lower: self.lower + 1, upper: self.upper + 1 }
    }
}

pub fn bounds_min_testing(n: usize, k: usize) -> Result<CodeBounds> {
    if k == 0 || 2 * k >= n {
        return Err(Error::InvalidParameter(format!("need 1 <= k and 2k < n, got n={n}, k={k}")));
    }
    let (n64, k64) = (n as u64, k as u64);
    let ball: u128 = (0..=k64).map(|i| binomial(n64, i)).sum();
    let gv: u128 = (0..2 * k64).map(|i| binomial(n64 - 1, i)).sum::<u128>() + 1;
    Ok(CodeBounds { lower: ceil_log2(ball) as usize, upper: ceil_log2(gv) as usize })
}

/// A power of two held by its exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pow2 {
    pub exponent: u32,
}

impl Pow2 {
    /// The value, when it fits in 64 bits.
    pub fn value(self) -> Option<u64> {
        1u64.checked_shl(self.exponent)
    }
}

/// Size of the largest linear single-error-correcting code of length `n`,
/// `2^(n - ceil(log2(n+1)))`.
pub fn b_n_3(n: usize) -> Result<Pow2> {
    if n == 0 {
        return Err(Error::InvalidParameter("code length must be positive".into()));
    }
    Ok(Pow2 { exponent: (n - hamming_redundancy(n)) as u32 })
}

/// Columns of length `r` chosen greedily (smallest admissible value first)
/// so that no `2k` or fewer of them sum to zero.
fn greedy_columns(n: usize, k: usize, r: usize) -> Option<Vec<u64>> {
    let space = 1usize << r;
    // reach[s][v]: v is a sum of exactly s chosen columns.
    let mut reach = vec![vec![false; space]; 2 * k];
    reach[0][0] = true;
    let mut columns = Vec::with_capacity(n);
    for _ in 0..n {
        let c = (1..space).find(|&v| reach.iter().all(|level| !level[v]))?;
        for s in (0..2 * k - 1).rev() {
            let (lo, hi) = reach.split_at_mut(s + 1);
            for v in 0..space {
                if lo[s][v] {
                    hi[0][v ^ c] = true;
                }
            }
        }
        columns.push(c as u64);
    }
    Some(columns)
}

/// Lexicode-style testing set for linear functions with at most `k`
/// essential variables. Its size never exceeds the Gilbert-Varshamov bound.
pub fn greedy_code_testing_set(n: usize, k: usize) -> Result<PointSet> {
    let bounds = bounds_min_testing(n, k)?;
    if bounds.upper > 24 {
        return Err(Error::BudgetExceeded(format!("greedy search over 2^{} columns", bounds.upper)));
    }
    boolean_grid(n)?;
    let (r, columns) = (bounds.lower..=bounds.upper)
        .find_map(|r| greedy_columns(n, k, r).map(|c| (r, c)))
        .expect("the Gilbert-Varshamov count guarantees success at the upper bound");
    let rows: Vec<u64> = (0..r)
        .map(|i| {
            let bit = r - 1 - i;
            columns.iter().enumerate().fold(0u64, |acc, (j, &c)| acc | (((c >> bit) & 1) << j))
        })
        .collect();
    let (matrix, _) = BinMatrix::new(n, rows)?.independent_rows();
    let set = matrix.to_points()?;
    assert!(set.len() <= bounds.upper, "greedy code exceeded the GV bound");
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(n: usize, list: &[&[u8]]) -> PointSet {
        PointSet::new(GridSig::new(2, n).unwrap(), list.iter().map(|p| Point(p.to_vec()))).unwrap()
    }

    /// Independent check: every nonzero affine function with at most two
    /// essential variables is nonzero somewhere on the set.
    fn separates_affine_leq2(set: &PointSet) -> bool {
        let n = set.sig().n();
        AffineFn::all_with_at_most(n, 2)
            .into_iter()
            .filter(|f| !f.is_zero())
            .all(|f| set.points().any(|x| f.eval(&x) == 1))
    }

    #[test]
    fn hamming_n3() {
        let t = hamming_testing_set(3, true).unwrap();
        assert_eq!(t, pts(3, &[&[0, 1, 1], &[1, 0, 1], &[0, 0, 0]]));
        assert!(separates_affine_leq2(&t));
        assert!(is_testing_for_affine(&t, 1).unwrap());
    }

    #[test]
    fn hamming_n7_and_n1() {
        let t = hamming_testing_set(7, true).unwrap();
        assert_eq!(t.len(), 4);
        assert!(is_testing_for_affine(&t, 1).unwrap());
        assert!(separates_affine_leq2(&t));
        assert_eq!(hamming_testing_set(1, true).unwrap(), pts(1, &[&[1], &[0]]));
    }

    #[test]
    fn affine_testing_edge_cases() {
        let sig = GridSig::new(2, 4).unwrap();
        assert!(!is_testing_for_affine(&PointSet::empty(sig), 1).unwrap());
        for n in 2..=6 {
            let full = PointSet::full(GridSig::new(2, n).unwrap());
            for k in 1..=n / 2 {
                assert!(is_testing_for_affine(&full, k).unwrap());
            }
        }
    }

    #[test]
    fn hamming_kernel_distance() {
        for n in 1..=12 {
            let h = BinMatrix::from_points(&hamming_testing_set(n, false).unwrap()).unwrap();
            let kernel = h.kernel().unwrap();
            assert!(kernel.iter().filter(|&&a| a != 0).all(|a| a.count_ones() >= 3), "n={n}");
            assert_eq!(kernel.len() as u64, b_n_3(n).unwrap().value().unwrap(), "n={n}");
        }
    }

    #[test]
    fn hamming_optimal_at_perfect_lengths() {
        for r in 2..=4 {
            let n = (1 << r) - 1;
            let t = hamming_testing_set(n, true).unwrap();
            assert!(is_testing_for_affine(&t, 1).unwrap());
            for pos in 0..t.len() {
                assert!(!is_testing_for_affine(&t.without_nth(pos), 1).unwrap());
            }
        }
    }

    #[test]
    fn bounds_examples() {
        assert_eq!(bounds_min_testing(7, 1).unwrap(), CodeBounds { lower: 3, upper: 3 });
        assert_eq!(bounds_min_testing(15, 1).unwrap(), CodeBounds { lower: 4, upper: 4 });
        assert_eq!(bounds_min_testing(7, 1).unwrap().affine(), CodeBounds { lower: 4, upper: 4 });
        assert!(bounds_min_testing(4, 2).is_err());
        assert!(bounds_min_testing(4, 0).is_err());
    }

    #[test]
    fn bounds_asymptotics() {
        // k log2 n <= |X| <= (2k-1) log2 n, up to lower-order terms:
        // the upper side sits log2((2k-1)!) below its leading term.
        let (n, k) = (1024usize, 2usize);
        let b = bounds_min_testing(n, k).unwrap();
        let log_n = (n as f64).log2();
        assert!((b.lower as f64 - k as f64 * log_n).abs() <= 1.0);
        let lead = (2 * k - 1) as f64 * log_n;
        assert!(b.upper as f64 <= lead + 1.0);
        assert!(b.upper as f64 >= lead - 6f64.log2() - 1.0);
    }

    #[test]
    fn b_n_3_values() {
        assert_eq!(b_n_3(7).unwrap().value(), Some(16));
        assert_eq!(b_n_3(3).unwrap().value(), Some(2));
        assert_eq!(b_n_3(4).unwrap().value(), Some(2));
        let big = b_n_3(100).unwrap();
        assert_eq!(big.exponent, 93);
        assert_eq!(big.value(), None);
    }

    #[test]
    fn linear_minimum_matches_b_n_3() {
        // Literal brute force over subsets for n <= 5.
        for n in 2..=5 {
            let sig = GridSig::new(2, n).unwrap();
            let cells: Vec<usize> = (0..sig.size()).collect();
            let min = (0..=n)
                .find(|&size| {
                    combinations(cells.len(), size)
                        .into_iter()
                        .any(|c| is_testing_for_linear(&PointSet::from_indices(sig, c).unwrap(), 1).unwrap())
                })
                .unwrap();
            assert_eq!(min as u32, n as u32 - b_n_3(n).unwrap().exponent, "n={n}");
        }
        // Up to n = 12: the n+1 functions 0, x_1..x_n need distinct restrictions,
        // so 2^|X| >= n+1; the Hamming rows meet that count.
        for n in 2..=12 {
            let counting_lower = (0..).find(|&s| 1usize << s > n).unwrap();
            let t = hamming_testing_set(n, false).unwrap();
            assert!(is_testing_for_linear(&t, 1).unwrap());
            assert_eq!(t.len(), counting_lower);
            assert_eq!(t.len() as u32, n as u32 - b_n_3(n).unwrap().exponent);
        }
    }

    #[test]
    fn greedy_sets() {
        let g = greedy_code_testing_set(7, 1).unwrap();
        assert_eq!(g.len(), hamming_testing_set(7, false).unwrap().len());
        assert!(is_testing_for_linear(&g, 1).unwrap());
        let g = greedy_code_testing_set(3, 1).unwrap();
        assert_eq!(g.len(), 2);
        let g = greedy_code_testing_set(10, 2).unwrap();
        assert!(g.len() <= bounds_min_testing(10, 2).unwrap().upper);
        assert!(is_testing_for_linear(&g, 2).unwrap());
        for n in 3..=12 {
            for k in 1..=(n - 1) / 2 {
                let g = greedy_code_testing_set(n, k).unwrap();
                assert!(is_testing_for_linear(&g, k).unwrap());
                let with_zero = g.union(&PointSet::new(g.sig(), [Point(vec![0; n])]).unwrap()).unwrap();
                assert!(is_testing_for_affine(&with_zero, k).unwrap());
            }
        }
    }

    #[test]
    fn greedy_n3_is_brute_force_minimum() {
        let sig = GridSig::new(2, 3).unwrap();
        let min = (0..=8)
            .find(|&size| {
                combinations(8, size)
                    .into_iter()
                    .any(|c| is_testing_for_linear(&PointSet::from_indices(sig, c).unwrap(), 1).unwrap())
            })
            .unwrap();
        assert_eq!(greedy_code_testing_set(3, 1).unwrap().len(), min);
    }

    #[test]
    fn matrix_serialisation_and_rank() {
        let m = BinMatrix::from_bit_strings(&["0110", "1010", "1100"]).unwrap();
        assert_eq!(m.to_bit_strings(), vec!["0110", "1010", "1100"]);
        assert_eq!(m.rank(), 2);
        let (reduced, dropped) = m.independent_rows();
        assert_eq!(dropped, 1);
        assert_eq!(reduced.kernel().unwrap(), m.kernel().unwrap());
        assert!(BinMatrix::from_bit_strings(&["01", "1"]).is_err());
        assert!(BinMatrix::from_bit_strings(&["0x"]).is_err());
    }
}
