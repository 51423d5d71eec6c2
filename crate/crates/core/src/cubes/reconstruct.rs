use super::{check_params_match, is_cube_in, FreqParams, PartialCube};
use crate::array::CubeArray;
use crate::error::{Error, Result};
use crate::grid::weight;
use crate::pointset::PointSet;

/// Recovers a cube of `p` from its values on the points of weight greater
/// than `n - k`. Remaining points are filled in order of decreasing weight:
/// the `k`-face freeing the first `k` zero coordinates of `x` has every
/// other cell at larger weight, so the missing symbol is read off from the
/// face histogram.
pub fn reconstruct_baseline(partial: &PartialCube, p: &FreqParams) -> Result<CubeArray> {
    let sig = partial.sig();
    check_params_match(sig, p)?;
    if partial.m() != p.m() {
        return Err(Error::InvalidParameter(format!("partial data has {} symbols, parameters {}", partial.m(), p.m())));
    }
    let (n, k, q) = (p.n, p.k, p.q);
    let known = PointSet::filter(sig, |x| weight(x) > n - k);
    if partial.domain() != known {
        return Err(Error::InvalidParameter(format!(
            "partial data must assign exactly the {} points of weight > {}",
            known.len(),
            n - k
        )));
    }

    let mut values: Vec<i32> = vec![-1; sig.size()];
    for (i, v) in partial.assignments() {
        values[i] = v as i32;
    }
    let mut order: Vec<usize> = (0..sig.size()).filter(|&i| values[i] < 0).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(sig.weight_of_index(i)));

    let mut x = vec![0u8; n];
    let mut hist = vec![0i64; p.m()];
    for &index in &order {
        sig.decode_into(index, &mut x);
        let free: Vec<usize> = (0..n).filter(|&i| x[i] == 0).take(k).collect();
        debug_assert_eq!(free.len(), k);
        hist.iter_mut().zip(&p.lambdas).for_each(|(h, &l)| *h = l as i64);
        for offset in 1..q.pow(k as u32) {
            let mut cell = index;
            let mut rest = offset;
            for &axis in &free {
                cell += (rest % q) * sig.stride(axis);
                rest /= q;
            }
            let v = values[cell];
            if v < 0 {
                return Err(Error::Inconsistent(format!("cell {cell} needed before it was determined")));
            }
            hist[v as usize] -= 1;
        }
        if hist.iter().any(|&g| g != 0 && g != 1) || hist.iter().filter(|&&g| g == 1).count() != 1 {
            return Err(Error::Inconsistent(format!(
                "no symbol fits at {}: residual counts {hist:?}",
                sig.point_at(index)
            )));
        }
        values[index] = hist.iter().position(|&g| g == 1).expect("one residual") as i32;
    }

    let f = CubeArray::new(sig, values)?;
    if !is_cube_in(&p.face_table()?, &f, &p.lambdas) {
        return Err(Error::Inconsistent("completion violates a face count".into()));
    }
    Ok(f)
}
