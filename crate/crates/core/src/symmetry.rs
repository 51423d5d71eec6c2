//! The group `Aut([q]^n)`: coordinate permutations combined with independent
//! alphabet permutations per coordinate, and brute-force canonical forms.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{GridSig, Point};
use crate::pointset::PointSet;

/// Largest group `canonical_form` is willing to enumerate.
pub const MAX_GROUP_ORDER: u128 = 10_000_000;

/// One element of `Aut([q]^n)`. Acting on `x`, coordinate `i` is first
/// relabelled by `alpha_perms[i]` and then moved to position `coord_perm[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Symmetry {
    coord_perm: Vec<usize>,
    alpha_perms: Vec<Vec<u8>>,
}

fn is_permutation<T: Copy + Into<usize>>(p: &[T]) -> bool {
    let mut seen = vec![false; p.len()];
    p.iter().all(|&v| {
        let v: usize = v.into();
        v < seen.len() && !std::mem::replace(&mut seen[v], true)
    })
}

impl Symmetry {
    pub fn new(coord_perm: Vec<usize>, alpha_perms: Vec<Vec<u8>>) -> Result<Self> {
        let n = coord_perm.len();
        if !is_permutation(&coord_perm) {
            return Err(Error::InvalidParameter("coordinate map is not a bijection".into()));
        }
        if alpha_perms.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "{} alphabet permutations for {n} coordinates",
                alpha_perms.len()
            )));
        }
        let q = alpha_perms.first().map_or(0, Vec::len);
        if alpha_perms.iter().any(|p| p.len() != q || !is_permutation(p)) {
            return Err(Error::InvalidParameter("alphabet map is not a bijection".into()));
        }
        Ok(Symmetry { coord_perm, alpha_perms })
    }

    pub fn identity(sig: GridSig) -> Self {
        Symmetry { coord_perm: (0..sig.n()).collect(), alpha_perms: vec![(0..sig.q() as u8).collect(); sig.n()] }
    }

    /// Exchanges coordinates `a` and `b`.
    pub fn swap_coords(sig: GridSig, a: usize, b: usize) -> Self {
        let mut s = Self::identity(sig);
        s.coord_perm.swap(a, b);
        s
    }

    /// Relabels the symbols of coordinate `axis` by `perm`.
    pub fn relabel(sig: GridSig, axis: usize, perm: Vec<u8>) -> Result<Self> {
        let mut alpha = vec![(0..sig.q() as u8).collect::<Vec<u8>>(); sig.n()];
        alpha[axis] = perm;
        Symmetry::new((0..sig.n()).collect(), alpha)
    }

    pub fn random<R: Rng + ?Sized>(sig: GridSig, rng: &mut R) -> Self {
        let mut coord_perm: Vec<usize> = (0..sig.n()).collect();
        coord_perm.shuffle(rng);
        let alpha_perms = (0..sig.n())
            .map(|_| {
                let mut p: Vec<u8> = (0..sig.q() as u8).collect();
                p.shuffle(rng);
                p
            })
            .collect();
        Symmetry { coord_perm, alpha_perms }
    }

    pub fn coord_perm(&self) -> &[usize] {
        &self.coord_perm
    }

    pub fn alpha_perms(&self) -> &[Vec<u8>] {
        &self.alpha_perms
    }

    fn check_sig(&self, sig: GridSig) -> Result<()> {
        if self.coord_perm.len() != sig.n() || self.alpha_perms[0].len() != sig.q() {
            return Err(Error::DimensionMismatch(format!(
                "symmetry of [{}]^{} applied in {sig}",
                self.alpha_perms[0].len(),
                self.coord_perm.len()
            )));
        }
        Ok(())
    }

    fn map_coords(&self, x: &[u8], out: &mut [u8]) {
        for (i, &c) in x.iter().enumerate() {
            out[self.coord_perm[i]] = self.alpha_perms[i][c as usize];
        }
    }

    pub fn apply(&self, x: &Point) -> Result<Point> {
        if x.len() != self.coord_perm.len() {
            return Err(Error::DimensionMismatch(format!(
                "point of length {} under a symmetry of dimension {}",
                x.len(),
                self.coord_perm.len()
            )));
        }
        if x.coords().iter().any(|&c| c as usize >= self.alpha_perms[0].len()) {
            return Err(Error::InvalidParameter(format!("point {x} outside the alphabet")));
        }
        let mut out = vec![0u8; x.len()];
        self.map_coords(x.coords(), &mut out);
        Ok(Point(out))
    }

    /// Image of a row-major cell index.
    pub fn apply_index(&self, sig: GridSig, index: usize) -> usize {
        let mut x = vec![0u8; sig.n()];
        let mut y = vec![0u8; sig.n()];
        sig.decode_into(index, &mut x);
        self.map_coords(&x, &mut y);
        sig.index_of(&y)
    }

    pub fn apply_set(&self, set: &PointSet) -> Result<PointSet> {
        let sig = set.sig();
        self.check_sig(sig)?;
        PointSet::from_indices(sig, set.indices().iter().map(|&i| self.apply_index(sig, i)))
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Symmetry) -> Result<Symmetry> {
        if self.coord_perm.len() != other.coord_perm.len() || self.alpha_perms[0].len() != other.alpha_perms[0].len() {
            return Err(Error::DimensionMismatch("composing symmetries of different grids".into()));
        }
        let n = self.coord_perm.len();
        let mut coord_perm = vec![0; n];
        let mut alpha_perms = Vec::with_capacity(n);
        for i in 0..n {
            let mid = other.coord_perm[i];
            coord_perm[i] = self.coord_perm[mid];
            alpha_perms.push(other.alpha_perms[i].iter().map(|&c| self.alpha_perms[mid][c as usize]).collect());
        }
        Ok(Symmetry { coord_perm, alpha_perms })
    }

    pub fn inverse(&self) -> Symmetry {
        let n = self.coord_perm.len();
        let mut coord_perm = vec![0; n];
        for (i, &j) in self.coord_perm.iter().enumerate() {
            coord_perm[j] = i;
        }
        let alpha_perms = (0..n)
            .map(|j| {
                let forward = &self.alpha_perms[coord_perm[j]];
                let mut inv = vec![0u8; forward.len()];
                for (a, &b) in forward.iter().enumerate() {
                    inv[b as usize] = a as u8;
                }
                inv
            })
            .collect();
        Symmetry { coord_perm, alpha_perms }
    }
}

/// All permutations of `0..len` in lexicographic order.
pub fn permutations(len: usize) -> Vec<Vec<usize>> {
    let mut current: Vec<usize> = (0..len).collect();
    let mut out = vec![current.clone()];
    loop {
        let Some(i) = (1..len).rev().find(|&i| current[i - 1] < current[i]) else {
            return out;
        };
        let j = (i..len).rev().find(|&j| current[j] > current[i - 1]).unwrap();
        current.swap(i - 1, j);
        current[i..].reverse();
        out.push(current.clone());
    }
}

/// `n! (q!)^n`, or `None` on overflow.
pub fn group_order(sig: GridSig) -> Option<u128> {
    let fact = |m: usize| (1..=m as u128).try_fold(1u128, |acc, v| acc.checked_mul(v));
    let qf = fact(sig.q())?;
    fact(sig.n())?.checked_mul(qf.checked_pow(sig.n() as u32)?)
}

fn check_group(sig: GridSig, cap: u128) -> Result<u128> {
    match group_order(sig) {
        Some(order) if order <= cap => Ok(order),
        _ => Err(Error::BudgetExceeded(format!("Aut({sig}) has more than {cap} elements"))),
    }
}

/// Calls `visit` with every element of `Aut([q]^n)`, expressed as a table
/// `contrib[i][c]` giving the index contribution of symbol `c` at
/// coordinate `i`; the image index of `x` is `sum_i contrib[i][x_i]`.
fn for_each_contribution(sig: GridSig, mut visit: impl FnMut(&[Vec<usize>]) -> bool) {
    let (q, n) = (sig.q(), sig.n());
    let coord_perms = permutations(n);
    let alpha: Vec<Vec<usize>> = permutations(q);
    let mut contrib = vec![vec![0usize; q]; n];
    let mut choice = vec![0usize; n];
    for cp in &coord_perms {
        choice.iter_mut().for_each(|c| *c = 0);
        loop {
            for i in 0..n {
                let stride = sig.stride(cp[i]);
                for (c, slot) in contrib[i].iter_mut().enumerate() {
                    *slot = alpha[choice[i]][c] * stride;
                }
            }
            if !visit(&contrib) {
                return;
            }
            let mut pos = n;
            loop {
                if pos == 0 {
                    break;
                }
                pos -= 1;
                choice[pos] += 1;
                if choice[pos] < alpha.len() {
                    break;
                }
                choice[pos] = 0;
            }
            if choice.iter().all(|&c| c == 0) {
                break;
            }
        }
    }
}

/// The orbit representative with the lexicographically least sorted index
/// list. Two sets share a canonical form exactly when they are equivalent.
pub fn canonical_form(set: &PointSet) -> Result<PointSet> {
    let sig = set.sig();
    check_group(sig, MAX_GROUP_ORDER)?;
    let points: Vec<Vec<u8>> = set.points().map(|p| p.0).collect();
    let mut best: Vec<usize> = set.indices().to_vec();
    let mut image = Vec::with_capacity(points.len());
    for_each_contribution(sig, |contrib| {
        image.clear();
        image.extend(points.iter().map(|x| x.iter().enumerate().map(|(i, &c)| contrib[i][c as usize]).sum::<usize>()));
        image.sort_unstable();
        if image < best {
            best.clone_from(&image);
        }
        true
    });
    PointSet::from_indices(sig, best)
}

/// Every group element as an explicit permutation of cell indices. Refuses
/// when `|Aut| * q^n` exceeds `max_entries`.
pub fn cell_permutations(sig: GridSig, max_entries: u128) -> Result<Vec<Vec<u32>>> {
    let order = check_group(sig, MAX_GROUP_ORDER)?;
    if order * sig.size() as u128 > max_entries {
        return Err(Error::BudgetExceeded(format!(
            "permutation tables for Aut({sig}) need {} entries",
            order * sig.size() as u128
        )));
    }
    let mut coords = vec![0u8; sig.n()];
    let cells: Vec<Vec<u8>> = (0..sig.size())
        .map(|i| {
            sig.decode_into(i, &mut coords);
            coords.clone()
        })
        .collect();
    let mut tables = Vec::with_capacity(order as usize);
    for_each_contribution(sig, |contrib| {
        tables.push(
            cells
                .iter()
                .map(|x| x.iter().enumerate().map(|(i, &c)| contrib[i][c as usize]).sum::<usize>() as u32)
                .collect(),
        );
        true
    });
    Ok(tables)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::HashSet;

    fn set(sig: GridSig, pts: &[&[u8]]) -> PointSet {
        PointSet::new(sig, pts.iter().map(|p| Point::new(p.to_vec()))).unwrap()
    }

    #[test]
    fn action_examples() {
        let sig = GridSig::new(3, 3).unwrap();
        let x = Point::new(vec![0, 1, 2]);
        assert_eq!(Symmetry::identity(sig).apply(&x).unwrap(), x);
        assert_eq!(Symmetry::swap_coords(sig, 0, 1).apply(&x).unwrap(), Point::new(vec![1, 0, 2]));
        let sig2 = GridSig::new(3, 2).unwrap();
        let cycle = Symmetry::relabel(sig2, 0, vec![1, 2, 0]).unwrap();
        let t = set(sig2, &[&[0, 0], &[1, 0]]);
        assert_eq!(cycle.apply_set(&t).unwrap(), set(sig2, &[&[1, 0], &[2, 0]]));
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Symmetry::new(vec![0, 0], vec![vec![0, 1], vec![0, 1]]).is_err());
        assert!(Symmetry::new(vec![1, 0], vec![vec![0, 0], vec![0, 1]]).is_err());
        let sig = GridSig::new(3, 2).unwrap();
        let s = Symmetry::identity(sig);
        assert!(s.apply(&Point::new(vec![0, 0, 0])).is_err());
        assert!(s.apply_set(&PointSet::empty(GridSig::new(3, 3).unwrap())).is_err());
    }

    #[test]
    fn group_axioms_on_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let sig = GridSig::new(3, 4).unwrap();
        for _ in 0..200 {
            let a = Symmetry::random(sig, &mut rng);
            let b = Symmetry::random(sig, &mut rng);
            let x = sig.point_at(rng.gen_range(0..sig.size()));
            let ab = a.compose(&b).unwrap();
            assert_eq!(ab.apply(&x).unwrap(), a.apply(&b.apply(&x).unwrap()).unwrap());
            assert_eq!(a.inverse().apply(&a.apply(&x).unwrap()).unwrap(), x);
            assert_eq!(a.compose(&a.inverse()).unwrap(), Symmetry::identity(sig));
        }
    }

    #[test]
    fn group_enumeration_size() {
        let sig = GridSig::new(3, 2).unwrap();
        assert_eq!(group_order(sig), Some(72));
        let tables = cell_permutations(sig, 1 << 20).unwrap();
        assert_eq!(tables.len(), 72);
        let distinct: HashSet<_> = tables.iter().collect();
        assert_eq!(distinct.len(), 72);
        let sig = GridSig::new(3, 4).unwrap();
        assert_eq!(group_order(sig), Some(31104));
    }

    #[test]
    fn canonical_single_points() {
        let sig = GridSig::new(2, 2).unwrap();
        let a = canonical_form(&set(sig, &[&[0, 0]])).unwrap();
        let b = canonical_form(&set(sig, &[&[1, 1]])).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn canonical_is_orbit_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let sig = GridSig::new(3, 3).unwrap();
        for _ in 0..30 {
            let size = rng.gen_range(1..8);
            let t = PointSet::from_indices(sig, (0..size).map(|_| rng.gen_range(0..27))).unwrap();
            let canon = canonical_form(&t).unwrap();
            assert!(canon <= t);
            for _ in 0..5 {
                let s = Symmetry::random(sig, &mut rng);
                assert_eq!(canonical_form(&s.apply_set(&t).unwrap()).unwrap(), canon);
            }
        }
    }

    #[test]
    fn group_too_large() {
        let sig = GridSig::new(5, 5).unwrap();
        assert!(matches!(canonical_form(&PointSet::empty(sig)), Err(Error::BudgetExceeded(_))));
    }

    #[test]
    fn permutations_lexicographic() {
        let p = permutations(3);
        assert_eq!(p.len(), 6);
        assert_eq!(p[0], vec![0, 1, 2]);
        assert_eq!(p[5], vec![2, 1, 0]);
    }
}
