use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{FreqParams, PartialCube};
use crate::array::CubeArray;
use crate::error::{Error, Result};
use crate::face::FaceTable;
use crate::pointset::PointSet;

/// Default node cap for cube enumeration and completion.
pub const DEFAULT_CUBE_NODE_CAP: u64 = 200_000_000;

const UNSET: u8 = u8::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Flow {
    Continue,
    Stop,
    Capped,
}

/// Forward-checking backtracker: no face may hold more than `lambda_i`
/// copies of symbol `i`. Since the multiplicities sum to the face size this
/// also guarantees the remaining cells can still reach every target.
struct Solver<'a> {
    table: &'a FaceTable,
    lambdas: &'a [u32],
    m: usize,
    counts: Vec<u32>,
    values: Vec<u8>,
    order: Vec<usize>,
    nodes: u64,
    cap: u64,
    rng: Option<ChaCha8Rng>,
}

impl<'a> Solver<'a> {
    /// Returns `None` when the fixed cells already violate a face count.
    fn new(table: &'a FaceTable, lambdas: &'a [u32], fixed: &[(usize, u8)], cap: u64) -> Option<Self> {
        let m = lambdas.len();
        let cells = table.sig().size();
        let mut s = Solver {
            table,
            lambdas,
            m,
            counts: vec![0; table.len() * m],
            values: vec![UNSET; cells],
            order: Vec::new(),
            nodes: 0,
            cap,
            rng: None,
        };
        for &(cell, v) in fixed {
            if !s.assign(cell, v) {
                return None;
            }
        }
        s.order = (0..cells).filter(|&c| s.values[c] == UNSET).collect();
        Some(s)
    }

    fn assign(&mut self, cell: usize, v: u8) -> bool {
        let mut ok = true;
        for &f in self.table.faces_of(cell) {
            let slot = f as usize * self.m + v as usize;
            self.counts[slot] += 1;
            if self.counts[slot] > self.lambdas[v as usize] {
                ok = false;
            }
        }
        self.values[cell] = v;
        ok
    }

    fn unassign(&mut self, cell: usize) {
        let v = self.values[cell] as usize;
        for &f in self.table.faces_of(cell) {
            self.counts[f as usize * self.m + v] -= 1;
        }
        self.values[cell] = UNSET;
    }

    fn run(&mut self, depth: usize, visit: &mut dyn FnMut(&[u8]) -> bool) -> Flow {
        self.nodes += 1;
        if self.nodes > self.cap {
            return Flow::Capped;
        }
        if depth == self.order.len() {
            return if visit(&self.values) { Flow::Continue } else { Flow::Stop };
        }
        let cell = self.order[depth];
        let mut symbols: Vec<u8> = (0..self.m as u8).collect();
        if let Some(rng) = self.rng.as_mut() {
            symbols.shuffle(rng);
        }
        for v in symbols {
            if self.lambdas[v as usize] == 0 {
                continue;
            }
            let ok = self.assign(cell, v);
            let flow = if ok { self.run(depth + 1, visit) } else { Flow::Continue };
            self.unassign(cell);
            if flow != Flow::Continue {
                return flow;
            }
        }
        Flow::Continue
    }
}

fn to_array(table: &FaceTable, values: &[u8]) -> CubeArray {
    CubeArray::new(table.sig(), values.iter().map(|&v| v as i32).collect()).expect("sized to grid")
}

/// Streams every cube of `p` in row-major lexicographic order to `visit`
/// until it returns `false`. Returns the number of search nodes used.
pub fn for_each_cube(p: &FreqParams, node_cap: u64, mut visit: impl FnMut(&CubeArray) -> bool) -> Result<u64> {
    let table = p.face_table()?;
    let Some(mut solver) = Solver::new(&table, &p.lambdas, &[], node_cap) else {
        return Ok(0);
    };
    let flow = solver.run(0, &mut |values| visit(&to_array(&table, values)));
    match flow {
        Flow::Capped => Err(Error::ResourceLimit { nodes: solver.nodes }),
        _ => Ok(solver.nodes),
    }
}

/// All members of `F_k^n(q; lambda)`.
pub fn enumerate_cubes(p: &FreqParams, node_cap: u64) -> Result<Vec<CubeArray>> {
    let mut all = Vec::new();
    for_each_cube(p, node_cap, |f| {
        all.push(f.clone());
        true
    })?;
    Ok(all)
}

/// `|F_k^n(q; lambda)|` by exhaustive enumeration.
pub fn count_cubes(p: &FreqParams, node_cap: u64) -> Result<u64> {
    let mut count = 0u64;
    for_each_cube(p, node_cap, |_| {
        count += 1;
        true
    })?;
    Ok(count)
}

/// A completion of partial data and whether it is the only one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Completion {
    pub cube: CubeArray,
    pub unique: bool,
    pub nodes: u64,
}

/// Completes `partial`, assigned exactly on `set`, to a cube of `p`. The
/// search continues past the first solution to decide uniqueness.
pub fn reconstruct_csp(partial: &PartialCube, set: &PointSet, p: &FreqParams) -> Result<Completion> {
    super::check_params_match(partial.sig(), p)?;
    if partial.m() != p.m() {
        return Err(Error::InvalidParameter(format!("partial data has {} symbols, parameters {}", partial.m(), p.m())));
    }
    if partial.domain() != *set {
        return Err(Error::InvalidParameter("partial data is not assigned exactly on the set".into()));
    }
    let table = p.face_table()?;
    let fixed: Vec<(usize, u8)> = partial.assignments().collect();
    let Some(mut solver) = Solver::new(&table, &p.lambdas, &fixed, DEFAULT_CUBE_NODE_CAP) else {
        return Err(Error::NoCompletion);
    };
    let mut found: Vec<Vec<u8>> = Vec::new();
    let flow = solver.run(0, &mut |values| {
        found.push(values.to_vec());
        found.len() < 2
    });
    if flow == Flow::Capped {
        return Err(Error::ResourceLimit { nodes: solver.nodes });
    }
    let unique = found.len() == 1;
    let first = found.into_iter().next().ok_or(Error::NoCompletion)?;
    Ok(Completion { cube: to_array(&table, &first), unique, nodes: solver.nodes })
}

/// Draws from a seeded randomized search: each draw is the first cube found
/// with symbol orders shuffled at every node.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SampleRun {
    pub seed: u64,
    pub draws: usize,
    pub distinct: usize,
    #[serde(skip)]
    pub members: Vec<CubeArray>,
}

pub fn sample_cubes(p: &FreqParams, draws: usize, seed: u64, node_cap: u64) -> Result<SampleRun> {
    let table = p.face_table()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = std::collections::HashSet::new();
    let mut members = Vec::new();
    for _ in 0..draws {
        let Some(mut solver) = Solver::new(&table, &p.lambdas, &[], node_cap) else {
            break;
        };
        solver.rng = Some(ChaCha8Rng::from_rng(&mut rng).expect("seeded generator"));
        let mut drawn = None;
        let flow = solver.run(0, &mut |values| {
            drawn = Some(values.to_vec());
            false
        });
        match flow {
            Flow::Capped => return Err(Error::ResourceLimit { nodes: solver.nodes }),
            Flow::Continue => break,
            Flow::Stop => {}
        }
        let values = drawn.expect("stop implies a cube");
        if seen.insert(values.clone()) {
            members.push(to_array(&table, &values));
        }
    }
    Ok(SampleRun { seed, draws, distinct: members.len(), members })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubes::is_frequency_cube;
    use crate::grid::GridSig;

    fn params(q: usize, n: usize, k: usize, l: &[u32]) -> FreqParams {
        FreqParams::new(q, n, k, l.to_vec()).unwrap()
    }

    /// Every array over [m] tested directly against the definition.
    fn brute_count(p: &FreqParams) -> u64 {
        let sig = p.sig().unwrap();
        let cells = sig.size();
        let m = p.m();
        (0..m.pow(cells as u32))
            .filter(|&code| {
                let mut c = code;
                let values = (0..cells)
                    .map(|_| {
                        let v = (c % m) as i32;
                        c /= m;
                        v
                    })
                    .collect();
                is_frequency_cube(&CubeArray::new(sig, values).unwrap(), p).unwrap()
            })
            .count() as u64
    }

    #[test]
    fn counts_match_brute_force() {
        for p in [
            params(3, 2, 1, &[1, 1, 1]),
            params(2, 2, 2, &[2, 2]),
            params(2, 2, 1, &[1, 1]),
            params(3, 2, 1, &[2, 1]),
            params(2, 3, 2, &[2, 2]),
        ] {
            assert_eq!(count_cubes(&p, DEFAULT_CUBE_NODE_CAP).unwrap(), brute_count(&p), "{p:?}");
        }
        assert_eq!(count_cubes(&params(3, 2, 1, &[1, 1, 1]), DEFAULT_CUBE_NODE_CAP).unwrap(), 12);
        assert_eq!(count_cubes(&params(2, 2, 2, &[2, 2]), DEFAULT_CUBE_NODE_CAP).unwrap(), 6);
        assert_eq!(count_cubes(&params(2, 2, 1, &[1, 1]), DEFAULT_CUBE_NODE_CAP).unwrap(), 2);
    }

    #[test]
    fn enumeration_is_sorted_and_valid() {
        let p = params(3, 3, 1, &[1, 1, 1]);
        let all = enumerate_cubes(&p, DEFAULT_CUBE_NODE_CAP).unwrap();
        assert!(all.windows(2).all(|w| w[0].values() < w[1].values()));
        assert!(all.iter().all(|f| is_frequency_cube(f, &p).unwrap()));
    }

    #[test]
    fn cap_is_reported() {
        let p = params(3, 3, 1, &[1, 1, 1]);
        assert!(matches!(count_cubes(&p, 10), Err(Error::ResourceLimit { .. })));
    }

    #[test]
    fn empty_set_completion_not_unique() {
        let p = params(3, 2, 1, &[1, 1, 1]);
        let sig = p.sig().unwrap();
        let empty = PointSet::empty(sig);
        let partial = PartialCube::new(sig, 3, []).unwrap();
        let c = reconstruct_csp(&partial, &empty, &p).unwrap();
        assert!(!c.unique);
        assert!(is_frequency_cube(&c.cube, &p).unwrap());
    }

    #[test]
    fn full_set_completion() {
        let p = params(3, 2, 1, &[1, 1, 1]);
        let sig = p.sig().unwrap();
        let f = CubeArray::from_fn(sig, |x| ((2 * x[0] + x[1]) % 3) as i32);
        let full = PointSet::full(sig);
        let c = reconstruct_csp(&PartialCube::restrict(&f, 3, &full).unwrap(), &full, &p).unwrap();
        assert_eq!(c.cube, f);
        assert!(c.unique);
    }

    #[test]
    fn contradictory_partial() {
        let p = params(3, 2, 1, &[1, 1, 1]);
        let sig = p.sig().unwrap();
        let t = PointSet::from_indices(sig, [0, 1]).unwrap();
        let partial = PartialCube::new(sig, 3, [(sig.point_at(0), 1), (sig.point_at(1), 1)]).unwrap();
        assert_eq!(reconstruct_csp(&partial, &t, &p), Err(Error::NoCompletion));
        let other = PointSet::from_indices(sig, [0]).unwrap();
        assert!(reconstruct_csp(&partial, &other, &p).is_err());
    }

    #[test]
    fn sampling_is_seeded() {
        let p = params(3, 3, 1, &[1, 1, 1]);
        let a = sample_cubes(&p, 50, 9, DEFAULT_CUBE_NODE_CAP).unwrap();
        let b = sample_cubes(&p, 50, 9, DEFAULT_CUBE_NODE_CAP).unwrap();
        assert_eq!(a.members, b.members);
        assert!(a.distinct > 1);
        assert!(a.members.iter().all(|f| is_frequency_cube(f, &p).unwrap()));
        let _ = GridSig::new(3, 3).unwrap();
    }
}
