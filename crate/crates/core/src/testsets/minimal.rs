use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bitrades::{find_bitrade_avoiding_in, DEFAULT_NODE_CAP};
use crate::error::{Error, Result};
use crate::face::FaceTable;
use crate::grid::{binomial, GridSig};
use crate::pointset::PointSet;
use crate::symmetry::cell_permutations;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinSearchOptions {
    /// Refuse when `binomial(q^n, size_bound)` exceeds this.
    pub max_subsets: u128,
    /// Node cap for every individual certification.
    pub node_cap: u64,
    /// For lines of `[3]^3`, only certify sets of size at most 6 with
    /// exactly two points in every plane and at most one on every line.
    pub plane_line_filters: bool,
}

impl Default for MinSearchOptions {
    fn default() -> Self {
        MinSearchOptions { max_subsets: 100_000_000, node_cap: DEFAULT_NODE_CAP, plane_line_filters: true }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelStats {
    pub size: usize,
    /// Orbit representatives of this size.
    pub classes: usize,
    /// Representatives handed to the bitrade search.
    pub certified: usize,
    pub nodes: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinSearchReport {
    pub q: usize,
    pub n: usize,
    pub k: usize,
    pub size_bound: usize,
    pub found: Option<PointSet>,
    pub levels: Vec<LevelStats>,
}

/// Is `set` (sorted) the least sorted image under every table?
fn is_canonical(set: &[u32], perms: &[Vec<u32>], scratch: &mut Vec<u32>) -> bool {
    perms.iter().all(|perm| {
        scratch.clear();
        scratch.extend(set.iter().map(|&c| perm[c as usize]));
        scratch.sort_unstable();
        scratch.as_slice() >= set
    })
}

fn passes_filters(set: &[u32], planes: &FaceTable, lines: &FaceTable) -> bool {
    let mut mask = vec![false; planes.sig().size()];
    set.iter().for_each(|&c| mask[c as usize] = true);
    let count = |cells: &Vec<u32>| cells.iter().filter(|&&c| mask[c as usize]).count();
    planes.faces().iter().all(|f| count(f) == 2) && lines.faces().iter().all(|f| count(f) <= 1)
}

/// Smallest supertesting set for `k`-faces of `[q]^n` of size at most
/// `size_bound`. Sets are generated one size at a time as orbit
/// representatives under `Aut([q]^n)` (least sorted index list; dropping
/// the largest cell of a representative gives a representative), and each
/// size is certified in lexicographic order, so the answer is the least
/// representative of the least size.
pub fn min_supertesting_search(
    q: usize,
    n: usize,
    k: usize,
    size_bound: usize,
    options: &MinSearchOptions,
) -> Result<MinSearchReport> {
    let sig = GridSig::new(q, n)?;
    let table = FaceTable::new(sig, k)?;
    let cells = sig.size();
    if size_bound > cells {
        return Err(Error::InvalidParameter(format!("size bound {size_bound} exceeds {cells} cells")));
    }
    let subsets = binomial(cells as u64, size_bound as u64);
    if subsets > options.max_subsets {
        return Err(Error::BudgetExceeded(format!(
            "{subsets} subsets of size {size_bound} exceed the budget {}",
            options.max_subsets
        )));
    }
    let perms = cell_permutations(sig, options.max_subsets.saturating_mul(cells as u128))?;
    let filters = if options.plane_line_filters && (q, n, k) == (3, 3, 1) {
        Some((FaceTable::new(sig, 2)?, FaceTable::new(sig, 1)?))
    } else {
        None
    };

    let mut report = MinSearchReport { q, n, k, size_bound, found: None, levels: Vec::new() };
    let mut level: Vec<Vec<u32>> = vec![Vec::new()];
    for size in 0..=size_bound {
        if size > 0 {
            let mut next: Vec<Vec<u32>> = level
                .par_iter()
                .flat_map_iter(|set| {
                    let start = set.last().map_or(0, |&c| c + 1);
                    let mut scratch = Vec::with_capacity(size);
                    let perms = &perms;
                    (start..cells as u32).filter_map(move |c| {
                        let mut grown = set.clone();
                        grown.push(c);
                        is_canonical(&grown, perms, &mut scratch).then_some(grown)
                    })
                })
                .collect();
            next.par_sort_unstable();
            level = next;
        }
        let candidates: Vec<&Vec<u32>> = level
            .iter()
            .filter(|set| match &filters {
                Some((planes, lines)) if size <= 6 => passes_filters(set, planes, lines),
                _ => true,
            })
            .collect();
        let results: Vec<Result<(bool, u64)>> = candidates
            .par_iter()
            .map(|set| {
                let avoid = PointSet::from_indices(sig, set.iter().map(|&c| c as usize))?;
                let out = find_bitrade_avoiding_in(&table, &avoid, options.node_cap)?;
                if out.witness.is_none() && !out.exhausted {
                    return Err(Error::ResourceLimit { nodes: out.nodes });
                }
                Ok((out.witness.is_none(), out.nodes))
            })
            .collect();
        let mut stats = LevelStats { size, classes: level.len(), certified: candidates.len(), nodes: 0 };
        let mut hit = None;
        for (set, result) in candidates.iter().zip(results) {
            let (supertesting, nodes) = result?;
            stats.nodes += nodes;
            if supertesting && hit.is_none() {
                hit = Some(*set);
            }
        }
        report.levels.push(stats);
        if let Some(set) = hit {
            report.found = Some(PointSet::from_indices(sig, set.iter().map(|&c| c as usize))?);
            break;
        }
    }
    Ok(report)
}
