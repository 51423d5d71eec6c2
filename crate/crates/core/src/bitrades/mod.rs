//! k-bitrades: recognition, exhaustive search for bitrades avoiding a point
//! set, and the degree analysis of their supports over `[2]^n`.

mod anf;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use anf::{anf, degree, is_affine_leq2, AnfMap};

use crate::array::CubeArray;
use crate::error::{Error, Result};
use crate::face::FaceTable;
use crate::grid::GridSig;
use crate::pointset::PointSet;

/// Default node cap for bitrade searches.
pub const DEFAULT_NODE_CAP: u64 = 100_000_000;

/// True iff every value is in `{-1,0,1}` and every k-face has as many `+1`
/// as `-1` cells.
pub fn is_k_bitrade(f: &CubeArray, k: usize) -> Result<bool> {
    let table = FaceTable::new(f.sig(), k)?;
    is_bitrade_in(&table, f)
}

/// Same as [`is_k_bitrade`] against a prebuilt face table.
pub fn is_bitrade_in(table: &FaceTable, f: &CubeArray) -> Result<bool> {
    if f.sig() != table.sig() {
        return Err(Error::DimensionMismatch(format!("{} vs {}", f.sig(), table.sig())));
    }
    f.check_range(-1, 1)?;
    Ok(table.faces().iter().all(|cells| cells.iter().map(|&c| f.at(c as usize)).sum::<i32>() == 0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchStatus {
    Found,
    Exhausted,
    ResourceLimited,
}

/// Result of [`find_bitrade_avoiding`]. `exhausted` means the whole space was
/// searched and no nonzero bitrade avoids the query set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    pub witness: Option<CubeArray>,
    pub nodes: u64,
    pub exhausted: bool,
}

impl SearchOutcome {
    pub fn status(&self) -> SearchStatus {
        match (&self.witness, self.exhausted) {
            (Some(_), _) => SearchStatus::Found,
            (None, true) => SearchStatus::Exhausted,
            (None, false) => SearchStatus::ResourceLimited,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Flow {
    Continue,
    Stop,
    Capped,
}

/// Backtracking over `{0,+1,-1}` with forced zeros and per-face balance
/// pruning: a face is feasible while `|plus - minus| <= open`.
struct Engine<'a> {
    table: &'a FaceTable,
    order: Vec<usize>,
    values: Vec<i8>,
    balance: Vec<i32>,
    open: Vec<i32>,
    nonzero: usize,
    nodes: u64,
    cap: u64,
    break_sign: bool,
}

impl<'a> Engine<'a> {
    fn new(table: &'a FaceTable, forced_zero: &[bool], cap: u64, break_sign: bool) -> Self {
        let order: Vec<usize> = (0..forced_zero.len()).filter(|&i| !forced_zero[i]).collect();
        let open = table
            .faces()
            .iter()
            .map(|cells| cells.iter().filter(|&&c| !forced_zero[c as usize]).count() as i32)
            .collect();
        Engine {
            table,
            order,
            values: vec![0; forced_zero.len()],
            balance: vec![0; table.len()],
            open,
            nonzero: 0,
            nodes: 0,
            cap,
            break_sign,
        }
    }

    fn assign(&mut self, cell: usize, v: i8) -> bool {
        let faces = self.table.faces_of(cell);
        let mut ok = true;
        for &f in faces {
            let f = f as usize;
            self.open[f] -= 1;
            self.balance[f] += v as i32;
            if self.balance[f].abs() > self.open[f] {
                ok = false;
            }
        }
        self.values[cell] = v;
        if v != 0 {
            self.nonzero += 1;
        }
        ok
    }

    fn unassign(&mut self, cell: usize) {
        let v = self.values[cell];
        for &f in self.table.faces_of(cell) {
            let f = f as usize;
            self.open[f] += 1;
            self.balance[f] -= v as i32;
        }
        self.values[cell] = 0;
        if v != 0 {
            self.nonzero -= 1;
        }
    }

    fn run(&mut self, depth: usize, visit: &mut dyn FnMut(&[i8]) -> bool) -> Flow {
        self.nodes += 1;
        if self.nodes > self.cap {
            return Flow::Capped;
        }
        if depth == self.order.len() {
            if self.nonzero > 0 && !visit(&self.values) {
                return Flow::Stop;
            }
            return Flow::Continue;
        }
        let cell = self.order[depth];
        for v in [0i8, 1, -1] {
            if v == -1 && self.break_sign && self.nonzero == 0 {
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

fn check_avoid(sig: GridSig, avoid: &PointSet) -> Result<()> {
    if avoid.sig() != sig {
        return Err(Error::DimensionMismatch(format!("query set in {} for {sig}", avoid.sig())));
    }
    Ok(())
}

fn to_array(sig: GridSig, values: &[i8]) -> CubeArray {
    CubeArray::new(sig, values.iter().map(|&v| v as i32).collect()).expect("length matches grid")
}

/// Searches for a nonzero k-bitrade vanishing on `avoid`.
///
/// Cells are assigned in row-major order with values tried as `0, +1, -1`,
/// and the first nonzero cell is fixed to `+1`, so the witness and node
/// count are reproducible. Hitting `node_cap` yields a resource-limited
/// outcome, never a verdict.
pub fn find_bitrade_avoiding(sig: GridSig, k: usize, avoid: &PointSet, node_cap: u64) -> Result<SearchOutcome> {
    check_avoid(sig, avoid)?;
    let table = FaceTable::new(sig, k)?;
    find_bitrade_avoiding_in(&table, avoid, node_cap)
}

/// [`find_bitrade_avoiding`] against a prebuilt face table.
pub fn find_bitrade_avoiding_in(table: &FaceTable, avoid: &PointSet, node_cap: u64) -> Result<SearchOutcome> {
    let sig = table.sig();
    check_avoid(sig, avoid)?;
    let mut engine = Engine::new(table, &avoid.mask(), node_cap, true);
    let mut found: Option<Vec<i8>> = None;
    let flow = engine.run(0, &mut |values| {
        found = Some(values.to_vec());
        false
    });
    let nodes = engine.nodes;
    let outcome = match flow {
        Flow::Stop => {
            let witness = to_array(sig, &found.expect("witness recorded on stop"));
            debug_assert!(is_bitrade_in(table, &witness).unwrap_or(false));
            debug_assert!(avoid.indices().iter().all(|&i| witness.at(i) == 0));
            SearchOutcome { witness: Some(witness), nodes, exhausted: false }
        }
        Flow::Continue => SearchOutcome { witness: None, nodes, exhausted: true },
        Flow::Capped => SearchOutcome { witness: None, nodes, exhausted: false },
    };
    Ok(outcome)
}

/// Every nonzero k-bitrade vanishing on `avoid`, both signs included, in the
/// search order of [`find_bitrade_avoiding`].
pub fn enumerate_bitrades(sig: GridSig, k: usize, avoid: &PointSet, node_cap: u64) -> Result<Vec<CubeArray>> {
    check_avoid(sig, avoid)?;
    let table = FaceTable::new(sig, k)?;
    let mut engine = Engine::new(&table, &avoid.mask(), node_cap, false);
    let mut all = Vec::new();
    match engine.run(0, &mut |values| {
        all.push(to_array(sig, values));
        true
    }) {
        Flow::Capped => Err(Error::ResourceLimit { nodes: engine.nodes }),
        _ => Ok(all),
    }
}

/// Degree statistics of the supports of all nonzero k-bitrades in `[2]^n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BitradeClassification {
    pub q: usize,
    pub n: usize,
    pub k: usize,
    /// Nonzero bitrades, counting `b` and `-b` separately.
    pub bitrades: usize,
    /// Algebraic degree of `|b|` mapped to how many bitrades have it.
    pub degree_histogram: BTreeMap<usize, usize>,
    /// Bitrades whose support is affine in at most two variables.
    pub affine_leq2: usize,
}

impl BitradeClassification {
    pub fn max_degree(&self) -> usize {
        self.degree_histogram.keys().copied().max().unwrap_or(0)
    }

    pub fn all_affine_leq2(&self) -> bool {
        self.affine_leq2 == self.bitrades
    }
}

/// Enumerates every k-bitrade of `[2]^n` (`n <= 4`) and classifies the
/// algebraic degree of its support.
pub fn classify_small_bitrades(sig: GridSig, k: usize) -> Result<BitradeClassification> {
    if sig.q() != 2 {
        return Err(Error::InvalidParameter("classification is defined for q = 2".into()));
    }
    if sig.n() > 4 {
        return Err(Error::BudgetExceeded(format!("3^(2^{}) patterns is too many", sig.n())));
    }
    let all = enumerate_bitrades(sig, k, &PointSet::empty(sig), DEFAULT_NODE_CAP)?;
    let mut degree_histogram = BTreeMap::new();
    let mut affine = 0;
    for b in &all {
        let support = b.abs();
        *degree_histogram.entry(degree(&support)?).or_insert(0) += 1;
        if is_affine_leq2(&support)? {
            affine += 1;
        }
    }
    Ok(BitradeClassification { q: 2, n: sig.n(), k, bitrades: all.len(), degree_histogram, affine_leq2: affine })
}
