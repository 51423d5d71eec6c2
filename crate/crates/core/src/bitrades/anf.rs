//! Algebraic normal form of Boolean functions on `[2]^n`.

use serde::{Deserialize, Serialize};

use crate::array::CubeArray;
use crate::error::{Error, Result};
use crate::grid::{GridSig, Point};

/// ANF coefficients `mu(y)`, indexed row-major like the function itself.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnfMap {
    sig: GridSig,
    coefficients: Vec<u8>,
}

fn check_boolean(g: &CubeArray) -> Result<()> {
    if g.sig().q() != 2 {
        return Err(Error::InvalidParameter(format!("ANF needs a binary alphabet, got q={}", g.sig().q())));
    }
    g.check_range(0, 1)
}

/// In-place subset-sum transform over GF(2). It is its own inverse.
fn mobius(bits: &mut [u8]) {
    let len = bits.len();
    let mut step = 1;
    while step < len {
        for i in 0..len {
            if i & step != 0 {
                bits[i] ^= bits[i ^ step];
            }
        }
        step <<= 1;
    }
}

/// `mu_g(y) = sum over x <= y of g(x)` mod 2.
pub fn anf(g: &CubeArray) -> Result<AnfMap> {
    check_boolean(g)?;
    let mut coefficients: Vec<u8> = g.values().iter().map(|&v| v as u8).collect();
    mobius(&mut coefficients);
    Ok(AnfMap { sig: g.sig(), coefficients })
}

impl AnfMap {
    pub fn sig(&self) -> GridSig {
        self.sig
    }

    pub fn coefficients(&self) -> &[u8] {
        &self.coefficients
    }

    pub fn coefficient(&self, y: &Point) -> u8 {
        self.coefficients[self.sig.index_of(y.coords())]
    }

    /// Monomials present, as row-major indices of their exponent vectors.
    pub fn monomials(&self) -> impl Iterator<Item = usize> + '_ {
        self.coefficients.iter().enumerate().filter_map(|(i, &c)| (c == 1).then_some(i))
    }

    /// Evaluates the polynomial back into a truth table.
    pub fn to_function(&self) -> CubeArray {
        let mut bits = self.coefficients.clone();
        mobius(&mut bits);
        CubeArray::new(self.sig, bits.into_iter().map(i32::from).collect()).expect("length preserved")
    }

    /// Largest monomial weight; the zero function has degree 0.
    pub fn degree(&self) -> usize {
        self.monomials().map(|y| self.sig.weight_of_index(y)).max().unwrap_or(0)
    }

    /// Positions appearing in at least one monomial.
    pub fn essential_variables(&self) -> Vec<usize> {
        let n = self.sig.n();
        (0..n)
            .filter(|&pos| {
                let stride = self.sig.stride(pos);
                self.monomials().any(|y| (y / stride) % 2 == 1)
            })
            .collect()
    }
}

pub fn degree(g: &CubeArray) -> Result<usize> {
    Ok(anf(g)?.degree())
}

/// Affine with at most two essential variables.
pub fn is_affine_leq2(g: &CubeArray) -> Result<bool> {
    let map = anf(g)?;
    Ok(map.degree() <= 1 && map.essential_variables().len() <= 2)
}
