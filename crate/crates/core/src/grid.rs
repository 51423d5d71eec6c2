//! The ambient grid `[q]^n`, its points, and the weight combinatorics.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Alphabet size and dimension of a grid `[q]^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawSig")]
pub struct GridSig {
    q: usize,
    n: usize,
}

#[derive(Deserialize)]
struct RawSig {
    q: usize,
    n: usize,
}

impl TryFrom<RawSig> for GridSig {
    type Error = Error;

    fn try_from(raw: RawSig) -> Result<Self> {
        GridSig::new(raw.q, raw.n)
    }
}

impl GridSig {
    /// Validates `2 <= q <= 255`, `n >= 1`, and that `q^n` is addressable.
    pub fn new(q: usize, n: usize) -> Result<Self> {
        if !(2..=255).contains(&q) {
            return Err(Error::InvalidGrid(format!("alphabet size {q} not in 2..=255")));
        }
        if n == 0 {
            return Err(Error::InvalidGrid("dimension must be at least 1".into()));
        }
        let size = u32::try_from(n)
            .ok()
            .and_then(|e| q.checked_pow(e))
            .ok_or_else(|| Error::InvalidGrid(format!("{q}^{n} cells do not fit in memory indices")))?;
        // Cell indices are stored as u32 in the face tables.
        if size > u32::MAX as usize {
            return Err(Error::InvalidGrid(format!("{q}^{n} cells exceed the index range")));
        }
        Ok(GridSig { q, n })
    }

    #[inline]
    pub fn q(&self) -> usize {
        self.q
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of cells, `q^n`.
    #[inline]
    pub fn size(&self) -> usize {
        self.q.pow(self.n as u32)
    }

    /// Row-major index: the first coordinate is the most significant digit.
    pub fn index_of(&self, coords: &[u8]) -> usize {
        debug_assert_eq!(coords.len(), self.n);
        coords.iter().fold(0, |acc, &c| acc * self.q + c as usize)
    }

    /// Writes the coordinates of `index` into `out`.
    pub fn decode_into(&self, mut index: usize, out: &mut [u8]) {
        debug_assert_eq!(out.len(), self.n);
        for slot in out.iter_mut().rev() {
            *slot = (index % self.q) as u8;
            index /= self.q;
        }
    }

    pub fn point_at(&self, index: usize) -> Point {
        let mut coords = vec![0u8; self.n];
        self.decode_into(index, &mut coords);
        Point(coords)
    }

    /// Stride of coordinate `axis` in the row-major layout.
    #[inline]
    pub fn stride(&self, axis: usize) -> usize {
        self.q.pow((self.n - 1 - axis) as u32)
    }

    pub fn check_point(&self, point: &Point) -> Result<()> {
        if point.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "point of length {} in a grid of dimension {}",
                point.len(),
                self.n
            )));
        }
        if let Some(&c) = point.0.iter().find(|&&c| c as usize >= self.q) {
            return Err(Error::InvalidParameter(format!("symbol {c} outside [{}]", self.q)));
        }
        Ok(())
    }

    /// All points in row-major order.
    pub fn points(&self) -> impl Iterator<Item = Point> + '_ {
        (0..self.size()).map(move |i| self.point_at(i))
    }

    /// Weight of the cell at `index` without materialising the point.
    pub fn weight_of_index(&self, mut index: usize) -> usize {
        let mut w = 0;
        for _ in 0..self.n {
            if index % self.q != 0 {
                w += 1;
            }
            index /= self.q;
        }
        w
    }
}

impl fmt::Display for GridSig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]^{}", self.q, self.n)
    }
}

/// An n-tuple over `[q]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(pub Vec<u8>);

impl Point {
    pub fn new(coords: impl Into<Vec<u8>>) -> Self {
        Point(coords.into())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coords(&self) -> &[u8] {
        &self.0
    }

    /// Number of nonzero coordinates.
    pub fn weight(&self) -> usize {
        weight(&self.0)
    }
}

impl From<Vec<u8>> for Point {
    fn from(v: Vec<u8>) -> Self {
        Point(v)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Number of nonzero coordinates of `x`.
pub fn weight(x: &[u8]) -> usize {
    x.iter().filter(|&&c| c != 0).count()
}

/// Binomial coefficient; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

fn check_radius(q: usize, n: usize, r: i64) -> Result<()> {
    if q < 2 || n < 1 {
        return Err(Error::InvalidParameter(format!("need q >= 2 and n >= 1, got q={q}, n={n}")));
    }
    if r < -1 || r > n as i64 {
        return Err(Error::InvalidParameter(format!("radius {r} outside -1..={n}")));
    }
    Ok(())
}

fn pow_u128(q: usize, n: usize) -> Result<u128> {
    (q as u128).checked_pow(n as u32).ok_or_else(|| Error::InvalidParameter(format!("{q}^{n} overflows")))
}

/// `|S(q,n,r)|`: the number of points of `[q]^n` with at most `r` nonzero
/// coordinates. `r = -1` gives the empty ball.
pub fn ball_count(q: usize, n: usize, r: i64) -> Result<u128> {
    check_radius(q, n, r)?;
    pow_u128(q, n)?;
    let mut total: u128 = 0;
    for i in 0..=r.max(-1) {
        let i = i as u64;
        total += binomial(n as u64, i) * ((q - 1) as u128).pow(i as u32);
    }
    Ok(total)
}

/// `sigma(q,n,r) = q^n - |S(q,n,r)|`.
pub fn sigma(q: usize, n: usize, r: i64) -> Result<u128> {
    let ball = ball_count(q, n, r)?;
    Ok(pow_u128(q, n)? - ball)
}
