use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::binomial;

/// Boundary data `C(2, n)` and `C(n, n)` for the Pascal-type recursion
/// `C(k, n) = C(k, n-1) + C(k-1, n-1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Boundary {
    /// `C(2,n) = n(n-1)/2`, `C(n,n) = 1`.
    Binomial,
    /// `C(2,n) = n+1`, `C(n,n) = 2^n - 1`.
    Ball,
    /// `C(2,n) = ceil(log2(n+1)) + 1`, `C(n,n) = 2^n - 1`.
    Hamming,
}

impl Boundary {
    pub const ALL: [Boundary; 3] = [Boundary::Binomial, Boundary::Ball, Boundary::Hamming];

    pub fn row_two(self, n: usize) -> u128 {
        let n = n as u128;
        match self {
            Boundary::Binomial => n * (n - 1) / 2,
            Boundary::Ball => n + 1,
            Boundary::Hamming => ceil_log2(n + 1) + 1,
        }
    }

    pub fn diagonal(self, n: usize) -> u128 {
        match self {
            Boundary::Binomial => 1,
            Boundary::Ball | Boundary::Hamming => (1u128 << n) - 1,
        }
    }
}

fn ceil_log2(x: u128) -> u128 {
    (128 - (x - 1).leading_zeros()) as u128
}

fn check_range(k: usize, n: usize) -> Result<()> {
    if k < 2 || k > n || n > 120 {
        return Err(Error::InvalidParameter(format!("need 2 <= k <= n <= 120, got k={k}, n={n}")));
    }
    Ok(())
}

/// Memoized values of the recursion for arbitrary boundary functions.
pub struct PascalTable<A, B> {
    row_two: A,
    diagonal: B,
    memo: HashMap<(usize, usize), u128>,
}

impl<A: Fn(usize) -> u128, B: Fn(usize) -> u128> PascalTable<A, B> {
    pub fn new(row_two: A, diagonal: B) -> Self {
        PascalTable { row_two, diagonal, memo: HashMap::new() }
    }

    pub fn get(&mut self, k: usize, n: usize) -> Result<u128> {
        check_range(k, n)?;
        Ok(self.value(k, n))
    }

    fn value(&mut self, k: usize, n: usize) -> u128 {
        if k == 2 {
            return (self.row_two)(n);
        }
        if k == n {
            return (self.diagonal)(n);
        }
        if let Some(&v) = self.memo.get(&(k, n)) {
            return v;
        }
        let v = self.value(k, n - 1) + self.value(k - 1, n - 1);
        self.memo.insert((k, n), v);
        v
    }
}

/// `C(k, n)` under one of the named boundaries.
pub fn pascal_eval(boundary: Boundary, k: usize, n: usize) -> Result<u128> {
    PascalTable::new(|n| boundary.row_two(n), |n| boundary.diagonal(n)).get(k, n)
}

/// `binom(a, b)` with `binom(a, 0) = 1` for every `a` and zero when `b < 0`
/// or `a < b`.
fn binom_ext(a: i64, b: i64) -> u128 {
    match (a, b) {
        (_, 0) => 1,
        (_, b) if b < 0 => 0,
        (a, b) if a < b => 0,
        (a, b) => binomial(a as u64, b as u64),
    }
}

/// `C(k, n)` expanded in boundary values:
/// `sum_{t<=k-3} binom(n-k-1+t, t) C(k-t, k-t) + sum_{t<=n-k-1} binom(k+t-3, t) C(2, n-k-t+2)`.
/// Row `k = 2` is returned as the boundary itself.
pub fn eq1_closed_form(boundary: Boundary, k: usize, n: usize) -> Result<u128> {
    check_range(k, n)?;
    if k == 2 {
        return Ok(boundary.row_two(n));
    }
    let (k, n) = (k as i64, n as i64);
    let diag: u128 = (0..=k - 3).map(|t| binom_ext(n - k - 1 + t, t) * boundary.diagonal((k - t) as usize)).sum();
    let row: u128 = (0..n - k).map(|t| binom_ext(k + t - 3, t) * boundary.row_two((n - k - t + 2) as usize)).sum();
    Ok(diag + row)
}

/// Closed form agrees with the recursion.
pub fn eq1_check(boundary: Boundary, k: usize, n: usize) -> Result<bool> {
    Ok(eq1_closed_form(boundary, k, n)? == pascal_eval(boundary, k, n)?)
}

/// Size of the recursive supertesting set for `F_k^n(2; .)`, from the
/// double-sum formula. Row `k = 2` is the Hamming boundary itself.
pub fn q22_size_formula(n: usize, k: usize) -> Result<u128> {
    check_range(k, n)?;
    if k == 2 {
        return Ok(Boundary::Hamming.row_two(n));
    }
    let (k, n) = (k as i64, n as i64);
    let diag: u128 = (0..=k - 3).map(|t| binom_ext(n - k - 1 + t, t) * ((1u128 << (k - t)) - 1)).sum();
    let row: u128 = (0..n - k).map(|t| binom_ext(k + t - 3, t) * (ceil_log2((n - k - t + 3) as u128) + 1)).sum();
    Ok(diag + row)
}

/// `sigma(2, n, n-k)` minus the recursive set size, as a single sum.
pub fn q22_delta_formula(n: usize, k: usize) -> Result<u128> {
    check_range(k, n)?;
    let (k, n) = (k as i64, n as i64);
    Ok((0..n - k)
        .map(|t| binom_ext(k + t - 3, t) * ((n - k - t + 2) as u128 - ceil_log2((n - k - t + 3) as u128)))
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{ball_count, sigma};

    #[test]
    fn log_helper() {
        let expect = [(1, 0), (2, 1), (3, 2), (4, 2), (5, 3), (8, 3), (9, 4)];
        for (x, l) in expect {
            assert_eq!(ceil_log2(x), l, "{x}");
        }
    }

    #[test]
    fn binomial_boundary_gives_binomials() {
        for n in 2..=20 {
            for k in 2..=n {
                assert_eq!(pascal_eval(Boundary::Binomial, k, n).unwrap(), binomial(n as u64, k as u64));
            }
        }
    }

    #[test]
    fn ball_boundary_gives_balls() {
        for n in 2..=16 {
            for k in 2..=n {
                let ball = ball_count(2, n, k as i64 - 1).unwrap();
                assert_eq!(pascal_eval(Boundary::Ball, k, n).unwrap(), ball);
                assert_eq!(ball, sigma(2, n, (n - k) as i64).unwrap());
            }
        }
    }

    #[test]
    fn closed_form_matches_recursion() {
        for b in Boundary::ALL {
            for n in 2..=14 {
                for k in 2..=n {
                    assert!(eq1_check(b, k, n).unwrap(), "{b:?} k={k} n={n}");
                }
            }
        }
    }

    #[test]
    fn hamming_formulas() {
        for n in 2..=14 {
            for k in 2..=n {
                let c = pascal_eval(Boundary::Hamming, k, n).unwrap();
                assert_eq!(q22_size_formula(n, k).unwrap(), c);
                let s = sigma(2, n, (n - k) as i64).unwrap();
                assert_eq!(q22_delta_formula(n, k).unwrap(), s - c, "n={n} k={k}");
            }
        }
        assert_eq!(pascal_eval(Boundary::Hamming, 3, 5).unwrap(), 14);
        assert_eq!(pascal_eval(Boundary::Hamming, 3, 4).unwrap(), 10);
        assert_eq!(pascal_eval(Boundary::Hamming, 2, 7).unwrap(), 4);
    }

    #[test]
    fn custom_table() {
        let mut t = PascalTable::new(|_| 1, |_| 1);
        assert_eq!(t.get(3, 5).unwrap(), 3);
        assert!(t.get(1, 5).is_err());
        assert!(t.get(6, 5).is_err());
    }
}
