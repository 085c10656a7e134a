//! Direct evaluators for the triangle's additive lattice sums.
//!
//! Each sum is written with an explicit term index `j` and relies on the
//! extended zero convention for termination, so all of them are total over
//! their stated domains. Binomials come from the shared row cache.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::triangle::TriangleCache;

/// Error for operations restricted to in-triangle cells (`0 <= k <= n`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OutOfTriangle {
    pub n: u32,
    pub k: u32,
}

impl std::fmt::Display for OutOfTriangle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "cell ({}, {}) is outside the triangle (need k <= n)",
            self.n, self.k
        )
    }
}

impl std::error::Error for OutOfTriangle {}

fn require_in_triangle(n: u32, k: u32) -> Result<(), OutOfTriangle> {
    if k <= n {
        Ok(())
    } else {
        Err(OutOfTriangle { n, k })
    }
}

/// Sum along the `n`-th horizontal line: `C(n,0) + C(n,1) + ... + C(n,n)`.
///
/// Equals `2^n`.
pub fn horizontal_sum(cache: &TriangleCache, n: u32) -> BigInt {
    cache.row(n).iter().sum()
}

/// Sum down the `k`-th diagonal up to row `n`: `C(k,k) + C(k+1,k) + ... + C(n,k)`.
///
/// Equals `C(n+1, k+1)` (the next number in the next diagonal).
pub fn hockey_stick_sum(cache: &TriangleCache, n: u32, k: u32) -> Result<BigInt, OutOfTriangle> {
    require_in_triangle(n, k)?;
    let mut acc = BigInt::zero();
    for m in k..=n {
        acc += &cache.row(m)[k as usize];
    }
    Ok(acc)
}

/// Sum along the `n`-th slope-1/3 diagonal: `C(n,0) + C(n-1,1) + C(n-2,2) + ...`.
///
/// Equals the Fibonacci number `u_n` (with `u_0 = u_1 = 1`).
pub fn shallow_diagonal_sum(cache: &TriangleCache, n: u32) -> BigInt {
    let mut acc = BigInt::zero();
    let mut j = 0;
    while 2 * j <= n {
        acc += &cache.row(n - j)[j as usize];
        j += 1;
    }
    acc
}

/// Sum along the vertical line through `(n,k)`, upward:
/// `C(n,k) + C(n-2,k-1) + C(n-4,k-2) + ...` (term `j` is `C(n-2j, k-j)`).
///
/// Terms vanish once `k-j < 0` or `k-j > n-2j`, so the effective range is
/// `j = 0 ..= min(k, n-k)`.
pub fn vertical_partial_sum(
    cache: &TriangleCache,
    n: u32,
    k: u32,
) -> Result<BigInt, OutOfTriangle> {
    require_in_triangle(n, k)?;
    let mut acc = BigInt::zero();
    for j in 0..=k.min(n - k) {
        acc += &cache.row(n - 2 * j)[(k - j) as usize];
    }
    Ok(acc)
}

/// Alternated sum along the next slope-1/3 diagonal, starting from the
/// closest number: `C(n+1,k+1) - C(n,k+2) + C(n-1,k+3) - ...` (term `j` is
/// `(-1)^j C(n+1-j, k+1+j)`).
///
/// Terms vanish for `j > (n-k)/2`.
pub fn alternating_diagonal_sum(
    cache: &TriangleCache,
    n: u32,
    k: u32,
) -> Result<BigInt, OutOfTriangle> {
    require_in_triangle(n, k)?;
    let mut acc = BigInt::zero();
    for j in 0..=(n - k) / 2 {
        let term = &cache.row(n + 1 - j)[(k + 1 + j) as usize];
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Ok(acc)
}

/// Residue classification of `d = n - 2k` that drives the correction term.
///
/// `d <= 0` never carries a correction; positive `d` is classified by its
/// residue mod 6 (the parameter `p` of the case table enters through
/// `d = 6p, 6p±1, 6p±2, 6p+3`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CorrectionClass {
    /// `d <= 0`.
    NonPositive,
    /// `d > 0` with `d ≡ 0, 3 (mod 6)`.
    ZeroResidue,
    /// `d > 0` with `d ≡ 1, 2 (mod 6)`.
    MinusOne,
    /// `d > 0` with `d ≡ 4, 5 (mod 6)` (i.e. `6p-2, 6p-1`).
    PlusOne,
}

impl CorrectionClass {
    pub fn of(d: i64) -> Self {
        if d <= 0 {
            return CorrectionClass::NonPositive;
        }
        match d % 6 {
            0 | 3 => CorrectionClass::ZeroResidue,
            1 | 2 => CorrectionClass::MinusOne,
            4 | 5 => CorrectionClass::PlusOne,
            _ => unreachable!("residue of a positive integer mod 6"),
        }
    }
}

/// The `{-1, 0, +1}` value each correction class maps to.
///
/// The default table is the one the theorem states. Mutated tables exist so
/// sensitivity tests can flip a single class and watch verification fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CorrectionTable {
    pub non_positive: i64,
    pub zero_residue: i64,
    pub minus_one: i64,
    pub plus_one: i64,
}

impl CorrectionTable {
    pub const THEOREM: CorrectionTable = CorrectionTable {
        non_positive: 0,
        zero_residue: 0,
        minus_one: -1,
        plus_one: 1,
    };

    /// Table with every entry negated.
    pub fn negated(self) -> CorrectionTable {
        CorrectionTable {
            non_positive: -self.non_positive,
            zero_residue: -self.zero_residue,
            minus_one: -self.minus_one,
            plus_one: -self.plus_one,
        }
    }

    pub fn apply(&self, d: i64) -> i64 {
        match CorrectionClass::of(d) {
            CorrectionClass::NonPositive => self.non_positive,
            CorrectionClass::ZeroResidue => self.zero_residue,
            CorrectionClass::MinusOne => self.minus_one,
            CorrectionClass::PlusOne => self.plus_one,
        }
    }
}

impl Default for CorrectionTable {
    fn default() -> Self {
        CorrectionTable::THEOREM
    }
}

/// The theorem's correction term for `d = n - 2k`: `0` for `d <= 0`, and for
/// `d > 0` it is `0` when `d ≡ 0,3`, `-1` when `d ≡ 1,2`, `+1` when
/// `d ≡ 4,5` (mod 6).
pub fn correction_term(d: i64) -> i64 {
    CorrectionTable::THEOREM.apply(d)
}

/// Right-hand side of the theorem: the alternated diagonal sum plus the
/// correction term for `d = n - 2k`.
pub fn theorem_rhs(cache: &TriangleCache, n: u32, k: u32) -> Result<BigInt, OutOfTriangle> {
    let alt = alternating_diagonal_sum(cache, n, k)?;
    Ok(alt + correction_term(n as i64 - 2 * k as i64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn horizontal_sums() {
        let cache = TriangleCache::new();
        assert_eq!(horizontal_sum(&cache, 0), big(1));
        assert_eq!(horizontal_sum(&cache, 5), big(32));
        assert_eq!(horizontal_sum(&cache, 8), big(256));
    }

    #[test]
    fn hockey_stick_values() {
        let cache = TriangleCache::new();
        // 1 + 3 + 6 = C(5,3)
        assert_eq!(hockey_stick_sum(&cache, 4, 2).unwrap(), big(10));
        // 1 + 2 + 3 + 4 + 5 + 6 = C(7,2)
        assert_eq!(hockey_stick_sum(&cache, 6, 1).unwrap(), big(21));
        for k in 0..=9u32 {
            assert!(hockey_stick_sum(&cache, k, k).unwrap().is_one());
        }
        assert_eq!(
            hockey_stick_sum(&cache, 3, 5),
            Err(OutOfTriangle { n: 3, k: 5 })
        );
    }

    #[test]
    fn shallow_diagonal_values() {
        let cache = TriangleCache::new();
        assert_eq!(shallow_diagonal_sum(&cache, 0), big(1));
        // C(5,0) + C(4,1) + C(3,2) = 1 + 4 + 3
        assert_eq!(shallow_diagonal_sum(&cache, 5), big(8));
        // 1 + 5 + 6 + 1
        assert_eq!(shallow_diagonal_sum(&cache, 6), big(13));
    }

    #[test]
    fn vertical_partial_values() {
        let cache = TriangleCache::new();
        for n in 0..=12u32 {
            assert!(vertical_partial_sum(&cache, n, 0).unwrap().is_one());
        }
        // 15 + 4 + 1
        assert_eq!(vertical_partial_sum(&cache, 6, 2).unwrap(), big(20));
        // 6 + 2 + 1
        assert_eq!(vertical_partial_sum(&cache, 4, 2).unwrap(), big(9));
        // 2 + 1
        assert_eq!(vertical_partial_sum(&cache, 2, 1).unwrap(), big(3));
        assert!(vertical_partial_sum(&cache, 2, 3).is_err());
    }

    #[test]
    fn alternating_diagonal_values() {
        let cache = TriangleCache::new();
        for n in 0..=9u32 {
            assert!(alternating_diagonal_sum(&cache, n, n).unwrap().is_one());
        }
        // 35 - 15 + 1
        assert_eq!(alternating_diagonal_sum(&cache, 6, 2).unwrap(), big(21));
        // 20 - 5
        assert_eq!(alternating_diagonal_sum(&cache, 5, 2).unwrap(), big(15));
        assert!(alternating_diagonal_sum(&cache, 1, 4).is_err());
    }

    #[test]
    fn correction_term_case_table() {
        assert_eq!(correction_term(0), 0);
        assert_eq!(correction_term(-3), 0);
        assert_eq!(correction_term(1), -1);
        assert_eq!(correction_term(2), -1);
        assert_eq!(correction_term(4), 1);
        assert_eq!(correction_term(5), 1);
        assert_eq!(correction_term(6), 0);
        assert_eq!(correction_term(9), 0);
        // second period
        assert_eq!(correction_term(7), -1);
        assert_eq!(correction_term(10), 1);
        assert_eq!(correction_term(12), 0);
    }

    #[test]
    fn correction_classes() {
        assert_eq!(CorrectionClass::of(-5), CorrectionClass::NonPositive);
        assert_eq!(CorrectionClass::of(0), CorrectionClass::NonPositive);
        assert_eq!(CorrectionClass::of(3), CorrectionClass::ZeroResidue);
        assert_eq!(CorrectionClass::of(6), CorrectionClass::ZeroResidue);
        assert_eq!(CorrectionClass::of(8), CorrectionClass::MinusOne);
        assert_eq!(CorrectionClass::of(11), CorrectionClass::PlusOne);
    }

    #[test]
    fn theorem_rhs_values() {
        let cache = TriangleCache::new();
        // 21 - 1 (d = 2)
        assert_eq!(theorem_rhs(&cache, 6, 2).unwrap(), big(20));
        // 15 - 1 (d = 1)
        assert_eq!(theorem_rhs(&cache, 5, 2).unwrap(), big(14));
        // 9 + 0 (d = 0)
        assert_eq!(theorem_rhs(&cache, 4, 2).unwrap(), big(9));
        // 6 + 1 (d = 4)
        assert_eq!(theorem_rhs(&cache, 6, 1).unwrap(), big(7));
    }

    #[test]
    fn mutated_table_departs_from_theorem() {
        let cache = TriangleCache::new();
        let flipped = CorrectionTable {
            minus_one: 1,
            ..CorrectionTable::THEOREM
        };
        let alt = alternating_diagonal_sum(&cache, 1, 0).unwrap();
        let rhs = alt + flipped.apply(1);
        assert_eq!(rhs, big(3));
        assert_eq!(vertical_partial_sum(&cache, 1, 0).unwrap(), big(1));
    }
}
