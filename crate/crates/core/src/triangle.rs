//! Exact binomial coefficients backed by a shared, append-only row cache.
//!
//! Rows are generated with the additive recurrence `C(m,j) = C(m-1,j-1) + C(m-1,j)`
//! and published behind an `Arc`, so readers never observe a partially built row.
//! Out-of-triangle cells follow the extended convention `C(n,k) = 0` whenever
//! `k < 0`, `k > n`, or `n < 0`, which keeps every open-ended lattice sum finite.

use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Largest row index the cache will materialize. Row storage grows with the
/// cube of the row index (row `m` holds `m+1` values of roughly `m` bits
/// each), so this bound keeps a fully populated cache in the low gigabytes.
pub const MAX_SUPPORTED_ROW: u32 = 4096;

/// A (possibly out-of-range) cell address in the triangle.
///
/// No range restriction applies at the type level; a cell is *in-triangle*
/// exactly when `0 <= k <= n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CellIndex {
    pub n: i64,
    pub k: i64,
}

impl CellIndex {
    pub fn new(n: i64, k: i64) -> Self {
        CellIndex { n, k }
    }

    /// True when `0 <= k <= n`.
    pub fn in_triangle(&self) -> bool {
        0 <= self.k && self.k <= self.n
    }
}

impl std::fmt::Display for CellIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.n, self.k)
    }
}

/// Shared cache of fully built triangle rows.
///
/// One writer may extend the cache while any number of readers use rows that
/// are already published; published rows are immutable.
pub struct TriangleCache {
    rows: RwLock<Vec<Arc<Vec<BigInt>>>>,
}

impl TriangleCache {
    pub fn new() -> Self {
        TriangleCache {
            rows: RwLock::new(vec![Arc::new(vec![BigInt::one()])]),
        }
    }

    /// Number of rows currently published (the high-water row index plus one).
    pub fn cached_rows(&self) -> usize {
        self.rows.read().unwrap().len()
    }

    /// Builds and publishes all rows up to and including `n`.
    pub fn prewarm(&self, n: u32) {
        let _ = self.row(n);
    }

    /// Returns row `n`, `[C(n,0), ..., C(n,n)]`, extending the cache if needed.
    ///
    /// Panics if `n` exceeds [`MAX_SUPPORTED_ROW`].
    pub fn row(&self, n: u32) -> Arc<Vec<BigInt>> {
        assert!(
            n <= MAX_SUPPORTED_ROW,
            "row {n} exceeds the supported maximum of {MAX_SUPPORTED_ROW}"
        );
        let n = n as usize;
        {
            let rows = self.rows.read().unwrap();
            if let Some(row) = rows.get(n) {
                return Arc::clone(row);
            }
        }
        let mut rows = self.rows.write().unwrap();
        while rows.len() <= n {
            let next = next_row(rows.last().expect("cache holds at least row 0"));
            rows.push(Arc::new(next));
        }
        Arc::clone(&rows[n])
    }

    /// `C(n,k)` under the extended zero convention: any integer pair is
    /// accepted, and out-of-triangle cells evaluate to zero.
    pub fn binomial(&self, cell: CellIndex) -> BigInt {
        if !cell.in_triangle() {
            return BigInt::zero();
        }
        let n = u32::try_from(cell.n).expect("in-triangle row index fits u32");
        self.row(n)[cell.k as usize].clone()
    }
}

impl Default for TriangleCache {
    fn default() -> Self {
        Self::new()
    }
}

fn next_row(prev: &[BigInt]) -> Vec<BigInt> {
    let mut row = Vec::with_capacity(prev.len() + 1);
    row.push(BigInt::one());
    for pair in prev.windows(2) {
        row.push(&pair[0] + &pair[1]);
    }
    row.push(BigInt::one());
    row
}

/// Worker-local mirror of the shared cache.
///
/// Each lookup past the mirrored prefix takes the shared lock once per new
/// row; after that, reads are lock-free. Mirrors are how parallel workers
/// satisfy the "readers of already-published rows" contract.
pub struct RowMirror<'a> {
    shared: &'a TriangleCache,
    rows: Vec<Arc<Vec<BigInt>>>,
}

impl<'a> RowMirror<'a> {
    pub fn new(shared: &'a TriangleCache) -> Self {
        RowMirror {
            shared,
            rows: Vec::new(),
        }
    }

    pub fn row(&mut self, n: u32) -> &[BigInt] {
        let n = n as usize;
        while self.rows.len() <= n {
            let next = self.shared.row(self.rows.len() as u32);
            self.rows.push(next);
        }
        &self.rows[n]
    }
}

/// The Fibonacci numbers `u_0 = u_1 = 1`, `u_{m+2} = u_{m+1} + u_m`.
pub fn fibonacci(n: u32) -> BigInt {
    let mut a = BigInt::one();
    let mut b = BigInt::one();
    for _ in 0..n {
        let next = &a + &b;
        a = b;
        b = next;
    }
    a
}

/// `2^n`, exactly.
pub fn pow2(n: u32) -> BigInt {
    BigInt::one() << (n as usize)
}
