//! Range verification of identities and recurrences over triangular regions.
//!
//! All checks collect every counterexample rather than failing fast, keep
//! row-major `(n, k)` order in reports, and produce identical output for any
//! worker count.

use std::time::Instant;

use num_bigint::BigInt;
use serde::Serialize;

use crate::dsl::{EvalError, Evaluator, Identity};
use crate::sums::CorrectionTable;
use crate::triangle::TriangleCache;

/// The triangular region `{(n, k) : 0 <= k <= n <= n_max}`, iterated
/// row-major: `n` ascending, then `k` ascending.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Region {
    pub n_max: u32,
}

impl Region {
    pub fn new(n_max: u32) -> Self {
        Region { n_max }
    }

    /// `(n_max+1)(n_max+2)/2`.
    pub fn cell_count(&self) -> u64 {
        let n = self.n_max as u64;
        (n + 1) * (n + 2) / 2
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Verified,
    Failed,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Verified => write!(f, "VERIFIED"),
            Verdict::Failed => write!(f, "FAILED"),
        }
    }
}

/// A cell where the two sides disagree, with both exact values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub n: u32,
    pub k: u32,
    pub lhs: BigInt,
    pub rhs: BigInt,
}

/// Outcome of verifying one identity or recurrence over a region.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityReport {
    pub identity_text: String,
    pub n_max: u32,
    pub cells_checked: u64,
    pub counterexamples: Vec<Counterexample>,
    pub elapsed_ms: u64,
    pub verdict: Verdict,
}

impl IdentityReport {
    fn new(
        identity_text: String,
        n_max: u32,
        cells_checked: u64,
        mut counterexamples: Vec<Counterexample>,
        started: Instant,
    ) -> Self {
        counterexamples.sort_by_key(|c| (c.n, c.k));
        let verdict = if counterexamples.is_empty() {
            Verdict::Verified
        } else {
            Verdict::Failed
        };
        IdentityReport {
            identity_text,
            n_max,
            cells_checked,
            counterexamples,
            elapsed_ms: started.elapsed().as_millis() as u64,
            verdict,
        }
    }

    pub fn verified(&self) -> bool {
        self.verdict == Verdict::Verified
    }

    /// JSON form with big values as decimal strings.
    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct CxJson {
            n: u32,
            k: u32,
            lhs: String,
            rhs: String,
        }
        #[derive(Serialize)]
        struct ReportJson<'a> {
            identity: &'a str,
            n_max: u32,
            cells_checked: u64,
            verdict: String,
            counterexamples: Vec<CxJson>,
            elapsed_ms: u64,
        }
        let report = ReportJson {
            identity: &self.identity_text,
            n_max: self.n_max,
            cells_checked: self.cells_checked,
            verdict: self.verdict.to_string(),
            counterexamples: self
                .counterexamples
                .iter()
                .map(|c| CxJson {
                    n: c.n,
                    k: c.k,
                    lhs: c.lhs.to_string(),
                    rhs: c.rhs.to_string(),
                })
                .collect(),
            elapsed_ms: self.elapsed_ms,
        };
        serde_json::to_value(report).expect("report serialization cannot fail")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VerifyError {
    /// Evaluation failed at a cell; carries the offending cell.
    Eval { n: i64, k: i64, source: EvalError },
    /// The induction checker needs an identity over both `n` and `k`.
    TwoParameterRequired { missing: &'static str },
}

impl std::fmt::Display for VerifyError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            VerifyError::Eval { n, k, source } => {
                write!(f, "evaluation failed at cell ({n}, {k}): {source}")
            }
            VerifyError::TwoParameterRequired { missing } => write!(
                f,
                "induction checking requires an identity over both n and k (`{missing}` is never used)"
            ),
        }
    }
}

impl std::error::Error for VerifyError {}

/// Worker count and `eps` table for a verification run.
#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub jobs: usize,
    pub correction: CorrectionTable,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            jobs: 1,
            correction: CorrectionTable::THEOREM,
        }
    }
}

impl VerifyOptions {
    pub fn with_jobs(jobs: usize) -> Self {
        VerifyOptions {
            jobs,
            ..Default::default()
        }
    }
}

/// Scans rows `first_row ..= n_max`, cell by cell, optionally striping rows
/// across workers. Workers only ever read published cache rows; results are
/// merged and sorted, so the report does not depend on the worker count.
fn scan_cells<Ctx, New, Cell>(
    first_row: u32,
    n_max: u32,
    jobs: usize,
    new_ctx: New,
    cell: Cell,
) -> Result<(u64, Vec<Counterexample>), VerifyError>
where
    New: Fn() -> Ctx + Sync,
    Cell: Fn(&mut Ctx, u32, u32) -> Result<Option<Counterexample>, EvalError> + Sync,
{
    let scan_stripe =
        |stripe: usize, stride: usize| -> Result<(u64, Vec<Counterexample>), VerifyError> {
            let mut ctx = new_ctx();
            let mut found = Vec::new();
            let mut cells = 0u64;
            let mut row = first_row as u64 + stripe as u64;
            while row <= n_max as u64 {
                let n = row as u32;
                for k in 0..=n {
                    cells += 1;
                    match cell(&mut ctx, n, k) {
                        Ok(Some(cx)) => found.push(cx),
                        Ok(None) => {}
                        Err(source) => {
                            return Err(VerifyError::Eval {
                                n: n as i64,
                                k: k as i64,
                                source,
                            })
                        }
                    }
                }
                row += stride as u64;
            }
            Ok((cells, found))
        };

    let jobs = jobs.max(1);
    if jobs == 1 {
        return scan_stripe(0, 1);
    }

    let outcomes: Vec<_> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..jobs)
            .map(|stripe| scope.spawn(move || scan_stripe(stripe, jobs)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("verifier worker panicked"))
            .collect()
    });

    // Keep the row-major-first error so parallel runs fail identically.
    let mut first_error: Option<VerifyError> = None;
    let mut cells = 0u64;
    let mut found = Vec::new();
    for outcome in outcomes {
        match outcome {
            Ok((c, mut cxs)) => {
                cells += c;
                found.append(&mut cxs);
            }
            Err(err) => {
                let key = |e: &VerifyError| match e {
                    VerifyError::Eval { n, k, .. } => (*n, *k),
                    _ => (i64::MAX, i64::MAX),
                };
                if first_error.as_ref().map(key) > Some(key(&err)) || first_error.is_none() {
                    first_error = Some(err);
                }
            }
        }
    }
    if let Some(err) = first_error {
        return Err(err);
    }
    Ok((cells, found))
}

/// Evaluates both sides of `identity` at every cell of `region` and collects
/// all counterexamples.
pub fn check_identity(
    cache: &TriangleCache,
    identity: &Identity,
    region: Region,
    opts: &VerifyOptions,
) -> Result<IdentityReport, VerifyError> {
    let started = Instant::now();
    let (cells, counterexamples) = scan_cells(
        0,
        region.n_max,
        opts.jobs,
        || Evaluator::with_correction(cache, opts.correction),
        |evaluator, n, k| {
            let lhs = evaluator.evaluate(&identity.lhs, Some(n as i64), Some(k as i64))?;
            let rhs = evaluator.evaluate(&identity.rhs, Some(n as i64), Some(k as i64))?;
            if lhs == rhs {
                Ok(None)
            } else {
                Ok(Some(Counterexample { n, k, lhs, rhs }))
            }
        },
    )?;
    Ok(IdentityReport::new(
        identity.to_string(),
        region.n_max,
        cells,
        counterexamples,
        started,
    ))
}

/// Checks `f(n,k) = f(n-1,k) + f(n-1,k-1) + c*[n = 2k]` for every cell of
/// the region with `n >= 1`, where `c = on_line_correction`.
///
/// `f` must be total on the cells it is asked about: the region itself plus
/// the out-of-triangle neighbours `(n-1, -1)` and `(n-1, n)`, which callers
/// usually map to zero (see [`zero_extended`]).
pub fn check_pascal_recurrence<F>(
    f: F,
    label: &str,
    region: Region,
    on_line_correction: i64,
    jobs: usize,
) -> Result<IdentityReport, VerifyError>
where
    F: Fn(i64, i64) -> Result<BigInt, EvalError> + Sync,
{
    let started = Instant::now();
    let text =
        format!("{label}(n,k) == {label}(n-1,k) + {label}(n-1,k-1) + {on_line_correction}*[n=2k]");
    let (cells, counterexamples) = scan_cells(
        1,
        region.n_max,
        jobs,
        || (),
        |_, n, k| {
            let n = n as i64;
            let k = k as i64;
            let lhs = f(n, k)?;
            let mut rhs = f(n - 1, k)? + f(n - 1, k - 1)?;
            if n == 2 * k {
                rhs += on_line_correction;
            }
            if lhs == rhs {
                Ok(None)
            } else {
                Ok(Some(Counterexample {
                    n: n as u32,
                    k: k as u32,
                    lhs,
                    rhs,
                }))
            }
        },
    )?;
    Ok(IdentityReport::new(
        text,
        region.n_max,
        cells,
        counterexamples,
        started,
    ))
}

/// Adapts an in-triangle cell function to the whole lattice by mapping
/// out-of-triangle cells to zero.
pub fn zero_extended<F>(f: F) -> impl Fn(i64, i64) -> Result<BigInt, EvalError> + Sync
where
    F: Fn(u32, u32) -> BigInt + Sync,
{
    use num_traits::Zero;
    move |n, k| {
        if k < 0 || n < 0 || k > n {
            Ok(BigInt::zero())
        } else {
            Ok(f(n as u32, k as u32))
        }
    }
}

/// Mechanical replay of the induction argument for a two-parameter identity:
///
/// 1. base columns: `lhs = rhs` at `(n, 0)` and `(n, n)` for all `n <= n_max`;
/// 2. both sides satisfy the corrected recurrence
///    `f(n,k) = f(n-1,k) + f(n-1,k-1) + [n = 2k]` on the region, with sides
///    evaluated literally at the out-of-triangle neighbours `k = -1`, `k = n`;
/// 3. cross-check: the identity itself holds at every cell.
///
/// (1) and (2) together already imply (3) cell by cell, which is why the
/// finite check certifies the whole region; the cross-check guards the
/// checker itself. `cells_checked` totals all four passes.
pub fn inductive_proof_check(
    cache: &TriangleCache,
    identity: &Identity,
    n_max: u32,
    opts: &VerifyOptions,
) -> Result<IdentityReport, VerifyError> {
    let started = Instant::now();
    let free = identity.free_params();
    if !free.uses_n {
        return Err(VerifyError::TwoParameterRequired { missing: "n" });
    }
    if !free.uses_k {
        return Err(VerifyError::TwoParameterRequired { missing: "k" });
    }

    // Memoized literal values of one side at all cells (n, k) with
    // 0 <= n <= n_max and -1 <= k <= n+1; index k+1 within a row.
    let side_grid = |side: &crate::dsl::SumExpr| -> Result<Vec<Vec<BigInt>>, VerifyError> {
        let mut evaluator = Evaluator::with_correction(cache, opts.correction);
        let mut grid = Vec::with_capacity(n_max as usize + 1);
        for n in 0..=n_max as i64 {
            let mut row = Vec::with_capacity(n as usize + 3);
            for k in -1..=n + 1 {
                let value = evaluator
                    .evaluate(side, Some(n), Some(k))
                    .map_err(|source| VerifyError::Eval { n, k, source })?;
                row.push(value);
            }
            grid.push(row);
        }
        Ok(grid)
    };
    let lhs = side_grid(&identity.lhs)?;
    let rhs = side_grid(&identity.rhs)?;
    let at = |grid: &[Vec<BigInt>], n: u32, k: i64| -> BigInt {
        grid[n as usize][(k + 1) as usize].clone()
    };

    let mut cells = 0u64;
    let mut counterexamples: Vec<(u8, Counterexample)> = Vec::new();

    // Base columns k = 0 and k = n.
    for n in 0..=n_max {
        for k in [0, n as i64] {
            if n > 0 || k == 0 {
                cells += 1;
                let l = at(&lhs, n, k);
                let r = at(&rhs, n, k);
                if l != r {
                    counterexamples.push((
                        0,
                        Counterexample {
                            n,
                            k: k as u32,
                            lhs: l,
                            rhs: r,
                        },
                    ));
                }
            }
        }
    }

    // Corrected Pascal recurrence for each side independently.
    for (phase, grid) in [(1u8, &lhs), (2u8, &rhs)] {
        for n in 1..=n_max {
            for k in 0..=n as i64 {
                cells += 1;
                let value = at(grid, n, k);
                let mut recurrence = at(grid, n - 1, k) + at(grid, n - 1, k - 1);
                if n as i64 == 2 * k {
                    recurrence += 1;
                }
                if value != recurrence {
                    counterexamples.push((
                        phase,
                        Counterexample {
                            n,
                            k: k as u32,
                            lhs: value,
                            rhs: recurrence,
                        },
                    ));
                }
            }
        }
    }

    // Cross-check the identity itself on the region.
    for n in 0..=n_max {
        for k in 0..=n as i64 {
            cells += 1;
            let l = at(&lhs, n, k);
            let r = at(&rhs, n, k);
            if l != r {
                counterexamples.push((
                    3,
                    Counterexample {
                        n,
                        k: k as u32,
                        lhs: l,
                        rhs: r,
                    },
                ));
            }
        }
    }

    counterexamples.sort_by(|(pa, a), (pb, b)| (a.n, a.k, pa).cmp(&(b.n, b.k, pb)));
    let mut merged: Vec<Counterexample> = Vec::new();
    for (_, cx) in counterexamples {
        if merged.last().map(|prev| (prev.n, prev.k)) != Some((cx.n, cx.k)) {
            merged.push(cx);
        }
    }

    Ok(IdentityReport::new(
        identity.to_string(),
        n_max,
        cells,
        merged,
        started,
    ))
}
