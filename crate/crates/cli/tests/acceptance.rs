//! Acceptance suite: one test per shipped guarantee, each printing a
//! PASS line (run with `--nocapture` to see them). Expected values come
//! from brute-force oracles written directly in this file.

use std::process::Command;
use std::time::Instant;

use pascal_core::dsl::ast::{AffineExpr, SumExpr, Var, FIRST_INDEX_SLOT};
use pascal_core::dsl::{builtins, parse_expr, parse_identity, Evaluator};
use pascal_core::sums::{
    self, correction_term, hockey_stick_sum, horizontal_sum, shallow_diagonal_sum,
    vertical_partial_sum, CorrectionTable,
};
use pascal_core::verify::{
    check_identity, check_pascal_recurrence, inductive_proof_check, zero_extended, Region,
    VerifyOptions,
};
use pascal_core::{fibonacci, pow2, BigInt, CellIndex, TriangleCache};

fn pascal() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pascal"))
}

// ---------------------------------------------------------------------------
// Brute-force oracle, independent of the library's cache and summation code.

fn oracle_binom(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::from(0);
    }
    let mut acc = BigInt::from(1);
    for i in 1..=k {
        acc = acc * BigInt::from(n - k + i) / BigInt::from(i);
    }
    acc
}

fn oracle_vertical(n: i64, k: i64) -> BigInt {
    let mut acc = BigInt::from(0);
    for j in 0..=n.max(0) + k.max(0) + 2 {
        acc += oracle_binom(n - 2 * j, k - j);
    }
    acc
}

fn oracle_alternating(n: i64, k: i64) -> BigInt {
    let mut acc = BigInt::from(0);
    for j in 0..=n.max(0) + k.max(0) + 2 {
        let term = oracle_binom(n + 1 - j, k + 1 + j);
        acc += if j % 2 == 0 { term } else { -term };
    }
    acc
}

fn oracle_eps(d: i64) -> i64 {
    if d <= 0 {
        return 0;
    }
    match d % 6 {
        0 | 3 => 0,
        1 | 2 => -1,
        _ => 1,
    }
}

// ---------------------------------------------------------------------------

#[test]
fn criterion_01_theorem_reproduction_via_cli() {
    let dir = tempfile::tempdir().unwrap();
    let report_path = dir.path().join("theorem.json");
    let started = Instant::now();
    let output = pascal()
        .args(["verify", "theorem", "--n-max", "300", "--report"])
        .arg(&report_path)
        .output()
        .unwrap();
    let elapsed = started.elapsed();
    assert_eq!(
        output.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&output.stderr)
    );
    assert!(
        elapsed.as_secs_f64() < 10.0,
        "single-threaded verification took {elapsed:?}, budget is 10 s"
    );
    let reports: Vec<serde_json::Value> =
        serde_json::from_str(&std::fs::read_to_string(&report_path).unwrap()).unwrap();
    assert_eq!(reports.len(), 1);
    assert_eq!(reports[0]["cells_checked"], 45451);
    assert_eq!(reports[0]["verdict"], "VERIFIED");
    assert_eq!(reports[0]["counterexamples"].as_array().unwrap().len(), 0);
    println!(
        "criterion 1 PASS: verify theorem --n-max 300 checked 45451 cells, exit 0, in {:.2} s",
        elapsed.as_secs_f64()
    );
}

#[test]
fn criterion_02_horizontal_sums_equal_powers_of_two() {
    let cache = TriangleCache::new();
    for n in 0..=1000u32 {
        assert_eq!(horizontal_sum(&cache, n), pow2(n), "row {n}");
    }
    println!("criterion 2 PASS: horizontal_sum(n) == pow2(n) for all n <= 1000");
}

#[test]
fn criterion_03_hockey_stick_closed_form() {
    let cache = TriangleCache::new();
    for n in 0..=300u32 {
        for k in 0..=n {
            assert_eq!(
                hockey_stick_sum(&cache, n, k).unwrap(),
                cache.binomial(CellIndex::new(n as i64 + 1, k as i64 + 1)),
                "({n}, {k})"
            );
        }
    }
    println!("criterion 3 PASS: hockey_stick_sum(n,k) == C(n+1,k+1) for all 0 <= k <= n <= 300");
}

#[test]
fn criterion_04_shallow_diagonals_are_fibonacci() {
    let cache = TriangleCache::new();
    for n in 0..=500u32 {
        assert_eq!(
            shallow_diagonal_sum(&cache, n),
            fibonacci(n),
            "diagonal {n}"
        );
    }
    println!("criterion 4 PASS: shallow_diagonal_sum(n) == fibonacci(n) for all n <= 500");
}

#[test]
fn criterion_05_recurrence_needs_the_line_correction() {
    let cache = TriangleCache::new();
    let region = Region::new(200);
    let vertical = zero_extended(|n, k| vertical_partial_sum(&cache, n, k).unwrap());
    let rhs = zero_extended(|n, k| sums::theorem_rhs(&cache, n, k).unwrap());

    let ok = check_pascal_recurrence(&vertical, "V", region, 1, 1).unwrap();
    assert!(ok.verified(), "vertical with c=1");
    let ok = check_pascal_recurrence(&rhs, "R", region, 1, 1).unwrap();
    assert!(ok.verified(), "theorem rhs with c=1");

    for (label, f) in [
        ("vertical", &vertical as &(dyn Fn(i64, i64) -> _ + Sync)),
        ("theorem rhs", &rhs),
    ] {
        let bad = check_pascal_recurrence(f, "f", region, 0, 1).unwrap();
        assert!(!bad.verified(), "{label} with c=0 must fail");
        let first = &bad.counterexamples[0];
        assert_eq!(
            (first.n, first.k),
            (2, 1),
            "{label}: first counterexample cell"
        );
    }
    println!(
        "criterion 5 PASS: corrected recurrence verified to n_max=200 for both sides; \
         dropping the +1 fails first at (2, 1)"
    );
}

#[test]
fn criterion_06_induction_replay() {
    let cache = TriangleCache::new();
    let identity = parse_identity(builtins::THEOREM).unwrap();
    let report = inductive_proof_check(&cache, &identity, 200, &VerifyOptions::default()).unwrap();
    assert!(
        report.verified(),
        "first failure: {:?}",
        report.counterexamples.first()
    );
    println!(
        "criterion 6 PASS: induction replay (base columns, both corrected recurrences, \
         cross-check) verified to n_max=200 over {} cell checks",
        report.cells_checked
    );
}

#[test]
fn criterion_07_spot_values_against_oracle() {
    let cache = TriangleCache::new();
    let spots: [(i64, i64, i64, i64, i64); 4] = [
        (6, 2, 20, 21, -1),
        (6, 1, 7, 6, 1),
        (5, 2, 14, 15, -1),
        (4, 2, 9, 9, 0),
    ];
    for (n, k, v, a, e) in spots {
        let d = n - 2 * k;
        assert_eq!(oracle_vertical(n, k), BigInt::from(v), "oracle V({n},{k})");
        assert_eq!(
            oracle_alternating(n, k),
            BigInt::from(a),
            "oracle A({n},{k})"
        );
        assert_eq!(oracle_eps(d), e, "oracle eps({d})");
        assert_eq!(
            vertical_partial_sum(&cache, n as u32, k as u32).unwrap(),
            BigInt::from(v)
        );
        assert_eq!(
            sums::alternating_diagonal_sum(&cache, n as u32, k as u32).unwrap(),
            BigInt::from(a)
        );
        assert_eq!(correction_term(d), e);
    }
    println!("criterion 7 PASS: spot values V/A/eps match the brute-force oracle");
}

#[test]
fn criterion_08_correction_table_mutations_are_caught() {
    let cache = TriangleCache::new();
    let identity = parse_identity(builtins::THEOREM).unwrap();
    let region = Region::new(20);

    // First row-major cell whose correction value the mutation changes.
    let first_affected = |table: &CorrectionTable| -> (u32, u32) {
        for n in 0..=region.n_max {
            for k in 0..=n {
                let d = n as i64 - 2 * k as i64;
                if table.apply(d) != CorrectionTable::THEOREM.apply(d) {
                    return (n, k);
                }
            }
        }
        panic!("mutation affects no cell in the region");
    };

    let mut mutants: Vec<(&str, CorrectionTable)> =
        vec![("negated table", CorrectionTable::THEOREM.negated())];
    for value in [-1, 1] {
        mutants.push((
            "non-positive class",
            CorrectionTable {
                non_positive: value,
                ..CorrectionTable::THEOREM
            },
        ));
        mutants.push((
            "residue {0,3} class",
            CorrectionTable {
                zero_residue: value,
                ..CorrectionTable::THEOREM
            },
        ));
    }
    for value in [0, 1] {
        mutants.push((
            "residue {1,2} class",
            CorrectionTable {
                minus_one: value,
                ..CorrectionTable::THEOREM
            },
        ));
    }
    for value in [-1, 0] {
        mutants.push((
            "residue {4,5} class",
            CorrectionTable {
                plus_one: value,
                ..CorrectionTable::THEOREM
            },
        ));
    }

    for (label, table) in &mutants {
        let opts = VerifyOptions {
            jobs: 1,
            correction: *table,
        };
        let report = check_identity(&cache, &identity, region, &opts).unwrap();
        assert!(
            !report.verified(),
            "{label}: mutation must fail verification"
        );
        let expected = first_affected(table);
        let first = &report.counterexamples[0];
        assert_eq!(
            (first.n, first.k),
            expected,
            "{label}: first failing cell is the minimal affected cell"
        );
    }

    // The sign flip of the d = 1 residue class fails first at (1, 0).
    let flipped = CorrectionTable {
        minus_one: 1,
        ..CorrectionTable::THEOREM
    };
    let opts = VerifyOptions {
        jobs: 1,
        correction: flipped,
    };
    let report = check_identity(&cache, &identity, region, &opts).unwrap();
    let first = &report.counterexamples[0];
    assert_eq!((first.n, first.k), (1, 0));
    println!(
        "criterion 8 PASS: {} correction-table mutations all fail at their minimal affected cell",
        mutants.len()
    );
}

// ---------------------------------------------------------------------------
// Criterion 9: a seeded generator of well-formed ASTs.

struct AstGen {
    state: u64,
}

impl AstGen {
    fn next(&mut self) -> u64 {
        // xorshift64*
        self.state ^= self.state >> 12;
        self.state ^= self.state << 25;
        self.state ^= self.state >> 27;
        self.state.wrapping_mul(0x2545_F491_4F6C_DD1D)
    }

    fn below(&mut self, bound: u64) -> u64 {
        self.next() % bound
    }

    fn var(&mut self, depth: usize) -> Var {
        const NAMES: [&str; 6] = ["i", "j", "t", "u", "v", "w"];
        let slot = self.below((FIRST_INDEX_SLOT + depth) as u64) as usize;
        match slot {
            0 => Var::new("n", 0),
            1 => Var::new("k", 1),
            s => Var::new(NAMES[s - FIRST_INDEX_SLOT], s),
        }
    }

    fn affine(&mut self, depth: usize) -> AffineExpr {
        let mut affine = AffineExpr::constant(self.below(19) as i64 - 9);
        for _ in 0..self.below(3) {
            let coeff = self.below(9) as i64 - 4;
            if coeff != 0 {
                let var = self.var(depth);
                affine.add_term(coeff, var);
            }
        }
        affine
    }

    fn expr(&mut self, depth: usize, budget: u32) -> SumExpr {
        const NAMES: [&str; 6] = ["i", "j", "t", "u", "v", "w"];
        let choice = if budget == 0 {
            self.below(6)
        } else {
            self.below(11)
        };
        match choice {
            0 => SumExpr::Int(self.below(50) as i64),
            1 => SumExpr::Binomial(self.affine(depth), self.affine(depth)),
            2 => SumExpr::Fib(self.affine(depth)),
            3 => SumExpr::Pow2(self.affine(depth)),
            4 => SumExpr::Eps(self.affine(depth)),
            5 => {
                if depth == 0 {
                    SumExpr::Int(self.below(50) as i64)
                } else {
                    let d = self.below(depth as u64) as usize;
                    SumExpr::AltSign(Var::new(NAMES[d], FIRST_INDEX_SLOT + d))
                }
            }
            6 => self.expr(depth, budget - 1) + self.expr(depth, budget - 1),
            7 => self.expr(depth, budget - 1) - self.expr(depth, budget - 1),
            8 => self.expr(depth, budget - 1) * self.expr(depth, budget - 1),
            9 => -self.expr(depth, budget - 1),
            _ => {
                if depth >= NAMES.len() {
                    -self.expr(depth, budget - 1)
                } else {
                    let index = Var::new(NAMES[depth], FIRST_INDEX_SLOT + depth);
                    SumExpr::sum(index, self.expr(depth + 1, budget - 1))
                }
            }
        }
    }
}

#[test]
fn criterion_09_roundtrip_and_evaluator_equivalence() {
    let mut gen = AstGen {
        state: 0x9E37_79B9_7F4A_7C15,
    };
    for case in 0..100 {
        let ast = gen.expr(0, 3);
        let printed = ast.to_string();
        let reparsed = parse_expr(&printed)
            .unwrap_or_else(|e| panic!("case {case}: `{printed}` failed to parse: {e}"));
        assert_eq!(ast, reparsed, "case {case}: `{printed}`");
    }

    let cache = TriangleCache::new();
    let mut evaluator = Evaluator::new(&cache);
    let exprs = [
        (parse_expr(builtins::HORIZONTAL_EXPR).unwrap(), "horizontal"),
        (
            parse_expr(builtins::HOCKEY_STICK_EXPR).unwrap(),
            "hockey stick",
        ),
        (
            parse_expr(builtins::SHALLOW_DIAGONAL_EXPR).unwrap(),
            "shallow diagonal",
        ),
        (parse_expr(builtins::VERTICAL_EXPR).unwrap(), "vertical"),
        (
            parse_expr(builtins::THEOREM_RHS_EXPR).unwrap(),
            "theorem rhs",
        ),
    ];
    for n in 0..=100u32 {
        for k in 0..=n {
            let (bn, bk) = (Some(n as i64), Some(k as i64));
            let direct: [BigInt; 5] = [
                horizontal_sum(&cache, n),
                hockey_stick_sum(&cache, n, k).unwrap(),
                shallow_diagonal_sum(&cache, n),
                vertical_partial_sum(&cache, n, k).unwrap(),
                sums::theorem_rhs(&cache, n, k).unwrap(),
            ];
            for ((expr, label), want) in exprs.iter().zip(direct) {
                let got = evaluator
                    .evaluate(expr, bn, bk)
                    .unwrap_or_else(|e| panic!("{label} at ({n}, {k}): {e}"));
                assert_eq!(got, want, "{label} at ({n}, {k})");
            }
        }
    }
    println!(
        "criterion 9 PASS: 100 random ASTs round-trip; builtin expressions match direct sums \
         for all 0 <= k <= n <= 100"
    );
}

#[test]
fn criterion_10_worker_count_does_not_change_reports() {
    let dir = tempfile::tempdir().unwrap();
    let serial_path = dir.path().join("jobs1.json");
    let parallel_path = dir.path().join("jobs8.json");
    for (jobs, path) in [("1", &serial_path), ("8", &parallel_path)] {
        let output = pascal()
            .args([
                "verify", "theorem", "--n-max", "100", "--jobs", jobs, "--report",
            ])
            .arg(path)
            .output()
            .unwrap();
        assert_eq!(output.status.code(), Some(0));
    }
    let normalize = |path: &std::path::Path| -> String {
        let mut reports: Vec<serde_json::Value> =
            serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
        for report in &mut reports {
            report["elapsed_ms"] = 0.into();
        }
        serde_json::to_string_pretty(&reports).unwrap()
    };
    assert_eq!(
        normalize(&serial_path),
        normalize(&parallel_path),
        "reports must be byte-identical apart from elapsed_ms"
    );
    println!("criterion 10 PASS: --jobs 8 report is byte-identical to --jobs 1 modulo elapsed_ms");
}
