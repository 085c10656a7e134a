//! A small expression language for lattice sums over the triangle.
//!
//! Lexer, recursive-descent parser, AST with a canonical printer, and an
//! exact evaluator. The well-known identities ship as named built-ins so
//! they can be verified without writing files.

pub mod ast;
pub mod eval;
pub mod parser;
pub mod token;

pub use ast::{AffineExpr, AffineTerm, FreeParams, Identity, SumExpr, Var};
pub use eval::{evaluate, EvalError, Evaluator, BUILTIN_ARG_LIMIT};
pub use parser::{parse, parse_expr, parse_identity, DslError, ParseError, Parsed};
pub use token::{tokenize, IllegalCharacter, Token, TokenKind};

/// Named identities runnable without an input file.
pub mod builtins {
    /// Horizontal line: the row sum is a power of two.
    pub const EQ1: &str = "sum j [ C(n, j) ] == pow2(n)";
    /// Hockey stick: the diagonal sum down to row n, written with descending
    /// rows so the terms vanish once the row drops below the column.
    pub const EQ2: &str = "sum j [ C(n-j, k) ] == C(n+1, k+1)";
    /// Slope-1/3 diagonal: the shallow diagonal sums to a Fibonacci number.
    pub const EQ3: &str = "sum j [ C(n-j, j) ] == fib(n)";
    /// The vertical partial sum equals the alternated next-diagonal sum plus
    /// the six-periodic correction.
    pub const THEOREM: &str =
        "sum j [ C(n-2*j, k-j) ] == sum j [ (-1)^j * C(n+1-j, k+1+j) ] + eps(n-2*k)";

    /// The bare summation expressions behind the identities, paired with the
    /// theorem's right-hand side. Useful for evaluator-vs-direct checks.
    pub const HORIZONTAL_EXPR: &str = "sum j [ C(n, j) ]";
    pub const HOCKEY_STICK_EXPR: &str = "sum j [ C(n-j, k) ]";
    pub const SHALLOW_DIAGONAL_EXPR: &str = "sum j [ C(n-j, j) ]";
    pub const VERTICAL_EXPR: &str = "sum j [ C(n-2*j, k-j) ]";
    pub const THEOREM_RHS_EXPR: &str = "sum j [ (-1)^j * C(n+1-j, k+1+j) ] + eps(n-2*k)";

    pub const NAMES: [&str; 4] = ["eq1", "eq2", "eq3", "theorem"];

    /// Looks up a built-in identity by its CLI name.
    pub fn identity_source(name: &str) -> Option<&'static str> {
        match name {
            "eq1" => Some(EQ1),
            "eq2" => Some(EQ2),
            "eq3" => Some(EQ3),
            "theorem" => Some(THEOREM),
            _ => None,
        }
    }
}

/// Error from parsing a multi-line identity file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineError {
    /// 1-based line number.
    pub line: usize,
    pub source: DslError,
}

impl std::fmt::Display for LineError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "line {}: {}", self.line, self.source)
    }
}

impl std::error::Error for LineError {}

/// Parses the canonical file form: one identity per line, `#` comments and
/// blank lines skipped.
pub fn parse_identity_lines(text: &str) -> Result<Vec<Identity>, LineError> {
    let mut identities = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let identity = parse_identity(trimmed).map_err(|source| LineError {
            line: idx + 1,
            source,
        })?;
        identities.push(identity);
    }
    Ok(identities)
}
