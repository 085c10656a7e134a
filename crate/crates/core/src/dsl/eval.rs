//! Exact evaluator for lattice-sum expressions.
//!
//! Summations have no explicit upper bound: terms are added at index
//! 0, 1, 2, ... up to the safe bound `J = max(n,0) + max(k,0) + 2`, and the
//! term at `J` itself must evaluate to zero — otherwise the sum does not
//! vanish the way the triangle sums do and evaluation reports
//! `NonTerminatingSum` instead of returning a truncated value.

use num_bigint::BigInt;
use num_traits::Zero;

use super::ast::{AffineExpr, SumExpr};
use crate::sums::CorrectionTable;
use crate::triangle::{RowMirror, TriangleCache, MAX_SUPPORTED_ROW};

/// Largest argument accepted by `fib` and `pow2` during evaluation, keeping
/// a single malformed expression from soaking up unbounded time and memory.
pub const BUILTIN_ARG_LIMIT: i128 = 100_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EvalError {
    /// The term at the safe bound is nonzero, so the sum never vanishes.
    NonTerminatingSum { index: String, bound: i64 },
    /// The expression reads a free parameter that was not supplied.
    UnboundParameter { name: String },
    /// `fib` or `pow2` applied to a negative argument.
    NegativeArgument { builtin: &'static str, value: i128 },
    /// `fib` or `pow2` applied to an argument past [`BUILTIN_ARG_LIMIT`].
    ArgumentTooLarge { builtin: &'static str, value: i128 },
    /// An in-triangle binomial would require a row past the supported cap.
    RowLimitExceeded { row: i128 },
    /// An index expression left the signed 64-bit range.
    IndexOverflow,
}

impl std::fmt::Display for EvalError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EvalError::NonTerminatingSum { index, bound } => write!(
                f,
                "non-terminating sum: term of `sum {index}` at index {bound} is nonzero"
            ),
            EvalError::UnboundParameter { name } => {
                write!(f, "free parameter `{name}` is not bound")
            }
            EvalError::NegativeArgument { builtin, value } => {
                write!(f, "`{builtin}` is undefined for negative argument {value}")
            }
            EvalError::ArgumentTooLarge { builtin, value } => write!(
                f,
                "`{builtin}({value})` exceeds the evaluation limit of {BUILTIN_ARG_LIMIT}"
            ),
            EvalError::RowLimitExceeded { row } => write!(
                f,
                "binomial needs triangle row {row}, past the supported maximum of {MAX_SUPPORTED_ROW}"
            ),
            EvalError::IndexOverflow => write!(f, "index expression overflows 64-bit range"),
        }
    }
}

impl std::error::Error for EvalError {}

/// Reusable evaluation state: a worker-local mirror of the row cache, the
/// correction table backing `eps`, and the environment of bound variables.
pub struct Evaluator<'a> {
    rows: RowMirror<'a>,
    correction: CorrectionTable,
    env: Vec<i64>,
    safe_bound: i64,
}

impl<'a> Evaluator<'a> {
    pub fn new(cache: &'a TriangleCache) -> Self {
        Evaluator::with_correction(cache, CorrectionTable::THEOREM)
    }

    /// An evaluator whose `eps` builtin uses `table` instead of the
    /// theorem's correction table. Mutation tests flip one class at a time.
    pub fn with_correction(cache: &'a TriangleCache, table: CorrectionTable) -> Self {
        Evaluator {
            rows: RowMirror::new(cache),
            correction: table,
            env: Vec::new(),
            safe_bound: 0,
        }
    }

    /// Evaluates `expr` with the given bindings for the free parameters.
    /// A parameter may be omitted only if the expression never reads it.
    pub fn evaluate(
        &mut self,
        expr: &SumExpr,
        n: Option<i64>,
        k: Option<i64>,
    ) -> Result<BigInt, EvalError> {
        let free = expr.free_params();
        if free.uses_n && n.is_none() {
            return Err(EvalError::UnboundParameter { name: "n".into() });
        }
        if free.uses_k && k.is_none() {
            return Err(EvalError::UnboundParameter { name: "k".into() });
        }
        let n = n.unwrap_or(0);
        let k = k.unwrap_or(0);
        let bound = n.max(0) as i128 + k.max(0) as i128 + 2;
        self.safe_bound = i64::try_from(bound).map_err(|_| EvalError::IndexOverflow)?;
        self.env.clear();
        self.env.push(n);
        self.env.push(k);
        let mut acc = BigInt::zero();
        self.eval_into(expr, 1, &mut acc)?;
        Ok(acc)
    }

    fn eval_value(&mut self, expr: &SumExpr) -> Result<BigInt, EvalError> {
        let mut acc = BigInt::zero();
        self.eval_into(expr, 1, &mut acc)?;
        Ok(acc)
    }

    /// Adds `sign * expr` into `acc`. Threading an accumulator through keeps
    /// binomial terms as borrowed adds instead of per-term allocations.
    fn eval_into(&mut self, expr: &SumExpr, sign: i64, acc: &mut BigInt) -> Result<(), EvalError> {
        match expr {
            SumExpr::Int(v) => {
                *acc += BigInt::from(sign as i128 * *v as i128);
                Ok(())
            }
            SumExpr::Add(l, r) => {
                self.eval_into(l, sign, acc)?;
                self.eval_into(r, sign, acc)
            }
            SumExpr::Sub(l, r) => {
                self.eval_into(l, sign, acc)?;
                self.eval_into(r, -sign, acc)
            }
            SumExpr::Neg(inner) => self.eval_into(inner, -sign, acc),
            SumExpr::Mul(l, r) => {
                if let SumExpr::AltSign(var) = &**l {
                    let flip = self.alt_sign(var)?;
                    return self.eval_into(r, sign * flip, acc);
                }
                if let SumExpr::AltSign(var) = &**r {
                    let flip = self.alt_sign(var)?;
                    return self.eval_into(l, sign * flip, acc);
                }
                let lhs = self.eval_value(l)?;
                let rhs = self.eval_value(r)?;
                let product = lhs * rhs;
                if sign >= 0 {
                    *acc += product;
                } else {
                    *acc -= product;
                }
                Ok(())
            }
            SumExpr::AltSign(var) => {
                *acc += self.alt_sign(var)? * sign;
                Ok(())
            }
            SumExpr::Binomial(upper, lower) => {
                let upper = self.affine(upper)?;
                let lower = self.affine(lower)?;
                if lower < 0 || lower > upper {
                    return Ok(()); // out of triangle, zero by convention
                }
                if upper > MAX_SUPPORTED_ROW as i128 {
                    return Err(EvalError::RowLimitExceeded { row: upper });
                }
                let value = &self.rows.row(upper as u32)[lower as usize];
                if sign >= 0 {
                    *acc += value;
                } else {
                    *acc -= value;
                }
                Ok(())
            }
            SumExpr::Fib(arg) => {
                let v = self.builtin_arg("fib", arg)?;
                let value = crate::triangle::fibonacci(v);
                if sign >= 0 {
                    *acc += value;
                } else {
                    *acc -= value;
                }
                Ok(())
            }
            SumExpr::Pow2(arg) => {
                let v = self.builtin_arg("pow2", arg)?;
                let value = crate::triangle::pow2(v);
                if sign >= 0 {
                    *acc += value;
                } else {
                    *acc -= value;
                }
                Ok(())
            }
            SumExpr::Eps(arg) => {
                let d = self.affine(arg)?;
                let d = i64::try_from(d).map_err(|_| EvalError::IndexOverflow)?;
                *acc += self.correction.apply(d) * sign;
                Ok(())
            }
            SumExpr::Sum { index, body } => {
                let slot = index.slot;
                if slot != self.env.len() {
                    // Programmatically built AST with inconsistent slots.
                    return Err(EvalError::UnboundParameter {
                        name: index.name.clone(),
                    });
                }
                let bound = self.safe_bound;
                self.env.push(0);
                let result = (|| {
                    for j in 0..bound {
                        self.env[slot] = j;
                        self.eval_into(body, sign, acc)?;
                    }
                    self.env[slot] = bound;
                    let last = self.eval_value(body)?;
                    if !last.is_zero() {
                        return Err(EvalError::NonTerminatingSum {
                            index: index.name.clone(),
                            bound,
                        });
                    }
                    Ok(())
                })();
                self.env.pop();
                result
            }
        }
    }

    fn alt_sign(&self, var: &super::ast::Var) -> Result<i64, EvalError> {
        let value = self
            .env
            .get(var.slot)
            .copied()
            .ok_or_else(|| EvalError::UnboundParameter {
                name: var.name.clone(),
            })?;
        Ok(if value.rem_euclid(2) == 0 { 1 } else { -1 })
    }

    fn affine(&self, affine: &AffineExpr) -> Result<i128, EvalError> {
        let mut acc = affine.constant as i128;
        for term in &affine.terms {
            let value = self.env.get(term.var.slot).copied().ok_or_else(|| {
                EvalError::UnboundParameter {
                    name: term.var.name.clone(),
                }
            })?;
            acc = acc
                .checked_add(term.coeff as i128 * value as i128)
                .ok_or(EvalError::IndexOverflow)?;
        }
        Ok(acc)
    }

    fn builtin_arg(&self, builtin: &'static str, arg: &AffineExpr) -> Result<u32, EvalError> {
        let value = self.affine(arg)?;
        if value < 0 {
            return Err(EvalError::NegativeArgument { builtin, value });
        }
        if value > BUILTIN_ARG_LIMIT {
            return Err(EvalError::ArgumentTooLarge { builtin, value });
        }
        Ok(value as u32)
    }
}

/// One-shot evaluation with the theorem's correction table.
pub fn evaluate(
    cache: &TriangleCache,
    expr: &SumExpr,
    n: Option<i64>,
    k: Option<i64>,
) -> Result<BigInt, EvalError> {
    Evaluator::new(cache).evaluate(expr, n, k)
}
