//! AST for lattice-sum expressions, plus the canonical printer.
//!
//! Variables are resolved at parse time: the free parameters `n` and `k`
//! always occupy slots 0 and 1, and each `sum` index occupies slot
//! `2 + nesting depth`. Printing uses the recorded names; evaluation uses
//! the slots.

use std::fmt;

/// Slot of the free parameter `n` in an evaluation environment.
pub const SLOT_N: usize = 0;
/// Slot of the free parameter `k`.
pub const SLOT_K: usize = 1;
/// First slot available to summation indices.
pub const FIRST_INDEX_SLOT: usize = 2;

/// A resolved variable reference.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Var {
    pub name: String,
    pub slot: usize,
}

impl Var {
    pub fn new(name: impl Into<String>, slot: usize) -> Self {
        Var {
            name: name.into(),
            slot,
        }
    }
}

/// An integer-affine index expression: a constant plus integer multiples of
/// in-scope variables. Zero coefficients are never stored and each variable
/// appears at most once.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AffineExpr {
    pub terms: Vec<AffineTerm>,
    pub constant: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineTerm {
    pub coeff: i64,
    pub var: Var,
}

impl AffineExpr {
    pub fn constant(value: i64) -> Self {
        AffineExpr {
            terms: Vec::new(),
            constant: value,
        }
    }

    pub fn var(var: Var) -> Self {
        AffineExpr {
            terms: vec![AffineTerm { coeff: 1, var }],
            constant: 0,
        }
    }

    /// Adds `coeff * var`, merging with an existing term for the same slot
    /// and dropping the term if the merged coefficient cancels to zero.
    pub fn add_term(&mut self, coeff: i64, var: Var) {
        if let Some(t) = self.terms.iter_mut().find(|t| t.var.slot == var.slot) {
            t.coeff += coeff;
            if t.coeff == 0 {
                self.terms.retain(|t| t.coeff != 0);
            }
            return;
        }
        if coeff != 0 {
            self.terms.push(AffineTerm { coeff, var });
        }
    }

    pub fn slots(&self) -> impl Iterator<Item = usize> + '_ {
        self.terms.iter().map(|t| t.var.slot)
    }
}

impl fmt::Display for AffineExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "{}", self.constant);
        }
        for (i, term) in self.terms.iter().enumerate() {
            let mag = term.coeff.unsigned_abs();
            if term.coeff < 0 {
                write!(f, "-")?;
            } else if i > 0 {
                write!(f, "+")?;
            }
            if mag != 1 {
                write!(f, "{mag}*")?;
            }
            write!(f, "{}", term.var.name)?;
        }
        if self.constant > 0 {
            write!(f, "+{}", self.constant)?;
        } else if self.constant < 0 {
            write!(f, "{}", self.constant)?;
        }
        Ok(())
    }
}

/// A lattice-sum expression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SumExpr {
    Int(i64),
    Binomial(AffineExpr, AffineExpr),
    Fib(AffineExpr),
    Pow2(AffineExpr),
    Eps(AffineExpr),
    /// `(-1)^index` for a bound summation index.
    AltSign(Var),
    /// `sum index [ body ]`; the index runs 0, 1, 2, ... until terms vanish.
    Sum {
        index: Var,
        body: Box<SumExpr>,
    },
    Add(Box<SumExpr>, Box<SumExpr>),
    Sub(Box<SumExpr>, Box<SumExpr>),
    Mul(Box<SumExpr>, Box<SumExpr>),
    Neg(Box<SumExpr>),
}

impl std::ops::Add for SumExpr {
    type Output = SumExpr;
    fn add(self, rhs: SumExpr) -> SumExpr {
        SumExpr::Add(Box::new(self), Box::new(rhs))
    }
}

impl std::ops::Sub for SumExpr {
    type Output = SumExpr;
    fn sub(self, rhs: SumExpr) -> SumExpr {
        SumExpr::Sub(Box::new(self), Box::new(rhs))
    }
}

impl std::ops::Mul for SumExpr {
    type Output = SumExpr;
    fn mul(self, rhs: SumExpr) -> SumExpr {
        SumExpr::Mul(Box::new(self), Box::new(rhs))
    }
}

impl std::ops::Neg for SumExpr {
    type Output = SumExpr;
    fn neg(self) -> SumExpr {
        SumExpr::Neg(Box::new(self))
    }
}

impl SumExpr {
    pub fn sum(index: Var, body: SumExpr) -> SumExpr {
        SumExpr::Sum {
            index,
            body: Box::new(body),
        }
    }

    /// Which of the free parameters `n`, `k` the expression actually reads.
    pub fn free_params(&self) -> FreeParams {
        let mut free = FreeParams {
            uses_n: false,
            uses_k: false,
        };
        self.visit_affines(&mut |aff| {
            for slot in aff.slots() {
                match slot {
                    SLOT_N => free.uses_n = true,
                    SLOT_K => free.uses_k = true,
                    _ => {}
                }
            }
        });
        free
    }

    fn visit_affines(&self, visit: &mut impl FnMut(&AffineExpr)) {
        match self {
            SumExpr::Int(_) | SumExpr::AltSign(_) => {}
            SumExpr::Binomial(upper, lower) => {
                visit(upper);
                visit(lower);
            }
            SumExpr::Fib(a) | SumExpr::Pow2(a) | SumExpr::Eps(a) => visit(a),
            SumExpr::Sum { body, .. } => body.visit_affines(visit),
            SumExpr::Add(l, r) | SumExpr::Sub(l, r) | SumExpr::Mul(l, r) => {
                l.visit_affines(visit);
                r.visit_affines(visit);
            }
            SumExpr::Neg(e) => e.visit_affines(visit),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FreeParams {
    pub uses_n: bool,
    pub uses_k: bool,
}

impl std::ops::BitOr for FreeParams {
    type Output = FreeParams;
    fn bitor(self, rhs: FreeParams) -> FreeParams {
        FreeParams {
            uses_n: self.uses_n || rhs.uses_n,
            uses_k: self.uses_k || rhs.uses_k,
        }
    }
}

/// An equation between two lattice-sum expressions over the shared free
/// parameters `n`, `k` (each side may use a subset).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Identity {
    pub lhs: SumExpr,
    pub rhs: SumExpr,
}

impl Identity {
    pub fn free_params(&self) -> FreeParams {
        self.lhs.free_params() | self.rhs.free_params()
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} == {}", self.lhs, self.rhs)
    }
}

// Binding strength, used to decide where the printer must parenthesize so
// the canonical text re-parses to the same tree under left-associative
// `+ - *`.
fn precedence(expr: &SumExpr) -> u8 {
    match expr {
        SumExpr::Add(..) | SumExpr::Sub(..) => 1,
        SumExpr::Mul(..) => 2,
        SumExpr::Neg(..) => 3,
        _ => 4,
    }
}

fn write_expr(f: &mut fmt::Formatter<'_>, expr: &SumExpr, min_prec: u8) -> fmt::Result {
    let prec = precedence(expr);
    if prec < min_prec {
        write!(f, "(")?;
        write_expr(f, expr, 0)?;
        return write!(f, ")");
    }
    match expr {
        SumExpr::Int(v) => write!(f, "{v}"),
        SumExpr::Binomial(upper, lower) => write!(f, "C({upper}, {lower})"),
        SumExpr::Fib(a) => write!(f, "fib({a})"),
        SumExpr::Pow2(a) => write!(f, "pow2({a})"),
        SumExpr::Eps(a) => write!(f, "eps({a})"),
        SumExpr::AltSign(v) => write!(f, "(-1)^{}", v.name),
        SumExpr::Sum { index, body } => {
            write!(f, "sum {} [ ", index.name)?;
            write_expr(f, body, 0)?;
            write!(f, " ]")
        }
        SumExpr::Add(l, r) => {
            write_expr(f, l, 1)?;
            write!(f, " + ")?;
            write_expr(f, r, 2)
        }
        SumExpr::Sub(l, r) => {
            write_expr(f, l, 1)?;
            write!(f, " - ")?;
            write_expr(f, r, 2)
        }
        SumExpr::Mul(l, r) => {
            write_expr(f, l, 2)?;
            write!(f, " * ")?;
            write_expr(f, r, 3)
        }
        SumExpr::Neg(inner) => {
            write!(f, "-")?;
            write_expr(f, inner, 3)
        }
    }
}

impl fmt::Display for SumExpr {
    /// Canonical text: re-parsing it yields a structurally identical AST.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_expr(f, self, 0)
    }
}
