//! Recursive-descent parser for the lattice-sum grammar:
//!
//! ```text
//! identity   = expr "==" expr ;
//! expr       = term { ("+" | "-") term } ;
//! term       = factor { "*" factor } ;
//! factor     = integer | "-" factor | builtin | summation | signfactor | "(" expr ")" ;
//! builtin    = "C" "(" affine "," affine ")" | "fib" "(" affine ")"
//!            | "pow2" "(" affine ")" | "eps" "(" affine ")" ;
//! summation  = "sum" identifier "[" expr "]" ;
//! signfactor = "(-1)^" identifier ;      identifier must be a bound index
//! affine     = [ "-" ] affineterm { ("+" | "-") affineterm } ;
//! affineterm = integer | identifier | integer "*" identifier ;
//! ```
//!
//! The only free parameters are `n` and `k`; every other identifier must be
//! bound by an enclosing `sum`, and `sum` indices may not shadow `n`, `k`,
//! or an enclosing index. The leading minus inside `affine` is accepted so
//! that every printable index expression round-trips.

use super::ast::{AffineExpr, Identity, SumExpr, Var, FIRST_INDEX_SLOT, SLOT_K, SLOT_N};
use super::token::{tokenize, IllegalCharacter, Token, TokenKind};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseError {
    Syntax {
        position: usize,
        expected: String,
        found: String,
    },
    UnboundVariable {
        name: String,
        position: usize,
    },
    ShadowedIndex {
        name: String,
        position: usize,
    },
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ParseError::Syntax {
                position,
                expected,
                found,
            } => {
                write!(
                    f,
                    "syntax error at offset {position}: expected {expected}, found {found}"
                )
            }
            ParseError::UnboundVariable { name, position } => {
                write!(
                    f,
                    "unbound variable `{name}` at offset {position} (free parameters are n, k)"
                )
            }
            ParseError::ShadowedIndex { name, position } => {
                write!(
                    f,
                    "summation index `{name}` at offset {position} shadows an enclosing binding"
                )
            }
        }
    }
}

impl std::error::Error for ParseError {}

/// Either a bare expression or a top-level identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Parsed {
    Expr(SumExpr),
    Identity(Identity),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DslError {
    Lex(IllegalCharacter),
    Parse(ParseError),
}

impl std::fmt::Display for DslError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DslError::Lex(e) => e.fmt(f),
            DslError::Parse(e) => e.fmt(f),
        }
    }
}

impl std::error::Error for DslError {}

impl From<IllegalCharacter> for DslError {
    fn from(e: IllegalCharacter) -> Self {
        DslError::Lex(e)
    }
}

impl From<ParseError> for DslError {
    fn from(e: ParseError) -> Self {
        DslError::Parse(e)
    }
}

/// Parses a bare expression or, when `==` appears at top level, an identity.
pub fn parse(source: &str) -> Result<Parsed, DslError> {
    let tokens = tokenize(source)?;
    let mut parser = Parser {
        tokens: &tokens,
        pos: 0,
        end: source.len(),
        scope: Vec::new(),
    };
    let lhs = parser.expr()?;
    let parsed = if parser.eat(&TokenKind::EqEq) {
        let rhs = parser.expr()?;
        Parsed::Identity(Identity { lhs, rhs })
    } else {
        Parsed::Expr(lhs)
    };
    parser.expect_end()?;
    Ok(parsed)
}

pub fn parse_expr(source: &str) -> Result<SumExpr, DslError> {
    match parse(source)? {
        Parsed::Expr(e) => Ok(e),
        Parsed::Identity(_) => Err(ParseError::Syntax {
            position: 0,
            expected: "an expression without `==`".into(),
            found: "an identity".into(),
        }
        .into()),
    }
}

pub fn parse_identity(source: &str) -> Result<Identity, DslError> {
    match parse(source)? {
        Parsed::Identity(id) => Ok(id),
        Parsed::Expr(_) => Err(ParseError::Syntax {
            position: 0,
            expected: "an identity containing `==`".into(),
            found: "a bare expression".into(),
        }
        .into()),
    }
}

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
    end: usize,
    /// Enclosing summation indices, innermost last. Slot is
    /// `FIRST_INDEX_SLOT + depth`.
    scope: Vec<String>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&'a TokenKind> {
        self.tokens.get(self.pos).map(|t| &t.kind)
    }

    fn here(&self) -> usize {
        self.tokens
            .get(self.pos)
            .map(|t| t.offset)
            .unwrap_or(self.end)
    }

    fn found(&self) -> String {
        self.tokens
            .get(self.pos)
            .map(|t| t.kind.describe())
            .unwrap_or_else(|| "end of input".into())
    }

    fn eat(&mut self, kind: &TokenKind) -> bool {
        if self.peek() == Some(kind) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, kind: &TokenKind) -> Result<(), ParseError> {
        if self.eat(kind) {
            Ok(())
        } else {
            Err(self.syntax(kind.describe()))
        }
    }

    fn syntax(&self, expected: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            position: self.here(),
            expected: expected.into(),
            found: self.found(),
        }
    }

    fn expect_end(&self) -> Result<(), ParseError> {
        if self.pos == self.tokens.len() {
            Ok(())
        } else {
            Err(self.syntax("end of input"))
        }
    }

    fn resolve(&self, name: &str) -> Option<Var> {
        match name {
            "n" => Some(Var::new("n", SLOT_N)),
            "k" => Some(Var::new("k", SLOT_K)),
            _ => self
                .scope
                .iter()
                .position(|idx| idx == name)
                .map(|depth| Var::new(name, FIRST_INDEX_SLOT + depth)),
        }
    }

    fn expr(&mut self) -> Result<SumExpr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(&TokenKind::Plus) {
                lhs = lhs + self.term()?;
            } else if self.eat(&TokenKind::Minus) {
                lhs = lhs - self.term()?;
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<SumExpr, ParseError> {
        let mut lhs = self.factor()?;
        while self.eat(&TokenKind::Star) {
            lhs = lhs * self.factor()?;
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<SumExpr, ParseError> {
        let position = self.here();
        match self.peek() {
            Some(TokenKind::Integer(digits)) => {
                self.pos += 1;
                Ok(SumExpr::Int(self.integer(digits, position)?))
            }
            Some(TokenKind::Minus) => {
                self.pos += 1;
                Ok(-self.factor()?)
            }
            Some(TokenKind::KwBinomial) => {
                self.pos += 1;
                self.expect(&TokenKind::LParen)?;
                let upper = self.affine()?;
                self.expect(&TokenKind::Comma)?;
                let lower = self.affine()?;
                self.expect(&TokenKind::RParen)?;
                Ok(SumExpr::Binomial(upper, lower))
            }
            Some(TokenKind::KwFib) => {
                self.pos += 1;
                Ok(SumExpr::Fib(self.builtin_arg()?))
            }
            Some(TokenKind::KwPow2) => {
                self.pos += 1;
                Ok(SumExpr::Pow2(self.builtin_arg()?))
            }
            Some(TokenKind::KwEps) => {
                self.pos += 1;
                Ok(SumExpr::Eps(self.builtin_arg()?))
            }
            Some(TokenKind::KwSum) => {
                self.pos += 1;
                self.summation()
            }
            Some(TokenKind::SignFactor(name)) => {
                self.pos += 1;
                match self.resolve(name) {
                    Some(var) if var.slot >= FIRST_INDEX_SLOT => Ok(SumExpr::AltSign(var)),
                    _ => Err(ParseError::UnboundVariable {
                        name: name.clone(),
                        position,
                    }),
                }
            }
            Some(TokenKind::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(&TokenKind::RParen)?;
                Ok(inner)
            }
            _ => Err(self.syntax("an integer, `-`, a builtin, `sum`, `(-1)^index`, or `(`")),
        }
    }

    fn builtin_arg(&mut self) -> Result<AffineExpr, ParseError> {
        self.expect(&TokenKind::LParen)?;
        let arg = self.affine()?;
        self.expect(&TokenKind::RParen)?;
        Ok(arg)
    }

    fn summation(&mut self) -> Result<SumExpr, ParseError> {
        let position = self.here();
        let name = match self.peek() {
            Some(TokenKind::Ident(name)) => {
                self.pos += 1;
                name.clone()
            }
            _ => return Err(self.syntax("a summation index name")),
        };
        if name == "n" || name == "k" || self.scope.contains(&name) {
            return Err(ParseError::ShadowedIndex { name, position });
        }
        self.expect(&TokenKind::LBracket)?;
        let index = Var::new(name.clone(), FIRST_INDEX_SLOT + self.scope.len());
        self.scope.push(name);
        let body = self.expr();
        self.scope.pop();
        let body = body?;
        self.expect(&TokenKind::RBracket)?;
        Ok(SumExpr::sum(index, body))
    }

    fn integer(&self, digits: &str, position: usize) -> Result<i64, ParseError> {
        digits.parse::<i64>().map_err(|_| ParseError::Syntax {
            position,
            expected: "an integer within signed 64-bit range".into(),
            found: format!("integer `{digits}`"),
        })
    }

    fn affine(&mut self) -> Result<AffineExpr, ParseError> {
        let mut affine = AffineExpr::default();
        let mut sign = if self.eat(&TokenKind::Minus) { -1 } else { 1 };
        loop {
            self.affine_term(&mut affine, sign)?;
            if self.eat(&TokenKind::Plus) {
                sign = 1;
            } else if self.eat(&TokenKind::Minus) {
                sign = -1;
            } else {
                return Ok(affine);
            }
        }
    }

    fn affine_term(&mut self, affine: &mut AffineExpr, sign: i64) -> Result<(), ParseError> {
        let position = self.here();
        match self.peek() {
            Some(TokenKind::Integer(digits)) => {
                self.pos += 1;
                let value = self.integer(digits, position)?;
                if self.eat(&TokenKind::Star) {
                    let var = self.affine_var()?;
                    affine.add_term(
                        sign.checked_mul(value)
                            .ok_or_else(|| self.overflow(position))?,
                        var,
                    );
                } else {
                    affine.constant = affine
                        .constant
                        .checked_add(
                            sign.checked_mul(value)
                                .ok_or_else(|| self.overflow(position))?,
                        )
                        .ok_or_else(|| self.overflow(position))?;
                }
                Ok(())
            }
            Some(TokenKind::Ident(name)) => {
                self.pos += 1;
                let var = self.resolve(name).ok_or(ParseError::UnboundVariable {
                    name: name.clone(),
                    position,
                })?;
                affine.add_term(sign, var);
                Ok(())
            }
            _ => Err(self.syntax("an integer or variable")),
        }
    }

    fn affine_var(&mut self) -> Result<Var, ParseError> {
        let position = self.here();
        match self.peek() {
            Some(TokenKind::Ident(name)) => {
                self.pos += 1;
                self.resolve(name).ok_or(ParseError::UnboundVariable {
                    name: name.clone(),
                    position,
                })
            }
            _ => Err(self.syntax("a variable after `*`")),
        }
    }

    fn overflow(&self, position: usize) -> ParseError {
        ParseError::Syntax {
            position,
            expected: "an index expression within signed 64-bit range".into(),
            found: "overflowing arithmetic".into(),
        }
    }
}
