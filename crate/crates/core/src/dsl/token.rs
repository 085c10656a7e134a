//! Lexer for the lattice-sum expression language.

/// A token with the byte offset where it starts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub offset: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenKind {
    /// Unsigned integer literal, kept as source digits so the parser can
    /// report out-of-range values at a position.
    Integer(String),
    Ident(String),
    KwBinomial,
    KwFib,
    KwPow2,
    KwEps,
    KwSum,
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    EqEq,
    /// The complete alternating-sign form `(-1)^j`, lexed as one token.
    SignFactor(String),
}

impl TokenKind {
    /// Short human-readable description used in parse errors.
    pub fn describe(&self) -> String {
        match self {
            TokenKind::Integer(s) => format!("integer `{s}`"),
            TokenKind::Ident(s) => format!("identifier `{s}`"),
            TokenKind::KwBinomial => "`C`".into(),
            TokenKind::KwFib => "`fib`".into(),
            TokenKind::KwPow2 => "`pow2`".into(),
            TokenKind::KwEps => "`eps`".into(),
            TokenKind::KwSum => "`sum`".into(),
            TokenKind::Plus => "`+`".into(),
            TokenKind::Minus => "`-`".into(),
            TokenKind::Star => "`*`".into(),
            TokenKind::Caret => "`^`".into(),
            TokenKind::LParen => "`(`".into(),
            TokenKind::RParen => "`)`".into(),
            TokenKind::LBracket => "`[`".into(),
            TokenKind::RBracket => "`]`".into(),
            TokenKind::Comma => "`,`".into(),
            TokenKind::EqEq => "`==`".into(),
            TokenKind::SignFactor(v) => format!("`(-1)^{v}`"),
        }
    }
}

/// A character the language has no use for, at a byte offset.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IllegalCharacter {
    pub position: usize,
    pub ch: char,
}

impl std::fmt::Display for IllegalCharacter {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "illegal character `{}` at offset {}",
            self.ch, self.position
        )
    }
}

impl std::error::Error for IllegalCharacter {}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn take_ident(&mut self) -> String {
        let start = self.pos;
        while self
            .peek()
            .map(|b| b.is_ascii_alphanumeric() || b == b'_')
            .unwrap_or(false)
        {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn take_digits(&mut self) -> String {
        let start = self.pos;
        while self.peek().map(|b| b.is_ascii_digit()).unwrap_or(false) {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    /// Attempts to lex the literal form `(-1)^ident` starting at the current
    /// `(`. Whitespace is allowed between the pieces. Returns the index name
    /// and leaves `pos` past the identifier on success; rewinds otherwise.
    fn try_sign_factor(&mut self) -> Option<String> {
        let save = self.pos;
        let mut p = self.pos + 1; // past '('
        let skip = |p: &mut usize| {
            while *p < self.src.len() && self.src[*p].is_ascii_whitespace() {
                *p += 1;
            }
        };
        skip(&mut p);
        if self.src.get(p) != Some(&b'-') {
            return None;
        }
        p += 1;
        skip(&mut p);
        if self.src.get(p) != Some(&b'1') {
            return None;
        }
        p += 1;
        if self.src.get(p).map(|b| b.is_ascii_digit()).unwrap_or(false) {
            return None;
        }
        skip(&mut p);
        if self.src.get(p) != Some(&b')') {
            return None;
        }
        p += 1;
        skip(&mut p);
        if self.src.get(p) != Some(&b'^') {
            return None;
        }
        p += 1;
        skip(&mut p);
        if !self
            .src
            .get(p)
            .map(|b| b.is_ascii_alphabetic() || *b == b'_')
            .unwrap_or(false)
        {
            return None;
        }
        self.pos = p;
        let name = self.take_ident();
        if keyword_kind(&name).is_some() {
            self.pos = save;
            return None;
        }
        Some(name)
    }
}

fn keyword_kind(name: &str) -> Option<TokenKind> {
    match name {
        "C" => Some(TokenKind::KwBinomial),
        "fib" => Some(TokenKind::KwFib),
        "pow2" => Some(TokenKind::KwPow2),
        "eps" => Some(TokenKind::KwEps),
        "sum" => Some(TokenKind::KwSum),
        _ => None,
    }
}

/// Splits `source` into tokens, recording the byte offset of each.
pub fn tokenize(source: &str) -> Result<Vec<Token>, IllegalCharacter> {
    let mut lexer = Lexer {
        src: source.as_bytes(),
        pos: 0,
    };
    let mut tokens = Vec::new();
    loop {
        lexer.skip_ws();
        let offset = lexer.pos;
        let Some(b) = lexer.peek() else { break };
        let kind = match b {
            b'0'..=b'9' => TokenKind::Integer(lexer.take_digits()),
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                let name = lexer.take_ident();
                keyword_kind(&name).unwrap_or(TokenKind::Ident(name))
            }
            b'(' => match lexer.try_sign_factor() {
                Some(name) => TokenKind::SignFactor(name),
                None => {
                    lexer.pos += 1;
                    TokenKind::LParen
                }
            },
            b')' => {
                lexer.pos += 1;
                TokenKind::RParen
            }
            b'[' => {
                lexer.pos += 1;
                TokenKind::LBracket
            }
            b']' => {
                lexer.pos += 1;
                TokenKind::RBracket
            }
            b'+' => {
                lexer.pos += 1;
                TokenKind::Plus
            }
            b'-' => {
                lexer.pos += 1;
                TokenKind::Minus
            }
            b'*' => {
                lexer.pos += 1;
                TokenKind::Star
            }
            b'^' => {
                lexer.pos += 1;
                TokenKind::Caret
            }
            b',' => {
                lexer.pos += 1;
                TokenKind::Comma
            }
            b'=' => {
                if lexer.src.get(lexer.pos + 1) == Some(&b'=') {
                    lexer.pos += 2;
                    TokenKind::EqEq
                } else {
                    return Err(IllegalCharacter {
                        position: offset,
                        ch: '=',
                    });
                }
            }
            other => {
                return Err(IllegalCharacter {
                    position: offset,
                    ch: source[offset..].chars().next().unwrap_or(other as char),
                });
            }
        };
        tokens.push(Token { kind, offset });
    }
    Ok(tokens)
}
