//! Guard expressions: boolean trees over comparisons of agent properties
//! against constants.
//!
//! Grammar (keywords are case-sensitive, whitespace free-form):
//!
//! ```text
//! expr    := term ( "OR" term )*
//! term    := factor ( "AND" factor )*
//! factor  := "NOT" factor | "(" expr ")" | "TRUE" | comparison
//! comparison := operand ( "<" | "<=" | "=" | ">=" | ">" ) number
//! operand := "AI" | "PI" | "dAI" | "dPI" | "lifeTime" | "lowPiCycles"
//!          | "qualifier" "(" name ")"
//! ```
//!
//! Evaluation is total: a missing or non-numeric operand makes the enclosing
//! comparison false.

use std::fmt;

use thiserror::Error;

/// A property an atom reads from the agent snapshot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Operand {
    /// Action indicator.
    Ai,
    /// Plausibility indicator.
    Pi,
    /// Difference between the two most recent AI values.
    DeltaAi,
    /// Difference between the two most recent PI values.
    DeltaPi,
    /// Cycles since the agent was created.
    LifeTime,
    /// Consecutive cycles the PI has stayed below the starvation threshold.
    LowPiCycles,
    /// A named qualifier of the agent's current observation.
    Qualifier(String),
}

impl fmt::Display for Operand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Operand::Ai => write!(f, "AI"),
            Operand::Pi => write!(f, "PI"),
            Operand::DeltaAi => write!(f, "dAI"),
            Operand::DeltaPi => write!(f, "dPI"),
            Operand::LifeTime => write!(f, "lifeTime"),
            Operand::LowPiCycles => write!(f, "lowPiCycles"),
            Operand::Qualifier(name) => write!(f, "qualifier({name})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmpOp {
    Lt,
    Le,
    Eq,
    Ge,
    Gt,
}

impl CmpOp {
    fn apply(self, lhs: f64, rhs: f64) -> bool {
        match self {
            CmpOp::Lt => lhs < rhs,
            CmpOp::Le => lhs <= rhs,
            CmpOp::Eq => lhs == rhs,
            CmpOp::Ge => lhs >= rhs,
            CmpOp::Gt => lhs > rhs,
        }
    }
}

impl fmt::Display for CmpOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Eq => "=",
            CmpOp::Ge => ">=",
            CmpOp::Gt => ">",
        };
        write!(f, "{s}")
    }
}

/// A boolean expression tree over property comparisons.
#[derive(Debug, Clone, PartialEq)]
pub enum GuardExpr {
    /// Always satisfied; used by unconditional creation transitions.
    True,
    Cmp {
        operand: Operand,
        op: CmpOp,
        constant: f64,
    },
    And(Box<GuardExpr>, Box<GuardExpr>),
    Or(Box<GuardExpr>, Box<GuardExpr>),
    Not(Box<GuardExpr>),
}

/// Read-only property lookup a guard is evaluated against.
pub trait PropertyView {
    /// Numeric value of the operand, if defined for this agent.
    fn lookup(&self, operand: &Operand) -> Option<f64>;
}

impl GuardExpr {
    /// Side-effect-free evaluation; total over any snapshot.
    pub fn eval<V: PropertyView>(&self, view: &V) -> bool {
        match self {
            GuardExpr::True => true,
            GuardExpr::Cmp {
                operand,
                op,
                constant,
            } => match view.lookup(operand) {
                Some(value) => op.apply(value, *constant),
                None => false,
            },
            GuardExpr::And(a, b) => a.eval(view) && b.eval(view),
            GuardExpr::Or(a, b) => a.eval(view) || b.eval(view),
            GuardExpr::Not(inner) => !inner.eval(view),
        }
    }

    /// Canonical text form; `parse` of the result reproduces the tree.
    pub fn print(&self) -> String {
        self.print_prec(0)
    }

    // Precedence: OR = 0, AND = 1, NOT/atom = 2.
    fn print_prec(&self, parent: u8) -> String {
        let (text, level) = match self {
            GuardExpr::True => ("TRUE".to_string(), 2),
            GuardExpr::Cmp {
                operand,
                op,
                constant,
            } => (format!("{operand} {op} {}", format_constant(*constant)), 2),
            GuardExpr::And(a, b) => (
                format!("{} AND {}", a.print_prec(1), b.print_prec(2)),
                1,
            ),
            GuardExpr::Or(a, b) => (
                format!("{} OR {}", a.print_prec(0), b.print_prec(1)),
                0,
            ),
            GuardExpr::Not(inner) => (format!("NOT {}", inner.print_prec(2)), 2),
        };
        if level < parent {
            format!("({text})")
        } else {
            text
        }
    }
}

fn format_constant(c: f64) -> String {
    // f64 Display is the shortest representation that round-trips.
    format!("{c}")
}

impl fmt::Display for GuardExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.print())
    }
}

#[derive(Debug, Error, PartialEq)]
#[error("guard syntax error at offset {offset}: {message}")]
pub struct GuardParseError {
    pub offset: usize,
    pub message: String,
}

/// Parse the guard grammar.
pub fn parse_guard(text: &str) -> Result<GuardExpr, GuardParseError> {
    let mut parser = Parser {
        tokens: tokenize(text)?,
        pos: 0,
    };
    let expr = parser.expr()?;
    match parser.peek() {
        None => Ok(expr),
        Some(tok) => Err(GuardParseError {
            offset: tok.offset,
            message: format!("unexpected trailing `{}`", tok.kind),
        }),
    }
}

#[derive(Debug, Clone, PartialEq)]
enum TokenKind {
    Word(String),
    Number(f64),
    LParen,
    RParen,
    Cmp(CmpOp),
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TokenKind::Word(w) => write!(f, "{w}"),
            TokenKind::Number(n) => write!(f, "{n}"),
            TokenKind::LParen => write!(f, "("),
            TokenKind::RParen => write!(f, ")"),
            TokenKind::Cmp(op) => write!(f, "{op}"),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    kind: TokenKind,
    offset: usize,
}

fn tokenize(text: &str) -> Result<Vec<Token>, GuardParseError> {
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\r' | '\n' => i += 1,
            '(' => {
                tokens.push(Token {
                    kind: TokenKind::LParen,
                    offset: i,
                });
                i += 1;
            }
            ')' => {
                tokens.push(Token {
                    kind: TokenKind::RParen,
                    offset: i,
                });
                i += 1;
            }
            '<' | '>' => {
                let eq = i + 1 < bytes.len() && bytes[i + 1] == b'=';
                let op = match (c, eq) {
                    ('<', true) => CmpOp::Le,
                    ('<', false) => CmpOp::Lt,
                    ('>', true) => CmpOp::Ge,
                    ('>', false) => CmpOp::Gt,
                    _ => unreachable!(),
                };
                tokens.push(Token {
                    kind: TokenKind::Cmp(op),
                    offset: i,
                });
                i += if eq { 2 } else { 1 };
            }
            '=' => {
                tokens.push(Token {
                    kind: TokenKind::Cmp(CmpOp::Eq),
                    offset: i,
                });
                i += 1;
            }
            _ if c.is_ascii_digit() || c == '-' || c == '+' || c == '.' => {
                let start = i;
                i += 1;
                while i < bytes.len()
                    && ((bytes[i] as char).is_ascii_digit()
                        || bytes[i] == b'.'
                        || bytes[i] == b'e'
                        || bytes[i] == b'E'
                        || ((bytes[i] == b'-' || bytes[i] == b'+')
                            && (bytes[i - 1] == b'e' || bytes[i - 1] == b'E')))
                {
                    i += 1;
                }
                let slice = &text[start..i];
                let value: f64 = slice.parse().map_err(|_| GuardParseError {
                    offset: start,
                    message: format!("bad number `{slice}`"),
                })?;
                tokens.push(Token {
                    kind: TokenKind::Number(value),
                    offset: start,
                });
            }
            _ if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < bytes.len()
                    && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                tokens.push(Token {
                    kind: TokenKind::Word(text[start..i].to_string()),
                    offset: start,
                });
            }
            _ => {
                return Err(GuardParseError {
                    offset: i,
                    message: format!("unexpected character `{c}`"),
                })
            }
        }
    }
    Ok(tokens)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let tok = self.tokens.get(self.pos).cloned();
        if tok.is_some() {
            self.pos += 1;
        }
        tok
    }

    fn error_here(&self, message: impl Into<String>) -> GuardParseError {
        GuardParseError {
            offset: self.peek().map(|t| t.offset).unwrap_or(usize::MAX),
            message: message.into(),
        }
    }

    fn expr(&mut self) -> Result<GuardExpr, GuardParseError> {
        let mut lhs = self.term()?;
        while matches!(self.peek(), Some(Token { kind: TokenKind::Word(w), .. }) if w == "OR") {
            self.next();
            let rhs = self.term()?;
            lhs = GuardExpr::Or(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<GuardExpr, GuardParseError> {
        let mut lhs = self.factor()?;
        while matches!(self.peek(), Some(Token { kind: TokenKind::Word(w), .. }) if w == "AND") {
            self.next();
            let rhs = self.factor()?;
            lhs = GuardExpr::And(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<GuardExpr, GuardParseError> {
        match self.peek().map(|t| t.kind.clone()) {
            Some(TokenKind::Word(w)) if w == "NOT" => {
                self.next();
                Ok(GuardExpr::Not(Box::new(self.factor()?)))
            }
            Some(TokenKind::Word(w)) if w == "TRUE" => {
                self.next();
                Ok(GuardExpr::True)
            }
            Some(TokenKind::LParen) => {
                self.next();
                let inner = self.expr()?;
                match self.next() {
                    Some(Token {
                        kind: TokenKind::RParen,
                        ..
                    }) => Ok(inner),
                    _ => Err(self.error_here("expected `)`")),
                }
            }
            Some(_) => self.comparison(),
            None => Err(self.error_here("expected expression")),
        }
    }

    fn comparison(&mut self) -> Result<GuardExpr, GuardParseError> {
        let operand = self.operand()?;
        let op = match self.next() {
            Some(Token {
                kind: TokenKind::Cmp(op),
                ..
            }) => op,
            _ => return Err(self.error_here("expected comparison operator")),
        };
        let constant = match self.next() {
            Some(Token {
                kind: TokenKind::Number(n),
                ..
            }) => n,
            _ => return Err(self.error_here("expected numeric constant")),
        };
        Ok(GuardExpr::Cmp {
            operand,
            op,
            constant,
        })
    }

    fn operand(&mut self) -> Result<Operand, GuardParseError> {
        let word = match self.next() {
            Some(Token {
                kind: TokenKind::Word(w),
                ..
            }) => w,
            other => {
                return Err(GuardParseError {
                    offset: other.map(|t| t.offset).unwrap_or(usize::MAX),
                    message: "expected property name".into(),
                })
            }
        };
        match word.as_str() {
            "AI" => Ok(Operand::Ai),
            "PI" => Ok(Operand::Pi),
            "dAI" => Ok(Operand::DeltaAi),
            "dPI" => Ok(Operand::DeltaPi),
            "lifeTime" => Ok(Operand::LifeTime),
            "lowPiCycles" => Ok(Operand::LowPiCycles),
            "qualifier" => {
                match self.next() {
                    Some(Token {
                        kind: TokenKind::LParen,
                        ..
                    }) => {}
                    _ => return Err(self.error_here("expected `(` after qualifier")),
                }
                let name = match self.next() {
                    Some(Token {
                        kind: TokenKind::Word(name),
                        ..
                    }) => name,
                    _ => return Err(self.error_here("expected qualifier name")),
                };
                match self.next() {
                    Some(Token {
                        kind: TokenKind::RParen,
                        ..
                    }) => {}
                    _ => return Err(self.error_here("expected `)` after qualifier name")),
                }
                Ok(Operand::Qualifier(name))
            }
            other => Err(self.error_here(format!("unknown property `{other}`"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    struct MapView(BTreeMap<String, f64>);

    impl PropertyView for MapView {
        fn lookup(&self, operand: &Operand) -> Option<f64> {
            self.0.get(&operand.to_string()).copied()
        }
    }

    fn view(entries: &[(&str, f64)]) -> MapView {
        MapView(
            entries
                .iter()
                .map(|(k, v)| (k.to_string(), *v))
                .collect(),
        )
    }

    #[test]
    fn parses_and_prints_fixpoint() {
        for text in [
            "dAI < 0 AND PI < 5",
            "AI >= 2 AND PI >= 5",
            "qualifier(fieriness) = 8 OR lowPiCycles >= 3",
            "TRUE",
            "NOT (AI < 1 OR PI < 1)",
            "dAI <= 0 AND dPI <= 0",
            "(AI > 1 OR PI > 2) AND NOT lifeTime = 0",
        ] {
            let expr = parse_guard(text).unwrap();
            let printed = expr.print();
            let reparsed = parse_guard(&printed).unwrap();
            assert_eq!(reparsed, expr, "fixpoint for `{text}` -> `{printed}`");
        }
    }

    #[test]
    fn canonical_print_of_the_example() {
        let expr = parse_guard("dAI < 0 AND PI < 5").unwrap();
        assert_eq!(expr.print(), "dAI < 0 AND PI < 5");
        assert_eq!(
            expr,
            GuardExpr::And(
                Box::new(GuardExpr::Cmp {
                    operand: Operand::DeltaAi,
                    op: CmpOp::Lt,
                    constant: 0.0
                }),
                Box::new(GuardExpr::Cmp {
                    operand: Operand::Pi,
                    op: CmpOp::Lt,
                    constant: 5.0
                }),
            )
        );
    }

    #[test]
    fn evaluates_connectives() {
        let v = view(&[("AI", 5.0), ("PI", 9.0), ("dAI", -0.5)]);
        assert!(parse_guard("AI >= 2 AND PI >= 5").unwrap().eval(&v));
        assert!(parse_guard("dAI < 0 OR PI < 5").unwrap().eval(&v));
        assert!(!parse_guard("NOT AI = 5").unwrap().eval(&v));
        assert!(parse_guard("TRUE").unwrap().eval(&v));
    }

    #[test]
    fn missing_operand_evaluates_false() {
        let v = view(&[("AI", 5.0)]);
        let guard = parse_guard("qualifier(fieriness) = 8").unwrap();
        assert!(!guard.eval(&v));
        // ... and NOT of a missing atom is true: totality, not error.
        assert!(parse_guard("NOT qualifier(fieriness) = 8").unwrap().eval(&v));
    }

    #[test]
    fn precedence_binds_and_tighter_than_or() {
        let v = view(&[("AI", 2.0), ("PI", 0.0), ("dAI", -1.0)]);
        // Parsed as AI > 1 OR (PI > 5 AND dAI > 0): true.
        assert!(parse_guard("AI > 1 OR PI > 5 AND dAI > 0").unwrap().eval(&v));
        // Explicit grouping changes the result: (true OR false) AND false.
        assert!(!parse_guard("(AI > 1 OR PI > 5) AND dAI > 0").unwrap().eval(&v));
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_guard("").is_err());
        assert!(parse_guard("AI >").is_err());
        assert!(parse_guard("banana < 3").is_err());
        assert!(parse_guard("AI < 1 extra").is_err());
        assert!(parse_guard("qualifier fieriness = 1").is_err());
        assert!(parse_guard("(AI < 1").is_err());
    }
}
