//! Plain-text map format.
//!
//! ```text
//! # comment
//! u1 = x1 + x2^2
//! u2 = 1/2 x2 - 3 x1*x2
//! ```
//!
//! One assignment per line. A term is an optional rational coefficient
//! (`p/q` or an integer) followed by factors `x<i>` or `x<i>^<e>`, joined by
//! `*` or plain whitespace. The variable count is the highest component
//! index. A document may also be written the other way round
//! (`x1 = u1 - u2^2`), which is how inverses are printed.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::error::Error as CoreError;
use crate::poly::{Exponent, PolyMap, Polynomial};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax(String),
    ConstantTerm { component: usize, constant: BigRational },
    MissingComponent(usize),
    DuplicateComponent(usize),
    VariableOutOfRange { index: usize, num_vars: usize },
    WrongSymbol { expected: char, found: char },
    Empty,
    Map(CoreError),
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Syntax(msg) => write!(f, "syntax error: {msg}"),
            Self::ConstantTerm { component, constant } => write!(
                f,
                "nonzero constant term {constant} in component {component}; maps must fix the origin"
            ),
            Self::MissingComponent(k) => write!(f, "missing component {k}"),
            Self::DuplicateComponent(k) => write!(f, "component {k} assigned twice"),
            Self::VariableOutOfRange { index, num_vars } => write!(
                f,
                "variable index {index} exceeds the number of components ({num_vars})"
            ),
            Self::WrongSymbol { expected, found } => {
                write!(f, "expected a `{expected}` variable, found `{found}`")
            }
            Self::Empty => write!(f, "no assignments found"),
            Self::Map(e) => write!(f, "{e}"),
        }
    }
}

impl ParseError {
    fn new(line: usize, column: usize, kind: ParseErrorKind) -> Self {
        Self { line, column, kind }
    }
}

/// One parsed line `lhs<index> = rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    /// 1-based component index.
    pub index: usize,
    /// 1-based source line.
    pub line: usize,
    pub rhs: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapDocument {
    pub num_vars: usize,
    /// Symbol on the left of `=` (`u` for a forward map).
    pub target_symbol: char,
    /// Symbol of the variables on the right.
    pub source_symbol: char,
    /// Assignments ordered by component index.
    pub assignments: Vec<Assignment>,
    pub map: PolyMap,
    pub source: String,
}

impl MapDocument {
    /// Re-renders the map in canonical form with the same symbols.
    pub fn to_text(&self) -> String {
        self.map
            .to_text(&self.target_symbol.to_string(), &self.source_symbol.to_string())
    }
}

/// A term as read from the text: coefficient and `(variable index, power)`
/// factors, variable indices still 1-based and unchecked.
type RawTerm = (BigRational, Vec<(usize, u32, usize)>);

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(char, usize),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Eq,
}

fn lex(line_no: usize, text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        match c {
            ' ' | '\t' | '\r' => {
                i += 1;
            }
            '+' | '-' | '*' | '/' | '^' | '=' => {
                out.push((
                    col,
                    match c {
                        '+' => Tok::Plus,
                        '-' => Tok::Minus,
                        '*' => Tok::Star,
                        '/' => Tok::Slash,
                        '^' => Tok::Caret,
                        _ => Tok::Eq,
                    },
                ));
                i += 1;
            }
            d if d.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..i].iter().collect();
                out.push((col, Tok::Num(digits.parse().expect("ascii digits"))));
            }
            l if l.is_ascii_alphabetic() => {
                i += 1;
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                if start == i {
                    return Err(ParseError::new(
                        line_no,
                        col,
                        ParseErrorKind::Syntax(format!("identifier `{l}` needs an index, e.g. `{l}1`")),
                    ));
                }
                let digits: String = chars[start..i].iter().collect();
                let index: usize = digits.parse().map_err(|_| {
                    ParseError::new(line_no, col, ParseErrorKind::Syntax("index too large".into()))
                })?;
                if index == 0 {
                    return Err(ParseError::new(
                        line_no,
                        col,
                        ParseErrorKind::Syntax("indices start at 1".into()),
                    ));
                }
                out.push((col, Tok::Ident(l, index)));
            }
            other => {
                return Err(ParseError::new(
                    line_no,
                    col,
                    ParseErrorKind::Syntax(format!("unexpected character `{other}`")),
                ))
            }
        }
    }
    Ok(out)
}

struct ExprParser<'a> {
    line: usize,
    toks: &'a [(usize, Tok)],
    pos: usize,
    end_col: usize,
    symbol: char,
}

impl ExprParser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |(c, _)| *c)
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError::new(self.line, self.col(), ParseErrorKind::Syntax(msg.into()))
    }

    fn expr(&mut self) -> Result<Vec<(usize, RawTerm)>, ParseError> {
        let mut terms = Vec::new();
        let mut negative = false;
        match self.peek() {
            Some(Tok::Minus) => {
                negative = true;
                self.pos += 1;
            }
            Some(Tok::Plus) => self.pos += 1,
            _ => {}
        }
        loop {
            let start = self.col();
            let (mut coeff, factors) = self.term()?;
            if negative {
                coeff = -coeff;
            }
            terms.push((start, (coeff, factors)));
            match self.peek() {
                None => return Ok(terms),
                Some(Tok::Plus) => negative = false,
                Some(Tok::Minus) => negative = true,
                Some(_) => return Err(self.err("expected `+`, `-` or end of line")),
            }
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<RawTerm, ParseError> {
        let mut coeff = BigRational::one();
        let mut factors = Vec::new();
        self.factor(&mut coeff, &mut factors)?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    self.factor(&mut coeff, &mut factors)?;
                }
                Some(Tok::Num(_)) | Some(Tok::Ident(..)) => self.factor(&mut coeff, &mut factors)?,
                _ => return Ok((coeff, factors)),
            }
        }
    }

    fn number(&mut self) -> Result<BigInt, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(n)
            }
            _ => Err(self.err("expected a number")),
        }
    }

    fn factor(&mut self, coeff: &mut BigRational, factors: &mut Vec<(usize, u32, usize)>) -> Result<(), ParseError> {
        let col = self.col();
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                let mut value = BigRational::from_integer(n);
                if self.peek() == Some(&Tok::Slash) {
                    self.pos += 1;
                    let d = self.number()?;
                    if d.is_zero() {
                        return Err(ParseError::new(self.line, col, ParseErrorKind::Syntax("division by zero".into())));
                    }
                    value /= BigRational::from_integer(d);
                }
                *coeff *= value;
                Ok(())
            }
            Some(Tok::Ident(sym, index)) => {
                if sym != self.symbol {
                    return Err(ParseError::new(
                        self.line,
                        col,
                        ParseErrorKind::WrongSymbol { expected: self.symbol, found: sym },
                    ));
                }
                self.pos += 1;
                let mut power = 1u32;
                if self.peek() == Some(&Tok::Caret) {
                    self.pos += 1;
                    let e = self.number()?;
                    power = u32::try_from(e).map_err(|_| self.err("exponent too large"))?;
                }
                factors.push((index, power, col));
                Ok(())
            }
            _ => Err(self.err("expected a coefficient or a variable")),
        }
    }
}

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("")
}

/// Parses a single polynomial in `num_vars` variables named `{symbol}1..`.
pub fn parse_polynomial(text: &str, num_vars: usize, symbol: char) -> Result<Polynomial, ParseError> {
    let toks = lex(1, text)?;
    if toks.is_empty() {
        return Err(ParseError::new(1, 1, ParseErrorKind::Syntax("empty expression".into())));
    }
    let mut parser = ExprParser {
        line: 1,
        toks: &toks,
        pos: 0,
        end_col: text.chars().count() + 1,
        symbol,
    };
    let terms = parser.expr()?;
    build_polynomial(1, num_vars, terms)
}

fn build_polynomial(line: usize, num_vars: usize, terms: Vec<(usize, RawTerm)>) -> Result<Polynomial, ParseError> {
    let mut out = Vec::with_capacity(terms.len());
    for (_, (coeff, factors)) in terms {
        let mut e = vec![0u32; num_vars];
        for (index, power, col) in factors {
            if index > num_vars {
                return Err(ParseError::new(
                    line,
                    col,
                    ParseErrorKind::VariableOutOfRange { index, num_vars },
                ));
            }
            e[index - 1] += power;
        }
        out.push((Exponent::new(e), coeff));
    }
    Ok(Polynomial::from_terms(num_vars, out).expect("exponents sized to num_vars"))
}

/// Parses a whole map document.
pub fn parse_map(text: &str) -> Result<MapDocument, ParseError> {
    struct Pending {
        index: usize,
        line: usize,
        rhs: String,
        terms: Vec<(usize, RawTerm)>,
    }

    let mut pending: Vec<Pending> = Vec::new();
    let mut symbols: Option<(char, char)> = None;

    for (line_idx, raw) in text.lines().enumerate() {
        let line_no = line_idx + 1;
        let body = strip_comment(raw);
        if body.trim().is_empty() {
            continue;
        }
        let toks = lex(line_no, body)?;
        let (lhs_col, lhs_sym, index) = match toks.first() {
            Some((c, Tok::Ident(s, i))) => (*c, *s, *i),
            Some((c, _)) => {
                return Err(ParseError::new(
                    line_no,
                    *c,
                    ParseErrorKind::Syntax("expected `u<k> = ...`".into()),
                ))
            }
            None => unreachable!("blank lines skipped"),
        };
        let (target, source) = match symbols {
            Some(s) => s,
            None => {
                let s = match lhs_sym {
                    'u' => ('u', 'x'),
                    'x' => ('x', 'u'),
                    other => {
                        return Err(ParseError::new(
                            line_no,
                            lhs_col,
                            ParseErrorKind::WrongSymbol { expected: 'u', found: other },
                        ))
                    }
                };
                symbols = Some(s);
                s
            }
        };
        if lhs_sym != target {
            return Err(ParseError::new(
                line_no,
                lhs_col,
                ParseErrorKind::WrongSymbol { expected: target, found: lhs_sym },
            ));
        }
        match toks.get(1) {
            Some((_, Tok::Eq)) => {}
            Some((c, _)) => {
                return Err(ParseError::new(line_no, *c, ParseErrorKind::Syntax("expected `=`".into())))
            }
            None => {
                return Err(ParseError::new(
                    line_no,
                    body.chars().count() + 1,
                    ParseErrorKind::Syntax("expected `=`".into()),
                ))
            }
        }
        if let Some(prev) = pending.iter().find(|p| p.index == index) {
            let _ = prev;
            return Err(ParseError::new(line_no, lhs_col, ParseErrorKind::DuplicateComponent(index)));
        }
        let rest = &toks[2..];
        let end_col = body.chars().count() + 1;
        if rest.is_empty() {
            return Err(ParseError::new(line_no, end_col, ParseErrorKind::Syntax("empty right-hand side".into())));
        }
        let mut parser = ExprParser {
            line: line_no,
            toks: rest,
            pos: 0,
            end_col,
            symbol: source,
        };
        let terms = parser.expr()?;
        let rhs = body.split_once('=').map_or("", |(_, r)| r).trim().to_string();
        pending.push(Pending {
            index,
            line: line_no,
            rhs,
            terms,
        });
    }

    let (target_symbol, source_symbol) = symbols.ok_or(ParseError::new(1, 1, ParseErrorKind::Empty))?;
    let num_vars = pending.iter().map(|p| p.index).max().unwrap_or(0);
    pending.sort_by_key(|p| p.index);
    for k in 1..=num_vars {
        if pending.get(k - 1).map(|p| p.index) != Some(k) {
            let line = text.lines().count().max(1);
            return Err(ParseError::new(line, 1, ParseErrorKind::MissingComponent(k)));
        }
    }

    let mut components = Vec::with_capacity(num_vars);
    let mut assignments = Vec::with_capacity(num_vars);
    for p in pending {
        let first_constant_col = p
            .terms
            .iter()
            .find(|(_, (_, f))| f.is_empty())
            .map(|(c, _)| *c);
        let poly = build_polynomial(p.line, num_vars, p.terms)?;
        let constant = poly.constant_term();
        if !constant.is_zero() {
            return Err(ParseError::new(
                p.line,
                first_constant_col.unwrap_or(1),
                ParseErrorKind::ConstantTerm { component: p.index, constant },
            ));
        }
        components.push(poly);
        assignments.push(Assignment {
            index: p.index,
            line: p.line,
            rhs: p.rhs,
        });
    }
    let map = PolyMap::new(components).map_err(|e| ParseError::new(1, 1, ParseErrorKind::Map(e)))?;
    Ok(MapDocument {
        num_vars,
        target_symbol,
        source_symbol,
        assignments,
        map,
        source: text.to_string(),
    })
}
