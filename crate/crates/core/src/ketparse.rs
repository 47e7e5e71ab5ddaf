//! Text front-end for sparse states written in bra-ket notation.
//!
//! ```text
//! state    := term { ('+' | '-') term }
//! term     := [ coeff [ '*' ] ] ket
//! coeff    := factor { ('*' | '/') factor }
//! factor   := rational | 'sqrt(' uint ')' | 'i' | '(' coeff { ('+'|'-') coeff } ')'
//! rational := uint [ '/' uint ]
//! ket      := '|' bit+ '>'
//! ```
//!
//! A leading `-` on the first term is allowed, `#` starts a line comment and
//! whitespace is ignored everywhere. A document may open with a
//! `qubits: N` header line asserting the ket width.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_rational::BigRational;
use thiserror::Error;

use crate::arith::{ArithError, ExactScalar};
use crate::state::{BasisString, SparseState, MAX_QUBITS};

const MAX_NESTING: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{line}:{column}: syntax error: expected {expected}, found {found}")]
    Syntax {
        line: usize,
        column: usize,
        expected: String,
        found: String,
    },
    #[error("{line}:{column}: ket has {found} qubits, expected {expected}")]
    WidthMismatch {
        line: usize,
        column: usize,
        expected: usize,
        found: usize,
    },
    #[error("{line}:{column}: ket wider than {MAX_QUBITS} qubits")]
    KetTooWide { line: usize, column: usize },
    #[error("{line}:{column}: sqrt argument does not fit in 64 bits")]
    RadicandTooLarge { line: usize, column: usize },
    #[error("{line}:{column}: parentheses nested deeper than {MAX_NESTING}")]
    NestingTooDeep { line: usize, column: usize },
    #[error("{line}:{column}: {source}")]
    Arith {
        line: usize,
        column: usize,
        source: ArithError,
    },
    #[error("line {line}: malformed header, expected `qubits: N` with 1 <= N <= {MAX_QUBITS}")]
    BadHeader { line: usize },
    #[error("header declares {declared} qubits but kets have {found}")]
    HeaderMismatch { declared: usize, found: usize },
    #[error("every term cancels; the state is empty")]
    EmptyState,
}

impl ParseError {
    /// `(line, column)` of the offending input, when there is one.
    pub fn position(&self) -> Option<(usize, usize)> {
        match self {
            Self::Syntax { line, column, .. }
            | Self::WidthMismatch { line, column, .. }
            | Self::KetTooWide { line, column }
            | Self::RadicandTooLarge { line, column }
            | Self::NestingTooDeep { line, column }
            | Self::Arith { line, column, .. } => Some((*line, *column)),
            Self::BadHeader { line } => Some((*line, 1)),
            Self::HeaderMismatch { .. } | Self::EmptyState => None,
        }
    }
}

/// A parsed state file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateDocument {
    pub source: String,
    pub state: SparseState,
    pub declared_n: Option<usize>,
}

pub fn parse_document(text: &str) -> Result<StateDocument, ParseError> {
    let (declared_n, chars) = preprocess(text)?;
    let mut parser = Parser {
        chars,
        pos: 0,
        width: None,
        depth: 0,
    };
    let terms = parser.state()?;
    let width = parser.width.expect("a parsed state has at least one ket");
    if let Some(declared) = declared_n {
        if declared != width {
            return Err(ParseError::HeaderMismatch { declared, found: width });
        }
    }
    let mut combined: BTreeMap<u64, ExactScalar> = BTreeMap::new();
    for (bits, coeff) in terms {
        let slot = combined.entry(bits).or_default();
        *slot = &*slot + &coeff;
    }
    let raw: Vec<(u64, ExactScalar)> = combined.into_iter().filter(|(_, c)| !c.is_zero()).collect();
    if raw.is_empty() {
        return Err(ParseError::EmptyState);
    }
    let state = SparseState::from_bits(width, raw).expect("kets were validated during parsing");
    Ok(StateDocument {
        source: text.to_string(),
        state,
        declared_n,
    })
}

pub fn parse_state(text: &str) -> Result<SparseState, ParseError> {
    parse_document(text).map(|doc| doc.state)
}

/// Canonical text for a state; `parse_state(&render_state(s)) == s`.
pub fn render_state(state: &SparseState) -> String {
    let mut out = String::new();
    for (idx, (basis, amp)) in state.terms().iter().enumerate() {
        let (neg, text) = amp.coefficient_text();
        if neg {
            out.push('-');
        } else if idx > 0 {
            out.push('+');
        }
        out.push_str(&text);
        out.push('|');
        out.push_str(&basis.to_string());
        out.push('>');
    }
    out
}

/// A full state file with a `qubits:` header and trailing newline.
pub fn render_document(state: &SparseState) -> String {
    format!("qubits: {}\n{}\n", state.n(), render_state(state))
}

#[derive(Clone, Copy)]
struct Located {
    ch: char,
    line: usize,
    column: usize,
}

/// Strips comments and whitespace, extracting an optional header from the
/// first content line.
fn preprocess(text: &str) -> Result<(Option<usize>, Vec<Located>), ParseError> {
    let mut declared = None;
    let mut seen_content = false;
    let mut chars = Vec::new();
    for (line_idx, raw_line) in text.lines().enumerate() {
        let line_no = line_idx + 1;
        let content = raw_line.split('#').next().unwrap_or("");
        let trimmed = content.trim();
        if trimmed.is_empty() {
            continue;
        }
        if !seen_content {
            seen_content = true;
            if let Some(rest) = trimmed.strip_prefix("qubits:") {
                let n: usize = rest
                    .trim()
                    .parse()
                    .map_err(|_| ParseError::BadHeader { line: line_no })?;
                if !(1..=MAX_QUBITS).contains(&n) {
                    return Err(ParseError::BadHeader { line: line_no });
                }
                declared = Some(n);
                continue;
            }
        }
        chars.extend(
            content
                .chars()
                .enumerate()
                .filter(|(_, ch)| !ch.is_whitespace())
                .map(|(col, ch)| Located {
                    ch,
                    line: line_no,
                    column: col + 1,
                }),
        );
    }
    Ok((declared, chars))
}

struct Parser {
    chars: Vec<Located>,
    pos: usize,
    width: Option<usize>,
    depth: usize,
}

impl Parser {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|c| c.ch)
    }

    fn peek_at(&self, offset: usize) -> Option<char> {
        self.chars.get(self.pos + offset).map(|c| c.ch)
    }

    fn here(&self) -> (usize, usize) {
        match self.chars.get(self.pos) {
            Some(c) => (c.line, c.column),
            None => self.chars.last().map_or((1, 1), |c| (c.line, c.column + 1)),
        }
    }

    fn accept(&mut self, ch: char) -> bool {
        if self.peek() == Some(ch) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn syntax(&self, expected: &str) -> ParseError {
        let (line, column) = self.here();
        let found = self
            .peek()
            .map_or_else(|| "end of input".to_string(), |c| format!("{c:?}"));
        ParseError::Syntax {
            line,
            column,
            expected: expected.to_string(),
            found,
        }
    }

    fn expect(&mut self, ch: char) -> Result<(), ParseError> {
        if self.accept(ch) {
            Ok(())
        } else {
            Err(self.syntax(&format!("{ch:?}")))
        }
    }

    fn state(&mut self) -> Result<Vec<(u64, ExactScalar)>, ParseError> {
        let mut terms = Vec::new();
        let negate_first = self.accept('-');
        let (bits, coeff) = self.term()?;
        terms.push((bits, if negate_first { -coeff } else { coeff }));
        loop {
            let negate = if self.accept('+') {
                false
            } else if self.accept('-') {
                true
            } else {
                break;
            };
            let (bits, coeff) = self.term()?;
            terms.push((bits, if negate { -coeff } else { coeff }));
        }
        if self.peek().is_some() {
            return Err(self.syntax("'+', '-' or end of input"));
        }
        Ok(terms)
    }

    fn term(&mut self) -> Result<(u64, ExactScalar), ParseError> {
        if self.peek() == Some('|') {
            return Ok((self.ket()?, ExactScalar::one()));
        }
        let coeff = self.coeff()?;
        self.accept('*');
        Ok((self.ket()?, coeff))
    }

    fn coeff(&mut self) -> Result<ExactScalar, ParseError> {
        let mut value = self.factor()?;
        loop {
            match (self.peek(), self.peek_at(1)) {
                (Some('*'), Some(next)) if next != '|' => {
                    self.pos += 1;
                    value = &value * &self.factor()?;
                }
                (Some('/'), _) => {
                    self.pos += 1;
                    let (line, column) = self.here();
                    let divisor = self.factor()?;
                    value = value
                        .checked_div(&divisor)
                        .map_err(|source| ParseError::Arith { line, column, source })?;
                }
                _ => return Ok(value),
            }
        }
    }

    fn factor(&mut self) -> Result<ExactScalar, ParseError> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let n = self.uint()?;
                Ok(ExactScalar::from_rational(BigRational::from_integer(n.into())))
            }
            Some('s') => {
                for expected in ['s', 'q', 'r', 't', '('] {
                    self.expect(expected)?;
                }
                let (line, column) = self.here();
                let n = self.uint()?;
                let n: u64 = n
                    .try_into()
                    .map_err(|_| ParseError::RadicandTooLarge { line, column })?;
                self.expect(')')?;
                Ok(ExactScalar::sqrt(n))
            }
            Some('i') => {
                self.pos += 1;
                Ok(ExactScalar::i())
            }
            Some('(') => {
                if self.depth >= MAX_NESTING {
                    let (line, column) = self.here();
                    return Err(ParseError::NestingTooDeep { line, column });
                }
                self.pos += 1;
                self.depth += 1;
                let mut value = self.coeff()?;
                loop {
                    if self.accept('+') {
                        value = &value + &self.coeff()?;
                    } else if self.accept('-') {
                        value = &value - &self.coeff()?;
                    } else {
                        break;
                    }
                }
                self.expect(')')?;
                self.depth -= 1;
                Ok(value)
            }
            _ => Err(self.syntax("a number, 'sqrt(', 'i', '(' or a ket")),
        }
    }

    fn uint(&mut self) -> Result<BigUint, ParseError> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.syntax("digits"));
        }
        let digits: String = self.chars[start..self.pos].iter().map(|c| c.ch).collect();
        Ok(digits.parse().expect("ascii digits"))
    }

    fn ket(&mut self) -> Result<u64, ParseError> {
        let (line, column) = self.here();
        self.expect('|')?;
        let mut bits = 0u64;
        let mut width = 0usize;
        while let Some(c @ ('0' | '1')) = self.peek() {
            if width == MAX_QUBITS {
                return Err(ParseError::KetTooWide { line, column });
            }
            bits = (bits << 1) | u64::from(c == '1');
            width += 1;
            self.pos += 1;
        }
        if width == 0 {
            return Err(self.syntax("'0' or '1'"));
        }
        self.expect('>')?;
        match self.width {
            Some(expected) if expected != width => {
                return Err(ParseError::WidthMismatch {
                    line,
                    column,
                    expected,
                    found: width,
                })
            }
            _ => self.width = Some(width),
        }
        debug_assert!(BasisString::new(width, bits).is_ok());
        Ok(bits)
    }
}
