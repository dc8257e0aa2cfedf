//! The `.alg` text format and the term / identity syntax.
//!
//! ```text
//! # comment
//! algebra e3
//! size 3
//! op d 3
//! 0 1 2  1 0 2  2 2 2
//! ...
//! derive m 2 = d(x,x,y)
//! ```
//!
//! Entries are row-major with the last argument varying fastest. Terms use
//! identifiers, parentheses and commas; `@k` is the element `k`. Variables
//! are numbered by first appearance.

use std::fmt;

use smb_core::term::materialize_term;
use smb_core::{FiniteAlgebra, Identity, OperationTable, Quasiidentity, Term};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

pub type ParseResult<T> = Result<T, ParseError>;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Element(usize),
    Open,
    Close,
    Comma,
    Equals,
    And,
    Arrow,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Element(k) => write!(f, "`@{k}`"),
            Tok::Open => f.write_str("`(`"),
            Tok::Close => f.write_str("`)`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Equals => f.write_str("`=`"),
            Tok::And => f.write_str("`&`"),
            Tok::Arrow => f.write_str("`->`"),
        }
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

/// Tokens with their 1-based columns, offset by `col0`.
fn lex(text: &str, line: usize, col0: usize) -> ParseResult<Vec<(Tok, usize)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = col0 + i;
        match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '(' => out.push((Tok::Open, col)),
            ')' => out.push((Tok::Close, col)),
            ',' => out.push((Tok::Comma, col)),
            '=' => out.push((Tok::Equals, col)),
            '&' => out.push((Tok::And, col)),
            '-' if chars.get(i + 1) == Some(&'>') => {
                out.push((Tok::Arrow, col));
                i += 2;
                continue;
            }
            '@' => {
                let start = i + 1;
                let mut j = start;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                let digits: String = chars[start..j].iter().collect();
                let k = digits
                    .parse()
                    .map_err(|_| ParseError::new(line, col, "expected digits after `@`"))?;
                out.push((Tok::Element(k), col));
                i = j;
                continue;
            }
            c if is_ident_start(c) => {
                let mut j = i;
                while j < chars.len() && is_ident_char(chars[j]) {
                    j += 1;
                }
                out.push((Tok::Ident(chars[i..j].iter().collect()), col));
                i = j;
                continue;
            }
            other => return Err(ParseError::new(line, col, format!("unexpected character `{other}`"))),
        }
        i += 1;
    }
    Ok(out)
}

/// Recursive-descent parser over one line of tokens. Variables are shared
/// across everything parsed by the same instance.
struct TermParser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    line: usize,
    end_col: usize,
    vars: Vec<String>,
    signature: Option<&'a FiniteAlgebra>,
}

impl<'a> TermParser<'a> {
    fn new(text: &str, line: usize, col0: usize, signature: Option<&'a FiniteAlgebra>) -> ParseResult<Self> {
        Ok(TermParser {
            toks: lex(text, line, col0)?,
            pos: 0,
            line,
            end_col: col0 + text.chars().count(),
            vars: Vec::new(),
            signature,
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |(_, c)| *c)
    }

    fn err(&self, message: impl Into<String>) -> ParseError {
        ParseError::new(self.line, self.col(), message)
    }

    fn expect(&mut self, tok: Tok) -> ParseResult<()> {
        match self.peek() {
            Some(t) if *t == tok => {
                self.pos += 1;
                Ok(())
            }
            Some(t) => Err(self.err(format!("expected {tok}, found {t}"))),
            None => Err(self.err(format!("expected {tok}, found end of input"))),
        }
    }

    fn finish(&self) -> ParseResult<()> {
        match self.peek() {
            None => Ok(()),
            Some(t) => Err(self.err(format!("unexpected {t}"))),
        }
    }

    fn term(&mut self) -> ParseResult<Term> {
        let col = self.col();
        match self.peek().cloned() {
            Some(Tok::Element(k)) => {
                self.pos += 1;
                if let Some(alg) = self.signature {
                    if k >= alg.size() {
                        return Err(ParseError::new(
                            self.line,
                            col,
                            format!("element @{k} is out of range for size {}", alg.size()),
                        ));
                    }
                }
                Ok(Term::constant(k))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if self.peek() != Some(&Tok::Open) {
                    let index = match self.vars.iter().position(|v| *v == name) {
                        Some(i) => i,
                        None => {
                            self.vars.push(name);
                            self.vars.len() - 1
                        }
                    };
                    return Ok(Term::var(index));
                }
                self.pos += 1;
                let mut args = vec![self.term()?];
                while self.peek() == Some(&Tok::Comma) {
                    self.pos += 1;
                    args.push(self.term()?);
                }
                self.expect(Tok::Close)?;
                if let Some(alg) = self.signature {
                    let table = alg
                        .operation(&name)
                        .ok_or_else(|| ParseError::new(self.line, col, format!("unknown operation `{name}`")))?;
                    if table.arity() != args.len() {
                        return Err(ParseError::new(
                            self.line,
                            col,
                            format!("`{name}` has arity {} but is given {} arguments", table.arity(), args.len()),
                        ));
                    }
                }
                Ok(Term::apply(name, args))
            }
            Some(t) => Err(self.err(format!("expected a term, found {t}"))),
            None => Err(self.err("expected a term, found end of input")),
        }
    }

    fn identity(&mut self) -> ParseResult<Identity> {
        let lhs = self.term()?;
        self.expect(Tok::Equals)?;
        let rhs = self.term()?;
        Ok(Identity::new(lhs, rhs))
    }

    fn quasiidentity(&mut self) -> ParseResult<Quasiidentity> {
        let mut premises = vec![self.identity()?];
        while self.peek() == Some(&Tok::And) {
            self.pos += 1;
            premises.push(self.identity()?);
        }
        self.expect(Tok::Arrow)?;
        let conclusion = self.identity()?;
        Ok(Quasiidentity::new(premises, conclusion))
    }
}

/// A parsed value with its variable names, index `i` naming variable `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Parsed<T> {
    pub value: T,
    pub variables: Vec<String>,
}

fn parse_with<T>(
    text: &str,
    signature: Option<&FiniteAlgebra>,
    f: impl FnOnce(&mut TermParser<'_>) -> ParseResult<T>,
) -> ParseResult<Parsed<T>> {
    let mut p = TermParser::new(text, 1, 1, signature)?;
    let value = f(&mut p)?;
    p.finish()?;
    Ok(Parsed {
        value,
        variables: p.vars,
    })
}

/// Parses a term; with `signature`, symbols and arities are checked.
pub fn parse_term(text: &str, signature: Option<&FiniteAlgebra>) -> ParseResult<Parsed<Term>> {
    parse_with(text, signature, |p| p.term())
}

pub fn parse_identity(text: &str, signature: Option<&FiniteAlgebra>) -> ParseResult<Parsed<Identity>> {
    parse_with(text, signature, |p| p.identity())
}

pub fn parse_quasiidentity(text: &str, signature: Option<&FiniteAlgebra>) -> ParseResult<Parsed<Quasiidentity>> {
    parse_with(text, signature, |p| p.quasiidentity())
}

/// Either form, decided by the presence of `->`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Law {
    Identity(Identity),
    Quasi(Quasiidentity),
}

pub fn parse_law(text: &str, signature: Option<&FiniteAlgebra>) -> ParseResult<Parsed<Law>> {
    if text.contains("->") {
        let q = parse_quasiidentity(text, signature)?;
        Ok(Parsed {
            value: Law::Quasi(q.value),
            variables: q.variables,
        })
    } else {
        let i = parse_identity(text, signature)?;
        Ok(Parsed {
            value: Law::Identity(i.value),
            variables: i.variables,
        })
    }
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

/// Words of a line with 1-based columns.
fn words(line: &str) -> Vec<(&str, usize)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((&line[s..i], line[..s].chars().count() + 1));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((&line[s..], line[..s].chars().count() + 1));
    }
    out
}

const KEYWORDS: [&str; 4] = ["algebra", "size", "op", "derive"];

struct PendingOp {
    symbol: String,
    arity: usize,
    line: usize,
    column: usize,
    entries: Vec<usize>,
}

fn parse_number(word: &str, line: usize, column: usize, what: &str) -> ParseResult<usize> {
    word.parse()
        .map_err(|_| ParseError::new(line, column, format!("expected {what}, found `{word}`")))
}

/// Parses one algebra. `derive` lines see the operations declared above them.
pub fn parse_algebra(text: &str) -> ParseResult<FiniteAlgebra> {
    let mut name: Option<String> = None;
    let mut alg: Option<FiniteAlgebra> = None;
    let mut pending: Option<PendingOp> = None;
    let mut last_line = 1;

    fn close(alg: &mut Option<FiniteAlgebra>, pending: &mut Option<PendingOp>) -> ParseResult<()> {
        let Some(op) = pending.take() else { return Ok(()) };
        let alg = alg.as_mut().expect("ops start only after size");
        let n = alg.size();
        let expected = n.pow(op.arity as u32);
        if op.entries.len() != expected {
            return Err(ParseError::new(
                op.line,
                op.column,
                format!("expected {expected} entries, got {}", op.entries.len()),
            ));
        }
        let table = OperationTable::new(op.arity, n, op.entries)
            .map_err(|e| ParseError::new(op.line, op.column, e.to_string()))?;
        alg.add_operation(op.symbol, table)
            .map_err(|e| ParseError::new(op.line, op.column, e.to_string()))
    }

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = strip_comment(raw);
        let ws = words(line);
        let Some(&(head, head_col)) = ws.first() else { continue };

        if !KEYWORDS.contains(&head) {
            let Some(op) = pending.as_mut() else {
                return Err(ParseError::new(line_no, head_col, format!("unexpected `{head}`")));
            };
            let n = alg.as_ref().map_or(0, |a| a.size());
            for &(w, col) in &ws {
                let v = parse_number(w, line_no, col, "a table entry")?;
                if v >= n {
                    return Err(ParseError::new(
                        line_no,
                        col,
                        format!("entry {v} is out of range for size {n}"),
                    ));
                }
                op.entries.push(v);
            }
            continue;
        }
        close(&mut alg, &mut pending)?;

        let arg = |i: usize, what: &str| -> ParseResult<(&str, usize)> {
            ws.get(i)
                .copied()
                .ok_or_else(|| ParseError::new(line_no, line.chars().count() + 1, format!("missing {what}")))
        };
        let no_more = |i: usize| -> ParseResult<()> {
            match ws.get(i) {
                Some(&(w, col)) => Err(ParseError::new(line_no, col, format!("unexpected `{w}`"))),
                None => Ok(()),
            }
        };
        match head {
            "algebra" => {
                let (n, col) = arg(1, "algebra name")?;
                no_more(2)?;
                if name.is_some() || alg.is_some() {
                    return Err(ParseError::new(line_no, col, "`algebra` must come first and only once"));
                }
                name = Some(n.to_string());
            }
            "size" => {
                let (w, col) = arg(1, "universe size")?;
                no_more(2)?;
                if alg.is_some() {
                    return Err(ParseError::new(line_no, head_col, "`size` given twice"));
                }
                let n = parse_number(w, line_no, col, "a universe size")?;
                let a = FiniteAlgebra::new(name.clone().unwrap_or_else(|| "unnamed".into()), n)
                    .map_err(|e| ParseError::new(line_no, col, e.to_string()))?;
                alg = Some(a);
            }
            "op" => {
                let (symbol, _) = arg(1, "operation name")?;
                let (w, col) = arg(2, "arity")?;
                no_more(3)?;
                let Some(a) = alg.as_ref() else {
                    return Err(ParseError::new(line_no, head_col, "`size` must come before `op`"));
                };
                let arity = parse_number(w, line_no, col, "an arity")?;
                if arity == 0 {
                    return Err(ParseError::new(line_no, col, "arity must be at least 1"));
                }
                if a.operation(symbol).is_some() {
                    return Err(ParseError::new(line_no, head_col, format!("operation `{symbol}` declared twice")));
                }
                pending = Some(PendingOp {
                    symbol: symbol.to_string(),
                    arity,
                    line: line_no,
                    column: head_col,
                    entries: Vec::new(),
                });
            }
            "derive" => {
                let (symbol, _) = arg(1, "operation name")?;
                let (w, col) = arg(2, "arity")?;
                let (eq, eq_col) = arg(3, "`=`")?;
                if eq != "=" {
                    return Err(ParseError::new(line_no, eq_col, format!("expected `=`, found `{eq}`")));
                }
                let Some(a) = alg.as_mut() else {
                    return Err(ParseError::new(line_no, head_col, "`size` must come before `derive`"));
                };
                let arity = parse_number(w, line_no, col, "an arity")?;
                if arity == 0 {
                    return Err(ParseError::new(line_no, col, "arity must be at least 1"));
                }
                if a.operation(symbol).is_some() {
                    return Err(ParseError::new(line_no, head_col, format!("operation `{symbol}` declared twice")));
                }
                // the term is everything after the `=` word
                let byte = line.char_indices().nth(eq_col).map_or(line.len(), |(b, _)| b);
                let mut p = TermParser::new(&line[byte..], line_no, eq_col + 1, Some(a))?;
                let t = p.term()?;
                p.finish()?;
                if p.vars.len() > arity {
                    return Err(ParseError::new(
                        line_no,
                        col,
                        format!("term has {} variables but arity is {arity}", p.vars.len()),
                    ));
                }
                let table = materialize_term(a, &t, arity).map_err(|e| ParseError::new(line_no, eq_col, e.to_string()))?;
                a.add_operation(symbol, table)
                    .map_err(|e| ParseError::new(line_no, head_col, e.to_string()))?;
            }
            _ => unreachable!(),
        }
    }
    close(&mut alg, &mut pending)?;
    alg.ok_or_else(|| ParseError::new(last_line, 1, "missing `size` declaration"))
}

/// Prints `alg` so that [`parse_algebra`] gives it back exactly. Each row
/// holds the entries for one fixed prefix of all but the last argument.
pub fn print_algebra(alg: &FiniteAlgebra) -> String {
    let mut out = format!("algebra {}\nsize {}\n", alg.name(), alg.size());
    for (symbol, table) in alg.operations() {
        out.push_str(&format!("op {symbol} {}\n", table.arity()));
        out.push_str(&print_rows(table));
    }
    out
}

/// Entries of `table`, `size` per line.
pub fn print_rows(table: &OperationTable) -> String {
    let mut out = String::new();
    for row in table.entries().chunks(table.size()) {
        let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    out
}
