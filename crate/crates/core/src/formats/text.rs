//! Tokens and the statement grammar shared by every text format.

use std::fmt;

use super::{ParseError, SourceSpan};
use crate::model::{Atomic, InTerm, IntConst, ProgName, Program, Statement, VarName};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Num(i64),
    LBrack,
    RBrack,
    LParen,
    RParen,
    Comma,
    Pipe,
    Tilde,
    Colon,
    Star,
    Dot,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Num(n) => write!(f, "`{n}`"),
            Tok::LBrack => f.write_str("`[`"),
            Tok::RBrack => f.write_str("`]`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Pipe => f.write_str("`|`"),
            Tok::Tilde => f.write_str("`~`"),
            Tok::Colon => f.write_str("`:`"),
            Tok::Star => f.write_str("`*`"),
            Tok::Dot => f.write_str("`.`"),
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Token {
    pub tok: Tok,
    pub span: SourceSpan,
}

/// Tokenize `text`, numbering lines from `first_line`.
pub(crate) fn lex(text: &str, first_line: usize) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut line, mut col) = (first_line, 1usize);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = SourceSpan::new(line, col, 1);
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let single = match c {
            '[' => Some(Tok::LBrack),
            ']' => Some(Tok::RBrack),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            '|' => Some(Tok::Pipe),
            '~' => Some(Tok::Tilde),
            ':' => Some(Tok::Colon),
            '*' => Some(Tok::Star),
            '.' => Some(Tok::Dot),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Token { tok, span: start });
            i += 1;
            col += 1;
            continue;
        }
        if c.is_ascii_digit() || (c == '-' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
            let begin = i;
            i += 1;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[begin..i].iter().collect();
            let len = i - begin;
            let value = text
                .parse::<i64>()
                .map_err(|_| ParseError::new(format!("number `{text}` out of range"), SourceSpan::new(line, col, len)))?;
            out.push(Token { tok: Tok::Num(value), span: SourceSpan::new(line, col, len) });
            col += len;
            continue;
        }
        if c.is_ascii_alphabetic() {
            let begin = i;
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                i += 1;
            }
            let len = i - begin;
            out.push(Token {
                tok: Tok::Ident(chars[begin..i].iter().collect()),
                span: SourceSpan::new(line, col, len),
            });
            col += len;
            continue;
        }
        return Err(ParseError::new(format!("unexpected character `{c}`"), start));
    }
    Ok(out)
}

pub(crate) struct Cursor {
    toks: Vec<Token>,
    pos: usize,
    end: SourceSpan,
}

impl Cursor {
    pub fn new(toks: Vec<Token>, end: SourceSpan) -> Self {
        Cursor { toks, pos: 0, end }
    }

    pub fn from_text(text: &str, first_line: usize) -> Result<Self, ParseError> {
        let last_line = first_line + text.matches('\n').count();
        let last_col = text.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        Ok(Cursor::new(lex(text, first_line)?, SourceSpan::new(last_line, last_col, 0)))
    }

    pub fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    pub fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|t| &t.tok)
    }

    pub fn span(&self) -> SourceSpan {
        self.toks.get(self.pos).map_or(self.end, |t| t.span)
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    pub fn next(&mut self) -> Option<Token> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    pub fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError::new(message, self.span())
    }

    pub fn unexpected(&self, wanted: &str) -> ParseError {
        match self.peek() {
            Some(t) => self.error(format!("expected {wanted}, found {t}")),
            None => self.error(format!("expected {wanted}, found end of input")),
        }
    }

    pub fn expect(&mut self, tok: Tok) -> Result<SourceSpan, ParseError> {
        let span = self.span();
        if self.eat(&tok) {
            Ok(span)
        } else {
            Err(self.unexpected(&tok.to_string()))
        }
    }

    pub fn expect_end(&self) -> Result<(), ParseError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.unexpected("end of input"))
        }
    }
}

enum Operand {
    Atomic(Statement),
    List(Vec<Statement>),
}

impl Operand {
    fn into_program(self) -> Program {
        match self {
            Operand::Atomic(s) => Program::raw(vec![s]),
            Operand::List(stmts) => Program::raw(stmts),
        }
    }
}

fn parse_var(cur: &mut Cursor) -> Result<VarName, ParseError> {
    let span = cur.span();
    match cur.next().map(|t| t.tok) {
        Some(Tok::Ident(name)) if name != "ep" => {
            VarName::new(name).map_err(|e| ParseError::new(e.to_string(), span))
        }
        _ => Err(ParseError::new("expected a variable name", span)),
    }
}

fn parse_term(cur: &mut Cursor) -> Result<InTerm, ParseError> {
    let span = cur.span();
    match cur.peek() {
        Some(Tok::Num(n)) => {
            let n = *n;
            cur.next();
            IntConst::try_from(n).map(InTerm::Int).map_err(|e| ParseError::new(e, span))
        }
        Some(Tok::Ident(name)) if name == "ep" => {
            cur.next();
            Ok(InTerm::Ep)
        }
        Some(Tok::Ident(_)) => parse_var(cur).map(InTerm::Var),
        Some(Tok::LBrack) => {
            cur.next();
            let stmts = parse_items(cur)?;
            cur.expect(Tok::RBrack)?;
            Ok(InTerm::Prog(Program::raw(stmts)))
        }
        _ => Err(cur.unexpected("an input term")),
    }
}

/// `[t1,...]`, `[]` or `[~]`.
fn parse_list<T>(cur: &mut Cursor, mut item: impl FnMut(&mut Cursor) -> Result<T, ParseError>) -> Result<Vec<T>, ParseError> {
    cur.expect(Tok::LBrack)?;
    let mut out = Vec::new();
    if cur.eat(&Tok::Tilde) {
        cur.expect(Tok::RBrack)?;
        return Ok(out);
    }
    if cur.eat(&Tok::RBrack) {
        return Ok(out);
    }
    loop {
        out.push(item(cur)?);
        if cur.eat(&Tok::RBrack) {
            return Ok(out);
        }
        cur.expect(Tok::Comma)?;
    }
}

fn parse_atomic(cur: &mut Cursor) -> Result<Statement, ParseError> {
    let span = cur.span();
    let name = match cur.next().map(|t| t.tok) {
        Some(Tok::Ident(name)) => ProgName::new(name).map_err(|e| ParseError::new(e.to_string(), span))?,
        _ => return Err(ParseError::new("expected a program name", span)),
    };
    cur.expect(Tok::LParen)?;
    let inputs = parse_list(cur, parse_term)?;
    cur.expect(Tok::Comma)?;
    let outputs = parse_list(cur, parse_var)?;
    cur.expect(Tok::RParen)?;
    Ok(Statement::Atomic(Atomic::new(name, inputs, outputs)))
}

fn parse_operand(cur: &mut Cursor) -> Result<Operand, ParseError> {
    if cur.eat(&Tok::LBrack) {
        let stmts = parse_items(cur)?;
        cur.expect(Tok::RBrack)?;
        Ok(Operand::List(stmts))
    } else {
        parse_atomic(cur).map(Operand::Atomic)
    }
}

/// One list element; a bracketed group that is not a disjunction operand is
/// flattened into the host list.
pub(crate) fn parse_element(cur: &mut Cursor) -> Result<Vec<Statement>, ParseError> {
    let first = parse_operand(cur)?;
    if cur.peek() != Some(&Tok::Pipe) {
        return Ok(match first {
            Operand::Atomic(s) => vec![s],
            Operand::List(stmts) => stmts,
        });
    }
    let mut ops = vec![first.into_program()];
    while cur.eat(&Tok::Pipe) {
        ops.push(parse_operand(cur)?.into_program());
    }
    Ok(vec![Statement::Disjunction(ops)])
}

/// Statements up to (not including) a closing `]` or the end of input.
/// Commas separate elements; a missing comma between two statements is
/// tolerated.
pub(crate) fn parse_items(cur: &mut Cursor) -> Result<Vec<Statement>, ParseError> {
    let mut out = Vec::new();
    if cur.eat(&Tok::Tilde) {
        return Ok(out);
    }
    loop {
        match cur.peek() {
            None | Some(Tok::RBrack) => return Ok(out),
            _ => {}
        }
        out.extend(parse_element(cur)?);
        if !cur.eat(&Tok::Comma) {
            match cur.peek() {
                None | Some(Tok::RBrack) => return Ok(out),
                Some(Tok::Ident(_)) | Some(Tok::LBrack) => {}
                _ => return Err(cur.unexpected("`,` or `]`")),
            }
        }
    }
}

/// Parse exactly one statement.
pub fn parse_statement(text: &str) -> Result<Statement, ParseError> {
    let mut cur = Cursor::from_text(text, 1)?;
    let span = cur.span();
    let mut stmts = parse_element(&mut cur)?;
    cur.expect_end()?;
    if stmts.len() != 1 {
        return Err(ParseError::new(format!("expected one statement, found {}", stmts.len()), span));
    }
    Ok(stmts.remove(0))
}

/// Parse a statement list, either bracketed `[s1,s2]` or bare `s1, s2`.
/// The result is syntactic only; see [`crate::model::validate_program`].
pub fn parse_statements(text: &str) -> Result<Vec<Statement>, ParseError> {
    let mut cur = Cursor::from_text(text, 1)?;
    let stmts = parse_items(&mut cur)?;
    cur.expect_end()?;
    Ok(stmts)
}

pub fn render_term(t: &InTerm) -> String {
    match t {
        InTerm::Var(v) => v.to_string(),
        InTerm::Int(c) => c.value().to_string(),
        InTerm::Ep => "ep".to_string(),
        InTerm::Prog(p) => render_program(p),
    }
}

fn render_operand(p: &Program) -> String {
    match p.statements() {
        [s @ Statement::Atomic(_)] => render_statement(s),
        _ => render_program(p),
    }
}

/// Canonical text, without interior spaces.
pub fn render_statement(s: &Statement) -> String {
    match s {
        Statement::Atomic(a) => {
            let ins: Vec<String> = a.inputs.iter().map(render_term).collect();
            let outs: Vec<&str> = a.outputs.iter().map(VarName::as_str).collect();
            format!("{}([{}],[{}])", a.name, ins.join(","), outs.join(","))
        }
        Statement::Disjunction(ops) => ops.iter().map(render_operand).collect::<Vec<_>>().join("|"),
    }
}

/// `[s1,s2,...]`, with `[]` for the empty program.
pub fn render_program(p: &Program) -> String {
    format!("[{}]", p.iter().map(render_statement).collect::<Vec<_>>().join(","))
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_statement(self))
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_program(self))
    }
}

impl fmt::Display for InTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_term(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::build::*;

    #[test]
    fn atomic_round_trip() {
        let s = parse_statement("Lt([a,b],[])").unwrap();
        assert_eq!(s, atomic("Lt", vec![v("a"), v("b")], &[]));
        assert_eq!(render_statement(&s), "Lt([a,b],[])");
        let s = parse_statement("Abs([x,0,-1],[y])").unwrap();
        assert_eq!(render_statement(&s), "Abs([x,0,-1],[y])");
    }

    #[test]
    fn tilde_is_empty() {
        assert_eq!(parse_statement("Lt([a,b],[~])").unwrap(), parse_statement("Lt([a,b],[])").unwrap());
    }

    #[test]
    fn disjunction_with_spaces() {
        let s = parse_statement("Lt([a,b],[]) | Eq([a,b],[])").unwrap();
        match &s {
            Statement::Disjunction(ops) => assert_eq!(ops.len(), 2),
            _ => panic!("not a disjunction"),
        }
        assert_eq!(render_statement(&s), "Lt([a,b],[])|Eq([a,b],[])");
    }

    #[test]
    fn bracketed_operands() {
        let text = "[Lt([x,0],[]),Mult([-1,x],[y])]|[Le([0,x],[]),Aid([x],[y])]";
        let s = parse_statement(text).unwrap();
        assert_eq!(render_statement(&s), text);
        let with_empty = "[]|Lt([a,b],[])";
        assert_eq!(render_statement(&parse_statement(with_empty).unwrap()), with_empty);
    }

    #[test]
    fn missing_output_list() {
        let err = parse_statement("Add([a,b])").unwrap_err();
        assert_eq!(err.span.line, 1);
        assert_eq!(err.span.column, 10);
    }

    #[test]
    fn program_literals_and_ep() {
        let s = parse_statement("Conc([[Add([a,b],[c])],ep],[s])").unwrap();
        assert_eq!(render_statement(&s), "Conc([[Add([a,b],[c])],ep],[s])");
        let s = parse_statement("Equiv([p,[~]],[])").unwrap();
        assert_eq!(render_statement(&s), "Equiv([p,[]],[])");
    }

    #[test]
    fn nested_lists_flatten() {
        let stmts = parse_statements("[Lt([a,b],[]), [Eq([a,b],[]), Int([a],[])]]").unwrap();
        assert_eq!(stmts.len(), 3);
        let bare = parse_statements("Lt([a,0],[]) Mult([-1,a],[b]), Eq([b,0],[])").unwrap();
        assert_eq!(bare.len(), 3);
    }

    #[test]
    fn rejects_bad_constant_and_name() {
        assert!(parse_statement("Add([a,2],[c])").is_err());
        assert!(parse_statement("add([a,b],[c])").is_err());
        assert!(parse_statement("Add([a,b],[ep])").is_err());
    }
}
