//! Proof listings: a `Theorem`/`Lemma` line, the header, then numbered
//! lines with connection lists.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::header::{parse_header_at, render_header, Header};
use super::text::{parse_element, Cursor, Tok};
use super::{render_statement, ParseError, SourceSpan};
use crate::model::Statement;

/// `[Id,l1,...,lk]`: the entry applied and the labels of the lines it was
/// matched against, in the order of the entry's premise.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ConnectionList {
    pub entry: String,
    pub labels: Vec<usize>,
}

impl ConnectionList {
    pub fn new(entry: impl Into<String>, labels: Vec<usize>) -> Self {
        ConnectionList { entry: entry.into(), labels }
    }
}

impl fmt::Display for ConnectionList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}", self.entry)?;
        for l in &self.labels {
            write!(f, ",{l}")?;
        }
        f.write_str("]")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LineContent {
    Stmt(Statement),
    False,
}

impl LineContent {
    pub fn statement(&self) -> Option<&Statement> {
        match self {
            LineContent::Stmt(s) => Some(s),
            LineContent::False => None,
        }
    }

    pub fn render(&self) -> String {
        match self {
            LineContent::Stmt(s) => render_statement(s),
            LineContent::False => "False".to_string(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProofLine {
    pub label: usize,
    pub content: LineContent,
    pub split_mark: bool,
    pub connections: Vec<ConnectionList>,
    /// Position in the source, when parsed.
    #[serde(skip)]
    pub span: Option<SourceSpan>,
}

/// Equality ignores the source position.
impl PartialEq for ProofLine {
    fn eq(&self, other: &Self) -> bool {
        self.label == other.label
            && self.content == other.content
            && self.split_mark == other.split_mark
            && self.connections == other.connections
    }
}

impl Eq for ProofLine {}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ScriptKind {
    Theorem,
    Lemma,
}

impl ScriptKind {
    pub fn keyword(self) -> &'static str {
        match self {
            ScriptKind::Theorem => "Theorem",
            ScriptKind::Lemma => "Lemma",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofScript {
    pub kind: ScriptKind,
    pub id: String,
    pub header: Header,
    pub lines: Vec<ProofLine>,
}

fn is_blank(line: &str) -> bool {
    line.trim().is_empty()
}

fn title(line: &str, number: usize) -> Result<Option<(ScriptKind, String)>, ParseError> {
    let mut cur = Cursor::from_text(line, number)?;
    let kind = match cur.peek() {
        Some(Tok::Ident(w)) if w == "Theorem" => ScriptKind::Theorem,
        Some(Tok::Ident(w)) if w == "Lemma" => ScriptKind::Lemma,
        _ => return Ok(None),
    };
    cur.next();
    let span = cur.span();
    let id = match cur.next().map(|t| t.tok) {
        Some(Tok::Ident(id)) => id,
        _ => return Err(ParseError::new("expected an identifier after the keyword", span)),
    };
    cur.expect(Tok::Dot)?;
    cur.expect_end()?;
    Ok(Some((kind, id)))
}

fn is_proof_marker(line: &str) -> bool {
    line.trim() == "Proof."
}

pub(crate) fn parse_line(text: &str, number: usize) -> Result<ProofLine, ParseError> {
    let mut cur = Cursor::from_text(text, number)?;
    let span = cur.span();
    let label = match cur.next().map(|t| t.tok) {
        Some(Tok::Num(n)) if n > 0 => n as usize,
        _ => return Err(ParseError::new("proof line must start with a positive label", span)),
    };
    let content = match (cur.peek(), cur.peek_at(1)) {
        (Some(Tok::Ident(w)), next) if w == "False" && next != Some(&Tok::LParen) => {
            cur.next();
            LineContent::False
        }
        _ => {
            let at = cur.span();
            let mut stmts = parse_element(&mut cur)?;
            if stmts.len() != 1 {
                return Err(ParseError::new("a proof line holds exactly one statement", at));
            }
            LineContent::Stmt(stmts.remove(0))
        }
    };
    let split_mark = cur.eat(&Tok::Star);
    let mut connections = Vec::new();
    while !cur.at_end() {
        cur.expect(Tok::LBrack)?;
        let at = cur.span();
        let entry = match cur.next().map(|t| t.tok) {
            Some(Tok::Ident(id)) => id,
            _ => return Err(ParseError::new("connection list must start with an entry id", at)),
        };
        let mut labels = Vec::new();
        while cur.eat(&Tok::Comma) {
            let at = cur.span();
            match cur.next().map(|t| t.tok) {
                Some(Tok::Num(n)) if n > 0 => labels.push(n as usize),
                _ => return Err(ParseError::new("expected a line label", at)),
            }
        }
        cur.expect(Tok::RBrack)?;
        connections.push(ConnectionList { entry, labels });
    }
    Ok(ProofLine { label, content, split_mark, connections, span: Some(span) })
}

/// Parse every script in `text`, in order.
pub fn parse_proofs(text: &str) -> Result<Vec<ProofScript>, ParseError> {
    let lines: Vec<&str> = text.lines().collect();
    let mut scripts = Vec::new();
    let mut i = 0;
    while i < lines.len() {
        let number = i + 1;
        let line = lines[i];
        if is_blank(line) || line.trim_start().starts_with('#') {
            i += 1;
            continue;
        }
        let Some((kind, id)) = title(line, number)? else {
            return Err(ParseError::new("expected `Theorem <id>.` or `Lemma <id>.`", SourceSpan::new(number, 1, line.len())));
        };
        i += 1;
        let header_start = i + 1;
        let mut header_text = String::new();
        while i < lines.len() && !is_blank(lines[i]) && !is_proof_marker(lines[i]) {
            if !header_text.is_empty() {
                header_text.push('\n');
            }
            header_text.push_str(lines[i]);
            i += 1;
        }
        if header_text.is_empty() {
            return Err(ParseError::new("missing header", SourceSpan::new(header_start, 1, 0)));
        }
        let header = parse_header_at(&header_text, header_start)?;
        let mut j = i;
        while j < lines.len() && is_blank(lines[j]) {
            j += 1;
        }
        let mut proof_lines = Vec::new();
        if j < lines.len() && is_proof_marker(lines[j]) {
            i = j + 1;
            while i < lines.len() && !is_blank(lines[i]) {
                let pl = parse_line(lines[i], i + 1)?;
                if pl.label != proof_lines.len() + 1 {
                    return Err(ParseError::new(
                        format!("expected label {}, found {}", proof_lines.len() + 1, pl.label),
                        SourceSpan::new(i + 1, 1, lines[i].len()),
                    ));
                }
                proof_lines.push(pl);
                i += 1;
            }
        }
        scripts.push(ProofScript { kind, id, header, lines: proof_lines });
    }
    Ok(scripts)
}

/// Parse a text holding exactly one script.
pub fn parse_proof(text: &str) -> Result<ProofScript, ParseError> {
    let mut all = parse_proofs(text)?;
    match all.len() {
        1 => Ok(all.remove(0)),
        n => Err(ParseError::new(format!("expected one proof, found {n}"), SourceSpan::new(1, 1, 0))),
    }
}

/// `label statement[*] [A,..][B,..]` with the statement column padded to 20.
pub fn render_proof_line(label: usize, content: &LineContent, split_mark: bool, connections: &[ConnectionList]) -> String {
    let mut body = content.render();
    if split_mark {
        body.push('*');
    }
    let conns: String = connections.iter().map(ToString::to_string).collect();
    if body.len() >= 20 && !conns.is_empty() {
        format!("{label:>3} {body} {conns}")
    } else {
        format!("{label:>3} {body:<20}{conns}")
    }
}

pub fn render_proof(script: &ProofScript) -> String {
    let mut out = format!("{} {}.\n{}\n", script.kind.keyword(), script.id, render_header(&script.header));
    if !script.lines.is_empty() {
        out.push_str("\nProof.\n");
        for l in &script.lines {
            out.push_str(&render_proof_line(l.label, &l.content, l.split_mark, &l.connections));
            out.push('\n');
        }
    }
    out
}
