//! The registry file: blank-line separated blocks, one entry each.
//!
//! ```text
//! axiom A29
//! [ [ Lt([a,b],[]), Lt([b,c],[]) ], Lt([a,c],[]) ]
//!
//! false A33
//! Lt([a,a],[])
//!
//! schema A1 int-input
//!
//! theorem T2
//! [ [ Add([a,b],[c]), Mult([-1,b],[d]) ], Add([c,d],[m]) ]
//! imported
//! ```
//!
//! Derived entries may carry `deps: id,id` and `proof: ref` lines.

use super::header::{parse_header_at, render_header, wrap_tokens, Conclusion, WRAP_WIDTH};
use super::text::{parse_items, Cursor};
use super::{render_statement, ParseError, SourceSpan};
use crate::model::Program;
use crate::registry::{CpeEntry, Entry, EntryKind, FalseEntry, ProofRef, SchemaEntry, SchemaForm};

struct Block<'a> {
    lines: Vec<(usize, &'a str)>,
}

fn blocks(text: &str) -> Vec<Block<'_>> {
    let mut out = Vec::new();
    let mut cur: Vec<(usize, &str)> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.strip_suffix('\r').unwrap_or(line);
        if line.trim_start().starts_with('#') {
            continue;
        }
        if line.trim().is_empty() {
            if !cur.is_empty() {
                out.push(Block { lines: std::mem::take(&mut cur) });
            }
            continue;
        }
        cur.push((i + 1, line));
    }
    if !cur.is_empty() {
        out.push(Block { lines: cur });
    }
    out
}

enum Attr {
    Deps(Vec<String>),
    Imported,
    Proof(String),
}

fn attribute(line: &str) -> Option<Attr> {
    let t = line.trim();
    if t == "imported" {
        return Some(Attr::Imported);
    }
    if let Some(rest) = t.strip_prefix("deps:") {
        let deps = rest.split(',').map(str::trim).filter(|s| !s.is_empty()).map(String::from).collect();
        return Some(Attr::Deps(deps));
    }
    t.strip_prefix("proof:").map(|rest| Attr::Proof(rest.trim().to_string()))
}

fn span_of(number: usize, line: &str) -> SourceSpan {
    SourceSpan::new(number, 1, line.len())
}

fn parse_block(block: &Block) -> Result<Entry, ParseError> {
    let (first_no, first) = block.lines[0];
    let words: Vec<&str> = first.split_whitespace().collect();
    let head_span = span_of(first_no, first);
    let id = words.get(1).ok_or_else(|| ParseError::new("missing entry id", head_span))?.to_string();
    if let Some(bad) = id.chars().find(|c| !c.is_ascii_alphanumeric() && *c != '_' && *c != '-') {
        return Err(ParseError::new(format!("entry id contains `{bad}`"), head_span));
    }
    if words[0] == "schema" {
        let form = words.get(2).ok_or_else(|| ParseError::new("missing schema form", head_span))?;
        let form: SchemaForm = form.parse().map_err(|e: String| ParseError::new(e, head_span))?;
        if words.len() > 3 || block.lines.len() > 1 {
            return Err(ParseError::new("schema entries take no body", head_span));
        }
        return Ok(Entry::Schema(SchemaEntry { id, form }));
    }
    let kind = match words[0] {
        "axiom" => Some(EntryKind::Axiom),
        "theorem" => Some(EntryKind::Theorem),
        "lemma" => Some(EntryKind::Lemma),
        "crule" => Some(EntryKind::ConstructionRule),
        "false" => None,
        other => {
            return Err(ParseError::new(
                format!("unknown entry kind `{other}`"),
                SourceSpan::new(first_no, 1, other.len()),
            ))
        }
    };
    if words.len() > 2 {
        return Err(ParseError::new("unexpected text after the entry id", head_span));
    }
    let mut body = String::new();
    let mut body_start = None;
    let mut deps = Vec::new();
    let mut proof = None;
    let mut in_attrs = false;
    for &(no, line) in &block.lines[1..] {
        match attribute(line) {
            Some(attr) => {
                in_attrs = true;
                match attr {
                    Attr::Deps(d) => deps = d,
                    Attr::Imported => proof = Some(ProofRef::Imported),
                    Attr::Proof(r) if r.is_empty() => return Err(ParseError::new("empty proof reference", span_of(no, line))),
                    Attr::Proof(r) => proof = Some(ProofRef::Script(r)),
                }
            }
            None if in_attrs => return Err(ParseError::new("statement text after attributes", span_of(no, line))),
            None => {
                body_start.get_or_insert(no);
                if !body.is_empty() {
                    body.push('\n');
                }
                body.push_str(line);
            }
        }
    }
    let Some(body_start) = body_start else {
        return Err(ParseError::new("entry has no body", head_span));
    };
    match kind {
        Some(kind) => {
            let header = parse_header_at(&body, body_start)?;
            let conclusion = match header.conclusion {
                Conclusion::Statements(c) => c,
                Conclusion::False => {
                    return Err(ParseError::new("use a `false` block for falsity entries", SourceSpan::new(body_start, 1, 0)))
                }
            };
            Ok(Entry::Cpe(CpeEntry {
                id,
                kind,
                premise: Program::raw(header.premise),
                conclusion: Program::raw(conclusion),
                deps,
                proof,
            }))
        }
        None => {
            let mut cur = Cursor::from_text(&body, body_start)?;
            let stmts = parse_items(&mut cur)?;
            cur.expect_end()?;
            Ok(Entry::False(FalseEntry { id, program: Program::raw(stmts), deps, proof }))
        }
    }
}

/// Parse every block, in file order. Ids must be unique.
pub fn parse_registry_file(text: &str) -> Result<Vec<Entry>, ParseError> {
    let mut out: Vec<Entry> = Vec::new();
    for block in blocks(text) {
        let entry = parse_block(&block)?;
        if out.iter().any(|e| e.id() == entry.id()) {
            let (no, line) = block.lines[0];
            return Err(ParseError::new(format!("duplicate entry id `{}`", entry.id()), span_of(no, line)));
        }
        out.push(entry);
    }
    Ok(out)
}

fn render_attrs(out: &mut String, deps: &[String], proof: &Option<ProofRef>) {
    if !deps.is_empty() {
        out.push_str(&format!("deps: {}\n", deps.join(",")));
    }
    match proof {
        Some(ProofRef::Imported) => out.push_str("imported\n"),
        Some(ProofRef::Script(r)) => out.push_str(&format!("proof: {r}\n")),
        None => {}
    }
}

fn render_entry(e: &Entry) -> String {
    let mut out = String::new();
    match e {
        Entry::Schema(s) => out.push_str(&format!("schema {} {}\n", s.id, s.form)),
        Entry::Cpe(c) => {
            out.push_str(&format!("{} {}\n{}\n", c.kind.keyword(), c.id, render_header(&c.header())));
            render_attrs(&mut out, &c.deps, &c.proof);
        }
        Entry::False(f) => {
            out.push_str(&format!("false {}\n", f.id));
            let n = f.program.len();
            let toks: Vec<String> = f
                .program
                .iter()
                .enumerate()
                .map(|(i, s)| if i + 1 < n { format!("{},", render_statement(s)) } else { render_statement(s) })
                .collect();
            for line in wrap_tokens(&toks, WRAP_WIDTH) {
                out.push_str(&line);
                out.push('\n');
            }
            render_attrs(&mut out, &f.deps, &f.proof);
        }
    }
    out
}

pub fn render_registry_file<'a>(entries: impl IntoIterator<Item = &'a Entry>) -> String {
    entries.into_iter().map(render_entry).collect::<Vec<_>>().join("\n")
}
