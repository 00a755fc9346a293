//! The `[ [premise], conclusion ]` form used by proof headers and the
//! registry file, and its line wrapping.

use serde::{Deserialize, Serialize};

use super::text::{parse_element, Cursor, Tok};
use super::ParseError;
use crate::formats::render_statement;
use crate::model::Statement;

/// Lines are wrapped greedily at this many characters.
pub const WRAP_WIDTH: usize = 76;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Conclusion {
    Statements(Vec<Statement>),
    False,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Header {
    pub premise: Vec<Statement>,
    pub conclusion: Conclusion,
}

enum Group {
    Single(Statement),
    List(Vec<Statement>),
}

impl Group {
    fn flatten(self) -> Vec<Statement> {
        match self {
            Group::Single(s) => vec![s],
            Group::List(v) => v,
        }
    }
}

fn parse_group(cur: &mut Cursor) -> Result<Group, ParseError> {
    // A bracketed group directly followed by `|` is a disjunction operand,
    // so defer to the element grammar in that case.
    if cur.peek() == Some(&Tok::LBrack) {
        let mut depth = 0usize;
        let mut k = 0;
        loop {
            match cur.peek_at(k) {
                Some(Tok::LBrack) => depth += 1,
                Some(Tok::RBrack) => {
                    depth -= 1;
                    if depth == 0 {
                        break;
                    }
                }
                None => return Err(cur.unexpected("`]`")),
                _ => {}
            }
            k += 1;
        }
        if cur.peek_at(k + 1) != Some(&Tok::Pipe) {
            cur.expect(Tok::LBrack)?;
            let stmts = super::text::parse_items(cur)?;
            cur.expect(Tok::RBrack)?;
            return Ok(Group::List(stmts));
        }
    }
    let mut stmts = parse_element(cur)?;
    if stmts.len() == 1 {
        Ok(Group::Single(stmts.remove(0)))
    } else {
        Ok(Group::List(stmts))
    }
}

pub(crate) fn parse_header_tokens(cur: &mut Cursor) -> Result<Header, ParseError> {
    cur.expect(Tok::LBrack)?;
    let mut groups = Vec::new();
    loop {
        if cur.eat(&Tok::RBrack) {
            break;
        }
        groups.push(parse_group(cur)?);
        if !cur.eat(&Tok::Comma) {
            match cur.peek() {
                Some(Tok::RBrack) | Some(Tok::Ident(_)) | Some(Tok::LBrack) => {}
                _ => return Err(cur.unexpected("`,` or `]`")),
            }
        }
    }
    if cur.peek() == Some(&Tok::Colon) {
        cur.next();
        let span = cur.span();
        match cur.next().map(|t| t.tok) {
            Some(Tok::Ident(word)) if word == "False" => {}
            _ => return Err(ParseError::new("expected `False` after `:`", span)),
        }
        let premise = groups.into_iter().flat_map(Group::flatten).collect();
        return Ok(Header { premise, conclusion: Conclusion::False });
    }
    match groups.len() {
        0 => Err(cur.error("empty header")),
        1 => Ok(Header {
            premise: Vec::new(),
            conclusion: Conclusion::Statements(groups.pop().unwrap().flatten()),
        }),
        _ => {
            let last = groups.pop().unwrap().flatten();
            let premise = if groups.len() == 1 {
                groups.pop().unwrap().flatten()
            } else {
                groups.into_iter().flat_map(Group::flatten).collect()
            };
            Ok(Header { premise, conclusion: Conclusion::Statements(last) })
        }
    }
}

/// Parse a header, possibly spread over several lines.
pub fn parse_header(text: &str) -> Result<Header, ParseError> {
    parse_header_at(text, 1)
}

pub(crate) fn parse_header_at(text: &str, first_line: usize) -> Result<Header, ParseError> {
    let mut cur = Cursor::from_text(text, first_line)?;
    let header = parse_header_tokens(&mut cur)?;
    cur.expect_end()?;
    Ok(header)
}

fn list_tokens(stmts: &[Statement], out: &mut Vec<String>) {
    for (i, s) in stmts.iter().enumerate() {
        let mut t = render_statement(s);
        if i + 1 < stmts.len() {
            t.push(',');
        }
        out.push(t);
    }
}

fn header_tokens(h: &Header) -> Vec<String> {
    let mut toks = vec!["[".to_string()];
    match &h.conclusion {
        Conclusion::False => {
            list_tokens(&h.premise, &mut toks);
            toks.push("]:False".to_string());
        }
        Conclusion::Statements(c) => {
            if !h.premise.is_empty() {
                toks.push("[".to_string());
                list_tokens(&h.premise, &mut toks);
                toks.push("],".to_string());
            }
            if c.len() == 1 {
                toks.push(render_statement(&c[0]));
            } else {
                toks.push("[".to_string());
                list_tokens(c, &mut toks);
                toks.push("]".to_string());
            }
            toks.push("]".to_string());
        }
    }
    toks
}

/// Join tokens with single spaces, breaking before a token that would pass
/// the width; continuation lines start with one space.
pub fn wrap_tokens(tokens: &[String], width: usize) -> Vec<String> {
    let mut lines = Vec::new();
    let mut line = String::new();
    for tok in tokens {
        if line.is_empty() {
            line.push_str(tok);
        } else if line.len() + 1 + tok.len() <= width {
            line.push(' ');
            line.push_str(tok);
        } else {
            lines.push(std::mem::take(&mut line));
            line.push(' ');
            line.push_str(tok);
        }
    }
    if !line.is_empty() {
        lines.push(line);
    }
    lines
}

pub fn render_header(h: &Header) -> String {
    wrap_tokens(&header_tokens(h), WRAP_WIDTH).join("\n")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formats::parse_statement;

    fn st(s: &str) -> Statement {
        parse_statement(s).unwrap()
    }

    #[test]
    fn two_premises() {
        let text = "[ [ Eq([a,b],[]), Eq([b,c],[]) ], Eq([a,c],[]) ]";
        let h = parse_header(text).unwrap();
        assert_eq!(h.premise, vec![st("Eq([a,b],[])"), st("Eq([b,c],[])")]);
        assert_eq!(h.conclusion, Conclusion::Statements(vec![st("Eq([a,c],[])")]));
        assert_eq!(render_header(&h), text);
    }

    #[test]
    fn empty_premise() {
        let h = parse_header("[ Lt([-1,0],[]) ]").unwrap();
        assert!(h.premise.is_empty());
        assert_eq!(render_header(&h), "[ Lt([-1,0],[]) ]");
    }

    #[test]
    fn single_premise_without_inner_brackets() {
        let a = parse_header("[ Int([a],[]), Eq([a,a],[]) ]").unwrap();
        let b = parse_header("[ [ Int([a],[]) ], Eq([a,a],[]) ]").unwrap();
        assert_eq!(a, b);
        assert_eq!(render_header(&a), "[ [ Int([a],[]) ], Eq([a,a],[]) ]");
    }

    #[test]
    fn falsity_header_tolerates_missing_comma() {
        let h = parse_header("[ Lt([a,b],[]) Eq([a,b],[]) ]:False").unwrap();
        assert_eq!(h.conclusion, Conclusion::False);
        assert_eq!(h.premise.len(), 2);
        assert_eq!(render_header(&h), "[ Lt([a,b],[]), Eq([a,b],[]) ]:False");
    }

    #[test]
    fn long_header_wraps() {
        let text = "[ [ Mult([a,b],[c]), Mult([a,d],[e]), Eq([c,e],[]), Neq([a,0],[]) ],\n Eq([b,d],[]) ]";
        let h = parse_header(text).unwrap();
        assert_eq!(render_header(&h), text);
    }

    #[test]
    fn disjunction_premise_operand_group() {
        let h = parse_header("[ [ [Lt([a,b],[])]|[Eq([a,b],[])] ], Le([a,b],[]) ]").unwrap();
        assert_eq!(h.premise.len(), 1);
        assert!(matches!(h.premise[0], Statement::Disjunction(_)));
    }
}
