//! JSON shapes of the HTTP contract and plain-text rendering for the
//! terminal.

use serde::{Deserialize, Serialize};
use vpc_core::engine::{DerivLine, DerivOption, Derivation, LineSet, Status};
use vpc_core::formats::{render_header, render_proof_line, ConnectionList};
use vpc_core::registry::{Entry, EntryKind};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct LineView {
    pub label: usize,
    pub statement: String,
    pub split_mark: bool,
    pub connections: Vec<ConnectionList>,
    /// The line as it appears in a listing.
    pub text: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BranchView {
    pub index: usize,
    pub status: Status,
    pub premise_count: usize,
    pub lines: Vec<LineView>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SplitView {
    pub label: usize,
    pub branches: Vec<BranchView>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DerivationView {
    pub status: Status,
    pub premise_count: usize,
    pub lines: Vec<LineView>,
    pub split: Option<SplitView>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct OptionView {
    pub number: usize,
    pub conclusion: Vec<String>,
    pub kind: vpc_core::engine::OptionKind,
    /// Every connection list that yields this conclusion; the first is used
    /// unless the request names another.
    pub connections: Vec<ConnectionList>,
    pub text: String,
    /// Identifies the option together with the state it was offered in.
    pub hash: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct EntryView {
    pub id: String,
    pub kind: String,
    pub header: Option<String>,
    pub deps: Vec<String>,
    pub proof: Option<String>,
    pub imported: bool,
}

pub fn line_view(l: &DerivLine) -> LineView {
    let connections = l.connections();
    LineView {
        label: l.label,
        statement: l.content.render(),
        split_mark: l.split_mark,
        text: render_proof_line(l.label, &l.content, l.split_mark, &connections),
        connections,
    }
}

fn lines_of(set: &LineSet) -> Vec<LineView> {
    set.lines.iter().map(line_view).collect()
}

pub fn derivation_view(d: &Derivation) -> DerivationView {
    DerivationView {
        status: d.status(),
        premise_count: d.premise_count(),
        lines: lines_of(&d.body),
        split: d.split().map(|s| SplitView {
            label: s.label,
            branches: s
                .branches
                .iter()
                .enumerate()
                .map(|(i, b)| BranchView { index: i + 1, status: b.body.status, premise_count: b.body.premise_count, lines: lines_of(&b.body) })
                .collect(),
        }),
    }
}

pub fn option_hash(opt: &DerivOption) -> String {
    let mut h: u64 = opt.state ^ 0xcbf2_9ce4_8422_2325;
    for b in opt.render_conclusion().bytes().chain(opt.sources[0].connection.to_string().bytes()) {
        h ^= b as u64;
        h = h.wrapping_mul(0x100_0000_01b3);
    }
    format!("{h:016x}")
}

pub fn option_view(number: usize, opt: &DerivOption) -> OptionView {
    let connections: Vec<ConnectionList> = opt.sources.iter().map(|s| s.connection.clone()).collect();
    OptionView {
        number,
        conclusion: opt.conclusion.iter().map(|c| c.render()).collect(),
        kind: opt.kind,
        text: vpc_core::formats::render_option_line(number, &opt.conclusion[0], &connections[..1]).trim().to_string(),
        connections,
        hash: option_hash(opt),
    }
}

/// The `options.dat` listing: numbered conclusions with the connection list
/// of their first source.
pub fn render_options(opts: &[DerivOption]) -> String {
    let mut out = String::new();
    for (i, o) in opts.iter().enumerate() {
        for c in &o.conclusion {
            out.push_str(&vpc_core::formats::render_option_line(i + 1, c, std::slice::from_ref(&o.sources[0].connection)));
            out.push('\n');
        }
    }
    out
}

pub fn render_derivation(d: &Derivation) -> String {
    let mut out = String::new();
    for l in &d.body.lines {
        out.push_str(&line_view(l).text);
        out.push('\n');
    }
    if let Some(s) = d.split() {
        for (i, b) in s.branches.iter().enumerate() {
            out.push_str(&format!("branch {} ({}):\n", i + 1, status_word(b.body.status)));
            for l in &b.body.lines {
                out.push_str(&format!("    {}\n", line_view(l).text));
            }
        }
    }
    out.push_str(&format!("status: {}\n", status_word(d.status())));
    out
}

pub fn status_word(s: Status) -> &'static str {
    match s {
        Status::Open => "open",
        Status::ConcludedFalse => "False",
        Status::Extracted => "extracted",
    }
}

pub fn entry_view(e: &Entry) -> EntryView {
    match e {
        Entry::Cpe(c) => EntryView {
            id: c.id.clone(),
            kind: c.kind.keyword().to_string(),
            header: Some(render_header(&c.header())),
            deps: c.deps.clone(),
            proof: match &c.proof {
                Some(vpc_core::registry::ProofRef::Script(s)) => Some(s.clone()),
                _ => None,
            },
            imported: matches!(c.proof, Some(vpc_core::registry::ProofRef::Imported)),
        },
        Entry::False(f) => EntryView {
            id: f.id.clone(),
            kind: "false".into(),
            header: Some(render_header(&f.header())),
            deps: f.deps.clone(),
            proof: match &f.proof {
                Some(vpc_core::registry::ProofRef::Script(s)) => Some(s.clone()),
                _ => None,
            },
            imported: matches!(f.proof, Some(vpc_core::registry::ProofRef::Imported)),
        },
        Entry::Schema(s) => EntryView { id: s.id.clone(), kind: format!("schema {}", s.form), header: None, deps: vec![], proof: None, imported: false },
    }
}

/// Whether an entry mentions `needle` in its id or header.
pub fn entry_matches(e: &Entry, needle: &str) -> bool {
    let v = entry_view(e);
    v.id.contains(needle) || v.header.is_some_and(|h| h.contains(needle))
}

pub fn kind_from_word(word: &str) -> Option<EntryKind> {
    match word {
        "theorem" => Some(EntryKind::Theorem),
        "lemma" => Some(EntryKind::Lemma),
        _ => None,
    }
}
