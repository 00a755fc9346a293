//! The interactive `derive` loop.

use std::io::{BufRead, Write};
use std::path::PathBuf;

use vpc_core::engine::{to_script, DerivOption, Target};
use vpc_core::formats::{parse_statement, render_header, render_proof, ScriptKind};
use vpc_core::model::Statement;
use vpc_core::registry::{Entry, EntryKind};

use crate::app::Store;
use crate::session::Session;
use crate::view::{render_derivation, render_options};

const HELP: &str = "\
commands:
  pick <n> [source]     append option n (from source list `source`, default 1)
  false                 append the first option concluding False
  split <label>         split the disjunction at <label>; work moves to branch 1
  branch <j> | main     choose where options come from
  contract [statement]  fold the branches back into the main derivation
  extract <id> [--lemma]  store the result in the registry
  save <path> [id] [--lemma]  write the listing
  undo | show | options | help | quit";

pub struct Repl<'a> {
    store: &'a mut Store,
    session: Session,
    target: Target,
    options: Vec<DerivOption>,
    options_path: PathBuf,
    named: Option<(String, ScriptKind)>,
}

fn kind_flag(args: &[&str]) -> (EntryKind, ScriptKind) {
    if args.contains(&"--lemma") {
        (EntryKind::Lemma, ScriptKind::Lemma)
    } else {
        (EntryKind::Theorem, ScriptKind::Theorem)
    }
}

impl<'a> Repl<'a> {
    pub fn new(store: &'a mut Store, premises: Vec<Statement>, options_path: PathBuf) -> Result<Self, String> {
        let session = Session::new(premises, &store.params).map_err(|e| e.to_string())?;
        Ok(Repl { store, session, target: Target::Main, options: vec![], options_path, named: None })
    }

    pub fn session(&self) -> &Session {
        &self.session
    }

    /// Regenerate the option list, write it out and show the state.
    fn refresh(&mut self, out: &mut dyn Write) -> Result<(), String> {
        self.options = self.session.options(self.target, &self.store.registry, &self.store.params).unwrap_or_default();
        let listing = render_options(&self.options);
        std::fs::write(&self.options_path, &listing).map_err(|e| format!("{}: {e}", self.options_path.display()))?;
        let w = |e: std::io::Error| e.to_string();
        write!(out, "{}", render_derivation(&self.session.derivation)).map_err(w)?;
        let place = match self.target {
            Target::Main => "main".to_string(),
            Target::Branch(j) => format!("branch {}", j + 1),
        };
        writeln!(out, "options ({place}, {}):", self.options.len()).map_err(w)?;
        write!(out, "{listing}").map_err(w)
    }

    fn pick(&mut self, n: usize, source: usize) -> Result<(), String> {
        let opt = n.checked_sub(1).and_then(|i| self.options.get(i)).ok_or(format!("no option {n}"))?.clone();
        let source = source.checked_sub(1).ok_or("sources are numbered from 1")?;
        self.session.apply(&opt, source, &self.store.params).map_err(|e| e.to_string())
    }

    /// Run one command. `Ok(false)` ends the loop.
    pub fn command(&mut self, line: &str, out: &mut dyn Write) -> Result<bool, String> {
        let words: Vec<&str> = line.split_whitespace().collect();
        let Some((&verb, args)) = words.split_first() else { return Ok(true) };
        let number = |i: usize| -> Result<usize, String> {
            args.get(i).ok_or(format!("`{verb}` needs a number"))?.parse::<usize>().map_err(|_| format!("`{}` is not a number", args[i]))
        };
        let params = self.store.params;
        match verb {
            "quit" | "exit" => return Ok(false),
            "help" => writeln!(out, "{HELP}").map_err(|e| e.to_string())?,
            "show" | "options" => {}
            "pick" => {
                let source = if args.len() > 1 { number(1)? } else { 1 };
                self.pick(number(0)?, source)?;
            }
            "false" => {
                let n = self.options.iter().position(DerivOption::is_false).ok_or("no option concludes False")?;
                self.pick(n + 1, 1)?;
            }
            "split" => {
                self.session.split(number(0)?, &params).map_err(|e| e.to_string())?;
                self.target = Target::Branch(0);
            }
            "branch" => {
                let j = number(0)?;
                let count = self.session.derivation.split().map(|s| s.branches.len()).ok_or("no split is active")?;
                if j == 0 || j > count {
                    return Err(format!("branches are numbered 1..{count}"));
                }
                self.target = Target::Branch(j - 1);
            }
            "main" => self.target = Target::Main,
            "contract" => {
                let rest = line.trim_start().strip_prefix("contract").unwrap_or("").trim();
                let goal = if rest.is_empty() { None } else { Some(parse_statement(rest).map_err(|e| e.to_string())?) };
                self.session.contract(goal.as_ref(), &params).map_err(|e| e.to_string())?;
                self.target = Target::Main;
            }
            "extract" => {
                let id = args.first().ok_or("`extract` needs an id")?;
                let (kind, script_kind) = kind_flag(args);
                let x = self.session.extract(kind, id, &self.store.registry, &params).map_err(|e| e.to_string())?;
                let header = match &x.entry {
                    Entry::Cpe(c) => c.header(),
                    Entry::False(f) => f.header(),
                    Entry::Schema(_) => unreachable!(),
                };
                if let Err(e) = self.store.registry.add_entry(x.entry, &params) {
                    self.session.undo();
                    return Err(e.to_string());
                }
                self.store.save().map_err(|e| e.to_string())?;
                writeln!(out, "extracted {id}: {}", render_header(&header)).map_err(|e| e.to_string())?;
                for w in &x.warnings {
                    writeln!(out, "warning: {w}").map_err(|e| e.to_string())?;
                }
                self.named = Some((id.to_string(), script_kind));
            }
            "save" => {
                let path = args.first().ok_or("`save` needs a path")?;
                let (_, mut kind) = kind_flag(args);
                let id = match (args.get(1).filter(|a| !a.starts_with("--")), &self.named) {
                    (Some(id), _) => id.to_string(),
                    (None, Some((id, k))) => {
                        kind = *k;
                        id.clone()
                    }
                    (None, None) => "T".to_string(),
                };
                let script = to_script(&self.session.derivation, kind, &id, &self.store.registry, &params).map_err(|e| e.to_string())?;
                std::fs::write(path, render_proof(&script)).map_err(|e| format!("{path}: {e}"))?;
                writeln!(out, "wrote {path}").map_err(|e| e.to_string())?;
                return Ok(true);
            }
            "undo" => {
                if !self.session.undo() {
                    return Err("nothing to undo".into());
                }
                if self.session.derivation.split().is_none() {
                    self.target = Target::Main;
                }
            }
            other => return Err(format!("unknown command `{other}`; try `help`")),
        }
        self.refresh(out)?;
        Ok(true)
    }

    /// Read commands until `quit` or end of input. Returns the number of
    /// commands that failed.
    pub fn run(&mut self, input: &mut dyn BufRead, out: &mut dyn Write) -> usize {
        let mut failures = 0;
        if let Err(e) = self.refresh(out) {
            let _ = writeln!(out, "error: {e}");
            return 1;
        }
        let mut line = String::new();
        loop {
            line.clear();
            match input.read_line(&mut line) {
                Ok(0) | Err(_) => break,
                Ok(_) => {}
            }
            let cmd = line.trim();
            if cmd.is_empty() || cmd.starts_with('#') {
                continue;
            }
            let _ = writeln!(out, "> {cmd}");
            match self.command(cmd, out) {
                Ok(true) => {}
                Ok(false) => break,
                Err(e) => {
                    failures += 1;
                    let _ = writeln!(out, "error: {e}");
                }
            }
        }
        failures
    }
}
