//! Command line verbs.
//!
//! Exit codes: 0 success, 1 a negative result (failed proof, counterexample,
//! execution error), 2 bad usage, unreadable input or a refused mutation.

use std::ffi::OsString;
use std::io::{BufRead, Write};
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use vpc_core::engine::check_proof;
use vpc_core::exec::{cpe_oracle, exec_program, Env, ExecOutcome, OracleReport, Value, DEFAULT_GRID_CAP};
use vpc_core::formats::{parse_proofs, parse_statements, render_program, Conclusion, LineContent, ProofScript};
use vpc_core::model::{build::prog, Program, VarName};
use vpc_core::registry::{CpeEntry, Entry, EntryKind, FalseEntry, ProofRef, Registry};
use vpc_core::MachineParams;

use crate::app::{load_params, read_file, AppError, Store};
use crate::repl::Repl;

#[derive(Debug, Parser)]
#[command(name = "vpc", version, about = "Derive, check and execute programs as formal statements")]
pub struct Cli {
    /// Registry file (default: $VPC_AXIOMS, else the built-in seed).
    #[arg(long, global = true, env = crate::app::AXIOMS_ENV)]
    pub axioms: Option<PathBuf>,
    /// Machine parameter file with K, L, M, N, T lines.
    #[arg(long, global = true)]
    pub params: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check proof listings; each passing listing can be cited by later ones.
    Check {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Also run the execution oracle on every single-step line.
        #[arg(long)]
        strict: bool,
        /// Domain for --strict.
        #[arg(long, default_value = "-4..4", allow_hyphen_values = true)]
        domain: String,
    },
    /// Build a derivation interactively from premises.
    Derive {
        /// Premise program, e.g. "[ Neq([a,0],[]), Mult([a,a],[b]) ]".
        #[arg(long, conflicts_with = "premises_file")]
        premises: Option<String>,
        #[arg(long)]
        premises_file: Option<PathBuf>,
        /// Where the current option list is written.
        #[arg(long, default_value = "options.dat")]
        options: PathBuf,
        /// Read commands from a file instead of standard input.
        #[arg(long)]
        script: Option<PathBuf>,
    },
    /// Execute a program on bound inputs.
    Exec {
        #[arg(long, conflicts_with = "text")]
        program: Option<PathBuf>,
        /// Program text.
        #[arg(short = 'e', long = "text")]
        text: Option<String>,
        /// name=value; the value is an integer or a program literal.
        #[arg(long = "bind", allow_hyphen_values = true)]
        bind: Vec<String>,
    },
    /// Brute-force the premise/conclusion semantics of entries.
    Oracle {
        #[arg(long = "entry", required_unless_present = "all")]
        entries: Vec<String>,
        #[arg(long)]
        all: bool,
        #[arg(long, default_value = "-10..10", allow_hyphen_values = true)]
        domain: String,
    },
    /// Remove an entry and everything depending on it.
    Retract {
        #[arg(long)]
        id: String,
    },
    /// Remove every entry whose premise contains an instance of a falsity entry.
    Purge {
        #[arg(long)]
        id: String,
    },
    /// Replace an axiom by a theorem proved from the other entries.
    Promote {
        #[arg(long)]
        id: String,
        #[arg(long)]
        proof: PathBuf,
    },
    /// Serve the session API over HTTP.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
    },
}

/// A statement list, bracketed or bare; not yet validated.
pub fn parse_program(text: &str) -> Result<Program, vpc_core::formats::ParseError> {
    parse_statements(text).map(prog)
}

pub fn parse_domain(text: &str) -> Result<RangeInclusive<i64>, AppError> {
    let bad = || AppError::Usage(format!("domain `{text}` is not of the form lo..hi"));
    let (lo, hi) = text.split_once("..").ok_or_else(bad)?;
    let lo: i64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: i64 = hi.trim().parse().map_err(|_| bad())?;
    if lo > hi {
        return Err(AppError::Usage(format!("domain `{text}` is empty")));
    }
    Ok(lo..=hi)
}

/// Entry a checked listing proves.
pub fn entry_of(script: &ProofScript, deps: Vec<String>, proof: &str) -> Entry {
    let proof = Some(ProofRef::Script(proof.to_string()));
    match &script.header.conclusion {
        Conclusion::False => Entry::False(FalseEntry { id: script.id.clone(), program: prog(script.header.premise.clone()), deps, proof }),
        Conclusion::Statements(c) => Entry::Cpe(CpeEntry {
            id: script.id.clone(),
            kind: match script.kind {
                vpc_core::formats::ScriptKind::Theorem => EntryKind::Theorem,
                vpc_core::formats::ScriptKind::Lemma => EntryKind::Lemma,
            },
            premise: prog(script.header.premise.clone()),
            conclusion: prog(c.clone()),
            deps,
            proof,
        }),
    }
}

/// Oracle run on each single-step line: the cited statements as premise,
/// the line as conclusion. Lines the oracle cannot run are skipped.
fn strict_lines(script: &ProofScript, registry: &Registry, domain: &RangeInclusive<i64>, params: &MachineParams) -> Vec<String> {
    let mut problems = Vec::new();
    for line in &script.lines {
        let [conn] = line.connections.as_slice() else { continue };
        let LineContent::Stmt(concl) = &line.content else { continue };
        if !matches!(registry.get(&conn.entry), Some(Entry::Cpe(_)) | Some(Entry::Schema(_))) {
            continue;
        }
        let cited: Option<Vec<_>> = conn
            .labels
            .iter()
            .map(|&l| script.lines.get(l.wrapping_sub(1)).and_then(|x| x.content.statement().cloned()))
            .collect();
        let Some(cited) = cited else { continue };
        let mut unique = Vec::new();
        for s in cited {
            if !unique.contains(&s) {
                unique.push(s);
            }
        }
        let Ok(premise) = vpc_core::model::validate_program(unique, params) else { continue };
        let conclusion = prog(vec![concl.clone()]);
        if let Ok(r) = cpe_oracle(&premise, &conclusion, domain.clone(), params, DEFAULT_GRID_CAP) {
            if r.counterexample_count > 0 {
                problems.push(format!("line {}: {} counterexamples, e.g. {}", line.label, r.counterexample_count, show_point(&r.counterexamples[0])));
            }
        }
    }
    problems
}

fn show_point(point: &[(VarName, i64)]) -> String {
    point.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" ")
}

fn check(cli: &Cli, files: &[PathBuf], strict: bool, domain: &str, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, AppError> {
    let params = load_params(cli.params.as_deref())?;
    let mut store = Store::open(cli.axioms.clone(), params)?;
    let domain = parse_domain(domain)?;
    let mut failed = false;
    for f in files {
        let text = read_file(f)?;
        let scripts = parse_proofs(&text).map_err(|e| AppError::File { path: f.display().to_string(), message: e.to_string() })?;
        for script in scripts {
            let report = check_proof(&script, &store.registry, &params);
            let mut ok = report.passed();
            let _ = writeln!(out, "{}", report.summary());
            if ok && strict {
                for p in strict_lines(&script, &store.registry, &domain, &params) {
                    ok = false;
                    let _ = writeln!(out, "  oracle: {p}");
                }
            }
            failed |= !ok;
            if ok && !store.registry.contains(&script.id) {
                let entry = entry_of(&script, report.deps.clone(), &f.display().to_string());
                if let Err(e) = store.registry.add_entry(entry, &params) {
                    let _ = writeln!(err, "{}: not added: {e}", script.id);
                }
            }
        }
    }
    Ok(i32::from(failed))
}

fn parse_value(text: &str) -> Result<Value, AppError> {
    if let Ok(i) = text.trim().parse::<i64>() {
        return Ok(Value::Int(i));
    }
    parse_program(text).map(Value::Prog).map_err(|e| AppError::Usage(format!("value `{text}`: {e}")))
}

pub fn bindings(binds: &[String]) -> Result<Env, AppError> {
    let mut env = Env::new();
    for b in binds {
        let (k, v) = b.split_once('=').ok_or_else(|| AppError::Usage(format!("binding `{b}` is not name=value")))?;
        let name = VarName::new(k.trim()).map_err(|e| AppError::Usage(e.to_string()))?;
        env.bind(name, parse_value(v)?).map_err(|e| AppError::Usage(e.to_string()))?;
    }
    Ok(env)
}

pub fn show_value(v: &Value) -> String {
    match v {
        Value::Int(i) => i.to_string(),
        Value::Prog(p) => render_program(p),
    }
}

pub fn describe_outcome(o: &ExecOutcome) -> String {
    match o {
        ExecOutcome::Ok { outputs } => {
            let mut s = "ok".to_string();
            for (k, v) in outputs.iter() {
                s.push_str(&format!("\n{k} = {}", show_value(v)));
            }
            s
        }
        ExecOutcome::TypeViolation { at, detail } => format!("type violation at statement {}: {detail}", at + 1),
        ExecOutcome::DisjunctionViolation { at } => format!("disjunction violation at statement {}: no operand runs", at + 1),
        ExecOutcome::Timeout => "timeout".to_string(),
    }
}

fn exec(cli: &Cli, program: Option<&Path>, text: Option<&str>, bind: &[String], out: &mut dyn Write) -> Result<i32, AppError> {
    let params = load_params(cli.params.as_deref())?;
    let source = match (program, text) {
        (Some(p), _) => read_file(p)?,
        (None, Some(t)) => t.to_string(),
        (None, None) => return Err(AppError::Usage("give --program or --text".into())),
    };
    let p: Program = parse_program(&source).map_err(|e| AppError::Usage(e.to_string()))?;
    let p = vpc_core::model::validate_program(p.into_statements(), &params).map_err(|e| AppError::Usage(e.to_string()))?;
    let env = bindings(bind)?;
    let outcome = exec_program(&p, &env, &params).map_err(|e| AppError::Usage(e.to_string()))?;
    let _ = writeln!(out, "{}", describe_outcome(&outcome));
    Ok(i32::from(!outcome.is_ok()))
}

fn report_line(id: &str, r: &OracleReport) -> String {
    let mut s = format!(
        "{id}: points={} premise-computable={} counterexamples={} timeouts={}",
        r.points, r.premise_computable, r.counterexample_count, r.timeouts
    );
    for c in &r.counterexamples {
        s.push_str(&format!("\n  counterexample: {}", show_point(c)));
    }
    s
}

fn oracle(cli: &Cli, entries: &[String], all: bool, domain: &str, out: &mut dyn Write) -> Result<i32, AppError> {
    let params = load_params(cli.params.as_deref())?;
    let store = Store::open(cli.axioms.clone(), params)?;
    let domain = parse_domain(domain)?;
    let chosen: Vec<&Entry> = if all {
        store.registry.iter().collect()
    } else {
        entries
            .iter()
            .map(|id| store.registry.get(id).ok_or_else(|| AppError::Usage(format!("no entry `{id}`"))))
            .collect::<Result<_, _>>()?
    };
    let mut bad = false;
    for e in chosen {
        let (premise, conclusion) = match e {
            Entry::Cpe(c) => (&c.premise, c.conclusion.clone()),
            Entry::False(f) => (&f.program, Program::empty()),
            Entry::Schema(_) => {
                if !all {
                    let _ = writeln!(out, "{}: schema, skipped", e.id());
                }
                continue;
            }
        };
        if !premise.is_integer_level() || !conclusion.is_integer_level() {
            if !all {
                let _ = writeln!(out, "{}: higher order, skipped", e.id());
            }
            continue;
        }
        match cpe_oracle(premise, &conclusion, domain.clone(), &params, DEFAULT_GRID_CAP) {
            Ok(r) => {
                let falsity_runs = matches!(e, Entry::False(_)) && r.premise_computable > 0;
                bad |= r.counterexample_count > 0 || falsity_runs;
                let _ = writeln!(out, "{}", report_line(e.id(), &r));
                if falsity_runs {
                    let _ = writeln!(out, "  falsity entry runs on {} points", r.premise_computable);
                }
            }
            Err(vpc_core::exec::OracleError::DomainTooLarge { points, .. }) => {
                let _ = writeln!(out, "{}: {points} points, skipped", e.id());
            }
            Err(err) => return Err(AppError::Usage(format!("{}: {err}", e.id()))),
        }
    }
    Ok(i32::from(bad))
}

fn mutate(cli: &Cli, out: &mut dyn Write, f: impl FnOnce(&mut Store) -> Result<Vec<String>, AppError>) -> Result<i32, AppError> {
    let params = load_params(cli.params.as_deref())?;
    let mut store = Store::open(cli.axioms.clone(), params)?;
    if store.path.is_none() {
        return Err(AppError::Usage("give --axioms or set VPC_AXIOMS; the built-in seed is read-only".into()));
    }
    let removed = f(&mut store)?;
    store.save()?;
    for id in removed {
        let _ = writeln!(out, "{id}");
    }
    Ok(0)
}

fn derive(
    cli: &Cli,
    premises: Option<&str>,
    premises_file: Option<&Path>,
    options: &Path,
    script: Option<&Path>,
    input: &mut dyn BufRead,
    out: &mut dyn Write,
) -> Result<i32, AppError> {
    let params = load_params(cli.params.as_deref())?;
    let mut store = Store::open(cli.axioms.clone(), params)?;
    let text = match (premises, premises_file) {
        (Some(t), _) => t.to_string(),
        (None, Some(p)) => read_file(p)?,
        (None, None) => "[]".to_string(),
    };
    let p = parse_program(&text).map_err(|e| AppError::Usage(format!("premises: {e}")))?;
    let mut repl = Repl::new(&mut store, p.into_statements(), options.to_path_buf()).map_err(AppError::Usage)?;
    let failures = match script {
        Some(path) => {
            let body = read_file(path)?;
            repl.run(&mut body.as_bytes(), out)
        }
        None => repl.run(input, out),
    };
    Ok(i32::from(failures > 0))
}

/// Parse `args` and run the verb; returns the exit code.
pub fn run<I, T>(args: I, input: &mut dyn BufRead, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Check { files, strict, domain } => check(&cli, files, *strict, domain, out, err),
        Command::Derive { premises, premises_file, options, script } => {
            derive(&cli, premises.as_deref(), premises_file.as_deref(), options, script.as_deref(), input, out)
        }
        Command::Exec { program, text, bind } => exec(&cli, program.as_deref(), text.as_deref(), bind, out),
        Command::Oracle { entries, all, domain } => oracle(&cli, entries, *all, domain, out),
        Command::Retract { id } => mutate(&cli, out, |s| Ok(s.registry.retract(id)?)),
        Command::Purge { id } => mutate(&cli, out, |s| Ok(s.registry.purge_by_falsity(id)?)),
        Command::Promote { id, proof } => mutate(&cli, out, |s| {
            let text = read_file(proof)?;
            let script = vpc_core::formats::parse_proof(&text)
                .map_err(|e| AppError::File { path: proof.display().to_string(), message: e.to_string() })?;
            let params = s.params;
            s.registry.promote(id, &script, &proof.display().to_string(), &params)?;
            Ok(vec![format!("{id} is now a theorem")])
        }),
        Command::Serve { port, host } => serve(&cli, host, *port, err),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn serve(cli: &Cli, host: &str, port: u16, err: &mut dyn Write) -> Result<i32, AppError> {
    let params = load_params(cli.params.as_deref())?;
    let store = Store::open(cli.axioms.clone(), params)?;
    let rt = tokio::runtime::Runtime::new().map_err(|e| AppError::Usage(e.to_string()))?;
    let addr = format!("{host}:{port}");
    let _ = writeln!(err, "listening on http://{addr}");
    rt.block_on(async move {
        let listener = tokio::net::TcpListener::bind(&addr).await.map_err(|e| AppError::Usage(format!("{addr}: {e}")))?;
        axum::serve(listener, crate::service::router(store)).await.map_err(|e| AppError::Usage(e.to_string()))
    })?;
    Ok(0)
}
