//! One pass/fail line per acceptance criterion. Run with
//! `cargo test --test acceptance -- --nocapture` to see the lines.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use common::strategies::{any_stmt, build, closure, dag, program, rewrite};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use vpc_core::engine::{check_proof, extract_theorem, to_script, ExtractConfig, Status};
use vpc_core::exec::{cpe_oracle, exec_program, Env, ExecOutcome, Value, DEFAULT_GRID_CAP};
use vpc_core::formats::{parse_program, parse_statement, render_proof, render_statement, Conclusion, LineContent};
use vpc_core::model::{equiv, io_equivalent, validate_program, Program, VarName};
use vpc_core::registry::{Entry, EntryKind, SEED};
use vpc_core::MachineParams;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn golden_corpus() -> Outcome {
    let start = Instant::now();
    let (_, reports) = common::check_all();
    let secs = start.elapsed().as_secs_f64();
    let failed: Vec<String> = reports.iter().filter(|r| !r.passed()).map(|r| r.summary()).collect();
    ensure(failed.is_empty(), || failed.join("; "))?;
    ensure(secs < 10.0, || format!("took {secs:.1}s"))?;
    Ok(format!("{} listings check in {secs:.2}s", reports.len()))
}

/// Walk the corpus in order, calling `f` on each listing with the registry
/// of everything before it.
fn each_fixture(mut f: impl FnMut(&str, &vpc_core::formats::ProofScript, &vpc_core::registry::Registry) -> Result<(), String>) -> Result<(), String> {
    let p = common::params();
    let mut reg = common::seed();
    for id in common::FIXTURE_ORDER {
        let script = common::fixture(id);
        f(id, &script, &reg).map_err(|e| format!("{id}: {e}"))?;
        let r = check_proof(&script, &reg, &p);
        reg.add_entry(common::entry_of(&script, r.deps), &p).map_err(|e| e.to_string())?;
    }
    Ok(())
}

fn option_completeness() -> Outcome {
    let mut lines = 0;
    each_fixture(|_, script, reg| {
        common::replay(script, reg, true)?;
        lines += script.lines.len();
        Ok(())
    })?;
    Ok(format!("every derived line among {lines} is offered"))
}

fn falsity_workflow() -> Outcome {
    let p = common::params();
    let mut seen = Vec::new();
    each_fixture(|id, script, reg| {
        if script.header.conclusion != Conclusion::False {
            return Ok(());
        }
        let d = common::replay(script, reg, true)?;
        ensure(d.status() == Status::ConcludedFalse, || "did not conclude False".into())?;
        let last = d.lines().last().unwrap();
        ensure(last.content == LineContent::False && last.connections()[0].entry == "A33", || "last step is not A33".into())?;
        let x = extract_theorem(&d, EntryKind::Lemma, id, reg, &p, &ExtractConfig::default()).map_err(|e| e.to_string())?;
        ensure(matches!(&x.entry, Entry::False(f) if f.program.statements() == &script.header.premise[..]), || "wrong falsity entry".into())?;
        seen.push(id.to_string());
        Ok(())
    })?;
    ensure(seen == ["L8", "L10"], || format!("falsity listings were {seen:?}"))?;
    Ok("L8 and L10 close on False via A33 and extract as falsity entries".into())
}

fn split_contract_sessions() -> Outcome {
    let p = common::params();
    let mut composite = 0;
    each_fixture(|id, script, reg| {
        let wanted = matches!(id, "T18" | "T19" | "T20" | "T21" | "T22" | "T23" | "T24" | "T25");
        let has_split = script.lines.iter().any(|l| l.connections.len() > 1);
        if !wanted || !has_split {
            return Ok(());
        }
        let d = common::replay(script, reg, false)?;
        let rendered = render_proof(&to_script(&d, script.kind, id, reg, &p).map_err(|e| e.to_string())?);
        let text = std::fs::read_to_string(common::fixture_dir().join(format!("{id}.prf"))).unwrap();
        ensure(rendered == text, || format!("listing differs:\n{rendered}"))?;
        composite += script.lines.iter().filter(|l| l.connections.len() > 1).count();
        Ok(())
    })?;
    ensure(composite > 0, || "no composite lines replayed".into())?;
    Ok(format!("{composite} composite lines reproduced byte for byte"))
}

fn oracle_soundness() -> Outcome {
    let p = MachineParams::default().with_n(i32::MAX as i64).unwrap();
    let (reg, _) = common::check_all();
    let mut checked = 0;
    for e in reg.iter() {
        let fixture = common::FIXTURE_ORDER.contains(&e.id());
        let r = match e {
            Entry::Cpe(c) if c.kind == EntryKind::Axiom || fixture => cpe_oracle(&c.premise, &c.conclusion, -10..=10, &p, DEFAULT_GRID_CAP),
            Entry::False(f) if fixture => cpe_oracle(&f.program, &Program::empty(), -10..=10, &p, DEFAULT_GRID_CAP),
            _ => continue,
        }
        .map_err(|err| format!("{}: {err}", e.id()))?;
        ensure(r.counterexample_count == 0, || format!("{}: {:?}", e.id(), r.counterexamples))?;
        if matches!(e, Entry::False(_)) {
            ensure(r.premise_computable == 0, || format!("{} computes", e.id()))?;
        }
        checked += 1;
    }
    ensure(checked == 32 + 29, || format!("checked {checked} entries"))?;
    let lt = cpe_oracle(&parse_program("[ Lt([a,a],[]) ]").unwrap(), &Program::empty(), -10..=10, &p, DEFAULT_GRID_CAP).unwrap();
    ensure(lt.premise_computable == 0, || "Lt([a,a]) computes".into())?;
    Ok(format!("{checked} entries without counterexamples; Lt([a,a],[]) computes on 0 of {} points", lt.points))
}

fn execution_semantics() -> Outcome {
    const N: i64 = 12;
    let p = MachineParams::default().with_n(N).unwrap();
    let var = |s: &str| VarName::new(s).unwrap();
    let run = |prog: &str, a: i64, b: i64| {
        let mut env = Env::new();
        env.bind(var("a"), Value::Int(a)).unwrap();
        env.bind(var("b"), Value::Int(b)).unwrap();
        exec_program(&parse_program(prog).unwrap(), &env, &p).unwrap()
    };
    let out = |o: &ExecOutcome| match o {
        ExecOutcome::Ok { outputs } => match outputs.get(&var("c")) {
            Some(Value::Int(v)) => Some(*v),
            _ => None,
        },
        _ => None,
    };
    let fits = |x: i64| (x.abs() <= N).then_some(x);
    let mut cases = 0;
    for a in -N..=N {
        for b in -N..=N {
            ensure(run("[ Neq([a,b],[]) ]", a, b).is_ok() == (a != b), || format!("Neq {a} {b}"))?;
            ensure(run("[ Le([a,b],[]) ]", a, b).is_ok() == (a <= b), || format!("Le {a} {b}"))?;
            ensure(out(&run("[ Abs([a,0,-1],[c]) ]", a, b)) == Some(a.abs()), || format!("Abs {a}"))?;
            ensure(out(&run("[ Add([a,b],[c]) ]", a, b)) == fits(a + b), || format!("Add {a} {b}"))?;
            ensure(out(&run("[ Mult([a,b],[c]) ]", a, b)) == fits(a * b), || format!("Mult {a} {b}"))?;
            let div = (b != 0 && a % b == 0).then(|| a / b);
            ensure(out(&run("[ Div([a,b],[c]) ]", a, b)) == div, || format!("Div {a} {b}"))?;
            cases += 6;
        }
    }
    Ok(format!("{cases} executions agree with integer arithmetic"))
}

fn run_prop<S: Strategy>(cases: u32, strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String> {
    TestRunner::new(Config { failure_persistence: None, ..Config::with_cases(cases) }).run(&strategy, test).map_err(|e| e.to_string())
}

fn property_suites() -> Outcome {
    let d = MachineParams::default();
    run_prop(256, (program(), any::<u64>(), any::<u64>()), |(p, s1, s2)| {
        let p0 = validate_program(p.clone(), &d).unwrap();
        let q = rewrite(&p, s1);
        let r = rewrite(q.statements(), s2);
        prop_assert!(equiv(&p0, &p0) && equiv(&p0, &q) && equiv(&q, &p0));
        prop_assert!(equiv(&q, &r) && equiv(&p0, &r));
        Ok(())
    })?;
    run_prop(1000, any_stmt(), |s| {
        let text = render_statement(&s);
        prop_assert_eq!(parse_statement(&text).unwrap(), s);
        Ok(())
    })?;
    let general = parse_program("[ Add([a,b],[d]) ]").unwrap();
    let special = parse_program("[ Add([a,a],[c]) ]").unwrap();
    ensure(io_equivalent(&special, &general).is_ok() && io_equivalent(&general, &special).is_err(), || "io-equivalence is symmetric".into())?;
    run_prop(256, (dag(), any::<prop::sample::Index>()), |(shape, pick)| {
        let mut r = build(&shape);
        let t = pick.index(shape.len());
        let removed: std::collections::BTreeSet<String> = r.retract(&format!("E{t}")).unwrap().into_iter().collect();
        let expected: std::collections::BTreeSet<String> = closure(&shape, &[t]).into_iter().map(|i| format!("E{i}")).collect();
        prop_assert_eq!(removed, expected);
        Ok(())
    })?;
    run_prop(256, dag(), |shape| {
        let mut r = build(&shape);
        let hits: Vec<usize> = shape.iter().enumerate().filter(|(_, (same, _))| *same).map(|(i, _)| i).collect();
        let removed: std::collections::BTreeSet<String> = r.purge_by_falsity("F").unwrap().into_iter().collect();
        let expected: std::collections::BTreeSet<String> = closure(&shape, &hits).into_iter().map(|i| format!("E{i}")).collect();
        prop_assert_eq!(removed, expected);
        Ok(())
    })?;
    Ok("equivalence, text round trip, io-equivalence, retract and purge".into())
}

fn vpc(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["vpc"];
    argv.extend_from_slice(args);
    let code = vpc_cli::cli::run(argv, &mut &b""[..], &mut out, &mut err);
    (code, format!("{}{}", String::from_utf8_lossy(&out), String::from_utf8_lossy(&err)))
}

fn consistency() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let store = dir.path().join("axiom.dat");
    let bogus = "axiom B1\n[ Int([a],[]), Lt([a,a],[]) ]\n\n\
                 theorem B2\n[ Eq([a,a],[]), Lt([a,a],[]) ]\ndeps: B1,A4\nproof: B2.prf\n";
    std::fs::write(&store, format!("{SEED}\n{bogus}")).map_err(|e| e.to_string())?;
    let path = store.to_str().unwrap();

    let (code, out) = vpc(&["--axioms", path, "oracle", "--all"]);
    ensure(code == 1, || format!("oracle exited {code}:\n{out}"))?;
    ensure(out.lines().any(|l| l.starts_with("B1:") && !l.contains("counterexamples=0")), || format!("B1 not flagged:\n{out}"))?;

    let (code, out) = vpc(&["--axioms", path, "retract", "--id", "B1"]);
    ensure(code == 0, || format!("retract exited {code}: {out}"))?;
    let removed: Vec<&str> = out.lines().collect();
    ensure(removed.contains(&"B1") && removed.contains(&"B2"), || format!("removed {removed:?}"))?;

    let (code, out) = vpc(&["--axioms", path, "oracle", "--all"]);
    ensure(code == 0, || format!("store still inconsistent:\n{out}"))?;
    Ok("the oracle flags B1; retract removes B1 and its dependent B2".into())
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 8] = [
        ("golden corpus", golden_corpus),
        ("option completeness", option_completeness),
        ("falsity workflow", falsity_workflow),
        ("split/contract sessions", split_contract_sessions),
        ("oracle soundness", oracle_soundness),
        ("execution semantics", execution_semantics),
        ("property suites", property_suites),
        ("consistency", consistency),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            Err(e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        match result {
            Ok(detail) => println!("PASS {} {name}: {detail}", i + 1),
            Err(why) => {
                println!("FAIL {} {name}: {why}", i + 1);
                failed.push(name);
            }
        }
    }
    assert!(failed.is_empty(), "failed: {failed:?}");
}
