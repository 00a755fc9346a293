//! Matching stored templates against lines of a derivation.

use crate::model::{match_program_in_order, match_statement, operands_of, Program, Statement, Substitution};

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for rest in permutations(n - 1) {
        for pos in 0..=rest.len() {
            let mut p = rest.clone();
            p.insert(pos, n - 1);
            out.push(p);
        }
    }
    out
}

/// Every extension of `sub` under which `template` maps onto `candidate`.
///
/// Direct matching is tried first. When both sides are disjunctions (sugar
/// counts, after one level of expansion) and direct matching fails, the
/// candidate's operands are also tried in every order.
pub fn match_statement_all(template: &Statement, candidate: &Statement, sub: &Substitution) -> Vec<Substitution> {
    let mut s = sub.clone();
    if match_statement(template, candidate, &mut s) {
        return vec![s];
    }
    let both_disjunctive = matches!(template, Statement::Disjunction(_)) || matches!(candidate, Statement::Disjunction(_));
    if !both_disjunctive {
        return vec![];
    }
    let (Some(tops), Some(cops)) = (operands_of(template), operands_of(candidate)) else {
        return vec![];
    };
    if tops.len() != cops.len() || tops.len() > 4 {
        return vec![];
    }
    let mut out: Vec<Substitution> = Vec::new();
    for perm in permutations(cops.len()) {
        let mut s = sub.clone();
        let ok = tops.iter().zip(&perm).all(|(t, &ci)| match_program_in_order(t, &cops[ci], &mut s));
        if ok && !out.contains(&s) {
            out.push(s);
        }
    }
    out
}

/// All ways of mapping the template statements, in order, onto lines of
/// `lines`. Each result gives the chosen line positions and the
/// substitution. With `distinct` false a line may serve several template
/// positions.
pub fn sublist_matches(template: &[Statement], lines: &[&Statement], distinct: bool) -> Vec<(Vec<usize>, Substitution)> {
    let mut out = Vec::new();
    let mut chosen = Vec::with_capacity(template.len());
    search(template, lines, distinct, &mut chosen, &Substitution::new(), &mut out);
    out
}

fn quick_reject(t: &Statement, c: &Statement) -> bool {
    match (t, c) {
        (Statement::Atomic(a), Statement::Atomic(b)) => {
            a.name != b.name || a.inputs.len() != b.inputs.len() || a.outputs.len() != b.outputs.len()
        }
        _ => false,
    }
}

fn search(
    template: &[Statement],
    lines: &[&Statement],
    distinct: bool,
    chosen: &mut Vec<usize>,
    sub: &Substitution,
    out: &mut Vec<(Vec<usize>, Substitution)>,
) {
    let i = chosen.len();
    if i == template.len() {
        out.push((chosen.clone(), sub.clone()));
        return;
    }
    for (li, line) in lines.iter().enumerate() {
        if distinct && chosen.contains(&li) {
            continue;
        }
        if quick_reject(&template[i], line) {
            continue;
        }
        for s in match_statement_all(&template[i], line, sub) {
            chosen.push(li);
            search(template, lines, distinct, chosen, &s, out);
            chosen.pop();
        }
    }
}

/// Whether some sublist of `host` (distinct positions, any order) is an
/// instance of `template`.
pub fn contains_instance(host: &Program, template: &Program) -> bool {
    let lines: Vec<&Statement> = host.iter().collect();
    !sublist_matches(template.statements(), &lines, true).is_empty()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formats::{parse_program, parse_statement};

    fn st(s: &str) -> Statement {
        parse_statement(s).unwrap()
    }

    #[test]
    fn repeated_line_allowed_when_asked() {
        let template = [st("Mult([a,b],[c])"), st("Mult([-1,b],[d])")];
        let line = st("Mult([-1,a],[b])");
        let lines = [&line];
        assert!(sublist_matches(&template, &lines, true).is_empty());
        let found = sublist_matches(&template, &lines, false);
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].0, vec![0, 0]);
    }

    #[test]
    fn sugar_against_disjunction() {
        let t = st("Lt([a,b],[])|Lt([b,a],[])");
        assert_eq!(match_statement_all(&t, &st("Neq([x,y],[])"), &Substitution::new()).len(), 2);
        assert_eq!(match_statement_all(&st("Neq([a,b],[])"), &st("Lt([y,x],[])|Lt([x,y],[])"), &Substitution::new()).len(), 2);
    }

    #[test]
    fn instance_search() {
        let host = parse_program("[Lt([x,x],[]), Add([x,y],[z])]").unwrap();
        assert!(contains_instance(&host, &parse_program("Lt([a,a],[])").unwrap()));
        assert!(!contains_instance(&parse_program("Lt([a,b],[])").unwrap(), &parse_program("Lt([a,a],[])").unwrap()));
    }
}
