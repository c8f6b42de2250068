mod common;

use std::collections::BTreeSet;

use common::{corpus, Expect};
use sfc_core::eval::{eval_subst_oracle, inline_program, values_agree, Evaluator};
use sfc_core::syntax::print_program;
use sfc_core::typecheck::{check_program, TypeErrorKind};
use sfc_core::{parse_program, Name, Span, Term, TermKind, Value};

/// For each lambda, its free variables that are bound by an enclosing lambda.
fn captured_locals(t: &Term, binders: &mut Vec<Name>, out: &mut Vec<(Span, BTreeSet<Name>)>) {
    match &t.kind {
        TermKind::Abs { param, body, .. } => {
            let fv = t.free_vars();
            out.push((
                t.span,
                fv.into_iter().filter(|y| binders.contains(y)).collect(),
            ));
            binders.push(param.clone());
            captured_locals(body, binders, out);
            binders.pop();
        }
        TermKind::TAbs { body, .. } => captured_locals(body, binders, out),
        TermKind::TApp(f, _) => captured_locals(f, binders, out),
        TermKind::App(a, b) | TermKind::Add(a, b) => {
            captured_locals(a, binders, out);
            captured_locals(b, binders, out);
        }
        TermKind::Var(_) | TermKind::Int(_) => {}
    }
}

#[test]
fn fixtures_reprint_stably() {
    for f in corpus() {
        let p = parse_program(&f.src).unwrap_or_else(|e| panic!("{}: {e}", f.name));
        let once = print_program(&p);
        let twice = print_program(&parse_program(&once).unwrap());
        assert_eq!(once, twice, "{}", f.name);
        let reparsed = parse_program(&once).unwrap();
        assert_eq!(reparsed.type_decls.len(), p.type_decls.len(), "{}", f.name);
        for (a, b) in reparsed.bindings.iter().zip(&p.bindings) {
            assert_eq!((&a.name, &a.term), (&b.name, &b.term), "{}", f.name);
        }
    }
}

#[test]
fn purity_headers_are_accurate() {
    for f in corpus() {
        let p = parse_program(&f.src).unwrap();
        assert_eq!(f.pure, !p.uses_plumbing(), "{}", f.name);
    }
}

#[test]
fn expected_outcomes() {
    for f in corpus() {
        let p = parse_program(&f.src).unwrap();
        let checked = check_program(&p);
        match f.expect {
            Expect::TypeError => {
                let err = checked.expect_err(&f.name);
                assert_eq!(err.error.kind, TypeErrorKind::TabsFreeVars, "{}", f.name);
            }
            Expect::Value(n) => {
                checked.unwrap_or_else(|e| panic!("{}: {e:?}", f.name));
                let ev = Evaluator::new().load(&p).unwrap();
                let main = ev.globals().lookup("main").unwrap();
                assert!(
                    matches!(main, Value::Int(m) if *m == n),
                    "{}: {main}",
                    f.name
                );
            }
            Expect::Nothing => {
                checked.unwrap_or_else(|e| panic!("{}: {e:?}", f.name));
            }
        }
    }
}

#[test]
fn corpus_agrees_with_substitution() {
    for f in corpus()
        .into_iter()
        .filter(|f| f.expect != Expect::TypeError)
    {
        let p = parse_program(&f.src).unwrap();
        let ev = Evaluator::new().load(&p).unwrap();
        for (name, closed) in inline_program(&p) {
            assert!(closed.free_vars().is_empty(), "{}: {name}", f.name);
            let v = ev.globals().lookup(&name).unwrap();
            let ov = eval_subst_oracle(&closed, ev.fuel()).unwrap();
            assert!(values_agree(&ev, v, &ov), "{}: {name}: {v} vs {ov}", f.name);
        }
    }
}

#[test]
fn scope_records_are_exactly_captured_locals() {
    for f in corpus()
        .into_iter()
        .filter(|f| f.expect != Expect::TypeError)
    {
        let p = parse_program(&f.src).unwrap();
        let checked = check_program(&p).unwrap();
        let mut independent = Vec::new();
        for b in &p.bindings {
            captured_locals(&b.term, &mut Vec::new(), &mut independent);
        }
        independent.sort_by_key(|(s, _)| *s);
        let from_checker: Vec<(Span, BTreeSet<Name>)> = checked
            .lambdas_in_source_order()
            .into_iter()
            .map(|l| (l.span, l.scope.names().cloned().collect()))
            .collect();
        assert_eq!(from_checker, independent, "{}", f.name);
    }
}

fn check_env_minimal(v: &Value, globals: &BTreeSet<Name>) {
    if let Value::Closure(c) = v {
        let lam = Term::abs(c.param.clone(), sfc_core::Ty::Int, (*c.body).clone());
        let fv = lam.free_vars();
        let domain = c.captured.domain();
        assert!(domain.is_subset(&fv), "{v}");
        assert!(fv.difference(&domain).all(|y| globals.contains(y)), "{v}");
        for (_, inner) in c.captured.iter() {
            check_env_minimal(inner, globals);
        }
    }
}

#[test]
fn closures_capture_only_their_free_variables() {
    for f in corpus()
        .into_iter()
        .filter(|f| f.expect != Expect::TypeError)
    {
        let p = parse_program(&f.src).unwrap();
        let globals: BTreeSet<Name> = p.bindings.iter().map(|b| b.name.clone()).collect();
        let ev = Evaluator::new().load(&p).unwrap();
        for (_, v) in ev.globals().iter() {
            check_env_minimal(v, &globals);
            if let Value::Closure(_) = v {
                if let Ok(out) = ev.apply(v, Value::Int(1)) {
                    check_env_minimal(&out, &globals);
                }
            }
        }
    }
}
