use std::fmt::Write;

use sfc_core::syntax::SourceProgram;
use sfc_core::{print_type, Term, TermKind};

/// Indented tree view of a parsed program, one node per line.
pub fn dump_program(p: &SourceProgram) -> String {
    let mut out = String::new();
    for d in &p.type_decls {
        let _ = writeln!(out, "type {}/{} @{}", d.name, d.arity, d.span);
    }
    for b in &p.bindings {
        let _ = writeln!(out, "let {} @{}", b.name, b.span);
        dump_term(&mut out, &b.term, 1);
    }
    out
}

fn dump_term(out: &mut String, t: &Term, depth: usize) {
    let pad = "  ".repeat(depth);
    let _ = match &t.kind {
        TermKind::Var(x) => writeln!(out, "{pad}Var {x} @{}", t.span),
        TermKind::Int(n) => writeln!(out, "{pad}Int {n} @{}", t.span),
        TermKind::Abs {
            param,
            param_ty,
            body,
        } => {
            let _ = writeln!(
                out,
                "{pad}Abs {param}: {} @{}",
                print_type(param_ty),
                t.span
            );
            dump_term(out, body, depth + 1);
            Ok(())
        }
        TermKind::TAbs { ty_param, body } => {
            let _ = writeln!(out, "{pad}TAbs '{ty_param} @{}", t.span);
            dump_term(out, body, depth + 1);
            Ok(())
        }
        TermKind::App(f, a) => {
            let _ = writeln!(out, "{pad}App @{}", t.span);
            dump_term(out, f, depth + 1);
            dump_term(out, a, depth + 1);
            Ok(())
        }
        TermKind::Add(a, b) => {
            let _ = writeln!(out, "{pad}Add @{}", t.span);
            dump_term(out, a, depth + 1);
            dump_term(out, b, depth + 1);
            Ok(())
        }
        TermKind::TApp(f, ty) => {
            let _ = writeln!(out, "{pad}TApp [{}] @{}", print_type(ty), t.span);
            dump_term(out, f, depth + 1);
            Ok(())
        }
    };
}
