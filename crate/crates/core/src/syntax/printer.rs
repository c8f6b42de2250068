use std::fmt::Write;

use super::SourceProgram;
use crate::ast::{Term, TermKind, Ty, TypeScheme};

// Precedence levels for types.
const TY_ARROW: u8 = 0;
const TY_CON: u8 = 1;
const TY_ATOM: u8 = 2;

// Precedence levels for terms.
const TM_LAMBDA: u8 = 0;
const TM_SUM: u8 = 1;
const TM_APP: u8 = 2;
const TM_ATOM: u8 = 3;

pub fn print_type(ty: &Ty) -> String {
    let mut out = String::new();
    write_ty(&mut out, ty, TY_ARROW);
    out
}

pub fn print_scheme(s: &TypeScheme) -> String {
    let mut out = String::new();
    for q in s.quantified() {
        let _ = write!(out, "forall '{q}. ");
    }
    write_ty(&mut out, s.body(), TY_ARROW);
    out
}

pub fn print_term(t: &Term) -> String {
    let mut out = String::new();
    write_term(&mut out, t, TM_LAMBDA);
    out
}

pub fn print_program(p: &SourceProgram) -> String {
    let mut out = String::new();
    for d in &p.type_decls {
        let _ = writeln!(out, "type {}/{}", d.name, d.arity);
    }
    for b in &p.bindings {
        let _ = writeln!(out, "let {} = {}", b.name, print_term(&b.term));
    }
    out
}

fn paren(out: &mut String, wrap: bool, body: impl FnOnce(&mut String)) {
    if wrap {
        out.push('(');
    }
    body(out);
    if wrap {
        out.push(')');
    }
}

fn write_ty(out: &mut String, ty: &Ty, prec: u8) {
    match ty {
        Ty::Var(a) => {
            out.push('\'');
            out.push_str(a.as_str());
        }
        Ty::Int => out.push_str("Int"),
        Ty::Scope(s) => {
            out.push('{');
            for (i, (name, t)) in s.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                out.push_str(name.as_str());
                out.push_str(": ");
                write_ty(out, t, TY_ARROW);
            }
            out.push('}');
        }
        Ty::ClosArrow {
            domain,
            scope,
            codomain,
        } => paren(out, prec > TY_ARROW, |out| {
            write_ty(out, domain, TY_CON);
            out.push_str(" -");
            write_ty(out, scope, TY_ATOM);
            out.push_str("-> ");
            write_ty(out, codomain, TY_ARROW);
        }),
        Ty::PlainArrow { domain, codomain } => paren(out, prec > TY_ARROW, |out| {
            write_ty(out, domain, TY_CON);
            out.push_str(" -> ");
            write_ty(out, codomain, TY_ARROW);
        }),
        Ty::Con(name, args) => match args.as_slice() {
            [] => out.push_str(name.as_str()),
            [arg] => paren(out, prec > TY_CON, |out| {
                write_ty(out, arg, TY_CON);
                out.push(' ');
                out.push_str(name.as_str());
            }),
            args => paren(out, prec > TY_CON, |out| {
                out.push('(');
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    write_ty(out, a, TY_ARROW);
                }
                out.push_str(") ");
                out.push_str(name.as_str());
            }),
        },
    }
}

fn write_term(out: &mut String, t: &Term, prec: u8) {
    match &t.kind {
        TermKind::Var(x) => out.push_str(x.as_str()),
        TermKind::Int(n) => {
            let _ = write!(out, "{n}");
        }
        TermKind::Abs {
            param,
            param_ty,
            body,
        } => paren(out, prec > TM_LAMBDA, |out| {
            let _ = write!(out, "\\{param}:");
            write_ty(out, param_ty, TY_ARROW);
            out.push_str(". ");
            write_term(out, body, TM_LAMBDA);
        }),
        TermKind::TAbs { ty_param, body } => paren(out, prec > TM_LAMBDA, |out| {
            let _ = write!(out, "/\\'{ty_param}. ");
            write_term(out, body, TM_LAMBDA);
        }),
        TermKind::Add(a, b) => paren(out, prec > TM_SUM, |out| {
            write_term(out, a, TM_SUM);
            out.push_str(" + ");
            write_term(out, b, TM_APP);
        }),
        TermKind::App(f, a) => paren(out, prec > TM_APP, |out| {
            write_term(out, f, TM_APP);
            out.push(' ');
            write_term(out, a, TM_ATOM);
        }),
        TermKind::TApp(f, ty) => paren(out, prec > TM_APP, |out| {
            write_term(out, f, TM_APP);
            out.push_str(" [");
            write_ty(out, ty, TY_ARROW);
            out.push(']');
        }),
    }
}
