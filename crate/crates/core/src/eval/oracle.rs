//! Call-by-value evaluation by capture-avoiding substitution.
//!
//! Shares nothing with the environment-passing interpreter beyond the term
//! syntax: functions are plain lambda terms and a program's top-level
//! bindings are inlined, so every term evaluated here is closed.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use super::{Budget, EvalError, EvalErrorKind, DEFAULT_MAX_DEPTH};
use crate::ast::{fresh_name, Name, Span, Term, TermKind, Ty};
use crate::syntax::SourceProgram;

/// A value of the substitution interpreter.
#[derive(Clone, Debug, PartialEq)]
pub enum OracleValue {
    Lam {
        param: Name,
        param_ty: Ty,
        body: Arc<Term>,
    },
    TyLam {
        ty_param: Name,
        body: Arc<Term>,
    },
    Int(i64),
}

impl OracleValue {
    pub fn to_term(&self) -> Term {
        match self {
            OracleValue::Lam {
                param,
                param_ty,
                body,
            } => TermKind::Abs {
                param: param.clone(),
                param_ty: param_ty.clone(),
                body: Arc::clone(body),
            }
            .into(),
            OracleValue::TyLam { ty_param, body } => TermKind::TAbs {
                ty_param: ty_param.clone(),
                body: Arc::clone(body),
            }
            .into(),
            OracleValue::Int(n) => Term::int(*n),
        }
    }

    pub fn as_int(&self) -> Option<i64> {
        match self {
            OracleValue::Int(n) => Some(*n),
            _ => None,
        }
    }
}

impl fmt::Display for OracleValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_term())
    }
}

fn free_type_vars_of_term(t: &Term) -> BTreeSet<Name> {
    fn go(t: &Term, bound: &mut Vec<Name>, out: &mut BTreeSet<Name>) {
        let mut add = |ty: &Ty, bound: &Vec<Name>| {
            for a in ty.free_type_vars() {
                if !bound.contains(&a) {
                    out.insert(a);
                }
            }
        };
        match &t.kind {
            TermKind::Abs { param_ty, body, .. } => {
                add(param_ty, bound);
                go(body, bound, out);
            }
            TermKind::TApp(f, ty) => {
                add(ty, bound);
                go(f, bound, out);
            }
            TermKind::TAbs { ty_param, body } => {
                bound.push(ty_param.clone());
                go(body, bound, out);
                bound.pop();
            }
            TermKind::App(a, b) | TermKind::Add(a, b) => {
                go(a, bound, out);
                go(b, bound, out);
            }
            TermKind::Var(_) | TermKind::Int(_) => {}
        }
    }
    let mut out = BTreeSet::new();
    go(t, &mut Vec::new(), &mut out);
    out
}

fn rebuild(t: &Term, kind: TermKind) -> Term {
    Term::new(kind, t.span)
}

/// `t[x := s]`, renaming binders of `t` that would capture free
/// variables of `s`.
pub fn subst_term(t: &Term, x: &str, s: &Term) -> Term {
    if !t.free_vars().contains(x) {
        return t.clone();
    }
    match &t.kind {
        TermKind::Var(_) => s.clone(),
        TermKind::Int(_) => t.clone(),
        TermKind::Abs {
            param,
            param_ty,
            body,
        } => {
            let s_fv = s.free_vars();
            let (param, body) = if s_fv.contains(param) {
                let body_fv = body.free_vars();
                let fresh =
                    fresh_name(param, |n| s_fv.contains(n) || body_fv.contains(n) || n == x);
                let renamed = subst_term(body, param, &Term::var(fresh.clone()));
                (fresh, renamed)
            } else {
                (param.clone(), (**body).clone())
            };
            rebuild(
                t,
                TermKind::Abs {
                    param,
                    param_ty: param_ty.clone(),
                    body: Arc::new(subst_term(&body, x, s)),
                },
            )
        }
        TermKind::App(a, b) => rebuild(
            t,
            TermKind::App(Arc::new(subst_term(a, x, s)), Arc::new(subst_term(b, x, s))),
        ),
        TermKind::Add(a, b) => rebuild(
            t,
            TermKind::Add(Arc::new(subst_term(a, x, s)), Arc::new(subst_term(b, x, s))),
        ),
        TermKind::TAbs { ty_param, body } => {
            let s_ftv = free_type_vars_of_term(s);
            let (ty_param, body) = if s_ftv.contains(ty_param) {
                let body_ftv = free_type_vars_of_term(body);
                let fresh = fresh_name(ty_param, |n| s_ftv.contains(n) || body_ftv.contains(n));
                let renamed = subst_type_in_term(body, ty_param, &Ty::Var(fresh.clone()));
                (fresh, renamed)
            } else {
                (ty_param.clone(), (**body).clone())
            };
            rebuild(
                t,
                TermKind::TAbs {
                    ty_param,
                    body: Arc::new(subst_term(&body, x, s)),
                },
            )
        }
        TermKind::TApp(f, ty) => {
            rebuild(t, TermKind::TApp(Arc::new(subst_term(f, x, s)), ty.clone()))
        }
    }
}

/// Replaces the free type variable `a` with `ty` in every annotation of `t`.
pub fn subst_type_in_term(t: &Term, a: &str, ty: &Ty) -> Term {
    match &t.kind {
        TermKind::Var(_) | TermKind::Int(_) => t.clone(),
        TermKind::Abs {
            param,
            param_ty,
            body,
        } => rebuild(
            t,
            TermKind::Abs {
                param: param.clone(),
                param_ty: param_ty.subst(a, ty),
                body: Arc::new(subst_type_in_term(body, a, ty)),
            },
        ),
        TermKind::App(f, g) => rebuild(
            t,
            TermKind::App(
                Arc::new(subst_type_in_term(f, a, ty)),
                Arc::new(subst_type_in_term(g, a, ty)),
            ),
        ),
        TermKind::Add(f, g) => rebuild(
            t,
            TermKind::Add(
                Arc::new(subst_type_in_term(f, a, ty)),
                Arc::new(subst_type_in_term(g, a, ty)),
            ),
        ),
        TermKind::TAbs { ty_param, body }
            if ty_param == a || !free_type_vars_of_term(body).contains(a) =>
        {
            t.clone()
        }
        TermKind::TAbs { ty_param, body } => {
            let ty_ftv = ty.free_type_vars();
            let (ty_param, body) = if ty_ftv.contains(ty_param) {
                let body_ftv = free_type_vars_of_term(body);
                let fresh = fresh_name(ty_param, |n| {
                    ty_ftv.contains(n) || body_ftv.contains(n) || n == a
                });
                let renamed = subst_type_in_term(body, ty_param, &Ty::Var(fresh.clone()));
                (fresh, renamed)
            } else {
                (ty_param.clone(), (**body).clone())
            };
            rebuild(
                t,
                TermKind::TAbs {
                    ty_param,
                    body: Arc::new(subst_type_in_term(&body, a, ty)),
                },
            )
        }
        TermKind::TApp(f, arg) => rebuild(
            t,
            TermKind::TApp(Arc::new(subst_type_in_term(f, a, ty)), arg.subst(a, ty)),
        ),
    }
}

/// Rewrites each binding into a closed term by substituting the (already
/// closed) bodies of the bindings before it.
pub fn inline_program(p: &SourceProgram) -> Vec<(Name, Term)> {
    let mut closed: Vec<(Name, Term)> = Vec::with_capacity(p.bindings.len());
    for b in &p.bindings {
        let term = closed
            .iter()
            .fold(b.term.clone(), |t, (name, body)| subst_term(&t, name, body));
        closed.push((b.name.clone(), term));
    }
    closed
}

fn eval_in(budget: &mut Budget, t: &Term) -> Result<OracleValue, EvalError> {
    budget.step(t.span, |budget| match &t.kind {
        TermKind::Var(x) => Err(EvalError::new(
            EvalErrorKind::UnboundVar,
            t.span,
            format!("`{x}` is unbound"),
        )),
        TermKind::Abs {
            param,
            param_ty,
            body,
        } => Ok(OracleValue::Lam {
            param: param.clone(),
            param_ty: param_ty.clone(),
            body: Arc::clone(body),
        }),
        TermKind::App(f, a) => {
            let f = eval_in(budget, f)?;
            let a = eval_in(budget, a)?;
            apply_in(budget, &f, &a, t.span)
        }
        TermKind::TAbs { ty_param, body } => Ok(OracleValue::TyLam {
            ty_param: ty_param.clone(),
            body: Arc::clone(body),
        }),
        TermKind::TApp(f, ty) => match eval_in(budget, f)? {
            OracleValue::TyLam { ty_param, body } => {
                eval_in(budget, &subst_type_in_term(&body, &ty_param, ty))
            }
            other => Err(EvalError::new(
                EvalErrorKind::TappNonTabs,
                t.span,
                format!("cannot instantiate {other}"),
            )),
        },
        TermKind::Int(n) => Ok(OracleValue::Int(*n)),
        TermKind::Add(a, b) => {
            let a = eval_in(budget, a)?;
            let b = eval_in(budget, b)?;
            match (a, b) {
                (OracleValue::Int(a), OracleValue::Int(b)) => {
                    Ok(OracleValue::Int(a.wrapping_add(b)))
                }
                (a, b) => Err(EvalError::new(
                    EvalErrorKind::AddNonInteger,
                    t.span,
                    format!("cannot add {a} and {b}"),
                )),
            }
        }
    })
}

fn apply_in(
    budget: &mut Budget,
    f: &OracleValue,
    a: &OracleValue,
    span: Span,
) -> Result<OracleValue, EvalError> {
    match f {
        OracleValue::Lam { param, body, .. } => {
            eval_in(budget, &subst_term(body, param, &a.to_term()))
        }
        other => Err(EvalError::new(
            EvalErrorKind::ApplyNonClosure,
            span,
            format!("cannot apply {other}"),
        )),
    }
}

/// Evaluates a closed term by substitution.
pub fn eval_subst_oracle(t: &Term, fuel: u64) -> Result<OracleValue, EvalError> {
    eval_in(&mut Budget::new(fuel, DEFAULT_MAX_DEPTH), t)
}

pub fn oracle_apply(
    f: &OracleValue,
    arg: &OracleValue,
    fuel: u64,
) -> Result<OracleValue, EvalError> {
    apply_in(
        &mut Budget::new(fuel, DEFAULT_MAX_DEPTH),
        f,
        arg,
        Span::default(),
    )
}

/// Runs the body of a type-abstraction value at type `Int`.
pub fn oracle_instantiate(v: &OracleValue, fuel: u64) -> Result<OracleValue, EvalError> {
    match v {
        OracleValue::TyLam { ty_param, body } => {
            eval_subst_oracle(&subst_type_in_term(body, ty_param, &Ty::Int), fuel)
        }
        other => Err(EvalError::new(
            EvalErrorKind::TappNonTabs,
            Span::default(),
            format!("cannot instantiate {other}"),
        )),
    }
}
