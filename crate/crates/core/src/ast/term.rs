use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use super::{Name, Span, Ty};

/// An expression together with its source position.
///
/// Equality ignores spans: two terms are equal when their trees are.
#[derive(Clone, Debug)]
pub struct Term {
    pub kind: TermKind,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq)]
pub enum TermKind {
    Var(Name),
    Abs {
        param: Name,
        param_ty: Ty,
        body: Arc<Term>,
    },
    App(Arc<Term>, Arc<Term>),
    TAbs {
        ty_param: Name,
        body: Arc<Term>,
    },
    TApp(Arc<Term>, Ty),
    /// Integer literal; not part of the pure calculus.
    Int(i64),
    /// Integer addition; not part of the pure calculus.
    Add(Arc<Term>, Arc<Term>),
}

impl PartialEq for Term {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl Term {
    pub fn new(kind: TermKind, span: Span) -> Self {
        Term { kind, span }
    }

    pub fn at(self, span: Span) -> Self {
        Term { span, ..self }
    }

    pub fn var(name: impl Into<Name>) -> Term {
        TermKind::Var(name.into()).into()
    }

    pub fn abs(param: impl Into<Name>, param_ty: Ty, body: Term) -> Term {
        TermKind::Abs {
            param: param.into(),
            param_ty,
            body: Arc::new(body),
        }
        .into()
    }

    pub fn app(fun: Term, arg: Term) -> Term {
        TermKind::App(Arc::new(fun), Arc::new(arg)).into()
    }

    /// Left-nested application of `fun` to each argument in turn.
    pub fn apps(fun: Term, args: impl IntoIterator<Item = Term>) -> Term {
        args.into_iter().fold(fun, Term::app)
    }

    pub fn tabs(ty_param: impl Into<Name>, body: Term) -> Term {
        TermKind::TAbs {
            ty_param: ty_param.into(),
            body: Arc::new(body),
        }
        .into()
    }

    pub fn tapp(fun: Term, ty: Ty) -> Term {
        TermKind::TApp(Arc::new(fun), ty).into()
    }

    pub fn int(n: i64) -> Term {
        TermKind::Int(n).into()
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(lhs: Term, rhs: Term) -> Term {
        TermKind::Add(Arc::new(lhs), Arc::new(rhs)).into()
    }

    pub fn free_vars(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        let mut bound = Vec::new();
        self.collect_fv(&mut bound, &mut out);
        out
    }

    fn collect_fv(&self, bound: &mut Vec<Name>, out: &mut BTreeSet<Name>) {
        match &self.kind {
            TermKind::Var(x) => {
                if !bound.contains(x) {
                    out.insert(x.clone());
                }
            }
            TermKind::Abs { param, body, .. } => {
                bound.push(param.clone());
                body.collect_fv(bound, out);
                bound.pop();
            }
            TermKind::App(a, b) | TermKind::Add(a, b) => {
                a.collect_fv(bound, out);
                b.collect_fv(bound, out);
            }
            TermKind::TAbs { body, .. } => body.collect_fv(bound, out),
            TermKind::TApp(f, _) => f.collect_fv(bound, out),
            TermKind::Int(_) => {}
        }
    }

    /// True when the term uses integer literals or addition.
    pub fn uses_plumbing(&self) -> bool {
        match &self.kind {
            TermKind::Int(_) | TermKind::Add(..) => true,
            TermKind::Var(_) => false,
            TermKind::Abs { body, .. } | TermKind::TAbs { body, .. } => body.uses_plumbing(),
            TermKind::App(a, b) => a.uses_plumbing() || b.uses_plumbing(),
            TermKind::TApp(f, _) => f.uses_plumbing(),
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        1 + match &self.kind {
            TermKind::Var(_) | TermKind::Int(_) => 0,
            TermKind::Abs { body, .. } | TermKind::TAbs { body, .. } => body.size(),
            TermKind::App(a, b) | TermKind::Add(a, b) => a.size() + b.size(),
            TermKind::TApp(f, _) => f.size(),
        }
    }
}

impl From<TermKind> for Term {
    fn from(kind: TermKind) -> Self {
        Term {
            kind,
            span: Span::default(),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::syntax::print_term(self))
    }
}

/// The free term variables of `t`. Type annotations contribute nothing.
pub fn free_vars(t: &Term) -> BTreeSet<Name> {
    t.free_vars()
}
