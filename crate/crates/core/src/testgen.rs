//! Seeded generator of closed, well-typed terms.
//!
//! Terms are built type-directed from a small grammar: literals, addition,
//! lambdas over `Int` or over the type of a visible local, applications, and
//! instantiations of a few closed polymorphic combinators (identity, `K`,
//! Church booleans and their conditional, `compose`, `twice`). Each term
//! comes with the type the generator assigned it, computed here without the
//! typechecker so the two can be compared.

use std::sync::OnceLock;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use crate::ast::{Name, ScopeType, Term, Ty};
use crate::syntax::parse_term;

pub const DEFAULT_MAX_DEPTH: usize = 6;

const NAMES: [&str; 6] = ["x", "y", "z", "w", "f", "g"];

#[derive(Clone, Debug)]
pub struct Generated {
    pub term: Term,
    pub ty: Ty,
}

struct Templates {
    id: Term,
    k: Term,
    tru: Term,
    fls: Term,
    cond: Term,
    compose: Term,
    twice: Term,
}

fn templates() -> &'static Templates {
    static CELL: OnceLock<Templates> = OnceLock::new();
    CELL.get_or_init(|| {
        let p = |s: &str| parse_term(s).expect("template parses");
        Templates {
            id: p(r"/\'a. \x:'a. x"),
            k: p(r"/\'a. /\'b. \x:'a. \y:'b. x"),
            tru: p(r"/\'a. /\'b. \t:'a. \f:'b. t"),
            fls: p(r"/\'a. /\'b. \t:'a. \f:'b. f"),
            cond: p(r"/\'a. /\'b. /\'c. /\'d. \t:'a. \f:'b. \c:'a -{}-> 'b -'d-> 'c. c t f"),
            compose: p(
                r"/\'a. /\'b. /\'c. /\'d1. /\'d2. \f:'b -'d1-> 'c. \g:'a -'d2-> 'b. \x:'a. f (g x)",
            ),
            twice: p(r"/\'d. \f:Int -'d-> Int. \x:Int. f (f x)"),
        }
    })
}

fn scope(fields: Vec<(&str, Ty)>) -> Ty {
    Ty::Scope(ScopeType::from_fields(fields).expect("distinct fields"))
}

fn tapps(t: &Term, tys: impl IntoIterator<Item = Ty>) -> Term {
    tys.into_iter().fold(t.clone(), Term::tapp)
}

/// Locals in scope, innermost last.
type Ctx = Vec<(Name, Ty)>;

fn visible(ctx: &Ctx) -> Vec<(Name, Ty)> {
    let mut out: Vec<(Name, Ty)> = Vec::new();
    for (n, t) in ctx.iter().rev() {
        if !out.iter().any(|(m, _)| m == n) {
            out.push((n.clone(), t.clone()));
        }
    }
    out
}

/// The captured-variable record of `\param. body` under `ctx`.
fn delta(ctx: &Ctx, param: &Name, body: &Term) -> Ty {
    let fields: Vec<(Name, Ty)> = body
        .free_vars()
        .into_iter()
        .filter(|y| y != param)
        .filter_map(|y| visible(ctx).into_iter().find(|(n, _)| *n == y))
        .collect();
    Ty::Scope(ScopeType::from_fields(fields).expect("distinct fields"))
}

fn int_to_int(s: Ty) -> Ty {
    Ty::clos(Ty::Int, s, Ty::Int)
}

pub struct TermGen {
    rng: StdRng,
    max_depth: usize,
}

impl TermGen {
    pub fn new(seed: u64) -> Self {
        TermGen {
            rng: StdRng::seed_from_u64(seed),
            max_depth: DEFAULT_MAX_DEPTH,
        }
    }

    pub fn with_max_depth(mut self, max_depth: usize) -> Self {
        self.max_depth = max_depth;
        self
    }

    /// A closed term of any type.
    pub fn term(&mut self) -> Generated {
        let (term, ty) = self.any(&Vec::new(), self.max_depth);
        Generated { term, ty }
    }

    /// A closed term of type `Int`.
    pub fn int_term(&mut self) -> Term {
        self.int(&Vec::new(), self.max_depth)
    }

    fn name(&mut self) -> Name {
        Name::from(*NAMES.choose(&mut self.rng).expect("non-empty"))
    }

    fn literal(&mut self) -> Term {
        match self.rng.gen_range(0..20) {
            0 => Term::int(i64::MAX),
            1 => Term::int(i64::MIN),
            _ => Term::int(self.rng.gen_range(-5..=20)),
        }
    }

    fn locals_of(&self, ctx: &Ctx, want: impl Fn(&Ty) -> bool) -> Vec<Name> {
        visible(ctx)
            .into_iter()
            .filter(|(_, t)| want(t))
            .map(|(n, _)| n)
            .collect()
    }

    fn int(&mut self, ctx: &Ctx, depth: usize) -> Term {
        let ints = self.locals_of(ctx, |t| *t == Ty::Int);
        if depth == 0 {
            return match ints.choose(&mut self.rng) {
                Some(x) if self.rng.gen_bool(0.6) => Term::var(x.clone()),
                _ => self.literal(),
            };
        }
        let d = depth - 1;
        match self.rng.gen_range(0..11) {
            0 => self.literal(),
            1 => match ints.choose(&mut self.rng) {
                Some(x) => Term::var(x.clone()),
                None => self.literal(),
            },
            2 => Term::add(self.int(ctx, d), self.int(ctx, d)),
            3 => {
                let (arg, arg_ty) = self.any(ctx, d);
                let x = self.name();
                let mut inner = ctx.clone();
                inner.push((x.clone(), arg_ty.clone()));
                let body = self.int(&inner, d);
                Term::app(Term::abs(x, arg_ty, body), arg)
            }
            4 => {
                let fns = self.locals_of(ctx, |t| {
                    matches!(t, Ty::ClosArrow { domain, codomain, .. }
                        if **domain == Ty::Int && **codomain == Ty::Int)
                });
                match fns.choose(&mut self.rng) {
                    Some(f) => Term::app(Term::var(f.clone()), self.int(ctx, d)),
                    None => self.int(ctx, d),
                }
            }
            5 => {
                let (f, _) = self.int_fn(ctx, d);
                Term::app(f, self.int(ctx, d))
            }
            6 => {
                let (a, b) = (self.int(ctx, d), self.int(ctx, d));
                let t = templates();
                let pick = if self.rng.gen_bool(0.5) {
                    &t.tru
                } else {
                    &t.fls
                };
                Term::apps(tapps(pick, [Ty::Int, Ty::Int]), [a, b])
            }
            7 => {
                let (a, b) = (self.int(ctx, d), self.int(ctx, d));
                let t = templates();
                let (boolean, d_scope) = if self.rng.gen_bool(0.5) {
                    (&t.tru, scope(vec![("t", Ty::Int)]))
                } else {
                    (&t.fls, scope(vec![]))
                };
                Term::apps(
                    tapps(&t.cond, [Ty::Int, Ty::Int, Ty::Int, d_scope]),
                    [a, b, tapps(boolean, [Ty::Int, Ty::Int])],
                )
            }
            8 => {
                let (f, sf) = self.int_fn(ctx, d);
                let (g, sg) = self.int_fn(ctx, d);
                let x = self.int(ctx, d);
                Term::apps(
                    tapps(&templates().compose, [Ty::Int, Ty::Int, Ty::Int, sf, sg]),
                    [f, g, x],
                )
            }
            9 => {
                let (f, sf) = self.int_fn(ctx, d);
                let x = self.int(ctx, d);
                Term::apps(tapps(&templates().twice, [sf]), [f, x])
            }
            _ => {
                let a = self.int(ctx, d);
                let (b, b_ty) = self.any(ctx, d);
                Term::apps(tapps(&templates().k, [Ty::Int, b_ty]), [a, b])
            }
        }
    }

    /// A term of type `Int -s-> Int`, with its scope `s`.
    fn int_fn(&mut self, ctx: &Ctx, depth: usize) -> (Term, Ty) {
        let x = self.name();
        let mut inner = ctx.clone();
        inner.push((x.clone(), Ty::Int));
        let body = self.int(&inner, depth);
        let s = delta(ctx, &x, &body);
        (Term::abs(x, Ty::Int, body), s)
    }

    fn any(&mut self, ctx: &Ctx, depth: usize) -> (Term, Ty) {
        let locals = visible(ctx);
        if depth == 0 {
            return match locals.choose(&mut self.rng) {
                Some((x, t)) if self.rng.gen_bool(0.5) => (Term::var(x.clone()), t.clone()),
                _ => (self.literal(), Ty::Int),
            };
        }
        let d = depth - 1;
        match self.rng.gen_range(0..8) {
            0 | 1 => (self.int(ctx, depth), Ty::Int),
            2 | 3 => {
                let param_ty = match self.rng.gen_range(0..4) {
                    0 => locals
                        .choose(&mut self.rng)
                        .map(|(_, t)| t.clone())
                        .unwrap_or(Ty::Int),
                    1 => int_to_int(scope(vec![])),
                    _ => Ty::Int,
                };
                let x = self.name();
                let mut inner = ctx.clone();
                inner.push((x.clone(), param_ty.clone()));
                let (body, body_ty) = self.any(&inner, d);
                let s = delta(ctx, &x, &body);
                (
                    Term::abs(x, param_ty.clone(), body),
                    Ty::clos(param_ty, s, body_ty),
                )
            }
            4 => {
                let (a, a_ty) = self.any(ctx, d);
                let fields = vec![("x", a_ty.clone())];
                (
                    Term::app(tapps(&templates().k, [a_ty.clone(), Ty::Int]), a),
                    Ty::clos(Ty::Int, scope(fields), a_ty),
                )
            }
            5 => {
                let (a, a_ty) = self.any(ctx, d);
                (Term::app(tapps(&templates().id, [a_ty.clone()]), a), a_ty)
            }
            6 => match locals.choose(&mut self.rng) {
                Some((x, t)) => (Term::var(x.clone()), t.clone()),
                None => self.int_fn_any(ctx, d),
            },
            _ => {
                let (f, sf) = self.int_fn(ctx, d);
                let (g, sg) = self.int_fn(ctx, d);
                let f_ty = int_to_int(sf.clone());
                let g_ty = int_to_int(sg.clone());
                let s = scope(vec![("f", f_ty), ("g", g_ty)]);
                (
                    Term::apps(
                        tapps(&templates().compose, [Ty::Int, Ty::Int, Ty::Int, sf, sg]),
                        [f, g],
                    ),
                    int_to_int(s),
                )
            }
        }
    }

    fn int_fn_any(&mut self, ctx: &Ctx, depth: usize) -> (Term, Ty) {
        let (f, s) = self.int_fn(ctx, depth);
        (f, int_to_int(s))
    }
}
