//! The typing judgment.
//!
//! A lambda's type is `A -delta-> B` where `delta` maps each of its free
//! local variables to that variable's type. Type abstractions must not
//! mention any local term variable, so a type abstraction never captures.
//! Application demands exact equality of the domain, scope records
//! included.
//!
//! Top-level bindings are program constants: a reference to one from inside
//! a lambda is resolved statically and is not part of the lambda's scope.

use std::collections::HashMap;
use std::fmt;

use crate::ast::{
    free_vars, ty_equal, wf_type, Name, ScopeType, Span, Term, TermKind, Ty, TypeContext,
    TypeScheme, WfError,
};
use crate::syntax::SourceProgram;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TypeErrorKind {
    UnboundVar,
    ArgMismatch,
    NotAFunction,
    NotAScheme,
    TabsFreeVars,
    IllFormedType,
    Arity,
    /// A type scheme where only a monotype may appear: as a lambda body,
    /// an argument, or an operand.
    NotMonomorphic,
}

impl TypeErrorKind {
    pub fn as_str(self) -> &'static str {
        match self {
            TypeErrorKind::UnboundVar => "unbound-var",
            TypeErrorKind::ArgMismatch => "arg-mismatch",
            TypeErrorKind::NotAFunction => "not-a-function",
            TypeErrorKind::NotAScheme => "not-a-scheme",
            TypeErrorKind::TabsFreeVars => "tabs-free-vars",
            TypeErrorKind::IllFormedType => "ill-formed-type",
            TypeErrorKind::Arity => "arity",
            TypeErrorKind::NotMonomorphic => "not-monomorphic",
        }
    }
}

impl fmt::Display for TypeErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub struct TypeError {
    pub kind: TypeErrorKind,
    pub span: Span,
    pub expected: Option<Box<Ty>>,
    pub actual: Option<Box<TypeScheme>>,
    /// Offending variable names (unbound or captured by a type abstraction).
    pub names: Vec<Name>,
    pub detail: Option<String>,
}

impl TypeError {
    fn new(kind: TypeErrorKind, span: Span) -> Self {
        TypeError {
            kind,
            span,
            expected: None,
            actual: None,
            names: Vec::new(),
            detail: None,
        }
    }

    fn expected(mut self, ty: &Ty) -> Self {
        self.expected = Some(Box::new(ty.clone()));
        self
    }

    fn actual(mut self, s: impl Into<TypeScheme>) -> Self {
        self.actual = Some(Box::new(s.into()));
        self
    }

    fn names(mut self, names: impl IntoIterator<Item = Name>) -> Self {
        self.names = names.into_iter().collect();
        self
    }

    fn from_wf(err: WfError, span: Span) -> Self {
        let kind = match err {
            WfError::ArityMismatch { .. } => TypeErrorKind::Arity,
            _ => TypeErrorKind::IllFormedType,
        };
        let mut e = TypeError::new(kind, span);
        if let WfError::UnboundTypeVar(a) = &err {
            e.names = vec![a.clone()];
        }
        e.detail = Some(err.to_string());
        e
    }
}

fn quoted_names(names: &[Name]) -> String {
    names
        .iter()
        .map(|n| format!("`{n}`"))
        .collect::<Vec<_>>()
        .join(", ")
}

impl fmt::Display for TypeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let actual = self
            .actual
            .as_ref()
            .map(|s| s.to_string())
            .unwrap_or_default();
        let expected = self
            .expected
            .as_ref()
            .map(|t| t.to_string())
            .unwrap_or_default();
        match self.kind {
            TypeErrorKind::UnboundVar => {
                write!(f, "unbound variable {}", quoted_names(&self.names))
            }
            TypeErrorKind::ArgMismatch => {
                write!(f, "expected `{expected}`, found `{actual}`")
            }
            TypeErrorKind::NotAFunction => {
                write!(f, "cannot apply a value of type `{actual}`")
            }
            TypeErrorKind::NotAScheme => {
                write!(f, "cannot instantiate non-polymorphic type `{actual}`")
            }
            TypeErrorKind::TabsFreeVars => write!(
                f,
                "type abstraction body refers to local variable(s) {}",
                quoted_names(&self.names)
            ),
            TypeErrorKind::NotMonomorphic => {
                write!(
                    f,
                    "polymorphic type `{actual}` used where a monotype is required"
                )
            }
            TypeErrorKind::IllFormedType | TypeErrorKind::Arity => {
                f.write_str(self.detail.as_deref().unwrap_or("ill-formed type"))
            }
        }
    }
}

/// A type error raised while checking one top-level binding.
#[derive(Clone, Debug, PartialEq, thiserror::Error)]
#[error("in `{binding}`: {error}")]
pub struct ProgramError {
    pub binding: Name,
    pub error: TypeError,
}

/// What the checker learned about one lambda.
#[derive(Clone, Debug, PartialEq)]
pub struct LambdaInfo {
    pub span: Span,
    pub param: Name,
    pub param_ty: Ty,
    pub scope: ScopeType,
    pub result: Ty,
}

impl LambdaInfo {
    pub fn ty(&self) -> Ty {
        Ty::clos(
            self.param_ty.clone(),
            Ty::Scope(self.scope.clone()),
            self.result.clone(),
        )
    }
}

/// Builds the scope type of `lam`: its free local variables with their
/// context types. References to top-level bindings are not captured.
pub fn compute_delta(ctx: &TypeContext, lam: &Term) -> Result<ScopeType, TypeError> {
    let mut fields = Vec::new();
    for y in free_vars(lam) {
        if let Some(ty) = ctx.lookup_local(&y) {
            fields.push((y, ty.clone()));
        } else if ctx.lookup_global(&y).is_none() {
            return Err(TypeError::new(TypeErrorKind::UnboundVar, lam.span).names([y]));
        }
    }
    Ok(ScopeType::from_fields(fields).expect("free variables are distinct"))
}

/// Types `t` under `ctx`. A monotype comes back as a scheme with no
/// quantifiers.
pub fn typecheck(ctx: &TypeContext, t: &Term) -> Result<TypeScheme, TypeError> {
    Checker::default().infer(ctx, t)
}

#[derive(Default)]
struct Checker {
    lambdas: Vec<(usize, LambdaInfo)>,
    tabs: Vec<(usize, TypeScheme)>,
}

fn node_key(t: &Term) -> usize {
    t as *const Term as usize
}

fn require_mono(s: TypeScheme, span: Span) -> Result<Ty, TypeError> {
    s.into_mono()
        .map_err(|s| TypeError::new(TypeErrorKind::NotMonomorphic, span).actual(s))
}

impl Checker {
    fn wf(&self, ctx: &TypeContext, ty: &Ty, span: Span) -> Result<(), TypeError> {
        wf_type(ctx, ty).map_err(|e| TypeError::from_wf(e, span))
    }

    fn infer(&mut self, ctx: &TypeContext, t: &Term) -> Result<TypeScheme, TypeError> {
        match &t.kind {
            TermKind::Var(x) => {
                if let Some(ty) = ctx.lookup_local(x) {
                    Ok(TypeScheme::mono(ty.clone()))
                } else if let Some(s) = ctx.lookup_global(x) {
                    Ok(s.clone())
                } else {
                    Err(TypeError::new(TypeErrorKind::UnboundVar, t.span).names([x.clone()]))
                }
            }
            TermKind::Abs {
                param,
                param_ty,
                body,
            } => {
                self.wf(ctx, param_ty, t.span)?;
                let body_ctx = ctx.clone().with_term_var(param.clone(), param_ty.clone());
                let result = require_mono(self.infer(&body_ctx, body)?, body.span)?;
                let scope = compute_delta(ctx, t)?;
                let info = LambdaInfo {
                    span: t.span,
                    param: param.clone(),
                    param_ty: param_ty.clone(),
                    scope,
                    result,
                };
                let ty = info.ty();
                self.lambdas.push((node_key(t), info));
                Ok(TypeScheme::mono(ty))
            }
            TermKind::App(fun, arg) => {
                let fun_ty = self
                    .infer(ctx, fun)?
                    .into_mono()
                    .map_err(|s| TypeError::new(TypeErrorKind::NotAFunction, fun.span).actual(s))?;
                let (domain, codomain) = match &fun_ty {
                    Ty::ClosArrow {
                        domain, codomain, ..
                    }
                    | Ty::PlainArrow { domain, codomain } => (domain, codomain),
                    _ => {
                        return Err(
                            TypeError::new(TypeErrorKind::NotAFunction, fun.span).actual(fun_ty)
                        )
                    }
                };
                let arg_ty = self.infer(ctx, arg)?.into_mono().map_err(|s| {
                    TypeError::new(TypeErrorKind::ArgMismatch, arg.span)
                        .expected(domain)
                        .actual(s)
                })?;
                if !ty_equal(domain, &arg_ty) {
                    return Err(TypeError::new(TypeErrorKind::ArgMismatch, arg.span)
                        .expected(domain)
                        .actual(arg_ty));
                }
                Ok(TypeScheme::mono((**codomain).clone()))
            }
            TermKind::TAbs { ty_param, body } => {
                let captured: Vec<Name> = free_vars(body)
                    .into_iter()
                    .filter(|y| ctx.is_local(y))
                    .collect();
                if !captured.is_empty() {
                    return Err(TypeError::new(TypeErrorKind::TabsFreeVars, t.span).names(captured));
                }
                let inner = ctx.without_term_vars().with_type_var(ty_param.clone());
                let scheme = self.infer(&inner, body)?.forall(ty_param.clone());
                self.tabs.push((node_key(t), scheme.clone()));
                Ok(scheme)
            }
            TermKind::TApp(fun, arg) => {
                self.wf(ctx, arg, t.span)?;
                let scheme = self.infer(ctx, fun)?;
                let out = scheme.instantiate(arg).ok_or_else(|| {
                    TypeError::new(TypeErrorKind::NotAScheme, t.span).actual(scheme.clone())
                })?;
                let body_ctx = out
                    .quantified()
                    .iter()
                    .fold(ctx.clone(), |c, q| c.with_type_var(q.clone()));
                self.wf(&body_ctx, out.body(), t.span)?;
                Ok(out)
            }
            TermKind::Int(_) => Ok(TypeScheme::mono(Ty::Int)),
            TermKind::Add(lhs, rhs) => {
                for operand in [lhs, rhs] {
                    let ty = require_mono(self.infer(ctx, operand)?, operand.span)?;
                    if ty != Ty::Int {
                        return Err(TypeError::new(TypeErrorKind::ArgMismatch, operand.span)
                            .expected(&Ty::Int)
                            .actual(ty));
                    }
                }
                Ok(TypeScheme::mono(Ty::Int))
            }
        }
    }
}

/// The result of checking a whole program. Borrows the program so the
/// per-node tables stay keyed to live nodes.
#[derive(Debug)]
pub struct CheckedProgram<'p> {
    program: &'p SourceProgram,
    schemes: Vec<(Name, TypeScheme)>,
    lambdas: Vec<LambdaInfo>,
    lambda_index: HashMap<usize, usize>,
    tabs_index: HashMap<usize, TypeScheme>,
}

impl<'p> CheckedProgram<'p> {
    pub fn program(&self) -> &'p SourceProgram {
        self.program
    }

    /// Each binding's type, in program order.
    pub fn schemes(&self) -> &[(Name, TypeScheme)] {
        &self.schemes
    }

    pub fn scheme_of(&self, name: &str) -> Option<&TypeScheme> {
        self.schemes.iter().find(|(n, _)| n == name).map(|(_, s)| s)
    }

    /// Every lambda in the program, in the order its typing finished
    /// (inner lambdas before the lambdas that contain them).
    pub fn lambdas(&self) -> &[LambdaInfo] {
        &self.lambdas
    }

    /// Every lambda in source order.
    pub fn lambdas_in_source_order(&self) -> Vec<&LambdaInfo> {
        let mut out: Vec<&LambdaInfo> = self.lambdas.iter().collect();
        out.sort_by_key(|l| l.span);
        out
    }

    /// Typing facts for a lambda node of this program.
    pub fn lambda(&self, node: &Term) -> Option<&LambdaInfo> {
        self.lambda_index
            .get(&node_key(node))
            .map(|&i| &self.lambdas[i])
    }

    /// The scheme of a type-abstraction node of this program.
    pub fn tabs_scheme(&self, node: &Term) -> Option<&TypeScheme> {
        self.tabs_index.get(&node_key(node))
    }

    /// A typing context holding the declared constructors and every
    /// top-level binding.
    pub fn global_context(&self) -> TypeContext {
        self.schemes
            .iter()
            .fold(declarations_context(self.program), |ctx, (n, s)| {
                ctx.with_global(n.clone(), s.clone())
            })
    }
}

fn declarations_context(p: &SourceProgram) -> TypeContext {
    p.type_decls.iter().fold(TypeContext::new(), |ctx, d| {
        ctx.with_constructor(d.name.clone(), d.arity)
    })
}

/// Checks bindings in order; each one sees the types of those before it.
pub fn check_program(p: &SourceProgram) -> Result<CheckedProgram<'_>, ProgramError> {
    let mut ctx = declarations_context(p);
    let mut checker = Checker::default();
    let mut schemes = Vec::with_capacity(p.bindings.len());
    for b in &p.bindings {
        let scheme = checker.infer(&ctx, &b.term).map_err(|error| ProgramError {
            binding: b.name.clone(),
            error,
        })?;
        ctx.define_global(b.name.clone(), scheme.clone());
        schemes.push((b.name.clone(), scheme));
    }
    let lambda_index = checker
        .lambdas
        .iter()
        .enumerate()
        .map(|(i, (key, _))| (*key, i))
        .collect();
    Ok(CheckedProgram {
        program: p,
        schemes,
        lambdas: checker.lambdas.into_iter().map(|(_, info)| info).collect(),
        lambda_index,
        tabs_index: checker.tabs.into_iter().collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ast::alpha_equal;
    use crate::syntax::{parse_program, parse_scheme, parse_term, parse_type};

    const CHURCH: &str = r"
        let true = /\'a. /\'b. \t:'a. \f:'b. t
        let false = /\'a. /\'b. \t:'a. \f:'b. f
        let cond = /\'a. /\'b. /\'c. /\'d. \t:'a. \f:'b. \c:('a -{}-> 'b -'d-> 'c). c t f
    ";

    const COMPOSE: &str = r"
        let compose = /\'a. /\'b. /\'c. /\'d1. /\'d2.
            \f:('b -'d1-> 'c). \g:('a -'d2-> 'b). \x:'a. f (g x)
    ";

    fn check(src: &str) -> Vec<(Name, TypeScheme)> {
        let p = parse_program(src).unwrap();
        let checked = check_program(&p).unwrap();
        checked.schemes().to_vec()
    }

    fn scheme(src: &str) -> TypeScheme {
        parse_scheme(src).unwrap()
    }

    fn assert_alpha(actual: &TypeScheme, expected: &str) {
        assert!(
            alpha_equal(actual, &scheme(expected)),
            "got {actual}, expected {expected}"
        );
    }

    #[test]
    fn delta_of_closed_lambda_is_empty() {
        let lam = parse_term(r"\x:'a. x").unwrap();
        let ctx = TypeContext::new().with_type_var("a");
        assert!(compute_delta(&ctx, &lam).unwrap().is_empty());
    }

    #[test]
    fn delta_of_church_true_inner_lambda() {
        let lam = parse_term(r"\f:'b. t").unwrap();
        let ctx = TypeContext::new().with_term_var("t", Ty::var("a"));
        let delta = compute_delta(&ctx, &lam).unwrap();
        assert_eq!(Ty::Scope(delta).to_string(), "{t: 'a}");
    }

    #[test]
    fn delta_of_compose_innermost_lambda() {
        let lam = parse_term(r"\x:'a. f (g x)").unwrap();
        let ctx = TypeContext::new()
            .with_term_var("f", parse_type("'b -'d1-> 'c").unwrap())
            .with_term_var("g", parse_type("'a -'d2-> 'b").unwrap());
        let delta = compute_delta(&ctx, &lam).unwrap();
        assert_eq!(
            Ty::Scope(delta).to_string(),
            "{f: 'b -'d1-> 'c, g: 'a -'d2-> 'b}"
        );
    }

    #[test]
    fn delta_reports_unbound() {
        let lam = parse_term(r"\x:Int. y").unwrap();
        let err = compute_delta(&TypeContext::new(), &lam).unwrap_err();
        assert_eq!(err.kind, TypeErrorKind::UnboundVar);
        assert_eq!(err.names, vec![Name::from("y")]);
    }

    #[test]
    fn church_booleans_and_cond() {
        let s = check(CHURCH);
        assert_eq!(
            s[0].1.to_string(),
            "forall 'a. forall 'b. 'a -{}-> 'b -{t: 'a}-> 'a"
        );
        assert_eq!(
            s[1].1.to_string(),
            "forall 'a. forall 'b. 'a -{}-> 'b -{}-> 'b"
        );
        assert_alpha(
            &s[2].1,
            "forall 'a. forall 'b. forall 'c. forall 'd. \
             'a -{}-> 'b -{t: 'a}-> ('a -{}-> 'b -'d-> 'c) -{t: 'a, f: 'b}-> 'c",
        );
    }

    #[test]
    fn compose_scheme() {
        let s = check(COMPOSE);
        assert_alpha(
            &s[0].1,
            "forall 'a. forall 'b. forall 'c. forall 'd1. forall 'd2. \
             ('b -'d1-> 'c) -{}-> ('a -'d2-> 'b) -{f: 'b -'d1-> 'c}-> \
             'a -{f: 'b -'d1-> 'c, g: 'a -'d2-> 'b}-> 'c",
        );
    }

    #[test]
    fn tabs_rejects_captured_local() {
        let t = parse_term(r"\y:'b. /\'a. \x:'a. y").unwrap();
        let ctx = TypeContext::new().with_type_var("b");
        let err = typecheck(&ctx, &t).unwrap_err();
        assert_eq!(err.kind, TypeErrorKind::TabsFreeVars);
        assert_eq!(err.names, vec![Name::from("y")]);
    }

    #[test]
    fn tabs_may_use_enclosing_type_variables_and_globals() {
        let s = check(&format!("{CHURCH}\nlet t2 = /\\'a. true ['a] ['a]"));
        assert_alpha(&s[3].1, "forall 'a. 'a -{}-> 'a -{t: 'a}-> 'a");
    }

    fn eq_context() -> TypeContext {
        let p = parse_program(CHURCH).unwrap();
        let checked = check_program(&p).unwrap();
        checked
            .global_context()
            .with_type_var("a")
            .with_type_var("b")
            .with_term_var("t", Ty::var("a"))
            .with_term_var("f", Ty::var("b"))
    }

    #[test]
    fn cond_with_true_selects_first_type() {
        let t = parse_term("cond ['a] ['b] ['a] [{t: 'a}] t f (true ['a] ['b])").unwrap();
        let ty = typecheck(&eq_context(), &t).unwrap();
        assert_eq!(ty.as_mono(), Some(&Ty::var("a")));
    }

    #[test]
    fn cond_with_false_selects_second_type() {
        let t = parse_term("cond ['a] ['b] ['b] [{}] t f (false ['a] ['b])").unwrap();
        let ty = typecheck(&eq_context(), &t).unwrap();
        assert_eq!(ty.as_mono(), Some(&Ty::var("b")));
    }

    #[test]
    fn cond_with_wrong_scope_is_rejected() {
        let t = parse_term("cond ['a] ['b] ['a] [{}] t f (true ['a] ['b])").unwrap();
        let err = typecheck(&eq_context(), &t).unwrap_err();
        assert_eq!(err.kind, TypeErrorKind::ArgMismatch);
    }

    #[test]
    fn instantiation_of_cond_scheme() {
        let p = parse_program(CHURCH).unwrap();
        let checked = check_program(&p).unwrap();
        let cond = checked.scheme_of("cond").unwrap();
        let a = Ty::var("a");
        let b = Ty::var("b");
        let d = parse_type("{t: 'a}").unwrap();
        let inst = [a.clone(), b, a, d]
            .iter()
            .fold(cond.clone(), |s, arg| s.instantiate(arg).unwrap());
        assert_eq!(
            inst.to_string(),
            "'a -{}-> 'b -{t: 'a}-> ('a -{}-> 'b -{t: 'a}-> 'a) -{f: 'b, t: 'a}-> 'a"
        );
    }

    #[test]
    fn empty_program() {
        assert!(check("").is_empty());
    }

    #[test]
    fn undefined_name_in_program() {
        let p = parse_program("let x = y").unwrap();
        let err = check_program(&p).unwrap_err();
        assert_eq!(err.binding, "x");
        assert_eq!(err.error.kind, TypeErrorKind::UnboundVar);
    }

    #[test]
    fn bindings_only_see_earlier_bindings() {
        let p = parse_program("let x = y let y = 1").unwrap();
        assert!(check_program(&p).is_err());
    }

    #[test]
    fn globals_are_not_captured() {
        let s = check(r"let inc = \x:Int. x + 1  let twice = \y:Int. inc (inc y)");
        assert_eq!(s[1].1.to_string(), "Int -{}-> Int");
    }

    #[test]
    fn local_shadowing_a_global_is_captured() {
        let s = check(r"let inc = 1  let k = \inc:Int. \y:Int. inc");
        assert_eq!(s[1].1.to_string(), "Int -{}-> Int -{inc: Int}-> Int");
    }

    #[test]
    fn error_kinds() {
        let ctx = TypeContext::new();
        let kind = |src: &str| typecheck(&ctx, &parse_term(src).unwrap()).unwrap_err().kind;
        assert_eq!(kind("1 2"), TypeErrorKind::NotAFunction);
        assert_eq!(kind(r"(\x:Int. x) (\x:Int. x)"), TypeErrorKind::ArgMismatch);
        assert_eq!(kind("1 [Int]"), TypeErrorKind::NotAScheme);
        assert_eq!(kind(r"\x:'a. x"), TypeErrorKind::IllFormedType);
        assert_eq!(kind(r"\x:Int -Int-> Int. x"), TypeErrorKind::IllFormedType);
        assert_eq!(
            kind(r"\x:Int. /\'a. \y:'a. y"),
            TypeErrorKind::NotMonomorphic
        );
        assert_eq!(kind(r"(/\'a. \y:'a. y) + 1"), TypeErrorKind::NotMonomorphic);
        assert_eq!(kind(r"(/\'a. \y:'a. y) 1"), TypeErrorKind::NotAFunction);
        assert_eq!(
            kind(r"(/\'a. \y:'a. y) [Int list]"),
            TypeErrorKind::IllFormedType
        );
        let ctx = ctx.with_constructor("list", 1);
        let err = typecheck(&ctx, &parse_term(r"\x:list. x").unwrap()).unwrap_err();
        assert_eq!(err.kind, TypeErrorKind::Arity);
    }

    #[test]
    fn instantiating_scope_variable_with_non_scope_is_ill_formed() {
        let t = parse_term(r"(/\'d. \f:(Int -'d-> Int). f) [Int]").unwrap();
        let err = typecheck(&TypeContext::new(), &t).unwrap_err();
        assert_eq!(err.kind, TypeErrorKind::IllFormedType);
    }

    #[test]
    fn nested_same_name_type_abstractions() {
        let t = parse_term(r"/\'a. /\'a. \x:'a. x").unwrap();
        let s = typecheck(&TypeContext::new(), &t).unwrap();
        assert_eq!(s.quantified().len(), 2);
        let inst = s.instantiate(&Ty::Int).unwrap().instantiate(&Ty::var("z"));
        assert_eq!(inst.unwrap().to_string(), "'z -{}-> 'z");
    }

    #[test]
    fn map_type_is_well_formed_with_list_declared() {
        let s = scheme(
            "forall 'a. forall 'b. forall 'd. \
             ('a -'d-> 'b) -{}-> 'a list -{f: 'a -'d-> 'b}-> 'b list",
        );
        let ctx = s
            .quantified()
            .iter()
            .fold(TypeContext::new().with_constructor("list", 1), |c, q| {
                c.with_type_var(q.clone())
            });
        assert_eq!(wf_type(&ctx, s.body()), Ok(()));
    }
}
