use std::collections::BTreeMap;
use std::sync::Arc;

use super::{Name, Ty, TypeScheme};

/// The typing context: type variables in scope, local term variables
/// (innermost binding wins), plus the program-level tables of earlier
/// top-level bindings and declared type constructors.
#[derive(Clone, Debug, Default)]
pub struct TypeContext {
    type_vars: Vec<Name>,
    term_vars: Vec<(Name, Ty)>,
    globals: Arc<BTreeMap<Name, TypeScheme>>,
    constructors: Arc<BTreeMap<Name, usize>>,
}

impl TypeContext {
    pub fn new() -> Self {
        TypeContext::default()
    }

    pub fn with_type_var(mut self, name: impl Into<Name>) -> Self {
        self.type_vars.push(name.into());
        self
    }

    pub fn with_term_var(mut self, name: impl Into<Name>, ty: Ty) -> Self {
        self.term_vars.push((name.into(), ty));
        self
    }

    pub fn with_constructor(mut self, name: impl Into<Name>, arity: usize) -> Self {
        self.declare_constructor(name, arity);
        self
    }

    pub fn with_global(mut self, name: impl Into<Name>, scheme: TypeScheme) -> Self {
        self.define_global(name, scheme);
        self
    }

    pub fn declare_constructor(&mut self, name: impl Into<Name>, arity: usize) {
        Arc::make_mut(&mut self.constructors).insert(name.into(), arity);
    }

    pub fn define_global(&mut self, name: impl Into<Name>, scheme: TypeScheme) {
        Arc::make_mut(&mut self.globals).insert(name.into(), scheme);
    }

    /// The same context with every local term variable dropped.
    pub fn without_term_vars(&self) -> Self {
        TypeContext {
            type_vars: self.type_vars.clone(),
            term_vars: Vec::new(),
            globals: Arc::clone(&self.globals),
            constructors: Arc::clone(&self.constructors),
        }
    }

    pub fn has_type_var(&self, name: &str) -> bool {
        self.type_vars.iter().any(|a| a == name)
    }

    pub fn lookup_local(&self, name: &str) -> Option<&Ty> {
        self.term_vars
            .iter()
            .rev()
            .find(|(n, _)| n == name)
            .map(|(_, t)| t)
    }

    pub fn lookup_global(&self, name: &str) -> Option<&TypeScheme> {
        self.globals.get(name)
    }

    pub fn is_local(&self, name: &str) -> bool {
        self.lookup_local(name).is_some()
    }

    pub fn constructor_arity(&self, name: &str) -> Option<usize> {
        self.constructors.get(name).copied()
    }

    pub fn type_vars(&self) -> &[Name] {
        &self.type_vars
    }

    pub fn term_vars(&self) -> impl Iterator<Item = (&Name, &Ty)> + '_ {
        self.term_vars.iter().map(|(n, t)| (n, t))
    }

    pub fn globals(&self) -> &BTreeMap<Name, TypeScheme> {
        &self.globals
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum WfError {
    #[error("type variable `'{0}` is not in scope")]
    UnboundTypeVar(Name),
    #[error("`{0}` cannot appear in the scope slot of a closure arrow")]
    IllegalScopePosition(Ty),
    #[error("unknown type constructor `{0}`")]
    UnknownConstructor(Name),
    #[error("type constructor `{name}` expects {expected} argument(s), found {found}")]
    ArityMismatch {
        name: Name,
        expected: usize,
        found: usize,
    },
}

/// Checks that every type variable is in scope, closure-arrow scope slots
/// hold a scope record or a type variable, and constructors are applied at
/// their declared arity.
pub fn wf_type(ctx: &TypeContext, ty: &Ty) -> Result<(), WfError> {
    match ty {
        Ty::Var(a) if ctx.has_type_var(a) => Ok(()),
        Ty::Var(a) => Err(WfError::UnboundTypeVar(a.clone())),
        Ty::ClosArrow {
            domain,
            scope,
            codomain,
        } => {
            wf_type(ctx, domain)?;
            match **scope {
                Ty::Var(_) | Ty::Scope(_) => wf_type(ctx, scope)?,
                _ => return Err(WfError::IllegalScopePosition((**scope).clone())),
            }
            wf_type(ctx, codomain)
        }
        Ty::Scope(s) => s.iter().try_for_each(|(_, t)| wf_type(ctx, t)),
        Ty::PlainArrow { domain, codomain } => {
            wf_type(ctx, domain)?;
            wf_type(ctx, codomain)
        }
        Ty::Int => Ok(()),
        Ty::Con(name, args) => {
            let expected = ctx
                .constructor_arity(name)
                .ok_or_else(|| WfError::UnknownConstructor(name.clone()))?;
            if expected != args.len() {
                return Err(WfError::ArityMismatch {
                    name: name.clone(),
                    expected,
                    found: args.len(),
                });
            }
            args.iter().try_for_each(|t| wf_type(ctx, t))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ast::ScopeType;

    #[test]
    fn arrow_with_vars_in_scope() {
        let ctx = TypeContext::new().with_type_var("a").with_type_var("b");
        let t = Ty::clos(Ty::var("a"), Ty::empty_scope(), Ty::var("b"));
        assert_eq!(wf_type(&ctx, &t), Ok(()));
        assert_eq!(
            wf_type(&TypeContext::new(), &t),
            Err(WfError::UnboundTypeVar(Name::from("a")))
        );
    }

    #[test]
    fn int_in_scope_slot_is_rejected() {
        let ctx = TypeContext::new().with_type_var("a").with_type_var("b");
        let t = Ty::clos(Ty::var("a"), Ty::Int, Ty::var("b"));
        assert_eq!(
            wf_type(&ctx, &t),
            Err(WfError::IllegalScopePosition(Ty::Int))
        );
    }

    #[test]
    fn declared_constructor() {
        let ctx = TypeContext::new()
            .with_type_var("a")
            .with_constructor("list", 1);
        assert_eq!(wf_type(&ctx, &Ty::con("list", vec![Ty::var("a")])), Ok(()));
        assert!(matches!(
            wf_type(&ctx, &Ty::con("list", vec![])),
            Err(WfError::ArityMismatch {
                expected: 1,
                found: 0,
                ..
            })
        ));
        assert!(matches!(
            wf_type(&ctx, &Ty::con("tree", vec![])),
            Err(WfError::UnknownConstructor(_))
        ));
    }

    #[test]
    fn scope_fields_are_checked() {
        let s = ScopeType::from_fields([("t", Ty::var("z"))]).unwrap();
        assert!(wf_type(&TypeContext::new(), &Ty::Scope(s)).is_err());
    }

    #[test]
    fn local_lookup_is_innermost() {
        let ctx = TypeContext::new()
            .with_term_var("x", Ty::Int)
            .with_term_var("x", Ty::var("a"));
        assert_eq!(ctx.lookup_local("x"), Some(&Ty::var("a")));
        assert!(ctx.without_term_vars().lookup_local("x").is_none());
    }
}
