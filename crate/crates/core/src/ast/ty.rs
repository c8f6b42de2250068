use std::collections::BTreeSet;
use std::fmt;

use super::Name;

/// Monomorphic types.
///
/// `ClosArrow` is the closure arrow `A -C-> B`: the middle slot carries the
/// type of the captured lexical scope, which is either a scope record or a
/// type variable standing for one.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Ty {
    Var(Name),
    ClosArrow {
        domain: Box<Ty>,
        scope: Box<Ty>,
        codomain: Box<Ty>,
    },
    Scope(ScopeType),
    /// Bare function-pointer type `A -> B` with no scope argument.
    PlainArrow {
        domain: Box<Ty>,
        codomain: Box<Ty>,
    },
    Int,
    /// An opaque, declared type constructor such as `'a list`.
    Con(Name, Vec<Ty>),
}

impl Ty {
    pub fn var(name: impl Into<Name>) -> Ty {
        Ty::Var(name.into())
    }

    pub fn clos(domain: Ty, scope: Ty, codomain: Ty) -> Ty {
        Ty::ClosArrow {
            domain: Box::new(domain),
            scope: Box::new(scope),
            codomain: Box::new(codomain),
        }
    }

    pub fn plain(domain: Ty, codomain: Ty) -> Ty {
        Ty::PlainArrow {
            domain: Box::new(domain),
            codomain: Box::new(codomain),
        }
    }

    pub fn empty_scope() -> Ty {
        Ty::Scope(ScopeType::empty())
    }

    pub fn con(name: impl Into<Name>, args: Vec<Ty>) -> Ty {
        Ty::Con(name.into(), args)
    }

    pub fn free_type_vars(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_ftv(&mut out);
        out
    }

    fn collect_ftv(&self, out: &mut BTreeSet<Name>) {
        match self {
            Ty::Var(a) => {
                out.insert(a.clone());
            }
            Ty::ClosArrow {
                domain,
                scope,
                codomain,
            } => {
                domain.collect_ftv(out);
                scope.collect_ftv(out);
                codomain.collect_ftv(out);
            }
            Ty::Scope(s) => {
                for (_, t) in s.iter() {
                    t.collect_ftv(out);
                }
            }
            Ty::PlainArrow { domain, codomain } => {
                domain.collect_ftv(out);
                codomain.collect_ftv(out);
            }
            Ty::Int => {}
            Ty::Con(_, args) => args.iter().for_each(|t| t.collect_ftv(out)),
        }
    }

    pub fn mentions(&self, var: &str) -> bool {
        match self {
            Ty::Var(a) => a == var,
            Ty::ClosArrow {
                domain,
                scope,
                codomain,
            } => domain.mentions(var) || scope.mentions(var) || codomain.mentions(var),
            Ty::Scope(s) => s.iter().any(|(_, t)| t.mentions(var)),
            Ty::PlainArrow { domain, codomain } => domain.mentions(var) || codomain.mentions(var),
            Ty::Int => false,
            Ty::Con(_, args) => args.iter().any(|t| t.mentions(var)),
        }
    }

    /// Types have no binders, so substitution is plain structural replacement.
    pub fn subst(&self, var: &str, replacement: &Ty) -> Ty {
        match self {
            Ty::Var(a) if a == var => replacement.clone(),
            Ty::Var(_) | Ty::Int => self.clone(),
            Ty::ClosArrow {
                domain,
                scope,
                codomain,
            } => Ty::clos(
                domain.subst(var, replacement),
                scope.subst(var, replacement),
                codomain.subst(var, replacement),
            ),
            Ty::Scope(s) => Ty::Scope(s.map_types(|t| t.subst(var, replacement))),
            Ty::PlainArrow { domain, codomain } => Ty::plain(
                domain.subst(var, replacement),
                codomain.subst(var, replacement),
            ),
            Ty::Con(name, args) => Ty::Con(
                name.clone(),
                args.iter().map(|t| t.subst(var, replacement)).collect(),
            ),
        }
    }
}

impl fmt::Display for Ty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::syntax::print_type(self))
    }
}

/// Raised when a scope record lists the same field twice.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("duplicate field `{0}` in scope record")]
pub struct MalformedScope(pub Name);

/// A lexical scope record `{x0: A0, ..., xn: An}`.
///
/// Entries are kept sorted by field name, so derived equality is the
/// order-insensitive, name- and type-sensitive comparison scopes need.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct ScopeType {
    entries: Vec<(Name, Ty)>,
}

impl ScopeType {
    pub fn empty() -> Self {
        ScopeType::default()
    }

    pub fn from_fields<I, N>(fields: I) -> Result<Self, MalformedScope>
    where
        I: IntoIterator<Item = (N, Ty)>,
        N: Into<Name>,
    {
        let mut entries: Vec<(Name, Ty)> = fields.into_iter().map(|(n, t)| (n.into(), t)).collect();
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        if let Some(w) = entries.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(MalformedScope(w[0].0.clone()));
        }
        Ok(ScopeType { entries })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, name: &str) -> Option<&Ty> {
        self.entries
            .binary_search_by(|(n, _)| n.as_str().cmp(name))
            .ok()
            .map(|i| &self.entries[i].1)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Name, &Ty)> + '_ {
        self.entries.iter().map(|(n, t)| (n, t))
    }

    /// Field names in canonical order.
    pub fn names(&self) -> impl Iterator<Item = &Name> + '_ {
        self.entries.iter().map(|(n, _)| n)
    }

    pub fn map_types(&self, mut f: impl FnMut(&Ty) -> Ty) -> ScopeType {
        ScopeType {
            entries: self
                .entries
                .iter()
                .map(|(n, t)| (n.clone(), f(t)))
                .collect(),
        }
    }
}

/// Sorts a list of scope fields into canonical order, rejecting duplicates.
pub fn canonicalize_scope<N: Into<Name>>(
    fields: impl IntoIterator<Item = (N, Ty)>,
) -> Result<ScopeType, MalformedScope> {
    ScopeType::from_fields(fields)
}

/// A prenex type scheme `forall a1. ... forall an. A`.
///
/// The quantifier list never contains duplicates: `forall` renames an inner
/// binder that would repeat an outer one.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct TypeScheme {
    quantified: Vec<Name>,
    body: Ty,
}

impl TypeScheme {
    pub fn mono(body: Ty) -> Self {
        TypeScheme {
            quantified: Vec::new(),
            body,
        }
    }

    pub fn new(quantified: impl IntoIterator<Item = Name>, body: Ty) -> Self {
        let quantified: Vec<Name> = quantified.into_iter().collect();
        quantified
            .into_iter()
            .rev()
            .fold(TypeScheme::mono(body), |s, q| s.forall(q))
    }

    /// Wraps `self` in one more outer quantifier.
    pub fn forall(self, var: impl Into<Name>) -> Self {
        let var = var.into();
        let TypeScheme {
            mut quantified,
            mut body,
        } = self;
        if let Some(pos) = quantified.iter().position(|q| *q == var) {
            let fresh = fresh_name(&var, |n| {
                quantified.iter().any(|q| q == n) || body.mentions(n)
            });
            body = body.subst(var.as_str(), &Ty::Var(fresh.clone()));
            quantified[pos] = fresh;
        }
        quantified.insert(0, var);
        TypeScheme { quantified, body }
    }

    pub fn quantified(&self) -> &[Name] {
        &self.quantified
    }

    pub fn body(&self) -> &Ty {
        &self.body
    }

    pub fn is_mono(&self) -> bool {
        self.quantified.is_empty()
    }

    pub fn as_mono(&self) -> Option<&Ty> {
        self.is_mono().then_some(&self.body)
    }

    pub fn into_mono(self) -> Result<Ty, TypeScheme> {
        if self.is_mono() {
            Ok(self.body)
        } else {
            Err(self)
        }
    }

    /// Instantiates the outermost quantifier. `None` for a monotype.
    pub fn instantiate(&self, arg: &Ty) -> Option<TypeScheme> {
        let (first, rest) = self.quantified.split_first()?;
        let inner = TypeScheme {
            quantified: rest.to_vec(),
            body: self.body.clone(),
        };
        Some(subst_scheme(&inner, first, arg))
    }

    pub fn free_type_vars(&self) -> BTreeSet<Name> {
        let mut ftv = self.body.free_type_vars();
        for q in &self.quantified {
            ftv.remove(q);
        }
        ftv
    }
}

impl From<Ty> for TypeScheme {
    fn from(ty: Ty) -> Self {
        TypeScheme::mono(ty)
    }
}

impl fmt::Display for TypeScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::syntax::print_scheme(self))
    }
}

/// Appends primes to `base` until `taken` rejects the candidate.
pub fn fresh_name(base: &str, taken: impl Fn(&str) -> bool) -> Name {
    let mut candidate = format!("{base}'");
    while taken(&candidate) {
        candidate.push('\'');
    }
    Name::from(candidate)
}

pub fn free_type_vars(ty: &Ty) -> BTreeSet<Name> {
    ty.free_type_vars()
}

pub fn subst_ty(ty: &Ty, var: &str, replacement: &Ty) -> Ty {
    ty.subst(var, replacement)
}

/// Capture-avoiding substitution under the scheme's quantifiers.
pub fn subst_scheme(scheme: &TypeScheme, var: &str, replacement: &Ty) -> TypeScheme {
    if scheme.quantified.iter().any(|q| q == var) || !scheme.body.mentions(var) {
        return scheme.clone();
    }
    let repl_ftv = replacement.free_type_vars();
    let mut body = scheme.body.clone();
    let mut quantified = Vec::with_capacity(scheme.quantified.len());
    for (i, q) in scheme.quantified.iter().enumerate() {
        if !repl_ftv.contains(q) {
            quantified.push(q.clone());
            continue;
        }
        let fresh = fresh_name(q, |n| {
            repl_ftv.contains(n)
                || body.mentions(n)
                || n == var
                || quantified.iter().any(|p: &Name| p == n)
                || scheme.quantified[i + 1..].iter().any(|p| p == n)
        });
        body = body.subst(q, &Ty::Var(fresh.clone()));
        quantified.push(fresh);
    }
    TypeScheme {
        quantified,
        body: body.subst(var, replacement),
    }
}

/// Structural type equality. Scope records compare as canonical maps.
pub fn ty_equal(a: &Ty, b: &Ty) -> bool {
    a == b
}

/// Scheme equality up to consistent renaming of quantified variables.
pub fn alpha_equal(a: &TypeScheme, b: &TypeScheme) -> bool {
    if a.quantified.len() != b.quantified.len() {
        return false;
    }
    // `%` never appears in surface identifiers, so these cannot clash.
    let rename = |s: &TypeScheme| {
        s.quantified
            .iter()
            .enumerate()
            .fold(s.body.clone(), |body, (i, q)| {
                body.subst(q, &Ty::Var(Name::from(format!("%{i}"))))
            })
    };
    rename(a) == rename(b)
}
