//! Lowering of checked programs to C++.
//!
//! Every closure becomes an `sfc::function<Scope, B(A)>` from the runtime
//! header: the scope is a `closuret_n` capture record for lambdas that
//! capture something and `void` for those that do not. Capture records
//! are keyed by the set of captured names and their field types are
//! template parameters. Polymorphic top-level bindings become function
//! templates; type abstractions inside expressions are instantiated in
//! place, which is sound because their bodies mention no local variables.

mod mangle;

use std::collections::BTreeMap;
use std::fmt::Write;

use thiserror::Error;

pub use mangle::{mangle, mangle_type_var};

use crate::ast::{Name, ScopeType, Span, Term, TermKind, Ty};
use crate::typecheck::CheckedProgram;

/// File name the generated code includes.
pub const RUNTIME_HEADER: &str = "sfc_runtime.hpp";

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CodegenError {
    #[error("{span}: missing type information: {detail}")]
    Type { span: Span, detail: String },
    #[error("{span}: cannot lower {detail}")]
    Unsupported { span: Span, detail: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaptureRecordDef {
    pub id: usize,
    /// Field names in canonical order.
    pub fields: Vec<Name>,
}

impl CaptureRecordDef {
    pub fn type_name(&self) -> String {
        format!("closuret_{}", self.id)
    }

    pub fn to_cpp(&self) -> String {
        let n = self.fields.len();
        let params: Vec<String> = (1..=n).map(|i| format!("typename T{i}")).collect();
        let mut out = format!(
            "template<{}>\nstruct {} {{\n",
            params.join(","),
            self.type_name()
        );
        for (i, f) in self.fields.iter().enumerate() {
            let _ = writeln!(out, "    T{} {};", i + 1, mangle(f));
        }
        let ctor_params: Vec<String> = self
            .fields
            .iter()
            .enumerate()
            .map(|(i, f)| format!("T{} init_{}", i + 1, mangle(f)))
            .collect();
        let inits: Vec<String> = self
            .fields
            .iter()
            .map(|f| format!("{0}(init_{0})", mangle(f)))
            .collect();
        let _ = write!(
            out,
            "\n    {}({}) :\n        {} {{}}\n}};\n",
            self.type_name(),
            ctor_params.join(", "),
            inits.join(", ")
        );
        out
    }
}

/// One lambda as it was lowered.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoweredLambda {
    pub span: Span,
    /// `None` for lambdas lowered to a bare function pointer.
    pub record: Option<usize>,
    pub captured: Vec<Name>,
}

#[derive(Clone, Debug)]
pub struct LoweredProgram {
    pub records: Vec<CaptureRecordDef>,
    pub lambdas: Vec<LoweredLambda>,
    /// Whether the output defines a `main` printing the program's result.
    pub has_main: bool,
    text: String,
}

impl LoweredProgram {
    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn into_text(self) -> String {
        self.text
    }
}

#[derive(Default)]
struct Records {
    by_fields: BTreeMap<Vec<Name>, usize>,
    defs: Vec<CaptureRecordDef>,
}

impl Records {
    fn intern(&mut self, s: &ScopeType) -> Option<usize> {
        if s.is_empty() {
            return None;
        }
        let fields: Vec<Name> = s.names().cloned().collect();
        if let Some(&id) = self.by_fields.get(&fields) {
            return Some(id);
        }
        let id = self.defs.len();
        self.by_fields.insert(fields.clone(), id);
        self.defs.push(CaptureRecordDef { id, fields });
        Some(id)
    }

    fn get(&self, s: &ScopeType) -> Option<usize> {
        let fields: Vec<Name> = s.names().cloned().collect();
        self.by_fields.get(&fields).copied()
    }

    fn visit_ty(&mut self, ty: &Ty) {
        match ty {
            Ty::Var(_) | Ty::Int => {}
            Ty::ClosArrow {
                domain,
                scope,
                codomain,
            } => {
                self.visit_ty(domain);
                self.visit_ty(codomain);
                self.visit_ty(scope);
            }
            Ty::PlainArrow { domain, codomain } => {
                self.visit_ty(domain);
                self.visit_ty(codomain);
            }
            Ty::Scope(s) => {
                for (_, t) in s.iter() {
                    self.visit_ty(t);
                }
                self.intern(s);
            }
            Ty::Con(_, args) => args.iter().for_each(|a| self.visit_ty(a)),
        }
    }

    fn visit_term(&mut self, checked: &CheckedProgram<'_>, t: &Term) {
        match &t.kind {
            TermKind::Var(_) | TermKind::Int(_) => {}
            TermKind::Abs { param_ty, body, .. } => {
                self.visit_term(checked, body);
                self.visit_ty(param_ty);
                if let Some(info) = checked.lambda(t) {
                    self.visit_ty(&info.ty());
                }
            }
            TermKind::App(a, b) | TermKind::Add(a, b) => {
                self.visit_term(checked, a);
                self.visit_term(checked, b);
            }
            TermKind::TAbs { body, .. } => self.visit_term(checked, body),
            TermKind::TApp(f, ty) => {
                self.visit_term(checked, f);
                self.visit_ty(ty);
            }
        }
    }
}

fn collect(checked: &CheckedProgram<'_>) -> Records {
    let mut records = Records::default();
    for (b, (_, scheme)) in checked.program().bindings.iter().zip(checked.schemes()) {
        records.visit_term(checked, &b.term);
        records.visit_ty(scheme.body());
    }
    records
}

/// One capture record per distinct non-empty set of captured names, found
/// in a post-order walk of the program (so a lambda's record is numbered
/// before those of the lambdas around it). Record types written in
/// annotations are included.
pub fn collect_capture_records(checked: &CheckedProgram<'_>) -> Vec<CaptureRecordDef> {
    collect(checked).defs
}

#[derive(Clone)]
struct CppTy {
    text: String,
    is_scope: bool,
}

struct Lowerer<'c, 'p> {
    checked: &'c CheckedProgram<'p>,
    records: Records,
    lambdas: Vec<LoweredLambda>,
}

type TyEnv = Vec<(Name, CppTy)>;

fn lookup<'e>(tenv: &'e TyEnv, a: &str) -> Option<&'e CppTy> {
    tenv.iter().rev().find(|(n, _)| n == a).map(|(_, t)| t)
}

fn int_literal(n: i64) -> String {
    if n == i64::MIN {
        "(-INT64_C(9223372036854775807) - 1)".to_string()
    } else {
        format!("INT64_C({n})")
    }
}

fn indent(depth: usize) -> String {
    "    ".repeat(depth)
}

impl<'c, 'p> Lowerer<'c, 'p> {
    fn unsupported(span: Span, detail: impl Into<String>) -> CodegenError {
        CodegenError::Unsupported {
            span,
            detail: detail.into(),
        }
    }

    fn lower_scope(&self, scope: &Ty, tenv: &TyEnv, span: Span) -> Result<String, CodegenError> {
        match scope {
            Ty::Scope(s) => self.lower_record(s, tenv, span),
            Ty::Var(_) => Ok(self.lower_ty(scope, tenv, span)?.text),
            other => Err(Self::unsupported(span, format!("`{other}` as a scope"))),
        }
    }

    fn lower_record(
        &self,
        s: &ScopeType,
        tenv: &TyEnv,
        span: Span,
    ) -> Result<String, CodegenError> {
        let Some(id) = self.records.get(s) else {
            return if s.is_empty() {
                Ok("void".to_string())
            } else {
                Err(CodegenError::Type {
                    span,
                    detail: format!("no capture record for `{}`", Ty::Scope(s.clone())),
                })
            };
        };
        let args = s
            .iter()
            .map(|(_, t)| self.lower_value_ty(t, tenv, span))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(format!("closuret_{id}<{}>", args.join(", ")))
    }

    fn lower_ty(&self, ty: &Ty, tenv: &TyEnv, span: Span) -> Result<CppTy, CodegenError> {
        let value = |text: String| CppTy {
            text,
            is_scope: false,
        };
        match ty {
            Ty::Int => Ok(value("int64_t".to_string())),
            Ty::Var(a) => lookup(tenv, a).cloned().ok_or_else(|| CodegenError::Type {
                span,
                detail: format!("type variable '{a} is not bound"),
            }),
            Ty::ClosArrow {
                domain,
                scope,
                codomain,
            } => Ok(value(format!(
                "sfc::function<{}, {}({})>",
                self.lower_scope(scope, tenv, span)?,
                self.lower_value_ty(codomain, tenv, span)?,
                self.lower_value_ty(domain, tenv, span)?
            ))),
            Ty::Scope(s) => Ok(CppTy {
                text: self.lower_record(s, tenv, span)?,
                is_scope: true,
            }),
            Ty::PlainArrow { .. } => Err(Self::unsupported(
                span,
                format!("`{ty}`: arrows without a scope have no closure representation"),
            )),
            Ty::Con(name, _) => Err(Self::unsupported(
                span,
                format!("`{ty}`: type constructor `{name}` has no runtime representation"),
            )),
        }
    }

    fn lower_value_ty(&self, ty: &Ty, tenv: &TyEnv, span: Span) -> Result<String, CodegenError> {
        let t = self.lower_ty(ty, tenv, span)?;
        if t.is_scope {
            return Err(Self::unsupported(
                span,
                format!("scope type `{ty}` as a value"),
            ));
        }
        Ok(t.text)
    }

    /// Lowers `t [args...]`, where the type arguments are already C++.
    fn lower_inst(
        &mut self,
        t: &Term,
        mut args: Vec<CppTy>,
        tenv: &TyEnv,
        locals: &[Name],
        depth: usize,
    ) -> Result<String, CodegenError> {
        match &t.kind {
            TermKind::TApp(f, ty) => {
                args.insert(0, self.lower_ty(ty, tenv, t.span)?);
                self.lower_inst(f, args, tenv, locals, depth)
            }
            TermKind::TAbs { ty_param, body } if !args.is_empty() => {
                let arg = args.remove(0);
                let mut inner = tenv.clone();
                inner.push((ty_param.clone(), arg));
                self.lower_inst(body, args, &inner, &[], depth)
            }
            TermKind::Var(x) if !locals.contains(x) => {
                if args.is_empty() {
                    Ok(format!("{}()", mangle(x)))
                } else {
                    let texts: Vec<String> = args.into_iter().map(|a| a.text).collect();
                    Ok(format!("{}<{}>()", mangle(x), texts.join(", ")))
                }
            }
            _ if args.is_empty() => self.lower_term(t, tenv, locals, depth),
            _ => Err(Self::unsupported(
                t.span,
                "type application of a non-polymorphic term",
            )),
        }
    }

    fn lower_term(
        &mut self,
        t: &Term,
        tenv: &TyEnv,
        locals: &[Name],
        depth: usize,
    ) -> Result<String, CodegenError> {
        match &t.kind {
            TermKind::Int(n) => Ok(int_literal(*n)),
            TermKind::Var(x) if locals.contains(x) => Ok(mangle(x)),
            TermKind::Var(_) | TermKind::TApp(..) => {
                self.lower_inst(t, Vec::new(), tenv, locals, depth)
            }
            TermKind::Add(a, b) => Ok(format!(
                "int64_t(uint64_t({}) + uint64_t({}))",
                self.lower_term(a, tenv, locals, depth)?,
                self.lower_term(b, tenv, locals, depth)?
            )),
            TermKind::App(f, a) => {
                let f = self.lower_term(f, tenv, locals, depth)?;
                let a = self.lower_term(a, tenv, locals, depth)?;
                Ok(format!("({f})({a})"))
            }
            TermKind::TAbs { .. } => Err(Self::unsupported(
                t.span,
                "a type abstraction outside a top-level binding or type application",
            )),
            TermKind::Abs { param, body, .. } => {
                self.lower_abs(t, param, body, tenv, locals, depth)
            }
        }
    }

    fn lower_abs(
        &mut self,
        t: &Term,
        param: &Name,
        body: &Term,
        tenv: &TyEnv,
        locals: &[Name],
        depth: usize,
    ) -> Result<String, CodegenError> {
        let info = self.checked.lambda(t).ok_or_else(|| CodegenError::Type {
            span: t.span,
            detail: "lambda was not typechecked".to_string(),
        })?;
        let span = t.span;
        let arg_ty = self.lower_value_ty(&info.param_ty, tenv, span)?;
        let result_ty = self.lower_value_ty(&info.result, tenv, span)?;
        let scope = info.scope.clone();
        let captured: Vec<Name> = scope.names().cloned().collect();
        let record_ty = self.lower_record(&scope, tenv, span)?;
        let field_tys = scope
            .iter()
            .map(|(_, ty)| self.lower_value_ty(ty, tenv, span))
            .collect::<Result<Vec<_>, _>>()?;
        let record = self.records.get(&scope);
        self.lambdas.push(LoweredLambda {
            span,
            record,
            captured: captured.clone(),
        });

        let mut inner_locals = captured.clone();
        inner_locals.push(param.clone());
        let body_text = self.lower_term(body, tenv, &inner_locals, depth + 1)?;
        let param_decl = if body.free_vars().contains(param) {
            format!("{arg_ty} {}", mangle(param))
        } else {
            arg_ty.clone()
        };
        let pad = indent(depth + 1);
        let close = indent(depth);
        if captured.is_empty() {
            return Ok(format!(
                "sfc::function<void, {result_ty}({arg_ty})>(+[]({param_decl}) -> {result_ty} {{\n\
                 {pad}return {body_text};\n{close}}})"
            ));
        }
        for x in &captured {
            if !locals.contains(x) {
                return Err(CodegenError::Type {
                    span,
                    detail: format!("captured `{x}` is not a local at the lambda"),
                });
            }
        }
        let mut extract = String::new();
        for (x, ty) in captured.iter().zip(&field_tys) {
            let _ = writeln!(extract, "{pad}{ty} {0} = env.{0};", mangle(x));
        }
        let init: Vec<String> = captured.iter().map(|x| mangle(x)).collect();
        Ok(format!(
            "sfc::function<{record_ty}, {result_ty}({arg_ty})>({record_ty}({}), \
             +[]({record_ty}& env, {param_decl}) -> {result_ty} {{\n\
             {extract}{pad}return {body_text};\n{close}}})",
            init.join(", ")
        ))
    }
}

/// Lowers a checked program to a C++ translation unit.
pub fn lower_program(checked: &CheckedProgram<'_>) -> Result<LoweredProgram, CodegenError> {
    let mut lw = Lowerer {
        checked,
        records: collect(checked),
        lambdas: Vec::new(),
    };
    let mut out = String::new();
    out.push_str("#include <cstdint>\n#include <cstdio>\n");
    let _ = writeln!(out, "#include \"{RUNTIME_HEADER}\"\n");
    for def in &lw.records.defs {
        out.push_str(&def.to_cpp());
        out.push('\n');
    }
    for (b, (_, scheme)) in checked.program().bindings.iter().zip(checked.schemes()) {
        let tenv: TyEnv = scheme
            .quantified()
            .iter()
            .map(|q| {
                (
                    q.clone(),
                    CppTy {
                        text: mangle_type_var(q),
                        is_scope: false,
                    },
                )
            })
            .collect();
        let ret = lw.lower_value_ty(scheme.body(), &tenv, b.span)?;
        let args: Vec<CppTy> = tenv.iter().map(|(_, t)| t.clone()).collect();
        let body = lw.lower_inst(&b.term, args, &TyEnv::new(), &[], 1)?;
        if !tenv.is_empty() {
            let params: Vec<String> = tenv
                .iter()
                .map(|(_, t)| format!("typename {}", t.text))
                .collect();
            let _ = writeln!(out, "template<{}>", params.join(", "));
        }
        let _ = writeln!(
            out,
            "inline {ret} {}() {{\n    return {body};\n}}\n",
            mangle(&b.name)
        );
    }
    let has_main = checked
        .scheme_of("main")
        .is_some_and(|s| s.is_mono() && *s.body() == Ty::Int);
    if has_main {
        let _ = writeln!(
            out,
            "int main() {{\n    std::printf(\"%lld\\n\", static_cast<long long>({}()));\n    return 0;\n}}",
            mangle("main")
        );
    }
    Ok(LoweredProgram {
        records: lw.records.defs,
        lambdas: lw.lambdas,
        has_main,
        text: out,
    })
}
