//! Closure-typed prenex System F.
//!
//! Every lambda's type records the types of the variables it captures,
//! `A -{x: X, ...}-> B`, so closures have a statically known size and can
//! live on the stack. This crate parses `.sfc` programs, type-checks them,
//! evaluates them with an environment-passing interpreter (cross-checked
//! by a substitution interpreter), and lowers them to C++ where every
//! closure is a by-value capture record plus a function pointer.

pub mod ast;
pub mod codegen;
pub mod eval;
pub mod syntax;
pub mod testgen;
pub mod typecheck;

pub use ast::{
    alpha_equal, canonicalize_scope, free_type_vars, free_vars, subst_scheme, subst_ty, ty_equal,
    wf_type, Env, Name, ScopeType, Span, Term, TermKind, Ty, TypeContext, TypeScheme, Value,
};
pub use codegen::{
    collect_capture_records, lower_program, mangle, CaptureRecordDef, CodegenError, LoweredProgram,
};
pub use eval::{
    eval, eval_subst_oracle, values_agree, EvalError, EvalErrorKind, Evaluator, OracleValue,
};
pub use syntax::{
    parse_program, parse_scheme, parse_term, parse_type, print_scheme, print_term, print_type,
    ParseError, SourceProgram,
};
