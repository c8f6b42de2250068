//! Big-step, environment-passing evaluation.
//!
//! A lambda evaluates to a closure holding a copy of exactly the bindings
//! of its free local variables, taken when the lambda is evaluated.
//! Application runs the body under that captured environment extended
//! with the argument; the caller's environment plays no part. A type
//! abstraction evaluates to its body with the type parameter erased, and
//! a type application runs that body under the current environment.
//!
//! [`oracle`] holds an independent substitution-based interpreter and
//! [`values_agree`] compares the two observationally.

mod agree;
pub mod oracle;

use std::fmt;
use std::sync::Arc;

use crate::ast::{Closure, Env, Name, Span, Term, TermKind, Value};
use crate::syntax::SourceProgram;

pub use agree::{values_agree, values_agree_to_depth, PROBE_DEPTH};
pub use oracle::{eval_subst_oracle, inline_program, OracleValue};

pub const DEFAULT_FUEL: u64 = 1_000_000;
pub const DEFAULT_MAX_DEPTH: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EvalErrorKind {
    UnboundVar,
    ApplyNonClosure,
    TappNonTabs,
    /// `+` applied to something other than two integers.
    AddNonInteger,
    FuelExhausted,
    /// Evaluation nested deeper than the configured limit.
    DepthExceeded,
}

impl EvalErrorKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EvalErrorKind::UnboundVar => "unbound-var",
            EvalErrorKind::ApplyNonClosure => "apply-non-closure",
            EvalErrorKind::TappNonTabs => "tapp-non-tabs",
            EvalErrorKind::AddNonInteger => "add-non-integer",
            EvalErrorKind::FuelExhausted => "fuel-exhausted",
            EvalErrorKind::DepthExceeded => "depth-exceeded",
        }
    }
}

impl fmt::Display for EvalErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{kind}: {detail}")]
pub struct EvalError {
    pub kind: EvalErrorKind,
    pub span: Span,
    pub detail: String,
}

impl EvalError {
    pub(crate) fn new(kind: EvalErrorKind, span: Span, detail: impl Into<String>) -> Self {
        EvalError {
            kind,
            span,
            detail: detail.into(),
        }
    }
}

/// Error from evaluating one top-level binding.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("in `{binding}`: {error}")]
pub struct ProgramEvalError {
    pub binding: Name,
    pub error: EvalError,
}

/// Shared step/depth accounting for both interpreters.
pub(crate) struct Budget {
    fuel_left: u64,
    depth: usize,
    max_depth: usize,
}

impl Budget {
    pub(crate) fn new(fuel: u64, max_depth: usize) -> Self {
        Budget {
            fuel_left: fuel,
            depth: 0,
            max_depth,
        }
    }

    /// Charges one step and runs `f` one level deeper, growing the native
    /// stack on demand.
    pub(crate) fn step<T>(
        &mut self,
        span: Span,
        f: impl FnOnce(&mut Self) -> Result<T, EvalError>,
    ) -> Result<T, EvalError> {
        if self.fuel_left == 0 {
            return Err(EvalError::new(
                EvalErrorKind::FuelExhausted,
                span,
                "step budget exhausted",
            ));
        }
        if self.depth >= self.max_depth {
            return Err(EvalError::new(
                EvalErrorKind::DepthExceeded,
                span,
                format!("evaluation nested deeper than {}", self.max_depth),
            ));
        }
        self.fuel_left -= 1;
        self.depth += 1;
        let out = stacker::maybe_grow(64 * 1024, 2 * 1024 * 1024, || f(self));
        self.depth -= 1;
        out
    }
}

/// The environment-passing interpreter, optionally preloaded with the
/// values of a program's top-level bindings.
#[derive(Clone, Debug)]
pub struct Evaluator {
    globals: Env,
    fuel: u64,
    max_depth: usize,
}

impl Default for Evaluator {
    fn default() -> Self {
        Evaluator {
            globals: Env::new(),
            fuel: DEFAULT_FUEL,
            max_depth: DEFAULT_MAX_DEPTH,
        }
    }
}

impl Evaluator {
    pub fn new() -> Self {
        Evaluator::default()
    }

    /// Step budget granted to each top-level call.
    pub fn with_fuel(mut self, fuel: u64) -> Self {
        self.fuel = fuel;
        self
    }

    pub fn with_max_depth(mut self, max_depth: usize) -> Self {
        self.max_depth = max_depth;
        self
    }

    pub fn with_globals(mut self, globals: Env) -> Self {
        self.globals = globals;
        self
    }

    pub fn fuel(&self) -> u64 {
        self.fuel
    }

    pub fn max_depth(&self) -> usize {
        self.max_depth
    }

    pub fn globals(&self) -> &Env {
        &self.globals
    }

    /// Evaluates every binding of `p` in order, making each value visible
    /// to the bindings after it.
    pub fn load(mut self, p: &SourceProgram) -> Result<Self, ProgramEvalError> {
        for b in &p.bindings {
            let v = self
                .eval(&Env::new(), &b.term)
                .map_err(|error| ProgramEvalError {
                    binding: b.name.clone(),
                    error,
                })?;
            self.globals.bind(b.name.clone(), v);
        }
        Ok(self)
    }

    pub fn eval(&self, env: &Env, t: &Term) -> Result<Value, EvalError> {
        let mut budget = Budget::new(self.fuel, self.max_depth);
        self.eval_in(&mut budget, env, t)
    }

    /// Applies a closure value to an argument value.
    pub fn apply(&self, fun: &Value, arg: Value) -> Result<Value, EvalError> {
        let mut budget = Budget::new(self.fuel, self.max_depth);
        self.apply_in(&mut budget, fun, arg, Span::default())
    }

    /// Runs the body of a type-abstraction value, as a type application
    /// at the top level would.
    pub fn instantiate(&self, v: &Value) -> Result<Value, EvalError> {
        match v {
            Value::TypeClosure(body) => self.eval(&Env::new(), body),
            other => Err(EvalError::new(
                EvalErrorKind::TappNonTabs,
                Span::default(),
                format!("cannot instantiate {other}"),
            )),
        }
    }

    fn lookup<'e>(&'e self, env: &'e Env, x: &str) -> Option<&'e Value> {
        env.lookup(x).or_else(|| self.globals.lookup(x))
    }

    fn eval_in(&self, budget: &mut Budget, env: &Env, t: &Term) -> Result<Value, EvalError> {
        budget.step(t.span, |budget| match &t.kind {
            TermKind::Var(x) => self.lookup(env, x).cloned().ok_or_else(|| {
                EvalError::new(
                    EvalErrorKind::UnboundVar,
                    t.span,
                    format!("`{x}` is unbound"),
                )
            }),
            TermKind::Abs { param, body, .. } => {
                let mut captured = Env::new();
                for y in t.free_vars() {
                    if let Some(v) = env.lookup(&y) {
                        captured.bind(y, v.clone());
                    } else if self.globals.lookup(&y).is_none() {
                        return Err(EvalError::new(
                            EvalErrorKind::UnboundVar,
                            t.span,
                            format!("`{y}` is unbound"),
                        ));
                    }
                }
                debug_assert!(t
                    .free_vars()
                    .iter()
                    .all(|y| captured.lookup(y).is_some() == env.lookup(y).is_some()));
                Ok(Value::Closure(Arc::new(Closure {
                    param: param.clone(),
                    body: Arc::clone(body),
                    captured,
                })))
            }
            TermKind::App(fun, arg) => {
                let f = self.eval_in(budget, env, fun)?;
                let a = self.eval_in(budget, env, arg)?;
                self.apply_in(budget, &f, a, t.span)
            }
            TermKind::TAbs { body, .. } => Ok(Value::TypeClosure(Arc::clone(body))),
            TermKind::TApp(fun, _) => match self.eval_in(budget, env, fun)? {
                Value::TypeClosure(body) => self.eval_in(budget, env, &body),
                other => Err(EvalError::new(
                    EvalErrorKind::TappNonTabs,
                    t.span,
                    format!("cannot instantiate {other}"),
                )),
            },
            TermKind::Int(n) => Ok(Value::Int(*n)),
            TermKind::Add(lhs, rhs) => {
                let a = self.eval_in(budget, env, lhs)?;
                let b = self.eval_in(budget, env, rhs)?;
                match (a, b) {
                    (Value::Int(a), Value::Int(b)) => Ok(Value::Int(a.wrapping_add(b))),
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
        &self,
        budget: &mut Budget,
        fun: &Value,
        arg: Value,
        span: Span,
    ) -> Result<Value, EvalError> {
        match fun {
            Value::Closure(c) => {
                let env = c.captured.clone().extended(c.param.clone(), arg);
                self.eval_in(budget, &env, &c.body)
            }
            other => Err(EvalError::new(
                EvalErrorKind::ApplyNonClosure,
                span,
                format!("cannot apply {other}"),
            )),
        }
    }
}

/// Evaluates `t` under `env` with a step budget of `fuel`.
pub fn eval(env: &Env, t: &Term, fuel: u64) -> Result<Value, EvalError> {
    Evaluator::new().with_fuel(fuel).eval(env, t)
}
