use std::fmt;
use std::sync::Arc;

use super::{Name, Term};

/// Runtime values of the environment-passing evaluator.
#[derive(Clone, Debug)]
pub enum Value {
    /// `(\x. e)[env]`: a lambda paired with a snapshot of its free variables.
    Closure(Arc<Closure>),
    /// `/\. e`: a type abstraction with its type parameter erased.
    TypeClosure(Arc<Term>),
    Int(i64),
}

#[derive(Clone, Debug)]
pub struct Closure {
    pub param: Name,
    pub body: Arc<Term>,
    pub captured: Env,
}

impl Value {
    pub fn as_int(&self) -> Option<i64> {
        match self {
            Value::Int(n) => Some(*n),
            _ => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(n) => write!(f, "{n}"),
            Value::Closure(c) => {
                write!(f, "<closure \\{}. {}", c.param, c.body)?;
                if !c.captured.is_empty() {
                    f.write_str(" [")?;
                    for (i, (name, v)) in c.captured.iter().enumerate() {
                        if i > 0 {
                            f.write_str(", ")?;
                        }
                        write!(f, "{name} = {v}")?;
                    }
                    f.write_str("]")?;
                }
                f.write_str(">")
            }
            Value::TypeClosure(body) => write!(f, "<type abstraction /\\. {body}>"),
        }
    }
}

/// A runtime environment. Later bindings shadow earlier ones.
#[derive(Clone, Debug, Default)]
pub struct Env {
    bindings: Vec<(Name, Value)>,
}

impl Env {
    pub fn new() -> Self {
        Env::default()
    }

    pub fn lookup(&self, name: &str) -> Option<&Value> {
        self.bindings
            .iter()
            .rev()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v)
    }

    pub fn bind(&mut self, name: impl Into<Name>, value: Value) {
        self.bindings.push((name.into(), value));
    }

    pub fn extended(mut self, name: impl Into<Name>, value: Value) -> Self {
        self.bind(name, value);
        self
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Name, &Value)> + '_ {
        self.bindings.iter().map(|(n, v)| (n, v))
    }

    /// Names bound in the environment, without duplicates.
    pub fn domain(&self) -> std::collections::BTreeSet<Name> {
        self.bindings.iter().map(|(n, _)| n.clone()).collect()
    }
}

impl<N: Into<Name>> FromIterator<(N, Value)> for Env {
    fn from_iter<I: IntoIterator<Item = (N, Value)>>(iter: I) -> Self {
        Env {
            bindings: iter.into_iter().map(|(n, v)| (n.into(), v)).collect(),
        }
    }
}
