//! Concrete `.sfc` syntax: lexer, recursive-descent parser and printer.
//!
//! ```text
//! program  ::= { decl }
//! decl     ::= "type" IDENT "/" NAT [";"]
//!            | "let" IDENT "=" term [";"]
//! term     ::= "\" IDENT ":" type "." term
//!            | "/\" TYVAR "." term
//!            | sum
//! sum      ::= app { "+" app }
//! app      ::= atom { atom | "[" type "]" }
//! atom     ::= IDENT | INT | "(" term ")"
//! scheme   ::= { "forall" TYVAR "." } type
//! type     ::= btype [ "-" atype "->" type | "->" type ]
//! btype    ::= ( atype | "(" type { "," type } ")" ) { IDENT }
//! atype    ::= TYVAR | "Int" | IDENT | "{" [ field { "," field } ] "}" | "(" type ")"
//! field    ::= IDENT ":" type
//! IDENT    ::= [A-Za-z] [A-Za-z0-9_']*        (not a keyword)
//! TYVAR    ::= "'" IDENT
//! INT      ::= ["-"] [0-9]+
//! ```
//!
//! Keywords are `let`, `type`, `forall` and `Int`. `#` starts a comment
//! that runs to the end of the line.

mod lexer;
mod parser;
mod printer;

use std::fmt;

use crate::ast::{Name, Span, Term};

pub use parser::{parse_program, parse_scheme, parse_term, parse_type};
pub use printer::{print_program, print_scheme, print_term, print_type};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    pub span: Span,
    pub expected: Vec<String>,
    pub found: String,
}

impl ParseError {
    pub(crate) fn new<I, S>(span: Span, expected: I, found: impl Into<String>) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        ParseError {
            span,
            expected: expected.into_iter().map(Into::into).collect(),
            found: found.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.expected.as_slice() {
            [] => write!(f, "unexpected {}", self.found),
            [one] => write!(f, "expected {one}, found {}", self.found),
            many => write!(
                f,
                "expected one of {}; found {}",
                many.join(", "),
                self.found
            ),
        }
    }
}

/// `type name/arity`: an opaque type constructor with no runtime values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeDecl {
    pub name: Name,
    pub arity: usize,
    pub span: Span,
}

/// `let name = term`.
#[derive(Clone, Debug, PartialEq)]
pub struct Binding {
    pub name: Name,
    pub term: Term,
    pub span: Span,
}

/// A parsed `.sfc` file. Bindings are non-recursive and may only refer to
/// earlier bindings; the binding named `main`, if any, is the entry point.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SourceProgram {
    pub type_decls: Vec<TypeDecl>,
    pub bindings: Vec<Binding>,
}

impl SourceProgram {
    pub fn binding(&self, name: &str) -> Option<&Binding> {
        self.bindings.iter().find(|b| b.name == name)
    }

    pub fn main(&self) -> Option<&Binding> {
        self.binding("main")
    }

    pub fn uses_plumbing(&self) -> bool {
        self.bindings.iter().any(|b| b.term.uses_plumbing())
    }
}
