use super::lexer::{tokenize, Tok};
use super::{Binding, ParseError, SourceProgram, TypeDecl};
use crate::ast::{Name, ScopeType, Span, Term, TermKind, Ty, TypeScheme};

const KEYWORDS: &[&str] = &["let", "type", "forall", "Int"];

pub(crate) fn is_keyword(s: &str) -> bool {
    KEYWORDS.contains(&s)
}

struct Parser {
    toks: Vec<(Tok, Span)>,
    pos: usize,
}

impl Parser {
    fn new(src: &str) -> Result<Self, ParseError> {
        Ok(Parser {
            toks: tokenize(src)?,
            pos: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn span(&self) -> Span {
        self.toks[self.pos].1
    }

    fn advance(&mut self) -> (Tok, Span) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<I, S>(&self, expected: I) -> ParseError
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        ParseError::new(self.span(), expected, self.peek().to_string())
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.advance();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<Span, ParseError> {
        if *self.peek() == tok {
            Ok(self.advance().1)
        } else {
            Err(self.error([tok.to_string()]))
        }
    }

    fn at_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn ident(&mut self) -> Result<(Name, Span), ParseError> {
        match self.peek() {
            Tok::Ident(s) if !is_keyword(s) => {
                let name = Name::from(s.as_str());
                Ok((name, self.advance().1))
            }
            _ => Err(self.error(["identifier"])),
        }
    }

    fn ty_var(&mut self) -> Result<Name, ParseError> {
        match self.peek() {
            Tok::TyVar(s) => {
                let name = Name::from(s.as_str());
                self.advance();
                Ok(name)
            }
            _ => Err(self.error(["type variable"])),
        }
    }

    fn finish(&mut self) -> Result<(), ParseError> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            Err(self.error(["end of input"]))
        }
    }

    // ---- programs ----

    fn program(&mut self) -> Result<SourceProgram, ParseError> {
        let mut program = SourceProgram::default();
        loop {
            if self.at_keyword("let") {
                let span = self.advance().1;
                let (name, _) = self.ident()?;
                if program.binding(&name).is_some() {
                    return Err(ParseError::new(
                        span,
                        ["fresh binding name"],
                        format!("duplicate binding `{name}`"),
                    ));
                }
                self.expect(Tok::Eq)?;
                let term = self.term()?;
                self.eat(&Tok::Semi);
                program.bindings.push(Binding { name, term, span });
            } else if self.at_keyword("type") {
                let span = self.advance().1;
                let (name, _) = self.ident()?;
                self.expect(Tok::Slash)?;
                let arity = match self.peek() {
                    Tok::Int(n) if *n >= 0 => *n as usize,
                    _ => return Err(self.error(["arity"])),
                };
                self.advance();
                self.eat(&Tok::Semi);
                if program.type_decls.iter().any(|d| d.name == name) {
                    return Err(ParseError::new(
                        span,
                        ["fresh type constructor"],
                        format!("duplicate type constructor `{name}`"),
                    ));
                }
                program.type_decls.push(TypeDecl { name, arity, span });
            } else if *self.peek() == Tok::Eof {
                return Ok(program);
            } else {
                return Err(self.error(["`let`", "`type`", "end of input"]));
            }
        }
    }

    // ---- terms ----

    fn term(&mut self) -> Result<Term, ParseError> {
        let span = self.span();
        match self.peek() {
            Tok::Backslash => {
                self.advance();
                let (param, _) = self.ident()?;
                self.expect(Tok::Colon)?;
                let param_ty = self.ty()?;
                self.expect(Tok::Dot)?;
                let body = self.term()?;
                Ok(Term::abs(param, param_ty, body).at(span))
            }
            Tok::BigLambda => {
                self.advance();
                let ty_param = self.ty_var()?;
                self.expect(Tok::Dot)?;
                let body = self.term()?;
                Ok(Term::tabs(ty_param, body).at(span))
            }
            _ => self.sum(),
        }
    }

    fn sum(&mut self) -> Result<Term, ParseError> {
        let span = self.span();
        let mut lhs = self.app()?;
        while self.eat(&Tok::Plus) {
            let rhs = self.app()?;
            lhs = Term::add(lhs, rhs).at(span);
        }
        Ok(lhs)
    }

    fn starts_atom(&self) -> bool {
        match self.peek() {
            Tok::Ident(s) => !is_keyword(s),
            Tok::Int(_) | Tok::LParen => true,
            _ => false,
        }
    }

    fn app(&mut self) -> Result<Term, ParseError> {
        let span = self.span();
        if !self.starts_atom() {
            return Err(self.error(["`\\`", "`/\\`", "identifier", "integer", "`(`"]));
        }
        let mut fun = self.atom()?;
        loop {
            if self.starts_atom() {
                let arg = self.atom()?;
                fun = Term::app(fun, arg).at(span);
            } else if self.eat(&Tok::LBrack) {
                let ty = self.ty()?;
                self.expect(Tok::RBrack)?;
                fun = Term::tapp(fun, ty).at(span);
            } else {
                return Ok(fun);
            }
        }
    }

    fn atom(&mut self) -> Result<Term, ParseError> {
        let span = self.span();
        match self.peek().clone() {
            Tok::Ident(_) => {
                let (name, _) = self.ident()?;
                Ok(Term::var(name).at(span))
            }
            Tok::Int(n) => {
                self.advance();
                Ok(Term::new(TermKind::Int(n), span))
            }
            Tok::LParen => {
                self.advance();
                let t = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            _ => Err(self.error(["identifier", "integer", "`(`"])),
        }
    }

    // ---- types ----

    fn scheme(&mut self) -> Result<TypeScheme, ParseError> {
        let mut quantified = Vec::new();
        while self.at_keyword("forall") {
            self.advance();
            quantified.push(self.ty_var()?);
            self.expect(Tok::Dot)?;
        }
        let body = self.ty()?;
        Ok(TypeScheme::new(quantified, body))
    }

    fn ty(&mut self) -> Result<Ty, ParseError> {
        let domain = self.btype()?;
        match self.peek() {
            Tok::Minus => {
                self.advance();
                let scope = self.atype()?;
                self.expect(Tok::Arrow)?;
                let codomain = self.ty()?;
                Ok(Ty::clos(domain, scope, codomain))
            }
            Tok::Arrow => {
                self.advance();
                let codomain = self.ty()?;
                Ok(Ty::plain(domain, codomain))
            }
            _ => Ok(domain),
        }
    }

    fn con_name(&self) -> Option<Name> {
        match self.peek() {
            Tok::Ident(s) if !is_keyword(s) => Some(Name::from(s.as_str())),
            _ => None,
        }
    }

    fn btype(&mut self) -> Result<Ty, ParseError> {
        let mut args = self.atype_or_tuple()?;
        loop {
            match self.con_name() {
                Some(name) => {
                    self.advance();
                    args = vec![Ty::Con(name, args)];
                }
                None if args.len() == 1 => return Ok(args.pop().unwrap()),
                None => return Err(self.error(["type constructor"])),
            }
        }
    }

    /// A type atom, or a parenthesised comma list of argument types that
    /// must be followed by a constructor name.
    fn atype_or_tuple(&mut self) -> Result<Vec<Ty>, ParseError> {
        if *self.peek() != Tok::LParen {
            return Ok(vec![self.atype()?]);
        }
        self.advance();
        let mut items = vec![self.ty()?];
        while self.eat(&Tok::Comma) {
            items.push(self.ty()?);
        }
        self.expect(Tok::RParen)?;
        Ok(items)
    }

    fn atype(&mut self) -> Result<Ty, ParseError> {
        let span = self.span();
        match self.peek().clone() {
            Tok::TyVar(a) => {
                self.advance();
                Ok(Ty::var(a.as_str()))
            }
            Tok::Ident(s) if s == "Int" => {
                self.advance();
                Ok(Ty::Int)
            }
            Tok::Ident(s) if !is_keyword(&s) => {
                self.advance();
                Ok(Ty::con(s.as_str(), Vec::new()))
            }
            Tok::LBrace => {
                self.advance();
                let mut fields = Vec::new();
                if *self.peek() != Tok::RBrace {
                    loop {
                        let (name, _) = self.ident()?;
                        self.expect(Tok::Colon)?;
                        fields.push((name, self.ty()?));
                        if !self.eat(&Tok::Comma) {
                            break;
                        }
                    }
                }
                self.expect(Tok::RBrace)?;
                ScopeType::from_fields(fields)
                    .map(Ty::Scope)
                    .map_err(|e| ParseError::new(span, ["distinct field names"], e.to_string()))
            }
            Tok::LParen => {
                self.advance();
                let t = self.ty()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            _ => Err(self.error(["type variable", "`Int`", "`{`", "`(`", "type constructor"])),
        }
    }
}

pub fn parse_program(src: &str) -> Result<SourceProgram, ParseError> {
    Parser::new(src)?.program()
}

pub fn parse_term(src: &str) -> Result<Term, ParseError> {
    let mut p = Parser::new(src)?;
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

pub fn parse_type(src: &str) -> Result<Ty, ParseError> {
    let mut p = Parser::new(src)?;
    let t = p.ty()?;
    p.finish()?;
    Ok(t)
}

pub fn parse_scheme(src: &str) -> Result<TypeScheme, ParseError> {
    let mut p = Parser::new(src)?;
    let s = p.scheme()?;
    p.finish()?;
    Ok(s)
}
