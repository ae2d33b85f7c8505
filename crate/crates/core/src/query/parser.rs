//! Recursive-descent parser for the query language.
//!
//! Precedence, loosest first: `or`, `and`, `not`, `=`/`<>`, path
//! application, postfix `.name`/`[i]`, primaries. Inside a path, `|` is
//! loosest, then sequencing, then the `+`/`*` suffixes. A `&` may precede
//! any path element; it binds the element to what came before but does not
//! change the meaning of the sequence.

use super::ast::{Arrow, Comprehension, Declaration, Expr, PathExpr, Repeat, Report, Restriction};
use super::lexer::{tokenize, Pos, SyntaxError, Tok, Token};
use crate::value::Value;

const KEYWORDS: &[&str] = &[
    "from",
    "with",
    "where",
    "reportSet",
    "reportMap",
    "end",
    "and",
    "or",
    "not",
    "true",
    "false",
];

pub fn is_keyword(s: &str) -> bool {
    KEYWORDS.contains(&s)
}

/// Parses a standalone query. Where-bindings may be separated by `,` or `;`.
pub fn parse_query(text: &str) -> Result<Expr, SyntaxError> {
    let tokens = tokenize(text)?;
    let mut p = Parser::new(&tokens);
    p.semicolon_bindings = true;
    let e = p.expr()?;
    p.expect_eof()?;
    Ok(e)
}

pub(crate) struct Parser<'t> {
    tokens: &'t [Token],
    pos: usize,
    /// `;` is also a statement terminator inside transformations, so it only
    /// separates where-bindings in standalone queries.
    pub(crate) semicolon_bindings: bool,
}

impl<'t> Parser<'t> {
    pub(crate) fn new(tokens: &'t [Token]) -> Self {
        Parser {
            tokens,
            pos: 0,
            semicolon_bindings: false,
        }
    }

    pub(crate) fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    pub(crate) fn peek_at(&self, offset: usize) -> &Tok {
        let i = (self.pos + offset).min(self.tokens.len() - 1);
        &self.tokens[i].tok
    }

    pub(crate) fn position(&self) -> Pos {
        self.tokens[self.pos].pos
    }

    pub(crate) fn bump(&mut self) -> Tok {
        let t = self.tokens[self.pos].tok.clone();
        if self.pos < self.tokens.len() - 1 {
            self.pos += 1;
        }
        t
    }

    pub(crate) fn error(&self, message: impl Into<String>) -> SyntaxError {
        SyntaxError::at(self.position(), message)
    }

    pub(crate) fn unexpected(&self, expected: &str) -> SyntaxError {
        self.error(format!(
            "expected {expected}, found {}",
            self.peek().describe()
        ))
    }

    pub(crate) fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    pub(crate) fn expect(&mut self, tok: &Tok, expected: &str) -> Result<(), SyntaxError> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.unexpected(expected))
        }
    }

    pub(crate) fn expect_eof(&self) -> Result<(), SyntaxError> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            Err(self.unexpected("end of input"))
        }
    }

    pub(crate) fn at_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    pub(crate) fn eat_keyword(&mut self, kw: &str) -> bool {
        if self.at_keyword(kw) {
            self.bump();
            true
        } else {
            false
        }
    }

    pub(crate) fn expect_keyword(&mut self, kw: &str) -> Result<(), SyntaxError> {
        if self.eat_keyword(kw) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("`{kw}`")))
        }
    }

    /// A non-keyword identifier.
    pub(crate) fn ident(&mut self) -> Result<String, SyntaxError> {
        match self.peek() {
            Tok::Ident(s) if !is_keyword(s) => {
                let s = s.clone();
                self.bump();
                Ok(s)
            }
            _ => Err(self.unexpected("an identifier")),
        }
    }

    /// `a.b.C`
    pub(crate) fn qualified_name(&mut self) -> Result<String, SyntaxError> {
        let mut name = self.ident()?;
        while *self.peek() == Tok::Dot && matches!(self.peek_at(1), Tok::Ident(_)) {
            self.bump();
            name.push('.');
            name.push_str(&self.ident()?);
        }
        Ok(name)
    }

    fn at_identifier(&self) -> bool {
        matches!(self.peek(), Tok::Ident(s) if !is_keyword(s))
    }

    pub(crate) fn expr(&mut self) -> Result<Expr, SyntaxError> {
        let mut lhs = self.and_expr()?;
        while self.eat_keyword("or") {
            let rhs = self.and_expr()?;
            lhs = Expr::Or(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn and_expr(&mut self) -> Result<Expr, SyntaxError> {
        let mut lhs = self.not_expr()?;
        while self.eat_keyword("and") {
            let rhs = self.not_expr()?;
            lhs = Expr::And(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn not_expr(&mut self) -> Result<Expr, SyntaxError> {
        if self.eat_keyword("not") {
            return Ok(Expr::Not(Box::new(self.not_expr()?)));
        }
        self.comparison()
    }

    fn comparison(&mut self) -> Result<Expr, SyntaxError> {
        let lhs = self.path_application()?;
        if self.eat(&Tok::Eq) {
            let rhs = self.path_application()?;
            return Ok(Expr::Eq(Box::new(lhs), Box::new(rhs)));
        }
        if self.eat(&Tok::NotEq) {
            let rhs = self.path_application()?;
            return Ok(Expr::NotEq(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn at_path_start(&self) -> bool {
        matches!(
            self.peek(),
            Tok::Arrow | Tok::Diamond | Tok::LBrace | Tok::Amp
        )
    }

    fn path_application(&mut self) -> Result<Expr, SyntaxError> {
        let start = if self.at_path_start() {
            None
        } else {
            let e = self.postfix()?;
            if !self.at_path_start() {
                return Ok(e);
            }
            Some(Box::new(e))
        };
        let path = self.path()?;
        let target = if self.at_identifier() {
            Some(Box::new(self.postfix()?))
        } else {
            None
        };
        Ok(Expr::Path {
            start,
            path,
            target,
        })
    }

    fn postfix(&mut self) -> Result<Expr, SyntaxError> {
        let mut e = self.primary()?;
        loop {
            if *self.peek() == Tok::Dot {
                self.bump();
                let name = self.ident()?;
                e = Expr::Attr(Box::new(e), name);
            } else if *self.peek() == Tok::LBracket {
                self.bump();
                let index = match self.bump() {
                    Tok::Int(i) if i >= 0 => i as usize,
                    _ => {
                        self.pos -= 1;
                        return Err(self.unexpected("a tuple index"));
                    }
                };
                self.expect(&Tok::RBracket, "`]`")?;
                e = Expr::Index(Box::new(e), index);
            } else {
                return Ok(e);
            }
        }
    }

    fn primary(&mut self) -> Result<Expr, SyntaxError> {
        match self.peek().clone() {
            Tok::Str(s) => {
                self.bump();
                Ok(Expr::Literal(Value::String(s)))
            }
            Tok::Int(i) => {
                self.bump();
                Ok(Expr::Literal(Value::Integer(i)))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(&Tok::RParen, "`)`")?;
                Ok(e)
            }
            Tok::Ident(s) => match s.as_str() {
                "from" => {
                    self.bump();
                    Ok(Expr::Comprehension(Box::new(self.comprehension()?)))
                }
                "true" | "false" => {
                    self.bump();
                    Ok(Expr::Literal(Value::Boolean(s == "true")))
                }
                "V" if *self.peek_at(1) == Tok::LBrace => {
                    self.bump();
                    self.bump();
                    let t = self.qualified_name()?;
                    self.expect(&Tok::RBrace, "`}`")?;
                    Ok(Expr::Extent(t))
                }
                _ if is_keyword(&s) => Err(self.unexpected("an expression")),
                _ => {
                    self.bump();
                    if self.eat(&Tok::LParen) {
                        let mut args = Vec::new();
                        if !self.eat(&Tok::RParen) {
                            loop {
                                args.push(self.expr()?);
                                if self.eat(&Tok::RParen) {
                                    break;
                                }
                                self.expect(&Tok::Comma, "`,` or `)`")?;
                            }
                        }
                        Ok(Expr::Call(s, args))
                    } else {
                        Ok(Expr::Var(s))
                    }
                }
            },
            _ => Err(self.unexpected("an expression")),
        }
    }

    fn comprehension(&mut self) -> Result<Comprehension, SyntaxError> {
        let mut declarations = Vec::new();
        loop {
            let mut vars = vec![self.ident()?];
            while self.eat(&Tok::Comma) {
                vars.push(self.ident()?);
            }
            self.expect(&Tok::Colon, "`:` after declared variables")?;
            let domain = self.expr()?;
            declarations.push(Declaration { vars, domain });
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        let filter = if self.eat_keyword("with") {
            Some(self.expr()?)
        } else {
            None
        };
        let report = if self.eat_keyword("reportSet") {
            let mut items = vec![self.expr()?];
            while self.eat(&Tok::Comma) {
                items.push(self.expr()?);
            }
            Report::Set(items)
        } else if self.eat_keyword("reportMap") {
            let key = self.expr()?;
            self.expect(&Tok::MapsTo, "`->` in reportMap")?;
            let value = self.expr()?;
            Report::Map(key, value)
        } else {
            return Err(self.unexpected("`with`, `reportSet` or `reportMap`"));
        };
        self.expect_keyword("end")?;
        let mut bindings = Vec::new();
        if self.eat_keyword("where") {
            loop {
                let name = self.ident()?;
                self.expect(&Tok::Assign, "`:=`")?;
                bindings.push((name, self.expr()?));
                let separator = match self.peek() {
                    Tok::Comma => true,
                    Tok::Semi => self.semicolon_bindings,
                    _ => false,
                };
                // Another binding only if `name :=` follows the separator.
                if separator
                    && matches!(self.peek_at(1), Tok::Ident(s) if !is_keyword(s))
                    && *self.peek_at(2) == Tok::Assign
                {
                    self.bump();
                } else {
                    break;
                }
            }
        }
        Ok(Comprehension {
            declarations,
            filter,
            report,
            bindings,
        })
    }

    pub(crate) fn path(&mut self) -> Result<PathExpr, SyntaxError> {
        let mut alts = vec![self.path_sequence()?];
        while self.eat(&Tok::Bar) {
            alts.push(self.path_sequence()?);
        }
        Ok(if alts.len() == 1 {
            alts.pop().unwrap()
        } else {
            PathExpr::Alt(alts)
        })
    }

    fn path_sequence(&mut self) -> Result<PathExpr, SyntaxError> {
        let mut items = Vec::new();
        loop {
            let amp = self.eat(&Tok::Amp);
            if !amp && !items.is_empty() && !self.at_element_start() {
                break;
            }
            if !self.at_element_start() {
                return Err(self.unexpected("a path element"));
            }
            let mut element = self.path_element()?;
            loop {
                if self.eat(&Tok::Plus) {
                    element = PathExpr::Iterate(Box::new(element), Repeat::Plus);
                } else if self.eat(&Tok::Star) {
                    element = PathExpr::Iterate(Box::new(element), Repeat::Star);
                } else {
                    break;
                }
            }
            items.push(element);
        }
        Ok(if items.len() == 1 {
            items.pop().unwrap()
        } else {
            PathExpr::Seq(items)
        })
    }

    fn at_element_start(&self) -> bool {
        matches!(
            self.peek(),
            Tok::Arrow | Tok::Diamond | Tok::LBrace | Tok::LParen
        )
    }

    fn path_element(&mut self) -> Result<PathExpr, SyntaxError> {
        match self.bump() {
            t @ (Tok::Arrow | Tok::Diamond) => {
                let arrow = if t == Tok::Arrow {
                    Arrow::Forward
                } else {
                    Arrow::Containment
                };
                // `{role}` directly after the arrow names the far-end role.
                let role = if *self.peek() == Tok::LBrace
                    && matches!(self.peek_at(1), Tok::Ident(_))
                    && *self.peek_at(2) == Tok::RBrace
                {
                    self.bump();
                    let r = self.ident()?;
                    self.bump();
                    Some(r)
                } else {
                    None
                };
                Ok(PathExpr::Step { arrow, role })
            }
            Tok::LBrace => {
                let mut types = vec![self.qualified_name()?];
                while self.eat(&Tok::Comma) {
                    types.push(self.qualified_name()?);
                }
                let predicate = if self.eat(&Tok::At) {
                    Some(Box::new(self.expr()?))
                } else {
                    None
                };
                self.expect(&Tok::RBrace, "`}` closing the type restriction")?;
                Ok(PathExpr::Restrict(Restriction { types, predicate }))
            }
            Tok::LParen => {
                let inner = self.path()?;
                self.expect(&Tok::RParen, "`)` closing the path group")?;
                Ok(PathExpr::Group(Box::new(inner)))
            }
            _ => {
                self.pos -= 1;
                Err(self.unexpected("a path element"))
            }
        }
    }
}
