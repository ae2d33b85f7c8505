//! Statement grammar:
//!
//! ```text
//! import pkg.*;
//! name := query;
//! CreateVertexClass Name <== query;
//! CreateEdgeClass Name from A [role r] to B [role r] <== query;
//! AddSubClass Sub Super;
//! CreateAttribute Owner.attr : Domain [= 'literal'] [<== query];
//! SetAttributes Owner.attr <== query;
//! ```

use super::ast::{Statement, StatementKind, Transformation};
use crate::query::lexer::{tokenize, SyntaxError, Tok};
use crate::query::{parse_query, Expr, Parser};
use crate::value::{Domain, Value};

pub fn parse_transformation(text: &str) -> Result<Transformation, SyntaxError> {
    let tokens = tokenize(text)?;
    let mut p = Parser::new(&tokens);
    let mut t = Transformation::default();
    while *p.peek() != Tok::Eof {
        let line = p.position().line;
        if matches!(p.peek(), Tok::Ident(s) if s == "import") {
            p.bump();
            t.imports.push(import_name(&mut p)?);
        } else {
            let kind = statement(&mut p)?;
            t.statements.push(Statement { line, kind });
        }
        p.expect(&Tok::Semi, "`;`")?;
    }
    Ok(t)
}

fn import_name(p: &mut Parser) -> Result<String, SyntaxError> {
    let mut parts = vec![p.ident()?];
    loop {
        p.expect(&Tok::Dot, "`.`")?;
        if p.eat(&Tok::Star) {
            return Ok(parts.join("."));
        }
        parts.push(p.ident()?);
    }
}

fn statement(p: &mut Parser) -> Result<StatementKind, SyntaxError> {
    let Tok::Ident(head) = p.peek().clone() else {
        return Err(p.unexpected("a statement"));
    };
    if *p.peek_at(1) == Tok::Assign {
        p.bump();
        p.bump();
        return Ok(StatementKind::GlobalBinding {
            name: head,
            query: p.expr()?,
        });
    }
    match head.as_str() {
        "CreateVertexClass" => {
            p.bump();
            let name = p.qualified_name()?;
            Ok(StatementKind::CreateVertexClass {
                name,
                query: feed(p)?,
            })
        }
        "CreateEdgeClass" => {
            p.bump();
            let name = p.qualified_name()?;
            p.expect_keyword("from")?;
            let from_class = p.qualified_name()?;
            let from_role = role(p)?;
            if !matches!(p.bump(), Tok::Ident(s) if s == "to") {
                return Err(p.error("expected `to`"));
            }
            let to_class = p.qualified_name()?;
            let to_role = role(p)?;
            Ok(StatementKind::CreateEdgeClass {
                name,
                from_class,
                from_role,
                to_class,
                to_role,
                query: feed(p)?,
            })
        }
        "AddSubClass" => {
            p.bump();
            Ok(StatementKind::AddSubClass {
                subclass: p.qualified_name()?,
                superclass: p.qualified_name()?,
            })
        }
        "CreateAttribute" => {
            p.bump();
            let (owner, attribute) = owner_attribute(p)?;
            p.expect(&Tok::Colon, "`:`")?;
            let domain_pos = p.position();
            let domain_name = p.ident()?;
            let domain = Domain::parse(&domain_name).ok_or_else(|| {
                SyntaxError::at(domain_pos, format!("unknown domain `{domain_name}`"))
            })?;
            let default = if p.eat(&Tok::Eq) {
                Some(default_literal(p)?)
            } else {
                None
            };
            let query = if *p.peek() == Tok::Feed {
                Some(feed(p)?)
            } else {
                None
            };
            Ok(StatementKind::CreateAttribute {
                owner,
                attribute,
                domain,
                default,
                query,
            })
        }
        "SetAttributes" => {
            p.bump();
            let (owner, attribute) = owner_attribute(p)?;
            Ok(StatementKind::SetAttributes {
                owner,
                attribute,
                query: feed(p)?,
            })
        }
        _ => Err(p.unexpected("a statement")),
    }
}

fn feed(p: &mut Parser) -> Result<Expr, SyntaxError> {
    p.expect(&Tok::Feed, "`<==`")?;
    p.expr()
}

fn role(p: &mut Parser) -> Result<Option<String>, SyntaxError> {
    if matches!(p.peek(), Tok::Ident(s) if s == "role") {
        p.bump();
        return Ok(Some(p.ident()?));
    }
    Ok(None)
}

fn owner_attribute(p: &mut Parser) -> Result<(String, String), SyntaxError> {
    let pos = p.position();
    let full = p.qualified_name()?;
    match full.rsplit_once('.') {
        Some((owner, attr)) => Ok((owner.to_string(), attr.to_string())),
        None => Err(SyntaxError::at(pos, "expected `Class.attribute`")),
    }
}

// `'"--"'` holds a query literal inside single quotes.
fn default_literal(p: &mut Parser) -> Result<Value, SyntaxError> {
    let pos = p.position();
    let Tok::Quoted(text) = p.bump() else {
        return Err(SyntaxError::at(pos, "expected a quoted default value"));
    };
    match parse_query(&text) {
        Ok(Expr::Literal(v)) => Ok(v),
        _ => Err(SyntaxError::at(
            pos,
            format!("default `{text}` is not a literal"),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn imports_and_binding() {
        let t = parse_transformation("import classifiers.*; import a.b.*;\nx := 1;\n// done\n")
            .unwrap();
        assert_eq!(t.imports, ["classifiers", "a.b"]);
        assert_eq!(t.statements.len(), 1);
        assert_eq!(t.statements[0].line, 2);
    }

    #[test]
    fn create_edge_class_header() {
        let t = parse_transformation(
            "CreateEdgeClass T from S role src to S role dst <== from x: V{A} reportSet x, x, x end;",
        )
        .unwrap();
        let StatementKind::CreateEdgeClass {
            name,
            from_role,
            to_class,
            ..
        } = &t.statements[0].kind
        else {
            panic!()
        };
        assert_eq!(name, "T");
        assert_eq!(from_role.as_deref(), Some("src"));
        assert_eq!(to_class, "S");
    }

    #[test]
    fn quoted_default_value() {
        let t = parse_transformation("CreateAttribute T.trigger : String = '\"--\"';").unwrap();
        let StatementKind::CreateAttribute { default, query, .. } = &t.statements[0].kind else {
            panic!()
        };
        assert_eq!(default, &Some(Value::str("--")));
        assert!(query.is_none());
    }

    #[test]
    fn where_binding_ends_at_semicolon() {
        let t = parse_transformation(
            "CreateVertexClass S <== from c: V{A} reportSet c end where y := 1; AddSubClass S T;",
        )
        .unwrap();
        assert_eq!(t.statements.len(), 2);
    }

    #[test]
    fn errors_have_positions() {
        let e =
            parse_transformation("CreateVertexClass S <== from c: V{A} reportSet c;").unwrap_err();
        assert_eq!(e.line, 1);
        let e = parse_transformation("x := 1;\nCreateAttribute S.n : Float;").unwrap_err();
        assert_eq!((e.line, e.column), (2, 23));
        assert!(parse_transformation("Frobnicate S;").is_err());
        assert!(parse_transformation("x := 1").is_err());
    }
}
