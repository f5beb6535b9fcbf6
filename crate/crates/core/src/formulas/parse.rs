use super::Formula;
use crate::structures::Signature;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormulaError {
    #[error("syntax error at column {column}: {message}")]
    Syntax { column: usize, message: String },
    #[error("unknown relation `{0}`")]
    UnknownRelation(String),
    #[error("arity mismatch for `{relation}`: expected {expected}, got {found}")]
    ArityMismatch {
        relation: String,
        expected: usize,
        found: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Forall,
    Exists,
    Dot,
    LParen,
    RParen,
    Comma,
    Eq,
    Not,
    And,
    Or,
    Arrow,
    Iff,
    End,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, FormulaError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let col = i + 1;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let (tok, len) = match c {
            b'.' => (Tok::Dot, 1),
            b'(' => (Tok::LParen, 1),
            b')' => (Tok::RParen, 1),
            b',' => (Tok::Comma, 1),
            b'=' => (Tok::Eq, 1),
            b'~' => (Tok::Not, 1),
            b'&' => (Tok::And, 1),
            b'|' => (Tok::Or, 1),
            b'-' if bytes.get(i + 1) == Some(&b'>') => (Tok::Arrow, 2),
            b'<' if text[i..].starts_with("<->") => (Tok::Iff, 3),
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let end = text[i..]
                    .find(|ch: char| !(ch.is_ascii_alphanumeric() || ch == '_'))
                    .map_or(text.len(), |k| i + k);
                let word = &text[i..end];
                let tok = match word {
                    "forall" => Tok::Forall,
                    "exists" => Tok::Exists,
                    _ => Tok::Ident(word.to_string()),
                };
                (tok, end - i)
            }
            _ => {
                return Err(FormulaError::Syntax {
                    column: col,
                    message: format!("unexpected character `{}`", text[i..].chars().next().unwrap()),
                })
            }
        };
        out.push((tok, col));
        i += len;
    }
    out.push((Tok::End, text.len() + 1));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    sig: &'a Signature,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn column(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, FormulaError> {
        Err(FormulaError::Syntax {
            column: self.column(),
            message: message.into(),
        })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), FormulaError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected {what}"))
        }
    }

    fn var(&mut self) -> Result<String, FormulaError> {
        match self.peek().clone() {
            Tok::Ident(v) => {
                self.bump();
                Ok(v)
            }
            _ => self.error("expected variable"),
        }
    }

    fn formula(&mut self) -> Result<Formula, FormulaError> {
        match self.peek() {
            Tok::Forall | Tok::Exists => {
                let q = self.bump();
                let v = self.var()?;
                self.expect(Tok::Dot, "`.` after quantified variable")?;
                let body = self.formula()?;
                Ok(if q == Tok::Forall {
                    Formula::Forall(v, Box::new(body))
                } else {
                    Formula::Exists(v, Box::new(body))
                })
            }
            _ => self.imp(),
        }
    }

    fn imp(&mut self) -> Result<Formula, FormulaError> {
        let lhs = self.or()?;
        match self.peek() {
            Tok::Arrow => {
                self.bump();
                Ok(Formula::implies(lhs, self.imp()?))
            }
            Tok::Iff => {
                self.bump();
                let rhs = self.imp()?;
                Ok(Formula::and(
                    Formula::implies(lhs.clone(), rhs.clone()),
                    Formula::implies(rhs, lhs),
                ))
            }
            _ => Ok(lhs),
        }
    }

    fn or(&mut self) -> Result<Formula, FormulaError> {
        let mut acc = self.and()?;
        while *self.peek() == Tok::Or {
            self.bump();
            acc = Formula::or(acc, self.and()?);
        }
        Ok(acc)
    }

    fn and(&mut self) -> Result<Formula, FormulaError> {
        let mut acc = self.neg()?;
        while *self.peek() == Tok::And {
            self.bump();
            acc = Formula::and(acc, self.neg()?);
        }
        Ok(acc)
    }

    fn neg(&mut self) -> Result<Formula, FormulaError> {
        if *self.peek() == Tok::Not {
            self.bump();
            return Ok(Formula::not(self.neg()?));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Formula, FormulaError> {
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Tok::Ident(name) => {
                self.bump();
                match self.peek() {
                    Tok::LParen => {
                        self.bump();
                        let mut args = vec![self.var()?];
                        while *self.peek() == Tok::Comma {
                            self.bump();
                            args.push(self.var()?);
                        }
                        self.expect(Tok::RParen, "`)` closing argument list")?;
                        match self.sig.arity(&name) {
                            None => Err(FormulaError::UnknownRelation(name)),
                            Some(a) if a != args.len() => Err(FormulaError::ArityMismatch {
                                relation: name,
                                expected: a,
                                found: args.len(),
                            }),
                            Some(_) => Ok(Formula::Atom { relation: name, args }),
                        }
                    }
                    Tok::Eq => {
                        self.bump();
                        let rhs = self.var()?;
                        Ok(Formula::Equal(name, rhs))
                    }
                    _ => self.error("expected `(` or `=` after identifier"),
                }
            }
            Tok::End => self.error("unexpected end of input"),
            _ => self.error("expected atom"),
        }
    }
}

/// Parses a formula and checks it against `signature`. Free variables are
/// allowed.
pub fn parse_formula(text: &str, signature: &Signature) -> Result<Formula, FormulaError> {
    if !text.is_ascii() {
        let column = text.char_indices().find(|(_, c)| !c.is_ascii()).unwrap().0 + 1;
        return Err(FormulaError::Syntax {
            column,
            message: "non-ASCII input".into(),
        });
    }
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        sig: signature,
    };
    let f = p.formula()?;
    if *p.peek() != Tok::End {
        return p.error("trailing input");
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig() -> Signature {
        Signature::new().with("lt", 2).with("p", 1)
    }

    #[test]
    fn quantifier_over_atom() {
        let f = parse_formula("exists y. lt(y,x)", &sig()).unwrap();
        assert_eq!(f, Formula::exists("y", Formula::atom("lt", ["y", "x"])));
    }

    #[test]
    fn arity_and_unknown_relation() {
        assert_eq!(
            parse_formula("lt(x)", &sig()),
            Err(FormulaError::ArityMismatch {
                relation: "lt".into(),
                expected: 2,
                found: 1
            })
        );
        assert_eq!(
            parse_formula("q(x)", &sig()),
            Err(FormulaError::UnknownRelation("q".into()))
        );
    }

    #[test]
    fn precedence() {
        let f = parse_formula("~p(x) & p(y) | p(z) -> p(x) -> p(y)", &sig()).unwrap();
        let px = || Formula::atom("p", ["x"]);
        let py = || Formula::atom("p", ["y"]);
        let pz = || Formula::atom("p", ["z"]);
        let expect = Formula::implies(
            Formula::or(Formula::and(Formula::not(px()), py()), pz()),
            Formula::implies(px(), py()),
        );
        assert_eq!(f, expect);
    }

    #[test]
    fn quantifier_extends_right() {
        let f = parse_formula("forall x. p(x) & p(y)", &sig()).unwrap();
        assert!(matches!(f, Formula::Forall(_, ref b) if matches!(**b, Formula::And(..))));
    }

    #[test]
    fn biconditional_is_derived() {
        let f = parse_formula("p(x) <-> p(y)", &sig()).unwrap();
        let px = Formula::atom("p", ["x"]);
        let py = Formula::atom("p", ["y"]);
        assert_eq!(
            f,
            Formula::and(Formula::implies(px.clone(), py.clone()), Formula::implies(py, px))
        );
    }

    #[test]
    fn syntax_errors() {
        for bad in ["", "p(x", "exists . p(x)", "p(x) &", "x", "p(x) q(y)", "p(x) ∧ p(y)", "x = "] {
            assert!(
                matches!(parse_formula(bad, &sig()), Err(FormulaError::Syntax { .. })),
                "{bad}"
            );
        }
    }

    #[test]
    fn printing_round_trips() {
        for text in [
            "exists y. lt(y,x)",
            "forall x. x = x",
            "(p(x) | p(y)) & p(z)",
            "p(x) | p(y) & p(z)",
            "p(x) | (p(y) | p(z))",
            "(p(x) -> p(y)) -> p(z)",
            "~(exists y. p(y)) & ~~p(x)",
            "(forall y. p(y)) | p(x)",
        ] {
            let f = parse_formula(text, &sig()).unwrap();
            let printed = f.to_string();
            assert_eq!(parse_formula(&printed, &sig()).unwrap(), f, "{text} -> {printed}");
        }
    }
}
