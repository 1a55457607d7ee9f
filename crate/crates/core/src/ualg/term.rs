//! Terms in prefix syntax, e.g. `mul(x, inv(x'))`.
//!
//! Variables are the tokens `x`, `x'`, `y`, `y'`, `z0`..`z9` and `v0`..`v99`.
//! Any other identifier must be a symbol of the signature; nullary symbols
//! may be written with or without `()`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

use super::Signature;

/// A term variable. The derived order is the canonical order used when
/// enumerating assignments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    X,
    XPrime,
    Y,
    YPrime,
    Z(u8),
    V(u8),
}

impl Var {
    pub fn parse(token: &str) -> Option<Var> {
        match token {
            "x" => Some(Var::X),
            "x'" => Some(Var::XPrime),
            "y" => Some(Var::Y),
            "y'" => Some(Var::YPrime),
            _ => {
                let (head, digits) = token.split_at(1);
                if digits.is_empty()
                    || !digits.bytes().all(|b| b.is_ascii_digit())
                    || (digits.len() > 1 && digits.starts_with('0'))
                {
                    return None;
                }
                let n: u8 = digits.parse().ok()?;
                match head {
                    "z" if n <= 9 => Some(Var::Z(n)),
                    "v" if n <= 99 => Some(Var::V(n)),
                    _ => None,
                }
            }
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::X => write!(f, "x"),
            Var::XPrime => write!(f, "x'"),
            Var::Y => write!(f, "y"),
            Var::YPrime => write!(f, "y'"),
            Var::Z(n) => write!(f, "z{n}"),
            Var::V(n) => write!(f, "v{n}"),
        }
    }
}

impl Serialize for Var {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(Var),
    App { op: String, args: Vec<Term> },
}

impl Term {
    pub fn var(v: Var) -> Term {
        Term::Var(v)
    }

    pub fn app(op: &str, args: Vec<Term>) -> Term {
        Term::App { op: op.to_string(), args }
    }

    pub fn variables(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Term::Var(v) => {
                out.insert(*v);
            }
            Term::App { args, .. } => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App { args, .. } => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App { args, .. } => 1 + args.iter().map(Term::node_count).sum::<usize>(),
        }
    }

    /// Replaces variables according to `subst`; unmapped variables stay.
    pub fn substitute(&self, subst: &BTreeMap<Var, Term>) -> Term {
        match self {
            Term::Var(v) => subst.get(v).cloned().unwrap_or(Term::Var(*v)),
            Term::App { op, args } => Term::App {
                op: op.clone(),
                args: args.iter().map(|a| a.substitute(subst)).collect(),
            },
        }
    }

    /// Checks every application against the signature.
    pub fn check_against(&self, sig: &Signature) -> Result<(), ParseErrorKind> {
        match self {
            Term::Var(_) => Ok(()),
            Term::App { op, args } => {
                let arity = sig
                    .arity_of(op)
                    .ok_or_else(|| ParseErrorKind::UnknownSymbol(op.clone()))?;
                if arity != args.len() {
                    return Err(ParseErrorKind::ArityMismatch {
                        symbol: op.clone(),
                        expected: arity,
                        found: args.len(),
                    });
                }
                args.iter().try_for_each(|a| a.check_against(sig))
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::App { op, args } => {
                write!(f, "{op}")?;
                if args.is_empty() {
                    return Ok(());
                }
                write!(f, "(")?;
                for (k, a) in args.iter().enumerate() {
                    if k > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl Serialize for Term {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("symbol `{symbol}` expects {expected} argument(s), found {found}")]
    ArityMismatch { symbol: String, expected: usize, found: usize },
    #[error("unexpected character `{0}`")]
    UnexpectedChar(char),
    #[error("expected {expected}, found {found}")]
    UnexpectedToken { expected: &'static str, found: String },
    #[error("unexpected end of input")]
    UnexpectedEnd,
}

/// A term syntax error with the byte offset where it was detected.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at position {position}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub position: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Ident(String),
    LParen,
    RParen,
    Comma,
    End,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Ident(s) => write!(f, "`{s}`"),
            Token::LParen => write!(f, "`(`"),
            Token::RParen => write!(f, "`)`"),
            Token::Comma => write!(f, "`,`"),
            Token::End => write!(f, "end of input"),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<(Token, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'(' => {
                out.push((Token::LParen, i));
                i += 1;
            }
            b')' => {
                out.push((Token::RParen, i));
                i += 1;
            }
            b',' => {
                out.push((Token::Comma, i));
                i += 1;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                if i < bytes.len() && bytes[i] == b'\'' {
                    i += 1;
                }
                out.push((Token::Ident(text[start..i].to_string()), start));
            }
            _ => {
                let ch = text[i..].chars().next().unwrap_or('?');
                return Err(ParseError { kind: ParseErrorKind::UnexpectedChar(ch), position: i });
            }
        }
    }
    out.push((Token::End, text.len()));
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<(Token, usize)>,
    pos: usize,
    sig: &'a Signature,
}

impl Parser<'_> {
    fn peek(&self) -> &(Token, usize) {
        &self.tokens[self.pos]
    }

    fn bump(&mut self) -> (Token, usize) {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Token, expected: &'static str) -> Result<(), ParseError> {
        let (tok, position) = self.bump();
        if tok == want {
            Ok(())
        } else if tok == Token::End {
            Err(ParseError { kind: ParseErrorKind::UnexpectedEnd, position })
        } else {
            Err(ParseError {
                kind: ParseErrorKind::UnexpectedToken { expected, found: tok.to_string() },
                position,
            })
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let (tok, position) = self.bump();
        let name = match tok {
            Token::Ident(name) => name,
            Token::End => return Err(ParseError { kind: ParseErrorKind::UnexpectedEnd, position }),
            other => {
                return Err(ParseError {
                    kind: ParseErrorKind::UnexpectedToken { expected: "a term", found: other.to_string() },
                    position,
                })
            }
        };
        let has_parens = self.peek().0 == Token::LParen;
        if !has_parens {
            if let Some(v) = Var::parse(&name) {
                return Ok(Term::Var(v));
            }
        }
        let arity = self.sig.arity_of(&name).ok_or(ParseError {
            kind: ParseErrorKind::UnknownSymbol(name.clone()),
            position,
        })?;
        let mut args = Vec::new();
        if has_parens {
            self.bump();
            if self.peek().0 != Token::RParen {
                loop {
                    args.push(self.term()?);
                    if self.peek().0 == Token::Comma {
                        self.bump();
                    } else {
                        break;
                    }
                }
            }
            self.expect(Token::RParen, "`,` or `)`")?;
        }
        if args.len() != arity {
            return Err(ParseError {
                kind: ParseErrorKind::ArityMismatch { symbol: name, expected: arity, found: args.len() },
                position,
            });
        }
        Ok(Term::App { op: name, args })
    }
}

pub fn parse_term(text: &str, sig: &Signature) -> Result<Term, ParseError> {
    let mut parser = Parser { tokens: tokenize(text)?, pos: 0, sig };
    let term = parser.term()?;
    parser.expect(Token::End, "end of input")?;
    Ok(term)
}

/// Parses an equation `lhs = rhs`.
pub fn parse_equation(text: &str, sig: &Signature) -> Result<(Term, Term), ParseError> {
    let Some(eq) = text.find('=') else {
        return Err(ParseError {
            kind: ParseErrorKind::UnexpectedToken { expected: "`=`", found: "end of input".into() },
            position: text.len(),
        });
    };
    let lhs = parse_term(&text[..eq], sig)?;
    let rhs = parse_term(&text[eq + 1..], sig).map_err(|mut e| {
        e.position += eq + 1;
        e
    })?;
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ualg::OpSymbol;

    fn group_sig() -> Signature {
        Signature::new(vec![OpSymbol::new("mul", 2), OpSymbol::new("inv", 1), OpSymbol::new("e", 0)]).unwrap()
    }

    #[test]
    fn parses_variable() {
        assert_eq!(parse_term("x", &group_sig()).unwrap(), Term::Var(Var::X));
        assert_eq!(parse_term(" x' ", &group_sig()).unwrap(), Term::Var(Var::XPrime));
        assert_eq!(parse_term("v42", &group_sig()).unwrap(), Term::Var(Var::V(42)));
    }

    #[test]
    fn parses_application() {
        let t = parse_term("mul(x,inv(y))", &group_sig()).unwrap();
        assert_eq!(
            t,
            Term::app("mul", vec![Term::Var(Var::X), Term::app("inv", vec![Term::Var(Var::Y)])])
        );
        assert_eq!(t.node_count() - t.variables().len(), 2);
        assert_eq!(parse_term("e", &group_sig()).unwrap(), parse_term("e()", &group_sig()).unwrap());
    }

    #[test]
    fn arity_mismatch_has_position() {
        let err = parse_term("inv(mul(x))", &group_sig()).unwrap_err();
        assert_eq!(err.position, 4);
        assert!(matches!(err.kind, ParseErrorKind::ArityMismatch { expected: 2, found: 1, .. }));
    }

    #[test]
    fn other_errors() {
        let sig = group_sig();
        let e = parse_term("foo(x)", &sig).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnknownSymbol("foo".into()));
        assert_eq!(parse_term("mul(x,", &sig).unwrap_err().kind, ParseErrorKind::UnexpectedEnd);
        assert_eq!(parse_term("mul(x y)", &sig).unwrap_err().position, 6);
        assert_eq!(parse_term("x + y", &sig).unwrap_err().kind, ParseErrorKind::UnexpectedChar('+'));
        assert!(parse_term("z10", &sig).is_err());
        assert!(parse_term("x y", &sig).is_err());
    }

    #[test]
    fn display_round_trips() {
        let sig = group_sig();
        for text in ["mul(x, inv(x'))", "e", "mul(mul(z0, z9), inv(e))", "v7"] {
            let t = parse_term(text, &sig).unwrap();
            assert_eq!(t.to_string(), text);
            assert_eq!(parse_term(&t.to_string(), &sig).unwrap(), t);
        }
    }

    #[test]
    fn equation() {
        let (l, r) = parse_equation("mul(x,y) = mul(y,x)", &group_sig()).unwrap();
        assert_eq!(l.to_string(), "mul(x, y)");
        assert_eq!(r.to_string(), "mul(y, x)");
        let e = parse_equation("x = mul(x)", &group_sig()).unwrap_err();
        assert_eq!(e.position, 4);
    }
}
