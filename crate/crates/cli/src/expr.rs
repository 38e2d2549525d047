//! Element expressions for `π_m(S^q)`.
//!
//! ```text
//! EXPR := TERM (('+' | '-') TERM)*
//! TERM := [INT '*'] ATOM | INT
//! ATOM := zero | iota | whitehead(q) | susp(EXPR, k) | NAME
//! ```
//!
//! `NAME` is a generator of the target group or a registered element such as
//! `hopfC`. A bare `INT` is a multiple of `iota`.

use std::fmt;

use nielsen_core::homotopy::{SphereElement, TableSet};
use nielsen_core::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExprError {
    /// 1-based character column.
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ExprError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "column {}: {}", self.column, self.message)
    }
}

impl std::error::Error for ExprError {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Atom {
    Zero,
    Iota,
    Whitehead(u32),
    Susp(Box<Expr>, u32),
    Name(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub coeff: i64,
    pub atom: Atom,
    pub column: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expr {
    pub terms: Vec<Term>,
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    src: &'a str,
}

impl<'a> Parser<'a> {
    fn err(&self, message: impl Into<String>) -> ExprError {
        ExprError { column: self.pos + 1, message: message.into() }
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expect(&mut self, c: char) -> Result<(), ExprError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected `{c}`")))
        }
    }

    fn int(&mut self) -> Result<i64, ExprError> {
        self.skip_ws();
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().map_err(|_| ExprError { column: start + 1, message: format!("invalid integer `{s}`") })
    }

    fn ident(&mut self) -> Result<String, ExprError> {
        self.skip_ws();
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|&c| c.is_alphanumeric() || c == '_' || c == '\'') {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a name or integer"));
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut terms = vec![];
        let mut sign = 1;
        if self.peek() == Some('-') {
            self.pos += 1;
            sign = -1;
        }
        loop {
            let mut t = self.term()?;
            t.coeff = t.coeff.checked_mul(sign).ok_or_else(|| self.err("coefficient overflow"))?;
            terms.push(t);
            match self.peek() {
                Some('+') => sign = 1,
                Some('-') => sign = -1,
                _ => return Ok(Expr { terms }),
            }
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<Term, ExprError> {
        let column = {
            self.skip_ws();
            self.pos + 1
        };
        if self.peek().is_some_and(|c| c.is_ascii_digit()) {
            let k = self.int()?;
            if self.peek() == Some('*') {
                self.pos += 1;
                let atom = self.atom()?;
                return Ok(Term { coeff: k, atom, column });
            }
            return Ok(Term { coeff: k, atom: Atom::Iota, column });
        }
        Ok(Term { coeff: 1, atom: self.atom()?, column })
    }

    fn atom(&mut self) -> Result<Atom, ExprError> {
        let name = self.ident()?;
        match name.as_str() {
            "zero" => Ok(Atom::Zero),
            "iota" => Ok(Atom::Iota),
            "whitehead" => {
                self.expect('(')?;
                let q = self.int()?;
                self.expect(')')?;
                u32::try_from(q).map(Atom::Whitehead).map_err(|_| self.err("q out of range"))
            }
            "susp" => {
                self.expect('(')?;
                let inner = self.expr()?;
                self.expect(',')?;
                let k = self.int()?;
                self.expect(')')?;
                let k = u32::try_from(k).map_err(|_| self.err("k out of range"))?;
                Ok(Atom::Susp(Box::new(inner), k))
            }
            _ => Ok(Atom::Name(name)),
        }
    }
}

pub fn parse(src: &str) -> Result<Expr, ExprError> {
    let mut p = Parser { chars: src.chars().collect(), pos: 0, src };
    let e = p.expr()?;
    if p.peek().is_some() {
        return Err(p.err(format!("unexpected input after expression in `{}`", p.src)));
    }
    Ok(e)
}

#[derive(Debug)]
pub enum EvalError {
    Syntax(ExprError),
    Semantic { column: usize, error: Error },
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalError::Syntax(e) => write!(f, "{e}"),
            EvalError::Semantic { column, error } => write!(f, "column {column}: {error}"),
        }
    }
}

impl std::error::Error for EvalError {}

impl EvalError {
    pub fn core(&self) -> Option<&Error> {
        match self {
            EvalError::Semantic { error, .. } => Some(error),
            EvalError::Syntax(_) => None,
        }
    }
}

fn eval_atom(t: &TableSet, atom: &Atom, m: u32, q: u32) -> Result<SphereElement, Error> {
    match atom {
        Atom::Zero => t.zero(m, q),
        Atom::Iota => {
            if m != q {
                return Err(Error::domain(format!("iota lives in π_q(S^q), not π_{m}(S^{q})")));
            }
            t.element(m, q, vec![1])
        }
        Atom::Whitehead(k) => located(t.named(&format!("whitehead({k})"))?, m, q),
        Atom::Susp(inner, k) => {
            if *k > m.min(q) {
                return Err(Error::domain(format!("cannot desuspend π_{m}(S^{q}) {k} times")));
            }
            let x = eval(t, inner, m - k, q - k)?;
            t.suspend_n(&x, *k)
        }
        Atom::Name(name) => match t.generator(m, q, name) {
            Ok(x) => Ok(x),
            Err(Error::UnknownName { available, .. }) => match t.named(name) {
                Ok(x) => located(x, m, q),
                Err(_) => Err(Error::UnknownName {
                    name: name.clone(),
                    available: [available, t.names().join(", ")].into_iter().filter(|s| !s.is_empty()).collect::<Vec<_>>().join(", "),
                }),
            },
            Err(e) => Err(e),
        },
    }
}

fn located(x: SphereElement, m: u32, q: u32) -> Result<SphereElement, Error> {
    if (x.m, x.q) != (m, q) {
        let k = m as i64 - x.m as i64;
        let hint = if k > 0 && q as i64 - x.q as i64 == k { format!("; try susp(..., {k})") } else { String::new() };
        return Err(Error::domain(format!("element lives in π_{}(S^{}), not π_{m}(S^{q}){hint}", x.m, x.q)));
    }
    Ok(x)
}

fn eval(t: &TableSet, e: &Expr, m: u32, q: u32) -> Result<SphereElement, Error> {
    let mut acc = t.zero(m, q)?;
    for term in &e.terms {
        acc = acc.add(&eval_atom(t, &term.atom, m, q)?.scale(term.coeff)?)?;
    }
    Ok(acc)
}

/// Parses `src` and evaluates it in `π_m(S^q)`.
pub fn element(t: &TableSet, src: &str, m: u32, q: u32) -> Result<SphereElement, EvalError> {
    let e = parse(src).map_err(EvalError::Syntax)?;
    let mut acc = t.zero(m, q).map_err(|error| EvalError::Semantic { column: 1, error })?;
    for term in &e.terms {
        let x = eval_atom(t, &term.atom, m, q)
            .and_then(|x| x.scale(term.coeff))
            .and_then(|x| acc.add(&x))
            .map_err(|error| EvalError::Semantic { column: term.column, error })?;
        acc = x;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nielsen_core::homotopy::default_tables;

    #[test]
    fn grammar() {
        let e = parse("2*eta_3 + zero - hopfC").unwrap();
        assert_eq!(e.terms.len(), 3);
        assert_eq!(e.terms[2].coeff, -1);
        let Atom::Susp(inner, 3) = &parse("susp(hopfC, 3)").unwrap().terms[0].atom else { panic!("susp") };
        assert_eq!(inner.terms[0].atom, Atom::Name("hopfC".into()));
        assert_eq!(inner.terms[0].column, 6);
        assert_eq!(parse("5").unwrap().terms[0].atom, Atom::Iota);
        let err = parse("2* + x").unwrap_err();
        assert_eq!(err.column, 4);
        assert!(parse("susp(hopfC 3)").is_err());
        assert!(parse("hopfC )").is_err());
    }

    #[test]
    fn evaluation() {
        let t = default_tables();
        assert_eq!(element(&t, "hopfC", 3, 2).unwrap(), t.named("hopfC").unwrap());
        assert!(element(&t, "-hopfC + hopfC", 3, 2).unwrap().is_zero());
        let s = element(&t, "susp(hopfC, 3)", 6, 5).unwrap();
        assert_eq!(s, t.generator(6, 5, "eta_5").unwrap());
        assert_eq!(element(&t, "3", 1, 1).unwrap(), t.element(1, 1, vec![3]).unwrap());
        assert_eq!(element(&t, "whitehead(5)", 9, 5).unwrap(), t.named("whitehead(5)").unwrap());
        assert!(element(&t, "nu'", 6, 3).is_ok());
        let err = element(&t, "zero + hopfC", 4, 3).unwrap_err();
        assert!(matches!(err, EvalError::Semantic { column: 8, .. }), "{err}");
        assert!(err.to_string().contains("susp(..., 1)"));
        assert!(element(&t, "bogus", 3, 2).is_err());
    }
}
