//! Expression language for command-line functions; see `GRAMMAR.md`.
//!
//! Products associate left to right: `a*b*c` is `(a*b)*c`. Octonion
//! products are not associative, so any other grouping needs parentheses.

use std::collections::BTreeSet;
use std::f64::consts::{E, PI};
use std::fmt;

use cdanalysis::plane::eval_in_plane;
use cdanalysis::transcend::{exp, ln, power};
use cdanalysis::{gen, special, CdError, CdNumber, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at column {}: {}", self.pos + 1, self.msg)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Func {
    Exp,
    Ln,
    Sqrt,
    Sin,
    Cos,
    Abs,
    Step,
    Conj,
    Re,
    Im,
    Inv,
    Gamma,
    Zeta,
}

impl Func {
    fn lookup(name: &str) -> Option<Self> {
        Some(match name {
            "exp" => Func::Exp,
            "ln" | "log" => Func::Ln,
            "sqrt" => Func::Sqrt,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "abs" => Func::Abs,
            "step" => Func::Step,
            "conj" => Func::Conj,
            "re" => Func::Re,
            "im" => Func::Im,
            "inv" => Func::Inv,
            "gamma" => Func::Gamma,
            "zeta" => Func::Zeta,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Node {
    Num(f64),
    Gen(usize),
    Var(String),
    Neg(Box<Node>),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Div(Box<Node>, Box<Node>),
    Pow(Box<Node>, Box<Node>),
    Call(Func, Box<Node>),
}

/// A parsed expression.
#[derive(Debug, Clone, PartialEq)]
pub struct Expr {
    root: Node,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
}

fn lex(src: &str) -> std::result::Result<Vec<(usize, Tok)>, ParseError> {
    let b = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let ch = b[i] as char;
        if ch.is_ascii_whitespace() {
            i += 1;
        } else if ch.is_ascii_digit() || ch == '.' {
            let start = i;
            while i < b.len() && (b[i].is_ascii_digit() || b[i] == b'.') {
                i += 1;
            }
            if i < b.len() && (b[i] == b'e' || b[i] == b'E') {
                let mut j = i + 1;
                if j < b.len() && (b[j] == b'+' || b[j] == b'-') {
                    j += 1;
                }
                if j < b.len() && b[j].is_ascii_digit() {
                    i = j;
                    while i < b.len() && b[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let text = &src[start..i];
            let v = text.parse::<f64>().map_err(|_| ParseError { pos: start, msg: format!("bad number '{text}'") })?;
            out.push((start, Tok::Num(v)));
        } else if ch.is_ascii_alphabetic() || ch == '_' {
            let start = i;
            while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(src[start..i].to_string())));
        } else if "+-*/^(),".contains(ch) {
            out.push((i, Tok::Op(ch)));
            i += 1;
        } else {
            return Err(ParseError { pos: i, msg: format!("unexpected character '{ch}'") });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn err<T>(&self, msg: impl Into<String>) -> std::result::Result<T, ParseError> {
        Err(ParseError { pos: self.pos(), msg: msg.into() })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> std::result::Result<Node, ParseError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Node::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Node::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> std::result::Result<Node, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Node::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = Node::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> std::result::Result<Node, ParseError> {
        if self.eat('-') {
            return Ok(Node::Neg(Box::new(self.unary()?)));
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> std::result::Result<Node, ParseError> {
        let base = self.atom()?;
        if self.eat('^') {
            return Ok(Node::Pow(Box::new(base), Box::new(self.unary()?)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> std::result::Result<Node, ParseError> {
        let Some(tok) = self.peek().cloned() else {
            return self.err("unexpected end of expression");
        };
        self.at += 1;
        match tok {
            Tok::Num(v) => Ok(Node::Num(v)),
            Tok::Op('(') => {
                let inner = self.expr()?;
                if !self.eat(')') {
                    return self.err("expected ')'");
                }
                Ok(inner)
            }
            Tok::Op(c) => {
                self.at -= 1;
                self.err(format!("unexpected '{c}'"))
            }
            Tok::Ident(name) => {
                if let Some(f) = Func::lookup(&name) {
                    if !self.eat('(') {
                        return self.err(format!("'{name}' needs an argument in parentheses"));
                    }
                    let arg = self.expr()?;
                    if !self.eat(')') {
                        return self.err("expected ')'");
                    }
                    return Ok(Node::Call(f, Box::new(arg)));
                }
                match name.as_str() {
                    "pi" => Ok(Node::Num(PI)),
                    "e" => Ok(Node::Num(E)),
                    _ => {
                        if let Some(j) = name.strip_prefix('i').and_then(|d| d.parse::<usize>().ok()) {
                            if (1..=7).contains(&j) && name.len() == 2 {
                                return Ok(Node::Gen(j));
                            }
                        }
                        Ok(Node::Var(name))
                    }
                }
            }
        }
    }
}

impl Expr {
    pub fn parse(src: &str) -> std::result::Result<Self, ParseError> {
        let toks = lex(src)?;
        let mut p = Parser { toks, at: 0, end: src.len() };
        let root = p.expr()?;
        if p.at != p.toks.len() {
            return p.err("trailing input");
        }
        Ok(Self { root })
    }

    /// Names of the free variables.
    pub fn vars(&self) -> BTreeSet<String> {
        fn walk(n: &Node, out: &mut BTreeSet<String>) {
            match n {
                Node::Var(v) => {
                    out.insert(v.clone());
                }
                Node::Num(_) | Node::Gen(_) => {}
                Node::Neg(a) | Node::Call(_, a) => walk(a, out),
                Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) | Node::Pow(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
            }
        }
        let mut out = BTreeSet::new();
        walk(&self.root, &mut out);
        out
    }

    /// Rejects variables outside `allowed`.
    pub fn check_vars(&self, allowed: &[&str]) -> std::result::Result<(), String> {
        let bad: Vec<String> = self.vars().into_iter().filter(|v| !allowed.contains(&v.as_str())).collect();
        if bad.is_empty() {
            Ok(())
        } else {
            Err(format!("unknown variable(s) {}; allowed: {}", bad.join(", "), allowed.join(", ")))
        }
    }

    pub fn eval(&self, env: &Env) -> Result<CdNumber> {
        eval(&self.root, env)
    }
}

/// Variable bindings and the logarithm branch.
#[derive(Debug, Clone, Default)]
pub struct Env {
    vars: Vec<(String, CdNumber)>,
    pub branch: i64,
}

impl Env {
    pub fn new(branch: i64) -> Self {
        Self { vars: Vec::new(), branch }
    }

    pub fn with(mut self, name: &str, v: CdNumber) -> Self {
        self.set(name, v);
        self
    }

    pub fn set(&mut self, name: &str, v: CdNumber) {
        match self.vars.iter_mut().find(|(n, _)| n == name) {
            Some(slot) => slot.1 = v,
            None => self.vars.push((name.to_string(), v)),
        }
    }

    fn get(&self, name: &str) -> Option<CdNumber> {
        self.vars.iter().find(|(n, _)| n == name).map(|(_, v)| *v)
    }
}

fn eval(n: &Node, env: &Env) -> Result<CdNumber> {
    Ok(match n {
        Node::Num(v) => CdNumber::real(*v),
        Node::Gen(j) => gen(*j),
        Node::Var(v) => env.get(v).ok_or_else(|| CdError::Invalid(format!("unbound variable '{v}'")))?,
        Node::Neg(a) => -eval(a, env)?,
        Node::Add(a, b) => eval(a, env)? + eval(b, env)?,
        Node::Sub(a, b) => eval(a, env)? - eval(b, env)?,
        Node::Mul(a, b) => eval(a, env)? * eval(b, env)?,
        Node::Div(a, b) => eval(a, env)?.div_right(&eval(b, env)?)?,
        Node::Pow(a, b) => power(&eval(a, env)?, &eval(b, env)?, env.branch)?,
        Node::Call(f, a) => {
            let x = eval(a, env)?;
            match f {
                Func::Exp => exp(&x),
                Func::Ln => ln(&x, env.branch)?,
                Func::Sqrt => power(&x, &CdNumber::real(0.5), env.branch)?,
                Func::Sin => eval_in_plane(&x, |c| c.sin()),
                Func::Cos => eval_in_plane(&x, |c| c.cos()),
                Func::Abs => CdNumber::real(x.norm()),
                Func::Step => CdNumber::real(if x.re() >= 0.0 { 1.0 } else { 0.0 }),
                Func::Conj => x.conj(),
                Func::Re => CdNumber::real(x.re()),
                Func::Im => x.im(),
                Func::Inv => x.inverse()?,
                Func::Gamma => special::gamma(&x)?,
                Func::Zeta => special::zeta(&x)?,
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn val(s: &str) -> CdNumber {
        Expr::parse(s).unwrap().eval(&Env::default()).unwrap()
    }

    #[test]
    fn constants_and_generators() {
        assert!(val("exp(pi*i1)").dist(&CdNumber::real(-1.0).lift(1)) < 1e-15);
        assert_eq!(val("i1*i2"), gen(3));
        assert_eq!(val("i5*i6"), -gen(3).lift(3));
        assert_eq!(val("2^3"), CdNumber::real(8.0));
        assert_eq!(val("-2^2"), CdNumber::real(-4.0));
        assert_eq!(val("2^-1"), CdNumber::real(0.5));
        assert_eq!(val("1.5e1 - 5"), CdNumber::real(10.0));
    }

    #[test]
    fn products_associate_left() {
        let l = val("i1*i2*i4");
        assert_eq!(l, val("(i1*i2)*i4"));
        assert_eq!(l, -val("i1*(i2*i4)"));
    }

    #[test]
    fn variables() {
        let e = Expr::parse("1/(z-y)").unwrap();
        assert_eq!(e.vars().into_iter().collect::<Vec<_>>(), vec!["y".to_string(), "z".to_string()]);
        assert!(e.check_vars(&["z"]).is_err());
        let env = Env::default().with("z", CdNumber::real(3.0)).with("y", CdNumber::real(1.0));
        assert_eq!(e.eval(&env).unwrap(), CdNumber::real(0.5));
        assert!(Expr::parse("step(t)").unwrap().eval(&Env::default()).is_err());
    }

    #[test]
    fn parse_errors() {
        for bad in ["", "1+", "(1", "exp 2", "2 $ 3", "1 2", "*3"] {
            assert!(Expr::parse(bad).is_err(), "{bad}");
        }
        assert_eq!(Expr::parse("(1").unwrap_err().pos, 2);
    }
}
