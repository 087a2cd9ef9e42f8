//! A small expression language for polynomial normal forms.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := unary ('^' INT)?
//! unary  := '-' unary | atom
//! atom   := INT | x0..x4 | PARAM | '(' expr ')'
//!         | form(NAME, d; vars) | biform(NAME, a, b; vars; vars)
//! ```
//!
//! `form` stands for a general form of degree `d` in the listed variables and
//! `biform` for a general bihomogeneous form of bidegree `(a, b)`; both get
//! independent random nonzero coefficients at evaluation time.

use std::collections::{BTreeMap, BTreeSet};

use atlas_algebra::{Mono, Poly, Ring};
use rand::Rng;

use crate::forms::{SampleField, DEFAULT_BOUND};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Num(i64),
    Var(usize),
    Param(String),
    Form {
        name: String,
        degree: u32,
        vars: Vec<usize>,
    },
    Biform {
        name: String,
        degrees: (u32, u32),
        vars: (Vec<usize>, Vec<usize>),
    },
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32),
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ExprError {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unbound parameter {0}")]
    Unbound(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(i64),
    Ident(String),
    Sym(char),
}

fn lex(s: &str) -> Result<Vec<(usize, Tok)>, ExprError> {
    let b = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < b.len() && (b[i] as char).is_ascii_digit() {
                i += 1;
            }
            let v = s[st..i].parse().map_err(|_| ExprError::Parse {
                pos: st,
                msg: "integer overflow".into(),
            })?;
            out.push((st, Tok::Int(v)));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let st = i;
            while i < b.len() && ((b[i] as char).is_ascii_alphanumeric() || b[i] == b'_') {
                i += 1;
            }
            out.push((st, Tok::Ident(s[st..i].to_string())));
        } else if "+-*^(),;".contains(c) {
            out.push((i, Tok::Sym(c)));
            i += 1;
        } else {
            return Err(ExprError::Parse {
                pos: i,
                msg: format!("unexpected character {c:?}"),
            });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    len: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.len, |(p, _)| *p)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ExprError> {
        Err(ExprError::Parse {
            pos: self.here(),
            msg: msg.into(),
        })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ExprError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected {c:?}"))
        }
    }

    fn int(&mut self) -> Result<i64, ExprError> {
        match self.peek() {
            Some(Tok::Int(v)) => {
                let v = *v;
                self.pos += 1;
                Ok(v)
            }
            _ => self.err("expected integer"),
        }
    }

    fn ident(&mut self) -> Result<String, ExprError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.err("expected identifier"),
        }
    }

    fn var_list(&mut self) -> Result<Vec<usize>, ExprError> {
        let mut vars = Vec::new();
        loop {
            let name = self.ident()?;
            match var_index(&name) {
                Some(i) => vars.push(i),
                None => return self.err(format!("{name} is not a variable")),
            }
            if !self.eat(',') {
                return Ok(vars);
            }
        }
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.factor()?;
        while self.eat('*') {
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr, ExprError> {
        let base = self.unary()?;
        if self.eat('^') {
            let e = self.int()?;
            if !(0..=64).contains(&e) {
                return self.err("exponent out of range");
            }
            return Ok(Expr::Pow(Box::new(base), e as u32));
        }
        Ok(base)
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        match self.peek().cloned() {
            Some(Tok::Int(v)) => {
                self.pos += 1;
                Ok(Expr::Num(v))
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if name == "form" && self.eat('(') {
                    let n = self.ident()?;
                    self.expect(',')?;
                    let d = self.int()? as u32;
                    self.expect(';')?;
                    let vars = self.var_list()?;
                    self.expect(')')?;
                    return Ok(Expr::Form {
                        name: n,
                        degree: d,
                        vars,
                    });
                }
                if name == "biform" && self.eat('(') {
                    let n = self.ident()?;
                    self.expect(',')?;
                    let a = self.int()? as u32;
                    self.expect(',')?;
                    let b = self.int()? as u32;
                    self.expect(';')?;
                    let v1 = self.var_list()?;
                    self.expect(';')?;
                    let v2 = self.var_list()?;
                    self.expect(')')?;
                    return Ok(Expr::Biform {
                        name: n,
                        degrees: (a, b),
                        vars: (v1, v2),
                    });
                }
                Ok(match var_index(&name) {
                    Some(i) => Expr::Var(i),
                    None => Expr::Param(name),
                })
            }
            _ => self.err("expected an operand"),
        }
    }
}

fn var_index(name: &str) -> Option<usize> {
    let rest = name.strip_prefix('x')?;
    let i: usize = rest.parse().ok()?;
    (i < 5 && rest.len() == 1).then_some(i)
}

pub fn parse(s: &str) -> Result<Expr, ExprError> {
    let toks = lex(s)?;
    let mut p = Parser {
        toks,
        pos: 0,
        len: s.len(),
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(e)
}

/// Exponent vectors of total degree `d` supported on `vars`, in a fixed order.
fn monomials_in(vars: &[usize], d: u32) -> Vec<Mono> {
    fn rec(vars: &[usize], d: u32, acc: &mut [u32; 8], out: &mut Vec<Mono>) {
        if vars.len() == 1 {
            acc[vars[0]] += d;
            out.push(Mono::from_exps(&acc[..]));
            acc[vars[0]] -= d;
            return;
        }
        for e in (0..=d).rev() {
            acc[vars[0]] += e;
            rec(&vars[1..], d - e, acc, out);
            acc[vars[0]] -= e;
        }
    }
    let mut out = Vec::new();
    if vars.is_empty() {
        if d == 0 {
            out.push(Mono::ONE);
        }
        return out;
    }
    rec(vars, d, &mut [0; 8], &mut out);
    out
}

impl Expr {
    pub fn params(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.walk(&mut |e| {
            if let Expr::Param(p) = e {
                out.insert(p.clone());
            }
        });
        out
    }

    pub fn generic_forms(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.walk(&mut |e| match e {
            Expr::Form { name, .. } | Expr::Biform { name, .. } => out.push(name.clone()),
            _ => {}
        });
        out
    }

    fn walk(&self, f: &mut impl FnMut(&Expr)) {
        f(self);
        match self {
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
                a.walk(f);
                b.walk(f);
            }
            Expr::Neg(a) | Expr::Pow(a, _) => a.walk(f),
            _ => {}
        }
    }

    /// Evaluates to a polynomial. Generic forms are drawn from `rng` the
    /// first time their name is seen and reused from `env` afterwards.
    pub fn eval<F: SampleField, R: Rng + ?Sized>(
        &self,
        ring: &Ring<F>,
        env: &mut Env<F::Elem>,
        rng: &mut R,
    ) -> Result<Poly<F::Elem>, ExprError> {
        let f = &ring.field;
        Ok(match self {
            Expr::Num(v) => ring.constant(f.from_i64(*v)),
            Expr::Var(i) => ring.var(*i),
            Expr::Param(p) => ring.constant(
                env.params
                    .get(p)
                    .cloned()
                    .ok_or_else(|| ExprError::Unbound(p.clone()))?,
            ),
            Expr::Form { name, degree, vars } => {
                if let Some(p) = env.forms.get(name) {
                    return Ok(p.clone());
                }
                let p = ring.from_terms(
                    monomials_in(vars, *degree)
                        .into_iter()
                        .map(|m| (m, f.sample_nonzero(rng, DEFAULT_BOUND)))
                        .collect(),
                );
                env.forms.insert(name.clone(), p.clone());
                p
            }
            Expr::Biform {
                name,
                degrees,
                vars,
            } => {
                if let Some(p) = env.forms.get(name) {
                    return Ok(p.clone());
                }
                let mut terms = Vec::new();
                for a in monomials_in(&vars.0, degrees.0) {
                    for b in monomials_in(&vars.1, degrees.1) {
                        terms.push((a.mul(b), f.sample_nonzero(rng, DEFAULT_BOUND)));
                    }
                }
                let p = ring.from_terms(terms);
                env.forms.insert(name.clone(), p.clone());
                p
            }
            Expr::Add(a, b) => {
                let x = a.eval(ring, env, rng)?;
                ring.add(&x, &b.eval(ring, env, rng)?)
            }
            Expr::Sub(a, b) => {
                let x = a.eval(ring, env, rng)?;
                ring.sub(&x, &b.eval(ring, env, rng)?)
            }
            Expr::Mul(a, b) => {
                let x = a.eval(ring, env, rng)?;
                ring.mul(&x, &b.eval(ring, env, rng)?)
            }
            Expr::Neg(a) => ring.neg(&a.eval(ring, env, rng)?),
            Expr::Pow(a, e) => ring.pow(&a.eval(ring, env, rng)?, *e),
        })
    }

    /// Evaluates an expression without generic forms.
    pub fn eval_closed<F: SampleField>(
        &self,
        ring: &Ring<F>,
        params: &BTreeMap<String, F::Elem>,
    ) -> Result<Poly<F::Elem>, ExprError> {
        let mut env = Env {
            params: params.clone(),
            forms: BTreeMap::new(),
        };
        let mut rng = rand::rngs::mock::StepRng::new(1, 1);
        self.eval(ring, &mut env, &mut rng)
    }
}

/// Parameter values and already drawn generic forms.
#[derive(Clone, Debug, Default)]
pub struct Env<E> {
    pub params: BTreeMap<String, E>,
    pub forms: BTreeMap<String, Poly<E>>,
}

impl<E> Env<E> {
    pub fn with_params(params: BTreeMap<String, E>) -> Self {
        Env {
            params,
            forms: BTreeMap::new(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use atlas_algebra::{Field, PrimeField};
    use rand::SeedableRng;

    fn setup() -> (Ring<PrimeField>, rand_chacha::ChaCha8Rng) {
        (
            Ring::new(PrimeField::new(32003).unwrap(), 5),
            rand_chacha::ChaCha8Rng::seed_from_u64(0),
        )
    }

    #[test]
    fn arithmetic_and_precedence() {
        let (ring, mut rng) = setup();
        let e = parse("x0*x1^2 - 3*(x0 + x1)^2 + -x2").unwrap();
        let p = e.eval(&ring, &mut Env::default(), &mut rng).unwrap();
        let pt = [2u32, 5, 7, 0, 0];
        // 2*25 - 3*49 - 7 = -104
        assert_eq!(ring.eval(&p, &pt), ring.field.from_i64(-104));
    }

    #[test]
    fn parameters_and_exclusions() {
        let (ring, _) = setup();
        let e = parse("256*alpha - 1").unwrap();
        assert_eq!(
            e.params().into_iter().collect::<Vec<_>>(),
            vec!["alpha".to_string()]
        );
        let mut ps = BTreeMap::new();
        assert!(matches!(
            e.eval_closed(&ring, &ps),
            Err(ExprError::Unbound(_))
        ));
        ps.insert("alpha".to_string(), ring.field.inv(&256));
        assert!(e.eval_closed(&ring, &ps).unwrap().is_zero());
    }

    #[test]
    fn generic_forms_have_full_support() {
        let (ring, mut rng) = setup();
        let e = parse("form(B,4;x0,x1,x2,x3)").unwrap();
        let mut env = Env::default();
        let p = e.eval(&ring, &mut env, &mut rng).unwrap();
        assert_eq!(p.len(), 35);
        // a second occurrence of the same name reuses the drawn form
        assert_eq!(e.eval(&ring, &mut env, &mut rng).unwrap(), p);
        let b = parse("biform(Q,2,2;x1,x2;x3,x4)").unwrap();
        assert_eq!(b.eval(&ring, &mut env, &mut rng).unwrap().len(), 9);
        assert_eq!(b.generic_forms(), vec!["Q".to_string()]);
    }

    #[test]
    fn parse_errors() {
        assert!(parse("x0 +").is_err());
        assert!(parse("x0 $ x1").is_err());
        assert!(parse("form(B,2;y)").is_err());
        assert!(parse("(x0").is_err());
    }
}
