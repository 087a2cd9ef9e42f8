//! Sparse multivariate polynomials over a [`Field`].
//!
//! Terms are kept sorted in ascending monomial order, so the leading term is
//! the last one and can be popped cheaply during reduction.

use std::cmp::Ordering;
use std::fmt::Write as _;

use crate::field::Field;
use crate::mono::{Mono, MonoOrder, MAX_VARS};

#[derive(Clone, Debug)]
pub struct Ring<F: Field> {
    pub field: F,
    pub nvars: usize,
    pub order: MonoOrder,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Poly<E> {
    pub terms: Vec<(Mono, E)>,
}

impl<E> Poly<E> {
    pub fn zero() -> Self {
        Poly { terms: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead(&self) -> Option<&(Mono, E)> {
        self.terms.last()
    }

    pub fn lead_mono(&self) -> Mono {
        self.terms.last().expect("zero polynomial has no lead").0
    }

    pub fn lead_coeff(&self) -> &E {
        &self.terms.last().expect("zero polynomial has no lead").1
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        match self.terms.first() {
            None => true,
            Some((m, _)) => self.terms.iter().all(|(n, _)| n.degree() == m.degree()),
        }
    }
}

impl<F: Field> Ring<F> {
    pub fn new(field: F, nvars: usize) -> Self {
        assert!(nvars <= MAX_VARS);
        Ring {
            field,
            nvars,
            order: MonoOrder::DegRevLex,
        }
    }

    pub fn with_order(&self, order: MonoOrder) -> Self {
        Ring {
            field: self.field.clone(),
            nvars: self.nvars,
            order,
        }
    }

    #[inline]
    pub fn cmp(&self, a: Mono, b: Mono) -> Ordering {
        self.order.cmp(a, b)
    }

    /// Builds a polynomial from arbitrary terms: sorts, merges, drops zeros.
    pub fn from_terms(&self, mut terms: Vec<(Mono, F::Elem)>) -> Poly<F::Elem> {
        terms.sort_by(|a, b| self.cmp(a.0, b.0));
        let mut out: Vec<(Mono, F::Elem)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc = self.field.add(lc, &c),
                _ => out.push((m, c)),
            }
            if self.field.is_zero(&out.last().unwrap().1) {
                out.pop();
            }
        }
        Poly { terms: out }
    }

    /// Re-sorts a polynomial for this ring's order.
    pub fn adopt(&self, p: &Poly<F::Elem>) -> Poly<F::Elem> {
        let mut terms = p.terms.clone();
        terms.sort_by(|a, b| self.cmp(a.0, b.0));
        Poly { terms }
    }

    pub fn constant(&self, c: F::Elem) -> Poly<F::Elem> {
        if self.field.is_zero(&c) {
            Poly::zero()
        } else {
            Poly {
                terms: vec![(Mono::ONE, c)],
            }
        }
    }

    pub fn one(&self) -> Poly<F::Elem> {
        self.constant(self.field.one())
    }

    pub fn var(&self, i: usize) -> Poly<F::Elem> {
        assert!(i < self.nvars);
        Poly {
            terms: vec![(Mono::var(i), self.field.one())],
        }
    }

    pub fn monomial(&self, m: Mono, c: F::Elem) -> Poly<F::Elem> {
        if self.field.is_zero(&c) {
            Poly::zero()
        } else {
            Poly {
                terms: vec![(m, c)],
            }
        }
    }

    pub fn add(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
        self.merge(a, b, &self.field.one(), Mono::ONE)
    }

    pub fn sub(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
        self.merge(a, b, &self.field.neg(&self.field.one()), Mono::ONE)
    }

    pub fn neg(&self, a: &Poly<F::Elem>) -> Poly<F::Elem> {
        Poly {
            terms: a
                .terms
                .iter()
                .map(|(m, c)| (*m, self.field.neg(c)))
                .collect(),
        }
    }

    /// `a + c·m·b`.
    pub fn merge(
        &self,
        a: &Poly<F::Elem>,
        b: &Poly<F::Elem>,
        c: &F::Elem,
        m: Mono,
    ) -> Poly<F::Elem> {
        let f = &self.field;
        if f.is_zero(c) {
            return a.clone();
        }
        let mut out = Vec::with_capacity(a.terms.len() + b.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < a.terms.len() || j < b.terms.len() {
            if j == b.terms.len() {
                out.extend_from_slice(&a.terms[i..]);
                break;
            }
            let bm = b.terms[j].0.mul(m);
            if i == a.terms.len() {
                out.push((bm, f.mul(c, &b.terms[j].1)));
                j += 1;
                continue;
            }
            match self.cmp(a.terms[i].0, bm) {
                Ordering::Less => {
                    out.push(a.terms[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push((bm, f.mul(c, &b.terms[j].1)));
                    j += 1;
                }
                Ordering::Equal => {
                    let v = f.add(&a.terms[i].1, &f.mul(c, &b.terms[j].1));
                    if !f.is_zero(&v) {
                        out.push((bm, v));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Poly { terms: out }
    }

    pub fn scale(&self, a: &Poly<F::Elem>, c: &F::Elem) -> Poly<F::Elem> {
        if self.field.is_zero(c) {
            return Poly::zero();
        }
        Poly {
            terms: a
                .terms
                .iter()
                .map(|(m, x)| (*m, self.field.mul(x, c)))
                .collect(),
        }
    }

    /// `c·m·a`; multiplication by a monomial preserves the term order.
    pub fn mul_term(&self, a: &Poly<F::Elem>, c: &F::Elem, m: Mono) -> Poly<F::Elem> {
        if self.field.is_zero(c) {
            return Poly::zero();
        }
        Poly {
            terms: a
                .terms
                .iter()
                .map(|(t, x)| (t.mul(m), self.field.mul(x, c)))
                .collect(),
        }
    }

    pub fn mul(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
        let mut acc = Poly::zero();
        for (m, c) in &b.terms {
            acc = self.merge(&acc, a, c, *m);
        }
        acc
    }

    pub fn pow(&self, a: &Poly<F::Elem>, e: u32) -> Poly<F::Elem> {
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.mul(&acc, a);
        }
        acc
    }

    pub fn monic(&self, a: &Poly<F::Elem>) -> Poly<F::Elem> {
        match a.lead() {
            None => Poly::zero(),
            Some((_, c)) => {
                let inv = self.field.inv(c);
                self.scale(a, &inv)
            }
        }
    }

    /// Partial derivative with respect to variable `i`.
    pub fn derivative(&self, a: &Poly<F::Elem>, i: usize) -> Poly<F::Elem> {
        let terms = a
            .terms
            .iter()
            .filter(|(m, _)| m.exp(i) > 0)
            .map(|(m, c)| {
                let e = m.exp(i);
                let nm = Mono(m.0 - (1u64 << (8 * i)));
                (nm, self.field.mul(c, &self.field.from_i64(e as i64)))
            })
            .collect();
        self.from_terms(terms)
    }

    pub fn eval(&self, a: &Poly<F::Elem>, pt: &[F::Elem]) -> F::Elem {
        let f = &self.field;
        let mut acc = f.zero();
        for (m, c) in &a.terms {
            let mut t = c.clone();
            for (i, x) in pt.iter().enumerate().take(self.nvars) {
                let e = m.exp(i);
                if e > 0 {
                    t = f.mul(&t, &f.pow(x, e));
                }
            }
            acc = f.add(&acc, &t);
        }
        acc
    }

    /// Substitutes `x_i ↦ images[i]` for every variable.
    pub fn substitute(&self, a: &Poly<F::Elem>, images: &[Poly<F::Elem>]) -> Poly<F::Elem> {
        assert_eq!(images.len(), self.nvars);
        let mut cache: Vec<Vec<Poly<F::Elem>>> =
            images.iter().map(|p| vec![self.one(), p.clone()]).collect();
        let mut acc = Poly::zero();
        for (m, c) in &a.terms {
            let mut t = self.constant(c.clone());
            for (i, powers) in cache.iter_mut().enumerate() {
                let e = m.exp(i) as usize;
                while powers.len() <= e {
                    let next = self.mul(powers.last().unwrap(), &images[i]);
                    powers.push(next);
                }
                if e > 0 {
                    t = self.mul(&t, &powers[e]);
                }
            }
            acc = self.add(&acc, &t);
        }
        acc
    }

    /// Renames variables: `x_i ↦ x_{perm[i]}`.
    pub fn permute_vars(&self, a: &Poly<F::Elem>, perm: &[usize]) -> Poly<F::Elem> {
        self.from_terms(
            a.terms
                .iter()
                .map(|(m, c)| (m.permute(perm), c.clone()))
                .collect(),
        )
    }

    /// One line, monomials as `c*x0^a0*…`, highest term first.
    pub fn to_text(&self, a: &Poly<F::Elem>) -> String {
        if a.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (idx, (m, c)) in a.terms.iter().rev().enumerate() {
            if idx > 0 {
                s.push_str(" + ");
            }
            let _ = write!(s, "{c:?}");
            if *m != Mono::ONE {
                let _ = write!(s, "*{}", m.fmt_vars(self.nvars));
            }
        }
        s
    }
}

impl<E> From<Vec<(Mono, E)>> for Poly<E> {
    fn from(terms: Vec<(Mono, E)>) -> Self {
        Poly { terms }
    }
}
