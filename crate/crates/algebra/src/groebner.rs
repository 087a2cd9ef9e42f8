//! Buchberger's algorithm with the Gebauer–Möller criteria, ideal
//! intersection, quotients and saturation.

use crate::field::Field;
use crate::hilbert::{hilbert_data, HilbertData};
use crate::mono::{Mono, MonoOrder};
use crate::poly::{Poly, Ring};

/// A reduced Gröbner basis: monic, inter-reduced, sorted by ascending lead.
#[derive(Clone, Debug)]
pub struct GroebnerBasis<F: Field> {
    pub ring: Ring<F>,
    pub gens: Vec<Poly<F::Elem>>,
}

#[derive(Clone, Copy, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Mono,
}

struct Builder<'a, F: Field> {
    ring: &'a Ring<F>,
    polys: Vec<Poly<F::Elem>>,
    active: Vec<usize>,
    pairs: Vec<Pair>,
}

impl<'a, F: Field> Builder<'a, F> {
    fn reducer(&self, m: Mono) -> Option<usize> {
        self.active
            .iter()
            .copied()
            .find(|&k| self.polys[k].lead_mono().divides(m))
    }

    fn reduce(&self, mut p: Poly<F::Elem>) -> Poly<F::Elem> {
        let f = &self.ring.field;
        let mut rem: Vec<(Mono, F::Elem)> = Vec::new();
        while let Some((m, c)) = p.terms.last().cloned() {
            match self.reducer(m) {
                Some(k) => {
                    let g = &self.polys[k];
                    let q = g.lead_mono().div_into(m);
                    let coeff = f.neg(&f.div(&c, g.lead_coeff()));
                    p = self.ring.merge(&p, g, &coeff, q);
                }
                None => {
                    p.terms.pop();
                    rem.push((m, c));
                }
            }
        }
        rem.reverse();
        Poly { terms: rem }
    }

    fn spoly(&self, pr: &Pair) -> Poly<F::Elem> {
        let f = &self.ring.field;
        let (a, b) = (&self.polys[pr.i], &self.polys[pr.j]);
        let ma = a.lead_mono().div_into(pr.lcm);
        let mb = b.lead_mono().div_into(pr.lcm);
        let ca = f.inv(a.lead_coeff());
        let cb = f.neg(&f.inv(b.lead_coeff()));
        let left = self.ring.mul_term(a, &ca, ma);
        self.ring.merge(&left, b, &cb, mb)
    }

    /// Gebauer–Möller update after adding `polys[h]`.
    fn update(&mut self, h: usize) {
        let lh = self.polys[h].lead_mono();
        let lead = |k: usize| self.polys[k].lead_mono();
        let cands: Vec<Pair> = self
            .active
            .iter()
            .map(|&g| Pair {
                i: g,
                j: h,
                lcm: lead(g).lcm(lh),
            })
            .collect();
        // chain criterion among the new pairs
        let mut kept: Vec<Pair> = Vec::new();
        for (idx, p) in cands.iter().enumerate() {
            if lead(p.i).is_coprime(lh) {
                kept.push(*p);
                continue;
            }
            let dominated = cands
                .iter()
                .enumerate()
                .any(|(o, q)| o != idx && q.lcm.divides(p.lcm) && (q.lcm != p.lcm || o < idx));
            if !dominated {
                kept.push(*p);
            }
        }
        // product criterion
        kept.retain(|p| !lead(p.i).is_coprime(lh));
        // old pairs made redundant by the new lead
        let polys = &self.polys;
        self.pairs.retain(|p| {
            !(lh.divides(p.lcm)
                && polys[p.i].lead_mono().lcm(lh) != p.lcm
                && polys[p.j].lead_mono().lcm(lh) != p.lcm)
        });
        self.pairs.extend(kept);
        self.active.retain(|&g| !lh.divides(polys[g].lead_mono()));
        self.active.push(h);
    }

    fn add(&mut self, p: Poly<F::Elem>) {
        let p = self.ring.monic(&p);
        self.polys.push(p);
        let h = self.polys.len() - 1;
        self.update(h);
    }

    fn select(&mut self) -> Option<Pair> {
        if self.pairs.is_empty() {
            return None;
        }
        let ring = self.ring;
        let mut best = 0;
        for k in 1..self.pairs.len() {
            let (a, b) = (&self.pairs[k], &self.pairs[best]);
            let ord = a
                .lcm
                .degree()
                .cmp(&b.lcm.degree())
                .then_with(|| ring.cmp(a.lcm, b.lcm))
                .then_with(|| (a.j, a.i).cmp(&(b.j, b.i)));
            if ord.is_lt() {
                best = k;
            }
        }
        Some(self.pairs.swap_remove(best))
    }
}

/// Reduced Gröbner basis of the ideal generated by `gens`.
pub fn buchberger<F: Field>(ring: &Ring<F>, gens: &[Poly<F::Elem>]) -> GroebnerBasis<F> {
    let mut b = Builder {
        ring,
        polys: Vec::new(),
        active: Vec::new(),
        pairs: Vec::new(),
    };
    let mut input: Vec<Poly<F::Elem>> = gens
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| ring.adopt(g))
        .collect();
    input.sort_by(|a, b| ring.cmp(a.lead_mono(), b.lead_mono()));
    for g in input {
        let r = b.reduce(g);
        if !r.is_zero() {
            b.add(r);
        }
    }
    while let Some(p) = b.select() {
        let s = b.spoly(&p);
        let r = b.reduce(s);
        if !r.is_zero() {
            b.add(r);
        }
    }
    let active: Vec<Poly<F::Elem>> = b.active.iter().map(|&k| b.polys[k].clone()).collect();
    GroebnerBasis::interreduce(ring, active)
}

impl<F: Field> GroebnerBasis<F> {
    fn interreduce(ring: &Ring<F>, mut gens: Vec<Poly<F::Elem>>) -> Self {
        gens.sort_by(|a, b| ring.cmp(a.lead_mono(), b.lead_mono()));
        // minimal basis: drop elements whose lead is divisible by another lead
        let leads: Vec<Mono> = gens.iter().map(|g| g.lead_mono()).collect();
        let mut minimal = Vec::new();
        for (idx, g) in gens.into_iter().enumerate() {
            let redundant = leads
                .iter()
                .enumerate()
                .any(|(o, l)| o != idx && l.divides(leads[idx]) && (l != &leads[idx] || o < idx));
            if !redundant {
                minimal.push(g);
            }
        }
        let mut out = Vec::with_capacity(minimal.len());
        for idx in 0..minimal.len() {
            let others: Vec<&Poly<F::Elem>> = minimal
                .iter()
                .enumerate()
                .filter(|(o, _)| *o != idx)
                .map(|(_, g)| g)
                .collect();
            let r = reduce_by(ring, minimal[idx].clone(), &others);
            out.push(ring.monic(&r));
        }
        GroebnerBasis {
            ring: ring.clone(),
            gens: out,
        }
    }

    /// Full normal form of `f` modulo the basis.
    pub fn reduce(&self, f: &Poly<F::Elem>) -> Poly<F::Elem> {
        let refs: Vec<&Poly<F::Elem>> = self.gens.iter().collect();
        reduce_by(&self.ring, self.ring.adopt(f), &refs)
    }

    pub fn contains(&self, f: &Poly<F::Elem>) -> bool {
        self.reduce(f).is_zero()
    }

    pub fn contains_ideal(&self, other: &GroebnerBasis<F>) -> bool {
        other.gens.iter().all(|g| self.contains(g))
    }

    pub fn same_ideal(&self, other: &GroebnerBasis<F>) -> bool {
        self.gens.len() == other.gens.len()
            && self.gens.iter().zip(&other.gens).all(|(a, b)| a == b)
    }

    pub fn is_unit(&self) -> bool {
        self.gens.len() == 1 && self.gens[0].lead_mono() == Mono::ONE
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.gens.iter().all(|g| g.is_homogeneous())
    }

    pub fn lead_monomials(&self) -> Vec<Mono> {
        self.gens.iter().map(|g| g.lead_mono()).collect()
    }

    pub fn hilbert(&self, window: u32) -> HilbertData {
        hilbert_data(&self.lead_monomials(), self.ring.nvars, window)
    }

    /// `I ∩ J` by elimination of an auxiliary variable `t` from
    /// `t·I + (1 − t)·J`.
    pub fn intersect(&self, other: &GroebnerBasis<F>) -> GroebnerBasis<F> {
        let n = self.ring.nvars;
        let big = Ring {
            field: self.ring.field.clone(),
            nvars: n + 1,
            order: MonoOrder::Elim { keep: n },
        };
        let t = big.var(n);
        let one_minus_t = big.sub(&big.one(), &t);
        let mut gens = Vec::new();
        for g in &self.gens {
            gens.push(big.mul(&big.adopt(g), &t));
        }
        for g in &other.gens {
            gens.push(big.mul(&big.adopt(g), &one_minus_t));
        }
        let gb = buchberger(&big, &gens);
        let kept: Vec<Poly<F::Elem>> = gb
            .gens
            .into_iter()
            .filter(|g| g.terms.iter().all(|(m, _)| m.exp(n) == 0))
            .map(|g| self.ring.adopt(&g))
            .collect();
        GroebnerBasis::interreduce(&self.ring, kept)
    }

    /// Generators of `I : f`.
    pub fn quotient(&self, f: &Poly<F::Elem>) -> GroebnerBasis<F> {
        assert!(!f.is_zero(), "quotient by zero");
        let principal = buchberger(&self.ring, std::slice::from_ref(f));
        let inter = self.intersect(&principal);
        let gens: Vec<Poly<F::Elem>> = inter
            .gens
            .iter()
            .map(|g| exact_div(&self.ring, g, f).expect("elements of (f) are multiples of f"))
            .collect();
        buchberger(&self.ring, &gens)
    }

    /// `I : x_i^∞` for homogeneous `I`, by putting `x_i` last in degrevlex
    /// and dividing every basis element by its largest power of `x_i`.
    pub fn saturate_var(&self, i: usize) -> GroebnerBasis<F> {
        let n = self.ring.nvars;
        let mut perm: Vec<usize> = (0..n).collect();
        perm.swap(i, n - 1);
        let rotated: Vec<Poly<F::Elem>> = self
            .gens
            .iter()
            .map(|g| self.ring.permute_vars(g, &perm))
            .collect();
        let gb = buchberger(&self.ring, &rotated);
        let last = n - 1;
        let stripped: Vec<Poly<F::Elem>> = gb
            .gens
            .iter()
            .map(|g| {
                let e = g.terms.iter().map(|(m, _)| m.exp(last)).min().unwrap_or(0);
                let shift = Mono(((e as u64) << (8 * last)) as u64);
                self.ring.from_terms(
                    g.terms
                        .iter()
                        .map(|(m, c)| (shift.div_into(*m), c.clone()))
                        .collect(),
                )
            })
            .map(|g| self.ring.permute_vars(&g, &perm))
            .collect();
        buchberger(&self.ring, &stripped)
    }

    /// `I : m^∞` for the irrelevant ideal `m = (x_0, …, x_{n-1})`, as the
    /// intersection of the single-variable saturations.
    pub fn saturate_irrelevant(&self) -> GroebnerBasis<F> {
        let mut acc: Option<GroebnerBasis<F>> = None;
        for i in 0..self.ring.nvars {
            let next = self.saturate_var(i);
            acc = Some(match acc {
                None => next,
                Some(a) if a.is_unit() => next,
                Some(a) if next.is_unit() => a,
                Some(a) => a.intersect(&next),
            });
        }
        acc.expect("at least one variable")
    }

    /// `I : ℓ^∞` for a linear form `ℓ = Σ a_i x_i` with `a_{n-1} ≠ 0`, via the
    /// coordinate change that turns `ℓ` into the last variable.
    ///
    /// For a generic `ℓ` this equals `I : m^∞`: a general linear form avoids
    /// every associated prime other than `m`.
    pub fn saturate_linear_form(&self, a: &[F::Elem]) -> GroebnerBasis<F> {
        let ring = &self.ring;
        let f = &ring.field;
        let n = ring.nvars;
        assert_eq!(a.len(), n);
        assert!(
            !f.is_zero(&a[n - 1]),
            "last coefficient of the linear form must be nonzero"
        );
        // forward: x_{n-1} ↦ (x_{n-1} − Σ_{i<n-1} a_i x_i) / a_{n-1}
        let inv = f.inv(&a[n - 1]);
        let mut fwd: Vec<Poly<F::Elem>> = (0..n).map(|i| ring.var(i)).collect();
        let mut img = ring.var(n - 1);
        for (i, ai) in a.iter().enumerate().take(n - 1) {
            img = ring.merge(&img, &ring.var(i), &f.neg(ai), Mono::ONE);
        }
        fwd[n - 1] = ring.scale(&img, &inv);
        // backward: x_{n-1} ↦ ℓ
        let mut back: Vec<Poly<F::Elem>> = (0..n).map(|i| ring.var(i)).collect();
        let mut ell = Poly::zero();
        for (i, ai) in a.iter().enumerate() {
            ell = ring.merge(&ell, &ring.var(i), ai, Mono::ONE);
        }
        back[n - 1] = ell;
        let moved: Vec<Poly<F::Elem>> =
            self.gens.iter().map(|g| ring.substitute(g, &fwd)).collect();
        let sat = buchberger(ring, &moved).saturate_var(n - 1);
        let gens: Vec<Poly<F::Elem>> = sat.gens.iter().map(|g| ring.substitute(g, &back)).collect();
        buchberger(ring, &gens)
    }

    /// `I : g^∞` for a homogeneous `g`. Variables and linear forms use the
    /// strip route; other polynomials iterate `I : g` until it stabilizes.
    pub fn saturate_poly(&self, g: &Poly<F::Elem>) -> GroebnerBasis<F> {
        assert!(!g.is_zero(), "saturation by zero");
        let ring = &self.ring;
        let n = ring.nvars;
        if g.terms.len() == 1 && g.terms[0].0.degree() == 0 {
            return self.clone();
        }
        if g.terms.len() == 1 && g.terms[0].0.degree() == 1 {
            let i = (0..n).find(|&i| g.terms[0].0.exp(i) == 1).unwrap();
            return self.saturate_var(i);
        }
        if g.terms.iter().all(|(m, _)| m.degree() == 1) {
            // move a variable with nonzero coefficient to the last slot
            let j = (0..n)
                .rev()
                .find(|&i| g.terms.iter().any(|(m, _)| m.exp(i) == 1))
                .unwrap();
            let mut perm: Vec<usize> = (0..n).collect();
            perm.swap(j, n - 1);
            let mut a = vec![ring.field.zero(); n];
            for (m, c) in &g.terms {
                let i = (0..n).find(|&i| m.exp(i) == 1).unwrap();
                a[perm[i]] = c.clone();
            }
            let moved: Vec<Poly<F::Elem>> = self
                .gens
                .iter()
                .map(|p| ring.permute_vars(p, &perm))
                .collect();
            let sat = buchberger(ring, &moved).saturate_linear_form(&a);
            let back: Vec<Poly<F::Elem>> = sat
                .gens
                .iter()
                .map(|p| ring.permute_vars(p, &perm))
                .collect();
            return buchberger(ring, &back);
        }
        let mut cur = self.clone();
        loop {
            if cur.is_unit() {
                return cur;
            }
            let next = cur.quotient(g);
            if next.same_ideal(&cur) {
                return cur;
            }
            cur = next;
        }
    }

    /// `I : J^∞` with `J = (g_1, …, g_s)`, as `∩_j (I : g_j^∞)`.
    pub fn saturate_ideal(&self, gens: &[Poly<F::Elem>]) -> GroebnerBasis<F> {
        let mut acc: Option<GroebnerBasis<F>> = None;
        for g in gens.iter().filter(|g| !g.is_zero()) {
            let next = self.saturate_poly(g);
            acc = Some(match acc {
                None => next,
                Some(a) if a.is_unit() => next,
                Some(a) if next.is_unit() => a,
                Some(a) => a.intersect(&next),
            });
        }
        acc.unwrap_or_else(|| self.clone())
    }

    /// `I : m` for the irrelevant ideal, as `∩_i (I : x_i)`.
    pub fn quotient_irrelevant(&self) -> GroebnerBasis<F> {
        let mut acc: Option<GroebnerBasis<F>> = None;
        for i in 0..self.ring.nvars {
            let q = self.quotient(&self.ring.var(i));
            acc = Some(match acc {
                None => q,
                Some(a) => a.intersect(&q),
            });
        }
        acc.expect("at least one variable")
    }

    /// Whether `I : m = I`, i.e. one more quotient round changes nothing.
    pub fn is_saturated(&self) -> bool {
        self.is_unit() || self.quotient_irrelevant().same_ideal(self)
    }

    /// One polynomial per line.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for g in &self.gens {
            s.push_str(&self.ring.to_text(g));
            s.push('\n');
        }
        s
    }
}

fn reduce_by<F: Field>(
    ring: &Ring<F>,
    mut p: Poly<F::Elem>,
    basis: &[&Poly<F::Elem>],
) -> Poly<F::Elem> {
    let f = &ring.field;
    let mut rem: Vec<(Mono, F::Elem)> = Vec::new();
    while let Some((m, c)) = p.terms.last().cloned() {
        match basis.iter().find(|g| g.lead_mono().divides(m)) {
            Some(g) => {
                let q = g.lead_mono().div_into(m);
                let coeff = f.neg(&f.div(&c, g.lead_coeff()));
                p = ring.merge(&p, g, &coeff, q);
            }
            None => {
                p.terms.pop();
                rem.push((m, c));
            }
        }
    }
    rem.reverse();
    Poly { terms: rem }
}

/// `a / b` when `b` divides `a` exactly.
pub fn exact_div<F: Field>(
    ring: &Ring<F>,
    a: &Poly<F::Elem>,
    b: &Poly<F::Elem>,
) -> Option<Poly<F::Elem>> {
    let f = &ring.field;
    let mut rest = ring.adopt(a);
    let b = ring.adopt(b);
    let mut q = Vec::new();
    while let Some((m, c)) = rest.terms.last().cloned() {
        if !b.lead_mono().divides(m) {
            return None;
        }
        let mm = b.lead_mono().div_into(m);
        let cc = f.div(&c, b.lead_coeff());
        rest = ring.merge(&rest, &b, &f.neg(&cc), mm);
        q.push((mm, cc));
    }
    Some(ring.from_terms(q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;

    fn ring(n: usize) -> Ring<PrimeField> {
        Ring::new(PrimeField::new(32003).unwrap(), n)
    }

    fn mono(r: &Ring<PrimeField>, e: &[u32]) -> Poly<u32> {
        r.monomial(Mono::from_exps(e), 1)
    }

    #[test]
    fn trivial_bases() {
        let r = ring(5);
        let g = buchberger(&r, &[r.var(0), r.var(1)]);
        assert_eq!(g.gens.len(), 2);
        let g = buchberger(&r, &[r.one()]);
        assert!(g.is_unit());
    }

    #[test]
    fn twisted_cubic() {
        // ideal of the twisted cubic: 2x2 minors of [[x0,x1,x2],[x1,x2,x3]]
        let r = ring(4);
        let m = |a: &[u32], b: &[u32]| r.sub(&mono(&r, a), &mono(&r, b));
        let gens = vec![
            m(&[1, 0, 1, 0], &[0, 2, 0, 0]),
            m(&[1, 0, 0, 1], &[0, 1, 1, 0]),
            m(&[0, 1, 0, 1], &[0, 0, 2, 0]),
        ];
        let g = buchberger(&r, &gens);
        assert_eq!(g.gens.len(), 3);
        let h = g.hilbert(10);
        assert_eq!(h.krull_dim, 2);
        assert_eq!(h.degree, 3);
        assert_eq!(h.hf[4], 13);
    }

    #[test]
    fn quotients() {
        let r = ring(3);
        let x0 = r.var(0);
        let x1 = r.var(1);
        let sq = buchberger(&r, &[r.mul(&x0, &x0)]);
        assert!(sq.quotient(&x0).same_ideal(&buchberger(&r, &[x0.clone()])));
        let xy = buchberger(&r, &[r.mul(&x0, &x1)]);
        assert!(xy.quotient(&x0).same_ideal(&buchberger(&r, &[x1.clone()])));
        let both = buchberger(&r, &[r.mul(&x0, &x0), r.mul(&x0, &x1)]);
        assert!(both.quotient(&x0).same_ideal(&buchberger(&r, &[x0, x1])));
    }

    #[test]
    fn saturation_examples() {
        let r = ring(5);
        let x0 = r.var(0);
        let gens: Vec<Poly<u32>> = (0..5).map(|i| r.mul(&x0, &r.var(i))).collect();
        let i = buchberger(&r, &gens);
        let sat = i.saturate_irrelevant();
        assert!(sat.same_ideal(&buchberger(&r, &[x0.clone()])));
        let lin = i.saturate_linear_form(&[3, 1, 4, 1, 5]);
        assert!(lin.same_ideal(&sat));
        let line = buchberger(&r, &[r.var(0), r.var(1)]);
        assert!(line.saturate_irrelevant().same_ideal(&line));
        assert!(line.is_saturated());
        assert!(!i.is_saturated());
    }

    #[test]
    fn saturation_by_forms_and_ideals() {
        let r = ring(4);
        let (x0, x1, x2, x3) = (r.var(0), r.var(1), r.var(2), r.var(3));
        let target = buchberger(&r, &[x2.clone(), x0.clone()]);
        // linear form without the last variable
        let l = r.sub(&x0, &x1);
        let i = buchberger(&r, &[r.mul(&l, &x2), r.mul(&r.mul(&l, &l), &x0)]);
        assert!(i.saturate_poly(&l).same_ideal(&target));
        // a quadric
        let q = r.add(&r.mul(&x0, &x0), &r.mul(&x1, &x3));
        let i = buchberger(&r, &[r.mul(&q, &x2), r.mul(&r.mul(&q, &q), &x0)]);
        assert!(i.saturate_poly(&q).same_ideal(&target));
        // saturating (x0 x2, x1 x2) by the ideal (x0, x1) leaves (x2)
        let i = buchberger(&r, &[r.mul(&x0, &x2), r.mul(&x1, &x2)]);
        let sat = i.saturate_ideal(&[x0.clone(), x1.clone()]);
        assert!(sat.same_ideal(&buchberger(&r, &[x2.clone()])));
        assert!(i.saturate_poly(&r.one()).same_ideal(&i));
    }

    #[test]
    fn irrelevant_power_saturates_to_unit() {
        let r = ring(3);
        let mut gens = Vec::new();
        for a in 0..=3u32 {
            for b in 0..=3 - a {
                gens.push(mono(&r, &[a, b, 3 - a - b]));
            }
        }
        let i = buchberger(&r, &gens);
        assert!(i.saturate_irrelevant().is_unit());
        assert!(i.saturate_linear_form(&[1, 2, 3]).is_unit());
    }

    #[test]
    fn intersection_of_coordinate_ideals() {
        let r = ring(3);
        let a = buchberger(&r, &[r.var(0)]);
        let b = buchberger(&r, &[r.var(1)]);
        let c = a.intersect(&b);
        assert!(c.same_ideal(&buchberger(&r, &[r.mul(&r.var(0), &r.var(1))])));
    }

    #[test]
    fn exact_division() {
        let r = ring(2);
        let p = r.add(&r.var(0), &r.var(1));
        let q = r.sub(&r.var(0), &r.var(1));
        let prod = r.mul(&p, &q);
        assert_eq!(exact_div(&r, &prod, &p).unwrap(), r.adopt(&q));
        assert!(exact_div(&r, &p, &q).is_none());
    }
}
