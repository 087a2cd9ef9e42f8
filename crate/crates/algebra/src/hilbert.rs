//! Hilbert series of monomial ideals and the derived Hilbert data of `S/I`.

use crate::mono::Mono;

/// Hilbert function values, Krull dimension and degree of `S/I`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HilbertData {
    /// `dim (S/I)_q` for `q = 0..=window`.
    pub hf: Vec<u64>,
    /// Krull dimension of `S/I`; the projective scheme has dimension one less.
    pub krull_dim: usize,
    /// Degree of the projective scheme, 0 when it is empty.
    pub degree: u64,
    /// Numerator `N(t)` of the series `N(t)/(1-t)^n`.
    pub numerator: Vec<i64>,
}

impl HilbertData {
    pub fn projective_dim(&self) -> i64 {
        self.krull_dim as i64 - 1
    }
}

fn minimalize(mut gens: Vec<Mono>) -> Vec<Mono> {
    gens.sort_by_key(|m| (m.degree(), m.0));
    gens.dedup();
    let mut out: Vec<Mono> = Vec::with_capacity(gens.len());
    for g in gens {
        if !out.iter().any(|o| o.divides(g)) {
            out.push(g);
        }
    }
    out
}

fn poly_add(a: &mut Vec<i64>, b: &[i64], shift: usize) {
    if a.len() < b.len() + shift {
        a.resize(b.len() + shift, 0);
    }
    for (i, &c) in b.iter().enumerate() {
        a[i + shift] += c;
    }
}

fn poly_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0i64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Numerator of the Hilbert series of `S/(gens)`, by pivoting on a variable.
pub fn hilbert_numerator(gens: &[Mono], nvars: usize) -> Vec<i64> {
    let gens = minimalize(gens.to_vec());
    numerator_rec(gens, nvars)
}

fn numerator_rec(gens: Vec<Mono>, nvars: usize) -> Vec<i64> {
    if gens.is_empty() {
        return vec![1];
    }
    if gens.iter().any(|g| *g == Mono::ONE) {
        return vec![0];
    }
    // pairwise coprime generators: product of (1 - t^deg)
    let coprime = gens
        .iter()
        .enumerate()
        .all(|(i, a)| gens[i + 1..].iter().all(|b| a.is_coprime(*b)));
    if coprime {
        let mut acc = vec![1i64];
        for g in &gens {
            let mut f = vec![0i64; g.degree() as usize + 1];
            f[0] = 1;
            f[g.degree() as usize] -= 1;
            acc = poly_mul(&acc, &f);
        }
        return acc;
    }
    // pivot on the variable occurring in the most non-pure-power generators
    let mut counts = vec![0usize; nvars];
    for g in &gens {
        let support: Vec<usize> = (0..nvars).filter(|&i| g.exp(i) > 0).collect();
        if support.len() > 1 {
            for i in support {
                counts[i] += 1;
            }
        }
    }
    let var = (0..nvars)
        .max_by_key(|&i| (counts[i], std::cmp::Reverse(i)))
        .unwrap();
    let mut exps: Vec<u32> = gens.iter().map(|g| g.exp(var)).filter(|&e| e > 0).collect();
    exps.sort_unstable();
    let e = exps[(exps.len() - 1) / 2];
    let pivot = Mono(((e as u64) << (8 * var)) as u64);
    // N(M) = N(M + (p)) + t^deg(p) N(M : p)
    let mut with_pivot = gens.clone();
    with_pivot.push(pivot);
    let colon: Vec<Mono> = gens
        .iter()
        .map(|g| {
            let d = g.exp(var).saturating_sub(e);
            Mono(g.strip_var(var).0 | ((d as u64) << (8 * var)))
        })
        .collect();
    let mut out = numerator_rec(minimalize(with_pivot), nvars);
    let rest = numerator_rec(minimalize(colon), nvars);
    poly_add(&mut out, &rest, e as usize);
    while out.len() > 1 && *out.last().unwrap() == 0 {
        out.pop();
    }
    out
}

fn binom(n: i64, k: i64) -> i64 {
    if k < 0 || n < k {
        return 0;
    }
    let mut r: i128 = 1;
    for i in 0..k {
        r = r * (n - i) as i128 / (i + 1) as i128;
    }
    r as i64
}

/// Hilbert data of `S/I` from the lead monomials of a Gröbner basis of `I`.
pub fn hilbert_data(leads: &[Mono], nvars: usize, window: u32) -> HilbertData {
    let numerator = hilbert_numerator(leads, nvars);
    let n = nvars as i64;
    let hf = (0..=window as i64)
        .map(|q| {
            let v: i64 = numerator
                .iter()
                .enumerate()
                .map(|(j, &c)| c * binom(q - j as i64 + n - 1, n - 1))
                .sum();
            v as u64
        })
        .collect();
    // strip factors (1 - t) from the numerator
    let mut reduced = numerator.clone();
    let mut s = 0;
    while reduced.iter().sum::<i64>() == 0 && reduced.iter().any(|&c| c != 0) {
        // synthetic division by (1 - t): q_i = q_{i-1} + c_i
        let mut q = Vec::with_capacity(reduced.len() - 1);
        let mut acc = 0;
        for &c in &reduced[..reduced.len() - 1] {
            acc += c;
            q.push(acc);
        }
        reduced = q;
        s += 1;
    }
    let is_zero_ring = numerator.iter().all(|&c| c == 0);
    let krull_dim = if is_zero_ring { 0 } else { nvars - s };
    let degree = if krull_dim == 0 {
        0
    } else {
        reduced.iter().sum::<i64>() as u64
    };
    HilbertData {
        hf,
        krull_dim,
        degree,
        numerator,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn maximal_ideal() {
        let leads: Vec<Mono> = (0..5).map(Mono::var).collect();
        let h = hilbert_data(&leads, 5, 30);
        assert_eq!(h.hf[0], 1);
        assert!(h.hf[1..].iter().all(|&v| v == 0));
        assert_eq!(h.krull_dim, 0);
        assert_eq!(h.degree, 0);
    }

    #[test]
    fn line_in_p4() {
        let leads: Vec<Mono> = (0..3).map(Mono::var).collect();
        let h = hilbert_data(&leads, 5, 30);
        assert_eq!(h.krull_dim, 2);
        assert_eq!(h.degree, 1);
        for q in 0..=30 {
            assert_eq!(h.hf[q], q as u64 + 1);
        }
    }

    #[test]
    fn polynomial_ring() {
        let h = hilbert_data(&[], 3, 5);
        assert_eq!(h.hf, vec![1, 3, 6, 10, 15, 21]);
        assert_eq!(h.krull_dim, 3);
        assert_eq!(h.degree, 1);
    }

    #[test]
    fn unit_ideal() {
        let h = hilbert_data(&[Mono::ONE], 5, 3);
        assert_eq!(h.hf, vec![0, 0, 0, 0]);
        assert_eq!(h.degree, 0);
    }

    #[test]
    fn mixed_monomial_ideal_matches_count() {
        // (x0^2, x0 x1, x1^3) in 3 variables: count standard monomials directly
        let leads = vec![
            Mono::from_exps(&[2]),
            Mono::from_exps(&[1, 1]),
            Mono::from_exps(&[0, 3]),
        ];
        let h = hilbert_data(&leads, 3, 8);
        for q in 0..=8u32 {
            let mut count = 0;
            for a in 0..=q {
                for b in 0..=q - a {
                    let m = Mono::from_exps(&[a, b, q - a - b]);
                    if !leads.iter().any(|l| l.divides(m)) {
                        count += 1;
                    }
                }
            }
            assert_eq!(h.hf[q as usize], count, "q = {q}");
        }
        assert_eq!(h.krull_dim, 1);
        assert_eq!(h.degree, 4);
    }
}
