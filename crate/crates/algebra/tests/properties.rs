//! Property suites for the exact kernels, checked against independent
//! brute-force computations.

use atlas_algebra::field::{ratio, Field, PrimeField, Rat, RationalField};
use atlas_algebra::lp::{cone_direction, cone_max_is_zero, convex_combination};
use atlas_algebra::matrix::{int_rank, kernel, rank};
use atlas_algebra::{buchberger, Matrix, Mono, Poly, Ring};
use proptest::prelude::*;

fn small_matrix(max: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=max, 1..=max)
        .prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-3i64..=3, c), r))
}

fn as_rat(m: &[Vec<i64>]) -> Matrix<Rat> {
    Matrix::from_rows(
        m.iter()
            .map(|row| row.iter().map(|&x| ratio(x, 1)).collect())
            .collect(),
    )
}

fn as_mod(f: &PrimeField, m: &[Vec<i64>]) -> Matrix<u32> {
    Matrix::from_rows(
        m.iter()
            .map(|row| row.iter().map(|&x| f.reduce_i64(x)).collect())
            .collect(),
    )
}

/// Monomials of degree `d` in `n` variables.
fn monomials(n: usize, d: u32) -> Vec<Mono> {
    fn rec(n: usize, d: u32, i: usize, cur: &mut Vec<u32>, out: &mut Vec<Mono>) {
        if i + 1 == n {
            cur.push(d);
            out.push(Mono::from_exps(cur));
            cur.pop();
            return;
        }
        for a in 0..=d {
            cur.push(a);
            rec(n, d - a, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, d, 0, &mut Vec::new(), &mut out);
    out
}

fn coeff_row(f: &PrimeField, p: &Poly<u32>, basis: &[Mono]) -> Vec<u32> {
    basis
        .iter()
        .map(|m| {
            p.terms
                .iter()
                .find(|(t, _)| t == m)
                .map_or(f.zero(), |(_, c)| *c)
        })
        .collect()
}

/// Degree-`d` part of the ideal as the span of `m · g`.
fn degree_span(ring: &Ring<PrimeField>, gens: &[Poly<u32>], d: u32) -> Vec<Poly<u32>> {
    let mut out = Vec::new();
    for g in gens {
        let dg = g.degree().unwrap();
        if dg <= d {
            for m in monomials(ring.nvars, d - dg) {
                out.push(ring.mul_term(g, &ring.field.one(), m));
            }
        }
    }
    out
}

fn homogeneous(ring: &Ring<PrimeField>, d: u32, coeffs: &[u32]) -> Poly<u32> {
    let terms = monomials(ring.nvars, d)
        .into_iter()
        .zip(coeffs.iter().copied())
        .collect();
    ring.from_terms(terms)
}

fn ideal_strategy() -> impl Strategy<Value = (usize, Vec<(u32, Vec<u32>)>)> {
    (2usize..=3).prop_flat_map(|n| {
        let gen = (1u32..=3).prop_flat_map(move |d| {
            let len = monomials(n, d).len();
            (
                Just(d),
                prop::collection::vec(prop_oneof![3 => Just(0u32), 2 => 1u32..101], len),
            )
        });
        (Just(n), prop::collection::vec(gen, 1..=3))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn rank_is_transpose_invariant(m in small_matrix(5)) {
        let q = as_rat(&m);
        prop_assert_eq!(rank(&RationalField, &q), rank(&RationalField, &q.transpose()));
        let f = PrimeField::new(7).unwrap();
        let p = as_mod(&f, &m);
        prop_assert_eq!(rank(&f, &p), rank(&f, &p.transpose()));
    }

    #[test]
    fn modular_and_rational_rank_agree(m in small_matrix(4)) {
        // |minors| <= 4! * 3^4 < 32003, so no nonzero minor vanishes mod p
        let r = rank(&RationalField, &as_rat(&m));
        prop_assert_eq!(r, rank(&PrimeField::default(), &as_mod(&PrimeField::default(), &m)));
        prop_assert_eq!(r, int_rank(&m));
        // any prime can only lose rank
        let f = PrimeField::new(3).unwrap();
        prop_assert!(rank(&f, &as_mod(&f, &m)) <= r);
    }

    #[test]
    fn kernel_vectors_are_annihilated(m in small_matrix(5)) {
        let q = as_rat(&m);
        let k = kernel(&RationalField, &q);
        prop_assert_eq!(k.len() + rank(&RationalField, &q), q.cols);
        for v in &k {
            for i in 0..q.rows {
                let s: Rat = (0..q.cols).map(|j| q.get(i, j) * &v[j]).sum();
                prop_assert_eq!(s, ratio(0, 1));
            }
        }
    }

    #[test]
    fn reduction_commutes_with_arithmetic(a in -1000i64..1000, b in 1i64..1000, c in -1000i64..1000, d in 1i64..1000) {
        let f = PrimeField::default();
        let (x, y) = (ratio(a, b), ratio(c, d));
        let img = |q: &Rat| f.from_rat(q).unwrap();
        prop_assert_eq!(img(&(&x + &y)), f.add(&img(&x), &img(&y)));
        prop_assert_eq!(img(&(&x * &y)), f.mul(&img(&x), &img(&y)));
    }

    #[test]
    fn membership_matches_linear_algebra((n, gens) in ideal_strategy(), d in 1u32..=5, coeffs in prop::collection::vec(0u32..101, 21)) {
        let f = PrimeField::new(101).unwrap();
        let ring = Ring::new(f, n);
        let gens: Vec<Poly<u32>> = gens.iter().map(|(dg, c)| homogeneous(&ring, *dg, c)).filter(|g| !g.is_zero()).collect();
        prop_assume!(!gens.is_empty());
        let gb = buchberger(&ring, &gens);
        let basis = monomials(n, d);
        let span: Vec<Vec<u32>> = degree_span(&ring, &gens, d).iter().map(|p| coeff_row(&f, p, &basis)).collect();
        let r = if span.is_empty() { 0 } else { rank(&f, &Matrix::from_rows(span.clone())) };

        // Hilbert function of S/I in degree d
        prop_assert_eq!(gb.hilbert(d).hf[d as usize], (basis.len() - r) as u64);

        // membership of an arbitrary form
        let g = homogeneous(&ring, d, &coeffs[..basis.len()]);
        let mut with_g = span.clone();
        with_g.push(coeff_row(&f, &g, &basis));
        let in_span = rank(&f, &Matrix::from_rows(with_g)) == r;
        prop_assert_eq!(gb.contains(&g), in_span);

        // a combination of the generators is always a member
        if let Some(row) = span.first() {
            let mut comb = ring.from_terms(basis.iter().copied().zip(row.iter().copied()).collect());
            for p in degree_span(&ring, &gens, d).iter().skip(1).take(3) {
                comb = ring.add(&comb, &ring.scale(p, &f.from_i64(7)));
            }
            prop_assert!(gb.contains(&comb));
        }
    }

    #[test]
    fn saturation_is_idempotent((n, gens) in ideal_strategy()) {
        let f = PrimeField::new(101).unwrap();
        let ring = Ring::new(f, n);
        let gens: Vec<Poly<u32>> = gens.iter().map(|(dg, c)| homogeneous(&ring, *dg, c)).filter(|g| !g.is_zero()).collect();
        prop_assume!(!gens.is_empty());
        let gb = buchberger(&ring, &gens);
        let sat = gb.saturate_irrelevant();
        prop_assert!(sat.contains_ideal(&gb));
        prop_assert!(sat.same_ideal(&sat.saturate_irrelevant()));
        prop_assert!(sat.is_saturated());
        let x0 = sat.saturate_var(0);
        prop_assert!(x0.same_ideal(&x0.saturate_var(0)));
    }

    #[test]
    fn convex_combination_certificates(pts in prop::collection::vec(prop::collection::vec(-3i64..=3, 3), 1..6), w in prop::collection::vec(0i64..4, 6)) {
        // a nonnegative rational combination of the points is always found
        let total: i64 = w.iter().take(pts.len()).sum();
        prop_assume!(total > 0);
        let target: Vec<i64> = (0..3).map(|j| pts.iter().zip(&w).map(|(p, c)| p[j] * c).sum()).collect();
        let scaled: Vec<Vec<i64>> = pts.iter().map(|p| p.iter().map(|x| x * total).collect()).collect();
        let lam = convex_combination(&scaled, &target).unwrap().expect("target is a convex combination");
        prop_assert_eq!(lam.iter().sum::<Rat>(), ratio(1, 1));
        for j in 0..3 {
            let s: Rat = lam.iter().zip(&scaled).map(|(l, p)| l * ratio(p[j], 1)).sum();
            prop_assert_eq!(s, ratio(target[j], 1));
        }
    }

    #[test]
    fn cone_test_and_direction_agree(a in prop::collection::vec(prop::collection::vec(-2i64..=2, 3), 1..5), c in prop::collection::vec(-2i64..=2, 3)) {
        let zero = cone_max_is_zero(&a, &c);
        let dir = cone_direction(&a, &c);
        prop_assert_eq!(zero, dir.is_none());
        if let Some(x) = dir {
            for row in &a {
                let s: Rat = row.iter().zip(&x).map(|(r, v)| ratio(*r, 1) * v).sum();
                prop_assert!(s >= ratio(0, 1));
            }
            prop_assert_eq!(x.iter().sum::<Rat>(), ratio(0, 1));
            let s: Rat = c.iter().zip(&x).map(|(r, v)| ratio(*r, 1) * v).sum();
            prop_assert!(s > ratio(0, 1));
        }
    }
}
