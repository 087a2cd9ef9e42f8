//! Exact rational linear programming.
//!
//! A dense two-phase tableau simplex with Bland's rule. Instances in this
//! project are tiny (a handful of rows, at most a few hundred columns), so
//! the tableau is stored as plain `Vec<Vec<Rat>>`.

use num_traits::{One, Signed, Zero};

use crate::field::{rat, Rat};

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<Rat>, value: Rat },
    Infeasible,
    Unbounded,
}

/// maximize `c·x` subject to `a x = b`, `x ≥ 0`.
#[derive(Clone, Debug)]
pub struct StandardLp {
    pub a: Vec<Vec<Rat>>,
    pub b: Vec<Rat>,
    pub c: Vec<Rat>,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum LpError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("empty point set")]
    Empty,
}

struct Tableau {
    // m rows of n+1 entries, last entry is the right-hand side
    rows: Vec<Vec<Rat>>,
    basis: Vec<usize>,
    n: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        for v in self.rows[r].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        let prow = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for (v, p) in row.iter_mut().zip(prow.iter()) {
                if !p.is_zero() {
                    *v -= &factor * p;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Reduced costs of `cost` (to be minimized) restricted to `allowed`
    /// columns; returns the Bland entering column if any is negative.
    fn entering(&self, cost: &[Rat], allowed: usize) -> Option<usize> {
        for j in 0..allowed {
            if self.basis.contains(&j) {
                continue;
            }
            let mut d = cost[j].clone();
            for (i, row) in self.rows.iter().enumerate() {
                if !row[j].is_zero() {
                    d -= &cost[self.basis[i]] * &row[j];
                }
            }
            if d.is_negative() {
                return Some(j);
            }
        }
        None
    }

    fn leaving(&self, c: usize) -> Option<usize> {
        let mut best: Option<(usize, Rat)> = None;
        for (i, row) in self.rows.iter().enumerate() {
            if !row[c].is_positive() {
                continue;
            }
            let ratio = &row[self.n] / &row[c];
            best = match best {
                None => Some((i, ratio)),
                Some((bi, br)) => {
                    if ratio < br || (ratio == br && self.basis[i] < self.basis[bi]) {
                        Some((i, ratio))
                    } else {
                        Some((bi, br))
                    }
                }
            };
        }
        best.map(|(i, _)| i)
    }

    /// Runs the simplex loop minimizing `cost`. Returns false if unbounded.
    fn minimize(&mut self, cost: &[Rat], allowed: usize) -> bool {
        while let Some(c) = self.entering(cost, allowed) {
            let Some(r) = self.leaving(c) else {
                return false;
            };
            self.pivot(r, c);
        }
        true
    }

    fn solution(&self, n: usize) -> Vec<Rat> {
        let mut x = vec![Rat::zero(); n];
        for (i, &bj) in self.basis.iter().enumerate() {
            if bj < n {
                x[bj] = self.rows[i][self.n].clone();
            }
        }
        x
    }
}

impl StandardLp {
    pub fn solve(&self) -> LpOutcome {
        let m = self.a.len();
        let n = self.c.len();
        assert_eq!(self.b.len(), m);
        let total = n + m;
        let mut rows = Vec::with_capacity(m);
        for (i, arow) in self.a.iter().enumerate() {
            assert_eq!(arow.len(), n);
            let flip = self.b[i].is_negative();
            let mut row = Vec::with_capacity(total + 1);
            for v in arow {
                row.push(if flip { -v } else { v.clone() });
            }
            for k in 0..m {
                row.push(if k == i { Rat::one() } else { Rat::zero() });
            }
            row.push(if flip { -&self.b[i] } else { self.b[i].clone() });
            rows.push(row);
        }
        let mut t = Tableau {
            rows,
            basis: (n..total).collect(),
            n: total,
        };

        // phase 1: minimize the sum of artificials
        let mut cost1 = vec![Rat::zero(); total];
        for v in cost1.iter_mut().skip(n) {
            *v = Rat::one();
        }
        t.minimize(&cost1, total);
        let infeas: Rat = t
            .basis
            .iter()
            .enumerate()
            .filter(|(_, &bj)| bj >= n)
            .map(|(i, _)| t.rows[i][total].clone())
            .sum();
        if infeas.is_positive() {
            return LpOutcome::Infeasible;
        }

        // drive remaining artificials out of the basis, dropping redundant rows
        let mut i = 0;
        while i < t.rows.len() {
            if t.basis[i] >= n {
                match (0..n).find(|&j| !t.rows[i][j].is_zero()) {
                    Some(j) => {
                        t.pivot(i, j);
                        i += 1;
                    }
                    None => {
                        t.rows.remove(i);
                        t.basis.remove(i);
                    }
                }
            } else {
                i += 1;
            }
        }

        // phase 2
        let mut cost2: Vec<Rat> = self.c.iter().map(|v| -v).collect();
        cost2.extend(std::iter::repeat(Rat::zero()).take(m));
        if !t.minimize(&cost2, n) {
            return LpOutcome::Unbounded;
        }
        let x = t.solution(n);
        let value = x.iter().zip(&self.c).map(|(a, b)| a * b).sum();
        LpOutcome::Optimal { x, value }
    }
}

fn check_dims(points: &[Vec<i64>]) -> Result<usize, LpError> {
    let d = points.first().ok_or(LpError::Empty)?.len();
    for p in points {
        if p.len() != d {
            return Err(LpError::DimensionMismatch {
                expected: d,
                found: p.len(),
            });
        }
    }
    Ok(d)
}

/// Strictly positive coefficients `c` with `Σ c_j p_j = 0` and `Σ c_j = 1`,
/// chosen to maximize `min c_j`. `None` when no strictly positive solution
/// exists, i.e. the origin is not in the relative interior of the hull.
pub fn positive_combination_zero(points: &[Vec<i64>]) -> Result<Option<Vec<Rat>>, LpError> {
    let d = check_dims(points)?;
    let n = points.len();
    // variables: t, s_1..s_n with c_j = t + s_j
    let mut a = Vec::with_capacity(d + 1);
    for i in 0..d {
        let mut row = Vec::with_capacity(n + 1);
        row.push(rat(points.iter().map(|p| p[i]).sum()));
        row.extend(points.iter().map(|p| rat(p[i])));
        a.push(row);
    }
    let mut norm = vec![rat(n as i64)];
    norm.extend(std::iter::repeat(Rat::one()).take(n));
    a.push(norm);
    let mut b = vec![Rat::zero(); d];
    b.push(Rat::one());
    let mut c = vec![Rat::zero(); n + 1];
    c[0] = Rat::one();
    match (StandardLp { a, b, c }).solve() {
        LpOutcome::Optimal { x, value } if value.is_positive() => {
            Ok(Some(x[1..].iter().map(|s| s + &x[0]).collect()))
        }
        _ => Ok(None),
    }
}

/// Nonnegative coefficients summing to one with `Σ c_j p_j = target`, if the
/// target lies in the convex hull of the points.
pub fn convex_combination(
    points: &[Vec<i64>],
    target: &[i64],
) -> Result<Option<Vec<Rat>>, LpError> {
    let d = check_dims(points)?;
    if target.len() != d {
        return Err(LpError::DimensionMismatch {
            expected: d,
            found: target.len(),
        });
    }
    let n = points.len();
    let mut a: Vec<Vec<Rat>> = (0..d)
        .map(|i| points.iter().map(|p| rat(p[i])).collect())
        .collect();
    a.push(vec![Rat::one(); n]);
    let mut b: Vec<Rat> = target.iter().map(|&v| rat(v)).collect();
    b.push(Rat::one());
    match (StandardLp {
        a,
        b,
        c: vec![Rat::zero(); n],
    })
    .solve()
    {
        LpOutcome::Optimal { x, .. } => Ok(Some(x)),
        _ => Ok(None),
    }
}

/// Decides whether `sup { c·w : A w ≥ 0, Σ w = 0 }` is zero (rather than
/// `+∞`). By Farkas this holds iff `-c = Σ y_j a_j + t·1` with `y ≥ 0`, which
/// is an LP with only `d` rows; [`cone_direction`] is the primal counterpart.
pub fn cone_max_is_zero(a: &[Vec<i64>], c: &[i64]) -> bool {
    let d = c.len();
    let m = a.len();
    // variables: y (m), t⁺, t⁻
    let rows: Vec<Vec<Rat>> = (0..d)
        .map(|i| {
            let mut row: Vec<Rat> = a
                .iter()
                .map(|arow| {
                    assert_eq!(arow.len(), d, "constraint row has wrong length");
                    rat(arow[i])
                })
                .collect();
            row.push(Rat::one());
            row.push(rat(-1));
            row
        })
        .collect();
    let lp = StandardLp {
        a: rows,
        b: c.iter().map(|&v| rat(-v)).collect(),
        c: vec![Rat::zero(); m + 2],
    };
    !matches!(lp.solve(), LpOutcome::Infeasible)
}

/// A point `w` with `A w ≥ 0`, `Σ w = 0` and `c·w = 1`, if one exists.
pub fn cone_direction(a: &[Vec<i64>], c: &[i64]) -> Option<Vec<Rat>> {
    let d = c.len();
    let m = a.len();
    // variables: w⁺ (d), w⁻ (d), slacks (m)
    let nv = 2 * d + m;
    let mut rows = Vec::with_capacity(m + 2);
    for (i, arow) in a.iter().enumerate() {
        assert_eq!(arow.len(), d, "constraint row has wrong length");
        let mut row = vec![Rat::zero(); nv];
        for j in 0..d {
            row[j] = rat(arow[j]);
            row[d + j] = rat(-arow[j]);
        }
        row[2 * d + i] = rat(-1);
        rows.push(row);
    }
    let mut sum = vec![Rat::zero(); nv];
    let mut obj = vec![Rat::zero(); nv];
    for j in 0..d {
        sum[j] = Rat::one();
        sum[d + j] = rat(-1);
        obj[j] = rat(c[j]);
        obj[d + j] = rat(-c[j]);
    }
    rows.push(sum);
    rows.push(obj);
    let mut b = vec![Rat::zero(); m + 1];
    b.push(Rat::one());
    match (StandardLp {
        a: rows,
        b,
        c: vec![Rat::zero(); nv],
    })
    .solve()
    {
        LpOutcome::Optimal { x, .. } => Some((0..d).map(|j| &x[j] - &x[d + j]).collect()),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::ratio;

    #[test]
    fn square_gives_equal_weights() {
        let pts = vec![vec![1, 0], vec![-1, 0], vec![0, 1], vec![0, -1]];
        let c = positive_combination_zero(&pts).unwrap().unwrap();
        assert_eq!(c, vec![ratio(1, 4); 4]);
    }

    #[test]
    fn hull_missing_origin() {
        let pts = vec![vec![1, 0], vec![0, 1]];
        assert_eq!(positive_combination_zero(&pts).unwrap(), None);
    }

    #[test]
    fn origin_on_boundary_is_not_interior() {
        // origin is a vertex-adjacent boundary point of the segment hull
        let pts = vec![vec![0, 0], vec![1, 0], vec![0, 1]];
        assert_eq!(positive_combination_zero(&pts).unwrap(), None);
        assert!(convex_combination(&pts, &[0, 0]).unwrap().is_some());
    }

    #[test]
    fn mismatched_dimensions() {
        let pts = vec![vec![1, 0], vec![0, 1, 2]];
        assert!(matches!(
            positive_combination_zero(&pts),
            Err(LpError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn cone_examples() {
        let id: Vec<Vec<i64>> = (0..5)
            .map(|i| (0..5).map(|j| i64::from(i == j)).collect())
            .collect();
        assert!(cone_max_is_zero(&id, &[1, 0, 0, 0, 0]));
        assert!(!cone_max_is_zero(&[], &[1, 0, 0, 0, 0]));
        assert!(cone_direction(&id, &[1, 0, 0, 0, 0]).is_none());
        assert!(cone_direction(&[], &[1, 0, 0, 0, 0]).is_some());
    }

    #[test]
    fn cone_primal_and_dual_agree() {
        // x0 * fourth powers: the cone is the line through (4,-1,-1,-1,-1)
        let a = vec![
            vec![1, 4, 0, 0, 0],
            vec![1, 0, 4, 0, 0],
            vec![1, 0, 0, 4, 0],
            vec![1, 0, 0, 0, 4],
        ];
        for c in &a {
            assert!(cone_max_is_zero(&a, c));
            assert!(cone_direction(&a, c).is_none());
        }
        let a = vec![vec![5, 0, 0, 0, 0]];
        assert!(!cone_max_is_zero(&a, &a[0]));
        let w = cone_direction(&a, &a[0]).unwrap();
        assert_eq!(w.iter().sum::<Rat>(), Rat::zero());
        assert_eq!(&w[0] * rat(5), Rat::one());
    }

    #[test]
    fn unbounded_lp() {
        let lp = StandardLp {
            a: vec![vec![rat(1), rat(-1)]],
            b: vec![rat(0)],
            c: vec![rat(1), rat(0)],
        };
        assert_eq!(lp.solve(), LpOutcome::Unbounded);
    }

    #[test]
    fn redundant_rows_are_dropped() {
        let lp = StandardLp {
            a: vec![vec![rat(1), rat(1)], vec![rat(2), rat(2)]],
            b: vec![rat(1), rat(2)],
            c: vec![rat(1), rat(2)],
        };
        match lp.solve() {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, rat(2)),
            other => panic!("{other:?}"),
        }
    }
}
