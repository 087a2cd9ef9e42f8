//! Dense matrices over an arbitrary [`Field`].

use crate::field::Field;

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<E> {
    pub rows: usize,
    pub cols: usize,
    data: Vec<E>,
}

impl<E: Clone> Matrix<E> {
    pub fn filled(rows: usize, cols: usize, value: E) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![value; rows * cols],
        }
    }

    /// Builds a matrix from row vectors. All rows must have equal length.
    pub fn from_rows(rows: Vec<Vec<E>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |v| v.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row);
        }
        Matrix {
            rows: r,
            cols: c,
            data,
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: E) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[E] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

/// Result of Gauss-Jordan elimination: reduced row echelon form and the
/// pivot column of each nonzero row.
#[derive(Clone, Debug)]
pub struct Echelon<E> {
    pub rref: Matrix<E>,
    pub pivots: Vec<usize>,
}

/// Reduced row echelon form.
pub fn rref<F: Field>(f: &F, m: &Matrix<F::Elem>) -> Echelon<F::Elem> {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..a.cols {
        if r == a.rows {
            break;
        }
        let Some(p) = (r..a.rows).find(|&i| !f.is_zero(a.get(i, c))) else {
            continue;
        };
        a.swap_rows(r, p);
        let inv = f.inv(a.get(r, c));
        for j in c..a.cols {
            let v = f.mul(a.get(r, j), &inv);
            a.set(r, j, v);
        }
        for i in 0..a.rows {
            if i == r || f.is_zero(a.get(i, c)) {
                continue;
            }
            let factor = a.get(i, c).clone();
            for j in c..a.cols {
                let v = f.sub(a.get(i, j), &f.mul(&factor, a.get(r, j)));
                a.set(i, j, v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    Echelon { rref: a, pivots }
}

/// Rank via forward elimination only (cheaper than a full RREF).
pub fn rank<F: Field>(f: &F, m: &Matrix<F::Elem>) -> usize {
    let mut a = m.clone();
    let mut r = 0;
    for c in 0..a.cols {
        if r == a.rows {
            break;
        }
        let Some(p) = (r..a.rows).find(|&i| !f.is_zero(a.get(i, c))) else {
            continue;
        };
        a.swap_rows(r, p);
        let inv = f.inv(a.get(r, c));
        for i in r + 1..a.rows {
            if f.is_zero(a.get(i, c)) {
                continue;
            }
            let factor = f.mul(a.get(i, c), &inv);
            for j in c..a.cols {
                let v = f.sub(a.get(i, j), &f.mul(&factor, a.get(r, j)));
                a.set(i, j, v);
            }
        }
        r += 1;
    }
    r
}

/// Basis of the right kernel `{x : m x = 0}`.
pub fn kernel<F: Field>(f: &F, m: &Matrix<F::Elem>) -> Vec<Vec<F::Elem>> {
    let e = rref(f, m);
    let mut is_pivot = vec![false; m.cols];
    for &c in &e.pivots {
        is_pivot[c] = true;
    }
    let mut basis = Vec::new();
    for free in (0..m.cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![f.zero(); m.cols];
        v[free] = f.one();
        for (row, &pc) in e.pivots.iter().enumerate() {
            v[pc] = f.neg(e.rref.get(row, free));
        }
        basis.push(v);
    }
    basis
}

/// Dimension of the right kernel.
pub fn kernel_dim<F: Field>(f: &F, m: &Matrix<F::Elem>) -> usize {
    m.cols - rank(f, m)
}

/// Solves `m x = b`, returning one solution if any exists.
pub fn solve<F: Field>(f: &F, m: &Matrix<F::Elem>, b: &[F::Elem]) -> Option<Vec<F::Elem>> {
    assert_eq!(b.len(), m.rows);
    let mut rows = Vec::with_capacity(m.rows);
    for i in 0..m.rows {
        let mut r = m.row(i).to_vec();
        r.push(b[i].clone());
        rows.push(r);
    }
    let aug = Matrix::from_rows(rows);
    let e = rref(f, &aug);
    if e.pivots.last() == Some(&m.cols) {
        return None;
    }
    let mut x = vec![f.zero(); m.cols];
    for (row, &pc) in e.pivots.iter().enumerate() {
        x[pc] = e.rref.get(row, m.cols).clone();
    }
    Some(x)
}

/// Rank of a list of integer vectors over `Q`, computed by fraction-free
/// elimination in `i128`. Panics on overflow, which does not happen for the
/// small lattice vectors this is used with.
pub fn int_rank(vectors: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<i128>> = vectors
        .iter()
        .map(|v| v.iter().map(|&x| x as i128).collect())
        .collect();
    let cols = a.first().map_or(0, |v| v.len());
    let mut r = 0;
    for c in 0..cols {
        if r == a.len() {
            break;
        }
        let Some(p) = (r..a.len()).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..a.len() {
            if a[i][c] == 0 {
                continue;
            }
            let (pr, pi) = (a[r][c], a[i][c]);
            let g = gcd(pr, pi);
            let (mr, mi) = (pi / g, pr / g);
            for j in c..cols {
                a[i][j] = a[i][j]
                    .checked_mul(mi)
                    .and_then(|x| x.checked_sub(a[r][j].checked_mul(mr)?))
                    .expect("int_rank overflow");
            }
            let g = a[i].iter().fold(0i128, |g, &x| gcd(g, x));
            if g > 1 {
                a[i].iter_mut().for_each(|x| *x /= g);
            }
        }
        r += 1;
    }
    r
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}
