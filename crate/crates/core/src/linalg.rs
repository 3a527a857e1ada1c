//! Exact dense linear algebra over the rationals.

use num_traits::{One, Zero};

use crate::mvcalc::poly::Rational;

pub type Matrix = Vec<Vec<Rational>>;

pub fn zeros(rows: usize, cols: usize) -> Matrix {
    vec![vec![Rational::zero(); cols]; rows]
}

pub fn identity(n: usize) -> Matrix {
    let mut m = zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Rational::one();
    }
    m
}

pub fn transpose(m: &Matrix, cols: usize) -> Matrix {
    let mut t = zeros(cols, m.len());
    for (i, row) in m.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            t[j][i] = v.clone();
        }
    }
    t
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    let mut out = zeros(a.len(), cols);
    for (i, row) in a.iter().enumerate() {
        for k in 0..inner {
            if row[k].is_zero() {
                continue;
            }
            for j in 0..cols {
                out[i][j] += &row[k] * &b[k][j];
            }
        }
    }
    out
}

pub fn mat_vec(a: &Matrix, v: &[Rational]) -> Vec<Rational> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
        })
        .collect()
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(m: &mut Matrix, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = Rational::one() / &m[r][c];
        for v in m[r].iter_mut() {
            *v *= &inv;
        }
        let pivot_row: Vec<(usize, Rational)> = (c..cols)
            .filter(|&j| !m[r][j].is_zero())
            .map(|j| (j, m[r][j].clone()))
            .collect();
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for (j, v) in &pivot_row {
                    m[i][*j] -= &f * v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &Matrix, cols: usize) -> usize {
    let mut w = m.clone();
    rref(&mut w, cols).len()
}

/// Basis of the right nullspace `{v : M v = 0}`.
pub fn nullspace(m: &Matrix, cols: usize) -> Vec<Vec<Rational>> {
    let mut w = m.clone();
    let pivots = rref(&mut w, cols);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); cols];
            v[f] = Rational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -w[row][f].clone();
            }
            v
        })
        .collect()
}

/// One solution of `M x = b`, if any.
pub fn solve(m: &Matrix, b: &[Rational], cols: usize) -> Option<Vec<Rational>> {
    let mut aug: Matrix = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug, cols + 1);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![Rational::zero(); cols];
    for (row, &pc) in pivots.iter().enumerate() {
        x[pc] = aug[row][cols].clone();
    }
    Some(x)
}

pub fn determinant(m: &Matrix) -> Rational {
    let n = m.len();
    let mut w = m.clone();
    let mut det = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !w[i][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            w.swap(p, c);
            det = -det;
        }
        det *= &w[c][c];
        for r in c + 1..n {
            if w[r][c].is_zero() {
                continue;
            }
            let f = &w[r][c] / &w[c][c];
            for k in c..n {
                let sub = &f * &w[c][k];
                w[r][k] -= sub;
            }
        }
    }
    det
}

pub fn inverse(m: &Matrix) -> Option<Matrix> {
    let n = m.len();
    let mut aug: Matrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| {
                if i == j {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            }));
            r
        })
        .collect();
    let pivots = rref(&mut aug, 2 * n);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Sylvester's criterion on a symmetric matrix: `Some(+1)` positive definite,
/// `Some(-1)` negative definite, `None` otherwise.
pub fn definiteness(sym: &Matrix) -> Option<i32> {
    let n = sym.len();
    let minors: Vec<Rational> = (1..=n)
        .map(|k| determinant(&sym[..k].iter().map(|r| r[..k].to_vec()).collect()))
        .collect();
    let zero = Rational::zero();
    if minors.iter().all(|d| *d > zero) {
        return Some(1);
    }
    if minors
        .iter()
        .enumerate()
        .all(|(k, d)| if k % 2 == 0 { *d < zero } else { *d > zero })
    {
        return Some(-1);
    }
    None
}
