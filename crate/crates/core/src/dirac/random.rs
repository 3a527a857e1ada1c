//! Seeded generators of random Lagrangian subspaces, subspaces, forms and
//! linear maps with small integer entries.

use num_traits::{One, Zero};
use rand::Rng;

use super::LinearDirac;
use crate::linalg::{self, Matrix};
use crate::mvcalc::Rational;

fn r(v: i64) -> Rational {
    Rational::from_integer(v.into())
}

pub fn random_antisymmetric<R: Rng>(rng: &mut R, n: usize) -> Matrix {
    let mut m = linalg::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            let v = r(rng.gen_range(-2..=2));
            m[j][i] = -v.clone();
            m[i][j] = v;
        }
    }
    m
}

pub fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> Matrix {
    (0..rows)
        .map(|_| (0..cols).map(|_| r(rng.gen_range(-2..=2))).collect())
        .collect()
}

/// Product of random elementary matrices; returns `(g, g^{-1})`.
fn random_unimodular<R: Rng>(rng: &mut R, n: usize) -> (Matrix, Matrix) {
    let mut g = linalg::identity(n);
    let mut inv = linalg::identity(n);
    if n < 2 {
        return (g, inv);
    }
    for _ in 0..2 * n {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let c = r(rng.gen_range(-2..=2));
        // g ← E g with E = I + c e_i e_j^T, inv ← inv E^{-1}
        for k in 0..n {
            let add = &c * &g[j][k];
            g[i][k] += add;
        }
        for row in inv.iter_mut() {
            let sub = &c * &row[i];
            row[j] -= sub;
        }
    }
    (g, inv)
}

/// Starts from a coordinate-split Lagrangian and applies a B-transform, a
/// β-transform and a change of basis.
pub fn random_lagrangian<R: Rng>(rng: &mut R, n: usize) -> LinearDirac {
    let mut rows: Matrix = (0..n)
        .map(|i| {
            let mut row = vec![Rational::zero(); 2 * n];
            if rng.gen_bool(0.5) {
                row[i] = Rational::one();
            } else {
                row[n + i] = Rational::one();
            }
            row
        })
        .collect();
    let b = random_antisymmetric(rng, n);
    let beta = random_antisymmetric(rng, n);
    let (g, ginv) = random_unimodular(rng, n);
    let (use_b, use_beta) = (rng.gen_bool(0.7), rng.gen_bool(0.7));
    for row in rows.iter_mut() {
        let (u, xi) = row.split_at(n);
        let (u, mut xi) = (u.to_vec(), xi.to_vec());
        if use_b {
            for j in 0..n {
                for i in 0..n {
                    xi[j] += &u[i] * &b[i][j];
                }
            }
        }
        let mut u2 = u.clone();
        if use_beta {
            for j in 0..n {
                for i in 0..n {
                    u2[j] += &xi[i] * &beta[i][j];
                }
            }
        }
        // u ↦ g u, ξ ↦ g^{-T} ξ
        let gu = linalg::mat_vec(&g, &u2);
        let ginv_t = linalg::transpose(&ginv, n);
        let gxi = linalg::mat_vec(&ginv_t, &xi);
        *row = gu.into_iter().chain(gxi).collect();
    }
    LinearDirac::new(n, rows).expect("transforms preserve the Lagrangian condition")
}

/// A random subspace of dimension exactly `k`, as row basis.
pub fn random_subspace<R: Rng>(rng: &mut R, n: usize, k: usize) -> Matrix {
    loop {
        let m = random_matrix(rng, k, n);
        if linalg::rank(&m, n) == k {
            return m;
        }
    }
}
