//! Linear Dirac structures: Lagrangian subspaces `L ⊂ V ⊕ V*`, their spinor
//! and co-spinor lines, backward and forward transport along linear maps,
//! and the transversality conditions on subspaces.

mod ext;
pub mod random;

pub use ext::Ext;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::linalg::{self, Matrix};
use crate::mvcalc::{exterior_derivative, interior_product, DiffForm, Rational};
use crate::poisson::{Density, PoissonStructure};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiracError {
    #[error("expected {expected} columns, got {got}")]
    Shape { expected: usize, got: usize },
    #[error("rows span a subspace of dimension {rank}, expected {n}")]
    Rank { rank: usize, n: usize },
    #[error("subspace is not isotropic")]
    NotIsotropic,
    #[error("annihilator has dimension {0}, expected 1")]
    LineDimension(usize),
    #[error("matrix is not antisymmetric")]
    NotAntisymmetric,
    #[error("dimension {0} exceeds the supported maximum of 8")]
    TooLarge(usize),
}

const MAX_DIM: usize = 8;

/// Row basis of a Lagrangian subspace; the first `n` columns are the
/// `V`-part, the last `n` the `V*`-part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearDirac {
    n: usize,
    rows: Matrix,
}

fn row_basis(rows: &Matrix, cols: usize) -> Matrix {
    let mut w = rows.clone();
    let r = linalg::rref(&mut w, cols).len();
    w.truncate(r);
    w
}

fn pairing(a: &[Rational], b: &[Rational], n: usize) -> Rational {
    let mut s = Rational::zero();
    for i in 0..n {
        s += &a[n + i] * &b[i];
        s += &b[n + i] * &a[i];
    }
    s
}

fn antisymmetric(m: &Matrix) -> bool {
    let n = m.len();
    (0..n).all(|i| m[i].len() == n && (0..n).all(|j| m[i][j] == -m[j][i].clone()))
}

impl LinearDirac {
    pub fn new(n: usize, rows: Matrix) -> Result<Self, DiracError> {
        if n > MAX_DIM {
            return Err(DiracError::TooLarge(n));
        }
        if let Some(r) = rows.iter().find(|r| r.len() != 2 * n) {
            return Err(DiracError::Shape {
                expected: 2 * n,
                got: r.len(),
            });
        }
        let basis = row_basis(&rows, 2 * n);
        if basis.len() != n {
            return Err(DiracError::Rank {
                rank: basis.len(),
                n,
            });
        }
        for a in &basis {
            for b in &basis {
                if !pairing(a, b, n).is_zero() {
                    return Err(DiracError::NotIsotropic);
                }
            }
        }
        Ok(Self { n, rows: basis })
    }

    /// `L = V`.
    pub fn tangent(n: usize) -> Self {
        let rows = (0..n)
            .map(|i| {
                (0..2 * n)
                    .map(|j| {
                        if i == j {
                            Rational::one()
                        } else {
                            Rational::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        Self::new(n, rows).expect("tangent Lagrangian")
    }

    /// `L = V*`.
    pub fn cotangent(n: usize) -> Self {
        let rows = (0..n)
            .map(|i| {
                (0..2 * n)
                    .map(|j| {
                        if j == n + i {
                            Rational::one()
                        } else {
                            Rational::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        Self::new(n, rows).expect("cotangent Lagrangian")
    }

    /// `{π♯ξ + ξ}` with `π♯(e^i) = Σ_j π^{ij} e_j`.
    pub fn graph_bivector(pi: &Matrix) -> Result<Self, DiracError> {
        if !antisymmetric(pi) {
            return Err(DiracError::NotAntisymmetric);
        }
        let n = pi.len();
        let rows = (0..n)
            .map(|i| {
                let mut r = pi[i].clone();
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
        Self::new(n, rows)
    }

    /// `{u + ι_u ω}`.
    pub fn graph_form(omega: &Matrix) -> Result<Self, DiracError> {
        if !antisymmetric(omega) {
            return Err(DiracError::NotAntisymmetric);
        }
        let n = omega.len();
        let rows = (0..n)
            .map(|i| {
                let mut r: Vec<Rational> = (0..n)
                    .map(|j| {
                        if i == j {
                            Rational::one()
                        } else {
                            Rational::zero()
                        }
                    })
                    .collect();
                r.extend(omega[i].iter().cloned());
                r
            })
            .collect();
        Self::new(n, rows)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &Matrix {
        &self.rows
    }

    fn split(&self, r: usize) -> (&[Rational], &[Rational]) {
        self.rows[r].split_at(self.n)
    }

    /// Equality of subspaces.
    pub fn same_subspace(&self, other: &Self) -> bool {
        self.n == other.n && self.rows == other.rows
    }

    pub fn display(&self) -> String {
        self.rows
            .iter()
            .map(|r| {
                let v: Vec<String> = r.iter().map(crate::mvcalc::fmt_rational).collect();
                format!("[{}]", v.join(", "))
            })
            .collect::<Vec<_>>()
            .join("\n")
    }
}

/// Matrix whose column `m` is `op(e_m)` flattened over all rows of `L`.
fn stacked_operator(n: usize, count: usize, op: impl Fn(usize, &Ext) -> Ext) -> Matrix {
    let size = 1usize << n;
    let mut mat = linalg::zeros(count * size, size);
    for m in 0..size {
        let e = Ext::basis(n, m as u32);
        for r in 0..count {
            let img = op(r, &e);
            for (k, v) in img.coeffs().iter().enumerate() {
                mat[r * size + k][m] = v.clone();
            }
        }
    }
    mat
}

fn line_from(n: usize, mat: &Matrix) -> Result<Ext, DiracError> {
    let null = linalg::nullspace(mat, 1 << n);
    if null.len() != 1 {
        return Err(DiracError::LineDimension(null.len()));
    }
    Ok(Ext::from_coeffs(
        n,
        null.into_iter().next().expect("one vector"),
    ))
}

/// Generator of `K_L = {φ : (ι_u + ξ∧)φ = 0 for all u + ξ ∈ L}`.
pub fn spinor_line(l: &LinearDirac) -> Result<Ext, DiracError> {
    let n = l.dim();
    let mat = stacked_operator(n, n, |r, e| {
        let (u, xi) = l.split(r);
        e.contract_vector(u).add(&e.wedge_vector(xi))
    });
    line_from(n, &mat)
}

/// Generator of `C_L = {w : u ∧ w + ι_ξ w = 0 for all u + ξ ∈ L}`.
pub fn cospinor_line(l: &LinearDirac) -> Result<Ext, DiracError> {
    let n = l.dim();
    let mat = stacked_operator(n, n, |r, e| {
        let (u, xi) = l.split(r);
        e.wedge_vector(u).add(&e.contract_vector(xi))
    });
    line_from(n, &mat)
}

/// `φ ⊗ w ↦ ι_φ w`.
pub fn spinor_cospinor_iso(phi: &Ext, w_top: &Ext) -> Ext {
    Ext::contract(phi, w_top)
}

/// `f^*` on forms, for `f: V → W` given as an `m × n` matrix.
pub fn pull_forms(f: &Matrix, n: usize, phi: &Ext) -> Ext {
    phi.map(f, n)
}

/// `f_*` on multivectors.
pub fn push_multivectors(f: &Matrix, n: usize, w: &Ext) -> Ext {
    let m = f.len();
    let cols: Vec<Vec<Rational>> = (0..n)
        .map(|j| (0..m).map(|a| f[a][j].clone()).collect())
        .collect();
    w.map(&cols, m)
}

fn map_dims(f: &Matrix) -> (usize, usize) {
    (f.len(), f.first().map_or(0, Vec::len))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pullback {
    pub result: LinearDirac,
    /// `ker f^* ∩ L_M = 0`.
    pub transverse: bool,
    /// `f^* K_{L_M} = K_{f^! L_M}`, checked when transverse.
    pub spinor_relation: Option<bool>,
}

/// `f^!(L_M) = {u + f^*η : f u + η ∈ L_M}`.
pub fn backward_pullback(l_m: &LinearDirac, f: &Matrix) -> Result<Pullback, DiracError> {
    let (m, n) = map_dims(f);
    if l_m.dim() != m {
        return Err(DiracError::Shape {
            expected: l_m.dim(),
            got: m,
        });
    }
    // unknowns (u ∈ ℝ^n, c ∈ ℝ^m): F u − B_W^T c = 0
    let mut sys = linalg::zeros(m, n + m);
    for a in 0..m {
        for j in 0..n {
            sys[a][j] = f[a][j].clone();
        }
        for r in 0..m {
            sys[a][n + r] = -l_m.rows[r][a].clone();
        }
    }
    let null = linalg::nullspace(&sys, n + m);
    let images: Matrix = null
        .iter()
        .map(|v| {
            let (u, c) = v.split_at(n);
            let mut row = u.to_vec();
            for j in 0..n {
                let mut s = Rational::zero();
                for a in 0..m {
                    let mut eta_a = Rational::zero();
                    for (r, cr) in c.iter().enumerate() {
                        eta_a += cr * &l_m.rows[r][m + a];
                    }
                    s += &f[a][j] * &eta_a;
                }
                row.push(s);
            }
            row
        })
        .collect();
    let result = LinearDirac::new(n, images)?;
    // c with B_W^T c = 0 and F^T B_{W*}^T c = 0
    let mut ker = linalg::zeros(m + n, m);
    for r in 0..m {
        for a in 0..m {
            ker[a][r] = l_m.rows[r][a].clone();
        }
        for j in 0..n {
            let mut s = Rational::zero();
            for a in 0..m {
                s += &f[a][j] * &l_m.rows[r][m + a];
            }
            ker[m + j][r] = s;
        }
    }
    let transverse = linalg::nullspace(&ker, m).is_empty();
    let spinor_relation = if transverse {
        let pulled = pull_forms(f, n, &spinor_line(l_m)?);
        Some(pulled.same_line(&spinor_line(&result)?))
    } else {
        None
    };
    Ok(Pullback {
        result,
        transverse,
        spinor_relation,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Eq7Check {
    /// `v = k_1 ∧ … ∧ k_q` for a basis of `ker f`.
    pub v: Ext,
    /// Complementary factor with `v ∧ u = λ w_top`.
    pub u: Ext,
    pub lambda: Rational,
    /// `ψ` with `f^*ψ = ι_v φ`, if one exists.
    pub psi: Option<Ext>,
    pub psi_spans_target_spinor: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pushforward {
    pub result: LinearDirac,
    /// `ker f_* ∩ L_P = 0`.
    pub strong: bool,
    pub surjective: bool,
    /// `f_* C_{L_P} = C_{L_M}`, checked when strong and surjective.
    pub cospinor_transport: Option<bool>,
    pub eq7: Option<Eq7Check>,
}

/// `f_!(L_P) = {f u + η : u + f^*η ∈ L_P}`.
pub fn forward_pushforward(l_p: &LinearDirac, f: &Matrix) -> Result<Pushforward, DiracError> {
    let (m, n) = map_dims(f);
    if l_p.dim() != n {
        return Err(DiracError::Shape {
            expected: l_p.dim(),
            got: n,
        });
    }
    // unknowns (c ∈ ℝ^n, η ∈ ℝ^m): B_{V*}^T c − F^T η = 0
    let mut sys = linalg::zeros(n, n + m);
    for j in 0..n {
        for r in 0..n {
            sys[j][r] = l_p.rows[r][n + j].clone();
        }
        for a in 0..m {
            sys[j][n + a] = -f[a][j].clone();
        }
    }
    let null = linalg::nullspace(&sys, n + m);
    let images: Matrix = null
        .iter()
        .map(|v| {
            let (c, eta) = v.split_at(n);
            let mut row = Vec::with_capacity(2 * m);
            for a in 0..m {
                let mut s = Rational::zero();
                for j in 0..n {
                    let mut u_j = Rational::zero();
                    for (r, cr) in c.iter().enumerate() {
                        u_j += cr * &l_p.rows[r][j];
                    }
                    s += &f[a][j] * &u_j;
                }
                row.push(s);
            }
            row.extend(eta.iter().cloned());
            row
        })
        .collect();
    let result = LinearDirac::new(m, images)?;
    // c with B_{V*}^T c = 0 and F B_V^T c = 0
    let mut ker = linalg::zeros(n + m, n);
    for r in 0..n {
        for j in 0..n {
            ker[j][r] = l_p.rows[r][n + j].clone();
        }
        for a in 0..m {
            let mut s = Rational::zero();
            for j in 0..n {
                s += &f[a][j] * &l_p.rows[r][j];
            }
            ker[n + a][r] = s;
        }
    }
    let strong = linalg::nullspace(&ker, n).is_empty();
    let surjective = linalg::rank(f, n) == m;
    let (cospinor_transport, eq7) = if strong && surjective {
        let pushed = push_multivectors(f, n, &cospinor_line(l_p)?);
        let transport = pushed.same_line(&cospinor_line(&result)?);
        (Some(transport), Some(eq7_check(l_p, &result, f)?))
    } else {
        (None, None)
    };
    Ok(Pushforward {
        result,
        strong,
        surjective,
        cospinor_transport,
        eq7,
    })
}

fn eq7_check(l_p: &LinearDirac, l_m: &LinearDirac, f: &Matrix) -> Result<Eq7Check, DiracError> {
    let (m, n) = map_dims(f);
    let kernel = linalg::nullspace(f, n);
    let mut v = Ext::one(n);
    for k in &kernel {
        v = Ext::vector(k).wedge(&v);
    }
    let mut chosen: Matrix = kernel.clone();
    let mut u = Ext::one(n);
    for i in 0..n {
        let e: Vec<Rational> = (0..n)
            .map(|j| {
                if i == j {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            })
            .collect();
        let mut trial = chosen.clone();
        trial.push(e.clone());
        if linalg::rank(&trial, n) == trial.len() {
            chosen = trial;
            u = u.wedge(&Ext::vector(&e));
        }
    }
    let w = v.wedge(&u);
    let lambda = w.get((1u32 << n) - 1).clone();
    let phi = spinor_line(l_p)?;
    let target = Ext::contract(&v, &phi);
    // solve f^* ψ = target over ∧W*
    let size_m = 1usize << m;
    let mut mat = linalg::zeros(1 << n, size_m);
    for s in 0..size_m {
        let img = pull_forms(f, n, &Ext::basis(m, s as u32));
        for (k, x) in img.coeffs().iter().enumerate() {
            mat[k][s] = x.clone();
        }
    }
    let psi = linalg::solve(&mat, target.coeffs(), size_m).map(|c| Ext::from_coeffs(m, c));
    let psi_spans_target_spinor = match &psi {
        Some(p) => p.same_line(&spinor_line(l_m)?),
        None => false,
    };
    Ok(Eq7Check {
        v,
        u,
        lambda,
        psi,
        psi_spans_target_spinor,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Lemma2Flags {
    /// `(X ⊕ ann X) ∩ L = 0`.
    pub b: bool,
    /// Top-degree part of `i^* φ` is nonzero.
    pub c: bool,
    /// Degree-`codim X` part of the co-spinor projects nontrivially to
    /// `∧^top (V/X)`.
    pub d: bool,
}

impl Lemma2Flags {
    pub fn agree(&self) -> bool {
        self.b == self.c && self.c == self.d
    }
}

/// Evaluates the three transversality conditions for the subspace spanned
/// by the rows of `x`.
pub fn transversal_conditions(l: &LinearDirac, x: &Matrix) -> Result<Lemma2Flags, DiracError> {
    let n = l.dim();
    let xb = row_basis(x, n);
    let k = xb.len();
    let ann = linalg::nullspace(&xb, n);
    let mut stacked: Matrix = Vec::new();
    for r in &xb {
        let mut row = r.clone();
        row.extend(std::iter::repeat_n(Rational::zero(), n));
        stacked.push(row);
    }
    for a in &ann {
        let mut row = vec![Rational::zero(); n];
        row.extend(a.iter().cloned());
        stacked.push(row);
    }
    stacked.extend(l.rows.iter().cloned());
    let b = linalg::rank(&stacked, 2 * n) == 2 * n;

    let phi = spinor_line(l)?;
    // i^*: e^a ↦ Σ_j x_j[a] e^j on ℝ^k
    let img: Matrix = (0..n)
        .map(|a| (0..k).map(|j| xb[j][a].clone()).collect())
        .collect();
    let restricted = phi.map(&img, k);
    let c = !restricted.component(k).is_zero();

    let w = cospinor_line(l)?;
    let mut xtop = Ext::one(n);
    for r in &xb {
        xtop = xtop.wedge(&Ext::vector(r));
    }
    let d = !w.component(n - k).wedge(&xtop).is_zero();
    Ok(Lemma2Flags { b, c, d })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiracUnimodular {
    /// `(k, (−1)^k ι_{π^k} μ / k!, closed)`.
    pub components: Vec<(usize, DiffForm, bool)>,
    pub closed: bool,
}

/// Closedness of every graded piece of `e^{−ι_π} μ`.
pub fn dirac_unimodular_check(pi: &PoissonStructure, mu: &Density) -> DiracUnimodular {
    let m = pi.dim();
    let mut power = crate::mvcalc::Multivector::one(m);
    let mut factorial = Rational::one();
    let mut components = Vec::new();
    for k in 0..=m / 2 {
        if k > 0 {
            power = power.wedge(pi.bivector());
            factorial *= Rational::from_integer((k as i64).into());
        }
        let mut coeff = Rational::one() / &factorial;
        if k % 2 == 1 {
            coeff = -coeff;
        }
        let form = interior_product(&power, mu.top_form()).scale_rational(&coeff);
        let closed = exterior_derivative(&form).is_zero();
        components.push((k, form, closed));
    }
    let closed = components.iter().all(|c| c.2);
    DiracUnimodular { components, closed }
}

/// Graph of `π` evaluated at an exact point.
pub fn graph_at_point(
    pi: &PoissonStructure,
    point: &[Rational],
) -> Result<LinearDirac, DiracError> {
    let n = pi.dim();
    let mut mat = linalg::zeros(n, n);
    for (idx, c) in pi.bivector().terms() {
        let v = c.eval_exact(point);
        mat[idx[0]][idx[1]] = v.clone();
        mat[idx[1]][idx[0]] = -v;
    }
    LinearDirac::graph_bivector(&mat)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mvcalc::{int, rat};

    fn sym2() -> Matrix {
        vec![vec![int(0), int(3)], vec![int(-3), int(0)]]
    }

    #[test]
    fn validation() {
        let bad = vec![
            vec![int(1), int(0), int(1), int(0)],
            vec![int(0), int(1), int(1), int(0)],
        ];
        assert_eq!(LinearDirac::new(2, bad), Err(DiracError::NotIsotropic));
        assert!(matches!(
            LinearDirac::new(2, vec![vec![int(1), int(0), int(0), int(0)]]),
            Err(DiracError::Rank { .. })
        ));
    }

    #[test]
    fn spinors_of_standard_lagrangians() {
        assert_eq!(
            spinor_line(&LinearDirac::tangent(3)).unwrap().degrees(),
            vec![0]
        );
        assert_eq!(
            spinor_line(&LinearDirac::cotangent(3)).unwrap().degrees(),
            vec![3]
        );
        assert_eq!(
            cospinor_line(&LinearDirac::tangent(3)).unwrap().degrees(),
            vec![3]
        );
        assert_eq!(
            cospinor_line(&LinearDirac::cotangent(3)).unwrap().degrees(),
            vec![0]
        );
    }

    #[test]
    fn bivector_graph_spinor_is_exponential() {
        // e^{-ι_π} Ω = Ω - ι_π Ω with ι_{e1∧e2} e^{12} = -1
        let l = LinearDirac::graph_bivector(&sym2()).unwrap();
        let phi = spinor_line(&l).unwrap();
        let expected = Ext::top(2).add(&Ext::one(2).scale(&int(3)));
        assert!(phi.same_line(&expected));
        let w = spinor_cospinor_iso(&phi, &Ext::top(2));
        assert!(w.same_line(&cospinor_line(&l).unwrap()));
    }

    #[test]
    fn form_graph_cospinor_is_exponential() {
        let l = LinearDirac::graph_form(&sym2()).unwrap();
        let w = cospinor_line(&l).unwrap();
        let expected = Ext::top(2).add(&Ext::one(2).scale(&int(3)));
        assert!(w.same_line(&expected));
    }

    #[test]
    fn pullback_of_form_graph() {
        let omega = sym2();
        let f = vec![vec![int(1), int(2), int(0)], vec![int(0), int(1), int(1)]];
        let p = backward_pullback(&LinearDirac::graph_form(&omega).unwrap(), &f).unwrap();
        let ft = linalg::transpose(&f, 3);
        let pulled = linalg::mat_mul(&linalg::mat_mul(&ft, &omega), &f);
        assert!(p
            .result
            .same_subspace(&LinearDirac::graph_form(&pulled).unwrap()));
        assert!(p.transverse);
        assert_eq!(p.spinor_relation, Some(true));
        let id = linalg::identity(2);
        let l = LinearDirac::graph_bivector(&sym2()).unwrap();
        assert!(backward_pullback(&l, &id).unwrap().result.same_subspace(&l));
    }

    #[test]
    fn transversal_subspace_of_bivector_graph() {
        // π = e1∧e2 + e3∧e4 on ℝ⁴, X = span(e1, e2)
        let mut pi = linalg::zeros(4, 4);
        pi[0][1] = int(1);
        pi[1][0] = int(-1);
        pi[2][3] = int(1);
        pi[3][2] = int(-1);
        let l = LinearDirac::graph_bivector(&pi).unwrap();
        let inc = vec![
            vec![int(1), int(0)],
            vec![int(0), int(1)],
            vec![int(0), int(0)],
            vec![int(0), int(0)],
        ];
        let p = backward_pullback(&l, &inc).unwrap();
        let induced = vec![vec![int(0), int(1)], vec![int(-1), int(0)]];
        assert!(p
            .result
            .same_subspace(&LinearDirac::graph_bivector(&induced).unwrap()));
        let x = vec![
            vec![int(1), int(0), int(0), int(0)],
            vec![int(0), int(1), int(0), int(0)],
        ];
        let flags = transversal_conditions(&l, &x).unwrap();
        assert!(flags.b && flags.c && flags.d);
    }

    #[test]
    fn lemma2_examples() {
        let l = LinearDirac::graph_form(&sym2()).unwrap();
        let line = vec![vec![int(1), int(0)]];
        let f = transversal_conditions(&l, &line).unwrap();
        assert!(!f.b && !f.c && !f.d);
        let v = LinearDirac::tangent(3);
        let f = transversal_conditions(&v, &vec![vec![int(1), int(1), int(0)]]).unwrap();
        assert!(!f.b && !f.c && !f.d);
        let whole = transversal_conditions(&l, &linalg::identity(2)).unwrap();
        assert!(whole.b && whole.c && whole.d);
    }

    #[test]
    fn projection_of_split_symplectic() {
        // ω = e^1∧e^3 + e^2∧e^4 on V ⊕ U, projected to V = span(e1, e2)
        let mut omega = linalg::zeros(4, 4);
        omega[0][2] = int(1);
        omega[2][0] = int(-1);
        omega[1][3] = int(1);
        omega[3][1] = int(-1);
        let l = LinearDirac::graph_form(&omega).unwrap();
        let f = vec![
            vec![int(1), int(0), int(0), int(0)],
            vec![int(0), int(1), int(0), int(0)],
        ];
        let p = forward_pushforward(&l, &f).unwrap();
        assert!(p.strong && p.surjective);
        assert_eq!(p.cospinor_transport, Some(true));
        let eq7 = p.eq7.unwrap();
        assert!(!eq7.lambda.is_zero());
        assert!(eq7.psi_spans_target_spinor);
        let id = linalg::identity(4);
        assert!(forward_pushforward(&l, &id)
            .unwrap()
            .result
            .same_subspace(&l));
    }

    #[test]
    fn pushforward_of_bivector_graph() {
        let mut pi = linalg::zeros(3, 3);
        pi[0][1] = rat(1, 2);
        pi[1][0] = rat(-1, 2);
        pi[1][2] = int(2);
        pi[2][1] = int(-2);
        let l = LinearDirac::graph_bivector(&pi).unwrap();
        let f = vec![vec![int(1), int(0), int(1)], vec![int(0), int(1), int(0)]];
        let p = forward_pushforward(&l, &f).unwrap();
        assert!(p.strong);
        let ft = linalg::transpose(&f, 3);
        let pushed = linalg::mat_mul(&linalg::mat_mul(&f, &pi), &ft);
        assert!(p
            .result
            .same_subspace(&LinearDirac::graph_bivector(&pushed).unwrap()));
    }
}
