//! Poisson bivectors on a chart: verification, Lie–Poisson structures,
//! Hamiltonian fields, invariant densities and log-symplectic loci.

mod fiber;

pub use fiber::{fiber_integrate, FiberError, FiberIntegral, FiberSpec};

use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::linalg;
use crate::mvcalc::graded::Index;
use crate::mvcalc::{
    differential, exterior_derivative, interior_product, schouten_bracket, sharp, volume_form,
    DiffForm, Multivector, ParamMap, PolyScalar, Rational,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PoissonError {
    #[error("bivector is not Poisson: [π,π] has nonzero term at {index:?}")]
    NotPoisson { index: Index, coeff: PolyScalar },
    #[error("expected a bivector, got degree {0}")]
    NotBivector(usize),
    #[error("Lie algebra structure constants fail {0}")]
    BadStructureConstants(&'static str),
    #[error("density must be a nonzero top-degree form")]
    BadDensity,
    #[error("log-symplectic analysis needs an even-dimensional chart, got {0}")]
    OddDimension(usize),
}

/// Outcome of testing `[b,b] = 0`.
#[derive(Debug, Clone, PartialEq)]
pub enum JacobiVerdict {
    Ok,
    Witness { index: Index, coeff: PolyScalar },
}

impl JacobiVerdict {
    pub fn is_ok(&self) -> bool {
        matches!(self, JacobiVerdict::Ok)
    }
}

pub fn jacobi_check(b: &Multivector) -> JacobiVerdict {
    assert_eq!(b.degree(), 2, "jacobi_check expects a bivector");
    let br = schouten_bracket(b, b);
    let witness = br.terms().next().map(|(idx, c)| (idx.clone(), c.clone()));
    match witness {
        None => JacobiVerdict::Ok,
        Some((index, coeff)) => JacobiVerdict::Witness { index, coeff },
    }
}

/// `π^{ij}` as a polynomial, antisymmetric in `(i, j)`.
pub fn bivector_entry(b: &Multivector, i: usize, j: usize) -> PolyScalar {
    use std::cmp::Ordering;
    match i.cmp(&j) {
        Ordering::Less => b.coeff(&[i, j]),
        Ordering::Greater => -b.coeff(&[j, i]),
        Ordering::Equal => PolyScalar::zero(b.dim()),
    }
}

/// Jacobiator of the coordinate brackets `{x_i, x_j} = π^{ij}`, computed
/// directly from the components, for each `i < j < k`.
pub fn coordinate_jacobiators(b: &Multivector) -> Vec<(Index, PolyScalar)> {
    let m = b.dim();
    let jac = |a: usize, bb: usize, c: usize| {
        let mut s = PolyScalar::zero(m);
        for l in 0..m {
            s += &(&bivector_entry(b, a, l) * &bivector_entry(b, bb, c).partial(l));
        }
        s
    };
    let mut out = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            for k in j + 1..m {
                let total = &(&jac(i, j, k) + &jac(j, k, i)) + &jac(k, i, j);
                out.push((vec![i, j, k], total));
            }
        }
    }
    out
}

pub fn coordinate_jacobi_holds(b: &Multivector) -> bool {
    coordinate_jacobiators(b).iter().all(|(_, p)| p.is_zero())
}

#[derive(Debug, Clone, PartialEq)]
pub struct PoissonStructure {
    bivector: Multivector,
    verified: bool,
}

impl PoissonStructure {
    /// Verifies `[π,π] = 0` exactly.
    pub fn new(bivector: Multivector) -> Result<Self, PoissonError> {
        if bivector.degree() != 2 {
            return Err(PoissonError::NotBivector(bivector.degree()));
        }
        match jacobi_check(&bivector) {
            JacobiVerdict::Ok => Ok(Self {
                bivector,
                verified: true,
            }),
            JacobiVerdict::Witness { index, coeff } => {
                Err(PoissonError::NotPoisson { index, coeff })
            }
        }
    }

    /// Wraps a bivector without checking it.
    pub fn unverified(bivector: Multivector) -> Self {
        Self {
            bivector,
            verified: false,
        }
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            bivector: Multivector::zero(dim, 2),
            verified: true,
        }
    }

    pub fn bivector(&self) -> &Multivector {
        &self.bivector
    }

    pub fn dim(&self) -> usize {
        self.bivector.dim()
    }

    pub fn is_verified(&self) -> bool {
        self.verified
    }

    /// `{f, g} = π(df, dg)`.
    pub fn bracket(&self, f: &PolyScalar, g: &PolyScalar) -> PolyScalar {
        hamiltonian_field(self, f).apply(g)
    }
}

/// `π♯(df)`, with `{f, g} = π♯(df)(g) = π(df, dg)`.
pub fn hamiltonian_field(pi: &PoissonStructure, f: &PolyScalar) -> Multivector {
    sharp(pi.bivector(), &differential(f))
}

/// A top-degree form used as a density on an orientable chart.
#[derive(Debug, Clone, PartialEq)]
pub struct Density {
    top_form: DiffForm,
    orientation_note: String,
}

impl Density {
    pub fn new(
        top_form: DiffForm,
        orientation_note: impl Into<String>,
    ) -> Result<Self, PoissonError> {
        if top_form.degree() != top_form.dim() || top_form.is_zero() {
            return Err(PoissonError::BadDensity);
        }
        Ok(Self {
            top_form,
            orientation_note: orientation_note.into(),
        })
    }

    /// `g · dx_1∧…∧dx_m`.
    pub fn from_coefficient(g: PolyScalar) -> Result<Self, PoissonError> {
        let dim = g.nvars();
        Self::new(volume_form(dim, g), "coordinate orientation")
    }

    pub fn coordinate(dim: usize) -> Self {
        Self::from_coefficient(PolyScalar::one(dim)).expect("unit density")
    }

    pub fn top_form(&self) -> &DiffForm {
        &self.top_form
    }

    pub fn coefficient(&self) -> PolyScalar {
        self.top_form.top_coeff()
    }

    pub fn orientation_note(&self) -> &str {
        &self.orientation_note
    }

    /// True when the coefficient is nonzero with one sign at every sample.
    pub fn positive_on(&self, samples: &[Vec<f64>], tol: f64) -> bool {
        let g = self.coefficient();
        if let Some(c) = g.constant_value() {
            return !c.is_zero();
        }
        let vals: Vec<f64> = samples.iter().map(|p| g.eval_f64(p)).collect();
        vals.iter().all(|v| *v > tol) || vals.iter().all(|v| *v < -tol)
    }
}

/// Structure constants `c^k_{ij}` of a Lie algebra, stored as `c[i][j][k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct LieAlgebraData {
    n: usize,
    c: Vec<Vec<Vec<Rational>>>,
}

impl LieAlgebraData {
    pub fn new(c: Vec<Vec<Vec<Rational>>>) -> Result<Self, PoissonError> {
        let n = c.len();
        if c.iter()
            .any(|r| r.len() != n || r.iter().any(|v| v.len() != n))
        {
            return Err(PoissonError::BadStructureConstants("shape check"));
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if c[i][j][k] != -c[j][i][k].clone() {
                        return Err(PoissonError::BadStructureConstants("antisymmetry"));
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for m in 0..n {
                        let mut s = Rational::zero();
                        for l in 0..n {
                            s += &c[i][j][l] * &c[l][k][m];
                            s += &c[j][k][l] * &c[l][i][m];
                            s += &c[k][i][l] * &c[l][j][m];
                        }
                        if !s.is_zero() {
                            return Err(PoissonError::BadStructureConstants("the Jacobi identity"));
                        }
                    }
                }
            }
        }
        Ok(Self { n, c })
    }

    /// Builds from a list of brackets `[e_i, e_j] = Σ_k v_k e_k`, `i < j`.
    pub fn from_brackets(
        n: usize,
        brackets: &[(usize, usize, Vec<Rational>)],
    ) -> Result<Self, PoissonError> {
        let mut c = vec![vec![vec![Rational::zero(); n]; n]; n];
        for (i, j, v) in brackets {
            for (k, val) in v.iter().enumerate() {
                c[*i][*j][k] = val.clone();
                c[*j][*i][k] = -val.clone();
            }
        }
        Self::new(c)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn constant(&self, i: usize, j: usize, k: usize) -> &Rational {
        &self.c[i][j][k]
    }

    pub fn abelian(n: usize) -> Self {
        Self::from_brackets(n, &[]).expect("abelian")
    }

    pub fn so3() -> Self {
        let e = |v: [i64; 3]| {
            v.iter()
                .map(|&x| Rational::from_integer(x.into()))
                .collect::<Vec<_>>()
        };
        Self::from_brackets(
            3,
            &[
                (0, 1, e([0, 0, 1])),
                (1, 2, e([1, 0, 0])),
                (0, 2, e([0, -1, 0])),
            ],
        )
        .expect("so(3)")
    }

    /// `[e1,e2] = −e3, [e2,e3] = e1, [e3,e1] = e2`.
    pub fn sl2() -> Self {
        let e = |v: [i64; 3]| {
            v.iter()
                .map(|&x| Rational::from_integer(x.into()))
                .collect::<Vec<_>>()
        };
        Self::from_brackets(
            3,
            &[
                (0, 1, e([0, 0, -1])),
                (1, 2, e([1, 0, 0])),
                (0, 2, e([0, -1, 0])),
            ],
        )
        .expect("sl(2)")
    }

    pub fn heisenberg() -> Self {
        let e = |v: [i64; 3]| {
            v.iter()
                .map(|&x| Rational::from_integer(x.into()))
                .collect::<Vec<_>>()
        };
        Self::from_brackets(3, &[(0, 1, e([0, 0, 1]))]).expect("heisenberg")
    }

    /// `ℝ² ⋊_A ℝ`: `[e1,e3] = a e1 + b e2`, `[e2,e3] = c e1 + d e2`.
    pub fn book(a: &[[Rational; 2]; 2]) -> Self {
        let z = Rational::zero();
        Self::from_brackets(
            3,
            &[
                (0, 2, vec![a[0][0].clone(), a[0][1].clone(), z.clone()]),
                (1, 2, vec![a[1][0].clone(), a[1][1].clone(), z]),
            ],
        )
        .expect("semidirect products always satisfy Jacobi")
    }
}

/// Coefficient of `∂_i∧∂_j` is `Σ_k c^k_{ij} x_k`.
pub fn lie_poisson(g: &LieAlgebraData) -> Result<PoissonStructure, PoissonError> {
    let n = g.dim();
    let mut b = Multivector::zero(n, 2);
    for i in 0..n {
        for j in i + 1..n {
            let mut coeff = PolyScalar::zero(n);
            for k in 0..n {
                coeff += &PolyScalar::var(n, k).scale(g.constant(i, j, k));
            }
            b += &Multivector::basis(n, &[i, j], coeff);
        }
    }
    PoissonStructure::new(b)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityCheck {
    pub invariant: bool,
    /// `d ι_π μ`.
    pub residual: DiffForm,
}

pub fn check_invariant_density(pi: &PoissonStructure, mu: &Density) -> DensityCheck {
    let residual = exterior_derivative(&interior_product(pi.bivector(), mu.top_form()));
    DensityCheck {
        invariant: residual.is_zero(),
        residual,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainLink {
    pub k: usize,
    /// `ι_{π^k} μ`.
    pub form: DiffForm,
    pub differential: DiffForm,
    pub closed: bool,
}

/// `ι_{π^k} μ` and its closedness for `k = 0..=⌊m/2⌋`.
pub fn modular_chain(pi: &PoissonStructure, mu: &Density) -> Vec<ChainLink> {
    let m = pi.dim();
    let mut power = Multivector::one(m);
    let mut out = Vec::new();
    for k in 0..=m / 2 {
        let form = interior_product(&power, mu.top_form());
        let differential = exterior_derivative(&form);
        out.push(ChainLink {
            k,
            closed: differential.is_zero(),
            form,
            differential,
        });
        power = power.wedge(pi.bivector());
    }
    out
}

/// `ι_π dι_{π^k}μ − dι_{π^{k+1}}μ − ι_{π^{k+1}}dμ + ι_{π^k}dι_πμ`.
pub fn lemma1_residual(pi: &Multivector, mu: &DiffForm, k: usize) -> DiffForm {
    let pk = pi.power(k);
    let pk1 = pk.wedge(pi);
    let d = exterior_derivative;
    let t1 = interior_product(pi, &d(&interior_product(&pk, mu)));
    let t2 = d(&interior_product(&pk1, mu));
    let t3 = interior_product(&pk1, &d(mu));
    let t4 = interior_product(&pk, &d(&interior_product(pi, mu)));
    let deg = t1
        .degree()
        .max(t2.degree())
        .max(t3.degree())
        .max(t4.degree());
    let lift = |f: DiffForm| {
        if f.is_zero() {
            DiffForm::zero(pi.dim(), deg)
        } else {
            f
        }
    };
    let (t1, t2, t3, t4) = (lift(t1), lift(t2), lift(t3), lift(t4));
    &(&(&t1 - &t2) - &t3) + &t4
}

/// Exponent vectors of all monomials of total degree at most `bound`.
pub fn monomials_up_to(nvars: usize, bound: u32) -> Vec<Vec<u32>> {
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for e in 0..=left {
            cur[i] = e;
            rec(i + 1, left - e, cur, out);
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    rec(0, bound, &mut vec![0; nvars], &mut out);
    out.sort_by_key(|e| (e.iter().sum::<u32>(), std::cmp::Reverse(e.clone())));
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct InvariantDensityBasis {
    pub degree_bound: u32,
    pub basis: Vec<PolyScalar>,
    /// A nonzero constant lies in the span, so a positive invariant density
    /// is certified.
    pub constant_in_span: bool,
}

/// Basis of polynomial `g` of degree at most `bound` with `d ι_π(g Ω) = 0`.
pub fn solve_invariant_density(pi: &PoissonStructure, bound: u32) -> InvariantDensityBasis {
    let m = pi.dim();
    let monos = monomials_up_to(m, bound);
    let images: Vec<DiffForm> = monos
        .iter()
        .map(|e| {
            let g = PolyScalar::monomial(e.clone(), Rational::one());
            exterior_derivative(&interior_product(pi.bivector(), &volume_form(m, g)))
        })
        .collect();
    let mut keys: Vec<(Index, Vec<u32>)> = Vec::new();
    for img in &images {
        for (idx, c) in img.terms() {
            for (e, _) in c.terms() {
                let key = (idx.clone(), e.clone());
                if !keys.contains(&key) {
                    keys.push(key);
                }
            }
        }
    }
    let mut mat = linalg::zeros(keys.len(), monos.len());
    for (col, img) in images.iter().enumerate() {
        for (row, (idx, e)) in keys.iter().enumerate() {
            mat[row][col] = img.coeff(idx).coeff(e);
        }
    }
    let null = linalg::nullspace(&mat, monos.len());
    let basis: Vec<PolyScalar> = null
        .iter()
        .map(|v| PolyScalar::from_terms(m, monos.iter().cloned().zip(v.iter().cloned())))
        .collect();
    let constant_in_span = null.iter().any(|v| !v[0].is_zero()) && {
        let rows: linalg::Matrix = (0..monos.len())
            .map(|r| null.iter().map(|v| v[r].clone()).collect())
            .collect();
        let mut target = vec![Rational::zero(); monos.len()];
        target[0] = Rational::one();
        linalg::solve(&rows, &target, null.len()).is_some()
    };
    InvariantDensityBasis {
        degree_bound: bound,
        basis,
        constant_in_span,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum WitnessKind {
    OnLocus { df_norm: f64, transverse: bool },
    OffLocus { sign: i32 },
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub point: Vec<f64>,
    pub value: f64,
    pub kind: WitnessKind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LogSymplecticReport {
    /// Top coefficient of `π^k`.
    pub f: PolyScalar,
    /// A coordinate whose partial derivative of `f` is a nonzero constant,
    /// certifying `df ≠ 0` along the whole zero locus.
    pub affine_coordinate: Option<usize>,
    pub witnesses: Vec<Witness>,
}

pub fn log_symplectic_analysis(
    pi: &PoissonStructure,
    witnesses: &[Vec<f64>],
    tol: f64,
) -> Result<LogSymplecticReport, PoissonError> {
    let m = pi.dim();
    if m % 2 == 1 {
        return Err(PoissonError::OddDimension(m));
    }
    let f = pi.bivector().power(m / 2).top_coeff();
    let grad = f.gradient();
    let affine_coordinate = grad
        .iter()
        .position(|g| g.constant_value().is_some_and(|c| !c.is_zero()));
    let witnesses = witnesses
        .iter()
        .map(|p| {
            let value = f.eval_f64(p);
            let kind = if value.abs() < tol {
                let df_norm = grad
                    .iter()
                    .map(|g| g.eval_f64(p).powi(2))
                    .sum::<f64>()
                    .sqrt();
                WitnessKind::OnLocus {
                    df_norm,
                    transverse: df_norm > tol,
                }
            } else if value.abs() > 1e3 * tol {
                WitnessKind::OffLocus {
                    sign: if value > 0.0 { 1 } else { -1 },
                }
            } else {
                WitnessKind::Inconclusive
            };
            Witness {
                point: p.clone(),
                value,
                kind,
            }
        })
        .collect();
    Ok(LogSymplecticReport {
        f,
        affine_coordinate,
        witnesses,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MapSample {
    pub point: Vec<f64>,
    pub residual: f64,
    pub pass: bool,
}

fn numeric_bivector(b: &Multivector, x: &[f64]) -> Vec<Vec<f64>> {
    let m = b.dim();
    let mut out = vec![vec![0.0; m]; m];
    for (idx, c) in b.terms() {
        let v = c.eval_f64(x);
        out[idx[0]][idx[1]] = v;
        out[idx[1]][idx[0]] = -v;
    }
    out
}

/// Compares `Dφ π_P Dφ^T` with `π_M ∘ φ` at each sample.
pub fn poisson_map_check(
    phi: &ParamMap,
    pi_p: &Multivector,
    pi_m: &Multivector,
    samples: &[Vec<f64>],
    tol: f64,
) -> Vec<MapSample> {
    assert_eq!(phi.source_dim(), pi_p.dim());
    assert_eq!(phi.target_dim(), pi_m.dim());
    samples
        .iter()
        .map(|t| {
            let j = phi.jacobian(t);
            let p = numeric_bivector(pi_p, t);
            let target = numeric_bivector(pi_m, &phi.eval(t));
            let (mm, n) = (phi.target_dim(), phi.source_dim());
            let mut residual: f64 = 0.0;
            for a in 0..mm {
                for b in 0..mm {
                    let mut push = 0.0;
                    for i in 0..n {
                        for k in 0..n {
                            push += j[a][i] * p[i][k] * j[b][k];
                        }
                    }
                    residual = residual.max((push - target[a][b]).abs());
                }
            }
            MapSample {
                point: t.clone(),
                residual,
                pass: residual <= tol,
            }
        })
        .collect()
}

/// Exact check that a polynomial map `φ` satisfies `Dφ π_P Dφ^T = π_M ∘ φ`
/// identically.
pub fn is_poisson_map_exact(phi: &[PolyScalar], pi_p: &Multivector, pi_m: &Multivector) -> bool {
    let n = pi_p.dim();
    let mm = pi_m.dim();
    assert_eq!(phi.len(), mm);
    let jac: Vec<Vec<PolyScalar>> = phi.iter().map(|c| c.gradient()).collect();
    for a in 0..mm {
        for b in a + 1..mm {
            let mut push = PolyScalar::zero(n);
            for i in 0..n {
                for k in 0..n {
                    let e = bivector_entry(pi_p, i, k);
                    if e.is_zero() {
                        continue;
                    }
                    push += &(&(&jac[a][i] * &e) * &jac[b][k]);
                }
            }
            if push != bivector_entry(pi_m, a, b).compose(phi) {
                return false;
            }
        }
    }
    true
}
