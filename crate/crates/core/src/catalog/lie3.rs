//! Three-dimensional Lie algebras `ℝ² ⋊_A ℝ` and the named semisimple and
//! nilpotent cases.

use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::CatalogError;
use crate::linalg::{self, Matrix};
use crate::mvcalc::{fmt_rational, int, Rational};
use crate::poisson::{lie_poisson, LieAlgebraData, PoissonStructure};
use crate::quadrature::NodeCounts;
use crate::transversal::{transversality_check, ParamSpec, Patch};

pub type Mat2 = [[Rational; 2]; 2];

#[derive(Debug, Clone)]
#[allow(clippy::large_enum_variant)]
pub enum Lie3Input {
    Matrix(Mat2),
    Named(String),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Eigenvalues {
    Rational {
        values: [String; 2],
    },
    /// `(tr ± √disc)/2` with `disc` not a rational square.
    RealQuadratic {
        trace: String,
        discriminant: String,
    },
    /// `(tr ± i√(−disc))/2`; `parts` holds exact real and imaginary parts
    /// when `−disc` is a rational square.
    Complex {
        trace: String,
        discriminant: String,
        parts: Option<[String; 2]>,
    },
}

impl Eigenvalues {
    pub fn display(&self) -> String {
        match self {
            Eigenvalues::Rational { values } => format!("{}, {}", values[0], values[1]),
            Eigenvalues::RealQuadratic {
                trace,
                discriminant,
            } => format!("({trace} ± √{discriminant})/2"),
            Eigenvalues::Complex {
                parts: Some([re, im]),
                ..
            } => format!("{re} ± {im}i"),
            Eigenvalues::Complex {
                trace,
                discriminant,
                ..
            } => {
                let neg = discriminant.trim_start_matches('-');
                format!("({trace} ± i√{neg})/2")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CirclePatch {
    /// `γ(t) = L (cos t, sin t, ·)` in the `z = 0` plane.
    pub l: [[String; 2]; 2],
    pub map: Vec<String>,
    pub unit: bool,
    pub transversal: bool,
    pub sign_constant: bool,
    pub sign: i32,
    pub min_abs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Lie3Report {
    pub name: Option<String>,
    pub matrix: Option<[String; 4]>,
    pub trace: Option<String>,
    pub det: Option<String>,
    pub eigenvalues: Option<Eigenvalues>,
    pub semisimple: bool,
    pub circle_exists: bool,
    pub unimodular: bool,
    pub criterion: String,
    pub circle: Option<CirclePatch>,
}

fn exact_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let (n, d) = (r.numer().sqrt(), r.denom().sqrt());
    (&n * &n == *r.numer() && &d * &d == *r.denom()).then(|| Rational::new(n, d))
}

pub fn eigenvalues(a: &Mat2) -> Eigenvalues {
    let tr = &a[0][0] + &a[1][1];
    let det = &a[0][0] * &a[1][1] - &a[0][1] * &a[1][0];
    let disc = &tr * &tr - int(4) * &det;
    let two = int(2);
    match exact_sqrt(&disc) {
        Some(s) => {
            let lo = (&tr - &s) / &two;
            let hi = (&tr + &s) / &two;
            Eigenvalues::Rational {
                values: [fmt_rational(&lo), fmt_rational(&hi)],
            }
        }
        None if disc.is_negative() => Eigenvalues::Complex {
            trace: fmt_rational(&tr),
            discriminant: fmt_rational(&disc),
            parts: exact_sqrt(&-&disc)
                .map(|s| [fmt_rational(&(&tr / &two)), fmt_rational(&(s / &two))]),
        },
        None => Eigenvalues::RealQuadratic {
            trace: fmt_rational(&tr),
            discriminant: fmt_rational(&disc),
        },
    }
}

fn to_matrix(a: &Mat2) -> Matrix {
    a.iter().map(|r| r.to_vec()).collect()
}

/// Symmetric part (times two) of `L^{-1} A L`, or `None` if `L` is singular.
fn conjugated_sym(a: &Mat2, l: &Matrix) -> Option<Matrix> {
    let b = linalg::mat_mul(&linalg::mat_mul(&linalg::inverse(l)?, &to_matrix(a)), l);
    Some(
        (0..2)
            .map(|i| (0..2).map(|j| &b[i][j] + &b[j][i]).collect())
            .collect(),
    )
}

/// `P` with `AᵀP + PA = s·I`.
fn lyapunov(a: &Mat2, s: &Rational) -> Option<Matrix> {
    let basis = [
        [[int(1), int(0)], [int(0), int(0)]],
        [[int(0), int(1)], [int(1), int(0)]],
        [[int(0), int(0)], [int(0), int(1)]],
    ];
    let am = to_matrix(a);
    let at = linalg::transpose(&am, 2);
    let cols: Vec<Matrix> = basis
        .iter()
        .map(|e| {
            let p = to_matrix(e);
            let l = linalg::mat_mul(&at, &p);
            let r = linalg::mat_mul(&p, &am);
            (0..2)
                .map(|i| (0..2).map(|j| &l[i][j] + &r[i][j]).collect())
                .collect()
        })
        .collect();
    let entries = [(0, 0), (0, 1), (1, 1)];
    let rows: Matrix = entries
        .iter()
        .map(|&(i, j)| cols.iter().map(|c| c[i][j].clone()).collect())
        .collect();
    let x = linalg::solve(&rows, &[s.clone(), int(0), s.clone()], 3)?;
    Some(vec![
        vec![x[0].clone(), x[1].clone()],
        vec![x[1].clone(), x[2].clone()],
    ])
}

fn round_to(x: f64, q: i64) -> Rational {
    Rational::new(((x * q as f64).round() as i64).into(), q.into())
}

/// A rational `L` for which `sym(L^{-1} A L)` is definite. Uses `L = I` when
/// `sym(A)` is already definite; otherwise factors the Lyapunov solution
/// `P = Uᵀ D U` and takes `L ≈ U^{-1} D^{-1/2}`, verified exactly.
pub fn circle_frame(a: &Mat2) -> Option<Matrix> {
    let id = linalg::identity(2);
    if linalg::definiteness(&conjugated_sym(a, &id)?).is_some() {
        return Some(id);
    }
    let tr = &a[0][0] + &a[1][1];
    let s = if tr.is_positive() { int(1) } else { int(-1) };
    let p = lyapunov(a, &s)?;
    if p[0][0].is_zero() {
        return None;
    }
    let u12 = &p[0][1] / &p[0][0];
    let d1 = p[0][0].to_f64()?;
    let d2 = (&p[1][1] - &u12 * &p[0][1]).to_f64()?;
    if d1 <= 0.0 || d2 <= 0.0 {
        return None;
    }
    let (s1, s2) = (1.0 / d1.sqrt(), 1.0 / d2.sqrt());
    let mut q = 1i64;
    while q <= 1 << 24 {
        let (r1, r2) = (round_to(s1, q), round_to(s2, q));
        if !r1.is_zero() && !r2.is_zero() {
            // U^{-1} = [[1, −u12], [0, 1]]
            let l = vec![vec![r1, -&u12 * &r2], vec![int(0), r2]];
            if conjugated_sym(a, &l)
                .and_then(|m| linalg::definiteness(&m))
                .is_some()
            {
                return Some(l);
            }
        }
        q *= 2;
    }
    None
}

fn term(c: &Rational, f: &str) -> Option<(bool, String)> {
    if c.is_zero() {
        return None;
    }
    let mag = fmt_rational(&c.abs());
    let body = if mag == "1" {
        f.to_string()
    } else {
        format!("{mag}*{f}")
    };
    Some((c.is_negative(), body))
}

fn linear_combination(a: &Rational, b: &Rational) -> String {
    let parts: Vec<_> = [term(a, "cos(t)"), term(b, "sin(t)")]
        .into_iter()
        .flatten()
        .collect();
    let mut out = String::new();
    for (i, (neg, body)) in parts.iter().enumerate() {
        match (i, neg) {
            (0, true) => out.push_str(&format!("-{body}")),
            (0, false) => out.push_str(body),
            (_, true) => out.push_str(&format!(" - {body}")),
            (_, false) => out.push_str(&format!(" + {body}")),
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

/// The closed curve `t ↦ L (cos t, sin t, 0)` in the book chart.
pub fn circle_patch(l: &Matrix) -> Patch {
    let map = vec![
        linear_combination(&l[0][0], &l[0][1]),
        linear_combination(&l[1][0], &l[1][1]),
        "0".to_string(),
    ];
    let t = ParamSpec {
        name: "t".into(),
        lo: 0.0,
        hi: std::f64::consts::TAU,
        periodic: true,
        reversed: false,
    };
    Patch::new("circle", 3, vec![t], &map).expect("ellipse map parses and closes")
}

pub fn book_structure(a: &Mat2) -> PoissonStructure {
    lie_poisson(&LieAlgebraData::book(a)).expect("semidirect products are Lie algebras")
}

pub fn named_matrix(name: &str) -> Option<Mat2> {
    let z = || int(0);
    match name {
        "heisenberg" => Some([[z(), int(1)], [z(), z()]]),
        "abelian" => Some([[z(), z()], [z(), z()]]),
        _ => None,
    }
}

pub fn classify_lie3(
    input: &Lie3Input,
    samples: usize,
    tol: f64,
) -> Result<Lie3Report, CatalogError> {
    let (name, a) = match input {
        Lie3Input::Matrix(a) => (None, a.clone()),
        Lie3Input::Named(n) if n == "so3" || n == "sl2" => {
            return Ok(Lie3Report {
                name: Some(n.clone()),
                matrix: None,
                trace: None,
                det: None,
                eigenvalues: None,
                semisimple: true,
                circle_exists: false,
                unimodular: true,
                criterion: "semisimple: unimodular, no transverse circles".into(),
                circle: None,
            });
        }
        Lie3Input::Named(n) => (
            Some(n.clone()),
            named_matrix(n).ok_or_else(|| CatalogError::UnknownAlgebra(n.clone()))?,
        ),
    };
    let tr = &a[0][0] + &a[1][1];
    let det = &a[0][0] * &a[1][1] - &a[0][1] * &a[1][0];
    let circle_exists = det.is_positive() && !tr.is_zero();
    let circle = if circle_exists {
        let l = circle_frame(&a).ok_or(CatalogError::NoCircleFrame)?;
        let patch = circle_patch(&l);
        let counts = NodeCounts {
            periodic: samples,
            ..NodeCounts::default()
        };
        let rep = transversality_check(&book_structure(&a), &patch, counts, tol)?;
        let map = (0..3)
            .map(|i| match i {
                0 => linear_combination(&l[0][0], &l[0][1]),
                1 => linear_combination(&l[1][0], &l[1][1]),
                _ => "0".into(),
            })
            .collect();
        Some(CirclePatch {
            l: [
                [fmt_rational(&l[0][0]), fmt_rational(&l[0][1])],
                [fmt_rational(&l[1][0]), fmt_rational(&l[1][1])],
            ],
            map,
            unit: l == linalg::identity(2),
            transversal: rep.is_transversal,
            sign_constant: rep.sign_constant,
            sign: rep.sign(),
            min_abs: rep.min_abs,
        })
    } else {
        None
    };
    Ok(Lie3Report {
        name,
        matrix: Some([
            fmt_rational(&a[0][0]),
            fmt_rational(&a[0][1]),
            fmt_rational(&a[1][0]),
            fmt_rational(&a[1][1]),
        ]),
        trace: Some(fmt_rational(&tr)),
        det: Some(fmt_rational(&det)),
        eigenvalues: Some(eigenvalues(&a)),
        semisimple: false,
        circle_exists,
        unimodular: tr.is_zero(),
        criterion: "same-sign nonzero real parts ⟺ det > 0 and tr ≠ 0; unimodular ⟺ tr = 0".into(),
        circle,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(a: i64, b: i64, c: i64, d: i64) -> Mat2 {
        [[int(a), int(b)], [int(c), int(d)]]
    }

    #[test]
    fn identity_has_unit_circle() {
        let r = classify_lie3(&Lie3Input::Matrix(m(1, 0, 0, 1)), 256, 1e-9).unwrap();
        assert!(r.circle_exists && !r.unimodular);
        assert_eq!(r.eigenvalues.unwrap().display(), "1, 1");
        let c = r.circle.unwrap();
        assert!(c.unit && c.transversal && c.sign_constant);
        assert_eq!(c.sign, -1);
        assert_eq!(c.map, vec!["cos(t)", "sin(t)", "0"]);
    }

    #[test]
    fn saddle_has_no_circle() {
        let r = classify_lie3(&Lie3Input::Matrix(m(1, 0, 0, -1)), 256, 1e-9).unwrap();
        assert!(!r.circle_exists && r.unimodular && r.circle.is_none());
    }

    #[test]
    fn shear_needs_conjugated_circle() {
        // sym(A) = [[1, 3/2], [3/2, 1]] is indefinite
        let a = m(1, 3, 0, 1);
        let unit = circle_patch(&linalg::identity(2));
        let rep =
            transversality_check(&book_structure(&a), &unit, NodeCounts::default(), 1e-9).unwrap();
        assert!(!rep.sign_constant || !rep.is_transversal);
        let r = classify_lie3(&Lie3Input::Matrix(a), 256, 1e-9).unwrap();
        let c = r.circle.unwrap();
        assert!(!c.unit && c.transversal && c.sign_constant);
    }

    #[test]
    fn named_algebras() {
        for n in ["so3", "sl2"] {
            let r = classify_lie3(&Lie3Input::Named(n.into()), 256, 1e-9).unwrap();
            assert!(r.unimodular && !r.circle_exists);
        }
        let h = classify_lie3(&Lie3Input::Named("heisenberg".into()), 256, 1e-9).unwrap();
        assert!(h.unimodular && !h.circle_exists);
        assert!(classify_lie3(&Lie3Input::Named("g2".into()), 256, 1e-9).is_err());
    }

    #[test]
    fn eigenvalue_kinds() {
        assert!(matches!(
            eigenvalues(&m(1, -1, 1, 1)),
            Eigenvalues::Complex { .. }
        ));
        assert_eq!(eigenvalues(&m(1, -1, 1, 1)).display(), "1 ± 1i");
        assert_eq!(eigenvalues(&m(1, -1, 2, 1)).display(), "(2 ± i√8)/2");
        assert!(matches!(
            eigenvalues(&m(1, 1, 1, 0)),
            Eigenvalues::RealQuadratic { .. }
        ));
        assert_eq!(eigenvalues(&m(2, 0, 0, 3)).display(), "2, 3");
    }
}
