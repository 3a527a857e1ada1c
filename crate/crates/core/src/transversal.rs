//! Parametrised patches, Poisson transversality with its coorientation, and
//! pairings of closed forms with compact patches.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::Serialize;
use thiserror::Error;

use crate::mvcalc::graded::{merge_sign, Index};
use crate::mvcalc::pullback::det_f64;
use crate::mvcalc::{
    exterior_derivative, interior_product, parse_expr, parse_rational, rational_to_f64, DiffForm,
    ExprError, ExprForm, Expression, ParamMap,
};
use crate::poisson::{check_invariant_density, Density, PoissonStructure};
use crate::quadrature::{grid, integrate_until_stable, Converged, Direction, NodeCounts};

pub const CLOSURE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TransversalError {
    #[error("patch `{patch}`: {source}")]
    Expression { patch: String, source: ExprError },
    #[error("patch `{patch}`: bad range value `{value}`")]
    BadRange { patch: String, value: String },
    #[error("patch `{patch}`: map has {got} components, chart has dimension {expected}")]
    MapArity {
        patch: String,
        got: usize,
        expected: usize,
    },
    #[error("patch `{patch}`: periodic parameter `{param}` does not close up (gap {gap:e})")]
    NotClosed {
        patch: String,
        param: String,
        gap: f64,
    },
    #[error("invalid patch `{patch}`: not an immersion at parameter {at:?}")]
    NotImmersion { patch: String, at: Vec<f64> },
    #[error("codimension {0} is odd; Poisson transversals have even codimension")]
    OddCodimension(usize),
    #[error("patch dimension {patch} exceeds chart dimension {chart}")]
    TooLarge { patch: usize, chart: usize },
    #[error("not a transversal point: |coefficient of the top power| = {0:e}")]
    NotATransversalPoint(f64),
}

/// Parses a range endpoint: a rational, a decimal, or a rational multiple of
/// `pi` written `pi`, `2pi`, `-pi`, `3/2*pi`, `2*pi`.
pub fn parse_range_value(s: &str) -> Option<f64> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if let Some(head) = t.strip_suffix("pi") {
        let head = head.strip_suffix('*').unwrap_or(head);
        let factor = match head {
            "" => 1.0,
            "-" => -1.0,
            h => rational_to_f64(&parse_rational(h)?),
        };
        return Some(factor * PI);
    }
    if let Some(r) = parse_rational(&t) {
        return Some(rational_to_f64(&r));
    }
    t.parse::<f64>().ok().filter(|v| v.is_finite())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParamSpec {
    pub name: String,
    pub lo: f64,
    pub hi: f64,
    pub periodic: bool,
    pub reversed: bool,
}

#[derive(Debug, Clone)]
pub struct Patch {
    name: String,
    params: Vec<ParamSpec>,
    map: ParamMap,
}

impl Patch {
    /// Parses the component expressions (trig allowed) and checks that
    /// periodic parameters close up.
    pub fn new(
        name: &str,
        chart_dim: usize,
        params: Vec<ParamSpec>,
        map: &[String],
    ) -> Result<Self, TransversalError> {
        if map.len() != chart_dim {
            return Err(TransversalError::MapArity {
                patch: name.into(),
                got: map.len(),
                expected: chart_dim,
            });
        }
        let names: Vec<String> = params.iter().map(|p| p.name.clone()).collect();
        let comps = map
            .iter()
            .map(|src| parse_expr(src, &names, true))
            .collect::<Result<Vec<Expression>, _>>()
            .map_err(|source| TransversalError::Expression {
                patch: name.into(),
                source,
            })?;
        let patch = Self {
            name: name.into(),
            params,
            map: ParamMap::new(&names, comps),
        };
        patch.check_closure()?;
        Ok(patch)
    }

    /// A single point.
    pub fn point(name: &str, coords: &[f64]) -> Self {
        let comps = coords
            .iter()
            .map(|&c| Expression::constant(&[], rational_from_f64(c)))
            .collect();
        Self {
            name: name.into(),
            params: Vec::new(),
            map: ParamMap::new(&[], comps),
        }
    }

    fn check_closure(&self) -> Result<(), TransversalError> {
        let mids: Vec<f64> = self.params.iter().map(|p| 0.5 * (p.lo + p.hi)).collect();
        for (i, p) in self.params.iter().enumerate().filter(|(_, p)| p.periodic) {
            for probe in [0.0, 0.37, 0.81] {
                let mut a: Vec<f64> = mids
                    .iter()
                    .zip(&self.params)
                    .map(|(m, q)| m + probe * (q.hi - q.lo) * 0.5)
                    .collect();
                let mut b = a.clone();
                a[i] = p.lo;
                b[i] = p.hi;
                let gap = self
                    .map
                    .eval(&a)
                    .iter()
                    .zip(self.map.eval(&b))
                    .map(|(x, y)| (x - y).abs())
                    .fold(0.0, f64::max);
                if gap > CLOSURE_TOL {
                    return Err(TransversalError::NotClosed {
                        patch: self.name.clone(),
                        param: p.name.clone(),
                        gap,
                    });
                }
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.params.len()
    }

    pub fn chart_dim(&self) -> usize {
        self.map.target_dim()
    }

    pub fn params(&self) -> &[ParamSpec] {
        &self.params
    }

    pub fn map(&self) -> &ParamMap {
        &self.map
    }

    pub fn is_point(&self) -> bool {
        self.params.is_empty()
    }

    /// Same patch with parameter `i` traversed backwards.
    pub fn reversed(&self, i: usize) -> Self {
        let mut out = self.clone();
        out.params[i].reversed = !out.params[i].reversed;
        out
    }

    pub fn directions(&self) -> Vec<Direction> {
        self.params
            .iter()
            .map(|p| Direction {
                lo: p.lo,
                hi: p.hi,
                periodic: p.periodic,
            })
            .collect()
    }

    fn actual(&self, t: &[f64]) -> Vec<f64> {
        t.iter()
            .zip(&self.params)
            .map(|(v, p)| if p.reversed { p.lo + p.hi - v } else { *v })
            .collect()
    }

    pub fn eval(&self, t: &[f64]) -> Vec<f64> {
        self.map.eval(&self.actual(t))
    }

    pub fn jacobian(&self, t: &[f64]) -> Vec<Vec<f64>> {
        let mut j = self.map.jacobian(&self.actual(t));
        for row in j.iter_mut() {
            for (v, p) in row.iter_mut().zip(&self.params) {
                if p.reversed {
                    *v = -*v;
                }
            }
        }
        j
    }

    /// Coefficients of `∂φ/∂t_1 ∧ … ∧ ∂φ/∂t_d` on increasing index sets.
    pub fn tangent_multivector(&self, t: &[f64]) -> BTreeMap<Index, f64> {
        let j = self.jacobian(t);
        let d = self.dim();
        subsets(self.chart_dim(), d)
            .into_iter()
            .map(|k| {
                let minor: Vec<Vec<f64>> = k.iter().map(|&r| j[r].clone()).collect();
                (k, if d == 0 { 1.0 } else { det_f64(minor) })
            })
            .collect()
    }

    /// Pullback of a form, top coefficient, honouring reversal flags.
    pub fn pullback_top(&self, form: &ExprForm, t: &[f64]) -> f64 {
        if self.is_point() {
            return form
                .eval(&self.eval(&[]))
                .get(&Vec::new())
                .copied()
                .unwrap_or(0.0);
        }
        let sign: f64 = self
            .params
            .iter()
            .filter(|p| p.reversed)
            .fold(1.0, |s, _| -s);
        sign * crate::mvcalc::pullback_top(form, &self.map, &self.actual(t))
    }

    pub fn sample_grid(&self, counts: NodeCounts) -> Vec<Vec<f64>> {
        grid(&self.directions(), counts)
            .into_iter()
            .map(|(p, _)| p)
            .collect()
    }
}

fn rational_from_f64(v: f64) -> crate::mvcalc::Rational {
    crate::mvcalc::Rational::from_float(v).expect("finite coordinate")
}

fn subsets(n: usize, k: usize) -> Vec<Index> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Index, out: &mut Vec<Index>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransversalityReport {
    pub is_transversal: bool,
    pub codim: usize,
    /// `(t, ⟨Ω, π^q ∧ τ⟩)` on the sample grid.
    pub samples: Vec<(Vec<f64>, f64)>,
    pub sign_constant: bool,
    pub min_abs: f64,
}

impl TransversalityReport {
    pub fn sign(&self) -> i32 {
        match self.samples.first() {
            Some((_, v)) if self.sign_constant && *v > 0.0 => 1,
            Some((_, v)) if self.sign_constant && *v < 0.0 => -1,
            _ => 0,
        }
    }

    /// The sample of smallest absolute determinant.
    pub fn weakest(&self) -> Option<&(Vec<f64>, f64)> {
        self.samples
            .iter()
            .min_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
    }
}

fn codimension(pi: &PoissonStructure, x: &Patch) -> Result<usize, TransversalError> {
    let m = pi.dim();
    if x.dim() > m {
        return Err(TransversalError::TooLarge {
            patch: x.dim(),
            chart: m,
        });
    }
    let c = m - x.dim();
    if c % 2 == 1 {
        return Err(TransversalError::OddCodimension(c));
    }
    Ok(c)
}

/// `⟨Ω, π^q ∧ τ⟩` at a parameter point.
fn determinant(power: &BTreeMap<Index, f64>, tau: &BTreeMap<Index, f64>) -> f64 {
    let mut acc = 0.0;
    for (i, a) in power {
        for (k, b) in tau {
            if let Some((s, _)) = merge_sign(i, k) {
                acc += f64::from(s) * a * b;
            }
        }
    }
    acc
}

pub fn transversality_check(
    pi: &PoissonStructure,
    x: &Patch,
    counts: NodeCounts,
    tol: f64,
) -> Result<TransversalityReport, TransversalError> {
    let codim = codimension(pi, x)?;
    let power = pi.bivector().power(codim / 2);
    let mut samples = Vec::new();
    let points = if x.is_point() {
        vec![Vec::new()]
    } else {
        x.sample_grid(counts)
    };
    for t in points {
        let tau = x.tangent_multivector(&t);
        let norm = tau.values().map(|v| v * v).sum::<f64>().sqrt();
        if norm <= tol {
            return Err(TransversalError::NotImmersion {
                patch: x.name().into(),
                at: t,
            });
        }
        let det = determinant(&power.eval_f64(&x.eval(&t)), &tau);
        samples.push((t, det));
    }
    let min_abs = samples
        .iter()
        .map(|(_, v)| v.abs())
        .fold(f64::INFINITY, f64::min);
    let is_transversal = min_abs > tol;
    let sign_constant =
        samples.iter().all(|(_, v)| *v > tol) || samples.iter().all(|(_, v)| *v < -tol);
    Ok(TransversalityReport {
        is_transversal,
        codim,
        samples,
        sign_constant,
        min_abs,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Pairing {
    pub value: f64,
    pub previous: f64,
    pub converged: bool,
    pub periodic_nodes: usize,
    pub interval_nodes: usize,
    /// `dα = 0` exactly; otherwise the value is a raw integral, not a
    /// pairing of classes.
    pub closed: bool,
}

/// `∫_X α|_X` with node doubling. Checks `dα = 0` first.
pub fn pair(
    alpha: &DiffForm,
    vars: &[String],
    x: &Patch,
    start: NodeCounts,
    tol: f64,
) -> Result<Pairing, TransversalError> {
    if alpha.degree() != x.dim() {
        return Err(TransversalError::TooLarge {
            patch: x.dim(),
            chart: alpha.degree(),
        });
    }
    let closed = exterior_derivative(alpha).is_zero();
    let form = ExprForm::from_form(vars, alpha);
    let r = integrate_form(&form, x, start, tol);
    Ok(Pairing {
        value: r.value,
        previous: r.previous,
        converged: r.converged,
        periodic_nodes: r.counts.periodic,
        interval_nodes: r.counts.interval,
        closed,
    })
}

fn integrate_form(form: &ExprForm, x: &Patch, start: NodeCounts, tol: f64) -> Converged {
    if x.is_point() {
        let v = x.pullback_top(form, &[]);
        return Converged {
            value: v,
            previous: v,
            counts: start,
            converged: true,
        };
    }
    integrate_until_stable(&x.directions(), start, tol, |t| x.pullback_top(form, t))
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HnptError {
    #[error("not-unimodular-certified: d ι_π μ ≠ 0 for the supplied density")]
    NotUnimodularCertified,
    #[error("not-transversal: min |⟨Ω, π^q ∧ τ⟩| = {0:e}")]
    NotTransversal(f64),
    #[error(transparent)]
    Patch(#[from] TransversalError),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HnptCertificate {
    pub q: usize,
    /// Orientation factor `(−1)^q · sign⟨Ω, π^q ∧ τ⟩` applied to the
    /// parameter orientation of `X`.
    pub orientation: i32,
    pub integral: f64,
    pub previous: f64,
    pub converged: bool,
    pub min_integrand: f64,
    pub all_positive: bool,
    pub nontrivial: bool,
}

/// Pairs `ι_{π^q} μ` with `X` in its canonical coorientation.
pub fn hnpt_certificate(
    pi: &PoissonStructure,
    mu: &Density,
    vars: &[String],
    x: &Patch,
    counts: NodeCounts,
    tol: f64,
) -> Result<HnptCertificate, HnptError> {
    if !check_invariant_density(pi, mu).invariant {
        return Err(HnptError::NotUnimodularCertified);
    }
    let tr = transversality_check(pi, x, counts, tol)?;
    if !tr.is_transversal || !tr.sign_constant {
        return Err(HnptError::NotTransversal(tr.min_abs));
    }
    let q = tr.codim / 2;
    let orientation = if q % 2 == 0 { tr.sign() } else { -tr.sign() };
    let alpha = interior_product(&pi.bivector().power(q), mu.top_form());
    let form = ExprForm::from_form(vars, &alpha);
    let eps = f64::from(orientation);
    let integrand: Vec<f64> = tr
        .samples
        .iter()
        .map(|(t, _)| eps * x.pullback_top(&form, t))
        .collect();
    let min_integrand = integrand.iter().copied().fold(f64::INFINITY, f64::min);
    let r = integrate_form(&form, x, counts, tol);
    let integral = eps * r.value;
    let all_positive = min_integrand > tol;
    Ok(HnptCertificate {
        q,
        orientation,
        integral,
        previous: eps * r.previous,
        converged: r.converged,
        min_integrand,
        all_positive,
        nontrivial: all_positive && integral > tol,
    })
}

/// Sign of the top coefficient of `π^{m/2}` at `p`.
pub fn point_coorientation(
    pi: &PoissonStructure,
    p: &[f64],
    tol: f64,
) -> Result<i32, TransversalError> {
    let m = pi.dim();
    if m % 2 == 1 {
        return Err(TransversalError::OddCodimension(m));
    }
    let v = pi.bivector().power(m / 2).top_coeff().eval_f64(p);
    if v.abs() < tol {
        return Err(TransversalError::NotATransversalPoint(v.abs()));
    }
    Ok(if v > 0.0 { 1 } else { -1 })
}
