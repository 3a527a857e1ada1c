//! Integration along the fibres of a product chart `M × F`, fibre
//! coordinates last. A term `g dx_I ∧ dθ_F` (all fibre coordinates present)
//! maps to `(∫_F g) dx_I`; all other terms map to zero.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::mvcalc::graded::Index;
use crate::mvcalc::{ExprForm, Expression};
use crate::quadrature::{integrate_vec, Direction, NodeCounts};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FiberError {
    #[error("fibre direction {0} is not a bounded interval or circle")]
    Unbounded(usize),
    #[error("form lives on a chart of dimension {form}, expected {expected}")]
    ChartMismatch { form: usize, expected: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct FiberSpec {
    pub base_dim: usize,
    pub directions: Vec<Direction>,
}

impl FiberSpec {
    pub fn total_dim(&self) -> usize {
        self.base_dim + self.directions.len()
    }
}

#[derive(Debug, Clone)]
pub struct FiberIntegral {
    spec: FiberSpec,
    counts: NodeCounts,
    degree: usize,
    /// Base index set with the fibre-top coefficient.
    components: Vec<(Index, Expression)>,
}

pub fn fiber_integrate(
    form: &ExprForm,
    spec: FiberSpec,
    counts: NodeCounts,
) -> Result<FiberIntegral, FiberError> {
    if form.dim() != spec.total_dim() {
        return Err(FiberError::ChartMismatch {
            form: form.dim(),
            expected: spec.total_dim(),
        });
    }
    for (i, d) in spec.directions.iter().enumerate() {
        if !(d.lo.is_finite() && d.hi.is_finite() && d.lo < d.hi) {
            return Err(FiberError::Unbounded(i));
        }
    }
    let k = spec.directions.len();
    let fiber_idx: Index = (spec.base_dim..spec.total_dim()).collect();
    let components = form
        .terms()
        .filter(|(idx, _)| idx.len() >= k && idx[idx.len() - k..] == fiber_idx[..])
        .map(|(idx, c)| (idx[..idx.len() - k].to_vec(), c.clone()))
        .collect();
    Ok(FiberIntegral {
        degree: form.degree().saturating_sub(k),
        spec,
        counts,
        components,
    })
}

impl FiberIntegral {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    fn integrate_at(&self, x: &[f64], coeffs: &[Expression]) -> Vec<f64> {
        let mut pt = x.to_vec();
        pt.resize(self.spec.total_dim(), 0.0);
        let b = self.spec.base_dim;
        integrate_vec(&self.spec.directions, self.counts, coeffs.len(), |theta| {
            let mut p = pt.clone();
            p[b..].copy_from_slice(theta);
            coeffs.iter().map(|c| c.eval(&p)).collect()
        })
    }

    /// Coefficients of `f_% ω` at a base point.
    pub fn eval(&self, x: &[f64]) -> BTreeMap<Index, f64> {
        let coeffs: Vec<Expression> = self.components.iter().map(|(_, c)| c.clone()).collect();
        let vals = self.integrate_at(x, &coeffs);
        let mut out = BTreeMap::new();
        for ((idx, _), v) in self.components.iter().zip(vals) {
            *out.entry(idx.clone()).or_insert(0.0) += v;
        }
        out
    }

    /// Coefficients of `d(f_% ω)` at a base point, differentiating under the
    /// integral in the base variables.
    pub fn differential_eval(&self, x: &[f64]) -> BTreeMap<Index, f64> {
        let mut keyed: Vec<(i32, Index, Expression)> = Vec::new();
        for (idx, c) in &self.components {
            for i in 0..self.spec.base_dim {
                if let Some((s, merged)) = crate::mvcalc::graded::merge_sign(&[i], idx) {
                    keyed.push((s, merged, c.diff(i)));
                }
            }
        }
        let coeffs: Vec<Expression> = keyed.iter().map(|(_, _, e)| e.clone()).collect();
        let vals = self.integrate_at(x, &coeffs);
        let mut out = BTreeMap::new();
        for ((s, idx, _), v) in keyed.iter().zip(vals) {
            *out.entry(idx.clone()).or_insert(0.0) += f64::from(*s) * v;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mvcalc::parse_expr;
    use std::f64::consts::PI;

    fn chart() -> Vec<String> {
        ["x", "theta"].iter().map(|s| s.to_string()).collect()
    }

    fn circle() -> FiberSpec {
        FiberSpec {
            base_dim: 1,
            directions: vec![Direction::periodic(0.0, 2.0 * PI)],
        }
    }

    fn counts() -> NodeCounts {
        NodeCounts {
            periodic: 64,
            interval: 16,
        }
    }

    #[test]
    fn circumference() {
        let v = chart();
        let mut w = ExprForm::zero(&v, 1);
        w.push(vec![1], parse_expr("1", &v, false).unwrap());
        let f = fiber_integrate(&w, circle(), counts()).unwrap();
        assert_eq!(f.degree(), 0);
        assert!((f.eval(&[0.3])[&vec![]] - 2.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn no_fibre_component() {
        let v = chart();
        let mut w = ExprForm::zero(&v, 1);
        w.push(vec![0], parse_expr("x", &v, false).unwrap());
        assert!(fiber_integrate(&w, circle(), counts()).unwrap().is_zero());
    }

    #[test]
    fn sin_squared_with_fibre_last() {
        let v = chart();
        let mut w = ExprForm::zero(&v, 2);
        w.push(vec![0, 1], parse_expr("sin(theta)^2", &v, true).unwrap());
        let f = fiber_integrate(&w, circle(), counts()).unwrap();
        assert!((f.eval(&[1.7])[&vec![0]] - PI).abs() < 1e-12);
    }

    #[test]
    fn unbounded_rejected() {
        let v = chart();
        let w = ExprForm::zero(&v, 1);
        let spec = FiberSpec {
            base_dim: 1,
            directions: vec![Direction::interval(0.0, f64::INFINITY)],
        };
        assert_eq!(
            fiber_integrate(&w, spec, counts()).unwrap_err(),
            FiberError::Unbounded(0)
        );
    }
}
