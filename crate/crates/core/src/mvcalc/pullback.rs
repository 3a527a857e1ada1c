//! Forms with expression coefficients (trigonometric allowed) and their
//! pullback along parametrised maps, evaluated numerically.

use std::collections::BTreeMap;

use super::expr::Expression;
use super::graded::{merge_sign, DiffForm, Index};

/// A homogeneous differential form whose coefficients are expressions in the
/// chart variables.
#[derive(Clone, Debug)]
pub struct ExprForm {
    vars: Vec<String>,
    degree: usize,
    terms: BTreeMap<Index, Expression>,
}

impl ExprForm {
    pub fn zero(vars: &[String], degree: usize) -> Self {
        Self {
            vars: vars.to_vec(),
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_form(vars: &[String], form: &DiffForm) -> Self {
        let mut out = Self::zero(vars, form.degree());
        for (idx, c) in form.terms() {
            out.terms
                .insert(idx.clone(), Expression::from_poly(vars, c));
        }
        out
    }

    /// Adds `coeff · dx_idx`; `idx` must be strictly increasing.
    pub fn push(&mut self, idx: Index, coeff: Expression) {
        assert_eq!(idx.len(), self.degree);
        assert!(
            idx.windows(2).all(|w| w[0] < w[1]),
            "index tuple must be increasing"
        );
        let entry = match self.terms.remove(&idx) {
            Some(prev) => prev.add(&coeff),
            None => coeff,
        };
        if !entry.is_zero() {
            self.terms.insert(idx, entry);
        }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn dim(&self) -> usize {
        self.vars.len()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Index, &Expression)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn exterior_derivative(&self) -> Self {
        let mut out = Self::zero(&self.vars, self.degree + 1);
        for (idx, c) in &self.terms {
            for i in 0..self.dim() {
                if let Some((s, merged)) = merge_sign(&[i], idx) {
                    let d = c.diff(i);
                    if d.is_zero() {
                        continue;
                    }
                    out.push(merged, if s < 0 { d.neg() } else { d });
                }
            }
        }
        out
    }

    pub fn eval(&self, x: &[f64]) -> BTreeMap<Index, f64> {
        self.terms
            .iter()
            .map(|(i, c)| (i.clone(), c.eval(x)))
            .collect()
    }

    pub fn display(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(idx, c)| {
                let basis: Vec<String> =
                    idx.iter().map(|&i| format!("d{}", self.vars[i])).collect();
                if idx.is_empty() {
                    c.to_string()
                } else {
                    format!("({c}) {}", basis.join("∧"))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// A parametrised map `φ: U ⊂ ℝ^d → chart`, each component an expression in
/// the parameters, with exact symbolic Jacobian.
#[derive(Clone, Debug)]
pub struct ParamMap {
    params: Vec<String>,
    components: Vec<Expression>,
    jacobian: Vec<Vec<Expression>>,
}

impl ParamMap {
    pub fn new(params: &[String], components: Vec<Expression>) -> Self {
        let jacobian = components
            .iter()
            .map(|c| (0..params.len()).map(|j| c.diff(j)).collect())
            .collect();
        Self {
            params: params.to_vec(),
            components,
            jacobian,
        }
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    pub fn source_dim(&self) -> usize {
        self.params.len()
    }

    pub fn target_dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Expression] {
        &self.components
    }

    pub fn eval(&self, t: &[f64]) -> Vec<f64> {
        self.components.iter().map(|c| c.eval(t)).collect()
    }

    /// `J[i][j] = ∂φ_i/∂t_j`.
    pub fn jacobian(&self, t: &[f64]) -> Vec<Vec<f64>> {
        self.jacobian
            .iter()
            .map(|row| row.iter().map(|e| e.eval(t)).collect())
            .collect()
    }
}

/// Determinant by partial-pivot elimination.
pub fn det_f64(mut m: Vec<Vec<f64>>) -> f64 {
    let n = m.len();
    let mut det = 1.0;
    for c in 0..n {
        let p = (c..n)
            .max_by(|&a, &b| m[a][c].abs().total_cmp(&m[b][c].abs()))
            .unwrap_or(c);
        if m[p][c] == 0.0 {
            return 0.0;
        }
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det *= m[c][c];
        for r in c + 1..n {
            let f = m[r][c] / m[c][c];
            for k in c..n {
                m[r][k] -= f * m[c][k];
            }
        }
    }
    det
}

fn subsets(n: usize, k: usize) -> Vec<Index> {
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
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Pullback `φ^*η` evaluated at parameter point `t`, as coefficients on
/// `dt_K` for increasing `K`.
pub fn pullback_eval(eta: &ExprForm, phi: &ParamMap, t: &[f64]) -> BTreeMap<Index, f64> {
    assert_eq!(
        eta.dim(),
        phi.target_dim(),
        "map target must match form chart"
    );
    let x = phi.eval(t);
    let jac = phi.jacobian(t);
    let mut out = BTreeMap::new();
    for k in subsets(phi.source_dim(), eta.degree()) {
        let mut acc = 0.0;
        for (idx, c) in eta.terms() {
            let minor: Vec<Vec<f64>> = idx
                .iter()
                .map(|&r| k.iter().map(|&col| jac[r][col]).collect())
                .collect();
            let d = det_f64(minor);
            if d != 0.0 {
                acc += c.eval(&x) * d;
            }
        }
        out.insert(k, acc);
    }
    out
}

/// Value of a pulled-back top-degree form on the parameter domain: the single
/// coefficient of `dt_1∧…∧dt_d`.
pub fn pullback_top(eta: &ExprForm, phi: &ParamMap, t: &[f64]) -> f64 {
    assert_eq!(
        eta.degree(),
        phi.source_dim(),
        "form degree must equal parameter count"
    );
    let key: Index = (0..phi.source_dim()).collect();
    pullback_eval(eta, phi, t).get(&key).copied().unwrap_or(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mvcalc::expr::parse_expr;

    fn v(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn circle_pullback_of_area_one_form() {
        let chart = v(&["x", "y"]);
        let mut eta = ExprForm::zero(&chart, 1);
        eta.push(vec![0], parse_expr("-y", &chart, false).unwrap());
        eta.push(vec![1], parse_expr("x", &chart, false).unwrap());
        let params = v(&["t"]);
        let phi = ParamMap::new(
            &params,
            vec![
                parse_expr("cos(t)", &params, true).unwrap(),
                parse_expr("sin(t)", &params, true).unwrap(),
            ],
        );
        for &t in &[0.0, 0.3, 2.0] {
            assert!((pullback_top(&eta, &phi, &[t]) - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn d_squared_zero_with_trig() {
        let chart = v(&["x", "y", "z"]);
        let mut eta = ExprForm::zero(&chart, 1);
        eta.push(vec![0], parse_expr("sin(x*y) + z^2", &chart, true).unwrap());
        eta.push(vec![2], parse_expr("cos(y)*x", &chart, true).unwrap());
        let dd = eta.exterior_derivative().exterior_derivative();
        for x in [[0.1, 0.7, -1.3], [2.0, -0.4, 0.9]] {
            assert!(dd.eval(&x).values().all(|c| c.abs() < 1e-12));
        }
    }

    #[test]
    fn det_small() {
        assert_eq!(det_f64(vec![vec![0.0, 1.0], vec![1.0, 0.0]]), -1.0);
        assert!(
            (det_f64(vec![
                vec![2.0, 1.0, 0.0],
                vec![1.0, 3.0, 1.0],
                vec![0.0, 1.0, 4.0]
            ]) - 18.0)
                .abs()
                < 1e-12
        );
    }
}
