//! Homogeneous multivector fields and differential forms on a chart.
//!
//! Both are sparse maps from strictly increasing index tuples to polynomial
//! coefficients. `Graded<VectorKind>` uses the basis `∂_{i1}∧…∧∂_{ik}`,
//! `Graded<FormKind>` the basis `dx_{i1}∧…∧dx_{ik}`.
//!
//! Contraction convention: `ι_{u∧v} = ι_u ∘ ι_v`, and `ι_{∂_i}` removes
//! `dx_i` with sign `(-1)^(number of indices before i)`.

use std::collections::BTreeMap;
use std::fmt::Debug;
use std::marker::PhantomData;

use num_traits::One;

use super::poly::{PolyScalar, Rational};

pub trait Kind: Clone + Copy + Debug + PartialEq + Eq + Default + 'static {
    /// Renders the basis element for index `i`.
    fn basis_symbol(name: &str) -> String;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct VectorKind;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct FormKind;

impl Kind for VectorKind {
    fn basis_symbol(name: &str) -> String {
        format!("∂{name}")
    }
}

impl Kind for FormKind {
    fn basis_symbol(name: &str) -> String {
        format!("d{name}")
    }
}

pub type Index = Vec<usize>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graded<K: Kind> {
    dim: usize,
    degree: usize,
    terms: BTreeMap<Index, PolyScalar>,
    _kind: PhantomData<K>,
}

pub type Multivector = Graded<VectorKind>;
pub type DiffForm = Graded<FormKind>;

/// Sorts `idx` in place and returns the sign of the sorting permutation, or
/// `None` if an index repeats.
pub fn sort_with_sign(idx: &mut [usize]) -> Option<i32> {
    let mut sign = 1;
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(sign)
    }
}

/// Merges two increasing index tuples, returning the sign of the shuffle
/// `a ++ b -> sorted`, or `None` if they overlap.
pub fn merge_sign(a: &[usize], b: &[usize]) -> Option<(i32, Index)> {
    let mut inversions = 0usize;
    for &x in a {
        for &y in b {
            if x == y {
                return None;
            }
            if x > y {
                inversions += 1;
            }
        }
    }
    let mut out: Index = a.iter().chain(b).copied().collect();
    out.sort_unstable();
    Some((if inversions.is_multiple_of(2) { 1 } else { -1 }, out))
}

/// Contraction of the basis multivector `∂_J` into the basis form `dx_I`.
pub fn contract_basis(j: &[usize], i: &[usize]) -> Option<(i32, Index)> {
    let mut cur: Index = i.to_vec();
    let mut sign = 1;
    for &jj in j.iter().rev() {
        let pos = cur.iter().position(|&x| x == jj)?;
        if pos % 2 == 1 {
            sign = -sign;
        }
        cur.remove(pos);
    }
    Some((sign, cur))
}

fn sign_poly(p: &PolyScalar, s: i32) -> PolyScalar {
    if s < 0 {
        -p
    } else {
        p.clone()
    }
}

impl<K: Kind> Graded<K> {
    pub fn zero(dim: usize, degree: usize) -> Self {
        Self {
            dim,
            degree,
            terms: BTreeMap::new(),
            _kind: PhantomData,
        }
    }

    /// Degree-0 element (a function).
    pub fn scalar(p: PolyScalar) -> Self {
        let mut g = Self::zero(p.nvars(), 0);
        g.add_term(Vec::new(), p);
        g
    }

    pub fn one(dim: usize) -> Self {
        Self::scalar(PolyScalar::one(dim))
    }

    /// Coefficient times the basis element with the given (not necessarily
    /// sorted) indices.
    pub fn basis(dim: usize, idx: &[usize], coeff: PolyScalar) -> Self {
        let mut sorted = idx.to_vec();
        let mut g = Self::zero(dim, idx.len());
        assert!(sorted.iter().all(|&i| i < dim), "index out of range");
        if let Some(s) = sort_with_sign(&mut sorted) {
            g.add_term(sorted, sign_poly(&coeff, s));
        }
        g
    }

    pub fn from_terms(
        dim: usize,
        degree: usize,
        terms: impl IntoIterator<Item = (Index, PolyScalar)>,
    ) -> Self {
        let mut g = Self::zero(dim, degree);
        for (idx, c) in terms {
            g += &Self::basis(dim, &idx, c);
        }
        g
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Index, &PolyScalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, idx: &[usize]) -> PolyScalar {
        self.terms
            .get(idx)
            .cloned()
            .unwrap_or_else(|| PolyScalar::zero(self.dim))
    }

    /// The single coefficient of a top-degree (or degree-0) element.
    pub fn top_coeff(&self) -> PolyScalar {
        let idx: Index = (0..self.degree).collect();
        self.coeff(&idx)
    }

    fn add_term(&mut self, idx: Index, c: PolyScalar) {
        debug_assert_eq!(idx.len(), self.degree);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(idx) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, f: &PolyScalar) -> Self {
        let mut out = Self::zero(self.dim, self.degree);
        for (idx, c) in &self.terms {
            out.add_term(idx.clone(), c * f);
        }
        out
    }

    pub fn scale_rational(&self, r: &Rational) -> Self {
        let mut out = Self::zero(self.dim, self.degree);
        for (idx, c) in &self.terms {
            out.add_term(idx.clone(), c.scale(r));
        }
        out
    }

    /// Graded-commutative product. Degree overflow yields the zero object.
    pub fn wedge(&self, other: &Self) -> Self {
        assert_eq!(
            self.dim, other.dim,
            "wedge across charts of different dimension"
        );
        let mut out = Self::zero(self.dim, self.degree + other.degree);
        if self.degree + other.degree > self.dim {
            return out;
        }
        for (a, fa) in &self.terms {
            for (b, fb) in &other.terms {
                if let Some((s, idx)) = merge_sign(a, b) {
                    out.add_term(idx, sign_poly(&(fa * fb), s));
                }
            }
        }
        out
    }

    /// Differentiates every coefficient with respect to coordinate `i`.
    pub fn partial(&self, i: usize) -> Self {
        let mut out = Self::zero(self.dim, self.degree);
        for (idx, c) in &self.terms {
            out.add_term(idx.clone(), c.partial(i));
        }
        out
    }

    /// Evaluates every coefficient at a numeric point.
    pub fn eval_f64(&self, x: &[f64]) -> BTreeMap<Index, f64> {
        self.terms
            .iter()
            .map(|(idx, c)| (idx.clone(), c.eval_f64(x)))
            .collect()
    }

    /// Pulls coefficients back along a polynomial substitution of the
    /// coordinates (the basis elements are left untouched).
    pub fn compose_coefficients(&self, subs: &[PolyScalar]) -> Self {
        let mut out = Self::zero(self.dim, self.degree);
        for (idx, c) in &self.terms {
            out.add_term(idx.clone(), c.compose(subs));
        }
        out
    }

    pub fn display(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(idx, c)| {
                let coeff = c.display(names);
                if idx.is_empty() {
                    return coeff;
                }
                let basis: Vec<String> = idx.iter().map(|&i| K::basis_symbol(&names[i])).collect();
                let basis = basis.join("∧");
                match coeff.as_str() {
                    "1" => basis,
                    "-1" => format!("-{basis}"),
                    _ if c.num_terms() == 1 && !coeff.contains(' ') => format!("{coeff} {basis}"),
                    _ => format!("({coeff}) {basis}"),
                }
            })
            .collect();
        let mut s = parts[0].clone();
        for p in &parts[1..] {
            if let Some(rest) = p.strip_prefix('-') {
                s.push_str(" - ");
                s.push_str(rest);
            } else {
                s.push_str(" + ");
                s.push_str(p);
            }
        }
        s
    }
}

impl<K: Kind> std::ops::AddAssign<&Graded<K>> for Graded<K> {
    fn add_assign(&mut self, rhs: &Graded<K>) {
        assert_eq!(
            self.degree, rhs.degree,
            "adding elements of different degree"
        );
        for (idx, c) in &rhs.terms {
            self.add_term(idx.clone(), c.clone());
        }
    }
}

impl<K: Kind> std::ops::SubAssign<&Graded<K>> for Graded<K> {
    fn sub_assign(&mut self, rhs: &Graded<K>) {
        assert_eq!(
            self.degree, rhs.degree,
            "subtracting elements of different degree"
        );
        for (idx, c) in &rhs.terms {
            self.add_term(idx.clone(), -c);
        }
    }
}

impl<K: Kind> std::ops::Add for &Graded<K> {
    type Output = Graded<K>;
    fn add(self, rhs: &Graded<K>) -> Graded<K> {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<K: Kind> std::ops::Sub for &Graded<K> {
    type Output = Graded<K>;
    fn sub(self, rhs: &Graded<K>) -> Graded<K> {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<K: Kind> std::ops::Neg for &Graded<K> {
    type Output = Graded<K>;
    fn neg(self) -> Graded<K> {
        let mut out = Graded::zero(self.dim, self.degree);
        for (idx, c) in &self.terms {
            out.add_term(idx.clone(), -c);
        }
        out
    }
}

impl Multivector {
    /// The coordinate vector field `∂_i`.
    pub fn coordinate_field(dim: usize, i: usize) -> Self {
        Self::basis(dim, &[i], PolyScalar::one(dim))
    }

    /// Right derivative with respect to the odd variable `θ_i ↔ ∂_i`: moves
    /// `∂_i` to the last slot and drops it.
    fn right_odd_derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(self.dim, self.degree.saturating_sub(1));
        if self.degree == 0 {
            return out;
        }
        for (idx, c) in &self.terms {
            if let Some(pos) = idx.iter().position(|&x| x == i) {
                let moves = idx.len() - 1 - pos;
                let mut rest = idx.clone();
                rest.remove(pos);
                out.add_term(rest, sign_poly(c, if moves % 2 == 0 { 1 } else { -1 }));
            }
        }
        out
    }

    /// π^k = π ∧ … ∧ π (k factors); π^0 is the constant 1.
    pub fn power(&self, k: usize) -> Self {
        let mut acc = Self::one(self.dim);
        for _ in 0..k {
            acc = acc.wedge(self);
        }
        acc
    }

    /// Applies the vector field (degree 1) to a function.
    pub fn apply(&self, f: &PolyScalar) -> PolyScalar {
        assert_eq!(self.degree, 1);
        let mut out = PolyScalar::zero(self.dim);
        for (idx, c) in &self.terms {
            out += &(c * &f.partial(idx[0]));
        }
        out
    }
}

/// ι_W η. Degree overflow (`deg W > deg η`) yields the zero form.
pub fn interior_product(w: &Multivector, eta: &DiffForm) -> DiffForm {
    assert_eq!(
        w.dim(),
        eta.dim(),
        "contraction across charts of different dimension"
    );
    let dim = eta.dim();
    if w.degree() > eta.degree() {
        return DiffForm::zero(dim, 0);
    }
    let mut out = DiffForm::zero(dim, eta.degree() - w.degree());
    for (j, fw) in w.terms() {
        for (i, fe) in eta.terms() {
            if let Some((s, rest)) = contract_basis(j, i) {
                out.add_term(rest, sign_poly(&(fw * fe), s));
            }
        }
    }
    out
}

/// Exterior derivative `d(f dx_I) = Σ_i ∂_i f dx_i ∧ dx_I`.
pub fn exterior_derivative(eta: &DiffForm) -> DiffForm {
    let dim = eta.dim();
    let mut out = DiffForm::zero(dim, eta.degree() + 1);
    if eta.degree() >= dim {
        return out;
    }
    for (idx, c) in eta.terms() {
        for i in 0..dim {
            if idx.contains(&i) {
                continue;
            }
            let df = c.partial(i);
            if df.is_zero() {
                continue;
            }
            if let Some((s, merged)) = merge_sign(&[i], idx) {
                out.add_term(merged, sign_poly(&df, s));
            }
        }
    }
    out
}

/// Differential of a function as a 1-form.
pub fn differential(f: &PolyScalar) -> DiffForm {
    exterior_derivative(&DiffForm::scalar(f.clone()))
}

/// Schouten–Nijenhuis bracket, in the convention where `[X, f] = X(f)` and
/// on vector fields it is the Lie bracket:
///
/// `[P, Q] = Σ_i (P ←∂_{θ_i}) ∧ ∂_{x_i} Q − (−1)^{(p−1)(q−1)} (Q ←∂_{θ_i}) ∧ ∂_{x_i} P`.
pub fn schouten_bracket(p: &Multivector, q: &Multivector) -> Multivector {
    assert_eq!(
        p.dim(),
        q.dim(),
        "bracket across charts of different dimension"
    );
    let dim = p.dim();
    let (dp, dq) = (p.degree(), q.degree());
    let out_degree = (dp + dq).saturating_sub(1);
    let mut out = Multivector::zero(dim, out_degree);
    if dp + dq == 0 || out_degree > dim {
        return out;
    }
    let sign_odd = ((dp as i64 - 1) * (dq as i64 - 1)).rem_euclid(2) == 1;
    for i in 0..dim {
        if dp > 0 {
            let t = p.right_odd_derivative(i).wedge(&q.partial(i));
            out += &t;
        }
        if dq > 0 {
            let t = q.right_odd_derivative(i).wedge(&p.partial(i));
            if sign_odd {
                out += &t;
            } else {
                out -= &t;
            }
        }
    }
    out
}

/// π♯(ξ) for a bivector π and 1-form ξ: contraction of ξ into the first slot,
/// so that `π♯(dx_i) = Σ_j π^{ij} ∂_j`.
pub fn sharp(pi: &Multivector, xi: &DiffForm) -> Multivector {
    assert_eq!(pi.degree(), 2);
    assert_eq!(xi.degree(), 1);
    let dim = pi.dim();
    let mut out = Multivector::zero(dim, 1);
    for (idx, c) in pi.terms() {
        let (i, j) = (idx[0], idx[1]);
        let xi_i = xi.coeff(&[i]);
        let xi_j = xi.coeff(&[j]);
        out += &Multivector::basis(dim, &[j], c * &xi_i);
        out -= &Multivector::basis(dim, &[i], c * &xi_j);
    }
    out
}

/// The Euler vector field `Σ x_i ∂_i`.
pub fn euler_field(dim: usize) -> Multivector {
    let mut e = Multivector::zero(dim, 1);
    for i in 0..dim {
        e += &Multivector::basis(dim, &[i], PolyScalar::var(dim, i));
    }
    e
}

/// Coordinate volume form `dx_1 ∧ … ∧ dx_m` scaled by `g`.
pub fn volume_form(dim: usize, g: PolyScalar) -> DiffForm {
    let idx: Index = (0..dim).collect();
    DiffForm::basis(dim, &idx, g)
}

/// Unit coefficient constructor for readability in tests and catalog code.
pub fn unit(dim: usize) -> PolyScalar {
    PolyScalar::constant(dim, Rational::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mvcalc::poly::{int, rat};

    fn names3() -> Vec<String> {
        ["x", "y", "z"].iter().map(|s| s.to_string()).collect()
    }

    fn so3() -> Multivector {
        let x = PolyScalar::var(3, 0);
        let y = PolyScalar::var(3, 1);
        let z = PolyScalar::var(3, 2);
        &(&Multivector::basis(3, &[1, 2], x) + &Multivector::basis(3, &[2, 0], y))
            + &Multivector::basis(3, &[0, 1], z)
    }

    #[test]
    fn wedge_basics() {
        let dx = Multivector::coordinate_field(3, 0);
        let dy = Multivector::coordinate_field(3, 1);
        assert_eq!(dx.wedge(&dy), Multivector::basis(3, &[0, 1], unit(3)));
        assert!(dx.wedge(&dx).is_zero());
        let xdx = DiffForm::basis(3, &[0], PolyScalar::var(3, 0));
        let ydy = DiffForm::basis(3, &[1], PolyScalar::var(3, 1));
        let xy = &PolyScalar::var(3, 0) * &PolyScalar::var(3, 1);
        assert_eq!(xdx.wedge(&ydy), DiffForm::basis(3, &[0, 1], xy));
    }

    #[test]
    fn degree_overflow_is_zero() {
        let top = volume_form(3, unit(3));
        let dx = DiffForm::basis(3, &[0], unit(3));
        let w = top.wedge(&dx);
        assert!(w.is_zero());
        assert_eq!(w.degree(), 4);
    }

    #[test]
    fn contraction_examples() {
        let mu = volume_form(3, unit(3));
        let dz = Multivector::coordinate_field(3, 2);
        assert_eq!(
            interior_product(&dz, &mu),
            DiffForm::basis(3, &[0, 1], unit(3))
        );
        let dydz = Multivector::basis(3, &[1, 2], unit(3));
        assert_eq!(
            interior_product(&dydz, &mu),
            DiffForm::basis(3, &[0], int(-1).into_poly(3))
        );
        let expected = &(&DiffForm::basis(3, &[0], -PolyScalar::var(3, 0))
            + &DiffForm::basis(3, &[1], -PolyScalar::var(3, 1)))
            + &DiffForm::basis(3, &[2], -PolyScalar::var(3, 2));
        let got = interior_product(&so3(), &mu);
        assert_eq!(got, expected);
        assert_eq!(got.display(&names3()), "-x dx - y dy - z dz");
        // k > p gives zero
        assert!(interior_product(&dydz, &DiffForm::basis(3, &[0], unit(3))).is_zero());
    }

    trait IntoPoly {
        fn into_poly(self, n: usize) -> PolyScalar;
    }
    impl IntoPoly for Rational {
        fn into_poly(self, n: usize) -> PolyScalar {
            PolyScalar::constant(n, self)
        }
    }

    #[test]
    fn exterior_derivative_examples() {
        let x = PolyScalar::var(3, 0);
        let y = PolyScalar::var(3, 1);
        let eta = &DiffForm::basis(3, &[1], x) - &DiffForm::basis(3, &[0], y);
        assert_eq!(
            exterior_derivative(&eta),
            DiffForm::basis(3, &[0, 1], int(2).into_poly(3))
        );
        let mu = volume_form(3, unit(3));
        let alpha = interior_product(&so3(), &mu);
        assert!(exterior_derivative(&alpha).is_zero());
        assert!(exterior_derivative(&volume_form(3, rat(7, 3).into_poly(3))).is_zero());
    }

    #[test]
    fn schouten_examples() {
        let dx = Multivector::coordinate_field(3, 0);
        let dy = Multivector::coordinate_field(3, 1);
        assert!(schouten_bracket(&dx, &dy).is_zero());
        let c = Multivector::basis(3, &[0, 1], unit(3));
        assert!(schouten_bracket(&c, &c).is_zero());
        assert!(schouten_bracket(&so3(), &so3()).is_zero());
        // [X, f] = X(f)
        let f = &PolyScalar::var(3, 0) * &PolyScalar::var(3, 1);
        let xf = schouten_bracket(&dx, &Multivector::scalar(f.clone()));
        assert_eq!(xf, Multivector::scalar(PolyScalar::var(3, 1)));
        // Lie bracket [x∂y, ∂x] = -∂y
        let xdy = Multivector::basis(3, &[1], PolyScalar::var(3, 0));
        assert_eq!(
            schouten_bracket(&xdy, &dx),
            Multivector::basis(3, &[1], int(-1).into_poly(3))
        );
    }

    #[test]
    fn non_poisson_bracket_nonzero() {
        // y ∂y∧∂z + ∂x∧∂y
        let b = &Multivector::basis(3, &[1, 2], PolyScalar::var(3, 1))
            + &Multivector::basis(3, &[0, 1], unit(3));
        let br = schouten_bracket(&b, &b);
        assert_eq!(br.degree(), 3);
        assert!(!br.is_zero());
    }

    #[test]
    fn powers() {
        let pi =
            &Multivector::basis(4, &[0, 1], unit(4)) + &Multivector::basis(4, &[2, 3], unit(4));
        assert_eq!(
            pi.power(2),
            Multivector::basis(4, &[0, 1, 2, 3], int(2).into_poly(4))
        );
        assert_eq!(pi.power(0), Multivector::one(4));
        assert!(pi.power(3).is_zero());
        let s2 = Multivector::basis(2, &[0, 1], PolyScalar::var(2, 0));
        assert_eq!(s2.power(1), s2);
    }

    #[test]
    fn sharp_matches_bracket_convention() {
        let pi = Multivector::basis(2, &[0, 1], unit(2));
        let x = PolyScalar::var(2, 0);
        let xf = sharp(&pi, &differential(&x));
        assert_eq!(xf, Multivector::coordinate_field(2, 1));
    }
}
