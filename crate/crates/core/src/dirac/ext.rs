//! Exterior algebra of a rational vector space of dimension `n ≤ 16`,
//! stored densely with bitmask-indexed basis `e_S`.

use num_traits::{One, Zero};

use crate::linalg::{self, Matrix};
use crate::mvcalc::graded::contract_basis;
use crate::mvcalc::{fmt_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ext {
    n: usize,
    c: Vec<Rational>,
}

fn below(mask: u32, i: usize) -> u32 {
    (mask & ((1u32 << i) - 1)).count_ones()
}

fn indices(mask: u32) -> Vec<usize> {
    (0..32).filter(|i| mask & (1 << i) != 0).collect()
}

fn mask_of(idx: &[usize]) -> u32 {
    idx.iter().fold(0, |m, &i| m | (1 << i))
}

impl Ext {
    pub fn zero(n: usize) -> Self {
        assert!(n <= 16, "exterior algebra limited to dimension 16");
        Self {
            n,
            c: vec![Rational::zero(); 1 << n],
        }
    }

    pub fn one(n: usize) -> Self {
        Self::basis(n, 0)
    }

    pub fn basis(n: usize, mask: u32) -> Self {
        let mut e = Self::zero(n);
        e.c[mask as usize] = Rational::one();
        e
    }

    pub fn top(n: usize) -> Self {
        Self::basis(n, (1u32 << n) - 1)
    }

    pub fn from_coeffs(n: usize, c: Vec<Rational>) -> Self {
        assert_eq!(c.len(), 1 << n);
        Self { n, c }
    }

    /// `Σ v_i e_i` as a degree-one element.
    pub fn vector(v: &[Rational]) -> Self {
        let mut e = Self::zero(v.len());
        for (i, x) in v.iter().enumerate() {
            e.c[1 << i] = x.clone();
        }
        e
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.c
    }

    pub fn get(&self, mask: u32) -> &Rational {
        &self.c[mask as usize]
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Self {
            n: self.n,
            c: self.c.iter().map(|x| x * r).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            n: self.n,
            c: self.c.iter().zip(&other.c).map(|(a, b)| a + b).collect(),
        }
    }

    /// Homogeneous component of degree `k`.
    pub fn component(&self, k: usize) -> Self {
        let mut out = Self::zero(self.n);
        for (m, x) in self.c.iter().enumerate() {
            if (m as u32).count_ones() as usize == k {
                out.c[m] = x.clone();
            }
        }
        out
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self
            .c
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(m, _)| (m as u32).count_ones() as usize)
            .collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    pub fn wedge(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let mut out = Self::zero(self.n);
        for (s, a) in self.c.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (t, b) in other.c.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                if s & t != 0 {
                    continue;
                }
                let swaps: u32 = indices(t as u32)
                    .iter()
                    .map(|&j| (s as u32 >> (j + 1)).count_ones())
                    .sum();
                let v = a * b;
                if swaps.is_multiple_of(2) {
                    out.c[s | t] += v;
                } else {
                    out.c[s | t] -= v;
                }
            }
        }
        out
    }

    /// `v ∧ self` for a vector `v`.
    pub fn wedge_vector(&self, v: &[Rational]) -> Self {
        let mut out = Self::zero(self.n);
        for (i, vi) in v.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (s, a) in self.c.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
                let s = s as u32;
                if s & (1 << i) != 0 {
                    continue;
                }
                let t = vi * a;
                if below(s, i).is_multiple_of(2) {
                    out.c[(s | (1 << i)) as usize] += t;
                } else {
                    out.c[(s | (1 << i)) as usize] -= t;
                }
            }
        }
        out
    }

    /// `ι_u self` for a dual vector `u`.
    pub fn contract_vector(&self, u: &[Rational]) -> Self {
        let mut out = Self::zero(self.n);
        for (i, ui) in u.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (s, a) in self.c.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
                let s = s as u32;
                if s & (1 << i) == 0 {
                    continue;
                }
                let t = ui * a;
                if below(s, i).is_multiple_of(2) {
                    out.c[(s & !(1 << i)) as usize] += t;
                } else {
                    out.c[(s & !(1 << i)) as usize] -= t;
                }
            }
        }
        out
    }

    /// `ι_a b` with `a` in the dual algebra, `ι_{a∧a'} = ι_a ∘ ι_{a'}`.
    pub fn contract(a: &Self, b: &Self) -> Self {
        assert_eq!(a.n, b.n);
        let mut out = Self::zero(b.n);
        for (s, x) in a.c.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            let js = indices(s as u32);
            for (t, y) in b.c.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
                if let Some((sign, rest)) = contract_basis(&js, &indices(t as u32)) {
                    let v = x * y;
                    let m = mask_of(&rest) as usize;
                    if sign > 0 {
                        out.c[m] += v;
                    } else {
                        out.c[m] -= v;
                    }
                }
            }
        }
        out
    }

    /// Extends a linear map given by basis images `img[i]` (elements of the
    /// target's degree-one part) to the exterior algebra.
    pub fn map(&self, img: &[Vec<Rational>], target_dim: usize) -> Self {
        assert_eq!(img.len(), self.n);
        let mut out = Ext::zero(target_dim);
        for (s, x) in self.c.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            let mut w = Ext::one(target_dim);
            for i in indices(s as u32) {
                w = w.wedge(&Ext::vector(&img[i]));
            }
            out = out.add(&w.scale(x));
        }
        out
    }

    /// True when both are nonzero and proportional.
    pub fn same_line(&self, other: &Self) -> bool {
        if self.is_zero() || other.is_zero() {
            return false;
        }
        let m: Matrix = vec![self.c.clone(), other.c.clone()];
        linalg::rank(&m, self.c.len()) == 1
    }

    /// Renders with basis symbols `e^1…` (forms) or `e_1…` (vectors).
    pub fn display(&self, upper: bool) -> String {
        let mut parts = Vec::new();
        let mut masks: Vec<usize> = (0..self.c.len())
            .filter(|&m| !self.c[m].is_zero())
            .collect();
        masks.sort_by_key(|&m| ((m as u32).count_ones(), indices(m as u32)));
        for m in masks {
            let coeff = fmt_rational(&self.c[m]);
            let basis: Vec<String> = indices(m as u32)
                .iter()
                .map(|i| {
                    if upper {
                        format!("e^{}", i + 1)
                    } else {
                        format!("e_{}", i + 1)
                    }
                })
                .collect();
            let basis = basis.join("∧");
            let term = match (basis.is_empty(), coeff.as_str()) {
                (true, _) => coeff.clone(),
                (false, "1") => basis,
                (false, "-1") => format!("-{basis}"),
                (false, _) => format!("{coeff} {basis}"),
            };
            parts.push(term);
        }
        if parts.is_empty() {
            return "0".into();
        }
        let mut s = parts[0].clone();
        for p in &parts[1..] {
            match p.strip_prefix('-') {
                Some(rest) => {
                    s.push_str(" - ");
                    s.push_str(rest);
                }
                None => {
                    s.push_str(" + ");
                    s.push_str(p);
                }
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mvcalc::int;

    #[test]
    fn wedge_signs() {
        let e1 = Ext::basis(3, 0b001);
        let e2 = Ext::basis(3, 0b010);
        let e3 = Ext::basis(3, 0b100);
        assert_eq!(e2.wedge(&e1), e1.wedge(&e2).scale(&int(-1)));
        assert_eq!(e3.wedge(&e1.wedge(&e2)), Ext::top(3));
        assert_eq!(e2.wedge(&e1.wedge(&e3)), Ext::top(3).scale(&int(-1)));
        let v = [int(0), int(1), int(0)];
        assert_eq!(e1.wedge_vector(&v), e2.wedge(&e1));
    }

    #[test]
    fn contraction_matches_chart_convention() {
        let top = Ext::top(3);
        // ι_{e2∧e3} e^{123} = -e^1
        let a = Ext::basis(3, 0b110);
        assert_eq!(
            Ext::contract(&a, &top),
            Ext::basis(3, 0b001).scale(&int(-1))
        );
        let u = [int(0), int(0), int(1)];
        assert_eq!(top.contract_vector(&u), Ext::basis(3, 0b011));
    }

    #[test]
    fn linear_map_extension() {
        // swap e1, e2
        let img = vec![vec![int(0), int(1)], vec![int(1), int(0)]];
        assert_eq!(Ext::top(2).map(&img, 2), Ext::top(2).scale(&int(-1)));
        assert_eq!(Ext::top(2).display(true), "e^1∧e^2");
    }
}
