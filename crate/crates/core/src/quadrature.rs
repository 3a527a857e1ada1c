//! Tensor-product quadrature over boxes whose sides are periodic (trapezoid
//! rule) or closed intervals (Gauss–Legendre), with node doubling.

use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use serde::{Deserialize, Serialize};

pub const DEFAULT_PERIODIC_NODES: usize = 256;
pub const DEFAULT_INTERVAL_NODES: usize = 64;
const MAX_DOUBLINGS: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Direction {
    pub lo: f64,
    pub hi: f64,
    pub periodic: bool,
}

impl Direction {
    pub fn periodic(lo: f64, hi: f64) -> Self {
        Self {
            lo,
            hi,
            periodic: true,
        }
    }

    pub fn interval(lo: f64, hi: f64) -> Self {
        Self {
            lo,
            hi,
            periodic: false,
        }
    }

    /// Nodes and weights for `n` points on this side.
    pub fn rule(&self, n: usize) -> Vec<(f64, f64)> {
        let n = n.max(1);
        let len = self.hi - self.lo;
        if self.periodic {
            let h = len / n as f64;
            (0..n).map(|i| (self.lo + h * i as f64, h)).collect()
        } else {
            let gl = GaussLegendre::new(NonZeroUsize::new(n).expect("n >= 1"));
            gl.as_node_weight_pairs()
                .iter()
                .map(|&(x, w)| (self.lo + 0.5 * len * (x + 1.0), 0.5 * len * w))
                .collect()
        }
    }
}

/// Node counts per kind of side.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NodeCounts {
    pub periodic: usize,
    pub interval: usize,
}

impl Default for NodeCounts {
    fn default() -> Self {
        Self {
            periodic: DEFAULT_PERIODIC_NODES,
            interval: DEFAULT_INTERVAL_NODES,
        }
    }
}

impl NodeCounts {
    pub fn doubled(self) -> Self {
        Self {
            periodic: self.periodic * 2,
            interval: self.interval * 2,
        }
    }
}

/// Every grid point of the tensor rule with its product weight.
pub fn grid(dirs: &[Direction], counts: NodeCounts) -> Vec<(Vec<f64>, f64)> {
    let mut pts: Vec<(Vec<f64>, f64)> = vec![(Vec::new(), 1.0)];
    for d in dirs {
        let rule = d.rule(if d.periodic {
            counts.periodic
        } else {
            counts.interval
        });
        pts = pts
            .into_iter()
            .flat_map(|(p, w)| {
                rule.iter().map(move |&(x, wx)| {
                    let mut q = p.clone();
                    q.push(x);
                    (q, w * wx)
                })
            })
            .collect();
    }
    pts
}

/// Integrates a vector-valued integrand of fixed length `len`.
pub fn integrate_vec(
    dirs: &[Direction],
    counts: NodeCounts,
    len: usize,
    f: impl Fn(&[f64]) -> Vec<f64>,
) -> Vec<f64> {
    let mut acc = vec![0.0; len];
    for (p, w) in grid(dirs, counts) {
        for (a, v) in acc.iter_mut().zip(f(&p)) {
            *a += w * v;
        }
    }
    acc
}

pub fn integrate(dirs: &[Direction], counts: NodeCounts, f: impl Fn(&[f64]) -> f64) -> f64 {
    integrate_vec(dirs, counts, 1, |p| vec![f(p)])[0]
}

#[derive(Clone, Debug, PartialEq)]
pub struct Converged {
    pub value: f64,
    /// Value at the previous (halved) node count.
    pub previous: f64,
    pub counts: NodeCounts,
    pub converged: bool,
}

/// Doubles node counts until two successive values agree within `tol`.
pub fn integrate_until_stable(
    dirs: &[Direction],
    start: NodeCounts,
    tol: f64,
    f: impl Fn(&[f64]) -> f64,
) -> Converged {
    let mut counts = start;
    let mut previous = integrate(dirs, counts, &f);
    for _ in 0..MAX_DOUBLINGS {
        counts = counts.doubled();
        let value = integrate(dirs, counts, &f);
        if (value - previous).abs() <= tol * value.abs().max(1.0) {
            return Converged {
                value,
                previous,
                counts,
                converged: true,
            };
        }
        previous = value;
    }
    Converged {
        value: previous,
        previous,
        counts,
        converged: false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn trapezoid_is_spectral_on_trig_polynomials() {
        let d = [Direction::periodic(0.0, 2.0 * PI)];
        let v = integrate(
            &d,
            NodeCounts {
                periodic: 64,
                interval: 1,
            },
            |t| t[0].sin().powi(2),
        );
        assert!((v - PI).abs() < 1e-13);
    }

    #[test]
    fn gauss_legendre_interval() {
        let d = [Direction::interval(0.0, 2.0)];
        let v = integrate(
            &d,
            NodeCounts {
                periodic: 1,
                interval: 8,
            },
            |t| t[0].powi(5),
        );
        assert!((v - 64.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn tensor_product_and_doubling() {
        let d = [
            Direction::periodic(0.0, 2.0 * PI),
            Direction::interval(-1.0, 1.0),
        ];
        let r = integrate_until_stable(
            &d,
            NodeCounts {
                periodic: 16,
                interval: 8,
            },
            1e-12,
            |t| t[0].cos().powi(2) * t[1].powi(2),
        );
        assert!(r.converged);
        assert!((r.value - PI * 2.0 / 3.0).abs() < 1e-12);
    }
}
