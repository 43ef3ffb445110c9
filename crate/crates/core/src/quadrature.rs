//! Gauss-Hermite rules for integrating against the standard Gaussian density.
//!
//! Nodes are the roots of the probabilists' `He_q`, weights are the
//! Christoffel numbers `1 / sum_{j<q} h_j(x)^2` of the orthonormal
//! polynomials, so that `sum w_j f(x_j) ~ E[f(Z)]` for `Z ~ N(0, 1)`.

use alloc::vec::Vec;
use core::fmt;

use crate::error::guard;
use crate::Result;

/// Smallest and largest accepted 1-D orders.
pub const MIN_ORDER: usize = 2;
/// See [`MIN_ORDER`].
pub const MAX_ORDER: usize = 256;
/// Largest tensor-product dimension.
pub const MAX_DIMENSION: usize = 4;
/// Default order for single-factor pricing.
pub const DEFAULT_ORDER: usize = 64;

/// Nodes and weights on `R^dim` for the standard Gaussian measure.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    dim: usize,
    order: usize,
    // row-major, `dim` values per node
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

/// An integrand failure, tagged with the node it happened at.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeError<E> {
    /// Position of the node in the rule.
    pub index: usize,
    /// The node's coordinates.
    pub node: Vec<f64>,
    /// The integrand's error.
    pub source: E,
}

impl<E: fmt::Display> fmt::Display for NodeError<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at quadrature node {} {:?}: {}", self.index, self.node, self.source)
    }
}

impl<E: fmt::Debug + fmt::Display> core::error::Error for NodeError<E> {}

impl QuadratureRule {
    /// One-dimensional Gauss-Hermite rule with `order` nodes, exact for
    /// polynomials of degree up to `2 order - 1`.
    pub fn gauss_hermite(order: usize) -> Result<Self> {
        guard("quadrature order", order, MIN_ORDER, MAX_ORDER)?;
        let (nodes, weights) = hermite_roots(order);
        Ok(QuadratureRule {
            dim: 1,
            order,
            nodes,
            weights,
        })
    }

    /// Full tensor product of a 1-D rule with itself `dim` times.
    pub fn tensor(&self, dim: usize) -> Result<Self> {
        guard("quadrature dimension", dim, 1, MAX_DIMENSION)?;
        if self.dim != 1 {
            return Err(crate::Error::DimensionMismatch {
                expected: 1,
                found: self.dim,
            });
        }
        let q = self.weights.len();
        let count = q.pow(dim as u32);
        let mut nodes = Vec::with_capacity(count * dim);
        let mut weights = Vec::with_capacity(count);
        let mut idx = alloc::vec![0usize; dim];
        for _ in 0..count {
            let mut w = 1.0;
            for &i in &idx {
                nodes.push(self.nodes[i]);
                w *= self.weights[i];
            }
            weights.push(w);
            // odometer, last coordinate fastest
            for d in (0..dim).rev() {
                idx[d] += 1;
                if idx[d] < q {
                    break;
                }
                idx[d] = 0;
            }
        }
        Ok(QuadratureRule {
            dim,
            order: self.order,
            nodes,
            weights,
        })
    }

    /// Gauss-Hermite rule of `order` per axis on `R^dim`.
    pub fn for_factors(order: usize, dim: usize) -> Result<Self> {
        let rule = Self::gauss_hermite(order)?;
        if dim == 1 {
            Ok(rule)
        } else {
            rule.tensor(dim)
        }
    }

    /// Dimension of the nodes.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Per-axis order.
    pub fn order(&self) -> usize {
        self.order
    }

    /// Number of nodes.
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    /// Always false for a constructed rule.
    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Coordinates of node `j`.
    pub fn node(&self, j: usize) -> &[f64] {
        &self.nodes[j * self.dim..(j + 1) * self.dim]
    }

    /// The weights, in node order.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `(node, weight)` pairs in node order.
    pub fn iter(&self) -> impl Iterator<Item = (&[f64], f64)> + '_ {
        self.nodes.chunks_exact(self.dim).zip(self.weights.iter().copied())
    }

    /// `sum_j w_j f(x_j)`, summed in node order.
    pub fn integrate<F: FnMut(&[f64]) -> f64>(&self, mut f: F) -> f64 {
        self.iter().fold(0.0, |acc, (x, w)| acc + w * f(x))
    }

    /// Fallible [`integrate`](Self::integrate); the first failure is returned
    /// with its node.
    pub fn try_integrate<E, F>(&self, mut f: F) -> core::result::Result<f64, NodeError<E>>
    where
        F: FnMut(&[f64]) -> core::result::Result<f64, E>,
    {
        let mut acc = 0.0;
        for (index, (x, w)) in self.iter().enumerate() {
            match f(x) {
                Ok(v) => acc += w * v,
                Err(source) => {
                    return Err(NodeError {
                        index,
                        node: x.to_vec(),
                        source,
                    })
                }
            }
        }
        Ok(acc)
    }
}

/// Free-function form of [`QuadratureRule::try_integrate`].
pub fn integrate_gaussian<E, F>(f: F, rule: &QuadratureRule) -> core::result::Result<f64, NodeError<E>>
where
    F: FnMut(&[f64]) -> core::result::Result<f64, E>,
{
    rule.try_integrate(f)
}

/// Free-function form of [`QuadratureRule::gauss_hermite`].
pub fn gauss_hermite_rule(order: usize) -> Result<QuadratureRule> {
    QuadratureRule::gauss_hermite(order)
}

/// Free-function form of [`QuadratureRule::tensor`].
pub fn tensor_rule(rule_1d: &QuadratureRule, dim: usize) -> Result<QuadratureRule> {
    rule_1d.tensor(dim)
}

/// Number of eigenvalues below `x` of the probabilists' Jacobi matrix
/// (zero diagonal, off-diagonal `sqrt(j)`), by the Sturm sequence of pivots.
fn eigen_count_below(n: usize, x: f64) -> usize {
    let mut count = 0;
    let mut d = -x;
    for j in 0..n {
        if j > 0 {
            d = -x - j as f64 / d;
        }
        if d == 0.0 {
            d = -f64::MIN_POSITIVE;
        }
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

/// Orthonormal probabilists' Hermite values: `(h_n(x), h_{n-1}(x), sum_{j<n} h_j(x)^2)`.
fn orthonormal(n: usize, x: f64) -> (f64, f64, f64) {
    let mut prev = 0.0;
    let mut cur = 1.0;
    let mut sum_sq = 0.0;
    for j in 0..n {
        sum_sq += cur * cur;
        let jf = (j + 1) as f64;
        let next = (x * cur - libm::sqrt(j as f64) * prev) / libm::sqrt(jf);
        prev = cur;
        cur = next;
    }
    (cur, prev, sum_sq)
}

/// Nodes (ascending) and weights of the `n`-point rule for the standard
/// normal weight. Roots of `He_n` are the eigenvalues of the Jacobi matrix;
/// each is bracketed by bisection on the Sturm count, then Newton-polished.
fn hermite_roots(n: usize) -> (Vec<f64>, Vec<f64>) {
    let bound = 2.0 * libm::sqrt(n as f64) + 1.0;
    let mut nodes = alloc::vec![0.0; n];
    let mut weights = alloc::vec![0.0; n];
    let half = n / 2;
    // positive roots are eigenvalues n - half .. n - 1 (0-based from below)
    for i in 0..half {
        let k = n - 1 - i;
        let (mut lo, mut hi) = (0.0, bound);
        loop {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if eigen_count_below(n, mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let mut x = 0.5 * (lo + hi);
        for _ in 0..2 {
            let (h, hm1, _) = orthonormal(n, x);
            let step = h / (libm::sqrt(n as f64) * hm1);
            if step.is_finite() {
                x -= step;
            }
        }
        let (_, _, sum_sq) = orthonormal(n, x);
        let w = 1.0 / sum_sq;
        nodes[k] = x;
        nodes[n - 1 - k] = -x;
        weights[k] = w;
        weights[n - 1 - k] = w;
    }
    if n % 2 == 1 {
        let (_, _, sum_sq) = orthonormal(n, 0.0);
        nodes[half] = 0.0;
        weights[half] = 1.0 / sum_sq;
    }
    (nodes, weights)
}
