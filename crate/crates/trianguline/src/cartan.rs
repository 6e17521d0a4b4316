//! Root data of products of `gl_n`: the displacement rank `d_w` and the
//! dimension of the fixed subspace of the torus under a Weyl element.

use crate::linalg::integer_rank;
use crate::perm::Perm;
use crate::weyl::{EmbeddingShape, WeylElement};

/// A root of the product group: embedding index and an ordered pair `(i, j)`,
/// `i != j`, realized as `e_{tau,i} - e_{tau,j}` inside `Z^(sigma*n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RootVector {
    pub tau: usize,
    pub i: usize,
    pub j: usize,
}

impl RootVector {
    pub fn to_vector(self, shape: EmbeddingShape) -> Vec<i64> {
        let mut v = vec![0i64; shape.sigma * shape.n];
        v[self.tau * shape.n + self.i] = 1;
        v[self.tau * shape.n + self.j] = -1;
        v
    }
}

/// All roots, positive and negative, embedding-major.
pub fn roots(shape: EmbeddingShape) -> Vec<RootVector> {
    let mut out = Vec::with_capacity(shape.sigma * shape.n * (shape.n - 1));
    for tau in 0..shape.sigma {
        for i in 0..shape.n {
            for j in 0..shape.n {
                if i != j {
                    out.push(RootVector { tau, i, j });
                }
            }
        }
    }
    out
}

/// Rank over the integers of the span of `{w(alpha) - alpha}` as `alpha` runs
/// over the roots; computed by fraction-free elimination.
pub fn d_of(w: &WeylElement) -> usize {
    let shape = w.shape();
    let mut rows = Vec::new();
    for alpha in roots(shape) {
        let part = w.part(alpha.tau);
        let moved = RootVector {
            tau: alpha.tau,
            i: part.apply(alpha.i),
            j: part.apply(alpha.j),
        };
        let a = alpha.to_vector(shape);
        let b = moved.to_vector(shape);
        let diff: Vec<i64> = b.iter().zip(&a).map(|(x, y)| x - y).collect();
        if diff.iter().any(|&x| x != 0) {
            rows.push(diff);
        }
    }
    if rows.is_empty() {
        0
    } else {
        integer_rank(&rows)
    }
}

/// Dimension of the fixed subspace of the torus: the total cycle count.
pub fn fixed_space_dim(w: &WeylElement) -> usize {
    w.parts().iter().map(Perm::cycle_count).sum()
}

/// Kernel-rank cross-check for [`fixed_space_dim`]: the nullity of
/// `P_w - I` acting on `Z^(sigma*n)`.
pub fn fixed_space_dim_kernel_oracle(w: &WeylElement) -> usize {
    let shape = w.shape();
    let dim = shape.sigma * shape.n;
    let mut rows = Vec::with_capacity(dim);
    // Ad(w) sends e_i to e_{w(i)} within each factor; rows of (P_w - I)
    for tau in 0..shape.sigma {
        let part = w.part(tau);
        for i in 0..shape.n {
            let mut row = vec![0i64; dim];
            row[tau * shape.n + part.apply(i)] += 1;
            row[tau * shape.n + i] -= 1;
            rows.push(row);
        }
    }
    dim - integer_rank(&rows)
}
