//! Exact rank computations over the rationals, used for graded-dimension
//! and linear-independence queries.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;

use crate::poly::{Monomial, Poly};

/// Rank of the row span, by fraction-free-enough Gaussian elimination.
pub fn rank(mut rows: Vec<Vec<BigRational>>) -> usize {
    let n_cols = rows.iter().map(|r| r.len()).max().unwrap_or(0);
    for r in &mut rows {
        r.resize(n_cols, BigRational::zero());
    }
    let mut rank = 0;
    for col in 0..n_cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let pivot_row = rows[rank].clone();
        for row in rows.iter_mut().skip(rank + 1) {
            if row[col].is_zero() {
                continue;
            }
            let factor = &row[col] / &pivot_row[col];
            for c in col..n_cols {
                let delta = &factor * &pivot_row[c];
                row[c] = &row[c] - &delta;
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Coordinate rows for a family of polynomials over the union of their
/// monomials, in canonical monomial order.
pub fn coordinate_rows(polys: &[Poly]) -> Vec<Vec<BigRational>> {
    let mut index: BTreeMap<Monomial, usize> = BTreeMap::new();
    for p in polys {
        for (m, _) in p.terms() {
            let next = index.len();
            index.entry(m.clone()).or_insert(next);
        }
    }
    // Re-number in sorted monomial order for determinism.
    for (k, (_, slot)) in index.iter_mut().enumerate() {
        *slot = k;
    }
    polys
        .iter()
        .map(|p| {
            let mut row = vec![BigRational::zero(); index.len()];
            for (m, c) in p.terms() {
                row[index[m]] = c.clone();
            }
            row
        })
        .collect()
}

/// Dimension of the span of a family of polynomials.
pub fn span_dim(polys: &[Poly]) -> usize {
    rank(coordinate_rows(polys))
}

/// Dimension of the intersection `span(a) ∩ span(b)`, via
/// `dim(A) + dim(B) - dim(A + B)`.
pub fn span_intersection_dim(a: &[Poly], b: &[Poly]) -> usize {
    let dim_a = span_dim(a);
    let dim_b = span_dim(b);
    let mut joint = a.to_vec();
    joint.extend_from_slice(b);
    dim_a + dim_b - span_dim(&joint)
}
