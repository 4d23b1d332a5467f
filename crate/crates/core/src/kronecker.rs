//! Closure dimensions of linear flows on tori and spheres.
//!
//! A weight `alpha_i` that may be irrational is given by its coordinates over
//! some fixed basis of a finite-dimensional Q-vector space of reals, so the
//! weights form a `k x d` rational matrix. The generic dimension of an orbit
//! closure of `z -> (exp(i t alpha_1) z_1, ..., exp(i t alpha_k) z_k)` is
//! `dim_Q span(alpha) = k - dim_Q {beta in Q^k : beta . alpha = 0}`.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exactnum::{parse_rat_matrix_json, Rat};
use crate::linalg::{integerize_cols, left_integer_kernel, rank, RatMatrix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightMatrix {
    rows: RatMatrix,
}

impl WeightMatrix {
    pub fn new(rows: RatMatrix) -> Result<Self> {
        let d = rows.first().map_or(0, Vec::len);
        if rows.is_empty() || d == 0 {
            return Err(Error::DimensionMismatch("weight matrix must be nonempty".into()));
        }
        for (i, r) in rows.iter().enumerate() {
            if r.len() != d {
                return Err(Error::DimensionMismatch(format!("row {} has {} entries, expected {d}", i + 1, r.len())));
            }
            if r.iter().all(Zero::is_zero) {
                return Err(Error::Degenerate(format!("weight {} is zero", i + 1)));
            }
        }
        Ok(WeightMatrix { rows })
    }

    /// Weights that are themselves rational (`d = 1`).
    pub fn from_rationals(weights: &[Rat]) -> Result<Self> {
        Self::new(weights.iter().map(|w| vec![w.clone()]).collect())
    }

    pub fn from_json(src: &str) -> Result<Self> {
        Self::new(parse_rat_matrix_json(src)?)
    }

    pub fn k(&self) -> usize {
        self.rows.len()
    }

    pub fn d(&self) -> usize {
        self.rows[0].len()
    }

    pub fn rows(&self) -> &RatMatrix {
        &self.rows
    }
}

/// `(dim_Q span, dim_Q annihilator)`; the two always sum to `k`.
pub fn closure_dimension(w: &WeightMatrix) -> (usize, usize) {
    let span = rank(w.rows());
    (span, w.k() - span)
}

/// Primitive integer basis of `{beta : beta . alpha = 0}` in Hermite normal
/// form.
pub fn annihilator_basis(w: &WeightMatrix) -> Vec<Vec<BigInt>> {
    left_integer_kernel(&integerize_cols(w.rows()))
}
