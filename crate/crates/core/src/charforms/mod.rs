//! Invariant polynomials in Chern-root form: the Pfaffian, Pontryagin
//! monomials, the Hirzebruch L-polynomial, and user expressions.

mod parser;

pub use parser::parse_polynomial;

use std::fmt;

use crate::error::{Error, InvariantViolation, Result};
use crate::exactnum::{coth_series_coeff, Rat};
use crate::polyring::TruncatedPoly;

/// A homogeneous degree-`m` polynomial in `a1..am`, symmetric and invariant
/// under sign flips of pairs of variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantPoly {
    m: usize,
    psi_hat: TruncatedPoly,
    label: String,
}

impl InvariantPoly {
    /// Validates `psi_hat` against the three invariants; the polynomial is
    /// re-truncated at cutoff `m` after validation.
    pub fn new(m: usize, psi_hat: TruncatedPoly, label: impl Into<String>) -> Result<Self> {
        if m == 0 {
            return Err(Error::Argument("invariant polynomials need m >= 1".into()));
        }
        if psi_hat.num_vars() != m {
            return Err(Error::DimensionMismatch(format!(
                "polynomial in {} variables for m = {m}",
                psi_hat.num_vars()
            )));
        }
        check_invariants(&psi_hat, m)?;
        Ok(InvariantPoly { m, psi_hat: psi_hat.with_cutoff(m as u32), label: label.into() })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn psi_hat(&self) -> &TruncatedPoly {
        &self.psi_hat
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Canonical text of `psi_hat`, accepted back by `parse_invariant`.
    pub fn render(&self) -> String {
        self.psi_hat.to_string()
    }
}

impl fmt::Display for InvariantPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.label, self.psi_hat)
    }
}

fn violation(kind: InvariantViolation, witness: String) -> Error {
    Error::InvalidInvariant { kind, witness }
}

fn check_invariants(p: &TruncatedPoly, m: usize) -> Result<()> {
    if let Some((mono, _)) = p.terms().find(|(mono, _)| mono.degree() as usize != m) {
        return Err(violation(
            InvariantViolation::Homogeneity,
            format!("term {mono} has degree {}, expected {m}", mono.degree()),
        ));
    }
    // adjacent transpositions generate the symmetric group
    for i in 0..m.saturating_sub(1) {
        for (mono, c) in p.terms() {
            let other = mono.swapped(i, i + 1);
            let c2 = p.coeff_of(&other);
            if *c != c2 {
                return Err(violation(
                    InvariantViolation::Symmetry,
                    format!(
                        "{mono} has coefficient {c} but {other} (a{} and a{} swapped) has coefficient {c2}",
                        i + 1,
                        i + 2
                    ),
                ));
            }
        }
    }
    for i in 0..m {
        for j in i + 1..m {
            if let Some((mono, _)) = p.terms().find(|(mono, _)| (mono.exps()[i] + mono.exps()[j]) % 2 == 1) {
                return Err(violation(
                    InvariantViolation::SignFlip,
                    format!(
                        "{mono} changes sign under (a{i1}, a{j1}) -> (-a{i1}, -a{j1})",
                        i1 = i + 1,
                        j1 = j + 1
                    ),
                ));
            }
        }
    }
    Ok(())
}

/// Euler class: `a1 a2 ... am`.
pub fn pfaffian_poly(m: usize) -> Result<InvariantPoly> {
    if m == 0 {
        return Err(Error::Argument("pfaffian needs m >= 1".into()));
    }
    let p = TruncatedPoly::from_terms(m, m as u32, [(vec![1; m], Rat::from_integer(1.into()))])?;
    InvariantPoly::new(m, p, "euler")
}

/// `e_i(a1^2, ..., am^2)` in `m` variables at the given cutoff.
pub(crate) fn pontryagin_class(i: usize, m: usize, cutoff: u32) -> TruncatedPoly {
    let squares: Vec<_> = (0..m).map(|j| TruncatedPoly::var(j, m, cutoff).pow(2)).collect();
    crate::polyring::symmetric_of(&squares, i, m, cutoff)
}

/// Pontryagin monomial `p_{i1} p_{i2} ...` with `2 * sum(i) = m`.
pub fn pontryagin_poly(partition: &[u32], m: usize) -> Result<InvariantPoly> {
    let bad = |reason: String| Error::InvalidPartition { partition: partition.to_vec(), reason };
    if partition.is_empty() {
        return Err(bad("empty partition".into()));
    }
    if partition.contains(&0) {
        return Err(bad("entries must be positive".into()));
    }
    let sum: u32 = partition.iter().sum();
    if 2 * sum as usize != m {
        return Err(bad(format!("total degree {} does not equal m = {m}", 2 * sum)));
    }
    let cutoff = m as u32;
    let p = partition.iter().fold(TruncatedPoly::one(m, cutoff), |acc, &i| {
        acc.mul(&pontryagin_class(i as usize, m, cutoff))
    });
    let label = format!(
        "p_{{{}}}",
        partition.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
    );
    InvariantPoly::new(m, p, label)
}

/// Degree-`m` part of `prod_j sum_n coth_series_coeff(n) a_j^{2n}`.
pub fn l_genus_poly(m: usize) -> Result<InvariantPoly> {
    if m == 0 || m % 2 == 1 {
        return Err(Error::UnsupportedDimension(format!(
            "the L-polynomial needs m even and positive (dim 2m divisible by 4), got m = {m}"
        )));
    }
    let cutoff = m as u32;
    let coeffs: Vec<Rat> = (0..=m / 2).map(coth_series_coeff).collect();
    let mut prod = TruncatedPoly::one(m, cutoff);
    for j in 0..m {
        let terms = coeffs.iter().enumerate().map(|(n, c)| {
            let mut e = vec![0; m];
            e[j] = 2 * n as u32;
            (e, c.clone())
        });
        prod = prod.mul(&TruncatedPoly::from_terms(m, cutoff, terms)?);
    }
    InvariantPoly::new(m, prod.homogeneous_part(cutoff), "L")
}

/// Parses a user expression into a validated invariant polynomial.
///
/// Grammar: rational literals (`3`, `2/3`), variables `a1..am`, binary
/// `+ - *`, unary `-`, `^` with a nonnegative integer exponent, parentheses,
/// and the macros `E` (Euler class), `p[k]` (`e_k(a1^2, ..., am^2)`) and
/// `e[k](x1, ..., xn)` (elementary symmetric polynomial of the arguments).
pub fn parse_invariant(expr: &str, m: usize) -> Result<InvariantPoly> {
    if m == 0 {
        return Err(Error::Argument("invariant polynomials need m >= 1".into()));
    }
    let p = parse_polynomial(expr, m)?;
    InvariantPoly::new(m, p, expr.trim())
}

/// Every catalog polynomial for half-dimension `m`: the Pfaffian and, for
/// even `m`, the L-polynomial and all Pontryagin monomials.
pub fn catalog(m: usize) -> Result<Vec<InvariantPoly>> {
    let mut out = vec![pfaffian_poly(m)?];
    if m.is_multiple_of(2) {
        out.push(l_genus_poly(m)?);
        for part in partitions((m / 2) as u32, (m / 2) as u32) {
            out.push(pontryagin_poly(&part, m)?);
        }
    }
    Ok(out)
}

/// Partitions of `n` into parts no larger than `max`, parts nonincreasing.
fn partitions(n: u32, max: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![vec![]];
    }
    (1..=max.min(n))
        .rev()
        .flat_map(|first| {
            partitions(n - first, first).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

/// Coefficient helper for tests and reports.
pub fn coefficient(p: &InvariantPoly, exps: &[u32]) -> Rat {
    p.psi_hat.coeff(exps)
}
