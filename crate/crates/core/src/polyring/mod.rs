//! Truncated multivariate polynomials over `Rat` in the Chern-root variables
//! `a1, ..., am`.
//!
//! Terms of total degree above the cutoff are dropped after every operation.
//! Terms are kept in a `BTreeMap` keyed by exponent vectors in graded
//! lexicographic order, so iteration and rendering are deterministic.

mod symmetric;

pub(crate) use symmetric::elementary_symmetric_of as symmetric_of;
pub use symmetric::{
    elementary_symmetric, expand_generator_monomial, generator_monomials_of_degree,
    recompose, reduce_to_generators, GenMonomial, Generator, Group, GroupKind, GroupSpec,
};

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactnum::Rat;

/// Exponent vector, ordered by total degree and then lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn one(num_vars: usize) -> Self {
        Monomial(vec![0; num_vars])
    }

    pub fn var(num_vars: usize, i: usize) -> Self {
        let mut e = vec![0; num_vars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub(crate) fn swapped(&self, i: usize, j: usize) -> Monomial {
        let mut e = self.0.clone();
        e.swap(i, j);
        Monomial(e)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            write!(f, "a{}", i + 1)?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedPoly {
    num_vars: usize,
    cutoff: u32,
    terms: BTreeMap<Monomial, Rat>,
}

#[derive(Clone, Debug)]
pub enum PolyOp {
    Add,
    Mul,
    Scale(Rat),
}

/// `p op q` with the shape check; `Scale` ignores `q` apart from the check.
pub fn poly_arith(p: &TruncatedPoly, q: &TruncatedPoly, op: PolyOp) -> Result<TruncatedPoly> {
    p.check_compatible(q)?;
    Ok(match op {
        PolyOp::Add => p.add(q),
        PolyOp::Mul => p.mul(q),
        PolyOp::Scale(c) => p.scale(&c),
    })
}

impl TruncatedPoly {
    pub fn zero(num_vars: usize, cutoff: u32) -> Self {
        TruncatedPoly { num_vars, cutoff, terms: BTreeMap::new() }
    }

    pub fn constant(c: Rat, num_vars: usize, cutoff: u32) -> Self {
        let mut p = Self::zero(num_vars, cutoff);
        p.add_term(Monomial::one(num_vars), c);
        p
    }

    pub fn one(num_vars: usize, cutoff: u32) -> Self {
        Self::constant(Rat::one(), num_vars, cutoff)
    }

    /// The variable `a_{i+1}` (0-based index `i`).
    pub fn var(i: usize, num_vars: usize, cutoff: u32) -> Self {
        let mut p = Self::zero(num_vars, cutoff);
        p.add_term(Monomial::var(num_vars, i), Rat::one());
        p
    }

    pub fn from_terms<I>(num_vars: usize, cutoff: u32, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, Rat)>,
    {
        let mut p = Self::zero(num_vars, cutoff);
        for (exps, c) in terms {
            if exps.len() != num_vars {
                return Err(Error::DimensionMismatch(format!(
                    "exponent vector of length {} in a ring of {} variables",
                    exps.len(),
                    num_vars
                )));
            }
            p.add_term(Monomial(exps), c);
        }
        Ok(p)
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exps: &[u32]) -> Rat {
        self.terms.get(&Monomial(exps.to_vec())).cloned().unwrap_or_else(Rat::zero)
    }

    pub(crate) fn coeff_of(&self, m: &Monomial) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn constant_term(&self) -> Rat {
        self.coeff_of(&Monomial::one(self.num_vars))
    }

    /// Highest total degree among stored terms, `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn homogeneous_part(&self, d: u32) -> Self {
        TruncatedPoly {
            num_vars: self.num_vars,
            cutoff: self.cutoff,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Same terms under a different cutoff (terms above it are dropped).
    pub fn with_cutoff(&self, cutoff: u32) -> Self {
        TruncatedPoly {
            num_vars: self.num_vars,
            cutoff,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() <= cutoff)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() || m.degree() > self.cutoff {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.num_vars != other.num_vars || self.cutoff != other.cutoff {
            return Err(Error::DimensionMismatch(format!(
                "polynomials over ({} vars, cutoff {}) and ({} vars, cutoff {})",
                self.num_vars, self.cutoff, other.num_vars, other.cutoff
            )));
        }
        Ok(())
    }

    // The unchecked operations below assume a shared shape; public callers go
    // through `try_*` or `poly_arith`.

    pub(crate) fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub(crate) fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub(crate) fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.num_vars, self.cutoff);
        for (m1, c1) in &self.terms {
            let d1 = m1.degree();
            for (m2, c2) in &other.terms {
                if d1 + m2.degree() > self.cutoff {
                    continue;
                }
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(self.add(other))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(self.sub(other))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(self.mul(other))
    }

    pub fn scale(&self, c: &Rat) -> Self {
        let mut out = Self::zero(self.num_vars, self.cutoff);
        if c.is_zero() {
            return out;
        }
        out.terms = self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect();
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rat::one())
    }

    pub fn pow(&self, mut n: u32) -> Self {
        let mut result = Self::one(self.num_vars, self.cutoff);
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                result = result.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Multiplicative inverse modulo truncation, for a polynomial with
    /// nonzero constant term `c`: writing `u = c(1 + w)`, the inverse is
    /// `c^{-1} sum_{n <= cutoff} (-w)^n`.
    pub fn invert_unit(&self) -> Result<Self> {
        let c = self.constant_term();
        if c.is_zero() {
            return Err(Error::NonUnit);
        }
        let c_inv = c.recip();
        let one = Self::one(self.num_vars, self.cutoff);
        let minus_w = one.sub(&self.scale(&c_inv));
        let mut sum = one.clone();
        let mut power = one;
        for _ in 0..self.cutoff {
            power = power.mul(&minus_w);
            if power.is_zero() {
                break;
            }
            sum = sum.add(&power);
        }
        Ok(sum.scale(&c_inv))
    }

    /// Substitutes `a_j -> offsets[j] + a_j` for every variable and expands.
    pub fn shift_vars(&self, offsets: &[Rat]) -> Result<Self> {
        if offsets.len() != self.num_vars {
            return Err(Error::DimensionMismatch(format!(
                "{} offsets for {} variables",
                offsets.len(),
                self.num_vars
            )));
        }
        let max_exp: Vec<u32> = (0..self.num_vars)
            .map(|j| self.terms.keys().map(|m| m.0[j]).max().unwrap_or(0))
            .collect();
        // powers[j][e] = (offset_j + a_j)^e
        let powers: Vec<Vec<Self>> = offsets
            .iter()
            .enumerate()
            .map(|(j, off)| {
                let base = Self::constant(off.clone(), self.num_vars, self.cutoff)
                    .add(&Self::var(j, self.num_vars, self.cutoff));
                let mut acc = vec![Self::one(self.num_vars, self.cutoff)];
                for e in 1..=max_exp[j] {
                    let next = acc[e as usize - 1].mul(&base);
                    acc.push(next);
                }
                acc
            })
            .collect();
        let mut out = Self::zero(self.num_vars, self.cutoff);
        for (m, c) in &self.terms {
            let mut term = Self::constant(c.clone(), self.num_vars, self.cutoff);
            for (j, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    term = term.mul(&powers[j][e as usize]);
                }
            }
            out = out.add(&term);
        }
        Ok(out)
    }

    /// Evaluates at a rational point, ignoring the cutoff.
    pub fn evaluate(&self, point: &[Rat]) -> Result<Rat> {
        if point.len() != self.num_vars {
            return Err(Error::DimensionMismatch(format!(
                "point of length {} for {} variables",
                point.len(),
                self.num_vars
            )));
        }
        Ok(self.terms.iter().fold(Rat::zero(), |acc, (m, c)| {
            let v = m
                .0
                .iter()
                .zip(point)
                .fold(c.clone(), |v, (&e, x)| v * num_traits::pow(x.clone(), e as usize));
            acc + v
        }))
    }

    /// Permutes variables: variable `i` becomes variable `perm[i]`.
    pub fn permute_vars(&self, perm: &[usize]) -> Self {
        let mut out = Self::zero(self.num_vars, self.cutoff);
        for (m, c) in &self.terms {
            let mut e = vec![0; self.num_vars];
            for (i, &x) in m.0.iter().enumerate() {
                e[perm[i]] = x;
            }
            out.add_term(Monomial(e), c.clone());
        }
        out
    }

    /// Replaces `a_i` by `-a_i` for every `i` in `vars`.
    pub fn negate_vars(&self, vars: &[usize]) -> Self {
        let mut out = self.clone();
        for (m, c) in out.terms.iter_mut() {
            let parity: u32 = vars.iter().map(|&i| m.0[i]).sum();
            if parity % 2 == 1 {
                *c = -c.clone();
            }
        }
        out
    }
}

/// Canonical rendering: terms in decreasing graded-lex order, e.g.
/// `2/3*a1^2*a2 - a2 + 1`.
impl fmt::Display for TruncatedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (idx, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let is_const = m.degree() == 0;
            if is_const {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat};

    fn a(i: usize, m: usize, d: u32) -> TruncatedPoly {
        TruncatedPoly::var(i, m, d)
    }

    fn c(x: Rat, m: usize, d: u32) -> TruncatedPoly {
        TruncatedPoly::constant(x, m, d)
    }

    #[test]
    fn multiplication_examples() {
        let p = poly_arith(&a(0, 2, 2), &a(1, 2, 2), PolyOp::Mul).unwrap();
        assert_eq!(p.to_string(), "a1*a2");

        let sq1 = a(0, 2, 2).pow(2);
        let sq2 = a(1, 2, 2).pow(2);
        assert!(poly_arith(&sq1, &sq2, PolyOp::Mul).unwrap().is_zero());

        let one = TruncatedPoly::one(2, 2);
        let p = one.add(&a(0, 2, 2)).mul(&one.sub(&a(0, 2, 2)));
        assert_eq!(p, one.sub(&sq1));
    }

    #[test]
    fn mismatched_shapes_are_rejected() {
        let p = a(0, 2, 2);
        let q = a(0, 3, 2);
        assert!(matches!(poly_arith(&p, &q, PolyOp::Add), Err(Error::DimensionMismatch(_))));
        let q = a(0, 2, 3);
        assert!(matches!(poly_arith(&p, &q, PolyOp::Mul), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn scale_by_zero_gives_zero() {
        let p = a(0, 2, 2);
        assert!(poly_arith(&p, &p, PolyOp::Scale(int(0))).unwrap().is_zero());
    }

    #[test]
    fn invert_unit_examples() {
        let two = c(int(2), 1, 3);
        assert_eq!(two.invert_unit().unwrap(), c(rat(1, 2), 1, 3));

        let u = TruncatedPoly::one(1, 2).add(&a(0, 1, 2));
        assert_eq!(u.invert_unit().unwrap().to_string(), "a1^2 - a1 + 1");

        let u = c(int(3), 2, 1).add(&a(1, 2, 1));
        let v = u.invert_unit().unwrap();
        assert_eq!(v, c(rat(1, 3), 2, 1).sub(&a(1, 2, 1).scale(&rat(1, 9))));
        assert_eq!(u.mul(&v), TruncatedPoly::one(2, 1));
    }

    #[test]
    fn non_unit_is_rejected() {
        assert_eq!(a(0, 2, 2).invert_unit(), Err(Error::NonUnit));
    }

    #[test]
    fn shift_examples() {
        let p = a(0, 2, 2).mul(&a(1, 2, 2));
        let s = p.shift_vars(&[int(1), int(2)]).unwrap();
        assert_eq!(s.to_string(), "a1*a2 + 2*a1 + a2 + 2");

        let p = a(0, 1, 2).pow(2);
        assert_eq!(p.shift_vars(&[int(0)]).unwrap(), p);

        let p = a(0, 2, 1).pow(2).add(&a(1, 2, 1).pow(2));
        assert!(p.is_zero(), "degree-2 terms vanish at cutoff 1");
        let full = TruncatedPoly::from_terms(2, 2, [(vec![2, 0], int(1)), (vec![0, 2], int(1))])
            .unwrap();
        let s = full.shift_vars(&[int(1), int(2)]).unwrap().with_cutoff(1);
        assert_eq!(s.to_string(), "2*a1 + 4*a2 + 5");

        assert!(matches!(p.shift_vars(&[int(1)]), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn rendering_order_and_signs() {
        let p = TruncatedPoly::from_terms(
            2,
            3,
            [
                (vec![0, 0], int(-1)),
                (vec![2, 1], rat(2, 3)),
                (vec![0, 1], int(-1)),
                (vec![1, 1], int(1)),
            ],
        )
        .unwrap();
        assert_eq!(p.to_string(), "2/3*a1^2*a2 + a1*a2 - a2 - 1");
        let q = TruncatedPoly::from_terms(2, 3, [(vec![1, 0], rat(-1, 2))]).unwrap();
        assert_eq!(q.to_string(), "-1/2*a1");
        assert_eq!(TruncatedPoly::zero(2, 3).to_string(), "0");
    }

    #[test]
    fn evaluate_point() {
        let p = TruncatedPoly::from_terms(2, 2, [(vec![2, 0], rat(1, 3)), (vec![0, 2], rat(1, 3))])
            .unwrap();
        assert_eq!(p.evaluate(&[int(1), int(2)]).unwrap(), rat(5, 3));
    }
}
