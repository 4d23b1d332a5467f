//! Exact dense linear algebra over `Rat` and `BigInt`.
//!
//! Rank and unique solves go through fraction-free (Bareiss) elimination on
//! integer rows; integer lattices use a unimodular row reduction to Hermite
//! normal form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exactnum::Rat;

pub type RatMatrix = Vec<Vec<Rat>>;
pub type IntMatrix = Vec<Vec<BigInt>>;

/// Scales each row by the lcm of its denominators. Row scaling preserves the
/// row space, hence rank and the solution set of a homogeneous system.
pub fn integerize_rows(m: &[Vec<Rat>]) -> IntMatrix {
    m.iter()
        .map(|row| {
            let l = row
                .iter()
                .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            row.iter()
                .map(|x| x.numer() * (&l / x.denom()))
                .collect()
        })
        .collect()
}

/// Scales each column by the lcm of its denominators. Preserves the left
/// kernel `{b : b.M = 0}`.
pub fn integerize_cols(m: &[Vec<Rat>]) -> IntMatrix {
    let ncols = m.first().map_or(0, Vec::len);
    let scales: Vec<BigInt> = (0..ncols)
        .map(|j| m.iter().fold(BigInt::one(), |acc, row| acc.lcm(row[j].denom())))
        .collect();
    m.iter()
        .map(|row| {
            row.iter()
                .zip(&scales)
                .map(|(x, s)| x.numer() * (s / x.denom()))
                .collect()
        })
        .collect()
}

/// Fraction-free row echelon form.
#[derive(Debug, Clone)]
pub struct Echelon {
    pub rows: IntMatrix,
    /// Pivot column of each leading row, in order.
    pub pivots: Vec<usize>,
    /// `perm[i]` is the original index of echelon row `i`.
    pub perm: Vec<usize>,
}

pub fn bareiss(mut m: IntMatrix) -> Echelon {
    let nrows = m.len();
    let ncols = m.first().map_or(0, Vec::len);
    let mut perm: Vec<usize> = (0..nrows).collect();
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        perm.swap(r, p);
        for i in r + 1..nrows {
            for j in c + 1..ncols {
                let v = (&m[r][c] * &m[i][j] - &m[i][c] * &m[r][j]) / &prev;
                m[i][j] = v;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    Echelon { rows: m, pivots, perm }
}

pub fn rank(m: &[Vec<Rat>]) -> usize {
    bareiss(integerize_rows(m)).pivots.len()
}

#[derive(Debug, Clone, PartialEq)]
pub enum Solution {
    Unique(Vec<Rat>),
    /// Equation with this original row index witnesses inconsistency.
    Inconsistent(usize),
    Underdetermined,
}

/// Solves `a x = b` for a unique `x`.
pub fn solve(a: &[Vec<Rat>], b: &[Rat]) -> Solution {
    let n = a.first().map_or(0, Vec::len);
    let aug: RatMatrix = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| row.iter().cloned().chain(std::iter::once(rhs.clone())).collect())
        .collect();
    let ech = bareiss(integerize_rows(&aug));
    if let Some(i) = ech.pivots.iter().position(|&c| c == n) {
        return Solution::Inconsistent(ech.perm[i]);
    }
    if ech.pivots.len() < n {
        return Solution::Underdetermined;
    }
    let mut x = vec![Rat::zero(); n];
    for (r, &c) in ech.pivots.iter().enumerate().rev() {
        let row = &ech.rows[r];
        let mut acc = Rat::from_integer(row[n].clone());
        for j in c + 1..n {
            acc -= Rat::from_integer(row[j].clone()) * &x[j];
        }
        x[c] = acc / Rat::from_integer(row[c].clone());
    }
    Solution::Unique(x)
}

/// Basis of `{x : m x = 0}` from the reduced row echelon form over `Rat`.
pub fn nullspace(m: &[Vec<Rat>], ncols: usize) -> RatMatrix {
    let mut a: RatMatrix = m.to_vec();
    let nrows = a.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..nrows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..ncols {
                    let d = &f * &a[r][j];
                    a[i][j] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (0..ncols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![Rat::zero(); ncols];
            v[free] = Rat::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[row][free].clone();
            }
            v
        })
        .collect()
}

pub fn mat_mul(a: &[Vec<Rat>], b: &[Vec<Rat>]) -> RatMatrix {
    let inner = b.len();
    let ncols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..ncols)
                .map(|j| {
                    (0..inner).fold(Rat::zero(), |acc, k| acc + &row[k] * &b[k][j])
                })
                .collect()
        })
        .collect()
}

pub fn mat_vec(a: &[Vec<Rat>], v: &[Rat]) -> Vec<Rat> {
    a.iter()
        .map(|row| row.iter().zip(v).fold(Rat::zero(), |acc, (x, y)| acc + x * y))
        .collect()
}

pub fn identity(n: usize) -> RatMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect())
        .collect()
}

/// Row-style Hermite normal form `H = U A` with `U` unimodular.
///
/// `H` is upper echelon, pivots positive, entries above each pivot reduced
/// into `[0, pivot)`; zero rows sit at the bottom.
pub fn hnf_with_transform(a: &[Vec<BigInt>]) -> (IntMatrix, IntMatrix) {
    let nrows = a.len();
    let ncols = a.first().map_or(0, Vec::len);
    let mut h: IntMatrix = a.to_vec();
    let mut u: IntMatrix = (0..nrows)
        .map(|i| (0..nrows).map(|j| BigInt::from((i == j) as u8)).collect())
        .collect();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        for i in r + 1..nrows {
            if h[i][c].is_zero() {
                continue;
            }
            let (x, y) = (h[r][c].clone(), h[i][c].clone());
            let eg = x.extended_gcd(&y);
            let (xg, yg) = (&x / &eg.gcd, &y / &eg.gcd);
            combine_rows(&mut h, r, i, &eg.x, &eg.y, &xg, &yg);
            combine_rows(&mut u, r, i, &eg.x, &eg.y, &xg, &yg);
        }
        if h[r][c].is_zero() {
            continue;
        }
        if h[r][c].is_negative() {
            negate_row(&mut h[r]);
            negate_row(&mut u[r]);
        }
        for i in 0..r {
            let q = h[i][c].div_floor(&h[r][c]);
            if !q.is_zero() {
                sub_multiple(&mut h, i, r, &q);
                sub_multiple(&mut u, i, r, &q);
            }
        }
        r += 1;
    }
    (h, u)
}

/// Replaces rows (r, i) by (s*R + t*I, -yg*R + xg*I); determinant one when
/// `s*x + t*y = gcd` and `xg = x/gcd`, `yg = y/gcd`.
fn combine_rows(
    m: &mut IntMatrix,
    r: usize,
    i: usize,
    s: &BigInt,
    t: &BigInt,
    xg: &BigInt,
    yg: &BigInt,
) {
    for j in 0..m[r].len() {
        let (a, b) = (m[r][j].clone(), m[i][j].clone());
        m[r][j] = s * &a + t * &b;
        m[i][j] = xg * &b - yg * &a;
    }
}

fn negate_row(row: &mut [BigInt]) {
    for x in row.iter_mut() {
        *x = -std::mem::take(x);
    }
}

fn sub_multiple(m: &mut IntMatrix, target: usize, src: usize, q: &BigInt) {
    for j in 0..m[target].len() {
        let d = q * &m[src][j];
        m[target][j] -= d;
    }
}

/// Hermite normal form with zero rows dropped.
pub fn hnf(a: &[Vec<BigInt>]) -> IntMatrix {
    let (h, _) = hnf_with_transform(a);
    h.into_iter().filter(|row| row.iter().any(|x| !x.is_zero())).collect()
}

/// Basis of the saturated lattice `{b in Z^k : b.A = 0}` for a `k x d`
/// integer matrix `A`, in Hermite normal form.
pub fn left_integer_kernel(a: &[Vec<BigInt>]) -> IntMatrix {
    let (h, u) = hnf_with_transform(a);
    let kernel: IntMatrix = h
        .iter()
        .zip(u)
        .filter(|(row, _)| row.iter().all(Zero::is_zero))
        .map(|(_, urow)| urow)
        .collect();
    if kernel.is_empty() {
        return kernel;
    }
    hnf(&kernel)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat};

    fn ints(rows: &[&[i64]]) -> IntMatrix {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    fn rats(rows: &[&[i64]]) -> RatMatrix {
        rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    #[test]
    fn bareiss_rank() {
        assert_eq!(rank(&rats(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(rank(&rats(&[&[0, 0], &[0, 0]])), 0);
        assert_eq!(rank(&rats(&[&[0, 1, 2], &[0, 0, 3], &[1, 1, 1]])), 3);
        let frac = vec![vec![rat(1, 2), rat(1, 3)], vec![rat(3, 2), int(1)]];
        assert_eq!(rank(&frac), 1);
    }

    #[test]
    fn solve_cases() {
        let a = rats(&[&[2, 1], &[1, 3]]);
        assert_eq!(
            solve(&a, &[int(3), int(5)]),
            Solution::Unique(vec![rat(4, 5), rat(7, 5)])
        );
        let a = rats(&[&[1], &[1]]);
        assert!(matches!(solve(&a, &[int(1), int(2)]), Solution::Inconsistent(_)));
        let a = rats(&[&[1, 1]]);
        assert_eq!(solve(&a, &[int(1)]), Solution::Underdetermined);
    }

    #[test]
    fn nullspace_basis_is_annihilated() {
        let m = rats(&[&[1, 2, 3], &[2, 4, 6]]);
        let ns = nullspace(&m, 3);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(mat_vec(&m, v).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn hnf_is_reduced_and_spans_same_lattice() {
        let a = ints(&[&[2, 4, 4], &[-6, 6, 12], &[10, 4, 16]]);
        let h = hnf(&a);
        assert_eq!(h.len(), 3);
        for i in 0..3 {
            assert!(h[i][i].is_positive());
            for j in 0..i {
                assert!(h[i][j].is_zero());
                assert!(!h[j][i].is_negative() && h[j][i] < h[i][i]);
            }
        }
        // |det| of the lattice is 624 = |det a|.
        assert_eq!(&h[0][0] * &h[1][1] * &h[2][2], BigInt::from(624));
        // Every row of `a` is an integer combination of the rows of `h`.
        let ht: RatMatrix = (0..3)
            .map(|j| (0..3).map(|i| Rat::from_integer(h[i][j].clone())).collect())
            .collect();
        for row in &a {
            let rhs: Vec<Rat> = row.iter().map(|x| Rat::from_integer(x.clone())).collect();
            let Solution::Unique(c) = solve(&ht, &rhs) else { panic!() };
            assert!(c.iter().all(|x| x.is_integer()));
        }
    }

    #[test]
    fn kernel_of_dependent_rows() {
        let k = left_integer_kernel(&ints(&[&[1, 0], &[0, 1], &[1, 1]]));
        assert_eq!(k, ints(&[&[1, 1, -1]]));
        let k = left_integer_kernel(&ints(&[&[2], &[4]]));
        assert_eq!(k, ints(&[&[2, -1]]));
    }
}
