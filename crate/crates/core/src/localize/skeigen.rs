//! Skew-symmetric rational matrices: skeigen-values, adapted bases and the
//! commutant check for the infinitesimal generator of a flow.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactnum::Rat;
use crate::linalg::{identity, mat_mul, mat_vec, nullspace, rank, RatMatrix};

/// A square skew-symmetric matrix of even size `2k` over the rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkewBlockMatrix {
    entries: RatMatrix,
}

impl SkewBlockMatrix {
    pub fn new(entries: RatMatrix) -> Result<Self> {
        let n = entries.len();
        if n == 0 || n % 2 == 1 {
            return Err(Error::DimensionMismatch(format!("skew matrix must have even positive size, got {n}")));
        }
        if let Some(i) = entries.iter().position(|r| r.len() != n) {
            return Err(Error::DimensionMismatch(format!("row {} has {} entries, expected {n}", i + 1, entries[i].len())));
        }
        for i in 0..n {
            for j in i..n {
                if entries[i][j] != -entries[j][i].clone() {
                    return Err(Error::NotSkew { row: i + 1, col: j + 1 });
                }
            }
        }
        Ok(SkewBlockMatrix { entries })
    }

    /// `diag(R(a_1), ..., R(a_k))` with `R(a) = [[0, -a], [a, 0]]`.
    pub fn block_diag(alphas: &[Rat]) -> Result<Self> {
        let n = 2 * alphas.len();
        let mut m = vec![vec![Rat::zero(); n]; n];
        for (j, a) in alphas.iter().enumerate() {
            m[2 * j][2 * j + 1] = -a.clone();
            m[2 * j + 1][2 * j] = a.clone();
        }
        Self::new(m)
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &RatMatrix {
        &self.entries
    }

    /// The `alpha_j` of a matrix already in block-diagonal normal form.
    pub fn block_alphas(&self) -> Result<Vec<Rat>> {
        let n = self.size();
        let mut out = Vec::with_capacity(n / 2);
        for i in 0..n {
            for j in 0..n {
                if i / 2 != j / 2 && !self.entries[i][j].is_zero() {
                    return Err(Error::Argument(format!(
                        "entry ({}, {}) lies outside the 2x2 diagonal blocks",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        for b in 0..n / 2 {
            let a = self.entries[2 * b + 1][2 * b].clone();
            if a.is_zero() {
                return Err(Error::Degenerate(format!("block {} is zero", b + 1)));
            }
            out.push(a);
        }
        Ok(out)
    }
}

/// Pair of basis vectors spanning an invariant plane of `A`, with
/// `A e_odd = lambda e_even` and `A e_even = -lambda e_odd`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkeigenPair {
    pub lambda: Rat,
    pub e_odd: Vec<Rat>,
    pub e_even: Vec<Rat>,
}

/// Distinct skeigen-values `lambda >= 0` with their multiplicities (number of
/// invariant planes), in increasing order.
pub fn skeigen_decompose(a: &SkewBlockMatrix) -> Result<Vec<(Rat, usize)>> {
    let n = a.size();
    let aa = a.entries();
    // B = -A^2 = A^T A is positive semidefinite with eigenvalues lambda^2.
    let b: RatMatrix = mat_mul(aa, aa)
        .into_iter()
        .map(|r| r.into_iter().map(|x| -x).collect())
        .collect();
    let scale = b
        .iter()
        .flatten()
        .fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let scaled: RatMatrix = b
        .iter()
        .map(|r| r.iter().map(|x| x * Rat::from_integer(scale.clone())).collect())
        .collect();
    let charpoly = charpoly(&scaled);
    let roots = integer_roots(&charpoly);
    let found: usize = roots.iter().map(|(_, k)| k).sum();
    if found != n {
        return Err(Error::IrrationalSkeigen(format!(
            "-A^2 has {} eigenvalues that are not rational",
            n - found
        )));
    }
    let scale = Rat::from_integer(scale);
    let mut out = Vec::new();
    for (r, k) in roots {
        let t = Rat::from_integer(r) / &scale;
        let lambda = rational_sqrt(&t).ok_or_else(|| {
            Error::IrrationalSkeigen(format!("lambda^2 = {t} is not the square of a rational"))
        })?;
        if k % 2 == 1 {
            return Err(Error::Internal(format!("eigenvalue {t} of -A^2 has odd multiplicity {k}")));
        }
        out.push((lambda, k / 2));
    }
    Ok(out)
}

/// A basis adapted to `A`: one [`SkeigenPair`] per invariant plane, grouped
/// by increasing `lambda`. The basis is not orthonormalized, which would
/// leave the rationals.
pub fn skeigen_basis(a: &SkewBlockMatrix) -> Result<Vec<SkeigenPair>> {
    let n = a.size();
    let aa = a.entries();
    let mut out = Vec::new();
    for (lambda, mult) in skeigen_decompose(a)? {
        if lambda.is_zero() {
            let kernel = nullspace(aa, n);
            for pair in kernel.chunks(2) {
                out.push(SkeigenPair { lambda: lambda.clone(), e_odd: pair[0].clone(), e_even: pair[1].clone() });
            }
            continue;
        }
        let l2 = &lambda * &lambda;
        // eigenspace of -A^2 for lambda^2
        let shifted: RatMatrix = mat_mul(aa, aa)
            .into_iter()
            .zip(identity(n))
            .map(|(r, id)| r.into_iter().zip(id).map(|(x, e)| -x - e * &l2).collect())
            .collect();
        let space = nullspace(&shifted, n);
        let mut chosen: RatMatrix = Vec::new();
        for v in space {
            if chosen.len() == 2 * mult {
                break;
            }
            let mut trial = chosen.clone();
            trial.push(v.clone());
            if rank(&trial) == trial.len() {
                let w: Vec<Rat> = mat_vec(aa, &v).into_iter().map(|x| x / &lambda).collect();
                chosen.push(v.clone());
                chosen.push(w.clone());
                out.push(SkeigenPair { lambda: lambda.clone(), e_odd: v, e_even: w });
            }
        }
        if chosen.len() != 2 * mult {
            return Err(Error::Internal(format!("could not complete the basis for lambda = {lambda}")));
        }
    }
    Ok(out)
}

fn rational_sqrt(t: &Rat) -> Option<Rat> {
    let exact = |x: &BigInt| {
        let s = x.sqrt();
        (&s * &s == *x).then_some(s)
    };
    Some(Rat::new(exact(t.numer())?, exact(t.denom())?))
}

// Univariate polynomials as coefficient vectors, lowest degree first.

fn trim(mut p: Vec<Rat>) -> Vec<Rat> {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

/// `det(x I - M)` by Faddeev-LeVerrier.
fn charpoly(m: &[Vec<Rat>]) -> Vec<Rat> {
    let n = m.len();
    let mut coeffs = vec![Rat::zero(); n + 1];
    coeffs[n] = Rat::one();
    let mut mk: RatMatrix = vec![vec![Rat::zero(); n]; n];
    for k in 1..=n {
        // M_k = M M_{k-1} + c_{n-k+1} I
        let mut next = mat_mul(m, &mk);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += &coeffs[n - k + 1];
        }
        mk = next;
        let am = mat_mul(m, &mk);
        let trace = (0..n).fold(Rat::zero(), |acc, i| acc + &am[i][i]);
        coeffs[n - k] = -trace / Rat::from_integer(BigInt::from(k));
    }
    coeffs
}

fn eval(p: &[Rat], x: &Rat) -> Rat {
    p.iter().rev().fold(Rat::zero(), |acc, c| acc * x + c)
}

fn derivative(p: &[Rat]) -> Vec<Rat> {
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * Rat::from_integer(BigInt::from(i)))
        .collect()
}

/// Quotient and remainder of `p / q`, `q` nonzero.
fn divmod(p: &[Rat], q: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
    let mut r = trim(p.to_vec());
    let q = trim(q.to_vec());
    let dq = q.len() - 1;
    if r.len() < q.len() {
        return (Vec::new(), r);
    }
    let mut quot = vec![Rat::zero(); r.len() - dq];
    while r.len() >= q.len() {
        let shift = r.len() - q.len();
        let c = r.last().unwrap() / q.last().unwrap();
        for (i, qi) in q.iter().enumerate() {
            r[shift + i] -= &c * qi;
        }
        quot[shift] = c;
        r.pop();
        r = trim(r);
    }
    (quot, r)
}

fn gcd(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let (_, r) = divmod(&a, &b);
        a = b;
        b = r;
    }
    let lead = a.last().cloned().unwrap_or_else(Rat::one);
    a.into_iter().map(|c| c / &lead).collect()
}

fn sturm_chain(p: &[Rat]) -> Vec<Vec<Rat>> {
    let mut chain = vec![trim(p.to_vec()), trim(derivative(p))];
    loop {
        let n = chain.len();
        if chain[n - 1].is_empty() {
            chain.pop();
            break;
        }
        let (_, r) = divmod(&chain[n - 2], &chain[n - 1]);
        if r.is_empty() {
            break;
        }
        chain.push(r.into_iter().map(|c| -c).collect());
    }
    chain
}

fn sign_changes(chain: &[Vec<Rat>], x: &Rat) -> usize {
    let signs: Vec<bool> = chain
        .iter()
        .map(|p| eval(p, x))
        .filter(|v| !v.is_zero())
        .map(|v| v.is_positive())
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Nonnegative integer roots of a monic integer polynomial with only real,
/// nonnegative roots, with multiplicities, in increasing order.
fn integer_roots(p: &[Rat]) -> Vec<(BigInt, usize)> {
    let mut p = trim(p.to_vec());
    let mut out = Vec::new();
    let zeros = p.iter().take_while(|c| c.is_zero()).count();
    if zeros > 0 {
        out.push((BigInt::zero(), zeros));
        p.drain(..zeros);
    }
    if p.len() <= 1 {
        return out;
    }
    let squarefree = divmod(&p, &gcd(&p, &derivative(&p))).0;
    let chain = sturm_chain(&squarefree);
    // every root lies in (0, sum of roots]
    let n = p.len() - 1;
    let bound = (-&p[n - 1] / &p[n]).ceil().to_integer().max(BigInt::one());
    let mut candidates = Vec::new();
    let mut stack = vec![(BigInt::zero(), bound)];
    while let Some((lo, hi)) = stack.pop() {
        let lo_r = Rat::from_integer(lo.clone());
        let hi_r = Rat::from_integer(hi.clone());
        let count = sign_changes(&chain, &lo_r) - sign_changes(&chain, &hi_r);
        if count == 0 {
            continue;
        }
        if &hi - &lo == BigInt::one() {
            if eval(&squarefree, &hi_r).is_zero() {
                candidates.push(hi);
            }
            continue;
        }
        let mid: BigInt = (&lo + &hi) / 2u32;
        stack.push((mid.clone(), hi));
        stack.push((lo, mid));
    }
    candidates.sort();
    for r in candidates {
        let root = vec![-Rat::from_integer(r.clone()), Rat::one()];
        let mut k = 0;
        loop {
            let (q, rem) = divmod(&p, &root);
            if !rem.is_empty() {
                break;
            }
            p = q;
            k += 1;
        }
        out.push((r, k));
    }
    out
}

/// One block of the commutant decomposition: the planes of `A` sharing the
/// skeigen-value `alpha`, forming a complex subspace of dimension
/// `planes.len()` on which `L` acts complex-linearly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommutantBlock {
    pub alpha: Rat,
    /// Zero-based indices of the 2x2 blocks of `A`.
    pub planes: Vec<usize>,
}

impl CommutantBlock {
    pub fn complex_dim(&self) -> usize {
        self.planes.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CommutantReport {
    Passed { blocks: Vec<CommutantBlock> },
    NotInvertible { rank: usize },
    /// First nonzero entry (1-based) of `L A - A L`.
    CommutationFailure { row: usize, col: usize },
    /// First entry (1-based) of `L` that breaks the block structure.
    BlockStructureFailure { row: usize, col: usize, reason: String },
}

impl CommutantReport {
    pub fn passed(&self) -> bool {
        matches!(self, CommutantReport::Passed { .. })
    }
}

impl fmt::Display for CommutantReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CommutantReport::Passed { blocks } => {
                write!(f, "passed:")?;
                for b in blocks {
                    write!(f, " [alpha = {}, complex dim {}]", b.alpha, b.complex_dim())?;
                }
                Ok(())
            }
            CommutantReport::NotInvertible { rank } => write!(f, "failed: L has rank {rank}"),
            CommutantReport::CommutationFailure { row, col } => {
                write!(f, "failed: (LA - AL)[{row}][{col}] is nonzero")
            }
            CommutantReport::BlockStructureFailure { row, col, reason } => {
                write!(f, "failed: L[{row}][{col}] {reason}")
            }
        }
    }
}

/// Checks that `l` is an invertible matrix commuting with the block-diagonal
/// `a`, and that it preserves each skeigen block complex-linearly. Blocks are
/// grouped by signed `alpha`, so planes rotating in opposite senses are kept
/// apart.
pub fn verify_commutant(l: &[Vec<Rat>], a: &SkewBlockMatrix) -> Result<CommutantReport> {
    let n = a.size();
    if l.len() != n || l.iter().any(|r| r.len() != n) {
        return Err(Error::DimensionMismatch(format!("L must be {n}x{n}")));
    }
    let alphas = a.block_alphas()?;
    let r = rank(l);
    if r < n {
        return Ok(CommutantReport::NotInvertible { rank: r });
    }
    let la = mat_mul(l, a.entries());
    let al = mat_mul(a.entries(), l);
    for i in 0..n {
        for j in 0..n {
            if la[i][j] != al[i][j] {
                return Ok(CommutantReport::CommutationFailure { row: i + 1, col: j + 1 });
            }
        }
    }
    let mut blocks: Vec<CommutantBlock> = Vec::new();
    for (p, alpha) in alphas.iter().enumerate() {
        match blocks.iter_mut().find(|b| &b.alpha == alpha) {
            Some(b) => b.planes.push(p),
            None => blocks.push(CommutantBlock { alpha: alpha.clone(), planes: vec![p] }),
        }
    }
    for i in 0..n {
        for j in 0..n {
            if !l[i][j].is_zero() && alphas[i / 2] != alphas[j / 2] {
                return Ok(CommutantReport::BlockStructureFailure {
                    row: i + 1,
                    col: j + 1,
                    reason: format!(
                        "couples skeigen-values {} and {}",
                        alphas[i / 2],
                        alphas[j / 2]
                    ),
                });
            }
        }
    }
    // complex-linear: L commutes with the unit complex structure J
    let j_unit = SkewBlockMatrix::block_diag(&vec![Rat::one(); n / 2])?;
    let lj = mat_mul(l, j_unit.entries());
    let jl = mat_mul(j_unit.entries(), l);
    for i in 0..n {
        for j in 0..n {
            if lj[i][j] != jl[i][j] {
                return Ok(CommutantReport::BlockStructureFailure {
                    row: i + 1,
                    col: j + 1,
                    reason: "is not complex-linear".into(),
                });
            }
        }
    }
    Ok(CommutantReport::Passed { blocks })
}
