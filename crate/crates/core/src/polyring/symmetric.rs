use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use num_traits::Zero;

use super::{Monomial, TruncatedPoly};
use crate::error::{Error, Result};
use crate::exactnum::Rat;
use crate::linalg::{self, Solution};

/// `e_k` of arbitrary polynomial inputs, via the recurrence for
/// `prod (1 + x_j t)`.
pub(crate) fn elementary_symmetric_of(inputs: &[TruncatedPoly], k: usize, num_vars: usize, cutoff: u32) -> TruncatedPoly {
    let mut e = vec![TruncatedPoly::zero(num_vars, cutoff); k + 1];
    e[0] = TruncatedPoly::one(num_vars, cutoff);
    for x in inputs {
        for j in (1..=k).rev() {
            let add = e[j - 1].mul(x);
            e[j] = e[j].add(&add);
        }
    }
    e.swap_remove(k)
}

/// `e_k` in the variables with (0-based) indices in `vars`.
pub fn elementary_symmetric(k: usize, vars: Range<usize>, num_vars: usize, cutoff: u32) -> Result<TruncatedPoly> {
    if vars.end > num_vars {
        return Err(Error::Argument(format!(
            "variable range {}..{} exceeds {} variables",
            vars.start + 1,
            vars.end,
            num_vars
        )));
    }
    if k > vars.len() {
        return Err(Error::Argument(format!(
            "e_{k} requested in {} variables",
            vars.len()
        )));
    }
    let inputs: Vec<_> = vars.map(|i| TruncatedPoly::var(i, num_vars, cutoff)).collect();
    Ok(elementary_symmetric_of(&inputs, k, num_vars, cutoff))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GroupKind {
    Tangent,
    Normal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Group {
    pub size: usize,
    pub kind: GroupKind,
}

/// Partition of `a1..am` into the tangent group (if any, first) followed by
/// the normal groups, one per distinct normal weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupSpec {
    groups: Vec<Group>,
}

impl GroupSpec {
    pub fn new(groups: Vec<Group>) -> Result<Self> {
        for (i, g) in groups.iter().enumerate() {
            if g.size == 0 {
                return Err(Error::Argument(format!("group {} has size zero", i + 1)));
            }
            if g.kind == GroupKind::Tangent && i != 0 {
                return Err(Error::Argument(
                    "the tangent group must come first and appear at most once".into(),
                ));
            }
        }
        Ok(GroupSpec { groups })
    }

    /// Tangent group of size `m0` (omitted when zero) then normal groups.
    pub fn for_component(m0: usize, normal_sizes: &[usize]) -> Result<Self> {
        let mut groups = Vec::new();
        if m0 > 0 {
            groups.push(Group { size: m0, kind: GroupKind::Tangent });
        }
        groups.extend(normal_sizes.iter().map(|&size| Group { size, kind: GroupKind::Normal }));
        Self::new(groups)
    }

    pub fn num_vars(&self) -> usize {
        self.groups.iter().map(|g| g.size).sum()
    }

    pub fn groups(&self) -> &[Group] {
        &self.groups
    }

    pub fn tangent_size(&self) -> usize {
        match self.groups.first() {
            Some(g) if g.kind == GroupKind::Tangent => g.size,
            _ => 0,
        }
    }

    /// `(variable range, kind, bundle index)`; the tangent bundle is `E0`
    /// and normal bundles are numbered from 1.
    pub fn layout(&self) -> Vec<(Range<usize>, GroupKind, u32)> {
        let mut start = 0;
        let mut next_normal = 1;
        self.groups
            .iter()
            .map(|g| {
                let range = start..start + g.size;
                start += g.size;
                let idx = match g.kind {
                    GroupKind::Tangent => 0,
                    GroupKind::Normal => {
                        next_normal += 1;
                        next_normal - 1
                    }
                };
                (range, g.kind, idx)
            })
            .collect()
    }

    fn normal_range(&self, bundle: u32) -> Option<Range<usize>> {
        self.layout()
            .into_iter()
            .find(|(_, kind, idx)| *kind == GroupKind::Normal && *idx == bundle)
            .map(|(r, _, _)| r)
    }

    fn generators(&self) -> Vec<Generator> {
        let mut out = Vec::new();
        for (range, kind, idx) in self.layout() {
            match kind {
                GroupKind::Tangent => {
                    out.extend((1..range.len() as u32).map(Generator::Pontryagin));
                    out.push(Generator::Euler);
                }
                GroupKind::Normal => {
                    out.extend((1..=range.len() as u32).map(|k| Generator::Chern { bundle: idx, k }));
                }
            }
        }
        out
    }
}

/// Characteristic-class generators: `p_i(E0)`, `e(E0)`, `c_k(E_i)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Generator {
    Pontryagin(u32),
    Euler,
    Chern { bundle: u32, k: u32 },
}

impl Generator {
    /// Degree in the Chern roots; `m0` is the tangent group size.
    pub fn degree(&self, m0: usize) -> u32 {
        match *self {
            Generator::Pontryagin(i) => 2 * i,
            Generator::Euler => m0 as u32,
            Generator::Chern { k, .. } => k,
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Pontryagin(i) => write!(f, "p{i}(E0)"),
            Generator::Euler => f.write_str("e(E0)"),
            Generator::Chern { bundle, k } => write!(f, "c{k}(E{bundle})"),
        }
    }
}

impl FromStr for Generator {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let s = s.trim();
        let (head, rest) = s
            .split_once('(')
            .ok_or_else(|| format!("`{s}` is not of the form name(E<i>)"))?;
        let bundle: u32 = rest
            .strip_suffix(')')
            .and_then(|b| b.strip_prefix('E'))
            .and_then(|b| b.parse().ok())
            .ok_or_else(|| format!("`{s}` has a malformed bundle label"))?;
        let index = |digits: &str| -> std::result::Result<u32, String> {
            digits
                .parse::<u32>()
                .ok()
                .filter(|&i| i > 0)
                .ok_or_else(|| format!("`{s}` has a malformed class index"))
        };
        match head {
            "e" if bundle == 0 => Ok(Generator::Euler),
            "e" => Err(format!("`{s}`: the Euler class generator lives on E0 only")),
            h if h.starts_with('p') => {
                if bundle != 0 {
                    return Err(format!("`{s}`: Pontryagin generators live on E0 only"));
                }
                Ok(Generator::Pontryagin(index(&h[1..])?))
            }
            h if h.starts_with('c') => {
                if bundle == 0 {
                    return Err(format!("`{s}`: Chern generators live on normal bundles E1, E2, ..."));
                }
                Ok(Generator::Chern { bundle, k: index(&h[1..])? })
            }
            _ => Err(format!("`{s}`: unknown generator")),
        }
    }
}

/// Product of generators with positive exponents; the empty product is `1`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GenMonomial(BTreeMap<Generator, u32>);

impl GenMonomial {
    pub fn one() -> Self {
        GenMonomial(BTreeMap::new())
    }

    pub fn from_factors<I: IntoIterator<Item = (Generator, u32)>>(factors: I) -> Self {
        let mut m = BTreeMap::new();
        for (g, e) in factors {
            if e > 0 {
                *m.entry(g).or_insert(0) += e;
            }
        }
        GenMonomial(m)
    }

    pub fn factors(&self) -> impl Iterator<Item = (&Generator, &u32)> {
        self.0.iter()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self, m0: usize) -> u32 {
        self.0.iter().map(|(g, e)| g.degree(m0) * e).sum()
    }

    fn times(&self, g: Generator) -> Self {
        let mut m = self.0.clone();
        *m.entry(g).or_insert(0) += 1;
        GenMonomial(m)
    }
}

impl fmt::Display for GenMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (i, (g, e)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            write!(f, "{g}")?;
            if *e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for GenMonomial {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let s = s.trim();
        if s == "1" {
            return Ok(GenMonomial::one());
        }
        let mut factors = Vec::new();
        for part in s.split('*') {
            let (gen, exp) = match part.rsplit_once('^') {
                Some((g, e)) => (
                    g,
                    e.trim()
                        .parse::<u32>()
                        .ok()
                        .filter(|&e| e > 0)
                        .ok_or_else(|| format!("`{part}` has a malformed exponent"))?,
                ),
                None => (part, 1),
            };
            factors.push((gen.parse::<Generator>()?, exp));
        }
        Ok(GenMonomial::from_factors(factors))
    }
}

fn generator_poly(g: Generator, spec: &GroupSpec, cutoff: u32) -> Result<TruncatedPoly> {
    let n = spec.num_vars();
    let m0 = spec.tangent_size();
    match g {
        Generator::Pontryagin(i) if m0 > 0 && (i as usize) <= m0 => {
            let squares: Vec<_> = (0..m0).map(|j| TruncatedPoly::var(j, n, cutoff).pow(2)).collect();
            Ok(elementary_symmetric_of(&squares, i as usize, n, cutoff))
        }
        Generator::Euler if m0 > 0 => Ok((0..m0).fold(TruncatedPoly::one(n, cutoff), |acc, j| {
            acc.mul(&TruncatedPoly::var(j, n, cutoff))
        })),
        Generator::Chern { bundle, k } => match spec.normal_range(bundle) {
            Some(range) if (k as usize) <= range.len() => elementary_symmetric(k as usize, range, n, cutoff),
            _ => Err(Error::Argument(format!("generator {g} does not exist for this group layout"))),
        },
        _ => Err(Error::Argument(format!("generator {g} does not exist for this group layout"))),
    }
}

/// Expands a generator monomial into the Chern roots.
pub fn expand_generator_monomial(gm: &GenMonomial, spec: &GroupSpec, cutoff: u32) -> Result<TruncatedPoly> {
    let n = spec.num_vars();
    let mut acc = TruncatedPoly::one(n, cutoff);
    for (&g, &e) in gm.factors() {
        acc = acc.mul(&generator_poly(g, spec, cutoff)?.pow(e));
    }
    Ok(acc)
}

/// All generator monomials of total degree `d`, in canonical order.
///
/// Tangent generators are `p_1 .. p_{m0-1}` and `e`; `p_{m0} = e^2` is
/// omitted so the monomials stay linearly independent.
pub fn generator_monomials_of_degree(spec: &GroupSpec, d: u32) -> Vec<GenMonomial> {
    let m0 = spec.tangent_size();
    let gens = spec.generators();
    let mut out = BTreeSet::new();
    fn go(gens: &[Generator], m0: usize, remaining: u32, cur: GenMonomial, out: &mut BTreeSet<GenMonomial>) {
        if remaining == 0 {
            out.insert(cur);
            return;
        }
        let Some((&g, rest)) = gens.split_first() else {
            return;
        };
        // use g zero or more times, then move on
        go(rest, m0, remaining, cur.clone(), out);
        let deg = g.degree(m0);
        let mut next = cur;
        let mut used = 0;
        while deg > 0 && used + deg <= remaining {
            next = next.times(g);
            used += deg;
            go(rest, m0, remaining - used, next.clone(), out);
        }
    }
    go(&gens, m0, d, GenMonomial::one(), &mut out);
    out.into_iter().collect()
}

/// Finds a witness that `p` is not invariant under the symmetries required
/// by `spec`: permutations within each group, and sign flips of pairs of
/// tangent variables.
fn symmetry_witness(p: &TruncatedPoly, spec: &GroupSpec) -> Option<String> {
    for (range, kind, _) in spec.layout() {
        for i in range.start..range.end.saturating_sub(1) {
            for (m, c) in p.terms() {
                let other = m.swapped(i, i + 1);
                let c2 = p.coeff_of(&other);
                if *c != c2 {
                    return Some(format!(
                        "{m} has coefficient {c} but {other} (a{} and a{} swapped) has coefficient {c2}",
                        i + 1,
                        i + 2
                    ));
                }
            }
        }
        if kind == GroupKind::Tangent {
            for i in range.clone() {
                for j in i + 1..range.end {
                    if let Some((m, _)) = p.terms().find(|(m, _)| (m.exps()[i] + m.exps()[j]) % 2 == 1) {
                        return Some(format!(
                            "{m} changes sign under (a{}, a{}) -> (-a{}, -a{})",
                            i + 1,
                            j + 1,
                            i + 1,
                            j + 1
                        ));
                    }
                }
            }
        }
    }
    None
}

/// Writes `p` as a `Rat`-linear combination of generator monomials by
/// solving, degree by degree, the exact linear system between candidate
/// generator monomials and Chern-root monomials.
pub fn reduce_to_generators(p: &TruncatedPoly, spec: &GroupSpec) -> Result<BTreeMap<GenMonomial, Rat>> {
    if p.num_vars() != spec.num_vars() {
        return Err(Error::DimensionMismatch(format!(
            "polynomial in {} variables, group layout covers {}",
            p.num_vars(),
            spec.num_vars()
        )));
    }
    if let Some(w) = symmetry_witness(p, spec) {
        return Err(Error::NotReducible(w));
    }
    let degrees: BTreeSet<u32> = p.terms().map(|(m, _)| m.degree()).collect();
    let mut out = BTreeMap::new();
    for d in degrees {
        let target = p.homogeneous_part(d);
        let candidates = generator_monomials_of_degree(spec, d);
        let expansions = candidates
            .iter()
            .map(|gm| expand_generator_monomial(gm, spec, p.cutoff()))
            .collect::<Result<Vec<_>>>()?;
        let rows: Vec<Monomial> = expansions
            .iter()
            .flat_map(|e| e.terms().map(|(m, _)| m.clone()))
            .chain(target.terms().map(|(m, _)| m.clone()))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let matrix: Vec<Vec<Rat>> = rows
            .iter()
            .map(|m| expansions.iter().map(|e| e.coeff_of(m)).collect())
            .collect();
        let rhs: Vec<Rat> = rows.iter().map(|m| target.coeff_of(m)).collect();
        if candidates.is_empty() {
            return Err(Error::NotReducible(format!(
                "no generator monomial has degree {d}; witness {}",
                target.terms().next().map(|(m, _)| m.to_string()).unwrap_or_default()
            )));
        }
        match linalg::solve(&matrix, &rhs) {
            Solution::Unique(x) => {
                for (gm, c) in candidates.into_iter().zip(x) {
                    if !c.is_zero() {
                        out.insert(gm, c);
                    }
                }
            }
            Solution::Inconsistent(row) => {
                return Err(Error::NotReducible(format!(
                    "the coefficient of {} cannot be matched by generator monomials of degree {d}",
                    rows[row]
                )))
            }
            Solution::Underdetermined => {
                return Err(Error::Internal(format!(
                    "generator monomials of degree {d} are linearly dependent"
                )))
            }
        }
    }
    Ok(out)
}

/// Inverse of `reduce_to_generators`.
pub fn recompose(terms: &BTreeMap<GenMonomial, Rat>, spec: &GroupSpec, cutoff: u32) -> Result<TruncatedPoly> {
    let mut acc = TruncatedPoly::zero(spec.num_vars(), cutoff);
    for (gm, c) in terms {
        acc = acc.add(&expand_generator_monomial(gm, spec, cutoff)?.scale(c));
    }
    Ok(acc)
}

impl std::ops::Mul for GenMonomial {
    type Output = GenMonomial;

    fn mul(self, rhs: Self) -> Self {
        GenMonomial::from_factors(self.0.into_iter().chain(rhs.0))
    }
}
