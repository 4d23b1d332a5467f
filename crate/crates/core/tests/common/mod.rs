//! Seeded random fixtures shared by the property and acceptance suites.
#![allow(dead_code)]

use flowloc::exactnum::{int, rat};
use flowloc::kronecker::WeightMatrix;
use flowloc::localize::{IntegrationOracle, ModelKind, NormalWeight, StratumComponent};
use flowloc::polyring::{generator_monomials_of_degree, TruncatedPoly};
use flowloc::Rat;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Small rational `p/q` with `|p| <= 6`, `1 <= q <= 5`.
pub fn small_rat<R: Rng>(r: &mut R) -> Rat {
    rat(r.gen_range(-6..=6), r.gen_range(1..=5))
}

pub fn nonzero_rat<R: Rng>(r: &mut R) -> Rat {
    loop {
        let x = small_rat(r);
        if x != int(0) {
            return x;
        }
    }
}

pub fn positive_rat<R: Rng>(r: &mut R) -> Rat {
    rat(r.gen_range(1..=9), r.gen_range(1..=7))
}

/// `count` pairwise distinct nonzero rationals.
pub fn distinct_nonzero<R: Rng>(r: &mut R, count: usize) -> Vec<Rat> {
    let mut out: Vec<Rat> = Vec::with_capacity(count);
    while out.len() < count {
        let x = nonzero_rat(r);
        if !out.contains(&x) {
            out.push(x);
        }
    }
    out
}

/// Random polynomial with up to `max_terms` terms of degree `<= cutoff`.
pub fn random_poly<R: Rng>(r: &mut R, num_vars: usize, cutoff: u32, max_terms: usize) -> TruncatedPoly {
    let n = r.gen_range(0..=max_terms);
    let terms: Vec<(Vec<u32>, Rat)> = (0..n)
        .map(|_| {
            let deg = r.gen_range(0..=cutoff);
            let mut exps = vec![0u32; num_vars];
            for _ in 0..deg {
                exps[r.gen_range(0..num_vars)] += 1;
            }
            (exps, small_rat(r))
        })
        .collect();
    TruncatedPoly::from_terms(num_vars, cutoff, terms).unwrap()
}

/// `m + 1` pairwise distinct alphas starting at zero.
pub fn random_alphas<R: Rng>(r: &mut R, m: usize) -> Vec<Rat> {
    let mut alphas = vec![int(0)];
    alphas.extend(distinct_nonzero(r, m));
    alphas
}

pub fn cpm<R: Rng>(r: &mut R, m: usize) -> ModelKind {
    ModelKind::Cpm { m, alphas: random_alphas(r, m) }
}

/// A valid component of half-dimension `m` with tangent dimension `m0` and
/// an oracle covering every degree-`m0` generator monomial.
pub fn random_component<R: Rng>(r: &mut R, m: usize, m0: usize) -> StratumComponent {
    assert!(m0 <= m);
    let rest = m - m0;
    let tau = if rest == 0 { 0 } else { r.gen_range(1..=rest.min(3)) };
    // random composition of `rest` into `tau` positive parts
    let mut cuts: Vec<usize> = (1..rest).collect();
    cuts.shuffle(r);
    let mut cuts: Vec<usize> = cuts.into_iter().take(tau.saturating_sub(1)).collect();
    cuts.sort_unstable();
    let mut sizes = Vec::with_capacity(tau);
    let mut prev = 0;
    for c in cuts.into_iter().chain((tau > 0).then_some(rest)) {
        sizes.push(c - prev);
        prev = c;
    }
    let weights: Vec<NormalWeight> = distinct_nonzero(r, tau)
        .into_iter()
        .zip(&sizes)
        .map(|(mu, &mult)| NormalWeight::new(mu, mult))
        .collect();
    if m0 == 0 {
        let orientation = r.gen_bool(0.5);
        return StratumComponent::new("c", 0, weights, orientation, IntegrationOracle::new()).unwrap();
    }
    let spec = flowloc::polyring::GroupSpec::for_component(m0, &sizes).unwrap();
    let oracle = IntegrationOracle::from_entries(
        generator_monomials_of_degree(&spec, m0 as u32)
            .into_iter()
            .map(|gm| (gm, small_rat(r))),
    );
    StratumComponent::with_tangent("c", m0, weights, oracle).unwrap()
}

/// `k x d` weights spanning a space of dimension at most `r`: random
/// combinations of `r` random generators, with zero rows replaced.
pub fn random_weights<R: Rng>(rg: &mut R) -> WeightMatrix {
    let k = rg.gen_range(1..=6);
    let d = rg.gen_range(1..=4);
    let r = rg.gen_range(1..=k.min(d));
    let gens: Vec<Vec<Rat>> = (0..r).map(|_| (0..d).map(|_| small_rat(rg)).collect()).collect();
    let rows = (0..k)
        .map(|_| {
            let row: Vec<Rat> = (0..d)
                .map(|j| gens.iter().fold(int(0), |acc, g| acc + &g[j] * int(rg.gen_range(-2..=2))))
                .collect();
            if row.iter().all(|x| *x == int(0)) {
                (0..d).map(|_| nonzero_rat(rg)).collect()
            } else {
                row
            }
        })
        .collect();
    WeightMatrix::new(rows).unwrap()
}
