//! Fixed-point data of standard example flows.

use num_traits::{One, Zero};

use super::{
    euler_via_residues, signature_via_indices, FlowFixedData, IntegrationOracle, NormalWeight, StratumComponent,
};
use crate::error::{Error, Result};
use crate::exactnum::Rat;
use crate::polyring::{GenMonomial, Generator};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModelKind {
    /// `CP^m` with the flow `[z_i] -> [exp(i t alpha_i) z_i]`; `alphas` has
    /// `m + 1` entries, conventionally starting with zero.
    Cpm { m: usize, alphas: Vec<Rat> },
    /// `S^4` as the suspension of a linear flow on `S^3`, fixed at the poles.
    SphereSuspension { alpha: Rat, beta: Rat },
    /// Double cover `T^2 x S^2` of a non-orientable flow, fixed along two tori.
    KleinDoubleCover,
}

pub fn build_model(kind: &ModelKind) -> Result<FlowFixedData> {
    match kind {
        ModelKind::Cpm { m, alphas } => cpm(*m, alphas),
        ModelKind::SphereSuspension { alpha, beta } => sphere_suspension(alpha, beta),
        ModelKind::KleinDoubleCover => klein_double_cover(),
    }
}

fn cpm(m: usize, alphas: &[Rat]) -> Result<FlowFixedData> {
    if m == 0 {
        return Err(Error::Argument("CP^m needs m >= 1".into()));
    }
    if alphas.len() != m + 1 {
        return Err(Error::DimensionMismatch(format!(
            "CP^{m} needs {} alphas, got {}",
            m + 1,
            alphas.len()
        )));
    }
    for (i, a) in alphas.iter().enumerate() {
        if alphas[..i].contains(a) {
            return Err(Error::Degenerate(format!("alpha {a} is repeated; the alphas must be pairwise distinct")));
        }
    }
    let comps = alphas
        .iter()
        .enumerate()
        .map(|(j, aj)| {
            let weights: Vec<Rat> = alphas
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != j)
                .map(|(_, ai)| ai - aj)
                .collect();
            StratumComponent::isolated(format!("p{j}"), &weights, true)
        })
        .collect::<Result<Vec<_>>>()?;
    FlowFixedData::new(m, true, comps)
}

fn sphere_suspension(alpha: &Rat, beta: &Rat) -> Result<FlowFixedData> {
    if alpha.is_zero() || beta.is_zero() {
        return Err(Error::Degenerate("alpha and beta must be nonzero".into()));
    }
    let north = StratumComponent::isolated("north", &[alpha.clone(), beta.clone()], true)?;
    let south = StratumComponent::isolated("south", &[alpha.clone(), -beta.clone()], true)?;
    let data = FlowFixedData::new(2, true, vec![north, south])?;
    let chi = euler_via_residues(&data)?;
    if chi != Rat::from_integer(2.into()) {
        return Err(Error::Internal(format!("S^4 model has Euler number {chi}, expected 2")));
    }
    let sigma = signature_via_indices(&data)?;
    if sigma != 0 {
        return Err(Error::Internal(format!("S^4 model has signature {sigma}, expected 0")));
    }
    Ok(data)
}

fn klein_double_cover() -> Result<FlowFixedData> {
    let torus = |name: &str, mu: Rat| {
        let oracle = IntegrationOracle::from_entries([
            (GenMonomial::from_factors([(Generator::Euler, 1)]), Rat::zero()),
            (GenMonomial::from_factors([(Generator::Chern { bundle: 1, k: 1 }, 1)]), Rat::zero()),
        ]);
        StratumComponent::with_tangent(name, 1, vec![NormalWeight::new(mu, 1)], oracle)
    };
    let comps = vec![torus("T+", Rat::one())?, torus("T-", -Rat::one())?];
    FlowFixedData::new(2, false, comps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charforms::{catalog, l_genus_poly};
    use crate::exactnum::int;
    use crate::localize::{characteristic_number, signature_indices};

    fn ints(xs: &[i64]) -> Vec<Rat> {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn cp2_weights() {
        let data = build_model(&ModelKind::Cpm { m: 2, alphas: ints(&[0, 1, 2]) }).unwrap();
        let weights: Vec<Vec<Rat>> = data.components().iter().map(|c| c.expanded_weights()).collect();
        assert_eq!(weights, vec![ints(&[1, 2]), ints(&[-1, 1]), ints(&[-2, -1])]);
        assert_eq!(signature_indices(&data).unwrap(), vec![1, -1, 1]);
        assert_eq!(characteristic_number(&l_genus_poly(2).unwrap(), &data).unwrap(), int(1));
    }

    #[test]
    fn cpm_rejects_repeats() {
        let err = build_model(&ModelKind::Cpm { m: 2, alphas: ints(&[0, 1, 1]) }).unwrap_err();
        assert!(matches!(err, Error::Degenerate(_)));
        let err = build_model(&ModelKind::Cpm { m: 2, alphas: ints(&[0, 1]) }).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch(_)));
    }

    #[test]
    fn sphere() {
        let data = build_model(&ModelKind::SphereSuspension { alpha: int(1), beta: int(1) }).unwrap();
        assert_eq!(data.components().len(), 2);
        assert!(build_model(&ModelKind::SphereSuspension { alpha: int(0), beta: int(1) }).is_err());
    }

    #[test]
    fn klein_numbers_vanish() {
        let data = build_model(&ModelKind::KleinDoubleCover).unwrap();
        for psi in catalog(2).unwrap() {
            assert_eq!(characteristic_number(&psi, &data).unwrap(), int(0), "{}", psi.label());
        }
    }
}
