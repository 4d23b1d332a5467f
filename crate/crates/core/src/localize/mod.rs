//! Residue computation of characteristic numbers at the fixed-point
//! components of a flow.
//!
//! For a component with tangent complex dimension `m0` and normal weights
//! `mu_1, ..., mu_tau` (with multiplicities), the residue of an invariant
//! polynomial `psi` is the degree-`m0` part of
//!
//! ```text
//!   psi_hat(lambda_1 + a_1, ..., lambda_m + a_m) / prod_{normal j} (lambda_j + a_j)
//! ```
//!
//! with `lambda = (0, ..., 0, mu_1, ..., mu_1, ..., mu_tau, ..., mu_tau)`,
//! rewritten in the characteristic-class generators of the component and
//! paired with its integration oracle. The characteristic number is the sum
//! of residues, halved when the data describes the orientation double cover
//! of a non-orientable flow.
//!
//! Weights are signed: a negative weight is a normal plane on which the flow
//! rotates against the complex orientation used for the Chern roots. Weights
//! are never normalized; every residue is invariant under `mu -> c * mu` for
//! positive `c`.

mod models;
mod skeigen;

pub use models::{build_model, ModelKind};
pub use skeigen::{
    skeigen_basis, skeigen_decompose, verify_commutant, CommutantBlock, CommutantReport,
    SkeigenPair, SkewBlockMatrix,
};

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::charforms::{pfaffian_poly, InvariantPoly};
use crate::error::{Error, Result};
use crate::exactnum::{serde_rat, Rat};
use crate::polyring::{reduce_to_generators, GenMonomial, Generator, GroupSpec, TruncatedPoly};

/// A distinct normal weight and its complex multiplicity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalWeight {
    #[serde(with = "serde_rat")]
    pub mu: Rat,
    pub mult: usize,
}

impl NormalWeight {
    pub fn new(mu: Rat, mult: usize) -> Self {
        NormalWeight { mu, mult }
    }
}

/// Integrals over a component of top-degree generator monomials.
///
/// Absent entries are errors on lookup, never zero.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IntegrationOracle {
    entries: BTreeMap<GenMonomial, Rat>,
}

impl IntegrationOracle {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_entries<I: IntoIterator<Item = (GenMonomial, Rat)>>(entries: I) -> Self {
        IntegrationOracle { entries: entries.into_iter().collect() }
    }

    /// Parses `(key, value)` string pairs in the canonical rendering.
    pub fn parse<'a, I>(entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, &'a str)>,
    {
        let mut out = BTreeMap::new();
        for (k, v) in entries {
            let key: GenMonomial = k.parse().map_err(|reason| Error::BadOracleKey {
                component: String::new(),
                key: k.to_string(),
                reason,
            })?;
            out.insert(key, crate::exactnum::parse_rat(v)?);
        }
        Ok(IntegrationOracle { entries: out })
    }

    pub fn insert(&mut self, key: GenMonomial, value: Rat) {
        self.entries.insert(key, value);
    }

    pub fn get(&self, key: &GenMonomial) -> Option<&Rat> {
        self.entries.get(key)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&GenMonomial, &Rat)> {
        self.entries.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// One connected component of the fixed-point set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StratumComponent {
    name: String,
    m0: usize,
    normal_weights: Vec<NormalWeight>,
    orientation_matches: bool,
    oracle: IntegrationOracle,
}

impl StratumComponent {
    pub fn new(
        name: impl Into<String>,
        m0: usize,
        normal_weights: Vec<NormalWeight>,
        orientation_matches: bool,
        oracle: IntegrationOracle,
    ) -> Result<Self> {
        let comp = StratumComponent {
            name: name.into(),
            m0,
            normal_weights,
            orientation_matches,
            oracle,
        };
        comp.validate()?;
        Ok(comp)
    }

    /// An isolated fixed point with the given (signed) weights; repeated
    /// weights are merged into multiplicities in order of first appearance.
    pub fn isolated(name: impl Into<String>, weights: &[Rat], orientation_matches: bool) -> Result<Self> {
        Self::new(name, 0, merge_weights(weights), orientation_matches, IntegrationOracle::new())
    }

    /// A component of positive dimension `2 * m0`.
    pub fn with_tangent(
        name: impl Into<String>,
        m0: usize,
        normal_weights: Vec<NormalWeight>,
        oracle: IntegrationOracle,
    ) -> Result<Self> {
        Self::new(name, m0, normal_weights, true, oracle)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn m0(&self) -> usize {
        self.m0
    }

    pub fn normal_weights(&self) -> &[NormalWeight] {
        &self.normal_weights
    }

    pub fn orientation_matches(&self) -> bool {
        self.orientation_matches
    }

    pub fn oracle(&self) -> &IntegrationOracle {
        &self.oracle
    }

    pub fn is_isolated(&self) -> bool {
        self.m0 == 0
    }

    /// Half the ambient dimension: `m0 + sum of multiplicities`.
    pub fn half_dim(&self) -> usize {
        self.m0 + self.normal_weights.iter().map(|w| w.mult).sum::<usize>()
    }

    /// Normal weights listed with multiplicity.
    pub fn expanded_weights(&self) -> Vec<Rat> {
        self.normal_weights
            .iter()
            .flat_map(|w| std::iter::repeat_n(w.mu.clone(), w.mult))
            .collect()
    }

    pub fn group_spec(&self) -> Result<GroupSpec> {
        let sizes: Vec<usize> = self.normal_weights.iter().map(|w| w.mult).collect();
        GroupSpec::for_component(self.m0, &sizes)
    }

    /// Same component with every normal weight multiplied by `c`.
    pub fn scaled(&self, c: &Rat) -> Result<Self> {
        let mut out = self.clone();
        for w in &mut out.normal_weights {
            w.mu = &w.mu * c;
        }
        out.validate()?;
        Ok(out)
    }

    fn validate(&self) -> Result<()> {
        let mut seen: Vec<&Rat> = Vec::new();
        for w in &self.normal_weights {
            if w.mu.is_zero() {
                return Err(Error::Degenerate(format!(
                    "component `{}` has a zero normal weight; each weight must be nonzero",
                    self.name
                )));
            }
            if w.mult == 0 {
                return Err(Error::Degenerate(format!(
                    "component `{}` lists weight {} with multiplicity 0",
                    self.name, w.mu
                )));
            }
            if seen.contains(&&w.mu) {
                return Err(Error::Degenerate(format!(
                    "component `{}` lists weight {} twice; merge it into one multiplicity",
                    self.name, w.mu
                )));
            }
            seen.push(&w.mu);
        }
        if self.half_dim() == 0 {
            return Err(Error::DimensionMismatch(format!("component `{}` has dimension zero", self.name)));
        }
        let spec = self.group_spec()?;
        for (key, _) in self.oracle.entries() {
            self.check_oracle_key(key, &spec)?;
        }
        Ok(())
    }

    fn check_oracle_key(&self, key: &GenMonomial, spec: &GroupSpec) -> Result<()> {
        let bad = |reason: String| Error::BadOracleKey {
            component: self.name.clone(),
            key: key.to_string(),
            reason,
        };
        let tau = self.normal_weights.len() as u32;
        for (g, _) in key.factors() {
            match *g {
                Generator::Pontryagin(i) if self.m0 == 0 || i as usize >= self.m0.max(1) => {
                    return Err(bad(format!("p{i}(E0) is not a generator when m0 = {}", self.m0)))
                }
                Generator::Euler if self.m0 == 0 => {
                    return Err(bad("an isolated point has no tangent bundle".into()))
                }
                Generator::Chern { bundle, k } => {
                    if bundle == 0 || bundle > tau {
                        return Err(bad(format!("normal bundles are E1..E{tau}")));
                    }
                    let size = spec.groups()[bundle as usize - 1 + usize::from(self.m0 > 0)].size;
                    if k as usize > size {
                        return Err(bad(format!("E{bundle} has complex rank {size}")));
                    }
                }
                _ => {}
            }
        }
        let d = key.degree(self.m0);
        if d as usize != self.m0 {
            return Err(bad(format!("degree {d} does not match the component dimension m0 = {}", self.m0)));
        }
        Ok(())
    }
}

fn merge_weights(weights: &[Rat]) -> Vec<NormalWeight> {
    let mut out: Vec<NormalWeight> = Vec::new();
    for w in weights {
        match out.iter_mut().find(|x| &x.mu == w) {
            Some(x) => x.mult += 1,
            None => out.push(NormalWeight::new(w.clone(), 1)),
        }
    }
    out
}

/// Complete fixed-point data of a flow on a manifold of dimension `2m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowFixedData {
    m: usize,
    flow_orientable: bool,
    components: Vec<StratumComponent>,
}

impl FlowFixedData {
    pub fn new(m: usize, flow_orientable: bool, components: Vec<StratumComponent>) -> Result<Self> {
        if m == 0 {
            return Err(Error::DimensionMismatch("m must be positive".into()));
        }
        if components.is_empty() {
            return Err(Error::DimensionMismatch("the fixed-point set has no components".into()));
        }
        for c in &components {
            if c.half_dim() != m {
                return Err(Error::DimensionMismatch(format!(
                    "component `{}`: m0 + sum of multiplicities = {} but m = {m}",
                    c.name,
                    c.half_dim()
                )));
            }
        }
        Ok(FlowFixedData { m, flow_orientable, components })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn flow_orientable(&self) -> bool {
        self.flow_orientable
    }

    pub fn components(&self) -> &[StratumComponent] {
        &self.components
    }

    /// The same components listed twice, marked as a double cover of a
    /// non-orientable flow. Every characteristic number is unchanged.
    pub fn doubled_as_cover(&self) -> Self {
        let mut components = self.components.clone();
        components.extend(self.components.iter().map(|c| {
            let mut c = c.clone();
            c.name = format!("{}'", c.name);
            c
        }));
        FlowFixedData { m: self.m, flow_orientable: false, components }
    }

    pub fn from_json(src: &str) -> Result<Self> {
        let doc: DataDoc = serde_json::from_str(src)?;
        doc.try_into()
    }

    pub fn to_json(&self) -> String {
        let doc = DataDoc::from(self);
        let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
        s.push('\n');
        s
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DataDoc {
    m: usize,
    flow_orientable: bool,
    components: Vec<ComponentDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComponentDoc {
    name: String,
    m0: usize,
    weights: Vec<NormalWeight>,
    #[serde(default = "default_true")]
    orientation_matches: bool,
    #[serde(default)]
    oracle: BTreeMap<String, String>,
}

fn default_true() -> bool {
    true
}

impl TryFrom<DataDoc> for FlowFixedData {
    type Error = Error;

    fn try_from(doc: DataDoc) -> Result<Self> {
        let comps = doc
            .components
            .into_iter()
            .map(|c| {
                let oracle = IntegrationOracle::parse(c.oracle.iter().map(|(k, v)| (k.as_str(), v.as_str())))
                    .map_err(|e| match e {
                        Error::BadOracleKey { key, reason, .. } => Error::BadOracleKey {
                            component: c.name.clone(),
                            key,
                            reason,
                        },
                        other => other,
                    })?;
                StratumComponent::new(c.name.clone(), c.m0, c.weights, c.orientation_matches, oracle)
            })
            .collect::<Result<Vec<_>>>()?;
        FlowFixedData::new(doc.m, doc.flow_orientable, comps)
    }
}

impl From<&FlowFixedData> for DataDoc {
    fn from(d: &FlowFixedData) -> Self {
        DataDoc {
            m: d.m,
            flow_orientable: d.flow_orientable,
            components: d
                .components
                .iter()
                .map(|c| ComponentDoc {
                    name: c.name.clone(),
                    m0: c.m0,
                    weights: c.normal_weights.clone(),
                    orientation_matches: c.orientation_matches,
                    oracle: c.oracle.entries().map(|(k, v)| (k.to_string(), v.to_string())).collect(),
                })
                .collect(),
        }
    }
}

/// Residue of `psi` at one component.
pub fn residue_at_component(psi: &InvariantPoly, comp: &StratumComponent) -> Result<Rat> {
    let m = psi.m();
    if comp.half_dim() != m {
        return Err(Error::DimensionMismatch(format!(
            "component `{}` has half-dimension {} but the polynomial has m = {m}",
            comp.name,
            comp.half_dim()
        )));
    }
    let m0 = comp.m0;
    let cutoff = m0 as u32;
    let mut offsets = vec![Rat::zero(); m0];
    offsets.extend(comp.expanded_weights());

    // At an isolated point whose complex orientation disagrees with the
    // manifold's, the first coordinate is reflected in both the numerator
    // and the normal Euler form.
    let flip = m0 == 0 && !comp.orientation_matches;
    let psi_hat = if flip { psi.psi_hat().negate_vars(&[0]) } else { psi.psi_hat().clone() };
    let numerator = psi_hat.shift_vars(&offsets)?.with_cutoff(cutoff);

    let mut denominator = TruncatedPoly::one(m, cutoff);
    for (j, mu) in offsets.iter().enumerate().skip(m0) {
        let factor = TruncatedPoly::constant(mu.clone(), m, cutoff).add(&TruncatedPoly::var(j, m, cutoff));
        denominator = denominator.mul(&factor);
    }
    if flip {
        denominator = denominator.neg();
    }

    let ratio = numerator.mul(&denominator.invert_unit()?);
    let top = ratio.homogeneous_part(cutoff);
    if m0 == 0 {
        return Ok(top.constant_term());
    }

    let spec = comp.group_spec()?;
    let classes = reduce_to_generators(&top, &spec).map_err(|e| match e {
        Error::NotReducible(w) => Error::Internal(format!(
            "residue integrand at `{}` is not a characteristic class ({w}); the invariant polynomial is invalid",
            comp.name
        )),
        other => other,
    })?;
    let mut total = Rat::zero();
    for (gm, coeff) in classes {
        let value = comp.oracle.get(&gm).ok_or_else(|| Error::IncompleteOracle {
            component: comp.name.clone(),
            monomial: gm.to_string(),
        })?;
        total += coeff * value;
    }
    Ok(total)
}

/// Residues of every component, in input order, evaluated on up to
/// `threads` worker threads.
pub fn component_residues(psi: &InvariantPoly, data: &FlowFixedData, threads: usize) -> Result<Vec<Rat>> {
    let comps = data.components();
    let threads = threads.clamp(1, comps.len().max(1));
    if threads == 1 {
        return comps.iter().map(|c| residue_at_component(psi, c)).collect();
    }
    let chunk = comps.len().div_ceil(threads);
    std::thread::scope(|s| {
        let handles: Vec<_> = comps
            .chunks(chunk)
            .map(|part| s.spawn(move || part.iter().map(|c| residue_at_component(psi, c)).collect::<Vec<_>>()))
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("residue worker panicked"))
            .collect()
    })
}

fn orientation_factor(data: &FlowFixedData) -> Rat {
    if data.flow_orientable {
        Rat::one()
    } else {
        Rat::new(BigInt::one(), BigInt::from(2))
    }
}

/// Sum of residues, halved for the double cover of a non-orientable flow.
pub fn characteristic_number(psi: &InvariantPoly, data: &FlowFixedData) -> Result<Rat> {
    let sum = component_residues(psi, data, 1)?
        .into_iter()
        .fold(Rat::zero(), |a, b| a + b);
    Ok(sum * orientation_factor(data))
}

/// Index `±prod sgn(alpha_i)` of an isolated point, negated when the complex
/// orientation disagrees with the manifold's.
pub fn signature_index(weights: &[Rat], orientation_matches: bool) -> Result<i64> {
    if weights.is_empty() {
        return Err(Error::UnsupportedDimension("the signature index needs at least one weight".into()));
    }
    if weights.iter().any(Zero::is_zero) {
        return Err(Error::Degenerate("zero weight in signature index".into()));
    }
    let negatives = weights.iter().filter(|w| w.is_negative()).count();
    let sign = if negatives % 2 == 0 { 1 } else { -1 };
    Ok(if orientation_matches { sign } else { -sign })
}

/// Per-point indices of an all-isolated fixed-point set, in input order.
pub fn signature_indices(data: &FlowFixedData) -> Result<Vec<i64>> {
    data.components
        .iter()
        .map(|c| {
            if !c.is_isolated() {
                return Err(Error::UnsupportedStratum(format!(
                    "component `{}` has dimension {}; use the L-polynomial residue instead",
                    c.name,
                    2 * c.m0
                )));
            }
            signature_index(&c.expanded_weights(), c.orientation_matches)
        })
        .collect()
}

/// Signature as the sum of point indices (halved for a double cover).
///
/// When `m` is odd the dimension is not divisible by four, the signature is
/// zero, and a nonzero index sum means the data is inconsistent.
pub fn signature_via_indices(data: &FlowFixedData) -> Result<i64> {
    let sum: i64 = signature_indices(data)?.into_iter().sum();
    if data.m % 2 == 1 && sum != 0 {
        return Err(Error::Internal(format!(
            "index sum {sum} in dimension {}; it must vanish when the dimension is not divisible by 4",
            2 * data.m
        )));
    }
    if data.flow_orientable {
        Ok(sum)
    } else if sum % 2 == 0 {
        Ok(sum / 2)
    } else {
        Err(Error::Internal(format!(
            "index sum {sum} over a double cover is odd; the data cannot come from a non-orientable flow"
        )))
    }
}

/// Euler characteristic as the sum of the components' Euler characteristics.
pub fn euler_characteristic(data: &FlowFixedData, chi_values: &[Rat]) -> Result<Rat> {
    if chi_values.len() != data.components.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} Euler characteristics for {} components",
            chi_values.len(),
            data.components.len()
        )));
    }
    let sum = chi_values.iter().fold(Rat::zero(), |a, b| a + b);
    Ok(sum * orientation_factor(data))
}

/// The Pfaffian characteristic number, for cross-checking
/// `euler_characteristic`.
pub fn euler_via_residues(data: &FlowFixedData) -> Result<Rat> {
    characteristic_number(&pfaffian_poly(data.m)?, data)
}

/// Result of [`normalize_weights`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Normalization {
    /// Square of the scalar taking the weights to the unit sphere.
    pub c_squared: Rat,
    pub note: &'static str,
}

pub const SCALE_INVARIANCE_NOTE: &str =
    "residues are invariant under positive rescaling of the weights; normalization is never applied";

impl fmt::Display for Normalization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c^2 = {} ({})", self.c_squared, self.note)
    }
}

/// `c^2 = 1 / sum alpha_j^2`.
pub fn normalize_weights(weights: &[Rat]) -> Result<Normalization> {
    if weights.is_empty() {
        return Err(Error::Argument("no weights given".into()));
    }
    if weights.iter().any(Zero::is_zero) {
        return Err(Error::Degenerate("each weight must be nonzero".into()));
    }
    let sum = weights.iter().fold(Rat::zero(), |acc, w| acc + w * w);
    Ok(Normalization { c_squared: sum.recip(), note: SCALE_INVARIANCE_NOTE })
}
