//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero on failure.

mod common;

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use flowloc::charforms::{catalog, l_genus_poly, parse_invariant, pfaffian_poly, pontryagin_poly};
use flowloc::exactnum::{int, rat};
use flowloc::kronecker::{closure_dimension, WeightMatrix};
use flowloc::linalg::{mat_mul, rank};
use flowloc::localize::{
    build_model, characteristic_number, residue_at_component, signature_via_indices, FlowFixedData,
    IntegrationOracle, ModelKind, NormalWeight, StratumComponent,
};
use flowloc::polyring::{
    generator_monomials_of_degree, recompose, reduce_to_generators, GenMonomial, Generator, GroupSpec, TruncatedPoly,
};
use flowloc::Rat;
use rand::Rng;

use common::{cpm, positive_rat, random_component, random_poly, random_weights, rng, small_rat};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    check(elapsed < limit, || format!("took {elapsed:?}, limit {limit:?}"))
}

fn e(err: flowloc::Error) -> String {
    err.to_string()
}

fn c1_s4() -> Outcome {
    // warm up allocations so the timing reflects the computation
    let _ = build_model(&ModelKind::SphereSuspension { alpha: int(1), beta: int(1) });
    let start = Instant::now();
    let data = build_model(&ModelKind::SphereSuspension { alpha: int(1), beta: int(1) }).map_err(e)?;
    let chi = characteristic_number(&pfaffian_poly(2).map_err(e)?, &data).map_err(e)?;
    let sigma = signature_via_indices(&data).map_err(e)?;
    let elapsed = start.elapsed();
    check(chi == int(2), || format!("chi = {chi}"))?;
    check(sigma == 0, || format!("sigma = {sigma}"))?;
    within(elapsed, Duration::from_millis(10))?;
    Ok(format!("chi = 2, sigma = 0 in {elapsed:?}"))
}

fn c2_cpm_signature() -> Outcome {
    let mut r = rng(2);
    let start = Instant::now();
    for m in 2..=6 {
        let expected = if m % 2 == 0 { 1 } else { 0 };
        for _ in 0..20 {
            let kind = cpm(&mut r, m);
            let data = build_model(&kind).map_err(e)?;
            let sigma = signature_via_indices(&data).map_err(e)?;
            check(sigma == expected, || format!("CP^{m} {kind:?}: sigma = {sigma}"))?;
        }
    }
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(1))?;
    Ok(format!("100 models, m = 2..6, in {elapsed:?}"))
}

fn c3_cp2_l_genus() -> Outcome {
    let l = l_genus_poly(2).map_err(e)?;
    let data = build_model(&ModelKind::Cpm { m: 2, alphas: vec![int(0), int(1), int(2)] }).map_err(e)?;
    let residues: Vec<Rat> = data
        .components()
        .iter()
        .map(|c| residue_at_component(&l, c))
        .collect::<Result<_, _>>()
        .map_err(e)?;
    let expected = vec![rat(5, 6), rat(-2, 3), rat(5, 6)];
    check(residues == expected, || format!("residues {residues:?}"))?;
    let mut r = rng(3);
    for _ in 0..20 {
        let data = build_model(&cpm(&mut r, 2)).map_err(e)?;
        let total = characteristic_number(&l, &data).map_err(e)?;
        let sigma = signature_via_indices(&data).map_err(e)?;
        check(total == int(1) && sigma == 1, || format!("L = {total}, sigma = {sigma}"))?;
    }
    Ok("residues 5/6, -2/3, 5/6; L = sigma = 1 on 20 weight sets".into())
}

fn c4_p1_cp2() -> Outcome {
    let p1 = pontryagin_poly(&[1], 2).map_err(e)?;
    let mut r = rng(4);
    for _ in 0..20 {
        let data = build_model(&cpm(&mut r, 2)).map_err(e)?;
        let total = characteristic_number(&p1, &data).map_err(e)?;
        check(total == int(3), || format!("p1 = {total}"))?;
    }
    Ok("p1 = 3 on 20 weight sets".into())
}

fn c5_euler_identity() -> Outcome {
    let mut r = rng(5);
    let key = GenMonomial::from_factors([(Generator::Euler, 1)]);
    for _ in 0..50 {
        let m0 = r.gen_range(1..=2);
        let m = r.gen_range(m0..=5);
        let comp = random_component(&mut r, m, m0);
        let expected = comp.oracle().get(&key).cloned().ok_or("oracle lacks e(E0)")?;
        let got = residue_at_component(&pfaffian_poly(m).map_err(e)?, &comp).map_err(e)?;
        check(got == expected, || format!("{comp:?}: residue {got}, oracle {expected}"))?;
    }
    Ok("50 components, m <= 5, m0 in {1, 2}".into())
}

fn c6_scale_invariance() -> Outcome {
    let mut r = rng(6);
    let mut checks = 0;
    for _ in 0..100 {
        let m = r.gen_range(1..=4);
        let m0 = r.gen_range(0..=m.min(2));
        let comp = random_component(&mut r, m, m0);
        let c = positive_rat(&mut r);
        let scaled = comp.scaled(&c).map_err(e)?;
        for psi in catalog(m).map_err(e)? {
            let a = residue_at_component(&psi, &comp).map_err(e)?;
            let b = residue_at_component(&psi, &scaled).map_err(e)?;
            check(a == b, || format!("{} at {comp:?}, c = {c}: {a} vs {b}", psi.label()))?;
            checks += 1;
        }
    }
    Ok(format!("100 pairs, {checks} residue comparisons"))
}

fn c7_halving() -> Outcome {
    let mut r = rng(7);
    let mut datasets: Vec<FlowFixedData> = Vec::new();
    for m in 1..=4 {
        datasets.push(build_model(&cpm(&mut r, m)).map_err(e)?);
        let comps = (0..3)
            .map(|_| {
                let m0 = r.gen_range(0..=m.min(2));
                random_component(&mut r, m, m0)
            })
            .collect();
        datasets.push(FlowFixedData::new(m, true, comps).map_err(e)?);
    }
    datasets.push(build_model(&ModelKind::SphereSuspension { alpha: int(1), beta: int(2) }).map_err(e)?);
    for data in &datasets {
        let doubled = data.doubled_as_cover();
        for psi in catalog(data.m()).map_err(e)? {
            let a = characteristic_number(&psi, data).map_err(e)?;
            let b = characteristic_number(&psi, &doubled).map_err(e)?;
            check(a == b, || format!("{}: {a} vs {b}", psi.label()))?;
        }
    }
    let klein = build_model(&ModelKind::KleinDoubleCover).map_err(e)?;
    for psi in [pfaffian_poly(2), l_genus_poly(2), pontryagin_poly(&[1], 2)] {
        let psi = psi.map_err(e)?;
        let v = characteristic_number(&psi, &klein).map_err(e)?;
        check(v == int(0), || format!("Klein {} = {v}", psi.label()))?;
    }
    Ok(format!("{} datasets doubled; Klein chi = sigma = p1 = 0", datasets.len()))
}

fn c8_s2_times_s2() -> Outcome {
    let oracle = || {
        IntegrationOracle::from_entries([
            (GenMonomial::from_factors([(Generator::Euler, 1)]), int(2)),
            (GenMonomial::from_factors([(Generator::Chern { bundle: 1, k: 1 }, 1)]), int(0)),
        ])
    };
    let comps = vec![
        StratumComponent::with_tangent("N x S2", 1, vec![NormalWeight::new(int(1), 1)], oracle()).map_err(e)?,
        StratumComponent::with_tangent("S x S2", 1, vec![NormalWeight::new(int(-1), 1)], oracle()).map_err(e)?,
    ];
    let data = FlowFixedData::new(2, true, comps).map_err(e)?;
    let l = l_genus_poly(2).map_err(e)?;
    for comp in data.components() {
        let res = residue_at_component(&l, comp).map_err(e)?;
        check(res == int(0), || format!("L residue at {} = {res}", comp.name()))?;
    }
    // the integrand itself: L reduces to c1(E1)/3 in degree one
    let spec = data.components()[0].group_spec().map_err(e)?;
    let top = l
        .psi_hat()
        .shift_vars(&[int(0), int(1)])
        .map_err(e)?
        .with_cutoff(1)
        .try_mul(
            &TruncatedPoly::from_terms(2, 1, [(vec![0, 0], int(1)), (vec![0, 1], int(1))])
                .map_err(e)?
                .invert_unit()
                .map_err(e)?,
        )
        .map_err(e)?
        .homogeneous_part(1);
    let reduced = reduce_to_generators(&top, &spec).map_err(e)?;
    let c1: GenMonomial = "c1(E1)".parse().map_err(|m: String| m)?;
    check(reduced == BTreeMap::from([(c1, rat(1, 3))]), || format!("integrand {reduced:?}"))?;
    let chi = characteristic_number(&pfaffian_poly(2).map_err(e)?, &data).map_err(e)?;
    check(chi == int(4), || format!("chi = {chi}"))?;
    Ok("L integrand c1(E1)/3, residues 0, 0; chi = 4".into())
}

fn c9_properties() -> Outcome {
    let start = Instant::now();
    let mut r = rng(9);
    for _ in 0..200 {
        let n = r.gen_range(1..=3);
        let cut = r.gen_range(0..=4);
        let p = random_poly(&mut r, n, cut, 5);
        let q = random_poly(&mut r, n, cut, 5);
        let s = random_poly(&mut r, n, cut, 5);
        let lhs = p.try_mul(&q.try_add(&s).map_err(e)?).map_err(e)?;
        let rhs = p.try_mul(&q).map_err(e)?.try_add(&p.try_mul(&s).map_err(e)?).map_err(e)?;
        check(lhs == rhs, || format!("distributivity: {p} | {q} | {s}"))?;
        let assoc_l = p.try_mul(&q).map_err(e)?.try_mul(&s).map_err(e)?;
        let assoc_r = p.try_mul(&q.try_mul(&s).map_err(e)?).map_err(e)?;
        check(assoc_l == assoc_r, || format!("associativity: {p} | {q} | {s}"))?;
        check(p.try_mul(&q).map_err(e)? == q.try_mul(&p).map_err(e)?, || "commutativity".into())?;
        check(p.try_add(&q).map_err(e)? == q.try_add(&p).map_err(e)?, || "commutativity".into())?;
    }
    for _ in 0..200 {
        let n = r.gen_range(1..=3);
        let cut = r.gen_range(0..=4);
        let p = random_poly(&mut r, n, cut, 5).try_add(&TruncatedPoly::constant(positive_rat(&mut r), n, cut));
        let p = p.map_err(e)?;
        if p.constant_term() == int(0) {
            continue;
        }
        let prod = p.try_mul(&p.invert_unit().map_err(e)?).map_err(e)?;
        check(prod == TruncatedPoly::one(n, cut), || format!("invert_unit: {p}"))?;
    }
    for _ in 0..200 {
        let m0 = r.gen_range(0..=3usize);
        let tau = r.gen_range(usize::from(m0 == 0)..=2);
        let sizes: Vec<usize> = (0..tau).map(|_| r.gen_range(1..=2)).collect();
        let spec = GroupSpec::for_component(m0, &sizes).map_err(e)?;
        let d = r.gen_range(0..=4u32);
        let terms: BTreeMap<GenMonomial, Rat> = generator_monomials_of_degree(&spec, d)
            .into_iter()
            .map(|gm| (gm, small_rat(&mut r)))
            .filter(|(_, c)| *c != int(0))
            .collect();
        let p = recompose(&terms, &spec, d).map_err(e)?;
        let back = reduce_to_generators(&p, &spec).map_err(e)?;
        check(back == terms, || format!("recomposition in {spec:?}, degree {d}"))?;
    }
    for _ in 0..100 {
        let w = random_weights(&mut r);
        let (span, ann) = closure_dimension(&w);
        check(span + ann == w.k(), || "dim identity".into())?;
        let d = w.d();
        let change = loop {
            let t: Vec<Vec<Rat>> = (0..d).map(|_| (0..d).map(|_| small_rat(&mut r)).collect()).collect();
            if rank(&t) == d {
                break t;
            }
        };
        let changed = WeightMatrix::new(mat_mul(w.rows(), &change)).map_err(e)?;
        check(closure_dimension(&changed) == (span, ann), || "basis change".into())?;
    }
    for m in 1..=6 {
        for psi in catalog(m).map_err(e)? {
            let back = parse_invariant(&psi.render(), m).map_err(e)?;
            check(back.psi_hat() == psi.psi_hat(), || format!("parser round trip {} at m = {m}", psi.label()))?;
        }
    }
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(30))?;
    Ok(format!("ring laws, inverses, recomposition, kronecker, parser in {elapsed:?}"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("S^4 suspension: Euler number and signature", c1_s4),
        ("CP^m signature by indices, m = 2..6", c2_cpm_signature),
        ("CP^2 L-genus residues and signature", c3_cp2_l_genus),
        ("p1[CP^2] = 3 under weight changes", c4_p1_cp2),
        ("Euler identity on random components", c5_euler_identity),
        ("scale invariance of residues", c6_scale_invariance),
        ("non-orientable halving and Klein model", c7_halving),
        ("S^2 x S^2 with two sphere components", c8_s2_times_s2),
        ("property suites", c9_properties),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS [{}] {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL [{}] {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
