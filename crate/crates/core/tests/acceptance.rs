//! Acceptance checks: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use brieskorn_core::ab_module::{
    check_commutation, is_simple_pole, lemma22_identity, tensor, ABModule, BPoly, TorsionFixture,
};
use brieskorn_core::curve::{
    annihilator_field, annihilator_form, check_p_witness, gcd_remark_check, invariants, multiplicity_gcd,
    FactoredCurve,
};
use brieskorn_core::rational::{q, qf};
use brieskorn_core::suspension::{milnor_isolated, suspend, verify_suspension_direct};
use brieskorn_core::{Caps, DiffForm, Poly, Vars, WeightSystem, Q};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const BRANCHES: [&str; 6] = ["x", "y", "x+y", "x-y", "x+y^2", "x^2+y^3"];
const SEED: u64 = 0x5eed_2024;

type Check = std::result::Result<(), String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, what: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn xy() -> Vars {
    Vars::new(&["x", "y"]).unwrap()
}

fn p(s: &str) -> Poly {
    Poly::parse(s, &xy()).unwrap()
}

fn golden() -> FactoredCurve {
    FactoredCurve::new(vec![(p("x"), 3)], p("x^3+y^3")).unwrap()
}

fn ones() -> Vec<Q> {
    vec![q(1), q(1)]
}

fn golden_reproduction() -> Check {
    let start = Instant::now();
    let r = invariants(&golden(), Some(&ones()), &Caps::default()).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(r.saturated_jacobian == ["x^2"], || format!("Ĵ = {:?}", r.saturated_jacobian))?;
    ensure((r.mu, r.nu, r.rank) == (9, 4, 13), || format!("(μ, ν, rank) = ({}, {}, {})", r.mu, r.nu, r.rank))?;
    ensure(r.nu_basis == ["1", "x", "y", "x*y"], || format!("ν-basis {:?}", r.nu_basis))?;
    let expected = [
        "1", "x", "y", "x*y", "x^2", "x^3", "x^4", "x^5", "x^2*y", "x^3*y", "x^4*y", "x^5*y", "x^2*y^2",
    ];
    ensure(r.basis == expected, || format!("basis {:?}", r.basis))?;
    let action = r.a_action.ok_or("no a-action")?;
    ensure(action.len() == 13, || "a-action table is incomplete".into())?;
    for e in &action {
        let m = p(&e.element);
        let (mono, _) = m.terms().next().ok_or("empty basis element")?;
        let want = qf(i64::from(mono.0[0] + mono.0[1]) + 2, 6);
        ensure(e.coefficient == want, || format!("a on {} is {}, expected {}", e.element, e.coefficient, want))?;
    }
    ensure(elapsed < Duration::from_secs(10), || format!("took {elapsed:?}"))
}

/// Monomials outside the monomial ideal `(x^{a−1}, y^{b−1})`, counted by
/// enumeration: the Milnor algebra of `x^a + y^b` has exactly this basis.
fn brute_milnor(exponents: &[u32]) -> usize {
    let bound = exponents.iter().copied().max().unwrap_or(0);
    let mut count = 0;
    let mut idx = vec![0u32; exponents.len()];
    loop {
        if idx.iter().zip(exponents).all(|(i, a)| i + 1 < *a) {
            count += 1;
        }
        let mut k = 0;
        loop {
            if k == idx.len() {
                return count;
            }
            idx[k] += 1;
            if idx[k] <= bound {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

fn isolated_regression() -> Check {
    let cases: [(&[&str], &str, &[u32], usize); 3] =
        [(&["x", "y"], "x^2+y^2", &[2, 2], 1), (&["x"], "x^3", &[3], 2), (&["x", "y"], "x^3+y^4", &[3, 4], 6)];
    for (vars, src, exps, want) in cases {
        let f = Poly::parse(src, &Vars::new(vars).unwrap()).unwrap();
        let got = milnor_isolated(&f, None, &Caps::default()).map_err(|e| e.to_string())?.milnor();
        let oracle = brute_milnor(exps);
        ensure(got == want && oracle == want, || format!("μ₀({src}) = {got}, oracle {oracle}, expected {want}"))?;
    }
    Ok(())
}

fn operator_identity() -> Check {
    for n in 1..=8 {
        ensure(lemma22_identity(n), || format!("identity fails at N = {n}"))?;
    }
    Ok(())
}

fn random_curve(rng: &mut ChaCha8Rng) -> FactoredCurve {
    let k = rng.gen_range(1..=3);
    let branches: Vec<&str> = BRANCHES.choose_multiple(rng, k).copied().collect();
    let factors = branches.iter().map(|b| (p(b), rng.gen_range(2..=5))).collect();
    FactoredCurve::pure(factors).unwrap()
}

fn corpus() -> Vec<FactoredCurve> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    (0..60).map(|_| random_curve(&mut rng)).collect()
}

fn annihilator_factorization() -> Check {
    for c in corpus() {
        let f = c.expand();
        let alpha = annihilator_form(&c);
        ensure(DiffForm::differential(&f) == alpha.mul_poly(&c.jacobian_factor()), || {
            format!("df ≠ Π u^(p−1)·α for {c}")
        })?;
        let v = annihilator_field(&c).map_err(|e| e.to_string())?;
        ensure(v.apply(&f).is_zero(), || format!("V·f ≠ 0 for {c}"))?;
    }
    Ok(())
}

fn gcd_remark() -> Check {
    for c in corpus() {
        let delta = multiplicity_gcd(&c);
        let witness = gcd_remark_check(&c).map_err(|e| e.to_string())?;
        match witness {
            Some(h) => {
                ensure(delta > 1, || format!("witness {h} found for {c} with gcd 1"))?;
                let closed = annihilator_form(&c).mul_poly(&h).exterior_derivative().is_zero();
                ensure(closed, || format!("d(h·α) ≠ 0 for witness {h} of {c}"))?;
            }
            None => ensure(delta == 1, || format!("no witness for {c} with gcd {delta}"))?,
        }
    }
    Ok(())
}

fn condition_p() -> Check {
    let nc = FactoredCurve::pure(vec![(p("x"), 2), (p("y"), 2)]).unwrap();
    for c in [golden(), nc] {
        let w = WeightSystem::certify(&c.expand(), ones()).map_err(|e| e.to_string())?;
        let res = check_p_witness(&c, Some(&w), 12).map_err(|e| format!("{c}: {e}"))?;
        ensure(res.holds, || format!("(P) witness false for {c}"))?;
    }
    Ok(())
}

fn suspension_transport() -> Check {
    let g = golden();
    let report = invariants(&g, Some(&ones()), &Caps::default()).map_err(|e| e.to_string())?;
    let z = Vars::new(&["z"]).unwrap();
    let f2 = milnor_isolated(&Poly::parse("z^2", &z).unwrap(), None, &Caps::default()).map_err(|e| e.to_string())?;
    let s = suspend(&f2, &report, 16).map_err(|e| e.to_string())?;
    ensure((s.mu, s.nu, s.rank) == (9, 4, 13), || format!("(μ, ν, rank) = ({}, {}, {})", s.mu, s.nu, s.rank))?;
    let direct = verify_suspension_direct(&f2, &g, None, s.mu, &Caps::default().with_jet_order(14))
        .map_err(|e| e.to_string())?;
    ensure(direct.agrees, || format!("direct μ(F) = {}, transported {}", direct.mu_direct, s.mu))?;
    let f3 = milnor_isolated(&Poly::parse("z^3", &z).unwrap(), None, &Caps::default()).map_err(|e| e.to_string())?;
    let s3 = suspend(&f3, &report, 16).map_err(|e| e.to_string())?;
    ensure(s3.rank == 26, || format!("rank for z³ is {}", s3.rank))
}

fn random_simple_pole(rng: &mut ChaCha8Rng, n: usize) -> ABModule {
    let r = rng.gen_range(1..=3);
    let mut entry = || -> BPoly {
        (0..rng.gen_range(0..=2))
            .map(|_| (rng.gen_range(1..=3u32), qf(rng.gen_range(-4..=4), rng.gen_range(1..=3))))
            .filter(|(_, c)| *c != q(0))
            .collect()
    };
    let m = (0..r).map(|_| (0..r).map(|_| entry()).collect()).collect();
    ABModule::new(n, m, "E").unwrap()
}

fn tensor_properties() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
    for i in 0..100 {
        let (e, f) = (random_simple_pole(&mut rng, 16), random_simple_pole(&mut rng, 16));
        ensure(is_simple_pole(&e) && check_commutation(&e).holds, || format!("sample {i} is not a model"))?;
        let t = tensor(&e, &f).map_err(|e| e.to_string())?;
        ensure(t.rank() == e.rank() * f.rank(), || format!("rank mismatch on sample {i}"))?;
        ensure(check_commutation(&t).holds, || format!("commutation fails on tensor {i}"))?;
        ensure(is_simple_pole(&t), || format!("tensor {i} lost the simple pole"))?;
    }
    for (l, m) in [(qf(1, 3), qf(1, 2)), (qf(5, 6), q(1)), (qf(-2, 7), qf(3, 4))] {
        let el = ABModule::rank_one(l.clone(), 16).map_err(|e| e.to_string())?;
        let em = ABModule::rank_one(m.clone(), 16).map_err(|e| e.to_string())?;
        let t = tensor(&el, &em).map_err(|e| e.to_string())?;
        let want: BPoly = [(1u32, &l + &m)].into_iter().collect();
        ensure(t.entry(0, 0) == &want, || format!("E_{l} ⊗ E_{m} has a-entry {:?}", t.entry(0, 0)))?;
        ensure(check_commutation(&t).holds, || "rank-one tensor fails commutation".into())?;
    }
    Ok(())
}

fn square(rows: &[&[i64]]) -> Vec<Vec<Q>> {
    rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()
}

fn torsion_fixtures() -> Check {
    let mut fixtures = vec![
        TorsionFixture::new(square(&[&[0, 0], &[0, 0]]), square(&[&[0, 0], &[1, 0]])).unwrap(),
        TorsionFixture::new(square(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0]]), square(&[&[0; 3], &[0; 3], &[0; 3]]))
            .unwrap(),
        // A ⊊ B: a has an invertible block on b-torsion, so the axioms fail
        TorsionFixture::new(square(&[&[0, 0], &[0, 1]]), square(&[&[0, 0], &[0, 0]])).unwrap(),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 2);
    for _ in 0..20 {
        let e = random_simple_pole(&mut rng, 4);
        fixtures.push(TorsionFixture::from_module(&e).map_err(|e| e.to_string())?);
    }
    let mut checked = 0;
    for (i, fx) in fixtures.iter().enumerate() {
        if !fx.satisfies_axioms() {
            continue;
        }
        checked += 1;
        let t = fx.torsion_subspaces();
        ensure(t.a_subspace == t.b_torsion, || format!("fixture {i}: A ≠ B"))?;
        ensure(fx.lemma_check(), || format!("fixture {i}: b^(2N)·A ≠ 0"))?;
    }
    ensure(!fixtures[2].satisfies_axioms(), || "the A ⊊ B control passed the axioms".into())?;
    ensure(checked == fixtures.len() - 1, || format!("only {checked} fixtures satisfy the axioms"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("golden curve reproduction", golden_reproduction),
        ("isolated-germ Milnor numbers", isolated_regression),
        ("operator identity N = 1..8", operator_identity),
        ("annihilator factorization", annihilator_factorization),
        ("gcd remark witnesses", gcd_remark),
        ("condition (P) self-test", condition_p),
        ("suspension transport", suspension_transport),
        ("tensor algebra properties", tensor_properties),
        ("torsion fixtures", torsion_fixtures),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        match run() {
            Ok(()) => println!("PASS {} {name} ({:.2?})", k + 1, start.elapsed()),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name}: {why}", k + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
