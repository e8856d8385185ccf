//! Acceptance criteria, one pass/fail line each. Runs without the libtest
//! harness so the lines are always printed.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use cy3_core::derivation::{check_delta_r_zero, extend_derivation, transport_presentation};
use cy3_core::fixtures::{self, Fixture};
use cy3_core::homology::{
    associativity_failures, base_resolution_check, chain_map_commutation_check, graded_symmetry_check,
    koszul_dual_mul, mapping_cone_check, pairing_matrix, ChainMapVariant, KoszulDualElement,
};
use cy3_core::normalform::{
    closed_form_check, coherence_witness_check, complete_gb, ore_denominator, ore_recurrence, CoherenceReport,
    HilbertData,
};
use cy3_core::quadratic::{is_standard, reduce_to_standard};
use cy3_core::superpotential::{
    build_superpotential, cyclicity_failures, dual_basis_reconstruction, jacobian_presentation_check,
    ore_presentation, OrePresentation,
};
use cy3_core::tensoralg::{nc_mul, parse_poly, rat};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Check = std::result::Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn ore(f: &Fixture) -> OrePresentation {
    ore_presentation(&f.presentation, &f.derivation, "z").expect("Ore presentation")
}

fn examples() -> Vec<Fixture> {
    vec![fixtures::smith(), fixtures::twogen(rat(1), rat(1), rat(1))]
}

fn superpotential_reproduction() -> Check {
    let f = fixtures::twogen(rat(1), rat(1), rat(1));
    let op = ore(&f);
    let w = build_superpotential(&op).map_err(|e| e.to_string())?;
    let expected = parse_poly(&op.gens_hat, "yxz+zyx+xzy-xyz-zxy-yzx-x^3+y^3+xyx+x^2y+yx^2").expect("display parses");
    ensure(w.poly() == &expected, format!("got {}", w.poly().render(&op.gens_hat)))?;
    ensure(w.poly().len() == 11, "term count")?;
    Ok(format!("w = {}", w.poly().render(&op.gens_hat)))
}

fn delta_r_certificates() -> Check {
    let mut cases = vec![fixtures::smith()];
    for (a, b, c) in [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1)] {
        cases.push(fixtures::twogen(rat(a), rat(b), rat(c)));
    }
    for f in &cases {
        let ok = check_delta_r_zero(&f.derivation, &f.presentation).map_err(|e| e.to_string())?;
        ensure(ok, format!("δ(r) ≠ 0 for {}", f.name))?;
    }
    Ok(format!("{} presentations", cases.len()))
}

fn hilbert_series() -> Check {
    let f = fixtures::twogen(rat(1), rat(1), rat(1));
    let op = ore(&f);
    let gb = complete_gb(op.nvars(), &op.relations, 8).map_err(|e| e.to_string())?;
    let h = gb.normal_word_counts();
    ensure(h == vec![1, 3, 6, 10, 15, 21, 28, 36, 45], format!("n=2: {h:?}"))?;
    ensure(h.iter().map(|&x| x as i128).eq(ore_recurrence(2, 9)), "n=2 recurrence")?;
    ensure(closed_form_check(&HilbertData::new(h.clone()), &[1], &ore_denominator(2)), "n=2 closed form")?;

    let op = ore(&fixtures::smith());
    let gb = complete_gb(op.nvars(), &op.relations, 4).map_err(|e| e.to_string())?;
    let hs = gb.normal_word_counts();
    ensure(hs == vec![1, 7, 42, 246, 1435], format!("Smith: {hs:?}"))?;
    ensure(hs.iter().map(|&x| x as i128).eq(ore_recurrence(6, 5)), "Smith recurrence")?;
    ensure(closed_form_check(&HilbertData::new(hs.clone()), &[1], &ore_denominator(6)), "Smith closed form")?;
    Ok(format!("n=2 {h:?}; n=6 {hs:?}"))
}

fn calabi_yau_certificate() -> Check {
    let mut ranks = Vec::new();
    for f in examples() {
        let m = f.presentation.matrix.matrix();
        ensure(graded_symmetry_check(m, &f.derivation).map_err(|e| e.to_string())?, format!("{} not symmetric", f.name))?;
        let rank = pairing_matrix(m, &f.derivation).map_err(|e| e.to_string())?.rank();
        ensure(rank == f.presentation.n() + 1, format!("{} pairing rank {rank}", f.name))?;
        ranks.push(rank);
    }
    Ok(format!("pairing ranks {ranks:?}"))
}

fn jacobian_presentation() -> Check {
    let mut out = Vec::new();
    for f in examples() {
        let op = ore(&f);
        let w = build_superpotential(&op).map_err(|e| e.to_string())?;
        ensure(cyclicity_failures(w.poly()).map_err(|e| e.to_string())?.is_empty(), format!("{} not cyclic", f.name))?;
        let rep = jacobian_presentation_check(&op, &w).map_err(|e| e.to_string())?;
        ensure(rep.holds(), format!("{}: {rep:?}", f.name))?;
        out.push(format!("{} rank {}", f.name, rep.union_rank));
    }
    Ok(out.join(", "))
}

fn resolution_exactness() -> Check {
    let mut out = Vec::new();
    for (f, bound) in [(fixtures::twogen(rat(1), rat(1), rat(1)), 6), (fixtures::smith(), 4)] {
        let n = f.presentation.n();
        let gb_a = complete_gb(n, &[f.presentation.relation.clone()], bound).map_err(|e| e.to_string())?;
        let base = base_resolution_check(&f.presentation, &gb_a, bound).map_err(|e| e.to_string())?;
        ensure(base.holds(), format!("{} base resolution", f.name))?;
        let op = ore(&f);
        let gb_b = complete_gb(op.nvars(), &op.relations, bound).map_err(|e| e.to_string())?;
        let cone = mapping_cone_check(&op, &gb_b, bound).map_err(|e| e.to_string())?;
        ensure(cone.holds(), format!("{} mapping cone", f.name))?;
        let comm = chain_map_commutation_check(&op, &gb_b, bound, ChainMapVariant::Full).map_err(|e| e.to_string())?;
        ensure(comm.holds(), format!("{} chain map {comm:?}", f.name))?;
        out.push(format!("{} through degree {bound}", f.name));
    }
    Ok(out.join(", "))
}

fn coherence_witnesses() -> Check {
    let smith = fixtures::smith();
    let p = reduce_to_standard(&smith.presentation.matrix).map_err(|e| e.to_string())?;
    let (pres, d) = transport_presentation(&smith.presentation, &smith.derivation, &p).map_err(|e| e.to_string())?;
    let transported = ore_presentation(&pres, &d, "z").map_err(|e| e.to_string())?;
    let flat = ore(&fixtures::polynomial_extension(4));
    let mut out = Vec::new();
    for (name, op) in [("smith (standard form)", transported), ("n=4, δ=0", flat)] {
        let report = coherence_witness_check(&op, 4).map_err(|e| e.to_string())?;
        let CoherenceReport::Witnesses(w) = report else {
            return Err(format!("{name}: {report:?}"));
        };
        ensure(w.quotient_dims == vec![1, 2, 3, 4, 5], format!("{name}: quotient {:?}", w.quotient_dims))?;
        ensure(w.images_commute, format!("{name}: images do not commute"))?;
        ensure(w.hilbert_identity_ok, format!("{name}: Hilbert identity"))?;
        ensure(w.holds(), format!("{name}: {w:?}"))?;
        out.push(name.to_string());
    }
    Ok(out.join(", "))
}

fn standard_form_reduction() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(20_260_101);
    let sizes = [2usize, 4, 6];
    for i in 0..50 {
        let n = sizes[i % 3];
        let m = common::random_invertible_antisym(&mut rng, n);
        let p = reduce_to_standard(&m).map_err(|e| format!("case {i}: {e}"))?;
        let reduced = m.congruent(&p).map_err(|e| e.to_string())?;
        ensure(is_standard(&reduced), format!("case {i}: not standard"))?;
    }
    Ok("50 matrices".into())
}

fn runner(cases: u32) -> TestRunner {
    TestRunner::new_with_rng(Config { cases, failure_persistence: None, ..Config::default() }, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn err<T: std::fmt::Debug>(name: &str, e: proptest::test_runner::TestError<T>) -> String {
    format!("{name}: {e:?}")
}

fn property_suites() -> Check {
    let mut done = Vec::new();

    runner(128)
        .run(&(1usize..=4).prop_flat_map(|n| (Just(n), common::derivation(n), common::poly(n, 3, 3), common::poly(n, 3, 3))), |(_, d, p, q)| {
            let lhs = extend_derivation(&d, &(&p * &q)).unwrap();
            let rhs = &(&extend_derivation(&d, &p).unwrap() * &q) + &(&p * &extend_derivation(&d, &q).unwrap());
            prop_assert_eq!(lhs, rhs);
            Ok(())
        })
        .map_err(|e| err("Leibniz", e))?;
    done.push("Leibniz");

    runner(128)
        .run(&(1usize..=6).prop_flat_map(|n| (common::poly(n, 4, 3), common::poly(n, 4, 3), common::poly(n, 4, 3))), |(a, b, c)| {
            let left = nc_mul(&nc_mul(&a, &b).unwrap(), &c).unwrap();
            let right = nc_mul(&a, &nc_mul(&b, &c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
            Ok(())
        })
        .map_err(|e| err("associativity", e))?;
    done.push("nc_mul associativity");

    runner(128)
        .run(&(1usize..=6, 1usize..=4).prop_flat_map(|(n, d)| common::homogeneous_poly(n, d, 5)), |p| {
            prop_assert_eq!(dual_basis_reconstruction(&p).unwrap(), p);
            Ok(())
        })
        .map_err(|e| err("dual basis", e))?;
    done.push("dual-basis reconstruction");

    runner(128)
        .run(
            &(1usize..=6).prop_flat_map(|n| {
                (common::antisym(n), prop::collection::vec(common::small_rational(), n), prop::collection::vec(common::small_rational(), n))
            }),
            |(m, a, b)| {
                let (x, y) = (KoszulDualElement::linear(a), KoszulDualElement::linear(b));
                let xy = koszul_dual_mul(&x, &y, m.matrix()).unwrap();
                let yx = koszul_dual_mul(&y, &x, m.matrix()).unwrap();
                prop_assert_eq!(xy.clone(), yx.scale(&rat(-1)));
                prop_assert!(koszul_dual_mul(&x, &x, m.matrix()).unwrap().is_zero());
                Ok(())
            },
        )
        .map_err(|e| err("A! anti-symmetry", e))?;
    done.push("A! anti-symmetry");

    let mut yoneda_cases: Vec<Fixture> = examples();
    yoneda_cases.push(fixtures::polynomial_extension(4));
    for (a, b, c) in [(2, -1, 3), (0, 5, -2), (1, 0, 0)] {
        yoneda_cases.push(fixtures::twogen(rat(a), rat(b), rat(c)));
    }
    for f in &yoneda_cases {
        let bad = associativity_failures(f.presentation.matrix.matrix(), &f.derivation).map_err(|e| e.to_string())?;
        ensure(bad.is_empty(), format!("Yoneda associativity fails for {} at {:?}", f.name, bad.first()))?;
    }
    done.push("Yoneda associativity");

    let confluence_cases: Vec<OrePresentation> =
        vec![ore(&fixtures::twogen(rat(1), rat(1), rat(1))), ore(&fixtures::twogen(rat(2), rat(-1), rat(3)))];
    for op in &confluence_cases {
        let gb = complete_gb(op.nvars(), &op.relations, 5).map_err(|e| e.to_string())?;
        let nv = op.nvars();
        runner(128)
            .run(&(common::poly(nv, 5, 4), any::<u64>()), |(p, seed)| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let direct = gb.normal_form(&p).unwrap();
                for _ in 0..3 {
                    prop_assert_eq!(gb.normal_form_random(&p, &mut rng).unwrap(), direct.clone());
                }
                Ok(())
            })
            .map_err(|e| err("confluence", e))?;
    }
    done.push("normal-form confluence");
    Ok(done.join(", "))
}

fn main() {
    let criteria: Vec<(&str, Duration, fn() -> Check)> = vec![
        ("AC1 superpotential reproduction", Duration::from_secs(1), superpotential_reproduction),
        ("AC2 δ(r)=0 certificates", Duration::from_secs(1), delta_r_certificates),
        ("AC3 Hilbert series vs closed form", Duration::from_secs(60), hilbert_series),
        ("AC4 Calabi-Yau certificate", Duration::from_secs(1), calabi_yau_certificate),
        ("AC5 Jacobian presentation and cyclicity", Duration::from_secs(60), jacobian_presentation),
        ("AC6 resolution exactness", Duration::from_secs(120), resolution_exactness),
        ("AC7 coherence witnesses", Duration::from_secs(60), coherence_witnesses),
        ("AC8 standard-form reduction", Duration::from_secs(5), standard_form_reduction),
        ("AC9 property suites", Duration::from_secs(300), property_suites),
    ];
    let mut failures = 0;
    for (name, budget, check) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > budget => Err(format!("{detail}; exceeded {budget:?}")),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("PASS {name} ({:.2}s): {detail}", elapsed.as_secs_f64()),
            Err(detail) => {
                failures += 1;
                println!("FAIL {name} ({:.2}s): {detail}", elapsed.as_secs_f64());
            }
        }
    }
    if failures > 0 {
        println!("{failures} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all acceptance criteria passed");
}
