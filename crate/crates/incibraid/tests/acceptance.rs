//! Acceptance run: one PASS/FAIL line per criterion. Exits non-zero when a
//! criterion fails that is not listed in `KNOWN_FAILURES`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use incibraid::braidcheck::{
    braid_residual, linear_part_check, residual_is_zero, small_interval_diagnostics, LinearMode, LinearPartData,
};
use incibraid::braiding::{
    build_from_seed, check_configuration_independence, extract_restriction, extract_seed, inputs, verify_structure,
    LambdaTensor,
};
use incibraid::families::{
    check_zero_pattern, enumerate_instances, flip_solution, generate, random_params, t56_coordinates, tab1_coordinates,
    FamilyId,
};
use incibraid::poset::Poset;
use incibraid::scalars::Field;
use incibraid::search::{check_instance, exhaustive_search, SearchSpec};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

// Every identity is checked exactly; the only tolerances are wall-clock
// budgets, measured under the test profile.
const FLIP_BUDGET: Duration = Duration::from_secs(1);
const T56_BUDGET: Duration = Duration::from_secs(30);
const TAB1_BUDGET: Duration = Duration::from_secs(300);
const CENSUS_BUDGET: Duration = Duration::from_secs(10);
const T56_DRAWS: usize = 100;
const TAB1_DRAWS: usize = 50;
const SEED: u64 = 20_240_517;

/// Criteria that cannot pass as stated, with the reason.
const KNOWN_FAILURES: &[(u8, &str)] = &[(
    7,
    "over GF(2) two solutions (β = (1,1,0,0) and (0,0,1,1), Γ1 = 1) lie outside every family; \
     the classification cancels a factor 2 in its third case",
)];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn q() -> Field {
    Field::Rational
}

fn gf(p: u64) -> Field {
    Field::prime(p).unwrap()
}

fn draws(id: FamilyId, field: Field, n: usize, seed: u64) -> Vec<LambdaTensor> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| generate(&random_params(id, field, &mut rng).unwrap()).unwrap())
        .collect()
}

/// Verified instances shared by criteria 4–6, 8 and 10.
fn pool() -> Vec<(String, LambdaTensor)> {
    let mut out = Vec::new();
    for id in FamilyId::t56() {
        for t in draws(id, q(), 3, SEED) {
            out.push((id.to_string(), t));
        }
    }
    for id in FamilyId::tab1() {
        for t in draws(id, gf(5), 2, SEED) {
            out.push((format!("{id} over GF(5)"), t));
        }
        if let Ok(t) = random_params(id, q(), &mut ChaCha8Rng::seed_from_u64(SEED)).map(|i| generate(&i).unwrap()) {
            out.push((id.to_string(), t));
        }
    }
    for p in [Poset::chain(3), Poset::vee()] {
        out.push((format!("flip on {} points", p.len()), flip_solution(&p)));
    }
    out
}

/// Each tensor with one non-group-like entry shifted by 1.
fn perturbed(pool: &[(String, LambdaTensor)]) -> Vec<LambdaTensor> {
    let mut out = Vec::new();
    for (_, t) in pool {
        let basis = t.basis().clone();
        for i in inputs(&basis) {
            if i[0] == i[1] && i[2] == i[3] {
                continue;
            }
            if let Some((o, v)) = t.column(i).into_iter().next() {
                out.push(t.with_entry(i, o, v + t.field().one()).unwrap());
                break;
            }
        }
    }
    out
}

fn criterion1() -> Outcome {
    let start = Instant::now();
    let posets = Poset::enumerate_small(6);
    let bad: Vec<String> = posets
        .iter()
        .filter(|p| {
            let t = flip_solution(p);
            !(verify_structure(&t).passed() && residual_is_zero(&t))
        })
        .map(|p| format!("{:?}", p.labels()))
        .collect();
    let el = start.elapsed();
    outcome(
        bad.is_empty() && el < FLIP_BUDGET,
        format!("{} posets with |Y| ≤ 6, {} failures, {el:.2?} (budget {FLIP_BUDGET:?})", posets.len(), bad.len()),
    )
}

fn criterion2() -> Outcome {
    let start = Instant::now();
    let mut fails = Vec::new();
    let mut n = 0;
    for id in FamilyId::t56() {
        let mut rng = ChaCha8Rng::seed_from_u64(SEED);
        for _ in 0..T56_DRAWS {
            let inst = random_params(id, q(), &mut rng).unwrap();
            n += 1;
            if let Err(e) = check_instance(&inst) {
                fails.push(e);
            }
        }
    }
    let el = start.elapsed();
    outcome(
        fails.is_empty() && el < T56_BUDGET,
        format!("{n} draws over Q, {} failures, {el:.2?} (budget {T56_BUDGET:?}) {}", fails.len(), fails.join("; ")),
    )
}

fn criterion3() -> Outcome {
    let start = Instant::now();
    let mut fails = Vec::new();
    let mut n = 0;
    for id in FamilyId::tab1() {
        // ε families draw C2 as a square over Q; GF(5) also covers C2 = −1
        let eps = matches!(id, FamilyId::Tab1_2a | FamilyId::Tab1_2b | FamilyId::Tab1_4b);
        let fields = if eps { vec![q(), gf(5)] } else { vec![q()] };
        for f in fields {
            let mut rng = ChaCha8Rng::seed_from_u64(SEED);
            for _ in 0..TAB1_DRAWS {
                let inst = match random_params(id, f, &mut rng) {
                    Ok(i) => i,
                    Err(e) => {
                        fails.push(e.to_string());
                        break;
                    }
                };
                n += 1;
                match check_instance(&inst) {
                    Err(e) => fails.push(e),
                    Ok(t) => {
                        if !check_zero_pattern(&t).passed {
                            fails.push(format!("{inst}: zero pattern"));
                        }
                        if !tab1_coordinates(&t).is_some_and(|c| c.alpha_identities_hold()) {
                            fails.push(format!("{inst}: α identities"));
                        }
                    }
                }
            }
        }
    }
    let el = start.elapsed();
    outcome(
        fails.is_empty() && el < TAB1_BUDGET,
        format!("{n} draws, {} failures, {el:.2?} (budget {TAB1_BUDGET:?}) {}", fails.len(), fails.join("; ")),
    )
}

fn criterion4(pool: &[(String, LambdaTensor)], bad: &[LambdaTensor]) -> Outcome {
    let mut disagree = 0;
    let mut solutions = 0;
    let mut non_solutions = 0;
    for t in pool.iter().map(|(_, t)| t).chain(bad) {
        let r = braid_residual(t);
        let Some(f) = r.per_sextuple_failures else {
            disagree += 1;
            continue;
        };
        if f.is_empty() != r.residual_is_zero {
            disagree += 1;
        }
        if r.residual_is_zero {
            solutions += 1;
        } else {
            non_solutions += 1;
        }
    }
    outcome(
        disagree == 0 && solutions >= 20 && non_solutions >= 5,
        format!("{solutions} solutions, {non_solutions} non-solutions, {disagree} disagreements"),
    )
}

fn criterion5(pool: &[(String, LambdaTensor)]) -> Outcome {
    let bad: Vec<&str> = pool
        .iter()
        .filter(|(_, t)| {
            let s = extract_restriction(t).unwrap();
            let fac = verify_structure(t).get("factorization").is_some_and(|v| v.passed);
            !(fac && check_configuration_independence(t, &s).passed)
        })
        .map(|(n, _)| n.as_str())
        .collect();
    outcome(bad.is_empty(), format!("{} instances, failing: {bad:?}", pool.len()))
}

fn criterion6(pool: &[(String, LambdaTensor)]) -> Outcome {
    let bad: Vec<&str> = pool
        .iter()
        .filter(|(_, t)| {
            let s = extract_restriction(t).unwrap();
            build_from_seed(&extract_seed(t, &s)).ok().as_ref() != Some(t)
        })
        .map(|(n, _)| n.as_str())
        .collect();
    outcome(bad.is_empty(), format!("{} instances round-trip, failing: {bad:?}", pool.len() - bad.len()))
}

fn criterion8(pool: &[(String, LambdaTensor)], bad: &[LambdaTensor]) -> Outcome {
    let mut failing = Vec::new();
    for (name, t) in pool {
        let s = extract_restriction(t).unwrap();
        for it in small_interval_diagnostics(t, &s) {
            if [2, 3, 5, 6, 8, 9].contains(&it.item) && !it.verdict.passed {
                failing.push(format!("{name} item {}", it.item));
            }
        }
    }
    // redundancy: whenever 2, 5, 8, counit and graded units hold, so do 4, 7, 10
    let mut premises = 0;
    let mut broken = 0;
    for t in pool.iter().map(|(_, t)| t).chain(bad) {
        let s = extract_restriction(t).unwrap();
        let rep = verify_structure(t);
        let items = small_interval_diagnostics(t, &s);
        let ok = |k: u8| items.iter().any(|i| i.item == k && i.verdict.passed);
        let base = rep.get("counit").is_some_and(|v| v.passed) && rep.get("graded-units").is_some_and(|v| v.passed);
        if base && ok(2) && ok(5) && ok(8) {
            premises += 1;
            if !(ok(4) && ok(7) && ok(10)) {
                broken += 1;
            }
        }
    }
    outcome(
        failing.is_empty() && broken == 0,
        format!(
            "items 2,3,5,6,8,9 on {} instances, failing: {failing:?}; redundancy of 4,7,10 held on {premises} tensors, broken {broken}",
            pool.len()
        ),
    )
}

fn criterion9() -> Outcome {
    let mut tensors: Vec<LambdaTensor> = Vec::new();
    for id in FamilyId::t56() {
        tensors.extend(draws(id, q(), 10, SEED + 1));
    }
    let instances = tensors.len();
    let named: Vec<(String, LambdaTensor)> = tensors.iter().map(|t| (String::new(), t.clone())).collect();
    tensors.extend(perturbed(&named));
    let mut compared = 0;
    let mut without = 0;
    let mut mismatch = 0;
    let mut general_fail = 0;
    for (k, t) in tensors.iter().enumerate() {
        let Some(c) = t56_coordinates(t) else { continue };
        if c.beta.iter().all(|b| b.is_zero()) {
            continue;
        }
        let s = extract_restriction(t).unwrap();
        let d = LinearPartData::from_tensor(t, &s, 1).unwrap();
        // the shared mode pools both sides, which is what a single C needs
        let pass = linear_part_check(&d, LinearMode::SharedTranslation).unwrap().passed;
        if k < instances && !linear_part_check(&d, LinearMode::General).unwrap().passed {
            general_fail += 1;
        }
        compared += 1;
        if c.common_constant().is_none() {
            without += 1;
        }
        if pass != c.common_constant().is_some() {
            mismatch += 1;
        }
    }
    let mut n2 = 0;
    let mut n2_fail = 0;
    for id in [FamilyId::Tab1_4a, FamilyId::Tab1_4b] {
        for t in draws(id, gf(5), 20, SEED + 2) {
            let s = extract_restriction(&t).unwrap();
            let d = LinearPartData::from_tensor(&t, &s, 2).unwrap();
            n2 += 1;
            if !linear_part_check(&d, LinearMode::General).unwrap().passed {
                n2_fail += 1;
            }
        }
    }
    outcome(
        mismatch == 0 && without > 0 && general_fail == 0 && n2_fail == 0,
        format!(
            "n = 1 on {compared} chain tensors ({without} without a common constant), {mismatch} mismatches, \
             {general_fail} instances failing the per-side check; n = 2 over GF(5) on {n2} vee instances, {n2_fail} failures"
        ),
    )
}

fn criterion7() -> Outcome {
    let mut notes = Vec::new();
    let mut pass = true;
    for p in [2, 3] {
        let f = gf(p);
        let start = Instant::now();
        let c = exhaustive_search(&SearchSpec::flip(Poset::two_chain(), f)).unwrap();
        let el = start.elapsed();
        let expected = p.pow(8);
        let missing: usize = FamilyId::t56()
            .flat_map(|id| enumerate_instances(id, f, 1_000_000).unwrap())
            .filter(|i| !c.contains(&generate(i).unwrap()))
            .count();
        let ok = c.candidates == expected && el < CENSUS_BUDGET && c.covered() == c.solutions.len() && missing == 0;
        pass &= ok;
        notes.push(format!(
            "{f}: {} candidates, {} solutions, {} matched, {missing} family instances missing, {el:.2?}",
            c.candidates,
            c.solutions.len(),
            c.covered()
        ));
    }
    let mut spec = SearchSpec::flip(Poset::two_chain(), gf(2));
    let pruned = exhaustive_search(&spec).unwrap();
    spec.pruning = false;
    let raw = exhaustive_search(&spec).unwrap();
    let same = pruned.solutions.len() == raw.solutions.len() && pruned.solutions.iter().all(|e| raw.contains(&e.tensor));
    pass &= same;
    notes.push(format!(
        "pruned/unpruned GF(2) ({} vs {} candidates) coincide: {same}",
        pruned.candidates, raw.candidates
    ));
    outcome(pass, notes.join("; "))
}

fn criterion10(pool: &[(String, LambdaTensor)]) -> Outcome {
    let bad: Vec<&str> = pool
        .iter()
        .filter(|(_, t)| !verify_structure(t).get("vanishing-sums").is_some_and(|v| v.passed))
        .map(|(n, _)| n.as_str())
        .collect();
    outcome(bad.is_empty(), format!("{} instances, failing: {bad:?}", pool.len()))
}

fn main() -> ExitCode {
    let pool = pool();
    let bad = perturbed(&pool);
    let results: Vec<(u8, Outcome)> = vec![
        (1, criterion1()),
        (2, criterion2()),
        (3, criterion3()),
        (4, criterion4(&pool, &bad)),
        (5, criterion5(&pool)),
        (6, criterion6(&pool)),
        (7, criterion7()),
        (8, criterion8(&pool, &bad)),
        (9, criterion9()),
        (10, criterion10(&pool)),
    ];
    let mut unexpected = 0;
    for (n, o) in &results {
        println!("{} criterion {n}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        if !o.pass {
            match KNOWN_FAILURES.iter().find(|(k, _)| k == n) {
                Some((_, why)) => println!("    known: {why}"),
                None => unexpected += 1,
            }
        }
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{unexpected} unexpected failure(s)");
        ExitCode::FAILURE
    }
}
