use incibraid::families::{enumerate_instances, generate, FamilyId};
use incibraid::poset::Poset;
use incibraid::scalars::Field;
use incibraid::search::{exhaustive_search, random_family_sweep, RestrictionMode, SearchSpec};

fn census(q: u64, pruning: bool) -> incibraid::search::Census {
    let mut spec = SearchSpec::flip(Poset::two_chain(), Field::prime(q).unwrap());
    spec.pruning = pruning;
    exhaustive_search(&spec).unwrap()
}

#[test]
fn chain_census_sizes() {
    let c2 = census(2, true);
    assert_eq!(c2.candidates, 256);
    assert_eq!(c2.solutions.len(), 12);
    let c3 = census(3, true);
    assert_eq!(c3.candidates, 6561);
    assert_eq!(c3.solutions.len(), 72);
}

#[test]
fn gf3_census_is_the_union_of_families() {
    let f = Field::prime(3).unwrap();
    let c = census(3, true);
    assert_eq!(c.covered(), c.solutions.len());
    for id in FamilyId::t56() {
        for inst in enumerate_instances(id, f, 1_000_000).unwrap() {
            let t = generate(&inst).unwrap();
            assert!(c.contains(&t), "{inst} missing from census");
        }
    }
}

#[test]
fn gf2_families_inside_census() {
    let f = Field::prime(2).unwrap();
    let c = census(2, true);
    for id in FamilyId::t56() {
        for inst in enumerate_instances(id, f, 1_000_000).unwrap() {
            assert!(c.contains(&generate(&inst).unwrap()), "{inst} missing from census");
        }
    }
    // Γ1 is unconstrained in the second case-3 family when 2 = 0
    let stray: Vec<_> = c.solutions.iter().filter(|e| e.matches.is_empty()).collect();
    assert_eq!(stray.len(), 2);
}

#[test]
fn pruning_loses_nothing_on_gf2() {
    let a = census(2, true);
    let b = census(2, false);
    assert_eq!(b.free_coordinates, vec![21]);
    assert_eq!(a.solutions.len(), b.solutions.len());
    for e in &a.solutions {
        assert!(b.contains(&e.tensor));
    }
}

#[test]
fn all_restrictions_on_chain() {
    let spec = SearchSpec {
        restriction: RestrictionMode::EnumerateAll,
        ..SearchSpec::flip(Poset::two_chain(), Field::prime(2).unwrap())
    };
    let c = exhaustive_search(&spec).unwrap();
    // x<y has no nontrivial automorphism, so only the flip survives
    assert_eq!(c.restrictions, 1);
    assert_eq!(c.solutions.len(), 12);
}

#[test]
fn antichain_restrictions() {
    let p = Poset::from_cover_relations::<&str>(&["x", "y"], &[]).unwrap();
    let spec = SearchSpec {
        restriction: RestrictionMode::EnumerateAll,
        ..SearchSpec::flip(p, Field::prime(2).unwrap())
    };
    let c = exhaustive_search(&spec).unwrap();
    assert!(c.restrictions >= 1);
    assert!(!c.solutions.is_empty());
}

#[test]
fn sweep_small_families_exactly() {
    let r = random_family_sweep(FamilyId::T56_3b, 10, Field::prime(2).unwrap(), 1);
    assert!(r.exhaustive);
    assert_eq!(r.checked, 2);
    assert!(r.all_passed(), "{r}");
    let r = random_family_sweep(FamilyId::T56_4c, 30, Field::Rational, 7);
    assert!(!r.exhaustive);
    assert_eq!(r.checked, 30);
    assert!(r.all_passed(), "{r}");
}
