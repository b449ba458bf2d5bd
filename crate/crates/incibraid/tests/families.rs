use incibraid::braidcheck::residual_is_zero;
use incibraid::braiding::verify_structure;
use incibraid::families::{
    check_zero_pattern, family_membership, generate, random_params, t56_coordinates, tab1_coordinates, FamilyId,
};
use incibraid::scalars::Field;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn sweep(id: FamilyId, field: Field, draws: usize, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..draws {
        let inst = random_params(id, field, &mut rng).unwrap();
        let t = generate(&inst).unwrap();
        assert!(residual_is_zero(&t), "{inst}: residual");
        let rep = verify_structure(&t);
        assert!(rep.passed(), "{inst}: {:?}", rep.failures());
        assert!(check_zero_pattern(&t).passed, "{inst}: shape");
        let m = family_membership(&t);
        assert!(m.iter().any(|i| i.family_id == id), "{inst}: membership {m:?}");
    }
}

#[test]
fn t56_families_over_q() {
    for id in FamilyId::t56() {
        sweep(id, Field::Rational, 20, 1);
    }
}

#[test]
fn t56_alpha_of_beta() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for id in [FamilyId::T56_4a_i, FamilyId::T56_4b_i, FamilyId::T56_4b_ii, FamilyId::T56_4c] {
        for _ in 0..20 {
            let inst = random_params(id, Field::Rational, &mut rng).unwrap();
            let co = t56_coordinates(&generate(&inst).unwrap()).unwrap();
            let c = co.common_constant().expect("αᵢ = 1 + Cβᵢ");
            assert!(!c.is_zero());
        }
    }
}

#[test]
fn tab1_families() {
    for id in FamilyId::tab1() {
        sweep(id, Field::Rational, 5, 3);
        sweep(id, Field::prime(5).unwrap(), 5, 4);
    }
}

#[test]
fn tab1_alpha_identities() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for id in FamilyId::tab1() {
        let inst = random_params(id, Field::Rational, &mut rng).unwrap();
        let co = tab1_coordinates(&generate(&inst).unwrap()).unwrap();
        assert!(co.alpha_identities_hold(), "{inst}");
    }
}
