use incibraid::braidcheck::{aligned, residual_is_zero};
use incibraid::braiding::{build_from_seed, extract_restriction, extract_seed};
use incibraid::coalgebra::IntervalBasis;
use incibraid::families::{generate, random_params, FamilyId};
use incibraid::poset::Poset;
use incibraid::scalars::{Field, Scalar};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn small_field_axioms_exhaustive() {
    for p in [2, 3, 5] {
        let f = Field::prime(p).unwrap();
        let els = f.elements().unwrap();
        for a in &els {
            assert_eq!(a + &f.zero(), *a);
            assert_eq!(a * &f.one(), *a);
            assert!((a + &(-a)).is_zero());
            if !a.is_zero() {
                assert!((a * &a.inv().unwrap()).is_one());
            }
            for b in &els {
                assert_eq!(a + b, b + a);
                assert_eq!(a * b, b * a);
                for c in &els {
                    assert_eq!((a + b) + c, a + (b + c));
                    assert_eq!((a * b) * c, a * (b * c));
                    assert_eq!(a * (b + c), a * b + a * c);
                }
            }
        }
    }
}

fn rational() -> impl Strategy<Value = Scalar> {
    (-50i64..50, 1i64..30).prop_map(|(n, d)| Field::Rational.ratio(n, d).unwrap())
}

/// Random naturally labelled posets on up to five points.
fn poset() -> impl Strategy<Value = Poset> {
    (1usize..=5)
        .prop_flat_map(|n| (Just(n), proptest::collection::vec(any::<bool>(), n * (n - 1) / 2)))
        .prop_map(|(n, bits)| {
            let labels: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
            let mut rel = Vec::new();
            let mut k = 0;
            for i in 0..n {
                for j in i + 1..n {
                    if bits[k] {
                        rel.push((labels[i].clone(), labels[j].clone()));
                    }
                    k += 1;
                }
            }
            Poset::from_cover_relations(&labels, &rel).unwrap()
        })
}

proptest! {
    #[test]
    fn rational_field_axioms(a in rational(), b in rational(), c in rational()) {
        prop_assert_eq!((&a + &b) + &c, &a + (&b + &c));
        prop_assert_eq!(&a * (&b + &c), &a * &b + &a * &c);
        prop_assert_eq!(&a - &a, Field::Rational.zero());
        if !b.is_zero() {
            prop_assert_eq!((&a / &b) * &b, a.clone());
        }
        let text = a.plain();
        prop_assert_eq!(Field::Rational.parse(&text).unwrap(), a);
    }

    #[test]
    fn prime_parse_round_trip(p in prop::sample::select(vec![2u64, 3, 5, 7]), k in -40i64..40) {
        let f = Field::prime(p).unwrap();
        let x = f.int(k);
        prop_assert_eq!(f.parse(&x.plain()).unwrap(), x);
    }

    #[test]
    fn poset_invariants(p in poset()) {
        let n = p.len();
        for a in 0..n {
            prop_assert!(p.leq(a, a));
            for b in 0..n {
                if a != b && p.leq(a, b) {
                    prop_assert!(!p.leq(b, a));
                }
                for c in 0..n {
                    if p.leq(a, b) && p.leq(b, c) {
                        prop_assert!(p.leq(a, c));
                    }
                }
                if p.leq(a, b) {
                    let chains = p.maximal_chains(a, b).unwrap();
                    prop_assert!(!chains.is_empty());
                    let longest = chains.iter().map(|c| c.len() - 1).max().unwrap();
                    prop_assert_eq!(longest, p.h(a, b));
                    for ch in &chains {
                        prop_assert!(ch.windows(2).all(|w| p.is_cover(w[0], w[1])));
                        prop_assert!(ch.iter().all(|x| p.interval(a, b).contains(x)));
                    }
                    if a != b {
                        prop_assert_eq!(p.component_of(a), p.component_of(b));
                    }
                }
            }
        }
        let pairs = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).filter(|&(a, b)| p.leq(a, b)).count();
        prop_assert_eq!(IntervalBasis::new(p.clone()).len(), pairs);
        for f in p.automorphisms() {
            prop_assert!(p.is_order_automorphism(&f));
        }
    }

    #[test]
    fn alignment_is_symmetric(a in rational(), b in rational(), c in rational(), d in rational(), k in rational()) {
        let v = (a.clone(), b.clone());
        let w = (c, d);
        prop_assert_eq!(aligned(&v, &w), aligned(&w, &v));
        prop_assert!(aligned(&v, &(&k * &a, &k * &b)));
    }

    #[test]
    fn seed_determines_chain_solutions(seed in any::<u64>(), k in 0usize..10) {
        let id = FamilyId::t56().nth(k).unwrap();
        let inst = random_params(id, Field::Rational, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let t = generate(&inst).unwrap();
        prop_assert!(residual_is_zero(&t));
        let s = extract_restriction(&t).unwrap();
        prop_assert_eq!(build_from_seed(&extract_seed(&t, &s)).unwrap(), t);
    }
}
