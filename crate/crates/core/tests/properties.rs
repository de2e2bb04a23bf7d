use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

use picard::analysis::{end_rank, extension_degree, ns_basis, picard_g2_oracle, picard_number};
use picard::generate::{named_field, random, transformed};
use picard::instance::{InstanceFile, Precision};
use picard::linalg::{kernel_basis, rank_bareiss, rank_naive_oracle, RationalMatrix};
use picard::numberfield::NumberField;
use picard::torus::{build_t, dual, ns_unknowns};

fn cubic() -> NumberField {
    named_field("cubic", Precision::default()).unwrap()
}

fn matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..8, 1usize..10).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-4i64..=4, c), r))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_ring_axioms(a in prop::collection::vec(-5i64..=5, 3),
                         b in prop::collection::vec(-5i64..=5, 3),
                         c in prop::collection::vec(-5i64..=5, 3)) {
        let k = cubic();
        let (a, b, c) = (k.from_poly_ints(&a), k.from_poly_ints(&b), k.from_poly_ints(&c));
        prop_assert_eq!(a.add(&b).mul(&c), a.mul(&c).add(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        if !a.is_zero() {
            prop_assert_eq!(a.mul(&a.inv().unwrap()), k.one());
        }
    }

    #[test]
    fn bareiss_matches_oracle_and_transpose(rows in matrix()) {
        let m = RationalMatrix::from_i64(&rows);
        let r = rank_bareiss(&m);
        prop_assert_eq!(r, rank_naive_oracle(&m).unwrap());
        prop_assert_eq!(r, rank_bareiss(&m.transpose()));
    }

    #[test]
    fn kernel_is_a_complement(rows in matrix()) {
        let m = RationalMatrix::from_i64(&rows);
        let ker = kernel_basis(&m);
        prop_assert_eq!(ker.len() + rank_bareiss(&m), m.cols());
        for v in &ker {
            let q: Vec<BigRational> = v.iter().map(|x| BigRational::from_integer(x.clone())).collect();
            prop_assert!(m.mul_vec(&q).iter().all(Zero::is_zero));
        }
        if !ker.is_empty() {
            let kmat = RationalMatrix::from_rows(m.cols(), ker.iter().map(|v| v.iter().map(|x| BigRational::from_integer(x.clone())).collect()).collect()).unwrap();
            prop_assert_eq!(rank_bareiss(&kmat), ker.len());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn ns_rank_nullity_and_oracle(seed in 0u64..10_000, field in prop::sample::select(vec!["gaussian", "cubic", "zeta8", "sqrt-2", "quartic-2"])) {
        let p = random(field, 2, seed, Precision::default()).unwrap();
        let (rho, rank_t) = picard_number(&p);
        prop_assert_eq!(rho + rank_t, ns_unknowns(2));
        prop_assert!(rho <= 4);
        prop_assert_eq!(rho, picard_g2_oracle(&p).unwrap());
        let basis = ns_basis(&p);
        prop_assert_eq!(basis.len(), rho);
        for cls in &basis {
            prop_assert!(cls.satisfies(&p));
        }
        prop_assert_eq!(rank_t, rank_bareiss(&build_t(&p).rationalize()));
    }

    #[test]
    fn transforms_and_dual_preserve_invariants(seed in 0u64..10_000) {
        let p = random("gaussian", 2, seed, Precision::default()).unwrap();
        let q = transformed(&p, seed ^ 0x5a5a).unwrap();
        prop_assert_eq!(picard_number(&p).0, picard_number(&q).0);
        prop_assert_eq!(extension_degree(&p), extension_degree(&q));
        prop_assert_eq!(end_rank(&p), end_rank(&q));
        let d = dual(&p).unwrap();
        prop_assert_eq!(picard_number(&p).0, picard_number(&d).0);
    }

    #[test]
    fn instance_round_trip(seed in 0u64..10_000, g in 1usize..4) {
        let p = random("cubic", g, seed, Precision::default()).unwrap();
        let file = InstanceFile::from_period_matrix(Some(format!("seed {seed}")), &p);
        let parsed = InstanceFile::from_json(&file.to_json()).unwrap();
        prop_assert_eq!(&parsed, &file);
        let (_, q) = parsed.build(Precision::default()).unwrap();
        prop_assert_eq!(q.tau(), p.tau());
    }
}

#[test]
fn ranks_stay_within_caps() {
    for seed in 0..10 {
        let p = random("zeta8", 2, seed, Precision::default()).unwrap();
        assert!(end_rank(&p) <= 8);
        assert!(picard_number(&p).0 <= 4);
    }
}
