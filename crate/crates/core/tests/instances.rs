use num_bigint::BigInt;
use num_rational::BigRational;

use picard::analysis::{classify, end_rank, hom_rank, picard_number, SearchParams};
use picard::generate::{cm_pair, noncm_cubic_power, RHO_ZERO_INSTANCE};
use picard::instance::{parse_instance, InstanceError, InstanceFile, Precision};
use picard::numberfield::FieldError;
use picard::torus::{PrecisionPolicy, TorusError};

const SEXTIC_GAUSSIAN: &str = include_str!("data/sextic_gaussian.json");
const SEXTIC_CUBIC: &str = include_str!("data/sextic_cubic.json");

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

#[test]
fn sextic_encodings_satisfy_their_relations() {
    let (k, pi) = parse_instance(SEXTIC_GAUSSIAN, Precision::default()).unwrap();
    let (_, pb) = parse_instance(SEXTIC_CUBIC, Precision::default()).unwrap();
    let i = pi.entry(0, 0);
    assert_eq!(i.mul(i), k.rational(q(-1)));
    let b = pb.entry(0, 0).clone();
    // Both files pin the same embedding, so elements are compatible.
    assert!(i.check_same(&b).is_ok());
    assert_eq!(b.mul(&b).mul(&b), b.add(&k.one()));
    assert_eq!(i.add(&b), k.generator());
}

#[test]
fn gaussian_and_cubic_curves_are_not_isogenous() {
    let (_, pi) = parse_instance(SEXTIC_GAUSSIAN, Precision::default()).unwrap();
    let (_, pb) = parse_instance(SEXTIC_CUBIC, Precision::default()).unwrap();
    assert_eq!(hom_rank(&pi, &pb).unwrap(), 0);
    assert_eq!(hom_rank(&pb, &pi).unwrap(), 0);
    assert_eq!(end_rank(&pi), 2);
    assert_eq!(end_rank(&pb), 1);
    assert_eq!(hom_rank(&pi, &pi).unwrap(), 2);
}

#[test]
fn degree_sixteen_entries_square_correctly() {
    let (k, p) = parse_instance(RHO_ZERO_INSTANCE, Precision::default()).unwrap();
    assert_eq!(k.degree(), 16);
    let i = p.entry(0, 0);
    assert_eq!(i.mul(i), k.rational(q(-1)));
    // (i√m)² = −m
    for (r, c, m) in [(0, 1, 2), (1, 0, 3), (1, 1, 5)] {
        let e = p.entry(r, c);
        assert_eq!(e.mul(e), k.rational(q(-m)), "entry ({r},{c})");
    }
    let r = classify(&p, &SearchParams::default()).unwrap();
    assert_eq!((r.rho, r.degree_d, r.dij[0].d), (0, 16, 6));
    assert!(!r.polarization.is_found());
}

#[test]
fn generated_instance_parses_to_the_same_matrix() {
    let p = noncm_cubic_power(2, Precision::default()).unwrap();
    let text = InstanceFile::from_period_matrix(None, &p).to_json();
    let (_, parsed) = parse_instance(&text, Precision::default()).unwrap();
    assert_eq!(parsed.tau(), p.tau());
    assert_eq!(picard_number(&parsed).0, 3);
}

#[test]
fn validation_errors_surface() {
    let real = r#"{"field": {"minpoly": [1, 0, 1], "root": {"re": "0", "im": "1"}}, "g": 1, "tau": [[["3", "0"]]]}"#;
    assert!(matches!(
        parse_instance(real, Precision::default()),
        Err(InstanceError::Torus(TorusError::DegenerateImaginaryPart { .. }))
    ));
    let far = r#"{"field": {"minpoly": [-2, 0, 1], "root": {"re": "0", "im": "1"}}, "g": 1, "tau": [[["0", "1"]]]}"#;
    assert!(matches!(
        parse_instance(far, Precision::default()),
        Err(InstanceError::Field(FieldError::NoRootNearHint { .. }))
    ));
    let reducible = r#"{"field": {"minpoly": [-1, 0, 1], "root": {"re": "1", "im": "0"}}, "g": 1, "tau": [[["0", "1"]]]}"#;
    assert!(matches!(
        parse_instance(reducible, Precision::default()),
        Err(InstanceError::Field(FieldError::ReduciblePolynomial))
    ));
    let ragged = r#"{"field": {"minpoly": [1, 0, 1], "root": {"re": "0", "im": "1"}}, "g": 2, "tau": [[["0", "1"]]]}"#;
    assert!(matches!(parse_instance(ragged, Precision::default()), Err(InstanceError::Parse(_))));
}

#[test]
fn precision_policy_defaults() {
    let p = cm_pair(Precision::default()).unwrap();
    assert_eq!(p.policy(), PrecisionPolicy { start_bits: 64, max_bits: 4096 });
    assert!(p.certified_bits() >= 64);
}
