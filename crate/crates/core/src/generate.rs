//! Seeded instance generators.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::instance::{InstanceError, InstanceFile, Precision};
use crate::numberfield::{FieldElement, FieldError, NumberField, RootHint};
use crate::torus::{diagonal, unimodular_transform, PeriodMatrix, TorusError};

/// Instance shipped with the crate: `τ = i·[[1, √2], [√3, √5]]` over a degree-16 field.
pub const RHO_ZERO_INSTANCE: &str = include_str!("../data/rho_zero_deg16.json");

const RETRIES: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenerationError {
    #[error("invalid generator parameter: {0}")]
    InvalidParameter(String),
    #[error("generation failed after {attempts} attempts")]
    GenerationFailed { attempts: usize },
    #[error(transparent)]
    Instance(#[from] InstanceError),
}

impl From<FieldError> for GenerationError {
    fn from(e: FieldError) -> Self {
        GenerationError::Instance(e.into())
    }
}

impl From<TorusError> for GenerationError {
    fn from(e: TorusError) -> Self {
        GenerationError::Instance(e.into())
    }
}

/// Built-in fields, by name.
pub const FIELD_NAMES: [&str; 5] = ["gaussian", "sqrt-2", "cubic", "zeta8", "quartic-2"];

fn ints(c: &[i64]) -> Vec<BigInt> {
    c.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn named_field(name: &str, precision: Precision) -> Result<NumberField, GenerationError> {
    let (poly, re, im): (&[i64], &str, &str) = match name {
        "gaussian" => (&[1, 0, 1], "0", "1"),
        "sqrt-2" => (&[2, 0, 1], "0.000", "1.414"),
        "cubic" => (&[-1, -1, 0, 1], "-0.66", "0.56"),
        "zeta8" => (&[1, 0, 0, 0, 1], "0.7071", "0.7071"),
        "quartic-2" => (&[-2, 0, 0, 0, 1], "0.0000", "1.1892"),
        other => {
            return Err(GenerationError::InvalidParameter(format!(
                "unknown field {other:?}; expected one of {}",
                FIELD_NAMES.join(", ")
            )))
        }
    };
    Ok(NumberField::with_max_precision(&ints(poly), &RootHint::new(re, im), precision.bits, precision.max_bits)?)
}

/// `Q(√d)` for `d < 0`, generated by `√d` with positive imaginary part.
pub fn imaginary_quadratic(d: i64, precision: Precision) -> Result<NumberField, GenerationError> {
    if d >= 0 {
        return Err(GenerationError::InvalidParameter(format!("discriminant {d} must be negative")));
    }
    let im = format!("{:.4}", (-(d as f64)).sqrt());
    Ok(NumberField::with_max_precision(&ints(&[-d, 0, 1]), &RootHint::new("0.0000", im), precision.bits, precision.max_bits)?)
}

/// `τ = diag(√d, …, √d)`: the g-th power of a CM elliptic curve.
pub fn cm_power(d: i64, g: usize, precision: Precision) -> Result<PeriodMatrix, GenerationError> {
    check_g(g)?;
    let k = imaginary_quadratic(d, precision)?;
    Ok(diagonal(&k, &vec![k.generator(); g], precision.policy())?)
}

/// `τ = diag(β, …, β)`, β a non-real root of `x³ − x − 1`.
pub fn noncm_cubic_power(g: usize, precision: Precision) -> Result<PeriodMatrix, GenerationError> {
    check_g(g)?;
    let k = named_field("cubic", precision)?;
    Ok(diagonal(&k, &vec![k.generator(); g], precision.policy())?)
}

/// `τ = diag(ζ², ζ + ζ³)` with `ζ⁴ = −1`: two non-isogenous CM curves.
pub fn cm_pair(precision: Precision) -> Result<PeriodMatrix, GenerationError> {
    let k = named_field("zeta8", precision)?;
    let z = k.generator();
    let z2 = z.mul(&z);
    Ok(diagonal(&k, &[z2.clone(), z.add(&z2.mul(&z))], precision.policy())?)
}

fn check_g(g: usize) -> Result<(), GenerationError> {
    if g == 0 {
        return Err(GenerationError::InvalidParameter("g must be positive".into()));
    }
    Ok(())
}

fn random_element(k: &NumberField, rng: &mut ChaCha8Rng) -> FieldElement {
    let coords = (0..k.degree()).map(|_| BigRational::from_integer(rng.gen_range(-3i64..=3).into())).collect();
    k.element(coords).expect("degree-length coordinates")
}

/// Random `τ` with small integer coordinates over a given field, redrawn until
/// `det(Im τ) ≠ 0` is certified.
pub fn random_over(k: &NumberField, g: usize, seed: u64, precision: Precision) -> Result<PeriodMatrix, GenerationError> {
    check_g(g)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RETRIES {
        let rows = (0..g).map(|_| (0..g).map(|_| random_element(k, &mut rng)).collect()).collect();
        match PeriodMatrix::new(k, rows, precision.policy()) {
            Ok(p) => return Ok(p),
            Err(TorusError::DegenerateImaginaryPart { .. }) => continue,
            Err(e) => return Err(e.into()),
        }
    }
    Err(GenerationError::GenerationFailed { attempts: RETRIES })
}

pub fn random(field: &str, g: usize, seed: u64, precision: Precision) -> Result<PeriodMatrix, GenerationError> {
    random_over(&named_field(field, precision)?, g, seed, precision)
}

/// Random unimodular `2g × 2g` integer matrix: a row permutation followed by
/// a few elementary row additions.
pub fn random_unimodular(g: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<i64>> {
    let n = 2 * g;
    let mut m: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i);
        m.swap(i, j);
    }
    for _ in 0..2 * n {
        let i = rng.gen_range(0..n);
        let j = rng.gen_range(0..n - 1);
        let j = if j >= i { j + 1 } else { j };
        let s = if rng.gen_bool(0.5) { 1 } else { -1 };
        for c in 0..n {
            m[i][c] += s * m[j][c];
        }
    }
    m
}

/// Applies a seeded random unimodular change of lattice basis, redrawing on
/// a singular right block.
pub fn transformed(base: &PeriodMatrix, seed: u64) -> Result<PeriodMatrix, GenerationError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RETRIES {
        let m = random_unimodular(base.g(), &mut rng);
        match unimodular_transform(base, &m) {
            Ok(p) => return Ok(p),
            Err(TorusError::SingularRightBlock) | Err(TorusError::DegenerateImaginaryPart { .. }) => continue,
            Err(e) => return Err(e.into()),
        }
    }
    Err(GenerationError::GenerationFailed { attempts: RETRIES })
}

/// The degree-16 instance with `ρ = 0`.
pub fn rho_zero_instance(precision: Precision) -> Result<PeriodMatrix, GenerationError> {
    let file = InstanceFile::from_json(RHO_ZERO_INSTANCE).map_err(InstanceError::from)?;
    Ok(file.build(precision)?.1)
}

/// Generator selection as exposed on the command line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GenerateKind {
    CmPower { disc: i64, g: usize },
    NoncmCubicPower { g: usize },
    CmPair,
    Random { field: String, g: usize, seed: u64 },
    Transformed { base: InstanceFile, seed: u64 },
}

pub fn generate_instance(kind: &GenerateKind, precision: Precision) -> Result<InstanceFile, GenerationError> {
    let (label, p) = match kind {
        GenerateKind::CmPower { disc, g } => (format!("cm_power({disc}, {g})"), cm_power(*disc, *g, precision)?),
        GenerateKind::NoncmCubicPower { g } => (format!("noncm_cubic_power({g})"), noncm_cubic_power(*g, precision)?),
        GenerateKind::CmPair => ("cm_pair".to_string(), cm_pair(precision)?),
        GenerateKind::Random { field, g, seed } => {
            (format!("random({field}, {g}, seed {seed})"), random(field, *g, *seed, precision)?)
        }
        GenerateKind::Transformed { base, seed } => {
            let (_, p) = base.build(precision)?;
            let name = base.label.clone().unwrap_or_else(|| "instance".into());
            (format!("transformed({name}, seed {seed})"), transformed(&p, *seed)?)
        }
    };
    Ok(InstanceFile::from_period_matrix(Some(label), &p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{determinant, RationalMatrix};

    #[test]
    fn unimodular_matrices_have_unit_determinant() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for g in 1..4 {
            for _ in 0..10 {
                let d = determinant(&RationalMatrix::from_i64(&random_unimodular(g, &mut rng)));
                assert!(d == BigRational::from_integer(1.into()) || d == BigRational::from_integer((-1).into()));
            }
        }
    }

    #[test]
    fn generators_are_deterministic_and_parse() {
        let pr = Precision::default();
        let a = generate_instance(&GenerateKind::Random { field: "cubic".into(), g: 2, seed: 5 }, pr).unwrap();
        let b = generate_instance(&GenerateKind::Random { field: "cubic".into(), g: 2, seed: 5 }, pr).unwrap();
        assert_eq!(a, b);
        let round = InstanceFile::from_json(&a.to_json()).unwrap();
        assert!(round.build(pr).is_ok());
        let t = generate_instance(&GenerateKind::Transformed { base: a, seed: 7 }, pr).unwrap();
        assert!(t.build(pr).is_ok());
    }

    #[test]
    fn family_shapes() {
        let pr = Precision::default();
        assert_eq!(cm_power(-1, 3, pr).unwrap().g(), 3);
        assert_eq!(cm_power(-7, 1, pr).unwrap().field().degree(), 2);
        assert!(matches!(cm_power(2, 1, pr), Err(GenerationError::InvalidParameter(_))));
        assert!(matches!(random("nope", 2, 0, pr), Err(GenerationError::InvalidParameter(_))));
        for name in FIELD_NAMES {
            assert!(named_field(name, pr).is_ok(), "{name}");
        }
    }
}
