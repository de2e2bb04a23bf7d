//! Picard number, Néron–Severi basis, extension degrees, bounds and
//! endomorphism ranks, plus the consistency checks tying them together.

pub mod decomposition;
pub mod polarization;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{kernel_basis, rank_bareiss, rank_naive_oracle, LinalgError, QSpan, RationalMatrix};
use crate::numberfield::{generated_subfield_dimension, FieldElement, FieldError};
use crate::torus::{build_hom_system, build_t, ns_unknowns, upper_pairs, NSClass, PeriodMatrix, TorusError};

pub use decomposition::{decomposition_bounds, DecompositionDescriptor, DecompositionReport, Factor};
pub use polarization::{find_polarization, Polarization, SearchParams};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnalysisError {
    #[error(transparent)]
    Torus(#[from] TorusError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("operation requires g {expected}, got g = {got}")]
    WrongDimension { expected: String, got: usize },
    #[error("period matrices live over different fields")]
    FieldMismatch,
    #[error("consistency verdict {name} failed: {detail}")]
    InconsistentVerdict { name: String, detail: String },
    #[error("invalid decomposition descriptor: {0}")]
    InvalidDescriptor(String),
}

/// `(ρ, rank_Q T)` with `ρ = 2g² − g − rank_Q T`.
pub fn picard_number(p: &PeriodMatrix) -> (usize, usize) {
    let t = build_t(p).rationalize();
    let rank = rank_bareiss(&t);
    (ns_unknowns(p.g()) - rank, rank)
}

/// Independent genus-two formula `ρ = 6 − dim_Q⟨1, τ11, τ12, τ21, τ22, det τ⟩`,
/// evaluated with the naive elimination oracle.
pub fn picard_g2_oracle(p: &PeriodMatrix) -> Result<usize, AnalysisError> {
    if p.g() != 2 {
        return Err(AnalysisError::WrongDimension { expected: "= 2".into(), got: p.g() });
    }
    let t = |i, j| p.entry(i, j).clone();
    let det = t(0, 0).mul(&t(1, 1)).sub(&t(0, 1).mul(&t(1, 0)));
    let elems = [p.field().one(), t(0, 0), t(0, 1), t(1, 0), t(1, 1), det];
    let rows: Vec<Vec<BigRational>> = elems.iter().map(|e| e.coordinates().to_vec()).collect();
    let m = RationalMatrix::from_rows(p.field().degree(), rows)?;
    Ok(6 - rank_naive_oracle(&m)?)
}

/// Integer basis of `NS(X)`: the rational kernel of `T`, each class checked
/// against `W = 0` exactly.
pub fn ns_basis(p: &PeriodMatrix) -> Vec<NSClass> {
    let t = build_t(p).rationalize();
    kernel_basis(&t)
        .into_iter()
        .map(|v| {
            let cls = NSClass::from_vector(p.g(), &v);
            assert!(cls.satisfies(p), "kernel vector of T violates W = 0");
            cls
        })
        .collect()
}

/// `𝔡 = [Q(τ_ij) : Q]`.
pub fn extension_degree(p: &PeriodMatrix) -> usize {
    generated_subfield_dimension(p.tau().entries()).expect("entries share the field")
}

/// Per-pair span dimensions `𝔡_ij` (1-based `i < j`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairDimension {
    pub i: usize,
    pub j: usize,
    pub d: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DijBounds {
    pub dij: Vec<PairDimension>,
    pub bound_dij: i64,
    #[serde(with = "crate::jsonnum::rational")]
    pub bound_degree: BigRational,
}

/// `𝔡_ij = dim_Q⟨1, τ_ki, τ_kj, τ_li τ_kj − τ_ki τ_lj⟩` over all `l, k`, and the
/// two lower bounds for `ρ` derived from them and from `𝔡`.
pub fn dij_bounds(p: &PeriodMatrix) -> Result<DijBounds, AnalysisError> {
    let g = p.g();
    if g < 2 {
        return Err(AnalysisError::WrongDimension { expected: "≥ 2".into(), got: g });
    }
    let n = p.field().degree();
    let t = |r: usize, c: usize| p.entry(r, c);
    let mut dij = Vec::new();
    for (i, j) in upper_pairs(g) {
        let mut span = QSpan::new(n);
        span.insert(p.field().one().coordinates());
        for k in 0..g {
            span.insert(t(k, i).coordinates());
            span.insert(t(k, j).coordinates());
            for l in 0..g {
                let minor = t(l, i).mul(t(k, j)).sub(&t(k, i).mul(t(l, j)));
                span.insert(minor.coordinates());
            }
        }
        dij.push(PairDimension { i: i + 1, j: j + 1, d: span.dimension() });
    }
    let sum: usize = dij.iter().map(|e| e.d).sum();
    let bound_dij = ns_unknowns(g) as i64 - sum as i64;
    Ok(DijBounds { dij, bound_dij, bound_degree: degree_bound(g, extension_degree(p)) })
}

/// `g² − g(g−1)(𝔡/2 − 1)`.
pub fn degree_bound(g: usize, d: usize) -> BigRational {
    let g = BigInt::from(g);
    let half_d = BigRational::new(BigInt::from(d), BigInt::from(2));
    BigRational::from_integer(&g * &g) - BigRational::from_integer(&g * (&g - 1)) * (half_d - BigRational::from_integer(1.into()))
}

/// `rank_Z Hom(X_P, X_Q)`, the rational kernel dimension of the Hom system.
pub fn hom_rank(p: &PeriodMatrix, q: &PeriodMatrix) -> Result<usize, AnalysisError> {
    let sys = build_hom_system(p, q).map_err(|e| match e {
        TorusError::FieldMismatch => AnalysisError::FieldMismatch,
        other => AnalysisError::Torus(other),
    })?;
    Ok(sys.cols() - rank_bareiss(&sys.rationalize()))
}

pub fn end_rank(p: &PeriodMatrix) -> usize {
    hom_rank(p, p).expect("a period matrix shares its own field")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VerdictStatus {
    Pass,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub name: String,
    pub statement: String,
    pub status: VerdictStatus,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub g: usize,
    pub rho: usize,
    pub degree_d: usize,
    pub rank_t: usize,
    pub ns_basis: Vec<NSClass>,
    pub end_rank: usize,
    pub dij: Vec<PairDimension>,
    pub bound_dij: Option<i64>,
    #[serde(with = "opt_rational")]
    pub bound_degree: Option<BigRational>,
    pub rho_maximal: bool,
    pub consistency: Vec<Verdict>,
    pub polarization: Polarization,
}

mod opt_rational {
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(q: &Option<BigRational>, s: S) -> Result<S::Ok, S::Error> {
        q.as_ref().map(|q| q.to_string()).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigRational>, D::Error> {
        match Option::<String>::deserialize(d)? {
            None => Ok(None),
            Some(s) => crate::jsonnum::parse_rational(&s)
                .map(Some)
                .ok_or_else(|| serde::de::Error::custom(format!("invalid rational {s:?}"))),
        }
    }
}

struct VerdictSink {
    out: Vec<Verdict>,
}

impl VerdictSink {
    fn check(&mut self, name: &str, statement: &str, applicable: bool, holds: bool) -> Result<(), AnalysisError> {
        if applicable && !holds {
            return Err(AnalysisError::InconsistentVerdict { name: name.into(), detail: statement.into() });
        }
        let status = if applicable { VerdictStatus::Pass } else { VerdictStatus::Skipped };
        self.out.push(Verdict { name: name.into(), statement: statement.into(), status });
        Ok(())
    }
}

/// Full report for one period matrix. A failed consistency verdict is
/// returned as [`AnalysisError::InconsistentVerdict`].
pub fn classify(p: &PeriodMatrix, search: &SearchParams) -> Result<AnalysisReport, AnalysisError> {
    let g = p.g();
    let (rho, rank_t) = picard_number(p);
    let basis = ns_basis(p);
    debug_assert_eq!(basis.len(), rho);
    let d = extension_degree(p);
    let end = end_rank(p);
    let (dij, bound_dij, bound_degree) = if g >= 2 {
        let b = dij_bounds(p)?;
        (b.dij, Some(b.bound_dij), Some(b.bound_degree))
    } else {
        (Vec::new(), None, None)
    };
    let polarization = find_polarization(p, &basis, search);
    let gg = g * g;
    let rho_maximal = rho == gg;

    let mut v = VerdictSink { out: Vec::new() };
    let multi = g >= 2;
    v.check("range", "0 ≤ ρ ≤ g²", true, rho <= gg)?;
    v.check("rank_nullity", "rank T + ρ = 2g² − g", true, rank_t + rho == ns_unknowns(g))?;
    v.check("d2_iff_maximal", "𝔡 = 2 ⟺ ρ = g²", multi, (d == 2) == rho_maximal)?;
    v.check("d3_band", "𝔡 = 3 ⇒ g(g+1)/2 ≤ ρ < g²", multi && d == 3, g * (g + 1) / 2 <= rho && rho < gg)?;
    v.check("d4_band", "𝔡 = 4 ⇒ g ≤ ρ < g²", multi && d == 4, g <= rho && rho < gg)?;
    // 𝔡 ≥ 2(1 + (g² − ρ)/(g(g−1))), cleared of denominators.
    v.check(
        "degree_lower_bound",
        "𝔡 ≥ 2(1 + (g² − ρ)/(g(g−1)))",
        multi,
        multi && d * g * (g - 1) >= 2 * (g * (g - 1) + gg - rho),
    )?;
    v.check(
        "odd_degree_abelian",
        "𝔡 odd and polarized ⇒ ρ ≤ g(g+1)/2",
        multi && d % 2 == 1 && polarization.is_found(),
        rho <= g * (g + 1) / 2,
    )?;
    v.check("end_rank_cap", "rank End ≤ 2g²", true, end <= 2 * gg)?;
    v.check("end_rank_maximal", "rank End = 2g² ⟺ ρ = g²", multi, (end == 2 * gg) == rho_maximal)?;
    if let (Some(bd), Some(bq)) = (bound_dij, &bound_degree) {
        v.check("bound_dij", "2g² − g − Σ𝔡_ij ≤ ρ", true, bd <= rho as i64)?;
        v.check("bound_degree", "g² − g(g−1)(𝔡/2 − 1) ≤ ρ", true, *bq <= BigRational::from_integer(rho.into()))?;
    }

    Ok(AnalysisReport {
        g,
        rho,
        degree_d: d,
        rank_t,
        ns_basis: basis,
        end_rank: end,
        dij,
        bound_dij,
        bound_degree,
        rho_maximal,
        consistency: v.out,
        polarization,
    })
}

/// Coordinates of field elements as rows of a rational matrix.
pub fn coordinate_matrix(elems: &[FieldElement]) -> Result<RationalMatrix, AnalysisError> {
    let n = elems.first().map_or(0, |e| e.field().degree());
    Ok(RationalMatrix::from_rows(n, elems.iter().map(|e| e.coordinates().to_vec()).collect())?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numberfield::{NumberField, RootHint};
    use crate::torus::{diagonal, direct_sum, PrecisionPolicy};

    fn field(c: &[i64], re: &str, im: &str) -> NumberField {
        let c: Vec<BigInt> = c.iter().map(|&x| BigInt::from(x)).collect();
        NumberField::new(&c, &RootHint::new(re, im), 64).unwrap()
    }

    fn diag(k: &NumberField, e: &[FieldElement]) -> PeriodMatrix {
        diagonal(k, e, PrecisionPolicy::default()).unwrap()
    }

    #[test]
    fn gaussian_square() {
        let k = field(&[1, 0, 1], "0", "1");
        let i = k.generator();
        let p = diag(&k, &[i.clone(), i.clone()]);
        assert_eq!(picard_number(&p), (4, 2));
        assert_eq!(picard_g2_oracle(&p).unwrap(), 4);
        assert_eq!(ns_basis(&p).len(), 4);
        assert_eq!(extension_degree(&p), 2);
        assert_eq!(end_rank(&p), 8);
        let b = dij_bounds(&p).unwrap();
        assert_eq!((b.dij[0].d, b.bound_dij), (2, 4));
        let r = classify(&p, &SearchParams::default()).unwrap();
        assert!(r.rho_maximal && r.polarization.is_found());
    }

    #[test]
    fn elliptic_cases() {
        let k = field(&[1, 0, 1], "0", "1");
        let p = diag(&k, &[k.generator()]);
        assert_eq!(picard_number(&p), (1, 0));
        let basis = ns_basis(&p);
        assert_eq!(basis.len(), 1);
        assert_eq!(basis[0].b, vec![vec![BigInt::from(1)]]);
        assert!(matches!(dij_bounds(&p), Err(AnalysisError::WrongDimension { .. })));
        assert!(matches!(picard_g2_oracle(&p), Err(AnalysisError::WrongDimension { .. })));
        let c = field(&[-1, -1, 0, 1], "-0.66", "0.56");
        assert_eq!(end_rank(&diag(&c, &[c.generator()])), 1);
        assert_eq!(hom_rank(&p, &diag(&c, &[c.generator()])), Err(AnalysisError::FieldMismatch));
    }

    #[test]
    fn cubic_square() {
        let c = field(&[-1, -1, 0, 1], "-0.66", "0.56");
        let b = c.generator();
        let p = diag(&c, &[b.clone(), b.clone()]);
        assert_eq!(picard_number(&p).0, 3);
        assert_eq!(picard_g2_oracle(&p).unwrap(), 3);
        assert_eq!(extension_degree(&p), 3);
        assert_eq!(end_rank(&p), 4);
        let bd = dij_bounds(&p).unwrap();
        assert_eq!((bd.dij[0].d, bd.bound_dij), (3, 3));
        let r = classify(&p, &SearchParams::default()).unwrap();
        assert!(r.polarization.is_found());
        let p3 = diag(&c, &[b.clone(), b.clone(), b]);
        assert_eq!(classify(&p3, &SearchParams::default()).unwrap().rho, 6);
    }

    #[test]
    fn zeta8_pair() {
        let k = field(&[1, 0, 0, 0, 1], "0.7071", "0.7071");
        let z = k.generator();
        let e1 = z.mul(&z);
        let e2 = z.add(&z.mul(&z).mul(&z));
        let p = diag(&k, &[e1.clone(), e2.clone()]);
        assert_eq!(picard_number(&p).0, 2);
        assert_eq!(picard_g2_oracle(&p).unwrap(), 2);
        assert_eq!(extension_degree(&p), 4);
        assert_eq!(end_rank(&p), 4);
        let bd = dij_bounds(&p).unwrap();
        assert_eq!((bd.dij[0].d, bd.bound_dij), (4, 2));
        assert_eq!(bd.bound_degree, BigRational::from_integer(2.into()));
        let sum = direct_sum(&diag(&k, &[e1]), &diag(&k, &[e2])).unwrap();
        assert_eq!(picard_number(&sum).0, 2);
    }
}
