//! Arithmetic checkers on user-supplied decomposition descriptors
//! `X ∼ A_1^{k_1} × … × E_r^{k_r}`.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::AnalysisError;

/// One isogeny factor: a simple torus of dimension `n` with multiplicity `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factor {
    pub n: usize,
    pub k: usize,
    #[serde(default)]
    pub cm: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionDescriptor {
    pub factors: Vec<Factor>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorCap {
    pub n: usize,
    pub k: usize,
    #[serde(with = "crate::jsonnum::rational")]
    pub cap: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionReport {
    pub g: usize,
    pub lemma_lhs: usize,
    pub lemma_holds: bool,
    pub lemma_equality: bool,
    /// Equality predicted: a single factor with `n = 2` or with `n = 1`.
    pub lemma_equality_predicted: bool,
    pub prop_bound: usize,
    pub caps: Vec<FactorCap>,
}

impl DecompositionDescriptor {
    pub fn new(factors: Vec<Factor>) -> Self {
        DecompositionDescriptor { factors }
    }

    pub fn g(&self) -> usize {
        self.factors.iter().map(|f| f.n * f.k).sum()
    }

    pub fn validate(&self) -> Result<(), AnalysisError> {
        if self.factors.is_empty() {
            return Err(AnalysisError::InvalidDescriptor("no factors".into()));
        }
        for f in &self.factors {
            if f.n == 0 || f.k == 0 {
                return Err(AnalysisError::InvalidDescriptor(format!("factor (n={}, k={}) must be positive", f.n, f.k)));
            }
            if f.cm && f.n != 1 {
                return Err(AnalysisError::InvalidDescriptor(format!("cm flag on a factor of dimension {}", f.n)));
            }
        }
        Ok(())
    }
}

/// Evaluates the combinatorial inequality `2Σ_{n≥2} n k² + Σ_{n=1} k² ≤ g²`,
/// the Picard bound `½(g(g+1) + Σ_cm k(k−1))` and the caps `½ n k(2k+1)`.
pub fn decomposition_bounds(d: &DecompositionDescriptor) -> Result<DecompositionReport, AnalysisError> {
    d.validate()?;
    let g = d.g();
    let lemma_lhs: usize = d
        .factors
        .iter()
        .map(|f| if f.n >= 2 { 2 * f.n * f.k * f.k } else { f.k * f.k })
        .sum();
    let single = d.factors.len() == 1;
    let lemma_equality_predicted = single && d.factors[0].n <= 2;
    let cm_sum: usize = d.factors.iter().filter(|f| f.cm).map(|f| f.k * (f.k - 1)).sum();
    let caps = d
        .factors
        .iter()
        .map(|f| FactorCap {
            n: f.n,
            k: f.k,
            cap: BigRational::new(BigInt::from(f.n * f.k * (2 * f.k + 1)), BigInt::from(2)),
        })
        .collect();
    Ok(DecompositionReport {
        g,
        lemma_lhs,
        lemma_holds: lemma_lhs <= g * g,
        lemma_equality: lemma_lhs == g * g,
        lemma_equality_predicted,
        prop_bound: (g * (g + 1) + cm_sum) / 2,
        caps,
    })
}

/// Every descriptor of total dimension `g`, factors listed in non-increasing
/// `(n, k, cm)` order so each multiset appears once.
pub fn enumerate_descriptors(g: usize) -> Vec<DecompositionDescriptor> {
    let mut kinds = Vec::new();
    for n in 1..=g {
        for k in 1..=g / n {
            kinds.push(Factor { n, k, cm: false });
            if n == 1 {
                kinds.push(Factor { n, k, cm: true });
            }
        }
    }
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(kinds: &[Factor], start: usize, left: usize, cur: &mut Vec<Factor>, out: &mut Vec<DecompositionDescriptor>) {
        if left == 0 {
            out.push(DecompositionDescriptor::new(cur.clone()));
            return;
        }
        for idx in start..kinds.len() {
            let f = kinds[idx];
            if f.n * f.k <= left {
                cur.push(f);
                rec(kinds, idx, left - f.n * f.k, cur, out);
                cur.pop();
            }
        }
    }
    rec(&kinds, 0, g, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(n: usize, k: usize, cm: bool) -> Factor {
        Factor { n, k, cm }
    }

    #[test]
    fn spec_examples() {
        let r = decomposition_bounds(&DecompositionDescriptor::new(vec![f(2, 1, false)])).unwrap();
        assert_eq!((r.g, r.lemma_lhs, r.lemma_equality), (2, 4, true));
        let r = decomposition_bounds(&DecompositionDescriptor::new(vec![f(1, 2, false)])).unwrap();
        assert_eq!(r.prop_bound, 3);
        let r = decomposition_bounds(&DecompositionDescriptor::new(vec![f(1, 2, true)])).unwrap();
        assert_eq!(r.prop_bound, 4);
    }

    #[test]
    fn invalid_descriptors() {
        for d in [vec![], vec![f(0, 1, false)], vec![f(2, 0, false)], vec![f(2, 1, true)]] {
            assert!(matches!(
                decomposition_bounds(&DecompositionDescriptor::new(d)),
                Err(AnalysisError::InvalidDescriptor(_))
            ));
        }
    }

    #[test]
    fn enumeration_counts() {
        // g = 2: (2,1), (1,2), (1,2,cm), and pairs of elliptic factors.
        let all = enumerate_descriptors(2);
        assert_eq!(all.len(), 6);
        assert!(all.iter().all(|d| d.g() == 2));
    }
}
