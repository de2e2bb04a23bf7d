//! Heuristic search for a positive class in `NS(X)`.
//!
//! A class with alternating form `E` on the lattice is positive when the
//! symmetric form `S(u, v) = E(Ju, v)` is positive definite, `J` being the
//! complex structure in lattice coordinates. With `τ = X + iY`,
//! `J = [[Y⁻¹X, Y⁻¹], [−Y − XY⁻¹X, −XY⁻¹]]`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::ball::{BallMatrix, Dyadic, RealBall};
use crate::torus::{NSClass, PeriodMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchParams {
    /// Coefficient bound `N`: combinations use coefficients in `[−N, N]`.
    pub bound: i64,
    pub samples: usize,
    pub precision_bits: u64,
    pub seed: u64,
}

impl Default for SearchParams {
    fn default() -> Self {
        SearchParams { bound: 2, samples: 1000, precision_bits: 256, seed: 0 }
    }
}

/// Exhaustive enumeration is used while `ρ·(2N+1)^ρ` stays below this.
const EXHAUSTIVE_LIMIT: u128 = 50_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Polarization {
    Found { class: NSClass },
    /// Not a proof that no polarization exists.
    Unknown { reason: String },
}

impl Polarization {
    pub fn is_found(&self) -> bool {
        matches!(self, Polarization::Found { .. })
    }
}

/// Complex structure of `(τ I)` in lattice coordinates.
fn complex_structure(p: &PeriodMatrix, bits: u64) -> Option<BallMatrix> {
    let g = p.g();
    let (x, y) = p.real_imag_balls(bits).ok()?;
    let yi = y.inverse(bits)?;
    let yix = yi.mul(&x, bits);
    let xyi = x.mul(&yi, bits);
    let xyix = xyi.mul(&x, bits);
    let n = 2 * g;
    let mut j = vec![RealBall::zero(); n * n];
    for r in 0..g {
        for c in 0..g {
            j[r * n + c] = yix.get(r, c).clone();
            j[r * n + g + c] = yi.get(r, c).clone();
            j[(g + r) * n + c] = y.get(r, c).add(xyix.get(r, c), bits).neg();
            j[(g + r) * n + g + c] = xyi.get(r, c).neg();
        }
    }
    Some(BallMatrix::new(n, j))
}

/// Symmetrized `S = JᵀE` for an integer alternating form `E`.
fn symmetric_form(j: &BallMatrix, e: &[Vec<BigInt>], bits: u64) -> BallMatrix {
    let n = j.n;
    let mut s = vec![RealBall::zero(); n * n];
    for r in 0..n {
        for c in 0..n {
            let mut acc = RealBall::zero();
            for k in 0..n {
                if !e[k][c].is_zero() {
                    let w = RealBall::exact(Dyadic::from_int(e[k][c].clone()));
                    acc = acc.add(&j.get(k, r).mul(&w, bits), bits);
                }
            }
            s[r * n + c] = acc;
        }
    }
    let mut sym = s.clone();
    for r in 0..n {
        for c in 0..n {
            let sum = s[r * n + c].add(&s[c * n + r], bits);
            sym[r * n + c] = RealBall { mid: sum.mid.ldexp(-1), rad: sum.rad.ldexp(-1) };
        }
    }
    BallMatrix::new(n, sym)
}

fn negate(cls: &NSClass) -> NSClass {
    let neg = |m: &Vec<Vec<BigInt>>| m.iter().map(|r| r.iter().map(|x| -x).collect()).collect();
    NSClass { a: neg(&cls.a), b: neg(&cls.b), c: neg(&cls.c) }
}

/// Returns `Some(±cls)` when one sign is certified positive.
fn positive_sign(j: &BallMatrix, cls: &NSClass, bits: u64) -> Option<NSClass> {
    let e = cls.alternating_form();
    let s = symmetric_form(j, &e, bits);
    if s.certify_positive_definite(bits) {
        return Some(cls.clone());
    }
    let neg = BallMatrix::new(s.n, s.entries.iter().map(RealBall::neg).collect());
    neg.certify_positive_definite(bits).then(|| negate(cls))
}

fn combine(basis: &[NSClass], coeffs: &[i64]) -> NSClass {
    let g = basis[0].g();
    let mut v = vec![BigInt::zero(); basis[0].to_vector().len()];
    for (cls, &k) in basis.iter().zip(coeffs) {
        if k != 0 {
            for (acc, x) in v.iter_mut().zip(cls.to_vector()) {
                *acc += x * k;
            }
        }
    }
    NSClass::from_vector(g, &v)
}

/// Searches integer combinations of `basis` for a positive class: first the
/// product candidate `B = I` when it lies in NS, then every combination with
/// coefficients in `[−N, N]` if that set is small, otherwise seeded samples.
pub fn find_polarization(p: &PeriodMatrix, basis: &[NSClass], search: &SearchParams) -> Polarization {
    if basis.is_empty() {
        return Polarization::Unknown { reason: "no classes (ρ = 0)".into() };
    }
    let mut bits = search.precision_bits.max(64);
    let j = loop {
        if let Some(j) = complex_structure(p, bits) {
            break j;
        }
        if bits >= p.policy().max_bits {
            return Polarization::Unknown { reason: "complex structure not certified".into() };
        }
        bits = (bits * 2).min(p.policy().max_bits);
    };

    let g = p.g();
    let id: Vec<Vec<BigInt>> =
        (0..g).map(|r| (0..g).map(|c| if r == c { BigInt::one() } else { BigInt::zero() }).collect()).collect();
    let zero = vec![vec![BigInt::zero(); g]; g];
    let product = NSClass { a: zero.clone(), b: id, c: zero };
    if product.satisfies(p) {
        if let Some(cls) = positive_sign(&j, &product, bits) {
            return Polarization::Found { class: cls };
        }
    }

    let rho = basis.len();
    let n = search.bound.max(0);
    let width = (2 * n + 1) as u128;
    let total = width.checked_pow(rho as u32).filter(|t| t.saturating_mul(rho as u128) <= EXHAUSTIVE_LIMIT);
    if let Some(total) = total {
        let mut coeffs = vec![-n; rho];
        for _ in 0..total {
            if coeffs.iter().any(|&c| c != 0) {
                if let Some(cls) = positive_sign(&j, &combine(basis, &coeffs), bits) {
                    return Polarization::Found { class: cls };
                }
            }
            for c in coeffs.iter_mut() {
                if *c < n {
                    *c += 1;
                    break;
                }
                *c = -n;
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(search.seed);
        for _ in 0..search.samples {
            let coeffs: Vec<i64> = (0..rho).map(|_| rng.gen_range(-n..=n)).collect();
            if coeffs.iter().all(|&c| c == 0) {
                continue;
            }
            if let Some(cls) = positive_sign(&j, &combine(basis, &coeffs), bits) {
                return Polarization::Found { class: cls };
            }
        }
    }
    Polarization::Unknown { reason: "search exhausted".into() }
}
