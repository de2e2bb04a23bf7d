//! Certified isolation of all complex roots of a squarefree monic integer polynomial.
//!
//! Approximations come from the Aberth–Ehrlich iteration in truncated dyadic
//! arithmetic. Certification uses the Weierstrass corrections
//! `W_i = p(z_i) / ∏_{j≠i}(z_i − z_j)`: the disks `|z − z_i| ≤ n·|W_i|` cover all
//! roots, and a connected component made of `m` disks holds exactly `m` roots.
//! All certification arithmetic is exact.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::ball::{ComplexBall, Dyadic, RealBall};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RootError {
    #[error("root isolation did not converge below {max_bits} bits of precision")]
    PrecisionExhausted { max_bits: u64 },
}

/// A certified disk holding exactly one root.
#[derive(Clone, Debug, PartialEq)]
pub struct RootDisk {
    pub re: Dyadic,
    pub im: Dyadic,
    pub radius: Dyadic,
}

impl RootDisk {
    /// The bounding square of the disk.
    pub fn to_ball(&self) -> ComplexBall {
        ComplexBall::new(
            RealBall { mid: self.re.clone(), rad: self.radius.clone() },
            RealBall { mid: self.im.clone(), rad: self.radius.clone() },
        )
    }

    pub fn intersects(&self, other: &RootDisk) -> bool {
        let dre = self.re.sub(&other.re);
        let dim = self.im.sub(&other.im);
        let d2 = dre.mul(&dre).add(&dim.mul(&dim));
        let r = self.radius.add(&other.radius);
        d2 <= r.mul(&r)
    }
}

#[derive(Clone, Debug, PartialEq)]
struct Cx {
    re: Dyadic,
    im: Dyadic,
}

impl Cx {
    fn zero() -> Self {
        Cx { re: Dyadic::zero(), im: Dyadic::zero() }
    }

    fn real(d: Dyadic) -> Self {
        Cx { re: d, im: Dyadic::zero() }
    }

    fn add(&self, o: &Cx) -> Cx {
        Cx { re: self.re.add(&o.re), im: self.im.add(&o.im) }
    }

    fn sub(&self, o: &Cx) -> Cx {
        Cx { re: self.re.sub(&o.re), im: self.im.sub(&o.im) }
    }

    fn mul(&self, o: &Cx) -> Cx {
        Cx {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }

    fn norm2(&self) -> Dyadic {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }

    fn trunc(&self, prec: u64) -> Cx {
        Cx { re: self.re.floor_to(prec), im: self.im.floor_to(prec) }
    }

    fn div(&self, o: &Cx, prec: u64) -> Cx {
        let den = o.norm2();
        let re = self.re.mul(&o.re).add(&self.im.mul(&o.im));
        let im = self.im.mul(&o.re).sub(&self.re.mul(&o.im));
        Cx { re: re.div_approx(&den, prec), im: im.div_approx(&den, prec) }
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// Rough log2 of the magnitude; very negative for zero.
    fn log2_mag(&self) -> i64 {
        let a = if self.re.is_zero() { i64::MIN / 4 } else { self.re.magnitude_bits() };
        let b = if self.im.is_zero() { i64::MIN / 4 } else { self.im.magnitude_bits() };
        a.max(b)
    }
}

/// Horner evaluation of `p` and `p'` with truncation to `prec` bits.
fn eval_with_derivative(p: &[Dyadic], z: &Cx, prec: u64) -> (Cx, Cx) {
    let n = p.len() - 1;
    let mut val = Cx::real(p[n].clone());
    let mut der = Cx::zero();
    for k in (0..n).rev() {
        der = der.mul(z).add(&val).trunc(prec);
        val = val.mul(z).add(&Cx::real(p[k].clone())).trunc(prec);
    }
    (val, der)
}

fn eval_exact(p: &[Dyadic], z: &Cx) -> Cx {
    let n = p.len() - 1;
    let mut val = Cx::real(p[n].clone());
    for k in (0..n).rev() {
        val = val.mul(z).add(&Cx::real(p[k].clone()));
    }
    val
}

fn initial_guesses(p: &[BigInt]) -> Vec<Cx> {
    let n = p.len() - 1;
    // Fujiwara-type radius: 2·max |a_k|^{1/(n−k)}.
    let mut r: f64 = 0.0;
    for (k, a) in p.iter().enumerate().take(n) {
        if a.is_zero() {
            continue;
        }
        let bits = a.bits() as f64;
        let mag = num_traits::ToPrimitive::to_f64(a).map(f64::abs).unwrap_or(2f64.powf(bits));
        r = r.max(mag.powf(1.0 / (n - k) as f64));
    }
    let r = (2.0 * r).max(1.0);
    (0..n)
        .map(|k| {
            let t = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            Cx { re: Dyadic::from_f64(r * t.cos()), im: Dyadic::from_f64(r * t.sin()) }
        })
        .collect()
}

/// Aberth sweeps at working precision `prec`. Returns true once all corrections
/// drop below the working precision.
fn aberth(p: &[Dyadic], z: &mut [Cx], prec: u64, max_iter: usize) -> bool {
    let n = z.len();
    let one = Cx::real(Dyadic::one());
    for _ in 0..max_iter {
        let mut worst = i64::MIN;
        let mut scale = 0i64;
        for i in 0..n {
            let (pv, dv) = eval_with_derivative(p, &z[i], prec);
            if pv.is_zero() {
                continue;
            }
            scale = scale.max(z[i].log2_mag());
            let newton = if dv.is_zero() { pv.clone() } else { pv.div(&dv, prec) };
            let mut s = Cx::zero();
            for j in 0..n {
                if j != i {
                    let d = z[i].sub(&z[j]);
                    if !d.is_zero() {
                        s = s.add(&one.div(&d, prec));
                    }
                }
            }
            let den = one.sub(&newton.mul(&s).trunc(prec));
            let w = if den.is_zero() { newton } else { newton.div(&den, prec) };
            worst = worst.max(w.log2_mag());
            z[i] = z[i].sub(&w).trunc(prec);
        }
        if worst < scale.max(0) - prec as i64 + 4 {
            return true;
        }
    }
    false
}

/// Certified disks around the approximations `z`, or `None` if they are not
/// pairwise disjoint.
fn certify(p: &[Dyadic], z: &[Cx], rad_bits: u64) -> Option<Vec<RootDisk>> {
    let n = z.len();
    let nn = Dyadic::from_int(BigInt::from((n * n) as u64));
    let mut disks = Vec::with_capacity(n);
    for i in 0..n {
        let num = eval_exact(p, &z[i]);
        let mut den = Cx::real(Dyadic::one());
        for j in 0..n {
            if j != i {
                den = den.mul(&z[i].sub(&z[j]));
            }
        }
        let den2 = den.norm2();
        if den2.is_zero() {
            return None;
        }
        // radius² = n²|p(z_i)|² / |∏(z_i − z_j)|²
        let r2 = nn.mul(&num.norm2()).to_rational() / den2.to_rational();
        let r2_up = Dyadic::ceil_rational(&r2, rad_bits);
        let radius = if r2_up.is_zero() { Dyadic::zero() } else { r2_up.sqrt_upper(rad_bits) };
        disks.push(RootDisk { re: z[i].re.clone(), im: z[i].im.clone(), radius });
    }
    for i in 0..n {
        for j in i + 1..n {
            if disks[i].intersects(&disks[j]) {
                return None;
            }
        }
    }
    Some(disks)
}

/// Isolates every root of the monic integer polynomial `p` (ascending
/// coefficients, squarefree) into disjoint certified disks of radius at most
/// `2^−target_bits`, escalating precision up to `max_bits`.
///
/// `start` seeds the iteration with earlier approximations.
pub fn isolate_roots(
    p: &[BigInt],
    target_bits: u64,
    max_bits: u64,
    start: Option<&[RootDisk]>,
) -> Result<Vec<RootDisk>, RootError> {
    let n = p.len() - 1;
    assert!(n >= 1 && p[n].is_one(), "isolate_roots expects a monic polynomial");
    if n == 1 {
        return Ok(vec![RootDisk {
            re: Dyadic::from_int(-p[0].clone()),
            im: Dyadic::zero(),
            radius: Dyadic::zero(),
        }]);
    }
    let pd: Vec<Dyadic> = p.iter().map(|c| Dyadic::from_int(c.clone())).collect();
    let mut z: Vec<Cx> = match start {
        Some(s) if s.len() == n => s.iter().map(|d| Cx { re: d.re.clone(), im: d.im.clone() }).collect(),
        _ => initial_guesses(p),
    };
    let limit = Dyadic::pow2(-(target_bits as i64));
    let mut prec = 64u64.max(target_bits + 32);
    let mut first = start.is_none();
    loop {
        let iters = if first { 2000 } else { 60 };
        first = false;
        aberth(&pd, &mut z, prec, iters);
        if let Some(disks) = certify(&pd, &z, 48) {
            if disks.iter().all(|d| d.radius <= limit) {
                return Ok(disks);
            }
        }
        if prec >= max_bits + 64 {
            return Err(RootError::PrecisionExhausted { max_bits });
        }
        prec = (prec * 2).min(max_bits + 64);
    }
}

/// Outcome of the exhaustive factor search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Irreducibility {
    Irreducible,
    /// A proper monic integer factor (ascending coefficients).
    Reducible(Vec<BigInt>),
    /// Root enclosures too wide to decide; refine and retry.
    Undecided,
}

/// Decides irreducibility over Q of a monic squarefree integer polynomial from
/// certified enclosures of all its roots.
///
/// By Gauss's lemma every monic factor over Q has integer coefficients and is
/// the product of `x − r` over a subset of the roots. Each subset of size at
/// most `n/2` is screened through its root sum, then multiplied out in ball
/// arithmetic; a candidate with integer-rounded coefficients is confirmed by
/// exact division. The answer is conclusive only when every product ball that
/// survives screening is narrower than 1/2.
pub fn irreducibility(p: &[BigInt], roots: &[RootDisk], prec: u64) -> Irreducibility {
    let n = p.len() - 1;
    if n <= 1 {
        return Irreducibility::Irreducible;
    }
    let balls: Vec<ComplexBall> = roots.iter().map(RootDisk::to_ball).collect();
    let half = Dyadic::pow2(-1);
    let mut undecided = false;
    let mut subset: Vec<usize> = Vec::new();
    for size in 1..=n / 2 {
        // Enumerate subsets of `size` indices in lexicographic order.
        subset.clear();
        subset.extend(0..size);
        loop {
            match screen_subset(p, &balls, &subset, prec, &half) {
                SubsetVerdict::Factor(f) => return Irreducibility::Reducible(f),
                SubsetVerdict::Wide => undecided = true,
                SubsetVerdict::NotAFactor => {}
            }
            // next combination
            let mut k = size;
            while k > 0 && subset[k - 1] == n - size + k - 1 {
                k -= 1;
            }
            if k == 0 {
                break;
            }
            subset[k - 1] += 1;
            for t in k..size {
                subset[t] = subset[t - 1] + 1;
            }
        }
    }
    if undecided {
        Irreducibility::Undecided
    } else {
        Irreducibility::Irreducible
    }
}

enum SubsetVerdict {
    Factor(Vec<BigInt>),
    NotAFactor,
    Wide,
}

/// The nearest integer to a ball midpoint, if the ball contains it.
fn integer_in(b: &RealBall) -> Option<BigInt> {
    let q = b.mid.to_rational();
    let r = q.round().to_integer();
    if b.contains_rational(&BigRational::from_integer(r.clone())) {
        Some(r)
    } else {
        None
    }
}

fn screen_subset(
    p: &[BigInt],
    balls: &[ComplexBall],
    subset: &[usize],
    prec: u64,
    half: &Dyadic,
) -> SubsetVerdict {
    // Cheap screen: the root sum is minus a coefficient of any factor.
    let mut sum = ComplexBall::zero();
    for &i in subset {
        sum = sum.add(&balls[i], prec);
    }
    let sum_ok = sum.im.contains_zero() && integer_in(&sum.re).is_some();
    if !sum_ok {
        if sum.re.rad < *half && sum.im.rad < *half {
            return SubsetVerdict::NotAFactor;
        }
        return SubsetVerdict::Wide;
    }
    // Full product ∏ (x − r_i), ascending coefficients.
    let mut coeffs = vec![ComplexBall::from_rational(&BigRational::one(), prec)];
    for &i in subset {
        let mut next = vec![ComplexBall::zero(); coeffs.len() + 1];
        for (k, c) in coeffs.iter().enumerate() {
            next[k + 1] = next[k + 1].add(c, prec);
            next[k] = next[k].sub(&c.mul(&balls[i], prec), prec);
        }
        coeffs = next;
    }
    let mut candidate = Vec::with_capacity(coeffs.len());
    for c in &coeffs {
        if c.re.rad >= *half || c.im.rad >= *half {
            return SubsetVerdict::Wide;
        }
        if !c.im.contains_zero() {
            return SubsetVerdict::NotAFactor;
        }
        match integer_in(&c.re) {
            Some(v) => candidate.push(v),
            None => return SubsetVerdict::NotAFactor,
        }
    }
    if divides_exactly(&candidate, p) {
        SubsetVerdict::Factor(candidate)
    } else {
        SubsetVerdict::NotAFactor
    }
}

/// Exact test that monic `f` divides `p` in Z[x].
fn divides_exactly(f: &[BigInt], p: &[BigInt]) -> bool {
    let df = f.len() - 1;
    let mut rem: Vec<BigInt> = p.to_vec();
    if rem.len() < f.len() {
        return false;
    }
    for k in (0..=rem.len() - f.len()).rev() {
        let c = rem[k + df].clone();
        if c.is_zero() {
            continue;
        }
        for (j, fj) in f.iter().enumerate() {
            rem[k + j] -= &c * fj;
        }
    }
    rem.iter().take(df).all(|c| c.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zp(c: &[i64]) -> Vec<BigInt> {
        c.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn gaussian_roots_are_plus_minus_i() {
        let d = isolate_roots(&zp(&[1, 0, 1]), 64, 4096, None).unwrap();
        assert_eq!(d.len(), 2);
        let mut ims: Vec<f64> = d.iter().map(|r| r.im.to_f64()).collect();
        ims.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((ims[0] + 1.0).abs() < 1e-15 && (ims[1] - 1.0).abs() < 1e-15);
        assert!(d.iter().all(|r| r.radius <= Dyadic::pow2(-64)));
    }

    #[test]
    fn plastic_cubic_has_one_real_root() {
        let d = isolate_roots(&zp(&[-1, -1, 0, 1]), 128, 4096, None).unwrap();
        let complex: Vec<&RootDisk> = d.iter().filter(|r| r.im.to_f64() > 0.1).collect();
        assert_eq!(complex.len(), 1);
        assert!((complex[0].re.to_f64() + 0.662358978622373).abs() < 1e-14);
        assert!((complex[0].im.to_f64() - 0.562279512062301).abs() < 1e-14);
    }

    #[test]
    fn refinement_from_previous_disks() {
        let p = zp(&[-1, -1, 0, 1]);
        let coarse = isolate_roots(&p, 40, 4096, None).unwrap();
        let fine = isolate_roots(&p, 300, 4096, Some(&coarse)).unwrap();
        assert!(fine.iter().all(|r| r.radius <= Dyadic::pow2(-300)));
        for f in &fine {
            assert_eq!(coarse.iter().filter(|c| c.intersects(f)).count(), 1);
        }
    }

    #[test]
    fn irreducibility_decisions() {
        let cases: &[(&[i64], bool)] = &[
            (&[1, 0, 1], true),
            (&[-1, -1, 0, 1], true),
            (&[1, 0, 0, 0, 1], true),
            (&[4, 0, -5, 0, 1], false), // (x²−1)(x²−4)
            (&[4, 0, 0, 0, 1], false),  // (x²+2x+2)(x²−2x+2)
            (&[-2, 0, 1], true),
        ];
        for (c, irreducible) in cases {
            let p = zp(c);
            let roots = isolate_roots(&p, 64, 4096, None).unwrap();
            let verdict = irreducibility(&p, &roots, 128);
            match verdict {
                Irreducibility::Irreducible => assert!(*irreducible, "{c:?}"),
                Irreducibility::Reducible(f) => {
                    assert!(!*irreducible, "{c:?}");
                    assert!(divides_exactly(&f, &p));
                }
                Irreducibility::Undecided => panic!("undecided for {c:?}"),
            }
        }
    }
}
