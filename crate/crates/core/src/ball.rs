//! Dyadic numbers and midpoint-radius ball arithmetic.
//!
//! Every operation on [`RealBall`] and [`ComplexBall`] returns an enclosure of
//! the exact result: midpoints are rounded to the working precision and the
//! rounding error is folded into the radius, which is always rounded up.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Mantissa bits kept in radii. Radii only need to be upper bounds.
const RAD_BITS: u64 = 30;

/// An exact binary fraction `mant · 2^exp`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}·2^{} (≈{:e})", self.mant, self.exp, self.to_f64())
    }
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Self {
        if mant.is_zero() {
            return Self::zero();
        }
        let tz = mant.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            Dyadic { mant: mant >> tz, exp: exp + tz as i64 }
        } else {
            Dyadic { mant, exp }
        }
    }

    pub fn zero() -> Self {
        Dyadic { mant: BigInt::zero(), exp: 0 }
    }

    pub fn one() -> Self {
        Dyadic { mant: BigInt::one(), exp: 0 }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Self::new(n.into(), 0)
    }

    /// `2^e`.
    pub fn pow2(e: i64) -> Self {
        Dyadic { mant: BigInt::one(), exp: e }
    }

    /// Exact conversion of a finite double.
    pub fn from_f64(x: f64) -> Self {
        assert!(x.is_finite(), "non-finite double");
        if x == 0.0 {
            return Self::zero();
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 0 { 1i64 } else { -1 };
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if raw_exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), raw_exp - 1075)
        };
        Self::new(BigInt::from(m) * sign, e)
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn signum(&self) -> i32 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    /// Smallest `e` with `|self| < 2^e` (meaningless for zero).
    pub fn magnitude_bits(&self) -> i64 {
        self.exp + self.mant.bits() as i64
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << self.exp as usize)
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << (-self.exp) as usize)
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mant.bits() as i64;
        let (m, e) = if bits > 60 {
            let s = bits - 60;
            ((&self.mant >> s as usize).to_f64().unwrap_or(0.0), self.exp + s)
        } else {
            (self.mant.to_f64().unwrap_or(0.0), self.exp)
        };
        let e = e.clamp(-2000, 2000) as i32;
        if e < -1000 {
            m * 2f64.powi(-1000) * 2f64.powi(e + 1000)
        } else {
            m * 2f64.powi(e)
        }
    }

    pub fn abs(&self) -> Self {
        Dyadic { mant: self.mant.abs(), exp: self.exp }
    }

    pub fn ldexp(&self, k: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Dyadic { mant: self.mant.clone(), exp: self.exp + k }
    }

    fn aligned(a: &Dyadic, b: &Dyadic) -> (BigInt, BigInt, i64) {
        let e = a.exp.min(b.exp);
        (&a.mant << (a.exp - e) as usize, &b.mant << (b.exp - e) as usize, e)
    }

    pub fn add(&self, other: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let (a, b, e) = Self::aligned(self, other);
        Self::new(a + b, e)
    }

    pub fn sub(&self, other: &Dyadic) -> Dyadic {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Dyadic) -> Dyadic {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        Dyadic { mant: &self.mant * &other.mant, exp: self.exp + other.exp }
    }

    pub fn neg(&self) -> Dyadic {
        Dyadic { mant: -&self.mant, exp: self.exp }
    }

    /// Keep at most `prec` significant bits, rounding toward −∞.
    pub fn floor_to(&self, prec: u64) -> Dyadic {
        let bits = self.mant.bits();
        if bits <= prec {
            return self.clone();
        }
        let s = bits - prec;
        // Shr on negative BigInt rounds toward −∞.
        Self::new(&self.mant >> s as usize, self.exp + s as i64)
    }

    /// Keep at most `prec` significant bits, rounding toward +∞.
    pub fn ceil_to(&self, prec: u64) -> Dyadic {
        self.neg().floor_to(prec).neg()
    }

    /// `⌊q·2^k⌋·2^−k` with `k` chosen so that about `prec` bits survive.
    pub fn floor_rational(q: &BigRational, prec: u64) -> Dyadic {
        if q.is_zero() {
            return Self::zero();
        }
        let k = prec as i64 + q.denom().bits() as i64 - q.numer().bits() as i64 + 1;
        let (num, den) = (q.numer(), q.denom());
        let scaled = if k >= 0 {
            (num << k as usize).div_floor(den)
        } else {
            num.div_floor(&(den << (-k) as usize))
        };
        Self::new(scaled, -k)
    }

    pub fn ceil_rational(q: &BigRational, prec: u64) -> Dyadic {
        Self::floor_rational(&-q, prec).neg()
    }

    /// Truncated quotient with roughly `prec` significant bits.
    pub fn div_approx(&self, other: &Dyadic, prec: u64) -> Dyadic {
        assert!(!other.is_zero(), "division by zero dyadic");
        if self.is_zero() {
            return Self::zero();
        }
        let s = (prec as i64 + other.mant.bits() as i64 - self.mant.bits() as i64 + 2).max(0);
        let q = (&self.mant << s as usize) / &other.mant;
        Self::new(q, self.exp - s - other.exp)
    }

    /// Upper bound on the square root of a nonnegative dyadic, accurate to about `prec` bits.
    pub fn sqrt_upper(&self, prec: u64) -> Dyadic {
        assert!(self.signum() >= 0, "square root of negative dyadic");
        if self.is_zero() {
            return Self::zero();
        }
        // Shift to an even exponent with enough mantissa bits.
        let mut shift = (2 * prec as i64 - self.mant.bits() as i64).max(0);
        if (self.exp - shift).rem_euclid(2) != 0 {
            shift += 1;
        }
        let m = &self.mant << shift as usize;
        let root = m.sqrt();
        let root = if &root * &root == m { root } else { root + 1 };
        Self::new(root, (self.exp - shift) / 2)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = Self::aligned(self, other);
        a.cmp(&b)
    }
}

/// True when the rational denominator is a power of two.
fn is_dyadic(q: &BigRational) -> bool {
    let d = q.denom();
    d.bits() > 0 && d.trailing_zeros() == Some(d.bits() - 1)
}

/// A real interval `[mid − rad, mid + rad]`.
#[derive(Clone, Debug, PartialEq)]
pub struct RealBall {
    pub mid: Dyadic,
    pub rad: Dyadic,
}

impl RealBall {
    pub fn exact(mid: Dyadic) -> Self {
        RealBall { mid, rad: Dyadic::zero() }
    }

    pub fn zero() -> Self {
        Self::exact(Dyadic::zero())
    }

    pub fn from_rational(q: &BigRational, prec: u64) -> Self {
        if is_dyadic(q) {
            let e = -(q.denom().bits() as i64 - 1);
            return Self::exact(Dyadic::new(q.numer().clone(), e));
        }
        let lo = Dyadic::floor_rational(q, prec);
        let err = q - lo.to_rational();
        RealBall { mid: lo, rad: Dyadic::ceil_rational(&err, RAD_BITS) }
    }

    /// Ball enclosing `[lo, hi]`.
    pub fn from_bounds(lo: &Dyadic, hi: &Dyadic, prec: u64) -> Self {
        let mid = lo.add(hi).ldexp(-1);
        let rad = hi.sub(lo).ldexp(-1);
        Self::rounded(mid, rad, prec)
    }

    fn rounded(mid: Dyadic, rad: Dyadic, prec: u64) -> Self {
        let m = mid.floor_to(prec);
        let err = mid.sub(&m);
        RealBall { mid: m, rad: rad.add(&err).ceil_to(RAD_BITS) }
    }

    pub fn lower(&self) -> Dyadic {
        self.mid.sub(&self.rad)
    }

    pub fn upper(&self) -> Dyadic {
        self.mid.add(&self.rad)
    }

    pub fn contains_zero(&self) -> bool {
        self.mid.abs() <= self.rad
    }

    pub fn is_positive(&self) -> bool {
        self.mid > self.rad
    }

    pub fn is_negative(&self) -> bool {
        self.mid.neg() > self.rad
    }

    pub fn contains_rational(&self, q: &BigRational) -> bool {
        let lo = self.lower().to_rational();
        let hi = self.upper().to_rational();
        &lo <= q && q <= &hi
    }

    pub fn overlaps(&self, other: &RealBall) -> bool {
        self.lower() <= other.upper() && other.lower() <= self.upper()
    }

    /// Upper bound on `|x|` over the ball.
    pub fn abs_upper(&self) -> Dyadic {
        self.mid.abs().add(&self.rad)
    }

    pub fn add(&self, other: &RealBall, prec: u64) -> RealBall {
        Self::rounded(self.mid.add(&other.mid), self.rad.add(&other.rad), prec)
    }

    pub fn sub(&self, other: &RealBall, prec: u64) -> RealBall {
        self.add(&other.neg(), prec)
    }

    pub fn neg(&self) -> RealBall {
        RealBall { mid: self.mid.neg(), rad: self.rad.clone() }
    }

    pub fn mul(&self, other: &RealBall, prec: u64) -> RealBall {
        let mid = self.mid.mul(&other.mid);
        let rad = self
            .mid
            .abs()
            .mul(&other.rad)
            .add(&other.mid.abs().mul(&self.rad))
            .add(&self.rad.mul(&other.rad));
        Self::rounded(mid, rad, prec)
    }

    /// Enclosure of `1/x`, or `None` when the ball touches zero.
    pub fn recip(&self, prec: u64) -> Option<RealBall> {
        if self.contains_zero() {
            return None;
        }
        let lo = self.lower().to_rational();
        let hi = self.upper().to_rational();
        let one = BigRational::one();
        let new_lo = Dyadic::floor_rational(&(&one / &hi), prec + 4);
        let new_hi = Dyadic::ceil_rational(&(&one / &lo), prec + 4);
        Some(Self::from_bounds(&new_lo, &new_hi, prec))
    }

    pub fn div(&self, other: &RealBall, prec: u64) -> Option<RealBall> {
        other.recip(prec).map(|r| self.mul(&r, prec))
    }
}

/// A complex rectangle: independent real and imaginary balls.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexBall {
    pub re: RealBall,
    pub im: RealBall,
}

impl ComplexBall {
    pub fn new(re: RealBall, im: RealBall) -> Self {
        ComplexBall { re, im }
    }

    pub fn zero() -> Self {
        ComplexBall { re: RealBall::zero(), im: RealBall::zero() }
    }

    pub fn from_rational(q: &BigRational, prec: u64) -> Self {
        ComplexBall { re: RealBall::from_rational(q, prec), im: RealBall::zero() }
    }

    pub fn re_mid(&self) -> &Dyadic {
        &self.re.mid
    }

    pub fn re_rad(&self) -> &Dyadic {
        &self.re.rad
    }

    pub fn im_mid(&self) -> &Dyadic {
        &self.im.mid
    }

    pub fn im_rad(&self) -> &Dyadic {
        &self.im.rad
    }

    /// Largest of the two radii.
    pub fn max_rad(&self) -> Dyadic {
        if self.re.rad >= self.im.rad {
            self.re.rad.clone()
        } else {
            self.im.rad.clone()
        }
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    pub fn overlaps(&self, other: &ComplexBall) -> bool {
        self.re.overlaps(&other.re) && self.im.overlaps(&other.im)
    }

    pub fn add(&self, other: &ComplexBall, prec: u64) -> ComplexBall {
        ComplexBall { re: self.re.add(&other.re, prec), im: self.im.add(&other.im, prec) }
    }

    pub fn sub(&self, other: &ComplexBall, prec: u64) -> ComplexBall {
        ComplexBall { re: self.re.sub(&other.re, prec), im: self.im.sub(&other.im, prec) }
    }

    pub fn neg(&self) -> ComplexBall {
        ComplexBall { re: self.re.neg(), im: self.im.neg() }
    }

    pub fn mul(&self, other: &ComplexBall, prec: u64) -> ComplexBall {
        let re = self.re.mul(&other.re, prec).sub(&self.im.mul(&other.im, prec), prec);
        let im = self.re.mul(&other.im, prec).add(&self.im.mul(&other.re, prec), prec);
        ComplexBall { re, im }
    }

    pub fn mul_real(&self, r: &RealBall, prec: u64) -> ComplexBall {
        ComplexBall { re: self.re.mul(r, prec), im: self.im.mul(r, prec) }
    }
}

/// Square matrix of real balls, row-major.
#[derive(Clone, Debug)]
pub struct BallMatrix {
    pub n: usize,
    pub entries: Vec<RealBall>,
}

impl BallMatrix {
    pub fn new(n: usize, entries: Vec<RealBall>) -> Self {
        assert_eq!(entries.len(), n * n, "ball matrix shape");
        BallMatrix { n, entries }
    }

    pub fn get(&self, i: usize, j: usize) -> &RealBall {
        &self.entries[i * self.n + j]
    }

    pub fn transpose(&self) -> BallMatrix {
        let n = self.n;
        BallMatrix { n, entries: (0..n * n).map(|k| self.get(k % n, k / n).clone()).collect() }
    }

    pub fn mul(&self, other: &BallMatrix, prec: u64) -> BallMatrix {
        let n = self.n;
        assert_eq!(n, other.n, "ball matrix product shape");
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = RealBall::zero();
                for k in 0..n {
                    acc = acc.add(&self.get(i, k).mul(other.get(k, j), prec), prec);
                }
                entries.push(acc);
            }
        }
        BallMatrix { n, entries }
    }

    /// Certifies `det ≠ 0`: elimination succeeds when every pivot ball excludes zero.
    pub fn certify_nonsingular(&self, prec: u64) -> bool {
        self.inverse(prec).is_some()
    }

    /// Gauss–Jordan inverse; `None` when no certified nonzero pivot is available.
    pub fn inverse(&self, prec: u64) -> Option<BallMatrix> {
        let n = self.n;
        let w = 2 * n;
        let mut a: Vec<Vec<RealBall>> = (0..n)
            .map(|i| {
                let mut row: Vec<RealBall> = (0..n).map(|j| self.get(i, j).clone()).collect();
                row.extend((0..n).map(|j| {
                    if i == j {
                        RealBall::exact(Dyadic::one())
                    } else {
                        RealBall::zero()
                    }
                }));
                row
            })
            .collect();
        for c in 0..n {
            // Pivot: certified-nonzero entry with the largest midpoint.
            let p = (c..n)
                .filter(|&r| !a[r][c].contains_zero())
                .max_by(|&x, &y| a[x][c].mid.abs().cmp(&a[y][c].mid.abs()).then(y.cmp(&x)))?;
            a.swap(c, p);
            let inv = a[c][c].recip(prec)?;
            for j in 0..w {
                a[c][j] = a[c][j].mul(&inv, prec);
            }
            for r in 0..n {
                if r == c || a[r][c].is_exact_zero() {
                    continue;
                }
                let f = a[r][c].clone();
                for j in 0..w {
                    let t = f.mul(&a[c][j], prec);
                    a[r][j] = a[r][j].sub(&t, prec);
                }
            }
        }
        let entries = a.into_iter().flat_map(|row| row.into_iter().skip(n)).collect();
        Some(BallMatrix { n, entries })
    }

    /// Certifies positive definiteness of a symmetric matrix: elimination
    /// without row exchanges must produce strictly positive pivots, which is
    /// equivalent to all leading principal minors being positive.
    pub fn certify_positive_definite(&self, prec: u64) -> bool {
        let n = self.n;
        let mut a: Vec<Vec<RealBall>> =
            (0..n).map(|i| (0..n).map(|j| self.get(i, j).clone()).collect()).collect();
        for c in 0..n {
            if !a[c][c].is_positive() {
                return false;
            }
            let inv = match a[c][c].recip(prec) {
                Some(v) => v,
                None => return false,
            };
            for r in c + 1..n {
                let f = a[r][c].mul(&inv, prec);
                for j in c..n {
                    let t = f.mul(&a[c][j], prec);
                    a[r][j] = a[r][j].sub(&t, prec);
                }
            }
        }
        true
    }
}

impl RealBall {
    fn is_exact_zero(&self) -> bool {
        self.mid.is_zero() && self.rad.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn dyadic_from_f64_is_exact() {
        let d = Dyadic::from_f64(0.375);
        assert_eq!(d.to_rational(), q(3, 8));
        assert_eq!(Dyadic::from_f64(-6.0).to_rational(), q(-6, 1));
    }

    #[test]
    fn floor_and_ceil_bracket_a_third() {
        let third = q(1, 3);
        let lo = Dyadic::floor_rational(&third, 64).to_rational();
        let hi = Dyadic::ceil_rational(&third, 64).to_rational();
        assert!(lo < third && third < hi);
        assert!(&hi - &lo < q(1, 1 << 62));
    }

    #[test]
    fn sqrt_upper_bounds_two() {
        let r = Dyadic::from_int(2).sqrt_upper(80);
        let rr = r.to_rational();
        assert!(&rr * &rr >= q(2, 1));
        assert!((r.to_f64() - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(Dyadic::from_int(9).sqrt_upper(10).to_rational(), q(3, 1));
    }

    #[test]
    fn third_ball_times_three_contains_one() {
        let b = RealBall::from_rational(&q(1, 3), 64);
        let three = RealBall::from_rational(&q(3, 1), 64);
        let p = b.mul(&three, 64);
        assert!(p.contains_rational(&q(1, 1)));
        assert!(p.rad < Dyadic::pow2(-60));
    }

    #[test]
    fn reciprocal_encloses() {
        let b = RealBall::from_rational(&q(7, 1), 64);
        let r = b.recip(64).unwrap();
        assert!(r.contains_rational(&q(1, 7)));
        assert!(RealBall::zero().recip(64).is_none());
    }

    #[test]
    fn inverse_and_positive_definite() {
        let m = BallMatrix::new(
            2,
            vec![
                RealBall::from_rational(&q(2, 1), 64),
                RealBall::from_rational(&q(1, 1), 64),
                RealBall::from_rational(&q(1, 1), 64),
                RealBall::from_rational(&q(2, 1), 64),
            ],
        );
        let inv = m.inverse(64).unwrap();
        assert!(inv.get(0, 0).contains_rational(&q(2, 3)));
        assert!(inv.get(0, 1).contains_rational(&q(-1, 3)));
        assert!(m.certify_positive_definite(64));
        let indefinite = BallMatrix::new(
            2,
            vec![
                RealBall::from_rational(&q(1, 1), 64),
                RealBall::from_rational(&q(2, 1), 64),
                RealBall::from_rational(&q(2, 1), 64),
                RealBall::from_rational(&q(1, 1), 64),
            ],
        );
        assert!(!indefinite.certify_positive_definite(64));
        let singular = BallMatrix::new(2, vec![RealBall::zero(); 4]);
        assert!(!singular.certify_nonsingular(64));
    }

    #[test]
    fn complex_mul_i_squared() {
        let i = ComplexBall::new(RealBall::zero(), RealBall::exact(Dyadic::one()));
        let m = i.mul(&i, 64);
        assert!(m.re.contains_rational(&q(-1, 1)) && m.im.contains_zero());
    }
}
