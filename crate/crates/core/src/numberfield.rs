//! Number fields `Q(α)` with a distinguished complex embedding.
//!
//! Elements are coordinate vectors in the power basis `1, α, …, α^{n−1}`.
//! The embedding is pinned by a certified box around one root of the
//! minimal polynomial, refined on demand.

use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::ball::{ComplexBall, RealBall};
use crate::linalg::QSpan;
use crate::poly::{monic_integral, primitive_part, QPoly};
use crate::roots::{irreducibility, isolate_roots, Irreducibility, RootDisk, RootError};

/// Default ceiling for precision escalation, in bits.
pub const DEFAULT_MAX_PRECISION: u64 = 4096;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("minimal polynomial must be nonzero of degree at least 1")]
    DegenerateMinpoly,
    #[error("minimal polynomial is reducible over Q")]
    ReduciblePolynomial,
    #[error("root hint is ambiguous: several roots lie within tolerance {tolerance} of the hint")]
    AmbiguousRoot { tolerance: String },
    #[error("no root of the minimal polynomial lies within {tolerance} of the hint")]
    NoRootNearHint { tolerance: String },
    #[error("invalid decimal {0:?} in root hint")]
    BadDecimal(String),
    #[error("elements belong to different fields")]
    FieldMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("coordinate vector has length {got}, field degree is {degree}")]
    CoordinateLength { got: usize, degree: usize },
    #[error(transparent)]
    Root(#[from] RootError),
}

/// A decimal complex number as given by the user, kept exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootHint {
    pub re: String,
    pub im: String,
}

impl RootHint {
    pub fn new(re: impl Into<String>, im: impl Into<String>) -> Self {
        RootHint { re: re.into(), im: im.into() }
    }
}

/// Parses `[-+]digits[.digits]`, returning the value and the number of fractional digits.
pub fn parse_decimal(s: &str) -> Result<(BigRational, u32), FieldError> {
    let bad = || FieldError::BadDecimal(s.to_string());
    let t = s.trim();
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((a, b)) => (a, b),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let mant: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().map_err(|_| bad())? };
    let scale = BigInt::from(10u32).pow(frac_part.len() as u32);
    let v = BigRational::new(if neg { -mant } else { mant }, scale);
    Ok((v, frac_part.len() as u32))
}

struct RootCache {
    /// All roots of the monic integral model, certified.
    disks: Vec<RootDisk>,
    /// Index of the distinguished root in `disks`.
    index: usize,
    bits: u64,
}

struct FieldInner {
    /// Primitive integer minimal polynomial, ascending.
    minpoly: Vec<BigInt>,
    /// Monic model `a_n^{n−1}·p(y/a_n)`; its roots are `a_n·α`.
    monic_model: Vec<BigInt>,
    /// `α^n … α^{2n−2}` in the power basis.
    reduction: Vec<Vec<BigRational>>,
    modulus: QPoly,
    degree: usize,
    hint: RootHint,
    max_bits: u64,
    cache: Mutex<RootCache>,
}

/// The field `Q(α)` together with an embedding `α ↦ ℂ`.
#[derive(Clone)]
pub struct NumberField {
    inner: Arc<FieldInner>,
}

impl fmt::Debug for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NumberField")
            .field("minpoly", &self.inner.minpoly)
            .field("hint", &self.inner.hint)
            .finish()
    }
}

impl PartialEq for NumberField {
    fn eq(&self, other: &Self) -> bool {
        if Arc::ptr_eq(&self.inner, &other.inner) {
            return true;
        }
        if self.inner.minpoly != other.inner.minpoly {
            return false;
        }
        // Same polynomial: equal iff the distinguished roots coincide. Disks
        // of distinct roots are disjoint at every precision, so compare at a
        // common precision.
        let bits = self.cached_bits().max(other.cached_bits());
        match (self.root_disk(bits), other.root_disk(bits)) {
            (Ok(a), Ok(b)) => a.intersects(&b),
            _ => false,
        }
    }
}

impl NumberField {
    /// Builds `Q(α)` for the root of `minpoly` (ascending integer coefficients)
    /// closest to `hint`. Irreducibility is verified.
    ///
    /// A root is accepted when it lies within `10^−k` of the hint, where `k`
    /// is the smaller number of fractional digits in the two hint strings.
    pub fn new(minpoly: &[BigInt], hint: &RootHint, precision: u64) -> Result<Self, FieldError> {
        Self::with_max_precision(minpoly, hint, precision, DEFAULT_MAX_PRECISION)
    }

    pub fn with_max_precision(
        minpoly: &[BigInt],
        hint: &RootHint,
        precision: u64,
        max_bits: u64,
    ) -> Result<Self, FieldError> {
        let p = primitive_part(minpoly).ok_or(FieldError::DegenerateMinpoly)?;
        let degree = p.len() - 1;
        if degree == 0 {
            return Err(FieldError::DegenerateMinpoly);
        }
        let (hre, dre) = parse_decimal(&hint.re)?;
        let (him, dim) = parse_decimal(&hint.im)?;
        let tol = BigRational::new(BigInt::one(), BigInt::from(10u32).pow(dre.min(dim)));

        let qp = QPoly::from_ints(&p);
        if !qp.is_squarefree() {
            return Err(FieldError::ReduciblePolynomial);
        }
        let monic = monic_integral(&p);
        let lead = BigRational::from_integer(p[degree].clone());
        let precision = precision.max(32);

        let mut bits = precision;
        let disks = loop {
            let disks = isolate_roots(&monic, bits, max_bits, None)?;
            match irreducibility(&monic, &disks, bits + 64) {
                Irreducibility::Irreducible => break disks,
                Irreducibility::Reducible(_) => return Err(FieldError::ReduciblePolynomial),
                Irreducibility::Undecided if bits < max_bits => bits = (bits * 2).min(max_bits),
                Irreducibility::Undecided => {
                    return Err(RootError::PrecisionExhausted { max_bits }.into())
                }
            }
        };

        let (disks, index, bits) = select_root(&monic, disks, &lead, &hre, &him, &tol, bits, max_bits)?;

        let modulus = qp.monic();
        let reduction = reduction_table(&modulus, degree);
        Ok(NumberField {
            inner: Arc::new(FieldInner {
                minpoly: p,
                monic_model: monic,
                reduction,
                modulus,
                degree,
                hint: hint.clone(),
                max_bits,
                cache: Mutex::new(RootCache { disks, index, bits }),
            }),
        })
    }

    pub fn degree(&self) -> usize {
        self.inner.degree
    }

    /// Primitive integer minimal polynomial, ascending coefficients.
    pub fn minpoly(&self) -> &[BigInt] {
        &self.inner.minpoly
    }

    pub fn hint(&self) -> &RootHint {
        &self.inner.hint
    }

    pub fn max_precision(&self) -> u64 {
        self.inner.max_bits
    }

    fn cached_bits(&self) -> u64 {
        self.inner.cache.lock().expect("root cache poisoned").bits
    }

    /// Certified disk around `a_n·α` (the root of the monic model) of radius ≤ 2^−bits.
    fn root_disk(&self, bits: u64) -> Result<RootDisk, FieldError> {
        let mut cache = self.inner.cache.lock().expect("root cache poisoned");
        if cache.bits >= bits {
            return Ok(cache.disks[cache.index].clone());
        }
        let old = cache.disks[cache.index].clone();
        let mut target = bits;
        loop {
            let fresh = isolate_roots(&self.inner.monic_model, target, self.inner.max_bits.max(target), Some(&cache.disks))?;
            let hits: Vec<usize> = (0..fresh.len()).filter(|&i| fresh[i].intersects(&old)).collect();
            if hits.len() == 1 {
                cache.index = hits[0];
                cache.disks = fresh;
                cache.bits = target;
                return Ok(cache.disks[cache.index].clone());
            }
            target += 32;
        }
    }

    /// Certified enclosure of α at roughly `bits` bits.
    pub fn root_enclosure(&self, bits: u64) -> Result<ComplexBall, FieldError> {
        let disk = self.root_disk(bits + 8)?;
        let ball = disk.to_ball();
        let lead = &self.inner.minpoly[self.inner.degree];
        if lead.is_one() {
            return Ok(ball);
        }
        let inv = RealBall::from_rational(&BigRational::new(BigInt::one(), lead.clone()), bits + 16);
        Ok(ball.mul_real(&inv, bits + 16))
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement { field: self.clone(), coords: vec![BigRational::zero(); self.degree()] }
    }

    pub fn one(&self) -> FieldElement {
        self.rational(BigRational::one())
    }

    pub fn rational(&self, q: BigRational) -> FieldElement {
        let mut e = self.zero();
        e.coords[0] = q;
        e
    }

    pub fn from_int(&self, n: i64) -> FieldElement {
        self.rational(BigRational::from_integer(n.into()))
    }

    /// The generator α.
    pub fn generator(&self) -> FieldElement {
        let mut c = vec![BigRational::zero(); self.degree()];
        if self.degree() == 1 {
            // α is rational: α = −a_0/a_1.
            let p = &self.inner.minpoly;
            c[0] = BigRational::new(-p[0].clone(), p[1].clone());
        } else {
            c[1] = BigRational::one();
        }
        FieldElement { field: self.clone(), coords: c }
    }

    pub fn element(&self, coords: Vec<BigRational>) -> Result<FieldElement, FieldError> {
        if coords.len() != self.degree() {
            return Err(FieldError::CoordinateLength { got: coords.len(), degree: self.degree() });
        }
        Ok(FieldElement { field: self.clone(), coords })
    }

    /// `Σ c_k α^k` for integer coefficients of any length (reduced mod the minimal polynomial).
    pub fn from_poly_ints(&self, coeffs: &[i64]) -> FieldElement {
        let alpha = self.generator();
        let mut acc = self.zero();
        for &c in coeffs.iter().rev() {
            acc = acc.mul(&alpha).add(&self.from_int(c));
        }
        acc
    }
}

#[allow(clippy::too_many_arguments)]
fn select_root(
    monic: &[BigInt],
    mut disks: Vec<RootDisk>,
    lead: &BigRational,
    hre: &BigRational,
    him: &BigRational,
    tol: &BigRational,
    mut bits: u64,
    max_bits: u64,
) -> Result<(Vec<RootDisk>, usize, u64), FieldError> {
    // Work with the scaled hint: roots of the monic model are lead·α.
    let (sre, sim, stol) = (hre * lead, him * lead, tol * lead.abs());
    let tol_str = tol.to_string();
    loop {
        let mut inside = Vec::new();
        let mut unsure = false;
        for (i, d) in disks.iter().enumerate() {
            let dre = d.re.to_rational() - &sre;
            let dim = d.im.to_rational() - &sim;
            let dist2 = &dre * &dre + &dim * &dim;
            let r = d.radius.to_rational();
            let far = &stol + &r;
            let near = &stol - &r;
            if dist2 > &far * &far {
                continue;
            }
            if !near.is_negative() && dist2 <= &near * &near {
                inside.push(i);
            } else {
                unsure = true;
            }
        }
        if inside.len() > 1 {
            return Err(FieldError::AmbiguousRoot { tolerance: tol_str });
        }
        if !unsure {
            return match inside.first() {
                Some(&i) => Ok((disks, i, bits)),
                None => Err(FieldError::NoRootNearHint { tolerance: tol_str }),
            };
        }
        if bits >= max_bits {
            return Err(FieldError::AmbiguousRoot { tolerance: tol_str });
        }
        bits = (bits * 2).min(max_bits);
        disks = isolate_roots(monic, bits, max_bits, Some(&disks))?;
    }
}

fn reduction_table(modulus: &QPoly, n: usize) -> Vec<Vec<BigRational>> {
    // α^n = −Σ m_k α^k for monic m; higher powers by shifting.
    let m = modulus.coeffs();
    let mut table: Vec<Vec<BigRational>> = Vec::new();
    let mut cur: Vec<BigRational> = m[..n].iter().map(|c| -c).collect();
    for _ in n..2 * n - 1 {
        table.push(cur.clone());
        // multiply by α
        let top = cur[n - 1].clone();
        let mut next = vec![BigRational::zero(); n];
        for k in (1..n).rev() {
            next[k] = cur[k - 1].clone();
        }
        if !top.is_zero() {
            for k in 0..n {
                next[k] -= &top * &m[k];
            }
        }
        cur = next;
    }
    table
}

/// An element of a [`NumberField`] in power-basis coordinates.
#[derive(Clone)]
pub struct FieldElement {
    field: NumberField,
    coords: Vec<BigRational>,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coords
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => format!("{c}"),
                1 => format!("({c})·α"),
                _ => format!("({c})·α^{k}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.coords == other.coords && self.field == other.field
    }
}

/// Arithmetic selector for [`elem_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithKind {
    Add,
    Sub,
    Mul,
    InvOfA,
    Neg,
}

/// Exact field operation on `a` (and `b` for binary kinds).
pub fn elem_arith(a: &FieldElement, b: &FieldElement, kind: ArithKind) -> Result<FieldElement, FieldError> {
    a.check_same(b)?;
    match kind {
        ArithKind::Add => Ok(a.add(b)),
        ArithKind::Sub => Ok(a.sub(b)),
        ArithKind::Mul => Ok(a.mul(b)),
        ArithKind::Neg => Ok(a.neg()),
        ArithKind::InvOfA => a.inv(),
    }
}

impl FieldElement {
    pub fn field(&self) -> &NumberField {
        &self.field
    }

    /// Power-basis coordinates; length equals the field degree.
    pub fn coordinates(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn is_rational(&self) -> bool {
        self.coords.iter().skip(1).all(Zero::is_zero)
    }

    pub fn check_same(&self, other: &FieldElement) -> Result<(), FieldError> {
        if Arc::ptr_eq(&self.field.inner, &other.field.inner) || self.field == other.field {
            Ok(())
        } else {
            Err(FieldError::FieldMismatch)
        }
    }

    fn same_or_panic(&self, other: &FieldElement) {
        self.check_same(other).expect("field elements from different fields");
    }

    pub fn add(&self, other: &FieldElement) -> FieldElement {
        self.same_or_panic(other);
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect();
        FieldElement { field: self.field.clone(), coords }
    }

    pub fn sub(&self, other: &FieldElement) -> FieldElement {
        self.same_or_panic(other);
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect();
        FieldElement { field: self.field.clone(), coords }
    }

    pub fn neg(&self) -> FieldElement {
        FieldElement { field: self.field.clone(), coords: self.coords.iter().map(|c| -c).collect() }
    }

    pub fn scale(&self, q: &BigRational) -> FieldElement {
        FieldElement { field: self.field.clone(), coords: self.coords.iter().map(|c| c * q).collect() }
    }

    pub fn mul(&self, other: &FieldElement) -> FieldElement {
        self.same_or_panic(other);
        let n = self.coords.len();
        let mut prod = vec![BigRational::zero(); 2 * n - 1];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coords.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        let mut coords: Vec<BigRational> = prod[..n].to_vec();
        for (k, c) in prod[n..].iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (x, r) in coords.iter_mut().zip(&self.field.inner.reduction[k]) {
                *x += c * r;
            }
        }
        FieldElement { field: self.field.clone(), coords }
    }

    pub fn inv(&self) -> Result<FieldElement, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let a = QPoly::new(self.coords.clone());
        let (g, s) = a.gcd_cofactor(&self.field.inner.modulus);
        debug_assert_eq!(g, QPoly::one(), "minimal polynomial must be irreducible");
        let mut coords = s.coeffs().to_vec();
        coords.resize(self.coords.len(), BigRational::zero());
        Ok(FieldElement { field: self.field.clone(), coords })
    }

    pub fn div(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.check_same(other)?;
        Ok(self.mul(&other.inv()?))
    }

    /// Certified enclosure of the image under the distinguished embedding.
    ///
    /// Rational elements take an exact shortcut. Precision below 32 bits is raised to 32.
    pub fn embed(&self, precision: u64) -> Result<ComplexBall, FieldError> {
        let prec = precision.max(32);
        if self.is_rational() {
            return Ok(ComplexBall::from_rational(&self.coords[0], prec));
        }
        let alpha = self.field.root_enclosure(prec + 16)?;
        Ok(self.embed_with(&alpha, prec + 16))
    }

    /// Horner evaluation at a given enclosure of α.
    pub fn embed_with(&self, alpha: &ComplexBall, prec: u64) -> ComplexBall {
        let mut acc = ComplexBall::zero();
        for c in self.coords.iter().rev() {
            acc = acc.mul(alpha, prec).add(&ComplexBall::from_rational(c, prec), prec);
        }
        acc
    }

    /// Approximate value as `(re, im)` doubles, for display only.
    pub fn approx(&self) -> (f64, f64) {
        match self.embed(64) {
            Ok(b) => (b.re.mid.to_f64(), b.im.mid.to_f64()),
            Err(_) => (f64::NAN, f64::NAN),
        }
    }
}

/// Power-basis coordinates of `a`.
pub fn coordinates(a: &FieldElement) -> Vec<BigRational> {
    a.coords.clone()
}

/// `[Q(S) : Q]`, computed as the dimension of the Q-algebra generated by `1`
/// and `S`: the span is closed under products of its spanning elements until
/// it stabilizes.
pub fn generated_subfield_dimension(s: &[FieldElement]) -> Result<usize, FieldError> {
    let Some(first) = s.first() else {
        return Ok(1);
    };
    for e in s {
        first.check_same(e)?;
    }
    let field = first.field();
    let n = field.degree();
    let mut span = QSpan::new(n);
    let mut gens: Vec<FieldElement> = Vec::new();
    for e in std::iter::once(field.one()).chain(s.iter().cloned()) {
        if span.insert(e.coordinates()) {
            gens.push(e);
        }
    }
    let mut i = 0;
    while i < gens.len() && span.dimension() < n {
        for j in 0..=i {
            let p = gens[i].mul(&gens[j]);
            if span.insert(p.coordinates()) {
                gens.push(p);
            }
        }
        i += 1;
    }
    Ok(span.dimension())
}
