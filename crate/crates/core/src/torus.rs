//! Period matrices `(τ I_g)` and the linear systems built from them.
//!
//! Unknown ordering for Néron–Severi systems is fixed project-wide: the
//! strictly upper entries `a_ij` of `A` in lexicographic order, then all
//! `b_st` row-major, then the strictly upper `c_lk` in lexicographic order.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ball::BallMatrix;
use crate::linalg::{determinant, RationalMatrix};
use crate::numberfield::{FieldElement, FieldError, NumberField, DEFAULT_MAX_PRECISION};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TorusError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("entries belong to different fields")]
    FieldMismatch,
    #[error("expected a {expected} matrix, got {got}")]
    Shape { expected: String, got: String },
    #[error("det(Im τ) ≠ 0 could not be certified up to {max_bits} bits (indeterminate or zero)")]
    DegenerateImaginaryPart { max_bits: u64 },
    #[error("transform matrix is not unimodular (determinant {det})")]
    NotUnimodular { det: String },
    #[error("right block of the transformed period matrix is singular")]
    SingularRightBlock,
}

/// Precision escalation for interval certification.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrecisionPolicy {
    pub start_bits: u64,
    pub max_bits: u64,
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        PrecisionPolicy { start_bits: 64, max_bits: DEFAULT_MAX_PRECISION }
    }
}

/// Dense matrix of elements of one number field.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldMatrix {
    rows: usize,
    cols: usize,
    field: NumberField,
    entries: Vec<FieldElement>,
}

impl FieldMatrix {
    pub fn new(field: &NumberField, rows: usize, cols: usize, entries: Vec<FieldElement>) -> Result<Self, TorusError> {
        if entries.len() != rows * cols {
            return Err(TorusError::Shape {
                expected: format!("{rows}×{cols}"),
                got: format!("{} entries", entries.len()),
            });
        }
        let probe = field.zero();
        if entries.iter().any(|e| probe.check_same(e).is_err()) {
            return Err(TorusError::FieldMismatch);
        }
        Ok(FieldMatrix { rows, cols, field: field.clone(), entries })
    }

    pub fn from_rows(field: &NumberField, rows: Vec<Vec<FieldElement>>) -> Result<Self, TorusError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(TorusError::Shape { expected: format!("{r}×{c}"), got: "ragged rows".into() });
        }
        Self::new(field, r, c, rows.into_iter().flatten().collect())
    }

    pub fn zeros(field: &NumberField, rows: usize, cols: usize) -> Self {
        FieldMatrix { rows, cols, field: field.clone(), entries: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: &NumberField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.entries[i * n + i] = field.one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> &NumberField {
        &self.field
    }

    pub fn entries(&self) -> &[FieldElement] {
        &self.entries
    }

    pub fn get(&self, r: usize, c: usize) -> &FieldElement {
        &self.entries[r * self.cols + c]
    }

    fn get_mut(&mut self, r: usize, c: usize) -> &mut FieldElement {
        &mut self.entries[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[FieldElement] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> FieldMatrix {
        let mut entries = Vec::with_capacity(self.entries.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                entries.push(self.get(r, c).clone());
            }
        }
        FieldMatrix { rows: self.cols, cols: self.rows, field: self.field.clone(), entries }
    }

    pub fn mul(&self, other: &FieldMatrix) -> FieldMatrix {
        assert_eq!(self.cols, other.rows, "matrix product shape");
        let mut out = FieldMatrix::zeros(&self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let t = a.mul(b);
                        let e = out.get_mut(i, j);
                        *e = e.add(&t);
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &FieldMatrix) -> FieldMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "matrix sum shape");
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a.add(b)).collect();
        FieldMatrix { rows: self.rows, cols: self.cols, field: self.field.clone(), entries }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(FieldElement::is_zero)
    }

    /// Expands each field row into `n` rational rows, one per power-basis
    /// coordinate, so that `ker_Q` of the result is the rational kernel of `self`.
    pub fn rationalize(&self) -> RationalMatrix {
        let n = self.field.degree();
        let mut rows = Vec::with_capacity(self.rows * n);
        for r in 0..self.rows {
            for k in 0..n {
                rows.push(self.row(r).iter().map(|e| e.coordinates()[k].clone()).collect());
            }
        }
        RationalMatrix::from_rows(self.cols, rows).expect("rationalized rows are rectangular")
    }

    /// Gauss–Jordan inverse over the field; `None` when singular.
    pub fn inverse(&self) -> Option<FieldMatrix> {
        assert_eq!(self.rows, self.cols, "inverse of non-square matrix");
        let n = self.rows;
        let mut a: Vec<Vec<FieldElement>> = (0..n).map(|r| self.row(r).to_vec()).collect();
        let mut inv: Vec<Vec<FieldElement>> =
            (0..n).map(|r| (0..n).map(|c| if r == c { self.field.one() } else { self.field.zero() }).collect()).collect();
        for c in 0..n {
            let p = (c..n).find(|&r| !a[r][c].is_zero())?;
            a.swap(c, p);
            inv.swap(c, p);
            let pinv = a[c][c].inv().ok()?;
            for j in 0..n {
                a[c][j] = a[c][j].mul(&pinv);
                inv[c][j] = inv[c][j].mul(&pinv);
            }
            for r in 0..n {
                if r == c || a[r][c].is_zero() {
                    continue;
                }
                let f = a[r][c].clone();
                for j in 0..n {
                    a[r][j] = a[r][j].sub(&f.mul(&a[c][j]));
                    inv[r][j] = inv[r][j].sub(&f.mul(&inv[c][j]));
                }
            }
        }
        Some(FieldMatrix { rows: n, cols: n, field: self.field.clone(), entries: inv.into_iter().flatten().collect() })
    }
}

/// Normalized period matrix `(τ I_g)` with certified `det(Im τ) ≠ 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct PeriodMatrix {
    g: usize,
    field: NumberField,
    tau: FieldMatrix,
    policy: PrecisionPolicy,
    certified_bits: u64,
}

/// Column index of `a_ij` (`i < j`) among the strictly upper pairs.
pub fn pair_index(g: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < g);
    i * g - i * (i + 1) / 2 + (j - i - 1)
}

/// The strictly upper index pairs in lexicographic order.
pub fn upper_pairs(g: usize) -> Vec<(usize, usize)> {
    (0..g).flat_map(|i| (i + 1..g).map(move |j| (i, j))).collect()
}

/// Number of unknowns `2g² − g` in the Néron–Severi system.
pub fn ns_unknowns(g: usize) -> usize {
    2 * g * g - g
}

impl PeriodMatrix {
    /// Validates `τ` (a square matrix over `field`) and certifies `det(Im τ) ≠ 0`
    /// with ball arithmetic, doubling precision from `policy.start_bits` up to
    /// `policy.max_bits`.
    pub fn new(field: &NumberField, tau: Vec<Vec<FieldElement>>, policy: PrecisionPolicy) -> Result<Self, TorusError> {
        let g = tau.len();
        if g == 0 || tau.iter().any(|r| r.len() != g) {
            return Err(TorusError::Shape {
                expected: "nonempty square".into(),
                got: format!("{} rows of lengths {:?}", g, tau.iter().map(Vec::len).collect::<Vec<_>>()),
            });
        }
        let tau = FieldMatrix::from_rows(field, tau)?;
        Self::from_matrix(tau, policy)
    }

    pub fn from_matrix(tau: FieldMatrix, policy: PrecisionPolicy) -> Result<Self, TorusError> {
        if tau.rows != tau.cols || tau.rows == 0 {
            return Err(TorusError::Shape { expected: "nonempty square".into(), got: format!("{}×{}", tau.rows, tau.cols) });
        }
        let g = tau.rows;
        let field = tau.field.clone();
        let certified_bits = certify_imaginary_part(&tau, policy)?;
        Ok(PeriodMatrix { g, field, tau, policy, certified_bits })
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn field(&self) -> &NumberField {
        &self.field
    }

    pub fn tau(&self) -> &FieldMatrix {
        &self.tau
    }

    pub fn entry(&self, i: usize, j: usize) -> &FieldElement {
        self.tau.get(i, j)
    }

    pub fn policy(&self) -> PrecisionPolicy {
        self.policy
    }

    /// Always true: construction fails unless `det(Im τ) ≠ 0` is certified.
    pub fn validated(&self) -> bool {
        true
    }

    /// Precision at which `det(Im τ) ≠ 0` was certified.
    pub fn certified_bits(&self) -> u64 {
        self.certified_bits
    }

    /// Ball enclosures of `Re τ` and `Im τ`.
    pub fn real_imag_balls(&self, bits: u64) -> Result<(BallMatrix, BallMatrix), TorusError> {
        real_imag_balls(&self.tau, bits)
    }
}

fn real_imag_balls(tau: &FieldMatrix, bits: u64) -> Result<(BallMatrix, BallMatrix), TorusError> {
    let n = tau.rows;
    let alpha = if tau.entries.iter().all(FieldElement::is_rational) {
        None
    } else {
        Some(tau.field.root_enclosure(bits + 16)?)
    };
    let mut re = Vec::with_capacity(n * n);
    let mut im = Vec::with_capacity(n * n);
    for e in &tau.entries {
        let b = match (&alpha, e.is_rational()) {
            (Some(a), false) => e.embed_with(a, bits + 16),
            _ => e.embed(bits)?,
        };
        re.push(b.re);
        im.push(b.im);
    }
    Ok((BallMatrix::new(n, re), BallMatrix::new(n, im)))
}

fn certify_imaginary_part(tau: &FieldMatrix, policy: PrecisionPolicy) -> Result<u64, TorusError> {
    let max_bits = policy.max_bits.max(policy.start_bits);
    // An all-zero imaginary row is exactly singular at every precision.
    let rational_row = (0..tau.rows).any(|r| tau.row(r).iter().all(FieldElement::is_rational));
    if rational_row {
        return Err(TorusError::DegenerateImaginaryPart { max_bits });
    }
    let mut bits = policy.start_bits.max(32);
    loop {
        let (_, im) = real_imag_balls(tau, bits)?;
        if im.certify_nonsingular(bits) {
            return Ok(bits);
        }
        if bits >= max_bits {
            return Err(TorusError::DegenerateImaginaryPart { max_bits });
        }
        bits = (bits * 2).min(max_bits);
    }
}

/// Field-valued matrix of the map `(A, B, C) ↦ (w_ij)_{i<j}` with
/// `w_ij = a_ij + Σ_k (b_jk τ_ki − b_ik τ_kj) + Σ_{l<k} c_lk (τ_kj τ_li − τ_lj τ_ki)`.
///
/// Shape `g(g−1)/2 × (2g² − g)`; rows follow the lexicographic pairs `(i, j)`.
pub fn build_t(p: &PeriodMatrix) -> FieldMatrix {
    let g = p.g;
    let field = &p.field;
    let pairs = upper_pairs(g);
    let np = pairs.len();
    let cols = ns_unknowns(g);
    let mut t = FieldMatrix::zeros(field, np, cols);
    let tau = |r: usize, c: usize| p.entry(r, c);
    for (row, &(i, j)) in pairs.iter().enumerate() {
        *t.get_mut(row, pair_index(g, i, j)) = field.one();
        for k in 0..g {
            let bj = np + j * g + k;
            let e = t.get_mut(row, bj);
            *e = e.add(tau(k, i));
            let bi = np + i * g + k;
            let e = t.get_mut(row, bi);
            *e = e.sub(tau(k, j));
        }
        for &(l, k) in &pairs {
            let minor = tau(k, j).mul(tau(l, i)).sub(&tau(l, j).mul(tau(k, i)));
            *t.get_mut(row, np + g * g + pair_index(g, l, k)) = minor;
        }
    }
    t
}

/// Field-valued system `(σB + D)τ − σA − C = 0` for homomorphisms from the
/// torus of `p` (period `τ`) to that of `q` (period `σ`).
///
/// Unknowns are the entries of the `g_q × g_p` blocks `A, B, C, D` of the
/// rational representation, in that block order, each row-major; equations
/// are the `g_q × g_p` entries, row-major.
pub fn build_hom_system(p: &PeriodMatrix, q: &PeriodMatrix) -> Result<FieldMatrix, TorusError> {
    p.field.zero().check_same(&q.field.zero()).map_err(|_| TorusError::FieldMismatch)?;
    let (gp, gq) = (p.g, q.g);
    let m = gp * gq;
    let field = &p.field;
    let mut sys = FieldMatrix::zeros(field, m, 4 * m);
    for r in 0..gq {
        for s in 0..gp {
            let row = r * gp + s;
            for a in 0..gq {
                for b in 0..gp {
                    let blk = a * gp + b;
                    let sigma_ra = q.entry(r, a);
                    // A: −σ_ra [b = s]
                    if b == s {
                        *sys.get_mut(row, blk) = sigma_ra.neg();
                    }
                    // B: σ_ra τ_bs
                    *sys.get_mut(row, m + blk) = sigma_ra.mul(p.entry(b, s));
                    if a == r {
                        // C: −[a = r][b = s]
                        if b == s {
                            *sys.get_mut(row, 2 * m + blk) = field.from_int(-1);
                        }
                        // D: [a = r] τ_bs
                        *sys.get_mut(row, 3 * m + blk) = p.entry(b, s).clone();
                    }
                }
            }
        }
    }
    Ok(sys)
}

/// Re-normalizes `(τ I)·M` for an integral `M` with `det M = ±1`: writing
/// `(τ I)·M = (τ' τ₂)`, the result is `τ₂⁻¹ τ'`, a period matrix of an
/// isomorphic torus.
pub fn unimodular_transform(p: &PeriodMatrix, m: &[Vec<i64>]) -> Result<PeriodMatrix, TorusError> {
    let g = p.g;
    let n = 2 * g;
    if m.len() != n || m.iter().any(|r| r.len() != n) {
        return Err(TorusError::Shape { expected: format!("{n}×{n}"), got: format!("{} rows", m.len()) });
    }
    let det = determinant(&RationalMatrix::from_i64(m));
    if !(det == BigRational::one() || det == -BigRational::one()) {
        return Err(TorusError::NotUnimodular { det: det.to_string() });
    }
    let field = &p.field;
    let mut prod = FieldMatrix::zeros(field, g, n);
    for r in 0..g {
        for c in 0..n {
            let mut acc = field.from_int(m[g + r][c]);
            for k in 0..g {
                if m[k][c] != 0 {
                    acc = acc.add(&p.entry(r, k).scale(&BigRational::from_integer(BigInt::from(m[k][c]))));
                }
            }
            *prod.get_mut(r, c) = acc;
        }
    }
    let left = FieldMatrix::from_rows(field, (0..g).map(|r| prod.row(r)[..g].to_vec()).collect())?;
    let right = FieldMatrix::from_rows(field, (0..g).map(|r| prod.row(r)[g..].to_vec()).collect())?;
    let right_inv = right.inverse().ok_or(TorusError::SingularRightBlock)?;
    PeriodMatrix::from_matrix(right_inv.mul(&left), p.policy)
}

/// Period matrix of the dual torus: `τ` replaced by its transpose.
pub fn dual(p: &PeriodMatrix) -> Result<PeriodMatrix, TorusError> {
    PeriodMatrix::from_matrix(p.tau.transpose(), p.policy)
}

/// Block-diagonal period matrix of the product torus.
pub fn direct_sum(p1: &PeriodMatrix, p2: &PeriodMatrix) -> Result<PeriodMatrix, TorusError> {
    p1.field.zero().check_same(&p2.field.zero()).map_err(|_| TorusError::FieldMismatch)?;
    let g = p1.g + p2.g;
    let mut tau = FieldMatrix::zeros(&p1.field, g, g);
    for i in 0..p1.g {
        for j in 0..p1.g {
            *tau.get_mut(i, j) = p1.entry(i, j).clone();
        }
    }
    for i in 0..p2.g {
        for j in 0..p2.g {
            *tau.get_mut(p1.g + i, p1.g + j) = p2.entry(i, j).clone();
        }
    }
    let policy = PrecisionPolicy {
        start_bits: p1.policy.start_bits.min(p2.policy.start_bits),
        max_bits: p1.policy.max_bits.max(p2.policy.max_bits),
    };
    PeriodMatrix::from_matrix(tau, policy)
}

/// Diagonal period matrix `diag(entries)`.
pub fn diagonal(field: &NumberField, entries: &[FieldElement], policy: PrecisionPolicy) -> Result<PeriodMatrix, TorusError> {
    let g = entries.len();
    let rows = (0..g)
        .map(|i| (0..g).map(|j| if i == j { entries[i].clone() } else { field.zero() }).collect())
        .collect();
    PeriodMatrix::new(field, rows, policy)
}

/// A Néron–Severi class: integer `A`, `C` skew-symmetric and `B` arbitrary with
/// `A − Bτ + τᵀBᵀ + τᵀCτ = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NSClass {
    #[serde(rename = "A", with = "crate::jsonnum::int_matrix")]
    pub a: Vec<Vec<BigInt>>,
    #[serde(rename = "B", with = "crate::jsonnum::int_matrix")]
    pub b: Vec<Vec<BigInt>>,
    #[serde(rename = "C", with = "crate::jsonnum::int_matrix")]
    pub c: Vec<Vec<BigInt>>,
}

impl NSClass {
    pub fn g(&self) -> usize {
        self.b.len()
    }

    /// Reassembles an unknown vector in the project-wide ordering.
    pub fn from_vector(g: usize, v: &[BigInt]) -> NSClass {
        assert_eq!(v.len(), ns_unknowns(g), "NS vector length");
        let np = g * (g - 1) / 2;
        let mut a = vec![vec![BigInt::zero(); g]; g];
        let mut c = vec![vec![BigInt::zero(); g]; g];
        for (idx, (i, j)) in upper_pairs(g).into_iter().enumerate() {
            a[i][j] = v[idx].clone();
            a[j][i] = -v[idx].clone();
            c[i][j] = v[np + g * g + idx].clone();
            c[j][i] = -v[np + g * g + idx].clone();
        }
        let b = (0..g).map(|s| v[np + s * g..np + (s + 1) * g].to_vec()).collect();
        NSClass { a, b, c }
    }

    pub fn to_vector(&self) -> Vec<BigInt> {
        let g = self.g();
        let pairs = upper_pairs(g);
        let mut v: Vec<BigInt> = pairs.iter().map(|&(i, j)| self.a[i][j].clone()).collect();
        v.extend(self.b.iter().flatten().cloned());
        v.extend(pairs.iter().map(|&(i, j)| self.c[i][j].clone()));
        v
    }

    pub fn is_skew(&self) -> bool {
        let g = self.g();
        (0..g).all(|i| {
            (0..g).all(|j| self.a[i][j] == -self.a[j][i].clone() && self.c[i][j] == -self.c[j][i].clone())
        })
    }

    /// `W = A − Bτ + τᵀBᵀ + τᵀCτ` over the field of `p`.
    pub fn w_matrix(&self, p: &PeriodMatrix) -> FieldMatrix {
        let field = p.field();
        let lift = |m: &Vec<Vec<BigInt>>| {
            FieldMatrix::from_rows(
                field,
                m.iter().map(|r| r.iter().map(|x| field.rational(BigRational::from_integer(x.clone()))).collect()).collect(),
            )
            .expect("square integer block")
        };
        let (a, b, c) = (lift(&self.a), lift(&self.b), lift(&self.c));
        let tau = p.tau();
        let tt = tau.transpose();
        let neg_btau = b.mul(tau);
        let neg_btau = FieldMatrix {
            rows: neg_btau.rows,
            cols: neg_btau.cols,
            field: field.clone(),
            entries: neg_btau.entries.iter().map(FieldElement::neg).collect(),
        };
        a.add(&neg_btau).add(&tt.mul(&b.transpose())).add(&tt.mul(&c).mul(tau))
    }

    /// Exact check that the class lies in NS for `p`.
    pub fn satisfies(&self, p: &PeriodMatrix) -> bool {
        self.g() == p.g() && self.is_skew() && self.w_matrix(p).is_zero()
    }

    /// The alternating form `[[A, B], [−Bᵀ, C]]` on the lattice, in the basis
    /// given by the columns of `(τ I)`.
    pub fn alternating_form(&self) -> Vec<Vec<BigInt>> {
        let g = self.g();
        let mut e = vec![vec![BigInt::zero(); 2 * g]; 2 * g];
        for i in 0..g {
            for j in 0..g {
                e[i][j] = self.a[i][j].clone();
                e[i][g + j] = self.b[i][j].clone();
                e[g + i][j] = -self.b[j][i].clone();
                e[g + i][g + j] = self.c[i][j].clone();
            }
        }
        e
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rank_bareiss;
    use crate::numberfield::RootHint;

    fn ints(c: &[i64]) -> Vec<BigInt> {
        c.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn gaussian() -> NumberField {
        NumberField::new(&ints(&[1, 0, 1]), &RootHint::new("0", "1"), 64).unwrap()
    }

    fn plastic() -> NumberField {
        NumberField::new(&ints(&[-1, -1, 0, 1]), &RootHint::new("-0.66", "0.56"), 64).unwrap()
    }

    fn diag(field: &NumberField, e: FieldElement, g: usize) -> PeriodMatrix {
        diagonal(field, &vec![e; g], PrecisionPolicy::default()).unwrap()
    }

    #[test]
    fn validation_examples() {
        let k = gaussian();
        assert!(diag(&k, k.generator(), 1).validated());
        let c = plastic();
        assert!(diag(&c, c.generator(), 2).validated());
        let err = diagonal(&k, &[k.one(), k.one()], PrecisionPolicy::default()).unwrap_err();
        assert!(matches!(err, TorusError::DegenerateImaginaryPart { .. }));
    }

    #[test]
    fn non_square_rejected() {
        let k = gaussian();
        let err = PeriodMatrix::new(&k, vec![vec![k.one(), k.one()]], PrecisionPolicy::default()).unwrap_err();
        assert!(matches!(err, TorusError::Shape { .. }));
    }

    #[test]
    fn pair_indexing_is_lexicographic() {
        let g = 4;
        for (idx, (i, j)) in upper_pairs(g).into_iter().enumerate() {
            assert_eq!(pair_index(g, i, j), idx);
        }
    }

    #[test]
    fn t_matrix_genus_one_is_empty() {
        let k = gaussian();
        let t = build_t(&diag(&k, k.generator(), 1));
        assert_eq!((t.rows(), t.cols()), (0, 1));
    }

    #[test]
    fn t_matrix_genus_two_gaussian_row() {
        let k = gaussian();
        let i = k.generator();
        let t = build_t(&diag(&k, i.clone(), 2));
        let expected = [k.one(), k.zero(), i.neg(), i.clone(), k.zero(), k.from_int(-1)];
        assert_eq!(t.row(0), &expected);
        let r = t.rationalize();
        assert_eq!(r, RationalMatrix::from_i64(&[vec![1, 0, 0, 0, 0, -1], vec![0, 0, -1, 1, 0, 0]]));
        assert_eq!(rank_bareiss(&r), 2);
    }

    #[test]
    fn hom_system_dimensions() {
        let k = gaussian();
        let p = diag(&k, k.generator(), 1);
        let sys = build_hom_system(&p, &p).unwrap();
        assert_eq!((sys.rows(), sys.cols()), (1, 4));
        assert_eq!(4 - rank_bareiss(&sys.rationalize()), 2);
        let c = plastic();
        let p = diag(&c, c.generator(), 1);
        assert_eq!(4 - rank_bareiss(&build_hom_system(&p, &p).unwrap().rationalize()), 1);
    }

    #[test]
    fn unimodular_examples() {
        let k = gaussian();
        let p = diag(&k, k.generator(), 1);
        assert_eq!(unimodular_transform(&p, &[vec![1, 0], vec![0, 1]]).unwrap().tau(), p.tau());
        let s = unimodular_transform(&p, &[vec![0, -1], vec![1, 0]]).unwrap();
        assert_eq!(s.entry(0, 0), &k.generator());
        let c = plastic();
        let p = diag(&c, c.generator(), 1);
        let t = unimodular_transform(&p, &[vec![1, 0], vec![1, 1]]).unwrap();
        assert_eq!(t.entry(0, 0), &c.generator().add(&c.one()));
        assert!(matches!(
            unimodular_transform(&p, &[vec![2, 0], vec![0, 1]]),
            Err(TorusError::NotUnimodular { .. })
        ));
    }

    #[test]
    fn singular_right_block_reported() {
        let k = gaussian();
        let p = diag(&k, k.generator(), 2);
        let m = vec![
            vec![0, 0, 1, 0],
            vec![0, 1, 0, 0],
            vec![1, 0, 0, 0],
            vec![0, 0, 0, 1],
        ];
        // right block (τ_1, e_2) is invertible
        assert!(unimodular_transform(&p, &m).is_ok());
        let m = vec![
            vec![0, 0, 1, 0],
            vec![0, 1, 0, 0],
            vec![0, 0, 0, 1],
            vec![1, 0, 0, 0],
        ];
        // right block (τ_1, e_1) = [[i, 1], [0, 0]]
        assert_eq!(unimodular_transform(&p, &m).unwrap_err(), TorusError::SingularRightBlock);
    }

    #[test]
    fn dual_and_direct_sum() {
        let k = gaussian();
        let i = k.generator();
        let p = PeriodMatrix::new(&k, vec![vec![i.clone(), k.one()], vec![k.zero(), i.clone()]], PrecisionPolicy::default()).unwrap();
        let d = dual(&p).unwrap();
        assert_eq!(d.entry(0, 1), &k.zero());
        assert_eq!(d.entry(1, 0), &k.one());
        let e = diag(&k, i.clone(), 1);
        let s = direct_sum(&e, &e).unwrap();
        assert_eq!(s.tau(), diag(&k, i, 2).tau());
        let c = plastic();
        assert_eq!(direct_sum(&e, &diag(&c, c.generator(), 1)).unwrap_err(), TorusError::FieldMismatch);
    }

    #[test]
    fn ns_vector_round_trip() {
        let g = 3;
        let v: Vec<BigInt> = (0..ns_unknowns(g) as i64).map(BigInt::from).collect();
        let cls = NSClass::from_vector(g, &v);
        assert!(cls.is_skew());
        assert_eq!(cls.to_vector(), v);
    }

    #[test]
    fn principal_class_on_symmetric_tau() {
        let k = gaussian();
        let p = diag(&k, k.generator(), 2);
        let id = vec![vec![BigInt::one(), BigInt::zero()], vec![BigInt::zero(), BigInt::one()]];
        let zero = vec![vec![BigInt::zero(); 2]; 2];
        let cls = NSClass { a: zero.clone(), b: id, c: zero };
        assert!(cls.satisfies(&p));
    }
}
