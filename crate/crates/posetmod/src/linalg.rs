//! Exact linear algebra over a prime field GF(p) or the rationals.
//!
//! Every rank, kernel, image and solve in the crate routes through this
//! module. All arithmetic is exact; pivoting is deterministic
//! (leftmost column, lowest row index) so identical inputs produce
//! bit-identical outputs.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::str::FromStr;

/// Coefficient field descriptor, fixed per computation session.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Field {
    /// GF(p) for a prime p (p is not primality-checked beyond small sanity).
    Prime(u64),
    /// Exact rational numbers.
    Rational,
}

impl Field {
    pub const GF2: Field = Field::Prime(2);

    pub fn zero(&self) -> Scalar {
        match self {
            Field::Prime(_) => Scalar::Fp(0),
            Field::Rational => Scalar::Rat(BigRational::zero()),
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            Field::Prime(_) => Scalar::Fp(1),
            Field::Rational => Scalar::Rat(BigRational::one()),
        }
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match self {
            Field::Prime(p) => {
                let p = *p as i128;
                let r = ((v as i128 % p) + p) % p;
                Scalar::Fp(r as u64)
            }
            Field::Rational => Scalar::Rat(BigRational::from_integer(BigInt::from(v))),
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (Field::Prime(p), Scalar::Fp(x), Scalar::Fp(y)) => {
                Scalar::Fp(((*x as u128 + *y as u128) % *p as u128) as u64)
            }
            (Field::Rational, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x + y),
            _ => panic!("scalar does not belong to field {self:?}"),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match (self, a) {
            (Field::Prime(p), Scalar::Fp(x)) => Scalar::Fp(if *x == 0 { 0 } else { p - x }),
            (Field::Rational, Scalar::Rat(x)) => Scalar::Rat(-x),
            _ => panic!("scalar does not belong to field {self:?}"),
        }
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (Field::Prime(p), Scalar::Fp(x), Scalar::Fp(y)) => {
                Scalar::Fp(((*x as u128 * *y as u128) % *p as u128) as u64)
            }
            (Field::Rational, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x * y),
            _ => panic!("scalar does not belong to field {self:?}"),
        }
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self, a: &Scalar) -> Scalar {
        match (self, a) {
            (Field::Prime(p), Scalar::Fp(x)) => {
                assert!(*x != 0, "inverse of zero");
                // extended Euclid
                let (mut r0, mut r1) = (*p as i128, *x as i128);
                let (mut s0, mut s1) = (0i128, 1i128);
                while r1 != 0 {
                    let q = r0 / r1;
                    (r0, r1) = (r1, r0 - q * r1);
                    (s0, s1) = (s1, s0 - q * s1);
                }
                let p = *p as i128;
                Scalar::Fp((((s0 % p) + p) % p) as u64)
            }
            (Field::Rational, Scalar::Rat(x)) => {
                assert!(!x.is_zero(), "inverse of zero");
                Scalar::Rat(x.recip())
            }
            _ => panic!("scalar does not belong to field {self:?}"),
        }
    }

    pub fn parse(&self, s: &str) -> Result<Scalar, LinalgError> {
        match self {
            Field::Prime(_) => {
                let v = i64::from_str(s).map_err(|_| LinalgError::BadScalar(s.to_string()))?;
                Ok(self.from_i64(v))
            }
            Field::Rational => {
                let r = BigRational::from_str(s)
                    .or_else(|_| BigInt::from_str(s).map(BigRational::from_integer))
                    .map_err(|_| LinalgError::BadScalar(s.to_string()))?;
                Ok(Scalar::Rat(r))
            }
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Prime(p) => write!(f, "{p}"),
            Field::Rational => write!(f, "Q"),
        }
    }
}

impl FromStr for Field {
    type Err = LinalgError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "Q" | "q" => Ok(Field::Rational),
            _ => {
                let p: u64 = s.parse().map_err(|_| LinalgError::BadScalar(s.to_string()))?;
                if p < 2 {
                    return Err(LinalgError::BadScalar(s.to_string()));
                }
                Ok(Field::Prime(p))
            }
        }
    }
}

/// A field element. The variant must match the session field; `Matrix`
/// operations check this once per operation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Fp(u64),
    Rat(BigRational),
}

impl Scalar {
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Fp(x) => *x == 0,
            Scalar::Rat(x) => x.is_zero(),
        }
    }

    fn matches(&self, field: &Field) -> bool {
        matches!(
            (self, field),
            (Scalar::Fp(_), Field::Prime(_)) | (Scalar::Rat(_), Field::Rational)
        )
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Fp(x) => write!(f, "{x}"),
            Scalar::Rat(x) => {
                if x.denom().is_one() {
                    write!(f, "{}", x.numer())
                } else if x.denom().is_negative() {
                    // keep the sign on the numerator
                    write!(f, "{}/{}", -x.numer(), -x.denom())
                } else {
                    write!(f, "{x}")
                }
            }
        }
    }
}

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum LinalgError {
    #[error("mixed coefficient fields: {0} vs {1}")]
    FieldMismatch(Field, Field),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("inconsistent linear system")]
    Inconsistent,
    #[error("matrix is singular")]
    Singular,
    #[error("cannot parse scalar {0:?}")]
    BadScalar(String),
}

/// Dense matrix over a fixed field, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zero(field: Field, rows: usize, cols: usize) -> Self {
        Matrix { field, rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Matrix::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_i64(field: Field, rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = Matrix::zero(field, r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, v) in row.iter().enumerate() {
                m.set(i, j, field.from_i64(*v));
            }
        }
        m
    }

    /// Column vector from integer entries.
    pub fn col_from_i64(field: Field, entries: &[i64]) -> Self {
        let mut m = Matrix::zero(field, entries.len(), 1);
        for (i, v) in entries.iter().enumerate() {
            m.set(i, 0, field.from_i64(*v));
        }
        m
    }

    pub fn field(&self) -> Field {
        self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        assert!(v.matches(&self.field), "scalar/field mismatch");
        self.data[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    fn check_field(&self, other: &Matrix) -> Result<(), LinalgError> {
        if self.field != other.field {
            return Err(LinalgError::FieldMismatch(self.field, other.field));
        }
        Ok(())
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        self.check_field(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "add {}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a = self.field.add(a, b);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        self.check_field(other)?;
        self.add(&other.scale(&self.field.from_i64(-1)))
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a = self.field.mul(a, s);
        }
        out
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        self.check_field(other)?;
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch(format!(
                "mul {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = self.field;
        let mut out = Matrix::zero(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.get(i, j).clone();
                    out.set(i, j, f.add(&cur, &f.mul(a, b)));
                }
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zero(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn column(&self, j: usize) -> Matrix {
        let mut out = Matrix::zero(self.field, self.rows, 1);
        for i in 0..self.rows {
            out.set(i, 0, self.get(i, j).clone());
        }
        out
    }

    /// Horizontal concatenation of column blocks.
    pub fn hcat(field: Field, blocks: &[&Matrix]) -> Matrix {
        let rows = blocks.first().map_or(0, |b| b.rows);
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Matrix::zero(field, rows, cols);
        let mut off = 0;
        for b in blocks {
            assert_eq!(b.rows, rows, "hcat row mismatch");
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out.set(i, off + j, b.get(i, j).clone());
                }
            }
            off += b.cols;
        }
        out
    }

    /// Reduced row echelon form with recorded pivots and row transform:
    /// `transform * self == echelon`.
    pub fn rank_factor(&self) -> RankFactor {
        let f = self.field;
        let mut e = self.clone();
        let mut t = Matrix::identity(f, self.rows);
        let mut pivots = Vec::new();
        let mut next_row = 0;
        for col in 0..self.cols {
            // lowest-index row at or below next_row with a nonzero entry
            let Some(pr) = (next_row..self.rows).find(|&r| !e.get(r, col).is_zero()) else {
                continue;
            };
            if pr != next_row {
                e.swap_rows(pr, next_row);
                t.swap_rows(pr, next_row);
            }
            let inv = f.inv(e.get(next_row, col));
            e.scale_row(next_row, &inv);
            t.scale_row(next_row, &inv);
            for r in 0..self.rows {
                if r != next_row && !e.get(r, col).is_zero() {
                    let factor = f.neg(e.get(r, col));
                    e.add_scaled_row(next_row, r, &factor);
                    t.add_scaled_row(next_row, r, &factor);
                }
            }
            pivots.push((next_row, col));
            next_row += 1;
            if next_row == self.rows {
                break;
            }
        }
        RankFactor { echelon: e, transform: t, pivots }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn scale_row(&mut self, r: usize, s: &Scalar) {
        for j in 0..self.cols {
            let v = self.field.mul(self.get(r, j), s);
            self.set(r, j, v);
        }
    }

    /// row[to] += s * row[from]
    fn add_scaled_row(&mut self, from: usize, to: usize, s: &Scalar) {
        for j in 0..self.cols {
            let v = self
                .field
                .add(self.get(to, j), &self.field.mul(self.get(from, j), s));
            self.set(to, j, v);
        }
    }

    pub fn rank(&self) -> usize {
        self.rank_factor().pivots.len()
    }

    /// Deterministic kernel basis as columns of a `cols x nullity` matrix.
    /// Free variables are taken in ascending column order.
    pub fn kernel_basis(&self) -> Matrix {
        let f = self.field;
        let rf = self.rank_factor();
        let pivot_cols: Vec<usize> = rf.pivots.iter().map(|&(_, c)| c).collect();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivot_cols.contains(c)).collect();
        let mut out = Matrix::zero(f, self.cols, free.len());
        for (k, &fc) in free.iter().enumerate() {
            out.set(fc, k, f.one());
            for &(pr, pc) in &rf.pivots {
                out.set(pc, k, f.neg(rf.echelon.get(pr, fc)));
            }
        }
        out
    }

    /// Canonical (RREF) basis of the column space, as columns.
    pub fn column_space(&self) -> Matrix {
        let rf = self.transpose().rank_factor();
        let rank = rf.pivots.len();
        let mut out = Matrix::zero(self.field, self.rows, rank);
        for (k, &(pr, _)) in rf.pivots.iter().enumerate() {
            for i in 0..self.rows {
                out.set(i, k, rf.echelon.get(pr, i).clone());
            }
        }
        out
    }

    /// Solve `self * x = rhs` for all columns of `rhs` simultaneously.
    pub fn solve(&self, rhs: &Matrix) -> Result<Matrix, LinalgError> {
        self.check_field(rhs)?;
        if self.rows != rhs.rows {
            return Err(LinalgError::DimensionMismatch(format!(
                "solve {}x{} with rhs {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let aug = Matrix::hcat(self.field, &[self, rhs]);
        let rf = aug.rank_factor();
        let mut x = Matrix::zero(self.field, self.cols, rhs.cols);
        for &(pr, pc) in &rf.pivots {
            if pc >= self.cols {
                return Err(LinalgError::Inconsistent);
            }
            for j in 0..rhs.cols {
                x.set(pc, j, rf.echelon.get(pr, self.cols + j).clone());
            }
        }
        // pivots give one solution only when non-pivot columns of the
        // echelon rhs rows vanish; verify by re-multiplication.
        let check = self.mul(&x)?;
        if &check != rhs {
            return Err(LinalgError::Inconsistent);
        }
        Ok(x)
    }

    pub fn inverse(&self) -> Result<Matrix, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::Singular);
        }
        let rf = self.rank_factor();
        if rf.pivots.len() != self.rows {
            return Err(LinalgError::Singular);
        }
        Ok(rf.transform)
    }

    pub fn entries(&self) -> impl Iterator<Item = &Scalar> {
        self.data.iter()
    }
}

/// Result of Gaussian elimination: `transform * original == echelon`.
#[derive(Debug, Clone)]
pub struct RankFactor {
    pub echelon: Matrix,
    pub transform: Matrix,
    pub pivots: Vec<(usize, usize)>,
}

impl RankFactor {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// A subquotient Z/B of an ambient coordinate space, with deterministic
/// representatives and a coordinate map. Used for homology, cokernels and
/// colimits.
#[derive(Debug, Clone)]
pub struct Subquotient {
    field: Field,
    ambient: usize,
    /// Column-echelon basis of the subspace B being quotiented out.
    sub: Reducer,
    /// Column-echelon representatives of the quotient basis.
    quot: Reducer,
}

impl Subquotient {
    /// `span`: columns spanning Z; `sub`: columns spanning B ⊆ Z.
    pub fn new(field: Field, ambient: usize, span: &Matrix, sub: &Matrix) -> Subquotient {
        let mut b = Reducer::new(field, ambient);
        for j in 0..sub.cols() {
            b.insert(sub.column(j));
        }
        let mut q = Reducer::new(field, ambient);
        for j in 0..span.cols() {
            let (_, rem) = b.reduce(&span.column(j));
            q.insert(rem);
        }
        Subquotient { field, ambient, sub: b, quot: q }
    }

    /// Quotient of the full ambient space by the columns of `sub`.
    pub fn cokernel(field: Field, ambient: usize, sub: &Matrix) -> Subquotient {
        Subquotient::new(field, ambient, &Matrix::identity(field, ambient), sub)
    }

    pub fn dim(&self) -> usize {
        self.quot.len()
    }

    /// Coordinates of an ambient vector in the quotient basis.
    /// Errors if the vector does not lie in Z + B.
    pub fn project(&self, v: &Matrix) -> Result<Matrix, LinalgError> {
        let (_, rem) = self.sub.reduce(v);
        let (coeffs, rem2) = self.quot.reduce(&rem);
        if !rem2.is_zero() {
            return Err(LinalgError::Inconsistent);
        }
        let mut out = Matrix::zero(self.field, self.quot.len(), 1);
        for (k, c) in coeffs {
            out.set(k, 0, c);
        }
        Ok(out)
    }

    /// Ambient representative of the k-th quotient basis vector.
    pub fn representative(&self, k: usize) -> Matrix {
        self.quot.vectors[k].clone()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }
}

/// Incremental column-echelon structure: ordered pivot rows with
/// pivot-normalized vectors.
#[derive(Debug, Clone)]
struct Reducer {
    field: Field,
    ambient: usize,
    pivots: Vec<usize>,
    vectors: Vec<Matrix>,
}

impl Reducer {
    fn new(field: Field, ambient: usize) -> Reducer {
        Reducer { field, ambient, pivots: Vec::new(), vectors: Vec::new() }
    }

    fn len(&self) -> usize {
        self.vectors.len()
    }

    /// Reduce `v` against the stored vectors; returns the coefficients used
    /// (index, coefficient) and the remainder.
    fn reduce(&self, v: &Matrix) -> (Vec<(usize, Scalar)>, Matrix) {
        let f = self.field;
        let mut rem = v.clone();
        let mut coeffs = Vec::new();
        for (k, (&p, w)) in self.pivots.iter().zip(&self.vectors).enumerate() {
            let c = rem.get(p, 0).clone();
            if c.is_zero() {
                continue;
            }
            for i in 0..self.ambient {
                let val = f.sub(rem.get(i, 0), &f.mul(&c, w.get(i, 0)));
                rem.set(i, 0, val);
            }
            coeffs.push((k, c));
        }
        (coeffs, rem)
    }

    /// Insert a vector if independent; returns its index if inserted.
    fn insert(&mut self, v: Matrix) -> Option<usize> {
        let (_, rem) = self.reduce(&v);
        let p = (0..self.ambient).find(|&i| !rem.get(i, 0).is_zero())?;
        let norm = rem.scale(&self.field.inv(rem.get(p, 0)));
        self.pivots.push(p);
        self.vectors.push(norm);
        Some(self.vectors.len() - 1)
    }
}
