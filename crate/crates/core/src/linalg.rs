//! Exact scalars and dense matrices.
//!
//! Everything in the crate is computed over either the rationals (arbitrary
//! precision, always in lowest terms) or a prime field `F_p`. Matrices carry
//! their field so that zeros and identities can be produced without extra
//! context. Mixing fields inside one computation is a programming error and
//! panics.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default prime for the `F_p` backend.
pub const DEFAULT_PRIME: u64 = 32003;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not square ({0}x{1})")]
    NotSquare(usize, usize),
    #[error("duplicate interpolation abscissa {0}")]
    DuplicateAbscissa(String),
    #[error("{0} is not a prime")]
    NotPrime(u64),
}

/// The ground field of a computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    Rational,
    Prime(u64),
}

impl Field {
    pub fn prime(p: u64) -> Result<Field, LinalgError> {
        if is_prime(p) {
            Ok(Field::Prime(p))
        } else {
            Err(LinalgError::NotPrime(p))
        }
    }

    pub fn zero(self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(self, v: i64) -> Scalar {
        match self {
            Field::Rational => Scalar::Rat(BigRational::from_integer(BigInt::from(v))),
            Field::Prime(p) => Scalar::Mod { value: v.rem_euclid(p as i64) as u64, prime: p },
        }
    }

    pub fn from_bigint(self, v: &BigInt) -> Scalar {
        match self {
            Field::Rational => Scalar::Rat(BigRational::from_integer(v.clone())),
            Field::Prime(p) => {
                let r = v.mod_floor(&BigInt::from(p));
                Scalar::Mod { value: r.to_u64().unwrap(), prime: p }
            }
        }
    }

    /// Image of a rational number; `None` when the denominator vanishes mod p.
    pub fn from_rational(self, q: &BigRational) -> Option<Scalar> {
        match self {
            Field::Rational => Some(Scalar::Rat(q.clone())),
            Field::Prime(_) => {
                let num = self.from_bigint(q.numer());
                let den = self.from_bigint(q.denom());
                den.inv().map(|d| &num * &d)
            }
        }
    }

    pub fn characteristic(self) -> u64 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => p,
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "F_{p}"),
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// The first `count` primes that are not in `excluded`.
pub fn primes_avoiding(count: usize, excluded: &[u64]) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut n = 2u64;
    while out.len() < count {
        if is_prime(n) && !excluded.contains(&n) {
            out.push(n);
        }
        n += 1;
    }
    out
}

/// An exact field element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rat(BigRational),
    Mod { value: u64, prime: u64 },
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Rat(_) => Field::Rational,
            Scalar::Mod { prime, .. } => Field::Prime(*prime),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(q) => q.is_zero(),
            Scalar::Mod { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rat(q) => q.is_one(),
            Scalar::Mod { value, .. } => *value == 1,
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Rat(q) => Scalar::Rat(q.recip()),
            Scalar::Mod { value, prime } => {
                Scalar::Mod { value: pow_mod(*value, prime - 2, *prime), prime: *prime }
            }
        })
    }

    pub fn checked_div(&self, other: &Scalar) -> Option<Scalar> {
        other.inv().map(|i| self * &i)
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rat(q) => Some(q),
            Scalar::Mod { .. } => None,
        }
    }

    /// Integer value when the scalar is a rational integer that fits in `i64`.
    pub fn to_i64(&self) -> Option<i64> {
        match self {
            Scalar::Rat(q) if q.is_integer() => q.numer().to_i64(),
            _ => None,
        }
    }

    /// Reduction of a rational into `F_p`.
    pub fn reduce_mod(&self, p: u64) -> Option<Scalar> {
        match self {
            Scalar::Rat(q) => Field::Prime(p).from_rational(q),
            Scalar::Mod { prime, .. } if *prime == p => Some(self.clone()),
            Scalar::Mod { .. } => None,
        }
    }

    /// Parses `"p/q"`, `"n"` (rational) for the given field.
    pub fn parse(field: Field, s: &str) -> Option<Scalar> {
        let s = s.trim();
        let q = if let Some((n, d)) = s.split_once('/') {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            BigRational::new(n, d)
        } else {
            BigRational::from_integer(s.parse().ok()?)
        };
        field.from_rational(&q)
    }
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = ((r as u128 * b as u128) % m as u128) as u64;
        }
        b = ((b as u128 * b as u128) % m as u128) as u64;
        e >>= 1;
    }
    r
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(q) if q.is_integer() => write!(f, "{}", q.numer()),
            Scalar::Rat(q) => write!(f, "{}/{}", q.numer(), q.denom()),
            Scalar::Mod { value, .. } => write!(f, "{value}"),
        }
    }
}

fn mixed() -> ! {
    panic!("arithmetic between scalars of different fields")
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            (Scalar::Mod { value: a, prime: p }, Scalar::Mod { value: b, prime: q }) if p == q => {
                Scalar::Mod { value: ((*a as u128 + *b as u128) % *p as u128) as u64, prime: *p }
            }
            _ => mixed(),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a - b),
            (Scalar::Mod { value: a, prime: p }, Scalar::Mod { value: b, prime: q }) if p == q => {
                Scalar::Mod { value: (*a + (*p - *b)) % *p, prime: *p }
            }
            _ => mixed(),
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            (Scalar::Mod { value: a, prime: p }, Scalar::Mod { value: b, prime: q }) if p == q => {
                Scalar::Mod { value: ((*a as u128 * *b as u128) % *p as u128) as u64, prime: *p }
            }
            _ => mixed(),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rat(a) => Scalar::Rat(-a),
            Scalar::Mod { value, prime } => Scalar::Mod { value: (prime - value) % prime, prime: *prime },
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -(&self)
    }
}

/// Dense row-major matrix over a [`Field`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Matrix {
        Matrix { field, rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = field.one();
        }
        m
    }

    pub fn from_fn(field: Field, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Matrix {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { field, rows, cols, data }
    }

    /// Builds a matrix from integer rows. All rows must have equal length.
    pub fn from_i64(field: Field, rows: &[Vec<i64>]) -> Matrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged integer rows");
        Matrix::from_fn(field, r, c, |i, j| field.from_i64(rows[i][j]))
    }

    pub fn from_scalars(field: Field, rows: usize, cols: usize, data: Vec<Scalar>) -> Result<Matrix, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix { field, rows, cols, data })
    }

    pub fn column(field: Field, entries: Vec<Scalar>) -> Matrix {
        let n = entries.len();
        Matrix { field, rows: n, cols: 1, data: entries }
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

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col_vec(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn into_entries(self) -> Vec<Scalar> {
        self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..self.cols).all(|j| {
                let v = self.get(i, j);
                if i == j {
                    v.is_one()
                } else {
                    v.is_zero()
                }
            }))
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.field, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn checked_mul(&self, rhs: &Matrix) -> Result<Matrix, LinalgError> {
        if self.cols != rhs.rows {
            return Err(LinalgError::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Matrix::zeros(self.field, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * rhs.cols + j;
                    out.data[idx] = &out.data[idx] + &(a * b);
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        Matrix { field: self.field, rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * s).collect() }
    }

    pub fn trace(&self) -> Scalar {
        let n = self.rows.min(self.cols);
        (0..n).fold(self.field.zero(), |acc, i| &acc + self.get(i, i))
    }

    pub fn pow(&self, mut e: u32) -> Matrix {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = Matrix::identity(self.field, self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn hstack(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.rows, rhs.rows, "hstack row mismatch");
        Matrix::from_fn(self.field, self.rows, self.cols + rhs.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                rhs.get(i, j - self.cols).clone()
            }
        })
    }

    pub fn vstack(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.cols, "vstack column mismatch");
        let mut data = self.data.clone();
        data.extend_from_slice(&rhs.data);
        Matrix { field: self.field, rows: self.rows + rhs.rows, cols: self.cols, data }
    }

    pub fn select_rows(&self, rows: &[usize]) -> Matrix {
        Matrix::from_fn(self.field, rows.len(), self.cols, |i, j| self.get(rows[i], j).clone())
    }

    pub fn select_cols(&self, cols: &[usize]) -> Matrix {
        Matrix::from_fn(self.field, self.rows, cols.len(), |i, j| self.get(i, cols[j]).clone())
    }

    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix {
        Matrix::from_fn(self.field, rows, cols, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Matrix) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(r0 + i, c0 + j, block.get(i, j).clone());
            }
        }
    }

    pub fn block_diag(field: Field, blocks: &[Matrix]) -> Matrix {
        let r: usize = blocks.iter().map(|b| b.rows).sum();
        let c: usize = blocks.iter().map(|b| b.cols).sum();
        let mut m = Matrix::zeros(field, r, c);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            m.set_block(r0, c0, b);
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }

    /// Integer entries, if every entry is a rational integer fitting in `i64`.
    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(Scalar::to_i64).collect::<Option<Vec<_>>>())
            .collect()
    }

    /// Entry-wise reduction of a rational matrix into `F_p`.
    pub fn reduce_mod(&self, p: u64) -> Option<Matrix> {
        let data = self.data.iter().map(|x| x.reduce_mod(p)).collect::<Option<Vec<_>>>()?;
        Some(Matrix { field: Field::Prime(p), rows: self.rows, cols: self.cols, data })
    }

    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut prow = 0;
        for col in 0..m.cols {
            if prow == m.rows {
                break;
            }
            let Some(found) = (prow..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            m.swap_rows(found, prow);
            let inv = m.get(prow, col).inv().unwrap();
            for j in col..m.cols {
                let idx = prow * m.cols + j;
                m.data[idx] = &m.data[idx] * &inv;
            }
            for r in 0..m.rows {
                if r == prow {
                    continue;
                }
                let factor = m.get(r, col).clone();
                if factor.is_zero() {
                    continue;
                }
                for j in col..m.cols {
                    let p = m.get(prow, j);
                    if p.is_zero() {
                        continue;
                    }
                    let idx = r * m.cols + j;
                    m.data[idx] = &m.data[idx] - &(&factor * p);
                }
            }
            pivots.push(col);
            prow += 1;
        }
        Rref { reduced: m, pivots }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Columns form a basis of the null space.
    pub fn kernel(&self) -> Matrix {
        self.rref().kernel()
    }

    pub fn inverse(&self) -> Result<Matrix, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare(self.rows, self.cols));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(self.clone());
        }
        let aug = self.hstack(&Matrix::identity(self.field, n));
        let r = aug.rref();
        if r.pivots.len() < n || r.pivots[n - 1] >= n {
            return Err(LinalgError::Singular);
        }
        Ok(r.reduced.submatrix(0, n, n, n))
    }

    pub fn determinant(&self) -> Result<Scalar, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare(self.rows, self.cols));
        }
        let mut m = self.clone();
        let n = m.rows;
        let mut det = self.field.one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !m.get(r, col).is_zero()) else {
                return Ok(self.field.zero());
            };
            if p != col {
                m.swap_rows(p, col);
                det = -det;
            }
            let piv = m.get(col, col).clone();
            det = &det * &piv;
            let inv = piv.inv().unwrap();
            for r in col + 1..n {
                let factor = m.get(r, col) * &inv;
                if factor.is_zero() {
                    continue;
                }
                for j in col..n {
                    let idx = r * n + j;
                    m.data[idx] = &m.data[idx] - &(&factor * m.get(col, j));
                }
            }
        }
        Ok(det)
    }

    /// Characteristic polynomial `det(xI - A)`, coefficients in ascending degree.
    pub fn charpoly(&self) -> Vec<Scalar> {
        assert!(self.is_square(), "charpoly of a non-square matrix");
        let n = self.rows;
        let f = self.field;
        let mut h = self.clone();
        // similarity reduction to upper Hessenberg form
        for m in 1..n.saturating_sub(1) {
            let Some(piv) = (m..n).find(|&i| !h.get(i, m - 1).is_zero()) else {
                continue;
            };
            if piv != m {
                h.swap_rows(piv, m);
                for i in 0..n {
                    h.data.swap(i * n + piv, i * n + m);
                }
            }
            let inv = h.get(m, m - 1).inv().unwrap();
            for i in m + 1..n {
                let t = h.get(i, m - 1) * &inv;
                if t.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let idx = i * n + j;
                    h.data[idx] = &h.data[idx] - &(&t * h.get(m, j));
                }
                for j in 0..n {
                    let idx = j * n + m;
                    h.data[idx] = &h.data[idx] + &(&t * h.get(j, i));
                }
            }
        }
        let mut polys: Vec<Vec<Scalar>> = vec![vec![f.one()]];
        for k in 0..n {
            // (x - h_kk) p_{k}
            let prev = &polys[k];
            let mut next = vec![f.zero(); k + 2];
            for (d, c) in prev.iter().enumerate() {
                next[d + 1] = &next[d + 1] + c;
                next[d] = &next[d] - &(c * h.get(k, k));
            }
            let mut prod = f.one();
            for i in (0..k).rev() {
                prod = &prod * h.get(i + 1, i);
                let coef = &prod * h.get(i, k);
                if coef.is_zero() {
                    continue;
                }
                for (d, c) in polys[i].iter().enumerate() {
                    next[d] = &next[d] - &(&coef * c);
                }
            }
            polys.push(next);
        }
        polys.pop().unwrap()
    }

    /// Distinct rational eigenvalues. Over `F_p` every field element is tried.
    pub fn rational_eigenvalues(&self) -> Vec<Scalar> {
        let cp = self.charpoly();
        match self.field {
            Field::Rational => {
                let coeffs: Vec<BigRational> = cp.iter().map(|c| c.as_rational().unwrap().clone()).collect();
                rational_roots(&coeffs).into_iter().map(Scalar::Rat).collect()
            }
            Field::Prime(p) => {
                if p > 1 << 16 {
                    return Vec::new();
                }
                (0..p as i64)
                    .map(|v| self.field.from_i64(v))
                    .filter(|x| poly_eval(&cp, x).is_zero())
                    .collect()
            }
        }
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        self.checked_mul(rhs).expect("matrix product shape mismatch")
    }
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        assert!(self.rows == rhs.rows && self.cols == rhs.cols, "matrix sum shape mismatch");
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        assert!(self.rows == rhs.rows && self.cols == rhs.cols, "matrix difference shape mismatch");
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        Matrix { field: self.field, rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| -a).collect() }
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Rref {
    pub reduced: Matrix,
    pub pivots: Vec<usize>,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn free_columns(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.reduced.cols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.reduced.cols).filter(|&c| !is_pivot[c]).collect()
    }

    /// Kernel basis as columns; the basis vector for free column `f` has a 1
    /// at `f` and zeros at every other free column.
    pub fn kernel(&self) -> Matrix {
        let free = self.free_columns();
        let n = self.reduced.cols;
        let field = self.reduced.field;
        let mut k = Matrix::zeros(field, n, free.len());
        for (j, &fc) in free.iter().enumerate() {
            k.set(fc, j, field.one());
            for (r, &pc) in self.pivots.iter().enumerate() {
                k.set(pc, j, -self.reduced.get(r, fc));
            }
        }
        k
    }
}

/// Particular solution (if any) and null space basis of `A x = b`.
#[derive(Clone, Debug)]
pub struct Solution {
    pub particular: Option<Matrix>,
    pub kernel: Vec<Matrix>,
}

pub fn solve_linear(a: &Matrix, b: &Matrix) -> Result<Solution, LinalgError> {
    if a.rows() != b.rows() {
        return Err(LinalgError::DimensionMismatch(format!(
            "system has {} rows but right-hand side has {}",
            a.rows(),
            b.rows()
        )));
    }
    let n = a.cols();
    let aug = a.hstack(b);
    let r = aug.rref();
    let consistent = r.pivots.iter().all(|&p| p < n);
    let particular = consistent.then(|| {
        let mut x = Matrix::zeros(a.field(), n, b.cols());
        for (row, &pc) in r.pivots.iter().enumerate() {
            for j in 0..b.cols() {
                x.set(pc, j, r.reduced.get(row, n + j).clone());
            }
        }
        x
    });
    let (_, kernel) = rank_and_kernel(a);
    Ok(Solution { particular, kernel })
}

pub fn rank_and_kernel(a: &Matrix) -> (usize, Vec<Matrix>) {
    let r = a.rref();
    let k = r.kernel();
    let basis = (0..k.cols()).map(|j| Matrix::column(a.field(), k.col_vec(j))).collect();
    (r.rank(), basis)
}

pub fn invert(a: &Matrix) -> Result<Matrix, LinalgError> {
    a.inverse()
}

/// Coefficients (ascending) of the unique polynomial of degree `< points.len()`
/// through the given points.
pub fn interpolate_polynomial(points: &[(Scalar, Scalar)]) -> Result<Vec<Scalar>, LinalgError> {
    for (i, (x, _)) in points.iter().enumerate() {
        if points[..i].iter().any(|(y, _)| y == x) {
            return Err(LinalgError::DuplicateAbscissa(x.to_string()));
        }
    }
    let Some((x0, _)) = points.first() else {
        return Ok(Vec::new());
    };
    let field = x0.field();
    let n = points.len();
    // Newton divided differences
    let mut coef: Vec<Scalar> = points.iter().map(|(_, y)| y.clone()).collect();
    for level in 1..n {
        for i in (level..n).rev() {
            let num = &coef[i] - &coef[i - 1];
            let den = &points[i].0 - &points[i - level].0;
            coef[i] = num.checked_div(&den).expect("distinct abscissae");
        }
    }
    let mut out = vec![field.zero(); n];
    for i in (0..n).rev() {
        // out = out * (x - x_i) + coef[i]
        let mut next = vec![field.zero(); n];
        for d in 0..n {
            if out[d].is_zero() {
                continue;
            }
            if d + 1 < n {
                next[d + 1] = &next[d + 1] + &out[d];
            }
            next[d] = &next[d] - &(&out[d] * &points[i].0);
        }
        next[0] = &next[0] + &coef[i];
        out = next;
    }
    Ok(out)
}

pub fn poly_eval(coeffs: &[Scalar], x: &Scalar) -> Scalar {
    coeffs.iter().rev().fold(x.field().zero(), |acc, c| &(&acc * x) + c)
}

/// Distinct rational roots of a polynomial with rational coefficients
/// (ascending). Candidates follow the rational root theorem; constant terms
/// too large to factor by trial division are skipped.
pub fn rational_roots(coeffs: &[BigRational]) -> Vec<BigRational> {
    let mut c: Vec<BigRational> = coeffs.to_vec();
    while c.last().is_some_and(|x| x.is_zero()) {
        c.pop();
    }
    let mut roots = Vec::new();
    if c.len() <= 1 {
        return roots;
    }
    let lead_zeros = c.iter().take_while(|x| x.is_zero()).count();
    if lead_zeros > 0 {
        roots.push(BigRational::zero());
        c.drain(..lead_zeros);
    }
    if c.len() <= 1 {
        return roots;
    }
    let lcm = c.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = c.iter().map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer()).collect();
    let (Some(a0), Some(an)) = (ints[0].abs().to_u64(), ints.last().unwrap().abs().to_u64()) else {
        return roots;
    };
    if a0 > 1 << 40 || an > 1 << 40 {
        return roots;
    }
    let eval = |r: &BigRational| {
        ints.iter().rev().fold(BigRational::zero(), |acc, k| acc * r + BigRational::from_integer(k.clone()))
    };
    for p in divisors(a0) {
        for q in divisors(an) {
            for sign in [1i64, -1] {
                let cand = BigRational::new(BigInt::from(sign) * BigInt::from(p), BigInt::from(q));
                if !roots.contains(&cand) && eval(&cand).is_zero() {
                    roots.push(cand);
                }
            }
        }
    }
    roots
}

fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// A subspace given by a full-column-rank basis, with an exact coordinate map.
#[derive(Clone, Debug)]
pub struct SubspaceBasis {
    basis: Matrix,
    rows: Vec<usize>,
    inv: Matrix,
}

impl SubspaceBasis {
    /// `basis` must have linearly independent columns.
    pub fn new(basis: Matrix) -> SubspaceBasis {
        let k = basis.cols();
        let r = basis.transpose().rref();
        assert_eq!(r.rank(), k, "subspace basis columns are dependent");
        let rows = r.pivots.clone();
        let inv = basis.select_rows(&rows).inverse().expect("pivot rows form an invertible block");
        SubspaceBasis { basis, rows, inv }
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    /// Coordinates of the columns of `v`, assumed to lie in the subspace.
    pub fn coords(&self, v: &Matrix) -> Matrix {
        &self.inv * &v.select_rows(&self.rows)
    }

    pub fn contains(&self, v: &Matrix) -> bool {
        &self.basis * &self.coords(v) == *v
    }
}

/// Columns of `m` spanning its column space, chosen greedily left to right.
pub fn column_space(m: &Matrix) -> Matrix {
    let r = m.rref();
    m.select_cols(&r.pivots)
}

/// Extends the independent columns of `sub` (inside an `n`-space) by unit
/// vectors in ascending order; returns the indices of the unit vectors used.
pub fn complement_units(field: Field, n: usize, sub: &Matrix) -> Vec<usize> {
    let aug = sub.hstack(&Matrix::identity(field, n));
    let r = aug.rref();
    r.pivots.iter().filter(|&&p| p >= sub.cols()).map(|&p| p - sub.cols()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(rows: &[Vec<i64>]) -> Matrix {
        Matrix::from_i64(Field::Rational, rows)
    }

    #[test]
    fn solve_identity() {
        let a = Matrix::identity(Field::Rational, 2);
        let b = q(&[vec![3], vec![4]]);
        let s = solve_linear(&a, &b).unwrap();
        assert_eq!(s.particular.unwrap(), b);
        assert!(s.kernel.is_empty());
    }

    #[test]
    fn solve_zero_row() {
        let a = Matrix::zeros(Field::Rational, 1, 2);
        let b = q(&[vec![0]]);
        let s = solve_linear(&a, &b).unwrap();
        assert_eq!(s.particular.unwrap(), q(&[vec![0], vec![0]]));
        assert_eq!(s.kernel.len(), 2);
    }

    #[test]
    fn solve_inconsistent() {
        let a = q(&[vec![1, 1], vec![2, 2]]);
        let b = q(&[vec![1], vec![3]]);
        assert!(solve_linear(&a, &b).unwrap().particular.is_none());
    }

    #[test]
    fn solve_shape_error() {
        let a = Matrix::identity(Field::Rational, 2);
        let b = q(&[vec![1]]);
        assert!(matches!(solve_linear(&a, &b), Err(LinalgError::DimensionMismatch(_))));
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank_and_kernel(&Matrix::identity(Field::Rational, 3)).0, 3);
        let (r, k) = rank_and_kernel(&Matrix::zeros(Field::Rational, 2, 2));
        assert_eq!((r, k.len()), (0, 2));
        let a = q(&[vec![1, 2], vec![2, 4]]);
        let (r, k) = rank_and_kernel(&a);
        assert_eq!((r, k.len()), (1, 1));
        assert!((&a * &k[0]).is_zero());
    }

    #[test]
    fn invert_examples() {
        let i4 = Matrix::identity(Field::Rational, 4);
        assert_eq!(invert(&i4).unwrap(), i4);
        let c = q(&[vec![1, 1, 0], vec![0, 1, 1], vec![1, 1, 1]]);
        let r = invert(&c).unwrap().transpose();
        assert_eq!(r, q(&[vec![0, 1, -1], vec![-1, 1, 0], vec![1, -1, 1]]));
        assert_eq!(invert(&q(&[vec![1, 1], vec![1, 1]])), Err(LinalgError::Singular));
    }

    #[test]
    fn interpolation_examples() {
        let f = Field::Rational;
        let pts = |v: &[(i64, i64)]| v.iter().map(|&(x, y)| (f.from_i64(x), f.from_i64(y))).collect::<Vec<_>>();
        let c = interpolate_polynomial(&pts(&[(0, 1), (1, 1)])).unwrap();
        assert_eq!(c, vec![f.one(), f.zero()]);
        let c = interpolate_polynomial(&pts(&[(2, 3), (3, 4), (5, 6)])).unwrap();
        assert_eq!(c, vec![f.one(), f.one(), f.zero()]);
        assert!(matches!(
            interpolate_polynomial(&pts(&[(0, 0), (0, 1)])),
            Err(LinalgError::DuplicateAbscissa(_))
        ));
    }

    #[test]
    fn charpoly_and_roots() {
        let a = q(&[vec![2, 1, 0], vec![0, 3, 0], vec![1, 0, 2]]);
        // (x-2)^2 (x-3)
        let cp = a.charpoly();
        let expect: Vec<Scalar> = [-12, 16, -7, 1].iter().map(|&v| Field::Rational.from_i64(v)).collect();
        assert_eq!(cp, expect);
        let mut ev: Vec<i64> = a.rational_eigenvalues().iter().map(|x| x.to_i64().unwrap()).collect();
        ev.sort();
        assert_eq!(ev, vec![2, 3]);
        // x^2 - 2 has no rational roots
        let b = q(&[vec![0, 2], vec![1, 0]]);
        assert!(b.rational_eigenvalues().is_empty());
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = Field::prime(7).unwrap();
        let a = f.from_i64(3);
        assert_eq!((&a * &a.inv().unwrap()), f.one());
        assert_eq!(f.from_i64(-1), f.from_i64(6));
        assert!(Field::prime(12).is_err());
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        assert_eq!(f.from_rational(&half), Some(f.from_i64(4)));
        assert_eq!(Field::Prime(2).from_rational(&half), None);
    }

    #[test]
    fn determinant_sign() {
        let a = q(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(a.determinant().unwrap(), Field::Rational.from_i64(-1));
    }

    #[test]
    fn subspace_coordinates() {
        let b = q(&[vec![1, 0], vec![1, 1], vec![0, 1]]);
        let s = SubspaceBasis::new(b.clone());
        let v = &b * &q(&[vec![2], vec![-3]]);
        assert_eq!(s.coords(&v), q(&[vec![2], vec![-3]]));
        assert!(!s.contains(&q(&[vec![1], vec![0], vec![0]])));
    }
}
