//! Exact rational vectors and matrices.
//!
//! Everything here works over `BigRational`; there is no floating point
//! anywhere in the crate. Elimination always pivots on the first nonzero
//! entry of a column (scanning rows top to bottom), so the bases returned by
//! [`RatMatrix::nullspace`] and friends are deterministic.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Renders `p/q`, or just `p` when the denominator is one.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p`, `p/q`, or a terminating decimal such as `-.5` or `2.25`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
        let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let (neg, int_part) = match int_part.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, int_part.strip_prefix('+').unwrap_or(int_part)),
        };
        if !frac_part.chars().all(|c| c.is_ascii_digit())
            || !int_part.chars().all(|c| c.is_ascii_digit())
            || (int_part.is_empty() && frac_part.is_empty())
        {
            return Err(bad());
        }
        let digits = format!("{int_part}{frac_part}");
        let numer = BigInt::from_str(&digits).map_err(|_| bad())?;
        let denom = num_traits::pow(BigInt::from(10), frac_part.len());
        let value = Rational::new(numer, denom);
        return Ok(if neg { -value } else { value });
    }
    BigInt::from_str(s).map(Rational::from_integer).map_err(|_| bad())
}

/// Serde adapter storing a rational as a `"p/q"` string.
pub mod rational_string {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let raw = RationalInput::deserialize(d)?;
        raw.into_rational().map_err(serde::de::Error::custom)
    }

    /// Inputs may spell a rational as a string or as a bare JSON integer.
    #[derive(Deserialize)]
    #[serde(untagged)]
    pub(crate) enum RationalInput {
        Text(String),
        Int(i64),
    }

    impl RationalInput {
        pub(crate) fn into_rational(self) -> Result<Rational> {
            match self {
                RationalInput::Text(s) => parse_rational(&s),
                RationalInput::Int(i) => Ok(rat(i)),
            }
        }
    }
}

/// Serde adapter for a list of rationals.
pub mod rational_vec_string {
    use super::rational_string::RationalInput;
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(format_rational))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rational>, D::Error> {
        let raw = Vec::<RationalInput>::deserialize(d)?;
        raw.into_iter().map(|r| r.into_rational().map_err(serde::de::Error::custom)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct RatVector(Vec<Rational>);

impl RatVector {
    pub fn new(entries: Vec<Rational>) -> Self {
        RatVector(entries)
    }

    pub fn from_ints(entries: &[i64]) -> Self {
        RatVector(entries.iter().map(|&x| rat(x)).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        RatVector(vec![Rational::zero(); dim])
    }

    pub fn ones(dim: usize) -> Self {
        RatVector(vec![Rational::one(); dim])
    }

    /// Standard basis vector `e_i`.
    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[i] = Rational::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<Rational> {
        self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rational> {
        self.0.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn sum(&self) -> Rational {
        self.0.iter().fold(Rational::zero(), |acc, x| acc + x)
    }

    pub fn dot(&self, other: &RatVector) -> Rational {
        assert_eq!(self.dim(), other.dim(), "dot of vectors with different dimensions");
        self.0
            .iter()
            .zip(&other.0)
            .filter(|(a, b)| !a.is_zero() && !b.is_zero())
            .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn norm_squared(&self) -> Rational {
        self.dot(self)
    }

    pub fn scale(&self, s: &Rational) -> RatVector {
        RatVector(self.0.iter().map(|x| x * s).collect())
    }

    /// `self += s * other`
    pub fn add_scaled(&mut self, s: &Rational, other: &RatVector) {
        assert_eq!(self.dim(), other.dim());
        if s.is_zero() {
            return;
        }
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            if !b.is_zero() {
                *a += s * b;
            }
        }
    }

    /// Returns `Some(c)` with `self == c * other`, or `None` if the vectors are
    /// not proportional. A zero `other` is proportional only to zero.
    pub fn ratio_to(&self, other: &RatVector) -> Option<Rational> {
        assert_eq!(self.dim(), other.dim());
        let c = match other.0.iter().position(|x| !x.is_zero()) {
            Some(i) => &self.0[i] / &other.0[i],
            None => return self.is_zero().then(Rational::zero),
        };
        (other.scale(&c) == *self).then_some(c)
    }

    /// Permutes coordinates: the entry at `i` moves to `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> RatVector {
        assert_eq!(perm.len(), self.dim());
        let mut out = vec![Rational::zero(); self.dim()];
        for (i, x) in self.0.iter().enumerate() {
            out[perm[i]] = x.clone();
        }
        RatVector(out)
    }
}

impl fmt::Display for RatVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", format_rational(x))?;
        }
        write!(f, "]")
    }
}

impl FromStr for RatVector {
    type Err = Error;

    /// Comma-separated rationals, optionally wrapped in brackets.
    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('[').trim_end_matches(']');
        if inner.trim().is_empty() {
            return Ok(RatVector::default());
        }
        inner.split(',').map(parse_rational).collect::<Result<Vec<_>>>().map(RatVector)
    }
}

impl From<Vec<Rational>> for RatVector {
    fn from(v: Vec<Rational>) -> Self {
        RatVector(v)
    }
}

impl Index<usize> for RatVector {
    type Output = Rational;
    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

impl IndexMut<usize> for RatVector {
    fn index_mut(&mut self, i: usize) -> &mut Rational {
        &mut self.0[i]
    }
}

impl<'a> Add<&'a RatVector> for &'a RatVector {
    type Output = RatVector;
    fn add(self, rhs: &RatVector) -> RatVector {
        assert_eq!(self.dim(), rhs.dim());
        RatVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl<'a> Sub<&'a RatVector> for &'a RatVector {
    type Output = RatVector;
    fn sub(self, rhs: &RatVector) -> RatVector {
        assert_eq!(self.dim(), rhs.dim());
        RatVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &RatVector {
    type Output = RatVector;
    fn neg(self) -> RatVector {
        RatVector(self.0.iter().map(|x| -x).collect())
    }
}

impl Serialize for RatVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        rational_vec_string::serialize(&self.0, s)
    }
}

impl<'de> Deserialize<'de> for RatVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        rational_vec_string::deserialize(d).map(RatVector)
    }
}

/// Dense row-major rational matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub reduced: RatMatrix,
    pub pivots: Vec<usize>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        RatMatrix { rows, cols, data }
    }

    /// Panics if the rows have different lengths.
    pub fn from_rows(rows: &[RatVector]) -> Self {
        let cols = rows.first().map_or(0, RatVector::dim);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.dim(), cols, "ragged rows");
            data.extend(r.iter().cloned());
        }
        RatMatrix { rows: rows.len(), cols, data }
    }

    /// Builds the matrix whose columns are `cols`; `dim` is used when `cols` is empty.
    pub fn from_columns(dim: usize, cols: &[RatVector]) -> Self {
        for c in cols {
            assert_eq!(c.dim(), dim, "ragged columns");
        }
        Self::from_fn(dim, cols.len(), |r, c| cols[c][r].clone())
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        let v: Vec<RatVector> = rows.iter().map(|r| RatVector::from_ints(r)).collect();
        Self::from_rows(&v)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> RatVector {
        RatVector::new(self.data[r * self.cols..(r + 1) * self.cols].to_vec())
    }

    pub fn column(&self, c: usize) -> RatVector {
        RatVector::new((0..self.rows).map(|r| self[(r, c)].clone()).collect())
    }

    pub fn row_vectors(&self) -> Vec<RatVector> {
        (0..self.rows).map(|r| self.row(r)).collect()
    }

    pub fn transpose(&self) -> RatMatrix {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols && (0..self.rows).all(|r| (r + 1..self.cols).all(|c| self[(r, c)] == self[(c, r)]))
    }

    pub fn mul_vec(&self, v: &RatVector) -> Result<RatVector> {
        if v.dim() != self.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, got: v.dim() });
        }
        let out = (0..self.rows)
            .map(|r| {
                self.data[r * self.cols..(r + 1) * self.cols]
                    .iter()
                    .zip(v.iter())
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect();
        Ok(RatVector::new(out))
    }

    pub fn mul(&self, other: &RatMatrix) -> Result<RatMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, got: other.rows });
        }
        let mut out = RatMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = &other[(k, c)];
                    if !b.is_zero() {
                        out[(r, c)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Gaussian elimination. With `reduce` the result is in reduced row
    /// echelon form; otherwise only rows below each pivot are cleared.
    fn eliminate(&self, reduce: bool) -> Echelon {
        if let Some(fast) = self.eliminate_small(reduce) {
            return fast;
        }
        self.eliminate_rational(reduce)
    }

    /// Fraction-free elimination on `i128` rows kept primitive (divided by the
    /// gcd of their entries). Returns `None` as soon as anything would overflow.
    fn eliminate_small(&self, reduce: bool) -> Option<Echelon> {
        let mut rows: Vec<Vec<i128>> = Vec::with_capacity(self.rows);
        for r in 0..self.rows {
            let entries = &self.data[r * self.cols..(r + 1) * self.cols];
            let mut lcm: i128 = 1;
            for x in entries {
                let d = x.denom().to_i128()?;
                lcm = lcm.checked_mul(d / gcd_i128(lcm, d))?;
            }
            let mut row = Vec::with_capacity(self.cols);
            for x in entries {
                let n = x.numer().to_i128()?;
                let d = x.denom().to_i128()?;
                row.push(n.checked_mul(lcm / d)?);
            }
            make_primitive(&mut row)?;
            rows.push(row);
        }
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| rows[r][col] != 0) else {
                continue;
            };
            rows.swap(row, p);
            let (before, rest) = rows.split_at_mut(row);
            let (pivot_row, after) = rest.split_first_mut().expect("pivot row exists");
            let pv = pivot_row[col];
            let support: Vec<usize> = (col..self.cols).filter(|&c| pivot_row[c] != 0).collect();
            let others: Box<dyn Iterator<Item = &mut Vec<i128>>> =
                if reduce { Box::new(before.iter_mut().chain(after.iter_mut())) } else { Box::new(after.iter_mut()) };
            for target in others {
                let f = target[col];
                if f == 0 {
                    continue;
                }
                let g = gcd_i128(pv, f);
                let (a, b) = (pv / g, f / g);
                if a != 1 {
                    for x in target.iter_mut() {
                        *x = x.checked_mul(a)?;
                    }
                }
                for &c in &support {
                    target[c] = target[c].checked_sub(b.checked_mul(pivot_row[c])?)?;
                }
                make_primitive(target)?;
            }
            pivots.push(col);
            row += 1;
        }
        let reduced = Self::from_fn(self.rows, self.cols, |r, c| {
            let x = rows[r][c];
            match pivots.get(r) {
                Some(&p) if x != 0 => Rational::new(BigInt::from(x), BigInt::from(rows[r][p])),
                _ => Rational::from_integer(BigInt::from(x)),
            }
        });
        Some(Echelon { reduced, pivots })
    }

    fn eliminate_rational(&self, reduce: bool) -> Echelon {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m[(r, col)].is_zero()) else {
                continue;
            };
            m.swap_rows(row, p);
            let inv = m[(row, col)].recip();
            for c in col..m.cols {
                if !m[(row, c)].is_zero() {
                    m[(row, c)] *= &inv;
                }
            }
            let support: Vec<usize> = (col + 1..m.cols).filter(|&c| !m[(row, c)].is_zero()).collect();
            let targets: Box<dyn Iterator<Item = usize>> =
                if reduce { Box::new((0..row).chain(row + 1..m.rows)) } else { Box::new(row + 1..m.rows) };
            for r in targets {
                let factor = m[(r, col)].clone();
                if factor.is_zero() {
                    continue;
                }
                for &c in &support {
                    let delta = &factor * &m[(row, c)];
                    m[(r, c)] -= delta;
                }
                m[(r, col)] = Rational::zero();
            }
            pivots.push(col);
            row += 1;
        }
        Echelon { reduced: m, pivots }
    }

    pub fn rref(&self) -> Echelon {
        self.eliminate(true)
    }

    pub fn rank(&self) -> usize {
        self.eliminate(false).pivots.len()
    }

    /// Basis of the right nullspace, one vector per free column, each with a
    /// 1 in its free coordinate.
    pub fn nullspace(&self) -> Vec<RatVector> {
        let Echelon { reduced, pivots } = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = RatVector::zeros(self.cols);
                v[free] = Rational::one();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = -reduced[(i, free)].clone();
                }
                v
            })
            .collect()
    }

    /// Nonzero rows of the reduced echelon form: a canonical row-space basis.
    pub fn row_space_basis(&self) -> Vec<RatVector> {
        let Echelon { reduced, pivots } = self.rref();
        (0..pivots.len()).map(|r| reduced.row(r)).collect()
    }

    /// The pivot columns of `self`: a column-space basis drawn from the columns.
    pub fn column_space_basis(&self) -> Vec<RatVector> {
        self.eliminate(false).pivots.iter().map(|&c| self.column(c)).collect()
    }

    /// A particular solution of `self * x = b`, with every free variable zero.
    pub fn solve(&self, b: &RatVector) -> Result<RatVector> {
        if b.dim() != self.rows {
            return Err(Error::DimensionMismatch { expected: self.rows, got: b.dim() });
        }
        let augmented =
            Self::from_fn(
                self.rows,
                self.cols + 1,
                |r, c| {
                    if c < self.cols {
                        self[(r, c)].clone()
                    } else {
                        b[r].clone()
                    }
                },
            );
        let Echelon { reduced, pivots } = augmented.rref();
        if pivots.last() == Some(&self.cols) {
            return Err(Error::InconsistentSystem);
        }
        let mut x = RatVector::zeros(self.cols);
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = reduced[(i, self.cols)].clone();
        }
        Ok(x)
    }
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    // Rows never hold i128::MIN (see make_primitive), so this fits.
    a.max(1) as i128
}

/// Divides a row by the gcd of its entries. `None` if an entry is `i128::MIN`.
fn make_primitive(row: &mut [i128]) -> Option<()> {
    let mut g = 0i128;
    for &x in row.iter() {
        if x == i128::MIN {
            return None;
        }
        if x != 0 {
            g = if g == 0 { x.abs() } else { gcd_i128(g, x) };
        }
    }
    if g > 1 {
        for x in row.iter_mut() {
            *x /= g;
        }
    }
    Some(())
}

impl Index<(usize, usize)> for RatMatrix {
    type Output = Rational;
    fn index(&self, (r, c): (usize, usize)) -> &Rational {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Rational {
        &mut self.data[r * self.cols + c]
    }
}

impl Mul<&RatVector> for &RatMatrix {
    type Output = RatVector;
    fn mul(self, v: &RatVector) -> RatVector {
        self.mul_vec(v).expect("matrix-vector dimension mismatch")
    }
}

pub fn rank(m: &RatMatrix) -> usize {
    m.rank()
}

pub fn nullspace(m: &RatMatrix) -> Vec<RatVector> {
    m.nullspace()
}

pub fn solve(m: &RatMatrix, b: &RatVector) -> Result<RatVector> {
    m.solve(b)
}

/// Orthogonal projection of `v` onto the span of `basis`.
///
/// Solves the normal equations `G c = A^T v` with `G` the Gram matrix of
/// `basis`. The spanning set may be redundant: any solution `c` gives the
/// same projection `A c`.
pub fn project_onto_span(basis: &[RatVector], v: &RatVector) -> Result<RatVector> {
    for b in basis {
        if b.dim() != v.dim() {
            return Err(Error::DimensionMismatch { expected: v.dim(), got: b.dim() });
        }
    }
    if basis.is_empty() {
        return Ok(RatVector::zeros(v.dim()));
    }
    let gram = RatMatrix::from_fn(basis.len(), basis.len(), |i, j| basis[i].dot(&basis[j]));
    let rhs = RatVector::new(basis.iter().map(|b| b.dot(v)).collect());
    // Gram systems built this way are always consistent.
    let coeffs = gram.solve(&rhs)?;
    let mut out = RatVector::zeros(v.dim());
    for (c, b) in coeffs.iter().zip(basis) {
        out.add_scaled(c, b);
    }
    Ok(out)
}

/// Whether a list of vectors is linearly independent.
pub fn independent(vectors: &[RatVector]) -> bool {
    vectors.is_empty() || RatMatrix::from_rows(vectors).rank() == vectors.len()
}
