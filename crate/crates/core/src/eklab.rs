//! Totally nonsingular matrices over exact fields.
//!
//! A matrix is strongly linearly independent when every square submatrix on
//! increasing row and column indices is nonsingular. The builder fills
//! entries in row-major order, choosing at each position the least value that
//! avoids the unique singularizing value of every square frame ending there.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::{binomial, Integer};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::check::Check;
use crate::corpus;
use crate::gf::{is_prime, GaloisField};
use crate::redprod::{reduced_product, ProductFamily, RedprodError};
use crate::setfam::{decompose_filter, Filter};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EkError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime {p} is too large; primes must be below 2^31")]
    PrimeTooLarge { p: u64 },
    #[error("expected {expected} entries for a {rows}×{cols} matrix, found {found}")]
    EntryCount { rows: usize, cols: usize, expected: usize, found: usize },
    #[error("matrix must be square, found {rows}×{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("entry {index} is not a field element: {reason}")]
    BadEntry { index: usize, reason: String },
    #[error("the upper-left minor is singular")]
    SingularUpperLeft,
    #[error("F{p} is too small for size {m}: need p > {needed}")]
    FieldTooSmall { p: u64, m: usize, needed: u64 },
    #[error("1/(a + b) has a zero denominator at ({row}, {col})")]
    ZeroDenominator { row: usize, col: usize },
    #[error("parameters must be distinct")]
    RepeatedParameter,
    #[error("expected {expected} coefficients, found {found}")]
    CoefficientCount { expected: usize, found: usize },
    #[error("coefficient vector is zero")]
    ZeroCoefficients,
    #[error("{zeros} zero coordinates with only {nonzero} nonzero coefficients")]
    ZeroBoundViolated { zeros: usize, nonzero: usize },
    #[error("singular minor on rows {rows:?}, columns {cols:?}", rows = .0.rows, cols = .0.cols)]
    NotSli(MinorWitness),
    #[error("carrier size must be at least 2, found {0}")]
    CarrierTooSmall(usize),
    #[error("{0} is not a supported field order")]
    UnsupportedField(u64),
    #[error("cardinality overflows")]
    Overflow,
    #[error(transparent)]
    Redprod(#[from] RedprodError),
}

pub type Result<T> = std::result::Result<T, EkError>;

/// The rationals or a prime field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExactField {
    Rational,
    Prime(u64),
}

/// Order in which candidate entries are tried.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ValueOrder {
    /// `0, 1, 2, ..` in a prime field; `0, 1, −1, 2, −2, ..` over the rationals.
    #[default]
    Canonical,
    /// `0, 1, 2, ..` in every field.
    NonNegative,
}

impl ExactField {
    pub fn prime(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(EkError::NotPrime(p));
        }
        if p >= 1 << 31 {
            return Err(EkError::PrimeTooLarge { p });
        }
        Ok(ExactField::Prime(p))
    }

    fn modulus(p: u64) -> BigInt {
        BigInt::from(p)
    }

    /// Brings a rational into the field: reduces modulo `p` for prime fields.
    pub fn element(&self, x: &BigRational) -> Option<BigRational> {
        match *self {
            ExactField::Rational => Some(x.clone()),
            ExactField::Prime(p) => {
                let m = Self::modulus(p);
                let num = x.numer().mod_floor(&m);
                let den = x.denom().mod_floor(&m);
                if den.is_zero() {
                    return None;
                }
                let inv = den.modpow(&(&m - 2u32), &m);
                Some(BigRational::from_integer((num * inv).mod_floor(&m)))
            }
        }
    }

    fn reduce(&self, x: BigRational) -> BigRational {
        match *self {
            ExactField::Rational => x,
            ExactField::Prime(p) => BigRational::from_integer(x.to_integer().mod_floor(&Self::modulus(p))),
        }
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        self.reduce(a + b)
    }

    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        self.reduce(a - b)
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        self.reduce(a * b)
    }

    fn inv(&self, a: &BigRational) -> BigRational {
        match *self {
            ExactField::Rational => a.recip(),
            ExactField::Prime(p) => {
                let m = Self::modulus(p);
                BigRational::from_integer(a.to_integer().modpow(&(&m - 2u32), &m))
            }
        }
    }

    /// Field elements in the order the builder tries them.
    pub fn candidates(&self, order: ValueOrder) -> Box<dyn Iterator<Item = BigRational>> {
        match (*self, order) {
            (ExactField::Prime(p), _) => Box::new((0..p).map(|k| BigRational::from_integer(k.into()))),
            (ExactField::Rational, ValueOrder::NonNegative) => {
                Box::new((0u64..).map(|k| BigRational::from_integer(k.into())))
            }
            (ExactField::Rational, ValueOrder::Canonical) => Box::new((0i64..).map(|k| {
                // 0, 1, −1, 2, −2, ..
                let v = if k % 2 == 1 { (k + 1) / 2 } else { -(k / 2) };
                BigRational::from_integer(v.into())
            })),
        }
    }
}

impl fmt::Display for ExactField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactField::Rational => write!(f, "Q"),
            ExactField::Prime(p) => write!(f, "F{p}"),
        }
    }
}

/// A matrix of exact field elements, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExactMatrix {
    field: ExactField,
    rows: usize,
    cols: usize,
    entries: Vec<BigRational>,
}

impl ExactMatrix {
    pub fn new(field: ExactField, rows: usize, cols: usize, entries: Vec<BigRational>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(EkError::EntryCount { rows, cols, expected: rows * cols, found: entries.len() });
        }
        let entries = entries
            .iter()
            .enumerate()
            .map(|(index, x)| {
                field.element(x).ok_or(EkError::BadEntry { index, reason: format!("{x} has no value in {field}") })
            })
            .collect::<Result<_>>()?;
        Ok(ExactMatrix { field, rows, cols, entries })
    }

    pub fn from_ints(field: ExactField, rows: usize, cols: usize, entries: &[i64]) -> Result<Self> {
        Self::new(field, rows, cols, entries.iter().map(|&v| BigRational::from_integer(v.into())).collect())
    }

    pub fn field(&self) -> ExactField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[BigRational] {
        &self.entries
    }

    pub fn get(&self, r: usize, c: usize) -> &BigRational {
        &self.entries[r * self.cols + c]
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> ExactMatrix {
        let entries = rows.iter().flat_map(|&r| cols.iter().map(move |&c| self.get(r, c).clone())).collect();
        ExactMatrix { field: self.field, rows: rows.len(), cols: cols.len(), entries }
    }

    pub fn to_doc(&self) -> MatrixDoc {
        MatrixDoc {
            rows: self.rows,
            cols: self.cols,
            field: match self.field {
                ExactField::Rational => FieldDoc::Name("rational".into()),
                ExactField::Prime(p) => FieldDoc::Prime(p),
            },
            entries: self
                .entries
                .iter()
                .map(|x| match x.is_integer().then(|| x.to_integer().to_i64()).flatten() {
                    Some(v) => EntryDoc::Int(v),
                    None => EntryDoc::Text(x.to_string()),
                })
                .collect(),
        }
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FieldDoc {
    Prime(u64),
    Name(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EntryDoc {
    Int(i64),
    Text(String),
}

/// `{ "rows": m, "cols": m, "field": "rational" | p, "entries": [..] }`
/// with entries as integers or `"a/b"` strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixDoc {
    pub rows: usize,
    pub cols: usize,
    pub field: FieldDoc,
    pub entries: Vec<EntryDoc>,
}

impl MatrixDoc {
    pub fn to_matrix(&self) -> Result<ExactMatrix> {
        let field = match &self.field {
            FieldDoc::Prime(p) => ExactField::prime(*p)?,
            FieldDoc::Name(name) if name == "rational" => ExactField::Rational,
            FieldDoc::Name(name) => match name.parse::<u64>() {
                Ok(p) => ExactField::prime(p)?,
                Err(_) => {
                    return Err(EkError::BadEntry { index: 0, reason: format!("unknown field {name:?}") });
                }
            },
        };
        let entries = self
            .entries
            .iter()
            .enumerate()
            .map(|(index, e)| match e {
                EntryDoc::Int(v) => Ok(BigRational::from_integer((*v).into())),
                EntryDoc::Text(s) => BigRational::from_str(s.trim())
                    .map_err(|err| EkError::BadEntry { index, reason: format!("{s:?}: {err}") }),
            })
            .collect::<Result<_>>()?;
        ExactMatrix::new(field, self.rows, self.cols, entries)
    }
}

/// Solves `x · m = rhs` for a square `m` by Gauss-Jordan elimination.
fn solve_left(field: ExactField, m: &ExactMatrix, rhs: &[BigRational]) -> Option<Vec<BigRational>> {
    // x · m = rhs  ⇔  mᵀ xᵀ = rhsᵀ.
    let n = m.rows;
    let mut aug: Vec<Vec<BigRational>> = (0..n)
        .map(|j| {
            let mut row: Vec<BigRational> = (0..n).map(|i| m.get(i, j).clone()).collect();
            row.push(rhs[j].clone());
            row
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !aug[r][col].is_zero())?;
        aug.swap(col, pivot);
        let inv = field.inv(&aug[col][col]);
        for v in aug[col].iter_mut() {
            *v = field.mul(v, &inv);
        }
        for r in 0..n {
            if r != col && !aug[r][col].is_zero() {
                let factor = aug[r][col].clone();
                for k in col..=n {
                    let t = field.mul(&factor, &aug[col][k]);
                    aug[r][k] = field.sub(&aug[r][k], &t);
                }
            }
        }
    }
    Some(aug.into_iter().map(|mut row| row.pop().expect("augmented column")).collect())
}

/// The unique value of the bottom-right entry of a square matrix that makes
/// it singular, given that its upper-left minor is nonsingular. The current
/// bottom-right entry is ignored.
pub fn singularizing_value(m: &ExactMatrix) -> Result<BigRational> {
    if m.rows != m.cols {
        return Err(EkError::NotSquare { rows: m.rows, cols: m.cols });
    }
    let n = m.rows;
    if n <= 1 {
        return Ok(BigRational::zero());
    }
    let head: Vec<usize> = (0..n - 1).collect();
    let upper_left = m.submatrix(&head, &head);
    let last_prefix: Vec<BigRational> = (0..n - 1).map(|c| m.get(n - 1, c).clone()).collect();
    let coeffs = solve_left(m.field, &upper_left, &last_prefix).ok_or(EkError::SingularUpperLeft)?;
    Ok(coeffs
        .iter()
        .enumerate()
        .fold(BigRational::zero(), |acc, (i, c)| m.field.add(&acc, &m.field.mul(c, m.get(i, n - 1)))))
}

/// Per-position record of the construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PositionTrace {
    pub row: usize,
    pub col: usize,
    pub frames: usize,
    pub forbidden: usize,
    pub chosen: String,
}

/// Least prime-field size that keeps every greedy step solvable.
pub fn prime_bound(m: usize) -> u64 {
    if m == 0 {
        0
    } else {
        binomial(2 * m as u64 - 2, m as u64 - 1)
    }
}

/// Fills an `m × m` matrix entry by entry. Does not verify the result.
pub fn construct_sli(m: usize, field: ExactField, order: ValueOrder) -> Result<(ExactMatrix, Vec<PositionTrace>)> {
    if let ExactField::Prime(p) = field {
        let needed = prime_bound(m);
        if p <= needed {
            return Err(EkError::FieldTooSmall { p, m, needed });
        }
    }
    let mut x = ExactMatrix { field, rows: m, cols: m, entries: vec![BigRational::zero(); m * m] };
    let mut trace = Vec::with_capacity(m * m);
    for alpha in 0..m {
        for beta in 0..m {
            let (forbidden, frames) = forbidden_at(&x, alpha, beta)?;
            assert_eq!(frames as u64, binomial((alpha + beta) as u64, alpha as u64), "frame count at ({alpha},{beta})");
            let chosen = field
                .candidates(order)
                .find(|v| !forbidden.contains(v))
                .expect("the field bound leaves a free value");
            trace.push(PositionTrace { row: alpha, col: beta, frames, forbidden: forbidden.len(), chosen: chosen.to_string() });
            x.entries[alpha * m + beta] = chosen;
        }
    }
    Ok((x, trace))
}

fn forbidden_at(x: &ExactMatrix, alpha: usize, beta: usize) -> Result<(BTreeSet<BigRational>, usize)> {
    let mut forbidden = BTreeSet::new();
    let mut frames = 0usize;
    for k in 0..=alpha.min(beta) {
        for rows in (0..alpha).combinations(k) {
            for cols in (0..beta).combinations(k) {
                let rows: Vec<usize> = rows.iter().copied().chain([alpha]).collect();
                let cols: Vec<usize> = cols.iter().copied().chain([beta]).collect();
                forbidden.insert(singularizing_value(&x.submatrix(&rows, &cols))?);
                frames += 1;
            }
        }
    }
    Ok((forbidden, frames))
}

/// Lexicographically least strongly independent `m × m` matrix over `F_p`,
/// found by backtracking. Works below the greedy bound; `None` when no such
/// matrix exists. Does not verify the result.
///
/// Rows and columns can be rescaled so that the first row and column are
/// all ones, and the least solution already has that form, so those entries
/// are fixed.
pub fn search_sli(m: usize, p: u64) -> Result<Option<ExactMatrix>> {
    let field = ExactField::prime(p)?;
    let mut x = ExactMatrix { field, rows: m, cols: m, entries: vec![BigRational::zero(); m * m] };
    fn go(x: &mut ExactMatrix, pos: usize, p: u64) -> Result<bool> {
        let m = x.rows;
        if pos == m * m {
            return Ok(true);
        }
        let (forbidden, _) = forbidden_at(x, pos / m, pos % m)?;
        let candidates = if pos < m || pos.is_multiple_of(m) { 1..2 } else { 0..p };
        for v in candidates {
            let v = BigRational::from_integer(v.into());
            if forbidden.contains(&v) {
                continue;
            }
            x.entries[pos] = v;
            if go(x, pos + 1, p)? {
                return Ok(true);
            }
        }
        x.entries[pos] = BigRational::zero();
        Ok(false)
    }
    Ok(go(&mut x, 0, p)?.then_some(x))
}

/// A square submatrix on increasing indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MinorWitness {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

/// `Σ_n C(rows, n)·C(cols, n)` over `n ≥ 1`.
pub fn minor_count(rows: usize, cols: usize) -> u64 {
    (1..=rows.min(cols) as u64).map(|n| binomial(rows as u64, n) * binomial(cols as u64, n)).sum()
}

fn frames(rows: usize, cols: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    (1..=rows.min(cols))
        .flat_map(|n| (0..rows).combinations(n).cartesian_product((0..cols).combinations(n).collect::<Vec<_>>()))
        .collect()
}

/// Nonzero-ness of a determinant, computed independently of the builder:
/// fraction-free elimination over the integers for rationals, elimination
/// modulo `p` for prime fields.
fn minor_is_nonzero(x: &ExactMatrix, rows: &[usize], cols: &[usize]) -> bool {
    match x.field {
        ExactField::Prime(p) => {
            let mut a: Vec<Vec<u64>> = rows
                .iter()
                .map(|&r| cols.iter().map(|&c| x.get(r, c).to_integer().to_u64().expect("reduced entry")).collect())
                .collect();
            rank_is_full_mod_p(&mut a, p)
        }
        ExactField::Rational => {
            let a: Vec<Vec<BigInt>> = rows
                .iter()
                .map(|&r| {
                    let lcm = cols.iter().fold(BigInt::one(), |acc, &c| acc.lcm(x.get(r, c).denom()));
                    cols.iter().map(|&c| (x.get(r, c) * BigRational::from_integer(lcm.clone())).to_integer()).collect()
                })
                .collect();
            !bareiss_det(a).is_zero()
        }
    }
}

fn rank_is_full_mod_p(a: &mut [Vec<u64>], p: u64) -> bool {
    let n = a.len();
    let mulmod = |x: u64, y: u64| ((x as u128 * y as u128) % p as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mulmod(r, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        r
    };
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| a[r][col] != 0) else { return false };
        a.swap(col, pivot);
        let inv = powmod(a[col][col], p - 2);
        for r in col + 1..n {
            if a[r][col] != 0 {
                let f = mulmod(a[r][col], inv);
                for k in col..n {
                    a[r][k] = (a[r][k] + p - mulmod(f, a[col][k])) % p;
                }
            }
        }
    }
    true
}

/// Bareiss fraction-free determinant.
pub fn bareiss_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

fn scan_minors(x: &ExactMatrix) -> (usize, Option<MinorWitness>) {
    let all = frames(x.rows, x.cols);
    let bad = all.par_iter().position_first(|(r, c)| !minor_is_nonzero(x, r, c));
    match bad {
        Some(i) => (i + 1, Some(MinorWitness { rows: all[i].0.clone(), cols: all[i].1.clone() })),
        None => (all.len(), None),
    }
}

/// Whether every square submatrix on increasing indices is nonsingular. The
/// witness is the first singular one by size, then row indices, then column
/// indices.
pub fn verify_sli(x: &ExactMatrix) -> Check<MinorWitness> {
    Check::from(scan_minors(x).1)
}

/// A matrix whose every minor has been checked to be nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SliCertificate {
    matrix: ExactMatrix,
    checked_minors: usize,
}

impl SliCertificate {
    pub fn issue(matrix: ExactMatrix) -> Result<Self> {
        match scan_minors(&matrix) {
            (checked_minors, None) => Ok(SliCertificate { matrix, checked_minors }),
            (_, Some(w)) => Err(EkError::NotSli(w)),
        }
    }

    pub fn matrix(&self) -> &ExactMatrix {
        &self.matrix
    }

    pub fn checked_minors(&self) -> usize {
        self.checked_minors
    }

    /// [`zero_count_bound`], failing when the bound is exceeded.
    pub fn zero_count_bound(&self, coeffs: &[BigRational]) -> Result<ZeroCount> {
        let z = zero_count_bound(&self.matrix, coeffs)?;
        if !z.within_bound() {
            return Err(EkError::ZeroBoundViolated { zeros: z.zero_count, nonzero: z.nonzero_coefficients });
        }
        Ok(z)
    }
}

/// Builds an `m × m` strongly independent matrix and certifies it.
pub fn build_sli_matrix(m: usize, field: ExactField, order: ValueOrder) -> Result<SliCertificate> {
    let (x, _) = construct_sli(m, field, order)?;
    SliCertificate::issue(x)
}

/// The Cauchy matrix `1/(a_α + b_β)` over the rationals.
pub fn cauchy_oracle(a: &[BigRational], b: &[BigRational]) -> Result<ExactMatrix> {
    let distinct = |v: &[BigRational]| v.iter().collect::<BTreeSet<_>>().len() == v.len();
    if !distinct(a) || !distinct(b) {
        return Err(EkError::RepeatedParameter);
    }
    let mut entries = Vec::with_capacity(a.len() * b.len());
    for (row, x) in a.iter().enumerate() {
        for (col, y) in b.iter().enumerate() {
            let s = x + y;
            if s.is_zero() {
                return Err(EkError::ZeroDenominator { row, col });
            }
            entries.push(s.recip());
        }
    }
    ExactMatrix::new(ExactField::Rational, a.len(), b.len(), entries)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ZeroCount {
    pub zero_count: usize,
    pub nonzero_coefficients: usize,
}

impl ZeroCount {
    pub fn within_bound(&self) -> bool {
        self.zero_count < self.nonzero_coefficients
    }
}

/// Zero coordinates of `x · coeffs` against the number of nonzero
/// coefficients.
pub fn zero_count_bound(x: &ExactMatrix, coeffs: &[BigRational]) -> Result<ZeroCount> {
    if coeffs.len() != x.cols {
        return Err(EkError::CoefficientCount { expected: x.cols, found: coeffs.len() });
    }
    let coeffs = coeffs
        .iter()
        .enumerate()
        .map(|(index, c)| x.field.element(c).ok_or(EkError::BadEntry { index, reason: format!("{c}") }))
        .collect::<Result<Vec<_>>>()?;
    let nonzero = coeffs.iter().filter(|c| !c.is_zero()).count();
    if nonzero == 0 {
        return Err(EkError::ZeroCoefficients);
    }
    let zeros = (0..x.rows)
        .filter(|&r| {
            coeffs
                .iter()
                .enumerate()
                .fold(BigRational::zero(), |acc, (c, k)| x.field.add(&acc, &x.field.mul(x.get(r, c), k)))
                .is_zero()
        })
        .count();
    Ok(ZeroCount { zero_count: zeros, nonzero_coefficients: nonzero })
}

/// `|X^I / f| = |X|^n` where `n` is the number of ultrafilters in the
/// decomposition of `f`.
pub fn reduced_power_cardinality(x_size: usize, f: &Filter) -> Result<u128> {
    if x_size < 2 {
        return Err(EkError::CarrierTooSmall(x_size));
    }
    (x_size as u128).checked_pow(decompose_filter(f).len() as u32).ok_or(EkError::Overflow)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DimensionReport {
    pub q: u64,
    pub index_size: usize,
    pub decomposition_size: usize,
    pub dimension: usize,
    pub cardinality: usize,
    /// `q^n > n` whenever `n ≥ 1`.
    pub cardinality_exceeds_dimension: bool,
}

impl DimensionReport {
    pub fn holds(&self) -> bool {
        self.dimension == self.decomposition_size && self.cardinality_exceeds_dimension
    }
}

/// The reduced power `F_q^I / f` as a vector space: its dimension, found by
/// greedy span closure, against the size of the decomposition of `f`.
pub fn finite_field_dimension_check(q: u64, f: &Filter) -> Result<DimensionReport> {
    let field = GaloisField::new(q).map_err(|_| EkError::UnsupportedField(q))?;
    let line = corpus::field_line(q);
    let family = ProductFamily::power(&line, f.parent().size())?;
    let rp = reduced_product(&family, f)?;
    let v = rp.algebra();
    let add = v.op_index("add").expect("vector space signature");
    let smul: Vec<usize> = (0..field.order()).map(|s| v.op_index(&format!("smul{s}")).expect("scalar op")).collect();
    let zero = v.tags().zero.expect("zero tag");
    let mut span = vec![false; v.size()];
    span[zero] = true;
    let mut dimension = 0;
    for vec in 0..v.size() {
        if span[vec] {
            continue;
        }
        dimension += 1;
        let old: Vec<usize> = (0..v.size()).filter(|&s| span[s]).collect();
        for s in old {
            for &m in &smul {
                span[v.apply2(add, s, v.apply(m, &[vec]))] = true;
            }
        }
    }
    let cardinality = v.size();
    Ok(DimensionReport {
        q,
        index_size: f.parent().size(),
        decomposition_size: decompose_filter(f).len(),
        dimension,
        cardinality,
        cardinality_exceeds_dimension: dimension == 0 || cardinality > dimension,
    })
}

impl Serialize for ExactMatrix {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_doc().serialize(serializer)
    }
}
