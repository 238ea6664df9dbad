//! Dense real/complex matrices and vectors.
//!
//! Complex entries are stored as interleaved `(re, im)` pairs in a flat
//! row-major buffer. Only the arithmetic needed by the constructions, the
//! realification and the decoders is provided.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Real,
    Complex,
}

impl Field {
    pub fn name(self) -> &'static str {
        match self {
            Field::Real => "real",
            Field::Complex => "complex",
        }
    }

    fn width(self) -> usize {
        match self {
            Field::Real => 1,
            Field::Complex => 2,
        }
    }
}

impl FromStr for Field {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "real" => Ok(Field::Real),
            "complex" => Ok(Field::Complex),
            other => Err(Error::InvalidArgument(format!("unknown field `{other}`"))),
        }
    }
}

/// Norms used on measurement space. Only the LP-castable ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Rnorm {
    Inf,
    L1,
}

impl Rnorm {
    pub fn name(self) -> &'static str {
        match self {
            Rnorm::Inf => "inf",
            Rnorm::L1 => "l1",
        }
    }

    pub fn norm(self, v: &[f64]) -> f64 {
        match self {
            Rnorm::Inf => norm_inf(v),
            Rnorm::L1 => norm_l1(v),
        }
    }
}

impl FromStr for Rnorm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "inf" => Ok(Rnorm::Inf),
            "l1" => Ok(Rnorm::L1),
            other => Err(Error::InvalidArgument(format!(
                "unknown residual norm `{other}`"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Norm {
    L1,
    L2,
    Inf,
}

/// Dense `rows x cols` matrix over the reals or the complex numbers.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    /// Real matrix from a row-major buffer.
    pub fn real(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        Self::new(Field::Real, rows, cols, data)
    }

    /// Complex matrix from row-major entries.
    pub fn complex(rows: usize, cols: usize, entries: &[Complex64]) -> Result<Self> {
        let data = entries.iter().flat_map(|z| [z.re, z.im]).collect();
        Self::new(Field::Complex, rows, cols, data)
    }

    /// Raw constructor; `data` holds interleaved pairs when `field` is complex.
    pub fn new(field: Field, rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::DimensionMismatch(format!(
                "matrix must be at least 1x1, got {rows}x{cols}"
            )));
        }
        let expected = rows * cols * field.width();
        if data.len() != expected {
            return Err(Error::DimensionMismatch(format!(
                "{} {rows}x{cols} matrix needs {expected} scalars, got {}",
                field.name(),
                data.len()
            )));
        }
        if let Some(i) = data.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite(format!("matrix scalar {i}")));
        }
        Ok(Self {
            field,
            rows,
            cols,
            data,
        })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Self::real(m, n, rows.concat())
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            data[i * n + i] = 1.0;
        }
        Self::real(n, n, data).expect("identity is well formed")
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_real(&self) -> bool {
        self.field == Field::Real
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Flat scalar buffer (interleaved for complex matrices).
    pub fn data(&self) -> &[f64] {
        &self.data
    }

    /// Real entry. Panics on complex matrices.
    pub fn get(&self, r: usize, c: usize) -> f64 {
        assert!(self.is_real(), "get() on a complex matrix");
        self.data[r * self.cols + c]
    }

    pub fn entry(&self, r: usize, c: usize) -> Complex64 {
        match self.field {
            Field::Real => Complex64::new(self.data[r * self.cols + c], 0.0),
            Field::Complex => {
                let k = 2 * (r * self.cols + c);
                Complex64::new(self.data[k], self.data[k + 1])
            }
        }
    }

    /// Row slice of a real matrix.
    pub fn row(&self, r: usize) -> &[f64] {
        assert!(self.is_real(), "row() on a complex matrix");
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn complex_row(&self, r: usize) -> Vec<Complex64> {
        (0..self.cols).map(|c| self.entry(r, c)).collect()
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            data: self.data.iter().map(|x| x * s).collect(),
            ..self.clone()
        }
    }

    pub fn add(&self, other: &Matrix) -> Result<Self> {
        if self.field != other.field || self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(
                "matrix sum operands differ".into(),
            ));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        Self::new(self.field, self.rows, self.cols, data)
    }

    /// Transpose of a real matrix.
    pub fn transpose(&self) -> Self {
        assert!(self.is_real(), "transpose() on a complex matrix");
        let mut data = vec![0.0; self.data.len()];
        for r in 0..self.rows {
            for c in 0..self.cols {
                data[c * self.rows + r] = self.data[r * self.cols + c];
            }
        }
        Self {
            field: Field::Real,
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    /// Matrix whose column `j` is column `perm[j]` of `self`.
    pub fn permute_columns(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.cols);
        let w = self.field.width();
        let mut data = Vec::with_capacity(self.data.len());
        for r in 0..self.rows {
            for &c in perm {
                let k = w * (r * self.cols + c);
                data.extend_from_slice(&self.data[k..k + w]);
            }
        }
        Self {
            data,
            ..self.clone()
        }
    }

    /// Matrix whose row `i` is row `perm[i]` of `self`.
    pub fn permute_rows(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.rows);
        let stride = self.cols * self.field.width();
        let data = perm
            .iter()
            .flat_map(|&r| self.data[r * stride..(r + 1) * stride].iter().copied())
            .collect();
        Self {
            data,
            ..self.clone()
        }
    }

    /// `A v` for a real matrix and real vector.
    pub fn mul_real(&self, v: &[f64]) -> Result<Vec<f64>> {
        if !self.is_real() {
            return Err(Error::FieldMismatch {
                expected: "real",
                found: "complex",
            });
        }
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "matrix has {} columns, vector has length {}",
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} {}\n", self.field.name(), self.rows, self.cols);
        let stride = self.cols * self.field.width();
        for r in 0..self.rows {
            write_scalars(&mut out, &self.data[r * stride..(r + 1) * stride]);
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = content_lines(text);
        let (ln, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "empty matrix file".into(),
        })?;
        let parts: Vec<&str> = header.split_whitespace().collect();
        if parts.len() != 3 {
            return Err(Error::Parse {
                line: ln,
                msg: "expected `<real|complex> M N`".into(),
            });
        }
        let field: Field = parts[0].parse().map_err(|_| Error::Parse {
            line: ln,
            msg: format!("unknown field `{}`", parts[0]),
        })?;
        let rows = parse_count(parts[1], ln)?;
        let cols = parse_count(parts[2], ln)?;
        let mut data = Vec::with_capacity(rows * cols * field.width());
        for r in 0..rows {
            let (ln, line) = lines.next().ok_or(Error::Parse {
                line: ln + r + 1,
                msg: format!("missing row {}", r + 1),
            })?;
            let row = parse_scalars(line, ln)?;
            if row.len() != cols * field.width() {
                return Err(Error::Parse {
                    line: ln,
                    msg: format!(
                        "expected {} scalars, got {}",
                        cols * field.width(),
                        row.len()
                    ),
                });
            }
            data.extend(row);
        }
        Self::new(field, rows, cols, data)
    }

    pub fn read_from(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_text(&std::fs::read_to_string(path)?)
    }

    pub fn write_to(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }
}

/// Real or complex vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Vector {
    field: Field,
    data: Vec<f64>,
}

impl Vector {
    pub fn real(data: Vec<f64>) -> Result<Self> {
        Self::new(Field::Real, data)
    }

    pub fn complex(entries: &[Complex64]) -> Result<Self> {
        Self::new(
            Field::Complex,
            entries.iter().flat_map(|z| [z.re, z.im]).collect(),
        )
    }

    pub fn new(field: Field, data: Vec<f64>) -> Result<Self> {
        if data.is_empty() || !data.len().is_multiple_of(field.width()) {
            return Err(Error::DimensionMismatch(format!(
                "{} vector cannot hold {} scalars",
                field.name(),
                data.len()
            )));
        }
        if let Some(i) = data.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite(format!("vector scalar {i}")));
        }
        Ok(Self { field, data })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn len(&self) -> usize {
        self.data.len() / self.field.width()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    /// Entries of a real vector.
    pub fn as_real(&self) -> Option<&[f64]> {
        (self.field == Field::Real).then_some(self.data.as_slice())
    }

    pub fn entry(&self, i: usize) -> Complex64 {
        match self.field {
            Field::Real => Complex64::new(self.data[i], 0.0),
            Field::Complex => Complex64::new(self.data[2 * i], self.data[2 * i + 1]),
        }
    }

    pub fn entries(&self) -> Vec<Complex64> {
        (0..self.len()).map(|i| self.entry(i)).collect()
    }

    pub fn into_real(self) -> Option<Vec<f64>> {
        (self.field == Field::Real).then_some(self.data)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.field.name(), self.len());
        write_scalars(&mut out, &self.data);
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = content_lines(text);
        let (ln, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "empty vector file".into(),
        })?;
        let parts: Vec<&str> = header.split_whitespace().collect();
        if parts.len() != 2 {
            return Err(Error::Parse {
                line: ln,
                msg: "expected `<real|complex> N`".into(),
            });
        }
        let field: Field = parts[0].parse().map_err(|_| Error::Parse {
            line: ln,
            msg: format!("unknown field `{}`", parts[0]),
        })?;
        let len = parse_count(parts[1], ln)?;
        let (ln, body) = lines.next().ok_or(Error::Parse {
            line: ln + 1,
            msg: "missing entries line".into(),
        })?;
        let data = parse_scalars(body, ln)?;
        if data.len() != len * field.width() {
            return Err(Error::Parse {
                line: ln,
                msg: format!(
                    "expected {} scalars, got {}",
                    len * field.width(),
                    data.len()
                ),
            });
        }
        Self::new(field, data)
    }

    pub fn read_from(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_text(&std::fs::read_to_string(path)?)
    }

    pub fn write_to(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_count(s: &str, line: usize) -> Result<usize> {
    s.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("bad count `{s}`"),
    })
}

fn parse_scalars(line: &str, ln: usize) -> Result<Vec<f64>> {
    line.split_whitespace()
        .map(|tok| {
            tok.parse::<f64>().map_err(|_| Error::Parse {
                line: ln,
                msg: format!("bad scalar `{tok}`"),
            })
        })
        .collect()
}

// 17 significant digits: enough to round-trip every f64.
fn write_scalars(out: &mut String, xs: &[f64]) {
    for (i, x) in xs.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        write!(out, "{x:.16e}").expect("writing to a String");
    }
    out.push('\n');
}

/// Matrix-vector product. A complex matrix accepts a real vector (promoted).
pub fn matvec(a: &Matrix, v: &Vector) -> Result<Vector> {
    if a.cols() != v.len() {
        return Err(Error::DimensionMismatch(format!(
            "matrix has {} columns, vector has length {}",
            a.cols(),
            v.len()
        )));
    }
    match (a.field(), v.field()) {
        (Field::Real, Field::Real) => Vector::real(a.mul_real(v.data())?),
        (Field::Real, Field::Complex) => Err(Error::FieldMismatch {
            expected: "real",
            found: "complex",
        }),
        (Field::Complex, _) => {
            let x = v.entries();
            let out: Vec<Complex64> = (0..a.rows())
                .map(|r| (0..a.cols()).map(|c| a.entry(r, c) * x[c]).sum())
                .collect();
            Vector::complex(&out)
        }
    }
}

pub fn norm_inf(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

pub fn norm_l1(v: &[f64]) -> f64 {
    v.iter().map(|x| x.abs()).sum()
}

pub fn norm_l2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// `p`-norm of a vector; complex entries contribute their modulus.
pub fn vec_norm(v: &Vector, p: Norm) -> f64 {
    let moduli: Vec<f64> = match v.field() {
        Field::Real => v.data().iter().map(|x| x.abs()).collect(),
        Field::Complex => v.entries().iter().map(|z| z.norm()).collect(),
    };
    match p {
        Norm::L1 => norm_l1(&moduli),
        Norm::L2 => norm_l2(&moduli),
        Norm::Inf => norm_inf(&moduli),
    }
}

/// Induced `l_inf -> l_inf` operator norm: the largest absolute row sum.
/// Complex matrices are realified first.
pub fn opnorm_inf(a: &Matrix) -> f64 {
    let real;
    let a = if a.is_real() {
        a
    } else {
        real = realify(a);
        &real
    };
    (0..a.rows()).map(|r| norm_l1(a.row(r))).fold(0.0, f64::max)
}

/// Stack real parts over imaginary parts: `2M x N` real matrix whose real
/// kernel coincides with the real kernel of `a`. Real input is returned as is.
pub fn realify(a: &Matrix) -> Matrix {
    if a.is_real() {
        return a.clone();
    }
    let (m, n) = (a.rows(), a.cols());
    let mut data = vec![0.0; 2 * m * n];
    for r in 0..m {
        for c in 0..n {
            let z = a.entry(r, c);
            data[r * n + c] = z.re;
            data[(m + r) * n + c] = z.im;
        }
    }
    Matrix::real(2 * m, n, data).expect("realified matrix is well formed")
}

/// Exact `l_inf` distance from a non-negative `x` to the non-negative
/// `s`-sparse vectors: the `(s+1)`-th largest entry.
pub fn best_s_term_distance_inf(x: &[f64], s: usize) -> Result<f64> {
    if let Some(i) = x.iter().position(|&v| v < 0.0) {
        return Err(Error::InvalidArgument(format!(
            "entry {i} is negative ({})",
            x[i]
        )));
    }
    if s > x.len() {
        return Err(Error::InvalidArgument(format!(
            "sparsity {s} exceeds length {}",
            x.len()
        )));
    }
    if s == x.len() {
        return Ok(0.0);
    }
    let mut sorted = x.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    Ok(sorted[s])
}

/// Solve the square system `m x = b` by Gaussian elimination with partial
/// pivoting. Returns `None` when a pivot falls below `tol`.
pub(crate) fn solve_dense(m: &[f64], b: &[f64], n: usize, tol: f64) -> Option<Vec<f64>> {
    let mut a = m.to_vec();
    let mut x = b.to_vec();
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| a[i * n + k].abs().total_cmp(&a[j * n + k].abs()))?;
        if a[p * n + k].abs() <= tol {
            return None;
        }
        if p != k {
            for c in 0..n {
                a.swap(k * n + c, p * n + c);
            }
            x.swap(k, p);
        }
        let piv = a[k * n + k];
        for i in k + 1..n {
            let f = a[i * n + k] / piv;
            if f == 0.0 {
                continue;
            }
            for c in k..n {
                a[i * n + c] -= f * a[k * n + c];
            }
            x[i] -= f * x[k];
        }
    }
    for k in (0..n).rev() {
        let s: f64 = (k + 1..n).map(|c| a[k * n + c] * x[c]).sum();
        x[k] = (x[k] - s) / a[k * n + k];
    }
    Some(x)
}
