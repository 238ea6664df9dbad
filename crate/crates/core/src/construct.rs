//! Measurement matrices with a certified signed kernel condition.
//!
//! Every family is a (possibly complex) Vandermonde-type matrix whose real
//! kernel vectors are forced to alternate in sign often enough. Each
//! constructor validates the admissibility window of its angles, pads the
//! exponent by `N'` when the matrix would otherwise be too wide to have a
//! nontrivial real kernel, and reports the order it guarantees.

use std::f64::consts::PI;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// Minimum separation demanded between quantities that must be distinct.
pub const DISTINCT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstructionKind {
    VandermondeReal,
    Trigonometric,
    VandermondeComplex,
    HermitianProduct,
    HermitianProductNormalized,
    OuterProduct,
}

impl ConstructionKind {
    pub const ALL: [ConstructionKind; 6] = [
        ConstructionKind::VandermondeReal,
        ConstructionKind::Trigonometric,
        ConstructionKind::VandermondeComplex,
        ConstructionKind::HermitianProduct,
        ConstructionKind::HermitianProductNormalized,
        ConstructionKind::OuterProduct,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ConstructionKind::VandermondeReal => "vandermonde_real",
            ConstructionKind::Trigonometric => "trigonometric",
            ConstructionKind::VandermondeComplex => "vandermonde_complex",
            ConstructionKind::HermitianProduct => "hermitian_product",
            ConstructionKind::HermitianProductNormalized => "hermitian_product_normalized",
            ConstructionKind::OuterProduct => "outer_product",
        }
    }
}

impl FromStr for ConstructionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown construction kind `{s}`")))
    }
}

/// Parameters of one certified construction.
///
/// `m` is the base row count (ignored by `trigonometric`, which has
/// `2s + 1` rows). `s` is only read by `trigonometric` and `k` only by
/// `outer_product`. Omitted nodes and angles take the family defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstructionSpec {
    pub kind: ConstructionKind,
    #[serde(default)]
    pub m: usize,
    pub n: usize,
    #[serde(default)]
    pub s: Option<usize>,
    #[serde(default)]
    pub k: Option<usize>,
    #[serde(default)]
    pub nodes: Option<Vec<f64>>,
    #[serde(default)]
    pub thetas: Option<Vec<f64>>,
}

impl ConstructionSpec {
    pub fn new(kind: ConstructionKind, m: usize, n: usize) -> Self {
        Self {
            kind,
            m,
            n,
            s: None,
            k: None,
            nodes: None,
            thetas: None,
        }
    }

    pub fn with_s(mut self, s: usize) -> Self {
        self.s = Some(s);
        self
    }

    pub fn with_k(mut self, k: usize) -> Self {
        self.k = Some(k);
        self
    }

    pub fn with_nodes(mut self, nodes: Vec<f64>) -> Self {
        self.nodes = Some(nodes);
        self
    }

    pub fn with_thetas(mut self, thetas: Vec<f64>) -> Self {
        self.thetas = Some(thetas);
        self
    }

    fn require_s(&self) -> Result<usize> {
        self.s
            .ok_or_else(|| Error::InvalidArgument("trigonometric construction needs S".into()))
    }

    fn require_k(&self) -> Result<usize> {
        match self.k {
            Some(k) if k >= 1 => Ok(k),
            _ => Err(Error::InvalidArgument(
                "outer_product construction needs K >= 1".into(),
            )),
        }
    }

    /// Exponent pad `N'` of the family.
    pub fn pad(&self) -> Result<usize> {
        let (m, n) = (self.m, self.n);
        if m == 0 && self.kind != ConstructionKind::Trigonometric {
            return Err(Error::InvalidArgument("M must be at least 1".into()));
        }
        Ok(match self.kind {
            ConstructionKind::VandermondeReal => 0,
            ConstructionKind::Trigonometric => (2 * self.require_s()? + 1).saturating_sub(n),
            ConstructionKind::VandermondeComplex => (2 * m).saturating_sub(n),
            ConstructionKind::HermitianProduct => (m * m).saturating_sub(n),
            ConstructionKind::HermitianProductNormalized => (m * m - m + 1).saturating_sub(n),
            ConstructionKind::OuterProduct => {
                (2 * binomial(m - 1 + self.require_k()?, self.require_k()?)).saturating_sub(n)
            }
        })
    }

    pub fn build(&self) -> Result<Matrix> {
        let nodes = self.nodes.as_deref();
        let thetas = self.thetas.as_deref();
        match self.kind {
            ConstructionKind::VandermondeReal => match nodes {
                Some(a) => vandermonde_real(a, self.n),
                None => vandermonde_real(&default_real_nodes(self.m), self.n),
            },
            ConstructionKind::Trigonometric => trigonometric(self.require_s()?, self.n, thetas),
            ConstructionKind::VandermondeComplex => {
                vandermonde_complex(self.m, self.n, nodes, thetas)
            }
            ConstructionKind::HermitianProduct => {
                hermitian_product_with(self.m, self.n, false, nodes, thetas)
            }
            ConstructionKind::HermitianProductNormalized => {
                if nodes.is_some() {
                    return Err(Error::InvalidArgument(
                        "normalized hermitian product has unit nodes".into(),
                    ));
                }
                hermitian_product_with(self.m, self.n, true, None, thetas)
            }
            ConstructionKind::OuterProduct => {
                outer_product_with(self.m, self.n, self.require_k()?, nodes, thetas)
            }
        }
    }
}

/// Order of the signed kernel condition each family guarantees.
pub fn guaranteed_order(spec: &ConstructionSpec) -> Result<usize> {
    let m = spec.m;
    if spec.kind != ConstructionKind::Trigonometric && m == 0 {
        return Err(Error::InvalidArgument("M must be at least 1".into()));
    }
    Ok(match spec.kind {
        ConstructionKind::VandermondeReal => m.div_ceil(2) - 1,
        ConstructionKind::Trigonometric => spec.require_s()?,
        ConstructionKind::VandermondeComplex => m - 1,
        ConstructionKind::HermitianProduct => (m * m).div_ceil(2) - 1,
        ConstructionKind::HermitianProductNormalized => (m * m - m) / 2,
        ConstructionKind::OuterProduct => {
            let k = spec.require_k()?;
            binomial(m - 1 + k, k) - 1
        }
    })
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// The `m`-th prime (1-based) by trial division.
pub fn nth_prime(m: usize) -> u64 {
    assert!(m >= 1, "primes are 1-indexed");
    let mut count = 0;
    let mut candidate = 1u64;
    while count < m {
        candidate += 1;
        if is_prime(candidate) {
            count += 1;
        }
    }
    candidate
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn default_real_nodes(m: usize) -> Vec<f64> {
    (1..=m).map(|i| 1.0 / i as f64).collect()
}

/// `sqrt(p_m / p_{M+1})` for `m = 1..=M`: increasing, below one and with
/// pairwise distinct differences.
fn prime_ratios(m: usize) -> Vec<f64> {
    let top = nth_prime(m + 1) as f64;
    (1..=m)
        .map(|i| (nth_prime(i) as f64 / top).sqrt())
        .collect()
}

fn check_len(name: &str, v: &[f64], want: usize) -> Result<()> {
    if v.len() != want {
        return Err(Error::InvalidArgument(format!(
            "expected {want} {name}, got {}",
            v.len()
        )));
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite(name.to_string()));
    }
    Ok(())
}

fn check_window(thetas: &[f64], upper: f64, increasing: bool) -> Result<()> {
    for (i, &t) in thetas.iter().enumerate() {
        if !(t > 0.0 && t < upper) {
            return Err(Error::Construction(format!(
                "angle {} = {t} outside (0, {upper})",
                i + 1
            )));
        }
    }
    if increasing && thetas.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Construction(
            "angles must be strictly increasing".into(),
        ));
    }
    Ok(())
}

fn check_distinct(points: &[Complex64], what: &str) -> Result<()> {
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            if (points[i] - points[j]).norm() < DISTINCT_TOL {
                return Err(Error::Construction(format!(
                    "{what} {} and {} coincide",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    Ok(())
}

fn check_positive(nodes: &[f64]) -> Result<()> {
    if let Some(i) = nodes.iter().position(|&a| a <= 0.0) {
        return Err(Error::Construction(format!(
            "node {} = {} is not positive",
            i + 1,
            nodes[i]
        )));
    }
    Ok(())
}

fn window_denominator(value: isize) -> Result<f64> {
    if value < 1 {
        return Err(Error::Construction(format!(
            "degenerate angle window denominator {value}"
        )));
    }
    Ok(value as f64)
}

fn require_dims(m: usize, n: usize) -> Result<()> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidArgument(format!(
            "dimensions must be positive, got M = {m}, N = {n}"
        )));
    }
    Ok(())
}

/// `A[m][n] = a_m^(n-1)` with distinct positive nodes.
pub fn vandermonde_real(nodes: &[f64], n: usize) -> Result<Matrix> {
    require_dims(nodes.len(), n)?;
    check_len("nodes", nodes, nodes.len())?;
    check_positive(nodes)?;
    let pts: Vec<Complex64> = nodes.iter().map(|&a| Complex64::new(a, 0.0)).collect();
    check_distinct(&pts, "node")?;
    let data = nodes
        .iter()
        .flat_map(|&a| (0..n).map(move |j| a.powi(j as i32)))
        .collect();
    Matrix::real(nodes.len(), n, data)
}

/// `(2S+1) x N` cosine/sine matrix, rows ordered
/// `[cos(0), sin(t_1), cos(t_1), ..., sin(t_S), cos(t_S)]` evaluated at
/// `t_s (n - 1 + N')`.
pub fn trigonometric(s: usize, n: usize, thetas: Option<&[f64]>) -> Result<Matrix> {
    require_dims(1, n)?;
    let pad = (2 * s + 1).saturating_sub(n);
    let upper = PI / window_denominator(n as isize + pad as isize - 2 * s as isize)?;
    let thetas: Vec<f64> = match thetas {
        Some(t) => {
            check_len("angles", t, s)?;
            t.to_vec()
        }
        None => (1..=s).map(|i| i as f64 / (s + 1) as f64 * upper).collect(),
    };
    check_window(&thetas, upper, true)?;
    let rows = 2 * s + 1;
    let mut data = Vec::with_capacity(rows * n);
    data.extend(std::iter::repeat_n(1.0, n));
    for &t in &thetas {
        data.extend((0..n).map(|j| (t * (j + pad) as f64).sin()));
        data.extend((0..n).map(|j| (t * (j + pad) as f64).cos()));
    }
    Matrix::real(rows, n, data)
}

/// Rows `z_m^(n-1+N')` with `z_m = a_m e^{i t_m}`, as complex numbers.
fn complex_vandermonde_rows(
    nodes: &[f64],
    thetas: &[f64],
    n: usize,
    pad: usize,
) -> Vec<Vec<Complex64>> {
    nodes
        .iter()
        .zip(thetas)
        .map(|(&a, &t)| {
            (0..n)
                .map(|j| {
                    let e = (j + pad) as f64;
                    Complex64::from_polar(a.powf(e), t * e)
                })
                .collect()
        })
        .collect()
}

/// `M x N` complex Vandermonde matrix `a_m^(n-1+N') e^{i t_m (n-1+N')}`.
/// Defaults: unit nodes and `t_m = m/(M+1) * pi/(N+N'+1-2M)`.
pub fn vandermonde_complex(
    m: usize,
    n: usize,
    nodes: Option<&[f64]>,
    thetas: Option<&[f64]>,
) -> Result<Matrix> {
    require_dims(m, n)?;
    let pad = (2 * m).saturating_sub(n);
    let upper = PI / window_denominator((n + pad + 1) as isize - 2 * m as isize)?;
    let nodes = match nodes {
        Some(a) => {
            check_len("nodes", a, m)?;
            check_positive(a)?;
            a.to_vec()
        }
        None => vec![1.0; m],
    };
    let thetas = match thetas {
        Some(t) => {
            check_len("angles", t, m)?;
            t.to_vec()
        }
        None => (1..=m).map(|i| i as f64 / (m + 1) as f64 * upper).collect(),
    };
    check_window(&thetas, upper, false)?;
    let roots: Vec<Complex64> = nodes
        .iter()
        .zip(&thetas)
        .map(|(&a, &t)| Complex64::from_polar(a, t))
        .collect();
    check_distinct(&roots, "node")?;
    let rows = complex_vandermonde_rows(&nodes, &thetas, n, pad);
    Matrix::complex(m, n, &rows.concat())
}

/// Hermitian products with the family defaults.
pub fn hermitian_product(m: usize, n: usize, normalized: bool) -> Result<Matrix> {
    hermitian_product_with(m, n, normalized, None, None)
}

/// `M^2 x N` matrix whose column `n` lists `b b^H` for column `b` of a
/// complex Vandermonde matrix, row `(m1, m2)` at index `(m1-1) M + (m2-1)`.
pub fn hermitian_product_with(
    m: usize,
    n: usize,
    normalized: bool,
    nodes: Option<&[f64]>,
    thetas: Option<&[f64]>,
) -> Result<Matrix> {
    require_dims(m, n)?;
    let mm = m * m;
    let (pad, upper, default_scale) = if normalized {
        let pad = (mm - m + 1).saturating_sub(n);
        let upper = PI / window_denominator((n + pad + m) as isize - mm as isize)?;
        let scale = PI / window_denominator((n + pad + 1 + m) as isize - mm as isize)?;
        (pad, upper, scale)
    } else {
        let pad = mm.saturating_sub(n);
        let upper = PI / window_denominator((n + pad + 1) as isize - mm as isize)?;
        (pad, upper, upper)
    };
    let nodes = match (nodes, normalized) {
        (Some(_), true) => {
            return Err(Error::InvalidArgument(
                "normalized hermitian product has unit nodes".into(),
            ))
        }
        (Some(a), false) => {
            check_len("nodes", a, m)?;
            check_positive(a)?;
            a.to_vec()
        }
        (None, true) => vec![1.0; m],
        (None, false) => (1..=m).map(|i| (i as f64).powf(-0.5)).collect(),
    };
    let thetas = match thetas {
        Some(t) => {
            check_len("angles", t, m)?;
            t.to_vec()
        }
        None => prime_ratios(m)
            .into_iter()
            .map(|r| r * default_scale)
            .collect(),
    };
    check_window(&thetas, upper, true)?;

    // roots a_{m1} a_{m2} e^{i(t_{m1} - t_{m2})} that must be distinct
    let mut roots = Vec::new();
    for i in 0..m {
        for j in i..m {
            if normalized && i == j {
                continue;
            }
            roots.push(Complex64::from_polar(
                nodes[i] * nodes[j],
                thetas[i] - thetas[j],
            ));
        }
    }
    check_distinct(&roots, "product root")?;

    let base = complex_vandermonde_rows(&nodes, &thetas, n, pad);
    let mut entries = Vec::with_capacity(mm * n);
    for r1 in &base {
        for r2 in &base {
            entries.extend(r1.iter().zip(r2).map(|(x, y)| x * y.conj()));
        }
    }
    Matrix::complex(mm, n, &entries)
}

/// Column-wise `K`-fold outer products with the family defaults.
pub fn outer_product(m: usize, n: usize, k: usize) -> Result<Matrix> {
    outer_product_with(m, n, k, None, None)
}

/// `M^K x N` matrix with row `(m_1..m_K)` (lexicographic) equal to the
/// entrywise product of the corresponding complex Vandermonde rows.
pub fn outer_product_with(
    m: usize,
    n: usize,
    k: usize,
    nodes: Option<&[f64]>,
    thetas: Option<&[f64]>,
) -> Result<Matrix> {
    require_dims(m, n)?;
    if k == 0 {
        return Err(Error::InvalidArgument("K must be at least 1".into()));
    }
    let distinct_rows = binomial(m - 1 + k, k);
    let pad = (2 * distinct_rows).saturating_sub(n);
    let upper =
        PI / window_denominator((n + pad + 1) as isize - 2 * distinct_rows as isize)? / k as f64;
    let nodes = match nodes {
        Some(a) => {
            check_len("nodes", a, m)?;
            check_positive(a)?;
            a.to_vec()
        }
        None => vec![1.0; m],
    };
    let thetas = match thetas {
        Some(t) => {
            check_len("angles", t, m)?;
            t.to_vec()
        }
        None => prime_ratios(m).into_iter().map(|r| r * upper).collect(),
    };
    check_window(&thetas, upper, false)?;

    let multisets = nondecreasing_tuples(m, k);
    let roots: Vec<Complex64> = multisets
        .iter()
        .map(|t| {
            let modulus: f64 = t.iter().map(|&i| nodes[i]).product();
            let angle: f64 = t.iter().map(|&i| thetas[i]).sum();
            Complex64::from_polar(modulus, angle)
        })
        .collect();
    check_distinct(&roots, "product root")?;

    let base = complex_vandermonde_rows(&nodes, &thetas, n, pad);
    let rows = m.pow(k as u32);
    let mut entries = Vec::with_capacity(rows * n);
    for idx in 0..rows {
        // digits of idx in base m, most significant first
        let mut digits = vec![0; k];
        let mut rest = idx;
        for d in digits.iter_mut().rev() {
            *d = rest % m;
            rest /= m;
        }
        entries.extend((0..n).map(|c| digits.iter().map(|&i| base[i][c]).product::<Complex64>()));
    }
    Matrix::complex(rows, n, &entries)
}

fn nondecreasing_tuples(m: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(m: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            cur.push(i);
            rec(m, k, i, cur, out);
            cur.pop();
        }
    }
    rec(m, k, 0, &mut cur, &mut out);
    out
}

/// Append a row of ones to a real matrix.
pub fn append_ones_row(a: &Matrix) -> Result<Matrix> {
    if !a.is_real() {
        return Err(Error::FieldMismatch {
            expected: "real",
            found: "complex",
        });
    }
    let mut data = a.data().to_vec();
    data.extend(std::iter::repeat_n(1.0, a.cols()));
    Matrix::real(a.rows() + 1, a.cols(), data)
}
