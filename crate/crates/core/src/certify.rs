//! Robustness constant `tau`, normalization constant `kappa`, the signed
//! kernel verdict, the complexity bound and a random search for matrices
//! with large `tau`.
//!
//! Throughout, `v` ranges over differences `z - x` with `z >= 0` and `x` a
//! non-negative `S`-sparse vector, normalized to `||v||_inf = 1`. Such a `v`
//! has all its negative entries inside some support `T` of size `S`, and some
//! coordinate equal to `+1`, or to `-1` inside `T`. Fixing `T`, the
//! coordinate and its sign leaves one LP per case:
//!
//! ```text
//! alpha(T, n, +) = min ||A v||  s.t.  -1 <= v <= 1, v_n = +1, v_i >= 0 (i not in T)
//! alpha(T, n, -) = min ||A v||  s.t.  -1 <= v <= 1, v_n = -1, v_i >= 0 (i not in T), n in T
//! ```
//!
//! and `tau` is the minimum over all `C(N,S) (N + S)` of them.

use std::fmt;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::construct::binomial;
use crate::decode::supports;
use crate::error::{Error, Result};
use crate::linalg::{realify, Field, Matrix, Rnorm};
use crate::lp::{solve, LpProblem, LpStatus, SolveOptions};

/// Largest number of LPs [`tau_exact`] will solve.
pub const MAX_LPS: usize = 1_000_000;

/// Default relative threshold for declaring `tau > 0`.
pub const DEFAULT_REL_TOL: f64 = 1e-7;

/// Largest `N` for which non-`l_inf` kappa is computed by vertex enumeration.
const KAPPA_ENUM_MAX_N: usize = 14;

const KAPPA_SAMPLES: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

impl Serialize for Sign {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// The `(T, n, sign)` case attaining `tau`, with its minimizing `v`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    #[serde(rename = "T")]
    pub support: Vec<usize>,
    pub n: usize,
    pub sign: Sign,
    pub v: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlphaEntry {
    #[serde(rename = "T")]
    pub support: Vec<usize>,
    pub n: usize,
    pub sign: Sign,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertifyReport {
    #[serde(rename = "S")]
    pub s: usize,
    pub rnorm: Rnorm,
    pub tau: f64,
    pub kappa: f64,
    pub verdict: bool,
    pub witness: Witness,
    pub lp_count: usize,
    #[serde(rename = "D_robust")]
    pub d_robust: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha_table: Option<Vec<AlphaEntry>>,
}

impl CertifyReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn require_real(a: &Matrix) -> Result<()> {
    if a.is_real() {
        Ok(())
    } else {
        Err(Error::FieldMismatch {
            expected: "real",
            found: "complex",
        })
    }
}

fn require_order(a: &Matrix, s: usize) -> Result<()> {
    if s > a.cols() {
        Err(Error::InvalidArgument(format!(
            "order S = {s} exceeds N = {}",
            a.cols()
        )))
    } else {
        Ok(())
    }
}

/// Number of LPs an exhaustive `tau` computation needs.
pub fn lp_count(n: usize, s: usize) -> usize {
    binomial(n, s).saturating_mul(n + s)
}

fn alpha_lp(a: &Matrix, support: &[usize], n: usize, sign: Sign, rnorm: Rnorm) -> LpProblem {
    let (m, cols) = (a.rows(), a.cols());
    let slacks = match rnorm {
        Rnorm::Inf => 1,
        Rnorm::L1 => m,
    };
    let d = cols + slacks;
    let mut p = LpProblem::new(d);
    let mut c = vec![0.0; d];
    c[cols..].iter_mut().for_each(|x| *x = 1.0);
    p.set_objective(c);
    for i in 0..cols {
        let lo = if support.contains(&i) { -1.0 } else { 0.0 };
        p.set_bounds(i, lo, 1.0);
    }
    p.set_bounds(n, sign.value(), sign.value());
    for j in cols..d {
        p.set_bounds(j, 0.0, f64::INFINITY);
    }
    for r in 0..m {
        let slack = match rnorm {
            Rnorm::Inf => cols,
            Rnorm::L1 => cols + r,
        };
        let mut plus = vec![0.0; d];
        plus[..cols].copy_from_slice(a.row(r));
        let mut minus: Vec<f64> = plus.iter().map(|x| -x).collect();
        plus[slack] = -1.0;
        minus[slack] = -1.0;
        p.add_le(plus, 0.0);
        p.add_le(minus, 0.0);
    }
    p
}

/// Exact `tau` by solving every `alpha` LP. `kappa` in the report comes
/// from [`kappa`] and the verdict uses [`DEFAULT_REL_TOL`].
pub fn tau_exact(a: &Matrix, s: usize, rnorm: Rnorm, alphas: bool) -> Result<CertifyReport> {
    require_real(a)?;
    require_order(a, s)?;
    let n = a.cols();
    if n == 0 {
        return Err(Error::InvalidArgument("matrix has no columns".into()));
    }
    let count = lp_count(n, s);
    if count > MAX_LPS {
        return Err(Error::SizeGuard(format!(
            "C({n},{s})*({n}+{s}) = {count} LPs exceeds {MAX_LPS}"
        )));
    }

    // job order is lexicographic in (T, n, sign) so the first strict
    // minimum is the lexicographically smallest witness
    let mut jobs: Vec<(Vec<usize>, usize, Sign)> = Vec::with_capacity(count);
    for t in supports(n, s) {
        let mut cases: Vec<(usize, Sign)> = (0..n).map(|i| (i, Sign::Plus)).collect();
        cases.extend(t.iter().map(|&i| (i, Sign::Minus)));
        cases.sort();
        for (i, sign) in cases {
            jobs.push((t.clone(), i, sign));
        }
    }

    let opts = SolveOptions::default();
    let results: Vec<Result<(f64, Vec<f64>)>> = jobs
        .par_iter()
        .map(|(t, i, sign)| {
            let sol = solve(&alpha_lp(a, t, *i, *sign, rnorm), &opts)?;
            match sol.status {
                LpStatus::Optimal => {
                    let v = sol.point.expect("optimal point")[..n].to_vec();
                    let value = rnorm.norm(&a.mul_real(&v)?);
                    Ok((value, v))
                }
                other => Err(Error::Solver(format!(
                    "alpha LP for T = {t:?}, n = {i}, sign {sign} ended with status {}",
                    other.name()
                ))),
            }
        })
        .collect();

    let mut best: Option<(usize, f64, Vec<f64>)> = None;
    let mut table = Vec::new();
    for (k, r) in results.into_iter().enumerate() {
        let (value, v) = r?;
        if alphas {
            let (t, i, sign) = &jobs[k];
            table.push(AlphaEntry {
                support: t.clone(),
                n: *i,
                sign: *sign,
                value,
            });
        }
        if best.as_ref().is_none_or(|(_, b, _)| value < *b) {
            best = Some((k, value, v));
        }
    }
    let (k, tau, v) = best.expect("at least one LP");
    let (t, i, sign) = jobs[k].clone();
    let kappa = kappa(a, s, rnorm)?;
    Ok(CertifyReport {
        s,
        rnorm,
        tau,
        kappa,
        verdict: tau > DEFAULT_REL_TOL * kappa,
        witness: Witness {
            support: t,
            n: i,
            sign,
            v,
        },
        lp_count: count,
        d_robust: (tau > 0.0).then(|| 2.0 / tau),
        alpha_table: alphas.then_some(table),
    })
}

/// `sup ||A v||_inf` over `||v||_inf <= 1` with at most `s` negative
/// entries, in closed form. Complex input is realified.
pub fn kappa_exact_inf(a: &Matrix, s: usize) -> f64 {
    let a = if a.is_real() { a.clone() } else { realify(a) };
    let mut best: f64 = 0.0;
    for r in 0..a.rows() {
        let row = a.row(r);
        let pos: Vec<f64> = row.iter().copied().filter(|x| *x > 0.0).collect();
        let neg: Vec<f64> = row.iter().filter(|x| **x < 0.0).map(|x| -x).collect();
        let up = pos.iter().sum::<f64>() + top_sum(neg.clone(), s);
        let down = neg.iter().sum::<f64>() + top_sum(pos, s);
        best = best.max(up).max(down);
    }
    best
}

fn top_sum(mut v: Vec<f64>, s: usize) -> f64 {
    v.sort_by(|x, y| y.total_cmp(x));
    v.iter().take(s).sum()
}

/// Normalization constant for the given residual norm.
///
/// `l_inf` uses [`kappa_exact_inf`]. For `l1` the supremum of a convex
/// function is attained at a vertex `v in {-1,0,1}^N`, which is enumerated
/// for `N <= 14`; larger matrices fall back to [`kappa_sample`], a lower
/// bound.
pub fn kappa(a: &Matrix, s: usize, rnorm: Rnorm) -> Result<f64> {
    let a = if a.is_real() { a.clone() } else { realify(a) };
    match rnorm {
        Rnorm::Inf => Ok(kappa_exact_inf(&a, s)),
        Rnorm::L1 if a.cols() <= KAPPA_ENUM_MAX_N => Ok(kappa_vertices(&a, s, rnorm)),
        Rnorm::L1 => kappa_sample(&a, s, KAPPA_SAMPLES, 0, rnorm),
    }
}

fn kappa_vertices(a: &Matrix, s: usize, rnorm: Rnorm) -> f64 {
    let n = a.cols();
    let mut v = vec![0.0; n];
    let mut best: f64 = 0.0;
    let total = 3usize.pow(n as u32);
    for code in 0..total {
        let mut c = code;
        let mut negatives = 0;
        for x in v.iter_mut() {
            *x = (c % 3) as f64 - 1.0;
            negatives += (c % 3 == 0) as usize;
            c /= 3;
        }
        if negatives <= s {
            best = best.max(rnorm.norm(&a.mul_real(&v).expect("square dims")));
        }
    }
    best
}

/// Random admissible `v` with `||v||_inf = 1`: a random support of size `s`
/// may carry negative entries, the rest are non-negative. Each coordinate
/// lands on an extreme value with probability 1/2.
fn random_direction(rng: &mut ChaCha8Rng, n: usize, s: usize) -> Vec<f64> {
    loop {
        let t = sample(rng, n, s);
        let mut v = vec![0.0f64; n];
        for (i, x) in v.iter_mut().enumerate() {
            let lo = if t.iter().any(|j| j == i) { -1.0 } else { 0.0 };
            *x = if rng.random_bool(0.5) {
                match rng.random_range(0..3) {
                    0 => lo,
                    1 => 0.0,
                    _ => 1.0,
                }
            } else {
                rng.random_range(lo..=1.0)
            };
        }
        let scale = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if scale > 0.0 {
            v.iter_mut().for_each(|x| *x /= scale);
            return v;
        }
    }
}

/// Sampled upper bound on `tau`.
pub fn tau_sample(a: &Matrix, s: usize, trials: usize, seed: u64, rnorm: Rnorm) -> Result<f64> {
    tau_sample_with(a, s, trials, seed, rnorm, &[])
}

/// [`tau_sample`] with extra directions evaluated before the random ones.
/// Each forced direction must have at most `s` negative entries.
pub fn tau_sample_with(
    a: &Matrix,
    s: usize,
    trials: usize,
    seed: u64,
    rnorm: Rnorm,
    forced: &[Vec<f64>],
) -> Result<f64> {
    require_real(a)?;
    require_order(a, s)?;
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let n = a.cols();
    let mut best = f64::INFINITY;
    for v in forced {
        if v.len() != n {
            return Err(Error::DimensionMismatch(
                "forced sample must have N entries".into(),
            ));
        }
        if v.iter().filter(|x| **x < 0.0).count() > s {
            return Err(Error::InvalidArgument(format!(
                "forced sample has more than {s} negative entries"
            )));
        }
        let scale = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if scale == 0.0 {
            return Err(Error::InvalidArgument("forced sample is zero".into()));
        }
        let w: Vec<f64> = v.iter().map(|x| x / scale).collect();
        best = best.min(rnorm.norm(&a.mul_real(&w)?));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let v = random_direction(&mut rng, n, s);
        best = best.min(rnorm.norm(&a.mul_real(&v)?));
    }
    Ok(best)
}

/// Sampled lower bound on `kappa`.
pub fn kappa_sample(a: &Matrix, s: usize, trials: usize, seed: u64, rnorm: Rnorm) -> Result<f64> {
    require_real(a)?;
    require_order(a, s)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: f64 = 0.0;
    for _ in 0..trials {
        let v = random_direction(&mut rng, a.cols(), s);
        best = best.max(rnorm.norm(&a.mul_real(&v)?));
    }
    Ok(best)
}

/// Decide the signed kernel condition of order `s` via `tau > rel_tol * kappa`.
/// Complex matrices are realified first.
pub fn signed_kernel_check(
    a: &Matrix,
    s: usize,
    rnorm: Rnorm,
    rel_tol: f64,
) -> Result<CertifyReport> {
    let real = if a.is_real() { a.clone() } else { realify(a) };
    let mut report = tau_exact(&real, s, rnorm, false)?;
    report.verdict = report.tau > rel_tol * report.kappa;
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComplexityBound {
    pub value: f64,
    /// Set when `N <= 4S`; `value` is then `+inf`.
    pub vacuous: bool,
}

/// `2 (2/3)^(1/q) / (exp(S/(cM) ln(N/(4S))) - 1)` with `c = 2` over the
/// reals and `c = 4` over the complex numbers. Pass `q = f64::INFINITY`
/// for `q = inf`.
pub fn complexity_bound(
    s: usize,
    m: usize,
    n: usize,
    q: f64,
    field: Field,
) -> Result<ComplexityBound> {
    if q.is_nan() || q < 1.0 {
        return Err(Error::InvalidArgument(format!(
            "q = {q} must be at least 1"
        )));
    }
    if m == 0 || s == 0 {
        return Err(Error::InvalidArgument("S and M must be positive".into()));
    }
    if n <= 4 * s {
        return Ok(ComplexityBound {
            value: f64::INFINITY,
            vacuous: true,
        });
    }
    let c = match field {
        Field::Real => 2.0,
        Field::Complex => 4.0,
    };
    let exponent = s as f64 / (c * m as f64) * (n as f64 / (4.0 * s as f64)).ln();
    let value = 2.0 * (2.0f64 / 3.0).powf(1.0 / q) / exponent.exp_m1();
    Ok(ComplexityBound {
        value,
        vacuous: false,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult {
    pub matrix: Matrix,
    /// Best `tau` after each iteration, starting with the initial matrix.
    pub trace: Vec<f64>,
}

const SEARCH_PATIENCE: usize = 20;
const SEARCH_STEP: f64 = 0.5;

fn normalized(a: Matrix, s: usize, rnorm: Rnorm) -> Result<Matrix> {
    let k = kappa(&a, s, rnorm)?;
    if k > 0.0 {
        Ok(a.scaled(1.0 / k))
    } else {
        Ok(a)
    }
}

/// Random hill climb on `tau` over matrices with `kappa = 1`.
pub fn matrix_search(
    m: usize,
    n: usize,
    s: usize,
    iters: usize,
    seed: u64,
    rnorm: Rnorm,
) -> Result<SearchResult> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidArgument("M and N must be positive".into()));
    }
    if s > n {
        return Err(Error::InvalidArgument(format!("S = {s} exceeds N = {n}")));
    }
    let count = lp_count(n, s);
    if count > MAX_LPS {
        return Err(Error::SizeGuard(format!(
            "{count} LPs per evaluation exceeds {MAX_LPS}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gaussian = |rng: &mut ChaCha8Rng| -> Vec<f64> {
        (0..m * n)
            .map(|_| rng.sample::<f64, _>(StandardNormal))
            .collect()
    };
    let mut best = normalized(Matrix::real(m, n, gaussian(&mut rng))?, s, rnorm)?;
    let mut best_tau = tau_exact(&best, s, rnorm, false)?.tau;
    let mut trace = vec![best_tau];
    let mut step = SEARCH_STEP;
    let mut rejections = 0;
    for _ in 0..iters {
        let g = gaussian(&mut rng);
        let data: Vec<f64> = best
            .data()
            .iter()
            .zip(&g)
            .map(|(x, e)| x + step * e)
            .collect();
        let cand = normalized(Matrix::real(m, n, data)?, s, rnorm)?;
        let tau = tau_exact(&cand, s, rnorm, false)?.tau;
        if tau > best_tau {
            best = cand;
            best_tau = tau;
            rejections = 0;
        } else {
            rejections += 1;
            if rejections == SEARCH_PATIENCE {
                step /= 2.0;
                rejections = 0;
            }
        }
        trace.push(best_tau);
    }
    Ok(SearchResult {
        matrix: best,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{default_real_nodes, vandermonde_real};

    fn counterexample() -> Matrix {
        Matrix::from_rows(&[vec![1.0, 0.0, 1.0], vec![0.0, 1.0, 1.0]]).unwrap()
    }

    #[test]
    fn tau_of_identity() {
        for rnorm in [Rnorm::Inf, Rnorm::L1] {
            let r = tau_exact(&Matrix::identity(2), 1, rnorm, false).unwrap();
            assert!((r.tau - 1.0).abs() < 1e-12);
            assert_eq!(r.lp_count, 2 * 3);
            assert!(r.verdict);
            assert_eq!(r.d_robust, Some(2.0 / r.tau));
        }
    }

    #[test]
    fn tau_of_counterexample() {
        let r = tau_exact(&counterexample(), 1, Rnorm::Inf, true).unwrap();
        assert!(r.tau.abs() < 1e-12);
        assert!(!r.verdict);
        assert_eq!(r.d_robust, None);
        // kernel direction (1, 1, -1)
        let v = &r.witness.v;
        assert!(
            (v[0] - v[1]).abs() < 1e-12 && (v[0] + v[2]).abs() < 1e-12,
            "{v:?}"
        );
        assert_eq!(r.witness.support, vec![2]);
        assert_eq!(r.alpha_table.as_ref().unwrap().len(), r.lp_count);
    }

    #[test]
    fn tau_of_single_row() {
        let a = Matrix::from_rows(&[vec![1.0, 1.0]]).unwrap();
        let r = tau_exact(&a, 1, Rnorm::Inf, false).unwrap();
        assert!(r.tau.abs() < 1e-12);
        assert!((r.witness.v[0] + r.witness.v[1]).abs() < 1e-12);
        let r = tau_exact(&a, 0, Rnorm::Inf, false).unwrap();
        assert!((r.tau - 1.0).abs() < 1e-12);
    }

    #[test]
    fn kappa_examples() {
        assert_eq!(kappa_exact_inf(&Matrix::identity(2), 1), 1.0);
        let a = Matrix::from_rows(&[vec![1.0, -1.0]]).unwrap();
        assert_eq!(kappa_exact_inf(&a, 1), 2.0);
        assert_eq!(kappa_exact_inf(&a, 0), 1.0);
        assert_eq!(kappa(&a, 1, Rnorm::L1).unwrap(), 2.0);
    }

    #[test]
    fn verdicts() {
        let a = vandermonde_real(&default_real_nodes(3), 6).unwrap();
        assert!(
            signed_kernel_check(&a, 1, Rnorm::Inf, DEFAULT_REL_TOL)
                .unwrap()
                .verdict
        );
        assert!(
            !signed_kernel_check(&counterexample(), 1, Rnorm::Inf, DEFAULT_REL_TOL)
                .unwrap()
                .verdict
        );
        let sq = Matrix::from_rows(&[
            vec![2.0, 1.0, 0.0],
            vec![0.0, 1.0, -1.0],
            vec![1.0, 0.0, 3.0],
        ])
        .unwrap();
        for s in 0..=3 {
            assert!(
                signed_kernel_check(&sq, s, Rnorm::L1, DEFAULT_REL_TOL)
                    .unwrap()
                    .verdict
            );
        }
    }

    #[test]
    fn sampling_examples() {
        let t = tau_sample(&Matrix::identity(2), 1, 1000, 3, Rnorm::Inf).unwrap();
        assert!((t - 1.0).abs() < 1e-12);
        let t = tau_sample_with(
            &counterexample(),
            1,
            10,
            0,
            Rnorm::Inf,
            &[vec![1.0, 1.0, -1.0]],
        )
        .unwrap();
        assert_eq!(t, 0.0);
        assert!(tau_sample_with(
            &counterexample(),
            0,
            1,
            0,
            Rnorm::Inf,
            &[vec![1.0, 1.0, -1.0]]
        )
        .is_err());
        let a = counterexample();
        assert_eq!(
            tau_sample(&a, 1, 50, 9, Rnorm::L1).unwrap(),
            tau_sample(&a, 1, 50, 9, Rnorm::L1).unwrap()
        );
    }

    #[test]
    fn complexity_spot_values() {
        let b = complexity_bound(1, 3, 8, f64::INFINITY, Field::Real).unwrap();
        assert!((b.value - 2.0 / (2f64.powf(1.0 / 6.0) - 1.0)).abs() < 1e-12);
        assert!((b.value - 16.3316).abs() < 1e-3);
        let b = complexity_bound(1, 3, 16, f64::INFINITY, Field::Real).unwrap();
        assert!((b.value - 7.695).abs() < 1e-3);
        let b = complexity_bound(2, 3, 8, 2.0, Field::Complex).unwrap();
        assert!(b.vacuous && b.value.is_infinite());
        let qinf = complexity_bound(1, 3, 8, f64::INFINITY, Field::Real)
            .unwrap()
            .value;
        let q1 = complexity_bound(1, 3, 8, 1.0, Field::Real).unwrap().value;
        assert!((q1 - qinf * 2.0 / 3.0).abs() < 1e-12);
        // complex halves the exponent
        let c = complexity_bound(1, 3, 8, f64::INFINITY, Field::Complex)
            .unwrap()
            .value;
        assert!((c - 2.0 / (2f64.powf(1.0 / 12.0) - 1.0)).abs() < 1e-12);
        assert!(complexity_bound(1, 3, 8, 0.5, Field::Real).is_err());
    }

    #[test]
    fn search_basics() {
        let r = matrix_search(2, 3, 1, 0, 1, Rnorm::Inf).unwrap();
        assert_eq!(r.trace.len(), 1);
        assert!((kappa_exact_inf(&r.matrix, 1) - 1.0).abs() < 1e-12);
        let r = matrix_search(3, 4, 1, 30, 1, Rnorm::Inf).unwrap();
        assert_eq!(r.trace.len(), 31);
        assert!(r.trace.windows(2).all(|w| w[0] <= w[1]));
        let tau = tau_exact(&r.matrix, 1, Rnorm::Inf, false).unwrap().tau;
        assert_eq!(tau, *r.trace.last().unwrap());
    }

    #[test]
    fn guards() {
        let a = Matrix::real(1, 40, vec![1.0; 40]).unwrap();
        assert!(matches!(
            tau_exact(&a, 10, Rnorm::Inf, false),
            Err(Error::SizeGuard(_))
        ));
        assert!(tau_exact(&Matrix::identity(2), 3, Rnorm::Inf, false).is_err());
        let z = crate::construct::vandermonde_complex(2, 4, None, None).unwrap();
        assert!(tau_exact(&z, 1, Rnorm::Inf, false).is_err());
        assert!(signed_kernel_check(&z, 1, Rnorm::Inf, DEFAULT_REL_TOL).is_ok());
    }

    #[test]
    fn report_json_fields() {
        let r = tau_exact(&Matrix::identity(2), 1, Rnorm::Inf, false).unwrap();
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        for key in [
            "S", "rnorm", "tau", "kappa", "verdict", "witness", "lp_count", "D_robust",
        ] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["rnorm"], "inf");
        assert!(v["witness"]["sign"] == "+" || v["witness"]["sign"] == "-");
        assert!(v.get("alpha_table").is_none());
    }
}
