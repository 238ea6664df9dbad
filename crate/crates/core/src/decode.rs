//! Decoders for non-negative sparse vectors.
//!
//! All decoders are linear programs handed to [`crate::lp::solve`]:
//!
//! * [`nnlr`]: `argmin_{z >= 0} ||A z - y||` for the `l_inf` or `l1` residual,
//!   with one slack (`l_inf`) or one slack per row (`l1`);
//! * [`nn_basis_pursuit`]: `argmin sum(z)` subject to `A z = y`, `z >= 0`;
//! * [`l0_bruteforce`]: residual minimization over every support of size `S`;
//! * [`ones_certificate`]: a `v` with `A^T v = 1`, the condition under which
//!   NNLR and basis pursuit recover the same vectors.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{realify, Matrix, Rnorm, Vector};
use crate::lp::{solve, LpProblem, LpStatus, SolveOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum DecoderKind {
    Nnlr { rnorm: Rnorm },
    NnlrComplex,
    NnBasisPursuit,
    L0 { rnorm: Rnorm, nonneg: bool },
}

impl DecoderKind {
    pub fn name(self) -> &'static str {
        match self {
            DecoderKind::Nnlr { rnorm: Rnorm::Inf } => "nnlr_inf",
            DecoderKind::Nnlr { rnorm: Rnorm::L1 } => "nnlr_l1",
            DecoderKind::NnlrComplex => "nnlr_complex",
            DecoderKind::NnBasisPursuit => "nnbp",
            DecoderKind::L0 { .. } => "l0",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecodeResult {
    /// Empty unless `status` is optimal.
    pub estimate: Vec<f64>,
    /// `||A x# - y||` in the decoder's residual norm.
    pub residual_norm: f64,
    pub decoder: DecoderKind,
    pub status: LpStatus,
    pub iterations: usize,
}

impl DecodeResult {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

fn check_dims(a: &Matrix, y: &[f64]) -> Result<()> {
    if !a.is_real() {
        return Err(Error::FieldMismatch {
            expected: "real",
            found: "complex",
        });
    }
    if a.rows() != y.len() {
        return Err(Error::DimensionMismatch(format!(
            "matrix has {} rows, measurement has length {}",
            a.rows(),
            y.len()
        )));
    }
    Ok(())
}

/// Clamp tiny negative entries to zero; anything below `-feas_tol` is a fault.
fn clean_nonneg(mut z: Vec<f64>, feas_tol: f64) -> Result<Vec<f64>> {
    for (i, v) in z.iter_mut().enumerate() {
        if *v < -feas_tol {
            return Err(Error::Solver(format!(
                "estimate entry {i} = {v} is negative"
            )));
        }
        if *v < 0.0 {
            *v = 0.0;
        }
    }
    Ok(z)
}

fn residual(a: &Matrix, z: &[f64], y: &[f64], rnorm: Rnorm) -> f64 {
    let az = a.mul_real(z).expect("dimensions checked by caller");
    let r: Vec<f64> = az.iter().zip(y).map(|(p, q)| p - q).collect();
    rnorm.norm(&r)
}

/// Residual-minimization LP over the columns in `cols`.
///
/// Variables are `z_cols` followed by the residual slacks.
fn residual_lp(a: &Matrix, y: &[f64], cols: &[usize], rnorm: Rnorm, nonneg: bool) -> LpProblem {
    let m = a.rows();
    let k = cols.len();
    let slacks = match rnorm {
        Rnorm::Inf => 1,
        Rnorm::L1 => m,
    };
    let mut p = LpProblem::new(k + slacks);
    let mut c = vec![0.0; k + slacks];
    c[k..].iter_mut().for_each(|x| *x = 1.0);
    p.set_objective(c);
    for j in 0..k {
        if nonneg {
            p.set_bounds(j, 0.0, f64::INFINITY);
        }
    }
    for j in k..k + slacks {
        p.set_bounds(j, 0.0, f64::INFINITY);
    }
    for (r, &yr) in y.iter().enumerate() {
        let row = a.row(r);
        let slack = match rnorm {
            Rnorm::Inf => k,
            Rnorm::L1 => k + r,
        };
        let mut plus = vec![0.0; k + slacks];
        let mut minus = vec![0.0; k + slacks];
        for (j, &col) in cols.iter().enumerate() {
            plus[j] = row[col];
            minus[j] = -row[col];
        }
        plus[slack] = -1.0;
        minus[slack] = -1.0;
        p.add_le(plus, yr);
        p.add_le(minus, -yr);
    }
    p
}

/// Non-negative least residual: `argmin_{z >= 0} ||A z - y||_rnorm`.
pub fn nnlr(a: &Matrix, y: &[f64], rnorm: Rnorm) -> Result<DecodeResult> {
    nnlr_with(a, y, rnorm, &SolveOptions::default())
}

pub fn nnlr_with(a: &Matrix, y: &[f64], rnorm: Rnorm, opts: &SolveOptions) -> Result<DecodeResult> {
    check_dims(a, y)?;
    let n = a.cols();
    let cols: Vec<usize> = (0..n).collect();
    let lp = residual_lp(a, y, &cols, rnorm, true);
    let sol = solve(&lp, opts)?;
    match sol.status {
        LpStatus::Optimal => {}
        // z = 0 is always feasible and the objective is bounded below by zero
        other => {
            return Err(Error::Solver(format!(
                "NNLR linear program ended with status {}",
                other.name()
            )))
        }
    }
    let w = sol.point.expect("optimal solutions carry a point");
    let z = clean_nonneg(w[..n].to_vec(), opts.feas_tol)?;
    Ok(DecodeResult {
        residual_norm: residual(a, &z, y, rnorm),
        estimate: z,
        decoder: DecoderKind::Nnlr { rnorm },
        status: sol.status,
        iterations: sol.iterations,
    })
}

/// NNLR for complex data via realification. The residual norm on `C^M` is
/// `v -> max(||Re v||_inf, ||Im v||_inf)`.
pub fn nnlr_complex(a: &Matrix, y: &Vector) -> Result<DecodeResult> {
    if a.rows() != y.len() {
        return Err(Error::DimensionMismatch(format!(
            "matrix has {} rows, measurement has length {}",
            a.rows(),
            y.len()
        )));
    }
    let ar = realify(a);
    let yr: Vec<f64> = if a.is_real() {
        match y.as_real() {
            Some(v) => v.to_vec(),
            None => {
                return Err(Error::FieldMismatch {
                    expected: "real",
                    found: "complex",
                })
            }
        }
    } else {
        let e = y.entries();
        e.iter()
            .map(|z| z.re)
            .chain(e.iter().map(|z| z.im))
            .collect()
    };
    let mut res = nnlr(&ar, &yr, Rnorm::Inf)?;
    res.decoder = DecoderKind::NnlrComplex;
    Ok(res)
}

/// Non-negative basis pursuit: `argmin sum(z)` subject to `A z = y`, `z >= 0`.
/// Returns an `infeasible` status when `y` has no non-negative preimage.
pub fn nn_basis_pursuit(a: &Matrix, y: &[f64]) -> Result<DecodeResult> {
    check_dims(a, y)?;
    let opts = SolveOptions::default();
    let n = a.cols();
    let mut p = LpProblem::new(n);
    p.set_objective(vec![1.0; n]);
    for j in 0..n {
        p.set_bounds(j, 0.0, f64::INFINITY);
    }
    for (r, &yr) in y.iter().enumerate() {
        p.add_eq(a.row(r).to_vec(), yr);
    }
    let sol = solve(&p, &opts)?;
    let decoder = DecoderKind::NnBasisPursuit;
    match sol.status {
        LpStatus::Optimal => {
            let z = clean_nonneg(sol.point.expect("optimal point"), opts.feas_tol)?;
            Ok(DecodeResult {
                residual_norm: residual(a, &z, y, Rnorm::Inf),
                estimate: z,
                decoder,
                status: sol.status,
                iterations: sol.iterations,
            })
        }
        LpStatus::Infeasible => Ok(DecodeResult {
            estimate: Vec::new(),
            residual_norm: f64::NAN,
            decoder,
            status: sol.status,
            iterations: sol.iterations,
        }),
        other => Err(Error::Solver(format!(
            "basis pursuit linear program ended with status {}",
            other.name()
        ))),
    }
}

/// Largest number of supports [`l0_bruteforce`] will enumerate.
pub const L0_MAX_SUPPORTS: usize = 100_000;

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn supports(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] < n - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Brute-force `l0`-constrained residual minimization over all supports of
/// size `s`; ties go to the lexicographically smallest support.
///
/// With the `l_inf` residual the minimizer on the winning support is in
/// general not unique; among the minimizers the one with the smallest `l1`
/// residual is returned.
pub fn l0_bruteforce(
    a: &Matrix,
    y: &[f64],
    s: usize,
    rnorm: Rnorm,
    nonneg: bool,
) -> Result<DecodeResult> {
    check_dims(a, y)?;
    let n = a.cols();
    if s > n {
        return Err(Error::InvalidArgument(format!("S = {s} exceeds N = {n}")));
    }
    let count = crate::construct::binomial(n, s);
    if count > L0_MAX_SUPPORTS {
        return Err(Error::SizeGuard(format!(
            "C({n},{s}) = {count} supports exceeds {L0_MAX_SUPPORTS}"
        )));
    }
    let decoder = DecoderKind::L0 { rnorm, nonneg };
    if s == 0 {
        return Ok(DecodeResult {
            estimate: vec![0.0; n],
            residual_norm: rnorm.norm(y),
            decoder,
            status: LpStatus::Optimal,
            iterations: 0,
        });
    }
    let opts = SolveOptions::default();
    let all = supports(n, s);
    let solved: Vec<Result<(f64, usize)>> = all
        .par_iter()
        .map(|cols| {
            let sol = solve(&residual_lp(a, y, cols, rnorm, nonneg), &opts)?;
            match sol.status {
                LpStatus::Optimal => Ok((sol.objective, sol.iterations)),
                other => Err(Error::Solver(format!(
                    "support {cols:?}: status {}",
                    other.name()
                ))),
            }
        })
        .collect();

    let mut best: Option<(usize, f64)> = None;
    let mut iterations = 0;
    for (i, r) in solved.into_iter().enumerate() {
        let (obj, it) = r?;
        iterations += it;
        let better = match best {
            None => true,
            Some((_, b)) => obj < b - 1e-12 * (1.0 + b.abs()),
        };
        if better {
            best = Some((i, obj));
        }
    }
    let (winner, obj) = best.expect("at least one support");
    let cols = &all[winner];

    let mut lp = residual_lp(a, y, cols, rnorm, nonneg);
    if rnorm == Rnorm::Inf {
        // second stage: smallest l1 residual among the l_inf minimizers
        lp = refine_chebyshev(a, y, cols, nonneg, obj);
    }
    let sol = solve(&lp, &opts)?;
    if sol.status != LpStatus::Optimal {
        return Err(Error::Solver(format!(
            "support {cols:?}: status {}",
            sol.status.name()
        )));
    }
    iterations += sol.iterations;
    let w = sol.point.expect("optimal point");
    let mut z = vec![0.0; n];
    for (j, &c) in cols.iter().enumerate() {
        z[c] = w[j];
    }
    if nonneg {
        z = clean_nonneg(z, opts.feas_tol)?;
    }
    Ok(DecodeResult {
        residual_norm: residual(a, &z, y, rnorm),
        estimate: z,
        decoder,
        status: LpStatus::Optimal,
        iterations,
    })
}

/// `min sum_m t_m` subject to `|(A z - y)_m| <= t_m <= cap`.
fn refine_chebyshev(a: &Matrix, y: &[f64], cols: &[usize], nonneg: bool, best: f64) -> LpProblem {
    let mut p = residual_lp(a, y, cols, Rnorm::L1, nonneg);
    let cap = best + 1e-12 * (1.0 + best.abs());
    for j in cols.len()..p.num_vars {
        p.set_bounds(j, 0.0, cap);
    }
    p
}

/// A `v` with `A^T v = 1_N`, if one exists.
pub fn ones_certificate(a: &Matrix) -> Result<Option<Vec<f64>>> {
    if !a.is_real() {
        return Err(Error::FieldMismatch {
            expected: "real",
            found: "complex",
        });
    }
    let (m, n) = (a.rows(), a.cols());
    let mut p = LpProblem::new(m);
    for c in 0..n {
        p.add_eq((0..m).map(|r| a.get(r, c)).collect(), 1.0);
    }
    let sol = solve(&p, &SolveOptions::default())?;
    match sol.status {
        LpStatus::Optimal => Ok(sol.point),
        LpStatus::Infeasible => Ok(None),
        other => Err(Error::Solver(format!(
            "certificate linear program ended with status {}",
            other.name()
        ))),
    }
}

/// Whether `{x} = argmin_{z >= 0} ||A z - A x||`, i.e. `x` is the only
/// non-negative preimage of `A x`. Independent of the residual norm.
///
/// Each coordinate is minimized and maximized over `{z >= 0 : A z = A x}`;
/// the preimage is unique iff every range collapses to `x_n` within `tol`.
pub fn nonneg_preimage_is_unique(a: &Matrix, x: &[f64], tol: f64) -> Result<bool> {
    if !a.is_real() {
        return Err(Error::FieldMismatch {
            expected: "real",
            found: "complex",
        });
    }
    if x.len() != a.cols() {
        return Err(Error::DimensionMismatch("x must have N entries".into()));
    }
    let y = a.mul_real(x)?;
    let n = a.cols();
    let opts = SolveOptions::default();
    for j in 0..n {
        for sign in [1.0, -1.0] {
            let mut p = LpProblem::new(n);
            let mut c = vec![0.0; n];
            c[j] = sign;
            p.set_objective(c);
            for i in 0..n {
                p.set_bounds(i, 0.0, f64::INFINITY);
            }
            for (r, &yr) in y.iter().enumerate() {
                p.add_eq(a.row(r).to_vec(), yr);
            }
            let sol = solve(&p, &opts)?;
            match sol.status {
                LpStatus::Optimal => {
                    let v = sol.point.expect("optimal point")[j];
                    if (v - x[j]).abs() > tol * (1.0 + x[j].abs()) {
                        return Ok(false);
                    }
                }
                LpStatus::Unbounded => return Ok(false),
                other => {
                    return Err(Error::Solver(format!(
                        "uniqueness probe ended with status {}",
                        other.name()
                    )))
                }
            }
        }
    }
    Ok(true)
}
