//! Config-driven recovery campaigns with CSV output.
//!
//! A campaign certifies one matrix, then sweeps supports, trials and noise
//! levels, decoding every instance with each requested decoder and checking
//! the error against the robustness/stability bound.

use std::collections::BTreeSet;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::certify::{signed_kernel_check, CertifyReport, DEFAULT_REL_TOL};
use crate::construct::{binomial, ConstructionSpec};
use crate::decode::{l0_bruteforce, nn_basis_pursuit, nnlr, supports, DecodeResult};
use crate::error::{Error, Result};
use crate::linalg::{best_s_term_distance_inf, norm_inf, realify, Matrix, Rnorm};

/// Supports are enumerated exhaustively up to this count, sampled beyond.
pub const MAX_SUPPORTS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecoderName {
    NnlrInf,
    NnlrL1,
    Nnbp,
    L0,
}

impl DecoderName {
    pub fn name(self) -> &'static str {
        match self {
            DecoderName::NnlrInf => "nnlr_inf",
            DecoderName::NnlrL1 => "nnlr_l1",
            DecoderName::Nnbp => "nnbp",
            DecoderName::L0 => "l0",
        }
    }

    /// Residual norm the decoder minimizes and its error bound is stated in.
    pub fn rnorm(self) -> Rnorm {
        match self {
            DecoderName::NnlrL1 => Rnorm::L1,
            _ => Rnorm::Inf,
        }
    }

    fn has_bound(self) -> bool {
        matches!(self, DecoderName::NnlrInf | DecoderName::NnlrL1)
    }
}

fn default_trials() -> usize {
    1
}

fn default_eps() -> Vec<f64> {
    vec![0.0]
}

/// One campaign. Exactly one of `construction` and `matrix` must be given;
/// complex matrices are realified.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub construction: Option<ConstructionSpec>,
    #[serde(default)]
    pub matrix: Option<PathBuf>,
    #[serde(rename = "S")]
    pub s: usize,
    pub decoders: Vec<DecoderName>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    /// Range of the non-zero entries of the sparse part of `x`.
    pub magnitude: (f64, f64),
    /// `l_inf` norms of the noise vector.
    #[serde(default = "default_eps")]
    pub eps: Vec<f64>,
    /// Off-support entries of `x` are drawn from `[0, tail]`.
    #[serde(default)]
    pub tail: f64,
    /// Draw this many random supports instead of the default sweep.
    #[serde(default)]
    pub support_samples: Option<usize>,
    pub seed: u64,
    #[serde(default)]
    pub output: Option<PathBuf>,
    /// Fill the `ms` column with wall time; off by default so reruns are
    /// byte-identical.
    #[serde(default)]
    pub record_time: bool,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn read_from(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Config(m.to_string()));
        match (&self.construction, &self.matrix) {
            (Some(_), Some(_)) => return bad("give either `construction` or `matrix`, not both"),
            (None, None) => return bad("one of `construction` or `matrix` is required"),
            _ => {}
        }
        if self.decoders.is_empty() {
            return bad("`decoders` is empty");
        }
        if self.decoders.iter().collect::<BTreeSet<_>>().len() != self.decoders.len() {
            return bad("`decoders` has duplicates");
        }
        if self.trials == 0 {
            return bad("`trials` must be at least 1");
        }
        let (lo, hi) = self.magnitude;
        if !(lo > 0.0 && lo <= hi && hi.is_finite()) {
            return bad("`magnitude` must satisfy 0 < lo <= hi");
        }
        if self.eps.is_empty() || self.eps.iter().any(|e| !(e.is_finite() && *e >= 0.0)) {
            return bad("`eps` must be a non-empty list of finite values >= 0");
        }
        if !(self.tail.is_finite() && self.tail >= 0.0) {
            return bad("`tail` must be finite and >= 0");
        }
        if self.support_samples == Some(0) {
            return bad("`support_samples` must be at least 1");
        }
        Ok(())
    }

    fn load_matrix(&self) -> Result<Matrix> {
        let a = match (&self.construction, &self.matrix) {
            (Some(spec), _) => spec.build()?,
            (None, Some(path)) => Matrix::read_from(path)?,
            (None, None) => unreachable!("validated"),
        };
        Ok(if a.is_real() { a } else { realify(&a) })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub support: Vec<usize>,
    pub eps: f64,
    pub decoder: DecoderName,
    pub err_inf: f64,
    pub residual: f64,
    pub tau: f64,
    pub kappa: f64,
    pub bound: f64,
    pub recovered: bool,
    pub status: String,
    pub ms: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct SuiteOutcome {
    pub records: Vec<TrialRecord>,
    /// Certificates by residual norm, `None` when certification failed.
    pub certificates: Vec<(Rnorm, Option<CertifyReport>)>,
    /// Rows of a certified matrix whose error exceeds the bound.
    pub violations: usize,
}

/// `splitmix64` finalizer over `(seed, index)`.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn check_magnitudes(lo: f64, hi: f64) -> Result<()> {
    if lo > 0.0 && lo <= hi && hi.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "magnitude range [{lo}, {hi}] must satisfy 0 < lo <= hi"
        )))
    }
}

fn fill_support(rng: &mut ChaCha8Rng, x: &mut [f64], support: &[usize], lo: f64, hi: f64) {
    for &i in support {
        x[i] = rng.random_range(lo..=hi);
    }
}

/// Non-negative `s`-sparse vector with a uniform random support and
/// entries uniform in `[lo, hi]`.
pub fn gen_sparse_signal(n: usize, s: usize, seed: u64, lo: f64, hi: f64) -> Result<Vec<f64>> {
    if s > n {
        return Err(Error::InvalidArgument(format!("S = {s} exceeds N = {n}")));
    }
    check_magnitudes(lo, hi)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut support = sample(&mut rng, n, s).into_vec();
    support.sort_unstable();
    let mut x = vec![0.0; n];
    fill_support(&mut rng, &mut x, &support, lo, hi);
    Ok(x)
}

/// Random noise vector of length `m` with `||e||_rnorm = eps`.
pub fn gen_noise(m: usize, eps: f64, seed: u64, rnorm: Rnorm) -> Result<Vec<f64>> {
    if !(eps.is_finite() && eps >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "noise level {eps} must be >= 0"
        )));
    }
    if eps == 0.0 || m == 0 {
        return Ok(vec![0.0; m]);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let e: Vec<f64> = (0..m).map(|_| rng.sample(StandardNormal)).collect();
        let norm = rnorm.norm(&e);
        if norm > 0.0 {
            return Ok(e.iter().map(|v| v * eps / norm).collect());
        }
    }
}

/// `count` supports drawn independently, in draw order.
pub fn random_supports(n: usize, s: usize, count: usize, seed: u64) -> Vec<Vec<usize>> {
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, u64::MAX - 1));
    (0..count)
        .map(|_| {
            let mut t = sample(&mut rng, n, s).into_vec();
            t.sort_unstable();
            t
        })
        .collect()
}

/// Supports swept by a campaign: all of them when there are at most
/// [`MAX_SUPPORTS`], otherwise a seeded sample of that many distinct ones.
pub fn campaign_supports(n: usize, s: usize, seed: u64) -> Vec<Vec<usize>> {
    if binomial(n, s) <= MAX_SUPPORTS {
        return supports(n, s);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, u64::MAX));
    let mut picked = BTreeSet::new();
    while picked.len() < MAX_SUPPORTS {
        let mut t = sample(&mut rng, n, s).into_vec();
        t.sort_unstable();
        picked.insert(t);
    }
    picked.into_iter().collect()
}

struct Instance {
    trial: usize,
    support: Vec<usize>,
    eps: f64,
    seed: u64,
}

struct Certified {
    tau: f64,
    kappa: f64,
    verdict: bool,
}

fn run_decoder(a: &Matrix, y: &[f64], s: usize, decoder: DecoderName) -> Result<DecodeResult> {
    match decoder {
        DecoderName::NnlrInf => nnlr(a, y, Rnorm::Inf),
        DecoderName::NnlrL1 => nnlr(a, y, Rnorm::L1),
        DecoderName::Nnbp => nn_basis_pursuit(a, y),
        DecoderName::L0 => l0_bruteforce(a, y, s, Rnorm::Inf, true),
    }
}

/// Run one campaign; writes the CSV when `cfg.output` is set.
pub fn run_recovery_suite(cfg: &ExperimentConfig) -> Result<SuiteOutcome> {
    cfg.validate()?;
    let a = cfg.load_matrix()?;
    let (m, n) = (a.rows(), a.cols());
    if cfg.s > n {
        return Err(Error::Config(format!("S = {} exceeds N = {n}", cfg.s)));
    }
    let started = Instant::now();

    let mut norms: Vec<Rnorm> = cfg.decoders.iter().map(|d| d.rnorm()).collect();
    norms.sort_by_key(|r| r.name());
    norms.dedup();
    let certificates: Vec<(Rnorm, Option<CertifyReport>)> = norms
        .iter()
        .map(|&r| (r, signed_kernel_check(&a, cfg.s, r, DEFAULT_REL_TOL).ok()))
        .collect();
    let certified = |r: Rnorm| -> Certified {
        match certificates
            .iter()
            .find(|(k, _)| *k == r)
            .and_then(|(_, c)| c.as_ref())
        {
            Some(c) => Certified {
                tau: c.tau,
                kappa: c.kappa,
                verdict: c.verdict,
            },
            None => Certified {
                tau: f64::NAN,
                kappa: f64::NAN,
                verdict: false,
            },
        }
    };

    let mut instances = Vec::new();
    let swept = match cfg.support_samples {
        Some(k) => random_supports(n, cfg.s, k, cfg.seed),
        None => campaign_supports(n, cfg.s, cfg.seed),
    };
    for support in swept {
        for _ in 0..cfg.trials {
            for &eps in &cfg.eps {
                let trial = instances.len();
                instances.push(Instance {
                    trial,
                    support: support.clone(),
                    eps,
                    seed: derive_seed(cfg.seed, trial as u64),
                });
            }
        }
    }

    let (lo, hi) = cfg.magnitude;
    let mut records: Vec<TrialRecord> = instances
        .par_iter()
        .flat_map_iter(|inst| {
            let mut rng = ChaCha8Rng::seed_from_u64(inst.seed);
            let mut x = vec![0.0; n];
            if cfg.tail > 0.0 {
                x.iter_mut()
                    .for_each(|v| *v = rng.random_range(0.0..=cfg.tail));
            }
            fill_support(&mut rng, &mut x, &inst.support, lo, hi);
            // the noise scale is fixed in l_inf; other norms see its actual size
            let e = gen_noise(m, inst.eps, derive_seed(inst.seed, 1), Rnorm::Inf)
                .expect("validated noise level");
            let ax = a.mul_real(&x).expect("dimensions match");
            let y: Vec<f64> = ax.iter().zip(&e).map(|(p, q)| p + q).collect();
            let sigma = best_s_term_distance_inf(&x, cfg.s).expect("x is non-negative");
            let threshold = 1e-5 * (1.0 + norm_inf(&x));
            let exact = inst.eps == 0.0 && cfg.tail == 0.0;

            cfg.decoders
                .iter()
                .map(|&decoder| {
                    let t0 = Instant::now();
                    let out = run_decoder(&a, &y, cfg.s, decoder);
                    let ms = t0.elapsed().as_secs_f64() * 1e3;
                    let c = certified(decoder.rnorm());
                    let noise = decoder.rnorm().norm(&e);
                    let bound = if c.tau > 0.0 {
                        (1.0 + c.kappa / c.tau) * sigma + 2.0 / c.tau * noise
                    } else {
                        f64::INFINITY
                    };
                    let (err_inf, residual, status) = match &out {
                        Ok(r) if r.is_optimal() => {
                            let err = r.estimate.iter().zip(&x).map(|(p, q)| (p - q).abs());
                            (
                                err.fold(0.0, f64::max),
                                r.residual_norm,
                                r.status.name().to_string(),
                            )
                        }
                        Ok(r) => (f64::NAN, f64::NAN, r.status.name().to_string()),
                        Err(err) => (f64::NAN, f64::NAN, format!("error: {err}")),
                    };
                    let recovered = if exact {
                        err_inf <= threshold
                    } else {
                        err_inf <= bound + 1e-6
                    };
                    TrialRecord {
                        trial: inst.trial,
                        support: inst.support.clone(),
                        eps: inst.eps,
                        decoder,
                        err_inf,
                        residual,
                        tau: c.tau,
                        kappa: c.kappa,
                        bound,
                        recovered,
                        status,
                        ms: cfg.record_time.then_some(ms),
                    }
                })
                .collect::<Vec<_>>()
        })
        .collect();
    records.sort_by(|p, q| (p.trial, p.decoder.name()).cmp(&(q.trial, q.decoder.name())));

    let violations = records
        .iter()
        .filter(|r| r.decoder.has_bound() && certified(r.decoder.rnorm()).verdict && !r.recovered)
        .count();

    if let Some(path) = &cfg.output {
        let mut file = std::fs::File::create(path)?;
        let stamp = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        writeln!(
            file,
            "# nnrecover {} unix_time={stamp} wall_ms={:.0}",
            env!("CARGO_PKG_VERSION"),
            started.elapsed().as_secs_f64() * 1e3
        )?;
        write_csv(&records, &mut file)?;
    }

    Ok(SuiteOutcome {
        records,
        certificates,
        violations,
    })
}

fn fmt_f64(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{v}")
    }
}

/// CSV header row and one line per record; no comment lines.
pub fn write_csv(records: &[TrialRecord], out: impl Write) -> Result<()> {
    let io = |e: csv::Error| Error::Io(e.to_string());
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "trial",
        "support",
        "eps",
        "decoder",
        "err_inf",
        "residual",
        "tau",
        "kappa",
        "bound",
        "recovered",
        "status",
        "ms",
    ])
    .map_err(io)?;
    for r in records {
        let support: Vec<String> = r.support.iter().map(|i| i.to_string()).collect();
        w.write_record([
            r.trial.to_string(),
            support.join(";"),
            fmt_f64(r.eps),
            r.decoder.name().to_string(),
            fmt_f64(r.err_inf),
            fmt_f64(r.residual),
            fmt_f64(r.tau),
            fmt_f64(r.kappa),
            fmt_f64(r.bound),
            r.recovered.to_string(),
            r.status.clone(),
            r.ms.map(fmt_f64).unwrap_or_default(),
        ])
        .map_err(io)?;
    }
    w.flush()?;
    Ok(())
}

/// The CSV text without leading `#` comment lines.
pub fn csv_body(text: &str) -> String {
    text.lines()
        .skip_while(|l| l.starts_with('#'))
        .map(|l| format!("{l}\n"))
        .collect()
}
