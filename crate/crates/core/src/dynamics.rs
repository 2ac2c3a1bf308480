//! Continuous-time quantum walk on the path: transition amplitudes through
//! the closed-form spectrum, high-fidelity time search, and an independent
//! dense matrix-exponential oracle.
//!
//! The walk existence statement is qualitative (good times exist for every
//! epsilon, with no bound on how large they are), so the search here is
//! explicitly budgeted: it distinguishes "achieved within budget" from "not
//! achieved within budget" and never claims transfer is impossible. Truth
//! claims belong to the classifier and the certificates.

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::render::f64_sig17;
use crate::spectra::{spectrum, PathPair, PathSpectrum, SpectraError};

/// Targeted fidelity change between adjacent grid samples; the grid step is
/// this over the Lipschitz bound.
pub const TOL_STEP: f64 = 0.05;

/// Fidelity may exceed 1 by at most this much before it is an error rather
/// than roundoff.
pub const CLAMP_SLACK: f64 = 1e-12;

/// Default cap on fidelity evaluations per search.
pub const DEFAULT_EVAL_CAP: u64 = 100_000_000;

/// Grid indices per scan work unit. Fixed (not worker-dependent) so that
/// results are bitwise independent of the thread count.
const SCAN_CHUNK: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq)]
pub enum DynamicsError {
    Spectra(SpectraError),
    NonFiniteTime { t: f64 },
    /// Search parameter outside its documented range.
    InvalidSearchParameter { name: &'static str, value: f64 },
    /// Fidelity exceeded 1 beyond [`CLAMP_SLACK`]; indicates a bug, never
    /// silently clamped.
    ClampViolation { fidelity: f64 },
    /// The scan would exceed the evaluation cap; carries the partial trace
    /// for the prefix that was scanned.
    BudgetExceeded { partial: Box<FidelityTrace> },
    /// Oracle restricted to n <= 16.
    OracleSizeCap { n: u64 },
    /// Oracle restricted to |t| <= 100.
    OracleTimeCap { t: f64 },
}

impl fmt::Display for DynamicsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DynamicsError::Spectra(e) => e.fmt(f),
            DynamicsError::NonFiniteTime { t } => write!(f, "time {t} is not finite"),
            DynamicsError::InvalidSearchParameter { name, value } => {
                write!(f, "search parameter {name} = {value} outside its valid range")
            }
            DynamicsError::ClampViolation { fidelity } => {
                write!(f, "fidelity {fidelity} exceeds 1 beyond roundoff slack")
            }
            DynamicsError::BudgetExceeded { partial } => write!(
                f,
                "evaluation budget exhausted after {} samples (scanned up to t = {})",
                partial.evaluations,
                partial.samples.last().map_or(0.0, |s| s.0)
            ),
            DynamicsError::OracleSizeCap { n } => {
                write!(f, "matrix-exponential oracle supports n <= 16, got {n}")
            }
            DynamicsError::OracleTimeCap { t } => {
                write!(f, "matrix-exponential oracle supports |t| <= 100, got {t}")
            }
        }
    }
}

impl std::error::Error for DynamicsError {}

impl From<SpectraError> for DynamicsError {
    fn from(e: SpectraError) -> Self {
        DynamicsError::Spectra(e)
    }
}

/// Precomputed eigendata for one vertex pair: amplitude and fidelity
/// evaluations cost O(n) with no further allocation.
#[derive(Debug, Clone)]
pub struct PairDynamics {
    pair: PathPair,
    thetas: Vec<f64>,
    weights: Vec<f64>,
    lipschitz: f64,
}

impl PairDynamics {
    pub fn new(n: u64, a: u64, b: u64) -> Result<Self, DynamicsError> {
        let pair = PathPair::new(n, a, b)?;
        let spec: PathSpectrum = spectrum(n)?;
        let mut thetas = Vec::with_capacity(n as usize);
        let mut weights = Vec::with_capacity(n as usize);
        let mut lipschitz = 0.0;
        for j in 1..=n {
            let theta = spec.eigenvalue(j);
            let w = spec.projector_entry(j, a, b);
            lipschitz += theta.abs() * w.abs();
            thetas.push(theta);
            weights.push(w);
        }
        Ok(PairDynamics {
            pair,
            thetas,
            weights,
            lipschitz: 2.0 * lipschitz,
        })
    }

    pub fn pair(&self) -> PathPair {
        self.pair
    }

    /// Upper bound on |d fidelity / dt|: `2 sum_j |theta_j| |E_j(a,b)|`.
    pub fn lipschitz_bound(&self) -> f64 {
        self.lipschitz
    }

    /// `sum_j exp(i theta_j t) E_j(a, b)`.
    pub fn amplitude(&self, t: f64) -> Result<Complex64, DynamicsError> {
        if !t.is_finite() {
            return Err(DynamicsError::NonFiniteTime { t });
        }
        let mut re = 0.0;
        let mut im = 0.0;
        for (theta, w) in self.thetas.iter().zip(&self.weights) {
            let (s, c) = (theta * t).sin_cos();
            re += w * c;
            im += w * s;
        }
        Ok(Complex64::new(re, im))
    }

    /// Squared amplitude modulus, clamped into [0, 1] when the overshoot is
    /// attributable to roundoff.
    pub fn fidelity(&self, t: f64) -> Result<f64, DynamicsError> {
        let amp = self.amplitude(t)?;
        clamp_fidelity(amp.norm_sqr())
    }

    /// Unclamped squared modulus; assumes finite `t`.
    fn raw_fidelity(&self, t: f64) -> f64 {
        let mut re = 0.0;
        let mut im = 0.0;
        for (theta, w) in self.thetas.iter().zip(&self.weights) {
            let (s, c) = (theta * t).sin_cos();
            re += w * c;
            im += w * s;
        }
        re * re + im * im
    }
}

fn clamp_fidelity(raw: f64) -> Result<f64, DynamicsError> {
    if raw > 1.0 + CLAMP_SLACK {
        Err(DynamicsError::ClampViolation { fidelity: raw })
    } else {
        Ok(raw.min(1.0))
    }
}

/// Transition amplitude `e_a^T exp(itA) e_b` on the path of `n` vertices.
pub fn amplitude(n: u64, a: u64, b: u64, t: f64) -> Result<Complex64, DynamicsError> {
    PairDynamics::new(n, a, b)?.amplitude(t)
}

/// Transfer fidelity `|e_a^T exp(itA) e_b|^2`.
pub fn fidelity(n: u64, a: u64, b: u64, t: f64) -> Result<f64, DynamicsError> {
    PairDynamics::new(n, a, b)?.fidelity(t)
}

/// Search configuration; `epsilon` and `t_max` are the knobs of interest,
/// the rest bound the work and the retained trace.
#[derive(Debug, Clone)]
pub struct SearchConfig {
    /// Target gap to perfect fidelity, in (0, 1).
    pub epsilon: f64,
    /// Scan horizon, > 0.
    pub t_max: f64,
    /// Hard cap on fidelity evaluations.
    pub eval_cap: u64,
    /// Maximum number of samples kept in the returned trace (the scan is
    /// decimated to at most this many rows).
    pub trace_samples: usize,
    /// Number of grid maxima refined by ternary search.
    pub refine_peaks: usize,
    /// Ternary-search bracket width at which refinement stops.
    pub time_resolution: f64,
}

impl SearchConfig {
    pub fn new(epsilon: f64, t_max: f64) -> Self {
        SearchConfig {
            epsilon,
            t_max,
            eval_cap: DEFAULT_EVAL_CAP,
            trace_samples: 2001,
            refine_peaks: 8,
            time_resolution: 1e-9,
        }
    }
}

/// Sampled fidelity trace with the best time found.
#[derive(Debug, Clone, PartialEq)]
pub struct FidelityTrace {
    pub pair: PathPair,
    /// Decimated `(time, fidelity)` rows, sorted by time.
    pub samples: Vec<(f64, f64)>,
    pub best_time: f64,
    pub best_fidelity: f64,
    /// Whether `best_fidelity >= 1 - epsilon` within the budget.
    pub achieved: bool,
    pub epsilon: f64,
    pub t_max: f64,
    pub grid_step: f64,
    /// Total fidelity evaluations spent.
    pub evaluations: u64,
}

impl FidelityTrace {
    /// CSV rendering: header `t,fidelity`, 17 significant digits per field.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(self.samples.len() * 44 + 16);
        out.push_str("t,fidelity\n");
        for (t, f) in &self.samples {
            out.push_str(&f64_sig17(*t));
            out.push(',');
            out.push_str(&f64_sig17(*f));
            out.push('\n');
        }
        out
    }
}

/// Scans `[0, t_max]` for the highest transfer fidelity between `a` and
/// `b`, refining the best grid maxima by ternary search.
///
/// The grid step is derived from a Lipschitz bound on the fidelity so that
/// adjacent samples differ by at most [`TOL_STEP`]. The scan may run on
/// multiple threads; results are bitwise independent of the worker count
/// (fixed work decomposition, deterministic reduction).
pub fn search_best_time(
    n: u64,
    a: u64,
    b: u64,
    epsilon: f64,
    t_max: f64,
) -> Result<FidelityTrace, DynamicsError> {
    search_best_time_with(n, a, b, &SearchConfig::new(epsilon, t_max))
}

pub fn search_best_time_with(
    n: u64,
    a: u64,
    b: u64,
    config: &SearchConfig,
) -> Result<FidelityTrace, DynamicsError> {
    if !(config.epsilon > 0.0 && config.epsilon < 1.0) {
        return Err(DynamicsError::InvalidSearchParameter {
            name: "epsilon",
            value: config.epsilon,
        });
    }
    if !(config.t_max > 0.0 && config.t_max.is_finite()) {
        return Err(DynamicsError::InvalidSearchParameter {
            name: "t_max",
            value: config.t_max,
        });
    }
    if config.eval_cap == 0 || config.trace_samples == 0 {
        return Err(DynamicsError::InvalidSearchParameter {
            name: "eval_cap/trace_samples",
            value: 0.0,
        });
    }

    let dynamics = PairDynamics::new(n, a, b)?;
    let lipschitz = dynamics.lipschitz_bound();
    let step = if lipschitz > 0.0 {
        TOL_STEP / lipschitz
    } else {
        // Constant fidelity (single eigenvalue zero); any step works.
        config.t_max
    };
    let raw_points = (config.t_max / step).floor();
    let over_budget = raw_points >= config.eval_cap as f64;
    let scanned = if over_budget { config.eval_cap } else { raw_points as u64 + 1 };
    let evals = AtomicU64::new(0);

    let eval = |i: u64| -> f64 {
        evals.fetch_add(1, Ordering::Relaxed);
        dynamics.raw_fidelity(i as f64 * step)
    };

    // Chunked parallel scan; each fixed chunk reports its top local maxima.
    let chunk_count = scanned.div_ceil(SCAN_CHUNK);
    let mut candidates: Vec<(u64, f64)> = (0..chunk_count)
        .into_par_iter()
        .map(|c| {
            let start = c * SCAN_CHUNK;
            let end = (start + SCAN_CHUNK).min(scanned);
            let mut top: Vec<(u64, f64)> = Vec::with_capacity(config.refine_peaks + 1);
            let mut prev = if start == 0 { f64::NEG_INFINITY } else { eval(start - 1) };
            let mut here = eval(start);
            for i in start..end {
                let next = if i + 1 < scanned { eval(i + 1) } else { f64::NEG_INFINITY };
                if here >= prev && here >= next {
                    let pos = top
                        .iter()
                        .position(|&(pi, pf)| here > pf || (here == pf && i < pi))
                        .unwrap_or(top.len());
                    top.insert(pos, (i, here));
                    top.truncate(config.refine_peaks);
                }
                prev = here;
                here = next;
            }
            top
        })
        .reduce(Vec::new, |mut acc, chunk| {
            acc.extend(chunk);
            acc
        });
    candidates.sort_by(|x, y| {
        y.1.partial_cmp(&x.1)
            .expect("fidelities are finite")
            .then(x.0.cmp(&y.0))
    });
    candidates.truncate(config.refine_peaks);

    // Decimated trace of the scanned grid.
    let stride = scanned.div_ceil(config.trace_samples as u64).max(1);
    let mut samples = Vec::with_capacity((scanned / stride + 1) as usize);
    let mut i = 0;
    while i < scanned {
        samples.push((i as f64 * step, clamp_fidelity(eval(i))?));
        i += stride;
    }

    // best = (time, raw fidelity); ties resolve toward the earlier time.
    let mut best = (0.0f64, f64::NEG_INFINITY);
    for &(idx, raw) in &candidates {
        best = prefer(best, (idx as f64 * step, raw));
    }

    if over_budget {
        let best_fidelity = clamp_fidelity(best.1.max(0.0))?;
        return Err(DynamicsError::BudgetExceeded {
            partial: Box::new(FidelityTrace {
                pair: dynamics.pair(),
                samples,
                best_time: best.0,
                best_fidelity,
                achieved: best_fidelity >= 1.0 - config.epsilon,
                epsilon: config.epsilon,
                t_max: config.t_max,
                grid_step: step,
                evaluations: evals.load(Ordering::Relaxed),
            }),
        });
    }

    // Ternary refinement around each candidate peak.
    for &(idx, _) in &candidates {
        let center = idx as f64 * step;
        let mut lo = (center - step).max(0.0);
        let mut hi = (center + step).min(config.t_max);
        while hi - lo > config.time_resolution {
            let third = (hi - lo) / 3.0;
            let m1 = lo + third;
            let m2 = hi - third;
            if eval_at(&dynamics, &evals, m1) < eval_at(&dynamics, &evals, m2) {
                lo = m1;
            } else {
                hi = m2;
            }
        }
        let t = 0.5 * (lo + hi);
        best = prefer(best, (t, eval_at(&dynamics, &evals, t)));
    }

    let best_fidelity = clamp_fidelity(best.1.max(0.0))?;
    Ok(FidelityTrace {
        pair: dynamics.pair(),
        samples,
        best_time: best.0,
        best_fidelity,
        achieved: best_fidelity >= 1.0 - config.epsilon,
        epsilon: config.epsilon,
        t_max: config.t_max,
        grid_step: step,
        evaluations: evals.load(Ordering::Relaxed),
    })
}

fn prefer(best: (f64, f64), candidate: (f64, f64)) -> (f64, f64) {
    if candidate.1 > best.1 || (candidate.1 == best.1 && candidate.0 < best.0) {
        candidate
    } else {
        best
    }
}

fn eval_at(dynamics: &PairDynamics, evals: &AtomicU64, t: f64) -> f64 {
    evals.fetch_add(1, Ordering::Relaxed);
    dynamics.raw_fidelity(t)
}

/// Dense transition matrix `exp(itA)` from the Taylor oracle.
#[derive(Debug, Clone)]
pub struct TransitionMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl TransitionMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Entry for 1-based vertex indices.
    pub fn entry(&self, u: u64, v: u64) -> Complex64 {
        let (u, v) = (u as usize, v as usize);
        assert!(u >= 1 && u <= self.n && v >= 1 && v <= self.n);
        self.data[(u - 1) * self.n + (v - 1)]
    }

    /// Max-norm of `U U* - I`.
    pub fn unitarity_residual(&self) -> f64 {
        let n = self.n;
        let mut worst = 0.0f64;
        for row in 0..n {
            for col in 0..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..n {
                    acc += self.data[row * n + k] * self.data[col * n + k].conj();
                }
                let expected = if row == col { 1.0 } else { 0.0 };
                worst = worst.max((acc - expected).norm());
            }
        }
        worst
    }
}

/// Computes `exp(itA)` for the path adjacency matrix by scaling-and-squaring
/// with a truncated Taylor series on the dense tridiagonal matrix.
///
/// Deliberately ignorant of the closed-form spectrum so it can serve as an
/// independent check of [`amplitude`]. Restricted to `n <= 16`, `|t| <= 100`.
pub fn oracle_expm(n: u64, t: f64) -> Result<TransitionMatrix, DynamicsError> {
    if n == 0 || n > 16 {
        return Err(DynamicsError::OracleSizeCap { n });
    }
    if !t.is_finite() {
        return Err(DynamicsError::NonFiniteTime { t });
    }
    if t.abs() > 100.0 {
        return Err(DynamicsError::OracleTimeCap { t });
    }
    let dim = n as usize;

    // B = i t A, then scale so the 1-norm is at most 1/2.
    let mut scaled = vec![Complex64::new(0.0, 0.0); dim * dim];
    let one_norm = 2.0 * t.abs();
    let squarings = if one_norm > 0.5 {
        (one_norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scale = t / 2f64.powi(squarings as i32);
    for u in 0..dim.saturating_sub(1) {
        scaled[u * dim + u + 1] = Complex64::new(0.0, scale);
        scaled[(u + 1) * dim + u] = Complex64::new(0.0, scale);
    }

    // Taylor series for exp(scaled).
    let mut result = identity(dim);
    let mut term = identity(dim);
    for k in 1..=64u32 {
        term = mat_mul(&term, &scaled, dim);
        for x in &mut term {
            *x /= k as f64;
        }
        let mut biggest = 0.0f64;
        for (r, x) in result.iter_mut().zip(&term) {
            *r += x;
            biggest = biggest.max(x.norm());
        }
        if biggest < 1e-20 {
            break;
        }
    }

    for _ in 0..squarings {
        result = mat_mul(&result, &result, dim);
    }
    Ok(TransitionMatrix { n: dim, data: result })
}

fn identity(dim: usize) -> Vec<Complex64> {
    let mut m = vec![Complex64::new(0.0, 0.0); dim * dim];
    for i in 0..dim {
        m[i * dim + i] = Complex64::new(1.0, 0.0);
    }
    m
}

fn mat_mul(a: &[Complex64], b: &[Complex64], dim: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); dim * dim];
    for i in 0..dim {
        for k in 0..dim {
            let aik = a[i * dim + k];
            if aik.norm_sqr() == 0.0 {
                continue;
            }
            for j in 0..dim {
                out[i * dim + j] += aik * b[k * dim + j];
            }
        }
    }
    out
}
