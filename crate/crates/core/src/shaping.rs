//! Target distributions and AWGN rate evaluation.
//!
//! Amplitudes are the positive ASK levels `1, 3, 5, ...`; a 2D QAM symbol is
//! the product of two independent signed ASK dimensions carrying the same
//! amplitude pmf (sign uniform). The constellation is scaled to unit energy
//! per real dimension, so the per-dimension SNR equals the 2D SNR and every
//! 2D rate is twice the 1D rate.

use std::fmt;
use std::num::NonZeroUsize;

use gauss_quad::hermite::GaussHermite;
use rand::distr::weighted::WeightedIndex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::composition::Composition;
use crate::error::{Error, Result};
use crate::exec::Execution;

const PMF_TOLERANCE: f64 = 1e-12;

/// Probability mass function over the amplitudes `1, 3, ..., 2m-1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AmplitudePmf {
    probabilities: Vec<f64>,
    amplitudes: Vec<f64>,
}

impl AmplitudePmf {
    pub fn new(probabilities: Vec<f64>) -> Result<Self> {
        if probabilities.is_empty() {
            return Err(Error::InvalidPmf("no amplitudes".into()));
        }
        if let Some(p) = probabilities
            .iter()
            .find(|p| !(p.is_finite() && **p >= 0.0))
        {
            return Err(Error::InvalidPmf(format!("entry {p} is not a probability")));
        }
        let sum: f64 = probabilities.iter().sum();
        if (sum - 1.0).abs() > PMF_TOLERANCE {
            return Err(Error::InvalidPmf(format!("sums to {sum}")));
        }
        let amplitudes = (0..probabilities.len())
            .map(|i| (2 * i + 1) as f64)
            .collect();
        Ok(AmplitudePmf {
            probabilities,
            amplitudes,
        })
    }

    /// Normalizes non-negative weights.
    pub fn from_weights(weights: &[f64]) -> Result<Self> {
        let sum: f64 = weights.iter().sum();
        if !(sum > 0.0 && sum.is_finite()) {
            return Err(Error::InvalidPmf(format!("weights sum to {sum}")));
        }
        let mut p: Vec<f64> = weights.iter().map(|w| w / sum).collect();
        // Absorb rounding so the invariant holds to the last ulp.
        let drift = 1.0 - p.iter().sum::<f64>();
        if let Some(max) = p.iter_mut().max_by(|a, b| a.total_cmp(b)) {
            *max += drift;
        }
        Self::new(p)
    }

    /// Empirical distribution `n_i / n` of a composition.
    pub fn from_composition(c: &Composition) -> Result<Self> {
        let weights: Vec<f64> = c.counts().iter().map(|&x| x as f64).collect();
        Self::from_weights(&weights)
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    pub fn m(&self) -> usize {
        self.probabilities.len()
    }

    pub fn entropy(&self) -> f64 {
        entropy_bits(&self.probabilities)
    }
}

pub(crate) fn entropy_bits(p: &[f64]) -> f64 {
    p.iter().filter(|&&x| x > 0.0).map(|&x| -x * x.log2()).sum()
}

/// Maxwell-Boltzmann family `P(a) ~ exp(-nu a^2)`.
pub fn mb_pmf(m: usize, nu: f64) -> Result<AmplitudePmf> {
    if m == 0 {
        return Err(Error::InvalidPmf("no amplitudes".into()));
    }
    if nu.is_nan() || nu < 0.0 {
        return Err(Error::InvalidPmf(format!("nu = {nu} must be non-negative")));
    }
    // Exponents are taken relative to the smallest amplitude so large nu
    // degrades gracefully to a point mass instead of 0/0.
    let weights: Vec<f64> = (0..m)
        .map(|i| {
            let excess = ((2 * i + 1) * (2 * i + 1) - 1) as f64;
            if excess == 0.0 {
                1.0
            } else {
                (-nu * excess).exp()
            }
        })
        .collect();
    AmplitudePmf::from_weights(&weights)
}

/// Bit labeling of the signed `2m`-ASK constellation, points ordered by value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Labeling {
    /// Binary reflected Gray code.
    #[default]
    Gray,
    Natural,
}

impl Labeling {
    fn label(self, index: usize) -> usize {
        match self {
            Labeling::Gray => index ^ (index >> 1),
            Labeling::Natural => index,
        }
    }
}

/// How the expectation over the channel output is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Budget {
    /// Gauss-Hermite rule per real dimension; the 2D rule is the tensor product
    /// of two identical 1D rules, which factorizes exactly for a product
    /// constellation.
    GaussHermite { nodes: usize },
    /// Seeded Monte Carlo with `samples` channel uses per real dimension.
    MonteCarlo { samples: usize, seed: u64 },
}

impl Budget {
    pub const DEFAULT_NODES: usize = 32;
    pub const DEFAULT_SAMPLES: usize = 1_000_000;
    pub const DEFAULT_SEED: u64 = 0x5EED;

    pub fn monte_carlo_default() -> Self {
        Budget::MonteCarlo {
            samples: Self::DEFAULT_SAMPLES,
            seed: Self::DEFAULT_SEED,
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::GaussHermite {
            nodes: Self::DEFAULT_NODES,
        }
    }
}

impl fmt::Display for Budget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Budget::GaussHermite { nodes } => write!(f, "gauss-hermite:{nodes}x{nodes}"),
            Budget::MonteCarlo { samples, seed } => {
                write!(f, "monte-carlo:{samples}:seed={seed:#x}")
            }
        }
    }
}

/// One operating point of the AWGN channel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelPoint {
    pub snr_db: f64,
    /// Number of positive amplitudes per real dimension (4 for 64QAM).
    pub m: usize,
    pub budget: Budget,
    pub labeling: Labeling,
}

impl ChannelPoint {
    pub fn new(snr_db: f64, m: usize) -> Self {
        ChannelPoint {
            snr_db,
            m,
            budget: Budget::default(),
            labeling: Labeling::default(),
        }
    }

    pub fn with_budget(mut self, budget: Budget) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_labeling(mut self, labeling: Labeling) -> Self {
        self.labeling = labeling;
        self
    }

    pub fn snr_linear(&self) -> f64 {
        10f64.powf(self.snr_db / 10.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AirReport {
    pub bits_per_2d: f64,
    pub budget: Budget,
}

/// `log2(1 + SNR)` bits per 2D symbol.
pub fn awgn_capacity(snr_db: f64) -> f64 {
    (1.0 + 10f64.powf(snr_db / 10.0)).log2()
}

/// Signed constellation: points ascending, with their probabilities.
struct Constellation {
    points: Vec<f64>,
    probs: Vec<f64>,
    labels: Vec<usize>,
    bits: usize,
}

impl Constellation {
    fn new(pmf: &AmplitudePmf, labeling: Labeling) -> Result<Self> {
        let m = pmf.m();
        let size = 2 * m;
        if !size.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(m));
        }
        let mut points = Vec::with_capacity(size);
        let mut probs = Vec::with_capacity(size);
        for i in (0..m).rev() {
            points.push(-pmf.amplitudes()[i]);
            probs.push(pmf.probabilities()[i] / 2.0);
        }
        for i in 0..m {
            points.push(pmf.amplitudes()[i]);
            probs.push(pmf.probabilities()[i] / 2.0);
        }
        let energy: f64 = points.iter().zip(&probs).map(|(x, p)| p * x * x).sum();
        let scale = energy.sqrt().recip();
        points.iter_mut().for_each(|x| *x *= scale);
        Ok(Constellation {
            points,
            probs,
            labels: (0..size).map(|i| labeling.label(i)).collect(),
            bits: size.trailing_zeros() as usize,
        })
    }

    /// `-sum_b log2 P(b_b(x) | y)` for transmitted index `tx` and output `y`.
    fn bitwise_surprisal(&self, tx: usize, y: f64, sigma2: f64, scratch: &mut [f64]) -> f64 {
        let mut peak = f64::NEG_INFINITY;
        for (j, (x, p)) in self.points.iter().zip(&self.probs).enumerate() {
            let e = if *p > 0.0 {
                p.ln() - (y - x) * (y - x) / (2.0 * sigma2)
            } else {
                f64::NEG_INFINITY
            };
            scratch[j] = e;
            peak = peak.max(e);
        }
        let mut total = 0.0;
        for v in scratch.iter_mut() {
            *v = (*v - peak).exp();
            total += *v;
        }
        let mut surprisal = 0.0;
        for b in 0..self.bits {
            let bit = (self.labels[tx] >> b) & 1;
            let agree: f64 = scratch
                .iter()
                .zip(&self.labels)
                .filter(|(_, l)| (**l >> b) & 1 == bit)
                .map(|(v, _)| v)
                .sum();
            surprisal -= (agree / total).log2();
        }
        surprisal
    }

    fn entropy(&self) -> f64 {
        entropy_bits(&self.probs)
    }
}

/// Bit-metric-decoding rate `H(X) - sum_b H(B_b | Y)` of one real dimension.
fn bmd_rate_1d(point: &ChannelPoint, pmf: &AmplitudePmf, exec: Execution) -> Result<f64> {
    let con = Constellation::new(pmf, point.labeling)?;
    let sigma2 = 1.0 / point.snr_linear();
    let conditional = match point.budget {
        Budget::GaussHermite { nodes } => {
            let nodes = NonZeroUsize::new(nodes)
                .ok_or_else(|| Error::InvalidPmf("zero quadrature nodes".into()))?;
            let rule = GaussHermite::new(nodes);
            let pairs: Vec<(f64, f64)> = rule.iter().map(|(x, w)| (*x, *w)).collect();
            let spread = (2.0 * sigma2).sqrt();
            let per_point = exec.map_range(con.points.len(), |tx| {
                if con.probs[tx] == 0.0 {
                    return 0.0;
                }
                let mut scratch = vec![0.0; con.points.len()];
                let e: f64 = pairs
                    .iter()
                    .map(|&(t, w)| {
                        let y = con.points[tx] + spread * t;
                        w * con.bitwise_surprisal(tx, y, sigma2, &mut scratch)
                    })
                    .sum();
                con.probs[tx] * e / std::f64::consts::PI.sqrt()
            });
            per_point.iter().sum::<f64>()
        }
        Budget::MonteCarlo { samples, seed } => {
            const CHUNKS: usize = 64;
            let picker =
                WeightedIndex::new(&con.probs).map_err(|e| Error::InvalidPmf(e.to_string()))?;
            let sigma = sigma2.sqrt();
            let sums = exec.map_range(CHUNKS, |chunk| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(chunk as u64);
                let count = samples / CHUNKS + usize::from(chunk < samples % CHUNKS);
                let mut scratch = vec![0.0; con.points.len()];
                (0..count)
                    .map(|_| {
                        let tx = picker.sample(&mut rng);
                        let z: f64 = rng.sample(StandardNormal);
                        con.bitwise_surprisal(tx, con.points[tx] + sigma * z, sigma2, &mut scratch)
                    })
                    .sum::<f64>()
            });
            sums.iter().sum::<f64>() / samples.max(1) as f64
        }
    };
    Ok(con.entropy() - conditional)
}

/// Asymptotic BMD achievable rate of the shaped QAM, bits per 2D symbol.
pub fn air_bmd(point: &ChannelPoint, pmf: &AmplitudePmf) -> Result<AirReport> {
    air_bmd_with(point, pmf, Execution::default())
}

pub fn air_bmd_with(
    point: &ChannelPoint,
    pmf: &AmplitudePmf,
    exec: Execution,
) -> Result<AirReport> {
    Ok(AirReport {
        bits_per_2d: 2.0 * bmd_rate_1d(point, pmf, exec)?.max(0.0),
        budget: point.budget,
    })
}

/// Rate of a finite-length DM system: asymptotic AIR minus the rate loss of
/// both real dimensions.
pub fn finite_dm_air(air_bits_per_2d: f64, rate_loss_per_1d: f64) -> f64 {
    air_bits_per_2d - 2.0 * rate_loss_per_1d
}

fn golden_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut a = hi - ratio * (hi - lo);
    let mut b = lo + ratio * (hi - lo);
    let (mut fa, mut fb) = (f(a), f(b));
    while hi - lo > tol {
        if fa >= fb {
            hi = b;
            b = a;
            fb = fa;
            a = hi - ratio * (hi - lo);
            fa = f(a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + ratio * (hi - lo);
            fb = f(b);
        }
    }
    (lo + hi) / 2.0
}

/// Grid scan followed by golden-section refinement around the best grid cell.
fn maximize_on(f: &(dyn Fn(f64) -> f64 + Sync), grid: &[f64], tol: f64, exec: Execution) -> f64 {
    let values = exec.map(grid, |&x| f(x));
    let best = values
        .iter()
        .enumerate()
        .fold(0, |best, (i, v)| if *v > values[best] { i } else { best });
    let lo = grid[best.saturating_sub(1)];
    let hi = grid[(best + 1).min(grid.len() - 1)];
    let x = golden_max(f, lo, hi, tol);
    if f(x) >= values[best] {
        x
    } else {
        grid[best]
    }
}

/// Maxwell-Boltzmann parameter maximizing the asymptotic BMD rate at `point`.
pub fn mb_select(point: &ChannelPoint) -> Result<f64> {
    mb_select_with(point, Execution::default())
}

pub fn mb_select_with(point: &ChannelPoint, exec: Execution) -> Result<f64> {
    // Validate once so the objective can be infallible.
    let _ = Constellation::new(&mb_pmf(point.m, 0.0)?, point.labeling)?;
    let objective = |nu: f64| {
        mb_pmf(point.m, nu)
            .and_then(|p| bmd_rate_1d(point, &p, Execution::Sequential))
            .unwrap_or(f64::NEG_INFINITY)
    };
    let mut grid = vec![0.0];
    grid.extend((0..=64).map(|i| 1e-4 * 10f64.powf(i as f64 / 16.0)));
    Ok(maximize_on(&objective, &grid, 1e-10, exec))
}

/// Product pmf over `m = 2^L` amplitudes from per-level `P(bit = 0)`.
///
/// Amplitude index `i` is labelled in natural binary with level 0 the most
/// significant bit.
pub fn product_pmf(p_zero: &[f64]) -> Result<AmplitudePmf> {
    let levels = p_zero.len();
    let m = 1usize << levels;
    let probs: Vec<f64> = (0..m)
        .map(|i| {
            (0..levels)
                .map(|l| {
                    let bit = (i >> (levels - 1 - l)) & 1;
                    if bit == 0 {
                        p_zero[l]
                    } else {
                        1.0 - p_zero[l]
                    }
                })
                .product()
        })
        .collect();
    AmplitudePmf::from_weights(&probs)
}

/// Per-level `P(bit = 0)` of the natural-binary amplitude labeling.
pub fn level_marginals(pmf: &AmplitudePmf) -> Result<Vec<f64>> {
    let m = pmf.m();
    if !m.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(m));
    }
    let levels = m.trailing_zeros() as usize;
    Ok((0..levels)
        .map(|l| {
            pmf.probabilities()
                .iter()
                .enumerate()
                .filter(|(i, _)| (i >> (levels - 1 - l)) & 1 == 0)
                .map(|(_, p)| p)
                .sum()
        })
        .collect())
}

/// Per-level bit probabilities of the product distribution with the largest
/// asymptotic BMD rate at `point`, by coordinate ascent started from the
/// marginals of the Maxwell-Boltzmann optimum.
pub fn bl_optimal_levels(point: &ChannelPoint) -> Result<Vec<f64>> {
    bl_optimal_levels_with(point, Execution::default())
}

pub fn bl_optimal_levels_with(point: &ChannelPoint, exec: Execution) -> Result<Vec<f64>> {
    let start = mb_pmf(point.m, mb_select_with(point, exec)?)?;
    bl_optimal_levels_from(point, &start, exec)
}

/// Coordinate ascent from the bit marginals of `start`.
pub fn bl_optimal_levels_from(
    point: &ChannelPoint,
    start: &AmplitudePmf,
    exec: Execution,
) -> Result<Vec<f64>> {
    let mut levels = level_marginals(start)?;
    let rate = |p: &[f64]| {
        product_pmf(p)
            .and_then(|pmf| bmd_rate_1d(point, &pmf, Execution::Sequential))
            .unwrap_or(f64::NEG_INFINITY)
    };
    const EDGE: f64 = 1e-6;
    for _sweep in 0..50 {
        let mut moved: f64 = 0.0;
        for l in 0..levels.len() {
            let objective = |x: f64| {
                let mut trial = levels.clone();
                trial[l] = x;
                rate(&trial)
            };
            let grid: Vec<f64> = (0..=40)
                .map(|i| (levels[l] - 0.05 + 0.0025 * i as f64).clamp(EDGE, 1.0 - EDGE))
                .collect();
            let x = maximize_on(&objective, &grid, 1e-10, exec);
            moved = moved.max((x - levels[l]).abs());
            levels[l] = x;
        }
        if moved < 1e-9 {
            break;
        }
    }
    Ok(levels)
}

/// KL-optimal `n`-type: minimizes `D(c/n || p)` over all compositions of `n`.
///
/// The divergence is separable and convex in each count, so adding one count
/// at a time where it raises the divergence least is optimal. Ties go to the
/// lowest amplitude index. Zero-probability amplitudes never receive a count.
pub fn quantize_pmf(pmf: &AmplitudePmf, n: usize) -> Result<Composition> {
    quantize_probabilities(pmf.probabilities(), n)
}

pub fn quantize_probabilities(p: &[f64], n: usize) -> Result<Composition> {
    if n == 0 {
        return Err(Error::InvalidPmf("block length must be positive".into()));
    }
    if p.iter().all(|&x| x <= 0.0) {
        return Err(Error::InvalidPmf("no positive probability".into()));
    }
    let cost = |i: usize, c: usize| -> f64 {
        if c == 0 {
            0.0
        } else {
            let c = c as f64;
            c * (c / (n as f64 * p[i])).ln()
        }
    };
    let mut counts = vec![0usize; p.len()];
    for _ in 0..n {
        let mut best: Option<(usize, f64)> = None;
        for i in 0..p.len() {
            if p[i] <= 0.0 {
                continue;
            }
            let delta = cost(i, counts[i] + 1) - cost(i, counts[i]);
            match best {
                Some((_, d)) if delta >= d - 1e-12 * d.abs().max(1.0) => {}
                _ => best = Some((i, delta)),
            }
        }
        let (i, _) = best.expect("at least one positive probability");
        counts[i] += 1;
    }
    Composition::new(counts)
}

/// `D(q || p)` in bits.
pub fn kl_divergence(q: &[f64], p: &[f64]) -> f64 {
    q.iter()
        .zip(p)
        .filter(|(q, _)| **q > 0.0)
        .map(|(q, p)| q * (q / p).log2())
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateReport {
    pub entropy_bits: f64,
    pub k: u64,
    pub n: usize,
    pub rate_loss: f64,
}

/// `H(A) - k/n` with `H(A)` the entropy of the composition's type.
pub fn rate_loss(c: &Composition, k: u64) -> RateReport {
    let entropy_bits = c.entropy();
    RateReport {
        entropy_bits,
        k,
        n: c.n(),
        rate_loss: entropy_bits - k as f64 / c.n() as f64,
    }
}
