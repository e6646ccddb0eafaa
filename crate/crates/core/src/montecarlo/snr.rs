use rand::Rng;
use rayon::prelude::*;

use super::config::ExperimentConfig;
use super::stats::ks_distance;
use crate::analytic::{GridSpec, LinkDirection, LinkScenario};
use crate::error::{Error, Result};
use crate::linkchain::{
    apply_channel, qpsk_modulate, receiver_front_end, scramble, ChannelOutput, ScramblingSequence,
    SymbolStream,
};
use crate::rng::{Purpose, StreamKey};

/// Symbols simulated per block of an SNR experiment.
const SNR_BLOCK: usize = 4096;

/// Exponential tail mass beyond the uplink support edge.
const UPLINK_TAIL: f64 = 1e-6;

/// Upper edge of the analytic per-bit SNR support: `1/(2(K-1))` on the
/// downlink, and the point beyond which the exponential uplink density keeps
/// less than `1e-6` of its mass.
pub fn support_edge(scenario: &LinkScenario) -> Result<f64> {
    let k = scenario.num_users();
    if scenario.direction() == LinkDirection::Downlink && k >= 2 {
        return Ok(1.0 / (2.0 * f64::from(k - 1)));
    }
    Ok(scenario.avg_coded_snr()? * -UPLINK_TAIL.ln())
}

/// Histogram of simulated per-coded-bit SNR values.
///
/// Bins span consecutive grid points. The density is normalized by the number
/// of samples inside the grid, so it integrates to one; samples beyond the
/// grid are counted in `overflow`.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalPdf {
    grid: GridSpec,
    counts: Vec<u64>,
    density: Vec<f64>,
    overflow: u64,
    samples: Vec<f64>,
}

impl EmpiricalPdf {
    pub fn from_samples(grid: GridSpec, mut samples: Vec<f64>) -> Result<Self> {
        if grid.points() < 2 {
            return Err(Error::InvalidGrid("histogram needs at least 2 grid points".into()));
        }
        samples.sort_by(f64::total_cmp);
        let bins = grid.points() - 1;
        let h = grid.step();
        let mut counts = vec![0u64; bins];
        let mut overflow = 0;
        for &x in &samples {
            let pos = (x - grid.min()) / h;
            if pos < 0.0 || pos > bins as f64 || !pos.is_finite() {
                overflow += 1;
            } else {
                counts[(pos as usize).min(bins - 1)] += 1;
            }
        }
        let inside = samples.len() as u64 - overflow;
        let density = counts
            .iter()
            .map(|&c| if inside == 0 { 0.0 } else { c as f64 / (inside as f64 * h) })
            .collect();
        Ok(Self {
            grid,
            counts,
            density,
            overflow,
            samples,
        })
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Density per bin; bin `i` spans grid points `i` and `i + 1`.
    pub fn density(&self) -> &[f64] {
        &self.density
    }

    pub fn bin_centre(&self, i: usize) -> f64 {
        self.grid.gamma(i) + 0.5 * self.grid.step()
    }

    pub fn overflow(&self) -> u64 {
        self.overflow
    }

    /// Raw samples in ascending order.
    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn integral(&self) -> f64 {
        self.density.iter().sum::<f64>() * self.grid.step()
    }

    pub fn mean(&self) -> f64 {
        self.samples.iter().sum::<f64>() / self.samples.len() as f64
    }

    /// Kolmogorov-Smirnov distance of the raw samples to `cdf`.
    pub fn ks_distance<F: Fn(f64) -> f64>(&self, cdf: F) -> f64 {
        ks_distance(&self.samples, cdf)
    }
}

/// Random unit-energy QPSK stream of user `user`, already scrambled with that
/// user's sequence. Returns the stream and the sequence.
pub(crate) fn random_user_stream(
    seed: u64,
    user: u32,
    block: u64,
    symbols: usize,
) -> Result<(SymbolStream, ScramblingSequence)> {
    let mut rng = StreamKey::new(seed, Purpose::Data, user, block).rng();
    let mut bits = Vec::with_capacity(2 * symbols);
    while bits.len() < 2 * symbols {
        let word: u64 = rng.random();
        let take = (2 * symbols - bits.len()).min(64);
        bits.extend((0..take).map(|i| ((word >> i) & 1) as u8));
    }
    let seq = ScramblingSequence::generate(seed, user, block, symbols);
    Ok((scramble(&qpsk_modulate(&bits)?, &seq)?, seq))
}

/// Runs one block of `symbols` symbols for every user through the channel.
pub(crate) fn simulate_block(
    config: &ExperimentConfig,
    block: u64,
    symbols: usize,
) -> Result<(ChannelOutput, ScramblingSequence)> {
    let k = config.scenario.num_users();
    let (desired, seq) = random_user_stream(config.seed, 0, block, symbols)?;
    let interferers = (1..k)
        .map(|u| random_user_stream(config.seed, u, block, symbols).map(|(s, _)| s))
        .collect::<Result<Vec<_>>>()?;
    let out = apply_channel(
        &config.scenario,
        config.fading,
        &desired,
        &interferers,
        config.seed,
        block,
    )?;
    Ok((out, seq))
}

/// Per-symbol quantities read off one simulated block.
struct BlockSnr {
    /// Desired energy per coded bit at the soft metric.
    signal: Vec<f64>,
    /// Interference variance per soft metric implied by the taps.
    interference: Vec<f64>,
}

fn block_snr(config: &ExperimentConfig, block: u64, symbols: usize) -> Result<BlockSnr> {
    let (out, seq) = simulate_block(config, block, symbols)?;
    let desired = receiver_front_end(&out.desired_component, &out.taps, &seq)?;
    let xi = config.scenario.energy_per_coded_bit();
    let others = config.scenario.num_users() as usize - 1;
    let signal = desired.chunks(2).map(|m| m[0] * m[0]).collect();
    let interference = (0..symbols)
        .map(|n| (0..others).map(|k| out.interferer_tap(k, n).power() * xi).sum())
        .collect();
    Ok(BlockSnr {
        signal,
        interference,
    })
}

/// Simulates `num_trials` per-coded-bit SNR values and histograms them.
///
/// Each sample is one symbol of the desired user after descrambling and
/// phase alignment (both coded bits of a symbol share it). The signal term
/// is the squared desired soft metric, `|a|^2 xi`. The interference term is
/// the variance each interferer adds to that metric, `|a_k|^2 xi`: on the
/// downlink the interferers fade with the desired tap so the instantaneous
/// value is used; on the uplink they fade independently and the receiver sees
/// their power averaged over the run. The SNR is
/// `signal / (2 * interference + N0)`, matching the `Q(sqrt(2 gamma))`
/// convention of the analytic densities.
pub fn estimate_snr_pdf(config: &ExperimentConfig) -> Result<EmpiricalPdf> {
    config.validate()?;
    config.validate_grid()?;
    let total = config.num_trials as usize;
    let blocks = total.div_ceil(SNR_BLOCK);
    let parts = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let symbols = SNR_BLOCK.min(total - b * SNR_BLOCK);
            block_snr(config, b as u64, symbols)
        })
        .collect::<Result<Vec<_>>>()?;

    let n0 = config.scenario.noise_density();
    let shared = config.scenario.direction() == LinkDirection::Downlink;
    let mean_interference = parts.iter().flat_map(|p| &p.interference).sum::<f64>() / total as f64;
    let samples = parts
        .iter()
        .flat_map(|p| p.signal.iter().zip(&p.interference))
        .map(|(&s, &i)| {
            let i = if shared { i } else { mean_interference };
            s / (2.0 * i + n0)
        })
        .collect();
    EmpiricalPdf::from_samples(config.grid, samples)
}
