use std::ops::Range;

use rand::Rng;
use rayon::prelude::*;

use super::config::ExperimentConfig;
use super::snr::random_user_stream;
use super::stats::wilson_interval_weighted;
use crate::error::{Error, Result};
use crate::linkchain::{apply_channel, receiver_front_end, LinkChain, ScramblingSequence};
use crate::rng::{Purpose, StreamKey};

/// Fewest information bits a BER run may test.
pub const MIN_BITS: u64 = 10_000;

/// Blocks evaluated per parallel batch between early-stopping checks. The
/// batch size only affects wasted work, never the result.
const BATCH: u64 = 64;

/// Information-bit error rate of a simulated coded link.
///
/// Decoding errors arrive in bursts, so bit errors inside a block are not
/// independent. The Wilson interval is computed on an effective number of
/// bits, `bits_tested / design_effect`, where the design effect is the ratio
/// of the observed between-block variance of error counts to the binomial
/// variance (never below 1). Blocks are independent, so this is the usual
/// cluster-sampling correction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BerEstimate {
    pub bit_errors: u64,
    pub bits_tested: u64,
    pub point_estimate: f64,
    pub wilson_interval_95: (f64, f64),
    pub design_effect: f64,
}

impl BerEstimate {
    /// Estimate with independent bit errors (design effect 1).
    pub fn new(bit_errors: u64, bits_tested: u64) -> Self {
        Self::with_design_effect(bit_errors, bits_tested, 1.0)
    }

    /// Estimate from per-block error counts of blocks of `block_length` bits.
    pub fn from_block_counts(counts: &[u64], block_length: usize) -> Self {
        let errors: u64 = counts.iter().sum();
        let bits = counts.len() as u64 * block_length as u64;
        let p = errors as f64 / bits as f64;
        let binomial = block_length as f64 * p * (1.0 - p);
        let design_effect = if counts.len() < 2 || binomial <= 0.0 {
            1.0
        } else {
            let mean = errors as f64 / counts.len() as f64;
            let var = counts.iter().map(|&c| (c as f64 - mean).powi(2)).sum::<f64>()
                / (counts.len() - 1) as f64;
            (var / binomial).max(1.0)
        };
        Self::with_design_effect(errors, bits, design_effect)
    }

    fn with_design_effect(bit_errors: u64, bits_tested: u64, design_effect: f64) -> Self {
        let p = bit_errors as f64 / bits_tested as f64;
        let n_eff = bits_tested as f64 / design_effect;
        Self {
            bit_errors,
            bits_tested,
            point_estimate: p,
            wilson_interval_95: wilson_interval_weighted(p, n_eff),
            design_effect,
        }
    }
}

struct Runner<'a> {
    config: &'a ExperimentConfig,
    chain: LinkChain,
}

impl<'a> Runner<'a> {
    fn new(config: &'a ExperimentConfig) -> Result<Self> {
        config.validate()?;
        let code = config
            .code
            .clone()
            .ok_or_else(|| Error::InvalidExperiment("BER simulation needs a code".into()))?;
        Ok(Self {
            config,
            chain: LinkChain::new(code, config.interleaver_depth)?,
        })
    }

    fn info_bits(&self, block: u64) -> Vec<u8> {
        let len = self.config.block_length;
        let mut rng = StreamKey::new(self.config.seed, Purpose::Data, 0, block).rng();
        let mut bits = Vec::with_capacity(len);
        while bits.len() < len {
            let word: u64 = rng.random();
            let take = (len - bits.len()).min(64);
            bits.extend((0..take).map(|i| ((word >> i) & 1) as u8));
        }
        bits
    }

    /// Information-bit errors in one block.
    fn block_errors(&self, block: u64) -> Result<u64> {
        let config = self.config;
        let len = config.block_length;
        let symbols = self.chain.symbols_per_block(len);
        let bits = self.info_bits(block);
        let seq = ScramblingSequence::generate(config.seed, 0, block, symbols);
        let tx = self.chain.transmit(&bits, &seq)?;
        let interferers = (1..config.scenario.num_users())
            .map(|u| random_user_stream(config.seed, u, block, symbols).map(|(s, _)| s))
            .collect::<Result<Vec<_>>>()?;
        let out = apply_channel(&config.scenario, config.fading, &tx, &interferers, config.seed, block)?;
        let metrics = receiver_front_end(&out.received, &out.taps, &seq)?;
        let mut decoder = self.chain.decoder();
        let decoded = self.chain.receive(&mut decoder, &metrics, len)?;
        Ok(bits.iter().zip(&decoded).filter(|(a, b)| a != b).count() as u64)
    }

    fn batch(&self, range: Range<u64>) -> Result<Vec<u64>> {
        range.into_par_iter().map(|b| self.block_errors(b)).collect()
    }
}

/// Bit errors of each block in `blocks`, as produced inside `estimate_ber`.
pub fn block_error_counts(config: &ExperimentConfig, blocks: Range<u64>) -> Result<Vec<u64>> {
    Runner::new(config)?.batch(blocks)
}

/// Runs up to `num_trials` blocks through the coded link and counts
/// information-bit errors.
///
/// Blocks are processed in batches in parallel and scanned in block order;
/// the run stops after the first block at which the running error count
/// reaches `max_bit_errors`. The stopping block therefore depends only on the
/// seed, not on scheduling.
pub fn estimate_ber(config: &ExperimentConfig) -> Result<BerEstimate> {
    let runner = Runner::new(config)?;
    let available = config.num_trials.saturating_mul(config.block_length as u64);
    if available < MIN_BITS {
        return Err(Error::InsufficientBits {
            required: MIN_BITS,
            available,
        });
    }
    let limit = config.max_bit_errors.unwrap_or(u64::MAX);
    let mut counts = Vec::new();
    let mut errors = 0u64;
    'outer: while (counts.len() as u64) < config.num_trials {
        let start = counts.len() as u64;
        let end = (start + BATCH).min(config.num_trials);
        for e in runner.batch(start..end)? {
            errors += e;
            counts.push(e);
            if errors >= limit {
                break 'outer;
            }
        }
    }
    Ok(BerEstimate::from_block_counts(&counts, config.block_length))
}
