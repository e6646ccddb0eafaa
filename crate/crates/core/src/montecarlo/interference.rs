use rayon::prelude::*;

use super::config::ExperimentConfig;
use super::snr::simulate_block;
use crate::analytic::LinkScenario;
use crate::error::{Error, Result};
use crate::linkchain::{receiver_front_end, SymbolStream};

const BLOCK: usize = 8192;

/// Measures the interference density seen by the desired user's decoder.
///
/// The channel is run without noise; the interference is the received signal
/// minus the desired user's component, passed through the desired user's
/// descrambler and phase alignment. The result is the mean power of that
/// residual over both quadratures, i.e. the quantity that plays the role of
/// `N0` for the interference, which the analysis models as `2(K-1) xi`.
pub fn measure_interference_variance(scenario: &LinkScenario, num_symbols: usize, seed: u64) -> Result<f64> {
    if num_symbols == 0 {
        return Err(Error::InvalidExperiment("num_symbols must be positive".into()));
    }
    if scenario.num_users() == 1 {
        return Ok(0.0);
    }
    let noiseless = scenario.with_noise_density(0.0)?;
    let config = ExperimentConfig::new(noiseless, num_symbols as u64, seed)?;
    let blocks = num_symbols.div_ceil(BLOCK);
    let sums = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let symbols = BLOCK.min(num_symbols - b * BLOCK);
            let (out, seq) = simulate_block(&config, b as u64, symbols)?;
            let residual: SymbolStream = out
                .received
                .samples()
                .iter()
                .zip(out.desired_component.samples())
                .map(|(r, d)| r - d)
                .collect::<Vec<_>>()
                .into();
            let metrics = receiver_front_end(&residual, &out.taps, &seq)?;
            Ok(metrics.iter().map(|m| m * m).sum::<f64>())
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(sums.iter().sum::<f64>() / num_symbols as f64)
}
