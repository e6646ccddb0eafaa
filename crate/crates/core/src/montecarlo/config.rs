use crate::analytic::{GridSpec, LinkScenario};
use crate::convcode::CodeSpec;
use crate::error::{Error, Result};
use crate::linkchain::FadingModel;

/// Early-stopping threshold for BER runs (about 9% relative precision).
pub const DEFAULT_MAX_BIT_ERRORS: u64 = 500;

/// One Monte-Carlo experiment.
///
/// `num_trials` counts SNR samples in SNR mode and blocks of `block_length`
/// information bits in BER mode. With no code the configuration can only be
/// used for SNR statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub scenario: LinkScenario,
    pub code: Option<CodeSpec>,
    pub num_trials: u64,
    pub seed: u64,
    pub grid: GridSpec,
    pub fading: FadingModel,
    pub block_length: usize,
    pub interleaver_depth: usize,
    /// Stop a BER run once this many bit errors are collected; `None` runs
    /// every trial.
    pub max_bit_errors: Option<u64>,
}

impl ExperimentConfig {
    /// Uncoded SNR-statistics experiment on i.i.d. Rayleigh taps with a
    /// histogram grid covering the analytic support.
    pub fn new(scenario: LinkScenario, num_trials: u64, seed: u64) -> Result<Self> {
        // A noiseless single-user link has no SNR density; its placeholder grid
        // is rejected by `validate_grid` if SNR statistics are requested.
        let grid = match super::snr::support_edge(&scenario) {
            Ok(edge) => GridSpec::new(0.0, 1.1 * edge, 2001)?,
            Err(_) => GridSpec::new(0.0, 1.0, 2)?,
        };
        let config = Self {
            scenario,
            code: None,
            num_trials,
            seed,
            grid,
            fading: FadingModel::Rayleigh,
            block_length: 1000,
            interleaver_depth: 1,
            max_bit_errors: Some(DEFAULT_MAX_BIT_ERRORS),
        };
        config.validate()?;
        Ok(config)
    }

    pub fn with_code(mut self, code: CodeSpec) -> Self {
        self.code = Some(code);
        self
    }

    pub fn with_fading(mut self, fading: FadingModel) -> Self {
        self.fading = fading;
        self
    }

    pub fn with_block_length(mut self, block_length: usize) -> Self {
        self.block_length = block_length;
        self
    }

    pub fn with_interleaver_depth(mut self, depth: usize) -> Self {
        self.interleaver_depth = depth;
        self
    }

    pub fn with_max_bit_errors(mut self, max_bit_errors: Option<u64>) -> Self {
        self.max_bit_errors = max_bit_errors;
        self
    }

    pub fn with_grid(mut self, grid: GridSpec) -> Self {
        self.grid = grid;
        self
    }

    pub fn with_trials(mut self, num_trials: u64) -> Self {
        self.num_trials = num_trials;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Checks fields shared by every experiment kind.
    pub fn validate(&self) -> Result<()> {
        if self.num_trials == 0 {
            return Err(Error::InvalidExperiment("num_trials must be at least 1".into()));
        }
        if self.block_length == 0 {
            return Err(Error::InvalidExperiment("block_length must be positive".into()));
        }
        if self.interleaver_depth == 0 {
            return Err(Error::InvalidExperiment("interleaver_depth must be positive".into()));
        }
        if let FadingModel::BlockRayleigh { symbols: 0 } = self.fading {
            return Err(Error::InvalidExperiment("fading block of 0 symbols".into()));
        }
        Ok(())
    }

    /// Checks that the histogram grid starts at zero and extends 10% past the
    /// analytic support edge.
    pub fn validate_grid(&self) -> Result<()> {
        let edge = super::snr::support_edge(&self.scenario)?;
        if self.grid.min() > 0.0 || self.grid.max() < 1.1 * edge * (1.0 - 1e-12) {
            return Err(Error::InvalidGrid(format!(
                "histogram grid [{}, {}] does not cover [0, {}]",
                self.grid.min(),
                self.grid.max(),
                1.1 * edge
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::LinkDirection;

    #[test]
    fn defaults_cover_support() {
        let s = LinkScenario::new(10, 1.0, 1.0, LinkDirection::Downlink).unwrap();
        let c = ExperimentConfig::new(s, 10, 1).unwrap();
        c.validate_grid().unwrap();
        assert!((c.grid.max() - 1.1 / 18.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_fields() {
        let s = LinkScenario::new(2, 1.0, 1.0, LinkDirection::Uplink).unwrap();
        assert!(ExperimentConfig::new(s, 0, 1).is_err());
        let c = ExperimentConfig::new(s, 1, 1).unwrap();
        assert!(c.clone().with_block_length(0).validate().is_err());
        assert!(c.clone().with_interleaver_depth(0).validate().is_err());
        let short = c.clone().with_grid(GridSpec::new(0.0, 0.1, 11).unwrap());
        assert!(short.validate_grid().is_err());
    }
}
