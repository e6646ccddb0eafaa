//! Scenario files.
//!
//! A scenario is a TOML document with four tables:
//!
//! ```toml
//! [scenario]
//! users = 10            # K, users sharing the channel
//! ebn0_db = 6.0         # Eb/N0 per information bit; `inf` for no noise
//! link = "both"         # uplink | downlink | both
//! channel = "rayleigh"  # rayleigh | awgn | block
//! fading_block = 64     # symbols per tap when channel = "block"
//!
//! [code]
//! rate_inverse = 4
//! constraint_length = 3           # needed with generators
//! generators = ["5", "7"]         # octal, optional
//! spectrum = [[5, 1.0], [6, 4.0]] # (distance, information weight), optional
//! free_distance = 164             # optional, default combining depth
//! max_distance = 10               # union bound truncation for computed spectra
//!
//! [experiment]
//! trials = 100000       # SNR samples or BER blocks
//! seed = 1
//! grid_points = 2001
//! grid_max = 0.06       # optional upper edge of output and histogram grids
//! block_length = 1000
//! interleaver_depth = 1
//! max_bit_errors = 500
//!
//! [output]
//! pdf = "pdf.csv"
//! ber = "ber.csv"
//! ```
//!
//! Only `[scenario]` is required. Unknown keys are rejected.

use std::fmt;
use std::path::Path;

use cdmalab_core::analytic::db_to_linear;
use cdmalab_core::montecarlo::DEFAULT_MAX_BIT_ERRORS;
use cdmalab_core::{CodeSpec, DistanceSpectrum, FadingModel, LinkDirection, LinkScenario};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Link {
    Uplink,
    Downlink,
    Both,
}

impl Link {
    pub fn directions(self) -> Vec<LinkDirection> {
        match self {
            Link::Uplink => vec![LinkDirection::Uplink],
            Link::Downlink => vec![LinkDirection::Downlink],
            Link::Both => vec![LinkDirection::Uplink, LinkDirection::Downlink],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Channel {
    Rayleigh,
    Awgn,
    Block,
}

impl fmt::Display for Channel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Channel::Rayleigh => "rayleigh",
            Channel::Awgn => "awgn",
            Channel::Block => "block",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSection {
    pub users: u32,
    pub ebn0_db: f64,
    #[serde(default = "default_link")]
    pub link: Link,
    #[serde(default = "default_channel")]
    pub channel: Channel,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fading_block: Option<usize>,
}

fn default_link() -> Link {
    Link::Both
}

fn default_channel() -> Channel {
    Channel::Rayleigh
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeSection {
    pub rate_inverse: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constraint_length: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<Vec<(u32, f64)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub free_distance: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_distance: Option<u32>,
}

impl Default for CodeSection {
    fn default() -> Self {
        Self {
            rate_inverse: 1,
            constraint_length: None,
            generators: None,
            spectrum: None,
            free_distance: None,
            max_distance: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSection {
    #[serde(default = "default_trials")]
    pub trials: u64,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_grid_points")]
    pub grid_points: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_max: Option<f64>,
    #[serde(default = "default_block_length")]
    pub block_length: usize,
    #[serde(default = "default_depth")]
    pub interleaver_depth: usize,
    #[serde(default = "default_max_bit_errors")]
    pub max_bit_errors: u64,
}

fn default_trials() -> u64 {
    100_000
}
fn default_seed() -> u64 {
    1
}
fn default_grid_points() -> usize {
    2001
}
fn default_block_length() -> usize {
    1000
}
fn default_depth() -> usize {
    1
}
fn default_max_bit_errors() -> u64 {
    DEFAULT_MAX_BIT_ERRORS
}

impl Default for ExperimentSection {
    fn default() -> Self {
        Self {
            trials: default_trials(),
            seed: default_seed(),
            grid_points: default_grid_points(),
            grid_max: None,
            block_length: default_block_length(),
            interleaver_depth: default_depth(),
            max_bit_errors: default_max_bit_errors(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pdf: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ber: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub scenario: ScenarioSection,
    #[serde(default)]
    pub code: CodeSection,
    #[serde(default)]
    pub experiment: ExperimentSection,
    #[serde(default, skip_serializing_if = "OutputSection::is_empty")]
    pub output: OutputSection,
}

impl OutputSection {
    pub fn is_empty(&self) -> bool {
        self.pdf.is_none() && self.ber.is_none()
    }
}

impl ScenarioFile {
    pub fn parse(text: &str, origin: &str) -> Result<Self, CliError> {
        let file: ScenarioFile = toml::from_str(text).map_err(|e| CliError::Parse {
            origin: origin.to_string(),
            message: e.to_string(),
        })?;
        file.check().map_err(|message| CliError::Parse {
            origin: origin.to_string(),
            message,
        })?;
        Ok(file)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
            path: path.display().to_string(),
            source: e,
        })?;
        Self::parse(&text, &path.display().to_string())
    }

    /// Canonical TOML rendering of the resolved configuration.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario files always serialize")
    }

    fn check(&self) -> Result<(), String> {
        let s = &self.scenario;
        if s.users == 0 {
            return Err("scenario.users must be at least 1".into());
        }
        if s.ebn0_db.is_nan() || s.ebn0_db == f64::NEG_INFINITY {
            return Err("scenario.ebn0_db must be a number or inf".into());
        }
        if s.channel == Channel::Block && s.fading_block.unwrap_or(0) == 0 {
            return Err("channel = \"block\" needs a positive scenario.fading_block".into());
        }
        let c = &self.code;
        if c.rate_inverse == 0 {
            return Err("code.rate_inverse must be at least 1".into());
        }
        if c.generators.is_some() && c.constraint_length.is_none() {
            return Err("code.generators needs code.constraint_length".into());
        }
        if c.free_distance == Some(0) {
            return Err("code.free_distance must be positive".into());
        }
        let e = &self.experiment;
        if e.trials == 0 {
            return Err("experiment.trials must be at least 1".into());
        }
        if e.grid_points < 2 {
            return Err("experiment.grid_points must be at least 2".into());
        }
        if let Some(g) = e.grid_max {
            if !(g.is_finite() && g > 0.0) {
                return Err("experiment.grid_max must be positive".into());
            }
        }
        if e.block_length == 0 || e.interleaver_depth == 0 {
            return Err("experiment.block_length and interleaver_depth must be positive".into());
        }
        self.code_spec().map_err(|e| e.to_string())?;
        self.listed_spectrum().map_err(|e| e.to_string())?;
        Ok(())
    }

    pub fn scenario_for(&self, direction: LinkDirection) -> Result<LinkScenario, CliError> {
        Ok(LinkScenario::from_info_bit_snr_db(
            self.scenario.users,
            self.scenario.ebn0_db,
            self.code.rate_inverse,
            direction,
        )?)
    }

    /// Coded-bit `Eb/N0` in dB.
    pub fn coded_ebn0_db(&self) -> f64 {
        self.scenario.ebn0_db - 10.0 * f64::from(self.code.rate_inverse).log10()
    }

    pub fn xi_over_n0_coded(&self) -> f64 {
        db_to_linear(self.coded_ebn0_db())
    }

    pub fn xi_over_n0_info(&self) -> f64 {
        db_to_linear(self.scenario.ebn0_db)
    }

    pub fn code_spec(&self) -> Result<Option<CodeSpec>, CliError> {
        match (&self.code.generators, self.code.constraint_length) {
            (Some(g), Some(k)) => {
                let spec = CodeSpec::from_octal(k, g)?;
                if spec.rate_inverse() != self.code.rate_inverse {
                    return Err(CliError::Usage(format!(
                        "code.rate_inverse = {} but {} generators are listed",
                        self.code.rate_inverse,
                        spec.rate_inverse()
                    )));
                }
                Ok(Some(spec))
            }
            _ => Ok(None),
        }
    }

    fn listed_spectrum(&self) -> Result<Option<DistanceSpectrum>, CliError> {
        match &self.code.spectrum {
            Some(pairs) => Ok(Some(DistanceSpectrum::from_pairs(pairs.iter().copied())?)),
            None => Ok(None),
        }
    }

    /// Distance spectrum for the union bound: the listed pairs if present,
    /// otherwise computed from the generators up to `max_distance`
    /// (default: free distance + 5).
    pub fn spectrum(&self) -> Result<DistanceSpectrum, CliError> {
        if let Some(s) = self.listed_spectrum()? {
            return Ok(s);
        }
        let code = self.code_spec()?.ok_or_else(|| {
            CliError::Usage("the union bound needs code.spectrum or code.generators".into())
        })?;
        let max_distance = match self.code.max_distance {
            Some(d) => d,
            None => {
                let free = cdmalab_core::distance_spectrum(&code, 64)?.free_distance();
                free + 5
            }
        };
        Ok(cdmalab_core::distance_spectrum(&code, max_distance)?)
    }

    /// Combining depth used by default: explicit free distance, else the
    /// listed or computed free distance, else a single bit.
    pub fn default_depth(&self) -> u32 {
        if let Some(d) = self.code.free_distance {
            return d;
        }
        if let Ok(Some(s)) = self.listed_spectrum() {
            return s.free_distance();
        }
        if let Ok(Some(code)) = self.code_spec() {
            if let Ok(s) = cdmalab_core::distance_spectrum(&code, 64) {
                return s.free_distance();
            }
        }
        1
    }

    pub fn fading(&self) -> FadingModel {
        match self.scenario.channel {
            Channel::Rayleigh => FadingModel::Rayleigh,
            Channel::Awgn => FadingModel::awgn(),
            Channel::Block => FadingModel::BlockRayleigh {
                symbols: self.scenario.fading_block.unwrap_or(1),
            },
        }
    }
}
