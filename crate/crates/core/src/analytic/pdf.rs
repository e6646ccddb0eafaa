use std::f64::consts::PI;

use super::grid::{GridSpec, SnrPdfGrid};
use super::qfunc::q_function;
use super::scenario::{avg_coded_snr, LinkDirection, LinkScenario};
use crate::error::{Error, Result};

/// Largest trapezoidal mass error tolerated before a freshly sampled or
/// convolved density is renormalized. Anything larger means the grid is too
/// coarse or too short for the density.
pub const MAX_CONSTRUCTION_DRIFT: f64 = 1e-3;

/// Resolution used to take moments of the per-bit downlink density.
const MOMENT_GRID_INTERVALS: usize = 4000;

/// Exponential density of a Rayleigh-faded coded bit with mean SNR `avg`.
pub fn uplink_bit_density(avg: f64, gamma: f64) -> f64 {
    if gamma < 0.0 {
        0.0
    } else {
        (-gamma / avg).exp() / avg
    }
}

/// Erlang (chi-square with `2d` degrees of freedom) density of the sum of `d`
/// independent exponential SNRs with mean `avg`, evaluated in log space.
pub fn erlang_density(avg: f64, d: u32, gamma: f64) -> f64 {
    if gamma < 0.0 {
        return 0.0;
    }
    if d == 1 {
        return uplink_bit_density(avg, gamma);
    }
    if gamma == 0.0 {
        return 0.0;
    }
    let n = f64::from(d);
    let ln = (n - 1.0) * gamma.ln() - gamma / avg - ln_factorial(d - 1) - n * avg.ln();
    ln.exp()
}

fn ln_factorial(n: u32) -> f64 {
    (2..=n).map(|k| f64::from(k).ln()).sum()
}

/// Per-bit downlink SNR `gamma = x / (c x + r)` with `x = |a|^2 ~ Exp(1)`,
/// `c = 2(K-1)` and `r = N0 / xi`. The desired signal and the interference
/// fade together, so the SNR saturates at `1/c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DownlinkBitModel {
    interference_coeff: f64,
    noise_ratio: f64,
}

impl DownlinkBitModel {
    pub fn from_scenario(scenario: &LinkScenario) -> Result<Self> {
        if scenario.num_users() < 2 {
            return Err(Error::Domain(
                "downlink bounded-SIR density needs at least one interferer; \
                 use the uplink density for a single user"
                    .into(),
            ));
        }
        if scenario.noise_density() == 0.0 {
            return Err(Error::Domain(
                "downlink SNR is deterministic without noise; no density exists".into(),
            ));
        }
        Ok(Self {
            interference_coeff: 2.0 * f64::from(scenario.num_users() - 1),
            noise_ratio: scenario.noise_density() / scenario.energy_per_coded_bit(),
        })
    }

    /// Upper edge `1/(2(K-1))` of the support.
    pub fn gamma_max(&self) -> f64 {
        1.0 / self.interference_coeff
    }

    /// Fading power that produces SNR `gamma`.
    fn fading_power(&self, gamma: f64) -> f64 {
        self.noise_ratio * gamma / (1.0 - self.interference_coeff * gamma)
    }

    pub fn density(&self, gamma: f64) -> f64 {
        if !(0.0..self.gamma_max()).contains(&gamma) {
            return 0.0;
        }
        let u = 1.0 - self.interference_coeff * gamma;
        (-self.fading_power(gamma) + self.noise_ratio.ln() - 2.0 * u.ln()).exp()
    }

    pub fn cdf(&self, gamma: f64) -> f64 {
        if gamma <= 0.0 {
            0.0
        } else if gamma >= self.gamma_max() {
            1.0
        } else {
            -(-self.fading_power(gamma)).exp_m1()
        }
    }
}

fn require(scenario: &LinkScenario, direction: LinkDirection) -> Result<()> {
    if scenario.direction() != direction {
        return Err(Error::Direction {
            expected: direction.name(),
        });
    }
    Ok(())
}

fn require_d(d: u32) -> Result<()> {
    if d == 0 {
        return Err(Error::Domain("number of combined bits must be at least 1".into()));
    }
    Ok(())
}

pub fn uplink_bit_pdf(scenario: &LinkScenario, grid: GridSpec) -> Result<SnrPdfGrid> {
    require(scenario, LinkDirection::Uplink)?;
    let avg = avg_coded_snr(scenario)?;
    SnrPdfGrid::sample(grid, MAX_CONSTRUCTION_DRIFT, |g| uplink_bit_density(avg, g))
}

pub fn uplink_combined_pdf(scenario: &LinkScenario, d: u32, grid: GridSpec) -> Result<SnrPdfGrid> {
    require(scenario, LinkDirection::Uplink)?;
    require_d(d)?;
    let avg = avg_coded_snr(scenario)?;
    SnrPdfGrid::sample(grid, MAX_CONSTRUCTION_DRIFT, |g| erlang_density(avg, d, g))
}

pub fn downlink_bit_pdf(scenario: &LinkScenario, grid: GridSpec) -> Result<SnrPdfGrid> {
    require(scenario, LinkDirection::Downlink)?;
    let model = DownlinkBitModel::from_scenario(scenario)?;
    SnrPdfGrid::sample(grid, MAX_CONSTRUCTION_DRIFT, |g| model.density(g))
}

/// Truncated Gaussian approximation of the `d`-bit combined downlink SNR.
///
/// Mean and variance are `d` times the per-bit moments, which are taken by
/// quadrature of the per-bit density. The density is zero outside
/// `(0, d/(2(K-1)))` and scaled to unit mass inside.
pub fn gaussian_approx_pdf(scenario: &LinkScenario, d: u32, grid: GridSpec) -> Result<SnrPdfGrid> {
    require(scenario, LinkDirection::Downlink)?;
    require_d(d)?;
    let model = DownlinkBitModel::from_scenario(scenario)?;
    let per_bit = downlink_bit_pdf(
        scenario,
        GridSpec::new(0.0, model.gamma_max(), MOMENT_GRID_INTERVALS + 1)?,
    )?;
    let n = f64::from(d);
    let mu = n * per_bit.mean();
    let sigma = (n * per_bit.variance()).sqrt();
    let upper = n * model.gamma_max();
    let inside = q_function(-mu / sigma) - q_function((upper - mu) / sigma);
    let scale = 1.0 / (inside * (2.0 * PI).sqrt() * sigma);
    SnrPdfGrid::sample(grid, MAX_CONSTRUCTION_DRIFT, |g| {
        if g > 0.0 && g < upper {
            let z = (g - mu) / sigma;
            scale * (-0.5 * z * z).exp()
        } else {
            0.0
        }
    })
}
