use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LinkDirection {
    /// Mobile to base station: every user fades independently.
    Uplink,
    /// Base station to mobile: all users share the desired user's channel.
    Downlink,
}

impl LinkDirection {
    pub fn name(self) -> &'static str {
        match self {
            LinkDirection::Uplink => "uplink",
            LinkDirection::Downlink => "downlink",
        }
    }
}

impl fmt::Display for LinkDirection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Operating point of one link: `K` synchronous users with equal average
/// received energy per coded bit, plus thermal noise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkScenario {
    num_users: u32,
    energy_per_coded_bit: f64,
    noise_density: f64,
    direction: LinkDirection,
}

impl LinkScenario {
    /// A noiseless single-user scenario is accepted here because the simulated
    /// chain is well defined for it; only the analytic SNR is not.
    pub fn new(
        num_users: u32,
        energy_per_coded_bit: f64,
        noise_density: f64,
        direction: LinkDirection,
    ) -> Result<Self> {
        if num_users == 0 {
            return Err(Error::InvalidScenario("num_users must be at least 1".into()));
        }
        if !(energy_per_coded_bit.is_finite() && energy_per_coded_bit > 0.0) {
            return Err(Error::InvalidScenario(format!(
                "energy per coded bit must be positive and finite, got {energy_per_coded_bit}"
            )));
        }
        if !(noise_density.is_finite() && noise_density >= 0.0) {
            return Err(Error::InvalidScenario(format!(
                "noise density must be nonnegative and finite, got {noise_density}"
            )));
        }
        Ok(Self {
            num_users,
            energy_per_coded_bit,
            noise_density,
            direction,
        })
    }

    /// Normalized scenario with unit energy per coded bit, set from `Eb/N0`
    /// per information bit of a rate `1/rate_inverse` code.
    pub fn from_info_bit_snr_db(
        num_users: u32,
        ebn0_db: f64,
        rate_inverse: u32,
        direction: LinkDirection,
    ) -> Result<Self> {
        let coded_db = ebn0_db - 10.0 * f64::from(rate_inverse).log10();
        Self::new(num_users, 1.0, 1.0 / db_to_linear(coded_db), direction)
    }

    pub fn num_users(&self) -> u32 {
        self.num_users
    }

    pub fn energy_per_coded_bit(&self) -> f64 {
        self.energy_per_coded_bit
    }

    pub fn noise_density(&self) -> f64 {
        self.noise_density
    }

    pub fn direction(&self) -> LinkDirection {
        self.direction
    }

    pub fn with_direction(mut self, direction: LinkDirection) -> Self {
        self.direction = direction;
        self
    }

    pub fn with_noise_density(self, noise_density: f64) -> Result<Self> {
        Self::new(
            self.num_users,
            self.energy_per_coded_bit,
            noise_density,
            self.direction,
        )
    }

    /// Interference density `2(K-1)xi` seen by one coded bit, in the same
    /// units as `N0`.
    pub fn interference_density(&self) -> f64 {
        2.0 * f64::from(self.num_users - 1) * self.energy_per_coded_bit
    }

    /// Coded-bit SNR `xi / N0` ignoring interference.
    pub fn coded_bit_snr(&self) -> f64 {
        self.energy_per_coded_bit / self.noise_density
    }

    pub fn avg_coded_snr(&self) -> Result<f64> {
        avg_coded_snr(self)
    }
}

/// Equivalent average SNR of a coded bit, `xi / (2(K-1) xi + N0)`.
///
/// Each interferer contributes `2 xi` of interference density after
/// descrambling and QPSK demodulation, so `K = 1` reduces to `xi / N0`.
pub fn avg_coded_snr(scenario: &LinkScenario) -> Result<f64> {
    let denom = scenario.interference_density() + scenario.noise_density;
    if denom <= 0.0 {
        return Err(Error::Domain(
            "average SNR is undefined for a single user without noise".into(),
        ));
    }
    Ok(scenario.energy_per_coded_bit / denom)
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use LinkDirection::*;

    fn snr(k: u32, xi: f64, n0: f64) -> Result<f64> {
        avg_coded_snr(&LinkScenario::new(k, xi, n0, Uplink).unwrap())
    }

    #[test]
    fn reference_values() {
        assert!((snr(10, 1.0, 1.0).unwrap() - 1.0 / 19.0).abs() < 1e-15);
        assert_eq!(snr(1, 1.0, 1.0).unwrap(), 1.0);
        assert!((snr(70, 1.0, 1.0).unwrap() - 1.0 / 139.0).abs() < 1e-15);
        assert!((snr(10, 1.0, 1.0).unwrap() - 0.052632).abs() < 1e-6);
        assert!((snr(70, 1.0, 1.0).unwrap() - 0.0071942).abs() < 1e-7);
    }

    #[test]
    fn single_user_is_plain_snr() {
        for (xi, n0) in [(1.0, 0.5), (3.0, 2.0), (0.25, 0.125)] {
            assert_eq!(snr(1, xi, n0).unwrap(), xi / n0);
        }
    }

    #[test]
    fn noiseless_single_user_is_domain_error() {
        assert!(matches!(snr(1, 1.0, 0.0), Err(Error::Domain(_))));
        // Interference alone keeps it defined.
        assert_eq!(snr(2, 1.0, 0.0).unwrap(), 0.5);
    }

    #[test]
    fn strictly_decreasing_in_users() {
        let mut prev = f64::INFINITY;
        for k in 1..200 {
            let g = snr(k, 1.0, 0.7).unwrap();
            assert!(g < prev);
            prev = g;
        }
    }

    #[test]
    fn invalid_scenarios() {
        assert!(LinkScenario::new(0, 1.0, 1.0, Uplink).is_err());
        assert!(LinkScenario::new(1, 0.0, 1.0, Uplink).is_err());
        assert!(LinkScenario::new(1, 1.0, -1.0, Downlink).is_err());
        assert!(LinkScenario::new(1, f64::NAN, 1.0, Downlink).is_err());
    }

    #[test]
    fn info_bit_conversion() {
        // 6 dB per information bit at rate 1/4 is about -0.02 dB per coded bit.
        let s = LinkScenario::from_info_bit_snr_db(10, 6.0, 4, Uplink).unwrap();
        let coded_db = 10.0 * s.coded_bit_snr().log10();
        assert!((coded_db - (6.0 - 10.0 * 4f64.log10())).abs() < 1e-12);
        assert_eq!(s.energy_per_coded_bit(), 1.0);
    }
}
