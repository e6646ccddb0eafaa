use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::qpsk::SymbolStream;
use crate::analytic::{LinkDirection, LinkScenario};
use crate::error::{Error, Result};
use crate::rng::{Purpose, StreamKey};

/// Flat-fading coefficient `a[n]` of one symbol interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelTap {
    pub coefficient: Complex64,
}

impl ChannelTap {
    pub fn new(coefficient: Complex64) -> Self {
        Self { coefficient }
    }

    pub fn power(&self) -> f64 {
        self.coefficient.norm_sqr()
    }
}

/// Time evolution of the fading taps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FadingModel {
    /// Independent circular Gaussian tap per symbol, `E|a|^2 = 1`. This is the
    /// perfectly interleaved channel the analysis assumes.
    Rayleigh,
    /// Circular Gaussian tap held for `symbols` consecutive symbols.
    BlockRayleigh { symbols: usize },
    /// Fixed tap for every user and symbol; `1` gives an AWGN channel.
    Static(Complex64),
}

impl FadingModel {
    pub fn awgn() -> Self {
        FadingModel::Static(Complex64::new(1.0, 0.0))
    }

    fn taps(&self, seed: u64, user: u32, block: u64, len: usize) -> Result<Vec<ChannelTap>> {
        let draw = |rng: &mut rand_chacha::ChaCha8Rng| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            ChannelTap::new(Complex64::new(re, im) * FRAC_1_SQRT_2)
        };
        Ok(match *self {
            FadingModel::Static(a) => vec![ChannelTap::new(a); len],
            FadingModel::Rayleigh => {
                let mut rng = StreamKey::new(seed, Purpose::Fading, user, block).rng();
                (0..len).map(|_| draw(&mut rng)).collect()
            }
            FadingModel::BlockRayleigh { symbols } => {
                if symbols == 0 {
                    return Err(Error::InvalidExperiment("fading block of 0 symbols".into()));
                }
                let mut rng = StreamKey::new(seed, Purpose::Fading, user, block).rng();
                let mut taps = Vec::with_capacity(len);
                while taps.len() < len {
                    let tap = draw(&mut rng);
                    let take = symbols.min(len - taps.len());
                    taps.extend(std::iter::repeat_n(tap, take));
                }
                taps
            }
        })
    }
}

/// Received block plus the channel state a genie receiver knows.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelOutput {
    pub received: SymbolStream,
    /// Desired user's taps, used for phase alignment.
    pub taps: Vec<ChannelTap>,
    /// Per-interferer taps on the uplink; empty on the downlink, where every
    /// interferer sees `taps`.
    pub interferer_taps: Vec<Vec<ChannelTap>>,
    /// The desired user's contribution to `received`.
    pub desired_component: SymbolStream,
}

impl ChannelOutput {
    /// Tap of interferer `k` (0-based among interferers) at symbol `n`.
    pub fn interferer_tap(&self, k: usize, n: usize) -> ChannelTap {
        if self.interferer_taps.is_empty() {
            self.taps[n]
        } else {
            self.interferer_taps[k][n]
        }
    }

    pub fn shares_desired_channel(&self) -> bool {
        self.interferer_taps.is_empty()
    }
}

/// Passes the desired user's and `K-1` interferers' unit-energy streams
/// through the flat-fading channel and adds complex white noise of variance
/// `N0` per sample.
///
/// Every user is received with energy `xi` per coded bit, so QPSK symbols are
/// scaled by `sqrt(2 xi)`. On the uplink every user has an independent tap
/// process; on the downlink all users share the desired user's taps. Taps of
/// user `k` come from the fading stream `(seed, k, block)`, noise from the
/// noise stream `(seed, 0, block)`.
pub fn apply_channel(
    scenario: &LinkScenario,
    fading: FadingModel,
    desired: &SymbolStream,
    interferers: &[SymbolStream],
    seed: u64,
    block: u64,
) -> Result<ChannelOutput> {
    let len = desired.len();
    let expected = scenario.num_users() as usize - 1;
    if interferers.len() != expected {
        return Err(Error::Length(format!(
            "{} users need {expected} interfering streams, got {}",
            scenario.num_users(),
            interferers.len()
        )));
    }
    if let Some(s) = interferers.iter().find(|s| s.len() != len) {
        return Err(Error::Length(format!(
            "interfering stream has {} symbols, desired {len}",
            s.len()
        )));
    }

    let amplitude = (2.0 * scenario.energy_per_coded_bit()).sqrt();
    let taps = fading.taps(seed, 0, block, len)?;
    let interferer_taps = match scenario.direction() {
        LinkDirection::Downlink => Vec::new(),
        LinkDirection::Uplink => (1..=expected as u32)
            .map(|k| fading.taps(seed, k, block, len))
            .collect::<Result<Vec<_>>>()?,
    };

    let desired_component: Vec<Complex64> = desired
        .samples()
        .iter()
        .zip(&taps)
        .map(|(x, a)| a.coefficient * x * amplitude)
        .collect();
    let mut received = desired_component.clone();
    for (k, stream) in interferers.iter().enumerate() {
        let gains = interferer_taps.get(k).unwrap_or(&taps);
        for ((r, x), a) in received.iter_mut().zip(stream.samples()).zip(gains) {
            *r += a.coefficient * x * amplitude;
        }
    }

    let n0 = scenario.noise_density();
    if n0 > 0.0 {
        let sigma = (n0 / 2.0).sqrt();
        let mut rng = StreamKey::new(seed, Purpose::Noise, 0, block).rng();
        for r in received.iter_mut() {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            *r += Complex64::new(re, im) * sigma;
        }
    }

    Ok(ChannelOutput {
        received: received.into(),
        taps,
        interferer_taps,
        desired_component: desired_component.into(),
    })
}
