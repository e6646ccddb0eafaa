use num_complex::Complex64;

use super::channel::ChannelTap;
use super::qpsk::SymbolStream;
use super::scramble::ScramblingSequence;
use crate::error::{Error, Result};

/// Rotates each sample by `conj(a)/|a|`, removing the channel phase while
/// keeping the fading amplitude.
pub fn phase_align(stream: &SymbolStream, taps: &[ChannelTap]) -> Result<SymbolStream> {
    if stream.len() != taps.len() {
        return Err(Error::Length(format!(
            "{} samples but {} channel taps",
            stream.len(),
            taps.len()
        )));
    }
    Ok(stream
        .samples()
        .iter()
        .zip(taps)
        .map(|(z, a)| {
            let mag = a.coefficient.norm();
            if mag == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                z * a.coefficient.conj() / mag
            }
        })
        .collect::<Vec<_>>()
        .into())
}

/// Descrambles, phase-aligns with perfect channel knowledge and demodulates
/// to soft metrics (still in interleaved order).
pub fn receiver_front_end(
    received: &SymbolStream,
    taps: &[ChannelTap],
    seq: &ScramblingSequence,
) -> Result<Vec<f64>> {
    if received.len() != seq.len() || received.len() != taps.len() {
        return Err(Error::Length(format!(
            "{} samples, {} chips and {} channel taps",
            received.len(),
            seq.len(),
            taps.len()
        )));
    }
    // Fused descramble, phase alignment and demodulation; equivalent to
    // `qpsk_demodulate(&phase_align(&descramble(received, seq)?, taps)?)`.
    let mut metrics = Vec::with_capacity(2 * received.len());
    for ((z, a), &c) in received.samples().iter().zip(taps).zip(seq.chips()) {
        let mag = a.coefficient.norm();
        let w = if mag == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            a.coefficient.conj() * (f64::from(c) / mag)
        };
        let y = z * w;
        metrics.push(y.im);
        metrics.push(y.re);
    }
    Ok(metrics)
}
