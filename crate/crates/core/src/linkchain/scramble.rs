use rand::RngCore;

use super::qpsk::SymbolStream;
use crate::error::{Error, Result};
use crate::rng::{Purpose, StreamKey};

/// Per-user sequence of i.i.d. equiprobable `+1/-1` chips.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScramblingSequence {
    chips: Vec<i8>,
    seed: u64,
}

impl ScramblingSequence {
    /// Draws `len` chips from the stream keyed by `(seed, user, block)`.
    pub fn generate(seed: u64, user: u32, block: u64, len: usize) -> Self {
        let mut rng = StreamKey::new(seed, Purpose::Scrambling, user, block).rng();
        let mut chips = Vec::with_capacity(len);
        while chips.len() < len {
            let word = rng.next_u64();
            let take = (len - chips.len()).min(64);
            chips.extend((0..take).map(|i| if (word >> i) & 1 == 0 { 1i8 } else { -1 }));
        }
        Self { chips, seed }
    }

    /// Explicit chip sequence; every chip must be `+1` or `-1`.
    pub fn from_chips(chips: Vec<i8>, seed: u64) -> Result<Self> {
        if let Some(c) = chips.iter().find(|&&c| c != 1 && c != -1) {
            return Err(Error::Length(format!("chip value {c} is not +-1")));
        }
        Ok(Self { chips, seed })
    }

    pub fn ones(len: usize) -> Self {
        Self {
            chips: vec![1; len],
            seed: 0,
        }
    }

    pub fn chips(&self) -> &[i8] {
        &self.chips
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.chips.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chips.is_empty()
    }
}

pub fn scramble(stream: &SymbolStream, seq: &ScramblingSequence) -> Result<SymbolStream> {
    if stream.len() != seq.len() {
        return Err(Error::Length(format!(
            "stream has {} symbols, scrambling sequence {} chips",
            stream.len(),
            seq.len()
        )));
    }
    Ok(stream
        .samples()
        .iter()
        .zip(seq.chips())
        .map(|(z, &c)| z * f64::from(c))
        .collect::<Vec<_>>()
        .into())
}

/// Chips are `+-1`, so descrambling is scrambling again.
pub fn descramble(stream: &SymbolStream, seq: &ScramblingSequence) -> Result<SymbolStream> {
    scramble(stream, seq)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linkchain::qpsk::qpsk_modulate;

    fn stream(n: usize, seed: u64) -> SymbolStream {
        let seq = ScramblingSequence::generate(seed, 99, 0, 2 * n);
        let bits: Vec<u8> = seq.chips().iter().map(|&c| u8::from(c < 0)).collect();
        qpsk_modulate(&bits).unwrap()
    }

    #[test]
    fn deterministic_given_seed() {
        let a = ScramblingSequence::generate(5, 1, 0, 1000);
        assert_eq!(a, ScramblingSequence::generate(5, 1, 0, 1000));
        assert_ne!(a, ScramblingSequence::generate(6, 1, 0, 1000));
        assert_ne!(a, ScramblingSequence::generate(5, 2, 0, 1000));
        // Shorter sequences are prefixes.
        assert_eq!(&a.chips()[..100], ScramblingSequence::generate(5, 1, 0, 100).chips());
    }

    #[test]
    fn balanced_chips() {
        let s = ScramblingSequence::generate(17, 0, 0, 100_000);
        let mean = s.chips().iter().map(|&c| f64::from(c)).sum::<f64>() / 1e5;
        assert!(mean.abs() < 0.02, "{mean}");
    }

    #[test]
    fn all_ones_is_identity() {
        let x = stream(64, 1);
        assert_eq!(scramble(&x, &ScramblingSequence::ones(64)).unwrap(), x);
    }

    #[test]
    fn involution() {
        let x = stream(500, 2);
        let q = ScramblingSequence::generate(3, 0, 0, 500);
        let y = scramble(&x, &q).unwrap();
        assert_ne!(x, y);
        assert_eq!(descramble(&y, &q).unwrap(), x);
    }

    #[test]
    fn independent_users_decorrelate() {
        let n = 100_000;
        let x = stream(n, 4);
        let a = scramble(&x, &ScramblingSequence::generate(10, 0, 0, n)).unwrap();
        let b = scramble(&x, &ScramblingSequence::generate(11, 0, 0, n)).unwrap();
        let mean: f64 = a
            .samples()
            .iter()
            .zip(b.samples())
            .map(|(u, v)| (u * v.conj()).re)
            .sum::<f64>()
            / n as f64;
        assert!(mean.abs() < 0.01, "{mean}");
    }

    #[test]
    fn length_and_chip_errors() {
        assert!(scramble(&stream(4, 0), &ScramblingSequence::ones(5)).is_err());
        assert!(ScramblingSequence::from_chips(vec![1, 0, -1], 0).is_err());
    }
}
