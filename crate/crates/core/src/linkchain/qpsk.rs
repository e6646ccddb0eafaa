use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Complex baseband samples, one per symbol interval.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SymbolStream {
    samples: Vec<Complex64>,
}

impl SymbolStream {
    pub fn new(samples: Vec<Complex64>) -> Self {
        Self { samples }
    }

    pub fn zeros(len: usize) -> Self {
        Self::new(vec![Complex64::new(0.0, 0.0); len])
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn samples_mut(&mut self) -> &mut [Complex64] {
        &mut self.samples
    }

    pub fn into_samples(self) -> Vec<Complex64> {
        self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn average_energy(&self) -> f64 {
        if self.samples.is_empty() {
            return 0.0;
        }
        self.samples.iter().map(|z| z.norm_sqr()).sum::<f64>() / self.samples.len() as f64
    }
}

impl From<Vec<Complex64>> for SymbolStream {
    fn from(samples: Vec<Complex64>) -> Self {
        Self::new(samples)
    }
}

/// Gray-mapped QPSK with unit symbol energy.
///
/// | bits | symbol          |
/// |------|-----------------|
/// | 00   | (+1 + j) / sqrt2 |
/// | 01   | (-1 + j) / sqrt2 |
/// | 11   | (-1 - j) / sqrt2 |
/// | 10   | (+1 - j) / sqrt2 |
///
/// The first bit of a pair rides on the imaginary part and the second on the
/// real part.
pub fn qpsk_modulate(bits: &[u8]) -> Result<SymbolStream> {
    if !bits.len().is_multiple_of(2) {
        return Err(Error::Length(format!("QPSK needs an even bit count, got {}", bits.len())));
    }
    let level = |b: u8| if b & 1 == 0 { FRAC_1_SQRT_2 } else { -FRAC_1_SQRT_2 };
    Ok(bits
        .chunks_exact(2)
        .map(|p| Complex64::new(level(p[1]), level(p[0])))
        .collect::<Vec<_>>()
        .into())
}

/// Soft metrics in bit order: imaginary then real part of every symbol.
/// Positive means bit 0.
pub fn qpsk_demodulate(stream: &SymbolStream) -> Vec<f64> {
    stream.samples().iter().flat_map(|z| [z.im, z.re]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn mapping_table() {
        let s = qpsk_modulate(&[0, 0, 0, 1, 1, 1, 1, 0]).unwrap();
        let r = FRAC_1_SQRT_2;
        assert_eq!(
            s.samples(),
            &[
                Complex64::new(r, r),
                Complex64::new(-r, r),
                Complex64::new(-r, -r),
                Complex64::new(r, -r)
            ]
        );
    }

    #[test]
    fn gray_neighbours_differ_in_one_bit() {
        // Adjacent constellation points (90 degrees apart) differ in one bit.
        let order = [[0u8, 0], [0, 1], [1, 1], [1, 0]];
        for i in 0..4 {
            let a = order[i];
            let b = order[(i + 1) % 4];
            assert_eq!((a[0] ^ b[0]) + (a[1] ^ b[1]), 1);
        }
    }

    #[test]
    fn odd_length_rejected() {
        assert!(qpsk_modulate(&[0, 1, 1]).is_err());
    }

    #[test]
    fn round_trip_and_unit_energy() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let bits: Vec<u8> = (0..10_000).map(|_| rng.random_range(0..2)).collect();
        let s = qpsk_modulate(&bits).unwrap();
        assert!(s.samples().iter().all(|z| (z.norm_sqr() - 1.0).abs() < 1e-15));
        assert!((s.average_energy() - 1.0).abs() < 1e-12);
        let decided: Vec<u8> = qpsk_demodulate(&s).iter().map(|&m| u8::from(m < 0.0)).collect();
        assert_eq!(decided, bits);
    }
}
