use super::interleave::{deinterleave, interleave};
use super::qpsk::{qpsk_modulate, SymbolStream};
use super::scramble::{scramble, ScramblingSequence};
use crate::convcode::{encode_with, CodeSpec, Trellis, ViterbiDecoder};
use crate::error::{Error, Result};

/// Transmit and receive ends of one user's coded link around the channel.
///
/// The zero-terminated codeword is padded with zero bits to a multiple of
/// both 2 (one QPSK symbol) and the interleaver depth, so any block length
/// works with any depth. The receiver drops the padding after
/// deinterleaving.
#[derive(Debug, Clone)]
pub struct LinkChain {
    code: CodeSpec,
    trellis: Trellis,
    depth: usize,
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl LinkChain {
    pub fn new(code: CodeSpec, interleaver_depth: usize) -> Result<Self> {
        if interleaver_depth == 0 {
            return Err(Error::InvalidExperiment("interleaver depth must be positive".into()));
        }
        Ok(Self {
            trellis: Trellis::new(&code),
            code,
            depth: interleaver_depth,
        })
    }

    pub fn code(&self) -> &CodeSpec {
        &self.code
    }

    pub fn interleaver_depth(&self) -> usize {
        self.depth
    }

    /// Coded bits per block after padding.
    pub fn padded_len(&self, info_len: usize) -> usize {
        let unit = 2 * self.depth / gcd(2, self.depth);
        self.code.codeword_len(info_len).div_ceil(unit) * unit
    }

    pub fn symbols_per_block(&self, info_len: usize) -> usize {
        self.padded_len(info_len) / 2
    }

    /// Encode, interleave, modulate and scramble one block.
    pub fn transmit(&self, info_bits: &[u8], seq: &ScramblingSequence) -> Result<SymbolStream> {
        let mut coded = encode_with(&self.trellis, info_bits);
        coded.resize(self.padded_len(info_bits.len()), 0);
        let symbols = qpsk_modulate(&interleave(&coded, self.depth)?)?;
        scramble(&symbols, seq)
    }

    /// Deinterleave front-end metrics and decode them back to `info_len` bits.
    pub fn receive(
        &self,
        decoder: &mut ViterbiDecoder,
        metrics: &[f64],
        info_len: usize,
    ) -> Result<Vec<u8>> {
        if metrics.len() != self.padded_len(info_len) {
            return Err(Error::Length(format!(
                "{} metrics for a block of {} coded bits",
                metrics.len(),
                self.padded_len(info_len)
            )));
        }
        let mut ordered = deinterleave(metrics, self.depth)?;
        ordered.truncate(self.code.codeword_len(info_len));
        decoder.decode(&ordered)
    }

    pub fn decoder(&self) -> ViterbiDecoder {
        ViterbiDecoder::new(&self.code)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{LinkDirection, LinkScenario};
    use crate::linkchain::{apply_channel, receiver_front_end, FadingModel};
    use crate::rng::{Purpose, StreamKey};
    use rand::Rng;

    fn random_bits(seed: u64, block: u64, len: usize) -> Vec<u8> {
        let mut rng = StreamKey::new(seed, Purpose::Data, 0, block).rng();
        (0..len).map(|_| rng.random_range(0..2u8)).collect()
    }

    #[test]
    fn padding_fits_symbols_and_depth() {
        let code = CodeSpec::from_octal(3, &["5", "7", "7"]).unwrap();
        for depth in [1, 2, 3, 7, 16] {
            let chain = LinkChain::new(code.clone(), depth).unwrap();
            for len in [1, 10, 99] {
                let p = chain.padded_len(len);
                assert!(p >= code.codeword_len(len));
                assert_eq!(p % 2, 0);
                assert_eq!(p % depth, 0);
                assert!(p - code.codeword_len(len) < 2 * depth);
            }
        }
        assert!(LinkChain::new(code, 0).is_err());
    }

    #[test]
    fn noiseless_chain_is_identity() {
        let scenario = LinkScenario::new(1, 0.5, 0.0, LinkDirection::Uplink).unwrap();
        for (gens, k, depth) in [(&["5", "7"][..], 3, 8), (&["133", "171"][..], 7, 10), (&["5", "7", "7"][..], 3, 3)] {
            let chain = LinkChain::new(CodeSpec::from_octal(k, gens).unwrap(), depth).unwrap();
            let mut decoder = chain.decoder();
            for block in 0..100 {
                let bits = random_bits(11, block, 97);
                let seq = ScramblingSequence::generate(11, 0, block, chain.symbols_per_block(97));
                let tx = chain.transmit(&bits, &seq).unwrap();
                let out = apply_channel(&scenario, FadingModel::awgn(), &tx, &[], 11, block).unwrap();
                let m = receiver_front_end(&out.received, &out.taps, &seq).unwrap();
                assert_eq!(chain.receive(&mut decoder, &m, 97).unwrap(), bits);
            }
        }
    }

    #[test]
    fn noiseless_fading_chain_is_identity() {
        let scenario = LinkScenario::new(1, 1.0, 0.0, LinkDirection::Uplink).unwrap();
        let chain = LinkChain::new(CodeSpec::from_octal(3, &["5", "7"]).unwrap(), 4).unwrap();
        let mut decoder = chain.decoder();
        for block in 0..20 {
            let bits = random_bits(3, block, 200);
            let seq = ScramblingSequence::generate(3, 0, block, chain.symbols_per_block(200));
            let tx = chain.transmit(&bits, &seq).unwrap();
            let out = apply_channel(&scenario, FadingModel::Rayleigh, &tx, &[], 3, block).unwrap();
            let m = receiver_front_end(&out.received, &out.taps, &seq).unwrap();
            assert_eq!(chain.receive(&mut decoder, &m, 200).unwrap(), bits);
        }
    }

    #[test]
    fn receive_checks_length() {
        let chain = LinkChain::new(CodeSpec::from_octal(3, &["5", "7"]).unwrap(), 2).unwrap();
        let mut decoder = chain.decoder();
        assert!(chain.receive(&mut decoder, &[1.0; 10], 10).is_err());
    }
}
