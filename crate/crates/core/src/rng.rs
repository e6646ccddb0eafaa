//! Stream-addressed random numbers.
//!
//! Every random quantity in a simulation is drawn from a ChaCha8 stream whose
//! key is built from the experiment seed, the purpose of the draw and the user
//! index, and whose 64-bit stream number is the block index. Any block of any
//! user can therefore be regenerated on its own, and blocks can be evaluated in
//! any order or on any thread without changing the result.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// What a random stream is used for. Distinct purposes never share a key.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u32)]
pub enum Purpose {
    Data = 1,
    Scrambling = 2,
    Fading = 3,
    Noise = 4,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StreamKey {
    pub seed: u64,
    pub purpose: Purpose,
    pub user: u32,
    pub block: u64,
}

impl StreamKey {
    pub fn new(seed: u64, purpose: Purpose, user: u32, block: u64) -> Self {
        Self {
            seed,
            purpose,
            user,
            block,
        }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut key = [0u8; 32];
        key[0..8].copy_from_slice(&self.seed.to_le_bytes());
        key[8..12].copy_from_slice(&(self.purpose as u32).to_le_bytes());
        key[12..16].copy_from_slice(&self.user.to_le_bytes());
        let mut rng = ChaCha8Rng::from_seed(key);
        rng.set_stream(self.block);
        rng
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::RngCore;

    fn first_words(key: StreamKey) -> Vec<u64> {
        let mut rng = key.rng();
        (0..4).map(|_| rng.next_u64()).collect()
    }

    #[test]
    fn same_key_same_stream() {
        let k = StreamKey::new(7, Purpose::Noise, 3, 11);
        assert_eq!(first_words(k), first_words(k));
    }

    #[test]
    fn any_field_changes_stream() {
        let base = StreamKey::new(7, Purpose::Noise, 3, 11);
        let variants = [
            StreamKey { seed: 8, ..base },
            StreamKey {
                purpose: Purpose::Fading,
                ..base
            },
            StreamKey { user: 4, ..base },
            StreamKey { block: 12, ..base },
        ];
        for v in variants {
            assert_ne!(first_words(base), first_words(v), "{v:?}");
        }
    }

    #[test]
    fn frozen_output() {
        // Guards against silent changes of the key layout, which would change
        // every simulation result for a given seed.
        let mut rng = StreamKey::new(1, Purpose::Data, 0, 0).rng();
        assert_eq!(rng.next_u64(), 0x3c4b_894a_58c9_7f4b);
        assert_eq!(rng.next_u64(), 0xd468_5641_8a3d_4738);
    }
}
