use crate::error::{Error, Result};

pub const MAX_CONSTRAINT_LENGTH: u32 = 16;
pub const MAX_RATE_INVERSE: u32 = 8;

/// Rate `1/n` feed-forward convolutional code.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CodeSpec {
    constraint_length: u32,
    generators: Vec<u32>,
}

impl CodeSpec {
    pub fn new(rate_inverse: u32, constraint_length: u32, generators: Vec<u32>) -> Result<Self> {
        if !(1..=MAX_CONSTRAINT_LENGTH).contains(&constraint_length) {
            return Err(Error::InvalidCode(format!(
                "constraint length {constraint_length} outside 1..={MAX_CONSTRAINT_LENGTH}"
            )));
        }
        if !(1..=MAX_RATE_INVERSE).contains(&rate_inverse) {
            return Err(Error::InvalidCode(format!(
                "rate 1/{rate_inverse} outside 1/1..=1/{MAX_RATE_INVERSE}"
            )));
        }
        if generators.len() != rate_inverse as usize {
            return Err(Error::InvalidCode(format!(
                "rate 1/{rate_inverse} needs {rate_inverse} generators, got {}",
                generators.len()
            )));
        }
        for &g in &generators {
            if g == 0 || g >> constraint_length != 0 {
                return Err(Error::InvalidCode(format!(
                    "generator {g:o} (octal) must be nonzero and fit in {constraint_length} bits"
                )));
            }
        }
        Ok(Self {
            constraint_length,
            generators,
        })
    }

    /// Generators in octal notation, e.g. `["5", "7"]`.
    pub fn from_octal<S: AsRef<str>>(constraint_length: u32, generators: &[S]) -> Result<Self> {
        let gens = generators
            .iter()
            .map(|s| {
                u32::from_str_radix(s.as_ref().trim(), 8)
                    .map_err(|e| Error::InvalidCode(format!("generator {:?}: {e}", s.as_ref())))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(gens.len() as u32, constraint_length, gens)
    }

    pub fn rate_inverse(&self) -> u32 {
        self.generators.len() as u32
    }

    pub fn constraint_length(&self) -> u32 {
        self.constraint_length
    }

    pub fn memory(&self) -> u32 {
        self.constraint_length - 1
    }

    pub fn num_states(&self) -> usize {
        1 << self.memory()
    }

    pub fn generators(&self) -> &[u32] {
        &self.generators
    }

    pub fn generators_octal(&self) -> Vec<String> {
        self.generators.iter().map(|g| format!("{g:o}")).collect()
    }

    /// Length of the zero-terminated codeword for `info_len` information bits.
    pub fn codeword_len(&self, info_len: usize) -> usize {
        self.rate_inverse() as usize * (info_len + self.memory() as usize)
    }
}

/// State transition table. States hold the last `K-1` inputs, most recent in
/// the top bit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trellis {
    rate_inverse: u32,
    memory: u32,
    next: Vec<[u32; 2]>,
    outputs: Vec<[u32; 2]>,
}

impl Trellis {
    pub fn new(code: &CodeSpec) -> Self {
        let memory = code.memory();
        let states = code.num_states() as u32;
        let mut next = Vec::with_capacity(states as usize);
        let mut outputs = Vec::with_capacity(states as usize);
        for s in 0..states {
            let mut n = [0; 2];
            let mut o = [0; 2];
            for u in 0..2u32 {
                let register = (u << memory) | s;
                n[u as usize] = register >> 1;
                o[u as usize] = code
                    .generators()
                    .iter()
                    .enumerate()
                    .fold(0, |acc, (j, g)| acc | (((register & g).count_ones() & 1) << j));
            }
            next.push(n);
            outputs.push(o);
        }
        Self {
            rate_inverse: code.rate_inverse(),
            memory,
            next,
            outputs,
        }
    }

    pub fn num_states(&self) -> usize {
        self.next.len()
    }

    pub fn rate_inverse(&self) -> u32 {
        self.rate_inverse
    }

    pub fn memory(&self) -> u32 {
        self.memory
    }

    /// `(next state, output pattern)`; bit `j` of the pattern is the output of
    /// generator `j`.
    #[inline]
    pub fn step(&self, state: u32, input: u8) -> (u32, u32) {
        let i = input as usize & 1;
        (self.next[state as usize][i], self.outputs[state as usize][i])
    }
}

/// Encodes `bits` (values 0/1) and flushes the encoder back to state zero.
/// Output length is `n * (len + K - 1)`.
pub fn encode(code: &CodeSpec, bits: &[u8]) -> Vec<u8> {
    encode_with(&Trellis::new(code), bits)
}

pub(crate) fn encode_with(trellis: &Trellis, bits: &[u8]) -> Vec<u8> {
    let n = trellis.rate_inverse() as usize;
    let tail = trellis.memory() as usize;
    let mut out = Vec::with_capacity(n * (bits.len() + tail));
    let mut state = 0;
    for &b in bits.iter().chain(std::iter::repeat_n(&0, tail)) {
        let (next, pattern) = trellis.step(state, b);
        out.extend((0..n).map(|j| ((pattern >> j) & 1) as u8));
        state = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn code57() -> CodeSpec {
        CodeSpec::from_octal(3, &["5", "7"]).unwrap()
    }

    #[test]
    fn validation() {
        assert!(CodeSpec::new(2, 3, vec![5]).is_err());
        assert!(CodeSpec::new(2, 3, vec![5, 0]).is_err());
        assert!(CodeSpec::new(2, 3, vec![5, 0o17]).is_err());
        assert!(CodeSpec::new(1, 17, vec![1]).is_err());
        assert!(CodeSpec::from_octal(3, &["5", "9"]).is_err());
        let c = code57();
        assert_eq!(c.generators(), &[5, 7]);
        assert_eq!(c.num_states(), 4);
        assert_eq!(c.generators_octal(), vec!["5", "7"]);
    }

    #[test]
    fn trellis_is_a_permutation_pair() {
        for code in [code57(), CodeSpec::from_octal(5, &["23", "35"]).unwrap()] {
            let t = Trellis::new(&code);
            let mut incoming = vec![0; t.num_states()];
            for s in 0..t.num_states() as u32 {
                let (a, _) = t.step(s, 0);
                let (b, _) = t.step(s, 1);
                assert_ne!(a, b);
                incoming[a as usize] += 1;
                incoming[b as usize] += 1;
            }
            assert!(incoming.iter().all(|&c| c == 2));
        }
    }

    #[test]
    fn zero_in_zero_out() {
        assert_eq!(encode(&code57(), &[0; 8]), vec![0; 20]);
    }

    #[test]
    fn impulse_response_is_generator_taps() {
        // Stream 0 follows g=5 (1,0,1), stream 1 follows g=7 (1,1,1).
        assert_eq!(encode(&code57(), &[1]), vec![1, 1, 0, 1, 1, 1]);
        let swapped = CodeSpec::from_octal(3, &["7", "5"]).unwrap();
        assert_eq!(encode(&swapped, &[1]), vec![1, 1, 1, 0, 1, 1]);
    }

    #[test]
    fn empty_input_is_just_the_tail() {
        assert_eq!(encode(&code57(), &[]), vec![0; 4]);
    }

    fn final_state(code: &CodeSpec, bits: &[u8]) -> u32 {
        let t = Trellis::new(code);
        let tail = vec![0; code.memory() as usize];
        bits.iter().chain(&tail).fold(0, |s, &b| t.step(s, b).0)
    }

    proptest! {
        #[test]
        fn linear_over_gf2(pairs in prop::collection::vec((0u8..2, 0u8..2), 0..64)) {
            let code = CodeSpec::from_octal(4, &["13", "15", "17"]).unwrap();
            let a: Vec<u8> = pairs.iter().map(|p| p.0).collect();
            let b: Vec<u8> = pairs.iter().map(|p| p.1).collect();
            let x: Vec<u8> = pairs.iter().map(|p| p.0 ^ p.1).collect();
            let ea = encode(&code, &a);
            let eb = encode(&code, &b);
            let ex = encode(&code, &x);
            prop_assert_eq!(ex.len(), 3 * (pairs.len() + 3));
            let sum: Vec<u8> = ea.iter().zip(&eb).map(|(p, q)| p ^ q).collect();
            prop_assert_eq!(ex, sum);
        }

        #[test]
        fn terminates_in_zero_state(bits in prop::collection::vec(0u8..2, 0..100)) {
            prop_assert_eq!(final_state(&code57(), &bits), 0);
        }
    }
}
