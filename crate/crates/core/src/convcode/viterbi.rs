use std::cmp::Ordering;

use super::code::{CodeSpec, Trellis};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
struct Branch {
    prev: u32,
    input: u8,
    pattern: u32,
}

/// Soft-decision maximum-likelihood sequence decoder for zero-terminated
/// blocks.
///
/// Metrics follow the demodulator convention: positive means bit 0, and the
/// magnitude is the reliability. The path metric is the correlation
/// `sum m_j (1 - 2 c_j)`, which is maximized. When two paths merging into a
/// state have equal metrics the one with the lexicographically smaller
/// information sequence survives, so the decoder returns the smallest of all
/// maximum-likelihood words.
#[derive(Debug, Clone)]
pub struct ViterbiDecoder {
    rate_inverse: usize,
    memory: usize,
    incoming: Vec<[Branch; 2]>,
    metrics: Vec<f64>,
    next_metrics: Vec<f64>,
    pattern_metrics: Vec<f64>,
    decisions: Vec<u8>,
}

impl ViterbiDecoder {
    pub fn new(code: &CodeSpec) -> Self {
        let trellis = Trellis::new(code);
        let states = trellis.num_states();
        let mut incoming: Vec<Vec<Branch>> = vec![Vec::with_capacity(2); states];
        for prev in 0..states as u32 {
            for input in 0..2u8 {
                let (next, pattern) = trellis.step(prev, input);
                incoming[next as usize].push(Branch {
                    prev,
                    input,
                    pattern,
                });
            }
        }
        Self {
            rate_inverse: code.rate_inverse() as usize,
            memory: code.memory() as usize,
            incoming: incoming.into_iter().map(|v| [v[0], v[1]]).collect(),
            metrics: vec![0.0; states],
            next_metrics: vec![0.0; states],
            pattern_metrics: vec![0.0; 1 << code.rate_inverse()],
            decisions: Vec::new(),
        }
    }

    pub fn decode(&mut self, soft_metrics: &[f64]) -> Result<Vec<u8>> {
        let n = self.rate_inverse;
        if !soft_metrics.len().is_multiple_of(n) {
            return Err(Error::Length(format!(
                "{} metrics is not a multiple of {n}",
                soft_metrics.len()
            )));
        }
        let steps = soft_metrics.len() / n;
        if steps < self.memory {
            return Err(Error::Length(format!(
                "{steps} trellis steps cannot hold a {}-step tail",
                self.memory
            )));
        }
        let states = self.incoming.len();
        self.metrics.fill(f64::NEG_INFINITY);
        self.metrics[0] = 0.0;
        self.decisions.clear();
        self.decisions.resize(steps * states, 0);

        for t in 0..steps {
            let received = &soft_metrics[t * n..(t + 1) * n];
            // Pattern 0 correlates positively with every metric; each set bit
            // flips the sign of one term.
            self.pattern_metrics[0] = received.iter().sum();
            for p in 1..self.pattern_metrics.len() {
                let low = p.trailing_zeros() as usize;
                self.pattern_metrics[p] = self.pattern_metrics[p & (p - 1)] - 2.0 * received[low];
            }
            for (s, [a, b]) in self.incoming.iter().enumerate() {
                let ma = self.metrics[a.prev as usize] + self.pattern_metrics[a.pattern as usize];
                let mb = self.metrics[b.prev as usize] + self.pattern_metrics[b.pattern as usize];
                let mut pick_b = mb > ma;
                if ma == mb && ma.is_finite() {
                    pick_b = lexicographic(&self.incoming, &self.decisions, states, t, *a, *b) == Ordering::Greater;
                }
                self.decisions[t * states + s] = pick_b as u8;
                self.next_metrics[s] = if pick_b { mb } else { ma };
            }
            std::mem::swap(&mut self.metrics, &mut self.next_metrics);
        }

        let mut bits = vec![0u8; steps];
        let mut state = 0usize;
        for t in (0..steps).rev() {
            let br = self.incoming[state][self.decisions[t * states + state] as usize];
            bits[t] = br.input;
            state = br.prev as usize;
        }
        bits.truncate(steps - self.memory);
        Ok(bits)
    }
}

/// Orders the information sequences of two surviving candidates entering
/// the same state at step `t` by tracing both back until they merge.
fn lexicographic(incoming: &[[Branch; 2]], decisions: &[u8], states: usize, t: usize, a: Branch, b: Branch) -> Ordering {
    let mut verdict = a.input.cmp(&b.input);
    let (mut sa, mut sb) = (a.prev as usize, b.prev as usize);
    let mut tau = t;
    while sa != sb {
        tau -= 1;
        let ba = incoming[sa][decisions[tau * states + sa] as usize];
        let bb = incoming[sb][decisions[tau * states + sb] as usize];
        if ba.input != bb.input {
            verdict = ba.input.cmp(&bb.input);
        }
        sa = ba.prev as usize;
        sb = bb.prev as usize;
    }
    verdict
}

/// Decodes one zero-terminated block. See [`ViterbiDecoder`].
pub fn viterbi_decode(code: &CodeSpec, soft_metrics: &[f64]) -> Result<Vec<u8>> {
    ViterbiDecoder::new(code).decode(soft_metrics)
}
