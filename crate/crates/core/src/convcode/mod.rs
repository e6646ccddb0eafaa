//! Convolutional codes: encoder, soft-decision Viterbi decoder and distance
//! spectrum search.
//!
//! Bit conventions: a generator is a bitmask of `constraint_length` bits whose
//! most significant bit taps the current input and whose least significant bit
//! taps the oldest stored input, so `(5, 7)` octal is `u_t + u_{t-2}` and
//! `u_t + u_{t-1} + u_{t-2}`. Output bits of one trellis step are emitted in
//! generator order.

mod code;
mod spectrum;
mod viterbi;

pub use code::{encode, CodeSpec, Trellis, MAX_CONSTRAINT_LENGTH, MAX_RATE_INVERSE};
pub(crate) use code::encode_with;
pub use spectrum::distance_spectrum;
pub use viterbi::{viterbi_decode, ViterbiDecoder};
