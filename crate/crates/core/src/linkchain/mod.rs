//! Bit-true discrete-time link: encoder, block interleaver, Gray QPSK,
//! per-user scrambling, flat Rayleigh fading with multi-user interference,
//! and the receiver front end up to soft metrics.

mod chain;
mod channel;
mod interleave;
mod qpsk;
mod receiver;
mod scramble;

pub use chain::LinkChain;
pub use channel::{apply_channel, ChannelOutput, ChannelTap, FadingModel};
pub use interleave::{deinterleave, interleave};
pub use qpsk::{qpsk_demodulate, qpsk_modulate, SymbolStream};
pub use receiver::{phase_align, receiver_front_end};
pub use scramble::{descramble, scramble, ScramblingSequence};
