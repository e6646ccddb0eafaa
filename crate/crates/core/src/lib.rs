//! Coded-CDMA link laboratory.
//!
//! The crate is split along the signal path:
//!
//! - [`analytic`]: average coded-bit SNR, per-bit and combined SNR densities
//!   for uplink and downlink, pairwise error probabilities and the truncated
//!   union bound.
//! - [`convcode`]: convolutional encoding, Viterbi decoding and distance
//!   spectra.
//! - [`linkchain`]: bit-true transmitter, Rayleigh channel with multi-user
//!   interference, and receiver front end.
//! - [`montecarlo`]: seeded experiments that check the analytic results
//!   against the simulated chain.

pub mod analytic;
pub mod convcode;
pub mod error;
pub mod linkchain;
pub mod montecarlo;
pub mod rng;

pub use analytic::{
    avg_coded_snr, convolve_pdfs, downlink_bit_pdf, downlink_combined_pdf, gaussian_approx_pdf,
    pairwise_error_prob, q_function, union_bound_ber, uplink_bit_pdf, uplink_combined_pdf,
    DistanceSpectrum, GridSpec, LinkDirection, LinkScenario, PepMethod, SnrPdfGrid,
};
pub use convcode::{distance_spectrum, encode, viterbi_decode, CodeSpec, Trellis};
pub use error::{Error, Result};
pub use linkchain::{ChannelTap, FadingModel, ScramblingSequence, SymbolStream};
pub use montecarlo::{BerEstimate, EmpiricalPdf, ExperimentConfig};
