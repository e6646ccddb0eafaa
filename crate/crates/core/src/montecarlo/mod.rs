//! Seeded experiments on the simulated link: empirical SNR densities, coded
//! BER with confidence intervals, and interference power measurement.
//!
//! Every experiment is split into blocks whose random streams are addressed
//! by `(seed, purpose, user, block)`. Blocks are evaluated in parallel and
//! reduced in block order, so results do not depend on the thread count.

mod ber;
mod config;
mod interference;
mod snr;
mod stats;

pub use ber::{block_error_counts, estimate_ber, BerEstimate, MIN_BITS};
pub use config::{ExperimentConfig, DEFAULT_MAX_BIT_ERRORS};
pub use interference::measure_interference_variance;
pub use snr::{estimate_snr_pdf, support_edge, EmpiricalPdf};
pub use stats::{ks_distance, wilson_interval, wilson_interval_weighted};
