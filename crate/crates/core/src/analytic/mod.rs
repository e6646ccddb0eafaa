//! Analytic SNR statistics of coded CDMA links.
//!
//! The per-coded-bit SNR is exponential on the uplink (independent fading of
//! desired and interfering users) and has bounded support on the downlink
//! (desired signal and intra-cell interference share one fading tap). Summing
//! `d` coded bits gives an Erlang density on the uplink and a `d`-fold
//! convolution on the downlink, which can in turn be approximated by a
//! truncated Gaussian. Error probabilities are obtained by averaging
//! `Q(sqrt(2 gamma))` over these densities and summing them in the union bound.

mod bound;
mod convolve;
mod grid;
mod pdf;
mod qfunc;
mod scenario;

pub use bound::{union_bound_ber, DistanceSpectrum};
pub use convolve::{convolve_pdfs, downlink_combined_pdf, self_convolve};
pub use grid::{GridSpec, SnrPdfGrid};
pub use pdf::{
    downlink_bit_pdf, erlang_density, gaussian_approx_pdf, uplink_bit_density, uplink_bit_pdf,
    uplink_combined_pdf, DownlinkBitModel, MAX_CONSTRUCTION_DRIFT,
};
pub use qfunc::{pairwise_error_prob, q_function, PepMethod};
pub use scenario::{avg_coded_snr, db_to_linear, LinkDirection, LinkScenario};
