//! Command-line front end for the coded-CDMA link laboratory: scenario
//! files, pdf and BER CSV emitters, and the certification report.

pub mod ber;
pub mod error;
pub mod pdf;
pub mod scenario;
pub mod table;
pub mod validate;

pub use ber::{ber_table, BerMode, Sweep};
pub use error::CliError;
pub use pdf::{pdf_table, PdfMethod};
pub use scenario::ScenarioFile;
pub use table::CsvTable;
pub use validate::{validate, Report};

/// Environment variable that overrides the scenario file's seed.
pub const SEED_ENV: &str = "CDMALAB_SEED";
