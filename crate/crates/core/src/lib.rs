pub mod bank_io;
pub mod bench;
pub mod config;
pub mod design;
pub mod error;
pub mod estimator;
pub mod io;
pub mod linalg;
pub mod model;
pub mod optimize;
pub mod response;

pub use config::{DesignConfigFile, DesignSettings, ModelConfig};
pub use design::{design_bank, tft_filter_bank, BankKind, FilterBank, MultiplierSet};
pub use error::{Error, Result};
pub use estimator::{estimate_window, stream_estimate, PhasorEstimate, Report, SampleWindow, StreamEstimator};
