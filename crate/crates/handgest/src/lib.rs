//! File formats, configuration and the command-line front end for
//! [`handgest_core`].

pub mod cli;
pub mod config;
pub mod netpbm;

pub use config::CliConfig;
pub use netpbm::{read_image, read_pbm, read_ppm, write_pbm, write_ppm, Image, PnmError};
