//! Scene files, experiments, figure output and the verification suite on
//! top of `paraconvex-core`. The `paraconvex` binary is a thin layer over
//! this library.

pub mod artifacts;
pub mod config;
pub mod error;
pub mod experiments;
pub mod scene_file;
pub mod suite;

pub use config::RunConfig;
pub use error::CliError;
pub use scene_file::SceneFile;
