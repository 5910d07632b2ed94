pub mod blade;
pub mod cli;
pub mod embedding;
pub mod error;
pub mod exterior;
mod json_rational;
pub mod linalg;
pub mod metric;
pub mod multivector;
pub mod obstructions;
pub mod preset;
pub mod ring;
pub mod scalar;
