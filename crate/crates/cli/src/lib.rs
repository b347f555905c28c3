//! The `stabmap` command line: dataset generation, distances, embedding,
//! feature tables, single-instance solving and SVG maps.

pub mod atomic;
pub mod commands;
pub mod render;
