//! File exporters for external mapping and graph-drawing tools.

mod dot;
mod geojson;

pub use dot::{export_dot, write_dot};
pub use geojson::{export_geojson, write_geojson, GeoJsonExport};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ExportError {
    #[error("write failed: {0}")]
    Write(String),
}
