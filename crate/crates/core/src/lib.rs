//! Student-mobility networks of higher-education institutions.
//!
//! The pipeline reads per-year mobility exports ([`ingest`]), builds yearly
//! directed weighted networks over a fixed institution universe
//! ([`network`]), computes summary statistics and rankings ([`metrics`]),
//! the relative inclusiveness index ([`inclusiveness`]) and participation
//! shares ([`shares`]), and writes tables, GeoJSON and DOT files
//! ([`export`]).

pub mod config;
pub mod export;
pub mod format;
pub mod inclusiveness;
pub mod ingest;
pub mod metrics;
pub mod network;
pub mod pipeline;
pub mod shares;
