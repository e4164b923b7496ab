use std::collections::BTreeMap;
use std::io::Read;
use std::path::Path;

use serde::Deserialize;

use super::NetworkError;
use crate::ingest::{CountryCode, InstitutionCode};

/// WGS84 position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LonLat {
    pub lon: f64,
    pub lat: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeoEntry {
    pub city: Option<String>,
    pub country: Option<CountryCode>,
    pub location: LonLat,
}

/// Operator-supplied institution locations.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct GeoTable {
    entries: BTreeMap<InstitutionCode, GeoEntry>,
}

#[derive(Deserialize)]
struct GeoRow {
    institution_code: String,
    #[serde(default)]
    city: String,
    #[serde(default)]
    country: String,
    lat: f64,
    lon: f64,
}

impl GeoTable {
    /// Reads a delimited file with header
    /// `institution_code,city,country,lat,lon`. Any malformed row is fatal.
    pub fn from_reader<R: Read>(source: R, delimiter: u8) -> Result<Self, NetworkError> {
        let mut reader = csv::ReaderBuilder::new()
            .delimiter(delimiter)
            .trim(csv::Trim::All)
            .from_reader(source);
        let mut entries = BTreeMap::new();
        for (i, row) in reader.deserialize::<GeoRow>().enumerate() {
            let line = i + 2;
            let bad = |cause: String| NetworkError::GeoTable { line, cause };
            let row = row.map_err(|e| bad(e.to_string()))?;
            let code = InstitutionCode::parse(&row.institution_code).map_err(|e| bad(e.to_string()))?;
            if !(-90.0..=90.0).contains(&row.lat) || !(-180.0..=180.0).contains(&row.lon) {
                return Err(bad(format!("coordinates out of range ({}, {})", row.lat, row.lon)));
            }
            let country = if row.country.is_empty() {
                None
            } else {
                Some(CountryCode::parse(&row.country).map_err(|e| bad(e.to_string()))?)
            };
            let entry = GeoEntry {
                city: Some(row.city).filter(|c| !c.is_empty()),
                country,
                location: LonLat {
                    lon: row.lon,
                    lat: row.lat,
                },
            };
            if entries.insert(code.clone(), entry).is_some() {
                return Err(bad(format!("duplicate institution {code}")));
            }
        }
        Ok(Self { entries })
    }

    pub fn load(path: &Path) -> Result<Self, NetworkError> {
        let file = std::fs::File::open(path).map_err(|e| NetworkError::GeoTable {
            line: 0,
            cause: format!("{}: {e}", path.display()),
        })?;
        Self::from_reader(std::io::BufReader::new(file), b',')
    }

    pub fn insert(&mut self, code: InstitutionCode, entry: GeoEntry) {
        self.entries.insert(code, entry);
    }

    pub fn get(&self, code: &InstitutionCode) -> Option<&GeoEntry> {
        self.entries.get(code)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}
