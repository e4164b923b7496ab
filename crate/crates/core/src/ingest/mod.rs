//! Record ingestion: schema-mapped parsing of per-year mobility exports,
//! normalization, cohort filters and the STEM classification.

mod field;
mod filter;
mod parse;
mod record;
mod schema;

use std::collections::BTreeSet;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use thiserror::Error;

pub use field::{classify_stem, IscedField, StemClass};
pub use filter::{filter_cohort, CohortFilter};
pub use parse::{parse_records, write_records, write_rejects, ParseOutcome, RejectReport};
pub use record::{CountryCode, Gender, InstitutionCode, MobilityRecord, MobilityType, SPECIAL_NEEDS_YES_SENTINEL};
pub use schema::{ColumnBindings, GrantCell, SchemaMap, SpecialNeedsEncoding, ValueDecoders, CANONICAL_FIELDS};

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("unreadable input: {0}")]
    Unreadable(String),
    #[error("missing bound column {0:?}")]
    MissingColumn(String),
    #[error("invalid schema: {0}")]
    Schema(String),
    #[error("schema year {year} outside analysis range {start}-{end}")]
    YearOutOfRange { year: i32, start: i32, end: i32 },
    #[error("schema year {schema} does not match year {file} declared by {path}")]
    YearMismatch { schema: i32, file: i32, path: String },
    #[error("empty institution code")]
    EmptyInstitutionCode,
    #[error("invalid country code {0:?}")]
    InvalidCountryCode(String),
    #[error("invalid special-needs value {0:?}")]
    InvalidGrant(String),
    #[error("home and host institution are both {0}")]
    SelfLoop(String),
    #[error("unclassified field of study {0:?}")]
    Unclassified(String),
    #[error("write failed: {0}")]
    Write(String),
}

/// Every vintage found in a schema directory, parsed and concatenated.
#[derive(Debug, Clone, Default)]
pub struct Dataset {
    pub records: Vec<MobilityRecord>,
    pub rejects: Vec<RejectReport>,
    pub years: BTreeSet<i32>,
}

impl Dataset {
    pub fn records_for_year(&self, year: i32) -> impl Iterator<Item = &MobilityRecord> {
        self.records.iter().filter(move |r| r.year == year)
    }
}

/// First standalone four-digit run starting with 19 or 20 in the file stem.
fn declared_year(path: &Path) -> Option<i32> {
    let stem = path.file_stem()?.to_str()?;
    let bytes = stem.as_bytes();
    (0..bytes.len().saturating_sub(3)).find_map(|i| {
        let window = &bytes[i..i + 4];
        let boundary_before = i == 0 || !bytes[i - 1].is_ascii_digit();
        let boundary_after = bytes.get(i + 4).is_none_or(|b| !b.is_ascii_digit());
        if boundary_before
            && boundary_after
            && window.iter().all(u8::is_ascii_digit)
            && (window.starts_with(b"19") || window.starts_with(b"20"))
        {
            std::str::from_utf8(window).ok()?.parse().ok()
        } else {
            None
        }
    })
}

fn io_error(path: &Path) -> impl FnOnce(std::io::Error) -> IngestError + '_ {
    move |source| IngestError::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Parse the data file bound by `schema`, tagging rejects with the file name.
pub fn parse_file(data_dir: &Path, schema: &SchemaMap) -> Result<ParseOutcome, IngestError> {
    let name = schema
        .file
        .as_deref()
        .ok_or_else(|| IngestError::Schema(format!("schema for {} names no data file", schema.year)))?;
    let path = data_dir.join(name);
    if let Some(year) = declared_year(&path) {
        if year != schema.year {
            return Err(IngestError::YearMismatch {
                schema: schema.year,
                file: year,
                path: path.display().to_string(),
            });
        }
    }
    let file = std::fs::File::open(&path).map_err(io_error(&path))?;
    let mut outcome = parse_records(std::io::BufReader::new(file), schema)?;
    for reject in &mut outcome.rejects {
        reject.file = name.to_string();
    }
    Ok(outcome)
}

/// Load every `*.toml` schema in `schema_dir` whose year lies in `years` and
/// parse the matching data files (concurrently; results are joined in year
/// order).
pub fn load_dataset(data_dir: &Path, schema_dir: &Path, years: &RangeInclusive<i32>) -> Result<Dataset, IngestError> {
    let mut schema_paths: Vec<PathBuf> = std::fs::read_dir(schema_dir)
        .map_err(io_error(schema_dir))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|ext| ext == "toml"))
        .collect();
    schema_paths.sort();

    let mut schemas = Vec::new();
    for path in &schema_paths {
        let schema = SchemaMap::load(path)?;
        if schema.validate_year(years).is_err() {
            log::info!("skipping {} (year {} outside range)", path.display(), schema.year);
            continue;
        }
        schemas.push(schema);
    }
    schemas.sort_by_key(|s| s.year);

    let outcomes: Vec<_> = schemas
        .par_iter()
        .map(|schema| parse_file(data_dir, schema))
        .collect::<Result<_, _>>()?;

    let mut dataset = Dataset::default();
    for (schema, outcome) in schemas.iter().zip(outcomes) {
        dataset.years.insert(schema.year);
        dataset.records.extend(outcome.records);
        dataset.rejects.extend(outcome.rejects);
    }
    Ok(dataset)
}

#[doc(hidden)]
pub mod testing {
    //! Record constructors for tests.

    use super::*;

    /// Country derived from the code: its first letter followed by `X`.
    pub fn country_of(code: &str) -> CountryCode {
        let c = code.chars().find(|c| c.is_ascii_alphabetic()).unwrap_or('Z');
        CountryCode::parse(&format!("{c}X")).unwrap()
    }

    pub fn record(
        year: i32,
        home: &str,
        host: &str,
        gender: Gender,
        field: &str,
        mobility_type: MobilityType,
        grant: f64,
    ) -> MobilityRecord {
        MobilityRecord::new(
            year,
            InstitutionCode::parse(home).unwrap(),
            InstitutionCode::parse(host).unwrap(),
            country_of(home),
            country_of(host),
            gender,
            IscedField::parse(field).unwrap(),
            mobility_type,
            grant,
        )
        .unwrap()
    }

    /// Special-needs study record.
    pub fn sn(year: i32, home: &str, host: &str, gender: Gender, stem: bool) -> MobilityRecord {
        let field = if stem { "ICTs" } else { "Education" };
        record(year, home, host, gender, field, MobilityType::Study, 1.0)
    }
}
