//! Per-vintage column bindings and value decoders.
//!
//! Each dataset vintage gets its own TOML file:
//!
//! ```toml
//! year = 2008
//! file = "SM_2008.csv"
//! delimiter = ";"
//!
//! [columns]
//! home_institution = "HOME_INSTITUTION_CDE"
//! host_institution = "HOST_INSTITUTION_CDE"
//! home_country = "HOME_INSTITUTION_CTRY_CDE"
//! host_country = "HOST_INSTITUTION_COUNTRY_CDE"
//! gender = "STUDENT_GENDER_CDE"
//! field_of_study = "SUBJECT_AREA"
//! mobility_type = "MOBILITY_TYPE"
//! special_needs = "SPECIAL_NEEDS_SUPPLEMENT_VALUE"
//!
//! [decoders]
//! special_needs = "amount"
//! ```

use std::ops::RangeInclusive;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::record::{Gender, MobilityType};
use super::IngestError;

/// Canonical field names, in canonical column order.
pub const CANONICAL_FIELDS: [&str; 8] = [
    "home_institution",
    "host_institution",
    "home_country",
    "host_country",
    "gender",
    "field_of_study",
    "mobility_type",
    "special_needs",
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ColumnBindings {
    pub home_institution: String,
    pub host_institution: String,
    pub home_country: String,
    pub host_country: String,
    pub gender: String,
    pub field_of_study: String,
    pub mobility_type: String,
    pub special_needs: String,
}

impl ColumnBindings {
    /// `(canonical field, source column label)` pairs in canonical order.
    pub fn pairs(&self) -> [(&'static str, &str); 8] {
        [
            (CANONICAL_FIELDS[0], &self.home_institution),
            (CANONICAL_FIELDS[1], &self.host_institution),
            (CANONICAL_FIELDS[2], &self.home_country),
            (CANONICAL_FIELDS[3], &self.host_country),
            (CANONICAL_FIELDS[4], &self.gender),
            (CANONICAL_FIELDS[5], &self.field_of_study),
            (CANONICAL_FIELDS[6], &self.mobility_type),
            (CANONICAL_FIELDS[7], &self.special_needs),
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpecialNeedsEncoding {
    /// yes/no tokens; "yes" becomes the positive sentinel.
    Boolean,
    /// Grant amount, zero meaning no supplement.
    Amount,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ValueDecoders {
    pub special_needs: SpecialNeedsEncoding,
    pub yes_tokens: Vec<String>,
    pub no_tokens: Vec<String>,
    /// Amounts written with a decimal comma (`"350,50"`).
    pub decimal_comma: bool,
    pub female_tokens: Vec<String>,
    pub male_tokens: Vec<String>,
    pub study_tokens: Vec<String>,
    pub placement_tokens: Vec<String>,
}

impl Default for ValueDecoders {
    fn default() -> Self {
        let v = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect();
        Self {
            special_needs: SpecialNeedsEncoding::Amount,
            yes_tokens: v(&["yes", "y", "true", "1"]),
            no_tokens: v(&["no", "n", "false", "0"]),
            decimal_comma: false,
            female_tokens: v(&["f", "female", "w", "woman"]),
            male_tokens: v(&["m", "male", "man"]),
            study_tokens: v(&["study", "studies", "sms", "student mobility for studies"]),
            placement_tokens: v(&["placement", "traineeship", "smp", "student mobility for traineeships"]),
        }
    }
}

/// Outcome of decoding a special-needs cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GrantCell {
    Value(f64),
    /// Empty cell: counted as no supplement, reported in the ingestion log.
    Missing,
}

impl ValueDecoders {
    fn matches(tokens: &[String], cell: &str) -> bool {
        tokens.iter().any(|t| t.eq_ignore_ascii_case(cell))
    }

    pub fn decode_gender(&self, cell: &str) -> Gender {
        let cell = cell.trim();
        if Self::matches(&self.female_tokens, cell) {
            Gender::F
        } else if Self::matches(&self.male_tokens, cell) {
            Gender::M
        } else {
            Gender::Unknown
        }
    }

    pub fn decode_mobility_type(&self, cell: &str) -> MobilityType {
        let cell = cell.trim();
        if Self::matches(&self.study_tokens, cell) {
            MobilityType::Study
        } else if Self::matches(&self.placement_tokens, cell) {
            MobilityType::Placement
        } else {
            MobilityType::Other
        }
    }

    pub fn decode_special_needs(&self, cell: &str) -> Result<GrantCell, IngestError> {
        let cell = cell.trim();
        if cell.is_empty() {
            return Ok(GrantCell::Missing);
        }
        match self.special_needs {
            SpecialNeedsEncoding::Boolean => {
                if Self::matches(&self.yes_tokens, cell) {
                    Ok(GrantCell::Value(super::record::SPECIAL_NEEDS_YES_SENTINEL))
                } else if Self::matches(&self.no_tokens, cell) {
                    Ok(GrantCell::Value(0.0))
                } else {
                    Err(IngestError::InvalidGrant(cell.to_string()))
                }
            }
            SpecialNeedsEncoding::Amount => {
                let text = if self.decimal_comma {
                    cell.replace('.', "").replace(',', ".")
                } else {
                    cell.to_string()
                };
                match text.parse::<f64>() {
                    Ok(v) if v.is_finite() && v >= 0.0 => Ok(GrantCell::Value(v)),
                    _ => Err(IngestError::InvalidGrant(cell.to_string())),
                }
            }
        }
    }
}

fn default_delimiter() -> char {
    ','
}

/// Column bindings and decoders for one dataset vintage.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemaMap {
    pub year: i32,
    /// Data file name, relative to the data directory.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub file: Option<String>,
    #[serde(default = "default_delimiter")]
    pub delimiter: char,
    pub columns: ColumnBindings,
    #[serde(default)]
    pub decoders: ValueDecoders,
}

impl SchemaMap {
    pub fn from_toml_str(text: &str) -> Result<Self, IngestError> {
        let schema: SchemaMap = toml::from_str(text).map_err(|e| IngestError::Schema(e.to_string()))?;
        schema.check_bindings()?;
        Ok(schema)
    }

    pub fn load(path: &Path) -> Result<Self, IngestError> {
        let text = std::fs::read_to_string(path).map_err(|source| IngestError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_toml_str(&text).map_err(|e| match e {
            IngestError::Schema(msg) => IngestError::Schema(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    /// The layout written by [`super::write_records`].
    pub fn canonical(year: i32) -> Self {
        let c = |i: usize| CANONICAL_FIELDS[i].to_string();
        Self {
            year,
            file: None,
            delimiter: ',',
            columns: ColumnBindings {
                home_institution: c(0),
                host_institution: c(1),
                home_country: c(2),
                host_country: c(3),
                gender: c(4),
                field_of_study: c(5),
                mobility_type: c(6),
                special_needs: c(7),
            },
            decoders: ValueDecoders::default(),
        }
    }

    pub fn delimiter_byte(&self) -> Result<u8, IngestError> {
        u8::try_from(self.delimiter)
            .ok()
            .filter(u8::is_ascii)
            .ok_or_else(|| IngestError::Schema(format!("delimiter {:?} is not ASCII", self.delimiter)))
    }

    fn check_bindings(&self) -> Result<(), IngestError> {
        let pairs = self.columns.pairs();
        for (i, (field, label)) in pairs.iter().enumerate() {
            if label.trim().is_empty() {
                return Err(IngestError::Schema(format!("empty column binding for {field}")));
            }
            if let Some((other, _)) = pairs[..i].iter().find(|(_, l)| l == label) {
                return Err(IngestError::Schema(format!(
                    "column {label:?} bound to both {other} and {field}"
                )));
            }
        }
        self.delimiter_byte()?;
        Ok(())
    }

    pub fn validate_year(&self, range: &RangeInclusive<i32>) -> Result<(), IngestError> {
        if range.contains(&self.year) {
            Ok(())
        } else {
            Err(IngestError::YearOutOfRange {
                year: self.year,
                start: *range.start(),
                end: *range.end(),
            })
        }
    }
}
