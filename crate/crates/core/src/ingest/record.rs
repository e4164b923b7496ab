use std::fmt;

use serde::{Deserialize, Serialize};

use super::field::IscedField;
use super::IngestError;

/// Grant value stored for the boolean "yes" special-needs encoding.
pub const SPECIAL_NEEDS_YES_SENTINEL: f64 = 1.0;

/// Erasmus institution code, e.g. `PL POZNAN01`.
///
/// Node identity is the normalized form: trimmed, uppercased, with every run
/// of whitespace collapsed to a single space. No fuzzy matching is applied.
#[derive(Debug, Clone)]
pub struct InstitutionCode {
    raw: String,
    normalized: String,
}

impl InstitutionCode {
    pub fn parse(raw: &str) -> Result<Self, IngestError> {
        let normalized = normalize_code(raw);
        if normalized.is_empty() {
            return Err(IngestError::EmptyInstitutionCode);
        }
        Ok(Self {
            raw: raw.to_string(),
            normalized,
        })
    }

    pub fn raw(&self) -> &str {
        &self.raw
    }

    pub fn as_str(&self) -> &str {
        &self.normalized
    }
}

fn normalize_code(raw: &str) -> String {
    raw.split_whitespace()
        .map(str::to_uppercase)
        .collect::<Vec<_>>()
        .join(" ")
}

// Identity, ordering and hashing use the normalized code only.
impl PartialEq for InstitutionCode {
    fn eq(&self, other: &Self) -> bool {
        self.normalized == other.normalized
    }
}

impl Eq for InstitutionCode {}

impl PartialOrd for InstitutionCode {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for InstitutionCode {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.normalized.cmp(&other.normalized)
    }
}

impl std::hash::Hash for InstitutionCode {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.normalized.hash(state);
    }
}

impl fmt::Display for InstitutionCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.normalized)
    }
}

impl Serialize for InstitutionCode {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

impl std::str::FromStr for InstitutionCode {
    type Err = IngestError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s)
    }
}

/// ISO 3166 alpha-2 style country code (two uppercase ASCII letters).
///
/// Erasmus exports use `UK` and `EL` rather than `GB`/`GR`; those are kept
/// verbatim.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CountryCode([u8; 2]);

impl CountryCode {
    pub fn parse(token: &str) -> Result<Self, IngestError> {
        let trimmed = token.trim();
        let bytes = trimmed.as_bytes();
        if bytes.len() != 2 || !bytes.iter().all(u8::is_ascii_alphabetic) {
            return Err(IngestError::InvalidCountryCode(token.to_string()));
        }
        Ok(Self([bytes[0].to_ascii_uppercase(), bytes[1].to_ascii_uppercase()]))
    }

    pub fn as_str(&self) -> &str {
        // Both bytes are ASCII letters by construction.
        std::str::from_utf8(&self.0).expect("ascii country code")
    }
}

impl fmt::Display for CountryCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for CountryCode {
    type Err = IngestError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s)
    }
}

impl Serialize for CountryCode {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for CountryCode {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Self::parse(&s).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Gender {
    F,
    M,
    Unknown,
}

impl Gender {
    pub fn as_str(&self) -> &'static str {
        match self {
            Gender::F => "F",
            Gender::M => "M",
            Gender::Unknown => "Unknown",
        }
    }
}

impl fmt::Display for Gender {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum MobilityType {
    Study,
    Placement,
    Other,
}

impl MobilityType {
    pub fn as_str(&self) -> &'static str {
        match self {
            MobilityType::Study => "Study",
            MobilityType::Placement => "Placement",
            MobilityType::Other => "Other",
        }
    }
}

impl fmt::Display for MobilityType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One normalized student-mobility row.
#[derive(Debug, Clone, PartialEq)]
pub struct MobilityRecord {
    pub year: i32,
    pub home_institution: InstitutionCode,
    pub host_institution: InstitutionCode,
    pub home_country: CountryCode,
    pub host_country: CountryCode,
    pub gender: Gender,
    pub field_of_study: IscedField,
    pub mobility_type: MobilityType,
    /// Extra funding for special needs. The boolean "yes" encoding is stored
    /// as [`SPECIAL_NEEDS_YES_SENTINEL`]; only `> 0` is ever tested downstream.
    pub special_needs_grant: f64,
}

impl MobilityRecord {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        year: i32,
        home_institution: InstitutionCode,
        host_institution: InstitutionCode,
        home_country: CountryCode,
        host_country: CountryCode,
        gender: Gender,
        field_of_study: IscedField,
        mobility_type: MobilityType,
        special_needs_grant: f64,
    ) -> Result<Self, IngestError> {
        if home_institution == host_institution {
            return Err(IngestError::SelfLoop(home_institution.to_string()));
        }
        if !(special_needs_grant >= 0.0 && special_needs_grant.is_finite()) {
            return Err(IngestError::InvalidGrant(special_needs_grant.to_string()));
        }
        Ok(Self {
            year,
            home_institution,
            host_institution,
            home_country,
            host_country,
            gender,
            field_of_study,
            mobility_type,
            special_needs_grant,
        })
    }

    pub fn has_special_needs(&self) -> bool {
        self.special_needs_grant > 0.0
    }

    /// Copy with the grant collapsed to the yes/no encoding (sentinel or 0),
    /// so records from amount-coded and boolean-coded vintages compare equal.
    pub fn with_grant_flag(&self) -> Self {
        let mut out = self.clone();
        out.special_needs_grant = if self.has_special_needs() {
            SPECIAL_NEEDS_YES_SENTINEL
        } else {
            0.0
        };
        out
    }
}
