//! ISCED-F 2013 broad fields of education and the binary STEM split.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::IngestError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum StemClass {
    Stem,
    NonStem,
}

impl StemClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            StemClass::Stem => "STEM",
            StemClass::NonStem => "non-STEM",
        }
    }
}

impl fmt::Display for StemClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// ISCED-F 2013 broad field (two-digit code).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum IscedField {
    GenericProgrammes,
    Education,
    ArtsAndHumanities,
    SocialSciences,
    Business,
    NaturalSciences,
    Icts,
    Engineering,
    Agriculture,
    HealthAndWelfare,
    Services,
}

impl IscedField {
    pub const ALL: [IscedField; 11] = [
        IscedField::GenericProgrammes,
        IscedField::Education,
        IscedField::ArtsAndHumanities,
        IscedField::SocialSciences,
        IscedField::Business,
        IscedField::NaturalSciences,
        IscedField::Icts,
        IscedField::Engineering,
        IscedField::Agriculture,
        IscedField::HealthAndWelfare,
        IscedField::Services,
    ];

    pub fn code(&self) -> &'static str {
        match self {
            IscedField::GenericProgrammes => "00",
            IscedField::Education => "01",
            IscedField::ArtsAndHumanities => "02",
            IscedField::SocialSciences => "03",
            IscedField::Business => "04",
            IscedField::NaturalSciences => "05",
            IscedField::Icts => "06",
            IscedField::Engineering => "07",
            IscedField::Agriculture => "08",
            IscedField::HealthAndWelfare => "09",
            IscedField::Services => "10",
        }
    }

    /// Official broad-field label.
    pub fn label(&self) -> &'static str {
        match self {
            IscedField::GenericProgrammes => "Generic programmes and qualifications",
            IscedField::Education => "Education",
            IscedField::ArtsAndHumanities => "Arts and humanities",
            IscedField::SocialSciences => "Social sciences, journalism and information",
            IscedField::Business => "Business, administration and law",
            IscedField::NaturalSciences => "Natural sciences, mathematics and statistics",
            IscedField::Icts => "ICTs",
            IscedField::Engineering => "Engineering, manufacturing and construction",
            IscedField::Agriculture => "Agriculture, forestry, fisheries and veterinary",
            IscedField::HealthAndWelfare => "Health and welfare",
            IscedField::Services => "Services",
        }
    }

    /// Accepts the broad-field label (case-insensitive, whitespace-insensitive,
    /// `&` read as `and`), the two-digit code, or the code followed by the label
    /// (`"07 Engineering, manufacturing and construction"`).
    pub fn parse(token: &str) -> Result<Self, IngestError> {
        let key = normalize_label(token);
        if key.is_empty() {
            return Err(IngestError::Unclassified(token.to_string()));
        }
        let by_code = |code: &str| Self::ALL.into_iter().find(|f| f.code() == code);
        if let Some(field) = by_code(&key) {
            return Ok(field);
        }
        if let Some(field) = Self::ALL.into_iter().find(|f| normalize_label(f.label()) == key) {
            return Ok(field);
        }
        let alias = match key.as_str() {
            "information and communication technologies" | "icts" | "ict" => Some(IscedField::Icts),
            "generic programmes" => Some(IscedField::GenericProgrammes),
            _ => None,
        };
        if let Some(field) = alias {
            return Ok(field);
        }
        // "05 natural sciences, ..." style
        if let Some((code, rest)) = key.split_once(' ') {
            if let Some(field) = by_code(code) {
                if Self::parse(rest).ok() == Some(field) {
                    return Ok(field);
                }
            }
        }
        Err(IngestError::Unclassified(token.to_string()))
    }

    pub fn stem_class(&self) -> StemClass {
        match self {
            IscedField::NaturalSciences | IscedField::Icts | IscedField::Engineering => StemClass::Stem,
            _ => StemClass::NonStem,
        }
    }
}

impl fmt::Display for IscedField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

fn normalize_label(token: &str) -> String {
    token
        .replace('&', " and ")
        .split_whitespace()
        .map(str::to_lowercase)
        .collect::<Vec<_>>()
        .join(" ")
        .replace(" ,", ",")
}

/// STEM covers engineering/manufacturing/construction, ICTs and natural
/// sciences/mathematics/statistics; every other broad field is non-STEM.
/// Unknown labels are an error, never silently non-STEM.
pub fn classify_stem(field_of_study: &str) -> Result<StemClass, IngestError> {
    IscedField::parse(field_of_study).map(|f| f.stem_class())
}
