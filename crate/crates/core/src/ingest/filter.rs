use super::record::{Gender, MobilityRecord, MobilityType};

/// Predicates selecting an analysis cohort. Unset fields match everything.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CohortFilter {
    pub mobility_type: Option<MobilityType>,
    pub special_needs_only: bool,
    pub gender: Option<Gender>,
    pub year: Option<i32>,
}

impl Default for CohortFilter {
    /// Study mobility only, every grant value, every gender and year.
    fn default() -> Self {
        Self {
            mobility_type: Some(MobilityType::Study),
            special_needs_only: false,
            gender: None,
            year: None,
        }
    }
}

impl CohortFilter {
    /// Students on study mobility who received the special-needs supplement.
    pub fn special_needs() -> Self {
        Self {
            special_needs_only: true,
            ..Self::default()
        }
    }

    pub fn with_year(self, year: i32) -> Self {
        Self {
            year: Some(year),
            ..self
        }
    }

    pub fn with_gender(self, gender: Gender) -> Self {
        Self {
            gender: Some(gender),
            ..self
        }
    }

    pub fn matches(&self, r: &MobilityRecord) -> bool {
        self.mobility_type.is_none_or(|t| r.mobility_type == t)
            && (!self.special_needs_only || r.has_special_needs())
            && self.gender.is_none_or(|g| r.gender == g)
            && self.year.is_none_or(|y| r.year == y)
    }
}

/// Order-preserving predicate filter.
pub fn filter_cohort<'a, I>(records: I, filter: &CohortFilter) -> Vec<MobilityRecord>
where
    I: IntoIterator<Item = &'a MobilityRecord>,
{
    records.into_iter().filter(|r| filter.matches(r)).cloned().collect()
}
