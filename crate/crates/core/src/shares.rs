//! Participation shares of students with special needs.
//!
//! Counts come from study-mobility records; population estimates come from an
//! operator-supplied table of higher-education enrollment and the fraction of
//! students reporting an impairment.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{Read, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::Deserialize;
use thiserror::Error;

use crate::format::{fmt_ratio, UNDEFINED};
use crate::ingest::{CountryCode, Gender, MobilityRecord, MobilityType};

#[derive(Debug, Error)]
pub enum SharesError {
    #[error("cannot read population table {path}: {cause}")]
    Io { path: String, cause: String },
    #[error("population table line {line}: {cause}")]
    Population { line: u64, cause: String },
    #[error("year {0} has no study-mobility records")]
    EmptyYear(i32),
    #[error("{country} has {outgoing} outgoing special-needs students but an estimated special-needs population of 0 ({gender})")]
    ZeroPopulation {
        country: CountryCode,
        gender: &'static str,
        outgoing: u64,
    },
    #[error("write failed: {0}")]
    Write(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Deserialize)]
pub enum PopulationGender {
    F,
    M,
    All,
}

impl PopulationGender {
    pub fn as_str(&self) -> &'static str {
        match self {
            PopulationGender::F => "F",
            PopulationGender::M => "M",
            PopulationGender::All => "All",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PopulationRow {
    pub he_enrollment: u64,
    pub impairment_share: f64,
}

impl PopulationRow {
    /// Estimated number of enrolled students with an impairment.
    pub fn sn_population(&self) -> f64 {
        self.he_enrollment as f64 * self.impairment_share
    }
}

#[derive(Debug, Deserialize)]
struct RawRow {
    country: CountryCode,
    gender: PopulationGender,
    he_enrollment: u64,
    impairment_share: f64,
}

/// Rows keyed by (country, gender).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PopulationTable {
    rows: BTreeMap<(CountryCode, PopulationGender), PopulationRow>,
}

impl PopulationTable {
    /// Reads `country,gender,he_enrollment,impairment_share` with a header.
    /// Shares outside `[0, 1]`, duplicate keys, and gendered enrollments that
    /// do not add up to the `All` row are errors.
    pub fn from_reader<R: Read>(source: R, delimiter: u8) -> Result<Self, SharesError> {
        let mut reader = csv::ReaderBuilder::new()
            .delimiter(delimiter)
            .trim(csv::Trim::All)
            .from_reader(source);
        let mut table = Self::default();
        let headers = reader
            .headers()
            .map_err(|e| SharesError::Population {
                line: 1,
                cause: e.to_string(),
            })?
            .clone();
        let mut record = csv::StringRecord::new();
        loop {
            let bad = |line: u64, cause: String| SharesError::Population { line, cause };
            let more = reader
                .read_record(&mut record)
                .map_err(|e| bad(e.position().map_or(0, |p| p.line()), e.to_string()))?;
            if !more {
                break;
            }
            let line = record.position().map_or(0, |p| p.line());
            let row: RawRow = record
                .deserialize(Some(&headers))
                .map_err(|e| bad(line, e.to_string()))?;
            if !(0.0..=1.0).contains(&row.impairment_share) {
                return Err(bad(
                    line,
                    format!("impairment share {} outside [0, 1]", row.impairment_share),
                ));
            }
            let key = (row.country, row.gender);
            let value = PopulationRow {
                he_enrollment: row.he_enrollment,
                impairment_share: row.impairment_share,
            };
            if table.rows.insert(key, value).is_some() {
                return Err(bad(
                    line,
                    format!("duplicate row for {} {}", row.country, row.gender.as_str()),
                ));
            }
        }
        table.check_totals()?;
        Ok(table)
    }

    pub fn load(path: &Path) -> Result<Self, SharesError> {
        let file = std::fs::File::open(path).map_err(|e| SharesError::Io {
            path: path.display().to_string(),
            cause: e.to_string(),
        })?;
        let delimiter = if path.extension().is_some_and(|e| e == "tsv") {
            b'\t'
        } else {
            b','
        };
        Self::from_reader(file, delimiter)
    }

    fn check_totals(&self) -> Result<(), SharesError> {
        for country in self.countries() {
            let (Some(f), Some(m), Some(all)) = (
                self.get(country, PopulationGender::F),
                self.get(country, PopulationGender::M),
                self.get(country, PopulationGender::All),
            ) else {
                continue;
            };
            if f.he_enrollment + m.he_enrollment != all.he_enrollment {
                return Err(SharesError::Population {
                    line: 0,
                    cause: format!(
                        "{country}: F + M enrollment {} differs from All {}",
                        f.he_enrollment + m.he_enrollment,
                        all.he_enrollment
                    ),
                });
            }
        }
        Ok(())
    }

    pub fn insert(&mut self, country: CountryCode, gender: PopulationGender, row: PopulationRow) {
        self.rows.insert((country, gender), row);
    }

    pub fn get(&self, country: CountryCode, gender: PopulationGender) -> Option<&PopulationRow> {
        self.rows.get(&(country, gender))
    }

    pub fn countries(&self) -> BTreeSet<CountryCode> {
        self.rows.keys().map(|(c, _)| *c).collect()
    }
}

/// One year of the special-needs share timeseries.
#[derive(Debug, Clone, PartialEq)]
pub struct YearShare {
    pub year: i32,
    pub sn: u64,
    pub total: u64,
    pub sn_female: u64,
    pub sn_male: u64,
    /// `sn / total * 100`.
    pub pct: f64,
    /// `sn_female / sn_male`, absent when no male special-needs students.
    pub female_male_ratio: Option<f64>,
}

/// Per-year special-needs counts among study mobilities.
pub fn sn_share_timeseries<'a, I>(records: I, years: &[i32]) -> Result<Vec<YearShare>, SharesError>
where
    I: IntoIterator<Item = &'a MobilityRecord>,
{
    let mut counts: BTreeMap<i32, [u64; 4]> = years.iter().map(|&y| (y, [0; 4])).collect();
    for r in records {
        if r.mobility_type != MobilityType::Study {
            continue;
        }
        let Some(c) = counts.get_mut(&r.year) else { continue };
        c[0] += 1;
        if r.has_special_needs() {
            c[1] += 1;
            match r.gender {
                Gender::F => c[2] += 1,
                Gender::M => c[3] += 1,
                Gender::Unknown => {}
            }
        }
    }
    counts
        .into_iter()
        .map(|(year, [total, sn, f, m])| {
            if total == 0 {
                return Err(SharesError::EmptyYear(year));
            }
            Ok(YearShare {
                year,
                sn,
                total,
                sn_female: f,
                sn_male: m,
                pct: sn as f64 / total as f64 * 100.0,
                female_male_ratio: (m > 0).then(|| f as f64 / m as f64),
            })
        })
        .collect()
}

/// Counts split by gender; `all` includes unknown gender.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GenderCounts {
    pub female: u64,
    pub male: u64,
    pub all: u64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct GenderShares {
    pub female: Option<f64>,
    pub male: Option<f64>,
    pub all: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CountryShare {
    pub country: CountryCode,
    pub sn_outgoing: GenderCounts,
    pub total_outgoing: u64,
    pub sn_over_total_pct: Option<f64>,
    /// Outgoing special-needs students over the estimated special-needs
    /// population, in percent.
    pub sn_over_sn_population_pct: GenderShares,
    pub total_over_population_pct: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShareReport {
    pub year: i32,
    pub countries: Vec<CountryShare>,
    /// Over all reported countries.
    pub aggregate: CountryShare,
    /// Countries with outgoing students but no `All` population row.
    pub warnings: Vec<String>,
}

#[derive(Default, Clone, Copy)]
struct Outgoing {
    sn: GenderCounts,
    total: u64,
}

fn pct(
    count: u64,
    population: Option<f64>,
    country: CountryCode,
    gender: &'static str,
) -> Result<Option<f64>, SharesError> {
    match population {
        None => Ok(None),
        Some(p) if p > 0.0 => Ok(Some(count as f64 / p * 100.0)),
        Some(_) if count > 0 => Err(SharesError::ZeroPopulation {
            country,
            gender,
            outgoing: count,
        }),
        Some(_) => Ok(None),
    }
}

fn share_row(
    country: CountryCode,
    out: Outgoing,
    sn_population: [Option<f64>; 3],
    enrollment: Option<u64>,
) -> Result<CountryShare, SharesError> {
    let [f, m, all] = sn_population;
    Ok(CountryShare {
        country,
        sn_outgoing: out.sn,
        total_outgoing: out.total,
        sn_over_total_pct: (out.total > 0).then(|| out.sn.all as f64 / out.total as f64 * 100.0),
        sn_over_sn_population_pct: GenderShares {
            female: pct(out.sn.female, f, country, "F")?,
            male: pct(out.sn.male, m, country, "M")?,
            all: pct(out.sn.all, all, country, "All")?,
        },
        total_over_population_pct: enrollment
            .filter(|&e| e > 0)
            .map(|e| out.total as f64 / e as f64 * 100.0),
    })
}

/// Shares of outgoing study mobility per sending country for `year`.
///
/// Every country appearing in the records or the population table is either
/// reported or named in the warnings. Countries in the table with no outgoing
/// students get 0%.
pub fn country_shares<'a, I>(records: I, year: i32, population: &PopulationTable) -> Result<ShareReport, SharesError>
where
    I: IntoIterator<Item = &'a MobilityRecord>,
{
    let mut outgoing: BTreeMap<CountryCode, Outgoing> = population
        .countries()
        .into_iter()
        .map(|c| (c, Outgoing::default()))
        .collect();
    for r in records {
        if r.year != year || r.mobility_type != MobilityType::Study {
            continue;
        }
        let o = outgoing.entry(r.home_country).or_default();
        o.total += 1;
        if r.has_special_needs() {
            o.sn.all += 1;
            match r.gender {
                Gender::F => o.sn.female += 1,
                Gender::M => o.sn.male += 1,
                Gender::Unknown => {}
            }
        }
    }

    let mut warnings = Vec::new();
    let mut included = Vec::new();
    for (country, out) in outgoing {
        if population.get(country, PopulationGender::All).is_some() {
            included.push((country, out));
        } else {
            warnings.push(format!("{country}: no All population row; omitted from share table"));
        }
    }
    let genders = [PopulationGender::F, PopulationGender::M, PopulationGender::All];
    let sn_pop = |c: CountryCode| genders.map(|g| population.get(c, g).map(PopulationRow::sn_population));
    let enrollment = |c: CountryCode| population.get(c, PopulationGender::All).map(|r| r.he_enrollment);
    let countries = included
        .par_iter()
        .map(|&(c, out)| share_row(c, out, sn_pop(c), enrollment(c)))
        .collect::<Result<Vec<_>, _>>()?;

    // The aggregate sums counts and estimated populations over reported
    // countries; a gendered estimate is absent if any country lacks it.
    let mut total = Outgoing::default();
    let mut sums = [Some(0.0f64); 3];
    let mut enrolled = 0u64;
    for &(c, out) in &included {
        total.total += out.total;
        total.sn.all += out.sn.all;
        total.sn.female += out.sn.female;
        total.sn.male += out.sn.male;
        for (sum, pop) in sums.iter_mut().zip(sn_pop(c)) {
            *sum = sum.zip(pop).map(|(s, p)| s + p);
        }
        enrolled += enrollment(c).unwrap_or(0);
    }
    let aggregate_code = CountryCode::parse("EU").expect("valid code");
    let aggregate = share_row(aggregate_code, total, sums, Some(enrolled))?;

    Ok(ShareReport {
        year,
        countries,
        aggregate,
        warnings,
    })
}

fn cell(v: Option<f64>, places: usize) -> String {
    v.map_or_else(|| UNDEFINED.to_string(), |x| fmt_ratio(x, places))
}

/// CSV `Country,M %,F %,overall %`.
pub fn write_share_csv<W: Write>(sink: W, report: &ShareReport, places: usize) -> Result<(), SharesError> {
    let err = |e: csv::Error| SharesError::Write(e.to_string());
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(["Country", "M %", "F %", "overall %"]).map_err(err)?;
    for c in &report.countries {
        let s = c.sn_over_sn_population_pct;
        w.write_record([
            c.country.to_string(),
            cell(s.male, places),
            cell(s.female, places),
            cell(s.all, places),
        ])
        .map_err(err)?;
    }
    w.flush().map_err(|e| SharesError::Write(e.to_string()))
}

/// CSV `year,sn,total,F,M,pct,F/M`.
pub fn write_timeseries_csv<W: Write>(sink: W, rows: &[YearShare], places: usize) -> Result<(), SharesError> {
    let err = |e: csv::Error| SharesError::Write(e.to_string());
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(["year", "sn", "total", "F", "M", "pct", "F/M"])
        .map_err(err)?;
    for r in rows {
        w.write_record([
            r.year.to_string(),
            r.sn.to_string(),
            r.total.to_string(),
            r.sn_female.to_string(),
            r.sn_male.to_string(),
            fmt_ratio(r.pct, places),
            cell(r.female_male_ratio, places),
        ])
        .map_err(err)?;
    }
    w.flush().map_err(|e| SharesError::Write(e.to_string()))
}
