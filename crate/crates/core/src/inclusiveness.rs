//! Relative inclusiveness of receiving institutions.
//!
//! For a university `u` in country `c` and one year,
//!
//! ```text
//! I   = (i_sn,u / i_sn,c) * (i_c / i_u)
//! I^B = (I - 1) / (I + 1)
//! ```
//!
//! where `i_sn` counts incoming special-needs students and `i` all incoming
//! students. `I^B` lies in `[-1, 1)`: 0 when the university's share of its
//! country's special-needs arrivals equals its share of all arrivals, positive
//! when it takes in proportionally more.
//!
//! The published form of the bounded transform is `(I + 1) / (I - 1)`, which
//! is undefined at `I = 1` and never lands in `[-1, 1]` for `I >= 0`; the
//! transform used here is the one with the stated range and zero point.
//!
//! All values are exact rationals.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::format::fmt_rational;
use crate::ingest::{CountryCode, InstitutionCode};
use crate::network::Network;

#[derive(Debug, Error)]
pub enum InclusivenessError {
    #[error("{country} has no incoming special-needs students in {year}")]
    CountryNoIncomingSn { country: CountryCode, year: i32 },
    #[error("{institution} has no incoming students in {year}")]
    UniversityNoIncoming { institution: String, year: i32 },
    #[error("{institution} is not in the {year} network")]
    UnknownInstitution { institution: String, year: i32 },
    #[error("{institution} belongs to {sn} in the special-needs network but {full} in the full network")]
    CountryMismatch {
        institution: String,
        sn: CountryCode,
        full: CountryCode,
    },
    #[error("inconsistent counts for {institution} in {year}: {detail}")]
    InconsistentCounts {
        institution: String,
        year: i32,
        detail: String,
    },
    #[error("networks are for {sn} and {full}, not the same year")]
    YearMismatch { sn: i32, full: i32 },
    #[error("negative index {0}")]
    NegativeIndex(String),
    #[error("no network for year {0}")]
    MissingYear(i32),
    #[error("no score for {institution} in {year}")]
    MissingScore { institution: String, year: i32 },
    #[error("empty window")]
    EmptyWindow,
    #[error("write failed: {0}")]
    Write(String),
}

/// The four incoming counts behind one index value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IncomingCounts {
    pub sn_university: u64,
    pub sn_country: u64,
    pub university: u64,
    pub country: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InclusivenessScore {
    pub institution: InstitutionCode,
    pub year: i32,
    pub country: CountryCode,
    pub counts: IncomingCounts,
    pub raw_index: BigRational,
    pub bounded_index: BigRational,
}

fn ratio(n: u64, d: u64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `(I - 1) / (I + 1)`: strictly increasing from `[0, inf)` onto `[-1, 1)`.
pub fn bound(index: &BigRational) -> Result<BigRational, InclusivenessError> {
    if index.is_negative() {
        return Err(InclusivenessError::NegativeIndex(index.to_string()));
    }
    let one = BigRational::one();
    Ok((index - &one) / (index + &one))
}

/// Floating-point form of [`bound`].
pub fn bound_f64(index: f64) -> Result<f64, InclusivenessError> {
    if index.is_nan() || index < 0.0 {
        return Err(InclusivenessError::NegativeIndex(index.to_string()));
    }
    if index.is_infinite() {
        return Ok(1.0);
    }
    Ok((index - 1.0) / (index + 1.0))
}

/// `I` from the four counts. Zero country special-needs or university totals
/// are errors, as is any count exceeding its aggregate.
pub fn raw_index(
    counts: IncomingCounts,
    institution: &InstitutionCode,
    country: CountryCode,
    year: i32,
) -> Result<BigRational, InclusivenessError> {
    let IncomingCounts {
        sn_university,
        sn_country,
        university,
        country: country_total,
    } = counts;
    if sn_country == 0 {
        return Err(InclusivenessError::CountryNoIncomingSn { country, year });
    }
    if university == 0 {
        return Err(InclusivenessError::UniversityNoIncoming {
            institution: institution.to_string(),
            year,
        });
    }
    let inconsistent = |detail: String| InclusivenessError::InconsistentCounts {
        institution: institution.to_string(),
        year,
        detail,
    };
    if sn_university > sn_country {
        return Err(inconsistent(format!("i_sn,u {sn_university} > i_sn,c {sn_country}")));
    }
    if university > country_total {
        return Err(inconsistent(format!("i_u {university} > i_c {country_total}")));
    }
    if sn_university > university {
        return Err(inconsistent(format!("i_sn,u {sn_university} > i_u {university}")));
    }
    Ok(ratio(sn_university, sn_country) * ratio(country_total, university))
}

/// Build a score from explicit counts.
pub fn score_from_counts(
    institution: InstitutionCode,
    year: i32,
    country: CountryCode,
    counts: IncomingCounts,
) -> Result<InclusivenessScore, InclusivenessError> {
    let raw = raw_index(counts, &institution, country, year)?;
    let bounded = bound(&raw)?;
    Ok(InclusivenessScore {
        institution,
        year,
        country,
        counts,
        raw_index: raw,
        bounded_index: bounded,
    })
}

fn country_in_strength(network: &Network, strengths: &[u64], country: CountryCode) -> u64 {
    network
        .nodes()
        .iter()
        .zip(strengths)
        .filter(|(n, _)| n.country == country)
        .map(|(_, &s)| s)
        .sum()
}

/// Index of `institution` from the year's special-needs network and the
/// network of all incoming students (same year). Counts are weighted
/// in-strengths.
pub fn compute_index(
    institution: &InstitutionCode,
    sn_network: &Network,
    full_network: &Network,
) -> Result<InclusivenessScore, InclusivenessError> {
    let year = sn_network.year();
    if full_network.year() != year {
        return Err(InclusivenessError::YearMismatch {
            sn: year,
            full: full_network.year(),
        });
    }
    let unknown = || InclusivenessError::UnknownInstitution {
        institution: institution.to_string(),
        year,
    };
    let sn_id = sn_network.node_id(institution).ok_or_else(unknown)?;
    let full_id = full_network.node_id(institution).ok_or_else(unknown)?;
    let country = sn_network.node(sn_id).country;
    let full_country = full_network.node(full_id).country;
    if country != full_country {
        return Err(InclusivenessError::CountryMismatch {
            institution: institution.to_string(),
            sn: country,
            full: full_country,
        });
    }
    let sn_strength = sn_network.in_strengths();
    let full_strength = full_network.in_strengths();
    let counts = IncomingCounts {
        sn_university: sn_strength[sn_id],
        sn_country: country_in_strength(sn_network, &sn_strength, country),
        university: full_strength[full_id],
        country: country_in_strength(full_network, &full_strength, country),
    };
    score_from_counts(institution.clone(), year, country, counts)
}

/// Institutions with at least one incoming special-needs student in every
/// window year.
pub fn persistent_receivers(
    sn_networks: &BTreeMap<i32, Network>,
    window: &[i32],
) -> Result<BTreeSet<InstitutionCode>, InclusivenessError> {
    let mut survivors: Option<BTreeSet<InstitutionCode>> = None;
    for &year in window {
        let net = sn_networks.get(&year).ok_or(InclusivenessError::MissingYear(year))?;
        let receiving: BTreeSet<InstitutionCode> = net
            .in_strengths()
            .iter()
            .enumerate()
            .filter(|(_, &s)| s >= 1)
            .map(|(v, _)| net.node(v).code.clone())
            .collect();
        survivors = Some(match survivors {
            None => receiving,
            Some(prev) => prev.intersection(&receiving).cloned().collect(),
        });
    }
    Ok(survivors.unwrap_or_default())
}

#[derive(Debug, Clone, PartialEq)]
pub struct PeriodAverage {
    pub institution: InstitutionCode,
    pub window: Vec<i32>,
    pub mean_bounded_index: BigRational,
}

/// Mean of the yearly bounded index over `window`. `scores` may contain other
/// years and institutions; only `institution`'s window years are used.
pub fn period_average(
    institution: &InstitutionCode,
    scores: &[InclusivenessScore],
    window: &[i32],
) -> Result<PeriodAverage, InclusivenessError> {
    if window.is_empty() {
        return Err(InclusivenessError::EmptyWindow);
    }
    let mut sum = BigRational::zero();
    for &year in window {
        let score = scores
            .iter()
            .find(|s| s.year == year && &s.institution == institution)
            .ok_or_else(|| InclusivenessError::MissingScore {
                institution: institution.to_string(),
                year,
            })?;
        sum += &score.bounded_index;
    }
    Ok(PeriodAverage {
        institution: institution.clone(),
        window: window.to_vec(),
        mean_bounded_index: sum / BigRational::from_integer(BigInt::from(window.len())),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SlopegraphRow {
    pub institution: InstitutionCode,
    pub early_mean: BigRational,
    pub late_mean: BigRational,
    pub delta: BigRational,
}

/// Early and late window means per institution, sorted by late mean
/// descending (ties by institution code).
pub fn slopegraph_table(
    institutions: &BTreeSet<InstitutionCode>,
    scores: &[InclusivenessScore],
    early: &[i32],
    late: &[i32],
) -> Result<Vec<SlopegraphRow>, InclusivenessError> {
    let mut rows = institutions
        .iter()
        .map(|inst| {
            let e = period_average(inst, scores, early)?.mean_bounded_index;
            let l = period_average(inst, scores, late)?.mean_bounded_index;
            Ok(SlopegraphRow {
                institution: inst.clone(),
                delta: &l - &e,
                early_mean: e,
                late_mean: l,
            })
        })
        .collect::<Result<Vec<_>, InclusivenessError>>()?;
    rows.sort_by(|a, b| {
        b.late_mean
            .cmp(&a.late_mean)
            .then_with(|| a.institution.cmp(&b.institution))
    });
    Ok(rows)
}

/// CSV `institution,early_mean,late_mean,delta`.
pub fn write_slopegraph_csv<W: Write>(
    sink: W,
    rows: &[SlopegraphRow],
    places: usize,
) -> Result<(), InclusivenessError> {
    let err = |e: csv::Error| InclusivenessError::Write(e.to_string());
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(["institution", "early_mean", "late_mean", "delta"])
        .map_err(err)?;
    for r in rows {
        w.write_record([
            r.institution.to_string(),
            fmt_rational(&r.early_mean, places),
            fmt_rational(&r.late_mean, places),
            fmt_rational(&r.delta, places),
        ])
        .map_err(err)?;
    }
    w.flush().map_err(|e| InclusivenessError::Write(e.to_string()))
}

/// CSV of yearly scores: `institution,country,year,i_sn_u,i_sn_c,i_u,i_c,index,bounded_index`.
pub fn write_scores_csv<W: Write>(
    sink: W,
    scores: &[InclusivenessScore],
    places: usize,
) -> Result<(), InclusivenessError> {
    let err = |e: csv::Error| InclusivenessError::Write(e.to_string());
    let mut w = csv::Writer::from_writer(sink);
    w.write_record([
        "institution",
        "country",
        "year",
        "i_sn_u",
        "i_sn_c",
        "i_u",
        "i_c",
        "index",
        "bounded_index",
    ])
    .map_err(err)?;
    for s in scores {
        w.write_record([
            s.institution.to_string(),
            s.country.to_string(),
            s.year.to_string(),
            s.counts.sn_university.to_string(),
            s.counts.sn_country.to_string(),
            s.counts.university.to_string(),
            s.counts.country.to_string(),
            fmt_rational(&s.raw_index, places),
            fmt_rational(&s.bounded_index, places),
        ])
        .map_err(err)?;
    }
    w.flush().map_err(|e| InclusivenessError::Write(e.to_string()))
}
