mod common;

use std::fs;

use common::{fixtures, golden};
use mobnet::ingest::{
    load_dataset, parse_file, parse_records, write_records, write_rejects, CountryCode, Gender, IngestError,
    InstitutionCode, IscedField, MobilityRecord, MobilityType, SchemaMap,
};
use proptest::prelude::*;

fn sort_key(r: &MobilityRecord) -> String {
    format!("{r:?}")
}

fn normalized_multiset(dir: &str) -> Vec<MobilityRecord> {
    let root = fixtures().join("vintages").join(dir);
    let ds = load_dataset(&root.join("data"), &root.join("schemas"), &(2008..=2008)).unwrap();
    assert!(ds.rejects.is_empty());
    let mut out: Vec<_> = ds.records.iter().map(MobilityRecord::with_grant_flag).collect();
    out.sort_by_key(sort_key);
    out
}

#[test]
fn schema_vintages_normalize_identically() {
    let boolean = normalized_multiset("boolean");
    let amount = normalized_multiset("amount");
    assert_eq!(boolean.len(), 17);
    assert_eq!(boolean, amount);
}

#[test]
fn reject_report_matches_golden() {
    let f = fixtures();
    let ds = load_dataset(&f.join("data"), &f.join("schemas"), &(2008..=2013)).unwrap();
    let mut buf = Vec::new();
    write_rejects(&mut buf, &ds.rejects).unwrap();
    assert_eq!(
        String::from_utf8(buf).unwrap(),
        fs::read_to_string(golden("rejects.csv")).unwrap()
    );
    assert_eq!(ds.years.len(), 6);
}

#[test]
fn year_range_limits_loading() {
    let f = fixtures();
    let ds = load_dataset(&f.join("data"), &f.join("schemas"), &(2010..=2011)).unwrap();
    assert_eq!(ds.years.iter().copied().collect::<Vec<_>>(), [2010, 2011]);
    assert!(ds.records.iter().all(|r| r.year == 2010 || r.year == 2011));
}

#[test]
fn schema_year_must_match_file_name() {
    let f = fixtures();
    let mut schema = SchemaMap::load(&f.join("schemas/2008.toml")).unwrap();
    schema.year = 2009;
    assert!(matches!(
        parse_file(&f.join("data"), &schema),
        Err(IngestError::YearMismatch {
            schema: 2009,
            file: 2008,
            ..
        })
    ));
}

fn arb_record() -> impl Strategy<Value = MobilityRecord> {
    let code = "[A-Z]{1,2} [A-Z]{3,7}[0-9]{2}";
    (
        2000..2030i32,
        code,
        code,
        "[A-Z]{2}",
        "[A-Z]{2}",
        prop_oneof![Just(Gender::F), Just(Gender::M), Just(Gender::Unknown)],
        prop::sample::select(IscedField::ALL.to_vec()),
        prop_oneof![Just(MobilityType::Study), Just(MobilityType::Placement)],
        prop_oneof![Just(0.0), (1u32..100_000).prop_map(|c| c as f64 / 100.0)],
    )
        .prop_filter_map("self loop", |(y, h, d, hc, dc, g, f, m, grant)| {
            MobilityRecord::new(
                y,
                InstitutionCode::parse(&h).ok()?,
                InstitutionCode::parse(&d).ok()?,
                CountryCode::parse(&hc).ok()?,
                CountryCode::parse(&dc).ok()?,
                g,
                f,
                m,
                grant,
            )
            .ok()
        })
}

proptest! {
    #[test]
    fn canonical_round_trip(year in 2000..2030i32, records in prop::collection::vec(arb_record(), 0..30)) {
        let records: Vec<_> = records
            .into_iter()
            .map(|mut r| { r.year = year; r })
            .collect();
        let mut buf = Vec::new();
        write_records(&mut buf, &records).unwrap();
        let back = parse_records(buf.as_slice(), &SchemaMap::canonical(year)).unwrap();
        prop_assert!(back.rejects.is_empty());
        prop_assert_eq!(back.records, records);
    }
}
