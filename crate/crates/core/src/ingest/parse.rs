use std::io::{Read, Write};

use super::field::IscedField;
use super::record::{CountryCode, InstitutionCode, MobilityRecord};
use super::schema::{GrantCell, SchemaMap, CANONICAL_FIELDS};
use super::IngestError;

/// A row that could not be normalized.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RejectReport {
    pub file: String,
    /// 1-based line number in the source file (the header is line 1).
    pub row: u64,
    pub field: String,
    pub cause: String,
}

#[derive(Debug, Clone, Default)]
pub struct ParseOutcome {
    pub records: Vec<MobilityRecord>,
    pub rejects: Vec<RejectReport>,
    /// Rows whose special-needs cell was empty; they were read as grant 0.
    pub missing_special_needs: usize,
}

struct Columns {
    idx: [usize; 8],
}

impl Columns {
    fn resolve(headers: &csv::StringRecord, schema: &SchemaMap) -> Result<Self, IngestError> {
        let mut idx = [0usize; 8];
        for (slot, (_, label)) in idx.iter_mut().zip(schema.columns.pairs()) {
            *slot = headers
                .iter()
                .position(|h| h.trim().trim_start_matches('\u{feff}') == label.trim())
                .ok_or_else(|| IngestError::MissingColumn(label.to_string()))?;
        }
        Ok(Self { idx })
    }
}

/// Parse one delimiter-separated file into normalized records.
///
/// Malformed rows become [`RejectReport`]s; the `file` field of each report is
/// left empty for the caller to fill in. Record order follows row order.
pub fn parse_records<R: Read>(source: R, schema: &SchemaMap) -> Result<ParseOutcome, IngestError> {
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(schema.delimiter_byte()?)
        .flexible(true)
        .from_reader(source);
    let headers = reader.headers().map_err(fatal)?.clone();
    let columns = Columns::resolve(&headers, schema)?;

    let mut out = ParseOutcome::default();
    let mut row = csv::ByteRecord::new();
    loop {
        match reader.read_byte_record(&mut row) {
            Ok(false) => break,
            Ok(true) => {}
            Err(e) => return Err(fatal(e)),
        }
        let line = row.position().map(|p| p.line()).unwrap_or(0);
        if row.iter().all(|cell| cell.iter().all(u8::is_ascii_whitespace)) {
            continue;
        }
        match decode_row(&row, &columns, schema) {
            Ok((record, missing_sn)) => {
                out.missing_special_needs += usize::from(missing_sn);
                out.records.push(record);
            }
            Err((field, cause)) => out.rejects.push(RejectReport {
                file: String::new(),
                row: line,
                field: field.to_string(),
                cause,
            }),
        }
    }
    if out.missing_special_needs > 0 {
        log::warn!(
            "{}: {} rows without a special-needs value read as grant 0",
            schema.year,
            out.missing_special_needs
        );
    }
    Ok(out)
}

fn fatal(e: csv::Error) -> IngestError {
    IngestError::Unreadable(e.to_string())
}

type RowError = (&'static str, String);

fn decode_row(
    row: &csv::ByteRecord,
    columns: &Columns,
    schema: &SchemaMap,
) -> Result<(MobilityRecord, bool), RowError> {
    let mut cells = [""; 8];
    for (i, (&idx, name)) in columns.idx.iter().zip(CANONICAL_FIELDS).enumerate() {
        let bytes = row.get(idx).ok_or_else(|| (name, "missing cell".to_string()))?;
        cells[i] = std::str::from_utf8(bytes).map_err(|_| (name, "invalid UTF-8".to_string()))?;
    }
    let [home, host, home_country, host_country, gender, field, mobility, sn] = cells;
    let cause = |name: &'static str| move |e: IngestError| (name, e.to_string());

    let home = InstitutionCode::parse(home).map_err(cause("home_institution"))?;
    let host = InstitutionCode::parse(host).map_err(cause("host_institution"))?;
    let home_country = CountryCode::parse(home_country).map_err(cause("home_country"))?;
    let host_country = CountryCode::parse(host_country).map_err(cause("host_country"))?;
    let field = IscedField::parse(field).map_err(cause("field_of_study"))?;
    let decoders = &schema.decoders;
    let (grant, missing) = match decoders.decode_special_needs(sn).map_err(cause("special_needs"))? {
        GrantCell::Value(v) => (v, false),
        GrantCell::Missing => (0.0, true),
    };
    let record = MobilityRecord::new(
        schema.year,
        home,
        host,
        home_country,
        host_country,
        decoders.decode_gender(gender),
        field,
        decoders.decode_mobility_type(mobility),
        grant,
    )
    .map_err(cause("host_institution"))?;
    Ok((record, missing))
}

/// Write records in the canonical layout of [`SchemaMap::canonical`].
pub fn write_records<W: Write>(sink: W, records: &[MobilityRecord]) -> Result<(), IngestError> {
    let mut writer = csv::Writer::from_writer(sink);
    let err = |e: csv::Error| IngestError::Write(e.to_string());
    writer.write_record(CANONICAL_FIELDS).map_err(err)?;
    for r in records {
        writer
            .write_record([
                r.home_institution.as_str(),
                r.host_institution.as_str(),
                r.home_country.as_str(),
                r.host_country.as_str(),
                r.gender.as_str(),
                r.field_of_study.label(),
                r.mobility_type.as_str(),
                &r.special_needs_grant.to_string(),
            ])
            .map_err(err)?;
    }
    writer.flush().map_err(|e| IngestError::Write(e.to_string()))
}

/// CSV with columns `file,row,field,cause`.
pub fn write_rejects<W: Write>(sink: W, rejects: &[RejectReport]) -> Result<(), IngestError> {
    let mut writer = csv::Writer::from_writer(sink);
    let err = |e: csv::Error| IngestError::Write(e.to_string());
    writer.write_record(["file", "row", "field", "cause"]).map_err(err)?;
    for r in rejects {
        writer
            .write_record([&r.file, &r.row.to_string(), &r.field, &r.cause])
            .map_err(err)?;
    }
    writer.flush().map_err(|e| IngestError::Write(e.to_string()))
}
