//! Line-oriented catalog files.
//!
//! One record per entry, as a flat JSON object (`jsonl`) or a CSV row with the
//! same columns. Integers are written as decimal strings so consumers with
//! 64-bit integers never truncate them. Key order is fixed:
//!
//! `family, m, n, x, y, z, a, b, c1, c2, d1, d2, content, primitive_x … primitive_d2`
//!
//! followed by an optional `classification` key. Brute-force records have
//! family `"bruteforce"` and null `m`, `n`.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::families::{evaluate, FamilyId};
use crate::piped::MonoclinicPiped;
use crate::search::{CatalogEntry, Source};
use crate::validity::Classification;
use crate::Error;

pub const BRUTE_FORCE_FAMILY: &str = "bruteforce";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Jsonl,
    Csv,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "jsonl" => Ok(Format::Jsonl),
            "csv" => Ok(Format::Csv),
            _ => Err(Error::InvalidArgument(format!(
                "unknown format {s:?} (jsonl or csv)"
            ))),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Jsonl => "jsonl",
            Format::Csv => "csv",
        })
    }
}

/// Flat wire form of a [`CatalogEntry`]. Field order is the key order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CatalogRecord {
    pub family: String,
    pub m: Option<String>,
    pub n: Option<String>,
    pub x: String,
    pub y: String,
    pub z: String,
    pub a: String,
    pub b: String,
    pub c1: String,
    pub c2: String,
    pub d1: String,
    pub d2: String,
    pub content: String,
    pub primitive_x: String,
    pub primitive_y: String,
    pub primitive_z: String,
    pub primitive_a: String,
    pub primitive_b: String,
    pub primitive_c1: String,
    pub primitive_c2: String,
    pub primitive_d1: String,
    pub primitive_d2: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classification: Option<String>,
}

/// Column names in order, without the optional `classification`.
pub const COLUMNS: [&str; 22] = [
    "family",
    "m",
    "n",
    "x",
    "y",
    "z",
    "a",
    "b",
    "c1",
    "c2",
    "d1",
    "d2",
    "content",
    "primitive_x",
    "primitive_y",
    "primitive_z",
    "primitive_a",
    "primitive_b",
    "primitive_c1",
    "primitive_c2",
    "primitive_d1",
    "primitive_d2",
];

impl CatalogRecord {
    pub fn from_entry(entry: &CatalogEntry, classification: Option<Classification>) -> Self {
        let (family, m, n) = match &entry.source {
            Source::Family { id, m, n } => {
                (id.to_string(), Some(m.to_string()), Some(n.to_string()))
            }
            Source::BruteForce => (BRUTE_FORCE_FAMILY.to_string(), None, None),
        };
        let [x, y, z, a, b, c1, c2, d1, d2] =
            entry.raw.lengths().each_ref().map(ToString::to_string);
        let [px, py, pz, pa, pb, pc1, pc2, pd1, pd2] = entry
            .primitive
            .lengths()
            .each_ref()
            .map(ToString::to_string);
        Self {
            family,
            m,
            n,
            x,
            y,
            z,
            a,
            b,
            c1,
            c2,
            d1,
            d2,
            content: entry.content.to_string(),
            primitive_x: px,
            primitive_y: py,
            primitive_z: pz,
            primitive_a: pa,
            primitive_b: pb,
            primitive_c1: pc1,
            primitive_c2: pc2,
            primitive_d1: pd1,
            primitive_d2: pd2,
            classification: classification.map(|c| c.as_str().to_string()),
        }
    }

    /// Rebuilds and cross-checks the entry: numbers must be canonical decimals,
    /// family records must match the formulas at `(m, n)`, and the primitive
    /// tuple and content must be the ones derived from the raw tuple.
    pub fn to_entry(&self) -> Result<(CatalogEntry, Option<Classification>), Error> {
        let raw = MonoclinicPiped::new(
            [
                &self.x, &self.y, &self.z, &self.a, &self.b, &self.c1, &self.c2, &self.d1, &self.d2,
            ]
            .map(|s| decimal(s))
            .into_iter()
            .collect::<Result<Vec<_>, _>>()?
            .try_into()
            .expect("nine fields"),
        )?;
        let source = if self.family == BRUTE_FORCE_FAMILY {
            if self.m.is_some() || self.n.is_some() {
                return Err(Error::Parse("bruteforce records carry no m, n".into()));
            }
            Source::BruteForce
        } else {
            let id: FamilyId = self.family.parse()?;
            let field = |v: &Option<String>, name: &str| -> Result<BigInt, Error> {
                decimal(
                    v.as_deref()
                        .ok_or_else(|| Error::Parse(format!("missing {name}")))?,
                )
            };
            let (m, n) = (field(&self.m, "m")?, field(&self.n, "n")?);
            if evaluate(id, &m, &n)? != raw {
                return Err(Error::Parse(format!(
                    "lengths do not match {id} at ({m}, {n})"
                )));
            }
            Source::Family { id, m, n }
        };
        let entry = CatalogEntry::new(source, raw)?;
        let stated = CatalogRecord::from_entry(&entry, None);
        if stated.content != self.content || stated.primitive_fields() != self.primitive_fields() {
            return Err(Error::Parse(
                "content or primitive tuple inconsistent with raw lengths".into(),
            ));
        }
        let classification = self
            .classification
            .as_deref()
            .map(str::parse::<Classification>)
            .transpose()?;
        Ok((entry, classification))
    }

    fn primitive_fields(&self) -> [&str; 9] {
        [
            &self.primitive_x,
            &self.primitive_y,
            &self.primitive_z,
            &self.primitive_a,
            &self.primitive_b,
            &self.primitive_c1,
            &self.primitive_c2,
            &self.primitive_d1,
            &self.primitive_d2,
        ]
        .map(String::as_str)
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("plain strings always serialize")
    }
}

/// Strict decimal: the text must be exactly how the integer prints.
fn decimal(text: &str) -> Result<BigInt, Error> {
    let v: BigInt = text
        .parse()
        .map_err(|_| Error::Parse(format!("not an integer: {text:?}")))?;
    if v.to_string() != text {
        return Err(Error::Parse(format!("non-canonical integer: {text:?}")));
    }
    Ok(v)
}

/// A catalog line with its optional classification.
pub type CatalogItem = (CatalogEntry, Option<Classification>);

pub fn write_catalog<W: Write>(out: W, items: &[CatalogItem], format: Format) -> Result<(), Error> {
    let records: Vec<CatalogRecord> = items
        .iter()
        .map(|(e, c)| CatalogRecord::from_entry(e, *c))
        .collect();
    write_records(out, &records, format)
}

pub fn write_records<W: Write>(
    mut out: W,
    records: &[CatalogRecord],
    format: Format,
) -> Result<(), Error> {
    match format {
        Format::Jsonl => {
            for r in records {
                writeln!(out, "{}", r.to_json_line())?;
            }
        }
        Format::Csv => {
            let with_class = records.iter().any(|r| r.classification.is_some());
            let mut w = csv::WriterBuilder::new()
                .has_headers(false)
                .from_writer(out);
            let mut header: Vec<&str> = COLUMNS.to_vec();
            if with_class {
                header.push("classification");
            }
            w.write_record(&header).map_err(csv_error)?;
            for r in records {
                let mut row: Vec<&str> = vec![
                    &r.family,
                    r.m.as_deref().unwrap_or(""),
                    r.n.as_deref().unwrap_or(""),
                    &r.x,
                    &r.y,
                    &r.z,
                    &r.a,
                    &r.b,
                    &r.c1,
                    &r.c2,
                    &r.d1,
                    &r.d2,
                    &r.content,
                ];
                row.extend(r.primitive_fields());
                if with_class {
                    row.push(r.classification.as_deref().unwrap_or(""));
                }
                w.write_record(&row).map_err(csv_error)?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

fn csv_error(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e.to_string()))
}

pub fn serialize_catalog(items: &[CatalogItem], format: Format) -> String {
    let mut buf = Vec::new();
    write_catalog(&mut buf, items, format).expect("writing to memory");
    String::from_utf8(buf).expect("catalog text is ASCII")
}

/// Guesses the format from the first non-empty line.
pub fn detect_format(text: &str) -> Format {
    match text.lines().find(|l| !l.trim().is_empty()) {
        Some(l) if !l.trim_start().starts_with('{') => Format::Csv,
        _ => Format::Jsonl,
    }
}

/// Parses a catalog into wire records, reporting the 1-based line of any failure.
pub fn parse_records(text: &str, format: Format) -> Result<Vec<CatalogRecord>, Error> {
    match format {
        Format::Jsonl => text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty())
            .map(|(k, l)| {
                serde_json::from_str(l).map_err(|e| Error::CatalogParse {
                    line: k + 1,
                    message: e.to_string(),
                })
            })
            .collect(),
        Format::Csv => {
            let mut reader = csv::ReaderBuilder::new().from_reader(text.as_bytes());
            let headers = reader
                .headers()
                .map_err(|e| Error::CatalogParse {
                    line: 1,
                    message: e.to_string(),
                })?
                .clone();
            let expected: Vec<&str> = COLUMNS.to_vec();
            let got: Vec<&str> = headers.iter().collect();
            if got[..got.len().min(COLUMNS.len())] != expected[..]
                || got.len() > COLUMNS.len() + 1
                || (got.len() == COLUMNS.len() + 1 && got[COLUMNS.len()] != "classification")
            {
                return Err(Error::CatalogParse {
                    line: 1,
                    message: "unexpected header row".into(),
                });
            }
            let mut out = Vec::new();
            for row in reader.records() {
                let row = row.map_err(|e| Error::CatalogParse {
                    line: e.position().map_or(0, |p| p.line() as usize),
                    message: e.to_string(),
                })?;
                let line = row.position().map_or(0, |p| p.line() as usize);
                let cell = |k: usize| row.get(k).unwrap_or("").to_string();
                let opt = |k: usize| Some(cell(k)).filter(|s| !s.is_empty());
                out.push(CatalogRecord {
                    family: cell(0),
                    m: opt(1),
                    n: opt(2),
                    x: cell(3),
                    y: cell(4),
                    z: cell(5),
                    a: cell(6),
                    b: cell(7),
                    c1: cell(8),
                    c2: cell(9),
                    d1: cell(10),
                    d2: cell(11),
                    content: cell(12),
                    primitive_x: cell(13),
                    primitive_y: cell(14),
                    primitive_z: cell(15),
                    primitive_a: cell(16),
                    primitive_b: cell(17),
                    primitive_c1: cell(18),
                    primitive_c2: cell(19),
                    primitive_d1: cell(20),
                    primitive_d2: cell(21),
                    classification: opt(22),
                });
                if row.len() != got.len() {
                    return Err(Error::CatalogParse {
                        line,
                        message: format!("expected {} fields, found {}", got.len(), row.len()),
                    });
                }
            }
            Ok(out)
        }
    }
}

/// Parses and validates a catalog in either format.
pub fn parse_catalog(text: &str) -> Result<Vec<CatalogItem>, Error> {
    let format = detect_format(text);
    let records = parse_records(text, format)?;
    let line_numbers = record_lines(text, format);
    records
        .iter()
        .zip(line_numbers)
        .map(|(r, line)| {
            r.to_entry().map_err(|e| Error::CatalogParse {
                line,
                message: e.to_string(),
            })
        })
        .collect()
}

fn record_lines(text: &str, format: Format) -> Vec<usize> {
    let skip = usize::from(format == Format::Csv);
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .skip(skip)
        .map(|(k, _)| k + 1)
        .collect()
}
