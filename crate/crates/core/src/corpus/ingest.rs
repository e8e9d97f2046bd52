//! Article-level CSV ingestion, filtering and yearly aggregation.
//!
//! The input schema is fixed: `id,year,field,n_references,n_pages` with a
//! header row. Empty cells mean missing data; any non-empty cell that fails
//! to parse is a malformed-CSV error carrying the line number.

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::ops::RangeInclusive;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::config::csv_error;
use crate::error::{Error, Result};
use crate::montecarlo::median_sorted;

pub const ARTICLE_COLUMNS: [&str; 5] = ["id", "year", "field", "n_references", "n_pages"];

/// One article row of a dataset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArticleRecord {
    pub id: String,
    pub year: i32,
    pub field_label: String,
    pub n_references: Option<u64>,
    pub n_pages: Option<u64>,
}

/// Per-year, per-field summary of reference-list lengths.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct YearlyAggregate {
    pub year: i32,
    pub field_label: String,
    pub article_count: u64,
    pub mean_refs: f64,
    pub median_refs: f64,
}

/// Ingestion filter settings.
#[derive(Debug, Clone)]
pub struct IngestOptions {
    /// Rows with fewer references are dropped (letters, editorials, ...).
    pub min_refs: u64,
    /// Plausibility window for publication years.
    pub year_range: RangeInclusive<i32>,
}

impl Default for IngestOptions {
    fn default() -> Self {
        Self {
            min_refs: 5,
            year_range: 1500..=2100,
        }
    }
}

/// Why rows were dropped, by count.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct DropReport {
    pub retained: u64,
    pub missing_year: u64,
    pub missing_references: u64,
    pub below_min_refs: u64,
    pub year_out_of_range: u64,
}

impl DropReport {
    pub fn dropped(&self) -> u64 {
        self.missing_year + self.missing_references + self.below_min_refs + self.year_out_of_range
    }
}

/// Loads an article CSV and applies the standard filters: rows missing a
/// year or a reference count are dropped, as are rows with fewer than
/// `min_refs` references (a count equal to `min_refs` is retained).
pub fn load_and_filter(
    path: &Path,
    opts: &IngestOptions,
) -> Result<(Vec<ArticleRecord>, DropReport)> {
    let file = std::fs::File::open(path)?;
    load_and_filter_reader(file, opts)
}

pub fn load_and_filter_reader<R: Read>(
    reader: R,
    opts: &IngestOptions,
) -> Result<(Vec<ArticleRecord>, DropReport)> {
    let mut r = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = r.headers().map_err(|e| csv_error(&e))?.clone();
    let mut index = [0usize; 5];
    for (slot, name) in index.iter_mut().zip(ARTICLE_COLUMNS) {
        *slot = headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Column(format!("missing column `{name}`")))?;
    }
    for header in headers.iter() {
        if !ARTICLE_COLUMNS.contains(&header) {
            return Err(Error::Column(format!("unknown column `{header}`")));
        }
    }

    let [id_at, year_at, field_at, refs_at, pages_at] = index;
    let mut records = Vec::new();
    let mut report = DropReport::default();
    for record in r.records() {
        let record = record.map_err(|e| csv_error(&e))?;
        let line = record.position().map(|p| p.line());
        let year = parse_optional::<i32>(&record[year_at], "year", line)?;
        let n_references = parse_optional::<u64>(&record[refs_at], "n_references", line)?;
        let n_pages = parse_optional::<u64>(&record[pages_at], "n_pages", line)?;

        let Some(year) = year else {
            report.missing_year += 1;
            continue;
        };
        if !opts.year_range.contains(&year) {
            report.year_out_of_range += 1;
            continue;
        }
        let Some(refs) = n_references else {
            report.missing_references += 1;
            continue;
        };
        if refs < opts.min_refs {
            report.below_min_refs += 1;
            continue;
        }
        report.retained += 1;
        records.push(ArticleRecord {
            id: record[id_at].to_string(),
            year,
            field_label: record[field_at].to_string(),
            n_references: Some(refs),
            n_pages,
        });
    }
    Ok((records, report))
}

fn parse_optional<T: std::str::FromStr>(
    cell: &str,
    column: &str,
    line: Option<u64>,
) -> Result<Option<T>> {
    if cell.is_empty() {
        return Ok(None);
    }
    cell.parse::<T>().map(Some).map_err(|_| Error::Csv {
        line,
        message: format!("unparseable {column} {cell:?}"),
    })
}

/// Groups records by (year, field) and summarizes reference counts.
/// Records without a reference count are skipped. Output is ordered by
/// year, then field label.
pub fn aggregate_yearly(records: &[ArticleRecord]) -> Result<Vec<YearlyAggregate>> {
    if records.is_empty() {
        return Err(Error::EmptyInput("no records to aggregate".into()));
    }
    let mut groups: BTreeMap<(i32, &str), Vec<u64>> = BTreeMap::new();
    for record in records {
        if let Some(refs) = record.n_references {
            groups
                .entry((record.year, record.field_label.as_str()))
                .or_default()
                .push(refs);
        }
    }
    Ok(groups
        .into_iter()
        .map(|((year, field), mut refs)| {
            refs.sort_unstable();
            let sorted: Vec<f64> = refs.iter().map(|&v| v as f64).collect();
            YearlyAggregate {
                year,
                field_label: field.to_string(),
                article_count: refs.len() as u64,
                mean_refs: sorted.iter().sum::<f64>() / sorted.len() as f64,
                median_refs: median_sorted(&sorted),
            }
        })
        .collect())
}

pub fn write_article_csv<W: Write>(records: &[ArticleRecord], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(ARTICLE_COLUMNS).map_err(|e| csv_error(&e))?;
    for r in records {
        w.write_record([
            r.id.as_str(),
            &r.year.to_string(),
            r.field_label.as_str(),
            &r.n_references.map(|v| v.to_string()).unwrap_or_default(),
            &r.n_pages.map(|v| v.to_string()).unwrap_or_default(),
        ])
        .map_err(|e| csv_error(&e))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_aggregate_csv<W: Write>(aggregates: &[YearlyAggregate], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["year", "field", "article_count", "mean_refs", "median_refs"])
        .map_err(|e| csv_error(&e))?;
    for a in aggregates {
        w.write_record([
            a.year.to_string(),
            a.field_label.clone(),
            a.article_count.to_string(),
            a.mean_refs.to_string(),
            a.median_refs.to_string(),
        ])
        .map_err(|e| csv_error(&e))?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_aggregate_csv<R: Read>(reader: R) -> Result<Vec<YearlyAggregate>> {
    let mut r = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = r.headers().map_err(|e| csv_error(&e))?;
    let expect = ["year", "field", "article_count", "mean_refs", "median_refs"];
    if headers.iter().collect::<Vec<_>>() != expect {
        return Err(Error::Column(format!(
            "aggregate CSV header must be {expect:?}, found {:?}",
            headers.iter().collect::<Vec<_>>()
        )));
    }
    let mut out = Vec::new();
    for record in r.records() {
        let record = record.map_err(|e| csv_error(&e))?;
        let line = record.position().map(|p| p.line());
        let parse_err = |column: &str, cell: &str| Error::Csv {
            line,
            message: format!("unparseable {column} {cell:?}"),
        };
        out.push(YearlyAggregate {
            year: record[0]
                .parse()
                .map_err(|_| parse_err("year", &record[0]))?,
            field_label: record[1].to_string(),
            article_count: record[2]
                .parse()
                .map_err(|_| parse_err("article_count", &record[2]))?,
            mean_refs: record[3]
                .parse()
                .map_err(|_| parse_err("mean_refs", &record[3]))?,
            median_refs: record[4]
                .parse()
                .map_err(|_| parse_err("median_refs", &record[4]))?,
        });
    }
    Ok(out)
}
