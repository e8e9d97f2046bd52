//! Dataset ingestion, filtering, yearly aggregation, and DOI metadata
//! harvesting.

mod harvest;
mod ingest;

pub use harvest::{
    harvest_reference_counts, HarvestConfig, HarvestFailure, HarvestFailureKind, HarvestReport,
};
pub use ingest::{
    aggregate_yearly, load_and_filter, load_and_filter_reader, read_aggregate_csv,
    write_aggregate_csv, write_article_csv, ArticleRecord, DropReport, IngestOptions,
    YearlyAggregate, ARTICLE_COLUMNS,
};
