//! Reference-count harvesting from a CrossRef-style metadata API.
//!
//! Each DOI is fetched with `GET {endpoint}/{doi}` (path-encoded) and the
//! JSON reply is cached on disk keyed by DOI, so a rerun answers from the
//! cache without touching the network. Cache entries are written atomically
//! (temp file + rename), which also makes concurrent writers safe. HTTP
//! failures are recorded per DOI; only an unreachable endpoint aborts the
//! batch.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use percent_encoding::{utf8_percent_encode, AsciiSet, NON_ALPHANUMERIC};
use serde::{Deserialize, Serialize};

use crate::corpus::ArticleRecord;
use crate::error::{Error, Result};

/// Keep unreserved characters readable; everything else is percent-encoded.
const PATH_SEGMENT: &AsciiSet = &NON_ALPHANUMERIC
    .remove(b'-')
    .remove(b'_')
    .remove(b'.')
    .remove(b'~');

#[derive(Debug, Clone)]
pub struct HarvestConfig {
    /// Base URL; the encoded DOI is appended as one path segment.
    pub endpoint: String,
    /// Maximum request rate against the live endpoint, in requests/second.
    pub rate_limit: f64,
    pub cache_dir: PathBuf,
    pub max_retries: u32,
    pub initial_backoff: Duration,
    pub timeout: Duration,
}

impl HarvestConfig {
    pub fn new(endpoint: impl Into<String>, cache_dir: impl Into<PathBuf>) -> Self {
        Self {
            endpoint: endpoint.into(),
            rate_limit: 1.0,
            cache_dir: cache_dir.into(),
            max_retries: 3,
            initial_backoff: Duration::from_millis(200),
            timeout: Duration::from_secs(10),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HarvestFailureKind {
    NotFound,
    MalformedResponse,
    MissingReferenceCount,
    MissingYear,
}

#[derive(Debug, Clone, Serialize)]
pub struct HarvestFailure {
    pub doi: String,
    pub kind: HarvestFailureKind,
    pub detail: String,
}

#[derive(Debug, Clone, Default)]
pub struct HarvestReport {
    pub records: Vec<ArticleRecord>,
    pub failures: Vec<HarvestFailure>,
    /// DOIs answered from the disk cache rather than the network.
    pub cache_hits: u64,
}

/// What gets cached per DOI: the HTTP status and raw body, so replays see
/// exactly what the live endpoint returned.
#[derive(Debug, Serialize, Deserialize)]
struct CacheEntry {
    doi: String,
    status: u16,
    body: String,
}

/// Fetches reference counts and page spans for each DOI.
///
/// Input DOIs are deduplicated (first occurrence wins). A failed DOI never
/// produces a record; it is reported in `failures` instead.
pub fn harvest_reference_counts(dois: &[String], config: &HarvestConfig) -> Result<HarvestReport> {
    if config.rate_limit <= 0.0 || !config.rate_limit.is_finite() {
        return Err(Error::Config(format!(
            "rate limit must be positive, got {}",
            config.rate_limit
        )));
    }
    std::fs::create_dir_all(&config.cache_dir)?;

    let agent = ureq::AgentBuilder::new().timeout(config.timeout).build();
    let mut limiter = RateLimiter::new(config.rate_limit);
    let mut report = HarvestReport::default();
    let mut seen = std::collections::HashSet::new();

    for doi in dois {
        let doi = doi.trim();
        if doi.is_empty() || !seen.insert(doi.to_string()) {
            continue;
        }
        let entry = match load_cached(config, doi)? {
            Some(entry) => {
                report.cache_hits += 1;
                entry
            }
            None => {
                let entry = fetch(&agent, config, &mut limiter, doi)?;
                store_cached(config, doi, &entry)?;
                entry
            }
        };
        match interpret(doi, &entry) {
            Ok(record) => report.records.push(record),
            Err(failure) => report.failures.push(failure),
        }
    }
    Ok(report)
}

struct RateLimiter {
    min_interval: Duration,
    last: Option<Instant>,
}

impl RateLimiter {
    fn new(rate: f64) -> Self {
        Self {
            min_interval: Duration::from_secs_f64(1.0 / rate),
            last: None,
        }
    }

    fn wait(&mut self) {
        if let Some(last) = self.last {
            let next = last + self.min_interval;
            if let Some(pause) = next.checked_duration_since(Instant::now()) {
                std::thread::sleep(pause);
            }
        }
        self.last = Some(Instant::now());
    }
}

fn fetch(
    agent: &ureq::Agent,
    config: &HarvestConfig,
    limiter: &mut RateLimiter,
    doi: &str,
) -> Result<CacheEntry> {
    let url = format!(
        "{}/{}",
        config.endpoint.trim_end_matches('/'),
        utf8_percent_encode(doi, PATH_SEGMENT)
    );
    let mut backoff = config.initial_backoff;
    let mut last_error = String::new();
    for attempt in 0..=config.max_retries {
        if attempt > 0 {
            std::thread::sleep(backoff);
            backoff *= 2;
        }
        limiter.wait();
        match agent.get(&url).call() {
            Ok(response) => {
                let status = response.status();
                let body = response
                    .into_string()
                    .map_err(|e| Error::Network(format!("reading response for {doi}: {e}")))?;
                return Ok(CacheEntry {
                    doi: doi.to_string(),
                    status,
                    body,
                });
            }
            Err(ureq::Error::Status(status, response)) => {
                // Server spoke HTTP: 5xx is worth retrying, anything else is
                // a definitive per-DOI answer.
                if status >= 500 && attempt < config.max_retries {
                    last_error = format!("http {status}");
                    continue;
                }
                let body = response.into_string().unwrap_or_default();
                return Ok(CacheEntry {
                    doi: doi.to_string(),
                    status,
                    body,
                });
            }
            Err(ureq::Error::Transport(t)) => {
                last_error = t.to_string();
            }
        }
    }
    Err(Error::Network(format!(
        "endpoint unreachable after {} retries: {last_error}",
        config.max_retries
    )))
}

fn interpret(doi: &str, entry: &CacheEntry) -> std::result::Result<ArticleRecord, HarvestFailure> {
    let fail = |kind, detail: String| HarvestFailure {
        doi: doi.to_string(),
        kind,
        detail,
    };
    if entry.status == 404 {
        return Err(fail(HarvestFailureKind::NotFound, "http 404".into()));
    }
    if !(200..300).contains(&entry.status) {
        return Err(fail(
            HarvestFailureKind::MalformedResponse,
            format!("http {}", entry.status),
        ));
    }
    let json: serde_json::Value = serde_json::from_str(&entry.body).map_err(|e| {
        fail(
            HarvestFailureKind::MalformedResponse,
            format!("invalid json: {e}"),
        )
    })?;
    let message = json.get("message").unwrap_or(&json);

    let n_references = message
        .get("reference-count")
        .or_else(|| message.get("references-count"))
        .and_then(|v| v.as_u64())
        .ok_or_else(|| {
            fail(
                HarvestFailureKind::MissingReferenceCount,
                "no numeric reference-count field".into(),
            )
        })?;

    let year = issued_year(message).ok_or_else(|| {
        fail(
            HarvestFailureKind::MissingYear,
            "no issued/published year".into(),
        )
    })?;

    Ok(ArticleRecord {
        id: doi.to_string(),
        year,
        field_label: String::new(),
        n_references: Some(n_references),
        n_pages: page_count(message),
    })
}

fn issued_year(message: &serde_json::Value) -> Option<i32> {
    for key in ["issued", "published-print", "published-online", "published"] {
        let year = message
            .get(key)
            .and_then(|v| v.get("date-parts"))
            .and_then(|v| v.get(0))
            .and_then(|v| v.get(0))
            .and_then(|v| v.as_i64());
        if let Some(y) = year {
            return i32::try_from(y).ok();
        }
    }
    None
}

/// Page count from a `"first-last"` span; `None` unless both ends parse.
fn page_count(message: &serde_json::Value) -> Option<u64> {
    let span = message.get("page")?.as_str()?;
    let (first, last) = span.split_once('-')?;
    let first: u64 = first.trim().parse().ok()?;
    let last: u64 = last.trim().parse().ok()?;
    (last >= first).then(|| last - first + 1)
}

fn cache_path(config: &HarvestConfig, doi: &str) -> PathBuf {
    let mut name: String = doi
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '.' || c == '-' {
                c
            } else {
                '_'
            }
        })
        .collect();
    name.truncate(100);
    config
        .cache_dir
        .join(format!("{name}-{:016x}.json", fnv1a64(doi.as_bytes())))
}

fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

fn load_cached(config: &HarvestConfig, doi: &str) -> Result<Option<CacheEntry>> {
    let path = cache_path(config, doi);
    if !path.exists() {
        return Ok(None);
    }
    let text = std::fs::read_to_string(&path)?;
    let entry: CacheEntry = serde_json::from_str(&text)
        .map_err(|e| Error::Config(format!("corrupt cache entry {}: {e}", path.display())))?;
    Ok(Some(entry))
}

fn store_cached(config: &HarvestConfig, doi: &str, entry: &CacheEntry) -> Result<()> {
    let path = cache_path(config, doi);
    let tmp = path.with_extension(format!("tmp.{}", std::process::id()));
    let text = serde_json::to_string_pretty(entry)
        .map_err(|e| Error::Config(format!("serializing cache entry: {e}")))?;
    std::fs::write(&tmp, text)?;
    std::fs::rename(&tmp, &path)?;
    Ok(())
}

#[cfg(test)]
pub(crate) mod stub {
    //! Minimal blocking HTTP stub for harvester tests: serves canned JSON
    //! bodies by exact request path.

    use std::collections::HashMap;
    use std::io::{BufRead, BufReader, Write};
    use std::net::TcpListener;

    pub struct StubServer {
        pub base_url: String,
        shutdown: std::sync::mpsc::Sender<()>,
        handle: Option<std::thread::JoinHandle<()>>,
    }

    impl StubServer {
        pub fn start(routes: HashMap<String, (u16, String)>) -> Self {
            let listener = TcpListener::bind("127.0.0.1:0").unwrap();
            let addr = listener.local_addr().unwrap();
            let (tx, rx) = std::sync::mpsc::channel::<()>();
            let handle = std::thread::spawn(move || {
                listener.set_nonblocking(false).expect("blocking listener");
                for stream in listener.incoming() {
                    if rx.try_recv().is_ok() {
                        break;
                    }
                    let Ok(stream) = stream else { break };
                    let mut reader = BufReader::new(stream);
                    let mut request_line = String::new();
                    if reader.read_line(&mut request_line).is_err() {
                        continue;
                    }
                    // Drain headers.
                    loop {
                        let mut line = String::new();
                        match reader.read_line(&mut line) {
                            Ok(_) if line == "\r\n" || line == "\n" || line.is_empty() => break,
                            Ok(_) => {}
                            Err(_) => break,
                        }
                    }
                    let path = request_line
                        .split_whitespace()
                        .nth(1)
                        .unwrap_or("/")
                        .to_string();
                    let (status, body) = routes
                        .get(&path)
                        .cloned()
                        .unwrap_or((404, "{\"status\":\"not found\"}".to_string()));
                    let reason = if status == 200 { "OK" } else { "Error" };
                    let response = format!(
                        "HTTP/1.1 {status} {reason}\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{body}",
                        body.len()
                    );
                    let mut stream = reader.into_inner();
                    let _ = stream.write_all(response.as_bytes());
                }
            });
            Self {
                base_url: format!("http://{addr}"),
                shutdown: tx,
                handle: Some(handle),
            }
        }

        /// Stops accepting; call before testing offline replay.
        pub fn stop(mut self) {
            let _ = self.shutdown.send(());
            // Nudge the accept loop so it observes the shutdown signal.
            let _ = std::net::TcpStream::connect(self.base_url.trim_start_matches("http://"));
            if let Some(handle) = self.handle.take() {
                let _ = handle.join();
            }
        }
    }

    impl Drop for StubServer {
        fn drop(&mut self) {
            let _ = self.shutdown.send(());
            let _ = std::net::TcpStream::connect(self.base_url.trim_start_matches("http://"));
        }
    }

    pub fn work_body(reference_count: u64, year: i32, page: Option<&str>) -> String {
        let page_field = page
            .map(|p| format!(",\"page\":\"{p}\""))
            .unwrap_or_default();
        format!(
            "{{\"message\":{{\"reference-count\":{reference_count},\"issued\":{{\"date-parts\":[[{year}]]}}{page_field}}}}}"
        )
    }
}

#[cfg(test)]
mod tests {
    use super::stub::{work_body, StubServer};
    use super::*;
    use std::collections::HashMap;
    use std::path::Path;

    fn config_for(server: &StubServer, cache: &Path) -> HarvestConfig {
        let mut config = HarvestConfig::new(&server.base_url, cache);
        config.rate_limit = 1000.0;
        config.initial_backoff = Duration::from_millis(10);
        config
    }

    #[test]
    fn empty_doi_list_is_empty_report() {
        let dir = tempfile::tempdir().unwrap();
        let config = HarvestConfig::new("http://127.0.0.1:9", dir.path());
        let report = harvest_reference_counts(&[], &config).unwrap();
        assert!(report.records.is_empty());
        assert!(report.failures.is_empty());
    }

    #[test]
    fn harvests_records_and_failures_without_aborting() {
        let mut routes = HashMap::new();
        routes.insert(
            "/10.1000%2Ftest1".to_string(),
            (200, work_body(42, 2016, Some("100-110"))),
        );
        routes.insert(
            "/10.1000%2Fnopages".to_string(),
            (200, work_body(7, 2014, None)),
        );
        routes.insert(
            "/10.1000%2Fnorefs".to_string(),
            (
                200,
                "{\"message\":{\"issued\":{\"date-parts\":[[2010]]}}}".to_string(),
            ),
        );
        routes.insert(
            "/10.1000%2Fbadjson".to_string(),
            (200, "not json at all".to_string()),
        );
        let server = StubServer::start(routes);
        let dir = tempfile::tempdir().unwrap();
        let config = config_for(&server, dir.path());

        let dois: Vec<String> = [
            "10.1000/test1",
            "10.1000/nopages",
            "10.1000/missing",
            "10.1000/norefs",
            "10.1000/badjson",
            "10.1000/test1", // duplicate must not produce a second record
        ]
        .iter()
        .map(|s| s.to_string())
        .collect();
        let report = harvest_reference_counts(&dois, &config).unwrap();
        server.stop();

        assert_eq!(report.records.len(), 2);
        let full = &report.records[0];
        assert_eq!(full.id, "10.1000/test1");
        assert_eq!(full.n_references, Some(42));
        assert_eq!(full.n_pages, Some(11));
        assert_eq!(full.year, 2016);
        let partial = &report.records[1];
        assert_eq!(partial.n_references, Some(7));
        assert_eq!(partial.n_pages, None);

        let kinds: Vec<_> = report.failures.iter().map(|f| f.kind).collect();
        assert_eq!(
            kinds,
            vec![
                HarvestFailureKind::NotFound,
                HarvestFailureKind::MissingReferenceCount,
                HarvestFailureKind::MalformedResponse,
            ]
        );

        // No record for any failed DOI, no duplicated DOI.
        let mut ids: Vec<_> = report.records.iter().map(|r| r.id.clone()).collect();
        ids.dedup();
        assert_eq!(ids.len(), report.records.len());
    }

    #[test]
    fn replays_from_cache_with_network_down() {
        let mut routes = HashMap::new();
        routes.insert(
            "/10.5555%2Fcached".to_string(),
            (200, work_body(13, 2012, Some("5-9"))),
        );
        let server = StubServer::start(routes);
        let dir = tempfile::tempdir().unwrap();
        let mut config = config_for(&server, dir.path());
        config.max_retries = 0;
        config.timeout = Duration::from_millis(500);

        let dois = vec!["10.5555/cached".to_string()];
        let live = harvest_reference_counts(&dois, &config).unwrap();
        assert_eq!(live.records.len(), 1);
        assert_eq!(live.cache_hits, 0);
        server.stop();

        // Endpoint is gone; the cache must answer.
        let replay = harvest_reference_counts(&dois, &config).unwrap();
        assert_eq!(replay.cache_hits, 1);
        assert_eq!(replay.records, live.records);
    }

    #[test]
    fn unreachable_endpoint_fails_the_batch() {
        let dir = tempfile::tempdir().unwrap();
        // Nothing listens on this port.
        let mut config = HarvestConfig::new("http://127.0.0.1:1", dir.path());
        config.max_retries = 1;
        config.initial_backoff = Duration::from_millis(1);
        config.timeout = Duration::from_millis(200);
        let err = harvest_reference_counts(&["10.1/x".to_string()], &config).unwrap_err();
        assert!(matches!(err, Error::Network(_)));
    }

    #[test]
    fn page_count_parses_spans_only() {
        let parse =
            |body: &str| page_count(&serde_json::from_str::<serde_json::Value>(body).unwrap());
        assert_eq!(parse("{\"page\":\"100-110\"}"), Some(11));
        assert_eq!(parse("{\"page\":\"100\"}"), None);
        assert_eq!(parse("{\"page\":\"e1017\"}"), None);
        assert_eq!(parse("{\"page\":\"110-100\"}"), None);
        assert_eq!(parse("{}"), None);
    }
}
