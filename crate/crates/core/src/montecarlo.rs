//! Synthetic corpora under the Bernoulli citation process, and empirical
//! statistics for validating the mean-field predictors against samples.
//!
//! The continuous model is discretized into cohorts of width `dt`: the
//! cohort at time `t` holds the articles published in the step ending at
//! `t`, its size is the rounded increment of the growth curve with the
//! rounding residue carried forward, and an article cites each article in
//! every strictly earlier cohort independently with the kernel probability
//! at their age difference. Within-cohort citation is excluded.
//!
//! Replications are independent; replication `i` draws from a counter-based
//! generator seeded with the run seed on stream `i`, so corpora are
//! deterministic given the seed and safe to sample in parallel.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::ArticleRecord;
use crate::error::{Error, Result};
use crate::model::{AgeStatistics, CitabilityKernel, GrowthCurve};

/// How citations are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SamplingMode {
    /// One Bernoulli draw per (citing article, cited article) pair. The
    /// reference oracle; cost grows with the square of corpus size.
    PerPairBernoulli,
    /// One binomial draw per (citing article, cited cohort) pair.
    /// Distributionally identical and much faster.
    #[default]
    PerCohortBinomial,
}

#[derive(Debug, Clone)]
pub struct SimulationConfig {
    pub growth: GrowthCurve,
    pub kernel: CitabilityKernel,
    pub t0: f64,
    pub t_end: f64,
    /// Cohort step in years.
    pub dt: f64,
    pub seed: u64,
    pub sampling_mode: SamplingMode,
    pub replications: u32,
    /// Upper bound on pairwise draws accepted in per-pair mode.
    pub max_pairs: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cohort {
    pub time: f64,
    pub articles: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimArticle {
    pub published: f64,
    pub reference_ages: Vec<f64>,
}

/// The product of a simulation run; immutable after construction.
/// With several replications the realizations are pooled: cohort counts
/// aggregate over replications and articles are concatenated in
/// replication order.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulatedCorpus {
    pub cohorts: Vec<Cohort>,
    pub articles: Vec<SimArticle>,
}

impl SimulationConfig {
    fn validate(&self) -> Result<()> {
        if !self.dt.is_finite() || self.dt <= 0.0 {
            return Err(Error::Config(format!(
                "cohort step dt must be > 0, got {}",
                self.dt
            )));
        }
        if self.t_end <= self.t0 {
            return Err(Error::Config(format!(
                "t_end ({}) must exceed t0 ({})",
                self.t_end, self.t0
            )));
        }
        if self.replications == 0 {
            return Err(Error::Config("replications must be >= 1".into()));
        }
        match self.growth.origin() {
            None => {
                return Err(Error::Config(
                    "simulation needs a growth curve with a finite origin".into(),
                ))
            }
            Some(t0) if self.t0 < t0 => {
                return Err(Error::Config(format!(
                    "simulation t0 ({}) precedes the curve origin ({t0})",
                    self.t0
                )))
            }
            _ => {}
        }
        if let Some(end) = self.growth.domain_end() {
            if self.t_end > end {
                return Err(Error::Config(format!(
                    "t_end ({}) is beyond the tabulated range ending at {end}",
                    self.t_end
                )));
            }
        }
        let steps = (self.t_end - self.t0) / self.dt;
        if (steps - steps.round()).abs() > 1e-6 * steps.max(1.0) {
            return Err(Error::Config(format!(
                "window [{}, {}] is not a whole number of dt={} steps",
                self.t0, self.t_end, self.dt
            )));
        }
        if steps.round() < 1.0 {
            return Err(Error::Config("window holds no cohorts".into()));
        }
        Ok(())
    }

    /// Cohort times and sizes for one replication. Sizes are rounded
    /// increments of the growth curve with the residue carried forward, so
    /// cumulative totals track the curve within half an article.
    fn cohort_layout(&self) -> Result<(Vec<f64>, Vec<u64>)> {
        let steps = ((self.t_end - self.t0) / self.dt).round() as usize;
        let mut times = Vec::with_capacity(steps);
        let mut sizes = Vec::with_capacity(steps);
        let mut prev = self.growth.value(self.t0)?;
        let mut carry = 0.0;
        for i in 1..=steps {
            // The final cohort lands exactly on t_end.
            let t = if i == steps {
                self.t_end
            } else {
                self.t0 + i as f64 * self.dt
            };
            let here = self.growth.value(t)?;
            let raw = here - prev + carry;
            let rounded = raw.round().max(0.0);
            carry = raw - rounded;
            times.push(t);
            sizes.push(rounded as u64);
            prev = here;
        }
        Ok((times, sizes))
    }
}

/// Runs the Bernoulli citation process described by `config`.
pub fn simulate(config: &SimulationConfig) -> Result<SimulatedCorpus> {
    config.validate()?;
    let (times, sizes) = config.cohort_layout()?;

    if config.sampling_mode == SamplingMode::PerPairBernoulli {
        let mut prior: u128 = 0;
        let mut pairs: u128 = 0;
        for &s in &sizes {
            pairs += s as u128 * prior;
            prior += s as u128;
        }
        pairs *= config.replications as u128;
        if pairs > config.max_pairs as u128 {
            return Err(Error::Capacity {
                required: pairs.min(u64::MAX as u128) as u64,
                budget: config.max_pairs,
            });
        }
    }

    let replications: Vec<Vec<SimArticle>> = (0..config.replications)
        .into_par_iter()
        .map(|rep| simulate_replication(config, &times, &sizes, rep))
        .collect::<Result<_>>()?;

    let cohorts = times
        .iter()
        .zip(&sizes)
        .map(|(&time, &size)| Cohort {
            time,
            articles: size * config.replications as u64,
        })
        .collect();
    let articles = replications.into_iter().flatten().collect();
    Ok(SimulatedCorpus { cohorts, articles })
}

fn simulate_replication(
    config: &SimulationConfig,
    times: &[f64],
    sizes: &[u64],
    rep: u32,
) -> Result<Vec<SimArticle>> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(rep as u64);

    let total: u64 = sizes.iter().sum();
    let mut articles = Vec::with_capacity(total as usize);
    for (j, (&t, &count)) in times.iter().zip(sizes).enumerate() {
        // Probability and sampler per cited cohort, shared by every article
        // in this cohort.
        let mut targets: Vec<(f64, u64, f64)> = Vec::with_capacity(j);
        for i in 0..j {
            if sizes[i] == 0 {
                continue;
            }
            let age = t - times[i];
            let p = config.kernel.probability(age);
            targets.push((age, sizes[i], p));
        }
        let samplers: Vec<(f64, Binomial)> =
            if config.sampling_mode == SamplingMode::PerCohortBinomial {
                targets
                    .iter()
                    .map(|&(age, n, p)| {
                        Binomial::new(n, p)
                            .map(|b| (age, b))
                            .map_err(|e| Error::Config(format!("binomial sampler: {e}")))
                    })
                    .collect::<Result<_>>()?
            } else {
                Vec::new()
            };

        for _ in 0..count {
            let mut ages = Vec::new();
            match config.sampling_mode {
                SamplingMode::PerCohortBinomial => {
                    for &(age, sampler) in &samplers {
                        let k = sampler.sample(&mut rng);
                        ages.extend(std::iter::repeat_n(age, k as usize));
                    }
                }
                SamplingMode::PerPairBernoulli => {
                    for &(age, n, p) in &targets {
                        for _ in 0..n {
                            if rng.gen::<f64>() < p {
                                ages.push(age);
                            }
                        }
                    }
                }
            }
            articles.push(SimArticle {
                published: t,
                reference_ages: ages,
            });
        }
    }
    Ok(articles)
}

/// Per-cohort sample statistics of reference-list length.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CohortLengthStats {
    pub time: f64,
    pub articles: u64,
    pub mean: f64,
    pub median: f64,
    /// Unbiased sample variance; zero for fewer than two articles.
    pub variance: f64,
    /// (length, article count) pairs in increasing length order.
    pub histogram: Vec<(u64, u64)>,
}

/// Exact sample statistics of reference-list length, one entry per cohort.
pub fn empirical_length_stats(corpus: &SimulatedCorpus) -> Result<Vec<CohortLengthStats>> {
    if corpus.articles.is_empty() {
        return Err(Error::EmptyInput("corpus holds no articles".into()));
    }
    let mut out = Vec::with_capacity(corpus.cohorts.len());
    for cohort in &corpus.cohorts {
        let lengths: Vec<u64> = corpus
            .articles
            .iter()
            .filter(|a| a.published == cohort.time)
            .map(|a| a.reference_ages.len() as u64)
            .collect();
        let mut histogram = std::collections::BTreeMap::new();
        for &len in &lengths {
            *histogram.entry(len).or_insert(0u64) += 1;
        }
        out.push(CohortLengthStats {
            time: cohort.time,
            articles: lengths.len() as u64,
            mean: mean_u64(&lengths),
            median: median_u64(&lengths),
            variance: variance_u64(&lengths),
            histogram: histogram.into_iter().collect(),
        });
    }
    Ok(out)
}

/// Pooled age statistics over every article in the cohort published at
/// `at`. The survival table holds, for each distinct observed age, the
/// fraction of references at least that old.
pub fn empirical_age_stats(corpus: &SimulatedCorpus, at: f64) -> Result<AgeStatistics> {
    let cohort = corpus
        .cohorts
        .iter()
        .find(|c| (c.time - at).abs() <= 1e-9 * at.abs().max(1.0))
        .ok_or_else(|| Error::Domain(format!("no cohort at time {at}")))?;
    let mut ages: Vec<f64> = corpus
        .articles
        .iter()
        .filter(|a| a.published == cohort.time)
        .flat_map(|a| a.reference_ages.iter().copied())
        .collect();
    if ages.is_empty() {
        return Err(Error::EmptyInput(format!(
            "no article in cohort {at} holds any reference"
        )));
    }
    ages.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = ages.len();
    let mean = ages.iter().sum::<f64>() / n as f64;
    let median = median_sorted(&ages);

    let mut survival = Vec::new();
    if ages[0] > 0.0 {
        survival.push((0.0, 1.0));
    }
    let mut i = 0;
    while i < n {
        let age = ages[i];
        // Everything from index i on is >= age.
        survival.push((age, (n - i) as f64 / n as f64));
        while i < n && ages[i] == age {
            i += 1;
        }
    }
    Ok(AgeStatistics {
        mean_age: mean,
        median_age: median,
        survival: Some(survival),
    })
}

impl SimulatedCorpus {
    /// Writes the corpus as CSV: one row per article with its publication
    /// year, reference count, and semicolon-joined reference ages.
    pub fn write_csv<W: std::io::Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["publication_year", "n_references", "reference_ages"])
            .map_err(|e| crate::config::csv_error(&e))?;
        for article in &self.articles {
            let ages = article
                .reference_ages
                .iter()
                .map(|a| a.to_string())
                .collect::<Vec<_>>()
                .join(";");
            w.write_record([
                article.published.to_string(),
                article.reference_ages.len().to_string(),
                ages,
            ])
            .map_err(|e| crate::config::csv_error(&e))?;
        }
        w.flush()?;
        Ok(())
    }

    /// Reads a corpus written by [`SimulatedCorpus::write_csv`]. Cohorts are
    /// reconstructed from the article rows, so cohorts that held no articles
    /// are not recovered.
    pub fn read_csv<R: std::io::Read>(reader: R) -> Result<Self> {
        let mut r = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(reader);
        let headers = r.headers().map_err(|e| crate::config::csv_error(&e))?;
        let expect = ["publication_year", "n_references", "reference_ages"];
        if headers.iter().collect::<Vec<_>>() != expect {
            return Err(Error::Column(format!(
                "corpus CSV header must be {expect:?}, found {:?}",
                headers.iter().collect::<Vec<_>>()
            )));
        }
        let mut articles = Vec::new();
        for record in r.records() {
            let record = record.map_err(|e| crate::config::csv_error(&e))?;
            let line = record.position().map(|p| p.line());
            let published: f64 = record[0].parse().map_err(|_| Error::Csv {
                line,
                message: format!("unparseable publication_year {:?}", &record[0]),
            })?;
            let count: usize = record[1].parse().map_err(|_| Error::Csv {
                line,
                message: format!("unparseable n_references {:?}", &record[1]),
            })?;
            let ages: Vec<f64> = if record[2].is_empty() {
                Vec::new()
            } else {
                record[2]
                    .split(';')
                    .map(|s| {
                        s.parse::<f64>().map_err(|_| Error::Csv {
                            line,
                            message: format!("unparseable reference age {s:?}"),
                        })
                    })
                    .collect::<Result<_>>()?
            };
            if ages.len() != count {
                return Err(Error::Csv {
                    line,
                    message: format!("n_references is {count} but {} ages are listed", ages.len()),
                });
            }
            articles.push(SimArticle {
                published,
                reference_ages: ages,
            });
        }
        let mut cohorts: Vec<Cohort> = Vec::new();
        for article in &articles {
            match cohorts.iter_mut().find(|c| c.time == article.published) {
                Some(c) => c.articles += 1,
                None => cohorts.push(Cohort {
                    time: article.published,
                    articles: 1,
                }),
            }
        }
        cohorts.sort_by(|a, b| a.time.partial_cmp(&b.time).unwrap());
        Ok(Self { cohorts, articles })
    }

    /// Flattens the corpus into article records for the ingestion pipeline.
    /// Publication times are rounded to the nearest integer year.
    pub fn to_article_records(&self, field_label: &str) -> Vec<ArticleRecord> {
        self.articles
            .iter()
            .enumerate()
            .map(|(i, a)| ArticleRecord {
                id: format!("sim-{i:07}"),
                year: a.published.round() as i32,
                field_label: field_label.to_string(),
                n_references: Some(a.reference_ages.len() as u64),
                n_pages: None,
            })
            .collect()
    }
}

fn mean_u64(values: &[u64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    values.iter().sum::<u64>() as f64 / values.len() as f64
}

fn median_u64(values: &[u64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let mut sorted = values.to_vec();
    sorted.sort_unstable();
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2] as f64
    } else {
        (sorted[n / 2 - 1] as f64 + sorted[n / 2] as f64) / 2.0
    }
}

fn variance_u64(values: &[u64]) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let mean = mean_u64(values);
    let ss: f64 = values
        .iter()
        .map(|&v| {
            let d = v as f64 - mean;
            d * d
        })
        .sum();
    ss / (values.len() - 1) as f64
}

pub(crate) fn median_sorted(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n == 0 {
        return 0.0;
    }
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base_config() -> SimulationConfig {
        SimulationConfig {
            growth: GrowthCurve::linear(200.0, 0.0, 0.0).unwrap(),
            kernel: CitabilityKernel::constant(0.002).unwrap(),
            t0: 0.0,
            t_end: 10.0,
            dt: 1.0,
            seed: 17,
            sampling_mode: SamplingMode::PerCohortBinomial,
            replications: 1,
            max_pairs: 100_000_000,
        }
    }

    #[test]
    fn zero_kernel_yields_empty_reference_lists() {
        let mut config = base_config();
        config.kernel = CitabilityKernel::constant(0.0).unwrap();
        let corpus = simulate(&config).unwrap();
        assert!(!corpus.articles.is_empty());
        assert!(corpus.articles.iter().all(|a| a.reference_ages.is_empty()));
    }

    #[test]
    fn certain_citation_cites_every_prior_article() {
        // Two cohorts; with q = 1 the second cohort must cite all of the
        // first, in both sampling modes.
        for mode in [
            SamplingMode::PerPairBernoulli,
            SamplingMode::PerCohortBinomial,
        ] {
            let config = SimulationConfig {
                growth: GrowthCurve::tabulated(vec![(0.0, 0.0), (1.0, 40.0), (2.0, 45.0)]).unwrap(),
                kernel: CitabilityKernel::constant(1.0).unwrap(),
                t0: 0.0,
                t_end: 2.0,
                dt: 1.0,
                seed: 5,
                sampling_mode: mode,
                replications: 1,
                max_pairs: 1_000_000,
            };
            let corpus = simulate(&config).unwrap();
            let last: Vec<_> = corpus
                .articles
                .iter()
                .filter(|a| a.published == 2.0)
                .collect();
            assert_eq!(last.len(), 5);
            assert!(last.iter().all(|a| a.reference_ages.len() == 40));
        }
    }

    #[test]
    fn seed_determinism_is_byte_for_byte() {
        let mut config = base_config();
        config.replications = 4;
        let a = simulate(&config).unwrap();
        let b = simulate(&config).unwrap();
        assert_eq!(a, b);

        let mut csv_a = Vec::new();
        let mut csv_b = Vec::new();
        a.write_csv(&mut csv_a).unwrap();
        b.write_csv(&mut csv_b).unwrap();
        assert_eq!(csv_a, csv_b);

        config.seed = 18;
        let c = simulate(&config).unwrap();
        assert_ne!(a, c, "different seeds should differ somewhere");
    }

    #[test]
    fn cohort_sizes_track_the_curve_with_carry() {
        // 2.5 articles per step: rounding must alternate, totals stay exact.
        let config = SimulationConfig {
            growth: GrowthCurve::linear(2.5, 0.0, 0.0).unwrap(),
            kernel: CitabilityKernel::constant(0.0).unwrap(),
            t0: 0.0,
            t_end: 8.0,
            dt: 1.0,
            ..base_config()
        };
        let corpus = simulate(&config).unwrap();
        let total: u64 = corpus.cohorts.iter().map(|c| c.articles).sum();
        assert_eq!(total, 20);
        let sizes: Vec<u64> = corpus.cohorts.iter().map(|c| c.articles).collect();
        assert!(sizes.iter().all(|&s| s == 2 || s == 3), "sizes {sizes:?}");
    }

    #[test]
    fn mean_list_length_tracks_uniform_prediction() {
        // Constant q, linear growth over 10 years. The pooled final-cohort
        // mean must sit within three standard errors of q * P*(t_end); the
        // fine dt keeps the strictly-prior-cohort exclusion below the noise.
        let config = SimulationConfig {
            growth: GrowthCurve::linear(200.0, 0.0, 0.0).unwrap(),
            kernel: CitabilityKernel::constant(0.002).unwrap(),
            t0: 0.0,
            t_end: 10.0,
            dt: 0.1,
            seed: 2024,
            sampling_mode: SamplingMode::PerCohortBinomial,
            replications: 100,
            max_pairs: u64::MAX,
        };
        let corpus = simulate(&config).unwrap();
        let stats = empirical_length_stats(&corpus).unwrap();
        let last = stats.last().unwrap();
        let predicted = 0.002 * 2000.0;
        let se = (last.variance / last.articles as f64).sqrt();
        assert!(
            (last.mean - predicted).abs() <= 3.0 * se + 0.002 * 20.0,
            "mean {} vs prediction {predicted} (se {se})",
            last.mean
        );
    }

    #[test]
    fn binomial_reference_count_in_single_prior_cohort() {
        // One prior cohort of n articles: lengths are Bin(n, q) draws, so
        // the sample variance must approach n*q*(1-q).
        let n = 5_000.0;
        let q = 0.004;
        let config = SimulationConfig {
            growth: GrowthCurve::tabulated(vec![(0.0, 0.0), (1.0, n), (2.0, n + 10_000.0)])
                .unwrap(),
            kernel: CitabilityKernel::constant(q).unwrap(),
            t0: 0.0,
            t_end: 2.0,
            dt: 1.0,
            seed: 99,
            sampling_mode: SamplingMode::PerCohortBinomial,
            replications: 1,
            max_pairs: u64::MAX,
        };
        let corpus = simulate(&config).unwrap();
        let stats = empirical_length_stats(&corpus).unwrap();
        let last = stats.last().unwrap();
        assert_eq!(last.articles, 10_000);
        let expected_var = n * q * (1.0 - q);
        assert!(
            (last.variance - expected_var).abs() / expected_var < 0.1,
            "sample variance {} vs binomial variance {expected_var}",
            last.variance
        );
    }

    #[test]
    fn per_pair_budget_is_enforced() {
        let mut config = base_config();
        config.sampling_mode = SamplingMode::PerPairBernoulli;
        config.max_pairs = 10;
        assert!(matches!(simulate(&config), Err(Error::Capacity { .. })));
    }

    #[test]
    fn invalid_windows_are_config_errors() {
        let mut config = base_config();
        config.dt = 0.0;
        assert!(matches!(simulate(&config), Err(Error::Config(_))));

        let mut config = base_config();
        config.t_end = config.t0;
        assert!(matches!(simulate(&config), Err(Error::Config(_))));

        let mut config = base_config();
        config.dt = 3.0; // 10 years is not a whole number of 3-year steps
        assert!(matches!(simulate(&config), Err(Error::Config(_))));
    }

    #[test]
    fn length_stats_arithmetic() {
        let corpus = SimulatedCorpus {
            cohorts: vec![Cohort {
                time: 1.0,
                articles: 3,
            }],
            articles: vec![
                SimArticle {
                    published: 1.0,
                    reference_ages: vec![0.5; 5],
                },
                SimArticle {
                    published: 1.0,
                    reference_ages: vec![0.5; 7],
                },
                SimArticle {
                    published: 1.0,
                    reference_ages: vec![0.5; 9],
                },
            ],
        };
        let stats = empirical_length_stats(&corpus).unwrap();
        assert_eq!(stats[0].mean, 7.0);
        assert_eq!(stats[0].median, 7.0);
        assert_eq!(stats[0].variance, 4.0);
        assert_eq!(stats[0].histogram, vec![(5, 1), (7, 1), (9, 1)]);
    }

    #[test]
    fn empty_lists_give_zero_stats() {
        let corpus = SimulatedCorpus {
            cohorts: vec![Cohort {
                time: 2.0,
                articles: 2,
            }],
            articles: vec![
                SimArticle {
                    published: 2.0,
                    reference_ages: vec![],
                },
                SimArticle {
                    published: 2.0,
                    reference_ages: vec![],
                },
            ],
        };
        let stats = empirical_length_stats(&corpus).unwrap();
        assert_eq!(stats[0].mean, 0.0);
        assert_eq!(stats[0].median, 0.0);
        assert_eq!(stats[0].variance, 0.0);
    }

    #[test]
    fn age_stats_arithmetic_and_survival_steps() {
        let corpus = SimulatedCorpus {
            cohorts: vec![Cohort {
                time: 5.0,
                articles: 1,
            }],
            articles: vec![SimArticle {
                published: 5.0,
                reference_ages: vec![2.0, 4.0],
            }],
        };
        let stats = empirical_age_stats(&corpus, 5.0).unwrap();
        assert_eq!(stats.mean_age, 3.0);
        assert_eq!(stats.median_age, 3.0);
        assert_eq!(
            stats.survival,
            Some(vec![(0.0, 1.0), (2.0, 1.0), (4.0, 0.5)])
        );
    }

    #[test]
    fn age_stats_errors() {
        let corpus = SimulatedCorpus {
            cohorts: vec![Cohort {
                time: 5.0,
                articles: 1,
            }],
            articles: vec![SimArticle {
                published: 5.0,
                reference_ages: vec![],
            }],
        };
        assert!(matches!(
            empirical_age_stats(&corpus, 4.0),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            empirical_age_stats(&corpus, 5.0),
            Err(Error::EmptyInput(_))
        ));
    }

    #[test]
    fn csv_round_trip() {
        let mut config = base_config();
        config.replications = 2;
        let corpus = simulate(&config).unwrap();
        let mut buf = Vec::new();
        corpus.write_csv(&mut buf).unwrap();
        let back = SimulatedCorpus::read_csv(buf.as_slice()).unwrap();
        assert_eq!(back.articles, corpus.articles);
    }

    #[test]
    fn pooled_survival_tracks_the_growth_ratio() {
        // Uniform model, linear growth: the fraction of references aged at
        // least a must sit within three standard errors of
        // P*(t - a) / P*(t) at every integer age.
        let t_end = 20.0;
        let growth = GrowthCurve::linear(100.0, 0.0, 0.0).unwrap();
        let config = SimulationConfig {
            growth: growth.clone(),
            kernel: CitabilityKernel::constant(0.02).unwrap(),
            t0: 0.0,
            t_end,
            dt: 0.1,
            seed: 424242,
            sampling_mode: SamplingMode::PerCohortBinomial,
            replications: 50,
            max_pairs: u64::MAX,
        };
        let corpus = simulate(&config).unwrap();
        let ages: Vec<f64> = corpus
            .articles
            .iter()
            .filter(|a| a.published == t_end)
            .flat_map(|a| a.reference_ages.iter().copied())
            .collect();
        let n = ages.len() as f64;
        assert!(n > 10_000.0, "need a large pooled reference set, got {n}");
        let denom = growth.restricted(t_end).unwrap();
        for age in 1..20 {
            let a = age as f64;
            let empirical = ages.iter().filter(|&&x| x >= a).count() as f64 / n;
            let model = growth.restricted(t_end - a).unwrap() / denom;
            let se = (model * (1.0 - model) / n).sqrt();
            assert!(
                (empirical - model).abs() <= 3.0 * se + 0.01,
                "age {age}: empirical {empirical:.4} vs model {model:.4} (se {se:.4})"
            );
        }
    }

    #[test]
    fn mean_field_deviation_shrinks_with_replications() {
        // RMS deviation of the final-cohort mean from q * P*(t_end - dt)
        // across seed groups must drop when replications grow 16-fold.
        let growth = GrowthCurve::linear(100.0, 0.0, 0.0).unwrap();
        let q = 0.01;
        let rms_for = |replications: u32, seed_base: u64| -> f64 {
            let mut sum_sq = 0.0;
            let groups = 8;
            for g in 0..groups {
                let config = SimulationConfig {
                    growth: growth.clone(),
                    kernel: CitabilityKernel::constant(q).unwrap(),
                    t0: 0.0,
                    t_end: 10.0,
                    dt: 0.5,
                    seed: seed_base + g,
                    sampling_mode: SamplingMode::PerCohortBinomial,
                    replications,
                    max_pairs: u64::MAX,
                };
                let corpus = simulate(&config).unwrap();
                let stats = empirical_length_stats(&corpus).unwrap();
                let last = stats.last().unwrap();
                // An article in the final cohort sees every strictly earlier
                // cohort: P*(t_end - dt) articles.
                let predicted = q * growth.restricted(10.0 - 0.5).unwrap();
                sum_sq += (last.mean - predicted).powi(2);
            }
            (sum_sq / groups as f64).sqrt()
        };
        let coarse = rms_for(4, 1_000);
        let fine = rms_for(64, 2_000);
        assert!(
            fine < coarse / 2.0,
            "rms deviation did not shrink: {coarse:.4} at R=4 vs {fine:.4} at R=64"
        );
    }
}
