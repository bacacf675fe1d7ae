//! Seed sweeps: build one graph per seed, run the selected checks, and keep
//! one JSON record per seed plus a per-check summary.
//!
//! Seeds run in parallel; records come back in seed order. Everything in a
//! record except `timings_ms` is a function of its parameters, which is what
//! [`replay`] verifies.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::construction::{build, explicit_params, LayeredGraph};
use crate::density::{prefix_certificate_3reg_bipartite, prefix_certificate_4reg, Verdict};
use crate::error::{Error, Result};
use crate::fractional::{chi_f_exact, chi_f_lower_bound};
use crate::rational::{self, Rational};
use crate::regular::{find_k_regular, Detection};
use crate::subsample::{harris_subsample, SubsampleParams};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    Certify4,
    Certify3,
    Detect4,
    Detect3,
    ChifLb,
    ChifExact,
    Degeneracy,
    Subsample,
}

impl Check {
    pub const ALL: [Check; 8] = [
        Check::Certify4,
        Check::Certify3,
        Check::Detect4,
        Check::Detect3,
        Check::ChifLb,
        Check::ChifExact,
        Check::Degeneracy,
        Check::Subsample,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Certify4 => "certify4",
            Check::Certify3 => "certify3",
            Check::Detect4 => "detect4",
            Check::Detect3 => "detect3",
            Check::ChifLb => "chif_lb",
            Check::ChifExact => "chif_exact",
            Check::Degeneracy => "degeneracy",
            Check::Subsample => "subsample",
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Check {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Check::ALL
            .into_iter()
            .find(|c| c.name() == s.trim())
            .ok_or_else(|| Error::Parse {
                what: "check name",
                input: s.to_string(),
            })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub sizes: Vec<usize>,
    pub seeds: std::ops::Range<u64>,
    pub checks: Vec<Check>,
    #[serde(with = "rational::serde_str")]
    pub threshold: Rational,
    pub budget: u64,
    #[serde(with = "rational::serde_str")]
    pub subsample_p: Rational,
    /// Defaults to the degeneracy of each graph.
    pub subsample_threshold: Option<usize>,
}

impl SweepConfig {
    pub fn new(sizes: Vec<usize>, seeds: std::ops::Range<u64>, checks: Vec<Check>) -> Self {
        SweepConfig {
            sizes,
            seeds,
            checks,
            threshold: crate::density::default_threshold(),
            budget: crate::regular::DEFAULT_BUDGET,
            subsample_p: rational::ratio(1, 4),
            subsample_threshold: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DetectOutcome {
    pub outcome: String,
    pub nodes_expanded: u64,
    pub witness_size: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubsampleOutcome {
    pub threshold: usize,
    pub x_size: usize,
    pub y_size: usize,
    pub retained_weight: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Outcomes {
    pub edge_count: usize,
    pub invariants_ok: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub degeneracy: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub certify4: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub certify3: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub detect4: Option<DetectOutcome>,
    /// Run on the bipartite variant, matching `certify3`.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub detect3: Option<DetectOutcome>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub chif_lb: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub chif_exact: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub subsample: Option<SubsampleOutcome>,
    /// Check name to error message; a failing check never stops the sweep.
    #[serde(skip_serializing_if = "BTreeMap::is_empty", default)]
    pub errors: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub tool_version: String,
    pub sizes: Vec<usize>,
    pub seed: u64,
    pub checks: Vec<Check>,
    pub threshold: String,
    pub budget: u64,
    pub subsample_p: String,
    pub subsample_threshold: Option<usize>,
    pub outcomes: Outcomes,
    pub timings_ms: BTreeMap<String, f64>,
}

impl ExperimentRecord {
    /// The record as JSON with timings removed.
    pub fn deterministic_json(&self) -> String {
        let mut value = serde_json::to_value(self).expect("record serializes");
        value
            .as_object_mut()
            .expect("record is an object")
            .remove("timings_ms");
        value.to_string()
    }

    pub fn config(&self) -> Result<SweepConfig> {
        Ok(SweepConfig {
            sizes: self.sizes.clone(),
            seeds: self.seed..self.seed + 1,
            checks: self.checks.clone(),
            threshold: rational::parse(&self.threshold)?,
            budget: self.budget,
            subsample_p: rational::parse(&self.subsample_p)?,
            subsample_threshold: self.subsample_threshold,
        })
    }

    pub fn is_inconclusive(&self) -> bool {
        let o = &self.outcomes;
        let detect =
            |d: &Option<DetectOutcome>| d.as_ref().is_some_and(|d| d.outcome == "budget_exceeded");
        let cert = |c: &Option<String>| c.as_deref() == Some("inconclusive");
        detect(&o.detect4) || detect(&o.detect3) || cert(&o.certify4) || cert(&o.certify3)
    }
}

fn detect(lg: &LayeredGraph, k: usize, budget: u64) -> DetectOutcome {
    let r = find_k_regular(lg.graph(), k, budget);
    DetectOutcome {
        outcome: r.outcome.label().to_string(),
        nodes_expanded: r.nodes_expanded,
        witness_size: match &r.outcome {
            Detection::Found(w) => Some(w.vertices.len()),
            _ => None,
        },
    }
}

fn verdict_label(v: Verdict) -> String {
    match v {
        Verdict::Certified => "certified",
        Verdict::Inconclusive => "inconclusive",
    }
    .to_string()
}

pub fn run_seed(cfg: &SweepConfig, seed: u64) -> ExperimentRecord {
    let mut outcomes = Outcomes::default();
    let mut timings = BTreeMap::new();
    let mut time = |name: &str, start: Instant| {
        timings.insert(name.to_string(), start.elapsed().as_secs_f64() * 1e3);
    };
    let start = Instant::now();
    let built = explicit_params(&cfg.sizes, seed).and_then(|p| build(&p));
    time("build", start);
    match built {
        Err(e) => {
            outcomes.errors.insert("build".into(), e.to_string());
        }
        Ok(lg) => {
            outcomes.edge_count = lg.graph().edge_count();
            outcomes.invariants_ok = lg.check_construction_invariants().is_ok();
            let bipartite = lg.bipartite_variant();
            for &check in &cfg.checks {
                let start = Instant::now();
                match check {
                    Check::Degeneracy => outcomes.degeneracy = Some(lg.graph().degeneracy().0),
                    Check::Certify4 => {
                        let c = prefix_certificate_4reg(&lg, &cfg.threshold);
                        outcomes.certify4 = Some(verdict_label(c.verdict));
                    }
                    Check::Certify3 => {
                        let c = prefix_certificate_3reg_bipartite(&lg, &cfg.threshold);
                        outcomes.certify3 = Some(verdict_label(c.verdict));
                    }
                    Check::Detect4 => outcomes.detect4 = Some(detect(&lg, 4, cfg.budget)),
                    Check::Detect3 => outcomes.detect3 = Some(detect(&bipartite, 3, cfg.budget)),
                    Check::ChifLb => match chi_f_lower_bound(lg.graph(), &lg.paper_weighting()) {
                        Ok(b) => outcomes.chif_lb = Some(rational::to_string(&b)),
                        Err(e) => {
                            outcomes.errors.insert(check.name().into(), e.to_string());
                        }
                    },
                    Check::ChifExact => match chi_f_exact(lg.graph()) {
                        Ok(r) => outcomes.chif_exact = Some(rational::to_string(&r.value)),
                        Err(e) => {
                            outcomes.errors.insert(check.name().into(), e.to_string());
                        }
                    },
                    Check::Subsample => {
                        let (degen, ord) = lg.graph().degeneracy();
                        let threshold = cfg.subsample_threshold.unwrap_or(degen).max(1);
                        match SubsampleParams::new(cfg.subsample_p.clone(), threshold, seed) {
                            Ok(params) => {
                                let r = harris_subsample(
                                    lg.graph(),
                                    &ord,
                                    &params,
                                    &lg.paper_weighting(),
                                );
                                outcomes.subsample = Some(SubsampleOutcome {
                                    threshold,
                                    x_size: r.x.len(),
                                    y_size: r.y.len(),
                                    retained_weight: rational::to_string(&r.retained_weight),
                                });
                            }
                            Err(e) => {
                                outcomes.errors.insert(check.name().into(), e.to_string());
                            }
                        }
                    }
                }
                time(check.name(), start);
            }
        }
    }
    ExperimentRecord {
        tool_version: TOOL_VERSION.to_string(),
        sizes: cfg.sizes.clone(),
        seed,
        checks: cfg.checks.clone(),
        threshold: rational::to_string(&cfg.threshold),
        budget: cfg.budget,
        subsample_p: rational::to_string(&cfg.subsample_p),
        subsample_threshold: cfg.subsample_threshold,
        outcomes,
        timings_ms: timings,
    }
}

/// One record per seed, in seed order.
pub fn sweep(cfg: &SweepConfig) -> Result<Vec<ExperimentRecord>> {
    if cfg.seeds.is_empty() {
        return Err(Error::Param("seed range is empty".into()));
    }
    explicit_params(&cfg.sizes, 0)?;
    let seeds: Vec<u64> = cfg.seeds.clone().collect();
    Ok(seeds.par_iter().map(|&s| run_seed(cfg, s)).collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckSummary {
    pub check: String,
    pub runs: usize,
    /// Certified, not found, within the `C - 1` bound, or computed,
    /// depending on the check.
    pub successes: usize,
    pub errors: usize,
    pub frequency: f64,
}

pub fn summarize(records: &[ExperimentRecord]) -> Vec<CheckSummary> {
    let mut rows: BTreeMap<Check, (usize, usize, usize)> = BTreeMap::new();
    for r in records {
        let layers = r.sizes.len();
        let o = &r.outcomes;
        for &check in &r.checks {
            let ok = match check {
                Check::Certify4 => o.certify4.as_deref().map(|v| v == "certified"),
                Check::Certify3 => o.certify3.as_deref().map(|v| v == "certified"),
                Check::Detect4 => o.detect4.as_ref().map(|d| d.outcome == "not_found"),
                Check::Detect3 => o.detect3.as_ref().map(|d| d.outcome == "not_found"),
                Check::Degeneracy => o.degeneracy.map(|d| d + 1 <= layers.max(1)),
                Check::ChifLb => o.chif_lb.as_ref().map(|_| true),
                Check::ChifExact => o.chif_exact.as_ref().map(|_| true),
                Check::Subsample => o.subsample.as_ref().map(|_| true),
            };
            let e = rows.entry(check).or_default();
            e.0 += 1;
            match ok {
                Some(true) => e.1 += 1,
                Some(false) => {}
                None => e.2 += 1,
            }
        }
    }
    rows.into_iter()
        .map(|(check, (runs, successes, errors))| CheckSummary {
            check: check.name().to_string(),
            runs,
            successes,
            errors,
            frequency: if runs == 0 {
                0.0
            } else {
                successes as f64 / runs as f64
            },
        })
        .collect()
}

pub fn to_ndjson(records: &[ExperimentRecord]) -> String {
    records
        .iter()
        .map(|r| serde_json::to_string(r).expect("record serializes") + "\n")
        .collect()
}

pub fn parse_ndjson(text: &str) -> Result<Vec<ExperimentRecord>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).map_err(Error::from))
        .collect()
}

pub fn summary_csv(rows: &[CheckSummary]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row).map_err(|e| Error::Format(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Format(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Seeds whose re-run differs from the stored record outside the timings.
pub fn replay(records: &[ExperimentRecord]) -> Result<Vec<u64>> {
    let configs = records
        .iter()
        .map(|r| r.config())
        .collect::<Result<Vec<_>>>()?;
    Ok(records
        .par_iter()
        .zip(configs.par_iter())
        .filter(|(r, cfg)| run_seed(cfg, r.seed).deterministic_json() != r.deterministic_json())
        .map(|(r, _)| r.seed)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degeneracy_sweep() {
        let cfg = SweepConfig::new(vec![8, 4, 2], 0..10, vec![Check::Degeneracy]);
        let records = sweep(&cfg).unwrap();
        assert_eq!(records.len(), 10);
        assert!(records.iter().enumerate().all(|(i, r)| r.seed == i as u64));
        assert!(records
            .iter()
            .all(|r| r.outcomes.degeneracy.unwrap() <= 2 && r.outcomes.invariants_ok));
        let summary = summarize(&records);
        assert_eq!(summary[0].successes, 10);
    }

    #[test]
    fn records_round_trip_and_replay() {
        let cfg = SweepConfig::new(vec![16, 4, 2], 3..6, Check::ALL.to_vec());
        let records = sweep(&cfg).unwrap();
        let parsed = parse_ndjson(&to_ndjson(&records)).unwrap();
        assert_eq!(parsed.len(), 3);
        for (a, b) in records.iter().zip(&parsed) {
            assert_eq!(a.deterministic_json(), b.deterministic_json());
        }
        assert!(replay(&parsed).unwrap().is_empty());
        let mut tampered = parsed.clone();
        tampered[1].outcomes.edge_count += 1;
        assert_eq!(replay(&tampered).unwrap(), vec![4]);
    }

    #[test]
    fn check_names_parse() {
        for c in Check::ALL {
            assert_eq!(c.name().parse::<Check>().unwrap(), c);
        }
        assert!("detect5".parse::<Check>().is_err());
        let rows =
            summarize(&sweep(&SweepConfig::new(vec![4, 2], 0..2, vec![Check::Certify4])).unwrap());
        assert!(summary_csv(&rows)
            .unwrap()
            .starts_with("check,runs,successes,errors,frequency\n"));
    }
}
