//! Corpus verification: analyze many generated matrices and aggregate verdicts.

use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::Serialize;
use wradius_core::par;
use wradius_core::verdict::Status;

use crate::analyze::{analyze, AnalyzeConfig, ChainReport, MatrixDigest};
use crate::error::{HarnessError, Result};
use crate::generate::{generate, substream_seed, GeneratorSpec, Kind};
use crate::io::{to_report_json, write_file, write_matrix};

pub const DEFAULT_COUNT: usize = 500;
pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusConfig {
    pub count: usize,
    pub dim_min: usize,
    pub dim_max: usize,
    pub seed: u64,
    pub kinds: Vec<Kind>,
    pub analyze: AnalyzeConfig,
    /// Where failing matrices are written for replay.
    pub replay_dir: Option<PathBuf>,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        Self {
            count: DEFAULT_COUNT,
            dim_min: 2,
            dim_max: 8,
            seed: DEFAULT_SEED,
            kinds: Kind::ENSEMBLES.to_vec(),
            analyze: AnalyzeConfig::default(),
            replay_dir: None,
        }
    }
}

impl CorpusConfig {
    pub fn validate(&self) -> Result<()> {
        self.analyze.validate()?;
        if self.dim_min == 0 || self.dim_min > self.dim_max {
            return Err(HarnessError::Config(format!(
                "dimension range {}..{} is empty or contains 0",
                self.dim_min, self.dim_max
            )));
        }
        if self.kinds.is_empty() || self.kinds.contains(&Kind::Fixture) {
            return Err(HarnessError::Config("corpus kinds must be a nonempty list of ensembles".into()));
        }
        Ok(())
    }

    /// Generator spec of corpus entry `index`.
    ///
    /// Kinds cycle fastest, then dimensions, so every (kind, n) pair is
    /// covered once the corpus holds `kinds × dims` matrices.
    pub fn entry(&self, index: usize) -> GeneratorSpec {
        let kinds = self.kinds.len();
        let dims = self.dim_max - self.dim_min + 1;
        let kind = self.kinds[index % kinds];
        let n = self.dim_min + (index / kinds) % dims;
        GeneratorSpec::new(kind, n, substream_seed(self.seed, index as u64))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvariantStats {
    pub id: String,
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
    /// Smallest `rhs − lhs` over evaluated checks; negative means the closest call went the wrong way.
    pub worst_margin: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FailureRecord {
    pub digest: MatrixDigest,
    pub failed: Vec<String>,
    pub errors: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub replay_file: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorpusSummary {
    pub count: usize,
    pub master_seed: u64,
    pub dim_min: usize,
    pub dim_max: usize,
    pub kinds: Vec<Kind>,
    pub matrices_passed: usize,
    pub matrices_failed: usize,
    pub violations: usize,
    pub invariants: Vec<InvariantStats>,
    pub failures: Vec<FailureRecord>,
}

impl CorpusSummary {
    pub fn passed(&self) -> bool {
        self.matrices_failed == 0
    }

    pub fn invariant(&self, id: &str) -> Option<&InvariantStats> {
        self.invariants.iter().find(|s| s.id == id)
    }
}

/// Invariant family of a verdict id: the part before any `[...]` qualifier.
pub fn invariant_family(id: &str) -> &str {
    id.split('[').next().unwrap_or(id)
}

/// Generates and analyzes corpus entry `index`.
pub fn analyze_entry(config: &CorpusConfig, index: usize) -> Result<(wradius_core::ComplexMatrix, ChainReport)> {
    let spec = config.entry(index);
    let a = generate(&spec)?;
    let digest = MatrixDigest::generated(spec.kind, spec.n, spec.seed, Some(index));
    let report = analyze(&a, digest, &config.analyze)?;
    Ok((a, report))
}

/// Regenerates a digest and analyzes it again.
pub fn replay(digest: &MatrixDigest, config: &AnalyzeConfig) -> Result<ChainReport> {
    let (Some(kind), Some(seed)) = (digest.kind, digest.seed) else {
        return Err(HarnessError::Config("only generated digests can be replayed".into()));
    };
    let a = generate(&GeneratorSpec::new(kind, digest.n, seed))?;
    analyze(&a, digest.clone(), config)
}

/// Per-matrix outcome, kept small so the whole corpus need not stay in memory.
struct Outcome {
    digest: MatrixDigest,
    matrix: Option<wradius_core::ComplexMatrix>,
    verdicts: Vec<(String, Status, f64)>,
    errors: Vec<String>,
}

pub fn verify_corpus(config: &CorpusConfig) -> Result<CorpusSummary> {
    config.validate()?;
    let outcomes = par::map_indexed(config.count, |index| match analyze_entry(config, index) {
        Ok((a, report)) => {
            let failed = !report.passed();
            Outcome {
                digest: report.input.digest.clone(),
                matrix: failed.then_some(a),
                verdicts: report.verdicts.iter().map(|v| (v.id.clone(), v.status, v.margin)).collect(),
                errors: report.errors,
            }
        }
        Err(e) => {
            let spec = config.entry(index);
            Outcome {
                digest: MatrixDigest::generated(spec.kind, spec.n, spec.seed, Some(index)),
                matrix: None,
                verdicts: Vec::new(),
                errors: vec![e.to_string()],
            }
        }
    });

    let mut stats: BTreeMap<String, InvariantStats> = BTreeMap::new();
    let mut failures = Vec::new();
    let mut violations = 0;
    for outcome in outcomes {
        let mut failed_ids = Vec::new();
        for (id, status, margin) in &outcome.verdicts {
            let family = invariant_family(id);
            let entry = stats.entry(family.to_string()).or_insert_with(|| InvariantStats {
                id: family.to_string(),
                pass: 0,
                fail: 0,
                skipped: 0,
                worst_margin: None,
            });
            match status {
                Status::Pass => entry.pass += 1,
                Status::Fail => {
                    entry.fail += 1;
                    violations += 1;
                    failed_ids.push(id.clone());
                }
                Status::Skipped => entry.skipped += 1,
            }
            if *status != Status::Skipped {
                entry.worst_margin = Some(entry.worst_margin.map_or(*margin, |m: f64| m.min(*margin)));
            }
        }
        if failed_ids.is_empty() && outcome.errors.is_empty() {
            continue;
        }
        let replay_file = match (&config.replay_dir, &outcome.matrix) {
            (Some(dir), Some(a)) => {
                let d = &outcome.digest;
                let name = format!(
                    "{:04}_{}_n{}.json",
                    d.index.unwrap_or(0),
                    d.kind.map_or("matrix", |k| k.name()),
                    d.n
                );
                let path = dir.join(name);
                write_file(&path, &write_matrix(a))?;
                Some(path.display().to_string())
            }
            _ => None,
        };
        failures.push(FailureRecord {
            digest: outcome.digest,
            failed: failed_ids,
            errors: outcome.errors,
            replay_file,
        });
    }

    let summary = CorpusSummary {
        count: config.count,
        master_seed: config.seed,
        dim_min: config.dim_min,
        dim_max: config.dim_max,
        kinds: config.kinds.clone(),
        matrices_passed: config.count - failures.len(),
        matrices_failed: failures.len(),
        violations,
        invariants: stats.into_values().collect(),
        failures,
    };
    if let Some(dir) = &config.replay_dir {
        if !summary.failures.is_empty() {
            write_file(&dir.join("failures.json"), &to_report_json(&summary.failures)?)?;
        }
    }
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(count: usize) -> CorpusConfig {
        CorpusConfig {
            count,
            dim_min: 2,
            dim_max: 3,
            analyze: AnalyzeConfig {
                policy: wradius_core::SweepPolicy {
                    grid_n: 128,
                    ..Default::default()
                },
                ..AnalyzeConfig::default()
            },
            ..CorpusConfig::default()
        }
    }

    #[test]
    fn entries_cover_kinds_and_dims() {
        let cfg = small(12);
        let specs: Vec<_> = (0..12).map(|i| cfg.entry(i)).collect();
        for kind in Kind::ENSEMBLES {
            for n in 2..=3 {
                assert!(specs.iter().any(|s| s.kind == kind && s.n == n), "{kind} n={n}");
            }
        }
        assert_eq!(cfg.entry(5), cfg.entry(5));
    }

    #[test]
    fn empty_corpus_is_success() {
        let s = verify_corpus(&small(0)).unwrap();
        assert!(s.passed());
        assert_eq!(s.count, 0);
        assert!(s.invariants.is_empty());
    }

    #[test]
    fn small_corpus_passes() {
        let s = verify_corpus(&small(12)).unwrap();
        assert!(s.passed(), "{:?}", s.failures);
        assert!(s.invariant("kittaneh.lower_le_w_sq").unwrap().pass == 12);
    }

    #[test]
    fn hermitian_corpus_matches_norm() {
        let cfg = CorpusConfig {
            kinds: vec![Kind::Hermitian],
            ..small(6)
        };
        let s = verify_corpus(&cfg).unwrap();
        let oracle = s.invariant("oracle.hermitian_w_equals_norm").unwrap();
        assert_eq!((oracle.pass, oracle.fail, oracle.skipped), (6, 0, 0));
    }

    #[test]
    fn replay_reproduces_verdicts() {
        let cfg = small(6);
        for index in [0, 3, 5] {
            let (_, report) = analyze_entry(&cfg, index).unwrap();
            let again = replay(&report.input.digest, &cfg.analyze).unwrap();
            let key = |r: &ChainReport| -> Vec<(String, Status, u64)> {
                r.verdicts.iter().map(|v| (v.id.clone(), v.status, v.margin.to_bits())).collect()
            };
            assert_eq!(key(&report), key(&again));
        }
        assert!(replay(&MatrixDigest::example("e12", 2), &cfg.analyze).is_err());
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(verify_corpus(&CorpusConfig { dim_min: 4, dim_max: 3, ..small(1) }).is_err());
        assert!(verify_corpus(&CorpusConfig { kinds: vec![], ..small(1) }).is_err());
        assert!(verify_corpus(&CorpusConfig { kinds: vec![Kind::Fixture], ..small(1) }).is_err());
    }

    #[test]
    fn families_strip_qualifiers() {
        assert_eq!(invariant_family("thp.le_w_sq[r=1.5]"), "thp.le_w_sq");
        assert_eq!(invariant_family("cor1.le_w_sq"), "cor1.le_w_sq");
    }
}
