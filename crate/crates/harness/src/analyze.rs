//! One-matrix analysis: every bound together with the equality-case checks.

use std::time::Instant;

use serde::Serialize;
use wradius_core::bounds::{
    full_report, lemma_suite, witness_verdicts, LowerBounds, UpperBounds, Witness, DEFAULT_R_LIST,
};
use wradius_core::equality::{analyze_equality, BjOrthogonality, EqualityReport};
use wradius_core::linalg::{operator_norm, HermitianMatrix};
use wradius_core::{Complex64, ComplexMatrix, SweepPolicy, Verdict};

use crate::error::{HarnessError, Result};
use crate::generate::Kind;

/// Relative tolerance for `w(A) = ‖A‖` on Hermitian input.
const HERMITIAN_ORACLE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct AnalyzeConfig {
    pub policy: SweepPolicy,
    pub r_list: Vec<f64>,
}

impl Default for AnalyzeConfig {
    fn default() -> Self {
        Self {
            policy: SweepPolicy::default(),
            r_list: DEFAULT_R_LIST.to_vec(),
        }
    }
}

impl AnalyzeConfig {
    pub fn validate(&self) -> Result<()> {
        self.policy.validate()?;
        if self.r_list.is_empty() || self.r_list.iter().any(|r| !(r.is_finite() && *r >= 1.0)) {
            return Err(HarnessError::Config(format!(
                "r list must be nonempty with every r >= 1, got {:?}",
                self.r_list
            )));
        }
        Ok(())
    }
}

/// Where a matrix came from; enough to regenerate it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatrixDigest {
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kind: Option<Kind>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub index: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub example_id: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub file: Option<String>,
}

impl MatrixDigest {
    pub fn example(id: &str, n: usize) -> Self {
        Self {
            n,
            kind: Some(Kind::Fixture),
            seed: None,
            index: None,
            example_id: Some(id.to_string()),
            file: None,
        }
    }

    pub fn file(path: &str, n: usize) -> Self {
        Self {
            n,
            kind: None,
            seed: None,
            index: None,
            example_id: None,
            file: Some(path.to_string()),
        }
    }

    pub fn generated(kind: Kind, n: usize, seed: u64, index: Option<usize>) -> Self {
        Self {
            n,
            kind: Some(kind),
            seed: Some(seed),
            index,
            example_id: None,
            file: None,
        }
    }

    /// Short human label, e.g. `ginibre/n=4/seed=17`.
    pub fn label(&self) -> String {
        if let Some(id) = &self.example_id {
            return format!("example:{id}");
        }
        if let Some(f) = &self.file {
            return format!("file:{f}");
        }
        let kind = self.kind.map_or("matrix", |k| k.name());
        match (self.index, self.seed) {
            (Some(i), Some(s)) => format!("#{i} {kind}/n={}/seed={s}", self.n),
            (None, Some(s)) => format!("{kind}/n={}/seed={s}", self.n),
            _ => format!("{kind}/n={}", self.n),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Quantities {
    pub w: f64,
    pub norm: f64,
    pub norm_plus: f64,
    pub norm_minus: f64,
    pub crawford_plus: f64,
    pub crawford_minus: f64,
    pub gram_sum_norm: f64,
    pub identity_residual: f64,
    pub th13_t: f64,
    pub th14_w4: f64,
    pub thp1_w3: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InputSection {
    pub digest: MatrixDigest,
    #[serde(serialize_with = "crate::io::serialize_entries")]
    pub matrix: ComplexMatrix,
    pub policy: SweepPolicy,
    pub r_list: Vec<f64>,
    pub quantities: Quantities,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EqualitySection {
    pub half_norm: EqualityReport,
    pub half_root_k: EqualityReport,
    pub bj_orthogonality: BjOrthogonality,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Timings {
    pub bounds_ms: f64,
    pub equality_ms: f64,
    pub total_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainReport {
    pub input: InputSection,
    pub lower_bounds: LowerBounds,
    pub upper_bounds: UpperBounds,
    pub w_sq: f64,
    pub equality: Option<EqualitySection>,
    pub verdicts: Vec<Verdict>,
    pub errors: Vec<String>,
    pub timings: Timings,
}

impl ChainReport {
    pub fn passed(&self) -> bool {
        self.errors.is_empty() && !self.verdicts.iter().any(Verdict::failed)
    }

    pub fn failed_verdicts(&self) -> impl Iterator<Item = &Verdict> {
        self.verdicts.iter().filter(|v| v.failed())
    }

    pub fn verdict(&self, id: &str) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.id == id)
    }

    pub fn thp(&self, r: f64) -> Option<f64> {
        self.lower_bounds.thp.iter().find(|p| p.r == r).map(|p| p.value)
    }
}

/// The non-comparability witnesses each example is known to exhibit.
pub fn witnesses_for(example_id: Option<&str>) -> Vec<Witness> {
    match example_id {
        Some("ex_i") => vec![Witness::Theor17BelowBoth],
        Some("ex_ii") => vec![Witness::Theor17AboveBoth],
        Some("shift3") => vec![Witness::Th13BelowKittanehUpper],
        Some("th13_b") => vec![Witness::Th13AboveKittanehUpper],
        _ => Vec::new(),
    }
}

fn lemma_verdicts(a: &ComplexMatrix, policy: &SweepPolicy) -> wradius_core::Result<Vec<Verdict>> {
    let n = a.dim();
    let d = a.adjoint();
    let x: Vec<Complex64> = (0..n).map(|i| a.get(i, 0)).collect();
    let y: Vec<Complex64> = a.row(0).iter().map(|z| z.conj()).collect();
    let e = vec![Complex64::new(1.0 / (n as f64).sqrt(), 0.0); n];
    let mut rows = lemma_suite(a, &d, &x, &y, &e, policy)?;
    // the positive-sum lemma is skipped for (A, A*) unless A is PSD; the Gram pair always qualifies
    let p = HermitianMatrix::gram(a).into_matrix();
    let q = HermitianMatrix::co_gram(a).into_matrix();
    rows.push(wradius_core::bounds::lemma_positive_sum(&p, &q)?);
    let mut verdicts: Vec<Verdict> = rows.iter().map(|r| r.verdict()).collect();
    if let Some(last) = verdicts.last_mut() {
        last.id.push_str("[gram_pair]");
    }
    Ok(verdicts)
}

fn hermitian_oracle(a: &ComplexMatrix, w: f64) -> wradius_core::Result<Verdict> {
    let id = "oracle.hermitian_w_equals_norm";
    if HermitianMatrix::new(a.clone()).is_err() {
        return Ok(Verdict::skipped(id));
    }
    let norm = operator_norm(a)?;
    Ok(Verdict::close(id, w, norm, HERMITIAN_ORACLE_TOL * (1.0 + norm)))
}

/// Runs every bound and equality computation on `a`.
///
/// Sub-module failures are collected in `errors`; only an invalid
/// configuration is returned as `Err`.
pub fn analyze(a: &ComplexMatrix, digest: MatrixDigest, config: &AnalyzeConfig) -> Result<ChainReport> {
    config.validate()?;
    let policy = &config.policy;
    let start = Instant::now();
    let bounds = full_report(a, policy, &config.r_list)?;
    let mut errors = bounds.errors.clone();
    let mut verdicts = bounds.verdicts.clone();
    verdicts.extend(witness_verdicts(&bounds, &witnesses_for(digest.example_id.as_deref())));
    match lemma_verdicts(a, policy) {
        Ok(v) => verdicts.extend(v),
        Err(e) => errors.push(format!("lemmas: {e}")),
    }
    match hermitian_oracle(a, bounds.w) {
        Ok(v) => verdicts.push(v),
        Err(e) => errors.push(format!("hermitian oracle: {e}")),
    }
    let bounds_ms = start.elapsed().as_secs_f64() * 1e3;

    let eq_start = Instant::now();
    let equality = match analyze_equality(a, policy) {
        Ok(eq) => {
            verdicts.extend(eq.verdicts);
            Some(EqualitySection {
                half_norm: eq.half_norm,
                half_root_k: eq.half_root_k,
                bj_orthogonality: eq.bj,
            })
        }
        Err(e) => {
            errors.push(format!("equality analysis: {e}"));
            None
        }
    };
    let equality_ms = eq_start.elapsed().as_secs_f64() * 1e3;

    Ok(ChainReport {
        input: InputSection {
            digest,
            matrix: a.clone(),
            policy: *policy,
            r_list: config.r_list.clone(),
            quantities: Quantities {
                w: bounds.w,
                norm: bounds.norm,
                norm_plus: bounds.norm_plus,
                norm_minus: bounds.norm_minus,
                crawford_plus: bounds.crawford_plus,
                crawford_minus: bounds.crawford_minus,
                gram_sum_norm: bounds.gram_sum_norm,
                identity_residual: bounds.identity_residual,
                th13_t: bounds.upper.th13_t,
                th14_w4: bounds.upper.th14_w4,
                thp1_w3: bounds.upper.thp1_w3,
            },
        },
        lower_bounds: bounds.lower,
        upper_bounds: bounds.upper,
        w_sq: bounds.w_sq,
        equality,
        verdicts,
        errors,
        timings: Timings {
            bounds_ms,
            equality_ms,
            total_ms: start.elapsed().as_secs_f64() * 1e3,
        },
    })
}
