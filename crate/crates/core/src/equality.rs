//! Equality cases `w(A) = ½‖A‖` and `w(A) = ½‖A*A + AA*‖^{1/2}`.
//!
//! A closed numerical range that is a disk centred at the origin is detected
//! through the flatness of `θ ↦ ‖Re(e^{iθ}A)‖`. For such matrices the radius
//! is additive under translations, `w(A + λI) = w(A) + |λ|`, and `A` is
//! numerical-radius orthogonal to `I` in the Birkhoff-James sense.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;

use crate::bounds::sum_diff_parts;
use crate::error::{Error, Result};
use crate::linalg::{operator_norm, ComplexMatrix};
use crate::par;
use crate::range::{numerical_radius, rotated_real_part, shifted_radius, sweep, SweepPolicy, SweepProfile};
use crate::verdict::{Slack, Verdict};

/// Angles sampled by the flatness test inside [`check_equality_case`].
pub const FLATNESS_SAMPLES: usize = 256;
/// A profile counts as flat when `max_dev ≤ FLAT_TOL·(1 + ‖A‖)`.
pub const FLAT_TOL: f64 = 1e-9;
/// Largest allowed `|w(A+λI) − w(A) − |λ||` for a flat profile.
pub const TRANSLATION_TOL: f64 = 1e-7;
/// Equality is accepted when `|w − target| ≤ EQUALITY_TOL·(1 + w)`.
pub const EQUALITY_TOL: f64 = 1e-8;
/// Default tolerance for [`corp2_consequences`].
pub const CONSEQUENCE_TOL: f64 = 1e-8;
/// Orthogonality holds when every gap is at least `−BJ_TOL·(1 + w)`.
pub const BJ_TOL: f64 = 1e-8;

const TRIANGLE_SLACK: Slack = Slack { rel: 1e-8, abs: 1e-8 };

/// Unscaled translation directions; each is multiplied by `1 + ‖A‖`.
const TRANSLATIONS: [(f64, f64); 6] = [(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0), (1.0, 1.0), (0.5, 0.0)];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseId {
    /// `w(A) = ½‖A‖`.
    HalfNorm,
    /// `w(A) = ½‖A*A + AA*‖^{1/2}`.
    HalfRootK,
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CaseId::HalfNorm => "half_norm",
            CaseId::HalfRootK => "half_root_k",
        })
    }
}

impl FromStr for CaseId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "half_norm" => Ok(CaseId::HalfNorm),
            "half_root_k" => Ok(CaseId::HalfRootK),
            other => Err(Error::InvalidArgument(format!(
                "unknown equality case '{other}'; expected half_norm or half_root_k"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Flatness {
    pub mean: f64,
    pub max_dev: f64,
}

/// Mean and largest deviation from the mean of `‖Re(e^{iθ}A)‖` over `m` uniform angles.
pub fn flatness_profile(a: &ComplexMatrix, m: usize) -> Result<Flatness> {
    if m < 16 {
        return Err(Error::InvalidArgument(format!("flatness needs at least 16 samples, got {m}")));
    }
    let angle = |k: usize| 2.0 * PI * k as f64 / m as f64;
    // the profile has period π, so an even count only needs the first half
    let norms = if m.is_multiple_of(2) {
        let half = par::try_map_indexed(m / 2, |k| rotated_real_part(a, angle(k)).norm())?;
        [half.as_slice(), half.as_slice()].concat()
    } else {
        par::try_map_indexed(m, |k| rotated_real_part(a, angle(k)).norm())?
    };
    let mean = norms.iter().sum::<f64>() / m as f64;
    let max_dev = norms.iter().fold(0.0_f64, |d, v| d.max((v - mean).abs()));
    Ok(Flatness { mean, max_dev })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TranslationCheck {
    pub lambda: Complex64,
    /// `w(A + λI)`, computed by a fresh sweep.
    pub w_shifted: f64,
    /// `w(A) + |λ|`.
    pub additive: f64,
    pub residual: f64,
}

/// What the half-root-K equality forces on `S± = Re(A) ± Im(A)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Corp2Consequences {
    pub crawford_plus: f64,
    pub crawford_minus: f64,
    pub norm_plus_sq: f64,
    pub norm_minus_sq: f64,
    pub half_k: f64,
    /// `c(S₊) = c(S₋) = 0`.
    pub crawfords_vanish: bool,
    /// `‖S₊‖² = ‖S₋‖² = ½‖A*A + AA*‖`.
    pub norms_match: bool,
    pub all_match: bool,
}

/// Evaluates the consequences with tolerance `tol·(1 + ½‖A*A+AA*‖)` on the squared scale.
pub fn corp2_consequences(a: &ComplexMatrix, tol: f64) -> Result<Corp2Consequences> {
    if !(tol >= 0.0 && tol.is_finite()) {
        return Err(Error::InvalidArgument(format!("tolerance must be finite and nonnegative, got {tol}")));
    }
    let p = sum_diff_parts(a)?;
    let half_k = 0.5 * p.gram_sum_norm;
    let slack = tol * (1.0 + half_k);
    let norm_plus_sq = p.norm_plus * p.norm_plus;
    let norm_minus_sq = p.norm_minus * p.norm_minus;
    let crawfords_vanish = p.crawford_plus.powi(2) <= slack && p.crawford_minus.powi(2) <= slack;
    let norms_match = (norm_plus_sq - half_k).abs() <= slack && (norm_minus_sq - half_k).abs() <= slack;
    Ok(Corp2Consequences {
        crawford_plus: p.crawford_plus,
        crawford_minus: p.crawford_minus,
        norm_plus_sq,
        norm_minus_sq,
        half_k,
        crawfords_vanish,
        norms_match,
        all_match: crawfords_vanish && norms_match,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BjOrthogonality {
    /// `min_λ w(A + λI) − w(A)` over the samples.
    pub min_gap: f64,
    pub orthogonal: bool,
}

/// The default shifts: 16 angles on each of the radii `{¼, ½, 1, 2}·(1 + ‖A‖)`.
pub fn default_bj_samples(norm: f64) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(64);
    for radius in [0.25, 0.5, 1.0, 2.0] {
        for k in 0..16 {
            out.push(Complex64::from_polar(radius * (1.0 + norm), 2.0 * PI * k as f64 / 16.0));
        }
    }
    out
}

/// Tests `w(A + λI) ≥ w(A)` on the given shifts.
pub fn bj_orthogonality(a: &ComplexMatrix, samples: &[Complex64], policy: &SweepPolicy) -> Result<BjOrthogonality> {
    bj_from_profile(a, &sweep(a, policy)?, samples, policy)
}

fn bj_from_profile(
    a: &ComplexMatrix,
    profile: &SweepProfile,
    samples: &[Complex64],
    policy: &SweepPolicy,
) -> Result<BjOrthogonality> {
    if samples.is_empty() {
        return Err(Error::InvalidArgument("at least one shift sample is required".into()));
    }
    let w = profile.max_value.max(0.0);
    let shifted = par::try_map_indexed(samples.len(), |k| shifted_radius(a, profile, samples[k], policy))?;
    let min_gap = shifted.iter().fold(f64::INFINITY, |m, &ws| m.min(ws - w));
    Ok(BjOrthogonality {
        min_gap,
        orthogonal: min_gap >= -BJ_TOL * (1.0 + w),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EqualityReport {
    pub case_id: CaseId,
    pub w: f64,
    pub target: f64,
    pub residual: f64,
    pub equality_holds: bool,
    pub flatness: Flatness,
    pub flat: bool,
    pub translation_checks: Vec<TranslationCheck>,
    pub corp2_consequences: Corp2Consequences,
}

/// Shared quantities for both cases, so [`analyze_equality`] computes them once.
struct Common {
    profile: SweepProfile,
    w: f64,
    norm: f64,
    gram_sum_norm: f64,
    flatness: Flatness,
    flat: bool,
    translations: Vec<TranslationCheck>,
    corp2: Corp2Consequences,
}

impl Common {
    fn compute(a: &ComplexMatrix, policy: &SweepPolicy) -> Result<Self> {
        policy.validate()?;
        let profile = sweep(a, policy)?;
        let w = profile.max_value.max(0.0);
        let norm = operator_norm(a)?;
        let flatness = flatness_profile(a, FLATNESS_SAMPLES)?;
        let corp2 = corp2_consequences(a, CONSEQUENCE_TOL)?;
        let lambdas: Vec<Complex64> = TRANSLATIONS
            .iter()
            .map(|&(re, im)| Complex64::new(re, im) * (1.0 + norm))
            .collect();
        let translations = par::try_map_indexed(lambdas.len(), |k| {
            let lambda = lambdas[k];
            let w_shifted = numerical_radius(&a.shifted(lambda), policy)?;
            let additive = w + lambda.norm();
            Ok::<_, Error>(TranslationCheck {
                lambda,
                w_shifted,
                additive,
                residual: (w_shifted - additive).abs(),
            })
        })?;
        Ok(Self {
            profile,
            w,
            norm,
            gram_sum_norm: 2.0 * corp2.half_k,
            flat: flatness.max_dev <= FLAT_TOL * (1.0 + norm),
            flatness,
            translations,
            corp2,
        })
    }

    fn report(&self, case_id: CaseId) -> EqualityReport {
        let target = match case_id {
            CaseId::HalfNorm => 0.5 * self.norm,
            CaseId::HalfRootK => 0.5 * self.gram_sum_norm.sqrt(),
        };
        let residual = (self.w - target).abs();
        EqualityReport {
            case_id,
            w: self.w,
            target,
            residual,
            equality_holds: residual <= EQUALITY_TOL * (1.0 + self.w),
            flatness: self.flatness,
            flat: self.flat,
            translation_checks: self.translations.clone(),
            corp2_consequences: self.corp2,
        }
    }
}

/// Decides one equality case and gathers the supporting evidence.
pub fn check_equality_case(a: &ComplexMatrix, case_id: CaseId, policy: &SweepPolicy) -> Result<EqualityReport> {
    Ok(Common::compute(a, policy)?.report(case_id))
}

/// Both equality cases plus the orthogonality test, with their implication verdicts.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EqualityAnalysis {
    pub half_norm: EqualityReport,
    pub half_root_k: EqualityReport,
    pub bj: BjOrthogonality,
    pub verdicts: Vec<Verdict>,
}

pub fn analyze_equality(a: &ComplexMatrix, policy: &SweepPolicy) -> Result<EqualityAnalysis> {
    let common = Common::compute(a, policy)?;
    let bj = bj_from_profile(a, &common.profile, &default_bj_samples(common.norm), policy)?;
    let half_norm = common.report(CaseId::HalfNorm);
    let half_root_k = common.report(CaseId::HalfRootK);
    let verdicts = equality_verdicts(&half_norm, &half_root_k, &bj);
    Ok(EqualityAnalysis {
        half_norm,
        half_root_k,
        bj,
        verdicts,
    })
}

/// Implications that must hold between the pieces of evidence.
pub fn equality_verdicts(half_norm: &EqualityReport, half_root_k: &EqualityReport, bj: &BjOrthogonality) -> Vec<Verdict> {
    let checks = &half_root_k.translation_checks;
    let worst = checks.iter().fold(0.0_f64, |m, c| m.max(c.residual));
    let mut v = Vec::new();

    v.push(if half_root_k.flat {
        Verdict::le("equality.flat_implies_additive", worst, TRANSLATION_TOL, Slack { rel: 0.0, abs: 0.0 })
    } else {
        Verdict::skipped("equality.flat_implies_additive")
    });

    let any_equality = half_norm.equality_holds || half_root_k.equality_holds;
    let bj_floor = -BJ_TOL * (1.0 + half_root_k.w);
    v.push(if any_equality {
        Verdict::holds("equality.case_implies_bj_orthogonal", bj.orthogonal, bj_floor, bj.min_gap)
    } else {
        Verdict::skipped("equality.case_implies_bj_orthogonal")
    });

    let c = &half_root_k.corp2_consequences;
    v.push(if half_root_k.equality_holds {
        Verdict::holds(
            "equality.half_root_k_implies_consequences",
            c.all_match,
            c.norm_plus_sq.max(c.norm_minus_sq),
            c.half_k,
        )
    } else {
        Verdict::skipped("equality.half_root_k_implies_consequences")
    });

    for check in checks {
        v.push(Verdict::le(
            format!("equality.triangle[lambda={}{:+}i]", check.lambda.re, check.lambda.im),
            check.w_shifted,
            check.additive,
            TRIANGLE_SLACK,
        ));
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn diag_1_i() -> ComplexMatrix {
        ComplexMatrix::from_diagonal(&[c(1.0, 0.0), c(0.0, 1.0)]).unwrap()
    }

    #[test]
    fn flatness_of_nilpotent_is_exact() {
        let f = flatness_profile(&ComplexMatrix::upper_shift(2), 64).unwrap();
        assert!((f.mean - 0.5).abs() < 1e-14);
        assert!(f.max_dev <= 1e-10);
    }

    #[test]
    fn flatness_of_identity_matches_abs_cosine() {
        let m = 64;
        let f = flatness_profile(&ComplexMatrix::identity(3), m).unwrap();
        let samples: Vec<f64> = (0..m).map(|k| (2.0 * PI * k as f64 / m as f64).cos().abs()).collect();
        let mean = samples.iter().sum::<f64>() / m as f64;
        let dev = samples.iter().fold(0.0_f64, |d, v| d.max((v - mean).abs()));
        assert!((f.mean - mean).abs() < 1e-13);
        assert!((f.max_dev - dev).abs() < 1e-13);
        assert!(f.max_dev > 0.5);
    }

    #[test]
    fn flatness_of_zero_and_bad_count() {
        let f = flatness_profile(&ComplexMatrix::zeros(2), 16).unwrap();
        assert_eq!((f.mean, f.max_dev), (0.0, 0.0));
        assert!(flatness_profile(&ComplexMatrix::zeros(2), 15).is_err());
    }

    #[test]
    fn nilpotent_half_norm_case() {
        let r = check_equality_case(&ComplexMatrix::upper_shift(2), CaseId::HalfNorm, &SweepPolicy::default()).unwrap();
        assert!(r.equality_holds);
        assert!(r.flat);
        for t in &r.translation_checks {
            assert!((t.w_shifted - (0.5 + t.lambda.norm())).abs() < 1e-9);
        }
    }

    #[test]
    fn shift3_half_root_k_case() {
        let r = check_equality_case(&ComplexMatrix::upper_shift(3), CaseId::HalfRootK, &SweepPolicy::default()).unwrap();
        assert!(r.equality_holds);
        assert!((r.w - 0.5f64.sqrt()).abs() < 1e-12);
        assert!(r.flat);
        assert!(r.corp2_consequences.all_match);
    }

    #[test]
    fn converse_fails_for_diag_1_i() {
        let r = check_equality_case(&diag_1_i(), CaseId::HalfRootK, &SweepPolicy::default()).unwrap();
        assert!(!r.equality_holds);
        assert!((r.target - 0.5f64.sqrt()).abs() < 1e-14);
        let c2 = r.corp2_consequences;
        assert!(c2.norms_match && !c2.crawfords_vanish && !c2.all_match);
        assert!((c2.crawford_plus - 1.0).abs() < 1e-14);
    }

    #[test]
    fn consequences_of_zero() {
        let c2 = corp2_consequences(&ComplexMatrix::zeros(2), CONSEQUENCE_TOL).unwrap();
        assert!(c2.all_match);
        assert_eq!(c2.half_k, 0.0);
        assert!(corp2_consequences(&ComplexMatrix::zeros(2), -1.0).is_err());
    }

    #[test]
    fn bj_examples() {
        let policy = SweepPolicy::default();
        let e12 = ComplexMatrix::upper_shift(2);
        let bj = bj_orthogonality(&e12, &default_bj_samples(1.0), &policy).unwrap();
        assert!(bj.orthogonal);
        assert!((bj.min_gap - 0.25 * 2.0).abs() < 1e-9);

        assert!(bj_orthogonality(&ComplexMatrix::upper_shift(3), &default_bj_samples(1.0), &policy).unwrap().orthogonal);

        let bj = bj_orthogonality(&ComplexMatrix::identity(2), &[c(-0.5, 0.0)], &policy).unwrap();
        assert!(!bj.orthogonal);
        assert!((bj.min_gap + 0.5).abs() < 1e-12);
        assert!(bj_orthogonality(&e12, &[], &policy).is_err());
    }

    #[test]
    fn analysis_verdicts_for_fixtures() {
        let policy = SweepPolicy::default();
        for a in [ComplexMatrix::upper_shift(2), ComplexMatrix::upper_shift(3), diag_1_i()] {
            let r = analyze_equality(&a, &policy).unwrap();
            assert!(r.verdicts.iter().all(|v| !v.failed()), "{:?}", r.verdicts);
        }
        let r = analyze_equality(&ComplexMatrix::upper_shift(4), &policy).unwrap();
        assert!(!r.half_root_k.equality_holds);
        assert!((r.w_sq() - (PI / 5.0).cos().powi(2)).abs() < 1e-10);
    }

    impl EqualityAnalysis {
        fn w_sq(&self) -> f64 {
            self.half_norm.w * self.half_norm.w
        }
    }

    #[test]
    fn case_id_parsing() {
        assert_eq!("half_norm".parse::<CaseId>().unwrap(), CaseId::HalfNorm);
        assert_eq!(CaseId::HalfRootK.to_string(), "half_root_k");
        assert!("x".parse::<CaseId>().is_err());
    }
}
