//! Lower and upper bounds on `w²(A)` and the relations between them.
//!
//! Most lower bounds are functions of four numbers taken from the Hermitian
//! pair `S₊ = Re(A) + Im(A)`, `S₋ = Re(A) − Im(A)`: their operator norms and
//! Crawford numbers. They rest on the identity
//!
//! ```text
//! A*A + AA* = S₊² + S₋²
//! ```
//!
//! Upper bounds need numerical radii of powers of `A` and therefore a
//! [`SweepPolicy`]. Every bound is reported on the `w²` scale so that all of
//! them can be compared against each other and against the computed radius.

use std::f64::consts::SQRT_2;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::golden;
use crate::linalg::{gram_sum, inner, operator_norm, vector_norm, ComplexMatrix, HermitianMatrix};
use crate::range::{numerical_radius, SweepPolicy};
use crate::verdict::{Slack, Verdict};

/// Default exponents for the power-mean family.
pub const DEFAULT_R_LIST: [f64; 6] = [1.0, 1.5, 2.0, 3.0, 5.0, 10.0];

/// Golden-section budget for the `t`-minimization.
const MIN_T_ITERS: usize = 200;
const MIN_T_WIDTH: f64 = 1e-12;

/// Tolerance for the algebraic coincidences of the power-mean family at `r = 1, 2`.
const COINCIDENCE_TOL: f64 = 1e-12;

/// Relative tolerance on the `A*A + AA* = S₊² + S₋²` identity.
const IDENTITY_TOL: f64 = 1e-9;

/// The Hermitian pair `S± = Re(A) ± Im(A)` and the scalars the lower bounds use.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SumDiffParts {
    pub s_plus: HermitianMatrix,
    pub s_minus: HermitianMatrix,
    pub norm_plus: f64,
    pub norm_minus: f64,
    pub crawford_plus: f64,
    pub crawford_minus: f64,
    /// `‖A*A + AA*‖`.
    pub gram_sum_norm: f64,
    /// `|‖A*A+AA*‖ − ‖S₊²+S₋²‖| / max` of the two.
    pub identity_residual: f64,
}

pub fn sum_diff_parts(a: &ComplexMatrix) -> Result<SumDiffParts> {
    let re = HermitianMatrix::real_part_of(a);
    let im = HermitianMatrix::imag_part_of(a);
    let s_plus = re.add(&im)?;
    let s_minus = re.sub(&im)?;
    let (lo_p, hi_p) = s_plus.extreme_eigenvalues()?;
    let (lo_m, hi_m) = s_minus.extreme_eigenvalues()?;
    let k = gram_sum(a).norm()?;
    let k_split = s_plus.square().add(&s_minus.square())?.norm()?;
    let scale = k.max(k_split);
    let identity_residual = if scale > 0.0 { (k - k_split).abs() / scale } else { 0.0 };
    Ok(SumDiffParts {
        norm_plus: lo_p.abs().max(hi_p.abs()),
        norm_minus: lo_m.abs().max(hi_m.abs()),
        crawford_plus: interval_crawford(lo_p, hi_p),
        crawford_minus: interval_crawford(lo_m, hi_m),
        gram_sum_norm: k,
        identity_residual,
        s_plus,
        s_minus,
    })
}

fn interval_crawford(lo: f64, hi: f64) -> f64 {
    if lo <= 0.0 && hi >= 0.0 {
        0.0
    } else {
        lo.abs().min(hi.abs())
    }
}

impl SumDiffParts {
    fn sq(&self) -> (f64, f64, f64, f64) {
        (
            self.norm_plus * self.norm_plus,
            self.norm_minus * self.norm_minus,
            self.crawford_plus * self.crawford_plus,
            self.crawford_minus * self.crawford_minus,
        )
    }

    /// `(¼‖A*A+AA*‖, ½‖A*A+AA*‖)`.
    pub fn kittaneh(&self) -> (f64, f64) {
        (0.25 * self.gram_sum_norm, 0.5 * self.gram_sum_norm)
    }

    /// `L1 = ¼‖S₊‖² + ¼‖S₋‖²` and `L2 = L1 + ¼c²(S₊) + ¼c²(S₋)`.
    pub fn th1(&self) -> (f64, f64) {
        let (a2, b2, cp2, cm2) = self.sq();
        let l1 = 0.25 * (a2 + b2);
        (l1, l1 + 0.25 * (cp2 + cm2))
    }

    /// `¼‖A*A+AA*‖ + ¼c²(S₊) + ¼c²(S₋)`.
    pub fn cor1(&self) -> f64 {
        let (_, _, cp2, cm2) = self.sq();
        0.25 * (self.gram_sum_norm + cp2 + cm2)
    }

    /// `β₁ = ½c²(S₊) + ½‖S₋‖²`, `β₂ = ½c²(S₋) + ½‖S₊‖²` and their maximum.
    pub fn betas(&self) -> (f64, f64, f64) {
        let (a2, b2, cp2, cm2) = self.sq();
        let beta1 = 0.5 * (cp2 + b2);
        let beta2 = 0.5 * (cm2 + a2);
        (beta1, beta2, beta1.max(beta2))
    }

    /// The `cor1` bound plus `¼|‖S₊‖² − ‖S₋‖² + c²(S₋) − c²(S₊)|`.
    pub fn remark_refined(&self) -> f64 {
        let (a2, b2, cp2, cm2) = self.sq();
        self.cor1() + 0.25 * (a2 - b2 + cm2 - cp2).abs()
    }

    /// `¼·{(3/2)‖S₊‖⁴ + (3/2)‖S₋‖⁴ + ‖S₊‖²‖S₋‖²}^{1/2}`.
    pub fn theor16(&self) -> f64 {
        let (a2, b2, _, _) = self.sq();
        0.25 * (1.5 * a2 * a2 + 1.5 * b2 * b2 + a2 * b2).sqrt()
    }

    /// `(‖S₊‖⁴ + ‖S₋‖⁴)^{1/2} / (2√2)`.
    pub fn thn16(&self) -> f64 {
        let (a2, b2, _, _) = self.sq();
        (a2 * a2 + b2 * b2).sqrt() / (2.0 * SQRT_2)
    }

    /// `½·(½‖S₊‖^{2r} + ½‖S₋‖^{2r})^{1/r}` for `r ≥ 1`.
    pub fn thp(&self, r: f64) -> Result<f64> {
        check_exponent(r)?;
        let (a2, b2, _, _) = self.sq();
        let top = a2.max(b2);
        if top == 0.0 {
            return Ok(0.0);
        }
        // factor out the larger term so a^{2r} cannot overflow
        let mean = 0.5 * (a2 / top).powf(r) + 0.5 * (b2 / top).powf(r);
        Ok(0.5 * top * mean.powf(1.0 / r))
    }

    /// `½·max{‖S₊‖², ‖S₋‖²}`, the `r → ∞` limit of [`Self::thp`]. Informational only.
    pub fn thp_limit(&self) -> f64 {
        let (a2, b2, _, _) = self.sq();
        0.5 * a2.max(b2)
    }

    /// `¼·[max{‖S₊‖², ‖S₋‖²} + ‖S₊‖·‖S₋‖]`.
    pub fn theor17(&self) -> f64 {
        let (a2, b2, _, _) = self.sq();
        0.25 * (a2.max(b2) + self.norm_plus * self.norm_minus)
    }
}

fn check_exponent(r: f64) -> Result<()> {
    if !(r.is_finite() && r >= 1.0) {
        return Err(Error::InvalidArgument(format!("power-mean exponent must be a finite r >= 1, got {r}")));
    }
    Ok(())
}

/// `(¼‖A*A+AA*‖, ½‖A*A+AA*‖)`.
pub fn bound_kittaneh(a: &ComplexMatrix) -> Result<(f64, f64)> {
    let k = gram_sum(a).norm()?;
    Ok((0.25 * k, 0.5 * k))
}

pub fn bound_th1(a: &ComplexMatrix) -> Result<(f64, f64)> {
    Ok(sum_diff_parts(a)?.th1())
}

pub fn bound_betas(a: &ComplexMatrix) -> Result<(f64, f64, f64)> {
    Ok(sum_diff_parts(a)?.betas())
}

pub fn bound_remark_refined(a: &ComplexMatrix) -> Result<f64> {
    Ok(sum_diff_parts(a)?.remark_refined())
}

pub fn bound_theor16(a: &ComplexMatrix) -> Result<f64> {
    Ok(sum_diff_parts(a)?.theor16())
}

pub fn bound_thn16(a: &ComplexMatrix) -> Result<f64> {
    Ok(sum_diff_parts(a)?.thn16())
}

pub fn bound_thp(a: &ComplexMatrix, r: f64) -> Result<f64> {
    check_exponent(r)?;
    sum_diff_parts(a)?.thp(r)
}

pub fn bound_theor17(a: &ComplexMatrix) -> Result<f64> {
    Ok(sum_diff_parts(a)?.theor17())
}

/// `½(‖A‖² + w(A²))`.
pub fn upper_dragomir(a: &ComplexMatrix, policy: &SweepPolicy) -> Result<f64> {
    let norm = operator_norm(a)?;
    let w_sq = numerical_radius(&a.pow(2), policy)?;
    Ok(0.5 * (norm * norm + w_sq))
}

/// Minimizer of `t ↦ ‖tP + (1−t)Q‖` over `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvexMin {
    pub t: f64,
    pub value: f64,
}

/// Minimizes the convex function `t ↦ ‖tP + (1−t)Q‖` on `[0, 1]` by golden section.
///
/// The endpoints and midpoint are always evaluated too, so the result never
/// exceeds `min(g(0), g(½), g(1))`.
pub fn convex_min_t(p: &HermitianMatrix, q: &HermitianMatrix) -> Result<ConvexMin> {
    let g = |t: f64| p.lerp(q, t)?.norm();
    let opt = golden::minimize(g, 0.0, 1.0, MIN_T_ITERS, MIN_T_WIDTH)?;
    let mut best = ConvexMin {
        t: opt.x,
        value: opt.value,
    };
    for t in [0.0, 0.5, 1.0] {
        let value = g(t)?;
        if value < best.value {
            best = ConvexMin { t, value };
        }
    }
    Ok(best)
}

/// Ingredients shared by the upper bounds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UpperIngredients {
    pub norm: f64,
    pub w: f64,
    pub w_square: f64,
    pub norm_square: f64,
    pub w_cube: f64,
    /// `w(A*A²A*)`.
    pub w_sandwich: f64,
    /// `‖A*A + AA*‖`.
    pub gram_sum_norm: f64,
    /// `‖(A*A)² + (AA*)²‖`.
    pub quartic_norm: f64,
    pub min_t: ConvexMin,
}

impl UpperIngredients {
    pub fn compute(a: &ComplexMatrix, policy: &SweepPolicy) -> Result<Self> {
        let adj = a.adjoint();
        let a2 = a.multiply(a)?;
        let a3 = a2.multiply(a)?;
        let sandwich = adj.multiply(&a2)?.multiply(&adj)?;
        let gram = HermitianMatrix::gram(a);
        let co_gram = HermitianMatrix::co_gram(a);
        Ok(Self {
            norm: operator_norm(a)?,
            w: numerical_radius(a, policy)?,
            w_square: numerical_radius(&a2, policy)?,
            norm_square: operator_norm(&a2)?,
            w_cube: numerical_radius(&a3, policy)?,
            w_sandwich: numerical_radius(&sandwich, policy)?,
            gram_sum_norm: gram.add(&co_gram)?.norm()?,
            quartic_norm: gram.square().add(&co_gram.square())?.norm()?,
            min_t: convex_min_t(&gram, &co_gram)?,
        })
    }

    pub fn dragomir(&self) -> f64 {
        0.5 * (self.norm * self.norm + self.w_square)
    }

    /// `½·[‖A‖²·min_t‖tA*A + (1−t)AA*‖ + w²(A²) + w(A²)‖A*A+AA*‖]^{1/2}`.
    pub fn th13(&self) -> f64 {
        let inner = self.norm * self.norm * self.min_t.value
            + self.w_square * self.w_square
            + self.w_square * self.gram_sum_norm;
        0.5 * inner.max(0.0).sqrt()
    }

    /// Bound on `w⁴`: `¼[w²(A²) + ¼‖(A*A)²+(AA*)²‖ + ½w(A*A²A*) + w(A²)‖A*A+AA*‖]`.
    pub fn th14_w4(&self) -> f64 {
        0.25 * (self.w_square * self.w_square
            + 0.25 * self.quartic_norm
            + 0.5 * self.w_sandwich
            + self.w_square * self.gram_sum_norm)
    }

    /// Bound on `w³`: `¼[w(A³) + ‖A‖‖A²‖ + w(A)‖A*A+AA*‖]`.
    pub fn thp1_w3(&self) -> f64 {
        0.25 * (self.w_cube + self.norm * self.norm_square + self.w * self.gram_sum_norm)
    }
}

pub fn upper_th13(a: &ComplexMatrix, policy: &SweepPolicy) -> Result<f64> {
    let a2 = a.pow(2);
    let norm = operator_norm(a)?;
    let w_sq = numerical_radius(&a2, policy)?;
    let gram = HermitianMatrix::gram(a);
    let co_gram = HermitianMatrix::co_gram(a);
    let k = gram.add(&co_gram)?.norm()?;
    let min_t = convex_min_t(&gram, &co_gram)?;
    let inner = norm * norm * min_t.value + w_sq * w_sq + w_sq * k;
    Ok(0.5 * inner.max(0.0).sqrt())
}

/// Returns `(bound on w⁴, its square root)`.
pub fn upper_th14(a: &ComplexMatrix, policy: &SweepPolicy) -> Result<(f64, f64)> {
    let adj = a.adjoint();
    let a2 = a.pow(2);
    let sandwich = adj.multiply(&a2)?.multiply(&adj)?;
    let gram = HermitianMatrix::gram(a);
    let co_gram = HermitianMatrix::co_gram(a);
    let w_sq = numerical_radius(&a2, policy)?;
    let quartic = gram.square().add(&co_gram.square())?.norm()?;
    let k = gram.add(&co_gram)?.norm()?;
    let w4 = 0.25 * (w_sq * w_sq + 0.25 * quartic + 0.5 * numerical_radius(&sandwich, policy)? + w_sq * k);
    Ok((w4, w4.max(0.0).sqrt()))
}

/// Returns `(bound on w³, its 2/3 power)`.
pub fn upper_thp1(a: &ComplexMatrix, policy: &SweepPolicy) -> Result<(f64, f64)> {
    let a2 = a.pow(2);
    let a3 = a2.multiply(a)?;
    let w3 = 0.25
        * (numerical_radius(&a3, policy)?
            + operator_norm(a)? * operator_norm(&a2)?
            + numerical_radius(a, policy)? * gram_sum(a).norm()?);
    Ok((w3, w3.max(0.0).powf(2.0 / 3.0)))
}

/// One auxiliary inequality `lhs ≤ rhs`; `lhs`/`rhs` are `None` when the row was skipped.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaRow {
    pub id: &'static str,
    pub lhs: Option<f64>,
    pub rhs: Option<f64>,
}

impl LemmaRow {
    fn evaluated(id: &'static str, lhs: f64, rhs: f64) -> Self {
        Self {
            id,
            lhs: Some(lhs),
            rhs: Some(rhs),
        }
    }

    pub fn verdict(&self) -> Verdict {
        let id = format!("lemma.{}", self.id);
        match (self.lhs, self.rhs) {
            (Some(lhs), Some(rhs)) => Verdict::le(id, lhs, rhs, Slack::LEMMA),
            _ => Verdict::skipped(id),
        }
    }
}

/// `‖A+D‖² ≤ ‖A‖² + ‖D‖² + ½‖A*A + D*D‖ + w(A*D)` and the variant with `AA* + DD*`, `w(AD*)`.
pub fn lemma_sum_norm(a: &ComplexMatrix, d: &ComplexMatrix, policy: &SweepPolicy) -> Result<[LemmaRow; 2]> {
    let (na, nd) = (operator_norm(a)?, operator_norm(d)?);
    let lhs = operator_norm(&a.add(d)?)?.powi(2);
    let base = na * na + nd * nd;
    let grams = HermitianMatrix::gram(a).add(&HermitianMatrix::gram(d))?.norm()?;
    let co_grams = HermitianMatrix::co_gram(a).add(&HermitianMatrix::co_gram(d))?.norm()?;
    let w1 = numerical_radius(&a.adjoint().multiply(d)?, policy)?;
    let w2 = numerical_radius(&a.multiply(&d.adjoint())?, policy)?;
    Ok([
        LemmaRow::evaluated("sum_norm_gram", lhs, base + 0.5 * grams + w1),
        LemmaRow::evaluated("sum_norm_co_gram", lhs, base + 0.5 * co_grams + w2),
    ])
}

/// `‖A+D‖² ≤ 2·max{‖A*A + D*D‖, ‖AA* + DD*‖}`.
pub fn lemma_sum_max(a: &ComplexMatrix, d: &ComplexMatrix) -> Result<LemmaRow> {
    let lhs = operator_norm(&a.add(d)?)?.powi(2);
    let grams = HermitianMatrix::gram(a).add(&HermitianMatrix::gram(d))?.norm()?;
    let co_grams = HermitianMatrix::co_gram(a).add(&HermitianMatrix::co_gram(d))?.norm()?;
    Ok(LemmaRow::evaluated("sum_max_gram", lhs, 2.0 * grams.max(co_grams)))
}

/// For positive `P, Q`: `‖P+Q‖ ≤ max{‖P‖, ‖Q‖} + ‖PQ‖^{1/2}`. Skipped unless both are PSD.
pub fn lemma_positive_sum(p: &ComplexMatrix, q: &ComplexMatrix) -> Result<LemmaRow> {
    let as_psd = |m: &ComplexMatrix| -> Result<Option<HermitianMatrix>> {
        match HermitianMatrix::new(m.clone()) {
            Ok(h) if h.is_psd()? => Ok(Some(h)),
            Ok(_) | Err(Error::NotHermitian { .. }) => Ok(None),
            Err(e) => Err(e),
        }
    };
    let (Some(hp), Some(hq)) = (as_psd(p)?, as_psd(q)?) else {
        return Ok(LemmaRow {
            id: "positive_sum",
            lhs: None,
            rhs: None,
        });
    };
    let lhs = hp.add(&hq)?.norm()?;
    let rhs = hp.norm()?.max(hq.norm()?) + operator_norm(&p.multiply(q)?)?.sqrt();
    Ok(LemmaRow::evaluated("positive_sum", lhs, rhs))
}

/// Buzano: `|⟨x,e⟩⟨e,y⟩| ≤ ½(|⟨x,y⟩| + ‖x‖‖y‖)` for unit `e`.
pub fn lemma_buzano(x: &[Complex64], y: &[Complex64], e: &[Complex64]) -> Result<LemmaRow> {
    if x.len() != e.len() || y.len() != e.len() {
        return Err(Error::InvalidArgument("Buzano vectors must have equal length".into()));
    }
    if (vector_norm(e) - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidArgument(format!("Buzano needs a unit vector e, got norm {}", vector_norm(e))));
    }
    let lhs = (inner(x, e) * inner(e, y)).norm();
    let rhs = 0.5 * (inner(x, y).norm() + vector_norm(x) * vector_norm(y));
    Ok(LemmaRow::evaluated("buzano", lhs, rhs))
}

/// The five auxiliary inequalities evaluated on one input set.
pub fn lemma_suite(
    a: &ComplexMatrix,
    d: &ComplexMatrix,
    x: &[Complex64],
    y: &[Complex64],
    e: &[Complex64],
    policy: &SweepPolicy,
) -> Result<Vec<LemmaRow>> {
    let [r1, r2] = lemma_sum_norm(a, d, policy)?;
    Ok(vec![
        r1,
        r2,
        lemma_sum_max(a, d)?,
        lemma_positive_sum(a, d)?,
        lemma_buzano(x, y, e)?,
    ])
}

/// `(r, value)` entry of the power-mean family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerMeanValue {
    pub r: f64,
    pub value: f64,
}

/// Lower bounds on `w²`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LowerBounds {
    pub kittaneh_lower: f64,
    #[serde(rename = "th1_L1")]
    pub th1_l1: f64,
    #[serde(rename = "th1_L2")]
    pub th1_l2: f64,
    pub cor1: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub beta_max: f64,
    pub remark_refined: f64,
    pub theor16: f64,
    pub thn16: f64,
    pub thp: Vec<PowerMeanValue>,
    pub thp_limit: f64,
    pub theor17: f64,
}

/// Upper bounds on `w²`, with the raw higher-power values kept alongside.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UpperBounds {
    pub kittaneh_upper: f64,
    pub dragomir: f64,
    pub th13: f64,
    pub th13_t: f64,
    pub th14_w4: f64,
    pub th14_as_sq: f64,
    pub thp1_w3: f64,
    pub thp1_as_sq: f64,
}

/// All bounds for one matrix plus the verdicts of every chain they must satisfy.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub n: usize,
    pub w: f64,
    pub w_sq: f64,
    pub norm: f64,
    pub norm_plus: f64,
    pub norm_minus: f64,
    pub crawford_plus: f64,
    pub crawford_minus: f64,
    pub gram_sum_norm: f64,
    pub identity_residual: f64,
    pub lower: LowerBounds,
    pub upper: UpperBounds,
    pub verdicts: Vec<Verdict>,
    /// Sub-computations that failed; the affected fields are NaN and their verdicts fail.
    pub errors: Vec<String>,
}

impl BoundReport {
    pub fn verdict(&self, id: &str) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.id == id)
    }

    pub fn all_pass(&self) -> bool {
        self.errors.is_empty() && self.verdicts.iter().all(|v| !v.failed())
    }

    pub fn thp_value(&self, r: f64) -> Option<f64> {
        self.lower.thp.iter().find(|p| p.r == r).map(|p| p.value)
    }
}

/// Evaluates every bound on `A` and checks the chains between them.
///
/// Failing sub-computations are recorded in `errors` instead of aborting;
/// only invalid arguments (bad policy or exponents) are returned as `Err`.
pub fn full_report(a: &ComplexMatrix, policy: &SweepPolicy, r_list: &[f64]) -> Result<BoundReport> {
    policy.validate()?;
    if r_list.is_empty() {
        return Err(Error::InvalidArgument("r_list must not be empty".into()));
    }
    for &r in r_list {
        check_exponent(r)?;
    }
    let mut errors = Vec::new();

    let parts = match sum_diff_parts(a) {
        Ok(p) => Some(p),
        Err(e) => {
            errors.push(format!("sum/difference parts: {e}"));
            None
        }
    };
    let upper_ing = match UpperIngredients::compute(a, policy) {
        Ok(u) => Some(u),
        Err(e) => {
            errors.push(format!("upper-bound ingredients: {e}"));
            None
        }
    };

    let nan = f64::NAN;
    let pf = |f: &dyn Fn(&SumDiffParts) -> f64| parts.as_ref().map_or(nan, f);
    let uf = |f: &dyn Fn(&UpperIngredients) -> f64| upper_ing.as_ref().map_or(nan, f);

    let (th1_l1, th1_l2) = parts.as_ref().map_or((nan, nan), SumDiffParts::th1);
    let (beta1, beta2, beta_max) = parts.as_ref().map_or((nan, nan, nan), SumDiffParts::betas);
    let thp = r_list
        .iter()
        .map(|&r| PowerMeanValue {
            r,
            value: parts.as_ref().map_or(nan, |p| p.thp(r).unwrap_or(nan)),
        })
        .collect();
    let lower = LowerBounds {
        kittaneh_lower: pf(&|p| p.kittaneh().0),
        th1_l1,
        th1_l2,
        cor1: pf(&SumDiffParts::cor1),
        beta1,
        beta2,
        beta_max,
        remark_refined: pf(&SumDiffParts::remark_refined),
        theor16: pf(&SumDiffParts::theor16),
        thn16: pf(&SumDiffParts::thn16),
        thp,
        thp_limit: pf(&SumDiffParts::thp_limit),
        theor17: pf(&SumDiffParts::theor17),
    };
    let th14_w4 = uf(&UpperIngredients::th14_w4);
    let thp1_w3 = uf(&UpperIngredients::thp1_w3);
    let upper = UpperBounds {
        kittaneh_upper: pf(&|p| p.kittaneh().1),
        dragomir: uf(&UpperIngredients::dragomir),
        th13: uf(&UpperIngredients::th13),
        th13_t: uf(&|u| u.min_t.t),
        th14_w4,
        th14_as_sq: th14_w4.max(0.0).sqrt(),
        thp1_w3,
        thp1_as_sq: thp1_w3.max(0.0).powf(2.0 / 3.0),
    };
    let w = uf(&|u| u.w);
    let mut report = BoundReport {
        n: a.dim(),
        w,
        w_sq: w * w,
        norm: uf(&|u| u.norm),
        norm_plus: pf(&|p| p.norm_plus),
        norm_minus: pf(&|p| p.norm_minus),
        crawford_plus: pf(&|p| p.crawford_plus),
        crawford_minus: pf(&|p| p.crawford_minus),
        gram_sum_norm: pf(&|p| p.gram_sum_norm),
        identity_residual: pf(&|p| p.identity_residual),
        lower,
        upper,
        verdicts: Vec::new(),
        errors,
    };
    report.verdicts = chain_verdicts(&report);
    Ok(report)
}

/// Checks the orderings and identities the bounds must satisfy.
pub fn chain_verdicts(r: &BoundReport) -> Vec<Verdict> {
    let s = Slack::BOUND;
    let lo = &r.lower;
    let up = &r.upper;
    let w_sq = r.w_sq;
    let kl = lo.kittaneh_lower;
    let cor1_value = kl + 0.25 * (r.crawford_plus.powi(2) + r.crawford_minus.powi(2));

    let mut v = vec![
        Verdict::le("sandwich.half_norm_le_w", 0.5 * r.norm, r.w, s),
        Verdict::le("sandwich.w_le_norm", r.w, r.norm, s),
        Verdict::le("kittaneh.lower_le_w_sq", kl, w_sq, s),
        Verdict::le("kittaneh.w_sq_le_upper", w_sq, up.kittaneh_upper, s),
        Verdict::le("th1.kittaneh_le_L1", kl, lo.th1_l1, s),
        Verdict::le("th1.L1_le_L2", lo.th1_l1, lo.th1_l2, s),
        Verdict::le("th1.L2_le_w_sq", lo.th1_l2, w_sq, s),
        Verdict::le("cor1.le_w_sq", cor1_value, w_sq, s),
        Verdict::le("betas.max_le_w_sq", lo.beta_max, w_sq, s),
        Verdict::le("remark.refined_le_beta_max", lo.remark_refined, lo.beta_max, s),
        Verdict::le("remark.cor1_le_refined", cor1_value, lo.remark_refined, s),
        Verdict::le("theor16.kittaneh_le", kl, lo.theor16, s),
        Verdict::le("theor16.le_w_sq", lo.theor16, w_sq, s),
        Verdict::le("thn16.kittaneh_le", kl, lo.thn16, s),
        Verdict::le("thn16.le_w_sq", lo.thn16, w_sq, s),
        Verdict::le("theor17.kittaneh_le", kl, lo.theor17, s),
        Verdict::le("theor17.le_w_sq", lo.theor17, w_sq, s),
        Verdict::ge("power_mean.thn16_ge_L1", lo.thn16, lo.th1_l1, s),
        Verdict::ge("power_mean.thn16_ge_theor16", lo.thn16, lo.theor16, s),
    ];

    for p in &lo.thp {
        v.push(Verdict::le(format!("thp.kittaneh_le[r={}]", p.r), kl, p.value, s));
        v.push(Verdict::le(format!("thp.le_w_sq[r={}]", p.r), p.value, w_sq, s));
    }
    let mut sorted = lo.thp.clone();
    sorted.sort_by(|x, y| x.r.total_cmp(&y.r));
    for pair in sorted.windows(2) {
        v.push(Verdict::le(
            format!("thp.monotone[r={}..{}]", pair[0].r, pair[1].r),
            pair[0].value,
            pair[1].value,
            s,
        ));
    }
    let scale = |x: f64| COINCIDENCE_TOL * (1.0 + x.abs());
    match lo.thp.iter().find(|p| p.r == 1.0) {
        Some(p) => v.push(Verdict::close("thp.r1_equals_L1", p.value, lo.th1_l1, scale(lo.th1_l1))),
        None => v.push(Verdict::skipped("thp.r1_equals_L1")),
    }
    match lo.thp.iter().find(|p| p.r == 2.0) {
        Some(p) => v.push(Verdict::close("thp.r2_equals_thn16", p.value, lo.thn16, scale(lo.thn16))),
        None => v.push(Verdict::skipped("thp.r2_equals_thn16")),
    }

    let w4 = w_sq * w_sq;
    let w3 = w_sq * r.w;
    v.extend([
        Verdict::le("upper.w_sq_le_th13", w_sq, up.th13, s),
        Verdict::le("upper.th13_le_dragomir", up.th13, up.dragomir, s),
        Verdict::le("upper.w_sq_le_dragomir", w_sq, up.dragomir, s),
        Verdict::le("upper.w4_le_th14", w4, up.th14_w4, s),
        Verdict::le("upper.th14_le_dragomir_sq", up.th14_w4, up.dragomir * up.dragomir, s),
        Verdict::le("upper.w3_le_thp1", w3, up.thp1_w3, s),
        Verdict::le("identity.gram_sum_split", r.identity_residual, IDENTITY_TOL, Slack { rel: 0.0, abs: 0.0 }),
    ]);
    v
}

/// Known witnesses that two families of bounds are not comparable in general.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Witness {
    /// `theor17 < min(theor16, thn16)`.
    Theor17BelowBoth,
    /// `theor17 > max(theor16, thn16)`.
    Theor17AboveBoth,
    /// `th13 < ½‖A*A+AA*‖`.
    Th13BelowKittanehUpper,
    /// `th13 > ½‖A*A+AA*‖`.
    Th13AboveKittanehUpper,
}

/// Witness verdicts; those not applicable to this matrix are skipped.
pub fn witness_verdicts(r: &BoundReport, witnesses: &[Witness]) -> Vec<Verdict> {
    let lo = &r.lower;
    let up = &r.upper;
    let has = |w: Witness| witnesses.contains(&w);
    let mut v = Vec::new();
    let mut push = |w: Witness, id: &str, make: &dyn Fn() -> Verdict| {
        v.push(if has(w) { make() } else { Verdict::skipped(id) });
    };
    push(Witness::Theor17BelowBoth, "witness.theor17_below_theor16_thn16", &|| {
        Verdict::lt("witness.theor17_below_theor16_thn16", lo.theor17, lo.theor16.min(lo.thn16))
    });
    push(Witness::Theor17AboveBoth, "witness.theor17_above_theor16_thn16", &|| {
        Verdict::lt("witness.theor17_above_theor16_thn16", lo.theor16.max(lo.thn16), lo.theor17)
    });
    push(Witness::Th13BelowKittanehUpper, "witness.th13_below_kittaneh_upper", &|| {
        Verdict::lt("witness.th13_below_kittaneh_upper", up.th13, up.kittaneh_upper)
    });
    push(Witness::Th13AboveKittanehUpper, "witness.th13_above_kittaneh_upper", &|| {
        Verdict::lt("witness.th13_above_kittaneh_upper", up.kittaneh_upper, up.th13)
    });
    v
}

/// Identifies a single bound for targeted evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundId {
    KittanehLower,
    Th1L1,
    Th1L2,
    Cor1,
    BetaMax,
    RemarkRefined,
    Theor16,
    Thn16,
    Thp(f64),
    Theor17,
    KittanehUpper,
    Dragomir,
    Th13,
    Th14,
    Thp1,
}

impl BoundId {
    pub const NAMES: [&'static str; 15] = [
        "kittaneh_lower",
        "th1_L1",
        "th1_L2",
        "cor1",
        "beta_max",
        "remark_refined",
        "theor16",
        "thn16",
        "thp:<r>",
        "theor17",
        "kittaneh_upper",
        "dragomir",
        "th13",
        "th14",
        "thp1",
    ];

    pub fn is_lower(&self) -> bool {
        !matches!(
            self,
            BoundId::KittanehUpper | BoundId::Dragomir | BoundId::Th13 | BoundId::Th14 | BoundId::Thp1
        )
    }

    /// The bound's value on the `w²` scale.
    pub fn evaluate(&self, a: &ComplexMatrix, policy: &SweepPolicy) -> Result<f64> {
        Ok(match *self {
            BoundId::KittanehLower => bound_kittaneh(a)?.0,
            BoundId::KittanehUpper => bound_kittaneh(a)?.1,
            BoundId::Th1L1 => bound_th1(a)?.0,
            BoundId::Th1L2 => bound_th1(a)?.1,
            BoundId::Cor1 => sum_diff_parts(a)?.cor1(),
            BoundId::BetaMax => bound_betas(a)?.2,
            BoundId::RemarkRefined => bound_remark_refined(a)?,
            BoundId::Theor16 => bound_theor16(a)?,
            BoundId::Thn16 => bound_thn16(a)?,
            BoundId::Thp(r) => bound_thp(a, r)?,
            BoundId::Theor17 => bound_theor17(a)?,
            BoundId::Dragomir => upper_dragomir(a, policy)?,
            BoundId::Th13 => upper_th13(a, policy)?,
            BoundId::Th14 => upper_th14(a, policy)?.1,
            BoundId::Thp1 => upper_thp1(a, policy)?.1,
        })
    }

    /// `bound / w²` for lower bounds, `w² / bound` for upper bounds; at most 1 when the
    /// bound holds. Zero when the denominator vanishes.
    pub fn ratio(&self, a: &ComplexMatrix, policy: &SweepPolicy) -> Result<f64> {
        let bound = self.evaluate(a, policy)?;
        let w = numerical_radius(a, policy)?;
        let w_sq = w * w;
        let (num, den) = if self.is_lower() { (bound, w_sq) } else { (w_sq, bound) };
        Ok(if den > 0.0 { num / den } else { 0.0 })
    }
}

impl fmt::Display for BoundId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundId::Thp(r) => write!(f, "thp:{r}"),
            other => {
                let idx = [
                    BoundId::KittanehLower,
                    BoundId::Th1L1,
                    BoundId::Th1L2,
                    BoundId::Cor1,
                    BoundId::BetaMax,
                    BoundId::RemarkRefined,
                    BoundId::Theor16,
                    BoundId::Thn16,
                    BoundId::Thp(0.0),
                    BoundId::Theor17,
                    BoundId::KittanehUpper,
                    BoundId::Dragomir,
                    BoundId::Th13,
                    BoundId::Th14,
                    BoundId::Thp1,
                ]
                .iter()
                .position(|b| b == other)
                .expect("every variant is listed");
                f.write_str(Self::NAMES[idx])
            }
        }
    }
}

impl FromStr for BoundId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "kittaneh_lower" => BoundId::KittanehLower,
            "th1_L1" => BoundId::Th1L1,
            "th1_L2" => BoundId::Th1L2,
            "cor1" => BoundId::Cor1,
            "beta_max" => BoundId::BetaMax,
            "remark_refined" => BoundId::RemarkRefined,
            "theor16" => BoundId::Theor16,
            "thn16" => BoundId::Thn16,
            "theor17" => BoundId::Theor17,
            "kittaneh_upper" => BoundId::KittanehUpper,
            "dragomir" => BoundId::Dragomir,
            "th13" => BoundId::Th13,
            "th14" => BoundId::Th14,
            "thp1" => BoundId::Thp1,
            other => match other.strip_prefix("thp:").map(str::parse::<f64>) {
                Some(Ok(r)) => {
                    check_exponent(r)?;
                    BoundId::Thp(r)
                }
                _ => {
                    return Err(Error::InvalidArgument(format!(
                        "unknown bound id '{other}'; expected one of {}",
                        Self::NAMES.join(", ")
                    )))
                }
            },
        })
    }
}
