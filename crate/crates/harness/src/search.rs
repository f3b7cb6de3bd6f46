//! Random-restart hill climbing on the ratio between a bound and `w²`.
//!
//! Both sides of every bound are homogeneous of degree two, so candidates are
//! kept at unit Frobenius norm. Every bound and `w` are also invariant under
//! unitary similarity, and every matrix is unitarily similar to an upper
//! triangular one, so the search runs over upper-triangular matrices only.
//! In that chart the nilpotent and normal extremizers form linear subspaces
//! rather than curved ones.
//!
//! Each run is an elitist (1+λ) evolution strategy over the `n(n+1)` real
//! coordinates. An iteration draws `λ` Gaussian perturbations from an adapted
//! covariance and keeps the best of them if the ratio does not drop; the step size follows the smoothed fraction of improving
//! offspring. Near a maximum the ratio is usually a cone in some directions
//! and quadratic in others, with a crease whose orientation moves with the
//! point, so an isotropic step stalls long before the quadratic directions
//! have converged. Stalled runs resume from the best matrix with a fresh
//! covariance. Every few stalls the run instead restarts from the best of a
//! batch of fresh random matrices, half of them with random sparsity.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;
use wradius_core::{par, BoundId, Complex64, ComplexMatrix, SweepPolicy};

use crate::error::{HarnessError, Result};
use crate::generate::{ginibre, rng_from_seed};

const INITIAL_STEP: f64 = 0.3;
const MAX_STEP: f64 = 1.0;
const MIN_STEP: f64 = 1e-13;
const LOCAL_STEP: f64 = 0.3;
const GLOBAL_EVERY: usize = 2;
/// Offspring evaluated per iteration.
pub const OFFSPRING: usize = 8;
/// Above this smoothed success rate the covariance is only decayed.
const SUCCESS_THRESHOLD: f64 = 0.44;

#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    pub n: usize,
    pub iters: usize,
    pub seed: u64,
    /// Restart from a fresh random matrix after this many iterations in which the current run did not improve.
    pub patience: usize,
    pub policy: SweepPolicy,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            n: 2,
            iters: 5000,
            seed: 1,
            patience: 200,
            policy: SweepPolicy::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchResult {
    pub bound: String,
    pub n: usize,
    pub seed: u64,
    /// Iterations actually run; fewer than the budget once the ratio reaches 1.
    pub iters: usize,
    pub restarts: usize,
    pub ratio: f64,
    #[serde(serialize_with = "crate::io::serialize_entries")]
    pub best: ComplexMatrix,
}

fn unit_frobenius(m: ComplexMatrix) -> ComplexMatrix {
    let f = m.frobenius_norm();
    if f > 0.0 {
        m.scale(Complex64::new(1.0 / f, 0.0))
    } else {
        m
    }
}

/// Upper-triangular entries, real and imaginary parts interleaved.
fn to_coords(m: &ComplexMatrix) -> Vec<f64> {
    let n = m.dim();
    let mut v = Vec::with_capacity(n * (n + 1));
    for i in 0..n {
        for j in i..n {
            let z = m.get(i, j);
            v.push(z.re);
            v.push(z.im);
        }
    }
    v
}

fn from_coords(n: usize, v: &[f64]) -> Result<ComplexMatrix> {
    let mut data = vec![Complex64::new(0.0, 0.0); n * n];
    let mut parts = v.chunks_exact(2);
    for i in 0..n {
        for j in i..n {
            let c = parts.next().expect("coordinate count matches the triangle");
            data[i * n + j] = Complex64::new(c[0], c[1]);
        }
    }
    Ok(ComplexMatrix::new(n, data)?)
}

/// A random upper-triangular start at unit Frobenius norm.
fn random_start<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<ComplexMatrix> {
    let g = ginibre(n, rng)?;
    Ok(unit_frobenius(from_coords(n, &to_coords(&g))?))
}

/// Like [`random_start`], but each entry is kept with probability ½.
///
/// Extremal matrices for these bounds are often sparse (nilpotent shifts,
/// diagonal matrices), and the ridges leading to them are too sharp for the
/// climb to follow all the way, so global restarts also sample sparse points.
fn sparse_start<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<ComplexMatrix> {
    let mut coords = to_coords(&random_start(n, rng)?);
    loop {
        let mask: Vec<bool> = (0..coords.len() / 2).map(|_| rng.random_bool(0.5)).collect();
        if mask.iter().any(|&keep| keep) {
            for (pair, keep) in coords.chunks_exact_mut(2).zip(mask) {
                if !keep {
                    pair.fill(0.0);
                }
            }
            return Ok(unit_frobenius(from_coords(n, &coords)?));
        }
    }
}

/// Lower Cholesky factor of a symmetric positive definite `d × d` matrix, row-major.
fn cholesky(c: &[f64], d: usize) -> Option<Vec<f64>> {
    let mut l = vec![0.0; d * d];
    for i in 0..d {
        for j in 0..=i {
            let s: f64 = c[i * d + j] - (0..j).map(|k| l[i * d + k] * l[j * d + k]).sum::<f64>();
            if i == j {
                if s.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) {
                    return None;
                }
                l[i * d + i] = s.sqrt();
            } else {
                l[i * d + j] = s / l[j * d + j];
            }
        }
    }
    Some(l)
}

/// State of one (1+λ) run with covariance adaptation.
struct Run {
    x: Vec<f64>,
    ratio: f64,
    sigma: f64,
    cov: Vec<f64>,
    chol: Vec<f64>,
    path: Vec<f64>,
    success: f64,
    stale: usize,
}

/// Success rate the step size is steered towards.
fn target_success() -> f64 {
    1.0 / (5.0 + (OFFSPRING as f64).sqrt() / 2.0)
}

impl Run {
    fn new(x: Vec<f64>, ratio: f64, sigma: f64) -> Self {
        let d = x.len();
        let mut cov = vec![0.0; d * d];
        for i in 0..d {
            cov[i * d + i] = 1.0;
        }
        Self {
            chol: cov.clone(),
            cov,
            path: vec![0.0; d],
            x,
            ratio,
            sigma,
            success: target_success(),
            stale: 0,
        }
    }

    fn dim(&self) -> usize {
        self.x.len()
    }

    fn propose<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let d = self.dim();
        let z: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
        (0..d)
            .map(|i| self.x[i] + self.sigma * (0..=i).map(|k| self.chol[i * d + k] * z[k]).sum::<f64>())
            .collect()
    }

    /// Folds one iteration's offspring `(coords, ratio)` into the run.
    fn update(&mut self, offspring: Vec<(Vec<f64>, f64)>) {
        let lambda = offspring.len() as f64;
        let target = target_success();
        let smoothing = target * lambda / (2.0 + target * lambda);
        let damping = 1.0 + self.dim() as f64 / (2.0 * lambda);
        let successes = offspring.iter().filter(|(_, r)| *r >= self.ratio).count() as f64;
        self.success = (1.0 - smoothing) * self.success + smoothing * successes / lambda;
        let sigma = self.sigma;
        self.sigma = (sigma * ((self.success - target) / (damping * (1.0 - target))).exp()).min(MAX_STEP);

        // first index wins ties so the outcome does not depend on evaluation order
        let Some((candidate, ratio)) = offspring
            .into_iter()
            .reduce(|best, next| if next.1 > best.1 { next } else { best })
        else {
            return;
        };
        if ratio > self.ratio {
            self.stale = 0;
        } else {
            self.stale += 1;
        }
        if ratio < self.ratio {
            return;
        }
        let step: Vec<f64> = candidate.iter().zip(&self.x).map(|(y, x)| (y - x) / sigma).collect();
        self.x = candidate;
        self.ratio = ratio;
        self.adapt_covariance(&step);
    }

    fn adapt_covariance(&mut self, step: &[f64]) {
        let dim = self.dim();
        let d = dim as f64;
        let cc = 2.0 / (d + 2.0);
        let ccov = 2.0 / (d * d + 6.0);
        let keep = cc * (2.0 - cc);
        let small_success = self.success < SUCCESS_THRESHOLD;
        for (p, s) in self.path.iter_mut().zip(step) {
            *p = (1.0 - cc) * *p + if small_success { keep.sqrt() * s } else { 0.0 };
        }
        let mut next = self.cov.clone();
        for i in 0..dim {
            for j in 0..dim {
                let c = self.cov[i * dim + j];
                let rank_one = self.path[i] * self.path[j];
                next[i * dim + j] = if small_success {
                    (1.0 - ccov) * c + ccov * rank_one
                } else {
                    (1.0 - ccov) * c + ccov * (rank_one + keep * c)
                };
            }
        }
        if let Some(l) = cholesky(&next, dim) {
            self.cov = next;
            self.chol = l;
        }
    }
}

/// Maximizes the bound's ratio (at most 1 whenever the bound holds).
///
/// With `iters = 0` the ratio of the first random matrix is returned.
pub fn sharpness_search(bound: BoundId, config: &SearchConfig) -> Result<SearchResult> {
    config.policy.validate()?;
    if config.n == 0 {
        return Err(HarnessError::Config("search dimension must be at least 1".into()));
    }
    let n = config.n;
    let mut rng = rng_from_seed(config.seed);
    let ratio = |m: &ComplexMatrix| bound.ratio(m, &config.policy);

    let start = random_start(n, &mut rng)?;
    let start_ratio = ratio(&start)?;
    let mut run = Run::new(to_coords(&start), start_ratio, INITIAL_STEP);
    let mut best = start;
    let mut best_ratio = start_ratio;
    let mut restarts = 0;
    let mut used = 0;

    // a ratio of 1 is the most any bound allows, so there is nothing left to find
    while used < config.iters && best_ratio < 1.0 {
        used += 1;
        if run.stale >= config.patience || run.sigma < MIN_STEP {
            restarts += 1;
            if restarts % GLOBAL_EVERY == 0 {
                let starts = (0..OFFSPRING)
                    .map(|k| if k % 2 == 0 { random_start(n, &mut rng) } else { sparse_start(n, &mut rng) })
                    .collect::<Result<Vec<_>>>()?;
                let ratios = par::try_map_indexed(OFFSPRING, |k| ratio(&starts[k]))?;
                let (k, r) = ratios
                    .into_iter()
                    .enumerate()
                    .reduce(|best, next| if next.1 > best.1 { next } else { best })
                    .expect("OFFSPRING is positive");
                run = Run::new(to_coords(&starts[k]), r, INITIAL_STEP);
            } else {
                let gap = (1.0 - best_ratio).abs().max(f64::EPSILON);
                run = Run::new(to_coords(&best), best_ratio, (LOCAL_STEP * gap.sqrt()).min(INITIAL_STEP));
            }
        } else {
            let candidates = (0..OFFSPRING)
                .map(|_| from_coords(n, &run.propose(&mut rng)).map(unit_frobenius))
                .collect::<Result<Vec<_>>>()?;
            let ratios = par::try_map_indexed(OFFSPRING, |k| ratio(&candidates[k]))?;
            run.update(candidates.iter().map(to_coords).zip(ratios).collect());
        }
        if run.ratio > best_ratio {
            best_ratio = run.ratio;
            best = from_coords(n, &run.x)?;
        }
    }

    Ok(SearchResult {
        bound: bound.to_string(),
        n,
        seed: config.seed,
        iters: used,
        restarts,
        ratio: best_ratio,
        best,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick(iters: usize) -> SearchConfig {
        SearchConfig {
            iters,
            policy: SweepPolicy {
                grid_n: 128,
                ..SweepPolicy::default()
            },
            ..SearchConfig::default()
        }
    }

    #[test]
    fn zero_budget_returns_seed_ratio() {
        let cfg = quick(0);
        let r = sharpness_search(BoundId::KittanehLower, &cfg).unwrap();
        let seed = random_start(2, &mut rng_from_seed(cfg.seed)).unwrap();
        assert_eq!(r.best, seed);
        assert_eq!(r.ratio, BoundId::KittanehLower.ratio(&seed, &cfg.policy).unwrap());
    }

    #[test]
    fn search_is_deterministic_and_improves() {
        let a = sharpness_search(BoundId::Th1L1, &quick(150)).unwrap();
        let b = sharpness_search(BoundId::Th1L1, &quick(150)).unwrap();
        assert_eq!(a, b);
        let start = sharpness_search(BoundId::Th1L1, &quick(0)).unwrap();
        assert!(a.ratio >= start.ratio);
        assert!(a.ratio <= 1.0 + 1e-7);
    }

    #[test]
    fn coordinates_cover_the_upper_triangle() {
        let mut rng = rng_from_seed(11);
        let m = random_start(3, &mut rng).unwrap();
        let v = to_coords(&m);
        assert_eq!(v.len(), 12);
        assert_eq!(from_coords(3, &v).unwrap(), m);
        for i in 0..3 {
            for j in 0..i {
                assert_eq!(m.get(i, j), Complex64::new(0.0, 0.0));
            }
        }
        assert!((m.frobenius_norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn sparse_starts_are_nonzero_and_sometimes_sparse() {
        let mut rng = rng_from_seed(5);
        let mut saw_zero = false;
        for _ in 0..20 {
            let m = sparse_start(2, &mut rng).unwrap();
            assert!((m.frobenius_norm() - 1.0).abs() < 1e-14);
            saw_zero |= to_coords(&m).contains(&0.0);
        }
        assert!(saw_zero);
    }

    #[test]
    fn cholesky_reconstructs_and_rejects_indefinite() {
        let c = [4.0, 2.0, 2.0, 3.0];
        let l = cholesky(&c, 2).unwrap();
        assert_eq!(l[1], 0.0);
        let back = [l[0] * l[0], l[0] * l[2], l[2] * l[0], l[2] * l[2] + l[3] * l[3]];
        for (x, y) in back.iter().zip(c) {
            assert!((x - y).abs() < 1e-14);
        }
        assert!(cholesky(&[1.0, 2.0, 2.0, 1.0], 2).is_none());
    }

    #[test]
    fn stops_once_the_ratio_reaches_one() {
        // every matrix attains the Kittaneh upper bound in dimension one
        let r = sharpness_search(BoundId::KittanehUpper, &SearchConfig { n: 1, ..quick(50) }).unwrap();
        assert_eq!(r.ratio, 1.0);
        assert_eq!(r.iters, 0);
    }

    #[test]
    fn rejects_zero_dimension() {
        let cfg = SearchConfig { n: 0, ..quick(1) };
        assert!(sharpness_search(BoundId::Th13, &cfg).is_err());
    }
}
