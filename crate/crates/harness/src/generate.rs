//! Deterministic random ensembles and the fixed example matrices.
//!
//! Every random draw goes through a ChaCha8 stream seeded by a single 64-bit
//! value, so a `(kind, n, seed, scale)` tuple always reproduces the same matrix.
//! Corpus entries use the substream seed [`substream_seed`]`(master, index)`.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;
use wradius_core::{Complex64, ComplexMatrix, HermitianMatrix};

use crate::error::{HarnessError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Ginibre,
    Hermitian,
    Normal,
    NilpotentShift,
    RankOneNilpotent,
    JordanBlock,
    Fixture,
}

impl Kind {
    /// The random and structured ensembles used by corpus runs.
    pub const ENSEMBLES: [Kind; 6] = [
        Kind::Ginibre,
        Kind::Hermitian,
        Kind::Normal,
        Kind::NilpotentShift,
        Kind::RankOneNilpotent,
        Kind::JordanBlock,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Kind::Ginibre => "ginibre",
            Kind::Hermitian => "hermitian",
            Kind::Normal => "normal",
            Kind::NilpotentShift => "nilpotent_shift",
            Kind::RankOneNilpotent => "rank_one_nilpotent",
            Kind::JordanBlock => "jordan_block",
            Kind::Fixture => "paper_example",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Kind {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        Kind::ENSEMBLES
            .iter()
            .chain(std::iter::once(&Kind::Fixture))
            .find(|k| k.name() == s)
            .copied()
            .ok_or_else(|| HarnessError::UnknownKind(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeneratorSpec {
    pub kind: Kind,
    pub n: usize,
    pub seed: u64,
    pub scale: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub example_id: Option<String>,
}

impl GeneratorSpec {
    pub fn new(kind: Kind, n: usize, seed: u64) -> Self {
        Self {
            kind,
            n,
            seed,
            scale: 1.0,
            example_id: None,
        }
    }

    pub fn example(id: &str) -> Self {
        Self {
            kind: Kind::Fixture,
            n: 0,
            seed: 0,
            scale: 1.0,
            example_id: Some(id.to_string()),
        }
    }
}

pub const FIXTURE_IDS: [&str; 6] = ["ex_i", "ex_ii", "shift3", "th13_b", "diag_1_i", "e12"];

/// One of the named example matrices.
pub fn fixture(id: &str) -> Result<ComplexMatrix> {
    let c = Complex64::new;
    let m = match id {
        "ex_i" => ComplexMatrix::from_diagonal(&[c(2.0, 2.0), c(0.0, 0.0)])?,
        "ex_ii" => ComplexMatrix::from_diagonal(&[c(3.0, 2.0), c(0.0, 4.0)])?,
        "shift3" => ComplexMatrix::upper_shift(3),
        "th13_b" => ComplexMatrix::from_real_rows(&[
            vec![0.0, 2.0, 0.0],
            vec![0.0, 0.0, 0.0],
            vec![0.0, 0.0, std::f64::consts::SQRT_2],
        ])?,
        "diag_1_i" => ComplexMatrix::from_diagonal(&[c(1.0, 0.0), c(0.0, 1.0)])?,
        "e12" => ComplexMatrix::upper_shift(2),
        other => return Err(HarnessError::UnknownExample(other.to_string())),
    };
    Ok(m)
}

/// SplitMix64 finalizer applied to `master ⊕ golden·(index+1)`.
pub fn substream_seed(master: u64, index: u64) -> u64 {
    let mut z = master ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard complex Gaussian: `(x + iy)/√2` with `x, y ~ N(0, 1)`, so `E|z|² = 1`.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn ginibre<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<ComplexMatrix> {
    Ok(ComplexMatrix::new(n, (0..n * n).map(|_| complex_gaussian(rng)).collect())?)
}

/// Unitary factor of a QR decomposition by modified Gram-Schmidt on the columns,
/// with phases fixed so `R` has a positive diagonal.
fn unitary_from<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<ComplexMatrix> {
    loop {
        let g = ginibre(n, rng)?;
        let mut cols: Vec<Vec<Complex64>> = (0..n).map(|j| (0..n).map(|i| g.get(i, j)).collect()).collect();
        let mut ok = true;
        for j in 0..n {
            for k in 0..j {
                let (done, rest) = cols.split_at_mut(j);
                let q = &done[k];
                let proj: Complex64 = q.iter().zip(rest[0].iter()).map(|(qi, vi)| qi.conj() * vi).sum();
                for (vi, qi) in rest[0].iter_mut().zip(q) {
                    *vi -= proj * qi;
                }
            }
            let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-8 {
                ok = false;
                break;
            }
            for z in cols[j].iter_mut() {
                *z /= norm;
            }
        }
        if ok {
            let data = (0..n).flat_map(|i| cols.iter().map(move |c| c[i])).collect();
            return Ok(ComplexMatrix::new(n, data)?);
        }
    }
}

pub fn generate(spec: &GeneratorSpec) -> Result<ComplexMatrix> {
    if spec.kind == Kind::Fixture {
        let id = spec
            .example_id
            .as_deref()
            .ok_or_else(|| HarnessError::Config("paper_example needs an example id".into()))?;
        return fixture(id);
    }
    let n = spec.n;
    if n == 0 {
        return Err(HarnessError::Config("dimension must be at least 1".into()));
    }
    if !spec.scale.is_finite() {
        return Err(HarnessError::Config(format!("scale must be finite, got {}", spec.scale)));
    }
    let scale = Complex64::new(spec.scale, 0.0);
    let mut rng = rng_from_seed(spec.seed);
    let m = match spec.kind {
        Kind::Ginibre => ginibre(n, &mut rng)?,
        Kind::Hermitian => HermitianMatrix::real_part_of(&ginibre(n, &mut rng)?).into_matrix(),
        Kind::Normal => {
            let u = unitary_from(n, &mut rng)?;
            let eig: Vec<Complex64> = (0..n).map(|_| complex_gaussian(&mut rng)).collect();
            let d = ComplexMatrix::from_diagonal(&eig)?;
            u.multiply(&d)?.multiply(&u.adjoint())?
        }
        Kind::NilpotentShift => ComplexMatrix::upper_shift(n),
        Kind::RankOneNilpotent => {
            if n < 2 {
                return Err(HarnessError::Config("rank_one_nilpotent needs n >= 2".into()));
            }
            let mut data = vec![Complex64::new(0.0, 0.0); n * n];
            data[1] = Complex64::new(1.0, 0.0);
            ComplexMatrix::new(n, data)?
        }
        Kind::JordanBlock => ComplexMatrix::upper_shift(n).shifted(complex_gaussian(&mut rng)),
        Kind::Fixture => unreachable!("handled above"),
    };
    Ok(m.scale(scale))
}
