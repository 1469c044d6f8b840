//! Seeded multivariate Gaussian scenario generation.
//!
//! Sampling is bit-reproducible: the generator (`ChaCha12`), the seed
//! expansion (SplitMix64), and the normal-variate transform (Box-Muller on
//! 53-bit uniforms) are all pinned here, so a `(spec, K, seed)` triple always
//! produces the same bytes regardless of platform or dependency versions. The
//! pinned pipeline is named by [`GENERATOR_TAG`] and recorded in sample files
//! and run manifests.

use std::f64::consts::PI;
use std::fmt::Write as _;

use rand_chacha::ChaCha12Rng;
use rand_core::{RngCore, SeedableRng};
use thiserror::Error;

/// Identifier of the pinned RNG + transform pipeline.
pub const GENERATOR_TAG: &str = "chacha12-splitmix64-boxmuller-v1";

/// Largest diagonal jitter applied to rescue a numerically semi-definite
/// covariance, relative to the largest diagonal entry (absolute when the
/// diagonal is zero).
pub const MAX_JITTER: f64 = 1e-10;

/// Symmetry tolerance for covariance input.
pub const SYMMETRY_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum SamplingError {
    #[error("covariance is not square: {rows} rows, {cols} columns")]
    NotSquare { rows: usize, cols: usize },
    #[error("mean has length {mean} but covariance is {dim}x{dim}")]
    DimensionMismatch { mean: usize, dim: usize },
    #[error("covariance entry ({i},{j}) is not finite")]
    NotFinite { i: usize, j: usize },
    #[error("covariance is not symmetric: |V[{i}][{j}] - V[{j}][{i}]| = {delta:e}")]
    NotSymmetric { i: usize, j: usize, delta: f64 },
    #[error("covariance is not positive semidefinite within jitter {MAX_JITTER:e} (pivot {pivot:e} at index {index})")]
    NotPsd { index: usize, pivot: f64 },
    #[error("sample count must be at least 1")]
    EmptySampleRequest,
    #[error("covariance estimate needs at least 2 samples, got {0}")]
    TooFewForCovariance(usize),
    #[error("sample file: {0}")]
    Format(String),
}

/// Dense symmetric matrix stored row-major; just enough linear algebra for
/// Gaussian sampling and moment checks.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix {
    pub dim: usize,
    pub data: Vec<f64>,
}

impl SquareMatrix {
    pub fn zeros(dim: usize) -> Self {
        SquareMatrix {
            dim,
            data: vec![0.0; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, SamplingError> {
        let dim = rows.len();
        for r in rows {
            if r.len() != dim {
                return Err(SamplingError::NotSquare {
                    rows: dim,
                    cols: r.len(),
                });
            }
        }
        Ok(SquareMatrix {
            dim,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, v) in values.iter().enumerate() {
            m.data[i * values.len() + i] = *v;
        }
        m
    }

    /// Constant-diagonal, constant-off-diagonal matrix.
    pub fn uniform(dim: usize, diag: f64, off_diag: f64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m.data[i * dim + j] = if i == j { diag } else { off_diag };
            }
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.dim + j] = v;
    }

    /// `L * L^T` for a lower-triangular factor.
    pub fn llt(&self) -> SquareMatrix {
        let n = self.dim;
        let mut out = SquareMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let mut s = 0.0;
                for k in 0..=i.min(j) {
                    s += self.get(i, k) * self.get(j, k);
                }
                out.set(i, j, s);
            }
        }
        out
    }
}

/// Mean and covariance of the uncertain demand vector.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianSpec {
    pub mean: Vec<f64>,
    pub covariance: SquareMatrix,
}

impl GaussianSpec {
    pub fn new(mean: Vec<f64>, covariance: SquareMatrix) -> Result<Self, SamplingError> {
        let spec = GaussianSpec { mean, covariance };
        spec.check()?;
        Ok(spec)
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    /// Checks dimensions, finiteness, symmetry and factorizability.
    pub fn check(&self) -> Result<(), SamplingError> {
        let n = self.covariance.dim;
        if self.mean.len() != n {
            return Err(SamplingError::DimensionMismatch {
                mean: self.mean.len(),
                dim: n,
            });
        }
        for i in 0..n {
            for j in 0..n {
                let v = self.covariance.get(i, j);
                if !v.is_finite() {
                    return Err(SamplingError::NotFinite { i, j });
                }
                if j > i {
                    let delta = (v - self.covariance.get(j, i)).abs();
                    let scale = 1.0f64.max(v.abs());
                    if delta > SYMMETRY_TOL * scale {
                        return Err(SamplingError::NotSymmetric { i, j, delta });
                    }
                }
            }
        }
        cholesky_factor(&self.covariance).map(|_| ())
    }
}

/// Result of factorizing a covariance, with the jitter that was needed.
#[derive(Debug, Clone)]
pub struct CholeskyFactor {
    /// Lower-triangular factor with `L * L^T` equal to the (jittered) input.
    pub lower: SquareMatrix,
    /// Diagonal shift applied before factorization succeeded; 0 for strictly
    /// positive-definite input.
    pub jitter: f64,
}

/// Lower-triangular Cholesky factorization with a bounded jitter rescue.
///
/// Factorization is attempted on the raw matrix first, then with diagonal
/// shifts growing to `MAX_JITTER` (scaled by the largest diagonal entry).
/// Inputs that remain unfactorizable are rejected as not PSD.
pub fn cholesky_factor(cov: &SquareMatrix) -> Result<CholeskyFactor, SamplingError> {
    let scale = (0..cov.dim)
        .map(|i| cov.get(i, i).abs())
        .fold(0.0f64, f64::max)
        .max(1.0);
    let mut jitter = 0.0;
    loop {
        match try_cholesky(cov, jitter) {
            Ok(lower) => return Ok(CholeskyFactor { lower, jitter }),
            Err(e) => {
                if jitter >= MAX_JITTER * scale {
                    return Err(e);
                }
                jitter = if jitter == 0.0 {
                    MAX_JITTER * scale * 1e-4
                } else {
                    (jitter * 100.0).min(MAX_JITTER * scale)
                };
            }
        }
    }
}

fn try_cholesky(cov: &SquareMatrix, jitter: f64) -> Result<SquareMatrix, SamplingError> {
    let n = cov.dim;
    let mut l = SquareMatrix::zeros(n);
    // Tolerance for treating a tiny negative pivot as a zero pivot (rank
    // deficiency) rather than indefiniteness.
    let scale = (0..n)
        .map(|i| cov.get(i, i).abs())
        .fold(0.0f64, f64::max)
        .max(1.0);
    for j in 0..n {
        let mut d = cov.get(j, j) + jitter;
        for k in 0..j {
            d -= l.get(j, k) * l.get(j, k);
        }
        if d < -1e-14 * scale {
            return Err(SamplingError::NotPsd { index: j, pivot: d });
        }
        let piv = if d <= 0.0 { 0.0 } else { d.sqrt() };
        l.set(j, j, piv);
        for i in (j + 1)..n {
            let mut s = cov.get(i, j);
            for k in 0..j {
                s -= l.get(i, k) * l.get(j, k);
            }
            if piv == 0.0 {
                // Rank-deficient column: off-diagonal mass here means the
                // matrix is indefinite.
                if s.abs() > 1e-9 * scale {
                    return Err(SamplingError::NotPsd { index: j, pivot: d });
                }
                l.set(i, j, 0.0);
            } else {
                l.set(i, j, s / piv);
            }
        }
    }
    Ok(l)
}

/// K realizations of the demand vector, with full provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    /// Row-major K x n_theta matrix.
    data: Vec<f64>,
    n_theta: usize,
    k: usize,
    pub seed: u64,
    pub generator_tag: String,
}

impl SampleSet {
    pub fn from_rows(
        rows: Vec<Vec<f64>>,
        seed: u64,
        generator_tag: &str,
    ) -> Result<Self, SamplingError> {
        if rows.is_empty() {
            return Err(SamplingError::EmptySampleRequest);
        }
        let n_theta = rows[0].len();
        for r in &rows {
            if r.len() != n_theta {
                return Err(SamplingError::Format(
                    "sample rows have inconsistent lengths".into(),
                ));
            }
        }
        Ok(SampleSet {
            k: rows.len(),
            n_theta,
            data: rows.into_iter().flatten().collect(),
            seed,
            generator_tag: generator_tag.to_owned(),
        })
    }

    pub fn len(&self) -> usize {
        self.k
    }

    pub fn is_empty(&self) -> bool {
        self.k == 0
    }

    pub fn n_theta(&self) -> usize {
        self.n_theta
    }

    pub fn row(&self, k: usize) -> &[f64] {
        &self.data[k * self.n_theta..(k + 1) * self.n_theta]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.n_theta)
    }
}

/// SplitMix64 expansion of a 64-bit seed into the 32-byte ChaCha key.
fn expand_seed(seed: u64) -> [u8; 32] {
    let mut state = seed;
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        state = state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^= z >> 31;
        chunk.copy_from_slice(&z.to_le_bytes());
    }
    key
}

/// Standard-normal stream: ChaCha12 64-bit words mapped to 53-bit uniforms,
/// paired through the Box-Muller transform.
struct NormalStream {
    rng: ChaCha12Rng,
    spare: Option<f64>,
}

impl NormalStream {
    fn new(seed: u64) -> Self {
        NormalStream {
            rng: ChaCha12Rng::from_seed(expand_seed(seed)),
            spare: None,
        }
    }

    /// Uniform in [0, 1) with 53 random bits.
    fn uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    fn next(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        // u1 in (0, 1] keeps the logarithm finite.
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        let r = (-2.0 * u1.ln()).sqrt();
        let (s, c) = (2.0 * PI * u2).sin_cos();
        self.spare = Some(r * s);
        r * c
    }
}

/// Draws K samples `mean + L * g` from the pinned standard-normal stream.
///
/// The same `(spec, K, seed)` triple always reproduces the identical bits.
pub fn draw_samples(spec: &GaussianSpec, k: usize, seed: u64) -> Result<SampleSet, SamplingError> {
    if k == 0 {
        return Err(SamplingError::EmptySampleRequest);
    }
    spec.check()?;
    let factor = cholesky_factor(&spec.covariance)?;
    let n = spec.dim();
    let l = &factor.lower;
    let mut stream = NormalStream::new(seed);
    let mut data = Vec::with_capacity(k * n);
    let mut g = vec![0.0; n];
    for _ in 0..k {
        for gi in g.iter_mut() {
            *gi = stream.next();
        }
        for i in 0..n {
            let mut x = spec.mean[i];
            for (j, gj) in g.iter().enumerate().take(i + 1) {
                x += l.get(i, j) * gj;
            }
            data.push(x);
        }
    }
    Ok(SampleSet {
        data,
        n_theta: n,
        k,
        seed,
        generator_tag: GENERATOR_TAG.to_owned(),
    })
}

/// Unbiased sample mean and covariance.
///
/// The covariance needs K >= 2; the mean alone is fine with K = 1.
pub fn empirical_moments(s: &SampleSet) -> Result<(Vec<f64>, SquareMatrix), SamplingError> {
    if s.len() < 2 {
        return Err(SamplingError::TooFewForCovariance(s.len()));
    }
    let (n, k) = (s.n_theta(), s.len());
    let mut mean = vec![0.0; n];
    for row in s.rows() {
        for (m, x) in mean.iter_mut().zip(row) {
            *m += x;
        }
    }
    for m in mean.iter_mut() {
        *m /= k as f64;
    }
    let mut cov = SquareMatrix::zeros(n);
    for row in s.rows() {
        for i in 0..n {
            let di = row[i] - mean[i];
            for j in 0..n {
                cov.data[i * n + j] += di * (row[j] - mean[j]);
            }
        }
    }
    for v in cov.data.iter_mut() {
        *v /= (k - 1) as f64;
    }
    Ok((mean, cov))
}

/// Writes a sample set in the columnar text format:
/// a header `n_theta K seed generator-tag`, then K whitespace-separated rows.
///
/// Values use the shortest decimal that round-trips, so parsing the output
/// restores identical bits.
pub fn write_samples(s: &SampleSet) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{} {} {} {}",
        s.n_theta(),
        s.len(),
        s.seed,
        s.generator_tag
    );
    for row in s.rows() {
        let mut first = true;
        for v in row {
            if !first {
                out.push(' ');
            }
            let _ = write!(out, "{:?}", v);
            first = false;
        }
        out.push('\n');
    }
    out
}

/// Parses the format written by [`write_samples`].
pub fn read_samples(text: &str) -> Result<SampleSet, SamplingError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| SamplingError::Format("empty sample file".into()))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 4 {
        return Err(SamplingError::Format(format!(
            "header must be 'n_theta K seed tag', got {} fields",
            fields.len()
        )));
    }
    let n_theta: usize = fields[0]
        .parse()
        .map_err(|_| SamplingError::Format("bad n_theta in header".into()))?;
    let k: usize = fields[1]
        .parse()
        .map_err(|_| SamplingError::Format("bad K in header".into()))?;
    let seed: u64 = fields[2]
        .parse()
        .map_err(|_| SamplingError::Format("bad seed in header".into()))?;
    let tag = fields[3].to_owned();

    let mut data = Vec::with_capacity(k * n_theta);
    let mut rows = 0;
    for (lineno, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let mut count = 0;
        for tok in line.split_whitespace() {
            let v: f64 = tok.parse().map_err(|_| {
                SamplingError::Format(format!("line {}: bad number '{}'", lineno + 1, tok))
            })?;
            data.push(v);
            count += 1;
        }
        if count != n_theta {
            return Err(SamplingError::Format(format!(
                "line {}: expected {} values, got {}",
                lineno + 1,
                n_theta,
                count
            )));
        }
        rows += 1;
    }
    if rows != k {
        return Err(SamplingError::Format(format!(
            "expected {} sample rows, got {}",
            k, rows
        )));
    }
    Ok(SampleSet {
        data,
        n_theta,
        k,
        seed,
        generator_tag: tag,
    })
}
