//! Synthetic training sets and probe families.
//!
//! Every generator is a pure function of its parameters and seed. Draws are
//! made in `f64` and narrowed to the requested scalar type.

use std::f64::consts::PI;

use crate::dataset::Dataset;
use crate::error::{EifError, Result};
use crate::rng::{make_rng, RngStream};
use crate::scalar::Scalar;

/// Cluster centers of the two-blob set.
pub const DOUBLE_BLOB_CENTERS: [[f64; 2]; 2] = [[0.0, 10.0], [10.0, 0.0]];

/// Shape of the noisy sine curve `y = amplitude · sin(x)`, `x ∈ [0, x_max]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SinusoidParams {
    pub amplitude: f64,
    pub x_max: f64,
    pub noise_sigma: f64,
}

impl Default for SinusoidParams {
    fn default() -> Self {
        Self {
            amplitude: 5.0,
            x_max: 4.0 * PI,
            noise_sigma: 0.5,
        }
    }
}

impl SinusoidParams {
    fn validate(&self) -> Result<()> {
        if !(self.amplitude > 0.0) || !(self.x_max > 0.0) || !(self.noise_sigma >= 0.0) {
            return Err(EifError::invalid(format!("invalid sinusoid parameters {self:?}")));
        }
        Ok(())
    }
}

fn check_count(n: usize) -> Result<()> {
    if n == 0 {
        return Err(EifError::invalid("sample count must be at least 1"));
    }
    Ok(())
}

fn finish<T: Scalar>(dim: usize, values: Vec<f64>) -> Result<Dataset<T>> {
    Dataset::new(dim, values.into_iter().map(T::lit).collect())
}

fn push_blob(rng: &mut RngStream, n: usize, mean: &[f64], sigma: f64, out: &mut Vec<f64>) {
    for _ in 0..n {
        for &m in mean {
            out.push(m + sigma * rng.standard_normal());
        }
    }
}

/// `n` i.i.d. points with coordinate `d ~ N(mean[d], sigma²)`.
pub fn gen_gaussian_blob<T: Scalar>(n: usize, dim: usize, mean: &[T], sigma: T, seed: u64) -> Result<Dataset<T>> {
    check_count(n)?;
    if dim == 0 || mean.len() != dim {
        return Err(EifError::DimensionMismatch {
            expected: dim,
            found: mean.len(),
        });
    }
    let sigma = sigma.to_f64_lossless();
    if !(sigma > 0.0) {
        return Err(EifError::invalid(format!("sigma must be positive, got {sigma}")));
    }
    let mean: Vec<f64> = mean.iter().map(|m| m.to_f64_lossless()).collect();
    let mut rng = make_rng(seed);
    let mut values = Vec::with_capacity(n * dim);
    push_blob(&mut rng, n, &mean, sigma, &mut values);
    finish(dim, values)
}

/// Two unit-variance clusters around `(0, 10)` and `(10, 0)`, first cluster first.
pub fn gen_double_blob<T: Scalar>(n_per_blob: usize, seed: u64) -> Result<Dataset<T>> {
    check_count(n_per_blob)?;
    let mut rng = make_rng(seed);
    let mut values = Vec::with_capacity(4 * n_per_blob);
    for center in DOUBLE_BLOB_CENTERS {
        push_blob(&mut rng, n_per_blob, &center, 1.0, &mut values);
    }
    finish(2, values)
}

pub fn gen_sinusoid<T: Scalar>(n: usize, params: &SinusoidParams, seed: u64) -> Result<Dataset<T>> {
    check_count(n)?;
    params.validate()?;
    let mut rng = make_rng(seed);
    let mut values = Vec::with_capacity(2 * n);
    for _ in 0..n {
        let x = rng.uniform(0.0, params.x_max)?;
        let noise = rng.standard_normal();
        values.push(x);
        values.push(params.amplitude * x.sin() + params.noise_sigma * noise);
    }
    finish(2, values)
}

/// `n` points uniform on the sphere of the given radius around the origin.
pub fn gen_sphere_levelset<T: Scalar>(radius: f64, n: usize, dim: usize, seed: u64) -> Result<Dataset<T>> {
    check_count(n)?;
    if dim < 2 {
        return Err(EifError::invalid(format!("sphere probes need dim >= 2, got {dim}")));
    }
    if !(radius >= 0.0) || !radius.is_finite() {
        return Err(EifError::invalid(format!("radius must be finite and >= 0, got {radius}")));
    }
    let mut rng = make_rng(seed);
    let mut values = Vec::with_capacity(n * dim);
    let mut z = vec![0.0; dim];
    for _ in 0..n {
        let norm = loop {
            for v in z.iter_mut() {
                *v = rng.standard_normal();
            }
            let norm = z.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm > 0.0 {
                break norm;
            }
        };
        values.extend(z.iter().map(|v| v / norm * radius));
    }
    finish(dim, values)
}

/// Noise-free points on the sine curve shifted vertically by `offset`.
pub fn gen_line_levelset<T: Scalar>(offset: f64, n: usize, amplitude: f64, x_max: f64, seed: u64) -> Result<Dataset<T>> {
    check_count(n)?;
    if !(x_max > 0.0) || !amplitude.is_finite() || !offset.is_finite() {
        return Err(EifError::invalid("invalid line level-set parameters"));
    }
    let mut rng = make_rng(seed);
    let mut values = Vec::with_capacity(2 * n);
    for _ in 0..n {
        let x = rng.uniform(0.0, x_max)?;
        values.push(x);
        values.push(amplitude * x.sin() + offset);
    }
    finish(2, values)
}

fn check_box<T: Scalar>(lo: &[T], hi: &[T]) -> Result<()> {
    if lo.is_empty() || lo.len() != hi.len() {
        return Err(EifError::invalid("box corners must have equal nonzero dimension"));
    }
    if lo.iter().zip(hi).any(|(l, h)| !(l < h) || !l.is_finite() || !h.is_finite()) {
        return Err(EifError::invalid("box needs lo < hi in every coordinate"));
    }
    Ok(())
}

fn draw_in_box(rng: &mut RngStream, lo: &[f64], hi: &[f64], out: &mut [f64]) {
    for ((o, &l), &h) in out.iter_mut().zip(lo).zip(hi) {
        *o = rng.uniform(l, h).expect("validated box");
    }
}

pub fn gen_anomalies_uniform_box<T: Scalar>(n: usize, lo: &[T], hi: &[T], seed: u64) -> Result<Dataset<T>> {
    gen_anomalies_excluding(n, lo, hi, &Exclusion::None, seed)
}

/// Uniform over the annulus `inner <= |x| <= outer` in 2-D.
pub fn gen_ring<T: Scalar>(n: usize, inner: f64, outer: f64, seed: u64) -> Result<Dataset<T>> {
    check_count(n)?;
    if !(inner >= 0.0 && inner < outer && outer.is_finite()) {
        return Err(EifError::invalid(format!("ring needs 0 <= inner < outer, got {inner}, {outer}")));
    }
    let mut rng = make_rng(seed);
    let mut values = Vec::with_capacity(2 * n);
    for _ in 0..n {
        let r = rng.uniform(inner * inner, outer * outer)?.sqrt();
        let theta = rng.uniform(0.0, 2.0 * PI)?;
        values.push(r * theta.cos());
        values.push(r * theta.sin());
    }
    finish(2, values)
}

/// Region that injected anomalies must stay out of.
#[derive(Clone, Debug, PartialEq)]
pub enum Exclusion {
    None,
    /// Balls of the given radius around each center.
    Balls { centers: Vec<Vec<f64>>, radius: f64 },
    /// Vertical band `|y - amplitude · sin(x)| < half_width` around a sine curve.
    SineBand { amplitude: f64, half_width: f64 },
}

impl Exclusion {
    pub fn excludes(&self, x: &[f64]) -> bool {
        match self {
            Exclusion::None => false,
            Exclusion::Balls { centers, radius } => centers.iter().any(|c| {
                let d2: f64 = c.iter().zip(x).map(|(a, b)| (a - b) * (a - b)).sum();
                d2 < radius * radius
            }),
            Exclusion::SineBand {
                amplitude,
                half_width,
            } => (x[1] - amplitude * x[0].sin()).abs() < *half_width,
        }
    }
}

const MAX_REJECTIONS_PER_POINT: usize = 10_000;

/// Uniform points in the box `[lo, hi]`, rejecting any that fall in `exclude`.
pub fn gen_anomalies_excluding<T: Scalar>(
    n: usize,
    lo: &[T],
    hi: &[T],
    exclude: &Exclusion,
    seed: u64,
) -> Result<Dataset<T>> {
    check_count(n)?;
    check_box(lo, hi)?;
    let lo: Vec<f64> = lo.iter().map(|v| v.to_f64_lossless()).collect();
    let hi: Vec<f64> = hi.iter().map(|v| v.to_f64_lossless()).collect();
    let dim = lo.len();
    let mut rng = make_rng(seed);
    let mut values = Vec::with_capacity(n * dim);
    let mut x = vec![0.0; dim];
    for _ in 0..n {
        let mut tries = 0;
        loop {
            draw_in_box(&mut rng, &lo, &hi, &mut x);
            if !exclude.excludes(&x) {
                break;
            }
            tries += 1;
            if tries >= MAX_REJECTIONS_PER_POINT {
                return Err(EifError::invalid("exclusion region covers (almost) the whole box"));
            }
        }
        values.extend_from_slice(&x);
    }
    finish(dim, values)
}

/// Bounding box of `data` scaled about its center by `factor`.
pub fn expanded_bounds<T: Scalar>(data: &Dataset<T>, factor: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let (lo, hi) = data
        .bounds()
        .ok_or_else(|| EifError::invalid("cannot bound an empty dataset"))?;
    let mut out_lo = Vec::with_capacity(lo.len());
    let mut out_hi = Vec::with_capacity(hi.len());
    for (l, h) in lo.iter().zip(&hi) {
        let (l, h) = (l.to_f64_lossless(), h.to_f64_lossless());
        let mid = 0.5 * (l + h);
        let half = (0.5 * (h - l) * factor).max(f64::EPSILON);
        out_lo.push(mid - half);
        out_hi.push(mid + half);
    }
    Ok((out_lo, out_hi))
}

/// Benchmark-task anomalies: uniform over the training box expanded 1.5 times,
/// minus the `exclude` region.
pub fn inject_anomalies<T: Scalar>(
    n: usize,
    training: &Dataset<T>,
    exclude: &Exclusion,
    seed: u64,
) -> Result<Dataset<T>> {
    let (lo, hi) = expanded_bounds(training, 1.5)?;
    let lo: Vec<T> = lo.into_iter().map(T::lit).collect();
    let hi: Vec<T> = hi.into_iter().map(T::lit).collect();
    gen_anomalies_excluding(n, &lo, &hi, exclude, seed)
}

/// A synthetic data family and its parameters.
#[derive(Clone, Debug, PartialEq)]
pub enum Generator {
    Blob { n: usize, dim: usize, mean: Vec<f64>, sigma: f64 },
    DoubleBlob { n_per_blob: usize },
    Sinusoid { n: usize, params: SinusoidParams },
    SphereLevelSet { radius: f64, n: usize, dim: usize },
    LineLevelSet { offset: f64, n: usize, amplitude: f64, x_max: f64 },
    UniformBox { n: usize, lo: Vec<f64>, hi: Vec<f64> },
    Ring { n: usize, inner: f64, outer: f64 },
}

impl Generator {
    pub fn generate<T: Scalar>(&self, seed: u64) -> Result<Dataset<T>> {
        let cast = |v: &[f64]| v.iter().copied().map(T::lit).collect::<Vec<T>>();
        match self {
            Generator::Blob { n, dim, mean, sigma } => gen_gaussian_blob(*n, *dim, &cast(mean), T::lit(*sigma), seed),
            Generator::DoubleBlob { n_per_blob } => gen_double_blob(*n_per_blob, seed),
            Generator::Sinusoid { n, params } => gen_sinusoid(*n, params, seed),
            Generator::SphereLevelSet { radius, n, dim } => gen_sphere_levelset(*radius, *n, *dim, seed),
            Generator::LineLevelSet {
                offset,
                n,
                amplitude,
                x_max,
            } => gen_line_levelset(*offset, *n, *amplitude, *x_max, seed),
            Generator::UniformBox { n, lo, hi } => gen_anomalies_uniform_box(*n, &cast(lo), &cast(hi), seed),
            Generator::Ring { n, inner, outer } => gen_ring(*n, *inner, *outer, seed),
        }
    }

    /// Region injected anomalies should avoid for this family, if it has one.
    pub fn anomaly_exclusion(&self) -> Exclusion {
        match self {
            Generator::Blob { mean, sigma, .. } => Exclusion::Balls {
                centers: vec![mean.clone()],
                radius: 3.0 * sigma,
            },
            Generator::DoubleBlob { .. } => Exclusion::Balls {
                centers: DOUBLE_BLOB_CENTERS.iter().map(|c| c.to_vec()).collect(),
                radius: 3.0,
            },
            Generator::Sinusoid { params, .. } => Exclusion::SineBand {
                amplitude: params.amplitude,
                half_width: 3.0 * params.noise_sigma,
            },
            _ => Exclusion::None,
        }
    }
}
