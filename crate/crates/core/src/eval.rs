//! Score maps, level-set statistics and convergence curves.

use rayon::prelude::*;

use crate::dataset::Dataset;
use crate::error::{EifError, Result};
use crate::forest::{Scorer, Variant};
use crate::model::{train, Extension, TrainParams};
use crate::rng::derive_seed;
use crate::scalar::Scalar;
use crate::synth::{gen_line_levelset, gen_sphere_levelset, SinusoidParams};

/// Default number of probe points per level set.
pub const DEFAULT_N_PROBE: usize = 500;

/// A rectangular lattice of cell centers.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub nx: usize,
    pub ny: usize,
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        if self.nx < 2 || self.ny < 2 {
            return Err(EifError::invalid("grid needs nx, ny >= 2"));
        }
        let ordered = |a: f64, b: f64| a.is_finite() && b.is_finite() && a < b;
        if !ordered(self.x_min, self.x_max) || !ordered(self.y_min, self.y_max) {
            return Err(EifError::invalid("grid bounds must be finite with min < max"));
        }
        Ok(())
    }

    /// Center of cell `(i, j)`, `i` along x.
    pub fn point(&self, i: usize, j: usize) -> [f64; 2] {
        let dx = (self.x_max - self.x_min) / self.nx as f64;
        let dy = (self.y_max - self.y_min) / self.ny as f64;
        [
            self.x_min + (i as f64 + 0.5) * dx,
            self.y_min + (j as f64 + 0.5) * dy,
        ]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScoreGrid<T> {
    pub spec: GridSpec,
    /// Row-major, x fastest: `values[j * nx + i]`.
    pub values: Vec<T>,
}

impl<T: Scalar> ScoreGrid<T> {
    pub fn get(&self, i: usize, j: usize) -> T {
        self.values[j * self.spec.nx + i]
    }

    /// `(x, y, score)` in storage order.
    pub fn cells(&self) -> impl Iterator<Item = (f64, f64, T)> + '_ {
        let nx = self.spec.nx;
        self.values.iter().enumerate().map(move |(k, &v)| {
            let [x, y] = self.spec.point(k % nx, k / nx);
            (x, y, v)
        })
    }
}

pub fn score_map<T: Scalar>(scorer: &impl Scorer<T>, grid: &GridSpec) -> Result<ScoreGrid<T>> {
    if scorer.dimension() != 2 {
        return Err(EifError::UnsupportedDimension {
            found: scorer.dimension(),
            reason: "score maps are 2-D",
        });
    }
    grid.validate()?;
    let values = (0..grid.nx * grid.ny)
        .into_par_iter()
        .map(|k| {
            let [x, y] = grid.point(k % grid.nx, k / grid.nx);
            scorer.score(&[T::lit(x), T::lit(y)])
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ScoreGrid {
        spec: *grid,
        values,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LevelSetStats {
    /// Radius or offset of the probe family.
    pub level: f64,
    pub mean: f64,
    /// Population variance.
    pub variance: f64,
    pub n_probe: usize,
}

/// Mean and population variance, computed on values shifted by the first
/// element so a constant sample has variance exactly 0.
pub fn mean_variance<T: Scalar>(xs: &[T]) -> (f64, f64) {
    let Some(first) = xs.first() else {
        return (f64::NAN, f64::NAN);
    };
    let shift = first.to_f64_lossless();
    let n = xs.len() as f64;
    let shifted_mean = xs.iter().map(|v| v.to_f64_lossless() - shift).sum::<f64>() / n;
    let var = xs
        .iter()
        .map(|v| (v.to_f64_lossless() - shift - shifted_mean).powi(2))
        .sum::<f64>()
        / n;
    (shift + shifted_mean, var)
}

fn stats_for<T: Scalar>(scorer: &impl Scorer<T>, level: f64, probes: &Dataset<T>) -> Result<LevelSetStats> {
    let scores = scorer.score_batch(probes)?;
    let (mean, variance) = mean_variance(&scores);
    Ok(LevelSetStats {
        level,
        mean,
        variance,
        n_probe: scores.len(),
    })
}

fn check_levels(levels: &[f64], n_probe: usize) -> Result<()> {
    if levels.is_empty() {
        return Err(EifError::invalid("need at least one level"));
    }
    if n_probe < 2 {
        return Err(EifError::invalid("need at least two probe points per level"));
    }
    Ok(())
}

/// Score statistics on spheres of the given radii around the origin. Level `k`
/// draws its probes with a seed derived from `(seed, k)`.
pub fn levelset_stats<T: Scalar>(
    scorer: &impl Scorer<T>,
    radii: &[f64],
    n_probe: usize,
    dim: usize,
    seed: u64,
) -> Result<Vec<LevelSetStats>> {
    check_levels(radii, n_probe)?;
    if dim != scorer.dimension() {
        return Err(EifError::DimensionMismatch {
            expected: scorer.dimension(),
            found: dim,
        });
    }
    radii
        .iter()
        .enumerate()
        .map(|(k, &r)| {
            let probes = gen_sphere_levelset(r, n_probe, dim, derive_seed(seed, k as u64))?;
            stats_for(scorer, r, &probes)
        })
        .collect()
}

/// Score statistics along copies of the sine curve shifted by each offset.
pub fn line_levelset_stats<T: Scalar>(
    scorer: &impl Scorer<T>,
    offsets: &[f64],
    n_probe: usize,
    params: &SinusoidParams,
    seed: u64,
) -> Result<Vec<LevelSetStats>> {
    check_levels(offsets, n_probe)?;
    if scorer.dimension() != 2 {
        return Err(EifError::DimensionMismatch {
            expected: 2,
            found: scorer.dimension(),
        });
    }
    offsets
        .iter()
        .enumerate()
        .map(|(k, &off)| {
            let probes = gen_line_levelset(off, n_probe, params.amplitude, params.x_max, derive_seed(seed, k as u64))?;
            stats_for(scorer, off, &probes)
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConvergencePoint {
    pub t: usize,
    pub mean: f64,
    pub variance: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceSeries {
    pub points: Vec<ConvergencePoint>,
}

impl ConvergenceSeries {
    pub fn t_values(&self) -> Vec<usize> {
        self.points.iter().map(|p| p.t).collect()
    }

    pub fn means(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.mean).collect()
    }
}

/// Probe-score mean and variance for forests of each size in `t_values`. The
/// forest for the `k`-th size is trained independently with a seed derived
/// from `(seed, k)`.
pub fn convergence_curve<T: Scalar>(
    data: &Dataset<T>,
    probes: &Dataset<T>,
    t_values: &[usize],
    psi: Option<usize>,
    extension: Extension,
    variant: Variant,
    seed: u64,
) -> Result<ConvergenceSeries> {
    if t_values.is_empty() || t_values[0] == 0 || t_values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(EifError::invalid("t values must be positive and strictly increasing"));
    }
    if probes.is_empty() {
        return Err(EifError::invalid("need at least one probe point"));
    }
    let points = t_values
        .iter()
        .enumerate()
        .map(|(k, &t)| {
            let params = TrainParams {
                trees: t,
                psi,
                extension,
                variant,
                seed: derive_seed(seed, k as u64),
            };
            let model = train(data, &params)?;
            let scores = model.score_batch(probes)?;
            let (mean, variance) = mean_variance(&scores);
            Ok(ConvergencePoint { t, mean, variance })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ConvergenceSeries { points })
}
