//! Isolation trees with oblique splits and the ensemble built from them.
//!
//! The extension level controls how many coordinates of each split normal may
//! be nonzero: level 0 gives axis-parallel cuts (the classic isolation forest),
//! level `N - 1` lets every cut take any orientation.

mod normalizer;
mod split;
mod tree;

use rayon::prelude::*;

pub use normalizer::{c_factor, harmonic_estimate, height_limit, score_from_depth, EULER_GAMMA};
pub use split::{branch_left, sample_hyperplane, Hyperplane};
pub use tree::{build_tree, path_length, IsolationTree, Node};

use crate::dataset::{check_point, Dataset};
use crate::error::{EifError, Result};
use crate::rng::{derive_stream, make_rng, subsample};
use crate::scalar::Scalar;

pub const DEFAULT_TREES: usize = 100;
pub const DEFAULT_PSI: usize = 256;

/// Anything that maps a point to an anomaly score through averaged path lengths.
pub trait Scorer<T: Scalar>: Sync {
    fn dimension(&self) -> usize;

    /// `c(psi)`, the depth that maps to a score of exactly 0.5.
    fn normalizer(&self) -> T;

    /// Mean path length over the ensemble.
    fn expected_depth(&self, x: &[T]) -> Result<T>;

    fn score(&self, x: &[T]) -> Result<T> {
        Ok(score_from_depth(self.expected_depth(x)?, self.normalizer()))
    }

    /// Scores every row, preserving order. Parallel over rows; each score is
    /// computed exactly as by [`Scorer::score`].
    fn score_batch(&self, data: &Dataset<T>) -> Result<Vec<T>> {
        if data.dim() != self.dimension() {
            return Err(EifError::DimensionMismatch {
                expected: self.dimension(),
                found: data.dim(),
            });
        }
        data.values()
            .par_chunks_exact(data.dim())
            .map(|row| self.score(row))
            .collect()
    }
}

/// Which tree family a trained model belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    /// Hyperplane splits at some extension level (level 0 is the standard forest).
    Extended,
    /// Per-tree rotated sub-samples with axis-parallel splits, 2-D only.
    Rotated,
}

impl Variant {
    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Extended => "extended",
            Variant::Rotated => "rotated",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IsolationForest<T> {
    trees: Vec<IsolationTree<T>>,
    psi: usize,
    dimension: usize,
    extension_level: usize,
    normalizer: T,
    seed: u64,
}

pub(crate) fn check_forest_args(n_rows: usize, dim: usize, t: usize, psi: usize) -> Result<()> {
    if t == 0 {
        return Err(EifError::invalid("number of trees must be at least 1"));
    }
    if n_rows < 2 {
        return Err(EifError::InsufficientData {
            requested: 2,
            available: n_rows,
        });
    }
    if psi < 2 {
        return Err(EifError::invalid(format!("sub-sample size {psi} must be at least 2")));
    }
    if psi > n_rows {
        return Err(EifError::InsufficientData {
            requested: psi,
            available: n_rows,
        });
    }
    if dim == 0 {
        return Err(EifError::invalid("dimension must be at least 1"));
    }
    Ok(())
}

/// Trains `t` trees, each on its own `psi`-row sub-sample.
///
/// Tree `i` draws its sub-sample and then all of its splits from stream `i`
/// derived from `seed`, so trees are built in parallel and the result does not
/// depend on scheduling.
pub fn build_forest<T: Scalar>(
    data: &Dataset<T>,
    t: usize,
    psi: usize,
    extension_level: usize,
    seed: u64,
) -> Result<IsolationForest<T>> {
    check_forest_args(data.len(), data.dim(), t, psi)?;
    split::check_extension_level(extension_level, data.dim())?;
    let limit = height_limit(psi);
    let root = make_rng(seed);
    let trees = (0..t)
        .into_par_iter()
        .map(|i| grow_forest_tree(data, psi, limit, extension_level, &root, i))
        .collect::<Result<Vec<_>>>()?;
    Ok(IsolationForest {
        trees,
        psi,
        dimension: data.dim(),
        extension_level,
        normalizer: c_factor(psi),
        seed,
    })
}

/// Tree number `index` of a forest rooted at `root`, built in isolation.
pub fn grow_forest_tree<T: Scalar>(
    data: &Dataset<T>,
    psi: usize,
    height_limit: usize,
    extension_level: usize,
    root: &crate::rng::RngStream,
    index: usize,
) -> Result<IsolationTree<T>> {
    let mut rng = derive_stream(root, index as u64);
    let sample = subsample(&mut rng, data, psi)?;
    build_tree(&sample, height_limit, extension_level, &mut rng)
}

impl<T: Scalar> IsolationForest<T> {
    /// Assembles a forest from already-validated parts.
    pub(crate) fn from_parts(
        trees: Vec<IsolationTree<T>>,
        psi: usize,
        dimension: usize,
        extension_level: usize,
        seed: u64,
    ) -> Self {
        Self {
            trees,
            psi,
            dimension,
            extension_level,
            normalizer: c_factor(psi),
            seed,
        }
    }

    pub fn trees(&self) -> &[IsolationTree<T>] {
        &self.trees
    }

    pub fn psi(&self) -> usize {
        self.psi
    }

    pub fn extension_level(&self) -> usize {
        self.extension_level
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn height_limit(&self) -> usize {
        height_limit(self.psi)
    }
}

impl<T: Scalar> Scorer<T> for IsolationForest<T> {
    fn dimension(&self) -> usize {
        self.dimension
    }

    fn normalizer(&self) -> T {
        self.normalizer
    }

    fn expected_depth(&self, x: &[T]) -> Result<T> {
        check_point(x, self.dimension)?;
        let total = self
            .trees
            .iter()
            .fold(T::zero(), |acc, tree| acc + tree.path_length_unchecked(x));
        Ok(total / T::from_count(self.trees.len()))
    }
}

pub fn expected_depth<T: Scalar>(x: &[T], forest: &impl Scorer<T>) -> Result<T> {
    forest.expected_depth(x)
}

pub fn anomaly_score<T: Scalar>(x: &[T], forest: &impl Scorer<T>) -> Result<T> {
    forest.score(x)
}

pub fn score_batch<T: Scalar>(data: &Dataset<T>, forest: &impl Scorer<T>) -> Result<Vec<T>> {
    forest.score_batch(data)
}
