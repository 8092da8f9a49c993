//! Rotated-trees baseline for 2-D data: each tree is a standard axis-parallel
//! isolation tree grown on a sub-sample rotated about the origin by its own
//! random angle. Scoring applies the same rotation before descending the tree.

use rayon::prelude::*;

use crate::dataset::{check_point, Dataset};
use crate::error::{EifError, Result};
use crate::forest::{build_tree, c_factor, check_forest_args, height_limit, IsolationTree, Scorer};
use crate::rng::{derive_stream, make_rng, subsample, RngStream};
use crate::scalar::Scalar;

/// Child index (of each tree's stream) that supplies the tree's angle. Kept off
/// the main tree stream so split draws match an unrotated forest exactly.
const ANGLE_STREAM: u64 = 1;

#[derive(Clone, Debug, PartialEq)]
pub struct RotatedTree<T> {
    pub tree: IsolationTree<T>,
    pub angle: T,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RotatedForest<T> {
    trees: Vec<RotatedTree<T>>,
    psi: usize,
    normalizer: T,
    seed: u64,
}

fn require_2d(dim: usize) -> Result<()> {
    if dim != 2 {
        return Err(EifError::UnsupportedDimension {
            found: dim,
            reason: "rotated trees are defined for 2-D data only",
        });
    }
    Ok(())
}

/// `(x cos θ - y sin θ, x sin θ + y cos θ)`.
pub fn rotate_point<T: Scalar>(x: &[T], angle: T) -> Result<[T; 2]> {
    require_2d(x.len())?;
    Ok(rotate(x, angle))
}

#[inline]
fn rotate<T: Scalar>(x: &[T], angle: T) -> [T; 2] {
    let (s, c) = angle.sin_cos();
    [x[0] * c - x[1] * s, x[0] * s + x[1] * c]
}

fn rotate_dataset<T: Scalar>(data: &Dataset<T>, angle: T) -> Dataset<T> {
    let values = data.rows().flat_map(|r| rotate(r, angle)).collect();
    Dataset::new(2, values).expect("rotation keeps finite coordinates finite")
}

/// Angle for the tree whose stream is `tree_rng`, uniform in `[0, 2π)`.
pub fn tree_angle<T: Scalar>(tree_rng: &RngStream) -> T {
    let mut rng = derive_stream(tree_rng, ANGLE_STREAM);
    let tau = std::f64::consts::TAU;
    let a = rng.uniform(0.0, tau).expect("ordered range");
    let a = T::lit(a);
    if a >= T::TAU() {
        T::zero()
    } else {
        a
    }
}

pub fn build_rotated_forest<T: Scalar>(
    data: &Dataset<T>,
    t: usize,
    psi: usize,
    seed: u64,
) -> Result<RotatedForest<T>> {
    require_2d(data.dim())?;
    check_forest_args(data.len(), data.dim(), t, psi)?;
    let root = make_rng(seed);
    let angles: Vec<T> = (0..t)
        .map(|i| tree_angle(&derive_stream(&root, i as u64)))
        .collect();
    build_rotated_forest_with_angles(data, psi, seed, &angles)
}

/// Same as [`build_rotated_forest`] but with caller-chosen per-tree angles;
/// `angles.len()` is the number of trees.
pub fn build_rotated_forest_with_angles<T: Scalar>(
    data: &Dataset<T>,
    psi: usize,
    seed: u64,
    angles: &[T],
) -> Result<RotatedForest<T>> {
    require_2d(data.dim())?;
    check_forest_args(data.len(), data.dim(), angles.len(), psi)?;
    if let Some(a) = angles.iter().find(|a| !a.is_finite()) {
        return Err(EifError::invalid(format!("non-finite rotation angle {a}")));
    }
    let limit = height_limit(psi);
    let root = make_rng(seed);
    let trees = angles
        .par_iter()
        .enumerate()
        .map(|(i, &angle)| {
            let mut rng = derive_stream(&root, i as u64);
            let sample = subsample(&mut rng, data, psi)?;
            let rotated = rotate_dataset(&sample, angle);
            let tree = build_tree(&rotated, limit, 0, &mut rng)?;
            Ok(RotatedTree { tree, angle })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RotatedForest {
        trees,
        psi,
        normalizer: c_factor(psi),
        seed,
    })
}

impl<T: Scalar> RotatedForest<T> {
    pub(crate) fn from_parts(trees: Vec<RotatedTree<T>>, psi: usize, seed: u64) -> Self {
        Self {
            trees,
            psi,
            normalizer: c_factor(psi),
            seed,
        }
    }

    pub fn trees(&self) -> &[RotatedTree<T>] {
        &self.trees
    }

    pub fn psi(&self) -> usize {
        self.psi
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

impl<T: Scalar> Scorer<T> for RotatedForest<T> {
    fn dimension(&self) -> usize {
        2
    }

    fn normalizer(&self) -> T {
        self.normalizer
    }

    fn expected_depth(&self, x: &[T]) -> Result<T> {
        check_point(x, 2)?;
        let total = self.trees.iter().fold(T::zero(), |acc, rt| {
            acc + rt.tree.path_length_unchecked(&rotate(x, rt.angle))
        });
        Ok(total / T::from_count(self.trees.len()))
    }
}

pub fn rotated_score<T: Scalar>(x: &[T], forest: &RotatedForest<T>) -> Result<T> {
    forest.score(x)
}
