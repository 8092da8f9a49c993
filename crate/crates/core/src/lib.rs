//! Extended Isolation Forest anomaly detection.
//!
//! Trees isolate points with random hyperplane cuts whose normals have
//! `extension_level + 1` free coordinates. Level 0 reproduces the classic
//! axis-parallel isolation forest; level `N - 1` removes the axis bias that
//! produces banded score maps and "ghost" clusters. A rotated-trees variant for
//! 2-D data, synthetic generators, evaluation helpers and a JSON model format
//! are included.
//!
//! Everything is generic over the scalar type ([`Scalar`]: `f32` or `f64`);
//! the aliases below fix it to `f64`, the precision used for model replay.
//!
//! ```
//! use eif_core::{build_forest, synth, Scorer};
//!
//! let data = synth::gen_gaussian_blob(1000, 2, &[0.0, 0.0], 1.0, 7).unwrap();
//! let forest = build_forest(&data, 100, 256, 1, 7).unwrap();
//! assert!(forest.score(&[0.0, 0.0]).unwrap() < forest.score(&[5.0, 5.0]).unwrap());
//! ```

// `!(a <= b)` is used on purpose so NaN fails validation
#![allow(clippy::neg_cmp_op_on_partial_ord)]
pub mod dataset;
pub mod error;
pub mod eval;
pub mod forest;
pub mod io;
pub mod metrics;
pub mod model;
pub mod rng;
pub mod rotation;
pub mod scalar;
pub mod synth;

pub use error::{EifError, Result};
pub use forest::{
    anomaly_score, branch_left, build_forest, build_tree, c_factor, expected_depth, harmonic_estimate,
    height_limit, path_length, sample_hyperplane, score_batch, Scorer, Variant,
};
pub use metrics::{auprc, auroc};
pub use model::{train, Extension, TrainParams};
pub use rng::{make_rng, derive_stream, RngStream};
pub use rotation::{build_rotated_forest, rotate_point, rotated_score};
pub use scalar::Scalar;

pub type Dataset = dataset::Dataset<f64>;
pub type Dataset32 = dataset::Dataset<f32>;
pub type Forest = forest::IsolationForest<f64>;
pub type Forest32 = forest::IsolationForest<f32>;
pub type IsolationTree = forest::IsolationTree<f64>;
pub type Hyperplane = forest::Hyperplane<f64>;
pub type RotatedForest = rotation::RotatedForest<f64>;
pub type RotatedForest32 = rotation::RotatedForest<f32>;
pub type Model = model::Model<f64>;
pub type Model32 = model::Model<f32>;
pub type LabeledScores = metrics::LabeledScores<f64>;
pub type ScoreGrid = eval::ScoreGrid<f64>;
