//! A trained scorer of either variant, plus the training entry point the
//! command line and evaluation harness share.

use crate::dataset::Dataset;
use crate::error::{EifError, Result};
use crate::forest::{build_forest, IsolationForest, Scorer, Variant, DEFAULT_PSI, DEFAULT_TREES};
use crate::rng::DEFAULT_SEED;
use crate::rotation::{build_rotated_forest, RotatedForest};
use crate::scalar::Scalar;

/// Extension level as requested by a user, before the data dimension is known.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Extension {
    /// `N - 1`, every normal coordinate free.
    Full,
    Level(usize),
}

impl Extension {
    pub fn resolve(self, dim: usize) -> Result<usize> {
        if dim == 0 {
            return Err(EifError::invalid("dimension must be at least 1"));
        }
        match self {
            Extension::Full => Ok(dim - 1),
            Extension::Level(l) if l < dim => Ok(l),
            Extension::Level(l) => Err(EifError::invalid(format!(
                "extension level {l} out of range [0, {}] for {dim}-D data",
                dim - 1
            ))),
        }
    }
}

impl std::str::FromStr for Extension {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("full") {
            return Ok(Extension::Full);
        }
        s.parse::<usize>()
            .map(Extension::Level)
            .map_err(|_| format!("expected a non-negative integer or `full`, got `{s}`"))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrainParams {
    pub trees: usize,
    /// `None` means `min(256, rows)`.
    pub psi: Option<usize>,
    pub extension: Extension,
    pub variant: Variant,
    pub seed: u64,
}

impl Default for TrainParams {
    fn default() -> Self {
        Self {
            trees: DEFAULT_TREES,
            psi: None,
            extension: Extension::Full,
            variant: Variant::Extended,
            seed: DEFAULT_SEED,
        }
    }
}

impl TrainParams {
    pub fn resolve_psi(&self, rows: usize) -> usize {
        self.psi.unwrap_or(DEFAULT_PSI.min(rows))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Model<T> {
    Extended(IsolationForest<T>),
    Rotated(RotatedForest<T>),
}

pub fn train<T: Scalar>(data: &Dataset<T>, params: &TrainParams) -> Result<Model<T>> {
    let psi = params.resolve_psi(data.len());
    match params.variant {
        Variant::Extended => {
            let level = params.extension.resolve(data.dim())?;
            build_forest(data, params.trees, psi, level, params.seed).map(Model::Extended)
        }
        Variant::Rotated => {
            if let Extension::Level(l) = params.extension {
                if l != 0 {
                    return Err(EifError::invalid("rotated trees always split at extension level 0"));
                }
            }
            build_rotated_forest(data, params.trees, psi, params.seed).map(Model::Rotated)
        }
    }
}

impl<T: Scalar> Model<T> {
    pub fn variant(&self) -> Variant {
        match self {
            Model::Extended(_) => Variant::Extended,
            Model::Rotated(_) => Variant::Rotated,
        }
    }

    pub fn tree_count(&self) -> usize {
        match self {
            Model::Extended(f) => f.trees().len(),
            Model::Rotated(f) => f.trees().len(),
        }
    }
}

impl<T: Scalar> Scorer<T> for Model<T> {
    fn dimension(&self) -> usize {
        match self {
            Model::Extended(f) => f.dimension(),
            Model::Rotated(f) => f.dimension(),
        }
    }

    fn normalizer(&self) -> T {
        match self {
            Model::Extended(f) => f.normalizer(),
            Model::Rotated(f) => f.normalizer(),
        }
    }

    fn expected_depth(&self, x: &[T]) -> Result<T> {
        match self {
            Model::Extended(f) => f.expected_depth(x),
            Model::Rotated(f) => f.expected_depth(x),
        }
    }
}

impl<T> From<IsolationForest<T>> for Model<T> {
    fn from(f: IsolationForest<T>) -> Self {
        Model::Extended(f)
    }
}

impl<T> From<RotatedForest<T>> for Model<T> {
    fn from(f: RotatedForest<T>) -> Self {
        Model::Rotated(f)
    }
}
