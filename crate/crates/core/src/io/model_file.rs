use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{EifError, Result};
use crate::forest::{height_limit, Hyperplane, IsolationForest, IsolationTree, Node, Variant};
use crate::model::Model;
use crate::rng::RNG_FAMILY;
use crate::rotation::{RotatedForest, RotatedTree};
use crate::scalar::Scalar;

pub const FORMAT_MAGIC: &str = "eif-model";
pub const FORMAT_VERSION: u64 = 1;

#[derive(Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
struct ModelDocument<T> {
    format: String,
    version: u64,
    scalar: String,
    variant: String,
    dimension: usize,
    t: usize,
    psi: usize,
    extension_level: usize,
    seed: u64,
    rng_family: String,
    trees: Vec<TreeDocument<T>>,
}

#[derive(Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
struct TreeDocument<T> {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    angle: Option<T>,
    nodes: Vec<NodeDocument<T>>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", bound = "T: Scalar")]
enum NodeDocument<T> {
    Internal {
        normal: Vec<T>,
        intercept: Vec<T>,
        left_index: usize,
        right_index: usize,
    },
    External {
        size: usize,
    },
}

fn tree_document<T: Scalar>(tree: &IsolationTree<T>, angle: Option<T>) -> TreeDocument<T> {
    let nodes = tree
        .nodes()
        .iter()
        .map(|n| match n {
            Node::Internal { split, left, right } => NodeDocument::Internal {
                normal: split.normal.clone(),
                intercept: split.intercept.clone(),
                left_index: *left,
                right_index: *right,
            },
            Node::External { size } => NodeDocument::External { size: *size },
        })
        .collect();
    TreeDocument { angle, nodes }
}

fn document<T: Scalar>(model: &Model<T>) -> ModelDocument<T> {
    let (dimension, psi, extension_level, seed, trees) = match model {
        Model::Extended(f) => (
            crate::forest::Scorer::dimension(f),
            f.psi(),
            f.extension_level(),
            f.seed(),
            f.trees().iter().map(|t| tree_document(t, None)).collect::<Vec<_>>(),
        ),
        Model::Rotated(f) => (
            2,
            f.psi(),
            0,
            f.seed(),
            f.trees()
                .iter()
                .map(|rt| tree_document(&rt.tree, Some(rt.angle)))
                .collect(),
        ),
    };
    ModelDocument {
        format: FORMAT_MAGIC.to_string(),
        version: FORMAT_VERSION,
        scalar: T::NAME.to_string(),
        variant: model.variant().as_str().to_string(),
        dimension,
        t: trees.len(),
        psi,
        extension_level,
        seed,
        rng_family: RNG_FAMILY.to_string(),
        trees,
    }
}

pub fn model_to_string<T: Scalar>(model: &Model<T>) -> String {
    serde_json::to_string(&document(model)).expect("model documents always serialize")
}

pub fn save_forest<T: Scalar>(model: &Model<T>, path: impl AsRef<Path>) -> Result<()> {
    let doc = document(model);
    super::write_atomic(path.as_ref(), |w| {
        serde_json::to_writer(&mut *w, &doc).map_err(std::io::Error::other)?;
        w.write_all(b"\n")
    })
}

pub fn load_forest<T: Scalar>(path: impl AsRef<Path>) -> Result<Model<T>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| EifError::io(path, e))?;
    model_from_str(&text)
}

fn corrupt(msg: impl Into<String>) -> EifError {
    EifError::CorruptModel(msg.into())
}

pub fn model_from_str<T: Scalar>(text: &str) -> Result<Model<T>> {
    let value: Value = serde_json::from_str(text).map_err(|e| corrupt(format!("not a JSON document: {e}")))?;
    match value.get("format").and_then(Value::as_str) {
        Some(FORMAT_MAGIC) => {}
        other => return Err(corrupt(format!("format tag is {other:?}, expected \"{FORMAT_MAGIC}\""))),
    }
    let version = value
        .get("version")
        .and_then(Value::as_u64)
        .ok_or_else(|| corrupt("missing or non-integer version"))?;
    if version != FORMAT_VERSION {
        return Err(EifError::UnsupportedVersion {
            found: version,
            supported: FORMAT_VERSION,
        });
    }
    if let Some(scalar) = value.get("scalar").and_then(Value::as_str) {
        if scalar != T::NAME {
            return Err(EifError::Schema(format!(
                "model stores {scalar} values but was loaded as {}",
                T::NAME
            )));
        }
    }
    let doc: ModelDocument<T> =
        serde_json::from_value(value).map_err(|e| corrupt(format!("malformed model document: {e}")))?;
    from_document(doc)
}

fn from_document<T: Scalar>(doc: ModelDocument<T>) -> Result<Model<T>> {
    let variant = match doc.variant.as_str() {
        "extended" => Variant::Extended,
        "rotated" => Variant::Rotated,
        other => return Err(corrupt(format!("unknown variant {other:?}"))),
    };
    if doc.dimension == 0 {
        return Err(corrupt("dimension is 0"));
    }
    if doc.t == 0 || doc.t != doc.trees.len() {
        return Err(corrupt(format!("t = {} but {} trees stored", doc.t, doc.trees.len())));
    }
    if doc.psi < 2 {
        return Err(corrupt(format!("psi = {} is below 2", doc.psi)));
    }
    if doc.extension_level >= doc.dimension {
        return Err(corrupt(format!(
            "extension level {} out of range for dimension {}",
            doc.extension_level, doc.dimension
        )));
    }
    if variant == Variant::Rotated && (doc.dimension != 2 || doc.extension_level != 0) {
        return Err(corrupt("rotated models must be 2-D with extension level 0"));
    }
    let limit = height_limit(doc.psi);
    let mut trees = Vec::with_capacity(doc.trees.len());
    let mut angles = Vec::with_capacity(doc.trees.len());
    for (ti, tdoc) in doc.trees.into_iter().enumerate() {
        match (variant, tdoc.angle) {
            (Variant::Rotated, Some(a)) if a.is_finite() && a >= T::zero() && a < T::TAU() => angles.push(a),
            (Variant::Rotated, a) => return Err(corrupt(format!("tree {ti}: invalid or missing angle {a:?}"))),
            (Variant::Extended, Some(_)) => return Err(corrupt(format!("tree {ti}: angle on an extended model"))),
            (Variant::Extended, None) => {}
        }
        let nodes = convert_nodes(tdoc.nodes, doc.dimension)
            .map_err(|m| corrupt(format!("tree {ti}: {m}")))?;
        let tree = IsolationTree::from_nodes(nodes, limit, doc.psi);
        validate_tree(&tree, doc.extension_level, limit, doc.psi).map_err(|m| corrupt(format!("tree {ti}: {m}")))?;
        trees.push(tree);
    }
    Ok(match variant {
        Variant::Extended => Model::Extended(IsolationForest::from_parts(
            trees,
            doc.psi,
            doc.dimension,
            doc.extension_level,
            doc.seed,
        )),
        Variant::Rotated => Model::Rotated(RotatedForest::from_parts(
            trees
                .into_iter()
                .zip(angles)
                .map(|(tree, angle)| RotatedTree { tree, angle })
                .collect(),
            doc.psi,
            doc.seed,
        )),
    })
}

fn convert_nodes<T: Scalar>(docs: Vec<NodeDocument<T>>, dim: usize) -> std::result::Result<Vec<Node<T>>, String> {
    if docs.is_empty() {
        return Err("no nodes".into());
    }
    let n = docs.len();
    docs.into_iter()
        .enumerate()
        .map(|(i, d)| match d {
            NodeDocument::External { size } => Ok(Node::External { size }),
            NodeDocument::Internal {
                normal,
                intercept,
                left_index,
                right_index,
            } => {
                if normal.len() != dim || intercept.len() != dim {
                    return Err(format!("node {i}: vectors must have length {dim}"));
                }
                if left_index >= n || right_index >= n {
                    return Err(format!("node {i}: child index out of range (have {n} nodes)"));
                }
                if left_index <= i || right_index <= i || left_index == right_index {
                    return Err(format!("node {i}: children must follow their parent in the array"));
                }
                let split = Hyperplane::new(normal, intercept).map_err(|e| format!("node {i}: {e}"))?;
                Ok(Node::Internal {
                    split,
                    left: left_index,
                    right: right_index,
                })
            }
        })
        .collect()
}

fn validate_tree<T: Scalar>(
    tree: &IsolationTree<T>,
    extension_level: usize,
    limit: usize,
    psi: usize,
) -> std::result::Result<(), String> {
    let nodes = tree.nodes();
    let mut parents = vec![0usize; nodes.len()];
    let (mut internal, mut external, mut mass) = (0usize, 0usize, 0usize);
    for (i, node) in nodes.iter().enumerate() {
        match node {
            Node::Internal { split, left, right } => {
                internal += 1;
                parents[*left] += 1;
                parents[*right] += 1;
                if split.nonzero_count() != extension_level + 1 {
                    return Err(format!(
                        "node {i}: {} nonzero normal coordinates, expected {}",
                        split.nonzero_count(),
                        extension_level + 1
                    ));
                }
            }
            Node::External { size } => {
                external += 1;
                mass += size;
            }
        }
    }
    if parents[0] != 0 {
        return Err("root is referenced as a child".into());
    }
    if let Some(i) = parents.iter().skip(1).position(|&p| p != 1) {
        return Err(format!("node {} has {} parents", i + 1, parents[i + 1]));
    }
    if external != internal + 1 {
        return Err(format!("{external} leaves for {internal} internal nodes"));
    }
    if mass != psi {
        return Err(format!("leaf sizes sum to {mass}, expected {psi}"));
    }
    let depth = tree.max_depth();
    if depth > limit {
        return Err(format!("depth {depth} exceeds height limit {limit}"));
    }
    Ok(())
}
