use crate::dataset::Dataset;
use crate::error::{EifError, Result};
use crate::rng::RngStream;
use crate::scalar::Scalar;

use super::normalizer::c_factor;
use super::split::{check_extension_level, sample_split, Hyperplane};

/// Tree node in a flattened, pre-order arena. The root is node 0 and children
/// always sit at larger indices than their parent.
#[derive(Clone, Debug, PartialEq)]
pub enum Node<T> {
    Internal {
        split: Hyperplane<T>,
        left: usize,
        right: usize,
    },
    External {
        size: usize,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct IsolationTree<T> {
    nodes: Vec<Node<T>>,
    height_limit: usize,
    psi: usize,
}

impl<T: Scalar> IsolationTree<T> {
    /// Wraps an arena without checking it; loaders validate separately.
    pub(crate) fn from_nodes(nodes: Vec<Node<T>>, height_limit: usize, psi: usize) -> Self {
        Self {
            nodes,
            height_limit,
            psi,
        }
    }

    pub fn nodes(&self) -> &[Node<T>] {
        &self.nodes
    }

    pub fn height_limit(&self) -> usize {
        self.height_limit
    }

    pub fn psi(&self) -> usize {
        self.psi
    }

    pub fn dim(&self) -> Option<usize> {
        self.nodes.iter().find_map(|n| match n {
            Node::Internal { split, .. } => Some(split.dim()),
            Node::External { .. } => None,
        })
    }

    /// `(node index, depth)` for every node, root first.
    pub fn depths(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![(0usize, 0usize)];
        while let Some((id, depth)) = stack.pop() {
            out.push((id, depth));
            if let Node::Internal { left, right, .. } = &self.nodes[id] {
                stack.push((*right, depth + 1));
                stack.push((*left, depth + 1));
            }
        }
        out
    }

    pub fn max_depth(&self) -> usize {
        self.depths().into_iter().map(|(_, d)| d).max().unwrap_or(0)
    }

    /// Index of the leaf `x` lands in and its depth. No dimension check.
    #[inline]
    pub(crate) fn descend(&self, x: &[T]) -> (usize, usize) {
        let mut id = 0;
        let mut depth = 0;
        loop {
            match &self.nodes[id] {
                Node::Internal { split, left, right } => {
                    id = if split.goes_left(x) { *left } else { *right };
                    depth += 1;
                }
                Node::External { .. } => return (id, depth),
            }
        }
    }

    #[inline]
    pub(crate) fn path_length_unchecked(&self, x: &[T]) -> T {
        let (leaf, depth) = self.descend(x);
        match self.nodes[leaf] {
            Node::External { size } => T::from_count(depth) + c_factor::<T>(size),
            Node::Internal { .. } => unreachable!("descend stops at leaves"),
        }
    }
}

/// Depth of `x` in `tree` plus `c(size)` for the leaf it lands in.
pub fn path_length<T: Scalar>(x: &[T], tree: &IsolationTree<T>) -> Result<T> {
    if let Some(dim) = tree.dim() {
        crate::dataset::check_point(x, dim)?;
    }
    Ok(tree.path_length_unchecked(x))
}

struct Grower<'a, T> {
    data: &'a Dataset<T>,
    extension_level: usize,
    height_limit: usize,
    rng: &'a mut RngStream,
    nodes: Vec<Node<T>>,
}

impl<T: Scalar> Grower<'_, T> {
    fn leaf(&mut self, size: usize) -> usize {
        self.nodes.push(Node::External { size });
        self.nodes.len() - 1
    }

    fn grow(&mut self, idx: &mut [usize], depth: usize) -> usize {
        if depth >= self.height_limit || idx.len() <= 1 {
            return self.leaf(idx.len());
        }
        let dim = self.data.dim();
        let mut lo = self.data.row(idx[0]).to_vec();
        let mut hi = lo.clone();
        for &i in &idx[1..] {
            let row = self.data.row(i);
            for d in 0..dim {
                lo[d] = lo[d].min(row[d]);
                hi[d] = hi[d].max(row[d]);
            }
        }
        if lo == hi {
            // all points identical: nothing can separate them
            return self.leaf(idx.len());
        }

        let split = sample_split(&lo, &hi, self.extension_level, self.rng);
        let mut n_left = 0;
        for k in 0..idx.len() {
            if split.goes_left(self.data.row(idx[k])) {
                idx.swap(k, n_left);
                n_left += 1;
            }
        }

        let id = self.nodes.len();
        self.nodes.push(Node::Internal {
            split,
            left: id + 1,
            right: 0,
        });
        let (left_idx, right_idx) = idx.split_at_mut(n_left);
        self.grow(left_idx, depth + 1);
        let right = self.grow(right_idx, depth + 1);
        if let Node::Internal { right: r, .. } = &mut self.nodes[id] {
            *r = right;
        }
        id
    }
}

/// Grows one isolation tree on `subsample`, consuming split draws from `rng`.
pub fn build_tree<T: Scalar>(
    subsample: &Dataset<T>,
    height_limit: usize,
    extension_level: usize,
    rng: &mut RngStream,
) -> Result<IsolationTree<T>> {
    check_extension_level(extension_level, subsample.dim())?;
    if subsample.is_empty() {
        return Err(EifError::invalid("cannot grow a tree on an empty sample"));
    }
    let mut idx: Vec<usize> = (0..subsample.len()).collect();
    let mut grower = Grower {
        data: subsample,
        extension_level,
        height_limit,
        rng,
        nodes: Vec::new(),
    };
    grower.grow(&mut idx, 0);
    Ok(IsolationTree {
        nodes: grower.nodes,
        height_limit,
        psi: subsample.len(),
    })
}
