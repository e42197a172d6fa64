//! Random forest regressor: bootstrap-sampled CART trees with
//! variance-reduction splits and random feature subsets per node.
//!
//! Split ties break toward the lowest feature index, then the lowest
//! threshold, and per-tree streams derive from the forest seed, so a
//! fitted ensemble is reproducible regardless of training thread count.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::FeatureMatrix;
use crate::error::{Error, Result};
use crate::rng::{self, Stream};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ForestParams {
    pub n_trees: usize,
    pub min_samples_leaf: usize,
    pub bootstrap: bool,
    pub max_depth: Option<usize>,
    /// Features considered per split; `None` means `ceil(p / 3)`.
    pub features_per_split: Option<usize>,
}

impl Default for ForestParams {
    fn default() -> Self {
        ForestParams {
            n_trees: 100,
            min_samples_leaf: 2,
            bootstrap: true,
            max_depth: None,
            features_per_split: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
enum Node {
    Leaf {
        value: f64,
    },
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tree {
    nodes: Vec<Node>,
}

impl Tree {
    pub fn predict_row(&self, row: &[f64]) -> f64 {
        let mut at = 0;
        loop {
            match &self.nodes[at] {
                Node::Leaf { value } => return *value,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    at = if row[*feature] <= *threshold {
                        *left
                    } else {
                        *right
                    };
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Forest {
    pub params: ForestParams,
    trees: Vec<Tree>,
}

impl Forest {
    pub fn n_trees(&self) -> usize {
        self.trees.len()
    }

    pub fn predict_row(&self, row: &[f64]) -> f64 {
        self.trees.iter().map(|t| t.predict_row(row)).sum::<f64>() / self.trees.len() as f64
    }
}

pub fn fit_forest(
    x: &FeatureMatrix,
    y: &[f64],
    params: &ForestParams,
    seed: u64,
) -> Result<Forest> {
    if x.rows == 0 || x.rows != y.len() {
        return Err(Error::Domain("empty or mismatched forest inputs".into()));
    }
    if params.n_trees == 0 || params.min_samples_leaf == 0 {
        return Err(Error::Domain(
            "n_trees and min_samples_leaf must be >= 1".into(),
        ));
    }
    let mtry = params
        .features_per_split
        .unwrap_or_else(|| x.cols.div_ceil(3))
        .clamp(1, x.cols);

    let trees: Vec<Tree> = (0..params.n_trees)
        .into_par_iter()
        .map(|tree_idx| {
            let mut stream = rng::derive_stream(seed, &[b't' as u64, tree_idx as u64]);
            let indices: Vec<usize> = if params.bootstrap {
                (0..x.rows).map(|_| stream.gen_range(0..x.rows)).collect()
            } else {
                (0..x.rows).collect()
            };
            let mut builder = TreeBuilder {
                x,
                y,
                min_leaf: params.min_samples_leaf,
                max_depth: params.max_depth,
                mtry,
                nodes: Vec::new(),
            };
            builder.grow(indices, 0, &mut stream);
            Tree {
                nodes: builder.nodes,
            }
        })
        .collect();
    Ok(Forest {
        params: *params,
        trees,
    })
}

struct TreeBuilder<'a> {
    x: &'a FeatureMatrix,
    y: &'a [f64],
    min_leaf: usize,
    max_depth: Option<usize>,
    mtry: usize,
    nodes: Vec<Node>,
}

struct BestSplit {
    feature: usize,
    threshold: f64,
    score: f64,
}

impl TreeBuilder<'_> {
    fn grow(&mut self, indices: Vec<usize>, depth: usize, stream: &mut Stream) -> usize {
        let mean = indices.iter().map(|&i| self.y[i]).sum::<f64>() / indices.len() as f64;
        let depth_capped = self.max_depth.is_some_and(|d| depth >= d);
        let pure = indices.iter().all(|&i| self.y[i] == self.y[indices[0]]);
        if depth_capped || pure || indices.len() < 2 * self.min_leaf {
            self.nodes.push(Node::Leaf { value: mean });
            return self.nodes.len() - 1;
        }
        let Some(split) = self.best_split(&indices, stream) else {
            self.nodes.push(Node::Leaf { value: mean });
            return self.nodes.len() - 1;
        };
        let (left_ix, right_ix): (Vec<usize>, Vec<usize>) = indices
            .into_iter()
            .partition(|&i| self.x.get(i, split.feature) <= split.threshold);
        let at = self.nodes.len();
        self.nodes.push(Node::Leaf { value: mean }); // placeholder
        let left = self.grow(left_ix, depth + 1, stream);
        let right = self.grow(right_ix, depth + 1, stream);
        self.nodes[at] = Node::Split {
            feature: split.feature,
            threshold: split.threshold,
            left,
            right,
        };
        at
    }

    /// Exhaustive scan over a sorted random feature subset, minimizing the
    /// summed child SSE. Strict improvement keeps the first (lowest
    /// feature, lowest threshold) optimum.
    fn best_split(&self, indices: &[usize], stream: &mut Stream) -> Option<BestSplit> {
        let mut features = rand::seq::index::sample(stream, self.x.cols, self.mtry).into_vec();
        features.sort_unstable();
        let mut best: Option<BestSplit> = None;
        let mut sorted: Vec<usize> = indices.to_vec();
        for &feature in &features {
            sorted.sort_by(|&a, &b| self.x.get(a, feature).total_cmp(&self.x.get(b, feature)));
            let n = sorted.len();
            let total_sum: f64 = sorted.iter().map(|&i| self.y[i]).sum();
            let total_sq: f64 = sorted.iter().map(|&i| self.y[i] * self.y[i]).sum();
            let mut left_sum = 0.0;
            let mut left_sq = 0.0;
            for k in 1..n {
                let yi = self.y[sorted[k - 1]];
                left_sum += yi;
                left_sq += yi * yi;
                if k < self.min_leaf || n - k < self.min_leaf {
                    continue;
                }
                let lo = self.x.get(sorted[k - 1], feature);
                let hi = self.x.get(sorted[k], feature);
                if lo == hi {
                    continue;
                }
                let left_sse = left_sq - left_sum * left_sum / k as f64;
                let right_sum = total_sum - left_sum;
                let right_sse =
                    (total_sq - left_sq) - right_sum * right_sum / (n - k) as f64;
                let score = left_sse + right_sse;
                if best.as_ref().is_none_or(|b| score < b.score) {
                    best = Some(BestSplit {
                        feature,
                        threshold: (lo + hi) / 2.0,
                        score,
                    });
                }
            }
        }
        best
    }
}
