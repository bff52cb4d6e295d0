use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::fcm::{FcmParams, MembershipMatrix};
use super::select::{select_k, KDiagnostic};
use super::ClusteringError;
use crate::matrix::Matrix;
use crate::similarity::SimilarityMatrix;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HfcmConfig {
    /// Machine capacity in triples.
    pub capacity: u64,
    pub k_min: usize,
    pub k_max: usize,
    pub max_depth: usize,
    /// Template for every FCM run; `k` and `seed` are overridden per node.
    pub fcm: FcmParams,
}

impl Default for HfcmConfig {
    fn default() -> Self {
        Self {
            capacity: 1_000_000,
            k_min: 2,
            k_max: 10,
            max_depth: 16,
            fcm: FcmParams::default(),
        }
    }
}

impl HfcmConfig {
    /// Nodes smaller than this are never split.
    pub fn min_split_size(&self) -> usize {
        2 * self.k_min
    }
}

/// Why a node was not split further.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LeafReason {
    WithinCapacity,
    BelowMinSize,
    FixedPoint,
    DepthLimit,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClusterNode {
    /// Dotted path from the root, e.g. `0.2.1`.
    pub id: String,
    pub depth: usize,
    /// Predicate positions, ascending.
    pub members: Vec<usize>,
    pub triple_load: u64,
    /// Membership of each member in the cluster that produced this node;
    /// 1.0 at the root.
    pub top_membership: Vec<f64>,
    pub chosen_k: Option<usize>,
    pub silhouette: Option<f64>,
    pub diagnostics: Vec<KDiagnostic>,
    /// Soft assignment of `members` over `chosen_k` clusters (split nodes).
    pub membership: Option<MembershipMatrix>,
    pub hard_labels: Vec<usize>,
    pub leaf_reason: Option<LeafReason>,
    pub children: Vec<ClusterNode>,
}

impl ClusterNode {
    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a ClusterNode>) {
        if self.is_leaf() {
            out.push(self);
        } else {
            for c in &self.children {
                c.collect_leaves(out);
            }
        }
    }

    fn walk<'a>(&'a self, out: &mut Vec<&'a ClusterNode>) {
        out.push(self);
        for c in &self.children {
            c.walk(out);
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClusterTree {
    pub capacity: u64,
    /// Predicate IRI per position.
    pub predicates: Vec<String>,
    /// Triple count per position.
    pub triple_loads: Vec<u64>,
    pub root: ClusterNode,
}

impl ClusterTree {
    /// Leaves in depth-first order.
    pub fn leaves(&self) -> Vec<&ClusterNode> {
        let mut out = Vec::new();
        self.root.collect_leaves(&mut out);
        out
    }

    pub fn nodes(&self) -> Vec<&ClusterNode> {
        let mut out = Vec::new();
        self.root.walk(&mut out);
        out
    }

    /// Leaf index for every predicate position.
    pub fn leaf_assignment(&self) -> Vec<usize> {
        let mut out = vec![usize::MAX; self.predicates.len()];
        for (leaf_idx, leaf) in self.leaves().into_iter().enumerate() {
            for &m in &leaf.members {
                out[m] = leaf_idx;
            }
        }
        out
    }

    /// Number of clusters after each level of splitting: entry `d` counts
    /// nodes at depth `d + 1` plus leaves above that depth. The last entry
    /// is the level at which nothing changed any more.
    pub fn clusters_per_level(&self) -> Vec<usize> {
        let nodes = self.nodes();
        let depth = nodes.iter().map(|n| n.depth).max().unwrap_or(0);
        (1..=depth + 1)
            .map(|d| {
                nodes
                    .iter()
                    .filter(|n| n.depth == d || (n.depth < d && n.is_leaf()))
                    .count()
            })
            .collect()
    }
}

/// Supplies feature rows for a set of predicate positions.
pub trait FeatureSource: Sync {
    fn features(&self, members: &[usize]) -> Result<Matrix, ClusteringError>;
}

/// Rows of the similarity matrix restricted to member columns.
impl FeatureSource for SimilarityMatrix {
    fn features(&self, members: &[usize]) -> Result<Matrix, ClusteringError> {
        Ok(self.values().submatrix(members))
    }
}

/// Hierarchical FCM driven by the machine capacity.
pub fn hfcm(
    cm: &SimilarityMatrix,
    triple_loads: &[u64],
    config: &HfcmConfig,
) -> Result<ClusterTree, ClusteringError> {
    hfcm_with(cm, cm.labels(), triple_loads, config)
}

/// [`hfcm`] with a custom feature source.
pub fn hfcm_with<S: FeatureSource>(
    source: &S,
    predicates: &[String],
    triple_loads: &[u64],
    config: &HfcmConfig,
) -> Result<ClusterTree, ClusteringError> {
    if config.capacity == 0 {
        return Err(ClusteringError::Parameter("capacity must be positive".into()));
    }
    if config.k_min < 2 || config.k_max < config.k_min {
        return Err(ClusteringError::Parameter(format!(
            "k range [{}, {}] is invalid",
            config.k_min, config.k_max
        )));
    }
    if triple_loads.len() != predicates.len() {
        return Err(ClusteringError::Parameter(
            "one triple load per predicate is required".into(),
        ));
    }
    let members: Vec<usize> = (0..predicates.len()).collect();
    let top = vec![1.0; members.len()];
    let root = split_node(
        source,
        triple_loads,
        config,
        "0".into(),
        0,
        members,
        top,
        config.fcm.seed,
    )?;
    Ok(ClusterTree {
        capacity: config.capacity,
        predicates: predicates.to_vec(),
        triple_loads: triple_loads.to_vec(),
        root,
    })
}

#[allow(clippy::too_many_arguments)]
fn split_node<S: FeatureSource>(
    source: &S,
    loads: &[u64],
    config: &HfcmConfig,
    id: String,
    depth: usize,
    members: Vec<usize>,
    top_membership: Vec<f64>,
    seed: u64,
) -> Result<ClusterNode, ClusteringError> {
    let triple_load = members.iter().map(|&m| loads[m]).sum();
    let mut node = ClusterNode {
        id,
        depth,
        members,
        triple_load,
        top_membership,
        chosen_k: None,
        silhouette: None,
        diagnostics: Vec::new(),
        membership: None,
        hard_labels: Vec::new(),
        leaf_reason: None,
        children: Vec::new(),
    };

    let reason = if triple_load <= config.capacity {
        Some(LeafReason::WithinCapacity)
    } else if node.members.len() < config.min_split_size() {
        Some(LeafReason::BelowMinSize)
    } else if depth >= config.max_depth {
        Some(LeafReason::DepthLimit)
    } else {
        None
    };
    if reason.is_some() {
        node.leaf_reason = reason;
        return Ok(node);
    }

    let features = source.features(&node.members)?;
    let k_max = config.k_max.min(node.members.len() - 1);
    let selection = match select_k(&features, config.k_min, k_max, &config.fcm.with_seed(seed)) {
        Ok(s) => s,
        Err(ClusteringError::Undefined(_)) => {
            node.leaf_reason = Some(LeafReason::FixedPoint);
            return Ok(node);
        }
        Err(e) => return Err(e),
    };
    node.diagnostics = selection.diagnostics.clone();

    let k = selection.best_k;
    // Renumber clusters by first appearance so child order does not depend
    // on which start won.
    let mut rank = vec![usize::MAX; k];
    let mut next = 0;
    for &label in &selection.labels {
        if rank[label] == usize::MAX {
            rank[label] = next;
            next += 1;
        }
    }
    for r in rank.iter_mut().filter(|r| **r == usize::MAX) {
        *r = next;
        next += 1;
    }
    let fuzzy = &selection.result.membership;
    let rows: Vec<Vec<f64>> = (0..fuzzy.n())
        .map(|i| {
            let mut row = vec![0.0; k];
            for (c, &v) in fuzzy.row(i).iter().enumerate() {
                row[rank[c]] = v;
            }
            row
        })
        .collect();
    let membership = MembershipMatrix::from_rows(&rows);
    let labels: Vec<usize> = selection.labels.iter().map(|&l| rank[l]).collect();

    let mut groups: Vec<(Vec<usize>, Vec<f64>)> = vec![(Vec::new(), Vec::new()); k];
    for (row, (&member, &label)) in node.members.iter().zip(&labels).enumerate() {
        groups[label].0.push(member);
        groups[label].1.push(membership.get(row, label));
    }
    groups.retain(|(g, _)| !g.is_empty());

    node.chosen_k = Some(k);
    node.silhouette = Some(selection.silhouette);
    node.hard_labels = labels;
    node.membership = Some(membership);
    if groups.len() < 2 {
        node.leaf_reason = Some(LeafReason::FixedPoint);
        return Ok(node);
    }

    log::debug!(
        "node {} ({} predicates, load {}): split into {} (silhouette {:.4})",
        node.id,
        node.members.len(),
        node.triple_load,
        groups.len(),
        selection.silhouette
    );

    let parent_id = node.id.clone();
    node.children = groups
        .into_par_iter()
        .enumerate()
        .map(|(i, (members, top))| {
            split_node(
                source,
                loads,
                config,
                format!("{parent_id}.{i}"),
                depth + 1,
                members,
                top,
                child_seed(seed, i),
            )
        })
        .collect::<Result<_, _>>()?;
    Ok(node)
}

/// Derives a child seed from the parent seed and the child's index.
pub fn child_seed(parent: u64, index: usize) -> u64 {
    // splitmix64 finaliser over the combined value
    let mut z = parent ^ (index as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
