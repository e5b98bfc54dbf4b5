//! Potentials, nearest-neighbor descent, decision graph, edge cutting and
//! root finding.
//!
//! Given graph distances `d(i, j)` and a kernel width `sigma`, every node gets
//! a potential
//!
//! ```text
//! P[i] = -sum_{j != i} exp(-d(i, j)^2 / sigma)
//! ```
//!
//! and then descends to the nearest node (in graph distance) of lower
//! potential. The resulting parent pointers form one in-tree per connected
//! component. Edges between clusters start at nodes that are both deep in
//! potential and far from their parent, so they stand out in the decision
//! graph of `(|P|, L)` and can be cut there. Pointer jumping then labels every
//! node with the root of its sub-tree.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::paths::GraphDistances;

/// Factor applied to the largest edge length of a component to place its
/// root on the decision graph, where it has no edge of its own.
pub const ROOT_DELTA_FACTOR: f64 = 1.05;

/// Per-node potentials, all `<= 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Potential {
    values: Vec<f64>,
    sigma: f64,
}

impl Potential {
    pub fn new(values: Vec<f64>, sigma: f64) -> Result<Self> {
        check_sigma(sigma)?;
        Ok(Potential { values, sigma })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

impl std::ops::Index<usize> for Potential {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.values[i]
    }
}

fn check_sigma(sigma: f64) -> Result<()> {
    if sigma > 0.0 && sigma.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "sigma must be positive and finite, got {sigma}"
        )))
    }
}

/// Gaussian-kernel potential over squared graph distances. Pairs at infinite
/// distance contribute nothing.
pub fn compute_potential(dg: &GraphDistances, sigma: f64) -> Result<Potential> {
    check_sigma(sigma)?;
    let values = (0..dg.len())
        .into_par_iter()
        .map(|i| {
            let sum: f64 = dg
                .row(i)
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &d)| (-(d * d) / sigma).exp())
                .sum();
            0.0 - sum
        })
        .collect();
    Ok(Potential { values, sigma })
}

/// A convenience kernel width: half the squared mean finite graph distance.
pub fn default_sigma(dg: &GraphDistances) -> Option<f64> {
    dg.mean_finite().map(|m| m * m / 2.0).filter(|s| *s > 0.0)
}

/// Which nodes a node may descend to.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DescentRule {
    /// Lower potential, or equal potential and a lower node index. Every
    /// component ends up with exactly one root.
    #[default]
    IndexTieBreak,
    /// Strictly lower potential only. Nodes sharing the lowest potential of a
    /// component all become roots.
    Strict,
}

impl DescentRule {
    #[inline]
    fn admits(self, p_candidate: f64, candidate: usize, p_node: f64, node: usize) -> bool {
        match self {
            DescentRule::IndexTieBreak => {
                p_candidate < p_node || (p_candidate == p_node && candidate < node)
            }
            DescentRule::Strict => p_candidate < p_node,
        }
    }
}

/// Parent pointers of the nearest-neighbor-descent forest.
///
/// `parent[i] == i` marks a root, whose `edge_len` is 0.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InTreeForest {
    parent: Vec<usize>,
    edge_len: Vec<f64>,
    potential: Potential,
    component: Vec<usize>,
}

impl InTreeForest {
    /// Assembles a forest from raw parts without checking the descent
    /// invariant. See [`InTreeForest::check_descent`].
    pub fn from_parts(
        parent: Vec<usize>,
        edge_len: Vec<f64>,
        potential: Potential,
        component: Vec<usize>,
    ) -> Result<Self> {
        let n = parent.len();
        for len in [edge_len.len(), potential.len(), component.len()] {
            if len != n {
                return Err(Error::LengthMismatch {
                    left: n,
                    right: len,
                });
            }
        }
        if let Some(p) = parent.iter().find(|&&p| p >= n) {
            return Err(Error::InvalidParameter(format!("parent {p} out of range")));
        }
        Ok(InTreeForest {
            parent,
            edge_len,
            potential,
            component,
        })
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn parent(&self) -> &[usize] {
        &self.parent
    }

    pub fn edge_len(&self) -> &[f64] {
        &self.edge_len
    }

    pub fn potential(&self) -> &Potential {
        &self.potential
    }

    /// Graph component of every node.
    pub fn component(&self) -> &[usize] {
        &self.component
    }

    pub fn is_root(&self, i: usize) -> bool {
        self.parent[i] == i
    }

    pub fn roots(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.is_root(i)).collect()
    }

    pub fn n_roots(&self) -> usize {
        (0..self.len()).filter(|&i| self.is_root(i)).count()
    }

    /// Verifies that `(P, index)` strictly decreases along every edge, which
    /// rules out cycles.
    pub fn check_descent(&self) -> Result<()> {
        let p = self.potential.values();
        for (i, &j) in self.parent.iter().enumerate() {
            if i == j {
                continue;
            }
            let ok = p[j] < p[i] || (p[j] == p[i] && j < i);
            if !ok {
                return Err(Error::InvalidParameter(format!(
                    "edge {i} -> {j} does not descend: P = {} -> {}",
                    p[i], p[j]
                )));
            }
        }
        Ok(())
    }

    /// Longest directed path, counted in edges.
    pub fn height(&self) -> Result<usize> {
        const UNKNOWN: usize = usize::MAX;
        let n = self.len();
        let mut depth = vec![UNKNOWN; n];
        let mut stack = Vec::new();
        for start in 0..n {
            let mut node = start;
            while depth[node] == UNKNOWN {
                if self.is_root(node) {
                    depth[node] = 0;
                    break;
                }
                stack.push(node);
                if stack.len() > n {
                    return Err(Error::CycleDetected { rounds: n });
                }
                node = self.parent[node];
            }
            let mut d = depth[node];
            while let Some(v) = stack.pop() {
                d += 1;
                depth[v] = d;
            }
        }
        Ok(depth.into_iter().max().unwrap_or(0))
    }
}

/// Builds the forest with the default [`DescentRule::IndexTieBreak`].
pub fn build_in_tree(dg: &GraphDistances, potential: &Potential) -> Result<InTreeForest> {
    build_in_tree_with(dg, potential, DescentRule::IndexTieBreak)
}

/// Each node points to the nearest admissible node in graph distance; ties in
/// distance go to the lowest index. Nodes with no admissible node reachable
/// in their component become roots.
pub fn build_in_tree_with(
    dg: &GraphDistances,
    potential: &Potential,
    rule: DescentRule,
) -> Result<InTreeForest> {
    let n = dg.len();
    if potential.len() != n {
        return Err(Error::LengthMismatch {
            left: n,
            right: potential.len(),
        });
    }
    let p = potential.values();
    let (parent, edge_len): (Vec<usize>, Vec<f64>) = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut best: Option<(usize, f64)> = None;
            for (j, &d) in dg.row(i).iter().enumerate() {
                if j == i || !d.is_finite() || !rule.admits(p[j], j, p[i], i) {
                    continue;
                }
                if best.is_none_or(|(_, bd)| d < bd) {
                    best = Some((j, d));
                }
            }
            best.unwrap_or((i, 0.0))
        })
        .unzip();
    Ok(InTreeForest {
        parent,
        edge_len,
        potential: potential.clone(),
        component: dg.component_id().to_vec(),
    })
}

/// One node on the decision graph.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecisionPoint {
    pub node: usize,
    /// `|P|`
    pub rho: f64,
    /// Edge length `L`, or the inflated component maximum for roots.
    pub delta: f64,
    pub is_root: bool,
}

impl DecisionPoint {
    pub fn score(&self, ranking: Ranking) -> f64 {
        match ranking {
            Ranking::Product => self.rho * self.delta,
            Ranking::Delta => self.delta,
        }
    }
}

pub fn decision_graph(tree: &InTreeForest) -> Vec<DecisionPoint> {
    let mut max_len: BTreeMap<usize, f64> = BTreeMap::new();
    for (i, &len) in tree.edge_len.iter().enumerate() {
        if !tree.is_root(i) && len.is_finite() {
            let slot = max_len.entry(tree.component[i]).or_insert(0.0);
            *slot = slot.max(len);
        }
    }
    (0..tree.len())
        .map(|i| {
            let is_root = tree.is_root(i);
            let delta = if is_root {
                ROOT_DELTA_FACTOR * max_len.get(&tree.component[i]).copied().unwrap_or(0.0)
            } else {
                tree.edge_len[i]
            };
            DecisionPoint {
                node: i,
                rho: tree.potential[i].abs(),
                delta,
                is_root,
            }
        })
        .collect()
}

/// Removes the out-edge of every victim by making it a root. Victims that
/// are already roots are left alone.
pub fn cut_edges<'a>(
    tree: &InTreeForest,
    victims: impl IntoIterator<Item = &'a usize>,
) -> InTreeForest {
    let mut out = tree.clone();
    for &v in victims {
        if v < out.len() {
            out.parent[v] = v;
            out.edge_len[v] = 0.0;
        }
    }
    out
}

/// Axis-aligned selection box on the decision graph, bounds inclusive.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub rho_min: f64,
    pub rho_max: f64,
    pub delta_min: f64,
    pub delta_max: f64,
}

impl Rect {
    pub fn new(rho_min: f64, rho_max: f64, delta_min: f64, delta_max: f64) -> Result<Self> {
        let r = Rect {
            rho_min,
            rho_max,
            delta_min,
            delta_max,
        };
        r.validate()?;
        Ok(r)
    }

    pub fn validate(&self) -> Result<()> {
        let bounds = [self.rho_min, self.rho_max, self.delta_min, self.delta_max];
        if bounds.iter().any(|v| v.is_nan()) {
            return Err(Error::InvalidParameter(
                "rectangle bounds must not be NaN".into(),
            ));
        }
        if self.rho_min > self.rho_max || self.delta_min > self.delta_max {
            return Err(Error::InvalidParameter(
                "rectangle minimum exceeds maximum".into(),
            ));
        }
        Ok(())
    }

    pub fn everything() -> Self {
        Rect {
            rho_min: f64::NEG_INFINITY,
            rho_max: f64::INFINITY,
            delta_min: f64::NEG_INFINITY,
            delta_max: f64::INFINITY,
        }
    }

    pub fn contains(&self, rho: f64, delta: f64) -> bool {
        (self.rho_min..=self.rho_max).contains(&rho)
            && (self.delta_min..=self.delta_max).contains(&delta)
    }
}

/// Non-root nodes inside the box.
pub fn rect_select(dg: &[DecisionPoint], rect: &Rect) -> BTreeSet<usize> {
    dg.iter()
        .filter(|p| !p.is_root && rect.contains(p.rho, p.delta))
        .map(|p| p.node)
        .collect()
}

/// How [`auto_cut`] ranks candidate edges.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Ranking {
    /// `rho * delta`
    #[default]
    Product,
    /// `delta` alone
    Delta,
}

/// Non-root decision points ordered best-first: score, then delta, both
/// descending, then node id ascending.
pub fn ranked_candidates(dg: &[DecisionPoint], ranking: Ranking) -> Vec<DecisionPoint> {
    let mut candidates: Vec<DecisionPoint> = dg.iter().filter(|p| !p.is_root).copied().collect();
    candidates.sort_by(|a, b| {
        b.score(ranking)
            .total_cmp(&a.score(ranking))
            .then_with(|| b.delta.total_cmp(&a.delta))
            .then_with(|| a.node.cmp(&b.node))
    });
    candidates
}

/// Picks the edges to cut so the forest ends with `n_clusters` roots.
pub fn auto_cut(tree: &InTreeForest, n_clusters: usize) -> Result<BTreeSet<usize>> {
    auto_cut_with(tree, n_clusters, Ranking::Product)
}

pub fn auto_cut_with(
    tree: &InTreeForest,
    n_clusters: usize,
    ranking: Ranking,
) -> Result<BTreeSet<usize>> {
    let roots = tree.n_roots();
    if n_clusters < roots {
        return Err(Error::CannotMergeComponents {
            requested: n_clusters,
            components: roots,
        });
    }
    if n_clusters > tree.len() {
        return Err(Error::InvalidParameter(format!(
            "cannot form {n_clusters} clusters from {} nodes",
            tree.len()
        )));
    }
    let dg = decision_graph(tree);
    Ok(ranked_candidates(&dg, ranking)
        .into_iter()
        .take(n_clusters - roots)
        .map(|p| p.node)
        .collect())
}

/// Final root of every node plus dense cluster ids.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterAssignment {
    pub root_of: Vec<usize>,
    /// Dense ids, numbered in order of each cluster's smallest member.
    pub cluster_id: Vec<usize>,
    pub n_clusters: usize,
    /// Pointer-jumping rounds that changed at least one pointer.
    pub rounds: usize,
}

fn ceil_log2(x: usize) -> usize {
    if x <= 1 {
        0
    } else {
        (usize::BITS - (x - 1).leading_zeros()) as usize
    }
}

/// Resolves roots by pointer jumping (`I <- I[I]`) until nothing changes.
///
/// A valid forest of height `H` settles in `ceil(log2 H)` rounds. Anything
/// still moving after `ceil(log2 N) + 1` rounds contains a cycle.
pub fn find_roots(tree: &InTreeForest) -> Result<ClusterAssignment> {
    let n = tree.len();
    let cap = ceil_log2(n) + 1;
    let mut current = tree.parent.clone();
    let mut rounds = 0;
    loop {
        let next: Vec<usize> = current.iter().map(|&p| current[p]).collect();
        if next == current {
            break;
        }
        current = next;
        rounds += 1;
        if rounds > cap {
            return Err(Error::CycleDetected { rounds });
        }
    }
    // an even cycle collapses onto itself under jumping; real roots self-point
    if current.iter().any(|&r| !tree.is_root(r)) {
        return Err(Error::CycleDetected { rounds });
    }
    let mut ids: BTreeMap<usize, usize> = BTreeMap::new();
    let mut cluster_id = Vec::with_capacity(n);
    for &root in &current {
        let next_id = ids.len();
        cluster_id.push(*ids.entry(root).or_insert(next_id));
    }
    Ok(ClusterAssignment {
        n_clusters: ids.len(),
        root_of: current,
        cluster_id,
        rounds,
    })
}

/// `ceil(log2(max(h, 2)))`, the round bound for a forest of height `h`.
pub fn jump_round_bound(height: usize) -> usize {
    ceil_log2(height.max(2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{GraphKind, GraphParams, ProximityGraph};
    use crate::paths::shortest_paths;

    fn dist(n: usize, edges: &[(usize, usize, f64)]) -> GraphDistances {
        let g = ProximityGraph::from_edges(
            n,
            GraphKind::Knn,
            GraphParams::default(),
            edges.iter().copied(),
        )
        .unwrap();
        shortest_paths(&g).unwrap()
    }

    fn forest(parent: Vec<usize>) -> InTreeForest {
        let n = parent.len();
        let edge_len = parent
            .iter()
            .enumerate()
            .map(|(i, &p)| if i == p { 0.0 } else { 1.0 })
            .collect();
        let potential = Potential::new(vec![0.0; n], 1.0).unwrap();
        InTreeForest::from_parts(parent, edge_len, potential, vec![0; n]).unwrap()
    }

    #[test]
    fn two_point_potential() {
        let p = compute_potential(&dist(2, &[(0, 1, 1.0)]), 1.0).unwrap();
        let expected = -(-1.0f64).exp();
        assert!((p[0] - expected).abs() < 1e-15);
        assert!((p[0] + 0.36788).abs() < 1e-5);
        assert_eq!(p[0], p[1]);
    }

    #[test]
    fn isolated_node_has_zero_potential() {
        let p = compute_potential(&dist(3, &[(0, 1, 1.0)]), 2.0).unwrap();
        assert_eq!(p[2], 0.0);
        assert!(p[2].is_sign_positive());
        assert!(p[0] < 0.0);
    }

    #[test]
    fn sigma_must_be_positive() {
        let d = dist(2, &[(0, 1, 1.0)]);
        assert!(compute_potential(&d, 0.0).is_err());
        assert!(compute_potential(&d, -1.0).is_err());
        assert!(compute_potential(&d, f64::NAN).is_err());
    }

    #[test]
    fn path_descends_toward_lowest_potential() {
        let d = dist(3, &[(0, 1, 1.0), (1, 2, 1.0)]);
        let p = Potential::new(vec![-1.0, -2.0, -3.0], 1.0).unwrap();
        let t = build_in_tree(&d, &p).unwrap();
        assert_eq!(t.parent(), &[1, 2, 2]);
        assert_eq!(t.edge_len(), &[1.0, 1.0, 0.0]);
        assert_eq!(t.roots(), vec![2]);
        t.check_descent().unwrap();
    }

    #[test]
    fn equal_potentials_use_index() {
        let d = dist(2, &[(0, 1, 1.0)]);
        let p = compute_potential(&d, 1.0).unwrap();
        let t = build_in_tree(&d, &p).unwrap();
        assert_eq!(t.parent(), &[0, 0]);

        let strict = build_in_tree_with(&d, &p, DescentRule::Strict).unwrap();
        assert_eq!(strict.parent(), &[0, 1]);
    }

    #[test]
    fn one_root_per_component() {
        let d = dist(5, &[(0, 1, 1.0), (1, 2, 2.0), (3, 4, 0.5)]);
        let p = compute_potential(&d, 3.0).unwrap();
        let t = build_in_tree(&d, &p).unwrap();
        assert_eq!(t.n_roots(), d.n_components());
        t.check_descent().unwrap();
        for i in 0..5 {
            assert_eq!(t.component()[t.parent()[i]], t.component()[i]);
        }
    }

    #[test]
    fn distance_ties_go_to_lowest_index() {
        // star: center 2 has the lowest potential, 0 and 1 equidistant from 3
        let d = dist(4, &[(0, 3, 1.0), (1, 3, 1.0), (2, 3, 1.0)]);
        let p = Potential::new(vec![-5.0, -5.0, -1.0, -0.5], 1.0).unwrap();
        let t = build_in_tree(&d, &p).unwrap();
        assert_eq!(t.parent()[3], 0);
    }

    #[test]
    fn decision_graph_single_root() {
        let d = dist(3, &[(0, 1, 1.0), (1, 2, 2.0)]);
        let p = Potential::new(vec![-1.0, -3.0, -2.0], 1.0).unwrap();
        let t = build_in_tree(&d, &p).unwrap();
        let dg = decision_graph(&t);
        let roots: Vec<_> = dg.iter().filter(|p| p.is_root).collect();
        assert_eq!(roots.len(), 1);
        assert_eq!(roots[0].node, 1);
        assert!((roots[0].delta - 2.0 * ROOT_DELTA_FACTOR).abs() < 1e-12);
        assert_eq!(dg[2].rho, 2.0);
        assert_eq!(dg[2].delta, 2.0);
    }

    #[test]
    fn cut_adds_roots() {
        let t = forest(vec![1, 2, 2, 2]);
        assert_eq!(cut_edges(&t, &BTreeSet::new()), t);
        let cut = cut_edges(&t, &[0]);
        assert_eq!(cut.n_roots(), 2);
        assert_eq!(cut.edge_len()[0], 0.0);
        // roots are ignored
        assert_eq!(cut_edges(&t, &[2]), t);
    }

    #[test]
    fn rect_selection() {
        let dg = vec![
            DecisionPoint {
                node: 0,
                rho: 1.0,
                delta: 1.0,
                is_root: false,
            },
            DecisionPoint {
                node: 1,
                rho: 5.0,
                delta: 9.0,
                is_root: false,
            },
            DecisionPoint {
                node: 2,
                rho: 6.0,
                delta: 10.0,
                is_root: true,
            },
        ];
        assert!(rect_select(&dg, &Rect::new(100.0, 200.0, 0.0, 1.0).unwrap()).is_empty());
        assert_eq!(
            rect_select(&dg, &Rect::everything()),
            BTreeSet::from([0, 1])
        );
        assert_eq!(
            rect_select(&dg, &Rect::new(4.0, 7.0, 8.0, 11.0).unwrap()),
            BTreeSet::from([1])
        );
        assert!(Rect::new(2.0, 1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn auto_cut_extremes() {
        let d = dist(4, &[(0, 1, 1.0), (1, 2, 3.0), (2, 3, 1.0)]);
        let p = compute_potential(&d, 4.0).unwrap();
        let t = build_in_tree(&d, &p).unwrap();
        assert!(auto_cut(&t, 1).unwrap().is_empty());
        assert_eq!(auto_cut(&t, 4).unwrap().len(), 3);
        assert!(matches!(
            auto_cut(&t, 0),
            Err(Error::CannotMergeComponents { .. })
        ));
        assert!(auto_cut(&t, 5).is_err());
        // the long middle edge goes first
        let two = auto_cut(&t, 2).unwrap();
        assert_eq!(two.len(), 1);
        let v = *two.iter().next().unwrap();
        assert_eq!(t.edge_len()[v], 3.0);
    }

    #[test]
    fn ranking_tie_breaks() {
        let dg = vec![
            DecisionPoint {
                node: 0,
                rho: 2.0,
                delta: 1.0,
                is_root: false,
            },
            DecisionPoint {
                node: 1,
                rho: 1.0,
                delta: 2.0,
                is_root: false,
            },
            DecisionPoint {
                node: 2,
                rho: 1.0,
                delta: 2.0,
                is_root: false,
            },
        ];
        let order: Vec<_> = ranked_candidates(&dg, Ranking::Product)
            .iter()
            .map(|p| p.node)
            .collect();
        assert_eq!(order, vec![1, 2, 0]);
    }

    #[test]
    fn roots_only() {
        let a = find_roots(&forest(vec![0, 1, 2])).unwrap();
        assert_eq!(a.rounds, 0);
        assert_eq!(a.n_clusters, 3);
        assert_eq!(a.cluster_id, vec![0, 1, 2]);
    }

    #[test]
    fn chain_of_nine_edges() {
        let parent: Vec<usize> = (0..10).map(|i| if i == 9 { 9 } else { i + 1 }).collect();
        let t = forest(parent);
        assert_eq!(t.height().unwrap(), 9);
        let a = find_roots(&t).unwrap();
        assert!(a.rounds <= 4);
        assert_eq!(a.rounds, jump_round_bound(9));
        assert!(a.root_of.iter().all(|&r| r == 9));
        assert_eq!(a.n_clusters, 1);
    }

    #[test]
    fn cycle_is_reported() {
        let t = forest(vec![1, 0, 2]);
        assert!(matches!(find_roots(&t), Err(Error::CycleDetected { .. })));
        assert!(t.height().is_err());
    }

    #[test]
    fn cluster_ids_follow_smallest_member() {
        let a = find_roots(&forest(vec![3, 1, 1, 3])).unwrap();
        assert_eq!(a.cluster_id, vec![0, 1, 1, 0]);
        assert_eq!(a.root_of, vec![3, 1, 1, 3]);
    }

    #[test]
    fn ceil_log2_values() {
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(ceil_log2(2), 1);
        assert_eq!(ceil_log2(3), 2);
        assert_eq!(ceil_log2(8), 3);
        assert_eq!(ceil_log2(9), 4);
    }

    #[test]
    fn default_sigma_from_mean() {
        let d = dist(2, &[(0, 1, 2.0)]);
        assert_eq!(default_sigma(&d), Some(2.0));
        assert_eq!(default_sigma(&dist(2, &[])), None);
    }
}
