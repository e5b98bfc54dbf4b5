//! Neighborhood graphs built from an input distance matrix.
//!
//! Every builder returns a [`ProximityGraph`] whose undirected edges are stored
//! once as `(i, j, w)` with `i < j`, sorted by `(i, j)`, and weighted by the
//! input distance `d(i, j)`. On points in general position the non-parametric
//! graphs nest: `MST ⊆ RNG ⊆ Gabriel ⊆ Delaunay`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use spade::{DelaunayTriangulation, Point2, Triangulation};

use crate::dataset::{Dataset, DistanceMatrix, Metric};
use crate::error::{Error, Result};

/// Relative slack used by the lune and diametral-ball emptiness tests, so
/// that points sitting on the boundary are classified the same way no matter
/// which way the last bit of a square root rounded.
const BOUNDARY_RTOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphKind {
    Knn,
    EpsNn,
    Mst,
    Delaunay,
    Rng,
    Gabriel,
}

impl GraphKind {
    pub fn name(self) -> &'static str {
        match self {
            GraphKind::Knn => "knn",
            GraphKind::EpsNn => "eps_nn",
            GraphKind::Mst => "mst",
            GraphKind::Delaunay => "delaunay",
            GraphKind::Rng => "rng",
            GraphKind::Gabriel => "gabriel",
        }
    }
}

impl fmt::Display for GraphKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GraphKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "knn" | "k-nn" => Ok(GraphKind::Knn),
            "eps" | "eps_nn" | "eps-nn" | "epsilon" => Ok(GraphKind::EpsNn),
            "mst" => Ok(GraphKind::Mst),
            "delaunay" | "dt" => Ok(GraphKind::Delaunay),
            "rng" => Ok(GraphKind::Rng),
            "gabriel" | "gg" => Ok(GraphKind::Gabriel),
            _ => Err(Error::InvalidParameter(format!("unknown graph kind `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct GraphParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
}

/// An undirected weighted edge with `i < j`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub i: usize,
    pub j: usize,
    pub w: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProximityGraph {
    n: usize,
    kind: GraphKind,
    params: GraphParams,
    edges: Vec<Edge>,
}

impl ProximityGraph {
    /// Builds a graph from arbitrary edges. Pairs are normalized to `i < j`,
    /// deduplicated (first weight wins) and sorted; self-loops are dropped.
    pub fn from_edges(
        n: usize,
        kind: GraphKind,
        params: GraphParams,
        edges: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Result<Self> {
        let mut seen = HashMap::new();
        for (a, b, w) in edges {
            if a >= n || b >= n {
                return Err(Error::InvalidParameter(format!(
                    "edge ({a}, {b}) out of range for {n} nodes"
                )));
            }
            if a == b {
                continue;
            }
            seen.entry((a.min(b), a.max(b))).or_insert(w);
        }
        let mut edges: Vec<Edge> = seen
            .into_iter()
            .map(|((i, j), w)| Edge { i, j, w })
            .collect();
        edges.sort_by_key(|e| (e.i, e.j));
        Ok(ProximityGraph {
            n,
            kind,
            params,
            edges,
        })
    }

    fn from_pairs(
        dist: &DistanceMatrix,
        kind: GraphKind,
        params: GraphParams,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Self {
        let set: BTreeSet<(usize, usize)> = pairs
            .into_iter()
            .filter(|(a, b)| a != b)
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect();
        let edges = set
            .into_iter()
            .map(|(i, j)| Edge {
                i,
                j,
                w: dist.get(i, j),
            })
            .collect();
        ProximityGraph {
            n: dist.len(),
            kind,
            params,
            edges,
        }
    }

    pub fn n_nodes(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    pub fn params(&self) -> GraphParams {
        self.params
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.w).sum()
    }

    /// The sorted `(i, j)` pairs, handy for set comparisons.
    pub fn edge_set(&self) -> BTreeSet<(usize, usize)> {
        self.edges.iter().map(|e| (e.i, e.j)).collect()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for e in &self.edges {
            deg[e.i] += 1;
            deg[e.j] += 1;
        }
        deg
    }

    /// Adjacency lists, each sorted by neighbor id.
    pub fn adjacency(&self) -> Vec<Vec<(usize, f64)>> {
        let mut adj = vec![Vec::new(); self.n];
        for e in &self.edges {
            adj[e.i].push((e.j, e.w));
            adj[e.j].push((e.i, e.w));
        }
        for list in &mut adj {
            list.sort_by_key(|&(j, _)| j);
        }
        adj
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            n: self.n,
            kind: self.kind,
            params: self.params,
            edges: self.edges.iter().map(|e| (e.i, e.j, e.w)).collect(),
        }
    }
}

/// Export form: `{n, kind, params, edges: [[i, j, w], ...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub kind: GraphKind,
    pub params: GraphParams,
    pub edges: Vec<(usize, usize, f64)>,
}

impl TryFrom<GraphJson> for ProximityGraph {
    type Error = Error;

    fn try_from(g: GraphJson) -> Result<Self> {
        ProximityGraph::from_edges(g.n, g.kind, g.params, g.edges)
    }
}

/// Indices of the `k` nearest other nodes to `i`, ties broken by lower index.
fn nearest(dist: &DistanceMatrix, i: usize, k: usize) -> Vec<usize> {
    let row = dist.row(i);
    let mut others: Vec<usize> = (0..row.len()).filter(|&j| j != i).collect();
    let key = |&a: &usize, &b: &usize| row[a].total_cmp(&row[b]).then(a.cmp(&b));
    if k < others.len() {
        others.select_nth_unstable_by(k - 1, key);
        others.truncate(k);
    }
    others.sort_by(key);
    others
}

/// k-nearest-neighbor graph, symmetrized by union.
pub fn build_knn(dist: &DistanceMatrix, k: usize) -> Result<ProximityGraph> {
    let n = dist.len();
    if k == 0 || k >= n {
        return Err(Error::InvalidParameter(format!(
            "k must be in 1..={} for {n} points, got {k}",
            n.saturating_sub(1)
        )));
    }
    let pairs: Vec<(usize, usize)> = (0..n)
        .into_par_iter()
        .flat_map_iter(|i| nearest(dist, i, k).into_iter().map(move |j| (i, j)))
        .collect();
    Ok(ProximityGraph::from_pairs(
        dist,
        GraphKind::Knn,
        GraphParams {
            k: Some(k),
            eps: None,
        },
        pairs,
    ))
}

/// Connects every pair strictly closer than `eps`.
pub fn build_eps_nn(dist: &DistanceMatrix, eps: f64) -> Result<ProximityGraph> {
    if eps.is_nan() || eps <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "eps must be positive, got {eps}"
        )));
    }
    let n = dist.len();
    let pairs: Vec<(usize, usize)> = (0..n)
        .into_par_iter()
        .flat_map_iter(|i| {
            ((i + 1)..n)
                .filter(move |&j| dist.get(i, j) < eps)
                .map(move |j| (i, j))
        })
        .collect();
    Ok(ProximityGraph::from_pairs(
        dist,
        GraphKind::EpsNn,
        GraphParams {
            k: None,
            eps: Some(eps),
        },
        pairs,
    ))
}

/// Disjoint-set forest with path halving and union by size.
pub(crate) struct DisjointSet {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSet {
    pub(crate) fn new(n: usize) -> Self {
        DisjointSet {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        true
    }
}

/// Minimum spanning tree by Kruskal over the complete graph.
///
/// Candidate edges are processed in lexicographic `(w, i, j)` order, so the
/// tree is unique even when weights tie.
pub fn build_mst(dist: &DistanceMatrix) -> ProximityGraph {
    let n = dist.len();
    let mut candidates: Vec<(f64, usize, usize)> = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            candidates.push((dist.get(i, j), i, j));
        }
    }
    candidates
        .par_sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));

    let mut sets = DisjointSet::new(n);
    let mut tree = Vec::with_capacity(n.saturating_sub(1));
    for (_, i, j) in candidates {
        if sets.union(i, j) {
            tree.push((i, j));
            if tree.len() + 1 == n {
                break;
            }
        }
    }
    ProximityGraph::from_pairs(dist, GraphKind::Mst, GraphParams::default(), tree)
}

/// Relative neighborhood graph: `(i, j)` survives unless some third point is
/// strictly closer to both endpoints than they are to each other.
pub fn build_rng(dist: &DistanceMatrix) -> Result<ProximityGraph> {
    let n = dist.len();
    if n < 2 {
        return Err(Error::InvalidParameter(
            "RNG needs at least 2 points".into(),
        ));
    }
    let pairs = empty_region_pairs(n, |i, j| {
        let dij = dist.get(i, j);
        let limit = dij * (1.0 - BOUNDARY_RTOL);
        !(0..n).any(|m| m != i && m != j && dist.get(i, m).max(dist.get(j, m)) < limit)
    });
    Ok(ProximityGraph::from_pairs(
        dist,
        GraphKind::Rng,
        GraphParams::default(),
        pairs,
    ))
}

/// Gabriel graph: `(i, j)` survives unless some third point lies in the
/// closed ball having `ij` as diameter. Points coinciding with an endpoint
/// are ignored.
pub fn build_gabriel(dist: &DistanceMatrix) -> Result<ProximityGraph> {
    let n = dist.len();
    if n < 2 {
        return Err(Error::InvalidParameter(
            "Gabriel graph needs at least 2 points".into(),
        ));
    }
    let pairs = empty_region_pairs(n, |i, j| {
        let dij = dist.get(i, j);
        let limit = dij * dij * (1.0 + BOUNDARY_RTOL);
        !(0..n).any(|m| {
            let (a, b) = (dist.get(i, m), dist.get(j, m));
            m != i && m != j && a > 0.0 && b > 0.0 && a * a + b * b <= limit
        })
    });
    Ok(ProximityGraph::from_pairs(
        dist,
        GraphKind::Gabriel,
        GraphParams::default(),
        pairs,
    ))
}

fn empty_region_pairs(n: usize, keep: impl Fn(usize, usize) -> bool + Sync) -> Vec<(usize, usize)> {
    (0..n)
        .into_par_iter()
        .flat_map_iter(|i| {
            let keep = &keep;
            ((i + 1)..n)
                .filter(move |&j| keep(i, j))
                .map(move |j| (i, j))
        })
        .collect()
}

/// 2-D Delaunay triangulation edges, weighted by Euclidean distance.
///
/// Exactly cocircular quadrilaterals are resolved toward the diagonal whose
/// sorted `(i, j)` pair is lexicographically smaller. Coincident points are
/// joined to their first occurrence by a zero-weight edge.
pub fn build_delaunay(dataset: &Dataset) -> Result<ProximityGraph> {
    if dataset.dim() != 2 {
        return Err(Error::UnsupportedDimension {
            expected: 2,
            found: dataset.dim(),
        });
    }
    let n = dataset.len();
    if n < 3 {
        return Err(Error::DegenerateInput(format!(
            "Delaunay triangulation needs at least 3 points, got {n}"
        )));
    }

    let mut dt: DelaunayTriangulation<Point2<f64>> = DelaunayTriangulation::new();
    // spade vertex index -> first dataset node at that position
    let mut owner: Vec<usize> = Vec::with_capacity(n);
    let mut duplicates = Vec::new();
    for (i, p) in dataset.points().enumerate() {
        let handle = dt
            .insert(Point2::new(p[0], p[1]))
            .map_err(|e| Error::DegenerateInput(format!("point {i}: {e:?}")))?;
        let idx = handle.index();
        if idx == owner.len() {
            owner.push(i);
        } else {
            duplicates.push((owner[idx], i));
        }
    }
    if dt.num_inner_faces() == 0 {
        return Err(Error::DegenerateInput("all points are collinear".into()));
    }

    let mut triangles: Vec<[usize; 3]> = dt
        .inner_faces()
        .map(|f| f.vertices().map(|v| owner[v.fix().index()]))
        .collect();
    canonicalize_cocircular(dataset, &mut triangles);

    let mut pairs: Vec<(usize, usize)> = triangles
        .iter()
        .flat_map(|t| [(t[0], t[1]), (t[1], t[2]), (t[0], t[2])])
        .collect();
    pairs.extend(duplicates);

    let metric = Metric::Euclidean;
    let edges = pairs
        .into_iter()
        .map(|(a, b)| (a, b, metric.distance(dataset.point(a), dataset.point(b))));
    ProximityGraph::from_edges(n, GraphKind::Delaunay, GraphParams::default(), edges)
}

fn coord(ds: &Dataset, i: usize) -> robust::Coord<f64> {
    let p = ds.point(i);
    robust::Coord { x: p[0], y: p[1] }
}

fn sorted_pair(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

/// Flips every interior edge whose two triangles are exactly cocircular and
/// whose opposite diagonal sorts lower. Each flip strictly lowers the sorted
/// edge list, so the loop terminates.
fn canonicalize_cocircular(ds: &Dataset, triangles: &mut [[usize; 3]]) {
    loop {
        let mut by_edge: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        for (t, tri) in triangles.iter().enumerate() {
            for (a, b) in [(tri[0], tri[1]), (tri[1], tri[2]), (tri[2], tri[0])] {
                by_edge.entry(sorted_pair(a, b)).or_default().push(t);
            }
        }
        let mut shared: Vec<_> = by_edge
            .into_iter()
            .filter(|(_, ts)| ts.len() == 2)
            .collect();
        shared.sort_unstable_by_key(|(e, _)| *e);

        let mut flipped = false;
        for ((a, b), ts) in shared {
            let apex = |t: usize| {
                triangles[t]
                    .iter()
                    .copied()
                    .find(|&v| v != a && v != b)
                    .expect("triangle has a third vertex")
            };
            let (c, d) = (apex(ts[0]), apex(ts[1]));
            if sorted_pair(c, d) >= (a, b) {
                continue;
            }
            // orient (a, b, c) counter-clockwise before the incircle test
            let (pa, pb, pc) = (coord(ds, a), coord(ds, b), coord(ds, c));
            let ccw = robust::orient2d(pa, pb, pc) > 0.0;
            let inc = if ccw {
                robust::incircle(pa, pb, pc, coord(ds, d))
            } else {
                robust::incircle(pb, pa, pc, coord(ds, d))
            };
            if inc != 0.0 {
                continue;
            }
            triangles[ts[0]] = [a, c, d];
            triangles[ts[1]] = [b, c, d];
            flipped = true;
            break;
        }
        if !flipped {
            return;
        }
    }
}
