//! All-pairs shortest-path (graph) distances over a sparse proximity graph.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::ProximityGraph;

/// Dense `N x N` shortest-path distances. Pairs in different connected
/// components are `f64::INFINITY`.
#[derive(Clone, Debug, PartialEq)]
pub struct GraphDistances {
    n: usize,
    values: Vec<f64>,
    component_id: Vec<usize>,
    n_components: usize,
}

impl GraphDistances {
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.n..(i + 1) * self.n]
    }

    pub fn component_id(&self) -> &[usize] {
        &self.component_id
    }

    pub fn n_components(&self) -> usize {
        self.n_components
    }

    /// Sizes of each component, indexed by component id.
    pub fn component_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.n_components];
        for &c in &self.component_id {
            sizes[c] += 1;
        }
        sizes
    }

    /// Mean over all finite off-diagonal entries, if there are any.
    pub fn mean_finite(&self) -> Option<f64> {
        let (sum, count) = (0..self.n)
            .flat_map(|i| (0..self.n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| self.get(i, j))
            .filter(|d| d.is_finite())
            .fold((0.0, 0usize), |(s, c), d| (s + d, c + 1));
        (count > 0).then(|| sum / count as f64)
    }

    /// Wraps a precomputed matrix, deriving components from the finiteness
    /// pattern. Used when the input distances are themselves the graph
    /// distances of a complete graph.
    pub fn from_dense(n: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != n * n {
            return Err(Error::LengthMismatch {
                left: n * n,
                right: values.len(),
            });
        }
        let mut component_id = vec![usize::MAX; n];
        let mut next = 0;
        for i in 0..n {
            if component_id[i] != usize::MAX {
                continue;
            }
            for j in i..n {
                if values[i * n + j].is_finite() {
                    component_id[j] = next;
                }
            }
            next += 1;
        }
        Ok(GraphDistances {
            n,
            values,
            component_id,
            n_components: next,
        })
    }

    /// Rows as nested vectors, infinities included.
    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.values
            .chunks(self.n.max(1))
            .map(<[f64]>::to_vec)
            .collect()
    }
}

/// Connected components, labelled `0..n_components` in order of each
/// component's smallest node id.
pub fn components(graph: &ProximityGraph) -> (Vec<usize>, usize) {
    let adj = graph.adjacency();
    let n = graph.n_nodes();
    let mut label = vec![usize::MAX; n];
    let mut next = 0;
    let mut queue = VecDeque::new();
    for start in 0..n {
        if label[start] != usize::MAX {
            continue;
        }
        label[start] = next;
        queue.push_back(start);
        while let Some(u) = queue.pop_front() {
            for &(v, _) in &adj[u] {
                if label[v] == usize::MAX {
                    label[v] = next;
                    queue.push_back(v);
                }
            }
        }
        next += 1;
    }
    (label, next)
}

#[derive(Clone, Copy, PartialEq)]
struct Frontier {
    dist: f64,
    node: usize,
}

impl Eq for Frontier {}

impl Ord for Frontier {
    // min-heap on (dist, node)
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for Frontier {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn dijkstra(adj: &[Vec<(usize, f64)>], source: usize, out: &mut [f64]) {
    out.fill(f64::INFINITY);
    out[source] = 0.0;
    let mut heap = BinaryHeap::new();
    heap.push(Frontier {
        dist: 0.0,
        node: source,
    });
    while let Some(Frontier { dist, node }) = heap.pop() {
        if dist > out[node] {
            continue;
        }
        for &(next, w) in &adj[node] {
            let candidate = dist + w;
            if candidate < out[next] {
                out[next] = candidate;
                heap.push(Frontier {
                    dist: candidate,
                    node: next,
                });
            }
        }
    }
}

/// Exact shortest-path distances by one Dijkstra run per source.
pub fn shortest_paths(graph: &ProximityGraph) -> Result<GraphDistances> {
    if let Some(e) = graph.edges().iter().find(|e| !e.w.is_finite() || e.w < 0.0) {
        return Err(Error::InvalidWeight {
            i: e.i,
            j: e.j,
            weight: e.w,
        });
    }
    let n = graph.n_nodes();
    let adj = graph.adjacency();
    let mut values = vec![0.0; n * n];
    values
        .par_chunks_mut(n.max(1))
        .enumerate()
        .for_each(|(source, row)| dijkstra(&adj, source, row));

    // float paths can differ in the last bit between the two directions
    for i in 0..n {
        for j in (i + 1)..n {
            let m = values[i * n + j].min(values[j * n + i]);
            values[i * n + j] = m;
            values[j * n + i] = m;
        }
    }
    let (component_id, n_components) = components(graph);
    Ok(GraphDistances {
        n,
        values,
        component_id,
        n_components,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{GraphKind, GraphParams};

    fn graph(n: usize, edges: &[(usize, usize, f64)]) -> ProximityGraph {
        ProximityGraph::from_edges(
            n,
            GraphKind::Knn,
            GraphParams::default(),
            edges.iter().copied(),
        )
        .unwrap()
    }

    #[test]
    fn path_graph() {
        let d = shortest_paths(&graph(3, &[(0, 1, 1.0), (1, 2, 2.0)])).unwrap();
        assert_eq!(d.get(0, 2), 3.0);
        assert_eq!(d.get(2, 0), 3.0);
        assert_eq!(d.get(1, 1), 0.0);
        assert_eq!(d.n_components(), 1);
    }

    #[test]
    fn disjoint_edges_are_infinitely_far() {
        let d = shortest_paths(&graph(4, &[(0, 1, 1.0), (2, 3, 1.0)])).unwrap();
        assert_eq!(d.get(0, 2), f64::INFINITY);
        assert_eq!(d.n_components(), 2);
        assert_eq!(d.component_id(), &[0, 0, 1, 1]);
        assert_eq!(d.component_sizes(), vec![2, 2]);
    }

    #[test]
    fn edgeless_graph() {
        let g = graph(5, &[]);
        let (ids, count) = components(&g);
        assert_eq!(count, 5);
        assert_eq!(ids, vec![0, 1, 2, 3, 4]);
        let d = shortest_paths(&g).unwrap();
        assert_eq!(d.mean_finite(), None);
    }

    #[test]
    fn component_labels_follow_smallest_member() {
        let g = graph(5, &[(3, 4, 1.0), (1, 4, 1.0), (0, 2, 1.0)]);
        assert_eq!(components(&g), (vec![0, 1, 0, 1, 1], 2));
    }

    #[test]
    fn shortcut_beats_direct_edge() {
        let d = shortest_paths(&graph(3, &[(0, 1, 1.0), (1, 2, 1.0), (0, 2, 5.0)])).unwrap();
        assert_eq!(d.get(0, 2), 2.0);
    }

    #[test]
    fn rejects_negative_and_nan_weights() {
        assert!(matches!(
            shortest_paths(&graph(2, &[(0, 1, -1.0)])),
            Err(Error::InvalidWeight { .. })
        ));
        assert!(shortest_paths(&graph(2, &[(0, 1, f64::NAN)])).is_err());
    }

    #[test]
    fn from_dense_components() {
        let inf = f64::INFINITY;
        let d = GraphDistances::from_dense(3, vec![0.0, inf, 1.0, inf, 0.0, inf, 1.0, inf, 0.0])
            .unwrap();
        assert_eq!(d.component_id(), &[0, 1, 0]);
        assert_eq!(d.n_components(), 2);
    }
}
