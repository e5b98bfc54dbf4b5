#![allow(dead_code)]

use intree::graph::{GraphKind, GraphParams};
use intree::{Dataset, DistanceMatrix, Metric, ProximityGraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_points(seed: u64, n: usize, dim: usize) -> Dataset {
    let mut r = rng(seed);
    let rows = (0..n)
        .map(|_| (0..dim).map(|_| r.gen_range(0.0..100.0)).collect())
        .collect();
    Dataset::new(format!("random-{seed}"), rows, None).unwrap()
}

pub fn dist_of(ds: &Dataset) -> DistanceMatrix {
    intree::pairwise_distance(ds, Metric::Euclidean)
}

/// Random sparse weighted graph, possibly disconnected.
pub fn random_graph(seed: u64, n: usize, density: f64) -> ProximityGraph {
    let mut r = rng(seed);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if r.gen_bool(density) {
                edges.push((i, j, r.gen_range(0.0..10.0)));
            }
        }
    }
    ProximityGraph::from_edges(n, GraphKind::Knn, GraphParams::default(), edges).unwrap()
}

pub fn floyd_warshall(g: &ProximityGraph) -> Vec<Vec<f64>> {
    let n = g.n_nodes();
    let mut d = vec![vec![f64::INFINITY; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0.0;
    }
    for e in g.edges() {
        d[e.i][e.j] = d[e.i][e.j].min(e.w);
        d[e.j][e.i] = d[e.j][e.i].min(e.w);
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    d
}

pub fn naive_potential(d: &[Vec<f64>], sigma: f64) -> Vec<f64> {
    let n = d.len();
    let mut p = vec![0.0; n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                p[i] -= (-(d[i][j] * d[i][j]) / sigma).exp();
            }
        }
    }
    p
}

/// Nearest lower-potential node, equal potentials ordered by index, distance
/// ties to the lowest index, unreachable nodes never chosen.
pub fn naive_parents(d: &[Vec<f64>], p: &[f64]) -> Vec<usize> {
    let n = d.len();
    let mut parent: Vec<usize> = (0..n).collect();
    for i in 0..n {
        let mut best = f64::INFINITY;
        for j in 0..n {
            let lower = p[j] < p[i] || (p[j] == p[i] && j < i);
            if j != i && lower && d[i][j] < best {
                best = d[i][j];
                parent[i] = j;
            }
        }
    }
    parent
}

/// Follows parent pointers one step at a time.
pub fn naive_roots(parent: &[usize]) -> Vec<usize> {
    parent
        .iter()
        .map(|&start| {
            let mut v = start;
            let mut steps = 0;
            while parent[v] != v {
                v = parent[v];
                steps += 1;
                assert!(steps <= parent.len(), "cycle");
            }
            v
        })
        .collect()
}

pub fn tree_height(parent: &[usize]) -> usize {
    (0..parent.len())
        .map(|mut v| {
            let mut h = 0;
            while parent[v] != v {
                v = parent[v];
                h += 1;
            }
            h
        })
        .max()
        .unwrap_or(0)
}

/// Minimum spanning forest weight by trying every edge subset of size
/// `n - components`.
pub fn brute_force_msf_weight(n: usize, edges: &[(usize, usize, f64)], components: usize) -> f64 {
    let need = n - components;
    let mut best = f64::INFINITY;
    let mut chosen = Vec::with_capacity(need);
    fn find(p: &mut Vec<usize>, x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    fn rec(
        start: usize,
        need: usize,
        n: usize,
        edges: &[(usize, usize, f64)],
        chosen: &mut Vec<usize>,
        best: &mut f64,
    ) {
        if chosen.len() == need {
            let mut p: Vec<usize> = (0..n).collect();
            let mut w = 0.0;
            for &e in chosen.iter() {
                let (a, b, we) = edges[e];
                let (ra, rb) = (find(&mut p, a), find(&mut p, b));
                if ra == rb {
                    return;
                }
                p[ra] = rb;
                w += we;
            }
            if w < *best {
                *best = w;
            }
            return;
        }
        for e in start..edges.len() {
            if edges.len() - e < need - chosen.len() {
                break;
            }
            chosen.push(e);
            rec(e + 1, need, n, edges, chosen, best);
            chosen.pop();
        }
    }
    rec(0, need, n, edges, &mut chosen, &mut best);
    best
}

/// Delaunay edges from every empty circumcircle over all triples.
pub fn brute_delaunay_edges(ds: &Dataset) -> std::collections::BTreeSet<(usize, usize)> {
    let n = ds.len();
    let p = |i: usize| (ds.point(i)[0], ds.point(i)[1]);
    let mut out = std::collections::BTreeSet::new();
    for a in 0..n {
        for b in (a + 1)..n {
            for c in (b + 1)..n {
                let (ax, ay) = p(a);
                let (bx, by) = p(b);
                let (cx, cy) = p(c);
                let det = 2.0 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by));
                if det.abs() < 1e-12 {
                    continue;
                }
                let a2 = ax * ax + ay * ay;
                let b2 = bx * bx + by * by;
                let c2 = cx * cx + cy * cy;
                let ux = (a2 * (by - cy) + b2 * (cy - ay) + c2 * (ay - by)) / det;
                let uy = (a2 * (cx - bx) + b2 * (ax - cx) + c2 * (bx - ax)) / det;
                let r2 = (ax - ux).powi(2) + (ay - uy).powi(2);
                let empty = (0..n).filter(|&m| m != a && m != b && m != c).all(|m| {
                    let (mx, my) = p(m);
                    (mx - ux).powi(2) + (my - uy).powi(2) > r2
                });
                if empty {
                    out.extend([(a, b), (a, c), (b, c)]);
                }
            }
        }
    }
    out
}

pub fn brute_knn_edges(d: &DistanceMatrix, k: usize) -> std::collections::BTreeSet<(usize, usize)> {
    let n = d.len();
    let mut out = std::collections::BTreeSet::new();
    for i in 0..n {
        let mut others: Vec<usize> = (0..n).filter(|&j| j != i).collect();
        others.sort_by(|&a, &b| d.get(i, a).total_cmp(&d.get(i, b)).then(a.cmp(&b)));
        for &j in &others[..k] {
            out.insert((i.min(j), i.max(j)));
        }
    }
    out
}
