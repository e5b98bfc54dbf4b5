//! Agreement between a clustering and ground truth, and decision-graph
//! separability.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nnd::{DecisionPoint, Ranking};

fn comb2(n: usize) -> f64 {
    let n = n as f64;
    n * (n - 1.0) / 2.0
}

fn check_lengths<A, B>(a: &[A], b: &[B]) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    if a.len() < 2 {
        return Err(Error::InvalidParameter(
            "partition comparison needs at least 2 items".into(),
        ));
    }
    Ok(())
}

struct Counts {
    joint: HashMap<(usize, usize), usize>,
    left: Vec<usize>,
    right: Vec<usize>,
}

fn dense<T: Eq + Hash + Clone>(labels: &[T]) -> (Vec<usize>, usize) {
    let mut ids = HashMap::new();
    let out = labels
        .iter()
        .map(|l| {
            let next = ids.len();
            *ids.entry(l.clone()).or_insert(next)
        })
        .collect();
    (out, ids.len())
}

fn counts<A: Eq + Hash + Clone, B: Eq + Hash + Clone>(a: &[A], b: &[B]) -> Counts {
    let (a, na) = dense(a);
    let (b, nb) = dense(b);
    let mut joint = HashMap::new();
    let mut left = vec![0; na];
    let mut right = vec![0; nb];
    for (&x, &y) in a.iter().zip(&b) {
        *joint.entry((x, y)).or_insert(0) += 1;
        left[x] += 1;
        right[y] += 1;
    }
    Counts { joint, left, right }
}

/// Adjusted Rand index of two labelings of the same items.
///
/// Returns 1.0 when the chance-corrected denominator vanishes, which only
/// happens when both partitions are identical (all-in-one or all singletons).
pub fn adjusted_rand_index<A, B>(labels_a: &[A], labels_b: &[B]) -> Result<f64>
where
    A: Eq + Hash + Clone,
    B: Eq + Hash + Clone,
{
    check_lengths(labels_a, labels_b)?;
    let c = counts(labels_a, labels_b);
    let index: f64 = c.joint.values().map(|&v| comb2(v)).sum();
    let sum_a: f64 = c.left.iter().map(|&v| comb2(v)).sum();
    let sum_b: f64 = c.right.iter().map(|&v| comb2(v)).sum();
    let total = comb2(labels_a.len());
    let expected = sum_a * sum_b / total;
    let max_index = 0.5 * (sum_a + sum_b);
    let denom = max_index - expected;
    if denom == 0.0 {
        return Ok(1.0);
    }
    Ok((index - expected) / denom)
}

/// Normalized mutual information with arithmetic-mean normalization.
pub fn normalized_mutual_info<A, B>(labels_a: &[A], labels_b: &[B]) -> Result<f64>
where
    A: Eq + Hash + Clone,
    B: Eq + Hash + Clone,
{
    check_lengths(labels_a, labels_b)?;
    let c = counts(labels_a, labels_b);
    let n = labels_a.len() as f64;
    let entropy = |v: &[usize]| -> f64 {
        v.iter()
            .filter(|&&x| x > 0)
            .map(|&x| {
                let p = x as f64 / n;
                -p * p.ln()
            })
            .sum()
    };
    let (ha, hb) = (entropy(&c.left), entropy(&c.right));
    if ha == 0.0 && hb == 0.0 {
        return Ok(1.0);
    }
    let mi: f64 = c
        .joint
        .iter()
        .map(|(&(x, y), &nij)| {
            let nij = nij as f64;
            nij / n * (n * nij / (c.left[x] as f64 * c.right[y] as f64)).ln()
        })
        .sum();
    Ok((mi / (0.5 * (ha + hb))).clamp(0.0, 1.0))
}

/// True-label by found-cluster count table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Contingency {
    /// Row keys, ascending.
    pub true_labels: Vec<i64>,
    /// Column keys, ascending.
    pub clusters: Vec<usize>,
    pub counts: Vec<Vec<usize>>,
}

impl Contingency {
    pub fn new(truth: &[i64], found: &[usize]) -> Result<Self> {
        if truth.len() != found.len() {
            return Err(Error::LengthMismatch {
                left: truth.len(),
                right: found.len(),
            });
        }
        let rows: Vec<i64> = truth
            .iter()
            .copied()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let cols: Vec<usize> = found
            .iter()
            .copied()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let row_of: BTreeMap<i64, usize> = rows.iter().enumerate().map(|(i, &l)| (l, i)).collect();
        let col_of: BTreeMap<usize, usize> =
            cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let mut counts = vec![vec![0; cols.len()]; rows.len()];
        for (t, f) in truth.iter().zip(found) {
            counts[row_of[t]][col_of[f]] += 1;
        }
        Ok(Contingency {
            true_labels: rows,
            clusters: cols,
            counts,
        })
    }

    pub fn row_sums(&self) -> Vec<usize> {
        self.counts.iter().map(|r| r.iter().sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<usize> {
        (0..self.clusters.len())
            .map(|c| self.counts.iter().map(|r| r[c]).sum())
            .collect()
    }
}

/// Gap between the weakest selected and the strongest unselected non-root
/// score, as a fraction of the largest non-root score. Clamped at 0.
pub fn popout_margin(dg: &[DecisionPoint], selected: &BTreeSet<usize>) -> f64 {
    popout_margin_with(dg, selected, Ranking::Product)
}

pub fn popout_margin_with(
    dg: &[DecisionPoint],
    selected: &BTreeSet<usize>,
    ranking: Ranking,
) -> f64 {
    let mut min_selected = f64::INFINITY;
    let mut max_unselected: f64 = 0.0;
    let mut max_score: f64 = 0.0;
    let mut any_selected = false;
    for p in dg.iter().filter(|p| !p.is_root) {
        let s = p.score(ranking);
        max_score = max_score.max(s);
        if selected.contains(&p.node) {
            any_selected = true;
            min_selected = min_selected.min(s);
        } else {
            max_unselected = max_unselected.max(s);
        }
    }
    if !any_selected || max_score <= 0.0 {
        return 0.0;
    }
    ((min_selected - max_unselected) / max_score).max(0.0)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub ari: f64,
    pub nmi: f64,
    pub n_clusters_found: usize,
    pub n_clusters_true: usize,
    pub contingency: Contingency,
    pub popout_margin: f64,
}

impl EvalReport {
    pub fn new(truth: &[i64], found: &[usize], popout_margin: f64) -> Result<Self> {
        let contingency = Contingency::new(truth, found)?;
        Ok(EvalReport {
            ari: adjusted_rand_index(truth, found)?,
            nmi: normalized_mutual_info(truth, found)?,
            n_clusters_found: contingency.clusters.len(),
            n_clusters_true: contingency.true_labels.len(),
            contingency,
            popout_margin,
        })
    }

    /// One-line human summary.
    pub fn summary(&self) -> String {
        format!(
            "ari={:.4} nmi={:.4} clusters={} (true {}) margin={:.3}",
            self.ari, self.nmi, self.n_clusters_found, self.n_clusters_true, self.popout_margin
        )
    }
}
