//! End-to-end runs and the mutable interactive session built on them.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::dataset::{pairwise_distance, Dataset, Metric};
use crate::error::{Error, Result, Step, StepExt};
use crate::eval::{popout_margin_with, EvalReport};
use crate::graph::{
    build_delaunay, build_eps_nn, build_gabriel, build_knn, build_mst, build_rng, GraphKind,
    GraphParams, ProximityGraph,
};
use crate::nnd::{
    auto_cut_with, build_in_tree_with, compute_potential, cut_edges, decision_graph, default_sigma,
    find_roots, rect_select, ClusterAssignment, DecisionPoint, DescentRule, InTreeForest, Ranking,
    Rect,
};
use crate::paths::{shortest_paths, GraphDistances};

/// Kernel width choice.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sigma {
    Fixed(f64),
    /// Half the squared mean finite graph distance.
    MeanDistance,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CutMode {
    Auto,
    #[default]
    None,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub graph: GraphKind,
    pub k: Option<usize>,
    pub eps: Option<f64>,
    pub sigma: Sigma,
    pub cut_mode: CutMode,
    pub n_clusters: Option<usize>,
    pub seed: Option<u64>,
    pub metric: Metric,
    pub ranking: Ranking,
    pub descent: DescentRule,
}

impl PipelineConfig {
    pub fn new(graph: GraphKind, sigma: f64) -> Self {
        PipelineConfig {
            graph,
            k: None,
            eps: None,
            sigma: Sigma::Fixed(sigma),
            cut_mode: CutMode::None,
            n_clusters: None,
            seed: None,
            metric: Metric::Euclidean,
            ranking: Ranking::Product,
            descent: DescentRule::IndexTieBreak,
        }
    }

    pub fn knn(k: usize, sigma: f64) -> Self {
        PipelineConfig {
            k: Some(k),
            ..Self::new(GraphKind::Knn, sigma)
        }
    }

    pub fn eps_nn(eps: f64, sigma: f64) -> Self {
        PipelineConfig {
            eps: Some(eps),
            ..Self::new(GraphKind::EpsNn, sigma)
        }
    }

    /// Cut automatically down to `n_clusters`.
    pub fn with_clusters(mut self, n_clusters: usize) -> Self {
        self.cut_mode = CutMode::Auto;
        self.n_clusters = Some(n_clusters);
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParameter(m.to_owned()));
        match (self.graph, self.k, self.eps) {
            (GraphKind::Knn, None, _) => return bad("the knn graph requires k"),
            (GraphKind::EpsNn, _, None) => return bad("the eps_nn graph requires eps"),
            (GraphKind::Knn, _, Some(_)) => return bad("eps only applies to the eps_nn graph"),
            (GraphKind::EpsNn, Some(_), _) => return bad("k only applies to the knn graph"),
            (g, k, e)
                if !matches!(g, GraphKind::Knn | GraphKind::EpsNn)
                    && (k.is_some() || e.is_some()) =>
            {
                return bad("k and eps only apply to the knn and eps_nn graphs")
            }
            _ => {}
        }
        if self.cut_mode == CutMode::Auto && self.n_clusters.is_none() {
            return bad("automatic cutting requires a cluster count");
        }
        if let Sigma::Fixed(s) = self.sigma {
            if !(s > 0.0 && s.is_finite()) {
                return bad("sigma must be positive and finite");
            }
        }
        Ok(())
    }
}

/// Step 1: builds the configured neighborhood graph.
pub fn build_graph(config: &PipelineConfig, dataset: &Dataset) -> Result<ProximityGraph> {
    let dist = || pairwise_distance(dataset, config.metric);
    match config.graph {
        GraphKind::Knn => build_knn(&dist(), config.k.unwrap_or_default()),
        GraphKind::EpsNn => build_eps_nn(&dist(), config.eps.unwrap_or_default()),
        GraphKind::Mst => Ok(build_mst(&dist())),
        GraphKind::Rng => build_rng(&dist()),
        GraphKind::Gabriel => build_gabriel(&dist()),
        GraphKind::Delaunay => {
            if config.metric != Metric::Euclidean {
                return Err(Error::InvalidParameter(
                    "the Delaunay graph is only defined for the euclidean metric".into(),
                ));
            }
            build_delaunay(dataset)
        }
    }
}

/// Everything a run produces.
#[derive(Clone, Debug)]
pub struct PipelineResult {
    pub graph: ProximityGraph,
    pub distances: GraphDistances,
    /// The forest before any cut.
    pub fresh: InTreeForest,
    pub decision_graph: Vec<DecisionPoint>,
    pub cut_nodes: BTreeSet<usize>,
    /// The forest after cutting.
    pub forest: InTreeForest,
    pub assignment: ClusterAssignment,
    pub report: Option<EvalReport>,
}

/// Runs steps 1-6.
pub fn run_pipeline(config: &PipelineConfig, dataset: &Dataset) -> Result<PipelineResult> {
    run_pipeline_with_progress(config, dataset, |_| {})
}

/// Builds the uncut forest (steps 1-4), reporting each step as it starts.
pub fn build_forest(
    config: &PipelineConfig,
    dataset: &Dataset,
    mut progress: impl FnMut(Step),
) -> Result<(ProximityGraph, GraphDistances, InTreeForest)> {
    config.validate()?;
    progress(Step::Graph);
    let graph = build_graph(config, dataset).at_step(Step::Graph)?;
    progress(Step::GraphDistance);
    let distances = shortest_paths(&graph).at_step(Step::GraphDistance)?;
    progress(Step::Potential);
    let sigma = match config.sigma {
        Sigma::Fixed(s) => s,
        Sigma::MeanDistance => default_sigma(&distances)
            .ok_or_else(|| {
                Error::InvalidParameter("graph has no finite off-diagonal distances".into())
            })
            .at_step(Step::Potential)?,
    };
    let potential = compute_potential(&distances, sigma).at_step(Step::Potential)?;
    progress(Step::InTree);
    let fresh = build_in_tree_with(&distances, &potential, config.descent).at_step(Step::InTree)?;
    Ok((graph, distances, fresh))
}

pub fn run_pipeline_with_progress(
    config: &PipelineConfig,
    dataset: &Dataset,
    mut progress: impl FnMut(Step),
) -> Result<PipelineResult> {
    let (graph, distances, fresh) = build_forest(config, dataset, &mut progress)?;
    let dg = decision_graph(&fresh);

    progress(Step::CutEdges);
    let cut_nodes = match (config.cut_mode, config.n_clusters) {
        (CutMode::Auto, Some(c)) => {
            auto_cut_with(&fresh, c, config.ranking).at_step(Step::CutEdges)?
        }
        _ => BTreeSet::new(),
    };
    let forest = cut_edges(&fresh, &cut_nodes);

    progress(Step::FindRoots);
    let assignment = find_roots(&forest).at_step(Step::FindRoots)?;

    let report = match dataset.labels() {
        Some(truth) if dataset.len() >= 2 => Some(EvalReport::new(
            truth,
            &assignment.cluster_id,
            popout_margin_with(&dg, &cut_nodes, config.ranking),
        )?),
        _ => None,
    };
    Ok(PipelineResult {
        graph,
        distances,
        fresh,
        decision_graph: dg,
        cut_nodes,
        forest,
        assignment,
        report,
    })
}

/// Export form of a forest and its clusters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ForestJson {
    pub parent: Vec<usize>,
    pub edge_len: Vec<f64>,
    #[serde(rename = "P")]
    pub potential: Vec<f64>,
    pub sigma: f64,
    pub clusters: Vec<usize>,
}

impl ForestJson {
    pub fn new(forest: &InTreeForest, assignment: &ClusterAssignment) -> Self {
        ForestJson {
            parent: forest.parent().to_vec(),
            edge_len: forest.edge_len().to_vec(),
            potential: forest.potential().values().to_vec(),
            sigma: forest.potential().sigma(),
            clusters: assignment.cluster_id.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GraphSummary {
    pub kind: GraphKind,
    pub params: GraphParams,
    pub n_edges: usize,
    pub n_components: usize,
}

/// The document written by `intree cluster --out`.
#[derive(Clone, Debug, Serialize)]
pub struct RunJson {
    pub dataset: String,
    pub n: usize,
    pub config: PipelineConfig,
    pub graph: GraphSummary,
    pub forest: ForestJson,
    pub cut_nodes: Vec<usize>,
    pub n_clusters: usize,
    pub jump_rounds: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<EvalReport>,
}

impl PipelineResult {
    pub fn to_json(&self, dataset: &Dataset, config: &PipelineConfig) -> RunJson {
        RunJson {
            dataset: dataset.name().to_owned(),
            n: dataset.len(),
            config: config.clone(),
            graph: GraphSummary {
                kind: self.graph.kind(),
                params: self.graph.params(),
                n_edges: self.graph.n_edges(),
                n_components: self.distances.n_components(),
            },
            forest: ForestJson::new(&self.forest, &self.assignment),
            cut_nodes: self.cut_nodes.iter().copied().collect(),
            n_clusters: self.assignment.n_clusters,
            jump_rounds: self.assignment.rounds,
            report: self.report.clone(),
        }
    }
}

/// A user action on the decision graph.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum CutOp {
    Auto { n_clusters: usize },
    Rect(Rect),
    Nodes { nodes: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CutRecord {
    pub op: CutOp,
    pub victims: Vec<usize>,
}

/// Interactive state: a fixed uncut forest plus a history of cuts.
///
/// The current forest is always the fresh one with every recorded victim
/// cut, and the assignment is recomputed after each change.
#[derive(Clone, Debug)]
pub struct Session {
    config: PipelineConfig,
    dataset: Dataset,
    graph: ProximityGraph,
    distances: GraphDistances,
    fresh: InTreeForest,
    decision_graph: Vec<DecisionPoint>,
    tree: InTreeForest,
    assignment: ClusterAssignment,
    history: Vec<CutRecord>,
}

impl Session {
    pub fn new(dataset: Dataset, config: PipelineConfig) -> Result<Self> {
        Self::with_progress(dataset, config, |_| {})
    }

    pub fn with_progress(
        dataset: Dataset,
        config: PipelineConfig,
        mut progress: impl FnMut(Step),
    ) -> Result<Self> {
        let (graph, distances, fresh) = build_forest(&config, &dataset, &mut progress)?;
        progress(Step::FindRoots);
        let assignment = find_roots(&fresh).at_step(Step::FindRoots)?;
        let mut session = Session {
            decision_graph: decision_graph(&fresh),
            tree: fresh.clone(),
            config,
            dataset,
            graph,
            distances,
            fresh,
            assignment,
            history: Vec::new(),
        };
        if let (CutMode::Auto, Some(c)) = (session.config.cut_mode, session.config.n_clusters) {
            session.apply(CutOp::Auto { n_clusters: c })?;
        }
        Ok(session)
    }

    pub fn config(&self) -> &PipelineConfig {
        &self.config
    }

    pub fn dataset(&self) -> &Dataset {
        &self.dataset
    }

    pub fn graph(&self) -> &ProximityGraph {
        &self.graph
    }

    pub fn distances(&self) -> &GraphDistances {
        &self.distances
    }

    pub fn fresh_forest(&self) -> &InTreeForest {
        &self.fresh
    }

    pub fn forest(&self) -> &InTreeForest {
        &self.tree
    }

    /// Decision graph of the uncut forest.
    pub fn decision_graph(&self) -> &[DecisionPoint] {
        &self.decision_graph
    }

    pub fn assignment(&self) -> &ClusterAssignment {
        &self.assignment
    }

    pub fn history(&self) -> &[CutRecord] {
        &self.history
    }

    /// Nodes whose out-edge is currently cut.
    pub fn cut_nodes(&self) -> BTreeSet<usize> {
        self.history
            .iter()
            .flat_map(|r| r.victims.iter().copied())
            .collect()
    }

    fn victims(&self, op: &CutOp) -> Result<Vec<usize>> {
        let found = match op {
            CutOp::Auto { n_clusters } => {
                auto_cut_with(&self.tree, *n_clusters, self.config.ranking)?
            }
            CutOp::Rect(rect) => {
                rect.validate()?;
                rect_select(&self.decision_graph, rect)
            }
            CutOp::Nodes { nodes } => {
                if let Some(bad) = nodes.iter().find(|&&v| v >= self.fresh.len()) {
                    return Err(Error::InvalidParameter(format!("node {bad} out of range")));
                }
                nodes
                    .iter()
                    .copied()
                    .filter(|&v| !self.fresh.is_root(v))
                    .collect()
            }
        };
        Ok(found.into_iter().collect())
    }

    /// Records and applies a cut. The history grows even when the cut
    /// selects nothing.
    pub fn apply(&mut self, op: CutOp) -> Result<&ClusterAssignment> {
        let victims = self.victims(&op).at_step(Step::CutEdges)?;
        self.history.push(CutRecord { op, victims });
        self.replay()?;
        Ok(&self.assignment)
    }

    pub fn cut_rect(&mut self, rect: Rect) -> Result<&ClusterAssignment> {
        self.apply(CutOp::Rect(rect))
    }

    pub fn cut_nodes_op(&mut self, nodes: Vec<usize>) -> Result<&ClusterAssignment> {
        self.apply(CutOp::Nodes { nodes })
    }

    /// Drops the latest cut. Returns `false` when there was nothing to undo.
    pub fn undo(&mut self) -> Result<bool> {
        if self.history.pop().is_none() {
            return Ok(false);
        }
        self.replay()?;
        Ok(true)
    }

    /// Back to the uncut forest with an empty history.
    pub fn reset(&mut self) -> Result<()> {
        self.history.clear();
        self.replay()
    }

    fn replay(&mut self) -> Result<()> {
        self.tree = cut_edges(&self.fresh, &self.cut_nodes());
        self.assignment = find_roots(&self.tree).at_step(Step::FindRoots)?;
        Ok(())
    }

    pub fn forest_json(&self) -> ForestJson {
        ForestJson::new(&self.tree, &self.assignment)
    }
}
