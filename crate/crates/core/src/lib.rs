//! In-tree clustering on proximity graphs.
//!
//! The pipeline has six steps:
//!
//! 1. build a neighborhood graph over the points ([`graph`]): k-NN, ε-NN,
//!    minimum spanning tree, Delaunay, relative neighborhood or Gabriel;
//! 2. compute shortest-path distances on it ([`paths`]), infinite between
//!    components;
//! 3. give every node a potential from a Gaussian kernel over squared graph
//!    distances ([`nnd::compute_potential`]);
//! 4. let every node descend to its nearest lower-potential neighbor, which
//!    yields one in-tree per component ([`nnd::build_in_tree`]);
//! 5. cut the few edges that link clusters, picked on the decision graph of
//!    `(|P|, L)` either by a rectangle or automatically ([`nnd::rect_select`],
//!    [`nnd::auto_cut`]);
//! 6. find every node's root by pointer jumping ([`nnd::find_roots`]).
//!
//! ```
//! use intree::{gen_two_gaussians, run_pipeline, PipelineConfig, TwoGaussians};
//!
//! let data = gen_two_gaussians(&TwoGaussians::reference(7)).unwrap();
//! let config = PipelineConfig::knn(5, 20.0).with_clusters(2);
//! let run = run_pipeline(&config, &data).unwrap();
//!
//! assert_eq!(run.assignment.n_clusters, 2);
//! assert!(run.report.unwrap().ari > 0.95);
//! ```
//!
//! A longer walk-through lives in the `book/` directory of the repository.

pub mod dataset;
pub mod error;
pub mod eval;
pub mod graph;
pub mod nnd;
pub mod paths;
pub mod pipeline;

pub use dataset::{
    gen_two_gaussians, load_csv, pairwise_distance, CsvOptions, Dataset, Delimiter, DistanceMatrix,
    Metric, TwoGaussians,
};
pub use error::{Error, Result, Step};
pub use eval::{adjusted_rand_index, popout_margin, EvalReport};
pub use graph::{
    build_delaunay, build_eps_nn, build_gabriel, build_knn, build_mst, build_rng, GraphKind,
    ProximityGraph,
};
pub use nnd::{
    auto_cut, build_in_tree, compute_potential, cut_edges, decision_graph, find_roots, rect_select,
    ClusterAssignment, DecisionPoint, DescentRule, InTreeForest, Potential, Ranking, Rect,
};
pub use paths::{components, shortest_paths, GraphDistances};
pub use pipeline::{run_pipeline, CutMode, PipelineConfig, PipelineResult, Session, Sigma};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/graphs.md")]
    mod graphs {}
    #[doc = include_str!("../../../book/src/potential.md")]
    mod potential {}
    #[doc = include_str!("../../../book/src/descent.md")]
    mod descent {}
    #[doc = include_str!("../../../book/src/decision-graph.md")]
    mod decision_graph {}
    #[doc = include_str!("../../../book/src/roots.md")]
    mod roots {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
