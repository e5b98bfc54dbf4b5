use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use intree::graph::GraphKind;
use intree::pipeline::CutMode;
use intree::{CsvOptions, Dataset, Delimiter, DescentRule, Metric, PipelineConfig, Ranking, Sigma};

#[derive(Debug, Parser)]
#[command(
    name = "intree",
    version,
    about = "In-tree clustering on proximity graphs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Cluster a CSV file and write the result as JSON.
    Cluster {
        #[command(flatten)]
        run: RunArgs,
        /// Result file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the graph distance matrix as JSON, infinities as "inf".
        #[arg(long)]
        dump_distances: Option<PathBuf>,
    },
    /// Build the neighborhood graph only and export it as JSON.
    Graph {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Serve the decision graph and cutting operations over HTTP on loopback.
    Serve {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, default_value_t = 8080)]
        port: u16,
    },
    /// Generate synthetic data.
    Gen {
        #[command(subcommand)]
        what: Generator,
    },
}

#[derive(Debug, Subcommand)]
pub enum Generator {
    /// Two labelled Gaussian blobs in the plane.
    TwoGaussians {
        /// Points per cluster.
        #[arg(long, default_value_t = 100)]
        n: usize,
        /// One value for isotropic blobs, or one per axis.
        #[arg(long, value_delimiter = ',', default_value = "1.5,6")]
        stddev: Vec<f64>,
        /// Both centers, flattened: x1,y1,x2,y2.
        #[arg(long, value_delimiter = ',', default_value = "0,0,9,0")]
        centers: Vec<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum DelimiterArg {
    Comma,
    Whitespace,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum RankingArg {
    Product,
    Delta,
}

/// Input and pipeline options shared by every pipeline subcommand.
#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Zero-based column holding integer ground-truth labels.
    #[arg(long)]
    pub label_col: Option<usize>,
    /// Skip the first row.
    #[arg(long)]
    pub header: bool,
    #[arg(long, value_enum, default_value = "comma")]
    pub delimiter: DelimiterArg,
    /// knn, eps, mst, delaunay, rng or gabriel.
    #[arg(long, default_value = "knn")]
    pub graph: GraphKind,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub eps: Option<f64>,
    /// Kernel width.
    #[arg(
        long,
        required_unless_present = "auto_sigma",
        conflicts_with = "auto_sigma"
    )]
    pub sigma: Option<f64>,
    /// Use half the squared mean graph distance as the kernel width.
    #[arg(long)]
    pub auto_sigma: bool,
    /// Cut automatically down to this many clusters.
    #[arg(long)]
    pub clusters: Option<usize>,
    #[arg(long, default_value = "euclidean")]
    pub metric: Metric,
    /// Recorded in the output for bookkeeping; runs are deterministic.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum, default_value = "product")]
    pub ranking: RankingArg,
    /// Only strictly lower potentials are descent targets.
    #[arg(long)]
    pub strict_descent: bool,
}

impl RunArgs {
    pub fn load(&self) -> Result<Dataset> {
        let opts = CsvOptions {
            delimiter: match self.delimiter {
                DelimiterArg::Comma => Delimiter::Comma,
                DelimiterArg::Whitespace => Delimiter::Whitespace,
            },
            header: self.header,
            label_col: self.label_col,
        };
        intree::load_csv(&self.input, &opts)
            .with_context(|| format!("reading {}", self.input.display()))
    }

    pub fn config(&self) -> Result<PipelineConfig> {
        let sigma = match (self.sigma, self.auto_sigma) {
            (Some(s), false) => Sigma::Fixed(s),
            (None, true) => Sigma::MeanDistance,
            _ => bail!("give either --sigma or --auto-sigma"),
        };
        let config = PipelineConfig {
            graph: self.graph,
            k: self.k,
            eps: self.eps,
            sigma,
            cut_mode: if self.clusters.is_some() {
                CutMode::Auto
            } else {
                CutMode::None
            },
            n_clusters: self.clusters,
            seed: self.seed,
            metric: self.metric,
            ranking: match self.ranking {
                RankingArg::Product => Ranking::Product,
                RankingArg::Delta => Ranking::Delta,
            },
            descent: if self.strict_descent {
                DescentRule::Strict
            } else {
                DescentRule::IndexTieBreak
            },
        };
        config.validate()?;
        Ok(config)
    }
}
