use std::fmt;

/// Errors produced anywhere in the clustering pipeline.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("input contains no data rows")]
    EmptyInput,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown metric `{0}`")]
    UnknownMetric(String),

    #[error("unsupported dimension: expected {expected}, found {found}")]
    UnsupportedDimension { expected: usize, found: usize },

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("edge ({i}, {j}) has invalid weight {weight}")]
    InvalidWeight { i: usize, j: usize, weight: f64 },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("requested {requested} clusters but the graph already has {components} components; cutting cannot merge components")]
    CannotMergeComponents { requested: usize, components: usize },

    #[error(
        "parent pointers did not converge after {rounds} jump rounds; the forest contains a cycle"
    )]
    CycleDetected { rounds: usize },

    #[error("step {step}: {inner}")]
    Stage { step: Step, inner: Box<Error> },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// The six stages of the in-tree pipeline, used to tag errors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Step {
    Graph = 1,
    GraphDistance = 2,
    Potential = 3,
    InTree = 4,
    CutEdges = 5,
    FindRoots = 6,
}

impl Step {
    pub fn number(self) -> u8 {
        self as u8
    }

    pub fn name(self) -> &'static str {
        match self {
            Step::Graph => "neighborhood graph",
            Step::GraphDistance => "graph distance",
            Step::Potential => "potential",
            Step::InTree => "in-tree",
            Step::CutEdges => "edge removal",
            Step::FindRoots => "root finding",
        }
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.number(), self.name())
    }
}

impl Error {
    pub(crate) fn at(self, step: Step) -> Error {
        Error::Stage {
            step,
            inner: Box::new(self),
        }
    }

    /// The pipeline step this error is attributed to, if any.
    pub fn step(&self) -> Option<Step> {
        match self {
            Error::Stage { step, .. } => Some(*step),
            _ => None,
        }
    }

    /// The underlying error with any step tags stripped.
    pub fn root_cause(&self) -> &Error {
        match self {
            Error::Stage { inner, .. } => inner.root_cause(),
            other => other,
        }
    }
}

pub(crate) trait StepExt<T> {
    fn at_step(self, step: Step) -> Result<T>;
}

impl<T> StepExt<T> for Result<T> {
    fn at_step(self, step: Step) -> Result<T> {
        self.map_err(|e| e.at(step))
    }
}
