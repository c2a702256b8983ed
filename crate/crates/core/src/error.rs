use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Broad classification used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Malformed input: bad matrix, unknown label, parse failure.
    Input,
    /// Well-formed query whose event or trajectory set is empty or ill-defined.
    Infeasible,
    /// Numerical breakdown of a solver.
    Numerical,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("chain has no states")]
    Empty,
    #[error("matrix is not square: {rows} rows but row {row} has {len} entries")]
    NonSquare { rows: usize, row: usize, len: usize },
    #[error("{labels} labels given for {states} states")]
    LabelCountMismatch { labels: usize, states: usize },
    #[error("negative transition probability {value} at ({row}, {col})")]
    NegativeEntry { row: usize, col: usize, value: f64 },
    #[error("non-finite transition probability at ({row}, {col})")]
    NonFiniteEntry { row: usize, col: usize },
    #[error("row {row} sums to {sum}, not 1")]
    RowSumViolation { row: usize, sum: f64 },
    #[error("duplicate state label {0:?}")]
    DuplicateLabel(String),
    #[error("unknown state {0:?}")]
    UnknownState(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("duplicate edge {src:?} -> {dst:?}")]
    DuplicateEdge { src: String, dst: String },

    #[error("chain is not irreducible")]
    NotIrreducible,
    #[error("a trajectory needs at least two states")]
    TrajectoryTooShort,
    #[error("destination revisited at interior position {position}")]
    DestinationRevisited { position: usize },
    #[error("trajectory has zero probability")]
    ZeroProbability,

    #[error("absorbing targets must differ, both are {0:?}")]
    TargetsEqual(String),
    #[error("absorption is not certain from state {state:?}")]
    AbsorptionNotCertain { state: String },
    #[error("destination unreachable from states {states:?}")]
    DestinationUnreachable { states: Vec<String> },
    #[error("singular linear system of dimension {dim}")]
    SingularSystem { dim: usize },
    #[error("state {source_state:?} cannot reach {destination:?}")]
    SourceCannotReachDestination { source_state: String, destination: String },
    #[error("from {source_state:?}, state {via:?} is reachable but cannot reach {destination:?}")]
    DestinationNotCertain {
        source_state: String,
        destination: String,
        via: String,
    },
    #[error("restriction to states reaching {destination:?} is not closed: {state:?} leaks mass")]
    NotClosed { destination: String, state: String },

    #[error("states {0:?} must be pairwise distinct")]
    StatesNotDistinct(Vec<String>),
    #[error("every trajectory {source_state:?} -> {destination:?} passes through {via:?}")]
    AlwaysPassesThroughU {
        source_state: String,
        destination: String,
        via: String,
    },
    #[error("no trajectory {source_state:?} -> {destination:?} passes through {via:?}")]
    NeverPassesThroughU {
        source_state: String,
        destination: String,
        via: String,
    },
    #[error("conditioning event has probability zero on leg {} ({from:?} -> {to:?})", .leg + 1)]
    ImpossibleConditioning { leg: usize, from: String, to: String },
    #[error("destination {0:?} cannot be an intermediate state")]
    DestinationInVia(String),
    #[error("{name} = {value} is out of range")]
    OutOfRange { name: &'static str, value: f64 },

    #[error("enumeration covered mass {covered} is below the required coverage")]
    InsufficientCoverage { covered: f64 },
    #[error("enumeration limits exceeded after {paths} paths, covered mass {covered}")]
    LimitsExceeded { paths: usize, covered: f64 },
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        use Error::*;
        match self {
            Empty
            | NonSquare { .. }
            | LabelCountMismatch { .. }
            | NegativeEntry { .. }
            | NonFiniteEntry { .. }
            | RowSumViolation { .. }
            | DuplicateLabel(_)
            | UnknownState(_)
            | Parse(_)
            | DuplicateEdge { .. }
            | TrajectoryTooShort
            | DestinationRevisited { .. }
            | TargetsEqual(_)
            | StatesNotDistinct(_)
            | DestinationInVia(_)
            | OutOfRange { .. } => ErrorKind::Input,
            SingularSystem { .. } | InsufficientCoverage { .. } | LimitsExceeded { .. } => ErrorKind::Numerical,
            _ => ErrorKind::Infeasible,
        }
    }

    /// Short stable identifier, e.g. `"impossible_conditioning"`.
    pub fn code(&self) -> &'static str {
        use Error::*;
        match self {
            Empty => "empty",
            NonSquare { .. } => "non_square",
            LabelCountMismatch { .. } => "label_count_mismatch",
            NegativeEntry { .. } => "negative_entry",
            NonFiniteEntry { .. } => "non_finite_entry",
            RowSumViolation { .. } => "row_sum_violation",
            DuplicateLabel(_) => "duplicate_label",
            UnknownState(_) => "unknown_state",
            Parse(_) => "parse",
            DuplicateEdge { .. } => "duplicate_edge",
            NotIrreducible => "not_irreducible",
            TrajectoryTooShort => "trajectory_too_short",
            DestinationRevisited { .. } => "destination_revisited",
            ZeroProbability => "zero_probability",
            TargetsEqual(_) => "targets_equal",
            AbsorptionNotCertain { .. } => "absorption_not_certain",
            DestinationUnreachable { .. } => "destination_unreachable",
            SingularSystem { .. } => "singular_system",
            SourceCannotReachDestination { .. } => "source_cannot_reach_destination",
            DestinationNotCertain { .. } => "destination_not_certain",
            NotClosed { .. } => "not_closed",
            StatesNotDistinct(_) => "states_not_distinct",
            AlwaysPassesThroughU { .. } => "always_passes_through",
            NeverPassesThroughU { .. } => "never_passes_through",
            ImpossibleConditioning { .. } => "impossible_conditioning",
            DestinationInVia(_) => "destination_in_via",
            OutOfRange { .. } => "out_of_range",
            InsufficientCoverage { .. } => "insufficient_coverage",
            LimitsExceeded { .. } => "limits_exceeded",
        }
    }
}
