use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("capacity exceeded: {what} is {got}, supported maximum is {max}")]
    Capacity {
        what: &'static str,
        got: usize,
        max: usize,
    },

    #[error("agent index {index} out of range for {n} agents")]
    Index { index: usize, n: usize },

    #[error("characteristic function has no value for coalition {mask:#b}")]
    IncompleteFunction { mask: u32 },

    #[error("dimension mismatch: expected {expected}, got {got} ({context})")]
    DimensionMismatch {
        expected: usize,
        got: usize,
        context: &'static str,
    },

    #[error("linear program solver breakdown: {0}")]
    Solver(String),

    #[error("degenerate normalization range: anchor equals nadir ({0})")]
    DegenerateRange(f64),

    #[error("value {value} lies outside the normalization range [{low}, {high}]")]
    Range { value: f64, low: f64, high: f64 },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("invalid frontier: {0}")]
    InvalidFrontier(String),

    #[error("no balanced solution: the weighted balance line does not meet the frontier inside the unit square")]
    NoBalancedSolution,

    #[error("goal '{0}' has a zero target")]
    ZeroTarget(String),

    #[error("goal programming region is infeasible")]
    Infeasible,

    #[error("a coalition needs at least two agents, got {0}")]
    SingletonCoalition(usize),

    #[error("invalid assignment: {0}")]
    Partition(String),

    #[error("no toll entry for road segment '{0}'")]
    MissingToll(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// True for errors caused by malformed input rather than by the
    /// mathematics of a well-formed instance.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Index { .. }
                | Error::DimensionMismatch { .. }
                | Error::Parameter(_)
                | Error::InvalidFrontier(_)
                | Error::InvalidInput(_)
                | Error::MissingToll(_)
                | Error::ZeroTarget(_)
                | Error::Partition(_)
        )
    }
}
