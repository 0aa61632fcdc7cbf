use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid network: {0}")]
    InvalidNetwork(String),
    #[error("invalid kinetics: {0}")]
    InvalidKinetics(String),
    #[error("kinetics are not reactant-determined: reactions {0} and {1} share a reactant complex but differ in kinetic orders")]
    NotRdk(String, String),
    #[error("non-numeric entry: {0}")]
    NonNumeric(String),
    #[error("{what} = {value} exceeds the limit {limit}")]
    SizeLimit { what: &'static str, value: usize, limit: usize },
    #[error("the network has no conservation law")]
    NoConservation,
    #[error("kinetic flux subspace needs a cycle-terminal network (every complex a reactant)")]
    NotCycleTerminal,
    #[error("degenerate operating point: A4 must exceed {0} times the storage pool")]
    DegenerateOperatingPoint(String),
    #[error("function value is not positive at the operating point")]
    NonPositiveV,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("deficiency-one algorithm not applicable: {0}")]
    NotApplicable(String),
    #[error("witness cannot be realized: {0}")]
    Unrealizable(String),
    #[error("no equilibrium found: {0}")]
    NoEquilibriumFound(String),
    #[error("step size underflow at t = {0}")]
    StepSizeUnderflow(f64),
    #[error("steady-state search did not converge: {0}")]
    NotConverged(String),
    #[error("invalid transform step: {0}")]
    InvalidStep(String),
    #[error("not a BECCS-shaped system: {0}")]
    NotBeccs(String),
    #[error("q2 - q1 is zero, so R is undefined")]
    QDifferenceZero,
    #[error("no complex-balancing rate constants exist")]
    NotFound,
    #[error("unknown model '{0}'")]
    UnknownModel(String),
    #[error("unsupported portfolio size {0}: only single-method portfolios are built")]
    UnsupportedPortfolioSize(usize),
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("line {line}: {message}")]
    Semantic { line: usize, message: String },
    #[error("{pointer}: {message}")]
    Schema { pointer: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
