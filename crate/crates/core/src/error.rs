use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("variable index {index} out of range for {nvars} variables")]
    VariableOutOfRange { index: usize, nvars: usize },

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("invalid modulus: {0}")]
    InvalidModulus(String),

    #[error("residues modulo {left} and {right} cannot be combined")]
    ModulusMismatch { left: String, right: String },

    #[error("zero polynomial is not allowed here")]
    ZeroPolynomial,

    #[error("expected a univariate polynomial, found {0} variables")]
    NotUnivariate(usize),

    #[error("constant polynomial is not allowed here")]
    ConstantPolynomial,

    #[error("polynomial vanishes identically modulo {0}")]
    VanishesModP(u64),

    #[error("enumeration needs {required} evaluations but the budget is {budget}")]
    BudgetExceeded { required: u128, budget: u64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("map has nonzero constant term")]
    NonZeroConstantTerm,

    #[error("linear part is not invertible over the coefficient ring")]
    SingularLinearPart,

    #[error("series coefficient {value} of {monomial} in component {component} (degree {degree}) is not an integer")]
    NonIntegralCoefficient { degree: u32, component: usize, monomial: String, value: String },

    #[error("no nonsingular base root: {0}")]
    NoNonsingularRoot(String),

    #[error("{message} at line {line}, column {column}")]
    Syntax { message: String, line: usize, column: usize },

    #[error("unknown variable `{name}` at line {line}, column {column}")]
    UnknownVariable { name: String, line: usize, column: usize },

    #[error("negative exponent at line {line}, column {column}")]
    NegativeExponent { line: usize, column: usize },

    #[error("map is not square: {vars} variables but {components} components")]
    NotSquare { vars: usize, components: usize },

    #[error("unknown gallery case `{0}`")]
    UnknownCase(String),

    #[error("{0}")]
    Unsupported(String),
}
