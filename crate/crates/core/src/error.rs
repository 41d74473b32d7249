use thiserror::Error;

/// Errors raised by the simulator, the networks and the learning loop.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown register `{0}`")]
    UnknownRegister(String),
    #[error("duplicate register `{0}`")]
    DuplicateRegister(String),
    #[error("register `{0}` must have width >= 1")]
    ZeroWidthRegister(String),
    #[error("layout needs {required} qubits but the cap is {cap}")]
    QubitCap { required: usize, cap: usize },
    #[error("width mismatch for `{what}`: expected {expected}, got {actual}")]
    WidthMismatch {
        what: String,
        expected: usize,
        actual: usize,
    },
    #[error("assignment for register `{0}` missing")]
    MissingAssignment(String),
    #[error("invalid bit string `{0}`")]
    InvalidBits(String),
    #[error("qubit index {index} out of range for register `{register}` of width {width}")]
    QubitOutOfRange {
        register: String,
        index: usize,
        width: usize,
    },
    #[error("qubit position {0} used more than once")]
    PositionCollision(usize),
    #[error("label map is not a bijection: two entries map to {0:#x}")]
    NotBijective(u64),
    #[error("layout mismatch between states")]
    LayoutMismatch,
    #[error("empty register set")]
    EmptyRegisterSet,
    #[error("gate is not unitary within tolerance")]
    NotUnitary,
    #[error("no rotation angle for selector value {0}")]
    MissingAngle(usize),
    #[error("boolean function table is invalid: {0}")]
    InvalidFunction(String),
    #[error("objective register is not cleared on every entry")]
    ObjectiveNotClear,
    #[error("register `{0}` does not hold the expected value on every entry")]
    RegisterPrecondition(String),
    #[error("ancilla or output register is not zero on every entry")]
    DirtyAncilla,
    #[error("invalid architecture: {0}")]
    InvalidArchitecture(String),
    #[error("architecture parse error at line {line}: {message}")]
    ArchitectureParse { line: usize, message: String },
    #[error("dataset parse error at line {line}: {message}")]
    DatasetParse { line: usize, message: String },
    #[error("architecture `{name}` has {selectors} selector bits, above the enumeration cap {cap}")]
    EnumerationCap { name: String, selectors: usize, cap: usize },
    #[error("theta {theta} exceeds the dataset size {patterns}")]
    ThetaOutOfRange { theta: usize, patterns: usize },
    #[error("internal invariant violated: {0}")]
    Defect(String),
}

pub type Result<T> = std::result::Result<T, Error>;
