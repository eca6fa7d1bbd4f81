use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{line}:{col}: syntax error: {msg}")]
    Syntax { line: usize, col: usize, msg: String },

    #[error("{line}:{col}: equality atom in rule head")]
    EqualityInHead { line: usize, col: usize },

    #[error("symbol `{symbol}` used with arity {found}, expected {expected}")]
    ArityMismatch {
        symbol: String,
        expected: usize,
        found: usize,
    },

    #[error("symbol `{0}` used both as a predicate and as a function")]
    KindConflict(String),

    #[error("unbound second-order variable `{0}`")]
    UnboundSecondOrder(String),

    #[error("unbound individual variable `{0}`")]
    UnboundVariable(String),

    #[error("uninterpreted symbol `{0}`")]
    Uninterpreted(String),

    #[error("unknown predicate `{0}`")]
    UnknownPredicate(String),

    #[error("unknown domain element `{0}`")]
    UnknownElement(String),

    #[error("invalid structure: {0}")]
    InvalidStructure(String),

    #[error("vocabulary clash on `{0}`")]
    VocabularyClash(String),

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("program is not normal: rule {0} has a disjunctive head")]
    NotNormal(usize),

    #[error("wrong prefix class: {0}")]
    WrongPrefixClass(String),

    #[error("matrix not in required normal form: {0}")]
    NotNormalForm(String),

    #[error("tuple length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("SMT-LIB: {0}")]
    SmtLib(String),

    #[error("external solver: {0}")]
    Solver(String),
}
