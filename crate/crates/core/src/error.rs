use thiserror::Error;

use crate::chain::Chain;
use crate::differential::TableReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown critical point `{0}`")]
    UnknownCritPoint(String),

    #[error("operation undefined for an aspherical scenario: {0}")]
    Aspherical(&'static str),

    #[error("cover {cover} is not a non-zero multiple of nu = {nu}: orbit is not contractible in the hypersurface")]
    NotContractible { cover: i64, nu: i64 },

    #[error("sphere coordinate must be 0 in an aspherical scenario (got {0})")]
    NonzeroSphereAspherical(i64),

    #[error("doubled degree must be odd (got {0})")]
    EvenDegree(i64),

    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: i64, right: i64 },

    #[error("generator {generator} has doubled degree {found}, chain degree is {expected}")]
    TermDegree {
        generator: String,
        found: i64,
        expected: i64,
    },

    #[error("generator {generator} has action {action} below the chain floor {floor}")]
    TermBelowFloor {
        generator: String,
        action: String,
        floor: String,
    },

    #[error("probe {probe} lies below the chain floor {floor}; window not represented")]
    ProbeBelowFloor { probe: String, floor: String },

    #[error("infinite slice: {0}")]
    InfiniteSlice(String),

    #[error("chain is not closed under d0: contains minus generator {0}")]
    NotD0Closed(String),

    #[error("action lemma hypothesis violated: (c-1)*tau = {0} >= 1")]
    LemmaHypothesis(String),

    #[error("scenario not covered by the vanishing theorem ({0})")]
    NotApplicable(String),

    #[error("invalid bundle parameters: {0}")]
    InvalidParams(String),

    #[error("differential table rejected:\n{0}")]
    TableRejected(TableReport),

    #[error("input chain is not a cycle")]
    NotClosed { boundary: Chain },

    #[error("differential table inconsistent with the level induction at level {level}: residual contains minus generators {terms}")]
    InductionInconsistent { level: i64, terms: String },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
