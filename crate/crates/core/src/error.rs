use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("degenerate triangle (signed area {area})")]
    DegenerateTriangle { area: f64 },

    #[error("multi-index ({i},{j},{k}) does not match degree {degree}")]
    IndexDegreeMismatch {
        i: usize,
        j: usize,
        k: usize,
        degree: usize,
    },

    #[error("derivative order {order} exceeds patch degree {degree}")]
    OrderExceedsDegree { order: usize, degree: usize },

    #[error("triangles do not share an edge")]
    NotEdgeAdjacent,

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("carrier point lies outside the split")]
    CarrierOutsideSplit,

    #[error("linear system is rank deficient (rank {rank}, {unknowns} unknowns)")]
    RankDeficient { rank: usize, unknowns: usize },

    #[error("linear system is inconsistent")]
    Inconsistent,

    #[error("singular frame")]
    SingularFrame,

    #[error("missing data: {0}")]
    MissingData(String),

    #[error("non-conforming data: {0}")]
    NonConforming(String),

    #[error("unknown selector `{0}`")]
    UnknownSelector(String),

    #[error("triangle {0} is not counterclockwise")]
    Orientation(usize),

    #[error("index out of range: {0}")]
    BadIndex(String),

    #[error("malformed document: {0}")]
    Format(String),

    #[error("i/o: {0}")]
    Io(String),

    #[error("polynomial degree {0} exceeds 5")]
    DegreeTooHigh(usize),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
