use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("cannot parse permutation {input:?}: {reason}")]
    Parse { input: String, reason: String },

    /// The two-block families only exist for even degree.
    #[error(
        "degree {n} is odd; the families M(1), M(2) are defined for even n only \
         (for odd n >= 3 the covering number is 2^(n-1), see oracles::odd_degree_sigma)"
    )]
    OddDegree { n: usize },

    #[error("{what}: degree {n} outside supported range [{min}, {max}]")]
    DegreeOutOfRange {
        what: &'static str,
        n: usize,
        min: usize,
        max: usize,
    },

    #[error("invalid delta index: {0}")]
    InvalidDelta(String),

    #[error("invalid subgroup descriptor: {0}")]
    InvalidDescriptor(String),

    #[error("primitive descriptors carry only an order bound and have no element membership")]
    NoElementMembership,

    #[error("element {0} is neither an n-cycle nor of type (s, n-s)")]
    InadmissibleElement(String),

    #[error("unknown family tag {0}; expected 1 or 2")]
    UnknownFamily(u8),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("limit exceeded: {0}")]
    LimitExceeded(String),

    #[error("malformed certificate: {0}")]
    MalformedCertificate(String),
}
