use thiserror::Error;

/// Errors raised while building groups, enumerating subgroups, or running the
/// lattice searches.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid group spec: {0}")]
    Constraint(String),

    #[error("group order {order} exceeds the cap of {cap}")]
    OrderCap { order: u128, cap: usize },

    #[error("generator closure exceeded the order cap of {cap} (reached {partial} elements)")]
    ClosureCap { cap: usize, partial: usize },

    #[error("generator {index} is not a permutation of degree {degree}: {reason}")]
    BadPermutation {
        index: usize,
        degree: usize,
        reason: String,
    },

    #[error("subgroup count exceeded the limit of {limit} ({partial} found so far)")]
    TooManySubgroups { limit: usize, partial: usize },

    #[error("element set is not a subgroup")]
    NotSubgroup,

    #[error("subgroup is not normal")]
    NotNormal,

    #[error("lattice/group mismatch: {0}")]
    Mismatch(String),

    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("elimination order is not a permutation of the lattice nodes")]
    BadWitness,

    #[error("crown order bound {0} is below the minimum of 6")]
    CrownBound(usize),

    #[error("lattice has {nodes} nodes, over the brute-force oracle cap of {cap}")]
    OracleCap { nodes: usize, cap: usize },

    #[error("parse error at column {pos}: expected {expected}, found {found}")]
    Parse {
        pos: usize,
        expected: String,
        found: String,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
