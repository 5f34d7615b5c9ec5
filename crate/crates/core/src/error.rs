use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("graph is not chordal")]
    NotChordal,
    #[error("graph is not an interval graph")]
    NotInterval,
    #[error("invalid tree representation: {0}")]
    InvalidRepresentation(String),
    #[error("twin relation is not an equivalence: {0}")]
    TwinRelation(String),
    #[error("refinement deadlock at threshold {threshold}")]
    Deadlock { threshold: usize },
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),
    #[error("point set is not invariant under the group")]
    NotInvariant,
    #[error("not a bijection: {0}")]
    NotBijection(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("not an isomorphism: {0}")]
    NotIsomorphism(String),
    #[error("instance exceeds oracle limit ({0})")]
    TooLarge(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
