use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("newick syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("duplicate taxon label `{0}`")]
    DuplicateLabel(String),
    #[error("vertex with {0} children; only binary trees are supported")]
    NonBinary(usize),
    #[error("internal vertex of degree 2")]
    DegreeTwo,
    #[error("the label `ρ` is reserved for root augmentation")]
    ReservedLabel,
    #[error("invalid tree: {0}")]
    InvalidTree(String),
    #[error("expected a {expected} tree")]
    WrongKind { expected: &'static str },
    #[error("taxon sets differ")]
    LabelMismatch,
    #[error("unknown taxon `{0}`")]
    UnknownTaxon(String),
    #[error("taxa must be pairwise distinct")]
    RepeatedTaxon,
    #[error("taxon set is empty")]
    EmptyTaxa,
    #[error("tree already contains ρ")]
    AlreadyAugmented,
    #[error("edge id {0} out of range")]
    UnknownEdge(usize),
    #[error("vertex {0} is not in the given vertex set")]
    OutsideVertexSet(usize),
    #[error("input size {size} exceeds the configured bound {bound}")]
    SizeGuard { size: usize, bound: usize },
    #[error("character does not assign a colour to `{0}`")]
    PartialCharacter(String),
    #[error("not an agreement forest: {0}")]
    InvalidForest(String),
    #[error("pruning would leave an empty tree")]
    EmptyAfterPruning,
    #[error("certificates disagree: {0}")]
    Certification(String),
    #[error("MSO evaluation budget exceeded at quantifier depth {depth}")]
    BudgetExceeded { depth: usize },
    #[error("MSO error: {0}")]
    Mso(String),
    #[error("malformed {format} input, line {line}: {msg}")]
    Format { format: &'static str, line: usize, msg: String },
}
