use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),

    #[error("symbol {0:?} is not in the alphabet")]
    UnknownSymbol(char),

    #[error("word of length {len} is shorter than the window 2R+1 = {window}")]
    WordTooShort { len: usize, window: usize },

    #[error("window {window:?} at offset {offset} is not a legal word of the domain")]
    IllegalWindow { offset: usize, window: String },

    #[error("block codes act on different shift presentations")]
    DomainMismatch,

    #[error("malformed rule table: {0}")]
    MalformedTable(String),

    #[error("table budget exceeded: {rows} rows needed, cap is {cap}")]
    TableBudget { rows: usize, cap: usize },

    #[error("state budget exceeded after completing radius {radius_reached} ({states} states, cap {cap})")]
    StateBudget {
        radius_reached: usize,
        states: usize,
        cap: usize,
    },

    #[error("generator token {0:?} is not bound")]
    UnboundToken(String),

    #[error("invalid group data: {0}")]
    InvalidGroup(String),

    #[error("cell ({col}, {row}) lies outside the {width}x{height} patch")]
    CellOutOfBounds {
        col: i64,
        row: i64,
        width: usize,
        height: usize,
    },

    #[error("profiles are not aligned: {0}")]
    Alignment(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
