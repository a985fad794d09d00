use thiserror::Error;

use crate::machine::{State, Symbol};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("word must be nonempty")]
    EmptyWord,

    #[error("state index {index} out of range for a {n_states}-state machine")]
    StateIndex { index: usize, n_states: usize },

    #[error("symbol index {index} out of range for a {n_symbols}-symbol alphabet")]
    SymbolIndex { index: usize, n_symbols: usize },

    #[error("machine is not irreducible ({n_components} strongly connected components)")]
    NotIrreducible { n_components: usize },

    #[error("machine is not unifilar: state {state} has several edges on symbol {symbol}")]
    NotUnifilar { state: State, symbol: Symbol },

    #[error("symbol {symbol} has probability zero under the current belief")]
    ImpossibleSymbol { symbol: Symbol },

    #[error("states {a} and {b} share a block but disagree on symbol {symbol}")]
    InconsistentBlock { a: State, b: State, symbol: Symbol },

    #[error("belief exploration found more than {cap} distinct classes")]
    ClassExplosion { cap: usize },

    #[error("belief exploration closed no recurrent class within depth {depth}")]
    NoRecurrentClass { depth: usize },

    #[error("no context reaches the minimum count of {min_count}")]
    InsufficientData { min_count: u64 },

    #[error("presented shift is not irreducible ({n_terminal} terminal components)")]
    NotIrreducibleShift { n_terminal: usize },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("invalid distribution: {0}")]
    Distribution(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
