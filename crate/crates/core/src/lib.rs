//! Grammatically accurate syntax highlighting from a learned sequence
//! labeler.
//!
//! The pipeline: a reference resolver lexes, parses, and tree-walks source
//! files of the built-in demonstration language to produce exact per-token
//! highlighting; a corpus builder turns generated programs into persisted,
//! deduplicated, fold-split oracles; a small recurrent network (optionally
//! bidirectional) is trained from scratch to map token-rule sequences to
//! highlighting classes; and an evaluation harness scores any highlighter —
//! learned, reference, or the regex baseline — by character-level accuracy
//! and wall-clock latency, on whole files and on incomplete line snippets.

pub mod baseline;
pub mod class;
pub mod eval;
pub mod highlighter;
pub mod minilang;
pub mod nn;
pub mod oracle;
pub mod snippet;
pub mod stats;
pub mod task;
pub mod token;

pub use class::HighlightClass;
pub use task::{adapt_class, adapt_oracle, CoverageTask};
pub use token::{Eta, Heta, TokenRuleId};
