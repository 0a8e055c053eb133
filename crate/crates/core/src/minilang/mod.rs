//! The built-in demonstration language front-end.
//!
//! Provides the lexer, recursive-descent parser, reference tree-walking
//! highlighter, and a grammar-driven random program generator. The token
//! rule table is normative and documented in `docs/grammar.md`; ids must
//! not be renumbered once oracles exist.

mod ast;
mod generator;
mod lexer;
mod parser;
mod walker;

pub use ast::{AstChild, AstNode, NodeKind};
pub use generator::generate_program;
pub use lexer::{lex, LexError};
pub use parser::{parse, ParseError};
pub use walker::bf_highlight;

use crate::token::TokenRuleId;

/// Front-end identifier written into oracle and model headers.
pub const FRONTEND_NAME: &str = "minilang";

/// Token rules of the language, with their stable ids.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u16)]
pub enum TokenRule {
    KwClass = 0,
    KwFun = 1,
    KwVar = 2,
    KwIf = 3,
    KwElse = 4,
    KwWhile = 5,
    KwReturn = 6,
    KwNew = 7,
    KwImport = 8,
    KwInt = 9,
    KwFloat = 10,
    KwBool = 11,
    KwString = 12,
    Ident = 13,
    IntLit = 14,
    FloatLit = 15,
    BoolLit = 16,
    NullLit = 17,
    StringLit = 18,
    CharLit = 19,
    LineComment = 20,
    BlockComment = 21,
    At = 22,
    LParen = 23,
    RParen = 24,
    LBrace = 25,
    RBrace = 26,
    LBracket = 27,
    RBracket = 28,
    Semi = 29,
    Comma = 30,
    Dot = 31,
    Assign = 32,
    Eq = 33,
    Neq = 34,
    Lt = 35,
    Gt = 36,
    Le = 37,
    Ge = 38,
    Plus = 39,
    Minus = 40,
    Star = 41,
    Slash = 42,
    Bang = 43,
    AndAnd = 44,
    OrOr = 45,
}

/// Number of token rules in the vocabulary.
pub const VOCAB_SIZE: usize = 46;

impl TokenRule {
    pub fn id(self) -> TokenRuleId {
        TokenRuleId(self as u16)
    }

    pub fn from_id(id: TokenRuleId) -> Option<Self> {
        use TokenRule::*;
        const TABLE: [TokenRule; VOCAB_SIZE] = [
            KwClass, KwFun, KwVar, KwIf, KwElse, KwWhile, KwReturn, KwNew, KwImport, KwInt,
            KwFloat, KwBool, KwString, Ident, IntLit, FloatLit, BoolLit, NullLit, StringLit,
            CharLit, LineComment, BlockComment, At, LParen, RParen, LBrace, RBrace, LBracket,
            RBracket, Semi, Comma, Dot, Assign, Eq, Neq, Lt, Gt, Le, Ge, Plus, Minus, Star, Slash,
            Bang, AndAnd, OrOr,
        ];
        TABLE.get(id.index()).copied()
    }

    pub fn is_keyword(self) -> bool {
        (self as u16) <= TokenRule::KwString as u16
    }

    pub fn is_comment(self) -> bool {
        matches!(self, TokenRule::LineComment | TokenRule::BlockComment)
    }

    /// Keyword spelled by `word`, if any.
    pub fn keyword(word: &str) -> Option<Self> {
        Some(match word {
            "class" => TokenRule::KwClass,
            "fun" => TokenRule::KwFun,
            "var" => TokenRule::KwVar,
            "if" => TokenRule::KwIf,
            "else" => TokenRule::KwElse,
            "while" => TokenRule::KwWhile,
            "return" => TokenRule::KwReturn,
            "new" => TokenRule::KwNew,
            "import" => TokenRule::KwImport,
            "int" => TokenRule::KwInt,
            "float" => TokenRule::KwFloat,
            "bool" => TokenRule::KwBool,
            "string" => TokenRule::KwString,
            _ => return None,
        })
    }

    /// Primitive type keywords.
    pub fn is_primitive_type(self) -> bool {
        matches!(
            self,
            TokenRule::KwInt | TokenRule::KwFloat | TokenRule::KwBool | TokenRule::KwString
        )
    }
}

/// Lexing or parsing failure of the front-end.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FrontendError {
    #[error(transparent)]
    Lex(#[from] LexError),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vocabulary_fits_the_id_space() {
        assert!(VOCAB_SIZE <= 64);
        for i in 0..VOCAB_SIZE {
            let rule = TokenRule::from_id(TokenRuleId(i as u16)).unwrap();
            assert_eq!(rule.id().index(), i);
        }
        assert_eq!(TokenRule::from_id(TokenRuleId(VOCAB_SIZE as u16)), None);
    }

    #[test]
    fn keyword_lookup_matches_rule_table() {
        assert_eq!(TokenRule::keyword("class"), Some(TokenRule::KwClass));
        assert_eq!(TokenRule::keyword("fun"), Some(TokenRule::KwFun));
        assert_eq!(TokenRule::keyword("string"), Some(TokenRule::KwString));
        assert_eq!(TokenRule::keyword("true"), None); // literal, not keyword
        assert_eq!(TokenRule::keyword("String"), None);
    }
}
