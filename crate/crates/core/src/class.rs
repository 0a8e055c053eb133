//! Highlighting classes: the label vocabulary shared by every resolver.

use std::fmt;

/// A highlighting class: the display category a token belongs to.
///
/// `Any` means "no highlighting" and is always encoded as 0. The integer
/// codes are stable and global: group order is Any, Lexical, Identifier,
/// Declarator, Annotation, so one stored full-coverage oracle serves every
/// coverage task.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(u8)]
pub enum HighlightClass {
    Any = 0,
    Keyword = 1,
    Literal = 2,
    CharStringLiteral = 3,
    Comment = 4,
    TypeIdentifier = 5,
    FunctionIdentifier = 6,
    FieldIdentifier = 7,
    ClassDeclarator = 8,
    FunctionDeclarator = 9,
    VariableDeclarator = 10,
    AnnotationDeclarator = 11,
}

impl HighlightClass {
    /// Every class, in code order.
    pub const ALL: [HighlightClass; 12] = [
        HighlightClass::Any,
        HighlightClass::Keyword,
        HighlightClass::Literal,
        HighlightClass::CharStringLiteral,
        HighlightClass::Comment,
        HighlightClass::TypeIdentifier,
        HighlightClass::FunctionIdentifier,
        HighlightClass::FieldIdentifier,
        HighlightClass::ClassDeclarator,
        HighlightClass::FunctionDeclarator,
        HighlightClass::VariableDeclarator,
        HighlightClass::AnnotationDeclarator,
    ];

    pub const LEXICAL: [HighlightClass; 4] = [
        HighlightClass::Keyword,
        HighlightClass::Literal,
        HighlightClass::CharStringLiteral,
        HighlightClass::Comment,
    ];

    pub const IDENTIFIER: [HighlightClass; 3] = [
        HighlightClass::TypeIdentifier,
        HighlightClass::FunctionIdentifier,
        HighlightClass::FieldIdentifier,
    ];

    pub const DECLARATOR: [HighlightClass; 3] = [
        HighlightClass::ClassDeclarator,
        HighlightClass::FunctionDeclarator,
        HighlightClass::VariableDeclarator,
    ];

    pub const ANNOTATION: [HighlightClass; 1] = [HighlightClass::AnnotationDeclarator];

    pub fn code(self) -> u8 {
        self as u8
    }

    pub fn from_code(code: u8) -> Option<Self> {
        Self::ALL.get(code as usize).copied()
    }

    pub fn name(self) -> &'static str {
        match self {
            HighlightClass::Any => "ANY",
            HighlightClass::Keyword => "KEYWORD",
            HighlightClass::Literal => "LITERAL",
            HighlightClass::CharStringLiteral => "CHAR_STRING_LITERAL",
            HighlightClass::Comment => "COMMENT",
            HighlightClass::TypeIdentifier => "TYPE_IDENTIFIER",
            HighlightClass::FunctionIdentifier => "FUNCTION_IDENTIFIER",
            HighlightClass::FieldIdentifier => "FIELD_IDENTIFIER",
            HighlightClass::ClassDeclarator => "CLASS_DECLARATOR",
            HighlightClass::FunctionDeclarator => "FUNCTION_DECLARATOR",
            HighlightClass::VariableDeclarator => "VARIABLE_DECLARATOR",
            HighlightClass::AnnotationDeclarator => "ANNOTATION_DECLARATOR",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.iter().copied().find(|c| c.name() == name)
    }
}

impl fmt::Display for HighlightClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
