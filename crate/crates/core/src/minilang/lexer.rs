//! Maximal-munch lexer over character indices.

use super::TokenRule;
use crate::token::Eta;

/// Lexing failure, reporting the offending character index.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LexError {
    #[error("character {found:?} at index {position} starts no token rule")]
    NoRule { position: usize, found: char },
    #[error("invalid escape at index {position}")]
    BadEscape { position: usize },
    #[error("unterminated {what} starting at index {position}")]
    Unterminated { position: usize, what: &'static str },
}

impl LexError {
    pub fn position(&self) -> usize {
        match self {
            LexError::NoRule { position, .. }
            | LexError::BadEscape { position }
            | LexError::Unterminated { position, .. } => *position,
        }
    }
}

/// Tokenizes `input` into a sequence of spans. Comments are emitted as
/// ordinary tokens; whitespace produces nothing.
pub fn lex(input: &str) -> Result<Vec<Eta>, LexError> {
    let chars: Vec<char> = input.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;

    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let (rule, end) = match c {
            '/' if chars.get(i + 1) == Some(&'/') => {
                let mut j = i + 2;
                while j < chars.len() && chars[j] != '\n' {
                    j += 1;
                }
                (TokenRule::LineComment, j - 1)
            }
            '/' if chars.get(i + 1) == Some(&'*') => {
                let mut j = i + 2;
                loop {
                    if j + 1 >= chars.len() {
                        return Err(LexError::Unterminated {
                            position: start,
                            what: "block comment",
                        });
                    }
                    if chars[j] == '*' && chars[j + 1] == '/' {
                        break;
                    }
                    j += 1;
                }
                (TokenRule::BlockComment, j + 1)
            }
            '"' => (TokenRule::StringLit, scan_quoted(&chars, i, '"', "string literal")?),
            '\'' => {
                let end = scan_quoted(&chars, i, '\'', "char literal")?;
                // exactly one character or one escape between the quotes
                let inner = end - start - 1;
                let want = if chars[start + 1] == '\\' { 2 } else { 1 };
                if inner != want {
                    let position = (start + 1 + want).min(end);
                    return Err(LexError::NoRule {
                        position,
                        found: chars[position],
                    });
                }
                (TokenRule::CharLit, end)
            }
            '0'..='9' => {
                let mut j = i;
                while j + 1 < chars.len() && chars[j + 1].is_ascii_digit() {
                    j += 1;
                }
                // digits '.' digits forms a float; a bare trailing dot does not
                if j + 2 < chars.len() && chars[j + 1] == '.' && chars[j + 2].is_ascii_digit() {
                    j += 2;
                    while j + 1 < chars.len() && chars[j + 1].is_ascii_digit() {
                        j += 1;
                    }
                    (TokenRule::FloatLit, j)
                } else {
                    (TokenRule::IntLit, j)
                }
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut j = i;
                while j + 1 < chars.len()
                    && (chars[j + 1].is_ascii_alphanumeric() || chars[j + 1] == '_')
                {
                    j += 1;
                }
                let word: String = chars[i..=j].iter().collect();
                let rule = match word.as_str() {
                    "true" | "false" => TokenRule::BoolLit,
                    "null" => TokenRule::NullLit,
                    w => TokenRule::keyword(w).unwrap_or(TokenRule::Ident),
                };
                (rule, j)
            }
            '@' => (TokenRule::At, i),
            '(' => (TokenRule::LParen, i),
            ')' => (TokenRule::RParen, i),
            '{' => (TokenRule::LBrace, i),
            '}' => (TokenRule::RBrace, i),
            '[' => (TokenRule::LBracket, i),
            ']' => (TokenRule::RBracket, i),
            ';' => (TokenRule::Semi, i),
            ',' => (TokenRule::Comma, i),
            '.' => (TokenRule::Dot, i),
            '=' if chars.get(i + 1) == Some(&'=') => (TokenRule::Eq, i + 1),
            '=' => (TokenRule::Assign, i),
            '!' if chars.get(i + 1) == Some(&'=') => (TokenRule::Neq, i + 1),
            '!' => (TokenRule::Bang, i),
            '<' if chars.get(i + 1) == Some(&'=') => (TokenRule::Le, i + 1),
            '<' => (TokenRule::Lt, i),
            '>' if chars.get(i + 1) == Some(&'=') => (TokenRule::Ge, i + 1),
            '>' => (TokenRule::Gt, i),
            '+' => (TokenRule::Plus, i),
            '-' => (TokenRule::Minus, i),
            '*' => (TokenRule::Star, i),
            '/' => (TokenRule::Slash, i),
            '&' if chars.get(i + 1) == Some(&'&') => (TokenRule::AndAnd, i + 1),
            '|' if chars.get(i + 1) == Some(&'|') => (TokenRule::OrOr, i + 1),
            other => {
                return Err(LexError::NoRule {
                    position: i,
                    found: other,
                })
            }
        };
        let text: String = chars[start..=end].iter().collect();
        tokens.push(Eta::new(start, end, text, rule.id()));
        i = end + 1;
    }

    Ok(tokens)
}

/// Scans a quoted literal starting at `start` (which holds `quote`), returns
/// the index of the closing quote. Escapes are restricted to \" \' \\ \n \t.
fn scan_quoted(
    chars: &[char],
    start: usize,
    quote: char,
    what: &'static str,
) -> Result<usize, LexError> {
    let mut j = start + 1;
    loop {
        match chars.get(j) {
            None | Some('\n') => {
                return Err(LexError::Unterminated {
                    position: start,
                    what,
                })
            }
            Some('\\') => match chars.get(j + 1) {
                Some('"') | Some('\'') | Some('\\') | Some('n') | Some('t') => j += 2,
                _ => return Err(LexError::BadEscape { position: j }),
            },
            Some(&c) if c == quote => return Ok(j),
            Some(_) => j += 1,
        }
    }
}
