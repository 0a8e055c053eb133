//! Token span records: the unit every resolver produces and consumes.

use crate::class::HighlightClass;

/// The integer id a lexer assigns to a token type, indexing its rule table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TokenRuleId(pub u16);

impl TokenRuleId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A lexed token: inclusive character span, exact text, and token rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Eta {
    /// Character start index, 0-based inclusive.
    pub start: usize,
    /// Character end index, inclusive.
    pub end: usize,
    /// The exact text the span covers.
    pub text: String,
    pub rule: TokenRuleId,
}

impl Eta {
    pub fn new(start: usize, end: usize, text: impl Into<String>, rule: TokenRuleId) -> Self {
        let text = text.into();
        debug_assert!(start <= end);
        debug_assert_eq!(text.chars().count(), end - start + 1);
        Eta { start, end, text, rule }
    }

    /// Number of characters covered.
    pub fn len(&self) -> usize {
        self.end - self.start + 1
    }

    pub fn is_empty(&self) -> bool {
        false // a token always covers at least one character
    }
}

/// An [`Eta`] extended with its highlighting class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Heta {
    pub start: usize,
    pub end: usize,
    pub text: String,
    pub rule: TokenRuleId,
    pub class: HighlightClass,
}

impl Heta {
    pub fn from_eta(eta: Eta, class: HighlightClass) -> Self {
        Heta {
            start: eta.start,
            end: eta.end,
            text: eta.text,
            rule: eta.rule,
            class,
        }
    }

    pub fn eta(&self) -> Eta {
        Eta {
            start: self.start,
            end: self.end,
            text: self.text.clone(),
            rule: self.rule,
        }
    }
}

/// Checks that spans are well-formed, strictly increasing, and non-overlapping.
pub fn spans_are_ordered<'a, I>(spans: I) -> bool
where
    I: IntoIterator<Item = (usize, usize)>,
{
    let mut prev_end: Option<usize> = None;
    for (start, end) in spans {
        if start > end {
            return false;
        }
        if let Some(pe) = prev_end {
            if start <= pe {
                return false;
            }
        }
        prev_end = Some(end);
    }
    true
}
