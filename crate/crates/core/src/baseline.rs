//! Pattern-matching highlighter: the state-of-practice stand-in.
//!
//! A single left-to-right scan over a priority-ordered table of anchored
//! regular expressions. Competent on lexically decidable classes (comments,
//! strings, keywords, literals) and heuristic on structural ones: it tags
//! `class NAME`, `fun NAME`, `var NAME`, and `primitive NAME =` declarators,
//! and nothing else — it cannot see types, calls, or field accesses, and it
//! never fails, on any input.

use std::sync::LazyLock;

use regex::Regex;

use crate::class::HighlightClass;
use crate::token::{Heta, TokenRuleId};

/// One scan rule: an anchored pattern plus the capture groups it emits.
struct PatternRule {
    pattern: Regex,
    /// `(capture group, class, baseline-local token rule)` per emitted token;
    /// group 0 is the whole match. Unlisted groups are consumed silently.
    emissions: Vec<(usize, HighlightClass, TokenRuleId)>,
}

fn rules() -> Vec<PatternRule> {
    let mut next_tr = 0u16;
    let mut rule = |pattern: &str, groups: &[(usize, HighlightClass)]| {
        let emissions = groups
            .iter()
            .map(|&(g, c)| {
                let tr = TokenRuleId(next_tr);
                next_tr += 1;
                (g, c, tr)
            })
            .collect();
        PatternRule {
            pattern: Regex::new(pattern).expect("static pattern compiles"),
            emissions,
        }
    };
    use HighlightClass::*;
    vec![
        rule(r"^\s+", &[]),
        rule(r"^//[^\n]*", &[(0, Comment)]),
        rule(r"^/\*(?s:.)*?\*/", &[(0, Comment)]),
        // unterminated block comment: swallow to end of input
        rule(r"^/\*(?s:.)*", &[(0, Comment)]),
        rule(r#"^"(\\.|[^"\\\n])*""#, &[(0, CharStringLiteral)]),
        // unterminated string: to end of line
        rule(r#"^"[^\n]*"#, &[(0, CharStringLiteral)]),
        rule(r"^'(\\.|[^'\\\n])'", &[(0, CharStringLiteral)]),
        rule(r"^'[^\n]*", &[(0, CharStringLiteral)]),
        rule(r"^[0-9]+\.[0-9]+", &[(0, Literal)]),
        rule(r"^[0-9]+", &[(0, Literal)]),
        // declarator heuristics
        rule(
            r"^(class)(\s+)([A-Za-z_][A-Za-z0-9_]*)",
            &[(1, Keyword), (3, ClassDeclarator)],
        ),
        rule(
            r"^(fun)(\s+)([A-Za-z_][A-Za-z0-9_]*)",
            &[(1, Keyword), (3, FunctionDeclarator)],
        ),
        rule(
            r"^(var)(\s+)([A-Za-z_][A-Za-z0-9_]*)",
            &[(1, Keyword), (3, VariableDeclarator)],
        ),
        rule(
            r"^(int|float|bool|string)(\s+)([A-Za-z_][A-Za-z0-9_]*)(\s*)(=)",
            &[(1, Keyword), (3, VariableDeclarator), (5, Any)],
        ),
        rule(r"^(true|false|null)\b", &[(0, Literal)]),
        rule(
            r"^(class|fun|var|if|else|while|return|new|import|int|float|bool|string)\b",
            &[(0, Keyword)],
        ),
        rule(r"^@[A-Za-z_][A-Za-z0-9_]*", &[(0, AnnotationDeclarator)]),
        rule(r"^[A-Za-z_][A-Za-z0-9_]*", &[(0, Any)]),
        rule(r"^(==|!=|<=|>=|&&|\|\|)", &[(0, Any)]),
        rule(r"^[()\[\]{};,.=<>+\-*/!@]", &[(0, Any)]),
        // anything else: one character of plain text
        rule(r"^(?s:.)", &[(0, Any)]),
    ]
}

static RULES: LazyLock<Vec<PatternRule>> = LazyLock::new(rules);

/// Highlights any character sequence; total, first-match-wins by rule
/// priority, spans tile the non-whitespace input.
pub fn regex_highlight(input: &str) -> Vec<Heta> {
    let mut out = Vec::new();
    let mut byte_pos = 0usize;
    let mut char_pos = 0usize;

    while byte_pos < input.len() {
        let rest = &input[byte_pos..];
        let matched = RULES
            .iter()
            .find_map(|rule| rule.pattern.captures(rest).map(|caps| (rule, caps)))
            .expect("the fallback rule matches any character");
        let (rule, caps) = matched;
        let whole = caps.get(0).expect("group 0 always present");
        debug_assert!(!whole.as_str().is_empty(), "rules must consume input");

        for &(group, class, tr) in &rule.emissions {
            let Some(m) = caps.get(group) else { continue };
            if m.as_str().is_empty() {
                continue;
            }
            // spans are character indices; count chars up to the group
            let start = char_pos + rest[..m.start()].chars().count();
            let len = m.as_str().chars().count();
            out.push(Heta {
                start,
                end: start + len - 1,
                text: m.as_str().to_string(),
                rule: tr,
                class,
            });
        }

        byte_pos += whole.end();
        char_pos += whole.as_str().chars().count();
    }
    out
}
