//! Output renderers for highlighted files: terminal colors, HTML, and the
//! machine-readable span listing.

use glint_core::{Heta, HighlightClass};

/// One line per token: `i_s i_e CLASS_NAME`.
pub fn emit_spans(hetas: &[Heta]) -> String {
    let mut out = String::new();
    for h in hetas {
        out.push_str(&format!("{} {} {}\n", h.start, h.end, h.class.name()));
    }
    out
}

/// Parses [`emit_spans`] output back into `(start, end, class)` triples.
pub fn parse_spans(text: &str) -> Option<Vec<(usize, usize, HighlightClass)>> {
    text.lines()
        .map(|line| {
            let mut parts = line.split_whitespace();
            let start = parts.next()?.parse().ok()?;
            let end = parts.next()?.parse().ok()?;
            let class = HighlightClass::from_name(parts.next()?)?;
            parts.next().is_none().then_some((start, end, class))
        })
        .collect()
}

/// The fixed 16-color palette: SGR code per class, ANY uncolored.
pub fn ansi_code(class: HighlightClass) -> Option<&'static str> {
    use HighlightClass::*;
    Some(match class {
        Any => return None,
        Keyword => "35",
        Literal => "33",
        CharStringLiteral => "32",
        Comment => "90",
        TypeIdentifier => "36",
        FunctionIdentifier => "34",
        FieldIdentifier => "96",
        ClassDeclarator => "93",
        FunctionDeclarator => "94",
        VariableDeclarator => "97",
        AnnotationDeclarator => "95",
    })
}

/// CSS class name per highlighting class, `hc-` prefixed.
pub fn css_class(class: HighlightClass) -> String {
    format!("hc-{}", class.name().to_lowercase().replace('_', "-"))
}

/// Walks the characters, wrapping each non-ANY span in its color.
pub fn emit_ansi(chars: &str, hetas: &[Heta]) -> String {
    render(chars, hetas, |class, text, out| match ansi_code(class) {
        Some(code) => {
            out.push_str("\x1b[");
            out.push_str(code);
            out.push('m');
            out.push_str(text);
            out.push_str("\x1b[0m");
        }
        None => out.push_str(text),
    })
}

/// A single `<pre>` block with class-named `<span>`s for non-ANY tokens.
pub fn emit_html(chars: &str, hetas: &[Heta]) -> String {
    let mut body = render(chars, hetas, |class, text, out| {
        if class == HighlightClass::Any {
            out.push_str(&escape_html(text));
        } else {
            out.push_str(&format!(
                "<span class=\"{}\">{}</span>",
                css_class(class),
                escape_html(text)
            ));
        }
    });
    body = format!("<pre class=\"glint\">{body}</pre>\n");
    body
}

fn escape_html(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Interleaves unhighlighted gaps with rendered spans, in span order.
fn render(
    chars: &str,
    hetas: &[Heta],
    mut piece: impl FnMut(HighlightClass, &str, &mut String),
) -> String {
    let all: Vec<char> = chars.chars().collect();
    let mut out = String::with_capacity(chars.len() * 2);
    let mut pos = 0usize;
    for h in hetas {
        if h.start > pos {
            let gap: String = all[pos..h.start].iter().collect();
            out.push_str(&gap);
        }
        let text: String = all[h.start..=h.end].iter().collect();
        piece(h.class, &text, &mut out);
        pos = h.end + 1;
    }
    if pos < all.len() {
        let tail: String = all[pos..].iter().collect();
        out.push_str(&tail);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use glint_core::minilang::bf_highlight;

    #[test]
    fn span_listing_round_trips() {
        let src = "class A { int m() { return 1; } }";
        let hetas = bf_highlight(src).unwrap();
        let listing = emit_spans(&hetas);
        let parsed = parse_spans(&listing).unwrap();
        assert_eq!(parsed.len(), hetas.len());
        for ((s, e, c), h) in parsed.iter().zip(&hetas) {
            assert_eq!((*s, *e, *c), (h.start, h.end, h.class));
        }
        // spans in the listing satisfy the ordering invariant
        assert!(glint_core::token::spans_are_ordered(
            parsed.iter().map(|(s, e, _)| (*s, *e))
        ));
        assert!(parse_spans("0 1 NOT_A_CLASS").is_none());
    }

    #[test]
    fn ansi_wraps_only_highlighted_spans() {
        let src = "class A { }";
        let out = emit_ansi(src, &bf_highlight(src).unwrap());
        assert!(out.starts_with("\x1b[35mclass\x1b[0m \x1b[93mA\x1b[0m"));
        assert!(out.ends_with("{ }"));
    }

    #[test]
    fn html_escapes_and_tags() {
        let src = "class A { string s = \"a<b\"; }";
        let out = emit_html(src, &bf_highlight(src).unwrap());
        assert!(out.starts_with("<pre class=\"glint\">"));
        assert!(out.contains("<span class=\"hc-keyword\">class</span>"));
        assert!(out.contains("<span class=\"hc-class-declarator\">A</span>"));
        assert!(out.contains("&quot;a&lt;b&quot;"));
        assert!(!out.contains("\"a<b\""));
    }

    #[test]
    fn stripping_ansi_recovers_the_source() {
        let src = "class A { int m() { a.b(); } }";
        let out = emit_ansi(src, &bf_highlight(src).unwrap());
        let mut stripped = String::new();
        let mut rest = out.as_str();
        while let Some(idx) = rest.find('\x1b') {
            stripped.push_str(&rest[..idx]);
            let after = &rest[idx..];
            let m = after.find('m').unwrap();
            rest = &after[m + 1..];
        }
        stripped.push_str(rest);
        assert_eq!(stripped, src);
    }
}
