//! Reference highlighter: lex, parse, and walk the tree, binding every
//! token to exactly one highlighting class.

use super::ast::{AstNode, NodeKind};
use super::{lex, parse, FrontendError, TokenRule};
use crate::class::HighlightClass;
use crate::token::{Eta, Heta};

/// Full-coverage highlighting of a valid compilation unit.
///
/// Guaranteed correct whenever the input parses; propagates lex/parse
/// failures otherwise.
pub fn bf_highlight(input: &str) -> Result<Vec<Heta>, FrontendError> {
    let tokens = lex(input)?;
    let ast = parse(&tokens)?;
    let classes = walk(&ast, &tokens);
    Ok(tokens
        .into_iter()
        .zip(classes)
        .map(|(eta, class)| Heta::from_eta(eta, class))
        .collect())
}

/// Assigns one class per token: a lexical pass for rule-determined classes,
/// then a tree walk for the grammatical ones. Unclaimed tokens are ANY.
fn walk(ast: &AstNode, tokens: &[Eta]) -> Vec<HighlightClass> {
    let mut slots: Vec<Option<HighlightClass>> = vec![None; tokens.len()];

    for (i, tok) in tokens.iter().enumerate() {
        let Some(rule) = TokenRule::from_id(tok.rule) else {
            continue;
        };
        let class = match rule {
            r if r.is_keyword() => HighlightClass::Keyword,
            TokenRule::IntLit | TokenRule::FloatLit | TokenRule::BoolLit | TokenRule::NullLit => {
                HighlightClass::Literal
            }
            TokenRule::StringLit | TokenRule::CharLit => HighlightClass::CharStringLiteral,
            TokenRule::LineComment | TokenRule::BlockComment => HighlightClass::Comment,
            _ => continue,
        };
        assign(&mut slots, i, class);
    }

    visit(ast, tokens, &mut slots);

    slots
        .into_iter()
        .map(|s| s.unwrap_or(HighlightClass::Any))
        .collect()
}

fn assign(slots: &mut [Option<HighlightClass>], idx: usize, class: HighlightClass) {
    debug_assert!(
        slots[idx].is_none(),
        "token {idx} assigned twice: {:?} then {:?}",
        slots[idx],
        class
    );
    slots[idx] = Some(class);
}

/// The identifier token directly owned by `node`.
fn direct_ident(node: &AstNode, tokens: &[Eta]) -> Option<usize> {
    node.tokens()
        .find(|&i| tokens[i].rule == TokenRule::Ident.id())
}

fn visit(node: &AstNode, tokens: &[Eta], slots: &mut Vec<Option<HighlightClass>>) {
    match node.kind {
        NodeKind::ClassDecl => {
            if let Some(i) = direct_ident(node, tokens) {
                assign(slots, i, HighlightClass::ClassDeclarator);
            }
        }
        NodeKind::MethodDecl => {
            if let Some(i) = direct_ident(node, tokens) {
                assign(slots, i, HighlightClass::FunctionDeclarator);
            }
        }
        NodeKind::FieldDecl | NodeKind::Param | NodeKind::VarDeclStmt => {
            if let Some(i) = direct_ident(node, tokens) {
                assign(slots, i, HighlightClass::VariableDeclarator);
            }
        }
        NodeKind::Type | NodeKind::New => {
            // a type spelled as an identifier; primitives are already keywords
            if let Some(i) = direct_ident(node, tokens) {
                assign(slots, i, HighlightClass::TypeIdentifier);
            }
        }
        NodeKind::Annotation => {
            for i in node.tokens() {
                assign(slots, i, HighlightClass::AnnotationDeclarator);
            }
            return;
        }
        NodeKind::FieldAccess => {
            // reached only when not the callee of a call
            if let Some(i) = direct_ident(node, tokens) {
                assign(slots, i, HighlightClass::FieldIdentifier);
            }
        }
        NodeKind::Call => {
            let mut nodes = node.nodes();
            let callee = nodes.next().expect("call has a callee");
            match callee.kind {
                NodeKind::IdentExpr => {
                    if let Some(i) = direct_ident(callee, tokens) {
                        assign(slots, i, HighlightClass::FunctionIdentifier);
                    }
                }
                NodeKind::FieldAccess => {
                    if let Some(i) = direct_ident(callee, tokens) {
                        assign(slots, i, HighlightClass::FunctionIdentifier);
                    }
                    for inner in callee.nodes() {
                        visit(inner, tokens, slots);
                    }
                }
                _ => visit(callee, tokens, slots),
            }
            for arg in nodes {
                visit(arg, tokens, slots);
            }
            return;
        }
        _ => {}
    }
    for child in node.nodes() {
        visit(child, tokens, slots);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use HighlightClass::*;

    fn classes(src: &str) -> Vec<HighlightClass> {
        bf_highlight(src).unwrap().iter().map(|h| h.class).collect()
    }

    #[test]
    fn declaration_statement_classes() {
        let src = "class A { int m() { String lang = \"Java.\"; } }";
        let all = classes(src);
        // the five tokens of the inner statement
        assert_eq!(
            &all[8..13],
            &[TypeIdentifier, VariableDeclarator, Any, CharStringLiteral, Any]
        );
    }

    #[test]
    fn navigation_chain_distinguishes_fields_from_calls() {
        let src = "class A { int m() { Object o = a.b.c().d; } }";
        let hetas = bf_highlight(src).unwrap();
        let by_text = |t: &str| hetas.iter().find(|h| h.text == t).unwrap().class;
        assert_eq!(by_text("a"), Any);
        assert_eq!(by_text("b"), FieldIdentifier);
        assert_eq!(by_text("c"), FunctionIdentifier);
        assert_eq!(by_text("d"), FieldIdentifier);
        assert_eq!(by_text("Object"), TypeIdentifier);
        assert_eq!(by_text("o"), VariableDeclarator);
    }

    #[test]
    fn annotation_and_class_declaration() {
        assert_eq!(
            classes("@A class B { }"),
            vec![
                AnnotationDeclarator,
                AnnotationDeclarator,
                Keyword,
                ClassDeclarator,
                Any,
                Any
            ]
        );
    }

    #[test]
    fn lookahead_ambiguity_fixtures() {
        // the class of `b` depends on the token after it
        let field = classes("class A { int m() { a.b; } }");
        let call = classes("class A { int m() { a.b(); } }");
        let b_field = field[10];
        let b_call = call[10];
        assert_eq!(b_field, FieldIdentifier);
        assert_eq!(b_call, FunctionIdentifier);
        // same prefix token rules, diverging class at the same position
        assert_eq!(field[..10], call[..10]);
        assert_ne!(b_field, b_call);
        // declarator flavor also depends on the next token
        let var_decl = classes("class A { int m() { int x; } }");
        let method = classes("class A { int x() { } }");
        assert_eq!(var_decl[9], VariableDeclarator);
        assert_eq!(method[4], FunctionDeclarator);
    }

    #[test]
    fn bare_call_and_new_expression() {
        let src = "class A { int m() { f(); Foo p = new Foo(1); } }";
        let hetas = bf_highlight(src).unwrap();
        let by_text = |t: &str| {
            hetas
                .iter()
                .filter(|h| h.text == t)
                .map(|h| h.class)
                .collect::<Vec<_>>()
        };
        assert_eq!(by_text("f"), vec![FunctionIdentifier]);
        // Foo appears as a declared type and as the constructed type
        assert_eq!(by_text("Foo"), vec![TypeIdentifier, TypeIdentifier]);
        assert_eq!(by_text("new"), vec![Keyword]);
        assert_eq!(by_text("1"), vec![Literal]);
    }

    #[test]
    fn imports_comments_and_params() {
        let src = "import util.fmt;\nclass A { // note\n int add(int lhs, Foo rhs) { return lhs; } }";
        let hetas = bf_highlight(src).unwrap();
        let by_text = |t: &str| hetas.iter().find(|h| h.text == t).unwrap().class;
        assert_eq!(by_text("util"), Any);
        assert_eq!(by_text("fmt"), Any);
        assert_eq!(by_text("// note"), Comment);
        assert_eq!(by_text("add"), FunctionDeclarator);
        assert_eq!(by_text("lhs"), VariableDeclarator);
        assert_eq!(by_text("rhs"), VariableDeclarator);
        assert_eq!(by_text("Foo"), TypeIdentifier);
        // the return-expression use of lhs is plain text
        let lhs_classes: Vec<_> = hetas
            .iter()
            .filter(|h| h.text == "lhs")
            .map(|h| h.class)
            .collect();
        assert_eq!(lhs_classes, vec![VariableDeclarator, Any]);
    }

    #[test]
    fn every_token_gets_exactly_one_class() {
        let src = "@Tag class A { int count = 0; @Fast bool check(Foo[] all) { \
                   var ok = true; while (ok && count < 9) { all[0].poke(); ok = false; } \
                   return ok; } }";
        let hetas = bf_highlight(src).unwrap();
        let tokens = lex(src).unwrap();
        assert_eq!(hetas.len(), tokens.len());
        for (h, t) in hetas.iter().zip(&tokens) {
            assert_eq!((h.start, h.end), (t.start, t.end));
            assert_eq!(h.rule, t.rule);
        }
    }

    #[test]
    fn errors_propagate() {
        assert!(matches!(
            bf_highlight("class A { # }"),
            Err(FrontendError::Lex(_))
        ));
        assert!(matches!(
            bf_highlight("class A {"),
            Err(FrontendError::Parse(_))
        ));
    }
}
