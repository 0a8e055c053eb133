//! Syntax tree produced by the parser.
//!
//! Children reference tokens by index into the lexed token sequence, so the
//! tree stays cheap and every walker can recover spans and texts from the
//! original tokens. Comment tokens are never referenced by any node.

/// Production label of a tree node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    CompilationUnit,
    ImportDecl,
    ClassDecl,
    Annotation,
    FieldDecl,
    MethodDecl,
    ParamList,
    Param,
    Type,
    Block,
    VarDeclStmt,
    ExprStmt,
    IfStmt,
    WhileStmt,
    ReturnStmt,
    Assign,
    Binary,
    Unary,
    Call,
    FieldAccess,
    Index,
    New,
    Paren,
    LiteralExpr,
    IdentExpr,
}

/// A child of a node: a nested node or a token reference.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AstChild {
    Node(AstNode),
    /// Index into the token sequence the tree was parsed from.
    Token(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AstNode {
    pub kind: NodeKind,
    pub children: Vec<AstChild>,
    /// First and last token index covered by this node.
    pub span: (usize, usize),
}

impl AstNode {
    pub fn new(kind: NodeKind, children: Vec<AstChild>) -> Self {
        let tokens = collect_tokens(&children);
        debug_assert!(!tokens.is_empty(), "a node must cover at least one token");
        debug_assert!(
            tokens.windows(2).all(|w| w[0] < w[1]),
            "child token indices must be strictly increasing"
        );
        let span = (tokens[0], *tokens.last().unwrap());
        AstNode { kind, children, span }
    }

    /// All token indices in this subtree, in order.
    pub fn token_indices(&self) -> Vec<usize> {
        collect_tokens(&self.children)
    }

    /// Child nodes only.
    pub fn nodes(&self) -> impl Iterator<Item = &AstNode> {
        self.children.iter().filter_map(|c| match c {
            AstChild::Node(n) => Some(n),
            AstChild::Token(_) => None,
        })
    }

    /// Direct token children only.
    pub fn tokens(&self) -> impl Iterator<Item = usize> + '_ {
        self.children.iter().filter_map(|c| match c {
            AstChild::Token(i) => Some(*i),
            AstChild::Node(_) => None,
        })
    }
}

fn collect_tokens(children: &[AstChild]) -> Vec<usize> {
    let mut out = Vec::new();
    for child in children {
        match child {
            AstChild::Token(i) => out.push(*i),
            AstChild::Node(n) => out.extend(n.token_indices()),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parent_tokens_are_the_ordered_union_of_children() {
        let inner = AstNode::new(NodeKind::IdentExpr, vec![AstChild::Token(2)]);
        let node = AstNode::new(
            NodeKind::ExprStmt,
            vec![AstChild::Node(inner), AstChild::Token(3)],
        );
        assert_eq!(node.token_indices(), vec![2, 3]);
        assert_eq!(node.span, (2, 3));
    }
}
