//! Deterministic recursive-descent parser.
//!
//! One token of lookahead, plus the documented disambiguations: inside a
//! block, `IDENT IDENT …` and `IDENT [ ] …` start declarations, anything
//! else starting with IDENT is an expression statement. Comment tokens are
//! skipped entirely but keep their indices in the token sequence.

use super::ast::{AstChild, AstNode, NodeKind};
use super::TokenRule;
use crate::token::Eta;

/// First grammar violation, reporting the offending token index (equal to
/// the token count when the input ended early) and what was admissible.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("parse error at token {token_index}: expected {}", expected.join(" | "))]
pub struct ParseError {
    pub token_index: usize,
    pub expected: Vec<&'static str>,
}

/// Parses a full compilation unit.
pub fn parse(tokens: &[Eta]) -> Result<AstNode, ParseError> {
    let mut p = Parser::new(tokens);
    let unit = p.compilation_unit()?;
    Ok(unit)
}

struct Parser<'a> {
    tokens: &'a [Eta],
    /// Indices of non-comment tokens, in order.
    visible: Vec<usize>,
    /// Cursor into `visible`.
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(tokens: &'a [Eta]) -> Self {
        let visible = tokens
            .iter()
            .enumerate()
            .filter(|(_, t)| !TokenRule::from_id(t.rule).is_some_and(|r| r.is_comment()))
            .map(|(i, _)| i)
            .collect();
        Parser { tokens, visible, pos: 0 }
    }

    /// Rule of the k-th upcoming visible token.
    fn peek(&self, k: usize) -> Option<TokenRule> {
        self.visible
            .get(self.pos + k)
            .and_then(|&i| TokenRule::from_id(self.tokens[i].rule))
    }

    /// Token-sequence index where an error at the cursor should point.
    fn here(&self) -> usize {
        self.visible
            .get(self.pos)
            .copied()
            .unwrap_or(self.tokens.len())
    }

    fn fail<T>(&self, expected: Vec<&'static str>) -> Result<T, ParseError> {
        Err(ParseError {
            token_index: self.here(),
            expected,
        })
    }

    /// Consumes the next visible token, requiring `rule`.
    fn expect(&mut self, rule: TokenRule, what: &'static str) -> Result<AstChild, ParseError> {
        if self.peek(0) == Some(rule) {
            let idx = self.visible[self.pos];
            self.pos += 1;
            Ok(AstChild::Token(idx))
        } else {
            self.fail(vec![what])
        }
    }

    fn eat(&mut self, rule: TokenRule) -> Option<AstChild> {
        if self.peek(0) == Some(rule) {
            let idx = self.visible[self.pos];
            self.pos += 1;
            Some(AstChild::Token(idx))
        } else {
            None
        }
    }

    fn at_type_start(&self) -> bool {
        matches!(
            self.peek(0),
            Some(r) if r.is_primitive_type() || r == TokenRule::Ident
        )
    }

    fn compilation_unit(&mut self) -> Result<AstNode, ParseError> {
        let mut children = Vec::new();
        while self.peek(0) == Some(TokenRule::KwImport) {
            children.push(AstChild::Node(self.import_decl()?));
        }
        while self.peek(0).is_some() {
            children.push(AstChild::Node(self.class_decl()?));
        }
        if children.is_empty() {
            // an empty unit covers no tokens; give it a synthetic empty span
            return Ok(AstNode {
                kind: NodeKind::CompilationUnit,
                children,
                span: (0, 0),
            });
        }
        Ok(AstNode::new(NodeKind::CompilationUnit, children))
    }

    fn import_decl(&mut self) -> Result<AstNode, ParseError> {
        let mut children = vec![self.expect(TokenRule::KwImport, "'import'")?];
        children.push(self.expect(TokenRule::Ident, "IDENT")?);
        while let Some(dot) = self.eat(TokenRule::Dot) {
            children.push(dot);
            children.push(self.expect(TokenRule::Ident, "IDENT")?);
        }
        children.push(self.expect(TokenRule::Semi, "';'")?);
        Ok(AstNode::new(NodeKind::ImportDecl, children))
    }

    fn annotation(&mut self) -> Result<AstNode, ParseError> {
        let at = self.expect(TokenRule::At, "'@'")?;
        let name = self.expect(TokenRule::Ident, "IDENT")?;
        Ok(AstNode::new(NodeKind::Annotation, vec![at, name]))
    }

    fn class_decl(&mut self) -> Result<AstNode, ParseError> {
        let mut children = Vec::new();
        while self.peek(0) == Some(TokenRule::At) {
            children.push(AstChild::Node(self.annotation()?));
        }
        children.push(self.expect(TokenRule::KwClass, "'class'")?);
        children.push(self.expect(TokenRule::Ident, "IDENT")?);
        children.push(self.expect(TokenRule::LBrace, "'{'")?);
        while self.peek(0) != Some(TokenRule::RBrace) && self.peek(0).is_some() {
            children.push(AstChild::Node(self.member()?));
        }
        children.push(self.expect(TokenRule::RBrace, "'}'")?);
        Ok(AstNode::new(NodeKind::ClassDecl, children))
    }

    fn member(&mut self) -> Result<AstNode, ParseError> {
        let mut annotations = Vec::new();
        while self.peek(0) == Some(TokenRule::At) {
            annotations.push(AstChild::Node(self.annotation()?));
        }
        if !self.at_type_start() {
            return self.fail(vec!["type", "'@'", "'}'"]);
        }
        let ty = AstChild::Node(self.type_ref()?);
        let name = self.expect(TokenRule::Ident, "IDENT")?;
        if self.peek(0) == Some(TokenRule::LParen) {
            // method
            let mut children = annotations;
            children.push(ty);
            children.push(name);
            children.push(AstChild::Node(self.param_list()?));
            children.push(AstChild::Node(self.block()?));
            Ok(AstNode::new(NodeKind::MethodDecl, children))
        } else {
            // field; the grammar allows annotations only on methods and classes
            if !annotations.is_empty() {
                return self.fail(vec!["'('"]);
            }
            let mut children = vec![ty, name];
            if let Some(assign) = self.eat(TokenRule::Assign) {
                children.push(assign);
                children.push(AstChild::Node(self.expr()?));
            }
            children.push(self.expect(TokenRule::Semi, "';'")?);
            Ok(AstNode::new(NodeKind::FieldDecl, children))
        }
    }

    /// Type reference: primitive keyword, or IDENT optionally suffixed `[ ]`.
    fn type_ref(&mut self) -> Result<AstNode, ParseError> {
        match self.peek(0) {
            Some(r) if r.is_primitive_type() => {
                let tok = self.expect(r, "type")?;
                Ok(AstNode::new(NodeKind::Type, vec![tok]))
            }
            Some(TokenRule::Ident) => {
                let mut children = vec![self.expect(TokenRule::Ident, "IDENT")?];
                if self.peek(0) == Some(TokenRule::LBracket)
                    && self.peek(1) == Some(TokenRule::RBracket)
                {
                    children.push(self.expect(TokenRule::LBracket, "'['")?);
                    children.push(self.expect(TokenRule::RBracket, "']'")?);
                }
                Ok(AstNode::new(NodeKind::Type, children))
            }
            _ => self.fail(vec!["type"]),
        }
    }

    fn param_list(&mut self) -> Result<AstNode, ParseError> {
        let mut children = vec![self.expect(TokenRule::LParen, "'('")?];
        if self.peek(0) != Some(TokenRule::RParen) {
            loop {
                let ty = AstChild::Node(self.type_ref()?);
                let name = self.expect(TokenRule::Ident, "IDENT")?;
                children.push(AstChild::Node(AstNode::new(NodeKind::Param, vec![ty, name])));
                match self.eat(TokenRule::Comma) {
                    Some(comma) => children.push(comma),
                    None => break,
                }
            }
        }
        children.push(self.expect(TokenRule::RParen, "')'")?);
        Ok(AstNode::new(NodeKind::ParamList, children))
    }

    fn block(&mut self) -> Result<AstNode, ParseError> {
        let mut children = vec![self.expect(TokenRule::LBrace, "'{'")?];
        while self.peek(0) != Some(TokenRule::RBrace) && self.peek(0).is_some() {
            children.push(AstChild::Node(self.statement()?));
        }
        children.push(self.expect(TokenRule::RBrace, "'}'")?);
        Ok(AstNode::new(NodeKind::Block, children))
    }

    fn statement(&mut self) -> Result<AstNode, ParseError> {
        match self.peek(0) {
            Some(TokenRule::KwVar) => self.var_decl_keyword(),
            Some(TokenRule::KwIf) => self.if_stmt(),
            Some(TokenRule::KwWhile) => self.while_stmt(),
            Some(TokenRule::KwReturn) => self.return_stmt(),
            Some(TokenRule::LBrace) => self.block(),
            Some(r) if r.is_primitive_type() => self.var_decl_typed(),
            Some(TokenRule::Ident)
                if self.peek(1) == Some(TokenRule::Ident)
                    || (self.peek(1) == Some(TokenRule::LBracket)
                        && self.peek(2) == Some(TokenRule::RBracket)) =>
            {
                self.var_decl_typed()
            }
            Some(_) => self.expr_stmt(),
            None => self.fail(vec!["statement"]),
        }
    }

    fn var_decl_keyword(&mut self) -> Result<AstNode, ParseError> {
        let mut children = vec![self.expect(TokenRule::KwVar, "'var'")?];
        children.push(self.expect(TokenRule::Ident, "IDENT")?);
        children.push(self.expect(TokenRule::Assign, "'='")?);
        children.push(AstChild::Node(self.expr()?));
        children.push(self.expect(TokenRule::Semi, "';'")?);
        Ok(AstNode::new(NodeKind::VarDeclStmt, children))
    }

    fn var_decl_typed(&mut self) -> Result<AstNode, ParseError> {
        let mut children = vec![AstChild::Node(self.type_ref()?)];
        children.push(self.expect(TokenRule::Ident, "IDENT")?);
        if let Some(assign) = self.eat(TokenRule::Assign) {
            children.push(assign);
            children.push(AstChild::Node(self.expr()?));
        }
        children.push(self.expect(TokenRule::Semi, "';'")?);
        Ok(AstNode::new(NodeKind::VarDeclStmt, children))
    }

    fn if_stmt(&mut self) -> Result<AstNode, ParseError> {
        let mut children = vec![self.expect(TokenRule::KwIf, "'if'")?];
        children.push(self.expect(TokenRule::LParen, "'('")?);
        children.push(AstChild::Node(self.expr()?));
        children.push(self.expect(TokenRule::RParen, "')'")?);
        children.push(AstChild::Node(self.statement()?));
        if let Some(else_tok) = self.eat(TokenRule::KwElse) {
            children.push(else_tok);
            children.push(AstChild::Node(self.statement()?));
        }
        Ok(AstNode::new(NodeKind::IfStmt, children))
    }

    fn while_stmt(&mut self) -> Result<AstNode, ParseError> {
        let mut children = vec![self.expect(TokenRule::KwWhile, "'while'")?];
        children.push(self.expect(TokenRule::LParen, "'('")?);
        children.push(AstChild::Node(self.expr()?));
        children.push(self.expect(TokenRule::RParen, "')'")?);
        children.push(AstChild::Node(self.statement()?));
        Ok(AstNode::new(NodeKind::WhileStmt, children))
    }

    fn return_stmt(&mut self) -> Result<AstNode, ParseError> {
        let mut children = vec![self.expect(TokenRule::KwReturn, "'return'")?];
        if self.peek(0) != Some(TokenRule::Semi) {
            children.push(AstChild::Node(self.expr()?));
        }
        children.push(self.expect(TokenRule::Semi, "';'")?);
        Ok(AstNode::new(NodeKind::ReturnStmt, children))
    }

    fn expr_stmt(&mut self) -> Result<AstNode, ParseError> {
        let expr = AstChild::Node(self.expr()?);
        let semi = self.expect(TokenRule::Semi, "';'")?;
        Ok(AstNode::new(NodeKind::ExprStmt, vec![expr, semi]))
    }

    fn expr(&mut self) -> Result<AstNode, ParseError> {
        self.assignment()
    }

    fn assignment(&mut self) -> Result<AstNode, ParseError> {
        let lhs = self.or_expr()?;
        if let Some(assign) = self.eat(TokenRule::Assign) {
            let rhs = self.assignment()?;
            return Ok(AstNode::new(
                NodeKind::Assign,
                vec![AstChild::Node(lhs), assign, AstChild::Node(rhs)],
            ));
        }
        Ok(lhs)
    }

    fn binary_level(
        &mut self,
        ops: &[TokenRule],
        next: fn(&mut Self) -> Result<AstNode, ParseError>,
    ) -> Result<AstNode, ParseError> {
        let mut lhs = next(self)?;
        while let Some(rule) = self.peek(0).filter(|r| ops.contains(r)) {
            let op = self.expect(rule, "operator")?;
            let rhs = next(self)?;
            lhs = AstNode::new(
                NodeKind::Binary,
                vec![AstChild::Node(lhs), op, AstChild::Node(rhs)],
            );
        }
        Ok(lhs)
    }

    fn or_expr(&mut self) -> Result<AstNode, ParseError> {
        self.binary_level(&[TokenRule::OrOr], Self::and_expr)
    }

    fn and_expr(&mut self) -> Result<AstNode, ParseError> {
        self.binary_level(&[TokenRule::AndAnd], Self::equality)
    }

    fn equality(&mut self) -> Result<AstNode, ParseError> {
        self.binary_level(&[TokenRule::Eq, TokenRule::Neq], Self::relational)
    }

    fn relational(&mut self) -> Result<AstNode, ParseError> {
        self.binary_level(
            &[TokenRule::Lt, TokenRule::Gt, TokenRule::Le, TokenRule::Ge],
            Self::additive,
        )
    }

    fn additive(&mut self) -> Result<AstNode, ParseError> {
        self.binary_level(&[TokenRule::Plus, TokenRule::Minus], Self::multiplicative)
    }

    fn multiplicative(&mut self) -> Result<AstNode, ParseError> {
        self.binary_level(&[TokenRule::Star, TokenRule::Slash], Self::unary)
    }

    fn unary(&mut self) -> Result<AstNode, ParseError> {
        match self.peek(0) {
            Some(rule @ (TokenRule::Bang | TokenRule::Minus)) => {
                let op = self.expect(rule, "operator")?;
                let operand = self.unary()?;
                Ok(AstNode::new(NodeKind::Unary, vec![op, AstChild::Node(operand)]))
            }
            _ => self.postfix(),
        }
    }

    fn postfix(&mut self) -> Result<AstNode, ParseError> {
        let mut expr = self.primary()?;
        loop {
            match self.peek(0) {
                Some(TokenRule::LParen) => {
                    let mut children = vec![AstChild::Node(expr)];
                    children.push(self.expect(TokenRule::LParen, "'('")?);
                    self.arg_list(&mut children)?;
                    children.push(self.expect(TokenRule::RParen, "')'")?);
                    expr = AstNode::new(NodeKind::Call, children);
                }
                Some(TokenRule::Dot) => {
                    let dot = self.expect(TokenRule::Dot, "'.'")?;
                    let name = self.expect(TokenRule::Ident, "IDENT")?;
                    expr = AstNode::new(
                        NodeKind::FieldAccess,
                        vec![AstChild::Node(expr), dot, name],
                    );
                }
                Some(TokenRule::LBracket) => {
                    let lb = self.expect(TokenRule::LBracket, "'['")?;
                    let index = self.expr()?;
                    let rb = self.expect(TokenRule::RBracket, "']'")?;
                    expr = AstNode::new(
                        NodeKind::Index,
                        vec![AstChild::Node(expr), lb, AstChild::Node(index), rb],
                    );
                }
                _ => return Ok(expr),
            }
        }
    }

    fn arg_list(&mut self, children: &mut Vec<AstChild>) -> Result<(), ParseError> {
        if self.peek(0) == Some(TokenRule::RParen) {
            return Ok(());
        }
        loop {
            children.push(AstChild::Node(self.expr()?));
            match self.eat(TokenRule::Comma) {
                Some(comma) => children.push(comma),
                None => return Ok(()),
            }
        }
    }

    fn primary(&mut self) -> Result<AstNode, ParseError> {
        match self.peek(0) {
            Some(
                rule @ (TokenRule::IntLit
                | TokenRule::FloatLit
                | TokenRule::BoolLit
                | TokenRule::NullLit
                | TokenRule::StringLit
                | TokenRule::CharLit),
            ) => {
                let tok = self.expect(rule, "literal")?;
                Ok(AstNode::new(NodeKind::LiteralExpr, vec![tok]))
            }
            Some(TokenRule::Ident) => {
                let tok = self.expect(TokenRule::Ident, "IDENT")?;
                Ok(AstNode::new(NodeKind::IdentExpr, vec![tok]))
            }
            Some(TokenRule::LParen) => {
                let lp = self.expect(TokenRule::LParen, "'('")?;
                let inner = self.expr()?;
                let rp = self.expect(TokenRule::RParen, "')'")?;
                Ok(AstNode::new(
                    NodeKind::Paren,
                    vec![lp, AstChild::Node(inner), rp],
                ))
            }
            Some(TokenRule::KwNew) => {
                let mut children = vec![self.expect(TokenRule::KwNew, "'new'")?];
                children.push(self.expect(TokenRule::Ident, "IDENT")?);
                children.push(self.expect(TokenRule::LParen, "'('")?);
                self.arg_list(&mut children)?;
                children.push(self.expect(TokenRule::RParen, "')'")?);
                Ok(AstNode::new(NodeKind::New, children))
            }
            _ => self.fail(vec!["expression"]),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minilang::lex;

    fn parse_str(src: &str) -> Result<AstNode, ParseError> {
        parse(&lex(src).unwrap())
    }

    #[test]
    fn empty_class() {
        let unit = parse_str("class A { }").unwrap();
        assert_eq!(unit.kind, NodeKind::CompilationUnit);
        let class = unit.nodes().next().unwrap();
        assert_eq!(class.kind, NodeKind::ClassDecl);
        // class token, name, braces; no members
        assert_eq!(class.nodes().count(), 0);
    }

    #[test]
    fn class_without_name_fails_at_token_1() {
        let err = parse_str("class {").unwrap_err();
        assert_eq!(err.token_index, 1);
        assert_eq!(err.expected, vec!["IDENT"]);
    }

    #[test]
    fn statement_with_ident_type_is_a_declaration() {
        let unit = parse_str("class A { int m() { String lang = \"Java.\"; } }").unwrap();
        let class = unit.nodes().next().unwrap();
        let method = class.nodes().next().unwrap();
        assert_eq!(method.kind, NodeKind::MethodDecl);
        let block = method
            .nodes()
            .find(|n| n.kind == NodeKind::Block)
            .unwrap();
        let stmt = block.nodes().next().unwrap();
        assert_eq!(stmt.kind, NodeKind::VarDeclStmt);
        let ty = stmt.nodes().next().unwrap();
        assert_eq!(ty.kind, NodeKind::Type);
    }

    #[test]
    fn array_type_vs_indexing() {
        // IDENT [ ] IDENT declares; IDENT [ expr ] indexes
        let ok = parse_str("class A { int m() { Foo[] x; a[0] = 1; } }").unwrap();
        let class = ok.nodes().next().unwrap();
        let method = class.nodes().next().unwrap();
        let block = method.nodes().find(|n| n.kind == NodeKind::Block).unwrap();
        let kinds: Vec<NodeKind> = block.nodes().map(|n| n.kind).collect();
        assert_eq!(kinds, vec![NodeKind::VarDeclStmt, NodeKind::ExprStmt]);
    }

    #[test]
    fn comments_are_invisible_to_the_parser_but_keep_indices() {
        let toks = lex("class /* hey */ A { // trailing\n }").unwrap();
        let unit = parse(&toks).unwrap();
        let class = unit.nodes().next().unwrap();
        // direct token children must skip the comment tokens (indices 1 and 4)
        let direct: Vec<usize> = class.tokens().collect();
        assert_eq!(direct, vec![0, 2, 3, 5]);
    }

    #[test]
    fn imports_then_classes() {
        let unit = parse_str("import a.b; import c; class A { }").unwrap();
        let kinds: Vec<NodeKind> = unit.nodes().map(|n| n.kind).collect();
        assert_eq!(
            kinds,
            vec![NodeKind::ImportDecl, NodeKind::ImportDecl, NodeKind::ClassDecl]
        );
    }

    #[test]
    fn annotated_field_is_rejected() {
        assert!(parse_str("class A { @X int f; }").is_err());
        assert!(parse_str("class A { @X int f() { } }").is_ok());
    }

    #[test]
    fn trailing_garbage_fails() {
        let err = parse_str("class A { } ;").unwrap_err();
        assert_eq!(err.token_index, 4);
    }

    #[test]
    fn empty_input_is_a_valid_unit() {
        let unit = parse_str("").unwrap();
        assert!(unit.children.is_empty());
    }

    #[test]
    fn precedence_shapes() {
        // a = b || c && d == e < f + g * -h
        let unit = parse_str("class A { int m() { a = b || c && d == e < f + g * -h; } }");
        assert!(unit.is_ok());
        // 1 + 2 * 3: the multiplication binds tighter
        let unit = parse_str("class A { int m() { x = 1 + 2 * 3; } }").unwrap();
        let class = unit.nodes().next().unwrap();
        let method = class.nodes().next().unwrap();
        let block = method.nodes().find(|n| n.kind == NodeKind::Block).unwrap();
        let stmt = block.nodes().next().unwrap(); // ExprStmt(Assign)
        let assign = stmt.nodes().next().unwrap();
        assert_eq!(assign.kind, NodeKind::Assign);
        let add = assign.nodes().nth(1).unwrap();
        assert_eq!(add.kind, NodeKind::Binary);
        let mul = add.nodes().nth(1).unwrap();
        assert_eq!(mul.kind, NodeKind::Binary);
    }

    #[test]
    fn parent_token_indices_cover_children_in_order() {
        let toks = lex("class A { int m(bool p) { if (p) { return 1; } else { return 0; } } }")
            .unwrap();
        let unit = parse(&toks).unwrap();
        fn check(node: &AstNode) {
            let all = node.token_indices();
            assert!(all.windows(2).all(|w| w[0] < w[1]));
            assert_eq!(node.span, (all[0], *all.last().unwrap()));
            for n in node.nodes() {
                check(n);
            }
        }
        check(&unit);
        // every non-comment token belongs to exactly one leaf position
        assert_eq!(unit.token_indices().len(), toks.len());
    }
}
