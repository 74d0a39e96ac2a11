//! Recursive-descent parser for the C subset.
//!
//! Parsing is total: a syntax error triggers panic-mode recovery that skips
//! to the next `;` (consumed) or `}` (left in place) and records the skipped
//! region as a problem item/statement. The worst case for garbage input is
//! a translation unit consisting of problem regions.

use super::lexer::{tokenize, Token, TokenKind};

/// Maximum nesting depth before the parser gives up on a subtree. Keeps
/// recursion bounded on adversarial inputs like `((((((...`.
const MAX_DEPTH: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Span {
    pub start_line: u32,
    pub start_col: u32,
    pub end_line: u32,
    pub end_col: u32,
    pub start_byte: usize,
    pub end_byte: usize,
}

impl Span {
    fn of(tok: &Token) -> Span {
        Span {
            start_line: tok.start_line,
            start_col: tok.start_col,
            end_line: tok.end_line,
            end_col: tok.end_col,
            start_byte: tok.start_byte,
            end_byte: tok.end_byte,
        }
    }

    pub fn to(self, other: Span) -> Span {
        Span {
            start_line: self.start_line,
            start_col: self.start_col,
            end_line: other.end_line,
            end_col: other.end_col,
            start_byte: self.start_byte,
            end_byte: other.end_byte,
        }
    }

    /// Empty span at the very start of a file; used for empty inputs.
    pub fn zero() -> Span {
        Span { start_line: 1, start_col: 1, end_line: 1, end_col: 1, start_byte: 0, end_byte: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeRef {
    pub base: BaseType,
    pub pointer_depth: u8,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BaseType {
    Int,
    Char,
    Void,
    Struct(String),
}

impl TypeRef {
    pub fn display(&self) -> String {
        let base = match &self.base {
            BaseType::Int => "int",
            BaseType::Char => "char",
            BaseType::Void => "void",
            BaseType::Struct(name) => name.as_str(),
        };
        format!("{}{}", base, "*".repeat(self.pointer_depth as usize))
    }

    pub fn is_void(&self) -> bool {
        self.base == BaseType::Void && self.pointer_depth == 0
    }
}

#[derive(Debug)]
pub enum Item {
    Function(FunctionDef),
    Struct(StructDef),
    Global(VarDecl),
    Problem(Problem),
}

#[derive(Debug)]
pub struct FunctionDef {
    pub return_type: TypeRef,
    pub name: String,
    pub name_span: Span,
    pub params: Vec<Param>,
    /// `None` for a prototype.
    pub body: Option<Block>,
    pub span: Span,
}

#[derive(Debug)]
pub struct Param {
    pub ty: TypeRef,
    pub name: Option<String>,
    pub span: Span,
}

#[derive(Debug)]
pub struct StructDef {
    pub name: String,
    pub fields: Vec<FieldDef>,
    pub span: Span,
}

#[derive(Debug)]
pub struct FieldDef {
    pub ty: TypeRef,
    pub name: String,
    pub span: Span,
}

#[derive(Debug)]
pub struct VarDecl {
    pub ty: TypeRef,
    pub name: String,
    pub init: Option<Expr>,
    pub span: Span,
}

#[derive(Debug)]
pub struct Block {
    pub stmts: Vec<Stmt>,
    pub span: Span,
}

#[derive(Debug)]
pub struct Problem {
    pub span: Span,
    pub message: String,
}

#[derive(Debug)]
pub enum Stmt {
    Compound(Block),
    If { cond: Expr, then_branch: Box<Stmt>, else_branch: Option<Box<Stmt>>, span: Span },
    While { cond: Expr, body: Box<Stmt>, span: Span },
    For {
        init: Option<ForInit>,
        cond: Option<Expr>,
        iter: Option<Expr>,
        body: Box<Stmt>,
        span: Span,
    },
    Return { value: Option<Expr>, span: Span },
    Break(Span),
    Continue(Span),
    Decl(VarDecl),
    Expr(Expr),
    Empty(Span),
    Problem(Problem),
}

#[derive(Debug)]
pub enum ForInit {
    Decl(VarDecl),
    Expr(Expr),
}

#[derive(Debug)]
pub enum Expr {
    IntLit { value: i64, span: Span },
    CharLit { value: i64, span: Span },
    StrLit { value: String, span: Span },
    NullLit { span: Span },
    Ref { name: String, span: Span },
    Binary { op: &'static str, lhs: Box<Expr>, rhs: Box<Expr>, span: Span },
    Unary { op: &'static str, operand: Box<Expr>, span: Span },
    Ternary { cond: Box<Expr>, then_expr: Box<Expr>, else_expr: Box<Expr>, span: Span },
    Call { name: String, name_span: Span, args: Vec<Expr>, span: Span },
    MemberCall { base: Box<Expr>, field: String, arrow: bool, args: Vec<Expr>, span: Span },
    Member { base: Box<Expr>, field: String, arrow: bool, span: Span },
}

impl Expr {
    pub fn span(&self) -> Span {
        match self {
            Expr::IntLit { span, .. }
            | Expr::CharLit { span, .. }
            | Expr::StrLit { span, .. }
            | Expr::NullLit { span }
            | Expr::Ref { span, .. }
            | Expr::Binary { span, .. }
            | Expr::Unary { span, .. }
            | Expr::Ternary { span, .. }
            | Expr::Call { span, .. }
            | Expr::MemberCall { span, .. }
            | Expr::Member { span, .. } => *span,
        }
    }
}

impl Stmt {
    pub fn span(&self) -> Span {
        match self {
            Stmt::Compound(b) => b.span,
            Stmt::If { span, .. }
            | Stmt::While { span, .. }
            | Stmt::For { span, .. }
            | Stmt::Return { span, .. } => *span,
            Stmt::Break(s) | Stmt::Continue(s) | Stmt::Empty(s) => *s,
            Stmt::Decl(d) => d.span,
            Stmt::Expr(e) => e.span(),
            Stmt::Problem(p) => p.span,
        }
    }
}

#[derive(Debug)]
pub struct ParseTree {
    pub items: Vec<Item>,
    pub span: Span,
}

struct ParseError {
    message: String,
}

type PResult<T> = std::result::Result<T, ParseError>;

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    depth: usize,
}

pub fn parse(source: &str) -> ParseTree {
    let tokens = tokenize(source);
    let span = if tokens.is_empty() {
        Span::zero()
    } else {
        Span::of(&tokens[0]).to(Span::of(tokens.last().unwrap()))
    };
    let mut parser = Parser { tokens, pos: 0, depth: 0 };
    let mut items = Vec::new();
    while !parser.at_eof() {
        let start = parser.pos;
        match parser.parse_item() {
            Ok(item) => items.push(item),
            Err(err) => items.push(Item::Problem(parser.recover_toplevel(start, err))),
        }
    }
    ParseTree { items, span }
}

impl Parser {
    fn at_eof(&self) -> bool {
        self.pos >= self.tokens.len()
    }

    fn peek(&self) -> Option<&TokenKind> {
        self.tokens.get(self.pos).map(|t| &t.kind)
    }

    fn peek_at(&self, offset: usize) -> Option<&TokenKind> {
        self.tokens.get(self.pos + offset).map(|t| &t.kind)
    }

    fn span_here(&self) -> Span {
        self.tokens
            .get(self.pos)
            .or_else(|| self.tokens.last())
            .map(Span::of)
            .unwrap_or_else(Span::zero)
    }

    fn bump(&mut self) -> &Token {
        let tok = &self.tokens[self.pos];
        self.pos += 1;
        tok
    }

    fn eat(&mut self, kind: &TokenKind) -> bool {
        if self.peek() == Some(kind) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, kind: &TokenKind, what: &str) -> PResult<Span> {
        if self.peek() == Some(kind) {
            Ok(Span::of(self.bump()))
        } else {
            Err(self.error_here(&format!("expected {what}")))
        }
    }

    fn error_here(&self, message: &str) -> ParseError {
        let found = match self.peek() {
            Some(k) => k.describe(),
            None => "end of input".to_string(),
        };
        ParseError { message: format!("{message}, found {found}") }
    }

    fn enter(&mut self) -> PResult<()> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            self.depth -= 1;
            return Err(ParseError { message: "nesting too deep".into() });
        }
        Ok(())
    }

    fn leave(&mut self) {
        self.depth -= 1;
    }

    /// Skip to the next `;` (consumed) or to a `}` (not consumed), starting
    /// no earlier than `start`; always makes progress.
    fn recover_region(&mut self, start: usize, stop_at_rbrace: bool) -> Span {
        if self.pos == start && !self.at_eof() {
            // error at the very first token: always consume it, except a
            // closing brace at top level which recover_toplevel handles
            if !(stop_at_rbrace && self.peek() == Some(&TokenKind::RBrace)) {
                self.pos += 1;
            }
        }
        while !self.at_eof() {
            match self.peek() {
                Some(TokenKind::Semicolon) => {
                    self.pos += 1;
                    break;
                }
                Some(TokenKind::RBrace) if stop_at_rbrace => break,
                _ => self.pos += 1,
            }
        }
        let last = self.pos.saturating_sub(1).max(start);
        let first = Span::of(&self.tokens[start.min(self.tokens.len() - 1)]);
        let lastspan = Span::of(&self.tokens[last.min(self.tokens.len() - 1)]);
        first.to(lastspan)
    }

    fn recover_toplevel(&mut self, start: usize, err: ParseError) -> Problem {
        if self.pos == start && self.peek() == Some(&TokenKind::RBrace) {
            // a stray brace cannot close anything at the top level
            self.pos += 1;
        }
        let span = self.recover_region(start, false);
        Problem { span, message: err.message }
    }

    fn recover_stmt(&mut self, start: usize, err: ParseError) -> Problem {
        let span = self.recover_region(start, true);
        Problem { span, message: err.message }
    }

    // ---- items ----------------------------------------------------------

    fn parse_item(&mut self) -> PResult<Item> {
        if self.peek() == Some(&TokenKind::KwStruct) && matches!(self.peek_at(2), Some(TokenKind::LBrace)) {
            return Ok(Item::Struct(self.parse_struct()?));
        }
        let start_span = self.span_here();
        let ty = self.parse_type()?;
        let (name, name_span) = self.parse_ident("a name")?;
        if self.peek() == Some(&TokenKind::LParen) {
            self.bump();
            let params = self.parse_params()?;
            self.expect(&TokenKind::RParen, "`)` after parameters")?;
            if self.eat(&TokenKind::Semicolon) {
                let span = start_span.to(name_span);
                return Ok(Item::Function(FunctionDef {
                    return_type: ty,
                    name,
                    name_span,
                    params,
                    body: None,
                    span,
                }));
            }
            let body = self.parse_block()?;
            let span = start_span.to(body.span);
            return Ok(Item::Function(FunctionDef {
                return_type: ty,
                name,
                name_span,
                params,
                body: Some(body),
                span,
            }));
        }
        let init = if self.eat(&TokenKind::Assign) { Some(self.parse_expr()?) } else { None };
        let end = self.expect(&TokenKind::Semicolon, "`;` after declaration")?;
        Ok(Item::Global(VarDecl { ty, name, init, span: start_span.to(end) }))
    }

    fn parse_struct(&mut self) -> PResult<StructDef> {
        let start = self.expect(&TokenKind::KwStruct, "`struct`")?;
        let (name, _) = self.parse_ident("a struct name")?;
        self.expect(&TokenKind::LBrace, "`{`")?;
        let mut fields = Vec::new();
        while self.peek() != Some(&TokenKind::RBrace) && !self.at_eof() {
            let fstart = self.span_here();
            let ty = self.parse_type()?;
            let (fname, _) = self.parse_ident("a field name")?;
            let fend = self.expect(&TokenKind::Semicolon, "`;` after field")?;
            fields.push(FieldDef { ty, name: fname, span: fstart.to(fend) });
        }
        self.expect(&TokenKind::RBrace, "`}` after fields")?;
        let end = self.expect(&TokenKind::Semicolon, "`;` after struct")?;
        Ok(StructDef { name, fields, span: start.to(end) })
    }

    fn parse_params(&mut self) -> PResult<Vec<Param>> {
        let mut params = Vec::new();
        if self.peek() == Some(&TokenKind::RParen) {
            return Ok(params);
        }
        if self.peek() == Some(&TokenKind::KwVoid) && self.peek_at(1) == Some(&TokenKind::RParen) {
            self.bump();
            return Ok(params);
        }
        loop {
            let start = self.span_here();
            let ty = self.parse_type()?;
            let mut span = start;
            let name = if let Some(TokenKind::Ident(_)) = self.peek() {
                let (n, s) = self.parse_ident("a parameter name")?;
                span = start.to(s);
                Some(n)
            } else {
                None
            };
            params.push(Param { ty, name, span });
            if !self.eat(&TokenKind::Comma) {
                break;
            }
        }
        Ok(params)
    }

    fn parse_type(&mut self) -> PResult<TypeRef> {
        let base = match self.peek() {
            Some(TokenKind::KwInt) => {
                self.bump();
                BaseType::Int
            }
            Some(TokenKind::KwChar) => {
                self.bump();
                BaseType::Char
            }
            Some(TokenKind::KwVoid) => {
                self.bump();
                BaseType::Void
            }
            Some(TokenKind::KwStruct) => {
                self.bump();
                let (name, _) = self.parse_ident("a struct name")?;
                BaseType::Struct(name)
            }
            _ => return Err(self.error_here("expected a type")),
        };
        let mut pointer_depth = 0u8;
        while self.peek() == Some(&TokenKind::Star) {
            self.bump();
            pointer_depth = pointer_depth.saturating_add(1);
        }
        Ok(TypeRef { base, pointer_depth })
    }

    fn parse_ident(&mut self, what: &str) -> PResult<(String, Span)> {
        match self.peek() {
            Some(TokenKind::Ident(_)) => {
                let tok = self.bump();
                let span = Span::of(tok);
                if let TokenKind::Ident(name) = &tok.kind {
                    Ok((name.clone(), span))
                } else {
                    unreachable!()
                }
            }
            _ => Err(self.error_here(&format!("expected {what}"))),
        }
    }

    // ---- statements ------------------------------------------------------

    fn parse_block(&mut self) -> PResult<Block> {
        self.enter()?;
        let result = self.parse_block_inner();
        self.leave();
        result
    }

    fn parse_block_inner(&mut self) -> PResult<Block> {
        let start = self.expect(&TokenKind::LBrace, "`{`")?;
        let mut stmts = Vec::new();
        while self.peek() != Some(&TokenKind::RBrace) && !self.at_eof() {
            let stmt_start = self.pos;
            match self.parse_stmt() {
                Ok(s) => stmts.push(s),
                Err(err) => stmts.push(Stmt::Problem(self.recover_stmt(stmt_start, err))),
            }
        }
        let end = self.expect(&TokenKind::RBrace, "`}` to close the block")?;
        Ok(Block { stmts, span: start.to(end) })
    }

    fn parse_stmt(&mut self) -> PResult<Stmt> {
        self.enter()?;
        let result = self.parse_stmt_inner();
        self.leave();
        result
    }

    fn parse_stmt_inner(&mut self) -> PResult<Stmt> {
        match self.peek() {
            Some(TokenKind::LBrace) => Ok(Stmt::Compound(self.parse_block()?)),
            Some(TokenKind::Semicolon) => {
                let span = Span::of(self.bump());
                Ok(Stmt::Empty(span))
            }
            Some(TokenKind::KwIf) => {
                let start = Span::of(self.bump());
                self.expect(&TokenKind::LParen, "`(` after `if`")?;
                let cond = self.parse_expr()?;
                self.expect(&TokenKind::RParen, "`)` after condition")?;
                let then_branch = Box::new(self.parse_stmt()?);
                let (else_branch, end) = if self.eat(&TokenKind::KwElse) {
                    let e = self.parse_stmt()?;
                    let span = e.span();
                    (Some(Box::new(e)), span)
                } else {
                    (None, then_branch.span())
                };
                Ok(Stmt::If { cond, then_branch, else_branch, span: start.to(end) })
            }
            Some(TokenKind::KwWhile) => {
                let start = Span::of(self.bump());
                self.expect(&TokenKind::LParen, "`(` after `while`")?;
                let cond = self.parse_expr()?;
                self.expect(&TokenKind::RParen, "`)` after condition")?;
                let body = Box::new(self.parse_stmt()?);
                let end = body.span();
                Ok(Stmt::While { cond, body, span: start.to(end) })
            }
            Some(TokenKind::KwFor) => {
                let start = Span::of(self.bump());
                self.expect(&TokenKind::LParen, "`(` after `for`")?;
                let init = if self.eat(&TokenKind::Semicolon) {
                    None
                } else if matches!(
                    self.peek(),
                    Some(TokenKind::KwInt | TokenKind::KwChar | TokenKind::KwVoid | TokenKind::KwStruct)
                ) {
                    let d = self.parse_var_decl()?;
                    Some(ForInit::Decl(d))
                } else {
                    let e = self.parse_expr()?;
                    self.expect(&TokenKind::Semicolon, "`;` after loop initializer")?;
                    Some(ForInit::Expr(e))
                };
                let cond = if self.peek() == Some(&TokenKind::Semicolon) { None } else { Some(self.parse_expr()?) };
                self.expect(&TokenKind::Semicolon, "`;` after loop condition")?;
                let iter = if self.peek() == Some(&TokenKind::RParen) { None } else { Some(self.parse_expr()?) };
                self.expect(&TokenKind::RParen, "`)` after loop header")?;
                let body = Box::new(self.parse_stmt()?);
                let end = body.span();
                Ok(Stmt::For { init, cond, iter, body, span: start.to(end) })
            }
            Some(TokenKind::KwReturn) => {
                let start = Span::of(self.bump());
                let value = if self.peek() == Some(&TokenKind::Semicolon) { None } else { Some(self.parse_expr()?) };
                let end = self.expect(&TokenKind::Semicolon, "`;` after return")?;
                Ok(Stmt::Return { value, span: start.to(end) })
            }
            Some(TokenKind::KwBreak) => {
                let start = Span::of(self.bump());
                let end = self.expect(&TokenKind::Semicolon, "`;` after break")?;
                Ok(Stmt::Break(start.to(end)))
            }
            Some(TokenKind::KwContinue) => {
                let start = Span::of(self.bump());
                let end = self.expect(&TokenKind::Semicolon, "`;` after continue")?;
                Ok(Stmt::Continue(start.to(end)))
            }
            Some(TokenKind::KwInt | TokenKind::KwChar | TokenKind::KwVoid | TokenKind::KwStruct) => {
                Ok(Stmt::Decl(self.parse_var_decl()?))
            }
            _ => {
                let e = self.parse_expr()?;
                self.expect(&TokenKind::Semicolon, "`;` after expression")?;
                Ok(Stmt::Expr(e))
            }
        }
    }

    fn parse_var_decl(&mut self) -> PResult<VarDecl> {
        let start = self.span_here();
        let ty = self.parse_type()?;
        let (name, _) = self.parse_ident("a variable name")?;
        let init = if self.eat(&TokenKind::Assign) { Some(self.parse_expr()?) } else { None };
        let end = self.expect(&TokenKind::Semicolon, "`;` after declaration")?;
        Ok(VarDecl { ty, name, init, span: start.to(end) })
    }

    // ---- expressions -----------------------------------------------------

    fn parse_expr(&mut self) -> PResult<Expr> {
        self.enter()?;
        let result = self.parse_assignment();
        self.leave();
        result
    }

    fn parse_assignment(&mut self) -> PResult<Expr> {
        let lhs = self.parse_ternary()?;
        if self.eat(&TokenKind::Assign) {
            let rhs = self.parse_expr()?; // right-associative
            let span = lhs.span().to(rhs.span());
            return Ok(Expr::Binary { op: "=", lhs: Box::new(lhs), rhs: Box::new(rhs), span });
        }
        Ok(lhs)
    }

    fn parse_ternary(&mut self) -> PResult<Expr> {
        let cond = self.parse_binary(0)?;
        if self.eat(&TokenKind::Question) {
            let then_expr = self.parse_expr()?;
            self.expect(&TokenKind::Colon, "`:` in conditional expression")?;
            let else_expr = self.parse_expr()?;
            let span = cond.span().to(else_expr.span());
            return Ok(Expr::Ternary {
                cond: Box::new(cond),
                then_expr: Box::new(then_expr),
                else_expr: Box::new(else_expr),
                span,
            });
        }
        Ok(cond)
    }

    /// Precedence-climbing over the binary operator tiers.
    fn parse_binary(&mut self, min_level: usize) -> PResult<Expr> {
        const LEVELS: &[&[(&TokenKind, &str)]] = &[
            &[(&TokenKind::OrOr, "||")],
            &[(&TokenKind::AndAnd, "&&")],
            &[(&TokenKind::EqEq, "=="), (&TokenKind::NotEq, "!=")],
            &[(&TokenKind::Lt, "<"), (&TokenKind::Gt, ">"), (&TokenKind::Le, "<="), (&TokenKind::Ge, ">=")],
            &[(&TokenKind::Plus, "+"), (&TokenKind::Minus, "-")],
            &[(&TokenKind::Star, "*"), (&TokenKind::Slash, "/"), (&TokenKind::Percent, "%")],
        ];
        if min_level >= LEVELS.len() {
            return self.parse_unary();
        }
        let mut lhs = self.parse_binary(min_level + 1)?;
        'outer: loop {
            for (tok, op) in LEVELS[min_level] {
                if self.peek() == Some(*tok) {
                    self.bump();
                    let rhs = self.parse_binary(min_level + 1)?;
                    let span = lhs.span().to(rhs.span());
                    lhs = Expr::Binary { op, lhs: Box::new(lhs), rhs: Box::new(rhs), span };
                    continue 'outer;
                }
            }
            break;
        }
        Ok(lhs)
    }

    fn parse_unary(&mut self) -> PResult<Expr> {
        self.enter()?;
        let result = (|| {
            let op = match self.peek() {
                Some(TokenKind::Minus) => Some("-"),
                Some(TokenKind::Bang) => Some("!"),
                Some(TokenKind::Star) => Some("*"),
                Some(TokenKind::Amp) => Some("&"),
                _ => None,
            };
            if let Some(op) = op {
                let start = Span::of(self.bump());
                let operand = self.parse_unary()?;
                let span = start.to(operand.span());
                return Ok(Expr::Unary { op, operand: Box::new(operand), span });
            }
            self.parse_postfix()
        })();
        self.leave();
        result
    }

    fn parse_postfix(&mut self) -> PResult<Expr> {
        let mut expr = self.parse_primary()?;
        loop {
            match self.peek() {
                Some(TokenKind::LParen) => {
                    self.bump();
                    let args = self.parse_args()?;
                    let end = self.expect(&TokenKind::RParen, "`)` after arguments")?;
                    let span = expr.span().to(end);
                    expr = match expr {
                        Expr::Ref { name, span: name_span } => Expr::Call { name, name_span, args, span },
                        Expr::Member { base, field, arrow, .. } => {
                            Expr::MemberCall { base, field, arrow, args, span }
                        }
                        _ => return Err(self.error_here("calls require a function or member name")),
                    };
                }
                Some(TokenKind::Dot) | Some(TokenKind::Arrow) => {
                    let arrow = self.peek() == Some(&TokenKind::Arrow);
                    self.bump();
                    let (field, fspan) = self.parse_ident("a member name")?;
                    let span = expr.span().to(fspan);
                    expr = Expr::Member { base: Box::new(expr), field, arrow, span };
                }
                _ => break,
            }
        }
        Ok(expr)
    }

    fn parse_args(&mut self) -> PResult<Vec<Expr>> {
        let mut args = Vec::new();
        if self.peek() == Some(&TokenKind::RParen) {
            return Ok(args);
        }
        loop {
            args.push(self.parse_expr()?);
            if !self.eat(&TokenKind::Comma) {
                break;
            }
        }
        Ok(args)
    }

    fn parse_primary(&mut self) -> PResult<Expr> {
        match self.peek() {
            Some(TokenKind::Int(_)) => {
                let tok = self.bump();
                let span = Span::of(tok);
                if let TokenKind::Int(v) = tok.kind {
                    Ok(Expr::IntLit { value: v, span })
                } else {
                    unreachable!()
                }
            }
            Some(TokenKind::Char(_)) => {
                let tok = self.bump();
                let span = Span::of(tok);
                if let TokenKind::Char(v) = tok.kind {
                    Ok(Expr::CharLit { value: v, span })
                } else {
                    unreachable!()
                }
            }
            Some(TokenKind::Str(_)) => {
                let tok = self.bump();
                let span = Span::of(tok);
                if let TokenKind::Str(s) = &tok.kind {
                    Ok(Expr::StrLit { value: s.clone(), span })
                } else {
                    unreachable!()
                }
            }
            Some(TokenKind::KwNull) => {
                let span = Span::of(self.bump());
                Ok(Expr::NullLit { span })
            }
            Some(TokenKind::Ident(_)) => {
                let (name, span) = self.parse_ident("an identifier")?;
                Ok(Expr::Ref { name, span })
            }
            Some(TokenKind::LParen) => {
                self.bump();
                let inner = self.parse_expr()?;
                self.expect(&TokenKind::RParen, "`)`")?;
                Ok(inner)
            }
            _ => Err(self.error_here("expected an expression")),
        }
    }
}
