//! Tokenizer for the C subset. Never fails: anything unrecognized becomes
//! an `Unknown` token and is dealt with by the parser's error recovery.

#[derive(Debug, Clone, PartialEq)]
pub enum TokenKind {
    Ident(String),
    Int(i64),
    Char(i64),
    Str(String),
    KwInt,
    KwChar,
    KwVoid,
    KwStruct,
    KwIf,
    KwElse,
    KwWhile,
    KwFor,
    KwReturn,
    KwBreak,
    KwContinue,
    KwNull,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Semicolon,
    Comma,
    Dot,
    Arrow,
    Question,
    Colon,
    Assign,
    Plus,
    Minus,
    Star,
    Slash,
    Percent,
    EqEq,
    NotEq,
    Lt,
    Gt,
    Le,
    Ge,
    AndAnd,
    OrOr,
    Amp,
    Bang,
    Unknown(char),
}

impl TokenKind {
    pub fn describe(&self) -> String {
        match self {
            TokenKind::Ident(s) => format!("identifier `{s}`"),
            TokenKind::Int(v) => format!("integer {v}"),
            TokenKind::Char(_) => "character literal".into(),
            TokenKind::Str(_) => "string literal".into(),
            TokenKind::Unknown(c) => format!("`{c}`"),
            other => format!("`{}`", other.symbol()),
        }
    }

    fn symbol(&self) -> &'static str {
        match self {
            TokenKind::KwInt => "int",
            TokenKind::KwChar => "char",
            TokenKind::KwVoid => "void",
            TokenKind::KwStruct => "struct",
            TokenKind::KwIf => "if",
            TokenKind::KwElse => "else",
            TokenKind::KwWhile => "while",
            TokenKind::KwFor => "for",
            TokenKind::KwReturn => "return",
            TokenKind::KwBreak => "break",
            TokenKind::KwContinue => "continue",
            TokenKind::KwNull => "NULL",
            TokenKind::LParen => "(",
            TokenKind::RParen => ")",
            TokenKind::LBrace => "{",
            TokenKind::RBrace => "}",
            TokenKind::Semicolon => ";",
            TokenKind::Comma => ",",
            TokenKind::Dot => ".",
            TokenKind::Arrow => "->",
            TokenKind::Question => "?",
            TokenKind::Colon => ":",
            TokenKind::Assign => "=",
            TokenKind::Plus => "+",
            TokenKind::Minus => "-",
            TokenKind::Star => "*",
            TokenKind::Slash => "/",
            TokenKind::Percent => "%",
            TokenKind::EqEq => "==",
            TokenKind::NotEq => "!=",
            TokenKind::Lt => "<",
            TokenKind::Gt => ">",
            TokenKind::Le => "<=",
            TokenKind::Ge => ">=",
            TokenKind::AndAnd => "&&",
            TokenKind::OrOr => "||",
            TokenKind::Amp => "&",
            TokenKind::Bang => "!",
            _ => "?",
        }
    }
}

/// Token with 1-based start/end positions and byte offsets into the source.
#[derive(Debug, Clone)]
pub struct Token {
    pub kind: TokenKind,
    pub start_line: u32,
    pub start_col: u32,
    pub end_line: u32,
    pub end_col: u32,
    pub start_byte: usize,
    pub end_byte: usize,
}

struct Cursor<'s> {
    src: &'s [u8],
    pos: usize,
    line: u32,
    col: u32,
}

impl<'s> Cursor<'s> {
    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn peek2(&self) -> Option<u8> {
        self.src.get(self.pos + 1).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek()?;
        self.pos += 1;
        if c == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }
}

pub fn tokenize(source: &str) -> Vec<Token> {
    let mut cur = Cursor { src: source.as_bytes(), pos: 0, line: 1, col: 1 };
    let mut tokens = Vec::new();

    loop {
        // skip whitespace and comments
        loop {
            match cur.peek() {
                Some(c) if (c as char).is_ascii_whitespace() => {
                    cur.bump();
                }
                Some(b'/') if cur.peek2() == Some(b'/') => {
                    while let Some(c) = cur.peek() {
                        if c == b'\n' {
                            break;
                        }
                        cur.bump();
                    }
                }
                Some(b'/') if cur.peek2() == Some(b'*') => {
                    cur.bump();
                    cur.bump();
                    loop {
                        match (cur.peek(), cur.peek2()) {
                            (Some(b'*'), Some(b'/')) => {
                                cur.bump();
                                cur.bump();
                                break;
                            }
                            (Some(_), _) => {
                                cur.bump();
                            }
                            (None, _) => break,
                        }
                    }
                }
                _ => break,
            }
        }
        let Some(c) = cur.peek() else { break };
        let start_line = cur.line;
        let start_col = cur.col;
        let start_byte = cur.pos;

        let kind = match c {
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                let mut ident = String::new();
                while let Some(c) = cur.peek() {
                    if (c as char).is_ascii_alphanumeric() || c == b'_' {
                        ident.push(c as char);
                        cur.bump();
                    } else {
                        break;
                    }
                }
                match ident.as_str() {
                    "int" => TokenKind::KwInt,
                    "char" => TokenKind::KwChar,
                    "void" => TokenKind::KwVoid,
                    "struct" => TokenKind::KwStruct,
                    "if" => TokenKind::KwIf,
                    "else" => TokenKind::KwElse,
                    "while" => TokenKind::KwWhile,
                    "for" => TokenKind::KwFor,
                    "return" => TokenKind::KwReturn,
                    "break" => TokenKind::KwBreak,
                    "continue" => TokenKind::KwContinue,
                    "NULL" => TokenKind::KwNull,
                    _ => TokenKind::Ident(ident),
                }
            }
            b'0'..=b'9' => {
                let mut digits = String::new();
                while let Some(c) = cur.peek() {
                    if (c as char).is_ascii_digit() {
                        digits.push(c as char);
                        cur.bump();
                    } else {
                        break;
                    }
                }
                TokenKind::Int(digits.parse::<i64>().unwrap_or(i64::MAX))
            }
            b'\'' => {
                cur.bump();
                let value = match cur.peek() {
                    Some(b'\\') => {
                        cur.bump();
                        let esc = cur.bump().unwrap_or(b'0');
                        unescape(esc) as i64
                    }
                    Some(b'\'') | None => 0,
                    Some(c) => {
                        cur.bump();
                        c as i64
                    }
                };
                if cur.peek() == Some(b'\'') {
                    cur.bump();
                }
                TokenKind::Char(value)
            }
            b'"' => {
                cur.bump();
                let mut text = String::new();
                loop {
                    match cur.peek() {
                        Some(b'"') => {
                            cur.bump();
                            break;
                        }
                        Some(b'\\') => {
                            cur.bump();
                            if let Some(esc) = cur.bump() {
                                text.push(unescape(esc) as char);
                            }
                        }
                        Some(b'\n') | None => break, // unterminated; recover at line end
                        Some(c) => {
                            text.push(c as char);
                            cur.bump();
                        }
                    }
                }
                TokenKind::Str(text)
            }
            _ => {
                cur.bump();
                match c {
                    b'(' => TokenKind::LParen,
                    b')' => TokenKind::RParen,
                    b'{' => TokenKind::LBrace,
                    b'}' => TokenKind::RBrace,
                    b';' => TokenKind::Semicolon,
                    b',' => TokenKind::Comma,
                    b'.' => TokenKind::Dot,
                    b'?' => TokenKind::Question,
                    b':' => TokenKind::Colon,
                    b'+' => TokenKind::Plus,
                    b'*' => TokenKind::Star,
                    b'/' => TokenKind::Slash,
                    b'%' => TokenKind::Percent,
                    b'-' => {
                        if cur.peek() == Some(b'>') {
                            cur.bump();
                            TokenKind::Arrow
                        } else {
                            TokenKind::Minus
                        }
                    }
                    b'=' => {
                        if cur.peek() == Some(b'=') {
                            cur.bump();
                            TokenKind::EqEq
                        } else {
                            TokenKind::Assign
                        }
                    }
                    b'!' => {
                        if cur.peek() == Some(b'=') {
                            cur.bump();
                            TokenKind::NotEq
                        } else {
                            TokenKind::Bang
                        }
                    }
                    b'<' => {
                        if cur.peek() == Some(b'=') {
                            cur.bump();
                            TokenKind::Le
                        } else {
                            TokenKind::Lt
                        }
                    }
                    b'>' => {
                        if cur.peek() == Some(b'=') {
                            cur.bump();
                            TokenKind::Ge
                        } else {
                            TokenKind::Gt
                        }
                    }
                    b'&' => {
                        if cur.peek() == Some(b'&') {
                            cur.bump();
                            TokenKind::AndAnd
                        } else {
                            TokenKind::Amp
                        }
                    }
                    b'|' => {
                        if cur.peek() == Some(b'|') {
                            cur.bump();
                            TokenKind::OrOr
                        } else {
                            TokenKind::Unknown('|')
                        }
                    }
                    other => TokenKind::Unknown(other as char),
                }
            }
        };

        tokens.push(Token {
            kind,
            start_line,
            start_col,
            end_line: cur.line,
            end_col: if cur.col > 1 { cur.col - 1 } else { cur.col },
            start_byte,
            end_byte: cur.pos,
        });
    }
    tokens
}

fn unescape(c: u8) -> u8 {
    match c {
        b'n' => b'\n',
        b't' => b'\t',
        b'r' => b'\r',
        b'0' => 0,
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokenizes_a_declaration() {
        let toks = tokenize("int x = 5;");
        let kinds: Vec<&TokenKind> = toks.iter().map(|t| &t.kind).collect();
        assert!(matches!(kinds[0], TokenKind::KwInt));
        assert!(matches!(kinds[1], TokenKind::Ident(s) if s == "x"));
        assert!(matches!(kinds[2], TokenKind::Assign));
        assert!(matches!(kinds[3], TokenKind::Int(5)));
        assert!(matches!(kinds[4], TokenKind::Semicolon));
    }

    #[test]
    fn comments_are_stripped() {
        let toks = tokenize("// line\nint /* block\nspanning */ x;");
        assert_eq!(toks.len(), 3);
        assert_eq!(toks[0].start_line, 2);
    }

    #[test]
    fn positions_are_one_based_and_inclusive() {
        let toks = tokenize("ab + c");
        assert_eq!((toks[0].start_line, toks[0].start_col, toks[0].end_col), (1, 1, 2));
        assert_eq!((toks[1].start_col, toks[1].end_col), (4, 4));
        assert_eq!((toks[2].start_col, toks[2].end_col), (6, 6));
    }

    #[test]
    fn two_char_operators() {
        let toks = tokenize("a->b && c || d <= e != f");
        let has = |k: &TokenKind| toks.iter().any(|t| &t.kind == k);
        assert!(has(&TokenKind::Arrow));
        assert!(has(&TokenKind::AndAnd));
        assert!(has(&TokenKind::OrOr));
        assert!(has(&TokenKind::Le));
        assert!(has(&TokenKind::NotEq));
    }

    #[test]
    fn unknown_characters_do_not_fail() {
        let toks = tokenize("@ $ #");
        assert_eq!(toks.len(), 3);
        assert!(matches!(toks[0].kind, TokenKind::Unknown('@')));
    }

    #[test]
    fn char_and_string_escapes() {
        let toks = tokenize(r#"'\n' "a\tb""#);
        assert!(matches!(toks[0].kind, TokenKind::Char(10)));
        assert!(matches!(&toks[1].kind, TokenKind::Str(s) if s == "a\tb"));
    }
}
