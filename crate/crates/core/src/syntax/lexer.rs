//! Tokenizer shared by spec and model files.

use super::Diagnostic;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenKind {
    Ident(String),
    Number(String),
    Dot,
    Comma,
    Colon,
    Equals,
    Arrow,      // ->
    Star,
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Less,
    Greater,
    AndOp,      // /\
    OrOp,       // \/
    ImpliesOp,  // =>
    IffOp,      // <=>
    At,
    Eof,
}

impl TokenKind {
    pub fn describe(&self) -> String {
        match self {
            TokenKind::Ident(s) => format!("identifier `{s}`"),
            TokenKind::Number(s) => format!("numeral `{s}`"),
            TokenKind::Dot => "`.`".into(),
            TokenKind::Comma => "`,`".into(),
            TokenKind::Colon => "`:`".into(),
            TokenKind::Equals => "`=`".into(),
            TokenKind::Arrow => "`->`".into(),
            TokenKind::Star => "`*`".into(),
            TokenKind::LParen => "`(`".into(),
            TokenKind::RParen => "`)`".into(),
            TokenKind::LBrace => "`{`".into(),
            TokenKind::RBrace => "`}`".into(),
            TokenKind::LBracket => "`[`".into(),
            TokenKind::RBracket => "`]`".into(),
            TokenKind::Less => "`<`".into(),
            TokenKind::Greater => "`>`".into(),
            TokenKind::AndOp => "`/\\`".into(),
            TokenKind::OrOp => "`\\/`".into(),
            TokenKind::ImpliesOp => "`=>`".into(),
            TokenKind::IffOp => "`<=>`".into(),
            TokenKind::At => "`@`".into(),
            TokenKind::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub line: usize,
    pub col: usize,
}

/// Tokenizes the input. Unicode outside comments is rejected; identifiers
/// are ASCII only.
pub fn lex(text: &str, file: &str) -> Result<Vec<Token>, Diagnostic> {
    let lines: Vec<&str> = text.lines().collect();
    let excerpt = |line: usize| -> String {
        lines.get(line - 1).map(|l| l.to_string()).unwrap_or_default()
    };
    let mut tokens = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0usize;
    let mut line = 1usize;
    let mut col = 1usize;
    macro_rules! push {
        ($kind:expr, $len:expr) => {{
            tokens.push(Token { kind: $kind, line, col });
            i += $len;
            col += $len;
        }};
    }
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            b'\n' => {
                i += 1;
                line += 1;
                col = 1;
            }
            b' ' | b'\t' | b'\r' => {
                i += 1;
                col += 1;
            }
            b'-' if i + 1 < bytes.len() && bytes[i + 1] == b'-' => {
                while i < bytes.len() && bytes[i] != b'\n' {
                    i += 1;
                }
            }
            b'-' if i + 1 < bytes.len() && bytes[i + 1] == b'>' => push!(TokenKind::Arrow, 2),
            b'<' if i + 2 < bytes.len() && bytes[i + 1] == b'=' && bytes[i + 2] == b'>' => {
                push!(TokenKind::IffOp, 3)
            }
            b'=' if i + 1 < bytes.len() && bytes[i + 1] == b'>' => push!(TokenKind::ImpliesOp, 2),
            b'/' if i + 1 < bytes.len() && bytes[i + 1] == b'\\' => push!(TokenKind::AndOp, 2),
            b'\\' if i + 1 < bytes.len() && bytes[i + 1] == b'/' => push!(TokenKind::OrOp, 2),
            b'.' => push!(TokenKind::Dot, 1),
            b',' => push!(TokenKind::Comma, 1),
            b':' => push!(TokenKind::Colon, 1),
            b'=' => push!(TokenKind::Equals, 1),
            b'*' => push!(TokenKind::Star, 1),
            b'(' => push!(TokenKind::LParen, 1),
            b')' => push!(TokenKind::RParen, 1),
            b'{' => push!(TokenKind::LBrace, 1),
            b'}' => push!(TokenKind::RBrace, 1),
            b'[' => push!(TokenKind::LBracket, 1),
            b']' => push!(TokenKind::RBracket, 1),
            b'<' => push!(TokenKind::Less, 1),
            b'>' => push!(TokenKind::Greater, 1),
            b'@' => push!(TokenKind::At, 1),
            c if c.is_ascii_alphabetic() => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                let word = std::str::from_utf8(&bytes[start..i]).unwrap().to_string();
                let len = word.len();
                tokens.push(Token {
                    kind: TokenKind::Ident(word),
                    line,
                    col,
                });
                col += len;
            }
            c if c.is_ascii_digit() => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let word = std::str::from_utf8(&bytes[start..i]).unwrap().to_string();
                let len = word.len();
                tokens.push(Token {
                    kind: TokenKind::Number(word),
                    line,
                    col,
                });
                col += len;
            }
            other => {
                let shown = if other.is_ascii_graphic() {
                    format!("`{}`", other as char)
                } else {
                    format!("byte 0x{other:02x}")
                };
                return Err(Diagnostic::error(
                    file,
                    line,
                    col,
                    format!("unexpected character {shown}"),
                    excerpt(line),
                ));
            }
        }
    }
    tokens.push(Token {
        kind: TokenKind::Eof,
        line,
        col,
    });
    Ok(tokens)
}
