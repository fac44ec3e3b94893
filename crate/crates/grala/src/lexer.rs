//! Hand-rolled lexer. Comments (`//` to end of line) and whitespace are
//! dropped; strings support `\"`, `\\`, `\n` and `\t` escapes.

use crate::token::{Pos, Token, TokenKind};
use crate::GralaError;

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: u32,
    column: u32,
}

impl<'a> Lexer<'a> {
    fn new(source: &'a str) -> Self {
        Lexer {
            chars: source.chars().peekable(),
            line: 1,
            column: 1,
        }
    }

    fn pos(&self) -> Pos {
        Pos {
            line: self.line,
            column: self.column,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn error(&self, message: impl Into<String>) -> GralaError {
        GralaError::Lex {
            pos: self.pos(),
            message: message.into(),
        }
    }
}

pub fn tokenize(source: &str) -> Result<Vec<Token>, GralaError> {
    let mut lx = Lexer::new(source);
    let mut tokens = Vec::new();

    while let Some(c) = lx.peek() {
        if c.is_whitespace() {
            lx.bump();
            continue;
        }
        let pos = lx.pos();
        match c {
            '/' => {
                lx.bump();
                match lx.peek() {
                    Some('/') => {
                        while let Some(c) = lx.peek() {
                            if c == '\n' {
                                break;
                            }
                            lx.bump();
                        }
                    }
                    _ => tokens.push(Token {
                        kind: TokenKind::Slash,
                        pos,
                    }),
                }
            }
            '"' => {
                lx.bump();
                let mut text = String::new();
                loop {
                    match lx.bump() {
                        None | Some('\n') => {
                            return Err(GralaError::Lex {
                                pos,
                                message: "unterminated string literal".to_string(),
                            })
                        }
                        Some('"') => break,
                        Some('\\') => match lx.bump() {
                            Some('"') => text.push('"'),
                            Some('\\') => text.push('\\'),
                            Some('n') => text.push('\n'),
                            Some('t') => text.push('\t'),
                            other => {
                                return Err(lx.error(format!("unsupported string escape {other:?}")))
                            }
                        },
                        Some(c) => text.push(c),
                    }
                }
                tokens.push(Token {
                    kind: TokenKind::Str(text),
                    pos,
                });
            }
            '$' => {
                lx.bump();
                let name =
                    lex_ident(&mut lx).ok_or_else(|| lx.error("expected identifier after '$'"))?;
                tokens.push(Token {
                    kind: TokenKind::Binding(name),
                    pos,
                });
            }
            c if c.is_ascii_digit() => {
                let mut number = String::new();
                while lx.peek().is_some_and(|c| c.is_ascii_digit()) {
                    number.push(lx.bump().unwrap());
                }
                // A dot only continues the number when a digit follows, so
                // member access on call results keeps working.
                let mut is_float = false;
                if lx.peek() == Some('.') {
                    let mut ahead = lx.chars.clone();
                    ahead.next();
                    if ahead.peek().is_some_and(|c| c.is_ascii_digit()) {
                        is_float = true;
                        number.push(lx.bump().unwrap());
                        while lx.peek().is_some_and(|c| c.is_ascii_digit()) {
                            number.push(lx.bump().unwrap());
                        }
                    }
                }
                let kind = if is_float {
                    TokenKind::Float(number.parse().map_err(|_| lx.error("bad float literal"))?)
                } else {
                    TokenKind::Int(
                        number
                            .parse()
                            .map_err(|_| lx.error("integer literal out of range"))?,
                    )
                };
                tokens.push(Token { kind, pos });
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let name = lex_ident(&mut lx).unwrap();
                let kind = if name == "new" {
                    TokenKind::New
                } else {
                    TokenKind::Ident(name)
                };
                tokens.push(Token { kind, pos });
            }
            _ => {
                lx.bump();
                let kind = match c {
                    '(' => TokenKind::LParen,
                    ')' => TokenKind::RParen,
                    '[' => TokenKind::LBracket,
                    ']' => TokenKind::RBracket,
                    '{' => TokenKind::LBrace,
                    '}' => TokenKind::RBrace,
                    ',' => TokenKind::Comma,
                    '.' => TokenKind::Dot,
                    ':' => TokenKind::Colon,
                    '+' => TokenKind::Plus,
                    '-' => TokenKind::Minus,
                    '*' => TokenKind::Star,
                    '<' => {
                        if lx.peek() == Some('=') {
                            lx.bump();
                            TokenKind::Le
                        } else {
                            TokenKind::Lt
                        }
                    }
                    '>' => {
                        if lx.peek() == Some('=') {
                            lx.bump();
                            TokenKind::Ge
                        } else {
                            TokenKind::Gt
                        }
                    }
                    '=' => match lx.peek() {
                        Some('=') => {
                            lx.bump();
                            TokenKind::EqEq
                        }
                        Some('>') => {
                            lx.bump();
                            TokenKind::Arrow
                        }
                        _ => TokenKind::Assign,
                    },
                    '!' => {
                        if lx.peek() == Some('=') {
                            lx.bump();
                            TokenKind::NotEq
                        } else {
                            return Err(GralaError::Lex {
                                pos,
                                message: "unexpected '!'".to_string(),
                            });
                        }
                    }
                    '&' => {
                        if lx.peek() == Some('&') {
                            lx.bump();
                            TokenKind::AndAnd
                        } else {
                            return Err(GralaError::Lex {
                                pos,
                                message: "unexpected '&'".to_string(),
                            });
                        }
                    }
                    '|' => {
                        if lx.peek() == Some('|') {
                            lx.bump();
                            TokenKind::OrOr
                        } else {
                            return Err(GralaError::Lex {
                                pos,
                                message: "unexpected '|'".to_string(),
                            });
                        }
                    }
                    other => {
                        return Err(GralaError::Lex {
                            pos,
                            message: format!("illegal character {other:?}"),
                        })
                    }
                };
                tokens.push(Token { kind, pos });
            }
        }
    }
    Ok(tokens)
}

fn lex_ident(lx: &mut Lexer) -> Option<String> {
    let mut name = String::new();
    if !lx
        .peek()
        .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
    {
        return None;
    }
    while lx
        .peek()
        .is_some_and(|c| c.is_ascii_alphanumeric() || c == '_')
    {
        name.push(lx.bump().unwrap());
    }
    Some(name)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(src: &str) -> Vec<TokenKind> {
        tokenize(src).unwrap().into_iter().map(|t| t.kind).collect()
    }

    #[test]
    fn property_comparison_tokens() {
        assert_eq!(
            kinds(r#"g["vertexCount"] > 3"#),
            vec![
                TokenKind::Ident("g".into()),
                TokenKind::LBracket,
                TokenKind::Str("vertexCount".into()),
                TokenKind::RBracket,
                TokenKind::Gt,
                TokenKind::Int(3),
            ]
        );
    }

    #[test]
    fn symbols_are_colon_plus_identifier() {
        assert_eq!(
            kinds(":desc"),
            vec![TokenKind::Colon, TokenKind::Ident("desc".into())]
        );
    }

    #[test]
    fn collection_delimiters_are_plain_angles() {
        assert_eq!(
            kinds("<db.G[0],db.G[1],db.G[2]>"),
            vec![
                TokenKind::Lt,
                TokenKind::Ident("db".into()),
                TokenKind::Dot,
                TokenKind::Ident("G".into()),
                TokenKind::LBracket,
                TokenKind::Int(0),
                TokenKind::RBracket,
                TokenKind::Comma,
                TokenKind::Ident("db".into()),
                TokenKind::Dot,
                TokenKind::Ident("G".into()),
                TokenKind::LBracket,
                TokenKind::Int(1),
                TokenKind::RBracket,
                TokenKind::Comma,
                TokenKind::Ident("db".into()),
                TokenKind::Dot,
                TokenKind::Ident("G".into()),
                TokenKind::LBracket,
                TokenKind::Int(2),
                TokenKind::RBracket,
                TokenKind::Gt,
            ]
        );
    }

    #[test]
    fn comments_and_whitespace_vanish() {
        assert_eq!(
            kinds("x = 1 // the rest\n  y"),
            vec![
                TokenKind::Ident("x".into()),
                TokenKind::Assign,
                TokenKind::Int(1),
                TokenKind::Ident("y".into()),
            ]
        );
    }

    #[test]
    fn string_escapes() {
        assert_eq!(
            kinds(r#""a\"b\\c""#),
            vec![TokenKind::Str("a\"b\\c".into())]
        );
    }

    #[test]
    fn unterminated_string_reports_position() {
        let err = tokenize("x = \"oops").unwrap_err();
        match err {
            GralaError::Lex { pos, .. } => {
                assert_eq!((pos.line, pos.column), (1, 5));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn illegal_character_reports_position() {
        let err = tokenize("a = 1\nb = #").unwrap_err();
        match err {
            GralaError::Lex { pos, .. } => assert_eq!(pos.line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn arrows_and_comparisons_disambiguate() {
        assert_eq!(
            kinds("= == => <= >= != < >"),
            vec![
                TokenKind::Assign,
                TokenKind::EqEq,
                TokenKind::Arrow,
                TokenKind::Le,
                TokenKind::Ge,
                TokenKind::NotEq,
                TokenKind::Lt,
                TokenKind::Gt,
            ]
        );
    }

    #[test]
    fn float_and_member_access_coexist() {
        assert_eq!(
            kinds("1.5 2.method"),
            vec![
                TokenKind::Float(1.5),
                TokenKind::Int(2),
                TokenKind::Dot,
                TokenKind::Ident("method".into()),
            ]
        );
    }
}
