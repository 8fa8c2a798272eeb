use num_bigint::BigInt;

use super::error::EvalError;

#[derive(Debug, Clone, PartialEq)]
pub enum Tok {
    Int(BigInt),
    Str(String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    EqEq,
    Assign,
    Comma,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Semi,
    Newline,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Int(v) => format!("integer {v}"),
            Tok::Str(_) => "string".into(),
            Tok::Ident(name) => format!("'{name}'"),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Caret => "'^'".into(),
            Tok::EqEq => "'=='".into(),
            Tok::Assign => "'='".into(),
            Tok::Comma => "','".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::LBracket => "'['".into(),
            Tok::RBracket => "']'".into(),
            Tok::Semi => "';'".into(),
            Tok::Newline => "end of line".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

/// A token with its 1-based line and column.
#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

/// Splits source text into tokens. Newlines inside brackets are skipped so
/// a call or list may span lines; `#` starts a comment.
pub fn tokenize(src: &str) -> Result<Vec<Token>, EvalError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut depth = 0usize;
    let (mut line, mut col) = (1usize, 1usize);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (start_line, start_col) = (line, col);
        let push = |out: &mut Vec<Token>, tok| {
            out.push(Token {
                tok,
                line: start_line,
                col: start_col,
            })
        };
        let err = |message: String| EvalError::Parse {
            line: start_line,
            col: start_col,
            message,
        };
        match c {
            '\n' => {
                if depth == 0 {
                    push(&mut out, Tok::Newline);
                }
                i += 1;
                line += 1;
                col = 1;
                continue;
            }
            c if c.is_whitespace() => {}
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                    col += 1;
                }
                continue;
            }
            '0'..='9' => {
                let mut j = i;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                if j < chars.len() && (chars[j].is_alphabetic() || chars[j] == '_') {
                    return Err(err(format!("malformed number near '{}'", chars[j])));
                }
                let text: String = chars[i..j].iter().collect();
                push(&mut out, Tok::Int(text.parse().expect("digits")));
                col += j - i;
                i = j;
                continue;
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut j = i;
                while j < chars.len() && (chars[j].is_alphanumeric() || chars[j] == '_') {
                    j += 1;
                }
                push(&mut out, Tok::Ident(chars[i..j].iter().collect()));
                col += j - i;
                i = j;
                continue;
            }
            '"' => {
                let mut s = String::new();
                let mut j = i + 1;
                loop {
                    match chars.get(j) {
                        None | Some('\n') => return Err(err("unterminated string".into())),
                        Some('"') => break,
                        Some('\\') => {
                            let esc = match chars.get(j + 1) {
                                Some('n') => '\n',
                                Some('t') => '\t',
                                Some('"') => '"',
                                Some('\\') => '\\',
                                other => {
                                    return Err(err(format!(
                                        "unknown escape '\\{}'",
                                        other.map_or(String::new(), |c| c.to_string())
                                    )))
                                }
                            };
                            s.push(esc);
                            j += 2;
                        }
                        Some(&c) => {
                            s.push(c);
                            j += 1;
                        }
                    }
                }
                push(&mut out, Tok::Str(s));
                col += j + 1 - i;
                i = j + 1;
                continue;
            }
            '=' if chars.get(i + 1) == Some(&'=') => {
                push(&mut out, Tok::EqEq);
                i += 2;
                col += 2;
                continue;
            }
            '=' => push(&mut out, Tok::Assign),
            '+' => push(&mut out, Tok::Plus),
            '-' => push(&mut out, Tok::Minus),
            '*' => push(&mut out, Tok::Star),
            '^' => push(&mut out, Tok::Caret),
            ',' => push(&mut out, Tok::Comma),
            ';' => push(&mut out, Tok::Semi),
            '(' | '[' => {
                depth += 1;
                push(&mut out, if c == '(' { Tok::LParen } else { Tok::LBracket });
            }
            ')' | ']' => {
                depth = depth.saturating_sub(1);
                push(&mut out, if c == ')' { Tok::RParen } else { Tok::RBracket });
            }
            other => return Err(err(format!("unexpected character '{other}'"))),
        }
        i += 1;
        col += 1;
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}
