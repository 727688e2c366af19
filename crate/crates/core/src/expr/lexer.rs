use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub(super) enum Tok {
    // value, true when the literal carried the trailing `i`
    Num { value: f64, imag: bool },
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Eof,
}

#[derive(Debug, Clone)]
pub(super) struct Token {
    pub tok: Tok,
    pub offset: usize,
}

pub(super) fn lex(src: &str) -> Result<Vec<Token>> {
    let bytes = src.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        let start = i;
        match b {
            b' ' | b'\t' | b'\r' | b'\n' => {
                i += 1;
            }
            b'+' => {
                toks.push(Token { tok: Tok::Plus, offset: start });
                i += 1;
            }
            b'-' => {
                toks.push(Token { tok: Tok::Minus, offset: start });
                i += 1;
            }
            b'*' => {
                toks.push(Token { tok: Tok::Star, offset: start });
                i += 1;
            }
            b'/' => {
                toks.push(Token { tok: Tok::Slash, offset: start });
                i += 1;
            }
            b'^' => {
                toks.push(Token { tok: Tok::Caret, offset: start });
                i += 1;
            }
            b'(' => {
                toks.push(Token { tok: Tok::LParen, offset: start });
                i += 1;
            }
            b')' => {
                toks.push(Token { tok: Tok::RParen, offset: start });
                i += 1;
            }
            b'0'..=b'9' => {
                i = scan_number(bytes, i, &mut toks)?;
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                let name = std::str::from_utf8(&bytes[start..i]).unwrap().to_string();
                toks.push(Token { tok: Tok::Ident(name), offset: start });
            }
            _ => {
                return Err(Error::Syntax {
                    offset: start,
                    message: format!("unexpected character {:?}", src[start..].chars().next().unwrap()),
                });
            }
        }
    }
    toks.push(Token { tok: Tok::Eof, offset: bytes.len() });
    Ok(toks)
}

// real := digits ["." digits] [("e"|"E") ["+"|"-"] digits], optionally
// followed by `i` when the next character cannot extend an identifier.
fn scan_number(bytes: &[u8], mut i: usize, toks: &mut Vec<Token>) -> Result<usize> {
    let start = i;
    while i < bytes.len() && bytes[i].is_ascii_digit() {
        i += 1;
    }
    if i < bytes.len() && bytes[i] == b'.' {
        i += 1;
        if i >= bytes.len() || !bytes[i].is_ascii_digit() {
            return Err(Error::Syntax {
                offset: i.min(bytes.len()),
                message: "expected digits after decimal point".into(),
            });
        }
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
    }
    // Exponent suffix only counts when digits actually follow, so `2exp(z)`
    // still lexes as the number 2 and the identifier exp.
    if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
        let mut j = i + 1;
        if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
            j += 1;
        }
        if j < bytes.len() && bytes[j].is_ascii_digit() {
            while j < bytes.len() && bytes[j].is_ascii_digit() {
                j += 1;
            }
            i = j;
        }
    }
    let text = std::str::from_utf8(&bytes[start..i]).unwrap();
    let value: f64 = text.parse().map_err(|_| Error::Syntax {
        offset: start,
        message: format!("malformed number `{text}`"),
    })?;
    let mut imag = false;
    if i < bytes.len() && bytes[i] == b'i' {
        let next_extends = i + 1 < bytes.len()
            && (bytes[i + 1].is_ascii_alphanumeric() || bytes[i + 1] == b'_');
        if !next_extends {
            imag = true;
            i += 1;
        }
    }
    toks.push(Token { tok: Tok::Num { value, imag }, offset: start });
    Ok(i)
}
