use crate::diagnostic::Diagnostic;
use crate::span::Span;

#[derive(Debug, Clone, PartialEq)]
pub enum Tok {
    Ident(String),
    Number(f64),
    Semi,
    Colon,
    Comma,
    Assign,
    /// `::=`
    Define,
    LParen,
    RParen,
    LBracket,
    RBracket,
    At,
    Plus,
    Minus,
    Star,
    Slash,
    /// `<<`
    Reactant,
    /// `>>`
    Product,
    /// `(+)`
    Activator,
    /// `(-)`
    Inhibitor,
    /// `(.)`
    Modifier,
    /// `->`
    Transport,
    /// `<->`
    BiTransport,
    /// `<*>`
    CoopAll,
    Lt,
    Gt,
}

impl Tok {
    pub fn is_role_operator(&self) -> bool {
        matches!(
            self,
            Tok::Reactant
                | Tok::Product
                | Tok::Activator
                | Tok::Inhibitor
                | Tok::Modifier
                | Tok::Transport
                | Tok::BiTransport
        )
    }

    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Number(v) => format!("number {v}"),
            other => format!("`{}`", other.text()),
        }
    }

    fn text(&self) -> &'static str {
        match self {
            Tok::Ident(_) | Tok::Number(_) => "",
            Tok::Semi => ";",
            Tok::Colon => ":",
            Tok::Comma => ",",
            Tok::Assign => "=",
            Tok::Define => "::=",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::At => "@",
            Tok::Plus => "+",
            Tok::Minus => "-",
            Tok::Star => "*",
            Tok::Slash => "/",
            Tok::Reactant => "<<",
            Tok::Product => ">>",
            Tok::Activator => "(+)",
            Tok::Inhibitor => "(-)",
            Tok::Modifier => "(.)",
            Tok::Transport => "->",
            Tok::BiTransport => "<->",
            Tok::CoopAll => "<*>",
            Tok::Lt => "<",
            Tok::Gt => ">",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
    line: u32,
    col: u32,
}

impl<'a> Cursor<'a> {
    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn bump_n(&mut self, n: usize) {
        for _ in 0..n {
            self.bump();
        }
    }

    fn span_from(&self, begin: usize, line: u32, col: u32) -> Span {
        Span::new(begin, self.pos, line, col)
    }
}

/// Splits `src` into tokens, skipping whitespace and comments. Lexical errors
/// are reported and the offending character skipped.
pub fn tokenize(src: &str) -> (Vec<Token>, Vec<Diagnostic>) {
    let mut cur = Cursor { src, pos: 0, line: 1, col: 1 };
    let mut tokens = Vec::new();
    let mut diags = Vec::new();

    while let Some(c) = cur.peek() {
        let (begin, line, col) = (cur.pos, cur.line, cur.col);
        if c.is_whitespace() {
            cur.bump();
            continue;
        }
        let rest = cur.rest();
        if rest.starts_with("//") {
            while let Some(c) = cur.peek() {
                if c == '\n' {
                    break;
                }
                cur.bump();
            }
            continue;
        }
        if rest.starts_with("/*") {
            match rest[2..].find("*/") {
                Some(off) => cur.bump_n(rest[..off + 4].chars().count()),
                None => {
                    cur.bump_n(rest.chars().count());
                    diags.push(Diagnostic::error(
                        "LEX_ERROR",
                        cur.span_from(begin, line, col),
                        "unterminated block comment",
                    ));
                }
            }
            continue;
        }
        if c.is_ascii_alphabetic() {
            while cur.peek().is_some_and(|c| c.is_ascii_alphanumeric() || c == '_') {
                cur.bump();
            }
            let text = &src[begin..cur.pos];
            tokens.push(Token { tok: Tok::Ident(text.to_string()), span: cur.span_from(begin, line, col) });
            continue;
        }
        if c.is_ascii_digit() || (c == '.' && rest[1..].starts_with(|d: char| d.is_ascii_digit())) {
            lex_number(&mut cur);
            let text = &src[begin..cur.pos];
            let span = cur.span_from(begin, line, col);
            match text.parse::<f64>() {
                Ok(v) => tokens.push(Token { tok: Tok::Number(v), span }),
                Err(_) => diags.push(Diagnostic::error(
                    "LEX_ERROR",
                    span,
                    format!("malformed number `{text}`"),
                )),
            }
            continue;
        }
        let symbols: &[(&str, Tok)] = &[
            ("::=", Tok::Define),
            ("<->", Tok::BiTransport),
            ("<*>", Tok::CoopAll),
            ("(+)", Tok::Activator),
            ("(-)", Tok::Inhibitor),
            ("(.)", Tok::Modifier),
            ("<<", Tok::Reactant),
            (">>", Tok::Product),
            ("->", Tok::Transport),
            (";", Tok::Semi),
            (":", Tok::Colon),
            (",", Tok::Comma),
            ("=", Tok::Assign),
            ("(", Tok::LParen),
            (")", Tok::RParen),
            ("[", Tok::LBracket),
            ("]", Tok::RBracket),
            ("@", Tok::At),
            ("+", Tok::Plus),
            ("-", Tok::Minus),
            ("*", Tok::Star),
            ("/", Tok::Slash),
            ("<", Tok::Lt),
            (">", Tok::Gt),
        ];
        match symbols.iter().find(|(s, _)| rest.starts_with(s)) {
            Some((s, tok)) => {
                cur.bump_n(s.len());
                tokens.push(Token { tok: tok.clone(), span: cur.span_from(begin, line, col) });
            }
            None => {
                cur.bump();
                diags.push(Diagnostic::error(
                    "LEX_ERROR",
                    cur.span_from(begin, line, col),
                    format!("unexpected character `{c}`"),
                ));
            }
        }
    }
    (tokens, diags)
}

fn lex_number(cur: &mut Cursor<'_>) {
    let digits = |cur: &mut Cursor<'_>| {
        while cur.peek().is_some_and(|c| c.is_ascii_digit()) {
            cur.bump();
        }
    };
    digits(cur);
    if cur.peek() == Some('.') {
        cur.bump();
        digits(cur);
    }
    if matches!(cur.peek(), Some('e' | 'E')) {
        let rest = &cur.rest()[1..];
        let exp_digits = rest.strip_prefix(['+', '-']).unwrap_or(rest);
        if exp_digits.starts_with(|c: char| c.is_ascii_digit()) {
            cur.bump_n(1 + rest.len() - exp_digits.len());
            digits(cur);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(src: &str) -> Vec<Tok> {
        let (t, d) = tokenize(src);
        assert!(d.is_empty(), "{d:?}");
        t.into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn operators() {
        assert_eq!(
            toks("<< >> (+) (-) (.) -> <-> <*> < > ::= :"),
            vec![
                Tok::Reactant,
                Tok::Product,
                Tok::Activator,
                Tok::Inhibitor,
                Tok::Modifier,
                Tok::Transport,
                Tok::BiTransport,
                Tok::CoopAll,
                Tok::Lt,
                Tok::Gt,
                Tok::Define,
                Tok::Colon
            ]
        );
        assert_eq!(
            toks("a*(-b)"),
            vec![
                Tok::Ident("a".into()),
                Tok::Star,
                Tok::LParen,
                Tok::Minus,
                Tok::Ident("b".into()),
                Tok::RParen
            ]
        );
    }

    #[test]
    fn numbers_and_comments() {
        assert_eq!(toks("2.8e-4 // trailing\n 8.350 /* x */ 1e3"), vec![
            Tok::Number(2.8e-4),
            Tok::Number(8.35),
            Tok::Number(1000.0)
        ]);
        // `e` not followed by digits belongs to the next identifier.
        assert_eq!(toks("2e"), vec![Tok::Number(2.0), Tok::Ident("e".into())]);
    }

    #[test]
    fn spans_track_lines() {
        let (t, _) = tokenize("a\n  bb");
        assert_eq!(t[1].span, Span::new(4, 6, 2, 3));
    }

    #[test]
    fn bad_characters_are_reported() {
        let (t, d) = tokenize("a # b /* open");
        assert_eq!(t.len(), 2);
        assert_eq!(d.len(), 2);
        assert!(d.iter().all(|d| d.code == "LEX_ERROR"));
    }
}
