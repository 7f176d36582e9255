use super::{Env, KernelError, Term};
use crate::prelude::church;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenKind {
    Lambda,
    Dot,
    DotDot,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Assign,
    Semi,
    Equals,
    /// lowercase-initial identifier
    Ident(String),
    /// uppercase-initial identifier
    Upper(String),
    /// `#n`
    Numeral(u64),
    /// bare integer, only meaningful in meta-term ranges
    Int(u64),
    Eof,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub line: usize,
    pub column: usize,
}

/// Tokenizer shared by the term, definition-file and meta-term grammars.
pub struct Lexer {
    tokens: Vec<Token>,
    pos: usize,
}

fn ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

impl Lexer {
    pub fn new(source: &str) -> Result<Lexer, KernelError> {
        let chars: Vec<char> = source.chars().collect();
        let mut tokens = Vec::new();
        let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
        let err = |line, column, message: String| KernelError::Parse {
            line,
            column,
            message,
        };
        while i < chars.len() {
            let c = chars[i];
            let (tl, tc) = (line, col);
            let mut push = |kind, len: usize, i: &mut usize, col: &mut usize| {
                tokens.push(Token {
                    kind,
                    line: tl,
                    column: tc,
                });
                *i += len;
                *col += len;
            };
            match c {
                '\n' => {
                    i += 1;
                    line += 1;
                    col = 1;
                }
                c if c.is_whitespace() => {
                    i += 1;
                    col += 1;
                }
                '-' if chars.get(i + 1) == Some(&'-') => {
                    while i < chars.len() && chars[i] != '\n' {
                        i += 1;
                    }
                }
                '\\' | 'λ' => push(TokenKind::Lambda, 1, &mut i, &mut col),
                '.' if chars.get(i + 1) == Some(&'.') => {
                    push(TokenKind::DotDot, 2, &mut i, &mut col)
                }
                '.' => push(TokenKind::Dot, 1, &mut i, &mut col),
                '(' => push(TokenKind::LParen, 1, &mut i, &mut col),
                ')' => push(TokenKind::RParen, 1, &mut i, &mut col),
                '[' => push(TokenKind::LBracket, 1, &mut i, &mut col),
                ']' => push(TokenKind::RBracket, 1, &mut i, &mut col),
                ';' => push(TokenKind::Semi, 1, &mut i, &mut col),
                ':' if chars.get(i + 1) == Some(&'=') => {
                    push(TokenKind::Assign, 2, &mut i, &mut col)
                }
                '=' if chars.get(i + 1) == Some(&'=') => {
                    push(TokenKind::Equals, 2, &mut i, &mut col)
                }
                '#' => {
                    let start = i + 1;
                    let mut j = start;
                    while j < chars.len() && chars[j].is_ascii_digit() {
                        j += 1;
                    }
                    if j == start {
                        return Err(err(tl, tc, "expected digits after `#`".into()));
                    }
                    let digits: String = chars[start..j].iter().collect();
                    let n = digits
                        .parse()
                        .map_err(|_| err(tl, tc, format!("numeral `#{digits}` is too large")))?;
                    push(TokenKind::Numeral(n), j - i, &mut i, &mut col);
                }
                c if c.is_ascii_digit() => {
                    let mut j = i;
                    while j < chars.len() && chars[j].is_ascii_digit() {
                        j += 1;
                    }
                    let digits: String = chars[i..j].iter().collect();
                    let n = digits
                        .parse()
                        .map_err(|_| err(tl, tc, format!("integer `{digits}` is too large")))?;
                    push(TokenKind::Int(n), j - i, &mut i, &mut col);
                }
                c if c.is_ascii_alphabetic() => {
                    let mut j = i;
                    while j < chars.len() && ident_char(chars[j]) {
                        j += 1;
                    }
                    let word: String = chars[i..j].iter().collect();
                    let kind = if c.is_ascii_uppercase() {
                        TokenKind::Upper(word)
                    } else {
                        TokenKind::Ident(word)
                    };
                    push(kind, j - i, &mut i, &mut col);
                }
                other => return Err(err(tl, tc, format!("unexpected character `{other}`"))),
            }
        }
        tokens.push(Token {
            kind: TokenKind::Eof,
            line,
            column: col,
        });
        Ok(Lexer { tokens, pos: 0 })
    }

    pub fn peek(&self) -> &TokenKind {
        &self.tokens[self.pos].kind
    }

    pub fn peek_at(&self, offset: usize) -> &TokenKind {
        let i = (self.pos + offset).min(self.tokens.len() - 1);
        &self.tokens[i].kind
    }

    pub fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    pub fn error(&self, message: impl Into<String>) -> KernelError {
        let t = &self.tokens[self.pos];
        KernelError::Parse {
            line: t.line,
            column: t.column,
            message: message.into(),
        }
    }

    pub fn expect(&mut self, kind: TokenKind, what: &str) -> Result<(), KernelError> {
        if *self.peek() == kind {
            self.bump();
            Ok(())
        } else {
            Err(self.error(format!("expected {what}, found {}", describe(self.peek()))))
        }
    }

    pub fn at_eof(&self) -> bool {
        *self.peek() == TokenKind::Eof
    }
}

pub fn describe(kind: &TokenKind) -> String {
    match kind {
        TokenKind::Lambda => "`\\`".into(),
        TokenKind::Dot => "`.`".into(),
        TokenKind::DotDot => "`..`".into(),
        TokenKind::LParen => "`(`".into(),
        TokenKind::RParen => "`)`".into(),
        TokenKind::LBracket => "`[`".into(),
        TokenKind::RBracket => "`]`".into(),
        TokenKind::Assign => "`:=`".into(),
        TokenKind::Semi => "`;`".into(),
        TokenKind::Equals => "`==`".into(),
        TokenKind::Ident(s) | TokenKind::Upper(s) => format!("`{s}`"),
        TokenKind::Numeral(n) => format!("`#{n}`"),
        TokenKind::Int(n) => format!("`{n}`"),
        TokenKind::Eof => "end of input".into(),
    }
}

/// Term parser over a shared [`Lexer`]; stops at the first token that cannot
/// continue a term, so callers can embed terms in larger syntax.
pub(crate) struct TermParser<'a> {
    pub lexer: &'a mut Lexer,
    pub env: &'a Env,
}

impl TermParser<'_> {
    pub fn term(&mut self) -> Result<Term, KernelError> {
        if *self.lexer.peek() == TokenKind::Lambda {
            return self.lambda();
        }
        self.application()
    }

    fn lambda(&mut self) -> Result<Term, KernelError> {
        self.lexer.expect(TokenKind::Lambda, "`\\`")?;
        let mut binders = Vec::new();
        while let TokenKind::Ident(x) = self.lexer.peek() {
            binders.push(x.clone());
            self.lexer.bump();
        }
        if binders.is_empty() {
            return Err(self.lexer.error(format!(
                "expected a lowercase binder, found {}",
                describe(self.lexer.peek())
            )));
        }
        self.lexer.expect(TokenKind::Dot, "`.` after binders")?;
        let body = self.term()?;
        Ok(Term::lams(binders, body))
    }

    fn application(&mut self) -> Result<Term, KernelError> {
        let mut acc = match self.atom()? {
            Some(t) => t,
            None => {
                return Err(self.lexer.error(format!(
                    "expected a term, found {}",
                    describe(self.lexer.peek())
                )))
            }
        };
        loop {
            if *self.lexer.peek() == TokenKind::Lambda {
                // a trailing abstraction extends to the end, like `f \x. x`
                let arg = self.lambda()?;
                return Ok(Term::app(acc, arg));
            }
            match self.atom()? {
                Some(t) => acc = Term::app(acc, t),
                None => return Ok(acc),
            }
        }
    }

    fn atom(&mut self) -> Result<Option<Term>, KernelError> {
        let t = match self.lexer.peek().clone() {
            TokenKind::Ident(x) => {
                self.lexer.bump();
                Term::Var(x)
            }
            TokenKind::Upper(c) => {
                if self.env.get(&c).is_none() {
                    return Err(KernelError::UnboundName(c));
                }
                self.lexer.bump();
                Term::Const(c)
            }
            TokenKind::Numeral(n) => {
                self.lexer.bump();
                church(n)
            }
            TokenKind::LParen => {
                self.lexer.bump();
                let t = self.term()?;
                self.lexer.expect(TokenKind::RParen, "`)`")?;
                t
            }
            _ => return Ok(None),
        };
        Ok(Some(t))
    }
}

/// Parses a single term. Uppercase identifiers must name entries of `env`.
pub fn parse(source: &str, env: &Env) -> Result<Term, KernelError> {
    let mut lexer = Lexer::new(source)?;
    let t = TermParser {
        lexer: &mut lexer,
        env,
    }
    .term()?;
    if !lexer.at_eof() {
        return Err(lexer.error(format!("unexpected {} after term", describe(lexer.peek()))));
    }
    Ok(t)
}

/// Parses a `.lam` definition file (`Name := term ;` ...) against `env`,
/// adding each definition as it is read so later lines may use earlier ones.
pub fn parse_definitions(
    source: &str,
    env: &mut Env,
    origin: &str,
) -> Result<Vec<String>, KernelError> {
    let mut lexer = Lexer::new(source)?;
    let mut names = Vec::new();
    while !lexer.at_eof() {
        let name = match lexer.peek().clone() {
            TokenKind::Upper(n) => n,
            other => {
                return Err(lexer.error(format!(
                    "expected an uppercase definition name, found {}",
                    describe(&other)
                )))
            }
        };
        lexer.bump();
        lexer.expect(TokenKind::Assign, "`:=`")?;
        let term = TermParser {
            lexer: &mut lexer,
            env,
        }
        .term()?;
        lexer.expect(TokenKind::Semi, "`;` after definition")?;
        env.define(&name, term, origin)?;
        names.push(name);
    }
    Ok(names)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn env() -> Env {
        Env::prelude()
    }

    #[test]
    fn identity() {
        assert_eq!(
            parse(r"\x.x", &env()).unwrap(),
            Term::lam("x", Term::var("x"))
        );
        assert_eq!(
            parse("λx.x", &env()).unwrap(),
            Term::lam("x", Term::var("x"))
        );
    }

    #[test]
    fn numeral_two() {
        let t = parse(r"\s z. s (s z)", &env()).unwrap();
        assert_eq!(t, church(2));
        assert_eq!(parse("#2", &env()).unwrap(), church(2));
    }

    #[test]
    fn application_is_left_associative() {
        let t = parse("a b c", &env()).unwrap();
        assert_eq!(
            t,
            Term::app(Term::app(Term::var("a"), Term::var("b")), Term::var("c"))
        );
    }

    #[test]
    fn trailing_lambda_argument() {
        let t = parse(r"f \x. x y", &env()).unwrap();
        assert_eq!(
            t,
            Term::app(
                Term::var("f"),
                Term::lam("x", Term::app(Term::var("x"), Term::var("y")))
            )
        );
    }

    #[test]
    fn comments_are_skipped() {
        let t = parse("a -- trailing words\n b", &env()).unwrap();
        assert_eq!(t, Term::app(Term::var("a"), Term::var("b")));
    }

    #[test]
    fn unbound_constant() {
        assert_eq!(
            parse("Nope x", &env()),
            Err(KernelError::UnboundName("Nope".into()))
        );
    }

    #[test]
    fn error_positions() {
        match parse("(a b", &env()) {
            Err(KernelError::Parse { line, column, .. }) => assert_eq!((line, column), (1, 5)),
            other => panic!("unexpected {other:?}"),
        }
        match parse("a\n  )", &env()) {
            Err(KernelError::Parse { line, column, .. }) => assert_eq!((line, column), (2, 3)),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse(r"\.x", &env()),
            Err(KernelError::Parse { .. })
        ));
        assert!(matches!(parse("", &env()), Err(KernelError::Parse { .. })));
        assert!(matches!(
            parse("a % b", &env()),
            Err(KernelError::Parse { .. })
        ));
    }

    #[test]
    fn definitions_may_only_look_back() {
        let mut env = Env::empty();
        parse_definitions("Id := \\x.x ;\nTwice := \\f x. f (f x);", &mut env, "t").unwrap();
        assert!(env.get("Twice").is_some());
        let mut env = Env::empty();
        let err = parse_definitions("A := B ;\nB := \\x.x ;", &mut env, "t").unwrap_err();
        assert_eq!(err, KernelError::UnboundName("B".into()));
    }

    #[test]
    fn definitions_must_be_closed() {
        let mut env = Env::empty();
        let err = parse_definitions("A := \\x. y ;", &mut env, "t").unwrap_err();
        assert!(matches!(err, KernelError::NotClosed { .. }));
    }
}
