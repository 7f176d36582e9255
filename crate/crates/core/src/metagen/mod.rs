//! The ellipsis meta-language: terms with sequence binders `x[1..n]` and
//! splices, their expansion for a concrete length, and the registry of
//! indexed families used as brute-force oracles.

mod family;

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::kernel::{describe, KernelError, Lexer, Term, TokenKind};
use crate::prelude::church;

pub use family::{builtin_meta, builtin_metas, family, Family, FamilyInstance};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetaError {
    #[error(transparent)]
    Parse(#[from] KernelError),
    #[error("unknown sequence `{0}`")]
    UnknownSequence(String),
    #[error("meta-term mixes index variables `{0}` and `{1}`")]
    MultipleIndexVariables(String, String),
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
    #[error("family {family} requires an index k")]
    MissingIndex { family: String },
    #[error("family {family} takes no index k")]
    UnexpectedIndex { family: String },
    #[error("index out of range for {family}: k = {k}, n = {n}")]
    IndexOutOfRange { family: String, k: usize, n: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Binder {
    Single(String),
    /// `name[1..index]`
    Seq(String, String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MetaArg {
    Plain(MetaTerm),
    /// The left-associated application chain of a sequence's variables.
    Splice(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MetaTerm {
    Var(String),
    Const(String),
    Numeral(u64),
    Lam(Vec<Binder>, Box<MetaTerm>),
    /// Left-associated application. The head may itself be a splice, in
    /// which case the chain starts with the sequence's first variable.
    App(Box<MetaArg>, Vec<MetaArg>),
}

impl MetaTerm {
    pub fn var(x: &str) -> MetaTerm {
        MetaTerm::Var(x.into())
    }

    /// The index variable shared by all sequences, if any.
    pub fn index_var(&self) -> Result<Option<String>, MetaError> {
        let mut found: Option<String> = None;
        let mut err = None;
        self.visit_binders(&mut |b| {
            if let Binder::Seq(_, idx) = b {
                match &found {
                    None => found = Some(idx.clone()),
                    Some(f) if f != idx && err.is_none() => {
                        err = Some(MetaError::MultipleIndexVariables(f.clone(), idx.clone()))
                    }
                    _ => {}
                }
            }
        });
        match err {
            Some(e) => Err(e),
            None => Ok(found),
        }
    }

    fn visit_binders(&self, f: &mut impl FnMut(&Binder)) {
        match self {
            MetaTerm::Lam(bs, body) => {
                bs.iter().for_each(&mut *f);
                body.visit_binders(f);
            }
            MetaTerm::App(head, args) => {
                for a in std::iter::once(head.as_ref()).chain(args) {
                    if let MetaArg::Plain(t) = a {
                        t.visit_binders(f);
                    }
                }
            }
            _ => {}
        }
    }

    /// Every variable and binder name occurring in the term.
    pub fn names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_names(&mut out);
        out
    }

    fn collect_names(&self, out: &mut BTreeSet<String>) {
        match self {
            MetaTerm::Var(x) => {
                out.insert(x.clone());
            }
            MetaTerm::Lam(bs, body) => {
                for b in bs {
                    match b {
                        Binder::Single(x) | Binder::Seq(x, _) => out.insert(x.clone()),
                    };
                }
                body.collect_names(out);
            }
            MetaTerm::App(head, args) => {
                for a in std::iter::once(head.as_ref()).chain(args) {
                    match a {
                        MetaArg::Plain(t) => t.collect_names(out),
                        MetaArg::Splice(x) => {
                            out.insert(x.clone());
                        }
                    }
                }
            }
            MetaTerm::Const(_) | MetaTerm::Numeral(_) => {}
        }
    }

    /// Free single variables (sequence splices excluded).
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            MetaTerm::Var(x) => {
                if !bound.contains(x) {
                    out.insert(x.clone());
                }
            }
            MetaTerm::Lam(bs, body) => {
                let before = bound.len();
                for b in bs {
                    if let Binder::Single(x) = b {
                        bound.push(x.clone());
                    }
                }
                body.collect_free(bound, out);
                bound.truncate(before);
            }
            MetaTerm::App(head, args) => {
                for a in std::iter::once(head.as_ref()).chain(args) {
                    if let MetaArg::Plain(t) = a {
                        t.collect_free(bound, out);
                    }
                }
            }
            MetaTerm::Const(_) | MetaTerm::Numeral(_) => {}
        }
    }
}

impl std::fmt::Display for MetaTerm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        fn arg(
            a: &MetaArg,
            idx: &str,
            head: bool,
            f: &mut std::fmt::Formatter<'_>,
        ) -> std::fmt::Result {
            match a {
                MetaArg::Splice(x) => write!(f, "{x}[1..{idx}]"),
                MetaArg::Plain(t) => {
                    let atomic = match t {
                        MetaTerm::Var(_) | MetaTerm::Const(_) | MetaTerm::Numeral(_) => true,
                        MetaTerm::App(h, args) => {
                            head || (args.is_empty() && !matches!(**h, MetaArg::Plain(_)))
                        }
                        MetaTerm::Lam(..) => false,
                    };
                    if atomic {
                        go(t, idx, f)
                    } else {
                        write!(f, "(")?;
                        go(t, idx, f)?;
                        write!(f, ")")
                    }
                }
            }
        }
        fn go(t: &MetaTerm, idx: &str, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
            match t {
                MetaTerm::Var(x) | MetaTerm::Const(x) => write!(f, "{x}"),
                MetaTerm::Numeral(n) => write!(f, "#{n}"),
                MetaTerm::Lam(bs, body) => {
                    write!(f, "\\")?;
                    for (i, b) in bs.iter().enumerate() {
                        if i > 0 {
                            write!(f, " ")?;
                        }
                        match b {
                            Binder::Single(x) => write!(f, "{x}")?,
                            Binder::Seq(x, i) => write!(f, "{x}[1..{i}]")?,
                        }
                    }
                    write!(f, ". ")?;
                    go(body, idx, f)
                }
                MetaTerm::App(head, args) => {
                    arg(head, idx, true, f)?;
                    for a in args {
                        write!(f, " ")?;
                        arg(a, idx, false, f)?;
                    }
                    Ok(())
                }
            }
        }
        let idx = self
            .index_var()
            .ok()
            .flatten()
            .unwrap_or_else(|| "n".into());
        go(self, &idx, f)
    }
}

/// Parses the meta grammar: the term grammar extended with sequence binders
/// `x[1..n]` and splices `x[1..n]` in head or argument position.
/// Uppercase identifiers become constants without being resolved.
pub fn parse_meta(source: &str) -> Result<MetaTerm, MetaError> {
    let mut lexer = Lexer::new(source)?;
    let t = MetaParser { lexer: &mut lexer }.term()?;
    if !lexer.at_eof() {
        return Err(lexer
            .error(format!(
                "unexpected {} after meta-term",
                describe(lexer.peek())
            ))
            .into());
    }
    t.index_var()?;
    Ok(t)
}

struct MetaParser<'a> {
    lexer: &'a mut Lexer,
}

impl MetaParser<'_> {
    fn term(&mut self) -> Result<MetaTerm, MetaError> {
        if *self.lexer.peek() == TokenKind::Lambda {
            return self.lambda();
        }
        self.application()
    }

    /// After an identifier: `[1..idx]`, if present.
    fn range(&mut self) -> Result<Option<String>, MetaError> {
        if *self.lexer.peek() != TokenKind::LBracket {
            return Ok(None);
        }
        self.lexer.bump();
        if *self.lexer.peek() != TokenKind::Int(1) {
            return Err(self.lexer.error("sequence ranges must start at 1").into());
        }
        self.lexer.bump();
        self.lexer.expect(TokenKind::DotDot, "`..`")?;
        let idx = match self.lexer.peek().clone() {
            TokenKind::Ident(i) => {
                self.lexer.bump();
                i
            }
            other => {
                return Err(self
                    .lexer
                    .error(format!(
                        "expected an index variable, found {}",
                        describe(&other)
                    ))
                    .into())
            }
        };
        self.lexer.expect(TokenKind::RBracket, "`]`")?;
        Ok(Some(idx))
    }

    fn lambda(&mut self) -> Result<MetaTerm, MetaError> {
        self.lexer.expect(TokenKind::Lambda, "`\\`")?;
        let mut binders = Vec::new();
        while let TokenKind::Ident(x) = self.lexer.peek().clone() {
            self.lexer.bump();
            binders.push(match self.range()? {
                Some(idx) => Binder::Seq(x, idx),
                None => Binder::Single(x),
            });
        }
        if binders.is_empty() {
            return Err(self
                .lexer
                .error(format!(
                    "expected a binder, found {}",
                    describe(self.lexer.peek())
                ))
                .into());
        }
        self.lexer.expect(TokenKind::Dot, "`.` after binders")?;
        let body = self.term()?;
        Ok(MetaTerm::Lam(binders, Box::new(body)))
    }

    fn application(&mut self) -> Result<MetaTerm, MetaError> {
        let Some(head) = self.item()? else {
            return Err(self
                .lexer
                .error(format!(
                    "expected a term, found {}",
                    describe(self.lexer.peek())
                ))
                .into());
        };
        let mut args = Vec::new();
        loop {
            if *self.lexer.peek() == TokenKind::Lambda {
                args.push(MetaArg::Plain(self.lambda()?));
                break;
            }
            match self.item()? {
                Some(a) => args.push(a),
                None => break,
            }
        }
        Ok(match (head, args.is_empty()) {
            (MetaArg::Plain(t), true) => t,
            (head, _) => MetaTerm::App(Box::new(head), args),
        })
    }

    fn item(&mut self) -> Result<Option<MetaArg>, MetaError> {
        let t = match self.lexer.peek().clone() {
            TokenKind::Ident(x) => {
                self.lexer.bump();
                return Ok(Some(match self.range()? {
                    Some(_) => MetaArg::Splice(x),
                    None => MetaArg::Plain(MetaTerm::Var(x)),
                }));
            }
            TokenKind::Upper(c) => {
                self.lexer.bump();
                MetaTerm::Const(c)
            }
            TokenKind::Numeral(n) => {
                self.lexer.bump();
                MetaTerm::Numeral(n)
            }
            TokenKind::LParen => {
                self.lexer.bump();
                let t = self.term()?;
                self.lexer.expect(TokenKind::RParen, "`)`")?;
                t
            }
            _ => return Ok(None),
        };
        Ok(Some(MetaArg::Plain(t)))
    }
}

pub(crate) fn identity() -> Term {
    Term::lam("x", Term::var("x"))
}

/// Left-associated application of `args` to `head`; with neither, the
/// identity (an empty application chain denotes `I`).
pub(crate) fn spine(head: Option<Term>, args: impl IntoIterator<Item = Term>) -> Term {
    let mut acc = head;
    for a in args {
        acc = Some(match acc {
            Some(h) => Term::app(h, a),
            None => a,
        });
    }
    acc.unwrap_or_else(identity)
}

/// Replaces every sequence binder by `n` concrete binders `x1 ... xn`
/// (primed when they would clash with another name of the term) and every
/// splice by the application chain of those variables. An empty chain in
/// head position disappears; an empty chain standing alone is `I`.
pub fn expand(m: &MetaTerm, n: usize) -> Result<Term, MetaError> {
    m.index_var()?;
    let mut ex = Expander {
        n,
        taken: m.names(),
        scope: HashMap::new(),
    };
    ex.term(m)
}

struct Expander {
    n: usize,
    taken: BTreeSet<String>,
    scope: HashMap<String, Vec<Vec<String>>>,
}

impl Expander {
    fn fresh(&mut self, base: String) -> String {
        let name = crate::kernel::fresh_name(&base, |c| self.taken.contains(c));
        self.taken.insert(name.clone());
        name
    }

    fn term(&mut self, m: &MetaTerm) -> Result<Term, MetaError> {
        crate::kernel::with_stack(|| match m {
            MetaTerm::Var(x) => Ok(Term::var(x.as_str())),
            MetaTerm::Const(c) => Ok(Term::constant(c.as_str())),
            MetaTerm::Numeral(k) => Ok(church(*k)),
            MetaTerm::Lam(bs, body) => {
                let mut names = Vec::new();
                let mut pushed = Vec::new();
                for b in bs {
                    match b {
                        Binder::Single(x) => names.push(x.clone()),
                        Binder::Seq(x, _) => {
                            let vars: Vec<String> = (1..=self.n)
                                .map(|i| self.fresh(format!("{x}{i}")))
                                .collect();
                            names.extend(vars.iter().cloned());
                            self.scope.entry(x.clone()).or_default().push(vars);
                            pushed.push(x.clone());
                        }
                    }
                }
                let body = self.term(body);
                for x in pushed {
                    self.scope.get_mut(&x).expect("pushed").pop();
                }
                Ok(Term::lams(names, body?))
            }
            MetaTerm::App(head, args) => {
                let mut items = Vec::new();
                for a in std::iter::once(head.as_ref()).chain(args) {
                    match a {
                        MetaArg::Plain(t) => items.push(self.term(t)?),
                        MetaArg::Splice(x) => {
                            let vars = self
                                .scope
                                .get(x)
                                .and_then(|s| s.last())
                                .ok_or_else(|| MetaError::UnknownSequence(x.clone()))?;
                            items.extend(vars.iter().map(|v| Term::var(v.as_str())));
                        }
                    }
                }
                Ok(spine(None, items))
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{alpha_eq, parse, print, Env};

    fn p(src: &str) -> Term {
        parse(src, &Env::prelude()).unwrap()
    }

    #[test]
    fn parse_tuple_maker() {
        let m = parse_meta(r"\x[1..n] s. s x[1..n]").unwrap();
        assert_eq!(
            m,
            MetaTerm::Lam(
                vec![
                    Binder::Seq("x".into(), "n".into()),
                    Binder::Single("s".into())
                ],
                Box::new(MetaTerm::App(
                    Box::new(MetaArg::Plain(MetaTerm::var("s"))),
                    vec![MetaArg::Splice("x".into())]
                ))
            )
        );
        assert_eq!(m.index_var().unwrap(), Some("n".into()));
        assert_eq!(m.to_string(), r"\x[1..n] s. s x[1..n]");
    }

    #[test]
    fn expand_examples() {
        let tup = parse_meta(r"\x[1..n] s. s x[1..n]").unwrap();
        assert_eq!(print(&expand(&tup, 2).unwrap(), false), r"\x1 x2 s.s x1 x2");
        let k = parse_meta(r"\p x[1..n]. p").unwrap();
        assert_eq!(print(&expand(&k, 0).unwrap(), false), r"\p.p");
        let d = parse_meta(r"\x[1..n]. x[1..n] (x[1..n])").unwrap();
        assert_eq!(print(&expand(&d, 1).unwrap(), false), r"\x1.x1 x1");
        assert_eq!(
            print(&expand(&d, 2).unwrap(), false),
            r"\x1 x2.x1 x2 (x1 x2)"
        );
        assert!(alpha_eq(&expand(&d, 0).unwrap(), &p(r"\x.x")));
    }

    #[test]
    fn expansion_avoids_existing_names() {
        let m = parse_meta(r"\x1 x[1..n]. x1 x[1..n]").unwrap();
        assert_eq!(
            print(&expand(&m, 2).unwrap(), false),
            r"\x1 x1' x2.x1 x1' x2"
        );
    }

    #[test]
    fn expansion_is_closed() {
        for m in builtin_metas() {
            for n in 0..5 {
                let t = expand(&m.1, n).unwrap();
                assert!(crate::kernel::free_vars(&t).is_empty(), "{} {n}", m.0);
            }
        }
    }

    #[test]
    fn errors() {
        let m = MetaTerm::App(Box::new(MetaArg::Splice("y".into())), vec![]);
        assert_eq!(expand(&m, 1), Err(MetaError::UnknownSequence("y".into())));
        assert!(matches!(
            parse_meta(r"\x[1..n] y[1..m]. x"),
            Err(MetaError::MultipleIndexVariables(..))
        ));
        assert!(matches!(
            parse_meta(r"\x[0..n]. x"),
            Err(MetaError::Parse(_))
        ));
        assert!(matches!(
            parse_meta(r"\x[1..n. x"),
            Err(MetaError::Parse(_))
        ));
    }
}
