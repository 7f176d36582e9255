//! Named lambda terms: representation, free variables, size, alpha-equivalence
//! and capture-avoiding substitution.

mod env;
mod parse;
mod print;

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use thiserror::Error;

pub use env::{Definition, Env, PRELUDE_LAM, VARIADIC_LAM};
pub use parse::{describe, parse, parse_definitions, Lexer, Token, TokenKind};
pub use print::{as_numeral, print};

/// Deep recursion guard shared by the recursive traversals of the crate.
pub(crate) fn with_stack<R>(f: impl FnOnce() -> R) -> R {
    stacker::maybe_grow(64 * 1024, 4 * 1024 * 1024, f)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KernelError {
    #[error("parse error at {line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unbound name `{0}`")]
    UnboundName(String),
    #[error("size is undefined for unexpanded constant `{0}`")]
    UnexpandedConstant(String),
    #[error("`{0}` is already defined")]
    DuplicateDefinition(String),
    #[error("definition of `{name}` has free variables: {free}")]
    NotClosed { name: String, free: String },
}

/// A lambda term with named variables.
///
/// `Const` refers to an [`Env`] entry by name. Equality via `==` is
/// syntactic; use [`alpha_eq`] for identity modulo binder renaming.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    Lam(String, Box<Term>),
    App(Box<Term>, Box<Term>),
    Const(String),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn constant(name: impl Into<String>) -> Term {
        Term::Const(name.into())
    }

    pub fn lam(binder: impl Into<String>, body: Term) -> Term {
        Term::Lam(binder.into(), Box::new(body))
    }

    /// `\b1 b2 ... bn. body`
    pub fn lams<S: Into<String>>(binders: impl IntoIterator<Item = S>, body: Term) -> Term {
        let binders: Vec<String> = binders.into_iter().map(Into::into).collect();
        binders
            .into_iter()
            .rev()
            .fold(body, |acc, b| Term::Lam(b, Box::new(acc)))
    }

    pub fn app(fun: Term, arg: Term) -> Term {
        Term::App(Box::new(fun), Box::new(arg))
    }

    /// Left-associated application `head a1 ... an`.
    pub fn apps(head: Term, args: impl IntoIterator<Item = Term>) -> Term {
        args.into_iter().fold(head, Term::app)
    }

    pub fn is_lam(&self) -> bool {
        matches!(self, Term::Lam(..))
    }

    pub fn contains_lam(&self) -> bool {
        match self {
            Term::Var(_) | Term::Const(_) => false,
            Term::Lam(..) => true,
            Term::App(f, a) => f.contains_lam() || a.contains_lam(),
        }
    }

    /// Names of all constants mentioned by the term.
    pub fn constants(&self) -> BTreeSet<String> {
        fn go(t: &Term, out: &mut BTreeSet<String>) {
            match t {
                Term::Var(_) => {}
                Term::Const(c) => {
                    out.insert(c.clone());
                }
                Term::Lam(_, b) => go(b, out),
                Term::App(f, a) => {
                    go(f, out);
                    go(a, out);
                }
            }
        }
        let mut out = BTreeSet::new();
        go(self, &mut out);
        out
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print(self, false))
    }
}

pub fn free_vars(t: &Term) -> BTreeSet<String> {
    fn go(t: &Term, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        with_stack(|| match t {
            Term::Var(x) => {
                if !bound.iter().any(|b| b == x) {
                    out.insert(x.clone());
                }
            }
            Term::Const(_) => {}
            Term::Lam(x, body) => {
                bound.push(x.clone());
                go(body, bound, out);
                bound.pop();
            }
            Term::App(f, a) => {
                go(f, bound, out);
                go(a, bound, out);
            }
        })
    }
    let mut out = BTreeSet::new();
    go(t, &mut Vec::new(), &mut out);
    out
}

pub fn occurs_free(x: &str, t: &Term) -> bool {
    with_stack(|| match t {
        Term::Var(y) => x == y,
        Term::Const(_) => false,
        Term::Lam(y, body) => y != x && occurs_free(x, body),
        Term::App(f, a) => occurs_free(x, f) || occurs_free(x, a),
    })
}

/// Every variable name occurring in the term, bound or free.
pub fn all_names(t: &Term) -> HashSet<String> {
    fn go(t: &Term, out: &mut HashSet<String>) {
        match t {
            Term::Var(x) => {
                out.insert(x.clone());
            }
            Term::Const(_) => {}
            Term::Lam(x, b) => {
                out.insert(x.clone());
                go(b, out);
            }
            Term::App(f, a) => {
                go(f, out);
                go(a, out);
            }
        }
    }
    let mut out = HashSet::new();
    go(t, &mut out);
    out
}

/// `|x| = 1`, `|\x.P| = 1 + |P|`, `|P Q| = 1 + |P| + |Q|`.
pub fn size(t: &Term) -> Result<u64, KernelError> {
    with_stack(|| match t {
        Term::Var(_) => Ok(1),
        Term::Const(c) => Err(KernelError::UnexpandedConstant(c.clone())),
        Term::Lam(_, b) => Ok(1 + size(b)?),
        Term::App(f, a) => Ok(1 + size(f)? + size(a)?),
    })
}

/// Size where every constant counts as a single leaf.
pub fn leaf_size(t: &Term) -> u64 {
    match t {
        Term::Var(_) | Term::Const(_) => 1,
        Term::Lam(_, b) => 1 + leaf_size(b),
        Term::App(f, a) => 1 + leaf_size(f) + leaf_size(a),
    }
}

/// Identity modulo consistent renaming of bound variables. Constants compare
/// by name.
pub fn alpha_eq(a: &Term, b: &Term) -> bool {
    fn lookup(stack: &[&str], x: &str) -> Option<usize> {
        stack.iter().rev().position(|b| *b == x)
    }
    fn go<'a>(a: &'a Term, b: &'a Term, sa: &mut Vec<&'a str>, sb: &mut Vec<&'a str>) -> bool {
        with_stack(|| match (a, b) {
            (Term::Var(x), Term::Var(y)) => match (lookup(sa, x), lookup(sb, y)) {
                (Some(i), Some(j)) => i == j,
                (None, None) => x == y,
                _ => false,
            },
            (Term::Const(x), Term::Const(y)) => x == y,
            (Term::Lam(x, p), Term::Lam(y, q)) => {
                sa.push(x);
                sb.push(y);
                let r = go(p, q, sa, sb);
                sa.pop();
                sb.pop();
                r
            }
            (Term::App(f, x), Term::App(g, y)) => go(f, g, sa, sb) && go(x, y, sa, sb),
            _ => false,
        })
    }
    go(a, b, &mut Vec::new(), &mut Vec::new())
}

/// Primes `base` (`y`, `y'`, `y''`, ...) until `taken` rejects it no longer.
pub fn fresh_name(base: &str, taken: impl Fn(&str) -> bool) -> String {
    let mut name = base.to_string();
    while taken(&name) {
        name.push('\'');
    }
    name
}

/// Capture-avoiding substitution `t[v := r]`.
pub fn substitute(t: &Term, v: &str, r: &Term) -> Term {
    let fv_r = free_vars(r);
    subst_with(t, v, r, &fv_r)
}

fn subst_with(t: &Term, v: &str, r: &Term, fv_r: &BTreeSet<String>) -> Term {
    with_stack(|| match t {
        Term::Var(x) if x == v => r.clone(),
        Term::Var(_) | Term::Const(_) => t.clone(),
        Term::App(f, a) => Term::app(subst_with(f, v, r, fv_r), subst_with(a, v, r, fv_r)),
        Term::Lam(y, _) if y == v => t.clone(),
        Term::Lam(_, body) if !occurs_free(v, body) => t.clone(),
        Term::Lam(y, body) if fv_r.contains(y) => {
            let fv_body = free_vars(body);
            let fresh = fresh_name(y, |n| n == v || fv_r.contains(n) || fv_body.contains(n));
            let renamed = subst_with(
                body,
                y,
                &Term::Var(fresh.clone()),
                &BTreeSet::from([fresh.clone()]),
            );
            Term::lam(fresh, subst_with(&renamed, v, r, fv_r))
        }
        Term::Lam(y, body) => Term::lam(y.clone(), subst_with(body, v, r, fv_r)),
    })
}

/// Replaces every constant by its (recursively expanded) definition.
pub fn expand_consts(t: &Term, env: &Env) -> Result<Term, KernelError> {
    with_stack(|| match t {
        Term::Var(_) => Ok(t.clone()),
        Term::Const(c) => {
            let def = env
                .get(c)
                .ok_or_else(|| KernelError::UnboundName(c.clone()))?;
            expand_consts(def, env)
        }
        Term::Lam(x, b) => Ok(Term::lam(x.clone(), expand_consts(b, env)?)),
        Term::App(f, a) => Ok(Term::app(expand_consts(f, env)?, expand_consts(a, env)?)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(src: &str) -> Term {
        parse(src, &Env::prelude()).unwrap()
    }

    #[test]
    fn free_vars_examples() {
        assert_eq!(free_vars(&p(r"\x. x y")), BTreeSet::from(["y".to_string()]));
        assert_eq!(
            free_vars(&p(r"x (\x.x)")),
            BTreeSet::from(["x".to_string()])
        );
        assert!(free_vars(&p("K")).is_empty());
    }

    #[test]
    fn size_examples() {
        assert_eq!(size(&p("x")), Ok(1));
        assert_eq!(size(&p(r"\x.x")), Ok(2));
        assert_eq!(size(&p(r"\x.\y.x")), Ok(3));
        assert_eq!(
            size(&p("K")),
            Err(KernelError::UnexpandedConstant("K".into()))
        );
    }

    #[test]
    fn alpha_examples() {
        assert!(alpha_eq(&p(r"\x.x"), &p(r"\y.y")));
        assert!(alpha_eq(&p(r"\x.\y.x"), &p(r"\y.\x.y")));
        assert!(!alpha_eq(&p(r"\x.\y.x"), &p(r"\x.\y.y")));
        assert!(!alpha_eq(&p(r"\x.y"), &p(r"\x.x")));
        assert!(!alpha_eq(&p("K"), &p("S")));
        assert!(alpha_eq(&p(r"\x. x y"), &p(r"\z. z y")));
    }

    #[test]
    fn substitution_avoids_capture() {
        let t = substitute(&p(r"\y.x"), "x", &Term::var("y"));
        assert_eq!(t, Term::lam("y'", Term::var("y")));
        assert_eq!(
            substitute(&Term::var("x"), "x", &Term::constant("K")),
            Term::constant("K")
        );
        let id = p(r"\x.x");
        assert_eq!(substitute(&id, "x", &Term::var("q")), id);
    }

    #[test]
    fn substitution_renames_past_existing_primes() {
        // y' is free in the body, so the fresh binder must skip it.
        let t = substitute(&p(r"\y. x y'"), "x", &Term::var("y"));
        assert_eq!(
            t,
            Term::lam("y''", Term::app(Term::var("y"), Term::var("y'")))
        );
    }

    #[test]
    fn expand_k() {
        let env = Env::prelude();
        assert!(alpha_eq(
            &expand_consts(&p("K"), &env).unwrap(),
            &p(r"\x y.x")
        ));
        let id = p(r"\x.x");
        assert_eq!(expand_consts(&id, &env).unwrap(), id);
        let sb = expand_consts(&p("S B"), &env).unwrap();
        assert!(alpha_eq(&sb, &p(r"(\x y z. x z (y z)) (\x y z. x (y z))")));
    }

    #[test]
    fn church_sizes() {
        let env = Env::prelude();
        for n in 0..10u64 {
            let t = expand_consts(&p(&format!("#{n}")), &env).unwrap();
            assert_eq!(size(&t).unwrap(), 3 + 2 * n);
        }
    }
}
