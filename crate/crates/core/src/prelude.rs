//! Church encodings: numerals, tuples, selectors and projections.

use thiserror::Error;

use crate::engine::{normalize, EngineError, ReductionConfig, Status};
use crate::kernel::{print, Env, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PreludeError {
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("term has no normal form within the reduction limits ({0:?})")]
    NoNormalForm(Status),
    #[error("normal form is not a Church numeral: {0}")]
    NotANumeral(String),
    #[error("index {k} out of range 1..={n}")]
    IndexOutOfRange { k: usize, n: usize },
}

/// `\s z. s (s ... (s z))` with `n` applications of `s`.
pub fn church(n: u64) -> Term {
    let mut body = Term::var("z");
    for _ in 0..n {
        body = Term::app(Term::var("s"), body);
    }
    Term::lams(["s", "z"], body)
}

/// Applies `t` to two fresh variables `s` and `z`, normalizes, and counts
/// the applications of `s` in the result `s (s ... (s z))`. Accepts eta-short
/// numerals such as `\s.s`.
pub fn unchurch(t: &Term, env: &Env, cfg: &ReductionConfig) -> Result<u64, PreludeError> {
    let frees = crate::kernel::free_vars(t);
    let s = crate::kernel::fresh_name("s", |c| frees.contains(c));
    let z = crate::kernel::fresh_name("z", |c| frees.contains(c) || c == s);
    let probe = Term::apps(t.clone(), [Term::var(s.as_str()), Term::var(z.as_str())]);
    let out = normalize(&probe, env, cfg)?;
    if out.status != Status::NormalForm {
        return Err(PreludeError::NoNormalForm(out.status));
    }
    let mut n = 0;
    let mut cur = &out.result;
    loop {
        match cur {
            Term::Var(v) if *v == z => return Ok(n),
            Term::App(f, a) if matches!(f.as_ref(), Term::Var(v) if *v == s) => {
                n += 1;
                cur = a;
            }
            _ => return Err(PreludeError::NotANumeral(print(&out.result, false))),
        }
    }
}

fn binders(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

/// `<t1, ..., tn> = \z. z t1 ... tn`. The binder is renamed away from the
/// free variables of the components.
pub fn tuple(items: &[Term]) -> Term {
    let frees: std::collections::BTreeSet<String> =
        items.iter().flat_map(crate::kernel::free_vars).collect();
    let z = crate::kernel::fresh_name("z", |c| frees.contains(c));
    Term::lam(z.clone(), Term::apps(Term::var(z), items.iter().cloned()))
}

/// `\x1 ... xn. xk`, 1-indexed.
pub fn selector(k: usize, n: usize) -> Result<Term, PreludeError> {
    if k == 0 || k > n {
        return Err(PreludeError::IndexOutOfRange { k, n });
    }
    Ok(Term::lams(binders(n), Term::var(format!("x{k}"))))
}

/// `\v. v (\x1 ... xn. xk)`, selecting component `k` of an `n`-tuple.
pub fn projection(k: usize, n: usize) -> Result<Term, PreludeError> {
    Ok(Term::lam("v", Term::app(Term::var("v"), selector(k, n)?)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::beta_eta_equal;
    use crate::engine::Verdict;
    use crate::kernel::{parse, size};

    #[test]
    fn numerals() {
        assert_eq!(print(&church(0), false), r"\s z.z");
        assert_eq!(print(&church(2), false), r"\s z.s (s z)");
        for n in 0..20 {
            assert_eq!(size(&church(n)).unwrap(), 3 + 2 * n);
            assert_eq!(crate::kernel::as_numeral(&church(n)), Some(n));
        }
    }

    #[test]
    fn unchurch_round_trip() {
        let env = Env::prelude();
        let cfg = ReductionConfig::default();
        for n in 0..30 {
            assert_eq!(unchurch(&church(n), &env, &cfg).unwrap(), n);
        }
        let err = unchurch(&Term::constant("K"), &env, &cfg).unwrap_err();
        assert!(matches!(err, PreludeError::NotANumeral(_)));
    }

    #[test]
    fn unchurch_examples() {
        let env = Env::prelude();
        let cfg = ReductionConfig::default();
        let u = |src: &str| unchurch(&parse(src, &env).unwrap(), &env, &cfg).unwrap();
        assert_eq!(u("Plus #2 #3"), 5);
        assert_eq!(u("Pred #0"), 0);
        assert_eq!(u(r"\s.s"), 1);
        // the probe variables are renamed away from free variables
        assert!(unchurch(&parse(r"\f x. s", &env).unwrap(), &env, &cfg).is_err());
    }

    #[test]
    fn successor_and_predecessor() {
        let env = Env::prelude();
        let cfg = ReductionConfig::default();
        let eq = |a: Term, b: Term| beta_eta_equal(&a, &b, &env, &cfg).unwrap();
        for n in 0..=8 {
            let succ = Term::app(Term::constant("Succ"), church(n));
            assert_eq!(eq(succ, church(n + 1)), Verdict::Equal);
        }
        for n in 0..=6 {
            let pred = Term::app(Term::constant("Pred"), church(n + 1));
            assert_eq!(eq(pred, church(n)), Verdict::Equal);
        }
        assert_eq!(
            eq(Term::app(Term::constant("Pred"), church(0)), church(0)),
            Verdict::Equal
        );
    }

    #[test]
    fn addition_without_ellipses() {
        // R = \n. n Succ adds by iterating the successor
        let env = Env::prelude();
        let cfg = ReductionConfig::default();
        let r = parse(r"\n. n Succ", &env).unwrap();
        for k in 0..=5 {
            for m in 0..=5 {
                let t = Term::apps(r.clone(), [church(k), church(m)]);
                assert_eq!(unchurch(&t, &env, &cfg).unwrap(), k + m);
            }
        }
    }

    #[test]
    fn tuple_applies_its_components() {
        let env = Env::prelude();
        let cfg = ReductionConfig::default();
        let items = vec![church(1), parse("K", &env).unwrap(), Term::var("e")];
        let lhs = Term::app(tuple(&items), Term::var("p"));
        let rhs = Term::apps(Term::var("p"), items.clone());
        assert_eq!(
            beta_eta_equal(&lhs, &rhs, &env, &cfg).unwrap(),
            Verdict::Equal
        );
        let pi = Term::app(projection(1, 2).unwrap(), tuple(&[church(0), church(0)]));
        assert_eq!(
            beta_eta_equal(&pi, &church(0), &env, &cfg).unwrap(),
            Verdict::Equal
        );
    }

    #[test]
    fn tuples_and_projections() {
        let env = Env::prelude();
        let cfg = ReductionConfig::default();
        let items: Vec<Term> = ["a", "b", "c"].iter().map(|x| Term::var(*x)).collect();
        let tup = tuple(&items);
        assert_eq!(print(&tup, false), r"\z.z a b c");
        assert_eq!(print(&tuple(&[]), false), r"\z.z");
        assert_eq!(print(&tuple(&[church(0)]), true), r"\z.z #0");
        for k in 1..=3 {
            let lhs = Term::app(projection(k, 3).unwrap(), tup.clone());
            assert_eq!(
                beta_eta_equal(&lhs, &items[k - 1], &env, &cfg).unwrap(),
                Verdict::Equal
            );
        }
        assert_eq!(
            selector(0, 2),
            Err(PreludeError::IndexOutOfRange { k: 0, n: 2 })
        );
        assert!(projection(3, 2).is_err());
        assert_eq!(print(&tuple(&[Term::var("z")]), false), r"\z'.z' z");
    }
}
