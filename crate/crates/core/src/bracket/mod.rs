//! Bracket abstraction: Turner's algorithm over `{I, K, B, C, S}` and its
//! extension with `{VarI, VarK, VarB, VarC, VarS}` for sequence binders.

use thiserror::Error;

use crate::kernel::{free_vars, leaf_size, occurs_free, Env, Term};
use crate::metagen::{Binder, MetaArg, MetaError, MetaTerm};
use crate::prelude::church;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BracketError {
    #[error(transparent)]
    Meta(#[from] MetaError),
    #[error("sequence `{0}` is used partially or under another splice")]
    MixedSequenceUse(String),
    #[error(
        "binder `{binder}` occurs in the head of a splice of `{seq}`; no basis rule abstracts it"
    )]
    SpliceUnderBinder { binder: String, seq: String },
    #[error("splice of `{0}` outside the scope of its binder")]
    UnboundSequence(String),
    #[error("the index variable `{0}` is also used as a term variable")]
    IndexCaptured(String),
}

fn constant(name: &str) -> Term {
    Term::constant(name)
}

/// Turner's algorithm, bottom-up: bodies are translated before their
/// binder is abstracted. Constants are opaque leaves.
pub fn turner(t: &Term) -> Term {
    crate::kernel::with_stack(|| match t {
        Term::Var(_) | Term::Const(_) => t.clone(),
        Term::App(p, q) => Term::app(turner(p), turner(q)),
        Term::Lam(x, body) => abstract_var(x, turner(body)),
    })
}

/// `[[\x. e]]` for an abstraction-free `e`.
fn abstract_var(x: &str, e: Term) -> Term {
    crate::kernel::with_stack(|| {
        if matches!(&e, Term::Var(v) if v == x) {
            return constant("I");
        }
        if let Term::App(p, q) = &e {
            if matches!(q.as_ref(), Term::Var(v) if v == x) && !occurs_free(x, p) {
                return p.as_ref().clone();
            }
        }
        if !occurs_free(x, &e) {
            return Term::app(constant("K"), e);
        }
        let Term::App(p, q) = e else {
            unreachable!(
                "abstraction-free term mentioning the binder is a variable or an application"
            )
        };
        match (occurs_free(x, &p), occurs_free(x, &q)) {
            (true, false) => Term::apps(constant("C"), [abstract_var(x, *p), *q]),
            (false, true) => Term::apps(constant("B"), [*p, abstract_var(x, *q)]),
            _ => Term::apps(constant("S"), [abstract_var(x, *p), abstract_var(x, *q)]),
        }
    })
}

/// Abstraction-free intermediate form of the extended algorithm.
#[derive(Debug, Clone, PartialEq, Eq)]
enum Ext {
    Var(String),
    Const(String),
    App(Box<Ext>, Box<Ext>),
    /// `P x1 ... xn`, or `x1 ... xn` without a head.
    Spread(Option<Box<Ext>>, String),
}

impl Ext {
    fn app(p: Ext, q: Ext) -> Ext {
        Ext::App(Box::new(p), Box::new(q))
    }

    fn apps(head: Ext, args: impl IntoIterator<Item = Ext>) -> Ext {
        args.into_iter().fold(head, Ext::app)
    }

    fn from_term(t: &Term) -> Ext {
        match t {
            Term::Var(x) => Ext::Var(x.clone()),
            Term::Const(c) => Ext::Const(c.clone()),
            Term::App(p, q) => Ext::app(Ext::from_term(p), Ext::from_term(q)),
            Term::Lam(..) => Ext::from_term(&turner(t)),
        }
    }

    fn has_var(&self, x: &str) -> bool {
        match self {
            Ext::Var(v) => v == x,
            Ext::Const(_) => false,
            Ext::App(p, q) => p.has_var(x) || q.has_var(x),
            Ext::Spread(p, _) => p.as_ref().is_some_and(|p| p.has_var(x)),
        }
    }

    fn has_seq(&self, s: &str) -> bool {
        match self {
            Ext::Var(_) | Ext::Const(_) => false,
            Ext::App(p, q) => p.has_seq(s) || q.has_seq(s),
            Ext::Spread(p, t) => t == s || p.as_ref().is_some_and(|p| p.has_seq(s)),
        }
    }

    fn into_term(self) -> Result<Term, BracketError> {
        match self {
            Ext::Var(x) => Ok(Term::Var(x)),
            Ext::Const(c) => Ok(Term::Const(c)),
            Ext::App(p, q) => Ok(Term::app(p.into_term()?, q.into_term()?)),
            Ext::Spread(_, s) => Err(BracketError::UnboundSequence(s)),
        }
    }
}

struct Extender {
    index: String,
}

impl Extender {
    fn var_comb(&self, name: &str) -> Ext {
        Ext::app(Ext::Const(name.into()), Ext::Var(self.index.clone()))
    }

    fn translate(&self, m: &MetaTerm) -> Result<Ext, BracketError> {
        crate::kernel::with_stack(|| match m {
            MetaTerm::Var(x) => Ok(Ext::Var(x.clone())),
            MetaTerm::Const(c) => Ok(Ext::Const(c.clone())),
            MetaTerm::Numeral(k) => Ok(Ext::from_term(&church(*k))),
            MetaTerm::Lam(binders, body) => {
                let mut e = self.translate(body)?;
                for b in binders.iter().rev() {
                    e = match b {
                        Binder::Single(x) => self.abs_single(x, e)?,
                        Binder::Seq(x, _) => self.abs_seq(x, e)?,
                    };
                }
                Ok(e)
            }
            MetaTerm::App(head, args) => {
                let mut acc = match head.as_ref() {
                    MetaArg::Plain(t) => self.translate(t)?,
                    MetaArg::Splice(s) => Ext::Spread(None, s.clone()),
                };
                for a in args {
                    acc = match a {
                        MetaArg::Plain(t) => Ext::app(acc, self.translate(t)?),
                        MetaArg::Splice(s) => Ext::Spread(Some(Box::new(acc)), s.clone()),
                    };
                }
                Ok(acc)
            }
        })
    }

    /// Turner's rules for a single binder, over the intermediate form.
    fn abs_single(&self, x: &str, e: Ext) -> Result<Ext, BracketError> {
        crate::kernel::with_stack(|| {
            if matches!(&e, Ext::Var(v) if v == x) {
                return Ok(Ext::Const("I".into()));
            }
            if let Ext::App(p, q) = &e {
                if matches!(q.as_ref(), Ext::Var(v) if v == x) && !p.has_var(x) {
                    return Ok(p.as_ref().clone());
                }
            }
            if !e.has_var(x) {
                return Ok(Ext::app(Ext::Const("K".into()), e));
            }
            match e {
                Ext::App(p, q) => Ok(match (p.has_var(x), q.has_var(x)) {
                    (true, false) => {
                        Ext::apps(Ext::Const("C".into()), [self.abs_single(x, *p)?, *q])
                    }
                    (false, true) => {
                        Ext::apps(Ext::Const("B".into()), [*p, self.abs_single(x, *q)?])
                    }
                    _ => Ext::apps(
                        Ext::Const("S".into()),
                        [self.abs_single(x, *p)?, self.abs_single(x, *q)?],
                    ),
                }),
                Ext::Spread(_, s) => Err(BracketError::SpliceUnderBinder {
                    binder: x.to_string(),
                    seq: s,
                }),
                Ext::Var(_) | Ext::Const(_) => unreachable!("handled above"),
            }
        })
    }

    /// The arity-generic rules for a sequence binder.
    fn abs_seq(&self, s: &str, e: Ext) -> Result<Ext, BracketError> {
        crate::kernel::with_stack(|| {
            if matches!(&e, Ext::Spread(None, t) if t == s) {
                return Ok(self.var_comb("VarI"));
            }
            if !e.has_seq(s) {
                return Ok(Ext::app(self.var_comb("VarK"), e));
            }
            match e {
                // \x[1..n]. P x[1..n]  with the sequence absent from P
                Ext::Spread(Some(p), t) if t == s && !p.has_seq(s) => Ok(*p),
                Ext::Spread(..) => Err(BracketError::MixedSequenceUse(s.to_string())),
                Ext::App(p, q) => Ok(match (p.has_seq(s), q.has_seq(s)) {
                    (true, false) => Ext::apps(self.var_comb("VarC"), [self.abs_seq(s, *p)?, *q]),
                    (false, true) => Ext::apps(self.var_comb("VarB"), [*p, self.abs_seq(s, *q)?]),
                    _ => Ext::apps(
                        self.var_comb("VarS"),
                        [self.abs_seq(s, *p)?, self.abs_seq(s, *q)?],
                    ),
                }),
                Ext::Var(_) | Ext::Const(_) => unreachable!("has_seq is false for leaves"),
            }
        })
    }
}

/// The extended algorithm. The result mentions the meta-term's index
/// variable (`n` when it has none) free; see [`extended_closed`].
pub fn extended(m: &MetaTerm) -> Result<Term, BracketError> {
    let index = m.index_var()?.unwrap_or_else(|| "n".to_string());
    let singles: Vec<String> = {
        let mut v = m.free_vars().into_iter().collect::<Vec<_>>();
        v.extend(m.names());
        v
    };
    if singles.contains(&index) {
        return Err(BracketError::IndexCaptured(index));
    }
    let ex = Extender { index };
    ex.translate(m)?.into_term()
}

/// `\n. extended(m)`: an arity-generic term to be applied to a numeral.
pub fn extended_closed(m: &MetaTerm) -> Result<Term, BracketError> {
    let index = m.index_var()?.unwrap_or_else(|| "n".to_string());
    Ok(Term::lam(index, extended(m)?))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SizeRow {
    pub name: String,
    /// Size of the term, constants counted as one leaf.
    pub original: u64,
    /// Size of its Turner encoding, basis constants counted as one leaf.
    pub encoded: u64,
}

impl SizeRow {
    pub fn holds(&self) -> bool {
        self.encoded <= self.original
    }
}

pub fn size_row(name: &str, t: &Term) -> SizeRow {
    SizeRow {
        name: name.to_string(),
        original: leaf_size(t),
        encoded: leaf_size(&turner(t)),
    }
}

/// Compares term and encoding sizes for every closed definition in `env`
/// plus the self-application term.
pub fn size_report(env: &Env) -> Vec<SizeRow> {
    let mut rows = vec![size_row(
        r"\x.x x",
        &Term::lam("x", Term::app(Term::var("x"), Term::var("x"))),
    )];
    for name in env.names() {
        let t = env.get(name).expect("listed name");
        if free_vars(t).is_empty() {
            rows.push(size_row(name, t));
        }
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{beta_eta_equal, ReductionConfig, Verdict};
    use crate::kernel::{alpha_eq, parse, print};
    use crate::metagen::{builtin_meta, builtin_metas, expand, parse_meta, Family};

    fn env() -> Env {
        Env::prelude()
    }

    fn turner_src(src: &str) -> String {
        print(&turner(&parse(src, &env()).unwrap()), false)
    }

    #[test]
    fn goldens() {
        assert_eq!(turner_src(r"\a b c. b (a b c)"), "S B");
        assert_eq!(turner_src(r"\x. x x"), "S I I");
        assert_eq!(turner_src(r"\x. y"), "K y");
        assert_eq!(turner_src(r"\x. x"), "I");
        assert_eq!(turner_src(r"\x y. y x"), "C I");
        assert_eq!(turner_src(r"\f. f"), "I");
        let succ = env().get("Succ").unwrap().clone();
        assert_eq!(print(&turner(&succ), false), "S B");
    }

    #[test]
    fn constants_are_opaque() {
        assert_eq!(turner_src(r"\x. Succ x"), "Succ");
        assert_eq!(turner_src(r"\x. K"), "K K");
        assert_eq!(turner_src("Plus"), "Plus");
    }

    #[test]
    fn turner_output_has_no_abstractions() {
        for name in env().names() {
            let t = env().get(name).unwrap().clone();
            assert!(!turner(&t).contains_lam(), "{name}");
        }
    }

    #[test]
    fn extended_goldens() {
        let ext = |src: &str| print(&extended(&parse_meta(src).unwrap()).unwrap(), false);
        assert_eq!(
            ext(r"\x[1..n]. x[1..n] (x[1..n])"),
            "VarS n (VarI n) (VarI n)"
        );
        assert_eq!(ext(r"\x[1..n]. x[1..n]"), "VarI n");
        assert_eq!(ext(r"\x[1..n]. y"), "VarK n y");
        assert_eq!(ext(r"\p x[1..n]. p"), "VarK n");
        assert_eq!(ext(r"\p q x[1..n]. p x[1..n] (q x[1..n])"), "VarS n");
        assert_eq!(ext(r"\p q x[1..n]. p (q x[1..n])"), "VarB n");
        assert_eq!(ext(r"\p q x[1..n]. p x[1..n] q"), "VarC n");
        assert_eq!(ext(r"\x. x x"), "S I I");
        let d = extended_closed(&builtin_meta(Family::D).unwrap()).unwrap();
        assert!(alpha_eq(
            &d,
            &parse(r"\n. VarS n (VarI n) (VarI n)", &env()).unwrap()
        ));
    }

    #[test]
    fn extended_errors() {
        let tup = builtin_meta(Family::Tup).unwrap();
        assert!(matches!(
            extended(&tup),
            Err(BracketError::SpliceUnderBinder { .. })
        ));
        let mixed = parse_meta(r"\x[1..n]. x[1..n] x[1..n]").unwrap();
        assert_eq!(
            extended(&mixed),
            Err(BracketError::MixedSequenceUse("x".into()))
        );
        let captured = parse_meta(r"\x[1..n]. n").unwrap();
        assert_eq!(
            extended(&captured),
            Err(BracketError::IndexCaptured("n".into()))
        );
        let unbound = MetaTerm::App(Box::new(MetaArg::Splice("y".into())), vec![]);
        assert_eq!(
            extended(&unbound),
            Err(BracketError::UnboundSequence("y".into()))
        );
    }

    #[test]
    fn extended_is_sound_on_builtin_metas() {
        let env = env();
        let cfg = ReductionConfig::default();
        let mut checked = 0;
        for (f, m) in builtin_metas() {
            let Ok(generic) = extended_closed(&m) else {
                assert_eq!(f, Family::Tup);
                continue;
            };
            for n in 0..=3usize {
                let lhs = Term::app(generic.clone(), church(n as u64));
                let rhs = expand(&m, n).unwrap();
                assert_eq!(
                    beta_eta_equal(&lhs, &rhs, &env, &cfg).unwrap(),
                    Verdict::Equal,
                    "{f} {n}"
                );
                checked += 1;
            }
        }
        assert_eq!(checked, 24);
    }

    #[test]
    fn sizes() {
        let env = env();
        let rows = size_report(&env);
        let succ = rows.iter().find(|r| r.name == "Succ").unwrap();
        assert_eq!((succ.encoded, succ.original), (3, 10));
        assert!(succ.holds());
        let d = &rows[0];
        assert_eq!((d.encoded, d.original), (5, 4));
        assert!(!d.holds());
    }
}
