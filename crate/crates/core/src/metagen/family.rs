//! Syntactic builders for every indexed family. These construct the n-ary
//! member directly and serve as the oracle for the arity-generic library.

use std::fmt;
use std::str::FromStr;

use super::{parse_meta, spine, MetaError, MetaTerm};
use crate::kernel::Term;
use crate::prelude::church;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    I,
    K,
    S,
    B,
    C,
    D,
    Sel,
    Proj,
    Tup,
    RightApp,
    Extend,
    Iota,
    Rev,
    Map,
    Phi,
    Psi,
    M,
    MakeX,
}

impl Family {
    pub const ALL: [Family; 18] = [
        Family::I,
        Family::K,
        Family::S,
        Family::B,
        Family::C,
        Family::D,
        Family::Sel,
        Family::Proj,
        Family::Tup,
        Family::RightApp,
        Family::Extend,
        Family::Iota,
        Family::Rev,
        Family::Map,
        Family::Phi,
        Family::Psi,
        Family::M,
        Family::MakeX,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::I => "I",
            Family::K => "K",
            Family::S => "S",
            Family::B => "B",
            Family::C => "C",
            Family::D => "D",
            Family::Sel => "Sel",
            Family::Proj => "Proj",
            Family::Tup => "Tup",
            Family::RightApp => "RightApp",
            Family::Extend => "Extend",
            Family::Iota => "Iota",
            Family::Rev => "Rev",
            Family::Map => "Map",
            Family::Phi => "Phi",
            Family::Psi => "Psi",
            Family::M => "M",
            Family::MakeX => "MakeX",
        }
    }

    /// Doubly-indexed families take `k` with `1 <= k <= n`.
    pub fn takes_k(self) -> bool {
        matches!(
            self,
            Family::Sel | Family::Proj | Family::Phi | Family::Psi | Family::M
        )
    }

    /// Families without a normal form.
    pub fn diverges(self) -> bool {
        matches!(self, Family::Phi | Family::Psi)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = MetaError;

    fn from_str(s: &str) -> Result<Family, MetaError> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| MetaError::UnknownFamily(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FamilyInstance {
    pub family: Family,
    pub n: usize,
    pub k: Option<usize>,
}

impl FamilyInstance {
    pub fn new(family: Family, n: usize) -> FamilyInstance {
        FamilyInstance { family, n, k: None }
    }

    pub fn indexed(family: Family, k: usize, n: usize) -> FamilyInstance {
        FamilyInstance {
            family,
            n,
            k: Some(k),
        }
    }
}

impl fmt::Display for FamilyInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.k {
            Some(k) => write!(f, "{}[k={k},n={}]", self.family, self.n),
            None => write!(f, "{}[n={}]", self.family, self.n),
        }
    }
}

fn names(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

fn vars(names: &[String]) -> Vec<Term> {
    names.iter().map(|x| Term::var(x.as_str())).collect()
}

fn app_all(head: Term, args: &[Term]) -> Term {
    Term::apps(head, args.iter().cloned())
}

/// The meta-terms of the singly-indexed families that the ellipsis
/// language can express.
pub fn builtin_metas() -> Vec<(Family, MetaTerm)> {
    [
        (Family::I, r"\x[1..n]. x[1..n]"),
        (Family::K, r"\p x[1..n]. p"),
        (Family::S, r"\p q x[1..n]. p x[1..n] (q x[1..n])"),
        (Family::B, r"\p q x[1..n]. p (q x[1..n])"),
        (Family::C, r"\p q x[1..n]. p x[1..n] q"),
        (Family::D, r"\x[1..n]. x[1..n] (x[1..n])"),
        (Family::Tup, r"\x[1..n] s. s x[1..n]"),
    ]
    .into_iter()
    .map(|(f, src)| (f, parse_meta(src).expect("built-in meta-terms parse")))
    .collect()
}

pub fn builtin_meta(f: Family) -> Option<MetaTerm> {
    builtin_metas()
        .into_iter()
        .find(|(g, _)| *g == f)
        .map(|(_, m)| m)
}

/// Builds the family member for the given indices.
pub fn family(inst: FamilyInstance) -> Result<Term, MetaError> {
    let FamilyInstance { family: f, n, k } = inst;
    let k = match (f.takes_k(), k) {
        (true, Some(k)) => {
            if k == 0 || k > n {
                return Err(MetaError::IndexOutOfRange {
                    family: f.name().into(),
                    k,
                    n,
                });
            }
            k
        }
        (true, None) => {
            return Err(MetaError::MissingIndex {
                family: f.name().into(),
            })
        }
        (false, Some(_)) => {
            return Err(MetaError::UnexpectedIndex {
                family: f.name().into(),
            })
        }
        (false, None) => 0,
    };
    let xs = names("x", n);
    let x = vars(&xs);
    let chain = || spine(None, x.clone());
    let p = || Term::var("p");
    let q = || Term::var("q");
    Ok(match f {
        Family::I => Term::lams(xs.clone(), chain()),
        Family::K => Term::lams(std::iter::once("p".to_string()).chain(xs.clone()), p()),
        Family::S => Term::lams(
            ["p".to_string(), "q".to_string()]
                .into_iter()
                .chain(xs.clone()),
            Term::app(app_all(p(), &x), app_all(q(), &x)),
        ),
        Family::B => Term::lams(
            ["p".to_string(), "q".to_string()]
                .into_iter()
                .chain(xs.clone()),
            Term::app(p(), app_all(q(), &x)),
        ),
        Family::C => Term::lams(
            ["p".to_string(), "q".to_string()]
                .into_iter()
                .chain(xs.clone()),
            Term::app(app_all(p(), &x), q()),
        ),
        Family::D => {
            let head = if n == 0 { None } else { Some(chain()) };
            Term::lams(xs.clone(), spine(head, [chain()]))
        }
        Family::Sel => Term::lams(xs.clone(), x[k - 1].clone()),
        Family::Proj => Term::lam(
            "v",
            Term::app(Term::var("v"), Term::lams(xs.clone(), x[k - 1].clone())),
        ),
        Family::Tup => Term::lams(
            xs.iter().cloned().chain(["s".to_string()]),
            app_all(Term::var("s"), &x),
        ),
        Family::RightApp => {
            let body = x
                .iter()
                .rev()
                .fold(Term::var("z"), |acc, xi| Term::app(xi.clone(), acc));
            Term::lams(xs.iter().cloned().chain(["z".to_string()]), body)
        }
        Family::Extend => {
            // \v a. v (\x1 ... xn y s. s x1 ... xn y) a
            let ext = Term::lams(
                xs.iter().cloned().chain(["y".to_string(), "s".to_string()]),
                Term::app(app_all(Term::var("s"), &x), Term::var("y")),
            );
            Term::lams(
                ["v", "a"],
                Term::apps(Term::var("v"), [ext, Term::var("a")]),
            )
        }
        Family::Iota => Term::lam("z", Term::apps(Term::var("z"), (0..n as u64).map(church))),
        Family::Rev => {
            let rev: Vec<Term> = x.iter().rev().cloned().collect();
            Term::lams(
                xs.iter().cloned().chain(["w".to_string()]),
                app_all(Term::var("w"), &rev),
            )
        }
        Family::Map => {
            let fx: Vec<Term> = x
                .iter()
                .map(|xi| Term::app(Term::var("f"), xi.clone()))
                .collect();
            let q = Term::lams(
                xs.iter().cloned().chain(["z".to_string()]),
                app_all(Term::var("z"), &fx),
            );
            Term::lams(["f", "v"], Term::app(Term::var("v"), q))
        }
        Family::Phi => {
            // \f1 ... fn. A_k A_1 ... A_n, A_j = \x1..xn. f_j (x1 x1..xn) ... (xn x1..xn)
            let fs = names("f", n);
            let row = |j: usize| {
                let args: Vec<Term> = x.iter().map(|xi| app_all(xi.clone(), &x)).collect();
                Term::lams(xs.clone(), app_all(Term::var(fs[j - 1].as_str()), &args))
            };
            let rows: Vec<Term> = (1..=n).map(row).collect();
            Term::lams(fs.clone(), app_all(row(k), &rows))
        }
        Family::Psi => {
            // B_k B_1 ... B_n, B_j = \x1..xn f1..fn. f_j (x1 x f) ... (xn x f)
            let fs = names("f", n);
            let f = vars(&fs);
            let xf: Vec<Term> = x.iter().chain(&f).cloned().collect();
            let row = |j: usize| {
                let args: Vec<Term> = x.iter().map(|xi| app_all(xi.clone(), &xf)).collect();
                Term::lams(
                    xs.iter().chain(&fs).cloned(),
                    app_all(f[j - 1].clone(), &args),
                )
            };
            let rows: Vec<Term> = (1..=n).map(row).collect();
            app_all(row(k), &rows)
        }
        Family::M => {
            // \phi1 ... phin x1 ... xn. x_k (phi1 x1..xn) ... (phin x1..xn)
            let phis = names("phi", n);
            let args: Vec<Term> = vars(&phis).into_iter().map(|ph| app_all(ph, &x)).collect();
            Term::lams(
                phis.iter().chain(&xs).cloned(),
                app_all(x[k - 1].clone(), &args),
            )
        }
        Family::MakeX => {
            // \x1 ... xn z. z (\m b a. Zero b (\x. x m (Succ a)) (VarSel b c_n x1 ... xn)) c_0
            let pair = Term::lam(
                "x",
                Term::apps(
                    Term::var("x"),
                    [
                        Term::var("m"),
                        Term::app(Term::constant("Succ"), Term::var("a")),
                    ],
                ),
            );
            let dispatch = app_all(
                Term::apps(Term::constant("VarSel"), [Term::var("b"), church(n as u64)]),
                &x,
            );
            let m = Term::lams(
                ["m", "b", "a"],
                Term::apps(Term::constant("Zero"), [Term::var("b"), pair, dispatch]),
            );
            Term::lams(
                xs.iter().cloned().chain(["z".to_string()]),
                Term::apps(Term::var("z"), [m, church(0)]),
            )
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{normalize, ReductionConfig, Status};
    use crate::kernel::{alpha_eq, free_vars, parse, print, Env};
    use crate::metagen::expand;
    use crate::prelude::{projection, selector};

    fn p(src: &str) -> Term {
        parse(src, &Env::prelude()).unwrap()
    }

    fn build(f: Family, n: usize) -> Term {
        family(FamilyInstance::new(f, n)).unwrap()
    }

    fn build_k(f: Family, k: usize, n: usize) -> Term {
        family(FamilyInstance::indexed(f, k, n)).unwrap()
    }

    #[test]
    fn examples() {
        assert!(alpha_eq(&build(Family::S, 1), &p(r"\x y z. x z (y z)")));
        assert!(alpha_eq(
            &build_k(Family::Phi, 1, 1),
            &p(r"\f.(\x.f (x x)) (\x.f (x x))")
        ));
        assert_eq!(print(&build_k(Family::Sel, 2, 3), false), r"\x1 x2 x3.x2");
        assert!(alpha_eq(
            &build_k(Family::Psi, 1, 1),
            &p(r"(\x f. f (x x f)) (\x f. f (x x f))")
        ));
        assert!(alpha_eq(
            &build_k(Family::M, 1, 1),
            &p(r"\phi x. x (phi x)")
        ));
        assert_eq!(
            print(&build(Family::RightApp, 2), false),
            r"\x1 x2 z.x1 (x2 z)"
        );
        assert_eq!(
            print(&build(Family::Rev, 3), false),
            r"\x1 x2 x3 w.w x3 x2 x1"
        );
        assert_eq!(print(&build(Family::Iota, 2), true), r"\z.z #0 #1");
    }

    #[test]
    fn index_validation() {
        assert_eq!(
            family(FamilyInstance::indexed(Family::Sel, 0, 2)),
            Err(MetaError::IndexOutOfRange {
                family: "Sel".into(),
                k: 0,
                n: 2
            })
        );
        assert!(matches!(
            family(FamilyInstance::new(Family::Phi, 2)),
            Err(MetaError::MissingIndex { .. })
        ));
        assert!(matches!(
            family(FamilyInstance::indexed(Family::K, 1, 2)),
            Err(MetaError::UnexpectedIndex { .. })
        ));
        assert!(matches!(
            "Nope".parse::<Family>(),
            Err(MetaError::UnknownFamily(_))
        ));
        for f in Family::ALL {
            assert_eq!(f.name().parse::<Family>().unwrap(), f);
        }
    }

    #[test]
    fn cross_oracle_agreement() {
        for n in 1..=4 {
            for k in 1..=n {
                assert!(alpha_eq(
                    &build_k(Family::Sel, k, n),
                    &selector(k, n).unwrap()
                ));
                assert!(alpha_eq(
                    &build_k(Family::Proj, k, n),
                    &projection(k, n).unwrap()
                ));
            }
        }
        for (f, m) in builtin_metas() {
            for n in 0..=4 {
                assert!(alpha_eq(&expand(&m, n).unwrap(), &build(f, n)), "{f} {n}");
            }
        }
    }

    #[test]
    fn families_are_closed_definitions() {
        let env = Env::prelude();
        let cfg = ReductionConfig::with_fuel(10_000);
        for f in Family::ALL {
            for n in 0..=4usize {
                let insts: Vec<FamilyInstance> = if f.takes_k() {
                    (1..=n).map(|k| FamilyInstance::indexed(f, k, n)).collect()
                } else {
                    vec![FamilyInstance::new(f, n)]
                };
                for inst in insts {
                    let t = family(inst).unwrap();
                    assert!(free_vars(&t).is_empty(), "{inst}");
                    if !f.diverges() {
                        let out = normalize(&t, &env, &cfg).unwrap();
                        assert_eq!(out.status, Status::NormalForm, "{inst}");
                    }
                }
            }
        }
    }

    #[test]
    fn constant_generators_have_constant_fixed_points() {
        let env = Env::prelude();
        let cfg = ReductionConfig::default();
        for n in 1..=2usize {
            let gens: Vec<Term> = (1..=n)
                .map(|j| Term::lams(names("y", n), church(j as u64)))
                .collect();
            for k in 1..=n {
                for f in [Family::Phi, Family::Psi] {
                    let t = app_all(build_k(f, k, n), &gens);
                    let v = crate::prelude::unchurch(&t, &env, &cfg).unwrap();
                    assert_eq!(v, k as u64, "{f} k={k} n={n}");
                }
            }
        }
    }
}
