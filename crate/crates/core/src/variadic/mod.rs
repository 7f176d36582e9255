//! The arity-generic library shipped in `variadic.lam`, each entry paired
//! with an oracle, and the harnesses that check them.

mod probes;

use indexmap::IndexMap;
use rayon::prelude::*;
use thiserror::Error;

use crate::engine::{compare, EngineError, ReductionConfig, Verdict};
use crate::kernel::{Env, Term};
use crate::metagen::{family, Family, FamilyInstance, MetaError};
use crate::prelude::{church, tuple, PreludeError};

pub use probes::{check_boehm, check_makex, even_odd_probes, probe_fixedpoints, BoehmCaps};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VariadicError {
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Meta(#[from] MetaError),
    #[error(transparent)]
    Prelude(#[from] PreludeError),
    #[error("no library entry named `{0}`")]
    UnknownEntry(String),
    #[error("check_makex needs at least two terms, got {0}")]
    TooFewTerms(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckMode {
    /// Applied to numerals the entry normalizes; compared by normal form.
    Normalizing,
    /// No normal form; checked through probes.
    Observational,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Oracle {
    /// The syntactic family builder.
    Family(Family),
    /// A defining law over symbolic arguments.
    Law(&'static str),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariadicEntry {
    pub name: &'static str,
    /// The entry as a constant of the prelude environment.
    pub term: Term,
    pub oracle: Oracle,
    pub mode: CheckMode,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
    /// A search hit its cap before deciding.
    Inconclusive,
    /// Informational; never affects the verdict.
    Note,
}

impl Outcome {
    pub fn label(self) -> &'static str {
        match self {
            Outcome::Pass => "PASS",
            Outcome::Fail => "FAIL",
            Outcome::Inconclusive => "INCONCLUSIVE",
            Outcome::Note => "NOTE",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Case {
    pub label: String,
    pub outcome: Outcome,
    /// Beta steps spent, both sides together.
    pub steps: u64,
    pub detail: String,
}

impl Case {
    pub fn note(label: impl Into<String>, detail: impl Into<String>) -> Case {
        Case {
            label: label.into(),
            outcome: Outcome::Note,
            steps: 0,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub name: String,
    pub cases: Vec<Case>,
}

impl Report {
    pub fn count(&self, outcome: Outcome) -> usize {
        self.cases.iter().filter(|c| c.outcome == outcome).count()
    }

    /// Every checked case passed; notes are ignored.
    pub fn passed(&self) -> bool {
        self.cases
            .iter()
            .all(|c| matches!(c.outcome, Outcome::Pass | Outcome::Note))
    }

    pub fn checked(&self) -> usize {
        self.cases.len() - self.count(Outcome::Note)
    }
}

const ENTRIES: &[(&str, Oracle, CheckMode)] = {
    use CheckMode::*;
    use Oracle::Family as F;
    &[
        ("VarI", F(Family::I), Normalizing),
        ("VarK", F(Family::K), Normalizing),
        ("VarS", F(Family::S), Normalizing),
        ("VarB", F(Family::B), Normalizing),
        ("VarC", F(Family::C), Normalizing),
        ("VarBalt", F(Family::B), Normalizing),
        ("VarCalt", F(Family::C), Normalizing),
        ("VarD", F(Family::D), Normalizing),
        ("VarSel", F(Family::Sel), Normalizing),
        ("VarProj", F(Family::Proj), Normalizing),
        ("VarTup", F(Family::Tup), Normalizing),
        (
            "Apply",
            Oracle::Law("Apply f <a1..an> = f a1 .. an"),
            Normalizing,
        ),
        ("VarRightApp", F(Family::RightApp), Normalizing),
        ("VarExtend", F(Family::Extend), Normalizing),
        (
            "Catenate",
            Oracle::Law("Catenate n <e1..en> k <f1..fk> = <e1..en, f1..fk>"),
            Normalizing,
        ),
        ("Iota", F(Family::Iota), Normalizing),
        ("VarRev", F(Family::Rev), Normalizing),
        ("VarMap", F(Family::Map), Normalizing),
        ("VarM", F(Family::M), Normalizing),
        ("VarMakeX", F(Family::MakeX), Normalizing),
        ("VarPhi", F(Family::Phi), Observational),
        ("VarPsi", F(Family::Psi), Observational),
        (
            "Ystar",
            Oracle::Law("Ystar n <f1..fn> = <Phi_1 f1..fn, .., Phi_n f1..fn>"),
            Observational,
        ),
        (
            "YstarCurried",
            Oracle::Law("YstarCurried n f1..fn = <Phi_1 f1..fn, .., Phi_n f1..fn>"),
            Observational,
        ),
    ]
};

/// Every library entry, in definition order.
pub fn library() -> IndexMap<&'static str, VariadicEntry> {
    ENTRIES
        .iter()
        .map(|&(name, oracle, mode)| {
            (
                name,
                VariadicEntry {
                    name,
                    term: Term::constant(name),
                    oracle,
                    mode,
                },
            )
        })
        .collect()
}

pub(crate) fn c(n: usize) -> Term {
    church(n as u64)
}

pub(crate) fn names(prefix: &str, n: usize) -> Vec<Term> {
    (1..=n).map(|i| Term::var(format!("{prefix}{i}"))).collect()
}

/// An equality obligation `lhs = rhs` with a label.
pub(crate) struct Obligation {
    pub label: String,
    pub lhs: Term,
    pub rhs: Term,
}

impl Obligation {
    pub fn new(label: impl Into<String>, lhs: Term, rhs: Term) -> Obligation {
        Obligation {
            label: label.into(),
            lhs,
            rhs,
        }
    }

    pub fn check(&self, env: &Env, cfg: &ReductionConfig) -> Result<Case, VariadicError> {
        let cmp = compare(&self.lhs, &self.rhs, env, cfg)?;
        let (outcome, detail) = match cmp.verdict {
            Verdict::Equal => (Outcome::Pass, String::new()),
            Verdict::NotEqual => (Outcome::Fail, "normal forms differ".to_string()),
            Verdict::Unknown => (
                Outcome::Fail,
                format!("no normal form within {} steps", cfg.fuel),
            ),
        };
        Ok(Case {
            label: self.label.clone(),
            outcome,
            steps: cmp.steps.0 + cmp.steps.1,
            detail,
        })
    }
}

pub(crate) fn run_obligations(
    obligations: Vec<Obligation>,
    env: &Env,
    cfg: &ReductionConfig,
) -> Result<Vec<Case>, VariadicError> {
    obligations.par_iter().map(|o| o.check(env, cfg)).collect()
}

fn boundary_identities(name: &str) -> Vec<Obligation> {
    let pairs: &[(&str, usize, &str)] = match name {
        "VarI" => &[("I_0 = I", 0, "I"), ("I_1 = I", 1, "I")],
        "VarK" => &[("K_0 = I", 0, "I"), ("K_1 = K", 1, "K")],
        "VarS" => &[("S_0 = I", 0, "I"), ("S_1 = S", 1, "S")],
        "VarB" | "VarBalt" => &[("B_0 = I", 0, "I"), ("B_1 = B", 1, "B")],
        "VarC" | "VarCalt" => &[("C_0 = I", 0, "I"), ("C_1 = C", 1, "C")],
        "VarD" => &[("D_1 = \\x.x x", 1, "D")],
        _ => &[],
    };
    pairs
        .iter()
        .map(|&(label, n, rhs)| {
            let rhs = if rhs == "D" {
                Term::lam("x", Term::app(Term::var("x"), Term::var("x")))
            } else {
                Term::constant(rhs)
            };
            Obligation::new(label, Term::app(Term::constant(name), c(n)), rhs)
        })
        .collect()
}

/// The equality obligations of a normalizing entry for indices up to `max_n`.
fn obligations(entry: &VariadicEntry, max_n: usize) -> Result<Vec<Obligation>, VariadicError> {
    let name = entry.name;
    let mut out = boundary_identities(name);
    match entry.oracle {
        Oracle::Family(f) if f.takes_k() => {
            for n in 1..=max_n {
                for k in 1..=n {
                    out.push(Obligation::new(
                        format!("k={k} n={n}"),
                        Term::apps(entry.term.clone(), [c(k), c(n)]),
                        family(FamilyInstance::indexed(f, k, n))?,
                    ));
                }
            }
        }
        Oracle::Family(f) => {
            for n in 0..=max_n {
                out.push(Obligation::new(
                    format!("n={n}"),
                    Term::app(entry.term.clone(), c(n)),
                    family(FamilyInstance::new(f, n))?,
                ));
            }
        }
        Oracle::Law(_) if name == "Apply" => {
            for n in 0..=max_n {
                let args = names("a", n);
                out.push(Obligation::new(
                    format!("n={n}"),
                    Term::apps(entry.term.clone(), [Term::var("f"), tuple(&args)]),
                    Term::apps(Term::var("f"), args),
                ));
            }
        }
        Oracle::Law(_) if name == "Catenate" => {
            for n in 0..=max_n {
                for k in 0..=max_n {
                    let es = names("e", n);
                    let fs = names("f", k);
                    let both: Vec<Term> = es.iter().chain(&fs).cloned().collect();
                    out.push(Obligation::new(
                        format!("n={n} k={k}"),
                        Term::apps(entry.term.clone(), [c(n), tuple(&es), c(k), tuple(&fs)]),
                        tuple(&both),
                    ));
                }
            }
        }
        Oracle::Law(_) => {}
    }
    match name {
        "VarBalt" | "VarCalt" => {
            let main = if name == "VarBalt" { "VarB" } else { "VarC" };
            for n in 0..=max_n {
                out.push(Obligation::new(
                    format!("agrees with {main}, n={n}"),
                    Term::app(entry.term.clone(), c(n)),
                    Term::app(Term::constant(main), c(n)),
                ));
            }
        }
        "VarM" => out.push(Obligation::new(
            "M_1^1 = S I",
            Term::apps(entry.term.clone(), [c(1), c(1)]),
            Term::app(Term::constant("S"), Term::constant("I")),
        )),
        _ => {}
    }
    Ok(out)
}

/// Checks one entry for all indices up to `max_n`: normalizing entries
/// against their oracle, observational entries through fixed-point probes.
pub fn check_entry(
    name: &str,
    max_n: usize,
    env: &Env,
    cfg: &ReductionConfig,
) -> Result<Report, VariadicError> {
    let lib = library();
    let entry = lib
        .get(name)
        .ok_or_else(|| VariadicError::UnknownEntry(name.to_string()))?;
    let cases = match entry.mode {
        CheckMode::Normalizing => run_obligations(obligations(entry, max_n)?, env, cfg)?,
        CheckMode::Observational => probes::observational_cases(entry, max_n, env, cfg)?,
    };
    Ok(Report {
        name: name.to_string(),
        cases,
    })
}

/// Checks every normalizing entry.
pub fn check_normalizing(
    max_n: usize,
    env: &Env,
    cfg: &ReductionConfig,
) -> Result<Vec<Report>, VariadicError> {
    library()
        .values()
        .filter(|e| e.mode == CheckMode::Normalizing)
        .collect::<Vec<_>>()
        .par_iter()
        .map(|e| check_entry(e.name, max_n, env, cfg))
        .collect()
}
