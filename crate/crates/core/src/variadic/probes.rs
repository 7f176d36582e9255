//! Observational checks for the fixed-point combinators, the Böhm relation
//! between the Curry- and Turing-style families, and the one-point basis.

use rayon::prelude::*;

use super::{c, run_obligations, Case, Obligation, Outcome, Report, VariadicEntry, VariadicError};
use crate::engine::{normalize, reduces_to, ReductionConfig, Status};
use crate::kernel::{Env, Term};
use crate::metagen::{family, Family, FamilyInstance};
use crate::prelude::tuple;

/// `F_j = \y1 ... yn. c_j`: generators whose fixed points are constants.
fn constant_generators(n: usize) -> Vec<Term> {
    let ys: Vec<String> = (1..=n).map(|i| format!("y{i}")).collect();
    (1..=n).map(|j| Term::lams(ys.clone(), c(j))).collect()
}

fn project(j: usize, n: usize, t: Term) -> Term {
    Term::apps(Term::constant("VarProj"), [c(j), c(n), t])
}

/// The k-th fixed point of the constant generators, as produced by `name`.
fn constant_probe(name: &str, k: usize, n: usize) -> Term {
    let gens = constant_generators(n);
    let entry = Term::constant(name);
    match name {
        "VarPhi" | "VarPsi" => Term::apps(entry, [c(k), c(n)].into_iter().chain(gens)),
        "Ystar" => project(k, n, Term::apps(entry, [c(n), tuple(&gens)])),
        "YstarCurried" => project(k, n, Term::apps(entry, [c(n)].into_iter().chain(gens))),
        _ => unreachable!("not a fixed-point entry: {name}"),
    }
}

/// The even (k = 1) or odd (k = 2) predicate built by `name` from the
/// generators `EvenGen` and `OddGen`.
fn parity_function(name: &str, k: usize) -> Term {
    let gens = [Term::constant("EvenGen"), Term::constant("OddGen")];
    let entry = Term::constant(name);
    match name {
        "VarPhi" | "VarPsi" => Term::apps(entry, [c(k), c(2)].into_iter().chain(gens)),
        "Ystar" => project(k, 2, Term::apps(entry, [c(2), tuple(&gens)])),
        "YstarCurried" => project(k, 2, Term::apps(entry, [c(2)].into_iter().chain(gens))),
        _ => unreachable!("not a fixed-point entry: {name}"),
    }
}

/// Even/odd on the numerals 0..=6 through the fixed points built by `name`.
pub fn even_odd_probes(
    name: &str,
    env: &Env,
    cfg: &ReductionConfig,
) -> Result<Vec<Case>, VariadicError> {
    let mut obligations = Vec::new();
    for (k, pred) in [(1, "even"), (2, "odd")] {
        let f = parity_function(name, k);
        for m in 0..=6usize {
            let holds = (m % 2 == 0) == (k == 1);
            let expected = if holds { "True" } else { "False" };
            obligations.push(Obligation::new(
                format!("{pred}({m}) = {expected}"),
                Term::app(f.clone(), c(m)),
                Term::constant(expected),
            ));
        }
    }
    run_obligations(obligations, env, cfg)
}

const UPGRADE_FUEL: u64 = 10_000;

pub(super) fn observational_cases(
    entry: &VariadicEntry,
    max_n: usize,
    env: &Env,
    cfg: &ReductionConfig,
) -> Result<Vec<Case>, VariadicError> {
    let name = entry.name;
    let mut obligations = Vec::new();
    for n in 1..=max_n {
        for k in 1..=n {
            obligations.push(Obligation::new(
                format!("constant generators k={k} n={n}"),
                constant_probe(name, k, n),
                c(k),
            ));
        }
    }
    let mut cases = run_obligations(obligations, env, cfg)?;
    cases.extend(even_odd_probes(name, env, cfg)?);
    if matches!(name, "VarPhi" | "VarPsi") {
        cases.push(normalization_note(name, max_n, env)?);
    }
    Ok(cases)
}

/// Whether `name c_k c_n` itself has a normal form; if one ever did, the
/// case could be compared by normal form instead of observationally.
fn normalization_note(name: &str, max_n: usize, env: &Env) -> Result<Case, VariadicError> {
    let cfg = ReductionConfig::with_fuel(UPGRADE_FUEL);
    let mut normalizing = Vec::new();
    for n in 1..=max_n {
        for k in 1..=n {
            let t = Term::apps(Term::constant(name), [c(k), c(n)]);
            if normalize(&t, env, &cfg)?.status == Status::NormalForm {
                normalizing.push(format!("k={k} n={n}"));
            }
        }
    }
    let detail = if normalizing.is_empty() {
        format!("no (k, n) with n <= {max_n} normalizes within {UPGRADE_FUEL} steps; checked observationally")
    } else {
        format!("normal form found for {}", normalizing.join(", "))
    };
    Ok(Case::note("normalization attempt", detail))
}

/// Fixed-point probes for all four observational entries.
pub fn probe_fixedpoints(
    max_n: usize,
    env: &Env,
    cfg: &ReductionConfig,
) -> Result<Vec<Report>, VariadicError> {
    ["VarPhi", "VarPsi", "Ystar", "YstarCurried"]
        .par_iter()
        .map(|name| super::check_entry(name, max_n, env, cfg))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoehmCaps {
    pub node_cap: usize,
    pub depth_cap: usize,
    /// Largest n for the reduction-graph search.
    pub search_max_n: usize,
}

impl Default for BoehmCaps {
    fn default() -> Self {
        BoehmCaps {
            node_cap: 100_000,
            depth_cap: 200,
            search_max_n: 2,
        }
    }
}

/// The Böhm relation between the two fixed-point families and its
/// arity-generic counterpart.
pub fn check_boehm(
    max_n: usize,
    caps: BoehmCaps,
    env: &Env,
    cfg: &ReductionConfig,
) -> Result<Report, VariadicError> {
    let mut obligations = vec![Obligation::new(
        "VarM #1 #1 = S I",
        Term::apps(Term::constant("VarM"), [c(1), c(1)]),
        Term::app(Term::constant("S"), Term::constant("I")),
    )];
    for n in 1..=max_n {
        for k in 1..=n {
            obligations.push(Obligation::new(
                format!("VarM k={k} n={n} = M_k^n"),
                Term::apps(Term::constant("VarM"), [c(k), c(n)]),
                family(FamilyInstance::indexed(Family::M, k, n))?,
            ));
        }
    }
    // VarPhi c_k c_n (VarM c_1 c_n) ... (VarM c_n c_n) behaves as VarPsi c_k c_n
    for n in 1..=max_n {
        let ms: Vec<Term> = (1..=n)
            .map(|j| Term::apps(Term::constant("VarM"), [c(j), c(n)]))
            .collect();
        for k in 1..=n {
            let gens = constant_generators(n);
            let lhs = Term::apps(
                Term::apps(
                    Term::constant("VarPhi"),
                    [c(k), c(n)].into_iter().chain(ms.clone()),
                ),
                gens.clone(),
            );
            obligations.push(Obligation::new(
                format!("VarPhi (VarM ..) probe k={k} n={n}"),
                lhs,
                c(k),
            ));
            obligations.push(Obligation::new(
                format!("VarPsi probe k={k} n={n}"),
                Term::apps(
                    Term::constant("VarPsi"),
                    [c(k), c(n)].into_iter().chain(gens),
                ),
                c(k),
            ));
        }
    }
    let mut cases = run_obligations(obligations, env, cfg)?;

    let searches: Vec<(usize, usize)> = (1..=max_n.min(caps.search_max_n))
        .flat_map(|n| (1..=n).map(move |k| (k, n)))
        .collect();
    let found: Vec<Case> = searches
        .par_iter()
        .map(|&(k, n)| -> Result<Case, VariadicError> {
            let ms = (1..=n)
                .map(|j| family(FamilyInstance::indexed(Family::M, j, n)))
                .collect::<Result<Vec<_>, _>>()?;
            let lhs = Term::apps(family(FamilyInstance::indexed(Family::Phi, k, n))?, ms);
            let target = family(FamilyInstance::indexed(Family::Psi, k, n))?;
            let out = reduces_to(&lhs, &target, env, caps.node_cap, caps.depth_cap)?;
            let (outcome, detail) = if out.found {
                (
                    Outcome::Pass,
                    format!(
                        "reached at depth {}, {} terms visited",
                        out.depth.unwrap_or(0),
                        out.visited
                    ),
                )
            } else if out.inconclusive {
                (
                    Outcome::Inconclusive,
                    format!("cap hit after {} terms", out.visited),
                )
            } else {
                (
                    Outcome::Fail,
                    format!("refuted after {} terms", out.visited),
                )
            };
            Ok(Case {
                label: format!("Phi_{k}^{n} M_1^{n}..M_{n}^{n} ->> Psi_{k}^{n}"),
                outcome,
                steps: 0,
                detail,
            })
        })
        .collect::<Result<_, _>>()?;
    cases.extend(found);
    Ok(Report {
        name: "Boehm".into(),
        cases,
    })
}

/// `X = VarMakeX c_n E_1 ... E_n`; checks `X (X ... X) = E_k` with `k + 1`
/// copies of `X` inside the parentheses, for k = 1..n.
pub fn check_makex(
    n: usize,
    terms: &[Term],
    env: &Env,
    cfg: &ReductionConfig,
) -> Result<Report, VariadicError> {
    if terms.len() < 2 || terms.len() != n {
        return Err(VariadicError::TooFewTerms(terms.len()));
    }
    let x = Term::apps(
        Term::constant("VarMakeX"),
        std::iter::once(c(n)).chain(terms.iter().cloned()),
    );
    let obligations = (1..=n)
        .map(|k| {
            let inner = Term::apps(x.clone(), std::iter::repeat_n(x.clone(), k));
            let label = format!(
                "X ({}) = E_{k}",
                std::iter::repeat_n("X", k + 1)
                    .collect::<Vec<_>>()
                    .join(" ")
            );
            Obligation::new(label, Term::app(x.clone(), inner), terms[k - 1].clone())
        })
        .collect();
    Ok(Report {
        name: format!("MakeX n={n}"),
        cases: run_obligations(obligations, env, cfg)?,
    })
}
