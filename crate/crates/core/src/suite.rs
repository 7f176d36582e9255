//! Named verification suites, as run by `varlam check`.

use std::str::FromStr;

use rayon::prelude::*;

use crate::bracket::{extended_closed, size_report, turner};
use crate::engine::{beta_eta_equal, ReductionConfig, Verdict};
use crate::kernel::{alpha_eq, free_vars, parse, print, size, substitute, Env, Term};
use crate::metagen::builtin_metas;
use crate::prelude::{church, unchurch};
use crate::random::normalizing_sample;
use crate::variadic::{
    check_boehm, check_makex, check_normalizing, probe_fixedpoints, BoehmCaps, Case, Outcome,
    Report, VariadicError,
};

/// Seed of the random corpus for the bracket soundness check.
pub const RANDOM_SEED: u64 = 0x5eed_1a3b;
pub const RANDOM_COUNT: usize = 200;
pub const RANDOM_DEPTH: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Kernel,
    Bracket,
    Variadic,
    Fixpoint,
    All,
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Suite, String> {
        match s {
            "kernel" => Ok(Suite::Kernel),
            "bracket" => Ok(Suite::Bracket),
            "variadic" => Ok(Suite::Variadic),
            "fixpoint" => Ok(Suite::Fixpoint),
            "all" => Ok(Suite::All),
            _ => Err(format!("unknown suite `{s}`")),
        }
    }
}

fn pass_if(label: impl Into<String>, ok: bool, detail: impl Into<String>) -> Case {
    Case {
        label: label.into(),
        outcome: if ok { Outcome::Pass } else { Outcome::Fail },
        steps: 0,
        detail: if ok { String::new() } else { detail.into() },
    }
}

fn verdict_case(label: impl Into<String>, verdict: Verdict, expected: Verdict) -> Case {
    pass_if(
        label,
        verdict == expected,
        format!("got {verdict:?}, expected {expected:?}"),
    )
}

/// Parsing, printing, alpha-equivalence, substitution, size and arithmetic.
pub fn kernel_suite(env: &Env, cfg: &ReductionConfig) -> Result<Vec<Report>, VariadicError> {
    let p = |s: &str| parse(s, env).map_err(crate::engine::EngineError::from);
    let mut syntax = Vec::new();
    for (src, printed) in [
        (r"\x.x", r"\x.x"),
        (r"\s z. s (s z)", r"\s z.s (s z)"),
        ("a b c", "a b c"),
        ("a (b c)", "a (b c)"),
    ] {
        let t = p(src)?;
        let out = print(&t, false);
        syntax.push(pass_if(
            format!("print {src}"),
            out == printed,
            format!("printed {out}"),
        ));
        syntax.push(pass_if(
            format!("parse . print {src}"),
            alpha_eq(&p(&out)?, &t),
            "round trip changed the term",
        ));
    }
    syntax.push(pass_if(
        "print #0 with sugar",
        print(&church(0), true) == "#0",
        "no sugar",
    ));
    for (a, b, expected) in [
        (r"\x.x", r"\y.y", true),
        (r"\x.\y.x", r"\y.\x.y", true),
        (r"\x.\y.x", r"\x.\y.y", false),
    ] {
        syntax.push(pass_if(
            format!("alpha {a} ~ {b}"),
            alpha_eq(&p(a)?, &p(b)?) == expected,
            "wrong answer",
        ));
    }
    for (src, fv) in [
        (r"\x. x y", vec!["y"]),
        (r"x (\x.x)", vec!["x"]),
        ("K", vec![]),
    ] {
        let got: Vec<String> = free_vars(&p(src)?).into_iter().collect();
        syntax.push(pass_if(
            format!("free_vars {src}"),
            got == fv,
            format!("got {got:?}"),
        ));
    }
    for (src, n) in [("x", 1), (r"\x.x", 2), (r"\x.\y.x", 3)] {
        syntax.push(pass_if(
            format!("size {src}"),
            size(&p(src)?).ok() == Some(n),
            "wrong size",
        ));
    }
    let captured = substitute(&p(r"\y. x")?, "x", &Term::var("y"));
    syntax.push(pass_if(
        r"(\y.x)[x := y] avoids capture",
        print(&captured, false) == r"\y'.y",
        print(&captured, false),
    ));

    let mut arithmetic = Vec::new();
    for a in 0..=8u64 {
        for b in 0..=8u64 {
            let plus = Term::apps(Term::constant("Plus"), [church(a), church(b)]);
            let monus = Term::apps(Term::constant("Monus"), [church(a), church(b)]);
            arithmetic.push(pass_if(
                format!("Plus {a} {b}"),
                unchurch(&plus, env, cfg)? == a + b,
                "wrong sum",
            ));
            arithmetic.push(pass_if(
                format!("Monus {a} {b}"),
                unchurch(&monus, env, cfg)? == a.saturating_sub(b),
                "wrong difference",
            ));
        }
    }
    for (n, expected) in [(0, "True"), (3, "False")] {
        let t = Term::app(Term::constant("Zero"), church(n));
        arithmetic.push(verdict_case(
            format!("Zero {n} = {expected}"),
            beta_eta_equal(&t, &Term::constant(expected), env, cfg)?,
            Verdict::Equal,
        ));
    }
    Ok(vec![
        Report {
            name: "syntax".into(),
            cases: syntax,
        },
        Report {
            name: "arithmetic".into(),
            cases: arithmetic,
        },
    ])
}

/// Turner goldens, random soundness, extended soundness and sizes.
pub fn bracket_suite(env: &Env, cfg: &ReductionConfig) -> Result<Vec<Report>, VariadicError> {
    let p = |s: &str| parse(s, env).map_err(crate::engine::EngineError::from);
    let mut goldens = Vec::new();
    for (src, expected) in [
        (r"\a b c. b (a b c)", "S B"),
        (r"\x. x x", "S I I"),
        (r"\x. y", "K y"),
    ] {
        let got = print(&turner(&p(src)?), false);
        goldens.push(pass_if(
            format!("turner {src} = {expected}"),
            got == expected,
            format!("got {got}"),
        ));
    }

    let (sample, discarded) = normalizing_sample(RANDOM_SEED, RANDOM_COUNT, RANDOM_DEPTH, 10_000);
    let mut soundness: Vec<Case> = sample
        .par_iter()
        .enumerate()
        .map(|(i, t)| -> Result<Case, VariadicError> {
            let v = beta_eta_equal(&turner(t), t, env, cfg)?;
            Ok(verdict_case(
                format!("#{i:03} {}", print(t, false)),
                v,
                Verdict::Equal,
            ))
        })
        .collect::<Result<_, _>>()?;
    soundness.push(Case::note(
        "corpus",
        format!(
            "{RANDOM_COUNT} closed terms of depth <= {RANDOM_DEPTH}, seed {RANDOM_SEED:#x}; {discarded} non-normalizing candidates skipped"
        ),
    ));

    let mut extended = Vec::new();
    for (f, m) in builtin_metas() {
        match extended_closed(&m) {
            Ok(generic) => {
                for n in 0..=3usize {
                    let lhs = Term::app(generic.clone(), church(n as u64));
                    let rhs = crate::metagen::expand(&m, n)?;
                    extended.push(verdict_case(
                        format!("{f}_{n}: {}", print(&generic, false)),
                        beta_eta_equal(&lhs, &rhs, env, cfg)?,
                        Verdict::Equal,
                    ));
                }
            }
            Err(e) => extended.push(Case::note(
                format!("{f}: {m}"),
                format!("not encodable: {e}"),
            )),
        }
    }

    let sizes = size_report(env)
        .into_iter()
        .map(|row| {
            let detail = format!("|turner| = {}, |term| = {}", row.encoded, row.original);
            if row.name == "Succ" {
                pass_if("Succ", row.holds(), detail)
            } else if row.holds() {
                Case {
                    label: row.name,
                    outcome: Outcome::Note,
                    steps: 0,
                    detail: format!("{detail}, holds"),
                }
            } else {
                Case::note(row.name, format!("{detail}, VIOLATION"))
            }
        })
        .collect();

    Ok(vec![
        Report {
            name: "turner goldens".into(),
            cases: goldens,
        },
        Report {
            name: "turner soundness".into(),
            cases: soundness,
        },
        Report {
            name: "extended soundness".into(),
            cases: extended,
        },
        Report {
            name: "sizes".into(),
            cases: sizes,
        },
    ])
}

/// Fixed-point probes, the Böhm relation and the one-point basis maker.
pub fn fixpoint_suite(
    max_n: usize,
    env: &Env,
    cfg: &ReductionConfig,
) -> Result<Vec<Report>, VariadicError> {
    let mut reports = probe_fixedpoints(max_n.max(2), env, cfg)?;
    reports.push(check_boehm(max_n.max(1), BoehmCaps::default(), env, cfg)?);
    let k = Term::constant("K");
    let s = Term::constant("S");
    let i = Term::constant("I");
    reports.push(check_makex(2, &[k.clone(), s.clone()], env, cfg)?);
    reports.push(check_makex(3, &[i, k, s], env, cfg)?);
    Ok(reports)
}

/// Runs a suite; reports come back in a fixed order.
pub fn run_suite(
    suite: Suite,
    max_n: usize,
    env: &Env,
    cfg: &ReductionConfig,
) -> Result<Vec<(&'static str, Vec<Report>)>, VariadicError> {
    let mut out = Vec::new();
    if matches!(suite, Suite::Kernel | Suite::All) {
        out.push(("kernel", kernel_suite(env, cfg)?));
    }
    if matches!(suite, Suite::Bracket | Suite::All) {
        out.push(("bracket", bracket_suite(env, cfg)?));
    }
    if matches!(suite, Suite::Variadic | Suite::All) {
        out.push(("variadic", check_normalizing(max_n, env, cfg)?));
    }
    if matches!(suite, Suite::Fixpoint | Suite::All) {
        out.push(("fixpoint", fixpoint_suite(max_n, env, cfg)?));
    }
    Ok(out)
}
