//! Fuel-bounded normal-order reduction, beta-eta equivalence and bounded
//! reachability over one-step beta reducts.

pub(crate) mod nameless;

use std::collections::{HashSet, VecDeque};

use thiserror::Error;

use crate::kernel::{Env, KernelError, Term};
use nameless::{Canonical, Kind, Node};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReductionConfig {
    /// Maximum number of beta steps.
    pub fuel: u64,
    /// Maximum number of nodes of the whole term during reduction.
    pub max_term_size: u64,
    /// Eta-contract the beta-normal form.
    pub eta: bool,
}

impl Default for ReductionConfig {
    fn default() -> Self {
        ReductionConfig {
            fuel: 1_000_000,
            max_term_size: 1_000_000,
            eta: true,
        }
    }
}

impl ReductionConfig {
    pub fn with_fuel(fuel: u64) -> Self {
        ReductionConfig {
            fuel,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    NormalForm,
    FuelExhausted,
    SizeExceeded,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionOutcome {
    pub status: Status,
    /// The normal form, or the last term reached.
    pub result: Term,
    pub steps: u64,
}

impl ReductionOutcome {
    pub fn normal_form(&self) -> Option<&Term> {
        (self.status == Status::NormalForm).then_some(&self.result)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Equal,
    NotEqual,
    Unknown,
}

/// Outcome of a node-level reduction, before read-back.
pub(crate) struct NodeOutcome {
    pub status: Status,
    pub node: Node,
    pub steps: u64,
}

struct Reducer {
    fuel: u64,
    max_size: u64,
    steps: u64,
    stopped: Option<Status>,
}

impl Reducer {
    /// Normal-order reduction of `t`, whose surrounding context holds `ctx`
    /// further nodes. Always returns the term reached, even when stopped.
    fn normalize(&mut self, t: Node, ctx: u64) -> Node {
        crate::kernel::with_stack(|| {
            let mut head = t;
            // arguments of the spine, last element applied first
            let mut args: Vec<Node> = Vec::new();
            let mut args_size: u64 = 0;
            loop {
                let next = match &head.kind {
                    Kind::App(f, a) => {
                        args_size += a.size + 1;
                        args.push(a.clone());
                        f.clone()
                    }
                    Kind::Lam(_, body) if !args.is_empty() => {
                        if self.steps >= self.fuel {
                            self.stopped = Some(Status::FuelExhausted);
                            break;
                        }
                        let arg = args.pop().expect("nonempty");
                        args_size -= arg.size + 1;
                        self.steps += 1;
                        let reduct = nameless::instantiate(body, &arg);
                        if ctx.saturating_add(reduct.size).saturating_add(args_size) > self.max_size
                        {
                            self.stopped = Some(Status::SizeExceeded);
                            head = reduct;
                            break;
                        }
                        reduct
                    }
                    _ => break,
                };
                head = next;
            }
            if self.stopped.is_some() {
                return rebuild(head, args);
            }
            if let Kind::Lam(hint, body) = &head.kind {
                let body = self.normalize(body.clone(), ctx + 1);
                return nameless::lam(hint.clone(), body);
            }
            // neutral head: normalize the arguments left to right
            let mut total = ctx + head.size + args_size;
            let mut acc = head;
            while let Some(arg) = args.pop() {
                let arg = if self.stopped.is_none() {
                    let before = arg.size;
                    let reduced = self.normalize(arg, total - before);
                    total = total - before + reduced.size;
                    reduced
                } else {
                    arg
                };
                acc = nameless::app(acc, arg);
            }
            acc
        })
    }
}

fn rebuild(head: Node, mut args: Vec<Node>) -> Node {
    let mut acc = head;
    while let Some(a) = args.pop() {
        acc = nameless::app(acc, a);
    }
    acc
}

pub(crate) fn normalize_node(t: Node, cfg: &ReductionConfig) -> NodeOutcome {
    let mut r = Reducer {
        fuel: cfg.fuel,
        max_size: cfg.max_term_size,
        steps: 0,
        stopped: None,
    };
    if t.size > cfg.max_term_size {
        return NodeOutcome {
            status: Status::SizeExceeded,
            node: t,
            steps: 0,
        };
    }
    let node = r.normalize(t, 0);
    match r.stopped {
        Some(status) => NodeOutcome {
            status,
            node,
            steps: r.steps,
        },
        None => NodeOutcome {
            status: Status::NormalForm,
            node: if cfg.eta {
                nameless::eta_normalize(&node)
            } else {
                node
            },
            steps: r.steps,
        },
    }
}

/// Reduces `t` in normal order (leftmost-outermost redex first) until it is
/// beta-normal, then eta-contracts exhaustively when `cfg.eta` is set.
pub fn normalize(
    t: &Term,
    env: &Env,
    cfg: &ReductionConfig,
) -> Result<ReductionOutcome, EngineError> {
    let node = nameless::from_term(t, env)?;
    let out = normalize_node(node, cfg);
    Ok(ReductionOutcome {
        status: out.status,
        result: nameless::to_term(&out.node),
        steps: out.steps,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Comparison {
    pub verdict: Verdict,
    /// Beta steps spent on each side.
    pub steps: (u64, u64),
}

/// Compares beta-eta normal forms, reporting the work done on each side.
pub fn compare(
    a: &Term,
    b: &Term,
    env: &Env,
    cfg: &ReductionConfig,
) -> Result<Comparison, EngineError> {
    let left = normalize_node(nameless::from_term(a, env)?, cfg);
    if left.status != Status::NormalForm {
        return Ok(Comparison {
            verdict: Verdict::Unknown,
            steps: (left.steps, 0),
        });
    }
    let right = normalize_node(nameless::from_term(b, env)?, cfg);
    let verdict = if right.status != Status::NormalForm {
        Verdict::Unknown
    } else if nameless::same(&left.node, &right.node) {
        Verdict::Equal
    } else {
        Verdict::NotEqual
    };
    Ok(Comparison {
        verdict,
        steps: (left.steps, right.steps),
    })
}

/// Compares beta-eta normal forms; `Unknown` when either side fails to
/// normalize within the configured limits.
pub fn beta_eta_equal(
    a: &Term,
    b: &Term,
    env: &Env,
    cfg: &ReductionConfig,
) -> Result<Verdict, EngineError> {
    Ok(compare(a, b, env, cfg)?.verdict)
}

/// The normal-order reduction sequence of `t`, starting with `t` itself and
/// ending at its beta-normal form or after `cfg.fuel` steps. Eta is not
/// applied.
pub fn trace(t: &Term, env: &Env, cfg: &ReductionConfig) -> Result<Vec<Term>, EngineError> {
    let mut node = nameless::from_term(t, env)?;
    let mut seq = vec![nameless::to_term(&node)];
    for _ in 0..cfg.fuel {
        match nameless::contract_nth(&node, 0) {
            Ok(next) => {
                if next.size > cfg.max_term_size {
                    seq.push(nameless::to_term(&next));
                    break;
                }
                node = next;
                seq.push(nameless::to_term(&node));
            }
            Err(_) => break,
        }
    }
    Ok(seq)
}

/// Reduces with an arbitrary redex choice: `choose(count)` picks which of the
/// `count` redexes (in pre-order) to contract next.
pub fn reduce_with_strategy(
    t: &Term,
    env: &Env,
    cfg: &ReductionConfig,
    mut choose: impl FnMut(usize) -> usize,
) -> Result<ReductionOutcome, EngineError> {
    let mut node = nameless::from_term(t, env)?;
    let mut steps = 0;
    let status = loop {
        let count = nameless::count_redexes(&node);
        if count == 0 {
            break Status::NormalForm;
        }
        if steps >= cfg.fuel {
            break Status::FuelExhausted;
        }
        let pick = choose(count).min(count - 1);
        node = nameless::contract_nth(&node, pick).expect("pick < count");
        steps += 1;
        if node.size > cfg.max_term_size {
            break Status::SizeExceeded;
        }
    };
    if status == Status::NormalForm && cfg.eta {
        node = nameless::eta_normalize(&node);
    }
    Ok(ReductionOutcome {
        status,
        result: nameless::to_term(&node),
        steps,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOutcome {
    pub found: bool,
    /// The search stopped at a cap before exhausting the reduction graph, so
    /// a negative answer is not a refutation.
    pub inconclusive: bool,
    /// Distinct terms visited.
    pub visited: usize,
    /// Depth at which the target was found.
    pub depth: Option<usize>,
}

/// Breadth-first search over one-step beta reducts of `a` (at every redex
/// position) for a term alpha-equal to `target`.
pub fn reduces_to(
    a: &Term,
    target: &Term,
    env: &Env,
    node_cap: usize,
    depth_cap: usize,
) -> Result<SearchOutcome, EngineError> {
    let start = nameless::from_term(a, env)?;
    let goal = Canonical(nameless::from_term(target, env)?);
    let mut seen: HashSet<Canonical> = HashSet::new();
    let mut queue: VecDeque<(Node, usize)> = VecDeque::new();
    seen.insert(Canonical(start.clone()));
    queue.push_back((start, 0));
    let mut inconclusive = false;
    while let Some((node, depth)) = queue.pop_front() {
        if Canonical(node.clone()) == goal {
            return Ok(SearchOutcome {
                found: true,
                inconclusive: false,
                visited: seen.len(),
                depth: Some(depth),
            });
        }
        let count = nameless::count_redexes(&node);
        if count == 0 {
            continue;
        }
        if depth >= depth_cap {
            inconclusive = true;
            continue;
        }
        for i in 0..count {
            let next = nameless::contract_nth(&node, i).expect("i < count");
            let key = Canonical(next.clone());
            if seen.contains(&key) {
                continue;
            }
            if seen.len() >= node_cap {
                inconclusive = true;
                break;
            }
            seen.insert(key);
            queue.push_back((next, depth + 1));
        }
    }
    Ok(SearchOutcome {
        found: false,
        inconclusive,
        visited: seen.len(),
        depth: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{alpha_eq, parse};
    use crate::prelude::church;

    fn env() -> Env {
        Env::prelude()
    }

    fn p(src: &str) -> Term {
        parse(src, &env()).unwrap()
    }

    fn nf(src: &str) -> Term {
        let out = normalize(&p(src), &env(), &ReductionConfig::default()).unwrap();
        assert_eq!(out.status, Status::NormalForm, "{src}");
        out.result
    }

    #[test]
    fn identity_applied() {
        assert!(alpha_eq(&nf(r"(\x.x) K"), &nf("K")));
        let out = normalize(&p(r"(\x.x) K"), &env(), &ReductionConfig::default()).unwrap();
        assert_eq!(out.steps, 1);
    }

    #[test]
    fn successor_of_two() {
        assert!(alpha_eq(&nf("Succ #2"), &church(3)));
    }

    #[test]
    fn omega_runs_out_of_fuel() {
        let out = normalize(
            &p(r"(\x.x x) (\x.x x)"),
            &env(),
            &ReductionConfig::with_fuel(100),
        )
        .unwrap();
        assert_eq!(out.status, Status::FuelExhausted);
        assert_eq!(out.steps, 100);
        assert!(alpha_eq(&out.result, &p(r"(\x.x x) (\x.x x)")));
    }

    #[test]
    fn growth_hits_size_limit() {
        // (\x. x x x) applied to itself grows by one copy per step
        let cfg = ReductionConfig {
            max_term_size: 500,
            ..Default::default()
        };
        let out = normalize(&p(r"(\x.x x x) (\x.x x x)"), &env(), &cfg).unwrap();
        assert_eq!(out.status, Status::SizeExceeded);
        assert!(out.steps < 500);
    }

    #[test]
    fn normal_order_finds_normal_form_past_divergent_argument() {
        assert!(alpha_eq(&nf(r"K z ((\x.x x) (\x.x x))"), &Term::var("z")));
    }

    #[test]
    fn equality_examples() {
        let cfg = ReductionConfig::default();
        let eq = |a: &str, b: &str| beta_eta_equal(&p(a), &p(b), &env(), &cfg).unwrap();
        assert_eq!(eq(r"\x. f x", "f"), Verdict::Equal);
        assert_eq!(eq("#1", r"\s.s"), Verdict::Equal);
        assert_eq!(eq("K", "S"), Verdict::NotEqual);
        let small = ReductionConfig::with_fuel(50);
        assert_eq!(
            beta_eta_equal(&p("Ycurry f"), &p("f"), &env(), &small).unwrap(),
            Verdict::Unknown
        );
    }

    #[test]
    fn eta_can_be_disabled() {
        let cfg = ReductionConfig {
            eta: false,
            ..Default::default()
        };
        let out = normalize(&p(r"\x. f x"), &env(), &cfg).unwrap();
        assert!(alpha_eq(&out.result, &p(r"\x. f x")));
    }

    #[test]
    fn trace_examples() {
        let cfg = ReductionConfig::default();
        let tr = trace(&p(r"(\x.x) y"), &env(), &cfg).unwrap();
        assert_eq!(tr.len(), 2);
        assert_eq!(tr[1], Term::var("y"));

        let tr = trace(&p("I (I z)"), &env(), &cfg).unwrap();
        assert_eq!(tr.len(), 3);
        assert_eq!(tr[2], Term::var("z"));

        let omega = p(r"(\x.x x) (\x.x x)");
        let tr = trace(&omega, &env(), &ReductionConfig::with_fuel(3)).unwrap();
        assert_eq!(tr.len(), 4);
        assert!(tr.iter().all(|t| alpha_eq(t, &omega)));
    }

    #[test]
    fn boehm_single() {
        let out = reduces_to(&p("Ycurry M"), &p("Yturing"), &env(), 100_000, 200).unwrap();
        assert!(out.found);
        assert_eq!(out.depth, Some(3));
    }

    #[test]
    fn reachability_trivia() {
        let t = p(r"(\x. x) y");
        assert!(reduces_to(&t, &t, &env(), 10, 10).unwrap().found);
        let out = reduces_to(&p("K"), &p("S"), &env(), 10, 10).unwrap();
        assert!(!out.found && !out.inconclusive);
        let omega = p(r"(\x.x x x) (\x.x x x)");
        let out = reduces_to(&omega, &p("S"), &env(), 100, 5).unwrap();
        assert!(!out.found && out.inconclusive);
    }

    #[test]
    fn arithmetic() {
        let cfg = ReductionConfig::default();
        for a in 0..=8u64 {
            for b in 0..=8u64 {
                let plus = Term::apps(Term::constant("Plus"), [church(a), church(b)]);
                let monus = Term::apps(Term::constant("Monus"), [church(a), church(b)]);
                assert_eq!(
                    crate::prelude::unchurch(&plus, &env(), &cfg).unwrap(),
                    a + b
                );
                assert_eq!(
                    crate::prelude::unchurch(&monus, &env(), &cfg).unwrap(),
                    a.saturating_sub(b)
                );
            }
        }
        assert!(alpha_eq(&nf("Zero #0"), &nf("True")));
        assert!(alpha_eq(&nf("Zero #3"), &nf("False")));
    }
}
