//! Nameless (de Bruijn) terms used internally by the reducer.
//!
//! Every node caches its size, a bound on its free indices and a structural
//! hash, so substitution can skip closed subterms and the reachability search
//! can hash terms cheaply. Binder names survive only as hints for read-back.

use std::collections::HashMap;
use std::hash::{Hash, Hasher};
use std::rc::Rc;

use crate::kernel::{fresh_name, with_stack, Env, KernelError, Term};

pub(crate) type Node = Rc<NodeData>;

pub(crate) struct NodeData {
    pub kind: Kind,
    pub size: u64,
    /// One more than the largest free de Bruijn index; 0 when closed.
    pub free_bound: u32,
    hash: u64,
}

pub(crate) enum Kind {
    Bound(u32),
    Free(Rc<str>),
    Lam(Rc<str>, Node),
    App(Node, Node),
}

const fn mix(a: u64, b: u64) -> u64 {
    (a.rotate_left(5) ^ b).wrapping_mul(0x517c_c1b7_2722_0a95)
}

fn str_hash(s: &str) -> u64 {
    s.bytes()
        .fold(0xcbf2_9ce4_8422_2325, |h, b| mix(h, b as u64))
}

pub(crate) fn bound(i: u32) -> Node {
    Rc::new(NodeData {
        kind: Kind::Bound(i),
        size: 1,
        free_bound: i + 1,
        hash: mix(1, i as u64),
    })
}

pub(crate) fn free(name: Rc<str>) -> Node {
    let hash = mix(2, str_hash(&name));
    Rc::new(NodeData {
        kind: Kind::Free(name),
        size: 1,
        free_bound: 0,
        hash,
    })
}

pub(crate) fn lam(hint: Rc<str>, body: Node) -> Node {
    Rc::new(NodeData {
        size: body.size.saturating_add(1),
        free_bound: body.free_bound.saturating_sub(1),
        hash: mix(3, body.hash),
        kind: Kind::Lam(hint, body),
    })
}

pub(crate) fn app(f: Node, a: Node) -> Node {
    Rc::new(NodeData {
        size: f.size.saturating_add(a.size).saturating_add(1),
        free_bound: f.free_bound.max(a.free_bound),
        hash: mix(mix(4, f.hash), a.hash),
        kind: Kind::App(f, a),
    })
}

thread_local! {
    static PLACEHOLDER: Node = bound(0);
}

// Long spines and deep bodies would otherwise overflow the stack on drop.
impl Drop for NodeData {
    fn drop(&mut self) {
        let mut pending = Vec::new();
        take_children(&mut self.kind, &mut pending);
        while let Some(child) = pending.pop() {
            if let Ok(mut data) = Rc::try_unwrap(child) {
                take_children(&mut data.kind, &mut pending);
            }
        }
    }
}

fn take_children(kind: &mut Kind, out: &mut Vec<Node>) {
    if matches!(kind, Kind::Bound(_) | Kind::Free(_)) {
        return;
    }
    let Ok(placeholder) = PLACEHOLDER.try_with(Rc::clone) else {
        return;
    };
    let placeholder = || placeholder.clone();
    match kind {
        Kind::Lam(_, b) => out.push(std::mem::replace(b, placeholder())),
        Kind::App(f, a) => {
            out.push(std::mem::replace(f, placeholder()));
            out.push(std::mem::replace(a, placeholder()));
        }
        Kind::Bound(_) | Kind::Free(_) => {}
    }
}

/// Structural identity, i.e. alpha-equivalence of the named terms.
pub(crate) fn same(a: &Node, b: &Node) -> bool {
    if Rc::ptr_eq(a, b) {
        return true;
    }
    if a.hash != b.hash || a.size != b.size {
        return false;
    }
    with_stack(|| match (&a.kind, &b.kind) {
        (Kind::Bound(i), Kind::Bound(j)) => i == j,
        (Kind::Free(x), Kind::Free(y)) => x == y,
        (Kind::Lam(_, p), Kind::Lam(_, q)) => same(p, q),
        (Kind::App(f, x), Kind::App(g, y)) => same(f, g) && same(x, y),
        _ => false,
    })
}

/// Hash-set key comparing nodes up to alpha-equivalence.
#[derive(Clone)]
pub(crate) struct Canonical(pub Node);

impl PartialEq for Canonical {
    fn eq(&self, other: &Self) -> bool {
        same(&self.0, &other.0)
    }
}

impl Eq for Canonical {}

impl Hash for Canonical {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash);
    }
}

/// Converts a named term, expanding constants through `env`. Expansions are
/// closed, so each constant is converted once per call and then shared.
pub(crate) fn from_term(t: &Term, env: &Env) -> Result<Node, KernelError> {
    let mut conv = Converter {
        env,
        consts: HashMap::new(),
        frees: HashMap::new(),
    };
    conv.convert(t, &mut Vec::new())
}

struct Converter<'a> {
    env: &'a Env,
    consts: HashMap<String, Node>,
    frees: HashMap<String, Node>,
}

impl Converter<'_> {
    fn convert(&mut self, t: &Term, scope: &mut Vec<Rc<str>>) -> Result<Node, KernelError> {
        with_stack(|| match t {
            Term::Var(x) => match scope.iter().rev().position(|b| **b == **x) {
                Some(i) => Ok(bound(i as u32)),
                None => Ok(self
                    .frees
                    .entry(x.clone())
                    .or_insert_with(|| free(Rc::from(x.as_str())))
                    .clone()),
            },
            Term::Const(c) => {
                if let Some(n) = self.consts.get(c) {
                    return Ok(n.clone());
                }
                let def = self
                    .env
                    .get(c)
                    .ok_or_else(|| KernelError::UnboundName(c.clone()))?;
                let n = self.convert(def, &mut Vec::new())?;
                self.consts.insert(c.clone(), n.clone());
                Ok(n)
            }
            Term::Lam(x, b) => {
                scope.push(Rc::from(x.as_str()));
                let body = self.convert(b, scope);
                let hint = scope.pop().expect("pushed above");
                Ok(lam(hint, body?))
            }
            Term::App(f, a) => {
                let f = self.convert(f, scope)?;
                let a = self.convert(a, scope)?;
                Ok(app(f, a))
            }
        })
    }
}

/// Reads a node back as a named term. Binders keep their hints, primed where
/// needed so that no binder shadows another binder or a free variable.
pub(crate) fn to_term(n: &Node) -> Term {
    let mut taken: HashMap<String, usize> = HashMap::new();
    collect_frees(n, &mut taken);
    let mut scope = Vec::new();
    read_back(n, &mut scope, &mut taken)
}

fn collect_frees(n: &Node, out: &mut HashMap<String, usize>) {
    with_stack(|| match &n.kind {
        Kind::Free(x) => {
            out.insert(x.to_string(), 1);
        }
        Kind::Bound(_) => {}
        Kind::Lam(_, b) => collect_frees(b, out),
        Kind::App(f, a) => {
            collect_frees(f, out);
            collect_frees(a, out);
        }
    })
}

fn read_back(n: &Node, scope: &mut Vec<String>, taken: &mut HashMap<String, usize>) -> Term {
    with_stack(|| match &n.kind {
        Kind::Bound(i) => {
            let idx = scope.len() - 1 - *i as usize;
            Term::Var(scope[idx].clone())
        }
        Kind::Free(x) => Term::Var(x.to_string()),
        Kind::Lam(hint, body) => {
            let name = fresh_name(hint, |c| taken.get(c).is_some_and(|&k| k > 0));
            *taken.entry(name.clone()).or_insert(0) += 1;
            scope.push(name.clone());
            let b = read_back(body, scope, taken);
            scope.pop();
            *taken.get_mut(&name).expect("inserted above") -= 1;
            Term::Lam(name, Box::new(b))
        }
        Kind::App(f, a) => Term::app(read_back(f, scope, taken), read_back(a, scope, taken)),
    })
}

/// Adds `d` to every free index `>= cutoff`.
pub(crate) fn shift(n: &Node, cutoff: u32, d: i64) -> Node {
    if n.free_bound <= cutoff || d == 0 {
        return n.clone();
    }
    with_stack(|| match &n.kind {
        Kind::Bound(i) => bound((*i as i64 + d) as u32),
        Kind::Free(_) => n.clone(),
        Kind::Lam(h, b) => lam(h.clone(), shift(b, cutoff + 1, d)),
        Kind::App(f, a) => app(shift(f, cutoff, d), shift(a, cutoff, d)),
    })
}

/// `body[0 := arg]` for the body of an abstraction, lowering the remaining
/// free indices by one.
pub(crate) fn instantiate(body: &Node, arg: &Node) -> Node {
    let mut shifted: Vec<Option<Node>> = Vec::new();
    subst(body, 0, arg, &mut shifted)
}

fn subst(n: &Node, depth: u32, arg: &Node, shifted: &mut Vec<Option<Node>>) -> Node {
    if n.free_bound <= depth {
        return n.clone();
    }
    with_stack(|| match &n.kind {
        Kind::Bound(i) if *i == depth => {
            let slot = depth as usize;
            if shifted.len() <= slot {
                shifted.resize(slot + 1, None);
            }
            shifted[slot]
                .get_or_insert_with(|| shift(arg, 0, depth as i64))
                .clone()
        }
        Kind::Bound(i) => bound(i - 1),
        Kind::Free(_) => n.clone(),
        Kind::Lam(h, b) => lam(h.clone(), subst(b, depth + 1, arg, shifted)),
        Kind::App(f, a) => app(subst(f, depth, arg, shifted), subst(a, depth, arg, shifted)),
    })
}

/// Whether de Bruijn index `idx` occurs free in `n`.
pub(crate) fn has_free(n: &Node, idx: u32) -> bool {
    if n.free_bound <= idx {
        return false;
    }
    with_stack(|| match &n.kind {
        Kind::Bound(i) => *i == idx,
        Kind::Free(_) => false,
        Kind::Lam(_, b) => has_free(b, idx + 1),
        Kind::App(f, a) => has_free(f, idx) || has_free(a, idx),
    })
}

pub(crate) fn is_beta_redex(n: &Node) -> bool {
    matches!(&n.kind, Kind::App(f, _) if matches!(f.kind, Kind::Lam(..)))
}

/// Exhaustive bottom-up eta contraction. Applied to a beta-normal term the
/// result is beta-eta-normal.
pub(crate) fn eta_normalize(n: &Node) -> Node {
    with_stack(|| match &n.kind {
        Kind::Bound(_) | Kind::Free(_) => n.clone(),
        Kind::App(f, a) => {
            let (f2, a2) = (eta_normalize(f), eta_normalize(a));
            if Rc::ptr_eq(&f2, f) && Rc::ptr_eq(&a2, a) {
                n.clone()
            } else {
                app(f2, a2)
            }
        }
        Kind::Lam(h, b) => {
            let b2 = eta_normalize(b);
            if let Kind::App(f, a) = &b2.kind {
                if matches!(a.kind, Kind::Bound(0)) && !has_free(f, 0) {
                    return shift(f, 0, -1);
                }
            }
            if Rc::ptr_eq(&b2, b) {
                n.clone()
            } else {
                lam(h.clone(), b2)
            }
        }
    })
}

/// Number of beta-redexes in `n`.
pub(crate) fn count_redexes(n: &Node) -> usize {
    with_stack(|| {
        let here = usize::from(is_beta_redex(n));
        here + match &n.kind {
            Kind::Lam(_, b) => count_redexes(b),
            Kind::App(f, a) => count_redexes(f) + count_redexes(a),
            _ => 0,
        }
    })
}

/// Contracts the `i`-th redex in pre-order (index 0 is the leftmost-outermost
/// redex). Returns `Err(remaining)` when `n` has fewer than `i + 1` redexes.
pub(crate) fn contract_nth(n: &Node, i: usize) -> Result<Node, usize> {
    with_stack(|| {
        let mut i = i;
        if let Kind::App(f, a) = &n.kind {
            if let Kind::Lam(_, body) = &f.kind {
                if i == 0 {
                    return Ok(instantiate(body, a));
                }
                i -= 1;
            }
        }
        match &n.kind {
            Kind::Lam(h, b) => contract_nth(b, i).map(|b| lam(h.clone(), b)),
            Kind::App(f, a) => match contract_nth(f, i) {
                Ok(f2) => Ok(app(f2, a.clone())),
                Err(rest) => contract_nth(a, rest).map(|a2| app(f.clone(), a2)),
            },
            _ => Err(i),
        }
    })
}
