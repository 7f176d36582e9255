//! Seeded generation of random closed terms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::engine::{normalize, ReductionConfig, Status};
use crate::kernel::{Env, Term};

/// A random closed term of depth at most `max_depth` (a variable has depth
/// 0; for `max_depth = 0` the result is `\a.a`). Binders are named `a`, `b`,
/// ... by nesting level, so no binder shadows another.
pub fn random_closed_term(rng: &mut impl Rng, max_depth: usize) -> Term {
    fn go(rng: &mut impl Rng, depth: usize, scope: &mut Vec<String>) -> Term {
        let can_var = !scope.is_empty();
        let choice = if depth == 0 {
            0
        } else if !can_var {
            1
        } else {
            // variable : abstraction : application = 1 : 2 : 3, so terms
            // rarely stop growing before the depth bound
            match rng.random_range(0..6) {
                0 => 0,
                1 | 2 => 1,
                _ => 2,
            }
        };
        match choice {
            0 if can_var => {
                let i = rng.random_range(0..scope.len());
                Term::var(scope[i].as_str())
            }
            0 | 1 => {
                let name = binder_name(scope.len());
                scope.push(name.clone());
                let body = go(rng, depth.saturating_sub(1), scope);
                scope.pop();
                Term::lam(name, body)
            }
            _ => {
                let f = go(rng, depth - 1, scope);
                let a = go(rng, depth - 1, scope);
                Term::app(f, a)
            }
        }
    }
    go(rng, max_depth, &mut Vec::new())
}

fn binder_name(level: usize) -> String {
    let letter = (b'a' + (level % 26) as u8) as char;
    if level < 26 {
        letter.to_string()
    } else {
        format!("{letter}{}", level / 26)
    }
}

/// `count` random closed terms of depth at most `max_depth` that reach a
/// normal form within `fuel` steps, drawn from a ChaCha8 stream seeded with
/// `seed`. Also returns how many candidates were discarded.
pub fn normalizing_sample(
    seed: u64,
    count: usize,
    max_depth: usize,
    fuel: u64,
) -> (Vec<Term>, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let env = Env::empty();
    let cfg = ReductionConfig {
        fuel,
        max_term_size: 100_000,
        eta: true,
    };
    let mut out = Vec::with_capacity(count);
    let mut discarded = 0;
    while out.len() < count {
        let t = random_closed_term(&mut rng, max_depth);
        let ok = normalize(&t, &env, &cfg).map(|o| o.status == Status::NormalForm);
        if ok == Ok(true) {
            out.push(t);
        } else {
            discarded += 1;
        }
    }
    (out, discarded)
}
