//! Untyped lambda-calculus workbench: terms, normal-order reduction, Church
//! encodings, an ellipsis meta-language, bracket abstraction and a library
//! of arity-generic combinators with verification harnesses.

pub mod bracket;
pub mod engine;
pub mod kernel;
pub mod metagen;
pub mod prelude;
pub mod random;
pub mod suite;
pub mod variadic;

pub use engine::{
    beta_eta_equal, compare, normalize, reduce_with_strategy, reduces_to, trace, Comparison,
    EngineError, ReductionConfig, ReductionOutcome, SearchOutcome, Status, Verdict,
};
pub use kernel::{alpha_eq, free_vars, parse, print, size, Env, KernelError, Term};
pub use prelude::{church, projection, selector, tuple, unchurch, PreludeError};
