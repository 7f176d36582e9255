use indexmap::IndexMap;

use super::{free_vars, parse_definitions, KernelError, Term};

/// The shipped base definitions: `I K B C S True False Succ Plus Pred Monus Zero`.
pub const PRELUDE_LAM: &str = include_str!("../../lam/prelude.lam");
/// The shipped arity-generic library.
pub const VARIADIC_LAM: &str = include_str!("../../lam/variadic.lam");

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Definition {
    pub term: Term,
    pub origin: String,
}

/// Ordered table of closed named definitions.
///
/// Entries can only refer to earlier entries, so the table is acyclic.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Env {
    defs: IndexMap<String, Definition>,
}

impl Env {
    pub fn empty() -> Env {
        Env::default()
    }

    /// Base combinators plus the arity-generic library.
    pub fn prelude() -> Env {
        let mut env = Env::empty();
        env.load(PRELUDE_LAM, "prelude.lam")
            .expect("embedded prelude.lam is valid");
        env.load(VARIADIC_LAM, "variadic.lam")
            .expect("embedded variadic.lam is valid");
        env
    }

    /// Loads a `.lam` source, returning the names it defined.
    pub fn load(&mut self, source: &str, origin: &str) -> Result<Vec<String>, KernelError> {
        parse_definitions(source, self, origin)
    }

    pub fn define(&mut self, name: &str, term: Term, origin: &str) -> Result<(), KernelError> {
        if self.defs.contains_key(name) {
            return Err(KernelError::DuplicateDefinition(name.to_string()));
        }
        if let Some(c) = term
            .constants()
            .into_iter()
            .find(|c| !self.defs.contains_key(c))
        {
            return Err(KernelError::UnboundName(c));
        }
        let free = free_vars(&term);
        if !free.is_empty() {
            return Err(KernelError::NotClosed {
                name: name.to_string(),
                free: free.into_iter().collect::<Vec<_>>().join(", "),
            });
        }
        self.defs.insert(
            name.to_string(),
            Definition {
                term,
                origin: origin.to_string(),
            },
        );
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&Term> {
        self.defs.get(name).map(|d| &d.term)
    }

    pub fn definition(&self, name: &str) -> Option<&Definition> {
        self.defs.get(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.defs.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.defs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.defs.is_empty()
    }
}
