//! Named indeterminates shared by polynomials, rational functions and operators.

use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::error::Error;

/// Hard cap on indeterminates per registry (fixed-width exponent vectors).
pub const MAX_INDETERMINATES: usize = 32;

/// An ordered list of indeterminates. The first `n_vars` are differentiable
/// variables; the rest are formal parameters (d, γ, masses, ...), which
/// polynomials may contain but operators never differentiate.
///
/// The order fixes the graded-lex monomial order used for printing.
#[derive(Clone)]
pub struct Registry(Arc<Inner>);

struct Inner {
    names: Vec<String>,
    n_vars: usize,
}

impl Registry {
    pub fn new(vars: &[&str], params: &[&str]) -> Self {
        let mut names: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        names.extend(params.iter().map(|s| s.to_string()));
        assert!(names.len() <= MAX_INDETERMINATES, "too many indeterminates");
        for (i, a) in names.iter().enumerate() {
            assert!(!names[..i].contains(a), "duplicate indeterminate `{}`", a);
        }
        Registry(Arc::new(Inner {
            names,
            n_vars: vars.len(),
        }))
    }

    pub fn from_names(vars: Vec<String>, params: Vec<String>) -> Self {
        let v: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
        let p: Vec<&str> = params.iter().map(|s| s.as_str()).collect();
        Self::new(&v, &p)
    }

    /// Total number of indeterminates (variables and parameters).
    pub fn len(&self) -> usize {
        self.0.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.names.is_empty()
    }

    pub fn n_vars(&self) -> usize {
        self.0.n_vars
    }

    pub fn names(&self) -> &[String] {
        &self.0.names
    }

    pub fn var_names(&self) -> &[String] {
        &self.0.names[..self.0.n_vars]
    }

    pub fn param_names(&self) -> &[String] {
        &self.0.names[self.0.n_vars..]
    }

    pub fn name(&self, i: usize) -> &str {
        &self.0.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.names.iter().position(|n| n == name)
    }

    pub fn require(&self, name: &str) -> Result<usize, Error> {
        self.index_of(name)
            .ok_or_else(|| Error::UnknownIndeterminate(name.to_string()))
    }

    pub fn ensure_same(&self, other: &Registry) -> Result<(), Error> {
        if self == other {
            Ok(())
        } else {
            Err(Error::RegistryMismatch)
        }
    }

    /// Same variables, with `extra` parameters appended (skipping ones already present).
    pub fn with_params(&self, extra: &[&str]) -> Registry {
        let vars: Vec<&str> = self.var_names().iter().map(|s| s.as_str()).collect();
        let mut params: Vec<&str> = self.param_names().iter().map(|s| s.as_str()).collect();
        for e in extra {
            if !params.contains(e) && !vars.contains(e) {
                params.push(e);
            }
        }
        Registry::new(&vars, &params)
    }
}

impl PartialEq for Registry {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.n_vars == other.0.n_vars && self.0.names == other.0.names)
    }
}

impl Eq for Registry {}

impl fmt::Debug for Registry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Registry(vars={:?}, params={:?})",
            self.var_names(),
            self.param_names()
        )
    }
}
