use std::fmt;
use std::sync::Arc;

/// A logical variable.
///
/// `Named` covers formal parameters, existentials and the constants that
/// parameter elimination introduces; which of these a name is depends on the
/// scope it is used in. `Local` is the positional placeholder used by normal
/// tiles and never appears in parsed input.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    Nil,
    Named(Arc<str>),
    Local(u32),
}

impl Var {
    pub fn named(name: &str) -> Var {
        if name == "nil" {
            Var::Nil
        } else {
            Var::Named(Arc::from(name))
        }
    }

    pub fn is_nil(&self) -> bool {
        matches!(self, Var::Nil)
    }

    pub fn is_local(&self) -> bool {
        matches!(self, Var::Local(_))
    }

    pub fn as_name(&self) -> Option<&str> {
        match self {
            Var::Named(n) => Some(n),
            _ => None,
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::Nil => write!(f, "nil"),
            Var::Named(n) => write!(f, "{n}"),
            Var::Local(i) => write!(f, "ξ{i}"),
        }
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<&str> for Var {
    fn from(s: &str) -> Var {
        Var::named(s)
    }
}

/// Picks a name based on `base` that is not in `taken`, by appending primes.
pub fn fresh_name(base: &str, taken: &dyn Fn(&str) -> bool) -> String {
    let mut name = base.to_string();
    while taken(&name) {
        name.push('\'');
    }
    name
}
