//! Process-wide symbol table.
//!
//! Every indeterminate (main variables like `x`, `z`, `w` and formal
//! parameters like `t1`, `s1`, `pi`) is interned once and identified by a
//! small integer. The integer order is the canonical variable order used by
//! the monomial ordering, so a fixed set of well-known names is seeded first.

use std::collections::HashMap;
use std::fmt;
use std::sync::{OnceLock, RwLock};

/// Maximum number of distinct symbols a process may intern.
pub const MAX_VARS: usize = 16;

const SEEDED: &[&str] = &["pi", "t1", "t2", "s1", "a11", "w", "z", "x"];

struct Table {
    names: Vec<String>,
    ids: HashMap<String, u8>,
}

fn table() -> &'static RwLock<Table> {
    static TABLE: OnceLock<RwLock<Table>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = Table {
            names: Vec::new(),
            ids: HashMap::new(),
        };
        for name in SEEDED {
            let id = t.names.len() as u8;
            t.names.push((*name).to_string());
            t.ids.insert((*name).to_string(), id);
        }
        RwLock::new(t)
    })
}

/// An interned indeterminate.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(pub(crate) u8);

impl Var {
    /// Interns `name`, returning the existing id if it was seen before.
    ///
    /// Panics when more than [`MAX_VARS`] distinct names are requested.
    pub fn new(name: &str) -> Var {
        if let Some(&id) = table().read().unwrap().ids.get(name) {
            return Var(id);
        }
        let mut t = table().write().unwrap();
        if let Some(&id) = t.ids.get(name) {
            return Var(id);
        }
        assert!(
            t.names.len() < MAX_VARS,
            "symbol table full ({MAX_VARS} symbols); cannot intern {name:?}"
        );
        let id = t.names.len() as u8;
        t.names.push(name.to_string());
        t.ids.insert(name.to_string(), id);
        Var(id)
    }

    /// Looks a name up without interning it.
    pub fn lookup(name: &str) -> Option<Var> {
        table().read().unwrap().ids.get(name).map(|&id| Var(id))
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn name(self) -> String {
        table().read().unwrap().names[self.0 as usize].clone()
    }

    pub fn x() -> Var {
        Var::new("x")
    }
    pub fn z() -> Var {
        Var::new("z")
    }
    pub fn w() -> Var {
        Var::new("w")
    }
    pub fn pi() -> Var {
        Var::new("pi")
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_order_is_fixed() {
        assert!(Var::new("pi") < Var::new("t1"));
        assert!(Var::new("z") < Var::new("x"));
        assert_eq!(Var::new("x"), Var::x());
        assert_eq!(Var::x().name(), "x");
    }
}
