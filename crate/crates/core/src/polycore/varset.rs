use std::fmt;
use std::sync::Arc;

/// An ordered set of variable names shared by all polynomials of one ambient ring.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VarSet {
    names: Vec<String>,
}

impl VarSet {
    pub fn new<S: Into<String>>(names: Vec<S>) -> Arc<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        debug_assert!(
            names.iter().collect::<std::collections::HashSet<_>>().len() == names.len(),
            "duplicate variable names"
        );
        Arc::new(VarSet { names })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// New variable set with `extra` names appended.
    pub fn extended<S: Into<String>>(&self, extra: Vec<S>) -> Arc<Self> {
        let mut names = self.names.clone();
        names.extend(extra.into_iter().map(Into::into));
        VarSet::new(names)
    }

    /// A name based on `base` that does not collide with existing names.
    pub fn fresh_name(&self, base: &str) -> String {
        if self.index_of(base).is_none() {
            return base.to_string();
        }
        for k in 0.. {
            let cand = format!("{base}_{k}");
            if self.index_of(&cand).is_none() {
                return cand;
            }
        }
        unreachable!()
    }
}

impl fmt::Display for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.names.join(", "))
    }
}
