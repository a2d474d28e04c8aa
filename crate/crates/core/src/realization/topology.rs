use std::collections::{HashMap, HashSet};

use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};

use super::ValidationError;
use crate::code::{Block, BlockStructure};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SymbolVar {
    pub id: String,
    pub dim: usize,
}

/// Which endpoint of a state edge carries the sign inversion when the
/// realization is dualized.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Endpoint {
    Left,
    #[default]
    Right,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StateVar {
    pub id: String,
    pub dim: usize,
    pub left: String,
    pub right: String,
    #[serde(default)]
    pub negate_at: Endpoint,
}

impl StateVar {
    pub fn new(id: impl Into<String>, dim: usize, left: impl Into<String>, right: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            dim,
            left: left.into(),
            right: right.into(),
            negate_at: Endpoint::Right,
        }
    }

    pub fn negate_constraint(&self) -> &str {
        match self.negate_at {
            Endpoint::Left => &self.left,
            Endpoint::Right => &self.right,
        }
    }

    /// The endpoint opposite `constraint`.
    pub fn other_end(&self, constraint: &str) -> Option<&str> {
        if self.left == constraint {
            Some(&self.right)
        } else if self.right == constraint {
            Some(&self.left)
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConstraintNode {
    pub id: String,
    pub vars: Vec<String>,
}

impl ConstraintNode {
    pub fn new<S: Into<String>>(id: impl Into<String>, vars: impl IntoIterator<Item = S>) -> Self {
        Self {
            id: id.into(),
            vars: vars.into_iter().map(Into::into).collect(),
        }
    }
}

/// The normal graph: constraint vertices, state edges, symbol half-edges.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Topology {
    pub symbols: Vec<SymbolVar>,
    pub states: Vec<StateVar>,
    pub constraints: Vec<ConstraintNode>,
}

impl Topology {
    pub fn symbol_index(&self, id: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s.id == id)
    }

    pub fn state_index(&self, id: &str) -> Option<usize> {
        self.states.iter().position(|s| s.id == id)
    }

    pub fn constraint_index(&self, id: &str) -> Option<usize> {
        self.constraints.iter().position(|c| c.id == id)
    }

    pub fn state(&self, id: &str) -> Option<&StateVar> {
        self.state_index(id).map(|j| &self.states[j])
    }

    pub fn is_state(&self, id: &str) -> bool {
        self.state_index(id).is_some()
    }

    pub fn is_symbol(&self, id: &str) -> bool {
        self.symbol_index(id).is_some()
    }

    /// Dimension of a symbol or state variable.
    pub fn var_dim(&self, id: &str) -> Option<usize> {
        self.symbols
            .iter()
            .find(|s| s.id == id)
            .map(|s| s.dim)
            .or_else(|| self.states.iter().find(|s| s.id == id).map(|s| s.dim))
    }

    /// State variables of a constraint, in its variable order.
    pub fn states_of<'a>(&'a self, node: &'a ConstraintNode) -> impl Iterator<Item = &'a str> + 'a {
        node.vars.iter().map(String::as_str).filter(|v| self.is_state(v))
    }

    pub fn symbols_of<'a>(&'a self, node: &'a ConstraintNode) -> impl Iterator<Item = &'a str> + 'a {
        node.vars.iter().map(String::as_str).filter(|v| self.is_symbol(v))
    }

    /// Block layout of a constraint code: one block per listed variable.
    pub fn constraint_structure(&self, node: &ConstraintNode) -> BlockStructure {
        BlockStructure::new(
            node.vars
                .iter()
                .map(|v| Block::new(v.clone(), self.var_dim(v).unwrap_or(0)))
                .collect(),
        )
        .expect("variables within a validated constraint are distinct")
    }

    /// Endpoint constraint indices `(left, right)` of every state.
    pub fn edge_list(&self) -> Vec<(usize, usize)> {
        self.states
            .iter()
            .filter_map(|s| Some((self.constraint_index(&s.left)?, self.constraint_index(&s.right)?)))
            .collect()
    }

    /// Connected components of the constraint graph as sorted index lists.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.constraints.len();
        let mut uf = UnionFind::<usize>::new(n);
        for (a, b) in self.edge_list() {
            uf.union(a, b);
        }
        let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
        for i in 0..n {
            groups.entry(uf.find(i)).or_default().push(i);
        }
        let mut out: Vec<Vec<usize>> = groups.into_values().collect();
        out.sort();
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    /// Connected with exactly |V| - 1 edges.
    pub fn is_cycle_free(&self) -> bool {
        self.is_connected() && self.states.len() + 1 == self.constraints.len()
    }

    /// A single cycle in which every constraint touches exactly two states.
    pub fn is_tail_biting(&self) -> bool {
        self.is_connected()
            && self.constraints.len() >= 2
            && self.states.len() == self.constraints.len()
            && self.constraints.iter().all(|c| self.states_of(c).count() == 2)
    }

    /// Constraint indices on the `left` side of state `j` once that edge is
    /// removed. Only meaningful on cycle-free graphs.
    pub fn side_of_cut(&self, j: usize) -> Vec<usize> {
        let n = self.constraints.len();
        let mut uf = UnionFind::<usize>::new(n);
        for (k, (a, b)) in self.edge_list().into_iter().enumerate() {
            if k != j {
                uf.union(a, b);
            }
        }
        let root = self.constraint_index(&self.states[j].left).expect("validated");
        (0..n).filter(|&i| uf.equiv(i, root)).collect()
    }

    /// Structural checks that do not involve constraint codes.
    pub fn validate(&self) -> Vec<ValidationError> {
        let mut errors = Vec::new();
        let mut ids = HashSet::new();
        let all_ids = self
            .symbols
            .iter()
            .map(|s| &s.id)
            .chain(self.states.iter().map(|s| &s.id))
            .chain(self.constraints.iter().map(|c| &c.id));
        for id in all_ids {
            if !ids.insert(id.as_str()) {
                errors.push(ValidationError::DuplicateId { id: id.clone() });
            }
        }
        if self.constraints.is_empty() {
            errors.push(ValidationError::NoConstraints);
            return errors;
        }

        let mut symbol_uses: HashMap<&str, usize> = HashMap::new();
        let mut state_users: HashMap<&str, Vec<String>> = HashMap::new();
        for c in &self.constraints {
            let mut seen = HashSet::new();
            for v in &c.vars {
                if !seen.insert(v.as_str()) {
                    errors.push(ValidationError::RepeatedVariable {
                        constraint: c.id.clone(),
                        variable: v.clone(),
                    });
                    continue;
                }
                if self.is_symbol(v) {
                    *symbol_uses.entry(v).or_default() += 1;
                } else if self.is_state(v) {
                    state_users.entry(v).or_default().push(c.id.clone());
                } else {
                    errors.push(ValidationError::UnknownVariable {
                        constraint: c.id.clone(),
                        variable: v.clone(),
                    });
                }
            }
        }
        for s in &self.symbols {
            let count = symbol_uses.get(s.id.as_str()).copied().unwrap_or(0);
            if count != 1 {
                errors.push(ValidationError::SymbolUsage {
                    symbol: s.id.clone(),
                    count,
                });
            }
        }
        let mut endpoints_ok = true;
        for s in &self.states {
            for end in [&s.left, &s.right] {
                if self.constraint_index(end).is_none() {
                    endpoints_ok = false;
                    errors.push(ValidationError::UnknownConstraint {
                        state: s.id.clone(),
                        constraint: end.clone(),
                    });
                }
            }
            if s.left == s.right {
                endpoints_ok = false;
                errors.push(ValidationError::SelfLoop {
                    state: s.id.clone(),
                    constraint: s.left.clone(),
                });
            }
            let users = state_users.get(s.id.as_str()).cloned().unwrap_or_default();
            if users.len() != 2 {
                endpoints_ok = false;
                errors.push(ValidationError::StateUsage {
                    state: s.id.clone(),
                    count: users.len(),
                });
            } else {
                let mut declared = [s.left.clone(), s.right.clone()];
                let mut found = [users[0].clone(), users[1].clone()];
                declared.sort();
                found.sort();
                if declared != found {
                    endpoints_ok = false;
                    errors.push(ValidationError::EndpointMismatch {
                        state: s.id.clone(),
                        left: s.left.clone(),
                        right: s.right.clone(),
                        found: users,
                    });
                }
            }
        }
        if endpoints_ok {
            let comps = self.components();
            if comps.len() > 1 {
                errors.push(ValidationError::Disconnected {
                    components: comps
                        .into_iter()
                        .map(|c| c.into_iter().map(|i| self.constraints[i].id.clone()).collect())
                        .collect(),
                });
            }
        }
        errors
    }
}
