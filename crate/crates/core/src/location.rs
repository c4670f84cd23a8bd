//! The static location hierarchy.

use std::collections::HashMap;

use thiserror::Error;

use crate::kinetics::{eval_expression, EvalEnvironment, EvalError, ParamValues};
use crate::model::{Location, LocationKind};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LocationError {
    #[error("location `{0}` is defined more than once")]
    DuplicateLocation(String),
    #[error("location `{child}` is placed in undefined location `{parent}`")]
    UnknownParent { child: String, parent: String },
    #[error("location hierarchy is cyclic through `{0}`")]
    CyclicHierarchy(String),
    #[error("unknown location `{0}`")]
    UnknownLocation(String),
    #[error("location `{name}` has non-positive size {size} at t = {time}")]
    NonpositiveSize { name: String, size: f64, time: f64 },
    #[error("size of location `{name}`: {source}")]
    Eval { name: String, source: EvalError },
}

/// Forest of locations linked child to parent.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LocationTree {
    nodes: Vec<Location>,
    index: HashMap<String, usize>,
    parent: Vec<Option<usize>>,
}

pub fn build_location_tree(locations: &[Location]) -> Result<LocationTree, LocationError> {
    let mut index = HashMap::with_capacity(locations.len());
    for (i, loc) in locations.iter().enumerate() {
        if index.insert(loc.name.clone(), i).is_some() {
            return Err(LocationError::DuplicateLocation(loc.name.clone()));
        }
    }
    let mut parent = Vec::with_capacity(locations.len());
    for loc in locations {
        let p = match &loc.parent {
            None => None,
            Some(name) => Some(*index.get(name).ok_or_else(|| LocationError::UnknownParent {
                child: loc.name.clone(),
                parent: name.clone(),
            })?),
        };
        parent.push(p);
    }
    // With one parent per node, a cycle exists iff some ancestor walk exceeds the node count.
    for start in 0..locations.len() {
        let mut cur = parent[start];
        let mut steps = 0;
        while let Some(p) = cur {
            steps += 1;
            if steps > locations.len() {
                return Err(LocationError::CyclicHierarchy(locations[start].name.clone()));
            }
            cur = parent[p];
        }
    }
    Ok(LocationTree { nodes: locations.to_vec(), index, parent })
}

impl LocationTree {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn get(&self, name: &str) -> Option<&Location> {
        self.index.get(name).map(|&i| &self.nodes[i])
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    pub fn locations(&self) -> &[Location] {
        &self.nodes
    }

    pub fn parent_of(&self, name: &str) -> Option<&str> {
        let i = *self.index.get(name)?;
        self.parent[i].map(|p| self.nodes[p].name.as_str())
    }

    pub fn roots(&self) -> Vec<&str> {
        self.nodes
            .iter()
            .zip(&self.parent)
            .filter(|(_, p)| p.is_none())
            .map(|(l, _)| l.name.as_str())
            .collect()
    }

    pub fn children_of(&self, name: &str) -> Vec<&str> {
        let Some(&i) = self.index.get(name) else { return Vec::new() };
        self.nodes
            .iter()
            .zip(&self.parent)
            .filter(|(_, p)| **p == Some(i))
            .map(|(l, _)| l.name.as_str())
            .collect()
    }

    pub fn kind_of(&self, name: &str) -> Option<LocationKind> {
        self.get(name).map(|l| l.kind)
    }

    /// Same location, parent/child, or siblings under one parent.
    pub fn adjacent(&self, a: &str, b: &str) -> bool {
        let (Some(&ia), Some(&ib)) = (self.index.get(a), self.index.get(b)) else {
            return false;
        };
        if ia == ib {
            return true;
        }
        let (pa, pb) = (self.parent[ia], self.parent[ib]);
        pa == Some(ib) || pb == Some(ia) || (pa.is_some() && pa == pb)
    }
}

/// Evaluates the size of `name` with the time variable bound to `t`.
pub fn location_size_at(
    tree: &LocationTree,
    name: &str,
    t: f64,
    params: &ParamValues,
) -> Result<f64, LocationError> {
    let loc = tree.get(name).ok_or_else(|| LocationError::UnknownLocation(name.to_string()))?;
    let env = EvalEnvironment::new(params).at_time(t);
    let size = eval_expression(&loc.size, &env)
        .map_err(|source| LocationError::Eval { name: name.to_string(), source })?;
    if size.is_nan() || size <= 0.0 {
        return Err(LocationError::NonpositiveSize { name: name.to_string(), size, time: t });
    }
    Ok(size)
}
