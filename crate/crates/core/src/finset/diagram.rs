use rand::Rng;
use serde::{Deserialize, Serialize};

use super::solver::Network;
use super::{FinMap, FinSet};
use crate::caps::Caps;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramArrow {
    pub source: usize,
    pub target: usize,
    pub map: FinMap,
}

/// A finite diagram of finite sets.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramInstance {
    pub nodes: Vec<FinSet>,
    pub arrows: Vec<DiagramArrow>,
}

impl DiagramInstance {
    pub fn new(nodes: Vec<FinSet>) -> Self {
        DiagramInstance {
            nodes,
            arrows: Vec::new(),
        }
    }

    pub fn add_arrow(&mut self, source: usize, target: usize, map: FinMap) -> Result<()> {
        let (Some(s), Some(t)) = (self.nodes.get(source), self.nodes.get(target)) else {
            return Err(Error::Structural(format!(
                "arrow {source}→{target} refers to a missing node"
            )));
        };
        if map.dom.size != s.size || map.cod.size != t.size {
            return Err(Error::Structural(format!(
                "arrow {source}→{target} has map {}→{}, nodes are {}→{}",
                map.dom.size, map.cod.size, s.size, t.size
            )));
        }
        self.arrows.push(DiagramArrow { source, target, map });
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let mut copy = DiagramInstance::new(self.nodes.clone());
        for a in &self.arrows {
            copy.add_arrow(a.source, a.target, a.map.clone())?;
        }
        Ok(())
    }

    /// Whether a node-indexed tuple is a cone point of the diagram.
    pub fn is_compatible(&self, tuple: &[usize]) -> bool {
        tuple.len() == self.nodes.len()
            && tuple.iter().zip(&self.nodes).all(|(&x, n)| x < n.size)
            && self
                .arrows
                .iter()
                .all(|a| a.map.apply(tuple[a.source]) == tuple[a.target])
    }

    pub(crate) fn network(&self) -> Result<Network> {
        self.validate()?;
        let mut net = Network::new(self.nodes.iter().map(|n| n.size).collect());
        for a in &self.arrows {
            net.add(vec![a.source], a.target, a.map.table.clone())?;
        }
        Ok(net)
    }
}

/// The limit of a diagram: its compatible tuples in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Limit {
    pub solutions: Vec<Vec<usize>>,
    pub set: FinSet,
    pub projections: Vec<FinMap>,
}

impl Limit {
    pub fn index_of(&self, tuple: &[usize]) -> Option<usize> {
        self.solutions.binary_search_by(|s| s.as_slice().cmp(tuple)).ok()
    }

    fn from_solutions(diagram: &DiagramInstance, solutions: Vec<Vec<usize>>) -> Self {
        let set = FinSet::new(solutions.len());
        let projections = diagram
            .nodes
            .iter()
            .enumerate()
            .map(|(i, n)| FinMap {
                dom: set.clone(),
                cod: n.clone(),
                table: solutions.iter().map(|s| s[i]).collect(),
            })
            .collect();
        Limit {
            solutions,
            set,
            projections,
        }
    }
}

/// Computes the limit by constraint propagation and backtracking search.
pub fn limit(diagram: &DiagramInstance, caps: &Caps) -> Result<Limit> {
    let net = diagram.network()?;
    let solutions = net.solve(caps.enumeration, "diagram limit")?;
    Ok(Limit::from_solutions(diagram, solutions))
}

/// Up to `count` random distinct elements of the limit.
pub fn sample_limit<R: Rng>(diagram: &DiagramInstance, rng: &mut R, count: usize) -> Result<Vec<Vec<usize>>> {
    Ok(diagram.network()?.sample(rng, count))
}
