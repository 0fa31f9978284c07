//! Finite concrete categories: finite sets, finite groups, and finite-dimensional
//! vector spaces over a finite field.
//!
//! Morphisms are always represented by their underlying maps of carriers, so
//! limits and comma categories can be computed uniformly on underlying sets
//! and then equipped with the category's structure.

mod comma;
pub mod field;
pub mod group;
pub mod vect;

pub use comma::{comma, CommaArrow, CommaCategory, CommaObject};
pub use field::FiniteField;
pub use group::GroupObject;
pub use vect::{VectObject, VectSpaces};

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::finset::{self, solver::Network, DiagramArrow, DiagramInstance, FinMap, FinSet};

/// A category with finite, enumerable hom-sets and a faithful carrier functor.
pub trait ConcreteCategory {
    type Object: Clone + fmt::Debug + PartialEq;

    fn name(&self) -> String;

    fn carrier(&self, obj: &Self::Object) -> Result<FinSet>;

    /// Every morphism `a → b`, duplicate-free and sorted by value table.
    fn hom(&self, a: &Self::Object, b: &Self::Object, caps: &Caps) -> Result<Vec<FinMap>>;

    fn is_morphism(&self, a: &Self::Object, b: &Self::Object, f: &FinMap) -> bool;

    /// The limit of a finite diagram, with the category's structure on the solution set.
    fn limit(&self, diagram: &ObjectDiagram<Self::Object>, caps: &Caps) -> Result<CategoricalLimit<Self::Object>>;
}

/// A finite diagram whose nodes are objects of some category.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectDiagram<O> {
    pub nodes: Vec<O>,
    pub arrows: Vec<DiagramArrow>,
}

impl<O: Clone> ObjectDiagram<O> {
    pub fn new(nodes: Vec<O>) -> Self {
        ObjectDiagram {
            nodes,
            arrows: Vec::new(),
        }
    }

    pub fn add_arrow(&mut self, source: usize, target: usize, map: FinMap) {
        self.arrows.push(DiagramArrow { source, target, map });
    }

    pub fn underlying<C: ConcreteCategory<Object = O>>(&self, cat: &C) -> Result<DiagramInstance> {
        let nodes = self.nodes.iter().map(|n| cat.carrier(n)).collect::<Result<Vec<_>>>()?;
        let mut d = DiagramInstance::new(nodes);
        for a in &self.arrows {
            if !cat.is_morphism(&self.nodes[a.source], &self.nodes[a.target], &a.map) {
                return Err(Error::Structural(format!(
                    "arrow {}→{} is not a morphism of {}",
                    a.source,
                    a.target,
                    cat.name()
                )));
            }
            d.add_arrow(a.source, a.target, a.map.clone())?;
        }
        Ok(d)
    }
}

/// A limit object together with the node tuple of each of its elements.
#[derive(Debug, Clone, PartialEq)]
pub struct CategoricalLimit<O> {
    pub object: O,
    /// `elements[i]` is the node-indexed tuple of element `i` of the object's carrier.
    pub elements: Vec<Vec<usize>>,
    pub projections: Vec<FinMap>,
}

impl<O> CategoricalLimit<O> {
    fn build(object: O, elements: Vec<Vec<usize>>, nodes: &[FinSet]) -> Self {
        let projections = nodes
            .iter()
            .enumerate()
            .map(|(i, n)| FinMap {
                dom: FinSet::new(elements.len()),
                cod: n.clone(),
                table: elements.iter().map(|e| e[i]).collect(),
            })
            .collect();
        CategoricalLimit {
            object,
            elements,
            projections,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FinSetCat;

impl ConcreteCategory for FinSetCat {
    type Object = FinSet;

    fn name(&self) -> String {
        "FinSet".into()
    }

    fn carrier(&self, obj: &FinSet) -> Result<FinSet> {
        Ok(obj.clone())
    }

    fn hom(&self, a: &FinSet, b: &FinSet, caps: &Caps) -> Result<Vec<FinMap>> {
        finset::all_maps(a, b, caps)
    }

    fn is_morphism(&self, a: &FinSet, b: &FinSet, f: &FinMap) -> bool {
        f.dom.size == a.size && f.cod.size == b.size
    }

    fn limit(&self, diagram: &ObjectDiagram<FinSet>, caps: &Caps) -> Result<CategoricalLimit<FinSet>> {
        let d = diagram.underlying(self)?;
        let l = finset::limit(&d, caps)?;
        Ok(CategoricalLimit {
            object: l.set,
            elements: l.solutions,
            projections: l.projections,
        })
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FinGrpCat;

impl ConcreteCategory for FinGrpCat {
    type Object = GroupObject;

    fn name(&self) -> String {
        "FinGrp".into()
    }

    fn carrier(&self, obj: &GroupObject) -> Result<FinSet> {
        Ok(obj.carrier())
    }

    fn hom(&self, a: &GroupObject, b: &GroupObject, caps: &Caps) -> Result<Vec<FinMap>> {
        a.homs(b, caps)
    }

    fn is_morphism(&self, a: &GroupObject, b: &GroupObject, f: &FinMap) -> bool {
        a.is_homomorphism(b, f)
    }

    /// The set-level limit with pointwise multiplication; closure is verified.
    fn limit(&self, diagram: &ObjectDiagram<GroupObject>, caps: &Caps) -> Result<CategoricalLimit<GroupObject>> {
        let d = diagram.underlying(self)?;
        let l = finset::limit(&d, caps)?;
        let groups = &diagram.nodes;
        let identity: Vec<usize> = groups.iter().map(|g| g.identity()).collect();
        if l.index_of(&identity).is_none() {
            return Err(Error::Internal("group limit misses the identity tuple".into()));
        }
        let mut table = Vec::with_capacity(l.solutions.len());
        for a in &l.solutions {
            let mut row = Vec::with_capacity(l.solutions.len());
            for b in &l.solutions {
                let prod: Vec<usize> = groups.iter().enumerate().map(|(i, g)| g.mul(a[i], b[i])).collect();
                row.push(
                    l.index_of(&prod)
                        .ok_or_else(|| Error::Internal("group limit not closed under multiplication".into()))?,
                );
            }
            table.push(row);
        }
        let object =
            GroupObject::from_table(table).map_err(|e| Error::Internal(format!("group limit is not a group: {e}")))?;
        Ok(CategoricalLimit::build(object, l.solutions, &d.nodes))
    }
}

/// Vector spaces over one finite field; limits are solved by Gaussian elimination.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinVectCat {
    pub spaces: VectSpaces,
}

impl FinVectCat {
    pub fn new(q: usize) -> Result<Self> {
        Ok(FinVectCat {
            spaces: VectSpaces::new(q)?,
        })
    }

    pub fn q(&self) -> usize {
        self.spaces.q()
    }
}

impl ConcreteCategory for FinVectCat {
    type Object = VectObject;

    fn name(&self) -> String {
        format!("FinVect(F_{})", self.q())
    }

    fn carrier(&self, obj: &VectObject) -> Result<FinSet> {
        self.spaces.carrier(obj)
    }

    fn hom(&self, a: &VectObject, b: &VectObject, caps: &Caps) -> Result<Vec<FinMap>> {
        self.spaces.linear_maps(a, b, caps)
    }

    fn is_morphism(&self, a: &VectObject, b: &VectObject, f: &FinMap) -> bool {
        self.spaces.is_linear(a, b, f)
    }

    fn limit(&self, diagram: &ObjectDiagram<VectObject>, caps: &Caps) -> Result<CategoricalLimit<VectObject>> {
        let d = diagram.underlying(self)?;
        let field = &self.spaces.field;
        let offsets: Vec<usize> = diagram
            .nodes
            .iter()
            .scan(0, |acc, n| {
                let o = *acc;
                *acc += n.dim;
                Some(o)
            })
            .collect();
        let width: usize = diagram.nodes.iter().map(|n| n.dim).sum();
        let mut rows = Vec::new();
        for a in &diagram.arrows {
            let (s, t) = (&diagram.nodes[a.source], &diagram.nodes[a.target]);
            let m = self
                .spaces
                .matrix_of(s, t, &a.map)
                .ok_or_else(|| Error::Structural("diagram arrow is not linear".into()))?;
            for (i, mrow) in m.iter().enumerate() {
                let mut row = vec![0; width];
                for (j, &v) in mrow.iter().enumerate() {
                    row[offsets[a.source] + j] = field.add(row[offsets[a.source] + j], v);
                }
                let k = offsets[a.target] + i;
                row[k] = field.sub(row[k], 1);
                rows.push(row);
            }
        }
        let basis = field.nullspace(&rows, width);
        let object = VectObject::new(basis.len());
        let count = caps.admit(
            "vector-space limit",
            crate::caps::checked_pow(self.q() as u128, basis.len() as u128),
        )?;
        let mut elements = Vec::with_capacity(count as usize);
        for i in 0..count as usize {
            let c = self.spaces.coords(&object, i);
            let mut v = vec![0; width];
            for (coef, b) in c.iter().zip(&basis) {
                for (x, &y) in v.iter_mut().zip(b) {
                    *x = field.add(*x, field.mul(*coef, y));
                }
            }
            let tuple: Vec<usize> = diagram
                .nodes
                .iter()
                .zip(&offsets)
                .map(|(n, &o)| self.spaces.index(&v[o..o + n.dim]))
                .collect();
            if !d.is_compatible(&tuple) {
                return Err(Error::Internal("linear solution violates the diagram".into()));
            }
            elements.push(tuple);
        }
        Ok(CategoricalLimit::build(object, elements, &d.nodes))
    }
}

/// Checks the universal property of a computed limit against every cone from `apex`:
/// each cone must factor through the limit by exactly one morphism. Returns the
/// number of cones audited.
pub fn audit_universal_property<C: ConcreteCategory>(
    cat: &C,
    diagram: &ObjectDiagram<C::Object>,
    limit: &CategoricalLimit<C::Object>,
    apex: &C::Object,
    caps: &Caps,
) -> Result<usize> {
    let homs: Vec<Vec<FinMap>> = diagram
        .nodes
        .iter()
        .map(|n| cat.hom(apex, n, caps))
        .collect::<Result<_>>()?;
    let mut net = Network::new(homs.iter().map(|h| h.len()).collect());
    for a in &diagram.arrows {
        let table = homs[a.source]
            .iter()
            .map(|h| {
                let composite = a.map.after(h)?;
                homs[a.target]
                    .binary_search_by(|x| x.table.cmp(&composite.table))
                    .map_err(|_| Error::Internal("hom-set not closed under composition".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        net.add(vec![a.source], a.target, table)?;
    }
    let cones = net.solve(caps.enumeration, "cones")?;
    let mediators = cat.hom(apex, &limit.object, caps)?;
    for cone in &cones {
        let factoring = mediators
            .iter()
            .filter(|u| {
                limit
                    .projections
                    .iter()
                    .enumerate()
                    .all(|(i, p)| p.after(u).map(|c| c.table == homs[i][cone[i]].table).unwrap_or(false))
            })
            .count();
        if factoring != 1 {
            return Err(Error::Internal(format!(
                "cone {cone:?} factors through the limit {factoring} times"
            )));
        }
    }
    Ok(cones.len())
}

/// JSON descriptor of an object together with its category kind.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ObjectDescriptor {
    Finset {
        #[serde(flatten)]
        set: FinSet,
    },
    Fingrp {
        #[serde(flatten)]
        group: GroupObject,
    },
    Finvect {
        q: usize,
        dim: usize,
    },
}
