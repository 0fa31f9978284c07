use std::collections::HashMap;

use super::{ConcreteCategory, ObjectDiagram};
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::finset::FinMap;

/// An object `(d, f: c → d)` of the comma category `c ↓ D`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommaObject {
    /// Index of `d` in the target list.
    pub target: usize,
    pub map: FinMap,
}

/// A morphism `α: (d₁, f) → (d₂, α ∘ f)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CommaArrow {
    pub source: usize,
    pub target: usize,
    /// `α` is `homs_between(d1, d2)[alpha]`.
    pub d1: usize,
    pub d2: usize,
    pub alpha: usize,
}

/// The comma category `c ↓ D` of a base object over a finite full subcategory.
#[derive(Debug, Clone)]
pub struct CommaCategory<O> {
    pub base: O,
    pub targets: Vec<O>,
    pub objects: Vec<CommaObject>,
    pub arrows: Vec<CommaArrow>,
    /// `between[d1][d2]` lists `hom(d₁, d₂)`.
    between: Vec<Vec<Vec<FinMap>>>,
    index: HashMap<(usize, Vec<usize>), usize>,
}

/// Builds `c ↓ D`. Objects are ordered by target index, then by map table.
pub fn comma<C: ConcreteCategory>(
    cat: &C,
    c: &C::Object,
    targets: &[C::Object],
    caps: &Caps,
) -> Result<CommaCategory<C::Object>> {
    if targets.is_empty() {
        return Err(Error::Precondition("the subcategory D must be nonempty".into()));
    }
    let mut objects = Vec::new();
    for (i, d) in targets.iter().enumerate() {
        for f in cat.hom(c, d, caps)? {
            objects.push(CommaObject { target: i, map: f });
        }
    }
    let index: HashMap<(usize, Vec<usize>), usize> = objects
        .iter()
        .enumerate()
        .map(|(k, o)| ((o.target, o.map.table.clone()), k))
        .collect();
    let between: Vec<Vec<Vec<FinMap>>> = targets
        .iter()
        .map(|d1| targets.iter().map(|d2| cat.hom(d1, d2, caps)).collect())
        .collect::<Result<_>>()?;
    let arrow_count: u128 = objects
        .iter()
        .map(|o| between[o.target].iter().map(|h| h.len() as u128).sum::<u128>())
        .sum();
    caps.admit("comma-category arrows", Some(arrow_count))?;
    let mut arrows = Vec::with_capacity(arrow_count as usize);
    for (src, o) in objects.iter().enumerate() {
        for (d2, homs) in between[o.target].iter().enumerate() {
            for (a, alpha) in homs.iter().enumerate() {
                let composite = alpha.after(&o.map)?;
                let tgt = *index
                    .get(&(d2, composite.table))
                    .ok_or_else(|| Error::Internal("hom-set not closed under composition".into()))?;
                arrows.push(CommaArrow {
                    source: src,
                    target: tgt,
                    d1: o.target,
                    d2,
                    alpha: a,
                });
            }
        }
    }
    Ok(CommaCategory {
        base: c.clone(),
        targets: targets.to_vec(),
        objects,
        arrows,
        between,
        index,
    })
}

impl<O: Clone> CommaCategory<O> {
    pub fn index_of(&self, target: usize, table: &[usize]) -> Option<usize> {
        self.index.get(&(target, table.to_vec())).copied()
    }

    pub fn homs_between(&self, d1: usize, d2: usize) -> &[FinMap] {
        &self.between[d1][d2]
    }

    pub fn alpha(&self, arrow: &CommaArrow) -> &FinMap {
        &self.between[arrow.d1][arrow.d2][arrow.alpha]
    }

    /// The projection diagram `c ↓ D → D`.
    pub fn projection_diagram(&self) -> ObjectDiagram<O> {
        let mut d = ObjectDiagram::new(self.objects.iter().map(|o| self.targets[o.target].clone()).collect());
        for a in &self.arrows {
            d.add_arrow(a.source, a.target, self.alpha(a).clone());
        }
        d
    }

    /// Checks that identities are present and composites of arrows are arrows.
    pub fn check_category_axioms(&self) -> Result<()> {
        let mut by_source: HashMap<usize, Vec<&CommaArrow>> = HashMap::new();
        for a in &self.arrows {
            by_source.entry(a.source).or_default().push(a);
        }
        for (k, o) in self.objects.iter().enumerate() {
            let has_identity = by_source.get(&k).is_some_and(|out| {
                out.iter().any(|a| {
                    a.target == k && {
                        let alpha = self.alpha(a);
                        alpha.table.iter().enumerate().all(|(x, &y)| x == y)
                            && alpha.dom.size == alpha.cod.size
                            && a.d2 == o.target
                    }
                })
            });
            if !has_identity {
                return Err(Error::Internal(format!("comma object {k} lacks an identity")));
            }
        }
        for a in &self.arrows {
            for b in by_source.get(&a.target).into_iter().flatten() {
                let composite = self.alpha(b).after(self.alpha(a))?;
                let present = self.between[a.d1][b.d2]
                    .binary_search_by(|h| h.table.cmp(&composite.table))
                    .is_ok();
                if !present {
                    return Err(Error::Internal("comma arrows not closed under composition".into()));
                }
            }
        }
        Ok(())
    }
}
