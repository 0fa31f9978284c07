use std::collections::HashMap;

use serde_json::json;

use super::Completion;
use crate::caps::Caps;
use crate::category::FinSetCat;
use crate::error::{Error, Result};
use crate::finset::{all_maps, FinMap, FinSet};
use crate::report::Check;

/// An endofunctor of finite sets with a unit `η: Id → F`, given programmatically.
pub trait CoaugmentedFunctor {
    fn name(&self) -> String;
    fn object(&self, x: &FinSet) -> Result<FinSet>;
    fn arrow(&self, g: &FinMap) -> Result<FinMap>;
    fn unit(&self, x: &FinSet) -> Result<FinMap>;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct IdentityFunctor;

impl CoaugmentedFunctor for IdentityFunctor {
    fn name(&self) -> String {
        "Id".into()
    }

    fn object(&self, x: &FinSet) -> Result<FinSet> {
        Ok(x.clone())
    }

    fn arrow(&self, g: &FinMap) -> Result<FinMap> {
        Ok(g.clone())
    }

    fn unit(&self, x: &FinSet) -> Result<FinMap> {
        Ok(FinMap::identity(x))
    }
}

impl CoaugmentedFunctor for Completion<FinSetCat> {
    fn name(&self) -> String {
        let sizes: Vec<String> = self.targets.iter().map(|d| d.size.to_string()).collect();
        format!("T_{{{}}}", sizes.join(","))
    }

    fn object(&self, x: &FinSet) -> Result<FinSet> {
        Ok(Completion::object(self, x)?.carrier())
    }

    fn arrow(&self, g: &FinMap) -> Result<FinMap> {
        self.action(&g.dom, &g.cod, g)
    }

    fn unit(&self, x: &FinSet) -> Result<FinMap> {
        Completion::unit(self, x)
    }
}

/// One universe arrow `g: X_i → X_j` and its image `F(g)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TabulatedArrow {
    pub source: usize,
    pub target: usize,
    pub map: FinMap,
    pub image: FinMap,
}

/// A coaugmented functor evaluated on every object and arrow of a finite universe.
#[derive(Debug, Clone)]
pub struct EndofunctorTable {
    pub name: String,
    pub universe: Vec<FinSet>,
    pub objects: Vec<FinSet>,
    pub units: Vec<FinMap>,
    pub arrows: Vec<TabulatedArrow>,
    index: HashMap<(usize, usize, Vec<usize>), usize>,
}

impl EndofunctorTable {
    pub fn tabulate(f: &dyn CoaugmentedFunctor, universe: &[FinSet], caps: &Caps) -> Result<Self> {
        let objects = universe.iter().map(|x| f.object(x)).collect::<Result<Vec<_>>>()?;
        let units = universe
            .iter()
            .zip(&objects)
            .map(|(x, fx)| {
                let u = f.unit(x)?;
                if u.dom.size != x.size || u.cod.size != fx.size {
                    return Err(Error::Structural(format!(
                        "unit of {} at {} has the wrong shape",
                        f.name(),
                        x.size
                    )));
                }
                Ok(u)
            })
            .collect::<Result<Vec<_>>>()?;
        let mut arrows = Vec::new();
        let mut index = HashMap::new();
        for (i, x) in universe.iter().enumerate() {
            for (j, y) in universe.iter().enumerate() {
                for g in all_maps(x, y, caps)? {
                    let image = f.arrow(&g)?;
                    if image.dom.size != objects[i].size || image.cod.size != objects[j].size {
                        return Err(Error::Structural(format!(
                            "{}({:?}) has the wrong domain or codomain",
                            f.name(),
                            g.table
                        )));
                    }
                    index.insert((i, j, g.table.clone()), arrows.len());
                    arrows.push(TabulatedArrow {
                        source: i,
                        target: j,
                        map: g,
                        image,
                    });
                }
            }
        }
        Ok(EndofunctorTable {
            name: f.name(),
            universe: universe.to_vec(),
            objects,
            units,
            arrows,
            index,
        })
    }

    /// First universe position of an object of this cardinality.
    pub fn position(&self, x: &FinSet) -> Option<usize> {
        self.universe.iter().position(|u| u.size == x.size)
    }

    pub fn image(&self, source: usize, target: usize, table: &[usize]) -> Option<&FinMap> {
        self.index
            .get(&(source, target, table.to_vec()))
            .map(|&k| &self.arrows[k].image)
    }

    /// Functoriality (identities, composites) and naturality of the unit on the universe.
    pub fn check_laws(&self) -> Vec<Check> {
        let mut checks = Vec::new();

        let bad_id = self.universe.iter().enumerate().find(|(i, x)| {
            let id = FinMap::identity(x);
            self.image(*i, *i, &id.table) != Some(&FinMap::identity(&self.objects[*i]))
        });
        checks.push(Check::from_bool(
            format!("{}(id) = id", self.name),
            bad_id.is_none(),
            format!("{} objects", self.universe.len()),
            json!({"object": bad_id.map(|(_, x)| x.size)}),
        ));

        let mut bad_comp = None;
        let mut pairs = 0usize;
        'outer: for a in &self.arrows {
            for b in self.arrows.iter().filter(|b| b.source == a.target) {
                pairs += 1;
                let ba = b.map.after(&a.map).expect("composable");
                let lhs = self.image(a.source, b.target, &ba.table);
                let rhs = b.image.after(&a.image).ok();
                if lhs != rhs.as_ref() {
                    bad_comp =
                        Some(json!({"f": a.map.table, "g": b.map.table, "object": self.universe[a.source].size}));
                    break 'outer;
                }
            }
        }
        checks.push(Check::from_bool(
            format!("{}(g∘f) = {}(g)∘{}(f)", self.name, self.name, self.name),
            bad_comp.is_none(),
            format!("{pairs} composable pairs"),
            bad_comp.unwrap_or_default(),
        ));

        let bad_nat = self.arrows.iter().find(|a| {
            let lhs = a.image.after(&self.units[a.source]).ok();
            let rhs = self.units[a.target].after(&a.map).ok();
            lhs != rhs
        });
        checks.push(Check::from_bool(
            format!("η^{} natural", self.name),
            bad_nat.is_none(),
            format!("{} arrows", self.arrows.len()),
            json!({"arrow": bad_nat.map(|a| &a.map.table)}),
        ));
        checks
    }
}
