//! Canonical finite sets, total maps, indexed powers and equalizers.
//!
//! Every element is an integer `0..size`; all enumerations are emitted in
//! lexicographic order so that downstream computations are deterministic.

mod diagram;
pub mod solver;

pub use diagram::{limit, sample_limit, DiagramArrow, DiagramInstance, Limit};

use serde::{Deserialize, Serialize};

use crate::caps::{checked_pow, Caps};
use crate::error::{Error, Result};

/// A finite set `{0, .., size-1}` with optional display labels.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawFinSet")]
pub struct FinSet {
    pub size: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

#[derive(Deserialize)]
struct RawFinSet {
    size: usize,
    #[serde(default)]
    labels: Option<Vec<String>>,
}

impl TryFrom<RawFinSet> for FinSet {
    type Error = Error;

    fn try_from(raw: RawFinSet) -> Result<Self> {
        match raw.labels {
            Some(labels) => FinSet::labelled(labels).and_then(|s| {
                if s.size == raw.size {
                    Ok(s)
                } else {
                    Err(Error::InvalidInput(format!(
                        "label count {} differs from size {}",
                        s.size, raw.size
                    )))
                }
            }),
            None => Ok(FinSet::new(raw.size)),
        }
    }
}

impl FinSet {
    pub fn new(size: usize) -> Self {
        FinSet { size, labels: None }
    }

    pub fn labelled(labels: Vec<String>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(Error::InvalidInput(format!("duplicate label {l:?}")));
            }
        }
        Ok(FinSet {
            size: labels.len(),
            labels: Some(labels),
        })
    }

    pub fn empty() -> Self {
        FinSet::new(0)
    }

    pub fn terminal() -> Self {
        FinSet::new(1)
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.size
    }

    pub fn label(&self, x: usize) -> String {
        match &self.labels {
            Some(l) => l[x].clone(),
            None => x.to_string(),
        }
    }
}

/// A total function between finite sets, stored as its value table.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawFinMap")]
pub struct FinMap {
    pub dom: FinSet,
    pub cod: FinSet,
    pub table: Vec<usize>,
}

#[derive(Deserialize)]
struct RawFinMap {
    dom: FinSet,
    cod: FinSet,
    table: Vec<usize>,
}

impl TryFrom<RawFinMap> for FinMap {
    type Error = Error;

    fn try_from(raw: RawFinMap) -> Result<Self> {
        FinMap::new(raw.dom, raw.cod, raw.table)
    }
}

impl FinMap {
    pub fn new(dom: FinSet, cod: FinSet, table: Vec<usize>) -> Result<Self> {
        if table.len() != dom.size {
            return Err(Error::Structural(format!(
                "table has {} entries for a domain of size {}",
                table.len(),
                dom.size
            )));
        }
        if let Some(bad) = table.iter().find(|&&y| y >= cod.size) {
            return Err(Error::Structural(format!(
                "value {bad} outside codomain of size {}",
                cod.size
            )));
        }
        Ok(FinMap { dom, cod, table })
    }

    /// Builds a map between unlabelled sets; panics on an out-of-range table.
    pub fn from_table(dom: usize, cod: usize, table: Vec<usize>) -> Self {
        FinMap::new(FinSet::new(dom), FinSet::new(cod), table).expect("well-formed map table")
    }

    pub fn identity(set: &FinSet) -> Self {
        FinMap {
            dom: set.clone(),
            cod: set.clone(),
            table: set.elements().collect(),
        }
    }

    pub fn constant(dom: &FinSet, cod: &FinSet, value: usize) -> Result<Self> {
        FinMap::new(dom.clone(), cod.clone(), vec![value; dom.size])
    }

    pub fn apply(&self, x: usize) -> usize {
        self.table[x]
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn after(&self, first: &FinMap) -> Result<FinMap> {
        if first.cod.size != self.dom.size {
            return Err(Error::Structural(format!(
                "cannot compose: codomain {} vs domain {}",
                first.cod.size, self.dom.size
            )));
        }
        Ok(FinMap {
            dom: first.dom.clone(),
            cod: self.cod.clone(),
            table: first.table.iter().map(|&x| self.table[x]).collect(),
        })
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.cod.size];
        self.table.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.cod.size];
        for &y in &self.table {
            hit[y] = true;
        }
        hit.into_iter().all(|h| h)
    }

    pub fn is_bijective(&self) -> bool {
        self.dom.size == self.cod.size && self.is_injective()
    }

    pub fn inverse(&self) -> Option<FinMap> {
        if !self.is_bijective() {
            return None;
        }
        let mut table = vec![0; self.dom.size];
        for (x, &y) in self.table.iter().enumerate() {
            table[y] = x;
        }
        Some(FinMap {
            dom: self.cod.clone(),
            cod: self.dom.clone(),
            table,
        })
    }

    /// Position of this map in the lexicographic enumeration of all maps `dom → cod`.
    pub fn lex_rank(&self) -> u128 {
        lex_rank(&self.table, self.cod.size)
    }
}

/// Rank of a value table among all tables of the same length over `radix` symbols,
/// first entry most significant.
pub fn lex_rank(table: &[usize], radix: usize) -> u128 {
    table.iter().fold(0u128, |acc, &v| acc * radix as u128 + v as u128)
}

/// Inverse of [`lex_rank`].
pub fn lex_unrank(mut rank: u128, len: usize, radix: usize) -> Vec<usize> {
    let mut table = vec![0; len];
    for slot in table.iter_mut().rev() {
        *slot = (rank % radix as u128) as usize;
        rank /= radix as u128;
    }
    table
}

/// Number of maps `dom → cod`, `None` on overflow.
pub fn hom_count(dom: usize, cod: usize) -> Option<u128> {
    checked_pow(cod as u128, dom as u128)
}

/// All maps `dom → cod` in lexicographic order of their tables.
pub fn all_maps(dom: &FinSet, cod: &FinSet, caps: &Caps) -> Result<Vec<FinMap>> {
    let count = caps.admit(
        &format!("maps {}→{}", dom.size, cod.size),
        hom_count(dom.size, cod.size),
    )?;
    Ok((0..count)
        .map(|r| FinMap {
            dom: dom.clone(),
            cod: cod.clone(),
            table: lex_unrank(r, dom.size, cod.size),
        })
        .collect())
}

/// The product of a family of finite sets, with tuples ranked lexicographically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexedProduct {
    pub factors: Vec<usize>,
    cardinality: usize,
}

impl IndexedProduct {
    pub fn new(factors: Vec<usize>, caps: &Caps) -> Result<Self> {
        let card = factors.iter().try_fold(1u128, |acc, &f| acc.checked_mul(f as u128));
        let card = caps.admit(&format!("product of {} factors", factors.len()), card)?;
        Ok(IndexedProduct {
            factors,
            cardinality: card as usize,
        })
    }

    pub fn cardinality(&self) -> usize {
        self.cardinality
    }

    pub fn as_set(&self) -> FinSet {
        FinSet::new(self.cardinality)
    }

    pub fn arity(&self) -> usize {
        self.factors.len()
    }

    pub fn encode(&self, tuple: &[usize]) -> usize {
        debug_assert_eq!(tuple.len(), self.factors.len());
        tuple
            .iter()
            .zip(&self.factors)
            .fold(0usize, |acc, (&t, &f)| acc * f + t)
    }

    pub fn decode(&self, mut index: usize) -> Vec<usize> {
        let mut tuple = vec![0; self.factors.len()];
        for (slot, &f) in tuple.iter_mut().zip(&self.factors).rev() {
            *slot = index % f;
            index /= f;
        }
        tuple
    }

    pub fn tuples(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        (0..self.cardinality).map(|i| self.decode(i))
    }

    /// The projection onto factor `s`.
    pub fn projection(&self, s: usize) -> FinMap {
        FinMap::from_table(
            self.cardinality,
            self.factors[s],
            (0..self.cardinality).map(|i| self.decode(i)[s]).collect(),
        )
    }

    /// The tuple with components given by maps `dom → factor_s`.
    pub fn pairing(&self, components: &[FinMap]) -> Result<FinMap> {
        if components.len() != self.factors.len() {
            return Err(Error::Structural("pairing arity mismatch".into()));
        }
        let dom = components.first().map(|m| m.dom.size).unwrap_or(0);
        let mut table = Vec::with_capacity(dom);
        for x in 0..dom {
            let t: Vec<usize> = components.iter().map(|m| m.apply(x)).collect();
            table.push(self.encode(&t));
        }
        Ok(FinMap::from_table(dom, self.cardinality, table))
    }
}

/// `c^S`: the product of `|S|` copies of `c`.
pub fn power(c: &FinSet, index: &FinSet, caps: &Caps) -> Result<IndexedProduct> {
    IndexedProduct::new(vec![c.size; index.size], caps)
}

/// Contravariant reindexing `c^{S'} → c^S`, `t ↦ t ∘ f` for `f: S → S'`.
pub fn reindex(c: &FinSet, f: &FinMap, caps: &Caps) -> Result<FinMap> {
    let source = power(c, &f.cod, caps)?;
    let target = power(c, &f.dom, caps)?;
    let table = source
        .tuples()
        .map(|t| {
            let pulled: Vec<usize> = f.table.iter().map(|&s| t[s]).collect();
            target.encode(&pulled)
        })
        .collect();
    FinMap::new(source.as_set(), target.as_set(), table)
}

/// `{x | f(x) = g(x)}` with its inclusion into the common domain.
pub fn equalizer(f: &FinMap, g: &FinMap) -> Result<(FinSet, FinMap)> {
    if f.dom.size != g.dom.size || f.cod.size != g.cod.size {
        return Err(Error::Structural(
            "equalizer of maps with different domain or codomain".into(),
        ));
    }
    let kept: Vec<usize> = f.dom.elements().filter(|&x| f.apply(x) == g.apply(x)).collect();
    let sub = FinSet::new(kept.len());
    let inclusion = FinMap::new(sub.clone(), f.dom.clone(), kept)?;
    Ok((sub, inclusion))
}

/// Some `r: b → a` with `r ∘ section = id`, or `None` when none exists.
pub fn find_retraction(a: &FinSet, b: &FinSet, section: &FinMap) -> Result<Option<FinMap>> {
    if section.dom.size != a.size || section.cod.size != b.size {
        return Err(Error::Structural("section does not map a → b".into()));
    }
    if !section.is_injective() {
        return Ok(None);
    }
    if a.is_empty() {
        return Ok(if b.is_empty() { Some(FinMap::identity(a)) } else { None });
    }
    let mut table = vec![0; b.size];
    for (x, &y) in section.table.iter().enumerate() {
        table[y] = x;
    }
    Ok(Some(FinMap::new(b.clone(), a.clone(), table)?))
}
