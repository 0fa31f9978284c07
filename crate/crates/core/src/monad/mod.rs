//! Monads on finite sets, the terminal monad `T_M` as the equalizer of
//! `M(η), η_M: M ⇉ M²`, and the completion tower.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::caps::Caps;
use crate::error::Result;
use crate::finset::{all_maps, FinMap, FinSet};

pub mod builtins;
pub mod laws;
pub mod terminal;
pub mod value;

pub use builtins::{
    builtin, standard_builtins, ConstantOne, CorruptedMaybe, DoubleDual, Identity, Maybe, Monad, MonadRef, Powerset,
    Writer,
};
pub use laws::{algebra_from_morphism, check_monad_laws, check_monad_morphism};
pub use terminal::{
    assembly_retract, expected_identification, terminal_monad, tower, ultrafilter_terminal_note, verify_terminal_monad,
    Expected, MonadFunctor, RetractDiagram, RetractNode, TerminalReport, TowerReport,
};
pub use value::Value;

/// Quantifier domains larger than this are sampled rather than enumerated.
pub const LAW_DOMAIN_CAP: u128 = 1 << 17;

/// A finite full subcategory of FinSet: objects by size, all maps between them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Universe {
    pub sizes: Vec<usize>,
}

impl Default for Universe {
    fn default() -> Self {
        Universe {
            sizes: vec![0, 1, 2, 3],
        }
    }
}

impl Universe {
    pub fn new(sizes: Vec<usize>) -> Self {
        Universe { sizes }
    }

    /// Every map between universe objects, as `(source size, target size, map)`.
    pub fn arrows(&self, caps: &Caps) -> Result<Vec<FinMap>> {
        let mut out = Vec::new();
        for &a in &self.sizes {
            for &b in &self.sizes {
                out.extend(all_maps(&FinSet::new(a), &FinSet::new(b), caps)?);
            }
        }
        Ok(out)
    }
}

/// `g` acting on atoms.
pub fn apply_map(g: &FinMap, v: &Value) -> Value {
    match v {
        Value::Atom(i) => Value::Atom(g.apply(*i as usize) as u32),
        other => other.clone(),
    }
}

/// `M(η_X)(m) = η_{M X}(m)`.
pub fn equalizes(m: &dyn Monad, v: &Value) -> bool {
    m.fmap(&|x| m.unit(x), v) == m.unit(v)
}

/// A quantifier domain: all of `M(carrier)` or a seeded sample of it.
#[derive(Debug, Clone)]
pub struct Domain {
    pub values: Vec<Value>,
    pub exhaustive: bool,
}

impl Domain {
    pub fn base(carrier: Vec<Value>) -> Self {
        Domain {
            values: carrier,
            exhaustive: true,
        }
    }

    /// `M` applied to this domain.
    pub fn lift(&self, m: &dyn Monad, caps: &Caps, rng: &mut ChaCha8Rng) -> Domain {
        let cap = caps.enumeration.min(LAW_DOMAIN_CAP);
        let fits = m.size_hint(self.values.len() as u128).is_some_and(|s| s <= cap);
        if self.exhaustive && fits {
            if let Ok(values) = m.enumerate(&self.values, caps) {
                let values = values.into_iter().filter(|v| m.member(v)).collect();
                return Domain {
                    values,
                    exhaustive: true,
                };
            }
        }
        let mut values: Vec<Value> = (0..caps.samples).filter_map(|_| m.sample(&self.values, rng)).collect();
        values.sort();
        values.dedup();
        Domain {
            values,
            exhaustive: false,
        }
    }
}

/// `M^depth` of an `n`-element set.
pub fn domain(m: &dyn Monad, n: usize, depth: usize, caps: &Caps, rng: &mut ChaCha8Rng) -> Domain {
    let mut d = Domain::base(Value::atoms(n));
    for _ in 0..depth {
        d = d.lift(m, caps, rng);
    }
    d
}

/// The seeded generator for one named quantifier.
pub fn rng_for(caps: &Caps, salt: &str) -> ChaCha8Rng {
    let mix = salt.bytes().fold(caps.seed, |acc, b| acc.rotate_left(5) ^ u64::from(b));
    ChaCha8Rng::seed_from_u64(mix)
}

/// `M` cut down to the elements that equalize `M(η)` and `η_M`; operations are the parent's.
pub struct Restricted {
    pub parent: MonadRef,
    name: String,
}

impl Restricted {
    pub fn new(parent: MonadRef) -> Self {
        let name = format!("T_{{{}}}", parent.name());
        Restricted { parent, name }
    }
}

impl Monad for Restricted {
    fn name(&self) -> String {
        self.name.clone()
    }

    /// The parent's size, an upper bound.
    fn size_hint(&self, n: u128) -> Option<u128> {
        self.parent.size_hint(n)
    }

    fn enumerate(&self, carrier: &[Value], caps: &Caps) -> Result<Vec<Value>> {
        Ok(self
            .parent
            .enumerate(carrier, caps)?
            .into_iter()
            .filter(|v| self.member(v))
            .collect())
    }

    fn sample(&self, carrier: &[Value], rng: &mut ChaCha8Rng) -> Option<Value> {
        for _ in 0..64 {
            if let Some(v) = self.parent.sample(carrier, rng) {
                if self.member(&v) {
                    return Some(v);
                }
            }
        }
        use rand::seq::SliceRandom;
        carrier.choose(rng).map(|x| self.unit(x))
    }

    fn unit(&self, x: &Value) -> Value {
        self.parent.unit(x)
    }

    fn fmap(&self, f: &dyn Fn(&Value) -> Value, m: &Value) -> Value {
        self.parent.fmap(f, m)
    }

    fn join(&self, mm: &Value) -> Value {
        self.parent.join(mm)
    }

    fn member(&self, v: &Value) -> bool {
        self.parent.member(v) && equalizes(self.parent.as_ref(), v)
    }
}

pub fn restrict(m: MonadRef) -> MonadRef {
    Arc::new(Restricted::new(m))
}
