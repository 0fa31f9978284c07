use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use serde_json::Value as Json;

use super::value::{canonical, evaluate, functional, Value};
use crate::caps::{checked_pow, Caps};
use crate::category::GroupObject;
use crate::error::{Error, Result};

/// A monad on finite sets, acting on symbolic values.
pub trait Monad: Send + Sync {
    fn name(&self) -> String;

    /// `|M(X)|` for `|X| = n`, or an upper bound on the work needed to enumerate it.
    fn size_hint(&self, n: u128) -> Option<u128>;

    /// Every element of `M(X)` for the given carrier, sorted.
    fn enumerate(&self, carrier: &[Value], caps: &Caps) -> Result<Vec<Value>>;

    /// A random element of `M(X)`, or `None` if none was found. Used when `M(X)`
    /// is too large to enumerate.
    fn sample(&self, carrier: &[Value], rng: &mut ChaCha8Rng) -> Option<Value>;

    fn unit(&self, x: &Value) -> Value;

    fn fmap(&self, f: &dyn Fn(&Value) -> Value, m: &Value) -> Value;

    fn join(&self, mm: &Value) -> Value;

    /// Whether a value of `M(X)` belongs to this monad; only restricted monads refuse.
    fn member(&self, _v: &Value) -> bool {
        true
    }
}

pub type MonadRef = Arc<dyn Monad>;

fn admit(m: &dyn Monad, n: usize, caps: &Caps) -> Result<usize> {
    caps.admit(&format!("{}({n})", m.name()), m.size_hint(n as u128))
        .map(|s| s as usize)
}

fn pick(carrier: &[Value], rng: &mut ChaCha8Rng) -> Option<Value> {
    carrier.choose(rng).cloned()
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Identity;

impl Monad for Identity {
    fn name(&self) -> String {
        "Id".into()
    }
    fn size_hint(&self, n: u128) -> Option<u128> {
        Some(n)
    }
    fn enumerate(&self, carrier: &[Value], _caps: &Caps) -> Result<Vec<Value>> {
        let mut v = carrier.to_vec();
        v.sort();
        Ok(v)
    }
    fn sample(&self, carrier: &[Value], rng: &mut ChaCha8Rng) -> Option<Value> {
        pick(carrier, rng)
    }
    fn unit(&self, x: &Value) -> Value {
        x.clone()
    }
    fn fmap(&self, f: &dyn Fn(&Value) -> Value, m: &Value) -> Value {
        f(m)
    }
    fn join(&self, mm: &Value) -> Value {
        mm.clone()
    }
}

/// `X ↦ X ⊔ {Nothing}`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Maybe;

impl Monad for Maybe {
    fn name(&self) -> String {
        "Maybe".into()
    }
    fn size_hint(&self, n: u128) -> Option<u128> {
        n.checked_add(1)
    }
    fn enumerate(&self, carrier: &[Value], _caps: &Caps) -> Result<Vec<Value>> {
        let mut v: Vec<Value> = std::iter::once(Value::Nothing)
            .chain(carrier.iter().map(|x| Value::Just(Box::new(x.clone()))))
            .collect();
        v.sort();
        Ok(v)
    }
    fn sample(&self, carrier: &[Value], rng: &mut ChaCha8Rng) -> Option<Value> {
        if carrier.is_empty() || rng.gen_ratio(1, carrier.len() as u32 + 1) {
            Some(Value::Nothing)
        } else {
            pick(carrier, rng).map(|x| Value::Just(Box::new(x)))
        }
    }
    fn unit(&self, x: &Value) -> Value {
        Value::Just(Box::new(x.clone()))
    }
    fn fmap(&self, f: &dyn Fn(&Value) -> Value, m: &Value) -> Value {
        match m {
            Value::Just(x) => Value::Just(Box::new(f(x))),
            other => other.clone(),
        }
    }
    fn join(&self, mm: &Value) -> Value {
        match mm {
            Value::Just(inner) => (**inner).clone(),
            other => other.clone(),
        }
    }
}

/// Maybe with a multiplication that always returns `Nothing`; violates the unit laws.
#[derive(Debug, Clone, Copy, Default)]
pub struct CorruptedMaybe;

impl Monad for CorruptedMaybe {
    fn name(&self) -> String {
        "CorruptedMaybe".into()
    }
    fn size_hint(&self, n: u128) -> Option<u128> {
        Maybe.size_hint(n)
    }
    fn enumerate(&self, carrier: &[Value], caps: &Caps) -> Result<Vec<Value>> {
        Maybe.enumerate(carrier, caps)
    }
    fn sample(&self, carrier: &[Value], rng: &mut ChaCha8Rng) -> Option<Value> {
        Maybe.sample(carrier, rng)
    }
    fn unit(&self, x: &Value) -> Value {
        Maybe.unit(x)
    }
    fn fmap(&self, f: &dyn Fn(&Value) -> Value, m: &Value) -> Value {
        Maybe.fmap(f, m)
    }
    fn join(&self, _mm: &Value) -> Value {
        Value::Nothing
    }
}

/// `X ↦ X × G` with `join((x, g), h) = (x, h·g)`.
#[derive(Debug, Clone)]
pub struct Writer {
    pub group: GroupObject,
}

impl Monad for Writer {
    fn name(&self) -> String {
        format!("Writer({})", self.group.display_name())
    }
    fn size_hint(&self, n: u128) -> Option<u128> {
        n.checked_mul(self.group.order() as u128)
    }
    fn enumerate(&self, carrier: &[Value], _caps: &Caps) -> Result<Vec<Value>> {
        let mut v: Vec<Value> = carrier
            .iter()
            .flat_map(|x| (0..self.group.order() as u32).map(move |g| Value::Pair(Box::new(x.clone()), g)))
            .collect();
        v.sort();
        Ok(v)
    }
    fn sample(&self, carrier: &[Value], rng: &mut ChaCha8Rng) -> Option<Value> {
        let g = rng.gen_range(0..self.group.order()) as u32;
        pick(carrier, rng).map(|x| Value::Pair(Box::new(x), g))
    }
    fn unit(&self, x: &Value) -> Value {
        Value::Pair(Box::new(x.clone()), self.group.identity() as u32)
    }
    fn fmap(&self, f: &dyn Fn(&Value) -> Value, m: &Value) -> Value {
        match m {
            Value::Pair(x, g) => Value::Pair(Box::new(f(x)), *g),
            other => other.clone(),
        }
    }
    fn join(&self, mm: &Value) -> Value {
        match mm {
            Value::Pair(inner, h) => match &**inner {
                Value::Pair(x, g) => Value::Pair(x.clone(), self.group.mul(*h as usize, *g as usize) as u32),
                other => other.clone(),
            },
            other => other.clone(),
        }
    }
}

/// The full (`nonempty = false`) or nonempty powerset monad.
#[derive(Debug, Clone, Copy, Default)]
pub struct Powerset {
    pub nonempty: bool,
}

impl Monad for Powerset {
    fn name(&self) -> String {
        if self.nonempty { "P⁺" } else { "P" }.into()
    }
    fn size_hint(&self, n: u128) -> Option<u128> {
        let all = checked_pow(2, n)?;
        Some(if self.nonempty { all - 1 } else { all })
    }
    fn enumerate(&self, carrier: &[Value], caps: &Caps) -> Result<Vec<Value>> {
        admit(self, carrier.len(), caps)?;
        let start = usize::from(self.nonempty);
        let mut v: Vec<Value> = (start..1usize << carrier.len())
            .map(|mask| {
                Value::set(
                    carrier
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| mask >> i & 1 == 1)
                        .map(|(_, x)| x.clone())
                        .collect(),
                )
            })
            .collect();
        v.sort();
        Ok(v)
    }
    fn sample(&self, carrier: &[Value], rng: &mut ChaCha8Rng) -> Option<Value> {
        // small random subsets keep nested joins cheap
        let low = usize::from(self.nonempty);
        if carrier.len() < low {
            return None;
        }
        let size = rng.gen_range(low..=3.min(carrier.len()).max(low));
        Some(Value::set(carrier.choose_multiple(rng, size).cloned().collect()))
    }
    fn unit(&self, x: &Value) -> Value {
        Value::Set(vec![x.clone()])
    }
    fn fmap(&self, f: &dyn Fn(&Value) -> Value, m: &Value) -> Value {
        match m {
            Value::Set(xs) => Value::set(xs.iter().map(f).collect()),
            other => other.clone(),
        }
    }
    fn join(&self, mm: &Value) -> Value {
        match mm {
            Value::Set(xs) => Value::set(
                xs.iter()
                    .flat_map(|x| match x {
                        Value::Set(inner) => inner.clone(),
                        other => vec![other.clone()],
                    })
                    .collect(),
            ),
            other => other.clone(),
        }
    }
}

/// The continuation monad `X ↦ d^{d^X}` with elements stored as canonical functionals.
#[derive(Debug, Clone, Copy)]
pub struct DoubleDual {
    pub d: usize,
}

impl DoubleDual {
    pub fn new(d: usize) -> Result<Self> {
        if !(2..=3).contains(&d) {
            return Err(Error::InvalidInput(format!(
                "double dual is provided for d ∈ {{2, 3}}, got {d}"
            )));
        }
        Ok(DoubleDual { d })
    }

    /// `Φ(k)` for `k` given on the points of `Φ`'s support.
    pub fn eval(&self, phi: &Value, k: impl Fn(&Value) -> u8) -> u8 {
        match phi {
            Value::Functional { support, table } => evaluate(self.d, support, table, k),
            _ => 0,
        }
    }

    /// The functional `k ↦ k(x)`.
    pub fn point(&self, x: &Value) -> Value {
        Value::Functional {
            support: vec![x.clone()],
            table: (0..self.d as u8).collect(),
        }
    }
}

impl Monad for DoubleDual {
    fn name(&self) -> String {
        format!("DD{}", self.d)
    }
    fn size_hint(&self, n: u128) -> Option<u128> {
        checked_pow(self.d as u128, checked_pow(self.d as u128, n)?)
    }
    fn enumerate(&self, carrier: &[Value], caps: &Caps) -> Result<Vec<Value>> {
        let total = admit(self, carrier.len(), caps)?;
        let width = self.d.pow(carrier.len() as u32);
        let mut support = carrier.to_vec();
        support.sort();
        let mut table = vec![0u8; width];
        let mut v = Vec::with_capacity(total);
        for _ in 0..total {
            v.push(canonical(self.d, support.clone(), table.clone()));
            for t in table.iter_mut() {
                *t += 1;
                if (*t as usize) < self.d {
                    break;
                }
                *t = 0;
            }
        }
        v.sort();
        Ok(v)
    }
    fn sample(&self, carrier: &[Value], rng: &mut ChaCha8Rng) -> Option<Value> {
        let size = rng.gen_range(0..=2.min(carrier.len()));
        let support: Vec<Value> = carrier.choose_multiple(rng, size).cloned().collect();
        let width = self.d.pow(support.len() as u32);
        let table: Vec<u8> = (0..width).map(|_| rng.gen_range(0..self.d) as u8).collect();
        let mut sorted = support.clone();
        sorted.sort();
        // `table` is read against the sorted support
        Some(canonical(self.d, sorted, table))
    }
    fn unit(&self, x: &Value) -> Value {
        self.point(x)
    }
    fn fmap(&self, f: &dyn Fn(&Value) -> Value, m: &Value) -> Value {
        let Value::Functional { support, table } = m else {
            return m.clone();
        };
        let images: Vec<Value> = support.iter().map(f).collect();
        let mut points = images.clone();
        points.sort();
        points.dedup();
        let slots: Vec<usize> = images
            .iter()
            .map(|y| points.binary_search(y).expect("image point"))
            .collect();
        functional(self.d, points, |k| {
            let idx = slots.iter().rev().fold(0usize, |acc, &s| acc * self.d + k[s] as usize);
            table[idx]
        })
        .expect("image support is no larger than the source support")
    }
    fn join(&self, mm: &Value) -> Value {
        let Value::Functional { support, table } = mm else {
            return mm.clone();
        };
        let mut points: Vec<Value> = support
            .iter()
            .flat_map(|psi| match psi {
                Value::Functional { support, .. } => support.clone(),
                _ => Vec::new(),
            })
            .collect();
        points.sort();
        points.dedup();
        let d = self.d;
        let result = functional(d, points.clone(), |k| {
            let at = |x: &Value| k[points.binary_search(x).expect("support point")];
            let idx = support
                .iter()
                .rev()
                .fold(0usize, |acc, psi| acc * d + self.eval(psi, at) as usize);
            table[idx]
        });
        result.unwrap_or_else(|_| mm.clone())
    }
}

/// `X ↦ 1`.
#[derive(Debug, Clone, Copy, Default)]
pub struct ConstantOne;

impl Monad for ConstantOne {
    fn name(&self) -> String {
        "Const1".into()
    }
    fn size_hint(&self, _n: u128) -> Option<u128> {
        Some(1)
    }
    fn enumerate(&self, _carrier: &[Value], _caps: &Caps) -> Result<Vec<Value>> {
        Ok(vec![Value::Unit])
    }
    fn sample(&self, _carrier: &[Value], _rng: &mut ChaCha8Rng) -> Option<Value> {
        Some(Value::Unit)
    }
    fn unit(&self, _x: &Value) -> Value {
        Value::Unit
    }
    fn fmap(&self, _f: &dyn Fn(&Value) -> Value, _m: &Value) -> Value {
        Value::Unit
    }
    fn join(&self, _mm: &Value) -> Value {
        Value::Unit
    }
}

/// The builtins checked by default.
pub fn standard_builtins() -> Vec<MonadRef> {
    vec![
        Arc::new(Identity),
        Arc::new(Maybe),
        Arc::new(Writer {
            group: GroupObject::cyclic(2).expect("C2"),
        }),
        Arc::new(Powerset { nonempty: false }),
        Arc::new(Powerset { nonempty: true }),
        Arc::new(DoubleDual { d: 2 }),
        Arc::new(DoubleDual { d: 3 }),
        Arc::new(ConstantOne),
    ]
}

#[derive(Debug, Deserialize)]
struct Descriptor {
    builtin: String,
    #[serde(default)]
    params: Json,
}

/// A builtin by name (`maybe`, `writer-c2`, `dd2`, …) or by JSON
/// `{"builtin": "...", "params": {...}}`.
pub fn builtin(spec: &str) -> Result<MonadRef> {
    let spec = spec.trim();
    if spec.starts_with('{') {
        let desc: Descriptor =
            serde_json::from_str(spec).map_err(|e| Error::InvalidInput(format!("monad descriptor: {e}")))?;
        return from_descriptor(&desc.builtin, &desc.params);
    }
    from_descriptor(spec, &Json::Null)
}

fn from_descriptor(name: &str, params: &Json) -> Result<MonadRef> {
    let lower = name.to_ascii_lowercase();
    let monad: MonadRef = match lower.as_str() {
        "id" | "identity" => Arc::new(Identity),
        "maybe" => Arc::new(Maybe),
        "corrupted-maybe" | "corrupted" => Arc::new(CorruptedMaybe),
        "powerset" | "p" => Arc::new(Powerset { nonempty: false }),
        "nonempty-powerset" | "p+" => Arc::new(Powerset { nonempty: true }),
        "const1" | "constant-1" | "constant" => Arc::new(ConstantOne),
        "writer" => {
            let group = params.get("group").and_then(Json::as_str).unwrap_or("C2");
            Arc::new(Writer {
                group: GroupObject::by_name(group)?,
            })
        }
        "dd" | "double-dual" | "continuation" => {
            let d = params.get("d").and_then(Json::as_u64).unwrap_or(2) as usize;
            Arc::new(DoubleDual::new(d)?)
        }
        other => {
            if let Some(group) = other.strip_prefix("writer-") {
                Arc::new(Writer {
                    group: GroupObject::by_name(&group.to_ascii_uppercase())?,
                })
            } else if let Some(d) = other.strip_prefix("dd") {
                let d: usize = d
                    .parse()
                    .map_err(|_| Error::InvalidInput(format!("unknown monad {name:?}")))?;
                Arc::new(DoubleDual::new(d)?)
            } else {
                return Err(Error::InvalidInput(format!("unknown monad {name:?}")));
            }
        }
    };
    Ok(monad)
}
