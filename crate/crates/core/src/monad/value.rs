use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Largest truth table a functional may carry after joins and maps.
pub const FUNCTIONAL_TABLE_CAP: usize = 1 << 20;

/// A symbolic element of an iterated monad application `M(M(…X))`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Value {
    /// Element `i` of a base set.
    Atom(u32),
    /// An element of a limit, as its components.
    Tuple(Vec<Value>),
    /// The point of the constant monad.
    Unit,
    Nothing,
    Just(Box<Value>),
    /// `(x, g)` with `g` a group element.
    Pair(Box<Value>, u32),
    /// A finite set of values, sorted and duplicate-free.
    Set(Vec<Value>),
    /// A functional `(X → d) → d` that only reads the listed support points.
    /// Entry `Σ k(sᵢ)·dⁱ` of `table` is its value at `k`. Canonical: support sorted,
    /// every support point essential.
    Functional {
        support: Vec<Value>,
        table: Vec<u8>,
    },
}

impl Value {
    pub fn set(mut items: Vec<Value>) -> Value {
        items.sort();
        items.dedup();
        Value::Set(items)
    }

    pub fn atoms(n: usize) -> Vec<Value> {
        (0..n as u32).map(Value::Atom).collect()
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Atom(i) => write!(f, "{i}"),
            Value::Tuple(xs) => {
                write!(f, "(")?;
                for (k, x) in xs.iter().enumerate() {
                    if k > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, ")")
            }
            Value::Unit => write!(f, "*"),
            Value::Nothing => write!(f, "Nothing"),
            Value::Just(x) => write!(f, "Just {x}"),
            Value::Pair(x, g) => write!(f, "({x}, g{g})"),
            Value::Set(xs) => {
                write!(f, "{{")?;
                for (k, x) in xs.iter().enumerate() {
                    if k > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, "}}")
            }
            Value::Functional { support, table } => {
                write!(f, "λ[")?;
                for (k, x) in support.iter().enumerate() {
                    if k > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, "]{table:?}")
            }
        }
    }
}

/// Builds the canonical functional over `support` from its value at every
/// assignment `support → d`. The support is sorted and deduplicated first, and
/// `eval` receives one digit per point in that order.
pub fn functional(d: usize, support: Vec<Value>, eval: impl Fn(&[u8]) -> u8) -> Result<Value> {
    let mut points = support;
    points.sort();
    points.dedup();
    let size = table_size(d, points.len())?;
    let mut k = vec![0u8; points.len()];
    let mut table = Vec::with_capacity(size);
    for _ in 0..size {
        table.push(eval(&k));
        for digit in k.iter_mut() {
            *digit += 1;
            if (*digit as usize) < d {
                break;
            }
            *digit = 0;
        }
    }
    Ok(canonical(d, points, table))
}

fn table_size(d: usize, len: usize) -> Result<usize> {
    (d as u128)
        .checked_pow(len as u32)
        .filter(|&n| n <= FUNCTIONAL_TABLE_CAP as u128)
        .map(|n| n as usize)
        .ok_or_else(|| {
            Error::too_large(
                "functional truth table",
                format!("{d}^{len}"),
                FUNCTIONAL_TABLE_CAP as u128,
            )
        })
}

/// Drops inessential support points.
pub fn canonical(d: usize, mut support: Vec<Value>, mut table: Vec<u8>) -> Value {
    let mut i = 0;
    while i < support.len() {
        let stride = d.pow(i as u32);
        let essential = (0..table.len()).any(|idx| {
            let digit = idx / stride % d;
            digit + 1 < d && table[idx] != table[idx + stride]
        });
        if essential {
            i += 1;
            continue;
        }
        table = (0..table.len() / d)
            .map(|r| {
                let low = r % stride;
                let high = r / stride;
                table[high * stride * d + low]
            })
            .collect();
        support.remove(i);
    }
    Value::Functional { support, table }
}

/// Evaluates a functional at `k`, given as a function on its support points.
pub fn evaluate(d: usize, support: &[Value], table: &[u8], k: impl Fn(&Value) -> u8) -> u8 {
    let idx = support.iter().rev().fold(0usize, |acc, s| acc * d + k(s) as usize);
    table[idx]
}
