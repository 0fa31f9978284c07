//! Hom-objects over monoid and operad actions, the endomorphism operad of a
//! finite set, and the structured double duals of groups and vector spaces.

use serde::Serialize;
use serde_json::json;

use crate::caps::{checked_pow, Caps};
use crate::error::{Error, Result};
use crate::finset::{lex_rank, lex_unrank, solver::Network, FinMap};
use crate::report::Check;

pub mod groups;
pub mod powers;
pub mod vect;

pub use groups::{group_double_dual, GroupDoubleDual};
pub use powers::{equalizer_lemma, verify_powers_theorem, PowersReport};
pub use vect::{vect_double_dual_experiment, VectExperiment};

/// A finite monoid acting on a set `X` and on an object `c`, both by maps.
#[derive(Debug, Clone)]
pub struct MonoidAction {
    /// `mul[a][b] = a·b`.
    pub mul: Vec<Vec<usize>>,
    pub identity: usize,
    pub on_x: Vec<FinMap>,
    pub on_c: Vec<FinMap>,
}

impl MonoidAction {
    pub fn len(&self) -> usize {
        self.mul.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mul.is_empty()
    }

    /// `f(e) = id` and `f(a·b) = f(a)∘f(b)` on both carriers.
    pub fn check(&self) -> Check {
        for (side, acts) in [("X", &self.on_x), ("c", &self.on_c)] {
            if acts.len() != self.len() {
                return Check::fail("monoid action", format!("{side}: wrong number of maps"), json!({}));
            }
            let e = &acts[self.identity];
            if *e != FinMap::identity(&e.dom) {
                return Check::fail(
                    "monoid action",
                    format!("{side}: identity acts nontrivially"),
                    json!({"side": side}),
                );
            }
            for a in 0..self.len() {
                for b in 0..self.len() {
                    let lhs = &acts[self.mul[a][b]];
                    let rhs = acts[a].after(&acts[b]);
                    if rhs.as_ref().ok() != Some(lhs) {
                        return Check::fail(
                            "monoid action",
                            format!("{side}: f(a·b) ≠ f(a)∘f(b)"),
                            json!({"side": side, "a": a, "b": b}),
                        );
                    }
                }
            }
        }
        Check::pass("monoid action", format!("{} elements", self.len()))
    }

    /// `hom_M(X, c)`: every `φ: X → c` with `φ(m·x) = m·φ(x)`, as value tables.
    pub fn hom_set(&self, caps: &Caps) -> Result<Vec<Vec<usize>>> {
        let (x, c) = match (self.on_x.first(), self.on_c.first()) {
            (Some(a), Some(b)) => (a.dom.size, b.dom.size),
            _ => return Err(Error::InvalidInput("empty monoid".into())),
        };
        let mut net = Network::new(vec![c; x]);
        for (fx, fc) in self.on_x.iter().zip(&self.on_c) {
            for p in 0..x {
                net.add(vec![p], fx.apply(p), fc.table.clone())?;
            }
        }
        net.solve(caps.enumeration, "equivariant maps")
    }
}

/// `O(d)_n = hom(dⁿ, d)` truncated at `max_arity`; the positive part drops arity 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EndomorphismOperad {
    pub d: usize,
    pub max_arity: usize,
    pub positive: bool,
}

impl EndomorphismOperad {
    pub fn arities(&self) -> std::ops::RangeInclusive<usize> {
        usize::from(self.positive)..=self.max_arity
    }

    pub fn count(&self, n: usize) -> Option<u128> {
        if n == 0 && self.positive {
            return Some(0);
        }
        checked_pow(self.d as u128, checked_pow(self.d as u128, n as u128)?)
    }

    /// Every operation of arity `n` as a table over `dⁿ`, first argument most significant.
    pub fn operations(&self, n: usize, caps: &Caps) -> Result<Vec<Vec<usize>>> {
        let count = caps.admit(&format!("O({})_{n}", self.d), self.count(n))?;
        let width = self.d.pow(n as u32);
        Ok((0..count).map(|r| lex_unrank(r, width, self.d)).collect())
    }
}

/// `hom_{O(d)}(Set(c, d), d)` restricted to the listed arities.
#[derive(Debug, Clone, Serialize)]
pub struct PowerHom {
    pub d: usize,
    pub c: usize,
    pub arities: Vec<usize>,
    /// Solutions `φ`, indexed by the lexicographic rank of `f: c → d`.
    pub solutions: Vec<Vec<usize>>,
}

impl PowerHom {
    pub fn len(&self) -> usize {
        self.solutions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.solutions.is_empty()
    }

    /// `η̃(p) = (f ↦ f(p))`.
    pub fn unit(&self, p: usize) -> Vec<usize> {
        points(self.c, self.d).map(|f| f[p]).collect()
    }

    pub fn contains(&self, phi: &[usize]) -> bool {
        self.solutions.binary_search_by(|s| s.as_slice().cmp(phi)).is_ok()
    }
}

/// Every map `c → d` in lexicographic order.
pub fn points(c: usize, d: usize) -> impl Iterator<Item = Vec<usize>> {
    let count = d.pow(c as u32);
    (0..count).map(move |r| lex_unrank(r as u128, c, d))
}

fn point_index(f: &[usize], d: usize) -> usize {
    lex_rank(f, d) as usize
}

/// Solves `φ(o(x₁,…,xₙ)) = o(φ(x₁),…,φ(xₙ))` for every operation of each listed arity;
/// for arity 0 the constraint reads `φ(const_k) = k`.
pub fn hom_operad_power(d: usize, c: usize, arities: &[usize], caps: &Caps) -> Result<PowerHom> {
    let width = checked_pow(d as u128, c as u128)
        .filter(|&w| w <= 1 << 16)
        .ok_or_else(|| Error::too_large(format!("Set({c}, {d})"), format!("{d}^{c}"), 1u128 << 16))?
        as usize;
    let xs: Vec<Vec<usize>> = points(c, d).collect();
    let mut net = Network::new(vec![d; width]);
    let full = EndomorphismOperad {
        d,
        max_arity: arities.iter().copied().max().unwrap_or(0),
        positive: false,
    };
    for &n in arities {
        if n == 0 {
            for k in 0..d {
                let var = point_index(&vec![k; c], d);
                net.restrict(var, |v| v == k);
            }
            continue;
        }
        let ops = full.operations(n, caps)?;
        let tuples = checked_pow(width as u128, n as u128);
        caps.admit(
            &format!("arity-{n} constraints"),
            tuples.and_then(|t| t.checked_mul(ops.len() as u128)),
        )?;
        for t in 0..tuples.unwrap_or(0) as usize {
            let args = lex_unrank(t as u128, n, width);
            for o in &ops {
                let image: Vec<usize> = (0..c)
                    .map(|i| {
                        let k = args.iter().fold(0usize, |acc, &a| acc * d + xs[a][i]);
                        o[k]
                    })
                    .collect();
                net.add(args.clone(), point_index(&image, d), o.clone())?;
            }
        }
    }
    let solutions = net.solve(caps.enumeration, "operadic hom")?;
    Ok(PowerHom {
        d,
        c,
        arities: arities.to_vec(),
        solutions,
    })
}

/// `hom^{≤n}` for `n = lo..=max_arity` until two consecutive truncations agree.
/// Returns the truncations computed and the arity at which they stabilized.
pub fn stabilized_hom(
    d: usize,
    c: usize,
    positive: bool,
    max_arity: usize,
    caps: &Caps,
) -> Result<(Vec<PowerHom>, Option<usize>)> {
    let lo = usize::from(positive);
    let mut out: Vec<PowerHom> = Vec::new();
    for n in lo.max(1)..=max_arity {
        let h = hom_operad_power(d, c, &(lo..=n).collect::<Vec<_>>(), caps)?;
        let same = out.last().is_some_and(|p| p.solutions == h.solutions);
        out.push(h);
        if same {
            return Ok((out, Some(n - 1)));
        }
    }
    Ok((out, None))
}

/// `φ_{α∘β} = α(φ_{β₁}, …, φ_{βₙ})` for `φ ∈ d^{Set(c,d)}`, `α: dⁿ → d`, `β = (β₁,…,βₙ)`.
pub fn lemma_phi_equal_check(d: usize, phi: &[usize], alpha: &[usize], beta: &[Vec<usize>]) -> bool {
    let c = beta.first().map_or(0, Vec::len);
    let composite: Vec<usize> = (0..c)
        .map(|i| alpha[beta.iter().fold(0usize, |acc, b| acc * d + b[i])])
        .collect();
    let lhs = phi[point_index(&composite, d)];
    let rhs = alpha[beta.iter().fold(0usize, |acc, b| acc * d + phi[point_index(b, d)])];
    lhs == rhs
}
