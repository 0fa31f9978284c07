use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;
use serde_json::json;

use super::laws::{algebra_from_morphism, check_monad_laws, check_monad_morphism};
use super::{apply_map, domain, restrict, rng_for, Domain, DoubleDual, Identity, MonadRef, Universe, Value};
use crate::caps::Caps;
use crate::codensity::CoaugmentedFunctor;
use crate::error::{Error, Result};
use crate::finset::{all_maps, FinMap, FinSet};
use crate::report::{summarize, Check};
use crate::ultra;

/// `T_M`: the pointwise equalizer of `M(η), η_M: M ⇉ M²`, with `M`'s operations restricted.
pub fn terminal_monad(m: MonadRef) -> MonadRef {
    restrict(m)
}

/// What `T_M` is expected to be isomorphic to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Expected {
    /// `T_M(X) = η(X)`.
    Identity,
    /// `T_M = M`.
    Whole,
    /// `T_M(X)` transported along `Φ ↦ {Y : Φ(χ_Y) = 1}` equals the ultrasets on `X`.
    Ultrasets,
}

pub fn expected_identification(name: &str) -> Option<Expected> {
    match name {
        "Id" | "Maybe" | "P" | "P⁺" | "DD3" => Some(Expected::Identity),
        "Const1" => Some(Expected::Whole),
        "DD2" => Some(Expected::Ultrasets),
        n if n.starts_with("Writer(") => Some(Expected::Identity),
        _ => None,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TerminalObject {
    pub size: usize,
    pub m_size: Option<usize>,
    pub t_size: Option<usize>,
    /// `T_M(X)`, when it was enumerated and is short enough to print.
    pub elements: Vec<String>,
    pub unit_image: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TerminalReport {
    pub monad: String,
    pub objects: Vec<TerminalObject>,
    pub checks: Vec<Check>,
}

impl TerminalReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }
}

/// Builds `T_M` on the universe and verifies its structure: closure under the arrow
/// action, landing of `η` and `μ`, monad laws, the inclusion as a monad morphism,
/// `T_M(M X) ≅ M X`, and optionally an expected identification.
pub fn verify_terminal_monad(
    m: MonadRef,
    universe: &Universe,
    caps: &Caps,
    expected: Option<Expected>,
) -> TerminalReport {
    let name = m.name();
    let t = terminal_monad(m.clone());
    let mut checks = vec![summarize(
        format!("{name} satisfies the monad laws"),
        &check_monad_laws(m.as_ref(), universe, caps),
    )];
    let arrows = match universe.arrows(caps) {
        Ok(a) => a,
        Err(e) => {
            checks.push(Check::from_error("universe arrows", &e));
            return TerminalReport {
                monad: name,
                objects: Vec::new(),
                checks,
            };
        }
    };

    let mut objects = Vec::new();
    let mut tables: Vec<(usize, Domain, Domain)> = Vec::new();
    for &n in &universe.sizes {
        let mut rng = rng_for(caps, &format!("terminal {name} {n}"));
        let mx = domain(m.as_ref(), n, 1, caps, &mut rng);
        let tx = Domain {
            values: mx.values.iter().filter(|v| t.member(v)).cloned().collect(),
            exhaustive: mx.exhaustive,
        };
        let units: Vec<Value> = {
            let mut u: Vec<Value> = Value::atoms(n).iter().map(|x| m.unit(x)).collect();
            u.sort();
            u
        };
        objects.push(TerminalObject {
            size: n,
            m_size: mx.exhaustive.then_some(mx.values.len()),
            t_size: tx.exhaustive.then_some(tx.values.len()),
            elements: if tx.exhaustive && tx.values.len() <= 64 {
                tx.values.iter().map(ToString::to_string).collect()
            } else {
                Vec::new()
            },
            unit_image: tx.exhaustive.then(|| tx.values == units),
        });
        tables.push((n, mx, tx));
    }

    let mut closure = None;
    let mut count = 0usize;
    for (n, _, tx) in &tables {
        for g in arrows.iter().filter(|g| g.dom.size == *n) {
            for v in &tx.values {
                count += 1;
                let image = m.fmap(&|x| apply_map(g, x), v);
                if closure.is_none() && !t.member(&image) {
                    closure = Some(
                        json!({"object": n, "arrow": g.table, "element": v.to_string(), "image": image.to_string()}),
                    );
                }
            }
        }
    }
    checks.push(Check::from_bool(
        format!("{}: M(g) preserves the equalizer", t.name()),
        closure.is_none(),
        format!("{count} instances"),
        closure.unwrap_or_default(),
    ));

    let bad_unit = tables.iter().find_map(|(n, _, _)| {
        Value::atoms(*n)
            .into_iter()
            .find(|x| !t.member(&m.unit(x)))
            .map(|x| json!({"object": n, "element": x.to_string()}))
    });
    checks.push(Check::from_bool(
        format!("{}: η lands", t.name()),
        bad_unit.is_none(),
        "",
        bad_unit.unwrap_or_default(),
    ));

    let mut bad_mu = None;
    let mut sampled = false;
    let mut count = 0usize;
    for (n, _, tx) in &tables {
        let mut rng = rng_for(caps, &format!("terminal μ {name} {n}"));
        let ttx = tx.lift(t.as_ref(), caps, &mut rng);
        sampled |= !ttx.exhaustive;
        for w in &ttx.values {
            count += 1;
            let out = m.join(w);
            if bad_mu.is_none() && !t.member(&out) {
                bad_mu = Some(json!({"object": n, "element": w.to_string(), "image": out.to_string()}));
            }
        }
    }
    checks.push(Check::from_bool(
        format!("{}: μ lands", t.name()),
        bad_mu.is_none(),
        if bad_mu.is_some() {
            "structure transport failed".to_string()
        } else {
            format!("{count} instances{}", if sampled { ", sampled" } else { "" })
        },
        bad_mu.unwrap_or_default(),
    ));

    let tlaws = check_monad_laws(t.as_ref(), universe, caps);
    let mut laws = summarize(format!("{} satisfies the monad laws", t.name()), &tlaws);
    if !laws.passed() {
        laws.detail = format!("structure transport failed; {}", laws.detail);
    }
    checks.push(laws);

    let id = |v: &Value| v.clone();
    checks.push(summarize(
        format!("{} ↪ {name} is a monad morphism", t.name()),
        &check_monad_morphism(t.as_ref(), m.as_ref(), &id, universe, caps),
    ));

    let image: Vec<Check> = universe
        .sizes
        .iter()
        .flat_map(|&n| algebra_from_morphism(m.as_ref(), m.as_ref(), &id, n, caps))
        .collect();
    checks.push(summarize(format!("{}(M(X)) ≅ M(X) via η", t.name()), &image));

    if let Some(e) = expected {
        checks.push(identification(&m, e, &tables, caps));
    }
    TerminalReport {
        monad: name,
        objects,
        checks,
    }
}

fn identification(m: &MonadRef, e: Expected, tables: &[(usize, Domain, Domain)], caps: &Caps) -> Check {
    let label = match e {
        Expected::Identity => format!("T_{{{}}} ≅ Id", m.name()),
        Expected::Whole => format!("T_{{{}}} = {}", m.name(), m.name()),
        Expected::Ultrasets => format!("T_{{{}}}(X) ≅ US(X)", m.name()),
    };
    let mut details = Vec::new();
    for (n, mx, tx) in tables {
        if !tx.exhaustive {
            let err = Error::too_large(format!("{}({n})", m.name()), "above the law cap", caps.enumeration);
            return Check::from_error(label, &err);
        }
        let (ok, found, want) = match e {
            Expected::Identity => {
                let mut units: Vec<Value> = Value::atoms(*n).iter().map(|x| m.unit(x)).collect();
                units.sort();
                (tx.values == units, tx.values.len(), units.len())
            }
            Expected::Whole => (tx.values == mx.values, tx.values.len(), mx.values.len()),
            Expected::Ultrasets => {
                if *n > 3 {
                    continue;
                }
                let dd = DoubleDual { d: 2 };
                let mut got: Vec<u64> = tx
                    .values
                    .iter()
                    .map(|phi| {
                        (0..1u32 << n)
                            .filter(|&y| {
                                dd.eval(phi, |x| match x {
                                    Value::Atom(i) => (y >> i & 1) as u8,
                                    _ => 0,
                                }) == 1
                            })
                            .fold(0u64, |acc, y| acc | 1 << y)
                    })
                    .collect();
                got.sort_unstable();
                let mut us: Vec<u64> = match ultra::ultrasets(*n, caps) {
                    Ok(v) => v.iter().map(|f| f.bits).collect(),
                    Err(err) => return Check::from_error(label, &err),
                };
                us.sort_unstable();
                (got == us, got.len(), us.len())
            }
        };
        if !ok {
            return Check::fail(
                label,
                format!("differs at |X|={n}: {found} elements, expected {want}"),
                json!({"object": n, "found": found, "expected": want,
                       "equalizer": tx.values.iter().take(16).map(ToString::to_string).collect::<Vec<_>>()}),
            );
        }
        details.push(format!("|X|={n}: {found}"));
    }
    Check::pass(label, details.join(", "))
}

pub type ValueMap = Arc<dyn Fn(&Value) -> Value + Send + Sync>;

/// A diagram object `X_i` with a retraction `r_i: M(X_i) → X_i` of the unit.
#[derive(Clone)]
pub struct RetractNode {
    pub elements: Vec<Value>,
    pub retraction: ValueMap,
}

#[derive(Clone)]
pub struct DiagramArrow {
    pub source: usize,
    pub target: usize,
    pub map: ValueMap,
}

#[derive(Clone, Default)]
pub struct RetractDiagram {
    pub nodes: Vec<RetractNode>,
    pub arrows: Vec<DiagramArrow>,
}

impl RetractDiagram {
    /// The limit as sorted tuples, one component per node.
    pub fn limit(&self, caps: &Caps) -> Result<Vec<Value>> {
        let size = self
            .nodes
            .iter()
            .try_fold(1u128, |acc, n| acc.checked_mul(n.elements.len() as u128));
        caps.admit("diagram product", size)?;
        let mut out = Vec::new();
        let mut idx = vec![0usize; self.nodes.len()];
        if self.nodes.iter().any(|n| n.elements.is_empty()) {
            return Ok(out);
        }
        loop {
            let tuple: Vec<Value> = idx
                .iter()
                .zip(&self.nodes)
                .map(|(&k, n)| n.elements[k].clone())
                .collect();
            if self.arrows.iter().all(|a| (a.map)(&tuple[a.source]) == tuple[a.target]) {
                out.push(Value::Tuple(tuple));
            }
            let mut pos = 0;
            loop {
                if pos == idx.len() {
                    out.sort();
                    return Ok(out);
                }
                idx[pos] += 1;
                if idx[pos] < self.nodes[pos].elements.len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
        }
    }
}

/// A retraction of `η_X` that sends every non-unit element to the first point of `X`.
pub fn choice_retraction(m: MonadRef, n: usize) -> ValueMap {
    Arc::new(move |v: &Value| {
        Value::atoms(n)
            .into_iter()
            .find(|x| m.unit(x) == *v)
            .unwrap_or(Value::Atom(0))
    })
}

/// For a finite diagram of `M`-retracts: `Y = lim X_i`, the assembly map
/// `a: T_M(Y) → lim T_M(X_i) ≅ Y`, and the checks that `a` lands in `Y`,
/// `a∘η = id` and `T_M(Y) = η(Y)`.
pub fn assembly_retract(diagram: &RetractDiagram, m: MonadRef, caps: &Caps) -> Vec<Check> {
    let name = m.name();
    let mut checks = Vec::new();
    let bad_r = diagram.nodes.iter().enumerate().find_map(|(i, node)| {
        node.elements
            .iter()
            .find(|x| (node.retraction)(&m.unit(x)) != **x)
            .map(|x| json!({"node": i, "element": x.to_string()}))
    });
    checks.push(Check::from_bool(
        "rᵢ∘η = id",
        bad_r.is_none(),
        format!("{} nodes", diagram.nodes.len()),
        bad_r.unwrap_or_default(),
    ));
    let y = match diagram.limit(caps) {
        Ok(y) => y,
        Err(e) => {
            checks.push(Check::from_error("limit", &e));
            return checks;
        }
    };
    let assemble = |t: &Value| -> Value {
        Value::Tuple(
            diagram
                .nodes
                .iter()
                .enumerate()
                .map(|(i, node)| {
                    let pi = m.fmap(
                        &|v: &Value| match v {
                            Value::Tuple(xs) => xs[i].clone(),
                            other => other.clone(),
                        },
                        t,
                    );
                    (node.retraction)(&pi)
                })
                .collect(),
        )
    };

    let bad_eta = y.iter().find(|v| assemble(&m.unit(v)) != **v);
    checks.push(Check::from_bool(
        format!("a∘η = id on lim ({} elements)", y.len()),
        bad_eta.is_none(),
        "",
        json!({"element": bad_eta.map(ToString::to_string)}),
    ));

    let t = terminal_monad(m.clone());
    let mut rng = rng_for(caps, &format!("assembly {name} {}", y.len()));
    let mut ty = Domain::base(y.clone()).lift(t.as_ref(), caps, &mut rng);
    if !ty.exhaustive {
        ty.values.extend(y.iter().map(|v| m.unit(v)));
        ty.values.sort();
        ty.values.dedup();
    }
    let mode = if ty.exhaustive { "exhaustive" } else { "sampled" };
    let mut bad_land = None;
    let mut bad_iso = None;
    for v in &ty.values {
        let a = assemble(v);
        if bad_land.is_none() && y.binary_search(&a).is_err() {
            bad_land = Some(json!({"element": v.to_string(), "image": a.to_string()}));
        }
        if bad_iso.is_none() && m.unit(&a) != *v {
            bad_iso = Some(json!({"element": v.to_string()}));
        }
    }
    checks.push(Check::from_bool(
        format!("a: T_{{{name}}}(lim) → lim lands"),
        bad_land.is_none(),
        format!("{} elements, {mode}", ty.values.len()),
        bad_land.unwrap_or_default(),
    ));
    checks.push(Check::from_bool(
        format!("T_{{{name}}}(lim) = η(lim)"),
        bad_iso.is_none(),
        format!("{} elements, {mode}", ty.values.len()),
        bad_iso.unwrap_or_default(),
    ));
    checks
}

#[derive(Debug, Clone, Serialize)]
pub struct TowerLevel {
    pub name: String,
    /// `|M_i(X)|` per universe object; `None` where it could not be enumerated.
    pub sizes: Vec<Option<usize>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TowerReport {
    pub monad: String,
    pub universe: Vec<usize>,
    pub levels: Vec<TowerLevel>,
    /// First `i` with `M_{i+1} = M_i` on the universe.
    pub stable_level: Option<usize>,
    pub checks: Vec<Check>,
}

impl TowerReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }
}

fn level_sets(level: &MonadRef, universe: &Universe, caps: &Caps) -> Vec<Option<Vec<Value>>> {
    universe
        .sizes
        .iter()
        .map(|&n| {
            let mut rng = rng_for(caps, &format!("tower {} {n}", level.name()));
            let d = domain(level.as_ref(), n, 1, caps, &mut rng);
            d.exhaustive.then_some(d.values)
        })
        .collect()
}

/// `M₀ = M, M_{i+1} = T_{M_i}` on the universe, up to `max_steps` restrictions.
pub fn tower(m: MonadRef, max_steps: usize, universe: &Universe, caps: &Caps) -> TowerReport {
    let mut checks = Vec::new();
    let arrows = universe.arrows(caps).unwrap_or_default();
    let mut levels: Vec<MonadRef> = vec![m.clone()];
    let mut sets = vec![level_sets(&m, universe, caps)];
    let mut stable = None;
    let mut nesting = None;
    let mut closure = None;
    for step in 0..max_steps {
        let prev = levels.last().expect("level 0").clone();
        let next = restrict(prev.clone());
        let next_sets = level_sets(&next, universe, caps);
        for (k, (a, b)) in sets[step].iter().zip(&next_sets).enumerate() {
            if let (Some(a), Some(b)) = (a, b) {
                if nesting.is_none() {
                    if let Some(v) = b.iter().find(|v| a.binary_search(v).is_err()) {
                        nesting =
                            Some(json!({"level": step + 1, "object": universe.sizes[k], "element": v.to_string()}));
                    }
                }
            }
            if let Some(b) = b {
                let n = universe.sizes[k];
                for g in arrows.iter().filter(|g| g.dom.size == n) {
                    for v in b {
                        let image = next.fmap(&|x| apply_map(g, x), v);
                        if closure.is_none() && !next.member(&image) {
                            closure = Some(
                                json!({"level": step + 1, "object": n, "arrow": g.table, "element": v.to_string()}),
                            );
                        }
                    }
                }
            }
        }
        let decided = next_sets.iter().all(Option::is_some) && sets[step].iter().all(Option::is_some);
        let same = decided && next_sets == sets[step];
        levels.push(next);
        sets.push(next_sets);
        if same {
            stable = Some(step);
            break;
        }
    }
    checks.push(Check::from_bool(
        "levels nest",
        nesting.is_none(),
        format!("{} levels", levels.len()),
        nesting.unwrap_or_default(),
    ));
    checks.push(Check::from_bool(
        "levels closed under the arrow action",
        closure.is_none(),
        "",
        closure.unwrap_or_default(),
    ));
    let undecided = sets.iter().any(|s| s.iter().any(Option::is_none));
    match stable {
        Some(i) => checks.push(Check::pass("stabilizes", format!("M_{} = M_{i}", i + 1))),
        None if undecided => checks.push(Check::from_error(
            "stabilizes",
            &Error::too_large(
                "tower level",
                "above the law cap",
                caps.enumeration.min(super::LAW_DOMAIN_CAP),
            ),
        )),
        None => checks.push(Check::fail(
            "stabilizes",
            format!("no stabilization within {max_steps} steps"),
            json!({"max_steps": max_steps}),
        )),
    }
    if let Some(i) = stable {
        let s = levels[i].clone();
        checks.push(idempotence(&s, &sets[i], universe, caps));
        checks.push(summarize(
            "stable level preserves sampled limits of image objects",
            &limit_preservation(&m, &s, universe, caps),
        ));
    }
    TowerReport {
        monad: m.name(),
        universe: universe.sizes.clone(),
        levels: levels
            .iter()
            .zip(&sets)
            .enumerate()
            .map(|(i, (l, s))| TowerLevel {
                name: if i == 0 { l.name() } else { format!("M{i}") },
                sizes: s.iter().map(|v| v.as_ref().map(Vec::len)).collect(),
            })
            .collect(),
        stable_level: stable,
        checks,
    }
}

/// `S(S X) = η(S X)` for the stable level `S`.
fn idempotence(s: &MonadRef, sets: &[Option<Vec<Value>>], universe: &Universe, caps: &Caps) -> Check {
    let mut sampled = false;
    let mut count = 0usize;
    for (&n, sx) in universe.sizes.iter().zip(sets) {
        let Some(sx) = sx else { continue };
        let mut rng = rng_for(caps, &format!("idempotence {n}"));
        let ssx = Domain::base(sx.clone()).lift(s.as_ref(), caps, &mut rng);
        sampled |= !ssx.exhaustive;
        count += ssx.values.len();
        let mut units: Vec<Value> = sx.iter().map(|v| s.unit(v)).collect();
        units.sort();
        let ok = if ssx.exhaustive {
            ssx.values == units
        } else {
            ssx.values.iter().all(|t| units.binary_search(t).is_ok())
        };
        if !ok {
            return Check::fail(
                "stable level idempotent",
                format!("η is not a bijection S(X) → S(S(X)) at |X|={n}"),
                json!({"object": n, "s": sx.len(), "ss": ssx.values.len()}),
            );
        }
    }
    Check::pass(
        "stable level idempotent",
        format!("{count} elements{}", if sampled { ", sampled" } else { "" }),
    )
}

fn limit_preservation(m0: &MonadRef, s: &MonadRef, universe: &Universe, caps: &Caps) -> Vec<Check> {
    let mut rng = rng_for(caps, &format!("limits {}", m0.name()));
    // image objects small enough to form products of
    let small: Vec<(usize, Vec<Value>)> = universe
        .sizes
        .iter()
        .filter_map(|&n| {
            let d = domain(m0.as_ref(), n, 1, caps, &mut rng);
            (d.exhaustive && !d.values.is_empty() && d.values.len() <= 16).then_some((n, d.values))
        })
        .collect();
    if small.is_empty() {
        return vec![Check::skipped("limit preservation", "no image object small enough")];
    }
    let node = |k: usize| -> RetractNode {
        let s = s.clone();
        RetractNode {
            elements: small[k].1.clone(),
            retraction: Arc::new(move |t: &Value| s.join(t)),
        }
    };
    let mg = |g: FinMap| -> ValueMap {
        let m0 = m0.clone();
        Arc::new(move |v: &Value| m0.fmap(&|x| apply_map(&g, x), v))
    };
    let random_map = |a: usize, b: usize, rng: &mut rand_chacha::ChaCha8Rng| -> Option<FinMap> {
        all_maps(&FinSet::new(small[a].0), &FinSet::new(small[b].0), caps)
            .ok()?
            .choose(rng)
            .cloned()
    };
    let mut checks = Vec::new();
    for kind in ["product", "equalizer", "pullback"] {
        let k = small.len();
        let (a, b, c) = (rng.gen_range(0..k), rng.gen_range(0..k), rng.gen_range(0..k));
        let diagram = match kind {
            "product" => RetractDiagram {
                nodes: vec![node(a), node(b)],
                arrows: Vec::new(),
            },
            "equalizer" => {
                let (Some(g), Some(h)) = (random_map(a, b, &mut rng), random_map(a, b, &mut rng)) else {
                    continue;
                };
                RetractDiagram {
                    nodes: vec![node(a), node(b), node(b)],
                    // both parallel maps land on copies of M(b) tied by the identity
                    arrows: vec![
                        DiagramArrow {
                            source: 0,
                            target: 1,
                            map: mg(g),
                        },
                        DiagramArrow {
                            source: 0,
                            target: 2,
                            map: mg(h),
                        },
                        DiagramArrow {
                            source: 1,
                            target: 2,
                            map: Arc::new(|v: &Value| v.clone()),
                        },
                    ],
                }
            }
            _ => {
                let (Some(g1), Some(g2)) = (random_map(a, c, &mut rng), random_map(b, c, &mut rng)) else {
                    continue;
                };
                RetractDiagram {
                    nodes: vec![node(a), node(b), node(c)],
                    arrows: vec![
                        DiagramArrow {
                            source: 0,
                            target: 2,
                            map: mg(g1),
                        },
                        DiagramArrow {
                            source: 1,
                            target: 2,
                            map: mg(g2),
                        },
                    ],
                }
            }
        };
        let sizes: Vec<usize> = diagram.nodes.iter().map(|n| n.elements.len()).collect();
        let sub = assembly_retract(&diagram, s.clone(), caps);
        checks.push(summarize(format!("{kind} of image objects {sizes:?}"), &sub));
    }
    checks
}

/// On finite sets the ultrafilter monad is the identity, so `T_UF = Id`.
/// The cardinality argument for infinite sets is out of reach here.
pub fn ultrafilter_terminal_note(universe: &Universe, caps: &Caps) -> Vec<Check> {
    let mut checks = Vec::new();
    let mut bad = None;
    for &n in &universe.sizes {
        match ultra::ultrafilters(n, caps) {
            Ok(ufs) => {
                let mut principal: Vec<u64> = (0..n)
                    .map(|x| ultra::double_powerset_unit(n, x).map(|f| f.bits).unwrap_or(0))
                    .collect();
                principal.sort_unstable();
                let mut got: Vec<u64> = ufs.iter().map(|f| f.bits).collect();
                got.sort_unstable();
                if bad.is_none() && got != principal {
                    bad = Some(json!({"object": n, "ultrafilters": got.len()}));
                }
            }
            Err(e) => checks.push(Check::from_error(format!("UF({n})"), &e)),
        }
    }
    checks.push(Check::from_bool(
        "UF is pointwise the identity (every ultrafilter principal)",
        bad.is_none(),
        format!("sizes {:?}", universe.sizes),
        bad.unwrap_or_default(),
    ));
    let id: MonadRef = Arc::new(Identity);
    let report = verify_terminal_monad(id, universe, caps, Some(Expected::Identity));
    checks.push(summarize("T_Id = Id (equalizer of Id ⇉ Id²)", &report.checks));
    checks.push(Check::skipped(
        "T_UF = Id on infinite sets",
        "cardinality argument; finite universes only",
    ));
    checks
}

/// A monad viewed as a coaugmented functor, with `M(X)` indexed by its sorted enumeration.
pub struct MonadFunctor {
    pub monad: MonadRef,
    pub caps: Caps,
}

impl MonadFunctor {
    fn elements(&self, n: usize) -> Result<Vec<Value>> {
        Ok(self
            .monad
            .enumerate(&Value::atoms(n), &self.caps)?
            .into_iter()
            .filter(|v| self.monad.member(v))
            .collect())
    }

    fn index(elements: &[Value], v: &Value, what: &str) -> Result<usize> {
        elements
            .binary_search(v)
            .map_err(|_| Error::Structural(format!("{what}: {v} is not an element of the target")))
    }
}

impl CoaugmentedFunctor for MonadFunctor {
    fn name(&self) -> String {
        self.monad.name()
    }

    fn object(&self, x: &FinSet) -> Result<FinSet> {
        Ok(FinSet::new(self.elements(x.size)?.len()))
    }

    fn arrow(&self, g: &FinMap) -> Result<FinMap> {
        let src = self.elements(g.dom.size)?;
        let tgt = self.elements(g.cod.size)?;
        let table = src
            .iter()
            .map(|v| Self::index(&tgt, &self.monad.fmap(&|x| apply_map(g, x), v), "M(g)"))
            .collect::<Result<Vec<_>>>()?;
        FinMap::new(FinSet::new(src.len()), FinSet::new(tgt.len()), table)
    }

    fn unit(&self, x: &FinSet) -> Result<FinMap> {
        let tgt = self.elements(x.size)?;
        let table = Value::atoms(x.size)
            .iter()
            .map(|a| Self::index(&tgt, &self.monad.unit(a), "η"))
            .collect::<Result<Vec<_>>>()?;
        FinMap::new(x.clone(), FinSet::new(tgt.len()), table)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codensity::EndofunctorTable;
    use crate::monad::{builtin, ConstantOne, Maybe};

    fn report(name: &str, universe: &Universe) -> TerminalReport {
        let m = builtin(name).unwrap();
        let e = expected_identification(&m.name());
        verify_terminal_monad(m, universe, &Caps::default(), e)
    }

    #[test]
    fn maybe_writer_powerset_collapse_to_identity() {
        for name in ["maybe", "writer-c2", "p", "p+"] {
            let r = report(name, &Universe::default());
            assert!(r.passed(), "{name}: {:#?}", r.checks);
            let sizes: Vec<_> = r.objects.iter().map(|o| o.t_size).collect();
            assert_eq!(sizes, vec![Some(0), Some(1), Some(2), Some(3)], "{name}");
        }
    }

    #[test]
    fn constant_monad_is_its_own_terminal_monad() {
        let r = report("const1", &Universe::default());
        assert!(r.passed(), "{:#?}", r.checks);
        assert!(r.objects.iter().all(|o| o.t_size == Some(1)));
    }

    #[test]
    fn maybe_equalizer_matches_pointwise_oracle() {
        // oracle: m ∈ T(X) iff Maybe(η)(m) = η(m), checked by hand on each element
        for n in 0..=3usize {
            let mut want = Vec::new();
            for m in std::iter::once(None).chain((0..n as u32).map(Some)) {
                let lhs = m.map(Some); // Maybe(η)(m)
                let rhs = Some(m); // η_{MX}(m)
                if lhs == rhs {
                    want.push(m.unwrap());
                }
            }
            let t = terminal_monad(Arc::new(Maybe));
            let got = t.enumerate(&Value::atoms(n), &Caps::default()).unwrap();
            let got: Vec<u32> = got
                .iter()
                .map(|v| match v {
                    Value::Just(x) => match **x {
                        Value::Atom(i) => i,
                        _ => unreachable!(),
                    },
                    _ => panic!("Nothing equalized"),
                })
                .collect();
            assert_eq!(got, want);
        }
    }

    #[test]
    fn double_dual_equalizer_is_principal() {
        let r = report("dd2", &Universe::default());
        let sizes: Vec<_> = r.objects.iter().map(|o| o.t_size).collect();
        assert_eq!(sizes, vec![Some(0), Some(1), Some(2), Some(3)]);
        assert!(r.objects.iter().all(|o| o.unit_image == Some(true)));
        let ident = r.checks.last().unwrap();
        assert!(ident.name.contains("US"));
        // US(3) has 8 elements, the equalizer 3
        assert!(!ident.passed());
        assert_eq!(ident.witness.as_ref().unwrap()["object"], 3);
        let rest = &r.checks[..r.checks.len() - 1];
        assert!(rest.iter().all(Check::passed), "{rest:#?}");
    }

    #[test]
    fn towers() {
        let caps = Caps::default();
        let u = Universe::default();
        let maybe = tower(builtin("maybe").unwrap(), 3, &u, &caps);
        assert!(maybe.passed(), "{:#?}", maybe.checks);
        assert_eq!(maybe.stable_level, Some(1));
        assert_eq!(maybe.levels[1].sizes, vec![Some(0), Some(1), Some(2), Some(3)]);
        let one = tower(builtin("const1").unwrap(), 3, &u, &caps);
        assert!(one.passed(), "{:#?}", one.checks);
        assert_eq!(one.stable_level, Some(0));
        let dd = tower(builtin("dd2").unwrap(), 3, &u, &caps);
        assert!(dd.passed(), "{:#?}", dd.checks);
        assert_eq!(dd.stable_level, Some(1));
    }

    #[test]
    fn assembly_examples() {
        let caps = Caps::default();
        let dd: MonadRef = builtin("dd2").unwrap();
        let node = |n| RetractNode {
            elements: Value::atoms(n),
            retraction: choice_retraction(dd.clone(), n),
        };
        let one = RetractDiagram {
            nodes: vec![node(3)],
            arrows: vec![],
        };
        assert!(assembly_retract(&one, dd.clone(), &caps).iter().all(Check::passed));
        let square = RetractDiagram {
            nodes: vec![node(2), node(2)],
            arrows: vec![],
        };
        let checks = assembly_retract(&square, dd.clone(), &caps);
        assert!(checks.iter().all(Check::passed), "{checks:#?}");
        assert!(checks[1].name.contains("4 elements"));
        let empty = RetractDiagram::default();
        assert_eq!(empty.limit(&caps).unwrap().len(), 1);
        assert!(assembly_retract(&empty, dd, &caps).iter().all(Check::passed));
    }

    #[test]
    fn ultrafilter_note() {
        let checks = ultrafilter_terminal_note(&Universe::new(vec![1, 2, 3]), &Caps::default());
        assert!(checks[..2].iter().all(Check::passed), "{checks:#?}");
        assert_eq!(checks[2].verdict, crate::report::Verdict::Skipped);
    }

    #[test]
    fn monad_functor_adapter() {
        let caps = Caps::default();
        let universe: Vec<FinSet> = (0..=2).map(FinSet::new).collect();
        for m in [
            builtin("dd2").unwrap(),
            Arc::new(ConstantOne) as MonadRef,
            builtin("maybe").unwrap(),
        ] {
            let f = MonadFunctor { monad: m, caps };
            let table = EndofunctorTable::tabulate(&f, &universe, &caps).unwrap();
            assert!(table.check_laws().iter().all(Check::passed));
        }
    }
}
