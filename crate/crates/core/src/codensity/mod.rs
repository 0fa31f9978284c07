//! The D-completion `T_D`: objects as limits over comma categories, an
//! independent end/equalizer oracle, unit, functor action and multiplication.

mod functor;
mod terminal;

pub use functor::{CoaugmentedFunctor, EndofunctorTable, IdentityFunctor, TabulatedArrow};
pub use terminal::{terminal_map, uniqueness_audit, verify_terminal_map, AuditOutcome};

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value as Json};

use crate::caps::{checked_pow, Caps};
use crate::category::{comma, CommaCategory, ConcreteCategory, FinSetCat};
use crate::error::{Error, Result};
use crate::finset::{self, equalizer, FinMap, FinSet, IndexedProduct};
use crate::report::Check;

/// `T_D(c)`: the comma category `c ↓ D` and its families in lexicographic order.
#[derive(Debug, Clone)]
pub struct CodensityObject<O> {
    pub comma: CommaCategory<O>,
    /// `families[i][k]` is the value of family `i` at comma object `k`.
    pub families: Vec<Vec<usize>>,
}

impl<O: Clone> CodensityObject<O> {
    pub fn len(&self) -> usize {
        self.families.len()
    }

    pub fn is_empty(&self) -> bool {
        self.families.is_empty()
    }

    pub fn carrier(&self) -> FinSet {
        FinSet::new(self.families.len())
    }

    pub fn index_of(&self, family: &[usize]) -> Option<usize> {
        self.families.binary_search_by(|f| f.as_slice().cmp(family)).ok()
    }

    /// The value of family `i` at `(d, f)`.
    pub fn value(&self, i: usize, target: usize, f_table: &[usize]) -> Option<usize> {
        let k = self.comma.index_of(target, f_table)?;
        Some(self.families[i][k])
    }

    /// Whether an assignment over the comma objects satisfies every naturality constraint.
    pub fn is_family(&self, values: &[usize]) -> bool {
        values.len() == self.comma.objects.len()
            && self
                .comma
                .arrows
                .iter()
                .all(|a| self.comma.alpha(a).apply(values[a.source]) == values[a.target])
    }
}

impl<O: Clone + Serialize> CodensityObject<O> {
    /// `{"base", "D", "values": [[d_index, f_table, x], …]}`.
    pub fn family_json(&self, i: usize) -> Json {
        let values: Vec<Json> = self
            .comma
            .objects
            .iter()
            .zip(&self.families[i])
            .map(|(o, &x)| json!([o.target, o.map.table, x]))
            .collect();
        json!({"base": self.comma.base, "D": self.comma.targets, "values": values})
    }
}

/// `T_D(c)` as an object of the category, with the family of each carrier element.
#[derive(Debug, Clone)]
pub struct StructuredObject<O> {
    pub object: O,
    pub tc: Arc<CodensityObject<O>>,
    /// Carrier element → family index.
    pub element_family: Vec<usize>,
    /// Family index → carrier element.
    pub family_element: Vec<usize>,
}

impl<O: Clone> StructuredObject<O> {
    /// The evaluation map `ev_(d,f)`: carrier of `T(c)` → carrier of `d`, for comma object `k`.
    pub fn evaluation(&self, k: usize, cod: FinSet) -> FinMap {
        FinMap {
            dom: FinSet::new(self.element_family.len()),
            cod,
            table: self.element_family.iter().map(|&i| self.tc.families[i][k]).collect(),
        }
    }
}

/// `μ_c: T²(c) → T(c)`, as index data that works on individual elements of `T²(c)`.
#[derive(Debug, Clone)]
pub struct Multiplication<O> {
    pub structured: StructuredObject<O>,
    /// The comma category `T(c) ↓ D`.
    pub outer: CommaCategory<O>,
    /// For comma object `k` of `c ↓ D`, the index of `(d, ev_k)` in `T(c) ↓ D`.
    pub ev_index: Vec<usize>,
}

impl<O: Clone> Multiplication<O> {
    /// `μ(y)_(d,f) = y_(d, ev_f)`.
    pub fn apply(&self, y: &[usize]) -> Vec<usize> {
        self.ev_index.iter().map(|&j| y[j]).collect()
    }
}

/// The D-completion of a full subcategory `D` of a concrete category.
pub struct Completion<C: ConcreteCategory> {
    pub cat: C,
    pub targets: Vec<C::Object>,
    pub caps: Caps,
    cache: RwLock<HashMap<String, Arc<CodensityObject<C::Object>>>>,
    /// Objects whose computation hit a cap, so the search is not repeated.
    refused: RwLock<HashMap<String, Error>>,
}

impl<C: ConcreteCategory> fmt::Debug for Completion<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Completion")
            .field("category", &self.cat.name())
            .field("targets", &self.targets)
            .finish()
    }
}

impl<C: ConcreteCategory> Completion<C> {
    pub fn new(cat: C, targets: Vec<C::Object>, caps: Caps) -> Result<Self> {
        if targets.is_empty() {
            return Err(Error::Precondition("the subcategory D must be nonempty".into()));
        }
        Ok(Completion {
            cat,
            targets,
            caps,
            cache: RwLock::new(HashMap::new()),
            refused: RwLock::new(HashMap::new()),
        })
    }

    fn key(c: &C::Object) -> String {
        format!("{c:?}")
    }

    /// `T_D(c)` as the limit of the projection `c ↓ D → D`. Memoized.
    pub fn object(&self, c: &C::Object) -> Result<Arc<CodensityObject<C::Object>>> {
        let key = Self::key(c);
        if let Some(hit) = self.cache.read().expect("cache poisoned").get(&key) {
            return Ok(hit.clone());
        }
        if let Some(e) = self.refused.read().expect("cache poisoned").get(&key) {
            return Err(e.clone());
        }
        let cc = comma(&self.cat, c, &self.targets, &self.caps)?;
        let diagram = cc.projection_diagram().underlying(&self.cat)?;
        let lim = match finset::limit(&diagram, &self.caps) {
            Ok(l) => l,
            Err(e) => {
                if e.is_too_large() {
                    self.refused.write().expect("cache poisoned").insert(key, e.clone());
                }
                return Err(e);
            }
        };
        let obj = Arc::new(CodensityObject {
            comma: cc,
            families: lim.solutions,
        });
        self.cache.write().expect("cache poisoned").insert(key, obj.clone());
        Ok(obj)
    }

    /// `T_D(c)` computed in the category, carrying its pointwise structure.
    pub fn structured(&self, c: &C::Object) -> Result<StructuredObject<C::Object>> {
        let tc = self.object(c)?;
        let lim = self.cat.limit(&tc.comma.projection_diagram(), &self.caps)?;
        let element_family = lim
            .elements
            .iter()
            .map(|e| {
                tc.index_of(e)
                    .ok_or_else(|| Error::Internal("structured limit has an element that is not a family".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut family_element = vec![usize::MAX; tc.len()];
        for (e, &i) in element_family.iter().enumerate() {
            family_element[i] = e;
        }
        if element_family.len() != tc.len() || family_element.contains(&usize::MAX) {
            return Err(Error::Internal(
                "structured limit and family list differ in size".into(),
            ));
        }
        Ok(StructuredObject {
            object: lim.object,
            tc,
            element_family,
            family_element,
        })
    }

    /// The family `η(x) = (f(x))_(d,f)`.
    pub fn unit_family(cc: &CommaCategory<C::Object>, x: usize) -> Vec<usize> {
        cc.objects.iter().map(|o| o.map.apply(x)).collect()
    }

    /// `η_c: c → T_D(c)` on carriers, landing in family indices.
    pub fn unit(&self, c: &C::Object) -> Result<FinMap> {
        let tc = self.object(c)?;
        let carrier = self.cat.carrier(c)?;
        let table = carrier
            .elements()
            .map(|x| {
                tc.index_of(&Self::unit_family(&tc.comma, x))
                    .ok_or_else(|| Error::Internal(format!("unit at element {x} is not a natural family")))
            })
            .collect::<Result<Vec<_>>>()?;
        FinMap::new(carrier, tc.carrier(), table)
    }

    /// `T(g)(x)_(d,f) = x_(d, f∘g)` on a single family of `T(c)`, given the comma of `c′`.
    pub fn act_on_family(
        source: &CommaCategory<C::Object>,
        target_comma: &CommaCategory<C::Object>,
        g: &FinMap,
        x: &[usize],
    ) -> Result<Vec<usize>> {
        target_comma
            .objects
            .iter()
            .map(|o| {
                let fg = o.map.after(g)?;
                source
                    .index_of(o.target, &fg.table)
                    .map(|k| x[k])
                    .ok_or_else(|| Error::Structural("f∘g is not a morphism c → d".into()))
            })
            .collect()
    }

    /// `T(g): T(c) → T(c′)` on family indices.
    pub fn action(&self, c: &C::Object, c2: &C::Object, g: &FinMap) -> Result<FinMap> {
        if !self.cat.is_morphism(c, c2, g) {
            return Err(Error::InvalidInput(format!("not a morphism of {}", self.cat.name())));
        }
        let (t1, t2) = (self.object(c)?, self.object(c2)?);
        let table = t1
            .families
            .iter()
            .map(|x| {
                let y = Self::act_on_family(&t1.comma, &t2.comma, g, x)?;
                t2.index_of(&y)
                    .ok_or_else(|| Error::Internal("T(g) output is not a natural family".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        FinMap::new(t1.carrier(), t2.carrier(), table)
    }

    /// `μ_c` by the evaluation formula.
    pub fn multiplication(&self, c: &C::Object) -> Result<Multiplication<C::Object>> {
        let structured = self.structured(c)?;
        let outer = comma(&self.cat, &structured.object, &self.targets, &self.caps)?;
        let ev_index = structured
            .tc
            .comma
            .objects
            .iter()
            .enumerate()
            .map(|(k, o)| {
                let cod = self.cat.carrier(&self.targets[o.target])?;
                let ev = structured.evaluation(k, cod);
                outer.index_of(o.target, &ev.table).ok_or_else(|| {
                    Error::Structural(format!(
                        "evaluation at comma object {k} is not a morphism of {}",
                        self.cat.name()
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Multiplication {
            structured,
            outer,
            ev_index,
        })
    }

    /// The oracle: filters `∏_d d^{hom(c,d)}` by every end constraint
    /// `α(x_(d₁,f)) = x_(d₂,α∘f)`. Materializes the whole product.
    pub fn end_equalizer(&self, c: &C::Object) -> Result<Vec<Vec<usize>>> {
        let homs: Vec<Vec<FinMap>> = self
            .targets
            .iter()
            .map(|d| self.cat.hom(c, d, &self.caps))
            .collect::<Result<_>>()?;
        let sizes: Vec<usize> = self
            .targets
            .iter()
            .map(|d| self.cat.carrier(d).map(|s| s.size))
            .collect::<Result<_>>()?;
        let mut coords: Vec<(usize, usize)> = Vec::new();
        let mut lookup: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
        for (i, hs) in homs.iter().enumerate() {
            for f in hs {
                lookup.insert((i, f.table.clone()), coords.len());
                coords.push((i, sizes[i]));
            }
        }
        let total = coords.iter().try_fold(1u128, |acc, &(_, s)| acc.checked_mul(s as u128));
        self.caps.admit("end-equalizer product", total)?;
        // (source coordinate, α, target coordinate)
        let mut constraints: Vec<(usize, FinMap, usize)> = Vec::new();
        for (i1, hs) in homs.iter().enumerate() {
            for (i2, _) in self.targets.iter().enumerate() {
                let alphas = self.cat.hom(&self.targets[i1], &self.targets[i2], &self.caps)?;
                for alpha in &alphas {
                    for f in hs {
                        let src = lookup[&(i1, f.table.clone())];
                        let composite = alpha.after(f)?;
                        let tgt = *lookup
                            .get(&(i2, composite.table))
                            .ok_or_else(|| Error::Internal("α∘f missing from hom(c, d₂)".into()))?;
                        constraints.push((src, alpha.clone(), tgt));
                    }
                }
            }
        }
        let mut out = Vec::new();
        let mut x = vec![0usize; coords.len()];
        if coords.iter().any(|&(_, s)| s == 0) {
            return Ok(out);
        }
        loop {
            if constraints.iter().all(|(s, alpha, t)| alpha.apply(x[*s]) == x[*t]) {
                out.push(x.clone());
            }
            let mut pos = coords.len();
            loop {
                if pos == 0 {
                    return Ok(out);
                }
                pos -= 1;
                x[pos] += 1;
                if x[pos] < coords[pos].1 {
                    break;
                }
                x[pos] = 0;
            }
        }
    }

    /// One-object form: `eq(d^{hom(c,d)} ⇉ (d^{hom(c,d)})^{End(d)})`, intersecting
    /// the equalizers of `σ_α(x) = (x_{α∘f})_f` and `τ_α(x) = (α(x_f))_f`.
    pub fn one_object_equalizer(&self, c: &C::Object) -> Result<Vec<Vec<usize>>> {
        let [d] = self.targets.as_slice() else {
            return Err(Error::Precondition("the one-object form needs |D| = 1".into()));
        };
        let homs = self.cat.hom(c, d, &self.caps)?;
        let dsize = self.cat.carrier(d)?.size;
        let power = IndexedProduct::new(vec![dsize; homs.len()], &self.caps)?;
        let ends = self.cat.hom(d, d, &self.caps)?;
        let position = |table: &[usize]| -> Result<usize> {
            homs.binary_search_by(|h| h.table.as_slice().cmp(table))
                .map_err(|_| Error::Internal("α∘f missing from hom(c, d)".into()))
        };
        let n = power.cardinality();
        let mut alive = vec![true; n];
        for alpha in &ends {
            let shift = homs
                .iter()
                .map(|f| position(&alpha.after(f)?.table))
                .collect::<Result<Vec<_>>>()?;
            let mut sigma = Vec::with_capacity(n);
            let mut tau = Vec::with_capacity(n);
            for p in 0..n {
                let x = power.decode(p);
                sigma.push(power.encode(&shift.iter().map(|&j| x[j]).collect::<Vec<_>>()));
                tau.push(power.encode(&x.iter().map(|&v| alpha.apply(v)).collect::<Vec<_>>()));
            }
            let s = FinMap::new(power.as_set(), power.as_set(), sigma)?;
            let t = FinMap::new(power.as_set(), power.as_set(), tau)?;
            let (_, inclusion) = equalizer(&s, &t)?;
            let mut keep = vec![false; n];
            for &p in &inclusion.table {
                keep[p] = true;
            }
            for (a, k) in alive.iter_mut().zip(keep) {
                *a &= k;
            }
        }
        let mut out: Vec<Vec<usize>> = (0..n).filter(|&p| alive[p]).map(|p| power.decode(p)).collect();
        out.sort();
        Ok(out)
    }

    /// Monad laws and naturality of `(T_D, η, μ)` on every object and arrow of `universe`.
    pub fn check_laws(&self, universe: &[C::Object]) -> Vec<Check> {
        let mut checks = Vec::new();
        for c in universe {
            let label = format!("{c:?}");
            match self.laws_at(c) {
                Ok(mut cs) => checks.append(&mut cs),
                Err(e) => checks.push(Check::from_error(format!("monad laws at {label}"), &e)),
            }
        }
        for c in universe {
            for c2 in universe {
                match self.naturality(c, c2) {
                    Ok(mut cs) => checks.append(&mut cs),
                    Err(e) => checks.push(Check::from_error(format!("naturality {c:?} → {c2:?}"), &e)),
                }
            }
        }
        checks
    }

    fn laws_at(&self, c: &C::Object) -> Result<Vec<Check>> {
        let mut checks = Vec::new();
        let tc = self.object(c)?;
        let mu = self.multiplication(c)?;
        let s = &mu.structured;
        let eta = self.unit(c)?;

        // μ ∘ η_T = id, elementwise on T(c)
        let mut bad = None;
        for (e, &i) in s.element_family.iter().enumerate() {
            let outer_unit = Self::unit_family(&mu.outer, e);
            if mu.apply(&outer_unit) != tc.families[i] {
                bad = Some(i);
                break;
            }
        }
        checks.push(Check::from_bool(
            format!("μ∘ηT = id at {c:?}"),
            bad.is_none(),
            format!("{} families", tc.len()),
            json!({"family": bad}),
        ));

        // μ ∘ T(η) = id
        let eta_struct = FinMap::new(
            eta.dom.clone(),
            FinSet::new(s.element_family.len()),
            eta.table.iter().map(|&i| s.family_element[i]).collect(),
        )?;
        let mut bad = None;
        for (i, x) in tc.families.iter().enumerate() {
            let tx = Self::act_on_family(&tc.comma, &mu.outer, &eta_struct, x)?;
            if mu.apply(&tx) != *x {
                bad = Some(i);
                break;
            }
        }
        checks.push(Check::from_bool(
            format!("μ∘Tη = id at {c:?}"),
            bad.is_none(),
            format!("{} families", tc.len()),
            json!({"family": bad}),
        ));

        // every μ(y) is a family, and associativity, when T²(c) fits
        match self.object(&s.object) {
            Ok(ttc) => {
                let bad = ttc.families.iter().position(|y| tc.index_of(&mu.apply(y)).is_none());
                checks.push(Check::from_bool(
                    format!("μ lands in T at {c:?}"),
                    bad.is_none(),
                    format!("{} elements of T²", ttc.len()),
                    json!({"element": bad}),
                ));
                checks.push(self.associativity(c, &mu, &ttc)?);
            }
            Err(e) if e.is_too_large() => {
                let diagram = mu.outer.projection_diagram().underlying(&self.cat)?;
                let mut rng = ChaCha8Rng::seed_from_u64(self.caps.seed);
                let sample = finset::sample_limit(&diagram, &mut rng, self.caps.samples)?;
                let bad = sample.iter().find(|y| tc.index_of(&mu.apply(y)).is_none());
                checks.push(Check::from_bool(
                    format!("μ lands in T at {c:?}"),
                    bad.is_none(),
                    format!("sampled {} elements of T²", sample.len()),
                    json!({"element": bad}),
                ));
                checks.push(Check::skipped(
                    format!("μ∘μT = μ∘Tμ at {c:?}"),
                    format!("T² exceeds the enumeration cap ({e})"),
                ));
            }
            Err(e) => return Err(e),
        }
        Ok(checks)
    }

    fn associativity(
        &self,
        c: &C::Object,
        mu: &Multiplication<C::Object>,
        ttc: &CodensityObject<C::Object>,
    ) -> Result<Check> {
        let name = format!("μ∘μT = μ∘Tμ at {c:?}");
        let mu_t = match self.multiplication(&mu.structured.object) {
            Ok(m) => m,
            Err(e) if e.is_too_large() => return Ok(Check::skipped(name, e.to_string())),
            Err(e) => return Err(e),
        };
        let tttc = match self.object(&mu_t.structured.object) {
            Ok(t) => t,
            Err(e) if e.is_too_large() => return Ok(Check::skipped(name, e.to_string())),
            Err(e) => return Err(e),
        };
        // μ_c as a map on the structured carrier of T²(c)
        let s2 = &mu_t.structured;
        let tc = &mu.structured.tc;
        let mu_struct = FinMap::new(
            FinSet::new(s2.element_family.len()),
            FinSet::new(mu.structured.element_family.len()),
            s2.element_family
                .iter()
                .map(|&j| {
                    let i = tc
                        .index_of(&mu.apply(&ttc.families[j]))
                        .ok_or_else(|| Error::Internal("μ output is not a family".into()))?;
                    Ok(mu.structured.family_element[i])
                })
                .collect::<Result<Vec<_>>>()?,
        )?;
        for (k, z) in tttc.families.iter().enumerate() {
            let left = mu.apply(&mu_t.apply(z));
            let tz = Self::act_on_family(&tttc.comma, &mu.outer, &mu_struct, z)?;
            let right = mu.apply(&tz);
            if left != right {
                return Ok(Check::fail(name, "associativity violated", json!({"element": k})));
            }
        }
        Ok(Check::pass(name, format!("{} elements of T³", tttc.len())))
    }

    fn naturality(&self, c: &C::Object, c2: &C::Object) -> Result<Vec<Check>> {
        let homs = self.cat.hom(c, c2, &self.caps)?;
        let (t1, t2) = (self.object(c)?, self.object(c2)?);
        let (eta1, eta2) = (self.unit(c)?, self.unit(c2)?);
        let mut eta_bad = None;
        for g in &homs {
            let tg = self.action(c, c2, g)?;
            if tg.after(&eta1)? != eta2.after(g)? {
                eta_bad = Some(g.table.clone());
                break;
            }
        }
        let mut checks = vec![Check::from_bool(
            format!("η natural {c:?} → {c2:?}"),
            eta_bad.is_none(),
            format!("{} arrows", homs.len()),
            json!({"arrow": eta_bad}),
        )];

        // μ natural: μ′ ∘ T²(g) = T(g) ∘ μ on elements of T²(c)
        let name = format!("μ natural {c:?} → {c2:?}");
        let (m1, m2) = (self.multiplication(c)?, self.multiplication(c2)?);
        let (ys, how) = match self.object(&m1.structured.object) {
            Ok(ttc) => (ttc.families.clone(), "exhaustive"),
            Err(e) if e.is_too_large() => {
                let diagram = m1.outer.projection_diagram().underlying(&self.cat)?;
                let mut rng = ChaCha8Rng::seed_from_u64(self.caps.seed);
                (finset::sample_limit(&diagram, &mut rng, self.caps.samples)?, "sampled")
            }
            Err(e) => return Err(e),
        };
        let mut mu_bad = None;
        'arrows: for g in &homs {
            let tg = self.action(c, c2, g)?;
            let tg_struct = FinMap::new(
                FinSet::new(m1.structured.element_family.len()),
                FinSet::new(m2.structured.element_family.len()),
                m1.structured
                    .element_family
                    .iter()
                    .map(|&i| m2.structured.family_element[tg.apply(i)])
                    .collect(),
            )?;
            if !self
                .cat
                .is_morphism(&m1.structured.object, &m2.structured.object, &tg_struct)
            {
                return Err(Error::Structural(format!(
                    "T(g) is not a morphism of {} for g = {:?}",
                    self.cat.name(),
                    g.table
                )));
            }
            for y in &ys {
                let left = m2.apply(&Self::act_on_family(&m1.outer, &m2.outer, &tg_struct, y)?);
                let right = Self::act_on_family(&t1.comma, &t2.comma, g, &m1.apply(y))?;
                if left != right {
                    mu_bad = Some(json!({"arrow": g.table, "element": y}));
                    break 'arrows;
                }
            }
        }
        checks.push(match mu_bad {
            None => Check::pass(name, format!("{how}, {} arrows × {} elements", homs.len(), ys.len())),
            Some(w) => Check::fail(name, "μ not natural", w),
        });
        Ok(checks)
    }
}

/// `T_D` on finite sets with `D` given by cardinalities.
pub fn finset_completion(sizes: &[usize], caps: Caps) -> Result<Completion<FinSetCat>> {
    Completion::new(FinSetCat, sizes.iter().map(|&n| FinSet::new(n)).collect(), caps)
}

/// Size of the end product `∏_d d^{hom(c,d)}` for cardinalities, `None` on overflow.
pub fn end_product_size(c: usize, targets: &[usize]) -> Option<u128> {
    targets.iter().try_fold(1u128, |acc, &d| {
        let homs = checked_pow(d as u128, c as u128)?;
        acc.checked_mul(checked_pow(d as u128, homs)?)
    })
}
