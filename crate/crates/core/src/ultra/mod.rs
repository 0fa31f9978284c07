//! Subset families on small finite sets: ultrafilters, ultrasets, the
//! three-part partition criterion, and the identifications of the 2- and
//! 3-completions with ultrasets and ultrafilters.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value as Json};

use crate::caps::{checked_pow, Caps};
use crate::category::FinSetCat;
use crate::codensity::{finset_completion, CoaugmentedFunctor, Completion};
use crate::error::{Error, Result};
use crate::finset::{all_maps, FinMap, FinSet};
use crate::report::Check;

/// Largest ground set for brute-force ultraset enumeration (`2^{2^4}` candidates).
pub const MAX_ULTRASET_SIZE: usize = 4;
/// Largest ground set for ultrafilter enumeration.
pub const MAX_ULTRAFILTER_SIZE: usize = 5;
/// Families are `u64` bitmasks over `P(X)`.
pub const MAX_FAMILY_GROUND: usize = 6;

/// A family of subsets of `{0..n}`; bit `Y` is set iff subset `Y` (itself a bitmask) is a member.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SubsetFamily {
    pub ground: usize,
    pub bits: u64,
}

impl SubsetFamily {
    pub fn new(ground: usize, bits: u64) -> Result<Self> {
        if ground > MAX_FAMILY_GROUND {
            return Err(Error::too_large(
                "subset family bitmask",
                format!("2^{}", 1u64 << ground.min(63)),
                64,
            ));
        }
        let subsets = 1u32 << ground;
        if subsets < 64 && bits >> subsets != 0 {
            return Err(Error::InvalidInput(format!(
                "family {bits:#x} names a subset outside P({ground})"
            )));
        }
        Ok(SubsetFamily { ground, bits })
    }

    pub fn from_members(ground: usize, members: &[u32]) -> Result<Self> {
        let mut bits = 0u64;
        for &y in members {
            if y >= 1 << ground {
                return Err(Error::InvalidInput(format!("subset {y} is not a subset of {ground}")));
            }
            bits |= 1 << y;
        }
        SubsetFamily::new(ground, bits)
    }

    pub fn full_set(&self) -> u32 {
        (1u32 << self.ground) - 1
    }

    pub fn contains(&self, y: u32) -> bool {
        self.bits >> y & 1 == 1
    }

    /// Member subsets in increasing bitmask order.
    pub fn members(&self) -> Vec<u32> {
        (0..1u32 << self.ground).filter(|&y| self.contains(y)).collect()
    }

    pub fn to_json(&self) -> Json {
        json!(self.members())
    }

    /// The preimage action `PP(g)(A) = {Z ⊆ Y | g⁻¹(Z) ∈ A}`.
    pub fn push_forward(&self, g: &FinMap) -> Result<SubsetFamily> {
        if g.dom.size != self.ground {
            return Err(Error::InvalidInput("map domain differs from the ground set".into()));
        }
        let mut bits = 0u64;
        for z in 0..1u32 << g.cod.size {
            if self.contains(preimage(g, z)) {
                bits |= 1 << z;
            }
        }
        SubsetFamily::new(g.cod.size, bits)
    }
}

/// `g⁻¹(Z)` as a bitmask.
pub fn preimage(g: &FinMap, z: u32) -> u32 {
    g.table
        .iter()
        .enumerate()
        .filter(|(_, &y)| z >> y & 1 == 1)
        .fold(0, |acc, (x, _)| acc | 1 << x)
}

/// The characteristic map of `Y ⊆ n`, with 1 meaning "in".
pub fn chi(n: usize, y: u32) -> FinMap {
    FinMap::from_table(n, 2, (0..n).map(|i| (y >> i & 1) as usize).collect())
}

/// `{Y ⊆ X | x ∈ Y}`.
pub fn double_powerset_unit(n: usize, x: usize) -> Result<SubsetFamily> {
    if x >= n {
        return Err(Error::InvalidInput(format!("{x} is not an element of {n}")));
    }
    let bits = (0..1u32 << n)
        .filter(|y| y >> x & 1 == 1)
        .fold(0u64, |acc, y| acc | 1 << y);
    SubsetFamily::new(n, bits)
}

/// Outcome of the two ultraset axioms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct UltrasetCertificate {
    pub family: SubsetFamily,
    /// `∅ ∉ A`.
    pub us1: bool,
    /// Exactly one of `Y`, `X∖Y` lies in `A`, for every `Y`.
    pub us2: bool,
}

impl UltrasetCertificate {
    pub fn check(family: SubsetFamily) -> Self {
        let full = family.full_set();
        UltrasetCertificate {
            family,
            us1: !family.contains(0),
            us2: (0..=full).all(|y| family.contains(y) != family.contains(full ^ y)),
        }
    }

    pub fn holds(&self) -> bool {
        self.us1 && self.us2
    }
}

pub fn is_ultraset(a: &SubsetFamily) -> bool {
    UltrasetCertificate::check(*a).holds()
}

/// Full ultrafilter axioms: proper, contains `X`, upward closed, closed under
/// binary intersection, and one of each complementary pair.
pub fn is_ultrafilter(a: &SubsetFamily) -> bool {
    let full = a.full_set();
    if a.contains(0) || !a.contains(full) {
        return false;
    }
    let members = a.members();
    for &y in &members {
        for z in 0..=full {
            if z & y == y && !a.contains(z) {
                return false;
            }
        }
        for &z in &members {
            if !a.contains(y & z) {
                return false;
            }
        }
    }
    (0..=full).all(|y| a.contains(y) || a.contains(full ^ y))
}

fn admit_brute_force(n: usize, limit: usize, what: &str, caps: &Caps) -> Result<u64> {
    if n > limit {
        return Err(Error::too_large(
            what,
            format!("2^{}", 1u64 << n.min(63)),
            caps.enumeration,
        ));
    }
    let candidates = checked_pow(2, 1 << n);
    caps.admit(what, candidates).map(|c| c as u64)
}

/// Every ultraset on `n`, by filtering all of `P(P(n))`; ordered by bitmask.
pub fn ultrasets(n: usize, caps: &Caps) -> Result<Vec<SubsetFamily>> {
    let candidates = admit_brute_force(n, MAX_ULTRASET_SIZE, "ultraset candidates P(P(X))", caps)?;
    Ok((0..candidates)
        .map(|bits| SubsetFamily { ground: n, bits })
        .filter(is_ultraset)
        .collect())
}

/// Every ultraset on `n`, built by choosing one set from each complementary pair.
pub fn ultrasets_by_pairs(n: usize) -> Result<Vec<SubsetFamily>> {
    if n == 0 {
        return Ok(Vec::new());
    }
    if n > MAX_FAMILY_GROUND - 1 {
        return Err(Error::too_large(
            "ultrasets",
            format!("2^{}", (1u64 << (n - 1)) - 1),
            1 << 31,
        ));
    }
    let full = (1u32 << n) - 1;
    // representatives: the sets not containing the top element, except ∅
    let reps: Vec<u32> = (1..=full).filter(|y| y >> (n - 1) & 1 == 0).collect();
    let mut out: Vec<SubsetFamily> = (0..1u64 << reps.len())
        .map(|choice| {
            let mut bits = 1u64 << full;
            for (k, &y) in reps.iter().enumerate() {
                let pick = if choice >> k & 1 == 1 { y } else { full ^ y };
                bits |= 1 << pick;
            }
            SubsetFamily { ground: n, bits }
        })
        .collect();
    out.sort();
    Ok(out)
}

/// Every ultrafilter on `n`. Brute force over `P(P(n))` up to size 4; at size 5 the
/// candidates are the ultrasets, which contain every ultrafilter.
pub fn ultrafilters(n: usize, caps: &Caps) -> Result<Vec<SubsetFamily>> {
    if n <= MAX_ULTRASET_SIZE {
        let candidates = admit_brute_force(n, MAX_ULTRASET_SIZE, "ultrafilter candidates P(P(X))", caps)?;
        return Ok((0..candidates)
            .map(|bits| SubsetFamily { ground: n, bits })
            .filter(is_ultrafilter)
            .collect());
    }
    if n > MAX_ULTRAFILTER_SIZE {
        return Err(Error::too_large(
            "ultrafilter candidates",
            format!("2^{}", 1u64 << n),
            caps.enumeration,
        ));
    }
    caps.admit("ultrafilter candidates", Some(1 << ((1 << (n - 1)) - 1)))?;
    Ok(ultrasets_by_pairs(n)?.into_iter().filter(is_ultrafilter).collect())
}

/// Whether exactly one part of every partition `X = P₀ ⊔ P₁ ⊔ P₂` (parts may be empty) lies in `A`.
pub fn partition_criterion(a: &SubsetFamily) -> Result<bool> {
    if !is_ultraset(a) {
        return Err(Error::Precondition("not an ultraset".into()));
    }
    let n = a.ground;
    let mut labels = vec![0usize; n];
    loop {
        let mut parts = [0u32; 3];
        for (x, &l) in labels.iter().enumerate() {
            parts[l] |= 1 << x;
        }
        if parts.iter().filter(|&&p| a.contains(p)).count() != 1 {
            return Ok(false);
        }
        let mut pos = 0;
        loop {
            if pos == n {
                return Ok(true);
            }
            labels[pos] += 1;
            if labels[pos] < 3 {
                break;
            }
            labels[pos] = 0;
            pos += 1;
        }
    }
}

/// `{Y : |Y| > n/2}` on an odd ground set.
pub fn majority_family(n: usize) -> Result<SubsetFamily> {
    let bits = (0..1u32 << n)
        .filter(|y| 2 * y.count_ones() as usize > n)
        .fold(0u64, |acc, y| acc | 1 << y);
    SubsetFamily::new(n, bits)
}

/// The double powerset functor `X ↦ P(P(X))` with the principal-family unit.
/// Element `i` of `PP(X)` is the family with bitmask `i`.
#[derive(Debug, Clone, Copy, Default)]
pub struct DoublePowerset;

impl DoublePowerset {
    fn size(n: usize) -> Result<usize> {
        if n > MAX_ULTRASET_SIZE {
            return Err(Error::too_large("P(P(X))", format!("2^{}", 1u64 << n), 1 << 16));
        }
        Ok(1 << (1 << n))
    }
}

impl CoaugmentedFunctor for DoublePowerset {
    fn name(&self) -> String {
        "PP".into()
    }

    fn object(&self, x: &FinSet) -> Result<FinSet> {
        Ok(FinSet::new(Self::size(x.size)?))
    }

    fn arrow(&self, g: &FinMap) -> Result<FinMap> {
        let (src, tgt) = (Self::size(g.dom.size)?, Self::size(g.cod.size)?);
        let table = (0..src as u64)
            .map(|bits| {
                SubsetFamily {
                    ground: g.dom.size,
                    bits,
                }
                .push_forward(g)
                .map(|f| f.bits as usize)
            })
            .collect::<Result<Vec<_>>>()?;
        FinMap::new(FinSet::new(src), FinSet::new(tgt), table)
    }

    fn unit(&self, x: &FinSet) -> Result<FinMap> {
        let table = x
            .elements()
            .map(|e| double_powerset_unit(x.size, e).map(|f| f.bits as usize))
            .collect::<Result<Vec<_>>>()?;
        FinMap::new(x.clone(), FinSet::new(Self::size(x.size)?), table)
    }
}

/// The ultraset functor `X ↦ US(X)`, a sub-functor of `PP`. Element `i` of
/// `US(X)` is the `i`-th ultraset in bitmask order.
#[derive(Debug, Clone, Copy, Default)]
pub struct UltrasetFunctor {
    pub caps: Caps,
}

impl UltrasetFunctor {
    fn index(&self, n: usize, a: &SubsetFamily) -> Result<usize> {
        ultrasets(n, &self.caps)?
            .binary_search(a)
            .map_err(|_| Error::Structural(format!("{:?} is not an ultraset", a.members())))
    }
}

impl CoaugmentedFunctor for UltrasetFunctor {
    fn name(&self) -> String {
        "US".into()
    }

    fn object(&self, x: &FinSet) -> Result<FinSet> {
        Ok(FinSet::new(ultrasets(x.size, &self.caps)?.len()))
    }

    fn arrow(&self, g: &FinMap) -> Result<FinMap> {
        let src = ultrasets(g.dom.size, &self.caps)?;
        let tgt = ultrasets(g.cod.size, &self.caps)?;
        let table = src
            .iter()
            .map(|a| {
                let b = a.push_forward(g)?;
                tgt.binary_search(&b)
                    .map_err(|_| Error::Structural("US is not closed under the PP action".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        FinMap::new(FinSet::new(src.len()), FinSet::new(tgt.len()), table)
    }

    fn unit(&self, x: &FinSet) -> Result<FinMap> {
        let table = x
            .elements()
            .map(|e| self.index(x.size, &double_powerset_unit(x.size, e)?))
            .collect::<Result<Vec<_>>>()?;
        FinMap::new(x.clone(), self.object(x)?, table)
    }
}

/// Transports a family of `T_{2}(X)` through `χ` into `P(P(X))`.
pub fn transport_family(t: &Completion<FinSetCat>, n: usize, family: &[usize]) -> Result<SubsetFamily> {
    let tc = t.object(&FinSet::new(n))?;
    let mut bits = 0u64;
    for y in 0..1u32 << n {
        let k = tc
            .comma
            .index_of(0, &chi(n, y).table)
            .ok_or_else(|| Error::Internal(format!("χ of {y} missing from the comma category")))?;
        if family[k] == 1 {
            bits |= 1 << y;
        }
    }
    SubsetFamily::new(n, bits)
}

/// Every family of `T_{2}(X)` transported through `χ`, in family order.
pub fn transported_t2(t: &Completion<FinSetCat>, n: usize) -> Result<Vec<SubsetFamily>> {
    if t.targets.len() != 1 || t.targets[0].size != 2 {
        return Err(Error::Precondition("χ transport needs D = {2}".into()));
    }
    let tc = t.object(&FinSet::new(n))?;
    tc.families.iter().map(|f| transport_family(t, n, f)).collect()
}

/// `T₂(X) ≅ US(X)` at `|X| = n`: both algorithms agree, the χ image is exactly the
/// ultrasets, the transport is injective, and units go to principal families.
pub fn verify_t2_is_us(n: usize, caps: &Caps) -> Vec<Check> {
    let mut checks = Vec::new();
    let run = || -> Result<Vec<Check>> {
        let t = finset_completion(&[2], *caps)?;
        let x = FinSet::new(n);
        let mut checks = Vec::new();
        let tc = t.object(&x)?;
        let ends = t.end_equalizer(&x)?;
        checks.push(Check::from_bool(
            format!("T₂({n}): comma-limit = end-equalizer"),
            ends == tc.families,
            format!("{} families", tc.len()),
            json!({"comma": tc.len(), "end": ends.len()}),
        ));
        let image = transported_t2(&t, n)?;
        let distinct: BTreeSet<SubsetFamily> = image.iter().copied().collect();
        checks.push(Check::from_bool(
            format!("T₂({n}) → PP({n}) injective"),
            distinct.len() == image.len(),
            "",
            json!({"families": image.len(), "distinct": distinct.len()}),
        ));
        let us: BTreeSet<SubsetFamily> = ultrasets(n, caps)?.into_iter().collect();
        let missing: Vec<Json> = us.difference(&distinct).map(|f| f.to_json()).collect();
        let extra: Vec<Json> = distinct.difference(&us).map(|f| f.to_json()).collect();
        checks.push(Check::from_bool(
            format!("χ(T₂({n})) = US({n})"),
            missing.is_empty() && extra.is_empty(),
            format!("{} = {}", distinct.len(), us.len()),
            json!({"missing": missing, "extra": extra}),
        ));
        let eta = t.unit(&x)?;
        let bad = x
            .elements()
            .find(|&e| double_powerset_unit(n, e).ok() != Some(image[eta.apply(e)]));
        checks.push(Check::from_bool(
            format!("χ∘η^T₂ = principal at {n}"),
            bad.is_none(),
            "",
            json!({"element": bad}),
        ));
        Ok(checks)
    };
    match run() {
        Ok(mut cs) => checks.append(&mut cs),
        Err(e) => checks.push(Check::from_error(format!("T₂({n}) ≅ US({n})"), &e)),
    }
    checks
}

/// The χ transport commutes with the functor actions of `T₂` and `PP` on every
/// map between universe objects.
pub fn verify_t2_us_naturality(universe: &[usize], caps: &Caps) -> Check {
    let name = "χ: T₂ → PP natural".to_string();
    let run = || -> Result<(bool, usize, Json)> {
        let t = finset_completion(&[2], *caps)?;
        let images: Vec<Vec<SubsetFamily>> = universe.iter().map(|&n| transported_t2(&t, n)).collect::<Result<_>>()?;
        let mut arrows = 0;
        for (i, &a) in universe.iter().enumerate() {
            for (j, &b) in universe.iter().enumerate() {
                for g in all_maps(&FinSet::new(a), &FinSet::new(b), caps)? {
                    arrows += 1;
                    let tg = t.action(&g.dom, &g.cod, &g)?;
                    for (k, fam) in images[i].iter().enumerate() {
                        if fam.push_forward(&g)? != images[j][tg.apply(k)] {
                            return Ok((false, arrows, json!({"arrow": g.table, "family": fam.to_json()})));
                        }
                    }
                }
            }
        }
        Ok((true, arrows, Json::Null))
    };
    match run() {
        Ok((ok, arrows, w)) => Check::from_bool(name, ok, format!("{arrows} arrows"), w),
        Err(e) => Check::from_error(name, &e),
    }
}

/// `|T₃(X)| = |X|` with a unit bijection onto the ultrafilters, plus `T₄(X) ≅ X`
/// for `|X| ≤ 3`.
pub fn verify_t3_is_uf(n: usize, caps: &Caps) -> Vec<Check> {
    let mut checks = Vec::new();
    let x = FinSet::new(n);
    for d in [3usize, 4] {
        if d == 4 && n > 3 {
            continue;
        }
        let name = format!("T_{d}({n}) ≅ {n} via η");
        let res = finset_completion(&[d], *caps).and_then(|t| {
            let tc = t.object(&x)?;
            let eta = t.unit(&x)?;
            Ok((tc.len(), eta.is_bijective()))
        });
        checks.push(match res {
            Ok((size, bij)) => Check::from_bool(
                name,
                size == n && bij,
                format!("{size} families"),
                json!({"families": size, "unit_bijective": bij}),
            ),
            Err(e) => Check::from_error(name, &e),
        });
    }
    let name = format!("UF({n}) = principal families");
    checks.push(match ultrafilters(n, caps) {
        Ok(ufs) => {
            let principal: Vec<SubsetFamily> = (0..n)
                .map(|e| double_powerset_unit(n, e))
                .collect::<Result<_>>()
                .unwrap_or_default();
            let mut sorted = principal.clone();
            sorted.sort();
            Check::from_bool(
                name,
                ufs == sorted,
                format!("{} ultrafilters", ufs.len()),
                json!({"ultrafilters": ufs.iter().map(|f| f.to_json()).collect::<Vec<_>>()}),
            )
        }
        Err(e) => Check::from_error(name, &e),
    });
    checks
}

/// Every ultraset satisfies the partition criterion exactly when it is an ultrafilter.
pub fn verify_partition_lemma(n: usize, caps: &Caps) -> Check {
    let name = format!("partition criterion ⟺ ultrafilter on {n}");
    match ultrasets(n, caps) {
        Ok(us) => {
            let discrepancies: Vec<Json> = us
                .iter()
                .filter(|a| partition_criterion(a).unwrap_or(false) != is_ultrafilter(a))
                .map(|a| a.to_json())
                .collect();
            Check::from_bool(
                name,
                discrepancies.is_empty(),
                format!("{} ultrasets, {} discrepancies", us.len(), discrepancies.len()),
                json!({"discrepancies": discrepancies}),
            )
        }
        Err(e) => Check::from_error(name, &e),
    }
}

/// Note attached to the sub-functor report about the direction of containment.
pub const SUB_MONAD_ERRATUM: &str = "containment tested as UF ⊆ US ⊆ PP; the reverse \
direction T₂ ⊆ UF fails on every |X| ≥ 3 and is flagged as an erratum candidate";

/// `UF ⊆ US ⊆ PP` pointwise with matching units, and both sub-families closed
/// under the preimage action of every map in the universe.
pub fn sub_functor_check(max_size: usize, caps: &Caps) -> Vec<Check> {
    let mut checks = Vec::new();
    let sizes: Vec<usize> = (0..=max_size.min(MAX_ULTRASET_SIZE)).collect();
    let mut ufs = Vec::new();
    let mut uss = Vec::new();
    for &n in &sizes {
        let name = format!("UF({n}) ⊆ US({n}) ⊆ PP({n})");
        match (ultrafilters(n, caps), ultrasets(n, caps)) {
            (Ok(uf), Ok(us)) => {
                let us_set: BTreeSet<_> = us.iter().copied().collect();
                let bad = uf.iter().find(|f| !us_set.contains(f));
                let units_ok = (0..n).all(|e| {
                    double_powerset_unit(n, e)
                        .map(|p| uf.contains(&p) && us_set.contains(&p))
                        .unwrap_or(false)
                });
                checks.push(Check::from_bool(
                    name,
                    bad.is_none() && units_ok,
                    format!("{} ⊆ {} ⊆ {}", uf.len(), us.len(), 1u64 << (1 << n)),
                    json!({"not_ultraset": bad.map(|f| f.to_json()), "units_agree": units_ok}),
                ));
                ufs.push(Some(uf));
                uss.push(Some(us_set));
            }
            (Err(e), _) | (_, Err(e)) => {
                checks.push(Check::from_error(name, &e));
                ufs.push(None);
                uss.push(None);
            }
        }
    }
    let mut bad = None;
    let mut arrows = 0usize;
    'outer: for (i, &a) in sizes.iter().enumerate() {
        for (j, &b) in sizes.iter().enumerate() {
            let (Some(uf_a), Some(us_a), Some(uf_b), Some(us_b)) = (&ufs[i], &uss[i], &ufs[j], &uss[j]) else {
                continue;
            };
            let Ok(maps) = all_maps(&FinSet::new(a), &FinSet::new(b), caps) else {
                continue;
            };
            for g in maps {
                arrows += 1;
                for f in us_a {
                    let image = f.push_forward(&g).expect("sizes match");
                    if !us_b.contains(&image) {
                        bad = Some(json!({"kind": "US", "arrow": g.table, "family": f.to_json()}));
                        break 'outer;
                    }
                }
                for f in uf_a {
                    let image = f.push_forward(&g).expect("sizes match");
                    if !uf_b.contains(&image) {
                        bad = Some(json!({"kind": "UF", "arrow": g.table, "family": f.to_json()}));
                        break 'outer;
                    }
                }
            }
        }
    }
    checks.push(Check::from_bool(
        "PP action restricts to US and UF",
        bad.is_none(),
        format!("{arrows} arrows"),
        bad.unwrap_or_default(),
    ));
    let strict: Vec<(usize, bool)> = sizes
        .iter()
        .zip(ufs.iter().zip(&uss))
        .filter_map(|(&n, (uf, us))| Some((n, us.as_ref()?.len() > uf.as_ref()?.len())))
        .collect();
    checks.push(Check::from_bool(
        "US ⊄ UF exactly from |X| = 3 on",
        strict.iter().all(|&(n, s)| s == (n >= 3)),
        SUB_MONAD_ERRATUM,
        json!({"strict": strict}),
    ));
    checks
}
