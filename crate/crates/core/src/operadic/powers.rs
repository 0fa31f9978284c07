use serde::Serialize;
use serde_json::json;

use super::{hom_operad_power, points, PowerHom};
use crate::caps::Caps;
use crate::codensity::{finset_completion, CodensityObject};
use crate::error::Result;
use crate::finset::FinSet;
use crate::report::Check;

#[derive(Debug, Clone, Serialize)]
pub struct PowersReport {
    pub d: usize,
    pub n: usize,
    pub c: usize,
    /// `|T_{dⁿ}(c)|`.
    pub codensity: usize,
    /// `|hom^n_{O⁺(d)}(Set(c,d), d)|`.
    pub hom_n: usize,
    /// `|hom^{≤n}_{O⁺(d)}|`.
    pub hom_le_n: usize,
    /// `|T_{{1,dⁿ}}(c)|`.
    pub pointed_codensity: usize,
    /// `|hom^{≤n}_{O(d)}|`.
    pub pointed_hom: usize,
    /// Family index in `T_{dⁿ}(c)` ↦ solution index in `hom^n`.
    pub bijection: Vec<Option<usize>>,
    pub pointed_bijection: Vec<Option<usize>>,
    /// Whether adding the arity-0 constraints removes solutions of `hom^{≤n}_{O⁺(d)}`.
    pub arity_zero_changes_answer: bool,
    pub checks: Vec<Check>,
}

impl PowersReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }
}

/// `φ(f) = x_{(dⁿ, (f,…,f))}` read in the first coordinate.
fn transport(
    tc: &CodensityObject<FinSet>,
    target: usize,
    d: usize,
    n: usize,
    c: usize,
    i: usize,
) -> Option<Vec<usize>> {
    let repunit = (0..n).fold(0usize, |acc, _| acc * d + 1);
    points(c, d)
        .map(|f| {
            let diagonal: Vec<usize> = f.iter().map(|&v| v * repunit).collect();
            tc.value(i, target, &diagonal).map(|x| x % d)
        })
        .collect()
}

fn position(h: &PowerHom, phi: &Option<Vec<usize>>) -> Option<usize> {
    let phi = phi.as_ref()?;
    h.solutions.binary_search_by(|s| s.as_slice().cmp(phi)).ok()
}

/// A transported side is a bijection onto `h` and the units correspond.
fn compare(
    label: &str,
    tc: &CodensityObject<FinSet>,
    units: &[usize],
    phis: &[Option<Vec<usize>>],
    h: &PowerHom,
) -> (Vec<Option<usize>>, Vec<Check>) {
    let map: Vec<Option<usize>> = phis.iter().map(|p| position(h, p)).collect();
    let mut hit: Vec<usize> = map.iter().flatten().copied().collect();
    hit.sort_unstable();
    hit.dedup();
    let bijective = map.iter().all(Option::is_some) && hit.len() == map.len() && hit.len() == h.len();
    let mut checks = vec![Check::from_bool(
        format!("{label}: transport is a bijection"),
        bijective,
        format!("{} ↔ {}", tc.len(), h.len()),
        json!({"codensity": tc.len(), "operadic": h.len(),
               "unmatched": map.iter().position(Option::is_none)}),
    )];
    let bad_unit = units
        .iter()
        .enumerate()
        .find(|(p, &u)| phis[u].as_ref() != Some(&h.unit(*p)))
        .map(|(p, _)| p);
    checks.push(Check::from_bool(
        format!("{label}: units correspond"),
        bad_unit.is_none(),
        format!("{} points", units.len()),
        json!({"point": bad_unit}),
    ));
    (map, checks)
}

/// Both sides of `T_{dⁿ} ≅ hom^n_{O⁺(d)} ≅ hom^{≤n}_{O⁺(d)}` and
/// `T_{{1,dⁿ}} ≅ hom^{≤n}_{O(d)}` at the object `c`, with Lemma n′ monotonicity.
pub fn verify_powers_theorem(d: usize, n: usize, c: usize, caps: &Caps) -> Result<PowersReport> {
    let dn = d.pow(n as u32);
    let cset = FinSet::new(c);
    let t = finset_completion(&[dn], *caps)?;
    let tc = t.object(&cset)?;
    let units = t.unit(&cset)?.table;
    let phis: Vec<_> = (0..tc.len()).map(|i| transport(&tc, 0, d, n, c, i)).collect();

    let hom_n = hom_operad_power(d, c, &[n], caps)?;
    let hom_le = hom_operad_power(d, c, &(1..=n).collect::<Vec<_>>(), caps)?;
    let label = format!("T_{dn}({c}) ≅ hom^{n}_O⁺({d})");
    let (bijection, mut checks) = compare(&label, &tc, &units, &phis, &hom_n);

    let mut lower = Vec::new();
    for k in 1..n {
        lower.push((k, hom_operad_power(d, c, &[k], caps)?));
    }
    let bad = lower
        .iter()
        .find(|(_, h)| !hom_n.solutions.iter().all(|s| h.contains(s)))
        .map(|(k, _)| *k);
    checks.push(Check::from_bool(
        format!("Lemma n′: hom^{n} ⊆ hom^{{n′}} for 1 ≤ n′ ≤ {n} at c={c}"),
        bad.is_none(),
        "",
        json!({"n_prime": bad}),
    ));
    checks.push(Check::from_bool(
        format!("hom^{n} = hom^{{≤{n}}} for O⁺({d}) at c={c}"),
        hom_n.solutions == hom_le.solutions,
        format!("{} vs {}", hom_n.len(), hom_le.len()),
        json!({"hom_n": hom_n.len(), "hom_le_n": hom_le.len()}),
    ));

    let tp = finset_completion(&[1, dn], *caps)?;
    let tpc = tp.object(&cset)?;
    let punits = tp.unit(&cset)?.table;
    let pphis: Vec<_> = (0..tpc.len()).map(|i| transport(&tpc, 1, d, n, c, i)).collect();
    let pointed = hom_operad_power(d, c, &(0..=n).collect::<Vec<_>>(), caps)?;
    let plabel = format!("T_{{1,{dn}}}({c}) ≅ hom^≤{n}_O({d})");
    let (pointed_bijection, pchecks) = compare(&plabel, &tpc, &punits, &pphis, &pointed);
    checks.extend(pchecks);
    checks.push(Check::from_bool(
        format!("hom^≤{n}_O({d}) ⊆ hom^≤{n}_O⁺({d})"),
        pointed.solutions.iter().all(|s| hom_le.contains(s)),
        "",
        json!({}),
    ));

    Ok(PowersReport {
        d,
        n,
        c,
        codensity: tc.len(),
        hom_n: hom_n.len(),
        hom_le_n: hom_le.len(),
        pointed_codensity: tpc.len(),
        pointed_hom: pointed.len(),
        bijection,
        pointed_bijection,
        arity_zero_changes_answer: pointed.solutions != hom_le.solutions,
        checks,
    })
}

/// At `c = dⁿ` the solutions of the arity-`n` constraints are exactly the unit image.
pub fn equalizer_lemma(d: usize, n: usize, caps: &Caps) -> Result<Check> {
    let c = d.pow(n as u32);
    let h = hom_operad_power(d, c, &[n], caps)?;
    let mut units: Vec<Vec<usize>> = (0..c).map(|p| h.unit(p)).collect();
    units.sort();
    Ok(Check::from_bool(
        format!("hom^{n} at c = {d}^{n} is the unit image"),
        h.solutions == units,
        format!("{} solutions, {} points", h.len(), c),
        json!({"solutions": h.len(), "points": c}),
    ))
}
