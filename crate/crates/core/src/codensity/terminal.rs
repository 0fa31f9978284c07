use serde_json::json;

use super::{Completion, EndofunctorTable};
use crate::caps::checked_pow;
use crate::category::FinSetCat;
use crate::error::{Error, Result};
use crate::finset::{solver::Network, FinMap};
use crate::report::Check;

/// Inverses of `η^F_d` for every `d ∈ D`, indexed like the targets.
fn inverse_units(f: &EndofunctorTable, t: &Completion<FinSetCat>) -> Result<Vec<(usize, FinMap)>> {
    t.targets
        .iter()
        .map(|d| {
            let p = f.position(d).ok_or_else(|| {
                Error::Precondition(format!(
                    "D not preserved by F: {} is not in the universe of {}",
                    d.size, f.name
                ))
            })?;
            let inv = f.units[p].inverse().ok_or_else(|| {
                Error::Precondition(format!(
                    "D not preserved by F: η^{} is not a bijection at {}",
                    f.name, d.size
                ))
            })?;
            Ok((p, inv))
        })
        .collect()
}

/// `δ_c(u)_(d,f) = (η^F_d)⁻¹(F(f)(u))` for universe object `c = f.universe[i]`.
pub fn terminal_map(f: &EndofunctorTable, t: &Completion<FinSetCat>, i: usize) -> Result<FinMap> {
    let inverses = inverse_units(f, t)?;
    let c = &f.universe[i];
    let tc = t.object(c)?;
    let table = f.objects[i]
        .elements()
        .map(|u| {
            let family = tc
                .comma
                .objects
                .iter()
                .map(|o| {
                    let (p, inv) = &inverses[o.target];
                    let fimage = f
                        .image(i, *p, &o.map.table)
                        .ok_or_else(|| Error::Internal("arrow missing from the functor table".into()))?;
                    Ok(inv.apply(fimage.apply(u)))
                })
                .collect::<Result<Vec<_>>>()?;
            tc.index_of(&family).ok_or_else(|| {
                Error::Structural(format!(
                    "δ at {} sends element {u} to a non-natural family; {} is not a functor",
                    c.size, f.name
                ))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    FinMap::new(f.objects[i].clone(), tc.carrier(), table)
}

/// `δ ∘ η^F = η^T` and naturality of `δ` on every universe arrow.
pub fn verify_terminal_map(f: &EndofunctorTable, t: &Completion<FinSetCat>) -> Vec<Check> {
    let mut checks = Vec::new();
    let mut deltas = Vec::new();
    for (i, c) in f.universe.iter().enumerate() {
        let name = format!("δ∘η^{} = η^T at {}", f.name, c.size);
        match terminal_map(f, t, i).and_then(|d| {
            let lhs = d.after(&f.units[i])?;
            Ok((lhs == t.unit(c)?, d))
        }) {
            Ok((ok, d)) => {
                checks.push(Check::from_bool(name, ok, "", json!({"object": c.size})));
                deltas.push(Some(d));
            }
            Err(e) => {
                checks.push(Check::from_error(name, &e));
                deltas.push(None);
            }
        }
    }
    let mut bad = None;
    let mut count = 0usize;
    for a in &f.arrows {
        let (Some(d1), Some(d2)) = (&deltas[a.source], &deltas[a.target]) else {
            continue;
        };
        count += 1;
        let ok = t
            .action(&a.map.dom, &a.map.cod, &a.map)
            .and_then(|tg| Ok(tg.after(d1)? == d2.after(&a.image)?));
        match ok {
            Ok(true) => {}
            Ok(false) => {
                bad = Some(json!({"arrow": a.map.table, "source": f.universe[a.source].size}));
                break;
            }
            Err(e) => {
                checks.push(Check::from_error("δ natural", &e));
                return checks;
            }
        }
    }
    checks.push(Check::from_bool(
        format!("δ: {} → T natural", f.name),
        bad.is_none(),
        format!("{count} arrows"),
        bad.unwrap_or_default(),
    ));
    checks
}

/// Every natural transformation `F → T_D` on the universe that commutes with the units.
#[derive(Debug, Clone)]
pub struct AuditOutcome {
    /// Size of the raw candidate space `∏_c |T(c)|^{|F(c)|}`.
    pub candidates: u128,
    /// Each transformation as its components, one per universe object.
    pub transformations: Vec<Vec<FinMap>>,
}

impl AuditOutcome {
    pub fn count(&self) -> usize {
        self.transformations.len()
    }
}

/// Enumerates all coaugmentation-compatible natural transformations `F → T_D`
/// as solutions of a constraint network over the variables `(c, u ∈ F(c))`.
pub fn uniqueness_audit(f: &EndofunctorTable, t: &Completion<FinSetCat>) -> Result<AuditOutcome> {
    let tables: Vec<_> = f.universe.iter().map(|c| t.object(c)).collect::<Result<_>>()?;
    let candidates = f.objects.iter().zip(&tables).try_fold(1u128, |acc, (fc, tc)| {
        acc.checked_mul(checked_pow(tc.len() as u128, fc.size as u128)?)
    });
    let candidates = match candidates {
        Some(n) if n <= t.caps.audit => n,
        other => {
            return Err(Error::too_large(
                "natural-transformation candidates",
                other.map(|n| n.to_string()).unwrap_or("overflow".into()),
                t.caps.audit,
            ))
        }
    };
    let mut offsets = Vec::new();
    let mut sizes = Vec::new();
    for (fc, tc) in f.objects.iter().zip(&tables) {
        offsets.push(sizes.len());
        sizes.extend(std::iter::repeat_n(tc.len(), fc.size));
    }
    let mut net = Network::new(sizes);
    for a in &f.arrows {
        let tg = t.action(&a.map.dom, &a.map.cod, &a.map)?;
        for u in f.objects[a.source].elements() {
            net.add(
                vec![offsets[a.source] + u],
                offsets[a.target] + a.image.apply(u),
                tg.table.clone(),
            )?;
        }
    }
    for (i, c) in f.universe.iter().enumerate() {
        let eta_t = t.unit(c)?;
        for x in c.elements() {
            let want = eta_t.apply(x);
            net.restrict(offsets[i] + f.units[i].apply(x), move |v| v == want);
        }
    }
    let solutions = net.solve(t.caps.audit, "natural transformations")?;
    let transformations = solutions
        .iter()
        .map(|s| {
            f.objects
                .iter()
                .zip(&tables)
                .enumerate()
                .map(|(i, (fc, tc))| {
                    FinMap::new(fc.clone(), tc.carrier(), s[offsets[i]..offsets[i] + fc.size].to_vec())
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(AuditOutcome {
        candidates,
        transformations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::caps::Caps;
    use crate::codensity::{finset_completion, IdentityFunctor};
    use crate::finset::FinSet;

    fn universe() -> Vec<FinSet> {
        vec![FinSet::new(1), FinSet::new(2)]
    }

    #[test]
    fn identity_has_exactly_the_unit() {
        let caps = Caps::default();
        let t2 = finset_completion(&[2], caps).unwrap();
        let id = EndofunctorTable::tabulate(&IdentityFunctor, &universe(), &caps).unwrap();
        let audit = uniqueness_audit(&id, &t2).unwrap();
        assert_eq!(audit.count(), 1);
        for (i, c) in universe().iter().enumerate() {
            assert_eq!(audit.transformations[0][i], t2.unit(c).unwrap());
        }
        assert!(verify_terminal_map(&id, &t2).iter().all(|c| c.passed()));
    }

    #[test]
    fn completion_maps_to_itself_by_the_identity() {
        let caps = Caps::default();
        let t2 = finset_completion(&[2], caps).unwrap();
        let universe: Vec<FinSet> = (0..=3).map(FinSet::new).collect();
        let table = EndofunctorTable::tabulate(&t2, &universe, &caps).unwrap();
        for i in 0..universe.len() {
            let d = terminal_map(&table, &t2, i).unwrap();
            assert_eq!(d, FinMap::identity(&table.objects[i]));
        }
        let small = EndofunctorTable::tabulate(&t2, &universe[..3], &caps).unwrap();
        assert_eq!(uniqueness_audit(&small, &t2).unwrap().count(), 1);
    }

    #[test]
    fn precondition_is_enforced() {
        let caps = Caps::default();
        let t3 = finset_completion(&[3], caps).unwrap();
        let id = EndofunctorTable::tabulate(&IdentityFunctor, &universe(), &caps).unwrap();
        let err = terminal_map(&id, &t3, 0).unwrap_err();
        assert!(err.to_string().contains("D not preserved by F"));
    }

    #[test]
    fn audit_respects_its_cap() {
        let caps = Caps {
            audit: 4,
            ..Caps::default()
        };
        let t2 = finset_completion(&[2], caps).unwrap();
        let u: Vec<FinSet> = (1..=3).map(FinSet::new).collect();
        let t = EndofunctorTable::tabulate(&t2, &u, &caps).unwrap();
        assert!(uniqueness_audit(&t, &t2).unwrap_err().is_too_large());
    }
}
