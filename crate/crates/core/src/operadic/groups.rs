use serde::Serialize;
use serde_json::json;

use super::MonoidAction;
use crate::caps::Caps;
use crate::category::group::lcm;
use crate::category::GroupObject;
use crate::error::Result;
use crate::finset::FinMap;
use crate::report::Check;

/// `T_G(ℤ) = hom_{End(G)}(G, G)` via `hom(ℤ, G) ≅ G`, `β ↦ β(1)`.
#[derive(Debug, Clone, Serialize)]
pub struct GroupDoubleDual {
    pub group: String,
    pub order: usize,
    pub endomorphisms: usize,
    pub endomorphisms_by_generators: usize,
    /// `|T_G(ℤ)|`: self-maps of `G` commuting with every endomorphism.
    pub equivariant_maps: usize,
    /// Order of the cyclic subgroup generated by the unit image `φ₁ = id`.
    pub unit_subgroup_order: usize,
    pub lcm_of_element_orders: usize,
    pub checks: Vec<Check>,
}

impl GroupDoubleDual {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }
}

fn pointwise(g: &GroupObject, a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().zip(b).map(|(&x, &y)| g.mul(x, y)).collect()
}

pub fn group_double_dual(g: &GroupObject, caps: &Caps) -> Result<GroupDoubleDual> {
    let n = g.order();
    let ends = g.homs_by_search(g, caps)?;
    let by_gens = g.homs_by_generators(g, caps)?;
    let mut checks = vec![Check::from_bool(
        "End(G) by search = End(G) by generator images",
        ends == by_gens,
        format!("{} vs {}", ends.len(), by_gens.len()),
        json!({"search": ends.len(), "generators": by_gens.len()}),
    )];

    let mul = ends
        .iter()
        .map(|a| {
            ends.iter()
                .map(|b| {
                    let ab = a.after(b).expect("composable");
                    ends.iter()
                        .position(|e| *e == ab)
                        .expect("End(G) closed under composition")
                })
                .collect()
        })
        .collect();
    let id_map = FinMap::identity(&g.carrier());
    let identity = ends.iter().position(|e| *e == id_map).expect("identity endomorphism");
    let action = MonoidAction {
        mul,
        identity,
        on_x: ends.clone(),
        on_c: ends.clone(),
    };
    checks.push(action.check());
    let homs = action.hom_set(caps)?;

    let closed = homs
        .iter()
        .all(|a| homs.iter().all(|b| homs.binary_search(&pointwise(g, a, b)).is_ok()));
    checks.push(Check::from_bool(
        "T_G(ℤ) closed under pointwise multiplication",
        closed,
        format!("{} maps", homs.len()),
        json!({}),
    ));

    let id: Vec<usize> = (0..n).collect();
    let trivial = vec![g.identity(); n];
    let mut power = id.clone();
    let mut order = 1;
    let mut powers_inside = homs.binary_search(&id).is_ok();
    while power != trivial {
        power = pointwise(g, &power, &id);
        powers_inside &= homs.binary_search(&power).is_ok();
        order += 1;
    }
    checks.push(Check::from_bool(
        "g ↦ gᵏ lies in T_G(ℤ) for every k",
        powers_inside,
        "",
        json!({}),
    ));
    let lcm_orders = (0..n).map(|x| g.element_order(x)).fold(1, lcm);
    checks.push(Check::from_bool(
        "|⟨φ₁⟩| = lcm of element orders",
        order == lcm_orders,
        format!("{order} vs {lcm_orders}"),
        json!({"unit_subgroup": order, "lcm": lcm_orders}),
    ));

    Ok(GroupDoubleDual {
        group: g.display_name(),
        order: n,
        endomorphisms: ends.len(),
        endomorphisms_by_generators: by_gens.len(),
        equivariant_maps: homs.len(),
        unit_subgroup_order: order,
        lcm_of_element_orders: lcm_orders,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finset::{all_maps, FinSet};

    #[test]
    fn unit_subgroup_orders() {
        let caps = Caps::default();
        for (name, want) in [("C2", 2), ("C3", 3), ("C4", 4), ("C2xC2", 2), ("S3", 6)] {
            let g = GroupObject::by_name(name).unwrap();
            let r = group_double_dual(&g, &caps).unwrap();
            assert!(r.passed(), "{name}: {:#?}", r.checks);
            assert_eq!(r.unit_subgroup_order, want, "{name}");
        }
    }

    #[test]
    fn s3_has_ten_endomorphisms() {
        let g = GroupObject::symmetric(3).unwrap();
        let r = group_double_dual(&g, &Caps::default()).unwrap();
        assert_eq!(r.endomorphisms, 10);
        assert_eq!(r.endomorphisms_by_generators, 10);
    }

    #[test]
    fn equivariant_maps_match_brute_force() {
        let caps = Caps::default();
        for name in ["C4", "S3"] {
            let g = GroupObject::by_name(name).unwrap();
            let ends = g.homs(&g, &caps).unwrap();
            let brute = all_maps(&FinSet::new(g.order()), &FinSet::new(g.order()), &caps)
                .unwrap()
                .into_iter()
                .filter(|f| {
                    ends.iter()
                        .all(|a| (0..g.order()).all(|x| f.apply(a.apply(x)) == a.apply(f.apply(x))))
                })
                .count();
            let r = group_double_dual(&g, &caps).unwrap();
            assert_eq!(r.equivariant_maps, brute, "{name}");
        }
    }
}
