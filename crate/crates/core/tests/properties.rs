//! Randomized checks of the structural invariants across modules.

use std::sync::Arc;

use fincodensity::category::{ConcreteCategory, FinVectCat, GroupObject, VectObject};
use fincodensity::codensity::{end_product_size, finset_completion};
use fincodensity::finset::{all_maps, FinMap};
use fincodensity::monad::{
    self, check_monad_laws, check_monad_morphism, restrict, tower, Monad, MonadRef, Universe, Value,
};
use fincodensity::operadic::{equalizer_lemma, hom_operad_power};
use fincodensity::report::{Check, Report, Verdict};
use fincodensity::ultra::{self, SubsetFamily};
use fincodensity::{Caps, FinSet};
use proptest::prelude::*;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        ..ProptestConfig::default()
    }
}

fn targets() -> impl Strategy<Value = Vec<usize>> {
    proptest::sample::subsequence(vec![1usize, 2, 3], 1..=2)
}

fn small_map(max: usize) -> impl Strategy<Value = FinMap> {
    (0..=max, 1..=max)
        .prop_flat_map(|(a, b)| proptest::collection::vec(0..b, a).prop_map(move |t| FinMap::from_table(t.len(), b, t)))
}

/// An ultraset on `n` points from one choice per complementary pair, `∅` excluded.
fn ultraset(n: usize) -> impl Strategy<Value = SubsetFamily> {
    let full = (1u32 << n) - 1;
    any::<u64>().prop_map(move |choices| {
        let mut bits = 0u64;
        for (k, y) in (0..=full).filter(|&y| y < full ^ y).enumerate() {
            let pick = if y == 0 || choices >> k & 1 == 0 { full ^ y } else { y };
            bits |= 1 << pick;
        }
        SubsetFamily::new(n, bits).unwrap()
    })
}

fn group(name: &str) -> GroupObject {
    GroupObject::by_name(name).unwrap()
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn comma_limit_agrees_with_end_equalizer(c in 0usize..=3, d in targets()) {
        prop_assume!(end_product_size(c, &d).is_some_and(|s| s <= 1 << 16));
        let t = finset_completion(&d, Caps::default()).unwrap();
        let x = FinSet::new(c);
        prop_assert_eq!(&t.object(&x).unwrap().families, &t.end_equalizer(&x).unwrap());
    }

    #[test]
    fn unit_is_bijective_on_retracts_of_targets(d in targets(), a in 1usize..=3) {
        // every nonempty set of size ≤ |d| is a retract of d
        let t = finset_completion(&d, Caps::default()).unwrap();
        prop_assume!(d.iter().any(|&s| a <= s));
        let x = FinSet::new(a);
        prop_assert_eq!(t.object(&x).unwrap().len(), a);
        prop_assert!(t.unit(&x).unwrap().is_bijective());
    }

    #[test]
    fn ultrasets_and_ultrafilters_are_preserved_by_push_forward(g in small_map(4)) {
        let caps = Caps::default();
        let (a, b) = (g.dom.size, g.cod.size);
        let us_b = ultra::ultrasets(b, &caps).unwrap();
        let uf_b = ultra::ultrafilters(b, &caps).unwrap();
        for f in ultra::ultrasets(a, &caps).unwrap() {
            let image = f.push_forward(&g).unwrap();
            prop_assert!(us_b.contains(&image));
            if ultra::is_ultrafilter(&f) {
                prop_assert!(uf_b.contains(&image));
            }
        }
    }

    #[test]
    fn partition_criterion_characterizes_ultrafilters(a in (1usize..=4).prop_flat_map(ultraset)) {
        prop_assert!(ultra::is_ultraset(&a));
        prop_assert_eq!(ultra::partition_criterion(&a).unwrap(), ultra::is_ultrafilter(&a));
    }

    #[test]
    fn group_hom_search_methods_agree(i in 0usize..6, j in 0usize..6) {
        let names = ["C1", "C2", "C3", "C4", "C2xC2", "S3"];
        let (g, h) = (group(names[i]), group(names[j]));
        let caps = Caps::default();
        prop_assert_eq!(g.homs_by_search(&h, &caps).unwrap(), g.homs_by_generators(&h, &caps).unwrap());
    }

    #[test]
    fn report_json_round_trips(
        names in proptest::collection::vec("[a-z ]{1,12}", 0..6),
        verdicts in proptest::collection::vec(0u8..4, 6),
    ) {
        let mut report = Report::new(serde_json::json!({"args": ["x"]}));
        for (name, v) in names.iter().zip(&verdicts) {
            report.checks.push(match v {
                0 => Check::pass(name.clone(), ""),
                1 => Check::fail(name.clone(), "bad", serde_json::json!({"object": 1})),
                2 => Check::skipped(name.clone(), "skip"),
                _ => Check { name: name.clone(), verdict: Verdict::TooLarge, detail: String::new(), witness: None },
            });
        }
        let back: Report = serde_json::from_str(&serde_json::to_string(&report).unwrap()).unwrap();
        prop_assert_eq!(back.verdicts(), report.verdicts());
        prop_assert_eq!(back.exit_code(), report.exit_code());
    }
}

proptest! {
    #![proptest_config(config(8))]

    #[test]
    fn classical_monads_satisfy_the_laws_for_any_seed(seed in any::<u64>(), which in 0usize..4) {
        let m: MonadRef = match which {
            0 => Arc::new(monad::Maybe),
            1 => Arc::new(monad::Writer { group: group("C3") }),
            2 => Arc::new(monad::Powerset { nonempty: true }),
            _ => Arc::new(monad::DoubleDual { d: 2 }),
        };
        let caps = Caps::default().with_seed(seed);
        let checks = check_monad_laws(m.as_ref(), &Universe::new(vec![0, 1, 2]), &caps);
        prop_assert!(checks.iter().all(Check::passed), "{:?}", checks);
    }

    #[test]
    fn unit_of_maybe_is_a_monad_morphism_from_identity(seed in any::<u64>()) {
        let caps = Caps::default().with_seed(seed);
        let maybe = monad::Maybe;
        let f = |v: &Value| maybe.unit(v);
        let checks = check_monad_morphism(&monad::Identity, &maybe, &f, &Universe::new(vec![0, 1, 2]), &caps);
        prop_assert!(checks.iter().all(Check::passed), "{:?}", checks);
    }

    #[test]
    fn operadic_levels_shrink_and_contain_the_unit(c in 0usize..=3, n in 2usize..=3) {
        let caps = Caps::default();
        let upper = hom_operad_power(2, c, &(1..=n).collect::<Vec<_>>(), &caps).unwrap();
        let lower = hom_operad_power(2, c, &(1..n).collect::<Vec<_>>(), &caps).unwrap();
        prop_assert!(upper.solutions.iter().all(|s| lower.contains(s)));
        for p in 0..c {
            prop_assert!(upper.contains(&upper.unit(p)));
        }
    }
}

#[test]
fn ultraset_counts_follow_the_closed_form() {
    let caps = Caps::default();
    for n in 1..=4usize {
        assert_eq!(ultra::ultrasets(n, &caps).unwrap().len(), 1 << ((1 << (n - 1)) - 1));
        assert_eq!(ultra::ultrafilters(n, &caps).unwrap().len(), n);
    }
}

#[test]
fn vector_space_hom_counts() {
    let caps = Caps::default();
    for q in [2usize, 3] {
        let cat = FinVectCat::new(q).unwrap();
        for dim in 0..=2 {
            let homs = cat.hom(&VectObject::new(dim), &VectObject::new(1), &caps).unwrap();
            assert_eq!(homs.len(), q.pow(dim as u32), "q={q} dim={dim}");
        }
    }
}

#[test]
fn idempotent_monads_are_their_own_terminal_monad() {
    let caps = Caps::default();
    let universe = Universe::default();
    for m in [Arc::new(monad::Identity) as MonadRef, Arc::new(monad::ConstantOne)] {
        let t = restrict(m.clone());
        for &n in &universe.sizes {
            let mut rng = monad::rng_for(&caps, "idempotent");
            let a = monad::domain(m.as_ref(), n, 1, &caps, &mut rng).values;
            let b = monad::domain(t.as_ref(), n, 1, &caps, &mut rng).values;
            assert_eq!(a, b, "{} at {n}", m.name());
        }
        assert_eq!(tower(m, 3, &universe, &caps).stable_level, Some(0));
    }
}

#[test]
fn units_present_powers_as_equalizers() {
    for n in 1..=2 {
        assert!(equalizer_lemma(2, n, &Caps::default()).unwrap().passed());
    }
}

#[test]
fn self_maps_of_a_target_are_its_monoid() {
    let caps = Caps::default();
    let t = finset_completion(&[3], caps).unwrap();
    let three = FinSet::new(3);
    for g in all_maps(&three, &three, &caps).unwrap() {
        assert_eq!(t.action(&three, &three, &g).unwrap().table, g.table);
    }
}
