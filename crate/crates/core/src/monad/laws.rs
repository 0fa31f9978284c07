use serde_json::json;

use super::{apply_map, domain, rng_for, Domain, Monad, Universe, Value};
use crate::caps::Caps;
use crate::report::Check;

/// Accumulates one law over every universe object, keeping the first counterexample.
struct Tally {
    name: String,
    checked: usize,
    sampled: Vec<usize>,
    witness: Option<serde_json::Value>,
}

impl Tally {
    fn new(name: impl Into<String>) -> Self {
        Tally {
            name: name.into(),
            checked: 0,
            sampled: Vec::new(),
            witness: None,
        }
    }

    fn note(&mut self, n: usize, d: &Domain) {
        if !d.exhaustive && !self.sampled.contains(&n) {
            self.sampled.push(n);
        }
    }

    fn test(&mut self, n: usize, element: &Value, lhs: &Value, rhs: &Value) {
        self.checked += 1;
        if self.witness.is_none() && lhs != rhs {
            self.witness = Some(json!({
                "law": self.name,
                "object": n,
                "element": element.to_string(),
                "lhs": lhs.to_string(),
                "rhs": rhs.to_string(),
            }));
        }
    }

    fn require(&mut self, n: usize, element: &Value, ok: bool, what: &str) {
        self.checked += 1;
        if self.witness.is_none() && !ok {
            self.witness = Some(json!({
                "law": self.name,
                "object": n,
                "element": element.to_string(),
                "violation": what,
            }));
        }
    }

    fn finish(self) -> Check {
        let mut detail = format!("{} instances", self.checked);
        if self.sampled.is_empty() {
            detail.push_str(", exhaustive");
        } else {
            let sizes: Vec<String> = self.sampled.iter().map(|n| format!("|X|={n}")).collect();
            detail.push_str(&format!(", sampled at {}", sizes.join(",")));
        }
        match self.witness {
            None => Check::pass(self.name, detail),
            Some(w) => Check::fail(self.name, detail, w),
        }
    }
}

/// Unit laws, associativity and naturality of `η` and `μ` on the universe.
/// Quantifier domains too large to enumerate are sampled with the seeded RNG.
pub fn check_monad_laws(m: &dyn Monad, universe: &Universe, caps: &Caps) -> Vec<Check> {
    let name = m.name();
    let arrows = match universe.arrows(caps) {
        Ok(a) => a,
        Err(e) => return vec![Check::from_error(format!("{name} laws"), &e)],
    };
    let mut left = Tally::new(format!("{name}: μ∘ηM = id"));
    let mut right = Tally::new(format!("{name}: μ∘Mη = id"));
    let mut assoc = Tally::new(format!("{name}: μ∘μM = μ∘Mμ"));
    let mut eta_nat = Tally::new(format!("{name}: η natural"));
    let mut mu_nat = Tally::new(format!("{name}: μ natural"));
    let mut closed = Tally::new(format!("{name}: operations stay in M"));
    let unit = |x: &Value| m.unit(x);
    let join = |x: &Value| m.join(x);

    for &n in &universe.sizes {
        let mut rng = rng_for(caps, &format!("laws {name} {n}"));
        let d1 = domain(m, n, 1, caps, &mut rng);
        let d2 = d1.lift(m, caps, &mut rng);
        let d3 = d2.lift(m, caps, &mut rng);
        for (t, d) in [(&mut left, &d1), (&mut right, &d1), (&mut closed, &d2)] {
            t.note(n, d);
        }
        assoc.note(n, &d3);
        mu_nat.note(n, &d2);

        for x in Value::atoms(n) {
            closed.require(n, &x, m.member(&m.unit(&x)), "η(x) ∉ M(X)");
        }
        for v in &d1.values {
            left.test(n, v, &m.join(&m.unit(v)), v);
            right.test(n, v, &m.join(&m.fmap(&unit, v)), v);
        }
        for w in &d2.values {
            closed.require(n, w, m.member(&m.join(w)), "μ(w) ∉ M(X)");
        }
        for z in &d3.values {
            assoc.test(n, z, &m.join(&m.join(z)), &m.join(&m.fmap(&join, z)));
        }
        for g in arrows.iter().filter(|g| g.dom.size == n) {
            let gv = |v: &Value| apply_map(g, v);
            for x in Value::atoms(n) {
                eta_nat.test(n, &x, &m.fmap(&gv, &m.unit(&x)), &m.unit(&gv(&x)));
            }
            for v in &d1.values {
                closed.require(n, v, m.member(&m.fmap(&gv, v)), "M(g)(m) ∉ M(Y)");
            }
            let mg = |v: &Value| m.fmap(&gv, v);
            for w in &d2.values {
                mu_nat.test(n, w, &m.fmap(&gv, &m.join(w)), &m.join(&m.fmap(&mg, w)));
            }
        }
    }
    vec![
        left.finish(),
        right.finish(),
        assoc.finish(),
        eta_nat.finish(),
        mu_nat.finish(),
        closed.finish(),
    ]
}

/// Unit and multiplication compatibility and naturality of a uniform family
/// `f_X: M(X) → N(X)`.
pub fn check_monad_morphism(
    src: &dyn Monad,
    tgt: &dyn Monad,
    f: &dyn Fn(&Value) -> Value,
    universe: &Universe,
    caps: &Caps,
) -> Vec<Check> {
    let label = format!("{} → {}", src.name(), tgt.name());
    let arrows = match universe.arrows(caps) {
        Ok(a) => a,
        Err(e) => return vec![Check::from_error(label, &e)],
    };
    let mut lands = Tally::new(format!("{label}: lands in target"));
    let mut unit = Tally::new(format!("{label}: f∘η = η"));
    let mut mult = Tally::new(format!("{label}: f∘μ = μ∘N(f)∘f"));
    let mut nat = Tally::new(format!("{label}: natural"));
    let ff = |v: &Value| f(v);
    for &n in &universe.sizes {
        let mut rng = rng_for(caps, &format!("morphism {label} {n}"));
        let d1 = domain(src, n, 1, caps, &mut rng);
        let d2 = d1.lift(src, caps, &mut rng);
        lands.note(n, &d1);
        mult.note(n, &d2);
        for x in Value::atoms(n) {
            unit.test(n, &x, &f(&src.unit(&x)), &tgt.unit(&x));
        }
        for v in &d1.values {
            lands.require(n, v, tgt.member(&f(v)), "f(m) ∉ N(X)");
        }
        for w in &d2.values {
            let lhs = f(&src.join(w));
            let rhs = tgt.join(&tgt.fmap(&ff, &f(w)));
            mult.test(n, w, &lhs, &rhs);
        }
        for g in arrows.iter().filter(|g| g.dom.size == n) {
            let gv = |v: &Value| apply_map(g, v);
            for v in &d1.values {
                nat.test(n, v, &tgt.fmap(&gv, &f(v)), &f(&src.fmap(&gv, v)));
            }
        }
    }
    vec![lands.finish(), unit.finish(), mult.finish(), nat.finish()]
}

/// For `f: M → N` and `X` of size `n`: the structure map `a = μ_N ∘ f_{N X}`
/// on `N(X)` retracts `η^M_{N X}`, and consequently `T_M(N X) = η(N X)`.
pub fn algebra_from_morphism(
    src: &dyn Monad,
    tgt: &dyn Monad,
    f: &dyn Fn(&Value) -> Value,
    n: usize,
    caps: &Caps,
) -> Vec<Check> {
    let label = format!("{}-algebra on {}({n})", src.name(), tgt.name());
    let mut rng = rng_for(caps, &label);
    let nx = domain(tgt, n, 1, caps, &mut rng);
    let a = |v: &Value| tgt.join(&f(v));

    let mut retract = Tally::new(format!("{label}: a∘η = id"));
    retract.note(n, &nx);
    for v in &nx.values {
        retract.test(n, v, &a(&src.unit(v)), v);
    }

    // every element of T_M(N X) is η(a(t)); units equalize
    let mut image = Tally::new(format!(
        "T_{}({}({n})) = η({}({n}))",
        src.name(),
        tgt.name(),
        tgt.name()
    ));
    let mnx = nx.lift(src, caps, &mut rng);
    image.note(n, &nx);
    image.note(n, &mnx);
    let mut members = 0usize;
    for v in &nx.values {
        let u = src.unit(v);
        image.require(n, v, super::equalizes(src, &u), "η(n) does not equalize");
    }
    for t in mnx.values.iter().filter(|t| super::equalizes(src, t)) {
        members += 1;
        image.test(n, t, t, &src.unit(&a(t)));
    }
    let mut checks = vec![retract.finish(), image.finish()];
    if nx.exhaustive && mnx.exhaustive {
        let ok = members == nx.values.len();
        checks.push(Check::from_bool(
            format!("|T_{}({}({n}))| = |{}({n})|", src.name(), tgt.name(), tgt.name()),
            ok,
            format!("{members} vs {}", nx.values.len()),
            json!({"object": n, "equalizer": members, "expected": nx.values.len()}),
        ));
    }
    checks
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::GroupObject;
    use crate::monad::{builtin, CorruptedMaybe, Identity, Maybe, Powerset, Writer};

    fn all_pass(checks: &[Check]) -> bool {
        checks.iter().all(|c| c.passed())
    }

    #[test]
    fn classical_monads_satisfy_the_laws() {
        let caps = Caps::default();
        let u = Universe::default();
        for name in ["id", "maybe", "writer-c2", "writer-s3", "p", "p+", "const1"] {
            let m = builtin(name).unwrap();
            let checks = check_monad_laws(m.as_ref(), &u, &caps);
            assert!(all_pass(&checks), "{name}: {checks:#?}");
        }
    }

    #[test]
    fn double_duals_satisfy_the_laws() {
        let caps = Caps::default();
        let u = Universe::new(vec![0, 1, 2]);
        for name in ["dd2", "dd3"] {
            let m = builtin(name).unwrap();
            let checks = check_monad_laws(m.as_ref(), &u, &caps);
            assert!(all_pass(&checks), "{name}: {checks:#?}");
        }
    }

    #[test]
    fn corrupted_multiplication_is_caught() {
        let checks = check_monad_laws(&CorruptedMaybe, &Universe::default(), &Caps::default());
        let left = &checks[0];
        assert!(!left.passed());
        let w = left.witness.as_ref().unwrap();
        assert_eq!(w["law"], "CorruptedMaybe: μ∘ηM = id");
        assert!(w["element"].is_string());
    }

    #[test]
    fn standard_morphisms() {
        let caps = Caps::default();
        let u = Universe::default();
        let maybe = Maybe;
        let eta = |x: &Value| maybe.unit(x);
        assert!(all_pass(&check_monad_morphism(&Identity, &maybe, &eta, &u, &caps)));
        let to_one = |_: &Value| Value::Unit;
        assert!(all_pass(&check_monad_morphism(
            &maybe,
            &crate::monad::ConstantOne,
            &to_one,
            &u,
            &caps
        )));
        // Maybe → P sending Nothing to ∅
        let to_set = |v: &Value| match v {
            Value::Just(x) => Value::Set(vec![(**x).clone()]),
            _ => Value::Set(vec![]),
        };
        assert!(all_pass(&check_monad_morphism(
            &maybe,
            &Powerset::default(),
            &to_set,
            &u,
            &caps
        )));
        // not a morphism: every element to Nothing
        let bad = |_: &Value| Value::Nothing;
        assert!(!all_pass(&check_monad_morphism(&maybe, &maybe, &bad, &u, &caps)));
    }

    #[test]
    fn image_preservation_for_classical_monads() {
        let caps = Caps::default();
        let id = |v: &Value| v.clone();
        let writer = Writer {
            group: GroupObject::cyclic(2).unwrap(),
        };
        for n in 0..=3 {
            for m in [&Maybe as &dyn Monad, &writer, &Powerset::default()] {
                let checks = algebra_from_morphism(m, m, &id, n, &caps);
                assert!(all_pass(&checks), "{} {n}: {checks:#?}", m.name());
            }
        }
    }

    #[test]
    fn algebra_from_unit_and_terminal_maps() {
        let caps = Caps::default();
        let eta = |x: &Value| Maybe.unit(x);
        assert!(all_pass(&algebra_from_morphism(&Identity, &Maybe, &eta, 2, &caps)));
        let to_one = |_: &Value| Value::Unit;
        let checks = algebra_from_morphism(&Maybe, &crate::monad::ConstantOne, &to_one, 2, &caps);
        assert!(all_pass(&checks), "{checks:#?}");
    }
}
