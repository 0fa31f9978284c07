//! Finite groups given by multiplication tables and their homomorphisms.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::finset::{FinMap, FinSet};

/// Domains up to this size enumerate homomorphisms by pruned search over all set maps.
pub const BRUTE_FORCE_HOM_LIMIT: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawGroup")]
pub struct GroupObject {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub table: Vec<Vec<usize>>,
    #[serde(skip)]
    identity: usize,
    #[serde(skip)]
    inverse: Vec<usize>,
}

#[derive(Deserialize)]
struct RawGroup {
    #[serde(default)]
    name: Option<String>,
    table: Vec<Vec<usize>>,
}

impl TryFrom<RawGroup> for GroupObject {
    type Error = Error;
    fn try_from(raw: RawGroup) -> Result<Self> {
        let mut g = GroupObject::from_table(raw.table)?;
        g.name = raw.name;
        Ok(g)
    }
}

impl GroupObject {
    /// Validates closure, associativity, identity and inverses.
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        let bad = |what: &str| Err(Error::InvalidInput(format!("group table: {what}")));
        if n == 0 {
            return bad("a group has at least one element");
        }
        if table.iter().any(|row| row.len() != n || row.iter().any(|&v| v >= n)) {
            return bad("table is not a closed square");
        }
        let Some(identity) = (0..n).find(|&e| (0..n).all(|a| table[e][a] == a && table[a][e] == a)) else {
            return bad("no identity");
        };
        let mut inverse = vec![0; n];
        for (a, slot) in inverse.iter_mut().enumerate() {
            match (0..n).find(|&b| table[a][b] == identity && table[b][a] == identity) {
                Some(b) => *slot = b,
                None => return bad("missing inverse"),
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return bad("not associative");
                    }
                }
            }
        }
        Ok(GroupObject {
            name: None,
            table,
            identity,
            inverse,
        })
    }

    fn named(mut self, name: &str) -> Self {
        self.name = Some(name.to_string());
        self
    }

    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("C_0 is not finite".into()));
        }
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Ok(GroupObject::from_table(table)?.named(&format!("C{n}")))
    }

    pub fn trivial() -> Self {
        GroupObject::cyclic(1).expect("trivial group").named("1")
    }

    /// Permutations of `{0..n-1}` in lexicographic order, composed as functions.
    pub fn symmetric(n: usize) -> Result<Self> {
        if n == 0 || n > 5 {
            return Err(Error::InvalidInput(format!("S{n} outside 1..=5")));
        }
        let mut perms: Vec<Vec<usize>> = Vec::new();
        permutations(&mut (0..n).collect(), 0, &mut perms);
        perms.sort();
        let index = |p: &Vec<usize>| perms.binary_search(p).expect("permutation listed");
        let table = perms
            .iter()
            .map(|a| {
                perms
                    .iter()
                    .map(|b| index(&(0..n).map(|i| a[b[i]]).collect()))
                    .collect()
            })
            .collect();
        Ok(GroupObject::from_table(table)?.named(&format!("S{n}")))
    }

    pub fn product(a: &GroupObject, b: &GroupObject) -> Self {
        let (n, m) = (a.order(), b.order());
        let table = (0..n * m)
            .map(|x| {
                (0..n * m)
                    .map(|y| a.mul(x / m, y / m) * m + b.mul(x % m, y % m))
                    .collect()
            })
            .collect();
        let name = format!("{}x{}", a.display_name(), b.display_name());
        GroupObject::from_table(table)
            .expect("product of groups is a group")
            .named(&name)
    }

    pub fn klein() -> Self {
        let c2 = GroupObject::cyclic(2).expect("C2");
        GroupObject::product(&c2, &c2)
    }

    /// Builtin groups by name: `C<n>`, `S<n>`, `V4`/`C2xC2`, `1`.
    pub fn by_name(name: &str) -> Result<Self> {
        let lower = name.to_ascii_lowercase();
        if lower == "1" || lower == "trivial" {
            return Ok(GroupObject::trivial());
        }
        if lower == "v4" || lower == "klein" {
            return Ok(GroupObject::klein());
        }
        if lower.contains('x') {
            let mut parts = lower.split('x').map(GroupObject::by_name);
            let first = parts.next().ok_or_else(|| Error::InvalidInput(name.into()))??;
            return parts.try_fold(first, |acc, g| Ok(GroupObject::product(&acc, &g?)));
        }
        let parse = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| Error::InvalidInput(format!("unknown group {name:?}")))
        };
        if let Some(n) = lower.strip_prefix('c') {
            return GroupObject::cyclic(parse(n)?);
        }
        if let Some(n) = lower.strip_prefix('s') {
            return GroupObject::symmetric(parse(n)?);
        }
        Err(Error::InvalidInput(format!("unknown group {name:?}")))
    }

    pub fn display_name(&self) -> String {
        self.name.clone().unwrap_or_else(|| format!("G{}", self.order()))
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn carrier(&self) -> FinSet {
        FinSet::new(self.order())
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn pow(&self, a: usize, k: usize) -> usize {
        (0..k).fold(self.identity, |acc, _| self.mul(acc, a))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Least common multiple of the element orders.
    pub fn exponent(&self) -> usize {
        (0..self.order()).map(|a| self.element_order(a)).fold(1, lcm)
    }

    /// The subgroup generated by `gens`, as a sorted element list.
    pub fn generated(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order()];
        let mut queue = VecDeque::from([self.identity]);
        seen[self.identity] = true;
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        (0..self.order()).filter(|&x| seen[x]).collect()
    }

    /// A generating set chosen greedily by smallest missing element.
    pub fn generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = self.generated(&gens);
        while span.len() < self.order() {
            let next = (0..self.order())
                .find(|x| span.binary_search(x).is_err())
                .expect("a missing element exists");
            gens.push(next);
            span = self.generated(&gens);
        }
        gens
    }

    pub fn is_homomorphism(&self, target: &GroupObject, f: &FinMap) -> bool {
        f.dom.size == self.order()
            && f.cod.size == target.order()
            && (0..self.order())
                .all(|a| (0..self.order()).all(|b| f.apply(self.mul(a, b)) == target.mul(f.apply(a), f.apply(b))))
    }

    /// All homomorphisms to `target`, by the method suited to the domain size.
    pub fn homs(&self, target: &GroupObject, caps: &Caps) -> Result<Vec<FinMap>> {
        if self.order() <= BRUTE_FORCE_HOM_LIMIT {
            self.homs_by_search(target, caps)
        } else {
            self.homs_by_generators(target, caps)
        }
    }

    /// Depth-first search over set maps, pruning as soon as a product of
    /// assigned elements is violated.
    pub fn homs_by_search(&self, target: &GroupObject, caps: &Caps) -> Result<Vec<FinMap>> {
        let n = self.order();
        let mut out = Vec::new();
        let mut assign: Vec<Option<usize>> = vec![None; n];
        self.search(target, 0, &mut assign, &mut out, caps)?;
        out.sort();
        Ok(out
            .into_iter()
            .map(|t| FinMap::from_table(n, target.order(), t))
            .collect())
    }

    fn search(
        &self,
        target: &GroupObject,
        next: usize,
        assign: &mut Vec<Option<usize>>,
        out: &mut Vec<Vec<usize>>,
        caps: &Caps,
    ) -> Result<()> {
        let n = self.order();
        if next == n {
            out.push(assign.iter().map(|a| a.expect("complete")).collect());
            if out.len() as u128 > caps.enumeration {
                return Err(Error::too_large("group homomorphisms", out.len(), caps.enumeration));
            }
            return Ok(());
        }
        for v in 0..target.order() {
            assign[next] = Some(v);
            let consistent = (0..=next).all(|a| {
                (0..=next).all(|b| {
                    let ab = self.mul(a, b);
                    match (assign[a], assign[b], assign[ab]) {
                        (Some(x), Some(y), Some(z)) => target.mul(x, y) == z,
                        _ => true,
                    }
                })
            });
            if consistent {
                self.search(target, next + 1, assign, out, caps)?;
            }
        }
        assign[next] = None;
        Ok(())
    }

    /// Tries every image of a generating set and extends along words.
    pub fn homs_by_generators(&self, target: &GroupObject, caps: &Caps) -> Result<Vec<FinMap>> {
        let gens = self.generators();
        let count = crate::caps::checked_pow(target.order() as u128, gens.len() as u128);
        let count = caps.admit("generator images", count)?;
        let n = self.order();
        let mut out = Vec::new();
        for rank in 0..count {
            let images = crate::finset::lex_unrank(rank, gens.len(), target.order());
            let mut table: Vec<Option<usize>> = vec![None; n];
            table[self.identity] = Some(target.identity());
            let mut queue = VecDeque::from([self.identity]);
            let mut ok = true;
            'bfs: while let Some(x) = queue.pop_front() {
                let fx = table[x].expect("visited");
                for (&g, &img) in gens.iter().zip(&images) {
                    let y = self.mul(x, g);
                    let fy = target.mul(fx, img);
                    match table[y] {
                        Some(prev) if prev != fy => {
                            ok = false;
                            break 'bfs;
                        }
                        Some(_) => {}
                        None => {
                            table[y] = Some(fy);
                            queue.push_back(y);
                        }
                    }
                }
            }
            if !ok {
                continue;
            }
            let table: Vec<usize> = table.into_iter().map(|v| v.expect("generated")).collect();
            let f = FinMap::from_table(n, target.order(), table);
            if self.is_homomorphism(target, &f) {
                out.push(f);
            }
        }
        out.sort_by(|a, b| a.table.cmp(&b.table));
        Ok(out)
    }
}

fn permutations(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == items.len() {
        out.push(items.clone());
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permutations(items, k + 1, out);
        items.swap(k, i);
    }
}

pub fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_groups_are_groups() {
        for name in ["C1", "C2", "C3", "C4", "C6", "V4", "S3", "C2xC3", "S4"] {
            let g = GroupObject::by_name(name).unwrap();
            assert!(GroupObject::from_table(g.table.clone()).is_ok(), "{name}");
        }
        assert_eq!(GroupObject::by_name("S3").unwrap().order(), 6);
        assert_eq!(GroupObject::by_name("C2xC2").unwrap().order(), 4);
        assert!(GroupObject::by_name("Q8").is_err());
    }

    #[test]
    fn invalid_tables_are_rejected() {
        assert!(GroupObject::from_table(vec![vec![0, 1], vec![1, 1]]).is_err());
        assert!(GroupObject::from_table(vec![]).is_err());
        assert!(GroupObject::from_table(vec![vec![0, 2], vec![1, 0]]).is_err());
    }

    #[test]
    fn exponents() {
        assert_eq!(GroupObject::cyclic(4).unwrap().exponent(), 4);
        assert_eq!(GroupObject::klein().exponent(), 2);
        assert_eq!(GroupObject::symmetric(3).unwrap().exponent(), 6);
    }

    #[test]
    fn hom_counts() {
        let caps = Caps::default();
        let c2 = GroupObject::cyclic(2).unwrap();
        let c3 = GroupObject::cyclic(3).unwrap();
        assert_eq!(c2.homs(&c3, &caps).unwrap().len(), 1);
        let s3 = GroupObject::symmetric(3).unwrap();
        assert_eq!(s3.homs(&s3, &caps).unwrap().len(), 10);
        let c4 = GroupObject::cyclic(4).unwrap();
        assert_eq!(c4.homs(&c4, &caps).unwrap().len(), 4);
        let v4 = GroupObject::klein();
        assert_eq!(v4.homs(&v4, &caps).unwrap().len(), 16);
    }

    #[test]
    fn both_hom_methods_agree() {
        let caps = Caps::default();
        let groups: Vec<GroupObject> = ["C1", "C2", "C3", "C4", "V4", "S3", "C6"]
            .iter()
            .map(|n| GroupObject::by_name(n).unwrap())
            .collect();
        for a in &groups {
            for b in &groups {
                let x = a.homs_by_search(b, &caps).unwrap();
                let y = a.homs_by_generators(b, &caps).unwrap();
                assert_eq!(x, y, "{} → {}", a.display_name(), b.display_name());
                assert!(x.iter().all(|f| a.is_homomorphism(b, f)));
            }
        }
    }

    #[test]
    fn large_domains_use_generators() {
        let caps = Caps::default();
        let s4 = GroupObject::symmetric(4).unwrap();
        let c2 = GroupObject::cyclic(2).unwrap();
        // trivial and sign
        assert_eq!(s4.homs(&c2, &caps).unwrap().len(), 2);
    }
}
