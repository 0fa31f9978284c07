//! The fixed desk-scale reproduction set, one harness per criterion.

use std::sync::Arc;
use std::time::{Duration, Instant};

use serde::Serialize;
use serde_json::json;

use crate::caps::Caps;
use crate::category::GroupObject;
use crate::codensity::{finset_completion, uniqueness_audit, CoaugmentedFunctor, EndofunctorTable, IdentityFunctor};
use crate::error::Result;
use crate::finset::FinSet;
use crate::monad::{
    self, expected_identification, standard_builtins, tower, verify_terminal_monad, CorruptedMaybe, MonadFunctor,
    MonadRef, Universe,
};
use crate::operadic::{group_double_dual, vect_double_dual_experiment, verify_powers_theorem};
use crate::report::{summarize, Check, Verdict};
use crate::ultra::{self, DoublePowerset, UltrasetFunctor};

pub const CRITERIA: usize = 10;

#[derive(Debug, Clone, Serialize)]
pub struct CriterionResult {
    pub id: usize,
    pub title: String,
    pub verdict: Verdict,
    pub elapsed_ms: u128,
    pub limit_ms: u128,
    pub checks: Vec<Check>,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "[{:>9}] {:>2}. {} ({} ms, limit {} ms)",
            self.verdict.label(),
            self.id,
            self.title,
            self.elapsed_ms,
            self.limit_ms
        )
    }
}

/// Scorecard options. `corrupt` swaps Maybe for a monad whose multiplication is broken.
#[derive(Debug, Clone, Copy, Default)]
pub struct Scorecard {
    pub caps: Caps,
    pub corrupt: bool,
}

fn title(id: usize) -> &'static str {
    match id {
        1 => "Ultraset counts |US(2)|=2, |US(3)|=8, |US(4)|=128; majority family",
        2 => "Prop T2 = US for |X| ≤ 4",
        3 => "Prop T_Fin = T3 = UF; T4 = Id for |X| ≤ 3",
        4 => "Partition lemma ⟺ ultrafilter for |X| ≤ 4",
        5 => "Equalizer theorem for the builtin monads",
        6 => "Thm powers at d=2",
        7 => "Group double dual: LCM of the orders",
        8 => "Vector-space double dual experiment",
        9 => "Completion tower for every builtin",
        10 => "Terminality audits, D={2}, universe {1,2}",
        _ => "unknown",
    }
}

fn limit(id: usize) -> Duration {
    Duration::from_secs(match id {
        1 => 1,
        2 => 10,
        3 => 60,
        4 => 60,
        5 => 30,
        6 => 120,
        7 => 30,
        8 => 5,
        9 => 60,
        10 => 60,
        _ => 0,
    })
}

fn guard(name: impl Into<String>, r: Result<Vec<Check>>) -> Vec<Check> {
    r.unwrap_or_else(|e| vec![Check::from_error(name, &e)])
}

impl Scorecard {
    pub fn new(caps: Caps) -> Self {
        Scorecard { caps, corrupt: false }
    }

    pub fn run(&self, id: usize) -> CriterionResult {
        let start = Instant::now();
        let mut checks = match id {
            1 => self.ultraset_counts(),
            2 => self.t2_is_us(),
            3 => self.t3_is_uf(),
            4 => self.partition_lemma(),
            5 => self.equalizer_theorem(),
            6 => self.powers(),
            7 => self.group_double_duals(),
            8 => self.vect_experiment(),
            9 => self.towers(),
            10 => self.audits(),
            _ => vec![Check::fail(
                "criterion",
                format!("no criterion {id}"),
                json!({"id": id}),
            )],
        };
        let elapsed = start.elapsed();
        checks.push(Check::from_bool(
            format!("runtime under {} s", limit(id).as_secs()),
            elapsed <= limit(id),
            format!("{} ms", elapsed.as_millis()),
            json!({"elapsed_ms": elapsed.as_millis() as u64, "limit_ms": limit(id).as_millis() as u64}),
        ));
        let verdict = summarize(title(id), &checks).verdict;
        CriterionResult {
            id,
            title: title(id).into(),
            verdict,
            elapsed_ms: elapsed.as_millis(),
            limit_ms: limit(id).as_millis(),
            checks,
        }
    }

    pub fn run_all(&self) -> Vec<CriterionResult> {
        (1..=CRITERIA).map(|id| self.run(id)).collect()
    }

    fn ultraset_counts(&self) -> Vec<Check> {
        let mut checks = Vec::new();
        for (n, want) in [(2usize, 2usize), (3, 8), (4, 128)] {
            let name = format!("|US({n})| = {want}");
            checks.push(match ultra::ultrasets(n, &self.caps) {
                Ok(us) => Check::from_bool(
                    name,
                    us.len() == want,
                    format!("{}", us.len()),
                    json!({"count": us.len()}),
                ),
                Err(e) => Check::from_error(name, &e),
            });
        }
        checks.extend(guard(
            "majority family",
            (|| {
                let maj = ultra::majority_family(3)?;
                let us = ultra::ultrasets(3, &self.caps)?;
                Ok(vec![
                    Check::from_bool(
                        "majority family on 3 is an ultraset",
                        us.contains(&maj),
                        "",
                        maj.to_json(),
                    ),
                    Check::from_bool(
                        "majority family fails the partition criterion",
                        !ultra::partition_criterion(&maj)?,
                        "",
                        maj.to_json(),
                    ),
                ])
            })(),
        ));
        checks
    }

    fn t2_is_us(&self) -> Vec<Check> {
        let mut checks: Vec<Check> = (0..=4).flat_map(|n| ultra::verify_t2_is_us(n, &self.caps)).collect();
        checks.push(ultra::verify_t2_us_naturality(&[0, 1, 2, 3], &self.caps));
        checks
    }

    fn t3_is_uf(&self) -> Vec<Check> {
        (0..=3).flat_map(|n| ultra::verify_t3_is_uf(n, &self.caps)).collect()
    }

    fn partition_lemma(&self) -> Vec<Check> {
        (0..=4).map(|n| ultra::verify_partition_lemma(n, &self.caps)).collect()
    }

    fn monads_for_theorem(&self) -> Vec<MonadRef> {
        let maybe: MonadRef = if self.corrupt {
            Arc::new(CorruptedMaybe)
        } else {
            Arc::new(monad::Maybe)
        };
        vec![
            maybe,
            Arc::new(monad::Writer {
                group: GroupObject::cyclic(2).expect("C2"),
            }),
            Arc::new(monad::Powerset::default()),
            Arc::new(monad::DoubleDual { d: 2 }),
            Arc::new(monad::ConstantOne),
        ]
    }

    fn equalizer_theorem(&self) -> Vec<Check> {
        let universe = Universe::default();
        self.monads_for_theorem()
            .into_iter()
            .flat_map(|m| {
                let name = m.name();
                let expected = expected_identification(if self.corrupt && name == "CorruptedMaybe" {
                    "Maybe"
                } else {
                    &name
                });
                let r = verify_terminal_monad(m, &universe, &self.caps, expected);
                r.checks.into_iter().map(move |mut c| {
                    c.name = format!("[{name}] {}", c.name);
                    c
                })
            })
            .collect()
    }

    fn powers(&self) -> Vec<Check> {
        let mut checks = Vec::new();
        for (n, want) in [(1usize, 8usize), (2, 3)] {
            checks.extend(guard(
                format!("powers n={n}"),
                (|| {
                    let r = verify_powers_theorem(2, n, 3, &self.caps)?;
                    let mut cs = r.checks.clone();
                    cs.push(Check::from_bool(
                        format!("|T_{}(3)| = |hom^{n}| = {want}", 1 << n),
                        r.codensity == want && r.hom_n == want,
                        format!("{} and {}", r.codensity, r.hom_n),
                        json!({"codensity": r.codensity, "operadic": r.hom_n}),
                    ));
                    Ok(cs)
                })(),
            ));
        }
        for c in 0..=3 {
            checks.extend(guard(
                format!("Lemma n′ at c={c}"),
                (|| {
                    let r = verify_powers_theorem(2, 2, c, &self.caps)?;
                    Ok(r.checks
                        .into_iter()
                        .filter(|k| k.name.starts_with("Lemma") || k.name.contains("hom^2 ="))
                        .collect())
                })(),
            ));
        }
        checks
    }

    fn group_double_duals(&self) -> Vec<Check> {
        ["C2", "C3", "C4", "C2xC2", "S3"]
            .iter()
            .flat_map(|name| {
                guard(
                    format!("T_{name}(ℤ)"),
                    (|| {
                        let r = group_double_dual(&GroupObject::by_name(name)?, &self.caps)?;
                        Ok(r.checks
                            .into_iter()
                            .map(|mut c| {
                                c.name = format!("[{name}] {}", c.name);
                                c
                            })
                            .collect())
                    })(),
                )
            })
            .collect()
    }

    fn vect_experiment(&self) -> Vec<Check> {
        guard(
            "vect double dual",
            (|| {
                let r = vect_double_dual_experiment(2, 2, &self.caps)?;
                let mut checks = r.checks.clone();
                checks.push(Check::from_bool(
                    "single-object completion: 8 elements, dimension 3",
                    r.single_object.elements == Some(8) && r.single_object.dimension == 3,
                    format!("{:?}, {}", r.single_object.elements, r.single_object.dimension),
                    json!(r.single_object),
                ));
                checks.push(Check::from_bool(
                    "operadic completion: 4 elements, dimension 2",
                    r.operadic.elements == Some(4) && r.operadic.dimension == 2,
                    format!("{:?}, {}", r.operadic.elements, r.operadic.dimension),
                    json!(r.operadic),
                ));
                checks.push(Check::from_bool(
                    "discrepancy flagged",
                    r.discrepancy,
                    r.note.clone(),
                    json!({}),
                ));
                Ok(checks)
            })(),
        )
    }

    fn towers(&self) -> Vec<Check> {
        let mut checks = Vec::new();
        for m in standard_builtins() {
            let name = m.name();
            // DD3(3) has 3^27 elements
            let universe = if name == "DD3" {
                Universe::new(vec![0, 1, 2])
            } else {
                Universe::default()
            };
            let r = tower(m, 3, &universe, &self.caps);
            let stable = r.stable_level;
            let mut c = summarize(format!("[{name}] tower"), &r.checks);
            if c.passed() {
                c.detail = format!("stable at M{}; {}", stable.unwrap_or(0), c.detail);
            }
            checks.push(c);
        }
        checks
    }

    fn audits(&self) -> Vec<Check> {
        let caps = self.caps;
        let universe = [FinSet::new(1), FinSet::new(2)];
        let functors: Vec<(&str, Box<dyn CoaugmentedFunctor>)> = vec![
            ("Id", Box::new(IdentityFunctor)),
            ("PP", Box::new(DoublePowerset)),
            (
                "DD2",
                Box::new(MonadFunctor {
                    monad: Arc::new(monad::DoubleDual { d: 2 }),
                    caps,
                }),
            ),
            ("US (control)", Box::new(UltrasetFunctor { caps })),
        ];
        functors
            .into_iter()
            .map(|(name, f)| {
                let label = format!("exactly one F → T_2 for F = {name}");
                let res = finset_completion(&[2], caps).and_then(|t| {
                    let table = EndofunctorTable::tabulate(f.as_ref(), &universe, &caps)?;
                    let audit = uniqueness_audit(&table, &t)?;
                    Ok((audit.count(), audit.candidates))
                });
                match res {
                    Ok((count, candidates)) => Check::from_bool(
                        label,
                        count == 1,
                        format!("{count} transformations among {candidates} candidates"),
                        json!({"transformations": count, "candidates": candidates}),
                    ),
                    Err(e) => Check::from_error(label, &e),
                }
            })
            .collect()
    }
}
