use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use clap::Parser;
use fincodensity::category::GroupObject;
use fincodensity::codensity::finset_completion;
use fincodensity::monad::{
    builtin, check_monad_laws, expected_identification, standard_builtins, tower, verify_terminal_monad, MonadRef,
    Universe,
};
use fincodensity::operadic::{equalizer_lemma, group_double_dual, vect_double_dual_experiment, verify_powers_theorem};
use fincodensity::report::{summarize, Check, Report, Verdict};
use fincodensity::scorecard::{Scorecard, CRITERIA};
use fincodensity::ultra;
use fincodensity::{Caps, Error, FinSet, Result};
use serde_json::{json, Value as Json};

use crate::{
    Cli, CodensityCommand, Command, Global, Kind, MonadCommand, OperadicCommand, Prop, UltraCommand, VerifyCommand,
};

/// Largest universe object accepted from `--universe`.
const MAX_UNIVERSE_OBJECT: usize = 8;

pub struct Outcome {
    pub report: Report,
    pub text: String,
}

fn caps(g: &Global) -> Result<Caps> {
    if g.cap == 0 {
        return Err(Error::InvalidInput("--cap must be positive".into()));
    }
    if g.max_arity == 0 {
        return Err(Error::InvalidInput("--max-arity must be positive".into()));
    }
    Ok(Caps::default().with_enumeration(g.cap).with_seed(g.seed))
}

pub fn parse_universe(spec: &str) -> Result<Universe> {
    let body = spec.trim().trim_start_matches(['[', '{']).trim_end_matches([']', '}']);
    let mut sizes = Vec::new();
    for part in body.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let n: usize = part
            .parse()
            .map_err(|_| Error::InvalidInput(format!("universe entry {part:?} is not a size")))?;
        if n > MAX_UNIVERSE_OBJECT {
            return Err(Error::InvalidInput(format!(
                "universe objects are limited to {MAX_UNIVERSE_OBJECT} elements, got {n}"
            )));
        }
        sizes.push(n);
    }
    if sizes.is_empty() {
        return Err(Error::InvalidInput("empty universe".into()));
    }
    sizes.sort_unstable();
    sizes.dedup();
    Ok(Universe::new(sizes))
}

fn universe(g: &Global, default: Universe) -> Result<Universe> {
    g.universe.as_deref().map_or(Ok(default), parse_universe)
}

fn echo(g: &Global, args: &[String]) -> Json {
    json!({
        "args": args,
        "config": {
            "max_size": g.max_size,
            "max_arity": g.max_arity,
            "cap": g.cap.to_string(),
            "universe": g.universe,
            "seed": g.seed,
        }
    })
}

fn prefixed(tag: &str, checks: Vec<Check>) -> impl Iterator<Item = Check> + '_ {
    checks.into_iter().map(move |mut c| {
        c.name = format!("[{tag}] {}", c.name);
        c
    })
}

pub fn run(cli: &Cli, args: &[String]) -> Result<Outcome> {
    let start = Instant::now();
    let g = &cli.global;
    let caps = caps(g)?;
    let mut report = Report::new(echo(g, args));
    let mut text = String::new();
    match &cli.command {
        Command::Verify {
            what: VerifyCommand::All,
        } => report.checks = verify_all(g, &caps)?,
        Command::Ultra { what } => ultra_command(what, &caps, &mut report, &mut text)?,
        Command::Monad { what } => monad_command(what, g, &caps, &mut report, &mut text)?,
        Command::Operadic { what } => operadic_command(what, &caps, &mut report, &mut text)?,
        Command::Codensity { what } => codensity_command(what, &caps, &mut report, &mut text)?,
        Command::Scorecard { criteria, corrupt } => {
            scorecard(criteria, *corrupt, &caps, &mut report, &mut text)?;
            report.elapsed_ms = start.elapsed().as_millis() as u64;
            let _ = writeln!(text, "{} ms total", report.elapsed_ms);
            return Ok(Outcome { report, text });
        }
        Command::Recheck { report: path } => recheck(path, &mut report)?,
    }
    report.elapsed_ms = start.elapsed().as_millis() as u64;
    text.push_str(&report.render_text());
    Ok(Outcome { report, text })
}

fn verify_all(g: &Global, caps: &Caps) -> Result<Vec<Check>> {
    let max = g.max_size;
    let mut checks = Vec::new();
    for n in 0..=max.min(4) {
        checks.extend(prefixed("ultra", ultra::verify_t2_is_us(n, caps)));
        checks.extend(prefixed("ultra", vec![ultra::verify_partition_lemma(n, caps)]));
    }
    for n in 0..=max.min(3) {
        checks.extend(prefixed("ultra", ultra::verify_t3_is_uf(n, caps)));
    }
    checks.extend(prefixed("ultra", ultra::sub_functor_check(max.min(4), caps)));

    let small: Vec<FinSet> = (0..=max.min(2)).map(FinSet::new).collect();
    for targets in [vec![2], vec![1, 2], vec![3]] {
        let tag = format!("T_{targets:?}");
        match finset_completion(&targets, *caps) {
            Ok(t) => checks.push(summarize(
                format!("[codensity] {tag} monad laws on |X| ≤ {}", max.min(2)),
                &t.check_laws(&small),
            )),
            Err(e) => checks.push(Check::from_error(format!("[codensity] {tag}"), &e)),
        }
    }

    let default: Universe = Universe::new((0..=max).collect());
    let uni = universe(g, default)?;
    for m in standard_builtins() {
        let name = m.name();
        let u = restrict_universe(&m, &uni);
        let r = verify_terminal_monad(m.clone(), &u, caps, expected_identification(&name));
        checks.push(summarize(format!("[monad] T_{name} equalizer theorem"), &r.checks));
        let t = tower(m, 3, &u, caps);
        checks.push(summarize(format!("[monad] {name} tower"), &t.checks));
    }

    for n in 1..=g.max_arity {
        for c in 0..=max {
            match verify_powers_theorem(2, n, c, caps) {
                Ok(r) => checks.push(summarize(format!("[operadic] powers d=2 n={n} c={c}"), &r.checks)),
                Err(e) => checks.push(Check::from_error(format!("[operadic] powers d=2 n={n} c={c}"), &e)),
            }
        }
        checks
            .push(equalizer_lemma(2, n, caps).unwrap_or_else(|e| Check::from_error("[operadic] equalizer lemma", &e)));
    }
    for name in ["C2", "C3", "C4", "C2xC2", "S3"] {
        let label = format!("[operadic] T_{name}(ℤ)");
        match GroupObject::by_name(name).and_then(|grp| group_double_dual(&grp, caps)) {
            Ok(r) => checks.push(summarize(label, &r.checks)),
            Err(e) => checks.push(Check::from_error(label, &e)),
        }
    }
    for (q, dim) in [(2, 1), (3, 1), (2, 2)] {
        let label = format!("[operadic] vector double dual q={q} dim={dim}");
        match vect_double_dual_experiment(q, dim, caps) {
            Ok(r) => checks.push(summarize(label, &r.checks)),
            Err(e) => checks.push(Check::from_error(label, &e)),
        }
    }
    Ok(checks)
}

/// `DD3(3)` has `3^27` elements, so DD3 is run on the objects of size ≤ 2.
fn restrict_universe(m: &MonadRef, u: &Universe) -> Universe {
    if m.name() == "DD3" {
        let sizes: Vec<usize> = u.sizes.iter().copied().filter(|&n| n <= 2).collect();
        Universe::new(sizes)
    } else {
        u.clone()
    }
}

fn members(f: &ultra::SubsetFamily) -> String {
    let sets: Vec<String> = f
        .members()
        .into_iter()
        .map(|y| {
            let elems: Vec<String> = (0..32).filter(|i| y >> i & 1 == 1).map(|i| i.to_string()).collect();
            format!("{{{}}}", elems.join(","))
        })
        .collect();
    format!("{{{}}}", sets.join(", "))
}

fn ultra_command(cmd: &UltraCommand, caps: &Caps, report: &mut Report, text: &mut String) -> Result<()> {
    match cmd {
        UltraCommand::Enumerate { kind, size } => {
            let (label, families) = match kind {
                Kind::Us => ("ultrasets", ultra::ultrasets(*size, caps)?),
                Kind::Uf => ("ultrafilters", ultra::ultrafilters(*size, caps)?),
            };
            let _ = writeln!(text, "{} {label} on a {size}-element set", families.len());
            for f in &families {
                let _ = writeln!(text, "  {}", members(f));
            }
            report.checks.push(Check::pass(
                format!("enumerate {label} of {size}"),
                format!("{} families", families.len()),
            ));
            if let Kind::Us = kind {
                if let Ok(pairs) = ultra::ultrasets_by_pairs(*size) {
                    report.checks.push(Check::from_bool(
                        "brute force agrees with complementary-pair choices",
                        pairs == families,
                        format!("{} vs {}", families.len(), pairs.len()),
                        json!({"brute_force": families.len(), "pairs": pairs.len()}),
                    ));
                }
            }
            let listed: Vec<Json> = families.iter().map(|f| f.to_json()).collect();
            report.data = json!({"kind": label, "size": size, "count": families.len(), "families": listed});
        }
        UltraCommand::Verify { prop, size } => {
            report.checks = match prop {
                Prop::T2us => ultra::verify_t2_is_us(*size, caps),
                Prop::T3uf => ultra::verify_t3_is_uf(*size, caps),
                Prop::Partition => vec![ultra::verify_partition_lemma(*size, caps)],
            };
        }
    }
    Ok(())
}

fn monad_command(cmd: &MonadCommand, g: &Global, caps: &Caps, report: &mut Report, text: &mut String) -> Result<()> {
    let default = Universe::default();
    match cmd {
        MonadCommand::Laws { spec } => {
            let m = builtin(spec)?;
            let u = universe(g, default)?;
            report.checks = check_monad_laws(m.as_ref(), &u, caps);
        }
        MonadCommand::Terminal { spec } => {
            let m = builtin(spec)?;
            let u = universe(g, default)?;
            let r = verify_terminal_monad(m.clone(), &u, caps, expected_identification(&m.name()));
            let _ = writeln!(
                text,
                "{:>4} {:>8} {:>10}  T(X) = η(X)",
                "|X|",
                "|M X|",
                format!("|T_{} X|", r.monad)
            );
            let show = |v: Option<usize>| v.map_or("-".to_string(), |n| n.to_string());
            for o in &r.objects {
                let unit = match o.unit_image {
                    Some(true) => "yes",
                    Some(false) => "no",
                    None => "-",
                };
                let _ = writeln!(
                    text,
                    "{:>4} {:>8} {:>10}  {unit}",
                    o.size,
                    show(o.m_size),
                    show(o.t_size)
                );
            }
            report.data = serde_json::to_value(&r.objects).expect("serializes");
            report.checks = r.checks;
        }
        MonadCommand::Tower { spec, max_steps } => {
            let m = builtin(spec)?;
            let u = universe(g, default)?;
            let r = tower(m, *max_steps, &u, caps);
            let _ = writeln!(text, "universe {:?}", r.universe);
            for level in &r.levels {
                let sizes: Vec<String> = level
                    .sizes
                    .iter()
                    .map(|s| s.map_or("-".into(), |n| n.to_string()))
                    .collect();
                let _ = writeln!(text, "  {:<24} {}", level.name, sizes.join(" "));
            }
            match r.stable_level {
                Some(i) => {
                    let _ = writeln!(text, "stable at M{i}");
                }
                None => text.push_str("not stable within the step budget\n"),
            }
            report.data = json!({"levels": r.levels, "stable_level": r.stable_level});
            report.checks = r.checks;
        }
    }
    Ok(())
}

fn parse_group(spec: &str) -> Result<GroupObject> {
    if spec.trim_start().starts_with('[') {
        let table: Vec<Vec<usize>> =
            serde_json::from_str(spec).map_err(|e| Error::InvalidInput(format!("group table: {e}")))?;
        GroupObject::from_table(table)
    } else {
        GroupObject::by_name(spec)
    }
}

fn operadic_command(cmd: &OperadicCommand, caps: &Caps, report: &mut Report, text: &mut String) -> Result<()> {
    match cmd {
        OperadicCommand::Powers { d, n, c } => {
            if *d < 2 || *n == 0 {
                return Err(Error::InvalidInput("powers needs d ≥ 2 and n ≥ 1".into()));
            }
            let r = verify_powers_theorem(*d, *n, *c, caps)?;
            let _ = writeln!(
                text,
                "|T_{}({c})| = {}, |hom^{n}| = {}, |hom^≤{n}| = {}",
                d.pow(*n as u32),
                r.codensity,
                r.hom_n,
                r.hom_le_n
            );
            let _ = writeln!(
                text,
                "pointed: |T_{{1,{}}}({c})| = {}, |hom^≤{n}_O| = {}",
                d.pow(*n as u32),
                r.pointed_codensity,
                r.pointed_hom
            );
            let _ = writeln!(text, "arity-0 changes answer: {}", r.arity_zero_changes_answer);
            report.data = serde_json::to_value(&r).expect("serializes");
            report.checks = r.checks;
        }
        OperadicCommand::GroupDd { group } => {
            let r = group_double_dual(&parse_group(group)?, caps)?;
            let _ = writeln!(
                text,
                "{}: |End| = {}, |T(ℤ)| = {}, |⟨φ₁⟩| = {}, lcm of orders = {}",
                r.group, r.endomorphisms, r.equivariant_maps, r.unit_subgroup_order, r.lcm_of_element_orders
            );
            report.data = serde_json::to_value(&r).expect("serializes");
            report.checks = r.checks;
        }
        OperadicCommand::VectDd { q, dim } => {
            let r = vect_double_dual_experiment(*q, *dim, caps)?;
            let show = |s: &fincodensity::operadic::vect::Side| {
                format!(
                    "{} elements, dimension {}",
                    s.elements.map_or("?".into(), |n| n.to_string()),
                    s.dimension
                )
            };
            let _ = writeln!(text, "single object: {}", show(&r.single_object));
            let _ = writeln!(text, "operadic:      {}", show(&r.operadic));
            let _ = writeln!(text, "V**:           dimension {}", r.double_dual_dimension);
            let _ = writeln!(text, "{}", r.note);
            report.data = serde_json::to_value(&r).expect("serializes");
            report.checks = r.checks;
        }
    }
    Ok(())
}

fn codensity_command(cmd: &CodensityCommand, caps: &Caps, report: &mut Report, text: &mut String) -> Result<()> {
    let CodensityCommand::Object { targets, size } = cmd;
    if targets.is_empty() {
        return Err(Error::InvalidInput("at least one target".into()));
    }
    let t = finset_completion(targets, *caps)?;
    let c = FinSet::new(*size);
    let tc = t.object(&c)?;
    let ends = t.end_equalizer(&c);
    let _ = writeln!(
        text,
        "|T_{targets:?}({size})| = {} over {} comma objects",
        tc.len(),
        tc.comma.objects.len()
    );
    let families: Vec<Json> = (0..tc.len()).map(|i| tc.family_json(i)).collect();
    for f in &families {
        let _ = writeln!(text, "  {}", f["values"]);
    }
    report
        .checks
        .push(Check::pass("comma-category limit", format!("{} families", tc.len())));
    report.checks.push(match ends {
        Ok(e) => Check::from_bool(
            "end-equalizer agrees in cardinality",
            e.len() == tc.len(),
            format!("{} vs {}", e.len(), tc.len()),
            json!({"comma": tc.len(), "end": e.len()}),
        ),
        Err(e) => Check::from_error("end-equalizer agrees in cardinality", &e),
    });
    report.data = json!({"targets": targets, "size": size, "count": tc.len(), "families": families});
    Ok(())
}

fn scorecard(criteria: &[usize], corrupt: bool, caps: &Caps, report: &mut Report, text: &mut String) -> Result<()> {
    if let Some(bad) = criteria.iter().find(|&&i| i == 0 || i > CRITERIA) {
        return Err(Error::InvalidInput(format!("no criterion {bad}")));
    }
    let ids: Vec<usize> = if criteria.is_empty() {
        (1..=CRITERIA).collect()
    } else {
        criteria.to_vec()
    };
    let card = Scorecard { caps: *caps, corrupt };
    let mut results = Vec::new();
    for id in ids {
        let r = card.run(id);
        let _ = writeln!(text, "{}", r.line());
        for c in r
            .checks
            .iter()
            .filter(|c| c.verdict != Verdict::Pass && c.verdict != Verdict::Skipped)
        {
            let _ = writeln!(text, "              {}: {}", c.name, c.detail);
            if let (Verdict::Fail, Some(w)) = (c.verdict, &c.witness) {
                let _ = writeln!(text, "                witness: {w}");
            }
        }
        report.checks.extend(prefixed(&format!("C{id}"), r.checks.clone()));
        results.push(json!({"id": r.id, "title": r.title, "verdict": r.verdict, "elapsed_ms": r.elapsed_ms as u64}));
    }
    report.data = json!({"criteria": results});
    Ok(())
}

fn recheck(path: &Path, report: &mut Report) -> Result<()> {
    let body = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    let stored: Report = serde_json::from_str(&body).map_err(|e| Error::InvalidInput(format!("not a report: {e}")))?;
    let args: Vec<String> = serde_json::from_value(stored.command["args"].clone())
        .map_err(|_| Error::InvalidInput("report has no recorded arguments".into()))?;
    let mut argv = vec!["fincodensity".to_string()];
    argv.extend(args.iter().cloned());
    let mut cli = Cli::try_parse_from(&argv).map_err(|e| Error::InvalidInput(e.to_string()))?;
    if matches!(cli.command, Command::Recheck { .. }) {
        return Err(Error::InvalidInput("a recheck report cannot be rechecked".into()));
    }
    let config = &stored.command["config"];
    let g = &mut cli.global;
    g.max_size = config["max_size"].as_u64().map_or(g.max_size, |v| v as usize);
    g.max_arity = config["max_arity"].as_u64().map_or(g.max_arity, |v| v as usize);
    g.cap = config["cap"].as_str().and_then(|s| s.parse().ok()).unwrap_or(g.cap);
    g.seed = config["seed"].as_u64().unwrap_or(g.seed);
    g.universe = config["universe"].as_str().map(str::to_string);
    g.json = None;
    let rerun = run(&cli, &args)?.report;

    let key = |c: &Check| {
        (
            c.name.clone(),
            c.verdict,
            (c.verdict == Verdict::Fail).then(|| c.witness.clone()),
        )
    };
    let before: Vec<_> = stored.checks.iter().map(key).collect();
    let after: Vec<_> = rerun.checks.iter().map(key).collect();
    let mismatch = before.iter().zip(&after).position(|(a, b)| a != b);
    report.checks.push(Check::from_bool(
        "verdicts and failure witnesses reproduce",
        before.len() == after.len() && mismatch.is_none(),
        format!("{} checks re-run", after.len()),
        json!({
            "stored": stored.checks.len(),
            "rerun": rerun.checks.len(),
            "first_mismatch": mismatch.map(|i| json!({"stored": stored.checks[i], "rerun": rerun.checks[i]})),
        }),
    ));
    report.data = json!({"rechecked": stored.command});
    Ok(())
}
