use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use ncsieve_core::cases::{parse_case_table, parse_system, run_cases, CaseOptions, CaseStatus, SHIPPED_CASES};
use ncsieve_core::catalog::{load_catalog_file, load_catalog_from, shipped_names, CATALOG_ENV};
use ncsieve_core::ncp::verify_structure;
use ncsieve_core::sieve::{fix_count, PSelection};
use ncsieve_core::{
    build_group, cat_at_root, count_by_type, coxeter_element, csp_verify, enumerate_ncm, fuss_catalan, length_table,
    qcatalan, reduction_plan, solve_twisted, BuildConfig, CatalogEntry, CoxeterPowers, Elem, Interval, LengthTable, Mode,
    NcpTuple, ReflectionGroup, TypedInterval,
};
use serde_json::{json, Value};

use crate::output::{text_table, Report};
use crate::{Command, Failure, GroupArg, RunConfig};

pub fn dispatch(cmd: &Command, cfg: &RunConfig) -> Result<Report, Failure> {
    match cmd {
        Command::Catalog { group } => catalog(group.as_deref(), cfg),
        Command::GroupVerify { group } => group_verify(group, cfg),
        Command::Catalan { group, m, mode, p } => catalan(group, *m, *mode, p, cfg),
        Command::Ncm { group, m, dump, .. } => ncm(group, *m, *dump, cfg),
        Command::Csp { group, m, mode, divisors_only, p, .. } => {
            let sel = if !p.is_empty() {
                PSelection::List(p.clone())
            } else if *divisors_only {
                PSelection::Divisors
            } else {
                PSelection::All
            };
            csp(group, *m, *mode, &sel, cfg)
        }
        Command::Fix { group, m, mode, p } => fix(group, *m, *mode, *p, cfg),
        Command::Solve { group, exps, relation, len, cent } => solve(group, exps, relation, len, *cent, cfg),
        Command::Decomp { group, types, lengths } => decomp(group, types, lengths, cfg),
        Command::Plan { group, m, mode } => plan(group, *m, *mode, cfg),
        Command::Cases { file, group } => cases(file.as_deref(), group, cfg),
    }
}

fn catalog_dir(cfg: &RunConfig) -> Option<PathBuf> {
    cfg.catalog.clone().or_else(|| std::env::var_os(CATALOG_ENV).map(PathBuf::from))
}

fn resolve_entry(name: &str, cfg: &RunConfig) -> Result<CatalogEntry, Failure> {
    let path = Path::new(name);
    if name.ends_with(".json") || path.is_file() {
        return Ok(load_catalog_file(path)?);
    }
    Ok(load_catalog_from(name, catalog_dir(cfg).as_deref())?)
}

struct Prepared {
    entry: CatalogEntry,
    g: ReflectionGroup,
    l: LengthTable,
    c: Elem,
    iv: Interval,
}

fn prepare(group: &GroupArg, cfg: &RunConfig) -> Result<Prepared, Failure> {
    let entry = resolve_entry(&group.group, cfg)?;
    let g = build_group(&entry, &BuildConfig { order_budget: cfg.order_budget, allow_large: cfg.allow_large })?;
    let l = length_table(&g);
    let c = coxeter_element(&g, &l)?;
    let iv = Interval::new(&g, &l, c);
    Ok(Prepared { entry, g, l, c, iv })
}

fn tuples(p: &Prepared, m: u64, cfg: &RunConfig) -> Result<Vec<NcpTuple>, Failure> {
    check_m(m)?;
    Ok(enumerate_ncm(&p.g, &p.iv, m as usize, cfg.ncm_budget)?)
}

fn check_m(m: u64) -> Result<(), Failure> {
    if m == 0 {
        return Err(Failure::Usage("m must be at least 1".into()));
    }
    Ok(())
}

fn entry_json(e: &CatalogEntry) -> Value {
    json!({
        "name": e.name,
        "rank": e.rank,
        "order": e.order.to_string(),
        "reflections": e.reflections.to_string(),
        "degrees": e.degrees,
        "codegrees": e.codegrees,
        "coxeter_number": e.coxeter_number(),
        "real": e.real,
        "large": e.large,
        "buildable": e.buildable(),
    })
}

fn join<T: ToString>(xs: &[T], sep: &str) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
}

fn catalog(group: Option<&str>, cfg: &RunConfig) -> Result<Report, Failure> {
    let entries: Vec<CatalogEntry> = match group {
        Some(name) => vec![resolve_entry(name, cfg)?],
        None => {
            let dir = catalog_dir(cfg);
            shipped_names().into_iter().map(|n| load_catalog_from(n, dir.as_deref())).collect::<Result<_, _>>()?
        }
    };
    let rows: Vec<Vec<String>> = entries
        .iter()
        .map(|e| {
            let status = if !e.buildable() {
                "degrees only"
            } else if e.large {
                "large"
            } else {
                ""
            };
            vec![
                e.name.clone(),
                e.rank.to_string(),
                e.order.to_string(),
                e.reflections.to_string(),
                join(&e.degrees, " "),
                join(&e.codegrees, " "),
                status.to_string(),
            ]
        })
        .collect();
    let header = ["name", "rank", "order", "reflections", "degrees", "codegrees", "status"];
    let json = json!({ "command": "catalog", "entries": entries.iter().map(entry_json).collect::<Vec<_>>() });
    Ok(Report::new(json, text_table(&header, &rows)).table(&header, rows))
}

fn group_verify(group: &GroupArg, cfg: &RunConfig) -> Result<Report, Failure> {
    let entry = resolve_entry(&group.group, cfg)?;
    let g = build_group(&entry, &BuildConfig { order_budget: cfg.order_budget, allow_large: cfg.allow_large })?;
    let checks = verify_structure(&g);
    let pass = checks.iter().all(|c| c.pass);
    let rows: Vec<Vec<String>> = checks
        .iter()
        .map(|c| vec![c.name.clone(), if c.pass { "pass" } else { "FAIL" }.to_string(), c.detail.clone()])
        .collect();
    let header = ["check", "status", "detail"];
    let mut text = format!("{} (order {})\n", entry.name, g.order());
    text.push_str(&text_table(&header, &rows));
    text.push_str(if pass { "pass\n" } else { "FAIL\n" });
    let json = json!({
        "command": "group-verify",
        "group": entry.name,
        "order": g.order().to_string(),
        "checks": checks.iter().map(|c| json!({"name": c.name, "pass": c.pass, "detail": c.detail})).collect::<Vec<_>>(),
        "pass": pass,
    });
    Ok(Report::new(json, text).table(&header, rows).pass(pass))
}

fn catalan(group: &GroupArg, m: u64, mode: Option<Mode>, ps: &[u64], cfg: &RunConfig) -> Result<Report, Failure> {
    check_m(m)?;
    let entry = resolve_entry(&group.group, cfg)?;
    let fc = fuss_catalan(&entry, m)?;
    let q = qcatalan(&entry, m)?;
    let mut text = format!("Cat^{m}({}) = {fc}\nCat^{m}({}; q) = {q}\n", entry.name, entry.name);
    let mut json = json!({
        "command": "catalan",
        "group": entry.name,
        "m": m,
        "fuss_catalan": fc.to_string(),
        "q_catalan": q.to_string(),
        "degree": q.degree(),
    });
    let mut rows = Vec::new();
    if let Some(mode) = mode {
        let period = mode.period(m, entry.coxeter_number());
        let ps: Vec<u64> = if ps.is_empty() { (0..period).collect() } else { ps.to_vec() };
        let mut evals = Vec::new();
        for p in ps {
            let r = cat_at_root(&entry, m, period, p)?;
            rows.push(vec![p.to_string(), r.order.to_string(), r.value.to_string()]);
            evals.push(json!({"p": p, "order": r.order, "value": r.value.to_string()}));
        }
        text.push_str(&format!("q = zeta_{period}^p\n"));
        text.push_str(&text_table(&["p", "order", "value"], &rows));
        json["mode"] = json!(mode);
        json["evaluations"] = Value::Array(evals);
    }
    Ok(Report::new(json, text).table(&["p", "order", "value"], rows))
}

fn matrix_string(g: &ReflectionGroup, w: Elem) -> String {
    let rows: Vec<String> = g.matrix(w).iter().map(|r| format!("[{}]", join(r, ", "))).collect();
    format!("[{}]", rows.join(", "))
}

fn ncm(group: &GroupArg, m: u64, dump: bool, cfg: &RunConfig) -> Result<Report, Failure> {
    let p = prepare(group, cfg)?;
    let list = tuples(&p, m, cfg)?;
    let fc = fuss_catalan(&p.entry, m)?;
    let count = list.len();
    let pass = fc == count.into();
    let name = &p.entry.name;
    let mut json = json!({
        "command": "ncm",
        "group": name,
        "m": m,
        "count": count.to_string(),
        "fuss_catalan": fc.to_string(),
        "pass": pass,
    });
    let header: Vec<String> = (0..=m).map(|i| format!("w{i}")).collect();
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let mut rows = Vec::new();
    let text = if dump {
        let used: BTreeSet<Elem> = list.iter().flat_map(|t| t.parts().iter().copied()).collect();
        let mut text = format!("# NC^{m}({name}): {count} tuples, one per line as element indices w0 w1 ... w{m}\n");
        let mut elements = Vec::new();
        for &w in &used {
            let mat = matrix_string(&p.g, w);
            text.push_str(&format!("# {w} = {mat}\n"));
            elements.push(json!({"index": w, "matrix": mat}));
        }
        for t in &list {
            let row: Vec<String> = t.parts().iter().map(|w| w.to_string()).collect();
            text.push_str(&row.join(" "));
            text.push('\n');
            rows.push(row);
        }
        json["elements"] = Value::Array(elements);
        json["tuples"] = json!(list.iter().map(|t| t.parts().to_vec()).collect::<Vec<_>>());
        text
    } else {
        format!("|NC^{m}({name})| = {count}, Fuß–Catalan number {fc}: {}\n", if pass { "pass" } else { "FAIL" })
    };
    Ok(Report::new(json, text).table(&header, rows).pass(pass))
}

fn csp(group: &GroupArg, m: u64, mode: Mode, sel: &PSelection, cfg: &RunConfig) -> Result<Report, Failure> {
    let p = prepare(group, cfg)?;
    let list = tuples(&p, m, cfg)?;
    let cp = CoxeterPowers::new(&p.g, p.c);
    let report = csp_verify(&cp, &list, m, mode, sel)?;
    let header = ["p", "fix", "cat", "ok"];
    let rows: Vec<Vec<String>> = report
        .entries
        .iter()
        .map(|e| vec![e.p.to_string(), e.fix.to_string(), e.cat.clone(), e.ok.to_string()])
        .collect();
    let mut text = format!(
        "{} m={m} {mode}: |NC^m| = {}, period {}, action order {}\n",
        report.group,
        report.size,
        mode.period(m, p.entry.coxeter_number()),
        report.action_order
    );
    text.push_str(&text_table(&header, &rows));
    text.push_str(if report.pass { "pass\n" } else { "FAIL\n" });
    let mut json = serde_json::to_value(&report).expect("report serialises");
    json["command"] = json!("csp");
    Ok(Report::new(json, text).table(&header, rows).pass(report.pass))
}

fn fix(group: &GroupArg, m: u64, mode: Mode, p_in: u64, cfg: &RunConfig) -> Result<Report, Failure> {
    let p = prepare(group, cfg)?;
    let list = tuples(&p, m, cfg)?;
    let cp = CoxeterPowers::new(&p.g, p.c);
    let period = mode.period(m, p.entry.coxeter_number());
    let fix = fix_count(&cp, &list, mode, p_in % period);
    let cat = cat_at_root(&p.entry, m, period, p_in % period)?.value;
    let ok = cat == fix.into();
    let json = json!({
        "command": "fix",
        "group": p.entry.name,
        "m": m,
        "mode": mode,
        "p": p_in,
        "fix": fix,
        "cat": cat.to_string(),
        "ok": ok,
    });
    let text = format!("{fix}\n");
    let row = vec![p_in.to_string(), fix.to_string(), cat.to_string(), ok.to_string()];
    Ok(Report::new(json, text).table(&["p", "fix", "cat", "ok"], vec![row]).pass(ok))
}

fn solve(
    group: &GroupArg,
    exps: &str,
    relation: &str,
    len: &str,
    cent: Option<i64>,
    cfg: &RunConfig,
) -> Result<Report, Failure> {
    let sys = parse_system(exps, relation, len, cent).map_err(Failure::Usage)?;
    let p = prepare(group, cfg)?;
    let sols = solve_twisted(&p.g, p.c, &p.l, &p.iv, &sys, cfg.solve_budget)?;
    let types = count_by_type(&p.g, &sols);
    let header: Vec<String> = (1..=sys.slots.len()).map(|i| format!("w{i}")).collect();
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let rows: Vec<Vec<String>> = sols.iter().map(|s| s.iter().map(|w| w.to_string()).collect()).collect();
    let json = json!({
        "command": "solve",
        "group": p.entry.name,
        "system": sys.to_string(),
        "count": sols.len(),
        "solutions": sols,
        "types": types,
    });
    Ok(Report::new(json, format!("{}\n", sols.len())).table(&header, rows))
}

fn decomp(group: &GroupArg, types: &[String], lengths: &[usize], cfg: &RunConfig) -> Result<Report, Failure> {
    let p = prepare(group, cfg)?;
    let ti = TypedInterval::new(&p.g, &p.l, p.c);
    let (key, value) = if types.is_empty() {
        let total: usize = lengths.iter().sum();
        if total != ti.rank() || lengths.contains(&0) {
            return Err(Failure::Usage(format!(
                "lengths {lengths:?} must be positive and sum to the rank {}",
                ti.rank()
            )));
        }
        (json!({ "lengths": lengths }), ti.length_factorisations(lengths))
    } else {
        let names: Vec<&str> = types.iter().map(String::as_str).collect();
        (json!({ "types": types }), ti.decomposition_number(&names)?)
    };
    let mut json = json!({ "command": "decomp", "group": p.entry.name, "value": value.to_string() });
    for (k, v) in key.as_object().expect("object") {
        json[k] = v.clone();
    }
    let label = if types.is_empty() { join(lengths, ",") } else { types.join(",") };
    let row = vec![label, value.to_string()];
    Ok(Report::new(json, format!("{value}\n")).table(&["factors", "value"], vec![row]))
}

fn plan(group: &GroupArg, m: u64, mode: Mode, cfg: &RunConfig) -> Result<Report, Failure> {
    check_m(m)?;
    let entry = resolve_entry(&group.group, cfg)?;
    let plan = reduction_plan(&entry, m, mode);
    let header = ["p", "m1", "m2", "h1", "h2", "status"];
    let rows: Vec<Vec<String>> = plan
        .entries
        .iter()
        .map(|e| {
            vec![
                e.p.to_string(),
                e.m1.to_string(),
                e.m2.to_string(),
                e.h1.to_string(),
                e.h2.to_string(),
                e.status.label().to_string(),
            ]
        })
        .collect();
    let mut text = text_table(&header, &rows);
    text.push_str(&format!("brute force: {}\n", join(&plan.brute_force(), " ")));
    let mut json = serde_json::to_value(&plan).expect("plan serialises");
    json["command"] = json!("plan");
    json["brute_force"] = json!(plan.brute_force());
    Ok(Report::new(json, text).table(&header, rows))
}

fn cases(file: Option<&Path>, groups: &[String], cfg: &RunConfig) -> Result<Report, Failure> {
    let (source, text) = match file {
        Some(path) => (
            path.display().to_string(),
            std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("reading {}: {e}", path.display())))?,
        ),
        None => ("shipped".to_string(), SHIPPED_CASES.to_string()),
    };
    let rows = parse_case_table(&text).map_err(|e| Failure::Usage(format!("{source}: {e}")))?;
    let rows: Vec<_> = rows.into_iter().filter(|r| groups.is_empty() || groups.contains(&r.group)).collect();
    let opts = CaseOptions { allow_large: cfg.allow_large, budget: cfg.solve_budget, catalog_dir: catalog_dir(cfg) };
    let outcomes = run_cases(&rows, &opts);
    let tally = |s: CaseStatus| outcomes.iter().filter(|o| o.status == s).count();
    let (passed, failed, skipped, errors) =
        (tally(CaseStatus::Pass), tally(CaseStatus::Fail), tally(CaseStatus::Skipped), tally(CaseStatus::Error));
    let pass = failed == 0 && errors == 0;
    let header = ["id", "group", "p", "status", "found", "expect", "message"];
    let table: Vec<Vec<String>> = outcomes
        .iter()
        .map(|o| {
            vec![
                o.id.clone(),
                o.group.clone(),
                o.p.clone(),
                o.status.to_string(),
                o.found.map_or("-".into(), |f| f.to_string()),
                o.expect.to_string(),
                o.message.clone(),
            ]
        })
        .collect();
    let mut text = text_table(&header, &table);
    text.push_str(&format!("{passed} passed, {failed} failed, {errors} errors, {skipped} skipped\n"));
    let json = json!({
        "command": "cases",
        "source": source,
        "rows": outcomes,
        "passed": passed,
        "failed": failed,
        "skipped": skipped,
        "errors": errors,
        "pass": pass,
    });
    Ok(Report::new(json, text).table(&header, table).pass(pass))
}
