use crate::report::{Check, RunReport};
use qmckay::exact::interp::LaurentFit;
use qmckay::exact::rat::{fmt_rat, ri, rq};
use qmckay::fracbern::{
    alpha_power_sum_polynomial, beta_identities_check, tree_sum, tree_sum_fourier, tree_sum_polynomiality,
    DecoratedTree, TreeEdge,
};
use qmckay::group::{ClassKind, Family, GroupModel};
use qmckay::io::{load_or_compute, TableKind};
use qmckay::mckay::{
    closed_form_bb, keys_up_to, restriction_check_a, restriction_check_d2n, CorrelatorTable, Potential,
};
use qmckay::qrr::{bb_polynomiality_check, bernoulli_sum_identities, hodge_bb_correlator, untwisted_correlator, Route};
use qmckay::wdvv::{induction_solve, residual_failures, seed_correlators, Mode, SolveReport};
use qmckay::{Error, Exec, Result};
use serde_json::json;
use std::collections::BTreeMap;
use std::path::Path;

/// A failed check is reported in the run; any other error aborts it.
fn verdict<T>(r: Result<T>) -> Result<std::result::Result<T, String>> {
    match r {
        Ok(v) => Ok(Ok(v)),
        Err(e @ (Error::Mismatch(_)
        | Error::IdentityViolation(_)
        | Error::PolynomialityViolation(_)
        | Error::InternalMismatch(_))) => Ok(Err(e.to_string())),
        Err(e) => Err(e),
    }
}

pub fn chars(family: Family, n: u32) -> Result<RunReport> {
    let g = GroupModel::new(family, n)?;
    let t = g.chars();
    let classes: Vec<_> = g
        .classes
        .iter()
        .map(|c| json!({"name": c.name, "size": c.size, "centralizer": c.centralizer}))
        .collect();
    let irreps: Vec<_> = t.irreps.iter().map(|r| json!({"name": r.name, "dim": r.dim})).collect();
    let table: Vec<Vec<_>> = t.values.iter().map(|row| row.iter().map(|v| v.repr_in(t.modulus)).collect()).collect();
    let mut rep = RunReport::new("chars").param("group", family.tag()).param("n", n);
    rep.result = json!({
        "family": family.tag(),
        "n": n,
        "order": g.order(),
        "classes": classes,
        "irreps": irreps,
        "table": table,
    });
    rep.lines.push(format!("{} order {}", g.label(), g.order()));
    for c in &g.classes {
        rep.lines.push(format!("class {:<8} size {:<4} centralizer {}", c.name, c.size, c.centralizer));
    }
    for (r, row) in t.irreps.iter().zip(&t.values) {
        let vals: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        rep.lines.push(format!("{:<8} {}", r.name, vals.join("  ")));
    }
    Ok(rep)
}

pub fn conjectural_table(n: u32, max_len: u32, cache: Option<&Path>, exec: Exec) -> Result<(CorrelatorTable, bool)> {
    load_or_compute(cache, Family::BinaryDihedral, n, TableKind::Conjectural, max_len, || {
        let p = Potential::binary_dihedral(n)?;
        CorrelatorTable::conjectural(&p, max_len, exec)
    })
}

fn solve(n: u32, max_len: u32, mode: Mode, exec: Exec, cache: Option<&Path>) -> Result<SolveReport> {
    let p = Potential::binary_dihedral(n)?;
    let (full, _) = conjectural_table(n, max_len, cache, exec)?;
    let mut seeds = seed_correlators(&p.group, &full, max_len)?;
    // odd n needs the pure b/ab data from D̂_{2n−2} from length 6 on
    if n % 2 == 1 && max_len >= 6 {
        let big = Potential::binary_dihedral(2 * n - 2)?;
        let bb = big.group.find_class(ClassKind::B).expect("b class");
        let mut rb = BTreeMap::new();
        for m in (4..=max_len).step_by(2) {
            let mut key = vec![0; big.group.num_classes() - 1];
            key[bb - 1] = m;
            rb.insert(m, big.correlator(&key)?);
        }
        seeds.restriction_bb = Some(rb);
    }
    induction_solve(&p.group, &seeds, max_len, mode, exec)
}

/// ψ-free primary correlators of the untwisted theory over the non-unit classes.
fn untwisted_table(family: Family, n: u32, max_len: u32) -> Result<CorrelatorTable> {
    let g = GroupModel::new(family, n)?;
    let nonunit = g.nonunit_classes();
    let mut entries = BTreeMap::new();
    for key in keys_up_to(nonunit.len(), max_len) {
        let classes: Vec<usize> =
            key.iter().zip(&nonunit).flat_map(|(&k, &c)| std::iter::repeat_n(c, k as usize)).collect();
        let v = untwisted_correlator(&g, &classes, &vec![0; classes.len()]);
        entries.insert(key, v);
    }
    let class_names = nonunit.iter().map(|&c| g.classes[c].name.clone()).collect();
    Ok(CorrelatorTable { family, n, class_names, entries })
}

pub fn correlators(
    family: Family,
    n: u32,
    max_len: u32,
    kind: TableKind,
    cache: Option<&Path>,
    exec: Exec,
) -> Result<RunReport> {
    if family != Family::BinaryDihedral && kind != TableKind::Untwisted {
        return Err(Error::UnsupportedPair(format!("{} tables are only built for bdn", kind.tag())));
    }
    let (t, hit) = match kind {
        TableKind::Conjectural => conjectural_table(n, max_len, cache, exec)?,
        TableKind::WdvvSolved => load_or_compute(cache, family, n, kind, max_len, || {
            Ok(solve(n, max_len, Mode::Paper, exec, cache)?.table)
        })?,
        TableKind::Untwisted => {
            load_or_compute(cache, family, n, kind, max_len, || untwisted_table(family, n, max_len))?
        }
    };
    if cache.is_some() {
        eprintln!("cache {}", if hit { "hit" } else { "miss" });
    }
    let mut rep = RunReport::new("correlators")
        .param("group", family.tag())
        .param("n", n)
        .param("max_len", max_len)
        .param("kind", kind.tag());
    rep.lines.push(format!("classes {}", t.class_names.join(" ")));
    for (k, v) in &t.entries {
        let key: Vec<String> = k.iter().map(|x| x.to_string()).collect();
        rep.lines.push(format!("{:<24} {}", key.join(","), fmt_rat(v)));
    }
    rep.result = serde_json::to_value(&t)?;
    Ok(rep)
}

/// Bumps one length-3 entry so that downstream checks must fail.
fn sabotage(t: &mut CorrelatorTable) {
    let key = t.entries.keys().find(|k| k.iter().sum::<u32>() == 3).cloned().expect("length-3 entry");
    *t.entries.get_mut(&key).unwrap() += ri(1);
}

fn wdvv_check(n: u32, t: &CorrelatorTable, max_len: u32, exec: Exec) -> Result<Check> {
    let g = GroupModel::binary_dihedral(n)?;
    let bg = max_len.saturating_sub(3);
    let bad = residual_failures(&g, t, bg, exec)?;
    let count: usize = (0..=bg).map(|b| qmckay::wdvv::all_instances(&g, b).len()).sum();
    let rows = bad
        .iter()
        .map(|(i, r)| {
            let r: Vec<String> = r.iter().map(|(d, c)| format!("λ^{d}: {}", fmt_rat(c))).collect();
            format!("quad {:?} background {:?}: {}", i.quad, i.background, r.join(", "))
        })
        .collect();
    Ok(Check::new(format!("wdvv residuals bdn{n} length <= {max_len}"), count, rows))
}

pub fn wdvv_check_cmd(n: u32, max_len: u32, cache: Option<&Path>, exec: Exec) -> Result<RunReport> {
    let (t, _) = conjectural_table(n, max_len, cache, exec)?;
    let mut rep = RunReport::new("wdvv-check").param("n", n).param("max_len", max_len);
    rep.check(wdvv_check(n, &t, max_len, exec)?);
    Ok(rep)
}

fn compare(name: String, solved: &CorrelatorTable, reference: &CorrelatorTable) -> Check {
    let bad = reference
        .entries
        .iter()
        .filter(|(k, v)| solved.get(k) != Some(v))
        .map(|(k, v)| {
            let got = solved.get(k).map(fmt_rat).unwrap_or_else(|| "missing".into());
            format!("{k:?}: solved {got}, formula {}", fmt_rat(v))
        })
        .collect();
    Check::new(name, reference.entries.len(), bad)
}

pub fn wdvv_solve_cmd(n: u32, max_len: u32, modes: &[Mode], cache: Option<&Path>, exec: Exec) -> Result<RunReport> {
    let (full, _) = conjectural_table(n, max_len, cache, exec)?;
    let mut rep = RunReport::new("wdvv-solve").param("n", n).param("max_len", max_len).param("modes", modes);
    let mut solved = Vec::new();
    let mut stats = serde_json::Map::new();
    for &m in modes {
        let r = solve(n, max_len, m, exec, cache)?;
        rep.check(compare(format!("{m:?} solver vs formula bdn{n}"), &r.table, &full));
        for s in &r.stats {
            rep.lines.push(format!(
                "{m:?} length {} unknowns {} equations {} rank {}",
                s.length, s.unknowns, s.equations, s.rank
            ));
        }
        stats.insert(format!("{m:?}").to_lowercase(), serde_json::to_value(&r.stats)?);
        solved.push(r.table);
    }
    if solved.len() == 2 {
        rep.check(compare("paper mode vs generic mode".into(), &solved[0], &solved[1]));
    }
    rep.result = json!({ "stats": stats });
    Ok(rep)
}

pub fn hodge_cmd(n: u32, m: u32, route: Route, check: bool, exec: Exec) -> Result<RunReport> {
    let v = hodge_bb_correlator(n, m, route, exec)?;
    let c = closed_form_bb(m, n);
    let mut rep = RunReport::new("hodge")
        .param("n", n)
        .param("m", m)
        .param("mode", format!("{route:?}").to_lowercase());
    rep.result = json!({ "value": fmt_rat(&v), "closed_form": fmt_rat(&c), "match": v == c });
    rep.lines.push(format!("<e_b^{}> / λ = {}", 2 * m, fmt_rat(&v)));
    rep.lines.push(format!("closed form    = {}", fmt_rat(&c)));
    if check {
        let bad = if v == c { vec![] } else { vec![format!("{} vs {}", fmt_rat(&v), fmt_rat(&c))] };
        rep.check(Check::new(format!("hodge vs closed form n={n} m={m}"), 1, bad));
    }
    Ok(rep)
}

pub fn preset_tree(name: &str) -> Option<DecoratedTree> {
    let e = |u, v| TreeEdge { u, v, decoration: vec![2] };
    match name {
        "gamma1" => Some(DecoratedTree::star(&[vec![2]])),
        "gamma2" => Some(DecoratedTree::star(&[vec![2], vec![2], vec![2]])),
        "fork" => Some(DecoratedTree {
            vertices: (0..6).collect(),
            edges: vec![e(0, 2), e(1, 2), e(2, 3), e(3, 4), e(3, 5)],
        }),
        _ => None,
    }
}

fn fit_json(f: &LaurentFit) -> serde_json::Value {
    let terms: Vec<_> = f.laurent.terms().into_iter().map(|(e, c)| json!({"exp": e, "coeff": c})).collect();
    json!({ "laurent": terms, "holdout": f.holdout })
}

pub fn bernoulli_graph(
    tree: &DecoratedTree,
    ns: &[u32],
    fit: Option<(&[i64], &[i64])>,
) -> Result<RunReport> {
    tree.validate()?;
    let mut rep = RunReport::new("bernoulli-graph").param("tree", tree).param("n", ns);
    let mut values = Vec::new();
    let mut bad = Vec::new();
    for &n in ns {
        let direct = tree_sum(tree, n)?;
        let fourier = tree_sum_fourier(tree, n)?;
        if direct != fourier {
            bad.push(format!("n={n}: direct {} vs character sum {}", fmt_rat(&direct), fmt_rat(&fourier)));
        }
        rep.lines.push(format!("S_{n} = {}", fmt_rat(&direct)));
        values.push(json!({"n": n, "value": fmt_rat(&direct)}));
    }
    rep.check(Check::new("direct sum vs character sum", ns.len(), bad));
    let mut result = json!({ "values": values });
    if let Some((f, h)) = fit {
        rep = rep.param("fit", f).param("holdout", h);
        match verdict(tree_sum_polynomiality(tree, f, h))? {
            Ok(fit) => {
                rep.lines.push(format!("S_n = {}", fit.laurent));
                result["fit"] = fit_json(&fit);
                rep.check(Check::new("Laurent polynomiality", h.len(), vec![]));
            }
            Err(why) => rep.check(Check::fail("Laurent polynomiality", why)),
        }
    }
    rep.result = result;
    Ok(rep)
}

pub struct VerifyOptions<'a> {
    pub ns: Vec<u32>,
    pub max_len: u32,
    pub sabotage: bool,
    pub cache: Option<&'a Path>,
    pub exec: Exec,
}

fn report_check(rep: &mut RunReport, name: String, r: Result<qmckay::mckay::CheckReport>) -> Result<()> {
    let c = match verdict(r)? {
        Ok(c) => Check::new(name, c.compared, c.mismatches),
        Err(why) => Check::fail(name, why),
    };
    rep.check(c);
    Ok(())
}

pub fn verify_all(o: &VerifyOptions) -> Result<RunReport> {
    let mut rep = RunReport::new("verify-all")
        .param("n", &o.ns)
        .param("max_len", o.max_len)
        .param("sabotage", o.sabotage);
    let l = o.max_len;
    for &n in &o.ns {
        report_check(&mut rep, format!("restriction Z_{} in bdn{n}", 2 * n - 4), restriction_check_a(n, l, o.exec))?;
        report_check(&mut rep, format!("restriction bdn{n} in bdn{}", 2 * n - 2), restriction_check_d2n(n, l))?;

        let (mut t, _) = conjectural_table(n, l, o.cache, o.exec)?;
        if o.sabotage {
            sabotage(&mut t);
        }
        rep.check(wdvv_check(n, &t, l, o.exec)?);
        if l >= 4 {
            let s = solve(n, l, Mode::Paper, o.exec, o.cache)?;
            rep.check(compare(format!("solver vs formula bdn{n} length <= {l}"), &s.table, &t));
        }
        if n % 2 == 0 {
            let mut bad = vec![];
            let p = Potential::binary_dihedral(n)?;
            let b = p.group.find_class(ClassKind::B).expect("b class") - 1;
            let ms: Vec<u32> = (2..=3).filter(|m| 2 * m <= l.max(4)).collect();
            for &m in &ms {
                let h = hodge_bb_correlator(n, m, Route::Lthe, o.exec)?;
                let c = closed_form_bb(m, n);
                let mut key = vec![0; p.group.num_classes() - 1];
                key[b] = 2 * m;
                let pot = p.correlator(&key)?;
                if h != c || pot != c {
                    bad.push(format!(
                        "m={m}: hodge {}, closed form {}, potential {}",
                        fmt_rat(&h),
                        fmt_rat(&c),
                        fmt_rat(&pot)
                    ));
                }
            }
            rep.check(Check::new(format!("hodge vs closed form bdn{n}"), ms.len(), bad));
        }
    }
    let nmax = o.ns.iter().copied().max().unwrap_or(4).max(10);
    match verdict(beta_identities_check(nmax, o.exec))? {
        Ok(r) => rep.check(Check::new("fractional Bernoulli identities", r.instances.len(), vec![])),
        Err(why) => rep.check(Check::fail("fractional Bernoulli identities", why)),
    }
    match verdict(bernoulli_sum_identities(10, nmax))? {
        Ok(k) => rep.check(Check::new("Bernoulli summation identities", k, vec![])),
        Err(why) => rep.check(Check::fail("Bernoulli summation identities", why)),
    }
    let power_sum = verdict(alpha_power_sum_polynomial(2, &[2, 3, 4, 5, 6], &[7, 8, 9, 10]))?;
    let want = [rq(-5, 12), rq(1, 2), rq(-1, 12)];
    let c = match power_sum {
        Ok(f) => {
            let bad = (0..3)
                .filter(|&e| f.laurent.coeff(e) != want[e as usize])
                .map(|e| format!("n^{e}: {} vs {}", fmt_rat(&f.laurent.coeff(e)), fmt_rat(&want[e as usize])))
                .chain((f.laurent.min_exp().unwrap_or(0) < 0 || f.laurent.max_exp().unwrap_or(0) > 2).then(|| {
                    format!("unexpected support {}", f.laurent)
                }))
                .collect();
            Check::new("alpha power sum m=2 polynomial", 3, bad)
        }
        Err(why) => Check::fail("alpha power sum m=2 polynomial", why),
    };
    rep.check(c);
    match verdict(bb_polynomiality_check(2, &[4, 6, 8], &[10], Route::Lthe, o.exec))? {
        Ok(f) => rep.check(Check::new("bb correlator polynomial in n, m=2", f.holdout.len(), vec![])),
        Err(why) => rep.check(Check::fail("bb correlator polynomial in n, m=2", why)),
    }
    let summary: Vec<_> = rep.checks.iter().map(|c| json!({"name": c.name, "passed": c.passed})).collect();
    rep.result = json!({ "checks_run": summary.len(), "failed": summary.iter().filter(|c| c["passed"] == false).count() });
    Ok(rep)
}
