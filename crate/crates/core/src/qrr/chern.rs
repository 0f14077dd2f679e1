//! Genus-0 Hurwitz–Hodge integrals `∫ ch_{p₁}…ch_{p_r}` of `Rπ_*f^*V_{ρ₁}`
//! on the `t_0^{[b]}` axis.
//!
//! Polynomials live on a small space of relevant variables. A monomial of an
//! intermediate function whose non-`t_0^{[b]}` degree (its excess) exceeds
//! the number of operators still to act can never reach the axis, and is
//! dropped.

use super::lthe::{lthe_enumerate, Slot};
use super::operator::QuantizationOp;
use crate::exact::rat::{factorial, fmt_rat, ri, rq};
use crate::exact::{Rat, TruncPoly};
use crate::group::GroupModel;
use crate::par::{self, Exec};
use crate::{Error, Result};
use num_traits::{One, Zero};
use serde::Serialize;
use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, Mutex};

/// Which evaluation of the operator expansion to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Route {
    /// Sum of contributions of labeled trees with half edges.
    Lthe,
    /// Repeated differentiation of the genus-0 flow equations in the `s_p`.
    Sequential,
    /// Both, failing on any disagreement.
    Both,
}

/// Degree cap for intermediate polynomials; pruning keeps degrees far below.
const CAP: u32 = 200;

/// Relevant variables `t_l^{[γ]}`. Level-0 variables of the primary classes
/// form the axis; every other variable counts towards the excess.
struct Space {
    vars: Vec<(usize, u32)>,
    index: HashMap<(usize, u32), usize>,
    names: Arc<Vec<String>>,
    axis: Vec<usize>,
    on_axis: Vec<bool>,
    axis_names: Arc<Vec<String>>,
}

impl Space {
    fn new(g: &GroupModel, base: BTreeSet<(usize, u32)>, ps: &[u32], primaries: &[usize]) -> Space {
        let mut set = base;
        set.extend(primaries.iter().map(|&c| (c, 0)));
        let vars: Vec<(usize, u32)> = close(set, ps).into_iter().collect();
        let index = vars.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let name = |&(c, l): &(usize, u32)| format!("t{l}[{}]", g.classes[c].name);
        let names = Arc::new(vars.iter().map(name).collect());
        let on_axis: Vec<bool> = vars.iter().map(|&(c, l)| l == 0 && primaries.contains(&c)).collect();
        let axis: Vec<usize> = (0..vars.len()).filter(|&i| on_axis[i]).collect();
        let axis_names = Arc::new(axis.iter().map(|&i| name(&vars[i])).collect());
        Space { vars, index, names, axis, on_axis, axis_names }
    }

    fn idx(&self, c: usize, l: u32) -> Option<usize> {
        self.index.get(&(c, l)).copied()
    }

    fn excess(&self, e: &[u8]) -> u32 {
        e.iter().zip(&self.on_axis).filter(|(_, &a)| !a).map(|(&k, _)| k as u32).sum()
    }

    fn keep(&self, e: &[u8], budget: u32, max_deg: u32) -> bool {
        let ex = self.excess(e);
        let total: u32 = e.iter().map(|&k| k as u32).sum();
        ex <= budget && total - ex <= max_deg + budget
    }
}

/// Add `(γ, l + Σ_{p∈S} p)` for every subset `S` of the operator indices:
/// the variables a chain of `t∂` terms, each operator acting once, can bring
/// down to `base`.
fn close(set: BTreeSet<(usize, u32)>, ps: &[u32]) -> BTreeSet<(usize, u32)> {
    let mut shifts = BTreeSet::from([0u32]);
    for &p in ps {
        let more: Vec<u32> = shifts.iter().map(|s| s + p).collect();
        shifts.extend(more);
    }
    set.iter().flat_map(|&(c, l)| shifts.iter().map(move |s| (c, l + s))).collect()
}

/// `F_0^G` restricted to monomials in `sp` with excess `≤ max_excess` and
/// axis degree `≤ max_axis`.
fn f0_slice(g: &GroupModel, sp: &Space, max_excess: u32, max_axis: u32) -> TruncPoly<Rat> {
    let others: Vec<usize> = (0..sp.vars.len()).filter(|&i| !sp.on_axis[i]).collect();
    let mut out = TruncPoly::zero(sp.names.clone(), CAP);
    let mut e = vec![0u8; sp.vars.len()];
    fn spread(g: &GroupModel, sp: &Space, j: usize, left: u32, e: &mut Vec<u8>, out: &mut TruncPoly<Rat>) {
        if j + 1 == sp.axis.len() {
            e[sp.axis[j]] = left as u8;
            let mut counts = vec![0u32; g.num_classes()];
            let mut den = num_bigint::BigInt::one();
            let mut lsum = 0u32;
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    let (c, l) = sp.vars[i];
                    counts[c] += k as u32;
                    lsum += k as u32 * l;
                    den *= factorial(k as u64) * num_traits::pow(factorial(l as u64), k as usize);
                }
            }
            let fr = g.frob(&counts);
            if !fr.is_zero() {
                out.add_term(e.clone(), fr * Rat::new(factorial(lsum as u64), den));
            }
            e[sp.axis[j]] = 0;
            return;
        }
        for k in 0..=left {
            e[sp.axis[j]] = k as u8;
            spread(g, sp, j + 1, left - k, e, out);
        }
        e[sp.axis[j]] = 0;
    }
    fn rec(
        g: &GroupModel,
        sp: &Space,
        others: &[usize],
        start: usize,
        left: u32,
        e: &mut Vec<u8>,
        max_axis: u32,
        out: &mut TruncPoly<Rat>,
    ) {
        let ex: u32 = others.iter().map(|&i| e[i] as u32).sum();
        let lsum: u32 = others.iter().map(|&i| e[i] as u32 * sp.vars[i].1).sum();
        // dimension: Σ levels = (excess + axis degree) − 3
        let d = lsum as i64 + 3 - ex as i64;
        if d >= 0 && d as u32 <= max_axis {
            spread(g, sp, 0, d as u32, e, out);
        }
        if left == 0 {
            return;
        }
        for j in start..others.len() {
            e[others[j]] += 1;
            rec(g, sp, others, j, left - 1, e, max_axis, out);
            e[others[j]] -= 1;
        }
    }
    rec(g, sp, &others, 0, max_excess, &mut e, max_axis, &mut out);
    out
}

/// The first-order part `D_p` of the operator, then pruned.
fn apply_d(op: &QuantizationOp, f: &TruncPoly<Rat>, sp: &Space, budget: u32, max_deg: u32) -> TruncPoly<Rat> {
    let mut out = TruncPoly::zero(sp.names.clone(), f.max_deg());
    let dil = sp.idx(op.unit, op.p + 1);
    for (e, c) in f.terms() {
        if let Some(i) = dil {
            if e[i] > 0 && !op.dilaton.is_zero() {
                let mut h = e.clone();
                h[i] -= 1;
                if sp.keep(&h, budget, max_deg) {
                    out.add_term(h, c * &op.dilaton * ri(e[i] as i64));
                }
            }
        }
        for (i, &k) in e.iter().enumerate() {
            let (cl, l) = sp.vars[i];
            if k == 0 || l < op.p || op.linear[cl].is_zero() {
                continue;
            }
            let Some(j) = sp.idx(cl, l - op.p) else { continue };
            let mut h = e.clone();
            h[i] -= 1;
            h[j] += 1;
            if sp.keep(&h, budget, max_deg) {
                out.add_term(h, -(c * &op.linear[cl]) * ri(k as i64));
            }
        }
    }
    out
}

fn deriv(f: &TruncPoly<Rat>, sp: &Space, c: usize, l: u32) -> TruncPoly<Rat> {
    match sp.idx(c, l) {
        Some(i) => f.deriv(i),
        None => TruncPoly::zero(sp.names.clone(), f.max_deg()),
    }
}

/// `acc += w·a·b`, keeping monomials within budget; factors are bucketed
/// by excess so hopeless pairs are never formed.
fn mul_into(
    acc: &mut HashMap<Vec<u8>, Rat>,
    a: &TruncPoly<Rat>,
    b: &TruncPoly<Rat>,
    w: &Rat,
    sp: &Space,
    budget: u32,
    max_deg: u32,
) {
    let bucket = |p: &TruncPoly<Rat>| {
        let mut v: Vec<Vec<(Vec<u8>, Rat)>> = vec![Vec::new(); budget as usize + 1];
        for (e, c) in p.terms() {
            let x = sp.excess(e);
            if x <= budget {
                v[x as usize].push((e.clone(), c * w));
            }
        }
        v
    };
    let ba = bucket(a);
    let bb: Vec<Vec<(&Vec<u8>, &Rat)>> = {
        let mut v = vec![Vec::new(); budget as usize + 1];
        for (e, c) in b.terms() {
            let x = sp.excess(e);
            if x <= budget {
                v[x as usize].push((e, c));
            }
        }
        v
    };
    for (xa, ta) in ba.iter().enumerate() {
        for tb in bb.iter().take(budget as usize + 1 - xa) {
            for (ea, ca) in ta {
                for (eb, cb) in tb {
                    let e: Vec<u8> = ea.iter().zip(eb.iter()).map(|(x, y)| x + y).collect();
                    if !sp.keep(&e, budget, max_deg) {
                        continue;
                    }
                    *acc.entry(e).or_insert_with(Rat::zero) += ca * *cb;
                }
            }
        }
    }
}

/// Terms purely on the axis, as a polynomial in the axis variables.
fn axis(f: &TruncPoly<Rat>, sp: &Space, max_deg: u32) -> TruncPoly<Rat> {
    let mut out = TruncPoly::zero(sp.axis_names.clone(), max_deg);
    for (e, c) in f.terms() {
        if sp.excess(e) == 0 {
            out.add_term(sp.axis.iter().map(|&i| e[i]).collect(), c.clone());
        }
    }
    out
}

/// Edge ends `(γ, l)` with nonzero coefficient for an operator.
fn edge_choices(op: &QuantizationOp) -> Vec<(usize, u32, Rat)> {
    let mut v = Vec::new();
    for c in 0..op.linear.len() {
        if op.linear[c].is_zero() {
            continue;
        }
        for l in 0..op.p {
            v.push((c, l, op.quadratic(c, l)));
        }
    }
    v
}

/// Direct route: `F_T = D_{p_i} F_{T∖i} + ½ Σ C ∂F_A ∂F_B` over splits
/// `A ⊔ B = T∖i`, `i = min T`, starting from `F_∅ = F_0^G`.
fn sequential(g: &GroupModel, ops: &[QuantizationOp], primaries: &[usize], max_deg: u32) -> TruncPoly<Rat> {
    let r = ops.len();
    let ps: Vec<u32> = ops.iter().map(|o| o.p).collect();
    let mut base = BTreeSet::new();
    for op in ops {
        base.insert((op.unit, op.p + 1));
        for (c, l, _) in edge_choices(op) {
            base.insert((c, l));
            base.insert((op.inverse[c], op.p - 1 - l));
        }
    }
    let sp = Space::new(g, base, &ps, primaries);
    let full = (1usize << r) - 1;
    let mut f: Vec<TruncPoly<Rat>> = Vec::with_capacity(full + 1);
    f.push(f0_slice(g, &sp, r as u32, max_deg + r as u32));
    for mask in 1..=full {
        let i = mask.trailing_zeros() as usize;
        let rest = mask ^ (1 << i);
        let budget = (r - mask.count_ones() as usize) as u32;
        let op = &ops[i];
        let mut acc: HashMap<Vec<u8>, Rat> = HashMap::new();
        for (e, c) in apply_d(op, &f[rest], &sp, budget, max_deg).terms() {
            acc.insert(e.clone(), c.clone());
        }
        let choices = edge_choices(op);
        let mut dcache: HashMap<(usize, usize, u32), TruncPoly<Rat>> = HashMap::new();
        let mut sub = rest;
        loop {
            for &(c, l, _) in &choices {
                for key in [(sub, c, l), (sub, op.inverse[c], op.p - 1 - l)] {
                    dcache.entry(key).or_insert_with(|| deriv(&f[key.0], &sp, key.1, key.2));
                }
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
        let mut sub = rest;
        loop {
            let other = rest ^ sub;
            for (c, l, w) in &choices {
                let da = &dcache[&(sub, *c, *l)];
                let db = &dcache[&(other, op.inverse[*c], op.p - 1 - l)];
                if !da.is_empty() && !db.is_empty() {
                    mul_into(&mut acc, da, db, &(w * rq(1, 2)), &sp, budget, max_deg);
                }
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
        let mut next = TruncPoly::zero(sp.names.clone(), CAP);
        for (e, c) in acc {
            next.add_term(e, c);
        }
        f.push(next);
    }
    axis(&f[full], &sp, max_deg)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum VOp {
    Half(usize),
    Deriv(usize, u32),
}

/// One vertex: `F_0` hit by its operators, lowest label outermost.
fn vertex_series(
    g: &GroupModel,
    ops: &[QuantizationOp],
    chain: &[VOp],
    primaries: &[usize],
    max_deg: u32,
) -> TruncPoly<Rat> {
    let q = chain.len() as u32;
    let mut base = BTreeSet::new();
    let mut ps = Vec::new();
    for v in chain {
        match *v {
            VOp::Half(i) => {
                base.insert((ops[i].unit, ops[i].p + 1));
                ps.push(ops[i].p);
            }
            VOp::Deriv(c, l) => {
                base.insert((c, l));
            }
        }
    }
    let sp = Space::new(g, base, &ps, primaries);
    let mut f = f0_slice(g, &sp, q, max_deg + q);
    for (k, v) in chain.iter().enumerate().rev() {
        let budget = k as u32;
        f = match *v {
            VOp::Half(i) => apply_d(&ops[i], &f, &sp, budget, max_deg),
            VOp::Deriv(c, l) => deriv(&f, &sp, c, l).retain(|e| sp.keep(e, budget, max_deg)),
        };
    }
    axis(&f, &sp, max_deg)
}

fn via_lthe(g: &GroupModel, ops: &[QuantizationOp], primaries: &[usize], max_deg: u32, exec: Exec) -> TruncPoly<Rat> {
    let trees = lthe_enumerate(ops.len());
    let memo: Mutex<HashMap<Vec<VOp>, Arc<TruncPoly<Rat>>>> = Mutex::new(HashMap::new());
    let names = Arc::new(primaries.iter().map(|&c| format!("t0[{}]", g.classes[c].name)).collect::<Vec<_>>());
    let one = TruncPoly::constant(names.clone(), max_deg, Rat::one());
    let per_tree = par::map(exec, &trees, |t| {
        let edges = t.edges();
        let choices: Vec<Vec<(usize, u32, Rat)>> = edges.iter().map(|&(l, _, _)| edge_choices(&ops[l])).collect();
        let mut total = TruncPoly::zero(names.clone(), max_deg);
        if choices.iter().any(Vec::is_empty) {
            return total;
        }
        let mut pick = vec![0usize; edges.len()];
        loop {
            let mut weight = t.symmetry();
            let mut ends: HashMap<(usize, usize), VOp> = HashMap::new();
            for (k, &(label, u, v)) in edges.iter().enumerate() {
                let (c, l, w) = &choices[k][pick[k]];
                let op = &ops[label];
                weight *= w;
                ends.insert((u, label), VOp::Deriv(*c, *l));
                ends.insert((v, label), VOp::Deriv(op.inverse[*c], op.p - 1 - l));
            }
            let mut prod = one.clone();
            for (vi, labels) in t.vertices.iter().enumerate() {
                let chain: Vec<VOp> = labels
                    .iter()
                    .map(|&l| match t.slots[l] {
                        Slot::HalfEdge => VOp::Half(l),
                        Slot::Edge => ends[&(vi, l)].clone(),
                    })
                    .collect();
                let cached = memo.lock().unwrap().get(&chain).cloned();
                let s = match cached {
                    Some(s) => s,
                    None => {
                        let s = Arc::new(vertex_series(g, ops, &chain, primaries, max_deg));
                        memo.lock().unwrap().insert(chain, s.clone());
                        s
                    }
                };
                prod = prod.mul(&s);
                if prod.is_empty() {
                    break;
                }
            }
            total = total.add(&prod.scale(&weight));
            let mut k = 0;
            while k < pick.len() {
                pick[k] += 1;
                if pick[k] < choices[k].len() {
                    break;
                }
                pick[k] = 0;
                k += 1;
            }
            if k == pick.len() {
                break;
            }
        }
        total
    });
    per_tree.iter().fold(TruncPoly::zero(names.clone(), max_deg), |a, b| a.add(b))
}

/// `Σ (1/N!) ∫_{M̄_{0,N}(BD̂ₙ)} ch_{p₁}…ch_{p_r} Π ev_i^*(t_0)` for `N ≤ max_deg`,
/// restricted to level-0 insertions from the classes in `primaries`: a
/// polynomial in the variables `t_0^{[γ]}`, `γ ∈ primaries`, in that order.
pub fn chern_insertion_sum(
    n: u32,
    ps: &[u32],
    primaries: &[usize],
    max_deg: u32,
    route: Route,
    exec: Exec,
) -> Result<TruncPoly<Rat>> {
    if ps.is_empty() || primaries.is_empty() {
        return Err(Error::ParamTooSmall("need at least one Chern character and one primary class".into()));
    }
    let g = GroupModel::binary_dihedral(n)?;
    let mut prim = primaries.to_vec();
    prim.sort_unstable();
    prim.dedup();
    if prim.len() != primaries.len() || prim.last().is_some_and(|&c| c >= g.num_classes()) {
        return Err(Error::ParamTooSmall(format!("bad primary class list {primaries:?}")));
    }
    let ops = ps.iter().map(|&p| QuantizationOp::new(&g, p)).collect::<Result<Vec<_>>>()?;
    match route {
        Route::Lthe => Ok(via_lthe(&g, &ops, primaries, max_deg, exec)),
        Route::Sequential => Ok(sequential(&g, &ops, primaries, max_deg)),
        Route::Both => {
            let a = via_lthe(&g, &ops, primaries, max_deg, exec);
            let b = sequential(&g, &ops, primaries, max_deg);
            let diff = a.sub(&b);
            if let Some((e, _)) = diff.terms().next() {
                return Err(Error::InternalMismatch(format!(
                    "ch{ps:?} at exponent {e:?}: trees give {}, sequential gives {}",
                    fmt_rat(&a.coeff(e)),
                    fmt_rat(&b.coeff(e))
                )));
            }
            Ok(a)
        }
    }
}

/// The integral behind one coefficient: `Π e_i!` times the coefficient of
/// `Π t_0^{e_i}`.
pub fn chern_integral(series: &TruncPoly<Rat>, exps: &[u8]) -> Rat {
    let mut f = num_bigint::BigInt::one();
    for &k in exps {
        f *= factorial(k as u64);
    }
    series.coeff(exps) * Rat::from_integer(f)
}
