use super::expand::{all_instances, expand, LinForm, Lookup, Val, WdvvInstance};
use super::linsys::LinearSystem;
use super::pairing::{pairing, Pairing};
use crate::error::{Error, Result};
use crate::exact::rat::{fmt_rat, Rat};
use crate::group::{ClassKind, Family, GroupModel};
use crate::mckay::{keys_of_length, CorrelatorKey, CorrelatorTable, Potential};
use crate::par::{self, Exec};
use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::Zero;
use serde::Serialize;
use std::collections::{BTreeMap, HashMap};

/// Which WDVV instances feed the induction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Mode {
    /// The explicit families: `(a^i a^i | b ab)`, `(a^i a^i | ab ab)`,
    /// `(a^i b | ab ab)`, `(a^i ab | b b)` and the `b ↔ ab` symmetry for D̂ₙ;
    /// `(a^i b | a^i b)` for Dₙ.
    Paper,
    /// Every quadruple, pairing and background of the right length. For D̂ₙ
    /// the `b ↔ ab` symmetry rows are added in both modes.
    Generic,
}

/// Initial data for the induction.
#[derive(Clone, Debug)]
pub struct SeedSet {
    /// Any superset of the required seed keys; extra entries are ignored.
    pub table: CorrelatorTable,
    /// `⟨e_b^{m}⟩` of `D̂_{2n−2}` for even `m ≥ 4`. When present (odd `n`
    /// only), the pure `b^k`, `ab^k` seeds of length ≥ 4 are dropped and
    /// replaced by the restriction constraint.
    pub restriction_bb: Option<BTreeMap<u32, Rat>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LengthStats {
    pub length: u32,
    pub unknowns: usize,
    pub equations: usize,
    pub rank: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SolveReport {
    pub table: CorrelatorTable,
    pub stats: Vec<LengthStats>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SolverComparison {
    pub n: u32,
    pub max_len: u32,
    pub mode: Mode,
    pub restriction: bool,
    pub compared: usize,
    pub mismatches: Vec<CorrelatorKey>,
    pub stats: Vec<LengthStats>,
}

impl SolverComparison {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

struct Classes {
    a: Vec<(u32, usize)>,
    b: usize,
    ab: Option<usize>,
}

fn classes(g: &GroupModel) -> Result<Classes> {
    if g.family == Family::Cyclic {
        return Err(Error::UnsupportedPair("the induction needs a dihedral family".into()));
    }
    let a = g
        .classes
        .iter()
        .enumerate()
        .filter_map(|(i, c)| match c.kind {
            ClassKind::A(k) => Some((k, i)),
            _ => None,
        })
        .collect();
    let b = g.find_class(ClassKind::B).expect("dihedral families have a b class");
    Ok(Classes { a, b, ab: g.find_class(ClassKind::AB) })
}

fn counts_all(key: &[u32]) -> Vec<u32> {
    let mut c = vec![0];
    c.extend_from_slice(key);
    c
}

enum SeedKind {
    Seed,
    Pure,
    Free,
}

fn seed_kind(cl: &Classes, key: &[u32]) -> SeedKind {
    let len: u32 = key.iter().sum();
    if len == 3 {
        return SeedKind::Seed;
    }
    let b = key[cl.b - 1];
    let ab = cl.ab.map_or(0, |c| key[c - 1]);
    if b == 0 && ab == 0 {
        SeedKind::Seed
    } else if b == len || ab == len {
        SeedKind::Pure
    } else {
        SeedKind::Free
    }
}

/// Keeps exactly the seed keys of `full` needed up to `max_len`.
pub fn seed_correlators(g: &GroupModel, full: &CorrelatorTable, max_len: u32) -> Result<SeedSet> {
    let cl = classes(g)?;
    let mut entries = BTreeMap::new();
    for m in 3..=max_len {
        for key in keys_of_length(g.num_classes() - 1, m) {
            if matches!(seed_kind(&cl, &key), SeedKind::Free) || !g.frob_nonzero(&counts_all(&key)) {
                continue;
            }
            let v = full.get(&key).ok_or_else(|| Error::MissingSeed(format!("{key:?}")))?;
            entries.insert(key, v.clone());
        }
    }
    Ok(SeedSet {
        table: CorrelatorTable { entries, ..full.clone() },
        restriction_bb: None,
    })
}

struct SolverLookup<'a> {
    known: &'a BTreeMap<CorrelatorKey, Rat>,
    unknown: &'a HashMap<CorrelatorKey, usize>,
}

impl Lookup for SolverLookup<'_> {
    fn get(&self, key: &[u32]) -> Result<Val> {
        if let Some(u) = self.unknown.get(key) {
            return Ok(Val::Unknown(*u));
        }
        self.known
            .get(key)
            .map(|v| Val::Known(v.clone()))
            .ok_or_else(|| Error::MissingCorrelator(format!("{key:?} not determined before it was needed")))
    }
}

fn paper_quads(g: &GroupModel, cl: &Classes) -> Result<Vec<[usize; 4]>> {
    let b = cl.b;
    let mut q = Vec::new();
    match (g.family, cl.ab) {
        (Family::BinaryDihedral, Some(ab)) => {
            for &(k, a) in &cl.a {
                q.push([a, a, b, ab]);
                q.push([a, a, ab, ab]);
                if k % 2 == 1 {
                    q.push([a, b, ab, ab]);
                    q.push([a, ab, b, b]);
                }
            }
        }
        (Family::Dihedral, None) => {
            for &(_, a) in &cl.a {
                q.push([a, b, a, b]);
            }
        }
        _ => {
            return Err(Error::UnsupportedPair(format!(
                "{}: paper mode covers D̂ₙ and Dₙ with n odd; use generic mode",
                g.label()
            )))
        }
    }
    Ok(q)
}

fn swap_b_ab(cl: &Classes, key: &[u32]) -> Option<CorrelatorKey> {
    let ab = cl.ab?;
    let mut k = key.to_vec();
    k.swap(cl.b - 1, ab - 1);
    Some(k)
}

/// Order in which equations reach the elimination.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum RowOrder {
    #[default]
    Natural,
    Reversed,
    /// Rotate left by the given offset, then interleave both halves.
    Shuffled(usize),
}

fn reorder<T>(rows: &mut Vec<T>, order: RowOrder) {
    match order {
        RowOrder::Natural => {}
        RowOrder::Reversed => rows.reverse(),
        RowOrder::Shuffled(off) => {
            if rows.is_empty() {
                return;
            }
            let len = rows.len();
            rows.rotate_left(off % len);
            let back = rows.split_off(len / 2);
            let front = std::mem::take(rows);
            let mut a = back.into_iter();
            let mut b = front.into_iter();
            loop {
                match (a.next(), b.next()) {
                    (None, None) => break,
                    (x, y) => rows.extend(x.into_iter().chain(y)),
                }
            }
        }
    }
}

/// Rebuilds every correlator of length `≤ max_len` from the seeds.
pub fn induction_solve(g: &GroupModel, seeds: &SeedSet, max_len: u32, mode: Mode, exec: Exec) -> Result<SolveReport> {
    induction_solve_ordered(g, seeds, max_len, mode, exec, RowOrder::Natural)
}

/// `induction_solve` with the equations fed in the given order.
pub fn induction_solve_ordered(
    g: &GroupModel,
    seeds: &SeedSet,
    max_len: u32,
    mode: Mode,
    exec: Exec,
    row_order: RowOrder,
) -> Result<SolveReport> {
    let cl = classes(g)?;
    let restricted = seeds.restriction_bb.as_ref();
    if restricted.is_some() && !(g.family == Family::BinaryDihedral && g.n % 2 == 1) {
        return Err(Error::UnsupportedPair("the D̂_{2n−2} constraint applies to odd n only".into()));
    }
    let pr: Pairing = pairing(g);
    let k = g.num_classes() - 1;
    let mut known: BTreeMap<CorrelatorKey, Rat> = BTreeMap::new();
    let mut stats = Vec::new();

    for m in 3..=max_len {
        let mut unknown: HashMap<CorrelatorKey, usize> = HashMap::new();
        let mut order: Vec<CorrelatorKey> = Vec::new();
        for key in keys_of_length(k, m) {
            if !g.frob_nonzero(&counts_all(&key)) {
                known.insert(key, Rat::zero());
                continue;
            }
            let is_seed = match seed_kind(&cl, &key) {
                SeedKind::Seed => true,
                SeedKind::Pure => restricted.is_none() || m == 3,
                SeedKind::Free => false,
            };
            if is_seed {
                let v = seeds.table.get(&key).ok_or_else(|| Error::MissingSeed(format!("{key:?}")))?;
                known.insert(key, v.clone());
            } else {
                unknown.insert(key.clone(), order.len());
                order.push(key);
            }
        }
        if order.is_empty() {
            stats.push(LengthStats { length: m, unknowns: 0, equations: 0, rank: 0 });
            continue;
        }

        let bgs = keys_of_length(k, m - 3);
        let insts: Vec<WdvvInstance> = match mode {
            Mode::Generic => all_instances(g, m - 3),
            Mode::Paper => {
                let quads = paper_quads(g, &cl)?;
                bgs.iter()
                    .flat_map(|bg| quads.iter().map(move |q| WdvvInstance { quad: *q, background: bg.clone() }))
                    .collect()
            }
        };
        let lk = SolverLookup { known: &known, unknown: &unknown };
        let forms = par::map(exec, &insts, |i| expand(g, &pr, &lk, i));
        let mut rows: Vec<(BTreeMap<usize, Rat>, Rat)> = Vec::new();
        for f in forms {
            let f: LinForm = f?;
            for (_, (c, vars)) in f.terms {
                rows.push((vars, -c));
            }
        }
        if g.family == Family::BinaryDihedral {
            for (key, &u) in &unknown {
                let Some(sw) = swap_b_ab(&cl, key) else { continue };
                let mut row = BTreeMap::new();
                row.insert(u, Rat::from_integer(1.into()));
                let rhs = match unknown.get(&sw) {
                    Some(&w) if w == u => continue,
                    Some(&w) => {
                        row.insert(w, Rat::from_integer((-1).into()));
                        Rat::zero()
                    }
                    None => known.get(&sw).cloned().unwrap_or_else(Rat::zero),
                };
                rows.push((row, rhs));
            }
        }
        if let Some(rb) = restricted {
            if m % 2 == 0 {
                let target = rb
                    .get(&m)
                    .ok_or_else(|| Error::MissingSeed(format!("D̂_{{2n−2}} value ⟨b^{m}⟩")))?;
                let ab = cl.ab.expect("binary dihedral groups have an ab class");
                let mut row = BTreeMap::new();
                let mut rhs = target * Rat::from_integer(2.into());
                for kb in 0..=m {
                    let mut key = vec![0; k];
                    key[cl.b - 1] = kb;
                    key[ab - 1] = m - kb;
                    let w = Rat::from_integer(binomial(BigInt::from(m), BigInt::from(kb)));
                    match unknown.get(&key) {
                        Some(&u) => {
                            row.insert(u, w);
                        }
                        None => rhs -= w * known.get(&key).cloned().unwrap_or_else(Rat::zero),
                    }
                }
                rows.push((row, rhs));
            }
        }

        reorder(&mut rows, row_order);
        let mut sys = LinearSystem::new(order.len());
        for (row, rhs) in &rows {
            if sys.is_full_rank() {
                break;
            }
            sys.add_row(row.clone(), rhs.clone());
        }
        stats.push(LengthStats { length: m, unknowns: order.len(), equations: rows.len(), rank: sys.rank() });
        let x = sys.solve().map_err(|e| match e {
            Error::SingularSystem(_) => Error::SingularSystem(format!(
                "{} length {m}: undetermined {:?}",
                g.label(),
                sys.free_columns().iter().map(|&c| &order[c]).collect::<Vec<_>>()
            )),
            e => e,
        })?;
        for (row, rhs) in &rows {
            let mut v = Rat::zero();
            for (c, a) in row {
                v += a * &x[*c];
            }
            if &v != rhs {
                return Err(Error::Mismatch(format!(
                    "{} length {m}: seeds are inconsistent with WDVV ({} ≠ {})",
                    g.label(),
                    fmt_rat(&v),
                    fmt_rat(rhs)
                )));
            }
        }
        for (key, v) in order.into_iter().zip(x) {
            known.insert(key, v);
        }
    }

    Ok(SolveReport {
        table: CorrelatorTable {
            family: g.family,
            n: g.n,
            class_names: g.classes[1..].iter().map(|c| c.name.clone()).collect(),
            entries: known,
        },
        stats,
    })
}

/// Seeds the induction from the potential of `D̂ₙ` and compares every solved
/// correlator with the potential. With `restriction`, odd `n` takes its pure
/// `b`/`ab` data from `D̂_{2n−2}` instead.
pub fn solver_equals_formula(n: u32, max_len: u32, mode: Mode, restriction: bool, exec: Exec) -> Result<SolverComparison> {
    let p = Potential::binary_dihedral(n)?;
    let full = CorrelatorTable::conjectural(&p, max_len, exec)?;
    let mut seeds = seed_correlators(&p.group, &full, max_len)?;
    if restriction {
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
    let rep = induction_solve(&p.group, &seeds, max_len, mode, exec)?;
    let mismatches: Vec<CorrelatorKey> = full
        .entries
        .iter()
        .filter(|(k, v)| rep.table.get(k) != Some(v))
        .map(|(k, _)| k.clone())
        .collect();
    Ok(SolverComparison {
        n,
        max_len,
        mode,
        restriction,
        compared: full.entries.len(),
        mismatches,
        stats: rep.stats,
    })
}
