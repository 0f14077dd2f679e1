use super::pairing::Pairing;
use crate::error::{Error, Result};
use crate::exact::rat::Rat;
use crate::group::GroupModel;
use crate::mckay::{keys_of_length, CorrelatorTable};
use crate::par::{self, Exec};
use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, Zero};
use serde::Serialize;
use std::collections::BTreeMap;

/// `(∂_{q0}∂_{q1}∂_α F) g^{αβ} (∂_β∂_{q2}∂_{q3} F) − (∂_{q0}∂_{q2}∂_α F) g^{αβ} (∂_β∂_{q1}∂_{q3} F)`,
/// read off at the monomial `t^K/K!` of the background `K`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct WdvvInstance {
    /// Class indices over all classes; the unit is allowed.
    pub quad: [usize; 4],
    /// Counts over the non-unit classes.
    pub background: Vec<u32>,
}

/// λ-graded exact value: degree → coefficient.
pub type LambdaValue = BTreeMap<i32, Rat>;

/// A correlator as seen by the expansion.
#[derive(Clone, Debug)]
pub(crate) enum Val {
    Known(Rat),
    Unknown(usize),
}

pub(crate) trait Lookup: Sync {
    /// `key` over the non-unit classes, length at least 3.
    fn get(&self, key: &[u32]) -> Result<Val>;
}

/// Affine form `c + Σ a_u x_u` per λ-degree.
#[derive(Clone, Debug, Default)]
pub(crate) struct LinForm {
    pub terms: BTreeMap<i32, (Rat, BTreeMap<usize, Rat>)>,
}

impl LinForm {
    fn add_const(&mut self, deg: i32, v: Rat) {
        let e = self.terms.entry(deg).or_insert_with(|| (Rat::zero(), BTreeMap::new()));
        e.0 += v;
    }

    fn add_var(&mut self, deg: i32, u: usize, v: Rat) {
        let e = self.terms.entry(deg).or_insert_with(|| (Rat::zero(), BTreeMap::new()));
        *e.1.entry(u).or_insert_with(Rat::zero) += v;
    }

    fn scale_into(&self, s: &Rat, out: &mut LinForm) {
        for (d, (c, vars)) in &self.terms {
            out.add_const(*d, c * s);
            for (u, a) in vars {
                out.add_var(*d, *u, a * s);
            }
        }
    }

    pub fn normalize(&mut self) {
        for (_, vars) in self.terms.values_mut() {
            vars.retain(|_, a| !a.is_zero());
        }
        self.terms.retain(|_, (c, vars)| !c.is_zero() || !vars.is_empty());
    }

    pub fn constant_part(&self) -> Option<LambdaValue> {
        if self.terms.values().any(|(_, v)| !v.is_empty()) {
            return None;
        }
        Some(self.terms.iter().map(|(d, (c, _))| (*d, c.clone())).collect())
    }
}

/// Three-point-plus-background correlator `⟨x y z K⟩` as a form with a degree.
fn corr(g: &GroupModel, pr: &Pairing, lk: &dyn Lookup, xyz: [usize; 3], bg: &[u32]) -> Result<Option<(i32, Val)>> {
    let units = xyz.iter().filter(|&&c| c == 0).count();
    if units > 0 {
        if bg.iter().any(|&c| c > 0) {
            return Ok(None);
        }
        let mut counts = vec![0u32; g.num_classes()];
        for c in xyz {
            counts[c] += 1;
        }
        let v = g.frob(&counts);
        if v.is_zero() {
            return Ok(None);
        }
        return Ok(Some((pr.three_point_degree(units), Val::Known(v))));
    }
    let mut key = bg.to_vec();
    for c in xyz {
        key[c - 1] += 1;
    }
    match lk.get(&key)? {
        Val::Known(v) if v.is_zero() => Ok(None),
        v => Ok(Some((pr.bulk_degree, v))),
    }
}

fn sub_multisets(k: &[u32]) -> Vec<(Vec<u32>, Vec<u32>, BigInt)> {
    let mut out = vec![(Vec::new(), Vec::new(), BigInt::one())];
    for &c in k {
        let mut next = Vec::new();
        for (a, b, w) in &out {
            for t in 0..=c {
                let mut a2 = a.clone();
                let mut b2 = b.clone();
                a2.push(t);
                b2.push(c - t);
                next.push((a2, b2, w * binomial(BigInt::from(c), BigInt::from(t))));
            }
        }
        out = next;
    }
    out
}

/// `Σ_{K1+K2=K} C(K;K1) Σ_{α,β} ⟨i j α K1⟩ g^{αβ} ⟨β k l K2⟩` as a linear form.
fn side(g: &GroupModel, pr: &Pairing, lk: &dyn Lookup, ij: [usize; 2], kl: [usize; 2], bg: &[u32]) -> Result<LinForm> {
    let nc = g.num_classes();
    let mut out = LinForm::default();
    for (k1, k2, w) in sub_multisets(bg) {
        for alpha in 0..nc {
            let Some((d1, v1)) = corr(g, pr, lk, [ij[0], ij[1], alpha], &k1)? else { continue };
            for beta in 0..nc {
                let ginv = &pr.inv[alpha][beta];
                if ginv.is_zero() {
                    continue;
                }
                let Some((d2, v2)) = corr(g, pr, lk, [beta, kl[0], kl[1]], &k2)? else { continue };
                let deg = d1 + d2 + pr.inv_degree(alpha == 0);
                let s = ginv * Rat::from_integer(w.clone());
                match (&v1, &v2) {
                    (Val::Known(a), Val::Known(b)) => out.add_const(deg, s * a * b),
                    (Val::Known(a), Val::Unknown(u)) | (Val::Unknown(u), Val::Known(a)) => out.add_var(deg, *u, s * a),
                    (Val::Unknown(_), Val::Unknown(_)) => {
                        return Err(Error::InternalMismatch(format!(
                            "two unknown factors in the expansion at background {bg:?}"
                        )))
                    }
                }
            }
        }
    }
    Ok(out)
}

pub(crate) fn expand(g: &GroupModel, pr: &Pairing, lk: &dyn Lookup, inst: &WdvvInstance) -> Result<LinForm> {
    let [a, b, c, d] = inst.quad;
    let lhs = side(g, pr, lk, [a, b], [c, d], &inst.background)?;
    let rhs = side(g, pr, lk, [a, c], [b, d], &inst.background)?;
    let mut out = LinForm::default();
    lhs.scale_into(&Rat::one(), &mut out);
    rhs.scale_into(&-Rat::one(), &mut out);
    out.normalize();
    Ok(out)
}

struct TableLookup<'a> {
    g: &'a GroupModel,
    t: &'a CorrelatorTable,
}

impl Lookup for TableLookup<'_> {
    fn get(&self, key: &[u32]) -> Result<Val> {
        if let Some(v) = self.t.get(key) {
            return Ok(Val::Known(v.clone()));
        }
        let mut counts = vec![0];
        counts.extend_from_slice(key);
        if self.g.frob_nonzero(&counts) {
            Err(Error::MissingCorrelator(format!("{key:?}")))
        } else {
            Ok(Val::Known(Rat::zero()))
        }
    }
}

/// λ-graded residual of one instance against a table. Keys absent from the
/// table are zero when their Frobenius count vanishes and missing otherwise.
pub fn wdvv_residual(g: &GroupModel, t: &CorrelatorTable, inst: &WdvvInstance) -> Result<LambdaValue> {
    if inst.background.len() + 1 != g.num_classes() || inst.quad.iter().any(|&c| c >= g.num_classes()) {
        return Err(Error::InternalMismatch("instance does not fit the group".into()));
    }
    let pr = super::pairing(g);
    let form = expand(g, &pr, &TableLookup { g, t }, inst)?;
    form.constant_part()
        .ok_or_else(|| Error::InternalMismatch("table lookup produced an unknown".into()))
}

/// Every instance with non-unit insertions, the two independent pairing
/// differences per quadruple, and backgrounds of total `bg_len`.
pub fn all_instances(g: &GroupModel, bg_len: u32) -> Vec<WdvvInstance> {
    let nc = g.num_classes();
    let mut quads = Vec::new();
    for i in 1..nc {
        for j in i..nc {
            for k in j..nc {
                for l in k..nc {
                    quads.push([i, j, k, l]);
                    if k != l {
                        quads.push([i, j, l, k]);
                    }
                }
            }
        }
    }
    let bgs = keys_of_length(nc - 1, bg_len);
    let mut out = Vec::with_capacity(quads.len() * bgs.len());
    for bg in &bgs {
        for q in &quads {
            out.push(WdvvInstance { quad: *q, background: bg.clone() });
        }
    }
    out
}

/// Residuals of every instance with background length `0..=max_bg`; returns
/// the instances whose residual is nonzero.
pub fn residual_failures(
    g: &GroupModel,
    t: &CorrelatorTable,
    max_bg: u32,
    exec: Exec,
) -> Result<Vec<(WdvvInstance, LambdaValue)>> {
    let insts: Vec<WdvvInstance> = (0..=max_bg).flat_map(|b| all_instances(g, b)).collect();
    let res = par::map(exec, &insts, |i| wdvv_residual(g, t, i));
    let mut bad = Vec::new();
    for (i, r) in insts.into_iter().zip(res) {
        let r = r?;
        if !r.is_empty() {
            bad.push((i, r));
        }
    }
    Ok(bad)
}
