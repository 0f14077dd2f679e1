use super::potential::Potential;
use super::table::{keys_of_length, keys_up_to, CorrelatorTable};
use crate::error::{Error, Result};
use crate::exact::rat::{binomial, factorial, fmt_rat, ri, Rat};
use crate::exact::trig::{h_derivative, h_derivative_at};
use crate::exact::{bernoulli_number, Cyc, TruncPoly};
use crate::group::ClassKind;
use crate::par::{self, Exec};
use num_traits::{One, Zero};
use serde::Serialize;
use std::sync::Arc;

/// Outcome of a family of exact comparisons.
#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub compared: usize,
    pub mismatches: Vec<String>,
}

impl CheckReport {
    fn finish(self) -> Result<CheckReport> {
        match self.mismatches.first() {
            Some(first) => Err(Error::Mismatch(format!(
                "{}: {} of {} comparisons failed, first: {first}",
                self.name,
                self.mismatches.len(),
                self.compared
            ))),
            None => Ok(self),
        }
    }
}

/// `⟨e_b^{2m}⟩/λ` for even `n`:
/// `(2m−3)!·((n−2)^{2m−2}/2 + 1)(−1)^{m−1}(2^{2m−2} − 1) B_{2m−2} / (2^{m−1}(2m−2)!)`.
pub fn closed_form_bb(m: u32, n: u32) -> Rat {
    closed_form_bb_printed(m, n) * Rat::from_integer(factorial(2 * m as u64 - 3))
}

/// The same expression without the `(2m−3)!` from the `y^{2m−3}/(2m−3)!`
/// normalization; agrees with [`closed_form_bb`] only at `m = 2`.
pub fn closed_form_bb_printed(m: u32, n: u32) -> Rat {
    assert!(m >= 2 && n >= 4 && n.is_multiple_of(2), "closed form needs m >= 2 and even n >= 4");
    let e = 2 * m - 2;
    let a = Rat::from_integer(num_traits::pow(num_bigint::BigInt::from(n - 2), e as usize)) / ri(2) + Rat::one();
    let sign = if m % 2 == 1 { Rat::one() } else { -Rat::one() };
    let two = num_traits::pow(num_bigint::BigInt::from(2), e as usize);
    let num = Rat::from_integer(two - 1) * bernoulli_number(e as usize);
    let den = Rat::from_integer(num_traits::pow(num_bigint::BigInt::from(2), (m - 1) as usize) * factorial(e as u64));
    a * sign * num / den
}

/// Splits each count over the two lifts `l, N−l` of `[a^l]`, with binomial weights.
fn lift_keys(key: &[u32], n: u32) -> Vec<(Vec<u32>, Rat)> {
    let big_n = 2 * n - 4;
    let mut acc = vec![(vec![0u32; big_n as usize - 1], Rat::one())];
    for (j0, &k) in key.iter().enumerate() {
        let j = j0 as u32 + 1;
        if k == 0 {
            continue;
        }
        let mut next = Vec::new();
        for (hk, w) in &acc {
            if j == n - 2 {
                let mut h = hk.clone();
                h[(j - 1) as usize] += k;
                next.push((h, w.clone()));
                continue;
            }
            for s in 0..=k {
                let mut h = hk.clone();
                h[(j - 1) as usize] += s;
                h[(big_n - j - 1) as usize] += k - s;
                next.push((h, w * Rat::from_integer(binomial(k as u64, s as u64))));
            }
        }
        acc = next;
    }
    acc
}

/// `⟨Π e_{[a^{k_i}]}⟩^{D̂ₙ} = ½ Σ_{lifts} ⟨…⟩^{Z_{2n−4}}` for every all-`a` key of
/// length `3..=d`.
pub fn restriction_check_a(n: u32, d: u32, exec: Exec) -> Result<CheckReport> {
    let g = Potential::binary_dihedral(n)?;
    let h = Potential::type_a(2 * n - 4)?;
    let keys: Vec<Vec<u32>> = keys_up_to(n as usize - 2, d)
        .into_iter()
        .map(|mut k| {
            k.extend([0, 0]);
            k
        })
        .collect();
    let res = par::map(exec, &keys, |key| -> Result<Option<String>> {
        let lhs = g.correlator(key)?;
        let mut rhs = Rat::zero();
        for (hk, w) in lift_keys(&key[..n as usize - 2], n) {
            rhs += w * h.correlator(&hk)?;
        }
        rhs /= ri(2);
        Ok((lhs != rhs).then(|| format!("{key:?}: {} vs {}", fmt_rat(&lhs), fmt_rat(&rhs))))
    });
    let mut report = CheckReport { name: format!("restriction Z_{} in bdn{n}", 2 * n - 4), compared: keys.len(), mismatches: vec![] };
    for r in res {
        if let Some(m) = r? {
            report.mismatches.push(m);
        }
    }
    report.finish()
}

/// `⟨e_b^m⟩^{D̂_{2n−2}} = ½ Σ_k C(m,k) ⟨e_b^k e_{ab}^{m−k}⟩^{D̂ₙ}` for `3 ≤ m ≤ d`.
pub fn restriction_check_d2n(n: u32, d: u32) -> Result<CheckReport> {
    let h = Potential::binary_dihedral(n)?;
    let g = Potential::binary_dihedral(2 * n - 2)?;
    let gb = g.group.find_class(ClassKind::B).unwrap() - 1;
    let (hb, hab) = (
        h.group.find_class(ClassKind::B).unwrap() - 1,
        h.group.find_class(ClassKind::AB).unwrap() - 1,
    );
    let mut report = CheckReport { name: format!("restriction bdn{n} in bdn{}", 2 * n - 2), compared: 0, mismatches: vec![] };
    for m in 3..=d {
        let mut gk = vec![0; g.group.num_classes() - 1];
        gk[gb] = m;
        let lhs = g.correlator(&gk)?;
        let mut rhs = Rat::zero();
        for k in 0..=m {
            let mut hk = vec![0; h.group.num_classes() - 1];
            hk[hb] = k;
            hk[hab] = m - k;
            rhs += Rat::from_integer(binomial(m as u64, k as u64)) * h.correlator(&hk)?;
        }
        rhs /= ri(2);
        report.compared += 1;
        if lhs != rhs {
            report.mismatches.push(format!("degree {m}: {} vs {}", fmt_rat(&lhs), fmt_rat(&rhs)));
        }
    }
    report.finish()
}

/// Third-derivative form of the multiplication formula for `h`:
/// `Σ_{k<n} h'''(x₀+x+2kπ/n) = n·h'''(n(x₀+x)+π)` (even `n`) or `n·h'''(n(x₀+x))`
/// (odd `n`), compared as power series in `x` through `x^order`.
/// Even `n` expands at `x₀ = 2π/(4n)`, odd `n` at `x₀ = 0`.
pub fn h_multiplication_check(n: u32, order: u32) -> Result<CheckReport> {
    if n < 1 {
        return Err(Error::ParamTooSmall("multiplication check needs n >= 1".into()));
    }
    let q0 = if n.is_multiple_of(2) { Rat::new(1.into(), (4 * n).into()) } else { Rat::zero() };
    let nn = ri(n as i64);
    let vars = Arc::new(vec!["x".to_string()]);
    let mut lhs = TruncPoly::<Cyc>::zero(vars.clone(), order);
    let mut rhs = TruncPoly::<Cyc>::zero(vars, order);
    for j in 0..=order {
        let jf = Rat::from_integer(factorial(j as u64));
        let mut l = Cyc::zero();
        for k in 0..n {
            let q = &q0 + Rat::new(k.into(), n.into());
            l = &l + &h_derivative_at(3 + j as usize, &q)?;
        }
        lhs.add_term(vec![j as u8], l.scale(&(Rat::one() / &jf)));
        let nq = &nn * &q0;
        let r = if n.is_multiple_of(2) { h_derivative(3 + j as usize, &nq)? } else { h_derivative_at(3 + j as usize, &nq)? };
        let w = crate::exact::rat::pow_rat(&nn, j as i32 + 1) / &jf;
        rhs.add_term(vec![j as u8], r.scale(&w));
    }
    let mut report = CheckReport { name: format!("h multiplication n={n}"), compared: order as usize + 1, mismatches: vec![] };
    for j in 0..=order {
        let (a, b) = (lhs.coeff(&[j as u8]), rhs.coeff(&[j as u8]));
        if a != b {
            report.mismatches.push(format!("x^{j}: {a} vs {b}"));
        }
    }
    report.finish()
}

/// Invariance of every correlator of length `3..=d` under `[b] ↔ [ab]`.
pub fn yz_symmetry_check(n: u32, d: u32, exec: Exec) -> Result<CheckReport> {
    let p = Potential::binary_dihedral(n)?;
    let k = p.group.num_classes() - 1;
    let (b, ab) = (k - 2, k - 1);
    let keys: Vec<Vec<u32>> = (3..=d)
        .flat_map(|m| keys_of_length(k, m))
        .filter(|key| key[b] <= key[ab])
        .collect();
    let mut all = keys.clone();
    for key in &keys {
        let mut s = key.clone();
        s.swap(b, ab);
        if s != *key {
            all.push(s);
        }
    }
    let t = CorrelatorTable::from_potential(&p, &all, exec)?;
    let mut report = CheckReport { name: format!("b/ab symmetry bdn{n}"), compared: keys.len(), mismatches: vec![] };
    for key in &keys {
        let mut s = key.clone();
        s.swap(b, ab);
        let (x, y) = (&t.entries[key], &t.entries[&s]);
        if x != y {
            report.mismatches.push(format!("{key:?}: {} vs {}", fmt_rat(x), fmt_rat(y)));
        }
    }
    report.finish()
}
