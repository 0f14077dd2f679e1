//! The equivariant correlator `⟨e_{[b]}^{2m}⟩` from Chern-character integrals.

use super::chern::{chern_insertion_sum, chern_integral, Route};
use crate::exact::interp::{fit_polynomial, LaurentFit};
use crate::exact::rat::{factorial, fmt_rat, pow_rat, ri, rq};
use crate::exact::{bernoulli_number, bernoulli_poly, Rat};
use crate::group::{ClassKind, GroupModel};
use crate::mckay::closed_form_bb;
use crate::par::Exec;
use crate::{Error, Result};
use num_traits::{One, Zero};
use serde::Serialize;

/// How the λ-coefficient is assembled.
pub const SIGN_CONVENTION: &str = "integrand c(Rπ¹ − Rπ⁰) = λ^{2m−2}·exp(−Σ_k (k−1)! ch_k(Rπ_*f^*V_{ρ₁}) λ^{−k}); \
value = coefficient of λ¹, i.e. the degree-(2m−3) part of exp(−Σ (k−1)! ch_k)";

/// `B_{2m−2}/(2m−2)!·((n−2)^{2m−2} + 2^{2m−3})(1 − 2^{−(2m−2)})`: the
/// single insertion `∫ ch_{2m−3}` over `M̄_{0,2m}(BD̂ₙ;[b]^{2m})`.
pub fn single_insertion_value(n: u32, m: u32) -> Rat {
    assert!(m >= 2, "m >= 2");
    let e = 2 * m as i32 - 2;
    let b = bernoulli_number(e as usize) / Rat::from_integer(factorial(e as u64));
    let two = ri(2);
    b * (pow_rat(&ri(n as i64 - 2), e) + pow_rat(&two, e - 1)) * (Rat::one() - pow_rat(&two, -e))
}

/// Partitions of `total` into odd parts, as descending lists.
fn odd_partitions(total: u32, max_part: u32) -> Vec<Vec<u32>> {
    if total == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    let mut p = max_part.min(total);
    if p.is_multiple_of(2) {
        p -= 1;
    }
    while p >= 1 {
        for mut rest in odd_partitions(total - p, p) {
            rest.insert(0, p);
            out.push(rest);
        }
        if p < 2 {
            break;
        }
        p -= 2;
    }
    out
}

/// `⟨e_{[b]}^{2m}⟩/λ` for even `n`, see [`SIGN_CONVENTION`]. Even Chern
/// characters of index `≥ 2` vanish, so only odd partitions of `2m−3`
/// contribute; partitions with more than three parts are out of reach.
pub fn hodge_bb_correlator(n: u32, m: u32, route: Route, exec: Exec) -> Result<Rat> {
    if n % 2 == 1 || n < 4 {
        return Err(Error::UnsupportedPair(format!("the [b]^{{2m}} correlator needs even n >= 4, got {n}")));
    }
    if m < 2 {
        return Err(Error::ParamTooSmall(format!("m must be >= 2, got {m}")));
    }
    let d = 2 * m - 3;
    let parts = odd_partitions(d, d);
    if let Some(p) = parts.iter().find(|p| p.len() > 3) {
        return Err(Error::UnsupportedPair(format!(
            "m = {m} needs the product ch{p:?} of more than three Chern characters"
        )));
    }
    let b = GroupModel::binary_dihedral(n)?.find_class(ClassKind::B).expect("[b] present");
    let mut total = Rat::zero();
    for p in parts {
        let series = chern_insertion_sum(n, &p, &[b], 2 * m, route, exec)?;
        let mut w = Rat::one();
        for &k in &p {
            w *= -Rat::from_integer(factorial(k as u64 - 1));
        }
        let mut run = 1;
        for i in 1..=p.len() {
            if i < p.len() && p[i] == p[i - 1] {
                run += 1;
            } else {
                w /= Rat::from_integer(factorial(run));
                run = 1;
            }
        }
        total += w * chern_integral(&series, &[2 * m as u8]);
    }
    Ok(total)
}

#[derive(Clone, Debug, Serialize)]
pub struct HodgeReport {
    pub n: u32,
    pub m: u32,
    pub value: String,
    pub closed_form: String,
    #[serde(rename = "match")]
    pub matches: bool,
    pub sign_convention: &'static str,
}

pub fn hodge_report(n: u32, m: u32, route: Route, exec: Exec) -> Result<HodgeReport> {
    let v = hodge_bb_correlator(n, m, route, exec)?;
    let c = closed_form_bb(m, n);
    Ok(HodgeReport {
        n,
        m,
        value: fmt_rat(&v),
        closed_form: fmt_rat(&c),
        matches: v == c,
        sign_convention: SIGN_CONVENTION,
    })
}

/// Coefficients in `x = n−2` of the closed form:
/// `K·(x^{2m−2}/2 + 1)`, `K = (2m−3)!(−1)^{m−1}(2^{2m−2}−1)B_{2m−2}/(2^{m−1}(2m−2)!)`.
pub fn closed_form_bb_poly(m: u32) -> Vec<Rat> {
    let e = 2 * m as i32 - 2;
    let two = ri(2);
    let sign = if m % 2 == 1 { Rat::one() } else { -Rat::one() };
    let k = sign * Rat::from_integer(factorial(2 * m as u64 - 3)) * (pow_rat(&two, e) - Rat::one())
        * bernoulli_number(e as usize)
        / (pow_rat(&two, m as i32 - 1) * Rat::from_integer(factorial(e as u64)));
    let mut v = vec![Rat::zero(); e as usize + 1];
    v[0] = k.clone();
    v[e as usize] = k * rq(1, 2);
    v
}

/// Fit [`hodge_bb_correlator`] on `fit` (even `n`) as a polynomial of degree
/// `2m−2` in `n−2`, check `holdout`, and compare with [`closed_form_bb_poly`].
pub fn bb_polynomiality_check(m: u32, fit: &[u32], holdout: &[u32], route: Route, exec: Exec) -> Result<LaurentFit> {
    if let Some(n) = fit.iter().chain(holdout).find(|&&n| n % 2 == 1) {
        return Err(Error::UnsupportedPair(format!("polynomiality check takes even n only, got {n}")));
    }
    let xs = |s: &[u32]| s.iter().map(|&n| n as i64 - 2).collect::<Vec<_>>();
    let f = |x: i64| hodge_bb_correlator(x as u32 + 2, m, route, exec);
    let res = fit_polynomial(&f, &xs(fit), &xs(holdout), 2 * m - 2)?;
    let want = closed_form_bb_poly(m);
    for (e, w) in want.iter().enumerate() {
        let got = res.laurent.coeff(e as i32);
        if &got != w {
            return Err(Error::PolynomialityViolation(format!(
                "coefficient of (n−2)^{e}: fitted {} vs closed form {}",
                fmt_rat(&got),
                fmt_rat(w)
            )));
        }
    }
    Ok(res)
}

/// `Σ_{k<n} B_p(k/n) = B_p/n^{p−1}` and
/// `Σ_{k<n} B_p((2k+1)/(2n)) = (1/(2n)^{p−1} − 1/n^{p−1}) B_p`
/// for `p ≤ p_max`, `1 ≤ n ≤ n_max`. Returns the number of cases checked.
pub fn bernoulli_sum_identities(p_max: u32, n_max: u32) -> Result<usize> {
    let mut count = 0;
    for p in 0..=p_max as usize {
        let bp = bernoulli_number(p);
        for n in 1..=n_max as i64 {
            let nn = ri(n);
            let s1: Rat = (0..n).map(|k| bernoulli_poly(p, &(ri(k) / &nn))).sum();
            let r1 = &bp * pow_rat(&nn, 1 - p as i32);
            let s2: Rat = (0..n).map(|k| bernoulli_poly(p, &(ri(2 * k + 1) / ri(2 * n)))).sum();
            let r2 = &bp * (pow_rat(&ri(2 * n), 1 - p as i32) - pow_rat(&nn, 1 - p as i32));
            if s1 != r1 || s2 != r2 {
                return Err(Error::IdentityViolation(format!("Bernoulli sums at p = {p}, n = {n}")));
            }
            count += 2;
        }
    }
    Ok(count)
}
