//! Bernoulli numbers (convention `B₁ = −1/2`) and polynomials.

use super::rat::{binomial, rbig, ri, Rat};
use num_traits::{One, Zero};
use std::sync::{Mutex, OnceLock};

fn table() -> &'static Mutex<Vec<Rat>> {
    static T: OnceLock<Mutex<Vec<Rat>>> = OnceLock::new();
    T.get_or_init(|| Mutex::new(vec![Rat::one()]))
}

/// `B_m` from `Σ_{k≤m} C(m+1,k) B_k = 0`, memoized.
pub fn bernoulli_number(m: usize) -> Rat {
    let mut t = table().lock().unwrap();
    while t.len() <= m {
        let j = t.len();
        let mut s = Rat::zero();
        for (k, b) in t.iter().enumerate() {
            if !b.is_zero() {
                s += rbig(binomial(j as u64 + 1, k as u64)) * b;
            }
        }
        t.push(-s / ri(j as i64 + 1));
    }
    t[m].clone()
}

/// `B_m(x) = Σ_k C(m,k) B_k x^{m−k}`.
pub fn bernoulli_poly(m: usize, x: &Rat) -> Rat {
    let mut acc = Rat::zero();
    let mut xp = Rat::one();
    // accumulate from k = m down to 0 so that x^{m-k} grows
    for k in (0..=m).rev() {
        let b = bernoulli_number(k);
        if !b.is_zero() {
            acc += rbig(binomial(m as u64, k as u64)) * b * &xp;
        }
        xp *= x;
    }
    acc
}
