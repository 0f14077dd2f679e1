//! Exact cotangent/tangent values at rational multiples of π and the
//! derivative polynomials of `h'''(u) = ½·tan(−u/2)`.

use super::cyc::{root_of_unity, Cyc};
use super::rat::{fmt_rat, rq, Rat};
use super::upoly::UPoly;
use crate::error::{Error, Result};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use std::sync::{Mutex, OnceLock};

/// Polynomial `P_j(t)` with `d^j/du^j tan(−u/2) = P_j(tan(−u/2))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TanPoly {
    pub order: usize,
    pub poly: UPoly,
}

impl TanPoly {
    pub fn eval_cyc(&self, t: &Cyc) -> Cyc {
        self.poly
            .0
            .iter()
            .rev()
            .fold(Cyc::zero(), |acc, c| &(&acc * t) + &Cyc::from_rat(c))
    }

    pub fn eval(&self, t: &Rat) -> Rat {
        self.poly.eval(t)
    }
}

/// `P_0 = t`, `P_{j+1} = P_j'(t)·(−½)(1+t²)`, memoized.
pub fn tan_poly(j: usize) -> TanPoly {
    static T: OnceLock<Mutex<Vec<UPoly>>> = OnceLock::new();
    let mut t = T.get_or_init(|| Mutex::new(vec![UPoly::x()])).lock().unwrap();
    let factor = UPoly::new(vec![rq(-1, 2), Rat::zero(), rq(-1, 2)]);
    while t.len() <= j {
        let next = &t.last().unwrap().derivative() * &factor;
        t.push(next);
    }
    TanPoly { order: j, poly: t[j].clone() }
}

fn split(q: &Rat) -> (i64, u32) {
    let d = q.denom().to_u32().expect("denominator too large");
    let c = (q.numer() % q.denom()).to_i64().expect("numerator too large");
    (c, d)
}

/// `cot(πq) = i(ζ+1)/(ζ−1)` with `ζ = e^{2πiq}`.
pub fn cot_exact(q: &Rat) -> Result<Cyc> {
    if q.is_integer() {
        return Err(Error::IntegerPole(fmt_rat(q)));
    }
    let (c, d) = split(q);
    let zeta = root_of_unity(d, c);
    let i = root_of_unity(4, 1);
    let one = Cyc::one();
    Ok(&(&i * &(&zeta + &one)) / &(&zeta - &one))
}

/// `tan(πq) = −i(ζ−1)/(ζ+1)` with `ζ = e^{2πiq}`.
pub fn tan_exact(q: &Rat) -> Result<Cyc> {
    let twice = q * Rat::from_integer(2.into());
    if twice.is_integer() && !q.is_integer() {
        return Err(Error::HalfIntegerPole(fmt_rat(q)));
    }
    if q.is_integer() {
        return Ok(Cyc::zero());
    }
    let (c, d) = split(q);
    let zeta = root_of_unity(d, c);
    let i = root_of_unity(4, 1);
    let one = Cyc::one();
    Ok(-(&(&i * &(&zeta - &one)) / &(&zeta + &one)))
}

/// `h^{(order)}(π + 2πq) = ½·P_{order−3}(cot πq)`.
pub fn h_derivative(order: usize, q: &Rat) -> Result<Cyc> {
    assert!(order >= 3, "only derivatives of order >= 3 are meaningful");
    let t = cot_exact(q)?;
    Ok(tan_poly(order - 3).eval_cyc(&t).scale(&rq(1, 2)))
}

/// `h^{(3+j)}` at `u = 2πq` (no π shift): `½·P_j(tan(−πq))`.
pub fn h_derivative_at(order: usize, q: &Rat) -> Result<Cyc> {
    assert!(order >= 3);
    let t = -tan_exact(q)?;
    Ok(tan_poly(order - 3).eval_cyc(&t).scale(&rq(1, 2)))
}

/// Reduce `q` modulo 1 into `[0, 1)`.
pub fn frac(q: &Rat) -> Rat {
    let r = q.numer().mod_floor(q.denom());
    let out = Rat::new(r, q.denom().clone());
    debug_assert!(out >= Rat::zero());
    out
}
