//! Multivariate polynomials truncated at a total degree.
//!
//! Exponent vectors are dense over a declared variable list and kept in a
//! `BTreeMap`, so structural equality is value equality.

use super::cyc::Cyc;
use super::rat::{ri, Rat};
use num_traits::{One, Zero};
use std::collections::{BTreeMap, HashMap};
use std::fmt::Debug;
use std::sync::Arc;

/// Coefficient ring for [`TruncPoly`].
pub trait Ring: Clone + PartialEq + Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn from_rat(r: &Rat) -> Self;
    fn scale_int(&self, k: i64) -> Self {
        self.mul(&Self::from_rat(&ri(k)))
    }
}

impl Ring for Rat {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn from_rat(r: &Rat) -> Self {
        r.clone()
    }
}

impl Ring for Cyc {
    fn zero() -> Self {
        Cyc::zero()
    }
    fn one() -> Self {
        Cyc::one()
    }
    fn is_zero(&self) -> bool {
        Cyc::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn from_rat(r: &Rat) -> Self {
        Cyc::from_rat(r)
    }
}

pub type Exps = Vec<u8>;

#[derive(Clone, Debug, PartialEq)]
pub struct TruncPoly<C: Ring> {
    vars: Arc<Vec<String>>,
    max_deg: u32,
    terms: BTreeMap<Exps, C>,
}

fn deg(e: &[u8]) -> u32 {
    e.iter().map(|&x| x as u32).sum()
}

impl<C: Ring> TruncPoly<C> {
    pub fn zero(vars: Arc<Vec<String>>, max_deg: u32) -> Self {
        TruncPoly { vars, max_deg, terms: BTreeMap::new() }
    }

    pub fn constant(vars: Arc<Vec<String>>, max_deg: u32, c: C) -> Self {
        let mut p = Self::zero(vars, max_deg);
        let n = p.nvars();
        p.add_term(vec![0; n], c);
        p
    }

    pub fn var(vars: Arc<Vec<String>>, max_deg: u32, i: usize) -> Self {
        let mut p = Self::zero(vars, max_deg);
        let mut e = vec![0; p.nvars()];
        e[i] = 1;
        p.add_term(e, C::one());
        p
    }

    pub fn vars(&self) -> &Arc<Vec<String>> {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn max_deg(&self) -> u32 {
        self.max_deg
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exps, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &[u8]) -> C {
        self.terms.get(e).cloned().unwrap_or_else(C::zero)
    }

    /// Adds `c·x^e`, dropping it if `e` exceeds the truncation degree.
    pub fn add_term(&mut self, e: Exps, c: C) {
        debug_assert_eq!(e.len(), self.nvars());
        if c.is_zero() || deg(&e) > self.max_deg {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                let s = v.add(&c);
                if s.is_zero() {
                    self.terms.remove(&e);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    fn from_map(vars: Arc<Vec<String>>, max_deg: u32, m: HashMap<Exps, C>) -> Self {
        let terms = m.into_iter().filter(|(e, c)| !c.is_zero() && deg(e) <= max_deg).collect();
        TruncPoly { vars, max_deg, terms }
    }

    pub fn with_max_deg(&self, d: u32) -> Self {
        let terms = self.terms.iter().filter(|(e, _)| deg(e) <= d).map(|(e, c)| (e.clone(), c.clone())).collect();
        TruncPoly { vars: self.vars.clone(), max_deg: d, terms }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.with_max_deg(self.max_deg.min(o.max_deg));
        for (e, c) in &o.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), c.neg())).collect();
        TruncPoly { vars: self.vars.clone(), max_deg: self.max_deg, terms }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, k: &C) -> Self {
        if k.is_zero() {
            return Self::zero(self.vars.clone(), self.max_deg);
        }
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), c.mul(k))).collect();
        TruncPoly { vars: self.vars.clone(), max_deg: self.max_deg, terms }
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.mul_where(o, |_| true)
    }

    /// Product keeping only monomials accepted by `keep`.
    pub fn mul_where(&self, o: &Self, keep: impl Fn(&[u8]) -> bool) -> Self {
        assert!(Arc::ptr_eq(&self.vars, &o.vars) || self.vars == o.vars, "variable sets differ");
        let d = self.max_deg.min(o.max_deg);
        let mut acc: HashMap<Exps, C> = HashMap::new();
        for (ea, ca) in &self.terms {
            let da = deg(ea);
            for (eb, cb) in &o.terms {
                if da + deg(eb) > d {
                    continue;
                }
                let e: Exps = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                if !keep(&e) {
                    continue;
                }
                let c = ca.mul(cb);
                match acc.get_mut(&e) {
                    Some(v) => *v = v.add(&c),
                    None => {
                        acc.insert(e, c);
                    }
                }
            }
        }
        Self::from_map(self.vars.clone(), d, acc)
    }

    /// Partial derivative in variable `i`.
    pub fn deriv(&self, i: usize) -> Self {
        let mut out = Self::zero(self.vars.clone(), self.max_deg);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut f = e.clone();
            let k = f[i] as i64;
            f[i] -= 1;
            out.terms.insert(f, c.scale_int(k));
        }
        out
    }

    /// Multiplication by variable `i` (re-truncated).
    pub fn mul_var(&self, i: usize) -> Self {
        let mut out = Self::zero(self.vars.clone(), self.max_deg);
        for (e, c) in &self.terms {
            if deg(e) + 1 > self.max_deg {
                continue;
            }
            let mut f = e.clone();
            f[i] += 1;
            out.terms.insert(f, c.clone());
        }
        out
    }

    pub fn retain(&self, keep: impl Fn(&[u8]) -> bool) -> Self {
        let terms = self.terms.iter().filter(|(e, _)| keep(e)).map(|(e, c)| (e.clone(), c.clone())).collect();
        TruncPoly { vars: self.vars.clone(), max_deg: self.max_deg, terms }
    }

    pub fn map_coeffs<D: Ring>(&self, f: impl Fn(&C) -> D) -> TruncPoly<D> {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e.clone(), f(c)))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        TruncPoly { vars: self.vars.clone(), max_deg: self.max_deg, terms }
    }

    /// Substitute `x_i ↦ images[i]`; all images share one variable set.
    pub fn substitute(&self, images: &[TruncPoly<C>]) -> TruncPoly<C> {
        assert_eq!(images.len(), self.nvars());
        let target = images[0].vars.clone();
        let d = images.iter().map(|p| p.max_deg).min().unwrap();
        let mut powers: Vec<Vec<TruncPoly<C>>> = images
            .iter()
            .map(|p| vec![TruncPoly::constant(target.clone(), d, C::one()), p.with_max_deg(d)])
            .collect();
        let mut out = TruncPoly::zero(target.clone(), d);
        for (e, c) in &self.terms {
            let mut term = TruncPoly::constant(target.clone(), d, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                while powers[i].len() <= k as usize {
                    let next = powers[i].last().unwrap().mul(&powers[i][1]);
                    powers[i].push(next);
                }
                term = term.mul(&powers[i][k as usize]);
                if term.is_empty() {
                    break;
                }
            }
            for (e, c) in term.terms {
                out.add_term(e, c);
            }
        }
        out
    }
}
