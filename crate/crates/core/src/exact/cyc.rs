//! Elements of cyclotomic fields `Q(ζ_M)` in the power basis modulo `Φ_M`.
//!
//! Stored as integer numerators over one common positive denominator, always
//! in lowest terms. Binary operations promote both operands to the lcm of
//! their moduli. Rational values collapse to modulus 1.

use super::rat::{rbig, Rat};
use super::upoly::UPoly;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock, RwLock};

fn cyclo_cache() -> &'static RwLock<HashMap<u64, Arc<Vec<BigInt>>>> {
    static C: OnceLock<RwLock<HashMap<u64, Arc<Vec<BigInt>>>>> = OnceLock::new();
    C.get_or_init(Default::default)
}

/// `Φ_M` with integer coefficients, low degree first.
///
/// Computed by dividing `x^M − 1` by `Φ_d` for every proper divisor `d`.
pub fn cyclotomic_polynomial(m: u64) -> Vec<BigInt> {
    assert!(m >= 1, "cyclotomic_polynomial needs M >= 1");
    if let Some(p) = cyclo_cache().read().unwrap().get(&m) {
        return p.as_ref().clone();
    }
    let mut p = vec![BigInt::zero(); m as usize + 1];
    p[0] = BigInt::from(-1);
    p[m as usize] = BigInt::one();
    for d in 1..m {
        if m.is_multiple_of(d) {
            p = div_monic(&p, &cyclotomic_polynomial(d));
        }
    }
    cyclo_cache().write().unwrap().insert(m, Arc::new(p.clone()));
    p
}

fn div_monic(a: &[BigInt], d: &[BigInt]) -> Vec<BigInt> {
    let dd = d.len() - 1;
    let mut r = a.to_vec();
    let mut q = vec![BigInt::zero(); a.len() - dd];
    for k in (0..q.len()).rev() {
        let c = r[k + dd].clone();
        if !c.is_zero() {
            for (j, dj) in d.iter().enumerate() {
                r[k + j] -= &c * dj;
            }
        }
        q[k] = c;
    }
    debug_assert!(r[..dd].iter().all(|x| x.is_zero()), "inexact division");
    q
}

struct Field {
    phi: usize,
    /// `pow[k]` is `ζ^k` reduced, for `0 ≤ k < m`.
    pow: Vec<Vec<i64>>,
    phi_poly: UPoly,
}

fn field(m: u32) -> Arc<Field> {
    static F: OnceLock<RwLock<HashMap<u32, Arc<Field>>>> = OnceLock::new();
    let map = F.get_or_init(Default::default);
    if let Some(f) = map.read().unwrap().get(&m) {
        return f.clone();
    }
    let phi_big = cyclotomic_polynomial(m as u64);
    let phi = phi_big.len() - 1;
    let phi_small: Vec<i64> = phi_big
        .iter()
        .map(|c| i64::try_from(c).expect("cyclotomic coefficient overflow"))
        .collect();
    let mut pow = Vec::with_capacity(m as usize);
    let mut cur = vec![0i64; phi];
    cur[0] = 1;
    for _ in 0..m {
        pow.push(cur.clone());
        // multiply by x, then subtract top * Φ
        let top = cur[phi - 1];
        for j in (1..phi).rev() {
            cur[j] = cur[j - 1];
        }
        cur[0] = 0;
        if top != 0 {
            for j in 0..phi {
                cur[j] = cur[j]
                    .checked_sub(top.checked_mul(phi_small[j]).expect("overflow"))
                    .expect("overflow");
            }
        }
    }
    let phi_poly = UPoly::new(phi_big.into_iter().map(rbig).collect());
    let f = Arc::new(Field { phi, pow, phi_poly });
    map.write().unwrap().insert(m, f.clone());
    f
}

/// Exact element of `Q(ζ_M)`.
#[derive(Clone, Debug)]
pub struct Cyc {
    m: u32,
    num: Vec<BigInt>,
    den: BigInt,
}

impl Cyc {
    fn build(m: u32, mut num: Vec<BigInt>, mut den: BigInt) -> Cyc {
        if num.iter().all(|c| c.is_zero()) {
            return Cyc::zero();
        }
        let mut g = den.clone();
        for c in &num {
            if g.is_one() {
                break;
            }
            g = g.gcd(c);
        }
        if den.is_negative() {
            g = -g;
        }
        if !g.is_one() {
            for c in num.iter_mut() {
                *c = &*c / &g;
            }
            den = &den / &g;
        }
        if m > 1 && num[1..].iter().all(|c| c.is_zero()) {
            num.truncate(1);
            return Cyc { m: 1, num, den };
        }
        Cyc { m, num, den }
    }

    pub fn zero() -> Cyc {
        Cyc { m: 1, num: vec![BigInt::zero()], den: BigInt::one() }
    }

    pub fn one() -> Cyc {
        Cyc::from_int(1)
    }

    pub fn from_int(n: i64) -> Cyc {
        Cyc { m: 1, num: vec![BigInt::from(n)], den: BigInt::one() }
    }

    pub fn from_rat(r: &Rat) -> Cyc {
        Cyc { m: 1, num: vec![r.numer().clone()], den: r.denom().clone() }
    }

    /// Element given by coordinates on `1, ζ_M, …, ζ_M^{M−1}` (not reduced).
    pub fn from_exponents(m: u32, c: &[Rat]) -> Cyc {
        let f = field(m);
        let den = c.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let mut num = vec![BigInt::zero(); f.phi];
        for (k, x) in c.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let s = x.numer() * (&den / x.denom());
            for (j, p) in f.pow[k % m as usize].iter().enumerate() {
                if *p != 0 {
                    num[j] += &s * *p;
                }
            }
        }
        Cyc::build(m, num, den)
    }

    /// Element from power-basis coordinates of length `φ(M)`.
    pub fn from_coeffs(m: u32, c: &[Rat]) -> Cyc {
        let f = field(m);
        assert_eq!(c.len(), f.phi, "coordinate vector has wrong length");
        let den = c.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let num = c.iter().map(|x| x.numer() * (&den / x.denom())).collect();
        Cyc::build(m, num, den)
    }

    pub fn modulus(&self) -> u32 {
        self.m
    }

    /// Power-basis coordinates in the current modulus.
    pub fn coeffs(&self) -> Vec<Rat> {
        self.num.iter().map(|c| Rat::new(c.clone(), self.den.clone())).collect()
    }

    /// Power-basis coordinates after promotion to modulus `m` (a multiple of
    /// the current one).
    pub fn coeffs_in(&self, m: u32) -> Vec<Rat> {
        assert!(m.is_multiple_of(self.m), "modulus {m} is not a multiple of {}", self.m);
        self.promote(m).into_iter().map(|c| Rat::new(c, self.den.clone())).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|c| c.is_zero())
    }

    pub fn is_rational(&self) -> bool {
        self.num[1..].iter().all(|c| c.is_zero())
    }

    pub fn to_rat(&self) -> Option<Rat> {
        self.is_rational().then(|| Rat::new(self.num[0].clone(), self.den.clone()))
    }

    fn promote(&self, m: u32) -> Vec<BigInt> {
        if m == self.m {
            return self.num.clone();
        }
        let f = field(m);
        let step = (m / self.m) as usize;
        let mut out = vec![BigInt::zero(); f.phi];
        for (j, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (i, p) in f.pow[(j * step) % m as usize].iter().enumerate() {
                if *p != 0 {
                    out[i] += c * *p;
                }
            }
        }
        out
    }

    fn align(&self, o: &Cyc) -> (u32, Vec<BigInt>, Vec<BigInt>) {
        let m = (self.m as u64).lcm(&(o.m as u64)) as u32;
        (m, self.promote(m), o.promote(m))
    }

    pub fn scale(&self, r: &Rat) -> Cyc {
        let num = self.num.iter().map(|c| c * r.numer()).collect();
        Cyc::build(self.m, num, &self.den * r.denom())
    }

    /// Complex conjugate (`ζ ↦ ζ⁻¹`).
    pub fn conj(&self) -> Cyc {
        let f = field(self.m);
        let m = self.m as usize;
        let mut out = vec![BigInt::zero(); f.phi];
        for (j, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (i, p) in f.pow[(m - j) % m].iter().enumerate() {
                if *p != 0 {
                    out[i] += c * *p;
                }
            }
        }
        Cyc::build(self.m, out, self.den.clone())
    }

    pub fn inv(&self) -> Cyc {
        assert!(!self.is_zero(), "inverse of zero");
        if self.m == 1 {
            return Cyc::from_rat(&self.to_rat().unwrap().recip());
        }
        let f = field(self.m);
        let a = UPoly::new(self.coeffs());
        // extended Euclid: s*a + t*Φ = g
        let (mut r0, mut r1) = (f.phi_poly.clone(), a);
        let (mut s0, mut s1) = (UPoly::zero(), UPoly::one());
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            let s2 = &s0 - &(&q * &s1);
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
        }
        assert_eq!(r0.degree(), Some(0), "non-invertible element");
        let s = s0.scale(&r0.coeff(0).recip());
        let (_, s) = s.divrem(&f.phi_poly);
        let mut c = s.0;
        c.resize(f.phi, Rat::zero());
        Cyc::from_coeffs(self.m, &c)
    }

    pub fn pow(&self, mut e: u32) -> Cyc {
        let mut base = self.clone();
        let mut acc = Cyc::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn repr(&self) -> CycRepr {
        CycRepr {
            modulus: self.m,
            coeffs: self.coeffs().iter().map(super::rat::fmt_rat).collect(),
        }
    }

    pub fn repr_in(&self, m: u32) -> CycRepr {
        CycRepr {
            modulus: m,
            coeffs: self.coeffs_in(m).iter().map(super::rat::fmt_rat).collect(),
        }
    }

    pub fn from_repr(r: &CycRepr) -> Option<Cyc> {
        let c: Option<Vec<Rat>> = r.coeffs.iter().map(|s| super::rat::parse_rat(s)).collect();
        let c = c?;
        (c.len() == field(r.modulus).phi).then(|| Cyc::from_coeffs(r.modulus, &c))
    }
}

/// Serialized form: modulus plus `"p/q"` power-basis coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycRepr {
    pub modulus: u32,
    pub coeffs: Vec<String>,
}

/// `ζ_M^k`.
pub fn root_of_unity(m: u32, k: i64) -> Cyc {
    assert!(m >= 1);
    let f = field(m);
    let e = k.rem_euclid(m as i64) as usize;
    let num = f.pow[e].iter().map(|&p| BigInt::from(p)).collect();
    Cyc::build(m, num, BigInt::one())
}

impl PartialEq for Cyc {
    fn eq(&self, o: &Cyc) -> bool {
        if self.m == o.m {
            return self.den == o.den && self.num == o.num;
        }
        if self.den != o.den {
            return false;
        }
        let (_, a, b) = self.align(o);
        a == b
    }
}

impl Eq for Cyc {}

impl<'a> Add<&'a Cyc> for &'a Cyc {
    type Output = Cyc;
    fn add(self, o: &Cyc) -> Cyc {
        if o.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return o.clone();
        }
        let (m, a, b) = self.align(o);
        let num = a
            .iter()
            .zip(&b)
            .map(|(x, y)| x * &o.den + y * &self.den)
            .collect();
        Cyc::build(m, num, &self.den * &o.den)
    }
}

impl<'a> Sub<&'a Cyc> for &'a Cyc {
    type Output = Cyc;
    fn sub(self, o: &Cyc) -> Cyc {
        self + &(-o)
    }
}

impl Neg for &Cyc {
    type Output = Cyc;
    fn neg(self) -> Cyc {
        Cyc { m: self.m, num: self.num.iter().map(|c| -c).collect(), den: self.den.clone() }
    }
}

impl<'a> Mul<&'a Cyc> for &'a Cyc {
    type Output = Cyc;
    fn mul(self, o: &Cyc) -> Cyc {
        if self.is_zero() || o.is_zero() {
            return Cyc::zero();
        }
        if self.m == 1 {
            return o.scale(&Rat::new(self.num[0].clone(), self.den.clone()));
        }
        if o.m == 1 {
            return self.scale(&Rat::new(o.num[0].clone(), o.den.clone()));
        }
        let (m, a, b) = self.align(o);
        let f = field(m);
        let phi = f.phi;
        let mut prod = vec![BigInt::zero(); 2 * phi - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        let mut num: Vec<BigInt> = prod[..phi].to_vec();
        for (k, c) in prod.iter().enumerate().skip(phi) {
            if c.is_zero() {
                continue;
            }
            for (i, p) in f.pow[k % m as usize].iter().enumerate() {
                if *p != 0 {
                    num[i] += c * *p;
                }
            }
        }
        Cyc::build(m, num, &self.den * &o.den)
    }
}

impl<'a> Div<&'a Cyc> for &'a Cyc {
    type Output = Cyc;
    fn div(self, o: &Cyc) -> Cyc {
        self * &o.inv()
    }
}

macro_rules! owned_ops {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr<Cyc> for Cyc {
            type Output = Cyc;
            fn $f(self, o: Cyc) -> Cyc { (&self).$f(&o) }
        }
        impl<'a> $tr<&'a Cyc> for Cyc {
            type Output = Cyc;
            fn $f(self, o: &Cyc) -> Cyc { (&self).$f(o) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul, Div div);

impl Neg for Cyc {
    type Output = Cyc;
    fn neg(self) -> Cyc {
        -&self
    }
}

impl fmt::Display for Cyc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.to_rat() {
            return write!(f, "{r}");
        }
        let mut first = true;
        for (k, c) in self.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                _ => write!(f, "({c})*z{}^{k}", self.m)?,
            }
        }
        Ok(())
    }
}
