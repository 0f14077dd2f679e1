//! Exact Lagrange interpolation with holdout certification.

use super::rat::{fmt_rat, ri, Rat};
use super::upoly::UPoly;
use crate::error::{Error, Result};
use num_traits::{One, Zero};
use serde::Serialize;
use std::fmt;

/// Unique polynomial of degree `< points.len()` through the points
/// (Newton divided differences).
pub fn interpolate(points: &[(Rat, Rat)]) -> UPoly {
    let n = points.len();
    let mut dd: Vec<Rat> = points.iter().map(|p| p.1.clone()).collect();
    for j in 1..n {
        for i in (j..n).rev() {
            let den = &points[i].0 - &points[i - j].0;
            assert!(!den.is_zero(), "repeated interpolation node");
            dd[i] = (&dd[i] - &dd[i - 1]) / den;
        }
    }
    let mut p = UPoly::zero();
    for i in (0..n).rev() {
        let lin = UPoly::new(vec![-points[i].0.clone(), Rat::one()]);
        p = &(&p * &lin) + &UPoly::new(vec![dd[i].clone()]);
    }
    p
}

/// `Σ_k coeffs[k]·x^{low+k}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Laurent {
    pub low: i32,
    pub coeffs: Vec<Rat>,
}

impl Laurent {
    pub fn from_poly(p: &UPoly, shift: i32) -> Laurent {
        Laurent { low: -shift, coeffs: p.0.clone() }.normalized()
    }

    fn normalized(mut self) -> Laurent {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        self.coeffs.drain(..lead);
        self.low += lead as i32;
        if self.coeffs.is_empty() {
            self.low = 0;
        }
        self
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for (k, c) in self.coeffs.iter().enumerate() {
            acc += c * super::rat::pow_rat(x, self.low + k as i32);
        }
        acc
    }

    pub fn max_exp(&self) -> Option<i32> {
        (!self.coeffs.is_empty()).then(|| self.low + self.coeffs.len() as i32 - 1)
    }

    pub fn min_exp(&self) -> Option<i32> {
        (!self.coeffs.is_empty()).then_some(self.low)
    }

    pub fn coeff(&self, e: i32) -> Rat {
        let k = e - self.low;
        if k < 0 {
            return Rat::zero();
        }
        self.coeffs.get(k as usize).cloned().unwrap_or_else(Rat::zero)
    }

    /// `(exponent, "p/q")` pairs for non-zero terms.
    pub fn terms(&self) -> Vec<(i32, String)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (self.low + k as i32, fmt_rat(c)))
            .collect()
    }
}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| format!("({c})x^{}", self.low + k as i32))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct HoldoutPoint {
    pub x: i64,
    pub predicted: String,
    pub actual: String,
    pub ok: bool,
}

#[derive(Clone, Debug)]
pub struct LaurentFit {
    pub laurent: Laurent,
    pub holdout: Vec<HoldoutPoint>,
}

/// Fit a Laurent polynomial with pole order `≤ pole` and positive degree
/// `≤ deg` through `f` on `fit`, then require exact agreement on `holdout`.
pub fn fit_laurent(
    f: &dyn Fn(i64) -> Result<Rat>,
    fit: &[i64],
    holdout: &[i64],
    pole: u32,
    deg: u32,
) -> Result<LaurentFit> {
    let need = (pole + deg + 1) as usize;
    if fit.len() < need {
        return Err(Error::PolynomialityViolation(format!(
            "fit set has {} points, degree bounds need {need}",
            fit.len()
        )));
    }
    let mut pts = Vec::with_capacity(fit.len());
    for &x in fit {
        let xr = ri(x);
        pts.push((xr.clone(), f(x)? * super::rat::pow_rat(&xr, pole as i32)));
    }
    let p = interpolate(&pts);
    if p.degree().is_some_and(|d| d > (pole + deg) as usize) {
        return Err(Error::PolynomialityViolation(format!(
            "interpolant has degree {:?} above the bound {} (pole {pole}, degree {deg})",
            p.degree(),
            pole + deg
        )));
    }
    let laurent = Laurent::from_poly(&p, pole as i32);
    let mut report = Vec::new();
    let mut bad = Vec::new();
    for &x in holdout {
        let pred = laurent.eval(&ri(x));
        let act = f(x)?;
        let ok = pred == act;
        if !ok {
            bad.push(x);
        }
        report.push(HoldoutPoint { x, predicted: fmt_rat(&pred), actual: fmt_rat(&act), ok });
    }
    if !bad.is_empty() {
        return Err(Error::PolynomialityViolation(format!("holdout mismatch at {bad:?}")));
    }
    Ok(LaurentFit { laurent, holdout: report })
}

/// Polynomial fit (no pole part).
pub fn fit_polynomial(
    f: &dyn Fn(i64) -> Result<Rat>,
    fit: &[i64],
    holdout: &[i64],
    deg: u32,
) -> Result<LaurentFit> {
    fit_laurent(f, fit, holdout, 0, deg)
}
