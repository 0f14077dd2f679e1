use num_traits::{One, Zero};
use proptest::prelude::*;
use qmckay::exact::interp::{fit_laurent, interpolate};
use qmckay::exact::rat::{ri, rq, Rat};
use qmckay::exact::trunc::TruncPoly;
use qmckay::exact::upoly::UPoly;
use qmckay::exact::{
    bernoulli_number, bernoulli_poly, cot_exact, cyclotomic_polynomial, h_derivative, root_of_unity, tan_poly, Cyc,
};
use std::sync::Arc;

fn c(r: Rat) -> Cyc {
    Cyc::from_rat(&r)
}

#[test]
fn bernoulli_values() {
    assert_eq!(bernoulli_number(0), ri(1));
    assert_eq!(bernoulli_number(1), rq(-1, 2));
    assert_eq!(bernoulli_number(2), rq(1, 6));
    assert_eq!(bernoulli_number(12), rq(-691, 2730));
    for m in (3..=20).step_by(2) {
        assert!(bernoulli_number(m).is_zero(), "B_{m}");
    }
}

#[test]
fn bernoulli_numbers_match_generating_function() {
    // independent oracle: t/(e^t-1) = 1/(Σ t^k/(k+1)!) by power-series inversion
    let n = 16;
    let mut a: Vec<Rat> = Vec::new();
    let mut fact = Rat::one();
    for k in 0..=n {
        fact *= ri(k as i64 + 1);
        a.push(Rat::one() / fact.clone());
    }
    let mut inv = vec![Rat::zero(); n + 1];
    inv[0] = Rat::one();
    for k in 1..=n {
        let mut s = Rat::zero();
        for j in 1..=k {
            s += &a[j] * &inv[k - j];
        }
        inv[k] = -s;
    }
    let mut fact = Rat::one();
    for (k, v) in inv.iter().enumerate() {
        if k > 0 {
            fact *= ri(k as i64);
        }
        assert_eq!(bernoulli_number(k), v * &fact, "B_{k}");
    }
}

#[test]
fn bernoulli_poly_values() {
    assert_eq!(bernoulli_poly(1, &ri(0)), rq(-1, 2));
    assert_eq!(bernoulli_poly(2, &rq(1, 2)), rq(-1, 12));
    // distribution relation at (p, n) = (4, 3)
    let s: Rat = (0..3).map(|k| bernoulli_poly(4, &rq(k, 3))).sum();
    assert_eq!(s, bernoulli_number(4) / ri(27));
    assert_eq!(s, rq(-1, 30 * 27));
}

#[test]
fn cyclotomic_polynomials() {
    let to_i = |v: Vec<num_bigint::BigInt>| v.iter().map(|x| i64::try_from(x).unwrap()).collect::<Vec<_>>();
    assert_eq!(to_i(cyclotomic_polynomial(1)), vec![-1, 1]);
    assert_eq!(to_i(cyclotomic_polynomial(4)), vec![1, 0, 1]);
    assert_eq!(to_i(cyclotomic_polynomial(12)), vec![1, 0, -1, 0, 1]);
    assert_eq!(to_i(cyclotomic_polynomial(105)).iter().filter(|&&x| x == -2).count(), 2);
}

#[test]
fn roots_of_unity() {
    assert_eq!(root_of_unity(4, 1).coeffs(), vec![ri(0), ri(1)]);
    assert_eq!(root_of_unity(6, 3), Cyc::from_int(-1));
    let s2 = &root_of_unity(8, 1) + &root_of_unity(8, 7);
    assert_eq!(&s2 * &s2, Cyc::from_int(2));
    assert!(!s2.is_rational());
}

#[test]
fn root_of_unity_order_and_product() {
    for m in 1..=100u32 {
        for k in [1i64, 3, m as i64 - 1, 7 * m as i64 + 2] {
            assert_eq!(root_of_unity(m, k).pow(m), Cyc::one(), "M={m} k={k}");
        }
    }
    // Π_{k coprime}(x − ζ^k) = Φ_M, checked coefficientwise in Q(ζ_M)
    for m in [1u32, 2, 3, 4, 5, 6, 8, 9, 10, 12, 15, 16, 20, 24, 30, 36] {
        let mut poly: Vec<Cyc> = vec![Cyc::one()];
        for k in 1..=m {
            if num_integer::gcd(k, m) != 1 {
                continue;
            }
            let z = root_of_unity(m, k as i64);
            let mut next = vec![Cyc::zero(); poly.len() + 1];
            for (i, p) in poly.iter().enumerate() {
                next[i + 1] = &next[i + 1] + p;
                next[i] = &next[i] - &(p * &z);
            }
            poly = next;
        }
        let phi = cyclotomic_polynomial(m as u64);
        assert_eq!(poly.len(), phi.len());
        for (a, b) in poly.iter().zip(&phi) {
            assert_eq!(a.to_rat(), Some(Rat::from_integer(b.clone())), "M={m}");
        }
    }
}

#[test]
fn cross_modulus_promotion() {
    let i4 = root_of_unity(4, 1);
    let i8 = root_of_unity(8, 2);
    let i12 = root_of_unity(12, 3);
    assert_eq!(i4, i8);
    assert_eq!(i4, i12);
    let w3 = root_of_unity(3, 1);
    let w6 = root_of_unity(6, 2);
    assert_eq!(w3, w6);
    assert_eq!(&w3 + &i4, &w6 + &i8);
}

#[test]
fn inversion() {
    for m in [3u32, 5, 8, 12, 24, 40] {
        for k in 1..m as i64 {
            let x = &root_of_unity(m, k) - &Cyc::one();
            assert_eq!(&x * &x.inv(), Cyc::one(), "M={m} k={k}");
        }
    }
    let a = (&root_of_unity(4, 1) - &Cyc::one()).inv();
    assert_eq!(a.coeffs(), vec![rq(-1, 2), rq(-1, 2)]);
}

#[test]
fn cot_values() {
    assert!(cot_exact(&rq(1, 2)).unwrap().is_zero());
    assert_eq!(cot_exact(&rq(1, 4)).unwrap(), Cyc::one());
    let r3 = cot_exact(&rq(1, 6)).unwrap();
    assert_eq!(&r3 * &r3, Cyc::from_int(3));
    assert!(cot_exact(&ri(2)).is_err());
}

#[test]
fn cot_identities() {
    for d in 2..=24i64 {
        for cnum in -2 * d..=2 * d {
            let q = rq(cnum, d);
            if q.is_integer() {
                continue;
            }
            let a = cot_exact(&q).unwrap();
            let b = cot_exact(&-q.clone()).unwrap();
            assert!((&a + &b).is_zero());
            // cot² + 1 = 1/sin², with (2 sin πq)² = 2 − ζ − ζ⁻¹, ζ = e^{2πiq}
            let den = *q.denom().to_u32_digits().1.first().unwrap_or(&1);
            let num: i64 = (q.numer() % q.denom()).try_into().unwrap();
            let z = root_of_unity(den, num);
            let four_sin2 = &(&Cyc::from_int(2) - &z) - &z.conj();
            let lhs = &(&a * &a) + &Cyc::one();
            assert_eq!(lhs, &Cyc::from_int(4) / &four_sin2, "q={q}");
        }
    }
}

#[test]
fn h_derivative_values() {
    assert!(h_derivative(3, &rq(1, 2)).unwrap().is_zero());
    assert_eq!(h_derivative(4, &rq(1, 2)).unwrap(), c(rq(-1, 4)));
    assert_eq!(h_derivative(3, &rq(1, 4)).unwrap(), c(rq(1, 2)));
}

#[test]
fn tan_poly_matches_termwise_series() {
    // tan(−u/2) Taylor series around 0 from tan = sin/cos by series division,
    // then compare derivatives at 0 with P_j(0).
    let n = 16;
    let mut sin = vec![Rat::zero(); n];
    let mut cos = vec![Rat::zero(); n];
    let mut f = Rat::one();
    for k in 0..n {
        if k > 0 {
            f *= ri(k as i64);
        }
        let half = num_traits::pow(rq(-1, 2), k);
        match k % 4 {
            0 => cos[k] = &half / &f,
            1 => sin[k] = &half / &f,
            2 => cos[k] = -&half / &f,
            _ => sin[k] = -&half / &f,
        }
    }
    let mut tan = vec![Rat::zero(); n];
    for k in 0..n {
        let mut s = sin[k].clone();
        for j in 1..=k {
            s -= &cos[j] * &tan[k - j];
        }
        tan[k] = s;
    }
    let mut f = Rat::one();
    for j in 0..12 {
        if j > 0 {
            f *= ri(j as i64);
        }
        assert_eq!(tan_poly(j).eval(&Rat::zero()), &tan[j] * &f, "order {j}");
    }
    // also the t-shape: P_1 = −½(1+t²)
    assert_eq!(tan_poly(1).poly, UPoly::new(vec![rq(-1, 2), ri(0), rq(-1, 2)]));
}

#[test]
fn interpolation_recovers_polynomials() {
    let p = UPoly::from_ints(&[3, -1, 0, 2]);
    let pts: Vec<_> = (0..6).map(|x| (ri(x), p.eval(&ri(x)))).collect();
    assert_eq!(interpolate(&pts), p);
    let f = |n: i64| -> qmckay::Result<Rat> { Ok(rq(1, 6) / ri(n) + ri(n * n)) };
    let fit = fit_laurent(&f, &[2, 3, 4, 5, 6], &[7, 8], 1, 2).unwrap();
    assert_eq!(fit.laurent.coeff(-1), rq(1, 6));
    assert_eq!(fit.laurent.coeff(2), ri(1));
    let g = |n: i64| -> qmckay::Result<Rat> { Ok(ri(1 << n)) };
    assert!(fit_laurent(&g, &[1, 2, 3, 4], &[5], 0, 3).is_err());
}

fn vars(n: usize) -> Arc<Vec<String>> {
    Arc::new((0..n).map(|i| format!("x{i}")).collect())
}

fn arb_poly(nv: usize, d: u32) -> impl Strategy<Value = TruncPoly<Rat>> {
    prop::collection::vec((prop::collection::vec(0u8..3, nv), -5i64..6), 0..6).prop_map(move |ts| {
        let mut p = TruncPoly::zero(vars(nv), d);
        for (e, c) in ts {
            p.add_term(e, ri(c));
        }
        p
    })
}

proptest! {
    #[test]
    fn truncated_product_is_associative(f in arb_poly(3, 4), g in arb_poly(3, 4), h in arb_poly(3, 4)) {
        let f = TruncPoly::zero(f.vars().clone(), 4).add(&f);
        let g = TruncPoly::zero(f.vars().clone(), 4).add(&g);
        let h = TruncPoly::zero(f.vars().clone(), 4).add(&h);
        prop_assert_eq!(f.mul(&g).mul(&h), f.mul(&g.mul(&h)));
    }

    #[test]
    fn truncation_drops_high_degree(f in arb_poly(2, 3), g in arb_poly(2, 3)) {
        let p = f.mul(&g);
        prop_assert!(p.terms().all(|(e, _)| e.iter().map(|&x| x as u32).sum::<u32>() <= 3));
    }

    #[test]
    fn cyc_field_axioms(a in prop::collection::vec(-4i64..5, 4), b in prop::collection::vec(-4i64..5, 4), k in 1i64..12) {
        let m = 12u32;
        let x = Cyc::from_coeffs(m, &a.iter().map(|&v| ri(v)).collect::<Vec<_>>());
        let y = Cyc::from_coeffs(m, &b.iter().map(|&v| ri(v)).collect::<Vec<_>>());
        let z = root_of_unity(24, k);
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&(&x + &y) * &z, &(&x * &z) + &(&y * &z));
        prop_assert_eq!((&x * &y).conj(), &x.conj() * &y.conj());
        if !x.is_zero() {
            prop_assert_eq!(&(&y / &x) * &x, y.clone());
        }
    }
}
