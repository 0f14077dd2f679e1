use super::model::GroupModel;
use crate::exact::Cyc;
use crate::Rat;
use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Class-count vector of a class list.
pub(crate) fn counts_of(g: &GroupModel, classes: &[usize]) -> Vec<u32> {
    let mut v = vec![0u32; g.num_classes()];
    for &c in classes {
        v[c] += 1;
    }
    v
}

pub(crate) fn convolution_counts(g: &GroupModel, counts: &[u32]) -> Rat {
    let list: Vec<usize> = counts
        .iter()
        .enumerate()
        .flat_map(|(c, &k)| std::iter::repeat_n(c, k as usize))
        .collect();
    frobenius_count_convolution(g, &list)
}

/// `#{(g_i) : g_i ∈ C_i, Π g_i = 1} / |G|` by iterated class-algebra products.
pub fn frobenius_count_convolution(g: &GroupModel, classes: &[usize]) -> Rat {
    let nc = g.num_classes();
    if classes.is_empty() {
        return Rat::new(BigInt::one(), g.big_order());
    }
    // v[k] = number of prefixes whose product equals a fixed element of C_k
    let mut v = vec![BigInt::zero(); nc];
    v[classes[0]] = BigInt::one();
    for &c in &classes[1..] {
        let mut w = vec![BigInt::zero(); nc];
        for (k, wk) in w.iter_mut().enumerate() {
            for (i, vi) in v.iter().enumerate() {
                if vi.is_zero() {
                    continue;
                }
                let a = g.structure_constant(i, c, k);
                if a != 0 {
                    *wk += vi * BigInt::from(a);
                }
            }
        }
        v = w;
    }
    Rat::new(v[g.unit_class()].clone(), g.big_order())
}

/// Same count from the character table:
/// `(Π|C_i|/|G|²) Σ_χ Πχ(C_i) / χ(1)^{m−2}`.
pub fn frobenius_count_characters(g: &GroupModel, classes: &[usize]) -> Rat {
    let t = g.chars();
    let m = classes.len() as i32;
    let mut s = Cyc::zero();
    for (ir, row) in t.values.iter().enumerate() {
        let mut p = Cyc::one();
        for &c in classes {
            p = &p * &row[c];
        }
        let d = Rat::from_integer(t.irreps[ir].dim.into());
        s = &s + &p.scale(&crate::exact::rat::pow_rat(&d, 2 - m));
    }
    let mut pre = Rat::new(BigInt::one(), g.big_order() * g.big_order());
    for &c in classes {
        pre *= Rat::from_integer(g.classes[c].size.into());
    }
    s.scale(&pre).to_rat().expect("tuple count is rational")
}

/// Frobenius count for a class list. With `normalized` the result is `N/|G|`,
/// otherwise the raw tuple count `N`.
pub fn frobenius_count(g: &GroupModel, classes: &[usize], normalized: bool) -> Rat {
    let v = g.frob(&counts_of(g, classes));
    if normalized {
        v
    } else {
        v * Rat::from_integer(g.big_order())
    }
}
