use num_traits::{One, Zero};
use proptest::prelude::*;
use qmckay::exact::rat::{ri, rq};
use qmckay::exact::{bernoulli_number, bernoulli_poly, root_of_unity};
use qmckay::fracbern::*;
use qmckay::{Cyc, Error, Exec, Rat};

fn e(u: u32, v: u32, d: &[u32]) -> TreeEdge {
    TreeEdge { u, v, decoration: d.to_vec() }
}

/// Full product loop over every labelling, constraint checked afterwards.
fn naive_tree_sum(t: &DecoratedTree, n: u32) -> Rat {
    let adj = t.adjacency();
    let k = t.edges.len();
    let mut labels = vec![0u32; k];
    let mut total = Rat::zero();
    loop {
        let ok = adj
            .values()
            .filter(|nb| nb.len() >= 2)
            .all(|nb| nb.iter().map(|&(_, ei)| labels[ei]).sum::<u32>() % n == 0);
        if ok {
            let mut p = Rat::one();
            for (ei, edge) in t.edges.iter().enumerate() {
                for &m in &edge.decoration {
                    p *= bernoulli_poly(m as usize, &Rat::new(labels[ei].into(), n.into()));
                }
            }
            total += p;
        }
        let mut i = 0;
        while i < k {
            labels[i] += 1;
            if labels[i] < n {
                break;
            }
            labels[i] = 0;
            i += 1;
        }
        if i == k {
            return total;
        }
    }
}

fn gamma3(d: &[&[u32]; 5]) -> DecoratedTree {
    DecoratedTree::new(
        (0..6).collect(),
        vec![e(0, 2, d[0]), e(1, 2, d[1]), e(2, 3, d[2]), e(3, 4, d[3]), e(3, 5, d[4])],
    )
    .unwrap()
}

#[test]
fn alpha_values() {
    assert_eq!(alpha(2, 1), Cyc::from_rat(&rq(-1, 2)));
    for n in 2..=9 {
        assert!(alpha(n, 0).is_zero());
        assert!(alpha(n, n as i64).is_zero());
    }
    let a = alpha(4, 1);
    let i = root_of_unity(4, 1);
    assert_eq!(&(&i - &Cyc::one()) * &a, Cyc::one());
    assert_eq!(a, (&Cyc::from_int(-1) - &i).scale(&rq(1, 2)));
}

#[test]
fn alpha_pairs_sum_to_minus_one() {
    for n in 2..=12u32 {
        for b in 1..n as i64 {
            assert_eq!(&alpha(n, b) + &alpha(n, n as i64 - b), Cyc::from_int(-1), "n={n} b={b}");
        }
    }
}

#[test]
fn alpha_power_sums() {
    for n in 2..=8 {
        assert_eq!(alpha_power_sum(n, 0).unwrap(), ri(n as i64 - 1));
        let nn = n as i64;
        assert_eq!(alpha_power_sum(n, 2).unwrap(), rq(-5 + 6 * nn - nn * nn, 12));
    }
    assert_eq!(alpha_power_sum(2, 2).unwrap(), rq(1, 4));
    // direct oracle for the linear sum: −(n−1)/2
    for n in 2..=10 {
        assert_eq!(alpha_power_sum(n, 1).unwrap(), rq(1 - n as i64, 2));
    }
}

#[test]
fn alpha_power_sum_interpolation() {
    let p0 = alpha_power_sum_polynomial(0, &[2, 3, 4], &[5]).unwrap();
    assert_eq!(p0.laurent.coeff(1), ri(1));
    assert_eq!(p0.laurent.coeff(0), ri(-1));
    let p2 = alpha_power_sum_polynomial(2, &[2, 3, 4, 5, 6], &[7, 8, 9, 10]).unwrap();
    assert!(p2.holdout.iter().all(|h| h.ok));
    assert_eq!(p2.laurent.coeff(2), rq(-1, 12));
    assert_eq!(p2.laurent.coeff(1), rq(1, 2));
    assert_eq!(p2.laurent.coeff(0), rq(-5, 12));
    let p1 = alpha_power_sum_polynomial(1, &[2, 3, 4, 5], &[6, 7]).unwrap();
    for n in 2..=10 {
        let direct: Cyc = (1..n).fold(Cyc::zero(), |acc, b| &acc + &alpha(n as u32, b));
        assert_eq!(Cyc::from_rat(&p1.laurent.eval(&ri(n))), direct);
    }
}

#[test]
fn alpha_power_sum_fit_is_stable() {
    let small = alpha_power_sum_polynomial(3, &[2, 3, 4, 5, 6], &[7]).unwrap();
    let large = alpha_power_sum_polynomial(3, &(2..=10).collect::<Vec<_>>(), &[11]).unwrap();
    assert_eq!(small.laurent, large.laurent);
}

#[test]
fn beta_values() {
    for n in 1..=8u32 {
        for m in 0..=6u32 {
            let want = bernoulli_number(m as usize) / qmckay::exact::rat::pow_rat(&ri(n as i64), m as i32 - 1);
            assert_eq!(beta(&[m], n, 0), Cyc::from_rat(&want));
        }
        for b in 0..n as i64 {
            let want = if b == 0 { Cyc::from_int(n as i64) } else { Cyc::zero() };
            assert_eq!(beta(&[], n, b), want);
        }
        for b in 1..n as i64 {
            assert_eq!(beta(&[1], n, b), alpha(n, b), "n={n} b={b}");
        }
    }
}

#[test]
fn beta_conjugation_symmetry() {
    for n in 1..=9u32 {
        for ms in [vec![1], vec![2], vec![1, 3], vec![2, 2], vec![0, 5]] {
            for b in 0..n as i64 {
                assert_eq!(beta(&ms, n, -b), beta(&ms, n, b).conj());
            }
        }
    }
}

#[test]
fn beta_scaling_rules() {
    assert_eq!(beta_scaling(&[2], 2, 1, 3), beta(&[2], 2, 1).scale(&rq(1, 3)));
    for c in 1..=6u32 {
        for m in 0..=4u32 {
            for (n, b) in [(3u32, 1i64), (4, 3), (5, 2)] {
                let want = beta(&[m], n, b).scale(&qmckay::exact::rat::pow_rat(&ri(c as i64), 1 - m as i32));
                assert_eq!(beta_scaling(&[m], n, b, c), want);
            }
        }
        assert_eq!(beta_scaling(&[], 3, 0, c), Cyc::from_int(3 * c as i64));
    }
    let fit = beta_scaling_laurent(&[2, 2], 1, 0, &[1, 2, 3, 4, 5, 6], &[7, 8]).unwrap();
    assert!(fit.holdout.iter().all(|h| h.ok));
}

#[test]
fn beta_identity_examples() {
    let lhs: Cyc = (0..3).fold(Cyc::zero(), |acc, i| &acc + &(&beta(&[2], 3, i) * &beta(&[2], 3, -i)));
    assert_eq!(lhs, beta(&[2, 2], 3, 0).scale(&ri(3)));
    assert_eq!(&beta(&[2], 4, 1) + &beta(&[2], 4, 3), beta(&[2], 2, 1).scale(&ri(2)));
    let total: Cyc = (0..5).fold(Cyc::zero(), |acc, b| &acc + &beta(&[4], 5, b));
    assert_eq!(total, Cyc::from_rat(&(ri(5) * bernoulli_number(4))));
}

#[test]
fn beta_identities_hold() {
    let seq = beta_identities_check(4, Exec::Seq).unwrap();
    assert!(seq.all_ok());
    let par = beta_identities_check(4, Exec::Par).unwrap();
    assert_eq!(seq.instances.len(), par.instances.len());
    assert_eq!(seq.passed(), par.passed());
}

#[test]
fn tree_sum_examples() {
    for n in 1..=8u32 {
        for m in 0..=5u32 {
            let g1 = DecoratedTree::star(&[vec![m]]);
            assert_eq!(Cyc::from_rat(&tree_sum(&g1, n).unwrap()), beta(&[m], n, 0));
        }
        assert_eq!(tree_sum(&DecoratedTree::star(&[vec![0]]), n).unwrap(), ri(n as i64));
    }
    // star: (1/n) Σ_b Π β
    for n in 1..=6u32 {
        for ms in [[1u32, 2, 3], [2, 2, 2], [0, 1, 4]] {
            let g2 = DecoratedTree::star(&[vec![ms[0]], vec![ms[1]], vec![ms[2]]]);
            let mut s = Cyc::zero();
            for b in 0..n as i64 {
                s = &s + &(&(&beta(&[ms[0]], n, b) * &beta(&[ms[1]], n, b)) * &beta(&[ms[2]], n, b));
            }
            let want = s.scale(&rq(1, n as i64));
            assert_eq!(Cyc::from_rat(&tree_sum(&g2, n).unwrap()), want);
            let mut brute = Rat::zero();
            for a1 in 0..n {
                for a2 in 0..n {
                    for a3 in 0..n {
                        if (a1 + a2 + a3) % n == 0 {
                            let x = |a: u32| Rat::new(a.into(), n.into());
                            brute += bernoulli_poly(ms[0] as usize, &x(a1))
                                * bernoulli_poly(ms[1] as usize, &x(a2))
                                * bernoulli_poly(ms[2] as usize, &x(a3));
                        }
                    }
                }
            }
            assert_eq!(tree_sum(&g2, n).unwrap(), brute);
        }
    }
}

#[test]
fn tree_sum_routes_agree_with_naive_loop() {
    let trees = vec![
        DecoratedTree::star(&[vec![2], vec![1, 3], vec![4]]),
        gamma3(&[&[1, 2], &[3], &[2], &[1], &[2, 2]]),
        gamma3(&[&[2], &[2], &[2], &[2], &[2]]),
        DecoratedTree::new((0..4).collect(), vec![e(0, 1, &[1]), e(1, 2, &[2]), e(2, 3, &[3])]).unwrap(),
    ];
    for t in &trees {
        for n in 1..=6 {
            let v = tree_sum(t, n).unwrap();
            assert_eq!(v, naive_tree_sum(t, n), "n={n}");
            assert_eq!(v, tree_sum_fourier(t, n).unwrap(), "n={n}");
        }
    }
}

#[test]
fn tree_sum_ignores_orientation_and_order() {
    let t = gamma3(&[&[1, 2], &[3], &[2], &[1], &[2, 2]]);
    let mut flipped = t.clone();
    for edge in &mut flipped.edges {
        std::mem::swap(&mut edge.u, &mut edge.v);
    }
    flipped.edges.reverse();
    flipped.vertices.reverse();
    let mut relabelled = t.clone();
    let perm = [5u32, 3, 0, 4, 1, 2];
    for edge in &mut relabelled.edges {
        edge.u = perm[edge.u as usize];
        edge.v = perm[edge.v as usize];
    }
    relabelled.vertices = vec![2, 4, 0, 1, 5, 3];
    for n in 1..=9 {
        let v = tree_sum(&t, n).unwrap();
        assert_eq!(v, tree_sum(&flipped, n).unwrap());
        assert_eq!(v, tree_sum(&relabelled, n).unwrap());
    }
}

#[test]
fn invalid_trees_are_rejected() {
    let cyc = DecoratedTree { vertices: vec![0, 1, 2], edges: vec![e(0, 1, &[1]), e(1, 2, &[1]), e(2, 0, &[1])] };
    assert!(matches!(tree_sum(&cyc, 3), Err(Error::InvalidTree(_))));
    let split = DecoratedTree { vertices: vec![0, 1, 2, 3], edges: vec![e(0, 1, &[1]), e(1, 0, &[1]), e(2, 3, &[1])] };
    assert!(matches!(tree_sum(&split, 3), Err(Error::InvalidTree(_))));
    let empty = DecoratedTree { vertices: vec![0, 1], edges: vec![e(0, 1, &[])] };
    assert!(matches!(tree_sum(&empty, 3), Err(Error::InvalidTree(_))));
}

#[test]
fn tree_sum_laurent_fits() {
    let g1 = DecoratedTree::star(&[vec![2]]);
    let f1 = tree_sum_polynomiality(&g1, &[2, 3, 4, 5, 6], &[7, 8]).unwrap();
    assert_eq!(f1.laurent.coeff(-1), rq(1, 6));
    assert_eq!(f1.laurent.min_exp(), Some(-1));
    assert_eq!(f1.laurent.max_exp(), Some(-1));
    let g2 = DecoratedTree::star(&[vec![2], vec![2], vec![2]]);
    let f2 = tree_sum_polynomiality(&g2, &(2..=10).collect::<Vec<_>>(), &[11, 12]).unwrap();
    assert!(f2.holdout.iter().all(|h| h.ok));
    let g3 = gamma3(&[&[2], &[2], &[2], &[2], &[2]]);
    let f3 = tree_sum_polynomiality(&g3, &(2..=12).collect::<Vec<_>>(), &[13, 14]).unwrap();
    assert!(f3.holdout.iter().all(|h| h.ok));
    // stability under enlarging the fit set
    let wide = tree_sum_polynomiality(&g2, &(2..=14).collect::<Vec<_>>(), &[15]).unwrap();
    assert_eq!(wide.laurent, f2.laurent);
}

#[test]
fn too_small_fit_set_is_reported() {
    let g2 = DecoratedTree::star(&[vec![2], vec![2], vec![2]]);
    assert!(matches!(
        tree_sum_polynomiality(&g2, &[2, 3, 4], &[5]),
        Err(Error::PolynomialityViolation(_))
    ));
}

proptest! {
    #[test]
    fn random_path_trees_match_naive(decs in prop::collection::vec(prop::collection::vec(0u32..4, 1..3), 1..4), n in 1u32..6) {
        let k = decs.len() as u32;
        let edges = decs.iter().enumerate().map(|(i, d)| e(i as u32, i as u32 + 1, d)).collect();
        let t = DecoratedTree::new((0..=k).collect(), edges).unwrap();
        prop_assert_eq!(tree_sum(&t, n).unwrap(), naive_tree_sum(&t, n));
    }

    #[test]
    fn beta_residue_sum(ms in prop::collection::vec(0u32..5, 0..3), n in 1u32..8) {
        let total = (0..n as i64).fold(Cyc::zero(), |acc, b| &acc + &beta(&ms, n, b));
        let want = ms.iter().fold(ri(n as i64), |acc, &m| acc * bernoulli_number(m as usize));
        prop_assert_eq!(total, Cyc::from_rat(&want));
    }
}
