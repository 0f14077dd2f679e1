use num_traits::{One, Zero};
use proptest::prelude::*;
use qmckay::error::Error;
use qmckay::exact::rat::{ri, rq};
use qmckay::group::{ClassKind, GroupModel};
use qmckay::mckay::{keys_up_to, CorrelatorTable, Potential};
use qmckay::wdvv::*;
use qmckay::{Exec, Rat};
use std::collections::BTreeMap;

fn conj(n: u32, len: u32) -> (Potential, CorrelatorTable) {
    let p = Potential::binary_dihedral(n).unwrap();
    let t = CorrelatorTable::conjectural(&p, len, Exec::Par).unwrap();
    (p, t)
}

fn cls(g: &GroupModel, kind: ClassKind) -> usize {
    g.find_class(kind).unwrap()
}

/// Labeled-background expansion: each background insertion goes left or right.
fn naive_residual(g: &GroupModel, t: &CorrelatorTable, quad: [usize; 4], bg: &[usize]) -> Rat {
    let corr = |xyz: [usize; 3], extra: &[usize]| -> Rat {
        let units = xyz.iter().filter(|&&c| c == 0).count();
        if units > 0 {
            if !extra.is_empty() {
                return Rat::zero();
            }
            return match units {
                3 => rq(1, g.order() as i64),
                1 => {
                    let v: Vec<usize> = xyz.iter().copied().filter(|&c| c != 0).collect();
                    if g.inverse_class(v[0]) == v[1] {
                        rq(1, g.classes[v[0]].centralizer as i64)
                    } else {
                        Rat::zero()
                    }
                }
                _ => Rat::zero(),
            };
        }
        let mut key = vec![0u32; g.num_classes() - 1];
        for &c in xyz.iter().chain(extra) {
            key[c - 1] += 1;
        }
        t.get(&key).cloned().unwrap_or_else(Rat::zero)
    };
    let side = |ij: [usize; 2], kl: [usize; 2]| -> Rat {
        let mut s = Rat::zero();
        for mask in 0u32..(1 << bg.len()) {
            let left: Vec<usize> = (0..bg.len()).filter(|b| mask >> b & 1 == 1).map(|b| bg[b]).collect();
            let right: Vec<usize> = (0..bg.len()).filter(|b| mask >> b & 1 == 0).map(|b| bg[b]).collect();
            for alpha in 0..g.num_classes() {
                let beta = g.inverse_class(alpha);
                let ginv = ri(g.classes[alpha].centralizer as i64);
                s += corr([ij[0], ij[1], alpha], &left) * ginv * corr([beta, kl[0], kl[1]], &right);
            }
        }
        s
    };
    let [i, j, k, l] = quad;
    side([i, j], [k, l]) - side([i, k], [j, l])
}

fn bg_counts(g: &GroupModel, bg: &[usize]) -> Vec<u32> {
    let mut v = vec![0; g.num_classes() - 1];
    for &c in bg {
        v[c - 1] += 1;
    }
    v
}

#[test]
fn pairing_values() {
    for n in 4..=8u32 {
        let g = GroupModel::binary_dihedral(n).unwrap();
        let pr = pairing(&g);
        let b = cls(&g, ClassKind::B);
        let ab = cls(&g, ClassKind::AB);
        assert_eq!(pr.eta[b][g.inverse_class(b)], rq(1, 4));
        assert_eq!(pr.inv[0][0], ri(4 * n as i64 - 8));
        assert_eq!(pr.inv[ab][g.inverse_class(ab)], ri(4));
        let central = cls(&g, ClassKind::A(n - 2));
        assert_eq!(pr.inv[central][central], ri(4 * n as i64 - 8));
        for k in 1..n - 2 {
            let a = cls(&g, ClassKind::A(k));
            assert_eq!(pr.inv[a][a], ri(2 * n as i64 - 4));
            assert_eq!(pr.eta[a][a], rq(1, 2 * n as i64 - 4));
        }
        assert_eq!(pr.is_diagonal(), n % 2 == 0);
        // η and its inverse are inverse matrices
        let k = g.num_classes();
        for r in 0..k {
            for c in 0..k {
                let s: Rat = (0..k).map(|m| &pr.eta[r][m] * &pr.inv[m][c]).sum();
                assert_eq!(s, if r == c { Rat::one() } else { Rat::zero() });
            }
        }
    }
    for n in [5u32, 7, 9] {
        let g = GroupModel::dihedral(n).unwrap();
        let pr = pairing(&g);
        assert!(pr.is_diagonal());
        let b = cls(&g, ClassKind::B);
        assert_eq!(pr.eta[b][b], rq(1, 2));
        assert_eq!(pr.eta[0][0], rq(1, 2 * n as i64 - 4));
        for k in 1..=(n - 3) / 2 {
            let a = cls(&g, ClassKind::A(k));
            assert_eq!(pr.eta[a][a], rq(1, n as i64 - 2));
        }
        assert_eq!(pr.eta[b][0], Rat::zero());
    }
}

#[test]
fn residuals_vanish_on_conjectural_tables() {
    for n in [4u32, 5, 6] {
        let (p, t) = conj(n, 6);
        let bad = residual_failures(&p.group, &t, 3, Exec::Par).unwrap();
        assert!(bad.is_empty(), "n={n}: {:?}", &bad[..bad.len().min(3)]);
    }
}

#[test]
fn residual_matches_labeled_expansion() {
    for n in [4u32, 5, 6] {
        let (p, t) = conj(n, 6);
        let g = &p.group;
        let b = cls(g, ClassKind::B);
        let ab = cls(g, ClassKind::AB);
        let a1 = cls(g, ClassKind::A(1));
        let a2 = cls(g, ClassKind::A(2));
        let cases: Vec<([usize; 4], Vec<usize>)> = vec![
            ([a1, a1, b, ab], vec![]),
            ([a1, a1, b, ab], vec![b]),
            ([a1, b, ab, ab], vec![a2, b]),
            ([b, b, b, b], vec![ab, ab]),
            ([a2, a1, b, a1], vec![a1, ab, b]),
            ([0, a1, b, ab], vec![a1]),
        ];
        for (quad, bg) in cases {
            let inst = WdvvInstance { quad, background: bg_counts(g, &bg) };
            let graded = wdvv_residual(g, &t, &inst).unwrap();
            assert!(graded.len() <= 1);
            let total: Rat = graded.values().cloned().sum();
            assert_eq!(total, naive_residual(g, &t, quad, &bg));
        }
        // the labeled oracle sees a nonzero value once the table is broken
        let mut broken = t.clone();
        let key = bg_counts(g, &[a1, a1, b, ab]);
        *broken.entries.get_mut(&key).unwrap() += Rat::one();
        assert!(!naive_residual(g, &broken, [a1, a1, b, ab], &[b, ab]).is_zero()
            || !naive_residual(g, &broken, [a1, b, a1, ab], &[b, ab]).is_zero()
            || !naive_residual(g, &broken, [a1, a1, b, b], &[ab, ab]).is_zero());
    }
}

#[test]
fn residual_degree_is_uniform() {
    let (p, t) = conj(5, 5);
    for inst in all_instances(&p.group, 1).into_iter().chain(all_instances(&p.group, 0)) {
        let r = wdvv_residual(&p.group, &t, &inst).unwrap();
        assert!(r.is_empty(), "{inst:?}");
    }
    // a perturbed entry shows up at the bulk degree 2
    let mut t = t;
    let g = &p.group;
    let key = bg_counts(g, &[cls(g, ClassKind::A(1)), cls(g, ClassKind::A(1)), cls(g, ClassKind::B), cls(g, ClassKind::AB)]);
    *t.entries.get_mut(&key).unwrap() += Rat::one();
    let bad = residual_failures(g, &t, 1, Exec::Seq).unwrap();
    assert!(!bad.is_empty());
    assert!(bad.iter().all(|(_, r)| r.keys().all(|&d| d == 2)));
}

#[test]
fn mixed_quad_at_zero_background() {
    let (p, t) = conj(4, 4);
    let g = &p.group;
    let inst = WdvvInstance {
        quad: [cls(g, ClassKind::A(1)), cls(g, ClassKind::A(1)), cls(g, ClassKind::B), cls(g, ClassKind::AB)],
        background: vec![0; g.num_classes() - 1],
    };
    assert!(wdvv_residual(g, &t, &inst).unwrap().is_empty());
}

#[test]
fn missing_correlator_is_reported() {
    let (p, t) = conj(4, 4);
    let g = &p.group;
    let mut short = t.clone();
    short.entries.retain(|k, _| k.iter().sum::<u32>() == 3);
    let inst = WdvvInstance {
        quad: [cls(g, ClassKind::A(1)), cls(g, ClassKind::A(1)), cls(g, ClassKind::B), cls(g, ClassKind::AB)],
        background: bg_counts(g, &[cls(g, ClassKind::B)]),
    };
    assert!(matches!(wdvv_residual(g, &short, &inst), Err(Error::MissingCorrelator(_))));
    assert!(wdvv_residual(g, &t, &inst).unwrap().is_empty());
}

#[test]
fn solver_reproduces_formula() {
    for (n, len) in [(4u32, 5u32), (6, 4), (5, 4), (5, 5), (6, 5)] {
        for mode in [Mode::Paper, Mode::Generic] {
            let c = solver_equals_formula(n, len, mode, false, Exec::Par).unwrap();
            assert!(c.passed(), "n={n} L={len} {mode:?}: {:?}", c.mismatches);
            assert!(c.stats.iter().all(|s| s.rank == s.unknowns));
        }
    }
}

#[test]
fn odd_n_restriction_route() {
    for n in [5u32, 7] {
        for mode in [Mode::Paper, Mode::Generic] {
            let c = solver_equals_formula(n, if n == 5 { 6 } else { 5 }, mode, true, Exec::Par).unwrap();
            assert!(c.passed(), "n={n} {mode:?}: {:?}", c.mismatches);
        }
    }
    assert!(matches!(
        solver_equals_formula(6, 4, Mode::Paper, true, Exec::Seq),
        Err(Error::UnsupportedPair(_))
    ));
}

#[test]
fn seeds_pass_through_and_missing_seeds_fail() {
    let (p, t) = conj(4, 4);
    let seeds = seed_correlators(&p.group, &t, 4).unwrap();
    let rep = induction_solve(&p.group, &seeds, 4, Mode::Paper, Exec::Seq).unwrap();
    for (k, v) in &t.entries {
        if k.iter().sum::<u32>() == 3 {
            assert_eq!(rep.table.get(k), Some(v));
        }
    }
    // seeds hold no free keys
    let b = cls(&p.group, ClassKind::B) - 1;
    let a1 = cls(&p.group, ClassKind::A(1)) - 1;
    assert!(seeds.table.entries.keys().all(|k| k.iter().sum::<u32>() == 3 || k[b] == 0 || k[a1] == 0));
    let mut thin = seeds.clone();
    let pure_b: Vec<u32> = (0..p.group.num_classes() - 1).map(|c| if c == b { 4 } else { 0 }).collect();
    thin.table.entries.remove(&pure_b);
    assert!(matches!(
        induction_solve(&p.group, &thin, 4, Mode::Paper, Exec::Seq),
        Err(Error::MissingSeed(_))
    ));
}

#[test]
fn inconsistent_seeds_are_rejected() {
    let (p, t) = conj(4, 5);
    let mut seeds = seed_correlators(&p.group, &t, 5).unwrap();
    let b = cls(&p.group, ClassKind::B) - 1;
    let ab = cls(&p.group, ClassKind::AB) - 1;
    let key: Vec<u32> = (0..p.group.num_classes() - 1).map(|c| if c == b { 4 } else { 0 }).collect();
    *seeds.table.entries.get_mut(&key).unwrap() += Rat::one();
    // breaks the b ↔ ab symmetry, which no table satisfying it can absorb
    assert!(key[ab] == 0);
    let r = induction_solve(&p.group, &seeds, 5, Mode::Generic, Exec::Seq);
    assert!(matches!(r, Err(Error::Mismatch(_))), "{r:?}");
}

#[test]
fn equation_order_does_not_matter() {
    let (p, t) = conj(6, 5);
    let seeds = seed_correlators(&p.group, &t, 5).unwrap();
    let base = induction_solve(&p.group, &seeds, 5, Mode::Generic, Exec::Seq).unwrap().table;
    for order in [RowOrder::Reversed, RowOrder::Shuffled(7), RowOrder::Shuffled(101)] {
        for mode in [Mode::Paper, Mode::Generic] {
            let other = induction_solve_ordered(&p.group, &seeds, 5, mode, Exec::Par, order).unwrap().table;
            assert_eq!(other, base);
        }
    }
}

#[test]
fn seq_and_par_agree() {
    let (p, t) = conj(5, 5);
    let seeds = seed_correlators(&p.group, &t, 5).unwrap();
    let a = induction_solve(&p.group, &seeds, 5, Mode::Generic, Exec::Seq).unwrap();
    let b = induction_solve(&p.group, &seeds, 5, Mode::Generic, Exec::Par).unwrap();
    assert_eq!(a.table, b.table);
}

#[test]
fn phi_orbits() {
    use OrbitType::*;
    assert_eq!(phi_orbit_structure(4, PhiPath::BinaryDihedral).unwrap(), vec![(1, ReachesCentral)]);
    assert_eq!(
        phi_orbit_structure(6, PhiPath::BinaryDihedral).unwrap(),
        vec![(1, ReachesCentral), (2, ReachesCentral), (3, ReachesCentral)]
    );
    assert_eq!(
        phi_orbit_structure(8, PhiPath::BinaryDihedral).unwrap(),
        vec![(1, Tail), (2, Tail), (3, ReachesCentral), (4, Fixed), (5, Tail)]
    );
    // n = 12: 1→2→4→8→4, 3→6→12→... lands on 10 = n−2
    let s12 = phi_orbit_structure(12, PhiPath::BinaryDihedral).unwrap();
    assert_eq!(s12.iter().find(|(i, _)| *i == 5).unwrap().1, ReachesCentral);
    // n = 9: 2→4→6→2 with tails 1, 3, 5
    assert_eq!(
        phi_orbit_structure(9, PhiPath::BinaryDihedral).unwrap(),
        vec![(1, Tail), (2, Cyclic), (3, Tail), (4, Cyclic), (5, Tail), (6, Cyclic)]
    );
    assert_eq!(phi_orbit_structure(5, PhiPath::DihedralOdd).unwrap(), vec![(1, Fixed)]);
    assert_eq!(phi_orbit_structure(7, PhiPath::DihedralOdd).unwrap(), vec![(1, Cyclic), (2, Cyclic)]);
    assert!(matches!(phi_orbit_structure(3, PhiPath::BinaryDihedral), Err(Error::ParamTooSmall(_))));
    assert!(matches!(phi_orbit_structure(6, PhiPath::DihedralOdd), Err(Error::ParamTooSmall(_))));
}

/// Independent construction of `4I − P_φ` and the expected orbit determinants.
fn band_oracle(n: u32) -> (Vec<Vec<Rat>>, Vec<Vec<u32>>) {
    let m = ((n - 3) / 2) as usize;
    let f = |i: u32| {
        let j = (2 * i) % (n - 2);
        j.min(n - 2 - j)
    };
    let mut mat = vec![vec![Rat::zero(); m]; m];
    for i in 1..=m as u32 {
        mat[i as usize - 1][i as usize - 1] += ri(4);
        mat[i as usize - 1][f(i) as usize - 1] -= ri(1);
    }
    let mut seen = vec![false; m + 1];
    let mut orbits = Vec::new();
    for i in 1..=m as u32 {
        if seen[i as usize] {
            continue;
        }
        let mut o = vec![];
        let mut j = i;
        while !seen[j as usize] {
            seen[j as usize] = true;
            o.push(j);
            j = f(j);
        }
        orbits.push(o);
    }
    (mat, orbits)
}

#[test]
fn dn_band_matrices() {
    for n in [5u32, 7, 9, 11, 13] {
        let g = GroupModel::dihedral(n).unwrap();
        let k = g.num_classes() - 1;
        let (oracle, orbits) = band_oracle(n);
        for bg in keys_up_to(k, 2).into_iter().filter(|b| b.iter().sum::<u32>() <= 2).take(12).chain([vec![1; k]]) {
            let bs = dn_band_matrix(n, &bg).unwrap();
            assert!(bs.is_band(n));
            assert_eq!(bs.matrix, oracle, "n={n} bg={bg:?}");
            let canon = |o: &[u32]| {
                let mut o = o.to_vec();
                o.sort();
                o
            };
            let mut got: Vec<(Vec<u32>, Rat)> =
                bs.orbits.iter().map(|o| canon(o)).zip(bs.orbit_determinants.iter().cloned()).collect();
            got.sort();
            let mut want: Vec<(Vec<u32>, Rat)> =
                orbits.iter().map(|o| (canon(o), ri(4i64.pow(o.len() as u32) - 1))).collect();
            want.sort();
            assert_eq!(got, want);
        }
        assert!(matches!(dn_band_matrix(n, &vec![0; k]), Err(Error::ParamTooSmall(_))));
    }
}

fn dn_zero_seeds(g: &GroupModel, len: u32) -> SeedSet {
    let mut entries = BTreeMap::new();
    for key in keys_up_to(g.num_classes() - 1, len) {
        let mut c = vec![0];
        c.extend_from_slice(&key);
        let v = if key.iter().sum::<u32>() == 3 { g.frob(&c) } else { Rat::zero() };
        entries.insert(key, v);
    }
    SeedSet {
        table: CorrelatorTable { family: g.family, n: g.n, class_names: vec![], entries },
        restriction_bb: None,
    }
}

#[test]
fn dn_three_point_and_induction() {
    for n in [5u32, 7] {
        let g = GroupModel::dihedral(n).unwrap();
        let seeds = dn_zero_seeds(&g, 6);
        let b = cls(&g, ClassKind::B);
        let t3 = |c: [usize; 3]| {
            let mut v = vec![0; g.num_classes()];
            for x in c {
                v[x] += 1;
            }
            g.frob(&v)
        };
        for k in 1..=(n - 3) / 2 {
            let a = cls(&g, ClassKind::A(k));
            assert_eq!(t3([a, b, b]), Rat::one());
            assert_eq!(t3([0, a, a]), rq(1, n as i64 - 2));
        }
        assert_eq!(t3([0, b, b]), rq(1, 2));
        assert_eq!(t3([0, 0, 0]), rq(1, 2 * n as i64 - 4));
        let paper = induction_solve(&g, &seeds, 6, Mode::Paper, Exec::Par).unwrap();
        let generic = induction_solve(&g, &seeds, 6, Mode::Generic, Exec::Par).unwrap();
        assert_eq!(paper.table, generic.table);
        assert!(residual_failures(&g, &paper.table, 3, Exec::Par).unwrap().is_empty());
    }
    let g = GroupModel::dihedral(8).unwrap();
    let seeds = dn_zero_seeds(&g, 5);
    assert!(matches!(induction_solve(&g, &seeds, 5, Mode::Paper, Exec::Seq), Err(Error::UnsupportedPair(_))));
    let r = induction_solve(&g, &seeds, 5, Mode::Generic, Exec::Seq).unwrap();
    assert!(residual_failures(&g, &r.table, 2, Exec::Par).unwrap().is_empty());
}

#[test]
fn singular_system_is_reported() {
    let mut sys = LinearSystem::new(3);
    sys.add_row([(0, ri(1)), (1, ri(1))].into_iter().collect(), ri(2));
    sys.add_row([(0, ri(2)), (1, ri(2))].into_iter().collect(), ri(4));
    sys.add_row([(2, ri(1))].into_iter().collect(), ri(5));
    assert_eq!(sys.rank(), 2);
    assert_eq!(sys.inconsistent, 0);
    assert_eq!(sys.free_columns(), vec![1]);
    assert!(matches!(sys.solve(), Err(Error::SingularSystem(_))));
    sys.add_row([(1, ri(1))].into_iter().collect(), ri(-1));
    assert_eq!(sys.solve().unwrap(), vec![ri(3), ri(-1), ri(5)]);
    sys.add_row([(0, ri(1))].into_iter().collect(), ri(0));
    assert_eq!(sys.inconsistent, 1);
}

proptest! {
    #[test]
    fn elimination_is_order_independent(
        sol in prop::collection::vec(-5i64..6, 4),
        rows in prop::collection::vec(prop::collection::vec(-3i64..4, 4), 4..9),
        rot in 0usize..9,
    ) {
        let mk = |r: &Vec<i64>| {
            let row: BTreeMap<usize, Rat> = r.iter().enumerate().map(|(c, v)| (c, ri(*v))).collect();
            let rhs: Rat = r.iter().zip(&sol).map(|(a, x)| ri(a * x)).sum();
            (row, rhs)
        };
        let mut a = LinearSystem::new(4);
        let mut b = LinearSystem::new(4);
        for r in &rows { let (row, rhs) = mk(r); a.add_row(row, rhs); }
        let mut rr = rows.clone();
        rr.rotate_left(rot % rows.len());
        rr.reverse();
        for r in &rr { let (row, rhs) = mk(r); b.add_row(row, rhs); }
        prop_assert_eq!(a.rank(), b.rank());
        prop_assert_eq!(a.inconsistent, 0);
        if a.is_full_rank() {
            let want: Vec<Rat> = sol.iter().map(|v| ri(*v)).collect();
            prop_assert_eq!(a.solve().unwrap(), want.clone());
            prop_assert_eq!(b.solve().unwrap(), want);
        }
    }

    #[test]
    fn dihedral_phi_is_a_permutation(half in 1u32..20) {
        let n = 2 * half + 3;
        let dom: Vec<u32> = (1..=(n - 3) / 2).collect();
        let mut img: Vec<u32> = dom.iter().map(|&i| phi(PhiPath::DihedralOdd, n, i)).collect();
        img.sort();
        prop_assert_eq!(img, dom);
        let s = phi_orbit_structure(n, PhiPath::DihedralOdd).unwrap();
        prop_assert!(s.iter().all(|(_, t)| matches!(t, OrbitType::Fixed | OrbitType::Cyclic)));
    }
}
